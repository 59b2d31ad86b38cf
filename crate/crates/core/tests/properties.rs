use pddl_forge_core::diagnostic::normalize;
use pddl_forge_core::lint::{classify_and_lint, lint};
use pddl_forge_core::span::LineIndex;
use pddl_forge_core::{tokenize, Code, Diagnostic, Scope};
use proptest::prelude::*;

const SAMPLE: &str = "(define (domain logistics)
  (:requirements :strips :typing :durative-actions)
  (:types truck - vehicle loc)
  (:predicates (at ?v - vehicle ?l - loc) (road ?a ?b - loc))
  (:functions (dist ?a ?b - loc) - number)
  ; drive along a road
  (:durative-action drive
    :parameters (?v - truck ?from ?to - loc)
    :duration (= ?duration (dist ?from ?to))
    :condition (and (at start (at ?v ?from)) (over all (road ?from ?to)))
    :effect (and (at start (not (at ?v ?from))) (at end (at ?v ?to)))))
";

/// PDDL-flavoured text: mostly grammar characters with some noise.
fn pddl_like() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        4 => prop::sample::select(vec![
            "(", ")", " ", "\n", "  ", "define", "domain", ":action", ":parameters", ":effect",
            ":precondition", ":types", "?x", "?y", "-", "and", "not", "(p ?x)", ";c\n", "1.5", ":paramters",
        ])
        .prop_map(str::to_string),
        1 => "[\\PC]{1,3}",
        1 => "[\t\r\u{a0}\u{3000}%&é𝄞]",
    ];
    prop::collection::vec(piece, 0..60).prop_map(|v| v.concat())
}

/// The sample with one random edit.
fn mutated_sample() -> impl Strategy<Value = String> {
    (0..SAMPLE.len(), 0usize..6, "[()%:?a-z \n]{0,3}").prop_map(|(at, del, ins)| {
        let at = (0..=at).rev().find(|&i| SAMPLE.is_char_boundary(i)).unwrap_or(0);
        let end = (at + del).min(SAMPLE.len());
        format!("{}{}{}", &SAMPLE[..at], ins, &SAMPLE[end..])
    })
}

fn arbitrary_text() -> impl Strategy<Value = String> {
    prop_oneof![any::<String>(), pddl_like(), mutated_sample()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lexing_is_lossless(text in arbitrary_text()) {
        let tokens = tokenize(&text);
        let joined: String = tokens.iter().map(|t| t.text.as_str()).collect();
        prop_assert_eq!(&joined, &text);
        let mut offset = 0;
        for t in &tokens {
            prop_assert_eq!(t.span.start_byte, offset);
            prop_assert!(!t.text.is_empty());
            offset = t.span.end_byte;
        }
        prop_assert_eq!(offset, text.len());
    }

    #[test]
    fn token_positions_agree_with_the_line_index(text in arbitrary_text()) {
        let index = LineIndex::new(&text);
        for t in tokenize(&text) {
            prop_assert_eq!(index.position(t.span.start_byte), (t.span.start_line, t.span.start_col));
            prop_assert_eq!(index.position(t.span.end_byte), (t.span.end_line, t.span.end_col));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn diagnostics_are_sound_regions(text in arbitrary_text()) {
        let diags = lint(&text);
        for d in &diags {
            prop_assert!(d.span.start_byte <= d.span.end_byte && d.span.end_byte <= text.len());
            prop_assert!(text.is_char_boundary(d.span.start_byte) && text.is_char_boundary(d.span.end_byte));
        }
        for pair in diags.windows(2) {
            prop_assert!(pair[0].span.start_byte <= pair[1].span.start_byte);
            prop_assert!(!pair[0].span.contains(&pair[1].span), "{:?}", pair);
        }
    }

    #[test]
    fn plain_tokens_are_exactly_those_in_diagnostics(text in arbitrary_text()) {
        let (tokens, diags) = classify_and_lint(&text);
        for st in &tokens {
            let inside = diags.iter().any(|d| d.span.intersects(&st.token.span));
            prop_assert_eq!(st.scope == Scope::Plain, inside, "{:?}", st);
        }
    }
}

fn diag(index: &LineIndex, start: usize, end: usize) -> Diagnostic {
    Diagnostic::error(Code::InvalidSyntax, index.span(start, end), "x")
}

proptest! {
    #[test]
    fn normalize_keeps_outermost_regions(spans in prop::collection::vec((0usize..50, 0usize..10), 0..20)) {
        let text = "x".repeat(64);
        let index = LineIndex::new(&text);
        let input: Vec<Diagnostic> = spans.iter().map(|&(s, l)| diag(&index, s, s + l)).collect();
        let out = normalize(input.clone());
        for d in &out {
            prop_assert!(input.contains(d));
        }
        for d in &input {
            prop_assert!(out.iter().any(|k| k.span.contains(&d.span)), "{:?} lost", d.span);
        }
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                prop_assert!(!a.span.contains(&b.span));
            }
        }
        prop_assert_eq!(normalize(out.clone()), out);
    }
}

#[test]
fn sample_is_clean() {
    assert!(lint(SAMPLE).is_empty(), "{:#?}", lint(SAMPLE));
}
