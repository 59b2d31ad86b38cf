//! The closed PDDL 3.1 keyword sets. Comparisons ignore ASCII case.

pub const DOMAIN_SECTIONS: &[&str] = &[
    ":requirements",
    ":types",
    ":constants",
    ":predicates",
    ":functions",
    ":constraints",
    ":action",
    ":durative-action",
    ":derived",
];

pub const PROBLEM_SECTIONS: &[&str] = &[
    ":domain",
    ":requirements",
    ":objects",
    ":init",
    ":goal",
    ":constraints",
    ":metric",
];

pub const ACTION_BODY: &[&str] = &[":parameters", ":precondition", ":effect"];

pub const DURATIVE_BODY: &[&str] = &[":parameters", ":duration", ":condition", ":effect"];

pub const REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":disjunctive-preconditions",
    ":equality",
    ":existential-preconditions",
    ":universal-preconditions",
    ":quantified-preconditions",
    ":conditional-effects",
    ":fluents",
    ":numeric-fluents",
    ":object-fluents",
    ":adl",
    ":durative-actions",
    ":duration-inequalities",
    ":continuous-effects",
    ":derived-predicates",
    ":timed-initial-literals",
    ":preferences",
    ":constraints",
    ":action-costs",
];

fn member(set: &[&str], word: &str) -> bool {
    set.iter().any(|k| k.eq_ignore_ascii_case(word))
}

pub fn is_section(word: &str) -> bool {
    member(DOMAIN_SECTIONS, word) || member(PROBLEM_SECTIONS, word)
}

pub fn is_action_body(word: &str) -> bool {
    member(ACTION_BODY, word) || member(DURATIVE_BODY, word)
}

/// Sections that own `:parameters`-style bodies.
pub fn is_structure(word: &str) -> bool {
    word.eq_ignore_ascii_case(":action") || word.eq_ignore_ascii_case(":durative-action")
}

pub fn is_requirement(word: &str) -> bool {
    member(REQUIREMENTS, word)
}

/// Any keyword of the language.
pub fn is_known(word: &str) -> bool {
    is_section(word) || is_action_body(word) || is_requirement(word)
}

/// Closest candidate within edit distance 2.
pub fn near_miss<'k>(word: &str, candidates: &[&'k str]) -> Option<&'k str> {
    let word = word.to_ascii_lowercase();
    candidates
        .iter()
        .map(|k| (strsim::levenshtein(&word, k), *k))
        .filter(|(d, _)| (1..=2).contains(d))
        .min_by_key(|(d, _)| *d)
        .map(|(_, k)| k)
}

/// Every keyword, for near-miss suggestions outside a specific context.
pub fn all() -> impl Iterator<Item = &'static str> {
    DOMAIN_SECTIONS
        .iter()
        .chain(PROBLEM_SECTIONS)
        .chain(DURATIVE_BODY)
        .chain(ACTION_BODY)
        .chain(REQUIREMENTS)
        .copied()
}

pub fn near_miss_any(word: &str) -> Option<&'static str> {
    let all: Vec<&'static str> = all().collect();
    near_miss(word, &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn misspellings_find_their_keyword() {
        assert_eq!(near_miss(":actoin", DOMAIN_SECTIONS), Some(":action"));
        assert_eq!(near_miss(":PREDICATE", DOMAIN_SECTIONS), Some(":predicates"));
        assert_eq!(near_miss(":zzz", DOMAIN_SECTIONS), None);
        assert_eq!(near_miss(":action", DOMAIN_SECTIONS), None);
    }

    #[test]
    fn membership_ignores_case() {
        assert!(is_section(":Types"));
        assert!(is_action_body(":duration"));
        assert!(is_requirement(":ADL"));
        assert!(!is_known(":actoin"));
    }
}
