use pddl_forge_core::printer::{print_domain, print_problem};
use pddl_forge_core::strategies;
use pddl_forge_core::{parse_domain, parse_problem};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn domains_survive_print_and_parse(d in strategies::domain()) {
        let text = print_domain(&d).unwrap();
        let back = parse_domain(&text);
        prop_assert!(back.diagnostics.is_empty(), "{text}\n{:#?}", back.diagnostics);
        prop_assert_eq!(&back.ast, &d, "{}", text);
        prop_assert_eq!(print_domain(&back.ast).unwrap(), text);
    }

    #[test]
    fn problems_survive_print_and_parse(p in strategies::problem()) {
        let text = print_problem(&p).unwrap();
        let back = parse_problem(&text);
        prop_assert!(back.diagnostics.is_empty(), "{text}\n{:#?}", back.diagnostics);
        prop_assert_eq!(&back.ast, &p, "{}", text);
        prop_assert_eq!(print_problem(&back.ast).unwrap(), text);
    }
}
