use ordauto::document::Document;
use ordauto::hier::{hnf_to_ordinal, ordinal_to_hnf};
use ordauto::structures::{build_ln, oracle_in_in};
use ordauto::tree::{encode_word_tree, find_run, hnf_to_tree_automaton, verify_run, DEFAULT_SCC_CAP};
use ordauto::{Alphabet, Budget, HierWord};

const WORDS: &[&str] = &[
    "<[<0|1>]|[<1|0>]>",
    "<[<ε|0>]|[<ε|1>]>",
    "<[]|[<0|1>]>",
    "<[<1|1>]|[<ε|0>]>",
    "<[<ε|0>]|[<0|1>,<ε|1>]>",
    "<[<ε|1>]|[<ε|0>]>",
    "<[<ε|1>,<0|1>]|[<ε|0>,<1|0>]>",
];

fn words() -> Vec<HierWord> {
    WORDS
        .iter()
        .map(|w| HierWord::parse(w, &Alphabet::binary()).unwrap())
        .collect()
}

#[test]
fn ordinal_round_trip_keeps_the_language() {
    let l2 = build_ln(2).unwrap();
    let ord = hnf_to_ordinal(&l2, 10_000).unwrap();
    let back = ordinal_to_hnf(&ord, &Budget::default()).unwrap();
    for w in words() {
        let expected = oracle_in_in(&w, 2).unwrap();
        assert_eq!(l2.accepts(&w).unwrap(), expected, "{}", w.display(&Alphabet::binary()));
        assert_eq!(ord.accepts(&w).unwrap(), expected);
        assert_eq!(back.accepts(&w).unwrap(), expected);
    }
}

#[test]
fn documents_survive_printing() {
    let l2 = build_ln(2).unwrap();
    let co = l2.complement(&Budget::default()).unwrap();
    for a in [l2, co] {
        let text = Document::Hnf(a.clone()).print();
        let parsed = match Document::parse(&text).unwrap() {
            Document::Hnf(h) => h,
            other => panic!("parsed a {}", other.kind()),
        };
        assert_eq!(Document::Hnf(parsed.clone()).print(), text);
        for w in words() {
            assert_eq!(parsed.accepts(&w).unwrap(), a.accepts(&w).unwrap());
        }
    }
}

#[test]
fn tree_runs_match_membership() {
    let b = Alphabet::binary();
    let l2 = build_ln(2).unwrap();
    let m = hnf_to_tree_automaton(&l2, "#", 10_000).unwrap();
    for w in words() {
        let tree = encode_word_tree(&w, &b, "#").unwrap();
        let run = find_run(&tree, &m, None, DEFAULT_SCC_CAP).unwrap();
        assert_eq!(run.is_some(), l2.accepts(&w).unwrap(), "{}", w.display(&b));
        if let Some(cert) = run {
            assert!(verify_run(&tree, &m, &cert, DEFAULT_SCC_CAP).unwrap());
            let text = Document::Certificate(cert).print();
            match Document::parse(&text).unwrap() {
                Document::Certificate(c) => assert!(verify_run(&tree, &m, &c, DEFAULT_SCC_CAP).unwrap()),
                other => panic!("parsed a {}", other.kind()),
            }
        }
    }
}
