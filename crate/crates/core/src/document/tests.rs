use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::budget::Budget;
use crate::structures::{build_bn, build_ln, build_omega_omega};
use crate::testing::{random_buchi, random_hnf, random_muller, random_ordinal, random_word};
use crate::tree::{encode_word_tree, find_run, hnf_to_tree_automaton, DEFAULT_SCC_CAP};

/// Print, parse and print again: the texts agree.
fn stable(d: &Document) -> Document {
    let text = d.print();
    let back = Document::parse(&text).unwrap();
    assert_eq!(back.print(), text);
    back
}

#[test]
fn state_names_are_padded() {
    assert_eq!(state_names(3), ["q0", "q1", "q2"]);
    assert_eq!(state_names(11)[0], "q00");
    assert_eq!(state_names(11)[10], "q10");
    assert_eq!(state_names(1), ["q0"]);
}

#[test]
fn omega_and_ordinal_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let b = Alphabet::binary();
    for _ in 0..30 {
        let a = random_buchi(&mut rng, &b, 5);
        match stable(&Document::Omega(a.clone())) {
            Document::Omega(back) => assert_eq!(back, a),
            other => panic!("kind {}", other.kind()),
        }
        let m = random_muller(&mut rng, &b, 4);
        let Document::Omega(back) = stable(&Document::Omega(m.clone())) else {
            panic!()
        };
        let words: Vec<_> = (0..20)
            .map(|_| crate::testing::random_lasso(&mut rng, &b, 3, 3))
            .collect();
        for w in &words {
            assert_eq!(back.accepts(w).unwrap(), m.accepts(w).unwrap());
        }
        let o = random_ordinal(&mut rng, &b, 4, 2, false);
        let Document::Ordinal(back) = stable(&Document::Ordinal(o.clone())) else {
            panic!()
        };
        assert_eq!(back, o);
    }
}

#[test]
fn acceptors_and_words_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let b = Alphabet::binary();
    for level in 1..=3 {
        for _ in 0..10 {
            let a = random_hnf(&mut rng, &b, level, 3);
            let Document::Hnf(back) = stable(&Document::Hnf(a.clone())) else {
                panic!()
            };
            assert_eq!(back, a);
            let w = random_word(&mut rng, &b, level);
            let Document::Word { word, alphabet } = stable(&word_document(&w, &b)) else {
                panic!()
            };
            assert_eq!(word, w);
            assert_eq!(alphabet, b);
        }
    }
    let l3 = build_ln(3).unwrap();
    let Document::Hnf(back) = stable(&Document::Hnf(l3.clone())) else {
        panic!()
    };
    assert!(back.is_partitioned());
    assert_eq!(back, l3);
}

#[test]
fn presentations_and_formulas_round_trip() {
    let budget = Budget::default();
    for p in [build_bn(1).unwrap(), build_omega_omega().unwrap()] {
        let Document::Presentation(back) = stable(&Document::Presentation(p.clone())) else {
            panic!()
        };
        assert_eq!(back.signature(), p.signature());
        assert!(back.check(&budget).unwrap().passed());
    }
    let f = Formula::parse("A x. E y. (Sub(y, x) & ~(y = x))").unwrap();
    let Document::Formula(back) = stable(&Document::Formula(f.clone())) else {
        panic!()
    };
    assert_eq!(back, f);
}

#[test]
fn trees_automata_and_certificates_round_trip() {
    let b = Alphabet::binary();
    let l2 = build_ln(2).unwrap();
    let m = hnf_to_tree_automaton(&l2, "#", 4096).unwrap();
    let Document::TreeAuto(back) = stable(&Document::TreeAuto(m.clone())) else {
        panic!()
    };
    assert_eq!(back, m);
    let w = HierWord::parse("<[<1|0>]|[<ε|0>]>", &b).unwrap();
    let t = encode_word_tree(&w, &b, "#").unwrap();
    let Document::Tree(back) = stable(&Document::Tree(t.clone())) else {
        panic!()
    };
    assert_eq!(back, t);
    let cert = find_run(&t, &m, None, DEFAULT_SCC_CAP).unwrap().unwrap();
    let Document::Certificate(back) = stable(&Document::Certificate(cert.clone())) else {
        panic!()
    };
    assert_eq!(back, cert);
}

#[test]
fn malformed_documents_are_schema_errors() {
    let bad = [
        "not json",
        "{}",
        r#"{"kind": "omega", "version": 2}"#,
        r#"{"kind": "blob", "version": 1}"#,
        r#"{"kind": "omega", "version": 1, "alphabet": ["0"], "states": ["q0"], "initial": "q1", "delta": [], "acceptance": "buchi", "final": []}"#,
        r#"{"kind": "word", "version": 1, "alphabet": ["0"], "level": 1, "u": [], "v": ["2"]}"#,
    ];
    for text in bad {
        assert!(Document::parse(text).is_err(), "{text}");
    }
    assert!(matches!(Document::parse("[1]"), Err(Error::Schema(_))));
}
