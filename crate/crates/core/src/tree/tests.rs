use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::budget::Budget;
use crate::hier::HnfAcceptor;
use crate::omega::{Acceptance, OmegaAcceptor, DEFAULT_FAMILY_CAP};
use crate::structures::build_ln;
use crate::testing::{random_hnf, random_word};
use crate::word::HierWord;

const PAD: &str = "#";

fn word(text: &str) -> HierWord {
    HierWord::parse(text, &Alphabet::binary()).unwrap()
}

/// Label of `t^w` at `path`, straight from the recursion on `w`.
fn label_oracle(w: &HierWord, path: &[u8]) -> Option<Letter> {
    let k = path.iter().take_while(|&&c| c == b'l').count();
    match w {
        HierWord::Lasso(l) if k == path.len() => Some(l.at(k)),
        HierWord::Lasso(_) => None,
        HierWord::Spine { .. } if k == path.len() => None,
        HierWord::Spine { .. } => label_oracle(w.block(k), &path[k + 1..]),
    }
}

fn paths(max: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max {
        frontier = frontier
            .iter()
            .flat_map(|p| [format!("{p}l"), format!("{p}r")])
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

fn accepts_tree(t: &RegularTree, m: &MullerTreeAutomaton) -> bool {
    match find_run(t, m, None, DEFAULT_SCC_CAP).unwrap() {
        Some(cert) => {
            assert!(verify_run(t, m, &cert, DEFAULT_SCC_CAP).unwrap());
            true
        }
        None => false,
    }
}

fn everything(alphabet: &Alphabet) -> MullerTreeAutomaton {
    let delta = alphabet.letters().map(|a| (0, a, 0, 0));
    MullerTreeAutomaton::new(alphabet.clone(), 1, 0, delta, [[0].into_iter().collect()]).unwrap()
}

#[test]
fn encoding_examples() {
    let b = Alphabet::binary();
    let t = encode_word_tree(&word("<1|0>"), &b, PAD).unwrap();
    let pad = t.alphabet().index_of(PAD).unwrap();
    assert_eq!(t.at("").unwrap(), 1);
    for k in 1..5 {
        assert_eq!(t.at(&"l".repeat(k)).unwrap(), 0);
        assert_eq!(t.at(&format!("{}r", "l".repeat(k))).unwrap(), pad);
    }
    assert_eq!(t.at("rlrl").unwrap(), pad);

    let w = word("<[<0|1>]|[<ε|0>,<1|1>]>");
    let t = encode_word_tree(&w, &b, PAD).unwrap();
    for k in 0..6 {
        let spine = "l".repeat(k);
        assert_eq!(t.at(&spine).unwrap(), pad);
        let block = w.block(k);
        for j in 0..4 {
            let inner = format!("{spine}r{}", "l".repeat(j));
            assert_eq!(t.at(&inner).unwrap(), block.as_lasso().unwrap().at(j));
        }
    }

    let c = encode_word_tree(&word("<ε|1>"), &b, PAD).unwrap();
    assert_eq!(c.len(), 2);
    assert!(validate_encoding(&c, &b, PAD, 1));
    assert!(!validate_encoding(&c, &b, PAD, 2));
}

#[test]
fn encodings_follow_the_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let b = Alphabet::binary();
    let all = paths(7);
    for level in 1..=3 {
        for _ in 0..40 {
            let w = random_word(&mut rng, &b, level);
            let t = encode_word_tree(&w, &b, PAD).unwrap();
            let pad = t.alphabet().index_of(PAD).unwrap();
            assert!(validate_encoding(&t, &b, PAD, level));
            for p in &all {
                let expected = label_oracle(&w, p.as_bytes()).unwrap_or(pad);
                assert_eq!(t.at(p).unwrap(), expected, "{} at {p}", w.display(&b));
            }
            let distinct = distinct_subexpressions(&w);
            assert!(t.len() <= distinct + 2, "{} nodes for {distinct}", t.len());
        }
    }
}

fn distinct_subexpressions(w: &HierWord) -> usize {
    fn collect<'a>(w: &'a HierWord, seen: &mut Vec<&'a HierWord>) {
        if seen.contains(&w) {
            return;
        }
        seen.push(w);
        if let HierWord::Spine { .. } = w {
            for b in w.distinct_blocks() {
                collect(b, seen);
            }
        }
    }
    let mut seen = Vec::new();
    collect(w, &mut seen);
    // Each lasso contributes its spine positions, each spine its own.
    seen.iter().map(|x| x.shape().0 + x.shape().1).sum()
}

#[test]
fn malformed_trees_fail_validation() {
    let b = Alphabet::binary();
    let tb = b.with_letter(PAD);
    // Pad on the level-1 spine.
    let t = RegularTree::new(tb.clone(), vec![2, 2], vec![0, 1], vec![1, 1]).unwrap();
    assert!(!validate_encoding(&t, &b, PAD, 1));
    // A letter off the spine.
    let t = RegularTree::new(tb.clone(), vec![0, 1], vec![0, 1], vec![1, 1]).unwrap();
    assert!(!validate_encoding(&t, &b, PAD, 1));
    assert!(RegularTree::new(tb, vec![0], vec![1], vec![0]).is_err());
}

#[test]
fn translation_agrees_with_membership() {
    let b = Alphabet::binary();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 1..=2 {
        let l = build_ln(n).unwrap();
        let m = hnf_to_tree_automaton(&l, PAD, DEFAULT_FAMILY_CAP).unwrap();
        for _ in 0..40 {
            let w = random_word(&mut rng, &b, n);
            let t = encode_word_tree(&w, &b, PAD).unwrap();
            assert_eq!(accepts_tree(&t, &m), l.accepts(&w).unwrap(), "{}", w.display(&b));
        }
    }
}

#[test]
fn translation_of_random_acceptors() {
    let b = Alphabet::binary();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let budget = Budget::default();
    for _ in 0..20 {
        let level = rng.gen_range(1..=2);
        let a = random_hnf(&mut rng, &b, level, 3);
        let m = hnf_to_tree_automaton(&a, PAD, DEFAULT_FAMILY_CAP).unwrap();
        let mut words: Vec<HierWord> = (0..10).map(|_| random_word(&mut rng, &b, level)).collect();
        words.extend(a.witness());
        words.extend(a.complement(&budget).unwrap().witness());
        for w in words {
            let t = encode_word_tree(&w, &b, PAD).unwrap();
            assert_eq!(accepts_tree(&t, &m), a.accepts(&w).unwrap(), "{}", w.display(&b));
        }
    }
}

#[test]
fn non_encodings_are_rejected() {
    let b = Alphabet::binary();
    let tb = b.with_letter(PAD);
    let universal = hnf_to_tree_automaton(&HnfAcceptor::universal(&b, 1), PAD, DEFAULT_FAMILY_CAP).unwrap();
    let trees = [
        RegularTree::new(tb.clone(), vec![2, 2], vec![0, 1], vec![1, 1]).unwrap(),
        RegularTree::new(tb.clone(), vec![0, 1], vec![0, 1], vec![1, 1]).unwrap(),
        RegularTree::new(tb.clone(), vec![0, 2, 1], vec![0, 2, 2], vec![1, 2, 2]).unwrap(),
    ];
    for t in &trees {
        assert!(!validate_encoding(t, &b, PAD, 1));
        assert!(!accepts_tree(t, &universal));
    }
    let l2 = build_ln(2).unwrap();
    let m2 = hnf_to_tree_automaton(&HnfAcceptor::universal(&b, 2), PAD, DEFAULT_FAMILY_CAP).unwrap();
    let level1 = encode_word_tree(&word("<ε|0>"), &b, PAD).unwrap();
    assert!(!validate_encoding(&level1, &b, PAD, 2));
    assert!(!accepts_tree(&level1, &m2));
    let _ = l2;
}

#[test]
fn trivial_automata() {
    let b = Alphabet::binary();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let empty = hnf_to_tree_automaton(&HnfAcceptor::empty(&b, 2), PAD, DEFAULT_FAMILY_CAP).unwrap();
    for level in 1..=2 {
        for _ in 0..10 {
            let w = random_word(&mut rng, &b, level);
            let t = encode_word_tree(&w, &b, PAD).unwrap();
            assert!(!accepts_tree(&t, &empty));
            let all = everything(t.alphabet());
            let cert = find_run(&t, &all, None, DEFAULT_SCC_CAP).unwrap().unwrap();
            assert!(verify_run(&t, &all, &cert, DEFAULT_SCC_CAP).unwrap());
        }
    }
    // A complete binary graph with a non-simple component.
    let tb = b.with_letter(PAD);
    let t = RegularTree::new(tb.clone(), vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]).unwrap();
    assert!(accepts_tree(&t, &everything(&tb)));
}

#[test]
fn bad_certificates_are_rejected() {
    let b = Alphabet::binary();
    // Finitely many 1s on the spine.
    let fin = OmegaAcceptor::new(
        b.clone(),
        2,
        0,
        [(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)],
        Acceptance::Buchi([1].into_iter().collect()),
    )
    .unwrap();
    let m = hnf_to_tree_automaton(&HnfAcceptor::base(fin), PAD, DEFAULT_FAMILY_CAP).unwrap();
    let t = encode_word_tree(&word("<1|0>"), &b, PAD).unwrap();
    let cert = find_run(&t, &m, None, DEFAULT_SCC_CAP).unwrap().unwrap();
    assert!(verify_run(&t, &m, &cert, DEFAULT_SCC_CAP).unwrap());

    // Staying in the guessing state forever satisfies every transition
    // but recurs only in a rejected set.
    let guess = m.initial();
    let (root, spine, pad) = (t.node_at("").unwrap(), t.node_at("l").unwrap(), t.node_at("r").unwrap());
    assert_eq!(t.left(spine), spine);
    let stuck = RunCertificate {
        nodes: vec![
            CertNode {
                tree: root,
                state: guess,
                left: 1,
                right: 2,
            },
            CertNode {
                tree: spine,
                state: guess,
                left: 1,
                right: 2,
            },
            CertNode {
                tree: pad,
                state: 0,
                left: 2,
                right: 2,
            },
        ],
    };
    assert!(!verify_run(&t, &m, &stuck, DEFAULT_SCC_CAP).unwrap());

    // A wrong root state and a desynchronized child.
    let mut wrong_root = cert.clone();
    wrong_root.nodes[0].state = 0;
    assert!(!verify_run(&t, &m, &wrong_root, DEFAULT_SCC_CAP).unwrap());
    let mut desync = cert.clone();
    let r = desync.nodes[0].right;
    desync.nodes[0].left = r;
    assert!(verify_run(&t, &m, &desync, DEFAULT_SCC_CAP).is_err());

    let ones = encode_word_tree(&word("<ε|1>"), &b, PAD).unwrap();
    assert!(find_run(&ones, &m, None, DEFAULT_SCC_CAP).unwrap().is_none());
}
