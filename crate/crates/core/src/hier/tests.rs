use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::alphabet::{LetterMap, TupleAlphabet};
use crate::budget::Budget;
use crate::omega::LassoWord;
use crate::ordinal::OrdinalAutomaton;
use crate::testing::{random_hnf, random_ordinal, random_word};

fn set(xs: &[usize]) -> StateSet {
    xs.iter().copied().collect()
}

fn word(text: &str) -> HierWord {
    HierWord::parse(text, &Alphabet::binary()).unwrap()
}

fn finitely_many_ones(alphabet: &Alphabet) -> OmegaAcceptor {
    let delta = vec![(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)];
    OmegaAcceptor::new(alphabet.clone(), 2, 0, delta, Acceptance::Buchi(set(&[1]))).unwrap()
}

/// Sets of positions of order type below ω^n, by the block recursion.
fn small_sets(n: usize) -> HnfAcceptor {
    let b = Alphabet::binary();
    if n == 1 {
        return HnfAcceptor::base(finitely_many_ones(&b));
    }
    let inner = small_sets(n - 1);
    let co = inner.complement(&Budget::default()).unwrap();
    let top = finitely_many_ones(&Alphabet::synthetic(TOP_LETTER_PREFIX, 2));
    HnfAcceptor::nested(top, vec![inner, co]).unwrap().assume_partitioned()
}

/// Order type below ω^n, decided on the presentation.
fn small_oracle(w: &HierWord) -> bool {
    match w {
        HierWord::Lasso(l) => !l.period().contains(&1),
        HierWord::Spine { period, .. } => period.iter().all(small_oracle),
    }
}

fn zeros_only() -> OrdinalAutomaton {
    OrdinalAutomaton::new(
        Alphabet::binary(),
        2,
        2,
        0,
        vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
        vec![(set(&[0]), 0), (set(&[1]), 1), (set(&[0, 1]), 1)],
        set(&[0]),
    )
    .unwrap()
}

#[test]
fn block_recursion_matches_order_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let b = Alphabet::binary();
    for n in 1..=3 {
        let l = small_sets(n);
        assert!(l.certify_partition(&Budget::default()).unwrap());
        for _ in 0..100 {
            let w = random_word(&mut rng, &b, n);
            assert_eq!(l.accepts(&w).unwrap(), small_oracle(&w), "{}", w.display(&b));
        }
    }
    let l2 = small_sets(2);
    assert!(l2.accepts(&word("<[<ε|1>]|[<ε|0>]>")).unwrap());
    assert!(!l2.accepts(&word("<[]|[<ε|1>]>")).unwrap());
}

#[test]
fn mismatched_operands_rejected() {
    let b = Alphabet::binary();
    let l1 = small_sets(1);
    let l2 = small_sets(2);
    assert!(l1.union(&l2).is_err());
    assert!(l2.accepts(&word("<1|0>")).is_err());
    let other = HnfAcceptor::universal(&Alphabet::new(["a", "b"]).unwrap(), 1);
    assert!(l1.intersect(&other, &Budget::default()).is_err());
    assert!(HnfAcceptor::nested(
        OmegaAcceptor::universal(&Alphabet::synthetic("atom", 2)),
        vec![l1.clone(), l2]
    )
    .is_err());
    assert!(HnfAcceptor::nested(OmegaAcceptor::universal(&Alphabet::synthetic("atom", 2)), vec![l1]).is_err());
    let _ = b;
}

#[test]
fn boolean_operations_are_membership_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let b = Alphabet::binary();
    let budget = Budget::default();
    for level in 1..=3 {
        for _ in 0..15 {
            let x = random_hnf(&mut rng, &b, level, 3);
            let y = random_hnf(&mut rng, &b, level, 3);
            let u = x.union(&y).unwrap();
            let i = x.intersect(&y, &budget).unwrap();
            let c = x.complement(&budget).unwrap();
            for _ in 0..30 {
                let w = random_word(&mut rng, &b, level);
                let (mx, my) = (x.accepts(&w).unwrap(), y.accepts(&w).unwrap());
                assert_eq!(u.accepts(&w).unwrap(), mx || my);
                assert_eq!(i.accepts(&w).unwrap(), mx && my);
                assert_eq!(c.accepts(&w).unwrap(), !mx);
            }
        }
    }
}

#[test]
fn complement_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let b = Alphabet::binary();
    let budget = Budget::default();
    let l2 = small_sets(2);
    let co = l2.complement(&budget).unwrap();
    assert!(co.accepts(&word("<[]|[<ε|1>]>")).unwrap());
    assert!(l2.intersect(&co, &budget).unwrap().is_empty());
    let x = random_hnf(&mut rng, &b, 2, 3);
    let twice = x.complement(&budget).unwrap().complement(&budget).unwrap();
    for _ in 0..100 {
        let w = random_word(&mut rng, &b, 2);
        assert_eq!(twice.accepts(&w).unwrap(), x.accepts(&w).unwrap());
    }
    for level in 1..=3 {
        assert!(HnfAcceptor::universal(&b, level)
            .complement(&budget)
            .unwrap()
            .is_empty());
    }
}

#[test]
fn union_and_intersection_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let b = Alphabet::binary();
    let budget = Budget::default();
    let x = random_hnf(&mut rng, &b, 2, 3);
    let xx = x.union(&x).unwrap();
    let l2 = small_sets(2);
    let with_all = l2.intersect(&HnfAcceptor::universal(&b, 2), &budget).unwrap();
    for _ in 0..100 {
        let w = random_word(&mut rng, &b, 2);
        assert_eq!(xx.accepts(&w).unwrap(), x.accepts(&w).unwrap());
        assert_eq!(with_all.accepts(&w).unwrap(), small_oracle(&w));
    }
}

#[test]
fn emptiness_and_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let b = Alphabet::binary();
    let budget = Budget::default();
    for n in 1..=3 {
        let l = small_sets(n);
        assert!(!l.is_empty());
        assert!(l.accepts(&HierWord::constant(0, n)).unwrap());
        assert!(l.accepts(&l.witness().unwrap()).unwrap());
    }
    for level in 1..=3 {
        for _ in 0..15 {
            let a = random_hnf(&mut rng, &b, level, 3);
            assert!(a
                .intersect(&a.complement(&budget).unwrap(), &budget)
                .unwrap()
                .is_empty());
            match a.witness() {
                Some(w) => assert!(a.accepts(&w).unwrap()),
                None => {
                    for _ in 0..30 {
                        assert!(!a.accepts(&random_word(&mut rng, &b, level)).unwrap());
                    }
                }
            }
        }
    }
    let dead = HnfAcceptor::nested(
        OmegaAcceptor::universal(&Alphabet::synthetic(TOP_LETTER_PREFIX, 1)),
        vec![HnfAcceptor::empty(&b, 1)],
    )
    .unwrap();
    assert!(dead.is_empty());
}

#[test]
fn atoms_of_small_families() {
    let budget = Budget::default();
    let b = Alphabet::binary();
    let l1 = small_sets(1);
    let co = l1.complement(&budget).unwrap();
    let all = HnfAcceptor::universal(&b, 1);
    let (atoms, members) = refine_to_atoms(&[l1.clone(), co], &budget).unwrap();
    assert_eq!(atoms.len(), 2);
    assert_eq!(members, vec![vec![0], vec![1]]);
    let (atoms, members) = refine_to_atoms(&[l1.clone(), all], &budget).unwrap();
    assert_eq!(atoms.len(), 2);
    assert_eq!(members[1], vec![0, 1]);
    assert!(atoms[0].accepts(&word("<1|0>")).unwrap());
    assert!(atoms[1].accepts(&word("<ε|1>")).unwrap());
    let (atoms, members) = refine_to_atoms(&[HnfAcceptor::empty(&b, 1)], &budget).unwrap();
    assert_eq!(atoms.len(), 1);
    assert!(members[0].is_empty());
    assert!(atoms[0].complement(&budget).unwrap().is_empty());
}

#[test]
fn atoms_partition_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let b = Alphabet::binary();
    let budget = Budget::default();
    for level in 1..=2 {
        for _ in 0..5 {
            let family: Vec<HnfAcceptor> = (0..3).map(|_| random_hnf(&mut rng, &b, level, 3)).collect();
            let (atoms, members) = refine_to_atoms(&family, &budget).unwrap();
            let top = OmegaAcceptor::universal(&Alphabet::synthetic(TOP_LETTER_PREFIX, atoms.len()));
            let wrapped = HnfAcceptor::nested(top, atoms.clone()).unwrap();
            assert!(wrapped.certify_partition(&Budget::unlimited()).unwrap());
            for _ in 0..30 {
                let w = random_word(&mut rng, &b, level);
                let hits: Vec<usize> = (0..atoms.len()).filter(|&d| atoms[d].accepts(&w).unwrap()).collect();
                assert_eq!(hits.len(), 1);
                for (i, m) in family.iter().enumerate() {
                    assert_eq!(m.accepts(&w).unwrap(), members[i].contains(&hits[0]));
                }
            }
        }
    }
}

#[test]
fn preimage_and_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let b = Alphabet::binary();
    let pairs = TupleAlphabet::new(&b, 2).unwrap();
    let xor = LetterMap::new(
        pairs.alphabet().clone(),
        b.clone(),
        pairs
            .alphabet()
            .letters()
            .map(|l| {
                let t = pairs.decode(l);
                t[0] ^ t[1]
            })
            .collect(),
    )
    .unwrap();
    let l1 = small_sets(1);
    let same = l1.preimage(&LetterMap::identity(&b)).unwrap();
    let close = l1.preimage(&xor).unwrap();
    let conv = |x: &LassoWord, y: &LassoWord| {
        let (u, v) = (
            x.prefix().len().max(y.prefix().len()),
            x.period().len() * y.period().len(),
        );
        let (x, y) = (x.reshape(u, v), y.reshape(u, v));
        let zip = |a: &[u32], b: &[u32]| {
            a.iter()
                .zip(b)
                .map(|(&p, &q)| pairs.encode(&[p, q]))
                .collect::<Vec<_>>()
        };
        HierWord::Lasso(LassoWord::new(zip(x.prefix(), y.prefix()), zip(x.period(), y.period())).unwrap())
    };
    for _ in 0..100 {
        let w = random_word(&mut rng, &b, 1);
        assert_eq!(same.accepts(&w).unwrap(), small_oracle(&w));
        let (x, y) = (
            crate::testing::random_lasso(&mut rng, &b, 2, 2),
            crate::testing::random_lasso(&mut rng, &b, 2, 2),
        );
        let differ_finitely = (0..x.prefix().len() + y.prefix().len() + 8 * x.period().len() * y.period().len())
            .skip(x.prefix().len().max(y.prefix().len()))
            .all(|i| x.at(i) == y.at(i));
        assert_eq!(close.accepts(&conv(&x, &y)).unwrap(), differ_finitely);
    }

    // Pairs (x, y) with y the bitwise negation of x and x ∈ L1.
    let flip = OmegaAcceptor::new(
        pairs.alphabet().clone(),
        1,
        0,
        [(0, pairs.encode(&[0, 1]), 0), (0, pairs.encode(&[1, 0]), 0)],
        Acceptance::Buchi(set(&[0])),
    )
    .unwrap();
    let rel = HnfAcceptor::base(flip)
        .intersect(
            &l1.preimage(&pairs.selection(&[0]).unwrap()).unwrap(),
            &Budget::default(),
        )
        .unwrap();
    let first = rel.project(&pairs.selection(&[0]).unwrap()).unwrap();
    let second = rel.project(&pairs.selection(&[1]).unwrap()).unwrap();
    for _ in 0..100 {
        let w = random_word(&mut rng, &b, 1);
        let negated = w.map(&|l| 1 - l);
        assert_eq!(first.accepts(&w).unwrap(), small_oracle(&w));
        assert_eq!(second.accepts(&w).unwrap(), small_oracle(&negated));
    }
}

/// Projection is sound against pairings with explicitly enumerated
/// partners: if some small `y` pairs with `x`, the projection accepts `x`.
#[test]
fn projection_covers_enumerated_pairings() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let b = Alphabet::binary();
    let pairs = TupleAlphabet::new(&b, 2).unwrap();
    let first = pairs.selection(&[0]).unwrap();
    let blocks: Vec<HierWord> = ["<ε|0>", "<ε|1>", "<1|0>", "<0|1>", "<ε|01>"]
        .iter()
        .map(|t| word(t))
        .collect();
    for _ in 0..10 {
        let rel = random_hnf(&mut rng, pairs.alphabet(), 2, 2);
        let proj = rel.project(&first).unwrap();
        for _ in 0..5 {
            let x = random_word(&mut rng, &b, 2);
            let (u, v) = x.shape();
            let mut found = false;
            for yu in 0..blocks.len().pow(u as u32) {
                for yv in 0..blocks.len().pow(v as u32) {
                    let pick = |mut code: usize, len: usize| {
                        (0..len)
                            .map(|_| {
                                let b = blocks[code % blocks.len()].clone();
                                code /= blocks.len();
                                b
                            })
                            .collect::<Vec<_>>()
                    };
                    let y = HierWord::spine(pick(yu, u), pick(yv, v)).unwrap();
                    let zipped = zip_words(&pairs, &x, &y);
                    if rel.accepts(&zipped).unwrap() {
                        found = true;
                    }
                }
            }
            if found {
                assert!(proj.accepts(&x).unwrap());
            }
        }
    }
}

fn zip_words(pairs: &TupleAlphabet, x: &HierWord, y: &HierWord) -> HierWord {
    let (u, v) = HierWord::common_shape([x, y]);
    let (x, y) = (x.reshape(u, v), y.reshape(u, v));
    match (&x, &y) {
        (HierWord::Lasso(a), HierWord::Lasso(b)) => {
            let z = |p: &[u32], q: &[u32]| {
                p.iter()
                    .zip(q)
                    .map(|(&s, &t)| pairs.encode(&[s, t]))
                    .collect::<Vec<_>>()
            };
            HierWord::Lasso(LassoWord::new(z(a.prefix(), b.prefix()), z(a.period(), b.period())).unwrap())
        }
        _ => {
            let (xu, xv) = x.blocks().unwrap();
            let (yu, yv) = y.blocks().unwrap();
            HierWord::spine(
                xu.iter().zip(yu).map(|(p, q)| zip_words(pairs, p, q)).collect(),
                xv.iter().zip(yv).map(|(p, q)| zip_words(pairs, p, q)).collect(),
            )
            .unwrap()
        }
    }
}

#[test]
fn lifting_pads_later_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let b = Alphabet::binary();
    let all = HnfAcceptor::universal(&b, 1).lift("#").unwrap();
    let padded = b.with_letter("#");
    let pad = padded.index_of("#").unwrap();
    let l1 = small_sets(1).lift("#").unwrap();
    for _ in 0..50 {
        let w = random_word(&mut rng, &b, 1);
        let enc = HierWord::spine(vec![w.clone()], vec![HierWord::constant(pad, 1)]).unwrap();
        assert!(all.accepts(&enc).unwrap());
        assert_eq!(l1.accepts(&enc).unwrap(), small_oracle(&w));
        let bad = HierWord::spine(vec![w.clone()], vec![w]).unwrap();
        assert!(!all.accepts(&bad).unwrap());
    }
    assert!(HnfAcceptor::empty(&b, 2).lift("#").unwrap().is_empty());
}

#[test]
fn ordinal_conversion_examples() {
    let budget = Budget::default();
    let h = ordinal_to_hnf(&zeros_only(), &budget).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    assert!(h.accepts(&word("<[]|[<ε|0>]>")).unwrap());
    for _ in 0..20 {
        let w = random_word(&mut rng, &Alphabet::binary(), 2);
        assert_eq!(h.accepts(&w).unwrap(), zeros_only().simulate(&w).unwrap().accepted);
    }
    let a = zeros_only();
    let no_final = OrdinalAutomaton::new(
        a.alphabet().clone(),
        2,
        2,
        0,
        a.delta().collect::<Vec<_>>(),
        a.gamma().map(|(s, t)| (s.clone(), t)).collect::<Vec<_>>(),
        StateSet::new(),
    )
    .unwrap();
    assert!(ordinal_to_hnf(&no_final, &budget).unwrap().is_empty());
}

#[test]
fn ordinal_conversion_agrees_with_profiles_and_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let b = Alphabet::binary();
    for level in 1..=3 {
        for _ in 0..8 {
            let det = rng.gen_bool(0.5);
            let a = random_ordinal(&mut rng, &b, 3, level, det);
            let h = ordinal_to_hnf(&a, &Budget::default()).unwrap();
            assert_eq!(h.is_empty(), a.is_empty_by_profiles());
            if let Some(w) = h.witness() {
                assert!(a.accepts(&w).unwrap());
            }
            for _ in 0..10 {
                let w = random_word(&mut rng, &b, level);
                assert_eq!(h.accepts(&w).unwrap(), a.accepts(&w).unwrap());
            }
        }
    }
}

#[test]
fn normal_form_to_ordinal_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let b = Alphabet::binary();
    let a = hnf_to_ordinal(&small_sets(1), 4096).unwrap();
    assert_eq!(a.level(), 1);
    assert!(a.accepts(&word("<1|0>")).unwrap());
    assert!(!a.accepts(&word("<ε|10>")).unwrap());
    for level in 1..=3 {
        let e = hnf_to_ordinal(&HnfAcceptor::empty(&b, level), 4096).unwrap();
        assert!(e.is_empty_by_profiles());
    }
    for level in 1..=3 {
        for _ in 0..6 {
            let h = random_hnf(&mut rng, &b, level, 2);
            let a = hnf_to_ordinal(&h, 4096).unwrap();
            assert_eq!(a.is_empty_by_profiles(), h.is_empty());
            for _ in 0..15 {
                let w = random_word(&mut rng, &b, level);
                assert_eq!(a.accepts(&w).unwrap(), h.accepts(&w).unwrap(), "{}", w.display(&b));
            }
        }
    }
}

#[test]
fn round_trip_through_ordinal_automata() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let b = Alphabet::binary();
    for level in 1..=2 {
        for _ in 0..5 {
            let a = random_ordinal(&mut rng, &b, 2, level, true);
            let h = ordinal_to_hnf(&a, &Budget::default()).unwrap();
            let back = hnf_to_ordinal(&h, 20_000).unwrap();
            for _ in 0..10 {
                let w = random_word(&mut rng, &b, level);
                assert_eq!(back.accepts(&w).unwrap(), a.simulate(&w).unwrap().accepted);
            }
        }
    }
}
