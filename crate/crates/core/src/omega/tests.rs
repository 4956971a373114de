use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::alphabet::{Alphabet, Letter, LetterMap, TupleAlphabet};
use crate::budget::Budget;
use crate::testing::{random_buchi, random_lasso, random_muller};

fn set(xs: &[usize]) -> StateSet {
    xs.iter().copied().collect()
}

fn lasso(u: &[Letter], v: &[Letter]) -> LassoWord {
    LassoWord::new(u.to_vec(), v.to_vec()).unwrap()
}

/// Words over {0,1} with finitely many 1s.
fn finitely_many_ones() -> OmegaAcceptor {
    let delta = vec![(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)];
    OmegaAcceptor::new(Alphabet::binary(), 2, 0, delta, Acceptance::Buchi(set(&[1]))).unwrap()
}

fn constant(letter: Letter) -> OmegaAcceptor {
    OmegaAcceptor::new(
        Alphabet::binary(),
        1,
        0,
        vec![(0, letter, 0)],
        Acceptance::Buchi(set(&[0])),
    )
    .unwrap()
}

/// Infinitely many 0s, deterministic.
fn infinitely_many_zeros() -> OmegaAcceptor {
    let delta = vec![(0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 0)];
    OmegaAcceptor::new(Alphabet::binary(), 2, 0, delta, Acceptance::Buchi(set(&[1]))).unwrap()
}

/// Nested-DFS lasso membership for Büchi acceptors, independent of the
/// component-based check used by the library.
fn oracle_accepts(a: &OmegaAcceptor, w: &LassoWord) -> bool {
    let a = a.to_buchi();
    let f = match a.acceptance() {
        Acceptance::Buchi(f) => f.clone(),
        _ => unreachable!(),
    };
    let len = w.prefix().len() + w.period().len();
    let next_pos = |p: usize| if p + 1 < len { p + 1 } else { w.prefix().len() };
    let succ = |(q, p): (usize, usize)| -> Vec<(usize, usize)> {
        a.succ(q, w.at(p)).iter().map(|&q2| (q2, next_pos(p))).collect()
    };
    let mut outer: HashSet<(usize, usize)> = HashSet::new();
    let mut inner: HashSet<(usize, usize)> = HashSet::new();
    fn dfs2(
        v: (usize, usize),
        seed: (usize, usize),
        succ: &dyn Fn((usize, usize)) -> Vec<(usize, usize)>,
        inner: &mut HashSet<(usize, usize)>,
    ) -> bool {
        for w in succ(v) {
            if w == seed {
                return true;
            }
            if inner.insert(w) && dfs2(w, seed, succ, inner) {
                return true;
            }
        }
        false
    }
    fn dfs1(
        v: (usize, usize),
        f: &StateSet,
        succ: &dyn Fn((usize, usize)) -> Vec<(usize, usize)>,
        outer: &mut HashSet<(usize, usize)>,
        inner: &mut HashSet<(usize, usize)>,
    ) -> bool {
        outer.insert(v);
        for w in succ(v) {
            if !outer.contains(&w) && dfs1(w, f, succ, outer, inner) {
                return true;
            }
        }
        f.contains(&v.0) && dfs2(v, v, succ, inner)
    }
    dfs1((a.initial(), 0), &f, &succ, &mut outer, &mut inner)
}

#[test]
fn finitely_many_ones_membership() {
    let l1 = finitely_many_ones();
    assert!(l1.accepts(&lasso(&[1], &[0])).unwrap());
    assert!(!l1.accepts(&lasso(&[], &[1, 0])).unwrap());
    assert!(!l1.is_empty());
}

#[test]
fn accepting_everything_accepts_all() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = OmegaAcceptor::universal(&Alphabet::binary());
    for _ in 0..50 {
        assert!(u.accepts(&random_lasso(&mut rng, &Alphabet::binary(), 3, 3)).unwrap());
    }
}

#[test]
fn letters_outside_alphabet_rejected() {
    assert!(finitely_many_ones().accepts(&lasso(&[], &[2])).is_err());
}

#[test]
fn union_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = Alphabet::binary();
    let l1 = finitely_many_ones();
    let with_empty = l1.union(&OmegaAcceptor::empty(&b)).unwrap();
    for _ in 0..50 {
        let w = random_lasso(&mut rng, &b, 3, 3);
        assert_eq!(with_empty.accepts(&w).unwrap(), l1.accepts(&w).unwrap());
    }
    let taut = l1.union(&l1.complement(&Budget::default()).unwrap()).unwrap();
    for _ in 0..50 {
        assert!(taut.accepts(&random_lasso(&mut rng, &b, 3, 3)).unwrap());
    }
    let zero_or_one = constant(0).union(&constant(1)).unwrap();
    assert!(zero_or_one.accepts(&lasso(&[], &[0])).unwrap());
    assert!(zero_or_one.accepts(&lasso(&[], &[1])).unwrap());
    assert!(!zero_or_one.accepts(&lasso(&[], &[0, 1])).unwrap());
    assert!(zero_or_one.num_states() <= 3);
}

#[test]
fn alphabet_mismatch_is_an_error() {
    let other = Alphabet::new(["a", "b"]).unwrap();
    assert!(finitely_many_ones().union(&OmegaAcceptor::empty(&other)).is_err());
    assert!(finitely_many_ones()
        .intersect(&OmegaAcceptor::empty(&other), &Budget::default())
        .is_err());
}

#[test]
fn intersect_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = Alphabet::binary();
    let budget = Budget::default();
    let l1 = finitely_many_ones();
    let idem = l1.intersect(&l1, &budget).unwrap();
    for _ in 0..50 {
        let w = random_lasso(&mut rng, &b, 3, 3);
        assert_eq!(idem.accepts(&w).unwrap(), l1.accepts(&w).unwrap());
    }
    assert!(l1
        .intersect(&l1.complement(&budget).unwrap(), &budget)
        .unwrap()
        .is_empty());
    let both = l1.intersect(&infinitely_many_zeros(), &budget).unwrap();
    assert!(both.accepts(&lasso(&[1], &[0])).unwrap());
    assert!(!both.accepts(&lasso(&[], &[1])).unwrap());
}

#[test]
fn complement_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let b = Alphabet::binary();
    let budget = Budget::default();
    let l1 = finitely_many_ones();
    let co = l1.complement(&budget).unwrap();
    assert!(co.accepts(&lasso(&[], &[1, 0])).unwrap());
    assert!(!co.accepts(&lasso(&[1, 1], &[0])).unwrap());
    let twice = co.complement(&budget).unwrap();
    for _ in 0..100 {
        let w = random_lasso(&mut rng, &b, 4, 4);
        assert_eq!(twice.accepts(&w).unwrap(), l1.accepts(&w).unwrap());
    }
    let all = OmegaAcceptor::empty(&b).complement(&budget).unwrap();
    for _ in 0..50 {
        assert!(all.accepts(&random_lasso(&mut rng, &b, 3, 3)).unwrap());
    }
}

#[test]
fn projection_and_preimage() {
    let b = Alphabet::binary();
    let pairs = TupleAlphabet::new(&b, 2).unwrap();
    let first = pairs.selection(&[0]).unwrap();
    let l1 = finitely_many_ones();
    let same = l1.preimage(&LetterMap::identity(&b)).unwrap();
    assert!(same.accepts(&lasso(&[1], &[0])).unwrap());
    assert!(!same.accepts(&lasso(&[], &[1])).unwrap());

    let zz = pairs.encode(&[0, 0]);
    let diag = OmegaAcceptor::new(
        pairs.alphabet().clone(),
        1,
        0,
        vec![(0, zz, 0)],
        Acceptance::Buchi(set(&[0])),
    )
    .unwrap();
    let proj = diag.map_letters(&first).unwrap();
    assert!(proj.accepts(&lasso(&[], &[0])).unwrap());
    assert!(!proj.accepts(&lasso(&[], &[1])).unwrap());

    let (zo, oz) = (pairs.encode(&[0, 1]), pairs.encode(&[1, 0]));
    let alt = OmegaAcceptor::new(
        pairs.alphabet().clone(),
        3,
        0,
        vec![(0, zo, 1), (1, zo, 1), (0, oz, 2), (2, oz, 2)],
        Acceptance::Buchi(set(&[1, 2])),
    )
    .unwrap();
    let proj = alt.map_letters(&first).unwrap();
    assert!(proj.accepts(&lasso(&[], &[0])).unwrap());
    assert!(proj.accepts(&lasso(&[], &[1])).unwrap());
    assert!(!proj.accepts(&lasso(&[], &[0, 1])).unwrap());
    assert!(alt.map_letters(&LetterMap::identity(&b)).is_err());
}

#[test]
fn emptiness_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = Alphabet::binary();
    let budget = Budget::default();
    let dead = OmegaAcceptor::new(b.clone(), 2, 0, vec![], Acceptance::Buchi(set(&[0, 1]))).unwrap();
    assert!(dead.is_empty());
    assert!(!finitely_many_ones().is_empty());
    for _ in 0..100 {
        let a = random_buchi(&mut rng, &b, 4);
        let c = a.complement(&budget).unwrap();
        assert!(a.intersect(&c, &budget).unwrap().is_empty());
    }
}

#[test]
fn witnesses_are_accepted() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b = Alphabet::binary();
    for _ in 0..200 {
        let a = if rng.gen_bool(0.5) {
            random_buchi(&mut rng, &b, 4)
        } else {
            random_muller(&mut rng, &b, 4)
        };
        match a.witness() {
            Some(w) => assert!(a.accepts(&w).unwrap(), "witness {w:?} rejected"),
            None => {
                // No short lasso is accepted either.
                for _ in 0..100 {
                    assert!(!a.accepts(&random_lasso(&mut rng, &b, 4, 4)).unwrap());
                }
            }
        }
    }
}

#[test]
fn muller_buchi_conversions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let b = Alphabet::binary();
    let l1 = finitely_many_ones();
    let round = l1
        .convert(AcceptanceKind::Muller)
        .unwrap()
        .convert(AcceptanceKind::Buchi)
        .unwrap();
    for _ in 0..100 {
        let w = random_lasso(&mut rng, &b, 4, 4);
        assert_eq!(round.accepts(&w).unwrap(), l1.accepts(&w).unwrap());
    }
    let loop_muller = OmegaAcceptor::new(
        b.clone(),
        1,
        0,
        vec![(0, 0, 0), (0, 1, 0)],
        Acceptance::Muller(vec![set(&[0])]),
    )
    .unwrap();
    let loop_buchi = loop_muller.convert(AcceptanceKind::Buchi).unwrap();
    for _ in 0..20 {
        let w = random_lasso(&mut rng, &b, 2, 2);
        assert!(loop_buchi.accepts(&w).unwrap());
    }
    for _ in 0..30 {
        let m = random_muller(&mut rng, &b, 3);
        let bu = m.convert(AcceptanceKind::Buchi).unwrap();
        for _ in 0..100 {
            let w = random_lasso(&mut rng, &b, 3, 3);
            assert_eq!(bu.accepts(&w).unwrap(), m.accepts(&w).unwrap());
        }
    }
}

#[test]
fn library_membership_matches_nested_dfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let b = Alphabet::binary();
    for _ in 0..100 {
        let a = random_buchi(&mut rng, &b, 4);
        for _ in 0..30 {
            let w = random_lasso(&mut rng, &b, 3, 3);
            assert_eq!(a.accepts(&w).unwrap(), oracle_accepts(&a, &w));
        }
    }
}

#[test]
fn boolean_operations_are_membership_homomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let b = Alphabet::new(["a", "b", "c"]).unwrap();
    let budget = Budget::default();
    for _ in 0..60 {
        let x = random_buchi(&mut rng, &b, 4);
        let y = if rng.gen_bool(0.5) {
            random_buchi(&mut rng, &b, 4)
        } else {
            random_muller(&mut rng, &b, 3)
        };
        let u = x.union(&y).unwrap();
        let i = x.intersect(&y, &budget).unwrap();
        let c = x.complement(&budget).unwrap();
        let cy = y.complement(&budget).unwrap();
        for _ in 0..40 {
            let w = random_lasso(&mut rng, &b, 3, 4);
            let (mx, my) = (oracle_accepts(&x, &w), oracle_accepts(&y, &w));
            assert_eq!(u.accepts(&w).unwrap(), mx || my);
            assert_eq!(i.accepts(&w).unwrap(), mx && my);
            assert_eq!(c.accepts(&w).unwrap(), !mx);
            assert_eq!(cy.accepts(&w).unwrap(), !my);
        }
    }
}

use rand::Rng;
