//! Concrete presentations: the ideal of small sets, the quotient boolean
//! algebras, ω^ω as finite integer sequences, and lexicographic orders.

use std::cmp::Ordering;

use super::presentation::{diagonal, Presentation};
use crate::alphabet::{Alphabet, Letter, LetterMap, TupleAlphabet};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hier::{HnfAcceptor, TOP_LETTER_PREFIX};
use crate::omega::{Acceptance, LassoWord, OmegaAcceptor, State, StateSet};
use crate::word::HierWord;

fn states(xs: &[State]) -> StateSet {
    xs.iter().copied().collect()
}

fn top(letters: usize, n: usize, delta: &[(State, Letter, State)], accepting: &[State]) -> OmegaAcceptor {
    OmegaAcceptor::new(
        Alphabet::synthetic(TOP_LETTER_PREFIX, letters),
        n,
        0,
        delta.iter().copied(),
        Acceptance::Buchi(states(accepting)),
    )
    .expect("well-formed top")
}

/// ω-words over `alphabet` with finitely many occurrences of `letter`.
fn finitely_many(alphabet: &Alphabet, letter: Letter) -> OmegaAcceptor {
    let mut delta = vec![(0, letter, 0)];
    for l in alphabet.letters().filter(|&l| l != letter) {
        delta.extend([(0, l, 0), (0, l, 1), (1, l, 1)]);
    }
    OmegaAcceptor::new(alphabet.clone(), 2, 0, delta, Acceptance::Buchi(states(&[1]))).expect("well-formed")
}

/// Characteristic words over `{0, 1}` of the subsets of ω^n whose order
/// type is below ω^n. Level 1 has finitely many 1s; level n has finitely
/// many blocks outside the level-(n−1) language.
pub fn build_ln(n: usize) -> Result<HnfAcceptor> {
    if n == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let b = Alphabet::binary();
    let mut l = HnfAcceptor::base(finitely_many(&b, 1));
    for _ in 1..n {
        let co = l.complement(&Budget::unlimited())?;
        let t = finitely_many(&Alphabet::synthetic(TOP_LETTER_PREFIX, 2), 1);
        l = HnfAcceptor::nested(t, vec![l, co])?.assume_partitioned();
    }
    Ok(l)
}

/// Order type below ω^n of the set a binary word denotes, decided on its
/// presentation: a period free of 1s at level 1, and every period block
/// small at higher levels.
pub fn oracle_in_in(w: &HierWord, n: usize) -> Result<bool> {
    w.check_level(n)?;
    Ok(small(w))
}

fn small(w: &HierWord) -> bool {
    match w {
        HierWord::Lasso(l) => !l.period().contains(&1),
        HierWord::Spine { period, .. } => period.iter().all(small),
    }
}

/// `{w over base^arity : f(w) ∈ L_n}` for a letterwise boolean function.
fn indicator(ln: &HnfAcceptor, arity: usize, f: impl Fn(&[Letter]) -> Letter) -> Result<HnfAcceptor> {
    let t = TupleAlphabet::new(ln.alphabet(), arity)?;
    let image = t.alphabet().letters().map(|l| f(&t.decode(l))).collect();
    ln.preimage(&LetterMap::new(t.alphabet().clone(), ln.alphabet().clone(), image)?)
}

/// The quotient of the power set of ω^n by the small sets, presented on
/// all binary words. Relations: `Meet(x,y,z)` and `Join(x,y,z)` are graphs
/// of the operations, `Comp(x,y)` of complement, `Sub` is almost
/// inclusion, `Zero` and `One` the classes of the constants.
pub fn build_bn(n: usize) -> Result<Presentation> {
    let ln = build_ln(n)?;
    let rels = [
        ("Meet", 3, indicator(&ln, 3, |t| (t[0] & t[1]) ^ t[2])?),
        ("Join", 3, indicator(&ln, 3, |t| (t[0] | t[1]) ^ t[2])?),
        ("Comp", 2, indicator(&ln, 2, |t| t[0] ^ t[1] ^ 1)?),
        ("Sub", 2, indicator(&ln, 2, |t| t[0] & (1 - t[1]))?),
        ("Zero", 1, ln.clone()),
        ("One", 1, indicator(&ln, 1, |t| 1 - t[0])?),
    ];
    Presentation::new(
        HnfAcceptor::universal(&Alphabet::binary(), n),
        Some(indicator(&ln, 2, |t| t[0] ^ t[1])?),
        rels.into_iter().map(|(s, k, a)| (s.to_string(), k, a)),
    )
}

const A: Letter = 0;
const B: Letter = 1;

/// Code of a finite sequence of naturals as an ω^2-word over `{a, b}`:
/// block `i` is `a^(x_i + 1) b^ω`, and every later block is `b^ω`.
pub fn omega_omega_code(seq: &[u32]) -> HierWord {
    let block = |k: u32| HierWord::Lasso(LassoWord::new(vec![A; k as usize + 1], vec![B]).expect("nonempty"));
    HierWord::spine(seq.iter().map(|&k| block(k)).collect(), vec![HierWord::constant(B, 1)]).expect("nonempty")
}

/// Shorter sequences first, then lexicographic.
pub fn compare_sequences(x: &[u32], y: &[u32]) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

/// Finite integer sequences ordered by length, then lexicographically,
/// coded by [`omega_omega_code`]. The order is `Lt`; codes are unique.
pub fn build_omega_omega() -> Result<Presentation> {
    let ab = Alphabet::new(["a", "b"])?;
    let pairs = TupleAlphabet::new(&ab, 2)?;
    // One complete deterministic classifier of blocks; state 2 ends a
    // nonempty a-run, 3 is an all-b block, 1 and 4 are everything else.
    let classify = |accepting: &[State]| {
        let delta = [
            (0, A, 1),
            (0, B, 3),
            (1, A, 1),
            (1, B, 2),
            (2, B, 2),
            (2, A, 4),
            (3, B, 3),
            (3, A, 4),
            (4, A, 4),
            (4, B, 4),
        ];
        HnfAcceptor::base(
            OmegaAcceptor::new(ab.clone(), 5, 0, delta, Acceptance::Buchi(states(accepting))).expect("well-formed"),
        )
    };
    let (full, blank, junk) = (classify(&[2]), classify(&[3]), classify(&[1, 4]));
    let domain = HnfAcceptor::nested(
        top(3, 2, &[(0, 0, 0), (0, 1, 1), (1, 1, 1)], &[1]),
        vec![full.clone(), blank.clone(), junk.clone()],
    )?
    .assume_partitioned();

    let p = |x: Letter, y: Letter| pairs.encode(&[x, y]);
    let both_full = |mid: Option<Letter>| {
        let mut delta = vec![(0, p(A, A), 1), (1, p(A, A), 1), (2, p(B, B), 2)];
        match mid {
            None => delta.push((1, p(B, B), 2)),
            Some(m) => delta.extend([(1, m, 3), (3, m, 3), (3, p(B, B), 2)]),
        }
        HnfAcceptor::base(
            OmegaAcceptor::new(pairs.alphabet().clone(), 4, 0, delta, Acceptance::Buchi(states(&[2])))
                .expect("well-formed"),
        )
    };
    let first = pairs.selection(&[0])?;
    let second = pairs.selection(&[1])?;
    let both = |x: &HnfAcceptor, y: &HnfAcceptor| -> Result<HnfAcceptor> {
        x.preimage(&first)?
            .intersect(&y.preimage(&second)?, &Budget::unlimited())
    };
    let letters = vec![
        both_full(None),
        both_full(Some(p(B, A))),
        both_full(Some(p(A, B))),
        both(&full, &blank)?,
        both(&blank, &full)?,
        both(&blank, &blank)?,
        junk.preimage(&first)?.union(&junk.preimage(&second)?)?,
    ];
    // Letters: equal, less, greater, x longer, x shorter, both ended, junk.
    let (c, l, g, xs, fin) = (0, 1, 2, 3, 4);
    let mut delta = vec![
        (c, 0, c),
        (c, 1, l),
        (c, 2, g),
        (l, 5, fin),
        (xs, 4, xs),
        (xs, 5, fin),
        (fin, 5, fin),
    ];
    for s in [c, l, g] {
        delta.push((s, 4, xs));
    }
    for s in [l, g] {
        delta.extend([(s, 0, s), (s, 1, s), (s, 2, s)]);
    }
    let lt = HnfAcceptor::nested(top(7, 5, &delta, &[fin]), letters)?.assume_partitioned();
    Presentation::new(domain, None, [("Lt".to_string(), 2, lt)])
}

/// All words of length ω^n over `alphabet`, ordered lexicographically by
/// the letter order of the alphabet. The order is `Lt`; codes are unique.
pub fn build_lex(alphabet: &Alphabet, n: usize) -> Result<Presentation> {
    if alphabet.len() < 2 || n == 0 {
        return Err(Error::Invalid(
            "lexicographic order needs two letters and level at least 1".into(),
        ));
    }
    let pairs = TupleAlphabet::new(alphabet, 2)?;
    let swap = pairs.selection(&[1, 0])?;
    let mut delta = Vec::new();
    for x in alphabet.letters() {
        delta.push((0, pairs.encode(&[x, x]), 0));
        for y in alphabet.letters() {
            delta.push((1, pairs.encode(&[x, y]), 1));
            if x < y {
                delta.push((0, pairs.encode(&[x, y]), 1));
            }
        }
    }
    let mut lt = HnfAcceptor::base(OmegaAcceptor::new(
        pairs.alphabet().clone(),
        2,
        0,
        delta,
        Acceptance::Buchi(states(&[1])),
    )?);
    for level in 2..=n {
        let gt = lt.preimage(&swap)?;
        let t = top(3, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1), (1, 2, 1)], &[1]);
        lt = HnfAcceptor::nested(t, vec![diagonal(alphabet, level - 1)?, lt, gt])?.assume_partitioned();
    }
    Presentation::new(HnfAcceptor::universal(alphabet, n), None, [("Lt".to_string(), 2, lt)])
}
