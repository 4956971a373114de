//! Random instance generators shared by unit tests and the acceptance suite.

use rand::Rng;

use crate::alphabet::{Alphabet, Letter};
use crate::hier::HnfAcceptor;
use crate::omega::{Acceptance, LassoWord, OmegaAcceptor, StateSet};
use crate::ordinal::OrdinalAutomaton;
use crate::word::HierWord;

/// Random Büchi acceptor with `1..=max_states` states; each state/letter
/// pair gets 0–2 successors.
pub fn random_buchi<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> OmegaAcceptor {
    let n = rng.gen_range(1..=max_states);
    let mut delta = Vec::new();
    for p in 0..n {
        for a in alphabet.letters() {
            let k = match rng.gen_range(0..10) {
                0..=1 => 0,
                2..=7 => 1,
                _ => 2,
            };
            for _ in 0..k {
                delta.push((p, a, rng.gen_range(0..n)));
            }
        }
    }
    let acc: StateSet = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    OmegaAcceptor::new(alphabet.clone(), n, 0, delta, Acceptance::Buchi(acc)).expect("valid random acceptor")
}

/// Random Muller acceptor over the same transition shape.
pub fn random_muller<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> OmegaAcceptor {
    let b = random_buchi(rng, alphabet, max_states);
    let n = b.num_states();
    let mut fam = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let s: StateSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            fam.push(s);
        }
    }
    OmegaAcceptor::new(
        alphabet.clone(),
        n,
        0,
        b.delta().collect::<Vec<_>>(),
        Acceptance::Muller(fam),
    )
    .expect("valid random acceptor")
}

pub fn random_letters<R: Rng>(rng: &mut R, alphabet: &Alphabet, len: usize) -> Vec<Letter> {
    (0..len).map(|_| rng.gen_range(0..alphabet.len() as Letter)).collect()
}

/// Random lasso word with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
pub fn random_lasso<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> LassoWord {
    let u = rng.gen_range(0..=max_prefix);
    let v = rng.gen_range(1..=max_period);
    LassoWord::new(random_letters(rng, alphabet, u), random_letters(rng, alphabet, v)).expect("nonempty period")
}

/// Random ordinal automaton with `1..=max_states` states. Deterministic
/// instances have a total `Δ` and a partial-function `γ`.
pub fn random_ordinal<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_states: usize,
    level: usize,
    deterministic: bool,
) -> OrdinalAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut delta = Vec::new();
    for p in 0..n {
        for a in alphabet.letters() {
            let k = if deterministic { 1 } else { rng.gen_range(0..=2) };
            for _ in 0..k {
                delta.push((p, a, rng.gen_range(0..n)));
            }
        }
    }
    let mut gamma = Vec::new();
    for mask in 1u32..(1 << n) {
        if rng.gen_bool(0.55) {
            let set: StateSet = (0..n).filter(|q| mask & (1 << q) != 0).collect();
            let k = if deterministic { 1 } else { rng.gen_range(1..=2) };
            for _ in 0..k {
                gamma.push((set.clone(), rng.gen_range(0..n)));
            }
        }
    }
    let fin: StateSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    OrdinalAutomaton::new(alphabet.clone(), level, n, 0, delta, gamma, fin).expect("valid random automaton")
}

/// Random word of length ω^level with short prefixes and periods.
pub fn random_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, level: usize) -> HierWord {
    if level == 1 {
        return HierWord::Lasso(random_lasso(rng, alphabet, 2, 2));
    }
    // A small pool of blocks makes repeated blocks common.
    let pool: Vec<HierWord> = (0..3).map(|_| random_word(rng, alphabet, level - 1)).collect();
    let pick = |rng: &mut R| pool[rng.gen_range(0..pool.len())].clone();
    let u: Vec<HierWord> = (0..rng.gen_range(0..=2)).map(|_| pick(rng)).collect();
    let v: Vec<HierWord> = (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect();
    HierWord::spine(u, v).expect("uniform levels")
}

/// Random normal-form acceptor: level-1 cores have `1..=max_states`
/// states, tops have `1..=max_states` states over two or three letters.
pub fn random_hnf<R: Rng>(rng: &mut R, alphabet: &Alphabet, level: usize, max_states: usize) -> HnfAcceptor {
    if level == 1 {
        let core = if rng.gen_bool(0.75) {
            random_buchi(rng, alphabet, max_states)
        } else {
            random_muller(rng, alphabet, max_states)
        };
        return HnfAcceptor::base(core);
    }
    let k = rng.gen_range(2..=3);
    let top = random_buchi(rng, &Alphabet::synthetic("atom", k), max_states);
    let letters = (0..k)
        .map(|_| random_hnf(rng, alphabet, level - 1, max_states))
        .collect();
    HnfAcceptor::nested(top, letters).expect("valid random acceptor")
}
