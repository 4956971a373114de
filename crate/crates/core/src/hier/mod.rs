//! Regular ω^n-languages in substitution normal form.

mod analysis;
mod convert;
mod ops;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::omega::{Acceptance, OmegaAcceptor, StateSet};
use crate::word::HierWord;

pub use convert::{hnf_to_ordinal, ordinal_to_hnf};
pub use ops::refine_to_atoms;

/// Prefix of the synthetic letter names of top-level acceptors.
pub const TOP_LETTER_PREFIX: &str = "atom";

/// A regular ω^n-language over an external alphabet `Σ`.
///
/// Level 1 is an ω-acceptor over `Σ`. Level `n ≥ 2` is a top ω-acceptor over
/// synthetic letters, each standing for a level-(n−1) language: a word with
/// blocks `x_0 x_1 …` is accepted iff some `σ` accepted by the top has
/// `x_j ∈ L(σ(j))` for every `j`.
///
/// Cheap to clone; emptiness witnesses and complements are cached.
#[derive(Clone)]
pub struct HnfAcceptor(Arc<Node>);

struct Node {
    alphabet: Alphabet,
    level: usize,
    body: Body,
    /// The letter languages are pairwise disjoint and cover every block.
    partitioned: bool,
    /// Structurally the all-words acceptor.
    universal: bool,
    witness: OnceLock<Option<HierWord>>,
    complement: OnceLock<HnfAcceptor>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Base(OmegaAcceptor),
    Nested {
        top: OmegaAcceptor,
        letters: Vec<HnfAcceptor>,
    },
}

impl HnfAcceptor {
    fn from_body(alphabet: Alphabet, level: usize, body: Body, partitioned: bool, universal: bool) -> Self {
        HnfAcceptor(Arc::new(Node {
            alphabet,
            level,
            body,
            partitioned,
            universal,
            witness: OnceLock::new(),
            complement: OnceLock::new(),
        }))
    }

    /// Level-1 acceptor.
    pub fn base(acceptor: OmegaAcceptor) -> Self {
        HnfAcceptor::from_body(acceptor.alphabet().clone(), 1, Body::Base(acceptor), false, false)
    }

    /// Level-(n+1) acceptor from a top acceptor and one level-n language per
    /// top letter.
    pub fn nested(top: OmegaAcceptor, letters: Vec<HnfAcceptor>) -> Result<Self> {
        let first = letters
            .first()
            .ok_or_else(|| Error::Invalid("a nested acceptor needs at least one letter".into()))?;
        if top.alphabet().len() != letters.len() {
            return Err(Error::Invalid(format!(
                "top alphabet has {} letters but {} languages were given",
                top.alphabet().len(),
                letters.len()
            )));
        }
        for l in &letters {
            l.check_compatible(first)?;
        }
        let top = top.with_alphabet(Alphabet::synthetic(TOP_LETTER_PREFIX, letters.len()))?;
        Ok(HnfAcceptor::from_body(
            first.alphabet().clone(),
            first.level() + 1,
            Body::Nested { top, letters },
            false,
            false,
        ))
    }

    /// Marks the letter languages as a partition of all blocks. The caller
    /// vouches for it; [`HnfAcceptor::certify_partition`] checks it.
    pub fn assume_partitioned(self) -> Self {
        if self.level() == 1 || self.0.partitioned {
            return self;
        }
        HnfAcceptor::from_body(
            self.alphabet().clone(),
            self.level(),
            self.body().clone(),
            true,
            self.0.universal,
        )
    }

    /// The all-words acceptor.
    pub fn universal(alphabet: &Alphabet, level: usize) -> Self {
        assert!(level >= 1);
        if level == 1 {
            let base = OmegaAcceptor::universal(alphabet);
            return HnfAcceptor::from_body(alphabet.clone(), 1, Body::Base(base), false, true);
        }
        let top = OmegaAcceptor::universal(&Alphabet::synthetic(TOP_LETTER_PREFIX, 1));
        let letters = vec![HnfAcceptor::universal(alphabet, level - 1)];
        HnfAcceptor::from_body(alphabet.clone(), level, Body::Nested { top, letters }, true, true)
    }

    /// The empty acceptor.
    pub fn empty(alphabet: &Alphabet, level: usize) -> Self {
        assert!(level >= 1);
        if level == 1 {
            return HnfAcceptor::base(OmegaAcceptor::empty(alphabet));
        }
        let top = OmegaAcceptor::empty(&Alphabet::synthetic(TOP_LETTER_PREFIX, 1));
        let letters = vec![HnfAcceptor::universal(alphabet, level - 1)];
        HnfAcceptor::from_body(alphabet.clone(), level, Body::Nested { top, letters }, true, false)
    }

    /// Accepts exactly the constant word `c^(ω^level)`.
    pub fn constant(alphabet: &Alphabet, letter: Letter, level: usize) -> Result<Self> {
        alphabet.check(letter)?;
        let one: StateSet = [0].into_iter().collect();
        if level == 1 {
            let base = OmegaAcceptor::new(alphabet.clone(), 1, 0, [(0, letter, 0)], Acceptance::Buchi(one))?;
            return Ok(HnfAcceptor::base(base));
        }
        let top = OmegaAcceptor::universal(&Alphabet::synthetic(TOP_LETTER_PREFIX, 1));
        HnfAcceptor::nested(top, vec![HnfAcceptor::constant(alphabet, letter, level - 1)?])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn level(&self) -> usize {
        self.0.level
    }

    pub fn body(&self) -> &Body {
        &self.0.body
    }

    pub fn is_partitioned(&self) -> bool {
        self.0.partitioned
    }

    pub(crate) fn is_trivially_universal(&self) -> bool {
        self.0.universal
    }

    /// Top acceptor and letter languages of a level ≥ 2 acceptor.
    pub fn nested_parts(&self) -> Option<(&OmegaAcceptor, &[HnfAcceptor])> {
        match &self.0.body {
            Body::Base(_) => None,
            Body::Nested { top, letters } => Some((top, letters)),
        }
    }

    pub fn as_base(&self) -> Option<&OmegaAcceptor> {
        match &self.0.body {
            Body::Base(b) => Some(b),
            Body::Nested { .. } => None,
        }
    }

    pub(crate) fn ptr_eq(&self, other: &HnfAcceptor) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn check_compatible(&self, other: &HnfAcceptor) -> Result<()> {
        if self.level() != other.level() {
            return Err(Error::LevelMismatch {
                expected: self.level(),
                found: other.level(),
            });
        }
        self.alphabet().ensure_same(other.alphabet())
    }

    /// Total number of states over all levels.
    pub fn size(&self) -> usize {
        match &self.0.body {
            Body::Base(b) => b.num_states(),
            Body::Nested { top, letters } => top.num_states() + letters.iter().map(HnfAcceptor::size).sum::<usize>(),
        }
    }
}

impl PartialEq for HnfAcceptor {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.level() == other.level()
                && self.alphabet() == other.alphabet()
                && self.0.partitioned == other.0.partitioned
                && self.0.body == other.0.body)
    }
}

impl fmt::Debug for HnfAcceptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HnfAcceptor")
            .field("level", &self.level())
            .field("partitioned", &self.0.partitioned)
            .field("body", &self.0.body)
            .finish()
    }
}

#[cfg(test)]
mod tests;
