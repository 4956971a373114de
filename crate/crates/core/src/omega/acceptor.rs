use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

pub type State = usize;
pub type StateSet = BTreeSet<State>;

/// Acceptance condition of an [`OmegaAcceptor`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Acceptance {
    /// Some accepting state recurs infinitely often.
    Buchi(StateSet),
    /// The exact set of recurring states is one of the listed sets.
    Muller(Vec<StateSet>),
}

impl Acceptance {
    pub fn is_buchi(&self) -> bool {
        matches!(self, Acceptance::Buchi(_))
    }
}

/// A nondeterministic automaton on ω-words with Büchi or Muller acceptance.
///
/// States are `0..num_states()`. Missing transitions mean the run dies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaAcceptor {
    alphabet: Alphabet,
    initial: State,
    trans: Vec<Vec<Vec<State>>>,
    acceptance: Acceptance,
}

impl OmegaAcceptor {
    pub fn new<I>(
        alphabet: Alphabet,
        num_states: usize,
        initial: State,
        delta: I,
        acceptance: Acceptance,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (State, Letter, State)>,
    {
        if initial >= num_states {
            return Err(Error::Invalid(format!("initial state {initial} out of range")));
        }
        let mut trans = vec![vec![Vec::new(); alphabet.len()]; num_states];
        for (p, a, q) in delta {
            if p >= num_states || q >= num_states {
                return Err(Error::Invalid(format!("transition ({p},{a},{q}) uses unknown state")));
            }
            alphabet.check(a)?;
            trans[p][a as usize].push(q);
        }
        let bad_set = |s: &StateSet| s.iter().any(|&q| q >= num_states);
        match &acceptance {
            Acceptance::Buchi(f) if bad_set(f) => return Err(Error::Invalid("accepting state out of range".into())),
            Acceptance::Muller(fam) if fam.iter().any(|s| bad_set(s) || s.is_empty()) => {
                return Err(Error::Invalid("Muller set empty or out of range".into()))
            }
            _ => {}
        }
        Ok(Self::from_parts(alphabet, initial, trans, acceptance))
    }

    /// Builds from a transition table, normalizing successor lists.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        initial: State,
        mut trans: Vec<Vec<Vec<State>>>,
        acceptance: Acceptance,
    ) -> Self {
        for row in &mut trans {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        let acceptance = match acceptance {
            Acceptance::Muller(mut fam) => {
                fam.sort();
                fam.dedup();
                Acceptance::Muller(fam)
            }
            b => b,
        };
        OmegaAcceptor {
            alphabet,
            initial,
            trans,
            acceptance,
        }
    }

    /// Acceptor of the empty language.
    pub fn empty(alphabet: &Alphabet) -> Self {
        Self::from_parts(
            alphabet.clone(),
            0,
            vec![vec![Vec::new(); alphabet.len()]],
            Acceptance::Buchi(StateSet::new()),
        )
    }

    /// Acceptor of every ω-word.
    pub fn universal(alphabet: &Alphabet) -> Self {
        Self::from_parts(
            alphabet.clone(),
            0,
            vec![vec![vec![0]; alphabet.len()]],
            Acceptance::Buchi([0].into_iter().collect()),
        )
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn acceptance(&self) -> &Acceptance {
        &self.acceptance
    }

    pub fn succ(&self, q: State, a: Letter) -> &[State] {
        &self.trans[q][a as usize]
    }

    /// All successors of `q`, over every letter.
    pub fn all_succ(&self, q: State) -> impl Iterator<Item = State> + '_ {
        self.trans[q].iter().flatten().copied()
    }

    pub(crate) fn table(&self) -> &[Vec<Vec<State>>] {
        &self.trans
    }

    pub fn delta(&self) -> impl Iterator<Item = (State, Letter, State)> + '_ {
        self.trans.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a as Letter, q)))
        })
    }

    /// At most one successor per state and letter.
    pub fn is_deterministic(&self) -> bool {
        self.trans.iter().flatten().all(|s| s.len() <= 1)
    }

    /// Exactly one successor per state and letter.
    pub fn is_complete_deterministic(&self) -> bool {
        self.trans.iter().flatten().all(|s| s.len() == 1)
    }

    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "cannot rename {} letters to {}",
                self.alphabet.len(),
                alphabet.len()
            )));
        }
        self.alphabet = alphabet;
        Ok(self)
    }
}
