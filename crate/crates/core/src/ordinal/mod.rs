//! Automata with successor and limit transitions reading words of length ω^n.

mod profile;
mod simulate;

use std::collections::BTreeMap;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::omega::{State, StateSet};

pub use profile::Steps;
pub use simulate::Simulation;

/// An ordinal automaton `(Σ, Q, q0, Δ, γ, F)` read on words of length ω^n.
///
/// A run assigns a state to every position up to ω^n: successor positions
/// follow `Δ`, and a limit position `i` takes a state `q` with
/// `(Inf(i), q) ∈ γ`, where `Inf(i)` is the set of states occurring
/// unboundedly often below `i` (limit positions included). The word is
/// accepted when some run ends in `F` at position ω^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinalAutomaton {
    alphabet: Alphabet,
    level: usize,
    initial: State,
    trans: Vec<Vec<Vec<State>>>,
    gamma: BTreeMap<StateSet, Vec<State>>,
    final_states: StateSet,
}

impl OrdinalAutomaton {
    pub fn new(
        alphabet: Alphabet,
        level: usize,
        num_states: usize,
        initial: State,
        delta: impl IntoIterator<Item = (State, Letter, State)>,
        gamma: impl IntoIterator<Item = (StateSet, State)>,
        final_states: StateSet,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
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
        for row in &mut trans {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        let mut limits: BTreeMap<StateSet, Vec<State>> = BTreeMap::new();
        for (set, q) in gamma {
            if set.is_empty() {
                return Err(Error::Invalid("limit transition on the empty set".into()));
            }
            if set.iter().chain([&q]).any(|&s| s >= num_states) {
                return Err(Error::Invalid("limit transition uses unknown state".into()));
            }
            limits.entry(set).or_default().push(q);
        }
        for targets in limits.values_mut() {
            targets.sort_unstable();
            targets.dedup();
        }
        if final_states.iter().any(|&q| q >= num_states) {
            return Err(Error::Invalid("final state out of range".into()));
        }
        Ok(OrdinalAutomaton {
            alphabet,
            level,
            initial,
            trans,
            gamma: limits,
            final_states,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn final_states(&self) -> &StateSet {
        &self.final_states
    }

    pub fn succ(&self, q: State, a: Letter) -> &[State] {
        &self.trans[q][a as usize]
    }

    pub fn delta(&self) -> impl Iterator<Item = (State, Letter, State)> + '_ {
        self.trans.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a as Letter, q)))
        })
    }

    /// Limit targets for the set `set`.
    pub fn limit(&self, set: &StateSet) -> &[State] {
        self.gamma.get(set).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn gamma(&self) -> impl Iterator<Item = (&StateSet, State)> + '_ {
        self.gamma.iter().flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub(crate) fn gamma_sets(&self) -> impl Iterator<Item = (&StateSet, &[State])> + '_ {
        self.gamma.iter().map(|(s, ts)| (s, ts.as_slice()))
    }

    /// `Δ` is a total function and `γ` a partial function.
    pub fn is_deterministic(&self) -> bool {
        self.trans.iter().flatten().all(|s| s.len() == 1) && self.gamma.values().all(|t| t.len() == 1)
    }

    /// The same automaton read on words of another length.
    pub fn with_level(mut self, level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        self.level = level;
        Ok(self)
    }
}
