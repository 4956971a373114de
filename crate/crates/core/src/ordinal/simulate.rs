//! Direct simulation of the unique run of a deterministic automaton.

use std::collections::HashMap;

use super::OrdinalAutomaton;
use crate::error::{Error, Result};
use crate::omega::{State, StateSet};
use crate::word::HierWord;

/// Outcome of [`OrdinalAutomaton::simulate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub accepted: bool,
    /// State at position ω^n, or `None` when the run dies at a limit.
    pub final_state: Option<State>,
}

impl OrdinalAutomaton {
    /// Runs a deterministic automaton on `word`.
    ///
    /// Each lasso is unrolled until the state at the start of a period
    /// repeats; `Inf` at the limit is the union of the occupancies of the
    /// periods on the detected cycle. A limit set without a `γ` entry kills
    /// the run, which is a rejection rather than an error.
    pub fn simulate(&self, word: &HierWord) -> Result<Simulation> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        word.check_level(self.level())?;
        word.check(self.alphabet())?;
        let final_state = self.segment(word, self.initial()).map(|(t, _)| t);
        Ok(Simulation {
            accepted: final_state.is_some_and(|t| self.final_states().contains(&t)),
            final_state,
        })
    }

    /// Landing state and occupancy of the run segment on `word` from `s`.
    fn segment(&self, word: &HierWord, s: State) -> Option<(State, StateSet)> {
        match word {
            HierWord::Lasso(w) => self.run_lasso(w.prefix(), w.period(), s, &|q, a| {
                Some((self.succ(q, *a)[0], [q].into_iter().collect()))
            }),
            HierWord::Spine { prefix, period, .. } => self.run_lasso(prefix, period, s, &|q, b| self.segment(b, q)),
        }
    }

    fn run_lasso<T>(
        &self,
        prefix: &[T],
        period: &[T],
        s: State,
        step: &dyn Fn(State, &T) -> Option<(State, StateSet)>,
    ) -> Option<(State, StateSet)> {
        let mut q = s;
        let mut occ = StateSet::new();
        for x in prefix {
            let (t, o) = step(q, x)?;
            occ.extend(o);
            q = t;
        }
        let mut first_seen: HashMap<State, usize> = HashMap::new();
        let mut rounds: Vec<StateSet> = Vec::new();
        while !first_seen.contains_key(&q) {
            first_seen.insert(q, rounds.len());
            let mut round = StateSet::new();
            for x in period {
                let (t, o) = step(q, x)?;
                round.extend(o);
                q = t;
            }
            occ.extend(round.iter().copied());
            rounds.push(round);
        }
        let inf: StateSet = rounds[first_seen[&q]..].iter().flatten().copied().collect();
        let landing = *self.limit(&inf).first()?;
        Some((landing, occ))
    }
}
