use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 100_000;
pub const DEFAULT_TOTAL_BUDGET: usize = 1_000_000;

/// State-count guard for exponential constructions.
///
/// `per_automaton` bounds every single acceptor built at any level;
/// `total` bounds the sum of states built over the budget's lifetime.
#[derive(Debug)]
pub struct Budget {
    per_automaton: usize,
    total: Option<usize>,
    spent: AtomicUsize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_STATE_CAP, None)
    }
}

impl Budget {
    pub fn new(per_automaton: usize, total: Option<usize>) -> Self {
        Budget {
            per_automaton,
            total,
            spent: AtomicUsize::new(0),
        }
    }

    /// Budget used by one model-checking run.
    pub fn model_checking() -> Self {
        Budget::new(DEFAULT_STATE_CAP, Some(DEFAULT_TOTAL_BUDGET))
    }

    pub fn unlimited() -> Self {
        Budget::new(usize::MAX, None)
    }

    pub fn per_automaton(&self) -> usize {
        self.per_automaton
    }

    pub fn spent(&self) -> usize {
        self.spent.load(Ordering::Relaxed)
    }

    /// Checks a state count that is about to be materialized.
    pub fn check(&self, states: usize) -> Result<()> {
        if states > self.per_automaton {
            return Err(Error::Resource {
                what: "states per automaton",
                count: states,
                limit: self.per_automaton,
            });
        }
        Ok(())
    }

    /// Records `states` freshly built states against the total budget.
    pub fn charge(&self, states: usize) -> Result<()> {
        self.check(states)?;
        let spent = self.spent.fetch_add(states, Ordering::Relaxed) + states;
        match self.total {
            Some(limit) if spent > limit => Err(Error::Resource {
                what: "total states",
                count: spent,
                limit,
            }),
            _ => Ok(()),
        }
    }
}
