//! Infinite binary trees presented by finite graphs, the tree encoding of
//! ω^n-words, Muller tree automata and run certificates.

mod encode;
mod run;
#[cfg(test)]
mod tests;
mod translate;

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::omega::{State, StateSet};

pub use encode::{encode_word_tree, validate_encoding};
pub use run::{find_run, verify_run, DEFAULT_SCC_CAP};
pub use translate::hnf_to_tree_automaton;

/// A regular infinite binary tree: the unfolding of a finite graph whose
/// nodes carry a label and a left and a right successor. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularTree {
    alphabet: Alphabet,
    labels: Vec<Letter>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl RegularTree {
    pub fn new(alphabet: Alphabet, labels: Vec<Letter>, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || left.len() != n || right.len() != n {
            return Err(Error::Invalid("a tree needs a root and two successors per node".into()));
        }
        for &l in &labels {
            alphabet.check(l)?;
        }
        if let Some(&bad) = left.iter().chain(&right).find(|&&s| s >= n) {
            return Err(Error::Invalid(format!("successor {bad} out of range")));
        }
        Ok(RegularTree {
            alphabet,
            labels,
            left,
            right,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, node: usize) -> Letter {
        self.labels[node]
    }

    pub fn left(&self, node: usize) -> usize {
        self.left[node]
    }

    pub fn right(&self, node: usize) -> usize {
        self.right[node]
    }

    /// Graph node reached by a path of `l`/`r` steps from the root.
    pub fn node_at(&self, path: &str) -> Result<usize> {
        path.chars().try_fold(0, |v, c| match c {
            'l' => Ok(self.left[v]),
            'r' => Ok(self.right[v]),
            _ => Err(Error::Invalid(format!("bad direction `{c}`"))),
        })
    }

    /// Label of the tree position reached by `path`.
    pub fn at(&self, path: &str) -> Result<Letter> {
        Ok(self.labels[self.node_at(path)?])
    }

    /// Merges nodes with equal unfoldings; the result has exactly one node
    /// per distinct subtree reachable from the root.
    pub fn minimize(&self) -> RegularTree {
        let n = self.len();
        let mut class: Vec<usize> = self.labels.iter().map(|&l| l as usize).collect();
        loop {
            let mut ids = std::collections::HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|v| {
                    let key = (class[v], class[self.left[v]], class[self.right[v]]);
                    let k = ids.len();
                    *ids.entry(key).or_insert(k)
                })
                .collect();
            let stable = ids.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // Renumber classes breadth-first from the root.
        let mut index = HashMap::new();
        let mut order = vec![0];
        index.insert(class[0], 0);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for w in [self.left[v], self.right[v]] {
                if let Entry::Vacant(e) = index.entry(class[w]) {
                    e.insert(order.len());
                    order.push(w);
                }
            }
            i += 1;
        }
        RegularTree {
            alphabet: self.alphabet.clone(),
            labels: order.iter().map(|&v| self.labels[v]).collect(),
            left: order.iter().map(|&v| index[&class[self.left[v]]]).collect(),
            right: order.iter().map(|&v| index[&class[self.right[v]]]).collect(),
        }
    }
}

/// A nondeterministic Muller tree automaton: transitions
/// `(q, a, q_left, q_right)` and a family of accepted recurrence sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MullerTreeAutomaton {
    alphabet: Alphabet,
    initial: State,
    trans: Vec<Vec<Vec<(State, State)>>>,
    family: BTreeSet<StateSet>,
}

impl MullerTreeAutomaton {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: State,
        delta: impl IntoIterator<Item = (State, Letter, State, State)>,
        family: impl IntoIterator<Item = StateSet>,
    ) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::Invalid("initial state out of range".into()));
        }
        let mut trans = vec![vec![Vec::new(); alphabet.len()]; num_states];
        for (q, a, l, r) in delta {
            alphabet.check(a)?;
            if q.max(l).max(r) >= num_states {
                return Err(Error::Invalid("transition state out of range".into()));
            }
            let row: &mut Vec<(State, State)> = &mut trans[q][a as usize];
            if !row.contains(&(l, r)) {
                row.push((l, r));
            }
        }
        for row in trans.iter_mut().flatten() {
            row.sort_unstable();
        }
        let family: BTreeSet<StateSet> = family.into_iter().collect();
        if family.iter().flatten().any(|&q| q >= num_states) {
            return Err(Error::Invalid("family state out of range".into()));
        }
        Ok(MullerTreeAutomaton {
            alphabet,
            initial,
            trans,
            family,
        })
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

    pub fn moves(&self, q: State, a: Letter) -> &[(State, State)] {
        &self.trans[q][a as usize]
    }

    pub fn delta(&self) -> impl Iterator<Item = (State, Letter, State, State)> + '_ {
        self.trans.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, moves)| moves.iter().map(move |&(l, r)| (q, a as Letter, l, r)))
        })
    }

    pub fn family(&self) -> &BTreeSet<StateSet> {
        &self.family
    }

    pub fn accepts_set(&self, set: &StateSet) -> bool {
        self.family.contains(set)
    }
}

/// A node of a run certificate: the tree node it sits on, its state, and
/// the certificate nodes below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CertNode {
    pub tree: usize,
    pub state: State,
    pub left: usize,
    pub right: usize,
}

/// A regular run presented as a finite graph mapped onto the input tree's
/// graph. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunCertificate {
    pub nodes: Vec<CertNode>,
}
