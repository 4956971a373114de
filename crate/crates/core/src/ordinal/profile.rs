//! Run-segment profiles.
//!
//! A level-k profile `(s, t, O)` summarizes a run on a segment of length
//! ω^k: it starts in `s`, `O` is the set of states at positions `[0, ω^k)`
//! (so `s ∈ O`), and `t` is the state at position ω^k. Level 0 profiles are
//! single letters, with `O = {s}`. At a limit ω^(k+1), `Inf` is the set of
//! states lying in infinitely many block occupancies, so profiles of level
//! k+1 follow from lasso analysis over level-k profiles.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::OrdinalAutomaton;
use crate::error::Result;
use crate::graph::sccs;
use crate::omega::{State, StateSet};
use crate::word::HierWord;

/// For every start state, the realizable `(landing, occupancy)` pairs.
pub type Steps = Vec<BTreeSet<(State, StateSet)>>;

impl OrdinalAutomaton {
    /// Level-0 profiles of a letter.
    fn letter_steps(&self, a: crate::alphabet::Letter) -> Steps {
        (0..self.num_states())
            .map(|q| {
                self.succ(q, a)
                    .iter()
                    .map(|&t| (t, [q].into_iter().collect()))
                    .collect()
            })
            .collect()
    }

    /// Profiles of an ω-sequence of segments presented as a lasso of their
    /// step relations.
    pub(crate) fn lasso_profiles(&self, prefix: &[&Steps], period: &[&Steps]) -> Steps {
        let n = self.num_states();
        let len = prefix.len() + period.len();
        let at = |pos: usize| {
            if pos < prefix.len() {
                prefix[pos]
            } else {
                period[pos - prefix.len()]
            }
        };
        let next = |pos: usize| if pos + 1 < len { pos + 1 } else { prefix.len() };
        let nodes = n * len;
        let edges: Vec<Vec<(usize, &StateSet)>> = (0..nodes)
            .map(|v| {
                let (q, pos) = (v / len, v % len);
                at(pos)[q].iter().map(|(t, o)| (t * len + next(pos), o)).collect()
            })
            .collect();

        // good[i][v]: node v lies on a closed walk whose occupancy union is
        // exactly the i-th limit set.
        let sets: Vec<(&StateSet, &[State])> = self.gamma_sets().collect();
        let mut good: Vec<Vec<bool>> = Vec::with_capacity(sets.len());
        for (set, _) in &sets {
            let allowed = |o: &StateSet| o.is_subset(set);
            let comps = sccs(nodes, |v| {
                edges[v]
                    .iter()
                    .filter(|(_, o)| allowed(o))
                    .map(|&(w, _)| w)
                    .collect::<Vec<_>>()
            });
            let mut comp_of = vec![usize::MAX; nodes];
            for (i, c) in comps.iter().enumerate() {
                for &v in c {
                    comp_of[v] = i;
                }
            }
            let mut flags = vec![false; nodes];
            for (i, c) in comps.iter().enumerate() {
                let mut union = StateSet::new();
                let mut cyclic = false;
                for &v in c {
                    for (w, o) in &edges[v] {
                        if comp_of[*w] == i && allowed(o) {
                            cyclic = true;
                            union.extend(o.iter().copied());
                        }
                    }
                }
                if cyclic && &union == *set {
                    for &v in c {
                        flags[v] = true;
                    }
                }
            }
            good.push(flags);
        }

        let mut out: Steps = vec![BTreeSet::new(); n];
        for s in 0..n {
            let start = (s * len, StateSet::new());
            let mut seen: HashSet<(usize, StateSet)> = HashSet::new();
            let mut stack = vec![start.clone()];
            seen.insert(start);
            while let Some((v, acc)) = stack.pop() {
                for (i, (set, targets)) in sets.iter().enumerate() {
                    if good[i][v] {
                        let total: StateSet = acc.union(set).copied().collect();
                        for &t in *targets {
                            out[s].insert((t, total.clone()));
                        }
                    }
                }
                for (w, o) in &edges[v] {
                    let next_acc: StateSet = acc.union(o).copied().collect();
                    let key = (*w, next_acc);
                    if !seen.contains(&key) {
                        seen.insert(key.clone());
                        stack.push(key);
                    }
                }
            }
        }
        out
    }

    /// Level-k profiles of a word of level k.
    pub fn word_profiles(&self, word: &HierWord) -> Result<Steps> {
        word.check(self.alphabet())?;
        let mut memo: HashMap<&HierWord, Steps> = HashMap::new();
        Ok(self.word_profiles_memo(word, &mut memo))
    }

    fn word_profiles_memo<'w>(&self, word: &'w HierWord, memo: &mut HashMap<&'w HierWord, Steps>) -> Steps {
        if let Some(s) = memo.get(word) {
            return s.clone();
        }
        let result = match word {
            HierWord::Lasso(w) => {
                let u: Vec<Steps> = w.prefix().iter().map(|&a| self.letter_steps(a)).collect();
                let v: Vec<Steps> = w.period().iter().map(|&a| self.letter_steps(a)).collect();
                self.lasso_profiles(&u.iter().collect::<Vec<_>>(), &v.iter().collect::<Vec<_>>())
            }
            HierWord::Spine { prefix, period, .. } => {
                let u: Vec<Steps> = prefix.iter().map(|b| self.word_profiles_memo(b, memo)).collect();
                let v: Vec<Steps> = period.iter().map(|b| self.word_profiles_memo(b, memo)).collect();
                self.lasso_profiles(&u.iter().collect::<Vec<_>>(), &v.iter().collect::<Vec<_>>())
            }
        };
        memo.insert(word, result.clone());
        result
    }

    /// Membership by profile analysis; handles nondeterministic automata.
    pub fn accepts(&self, word: &HierWord) -> Result<bool> {
        word.check_level(self.level())?;
        let steps = self.word_profiles(word)?;
        Ok(steps[self.initial()]
            .iter()
            .any(|(t, _)| self.final_states().contains(t)))
    }

    /// Realizable profiles of every level `0..=level()`: entry `k` holds,
    /// for each start state, the profiles of some word of length ω^k.
    pub fn realizable_profiles(&self) -> Vec<Steps> {
        let n = self.num_states();
        let mut levels: Vec<Steps> = Vec::with_capacity(self.level() + 1);
        let mut base: Steps = vec![BTreeSet::new(); n];
        for a in self.alphabet().letters() {
            for (q, set) in self.letter_steps(a).into_iter().enumerate() {
                base[q].extend(set);
            }
        }
        levels.push(base);
        for _ in 0..self.level() {
            let next = self.lasso_profiles(&[], &[levels.last().unwrap()]);
            levels.push(next);
        }
        levels
    }

    /// Emptiness decided directly on realizable profiles, independently of
    /// the normal-form conversion.
    pub fn is_empty_by_profiles(&self) -> bool {
        let top = self.realizable_profiles().pop().unwrap();
        !top[self.initial()].iter().any(|(t, _)| self.final_states().contains(t))
    }
}
