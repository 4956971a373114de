//! Membership of ultimately periodic words, emptiness, and witnesses.

use std::collections::{HashSet, VecDeque};

use super::acceptor::{Acceptance, OmegaAcceptor, State};
use super::lasso::LassoWord;
use crate::alphabet::Letter;
use crate::error::Result;
use crate::graph::{exact_projection_cycle, is_nontrivial, reachable, sccs};

impl OmegaAcceptor {
    /// Whether `u · v^ω` is accepted.
    pub fn accepts(&self, word: &LassoWord) -> Result<bool> {
        word.check(self.alphabet())?;
        let single = |ls: &[Letter]| ls.iter().map(|&l| vec![l]).collect::<Vec<_>>();
        Ok(self.accepts_pattern(&single(word.prefix()), &single(word.period())))
    }

    /// Membership for an ultimately periodic sequence of letter *sets*: is
    /// some word `w` with `w(i) ∈ S_i` accepted? Used to classify blocks
    /// against several letter languages at once.
    pub fn accepts_pattern(&self, prefix: &[Vec<Letter>], period: &[Vec<Letter>]) -> bool {
        assert!(!period.is_empty(), "pattern period must be nonempty");
        let len = prefix.len() + period.len();
        let at = |pos: usize| {
            if pos < prefix.len() {
                &prefix[pos]
            } else {
                &period[pos - prefix.len()]
            }
        };
        let next = |pos: usize| if pos + 1 < len { pos + 1 } else { prefix.len() };
        let n = self.num_states() * len;
        let succ = |v: usize| {
            let (q, pos) = (v / len, v % len);
            let np = next(pos);
            at(pos)
                .iter()
                .flat_map(|&a| self.succ(q, a).iter().map(move |&q2| q2 * len + np))
                .collect::<Vec<_>>()
        };
        let seen = reachable(n, &[self.initial() * len], succ);
        let nodes: Vec<usize> = (0..n).filter(|&v| seen[v]).collect();
        match self.acceptance() {
            Acceptance::Buchi(f) => {
                let local: Vec<usize> = nodes.clone();
                let index = |v: usize| local.binary_search(&v).ok();
                let adj: Vec<Vec<usize>> = local
                    .iter()
                    .map(|&v| succ(v).into_iter().filter_map(index).collect())
                    .collect();
                sccs(local.len(), |i| adj[i].clone()).iter().any(|comp| {
                    is_nontrivial(comp, |i| adj[i].clone()) && comp.iter().any(|&i| f.contains(&(local[i] / len)))
                })
            }
            Acceptance::Muller(fam) => fam
                .iter()
                .any(|set| exact_projection_cycle(&nodes, set, succ, |v| v / len).is_some()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// Some accepted lasso word, if the language is nonempty.
    pub fn witness(&self) -> Option<LassoWord> {
        let n = self.num_states();
        let seen = reachable(n, &[self.initial()], |q| self.all_succ(q).collect::<Vec<_>>());
        let nodes: Vec<State> = (0..n).filter(|&q| seen[q]).collect();
        let cycle: Vec<State> = match self.acceptance() {
            Acceptance::Buchi(f) => {
                let comps = sccs(n, |q| {
                    if seen[q] {
                        self.all_succ(q).collect::<Vec<_>>()
                    } else {
                        Vec::new()
                    }
                });
                let comp = comps.into_iter().find(|c| {
                    seen[c[0]]
                        && is_nontrivial(c, |q| self.all_succ(q).collect::<Vec<_>>())
                        && c.iter().any(|q| f.contains(q))
                })?;
                let s = *comp.iter().find(|q| f.contains(q)).unwrap();
                vec![s]
            }
            Acceptance::Muller(fam) => fam
                .iter()
                .find_map(|set| exact_projection_cycle(&nodes, set, |q| self.all_succ(q).collect::<Vec<_>>(), |q| q))?,
        };
        let comp: HashSet<State> = match self.acceptance() {
            Acceptance::Buchi(_) => {
                // Whole component of the accepting state.
                let s = cycle[0];
                let fwd = reachable(n, &[s], |q| self.all_succ(q).collect::<Vec<_>>());
                (0..n)
                    .filter(|&q| fwd[q] && self.path(q, s, &|_| true, false).is_some())
                    .collect()
            }
            Acceptance::Muller(_) => cycle.iter().copied().collect(),
        };
        let s = cycle[0];
        let prefix = self.path(self.initial(), s, &|_| true, false)?;
        let inside = |q: State| comp.contains(&q);
        let mut period = Vec::new();
        let mut at = s;
        for &t in cycle.iter().skip(1) {
            period.extend(self.path(at, t, &inside, false)?);
            at = t;
        }
        period.extend(self.path(at, s, &inside, true)?);
        LassoWord::new(prefix, period).ok()
    }

    /// Letters of a shortest path `from → to` through states allowed by
    /// `inside`; with `nonempty`, at least one step is taken.
    pub(crate) fn path(
        &self,
        from: State,
        to: State,
        inside: &dyn Fn(State) -> bool,
        nonempty: bool,
    ) -> Option<Vec<Letter>> {
        if from == to && !nonempty {
            return Some(Vec::new());
        }
        let n = self.num_states();
        let mut back: Vec<Option<(State, Letter)>> = vec![None; n];
        let mut queue = VecDeque::new();
        let mut seen = vec![false; n];
        for a in self.alphabet().letters() {
            for &q in self.succ(from, a) {
                if inside(q) && !seen[q] {
                    seen[q] = true;
                    back[q] = Some((from, a));
                    queue.push_back(q);
                }
            }
        }
        while let Some(p) = queue.pop_front() {
            if p == to {
                break;
            }
            for a in self.alphabet().letters() {
                for &q in self.succ(p, a) {
                    if inside(q) && !seen[q] {
                        seen[q] = true;
                        back[q] = Some((p, a));
                        queue.push_back(q);
                    }
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut letters = Vec::new();
        let mut cur = to;
        loop {
            let (p, a) = back[cur].expect("bfs back pointer");
            letters.push(a);
            // Only the first BFS layer points back at `from`.
            if p == from {
                break;
            }
            cur = p;
        }
        letters.reverse();
        Some(letters)
    }
}
