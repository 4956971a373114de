use std::collections::{BTreeSet, HashMap, VecDeque};

use super::acceptor::{Acceptance, OmegaAcceptor, State, StateSet};
use crate::alphabet::{Alphabet, Letter, LetterMap};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{closed_walk_sets, is_nontrivial, reachable, sccs, LabeledEdge};

/// Bound on enumerated recurrence sets when listing a Muller family.
pub const DEFAULT_FAMILY_CAP: usize = 4096;

/// Target kind of [`OmegaAcceptor::convert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcceptanceKind {
    Buchi,
    Muller,
}

impl OmegaAcceptor {
    /// Language-preserving change of acceptance kind.
    pub fn convert(&self, target: AcceptanceKind) -> Result<OmegaAcceptor> {
        match target {
            AcceptanceKind::Buchi => Ok(self.to_buchi()),
            AcceptanceKind::Muller => self.to_muller(DEFAULT_FAMILY_CAP),
        }
    }

    /// Büchi form. Muller sets become guessed copies that stay inside the set
    /// and cycle through its members with a counter.
    pub fn to_buchi(&self) -> OmegaAcceptor {
        let family = match self.acceptance() {
            Acceptance::Buchi(_) => return self.clone(),
            Acceptance::Muller(fam) => fam.clone(),
        };
        let n = self.num_states();
        let k = self.alphabet().len();
        // Layout: original states, then per set `F` the copies (q, i) for
        // q ∈ F and i ∈ 0..=|F| (i = |F| marks a completed round).
        let mut offsets = Vec::new();
        let mut total = n;
        for f in &family {
            offsets.push(total);
            total += f.len() * (f.len() + 1);
        }
        let mut trans = vec![vec![Vec::new(); k]; total];
        let mut accepting = StateSet::new();
        for (fi, f) in family.iter().enumerate() {
            let members: Vec<State> = f.iter().copied().collect();
            let m = members.len();
            let pos = |q: State| members.binary_search(&q).ok();
            let id = |q: State, i: usize| offsets[fi] + pos(q).unwrap() * (m + 1) + i;
            let advance = |i: usize, q2: State| {
                let i = if i == m { 0 } else { i };
                if members[i] == q2 {
                    i + 1
                } else {
                    i
                }
            };
            for &q in &members {
                accepting.insert(id(q, m));
            }
            for p in 0..n {
                for a in self.alphabet().letters() {
                    for &q2 in self.succ(p, a) {
                        if pos(q2).is_none() {
                            continue;
                        }
                        trans[p][a as usize].push(id(q2, advance(0, q2)));
                        if pos(p).is_some() {
                            for i in 0..=m {
                                trans[id(p, i)][a as usize].push(id(q2, advance(i, q2)));
                            }
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for a in 0..k {
                trans[p][a].extend(self.table()[p][a].iter().copied());
            }
        }
        OmegaAcceptor::from_parts(
            self.alphabet().clone(),
            self.initial(),
            trans,
            Acceptance::Buchi(accepting),
        )
        .trim()
    }

    /// Muller form listing every reachable recurrence set that meets an
    /// accepting state.
    pub fn to_muller(&self, cap: usize) -> Result<OmegaAcceptor> {
        let f = match self.acceptance() {
            Acceptance::Muller(_) => return Ok(self.clone()),
            Acceptance::Buchi(f) => f,
        };
        let n = self.num_states();
        let seen = reachable(n, &[self.initial()], |q| self.all_succ(q).collect::<Vec<_>>());
        let mut edges = Vec::new();
        for p in (0..n).filter(|&p| seen[p]) {
            let targets: BTreeSet<State> = self.all_succ(p).collect();
            for q in targets {
                edges.push(LabeledEdge {
                    from: p,
                    to: q,
                    label: [p].into_iter().collect(),
                });
            }
        }
        let family: Vec<StateSet> = closed_walk_sets(n, &edges, cap)?
            .into_iter()
            .filter(|w| !w.labels.is_disjoint(f))
            .map(|w| w.labels)
            .collect();
        Ok(OmegaAcceptor::from_parts(
            self.alphabet().clone(),
            self.initial(),
            self.table().to_vec(),
            Acceptance::Muller(family),
        ))
    }

    /// Drops states that are unreachable or cannot reach an accepting cycle.
    /// Muller acceptors are returned unchanged.
    pub fn trim(&self) -> OmegaAcceptor {
        let f = match self.acceptance() {
            Acceptance::Buchi(f) => f,
            Acceptance::Muller(_) => return self.clone(),
        };
        let n = self.num_states();
        let fwd = reachable(n, &[self.initial()], |q| self.all_succ(q).collect::<Vec<_>>());
        let comps = sccs(n, |q| self.all_succ(q).collect::<Vec<_>>());
        let mut seeds = Vec::new();
        for c in &comps {
            if fwd[c[0]]
                && c.iter().any(|q| f.contains(q))
                && is_nontrivial(c, |q| self.all_succ(q).collect::<Vec<_>>())
            {
                seeds.extend(c.iter().copied());
            }
        }
        let mut pred: Vec<Vec<State>> = vec![Vec::new(); n];
        for (p, _, q) in self.delta() {
            pred[q].push(p);
        }
        let bwd = reachable(n, &seeds, |q| pred[q].clone());
        let keep: Vec<bool> = (0..n).map(|q| fwd[q] && bwd[q]).collect();
        if !keep[self.initial()] {
            return OmegaAcceptor::empty(self.alphabet());
        }
        if keep.iter().all(|&k| k) {
            return self.clone();
        }
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if keep[q] {
                index[q] = next;
                next += 1;
            }
        }
        let trans = (0..n)
            .filter(|&q| keep[q])
            .map(|q| {
                self.table()[q]
                    .iter()
                    .map(|succ| succ.iter().filter(|&&s| keep[s]).map(|&s| index[s]).collect())
                    .collect()
            })
            .collect();
        let acc = f.iter().filter(|&&q| keep[q]).map(|&q| index[q]).collect();
        OmegaAcceptor::from_parts(
            self.alphabet().clone(),
            index[self.initial()],
            trans,
            Acceptance::Buchi(acc),
        )
    }

    /// `L(self) ∪ L(other)`: a fresh initial state in front of both.
    pub fn union(&self, other: &OmegaAcceptor) -> Result<OmegaAcceptor> {
        self.alphabet().ensure_same(other.alphabet())?;
        let a = self.to_buchi();
        let b = other.to_buchi();
        let (na, nb, k) = (a.num_states(), b.num_states(), a.alphabet().len());
        let mut trans = vec![vec![Vec::new(); k]; 1 + na + nb];
        for l in 0..k {
            let mut first: Vec<State> = a.table()[a.initial()][l].iter().map(|&q| q + 1).collect();
            first.extend(b.table()[b.initial()][l].iter().map(|&q| q + 1 + na));
            trans[0][l] = first;
        }
        for p in 0..na {
            for l in 0..k {
                trans[1 + p][l] = a.table()[p][l].iter().map(|&q| q + 1).collect();
            }
        }
        for p in 0..nb {
            for l in 0..k {
                trans[1 + na + p][l] = b.table()[p][l].iter().map(|&q| q + 1 + na).collect();
            }
        }
        let mut acc = StateSet::new();
        if let Acceptance::Buchi(f) = a.acceptance() {
            acc.extend(f.iter().map(|&q| q + 1));
        }
        if let Acceptance::Buchi(f) = b.acceptance() {
            acc.extend(f.iter().map(|&q| q + 1 + na));
        }
        Ok(OmegaAcceptor::from_parts(a.alphabet().clone(), 0, trans, Acceptance::Buchi(acc)).reduce())
    }

    /// `L(self) ∩ L(other)` by the two-phase Büchi product.
    pub fn intersect(&self, other: &OmegaAcceptor, budget: &Budget) -> Result<OmegaAcceptor> {
        self.alphabet().ensure_same(other.alphabet())?;
        let a = self.to_buchi().trim();
        let b = other.to_buchi().trim();
        let (fa, fb) = match (a.acceptance(), b.acceptance()) {
            (Acceptance::Buchi(x), Acceptance::Buchi(y)) => (x.clone(), y.clone()),
            _ => unreachable!("to_buchi"),
        };
        let k = a.alphabet().len();
        let full_a = fa.len() == a.num_states();
        let full_b = fb.len() == b.num_states();
        // With one side accepting everywhere the phase bit is unnecessary.
        let phased = !(full_a || full_b);
        let mut index: HashMap<(State, State, u8), State> = HashMap::new();
        let mut order: Vec<(State, State, u8)> = Vec::new();
        let mut queue = VecDeque::new();
        let start = (a.initial(), b.initial(), 0u8);
        index.insert(start, 0);
        order.push(start);
        queue.push_back(start);
        let mut trans: Vec<Vec<Vec<State>>> = Vec::new();
        while let Some((p, q, ph)) = queue.pop_front() {
            let mut row = vec![Vec::new(); k];
            let next_phase = if !phased {
                0
            } else if ph == 0 {
                u8::from(fa.contains(&p))
            } else {
                u8::from(!fb.contains(&q))
            };
            for l in 0..k as Letter {
                for &p2 in a.succ(p, l) {
                    for &q2 in b.succ(q, l) {
                        let key = (p2, q2, next_phase);
                        let id = match index.get(&key) {
                            Some(&id) => id,
                            None => {
                                let id = order.len();
                                index.insert(key, id);
                                order.push(key);
                                queue.push_back(key);
                                if order.len() > budget.per_automaton() {
                                    budget.check(order.len())?;
                                }
                                id
                            }
                        };
                        row[l as usize].push(id);
                    }
                }
            }
            trans.push(row);
        }
        budget.charge(order.len())?;
        let acc: StateSet = order
            .iter()
            .enumerate()
            .filter(|(_, &(p, q, ph))| {
                if phased {
                    ph == 0 && fa.contains(&p)
                } else if full_a {
                    fb.contains(&q)
                } else {
                    fa.contains(&p)
                }
            })
            .map(|(i, _)| i)
            .collect();
        Ok(OmegaAcceptor::from_parts(a.alphabet().clone(), 0, trans, Acceptance::Buchi(acc)).reduce())
    }

    /// Forward image under a letter map (nondeterministic projection).
    pub fn map_letters(&self, f: &LetterMap) -> Result<OmegaAcceptor> {
        self.alphabet().ensure_same(f.source())?;
        let k = f.target().len();
        let trans = self
            .table()
            .iter()
            .map(|row| {
                let mut out = vec![Vec::new(); k];
                for (a, succ) in row.iter().enumerate() {
                    out[f.apply(a as Letter) as usize].extend(succ.iter().copied());
                }
                out
            })
            .collect();
        Ok(OmegaAcceptor::from_parts(f.target().clone(), self.initial(), trans, self.acceptance().clone()).reduce())
    }

    /// Letterwise preimage: accepts `w` iff `f(w)` is accepted.
    pub fn preimage(&self, f: &LetterMap) -> Result<OmegaAcceptor> {
        self.alphabet().ensure_same(f.target())?;
        let trans = self
            .table()
            .iter()
            .map(|row| f.source().letters().map(|b| row[f.apply(b) as usize].clone()).collect())
            .collect();
        Ok(OmegaAcceptor::from_parts(
            f.source().clone(),
            self.initial(),
            trans,
            self.acceptance().clone(),
        ))
    }

    /// Re-letters over `alphabet`, where new letter `b` stands for every old
    /// letter in `meaning[b]`.
    pub fn preimage_relation(&self, alphabet: &Alphabet, meaning: &[Vec<Letter>]) -> Result<OmegaAcceptor> {
        if meaning.len() != alphabet.len() {
            return Err(Error::Invalid("relation must cover the new alphabet".into()));
        }
        for ls in meaning {
            for &l in ls {
                self.alphabet().check(l)?;
            }
        }
        let trans = self
            .table()
            .iter()
            .map(|row| {
                meaning
                    .iter()
                    .map(|ls| ls.iter().flat_map(|&l| row[l as usize].iter().copied()).collect())
                    .collect()
            })
            .collect();
        Ok(OmegaAcceptor::from_parts(
            alphabet.clone(),
            self.initial(),
            trans,
            self.acceptance().clone(),
        ))
    }

    /// Removes every transition on a letter outside `keep`.
    pub fn restrict_letters(&self, keep: &[bool]) -> OmegaAcceptor {
        let trans = self
            .table()
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(a, s)| if keep[a] { s.clone() } else { Vec::new() })
                    .collect()
            })
            .collect();
        OmegaAcceptor::from_parts(
            self.alphabet().clone(),
            self.initial(),
            trans,
            self.acceptance().clone(),
        )
    }
}
