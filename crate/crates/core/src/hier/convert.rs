//! Conversions between ordinal automata and the normal form.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{HnfAcceptor, TOP_LETTER_PREFIX};
use crate::alphabet::{Alphabet, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{closed_walk_sets, LabeledEdge};
use crate::omega::{Acceptance, OmegaAcceptor, State, StateSet};
use crate::ordinal::OrdinalAutomaton;

/// What a segment acceptor recognizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Target {
    /// Segments with profile `(s, t, occ)`.
    Segment { s: State, t: State, occ: StateSet },
    /// Whole words: runs from the initial state landing in a final state.
    Whole,
}

type Profile = (State, State, StateSet);

struct ToHnf<'a> {
    a: &'a OrdinalAutomaton,
    budget: &'a Budget,
    realizable: Vec<crate::ordinal::Steps>,
    letters: HashMap<usize, (Vec<Profile>, Vec<HnfAcceptor>)>,
    memo: HashMap<(usize, Target), HnfAcceptor>,
}

/// Normal form of an ordinal automaton.
///
/// For each realizable level-k profile `(s, t, O)` the words admitting a
/// segment run with that profile form a level-k language, built recursively.
/// The level-(k+1) top reads these profiles as letters, chains their end
/// points and tracks the accumulated occupancy; it accepts when, from some
/// point on, only profiles with occupancy inside a limit set `S` occur and
/// every state of `S` is covered infinitely often, with `(S, t) ∈ γ`.
pub fn ordinal_to_hnf(a: &OrdinalAutomaton, budget: &Budget) -> Result<HnfAcceptor> {
    let mut cx = ToHnf {
        a,
        budget,
        realizable: a.realizable_profiles(),
        letters: HashMap::new(),
        memo: HashMap::new(),
    };
    cx.build(a.level(), Target::Whole)
}

/// Position of the next uncovered member of `set` after reading `occ`.
fn advance(set: &[State], i: usize, occ: &StateSet) -> usize {
    let mut j = if i == set.len() { 0 } else { i };
    while j < set.len() && occ.contains(&set[j]) {
        j += 1;
    }
    j
}

impl ToHnf<'_> {
    /// Limit sets usable by `target`, sorted.
    fn limit_sets(&self, target: &Target) -> Vec<Vec<State>> {
        self.a
            .gamma_sets()
            .filter(|(set, ts)| match target {
                Target::Whole => ts.iter().any(|t| self.a.final_states().contains(t)),
                Target::Segment { t, occ, .. } => ts.contains(t) && set.is_subset(occ),
            })
            .map(|(set, _)| set.iter().copied().collect())
            .collect()
    }

    fn build(&mut self, k: usize, target: Target) -> Result<HnfAcceptor> {
        if let Some(h) = self.memo.get(&(k, target.clone())) {
            return Ok(h.clone());
        }
        let h = if k == 1 {
            HnfAcceptor::base(self.base(&target)?)
        } else {
            self.nested(k, &target)?
        };
        self.memo.insert((k, target), h.clone());
        Ok(h)
    }

    fn base(&self, target: &Target) -> Result<OmegaAcceptor> {
        let a = self.a;
        let sigma = a.alphabet().clone();
        let sets = self.limit_sets(target);
        match target {
            Target::Whole => {
                let family: Vec<StateSet> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                if family.is_empty() {
                    return Ok(OmegaAcceptor::empty(&sigma));
                }
                OmegaAcceptor::new(
                    sigma,
                    a.num_states(),
                    a.initial(),
                    a.delta().collect::<Vec<_>>(),
                    Acceptance::Muller(family),
                )
            }
            Target::Segment { s, occ, .. } => {
                if !occ.contains(s) || sets.is_empty() {
                    return Ok(OmegaAcceptor::empty(&sigma));
                }
                let mut index: HashMap<(State, StateSet), State> = HashMap::new();
                let mut order: Vec<(State, StateSet)> = Vec::new();
                let mut queue = VecDeque::new();
                let start = (*s, [*s].into_iter().collect::<StateSet>());
                index.insert(start.clone(), 0);
                order.push(start.clone());
                queue.push_back(start);
                let mut delta = Vec::new();
                while let Some((q, acc)) = queue.pop_front() {
                    let from = index[&(q, acc.clone())];
                    for l in sigma.letters() {
                        for &q2 in a.succ(q, l) {
                            let mut acc2 = acc.clone();
                            acc2.insert(q2);
                            if !acc2.is_subset(occ) {
                                continue;
                            }
                            let key = (q2, acc2);
                            let to = match index.get(&key) {
                                Some(&i) => i,
                                None => {
                                    let i = order.len();
                                    index.insert(key.clone(), i);
                                    order.push(key.clone());
                                    queue.push_back(key);
                                    i
                                }
                            };
                            delta.push((from, l, to));
                        }
                    }
                }
                self.budget.charge(order.len())?;
                let family: Vec<StateSet> = sets
                    .iter()
                    .filter_map(|set| set.iter().map(|&q| index.get(&(q, occ.clone())).copied()).collect())
                    .collect();
                if family.is_empty() {
                    return Ok(OmegaAcceptor::empty(&sigma));
                }
                OmegaAcceptor::new(sigma, order.len(), 0, delta, Acceptance::Muller(family))
            }
        }
    }

    /// Letters of level-k tops: every realizable profile of level k−1.
    fn letters(&mut self, level: usize) -> Result<(Vec<Profile>, Vec<HnfAcceptor>)> {
        if let Some(l) = self.letters.get(&level) {
            return Ok(l.clone());
        }
        let mut profiles: Vec<Profile> = Vec::new();
        for (s, set) in self.realizable[level].iter().enumerate() {
            for (t, occ) in set {
                profiles.push((s, *t, occ.clone()));
            }
        }
        let mut hnfs = Vec::with_capacity(profiles.len());
        for (s, t, occ) in &profiles {
            hnfs.push(self.build(
                level,
                Target::Segment {
                    s: *s,
                    t: *t,
                    occ: occ.clone(),
                },
            )?);
        }
        self.letters.insert(level, (profiles.clone(), hnfs.clone()));
        Ok((profiles, hnfs))
    }

    fn nested(&mut self, k: usize, target: &Target) -> Result<HnfAcceptor> {
        let (profiles, hnfs) = self.letters(k - 1)?;
        let sigma = self.a.alphabet().clone();
        if profiles.is_empty() {
            return Ok(HnfAcceptor::empty(&sigma, k));
        }
        let mut by_from: Vec<Vec<usize>> = vec![Vec::new(); self.a.num_states()];
        for (i, (s, _, _)) in profiles.iter().enumerate() {
            by_from[*s].push(i);
        }
        let sets = self.limit_sets(target);
        let (start_state, bound) = match target {
            Target::Whole => (self.a.initial(), None),
            Target::Segment { s, occ, .. } => (*s, Some(occ)),
        };
        // Top state: (state, accumulated occupancy, optional (limit set, counter)).
        type Key = (State, Option<StateSet>, Option<(usize, usize)>);
        let mut index: HashMap<Key, State> = HashMap::new();
        let mut order: Vec<Key> = Vec::new();
        let mut queue = VecDeque::new();
        let start: Key = (start_state, bound.map(|_| StateSet::new()), None);
        index.insert(start.clone(), 0);
        order.push(start.clone());
        queue.push_back(start);
        let mut delta: Vec<(State, Letter, State)> = Vec::new();
        while let Some(key) = queue.pop_front() {
            let from = index[&key];
            let (q, acc, phase) = key;
            for &li in &by_from[q] {
                let (_, q2, occ2) = &profiles[li];
                let acc2 = match (&acc, bound) {
                    (Some(a), Some(b)) => {
                        let u: StateSet = a.union(occ2).copied().collect();
                        if !u.is_subset(b) {
                            continue;
                        }
                        Some(u)
                    }
                    _ => None,
                };
                let mut succs: Vec<Option<(usize, usize)>> = Vec::new();
                match phase {
                    None => {
                        succs.push(None);
                        for (si, set) in sets.iter().enumerate() {
                            if occ2.iter().all(|x| set.binary_search(x).is_ok()) {
                                succs.push(Some((si, advance(set, 0, occ2))));
                            }
                        }
                    }
                    Some((si, i)) => {
                        let set = &sets[si];
                        if occ2.iter().all(|x| set.binary_search(x).is_ok()) {
                            succs.push(Some((si, advance(set, i, occ2))));
                        }
                    }
                }
                for ph in succs {
                    let key2: Key = (*q2, acc2.clone(), ph);
                    let to = match index.get(&key2) {
                        Some(&i) => i,
                        None => {
                            let i = order.len();
                            index.insert(key2.clone(), i);
                            order.push(key2.clone());
                            queue.push_back(key2);
                            if order.len() > self.budget.per_automaton() {
                                self.budget.check(order.len())?;
                            }
                            i
                        }
                    };
                    delta.push((from, li as Letter, to));
                }
            }
        }
        self.budget.charge(order.len())?;
        let accepting: StateSet = order
            .iter()
            .enumerate()
            .filter(|(_, (_, acc, ph))| match ph {
                Some((si, i)) => *i == sets[*si].len() && acc.as_ref() == bound,
                None => false,
            })
            .map(|(i, _)| i)
            .collect();
        let top = OmegaAcceptor::new(
            Alphabet::synthetic(TOP_LETTER_PREFIX, profiles.len()),
            order.len(),
            0,
            delta,
            Acceptance::Buchi(accepting),
        )?
        .trim();
        HnfAcceptor::nested(top, hnfs)
    }
}

/// Successor or limit target inside a [`Part`].
#[derive(Clone, Copy, Debug)]
enum Dest {
    State(State),
    /// The end of the part's own segment.
    End,
}

/// An ordinal automaton fragment reading one segment of length ω^k.
struct Part {
    num_states: usize,
    initial: State,
    delta: Vec<(State, Letter, State)>,
    gamma: Vec<(StateSet, Dest)>,
}

impl Part {
    /// The fragment as an automaton whose only final state marks the end.
    fn close(&self, alphabet: &Alphabet, level: usize) -> Result<OrdinalAutomaton> {
        let end = self.num_states;
        let gamma = self.gamma.iter().map(|(s, d)| {
            (
                s.clone(),
                match d {
                    Dest::State(q) => *q,
                    Dest::End => end,
                },
            )
        });
        OrdinalAutomaton::new(
            alphabet.clone(),
            level,
            self.num_states + 1,
            self.initial,
            self.delta.iter().copied(),
            gamma.collect::<Vec<_>>(),
            [end].into_iter().collect(),
        )
    }
}

/// Ordinal automaton for a normal-form acceptor, with at most `cap` limit
/// sets enumerated per level.
///
/// Every fragment of level k has a fresh initial state, entered only at the
/// start of its segment. A level-1 fragment consists of that initial state
/// and the states of the (Muller) base acceptor. A level-(k+1) fragment holds
/// one copy of the letter fragment for each top transition source `(p, g)`;
/// the end of a block in copy `(p, g)` enters the initial state of a copy
/// `(p', g')` with `p' ∈ δ(p, g)`.
///
/// Call the initial state of a level-k fragment a rank-k state, and the base
/// states rank 0. The limit set at a limit of rank k (a position
/// `β + ω^k` with β a multiple of ω^k) then always contains rank-(k−1)
/// states and none of higher rank: the segment `[β, β+ω^k)` is read by a
/// single level-k fragment, whose own initial state occurs only at `β` while
/// its level-(k−1) blocks restart infinitely often. Hence the `γ` entries of
/// different ranks never interfere. At rank k+1 the limit set is the union
/// of the occupancies of the blocks seen infinitely often; those unions are
/// enumerated exactly, one combination of block occupancies per closed walk
/// through the copies that the top acceptor accepts.
pub fn hnf_to_ordinal(h: &HnfAcceptor, cap: usize) -> Result<OrdinalAutomaton> {
    let part = build_part(h, cap)?;
    part.close(h.alphabet(), h.level())
}

fn limit_cap_error(count: usize, cap: usize) -> Error {
    Error::Resource {
        what: "limit sets",
        count,
        limit: cap,
    }
}

fn build_part(h: &HnfAcceptor, cap: usize) -> Result<Part> {
    if let Some(b) = h.as_base() {
        let m = b.to_muller(cap)?;
        let family = match m.acceptance() {
            Acceptance::Muller(f) => f.clone(),
            Acceptance::Buchi(_) => unreachable!("converted"),
        };
        let mut delta: Vec<(State, Letter, State)> = m.delta().map(|(p, a, q)| (p + 1, a, q + 1)).collect();
        for a in m.alphabet().letters() {
            for &q in m.succ(m.initial(), a) {
                delta.push((0, a, q + 1));
            }
        }
        let gamma = family
            .into_iter()
            .map(|s| (s.into_iter().map(|q| q + 1).collect(), Dest::End))
            .collect();
        return Ok(Part {
            num_states: m.num_states() + 1,
            initial: 0,
            delta,
            gamma,
        });
    }
    let (top, letters) = h.nested_parts().expect("nested");
    let sub_level = h.level() - 1;
    let mut subs: Vec<Option<(Part, Vec<StateSet>)>> = Vec::with_capacity(letters.len());
    for (g, l) in letters.iter().enumerate() {
        let used = (0..top.num_states()).any(|p| !top.succ(p, g as Letter).is_empty());
        if !used || l.is_empty() {
            subs.push(None);
            continue;
        }
        let part = build_part(l, cap)?;
        let closed = part.close(h.alphabet(), sub_level)?;
        let end = part.num_states;
        let profiles = closed.realizable_profiles().pop().expect("levels");
        let occs: BTreeSet<StateSet> = profiles[part.initial]
            .iter()
            .filter(|(t, _)| *t == end)
            .map(|(_, o)| o.clone())
            .collect();
        if occs.is_empty() {
            subs.push(None);
            continue;
        }
        // A block type seen infinitely often may contribute any union of
        // its occupancies.
        let mut unions: BTreeSet<StateSet> = occs.clone();
        let mut frontier: Vec<StateSet> = occs.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for y in &occs {
                let u: StateSet = x.union(y).copied().collect();
                if unions.insert(u.clone()) {
                    frontier.push(u);
                }
            }
            if unions.len() > cap {
                return Err(limit_cap_error(unions.len(), cap));
            }
        }
        subs.push(Some((part, unions.into_iter().collect())));
    }

    // Copies (p, g) and their offsets; state 0 is the fresh initial state.
    let mut copies: Vec<(State, usize, usize)> = Vec::new();
    let mut next = 1;
    for p in 0..top.num_states() {
        for (g, sub) in subs.iter().enumerate() {
            if let Some((part, _)) = sub {
                if !top.succ(p, g as Letter).is_empty() {
                    copies.push((p, g, next));
                    next += part.num_states;
                }
            }
        }
    }
    let part_of = |g: usize| &subs[g].as_ref().expect("copied letter").0;
    let init_of = |c: usize| copies[c].2 + part_of(copies[c].1).initial;
    let mut delta = Vec::new();
    let mut gamma = Vec::new();
    for &(p, g, off) in &copies {
        let part = part_of(g);
        for &(x, a, y) in &part.delta {
            delta.push((x + off, a, y + off));
            if p == top.initial() && x == part.initial {
                delta.push((0, a, y + off));
            }
        }
        let successors: Vec<usize> = (0..copies.len())
            .filter(|&c2| top.succ(p, g as Letter).contains(&copies[c2].0))
            .collect();
        for (set, dest) in &part.gamma {
            let shifted: StateSet = set.iter().map(|q| q + off).collect();
            match dest {
                Dest::State(q) => gamma.push((shifted, Dest::State(q + off))),
                Dest::End => {
                    for &c2 in &successors {
                        gamma.push((shifted.clone(), Dest::State(init_of(c2))));
                    }
                }
            }
        }
    }

    // Limits closing the whole segment.
    let mut edges = Vec::new();
    for (c, &(p, g, _)) in copies.iter().enumerate() {
        for (c2, &(p2, _, _)) in copies.iter().enumerate() {
            if top.succ(p, g as Letter).contains(&p2) {
                edges.push(LabeledEdge {
                    from: c,
                    to: c2,
                    label: BTreeSet::new(),
                });
            }
        }
    }
    let mut limit_sets: BTreeSet<StateSet> = BTreeSet::new();
    for walk in closed_walk_sets(copies.len(), &edges, cap)? {
        let states: StateSet = walk.nodes.iter().map(|&c| copies[c].0).collect();
        let accepted = match top.acceptance() {
            Acceptance::Buchi(f) => !states.is_disjoint(f),
            Acceptance::Muller(fam) => fam.contains(&states),
        };
        if !accepted {
            continue;
        }
        let mut partial: Vec<StateSet> = vec![StateSet::new()];
        for &c in &walk.nodes {
            let (_, g, off) = copies[c];
            let unions = &subs[g].as_ref().expect("copied letter").1;
            let mut grown = Vec::with_capacity(partial.len() * unions.len());
            for base in &partial {
                for u in unions {
                    let mut s = base.clone();
                    s.extend(u.iter().map(|q| q + off));
                    grown.push(s);
                }
            }
            grown.sort();
            grown.dedup();
            if grown.len() + limit_sets.len() > cap {
                return Err(limit_cap_error(grown.len() + limit_sets.len(), cap));
            }
            partial = grown;
        }
        limit_sets.extend(partial);
    }
    gamma.extend(limit_sets.into_iter().map(|s| (s, Dest::End)));
    Ok(Part {
        num_states: next,
        initial: 0,
        delta,
        gamma,
    })
}
