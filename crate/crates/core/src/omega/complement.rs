//! Complementation of ω-acceptors.
//!
//! Deterministic inputs use the classic two-copy construction. Everything
//! else is determinized into a parity automaton over compact Safra trees
//! (nodes carry dynamic names; removals and vertical merges decide the
//! priority of each step), whose complement is read back as a Büchi
//! acceptor by guessing the least odd priority that recurs.

use std::collections::{HashMap, VecDeque};

use super::acceptor::{Acceptance, OmegaAcceptor, State, StateSet};
use crate::alphabet::Letter;
use crate::budget::Budget;
use crate::error::Result;
use crate::graph::{reachable, sccs};

impl OmegaAcceptor {
    /// Acceptor of every ω-word over the alphabet not accepted by `self`.
    pub fn complement(&self, budget: &Budget) -> Result<OmegaAcceptor> {
        let nba = self.to_buchi().trim();
        if nba.is_empty() {
            return Ok(OmegaAcceptor::universal(nba.alphabet()));
        }
        let res = if nba.is_deterministic() {
            complement_deterministic(&nba)
        } else {
            let dpa = Parity::determinize(&nba.reduce(), budget)?.minimize();
            dpa.odd_acceptor(budget)?
        };
        budget.charge(res.num_states())?;
        Ok(res.reduce())
    }
}

/// Complement of a deterministic Büchi acceptor: run in a guessing copy,
/// then commit to a copy that never again sees an accepting state.
fn complement_deterministic(a: &OmegaAcceptor) -> OmegaAcceptor {
    let f = match a.acceptance() {
        Acceptance::Buchi(f) => f.clone(),
        Acceptance::Muller(_) => unreachable!("to_buchi first"),
    };
    let n = a.num_states();
    let sink = n;
    let k = a.alphabet().len();
    let next = |p: State, l: usize| -> State {
        if p == sink {
            sink
        } else {
            a.table()[p][l].first().copied().unwrap_or(sink)
        }
    };
    let total = n + 1;
    let low = |p: State| p;
    let high = |p: State| total + p;
    let mut trans = vec![vec![Vec::new(); k]; 2 * total];
    for p in 0..total {
        for l in 0..k {
            let q = next(p, l);
            trans[low(p)][l].push(low(q));
            if !f.contains(&q) {
                trans[low(p)][l].push(high(q));
                if !f.contains(&p) {
                    trans[high(p)][l].push(high(q));
                }
            }
        }
    }
    let acc: StateSet = (0..total).filter(|p| !f.contains(p)).map(high).collect();
    OmegaAcceptor::from_parts(a.alphabet().clone(), low(a.initial()), trans, Acceptance::Buchi(acc))
}

/// Fixed-width bitset over automaton states.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn minus(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn or_assign(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Node {
    name: u32,
    label: Bits,
    children: Vec<Node>,
}

/// One determinization step bookkeeping.
struct Step {
    removed_min: Option<u32>,
    marked_min: Option<u32>,
}

impl Node {
    fn post(&mut self, a: &OmegaAcceptor, letter: Letter, n: usize) {
        let mut next = Bits::empty(n);
        for q in self.label.iter() {
            for &q2 in a.succ(q, letter) {
                next.insert(q2);
            }
        }
        self.label = next;
        for c in &mut self.children {
            c.post(a, letter, n);
        }
    }

    fn spawn(&mut self, accepting: &Bits, fresh: &mut u32) {
        for c in &mut self.children {
            c.spawn(accepting, fresh);
        }
        let hit = self.label.and(accepting);
        if !hit.is_empty() {
            self.children.push(Node {
                name: *fresh,
                label: hit,
                children: Vec::new(),
            });
            *fresh += 1;
        }
    }

    /// Keeps each state only in the oldest branch that holds it.
    fn horizontal(&mut self, allowed: &Bits) {
        self.label = self.label.and(allowed);
        let mut claimed = Bits::empty(self.label.0.len() * 64);
        for c in &mut self.children {
            let allow = self.label.minus(&claimed);
            c.horizontal(&allow);
            claimed.or_assign(&c.label);
        }
    }

    fn prune_empty(&mut self, old_max: u32, step: &mut Step) {
        self.children.retain(|c| {
            if c.label.is_empty() {
                c.record_removed(old_max, step);
                false
            } else {
                true
            }
        });
        for c in &mut self.children {
            c.prune_empty(old_max, step);
        }
    }

    fn record_removed(&self, old_max: u32, step: &mut Step) {
        if self.name <= old_max {
            step.removed_min = Some(step.removed_min.map_or(self.name, |m| m.min(self.name)));
        }
        for c in &self.children {
            c.record_removed(old_max, step);
        }
    }

    fn vertical(&mut self, old_max: u32, step: &mut Step) {
        if self.children.is_empty() {
            return;
        }
        let mut union = Bits::empty(self.label.0.len() * 64);
        for c in &self.children {
            union.or_assign(&c.label);
        }
        if union == self.label {
            for c in &self.children {
                c.record_removed(old_max, step);
            }
            self.children.clear();
            step.marked_min = Some(step.marked_min.map_or(self.name, |m| m.min(self.name)));
        } else {
            for c in &mut self.children {
                c.vertical(old_max, step);
            }
        }
    }

    fn names(&self, out: &mut Vec<u32>) {
        out.push(self.name);
        for c in &self.children {
            c.names(out);
        }
    }

    fn rename(&mut self, map: &HashMap<u32, u32>) {
        self.name = map[&self.name];
        for c in &mut self.children {
            c.rename(map);
        }
    }
}

/// Deterministic parity automaton with priorities on transitions; a run is
/// accepted iff the least priority seen infinitely often is even.
struct Parity {
    alphabet: crate::alphabet::Alphabet,
    trans: Vec<Vec<(usize, u32)>>,
}

impl Parity {
    fn determinize(a: &OmegaAcceptor, budget: &Budget) -> Result<Parity> {
        let n = a.num_states();
        let accepting = {
            let mut b = Bits::empty(n);
            if let Acceptance::Buchi(f) = a.acceptance() {
                for &q in f {
                    b.insert(q);
                }
            }
            b
        };
        let neutral = 2 * n as u32 + 1;
        let mut init_label = Bits::empty(n);
        init_label.insert(a.initial());
        let init: Option<Node> = Some(Node {
            name: 1,
            label: init_label,
            children: Vec::new(),
        });
        let mut index: HashMap<Option<Node>, usize> = HashMap::new();
        let mut states: Vec<Option<Node>> = Vec::new();
        index.insert(init.clone(), 0);
        states.push(init);
        let mut queue = VecDeque::from([0usize]);
        let mut trans: Vec<Vec<(usize, u32)>> = Vec::new();
        let k = a.alphabet().len();
        while let Some(id) = queue.pop_front() {
            let tree = states[id].clone();
            let mut row = Vec::with_capacity(k);
            for l in 0..k as Letter {
                let (next, prio) = match &tree {
                    None => (None, 1),
                    Some(root) => step(root, a, l, &accepting, n, neutral),
                };
                let to = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = states.len();
                        index.insert(next.clone(), t);
                        states.push(next);
                        queue.push_back(t);
                        budget.check(states.len())?;
                        t
                    }
                };
                row.push((to, prio));
            }
            while trans.len() <= id {
                trans.push(Vec::new());
            }
            trans[id] = row;
        }
        budget.charge(states.len())?;
        Ok(Parity {
            alphabet: a.alphabet().clone(),
            trans,
        })
    }

    /// Merges states with the same priorities along every word, by
    /// partition refinement.
    fn minimize(self) -> Parity {
        let n = self.trans.len();
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut ids: HashMap<(usize, Vec<(usize, u32)>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let sig: Vec<(usize, u32)> = self.trans[q].iter().map(|&(t, p)| (class[t], p)).collect();
                    let fresh = ids.len();
                    *ids.entry((class[q], sig)).or_insert(fresh)
                })
                .collect();
            let stable = ids.len() == count;
            count = ids.len();
            class = next;
            if stable {
                break;
            }
        }
        // Renumber so the initial state's class is 0.
        let mut order = vec![usize::MAX; count];
        let mut reps = Vec::with_capacity(count);
        for q in std::iter::once(0).chain(0..n) {
            if order[class[q]] == usize::MAX {
                order[class[q]] = reps.len();
                reps.push(q);
            }
        }
        let trans = reps
            .iter()
            .map(|&q| self.trans[q].iter().map(|&(t, p)| (order[class[t]], p)).collect())
            .collect();
        Parity {
            alphabet: self.alphabet,
            trans,
        }
    }

    /// States from which, using only priorities `>= g`, a cycle through a
    /// `g` edge is reachable.
    fn can_settle(&self, g: u32) -> Vec<bool> {
        let n = self.trans.len();
        let succ = |d: usize| {
            self.trans[d]
                .iter()
                .filter(|&&(_, p)| p >= g)
                .map(|&(t, _)| t)
                .collect::<Vec<_>>()
        };
        let mut comp_of = vec![usize::MAX; n];
        let comps = sccs(n, succ);
        for (c, comp) in comps.iter().enumerate() {
            for &d in comp {
                comp_of[d] = c;
            }
        }
        let mut good = vec![false; n];
        for d in 0..n {
            for &(t, p) in &self.trans[d] {
                if p == g && comp_of[t] == comp_of[d] {
                    good[d] = true;
                }
            }
        }
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for d in 0..n {
            for t in succ(d) {
                pred[t].push(d);
            }
        }
        let start: Vec<usize> = (0..n).filter(|&d| good[d]).collect();
        reachable(n, &start, |d| pred[d].clone())
    }

    /// Büchi acceptor of the runs whose least recurring priority is odd:
    /// guess the odd priority `p`, then only allow priorities `>= p` and
    /// accept on each visit of `p`.
    fn odd_acceptor(&self, budget: &Budget) -> Result<OmegaAcceptor> {
        let mut odd: Vec<u32> = self
            .trans
            .iter()
            .flatten()
            .map(|&(_, p)| p)
            .filter(|p| p % 2 == 1)
            .collect();
        odd.sort_unstable();
        odd.dedup();
        let k = self.alphabet.len();
        let useful: HashMap<u32, Vec<bool>> = odd.iter().map(|&g| (g, self.can_settle(g))).collect();
        // Key: (dpa state, guessed priority or none, last edge hit guess).
        let mut index: HashMap<(usize, Option<u32>, bool), usize> = HashMap::new();
        let mut order = Vec::new();
        let start = (0usize, None, false);
        index.insert(start, 0);
        order.push(start);
        let mut queue = VecDeque::from([start]);
        let mut trans: Vec<Vec<Vec<State>>> = Vec::new();
        while let Some((d, guess, _)) = queue.pop_front() {
            let mut row = vec![Vec::new(); k];
            for (l, &(d2, p)) in self.trans[d].iter().enumerate() {
                let mut targets = Vec::new();
                match guess {
                    None => {
                        targets.push((d2, None, false));
                        for &g in odd.iter().filter(|&&g| g <= p && useful[&g][d2]) {
                            targets.push((d2, Some(g), p == g));
                        }
                    }
                    Some(g) if p >= g && useful[&g][d2] => targets.push((d2, Some(g), p == g)),
                    Some(_) => {}
                }
                for key in targets {
                    let id = match index.get(&key) {
                        Some(&i) => i,
                        None => {
                            let i = order.len();
                            index.insert(key, i);
                            order.push(key);
                            queue.push_back(key);
                            budget.check(order.len())?;
                            i
                        }
                    };
                    row[l].push(id);
                }
            }
            trans.push(row);
        }
        let acc: StateSet = order.iter().enumerate().filter(|(_, k)| k.2).map(|(i, _)| i).collect();
        Ok(OmegaAcceptor::from_parts(
            self.alphabet.clone(),
            0,
            trans,
            Acceptance::Buchi(acc),
        ))
    }
}

fn step(
    root: &Node,
    a: &OmegaAcceptor,
    letter: Letter,
    accepting: &Bits,
    n: usize,
    neutral: u32,
) -> (Option<Node>, u32) {
    let mut names = Vec::new();
    root.names(&mut names);
    let old_max = names.iter().copied().max().unwrap_or(0);
    let mut fresh = old_max + 1;
    let mut tree = root.clone();
    tree.post(a, letter, n);
    tree.spawn(accepting, &mut fresh);
    let all = {
        let mut b = Bits::empty(n);
        for q in 0..n {
            b.insert(q);
        }
        b
    };
    tree.horizontal(&all);
    let mut st = Step {
        removed_min: None,
        marked_min: None,
    };
    if tree.label.is_empty() {
        return (None, 1);
    }
    tree.prune_empty(old_max, &mut st);
    tree.vertical(old_max, &mut st);
    let mut live = Vec::new();
    tree.names(&mut live);
    live.sort_unstable();
    let map: HashMap<u32, u32> = live.iter().enumerate().map(|(i, &nm)| (nm, i as u32 + 1)).collect();
    tree.rename(&map);
    let prio = match (st.marked_min, st.removed_min) {
        (None, None) => neutral,
        (Some(e), None) => 2 * e,
        (None, Some(f)) => 2 * f - 1,
        (Some(e), Some(f)) => {
            if e < f {
                2 * e
            } else {
                2 * f - 1
            }
        }
    };
    (Some(tree), prio)
}
