//! Verification and bounded search of regular accepting runs.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{CertNode, MullerTreeAutomaton, RegularTree, RunCertificate};
use crate::error::{Error, Result};
use crate::graph::{closed_walk_sets, is_nontrivial, sccs, LabeledEdge};
use crate::omega::{State, StateSet, DEFAULT_FAMILY_CAP};

/// Largest strongly connected part of a certificate, or of the input
/// tree, handled by exhaustive closed-walk or assignment search when it is
/// not a simple cycle.
pub const DEFAULT_SCC_CAP: usize = 12;

/// Assignment attempts allowed per search in a non-simple tree component.
const SEARCH_STEPS: usize = 20_000;

/// Checks that `cert` is an accepting run of `m` on `tree`: it starts at
/// the root in the initial state, every node follows a transition, and
/// every closed walk of the certificate visits an accepted state set.
pub fn verify_run(tree: &RegularTree, m: &MullerTreeAutomaton, cert: &RunCertificate, scc_cap: usize) -> Result<bool> {
    let nodes = &cert.nodes;
    let Some(root) = nodes.first() else {
        return Err(Error::Desynchronized("empty certificate".into()));
    };
    if root.tree != 0 {
        return Err(Error::Desynchronized("root is not on the tree root".into()));
    }
    for (i, c) in nodes.iter().enumerate() {
        if c.tree >= tree.len() || c.left >= nodes.len() || c.right >= nodes.len() {
            return Err(Error::Desynchronized(format!("node {i} points out of range")));
        }
        if nodes[c.left].tree != tree.left(c.tree) || nodes[c.right].tree != tree.right(c.tree) {
            return Err(Error::Desynchronized(format!("children of node {i} leave the tree")));
        }
    }
    if root.state != m.initial() {
        return Ok(false);
    }
    let succ = |i: usize| [nodes[i].left, nodes[i].right];
    let reach = crate::graph::reachable(nodes.len(), &[0], succ);
    for c in nodes.iter().enumerate().filter(|(i, _)| reach[*i]).map(|(_, c)| c) {
        if c.state >= m.num_states()
            || !m
                .moves(c.state, tree.label(c.tree))
                .contains(&(nodes[c.left].state, nodes[c.right].state))
        {
            return Ok(false);
        }
    }
    for comp in sccs(nodes.len(), succ) {
        if !reach[comp[0]] || !is_nontrivial(&comp, succ) {
            continue;
        }
        let inside: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let simple = comp
            .iter()
            .all(|&i| succ(i).iter().filter(|j| inside.contains_key(j)).count() == 1);
        if simple {
            let states: StateSet = comp.iter().map(|&i| nodes[i].state).collect();
            if !m.accepts_set(&states) {
                return Ok(false);
            }
            continue;
        }
        if comp.len() > scc_cap {
            return Err(Error::Resource {
                what: "certificate component size",
                count: comp.len(),
                limit: scc_cap,
            });
        }
        let mut edges = Vec::new();
        for &i in &comp {
            for j in succ(i) {
                if let Some(&to) = inside.get(&j) {
                    edges.push(LabeledEdge {
                        from: inside[&i],
                        to,
                        label: BTreeSet::new(),
                    });
                }
            }
        }
        for w in closed_walk_sets(comp.len(), &edges, DEFAULT_FAMILY_CAP)? {
            let states: StateSet = w.nodes.iter().map(|&k| nodes[comp[k]].state).collect();
            if !m.accepts_set(&states) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches for an accepting regular run, bottom-up over the strongly
/// connected parts of the tree graph.
///
/// A part that is a simple cycle is solved exactly: a product of the cycle
/// with the states must reach a cyclic component visiting precisely an
/// accepted set. Other parts (at most `scc_cap` nodes) are searched for a
/// memoryless assignment of transitions. `Ok(None)` means no run was found
/// by this search; a certificate larger than `bound` nodes (default
/// `4·|tree|·|Q|`) is reported as a resource error.
pub fn find_run(
    tree: &RegularTree,
    m: &MullerTreeAutomaton,
    bound: Option<usize>,
    scc_cap: usize,
) -> Result<Option<RunCertificate>> {
    let mut f = Finder {
        tree,
        m,
        nq: m.num_states(),
        acc: vec![Vec::new(); tree.len()],
        root_of: HashMap::new(),
        nodes: Vec::new(),
    };
    let succ = |v: usize| [tree.left(v), tree.right(v)];
    for comp in sccs(tree.len(), succ) {
        let in_comp: BTreeSet<usize> = comp.iter().copied().collect();
        let inside = |v: usize| succ(v).iter().filter(|w| in_comp.contains(w)).count();
        if !is_nontrivial(&comp, succ) {
            f.solve_trivial(comp[0]);
        } else if comp.iter().all(|&v| inside(v) == 1) {
            f.solve_cycle(&comp, &in_comp);
        } else {
            if comp.len() > scc_cap {
                return Err(Error::Resource {
                    what: "tree component size",
                    count: comp.len(),
                    limit: scc_cap,
                });
            }
            f.solve_component(&comp, &in_comp)?;
        }
    }
    let Some(&start) = f.root_of.get(&(0, m.initial())) else {
        return Ok(None);
    };
    // Keep what the root reaches, root first.
    let mut index = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut i = 0;
    while i < order.len() {
        let c = f.nodes[order[i]];
        for next in [c.left, c.right] {
            if let Entry::Vacant(e) = index.entry(next) {
                e.insert(order.len());
                order.push(next);
            }
        }
        i += 1;
    }
    let limit = bound.unwrap_or(4 * tree.len() * m.num_states().max(1));
    if order.len() > limit {
        return Err(Error::Resource {
            what: "certificate nodes",
            count: order.len(),
            limit,
        });
    }
    let nodes = order
        .iter()
        .map(|&o| {
            let c = f.nodes[o];
            CertNode {
                left: index[&c.left],
                right: index[&c.right],
                ..c
            }
        })
        .collect();
    Ok(Some(RunCertificate { nodes }))
}

struct Finder<'a> {
    tree: &'a RegularTree,
    m: &'a MullerTreeAutomaton,
    nq: usize,
    /// Accepted states per finished tree node.
    acc: Vec<Vec<bool>>,
    /// Certificate node rooting an accepting run from `(tree node, state)`.
    root_of: HashMap<(usize, State), usize>,
    nodes: Vec<CertNode>,
}

impl Finder<'_> {
    fn accepted(&self, v: usize, q: State) -> bool {
        self.acc[v].get(q).copied().unwrap_or(false)
    }

    fn push(&mut self, tree: usize, state: State, left: usize, right: usize) -> usize {
        self.nodes.push(CertNode {
            tree,
            state,
            left,
            right,
        });
        self.nodes.len() - 1
    }

    fn solve_trivial(&mut self, v: usize) {
        let (l, r, a) = (self.tree.left(v), self.tree.right(v), self.tree.label(v));
        let mut acc = vec![false; self.nq];
        for (q, slot) in acc.iter_mut().enumerate() {
            if let Some(&(ql, qr)) = self
                .m
                .moves(q, a)
                .iter()
                .find(|&&(ql, qr)| self.accepted(l, ql) && self.accepted(r, qr))
            {
                *slot = true;
                let (cl, cr) = (self.root_of[&(l, ql)], self.root_of[&(r, qr)]);
                let c = self.push(v, q, cl, cr);
                self.root_of.insert((v, q), c);
            }
        }
        self.acc[v] = acc;
    }

    fn solve_cycle(&mut self, comp: &[usize], in_comp: &BTreeSet<usize>) {
        let tree = self.tree;
        // Walk the cycle from its first node along the in-component child.
        let mut cycle = vec![comp[0]];
        let mut goes_left = Vec::new();
        loop {
            let v = *cycle.last().unwrap();
            let left = in_comp.contains(&tree.left(v));
            goes_left.push(left);
            let next = if left { tree.left(v) } else { tree.right(v) };
            if next == cycle[0] {
                break;
            }
            cycle.push(next);
        }
        let len = cycle.len();
        let nq = self.nq;
        let out = |i: usize| {
            if goes_left[i] {
                tree.right(cycle[i])
            } else {
                tree.left(cycle[i])
            }
        };
        // Product graph over (position, state); edges keep the out-of-cycle state.
        let mut adj: Vec<Vec<(usize, State)>> = vec![Vec::new(); len * nq];
        for i in 0..len {
            for q in 0..nq {
                for &(ql, qr) in self.m.moves(q, tree.label(cycle[i])) {
                    let (qin, qout) = if goes_left[i] { (ql, qr) } else { (qr, ql) };
                    let target = (i + 1) % len * nq + qin;
                    if self.accepted(out(i), qout) && !adj[i * nq + q].iter().any(|&(t, _)| t == target) {
                        adj[i * nq + q].push((target, qout));
                    }
                }
            }
        }
        let succ = |x: usize| adj[x].iter().map(|&(t, _)| t).collect::<Vec<_>>();
        let live: BTreeSet<State> = (0..len * nq).filter(|&x| !adj[x].is_empty()).map(|x| x % nq).collect();
        let mut good: Vec<Vec<usize>> = Vec::new();
        for e in self.m.family().iter().filter(|e| e.is_subset(&live)) {
            let kept: Vec<usize> = (0..len * nq).filter(|x| e.contains(&(x % nq))).collect();
            let local: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &x)| (x, k)).collect();
            let ladj: Vec<Vec<usize>> = kept
                .iter()
                .map(|&x| succ(x).into_iter().filter_map(|y| local.get(&y).copied()).collect())
                .collect();
            for c in sccs(kept.len(), |k| ladj[k].clone()) {
                if !is_nontrivial(&c, |k| ladj[k].clone()) {
                    continue;
                }
                let states: StateSet = c.iter().map(|&k| kept[k] % nq).collect();
                if &states == e {
                    good.push(c.into_iter().map(|k| kept[k]).collect());
                }
            }
        }
        let label_of = |x: usize, y: usize| adj[x].iter().find(|&&(t, _)| t == y).map(|&(_, o)| o).expect("edge");
        // Certificate node of product node x whose in-cycle child is `next`.
        let make = |f: &mut Self, x: usize, next: usize, next_cert: usize| -> usize {
            let (i, q) = (x / nq, x % nq);
            let o = f.root_of[&(out(i), label_of(x, next))];
            if goes_left[i] {
                f.push(cycle[i], q, next_cert, o)
            } else {
                f.push(cycle[i], q, o, next_cert)
            }
        };
        let mut cert_of: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for c in &good {
            if cert_of.contains_key(&c[0]) {
                continue;
            }
            let walk = covering_walk(c, &succ);
            let first = self.nodes.len();
            for (j, &x) in walk.iter().enumerate() {
                let next = walk[(j + 1) % walk.len()];
                let next_cert = first + (j + 1) % walk.len();
                make(self, x, next, next_cert);
            }
            cert_of.insert(c[0], first);
            queue.push_back(c[0]);
        }
        // Everything that reaches an entry, by backward search.
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); len * nq];
        for x in 0..len * nq {
            for y in succ(x) {
                pred[y].push(x);
            }
        }
        while let Some(y) = queue.pop_front() {
            for &x in &pred[y] {
                if !cert_of.contains_key(&x) {
                    let c = make(self, x, y, cert_of[&y]);
                    cert_of.insert(x, c);
                    queue.push_back(x);
                }
            }
        }
        for (i, &v) in cycle.iter().enumerate() {
            let mut acc = vec![false; nq];
            for (q, slot) in acc.iter_mut().enumerate() {
                if let Some(&c) = cert_of.get(&(i * nq + q)) {
                    *slot = true;
                    self.root_of.insert((v, q), c);
                }
            }
            self.acc[v] = acc;
        }
    }

    fn solve_component(&mut self, comp: &[usize], in_comp: &BTreeSet<usize>) -> Result<()> {
        for &v in comp {
            self.acc[v] = vec![false; self.nq];
        }
        let mut steps = 0;
        for &v in comp {
            for q in 0..self.nq {
                if self.acc[v][q] {
                    continue;
                }
                let mut assign: HashMap<(usize, State), (State, State)> = HashMap::new();
                let mut order = Vec::new();
                if self.assign(vec![(v, q)], &mut assign, &mut order, in_comp, &mut steps)? {
                    let ids: HashMap<(usize, State), usize> = order
                        .iter()
                        .enumerate()
                        .map(|(k, &p)| (p, self.nodes.len() + k))
                        .collect();
                    for &(x, s) in &order {
                        let (ql, qr) = assign[&(x, s)];
                        let (l, r) = (self.tree.left(x), self.tree.right(x));
                        let cl = ids.get(&(l, ql)).copied().unwrap_or_else(|| self.root_of[&(l, ql)]);
                        let cr = ids.get(&(r, qr)).copied().unwrap_or_else(|| self.root_of[&(r, qr)]);
                        self.push(x, s, cl, cr);
                    }
                    for (&(x, s), &id) in &ids {
                        self.acc[x][s] = true;
                        self.root_of.insert((x, s), id);
                    }
                }
            }
        }
        Ok(())
    }

    /// Backtracking over memoryless choices for the pairs in `pending`.
    fn assign(
        &self,
        mut pending: Vec<(usize, State)>,
        assign: &mut HashMap<(usize, State), (State, State)>,
        order: &mut Vec<(usize, State)>,
        in_comp: &BTreeSet<usize>,
        steps: &mut usize,
    ) -> Result<bool> {
        while let Some(&p) = pending.last() {
            if assign.contains_key(&p) {
                pending.pop();
            } else {
                break;
            }
        }
        let Some((x, s)) = pending.pop() else {
            return Ok(self.component_accepts(assign, in_comp));
        };
        let (l, r) = (self.tree.left(x), self.tree.right(x));
        for &(ql, qr) in self.m.moves(s, self.tree.label(x)) {
            *steps += 1;
            if *steps > SEARCH_STEPS {
                return Err(Error::Resource {
                    what: "run search steps",
                    count: *steps,
                    limit: SEARCH_STEPS,
                });
            }
            let ok_l = in_comp.contains(&l) || self.accepted(l, ql);
            let ok_r = in_comp.contains(&r) || self.accepted(r, qr);
            if !(ok_l && ok_r) {
                continue;
            }
            assign.insert((x, s), (ql, qr));
            order.push((x, s));
            let mut next = pending.clone();
            if in_comp.contains(&l) {
                next.push((l, ql));
            }
            if in_comp.contains(&r) {
                next.push((r, qr));
            }
            if self.assign(next, assign, order, in_comp, steps)? {
                return Ok(true);
            }
            assign.remove(&(x, s));
            order.pop();
        }
        Ok(false)
    }

    fn component_accepts(&self, assign: &HashMap<(usize, State), (State, State)>, in_comp: &BTreeSet<usize>) -> bool {
        let pairs: Vec<(usize, State)> = assign.keys().copied().collect();
        let index: HashMap<(usize, State), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut edges = Vec::new();
        for (k, &(x, s)) in pairs.iter().enumerate() {
            let (ql, qr) = assign[&(x, s)];
            for (child, cs) in [(self.tree.left(x), ql), (self.tree.right(x), qr)] {
                if in_comp.contains(&child) {
                    edges.push(LabeledEdge {
                        from: k,
                        to: index[&(child, cs)],
                        label: BTreeSet::new(),
                    });
                }
            }
        }
        match closed_walk_sets(pairs.len(), &edges, DEFAULT_FAMILY_CAP) {
            Ok(walks) => walks.iter().all(|w| {
                let states: StateSet = w.nodes.iter().map(|&k| pairs[k].1).collect();
                self.m.accepts_set(&states)
            }),
            Err(_) => false,
        }
    }
}

/// A closed walk from `comp[0]` through every node of the strongly
/// connected `comp`, staying inside it.
fn covering_walk(comp: &[usize], succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let members: BTreeSet<usize> = comp.iter().copied().collect();
    let path = |from: usize, to: usize| -> Vec<usize> {
        // Nodes after `from` up to and including `to`.
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for y in succ(x) {
                if members.contains(&y) && !prev.contains_key(&y) {
                    prev.insert(y, x);
                    if y == to {
                        found = true;
                        break;
                    }
                    queue.push_back(y);
                }
            }
            if found {
                break;
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while prev[&cur] != from {
            cur = prev[&cur];
            out.push(cur);
        }
        out.reverse();
        out
    };
    let mut walk = vec![comp[0]];
    let mut seen: BTreeSet<usize> = [comp[0]].into_iter().collect();
    for &target in comp.iter().skip(1) {
        if seen.contains(&target) {
            continue;
        }
        let p = path(*walk.last().unwrap(), target);
        seen.extend(p.iter().copied());
        walk.extend(p);
    }
    let back = path(*walk.last().unwrap(), comp[0]);
    walk.extend(&back[..back.len() - 1]);
    walk
}
