//! Small graph algorithms shared by the automata constructions.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};

/// Strongly connected components of the graph `0..n` with successor lists
/// `succ`, in reverse topological order (sinks first). Iterative Tarjan.
pub fn sccs<F, I>(n: usize, mut succ: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    let adj: Vec<Vec<usize>> = (0..n).map(|v| succ(v).into_iter().collect()).collect();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Nodes reachable from `start`.
pub fn reachable<F, I>(n: usize, start: &[usize], mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut todo: Vec<usize> = Vec::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            todo.push(s);
        }
    }
    while let Some(v) = todo.pop() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// Whether a component (as returned by [`sccs`]) carries a cycle.
pub fn is_nontrivial<F, I>(comp: &[usize], mut succ: F) -> bool
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    comp.len() > 1 || succ(comp[0]).into_iter().any(|w| w == comp[0])
}

/// An edge carrying a set of labels; closed walks collect label unions.
#[derive(Clone, Debug)]
pub struct LabeledEdge {
    pub from: usize,
    pub to: usize,
    pub label: BTreeSet<usize>,
}

/// A closed-walk summary: the nodes it visits and the union of its labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalkSet {
    pub nodes: BTreeSet<usize>,
    pub labels: BTreeSet<usize>,
}

/// Enumerates every `(nodes, label union)` pair realized by some closed walk.
///
/// Simple cycles are enumerated per component and then closed under union of
/// pairs that share a node, which yields exactly the closed-walk summaries.
/// `cap` bounds both the number of simple cycles and of summaries.
pub fn closed_walk_sets(n: usize, edges: &[LabeledEdge], cap: usize) -> Result<Vec<WalkSet>> {
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let comps = sccs(n, |v| out_edges[v].iter().map(|&e| edges[e].to).collect::<Vec<_>>());
    let mut result: Vec<WalkSet> = Vec::new();
    for comp in comps {
        let in_comp: HashSet<usize> = comp.iter().copied().collect();
        let mut cycles: HashSet<WalkSet> = HashSet::new();
        // Simple cycles whose least node is `start`.
        for &start in &comp {
            let mut path_nodes: Vec<usize> = vec![start];
            let mut path_edges: Vec<usize> = Vec::new();
            let mut on_path: HashSet<usize> = [start].into_iter().collect();
            let mut iters: Vec<usize> = vec![0];
            while let Some(pos) = iters.last_mut() {
                let v = *path_nodes.last().unwrap();
                let candidates = &out_edges[v];
                if *pos >= candidates.len() {
                    iters.pop();
                    path_nodes.pop();
                    if path_edges.pop().is_some() {
                        on_path.remove(&v);
                    }
                    continue;
                }
                let e = candidates[*pos];
                *pos += 1;
                let w = edges[e].to;
                if !in_comp.contains(&w) || w < start {
                    continue;
                }
                if w == start {
                    let mut ws = WalkSet {
                        nodes: path_nodes.iter().copied().collect(),
                        labels: BTreeSet::new(),
                    };
                    for &pe in path_edges.iter().chain(std::iter::once(&e)) {
                        ws.labels.extend(edges[pe].label.iter().copied());
                    }
                    cycles.insert(ws);
                    if cycles.len() > cap {
                        return Err(Error::Resource {
                            what: "simple cycles",
                            count: cycles.len(),
                            limit: cap,
                        });
                    }
                } else if !on_path.contains(&w) {
                    on_path.insert(w);
                    path_nodes.push(w);
                    path_edges.push(e);
                    iters.push(0);
                }
            }
        }
        let mut items: Vec<WalkSet> = cycles.into_iter().collect();
        items.sort();
        let mut known: HashSet<WalkSet> = items.iter().cloned().collect();
        let mut frontier = items.clone();
        while let Some(x) = frontier.pop() {
            let mut fresh = Vec::new();
            for y in &items {
                if !x.nodes.is_disjoint(&y.nodes) {
                    let u = WalkSet {
                        nodes: x.nodes.union(&y.nodes).copied().collect(),
                        labels: x.labels.union(&y.labels).copied().collect(),
                    };
                    if !known.contains(&u) {
                        known.insert(u.clone());
                        fresh.push(u);
                    }
                }
            }
            if known.len() > cap {
                return Err(Error::Resource {
                    what: "closed-walk sets",
                    count: known.len(),
                    limit: cap,
                });
            }
            items.extend(fresh.iter().cloned());
            frontier.extend(fresh);
        }
        result.extend(items);
    }
    result.sort();
    result.dedup();
    Ok(result)
}

/// Whether some closed walk inside `nodes` (a subset of the graph) visits
/// exactly the nodes whose projection is `target`, i.e. whether the
/// subgraph induced by `{v : proj(v) ∈ target}` has a cyclic component whose
/// projection is all of `target`.
pub fn exact_projection_cycle<F, I, P>(
    nodes: &[usize],
    target: &BTreeSet<usize>,
    mut succ: F,
    proj: P,
) -> Option<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
    P: Fn(usize) -> usize,
{
    let kept: Vec<usize> = nodes.iter().copied().filter(|&v| target.contains(&proj(v))).collect();
    if kept.is_empty() {
        return None;
    }
    let local: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = kept
        .iter()
        .map(|&v| succ(v).into_iter().filter_map(|w| local.get(&w).copied()).collect())
        .collect();
    for comp in sccs(kept.len(), |i| adj[i].clone()) {
        if !is_nontrivial(&comp, |i| adj[i].clone()) {
            continue;
        }
        let projected: BTreeSet<usize> = comp.iter().map(|&i| proj(kept[i])).collect();
        if &projected == target {
            return Some(comp.into_iter().map(|i| kept[i]).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(from: usize, to: usize, label: &[usize]) -> LabeledEdge {
        LabeledEdge {
            from,
            to,
            label: label.iter().copied().collect(),
        }
    }

    #[test]
    fn tarjan_orders_sinks_first() {
        let adj = [vec![1], vec![2], vec![1, 3], vec![]];
        let comps = sccs(4, |v| adj[v].clone());
        assert_eq!(comps, vec![vec![3], vec![1, 2], vec![0]]);
    }

    #[test]
    fn closed_walks_of_figure_eight() {
        // Two loops sharing node 0, plus a disjoint self-loop on node 2.
        let edges = vec![
            edge(0, 0, &[10]),
            edge(0, 1, &[11]),
            edge(1, 0, &[12]),
            edge(2, 2, &[13]),
        ];
        let sets = closed_walk_sets(3, &edges, 100).unwrap();
        let labels: Vec<Vec<usize>> = sets.iter().map(|w| w.labels.iter().copied().collect()).collect();
        assert!(labels.contains(&vec![10]));
        assert!(labels.contains(&vec![11, 12]));
        assert!(labels.contains(&vec![10, 11, 12]));
        assert!(labels.contains(&vec![13]));
        assert_eq!(sets.len(), 4);
    }

    #[test]
    fn exact_projection_requires_whole_target() {
        let adj = [vec![1], vec![0], vec![2]];
        let all = [0, 1, 2];
        let t: BTreeSet<usize> = [0, 1].into_iter().collect();
        assert!(exact_projection_cycle(&all, &t, |v| adj[v].clone(), |v| v).is_some());
        let t: BTreeSet<usize> = [0].into_iter().collect();
        assert!(exact_projection_cycle(&all, &t, |v| adj[v].clone(), |v| v).is_none());
    }
}
