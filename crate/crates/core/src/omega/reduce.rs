//! State-space reduction by bisimulation and direct simulation.

use std::collections::{HashMap, VecDeque};

use super::acceptor::{Acceptance, OmegaAcceptor, State, StateSet};

/// Largest acceptor whose simulation relation is computed.
const SIMULATION_LIMIT: usize = 400;

impl OmegaAcceptor {
    /// Language-preserving shrinking of a Büchi acceptor: trims, merges
    /// states that directly simulate each other, drops transitions into
    /// strictly simulated siblings and renumbers breadth-first. Muller
    /// acceptors are returned unchanged.
    pub fn reduce(&self) -> OmegaAcceptor {
        let mut a = self.trim();
        let f = match a.acceptance() {
            Acceptance::Buchi(f) => f.clone(),
            Acceptance::Muller(_) => return a,
        };
        if a.num_states() > SIMULATION_LIMIT {
            a = bisimulation_quotient(&a, &f);
        }
        let f = match a.acceptance() {
            Acceptance::Buchi(f) => f.clone(),
            Acceptance::Muller(_) => unreachable!("quotients stay Büchi"),
        };
        let n = a.num_states();
        if n <= 1 || n > SIMULATION_LIMIT {
            return renumber(&a);
        }
        let sim = direct_simulation(&a, &f);
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for p in 0..n {
            if class[p] == usize::MAX {
                for q in p..n {
                    if class[q] == usize::MAX && sim[p][q] && sim[q][p] {
                        class[q] = reps.len();
                    }
                }
                reps.push(p);
            }
        }
        let k = a.alphabet().len();
        let mut trans = vec![vec![Vec::new(); k]; reps.len()];
        for p in 0..n {
            for l in 0..k {
                for &q in &a.table()[p][l] {
                    trans[class[p]][l].push(class[q]);
                }
            }
        }
        for row in trans.iter_mut() {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
                let keep: Vec<usize> = succ
                    .iter()
                    .copied()
                    .filter(|&s| !succ.iter().any(|&t| t != s && sim[reps[s]][reps[t]]))
                    .collect();
                *succ = keep;
            }
        }
        let acc: StateSet = f.iter().map(|&q| class[q]).collect();
        let q = OmegaAcceptor::from_parts(a.alphabet().clone(), class[a.initial()], trans, Acceptance::Buchi(acc));
        renumber(&q.trim())
    }
}

/// Quotient by forward bisimulation: states agreeing on acceptance whose
/// successor classes agree letter by letter are merged.
fn bisimulation_quotient(a: &OmegaAcceptor, f: &StateSet) -> OmegaAcceptor {
    let n = a.num_states();
    let k = a.alphabet().len();
    let mut class: Vec<usize> = (0..n).map(|p| usize::from(f.contains(&p))).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<Vec<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|p| {
                let sig: Vec<Vec<usize>> = (0..k)
                    .map(|l| {
                        let mut cs: Vec<usize> = a.table()[p][l].iter().map(|&q| class[q]).collect();
                        cs.sort_unstable();
                        cs.dedup();
                        cs
                    })
                    .collect();
                let fresh = ids.len();
                *ids.entry((class[p], sig)).or_insert(fresh)
            })
            .collect();
        let stable = ids.len() == count;
        count = ids.len();
        class = next;
        if stable {
            break;
        }
    }
    let mut trans = vec![vec![Vec::new(); k]; count];
    for p in 0..n {
        for l in 0..k {
            for &q in &a.table()[p][l] {
                trans[class[p]][l].push(class[q]);
            }
        }
    }
    let acc: StateSet = f.iter().map(|&q| class[q]).collect();
    OmegaAcceptor::from_parts(a.alphabet().clone(), class[a.initial()], trans, Acceptance::Buchi(acc)).trim()
}

/// `sim[p][q]`: `q` directly simulates `p`.
fn direct_simulation(a: &OmegaAcceptor, f: &StateSet) -> Vec<Vec<bool>> {
    let n = a.num_states();
    let k = a.alphabet().len();
    let mut sim: Vec<Vec<bool>> = (0..n)
        .map(|p| (0..n).map(|q| !f.contains(&p) || f.contains(&q)).collect())
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            for q in 0..n {
                if p == q || !sim[p][q] {
                    continue;
                }
                let ok = (0..k).all(|l| {
                    let qs = &a.table()[q][l];
                    a.table()[p][l].iter().all(|&p2| qs.iter().any(|&q2| sim[p2][q2]))
                });
                if !ok {
                    sim[p][q] = false;
                    changed = true;
                }
            }
        }
    }
    sim
}

/// Breadth-first renumbering from the initial state, so that acceptors
/// built the same way compare equal.
fn renumber(a: &OmegaAcceptor) -> OmegaAcceptor {
    let n = a.num_states();
    let k = a.alphabet().len();
    let mut index = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([a.initial()]);
    index[a.initial()] = 0;
    order.push(a.initial());
    while let Some(p) = queue.pop_front() {
        for l in 0..k {
            let mut succ = a.table()[p][l].clone();
            succ.sort_unstable();
            for q in succ {
                if index[q] == usize::MAX {
                    index[q] = order.len();
                    order.push(q);
                    queue.push_back(q);
                }
            }
        }
    }
    let trans = order
        .iter()
        .map(|&p| {
            (0..k)
                .map(|l| {
                    let mut s: Vec<State> = a.table()[p][l].iter().map(|&q| index[q]).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect()
        })
        .collect();
    let acceptance = match a.acceptance() {
        Acceptance::Buchi(f) => Acceptance::Buchi(
            f.iter()
                .filter(|&&q| index[q] != usize::MAX)
                .map(|&q| index[q])
                .collect(),
        ),
        Acceptance::Muller(fam) => Acceptance::Muller(
            fam.iter()
                .filter(|s| s.iter().all(|&q| index[q] != usize::MAX))
                .map(|s| s.iter().map(|&q| index[q]).collect())
                .collect(),
        ),
    };
    OmegaAcceptor::from_parts(a.alphabet().clone(), 0, trans, acceptance)
}
