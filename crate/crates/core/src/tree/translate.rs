//! Muller tree automata for encodings of hierarchical languages.

use std::collections::HashMap;

use super::MullerTreeAutomaton;
use crate::alphabet::Letter;
use crate::error::Result;
use crate::graph::{closed_walk_sets, LabeledEdge};
use crate::hier::{Body, HnfAcceptor};
use crate::omega::{Acceptance, OmegaAcceptor, State, StateSet};

/// The pad checker: every node below it is labeled pad.
const PAD_STATE: State = 0;

/// Tree automaton accepting exactly the encodings `t^w` of the words `w`
/// accepted by `a`.
///
/// A level-1 acceptor runs on the leftmost branch and sends the pad
/// checker right. A nested acceptor runs its top on the leftmost branch;
/// at the k-th spine node it guesses the letter of block k, moves to a top
/// successor on the left and starts that letter's automaton on the right.
/// Accepted recurrence sets are the closed-walk sets of each component that
/// its own acceptance condition accepts, plus the pad checker alone;
/// `cap` bounds their enumeration.
pub fn hnf_to_tree_automaton(a: &HnfAcceptor, pad: &str, cap: usize) -> Result<MullerTreeAutomaton> {
    let alphabet = a.alphabet().with_letter(pad);
    let pad = alphabet.index_of(pad)?;
    let mut t = Translator {
        n: 1,
        delta: vec![(PAD_STATE, pad, PAD_STATE, PAD_STATE)],
        family: vec![[PAD_STATE].into_iter().collect()],
        built: HashMap::new(),
        pad,
        cap,
    };
    let initial = t.build(a)?;
    MullerTreeAutomaton::new(alphabet, t.n, initial, t.delta, t.family)
}

struct Translator {
    n: usize,
    delta: Vec<(State, Letter, State, State)>,
    family: Vec<StateSet>,
    built: HashMap<usize, State>,
    pad: Letter,
    cap: usize,
}

impl Translator {
    fn build(&mut self, h: &HnfAcceptor) -> Result<State> {
        if let Some(&q) = self.built.get(&h.id()) {
            return Ok(q);
        }
        let initial = match h.body() {
            Body::Base(b) => {
                let off = self.n;
                self.n += b.num_states();
                for (p, l, q) in b.delta() {
                    self.delta.push((off + p, l, off + q, PAD_STATE));
                }
                self.accepted_walks(b, off)?;
                off + b.initial()
            }
            Body::Nested { top, letters } => {
                let inits = letters.iter().map(|l| self.build(l)).collect::<Result<Vec<_>>>()?;
                let off = self.n;
                self.n += top.num_states();
                for (p, g, q) in top.delta() {
                    self.delta.push((off + p, self.pad, off + q, inits[g as usize]));
                }
                self.accepted_walks(top, off)?;
                off + top.initial()
            }
        };
        self.built.insert(h.id(), initial);
        Ok(initial)
    }

    /// Adds, shifted by `off`, the state sets of closed walks of `a` that
    /// its acceptance condition accepts.
    fn accepted_walks(&mut self, a: &OmegaAcceptor, off: State) -> Result<()> {
        let edges: Vec<LabeledEdge> = a
            .delta()
            .map(|(p, _, q)| (p, q))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|(from, to)| LabeledEdge {
                from,
                to,
                label: Default::default(),
            })
            .collect();
        for w in closed_walk_sets(a.num_states(), &edges, self.cap)? {
            let ok = match a.acceptance() {
                Acceptance::Buchi(f) => !w.nodes.is_disjoint(f),
                Acceptance::Muller(fam) => fam.contains(&w.nodes),
            };
            if ok {
                self.family.push(w.nodes.iter().map(|&q| q + off).collect());
            }
        }
        Ok(())
    }
}
