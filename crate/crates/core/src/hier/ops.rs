//! Boolean operations, atoms, letter maps and lifting.

use std::collections::BTreeSet;

use super::{Body, HnfAcceptor, TOP_LETTER_PREFIX};
use crate::alphabet::{Alphabet, Letter, LetterMap};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::omega::{Acceptance, OmegaAcceptor};

fn top_alphabet(size: usize) -> Alphabet {
    Alphabet::synthetic(TOP_LETTER_PREFIX, size)
}

impl HnfAcceptor {
    /// Language union: the tops run side by side over the concatenated
    /// letter lists.
    pub fn union(&self, other: &HnfAcceptor) -> Result<HnfAcceptor> {
        self.check_compatible(other)?;
        if self.is_trivially_universal() || other.is_empty() {
            return Ok(self.clone());
        }
        if other.is_trivially_universal() || self.is_empty() {
            return Ok(other.clone());
        }
        match (self.body(), other.body()) {
            (Body::Base(a), Body::Base(b)) => Ok(HnfAcceptor::base(a.union(b)?)),
            (Body::Nested { top: ta, letters: la }, Body::Nested { top: tb, letters: lb }) => {
                let (ka, kb) = (la.len(), lb.len());
                let all = top_alphabet(ka + kb);
                let shift_a = LetterMap::new(ta.alphabet().clone(), all.clone(), (0..ka as Letter).collect())?;
                let shift_b = LetterMap::new(
                    tb.alphabet().clone(),
                    all.clone(),
                    (ka as Letter..(ka + kb) as Letter).collect(),
                )?;
                let top = ta.map_letters(&shift_a)?.union(&tb.map_letters(&shift_b)?)?;
                let letters = la.iter().chain(lb).cloned().collect();
                HnfAcceptor::nested(top, letters)
            }
            _ => unreachable!("levels checked"),
        }
    }

    /// Language intersection: product of the tops over pairs of letters
    /// whose languages meet.
    pub fn intersect(&self, other: &HnfAcceptor, budget: &Budget) -> Result<HnfAcceptor> {
        self.check_compatible(other)?;
        if self.is_trivially_universal() || self.ptr_eq(other) {
            return Ok(other.clone());
        }
        if other.is_trivially_universal() {
            return Ok(self.clone());
        }
        match (self.body(), other.body()) {
            (Body::Base(a), Body::Base(b)) => Ok(HnfAcceptor::base(a.intersect(b, budget)?)),
            (Body::Nested { top: ta, letters: la }, Body::Nested { top: tb, letters: lb }) => {
                let mut pairs: Vec<(Letter, Letter)> = Vec::new();
                let mut letters = Vec::new();
                for (g, x) in la.iter().enumerate() {
                    for (h, y) in lb.iter().enumerate() {
                        let meet = x.intersect(y, budget)?;
                        if !meet.is_empty() {
                            pairs.push((g as Letter, h as Letter));
                            letters.push(meet);
                        }
                    }
                }
                if letters.is_empty() {
                    return Ok(HnfAcceptor::empty(self.alphabet(), self.level()));
                }
                let sigma = top_alphabet(pairs.len());
                let left: Vec<Vec<Letter>> = pairs.iter().map(|&(g, _)| vec![g]).collect();
                let right: Vec<Vec<Letter>> = pairs.iter().map(|&(_, h)| vec![h]).collect();
                let top = ta
                    .preimage_relation(&sigma, &left)?
                    .intersect(&tb.preimage_relation(&sigma, &right)?, budget)?;
                let result = HnfAcceptor::nested(top, letters)?;
                Ok(if self.is_partitioned() && other.is_partitioned() {
                    result.assume_partitioned()
                } else {
                    result
                })
            }
            _ => unreachable!("levels checked"),
        }
    }

    /// Language complement. Above level 1 the letters are first refined to
    /// atoms, so the top can be complemented over a partition.
    pub fn complement(&self, budget: &Budget) -> Result<HnfAcceptor> {
        if let Some(c) = self.0.complement.get() {
            return Ok(c.clone());
        }
        let result = if self.is_trivially_universal() {
            HnfAcceptor::empty(self.alphabet(), self.level())
        } else if self.is_empty() {
            HnfAcceptor::universal(self.alphabet(), self.level())
        } else {
            match self.body() {
                Body::Base(b) => HnfAcceptor::base(b.complement(budget)?),
                Body::Nested { top, letters } => {
                    let (atoms, top) = if self.is_partitioned() {
                        (letters.clone(), top.clone())
                    } else {
                        let (atoms, members) = refine_to_atoms(letters, budget)?;
                        let mut meaning: Vec<Vec<Letter>> = vec![Vec::new(); atoms.len()];
                        for (g, ds) in members.iter().enumerate() {
                            for &d in ds {
                                meaning[d].push(g as Letter);
                            }
                        }
                        let top = top.preimage_relation(&top_alphabet(atoms.len()), &meaning)?;
                        (atoms, top)
                    };
                    HnfAcceptor::nested(top.complement(budget)?, atoms)?.assume_partitioned()
                }
            }
        };
        let _ = self.0.complement.set(result.clone());
        Ok(result)
    }

    /// Forward image under a letter map: each letter language is projected,
    /// the top is kept.
    pub fn project(&self, f: &LetterMap) -> Result<HnfAcceptor> {
        self.alphabet().ensure_same(f.source())?;
        match self.body() {
            Body::Base(b) => Ok(HnfAcceptor::base(b.map_letters(f)?)),
            Body::Nested { top, letters } => {
                let letters = letters.iter().map(|l| l.project(f)).collect::<Result<Vec<_>>>()?;
                HnfAcceptor::nested(top.clone(), letters)
            }
        }
    }

    /// Letterwise preimage; partitions are preserved.
    pub fn preimage(&self, f: &LetterMap) -> Result<HnfAcceptor> {
        self.alphabet().ensure_same(f.target())?;
        if self.is_trivially_universal() {
            return Ok(HnfAcceptor::universal(f.source(), self.level()));
        }
        match self.body() {
            Body::Base(b) => Ok(HnfAcceptor::base(b.preimage(f)?)),
            Body::Nested { top, letters } => {
                let letters = letters.iter().map(|l| l.preimage(f)).collect::<Result<Vec<_>>>()?;
                let result = HnfAcceptor::nested(top.clone(), letters)?;
                Ok(if self.is_partitioned() {
                    result.assume_partitioned()
                } else {
                    result
                })
            }
        }
    }

    /// The same language over a larger alphabet whose first letters are the
    /// current ones; words using the new letters are rejected.
    pub fn extend_alphabet(&self, alphabet: &Alphabet) -> Result<HnfAcceptor> {
        let old = self.alphabet();
        if alphabet.len() < old.len() || alphabet.names()[..old.len()] != old.names()[..] {
            return Err(Error::AlphabetMismatch(format!("{alphabet} does not extend {old}")));
        }
        if alphabet == old {
            return Ok(self.clone());
        }
        match self.body() {
            Body::Base(b) => Ok(HnfAcceptor::base(OmegaAcceptor::new(
                alphabet.clone(),
                b.num_states(),
                b.initial(),
                b.delta().collect::<Vec<_>>(),
                b.acceptance().clone(),
            )?)),
            Body::Nested { top, letters } => {
                let letters = letters
                    .iter()
                    .map(|l| l.extend_alphabet(alphabet))
                    .collect::<Result<Vec<_>>>()?;
                HnfAcceptor::nested(top.clone(), letters)
            }
        }
    }

    /// Level n+1 encoding: block 0 carries a word of `self`, every later
    /// block is constantly `pad`. The pad letter is appended to the
    /// alphabet when missing.
    pub fn lift(&self, pad: &str) -> Result<HnfAcceptor> {
        let alphabet = self.alphabet().with_letter(pad);
        let inner = self.extend_alphabet(&alphabet)?;
        let pad_block = HnfAcceptor::constant(&alphabet, alphabet.index_of(pad)?, self.level())?;
        let top = OmegaAcceptor::new(
            top_alphabet(2),
            2,
            0,
            [(0, 0, 1), (1, 1, 1)],
            Acceptance::Buchi([1].into_iter().collect()),
        )?;
        HnfAcceptor::nested(top, vec![inner, pad_block])
    }

    /// Checks, by emptiness, that the letter languages are pairwise disjoint
    /// and cover every block. Level-1 acceptors trivially pass.
    pub fn certify_partition(&self, budget: &Budget) -> Result<bool> {
        let letters = match self.body() {
            Body::Base(_) => return Ok(true),
            Body::Nested { letters, .. } => letters,
        };
        for (i, x) in letters.iter().enumerate() {
            for y in &letters[i + 1..] {
                if !x.intersect(y, budget)?.is_empty() {
                    return Ok(false);
                }
            }
        }
        let mut all = HnfAcceptor::empty(self.alphabet(), self.level() - 1);
        for l in letters {
            all = all.union(l)?;
        }
        Ok(all.complement(budget)?.is_empty())
    }
}

/// Refines a family of same-level languages to its atoms: nonempty,
/// pairwise disjoint languages covering every word, such that each member
/// is the union of the atoms listed for it.
pub fn refine_to_atoms(family: &[HnfAcceptor], budget: &Budget) -> Result<(Vec<HnfAcceptor>, Vec<Vec<usize>>)> {
    let first = match family.first() {
        Some(f) => f,
        None => return Err(Error::Invalid("cannot refine an empty family".into())),
    };
    for m in family {
        m.check_compatible(first)?;
    }
    let mut atoms: Vec<(HnfAcceptor, BTreeSet<usize>)> =
        vec![(HnfAcceptor::universal(first.alphabet(), first.level()), BTreeSet::new())];
    for (i, m) in family.iter().enumerate() {
        if let Some(j) = family[..i].iter().position(|x| x.ptr_eq(m)) {
            for (_, members) in atoms.iter_mut() {
                if members.contains(&j) {
                    members.insert(i);
                }
            }
            continue;
        }
        if m.is_trivially_universal() {
            for (_, members) in atoms.iter_mut() {
                members.insert(i);
            }
            continue;
        }
        let co = m.complement(budget)?;
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for (a, members) in atoms {
            let inside = a.intersect(m, budget)?;
            let outside = a.intersect(&co, budget)?;
            let mut with = members.clone();
            with.insert(i);
            // A trivial split keeps the smaller original atom.
            match (inside.is_empty(), outside.is_empty()) {
                (false, true) => next.push((a, with)),
                (true, false) => next.push((a, members)),
                (false, false) => {
                    next.push((inside, with));
                    next.push((outside, members));
                }
                (true, true) => {}
            }
        }
        atoms = next;
    }
    let mut membership = vec![Vec::new(); family.len()];
    for (d, (_, members)) in atoms.iter().enumerate() {
        for &i in members {
            membership[i].push(d);
        }
    }
    Ok((atoms.into_iter().map(|(a, _)| a).collect(), membership))
}
