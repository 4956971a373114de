//! Emptiness, witnesses and membership.

use std::collections::HashMap;

use super::{Body, HnfAcceptor};
use crate::alphabet::Letter;
use crate::error::Result;
use crate::word::HierWord;

impl HnfAcceptor {
    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    /// An accepted word, if any. Letters with empty languages are removed
    /// from the top, whose own witness is then expanded letter by letter.
    pub fn witness(&self) -> Option<HierWord> {
        self.0
            .witness
            .get_or_init(|| match self.body() {
                Body::Base(b) => b.witness().map(HierWord::Lasso),
                Body::Nested { top, letters } => {
                    let words: Vec<Option<HierWord>> = letters.iter().map(HnfAcceptor::witness).collect();
                    let keep: Vec<bool> = words.iter().map(Option::is_some).collect();
                    let sigma = top.restrict_letters(&keep).witness()?;
                    let expand = |ls: &[Letter]| -> Vec<HierWord> {
                        ls.iter()
                            .map(|&g| words[g as usize].clone().expect("kept letter"))
                            .collect()
                    };
                    HierWord::spine(expand(sigma.prefix()), expand(sigma.period())).ok()
                }
            })
            .clone()
    }

    /// Whether `word` is accepted. Each distinct block is classified once
    /// against every letter language; the top then reads the lasso of
    /// classification sets.
    pub fn accepts(&self, word: &HierWord) -> Result<bool> {
        word.check_level(self.level())?;
        word.check(self.alphabet())?;
        let mut memo = Memo::default();
        Ok(self.member(word, &mut memo))
    }

    fn member<'w>(&self, word: &'w HierWord, memo: &mut Memo<'w>) -> bool {
        let key = (self.id(), memo.intern(word));
        if let Some(&known) = memo.results.get(&key) {
            return known;
        }
        let result = match (self.body(), word) {
            (Body::Base(b), HierWord::Lasso(w)) => b.accepts(w).expect("checked alphabet"),
            (Body::Nested { top, letters }, HierWord::Spine { prefix, period, .. }) => {
                let mut classes: HashMap<&HierWord, Vec<Letter>> = HashMap::new();
                for block in prefix.iter().chain(period) {
                    if !classes.contains_key(block) {
                        let c = letters
                            .iter()
                            .enumerate()
                            .filter(|(_, l)| l.member(block, memo))
                            .map(|(g, _)| g as Letter)
                            .collect();
                        classes.insert(block, c);
                    }
                }
                let u: Vec<Vec<Letter>> = prefix.iter().map(|b| classes[b].clone()).collect();
                let v: Vec<Vec<Letter>> = period.iter().map(|b| classes[b].clone()).collect();
                top.accepts_pattern(&u, &v)
            }
            _ => unreachable!("levels checked"),
        };
        memo.results.insert(key, result);
        result
    }
}

#[derive(Default)]
struct Memo<'w> {
    ids: HashMap<&'w HierWord, usize>,
    results: HashMap<(usize, usize), bool>,
}

impl<'w> Memo<'w> {
    fn intern(&mut self, w: &'w HierWord) -> usize {
        let next = self.ids.len();
        *self.ids.entry(w).or_insert(next)
    }
}
