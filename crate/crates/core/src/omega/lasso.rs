use std::fmt;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// The ultimately periodic ω-word `u · v · v · v ···`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("lasso period must be nonempty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    /// The constant word `c^ω`.
    pub fn constant(letter: Letter) -> Self {
        LassoWord {
            prefix: Vec::new(),
            period: vec![letter],
        }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Letter at position `i`.
    pub fn at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        self.prefix
            .iter()
            .chain(&self.period)
            .try_for_each(|&l| alphabet.check(l))
    }

    /// Same word presented with a prefix of length `prefix_len` and a period
    /// of length `period_len`; requires `prefix_len >= |u|` and `|v|` to
    /// divide `period_len`.
    pub fn reshape(&self, prefix_len: usize, period_len: usize) -> LassoWord {
        debug_assert!(prefix_len >= self.prefix.len());
        debug_assert!(period_len % self.period.len() == 0);
        LassoWord {
            prefix: (0..prefix_len).map(|i| self.at(i)).collect(),
            period: (prefix_len..prefix_len + period_len).map(|i| self.at(i)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Letter) -> Letter) -> LassoWord {
        LassoWord {
            prefix: self.prefix.iter().map(|&l| f(l)).collect(),
            period: self.period.iter().map(|&l| f(l)).collect(),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayLasso(self, alphabet)
    }
}

struct DisplayLasso<'a>(&'a LassoWord, &'a Alphabet);

impl fmt::Display for DisplayLasso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.1.names().iter().all(|n| n.chars().count() == 1);
        let names = |ls: &[Letter]| {
            let parts = ls.iter().map(|&l| self.1.name(l)).collect::<Vec<_>>();
            parts.join(if compact { "" } else { " " })
        };
        let u = names(self.0.prefix());
        write!(
            f,
            "<{}|{}>",
            if u.is_empty() { "ε".to_string() } else { u },
            names(self.0.period())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_period_rejected() {
        assert!(LassoWord::new(vec![0], vec![]).is_err());
        assert!(LassoWord::new(vec![], vec![1]).is_ok());
    }

    #[test]
    fn reshape_preserves_positions() {
        let w = LassoWord::new(vec![1], vec![0, 1]).unwrap();
        let r = w.reshape(3, 4);
        for i in 0..20 {
            assert_eq!(w.at(i), r.at(i));
        }
    }
}
