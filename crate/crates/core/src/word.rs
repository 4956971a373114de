//! Finitely presented words of length ω^n.

use std::fmt;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::omega::LassoWord;

/// An ultimately periodic word of length ω^n.
///
/// Level 1 is a lasso `u·v^ω`. Level `n ≥ 2` is a lasso of level-(n−1)
/// blocks: the block sequence is `U` followed by `V` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HierWord {
    Lasso(LassoWord),
    Spine {
        level: usize,
        prefix: Vec<HierWord>,
        period: Vec<HierWord>,
    },
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl HierWord {
    pub fn spine(prefix: Vec<HierWord>, period: Vec<HierWord>) -> Result<Self> {
        let first = period
            .first()
            .ok_or_else(|| Error::Invalid("block period must be nonempty".into()))?;
        let level = first.level();
        if let Some(b) = prefix.iter().chain(&period).find(|b| b.level() != level) {
            return Err(Error::LevelMismatch {
                expected: level,
                found: b.level(),
            });
        }
        Ok(HierWord::Spine {
            level: level + 1,
            prefix,
            period,
        })
    }

    /// The word whose every letter is `letter`.
    pub fn constant(letter: Letter, level: usize) -> Self {
        assert!(level >= 1);
        if level == 1 {
            HierWord::Lasso(LassoWord::constant(letter))
        } else {
            HierWord::Spine {
                level,
                prefix: Vec::new(),
                period: vec![HierWord::constant(letter, level - 1)],
            }
        }
    }

    pub fn level(&self) -> usize {
        match self {
            HierWord::Lasso(_) => 1,
            HierWord::Spine { level, .. } => *level,
        }
    }

    pub fn as_lasso(&self) -> Option<&LassoWord> {
        match self {
            HierWord::Lasso(w) => Some(w),
            HierWord::Spine { .. } => None,
        }
    }

    /// `(U, V)` for words of level at least 2.
    pub fn blocks(&self) -> Option<(&[HierWord], &[HierWord])> {
        match self {
            HierWord::Lasso(_) => None,
            HierWord::Spine { prefix, period, .. } => Some((prefix, period)),
        }
    }

    /// Block `j` of a word of level at least 2.
    pub fn block(&self, j: usize) -> &HierWord {
        let (u, v) = self.blocks().expect("block of a level-1 word");
        if j < u.len() {
            &u[j]
        } else {
            &v[(j - u.len()) % v.len()]
        }
    }

    /// Letter at the position `ω^(n−1)·d[0] + … + ω^0·d[n−1]`.
    pub fn letter_at(&self, digits: &[usize]) -> Letter {
        assert_eq!(digits.len(), self.level(), "position has the wrong number of digits");
        match self {
            HierWord::Lasso(w) => w.at(digits[0]),
            HierWord::Spine { .. } => self.block(digits[0]).letter_at(&digits[1..]),
        }
    }

    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        match self {
            HierWord::Lasso(w) => w.check(alphabet),
            HierWord::Spine { prefix, period, .. } => prefix.iter().chain(period).try_for_each(|b| b.check(alphabet)),
        }
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if self.level() != level {
            return Err(Error::LevelMismatch {
                expected: level,
                found: self.level(),
            });
        }
        Ok(())
    }

    /// `(|U|, |V|)` at the outermost level.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            HierWord::Lasso(w) => (w.prefix().len(), w.period().len()),
            HierWord::Spine { prefix, period, .. } => (prefix.len(), period.len()),
        }
    }

    /// The same word with an outer prefix of `prefix_len` and an outer
    /// period of `period_len`; `|U| <= prefix_len` and `|V|` must divide
    /// `period_len`.
    pub fn reshape(&self, prefix_len: usize, period_len: usize) -> HierWord {
        match self {
            HierWord::Lasso(w) => HierWord::Lasso(w.reshape(prefix_len, period_len)),
            HierWord::Spine { level, .. } => HierWord::Spine {
                level: *level,
                prefix: (0..prefix_len).map(|j| self.block(j).clone()).collect(),
                period: (prefix_len..prefix_len + period_len)
                    .map(|j| self.block(j).clone())
                    .collect(),
            },
        }
    }

    /// Shape `(max |U|, lcm |V|)` that every word in `words` can be reshaped to.
    pub fn common_shape<'a>(words: impl IntoIterator<Item = &'a HierWord>) -> (usize, usize) {
        words
            .into_iter()
            .map(|w| w.shape())
            .fold((0, 1), |(u, v), (wu, wv)| (u.max(wu), lcm(v, wv)))
    }

    pub fn map(&self, f: &dyn Fn(Letter) -> Letter) -> HierWord {
        match self {
            HierWord::Lasso(w) => HierWord::Lasso(w.map(f)),
            HierWord::Spine { level, prefix, period } => HierWord::Spine {
                level: *level,
                prefix: prefix.iter().map(|b| b.map(f)).collect(),
                period: period.iter().map(|b| b.map(f)).collect(),
            },
        }
    }

    /// Distinct outer blocks, in order of first occurrence.
    pub fn distinct_blocks(&self) -> Vec<&HierWord> {
        let mut out: Vec<&HierWord> = Vec::new();
        if let Some((u, v)) = self.blocks() {
            for b in u.iter().chain(v) {
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayWord(self, alphabet)
    }

    /// Parses the notation produced by [`HierWord::display`]: `<u|v>` at
    /// level 1 and `<[w, …]|[w, …]>` above. Letters are single characters
    /// when every letter name is one character, whitespace-separated
    /// otherwise; `ε` or nothing denotes an empty prefix.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<HierWord> {
        let mut p = WordParser {
            src: text,
            pos: 0,
            alphabet,
            compact: alphabet.names().iter().all(|n| n.chars().count() == 1),
        };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(w)
    }
}

struct DisplayWord<'a>(&'a HierWord, &'a Alphabet);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            HierWord::Lasso(w) => write!(f, "{}", w.display(self.1)),
            HierWord::Spine { prefix, period, .. } => {
                let list = |bs: &[HierWord]| {
                    bs.iter()
                        .map(|b| b.display(self.1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "<[{}]|[{}]>", list(prefix), list(period))
            }
        }
    }
}

struct WordParser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
    compact: bool,
}

impl WordParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<HierWord> {
        self.expect('<')?;
        self.skip_ws();
        if self.peek() == Some('[') {
            let u = self.block_list()?;
            self.expect('|')?;
            let v = self.block_list()?;
            self.expect('>')?;
            let at = self.pos;
            HierWord::spine(u, v).map_err(|e| Error::Syntax {
                offset: at,
                message: e.to_string(),
            })
        } else {
            let u = self.letters('|')?;
            self.expect('|')?;
            let v = self.letters('>')?;
            if v.is_empty() {
                return Err(self.error("empty period"));
            }
            self.expect('>')?;
            Ok(HierWord::Lasso(LassoWord::new(u, v)?))
        }
    }

    fn block_list(&mut self) -> Result<Vec<HierWord>> {
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.word()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected `,` or `]`")),
            }
        }
    }

    fn letters(&mut self, stop: char) -> Result<Vec<Letter>> {
        let start = self.pos;
        let end = self.src[start..]
            .find(stop)
            .map(|i| start + i)
            .ok_or_else(|| self.error(&format!("missing `{stop}`")))?;
        let body = &self.src[start..end];
        let mut out = Vec::new();
        let tokens: Vec<(usize, String)> = if self.compact {
            body.char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(|(i, c)| (i, c.to_string()))
                .collect()
        } else {
            let mut toks = Vec::new();
            let mut offset = 0;
            for t in body.split_whitespace() {
                let i = body[offset..].find(t).unwrap() + offset;
                offset = i + t.len();
                toks.push((i, t.to_string()));
            }
            toks
        };
        for (i, t) in tokens {
            if t == "ε" && !self.alphabet.names().iter().any(|n| n == "ε") {
                continue;
            }
            let letter = self.alphabet.index_of(&t).map_err(|_| Error::Syntax {
                offset: start + i,
                message: format!("unknown letter `{t}`"),
            })?;
            out.push(letter);
        }
        self.pos = end;
        Ok(out)
    }
}
