use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter inside an [`Alphabet`].
pub type Letter = u32;

/// A finite, ordered alphabet of named letters.
///
/// Cloning is cheap; alphabets compare by their letter names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate letter `{n}`")));
            }
        }
        Ok(Alphabet(names.into()))
    }

    /// Synthetic alphabet `prefix0, prefix1, ...`.
    pub fn synthetic(prefix: &str, size: usize) -> Self {
        Alphabet((0..size).map(|i| format!("{prefix}{i}")).collect())
    }

    /// The binary alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet(vec!["0".to_string(), "1".to_string()].into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.0[letter as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        0..self.0.len() as Letter
    }

    pub fn index_of(&self, name: &str) -> Result<Letter> {
        self.0
            .iter()
            .position(|n| n == name)
            .map(|i| i as Letter)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn check(&self, letter: Letter) -> Result<()> {
        if (letter as usize) < self.len() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                index: letter as usize,
                size: self.len(),
            })
        }
    }

    pub fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("{self} vs {other}")))
        }
    }

    /// Same alphabet with `letter` appended if it is not already present.
    pub fn with_letter(&self, letter: &str) -> Alphabet {
        if self.0.iter().any(|n| n == letter) {
            return self.clone();
        }
        let mut names = self.0.to_vec();
        names.push(letter.to_string());
        Alphabet(names.into())
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// The `k`-fold product `base^k`, used for convolutions of `k`-tuples.
///
/// Tuple letters are encoded big-endian in base `|base|`; the letter name is
/// the comma-joined component names, and the unique 0-tuple is named `()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TupleAlphabet {
    base: Alphabet,
    arity: usize,
    product: Alphabet,
}

impl TupleAlphabet {
    pub fn new(base: &Alphabet, arity: usize) -> Result<Self> {
        let size = base
            .len()
            .checked_pow(arity as u32)
            .filter(|&s| s <= 1 << 16)
            .ok_or(Error::Resource {
                what: "tuple alphabet size",
                count: usize::MAX,
                limit: 1 << 16,
            })?;
        let names = (0..size).map(|code| {
            if arity == 0 {
                "()".to_string()
            } else {
                decode(base.len(), arity, code as Letter)
                    .iter()
                    .map(|&l| base.name(l))
                    .collect::<Vec<_>>()
                    .join(",")
            }
        });
        Ok(TupleAlphabet {
            base: base.clone(),
            arity,
            product: Alphabet(names.collect()),
        })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.product
    }

    pub fn encode(&self, components: &[Letter]) -> Letter {
        debug_assert_eq!(components.len(), self.arity);
        encode(self.base.len(), components)
    }

    pub fn decode(&self, letter: Letter) -> Vec<Letter> {
        decode(self.base.len(), self.arity, letter)
    }

    /// Letter map from this alphabet onto `base^picks.len()` sending a tuple
    /// `t` to `(t[picks[0]], t[picks[1]], ...)`.
    pub fn selection(&self, picks: &[usize]) -> Result<LetterMap> {
        let target = TupleAlphabet::new(&self.base, picks.len())?;
        let image = self
            .alphabet()
            .letters()
            .map(|l| {
                let t = self.decode(l);
                let sel: Vec<Letter> = picks.iter().map(|&i| t[i]).collect();
                target.encode(&sel)
            })
            .collect();
        LetterMap::new(self.alphabet().clone(), target.alphabet().clone(), image)
    }
}

fn encode(radix: usize, components: &[Letter]) -> Letter {
    components.iter().fold(0usize, |acc, &c| acc * radix + c as usize) as Letter
}

fn decode(radix: usize, arity: usize, mut code: Letter) -> Vec<Letter> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = code % radix as Letter;
        code /= radix as Letter;
    }
    out
}

/// A total map between two alphabets, applied letterwise to words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterMap {
    source: Alphabet,
    target: Alphabet,
    image: Vec<Letter>,
}

impl LetterMap {
    pub fn new(source: Alphabet, target: Alphabet, image: Vec<Letter>) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::Invalid(format!(
                "letter map defines {} images for {} letters",
                image.len(),
                source.len()
            )));
        }
        for &l in &image {
            target.check(l)?;
        }
        Ok(LetterMap { source, target, image })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        LetterMap {
            source: alphabet.clone(),
            target: alphabet.clone(),
            image: alphabet.letters().collect(),
        }
    }

    /// Builds a map from `(source name, target name)` pairs; every source
    /// letter must be covered.
    pub fn from_names(source: &Alphabet, target: &Alphabet, pairs: &[(String, String)]) -> Result<Self> {
        let mut image = vec![None; source.len()];
        for (from, to) in pairs {
            image[source.index_of(from)? as usize] = Some(target.index_of(to)?);
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::UnknownLetter(source.name(i as Letter).to_string())))
            .collect::<Result<Vec<_>>>()?;
        LetterMap::new(source.clone(), target.clone(), image)
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn apply(&self, letter: Letter) -> Letter {
        self.image[letter as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LetterMap) -> Result<LetterMap> {
        self.target.ensure_same(&other.source)?;
        Ok(LetterMap {
            source: self.source.clone(),
            target: other.target.clone(),
            image: self.image.iter().map(|&l| other.apply(l)).collect(),
        })
    }
}
