//! Convolution of tuples of words into words over a product alphabet.

use crate::alphabet::{Letter, TupleAlphabet};
use crate::error::{Error, Result};
use crate::omega::LassoWord;
use crate::word::HierWord;

/// Pointwise tuple of `words`, after reshaping them to a common lasso
/// shape at every level. An empty tuple convolves to the constant word
/// over the one-letter alphabet of 0-tuples, at the given level.
pub fn convolve(words: &[HierWord], tuple: &TupleAlphabet, level: usize) -> Result<HierWord> {
    if words.len() != tuple.arity() {
        return Err(Error::Invalid(format!(
            "{} words for a tuple alphabet of arity {}",
            words.len(),
            tuple.arity()
        )));
    }
    for w in words {
        w.check_level(level)?;
        w.check(tuple.base())?;
    }
    if words.is_empty() {
        return Ok(HierWord::constant(0, level));
    }
    Ok(zip(words, &|letters| tuple.encode(letters)))
}

fn zip(words: &[HierWord], encode: &dyn Fn(&[Letter]) -> Letter) -> HierWord {
    let (u, v) = HierWord::common_shape(words);
    let shaped: Vec<HierWord> = words.iter().map(|w| w.reshape(u, v)).collect();
    if let HierWord::Lasso(_) = shaped[0] {
        let lassos: Vec<&LassoWord> = shaped.iter().map(|w| w.as_lasso().expect("same level")).collect();
        let column = |i: usize| encode(&lassos.iter().map(|w| w.at(i)).collect::<Vec<_>>());
        return HierWord::Lasso(
            LassoWord::new((0..u).map(column).collect(), (u..u + v).map(column).collect()).expect("nonempty period"),
        );
    }
    let blocks = |j: usize| zip(&shaped.iter().map(|w| w.block(j).clone()).collect::<Vec<_>>(), encode);
    HierWord::spine((0..u).map(blocks).collect(), (u..u + v).map(blocks).collect()).expect("nonempty period")
}

/// Component words of a convolution.
pub fn unconvolve(word: &HierWord, tuple: &TupleAlphabet) -> Vec<HierWord> {
    (0..tuple.arity()).map(|i| word.map(&|l| tuple.decode(l)[i])).collect()
}
