//! The tree `t^w` of an ω^n-word `w`.
//!
//! Level 1: the leftmost branch carries `w` and every other node the pad
//! letter. Level n+1: the leftmost branch carries pad, and the right
//! child of its k-th node roots the tree of block k.

use std::collections::HashMap;

use super::RegularTree;
use crate::alphabet::{Alphabet, Letter};
use crate::error::Result;
use crate::word::HierWord;

/// Encodes `word` over `alphabet`; the tree alphabet is `alphabet` with
/// `pad` appended when missing. The result is minimal.
pub fn encode_word_tree(word: &HierWord, alphabet: &Alphabet, pad: &str) -> Result<RegularTree> {
    word.check(alphabet)?;
    let tree_alphabet = alphabet.with_letter(pad);
    let pad = tree_alphabet.index_of(pad)?;
    let mut e = Encoder {
        labels: vec![pad, pad],
        left: vec![usize::MAX, 1],
        right: vec![usize::MAX, 1],
        memo: HashMap::new(),
        pad,
    };
    // Node 0 is a placeholder root, redirected to the encoded word.
    let root = e.encode(word);
    e.labels[0] = e.labels[root];
    e.left[0] = e.left[root];
    e.right[0] = e.right[root];
    Ok(RegularTree::new(tree_alphabet, e.labels, e.left, e.right)?.minimize())
}

struct Encoder<'w> {
    labels: Vec<Letter>,
    left: Vec<usize>,
    right: Vec<usize>,
    memo: HashMap<&'w HierWord, usize>,
    pad: Letter,
}

const PAD_NODE: usize = 1;

impl<'w> Encoder<'w> {
    fn encode(&mut self, w: &'w HierWord) -> usize {
        if let Some(&v) = self.memo.get(w) {
            return v;
        }
        let (u, v) = w.shape();
        let first = self.labels.len();
        let spine: Vec<(Letter, usize)> = match w {
            HierWord::Lasso(l) => (0..u + v).map(|i| (l.at(i), PAD_NODE)).collect(),
            HierWord::Spine { .. } => {
                // Reserve the spine first so nested blocks get later ids.
                (0..u + v).map(|_| (self.pad, usize::MAX)).collect()
            }
        };
        for (i, &(label, right)) in spine.iter().enumerate() {
            self.labels.push(label);
            self.right.push(right);
            self.left.push(if i + 1 < u + v { first + i + 1 } else { first + u });
        }
        self.memo.insert(w, first);
        if let HierWord::Spine { .. } = w {
            for j in 0..u + v {
                let child = self.encode(w.block(j));
                self.right[first + j] = child;
            }
        }
        first
    }
}

/// Whether `tree` has the shape of a level-`level` encoding with the given
/// pad: off-branch regions constantly pad, spine labels of level 1 drawn
/// from `word_alphabet`, pad on higher spines.
pub fn validate_encoding(tree: &RegularTree, word_alphabet: &Alphabet, pad: &str, level: usize) -> bool {
    let Ok(pad) = tree.alphabet().index_of(pad) else {
        return false;
    };
    let in_word: Vec<bool> = tree
        .alphabet()
        .names()
        .iter()
        .map(|n| word_alphabet.index_of(n).is_ok())
        .collect();
    let mut v = Validator {
        tree,
        pad,
        in_word,
        constant: HashMap::new(),
        valid: HashMap::new(),
    };
    level >= 1 && v.valid(0, level)
}

struct Validator<'t> {
    tree: &'t RegularTree,
    pad: Letter,
    in_word: Vec<bool>,
    constant: HashMap<usize, bool>,
    valid: HashMap<(usize, usize), bool>,
}

impl Validator<'_> {
    fn constant_pad(&mut self, v: usize) -> bool {
        if let Some(&c) = self.constant.get(&v) {
            return c;
        }
        let t = self.tree;
        let mut seen = vec![false; t.len()];
        let mut stack = vec![v];
        seen[v] = true;
        let mut ok = true;
        while let Some(x) = stack.pop() {
            if t.label(x) != self.pad {
                ok = false;
                break;
            }
            for y in [t.left(x), t.right(x)] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        self.constant.insert(v, ok);
        ok
    }

    fn valid(&mut self, v: usize, level: usize) -> bool {
        if let Some(&ok) = self.valid.get(&(v, level)) {
            return ok;
        }
        // Assume success on revisits; spines are explored to their cycle.
        self.valid.insert((v, level), true);
        let t = self.tree;
        let mut seen = vec![false; t.len()];
        let mut x = v;
        let mut ok = true;
        while !seen[x] {
            seen[x] = true;
            let here = if level == 1 {
                self.in_word[t.label(x) as usize] && self.constant_pad(t.right(x))
            } else {
                t.label(x) == self.pad && self.valid(t.right(x), level - 1)
            };
            if !here {
                ok = false;
                break;
            }
            x = t.left(x);
        }
        self.valid.insert((v, level), ok);
        ok
    }
}
