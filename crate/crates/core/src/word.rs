//! Words in a free group, stored as signed 1-based generator indices.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A word in the free group on some generating set.
///
/// The letter `k > 0` is the `k`-th generator (1-based) and `-k` its inverse.
/// Constructors freely reduce, so two equal elements of the free group
/// compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i32>);

impl Word {
    /// Build a word, freely reducing adjacent `x x^{-1}` pairs.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut stack: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "word letters must be nonzero");
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Single-letter word for generator `g` (1-based); negative for inverse.
    pub fn gen(g: i32) -> Self {
        assert!(g != 0);
        Word(vec![g])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// All letters reference generators `1..=num_gens`.
    pub fn in_range(&self, num_gens: usize) -> bool {
        self.0
            .iter()
            .all(|&l| l != 0 && (l.unsigned_abs() as usize) <= num_gens)
    }

    /// Exponent-sum vector of the word in `Z^{num_gens}`.
    pub fn abelianized(&self, num_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_gens];
        for &l in &self.0 {
            let idx = (l.unsigned_abs() - 1) as usize;
            v[idx] += if l > 0 { 1 } else { -1 };
        }
        v
    }

    /// Cyclic rotations of the word (used by relator rewriting).
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.0.len();
        (0..n.max(1))
            .map(|s| {
                Word::new(
                    self.0
                        .iter()
                        .cycle()
                        .skip(s)
                        .take(n)
                        .copied()
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }

    /// Remove the first occurrence of `sub` as a contiguous subword and
    /// freely reduce. Returns `None` if `sub` does not occur.
    pub fn delete_subword(&self, sub: &Word) -> Option<Word> {
        let (w, s) = (&self.0, &sub.0);
        if s.is_empty() || s.len() > w.len() {
            return None;
        }
        (0..=w.len() - s.len())
            .find(|&i| &w[i..i + s.len()] == s.as_slice())
            .map(|i| {
                Word::new(
                    w[..i]
                        .iter()
                        .chain(w[i + s.len()..].iter())
                        .copied()
                        .collect::<Vec<_>>(),
                )
            })
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "x{}{}", l.abs(), if l < 0 { "⁻¹" } else { "" })?;
        }
        Ok(())
    }
}
