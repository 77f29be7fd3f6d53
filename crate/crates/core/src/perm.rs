//! Permutations of `0..n`, used as the right action of group elements on
//! cosets.

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Build from an explicit image vector; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &t in &images {
            assert!((t as usize) < n && !seen[t as usize], "not a bijection");
            seen[t as usize] = true;
        }
        Perm(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &t)| i as u32 == t)
    }

    /// `self` followed by `other`: the result maps `i` to `other(self(i))`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(self.0.iter().map(|&t| other.0[t as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &t) in self.0.iter().enumerate() {
            inv[t as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Multiset of cycle lengths, sorted ascending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = self.0[t] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let c = Perm::from_images(vec![1, 2, 3, 0]); // 4-cycle
        assert!(c.then(&c.inverse()).is_identity());
        assert_eq!(c.then(&c).cycle_lengths(), vec![2, 2]);
        assert_eq!(c.cycle_lengths(), vec![4]);
    }
}
