//! Finitely presented groups, matrix representations over the p-adic
//! integers, and enumeration of the finite quotients obtained by reducing
//! mod `p^i`.
//!
//! A quotient is materialized as an explicit permutation action: one
//! permutation of the element set per generator, acting by right
//! multiplication. Everything downstream (chain complexes of covers, index
//! growth estimates) consumes only the permutations.

use crate::config::Budgets;
use crate::exactla::{rank_fp, PrimeFieldMatrix};
use crate::perm::Perm;
use crate::word::Word;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FpGroupError {
    #[error("generator index out of range in word {0}")]
    WordOutOfRange(String),
    #[error("relator {relator} is not freely reduced")]
    RelatorNotReduced { relator: String },
    #[error("enumeration at level {level} exceeded the element cap {cap}")]
    ElementCapExceeded { level: u32, cap: usize },
    #[error("relator {relator} does not map to the identity mod p^{level}")]
    NotHomomorphism { relator: String, level: u32 },
    #[error("generator image {index} is not invertible mod {p}")]
    NotInvertible { index: usize, p: u64 },
    #[error("need at least two consecutive levels with strictly increasing index")]
    InsufficientLevels,
    #[error("level {level} exceeds max_level {max_level}")]
    LevelTooDeep { level: u32, max_level: u32 },
    #[error("p^{level} does not fit in the word size")]
    ModulusOverflow { level: u32 },
    #[error("{0}")]
    Invalid(String),
}

/// Generators and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, FpGroupError> {
        let pres = GroupPresentation {
            generators,
            relators,
        };
        pres.validate()?;
        Ok(pres)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<(), FpGroupError> {
        for r in &self.relators {
            if !r.in_range(self.generators.len()) {
                return Err(FpGroupError::WordOutOfRange(r.to_string()));
            }
            // Word construction freely reduces, so this only triggers on
            // hand-built raw data.
            if Word::new(r.letters().iter().copied()) != *r {
                return Err(FpGroupError::RelatorNotReduced {
                    relator: r.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// A representation into `GL_n` over the p-adic integers, given by integer
/// matrices read mod `p^i` per level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRep {
    pub p: u64,
    pub n: usize,
    /// One `n x n` integer matrix per generator, row-major.
    pub images: Vec<Vec<Vec<i64>>>,
    pub max_level: u32,
}

/// Square matrix over `Z/p^i`, entries canonical in `[0, p^i)`.
type MatZq = Vec<u64>;

fn mat_identity(n: usize) -> MatZq {
    let mut m = vec![0u64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn mat_mul(a: &MatZq, b: &MatZq, n: usize, q: u64) -> MatZq {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let prod = (aik as u128 * b[k * n + j] as u128) % q as u128;
                out[i * n + j] = ((out[i * n + j] as u128 + prod) % q as u128) as u64;
            }
        }
    }
    out
}

fn mat_reduce(entries: &[Vec<i64>], n: usize, q: u64) -> MatZq {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = entries[i][j].rem_euclid(q as i64) as u64;
        }
    }
    out
}

/// Inverse mod `p` by augmented elimination, then Newton lifting doubles the
/// precision each step until the full modulus `p^level` is reached.
fn mat_inverse_mod_q(
    a: &MatZq,
    n: usize,
    p: u64,
    level: u32,
) -> Result<MatZq, FpGroupError> {
    use crate::exactla::{FieldOps, PrimeField};
    let field = PrimeField::new(p);
    // invert mod p
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = (0..n).map(|j| a[i * n + j] % p).collect();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| aug[r][col] != 0) else {
            return Err(FpGroupError::NotInvertible { index: usize::MAX, p });
        };
        aug.swap(rank, pivot);
        let inv = field.inv(&aug[rank][col]);
        for c in 0..2 * n {
            aug[rank][c] = field.mulmod(aug[rank][c], inv);
        }
        for r in 0..n {
            if r != rank && aug[r][col] != 0 {
                let f = aug[r][col];
                for c in 0..2 * n {
                    let sub = field.mulmod(f, aug[rank][c]);
                    aug[r][c] = field.sub(&aug[r][c], &sub);
                }
            }
        }
        rank += 1;
    }
    let mut inv: MatZq = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            inv[i * n + j] = aug[i][n + j];
        }
    }
    // lift: X <- X (2I - A X) mod p^{2^k}
    let q = modulus(p, level)?;
    let mut precision = 1u32;
    while precision < level {
        precision = (precision * 2).min(level);
        let qk = modulus(p, precision)?;
        let ax = mat_mul(a, &inv, n, qk);
        let mut two_minus = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let idv = if i == j { 2 % qk } else { 0 };
                two_minus[i * n + j] = (idv + qk - ax[i * n + j] % qk) % qk;
            }
        }
        inv = mat_mul(&inv, &two_minus, n, qk);
    }
    for e in inv.iter_mut() {
        *e %= q;
    }
    Ok(inv)
}

pub fn modulus(p: u64, level: u32) -> Result<u64, FpGroupError> {
    let mut q: u64 = 1;
    for _ in 0..level {
        q = q
            .checked_mul(p)
            .filter(|&v| v <= 1 << 62)
            .ok_or(FpGroupError::ModulusOverflow { level })?;
    }
    Ok(q)
}

impl PadicRep {
    /// Check shape, invertibility mod `p`, and that every relator maps to the
    /// identity mod `p^max_level`. Relator validity at the top level implies
    /// it at every lower level.
    pub fn validate(&self, pres: &GroupPresentation) -> Result<(), FpGroupError> {
        if self.images.len() != pres.num_generators() {
            return Err(FpGroupError::Invalid(format!(
                "expected {} generator images, got {}",
                pres.num_generators(),
                self.images.len()
            )));
        }
        if !crate::exactla::is_prime_u64(self.p) {
            return Err(FpGroupError::Invalid(format!("p = {} is not prime", self.p)));
        }
        for (idx, img) in self.images.iter().enumerate() {
            if img.len() != self.n || img.iter().any(|row| row.len() != self.n) {
                return Err(FpGroupError::Invalid(format!(
                    "image {} is not {}x{}",
                    idx, self.n, self.n
                )));
            }
            let rows: Vec<Vec<i64>> = img.clone();
            let m = PrimeFieldMatrix::from_rows(self.p, &rows);
            if rank_fp(&m) != self.n {
                return Err(FpGroupError::NotInvertible { index: idx, p: self.p });
            }
        }
        let q = modulus(self.p, self.max_level)?;
        let (imgs, invs) = self.images_mod(self.max_level)?;
        for r in &pres.relators {
            let m = self.evaluate_word(r, &imgs, &invs, q);
            if m != mat_identity(self.n) {
                return Err(FpGroupError::NotHomomorphism {
                    relator: r.to_string(),
                    level: self.max_level,
                });
            }
        }
        Ok(())
    }

    fn images_mod(&self, level: u32) -> Result<(Vec<MatZq>, Vec<MatZq>), FpGroupError> {
        let q = modulus(self.p, level)?;
        let mut imgs = Vec::with_capacity(self.images.len());
        let mut invs = Vec::with_capacity(self.images.len());
        for (idx, img) in self.images.iter().enumerate() {
            let m = mat_reduce(img, self.n, q);
            let inv = mat_inverse_mod_q(&m, self.n, self.p, level).map_err(|e| match e {
                FpGroupError::NotInvertible { .. } => FpGroupError::NotInvertible {
                    index: idx,
                    p: self.p,
                },
                other => other,
            })?;
            imgs.push(m);
            invs.push(inv);
        }
        Ok((imgs, invs))
    }

    fn evaluate_word(&self, w: &Word, imgs: &[MatZq], invs: &[MatZq], q: u64) -> MatZq {
        let mut acc = mat_identity(self.n);
        for &l in w.letters() {
            let idx = (l.unsigned_abs() - 1) as usize;
            let m = if l > 0 { &imgs[idx] } else { &invs[idx] };
            acc = mat_mul(&acc, m, self.n, q);
        }
        acc
    }
}

/// The image of the group in `GL_n(Z/p^i)` with its right coset action.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub level: u32,
    pub index: u64,
    /// Canonical matrices mod `p^level` in enumeration (BFS) order.
    pub elements: Vec<MatZq>,
    pub identity_idx: usize,
    /// Right multiplication by each generator image.
    pub gen_perms: Vec<Perm>,
    pub inv_gen_perms: Vec<Perm>,
}

impl FiniteQuotient {
    pub fn num_generators(&self) -> usize {
        self.gen_perms.len()
    }

    /// Permutation of the element set induced by a word, acting on the right:
    /// position `s` moves to `s * w`.
    pub fn word_perm(&self, w: &Word) -> Perm {
        let m = self.index as usize;
        let mut images = Vec::with_capacity(m);
        for s in 0..m {
            let mut t = s;
            for &l in w.letters() {
                let idx = (l.unsigned_abs() - 1) as usize;
                t = if l > 0 {
                    self.gen_perms[idx].apply(t)
                } else {
                    self.inv_gen_perms[idx].apply(t)
                };
            }
            images.push(t as u32);
        }
        Perm::from_images(images)
    }
}

/// Breadth-first closure of the generator images and their inverses mod
/// `p^level`, producing the quotient with its permutation action.
pub fn enumerate_quotient(
    pres: &GroupPresentation,
    rep: &PadicRep,
    level: u32,
    budgets: &Budgets,
) -> Result<FiniteQuotient, FpGroupError> {
    if level > rep.max_level {
        return Err(FpGroupError::LevelTooDeep {
            level,
            max_level: rep.max_level,
        });
    }
    let n = rep.n;
    if level == 0 {
        // Trivial cover by convention.
        let g = pres.num_generators();
        return Ok(FiniteQuotient {
            level: 0,
            index: 1,
            elements: vec![mat_identity(n)],
            identity_idx: 0,
            gen_perms: vec![Perm::identity(1); g],
            inv_gen_perms: vec![Perm::identity(1); g],
        });
    }
    let q = modulus(rep.p, level)?;
    let (imgs, invs) = rep.images_mod(level)?;
    let id = mat_identity(n);
    let mut elements: Vec<MatZq> = vec![id.clone()];
    let mut lookup: HashMap<MatZq, usize> = HashMap::new();
    lookup.insert(id, 0);
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let cur = elements[frontier].clone();
        for m in imgs.iter().chain(invs.iter()) {
            let next = mat_mul(&cur, m, n, q);
            if !lookup.contains_key(&next) {
                if elements.len() >= budgets.element_cap {
                    return Err(FpGroupError::ElementCapExceeded {
                        level,
                        cap: budgets.element_cap,
                    });
                }
                lookup.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        frontier += 1;
    }
    let index = elements.len() as u64;
    let mut gen_perms = Vec::with_capacity(imgs.len());
    let mut inv_gen_perms = Vec::with_capacity(imgs.len());
    for (img, inv) in imgs.iter().zip(&invs) {
        let fwd = Perm::from_images(
            elements
                .iter()
                .map(|e| lookup[&mat_mul(e, img, n, q)] as u32)
                .collect(),
        );
        let bwd = Perm::from_images(
            elements
                .iter()
                .map(|e| lookup[&mat_mul(e, inv, n, q)] as u32)
                .collect(),
        );
        debug_assert!(fwd.then(&bwd).is_identity());
        gen_perms.push(fwd);
        inv_gen_perms.push(bwd);
    }
    let quotient = FiniteQuotient {
        level,
        index,
        elements,
        identity_idx: 0,
        gen_perms,
        inv_gen_perms,
    };
    for r in &pres.relators {
        if !quotient.word_perm(r).is_identity() {
            return Err(FpGroupError::NotHomomorphism {
                relator: r.to_string(),
                level,
            });
        }
    }
    Ok(quotient)
}

/// See [`FiniteQuotient::word_perm`]; free function form.
pub fn word_to_perm(q: &FiniteQuotient, w: &Word) -> Perm {
    q.word_perm(w)
}

/// Estimated dimension of the analytic group from observed index growth.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimEstimate {
    /// `(level_lo, log_p(index ratio))` per consecutive-level pair.
    pub per_step: Vec<(u32, f64)>,
    /// Deepest per-step estimate.
    pub d_hat: f64,
    /// Set when the deepest index ratio is an exact power of `p`.
    pub d_hat_exact: Option<u32>,
    /// Last two per-step estimates agree.
    pub stable: bool,
}

/// Estimate `d` from `[Γ:Γ_i] ~ C p^{id}`: consecutive indices give
/// `log_p(index_{i+1}/index_i) -> d`.
pub fn estimate_dim(indices: &[(u32, u64)], p: u64) -> Result<DimEstimate, FpGroupError> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    let mut per_step = Vec::new();
    let mut exact = None;
    for pair in sorted.windows(2) {
        let ((l0, i0), (l1, i1)) = (pair[0], pair[1]);
        if l1 != l0 + 1 || i1 <= i0 {
            continue;
        }
        let step = (i1 as f64 / i0 as f64).ln() / (p as f64).ln();
        // exact p-power detection
        exact = None;
        if i1 % i0 == 0 {
            let mut ratio = i1 / i0;
            let mut k = 0u32;
            while ratio % p == 0 {
                ratio /= p;
                k += 1;
            }
            if ratio == 1 {
                exact = Some(k);
            }
        }
        per_step.push((l0, step));
    }
    if per_step.is_empty() {
        return Err(FpGroupError::InsufficientLevels);
    }
    let d_hat = per_step.last().unwrap().1;
    let stable = per_step.len() >= 2 && {
        let a = per_step[per_step.len() - 2].1;
        (a - d_hat).abs() < 1e-9
    };
    Ok(DimEstimate {
        per_step,
        d_hat,
        d_hat_exact: exact,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_rep(p: u64, max_level: u32) -> (GroupPresentation, PadicRep) {
        let pres = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
        let rep = PadicRep {
            p,
            n: 2,
            images: vec![vec![vec![1, 1], vec![0, 1]]],
            max_level,
        };
        (pres, rep)
    }

    /// Independent oracle: literal BFS closure of 2x2 matrices mod q under
    /// multiplication by [[1,1],[0,1]] and its inverse [[1,q-1],[0,1]].
    fn brute_force_unipotent_closure(q: u64) -> u64 {
        let mul = |a: [u64; 4], b: [u64; 4]| {
            [
                (a[0] * b[0] + a[1] * b[2]) % q,
                (a[0] * b[1] + a[1] * b[3]) % q,
                (a[2] * b[0] + a[3] * b[2]) % q,
                (a[2] * b[1] + a[3] * b[3]) % q,
            ]
        };
        let gens = [[1, 1, 0, 1], [1, q - 1, 0, 1]];
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![[1u64, 0, 0, 1]];
        seen.insert(queue[0]);
        while let Some(cur) = queue.pop() {
            for g in gens {
                let next = mul(cur, g);
                if seen.insert(next) {
                    queue.push(next);
                }
            }
        }
        seen.len() as u64
    }

    #[test]
    fn circle_tower_level_three() {
        let (pres, rep) = z_rep(2, 5);
        rep.validate(&pres).unwrap();
        let q = enumerate_quotient(&pres, &rep, 3, &Budgets::default()).unwrap();
        assert_eq!(q.index, brute_force_unipotent_closure(8));
        assert_eq!(q.index, 8);
        // generator acts as a single 8-cycle
        assert_eq!(q.gen_perms[0].cycle_lengths(), vec![8]);
    }

    #[test]
    fn level_zero_is_trivial() {
        let (pres, rep) = z_rep(3, 4);
        let q = enumerate_quotient(&pres, &rep, 0, &Budgets::default()).unwrap();
        assert_eq!(q.index, 1);
        assert!(q.gen_perms[0].is_identity());
    }

    #[test]
    fn z2_block_unipotent_level_two_mod_three() {
        // Z^2 with commuting unipotent blocks inside GL_4, p = 3, level 2:
        // product of two cyclic closures mod 9 gives index 81.
        let pres = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::new([1, 2, -1, -2])],
        )
        .unwrap();
        let rep = PadicRep {
            p: 3,
            n: 4,
            images: vec![
                vec![
                    vec![1, 1, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 1],
                    vec![0, 0, 0, 1],
                ],
            ],
            max_level: 2,
        };
        rep.validate(&pres).unwrap();
        let q = enumerate_quotient(&pres, &rep, 2, &Budgets::default()).unwrap();
        assert_eq!(q.index, 81);
    }

    #[test]
    fn word_perm_examples() {
        let (pres, rep) = z_rep(2, 3);
        let q = enumerate_quotient(&pres, &rep, 2, &Budgets::default()).unwrap();
        assert!(q.word_perm(&Word::empty()).is_identity());
        assert!(q.word_perm(&Word::new([1, -1])).is_identity());
        let sq = q.word_perm(&Word::new([1, 1]));
        assert_eq!(sq, q.gen_perms[0].then(&q.gen_perms[0]));
        assert_eq!(sq.cycle_lengths(), vec![2, 2]);
        assert_eq!(word_to_perm(&q, &Word::new([1, 1])), sq);
    }

    #[test]
    fn relator_failure_is_reported() {
        // force a bogus relator: a^1 is not trivial in the image
        let pres = GroupPresentation::new(vec!["a".into()], vec![Word::new([1])]).unwrap();
        let rep = PadicRep {
            p: 2,
            n: 2,
            images: vec![vec![vec![1, 1], vec![0, 1]]],
            max_level: 2,
        };
        assert!(matches!(
            rep.validate(&pres),
            Err(FpGroupError::NotHomomorphism { .. })
        ));
        assert!(matches!(
            enumerate_quotient(&pres, &rep, 2, &Budgets::default()),
            Err(FpGroupError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn element_cap_guards_enumeration() {
        let (pres, rep) = z_rep(2, 5);
        let budgets = Budgets {
            element_cap: 7,
            ..Budgets::default()
        };
        assert!(matches!(
            enumerate_quotient(&pres, &rep, 3, &budgets),
            Err(FpGroupError::ElementCapExceeded { .. })
        ));
    }

    #[test]
    fn estimate_dim_examples() {
        let est = estimate_dim(&[(1, 2), (2, 4), (3, 8)], 2).unwrap();
        assert_eq!(est.d_hat, 1.0);
        assert_eq!(est.d_hat_exact, Some(1));
        assert!(est.stable);

        let est = estimate_dim(&[(1, 9), (2, 81)], 3).unwrap();
        assert_eq!(est.d_hat, 2.0);
        assert_eq!(est.d_hat_exact, Some(2));

        assert!(matches!(
            estimate_dim(&[(1, 5)], 2),
            Err(FpGroupError::InsufficientLevels)
        ));
    }

    #[test]
    fn heisenberg_dimension_three() {
        let pres = GroupPresentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                Word::new([1, 2, -1, -2, -3]),
                Word::new([1, 3, -1, -3]),
                Word::new([2, 3, -2, -3]),
            ],
        )
        .unwrap();
        let rep = PadicRep {
            p: 2,
            n: 3,
            images: vec![
                vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]],
                vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]],
            ],
            max_level: 3,
        };
        rep.validate(&pres).unwrap();
        let q2 = enumerate_quotient(&pres, &rep, 2, &Budgets::default()).unwrap();
        let q3 = enumerate_quotient(&pres, &rep, 3, &Budgets::default()).unwrap();
        assert_eq!(q2.index, 64);
        assert_eq!(q3.index, 512);
        let est = estimate_dim(&[(2, q2.index), (3, q3.index)], 2).unwrap();
        assert_eq!(est.d_hat_exact, Some(3));
    }

    #[test]
    fn index_divides_deeper_index_and_reduction_is_onto() {
        let (pres, rep) = z_rep(2, 4);
        let quotients: Vec<_> = (1..=4)
            .map(|l| enumerate_quotient(&pres, &rep, l, &Budgets::default()).unwrap())
            .collect();
        for w in quotients.windows(2) {
            assert_eq!(w[1].index % w[0].index, 0);
            let ratio = w[1].index / w[0].index;
            // kernel of GL_n(Z/p^{i+1}) -> GL_n(Z/p^i) is a p-group
            let mut r = ratio;
            while r % 2 == 0 {
                r /= 2;
            }
            assert_eq!(r, 1);
            // reduction maps the deeper element set onto the shallower one
            let q_shallow = modulus(2, w[0].level).unwrap();
            let mut seen = std::collections::HashSet::new();
            for e in &w[1].elements {
                seen.insert(e.iter().map(|&x| x % q_shallow).collect::<Vec<_>>());
            }
            for e in &w[0].elements {
                assert!(seen.contains(e));
            }
        }
    }
}
