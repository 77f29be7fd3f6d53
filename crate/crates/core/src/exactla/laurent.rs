//! Matrices of multivariate Laurent polynomials and their rank over the
//! fraction field `F_p(t_1, .., t_d)`.
//!
//! Monomials are units, so scaling each row by the componentwise minimum
//! exponent clears denominators without changing the rank. After that a
//! random evaluation point in `F_{p^e}` can only lose rank, never gain it:
//! the returned value is a lower bound that equals the true rank with
//! probability `1 - (deg / p^e)^trials` by Schwartz–Zippel applied to a
//! maximal nonvanishing minor.

use super::dense::rank_dense;
use super::field::{ExtField, FieldOps};
use super::ExactlaError;
use crate::config::subseed;
use crate::poly::MultiPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Matrix with Laurent-polynomial entries and integer coefficients.
/// Coefficients are reduced mod `p` at rank time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    pub num_vars: usize,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<MultiPoly<i64>>,
}

/// Knobs for the randomized rank kernel.
#[derive(Clone, Debug)]
pub struct LaurentRankParams {
    /// Number of independent evaluation points; failure probability is at
    /// most `4^-trials` under the degree bound enforced below.
    pub trials: u32,
    /// Extension degree; `None` picks the smallest degree satisfying the
    /// Schwartz–Zippel margin `p^e > 4 * deg * max(rows, cols)`.
    pub ext_degree: Option<u32>,
    pub seed: u64,
}

impl Default for LaurentRankParams {
    fn default() -> Self {
        LaurentRankParams {
            trials: 16,
            ext_degree: None,
            seed: crate::config::DEFAULT_SEED,
        }
    }
}

impl LaurentMatrix {
    pub fn zero(num_vars: usize, rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            num_vars,
            rows,
            cols,
            entries: vec![MultiPoly::zero(num_vars); rows * cols],
        }
    }

    pub fn from_entries(num_vars: usize, rows: usize, cols: usize, entries: Vec<MultiPoly<i64>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(entries.iter().all(|e| e.nvars() == num_vars));
        LaurentMatrix {
            num_vars,
            rows,
            cols,
            entries,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly<i64> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MultiPoly<i64>) {
        assert_eq!(v.nvars(), self.num_vars);
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Shift each row by the componentwise minimum exponent so every entry
    /// becomes an honest polynomial; rank is unchanged (units).
    fn cleared_rows(&self) -> Vec<Vec<MultiPoly<i64>>> {
        (0..self.rows)
            .map(|r| {
                let mut min = vec![0i32; self.num_vars];
                for c in 0..self.cols {
                    for (j, &e) in self.get(r, c).min_exponents().iter().enumerate() {
                        min[j] = min[j].min(e);
                    }
                }
                (0..self.cols)
                    .map(|c| {
                        let mut shifted = MultiPoly::zero(self.num_vars);
                        for (e, &coef) in self.get(r, c).terms() {
                            let ne: Vec<i32> = e.iter().zip(&min).map(|(a, m)| a - m).collect();
                            shifted.add_term(coef, ne);
                        }
                        shifted
                    })
                    .collect()
            })
            .collect()
    }

    fn degree_bound(rows: &[Vec<MultiPoly<i64>>]) -> i64 {
        rows.iter()
            .flat_map(|r| r.iter().map(|p| p.max_total_degree()))
            .max()
            .unwrap_or(0)
    }

    /// Randomized rank over `F_p(t_1..t_d)`; never exceeds the true rank and
    /// is monotone nondecreasing in `trials` for a fixed seed.
    pub fn rank(&self, p: u64, params: &LaurentRankParams) -> Result<usize, ExactlaError> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0);
        }
        let rows = self.cleared_rows();
        let deg = Self::degree_bound(&rows);
        check_degree_cap(deg)?;
        let need = 4u128
            .saturating_mul(deg.max(1) as u128)
            .saturating_mul(self.rows.max(self.cols) as u128);
        let e = match params.ext_degree {
            Some(e) => {
                let got = (p as u128).saturating_pow(e);
                if got <= need {
                    return Err(ExactlaError::FieldTooSmall { need, got });
                }
                e as usize
            }
            None => {
                let mut e = 1usize;
                while (p as u128).saturating_pow(e as u32) <= need {
                    e += 1;
                }
                e
            }
        };
        let field = ExtField::new(p, e, subseed(params.seed, "laurent-modulus", 0));
        let mut best = 0;
        for trial in 0..params.trials {
            let mut rng =
                ChaCha12Rng::seed_from_u64(subseed(params.seed, "laurent-point", trial as u64));
            let point: Vec<Vec<u64>> = (0..self.num_vars)
                .map(|_| field.random_elem(&mut rng))
                .collect();
            let evaluated = evaluate_rows(&rows, &field, &point);
            best = best.max(rank_dense(&field, evaluated));
            if best == self.rows.min(self.cols) {
                break; // cannot do better
            }
        }
        Ok(best)
    }

    /// Deterministic exact rank for one variable: a maximal nonvanishing
    /// minor has degree at most `deg * min(rows, cols)`, so evaluating at
    /// more points than that and taking the maximum is exact.
    pub fn rank_exact_univariate(&self, p: u64, seed: u64) -> Result<usize, ExactlaError> {
        assert_eq!(self.num_vars, 1, "exact path is univariate only");
        if self.rows == 0 || self.cols == 0 {
            return Ok(0);
        }
        let rows = self.cleared_rows();
        let deg = Self::degree_bound(&rows);
        check_degree_cap(deg)?;
        let points = deg as u128 * self.rows.min(self.cols) as u128 + 1;
        let mut e = 1usize;
        while (p as u128).saturating_pow(e as u32) < points {
            e += 1;
        }
        let field = ExtField::new(p, e, subseed(seed, "laurent-modulus", 0));
        let mut best = 0;
        for idx in 0..points {
            let point = vec![field.element_by_index(idx)];
            let evaluated = evaluate_rows(&rows, &field, &point);
            best = best.max(rank_dense(&field, evaluated));
            if best == self.rows.min(self.cols) {
                break;
            }
        }
        Ok(best)
    }
}

/// Runaway entry degrees make both the field sizing and the deterministic
/// point enumeration explode; cap them as a budget.
fn check_degree_cap(deg: i64) -> Result<(), ExactlaError> {
    const DEGREE_CAP: i64 = 4096;
    if deg > DEGREE_CAP {
        return Err(ExactlaError::BudgetExceeded(format!(
            "Laurent entry degree {deg} exceeds cap {DEGREE_CAP}"
        )));
    }
    Ok(())
}

fn evaluate_rows(
    rows: &[Vec<MultiPoly<i64>>],
    field: &ExtField,
    point: &[Vec<u64>],
) -> Vec<Vec<Vec<u64>>> {
    // Power tables per variable up to the max exponent present.
    let nvars = point.len();
    let mut max_exp = vec![0i32; nvars];
    for row in rows {
        for poly in row {
            for (e, _) in poly.terms() {
                for (j, &x) in e.iter().enumerate() {
                    max_exp[j] = max_exp[j].max(x);
                }
            }
        }
    }
    let tables: Vec<Vec<Vec<u64>>> = (0..nvars)
        .map(|j| {
            let mut t = Vec::with_capacity(max_exp[j] as usize + 1);
            t.push(field.one());
            for k in 1..=max_exp[j] as usize {
                let prev = t[k - 1].clone();
                t.push(field.mul(&prev, &point[j]));
            }
            t
        })
        .collect();
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|poly| {
                    let mut acc = field.zero();
                    for (e, &coef) in poly.terms() {
                        let mut term = field.from_i64(coef);
                        for (j, &x) in e.iter().enumerate() {
                            debug_assert!(x >= 0);
                            term = field.mul(&term, &tables[j][x as usize]);
                        }
                        acc = field.add(&acc, &term);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, terms: &[(i64, Vec<i32>)]) -> MultiPoly<i64> {
        MultiPoly::from_terms(nvars, terms.iter().cloned())
    }

    #[test]
    fn nonzero_one_by_one() {
        // [t - 1] over F_2 has rank 1
        let m = LaurentMatrix::from_entries(
            1,
            1,
            1,
            vec![poly(1, &[(1, vec![1]), (-1, vec![0])])],
        );
        assert_eq!(m.rank(2, &LaurentRankParams::default()).unwrap(), 1);
        assert_eq!(m.rank_exact_univariate(2, 7).unwrap(), 1);
    }

    #[test]
    fn zero_one_by_one() {
        let m = LaurentMatrix::zero(1, 1, 1);
        assert_eq!(m.rank(5, &LaurentRankParams::default()).unwrap(), 0);
    }

    #[test]
    fn hopf_row_rank_one() {
        // [1 - t2, t1 - 1] nonzero mod every p
        for p in [2u64, 3, 5, 7] {
            let m = LaurentMatrix::from_entries(
                2,
                1,
                2,
                vec![
                    poly(2, &[(1, vec![0, 0]), (-1, vec![0, 1])]),
                    poly(2, &[(1, vec![1, 0]), (-1, vec![0, 0])]),
                ],
            );
            assert_eq!(m.rank(p, &LaurentRankParams::default()).unwrap(), 1);
        }
    }

    #[test]
    fn laurent_exponents_are_units() {
        // diag(t^-3, t^5) has rank 2; negative exponents must not matter
        let mut m = LaurentMatrix::zero(1, 2, 2);
        m.set(0, 0, poly(1, &[(1, vec![-3])]));
        m.set(1, 1, poly(1, &[(1, vec![5])]));
        assert_eq!(m.rank(3, &LaurentRankParams::default()).unwrap(), 2);
        assert_eq!(m.rank_exact_univariate(3, 0).unwrap(), 2);
    }

    #[test]
    fn field_too_small_is_reported() {
        let m = LaurentMatrix::from_entries(1, 1, 1, vec![poly(1, &[(1, vec![9])])]);
        let params = LaurentRankParams {
            trials: 2,
            ext_degree: Some(1),
            seed: 0,
        };
        match m.rank(2, &params) {
            Err(ExactlaError::FieldTooSmall { .. }) => {}
            other => panic!("expected FieldTooSmall, got {:?}", other),
        }
    }

    #[test]
    fn rank_monotone_in_trials() {
        // a matrix whose entries vanish at many points
        let mut m = LaurentMatrix::zero(2, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                m.set(
                    i,
                    j,
                    poly(
                        2,
                        &[(1, vec![i as i32 + 1, j as i32]), (-1, vec![0, 0])],
                    ),
                );
            }
        }
        let mut prev = 0;
        for t in 1..=8 {
            let params = LaurentRankParams {
                trials: t,
                ext_degree: None,
                seed: 99,
            };
            let r = m.rank(3, &params).unwrap();
            assert!(r >= prev, "rank must be monotone in trials");
            prev = r;
        }
    }
}
