//! Rational rank of integer matrices.
//!
//! Rank mod a prime never exceeds the rational rank, so the maximum over
//! several independent random primes is a high-confidence lower bound that
//! equals the true rank unless every sampled prime divides the same nonzero
//! maximal minor. Bareiss elimination stays exact over the integers and is
//! used both as the deterministic path for small matrices and to confirm a
//! sampled pivot submatrix of the modular answer.

use super::dense::IntMatrix;
use super::field::PrimeField;
use crate::config::subseed;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Deterministic Miller-Rabin, valid for all `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let f = PrimeField::new(n);
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = f.mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime in `[2^61, 2^62)`.
pub fn random_prime_62(rng: &mut impl Rng) -> u64 {
    loop {
        let candidate = rng.gen_range(1u64 << 61..1u64 << 62) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Fraction-free (Bareiss) row echelon rank, exact over `Z`.
pub(super) fn bareiss_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let (nr, nc) = (m.rows, m.cols);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..nc {
        let Some(pivot) = (rank..nr).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in (rank + 1)..nr {
            for c in (col + 1)..nc {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Exact determinant of a square integer matrix by Bareiss elimination.
pub(super) fn bareiss_det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| (0..n).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1i64;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, pivot);
            sign = -sign;
        }
        for r in (k + 1)..n {
            for c in (k + 1)..n {
                let v = (&a[k][k] * &a[r][c] - &a[r][k] * &a[k][c]) / &prev;
                a[r][c] = v;
            }
            a[r][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Rank mod a prime after permuting rows and columns, recording the pivot
/// positions in the original index space and in elimination order.
fn rank_mod_with_pivots(
    m: &IntMatrix,
    p: u64,
    row_order: &[usize],
    col_order: &[usize],
) -> (usize, Vec<usize>, Vec<usize>) {
    let field = PrimeField::new(p);
    let mut rows: Vec<(usize, Vec<u64>)> = row_order
        .iter()
        .map(|&r| {
            (
                r,
                col_order
                    .iter()
                    .map(|&c| m.get(r, c).rem_euclid(p as i64) as u64)
                    .collect(),
            )
        })
        .collect();
    let nc = col_order.len();
    let mut rank = 0;
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    for col in 0..nc {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].1[col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        pivot_rows.push(rows[rank].0);
        pivot_cols.push(col_order[col]);
        let inv = field.powmod(rows[rank].1[col], p - 2);
        for r in (rank + 1)..rows.len() {
            if rows[r].1[col] == 0 {
                continue;
            }
            let f = field.mulmod(rows[r].1[col], inv);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank].1;
            let trow = &mut tail[r - rank - 1].1;
            for c in col..nc {
                let sub = field.mulmod(f, prow[c]);
                trow[c] = if trow[c] >= sub {
                    trow[c] - sub
                } else {
                    trow[c] + p - sub
                };
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    (rank, pivot_rows, pivot_cols)
}

pub(super) fn rank_q(m: &IntMatrix, seed: u64, bareiss_threshold: usize) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.rows.max(m.cols) <= bareiss_threshold {
        return bareiss_rank(m);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(subseed(seed, "rank_q", 0));
    let shuffle = |rng: &mut ChaCha12Rng, n: usize| {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            v.swap(i, rng.gen_range(0..=i));
        }
        v
    };
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    let mut agreement = 0;
    // Draw primes until two report the same maximal rank (rank mod p is a
    // lower bound for the rational rank, so agreement at the max certifies
    // with overwhelming probability). Each elimination runs on freshly
    // shuffled rows and columns so the recorded pivots are a random sample.
    for attempt in 0..16 {
        let p = random_prime_62(&mut rng);
        let (row_order, col_order) = if attempt == 0 {
            ((0..m.rows).collect(), (0..m.cols).collect())
        } else {
            (shuffle(&mut rng, m.rows), shuffle(&mut rng, m.cols))
        };
        let (r, prows, pcols) = rank_mod_with_pivots(m, p, &row_order, &col_order);
        match &best {
            Some((rb, _, _)) if r < *rb => {}
            Some((rb, _, _)) if r == *rb => {
                agreement += 1;
                best = Some((r, prows, pcols));
            }
            _ => {
                best = Some((r, prows, pcols));
                agreement = 1;
            }
        }
        if agreement >= 2 {
            break;
        }
    }
    let (rank, prows, pcols) = best.expect("at least one modular rank");
    // Fraction-free confirmation: a prefix of the pivots in elimination
    // order spans an upper-triangular (hence nonsingular) submatrix mod p,
    // so its integer determinant must be nonzero. A zero here means a
    // kernel bug, not bad luck.
    let sample = rank.min(12);
    if sample > 0 {
        let sub = m.select(&prows[..sample], &pcols[..sample]);
        assert!(
            !bareiss_det(&sub).is_zero(),
            "modular pivots not independent over Q"
        );
    }
    rank
}

/// Test-support: minor enumeration oracle for the SNF divisibility property.
#[cfg(test)]
pub(crate) fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    use num_traits::Signed;
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(cur.clone());
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for rsel in combos(m.rows, k) {
        for csel in combos(m.cols, k) {
            let d = bareiss_det(&m.select(&rsel, &csel));
            g = g.gcd(&d);
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_sanity() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7? composite
        assert!(!is_prime_u64((1 << 62) - 1));
    }

    #[test]
    fn random_primes_are_prime_and_62_bit() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..5 {
            let p = random_prime_62(&mut rng);
            assert!(p >= 1 << 61 && p < 1 << 62);
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn bareiss_rank_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 0]]);
        assert_eq!(bareiss_rank(&m), 2);
        // [p; 0] has rank 1 over Q even though it dies mod p
        let m = IntMatrix::from_rows(&[vec![5], vec![0]]);
        assert_eq!(bareiss_rank(&m), 1);
        assert_eq!(super::super::rank_fp(&m.reduce_mod(5)), 0);
    }

    #[test]
    fn modular_consensus_matches_bareiss() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for trial in 0..50 {
            let rows = 1 + (trial % 7);
            let cols = 1 + (trial % 5);
            let m = IntMatrix::from_rows(
                &(0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-6i64..=6)).collect())
                    .collect::<Vec<_>>(),
            );
            // force the consensus path with threshold 0
            assert_eq!(rank_q(&m, 99 + trial as u64, 0), bareiss_rank(&m));
        }
    }

    #[test]
    fn cycle_matrix_rank_over_q() {
        let m = 17;
        let mut rows = vec![vec![0i64; m]; m];
        for s in 0..m {
            rows[s][(s + 1) % m] += 1;
            rows[s][s] -= 1;
        }
        let im = IntMatrix::from_rows(&rows);
        assert_eq!(rank_q(&im, 1, 24), m - 1);
        assert_eq!(rank_q(&im, 1, 0), m - 1);
    }
}
