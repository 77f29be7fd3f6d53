//! Smith normal form of small integer matrices.

use super::dense::IntMatrix;
use super::ExactlaError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero invariant factors `d_1 | d_2 | ...` of the matrix, all positive.
/// The zero matrix yields an empty list.
pub fn snf(m: &IntMatrix, dim_cap: usize) -> Result<Vec<BigInt>, ExactlaError> {
    if m.rows.max(m.cols) > dim_cap {
        return Err(ExactlaError::BudgetExceeded(format!(
            "snf on {}x{} exceeds cap {}",
            m.rows, m.cols, dim_cap
        )));
    }
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let mut factors = diagonalize(&mut a, 0);
    // enforce the divisibility chain
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..factors.len().saturating_sub(1) {
            let (d1, d2) = (factors[i].clone(), factors[i + 1].clone());
            if (&d2 % &d1).is_zero() {
                continue;
            }
            let g = d1.gcd(&d2);
            let l = &d1 * &d2 / &g;
            factors[i] = g;
            factors[i + 1] = l;
            changed = true;
        }
    }
    Ok(factors)
}

fn diagonalize(a: &mut Vec<Vec<BigInt>>, start: usize) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut k = start;
    while k < nr.min(nc) {
        // smallest nonzero entry in the trailing block to the pivot position
        let mut best: Option<(usize, usize)> = None;
        for r in k..nr {
            for c in k..nc {
                if !a[r][c].is_zero()
                    && best
                        .map(|(br, bc)| a[r][c].abs() < a[br][bc].abs())
                        .unwrap_or(true)
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(k, br);
        for row in a.iter_mut() {
            row.swap(k, bc);
        }
        loop {
            // clear the pivot column by euclidean steps
            let mut dirty = false;
            for r in k + 1..nr {
                if a[r][k].is_zero() {
                    continue;
                }
                let q = div_round(&a[r][k], &a[k][k]);
                for c in k..nc {
                    let t = &a[k][c] * &q;
                    a[r][c] -= t;
                }
                if !a[r][k].is_zero() {
                    // remainder smaller than pivot: swap up and restart
                    a.swap(k, r);
                    dirty = true;
                }
            }
            for c in k + 1..nc {
                if a[k][c].is_zero() {
                    continue;
                }
                let q = div_round(&a[k][c], &a[k][k]);
                for row in a.iter_mut().skip(k) {
                    let t = &row[k] * &q;
                    row[c] -= t;
                }
                if !a[k][c].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(k, c);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // pivot must divide every remaining entry; if not, fold the offending
        // row into the pivot row and repeat
        let mut offender = None;
        'scan: for r in k + 1..nr {
            for c in k + 1..nc {
                if !(&a[r][c] % &a[k][k]).is_zero() {
                    offender = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = offender {
            for c in k..nc {
                let t = a[r][c].clone();
                a[k][c] += t;
            }
            continue;
        }
        out.push(a[k][k].abs());
        k += 1;
    }
    out
}

/// Quotient rounding toward the nearest integer keeps remainders small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
