//! Dense matrices over prime fields and the integers, with echelon ranks.

use super::field::FieldOps;

/// Row-major dense matrix over `F_p`, entries reduced to `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        PrimeFieldMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.p);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u64) {
        let e = &mut self.data[r * self.cols + c];
        *e = (*e + v) % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn into_rows(self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.cols.max(1))
            .map(|c| c.to_vec())
            .take(self.rows)
            .collect()
    }
}

/// Montgomery arithmetic modulo an odd prime; keeps the elimination inner
/// loop free of 128-bit division.
struct Montgomery {
    p: u64,
    p_inv_neg: u64, // -p^{-1} mod 2^64
    r2: u64,        // 2^128 mod p
}

impl Montgomery {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1);
        // Newton iteration for the inverse of p mod 2^64.
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % p as u128;
        let r2 = (r * r % p as u128) as u64;
        Montgomery {
            p,
            p_inv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_inv_neg);
        let t2 = (t + m as u128 * self.p as u128) >> 64;
        let t2 = t2 as u64;
        if t2 >= self.p {
            t2 - self.p
        } else {
            t2
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    fn pow(&self, a_mont: u64, mut e: u64) -> u64 {
        let mut base = a_mont;
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Rank over `F_p` for odd `p` by row echelon on a copy. Representation is
/// switched to the Montgomery domain once; zero tests are unaffected.
pub(super) fn rank_mod_p(m: &PrimeFieldMatrix) -> usize {
    let p = m.p;
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mont = Montgomery::new(p);
    let mut rows: Vec<Vec<u64>> = m
        .clone()
        .into_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|v| mont.to_mont(v)).collect())
        .collect();
    let (nr, nc) = (rows.len(), m.cols);
    let mut rank = 0;
    for col in 0..nc {
        let Some(pivot) = (rank..nr).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        // scale factor: inv(pivot) in Montgomery domain
        let inv = mont.pow(rows[rank][col], p - 2);
        for r in (rank + 1)..nr {
            let lead = rows[r][col];
            if lead == 0 {
                continue;
            }
            let f = mont.mul(lead, inv);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            let trow = &mut tail[r - rank - 1];
            for c in col..nc {
                let sub = mont.mul(f, prow[c]);
                trow[c] = if trow[c] >= sub {
                    trow[c] - sub
                } else {
                    trow[c] + p - sub
                };
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Generic echelon rank over any field context. Used for extension fields
/// and as the plain-field fallback; consumes a copy of the rows.
pub fn rank_dense<F: FieldOps>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..nc {
        let Some(pivot) = (rank..nr).find(|&r| !field.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(&rows[rank][col]);
        for r in (rank + 1)..nr {
            if field.is_zero(&rows[r][col]) {
                continue;
            }
            let f = field.mul(&rows[r][col], &inv);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            let trow = &mut tail[r - rank - 1];
            for c in col..nc {
                let sub = field.mul(&f, &prow[c]);
                trow[c] = field.sub(&trow[c], &sub);
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Dense integer matrix with `i64` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn reduce_mod(&self, p: u64) -> PrimeFieldMatrix {
        let mut out = PrimeFieldMatrix::zero(p, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).rem_euclid(p as i64) as u64);
            }
        }
        out
    }

    /// Submatrix by explicit row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }
}
