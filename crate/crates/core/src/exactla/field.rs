//! Field abstractions for the elimination kernels.
//!
//! Fields here are runtime contexts (a modulus, an irreducible polynomial)
//! rather than marker types, so one monomorphized elimination routine serves
//! every prime and every extension degree.

use std::fmt;

/// Operations a field context must provide. Element types are plain data;
/// all arithmetic goes through the context.
pub trait FieldOps {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
}

/// The prime field `F_p` with `u64` elements in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        PrimeField { p }
    }

    #[inline]
    pub fn mulmod(&self, a: u64, b: u64) -> u64 {
        if self.p <= (1 << 31) {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn powmod(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        // p prime: a^(p-2)
        self.powmod(*a, self.p - 2)
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
}

/// The extension field `F_{p^e} = F_p[x]/(f)` for a monic irreducible `f`.
/// Elements are little-endian coefficient vectors of length `e`.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: PrimeField,
    /// Degree of the extension.
    pub e: usize,
    /// Monic modulus, length `e + 1`, leading coefficient 1.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Construct `F_{p^e}` by searching for a monic irreducible polynomial of
    /// degree `e`. The search is deterministic given `seed`.
    pub fn new(p: u64, e: usize, seed: u64) -> Self {
        assert!(e >= 1);
        let base = PrimeField::new(p);
        if e == 1 {
            return ExtField {
                base,
                e,
                modulus: vec![0, 1],
            };
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        loop {
            let mut f: Vec<u64> = (0..e).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if poly_is_irreducible(&base, &f) {
                return ExtField { base, e, modulus: f };
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn order(&self) -> u128 {
        (self.base.p as u128).pow(self.e as u32)
    }

    pub fn from_base(&self, v: u64) -> Vec<u64> {
        let mut out = vec![0; self.e];
        out[0] = v % self.base.p;
        out
    }

    /// The `idx`-th field element in the base-`p` counting order. Used by the
    /// deterministic univariate rank path to enumerate evaluation points.
    pub fn element_by_index(&self, mut idx: u128) -> Vec<u64> {
        let mut out = vec![0; self.e];
        for slot in out.iter_mut() {
            *slot = (idx % self.base.p as u128) as u64;
            idx /= self.base.p as u128;
        }
        out
    }

    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.e).map(|_| rng.gen_range(0..self.base.p)).collect()
    }

    pub fn pow(&self, a: &Vec<u64>, mut n: u128) -> Vec<u64> {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn reduce(&self, mut c: Vec<u64>) -> Vec<u64> {
        // c has length up to 2e - 1; fold down by the monic modulus.
        let p = &self.base;
        while c.len() > self.e {
            let top = c.pop().unwrap();
            if top != 0 {
                let shift = c.len() - self.e;
                for j in 0..self.e {
                    let t = p.mulmod(top, self.modulus[j]);
                    c[shift + j] = p.sub(&c[shift + j], &t);
                }
            }
        }
        c.resize(self.e, 0);
        c
    }
}

impl FieldOps for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.e]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.e];
        v[0] = 1 % self.base.p;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.base.add(x, y))
            .collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.base.sub(x, y))
            .collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut conv = vec![0u64; 2 * self.e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                conv[i + j] = self.base.add(&conv[i + j], &self.base.mulmod(x, y));
            }
        }
        self.reduce(conv)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        debug_assert!(!self.is_zero(a));
        // a^(p^e - 2)
        self.pow(a, self.order() - 2)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.from_base(self.base.reduce_i64(v))
    }
}

// --- dense F_p[x] helpers for the irreducibility test ---

fn poly_trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_rem(base: &PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = base.inv(&m[dm]);
    while r.len() > dm {
        let c = base.mulmod(*r.last().unwrap(), lead_inv);
        let shift = r.len() - 1 - dm;
        for j in 0..=dm {
            let t = base.mulmod(c, m[j]);
            r[shift + j] = base.sub(&r[shift + j], &t);
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(base: &PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut conv = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] = base.add(&conv[i + j], &base.mulmod(x, y));
        }
    }
    poly_rem(base, &conv, m)
}

fn poly_gcd(base: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(base, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Frobenius powers `x^{p^k} mod f`.
fn poly_xpow_p_tower(base: &PrimeField, f: &[u64], k: usize) -> Vec<u64> {
    let mut x = vec![0, 1]; // x
    for _ in 0..k {
        // raise to p-th power by square-and-multiply on the exponent p
        let mut acc = vec![1u64];
        let mut sq = x.clone();
        let mut e = base.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(base, &acc, &sq, f);
            }
            sq = poly_mulmod(base, &sq, &sq, f);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree `e`.
fn poly_is_irreducible(base: &PrimeField, f: &[u64]) -> bool {
    let e = f.len() - 1;
    // x^{p^e} == x mod f
    let xpe = poly_xpow_p_tower(base, f, e);
    let mut diff = xpe.clone();
    diff.resize(diff.len().max(2), 0);
    diff[1] = base.sub(&diff[1], &1);
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^{p^{e/q}} - x, f) == 1 for every prime q | e
    let mut primes = Vec::new();
    let mut n = e;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            primes.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for q in primes {
        let mut g = poly_xpow_p_tower(base, f, e / q);
        g.resize(g.len().max(2), 0);
        g[1] = base.sub(&g[1], &1);
        poly_trim(&mut g);
        let d = poly_gcd(base, &g, f);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(7);
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn ext_field_inverse_roundtrip() {
        for (p, e) in [(2u64, 8usize), (3, 4), (5, 3)] {
            let f = ExtField::new(p, e, 42);
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
            for _ in 0..20 {
                let a = f.random_elem(&mut rng);
                if f.is_zero(&a) {
                    continue;
                }
                let inv = f.inv(&a);
                assert_eq!(f.mul(&a, &inv), f.one());
            }
        }
    }

    #[test]
    fn ext_field_has_right_multiplicative_order() {
        let f = ExtField::new(2, 4, 7);
        // every nonzero element satisfies a^(2^4 - 1) = 1
        for idx in 1..16u128 {
            let a = f.element_by_index(idx);
            assert_eq!(f.pow(&a, 15), f.one());
        }
    }
}
