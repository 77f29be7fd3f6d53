//! Multivariate Laurent polynomials and dense univariate integer polynomials.
//!
//! `MultiPoly` is generic over the coefficient type through the small
//! [`Coeff`] bound so the same code serves `i64` group-ring images and
//! mod-`p` presentation entries; the crate root pins the concrete aliases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Coefficient requirements for multivariate polynomial arithmetic.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::AddAssign
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + std::ops::Neg<Output = Self>
        + std::ops::Mul<Output = Self>
        + std::ops::AddAssign
{
}

/// Sparse multivariate Laurent polynomial: exponent vector -> coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// Single term `c * t^exps`.
    pub fn monomial(nvars: usize, c: C, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (C, Vec<i32>)>) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: C, exps: Vec<i32>) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(C::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(c.clone(), e.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(ca.clone() * cb.clone(), e);
            }
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut out = Self::one(self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Componentwise minimum exponent over all terms (zero vector if empty).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut m = vec![0i32; self.nvars];
        let mut first = true;
        for e in self.terms.keys() {
            if first {
                m.copy_from_slice(e);
                first = false;
            } else {
                for (mi, &ei) in m.iter_mut().zip(e) {
                    *mi = (*mi).min(ei);
                }
            }
        }
        m
    }

    /// Largest total degree of any term, counting absolute exponent values.
    pub fn max_total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x.unsigned_abs() as i64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Map coefficients, dropping terms that become zero.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(f(c), e.clone());
        }
        out
    }

    /// Substitute `var_polys[j]` for variable `j`. All exponents must be
    /// nonnegative (callers clear denominators first).
    pub fn substitute(&self, var_polys: &[MultiPoly<C>]) -> MultiPoly<C> {
        assert_eq!(var_polys.len(), self.nvars);
        let target_vars = var_polys
            .first()
            .map(|p| p.nvars())
            .unwrap_or(self.nvars);
        let mut out = MultiPoly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target_vars, c.clone());
            for (j, &exp) in e.iter().enumerate() {
                assert!(exp >= 0, "substitute requires nonnegative exponents");
                if exp > 0 {
                    term = term.mul(&var_polys[j].pow(exp as u32));
                }
            }
            out = out.add(&term);
        }
        out
    }
}

impl MultiPoly<i64> {
    /// Collapse every variable to a single one: `t_j -> t` for all `j`.
    /// Result is a univariate Laurent polynomial given as (offset, poly):
    /// the true polynomial is `t^offset * poly` with `poly` having a nonzero
    /// constant term (offset 0 for the zero polynomial).
    pub fn collapse_diagonal(&self) -> (i64, UniPoly) {
        if self.is_zero() {
            return (0, UniPoly::zero());
        }
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            let deg: i64 = e.iter().map(|&x| x as i64).sum();
            let entry = acc.entry(deg).or_insert_with(BigInt::zero);
            *entry += BigInt::from(*c);
        }
        acc.retain(|_, v| !v.is_zero());
        if acc.is_empty() {
            return (0, UniPoly::zero());
        }
        let lo = *acc.keys().next().unwrap();
        let hi = *acc.keys().next_back().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (d, c) in acc {
            coeffs[(d - lo) as usize] = c;
        }
        (lo, UniPoly::new(coeffs))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (j, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, "*t{}^{}", j + 1, x)?;
                }
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial over `BigInt`, little-endian coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![BigInt::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division; returns `None` when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            quot[i - dd] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let delta = dc * &q;
                rem[i - dd + j] -= delta;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UniPoly::new(quot))
    }

    /// GCD of all coefficients (positive); zero polynomial has content 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// GCD via the primitive polynomial remainder sequence, normalized to
    /// content 1 with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        let content = self.content().gcd(&other.content());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().scale(&content).normalized()
    }

    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("pseudo_rem by zero");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap().clone();
            rem = rem.scale(&lead).sub(&divisor.shift(rd - dd).scale(&c));
        }
        rem
    }

    fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Positive leading coefficient.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                write!(f, "{}", a)?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", i)?,
            }
            first = false;
        }
        Ok(())
    }
}
