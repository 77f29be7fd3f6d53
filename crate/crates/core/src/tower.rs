//! Tower orchestration: run a tower of covers to a requested depth, assemble
//! Betti tables, estimate normalized limits, fit the error exponent, and
//! check monotonicity along p-power subtowers.
//!
//! Limits are reported as brackets derived from the computed data, never as
//! extrapolations. The one exception that looks like a fit is exact affine
//! interpolation: when every computed row satisfies `b = c * index + r` for
//! one rational pair `(c, r)`, the slope `c` is reported as the estimate —
//! that is interpolation of the data, not extrapolation beyond it.

use crate::chain::{
    betti, cokernel_identity_check, coset_components, induce, BettiField, ChainError,
    EquivariantComplex,
};
use crate::config::{subseed, Budgets};
use crate::exactla::ExactlaError;
use crate::fpgroup::{
    enumerate_quotient, estimate_dim, DimEstimate, FpGroupError, GroupPresentation, PadicRep,
};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error("need more levels: {0}")]
    InsufficientLevels(String),
    #[error("monotonicity violated at degree {degree}, level {level}: {lhs} > {rhs} (computation bug)")]
    MonotonicityViolated {
        degree: usize,
        level: u32,
        lhs: String,
        rhs: String,
    },
    #[error("index ratio {ratio} between levels {lo} and {hi} is not a power of p={p}")]
    NotPPower { lo: u32, hi: u32, ratio: u64, p: u64 },
    #[error("self-check failed at level {level}: {message}")]
    SelfCheckFailed { level: u32, message: String },
    #[error(transparent)]
    FpGroup(#[from] FpGroupError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Exactla(#[from] ExactlaError),
    #[error("cache I/O: {0}")]
    Cache(String),
}

impl TowerError {
    /// Budget-class errors produce partial tables instead of aborting a run.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            TowerError::FpGroup(FpGroupError::ElementCapExceeded { .. })
                | TowerError::Exactla(ExactlaError::BudgetExceeded(_))
        )
    }
}

/// Which coefficient fields to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldsSel {
    Q,
    Fp,
    Both,
}

impl FieldsSel {
    pub fn wants_q(self) -> bool {
        matches!(self, FieldsSel::Q | FieldsSel::Both)
    }
    pub fn wants_fp(self) -> bool {
        matches!(self, FieldsSel::Fp | FieldsSel::Both)
    }
}

#[derive(Clone, Debug)]
pub struct TowerOptions {
    pub fields: FieldsSel,
    pub seed: u64,
    pub budgets: Budgets,
    /// Row cache directory; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            fields: FieldsSel::Both,
            seed: crate::config::DEFAULT_SEED,
            budgets: Budgets::default(),
            cache_dir: None,
        }
    }
}

/// Exact rational rendered as `"num/den"` in reports, so outputs stay
/// byte-stable and lossless.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(pub Ratio<i64>);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        Rat(Ratio::new(num, den))
    }
    pub fn int(v: i64) -> Self {
        Rat(Ratio::from_integer(v))
    }
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let (n, den) = raw
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("expected num/den"))?;
        let num: i64 = n.parse().map_err(serde::de::Error::custom)?;
        let den: i64 = den.parse().map_err(serde::de::Error::custom)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rat(Ratio::new(num, den)))
    }
}

/// One `(degree, level)` cell of the tower table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRow {
    pub degree: usize,
    pub level: u32,
    pub index: u64,
    pub b_q: Option<u64>,
    pub b_fp: Option<u64>,
    pub coker_q: Option<u64>,
    pub coker_fp: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiTable {
    pub p: u64,
    pub rows: Vec<BettiRow>,
    /// Set when a level failed on budget; shallower rows are still present.
    pub failed_level: Option<(u32, String)>,
    /// Hash of every input that determines the table, also the cache key.
    pub input_hash: String,
}

impl BettiTable {
    /// `(index, b)` pairs for one degree, ordered by level.
    pub fn column(&self, degree: usize, fp: bool) -> Vec<(u64, u64)> {
        let mut out: Vec<(u32, u64, u64)> = self
            .rows
            .iter()
            .filter(|r| r.degree == degree)
            .filter_map(|r| {
                let b = if fp { r.b_fp } else { r.b_q };
                b.map(|b| (r.level, r.index, b))
            })
            .collect();
        out.sort_unstable();
        out.into_iter().map(|(_, i, b)| (i, b)).collect()
    }

    /// `(level, index, b)` triples for one degree, ordered by level.
    pub fn column_with_levels(&self, degree: usize, fp: bool) -> Vec<(u32, u64, u64)> {
        let mut out: Vec<(u32, u64, u64)> = self
            .rows
            .iter()
            .filter(|r| r.degree == degree)
            .filter_map(|r| {
                let b = if fp { r.b_fp } else { r.b_q };
                b.map(|b| (r.level, r.index, b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn indices(&self) -> Vec<(u32, u64)> {
        let mut out: Vec<(u32, u64)> = self
            .rows
            .iter()
            .filter(|r| r.degree == 0)
            .map(|r| (r.level, r.index))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn max_degree(&self) -> usize {
        self.rows.iter().map(|r| r.degree).max().unwrap_or(0)
    }

    /// Fixed-order CSV: `k,i,index,b_Q,b_Fp,coker_Q,coker_Fp`.
    pub fn to_csv(&self) -> String {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| (r.degree, r.level));
        let mut out = String::from("k,i,index,b_Q,b_Fp,coker_Q,coker_Fp\n");
        let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.degree,
                r.level,
                r.index,
                cell(r.b_q),
                cell(r.b_fp),
                cell(r.coker_q),
                cell(r.coker_fp),
            ));
        }
        out
    }
}

fn input_hash(
    pres: &GroupPresentation,
    rep: &PadicRep,
    complex: &EquivariantComplex,
    opts: &TowerOptions,
) -> String {
    #[derive(Serialize)]
    struct HashInput<'a> {
        schema: u32,
        pres: &'a GroupPresentation,
        rep: &'a PadicRep,
        complex: &'a EquivariantComplex,
        fields: FieldsSel,
        seed: u64,
    }
    let blob = serde_json::to_vec(&HashInput {
        schema: SCHEMA_VERSION,
        pres,
        rep,
        complex,
        fields: opts.fields,
        seed: opts.seed,
    })
    .expect("hash input serializes");
    hex::encode(Sha256::digest(blob))
}

fn cache_file(dir: &Path, hash: &str, level: u32) -> PathBuf {
    dir.join("v1").join(format!("{hash}-L{level}.json"))
}

fn load_cached(path: &Path) -> Option<Vec<BettiRow>> {
    let data = std::fs::read(path).ok()?;
    serde_json::from_slice(&data).ok()
}

fn store_cached(path: &Path, rows: &[BettiRow]) -> Result<(), TowerError> {
    let dir = path.parent().expect("cache file has a parent");
    std::fs::create_dir_all(dir).map_err(|e| TowerError::Cache(e.to_string()))?;
    let tmp = path.with_extension("tmp");
    let blob = serde_json::to_vec(rows).expect("rows serialize");
    std::fs::write(&tmp, blob).map_err(|e| TowerError::Cache(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| TowerError::Cache(e.to_string()))?;
    Ok(())
}

fn compute_level(
    pres: &GroupPresentation,
    rep: &PadicRep,
    complex: &EquivariantComplex,
    level: u32,
    opts: &TowerOptions,
) -> Result<Vec<BettiRow>, TowerError> {
    let quotient = enumerate_quotient(pres, rep, level, &opts.budgets)?;
    let ind = induce(complex, &quotient)?;
    if !ind.verify_dd_zero() {
        return Err(TowerError::SelfCheckFailed {
            level,
            message: "induced boundary composite nonzero over Z".into(),
        });
    }
    let m = quotient.index;
    let n = complex.max_degree();
    let seed = subseed(opts.seed, "level", level as u64);
    let mut b_q = None;
    let mut b_fp = None;
    if opts.fields.wants_q() {
        let bn = betti(&ind, BettiField::Rational, seed, &opts.budgets);
        cokernel_identity_check(&ind, BettiField::Rational, &bn, seed, &opts.budgets)?;
        b_q = Some(bn);
    }
    if opts.fields.wants_fp() {
        let bn = betti(&ind, BettiField::Prime(rep.p), seed, &opts.budgets);
        cokernel_identity_check(&ind, BettiField::Prime(rep.p), &bn, seed, &opts.budgets)?;
        b_fp = Some(bn);
    }
    // structural self-checks: component count and Euler characteristic
    let components = coset_components(&quotient) as u64;
    let chi_base: i64 = complex
        .dims
        .iter()
        .enumerate()
        .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum();
    for bn in [&b_q, &b_fp].into_iter().flatten() {
        if bn.b[0] != components {
            return Err(TowerError::SelfCheckFailed {
                level,
                message: format!(
                    "b_0 = {} but the coset action has {} orbits",
                    bn.b[0], components
                ),
            });
        }
        let chi: i64 = bn
            .b
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        if chi != chi_base * m as i64 {
            return Err(TowerError::SelfCheckFailed {
                level,
                message: format!("Euler characteristic {} != {}", chi, chi_base * m as i64),
            });
        }
    }
    let mut rows = Vec::with_capacity(n + 1);
    for k in 0..=n {
        rows.push(BettiRow {
            degree: k,
            level,
            index: m,
            b_q: b_q.as_ref().map(|bn| bn.b[k]),
            b_fp: b_fp.as_ref().map(|bn| bn.b[k]),
            coker_q: b_q.as_ref().map(|bn| bn.coker[k]),
            coker_fp: b_fp.as_ref().map(|bn| bn.coker[k]),
        });
    }
    Ok(rows)
}

/// Run the tower over levels `1..=levels`. Level jobs are independent and
/// run in parallel; rows are assembled in level order so output is
/// deterministic. Budget failures mark the table partial instead of failing
/// the whole run.
pub fn run_tower(
    pres: &GroupPresentation,
    rep: &PadicRep,
    complex: &EquivariantComplex,
    levels: u32,
    opts: &TowerOptions,
) -> Result<BettiTable, TowerError> {
    pres.validate()?;
    rep.validate(pres)?;
    complex.validate_dd_zero(pres)?;
    let hash = input_hash(pres, rep, complex, opts);
    let results: Vec<(u32, Result<Vec<BettiRow>, TowerError>)> = (1..=levels)
        .into_par_iter()
        .map(|level| {
            if let Some(dir) = &opts.cache_dir {
                let path = cache_file(dir, &hash, level);
                if let Some(rows) = load_cached(&path) {
                    return (level, Ok(rows));
                }
                let rows = compute_level(pres, rep, complex, level, opts);
                if let Ok(rows) = &rows {
                    if let Err(e) = store_cached(&path, rows) {
                        return (level, Err(e));
                    }
                }
                (level, rows)
            } else {
                (level, compute_level(pres, rep, complex, level, opts))
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut failed_level = None;
    for (level, result) in results {
        match result {
            Ok(mut r) => {
                if failed_level.is_none() {
                    rows.append(&mut r);
                }
            }
            Err(e) if e.is_budget() => {
                if failed_level.is_none() {
                    failed_level = Some((level, e.to_string()));
                    rows.retain(|r: &BettiRow| r.level < level);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(BettiTable {
        p: rep.p,
        rows,
        failed_level,
        input_hash: hash,
    })
}

/// Limit estimation mode: monotone p-power towers (`Fp`) get a rigorous
/// upper bracket; rational columns get a descriptive bracket only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitMode {
    Q,
    Fp,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub mode: LimitMode,
    /// Exact affine slope when the whole column is affine in the index,
    /// otherwise the last normalized value.
    pub beta_hat: Rat,
    /// True when every row satisfies `b = beta_hat * index + r` exactly.
    pub exact_affine: bool,
    pub bracket_lo: Rat,
    pub bracket_hi: Rat,
    /// Forward differences of the normalized values (instability indicator).
    pub diffs: Vec<Rat>,
}

/// Estimate the normalized limit of one degree column.
pub fn estimate_limit(column: &[(u64, u64)], mode: LimitMode) -> Result<LimitEstimate, TowerError> {
    if column.len() < 2 {
        return Err(TowerError::InsufficientLevels(format!(
            "limit estimation needs >= 2 levels, got {}",
            column.len()
        )));
    }
    if column.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(TowerError::InsufficientLevels(
            "indices must be strictly increasing".into(),
        ));
    }
    let normalized: Vec<Ratio<i64>> = column
        .iter()
        .map(|&(idx, b)| Ratio::new(b as i64, idx as i64))
        .collect();
    let last = *normalized.last().unwrap();
    // exact affine interpolation: b = c * index + r
    let n = column.len();
    let c = Ratio::new(
        column[n - 1].1 as i64 - column[n - 2].1 as i64,
        column[n - 1].0 as i64 - column[n - 2].0 as i64,
    );
    let r = Ratio::from_integer(column[n - 1].1 as i64)
        - c * Ratio::from_integer(column[n - 1].0 as i64);
    let exact_affine = column.iter().all(|&(idx, b)| {
        Ratio::from_integer(b as i64) == c * Ratio::from_integer(idx as i64) + r
    });
    let beta_hat = if exact_affine { c } else { last };
    let (lo, hi) = match mode {
        LimitMode::Fp => (Ratio::from_integer(0), last),
        LimitMode::Q => {
            let mut lo = normalized[0];
            let mut hi = normalized[0];
            for &v in &normalized {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        }
    };
    let diffs = normalized.windows(2).map(|w| Rat(w[1] - w[0])).collect();
    Ok(LimitEstimate {
        mode,
        beta_hat: Rat(beta_hat),
        exact_affine,
        bracket_lo: Rat(lo),
        bracket_hi: Rat(hi),
        diffs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentVerdict {
    Consistent,
    TriviallyConsistent,
    Inconsistent,
    /// Fewer than three nonzero residuals: no slope is claimed.
    Undetermined,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentFit {
    pub residuals: Vec<Rat>,
    pub slope: Option<f64>,
    /// `1 - 1/d + slack`; the slack (0.15) compensates for finitely many
    /// levels and is always reported alongside the raw slope.
    pub bound: f64,
    pub slack: f64,
    pub verdict: ExponentVerdict,
}

/// Least-squares slope of `log e_i` against `log index_i` over the nonzero
/// residuals `e_i = |b_i - beta_hat * index_i|`.
pub fn fit_error_exponent(
    column: &[(u64, u64)],
    beta_hat: Rat,
    d_hat: f64,
) -> Result<ExponentFit, TowerError> {
    if column.len() < 3 {
        return Err(TowerError::InsufficientLevels(format!(
            "exponent fit needs >= 3 levels, got {}",
            column.len()
        )));
    }
    let slack = 0.15;
    let bound = 1.0 - 1.0 / d_hat + slack;
    let residuals: Vec<Ratio<i64>> = column
        .iter()
        .map(|&(idx, b)| {
            let e = Ratio::from_integer(b as i64) - beta_hat.0 * Ratio::from_integer(idx as i64);
            if e < Ratio::from_integer(0) {
                -e
            } else {
                e
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = column
        .iter()
        .zip(&residuals)
        .filter(|(_, e)| **e != Ratio::from_integer(0))
        .map(|(&(idx, _), e)| {
            let ef = *e.numer() as f64 / *e.denom() as f64;
            ((idx as f64).ln(), ef.ln())
        })
        .collect();
    let (slope, verdict) = if points.is_empty() {
        (None, ExponentVerdict::TriviallyConsistent)
    } else if points.len() < 3 {
        (None, ExponentVerdict::Undetermined)
    } else {
        let n = points.len() as f64;
        let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
        let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
        let sxy: f64 = points
            .iter()
            .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
            .sum();
        let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
        let verdict = if slope <= bound {
            ExponentVerdict::Consistent
        } else {
            ExponentVerdict::Inconsistent
        };
        (Some(slope), verdict)
    };
    Ok(ExponentFit {
        residuals: residuals.into_iter().map(Rat).collect(),
        slope,
        bound,
        slack,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub base_level: u32,
    /// Normalized values `b_i / [Γ_base : Γ_i]` from the base level on.
    pub normalized: Vec<(u32, Rat)>,
    pub pass: bool,
}

/// Along a p-power subtower the normalized Betti numbers must be
/// non-increasing; a violation is a computation-bug detector, not a data
/// property, and surfaces as an error.
pub fn check_monotonicity(
    column: &[(u32, u64, u64)],
    base_level: u32,
    p: u64,
    degree: usize,
) -> Result<MonotonicityReport, TowerError> {
    let rows: Vec<&(u32, u64, u64)> =
        column.iter().filter(|(l, _, _)| *l >= base_level).collect();
    if rows.len() < 2 {
        return Err(TowerError::InsufficientLevels(format!(
            "monotonicity needs >= 2 levels at or above base {}",
            base_level
        )));
    }
    for w in rows.windows(2) {
        let (l0, i0, _) = *w[0];
        let (l1, i1, _) = *w[1];
        if i1 % i0 != 0 {
            return Err(TowerError::NotPPower {
                lo: l0,
                hi: l1,
                ratio: 0,
                p,
            });
        }
        let mut ratio = i1 / i0;
        let full = ratio;
        while ratio % p == 0 {
            ratio /= p;
        }
        if ratio != 1 {
            return Err(TowerError::NotPPower {
                lo: l0,
                hi: l1,
                ratio: full,
                p,
            });
        }
    }
    let base_index = rows[0].1;
    let normalized: Vec<(u32, Rat)> = rows
        .iter()
        .map(|&&(l, idx, b)| {
            (
                l,
                Rat(Ratio::new(b as i64 * base_index as i64, idx as i64)),
            )
        })
        .collect();
    for w in normalized.windows(2) {
        if w[1].1 .0 > w[0].1 .0 {
            return Err(TowerError::MonotonicityViolated {
                degree,
                level: w[1].0,
                lhs: w[1].1.to_string(),
                rhs: w[0].1.to_string(),
            });
        }
    }
    Ok(MonotonicityReport {
        base_level,
        normalized,
        pass: true,
    })
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub limit_q: Option<LimitEstimate>,
    pub limit_fp: Option<LimitEstimate>,
    pub exponent_q: Option<ExponentFit>,
    pub exponent_fp: Option<ExponentFit>,
    pub monotonicity_fp: Option<MonotonicityReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheProvenance {
    pub input_hash: String,
    pub cache_dir: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerReport {
    pub schema_version: u32,
    pub p: u64,
    pub levels_requested: u32,
    pub seed: u64,
    pub indices: Vec<(u32, u64)>,
    pub dim_estimate: Option<DimEstimate>,
    /// User-supplied dimension, reported side by side with the estimate and
    /// never trusted on its own.
    pub user_d: Option<f64>,
    pub degrees: Vec<DegreeReport>,
    pub failed_level: Option<(u32, String)>,
    pub cache: CacheProvenance,
    /// False when any exponent verdict is inconsistent.
    pub consistent: bool,
}

/// Assemble limits, exponent fits, and monotonicity checks per degree.
pub fn build_report(
    table: &BettiTable,
    levels_requested: u32,
    seed: u64,
    user_d: Option<f64>,
    monotonicity_base: u32,
    cache_dir: Option<&Path>,
) -> Result<TowerReport, TowerError> {
    let indices = table.indices();
    let dim_estimate = estimate_dim(&indices, table.p).ok();
    let d_hat = dim_estimate.as_ref().map(|d| d.d_hat);
    let mut degrees = Vec::new();
    let mut consistent = true;
    for k in 0..=table.max_degree() {
        let q_col = table.column(k, false);
        let fp_col = table.column(k, true);
        // towers with a finite image stabilize; no estimate is claimed then
        // (the table still carries every computed row)
        let limit_q = if q_col.len() >= 2 {
            estimate_limit(&q_col, LimitMode::Q).ok()
        } else {
            None
        };
        let limit_fp = if fp_col.len() >= 2 {
            estimate_limit(&fp_col, LimitMode::Fp).ok()
        } else {
            None
        };
        let fit = |col: &[(u64, u64)],
                       limit: &Option<LimitEstimate>|
         -> Result<Option<ExponentFit>, TowerError> {
            match (limit, d_hat) {
                (Some(l), Some(d)) if col.len() >= 3 => {
                    let f = fit_error_exponent(col, l.beta_hat, d)?;
                    Ok(Some(f))
                }
                _ => Ok(None),
            }
        };
        let exponent_q = fit(&q_col, &limit_q)?;
        let exponent_fp = fit(&fp_col, &limit_fp)?;
        for f in [&exponent_q, &exponent_fp].into_iter().flatten() {
            if f.verdict == ExponentVerdict::Inconsistent {
                consistent = false;
            }
        }
        let fp_with_levels = table.column_with_levels(k, true);
        let monotonicity_fp = if fp_with_levels
            .iter()
            .filter(|(l, _, _)| *l >= monotonicity_base)
            .count()
            >= 2
        {
            Some(check_monotonicity(
                &fp_with_levels,
                monotonicity_base,
                table.p,
                k,
            )?)
        } else {
            None
        };
        degrees.push(DegreeReport {
            degree: k,
            limit_q,
            limit_fp,
            exponent_q,
            exponent_fp,
            monotonicity_fp,
        });
    }
    Ok(TowerReport {
        schema_version: SCHEMA_VERSION,
        p: table.p,
        levels_requested,
        seed,
        indices,
        dim_estimate,
        user_d,
        degrees,
        failed_level: table.failed_level.clone(),
        cache: CacheProvenance {
            input_hash: table.input_hash.clone(),
            cache_dir: cache_dir.map(|d| d.display().to_string()),
        },
        consistent,
    })
}
