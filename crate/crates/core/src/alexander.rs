//! Fox calculus on group presentations, Alexander matrices over Laurent
//! rings, linking numbers, and predictions for the growth of first homology
//! along abelian covers.

use crate::chain::{EquivariantComplex, GroupRingElement};
use crate::config::Budgets;
use crate::exactla::{ExactlaError, LaurentMatrix, LaurentRankParams};
use crate::fpgroup::{FpGroupError, GroupPresentation, PadicRep};
use crate::poly::{MultiPoly, UniPoly};
use crate::tower::{
    estimate_limit, run_tower, BettiTable, LimitEstimate, LimitMode, TowerError, TowerOptions,
};
use crate::word::Word;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlexanderError {
    #[error("relator {relator} does not map to zero under the abelianization")]
    RelatorNotKilled { relator: String },
    #[error("abelianization must have rank at least 1 and one nonzero generator image")]
    InvalidAbelianization,
    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("diagonal specialization needs d <= 2, got {0}")]
    TooManyVariables(usize),
    #[error("degenerate Alexander matrix: no nonzero maximal minors")]
    DegenerateMatrix,
    #[error("braid word letter {letter} out of range for {strands} strands")]
    BadBraidLetter { letter: i32, strands: usize },
    #[error("linking number needs a 2-component link, found {0} components")]
    NotTwoComponents(usize),
    #[error("representation does not realize the abelianization: {0}")]
    RepMismatch(String),
    #[error(transparent)]
    Exactla(#[from] ExactlaError),
    #[error(transparent)]
    FpGroup(#[from] FpGroupError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Free (Fox) derivative of a word with respect to one generator (1-based):
/// `∂(uv) = ∂u + u ∂v`, `∂x/∂x = 1`, `∂x⁻¹/∂x = -x⁻¹`.
pub fn fox_derivative(r: &Word, generator: usize) -> GroupRingElement {
    let g = generator as i32;
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::empty();
    for &l in r.letters() {
        if l == g {
            out.add_term(1, prefix.clone());
        } else if l == -g {
            out.add_term(-1, prefix.concat(&Word::gen(-g)));
        }
        prefix = prefix.concat(&Word::gen(l));
    }
    out
}

/// A surjection onto `Z^d`: one image vector per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationMap {
    pub rank: usize,
    pub images: Vec<Vec<i64>>,
}

impl AbelianizationMap {
    pub fn validate(&self, pres: &GroupPresentation) -> Result<(), AlexanderError> {
        if self.images.len() != pres.num_generators() {
            return Err(AlexanderError::WrongImageCount {
                expected: pres.num_generators(),
                got: self.images.len(),
            });
        }
        if self.rank == 0
            || self.images.iter().any(|v| v.len() != self.rank)
            || self.images.iter().all(|v| v.iter().all(|&x| x == 0))
        {
            return Err(AlexanderError::InvalidAbelianization);
        }
        for r in &pres.relators {
            if !self.word_image(r).iter().all(|&x| x == 0) {
                return Err(AlexanderError::RelatorNotKilled {
                    relator: r.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn word_image(&self, w: &Word) -> Vec<i64> {
        let mut out = vec![0i64; self.rank];
        for &l in w.letters() {
            let idx = (l.unsigned_abs() - 1) as usize;
            let sign = if l > 0 { 1 } else { -1 };
            for (o, &im) in out.iter_mut().zip(&self.images[idx]) {
                *o += sign * im;
            }
        }
        out
    }

    /// Push a group-ring element through: words become Laurent monomials.
    pub fn laurent_image(&self, e: &GroupRingElement) -> MultiPoly<i64> {
        let mut out = MultiPoly::zero(self.rank);
        for (w, &c) in e.terms() {
            let exps: Vec<i32> = self
                .word_image(w)
                .iter()
                .map(|&x| i32::try_from(x).expect("abelianized exponent overflow"))
                .collect();
            out.add_term(c, exps);
        }
        out
    }
}

/// Fox derivatives pushed through the abelianization: the `(j, k)` entry is
/// `∂r_j/∂x_k` as a Laurent polynomial in `t_1..t_d`.
#[derive(Clone, Debug)]
pub struct AlexanderMatrix {
    pub num_vars: usize,
    pub generators: usize,
    pub relators: usize,
    pub matrix: LaurentMatrix,
    /// `t^{image(x_k)} - 1` per generator, the abelianized column weights.
    pub gen_weights: Vec<MultiPoly<i64>>,
}

/// Build the Alexander matrix and check the fundamental Fox identity
/// `Σ_k (∂r/∂x_k) (x_k - 1) = r - 1`, which abelianizes to an exact zero row
/// relation since relators die in `Z^d`.
pub fn alexander_matrix(
    pres: &GroupPresentation,
    ab: &AbelianizationMap,
) -> Result<AlexanderMatrix, AlexanderError> {
    ab.validate(pres)?;
    let g = pres.num_generators();
    let d = ab.rank;
    let mut entries = Vec::with_capacity(pres.relators.len() * g);
    for r in &pres.relators {
        for k in 1..=g {
            entries.push(ab.laurent_image(&fox_derivative(r, k)));
        }
    }
    let matrix = LaurentMatrix::from_entries(d, pres.relators.len(), g, entries);
    let gen_weights: Vec<MultiPoly<i64>> = (0..g)
        .map(|k| {
            let exps: Vec<i32> = ab.images[k]
                .iter()
                .map(|&x| i32::try_from(x).expect("image exponent overflow"))
                .collect();
            MultiPoly::monomial(d, 1, exps).sub(&MultiPoly::one(d))
        })
        .collect();
    for j in 0..pres.relators.len() {
        let mut acc = MultiPoly::zero(d);
        for k in 0..g {
            acc = acc.add(&matrix.get(j, k).mul(&gen_weights[k]));
        }
        debug_assert!(acc.is_zero(), "fundamental Fox identity violated");
        if !acc.is_zero() {
            return Err(AlexanderError::RelatorNotKilled {
                relator: pres.relators[j].to_string(),
            });
        }
    }
    Ok(AlexanderMatrix {
        num_vars: d,
        generators: g,
        relators: pres.relators.len(),
        matrix,
        gen_weights,
    })
}

/// First homology growth rate of the free abelian cover, over `F_p`: the
/// kernel of the augmented 1-boundary has dimension `g - 1` over the fraction
/// field, so the value is `(g - 1) - rank A mod p`. Exact for one variable,
/// randomized (one-sided, never above the truth) otherwise.
pub fn modp_l2_betti_1(
    pres: &GroupPresentation,
    ab: &AbelianizationMap,
    p: u64,
    params: &LaurentRankParams,
) -> Result<u64, AlexanderError> {
    let am = alexander_matrix(pres, ab)?;
    let g = am.generators as u64;
    let rank = if am.num_vars == 1 {
        am.matrix.rank_exact_univariate(p, params.seed)?
    } else {
        am.matrix.rank(p, params)?
    } as u64;
    debug_assert!(rank <= g.saturating_sub(1));
    Ok((g - 1).saturating_sub(rank))
}

/// Diagonal / one-variable Alexander data.
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub num_vars: usize,
    /// Normalized gcd of the maximal minors of the (specialized) matrix:
    /// content 1, zero valuation, positive leading coefficient.
    pub minor_gcd: UniPoly,
    /// For 2-variable input, the diagonal Alexander polynomial: the minor
    /// gcd with the cyclic-cover factor `t - 1` divided out (the one-variable
    /// polynomial of the composite infinite cyclic cover carries that extra
    /// unit of growth). Equals `minor_gcd` for one-variable input.
    pub delta: UniPoly,
}

/// Substitute `t_1 = t_2 = t` (identity for one variable) and take the gcd
/// over `Q[t]` of all `(g-1)`-sized minors.
pub fn diagonal_specialization(am: &AlexanderMatrix) -> Result<DiagonalReport, AlexanderError> {
    if am.num_vars > 2 {
        return Err(AlexanderError::TooManyVariables(am.num_vars));
    }
    let size = am.generators.saturating_sub(1);
    if size == 0 {
        // single generator: the empty minor is 1, the module is trivial
        return Ok(DiagonalReport {
            num_vars: am.num_vars,
            minor_gcd: UniPoly::one(),
            delta: UniPoly::one(),
        });
    }
    if am.relators < size {
        return Err(AlexanderError::DegenerateMatrix);
    }
    // Collapse entries to univariate polynomials, clearing each row's
    // monomial denominator (a unit, so minors change by units only).
    let mut rows: Vec<Vec<UniPoly>> = Vec::with_capacity(am.relators);
    for r in 0..am.relators {
        let collapsed: Vec<(i64, UniPoly)> = (0..am.generators)
            .map(|c| am.matrix.get(r, c).collapse_diagonal())
            .collect();
        let min_off = collapsed
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|&(o, _)| o)
            .min()
            .unwrap_or(0);
        rows.push(
            collapsed
                .into_iter()
                .map(|(o, p)| p.shift((o - min_off) as usize))
                .collect(),
        );
    }
    let mut gcd = UniPoly::zero();
    for rsel in combinations(am.relators, size) {
        for csel in combinations(am.generators, size) {
            let sub: Vec<Vec<UniPoly>> = rsel
                .iter()
                .map(|&i| csel.iter().map(|&j| rows[i][j].clone()).collect())
                .collect();
            let det = unipoly_det(sub);
            gcd = gcd.gcd(&det);
            if gcd.degree() == Some(0) {
                break;
            }
        }
    }
    if gcd.is_zero() {
        return Err(AlexanderError::DegenerateMatrix);
    }
    let minor_gcd = normalize_alexander(&gcd);
    let delta = if am.num_vars == 2 {
        let t_minus_1 = UniPoly::from_i64(&[-1, 1]);
        match minor_gcd.div_exact(&t_minus_1) {
            Some(q) => normalize_alexander(&q),
            None => minor_gcd.clone(),
        }
    } else {
        minor_gcd.clone()
    };
    Ok(DiagonalReport {
        num_vars: am.num_vars,
        minor_gcd,
        delta,
    })
}

/// `|Δ(t,t)| at t = 1` for a 2-component link.
pub fn linking_number(am: &AlexanderMatrix) -> Result<i64, AlexanderError> {
    if am.num_vars != 2 {
        return Err(AlexanderError::NotTwoComponents(am.num_vars));
    }
    let report = diagonal_specialization(am)?;
    let v = report.delta.eval(&BigInt::one());
    Ok(i64::try_from(&v.abs()).expect("linking number overflow"))
}

fn normalize_alexander(p: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return UniPoly::zero();
    }
    // strip t^v, divide by content, make the leading coefficient positive
    let val = p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let shifted = UniPoly::new(p.coeffs()[val..].to_vec());
    let content = shifted.content();
    UniPoly::new(shifted.coeffs().iter().map(|c| c / &content).collect()).normalized()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 {
            i -= 1;
            if cur[i] < i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Fraction-free determinant of a small polynomial matrix.
fn unipoly_det(mut a: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = a.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return UniPoly::zero();
            };
            a.swap(k, pivot);
            sign = !sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let num = a[k][k].mul(&a[r][c]).sub(&a[r][k].mul(&a[k][c]));
                a[r][c] = num
                    .div_exact(&prev)
                    .expect("Bareiss division must be exact");
            }
            a[r][k] = UniPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

// ---------------------------------------------------------------------------
// Braid closures
// ---------------------------------------------------------------------------

/// A braid word on `strands` strands; letter `k` is the positive crossing of
/// positions `k` and `k+1`, `-k` the negative one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

/// Everything derived from closing a braid: a Wirtinger-style presentation
/// of the link group, the meridian abelianization, the component count, and
/// (for two components) the linking number read off the crossing signs.
#[derive(Clone, Debug)]
pub struct BraidClosure {
    pub presentation: GroupPresentation,
    pub abelianization: AbelianizationMap,
    pub components: usize,
    /// Signed inter-component crossing count halved; two components only.
    pub crossing_linking: Option<i64>,
}

/// Close a braid: one generator per arc, one conjugation relator per
/// crossing, one identification per strand end. The meridian of each arc
/// maps to the basis vector of its component.
pub fn braid_closure(braid: &BraidWord) -> Result<BraidClosure, AlexanderError> {
    let n = braid.strands;
    if n == 0 {
        return Err(AlexanderError::BadBraidLetter {
            letter: 0,
            strands: 0,
        });
    }
    for &l in &braid.letters {
        if l == 0 || (l.unsigned_abs() as usize) >= n {
            return Err(AlexanderError::BadBraidLetter {
                letter: l,
                strands: n,
            });
        }
    }
    let mut pos: Vec<i32> = (1..=n as i32).collect(); // arc label at each position
    let mut next_label = n as i32 + 1;
    let mut relators: Vec<Word> = Vec::new();
    // union-find over arc labels; same strand => same component
    let total_labels = n + braid.letters.len();
    let mut parent: Vec<usize> = (0..=total_labels).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: i32, b: i32| {
        let (ra, rb) = (find(parent, a as usize), find(parent, b as usize));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    let mut crossings: Vec<(i32, i32, i32)> = Vec::new(); // (sign, over, under)
    for &l in &braid.letters {
        let k = (l.unsigned_abs() - 1) as usize;
        let (u, v) = (pos[k], pos[k + 1]);
        let w = next_label;
        next_label += 1;
        if l > 0 {
            // u passes over v: w = u v u^{-1}
            relators.push(Word::new([w, u, -v, -u]));
            pos[k] = w;
            pos[k + 1] = u;
            union(&mut parent, v, w);
            crossings.push((1, u, v));
        } else {
            // v passes over u: w = v^{-1} u v
            relators.push(Word::new([w, -v, -u, v]));
            pos[k] = v;
            pos[k + 1] = w;
            union(&mut parent, u, w);
            crossings.push((-1, v, u));
        }
    }
    // closure: glue each exiting arc to the entering arc at the same position
    for (j, &label) in pos.iter().enumerate() {
        let start = j as i32 + 1;
        let rel = Word::new([label, -start]);
        if !rel.is_empty() {
            relators.push(rel);
        }
        union(&mut parent, label, start);
    }
    // component index per label, ordered by smallest representative
    let mut roots: Vec<usize> = (1..=total_labels)
        .map(|l| find(&mut parent, l))
        .collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let components = distinct.len();
    let comp_of = |label: usize, roots: &[usize]| -> usize {
        distinct.binary_search(&roots[label - 1]).unwrap()
    };
    let generators: Vec<String> = (1..=total_labels).map(|i| format!("x{}", i)).collect();
    let images: Vec<Vec<i64>> = (1..=total_labels)
        .map(|l| {
            let mut v = vec![0i64; components];
            v[comp_of(l, &roots)] = 1;
            v
        })
        .collect();
    let crossing_linking = if components == 2 {
        let mut sum = 0i64;
        for &(sign, over, under) in &crossings {
            if comp_of(over as usize, &roots) != comp_of(under as usize, &roots) {
                sum += sign as i64;
            }
        }
        debug_assert_eq!(sum % 2, 0, "inter-component crossings pair up");
        Some(sum.abs() / 2)
    } else {
        None
    };
    roots.clear();
    let presentation = GroupPresentation::new(generators, relators)?;
    let abelianization = AbelianizationMap {
        rank: components,
        images,
    };
    abelianization.validate(&presentation)?;
    Ok(BraidClosure {
        presentation,
        abelianization,
        components,
        crossing_linking,
    })
}

// ---------------------------------------------------------------------------
// Tower comparison
// ---------------------------------------------------------------------------

/// Block-diagonal commuting unipotents realizing `Γ -> Z^d -> Z_p^d`:
/// generator `x` with image vector `a` maps to `diag([[1, a_j], [0, 1]])`.
pub fn unipotent_rep(ab: &AbelianizationMap, p: u64, max_level: u32) -> PadicRep {
    let d = ab.rank;
    let n = 2 * d;
    let images = ab
        .images
        .iter()
        .map(|a| {
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                m[i][i] = 1;
            }
            for (j, &aj) in a.iter().enumerate() {
                m[2 * j][2 * j + 1] = aj;
            }
            m
        })
        .collect();
    PadicRep {
        p,
        n,
        images,
        max_level,
    }
}

/// Compare the tower's observed first-homology growth with the Alexander
/// predictions: the `F_p` limit must equal the Laurent-rank value, and the
/// rational limit vanishes exactly when the diagonal Alexander polynomial is
/// nonzero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PredictionReport {
    pub p: u64,
    pub fp_predicted: u64,
    /// `Some(true)` when the diagonal specialization is nonzero (rational
    /// limit predicted zero); `None` when it does not apply (degenerate or
    /// more than two variables).
    pub q_predicted_zero: Option<bool>,
    pub fp_observed: LimitEstimate,
    pub q_observed: LimitEstimate,
    pub fp_match: bool,
    /// `None` when the observed rational column never stabilized into an
    /// exact affine form, so no verdict is claimed.
    pub q_match: Option<bool>,
    pub pass: bool,
}

pub fn predict_vs_tower(
    pres: &GroupPresentation,
    ab: &AbelianizationMap,
    p: u64,
    rep: Option<&PadicRep>,
    levels: u32,
    opts: &TowerOptions,
) -> Result<(PredictionReport, BettiTable), AlexanderError> {
    ab.validate(pres)?;
    let auto_rep = unipotent_rep(ab, p, levels);
    let rep = match rep {
        Some(r) => {
            if r.p != p || r.images != auto_rep.images {
                return Err(AlexanderError::RepMismatch(
                    "generator images are not the prescribed commuting unipotents".into(),
                ));
            }
            r.clone()
        }
        None => auto_rep,
    };
    let complex = EquivariantComplex::presentation_complex(pres);
    let table = run_tower(pres, &rep, &complex, levels, opts)?;
    let fp_col = table.column(1, true);
    let q_col = table.column(1, false);
    let params = LaurentRankParams {
        seed: opts.seed,
        ..LaurentRankParams::default()
    };
    let fp_predicted = modp_l2_betti_1(pres, ab, p, &params)?;
    let am = alexander_matrix(pres, ab)?;
    let q_predicted_zero = if am.num_vars <= 2 {
        match diagonal_specialization(&am) {
            Ok(report) => Some(!report.delta.is_zero()),
            Err(AlexanderError::DegenerateMatrix) => Some(false),
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let fp_observed = estimate_limit(&fp_col, LimitMode::Fp)?;
    let q_observed = estimate_limit(&q_col, LimitMode::Q)?;
    let pred = Ratio::from_integer(fp_predicted as i64);
    let mut fp_match = fp_observed.bracket_lo.0 <= pred && pred <= fp_observed.bracket_hi.0;
    if fp_observed.exact_affine {
        fp_match = fp_match && fp_observed.beta_hat.0 == pred;
    }
    let q_match = if q_observed.exact_affine {
        q_predicted_zero.map(|zero| q_observed.beta_hat.0.is_zero() == zero)
    } else {
        None
    };
    let pass = fp_match && q_match != Some(false);
    Ok((
        PredictionReport {
            p,
            fp_predicted,
            q_predicted_zero,
            fp_observed,
            q_observed,
            fp_match,
            q_match,
            pass,
        },
        table,
    ))
}

/// Budget-aware convenience used by property tests and the corpus runner.
pub fn default_budgets() -> Budgets {
    Budgets::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn trefoil() -> (GroupPresentation, AbelianizationMap) {
        let pres = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::new([1, 2, 1, -2, -1, -2])],
        )
        .unwrap();
        let ab = AbelianizationMap {
            rank: 1,
            images: vec![vec![1], vec![1]],
        };
        (pres, ab)
    }

    pub(super) fn hopf() -> (GroupPresentation, AbelianizationMap) {
        let pres = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::new([1, 2, -1, -2])],
        )
        .unwrap();
        let ab = AbelianizationMap {
            rank: 2,
            images: vec![vec![1, 0], vec![0, 1]],
        };
        (pres, ab)
    }

    #[test]
    fn fox_base_cases() {
        assert_eq!(
            fox_derivative(&Word::new([1]), 1),
            GroupRingElement::term(1, Word::empty())
        );
        assert_eq!(
            fox_derivative(&Word::new([-1]), 1),
            GroupRingElement::term(-1, Word::new([-1]))
        );
        assert!(fox_derivative(&Word::new([2]), 1).is_zero());
    }

    #[test]
    fn fox_product_rule_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..200 {
            let gens = rng.gen_range(1..=3);
            let mk = |rng: &mut rand_chacha::ChaCha12Rng| {
                Word::new(
                    (0..rng.gen_range(0..6))
                        .map(|_| {
                            let g = rng.gen_range(1..=gens as i32);
                            if rng.gen_bool(0.5) {
                                g
                            } else {
                                -g
                            }
                        })
                        .collect::<Vec<_>>(),
                )
            };
            let (u, v) = (mk(&mut rng), mk(&mut rng));
            let uv = u.concat(&v);
            for k in 1..=gens {
                let lhs = fox_derivative(&uv, k);
                let rhs = fox_derivative(&u, k)
                    .add(&GroupRingElement::term(1, u.clone()).mul(&fox_derivative(&v, k)));
                assert_eq!(lhs, rhs, "u={} v={} k={}", u, v, k);
            }
        }
    }

    #[test]
    fn fundamental_identity_symbolic() {
        let (pres, _) = trefoil();
        let r = &pres.relators[0];
        let mut acc = GroupRingElement::zero();
        for k in 1..=2 {
            acc = acc.add(&fox_derivative(r, k).mul(&GroupRingElement::gen_minus_one(k as i32)));
        }
        let expect = GroupRingElement::term(1, r.clone())
            .add(&GroupRingElement::term(-1, Word::empty()));
        assert_eq!(acc, expect);
    }

    #[test]
    fn trefoil_alexander_polynomial() {
        let (pres, ab) = trefoil();
        let am = alexander_matrix(&pres, &ab).unwrap();
        assert_eq!((am.relators, am.generators), (1, 2));
        // ∂r/∂a abelianized: 1 - t + t^2
        let expect = MultiPoly::from_terms(1, [(1i64, vec![0]), (-1, vec![1]), (1, vec![2])]);
        assert_eq!(am.matrix.get(0, 0), &expect);
        let report = diagonal_specialization(&am).unwrap();
        assert_eq!(report.delta, UniPoly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn hopf_alexander_matrix_and_linking() {
        let (pres, ab) = hopf();
        let am = alexander_matrix(&pres, &ab).unwrap();
        let e00 = MultiPoly::from_terms(2, [(1i64, vec![0, 0]), (-1, vec![0, 1])]);
        let e01 = MultiPoly::from_terms(2, [(1i64, vec![1, 0]), (-1, vec![0, 0])]);
        assert_eq!(am.matrix.get(0, 0), &e00);
        assert_eq!(am.matrix.get(0, 1), &e01);
        let report = diagonal_specialization(&am).unwrap();
        // raw minor gcd is t - 1; the diagonal polynomial divides it out
        assert_eq!(report.minor_gcd, UniPoly::from_i64(&[-1, 1]));
        assert_eq!(report.delta, UniPoly::one());
        assert_eq!(linking_number(&am).unwrap(), 1);
    }

    #[test]
    fn free_group_empty_matrix() {
        // Z = <a | >: empty 0x1 Alexander matrix; the zero-size minor window
        // makes the module trivial, so delta is the unit polynomial
        let pres = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
        let ab = AbelianizationMap {
            rank: 1,
            images: vec![vec![1]],
        };
        let am = alexander_matrix(&pres, &ab).unwrap();
        assert_eq!((am.relators, am.generators), (0, 1));
        let report = diagonal_specialization(&am).unwrap();
        assert_eq!(report.delta, UniPoly::one());
    }

    #[test]
    fn split_unlink_is_degenerate() {
        let pres = GroupPresentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        let ab = AbelianizationMap {
            rank: 2,
            images: vec![vec![1, 0], vec![0, 1]],
        };
        let am = alexander_matrix(&pres, &ab).unwrap();
        assert!(matches!(
            diagonal_specialization(&am),
            Err(AlexanderError::DegenerateMatrix)
        ));
    }

    #[test]
    fn trefoil_modp_vanishes() {
        let (pres, ab) = trefoil();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let v = modp_l2_betti_1(&pres, &ab, p, &LaurentRankParams::default()).unwrap();
            assert_eq!(v, 0, "p = {}", p);
        }
    }

    #[test]
    fn hopf_modp_vanishes() {
        let (pres, ab) = hopf();
        for p in [2u64, 3, 5] {
            let v = modp_l2_betti_1(&pres, &ab, p, &LaurentRankParams::default()).unwrap();
            assert_eq!(v, 0);
        }
    }

    #[test]
    fn wedge_modp_is_one() {
        // free group on two generators mapped onto Z^2
        let pres = GroupPresentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        let ab = AbelianizationMap {
            rank: 2,
            images: vec![vec![1, 0], vec![0, 1]],
        };
        let v = modp_l2_betti_1(&pres, &ab, 2, &LaurentRankParams::default()).unwrap();
        assert_eq!(v, 1);
    }

    #[test]
    fn braid_closure_hopf() {
        let closure = braid_closure(&BraidWord {
            strands: 2,
            letters: vec![1, 1],
        })
        .unwrap();
        assert_eq!(closure.components, 2);
        assert_eq!(closure.crossing_linking, Some(1));
        let am = alexander_matrix(&closure.presentation, &closure.abelianization).unwrap();
        assert_eq!(linking_number(&am).unwrap(), 1);
    }

    #[test]
    fn braid_closure_torus_2_4() {
        let closure = braid_closure(&BraidWord {
            strands: 2,
            letters: vec![1, 1, 1, 1],
        })
        .unwrap();
        assert_eq!(closure.components, 2);
        assert_eq!(closure.crossing_linking, Some(2));
        let am = alexander_matrix(&closure.presentation, &closure.abelianization).unwrap();
        let report = diagonal_specialization(&am).unwrap();
        assert_eq!(report.delta.eval(&BigInt::one()).abs(), BigInt::from(2));
        assert_eq!(linking_number(&am).unwrap(), 2);
    }

    #[test]
    fn braid_closure_trefoil_matches_direct_presentation() {
        let closure = braid_closure(&BraidWord {
            strands: 2,
            letters: vec![1, 1, 1],
        })
        .unwrap();
        assert_eq!(closure.components, 1);
        let am = alexander_matrix(&closure.presentation, &closure.abelianization).unwrap();
        let report = diagonal_specialization(&am).unwrap();
        assert_eq!(report.delta, UniPoly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn braid_closure_figure_eight() {
        let closure = braid_closure(&BraidWord {
            strands: 3,
            letters: vec![1, -2, 1, -2],
        })
        .unwrap();
        assert_eq!(closure.components, 1);
        let am = alexander_matrix(&closure.presentation, &closure.abelianization).unwrap();
        let report = diagonal_specialization(&am).unwrap();
        assert_eq!(report.delta, UniPoly::from_i64(&[1, -3, 1]));
        for p in [2u64, 3, 5, 7, 11, 13] {
            let v = modp_l2_betti_1(
                &closure.presentation,
                &closure.abelianization,
                p,
                &LaurentRankParams::default(),
            )
            .unwrap();
            assert_eq!(v, 0);
        }
    }
}
