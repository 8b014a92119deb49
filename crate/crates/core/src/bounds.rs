//! Closed-form evaluators for the packing, metric-entropy, and risk bounds,
//! in double precision with exact-rational precondition checks.
//!
//! Every evaluator is a pure formula object: dimension arguments are supplied
//! by the caller, either computed exactly by [`crate::dims`] or synthesized
//! from the power law housed in [`BoundParams`], and never recomputed here.
//! Shared conventions:
//!
//! * out-of-range inputs produce named errors, and no evaluator ever returns
//!   a NaN or an infinity (an overflowing formula is reported as
//!   [`Error::NonFinite`]);
//! * a zero dimension argument collapses a power factor to 1; the
//!   ceiling-exponent packing bound keeps its leading factor 2;
//! * base-2 and natural logarithms appear exactly as in the formulas, with
//!   no normalization from one base to the other.

use std::f64::consts::{E, LN_2};

use num::Signed;

use crate::error::{Error, Result};
use crate::metrics::PNorm;
use crate::model::check_gamma;
use crate::rat::{fmt, to_f64, Q};

/// Constants shared by the entropy and risk evaluators: the power law for the
/// Natarajan dimension of the margin class, plus margin, confidence, class
/// bound, and the norm radii of the linear case.
#[derive(Debug, Clone)]
pub struct BoundParams {
    /// Number of categories, at least 3.
    pub c: usize,
    /// Margin parameter in (0, 1].
    pub gamma: Q,
    /// Confidence level in (0, 1).
    pub delta: f64,
    /// Uniform bound on the class values, positive.
    pub m_g: Q,
    /// First multiplicative constant of the power law, positive.
    pub k1: f64,
    /// Second multiplicative constant of the power law, positive.
    pub k2: f64,
    /// Category-count exponent of the power law, in (0, 2].
    pub d_gc: f64,
    /// Inverse-scale exponent of the power law, positive.
    pub d_ggamma: f64,
    /// Bound on the norm of the weight vectors, positive.
    pub lambda: Q,
    /// Bound on the norm of the descriptions, positive.
    pub lambda_x: Q,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            c: 3,
            gamma: Q::from_integer(1.into()),
            delta: 0.05,
            m_g: Q::from_integer(1.into()),
            k1: 1.0,
            k2: 1.0,
            d_gc: 1.0,
            d_ggamma: 1.0,
            lambda: Q::from_integer(1.into()),
            lambda_x: Q::from_integer(1.into()),
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if self.c < 3 {
            return Err(Error::TooFewCategories(self.c));
        }
        check_gamma(&self.gamma)?;
        require(
            self.delta > 0.0 && self.delta < 1.0,
            "delta",
            self.delta.to_string(),
            "0 < delta < 1",
        )?;
        require_pos_q(&self.m_g, "M_G")?;
        require(
            self.k1.is_finite() && self.k1 > 0.0,
            "K1",
            self.k1.to_string(),
            "K1 > 0",
        )?;
        require(
            self.k2.is_finite() && self.k2 > 0.0,
            "K2",
            self.k2.to_string(),
            "K2 > 0",
        )?;
        require(
            self.d_gc > 0.0 && self.d_gc <= 2.0,
            "d_GC",
            self.d_gc.to_string(),
            "0 < d_GC <= 2",
        )?;
        require(
            self.d_ggamma.is_finite() && self.d_ggamma > 0.0,
            "d_Ggamma",
            self.d_ggamma.to_string(),
            "d_Ggamma > 0",
        )?;
        require_pos_q(&self.lambda, "Lambda")?;
        require_pos_q(&self.lambda_x, "Lambda_X")?;
        Ok(())
    }

    /// Product constant of the power law.
    pub fn k_rho(&self) -> f64 {
        self.k1 * self.k2
    }

    fn gamma_f(&self) -> f64 {
        to_f64(&self.gamma)
    }
}

/// Selects the previously published form of a bound or the improved one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Old,
    New,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Old => "old",
            Variant::New => "new",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(Variant::Old),
            "new" => Ok(Variant::New),
            other => Err(Error::Parameter {
                name: "variant",
                value: other.to_string(),
                requirement: "one of: old, new",
            }),
        }
    }
}

fn require(ok: bool, name: &'static str, value: String, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            requirement,
        })
    }
}

fn require_pos_q(x: &Q, name: &'static str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value: fmt(x),
            requirement: "must be positive",
        })
    }
}

fn check_eps_in(eps: &Q, hi: &Q) -> Result<()> {
    if eps.is_positive() && eps <= hi {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange {
            eps: fmt(eps),
            lo: "0".to_string(),
            hi: fmt(hi),
        })
    }
}

fn require_n_ge_d(n: u64, d: u64, requirement: &'static str) -> Result<()> {
    if n >= d {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "n",
            value: n.to_string(),
            requirement,
        })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(name))
    }
}

/// Ceiling-exponent sup-norm packing bound driven by a graph dimension:
/// `2 (4 gamma^2 n / eps^2) ^ ceil(d log2(2 gamma e n / (d eps)))`.
///
/// A zero dimension leaves only the leading factor 2.
pub fn packing_bound_linfty_g_old(eps: &Q, gamma: &Q, n: u64, d_g: u64) -> Result<f64> {
    check_eps_in(eps, gamma)?;
    if d_g == 0 {
        return Ok(2.0);
    }
    require_n_ge_d(n, d_g, "n >= d_G")?;
    let (e, g, nf, d) = (to_f64(eps), to_f64(gamma), n as f64, d_g as f64);
    let base = 4.0 * g * g * nf / (e * e);
    let expo = (d * (2.0 * g * E * nf / (d * e)).log2()).ceil();
    finite("packing_bound_linfty_g_old", 2.0 * base.powf(expo))
}

/// Power-form sup-norm packing bound driven by a graph dimension, with no
/// ceiling: `(6 gamma n / eps) ^ (d log2(2 gamma e n / (d eps)))`.
pub fn packing_bound_linfty_g(eps: &Q, gamma: &Q, n: u64, d_g: u64) -> Result<f64> {
    check_eps_in(eps, gamma)?;
    if d_g == 0 {
        return Ok(1.0);
    }
    require_n_ge_d(n, d_g, "n >= d_G")?;
    let (e, g, nf, d) = (to_f64(eps), to_f64(gamma), n as f64, d_g as f64);
    let base = 6.0 * g * nf / e;
    let expo = d * (2.0 * g * E * nf / (d * e)).log2();
    finite("packing_bound_linfty_g", base.powf(expo))
}

/// Sample-size-free L2 packing bound driven by a graph dimension:
/// `(5 gamma / eps) ^ (20 d)`.
pub fn packing_bound_l2_g(eps: &Q, gamma: &Q, d_g: u64) -> Result<f64> {
    check_eps_in(eps, gamma)?;
    if d_g == 0 {
        return Ok(1.0);
    }
    let (e, g) = (to_f64(eps), to_f64(gamma));
    finite("packing_bound_l2_g", (5.0 * g / e).powf(20.0 * d_g as f64))
}

/// Sup-norm packing bound driven by a Natarajan dimension:
/// `(6 gamma sqrt(C-1) n / eps) ^ (d log2(2 gamma (C-1) e n / (d eps)))`.
pub fn packing_bound_linfty_n(eps: &Q, gamma: &Q, n: u64, c: usize, d_n: u64) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    check_eps_in(eps, gamma)?;
    if d_n == 0 {
        return Ok(1.0);
    }
    require_n_ge_d(n, d_n, "n >= d_N")?;
    let (e, g, nf, d) = (to_f64(eps), to_f64(gamma), n as f64, d_n as f64);
    let cm = (c - 1) as f64;
    let base = 6.0 * g * cm.sqrt() * nf / e;
    let expo = d * (2.0 * g * cm * E * nf / (d * e)).log2();
    finite("packing_bound_linfty_n", base.powf(expo))
}

/// L2 packing bound driven by a Natarajan dimension:
/// `((C-1)(6 gamma/eps)^5) ^ (4 log2((6 gamma/eps)^3 sqrt(C-1)) d)`.
pub fn packing_bound_l2_n(eps: &Q, gamma: &Q, c: usize, d_n: u64) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    check_eps_in(eps, gamma)?;
    if d_n == 0 {
        return Ok(1.0);
    }
    let (e, g) = (to_f64(eps), to_f64(gamma));
    let cm = (c - 1) as f64;
    let r = 6.0 * g / e;
    let base = cm * r.powi(5);
    let expo = 4.0 * (r.powi(3) * cm.sqrt()).log2() * d_n as f64;
    finite("packing_bound_l2_n", base.powf(expo))
}

/// Category constant `min{4 (C/(C-2))^2, 16}` of the fat decomposition.
pub fn k_c(c: usize) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    let cf = c as f64;
    Ok((4.0 * (cf / (cf - 2.0)).powi(2)).min(16.0))
}

/// Decomposition of a graph dimension into one fat-shattering dimension per
/// category: `(10 K_C log2(2C) / ln 2) ln(48 M_G log2(2C)^{1/7} / eps) sum_k d_k`.
///
/// The caller supplies the per-category dimensions, computed at the reduced
/// scale that the decomposition prescribes.
pub fn fat_decomposition_bound(eps: &Q, c: usize, m_g: &Q, fat_dims: &[u64]) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    require_pos_q(eps, "eps")?;
    require_pos_q(m_g, "M_G")?;
    require(
        fat_dims.len() == c,
        "fat_dims",
        fat_dims.len().to_string(),
        "one entry per category",
    )?;
    let lc = (2.0 * c as f64).log2();
    let sum: f64 = fat_dims.iter().map(|&d| d as f64).sum();
    let lead = 10.0 * k_c(c)? * lc / LN_2;
    let scale = (48.0 * to_f64(m_g) * lc.powf(1.0 / 7.0) / to_f64(eps)).ln();
    finite("fat_decomposition_bound", lead * scale * sum)
}

/// Exponent `2 + 2/(2 ln(C-1) + 1)` of the graph-to-Natarajan comparison.
pub fn alpha_exponent(c: usize) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    Ok(2.0 + 2.0 / (2.0 * ((c - 1) as f64).ln() + 1.0))
}

/// Exponent `1 + 1/(4 ln(C-1) + 2)` of the graph-to-Natarajan comparison.
pub fn beta_exponent(c: usize) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    Ok(1.0 + 1.0 / (4.0 * ((c - 1) as f64).ln() + 2.0))
}

/// Bound on a graph dimension in terms of the Natarajan dimension at the same
/// scale: `42 (ln(C-1) + 1)^alpha d^beta`, zero at `d = 0`.
pub fn graph_to_natarajan_bound(c: usize, d_n: u64) -> Result<f64> {
    let (a, b) = (alpha_exponent(c)?, beta_exponent(c)?);
    if d_n == 0 {
        return Ok(0.0);
    }
    let lead = 42.0 * (((c - 1) as f64).ln() + 1.0).powf(a);
    finite("graph_to_natarajan_bound", lead * (d_n as f64).powf(b))
}

/// Sum of the supplied fat-shattering dimensions of the pairwise hull
/// classes, one entry per unordered category pair.
pub fn natarajan_structural_bound(c: usize, pair_fat_dims: &[u64]) -> Result<u64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    let want = c * (c - 1) / 2;
    require(
        pair_fat_dims.len() == want,
        "pair_fat_dims",
        pair_fat_dims.len().to_string(),
        "one entry per unordered category pair",
    )?;
    pair_fat_dims
        .iter()
        .try_fold(0u64, |acc, &d| acc.checked_add(d))
        .ok_or_else(|| Error::Internal("pair dimension sum overflowed".to_string()))
}

/// Natarajan-dimension bound for margin multi-class SVMs:
/// `C (Lambda Lambda_X / (2 gamma))^2` for `gamma` in `(0, Lambda Lambda_X]`.
pub fn svm_natarajan_bound(c: usize, lambda: &Q, lambda_x: &Q, gamma: &Q) -> Result<f64> {
    if c < 3 {
        return Err(Error::TooFewCategories(c));
    }
    require_pos_q(lambda, "Lambda")?;
    require_pos_q(lambda_x, "Lambda_X")?;
    let prod = lambda * lambda_x;
    if !gamma.is_positive() || *gamma > prod {
        return Err(Error::Parameter {
            name: "gamma",
            value: fmt(gamma),
            requirement: "gamma in (0, Lambda*Lambda_X]",
        });
    }
    let ratio = to_f64(&prod) / (2.0 * to_f64(gamma));
    finite("svm_natarajan_bound", c as f64 * ratio * ratio)
}

/// Power law for the Natarajan dimension of the margin class:
/// `K_rho C^{d_GC} eps^{-d_Ggamma}` for `eps` in `(0, M_G]`.
pub fn hypothesis_nat_dim(eps: &Q, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    check_eps_in(eps, &params.m_g)?;
    let v =
        params.k_rho() * (params.c as f64).powf(params.d_gc) * to_f64(eps).powf(-params.d_ggamma);
    finite("hypothesis_nat_dim", v)
}

/// Base-2 metric entropy bound for the margin class at sup-norm scale
/// `gamma/2`, valid above a variant-specific sample-size threshold:
///
/// * old: `C (1 + K2 log2^2(128 M_G^2 m / gamma^2) (8/gamma)^d)` for
///   `m >= K2 (8/gamma)^d / 2`;
/// * new: `K_rho C^{d_GC} log2^2(24 (C-1) m) (8/gamma)^d` for
///   `m >= K_rho C^{d_GC} (8/gamma)^d / 2`.
///
/// A sample below the threshold is refused rather than extrapolated.
pub fn metric_entropy_linfty(m: u64, params: &BoundParams, variant: Variant) -> Result<f64> {
    params.validate()?;
    require(m >= 1, "m", m.to_string(), "m >= 1")?;
    let g = params.gamma_f();
    let power = (8.0 / g).powf(params.d_ggamma);
    let mf = m as f64;
    let cf = params.c as f64;
    let value = match variant {
        Variant::Old => {
            let threshold = 0.5 * params.k2 * power;
            if mf < threshold {
                return Err(Error::SampleTooSmall {
                    m: m.to_string(),
                    threshold: threshold.to_string(),
                });
            }
            let mg = to_f64(&params.m_g);
            let log = (128.0 * mg * mg * mf / (g * g)).log2();
            cf * (1.0 + params.k2 * log.powi(2) * power)
        }
        Variant::New => {
            let lead = params.k_rho() * cf.powf(params.d_gc);
            let threshold = 0.5 * lead * power;
            if mf < threshold {
                return Err(Error::SampleTooSmall {
                    m: m.to_string(),
                    threshold: threshold.to_string(),
                });
            }
            lead * (24.0 * (cf - 1.0) * mf).log2().powi(2) * power
        }
    };
    finite("metric_entropy_linfty", value)
}

/// Natural-log metric entropy bound for the margin class at L2 scale `eps`
/// in `(0, gamma]`:
///
/// * old: `20 K2 C ln(12 M_G sqrt(C)/eps) (48 sqrt(C)/eps)^d`;
/// * new: `6 K_rho C^{d_GC} ln^2((C-1)(6 gamma/eps)^5) (12/eps)^d`.
pub fn metric_entropy_l2(eps: &Q, params: &BoundParams, variant: Variant) -> Result<f64> {
    params.validate()?;
    check_eps_in(eps, &params.gamma)?;
    let e = to_f64(eps);
    let cf = params.c as f64;
    let d = params.d_ggamma;
    let value = match variant {
        Variant::Old => {
            let mg = to_f64(&params.m_g);
            20.0 * params.k2
                * cf
                * (12.0 * mg * cf.sqrt() / e).ln()
                * (48.0 * cf.sqrt() / e).powf(d)
        }
        Variant::New => {
            let g = params.gamma_f();
            6.0 * params.k_rho()
                * cf.powf(params.d_gc)
                * ((cf - 1.0) * (6.0 * g / e).powi(5)).ln().powi(2)
                * (12.0 / e).powf(d)
        }
    };
    finite("metric_entropy_l2", value)
}

/// Product of per-category proper covering numbers. The caller computes each
/// factor at radius `C^{-1/p} eps`; this evaluator validates and multiplies.
pub fn covering_decomposition_bound(eps: &Q, p: PNorm, per_category: &[u64]) -> Result<f64> {
    p.validate()?;
    require_pos_q(eps, "eps")?;
    require(
        !per_category.is_empty(),
        "per_category",
        "0".to_string(),
        "at least one factor",
    )?;
    let mut product = 1.0f64;
    for &v in per_category {
        require(
            v >= 1,
            "per_category",
            v.to_string(),
            "every covering number >= 1",
        )?;
        product *= v as f64;
    }
    finite("covering_decomposition_bound", product)
}

/// One-sided risk deviation bound from a base-2 entropy value:
/// `sqrt((2/m)(entropy ln 2 + ln(2/delta))) + 1/m`.
pub fn guaranteed_risk_linfty(m: u64, params: &BoundParams, entropy_log2: f64) -> Result<f64> {
    params.validate()?;
    require(m >= 1, "m", m.to_string(), "m >= 1")?;
    require(
        entropy_log2.is_finite() && entropy_log2 >= 0.0,
        "entropy_log2",
        entropy_log2.to_string(),
        "finite and nonnegative",
    )?;
    let mf = m as f64;
    let v = ((2.0 / mf) * (entropy_log2 * LN_2 + (2.0 / params.delta).ln())).sqrt() + 1.0 / mf;
    finite("guaranteed_risk_linfty", v)
}

/// Positive nonincreasing scale sequence `h(0) >= ... >= h(N) > 0` driving a
/// chaining bound.
#[derive(Debug, Clone)]
pub struct ChainSchedule {
    h: Vec<f64>,
}

impl ChainSchedule {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.len() < 2 {
            return Err(Error::BadSchedule(format!(
                "need at least h(0) and h(1), got {} levels",
                h.len()
            )));
        }
        for (j, &v) in h.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadSchedule(format!(
                    "h({j}) = {v} is not a positive finite number"
                )));
            }
        }
        for j in 1..h.len() {
            if h[j] > h[j - 1] {
                return Err(Error::BadSchedule(format!(
                    "h({j}) = {} exceeds h({}) = {}",
                    h[j],
                    j - 1,
                    h[j - 1]
                )));
            }
        }
        Ok(Self { h })
    }

    /// Geometric schedule `h(j) = h0 ratio^j` down to depth `N`.
    pub fn geometric(h0: f64, ratio: f64, depth: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::BadSchedule(format!("ratio {ratio} outside (0, 1)")));
        }
        if depth == 0 {
            return Err(Error::BadSchedule("depth must be at least 1".to_string()));
        }
        let h = (0..=depth).map(|j| h0 * ratio.powi(j as i32)).collect();
        Self::new(h)
    }

    /// Chaining depth `N`.
    pub fn depth(&self) -> usize {
        self.h.len() - 1
    }

    /// Scale `h(j)` for `0 <= j <= N`.
    pub fn level(&self, j: usize) -> f64 {
        self.h[j]
    }

    pub fn levels(&self) -> &[f64] {
        &self.h
    }

    /// The first scale must dominate the class diameter for a chaining bound
    /// to apply.
    pub fn check_diameter(&self, diameter: f64) -> Result<()> {
        if self.h[0] >= diameter {
            Ok(())
        } else {
            Err(Error::BadSchedule(format!(
                "h(0) = {} is below the class diameter {diameter}",
                self.h[0]
            )))
        }
    }
}

/// Value of a chaining bound together with its per-level summands.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainEvaluation {
    /// Tail level plus the sum of `terms`.
    pub total: f64,
    /// One summand per level `j = 1..=N`, leading factors included.
    pub terms: Vec<f64>,
}

/// Generic chaining bound
/// `h(N) + 2 sum_j (h(j) + h(j-1)) sqrt(ln_cov(h(j)) / n)`, where `ln_cov`
/// maps a radius to the natural log of an internal covering number.
pub fn chaining_bound(
    ln_cov: impl Fn(f64) -> Result<f64>,
    schedule: &ChainSchedule,
    n: u64,
) -> Result<ChainEvaluation> {
    require(n >= 1, "n", n.to_string(), "n >= 1")?;
    let nf = n as f64;
    let mut terms = Vec::with_capacity(schedule.depth());
    for j in 1..=schedule.depth() {
        let value = ln_cov(schedule.level(j))?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Parameter {
                name: "ln_cov",
                value: value.to_string(),
                requirement: "nonnegative finite log covering number",
            });
        }
        let term = 2.0 * (schedule.level(j) + schedule.level(j - 1)) * (value / nf).sqrt();
        terms.push(finite("chaining_bound", term)?);
    }
    let total = finite(
        "chaining_bound",
        schedule.level(schedule.depth()) + terms.iter().sum::<f64>(),
    )?;
    Ok(ChainEvaluation { total, terms })
}

/// Leading constant `12^{d_Ggamma} K_rho C^{d_GC}` of the chained and phase
/// bounds.
pub fn phase_bound_f1(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    finite(
        "phase_bound_f1",
        12f64.powf(params.d_ggamma) * params.k_rho() * (params.c as f64).powf(params.d_gc),
    )
}

/// Margin-free factor `ln(sqrt(C-1)) + 5 (ln(sqrt 6) + (1 + ln 2)/(2 - d))`
/// of the sub-quadratic phase; requires `d_Ggamma < 2`.
pub fn phase_bound_f2(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    require(
        params.d_ggamma < 2.0,
        "d_Ggamma",
        params.d_ggamma.to_string(),
        "d_Ggamma < 2",
    )?;
    let cf = params.c as f64;
    Ok((cf - 1.0).sqrt().ln() + 5.0 * (6f64.sqrt().ln() + (1.0 + LN_2) / (2.0 - params.d_ggamma)))
}

/// Chaining bound specialized to the power-law entropy:
/// `h(N) + 5 sqrt(F1/m) sum_{j in J} ((h(j)+h(j-1)) / h(j)^{d/2}) ln((C-1)(6 gamma/h(j))^5)`
/// with `J = {j : h(j) <= gamma}`; levels above `gamma` contribute nothing.
pub fn chained_entropy_bound(
    params: &BoundParams,
    m: u64,
    schedule: &ChainSchedule,
) -> Result<ChainEvaluation> {
    params.validate()?;
    require(m >= 1, "m", m.to_string(), "m >= 1")?;
    let g = params.gamma_f();
    let d = params.d_ggamma;
    let cf = params.c as f64;
    let factor = 5.0 * (phase_bound_f1(params)? / m as f64).sqrt();
    let mut terms = Vec::with_capacity(schedule.depth());
    for j in 1..=schedule.depth() {
        let hj = schedule.level(j);
        let term = if hj <= g {
            factor * (hj + schedule.level(j - 1)) / hj.powf(d / 2.0)
                * ((cf - 1.0) * (6.0 * g / hj).powi(5)).ln()
        } else {
            0.0
        };
        terms.push(finite("chained_entropy_bound", term)?);
    }
    let total = finite(
        "chained_entropy_bound",
        schedule.level(schedule.depth()) + terms.iter().sum::<f64>(),
    )?;
    Ok(ChainEvaluation { total, terms })
}

/// Power-law Rademacher complexity bound with its three growth phases in the
/// inverse-scale exponent `d`: below 2, at 2, above 2.
pub fn rademacher_phase_bound(params: &BoundParams, m: u64) -> Result<f64> {
    params.validate()?;
    if m < 4 {
        return Err(Error::SampleTooSmall {
            m: m.to_string(),
            threshold: "4".to_string(),
        });
    }
    let mf = m as f64;
    let g = params.gamma_f();
    let d = params.d_ggamma;
    let cf = params.c as f64;
    let f1 = phase_bound_f1(params)?;
    let value = if d < 2.0 {
        10.0 * (1.0 + 2f64.powf(2.0 / (2.0 - d)))
            * (f1 / mf).sqrt()
            * phase_bound_f2(params)?
            * g.powf(1.0 - d / 2.0)
    } else if d == 2.0 {
        let l = mf.log2();
        g * l / mf.sqrt()
            + 15.0
                * (f1 / mf).sqrt()
                * (mf.sqrt() / l).log2().ceil()
                * ((cf - 1.0) * (6.0 * mf.sqrt() / l).powi(5)).ln()
    } else {
        let l = mf.log2();
        g * (l / mf).powf(1.0 / d)
            * (1.0
                + 10.0
                    * (1.0 + 2f64.powf(2.0 / (d - 2.0)))
                    * g.powf(-d / 2.0)
                    * (f1 / l).sqrt()
                    * ((cf - 1.0) * (6.0 * (mf / l).powf(1.0 / d)).powi(5)).ln())
    };
    finite("rademacher_phase_bound", value)
}

/// Two-sided margin-risk deviation bound:
/// `(2/gamma) rademacher_phase_bound + sqrt(ln(1/delta) / (2m))`.
pub fn guaranteed_risk_l2(params: &BoundParams, m: u64) -> Result<f64> {
    let phase = rademacher_phase_bound(params, m)?;
    let v = 2.0 / params.gamma_f() * phase + ((1.0 / params.delta).ln() / (2.0 * m as f64)).sqrt();
    finite("guaranteed_risk_l2", v)
}

/// Packing lower-bound constant `(2^p / (2^{p-1} - 1))^2` for integer
/// `p >= 2`.
pub fn kp_constant(p: u32) -> Result<f64> {
    require(p >= 2, "p", p.to_string(), "p >= 2")?;
    let num = 2f64.powi(p as i32);
    let den = 2f64.powi(p as i32 - 1) - 1.0;
    finite("kp_constant", (num / den).powi(2))
}

/// Lp-norm packing bound `(12 M_F p^{1/7} / eps) ^ (10 p d)` for integer
/// `p >= 2`; a zero dimension gives 1.
pub fn lp_packing_bound(eps: &Q, p: u32, m_f: &Q, d: u64) -> Result<f64> {
    require(p >= 2, "p", p.to_string(), "p >= 2")?;
    require_pos_q(eps, "eps")?;
    require_pos_q(m_f, "M_F")?;
    if d == 0 {
        return Ok(1.0);
    }
    let base = 12.0 * to_f64(m_f) * (p as f64).powf(1.0 / 7.0) / to_f64(eps);
    finite("lp_packing_bound", base.powf((10 * p as u64 * d) as f64))
}
