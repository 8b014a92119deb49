//! Sandwich check for the pairwise-hull bound on the Natarajan dimension.
//!
//! The right-hand side sums fat-shattering dimensions of symmetric convex
//! hulls, which a finite search cannot evaluate exactly. Instead each hull
//! term is bracketed: a finite grid subclass of the hull gives a lower
//! bound, and a per-point width argument gives an upper bound. The check
//! passes or fails only when the bracket decides the comparison; otherwise
//! the instance is reported as undecided.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::VerificationReport;
use crate::dims::{dimension, SearchCaps, ShatterKind};
use crate::error::{Error, Result};
use crate::model::{FiniteFunctionClass, LabeledPoint, ScoreClass, ValueKind};
use crate::rat::{fmt, qi, Q};

/// Most generators kept per pair; `2 * 31 + 1` grid vertices still fit the
/// 64-function search mask.
const MAX_GENERATORS: usize = 31;

/// Lattice points enumerated per pair before falling back to the vertex set.
const GRID_BUDGET: u128 = 200_000;

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of integer vectors in `Z^m` with L1 norm at most `r`.
fn lattice_count(m: usize, r: u32) -> u128 {
    (0..=(m as u128).min(r as u128))
        .map(|k| {
            (1u128 << k)
                .saturating_mul(binom(m as u128, k))
                .saturating_mul(binom(r as u128, k))
        })
        .fold(0u128, u128::saturating_add)
}

/// All rows `sum_j (beta_j / r) u_j` with `sum_j |beta_j| <= r`, deduplicated.
fn grid_rows(gens: &[Vec<Q>], r: u32) -> Vec<Vec<Q>> {
    let n = gens.first().map_or(0, Vec::len);
    let mut rows = BTreeSet::new();
    let mut acc = vec![Q::zero(); n];
    fn rec(
        gens: &[Vec<Q>],
        j: usize,
        rem: i64,
        acc: &mut Vec<Q>,
        r: &Q,
        rows: &mut BTreeSet<Vec<Q>>,
    ) {
        if j == gens.len() {
            rows.insert(acc.iter().map(|t| t / r).collect());
            return;
        }
        for beta in -rem..=rem {
            let b = qi(beta);
            for (a, u) in acc.iter_mut().zip(&gens[j]) {
                *a += &b * u;
            }
            rec(gens, j + 1, rem - beta.abs(), acc, r, rows);
            for (a, u) in acc.iter_mut().zip(&gens[j]) {
                *a -= &b * u;
            }
        }
    }
    rec(gens, 0, r as i64, &mut acc, &qi(r as i64), &mut rows);
    rows.into_iter().collect()
}

/// Distinct nonzero component rows of categories `k` and `l` over the
/// description points.
fn pair_generators(g: &FiniteFunctionClass, k: usize, l: usize) -> Vec<Vec<Q>> {
    let mut seen = BTreeSet::new();
    for f in 0..g.num_functions() {
        for &cat in &[k, l] {
            let row: Vec<Q> = (0..g.num_points())
                .map(|x| g.value(f, x, cat).clone())
                .collect();
            if !row.iter().all(Zero::is_zero) {
                seen.insert(row);
            }
        }
    }
    seen.into_iter().collect()
}

/// Checks that the Natarajan dimension of the margin class is at most the
/// sum over category pairs of the fat-shattering dimensions of the symmetric
/// convex hulls of the paired component classes, all at margin `gamma`.
///
/// Each hull dimension is bracketed from below by a grid subclass (step
/// `1/resolution` in the coefficient simplex) and from above by the count of
/// description points where the hull's value range reaches `gamma`. The
/// report marks the instance failed only when the upper bounds already
/// decide it, and undecided (skipped) when the bracket is too loose.
pub fn verify_lemma9_hull(
    g: &FiniteFunctionClass,
    gamma: &Q,
    resolution: u32,
) -> Result<VerificationReport> {
    if !gamma.is_positive() {
        return Err(Error::GammaNotPositive(fmt(gamma)));
    }
    if resolution == 0 {
        return Err(Error::Parameter {
            name: "resolution",
            value: "0".into(),
            requirement: "at least 1",
        });
    }
    let caps = SearchCaps {
        max_domain: 12,
        max_functions: 64,
    };
    let c = g.num_categories();
    let margin = g.margin_class();
    let (lhs, _) = dimension(&margin, ShatterKind::Natarajan, gamma, &caps)?;

    let mut notes = Vec::new();
    let mut lower_sum: usize = 0;
    let mut upper_sum: usize = 0;
    for k in 1..=c {
        for l in (k + 1)..=c {
            let mut gens = pair_generators(g, k, l);
            if gens.len() > MAX_GENERATORS {
                gens.truncate(MAX_GENERATORS);
                notes.push(format!(
                    "pair ({k},{l}): generator set truncated to {MAX_GENERATORS}"
                ));
            }
            let mut r = resolution;
            if lattice_count(gens.len(), r) > GRID_BUDGET {
                r = 1;
                notes.push(format!(
                    "pair ({k},{l}): grid at resolution {resolution} too large, using vertices"
                ));
            }
            let mut rows = grid_rows(&gens, r);
            if rows.len() > 64 {
                r = 1;
                rows = grid_rows(&gens, r);
                notes.push(format!(
                    "pair ({k},{l}): over 64 distinct grid rows, using vertices"
                ));
            }
            let lower = if gens.is_empty() {
                0
            } else {
                let domain: Vec<LabeledPoint> = (0..g.num_points())
                    .map(|x| LabeledPoint::new(x, 1))
                    .collect();
                let names = (0..rows.len()).map(|i| format!("h{i}")).collect();
                let m = g.bound().clone();
                let sub = ScoreClass::new(
                    domain,
                    c,
                    names,
                    rows,
                    ValueKind::Real,
                    -m.clone(),
                    m,
                    false,
                )?;
                let (d, cert) = dimension(&sub, ShatterKind::Fat, gamma, &caps)?;
                if let Some(cert) = cert {
                    if !cert.replay(&sub)? {
                        return Err(Error::Internal(
                            "hull subclass certificate failed to replay".into(),
                        ));
                    }
                }
                d
            };
            let upper = (0..g.num_points())
                .filter(|&x| {
                    gens.iter()
                        .map(|u| u[x].abs())
                        .max()
                        .is_some_and(|v| v >= *gamma)
                })
                .count();
            notes.push(format!(
                "pair ({k},{l}): hull dimension in [{lower}, {upper}]"
            ));
            lower_sum += lower;
            upper_sum += upper;
        }
    }

    let (failures, skipped, slack) = if lhs <= lower_sum {
        (0, 0, Some(lower_sum as f64 - lhs as f64))
    } else if lhs > upper_sum {
        notes.push(format!(
            "natarajan dimension {lhs} exceeds the hull upper bounds ({upper_sum})"
        ));
        (1, 0, Some(upper_sum as f64 - lhs as f64))
    } else {
        notes.push(format!(
            "undecided: natarajan dimension {lhs} inside hull bracket [{lower_sum}, {upper_sum}]"
        ));
        (0, 1, None)
    };
    Ok(VerificationReport {
        lemma_id: "lemma9".into(),
        seed: 0,
        instances: 1,
        failures,
        skipped,
        worst_slack: slack,
        notes,
    })
}
