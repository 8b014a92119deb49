//! Empirical Rademacher complexity, exact or Monte-Carlo, plus the
//! sign-matrix comparison term used to bound the complexity of a margin
//! class by its underlying score class:
//!
//! ```text
//! R_n(F)  = E_sigma [ sup_f (1/n) sum_i sigma_i f(t_i) ]
//! maurer  = 1/(sqrt(2) n) E_sigma [ sup_g sum_i sum_k sigma_{i,k} g_k(x_i) ]
//! ```
//!
//! Exact mode enumerates all sign vectors (2^n, or 2^(nC) for the matrix
//! version) and averages suprema computed in exact rational arithmetic; the
//! final division and the `1/sqrt(2)` factor are the only floating-point
//! steps. Monte-Carlo draws use one counter-addressed stream per draw, so
//! results are reproducible and independent of thread scheduling.

use crate::error::{Error, Result};
use crate::model::{FiniteFunctionClass, Sample, ScoreClass};
use crate::rat::{self, Q};
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    Exact,
    MonteCarlo { draws: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RademacherEstimate {
    pub value: f64,
    pub exact: bool,
    /// Monte-Carlo only.
    pub draws: Option<usize>,
    /// Monte-Carlo only: standard error of the mean.
    pub std_error: Option<f64>,
}

const EXACT_SIGN_CAP: usize = 20;

/// `E_sigma [ sup_f (1/n) sum_i sigma_i f(t_i) ]` over the sample.
pub fn empirical_rademacher(
    f: &ScoreClass,
    sample: &Sample,
    mode: EstimateMode,
) -> Result<RademacherEstimate> {
    let n = sample.len();
    if let EstimateMode::Exact = mode {
        if n > EXACT_SIGN_CAP {
            return Err(Error::CapExceeded {
                what: "sample points in exact sign enumeration",
                got: n,
                cap: EXACT_SIGN_CAP,
            });
        }
    }
    let rows = sample_values(f, sample)?;
    match mode {
        EstimateMode::Exact => {
            let total: Q = (0u64..1 << n)
                .into_par_iter()
                .map(|sigma| signed_sup(&rows, sigma, n))
                .reduce(Q::zero, |a, b| a + b);
            let mean = total / (rat::qi(1i64 << n) * rat::qi(n as i64));
            Ok(RademacherEstimate {
                value: rat::to_f64(&mean),
                exact: true,
                draws: None,
                std_error: None,
            })
        }
        EstimateMode::MonteCarlo { draws, seed } => {
            let rows: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().map(rat::to_f64).collect())
                .collect();
            monte_carlo(draws, seed, n, |bits| {
                signed_sup_f64(&rows, bits, n) / n as f64
            })
        }
    }
}

/// The sign-matrix term `1/(sqrt(2) n) E [ sup_g sum_{i,k} sigma_{i,k}
/// g_k(x_i) ]`, with one sign per (point, category) cell. `xs` holds
/// description indices into the class.
pub fn maurer_rhs(
    g: &FiniteFunctionClass,
    xs: &[usize],
    mode: EstimateMode,
) -> Result<RademacherEstimate> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    for &x in xs {
        if x >= g.num_points() {
            return Err(Error::PointOutOfRange {
                x,
                n: g.num_points(),
            });
        }
    }
    let n = xs.len();
    let c = g.num_categories();
    let cells = n * c;
    if let EstimateMode::Exact = mode {
        if cells > EXACT_SIGN_CAP {
            return Err(Error::CapExceeded {
                what: "sign matrix cells in exact enumeration",
                got: cells,
                cap: EXACT_SIGN_CAP,
            });
        }
    }
    // Flatten per function: cell i*c + k holds g_{k+1}(x_i).
    let rows: Vec<Vec<Q>> = (0..g.num_functions())
        .map(|fi| {
            xs.iter()
                .flat_map(|&x| (1..=c).map(move |y| g.value(fi, x, y).clone()))
                .collect()
        })
        .collect();
    let scale = 1.0 / (2.0_f64.sqrt() * n as f64);
    match mode {
        EstimateMode::Exact => {
            let total: Q = (0u64..1 << cells)
                .into_par_iter()
                .map(|sigma| signed_sup(&rows, sigma, cells))
                .reduce(Q::zero, |a, b| a + b);
            let mean = total / rat::qi(1i64 << cells);
            Ok(RademacherEstimate {
                value: rat::to_f64(&mean) * scale,
                exact: true,
                draws: None,
                std_error: None,
            })
        }
        EstimateMode::MonteCarlo { draws, seed } => {
            let rows: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().map(rat::to_f64).collect())
                .collect();
            monte_carlo(draws, seed, cells, |bits| {
                signed_sup_f64(&rows, bits, cells) * scale
            })
        }
    }
}

fn sample_values(f: &ScoreClass, sample: &Sample) -> Result<Vec<Vec<Q>>> {
    let idx: Vec<usize> = sample
        .iter()
        .map(|z| {
            f.domain_index(z.x, z.y)
                .ok_or(Error::PointNotInDomain { x: z.x, y: z.y })
        })
        .collect::<Result<_>>()?;
    Ok((0..f.num_functions())
        .map(|fi| idx.iter().map(|&d| f.value(fi, d).clone()).collect())
        .collect())
}

/// `sup_f sum_i sigma_i row_f[i]` with bit `i` of `sigma` set meaning `+1`.
fn signed_sup(rows: &[Vec<Q>], sigma: u64, n: usize) -> Q {
    rows.iter()
        .map(|row| {
            let mut s = Q::zero();
            for (i, v) in row.iter().take(n).enumerate() {
                if sigma >> i & 1 == 1 {
                    s += v;
                } else {
                    s -= v;
                }
            }
            s
        })
        .max()
        .expect("classes are non-empty")
}

fn signed_sup_f64(rows: &[Vec<f64>], bits: u64, n: usize) -> f64 {
    rows.iter()
        .map(|row| {
            let mut s = 0.0;
            for (i, v) in row.iter().take(n).enumerate() {
                if bits >> i & 1 == 1 {
                    s += v;
                } else {
                    s -= v;
                }
            }
            s
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Seeded Monte-Carlo mean of `eval` over uniform sign vectors of `width`
/// bits. Draw `d` reads stream `d` of the generator, so the estimate is
/// independent of evaluation order.
fn monte_carlo(
    draws: usize,
    seed: u64,
    width: usize,
    eval: impl Fn(u64) -> f64 + Sync,
) -> Result<RademacherEstimate> {
    if draws == 0 {
        return Err(Error::Parameter {
            name: "draws",
            value: "0".into(),
            requirement: "draws >= 1",
        });
    }
    if width > 64 {
        return Err(Error::CapExceeded {
            what: "sign vector width",
            got: width,
            cap: 64,
        });
    }
    let samples: Vec<f64> = (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(d);
            let bits: u64 = rng.gen::<u64>() & mask(width);
            eval(bits)
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / draws as f64;
    let std_error = if draws > 1 {
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        Some((var / draws as f64).sqrt())
    } else {
        None
    };
    Ok(RademacherEstimate {
        value: mean,
        exact: false,
        draws: Some(draws),
        std_error,
    })
}

fn mask(width: usize) -> u64 {
    if width == 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}
