//! Seeded random instances: small exact-rational classes, the worked
//! two-function example, and margin multi-class SVMs over a finite ball.

use num::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FiniteFunctionClass;
use crate::rat::{self, fmt, q, qi, Q};

/// Score values used by the default generator: multiples of 1/8 in [-1, 1].
pub fn default_value_grid() -> Vec<Q> {
    (-8..=8).map(|n| q(n, 8)).collect()
}

/// A uniformly random class on `num_points` named points with `c` categories
/// and `num_functions` functions, every score drawn from `value_grid`.
/// The declared bound is `max(1, max |grid value|)`.
pub fn gen_class(
    seed: u64,
    num_points: usize,
    c: usize,
    num_functions: usize,
    value_grid: &[Q],
) -> Result<FiniteFunctionClass> {
    if value_grid.is_empty() {
        return Err(Error::Parameter {
            name: "value_grid",
            value: "[]".into(),
            requirement: "at least one score value",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = value_grid.iter().map(|v| v.abs()).max().unwrap().max(qi(1));
    let points = (0..num_points).map(|i| format!("x{i}")).collect();
    let functions = (0..num_functions)
        .map(|f| {
            let table = (0..num_points)
                .map(|_| {
                    (0..c)
                        .map(|_| value_grid[rng.gen_range(0..value_grid.len())].clone())
                        .collect()
                })
                .collect();
            (format!("g{f}"), table)
        })
        .collect();
    FiniteFunctionClass::new(points, c, bound, functions)
}

/// The two-function, one-point, three-category class whose dimensions are
/// known exactly: fat 1, Graph 0, Natarajan 0 at margin 1/4.
pub fn example_class() -> FiniteFunctionClass {
    let g1 = vec![vec![q(3, 4), q(1, 4), qi(0)]];
    let g2 = vec![vec![qi(0), q(1, 2), q(1, 2)]];
    FiniteFunctionClass::new(
        vec!["x".into()],
        3,
        qi(1),
        vec![("g1".into(), g1), ("g2".into(), g2)],
    )
    .expect("fixed table is well formed")
}

/// Parameters of a sampled linear multi-class family: weight matrices with
/// rows summing to zero, Frobenius norm at most `lambda`, applied to points
/// of norm at most `lambda_x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvmSampleSpec {
    pub feature_dim: usize,
    pub num_functions: usize,
    #[serde(with = "rat::serde_q")]
    pub lambda: Q,
    #[serde(with = "rat::serde_q")]
    pub lambda_x: Q,
    pub c: usize,
    pub seed: u64,
}

impl SvmSampleSpec {
    fn validate(&self) -> Result<()> {
        if self.c < 3 {
            return Err(Error::TooFewCategories(self.c));
        }
        if self.feature_dim == 0 || self.feature_dim > 8 {
            return Err(Error::Parameter {
                name: "feature_dim",
                value: self.feature_dim.to_string(),
                requirement: "between 1 and 8",
            });
        }
        if self.num_functions == 0 {
            return Err(Error::Parameter {
                name: "num_functions",
                value: "0".into(),
                requirement: "at least one function",
            });
        }
        if !self.lambda.is_positive() {
            return Err(Error::Parameter {
                name: "lambda",
                value: fmt(&self.lambda),
                requirement: "positive",
            });
        }
        if !self.lambda_x.is_positive() {
            return Err(Error::Parameter {
                name: "lambda_x",
                value: fmt(&self.lambda_x),
                requirement: "positive",
            });
        }
        Ok(())
    }
}

fn norm_sq(v: &[Q]) -> Q {
    v.iter().map(|t| t * t).sum()
}

/// Scale factor `r` with `r^2 s <= target^2` and `r` close to `target/sqrt(s)`.
fn shrink_factor(target: &Q, s: &Q) -> Q {
    rat::sqrt_floor_dyadic(&(target * target / s), 20)
}

/// Draws a coordinate grid vector with entries in `{-4..4}/4`, rejecting the
/// origin-only case by falling back to a unit basis vector.
fn draw_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    let mut v: Vec<Q> = (0..dim).map(|_| q(rng.gen_range(-4..=4), 4)).collect();
    if v.iter().all(Zero::is_zero) {
        v[0] = qi(1);
    }
    v
}

/// A linear multi-class family evaluated on three fixed sample points.
///
/// Each function is a `c x feature_dim` weight matrix `W` with
/// `sum_k W_k = 0` and `||W||_F <= lambda`; its score table is
/// `g(x, k) = <W_k, x>` over points with `||x|| <= lambda_x`. All scaling
/// uses dyadic square-root floors, so the norm constraints hold exactly.
pub fn gen_svm_class(spec: &SvmSampleSpec) -> Result<FiniteFunctionClass> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let num_points = 3;
    let dim = spec.feature_dim;

    let points: Vec<Vec<Q>> = (0..num_points)
        .map(|_| {
            let mut x = draw_direction(&mut rng, dim);
            let s = norm_sq(&x);
            if s > &spec.lambda_x * &spec.lambda_x {
                let r = shrink_factor(&spec.lambda_x, &s);
                for t in &mut x {
                    *t *= &r;
                }
            }
            x
        })
        .collect();

    let mut functions = Vec::with_capacity(spec.num_functions);
    for f in 0..spec.num_functions {
        let mut w: Vec<Vec<Q>> = (0..spec.c).map(|_| draw_direction(&mut rng, dim)).collect();
        let c_q = qi(spec.c as i64);
        for j in 0..dim {
            let mean: Q = w.iter().map(|row| row[j].clone()).sum::<Q>() / &c_q;
            for row in &mut w {
                row[j] -= &mean;
            }
        }
        let s: Q = w.iter().map(|row| norm_sq(row)).sum();
        if s > &spec.lambda * &spec.lambda {
            let r = shrink_factor(&spec.lambda, &s);
            for row in &mut w {
                for t in row {
                    *t *= &r;
                }
            }
        }
        let table: Vec<Vec<Q>> = points
            .iter()
            .map(|x| {
                w.iter()
                    .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        functions.push((format!("g{f}"), table));
    }

    let bound = (&spec.lambda * &spec.lambda_x).max(qi(1));
    let names = (0..num_points).map(|i| format!("x{i}")).collect();
    FiniteFunctionClass::new(names, spec.c, bound, functions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::margin_value;

    #[test]
    fn grid_spans_symmetric_eighths() {
        let grid = default_value_grid();
        assert_eq!(grid.len(), 17);
        assert_eq!(grid[0], qi(-1));
        assert_eq!(grid[16], qi(1));
        assert!(grid.contains(&Q::zero()));
    }

    #[test]
    fn gen_class_is_deterministic_and_well_formed() {
        let grid = default_value_grid();
        let a = gen_class(5, 2, 3, 4, &grid).unwrap();
        let b = gen_class(5, 2, 3, 4, &grid).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.num_points(), 2);
        assert_eq!(a.num_categories(), 3);
        assert_eq!(a.num_functions(), 4);
        assert_eq!(*a.bound(), qi(1));
        let c = gen_class(6, 2, 3, 4, &grid).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn gen_class_rejects_empty_grid() {
        assert!(matches!(
            gen_class(0, 1, 3, 1, &[]),
            Err(Error::Parameter {
                name: "value_grid",
                ..
            })
        ));
    }

    #[test]
    fn example_matches_published_margins() {
        let g = example_class();
        let rho1: Vec<Q> = (1..=3).map(|y| margin_value(g.row(0, 0), y)).collect();
        let rho2: Vec<Q> = (1..=3).map(|y| margin_value(g.row(1, 0), y)).collect();
        assert_eq!(rho1, vec![q(1, 4), q(-1, 4), q(-3, 8)]);
        assert_eq!(rho2, vec![q(-1, 4), qi(0), qi(0)]);
    }

    #[test]
    fn svm_rows_sum_to_zero_and_norms_hold() {
        let spec = SvmSampleSpec {
            feature_dim: 3,
            num_functions: 4,
            lambda: qi(2),
            lambda_x: qi(1),
            c: 3,
            seed: 11,
        };
        let g = gen_svm_class(&spec).unwrap();
        assert_eq!(g.num_points(), 3);
        assert_eq!(*g.bound(), qi(2));
        for f in 0..g.num_functions() {
            for x in 0..g.num_points() {
                let s: Q = g.row(f, x).iter().sum();
                assert!(s.is_zero(), "scores at a point sum to zero");
            }
        }
        let h = gen_svm_class(&spec).unwrap();
        assert_eq!(g.to_json(), h.to_json());
    }

    #[test]
    fn svm_scores_obey_cauchy_schwarz_bound() {
        for seed in 0..20 {
            let spec = SvmSampleSpec {
                feature_dim: 2,
                num_functions: 3,
                lambda: qi(1),
                lambda_x: q(1, 2),
                c: 4,
                seed,
            };
            let g = gen_svm_class(&spec).unwrap();
            let m = &spec.lambda * &spec.lambda_x;
            for f in 0..g.num_functions() {
                for x in 0..g.num_points() {
                    for y in 1..=g.num_categories() {
                        assert!(g.value(f, x, y).abs() <= m);
                    }
                }
            }
        }
    }

    #[test]
    fn svm_spec_validation() {
        let base = SvmSampleSpec {
            feature_dim: 1,
            num_functions: 1,
            lambda: qi(1),
            lambda_x: qi(1),
            c: 3,
            seed: 0,
        };
        let mut s = base.clone();
        s.c = 2;
        assert!(gen_svm_class(&s).is_err());
        let mut s = base.clone();
        s.feature_dim = 9;
        assert!(gen_svm_class(&s).is_err());
        let mut s = base.clone();
        s.lambda = qi(0);
        assert!(gen_svm_class(&s).is_err());
        let mut s = base;
        s.lambda_x = qi(-1);
        assert!(gen_svm_class(&s).is_err());
    }

    #[test]
    fn svm_spec_round_trips_through_serde() {
        let spec = SvmSampleSpec {
            feature_dim: 2,
            num_functions: 3,
            lambda: q(3, 2),
            lambda_x: q(1, 2),
            c: 3,
            seed: 9,
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: SvmSampleSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
