//! One verification suite per checkable statement. Each instance pairs an
//! exhaustive search oracle with the closed-form side of an inequality and
//! records failures, skips, and the worst slack.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gen::{default_value_grid, example_class, gen_class, gen_svm_class, SvmSampleSpec};
use super::hull::verify_lemma9_hull;
use super::{InstanceOutcome, VerifyConfig};
use crate::bounds::{
    fat_decomposition_bound, graph_to_natarajan_bound, kp_constant, lp_packing_bound,
    packing_bound_l2_g, packing_bound_l2_n, packing_bound_linfty_g, packing_bound_linfty_g_old,
    packing_bound_linfty_n, svm_natarajan_bound,
};
use crate::dims::{dimension, is_shattered, strong_dimension, ShatterKind, Witness};
use crate::error::{Error, Result};
use crate::metrics::{
    dist, packing_number, proper_covering_number, uniform_packing, PNorm, PackingMode, Threshold,
};
use crate::model::{FiniteFunctionClass, LabeledPoint, Sample, ScoreClass};
use crate::rademacher::{empirical_rademacher, maurer_rhs, EstimateMode};
use crate::rat::{fmt, q, qi, to_f64, Q};

pub(super) type SuiteFn = fn(usize, &VerifyConfig) -> Result<InstanceOutcome>;

/// Suite ids accepted by [`super::verify`].
pub fn all_suite_ids() -> &'static [&'static str] {
    &[
        "example1",
        "ordering",
        "lemma1",
        "lemma2",
        "lemma3",
        "lemma4",
        "lemma5",
        "lemma6",
        "lemma7",
        "lemma8",
        "lemma9",
        "lemma10",
        "l5_le_l4",
        "kolmogorov",
        "discretization",
        "strong_vs_margin",
        "separation",
        "kp",
        "lp_sauer_shelah",
        "corollary1",
    ]
}

/// Instance count and runner for a suite id.
pub(super) fn plan(lemma_id: &str, cfg: &VerifyConfig) -> Result<(usize, SuiteFn)> {
    Ok(match lemma_id {
        "example1" => (1, example1 as SuiteFn),
        "ordering" => (cfg.instances, ordering),
        "lemma1" => (cfg.instances, lemma1),
        "lemma2" => (cfg.instances, lemma2),
        "lemma3" => (cfg.instances, lemma3),
        "lemma4" => (cfg.instances, lemma4),
        "lemma5" => (cfg.instances, lemma5),
        "lemma6" => (cfg.instances, lemma6),
        "lemma7" => (cfg.instances, lemma7),
        "lemma8" => (cfg.instances, lemma8),
        "lemma9" => (cfg.instances, lemma9),
        "lemma10" => (cfg.instances, lemma10),
        "l5_le_l4" => (L5_GRID_LEN, l5_le_l4),
        "kolmogorov" => (cfg.instances, kolmogorov),
        "discretization" => (cfg.instances, discretization),
        "strong_vs_margin" => (cfg.instances, strong_vs_margin),
        "separation" => (cfg.instances, separation),
        "kp" => (cfg.instances, kp),
        "lp_sauer_shelah" => (cfg.instances, lp_sauer_shelah),
        "corollary1" => (cfg.instances, corollary1),
        other => return Err(Error::UnknownLemma(other.into())),
    })
}

const PACKING_CAP: usize = 64;
const SAMPLE_BUDGET: usize = 5_000;
const TOL: f64 = 1e-12;

struct Checker {
    checks: usize,
    failures: usize,
    skipped: bool,
    slack: Option<f64>,
    notes: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            failures: 0,
            skipped: false,
            slack: None,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            self.notes.push(format!("failed: {}", describe()));
        }
    }

    fn slack(&mut self, s: f64) {
        self.slack = Some(self.slack.map_or(s, |w| w.min(s)));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn skip(mut self, why: &str) -> InstanceOutcome {
        self.skipped = true;
        self.notes.push(format!("skipped: {why}"));
        self.finish()
    }

    fn finish(self) -> InstanceOutcome {
        InstanceOutcome {
            checks: self.checks,
            failures: self.failures,
            skipped: self.skipped,
            slack: self.slack,
            notes: self.notes,
        }
    }
}

fn rng_for(cfg: &VerifyConfig, instance: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(instance as u64);
    rng
}

fn gammas() -> [Q; 3] {
    [q(1, 8), q(1, 4), q(1, 2)]
}

fn draw_gamma(rng: &mut ChaCha8Rng) -> Q {
    gammas()[rng.gen_range(0..3)].clone()
}

fn draw_class(rng: &mut ChaCha8Rng) -> Result<FiniteFunctionClass> {
    let points = rng.gen_range(1..=2);
    let funcs = rng.gen_range(2..=8);
    gen_class(rng.gen(), points, 3, funcs, &default_value_grid())
}

fn draw_sample(rng: &mut ChaCha8Rng, g: &FiniteFunctionClass, max_len: usize) -> Result<Sample> {
    let len = rng.gen_range(1..=max_len);
    let entries = (0..len)
        .map(|_| {
            LabeledPoint::new(
                rng.gen_range(0..g.num_points()),
                rng.gen_range(1..=g.num_categories()),
            )
        })
        .collect();
    Sample::new(entries)
}

fn qpow(x: &Q, k: u32) -> Q {
    let mut acc = qi(1);
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// The class restricted to two of its functions, everything else unchanged.
fn two_function_subclass(f: &ScoreClass, a: usize, b: usize) -> Result<ScoreClass> {
    let names = vec![f.names()[a].clone(), f.names()[b].clone()];
    let rows = [a, b]
        .iter()
        .map(|&fi| {
            (0..f.domain().len())
                .map(|d| f.value(fi, d).clone())
                .collect()
        })
        .collect();
    let (lo, hi) = f.range();
    ScoreClass::new(
        f.domain().to_vec(),
        f.num_categories(),
        names,
        rows,
        f.value_kind(),
        lo.clone(),
        hi.clone(),
        f.is_margin_structured(),
    )
}

fn example1(_instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut ck = Checker::new();
    let g = example_class();
    let margin = g.margin_class();
    let rows = [
        (0usize, [q(1, 4), q(-1, 4), q(-3, 8)]),
        (1, [q(-1, 4), qi(0), qi(0)]),
    ];
    for (f, want) in &rows {
        for (k, w) in want.iter().enumerate() {
            let y = k + 1;
            ck.check(margin.value_at(*f, 0, y) == Some(w), || {
                format!("margin row {f} category {y} is not {}", fmt(w))
            });
        }
    }
    let gamma = q(1, 4);
    let (fat, fat_cert) = dimension(&margin, ShatterKind::Fat, &gamma, &cfg.caps)?;
    ck.check(fat == 1, || format!("fat dimension {fat}, expected 1"));
    if let Some(cert) = fat_cert {
        ck.check(cert.replay(&margin)?, || "fat certificate replay".into());
    }
    let (gr, _) = dimension(&margin, ShatterKind::Graph, &gamma, &cfg.caps)?;
    ck.check(gr == 0, || format!("graph dimension {gr}, expected 0"));
    let (na, _) = dimension(&margin, ShatterKind::Natarajan, &gamma, &cfg.caps)?;
    ck.check(na == 0, || format!("natarajan dimension {na}, expected 0"));
    Ok(ck.finish())
}

fn ordering(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let mut ck = Checker::new();
    for gamma in gammas() {
        let (dn, cn) = dimension(&margin, ShatterKind::Natarajan, &gamma, &cfg.caps)?;
        let (dg, cg) = dimension(&margin, ShatterKind::Graph, &gamma, &cfg.caps)?;
        let (df, cf) = dimension(&margin, ShatterKind::Fat, &gamma, &cfg.caps)?;
        ck.check(dn <= dg, || {
            format!("natarajan {dn} > graph {dg} at gamma {}", fmt(&gamma))
        });
        ck.check(dg <= df, || {
            format!("graph {dg} > fat {df} at gamma {}", fmt(&gamma))
        });
        for (cert, label) in [(cn, "natarajan"), (cg, "graph"), (cf, "fat")] {
            if let Some(cert) = cert {
                ck.check(cert.replay(&margin)?, || {
                    format!("{label} certificate replay at gamma {}", fmt(&gamma))
                });
            }
        }
        ck.slack((dg as f64 - dn as f64).min(df as f64 - dg as f64));
    }
    Ok(ck.finish())
}

fn lemma1(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let sample = draw_sample(&mut rng, &g, 3)?;
    let c = g.num_categories();
    let mut ck = Checker::new();
    for p in [PNorm::P(1), PNorm::P(2), PNorm::Infinity] {
        for eps in [q(1, 4), q(1, 2)] {
            let thr = Threshold::from_eps(&eps, p)?;
            let n_sq = proper_covering_number(&squashed, &sample, &thr, PACKING_CAP)?.value;
            let n_margin = proper_covering_number(&margin, &sample, &thr, PACKING_CAP)?.value;
            let comp_thr = match p {
                PNorm::P(k) => Threshold::from_power(qpow(&eps, k) / qi(c as i64), p)?,
                PNorm::Infinity => thr,
            };
            let mut product: u64 = 1;
            for k in 1..=c {
                let comp = g.component_class(k)?;
                let comp_sample =
                    Sample::new(sample.iter().map(|z| LabeledPoint::new(z.x, k)).collect())?;
                product *= proper_covering_number(&comp, &comp_sample, &comp_thr, PACKING_CAP)?
                    .value as u64;
            }
            ck.check(n_sq <= n_margin, || {
                format!("squashed covering {n_sq} > margin covering {n_margin}")
            });
            ck.check(n_margin as u64 <= product, || {
                format!("margin covering {n_margin} > component product {product}")
            });
            ck.slack(product as f64 - n_margin as f64);
        }
    }
    Ok(ck.finish())
}

fn lemma2(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let mut ck = Checker::new();
    for gamma in gammas() {
        let dg = dimension(&margin, ShatterKind::Graph, &gamma, &cfg.caps)?.0 as u64;
        let dn = dimension(&margin, ShatterKind::Natarajan, &gamma, &cfg.caps)?.0 as u64;
        ck.check(dn <= dg, || {
            format!("natarajan {dn} > graph {dg} at gamma {}", fmt(&gamma))
        });
        if dg >= 2 || dn >= 1 {
            let rhs = graph_to_natarajan_bound(g.num_categories(), dn)?;
            ck.check(dg as f64 <= rhs, || {
                format!(
                    "graph {dg} above natarajan comparison {rhs:.6} at gamma {}",
                    fmt(&gamma)
                )
            });
            ck.slack(rhs - dg as f64);
        }
    }
    Ok(ck.finish())
}

fn lemma3(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let c = g.num_categories();
    let mut ck = Checker::new();
    for eps in [&gamma * q(1, 2), &gamma * q(1, 4)] {
        let d_sq = dimension(&squashed, ShatterKind::Fat, &eps, &cfg.caps)?.0;
        let d_m = dimension(&margin, ShatterKind::Fat, &eps, &cfg.caps)?.0;
        ck.check(d_sq <= d_m, || {
            format!(
                "squashed fat {d_sq} > margin fat {d_m} at eps {}",
                fmt(&eps)
            )
        });
        let scale = to_f64(&eps) / (144.0 * (2.0 * c as f64).log2());
        let reduced = Q::from_float(scale * (1.0 - 1e-9))
            .ok_or_else(|| Error::Internal("reduced scale is not finite".into()))?;
        let per_category: Vec<u64> = (1..=c)
            .map(|k| {
                Ok(dimension(
                    &g.component_class(k)?,
                    ShatterKind::Fat,
                    &reduced,
                    &cfg.caps,
                )?
                .0 as u64)
            })
            .collect::<Result<_>>()?;
        let rhs = fat_decomposition_bound(&eps, c, g.bound(), &per_category)?;
        ck.check((d_m as f64) <= rhs, || {
            format!("margin fat {d_m} above decomposition bound {rhs:.6}")
        });
        ck.slack(rhs - d_m as f64);
    }
    ck.note("per-category scale rounded down, which can only enlarge the right-hand side");
    Ok(ck.finish())
}

#[derive(Clone, Copy, PartialEq)]
enum PackKind {
    GraphOld,
    GraphNew,
    Natarajan,
}

fn linfty_packing(instance: usize, cfg: &VerifyConfig, which: PackKind) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let mut ck = Checker::new();
    for eps in [gamma.clone(), &gamma * q(1, 2)] {
        let quarter = &eps * q(1, 4);
        let kind = match which {
            PackKind::Natarajan => ShatterKind::Natarajan,
            _ => ShatterKind::Graph,
        };
        let d = dimension(&margin, kind, &quarter, &cfg.caps)?.0 as u64;
        let thr = Threshold::from_eps(&eps, PNorm::Infinity)?;
        let lo = d.max(1) as usize;
        for n in lo..=lo.max(4) {
            let up = uniform_packing(&squashed, n, &thr, PACKING_CAP, SAMPLE_BUDGET, rng.gen())?;
            if !up.exhaustive {
                return Ok(ck.skip("packing search over samples was not exhaustive"));
            }
            let m = up.packing.value as f64;
            let (rhs, strict) = match which {
                PackKind::GraphOld => {
                    (packing_bound_linfty_g_old(&eps, &gamma, n as u64, d)?, true)
                }
                PackKind::GraphNew => (packing_bound_linfty_g(&eps, &gamma, n as u64, d)?, false),
                PackKind::Natarajan => (
                    packing_bound_linfty_n(&eps, &gamma, n as u64, g.num_categories(), d)?,
                    false,
                ),
            };
            let ok = if strict { m < rhs } else { m <= rhs };
            ck.check(ok, || {
                format!(
                    "sup-norm packing {m} vs bound {rhs:.6} at eps {} gamma {} n {n} d {d}",
                    fmt(&eps),
                    fmt(&gamma)
                )
            });
            ck.slack(rhs - m);
        }
    }
    Ok(ck.finish())
}

fn l2_packing(instance: usize, cfg: &VerifyConfig, graph: bool) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let mut ck = Checker::new();
    for eps in [gamma.clone(), &gamma * q(1, 2)] {
        let (kind, scale) = if graph {
            (ShatterKind::Graph, &eps / qi(24))
        } else {
            (ShatterKind::Natarajan, &eps / qi(12))
        };
        let d = dimension(&margin, kind, &scale, &cfg.caps)?.0 as u64;
        let evaluated = if graph {
            packing_bound_l2_g(&eps, &gamma, d)
        } else {
            packing_bound_l2_n(&eps, &gamma, g.num_categories(), d)
        };
        let rhs = match evaluated {
            Ok(v) => v,
            Err(Error::NonFinite(_)) => {
                ck.note(format!(
                    "bound overflows double precision at eps {} gamma {} d {d}; any packing count is below it",
                    fmt(&eps),
                    fmt(&gamma)
                ));
                f64::INFINITY
            }
            Err(e) => return Err(e),
        };
        let thr = Threshold::from_eps(&eps, PNorm::P(2))?;
        for n in 1..=4 {
            let up = uniform_packing(&squashed, n, &thr, PACKING_CAP, SAMPLE_BUDGET, rng.gen())?;
            if !up.exhaustive {
                return Ok(ck.skip("packing search over samples was not exhaustive"));
            }
            let m = up.packing.value as f64;
            ck.check(m <= rhs, || {
                format!(
                    "l2 packing {m} vs bound {rhs:.6} at eps {} gamma {} n {n} d {d}",
                    fmt(&eps),
                    fmt(&gamma)
                )
            });
            if rhs.is_finite() {
                ck.slack(rhs - m);
            }
        }
    }
    Ok(ck.finish())
}

fn lemma4(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    linfty_packing(instance, cfg, PackKind::GraphOld)
}

fn lemma5(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    linfty_packing(instance, cfg, PackKind::GraphNew)
}

fn lemma6(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    l2_packing(instance, cfg, true)
}

fn lemma7(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    linfty_packing(instance, cfg, PackKind::Natarajan)
}

fn lemma8(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    l2_packing(instance, cfg, false)
}

fn lemma9(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let points = rng.gen_range(1..=2);
    let funcs = rng.gen_range(2..=3);
    let g = gen_class(rng.gen(), points, 3, funcs, &default_value_grid())?;
    let gamma = draw_gamma(&mut rng);
    let rep = verify_lemma9_hull(&g, &gamma, 2)?;
    let mut ck = Checker::new();
    ck.checks = 1;
    ck.failures = rep.failures;
    ck.skipped = rep.skipped > 0;
    ck.slack = rep.worst_slack;
    for note in rep.notes {
        if note.contains("undecided") || note.contains("exceeds") {
            ck.note(note);
        }
    }
    Ok(ck.finish())
}

fn lemma10(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let spec = SvmSampleSpec {
        feature_dim: rng.gen_range(1..=3),
        num_functions: rng.gen_range(2..=5),
        lambda: qi(rng.gen_range(1..=2)),
        lambda_x: [q(1, 2), qi(1)][rng.gen_range(0..2)].clone(),
        c: 3,
        seed: rng.gen(),
    };
    let g = gen_svm_class(&spec)?;
    let margin = g.margin_class();
    let reach = &spec.lambda * &spec.lambda_x;
    let mut ck = Checker::new();
    for gamma in gammas() {
        if gamma > reach {
            continue;
        }
        let d = dimension(&margin, ShatterKind::Natarajan, &gamma, &cfg.caps)?.0;
        let rhs = svm_natarajan_bound(spec.c, &spec.lambda, &spec.lambda_x, &gamma)?;
        ck.check(d as f64 <= rhs, || {
            format!(
                "natarajan {d} above linear-class bound {rhs:.6} at gamma {}",
                fmt(&gamma)
            )
        });
        ck.slack(rhs - d as f64);
    }
    Ok(ck.finish())
}

const L5_GRID_GAMMAS: [(i64, i64); 4] = [(1, 8), (1, 4), (1, 2), (1, 1)];
const L5_GRID_RATIOS: [(i64, i64); 4] = [(3, 2), (2, 1), (4, 1), (8, 1)];
const L5_GRID_DIMS: [u64; 3] = [1, 2, 3];
const L5_GRID_LEN: usize = 4 * 4 * 3 * 3;

fn l5_le_l4(instance: usize, _cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let ni = instance % 3;
    let rest = instance / 3;
    let di = rest % 3;
    let rest = rest / 3;
    let ri = rest % 4;
    let gi = rest / 4;
    let gamma = q(L5_GRID_GAMMAS[gi].0, L5_GRID_GAMMAS[gi].1);
    let ratio = q(L5_GRID_RATIOS[ri].0, L5_GRID_RATIOS[ri].1);
    let eps = &gamma / &ratio;
    let d = L5_GRID_DIMS[di];
    let n = [d, 2 * d, 4 * d][ni];
    let old = packing_bound_linfty_g_old(&eps, &gamma, n, d)?;
    let new = packing_bound_linfty_g(&eps, &gamma, n, d)?;
    let mut ck = Checker::new();
    ck.check(new <= old, || {
        format!(
            "new bound {new:.6e} above old bound {old:.6e} at gamma {} eps {} d {d} n {n}",
            fmt(&gamma),
            fmt(&eps)
        )
    });
    ck.slack(old - new);
    if instance == 0 {
        let o = packing_bound_linfty_g_old(&qi(1), &qi(1), 4, 2)?;
        let w = packing_bound_linfty_g(&qi(1), &qi(1), 4, 2)?;
        if w > o {
            ck.note(format!(
                "at eps = gamma the comparison reverses: new {w:.3e} > old {o:.3e} (gamma 1, d 2, n 4)"
            ));
        }
    }
    Ok(ck.finish())
}

fn kolmogorov(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let sample = draw_sample(&mut rng, &g, 3)?;
    let mut ck = Checker::new();
    for p in [PNorm::P(1), PNorm::P(2), PNorm::Infinity] {
        for eps in [q(1, 4), q(1, 2)] {
            let wide = Threshold::from_eps(&(&eps * qi(2)), p)?;
            let tight = Threshold::from_eps(&eps, p)?;
            let m2 =
                packing_number(&margin, &sample, &wide, PackingMode::Exact, PACKING_CAP)?.value;
            let cov = proper_covering_number(&margin, &sample, &tight, PACKING_CAP)?.value;
            let m1 =
                packing_number(&margin, &sample, &tight, PackingMode::Exact, PACKING_CAP)?.value;
            ck.check(m2 <= cov, || {
                format!(
                    "packing at doubled scale {m2} > covering {cov} (eps {})",
                    fmt(&eps)
                )
            });
            ck.check(cov <= m1, || {
                format!("covering {cov} > packing {m1} (eps {})", fmt(&eps))
            });
            ck.slack((cov as f64 - m2 as f64).min(m1 as f64 - cov as f64));
        }
    }
    Ok(ck.finish())
}

fn discretization(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let sample = draw_sample(&mut rng, &g, 3)?;
    let nf = squashed.num_functions();
    let mut ck = Checker::new();
    for eps in [gamma.clone(), &gamma * q(1, 2)] {
        for sep in [1i64, 2] {
            let eta = &eps / qi(sep + 1);
            let disc = squashed.discretize(&eta)?;
            let thr_eps = Threshold::from_eps(&eps, PNorm::P(2))?;
            let thr_sep = Threshold::from_eps(&qi(sep), PNorm::P(2))?;
            for a in 0..nf {
                for b in (a + 1)..nf {
                    let original = dist(&squashed, a, b, &sample, PNorm::P(2))?;
                    if original.ge(&thr_eps) {
                        let rounded = dist(&disc, a, b, &sample, PNorm::P(2))?;
                        ck.check(rounded.ge(&thr_sep), || {
                            format!(
                                "pair ({a},{b}): l2 distance {:.6} at step {} fell below {sep}",
                                rounded.approx(),
                                fmt(&eta)
                            )
                        });
                    }
                }
            }
        }
        let eta = &eps * q(1, 2);
        let disc = squashed.discretize(&eta)?;
        let m_orig = packing_number(
            &squashed,
            &sample,
            &Threshold::from_eps(&eps, PNorm::Infinity)?,
            PackingMode::Exact,
            PACKING_CAP,
        )?
        .value;
        let m_disc = packing_number(
            &disc,
            &sample,
            &Threshold::from_eps(&qi(2), PNorm::Infinity)?,
            PackingMode::Exact,
            PACKING_CAP,
        )?
        .value;
        ck.check(m_orig <= m_disc, || {
            format!(
                "sup-norm packing {m_orig} at eps {} > discretized packing {m_disc} at 2",
                fmt(&eps)
            )
        });
        ck.slack(m_disc as f64 - m_orig as f64);
    }
    Ok(ck.finish())
}

fn strong_vs_margin(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let eta = &gamma * q(1, 2);
    let eps = &eta * q(1, 2);
    let disc = margin.discretize(&eta)?;
    let mut ck = Checker::new();
    let (sg, sg_cert) = strong_dimension(&disc, ShatterKind::StrongGraph, &cfg.caps)?;
    let (sn, sn_cert) = strong_dimension(&disc, ShatterKind::StrongNatarajan, &cfg.caps)?;
    let eg = dimension(&margin, ShatterKind::Graph, &eps, &cfg.caps)?.0;
    let en = dimension(&margin, ShatterKind::Natarajan, &eps, &cfg.caps)?.0;
    ck.check(sg <= eg, || {
        format!(
            "strong graph {sg} > margin graph {eg} (eta {}, eps {})",
            fmt(&eta),
            fmt(&eps)
        )
    });
    ck.check(sn <= en, || {
        format!("strong natarajan {sn} > margin natarajan {en}")
    });
    for (cert, label) in [(sg_cert, "strong graph"), (sn_cert, "strong natarajan")] {
        if let Some(cert) = cert {
            ck.check(cert.replay(&disc)?, || {
                format!("{label} certificate replay")
            });
        }
    }
    ck.slack((eg as f64 - sg as f64).min(en as f64 - sn as f64));
    Ok(ck.finish())
}

fn separation(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let nf = margin.num_functions();
    let mut ck = Checker::new();
    let mut found = 0usize;
    for eta in [&gamma * q(1, 2), &gamma * q(1, 4)] {
        let disc_sq = squashed.discretize(&eta)?;
        let disc_margin = margin.discretize(&eta)?;
        for a in 0..nf {
            for b in 0..nf {
                if a == b {
                    continue;
                }
                for (idx, z) in disc_sq.domain().iter().enumerate() {
                    let va = disc_sq.value(a, idx);
                    let vb = disc_sq.value(b, idx);
                    if va - vb < qi(2) {
                        continue;
                    }
                    found += 1;
                    let witness_b = va - qi(1);
                    let sub_sq = two_function_subclass(&disc_sq, a, b)?;
                    ck.check(
                        is_shattered(
                            &sub_sq,
                            ShatterKind::Fat,
                            &[*z],
                            Some(&qi(1)),
                            &Witness {
                                b: vec![witness_b.clone()],
                                c: None,
                            },
                        )?,
                        || format!("threshold-1 shattering of ({}, {})", z.x, z.y),
                    );
                    let sub_m = two_function_subclass(&disc_margin, a, b)?;
                    ck.check(
                        is_shattered(
                            &sub_m,
                            ShatterKind::StrongGraph,
                            &[*z],
                            None,
                            &Witness {
                                b: vec![witness_b.clone()],
                                c: None,
                            },
                        )?,
                        || format!("strong graph shattering of ({}, {})", z.x, z.y),
                    );
                    let alt = (1..=g.num_categories())
                        .filter(|&k| k != z.y)
                        .max_by(|&k1, &k2| {
                            disc_margin
                                .value_at(b, z.x, k1)
                                .cmp(&disc_margin.value_at(b, z.x, k2))
                        })
                        .expect("at least two categories besides the label");
                    ck.check(
                        is_shattered(
                            &sub_m,
                            ShatterKind::StrongNatarajan,
                            &[*z],
                            None,
                            &Witness {
                                b: vec![witness_b],
                                c: Some(vec![alt]),
                            },
                        )?,
                        || format!("strong natarajan shattering of ({}, {})", z.x, z.y),
                    );
                }
            }
        }
    }
    if found == 0 {
        return Ok(ck.skip("no function pair separated by 2 after discretization"));
    }
    ck.slack(found as f64);
    Ok(ck.finish())
}

fn kp(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let mut ck = Checker::new();
    let mut usable = false;
    for gamma in gammas() {
        let d = dimension(&margin, ShatterKind::Fat, &gamma, &cfg.caps)?.0;
        if d == 0 {
            continue;
        }
        usable = true;
        for p in [2u32, 3] {
            let thr = Threshold::from_eps(&gamma, PNorm::P(p))?;
            for n in 1..=d.min(4) {
                let up = uniform_packing(&margin, n, &thr, PACKING_CAP, SAMPLE_BUDGET, rng.gen())?;
                if !up.exhaustive {
                    return Ok(ck.skip("packing search over samples was not exhaustive"));
                }
                let m = up.packing.value as f64;
                let rhs = kp_constant(p)? * m.log2();
                ck.check(n as f64 <= rhs, || {
                    format!(
                        "n {n} above K_{p} log2(packing {m}) = {rhs:.6} at gamma {}",
                        fmt(&gamma)
                    )
                });
                ck.slack(rhs - n as f64);
            }
        }
    }
    if !usable {
        return Ok(ck.skip("fat dimension zero at every margin in the grid"));
    }
    Ok(ck.finish())
}

fn lp_sauer_shelah(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let mut ck = Checker::new();
    for p in [2u32, 3] {
        for eps in [q(1, 2), q(1, 4)] {
            let scale = &eps / qi(36 * p as i64);
            let d = dimension(&margin, ShatterKind::Fat, &scale, &cfg.caps)?.0 as u64;
            let rhs = lp_packing_bound(&eps, p, g.bound(), d)?;
            let thr = Threshold::from_eps(&eps, PNorm::P(p))?;
            for n in 1..=4 {
                let up = uniform_packing(&margin, n, &thr, PACKING_CAP, SAMPLE_BUDGET, rng.gen())?;
                if !up.exhaustive {
                    return Ok(ck.skip("packing search over samples was not exhaustive"));
                }
                let m = up.packing.value as f64;
                ck.check(m <= rhs, || {
                    format!(
                        "l{p} packing {m} above bound {rhs:.6e} at eps {} n {n} d {d}",
                        fmt(&eps)
                    )
                });
                ck.slack(rhs - m);
            }
        }
    }
    Ok(ck.finish())
}

fn corollary1(instance: usize, cfg: &VerifyConfig) -> Result<InstanceOutcome> {
    let mut rng = rng_for(cfg, instance);
    let g = draw_class(&mut rng)?;
    let margin = g.margin_class();
    let gamma = draw_gamma(&mut rng);
    let squashed = margin.squash(&gamma)?;
    let len = rng.gen_range(1..=4);
    let xs: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.num_points())).collect();
    let entries = xs
        .iter()
        .map(|&x| LabeledPoint::new(x, rng.gen_range(1..=g.num_categories())))
        .collect();
    let sample = Sample::new(entries)?;
    let mut ck = Checker::new();
    let r_margin = empirical_rademacher(&margin, &sample, EstimateMode::Exact)?.value;
    let r_squash = empirical_rademacher(&squashed, &sample, EstimateMode::Exact)?.value;
    let rhs = maurer_rhs(&g, &xs, EstimateMode::Exact)?.value;
    ck.check(r_squash <= r_margin + TOL, || {
        format!("squashed complexity {r_squash:.12} > margin complexity {r_margin:.12}")
    });
    let printed_ok = r_margin <= rhs + TOL;
    ck.check(printed_ok, || {
        format!("margin complexity {r_margin:.12} > comparison term {rhs:.12}")
    });
    if !printed_ok {
        if r_margin <= SQRT_2 * rhs + TOL {
            ck.note("sqrt2-corrected comparison term holds on this instance");
        } else {
            ck.note(format!(
                "sqrt2-corrected comparison term also exceeded: {r_margin:.12} > {:.12}",
                SQRT_2 * rhs
            ));
        }
    }
    ck.slack(rhs - r_margin);
    let mc = empirical_rademacher(
        &margin,
        &sample,
        EstimateMode::MonteCarlo {
            draws: 2_000,
            seed: rng.gen(),
        },
    )?;
    let band = 4.0 * mc.std_error.unwrap_or(0.0) + 1e-9;
    ck.check((mc.value - r_margin).abs() <= band, || {
        format!(
            "monte carlo estimate {:.9} outside {band:.9} of exact {r_margin:.9}",
            mc.value
        )
    });
    Ok(ck.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(instances: usize) -> VerifyConfig {
        VerifyConfig {
            seed: 7,
            instances,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn grid_index_mapping_is_a_bijection() {
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..L5_GRID_LEN {
            let ni = i % 3;
            let rest = i / 3;
            let di = rest % 3;
            let rest = rest / 3;
            let ri = rest % 4;
            let gi = rest / 4;
            assert!(gi < 4);
            assert!(seen.insert((gi, ri, di, ni)));
        }
        assert_eq!(seen.len(), 144);
    }

    #[test]
    fn example1_outcome_is_clean() {
        let out = example1(0, &small_cfg(1)).unwrap();
        assert_eq!(out.failures, 0, "notes: {:?}", out.notes);
        assert!(!out.skipped);
        assert_eq!(out.checks, 10);
    }

    #[test]
    fn ordering_instances_hold() {
        for i in 0..6 {
            let out = ordering(i, &small_cfg(6)).unwrap();
            assert_eq!(out.failures, 0, "instance {i} notes: {:?}", out.notes);
        }
    }

    #[test]
    fn separation_finds_pairs_somewhere() {
        let cfg = small_cfg(12);
        let mut with_checks = 0;
        for i in 0..12 {
            let out = separation(i, &cfg).unwrap();
            assert_eq!(out.failures, 0, "instance {i} notes: {:?}", out.notes);
            if out.checks > 0 {
                with_checks += 1;
            }
        }
        assert!(with_checks > 0, "no instance exercised the construction");
    }

    #[test]
    fn l5_grid_instance_holds() {
        for i in [0, 1, 47, 143] {
            let out = l5_le_l4(i, &small_cfg(1)).unwrap();
            assert_eq!(out.failures, 0, "instance {i} notes: {:?}", out.notes);
        }
    }

    #[test]
    fn plan_rejects_unknown_ids() {
        assert!(matches!(
            plan("lemma99", &small_cfg(1)),
            Err(Error::UnknownLemma(_))
        ));
    }

    #[test]
    fn all_ids_plan() {
        let cfg = small_cfg(3);
        for id in all_suite_ids() {
            assert!(plan(id, &cfg).is_ok(), "{id} must plan");
        }
        assert_eq!(all_suite_ids().len(), 20);
    }
}
