//! Command-line front end for the capdim toolkit: shattering dimensions,
//! uniform packing numbers, closed-form bound evaluators, pathway sweeps,
//! risk bounds, seeded verification suites, and Rademacher estimates.
//!
//! Every invocation prints one JSON document to stdout (`sweep` prints CSV),
//! and the output is a pure function of the argument vector, so identical
//! invocations produce byte-identical bytes. Exit codes: 0 success, 1 bad
//! input or a failed precondition, 2 a verification suite that ran but did
//! not pass, 64 unknown command.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use capdim_core::bounds::{
    alpha_exponent, beta_exponent, covering_decomposition_bound, fat_decomposition_bound,
    graph_to_natarajan_bound, guaranteed_risk_l2, guaranteed_risk_linfty, hypothesis_nat_dim, k_c,
    kp_constant, lp_packing_bound, metric_entropy_l2, metric_entropy_linfty,
    natarajan_structural_bound, packing_bound_l2_g, packing_bound_l2_n, packing_bound_linfty_g,
    packing_bound_linfty_g_old, packing_bound_linfty_n, svm_natarajan_bound,
};
use capdim_core::rat::{self, to_f64, Q};
use capdim_core::{
    all_suite_ids, convention_block, dimension, empirical_rademacher, maurer_rhs, strong_dimension,
    uniform_packing, verify, BoundParams, EstimateMode, FiniteFunctionClass, LabeledPoint, PNorm,
    Sample, SearchCaps, ShatterKind, Threshold, Variant, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "capdim",
    version,
    about = "Exact capacity dimensions, packing numbers, and bound evaluators",
    arg_required_else_help = true
)]
struct Cli {
    /// Write the document to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shattering dimension of a class's margin functions.
    Dims(DimsArgs),
    /// Uniform packing number over samples of a given length.
    Pack(PackArgs),
    /// Evaluate one closed-form bound by name.
    Bound(BoundArgs),
    /// CSV comparison of the old and new bound pathways.
    Sweep(SweepArgs),
    /// Guaranteed-risk bound for a sample size.
    Risk(RiskArgs),
    /// Run a seeded verification suite and report pass/fail.
    Verify(VerifyArgs),
    /// Empirical Rademacher complexity and the sign-matrix comparison term.
    Rademacher(RademacherArgs),
}

#[derive(Args)]
struct DimsArgs {
    /// Class file (JSON object with C, M, points, functions).
    class: PathBuf,
    /// Dimension kind: fat, graph, natarajan, strong_g, strong_n.
    #[arg(long)]
    kind: String,
    /// Margin scale for the fat/graph/natarajan kinds, e.g. 1/4.
    #[arg(long, value_parser = parse_rational)]
    gamma: Option<Q>,
    /// Discretization step for the strong kinds, e.g. 1/8.
    #[arg(long, value_parser = parse_rational)]
    eta: Option<Q>,
    /// Largest description-point set entering the shattering search.
    #[arg(long, default_value_t = 12)]
    max_domain: usize,
    /// Largest function count entering the shattering search.
    #[arg(long, default_value_t = 16)]
    max_functions: usize,
}

#[derive(Args)]
struct PackArgs {
    /// Class file (JSON object with C, M, points, functions).
    class: PathBuf,
    /// Separation threshold, e.g. 1/4.
    #[arg(long, value_parser = parse_rational)]
    eps: Q,
    /// Norm order: a positive integer or `inf`.
    #[arg(long)]
    p: String,
    /// Sample length the supremum ranges over.
    #[arg(long)]
    n: usize,
    /// Squash the margin functions into [0, gamma] before packing.
    #[arg(long, value_parser = parse_rational)]
    gamma: Option<Q>,
    /// Cap on distinct function rows entering the clique search.
    #[arg(long, default_value_t = 64)]
    cap: usize,
    /// Sample multisets tried exhaustively before a seeded draw takes over.
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    /// Seed for the non-exhaustive sample draw.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// Overrides for the shared bound parameters. Anything not given keeps its
/// default.
#[derive(Args, Clone)]
struct ParamArgs {
    /// Number of categories, at least 3.
    #[arg(long = "C")]
    c: Option<usize>,
    /// Margin parameter in (0, 1].
    #[arg(long, value_parser = parse_rational)]
    gamma: Option<Q>,
    /// Confidence parameter in (0, 1).
    #[arg(long)]
    delta: Option<f64>,
    /// Value bound of the hypothesis scores.
    #[arg(long = "MG", value_parser = parse_rational)]
    m_g: Option<Q>,
    /// Leading constant of the dimension power law.
    #[arg(long)]
    k1: Option<f64>,
    /// Chained-pathway constant of the dimension power law.
    #[arg(long)]
    k2: Option<f64>,
    /// Category-count exponent of the power law, in (0, 2].
    #[arg(long = "dGC")]
    d_gc: Option<f64>,
    /// Inverse-margin exponent of the power law.
    #[arg(long = "dGgamma")]
    d_ggamma: Option<f64>,
    /// Weight-norm bound.
    #[arg(long = "Lambda", value_parser = parse_rational)]
    lambda: Option<Q>,
    /// Description-norm bound.
    #[arg(long = "LambdaX", value_parser = parse_rational)]
    lambda_x: Option<Q>,
}

impl ParamArgs {
    fn build(&self) -> BoundParams {
        let mut p = BoundParams::default();
        if let Some(c) = self.c {
            p.c = c;
        }
        if let Some(g) = &self.gamma {
            p.gamma = g.clone();
        }
        if let Some(d) = self.delta {
            p.delta = d;
        }
        if let Some(m) = &self.m_g {
            p.m_g = m.clone();
        }
        if let Some(v) = self.k1 {
            p.k1 = v;
        }
        if let Some(v) = self.k2 {
            p.k2 = v;
        }
        if let Some(v) = self.d_gc {
            p.d_gc = v;
        }
        if let Some(v) = self.d_ggamma {
            p.d_ggamma = v;
        }
        if let Some(v) = &self.lambda {
            p.lambda = v.clone();
        }
        if let Some(v) = &self.lambda_x {
            p.lambda_x = v.clone();
        }
        p
    }
}

const BOUND_NAMES: &[&str] = &[
    "alpha",
    "beta",
    "covering_decomposition",
    "fat_decomposition",
    "graph_to_natarajan",
    "hypothesis_nat_dim",
    "k_c",
    "kp_constant",
    "lp_packing",
    "metric_entropy_l2",
    "metric_entropy_linf",
    "natarajan_structural",
    "packing_l2_g",
    "packing_l2_n",
    "packing_linfty_g",
    "packing_linfty_g_old",
    "packing_linfty_n",
    "svm_natarajan",
];

#[derive(Args)]
struct BoundArgs {
    /// Evaluator name; `capdim bound list` prints the catalog.
    name: String,
    /// Scale argument, e.g. 1/4.
    #[arg(long, value_parser = parse_rational)]
    eps: Option<Q>,
    /// Sample length of the packing bounds.
    #[arg(long)]
    n: Option<u64>,
    /// Dimension argument.
    #[arg(long)]
    d: Option<u64>,
    /// Comma-separated dimension list for the decomposition bounds.
    #[arg(long)]
    dims: Option<String>,
    /// Value bound of the class under the bound.
    #[arg(long = "M", value_parser = parse_rational)]
    m_bound: Option<Q>,
    /// Norm order: a positive integer, or `inf` where allowed.
    #[arg(long)]
    p: Option<String>,
    /// Sample size for the entropy evaluators.
    #[arg(long)]
    m: Option<u64>,
    /// Pathway for the entropy evaluators: old or new.
    #[arg(long, default_value = "old")]
    variant: String,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept quantity: entropy_linf (old vs new log2 covering number) or
    /// risk (sup-norm old pathway vs the chained L2 pathway).
    target: String,
    /// Swept variable: m, C, or gamma.
    #[arg(long)]
    var: String,
    /// First value of the swept variable.
    #[arg(long, value_parser = parse_rational)]
    from: Q,
    /// Last value of the swept variable.
    #[arg(long, value_parser = parse_rational)]
    to: Q,
    /// Number of rows, endpoints included.
    #[arg(long)]
    steps: usize,
    /// Sample size when m is not the swept variable.
    #[arg(long)]
    m: Option<u64>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct RiskArgs {
    /// Norm pathway: linf or l2.
    #[arg(long)]
    norm: String,
    /// Sample size.
    #[arg(long)]
    m: u64,
    /// Entropy pathway for the linf norm: old or new.
    #[arg(long, default_value = "old")]
    variant: String,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id; `capdim verify list` prints all ids.
    lemma_id: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Seeded instances per suite (fixed-grid suites ignore this).
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// Largest description-point set entering a shattering search.
    #[arg(long, default_value_t = 12)]
    max_domain: usize,
    /// Largest function count entering a shattering search.
    #[arg(long, default_value_t = 16)]
    max_functions: usize,
}

#[derive(Args)]
struct RademacherArgs {
    /// Class file (JSON object with C, M, points, functions).
    class: PathBuf,
    /// exact (at most 20 sample points) or mc.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Monte-Carlo draws.
    #[arg(long, default_value_t = 10000)]
    draws: usize,
    /// Monte-Carlo seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Labeled sample `x:y,...` with 0-based points and 1-based categories;
    /// default is every description point labeled 1.
    #[arg(long)]
    sample: Option<String>,
    /// Also report the complexity of the squashed margin functions.
    #[arg(long, value_parser = parse_rational)]
    gamma: Option<Q>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::UnknownArgument
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 64,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_thread_pool();
    match run(&cli) {
        Ok((doc, code)) => {
            if let Err(e) = deliver(cli.out.as_deref(), &doc) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// An explicit CAPDIM_THREADS wins over rayon's own default so batch runs can
/// pin their parallelism.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("CAPDIM_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8)> {
    match &cli.command {
        Command::Dims(a) => Ok((render(&cmd_dims(a)?)?, 0)),
        Command::Pack(a) => Ok((render(&cmd_pack(a)?)?, 0)),
        Command::Bound(a) => Ok((render(&cmd_bound(a)?)?, 0)),
        Command::Sweep(a) => Ok((cmd_sweep(a)?, 0)),
        Command::Risk(a) => Ok((render(&cmd_risk(a)?)?, 0)),
        Command::Verify(a) => {
            let (doc, code) = cmd_verify(a)?;
            Ok((render(&doc)?, code))
        }
        Command::Rademacher(a) => Ok((render(&cmd_rademacher(a)?)?, 0)),
    }
}

fn render(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn deliver(out: Option<&Path>, doc: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{doc}"),
    }
    Ok(())
}

fn parse_rational(s: &str) -> Result<Q, String> {
    rat::parse(s).map_err(|e| e.to_string())
}

fn parse_norm(s: &str) -> Result<PNorm> {
    let p =
        match s {
            "inf" | "infinity" => PNorm::Infinity,
            _ => PNorm::P(s.parse::<u32>().map_err(|_| {
                anyhow!("norm order must be a positive integer or `inf`, got `{s}`")
            })?),
        };
    p.validate()?;
    Ok(p)
}

fn finite_norm(s: &str) -> Result<u32> {
    match parse_norm(s)? {
        PNorm::P(k) => Ok(k),
        PNorm::Infinity => bail!("this bound needs a finite integer norm order"),
    }
}

fn parse_variant(s: &str) -> Result<Variant> {
    match s {
        "old" => Ok(Variant::Old),
        "new" => Ok(Variant::New),
        other => bail!("unknown variant `{other}`; use old or new"),
    }
}

fn parse_dim_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("dimension list entries must be integers, got `{part}`"))
        })
        .collect()
}

fn load_class(path: &Path) -> Result<FiniteFunctionClass> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FiniteFunctionClass::from_json_str(&text)?)
}

fn class_summary(g: &FiniteFunctionClass) -> Value {
    json!({
        "points": g.num_points(),
        "categories": g.num_categories(),
        "functions": g.num_functions(),
        "bound": rat::fmt(g.bound()),
    })
}

fn sample_labels(sample: &Sample) -> Vec<String> {
    sample
        .entries()
        .iter()
        .map(|z| format!("{}:{}", z.x, z.y))
        .collect()
}

fn cmd_dims(a: &DimsArgs) -> Result<Value> {
    let class = load_class(&a.class)?;
    let kind: ShatterKind = a.kind.parse()?;
    let caps = SearchCaps {
        max_domain: a.max_domain,
        max_functions: a.max_functions,
    };
    let margin = class.margin_class();
    let (dim, cert) = if kind.is_strong() {
        if a.gamma.is_some() {
            bail!("kind `{}` takes --eta, not --gamma", kind.as_str());
        }
        let eta = a
            .eta
            .as_ref()
            .context("strong kinds need --eta to discretize the margin functions")?;
        let disc = margin.discretize(eta)?;
        strong_dimension(&disc, kind, &caps)?
    } else {
        if a.eta.is_some() {
            bail!("kind `{}` takes --gamma, not --eta", kind.as_str());
        }
        let gamma = a.gamma.as_ref().context("margin kinds need --gamma")?;
        dimension(&margin, kind, gamma, &caps)?
    };
    Ok(json!({
        "command": "dims",
        "class": class_summary(&class),
        "kind": kind.as_str(),
        "gamma": a.gamma.as_ref().map(rat::fmt),
        "eta": a.eta.as_ref().map(rat::fmt),
        "dimension": dim,
        "certificate": cert.map(|c| c.to_json()),
        "conventions": convention_block(),
    }))
}

fn cmd_pack(a: &PackArgs) -> Result<Value> {
    let class = load_class(&a.class)?;
    let p = parse_norm(&a.p)?;
    let margin = class.margin_class();
    let f = match &a.gamma {
        Some(g) => margin.squash(g)?,
        None => margin,
    };
    let thr = Threshold::from_eps(&a.eps, p)?;
    let r = uniform_packing(&f, a.n, &thr, a.cap, a.budget, a.seed)?;
    Ok(json!({
        "command": "pack",
        "class": class_summary(&class),
        "eps": rat::fmt(&a.eps),
        "p": norm_label(p),
        "n": a.n,
        "gamma": a.gamma.as_ref().map(rat::fmt),
        "seed": a.seed,
        "packing": r.packing.value,
        "exact_search": r.packing.exact,
        "exhaustive_samples": r.exhaustive,
        "witness": r.packing.witness,
        "sample": sample_labels(&r.sample),
        "conventions": convention_block(),
    }))
}

fn norm_label(p: PNorm) -> String {
    match p {
        PNorm::Infinity => "inf".into(),
        PNorm::P(k) => k.to_string(),
    }
}

fn cmd_bound(a: &BoundArgs) -> Result<Value> {
    if a.name == "list" {
        return Ok(json!({
            "command": "bound",
            "names": BOUND_NAMES,
            "conventions": convention_block(),
        }));
    }
    fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
        v.as_ref().ok_or_else(|| anyhow!("this bound needs {flag}"))
    }
    let pa = &a.params;
    let mut echo = Map::new();
    let mut put = |k: &str, v: Value| {
        echo.insert(k.into(), v);
    };
    if let Some(v) = &a.eps {
        put("eps", rat::fmt(v).into());
    }
    if let Some(v) = &pa.gamma {
        put("gamma", rat::fmt(v).into());
    }
    if let Some(v) = a.n {
        put("n", v.into());
    }
    if let Some(v) = pa.c {
        put("C", v.into());
    }
    if let Some(v) = a.d {
        put("d", v.into());
    }
    if let Some(v) = &a.dims {
        put("dims", v.clone().into());
    }
    if let Some(v) = &a.m_bound {
        put("M", rat::fmt(v).into());
    }
    if let Some(v) = &a.p {
        put("p", v.clone().into());
    }
    if let Some(v) = a.m {
        put("m", v.into());
    }
    if let Some(v) = &pa.lambda {
        put("Lambda", rat::fmt(v).into());
    }
    if let Some(v) = &pa.lambda_x {
        put("LambdaX", rat::fmt(v).into());
    }
    if a.name.starts_with("metric_entropy") {
        put("variant", a.variant.clone().into());
    }

    let eps = || need(&a.eps, "--eps");
    let gamma = || need(&pa.gamma, "--gamma");
    let c = || need(&pa.c, "--C").copied();
    let n = || need(&a.n, "--n").copied();
    let d = || need(&a.d, "--d").copied();
    let dims = || need(&a.dims, "--dims").and_then(|s| parse_dim_list(s));
    let m_bound = || need(&a.m_bound, "--M");
    let p_str = || need(&a.p, "--p");
    let m = || need(&a.m, "--m").copied();

    let value: Value = match a.name.as_str() {
        "packing_linfty_g_old" => packing_bound_linfty_g_old(eps()?, gamma()?, n()?, d()?)?.into(),
        "packing_linfty_g" => packing_bound_linfty_g(eps()?, gamma()?, n()?, d()?)?.into(),
        "packing_l2_g" => packing_bound_l2_g(eps()?, gamma()?, d()?)?.into(),
        "packing_linfty_n" => packing_bound_linfty_n(eps()?, gamma()?, n()?, c()?, d()?)?.into(),
        "packing_l2_n" => packing_bound_l2_n(eps()?, gamma()?, c()?, d()?)?.into(),
        "k_c" => k_c(c()?)?.into(),
        "alpha" => alpha_exponent(c()?)?.into(),
        "beta" => beta_exponent(c()?)?.into(),
        "graph_to_natarajan" => graph_to_natarajan_bound(c()?, d()?)?.into(),
        "fat_decomposition" => fat_decomposition_bound(eps()?, c()?, m_bound()?, &dims()?)?.into(),
        "natarajan_structural" => natarajan_structural_bound(c()?, &dims()?)?.into(),
        "covering_decomposition" => {
            covering_decomposition_bound(eps()?, parse_norm(p_str()?)?, &dims()?)?.into()
        }
        "svm_natarajan" => svm_natarajan_bound(
            c()?,
            need(&pa.lambda, "--Lambda")?,
            need(&pa.lambda_x, "--LambdaX")?,
            gamma()?,
        )?
        .into(),
        "hypothesis_nat_dim" => hypothesis_nat_dim(eps()?, &pa.build())?.into(),
        "metric_entropy_linf" => {
            metric_entropy_linfty(m()?, &pa.build(), parse_variant(&a.variant)?)?.into()
        }
        "metric_entropy_l2" => {
            metric_entropy_l2(eps()?, &pa.build(), parse_variant(&a.variant)?)?.into()
        }
        "kp_constant" => kp_constant(finite_norm(p_str()?)?)?.into(),
        "lp_packing" => lp_packing_bound(eps()?, finite_norm(p_str()?)?, m_bound()?, d()?)?.into(),
        other => bail!(
            "unknown bound `{other}`; known names: {}",
            BOUND_NAMES.join(", ")
        ),
    };
    Ok(json!({
        "command": "bound",
        "name": a.name,
        "args": echo,
        "value": value,
        "conventions": convention_block(),
    }))
}

fn param_block(p: &BoundParams) -> Value {
    json!({
        "C": p.c,
        "gamma": rat::fmt(&p.gamma),
        "delta": p.delta,
        "MG": rat::fmt(&p.m_g),
        "k1": p.k1,
        "k2": p.k2,
        "dGC": p.d_gc,
        "dGgamma": p.d_ggamma,
        "Lambda": rat::fmt(&p.lambda),
        "LambdaX": rat::fmt(&p.lambda_x),
    })
}

fn conventions_line() -> String {
    let Value::Object(map) = convention_block() else {
        unreachable!("convention block is an object");
    };
    map.iter()
        .map(|(k, v)| format!("{k}: {}", v.as_str().unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("; ")
}

fn params_line(p: &BoundParams) -> String {
    format!(
        "C={} gamma={} delta={} MG={} k1={} k2={} dGC={} dGgamma={} Lambda={} LambdaX={}",
        p.c,
        rat::fmt(&p.gamma),
        p.delta,
        rat::fmt(&p.m_g),
        p.k1,
        p.k2,
        p.d_gc,
        p.d_ggamma,
        rat::fmt(&p.lambda),
        rat::fmt(&p.lambda_x),
    )
}

fn interpolate(from: &Q, to: &Q, i: usize, steps: usize) -> Q {
    if steps <= 1 {
        return from.clone();
    }
    from + (to - from) * rat::q(i as i64, (steps - 1) as i64)
}

fn round_to_u64(v: &Q, flag: &str) -> Result<u64> {
    let f = to_f64(v).round();
    if f.is_nan() || f < 0.0 || f > u64::MAX as f64 {
        bail!("swept {flag} value {} is out of range", rat::fmt(v));
    }
    Ok(f as u64)
}

fn cmd_sweep(a: &SweepArgs) -> Result<String> {
    if a.steps == 0 {
        bail!("--steps must be at least 1");
    }
    let base = a.params.build();
    let fixed_m = || {
        a.m.ok_or_else(|| anyhow!("sweeping over {} needs a fixed --m", a.var))
    };
    let mut out = String::new();
    let _ = writeln!(out, "# conventions: {}", conventions_line());
    let _ = writeln!(out, "# params: {}", params_line(&base));
    let _ = writeln!(out, "{},old,new,ratio", a.var);
    for i in 0..a.steps {
        let v = interpolate(&a.from, &a.to, i, a.steps);
        let (label, params, m) = match a.var.as_str() {
            "m" => (
                round_to_u64(&v, "m")?.to_string(),
                base.clone(),
                round_to_u64(&v, "m")?,
            ),
            "C" => {
                let mut p = base.clone();
                p.c = round_to_u64(&v, "C")? as usize;
                (p.c.to_string(), p, fixed_m()?)
            }
            "gamma" => {
                let mut p = base.clone();
                p.gamma = v.clone();
                (rat::fmt(&v), p, fixed_m()?)
            }
            other => bail!("unknown sweep variable `{other}`; use m, C, or gamma"),
        };
        let (old_v, new_v) = match a.target.as_str() {
            "entropy_linf" => (
                metric_entropy_linfty(m, &params, Variant::Old)?,
                metric_entropy_linfty(m, &params, Variant::New)?,
            ),
            "risk" => {
                let ent = metric_entropy_linfty(m, &params, Variant::Old)?;
                (
                    guaranteed_risk_linfty(m, &params, ent)?,
                    guaranteed_risk_l2(&params, m)?,
                )
            }
            other => bail!("unknown sweep target `{other}`; use entropy_linf or risk"),
        };
        let _ = writeln!(out, "{label},{old_v},{new_v},{}", old_v / new_v);
    }
    Ok(out)
}

fn cmd_risk(a: &RiskArgs) -> Result<Value> {
    let params = a.params.build();
    let (value, entropy) = match a.norm.as_str() {
        "linf" => {
            let variant = parse_variant(&a.variant)?;
            let ent = metric_entropy_linfty(a.m, &params, variant)?;
            (guaranteed_risk_linfty(a.m, &params, ent)?, Some(ent))
        }
        "l2" => (guaranteed_risk_l2(&params, a.m)?, None),
        other => bail!("unknown norm `{other}`; use linf or l2"),
    };
    Ok(json!({
        "command": "risk",
        "norm": a.norm,
        "variant": if a.norm == "linf" { Value::from(a.variant.clone()) } else { Value::Null },
        "m": a.m,
        "entropy_log2": entropy,
        "value": value,
        "params": param_block(&params),
        "conventions": convention_block(),
    }))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(Value, u8)> {
    if a.lemma_id == "list" {
        return Ok((
            json!({
                "command": "verify",
                "suites": all_suite_ids(),
                "conventions": convention_block(),
            }),
            0,
        ));
    }
    let cfg = VerifyConfig {
        seed: a.seed,
        instances: a.instances,
        caps: SearchCaps {
            max_domain: a.max_domain,
            max_functions: a.max_functions,
        },
    };
    let report = verify(&a.lemma_id, &cfg)?;
    let passed = report.passed();
    let code = if passed { 0 } else { 2 };
    Ok((
        json!({
            "command": "verify",
            "passed": passed,
            "report": report,
            "conventions": convention_block(),
        }),
        code,
    ))
}

fn parse_sample(s: &str, num_points: usize, c: usize) -> Result<Vec<LabeledPoint>> {
    s.split(',')
        .map(|part| {
            let (x, y) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| anyhow!("sample entries look like x:y, got `{part}`"))?;
            let x: usize = x
                .parse()
                .map_err(|_| anyhow!("bad point index in `{part}`"))?;
            let y: usize = y.parse().map_err(|_| anyhow!("bad category in `{part}`"))?;
            if x >= num_points {
                bail!("point index {x} out of range [0, {num_points})");
            }
            if y < 1 || y > c {
                bail!("category {y} out of range [1, {c}]");
            }
            Ok(LabeledPoint::new(x, y))
        })
        .collect()
}

fn estimate_json(e: &capdim_core::RademacherEstimate) -> Value {
    json!({
        "value": e.value,
        "exact": e.exact,
        "draws": e.draws,
        "std_error": e.std_error,
    })
}

fn cmd_rademacher(a: &RademacherArgs) -> Result<Value> {
    let class = load_class(&a.class)?;
    let mode = match a.mode.as_str() {
        "exact" => EstimateMode::Exact,
        "mc" => EstimateMode::MonteCarlo {
            draws: a.draws,
            seed: a.seed,
        },
        other => bail!("unknown mode `{other}`; use exact or mc"),
    };
    let entries = match &a.sample {
        Some(s) => parse_sample(s, class.num_points(), class.num_categories())?,
        None => (0..class.num_points())
            .map(|x| LabeledPoint::new(x, 1))
            .collect(),
    };
    let xs: Vec<usize> = entries.iter().map(|z| z.x).collect();
    let sample = Sample::new(entries)?;
    let margin = class.margin_class();
    let r_margin = empirical_rademacher(&margin, &sample, mode)?;
    let r_cmp = maurer_rhs(&class, &xs, mode)?;
    let r_squash = match &a.gamma {
        Some(g) => Some(empirical_rademacher(&margin.squash(g)?, &sample, mode)?),
        None => None,
    };
    Ok(json!({
        "command": "rademacher",
        "class": class_summary(&class),
        "mode": a.mode,
        "sample": sample_labels(&sample),
        "gamma": a.gamma.as_ref().map(rat::fmt),
        "margin_complexity": estimate_json(&r_margin),
        "comparison_term": estimate_json(&r_cmp),
        "squashed_complexity": r_squash.as_ref().map(estimate_json),
        "conventions": convention_block(),
    }))
}
