//! Exact computation of scale-sensitive combinatorial dimensions on finite
//! score classes: fat-shattering, margin Graph, margin Natarajan, and their
//! strong (integer, threshold-1) counterparts, all with replayable
//! certificates.
//!
//! A set of points `{z_i = (x_i, y_i)}` is shattered when there is a witness
//! vector `b` (plus one alternative category `c_i != y_i` per point for the
//! Natarajan kinds) such that every dichotomy `s` in `{-1,+1}^n` is realized
//! by some function of the class:
//!
//! ```text
//! s_i = +1:  f(x_i, y_i) - b_i >= gamma
//! s_i = -1:  fat:        b_i - f(z_i) >= gamma
//!            graph:      max_{k != y_i} f(x_i, k) + b_i >= gamma
//!            natarajan:  f(x_i, c_i) + b_i >= gamma
//! ```
//!
//! The strong kinds replace `gamma` by 1 and restrict `b` to integers in
//! `[-(M-1), M-1]` where `M` is the class integer bound. The graph and
//! natarajan kinds apply to classes satisfying the margin structure
//! `max_{k<l} (f(x,k) + f(x,l)) = 0`; the fat kind applies to any real class.
//!
//! The search enumerates point subsets by increasing size with fail-fast
//! (shattering is monotone under subsets) and, per point, a finite witness
//! grid: all critical values of `b` plus midpoints of consecutive criticals.
//! Satisfaction sets are piecewise constant in `b_i` between criticals, so
//! the grid realizes every satisfaction pattern; dominated patterns are
//! pruned. Dichotomies are checked through prefix intersection bitmasks,
//! never by enumerating function assignments.

use crate::error::{Error, Result};
use crate::model::{LabeledPoint, ScoreClass, ValueKind};
use crate::rat::{self, Q};
use num::{BigInt, One, Signed};
use serde_json::{json, Value};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShatterKind {
    Fat,
    Graph,
    Natarajan,
    StrongGraph,
    StrongNatarajan,
}

impl ShatterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ShatterKind::Fat => "fat",
            ShatterKind::Graph => "graph",
            ShatterKind::Natarajan => "natarajan",
            ShatterKind::StrongGraph => "strong_g",
            ShatterKind::StrongNatarajan => "strong_n",
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(
            self,
            ShatterKind::StrongGraph | ShatterKind::StrongNatarajan
        )
    }

    pub fn takes_c(self) -> bool {
        matches!(self, ShatterKind::Natarajan | ShatterKind::StrongNatarajan)
    }

    /// The negative branch looks at categories other than `y_i`.
    fn is_multicategory(self) -> bool {
        !matches!(self, ShatterKind::Fat)
    }
}

impl FromStr for ShatterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fat" => Ok(ShatterKind::Fat),
            "graph" => Ok(ShatterKind::Graph),
            "natarajan" => Ok(ShatterKind::Natarajan),
            "strong_g" => Ok(ShatterKind::StrongGraph),
            "strong_n" => Ok(ShatterKind::StrongNatarajan),
            other => Err(Error::Parameter {
                name: "kind",
                value: other.into(),
                requirement: "one of fat | graph | natarajan | strong_g | strong_n",
            }),
        }
    }
}

/// Witness data accompanying a point set: translations `b` and, for the
/// Natarajan kinds, one alternative category per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub b: Vec<Q>,
    pub c: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_domain: usize,
    pub max_functions: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_domain: 12,
            max_functions: 16,
        }
    }
}

/// Proof object for a shattering: replaying it against the class must
/// succeed. `assignments` maps each dichotomy (bit `i` set means `s_i = +1`)
/// to the name of a realizing function.
#[derive(Debug, Clone)]
pub struct ShatterCertificate {
    pub kind: ShatterKind,
    /// Margin; `None` for the strong kinds (threshold 1).
    pub gamma: Option<Q>,
    pub points: Vec<LabeledPoint>,
    pub witness: Witness,
    pub assignments: Vec<(u32, String)>,
}

impl ShatterCertificate {
    /// Re-checks the certificate against a class: the witness must shatter
    /// the points and every recorded assignment must satisfy its dichotomy.
    pub fn replay(&self, f: &ScoreClass) -> Result<bool> {
        if !is_shattered(
            f,
            self.kind,
            &self.points,
            self.gamma.as_ref(),
            &self.witness,
        )? {
            return Ok(false);
        }
        let n = self.points.len();
        if self.assignments.len() != 1usize << n {
            return Ok(false);
        }
        let mut seen = vec![false; 1usize << n];
        let vals = PointValues::gather(f, self.kind, &self.points, self.witness.c.as_deref())?;
        let thr = self.threshold();
        for (dich, name) in &self.assignments {
            let d = *dich as usize;
            if d >= 1usize << n || seen[d] {
                return Ok(false);
            }
            seen[d] = true;
            let Some(fi) = f.names().iter().position(|m| m == name) else {
                return Ok(false);
            };
            if !vals.satisfies(fi, d, &self.witness.b, &thr) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn threshold(&self) -> Q {
        match &self.gamma {
            Some(g) => g.clone(),
            None => Q::one(),
        }
    }

    pub fn dichotomy_string(&self, dich: u32) -> String {
        (0..self.points.len())
            .map(|i| if dich >> i & 1 == 1 { '+' } else { '-' })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "gamma": self.gamma.as_ref().map(rat::fmt),
            "points": self.points.iter().map(|z| json!({"x": z.x, "y": z.y})).collect::<Vec<_>>(),
            "b": self.witness.b.iter().map(rat::fmt).collect::<Vec<_>>(),
            "c": self.witness.c,
            "assignments": self.assignments.iter()
                .map(|(d, name)| json!({"s": self.dichotomy_string(*d), "f": name}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Per-point constraint values: `pos[f]` enters the `s = +1` inequality and
/// `neg[f]` the `s = -1` one, normalized so both read `v - b >= thr` (pos)
/// and `v + b >= thr` (neg).
struct PointValues {
    pos: Vec<Vec<Q>>,
    neg: Vec<Vec<Q>>,
}

impl PointValues {
    fn gather(
        f: &ScoreClass,
        kind: ShatterKind,
        points: &[LabeledPoint],
        c: Option<&[usize]>,
    ) -> Result<Self> {
        let mut pos = Vec::with_capacity(points.len());
        let mut neg = Vec::with_capacity(points.len());
        for (i, z) in points.iter().enumerate() {
            let ci = c.map(|cs| cs[i]);
            pos.push(
                (0..f.num_functions())
                    .map(|fi| {
                        f.value_at(fi, z.x, z.y)
                            .cloned()
                            .ok_or(Error::PointNotInDomain { x: z.x, y: z.y })
                    })
                    .collect::<Result<Vec<Q>>>()?,
            );
            neg.push(
                (0..f.num_functions())
                    .map(|fi| neg_value(f, fi, kind, z, ci))
                    .collect::<Result<Vec<Q>>>()?,
            );
        }
        Ok(Self { pos, neg })
    }

    fn satisfies(&self, fi: usize, dich: usize, b: &[Q], thr: &Q) -> bool {
        b.iter().enumerate().all(|(i, bi)| {
            if dich >> i & 1 == 1 {
                &self.pos[i][fi] - bi >= *thr
            } else {
                &self.neg[i][fi] + bi >= *thr
            }
        })
    }
}

fn neg_value(
    f: &ScoreClass,
    fi: usize,
    kind: ShatterKind,
    z: &LabeledPoint,
    c: Option<usize>,
) -> Result<Q> {
    match kind {
        ShatterKind::Fat => f
            .value_at(fi, z.x, z.y)
            .map(|v| -v)
            .ok_or(Error::PointNotInDomain { x: z.x, y: z.y }),
        ShatterKind::Graph | ShatterKind::StrongGraph => {
            let mut best: Option<Q> = None;
            for k in 1..=f.num_categories() {
                if k == z.y {
                    continue;
                }
                let v = f
                    .value_at(fi, z.x, k)
                    .cloned()
                    .ok_or(Error::PointNotInDomain { x: z.x, y: k })?;
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
            best.ok_or(Error::TooFewCategories(f.num_categories()))
        }
        ShatterKind::Natarajan | ShatterKind::StrongNatarajan => {
            let k = c.expect("natarajan kinds carry c");
            f.value_at(fi, z.x, k)
                .cloned()
                .ok_or(Error::PointNotInDomain { x: z.x, y: k })
        }
    }
}

/// Does the witness shatter the points? Pure replay: every dichotomy must be
/// realized by some function under exact rational comparisons.
pub fn is_shattered(
    f: &ScoreClass,
    kind: ShatterKind,
    points: &[LabeledPoint],
    gamma: Option<&Q>,
    witness: &Witness,
) -> Result<bool> {
    let n = points.len();
    if n == 0 {
        return Ok(true);
    }
    if n > 20 {
        return Err(Error::CapExceeded {
            what: "points in shattering replay",
            got: n,
            cap: 20,
        });
    }
    for (i, z) in points.iter().enumerate() {
        if f.domain_index(z.x, z.y).is_none() {
            return Err(Error::PointNotInDomain { x: z.x, y: z.y });
        }
        if points[..i].contains(z) {
            return Err(Error::Parameter {
                name: "points",
                value: format!("({}, {})", z.x, z.y),
                requirement: "pairwise distinct points",
            });
        }
    }
    if witness.b.len() != n {
        return Err(Error::WitnessLength {
            got: witness.b.len(),
            expected: n,
        });
    }
    let thr = match (kind.is_strong(), gamma) {
        (false, Some(g)) => {
            if !g.is_positive() {
                return Err(Error::GammaNotPositive(rat::fmt(g)));
            }
            g.clone()
        }
        (false, None) => {
            return Err(Error::KindMismatch(format!(
                "kind `{}` needs a margin gamma",
                kind.as_str()
            )))
        }
        (true, None) => Q::one(),
        (true, Some(_)) => {
            return Err(Error::KindMismatch(format!(
                "kind `{}` uses the fixed threshold 1, not a gamma",
                kind.as_str()
            )))
        }
    };
    let c = match (kind.takes_c(), &witness.c) {
        (true, Some(cs)) => {
            if cs.len() != n {
                return Err(Error::WitnessLength {
                    got: cs.len(),
                    expected: n,
                });
            }
            for (z, &ci) in points.iter().zip(cs) {
                if ci == 0 || ci > f.num_categories() {
                    return Err(Error::CategoryOutOfRange {
                        y: ci,
                        c: f.num_categories(),
                    });
                }
                if ci == z.y {
                    return Err(Error::WitnessCategoryClash);
                }
            }
            Some(cs.as_slice())
        }
        (true, None) => {
            return Err(Error::KindMismatch(format!(
                "kind `{}` needs alternative categories c",
                kind.as_str()
            )))
        }
        (false, Some(_)) => {
            return Err(Error::KindMismatch(format!(
                "kind `{}` does not take categories c",
                kind.as_str()
            )))
        }
        (false, None) => None,
    };
    if kind.is_strong() {
        let m = f.integer_bound()?;
        let hi = Q::from(m - BigInt::one());
        for bi in &witness.b {
            if !bi.is_integer() {
                return Err(Error::WitnessNotIntegral(rat::fmt(bi)));
            }
            if bi.abs() > hi {
                return Ok(false);
            }
        }
    }
    let vals = PointValues::gather(f, kind, points, c)?;
    for dich in 0..1usize << n {
        if !(0..f.num_functions()).any(|fi| vals.satisfies(fi, dich, &witness.b, &thr)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One witness-grid entry for a point: a candidate `b` (and `c`), with the
/// bitmasks of functions satisfying the positive and negative branches.
#[derive(Debug, Clone)]
struct Candidate {
    b: Q,
    c: Option<usize>,
    sat_pos: u64,
    sat_neg: u64,
}

fn masks_at(pos: &[Q], neg: &[Q], b: &Q, thr: &Q) -> (u64, u64) {
    let mut sat_pos = 0u64;
    let mut sat_neg = 0u64;
    for (fi, (pv, nv)) in pos.iter().zip(neg).enumerate() {
        if pv - b >= *thr {
            sat_pos |= 1 << fi;
        }
        if nv + b >= *thr {
            sat_neg |= 1 << fi;
        }
    }
    (sat_pos, sat_neg)
}

/// Keep only candidates whose (pos, neg) pattern is feasible and not
/// dominated by another candidate's pattern.
fn prune_candidates(cands: Vec<Candidate>) -> Vec<Candidate> {
    let feasible: Vec<Candidate> = cands
        .into_iter()
        .filter(|c| c.sat_pos != 0 && c.sat_neg != 0)
        .collect();
    let mut kept: Vec<Candidate> = Vec::new();
    'outer: for (i, c) in feasible.iter().enumerate() {
        for (j, d) in feasible.iter().enumerate() {
            if i == j {
                continue;
            }
            let pos_sub = c.sat_pos & d.sat_pos == c.sat_pos;
            let neg_sub = c.sat_neg & d.sat_neg == c.sat_neg;
            if pos_sub && neg_sub {
                let proper = c.sat_pos != d.sat_pos || c.sat_neg != d.sat_neg;
                if proper || j < i {
                    continue 'outer;
                }
            }
        }
        kept.push(c.clone());
    }
    kept
}

/// Witness grid for one point at margin `thr`: critical values of `b` plus
/// midpoints of consecutive criticals, evaluated and pruned.
fn margin_candidates(
    pos: &[Q],
    neg_choices: &[(Option<usize>, Vec<Q>)],
    thr: &Q,
) -> Vec<Candidate> {
    let mut cands = Vec::new();
    for (c, neg) in neg_choices {
        let mut grid: Vec<Q> = pos
            .iter()
            .map(|pv| pv - thr)
            .chain(neg.iter().map(|nv| thr - nv))
            .collect();
        grid.sort();
        grid.dedup();
        let mids: Vec<Q> = grid
            .windows(2)
            .map(|w| (&w[0] + &w[1]) / rat::qi(2))
            .collect();
        grid.extend(mids);
        grid.sort();
        grid.dedup();
        for b in grid {
            let (sat_pos, sat_neg) = masks_at(pos, neg, &b, thr);
            cands.push(Candidate {
                b,
                c: *c,
                sat_pos,
                sat_neg,
            });
        }
    }
    prune_candidates(cands)
}

/// Integer witness grid for the strong kinds: every integer of
/// `[-(M-1), M-1]` that sits in the feasibility interval.
fn strong_candidates(
    pos: &[Q],
    neg_choices: &[(Option<usize>, Vec<Q>)],
    m: &BigInt,
) -> Result<Vec<Candidate>> {
    let one = Q::one();
    let hi_wit = Q::from(m - BigInt::one());
    let lo_wit = -&hi_wit;
    let mut cands = Vec::new();
    for (c, neg) in neg_choices {
        // Feasible b satisfy b <= max_f (pos_f - 1) and b >= min_f (1 - neg_f).
        let hi = pos.iter().map(|pv| pv - &one).max().expect("functions");
        let lo = neg.iter().map(|nv| &one - nv).min().expect("functions");
        let lo = if lo > lo_wit { lo } else { lo_wit.clone() };
        let hi = if hi < hi_wit { hi } else { hi_wit.clone() };
        let mut b = lo.ceil();
        let top = hi.floor();
        if top < b {
            continue;
        }
        let span: usize = (&top - &b)
            .to_integer()
            .try_into()
            .map_err(|_| Error::CapExceeded {
                what: "integer witness range",
                got: usize::MAX,
                cap: 4096,
            })?;
        if span + 1 > 4096 {
            return Err(Error::CapExceeded {
                what: "integer witness range",
                got: span + 1,
                cap: 4096,
            });
        }
        for _ in 0..=span {
            let (sat_pos, sat_neg) = masks_at(pos, neg, &b, &one);
            cands.push(Candidate {
                b: b.clone(),
                c: *c,
                sat_pos,
                sat_neg,
            });
            b += Q::one();
        }
    }
    Ok(prune_candidates(cands))
}

/// Alternative-category score columns, each tagged with its category.
type NegChoices = Vec<(Option<usize>, Vec<Q>)>;

/// The `(pos, neg-choices)` raw values for one domain point, or `None` when
/// the point cannot participate (incomplete category row).
fn point_inputs(
    f: &ScoreClass,
    kind: ShatterKind,
    z: &LabeledPoint,
) -> Option<(Vec<Q>, NegChoices)> {
    let nf = f.num_functions();
    let pos: Vec<Q> = (0..nf)
        .map(|fi| f.value_at(fi, z.x, z.y).cloned())
        .collect::<Option<_>>()?;
    let neg_choices: Vec<(Option<usize>, Vec<Q>)> = if kind.takes_c() {
        (1..=f.num_categories())
            .filter(|&k| k != z.y)
            .filter_map(|k| {
                let col: Option<Vec<Q>> =
                    (0..nf).map(|fi| f.value_at(fi, z.x, k).cloned()).collect();
                col.map(|col| (Some(k), col))
            })
            .collect()
    } else {
        let col: Option<Vec<Q>> = (0..nf)
            .map(|fi| neg_value(f, fi, kind, z, None).ok())
            .collect();
        vec![(None, col?)]
    };
    if neg_choices.is_empty() {
        return None;
    }
    Some((pos, neg_choices))
}

struct Dfs<'a> {
    cands: &'a [&'a [Candidate]],
}

impl Dfs<'_> {
    /// Chooses one candidate per point so that every dichotomy keeps a
    /// non-empty satisfier set. `masks[d]` is the satisfier intersection for
    /// the dichotomy prefix `d` over the first `depth` points.
    fn search(&self, depth: usize, masks: &[u64], choice: &mut Vec<usize>) -> Option<Vec<u64>> {
        if depth == self.cands.len() {
            return Some(masks.to_vec());
        }
        'cand: for (ci, cand) in self.cands[depth].iter().enumerate() {
            let mut next = vec![0u64; masks.len() * 2];
            for (d, m) in masks.iter().enumerate() {
                let plus = m & cand.sat_pos;
                let minus = m & cand.sat_neg;
                if plus == 0 || minus == 0 {
                    continue 'cand;
                }
                next[d | 1 << depth] = plus;
                next[d] = minus;
            }
            choice.push(ci);
            if let Some(final_masks) = self.search(depth + 1, &next, choice) {
                return Some(final_masks);
            }
            choice.pop();
        }
        None
    }
}

fn subset_shatters(
    points: &[LabeledPoint],
    cands: &[&[Candidate]],
    kind: ShatterKind,
    gamma: Option<&Q>,
    names: &[String],
) -> Option<ShatterCertificate> {
    let dfs = Dfs { cands };
    let mut choice = Vec::new();
    let masks = dfs.search(0, &[!0u64], &mut choice)?;
    let chosen: Vec<&Candidate> = choice
        .iter()
        .zip(cands)
        .map(|(&ci, list)| &list[ci])
        .collect();
    let assignments: Vec<(u32, String)> = masks
        .iter()
        .enumerate()
        .map(|(d, m)| (d as u32, names[m.trailing_zeros() as usize].clone()))
        .collect();
    Some(ShatterCertificate {
        kind,
        gamma: gamma.cloned(),
        points: points.to_vec(),
        witness: Witness {
            b: chosen.iter().map(|c| c.b.clone()).collect(),
            c: kind.takes_c().then(|| {
                chosen
                    .iter()
                    .map(|c| c.c.expect("natarajan candidates carry c"))
                    .collect()
            }),
        },
        assignments,
    })
}

fn check_class(f: &ScoreClass, kind: ShatterKind, caps: &SearchCaps) -> Result<()> {
    if f.num_functions() > caps.max_functions || f.num_functions() > 64 {
        return Err(Error::CapExceeded {
            what: "functions in dimension search",
            got: f.num_functions(),
            cap: caps.max_functions.min(64),
        });
    }
    if f.domain().len() > caps.max_domain {
        return Err(Error::CapExceeded {
            what: "domain points in dimension search",
            got: f.domain().len(),
            cap: caps.max_domain,
        });
    }
    if kind.is_multicategory() {
        f.check_margin_structure()?;
    }
    Ok(())
}

fn run_search(
    f: &ScoreClass,
    kind: ShatterKind,
    gamma: Option<&Q>,
    cand_lists: Vec<(LabeledPoint, Vec<Candidate>)>,
) -> (usize, Option<ShatterCertificate>) {
    let usable: Vec<&(LabeledPoint, Vec<Candidate>)> =
        cand_lists.iter().filter(|(_, c)| !c.is_empty()).collect();
    let mut best = 0usize;
    let mut cert = None;
    for size in 1..=usable.len() {
        let mut found = None;
        let mut sel = (0..size).collect::<Vec<usize>>();
        loop {
            let points: Vec<LabeledPoint> = sel.iter().map(|&i| usable[i].0).collect();
            let cands: Vec<&[Candidate]> = sel.iter().map(|&i| usable[i].1.as_slice()).collect();
            if let Some(c) = subset_shatters(&points, &cands, kind, gamma, f.names()) {
                found = Some(c);
                break;
            }
            if !next_combination(&mut sel, usable.len()) {
                break;
            }
        }
        match found {
            Some(c) => {
                best = size;
                cert = Some(c);
            }
            None => break,
        }
    }
    (best, cert)
}

fn next_combination(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if sel[i] < n - (k - i) {
            sel[i] += 1;
            for j in (i + 1)..k {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Largest shattered set size for the margin kinds, with a certificate when
/// positive. Subsets are enumerated by increasing size; the first size with
/// no shatterable subset stops the search.
pub fn dimension(
    f: &ScoreClass,
    kind: ShatterKind,
    gamma: &Q,
    caps: &SearchCaps,
) -> Result<(usize, Option<ShatterCertificate>)> {
    if kind.is_strong() {
        return Err(Error::KindMismatch(format!(
            "kind `{}` has no margin parameter; use strong_dimension",
            kind.as_str()
        )));
    }
    if !gamma.is_positive() {
        return Err(Error::GammaNotPositive(rat::fmt(gamma)));
    }
    check_class(f, kind, caps)?;
    if f.num_functions() == 0 {
        return Ok((0, None));
    }
    let cand_lists: Vec<(LabeledPoint, Vec<Candidate>)> = f
        .domain()
        .iter()
        .map(|z| {
            let cands = match point_inputs(f, kind, z) {
                Some((pos, neg)) => margin_candidates(&pos, &neg, gamma),
                None => Vec::new(),
            };
            (*z, cands)
        })
        .collect();
    Ok(run_search(f, kind, Some(gamma), cand_lists))
}

/// Strong dimension: integer class, integer witnesses `b` in
/// `[-(M-1), M-1]`, threshold 1, where `M = max(1, max |f|)`.
pub fn strong_dimension(
    f: &ScoreClass,
    kind: ShatterKind,
    caps: &SearchCaps,
) -> Result<(usize, Option<ShatterCertificate>)> {
    if !kind.is_strong() {
        return Err(Error::KindMismatch(format!(
            "kind `{}` takes a margin; use dimension",
            kind.as_str()
        )));
    }
    if f.value_kind() != ValueKind::Integer {
        return Err(Error::ExpectedIntegerValues);
    }
    check_class(f, kind, caps)?;
    if f.num_functions() == 0 {
        return Ok((0, None));
    }
    let m = f.integer_bound()?;
    let cand_lists: Vec<(LabeledPoint, Vec<Candidate>)> = f
        .domain()
        .iter()
        .map(|z| {
            let cands = match point_inputs(f, kind, z) {
                Some((pos, neg)) => strong_candidates(&pos, &neg, &m)?,
                None => Vec::new(),
            };
            Ok((*z, cands))
        })
        .collect::<Result<_>>()?;
    Ok(run_search(f, kind, None, cand_lists))
}

/// Dimension as a function of the scale, on a descending grid.
#[derive(Debug, Clone)]
pub struct DimensionCurve {
    /// `(eps, dimension)` pairs with `eps` strictly descending.
    pub samples: Vec<(Q, usize)>,
}

impl DimensionCurve {
    /// The dimension must not decrease as the scale shrinks.
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

pub fn dimension_curve(
    f: &ScoreClass,
    kind: ShatterKind,
    eps_grid: &[Q],
    caps: &SearchCaps,
) -> Result<DimensionCurve> {
    let mut grid: Vec<Q> = eps_grid.to_vec();
    grid.sort_by(|a, b| b.cmp(a));
    grid.dedup();
    let mut samples = Vec::with_capacity(grid.len());
    for eps in grid {
        let (value, _) = dimension(f, kind, &eps, caps)?;
        samples.push((eps, value));
    }
    let curve = DimensionCurve { samples };
    if !curve.is_monotone() {
        return Err(Error::Internal(
            "dimension curve decreased as the scale shrank".into(),
        ));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FiniteFunctionClass;
    use crate::rat::{q, qi};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn demo() -> FiniteFunctionClass {
        FiniteFunctionClass::new(
            vec!["x".into()],
            3,
            qi(1),
            vec![
                ("g1".into(), vec![vec![q(3, 4), q(1, 4), qi(0)]]),
                ("g2".into(), vec![vec![qi(0), q(1, 2), q(1, 2)]]),
            ],
        )
        .unwrap()
    }

    fn pt(x: usize, y: usize) -> LabeledPoint {
        LabeledPoint::new(x, y)
    }

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    #[test]
    fn demo_margin_dims_at_one_quarter() {
        let rho = demo().margin_class();
        let g = q(1, 4);
        let (fat, cert) = dimension(&rho, ShatterKind::Fat, &g, &caps()).unwrap();
        assert_eq!(fat, 1);
        let cert = cert.unwrap();
        assert_eq!(cert.points, vec![pt(0, 1)]);
        assert_eq!(cert.witness.b, vec![qi(0)]);
        assert!(cert.replay(&rho).unwrap());
        let (graph, gc) = dimension(&rho, ShatterKind::Graph, &g, &caps()).unwrap();
        assert_eq!(graph, 0);
        assert!(gc.is_none());
        let (nat, nc) = dimension(&rho, ShatterKind::Natarajan, &g, &caps()).unwrap();
        assert_eq!(nat, 0);
        assert!(nc.is_none());
    }

    #[test]
    fn replay_spot_values_on_demo() {
        let rho = demo().margin_class();
        let w0 = Witness {
            b: vec![qi(0)],
            c: None,
        };
        assert!(is_shattered(&rho, ShatterKind::Fat, &[pt(0, 1)], Some(&q(1, 4)), &w0).unwrap());
        let w_bad = Witness {
            b: vec![q(1, 2)],
            c: None,
        };
        assert!(
            !is_shattered(&rho, ShatterKind::Fat, &[pt(0, 1)], Some(&q(1, 4)), &w_bad).unwrap()
        );
    }

    #[test]
    fn curve_is_monotone_and_matches_hand_values() {
        let rho = demo().margin_class();
        let curve = dimension_curve(
            &rho,
            ShatterKind::Fat,
            &[q(1, 8), q(1, 4), q(1, 2)],
            &caps(),
        )
        .unwrap();
        assert_eq!(
            curve.samples,
            vec![(q(1, 2), 0), (q(1, 4), 1), (q(1, 8), 1)]
        );
        assert!(curve.is_monotone());
    }

    #[test]
    fn graph_kind_requires_margin_structure() {
        let rho = demo().margin_class();
        let squashed = rho.squash(&q(1, 4)).unwrap();
        assert!(dimension(&squashed, ShatterKind::Graph, &q(1, 8), &caps()).is_err());
        assert!(dimension(&squashed, ShatterKind::Fat, &q(1, 8), &caps()).is_ok());
    }

    #[test]
    fn strong_dims_of_discretized_demo() {
        let rho = demo().margin_class();
        let disc = rho.discretize(&q(1, 8)).unwrap();
        // Rows are (2, -2, -3) and (-2, 0, 0) with M = 3. b = 1 strongly
        // G-shatters {(x, 1)}: 2 - 1 >= 1 and max(0, 0) + 1 >= 1. No pair of
        // points works with two functions, so both strong dimensions are 1,
        // matching the small-scale margin dimensions (1 at gamma = 1/16).
        let (sg, cert) = strong_dimension(&disc, ShatterKind::StrongGraph, &caps()).unwrap();
        assert_eq!(sg, 1);
        let cert = cert.unwrap();
        assert_eq!(cert.witness.b, vec![qi(1)]);
        assert!(cert.replay(&disc).unwrap());
        let (sn, ncert) = strong_dimension(&disc, ShatterKind::StrongNatarajan, &caps()).unwrap();
        assert_eq!(sn, 1);
        assert!(ncert.unwrap().replay(&disc).unwrap());
        let (g16, _) = dimension(&rho, ShatterKind::Graph, &q(1, 16), &caps()).unwrap();
        let (n16, _) = dimension(&rho, ShatterKind::Natarajan, &q(1, 16), &caps()).unwrap();
        assert!(sg <= g16);
        assert!(sn <= n16);
    }

    #[test]
    fn strong_witnesses_must_be_integral_and_in_range() {
        let disc = demo().margin_class().discretize(&q(1, 8)).unwrap();
        let frac = Witness {
            b: vec![q(1, 2)],
            c: None,
        };
        assert!(matches!(
            is_shattered(&disc, ShatterKind::StrongGraph, &[pt(0, 1)], None, &frac),
            Err(Error::WitnessNotIntegral(_))
        ));
        let wide = Witness {
            b: vec![qi(3)],
            c: None,
        };
        assert!(!is_shattered(&disc, ShatterKind::StrongGraph, &[pt(0, 1)], None, &wide).unwrap());
    }

    #[test]
    fn natarajan_witness_validation() {
        let rho = demo().margin_class();
        let clash = Witness {
            b: vec![qi(0)],
            c: Some(vec![1]),
        };
        assert!(matches!(
            is_shattered(
                &rho,
                ShatterKind::Natarajan,
                &[pt(0, 1)],
                Some(&q(1, 4)),
                &clash
            ),
            Err(Error::WitnessCategoryClash)
        ));
        let missing = Witness {
            b: vec![qi(0)],
            c: None,
        };
        assert!(is_shattered(
            &rho,
            ShatterKind::Natarajan,
            &[pt(0, 1)],
            Some(&q(1, 4)),
            &missing
        )
        .is_err());
        let short = Witness { b: vec![], c: None };
        assert!(matches!(
            is_shattered(&rho, ShatterKind::Fat, &[pt(0, 1)], Some(&q(1, 4)), &short),
            Err(Error::WitnessLength { .. })
        ));
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let rho = demo().margin_class();
        let w = Witness {
            b: vec![qi(0), qi(0)],
            c: None,
        };
        assert!(is_shattered(
            &rho,
            ShatterKind::Fat,
            &[pt(0, 1), pt(0, 1)],
            Some(&q(1, 4)),
            &w
        )
        .is_err());
    }

    fn random_class(seed: u64, functions: usize) -> FiniteFunctionClass {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tables: Vec<(String, Vec<Vec<Q>>)> = (0..functions)
            .map(|i| {
                (
                    format!("g{i}"),
                    vec![(0..3).map(|_| q(rng.gen_range(-8..=8), 8)).collect()],
                )
            })
            .collect();
        FiniteFunctionClass::new(vec!["x".into()], 3, qi(1), tables).unwrap()
    }

    /// Unpruned oracle: enumerate every combination of grid witnesses per
    /// point and check dichotomies by direct scan, no feasibility or
    /// dominance filtering.
    fn oracle_fat_dimension(f: &ScoreClass, gamma: &Q, max_size: usize) -> usize {
        let n_dom = f.domain().len();
        let grids: Vec<Vec<Q>> = (0..n_dom)
            .map(|d| {
                let mut g: Vec<Q> = (0..f.num_functions())
                    .flat_map(|fi| {
                        let v = f.value(fi, d).clone();
                        [&v - gamma, &v + gamma]
                    })
                    .collect();
                g.sort();
                g.dedup();
                let mids: Vec<Q> = g.windows(2).map(|w| (&w[0] + &w[1]) / qi(2)).collect();
                g.extend(mids);
                g.sort();
                g.dedup();
                g
            })
            .collect();
        let mut best = 0;
        for size in 1..=max_size.min(n_dom) {
            let mut sel: Vec<usize> = (0..size).collect();
            let mut any = false;
            loop {
                let mut combo = vec![0usize; size];
                'combos: loop {
                    let b: Vec<Q> = sel
                        .iter()
                        .zip(&combo)
                        .map(|(&d, &ci)| grids[d][ci].clone())
                        .collect();
                    let ok = (0..1usize << size).all(|dich| {
                        (0..f.num_functions()).any(|fi| {
                            sel.iter().zip(&b).enumerate().all(|(i, (&d, bi))| {
                                let v = f.value(fi, d);
                                if dich >> i & 1 == 1 {
                                    v - bi >= *gamma
                                } else {
                                    bi - v >= *gamma
                                }
                            })
                        })
                    });
                    if ok {
                        any = true;
                        break 'combos;
                    }
                    let mut pos = size;
                    loop {
                        if pos == 0 {
                            break 'combos;
                        }
                        pos -= 1;
                        if combo[pos] + 1 < grids[sel[pos]].len() {
                            combo[pos] += 1;
                            for later in combo.iter_mut().skip(pos + 1) {
                                *later = 0;
                            }
                            break;
                        }
                    }
                }
                if any || !next_combination(&mut sel, n_dom) {
                    break;
                }
            }
            if any {
                best = size;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn fat_dimension_matches_unpruned_oracle() {
        for seed in [1u64, 2, 3, 4] {
            let rho = random_class(seed, 5).margin_class();
            for gamma in [q(1, 8), q(1, 4)] {
                let (dim, cert) = dimension(&rho, ShatterKind::Fat, &gamma, &caps()).unwrap();
                // Five functions realize at most 2^2 < 2^3 sign patterns, so
                // capping the oracle at size 2 is lossless here.
                assert!(dim <= 2);
                let oracle = oracle_fat_dimension(&rho, &gamma, 2);
                assert_eq!(dim, oracle, "seed {seed} gamma {}", rat::fmt(&gamma));
                if let Some(c) = cert {
                    assert!(c.replay(&rho).unwrap());
                }
            }
        }
    }

    /// Dense-grid oracle for the witness-grid completeness claim: every `b`
    /// on a fine rational lattice is tried directly.
    fn dense_grid_dimension(f: &ScoreClass, kind: ShatterKind, gamma: &Q) -> usize {
        // Class values are multiples of 1/8 and gamma is 1/4, so criticals
        // sit on the 1/8 lattice; a 1/16 step hits every critical and every
        // open interval between consecutive criticals.
        let step = q(1, 16);
        let lo = q(-3, 2);
        let mut grid = Vec::new();
        let mut v = lo;
        while v <= q(3, 2) {
            grid.push(v.clone());
            v += &step;
        }
        let universe: Vec<LabeledPoint> = f.domain().to_vec();
        let cats: Vec<usize> = (1..=f.num_categories()).collect();
        let mut best = 0;
        for size in 1..=2usize.min(universe.len()) {
            let mut sel: Vec<usize> = (0..size).collect();
            let mut any = false;
            loop {
                let points: Vec<LabeledPoint> = sel.iter().map(|&i| universe[i]).collect();
                let c_options: Vec<Vec<Option<usize>>> = points
                    .iter()
                    .map(|z| {
                        if kind.takes_c() {
                            cats.iter()
                                .filter(|&&k| k != z.y)
                                .map(|&k| Some(k))
                                .collect()
                        } else {
                            vec![None]
                        }
                    })
                    .collect();
                'point_search: for c0 in &c_options[0] {
                    for c1 in c_options.get(1).map(|v| v.as_slice()).unwrap_or(&[None]) {
                        for b0 in &grid {
                            for b1 in grid.iter().take(if size == 2 { grid.len() } else { 1 }) {
                                let b = if size == 2 {
                                    vec![b0.clone(), b1.clone()]
                                } else {
                                    vec![b0.clone()]
                                };
                                let cs = if kind.takes_c() {
                                    Some(
                                        [*c0, *c1][..size]
                                            .iter()
                                            .map(|o| o.unwrap())
                                            .collect::<Vec<_>>(),
                                    )
                                } else {
                                    None
                                };
                                let w = Witness { b, c: cs };
                                if is_shattered(f, kind, &points, Some(gamma), &w).unwrap() {
                                    any = true;
                                    break 'point_search;
                                }
                            }
                        }
                    }
                }
                if any || !next_combination(&mut sel, universe.len()) {
                    break;
                }
            }
            if any {
                best = size;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn witness_grid_matches_dense_grid_oracle() {
        for seed in [11u64, 12] {
            let rho = random_class(seed, 6).margin_class();
            let gamma = q(1, 4);
            for kind in [ShatterKind::Fat, ShatterKind::Graph, ShatterKind::Natarajan] {
                let (dim, _) = dimension(&rho, kind, &gamma, &caps()).unwrap();
                let dense = dense_grid_dimension(&rho, kind, &gamma);
                if dim <= 2 {
                    assert_eq!(dim, dense, "seed {seed} kind {}", kind.as_str());
                } else {
                    assert_eq!(dense, 2);
                }
            }
        }
    }

    #[test]
    fn ordering_holds_on_random_margin_classes() {
        for seed in 20u64..40 {
            let rho = random_class(seed, 6).margin_class();
            for gamma in [q(1, 8), q(1, 4), q(1, 2)] {
                let (fat, _) = dimension(&rho, ShatterKind::Fat, &gamma, &caps()).unwrap();
                let (g, _) = dimension(&rho, ShatterKind::Graph, &gamma, &caps()).unwrap();
                let (n, _) = dimension(&rho, ShatterKind::Natarajan, &gamma, &caps()).unwrap();
                assert!(n <= g, "seed {seed}: natarajan {n} > graph {g}");
                assert!(g <= fat, "seed {seed}: graph {g} > fat {fat}");
            }
        }
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for kind in [
            ShatterKind::Fat,
            ShatterKind::Graph,
            ShatterKind::Natarajan,
            ShatterKind::StrongGraph,
            ShatterKind::StrongNatarajan,
        ] {
            assert_eq!(kind.as_str().parse::<ShatterKind>().unwrap(), kind);
        }
        assert!("vapnik".parse::<ShatterKind>().is_err());
    }
}
