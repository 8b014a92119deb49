//! Empirical pseudo-metrics and exact packing / covering numbers.
//!
//! For a sample `t_n = (t_1, ..., t_n)` and functions `f, f'`:
//!
//! ```text
//! d_{p,t_n}(f, f')   = ( (1/n) sum_i |f(t_i) - f'(t_i)|^p )^(1/p)
//! d_{inf,t_n}(f, f') = max_i |f(t_i) - f'(t_i)|
//! ```
//!
//! All comparisons run on exact rationals: for finite `p` the `p`-th power of
//! the distance is rational and is compared against the `p`-th power of the
//! radius, so irrational roots never appear in a predicate.
//!
//! Conventions: a packing is `>= eps`-separated; a proper covering uses open
//! balls (`< eps`) whose centers belong to the class. Under these conventions
//! `M(2 eps) <= N_int(eps) <= M(eps)` holds exactly, which the harness checks.

use crate::error::{Error, Result};
use crate::model::{LabeledPoint, Sample, ScoreClass};
use crate::rat::{self, Q};
use num::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PNorm {
    /// Finite exponent `p >= 1`.
    P(u32),
    Infinity,
}

impl PNorm {
    pub fn validate(self) -> Result<Self> {
        match self {
            PNorm::P(0) => Err(Error::BadExponent),
            other => Ok(other),
        }
    }
}

/// An exact distance value: for finite `p` the stored representation is the
/// power mean `(1/n) sum |delta|^p`, for the sup norm it is the max itself.
#[derive(Debug, Clone)]
pub struct Distance {
    p: PNorm,
    repr: Q,
}

impl Distance {
    pub fn p(&self) -> PNorm {
        self.p
    }

    /// The exact rational representation (`p`-th power of the distance for
    /// finite `p`).
    pub fn exact_repr(&self) -> &Q {
        &self.repr
    }

    /// Distance as a double, taking the root where needed.
    pub fn approx(&self) -> f64 {
        match self.p {
            PNorm::Infinity => rat::to_f64(&self.repr),
            PNorm::P(1) => rat::to_f64(&self.repr),
            PNorm::P(p) => rat::to_f64(&self.repr).powf(1.0 / f64::from(p)),
        }
    }

    pub fn ge(&self, thr: &Threshold) -> bool {
        debug_assert_eq!(self.p, thr.p);
        self.repr >= thr.repr
    }

    pub fn lt(&self, thr: &Threshold) -> bool {
        !self.ge(thr)
    }
}

/// A separation / covering radius, stored in the same representation as
/// [`Distance`] (power of the radius for finite `p`). `from_power` admits
/// radii like `eps * C^(-1/p)` whose `p`-th power is rational even though the
/// radius itself is not.
#[derive(Debug, Clone)]
pub struct Threshold {
    p: PNorm,
    repr: Q,
}

impl Threshold {
    pub fn from_eps(eps: &Q, p: PNorm) -> Result<Self> {
        let p = p.validate()?;
        if !eps.is_positive() {
            return Err(Error::EpsOutOfRange {
                eps: rat::fmt(eps),
                lo: "0".into(),
                hi: "inf".into(),
            });
        }
        let repr = match p {
            PNorm::Infinity => eps.clone(),
            PNorm::P(k) => num::pow::pow(eps.clone(), k as usize),
        };
        Ok(Self { p, repr })
    }

    /// Radius given directly as its `p`-th power (must be positive). For the
    /// sup norm the value is the radius itself.
    pub fn from_power(power: Q, p: PNorm) -> Result<Self> {
        let p = p.validate()?;
        if !power.is_positive() {
            return Err(Error::EpsOutOfRange {
                eps: rat::fmt(&power),
                lo: "0".into(),
                hi: "inf".into(),
            });
        }
        Ok(Self { p, repr: power })
    }

    pub fn p(&self) -> PNorm {
        self.p
    }

    pub fn approx_eps(&self) -> f64 {
        match self.p {
            PNorm::Infinity | PNorm::P(1) => rat::to_f64(&self.repr),
            PNorm::P(k) => rat::to_f64(&self.repr).powf(1.0 / f64::from(k)),
        }
    }
}

/// Exact empirical distance between functions `i` and `j` of the class over
/// the sample.
pub fn dist(f: &ScoreClass, i: usize, j: usize, sample: &Sample, p: PNorm) -> Result<Distance> {
    let p = p.validate()?;
    let rows = restriction(f, sample)?;
    Ok(dist_rows(&rows[i], &rows[j], p))
}

fn dist_rows(a: &[Q], b: &[Q], p: PNorm) -> Distance {
    match p {
        PNorm::Infinity => {
            let m = a
                .iter()
                .zip(b)
                .map(|(u, v)| (u - v).abs())
                .max()
                .unwrap_or_else(Q::zero);
            Distance { p, repr: m }
        }
        PNorm::P(k) => {
            let mut s = Q::zero();
            for (u, v) in a.iter().zip(b) {
                s += num::pow::pow((u - v).abs(), k as usize);
            }
            Distance {
                p,
                repr: s / rat::qi(a.len() as i64),
            }
        }
    }
}

/// Values of every function on the sample positions.
fn restriction(f: &ScoreClass, sample: &Sample) -> Result<Vec<Vec<Q>>> {
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    /// Branch-and-bound maximum clique on the separation graph.
    Exact,
    /// First-fit greedy; a valid packing, hence a lower bound.
    Greedy,
}

#[derive(Debug, Clone)]
pub struct PackingResult {
    pub value: usize,
    pub exact: bool,
    /// Function names realizing the packing (or covering centers).
    pub witness: Vec<String>,
}

/// Collapse functions with identical restrictions; returns (rows, representative name indices).
fn distinct_rows(f: &ScoreClass, sample: &Sample) -> Result<(Vec<Vec<Q>>, Vec<usize>)> {
    let rows = restriction(f, sample)?;
    let mut seen: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut distinct = Vec::new();
    for (fi, row) in rows.into_iter().enumerate() {
        if !seen.contains_key(&row) {
            seen.insert(row.clone(), fi);
            reps.push(fi);
            distinct.push(row);
        }
    }
    Ok((distinct, reps))
}

/// Largest subset of pairwise `>= eps`-separated functions on the sample.
pub fn packing_number(
    f: &ScoreClass,
    sample: &Sample,
    thr: &Threshold,
    mode: PackingMode,
    cap: usize,
) -> Result<PackingResult> {
    let (rows, reps) = distinct_rows(f, sample)?;
    let n = rows.len();
    if n > 64 || n > cap {
        return Err(Error::CapExceeded {
            what: "distinct functions in packing search",
            got: n,
            cap: cap.min(64),
        });
    }
    let adj = separation_graph(&rows, thr);
    let members = match mode {
        PackingMode::Greedy => {
            let mut kept: Vec<usize> = Vec::new();
            for v in 0..n {
                if kept.iter().all(|&u| adj[u] >> v & 1 == 1) {
                    kept.push(v);
                }
            }
            kept
        }
        PackingMode::Exact => {
            let mut search = CliqueSearch {
                adj: &adj,
                best: Vec::new(),
                cur: Vec::new(),
            };
            let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
            search.expand(full, 0);
            search.best
        }
    };
    let mut witness: Vec<String> = members
        .iter()
        .map(|&v| f.names()[reps[v]].clone())
        .collect();
    witness.sort();
    Ok(PackingResult {
        value: members.len(),
        exact: mode == PackingMode::Exact,
        witness,
    })
}

fn separation_graph(rows: &[Vec<Q>], thr: &Threshold) -> Vec<u64> {
    let n = rows.len();
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dist_rows(&rows[i], &rows[j], thr.p).ge(thr) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

struct CliqueSearch<'a> {
    adj: &'a [u64],
    best: Vec<usize>,
    cur: Vec<usize>,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut p: u64, mut x: u64) {
        if p == 0 {
            if x == 0 && self.cur.len() > self.best.len() {
                self.best = self.cur.clone();
            }
            return;
        }
        if self.cur.len() + p.count_ones() as usize <= self.best.len() {
            return;
        }
        // Pivot on the vertex of P | X with the most neighbours in P.
        let mut pivot = usize::MAX;
        let mut pivot_deg = usize::MAX;
        let mut scan = p | x;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (p & self.adj[u]).count_ones() as usize;
            if pivot == usize::MAX || deg > pivot_deg {
                pivot = u;
                pivot_deg = deg;
            }
        }
        let mut cand = p & !self.adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.cur.push(v);
            self.expand(p & self.adj[v], x & self.adj[v]);
            self.cur.pop();
            p &= !(1u64 << v);
            x |= 1u64 << v;
        }
    }
}

/// Minimum number of functions from the class whose open `eps`-balls cover
/// the whole class (proper covering). Exact branch-and-bound.
pub fn proper_covering_number(
    f: &ScoreClass,
    sample: &Sample,
    thr: &Threshold,
    cap: usize,
) -> Result<PackingResult> {
    let (rows, reps) = distinct_rows(f, sample)?;
    let n = rows.len();
    if n > 64 || n > cap {
        return Err(Error::CapExceeded {
            what: "distinct functions in covering search",
            got: n,
            cap: cap.min(64),
        });
    }
    let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut balls = vec![0u64; n];
    for c in 0..n {
        for v in 0..n {
            if dist_rows(&rows[c], &rows[v], thr.p).lt(thr) {
                balls[c] |= 1 << v;
            }
        }
    }
    // Greedy upper bound seeds the search.
    let mut best: Vec<usize> = Vec::new();
    let mut covered = 0u64;
    while covered != full {
        let c = (0..n)
            .max_by_key(|&c| (balls[c] & !covered).count_ones())
            .expect("non-empty");
        best.push(c);
        covered |= balls[c];
    }
    let max_ball = balls.iter().map(|b| b.count_ones()).max().unwrap_or(1) as usize;
    let mut search = CoverSearch {
        balls: &balls,
        full,
        max_ball: max_ball.max(1),
        best,
    };
    let mut chosen = Vec::new();
    search.descend(0, &mut chosen);
    let mut witness: Vec<String> = search
        .best
        .iter()
        .map(|&c| f.names()[reps[c]].clone())
        .collect();
    witness.sort();
    Ok(PackingResult {
        value: search.best.len(),
        exact: true,
        witness,
    })
}

struct CoverSearch<'a> {
    balls: &'a [u64],
    full: u64,
    max_ball: usize,
    best: Vec<usize>,
}

impl CoverSearch<'_> {
    fn descend(&mut self, covered: u64, chosen: &mut Vec<usize>) {
        if covered == self.full {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let remaining = (self.full & !covered).count_ones() as usize;
        if chosen.len() + remaining.div_ceil(self.max_ball) >= self.best.len() {
            return;
        }
        // Branch on the uncovered element with the fewest candidate centers.
        let mut pick = usize::MAX;
        let mut pick_count = usize::MAX;
        let mut scan = self.full & !covered;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let count = (0..self.balls.len())
                .filter(|&c| self.balls[c] >> v & 1 == 1)
                .count();
            if count < pick_count {
                pick = v;
                pick_count = count;
            }
        }
        let mut centers: Vec<usize> = (0..self.balls.len())
            .filter(|&c| self.balls[c] >> pick & 1 == 1)
            .collect();
        centers.sort_by_key(|&c| std::cmp::Reverse((self.balls[c] & !covered).count_ones()));
        for c in centers {
            chosen.push(c);
            self.descend(covered | self.balls[c], chosen);
            chosen.pop();
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniformPackingResult {
    pub packing: PackingResult,
    /// A sample attaining the reported value.
    pub sample: Sample,
    /// True when every multiset of the given size was enumerated.
    pub exhaustive: bool,
}

/// `sup` of the packing number over samples of length `n` drawn from the
/// class domain. The empirical metrics are permutation-invariant, so the
/// search ranges over multisets. When the multiset count exceeds `budget`,
/// a seeded random subset is tried instead and the result is flagged
/// non-exhaustive.
pub fn uniform_packing(
    f: &ScoreClass,
    n: usize,
    thr: &Threshold,
    cap: usize,
    budget: usize,
    seed: u64,
) -> Result<UniformPackingResult> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let d = f.domain().len();
    let total = multiset_count(d, n);
    let exhaustive = total.map(|t| t <= budget as u128).unwrap_or(false);
    let mut best: Option<(PackingResult, Vec<usize>)> = None;
    let mut consider = |idx: &[usize], f: &ScoreClass| -> Result<()> {
        let entries: Vec<LabeledPoint> = idx.iter().map(|&i| f.domain()[i]).collect();
        let sample = Sample::new(entries)?;
        let r = packing_number(f, &sample, thr, PackingMode::Exact, cap)?;
        if best.as_ref().is_none_or(|(b, _)| r.value > b.value) {
            best = Some((r, idx.to_vec()));
        }
        Ok(())
    };
    if exhaustive {
        let mut idx = vec![0usize; n];
        'outer: loop {
            consider(&idx, f)?;
            let mut pos = n;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if idx[pos] + 1 < d {
                    let v = idx[pos] + 1;
                    for slot in idx.iter_mut().skip(pos) {
                        *slot = v;
                    }
                    continue 'outer;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let mut idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..d)).collect();
            idx.sort_unstable();
            consider(&idx, f)?;
        }
    }
    let (packing, idx) = best.expect("at least one sample considered");
    let sample = Sample::new(idx.iter().map(|&i| f.domain()[i]).collect())?;
    Ok(UniformPackingResult {
        packing,
        sample,
        exhaustive,
    })
}

fn multiset_count(d: usize, n: usize) -> Option<u128> {
    // C(d + n - 1, n) with overflow detection
    let mut num: u128 = 1;
    for i in 0..n {
        num = num.checked_mul((d + n - 1 - i) as u128)?;
        num /= (i + 1) as u128;
    }
    Some(num)
}
