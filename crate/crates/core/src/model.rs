//! Finite function classes and the margin calculus on top of them.
//!
//! A [`FiniteFunctionClass`] holds exact rational score tables for functions
//! `g: X -> [-M, M]^C` over a finite description set `X` and `C >= 3`
//! categories. From it one derives [`ScoreClass`] views:
//!
//! ```text
//! margin:      rho_g(x, k) = (g_k(x) - max_{l != k} g_l(x)) / 2
//! squashing:   pi_gamma(t) = 0 for t <= 0, t for 0 < t <= gamma, gamma for t > gamma
//! discretize:  t^(eta)     = sign(t) * floor(|t| / eta)
//! ```
//!
//! The decision rule picks the argmax score and rejects on ties. Margin
//! losses at scale `gamma` come in two exact-rational flavours: the hard loss
//! `1{t < gamma}` and the ramp `1{t <= 0} + (1 - t/gamma) 1{0 < t <= gamma}`.

use crate::error::{Error, Result};
use crate::rat::{self, Q};
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A labeled description: `x` indexes the description set, `y` is a 1-based
/// category in `[1, C]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub x: usize,
    pub y: usize,
}

impl LabeledPoint {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// Non-empty sequence of labeled points (repetitions allowed: empirical
/// metrics average over positions, not over distinct points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample(Vec<LabeledPoint>);

impl Sample {
    pub fn new(entries: Vec<LabeledPoint>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabeledPoint> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[LabeledPoint] {
        &self.0
    }
}

/// Outcome of the argmax decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Unique argmax category (1-based).
    Category(usize),
    /// Tied argmax: the rule abstains.
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Hard,
    Ramp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueKind {
    Real,
    Integer,
}

/// Finite class of vector-valued scoring functions with exact rational
/// entries, all bounded by `M` in absolute value.
#[derive(Debug, Clone)]
pub struct FiniteFunctionClass {
    points: Vec<String>,
    c: usize,
    bound: Q,
    names: Vec<String>,
    /// `tables[f][x][k0]` with `k0 = y - 1`.
    tables: Vec<Vec<Vec<Q>>>,
}

impl FiniteFunctionClass {
    pub fn new(
        points: Vec<String>,
        c: usize,
        bound: Q,
        functions: Vec<(String, Vec<Vec<Q>>)>,
    ) -> Result<Self> {
        if c < 3 {
            return Err(Error::TooFewCategories(c));
        }
        if points.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if functions.is_empty() {
            return Err(Error::EmptyClass);
        }
        if bound < Q::one() {
            return Err(Error::BoundTooSmall(rat::fmt(&bound)));
        }
        let mut seen = BTreeSet::new();
        let mut names = Vec::with_capacity(functions.len());
        let mut tables = Vec::with_capacity(functions.len());
        for (name, table) in functions {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name));
            }
            if table.len() != points.len() {
                return Err(Error::BadTableShape {
                    name,
                    point: table.len(),
                });
            }
            for (x, row) in table.iter().enumerate() {
                if row.len() != c {
                    return Err(Error::BadTableShape { name, point: x });
                }
                for v in row {
                    if v.abs() > bound {
                        return Err(Error::ValueOutOfRange {
                            value: rat::fmt(v),
                            bound: rat::fmt(&bound),
                        });
                    }
                }
            }
            names.push(name);
            tables.push(table);
        }
        Ok(Self {
            points,
            c,
            bound,
            names,
            tables,
        })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_categories(&self) -> usize {
        self.c
    }

    pub fn num_functions(&self) -> usize {
        self.names.len()
    }

    pub fn bound(&self) -> &Q {
        &self.bound
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_names(&self) -> &[String] {
        &self.points
    }

    /// Raw score `g_y(x)` for a 1-based category `y`.
    pub fn value(&self, f: usize, x: usize, y: usize) -> &Q {
        &self.tables[f][x][y - 1]
    }

    pub fn row(&self, f: usize, x: usize) -> &[Q] {
        &self.tables[f][x]
    }

    /// Argmax decision with reject on ties.
    pub fn classify(&self, f: usize, x: usize) -> Result<Decision> {
        if f >= self.names.len() {
            return Err(Error::FunctionOutOfRange {
                f,
                n: self.names.len(),
            });
        }
        if x >= self.points.len() {
            return Err(Error::PointOutOfRange {
                x,
                n: self.points.len(),
            });
        }
        let row = &self.tables[f][x];
        let mut best = 0usize;
        let mut tied = false;
        for k in 1..self.c {
            if row[k] > row[best] {
                best = k;
                tied = false;
            } else if row[k] == row[best] {
                tied = true;
            }
        }
        Ok(if tied {
            Decision::Reject
        } else {
            Decision::Category(best + 1)
        })
    }

    /// The margin class `rho_G` over the full labeled domain `X x [1, C]`,
    /// domain ordered description-major.
    pub fn margin_class(&self) -> ScoreClass {
        let mut domain = Vec::with_capacity(self.points.len() * self.c);
        for x in 0..self.points.len() {
            for y in 1..=self.c {
                domain.push(LabeledPoint::new(x, y));
            }
        }
        let values = self
            .tables
            .iter()
            .map(|table| {
                domain
                    .iter()
                    .map(|z| margin_value(&table[z.x], z.y))
                    .collect()
            })
            .collect();
        ScoreClass::new_unchecked(
            domain,
            self.c,
            self.names.clone(),
            values,
            ValueKind::Real,
            -self.bound.clone(),
            self.bound.clone(),
            true,
        )
    }

    /// Component class `G_k = {g_k : g in G}` viewed on the points `(x, k)`.
    pub fn component_class(&self, k: usize) -> Result<ScoreClass> {
        if k == 0 || k > self.c {
            return Err(Error::CategoryOutOfRange { y: k, c: self.c });
        }
        let domain: Vec<_> = (0..self.points.len())
            .map(|x| LabeledPoint::new(x, k))
            .collect();
        let values = self
            .tables
            .iter()
            .map(|table| {
                (0..self.points.len())
                    .map(|x| table[x][k - 1].clone())
                    .collect()
            })
            .collect();
        Ok(ScoreClass::new_unchecked(
            domain,
            self.c,
            self.names.clone(),
            values,
            ValueKind::Real,
            -self.bound.clone(),
            self.bound.clone(),
            false,
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let functions: Vec<_> = self
            .names
            .iter()
            .zip(&self.tables)
            .map(|(name, table)| {
                serde_json::json!({
                    "name": name,
                    "values": table
                        .iter()
                        .map(|row| row.iter().map(rat::fmt).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "C": self.c,
            "M": rat::fmt(&self.bound),
            "points": self.points,
            "functions": functions,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let file: ClassFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::BadClassFile(e.to_string()))?;
        file.build()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ClassFile =
            serde_json::from_str(s).map_err(|e| Error::BadClassFile(e.to_string()))?;
        file.build()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawQ {
    Int(i64),
    Str(String),
}

impl RawQ {
    fn to_q(&self) -> Result<Q> {
        match self {
            RawQ::Int(i) => Ok(rat::qi(*i)),
            RawQ::Str(s) => rat::parse(s),
        }
    }
}

#[derive(Deserialize)]
struct ClassFileFunction {
    name: String,
    values: Vec<Vec<RawQ>>,
}

#[derive(Deserialize)]
struct ClassFile {
    #[serde(rename = "C")]
    c: usize,
    #[serde(rename = "M")]
    m: RawQ,
    points: Vec<String>,
    functions: Vec<ClassFileFunction>,
}

impl ClassFile {
    fn build(self) -> Result<FiniteFunctionClass> {
        let bound = self.m.to_q()?;
        let functions = self
            .functions
            .into_iter()
            .map(|f| {
                let table = f
                    .values
                    .iter()
                    .map(|row| row.iter().map(RawQ::to_q).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok((f.name, table))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteFunctionClass::new(self.points, self.c, bound, functions)
    }
}

/// `rho` row entry for a 1-based category `y`.
pub fn margin_value(row: &[Q], y: usize) -> Q {
    let k0 = y - 1;
    let rest = row
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k0)
        .map(|(_, v)| v)
        .max()
        .expect("at least two categories");
    (&row[k0] - rest) / rat::qi(2)
}

/// Piecewise-linear squashing onto `[0, gamma]`.
pub fn squash_value(t: &Q, gamma: &Q) -> Q {
    if t <= &Q::zero() {
        Q::zero()
    } else if t <= gamma {
        t.clone()
    } else {
        gamma.clone()
    }
}

/// Signed discretization `sign(t) * floor(|t| / eta)` as an integer rational.
pub fn discretize_value(t: &Q, eta: &Q) -> Q {
    let steps = (t.abs() / eta).floor();
    if t.is_negative() {
        -steps
    } else {
        steps
    }
}

/// A finite class of scalar functions over labeled points: the common shape
/// for margin classes, squashed classes, component classes and discretized
/// classes. Dimension searches and metrics run on this type.
#[derive(Debug, Clone)]
pub struct ScoreClass {
    domain: Vec<LabeledPoint>,
    c: usize,
    names: Vec<String>,
    /// `values[f][d]` for domain index `d`.
    values: Vec<Vec<Q>>,
    value_kind: ValueKind,
    range_lo: Q,
    range_hi: Q,
    margin_structured: bool,
    index: BTreeMap<(usize, usize), usize>,
}

impl ScoreClass {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        domain: Vec<LabeledPoint>,
        c: usize,
        names: Vec<String>,
        values: Vec<Vec<Q>>,
        value_kind: ValueKind,
        range_lo: Q,
        range_hi: Q,
        margin_structured: bool,
    ) -> Result<Self> {
        if c < 3 {
            return Err(Error::TooFewCategories(c));
        }
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if names.is_empty() || values.len() != names.len() {
            return Err(Error::EmptyClass);
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        for z in &domain {
            if z.y == 0 || z.y > c {
                return Err(Error::CategoryOutOfRange { y: z.y, c });
            }
        }
        for (name, row) in names.iter().zip(&values) {
            if row.len() != domain.len() {
                return Err(Error::BadTableShape {
                    name: name.clone(),
                    point: row.len(),
                });
            }
            for v in row {
                if *v < range_lo || *v > range_hi {
                    return Err(Error::ValueOutOfRange {
                        value: rat::fmt(v),
                        bound: format!("[{}, {}]", rat::fmt(&range_lo), rat::fmt(&range_hi)),
                    });
                }
                if value_kind == ValueKind::Integer && !v.denom().is_one() {
                    return Err(Error::ExpectedIntegerValues);
                }
            }
        }
        let class = Self::new_unchecked(
            domain,
            c,
            names,
            values,
            value_kind,
            range_lo,
            range_hi,
            margin_structured,
        );
        if margin_structured {
            class.check_margin_structure()?;
        }
        Ok(class)
    }

    #[allow(clippy::too_many_arguments)]
    fn new_unchecked(
        domain: Vec<LabeledPoint>,
        c: usize,
        names: Vec<String>,
        values: Vec<Vec<Q>>,
        value_kind: ValueKind,
        range_lo: Q,
        range_hi: Q,
        margin_structured: bool,
    ) -> Self {
        let index = domain
            .iter()
            .enumerate()
            .map(|(i, z)| ((z.x, z.y), i))
            .collect();
        Self {
            domain,
            c,
            names,
            values,
            value_kind,
            range_lo,
            range_hi,
            margin_structured,
            index,
        }
    }

    pub fn domain(&self) -> &[LabeledPoint] {
        &self.domain
    }

    pub fn num_categories(&self) -> usize {
        self.c
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_functions(&self) -> usize {
        self.names.len()
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    pub fn range(&self) -> (&Q, &Q) {
        (&self.range_lo, &self.range_hi)
    }

    pub fn is_margin_structured(&self) -> bool {
        self.margin_structured
    }

    /// Value by domain index.
    pub fn value(&self, f: usize, d: usize) -> &Q {
        &self.values[f][d]
    }

    pub fn domain_index(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    /// Value at a labeled point, if the point is in the domain.
    pub fn value_at(&self, f: usize, x: usize, y: usize) -> Option<&Q> {
        self.domain_index(x, y).map(|d| &self.values[f][d])
    }

    /// `M_F`: the positive integer bound for strong (integer) shattering,
    /// `max(1, max |f|)`.
    pub fn integer_bound(&self) -> Result<BigInt> {
        if self.value_kind != ValueKind::Integer {
            return Err(Error::ExpectedIntegerValues);
        }
        let mut m = BigInt::one();
        for row in &self.values {
            for v in row {
                let a = v.numer().abs();
                if a > m {
                    m = a;
                }
            }
        }
        Ok(m)
    }

    /// Verifies `max_{k<l} (f(x,k) + f(x,l)) = 0` for every function and every
    /// description with a full category row.
    pub fn check_margin_structure(&self) -> Result<()> {
        let xs: BTreeSet<usize> = self.domain.iter().map(|z| z.x).collect();
        for &x in &xs {
            let row_idx: Vec<Option<usize>> =
                (1..=self.c).map(|y| self.domain_index(x, y)).collect();
            if row_idx.iter().any(Option::is_none) {
                continue;
            }
            for (f, _) in self.names.iter().enumerate() {
                let mut best: Option<Q> = None;
                for k in 0..self.c {
                    for l in (k + 1)..self.c {
                        let s = &self.values[f][row_idx[k].unwrap()]
                            + &self.values[f][row_idx[l].unwrap()];
                        if best.as_ref().is_none_or(|b| s > *b) {
                            best = Some(s);
                        }
                    }
                }
                if best.expect("c >= 3") != Q::zero() {
                    return Err(Error::KindMismatch(format!(
                        "function `{}` is not margin-structured at description {}",
                        self.names[f], x
                    )));
                }
            }
        }
        Ok(())
    }

    /// Squashed view `pi_gamma . f`; requires real values and `gamma` in (0, 1].
    pub fn squash(&self, gamma: &Q) -> Result<ScoreClass> {
        if self.value_kind != ValueKind::Real {
            return Err(Error::ExpectedRealValues);
        }
        check_gamma(gamma)?;
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| squash_value(v, gamma)).collect())
            .collect();
        Ok(Self::new_unchecked(
            self.domain.clone(),
            self.c,
            self.names.clone(),
            values,
            ValueKind::Real,
            Q::zero(),
            gamma.clone(),
            false,
        ))
    }

    /// Discretized view `f^(eta)`; requires real values and `eta > 0`.
    /// Margin structure survives discretization (the top pair maps to `(t, -t)`
    /// and the floor is monotone), so the flag is preserved.
    pub fn discretize(&self, eta: &Q) -> Result<ScoreClass> {
        if self.value_kind != ValueKind::Real {
            return Err(Error::ExpectedRealValues);
        }
        if !eta.is_positive() {
            return Err(Error::EtaNotPositive(rat::fmt(eta)));
        }
        let values: Vec<Vec<Q>> = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| discretize_value(v, eta)).collect())
            .collect();
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        for row in &values {
            for v in row {
                if *v < lo {
                    lo = v.clone();
                }
                if *v > hi {
                    hi = v.clone();
                }
            }
        }
        Ok(Self::new_unchecked(
            self.domain.clone(),
            self.c,
            self.names.clone(),
            values,
            ValueKind::Integer,
            lo,
            hi,
            self.margin_structured,
        ))
    }
}

pub(crate) fn check_gamma(gamma: &Q) -> Result<()> {
    if !gamma.is_positive() || *gamma > Q::one() {
        return Err(Error::GammaOutOfRange(rat::fmt(gamma)));
    }
    Ok(())
}

/// Mean margin loss of function `f` over the sample at scale `gamma`.
pub fn empirical_margin_risk(
    class: &FiniteFunctionClass,
    f: usize,
    sample: &Sample,
    gamma: &Q,
    loss: LossKind,
) -> Result<Q> {
    check_gamma(gamma)?;
    let mut total = Q::zero();
    for z in sample.iter() {
        if z.x >= class.num_points() {
            return Err(Error::PointOutOfRange {
                x: z.x,
                n: class.num_points(),
            });
        }
        if z.y == 0 || z.y > class.num_categories() {
            return Err(Error::CategoryOutOfRange {
                y: z.y,
                c: class.num_categories(),
            });
        }
        let t = margin_value(class.row(f, z.x), z.y);
        total += match loss {
            LossKind::Hard => {
                if t < *gamma {
                    Q::one()
                } else {
                    Q::zero()
                }
            }
            LossKind::Ramp => {
                if t <= Q::zero() {
                    Q::one()
                } else if t <= *gamma {
                    Q::one() - t / gamma
                } else {
                    Q::zero()
                }
            }
        };
    }
    Ok(total / rat::qi(sample.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    pub(crate) fn demo_class() -> FiniteFunctionClass {
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

    #[test]
    fn margin_rows_of_demo_class() {
        let g = demo_class();
        let rho = g.margin_class();
        let expect = [[q(1, 4), q(-1, 4), q(-3, 8)], [q(-1, 4), qi(0), qi(0)]];
        for (f, row) in expect.iter().enumerate() {
            for y in 1..=3 {
                assert_eq!(
                    rho.value_at(f, 0, y).unwrap(),
                    &row[y - 1],
                    "rho row mismatch at f={f}, y={y}"
                );
            }
        }
        assert!(rho.is_margin_structured());
        rho.check_margin_structure().unwrap();
    }

    #[test]
    fn classify_rejects_on_ties() {
        let g = demo_class();
        assert_eq!(g.classify(0, 0).unwrap(), Decision::Category(1));
        // g2 ties categories 2 and 3.
        assert_eq!(g.classify(1, 0).unwrap(), Decision::Reject);
    }

    #[test]
    fn squash_clamps_to_unit_interval_of_gamma() {
        let rho = demo_class().margin_class();
        let s = rho.squash(&q(1, 4)).unwrap();
        assert_eq!(s.value_at(0, 0, 1).unwrap(), &q(1, 4));
        assert_eq!(s.value_at(0, 0, 2).unwrap(), &qi(0));
        assert_eq!(s.value_at(1, 0, 2).unwrap(), &qi(0));
        assert!(!s.is_margin_structured());
        // Squashing is idempotent at the same scale.
        let ss = s.squash(&q(1, 4)).unwrap();
        for f in 0..2 {
            for y in 1..=3 {
                assert_eq!(ss.value_at(f, 0, y), s.value_at(f, 0, y));
            }
        }
    }

    #[test]
    fn squash_needs_gamma_in_unit_interval() {
        let rho = demo_class().margin_class();
        assert!(rho.squash(&qi(0)).is_err());
        assert!(rho.squash(&qi(2)).is_err());
    }

    #[test]
    fn discretize_floors_toward_zero_and_keeps_margin_structure() {
        let rho = demo_class().margin_class();
        let d = rho.discretize(&q(1, 8)).unwrap();
        assert_eq!(d.value_at(0, 0, 1).unwrap(), &qi(2)); // 1/4 -> 2 eighths
        assert_eq!(d.value_at(0, 0, 3).unwrap(), &qi(-3)); // -3/8 -> -3
        assert_eq!(d.value_kind(), ValueKind::Integer);
        assert!(d.is_margin_structured());
        d.check_margin_structure().unwrap();
        assert_eq!(discretize_value(&q(-5, 8), &q(1, 4)), qi(-2));
        assert_eq!(discretize_value(&q(5, 8), &q(1, 4)), qi(2));
    }

    #[test]
    fn risk_matches_hand_values() {
        let g = demo_class();
        let z1 = Sample::new(vec![LabeledPoint::new(0, 1)]).unwrap();
        // g1 at (x,1): rho = 1/4, not below gamma = 1/4.
        assert_eq!(
            empirical_margin_risk(&g, 0, &z1, &q(1, 4), LossKind::Hard).unwrap(),
            qi(0)
        );
        // ramp at rho = 1/4 with gamma = 1/2: 1 - (1/4)/(1/2) = 1/2.
        assert_eq!(
            empirical_margin_risk(&g, 0, &z1, &q(1, 2), LossKind::Ramp).unwrap(),
            q(1, 2)
        );
        // g2 at (x,1): rho = -1/4 -> ramp saturates at 1.
        assert_eq!(
            empirical_margin_risk(&g, 1, &z1, &q(1, 2), LossKind::Ramp).unwrap(),
            qi(1)
        );
    }

    #[test]
    fn component_class_exposes_per_category_scores() {
        let g = demo_class();
        let g1 = g.component_class(1).unwrap();
        assert_eq!(g1.value_at(0, 0, 1).unwrap(), &q(3, 4));
        assert_eq!(g1.value_at(1, 0, 1).unwrap(), &qi(0));
        assert!(g.component_class(0).is_err());
        assert!(g.component_class(4).is_err());
    }

    #[test]
    fn class_file_round_trip() {
        let g = demo_class();
        let json = g.to_json();
        let back = FiniteFunctionClass::from_json(&json).unwrap();
        assert_eq!(back.names(), g.names());
        assert_eq!(back.value(0, 0, 1), g.value(0, 0, 1));
        assert_eq!(back.bound(), g.bound());
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(FiniteFunctionClass::new(
            vec!["x".into()],
            2,
            qi(1),
            vec![("g".into(), vec![vec![qi(0), qi(0)]])],
        )
        .is_err());
        assert!(FiniteFunctionClass::new(
            vec!["x".into()],
            3,
            q(1, 2),
            vec![("g".into(), vec![vec![qi(0), qi(0), qi(0)]])],
        )
        .is_err());
        assert!(FiniteFunctionClass::new(
            vec!["x".into()],
            3,
            qi(1),
            vec![
                ("g".into(), vec![vec![qi(0), qi(0), qi(0)]]),
                ("g".into(), vec![vec![qi(0), qi(0), qi(0)]])
            ],
        )
        .is_err());
    }
}
