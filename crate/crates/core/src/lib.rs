//! Exact combinatorics and closed-form bound evaluators for margin
//! multi-category classifiers.
//!
//! The crate is organized around a finite, exact-rational representation of a
//! function class `G = {g: X -> [-M, M]^C}`:
//!
//! * [`model`]: classes, margin functions, squashing, discretization, losses;
//! * [`metrics`]: empirical `L_p` pseudo-metrics, packing and proper covering
//!   numbers (exact search), uniform packing over samples;
//! * [`dims`]: scale-sensitive shattering dimensions (fat, Graph, Natarajan,
//!   and their strong integer-valued variants) with replayable certificates;
//! * [`bounds`]: double-precision evaluators for the closed-form packing,
//!   entropy, and risk bounds, with named precondition errors;
//! * [`rademacher`]: exact and Monte-Carlo empirical Rademacher complexity
//!   plus the sign-matrix comparison quantity;
//! * [`harness`]: seeded instance generators and brute-force verification
//!   suites that check each inequality end to end and emit JSON reports.
//!
//! Conventions used everywhere (they make the sandwich
//! `M(2eps) <= N_int(eps) <= M(eps)` exact):
//!
//! * a packing is a set of functions at pairwise distance `>= eps`;
//! * a proper covering uses open balls (`< eps`) with centers in the class;
//! * ties in the decision rule yield a reject outcome, never a category;
//! * a dimension term `d = 0` turns a product bound into 1 (the ceiling-form
//!   packing bound keeps its leading factor 2).

pub mod bounds;
pub mod dims;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod rademacher;
pub mod rat;

pub use error::Error;
pub use rat::Q;

pub use bounds::{BoundParams, ChainEvaluation, ChainSchedule, Variant};
pub use dims::{
    dimension, dimension_curve, is_shattered, strong_dimension, DimensionCurve, SearchCaps,
    ShatterCertificate, ShatterKind, Witness,
};
pub use harness::{
    all_suite_ids, default_value_grid, example_class, gen_class, gen_svm_class, verify,
    verify_lemma9_hull, SvmSampleSpec, VerificationReport, VerifyConfig,
};
pub use metrics::{
    dist, packing_number, proper_covering_number, uniform_packing, Distance, PNorm, PackingMode,
    PackingResult, Threshold, UniformPackingResult,
};
pub use model::{
    empirical_margin_risk, Decision, FiniteFunctionClass, LabeledPoint, LossKind, Sample,
    ScoreClass, ValueKind,
};
pub use rademacher::{empirical_rademacher, maurer_rhs, EstimateMode, RademacherEstimate};

/// Convention metadata attached to every externally visible result.
pub fn convention_block() -> serde_json::Value {
    serde_json::json!({
        "separation": "packing separation is pairwise distance >= eps",
        "covering": "proper covering with open balls (distance < eps), centers in the class",
        "ties": "argmax ties produce a reject decision",
        "zero_dimension_term": "d = 0 collapses a power bound to 1; the ceiling-form bound keeps its leading factor 2",
    })
}
