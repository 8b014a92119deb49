//! Randomized laws of the exact core: dimension monotonicity, the covering
//! sandwich, packing-mode dominance, certificate replay, loss-function
//! ordering, and serialization round trips.

use proptest::prelude::*;

use capdim_core::rat::{fmt, parse, q, Q};
use capdim_core::{
    default_value_grid, dimension, dist, empirical_margin_risk, gen_class, packing_number,
    proper_covering_number, uniform_packing, FiniteFunctionClass, LabeledPoint, LossKind, PNorm,
    PackingMode, Sample, SearchCaps, ShatterKind, Threshold, ValueKind,
};

const KINDS: [ShatterKind; 3] = [ShatterKind::Natarajan, ShatterKind::Graph, ShatterKind::Fat];

fn class_strategy() -> impl Strategy<Value = FiniteFunctionClass> {
    (any::<u64>(), 1usize..=2, 2usize..=6).prop_map(|(seed, points, funcs)| {
        gen_class(seed, points, 3, funcs, &default_value_grid()).expect("parameters fit")
    })
}

fn gamma_strategy() -> impl Strategy<Value = Q> {
    (1i64..=8).prop_map(|n| q(n, 8))
}

fn norm_strategy() -> impl Strategy<Value = PNorm> {
    prop_oneof![Just(PNorm::P(1)), Just(PNorm::P(2)), Just(PNorm::Infinity),]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimensions_are_antitone_in_gamma(g in class_strategy(), a in 1i64..=8, b in 1i64..=8) {
        let (lo, hi) = (q(a.min(b), 8), q(a.max(b), 8));
        let margin = g.margin_class();
        let caps = SearchCaps::default();
        for kind in KINDS {
            let at_lo = dimension(&margin, kind, &lo, &caps)?.0;
            let at_hi = dimension(&margin, kind, &hi, &caps)?.0;
            prop_assert!(at_hi <= at_lo, "{kind:?}: dim({}) = {at_hi} > dim({}) = {at_lo}", fmt(&hi), fmt(&lo));
        }
    }

    #[test]
    fn natarajan_graph_fat_chain(g in class_strategy(), gamma in gamma_strategy()) {
        let margin = g.margin_class();
        let caps = SearchCaps::default();
        let n = dimension(&margin, ShatterKind::Natarajan, &gamma, &caps)?.0;
        let gr = dimension(&margin, ShatterKind::Graph, &gamma, &caps)?.0;
        let f = dimension(&margin, ShatterKind::Fat, &gamma, &caps)?.0;
        prop_assert!(n <= gr && gr <= f, "chain broken: {n} / {gr} / {f}");
    }

    #[test]
    fn certificates_replay_on_their_class(g in class_strategy(), gamma in gamma_strategy()) {
        let margin = g.margin_class();
        let caps = SearchCaps::default();
        for kind in KINDS {
            let (dim, cert) = dimension(&margin, kind, &gamma, &caps)?;
            if dim > 0 {
                let cert = cert.expect("positive dimension carries a certificate");
                prop_assert_eq!(cert.replay(&margin)?, true);
                prop_assert_eq!(cert.points.len(), dim);
            }
        }
    }

    #[test]
    fn covering_sits_between_packings(
        g in class_strategy(),
        e in 1i64..=8,
        p in norm_strategy(),
        idx in proptest::collection::vec((0usize..2, 1usize..=3), 1..=4),
    ) {
        let margin = g.margin_class();
        let entries: Vec<LabeledPoint> = idx
            .into_iter()
            .map(|(x, y)| LabeledPoint::new(x.min(g.num_points() - 1), y))
            .collect();
        let sample = Sample::new(entries).unwrap();
        let eps = q(e, 8);
        let thr = Threshold::from_eps(&eps, p)?;
        let thr2 = Threshold::from_eps(&(&eps * q(2, 1)), p)?;
        let wide = packing_number(&margin, &sample, &thr2, PackingMode::Exact, 64)?.value;
        let cover = proper_covering_number(&margin, &sample, &thr, 64)?.value;
        let tight = packing_number(&margin, &sample, &thr, PackingMode::Exact, 64)?.value;
        prop_assert!(wide <= cover && cover <= tight, "sandwich broken: {wide} / {cover} / {tight}");
    }

    #[test]
    fn greedy_packing_never_beats_exact(
        g in class_strategy(),
        e in 1i64..=8,
        p in norm_strategy(),
        idx in proptest::collection::vec((0usize..2, 1usize..=3), 1..=4),
    ) {
        let margin = g.margin_class();
        let entries: Vec<LabeledPoint> = idx
            .into_iter()
            .map(|(x, y)| LabeledPoint::new(x.min(g.num_points() - 1), y))
            .collect();
        let sample = Sample::new(entries).unwrap();
        let thr = Threshold::from_eps(&q(e, 8), p)?;
        let exact = packing_number(&margin, &sample, &thr, PackingMode::Exact, 64)?;
        let greedy = packing_number(&margin, &sample, &thr, PackingMode::Greedy, 64)?;
        prop_assert!(greedy.value <= exact.value);
        prop_assert_eq!(exact.witness.len(), exact.value);
    }

    #[test]
    fn uniform_packing_is_antitone_in_eps(g in class_strategy(), a in 1i64..=8, b in 1i64..=8) {
        let margin = g.margin_class();
        let (lo, hi) = (q(a.min(b), 8), q(a.max(b), 8));
        let narrow = uniform_packing(&margin, 2, &Threshold::from_eps(&lo, PNorm::Infinity)?, 64, 5000, 7)?;
        let wide = uniform_packing(&margin, 2, &Threshold::from_eps(&hi, PNorm::Infinity)?, 64, 5000, 7)?;
        prop_assert!(narrow.exhaustive && wide.exhaustive);
        prop_assert!(wide.packing.value <= narrow.packing.value);
    }

    #[test]
    fn distance_sides_are_exclusive(
        g in class_strategy(),
        e in 1i64..=8,
        p in norm_strategy(),
        idx in proptest::collection::vec((0usize..2, 1usize..=3), 1..=4),
    ) {
        let margin = g.margin_class();
        let entries: Vec<LabeledPoint> = idx
            .into_iter()
            .map(|(x, y)| LabeledPoint::new(x.min(g.num_points() - 1), y))
            .collect();
        let sample = Sample::new(entries).unwrap();
        let thr = Threshold::from_eps(&q(e, 8), p)?;
        for i in 0..g.num_functions() {
            for j in 0..g.num_functions() {
                let d = dist(&margin, i, j, &sample, p)?;
                prop_assert_ne!(d.ge(&thr), d.lt(&thr));
            }
        }
    }

    #[test]
    fn loss_laws(g in class_strategy(), f in 0usize..2, a in 1i64..=8, b in 1i64..=8) {
        let f = f.min(g.num_functions() - 1);
        let entries: Vec<LabeledPoint> = (0..g.num_points())
            .flat_map(|x| (1..=3).map(move |y| LabeledPoint::new(x, y)))
            .collect();
        let sample = Sample::new(entries).unwrap();
        let (lo, hi) = (q(a.min(b), 8), q(a.max(b), 8));
        let (zero, one) = (q(0, 1), q(1, 1));
        for gamma in [&lo, &hi] {
            let hard = empirical_margin_risk(&g, f, &sample, gamma, LossKind::Hard)?;
            let ramp = empirical_margin_risk(&g, f, &sample, gamma, LossKind::Ramp)?;
            prop_assert!(hard >= zero && hard <= one);
            prop_assert!(ramp >= zero && ramp <= one);
            prop_assert!(ramp <= hard, "ramp {} above hard {}", fmt(&ramp), fmt(&hard));
        }
        for loss in [LossKind::Hard, LossKind::Ramp] {
            let tight = empirical_margin_risk(&g, f, &sample, &lo, loss)?;
            let wide = empirical_margin_risk(&g, f, &sample, &hi, loss)?;
            prop_assert!(tight <= wide, "risk not monotone in the margin scale");
        }
    }

    #[test]
    fn squash_clips_and_discretize_rounds(g in class_strategy(), gamma in gamma_strategy(), e in 1i64..=8) {
        let margin = g.margin_class();
        let squashed = margin.squash(&gamma)?;
        prop_assert_eq!(squashed.value_kind(), ValueKind::Real);
        let zero = q(0, 1);
        let (lo, hi) = squashed.range();
        prop_assert!(*lo >= zero && *hi == gamma);
        for fi in 0..squashed.num_functions() {
            for d in 0..squashed.domain().len() {
                let v = squashed.value(fi, d);
                prop_assert!(*v >= zero && *v <= gamma);
            }
        }
        let eta = q(e, 8);
        let disc = margin.discretize(&eta)?;
        prop_assert_eq!(disc.value_kind(), ValueKind::Integer);
        for fi in 0..disc.num_functions() {
            for d in 0..disc.domain().len() {
                prop_assert!(disc.value(fi, d).is_integer());
            }
        }
    }

    #[test]
    fn class_json_round_trip(g in class_strategy()) {
        let doc = g.to_json();
        let back = FiniteFunctionClass::from_json(&doc)?;
        prop_assert_eq!(back.to_json(), doc);
    }

    #[test]
    fn generator_is_deterministic(seed in any::<u64>(), points in 1usize..=2, funcs in 2usize..=6) {
        let a = gen_class(seed, points, 3, funcs, &default_value_grid())?;
        let b = gen_class(seed, points, 3, funcs, &default_value_grid())?;
        prop_assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn rational_text_round_trips(n in -10_000i64..=10_000, d in 1i64..=10_000) {
        let v = q(n, d);
        prop_assert_eq!(parse(&fmt(&v)).unwrap(), v);
    }
}
