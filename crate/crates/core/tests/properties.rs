use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xg_core::dists::PriorDist;
use xg_core::features::design::{ColumnKind, CountFeature, DesignLayout};
use xg_core::features::geometry::{point_in_shot_triangle, shot_angle, Point, GOAL};
use xg_core::model_spec::{Grouping, PredictorSet};
use xg_core::shot::{BodyPart, Technique};
use xg_core::synth::{generate_shots, TruthConfig};

/// Composite Simpson on `[a, b]` with `m` (even) intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn arb_dist() -> impl Strategy<Value = PriorDist> {
    prop_oneof![
        (-5.0f64..5.0, 0.1f64..10.0).prop_map(|(m, s)| PriorDist::normal(m, s)),
        (-5.0f64..5.0, 0.1f64..10.0, -10.0f64..10.0).prop_map(|(m, s, a)| PriorDist::skew_normal(m, s, a)),
        (0.1f64..10.0).prop_map(PriorDist::half_normal),
        (-100.0f64..0.0, 0.1f64..200.0).prop_map(|(a, w)| PriorDist::uniform(a, a + w)),
    ]
}

/// Location and scale for integration and test points.
fn frame(d: &PriorDist) -> (f64, f64) {
    match *d {
        PriorDist::Normal { mu, sigma } | PriorDist::SkewNormal { mu, sigma, .. } => (mu, sigma),
        PriorDist::HalfNormal { scale } => (0.0, scale),
        PriorDist::Uniform { lower, upper } => (0.5 * (lower + upper), 0.5 * (upper - lower)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn densities_integrate_to_one(d in arb_dist()) {
        let (lo, hi) = d.support();
        let (c, s) = frame(&d);
        let a = lo.max(c - 14.0 * s);
        let b = hi.min(c + 14.0 * s);
        let mass = simpson(|x| d.log_pdf(x).exp(), a, b, 40_000);
        prop_assert!((mass - 1.0).abs() < 1e-6, "{d:?}: {mass}");
    }

    #[test]
    fn gradients_match_finite_differences(d in arb_dist(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = d.support();
        let (c, s) = frame(&d);
        let h = 1e-3 * s;
        for _ in 0..20 {
            // Keep the stencil inside the support.
            let x = rng.random_range((c - 4.0 * s).max(lo + 3.0 * h)..(c + 4.0 * s).min(hi - 3.0 * h));
            let f = |t: f64| d.log_pdf(t);
            let fd = (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
            let g = d.grad_log_pdf(x).unwrap();
            let rel = (g - fd).abs() / g.abs().max(1.0);
            prop_assert!(rel < 1e-6, "{d:?} at {x}: {g} vs {fd}");
        }
    }
}

/// Barycentric coordinates of `p` in triangle `(a, b, c)` via dot products.
fn barycentric(p: Point, a: Point, b: Point, c: Point) -> (f64, f64, f64) {
    let v0 = (b.x - a.x, b.y - a.y);
    let v1 = (c.x - a.x, c.y - a.y);
    let v2 = (p.x - a.x, p.y - a.y);
    let dot = |u: (f64, f64), v: (f64, f64)| u.0 * v.0 + u.1 * v.1;
    let (d00, d01, d11, d20, d21) = (dot(v0, v0), dot(v0, v1), dot(v1, v1), dot(v2, v0), dot(v2, v1));
    let den = d00 * d11 - d01 * d01;
    let v = (d11 * d20 - d01 * d21) / den;
    let w = (d00 * d21 - d01 * d20) / den;
    (1.0 - v - w, v, w)
}

#[test]
fn triangle_membership_matches_barycentric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checked, mut inside) = (0, 0);
    while checked < 10_000 {
        // Every fourth case sits on the integer grid so edges and vertices
        // are hit exactly.
        let grid = checked % 4 == 0;
        let draw = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
            let v = rng.random_range(lo..hi);
            if grid { v.floor() } else { v }
        };
        let shot = Point::new(draw(&mut rng, 60.0, 119.0), draw(&mut rng, 0.0, 80.0));
        let p = if checked % 2 == 1 {
            // Near the triangle: towards a random point of the goal mouth.
            let t = rng.random_range(0.0..1.0);
            let gy = rng.random_range(35.0..45.0);
            let x = (shot.x + t * (120.0 - shot.x) + rng.random_range(-1.0..1.0)).min(120.0);
            Point::new(x, (shot.y + t * (gy - shot.y) + rng.random_range(-1.0..1.0)).clamp(0.0, 80.0))
        } else {
            Point::new(draw(&mut rng, 55.0, 120.0), draw(&mut rng, 0.0, 80.0))
        };
        let (l0, l1, l2) = barycentric(p, shot, GOAL.post_low, GOAL.post_high);
        let min = l0.min(l1).min(l2);
        if !grid && min.abs() < 1e-9 {
            continue;
        }
        let expected = if grid { min >= -1e-12 } else { min >= 0.0 };
        assert_eq!(point_in_shot_triangle(p, shot), expected, "point {p:?} shot {shot:?}");
        inside += usize::from(expected);
        checked += 1;
    }
    assert!(inside > 2_000, "too few interior cases: {inside}");
}

#[test]
fn angle_at_twelve_yards() {
    assert!((shot_angle(Point::new(108.0, 40.0)).unwrap() - 36.869_897_645_844_02).abs() < 1e-6);
}

fn level_matches(kind: &ColumnKind) -> Option<&'static str> {
    match kind {
        ColumnKind::CountLevel { feature: CountFeature::PlayersInShotTriangle, .. } => Some("triangle"),
        ColumnKind::CountLevel { feature: CountFeature::OpponentsInRadius, .. } => Some("radius"),
        ColumnKind::BodyPart { .. } => Some("body"),
        ColumnKind::Technique { .. } => Some("technique"),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_hot_blocks_sum_to_indicator(seed in any::<u64>()) {
        let mut cfg = TruthConfig::new(400, seed);
        cfg.ranges.max_players_in_triangle = 12;
        cfg.ranges.max_opponents_in_radius = 5;
        let (rows, _) = generate_shots(&cfg).unwrap();
        let layout = DesignLayout::learn(&rows, &PredictorSet::Extended, &Grouping::None).unwrap();
        let design = layout.apply(&rows);
        for (i, r) in rows.iter().enumerate() {
            let x = design.row(i);
            for (block, is_reference) in [
                ("triangle", r.players_in_shot_triangle == 0),
                ("radius", r.opponents_in_radius == 0),
                ("body", r.body_part == BodyPart::ALL[0]),
                ("technique", r.technique == Technique::ALL[0]),
            ] {
                let sum: f64 = layout
                    .columns
                    .iter()
                    .zip(x)
                    .filter(|(c, _)| level_matches(&c.kind) == Some(block))
                    .map(|(_, v)| v)
                    .sum();
                prop_assert_eq!(sum, if is_reference { 0.0 } else { 1.0 });
            }
        }
        // Clamped count levels: triangle 1..=10, radius 1..=3.
        let clamped = layout.columns.iter().all(|c| match c.kind {
            ColumnKind::CountLevel { feature: CountFeature::PlayersInShotTriangle, level } => level <= 10,
            ColumnKind::CountLevel { feature: CountFeature::OpponentsInRadius, level } => level <= 3,
            _ => true,
        });
        prop_assert!(clamped);
    }

    #[test]
    fn standardization_round_trips(seed in any::<u64>(), coefs in prop::collection::vec(-3.0f64..3.0, 32)) {
        let (rows, _) = generate_shots(&TruthConfig::new(300, seed)).unwrap();
        let layout = DesignLayout::learn(&rows, &PredictorSet::Extended, &Grouping::None).unwrap();
        let p = layout.n_columns();
        let (b0, b) = (coefs[0], &coefs[1..=p]);
        let (r0, r) = layout.to_raw_coefficients(b0, b);
        let (s0, s) = layout.from_raw_coefficients(r0, &r);
        prop_assert!((s0 - b0).abs() < 1e-12);
        for (x, y) in s.iter().zip(b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        // Same linear predictor on every row either way.
        let design = layout.apply(&rows);
        for (i, row) in rows.iter().enumerate().take(20) {
            let eta_std = b0 + design.row(i).iter().zip(b).map(|(x, c)| x * c).sum::<f64>();
            let eta_raw = r0 + layout.columns.iter().zip(&r).map(|(c, k)| c.kind.raw_value(row) * k).sum::<f64>();
            prop_assert!((eta_std - eta_raw).abs() < 1e-9 * (1.0 + eta_std.abs()));
        }
    }
}
