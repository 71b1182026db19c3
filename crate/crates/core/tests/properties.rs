mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spherecover::oracle::{
    circle_cover_check, sample_sphere, sample_sphere_augmented, shatter_cap, simplex_cover, Arc, ArcSet,
};
use spherecover::{
    cap_distance, common_point, cover_certificate, separating_halfspace, simplex_nondegenerate, uncovered_witness,
    Cap, InstanceSpec, Lemma1Instance, ShortSet, SimplexChart, SolveStatus, SpherePoint,
};

fn cone_point(c: &Cap<f64>, rng: &mut impl Rng) -> SpherePoint<f64> {
    let mut v = vec![0.0; c.ambient_dim()];
    for g in c.generators() {
        let w: f64 = rng.random();
        for (vi, gi) in v.iter_mut().zip(g.coords()) {
            *vi += w * gi;
        }
    }
    unit(&v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_and_center_are_members(seed in any::<u64>(), dim in 2usize..=4, k in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_cap(dim, k, 0.4, &mut r);
        for g in c.generators() {
            prop_assert!(c.contains(g));
            prop_assert_eq!(cap_distance(&c, g).unwrap(), 0.0);
        }
        prop_assert!(c.contains(&c.center()));
        prop_assert!(c.contains(c.witness()));
        for _ in 0..8 {
            prop_assert!(c.contains(&cone_point(&c, &mut r)));
        }
    }

    #[test]
    fn distance_matches_brute_force(seed in any::<u64>(), dim in 2usize..=4, k in 1usize..=4) {
        let mut r = rng(seed);
        let c = random_cap(dim, k, 0.5, &mut r);
        let gens = coords(&c);
        for _ in 0..8 {
            let x = unit(&gaussian_point(dim, &mut r));
            let d = cap_distance(&c, &x).unwrap();
            let reference = reference_cap_distance(&gens, x.coords());
            prop_assert!((d - reference).abs() <= 1e-6, "library {} reference {}", d, reference);
            prop_assert_eq!(d == 0.0, c.contains(&x));
        }
    }

    #[test]
    fn halfspace_separates_cap_from_origin(seed in any::<u64>(), dim in 2usize..=4, k in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_cap(dim, k, 0.6, &mut r);
        let h = separating_halfspace(&c);
        prop_assert!(h.evaluate(&vec![0.0; dim]) > 0.0);
        for g in c.generators() {
            prop_assert!(h.evaluate(g.coords()) < 0.0);
        }
        for _ in 0..8 {
            prop_assert!(h.evaluate(cone_point(&c, &mut r).coords()) < 0.0);
        }
    }

    #[test]
    fn nondegeneracy_ignores_vertex_order(seed in any::<u64>(), n in 1usize..=3, shift in 0usize..4) {
        let mut r = rng(seed);
        let pts: Vec<SpherePoint<f64>> = (0..n + 2).map(|_| unit(&gaussian_point(n + 1, &mut r))).collect();
        let raw: Vec<Vec<f64>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        let det = reference_normalized_det(&raw).abs();
        prop_assume!(!(1e-10..1e-8).contains(&det));
        let base = simplex_nondegenerate(&pts).unwrap();
        prop_assert_eq!(base, det >= 1e-9);
        let mut rotated = pts.clone();
        rotated.rotate_left(shift % (n + 2));
        rotated.swap(0, n + 1);
        prop_assert_eq!(simplex_nondegenerate(&rotated).unwrap(), base);
    }

    #[test]
    fn shattering_preserves_the_union(seed in any::<u64>(), dim in 2usize..=3, depth in 0u32..=2, jitter in any::<bool>()) {
        let mut r = rng(seed);
        let c = random_cap(dim, dim, 0.5, &mut r);
        prop_assume!(c.is_independent());
        let s = shatter_cap(&c, depth, jitter.then_some(seed)).unwrap();
        prop_assert_eq!(s.parts().len(), (1usize << (dim - 1)).pow(depth));
        for _ in 0..40 {
            let x = if r.random_bool(0.5) { cone_point(&c, &mut r) } else { unit(&gaussian_point(dim, &mut r)) };
            let d = cap_distance(&c, &x).unwrap();
            prop_assume!(d == 0.0 || d > 1e-6);
            prop_assert_eq!(c.contains(&x), s.contains(&x), "probe {:?}", x);
        }
    }

    #[test]
    fn circle_oracle_agrees_with_a_dense_sweep(
        arcs in prop::collection::vec((0u32..360, 0u32..360), 1..=4)
    ) {
        let family: Vec<ArcSet<f64>> = arcs
            .iter()
            .map(|&(s, len)| ArcSet::single(Arc::new(s as f64, (s + len) as f64)))
            .collect();
        let report = circle_cover_check(&family);
        // Integer endpoints leave gaps of at least one degree, so a grid far
        // finer than that sees every gap.
        let steps = 100_000;
        let swept = (0..steps).all(|i| {
            let a = 360.0 * i as f64 / steps as f64;
            family.iter().any(|f| f.contains(&a))
        });
        prop_assert_eq!(report.covered, swept);
        prop_assert_eq!(report.covered, report.gaps.is_empty());
        for (a, b) in &report.gaps {
            let mid = (a + b) / 2.0 % 360.0;
            prop_assert!(family.iter().all(|f| !f.contains(&mid)));
        }
    }

    #[test]
    fn sampling_is_deterministic(n in 1usize..=3, depth in 0u32..=2, seed in any::<u64>(), extra in 0usize..20) {
        prop_assert_eq!(sample_sphere::<f64>(n, depth), sample_sphere::<f64>(n, depth));
        let a = sample_sphere_augmented::<f64>(n, depth, seed, extra);
        prop_assert_eq!(&a, &sample_sphere_augmented::<f64>(n, depth, seed, extra));
        prop_assert_eq!(a.points.len(), sample_sphere::<f64>(n, depth).points.len() + extra);
    }

    #[test]
    fn simplex_covers_are_certified(seed in 0u64..1000, n in 1usize..=3) {
        let caps = simplex_cover::<f64>(n, seed).unwrap();
        let cert = cover_certificate(&caps).unwrap();
        prop_assert!(cert.certified);
        let lambda = cert.condition_iii.origin_barycentric.clone();
        let raw: Vec<Vec<f64>> = cert.witnesses.iter().map(|w| w.as_ref().unwrap().coords().to_vec()).collect();
        let reference = reference_origin_barycentric(&raw).unwrap();
        for (a, b) in lambda.iter().zip(&reference) {
            prop_assert!((a - b).abs() < 1e-6);
        }
        for j in 0..n + 2 {
            let mut fewer = caps.clone();
            fewer.remove(j);
            let p = uncovered_witness(&fewer).unwrap();
            prop_assert!(fewer.iter().all(|c| !c.contains(&p)));
        }
    }

    #[test]
    fn small_random_families_have_witnesses(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=4) {
        let mut r = rng(seed);
        let caps: Vec<Cap<f64>> = (0..k.min(n + 1)).map(|_| random_cap(n + 1, 1 + r.random_range(0..=n), 0.5, &mut r)).collect();
        let p = uncovered_witness(&caps).unwrap();
        prop_assert!(caps.iter().all(|c| !c.contains(&p)));
    }

    #[test]
    fn cap_and_shortset_json_round_trip(seed in any::<u64>(), dim in 2usize..=4) {
        let mut r = rng(seed);
        let c = random_cap(dim, 3, 0.3, &mut r);
        let back: Cap<f64> = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(coords(&back), coords(&c));
        let s = ShortSet::new(vec![c.clone(), random_cap(dim, 2, 0.05, &mut r)]);
        if let Ok(s) = s {
            let back: ShortSet<f64> = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            prop_assert_eq!(back.parts().len(), 2);
            prop_assert_eq!(coords(&back.parts()[0]), coords(&c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The arcs `[x, b]` and `[a, x]` cover the chart arc `[a, b]` and meet
    /// only at `x`.
    #[test]
    fn solver_finds_the_common_point_of_arc_covers(lo in 5.0f64..40.0, x_frac in 0.05f64..0.95) {
        let deg = |d: f64| SpherePoint::on_circle(d.to_radians());
        let (a, b) = (lo, lo + 60.0);
        let x = a + x_frac * (b - a);
        let chart = SimplexChart::short(vec![deg(a), deg(b)]).unwrap();
        let sets = vec![
            ShortSet::single(Cap::new(vec![deg(x), deg(b)]).unwrap()),
            ShortSet::single(Cap::new(vec![deg(a), deg(x)]).unwrap()),
        ];
        let inst = Lemma1Instance::new(chart, sets).unwrap();
        prop_assert!(inst.face_condition_checked());
        // Lattice spacing on a 60 degree chart is about 1e-6 at the default
        // depth limit, so 1e-5 is reachable wherever `x` falls.
        let res = common_point(&inst, 1e-5).unwrap();
        prop_assert_eq!(res.status, SolveStatus::Ok);
        prop_assert!(res.max_dist <= 1e-5);
        prop_assert!(spherecover::geodesic_distance(&res.point, &deg(x)).unwrap() <= 1e-5 + 1e-12);
        prop_assert!(res.history.windows(2).all(|w| w[1] <= w[0]));
        let (phi, _) = inst.potential(&res.point).unwrap();
        prop_assert!((phi - res.max_dist).abs() < 1e-12);
        let spec = InstanceSpec::from(&inst);
        let again = serde_json::from_str::<InstanceSpec<f64>>(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(again, spec);
    }
}
