use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use abel_lab::abel_curve::Lattice;
use abel_lab::config::Config;
use abel_lab::group::maurer_cartan_residual;
use abel_lab::report::{CheckRecord, Recorder, Status};
use abel_lab::samples::{random_form, random_group_map, random_point};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tau() -> impl Strategy<Value = C64> {
    (-0.5..0.5f64, 0.6..2.0f64).prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes_on_random_forms(seed in any::<u64>(), k in 0usize..3) {
        let mut r = rng(seed);
        let w = random_form(&mut r, 3, k).at(&random_point(&mut r, 0.8), 2);
        prop_assert!(w.d().d().max_abs() < 1e-9 * (1.0 + w.max_abs()));
    }

    #[test]
    fn maurer_cartan_holds_for_random_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_group_map(&mut r);
        prop_assert!(maurer_cartan_residual(&g, &random_point(&mut r, 0.7)).unwrap() < 1e-9);
    }

    #[test]
    fn reduction_moves_by_a_lattice_vector(t in tau(), x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let l = Lattice::new(t).unwrap();
        let z = C64::new(x, y);
        let (w, (m, n)) = l.reduce(z, C64::new(0.0, 0.0));
        let (a, b) = l.coords(w);
        prop_assert!((-1e-12..1.0 + 1e-12).contains(&a) && (-1e-12..1.0 + 1e-12).contains(&b));
        prop_assert!((z - w - l.point(m as f64, n as f64)).norm() < 1e-12);
        prop_assert!(l.distance_to_lattice(z - w) < 1e-12);
    }

    #[test]
    fn sigma_is_odd(t in tau(), x in -0.4..0.4f64, y in -0.4..0.4f64) {
        let l = Lattice::new(t).unwrap();
        let z = C64::new(x, y);
        prop_assert!((l.sigma(-z) + l.sigma(z)).norm() < 1e-12 * (1.0 + l.sigma(z).norm()));
    }

    #[test]
    fn config_survives_a_toml_round_trip(seed in 0..i64::MAX as u64, points in 1usize..500) {
        let mut cfg = Config { seed, ..Config::default() };
        cfg.forms.points = points;
        let back = Config::from_toml(&toml::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn tolerance_override_judges_every_record(residual in 0.0..1.0f64, tol in 0.0..1.0f64) {
        let mut rec = Recorder::new(0, false, Some(tol));
        rec.run("x", "x", 1e-300, || Ok(vec![CheckRecord::residual("x", "x", residual, 1e-300)]));
        let r = &rec.finish().records[0];
        prop_assert_eq!(r.status, if residual <= tol { Status::Pass } else { Status::Fail });
        prop_assert_eq!(r.tolerance, tol);
    }
}
