//! Property tests for the spectral layer: transform round trips, Parseval,
//! projection monotonicity, and operator idempotence on arbitrary fields.

use std::sync::Arc;

use proptest::prelude::*;

use ch3d::diagnostics::{l2_norm_hat, lp_norm, sobolev_norm_hat};
use ch3d::ops::{self, DealiasRule};
use ch3d::{Grid, RealField};

fn arb_field() -> impl Strategy<Value = RealField> {
    // modest grids keep the suite quick; values span several magnitudes
    (prop::sample::select(vec![4usize, 6, 8]), any::<u64>(), 0.01f64..10.0).prop_map(
        |(n, seed, amplitude)| {
            let grid = Arc::new(Grid::new(n, 2.0 * std::f64::consts::PI).unwrap());
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let samples = (0..grid.num_points())
                .map(|_| rng.gen_range(-amplitude..amplitude))
                .collect();
            RealField::new(grid, samples).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(u in arb_field()) {
        let back = u.forward().inverse();
        let scale = lp_norm(&u, 2.0).max(1e-300);
        let diff: f64 = u
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            * u.grid().dx().powf(1.5);
        prop_assert!(diff <= 1e-12 * scale);
    }

    #[test]
    fn parseval(u in arb_field()) {
        let quad = lp_norm(&u, 2.0);
        let spec = l2_norm_hat(&u.forward());
        prop_assert!((quad - spec).abs() <= 1e-12 * quad.max(1e-300));
    }

    #[test]
    fn projection_decreases_l2_and_hs(u in arb_field(), radius in 0.1f64..8.0, s in 0.0f64..3.0) {
        let hat = u.forward();
        let projected = ops::project_low_modes(&hat, radius).unwrap();
        prop_assert!(l2_norm_hat(&projected) <= l2_norm_hat(&hat) * (1.0 + 1e-14));
        prop_assert!(
            sobolev_norm_hat(&projected, s) <= sobolev_norm_hat(&hat, s) * (1.0 + 1e-14)
        );
    }

    #[test]
    fn projection_idempotent(u in arb_field(), radius in 0.1f64..8.0) {
        let hat = u.forward();
        let once = ops::project_low_modes(&hat, radius).unwrap();
        let twice = ops::project_low_modes(&once, radius).unwrap();
        prop_assert_eq!(once.coeffs(), twice.coeffs());
    }

    #[test]
    fn dealias_idempotent(u in arb_field(), padded in any::<bool>()) {
        let rule = if padded { DealiasRule::Padded(3) } else { DealiasRule::TwoThirds };
        let hat = u.forward();
        let once = ops::dealias(&hat, rule);
        let twice = ops::dealias(&once, rule);
        prop_assert_eq!(once.coeffs(), twice.coeffs());
    }

    #[test]
    fn real_symbol_chains_stay_real(u in arb_field(), s in 0.0f64..2.0) {
        let hat = u.forward();
        let chained = ops::bessel_weight(&ops::laplacian(&ops::biharmonic(&hat)), s);
        prop_assert!(chained.imaginary_residual() < 1e-12);
    }

    #[test]
    fn propagator_semigroup(u in arb_field(), s in 0.0f64..0.05, t in 0.0f64..0.05) {
        use ch3d::flow::biharmonic_propagate;
        let hat = u.forward();
        let two = biharmonic_propagate(&biharmonic_propagate(&hat, s).unwrap(), t).unwrap();
        let one = biharmonic_propagate(&hat, s + t).unwrap();
        let num: f64 = two
            .coeffs()
            .iter()
            .zip(one.coeffs())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den = l2_norm_hat(&one).max(1e-300);
        prop_assert!(num * u.grid().volume().sqrt() <= 1e-14 * den);
    }
}
