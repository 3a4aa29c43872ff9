//! Pseudo-spectral solver and diagnostics suite for the 3D Cahn-Hilliard
//! equations on a periodic box.
//!
//! The system is `du/dt = lap(mu)` with chemical potential
//! `mu = -lap(u) + phi(u)`, discretized by Fourier collocation on `[0, L)^3`.
//! The crate provides:
//!
//! - spectral geometry, transforms, and operators ([`grid`], [`field`],
//!   [`ops`]), including a sharp frequency cutoff and dealiased products;
//! - the potential class with growth validation ([`potential`]);
//! - time integrators: the exact bi-harmonic propagator, classical RK4 on
//!   the cutoff system, and exponential integrators ([`flow`]);
//! - scalar diagnostics: mass, free energy, dissipation, norms, inequality
//!   ratio checks, and a continuous-dependence experiment ([`diagnostics`]);
//! - run configuration, binary snapshots, CSV output, and scripted
//!   experiments behind the `ch3d` binary ([`config`], [`snapshot`],
//!   [`csvio`], [`experiments`]).

pub mod config;
pub mod csvio;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod field;
pub mod flow;
pub mod grid;
pub mod init;
pub mod ops;
pub mod potential;
pub mod snapshot;

pub use error::{Error, Result};
pub use field::{RealField, SpectralField};
pub use grid::Grid;
pub use ops::DealiasRule;
pub use potential::{GrowthReport, Potential, PotentialTerm};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::field::RealField;
    use crate::grid::Grid;

    pub fn seeded_field(grid: &Arc<Grid>, seed: u64, amplitude: f64) -> RealField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..grid.num_points())
            .map(|_| rng.gen_range(-amplitude..amplitude))
            .collect();
        RealField::new(grid.clone(), samples).unwrap()
    }

    pub fn l2_rel_error(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        let den: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}
