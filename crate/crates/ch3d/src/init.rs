//! Initial-data menu: seeded random perturbations, trigonometric modes, and
//! a periodized hyperbolic-tangent front.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::RealField;
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `mean + amplitude * eta` with `eta` i.i.d. uniform in `[-1, 1]`.
    /// With `smooth_sigma` set, `eta` is filtered by the spectral envelope
    /// `exp(-|xi|^2 / (2 sigma^2))` and rescaled to unit max amplitude,
    /// which makes the sample analytic.
    Random {
        mean: f64,
        amplitude: f64,
        seed: u64,
        smooth_sigma: Option<f64>,
    },
    /// `mean + sum_j amp_j * cos(xi_j . x)` over integer mode triples.
    Modes {
        mean: f64,
        modes: Vec<([i64; 3], f64)>,
    },
    /// A front pair along `x1` built from periodized images of
    /// `tanh(x / width)`, constant in `x2` and `x3`. The default width 2
    /// gives the classic `tanh(x/2)` interface profile.
    TanhFront { width: f64 },
}

impl InitialData {
    pub fn build(&self, grid: &Arc<Grid>) -> Result<RealField> {
        match self {
            InitialData::Random {
                mean,
                amplitude,
                seed,
                smooth_sigma,
            } => build_random(grid, *mean, *amplitude, *seed, *smooth_sigma),
            InitialData::Modes { mean, modes } => build_modes(grid, *mean, modes),
            InitialData::TanhFront { width } => build_front(grid, *width),
        }
    }
}

fn build_random(
    grid: &Arc<Grid>,
    mean: f64,
    amplitude: f64,
    seed: u64,
    smooth_sigma: Option<f64>,
) -> Result<RealField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eta: Vec<f64> = (0..grid.num_points())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    if let Some(sigma) = smooth_sigma {
        let noise = RealField::new(grid.clone(), eta)?;
        let mut hat = noise.forward();
        let n = grid.modes_per_axis();
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let s2 = grid.xi_sq(ix, iy, iz);
                    hat.coeffs_mut()[grid.index(ix, iy, iz)] *=
                        (-s2 / (2.0 * sigma * sigma)).exp();
                }
            }
        }
        let smooth = hat.inverse();
        let peak = smooth.max_abs();
        let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
        eta = smooth.samples().iter().map(|v| v * scale).collect();
    }
    let samples = eta.into_iter().map(|e| mean + amplitude * e).collect();
    RealField::new(grid.clone(), samples)
}

fn build_modes(grid: &Arc<Grid>, mean: f64, modes: &[([i64; 3], f64)]) -> Result<RealField> {
    let two_pi_over_l = 2.0 * std::f64::consts::PI / grid.edge_length();
    RealField::from_fn(grid.clone(), |x, y, z| {
        let mut v = mean;
        for &(k, amp) in modes {
            let phase = two_pi_over_l * (k[0] as f64 * x + k[1] as f64 * y + k[2] as f64 * z);
            v += amp * phase.cos();
        }
        v
    })
}

/// Periodized double front: rises through an interface at `L/4`, falls back
/// at `3L/4`. Summing images makes the profile smooth across the seam; the
/// image count is chosen so the truncated tails sit below roundoff.
fn build_front(grid: &Arc<Grid>, width: f64) -> Result<RealField> {
    let l = grid.edge_length();
    let images = (21.0 * width / l).ceil() as i64 + 1;
    let profile: Vec<f64> = (0..grid.modes_per_axis())
        .map(|i| {
            let x = grid.coord(i);
            let mut v = -1.0;
            for m in -images..=images {
                let shift = m as f64 * l;
                v += ((x - 0.25 * l + shift) / width).tanh()
                    - ((x - 0.75 * l + shift) / width).tanh();
            }
            v
        })
        .collect();
    let n = grid.modes_per_axis();
    let mut samples = Vec::with_capacity(grid.num_points());
    for _iz in 0..n {
        for _iy in 0..n {
            samples.extend_from_slice(&profile);
        }
    }
    RealField::new(grid.clone(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize, l: f64) -> Arc<Grid> {
        Arc::new(Grid::new(n, l).unwrap())
    }

    #[test]
    fn random_is_reproducible_and_bounded() {
        let g = grid(8, 1.0);
        let spec = InitialData::Random {
            mean: 0.2,
            amplitude: 0.05,
            seed: 99,
            smooth_sigma: None,
        };
        let a = spec.build(&g).unwrap();
        let b = spec.build(&g).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert!(a.samples().iter().all(|&v| (v - 0.2).abs() <= 0.05));
    }

    #[test]
    fn smoothed_random_decays_spectrally() {
        let g = grid(16, 2.0 * PI);
        let spec = InitialData::Random {
            mean: 0.0,
            amplitude: 1.0,
            seed: 4,
            smooth_sigma: Some(1.5),
        };
        let f = spec.build(&g).unwrap();
        assert!((f.max_abs() - 1.0).abs() < 1e-12);
        let hat = f.forward();
        // tail modes are strongly suppressed relative to the envelope scale
        let tail = hat.mode([7, 0, 0]).norm();
        let head = hat.mode([1, 0, 0]).norm();
        assert!(tail < head * 1e-3, "tail {tail} vs head {head}");
    }

    #[test]
    fn mode_list_lands_on_exact_coefficients() {
        let g = grid(16, 2.0 * PI);
        let spec = InitialData::Modes {
            mean: 0.5,
            modes: vec![([1, 0, 0], 0.3), ([0, 2, 1], 0.1)],
        };
        let hat = spec.build(&g).unwrap().forward();
        assert!((hat.dc().re - 0.5).abs() < 1e-13);
        assert!((hat.mode([1, 0, 0]).re - 0.15).abs() < 1e-13);
        assert!((hat.mode([0, -2, -1]).re - 0.05).abs() < 1e-13);
    }

    #[test]
    fn front_is_smooth_across_the_seam() {
        let g = grid(64, 2.0 * PI);
        let f = InitialData::TanhFront { width: 2.0 }.build(&g).unwrap();
        let hat = f.forward();
        // the shifted profile is odd about the interfaces, so only odd
        // harmonics carry content; smoothness shows as fast decay there
        let c3 = hat.mode([3, 0, 0]).norm();
        let c9 = hat.mode([9, 0, 0]).norm();
        assert!(c3 > 1e-8, "c3 {c3}");
        assert!(c9 < c3 * 1e-6, "c3 {c3} c9 {c9}");
        // constant in the transverse directions
        let n = g.modes_per_axis();
        for iz in [0, 3, n - 1] {
            for iy in [0, 5] {
                for ix in 0..n {
                    assert_eq!(f.samples()[g.index(ix, iy, iz)], f.samples()[ix]);
                }
            }
        }
    }
}
