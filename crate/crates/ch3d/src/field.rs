//! Scalar fields in sample space and their Fourier-coefficient twins.
//!
//! `RealField` holds `N^3` real samples in x-fastest row-major order;
//! `SpectralField` holds the matching complex Fourier coefficients. The
//! forward transform divides by `N^3` so the zero mode equals the sample
//! mean, and the inverse transform is the plain unnormalized synthesis sum,
//! making `inverse(forward(f)) = f` up to roundoff.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A real scalar field sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Arc<Grid>,
    samples: Vec<f64>,
}

/// Fourier coefficients of a scalar field, full complex storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex<f64>>,
}

impl RealField {
    /// Wraps a sample vector. Rejects wrong length and non-finite entries.
    pub fn new(grid: Arc<Grid>, samples: Vec<f64>) -> Result<RealField> {
        if samples.len() != grid.num_points() {
            return Err(Error::ShapeMismatch {
                expected: grid.num_points(),
                got: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(RealField { grid, samples })
    }

    pub fn constant(grid: Arc<Grid>, value: f64) -> RealField {
        let n = grid.num_points();
        RealField {
            grid,
            samples: vec![value; n],
        }
    }

    /// Samples `f(x1, x2, x3)` at the grid points.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64, f64) -> f64) -> Result<RealField> {
        let n = grid.modes_per_axis();
        let mut samples = Vec::with_capacity(grid.num_points());
        for iz in 0..n {
            let z = grid.coord(iz);
            for iy in 0..n {
                let y = grid.coord(iy);
                for ix in 0..n {
                    samples.push(f(grid.coord(ix), y, z));
                }
            }
        }
        RealField::new(grid, samples)
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Forward transform, normalized so the zero mode is the sample mean.
    pub fn forward(&self) -> SpectralField {
        let n = self.grid.modes_per_axis();
        let mut coeffs: Vec<Complex<f64>> =
            self.samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft3(&mut coeffs, n, FftDirection::Forward);
        let scale = 1.0 / self.grid.num_points() as f64;
        for c in coeffs.iter_mut() {
            *c *= scale;
        }
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
    }
}

impl SpectralField {
    pub fn zeros(grid: Arc<Grid>) -> SpectralField {
        let n = grid.num_points();
        SpectralField {
            grid,
            coeffs: vec![Complex::new(0.0, 0.0); n],
        }
    }

    pub fn from_coeffs(grid: Arc<Grid>, coeffs: Vec<Complex<f64>>) -> Result<SpectralField> {
        if coeffs.len() != grid.num_points() {
            return Err(Error::ShapeMismatch {
                expected: grid.num_points(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralField { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<f64>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<f64>] {
        &mut self.coeffs
    }

    /// Coefficient of the mode with signed integer wavenumbers `k`.
    pub fn mode(&self, k: [i64; 3]) -> Complex<f64> {
        let g = &self.grid;
        let (i, j, l) = (
            g.slot(k[0]).expect("mode outside grid"),
            g.slot(k[1]).expect("mode outside grid"),
            g.slot(k[2]).expect("mode outside grid"),
        );
        self.coeffs[g.index(i, j, l)]
    }

    pub fn set_mode(&mut self, k: [i64; 3], value: Complex<f64>) {
        let g = self.grid.clone();
        let (i, j, l) = (
            g.slot(k[0]).expect("mode outside grid"),
            g.slot(k[1]).expect("mode outside grid"),
            g.slot(k[2]).expect("mode outside grid"),
        );
        self.coeffs[g.index(i, j, l)] = value;
    }

    /// Zero-mode coefficient (the sample mean under this normalization).
    #[inline]
    pub fn dc(&self) -> Complex<f64> {
        self.coeffs[0]
    }

    /// Inverse transform; the imaginary residue is discarded.
    ///
    /// For Hermitian-symmetric input the residue is at roundoff level; use
    /// [`SpectralField::inverse_complex`] to inspect it.
    pub fn inverse(&self) -> RealField {
        let full = self.inverse_complex();
        RealField {
            grid: self.grid.clone(),
            samples: full.into_iter().map(|c| c.re).collect(),
        }
    }

    /// Inverse transform keeping both parts.
    pub fn inverse_complex(&self) -> Vec<Complex<f64>> {
        let n = self.grid.modes_per_axis();
        let mut data = self.coeffs.clone();
        fft3(&mut data, n, FftDirection::Inverse);
        data
    }

    /// Largest imaginary magnitude of the synthesized field relative to its
    /// largest magnitude; small for fields representing real functions.
    pub fn imaginary_residual(&self) -> f64 {
        let full = self.inverse_complex();
        let max_im = full.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        let max_all = full.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if max_all == 0.0 {
            0.0
        } else {
            max_im / max_all
        }
    }

    /// Sum of `|c|^2` over all modes.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| {
            m.max(c.re.abs()).max(c.im.abs())
        })
    }

    /// True when every coefficient is finite and below `limit` in magnitude.
    pub fn all_within(&self, limit: f64) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite() && c.re.abs() <= limit && c.im.abs() <= limit)
    }
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft(len, direction)
}

/// In-place complex 3D transform on an `n^3` cube, one axis at a time.
pub(crate) fn fft3(data: &mut [Complex<f64>], n: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, direction);
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex::new(0.0, 0.0); n];

    // x lines are contiguous.
    for chunk in data.chunks_exact_mut(n) {
        fft.process_with_scratch(chunk, &mut scratch);
    }

    // y lines, stride n within each z-plane.
    let nn = n * n;
    for iz in 0..n {
        let plane = &mut data[iz * nn..(iz + 1) * nn];
        for ix in 0..n {
            for iy in 0..n {
                line[iy] = plane[ix + iy * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for iy in 0..n {
                plane[ix + iy * n] = line[iy];
            }
        }
    }

    // z lines, stride n^2.
    for iy in 0..n {
        for ix in 0..n {
            let base = ix + iy * n;
            for iz in 0..n {
                line[iz] = data[base + iz * nn];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for iz in 0..n {
                data[base + iz * nn] = line[iz];
            }
        }
    }
}
