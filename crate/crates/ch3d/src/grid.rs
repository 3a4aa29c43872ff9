//! Periodic box geometry and per-axis wavenumber tables.
//!
//! The domain is the cube `[0, L)^3` sampled on `N` equispaced points per
//! axis. Wavenumbers follow the standard FFT ordering
//! `k = 0, 1, ..., N/2-1, -N/2, ..., -1`, scaled to physical values
//! `xi = 2*pi*k / L`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Grid {
    n: usize,
    l: f64,
    /// Physical wavenumber per transform slot, one table shared by all axes.
    xi: Vec<f64>,
    /// Wavenumbers for odd-order derivatives: the unpaired Nyquist slot is
    /// zero, matching the derivative of the real trigonometric interpolant.
    xi_deriv: Vec<f64>,
}

impl Grid {
    /// Builds a cubic periodic grid with `n` modes per axis and edge length `l`.
    ///
    /// `n` must be even and at least 4; `l` must be positive and finite.
    pub fn new(n: usize, l: f64) -> Result<Grid> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "modes per axis must be even and >= 4, got {n}"
            )));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "box edge length must be positive and finite, got {l}"
            )));
        }
        let xi: Vec<f64> = (0..n)
            .map(|i| 2.0 * std::f64::consts::PI * Self::signed_index(i, n) as f64 / l)
            .collect();
        let mut xi_deriv = xi.clone();
        xi_deriv[n / 2] = 0.0;
        Ok(Grid {
            n,
            l,
            xi,
            xi_deriv,
        })
    }

    /// Signed integer wavenumber for transform slot `i`.
    #[inline]
    pub fn signed_index(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Transform slot for a signed integer wavenumber, if representable.
    #[inline]
    pub fn slot(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k >= 0 && k < half {
            Some(k as usize)
        } else if k >= -half && k < 0 {
            Some((k + self.n as i64) as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn modes_per_axis(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_length(&self) -> f64 {
        self.l
    }

    /// Grid spacing `L / N`.
    #[inline]
    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Box volume `L^3`.
    #[inline]
    pub fn volume(&self) -> f64 {
        self.l * self.l * self.l
    }

    #[inline]
    pub fn num_points(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Per-axis wavenumber table in transform order.
    #[inline]
    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        self.xi[i]
    }

    /// Wavenumber used by odd-order derivatives (zero at Nyquist).
    #[inline]
    pub fn xi_deriv(&self, i: usize) -> f64 {
        self.xi_deriv[i]
    }

    /// `|xi|^2` for the mode in slots `(i, j, k)`.
    #[inline]
    pub fn xi_sq(&self, i: usize, j: usize, k: usize) -> f64 {
        self.xi[i] * self.xi[i] + self.xi[j] * self.xi[j] + self.xi[k] * self.xi[k]
    }

    /// Gradient-consistent `|xi|^2` (Nyquist slots excluded), the weight that
    /// matches sample-space quadrature of synthesized derivative fields.
    #[inline]
    pub fn xi_grad_sq(&self, i: usize, j: usize, k: usize) -> f64 {
        self.xi_deriv[i] * self.xi_deriv[i]
            + self.xi_deriv[j] * self.xi_deriv[j]
            + self.xi_deriv[k] * self.xi_deriv[k]
    }

    /// Largest `|xi_j|` representable on one axis (Nyquist).
    #[inline]
    pub fn xi_max_axis(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.n as f64 / 2.0) / self.l
    }

    /// Physical coordinate of sample `i` along one axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Flattened index, x fastest.
    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    /// Two grids are compatible when they describe the same box.
    #[inline]
    pub fn same_layout(&self, other: &Grid) -> bool {
        self.n == other.n && self.l == other.l
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_layout(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wavenumbers_follow_transform_order() {
        let g = Grid::new(4, 2.0 * PI).unwrap();
        assert_eq!(g.wavenumbers(), &[0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn nyquist_matches_box_scaling() {
        let g = Grid::new(8, 1.0).unwrap();
        assert_eq!(g.xi_max_axis(), 8.0 * PI);
        let max_abs = g.wavenumbers().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert_eq!(max_abs, 8.0 * PI);
        assert_eq!(g.wavenumbers().len(), 8);
        assert_eq!(g.xi(0), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(3, 1.0).is_err());
        assert!(Grid::new(2, 1.0).is_err());
        assert!(Grid::new(6, 0.0).is_err());
        assert!(Grid::new(6, -1.0).is_err());
        assert!(Grid::new(5, 2.0).is_err());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Grid::new(16, 3.5).unwrap();
        let b = Grid::new(16, 3.5).unwrap();
        assert_eq!(a.wavenumbers(), b.wavenumbers());
    }

    #[test]
    fn slot_round_trips_signed_indices() {
        let g = Grid::new(8, 1.0).unwrap();
        for i in 0..8 {
            let k = Grid::signed_index(i, 8);
            assert_eq!(g.slot(k), Some(i));
        }
        assert_eq!(g.slot(4), None);
        assert_eq!(g.slot(-5), None);
    }
}
