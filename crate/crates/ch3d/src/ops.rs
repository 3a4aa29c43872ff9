//! Spectral differential operators, the sharp frequency cutoff, Bessel
//! weights, and dealiased pointwise evaluation.
//!
//! All operators act coefficient-wise and return new fields. Products and
//! nonlinear maps are evaluated pseudo-spectrally under a [`DealiasRule`]:
//! either the 2/3 mode filter on the native grid or exact evaluation on an
//! enlarged grid sized for a given polynomial degree.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::field::{fft3, SpectralField};
use crate::grid::Grid;

/// How pointwise products are kept alias-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DealiasRule {
    /// Zero every mode with any `|k_j| > N/3` after a product on the native grid.
    TwoThirds,
    /// Evaluate products on `ceil((q+1)N/2)` points per axis and truncate
    /// back; exact for polynomial nonlinearities of degree `q`.
    Padded(u32),
}

impl DealiasRule {
    /// Padded grid size per axis for degree-`q` products on an `n` grid.
    pub fn padded_size(n: usize, q: u32) -> usize {
        ((q as usize + 1) * n).div_ceil(2)
    }
}

impl fmt::Display for DealiasRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DealiasRule::TwoThirds => write!(f, "two_thirds"),
            DealiasRule::Padded(q) => write!(f, "padded:{q}"),
        }
    }
}

impl FromStr for DealiasRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "two_thirds" {
            return Ok(DealiasRule::TwoThirds);
        }
        if let Some(q) = s.strip_prefix("padded:") {
            let q: u32 = q
                .parse()
                .map_err(|_| format!("bad padded degree in dealias rule '{s}'"))?;
            if q == 0 {
                return Err("padded dealias degree must be >= 1".into());
            }
            return Ok(DealiasRule::Padded(q));
        }
        Err(format!(
            "unknown dealias rule '{s}' (expected 'two_thirds' or 'padded:<degree>')"
        ))
    }
}

/// Multiplies each coefficient by `-|xi|^2`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    map_modes(f, |c, s2| c * (-s2))
}

/// Multiplies each coefficient by `|xi|^4`, applied as two `|xi|^2` factors
/// so it agrees bitwise with two Laplacians.
pub fn biharmonic(f: &SpectralField) -> SpectralField {
    map_modes(f, |c, s2| c * s2 * s2)
}

/// Spectral gradient: component `j` multiplies by `i*xi_j`, with the
/// unpaired Nyquist slot zeroed so real fields have real derivatives.
pub fn gradient(f: &SpectralField) -> [SpectralField; 3] {
    let g = f.grid().clone();
    let n = g.modes_per_axis();
    let mut out = [
        SpectralField::zeros(g.clone()),
        SpectralField::zeros(g.clone()),
        SpectralField::zeros(g.clone()),
    ];
    let coeffs = f.coeffs();
    for iz in 0..n {
        let xz = g.xi_deriv(iz);
        for iy in 0..n {
            let xy = g.xi_deriv(iy);
            for ix in 0..n {
                let idx = g.index(ix, iy, iz);
                let c = coeffs[idx];
                let rot = Complex::new(-c.im, c.re); // i * c
                out[0].coeffs_mut()[idx] = rot * g.xi_deriv(ix);
                out[1].coeffs_mut()[idx] = rot * xy;
                out[2].coeffs_mut()[idx] = rot * xz;
            }
        }
    }
    out
}

/// Sharp Fourier cutoff: modes with `|xi| <= radius` pass, the rest become
/// exactly zero. Idempotent.
pub fn project_low_modes(f: &SpectralField, radius: f64) -> Result<SpectralField> {
    if !(radius > 0.0) {
        return Err(Error::InvalidCutoff(radius));
    }
    let r2 = radius * radius;
    Ok(map_modes(f, |c, s2| {
        if s2 <= r2 {
            c
        } else {
            Complex::new(0.0, 0.0)
        }
    }))
}

/// Multiplies each coefficient by `(1 + |xi|^2)^(s/2)`; `s = 0` is the identity.
pub fn bessel_weight(f: &SpectralField, s: f64) -> SpectralField {
    map_modes(f, |c, s2| c * (1.0 + s2).powf(s / 2.0))
}

/// Applies the mode filter belonging to `rule`.
///
/// For `TwoThirds` this zeroes every mode with any `|k_j| > N/3`. For
/// `Padded(q)` every native mode is already alias-free after a padded
/// product, so the filter is the identity. Both are projections.
pub fn dealias(f: &SpectralField, rule: DealiasRule) -> SpectralField {
    match rule {
        DealiasRule::TwoThirds => two_thirds_filter(f),
        DealiasRule::Padded(_) => f.clone(),
    }
}

fn two_thirds_filter(f: &SpectralField) -> SpectralField {
    let g = f.grid().clone();
    let n = g.modes_per_axis();
    let keep: Vec<bool> = (0..n)
        .map(|i| 3 * Grid::signed_index(i, n).unsigned_abs() as usize <= n)
        .collect();
    let mut out = f.clone();
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                if !(keep[ix] && keep[iy] && keep[iz]) {
                    out.coeffs_mut()[g.index(ix, iy, iz)] = Complex::new(0.0, 0.0);
                }
            }
        }
    }
    out
}

/// Pointwise product of two fields under the dealias rule.
///
/// Samples are multiplied as complex values, so for `Padded(q)` with
/// `q >= 2` the result is the exact truncated convolution of the inputs.
pub fn dealiased_product(
    a: &SpectralField,
    b: &SpectralField,
    rule: DealiasRule,
) -> SpectralField {
    match rule {
        DealiasRule::TwoThirds => {
            let fa = a.inverse_complex();
            let fb = b.inverse_complex();
            let prod: Vec<Complex<f64>> =
                fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
            two_thirds_filter(&forward_complex(a.grid().clone(), prod))
        }
        DealiasRule::Padded(q) => {
            let n = a.grid().modes_per_axis();
            let m = DealiasRule::padded_size(n, q);
            let mut pa = pad_spectrum(a, m);
            let pb = {
                let mut pb = pad_spectrum(b, m);
                fft3(&mut pb, m, FftDirection::Inverse);
                pb
            };
            fft3(&mut pa, m, FftDirection::Inverse);
            for (x, y) in pa.iter_mut().zip(&pb) {
                *x *= y;
            }
            fft3(&mut pa, m, FftDirection::Forward);
            let scale = 1.0 / (m * m * m) as f64;
            for c in pa.iter_mut() {
                *c *= scale;
            }
            truncate_spectrum(&pa, m, a.grid().clone())
        }
    }
}

/// Applies a real scalar function to the synthesized samples under the
/// dealias rule and transforms back. Errors if the map produces a
/// non-finite value.
pub fn dealiased_map(
    f: &SpectralField,
    rule: DealiasRule,
    func: impl Fn(f64) -> f64,
) -> Result<SpectralField> {
    match rule {
        DealiasRule::TwoThirds => {
            let samples = f.inverse_complex();
            let mut mapped = Vec::with_capacity(samples.len());
            for (index, c) in samples.iter().enumerate() {
                let v = func(c.re);
                if !v.is_finite() {
                    return Err(Error::NonFinitePotential { index });
                }
                mapped.push(Complex::new(v, 0.0));
            }
            Ok(two_thirds_filter(&forward_complex(
                f.grid().clone(),
                mapped,
            )))
        }
        DealiasRule::Padded(q) => {
            let n = f.grid().modes_per_axis();
            let m = DealiasRule::padded_size(n, q);
            let mut padded = pad_spectrum(f, m);
            fft3(&mut padded, m, FftDirection::Inverse);
            for (index, c) in padded.iter_mut().enumerate() {
                let v = func(c.re);
                if !v.is_finite() {
                    return Err(Error::NonFinitePotential { index });
                }
                *c = Complex::new(v, 0.0);
            }
            fft3(&mut padded, m, FftDirection::Forward);
            let scale = 1.0 / (m * m * m) as f64;
            for c in padded.iter_mut() {
                *c *= scale;
            }
            Ok(truncate_spectrum(&padded, m, f.grid().clone()))
        }
    }
}

fn forward_complex(grid: Arc<Grid>, mut data: Vec<Complex<f64>>) -> SpectralField {
    let n = grid.modes_per_axis();
    fft3(&mut data, n, FftDirection::Forward);
    let scale = 1.0 / grid.num_points() as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
    SpectralField::from_coeffs(grid, data).expect("matching layout")
}

/// Per-axis target slots and weights used when embedding an `n`-grid mode in
/// an `m`-grid. The unpaired Nyquist coefficient `k = -n/2` is split evenly
/// between `+n/2` and `-n/2` so real fields stay real on the padded grid.
fn pad_targets(i: usize, n: usize, m: usize) -> [(usize, f64); 2] {
    let k = Grid::signed_index(i, n);
    let to_slot = |k: i64| -> usize {
        if k >= 0 {
            k as usize
        } else {
            (k + m as i64) as usize
        }
    };
    if k == -((n / 2) as i64) {
        [(to_slot(k), 0.5), (to_slot(-k), 0.5)]
    } else {
        [(to_slot(k), 1.0), (to_slot(k), 0.0)]
    }
}

fn pad_spectrum(f: &SpectralField, m: usize) -> Vec<Complex<f64>> {
    let g = f.grid();
    let n = g.modes_per_axis();
    assert!(m > n, "padded grid must be larger than the native grid");
    let mut out = vec![Complex::new(0.0, 0.0); m * m * m];
    let targets: Vec<[(usize, f64); 2]> = (0..n).map(|i| pad_targets(i, n, m)).collect();
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let c = f.coeffs()[g.index(ix, iy, iz)];
                for &(tz, wz) in &targets[iz] {
                    if wz == 0.0 {
                        continue;
                    }
                    for &(ty, wy) in &targets[iy] {
                        if wy == 0.0 {
                            continue;
                        }
                        for &(tx, wx) in &targets[ix] {
                            if wx == 0.0 {
                                continue;
                            }
                            out[tx + m * (ty + m * tz)] += c * (wx * wy * wz);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Per-axis source slots when truncating an `m`-grid spectrum back to `n`
/// modes; the Nyquist target folds the `+n/2` and `-n/2` entries together.
fn truncate_sources(i: usize, n: usize, m: usize) -> [(usize, f64); 2] {
    let k = Grid::signed_index(i, n);
    let to_slot = |k: i64| -> usize {
        if k >= 0 {
            k as usize
        } else {
            (k + m as i64) as usize
        }
    };
    if k == -((n / 2) as i64) {
        [(to_slot(k), 1.0), (to_slot(-k), 1.0)]
    } else {
        [(to_slot(k), 1.0), (to_slot(k), 0.0)]
    }
}

fn truncate_spectrum(big: &[Complex<f64>], m: usize, grid: Arc<Grid>) -> SpectralField {
    let n = grid.modes_per_axis();
    let sources: Vec<[(usize, f64); 2]> = (0..n).map(|i| truncate_sources(i, n, m)).collect();
    let mut out = SpectralField::zeros(grid.clone());
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for &(sz, wz) in &sources[iz] {
                    if wz == 0.0 {
                        continue;
                    }
                    for &(sy, wy) in &sources[iy] {
                        if wy == 0.0 {
                            continue;
                        }
                        for &(sx, wx) in &sources[ix] {
                            if wx == 0.0 {
                                continue;
                            }
                            acc += big[sx + m * (sy + m * sz)] * (wx * wy * wz);
                        }
                    }
                }
                out.coeffs_mut()[grid.index(ix, iy, iz)] = acc;
            }
        }
    }
    out
}

fn map_modes(
    f: &SpectralField,
    op: impl Fn(Complex<f64>, f64) -> Complex<f64>,
) -> SpectralField {
    let g = f.grid().clone();
    let n = g.modes_per_axis();
    let mut out = SpectralField::zeros(g.clone());
    let src = f.coeffs();
    let dst = out.coeffs_mut();
    for iz in 0..n {
        let xz2 = g.xi(iz) * g.xi(iz);
        for iy in 0..n {
            let xyz2 = xz2 + g.xi(iy) * g.xi(iy);
            let row = g.index(0, iy, iz);
            for ix in 0..n {
                let s2 = xyz2 + g.xi(ix) * g.xi(ix);
                dst[row + ix] = op(src[row + ix], s2);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealField;
    use crate::testutil::seeded_field;
    use std::f64::consts::PI;

    fn grid(n: usize, l: f64) -> Arc<Grid> {
        Arc::new(Grid::new(n, l).unwrap())
    }

    fn single_mode(g: &Arc<Grid>, k: [i64; 3], v: Complex<f64>) -> SpectralField {
        let mut f = SpectralField::zeros(g.clone());
        f.set_mode(k, v);
        f
    }

    #[test]
    fn laplacian_and_biharmonic_symbols_on_unit_mode() {
        let g = grid(8, 2.0 * PI);
        let f = single_mode(&g, [1, 0, 0], Complex::new(1.0, 0.0));
        assert_eq!(laplacian(&f).mode([1, 0, 0]), Complex::new(-1.0, 0.0));
        assert_eq!(biharmonic(&f).mode([1, 0, 0]), Complex::new(1.0, 0.0));
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let g = grid(8, 3.0);
        let f = RealField::constant(g, 5.0).forward();
        let lap = laplacian(&f);
        assert!(lap.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn double_laplacian_equals_biharmonic_bitwise() {
        let g = grid(8, 1.9);
        let f = seeded_field(&g, 11, 1.0).forward();
        let twice = laplacian(&laplacian(&f));
        let once = biharmonic(&f);
        assert_eq!(twice.coeffs(), once.coeffs());
    }

    #[test]
    fn gradient_of_cosine_is_minus_sine() {
        let l = 2.0 * PI;
        let g = grid(16, l);
        let f = RealField::from_fn(g.clone(), |x, _, _| x.cos()).unwrap().forward();
        let [gx, gy, gz] = gradient(&f);
        let gx_real = gx.inverse();
        let n = g.modes_per_axis();
        for ix in 0..n {
            let expect = -(g.coord(ix)).sin();
            assert!((gx_real.samples()[ix] - expect).abs() < 1e-12);
        }
        assert!(gy.power() < 1e-28);
        assert!(gz.power() < 1e-28);
    }

    #[test]
    fn projection_wide_radius_is_identity() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 5, 1.0).forward();
        let r = g.xi_max_axis() * 2.0;
        let p = project_low_modes(&f, r).unwrap();
        assert_eq!(p.coeffs(), f.coeffs());
    }

    #[test]
    fn projection_tiny_radius_keeps_only_dc() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 5, 1.0).forward();
        let p = project_low_modes(&f, 0.5).unwrap();
        assert_eq!(p.dc(), f.dc());
        for (i, c) in p.coeffs().iter().enumerate() {
            if i != 0 {
                assert_eq!(c.norm(), 0.0);
            }
        }
    }

    #[test]
    fn projection_is_idempotent_and_rejects_bad_radius() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 9, 1.0).forward();
        let once = project_low_modes(&f, 2.5).unwrap();
        let twice = project_low_modes(&once, 2.5).unwrap();
        assert_eq!(once.coeffs(), twice.coeffs());
        assert!(project_low_modes(&f, 0.0).is_err());
        assert!(project_low_modes(&f, -1.0).is_err());
    }

    #[test]
    fn projection_never_increases_power() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 31, 1.0).forward();
        for &r in &[0.5, 1.0, 2.0, 4.0, 7.0] {
            let p = project_low_modes(&f, r).unwrap();
            assert!(p.power() <= f.power() * (1.0 + 1e-15));
            // also in the weighted (Sobolev) sense, mode by mode
            let ok = p
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .all(|(a, b)| a.norm_sqr() <= b.norm_sqr() * (1.0 + 1e-15));
            assert!(ok);
        }
    }

    #[test]
    fn bessel_weight_examples() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 2, 1.0).forward();
        let w0 = bessel_weight(&f, 0.0);
        assert_eq!(w0.coeffs(), f.coeffs());

        let m = single_mode(&g, [0, 1, 0], Complex::new(0.3, -0.1));
        let w2 = bessel_weight(&m, 2.0);
        assert_eq!(w2.mode([0, 1, 0]), Complex::new(0.6, -0.2));
        let d = single_mode(&g, [0, 0, 0], Complex::new(1.5, 0.0));
        assert_eq!(bessel_weight(&d, 2.0).dc(), Complex::new(1.5, 0.0));
    }

    #[test]
    fn two_thirds_zeroes_high_axis_indices() {
        let g = grid(8, 2.0 * PI);
        let f = {
            let mut f = SpectralField::zeros(g.clone());
            for k in [-4i64, -3, -2, -1, 0, 1, 2, 3] {
                f.set_mode([k, 0, 0], Complex::new(1.0, 0.0));
            }
            f
        };
        let d = dealias(&f, DealiasRule::TwoThirds);
        for k in [-2i64, -1, 0, 1, 2] {
            assert_eq!(d.mode([k, 0, 0]), Complex::new(1.0, 0.0));
        }
        for k in [-4i64, -3, 3] {
            assert_eq!(d.mode([k, 0, 0]), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn dealias_is_a_projection() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 13, 1.0).forward();
        for rule in [DealiasRule::TwoThirds, DealiasRule::Padded(3)] {
            let once = dealias(&f, rule);
            let twice = dealias(&once, rule);
            assert_eq!(once.coeffs(), twice.coeffs());
        }
    }

    #[test]
    fn padded_product_of_single_modes_is_exact_convolution() {
        let g = grid(8, 2.0 * PI);
        let a = single_mode(&g, [1, 0, 0], Complex::new(0.7, 0.2));
        let b = single_mode(&g, [2, 1, 0], Complex::new(-0.3, 0.5));
        let prod = dealiased_product(&a, &b, DealiasRule::Padded(2));
        let expect = Complex::new(0.7, 0.2) * Complex::new(-0.3, 0.5);
        assert!((prod.mode([3, 1, 0]) - expect).norm() < 1e-14);
        let rest: f64 = prod.power() - prod.mode([3, 1, 0]).norm_sqr();
        assert!(rest.abs() < 1e-26);
    }

    /// Brute-force lattice convolution used as the oracle for padded products.
    fn convolution_oracle(a: &SpectralField, b: &SpectralField) -> SpectralField {
        let g = a.grid().clone();
        let n = g.modes_per_axis() as i64;
        let half = n / 2;
        let idx = |k: i64| -> Option<usize> {
            if (-half..half).contains(&k) {
                Some(if k >= 0 { k as usize } else { (k + n) as usize })
            } else {
                None
            }
        };
        let mut out = SpectralField::zeros(g.clone());
        // Sum over all source pairs; targets outside the window are dropped
        // except that the +N/2 image folds onto the -N/2 row, matching the
        // truncation convention.
        for az in -half..half {
            for ay in -half..half {
                for ax in -half..half {
                    let ca = a.mode([ax, ay, az]);
                    if ca.norm_sqr() == 0.0 {
                        continue;
                    }
                    for bz in -half..half {
                        for by in -half..half {
                            for bx in -half..half {
                                let cb = b.mode([bx, by, bz]);
                                if cb.norm_sqr() == 0.0 {
                                    continue;
                                }
                                let fold = |k: i64| -> Option<i64> {
                                    if k == half {
                                        Some(-half)
                                    } else if (-half..half).contains(&k) {
                                        Some(k)
                                    } else {
                                        None
                                    }
                                };
                                if let (Some(tx), Some(ty), Some(tz)) =
                                    (fold(ax + bx), fold(ay + by), fold(az + bz))
                                {
                                    let i = g
                                        .index(idx(tx).unwrap(), idx(ty).unwrap(), idx(tz).unwrap());
                                    out.coeffs_mut()[i] += ca * cb;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn padded_product_matches_convolution_oracle_on_sparse_fields() {
        let g = grid(4, 2.0 * PI);
        let mut a = SpectralField::zeros(g.clone());
        let mut b = SpectralField::zeros(g.clone());
        a.set_mode([1, 0, 0], Complex::new(0.4, 0.1));
        a.set_mode([0, 1, -1], Complex::new(-0.2, 0.3));
        a.set_mode([-1, 0, 1], Complex::new(0.05, -0.6));
        b.set_mode([1, 1, 0], Complex::new(0.9, 0.0));
        b.set_mode([0, -1, 1], Complex::new(0.0, -0.7));
        let got = dealiased_product(&a, &b, DealiasRule::Padded(2));
        let want = convolution_oracle(&a, &b);
        let n = g.modes_per_axis() as i64;
        for kz in -n / 2..n / 2 {
            for ky in -n / 2..n / 2 {
                for kx in -n / 2..n / 2 {
                    // the Nyquist rows carry the folding convention; compare
                    // the strictly interior window exactly
                    if kx == -n / 2 || ky == -n / 2 || kz == -n / 2 {
                        continue;
                    }
                    let d = (got.mode([kx, ky, kz]) - want.mode([kx, ky, kz])).norm();
                    assert!(d < 1e-13, "mismatch at ({kx},{ky},{kz}): {d}");
                }
            }
        }
    }

    #[test]
    fn pad_then_truncate_is_identity() {
        let g = grid(8, 2.0 * PI);
        let f = seeded_field(&g, 21, 1.0).forward();
        let m = DealiasRule::padded_size(8, 3);
        let padded = pad_spectrum(&f, m);
        let back = truncate_spectrum(&padded, m, g.clone());
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn dealiased_map_cubes_a_mode_exactly() {
        // (a cos x)^3 = a^3 (3 cos x + cos 3x)/4; both rules resolve this on
        // a grid with room for mode 3.
        let l = 2.0 * PI;
        let g = grid(16, l);
        let a = 0.8;
        let f = RealField::from_fn(g.clone(), |x, _, _| a * x.cos()).unwrap().forward();
        for rule in [DealiasRule::TwoThirds, DealiasRule::Padded(3)] {
            let cubed = dealiased_map(&f, rule, |v| v * v * v).unwrap();
            let c1 = cubed.mode([1, 0, 0]);
            let c3 = cubed.mode([3, 0, 0]);
            assert!((c1.re - 3.0 * a * a * a / 8.0).abs() < 1e-13, "{rule}");
            assert!((c3.re - a * a * a / 8.0).abs() < 1e-13, "{rule}");
        }
    }

    #[test]
    fn dealiased_map_reports_non_finite_output() {
        let g = grid(8, 2.0 * PI);
        let f = RealField::constant(g, 2.0).forward();
        let err = dealiased_map(&f, DealiasRule::TwoThirds, |v| (v - 2.0).recip());
        assert!(matches!(err, Err(Error::NonFinitePotential { .. })));
    }

    #[test]
    fn dealias_rule_round_trips_as_text() {
        for rule in [DealiasRule::TwoThirds, DealiasRule::Padded(4)] {
            let s = rule.to_string();
            assert_eq!(s.parse::<DealiasRule>().unwrap(), rule);
        }
        assert!("padded:0".parse::<DealiasRule>().is_err());
        assert!("threequarters".parse::<DealiasRule>().is_err());
    }
}
