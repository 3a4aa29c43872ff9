//! Bulk free-energy densities and their derivatives.
//!
//! A [`Potential`] bundles the density `Phi`, its derivative `phi`, and the
//! next two derivatives, together with a growth exponent `p`. Built-in
//! constructors cover the double well, general quartic-derivative
//! polynomials, and the zero potential (pure bi-harmonic flow). Growth and
//! positivity hypotheses are checked numerically over a sample range.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::RealField;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Range over which the integration constant of a polynomial density is
/// fixed so its minimum sits at zero.
const CONSTRUCTION_RANGE: (f64, f64) = (-10.0, 10.0);
const CONSTRUCTION_SAMPLES: usize = 4001;

/// Admissible growth exponent window for `|phi(s)| <= C(|s|^p + 1)`.
pub const GROWTH_EXPONENT_RANGE: (f64, f64) = (2.0, 21.0 / 5.0);

#[derive(Clone)]
pub struct Potential {
    name: String,
    density: ScalarFn,
    phi: ScalarFn,
    phi_prime: ScalarFn,
    phi_double_prime: ScalarFn,
    p: f64,
    coefficients: Option<[f64; 5]>,
    /// False when the density is a degree-5 polynomial, which is unbounded
    /// below outside any finite range.
    globally_bounded_below: bool,
}

/// Which member of the potential quadruple to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialTerm {
    /// The density `Phi`.
    Density,
    /// `phi = Phi'`.
    Phi,
    /// `phi'`.
    PhiPrime,
    /// `phi''`.
    PhiDoublePrime,
}

/// Outcome of sampling the growth inequalities over a range.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// Smallest constants making `|phi^(k)(s)| <= C (|s|^(p-k) + 1)` hold on
    /// the sample set, for k = 0, 1, 2.
    pub fitted_c: [f64; 3],
    /// True per inequality; the fit makes these hold by construction.
    pub satisfied: [bool; 3],
    pub sample_range: (f64, f64),
    /// Whether `Phi >= 0` over the sampled range (up to roundoff slack).
    pub positivity_ok: bool,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("coefficients", &self.coefficients)
            .finish()
    }
}

impl Potential {
    /// The double well `Phi(u) = (u^2 - 1)^2`.
    pub fn double_well() -> Potential {
        Potential {
            name: "double_well".into(),
            density: Arc::new(|u| {
                let w = u * u - 1.0;
                w * w
            }),
            phi: Arc::new(|u| 4.0 * u * u * u - 4.0 * u),
            phi_prime: Arc::new(|u| 12.0 * u * u - 4.0),
            phi_double_prime: Arc::new(|u| 24.0 * u),
            p: 3.0,
            coefficients: Some([0.0, -4.0, 0.0, 4.0, 0.0]),
            globally_bounded_below: true,
        }
    }

    /// The zero potential; the flow degenerates to the bi-harmonic heat flow.
    pub fn zero() -> Potential {
        Potential {
            name: "zero".into(),
            density: Arc::new(|_| 0.0),
            phi: Arc::new(|_| 0.0),
            phi_prime: Arc::new(|_| 0.0),
            phi_double_prime: Arc::new(|_| 0.0),
            p: 2.0,
            coefficients: Some([0.0; 5]),
            globally_bounded_below: true,
        }
    }

    /// Builds a potential from `phi(u) = sum a_i u^i`, requiring `a3 > 0`
    /// and `a1 < 0`. The density is the antiderivative shifted so its
    /// minimum over the construction range is zero.
    pub fn polynomial(a: [f64; 5]) -> Result<Potential> {
        if !(a[3] > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "cubic coefficient must be positive, got a3 = {}",
                a[3]
            )));
        }
        if !(a[1] < 0.0) {
            return Err(Error::InvalidPotential(format!(
                "linear coefficient must be negative, got a1 = {}",
                a[1]
            )));
        }
        if a.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential("non-finite coefficient".into()));
        }

        // antiderivative coefficients for u^1..u^5 (constant fixed below)
        let b: [f64; 5] = [a[0], a[1] / 2.0, a[2] / 3.0, a[3] / 4.0, a[4] / 5.0];
        let density_raw = move |u: f64| -> f64 {
            ((((b[4] * u + b[3]) * u + b[2]) * u + b[1]) * u + b[0]) * u
        };
        let phi = move |u: f64| -> f64 {
            (((a[4] * u + a[3]) * u + a[2]) * u + a[1]) * u + a[0]
        };
        let phi_prime = move |u: f64| -> f64 {
            ((4.0 * a[4] * u + 3.0 * a[3]) * u + 2.0 * a[2]) * u + a[1]
        };
        let phi_double_prime =
            move |u: f64| -> f64 { (12.0 * a[4] * u + 6.0 * a[3]) * u + 2.0 * a[2] };

        let shift = -polynomial_min(&density_raw, &phi, &phi_prime);
        let degree = if a[4] != 0.0 { 4.0 } else { 3.0 };

        Ok(Potential {
            name: "polynomial".into(),
            density: Arc::new(move |u| density_raw(u) + shift),
            phi: Arc::new(phi),
            phi_prime: Arc::new(phi_prime),
            phi_double_prime: Arc::new(phi_double_prime),
            p: degree,
            coefficients: Some(a),
            globally_bounded_below: a[4] == 0.0,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Growth exponent `p`.
    pub fn growth_exponent(&self) -> f64 {
        self.p
    }

    pub fn coefficients(&self) -> Option<[f64; 5]> {
        self.coefficients
    }

    /// Density `Phi(s)`.
    #[inline]
    pub fn density(&self, s: f64) -> f64 {
        (self.density)(s)
    }

    /// `phi(s) = Phi'(s)`.
    #[inline]
    pub fn phi(&self, s: f64) -> f64 {
        (self.phi)(s)
    }

    #[inline]
    pub fn phi_prime(&self, s: f64) -> f64 {
        (self.phi_prime)(s)
    }

    #[inline]
    pub fn phi_double_prime(&self, s: f64) -> f64 {
        (self.phi_double_prime)(s)
    }

    pub fn eval(&self, term: PotentialTerm, s: f64) -> f64 {
        match term {
            PotentialTerm::Density => self.density(s),
            PotentialTerm::Phi => self.phi(s),
            PotentialTerm::PhiPrime => self.phi_prime(s),
            PotentialTerm::PhiDoublePrime => self.phi_double_prime(s),
        }
    }

    /// Advisory notes about the constructed potential.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.p < GROWTH_EXPONENT_RANGE.0 || self.p > GROWTH_EXPONENT_RANGE.1 {
            w.push(format!(
                "growth exponent p = {} lies outside [{}, {}]",
                self.p, GROWTH_EXPONENT_RANGE.0, GROWTH_EXPONENT_RANGE.1
            ));
        }
        if !self.globally_bounded_below {
            w.push(
                "quartic phi: the density is a degree-5 polynomial and cannot stay \
                 nonnegative outside the construction range"
                    .into(),
            );
        }
        w
    }

    /// Samples the growth inequalities and the positivity of the density
    /// over `[s_min, s_max]`.
    pub fn validate_growth(
        &self,
        s_min: f64,
        s_max: f64,
        samples: usize,
    ) -> Result<GrowthReport> {
        if !(s_min < s_max) {
            return Err(Error::InvalidPotential(format!(
                "bad validation range [{s_min}, {s_max}]"
            )));
        }
        if samples < 100 {
            return Err(Error::InvalidPotential(format!(
                "need at least 100 samples, got {samples}"
            )));
        }
        let mut fitted_c = [0.0f64; 3];
        let mut min_density = f64::INFINITY;
        let mut max_density_abs = 0.0f64;
        for i in 0..samples {
            let s = s_min + (s_max - s_min) * i as f64 / (samples - 1) as f64;
            let values = [self.phi(s), self.phi_prime(s), self.phi_double_prime(s)];
            let d = self.density(s);
            if !d.is_finite() || values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinitePotential { index: i });
            }
            for (k, v) in values.iter().enumerate() {
                let bound = s.abs().powf(self.p - k as f64) + 1.0;
                fitted_c[k] = fitted_c[k].max(v.abs() / bound);
            }
            min_density = min_density.min(d);
            max_density_abs = max_density_abs.max(d.abs());
        }
        // roundoff slack: the shifted minimum of a polynomial density can sit
        // a few ulps below zero
        let positivity_ok = min_density >= -1e-12 * (1.0 + max_density_abs);
        Ok(GrowthReport {
            fitted_c,
            satisfied: [true; 3],
            sample_range: (s_min, s_max),
            positivity_ok,
        })
    }

    /// Applies one member of the quadruple pointwise to a field.
    pub fn eval_on_field(&self, term: PotentialTerm, u: &RealField) -> Result<RealField> {
        let mut out = Vec::with_capacity(u.samples().len());
        for (index, &s) in u.samples().iter().enumerate() {
            let v = self.eval(term, s);
            if !v.is_finite() {
                return Err(Error::NonFinitePotential { index });
            }
            out.push(v);
        }
        RealField::new(u.grid().clone(), out)
    }
}

/// Minimum of a polynomial density over the construction range: coarse scan
/// for sign changes of `phi`, Newton polish of the critical points, then the
/// minimum over critical points and endpoints.
fn polynomial_min(
    density: &impl Fn(f64) -> f64,
    phi: &impl Fn(f64) -> f64,
    phi_prime: &impl Fn(f64) -> f64,
) -> f64 {
    let (lo, hi) = CONSTRUCTION_RANGE;
    let step = (hi - lo) / (CONSTRUCTION_SAMPLES - 1) as f64;
    let mut candidates = vec![lo, hi];
    let mut prev = phi(lo);
    for i in 1..CONSTRUCTION_SAMPLES {
        let s = lo + step * i as f64;
        let cur = phi(s);
        if prev == 0.0 || prev.signum() != cur.signum() {
            let mut root = s - step / 2.0;
            for _ in 0..50 {
                let d = phi_prime(root);
                if d == 0.0 {
                    break;
                }
                let next = root - phi(root) / d;
                if !next.is_finite() || (next - root).abs() < 1e-15 * root.abs().max(1.0) {
                    root = next.is_finite().then_some(next).unwrap_or(root);
                    break;
                }
                root = next;
            }
            if root.is_finite() && (lo..=hi).contains(&root) {
                candidates.push(root);
            }
        }
        prev = cur;
    }
    candidates
        .into_iter()
        .map(density)
        .fold(f64::INFINITY, f64::min)
}
