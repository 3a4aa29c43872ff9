//! Time evolution.
//!
//! Three integrators advance `du/dt = -lap^2 u + lap P_n phi(u)`:
//!
//! - [`biharmonic_propagate`]: the exact propagator of the linear part,
//!   multiplying each mode by `exp(-t |xi|^4)`;
//! - [`step_rk4`]: classical Runge-Kutta on the frequency-cutoff system,
//!   the fidelity reference for small cutoffs;
//! - [`step_etd`]: first- and second-order exponential time differencing,
//!   which applies the linear semigroup exactly and treats the nonlinear
//!   term with the `phi_1`/`phi_2` weights.
//!
//! The zero mode carries the mean and is copied through every step
//! unchanged, so mass is conserved to the bit.

use std::sync::Arc;

use num_complex::Complex;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::grid::Grid;
use crate::ops::{self, DealiasRule};
use crate::potential::Potential;

/// Any coefficient beyond this magnitude (or non-finite) aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e12;

/// Linear stability bound of classical RK4 on the negative real axis.
pub const RK4_STABILITY_LIMIT: f64 = 2.785;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    GalerkinRk4,
    Etd1,
    Etdrk2,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::GalerkinRk4 => "galerkin_rk4",
            Scheme::Etd1 => "etd1",
            Scheme::Etdrk2 => "etdrk2",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "galerkin_rk4" => Ok(Scheme::GalerkinRk4),
            "etd1" => Ok(Scheme::Etd1),
            "etdrk2" => Ok(Scheme::Etdrk2),
            other => Err(format!(
                "unknown scheme '{other}' (expected galerkin_rk4, etd1, or etdrk2)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_final: f64,
    /// Sharp cutoff radius in physical wavenumber; `None` keeps every grid mode.
    pub n_cutoff: Option<f64>,
    pub dealias: DealiasRule,
    /// Steps between diagnostics records.
    pub record_every: usize,
    /// Seed recorded with the run for reproducible initial data.
    pub seed: u64,
    /// Optional extra Sobolev index tracked in the diagnostics.
    pub hs: Option<f64>,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidSolverConfig(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidSolverConfig(format!(
                "final time must be nonnegative, got {}",
                self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidSolverConfig(
                "record_every must be at least 1".into(),
            ));
        }
        if let Some(n) = self.n_cutoff {
            if !(n > 0.0) {
                return Err(Error::InvalidCutoff(n));
            }
        }
        Ok(())
    }

    /// Number of steps taken by [`solve`]; the final time is `steps * dt`.
    pub fn steps(&self) -> u64 {
        (self.t_final / self.dt).round() as u64
    }
}

/// State of a run at one instant.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub u_hat: SpectralField,
    pub step_count: u64,
}

impl FlowState {
    /// Spectral state from sample-space initial data, applying the cutoff.
    pub fn from_initial(u0: &RealField, config: &SolverConfig) -> Result<FlowState> {
        let mut u_hat = u0.forward();
        if let Some(n) = config.n_cutoff {
            u_hat = ops::project_low_modes(&u_hat, n)?;
        }
        Ok(FlowState {
            t: 0.0,
            u_hat,
            step_count: 0,
        })
    }

    pub fn to_real(&self) -> RealField {
        self.u_hat.inverse()
    }
}

/// Applies `exp(-t |xi|^4)` to every coefficient.
pub fn biharmonic_propagate(f: &SpectralField, t: f64) -> Result<SpectralField> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let g = f.grid().clone();
    let n = g.modes_per_axis();
    let mut out = f.clone();
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let s2 = g.xi_sq(ix, iy, iz);
                out.coeffs_mut()[g.index(ix, iy, iz)] *= (-(t * (s2 * s2))).exp();
            }
        }
    }
    Ok(out)
}

/// Right-hand side of the cutoff system in coefficient space:
/// `lap(P_n phi(u)) - lap^2 u`, with `phi(u)` evaluated pseudo-spectrally
/// under `rule` and then projected. The output is supported in the cutoff
/// ball and has an exactly zero mean mode.
pub fn galerkin_rhs(
    u_hat: &SpectralField,
    potential: &Potential,
    n_cutoff: Option<f64>,
    rule: DealiasRule,
) -> Result<SpectralField> {
    let g = u_hat.grid().clone();
    let n = g.modes_per_axis();
    let mut phi_hat = ops::dealiased_map(u_hat, rule, |s| potential.phi(s))?;
    if let Some(radius) = n_cutoff {
        phi_hat = ops::project_low_modes(&phi_hat, radius)?;
    }
    let mut out = SpectralField::zeros(g.clone());
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let idx = g.index(ix, iy, iz);
                let s2 = g.xi_sq(ix, iy, iz);
                out.coeffs_mut()[idx] =
                    phi_hat.coeffs()[idx] * (-s2) - u_hat.coeffs()[idx] * s2 * s2;
            }
        }
    }
    out.coeffs_mut()[0] = Complex::new(0.0, 0.0);
    Ok(out)
}

fn check_blowup(u_hat: &SpectralField, t: f64, step: u64) -> Result<()> {
    if u_hat.all_within(BLOWUP_LIMIT) {
        Ok(())
    } else {
        Err(Error::BlowUp {
            t,
            step,
            detail: format!("coefficient magnitude exceeded {BLOWUP_LIMIT:e} or went non-finite"),
        })
    }
}

/// One classical RK4 step on the cutoff system.
pub fn step_rk4(state: &FlowState, potential: &Potential, config: &SolverConfig) -> Result<FlowState> {
    let dt = config.dt;
    let rhs = |u: &SpectralField| galerkin_rhs(u, potential, config.n_cutoff, config.dealias);

    let k1 = rhs(&state.u_hat)?;
    let k2 = rhs(&axpy(&state.u_hat, dt / 2.0, &k1))?;
    let k3 = rhs(&axpy(&state.u_hat, dt / 2.0, &k2))?;
    let k4 = rhs(&axpy(&state.u_hat, dt, &k3))?;

    let mut u_new = state.u_hat.clone();
    for (i, c) in u_new.coeffs_mut().iter_mut().enumerate() {
        *c += (k1.coeffs()[i] + (k2.coeffs()[i] + k3.coeffs()[i]) * 2.0 + k4.coeffs()[i])
            * (dt / 6.0);
    }
    u_new.coeffs_mut()[0] = state.u_hat.coeffs()[0];

    let step_count = state.step_count + 1;
    let t = step_count as f64 * dt;
    check_blowup(&u_new, t, step_count)?;
    Ok(FlowState {
        t,
        u_hat: u_new,
        step_count,
    })
}

fn axpy(u: &SpectralField, a: f64, v: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    for (c, k) in out.coeffs_mut().iter_mut().zip(v.coeffs()) {
        *c += k * a;
    }
    out
}

/// `(e^z - 1) / z`, continuous through `z = 0`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 0.5 {
        // truncated series; the last kept term at |z| = 0.5 is ~1e-17
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=16 {
            term *= z / (k + 1) as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `(e^z - 1 - z) / z^2`, continuous through `z = 0` with value 1/2.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..=16 {
            term *= z / (k + 2) as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0 - z) / (z * z)
    }
}

/// Per-mode weights of the exponential integrators for a fixed step size.
pub struct EtdWeights {
    decay: Vec<f64>,
    phi1_dt: Vec<f64>,
    phi2_dt: Vec<f64>,
}

impl EtdWeights {
    pub fn new(grid: &Arc<Grid>, dt: f64) -> EtdWeights {
        let n = grid.modes_per_axis();
        let mut decay = Vec::with_capacity(grid.num_points());
        let mut phi1_dt = Vec::with_capacity(grid.num_points());
        let mut phi2_dt = Vec::with_capacity(grid.num_points());
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let s2 = grid.xi_sq(ix, iy, iz);
                    let z = -(dt * (s2 * s2));
                    decay.push(z.exp());
                    phi1_dt.push(dt * phi1(z));
                    phi2_dt.push(dt * phi2(z));
                }
            }
        }
        EtdWeights {
            decay,
            phi1_dt,
            phi2_dt,
        }
    }
}

/// Nonlinear forcing in coefficient space: `lap P_n phi(u)`.
fn nonlinear_hat(
    u_hat: &SpectralField,
    potential: &Potential,
    n_cutoff: Option<f64>,
    rule: DealiasRule,
) -> Result<SpectralField> {
    let g = u_hat.grid().clone();
    let n = g.modes_per_axis();
    let mut phi_hat = ops::dealiased_map(u_hat, rule, |s| potential.phi(s))?;
    if let Some(radius) = n_cutoff {
        phi_hat = ops::project_low_modes(&phi_hat, radius)?;
    }
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let idx = g.index(ix, iy, iz);
                let s2 = g.xi_sq(ix, iy, iz);
                phi_hat.coeffs_mut()[idx] *= -s2;
            }
        }
    }
    Ok(phi_hat)
}

/// One exponential-integrator step (`Etd1` or `Etdrk2` per the config).
pub fn step_etd(state: &FlowState, potential: &Potential, config: &SolverConfig) -> Result<FlowState> {
    let weights = EtdWeights::new(state.u_hat.grid(), config.dt);
    step_etd_with(&weights, state, potential, config)
}

/// Same as [`step_etd`] but reusing precomputed weights.
pub fn step_etd_with(
    weights: &EtdWeights,
    state: &FlowState,
    potential: &Potential,
    config: &SolverConfig,
) -> Result<FlowState> {
    let f1 = nonlinear_hat(&state.u_hat, potential, config.n_cutoff, config.dealias)?;

    // predictor: exact linear semigroup plus phi_1-weighted forcing
    let mut a = state.u_hat.clone();
    for (i, c) in a.coeffs_mut().iter_mut().enumerate() {
        *c = *c * weights.decay[i] + f1.coeffs()[i] * weights.phi1_dt[i];
    }

    let u_new = match config.scheme {
        Scheme::Etd1 => a,
        Scheme::Etdrk2 => {
            let f2 = nonlinear_hat(&a, potential, config.n_cutoff, config.dealias)?;
            for (i, c) in a.coeffs_mut().iter_mut().enumerate() {
                *c += (f2.coeffs()[i] - f1.coeffs()[i]) * weights.phi2_dt[i];
            }
            a
        }
        Scheme::GalerkinRk4 => {
            return Err(Error::InvalidSolverConfig(
                "step_etd called with scheme galerkin_rk4".into(),
            ))
        }
    };

    let mut u_new = u_new;
    u_new.coeffs_mut()[0] = state.u_hat.coeffs()[0];

    let step_count = state.step_count + 1;
    let t = step_count as f64 * config.dt;
    check_blowup(&u_new, t, step_count)?;
    Ok(FlowState {
        t,
        u_hat: u_new,
        step_count,
    })
}

/// Full output of a run.
#[derive(Debug)]
pub struct SolveOutput {
    pub state: FlowState,
    pub records: Vec<DiagnosticsRecord>,
    /// States captured every `snapshot_every` steps (plus initial and final)
    /// when a cadence is given.
    pub snapshots: Vec<FlowState>,
}

/// A failed run carrying everything produced before the abort.
#[derive(Debug)]
pub struct SolveFailure {
    pub error: Error,
    pub partial: SolveOutput,
}

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl std::error::Error for SolveFailure {}

/// Advances `u0` from `t = 0` to `t_final`, recording diagnostics every
/// `record_every` steps and capturing states at the snapshot cadence.
///
/// Deterministic: identical inputs produce identical outputs bit for bit.
pub fn solve(
    u0: &RealField,
    potential: &Potential,
    config: &SolverConfig,
    snapshot_every: Option<usize>,
) -> std::result::Result<SolveOutput, Box<SolveFailure>> {
    let fail = |error: Error, partial: SolveOutput| Box::new(SolveFailure { error, partial });
    let empty = || SolveOutput {
        state: FlowState {
            t: 0.0,
            u_hat: SpectralField::zeros(u0.grid().clone()),
            step_count: 0,
        },
        records: Vec::new(),
        snapshots: Vec::new(),
    };

    if let Err(e) = config.validate() {
        return Err(fail(e, empty()));
    }
    let mut state = match FlowState::from_initial(u0, config) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, empty())),
    };

    let steps = config.steps();
    let weights = match config.scheme {
        Scheme::Etd1 | Scheme::Etdrk2 => Some(EtdWeights::new(u0.grid(), config.dt)),
        Scheme::GalerkinRk4 => None,
    };

    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let record =
        |state: &FlowState, records: &mut Vec<DiagnosticsRecord>| -> Result<()> {
            records.push(DiagnosticsRecord::compute(
                state.t,
                &state.u_hat,
                potential,
                config.hs,
            )?);
            Ok(())
        };

    if let Err(e) = record(&state, &mut records) {
        return Err(fail(
            e,
            SolveOutput {
                state,
                records,
                snapshots,
            },
        ));
    }
    if snapshot_every.is_some() {
        snapshots.push(state.clone());
    }

    for step in 1..=steps {
        let next = match (config.scheme, &weights) {
            (Scheme::GalerkinRk4, _) => step_rk4(&state, potential, config),
            (_, Some(w)) => step_etd_with(w, &state, potential, config),
            _ => unreachable!(),
        };
        state = match next {
            Ok(s) => s,
            Err(e) => {
                return Err(fail(
                    e,
                    SolveOutput {
                        state,
                        records,
                        snapshots,
                    },
                ))
            }
        };
        let is_last = step == steps;
        if step % config.record_every as u64 == 0 || is_last {
            if let Err(e) = record(&state, &mut records) {
                return Err(fail(
                    e,
                    SolveOutput {
                        state,
                        records,
                        snapshots,
                    },
                ));
            }
        }
        if let Some(every) = snapshot_every {
            if step % every as u64 == 0 || is_last {
                snapshots.push(state.clone());
            }
        }
    }

    Ok(SolveOutput {
        state,
        records,
        snapshots,
    })
}

/// Outcome of sampling the sup-norm of the bi-harmonic flow.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupProbe {
    /// Earliest sampled time where the sup norm exceeded its initial value,
    /// if any.
    pub first_violation: Option<f64>,
    pub initial_linf: f64,
    pub max_linf: f64,
    pub max_linf_time: f64,
    pub t_max: f64,
    pub samples: usize,
}

/// Evaluates `max |exp(-t lap^2) u0|` at `samples` uniformly spaced times on
/// `[0, t_max]` and reports the earliest exceedance of the initial sup norm.
///
/// Exceedance uses a `1e-12` relative guard so transform roundoff on data
/// the flow fixes (constants, single modes) cannot register as a violation.
pub fn linf_semigroup_probe(u0: &RealField, t_max: f64, samples: usize) -> Result<SemigroupProbe> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidSolverConfig(format!(
            "probe horizon must be positive, got {t_max}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidSolverConfig(format!(
            "probe needs at least 2 samples, got {samples}"
        )));
    }
    let u0_hat = u0.forward();
    let initial_linf = u0.max_abs();
    let tol = initial_linf * 1e-12;

    let mut first_violation = None;
    let mut max_linf = f64::NEG_INFINITY;
    let mut max_linf_time = 0.0;
    for i in 0..samples {
        let t = t_max * i as f64 / (samples - 1) as f64;
        let linf = biharmonic_propagate(&u0_hat, t)?.inverse().max_abs();
        if linf > max_linf {
            max_linf = linf;
            max_linf_time = t;
        }
        if first_violation.is_none() && linf > initial_linf + tol {
            first_violation = Some(t);
        }
    }
    Ok(SemigroupProbe {
        first_violation,
        initial_linf,
        max_linf,
        max_linf_time,
        t_max,
        samples,
    })
}

/// `dt * max |xi|^4` over the modes a run can excite; RK4 is linearly
/// unstable beyond [`RK4_STABILITY_LIMIT`].
pub fn rk4_stability_number(grid: &Grid, dt: f64, n_cutoff: Option<f64>) -> f64 {
    let n = grid.modes_per_axis();
    let mut max_s2 = 0.0f64;
    let r2 = n_cutoff.map(|r| r * r);
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let s2 = grid.xi_sq(ix, iy, iz);
                if let Some(r2) = r2 {
                    if s2 > r2 {
                        continue;
                    }
                }
                max_s2 = max_s2.max(s2);
            }
        }
    }
    dt * max_s2 * max_s2
}

/// Heuristic nonlinear CFL number `dt * max|xi|^2 * max|phi'(u0)|` used to
/// warn about aggressive steps for the exponential schemes.
pub fn etd_cfl_number(grid: &Grid, dt: f64, potential: &Potential, u0: &RealField) -> f64 {
    let max_xi2 = 3.0 * grid.xi_max_axis() * grid.xi_max_axis();
    let max_dphi = u0
        .samples()
        .iter()
        .map(|&s| potential.phi_prime(s).abs())
        .fold(0.0, f64::max);
    dt * max_xi2 * max_dphi
}
