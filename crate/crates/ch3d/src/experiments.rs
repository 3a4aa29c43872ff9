//! Scripted experiment suites behind the CLI subcommands.

use serde::Serialize;

use crate::diagnostics::l2_distance_hat;
use crate::error::{Error, Result};
use crate::field::RealField;
use crate::flow::{solve, SolverConfig};
use crate::potential::Potential;

/// Final-time errors of a ladder of cutoff radii against the finest run.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub reference_cutoff: f64,
    pub t_final: f64,
    /// `(cutoff, |u_n(T) - u_ref(T)|_{L^2})`, in ladder order.
    pub errors: Vec<(f64, f64)>,
    pub strictly_decreasing: bool,
    /// Every error below half its predecessor.
    pub halving: bool,
}

/// Runs the same problem at each cutoff in `ladder` plus `reference`, all on
/// the same grid and step size, and measures final-time separations from the
/// reference. The reference is the finest member by construction, so it must
/// exceed every ladder entry.
pub fn convergence_study(
    u0: &RealField,
    potential: &Potential,
    base: &SolverConfig,
    ladder: &[f64],
    reference: f64,
) -> Result<ConvergenceReport> {
    if ladder.is_empty() {
        return Err(Error::InvalidSolverConfig(
            "convergence ladder must not be empty".into(),
        ));
    }
    if ladder.iter().any(|&n| !(n > 0.0)) {
        return Err(Error::InvalidCutoff(
            *ladder.iter().find(|&&n| !(n > 0.0)).unwrap(),
        ));
    }
    if ladder.iter().any(|&n| n >= reference) {
        return Err(Error::InvalidSolverConfig(format!(
            "reference cutoff {reference} must exceed every ladder entry"
        )));
    }

    let run = |cutoff: f64| -> Result<crate::field::SpectralField> {
        let mut config = base.clone();
        config.n_cutoff = Some(cutoff);
        let out = solve(u0, potential, &config, None).map_err(|e| e.error)?;
        Ok(out.state.u_hat)
    };

    let reference_state = run(reference)?;
    let mut errors = Vec::with_capacity(ladder.len());
    for &cutoff in ladder {
        let state = run(cutoff)?;
        errors.push((cutoff, l2_distance_hat(&state, &reference_state)));
    }

    let strictly_decreasing = errors.windows(2).all(|w| w[1].1 < w[0].1);
    let halving = errors.windows(2).all(|w| w[1].1 < 0.5 * w[0].1);

    Ok(ConvergenceReport {
        reference_cutoff: reference,
        t_final: base.steps() as f64 * base.dt,
        errors,
        strictly_decreasing,
        halving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Scheme;
    use crate::grid::Grid;
    use crate::init::InitialData;
    use crate::ops::DealiasRule;
    use std::sync::Arc;

    #[test]
    fn ladder_errors_decrease_for_smooth_data() {
        let g = Arc::new(Grid::new(16, 2.0 * std::f64::consts::PI).unwrap());
        let u0 = InitialData::Random {
            mean: 0.0,
            amplitude: 0.2,
            seed: 12,
            smooth_sigma: Some(1.5),
        }
        .build(&g)
        .unwrap();
        let config = SolverConfig {
            scheme: Scheme::Etdrk2,
            dt: 1e-3,
            t_final: 0.05,
            n_cutoff: None,
            dealias: DealiasRule::Padded(3),
            record_every: 50,
            seed: 12,
            hs: None,
        };
        let report = convergence_study(
            &u0,
            &Potential::double_well(),
            &config,
            &[2.0, 4.0],
            8.0,
        )
        .unwrap();
        assert!(report.strictly_decreasing, "errors {:?}", report.errors);
        assert!(report.errors.iter().all(|(_, e)| *e > 0.0));
    }

    #[test]
    fn ladder_must_sit_below_reference() {
        let g = Arc::new(Grid::new(8, 2.0 * std::f64::consts::PI).unwrap());
        let u0 = RealField::constant(g, 0.0);
        let config = SolverConfig {
            scheme: Scheme::Etdrk2,
            dt: 1e-3,
            t_final: 0.0,
            n_cutoff: None,
            dealias: DealiasRule::TwoThirds,
            record_every: 1,
            seed: 0,
            hs: None,
        };
        assert!(
            convergence_study(&u0, &Potential::zero(), &config, &[4.0, 8.0], 8.0).is_err()
        );
        assert!(convergence_study(&u0, &Potential::zero(), &config, &[], 8.0).is_err());
    }
}
