use ch3d::diagnostics::*;
use ch3d::experiments::convergence_study;
use ch3d::flow::{solve, Scheme, SolverConfig};
use ch3d::grid::Grid;
use ch3d::init::InitialData;
use ch3d::ops::DealiasRule;
use ch3d::potential::Potential;
use std::sync::Arc;

fn residual_max(n: usize, dt: f64, record_every: usize, t_final: f64) -> f64 {
    let g = Arc::new(Grid::new(n, 2.0 * std::f64::consts::PI).unwrap());
    let u0 = InitialData::Modes {
        mean: 0.05,
        modes: vec![([1, 0, 0], 0.2), ([0, 1, 1], 0.15), ([2, 1, 0], 0.1)],
    }.build(&g).unwrap();
    let cfg = SolverConfig {
        scheme: Scheme::Etdrk2, dt, t_final,
        n_cutoff: None, dealias: DealiasRule::TwoThirds,
        record_every, seed: 0, hs: None,
    };
    let dw = Potential::double_well();
    let out = solve(&u0, &dw, &cfg, Some(record_every)).unwrap();
    let traj: Vec<(f64, ch3d::RealField)> = out.snapshots.iter().map(|s| (s.t, s.to_real())).collect();
    let res = energy_identity_residual(&traj, &dw).unwrap();
    res.iter().fold(0.0f64, |m, r| m.max(r.abs()))
}

fn main() {
    // criterion-3 prototype at 16^3
    let base = residual_max(16, 1e-4, 100, 1.0);
    let half = residual_max(16, 5e-5, 100, 1.0);
    println!("c3 proto: max|r| base={base:.4e} half={half:.4e} ratio={:.3}", base / half);

    // criterion-4 prototype at 32^3 with ladder {4,8} vs 16
    let g = Arc::new(Grid::new(32, 2.0 * std::f64::consts::PI).unwrap());
    let u0 = InitialData::Random { mean: 0.0, amplitude: 0.2, seed: 7, smooth_sigma: Some(2.0) }.build(&g).unwrap();
    let cfg = SolverConfig {
        scheme: Scheme::Etdrk2, dt: 4e-4, t_final: 0.1,
        n_cutoff: None, dealias: DealiasRule::Padded(3),
        record_every: 1000, seed: 7, hs: None,
    };
    let rep = convergence_study(&u0, &Potential::double_well(), &cfg, &[4.0, 8.0], 16.0).unwrap();
    println!("c4 proto: errors {:?} decreasing={} halving={}", rep.errors, rep.strictly_decreasing, rep.halving);
}
