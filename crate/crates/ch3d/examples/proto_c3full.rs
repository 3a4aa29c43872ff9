use ch3d::diagnostics::*;
use ch3d::flow::{solve, Scheme, SolverConfig};
use ch3d::grid::Grid;
use ch3d::init::InitialData;
use ch3d::ops::DealiasRule;
use ch3d::potential::Potential;
use std::sync::Arc;
use std::time::Instant;

fn residual_max(n: usize, dt: f64, record_every: usize, t_final: f64) -> (f64, Vec<f64>, Vec<f64>) {
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
    drop(out);
    let res = energy_identity_residual(&traj, &dw).unwrap();
    let f: Vec<f64> = traj.iter().map(|(_, u)| free_energy(u, &dw).unwrap()).collect();
    (res.iter().fold(0.0f64, |m, r| m.max(r.abs())), res, f)
}

fn main() {
    let t0 = Instant::now();
    let (base, res_b, f) = residual_max(32, 1e-4, 100, 1.0);
    println!("base max|r|={base:.4e}  ({:.0}s)", t0.elapsed().as_secs_f64());
    let t1 = Instant::now();
    let (half, _, _) = residual_max(32, 5e-5, 100, 1.0);
    println!("half max|r|={half:.4e} ratio={:.3} ({:.0}s)", base / half, t1.elapsed().as_secs_f64());
    // energy monotonicity with the slack
    let viol = first_energy_violation(&f, &res_b, 0.01);
    println!("F(0)={:.6} F(end)={:.6} monotone violation at {viol:?}", f[0], f.last().unwrap());
}
