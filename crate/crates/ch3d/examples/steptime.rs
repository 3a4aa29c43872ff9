use ch3d::flow::{solve, Scheme, SolverConfig};
use ch3d::grid::Grid;
use ch3d::init::InitialData;
use ch3d::ops::DealiasRule;
use ch3d::potential::Potential;
use std::sync::Arc;
use std::time::Instant;

fn main() {
    for &(n, steps, rule) in &[(32usize, 200u64, DealiasRule::TwoThirds), (64, 10, DealiasRule::Padded(3))] {
        let g = Arc::new(Grid::new(n, 2.0 * std::f64::consts::PI).unwrap());
        let u0 = InitialData::Random { mean: 0.0, amplitude: 0.1, seed: 1, smooth_sigma: Some(4.0) }.build(&g).unwrap();
        let cfg = SolverConfig {
            scheme: Scheme::Etdrk2, dt: 1e-4, t_final: 1e-4 * steps as f64,
            n_cutoff: None, dealias: rule, record_every: 10_000, seed: 0, hs: None,
        };
        let t0 = Instant::now();
        let out = solve(&u0, &Potential::double_well(), &cfg, None).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        println!("{n}^3 {rule}: {} steps in {dt:.2}s -> {:.1} ms/step", out.state.step_count, dt / steps as f64 * 1e3);
    }
}
