use ch3d::diagnostics::continuous_dependence;
use ch3d::flow::{Scheme, SolverConfig};
use ch3d::grid::Grid;
use ch3d::ops::DealiasRule;
use ch3d::potential::Potential;
use ch3d::init::InitialData;
use std::sync::Arc;

fn main() {
    for &(n, amp, t_final, dt) in &[
        (8usize, 0.05, 0.3, 1e-3), (8, 0.1, 0.4, 1e-3), (8, 0.15, 0.6, 1e-3), (8, 0.3, 0.3, 1e-3),
        (16, 0.1, 0.5, 2e-4), (16, 0.05, 0.5, 2e-4), (16, 0.15, 0.5, 2e-4),
    ] {
        let g = Arc::new(Grid::new(n, 2.0 * std::f64::consts::PI).unwrap());
        let u0 = InitialData::Random { mean: 0.0, amplitude: amp, seed: 32, smooth_sigma: None }.build(&g).unwrap();
        let cfg = SolverConfig {
            scheme: Scheme::Etdrk2, dt, t_final,
            n_cutoff: None, dealias: DealiasRule::TwoThirds,
            record_every: (0.01 / dt) as usize, seed: 0, hs: None,
        };
        let r = continuous_dependence(&u0, 1e-6, &Potential::double_well(), &cfg, 79).unwrap();
        let d0 = r.diff_l2[0];
        let dl = *r.diff_l2.last().unwrap();
        // margin: min over validation window of envelope/actual
        let margin = r.times.iter().zip(&r.diff_l2)
            .filter(|(t, _)| **t >= t_final / 2.0)
            .map(|(t, d)| d0 * (r.fitted_c * t).exp() * 1.1 / d)
            .fold(f64::INFINITY, f64::min);
        println!("n={n} amp={amp} T={t_final}: C={:.3} bound_ok={} growth={:.2} margin={margin:.3}", r.fitted_c, r.bound_ok, dl/d0);
    }
}
