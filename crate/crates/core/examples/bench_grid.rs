// Rough throughput probe for the grid search hot path.
use std::time::Instant;
use swiptlink::config::ConstraintSpec;
use swiptlink::optimizer::{grid_search, GridSpec, TrialEnsemble};
use swiptlink::{GridSpec64, SystemConfig64, TxParams64};

fn main() {
    let cfg = SystemConfig64::baseline(2.89e6);
    let loose = ConstraintSpec { mu_u: 0.0, mu_g: 0.0, eps_u: 1.0, eps_g: 1.0 };

    let t0 = Instant::now();
    let ensemble = TrialEnsemble::new(&cfg, 500, 42).unwrap();
    println!("ensemble build (500 trials): {:?}", t0.elapsed());

    let tx = TxParams64::noma(0.75, 0.75, 0.5, 0.85, 16, 32);
    let t1 = Instant::now();
    let m = ensemble.evaluate(&tx, &loose).unwrap();
    println!("one full point (500 trials): {:?}  rs_u={:.3} rs_g={:.3} e_u={:.3} e_g={:.3}",
        t1.elapsed(), m.mean_rs_u, m.mean_rs_g, m.mean_e_u, m.mean_e_g);

    // Small grid slice to extrapolate: 2 units x (19 beta_g x 13 n_g)
    let grid: GridSpec64 = GridSpec {
        rho: vec![0.7, 0.75],
        theta_g: vec![0.75],
        beta_u: vec![0.5],
        n_u: vec![16],
        beta_g: (1..=19).map(|i| i as f64 * 0.05).collect(),
        n_g: (0..=48).step_by(4).collect(),
        n_cp: vec![16],
    };
    let t2 = Instant::now();
    let res = grid_search(&cfg, &grid, &loose, 500, 42).unwrap();
    let dt = t2.elapsed();
    let points = res.all_points.len();
    println!("grid slice: {points} points in {dt:?} -> {:?}/point", dt / points as u32);
    let full = 19.0 * 9.0 * 19.0 * 13.0;
    println!("extrapolated full default grid (no pruning): {:.1} min",
        dt.as_secs_f64() / points as f64 * full / 60.0);
}
