use std::time::Instant;
use swiptlink::config::ConstraintSpec;
use swiptlink::optimizer::{grid_search, GridOutcome, GridSpec};
use swiptlink::SystemConfig64;

fn main() {
    let p_t = 2.8876040e6_f64;
    let mut cfg = SystemConfig64::baseline(p_t);
    cfg.delta1 = 1.0;
    cfg.delta3 = 0.25;
    let constraints = ConstraintSpec { mu_u: 74.0, mu_g: 8.6, eps_u: 1e-4, eps_g: 2e-4 };
    let grid: GridSpec<f64> = GridSpec::defaults(&cfg);
    println!("grid points: {}", grid.len());
    let t0 = Instant::now();
    let res = grid_search(&cfg, &grid, &constraints, 500, 42).unwrap();
    println!("search took {:?}; simulated {}/{} points", t0.elapsed(), res.points_simulated, res.all_points.len());
    match &res.outcome {
        GridOutcome::Optimal(p) => {
            println!("ARGMAX rho={} theta_g={} beta_g={} N_g={}", p.tx.rho, p.tx.theta_g, p.tx.beta_g, p.tx.n_g);
            println!("Rs_u={:.4} Rs_g={:.4} E_u={:.2} E_g={:.3} P_ou={:.3e} P_og={:.3e}",
                p.mean_rs_u, p.mean_rs_g, p.mean_e_u, p.mean_e_g, p.p_o_u, p.p_o_g);
        }
        GridOutcome::Infeasible { least_violating, aggregate_violation } => {
            println!("INFEASIBLE (violation {aggregate_violation}); closest: {:?}", least_violating.tx);
        }
    }
    // top-5 feasible by objective for context
    let mut feas: Vec<_> = res.all_points.iter().filter(|p| p.feasible).collect();
    feas.sort_by(|a, b| b.objective.partial_cmp(&a.objective).unwrap());
    for p in feas.iter().take(5) {
        println!("  cand rho={} th={} b={} N={}  obj={:.5} E_g={:.3}", p.tx.rho, p.tx.theta_g, p.tx.beta_g, p.tx.n_g, p.objective, p.mean_e_g);
    }
}
