// Freeze-the-constants probe: exact frontier values at the acceptance
// seed and trial count.
use swiptlink::config::ConstraintSpec;
use swiptlink::optimizer::TrialEnsemble;
use swiptlink::{SystemConfig64, TxParams64};

fn main() {
    // calibrated midpoint power (computed the same way the CLI helper does)
    let target = 10f64.powf(36.0 / 10.0);
    let sigma_a_u2 = (48.0 - 16.0 + 32.0) / 48.0;
    let c_u2 = 1.0 / 17.0;
    let p_t = target * 64.0 * sigma_a_u2 / (0.5 * 0.25 * c_u2 * 16.0);
    println!("calibrated P_t = {p_t:.6e}");

    let cfg = SystemConfig64::baseline(p_t);
    let loose = ConstraintSpec { mu_u: 0.0, mu_g: 0.0, eps_u: 1.0, eps_g: 1.0 };
    let ensemble = TrialEnsemble::new(&cfg, 500, 42).unwrap();

    println!("--- E_u vs rho (beta_u=0.5, N_u=16 fixed) ---");
    for rho in [0.65, 0.70, 0.75, 0.80] {
        let tx = TxParams64::noma(rho, 0.75, 0.5, 0.85, 16, 32);
        let m = ensemble.evaluate(&tx, &loose).unwrap();
        println!("rho={rho:4.2}  E_u={:9.4}", m.mean_e_u);
    }
    println!("--- frontier candidates at rho=0.75, theta_g=0.75 ---");
    for (beta_g, n_g) in [(0.80,28),(0.85,28),(0.85,32),(0.85,36),(0.90,32),(0.90,36),(0.90,40),(0.95,44),(0.95,48)] {
        let tx = TxParams64::noma(0.75, 0.75, 0.5, beta_g, 16, n_g);
        let m = ensemble.evaluate(&tx, &loose).unwrap();
        println!("beta_g={beta_g:4.2} N_g={n_g:2}  Rs_g={:8.5}  E_g={:8.4}  P_og={:9.3e}", m.mean_rs_g, m.mean_e_g, m.p_o_g);
    }
    println!("--- cross check at rho=0.80 ---");
    for (beta_g, n_g) in [(0.90,36),(0.95,44),(0.95,48)] {
        let tx = TxParams64::noma(0.80, 0.75, 0.5, beta_g, 16, n_g);
        let m = ensemble.evaluate(&tx, &loose).unwrap();
        println!("beta_g={beta_g:4.2} N_g={n_g:2}  Rs_g={:8.5}  E_g={:8.4}", m.mean_rs_g, m.mean_e_g);
    }
    // outage with delta3 = 0.25 at the key theta values
    let mut cfg2 = cfg;
    cfg2.delta1 = 1.0;
    cfg2.delta3 = 0.25;
    let e2 = TrialEnsemble::new(&cfg2, 10, 42).unwrap();
    println!("--- P_o with delta1=1, delta3=0.25, rho=0.75 ---");
    for theta_g in [0.70, 0.75, 0.80] {
        let tx = TxParams64::noma(0.75, theta_g, 0.5, 0.9, 16, 36);
        let m = e2.evaluate(&tx, &loose).unwrap();
        println!("theta_g={theta_g}: P_ou={:9.3e} P_og={:9.3e}", m.p_o_u, m.p_o_g);
    }
}
