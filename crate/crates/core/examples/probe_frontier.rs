// Which (beta_g, N_g) wins the objective along the far-user energy frontier,
// and how Rs_g moves with rho: guides the shipped constraint constants.
use swiptlink::config::ConstraintSpec;
use swiptlink::optimizer::TrialEnsemble;
use swiptlink::{SystemConfig64, TxParams64};

fn main() {
    let cfg = SystemConfig64::baseline(2.89e6);
    let loose = ConstraintSpec { mu_u: 0.0, mu_g: 0.0, eps_u: 1.0, eps_g: 1.0 };
    let ensemble = TrialEnsemble::new(&cfg, 300, 42).unwrap();

    println!("--- (beta_g, N_g) at rho=0.75, theta_g=0.75 ---");
    for beta_g in [0.80, 0.85, 0.90, 0.95] {
        for n_g in [24, 28, 32, 36, 40, 44, 48] {
            let tx = TxParams64::noma(0.75, 0.75, 0.5, beta_g, 16, n_g);
            let m = ensemble.evaluate(&tx, &loose).unwrap();
            println!("beta_g={beta_g:4.2} N_g={n_g:2}  Rs_g={:7.4}  E_g={:7.3}  Rs_u={:6.3}", m.mean_rs_g, m.mean_e_g, m.mean_rs_u);
        }
    }
    println!("--- rho at theta_g=0.75, beta_g=0.85, N_g=32 ---");
    for rho in [0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85] {
        let tx = TxParams64::noma(rho, 0.75, 0.5, 0.85, 16, 32);
        let m = ensemble.evaluate(&tx, &loose).unwrap();
        println!("rho={rho:4.2}  Rs_g={:7.4}  E_g={:7.3}  E_u={:7.2}  Rs_u={:6.3}", m.mean_rs_g, m.mean_e_g, m.mean_e_u, m.mean_rs_u);
    }
    println!("--- theta_g at rho=0.75, beta_g=0.85, N_g=32 ---");
    for theta_g in [0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95] {
        let tx = TxParams64::noma(0.75, theta_g, 0.5, 0.85, 16, 32);
        let m = ensemble.evaluate(&tx, &loose).unwrap();
        println!("theta_g={theta_g:4.2}  Rs_g={:7.4}  Rs_u={:6.3}  P_ou|P_og={:9.2e} {:9.2e}", m.mean_rs_g, m.mean_rs_u, m.p_o_u, m.p_o_g);
    }
}
