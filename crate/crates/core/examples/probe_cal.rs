// Calibration probe: ensemble-mean rate components across transmit power.
use swiptlink::channel::{draw_channel_set, trial_seed};
use swiptlink::ofdm::OfdmMatrixSet;
use swiptlink::precoder::compute_precoder;
use swiptlink::rates::full_report;
use swiptlink::{SystemConfig64, TxParams64};

fn main() {
    let tx = TxParams64::noma(0.75, 0.75, 0.5, 0.85, 16, 32);
    let trials = 200;
    for p_t in [3e4, 1e5, 3e5, 1e6, 2.89e6, 1e7, 3e7] {
        let cfg = SystemConfig64::baseline(p_t);
        let matrices = OfdmMatrixSet::build(&cfg).unwrap();
        let mut acc = [0.0f64; 8];
        for t in 0..trials {
            let set = draw_channel_set(trial_seed(7, t), &cfg);
            let pre = compute_precoder(&set.ht, &set.gt, &matrices.phi).unwrap();
            let r = full_report(&cfg, &tx, &set, &pre).unwrap();
            for (a, v) in acc.iter_mut().zip([r.r_u, r.r_g, r.r_e_u, r.r_e_g, r.r_e_joint, r.rs_u, r.rs_g, r.rs_sum_bound]) {
                *a += v;
            }
        }
        for a in acc.iter_mut() { *a /= trials as f64; }
        println!("P_t={p_t:9.2e}  R_u={:6.3} R_g={:6.3} REu={:6.3} REg={:6.3} RE={:6.3} | Rs_u={:6.3} Rs_g={:6.3} bound={:6.3}",
            acc[0], acc[1], acc[2], acc[3], acc[4], acc[5], acc[6], acc[7]);
    }
}
