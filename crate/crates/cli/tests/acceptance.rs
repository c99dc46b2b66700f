//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criterion 5(d)'s `E{E_u} > E{E_g}` clause and criterion 6's secrecy-rate
//! levels are asserted exactly as stated even though the implemented
//! formulas cannot satisfy them at every required point; the optimizer run
//! documents the latter in its deviation report (see the repository README
//! for the full account).

use std::path::Path;

use rayon::prelude::*;

use swiptlink::channel::{dense_freq_matrix, draw_channel_set, trial_seed};
use swiptlink::config::ConstraintSpec;
use swiptlink::linalg::{frobenius, max_offdiag};
use swiptlink::ofdm::OfdmMatrixSet;
use swiptlink::optimizer::{evaluate_point, GridOutcome};
use swiptlink::outage::{outage_g_closed_form, outage_u_closed_form, OutageThresholds};
use swiptlink::precoder::compute_precoder;
use swiptlink::rates::{full_report, noise_profiles, rate_u};
use swiptlink::{SystemConfig64, TxParams64, C};

use swiptlink_cli::config_file::RunConfig;
use swiptlink_cli::run::{
    calibrate_transmit_power, run_optimize, run_outage_check, sweep_rows, ReferenceTargets,
    SNR_WINDOW_DB,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn calibrated_config() -> SystemConfig64 {
    let mut cfg = SystemConfig64::baseline(1.0);
    cfg.p_t = calibrate_transmit_power(&cfg, SNR_WINDOW_DB.0, SNR_WINDOW_DB.1);
    cfg
}

/// Spearman rank correlation; data is continuous so ties are not expected.
fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..xs.len() {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean).powi(2);
        dy += (ry[i] - mean).powi(2);
    }
    num / (dx.sqrt() * dy.sqrt())
}

#[test]
fn criterion_1_null_space_cancellation() {
    let cfg = SystemConfig64::baseline(10.0);
    let matrices = OfdmMatrixSet::build(&cfg).unwrap();
    let worst: (f64, f64) = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let set = draw_channel_set(trial_seed(1001, t), &cfg);
            let pre = compute_precoder(&set.ht, &set.gt, &matrices.phi).unwrap();
            let m = &matrices.phi * (&set.ht + &set.gt);
            let rel = pre.cancellation_residual / frobenius(&m);

            let gram = pre.k.adjoint() * &pre.k;
            let mut ortho: f64 = 0.0;
            for i in 0..16 {
                for j in 0..16 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((gram[(i, j)] - C::new(want, 0.0)).norm());
                }
            }
            (rel, ortho)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    let pass = worst.0 < 1e-9 && worst.1 < 1e-10;
    report(
        "1 null-space cancellation",
        pass,
        &format!(
            "1000 realizations: max relative residual {:.2e}, max |K*K - I| {:.2e}",
            worst.0, worst.1
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_sum_bound_every_trial() {
    let cfg = calibrated_config();
    let tx = TxParams64::noma(0.75, 0.75, 0.5, 0.85, 16, 32);
    let matrices = OfdmMatrixSet::build(&cfg).unwrap();
    let worst_violation: f64 = (0..10_000u64)
        .into_par_iter()
        .map(|t| {
            let set = draw_channel_set(trial_seed(2002, t), &cfg);
            let pre = compute_precoder(&set.ht, &set.gt, &matrices.phi).unwrap();
            let r = full_report(&cfg, &tx, &set, &pre).unwrap();
            r.rs_u + r.rs_g - r.rs_sum_bound
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);

    let pass = worst_violation <= 1e-12;
    report(
        "2 sum secrecy bound",
        pass,
        &format!("10^4 trials: worst (Rs_u + Rs_g) - bound = {worst_violation:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_outage_oracle_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let mut config_text = String::from("[system]\nP_t = 1.0\nL = 32\nM = 32\n[run]\nseed = 3003\n");
    config_text.push_str(&format!("out = {}\n", dir.path().display()));
    let run = RunConfig::from_str(&config_text).unwrap();
    let rows = run_outage_check(&run).unwrap();

    assert_eq!(rows.len(), 40); // 20 thresholds x both discs
    let max_diff = rows.iter().map(|r| r.abs_diff).fold(0.0f64, f64::max);
    let out_of_ci = rows
        .iter()
        .filter(|r| r.abs_diff > r.sigma3 + 5e-4)
        .count();
    // 5e-4 above covers the quadrature's own bias at order 32, which the
    // binomial interval knows nothing about.
    let pass = max_diff < 1e-2 && out_of_ci == 0;
    report(
        "3 outage oracle agreement",
        pass,
        &format!("max |closed - oracle| = {max_diff:.2e}, rows outside 3-sigma band: {out_of_ci}"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_quadrature_convergence() {
    let mut lo = SystemConfig64::baseline(1.0);
    lo.quad_l = 32;
    lo.quad_m = 32;
    let mut hi = lo;
    hi.quad_l = 64;
    hi.quad_m = 64;
    let mut worst: f64 = 0.0;
    for i in 0..25 {
        let theta = 1e-3 * (10f64 / 1e-3).powf(i as f64 / 24.0);
        let th = OutageThresholds {
            v_gu: theta,
            v_uu: 0.0,
            v_gg: theta,
            delta2: 1.0,
        };
        worst = worst.max((outage_u_closed_form(&lo, &th) - outage_u_closed_form(&hi, &th)).abs());
        worst = worst.max((outage_g_closed_form(&lo, &th) - outage_g_closed_form(&hi, &th)).abs());
    }
    let pass = worst < 1e-3;
    report(
        "4 quadrature convergence",
        pass,
        &format!("max |P(64) - P(32)| = {worst:.2e} over 25 thresholds"),
    );
    assert!(pass);
}

fn sweep_config(body: &str) -> RunConfig {
    let p_t = calibrate_transmit_power(
        &SystemConfig64::baseline(1.0),
        SNR_WINDOW_DB.0,
        SNR_WINDOW_DB.1,
    );
    RunConfig::from_str(&format!(
        "[system]\nP_t = {p_t:e}\n[tx]\nrho = 0.75\ntheta_g = 0.75\nbeta_u = 0.5\nbeta_g = 0.5\nN_u = 16\nN_g = 24\n{body}\n[run]\nmode = sweep\ntrials = 500\nseed = 42\n"
    ))
    .unwrap()
}

#[test]
fn criterion_5a_5b_rate_trends_vs_rho_and_theta() {
    let run = sweep_config(
        "[sweep]\nvariable = rho\nvalues = 0.05:0.05:0.95\ncurve_variable = theta_g\ncurve_values = 0.55,0.65,0.75,0.85,0.95",
    );
    let rows = sweep_rows(&run, run.sweep.as_ref().unwrap()).unwrap();

    let curves = [0.55, 0.65, 0.75, 0.85, 0.95];
    let mut min_up: f64 = 1.0; // Rs_u increasing in rho
    let mut min_down: f64 = 1.0; // Rs_g decreasing in rho (negated correlation)
    for &c in &curves {
        let per_curve: Vec<&_> = rows.iter().filter(|r| r.curve == c).collect();
        let xs: Vec<f64> = per_curve.iter().map(|r| r.swept).collect();
        let rs_u: Vec<f64> = per_curve.iter().map(|r| r.metrics.mean_rs_u).collect();
        let rs_g: Vec<f64> = per_curve.iter().map(|r| r.metrics.mean_rs_g).collect();
        min_up = min_up.min(spearman(&xs, &rs_u));
        min_down = min_down.min(-spearman(&xs, &rs_g));
    }

    // Cross-curve direction at each rho: Rs_u decreasing / Rs_g increasing
    // in theta_g.
    let mut min_theta_down: f64 = 1.0;
    let mut min_theta_up: f64 = 1.0;
    for i in 0..19 {
        let rho = 0.05 * (i + 1) as f64;
        let at_rho: Vec<&_> = rows
            .iter()
            .filter(|r| (r.swept - rho).abs() < 1e-9)
            .collect();
        let xs: Vec<f64> = at_rho.iter().map(|r| r.curve).collect();
        let rs_u: Vec<f64> = at_rho.iter().map(|r| r.metrics.mean_rs_u).collect();
        let rs_g: Vec<f64> = at_rho.iter().map(|r| r.metrics.mean_rs_g).collect();
        min_theta_down = min_theta_down.min(-spearman(&xs, &rs_u));
        min_theta_up = min_theta_up.min(spearman(&xs, &rs_g));
    }

    let pass_a = min_up > 0.95 && min_theta_down > 0.95;
    report(
        "5a near-user rate trends",
        pass_a,
        &format!("Spearman(rho, Rs_u) >= {min_up:.3}, Spearman(theta_g, Rs_u) <= {:.3}", -min_theta_down),
    );
    let pass_b = min_down > 0.95 && min_theta_up > 0.95;
    report(
        "5b far-user rate trends",
        pass_b,
        &format!("Spearman(rho, Rs_g) <= {:.3}, Spearman(theta_g, Rs_g) >= {min_theta_up:.3}", -min_down),
    );
    assert!(pass_a && pass_b);
}

#[test]
fn criterion_5c_far_rate_increasing_in_beta() {
    let run = sweep_config(
        "[sweep]\nvariable = beta_g\nvalues = 0.05:0.05:0.95\ncurve_variable = rho\ncurve_values = 0.55,0.65,0.75,0.85,0.95",
    );
    let rows = sweep_rows(&run, run.sweep.as_ref().unwrap()).unwrap();
    let mut min_corr: f64 = 1.0;
    for &c in &[0.55, 0.65, 0.75, 0.85, 0.95] {
        let per_curve: Vec<&_> = rows.iter().filter(|r| r.curve == c).collect();
        let xs: Vec<f64> = per_curve.iter().map(|r| r.swept).collect();
        let rs_g: Vec<f64> = per_curve.iter().map(|r| r.metrics.mean_rs_g).collect();
        min_corr = min_corr.min(spearman(&xs, &rs_g));
    }
    let pass = min_corr > 0.95;
    report(
        "5c far-user rate vs beta_g",
        pass,
        &format!("min Spearman(beta_g, Rs_g) = {min_corr:.3}"),
    );
    assert!(pass);
}

#[test]
fn criterion_5d_energy_trends_vs_n_g() {
    let run = sweep_config(
        "[sweep]\nvariable = N_g\nvalues = 0:4:48\ncurve_variable = rho\ncurve_values = 0.55,0.65,0.75,0.85,0.95",
    );
    let rows = sweep_rows(&run, run.sweep.as_ref().unwrap()).unwrap();

    let mut min_corr: f64 = 1.0;
    for &c in &[0.55, 0.65, 0.75, 0.85, 0.95] {
        let per_curve: Vec<&_> = rows.iter().filter(|r| r.curve == c).collect();
        let xs: Vec<f64> = per_curve.iter().map(|r| r.swept).collect();
        let e_g: Vec<f64> = per_curve.iter().map(|r| r.metrics.mean_e_g).collect();
        min_corr = min_corr.min(spearman(&xs, &e_g));
    }
    let increasing = min_corr > 0.95;
    report(
        "5d far-user energy increasing in N_g",
        increasing,
        &format!("min Spearman(N_g, E_g) = {min_corr:.3}"),
    );

    let violations: Vec<String> = rows
        .iter()
        .filter(|r| r.metrics.mean_e_u <= r.metrics.mean_e_g)
        .map(|r| {
            format!(
                "rho={} N_g={}: E_u={:.2} <= E_g={:.2}",
                r.curve, r.swept, r.metrics.mean_e_u, r.metrics.mean_e_g
            )
        })
        .collect();
    let dominance = violations.is_empty();
    report(
        "5d near-user energy dominance",
        dominance,
        &if dominance {
            "E_u > E_g at every sweep point".to_string()
        } else {
            format!(
                "{} of {} points violate (quadratic-in-N split-energy formula; see ledger): {}",
                violations.len(),
                rows.len(),
                violations.join("; ")
            )
        },
    );
    assert!(increasing);
    assert!(
        dominance,
        "E_u > E_g does not hold throughout the N_g sweep; the displayed \
         split-energy formula grows quadratically in N_g and overtakes the \
         near user at the N_g = 48 corner (documented honest failure)"
    );
}

#[test]
fn criterion_5e_certain_outage_at_extreme_split() {
    // Spec-default design rates (delta1 = 1, delta3 = 0.5) put theta_g = 0.95
    // deep inside the SIC branch where P_o,u = 1.
    let cfg = calibrated_config();
    let tx = TxParams64::noma(0.75, 0.95, 0.5, 0.5, 16, 24);
    let loose = ConstraintSpec {
        mu_u: 0.0,
        mu_g: 0.0,
        eps_u: 1.0,
        eps_g: 1.0,
    };
    let metrics = evaluate_point(&cfg, &tx, &loose, 1, 5005).unwrap();
    let pass = metrics.p_o_u == 1.0;
    report(
        "5e certain outage at theta_g = 0.95",
        pass,
        &format!("P_o_u = {}", metrics.p_o_u),
    );
    assert!(pass);
}

#[test]
fn criterion_6_optimum_reproduction() {
    let config_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/optimize.conf");
    let mut run = RunConfig::from_file(&config_path).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run.out_dir = dir.path().to_path_buf();

    let output = run_optimize(&run, Some(ReferenceTargets::baseline())).unwrap();
    let best = *output.result.best();
    let feasible = matches!(output.result.outcome, GridOutcome::Optimal(_));
    let steps = output.steps_from_reference.unwrap();
    let argmax_ok = feasible && steps.iter().all(|&s| s <= 1);

    // The secrecy-rate levels: within +-25% of the published pair, or a
    // documented deviation report (the criterion's stated fallback).
    let report_path = dir.path().join("deviation_report.txt");
    let reported = report_path.exists()
        && std::fs::read_to_string(&report_path)
            .unwrap()
            .contains("calibrated");
    let rates_ok = output.rates_in_range;

    let pass = argmax_ok && (rates_ok || reported);
    report(
        "6 optimum reproduction",
        pass,
        &format!(
            "argmax (rho={} theta_g={} beta_g={} N_g={}) steps from reference {:?}; \
             Rs_u={:.3} Rs_g={:.3}; rate levels {} ",
            best.tx.rho,
            best.tx.theta_g,
            best.tx.beta_g,
            best.tx.n_g,
            steps,
            best.mean_rs_u,
            best.mean_rs_g,
            if rates_ok {
                "within tolerance".to_string()
            } else {
                format!("deviation report emitted: {}", report_path.display())
            }
        ),
    );
    assert!(
        argmax_ok,
        "grid argmax must land within one grid step of the reference point"
    );
    assert!(
        rates_ok || reported,
        "rate levels out of tolerance without a deviation report"
    );
    // The near-user level is reproducible and must actually hold.
    assert!(
        (best.mean_rs_u - 4.0).abs() <= 0.25 * 4.0,
        "mean_Rs_u {} outside 4 +- 25%",
        best.mean_rs_u
    );
}

#[test]
fn criterion_7_byte_identical_outputs() {
    let base = "[system]\nP_t = 2.8876040e6\n[tx]\nrho = 0.75\ntheta_g = 0.75\nbeta_u = 0.5\nbeta_g = 0.5\nN_u = 16\nN_g = 24\n[sweep]\nvariable = rho\nvalues = 0.25,0.5,0.75\ncurve_variable = theta_g\ncurve_values = 0.65,0.75\n[run]\nmode = sweep\ntrials = 24\nseed = 77\n";
    let run_once = |threads: usize| -> Vec<u8> {
        let dir = tempfile::tempdir().unwrap();
        let mut run = RunConfig::from_str(base).unwrap();
        run.out_dir = dir.path().to_path_buf();
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| swiptlink_cli::run::run_sweep(&run).unwrap());
        std::fs::read(dir.path().join("sweep.csv")).unwrap()
    };
    let a = run_once(1);
    let b = run_once(4);
    let c = run_once(2);
    let pass = a == b && b == c;
    report(
        "7 determinism across workers",
        pass,
        &format!("sweep.csv identical over 1/2/4 threads ({} bytes)", a.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_8_diagonality_and_rate_oracle() {
    let cfg = calibrated_config();
    let matrices = OfdmMatrixSet::build(&cfg).unwrap();
    let mut tx = TxParams64::noma(0.75, 0.75, 0.5, 0.85, 16, 32);
    tx.n_u = 0;

    let mut worst_offdiag: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for t in 0..100 {
        let set = draw_channel_set(trial_seed(8008, t), &cfg);
        let dense = dense_freq_matrix(&matrices, &set.ht);
        worst_offdiag = worst_offdiag.max(max_offdiag(&dense));

        let profile = noise_profiles(&cfg, &tx, &set).unwrap();
        let got = rate_u(&cfg, &tx, &set, &profile).unwrap();
        let c_u2 = set.c_u * set.c_u;
        let s = tx.rho * tx.theta_u * cfg.p_t / 64.0;
        let oracle: f64 = set
            .h_diag
            .iter()
            .map(|h| (1.0 + s * h.norm_sqr() * c_u2 / cfg.sigma2).log2())
            .sum::<f64>()
            / 64.0;
        worst_rel = worst_rel.max(((got - oracle) / oracle).abs());
    }
    let pass = worst_offdiag < 1e-10 && worst_rel < 1e-9;
    report(
        "8 diagonality and scalar oracle",
        pass,
        &format!(
            "max off-diagonal {worst_offdiag:.2e}, max relative rate gap {worst_rel:.2e} over 100 channels"
        ),
    );
    assert!(pass);
}
