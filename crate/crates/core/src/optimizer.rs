//! Constrained max-min grid search over the transmission parameters.
//!
//! The objective is `min(E{Rs_u}, E{Rs_g})`, maximized subject to minimum
//! average harvested energy and maximum outage probability at both users.
//! Expectations are ensemble averages over seeded Monte Carlo channel
//! realizations; the same realizations are shared by every grid point
//! (common random numbers), which is what makes the search cacheable.
//!
//! Evaluation order, per-trial seeds, and fixed-order reductions make the
//! result bit-identical for a given `(grid, seed, trials)` regardless of the
//! number of worker threads.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use crate::channel::{draw_channel_set, redraw_seed};
use crate::config::{validate, ConstraintSpec, SystemConfig, TxParams};
use crate::energy::{energy_from_traces, EnergyTraces};
use crate::ofdm::OfdmMatrixSet;
use crate::outage::{outage_g_closed_form, outage_u_closed_form, thresholds};
use crate::precoder::compute_precoder;
use crate::rates::{secrecy_rates, LinkCache, NoiseProfile, RateScratch};
use crate::{Error, Scalar};

/// Redraw attempts per trial before giving up on a degenerate channel.
const MAX_REDRAWS: u64 = 10;

/// Default Monte Carlo size per grid point.
pub const DEFAULT_TRIALS: u64 = 500;

/// Per-variable value lists defining the search grid.
///
/// Normalization drops NOMA split values that cannot satisfy
/// `theta_u < theta_g` (i.e. `theta_g <= 0.5`); everything else must already
/// satisfy its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    pub rho: Vec<T>,
    pub theta_g: Vec<T>,
    pub beta_u: Vec<T>,
    pub beta_g: Vec<T>,
    pub n_u: Vec<usize>,
    pub n_g: Vec<usize>,
    pub n_cp: Vec<usize>,
}

fn percent_grid<T: Scalar>() -> Vec<T> {
    (1..=19).map(|i| T::of(i as f64 * 0.05)).collect()
}

impl<T: Scalar> GridSpec<T> {
    /// The default search grid: `rho`, `theta_g`, `beta_g` over
    /// `{0.05, 0.10, …, 0.95}`, `N_g` over `{0, 4, …, N_s}`, with `N_u`,
    /// `beta_u` and `N_cp` pinned to the reference operating point.
    pub fn defaults(config: &SystemConfig<T>) -> Self {
        GridSpec {
            rho: percent_grid(),
            theta_g: percent_grid(),
            beta_u: vec![T::of(0.5)],
            beta_g: percent_grid(),
            n_u: vec![16],
            n_g: (0..=config.n_s()).step_by(4).collect(),
            n_cp: vec![config.n_cp],
        }
    }

    /// Validates the grid against the config and drops `theta_g` values that
    /// cannot satisfy `theta_u < theta_g`.
    pub fn normalized(mut self, config: &SystemConfig<T>) -> Result<Self, Error> {
        let half = T::of(0.5);
        self.theta_g.retain(|&v| v > half);
        let mut problems = Vec::new();
        let unit = |v: &T| *v >= T::zero() && *v <= T::one();
        if !self.rho.iter().all(unit) {
            problems.push("rho grid values must lie in [0, 1]".to_string());
        }
        if !self.theta_g.iter().all(unit) {
            problems.push("theta_g grid values must lie in [0, 1]".to_string());
        }
        if !self.beta_u.iter().all(unit) || !self.beta_g.iter().all(unit) {
            problems.push("beta grid values must lie in [0, 1]".to_string());
        }
        for &n_cp in &self.n_cp {
            if n_cp < config.num_taps {
                problems.push(format!(
                    "grid N_cp = {n_cp} is below num_taps = {}",
                    config.num_taps
                ));
            }
            if n_cp * 2 > config.n_t {
                problems.push(format!("grid N_cp = {n_cp} exceeds N_s"));
            }
            let n_s = config.n_t.saturating_sub(n_cp);
            if self.n_u.iter().chain(&self.n_g).any(|&n| n > n_s) {
                problems.push(format!(
                    "split-sample grid exceeds N_s = {n_s} at N_cp = {n_cp}"
                ));
            }
        }
        for (name, list_empty) in [
            ("rho", self.rho.is_empty()),
            ("theta_g", self.theta_g.is_empty()),
            ("beta_u", self.beta_u.is_empty()),
            ("beta_g", self.beta_g.is_empty()),
            ("N_u", self.n_u.is_empty()),
            ("N_g", self.n_g.is_empty()),
            ("N_cp", self.n_cp.is_empty()),
        ] {
            if list_empty {
                problems.push(format!("{name} grid is empty"));
            }
        }
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(problems))
        }
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.n_cp.len()
            * self.rho.len()
            * self.theta_g.len()
            * self.beta_u.len()
            * self.n_u.len()
            * self.beta_g.len()
            * self.n_g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points in the canonical evaluation order.
    pub fn points(&self, config: &SystemConfig<T>) -> Vec<TxParams<T>> {
        let mut out = Vec::with_capacity(self.len());
        for &n_cp in &self.n_cp {
            for &rho in &self.rho {
                for &theta_g in &self.theta_g {
                    for &beta_u in &self.beta_u {
                        for &n_u in &self.n_u {
                            for &beta_g in &self.beta_g {
                                for &n_g in &self.n_g {
                                    let mut tx =
                                        TxParams::noma(rho, theta_g, beta_u, beta_g, n_u, n_g);
                                    if n_cp != config.n_cp {
                                        tx.n_cp_override = Some(n_cp);
                                    }
                                    out.push(tx);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Ensemble metrics of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetrics<T> {
    pub tx: TxParams<T>,
    pub mean_rs_u: T,
    pub mean_rs_g: T,
    pub mean_e_u: T,
    pub mean_e_g: T,
    pub mean_sum_bound: T,
    /// Closed-form outage probabilities (channel independent).
    pub p_o_u: T,
    pub p_o_g: T,
    /// `min(mean_rs_u, mean_rs_g)`.
    pub objective: T,
    pub feasible: bool,
    /// Monte Carlo trials behind the means; zero when the point was ruled
    /// out by the closed-form outage check before simulation.
    pub trials: u64,
}

impl<T: Scalar> PointMetrics<T> {
    /// Total constraint violation, for diagnostics when nothing is feasible.
    /// Energy shortfalls are relative to their targets, outage excesses are
    /// absolute.
    pub fn aggregate_violation(&self, constraints: &ConstraintSpec<T>) -> T {
        let zero = T::zero();
        let rel = |target: T, got: T| {
            if target > zero {
                ((target - got) / target).max(zero)
            } else {
                zero
            }
        };
        rel(constraints.mu_u, self.mean_e_u)
            + rel(constraints.mu_g, self.mean_e_g)
            + (self.p_o_u - constraints.eps_u).max(zero)
            + (self.p_o_g - constraints.eps_g).max(zero)
    }
}

/// Outcome of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub enum GridOutcome<T> {
    /// Feasible argmax of the max-min objective.
    Optimal(PointMetrics<T>),
    /// No feasible point; carries the least-violating point for diagnostics.
    Infeasible {
        least_violating: PointMetrics<T>,
        aggregate_violation: T,
    },
}

/// Full grid-search result.
#[derive(Debug, Clone)]
pub struct GridResult<T> {
    pub outcome: GridOutcome<T>,
    /// Metrics for every grid point, in canonical grid order.
    pub all_points: Vec<PointMetrics<T>>,
    pub trials_per_point: u64,
    pub master_seed: u64,
    /// Points whose Monte Carlo actually ran (outage-feasible points).
    pub points_simulated: u64,
    pub wall_ms: u128,
}

impl<T: Scalar> GridResult<T> {
    pub fn best(&self) -> &PointMetrics<T> {
        match &self.outcome {
            GridOutcome::Optimal(p) => p,
            GridOutcome::Infeasible {
                least_violating, ..
            } => least_violating,
        }
    }
}

/// Per-trial cached quantities: everything about a realization that the
/// per-point evaluation needs.
#[derive(Debug, Clone)]
struct TrialData<T: Scalar> {
    link: LinkCache<T>,
    energy: EnergyTraces<T>,
}

/// A fixed set of seeded channel realizations with their precoders and
/// caches, shared by every point evaluation.
#[derive(Debug, Clone)]
pub struct TrialEnsemble<T: Scalar> {
    config: SystemConfig<T>,
    trials: Vec<TrialData<T>>,
}

impl<T: Scalar> TrialEnsemble<T> {
    /// Draws `n_trials` realizations with seeds derived from `master_seed`,
    /// redrawing degenerate channels up to [`MAX_REDRAWS`] times each.
    pub fn new(config: &SystemConfig<T>, n_trials: u64, master_seed: u64) -> Result<Self, Error> {
        let matrices = OfdmMatrixSet::build(config)?;
        let trials: Result<Vec<TrialData<T>>, Error> = (0..n_trials)
            .into_par_iter()
            .map(|t| {
                for attempt in 0..MAX_REDRAWS {
                    let seed = redraw_seed(master_seed, t, attempt);
                    let channels = draw_channel_set(seed, config);
                    match compute_precoder(&channels.ht, &channels.gt, &matrices.phi) {
                        Ok(precoder) => {
                            return Ok(TrialData {
                                link: LinkCache::new(config, &channels, &precoder),
                                energy: EnergyTraces::new(config, &channels, &precoder),
                            })
                        }
                        Err(Error::DegenerateChannel { .. }) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::TrialExhausted {
                    trial: t,
                    attempts: MAX_REDRAWS as u32,
                })
            })
            .collect();
        Ok(Self {
            config: *config,
            trials: trials?,
        })
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn config(&self) -> &SystemConfig<T> {
        &self.config
    }

    /// Per-trial eavesdropper rate triples for one `(rho, theta)` setting.
    fn eve_per_trial(
        &self,
        tx: &TxParams<T>,
        scratch: &mut RateScratch<T>,
    ) -> Result<Vec<(T, T, T)>, Error> {
        self.trials
            .iter()
            .map(|tr| tr.link.eve_rates(&self.config, tx, scratch))
            .collect()
    }

    /// Per-trial near-user rates; `lambda_u` is channel independent, so it
    /// is built once by the caller.
    fn rate_u_per_trial(
        &self,
        tx: &TxParams<T>,
        lambda_u: &[T],
        scratch: &mut RateScratch<T>,
    ) -> Result<Vec<T>, Error> {
        let profile_stub = NoiseProfile {
            lambda_u: lambda_u.to_vec(),
            lambda_g: Vec::new(),
            sigma_a_u2: T::zero(),
            sigma_a_g2: T::zero(),
        };
        self.trials
            .iter()
            .map(|tr| tr.link.rate_u(&self.config, tx, &profile_stub, scratch))
            .collect()
    }

    /// Diagonal of `Λ_u`; constant across trials because the path-loss
    /// scalar is deterministic.
    fn lambda_u_diag(&self, tx: &TxParams<T>) -> Vec<T> {
        let c_u = self.config.c_u();
        let base = self.config.sigma2 / (c_u * c_u);
        (0..self.config.n_s())
            .map(|k| if k < tx.n_u { base / tx.beta_u } else { base })
            .collect()
    }

    /// Closed-form outage pair for a point (channel independent).
    pub fn outage_pair(&self, tx: &TxParams<T>) -> Result<(T, T), Error> {
        let profile = NoiseProfile {
            lambda_u: vec![],
            lambda_g: vec![],
            sigma_a_u2: crate::rates::average_noise_variance(
                self.config.sigma2,
                self.config.n_s(),
                tx.n_u,
                tx.beta_u,
            )?,
            sigma_a_g2: crate::rates::average_noise_variance(
                self.config.sigma2,
                self.config.n_s(),
                tx.n_g,
                tx.beta_g,
            )?,
        };
        match thresholds(&self.config, tx, &profile) {
            Ok(th) => Ok((
                outage_u_closed_form(&self.config, &th),
                outage_g_closed_form(&self.config, &th),
            )),
            // An undefined SIC threshold is certain outage.
            Err(Error::InfeasibleThreshold { .. }) => Ok((T::one(), T::one())),
            Err(e) => Err(e),
        }
    }

    /// Full metrics for one point given precomputed per-trial eavesdropper
    /// and near-user rates. Accumulation runs in trial order so the result
    /// does not depend on scheduling.
    fn metrics_from_parts(
        &self,
        tx: &TxParams<T>,
        constraints: &ConstraintSpec<T>,
        p_o_u: T,
        p_o_g: T,
        eve: &[(T, T, T)],
        r_u: &[T],
        scratch: &mut RateScratch<T>,
    ) -> Result<PointMetrics<T>, Error> {
        let cfg = &self.config;
        let n_t = T::from_usize(cfg.n_t).unwrap();
        let n_trials = T::from_usize(self.trials.len()).unwrap();
        let interference = tx.rho * tx.theta_u * cfg.p_t / n_t;
        let base_g = cfg.sigma2 / (cfg.c_g() * cfg.c_g());

        let mut lambda_g = vec![T::zero(); cfg.n_s()];
        let mut sum_rs_u = T::zero();
        let mut sum_rs_g = T::zero();
        let mut sum_e_u = T::zero();
        let mut sum_e_g = T::zero();
        let mut sum_bound = T::zero();

        for (t, trial) in self.trials.iter().enumerate() {
            for (k, l) in lambda_g.iter_mut().enumerate() {
                let noise = base_g + interference * trial.link.g2[k];
                *l = if k < tx.n_g { noise / tx.beta_g } else { noise };
            }
            let profile_stub = NoiseProfile {
                lambda_u: Vec::new(),
                lambda_g: std::mem::take(&mut lambda_g),
                sigma_a_u2: T::zero(),
                sigma_a_g2: T::zero(),
            };
            let r_g = trial.link.rate_g(cfg, tx, &profile_stub, scratch)?;
            lambda_g = profile_stub.lambda_g;

            let (r_e_u, r_e_g, r_e_joint) = eve[t];
            let (rs_u, rs_g, bound) = secrecy_rates(r_u[t], r_g, r_e_u, r_e_g, r_e_joint);
            let energy =
                energy_from_traces(cfg, tx, &trial.energy, trial.link.c_u, trial.link.c_g);

            sum_rs_u += rs_u;
            sum_rs_g += rs_g;
            sum_bound += bound;
            sum_e_u += energy.e_u;
            sum_e_g += energy.e_g;
        }

        let mean_rs_u = sum_rs_u / n_trials;
        let mean_rs_g = sum_rs_g / n_trials;
        let mean_e_u = sum_e_u / n_trials;
        let mean_e_g = sum_e_g / n_trials;
        let feasible = mean_e_u >= constraints.mu_u
            && mean_e_g >= constraints.mu_g
            && p_o_u <= constraints.eps_u
            && p_o_g <= constraints.eps_g;
        Ok(PointMetrics {
            tx: *tx,
            mean_rs_u,
            mean_rs_g,
            mean_e_u,
            mean_e_g,
            mean_sum_bound: sum_bound / n_trials,
            p_o_u,
            p_o_g,
            objective: mean_rs_u.min(mean_rs_g),
            feasible,
            trials: self.trials.len() as u64,
        })
    }

    /// Evaluates one point completely (no outage pruning).
    pub fn evaluate(
        &self,
        tx: &TxParams<T>,
        constraints: &ConstraintSpec<T>,
    ) -> Result<PointMetrics<T>, Error> {
        let mut scratch = RateScratch::new(self.config.n_s());
        let (p_o_u, p_o_g) = self.outage_pair(tx)?;
        let eve = self.eve_per_trial(tx, &mut scratch)?;
        let lambda_u = self.lambda_u_diag(tx);
        let r_u = self.rate_u_per_trial(tx, &lambda_u, &mut scratch)?;
        self.metrics_from_parts(tx, constraints, p_o_u, p_o_g, &eve, &r_u, &mut scratch)
    }
}

/// Placeholder metrics for a point ruled out by the closed-form outage check.
fn pruned_metrics<T: Scalar>(tx: &TxParams<T>, p_o_u: T, p_o_g: T) -> PointMetrics<T> {
    PointMetrics {
        tx: *tx,
        mean_rs_u: T::zero(),
        mean_rs_g: T::zero(),
        mean_e_u: T::zero(),
        mean_e_g: T::zero(),
        mean_sum_bound: T::zero(),
        p_o_u,
        p_o_g,
        objective: T::zero(),
        feasible: false,
        trials: 0,
    }
}

/// Evaluates a single operating point with a fresh ensemble.
pub fn evaluate_point<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    constraints: &ConstraintSpec<T>,
    n_trials: u64,
    master_seed: u64,
) -> Result<PointMetrics<T>, Error> {
    let report = validate(config, tx);
    if !report.pass() {
        return Err(Error::InvalidParams(report.violations));
    }
    let cfg = tx.effective_config(config);
    let ensemble = TrialEnsemble::new(&cfg, n_trials, master_seed)?;
    ensemble.evaluate(tx, constraints)
}

/// Total order on transmission parameters for deterministic tie-breaking.
fn cmp_tx<T: Scalar>(a: &TxParams<T>, b: &TxParams<T>) -> Ordering {
    a.rho
        .partial_cmp(&b.rho)
        .unwrap()
        .then(a.theta_g.partial_cmp(&b.theta_g).unwrap())
        .then(a.beta_u.partial_cmp(&b.beta_u).unwrap())
        .then(a.beta_g.partial_cmp(&b.beta_g).unwrap())
        .then(a.n_u.cmp(&b.n_u))
        .then(a.n_g.cmp(&b.n_g))
        .then(a.n_cp_override.unwrap_or(0).cmp(&b.n_cp_override.unwrap_or(0)))
}

/// `true` when `a` beats `b`: higher objective, then higher far-user energy,
/// then lexicographically smaller parameters.
fn better<T: Scalar>(a: &PointMetrics<T>, b: &PointMetrics<T>) -> bool {
    match a
        .objective
        .partial_cmp(&b.objective)
        .expect("objectives are finite")
    {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match a.mean_e_g.partial_cmp(&b.mean_e_g).unwrap() {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => cmp_tx(&a.tx, &b.tx) == Ordering::Less,
        },
    }
}

/// Exhaustive search over the grid.
///
/// Points whose closed-form outage already violates the constraints are not
/// simulated (the base station only computes rates for feasible candidate
/// sets); their metrics carry the outage values with `trials = 0`. If no
/// point is feasible, the outcome is [`GridOutcome::Infeasible`] with the
/// least-violating point (preferring points that were simulated).
pub fn grid_search<T: Scalar>(
    config: &SystemConfig<T>,
    grid: &GridSpec<T>,
    constraints: &ConstraintSpec<T>,
    n_trials: u64,
    master_seed: u64,
) -> Result<GridResult<T>, Error> {
    let started = Instant::now();
    let grid = grid.clone().normalized(config)?;
    let mut all_points: Vec<PointMetrics<T>> = Vec::with_capacity(grid.len());

    for &n_cp in &grid.n_cp {
        let cfg = config.with_n_cp(n_cp);
        let ensemble = TrialEnsemble::new(&cfg, n_trials, master_seed)?;

        // One work unit per (rho, theta_g): the eavesdropper rates are
        // shared by the whole unit, the near-user rates by each
        // (beta_u, n_u) block inside it. Both are computed lazily so fully
        // pruned blocks cost nothing.
        let units: Vec<(T, T)> = grid
            .rho
            .iter()
            .flat_map(|&r| grid.theta_g.iter().map(move |&t| (r, t)))
            .collect();

        let results: Result<Vec<Vec<PointMetrics<T>>>, Error> = units
            .par_iter()
            .map(|&(rho, theta_g)| {
                let mut scratch = RateScratch::new(cfg.n_s());
                let mut out = Vec::with_capacity(
                    grid.beta_u.len() * grid.n_u.len() * grid.beta_g.len() * grid.n_g.len(),
                );
                let mut eve: Option<Vec<(T, T, T)>> = None;
                for &beta_u in &grid.beta_u {
                    for &n_u in &grid.n_u {
                        let mut r_u: Option<Vec<T>> = None;
                        for &beta_g in &grid.beta_g {
                            for &n_g in &grid.n_g {
                                let mut tx =
                                    TxParams::noma(rho, theta_g, beta_u, beta_g, n_u, n_g);
                                if n_cp != config.n_cp {
                                    tx.n_cp_override = Some(n_cp);
                                }
                                let (p_o_u, p_o_g) = ensemble.outage_pair(&tx)?;
                                if p_o_u > constraints.eps_u || p_o_g > constraints.eps_g {
                                    out.push(pruned_metrics(&tx, p_o_u, p_o_g));
                                    continue;
                                }
                                if eve.is_none() {
                                    eve = Some(ensemble.eve_per_trial(&tx, &mut scratch)?);
                                }
                                if r_u.is_none() {
                                    let lambda_u = ensemble.lambda_u_diag(&tx);
                                    r_u = Some(ensemble.rate_u_per_trial(
                                        &tx,
                                        &lambda_u,
                                        &mut scratch,
                                    )?);
                                }
                                out.push(ensemble.metrics_from_parts(
                                    &tx,
                                    constraints,
                                    p_o_u,
                                    p_o_g,
                                    eve.as_ref().unwrap(),
                                    r_u.as_ref().unwrap(),
                                    &mut scratch,
                                )?);
                            }
                        }
                    }
                }
                Ok(out)
            })
            .collect();
        for unit in results? {
            all_points.extend(unit);
        }
    }

    let points_simulated = all_points.iter().filter(|p| p.trials > 0).count() as u64;
    let mut best_feasible: Option<&PointMetrics<T>> = None;
    for p in all_points.iter().filter(|p| p.feasible) {
        if best_feasible.is_none_or(|b| better(p, b)) {
            best_feasible = Some(p);
        }
    }
    let outcome = match best_feasible {
        Some(p) => GridOutcome::Optimal(*p),
        None => {
            // Prefer simulated points (their energy terms are real); fall
            // back to outage-only diagnostics if everything was pruned.
            let candidates: Vec<&PointMetrics<T>> = if points_simulated > 0 {
                all_points.iter().filter(|p| p.trials > 0).collect()
            } else {
                all_points.iter().collect()
            };
            let least = candidates
                .into_iter()
                .min_by(|a, b| {
                    a.aggregate_violation(constraints)
                        .partial_cmp(&b.aggregate_violation(constraints))
                        .unwrap()
                        .then(cmp_tx(&a.tx, &b.tx))
                })
                .ok_or_else(|| Error::InvalidParams(vec!["empty grid".to_string()]))?;
            GridOutcome::Infeasible {
                least_violating: *least,
                aggregate_violation: least.aggregate_violation(constraints),
            }
        }
    };

    Ok(GridResult {
        outcome,
        all_points,
        trials_per_point: n_trials,
        master_seed,
        points_simulated,
        wall_ms: started.elapsed().as_millis(),
    })
}
