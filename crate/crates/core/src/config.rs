//! Static system parameters, per-run transmission parameters, and the
//! constraint set of the max-min optimization.

use crate::Scalar;

/// Free-space-style path-loss amplitude coefficient `1/sqrt(1 + d^alpha)`.
///
/// Strictly decreasing in the distance `d`; equals one at `d = 0`.
pub fn path_loss_coeff<T: Scalar>(d: T, alpha: T) -> T {
    T::one() / (T::one() + d.powf(alpha)).sqrt()
}

/// Static physical and system parameters.
///
/// All quantities are in base SI units: Hz, Watts, meters, seconds, Joules.
/// Derived quantities (`n_s`, symbol durations, path-loss coefficients) are
/// methods so the stored fields stay minimal and consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig<T> {
    /// Total samples per OFDM symbol.
    pub n_t: usize,
    /// Cyclic-prefix samples.
    pub n_cp: usize,
    /// Sampling frequency in Hz.
    pub f_s: T,
    /// Total transmit power budget in Watts.
    pub p_t: T,
    /// Receiver noise power in Watts.
    pub sigma2: T,
    /// Distance from the base station to the near user, meters.
    pub d_u: T,
    /// Distance to the far user, meters.
    pub d_g: T,
    /// Distance to the eavesdropper, meters.
    pub d_e: T,
    /// Radius of the inner user disc, meters.
    pub r_u: T,
    /// Inner radius of the outer user annulus, meters.
    pub r_g1: T,
    /// Outer radius of the outer user annulus, meters.
    pub r_g2: T,
    /// Path-loss exponent.
    pub alpha: T,
    /// RF-to-DC energy conversion efficiency, in `[0, 1]`.
    pub eta: T,
    /// Channel delay-spread length in samples; at most `n_cp`.
    pub num_taps: usize,
    /// SIC design rate factor for decoding the far user's message.
    pub delta1: T,
    /// Design rate (bits/s/Hz) at which the near user decodes its own message.
    pub delta3: T,
    /// Quadrature order for the inner-disc outage approximation.
    pub quad_l: usize,
    /// Quadrature order for the outer-annulus outage approximation.
    pub quad_m: usize,
}

impl<T: Scalar> SystemConfig<T> {
    /// Reference scenario used by the shipped configs and the test suites.
    ///
    /// The transmit power has no universal default; pass the value produced
    /// by the SNR calibration helper of the CLI (or any experiment-specific
    /// budget).
    pub fn baseline(p_t: T) -> Self {
        Self {
            n_t: 64,
            n_cp: 16,
            f_s: T::of(2.0e6),
            p_t,
            sigma2: T::one(),
            d_u: T::of(4.0),
            d_g: T::of(12.0),
            d_e: T::of(10.0),
            r_u: T::of(8.0),
            r_g1: T::of(10.0),
            r_g2: T::of(14.0),
            alpha: T::of(2.0),
            eta: T::of(0.75),
            num_taps: 16,
            delta1: T::one(),
            delta3: T::of(0.5),
            quad_l: 32,
            quad_m: 32,
        }
    }

    /// Number of useful data samples `n_s = n_t - n_cp`.
    pub fn n_s(&self) -> usize {
        self.n_t - self.n_cp
    }

    /// Total OFDM symbol duration `n_t / f_s` in seconds.
    pub fn symbol_duration(&self) -> T {
        T::from_usize(self.n_t).unwrap() / self.f_s
    }

    /// Cyclic-prefix duration `n_cp / f_s` in seconds.
    pub fn t_cp(&self) -> T {
        T::from_usize(self.n_cp).unwrap() / self.f_s
    }

    /// Data-portion duration `n_s / f_s` in seconds.
    pub fn t_s(&self) -> T {
        T::from_usize(self.n_s()).unwrap() / self.f_s
    }

    /// Path-loss amplitude coefficient for the near user.
    pub fn c_u(&self) -> T {
        path_loss_coeff(self.d_u, self.alpha)
    }

    /// Path-loss amplitude coefficient for the far user.
    pub fn c_g(&self) -> T {
        path_loss_coeff(self.d_g, self.alpha)
    }

    /// Path-loss amplitude coefficient for the eavesdropper.
    pub fn c_e(&self) -> T {
        path_loss_coeff(self.d_e, self.alpha)
    }

    /// Copy of the config with a different cyclic-prefix length.
    pub fn with_n_cp(&self, n_cp: usize) -> Self {
        Self { n_cp, ..*self }
    }
}

/// Per-run transmission parameters: the decision variables of the
/// max-min optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxParams<T> {
    /// Fraction of the power budget assigned to data (the rest feeds AN).
    pub rho: T,
    /// NOMA power fraction of the near user.
    pub theta_u: T,
    /// NOMA power fraction of the far user; `theta_u + theta_g = 1`.
    pub theta_g: T,
    /// Power-split factor at the near user during its harvesting prefix.
    pub beta_u: T,
    /// Power-split factor at the far user during its harvesting prefix.
    pub beta_g: T,
    /// Number of post-CP samples the near user power-splits.
    pub n_u: usize,
    /// Number of post-CP samples the far user power-splits.
    pub n_g: usize,
    /// Optional CP length overriding the system config for this run.
    pub n_cp_override: Option<usize>,
}

impl<T: Scalar> TxParams<T> {
    /// Convenience constructor deriving `theta_u = 1 - theta_g`.
    pub fn noma(rho: T, theta_g: T, beta_u: T, beta_g: T, n_u: usize, n_g: usize) -> Self {
        Self {
            rho,
            theta_u: T::one() - theta_g,
            theta_g,
            beta_u,
            beta_g,
            n_u,
            n_g,
            n_cp_override: None,
        }
    }

    /// System config with this run's CP override applied, if any.
    pub fn effective_config(&self, config: &SystemConfig<T>) -> SystemConfig<T> {
        match self.n_cp_override {
            Some(n_cp) => config.with_n_cp(n_cp),
            None => *config,
        }
    }
}

/// Constraint levels of the max-min optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSpec<T> {
    /// Minimum average harvested energy at the near user, Joules per symbol.
    pub mu_u: T,
    /// Minimum average harvested energy at the far user, Joules per symbol.
    pub mu_g: T,
    /// Maximum outage probability at the near user.
    pub eps_u: T,
    /// Maximum outage probability at the far user.
    pub eps_g: T,
}

/// Outcome of [`validate`]: empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Human-readable description of each violated invariant.
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, msg: &str) {
        if !ok {
            self.violations.push(msg.to_string());
        }
    }
}

/// Checks every domain invariant of a `(SystemConfig, TxParams)` pair and
/// reports the violations; never mutates its inputs.
pub fn validate<T: Scalar>(config: &SystemConfig<T>, tx: &TxParams<T>) -> ValidationReport {
    let cfg = tx.effective_config(config);
    let mut report = ValidationReport::default();
    let zero = T::zero();
    let one = T::one();

    report.check(cfg.n_cp < cfg.n_t, "N_cp must be smaller than N_t");
    report.check(cfg.n_cp >= 1, "N_cp must be at least 1");
    report.check(
        cfg.num_taps <= cfg.n_cp,
        "tau exceeds CP: num_taps must satisfy num_taps <= N_cp",
    );
    report.check(cfg.n_cp * 2 <= cfg.n_t, "N_cp must not exceed N_s");
    report.check(cfg.num_taps >= 1, "num_taps must be at least 1");
    report.check(cfg.f_s > zero, "f_s must be positive");
    report.check(cfg.p_t >= zero, "P_t must be nonnegative");
    report.check(cfg.sigma2 > zero, "sigma2 must be positive");
    report.check(
        cfg.eta >= zero && cfg.eta <= one,
        "eta must lie in [0, 1]",
    );
    report.check(cfg.alpha > zero, "alpha must be positive");
    report.check(
        cfg.d_u > zero && cfg.d_g > zero && cfg.d_e > zero,
        "distances must be positive",
    );
    report.check(
        cfg.r_u > zero && cfg.r_g1 > zero && cfg.r_g2 > zero,
        "disc radii must be positive",
    );
    report.check(cfg.r_g1 < cfg.r_g2, "r_g1 must be smaller than r_g2");
    report.check(cfg.quad_l >= 1 && cfg.quad_m >= 1, "quadrature orders must be at least 1");

    let unit = |v: T| v >= zero && v <= one;
    report.check(unit(tx.rho), "rho must lie in [0, 1]");
    report.check(unit(tx.theta_u) && unit(tx.theta_g), "theta must lie in [0, 1]");
    report.check(unit(tx.beta_u) && unit(tx.beta_g), "beta must lie in [0, 1]");
    let theta_sum = tx.theta_u + tx.theta_g;
    report.check(
        (theta_sum - one).abs() <= T::of(1e-9),
        "theta_u + theta_g must equal 1",
    );
    report.check(tx.theta_u < tx.theta_g, "theta_u < theta_g is required");
    if cfg.n_cp < cfg.n_t {
        report.check(tx.n_u <= cfg.n_s(), "N_u must not exceed N_s");
        report.check(tx.n_g <= cfg.n_s(), "N_g must not exceed N_s");
    }
    report.check(
        tx.n_u == 0 || tx.beta_u > zero,
        "beta_u must be positive when N_u > 0",
    );
    report.check(
        tx.n_g == 0 || tx.beta_g > zero,
        "beta_g must be positive when N_g > 0",
    );

    report
}
