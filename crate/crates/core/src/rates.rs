//! Per-realization achievable rates for the two NOMA users and the
//! eavesdropper, equalized-noise profiles, and the secrecy-rate pair with
//! its sum bound.
//!
//! Every rate is a `1/N_t`-normalized log-det in bits/s/Hz. The log-dets are
//! evaluated through the identity
//!
//! ```text
//! det(I + s X (F Λ F*)^-1) = det(Λ + s F* X F) / det(Λ)
//! ```
//!
//! (`F` unitary), which turns each rate into a Cholesky factorization of a
//! Hermitian positive-definite matrix; no matrix is ever inverted explicitly.
//! For a diagonal `X = diag(d)` the sandwich `F* diag(d) F` is the Hermitian
//! circulant generated by the inverse DFT of `d`, so per-realization spectra
//! can be cached and reused across transmission parameters.

use nalgebra::DMatrix;

use crate::channel::ChannelSet;
use crate::config::{SystemConfig, TxParams};
use crate::linalg::{
    circulant_column_from_spectrum, fill_diag_plus_circulant, logdet2_hermitian_inplace,
};
use crate::precoder::AnPrecoder;
use crate::{Error, Scalar, C};

/// Equalized noise profiles of both users.
///
/// The matrices `Λ_u`, `Λ_g` are diagonal (the frequency responses entering
/// `Λ_g` are diagonal by the CP construction), so only the diagonals are
/// stored; the first `N_x` entries carry the `1/β_x` power-split inflation.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile<T> {
    /// Diagonal of `Λ_u = σ²/c_u² · diag(1/β_u, …, 1/β_u, 1, …, 1)`.
    pub lambda_u: Vec<T>,
    /// Diagonal of `Λ_g = (σ²/c_g² I + ρ θ_u P_t G G*/N_t) · diag(1/β_g, …, 1)`.
    pub lambda_g: Vec<T>,
    /// Average equalized noise variance at the near user.
    pub sigma_a_u2: T,
    /// Average equalized noise variance at the far user.
    pub sigma_a_g2: T,
}

/// Average equalized noise variance `σ² (N_s - N + N/β) / N_s`.
pub fn average_noise_variance<T: Scalar>(
    sigma2: T,
    n_s: usize,
    n_split: usize,
    beta: T,
) -> Result<T, Error> {
    let n_s_t = T::from_usize(n_s).unwrap();
    let n_t = T::from_usize(n_split).unwrap();
    let inflated = if n_split == 0 {
        T::zero()
    } else {
        if beta <= T::zero() {
            return Err(Error::DivisionByZero {
                split_samples: n_split,
            });
        }
        n_t / beta
    };
    Ok(sigma2 * (n_s_t - n_t + inflated) / n_s_t)
}

/// Builds both users' noise profiles for one realization.
pub fn noise_profiles<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
) -> Result<NoiseProfile<T>, Error> {
    let cfg = tx.effective_config(config);
    let n_s = cfg.n_s();
    debug_assert_eq!(channels.h_diag.len(), n_s);

    let sigma_a_u2 = average_noise_variance(cfg.sigma2, n_s, tx.n_u, tx.beta_u)?;
    let sigma_a_g2 = average_noise_variance(cfg.sigma2, n_s, tx.n_g, tx.beta_g)?;

    let base_u = cfg.sigma2 / (channels.c_u * channels.c_u);
    let lambda_u = (0..n_s)
        .map(|k| {
            if k < tx.n_u {
                base_u / tx.beta_u
            } else {
                base_u
            }
        })
        .collect();

    let base_g = cfg.sigma2 / (channels.c_g * channels.c_g);
    let interference_scale = tx.rho * tx.theta_u * cfg.p_t / T::from_usize(cfg.n_t).unwrap();
    let lambda_g = (0..n_s)
        .map(|k| {
            let noise = base_g + interference_scale * channels.g_diag[k].norm_sqr();
            if k < tx.n_g {
                noise / tx.beta_g
            } else {
                noise
            }
        })
        .collect();

    Ok(NoiseProfile {
        lambda_u,
        lambda_g,
        sigma_a_u2,
        sigma_a_g2,
    })
}

/// All per-realization rates, in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport<T> {
    /// Achievable rate of the near user (SIC removes the far user's signal).
    pub r_u: T,
    /// Achievable rate of the far user (near user's signal treated as noise).
    pub r_g: T,
    /// Eavesdropper rate targeting the near user's message only.
    pub r_e_u: T,
    /// Eavesdropper rate targeting the far user's message only.
    pub r_e_g: T,
    /// Eavesdropper rate with a joint-typicality receiver for both messages.
    pub r_e_joint: T,
    /// Secrecy rate of the near user after the sum-bound cap.
    pub rs_u: T,
    /// Secrecy rate of the far user after the sum-bound cap.
    pub rs_g: T,
    /// Sum secrecy bound `[R_u + R_g - R_E]^+`.
    pub rs_sum_bound: T,
}

/// Per-realization spectra cached for repeated evaluation across
/// transmission parameters (the channel does not depend on them).
#[derive(Debug, Clone)]
pub struct LinkCache<T: Scalar> {
    pub n_t: usize,
    pub n_s: usize,
    pub n_cp: usize,
    pub c_u: T,
    pub c_g: T,
    pub c_e: T,
    /// Squared magnitudes of the near user's frequency response.
    pub h2: Vec<T>,
    /// Squared magnitudes of the far user's frequency response.
    pub g2: Vec<T>,
    /// Squared magnitudes of the eavesdropper's frequency response.
    pub v2: Vec<T>,
    /// Circulant generator of `F* diag(h2) F`.
    pub circ_h: Vec<C<T>>,
    /// Circulant generator of `F* diag(g2) F`.
    pub circ_g: Vec<C<T>>,
    /// AN covariance shape at the eavesdropper, `D D*` with `D = F Φ V_t K`.
    pub dd_star: DMatrix<C<T>>,
}

/// Reusable factorization buffer so the hot loop never allocates.
#[derive(Debug, Clone)]
pub struct RateScratch<T: Scalar> {
    m: DMatrix<C<T>>,
}

impl<T: Scalar> RateScratch<T> {
    pub fn new(n_s: usize) -> Self {
        Self {
            m: DMatrix::zeros(n_s, n_s),
        }
    }
}

impl<T: Scalar> LinkCache<T> {
    pub fn new(
        config: &SystemConfig<T>,
        channels: &ChannelSet<T>,
        precoder: &AnPrecoder<T>,
    ) -> Self {
        let n_t = config.n_t;
        let n_cp = config.n_cp;
        let n_s = config.n_s();
        let h2: Vec<T> = channels.h_diag.iter().map(|h| h.norm_sqr()).collect();
        let g2: Vec<T> = channels.g_diag.iter().map(|g| g.norm_sqr()).collect();
        let v2: Vec<T> = channels.v_diag.iter().map(|v| v.norm_sqr()).collect();
        let circ_h = circulant_column_from_spectrum(&h2);
        let circ_g = circulant_column_from_spectrum(&g2);

        // D = F Φ V_t K; Φ slices away the CP rows.
        let vk = &channels.vt * &precoder.k;
        let phi_vk = vk.rows(n_cp, n_s).into_owned();
        let f = crate::linalg::dft_matrix::<T>(n_s);
        let d = &f * phi_vk;
        let dd_star = &d * d.adjoint();

        Self {
            n_t,
            n_s,
            n_cp,
            c_u: channels.c_u,
            c_g: channels.c_g,
            c_e: channels.c_e,
            h2,
            g2,
            v2,
            circ_h,
            circ_g,
            dd_star,
        }
    }

    fn n_t_scalar(&self) -> T {
        T::from_usize(self.n_t).unwrap()
    }

    /// `(log2 det(Λ + s·Circ) - log2 det(Λ)) / N_t`.
    fn rate_from_circulant(
        &self,
        lambda: &[T],
        s: T,
        circ: &[C<T>],
        scratch: &mut RateScratch<T>,
    ) -> Result<T, Error> {
        fill_diag_plus_circulant(&mut scratch.m, lambda, s, circ);
        let logdet = logdet2_hermitian_inplace(&mut scratch.m)?;
        let base = lambda.iter().fold(T::zero(), |acc, &l| acc + l.log2());
        Ok((logdet - base) / self.n_t_scalar())
    }

    /// Near-user rate for the given profile.
    pub fn rate_u(
        &self,
        config: &SystemConfig<T>,
        tx: &TxParams<T>,
        profile: &NoiseProfile<T>,
        scratch: &mut RateScratch<T>,
    ) -> Result<T, Error> {
        let s = tx.rho * tx.theta_u * config.p_t / self.n_t_scalar();
        self.rate_from_circulant(&profile.lambda_u, s, &self.circ_h, scratch)
    }

    /// Far-user rate for the given profile (inter-user interference lives in
    /// the profile's `lambda_g`).
    pub fn rate_g(
        &self,
        config: &SystemConfig<T>,
        tx: &TxParams<T>,
        profile: &NoiseProfile<T>,
        scratch: &mut RateScratch<T>,
    ) -> Result<T, Error> {
        let s = tx.rho * tx.theta_g * config.p_t / self.n_t_scalar();
        self.rate_from_circulant(&profile.lambda_g, s, &self.circ_g, scratch)
    }

    /// `log2 det(σ²/c_e² I + an_scale·DD* + c·diag(v2))`.
    fn eve_logdet(
        &self,
        sigma_e2: T,
        an_scale: T,
        c: T,
        scratch: &mut RateScratch<T>,
    ) -> Result<T, Error> {
        let m = &mut scratch.m;
        for col in 0..self.n_s {
            for row in 0..self.n_s {
                m[(row, col)] = self.dd_star[(row, col)].scale(an_scale);
            }
            m[(col, col)] += C::new(sigma_e2 + c * self.v2[col], T::zero());
        }
        logdet2_hermitian_inplace(m)
    }

    /// The three eavesdropper rates `(R_E_u, R_E_g, R_E_joint)`.
    pub fn eve_rates(
        &self,
        config: &SystemConfig<T>,
        tx: &TxParams<T>,
        scratch: &mut RateScratch<T>,
    ) -> Result<(T, T, T), Error> {
        let n_t = self.n_t_scalar();
        let sigma_e2 = config.sigma2 / (self.c_e * self.c_e);
        let rho_bar = T::one() - tx.rho;
        let an_scale = rho_bar * config.p_t / T::from_usize(self.n_cp).unwrap();
        let s_full = tx.rho * config.p_t / n_t;
        let s_u = tx.rho * tx.theta_u * config.p_t / n_t;
        let s_g = tx.rho * tx.theta_g * config.p_t / n_t;

        let l_full = self.eve_logdet(sigma_e2, an_scale, s_full, scratch)?;
        let l_g = self.eve_logdet(sigma_e2, an_scale, s_g, scratch)?;
        let l_u = self.eve_logdet(sigma_e2, an_scale, s_u, scratch)?;
        let l_0 = self.eve_logdet(sigma_e2, an_scale, T::zero(), scratch)?;

        Ok((
            (l_full - l_g) / n_t,
            (l_full - l_u) / n_t,
            (l_full - l_0) / n_t,
        ))
    }

    /// Computes a full [`RateReport`] for one set of transmission parameters.
    pub fn report(
        &self,
        config: &SystemConfig<T>,
        tx: &TxParams<T>,
        profile: &NoiseProfile<T>,
        scratch: &mut RateScratch<T>,
    ) -> Result<RateReport<T>, Error> {
        let r_u = self.rate_u(config, tx, profile, scratch)?;
        let r_g = self.rate_g(config, tx, profile, scratch)?;
        let (r_e_u, r_e_g, r_e_joint) = self.eve_rates(config, tx, scratch)?;
        let (rs_u, rs_g, rs_sum_bound) = secrecy_rates(r_u, r_g, r_e_u, r_e_g, r_e_joint);
        Ok(RateReport {
            r_u,
            r_g,
            r_e_u,
            r_e_g,
            r_e_joint,
            rs_u,
            rs_g,
            rs_sum_bound,
        })
    }
}

/// Near-user achievable rate (standalone entry point).
pub fn rate_u<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
    profile: &NoiseProfile<T>,
) -> Result<T, Error> {
    let cfg = tx.effective_config(config);
    let h2: Vec<T> = channels.h_diag.iter().map(|h| h.norm_sqr()).collect();
    let circ = circulant_column_from_spectrum(&h2);
    let s = tx.rho * tx.theta_u * cfg.p_t / T::from_usize(cfg.n_t).unwrap();
    let mut scratch = RateScratch::new(cfg.n_s());
    fill_diag_plus_circulant(&mut scratch.m, &profile.lambda_u, s, &circ);
    let logdet = logdet2_hermitian_inplace(&mut scratch.m)?;
    let base = profile
        .lambda_u
        .iter()
        .fold(T::zero(), |acc, &l| acc + l.log2());
    Ok((logdet - base) / T::from_usize(cfg.n_t).unwrap())
}

/// Far-user achievable rate (standalone entry point).
pub fn rate_g<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
    profile: &NoiseProfile<T>,
) -> Result<T, Error> {
    let cfg = tx.effective_config(config);
    let g2: Vec<T> = channels.g_diag.iter().map(|g| g.norm_sqr()).collect();
    let circ = circulant_column_from_spectrum(&g2);
    let s = tx.rho * tx.theta_g * cfg.p_t / T::from_usize(cfg.n_t).unwrap();
    let mut scratch = RateScratch::new(cfg.n_s());
    fill_diag_plus_circulant(&mut scratch.m, &profile.lambda_g, s, &circ);
    let logdet = logdet2_hermitian_inplace(&mut scratch.m)?;
    let base = profile
        .lambda_g
        .iter()
        .fold(T::zero(), |acc, &l| acc + l.log2());
    Ok((logdet - base) / T::from_usize(cfg.n_t).unwrap())
}

/// The three eavesdropper rates (standalone entry point).
pub fn eve_rates<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
    precoder: &AnPrecoder<T>,
) -> Result<(T, T, T), Error> {
    let cfg = tx.effective_config(config);
    let cache = LinkCache::new(&cfg, channels, precoder);
    let mut scratch = RateScratch::new(cfg.n_s());
    cache.eve_rates(&cfg, tx, &mut scratch)
}

/// Secrecy-rate pair and sum bound from the five raw rates.
///
/// Individual rates are positive-part differences; if their sum exceeds the
/// joint bound `[R_u + R_g - R_E]^+`, both are scaled proportionally so the
/// pair meets the bound with equality (preserving the users' ratio).
pub fn secrecy_rates<T: Scalar>(r_u: T, r_g: T, r_e_u: T, r_e_g: T, r_e_joint: T) -> (T, T, T) {
    let zero = T::zero();
    let mut rs_u = (r_u - r_e_u).max(zero);
    let mut rs_g = (r_g - r_e_g).max(zero);
    let bound = (r_u + r_g - r_e_joint).max(zero);
    let sum = rs_u + rs_g;
    if sum > bound {
        if bound == zero {
            rs_u = zero;
            rs_g = zero;
        } else {
            let scale = bound / sum;
            rs_u *= scale;
            rs_g *= scale;
        }
    }
    (rs_u, rs_g, bound)
}

/// Everything at once for one realization.
pub fn full_report<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
    precoder: &AnPrecoder<T>,
) -> Result<RateReport<T>, Error> {
    let cfg = tx.effective_config(config);
    let profile = noise_profiles(&cfg, tx, channels)?;
    let cache = LinkCache::new(&cfg, channels, precoder);
    let mut scratch = RateScratch::new(cfg.n_s());
    cache.report(&cfg, tx, &profile, &mut scratch)
}
