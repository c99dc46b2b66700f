//! Harvested energy at both users: the CP-interval term `E1` (the whole CP
//! is routed to the harvester) and the power-split term `E2` (a `1 - beta`
//! fraction of the first `N_x` post-CP samples), per OFDM symbol.
//!
//! Both terms are traces of selection/channel products and depend on the
//! transmission parameters only through scalars, so the traces are computed
//! once per realization ([`EnergyTraces`]) and reused across parameters.

use nalgebra::DMatrix;

use crate::channel::ChannelSet;
use crate::config::{SystemConfig, TxParams};
use crate::precoder::AnPrecoder;
use crate::{Scalar, C};

/// Per-symbol harvested energy, in Joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    /// CP-interval harvest at the near user.
    pub e1_u: T,
    /// Power-split harvest at the near user.
    pub e2_u: T,
    /// Total at the near user: `e1_u + e2_u`.
    pub e_u: T,
    pub e1_g: T,
    pub e2_g: T,
    pub e_g: T,
}

/// Channel-dependent traces of the energy expressions for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTraces<T> {
    /// `Tr{A_cp H_t E_cp E_cp* H_t* A_cp*}`: CP harvest from the data signal.
    pub data_cp_u: T,
    /// `Tr{A_cp H_t K K* H_t* A_cp*}`: CP harvest from the AN signal.
    pub an_cp_u: T,
    pub data_cp_g: T,
    pub an_cp_g: T,
    /// Prefix sums of the squared row norms of `Phi H_t E_cp`; entry `n` is
    /// the `E2` trace for `N_u = n`.
    pub split_prefix_u: Vec<T>,
    pub split_prefix_g: Vec<T>,
}

fn frob_sq_rows<T: Scalar>(m: &DMatrix<C<T>>, start: usize, len: usize) -> T {
    let mut acc = T::zero();
    for r in start..start + len {
        for c in 0..m.ncols() {
            acc += m[(r, c)].norm_sqr();
        }
    }
    acc
}

fn row_norm_prefix<T: Scalar>(m: &DMatrix<C<T>>, start: usize, len: usize) -> Vec<T> {
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(T::zero());
    let mut acc = T::zero();
    for r in start..start + len {
        for c in 0..m.ncols() {
            acc += m[(r, c)].norm_sqr();
        }
        prefix.push(acc);
    }
    prefix
}

impl<T: Scalar> EnergyTraces<T> {
    pub fn new(
        config: &SystemConfig<T>,
        channels: &ChannelSet<T>,
        precoder: &AnPrecoder<T>,
    ) -> Self {
        let n_cp = config.n_cp;
        let n_s = config.n_s();

        // E_cp applied from the right: column j of X_t E_cp picks the columns
        // of X_t that the CP mapping routes to data sample j.
        let e_cp = crate::ofdm::OfdmMatrixSet::<T>::for_geometry(config.n_t, n_cp)
            .expect("geometry validated upstream")
            .e_cp;
        let he = &channels.ht * &e_cp;
        let ge = &channels.gt * &e_cp;
        let hk = &channels.ht * &precoder.k;
        let gk = &channels.gt * &precoder.k;

        EnergyTraces {
            data_cp_u: frob_sq_rows(&he, 0, n_cp),
            an_cp_u: frob_sq_rows(&hk, 0, n_cp),
            data_cp_g: frob_sq_rows(&ge, 0, n_cp),
            an_cp_g: frob_sq_rows(&gk, 0, n_cp),
            split_prefix_u: row_norm_prefix(&he, n_cp, n_s),
            split_prefix_g: row_norm_prefix(&ge, n_cp, n_s),
        }
    }
}

fn harvest<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    c2: T,
    data_cp: T,
    an_cp: T,
    split_prefix: &[T],
    n_split: usize,
    beta: T,
) -> (T, T) {
    let n_t = T::from_usize(config.n_t).unwrap();
    let n_cp = T::from_usize(config.n_cp).unwrap();
    let rho_bar = T::one() - tx.rho;
    let e1 = config.eta
        * config.p_t
        * config.t_cp()
        * c2
        * (tx.rho * data_cp / n_t + rho_bar * an_cp / n_cp);
    let e2 = config.eta
        * c2
        * tx.rho
        * (T::one() - beta)
        * config.p_t
        * T::from_usize(n_split).unwrap()
        * config.t_s()
        / n_t
        * split_prefix[n_split];
    (e1, e2)
}

/// Harvested energy for one realization from precomputed traces.
pub fn energy_from_traces<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    traces: &EnergyTraces<T>,
    c_u: T,
    c_g: T,
) -> EnergyReport<T> {
    let (e1_u, e2_u) = harvest(
        config,
        tx,
        c_u * c_u,
        traces.data_cp_u,
        traces.an_cp_u,
        &traces.split_prefix_u,
        tx.n_u,
        tx.beta_u,
    );
    let (e1_g, e2_g) = harvest(
        config,
        tx,
        c_g * c_g,
        traces.data_cp_g,
        traces.an_cp_g,
        &traces.split_prefix_g,
        tx.n_g,
        tx.beta_g,
    );
    EnergyReport {
        e1_u,
        e2_u,
        e_u: e1_u + e2_u,
        e1_g,
        e2_g,
        e_g: e1_g + e2_g,
    }
}

/// Harvested energy at both users for one realization.
pub fn harvested_energy<T: Scalar>(
    config: &SystemConfig<T>,
    tx: &TxParams<T>,
    channels: &ChannelSet<T>,
    precoder: &AnPrecoder<T>,
) -> EnergyReport<T> {
    let cfg = tx.effective_config(config);
    let traces = EnergyTraces::new(&cfg, channels, precoder);
    energy_from_traces(&cfg, tx, &traces, channels.c_u, channels.c_g)
}
