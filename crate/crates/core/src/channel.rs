//! Block-fading Rayleigh multipath channels: seeded tap draws, their
//! time-domain Toeplitz matrices, and the frequency-domain diagonals.
//!
//! All randomness flows through [`trial_seed`] so that Monte Carlo trials are
//! reproducible and independent of evaluation order or worker count.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::ofdm::OfdmMatrixSet;
use crate::{Scalar, C};

const SPLITMIX_GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `stream`-th output of a splitmix64 generator seeded with `master`.
///
/// Used to derive one independent seed per Monte Carlo trial so parallel
/// execution order never changes results.
pub fn trial_seed(master: u64, stream: u64) -> u64 {
    splitmix_finalize(master.wrapping_add(stream.wrapping_add(1).wrapping_mul(SPLITMIX_GOLDEN)))
}

/// Seed for the `attempt`-th redraw of a trial (attempt 0 is the trial seed).
pub fn redraw_seed(master: u64, trial: u64, attempt: u64) -> u64 {
    let base = trial_seed(master, trial);
    if attempt == 0 {
        base
    } else {
        trial_seed(base, attempt)
    }
}

/// One multipath impulse response: i.i.d. circularly-symmetric complex
/// Gaussian taps of zero mean and unit variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTaps<T> {
    pub taps: Vec<C<T>>,
}

impl<T: Scalar> ChannelTaps<T> {
    fn draw(rng: &mut ChaCha8Rng, num_taps: usize) -> Self {
        let half = T::of(0.5).sqrt();
        let taps = (0..num_taps)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C::new(T::of(re) * half, T::of(im) * half)
            })
            .collect();
        Self { taps }
    }

    /// Lower-triangular Toeplitz convolution matrix with the impulse
    /// response as its first column.
    pub fn toeplitz(&self, n: usize) -> DMatrix<C<T>> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for (lag, tap) in self.taps.iter().enumerate() {
                if i + lag < n {
                    m[(i + lag, i)] = *tap;
                }
            }
        }
        m
    }

    /// Unnormalized DFT of the zero-padded taps at `n_bins` bins; with the
    /// unitary DFT convention these are exactly the diagonal entries of
    /// `F Phi H_t E_cp F*`.
    pub fn freq_response(&self, n_bins: usize) -> Vec<C<T>> {
        let n_t = T::from_usize(n_bins).unwrap();
        let step = T::two_pi() / n_t;
        (0..n_bins)
            .map(|k| {
                let mut acc = C::new(T::zero(), T::zero());
                for (m, tap) in self.taps.iter().enumerate() {
                    let ang = step * T::from_usize((k * m) % n_bins).unwrap();
                    acc += tap * C::new(ang.cos(), -ang.sin());
                }
                acc
            })
            .collect()
    }

    /// Total tap power `sum |tap|^2`.
    pub fn power(&self) -> T {
        self.taps
            .iter()
            .fold(T::zero(), |acc, t| acc + t.norm_sqr())
    }
}

/// One Monte Carlo realization: the three channels plus their derived
/// time- and frequency-domain forms and path-loss scalars.
#[derive(Debug, Clone)]
pub struct ChannelSet<T: Scalar> {
    pub taps_u: ChannelTaps<T>,
    pub taps_g: ChannelTaps<T>,
    pub taps_e: ChannelTaps<T>,
    /// Time-domain Toeplitz matrix of the near user's channel, `n_t x n_t`.
    pub ht: DMatrix<C<T>>,
    /// Time-domain Toeplitz matrix of the far user's channel.
    pub gt: DMatrix<C<T>>,
    /// Time-domain Toeplitz matrix of the eavesdropper's channel.
    pub vt: DMatrix<C<T>>,
    /// Diagonal of the near user's frequency response, length `n_s`.
    pub h_diag: Vec<C<T>>,
    /// Diagonal of the far user's frequency response.
    pub g_diag: Vec<C<T>>,
    /// Diagonal of the eavesdropper's frequency response.
    pub v_diag: Vec<C<T>>,
    pub c_u: T,
    pub c_g: T,
    pub c_e: T,
}

/// Draws one independent channel realization per node, deterministically
/// derived from `rng_seed`.
pub fn draw_channel_set<T: Scalar>(rng_seed: u64, config: &SystemConfig<T>) -> ChannelSet<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let taps_u = ChannelTaps::draw(&mut rng, config.num_taps);
    let taps_g = ChannelTaps::draw(&mut rng, config.num_taps);
    let taps_e = ChannelTaps::draw(&mut rng, config.num_taps);
    let n_t = config.n_t;
    let n_s = config.n_s();
    ChannelSet {
        ht: taps_u.toeplitz(n_t),
        gt: taps_g.toeplitz(n_t),
        vt: taps_e.toeplitz(n_t),
        h_diag: taps_u.freq_response(n_s),
        g_diag: taps_g.freq_response(n_s),
        v_diag: taps_e.freq_response(n_s),
        c_u: config.c_u(),
        c_g: config.c_g(),
        c_e: config.c_e(),
        taps_u,
        taps_g,
        taps_e,
    }
}

/// Dense frequency-domain matrix `F Phi X_t E_cp F*` for verification of the
/// diagonalization property.
pub fn dense_freq_matrix<T: Scalar>(
    matrices: &OfdmMatrixSet<T>,
    xt: &DMatrix<C<T>>,
) -> DMatrix<C<T>> {
    &matrices.f * (&matrices.phi * xt * &matrices.e_cp) * &matrices.f_inv
}
