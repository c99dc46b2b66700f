//! Artificial-noise precoder: an orthonormal basis of the null space of
//! `Phi (H_t + G_t)`, so the AN dies at the legitimate receivers' combined
//! channel while remaining visible to the eavesdropper.
//!
//! Only the sum channel is nulled. The per-user products `Phi H_t K` and
//! `Phi G_t K` generally do not vanish individually; their norms are kept as
//! diagnostics.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::frobenius;
use crate::{Error, Scalar, C};

/// Relative singular-value threshold below which a direction counts as null.
const NULL_TOL: f64 = 1e-9;

/// The AN precoding matrix for one channel realization.
#[derive(Debug, Clone)]
pub struct AnPrecoder<T: Scalar> {
    /// `n_t x n_cp` matrix with orthonormal columns spanning the null space
    /// of `Phi (H_t + G_t)`.
    pub k: DMatrix<C<T>>,
    /// `||Phi (H_t + G_t) K||_F`, the achieved sum-channel cancellation.
    pub cancellation_residual: T,
    /// `||Phi H_t K||_F`: AN leakage into the near user's own channel.
    pub leakage_u: T,
    /// `||Phi G_t K||_F`: AN leakage into the far user's own channel.
    pub leakage_g: T,
}

/// Computes the precoder from the time-domain channels and the CP-removal
/// matrix.
///
/// The null space comes from a full SVD of `Phi (H_t + G_t)` (padded square
/// so the right singular vectors span the whole domain); the null vectors are
/// the right singular vectors of the `n_cp` smallest singular values. A draw
/// whose numerical nullity differs from `n_cp` is reported as
/// [`Error::DegenerateChannel`] so the caller can redraw.
pub fn compute_precoder<T: Scalar>(
    ht: &DMatrix<C<T>>,
    gt: &DMatrix<C<T>>,
    phi: &DMatrix<C<T>>,
) -> Result<AnPrecoder<T>, Error> {
    let n_t = ht.nrows();
    let n_s = phi.nrows();
    let n_cp = n_t - n_s;

    let sum_channel = phi * (ht + gt);
    let mut padded = DMatrix::zeros(n_t, n_t);
    padded.rows_mut(0, n_s).copy_from(&sum_channel);

    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let singular_values = svd.singular_values;

    let sigma_max = singular_values.iter().fold(T::zero(), |a, &s| a.max(s));
    if sigma_max <= T::zero() {
        return Err(Error::DegenerateChannel {
            expected: n_cp,
            found: n_t,
        });
    }
    let tol = T::of(NULL_TOL) * sigma_max;
    let mut order: Vec<usize> = (0..singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        singular_values[a]
            .partial_cmp(&singular_values[b])
            .expect("singular values are finite")
    });
    let nullity = singular_values.iter().filter(|&&s| s <= tol).count();
    if nullity != n_cp {
        return Err(Error::DegenerateChannel {
            expected: n_cp,
            found: nullity,
        });
    }

    // Rows of v_t are the conjugated right singular vectors.
    let mut k = DMatrix::zeros(n_t, n_cp);
    for (col, &idx) in order[..n_cp].iter().enumerate() {
        for row in 0..n_t {
            k[(row, col)] = v_t[(idx, row)].conj();
        }
    }

    let cancellation_residual = frobenius(&(&sum_channel * &k));
    let leakage_u = frobenius(&(phi * ht * &k));
    let leakage_g = frobenius(&(phi * gt * &k));
    Ok(AnPrecoder {
        k,
        cancellation_residual,
        leakage_u,
        leakage_g,
    })
}

/// Draws an AN vector of i.i.d. circularly-symmetric complex Gaussian
/// entries with unit variance; the transmit scaling `sqrt(rho_bar P_t / N_cp)`
/// is applied downstream.
pub fn draw_an<T: Scalar>(rng_seed: u64, n_cp: usize) -> DVector<C<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let half = T::of(0.5).sqrt();
    DVector::from_iterator(
        n_cp,
        (0..n_cp).map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C::new(T::of(re) * half, T::of(im) * half)
        }),
    )
}
