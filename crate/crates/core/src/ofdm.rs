//! Deterministic structure matrices of the OFDM signal model: unitary
//! DFT/IDFT, cyclic-prefix insertion and removal, and the selection matrices
//! that extract the CP or a leading block of data samples.
//!
//! The selection matrices are kept as dense 0/1 matrices (cast to complex so
//! they compose directly with channel matrices); at these sizes the clarity
//! is worth more than an index-map representation.

use nalgebra::DMatrix;

use crate::config::SystemConfig;
use crate::linalg::dft_matrix;
use crate::{Error, Scalar, C};

/// The full set of structure matrices for one `(n_t, n_cp)` geometry.
#[derive(Debug, Clone)]
pub struct OfdmMatrixSet<T: Scalar> {
    pub n_t: usize,
    pub n_cp: usize,
    pub n_s: usize,
    /// Unitary DFT matrix, `n_s x n_s`.
    pub f: DMatrix<C<T>>,
    /// Inverse (conjugate-transpose) DFT matrix.
    pub f_inv: DMatrix<C<T>>,
    /// CP insertion, `n_t x n_s`: last `n_cp` rows of the identity stacked
    /// above the identity.
    pub e_cp: DMatrix<C<T>>,
    /// CP removal, `n_s x n_t`: `[0 | I]`.
    pub phi: DMatrix<C<T>>,
    /// CP extraction, `n_cp x n_t`: `[I | 0]`.
    pub a_cp: DMatrix<C<T>>,
}

fn selection<T: Scalar>(rows: usize, cols: usize, col_of_row: impl Fn(usize) -> usize) -> DMatrix<C<T>> {
    let mut m = DMatrix::zeros(rows, cols);
    for r in 0..rows {
        m[(r, col_of_row(r))] = C::new(T::one(), T::zero());
    }
    m
}

impl<T: Scalar> OfdmMatrixSet<T> {
    /// Builds the matrix set for the config's geometry.
    pub fn build(config: &SystemConfig<T>) -> Result<Self, Error> {
        Self::for_geometry(config.n_t, config.n_cp)
    }

    /// Builds the matrix set for an explicit `(n_t, n_cp)` pair.
    pub fn for_geometry(n_t: usize, n_cp: usize) -> Result<Self, Error> {
        if n_cp >= n_t {
            return Err(Error::InvalidParams(vec![format!(
                "N_cp = {n_cp} must be smaller than N_t = {n_t}"
            )]));
        }
        let n_s = n_t - n_cp;
        let f = dft_matrix::<T>(n_s);
        let f_inv = f.adjoint();
        // Cyclic prefix: copy of the last n_cp data samples, prepended.
        let e_cp = selection(n_t, n_s, |r| if r < n_cp { n_s - n_cp + r } else { r - n_cp });
        let phi = selection(n_s, n_t, |r| r + n_cp);
        let a_cp = selection(n_cp, n_t, |r| r);
        Ok(Self {
            n_t,
            n_cp,
            n_s,
            f,
            f_inv,
            e_cp,
            phi,
            a_cp,
        })
    }

    /// Leading-sample extraction `[I_n | 0]`, `n x n_s`.
    ///
    /// `a_n(0)` is the empty matrix and `a_n(n_s)` the identity.
    pub fn a_n(&self, n: usize) -> DMatrix<C<T>> {
        assert!(n <= self.n_s, "extraction length exceeds N_s");
        selection(n, self.n_s, |r| r)
    }
}
