//! Small dense linear-algebra helpers shared by the rate and precoder code.
//!
//! Everything here operates on `nalgebra` dynamic matrices of complex
//! scalars. Log-determinants go through a triangular factorization rather
//! than explicit inversion.

use nalgebra::DMatrix;

use crate::{Error, Scalar, C};

/// log2 det of a Hermitian positive-definite matrix, destroying `m`.
///
/// In-place lower Cholesky; only the lower triangle of `m` is referenced.
/// Returns [`Error::SingularMatrix`] if a pivot is not strictly positive.
pub fn logdet2_hermitian_inplace<T: Scalar>(m: &mut DMatrix<C<T>>) -> Result<T, Error> {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut logdet = T::zero();
    for j in 0..n {
        let mut pivot = m[(j, j)].re;
        for k in 0..j {
            pivot -= m[(j, k)].norm_sqr();
        }
        if pivot <= T::zero() {
            return Err(Error::SingularMatrix);
        }
        logdet += pivot.ln();
        let pivot_sqrt = pivot.sqrt();
        m[(j, j)] = C::new(pivot_sqrt, T::zero());
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= m[(i, k)] * m[(j, k)].conj();
            }
            m[(i, j)] = v / pivot_sqrt;
        }
    }
    // ln det = 2 ln det(L); the loop accumulated ln of the squared pivots.
    Ok(logdet / T::ln_2())
}

/// log2 det of a Hermitian positive-definite matrix (copying variant).
pub fn logdet2_hermitian<T: Scalar>(m: &DMatrix<C<T>>) -> Result<T, Error> {
    logdet2_hermitian_inplace(&mut m.clone())
}

/// First column of the circulant `F* diag(d) F` for the unitary DFT `F`.
///
/// For a real spectrum `d` the product is a Hermitian circulant with entries
/// `(F* diag(d) F)[m][n] = t[(m - n) mod N]` where
/// `t[j] = (1/N) sum_k d[k] exp(+2πi k j / N)`.
pub fn circulant_column_from_spectrum<T: Scalar>(d: &[T]) -> Vec<C<T>> {
    let n = d.len();
    let n_t = T::from_usize(n).unwrap();
    let step = T::two_pi() / n_t;
    (0..n)
        .map(|j| {
            let mut acc = C::new(T::zero(), T::zero());
            for (k, &dk) in d.iter().enumerate() {
                let ang = step * T::from_usize((k * j) % n).unwrap();
                acc += C::new(ang.cos(), ang.sin()).scale(dk);
            }
            acc.unscale(n_t)
        })
        .collect()
}

/// Writes `diag(lambda) + s * Circ(t)` into `out`, where `Circ(t)` is the
/// Hermitian circulant with first column `t` (see
/// [`circulant_column_from_spectrum`]).
pub fn fill_diag_plus_circulant<T: Scalar>(
    out: &mut DMatrix<C<T>>,
    lambda: &[T],
    s: T,
    t: &[C<T>],
) {
    let n = lambda.len();
    debug_assert_eq!(out.nrows(), n);
    for col in 0..n {
        for row in 0..n {
            let idx = (n + row - col) % n;
            out[(row, col)] = t[idx].scale(s);
        }
        out[(col, col)] += C::new(lambda[col], T::zero());
    }
}

/// `a * a^H` for a rectangular complex matrix.
pub fn aah<T: Scalar>(a: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    a * a.adjoint()
}

/// Frobenius norm of a complex matrix.
pub fn frobenius<T: Scalar>(m: &DMatrix<C<T>>) -> T {
    m.iter()
        .fold(T::zero(), |acc, v| acc + v.norm_sqr())
        .sqrt()
}

/// Largest off-diagonal magnitude, used by the diagonality checks.
pub fn max_offdiag<T: Scalar>(m: &DMatrix<C<T>>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm_sqr().sqrt());
            }
        }
    }
    worst
}

/// Dense unitary DFT matrix of size `n` (`F[j][k] = exp(-2πi jk/n)/√n`).
pub fn dft_matrix<T: Scalar>(n: usize) -> DMatrix<C<T>> {
    let n_t = T::from_usize(n).unwrap();
    let scale = T::one() / n_t.sqrt();
    let step = T::two_pi() / n_t;
    DMatrix::from_fn(n, n, |j, k| {
        let ang = step * T::from_usize((j * k) % n).unwrap();
        C::new(ang.cos(), -ang.sin()).scale(scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hpd(n: usize, seed: u64) -> DMatrix<C<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| {
            C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        &a * a.adjoint() + DMatrix::identity(n, n).scale(0.5)
    }

    #[test]
    fn logdet_matches_nalgebra_determinant() {
        for seed in 0..5 {
            let m = random_hpd(12, seed);
            let expected = m.clone().determinant().re.log2();
            let got = logdet2_hermitian(&m).unwrap();
            assert_relative_eq!(got, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn logdet_rejects_indefinite() {
        let mut m = DMatrix::identity(4, 4).map(|v: f64| C::new(v, 0.0));
        m[(2, 2)] = C::new(-1.0, 0.0);
        assert_eq!(logdet2_hermitian(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn circulant_matches_dense_sandwich() {
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..4.0)).collect();
        let f = dft_matrix::<f64>(n);
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            d.iter().map(|&v| C::new(v, 0.0)),
        ));
        let dense = f.adjoint() * diag * &f;
        let t = circulant_column_from_spectrum(&d);
        let mut filled = DMatrix::zeros(n, n);
        let zeros = vec![0.0; n];
        fill_diag_plus_circulant(&mut filled, &zeros, 1.0, &t);
        assert!(frobenius(&(&dense - &filled)) < 1e-12 * frobenius(&dense));
    }

    #[test]
    fn diag_plus_circulant_logdet_equals_dense_identity() {
        // logdet(Λ + s F^H diag(d) F) computed via the circulant fill must
        // agree with a direct dense evaluation of the same matrix.
        let n = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let s = 0.7;

        let t = circulant_column_from_spectrum(&d);
        let mut m = DMatrix::zeros(n, n);
        fill_diag_plus_circulant(&mut m, &lambda, s, &t);
        let fast = logdet2_hermitian_inplace(&mut m).unwrap();

        let f = dft_matrix::<f64>(n);
        let diag_d = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C::new(s * d[i], 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let mut dense = f.adjoint() * diag_d * &f;
        for i in 0..n {
            dense[(i, i)] += C::new(lambda[i], 0.0);
        }
        let slow = logdet2_hermitian(&dense).unwrap();
        assert_relative_eq!(fast, slow, max_relative = 1e-11);
    }

    #[test]
    fn dft_is_unitary() {
        let f = dft_matrix::<f64>(48);
        let eye = f.adjoint() * &f;
        let mut worst: f64 = 0.0;
        for i in 0..48 {
            for j in 0..48 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((eye[(i, j)] - C::new(target, 0.0)).norm());
            }
        }
        assert!(worst < 1e-12, "unitarity residual {worst}");
    }
}
