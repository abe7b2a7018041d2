//! Haar-random unitaries for test inputs.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::numeric::sqrt;

/// Haar-distributed `n x n` unitary, deterministic in `seed`.
///
/// A complex Ginibre matrix is orthonormalized column by column with
/// twice-iterated Gram-Schmidt. Gram-Schmidt leaves the triangular factor
/// with a positive real diagonal, which is exactly the phase fix that makes
/// the orthonormal factor Haar distributed.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Empty("matrix size"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // columns[c][r]
    let mut columns: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im) / core::f64::consts::SQRT_2
                })
                .collect()
        })
        .collect();

    for c in 0..n {
        for _ in 0..2 {
            for p in 0..c {
                let (done, rest) = columns.split_at_mut(c);
                let q = &done[p];
                let v = &mut rest[0];
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = sqrt(columns[c].iter().map(Complex64::norm_sqr).sum());
        for z in &mut columns[c] {
            *z /= norm;
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| columns[c][r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unitarity_defect;

    #[test]
    fn one_by_one_is_a_phase() {
        let u = haar_unitary(1, 99).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(haar_unitary(3, 42).unwrap(), haar_unitary(3, 42).unwrap());
        assert_ne!(haar_unitary(3, 42).unwrap(), haar_unitary(3, 43).unwrap());
    }

    #[test]
    fn unitary_to_working_precision() {
        assert!(unitarity_defect(&haar_unitary(5, 7).unwrap()).unwrap() < 1e-12);
        for s in 0..20 {
            assert!(unitarity_defect(&haar_unitary(4, s).unwrap()).unwrap() < 1e-12);
        }
        assert!(unitarity_defect(&haar_unitary(20, 3).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn zero_size_rejected() {
        assert!(matches!(haar_unitary(0, 1), Err(Error::Empty(_))));
    }

    #[test]
    fn haar_marginal_for_two_modes() {
        // |U11|^2 is uniform on [0,1] for Haar U(2).
        let samples = 1000;
        let mean: f64 = (0..samples)
            .map(|s| haar_unitary(2, s).unwrap().get(0, 0).norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
    }
}
