//! Permanents, determinants and immanants.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::characters::character;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::partition::Partition;
use crate::perm::{cycle_type, for_each_permutation};

/// Default tolerance for the Hessenberg zero pattern.
pub const HESSENBERG_TOL: f64 = 1e-10;

/// Largest size accepted by the permutation-sum evaluators.
pub const MAX_PERMUTATION_SUM: usize = 9;

/// Largest size accepted by [`permanent_ryser`].
pub const MAX_RYSER: usize = 30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn permutation_sum_order(m: &ComplexMatrix) -> Result<usize> {
    let n = m.order()?;
    if n > MAX_PERMUTATION_SUM {
        return Err(Error::TooLarge {
            what: "permutation-sum evaluation",
            n,
            max: MAX_PERMUTATION_SUM,
        });
    }
    Ok(n)
}

fn diagonal_product(m: &ComplexMatrix, sigma: &[usize]) -> Complex64 {
    sigma
        .iter()
        .enumerate()
        .fold(ONE, |acc, (k, &s)| acc * m.get(s, k))
}

/// `Σ_σ Π_k M[σ(k)][k]` over all of `S_n`. Only for `n <= 9`.
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = permutation_sum_order(m)?;
    let mut total = ZERO;
    for_each_permutation(n, |sigma| total += diagonal_product(m, sigma));
    Ok(total)
}

/// Ryser's inclusion–exclusion formula in the Nijenhuis–Wilf form, walking
/// the `2^{n-1}` subsets of the first `n - 1` columns in binary-reflected
/// Gray-code order so that each step adds or removes exactly one column
/// from the running row sums.
///
/// Step `k` (for `k = 1 .. 2^{n-1} - 1`) toggles column `trailing_zeros(k)`.
/// Summation is sequential, so results are bit-reproducible.
pub fn permanent_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.order()?;
    if n > MAX_RYSER {
        return Err(Error::TooLarge {
            what: "Ryser permanent",
            n,
            max: MAX_RYSER,
        });
    }
    // row sums start at x_i = a_{i,n} - (1/2) Σ_j a_{ij}
    let mut sums: Vec<Complex64> = (0..n)
        .map(|i| {
            let row_total: Complex64 = m.row(i).iter().sum();
            m.get(i, n - 1) - row_total * 0.5
        })
        .collect();
    let mut total: Complex64 = sums.iter().product();
    let mut included = 0u64;
    let steps: u64 = 1 << (n - 1);
    for k in 1..steps {
        let col = k.trailing_zeros() as usize;
        let bit = 1u64 << col;
        included ^= bit;
        if included & bit != 0 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += m.get(i, col);
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= m.get(i, col);
            }
        }
        let prod: Complex64 = sums.iter().product();
        if included.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    let sign = if (n - 1) % 2 == 0 { 2.0 } else { -2.0 };
    Ok(total * sign)
}

/// LU factorization with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.order()?;
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .expect("non-empty range");
        let p = a[pivot * n + col];
        if p == ZERO {
            return Ok(ZERO);
        }
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f == ZERO {
                continue;
            }
            for c in col + 1..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    Ok(det)
}

/// `Σ_σ χ^λ(σ) Π_k M[σ(k)][k]`, for `n <= 9`.
pub fn immanant(m: &ComplexMatrix, lambda: &Partition) -> Result<Complex64> {
    let n = permutation_sum_order(m)?;
    if lambda.degree() != n {
        return Err(Error::DegreeMismatch {
            partition: lambda.degree(),
            n,
        });
    }
    let mut chi: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for class in Partition::all(n) {
        let v = character(lambda, &class)?;
        chi.insert(class.parts().to_vec(), v as f64);
    }
    let mut total = ZERO;
    for_each_permutation(n, |sigma| {
        let weight = chi[&cycle_type(sigma)];
        if weight != 0.0 {
            total += diagonal_product(m, sigma) * weight;
        }
    });
    Ok(total)
}

/// `|M[i][i+k]| <= tol` for all `k >= 2`: zeros strictly above the
/// superdiagonal. Non-square matrices are never Hessenberg.
pub fn is_upper_hessenberg(m: &ComplexMatrix, tol: f64) -> bool {
    let Ok(n) = m.order() else { return false };
    (0..n).all(|i| (i + 2..n).all(|j| m.get(i, j).norm() <= tol))
}

/// `|M[i+k][i]| <= tol` for all `k >= 2`: zeros strictly below the subdiagonal.
pub fn is_lower_hessenberg(m: &ComplexMatrix, tol: f64) -> bool {
    let Ok(n) = m.order() else { return false };
    (0..n).all(|j| (j + 2..n).all(|i| m.get(i, j).norm() <= tol))
}

/// Copy of `m` with the superdiagonal negated. An involution.
pub fn t_map(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.order()?;
    let mut out = m.clone();
    for i in 0..n.saturating_sub(1) {
        out[(i, i + 1)] = -out[(i, i + 1)];
    }
    Ok(out)
}

/// Permanent of a Hessenberg matrix as `Det(T(M))`, in `O(n^3)`.
///
/// Either zero pattern is accepted: for the transposed pattern the identity
/// still holds because negating the superdiagonal and negating the
/// subdiagonal are related by the similarity `diag(1, -1, 1, …)`.
pub fn permanent_hessenberg(m: &ComplexMatrix, tol: f64) -> Result<Complex64> {
    m.order()?;
    if !(is_upper_hessenberg(m, tol) || is_lower_hessenberg(m, tol)) {
        return Err(Error::NotHessenberg { tol });
    }
    determinant(&t_map(m)?)
}
