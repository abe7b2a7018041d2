//! Photon configurations, delays and scattering submatrices.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Multiset of occupied modes (1-based), kept in non-decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonConfig {
    modes: Vec<usize>,
}

impl PhotonConfig {
    /// Sorts `modes`; rejects an empty list or mode 0.
    pub fn new(mut modes: Vec<usize>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Empty("photon number"));
        }
        if modes.contains(&0) {
            return Err(Error::ModeOutOfRange { index: 0, n: 0 });
        }
        modes.sort_unstable();
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn photon_number(&self) -> usize {
        self.modes.len()
    }

    /// Occupation counts of the distinct modes, in mode order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = 0;
        while k < self.modes.len() {
            let run = self.modes[k..].iter().take_while(|&&m| m == self.modes[k]).count();
            out.push(run);
            k += run;
        }
        out
    }

    /// `Π m!` over mode occupations; the rate weight is its inverse.
    pub fn c_denominator(&self) -> u64 {
        self.multiplicities()
            .into_iter()
            .map(crate::perm::factorial)
            .product()
    }

    /// `1 / Π m!`.
    pub fn c_factor(&self) -> f64 {
        1.0 / self.c_denominator() as f64
    }

    pub fn is_distinct(&self) -> bool {
        self.modes.windows(2).all(|w| w[0] != w[1])
    }

    pub fn max_mode(&self) -> usize {
        *self.modes.last().expect("non-empty")
    }

    pub(crate) fn zero_based(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m - 1).collect()
    }

    pub(crate) fn check_modes(&self, n: usize) -> Result<()> {
        match self.modes.iter().find(|&&m| m > n) {
            Some(&index) => Err(Error::ModeOutOfRange { index, n }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PhotonConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.modes.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Arrival times per input photon (positional, matching the sorted input
/// modes) and the Gaussian spectral width `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySpec {
    taus: Vec<f64>,
    s: f64,
}

impl DelaySpec {
    pub fn new(taus: Vec<f64>, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::BadDelays(format!("spectral width must be positive, got {s}")));
        }
        if taus.iter().any(|t| !t.is_finite()) {
            return Err(Error::BadDelays(format!("non-finite delay in {taus:?}")));
        }
        Ok(Self { taus, s })
    }

    /// Unit spectral width.
    pub fn with_taus(taus: Vec<f64>) -> Result<Self> {
        Self::new(taus, 1.0)
    }

    /// `n` photons, all arriving together.
    pub fn coincident(n: usize) -> Self {
        Self {
            taus: alloc::vec![0.0; n],
            s: 1.0,
        }
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn width(&self) -> f64 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn all_equal(&self) -> bool {
        self.taus.windows(2).all(|w| w[0] == w[1])
    }

    /// Wave-packet overlap weight `exp(-(s²/2) Σ (τ_a - τ_b)²)` for paired lists.
    pub(crate) fn overlap(&self, pairs: impl Iterator<Item = (usize, usize)>) -> f64 {
        let ss: f64 = pairs
            .map(|(a, b)| {
                let d = self.taus[a] - self.taus[b];
                d * d
            })
            .sum();
        crate::numeric::exp(-0.5 * self.s * self.s * ss)
    }

    pub(crate) fn check_len(&self, photons: usize) -> Result<()> {
        if self.taus.len() != photons {
            return Err(Error::DimensionMismatch(format!(
                "{} delays given for {} photons",
                self.taus.len(),
                photons
            )));
        }
        Ok(())
    }
}

/// Row `k` comes from `U` row `output.modes[k]`, column `k` from `U` column
/// `input.modes[k]`; repeated modes duplicate rows or columns.
pub fn scattering_submatrix(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
) -> Result<ComplexMatrix> {
    if input.photon_number() != output.photon_number() {
        return Err(Error::DimensionMismatch(format!(
            "{} input photons but {} output photons",
            input.photon_number(),
            output.photon_number()
        )));
    }
    input.check_modes(u.cols())?;
    output.check_modes(u.rows())?;
    Ok(u.select(&output.zero_based(), &input.zero_based()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64;

    fn cfg(m: &[usize]) -> PhotonConfig {
        PhotonConfig::new(m.to_vec()).unwrap()
    }

    fn labelled(n: usize) -> ComplexMatrix {
        // entry (r, c) = 10 r + c with 1-based labels
        ComplexMatrix::from_fn(n, n, |r, c| Complex64::new((10 * (r + 1) + c + 1) as f64, 0.0))
    }

    #[test]
    fn c_factors() {
        assert_eq!(cfg(&[1, 2, 4]).c_factor(), 1.0);
        assert_eq!(cfg(&[2, 2, 4]).c_factor(), 0.5);
        assert_eq!(cfg(&[1, 2, 1, 1, 2]).c_denominator(), 12);
        assert!(cfg(&[3, 1]).is_distinct());
        assert_eq!(cfg(&[3, 1]).modes(), &[1, 3]);
        assert!(PhotonConfig::new(vec![]).is_err());
        assert!(PhotonConfig::new(vec![0, 1]).is_err());
    }

    #[test]
    fn two_photon_submatrix() {
        let u = labelled(3);
        let s = scattering_submatrix(&u, &cfg(&[2, 3]), &cfg(&[1, 3])).unwrap();
        assert_eq!(s, ComplexMatrix::from_real_rows(&[&[12.0, 13.0], &[32.0, 33.0]]).unwrap());
    }

    #[test]
    fn duplicated_row_submatrix() {
        let u = labelled(4);
        let s = scattering_submatrix(&u, &cfg(&[2, 3, 4]), &cfg(&[2, 2, 4])).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[
            &[22.0, 23.0, 24.0],
            &[22.0, 23.0, 24.0],
            &[42.0, 43.0, 44.0],
        ])
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn identity_and_errors() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(
            scattering_submatrix(&i3, &cfg(&[1, 2]), &cfg(&[1, 2])).unwrap(),
            ComplexMatrix::identity(2)
        );
        assert!(matches!(
            scattering_submatrix(&i3, &cfg(&[1, 2]), &cfg(&[1])),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            scattering_submatrix(&i3, &cfg(&[1, 4]), &cfg(&[1, 2])),
            Err(Error::ModeOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn delay_validation() {
        assert!(DelaySpec::new(vec![0.0], 0.0).is_err());
        assert!(DelaySpec::new(vec![f64::NAN], 1.0).is_err());
        assert!(DelaySpec::coincident(3).all_equal());
        assert!(!DelaySpec::with_taus(vec![0.0, 1.0]).unwrap().all_equal());
    }
}
