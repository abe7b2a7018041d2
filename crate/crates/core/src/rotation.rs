//! Two-mode SU(2) elements embedded in an n-mode interferometer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::numeric::{atan2, sin_cos};

/// An SU(2) element mixing modes `mode_i < mode_j` (1-based).
///
/// With `a = e^{-i(α+γ)/2} cos(β/2)` and `b = -e^{-i(α-γ)/2} sin(β/2)`
/// the 2x2 block on rows/columns `(i, j)` is
///
/// ```text
/// [  a    b  ]
/// [ -b̄    ā  ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRotation {
    pub mode_i: usize,
    pub mode_j: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ModeRotation {
    pub fn new(mode_i: usize, mode_j: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            mode_i,
            mode_j,
            alpha,
            beta,
            gamma,
        }
    }

    pub fn identity(mode_i: usize, mode_j: usize) -> Self {
        Self::new(mode_i, mode_j, 0.0, 0.0, 0.0)
    }

    /// Entries `(a, b)` of the block described on the type.
    pub fn ab(&self) -> (Complex64, Complex64) {
        let (sb, cb) = sin_cos(self.beta / 2.0);
        let a = Complex64::from_polar(cb, -(self.alpha + self.gamma) / 2.0);
        let b = -Complex64::from_polar(sb, -(self.alpha - self.gamma) / 2.0);
        (a, b)
    }

    pub fn block(&self) -> [[Complex64; 2]; 2] {
        let (a, b) = self.ab();
        [[a, b], [-b.conj(), a.conj()]]
    }

    /// The inverse element `R(-γ, -β, -α)` on the same modes.
    pub fn inverse(&self) -> Self {
        Self::new(self.mode_i, self.mode_j, -self.gamma, -self.beta, -self.alpha)
    }

    /// Recover angles from an SU(2) block given by its first row `(a, b)`.
    ///
    /// `β` lands in `[0, π]`. When `a` or `b` vanishes only one of `α ± γ`
    /// is determined and the other combination is set to zero.
    pub fn from_ab(mode_i: usize, mode_j: usize, a: Complex64, b: Complex64) -> Self {
        let beta = 2.0 * atan2(b.norm(), a.norm());
        let sum = if a.norm() > 0.0 { -2.0 * a.arg() } else { 0.0 };
        let diff = if b.norm() > 0.0 { -2.0 * (-b).arg() } else { 0.0 };
        Self::new(mode_i, mode_j, (sum + diff) / 2.0, beta, (sum - diff) / 2.0)
    }

    /// True when the element touches only modes `1..=limit`.
    pub fn within(&self, limit: usize) -> bool {
        self.mode_j <= limit
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.mode_i == 0 || self.mode_i >= self.mode_j {
            return Err(Error::BadRotationModes {
                i: self.mode_i,
                j: self.mode_j,
            });
        }
        if self.mode_j > n {
            return Err(Error::ModeOutOfRange {
                index: self.mode_j,
                n,
            });
        }
        Ok(())
    }

    /// Left-multiply `m` in place by this element.
    pub fn apply_left(&self, m: &mut ComplexMatrix) -> Result<()> {
        self.check(m.rows())?;
        m.apply_rows(self.mode_i - 1, self.mode_j - 1, self.block());
        Ok(())
    }
}

/// Identity except for the rotation's 2x2 block.
pub fn embed_rotation(rot: &ModeRotation, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Empty("mode count"));
    }
    let mut m = ComplexMatrix::identity(n);
    rot.apply_left(&mut m)?;
    Ok(m)
}

/// `R(seq[0]) · R(seq[1]) · …`; the identity for an empty sequence.
pub fn compose(seq: &[ModeRotation], n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Empty("mode count"));
    }
    let mut m = ComplexMatrix::identity(n);
    for rot in seq.iter().rev() {
        rot.apply_left(&mut m)?;
    }
    Ok(m)
}
