//! Small floating-point helpers shared across modules.

use num_complex::Complex64;
use num_traits::Float;

pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    Float::exp(x)
}

pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    Float::sin_cos(x)
}

pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    Float::atan2(y, x)
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close_rel(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * rel_scale(a.norm(), b.norm())
}

/// Relative discrepancy `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / rel_scale(a.norm(), b.norm())
}

fn rel_scale(a: f64, b: f64) -> f64 {
    1.0f64.max(a).max(b)
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
