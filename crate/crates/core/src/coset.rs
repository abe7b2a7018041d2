//! Factorization of a scattering matrix into an SU(n−1) element acting on
//! modes `1..n−1` and a Hessenberg coset matrix.
//!
//! Output side: `U = R · Ū` with `Ū[i][i+k] = 0` for `k >= 2`.
//! Input side: `U = Ũ · R` with `Ũ[i+k][i] = 0` for `k >= 2`.
//!
//! `R` is returned as a list of two-mode rotations on adjacent modes, so
//! each factor is directly an optical element. Summed rates over the
//! detection (or source) modes `1..n−1` do not depend on `R`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{unitarity_defect, ComplexMatrix};
use crate::rotation::{compose, embed_rotation, ModeRotation};

/// Inputs whose unitarity defect exceeds this are flagged, not rejected.
pub const NONUNITARY_WARN: f64 = 1e-6;

/// Tolerance when checking a netlist against a factorization.
pub const NETLIST_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `U = R · Ū`; applies to sums over detection modes.
    Output,
    /// `U = Ũ · R`; applies to sums over source modes.
    Input,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Output => "output",
            Side::Input => "input",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FactorOptions {
    /// Fold an extra `R₁₂(0, π, 0)` into the coset so its first two rows
    /// (output side) or columns (input side) trade places, moving the zeros
    /// of row 1 to row 2.
    pub alternate_zero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosetFactorization {
    pub side: Side,
    /// Factors of `R` in left-to-right order; none touches mode `n`.
    pub rotations: Vec<ModeRotation>,
    pub coset: ComplexMatrix,
    /// Parameters of the removed SU(n−1), `(n−1)² − 1`.
    pub removed_parameter_count: usize,
    pub input_defect: f64,
    pub coset_defect: f64,
    pub alternate_zero: bool,
}

impl CosetFactorization {
    pub fn n(&self) -> usize {
        self.coset.rows()
    }

    /// `compose(rotations)`.
    pub fn subgroup_matrix(&self) -> ComplexMatrix {
        compose(&self.rotations, self.n()).expect("rotations fit by construction")
    }

    /// The factorized matrix rebuilt from its factors.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let r = self.subgroup_matrix();
        match self.side {
            Side::Output => &r * &self.coset,
            Side::Input => &self.coset * &r,
        }
    }

    /// Gross non-unitarity of the input; sum rules then still hold because
    /// the removed factor is unitary by construction.
    pub fn nonunitary_warning(&self) -> bool {
        self.input_defect > NONUNITARY_WARN
    }

    /// 1-based positions the coset is built to have zero.
    pub fn zero_positions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 2..=n {
                // (row, col) for the output pattern
                let mut rc = (i, j);
                if self.alternate_zero && rc.0 <= 2 {
                    rc.0 = 3 - rc.0;
                }
                out.push(match self.side {
                    Side::Output => rc,
                    Side::Input => (rc.1, rc.0),
                });
            }
        }
        out.sort_unstable();
        out
    }

    /// Largest modulus found at [`zero_positions`](Self::zero_positions).
    pub fn max_zero_residual(&self) -> f64 {
        self.zero_positions()
            .iter()
            .map(|&(r, c)| self.coset.get(r - 1, c - 1).norm())
            .fold(0.0, f64::max)
    }
}

fn removed_parameters(n: usize) -> usize {
    (n - 1) * (n - 1) - 1
}

/// Zeroes `m[i][j]` against `m[i+1][j]` (0-based) and returns the factor
/// `R` with `old m = R · new m`.
fn eliminate(m: &mut ComplexMatrix, i: usize, j: usize) -> ModeRotation {
    let x = m.get(i, j);
    let y = m.get(i + 1, j);
    if x == Complex64::new(0.0, 0.0) {
        return ModeRotation::identity(i + 1, i + 2);
    }
    let r = crate::numeric::sqrt(x.norm_sqr() + y.norm_sqr());
    // G = [[a, b], [-b̄, ā]] with a·x + b·y = 0 leaves r ≥ 0 in row i+1
    let a = y / r;
    let b = -x / r;
    let factor = ModeRotation::from_ab(i + 1, i + 2, a.conj(), -b);
    factor
        .inverse()
        .apply_left(m)
        .expect("adjacent modes inside the matrix");
    factor
}

fn output_elimination(u: &ComplexMatrix) -> (Vec<ModeRotation>, ComplexMatrix) {
    let n = u.rows();
    let mut m = u.clone();
    let mut rotations = Vec::new();
    // columns n..3, rows 1..j-2 top-down (1-based); each step pushes the
    // column's weight one row further down until it rests on row j-1
    for j in (2..n).rev() {
        for i in 0..j - 1 {
            rotations.push(eliminate(&mut m, i, j));
        }
    }
    (rotations, m)
}

fn check_input(u: &ComplexMatrix) -> Result<(usize, f64)> {
    let n = u.order()?;
    if n < 2 {
        return Err(Error::DimensionMismatch(alloc::format!(
            "coset factorization needs n >= 2, got {n}"
        )));
    }
    Ok((n, unitarity_defect(u)?))
}

fn swap_12() -> ModeRotation {
    ModeRotation::new(1, 2, 0.0, core::f64::consts::PI, 0.0)
}

pub fn factor_output_coset(u: &ComplexMatrix) -> Result<CosetFactorization> {
    factor_output_coset_with(u, FactorOptions::default())
}

/// `U = compose(rotations) · Ū` with `Ū` upper Hessenberg.
///
/// Columns `n` down to `3` are cleared above the superdiagonal by rotations
/// on adjacent row pairs `(i, i+1)` with `i+1 <= j−1`, so no rotation ever
/// touches mode `n`. The surviving entry of each step is left real and
/// non-negative. Exact zeros are skipped with an identity rotation, which
/// keeps the rotation count at `(n−1)(n−2)/2`.
pub fn factor_output_coset_with(
    u: &ComplexMatrix,
    opts: FactorOptions,
) -> Result<CosetFactorization> {
    let (n, input_defect) = check_input(u)?;
    let (mut rotations, mut coset) = output_elimination(u);
    if opts.alternate_zero {
        let p = swap_12();
        p.apply_left(&mut coset)?;
        rotations.push(p.inverse());
    }
    let coset_defect = unitarity_defect(&coset)?;
    Ok(CosetFactorization {
        side: Side::Output,
        rotations,
        coset,
        removed_parameter_count: removed_parameters(n),
        input_defect,
        coset_defect,
        alternate_zero: opts.alternate_zero,
    })
}

pub fn factor_input_coset(u: &ComplexMatrix) -> Result<CosetFactorization> {
    factor_input_coset_with(u, FactorOptions::default())
}

/// `U = Ũ · compose(rotations)` with `Ũ` lower Hessenberg, obtained from
/// the output-side elimination of `U†`.
pub fn factor_input_coset_with(
    u: &ComplexMatrix,
    opts: FactorOptions,
) -> Result<CosetFactorization> {
    let (n, input_defect) = check_input(u)?;
    let (adj_rotations, adj_coset) = output_elimination(&u.adjoint());
    let mut rotations: Vec<ModeRotation> =
        adj_rotations.iter().rev().map(ModeRotation::inverse).collect();
    let mut coset = adj_coset.adjoint();
    if opts.alternate_zero {
        let p = swap_12();
        coset = &coset * &embed_rotation(&p, n)?;
        rotations.insert(0, p.inverse());
    }
    let coset_defect = unitarity_defect(&coset)?;
    Ok(CosetFactorization {
        side: Side::Input,
        rotations,
        coset,
        removed_parameter_count: removed_parameters(n),
        input_defect,
        coset_defect,
        alternate_zero: opts.alternate_zero,
    })
}

/// Elements of `netlist` that the sum rule makes irrelevant.
///
/// The netlist is in composition order (`U = compose(netlist)`, light
/// entering on the right). For output-side sums these are the leading
/// elements confined to modes `1..n−1`: they act after everything else,
/// just before the detectors. For input-side sums, the trailing ones.
pub fn removed_elements(
    f: &CosetFactorization,
    netlist: &[ModeRotation],
) -> Result<Vec<ModeRotation>> {
    let n = f.n();
    let built = compose(netlist, n)?;
    let defect = built.max_abs_diff(&f.reconstruct())?;
    if defect > NETLIST_TOL {
        return Err(Error::NetlistMismatch { defect });
    }
    let confined = |r: &&ModeRotation| r.within(n - 1);
    Ok(match f.side {
        Side::Output => netlist.iter().take_while(confined).copied().collect(),
        Side::Input => {
            let mut tail: Vec<ModeRotation> =
                netlist.iter().rev().take_while(confined).copied().collect();
            tail.reverse();
            tail
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::haar_unitary;
    use crate::matfun::{is_lower_hessenberg, is_upper_hessenberg};
    use alloc::vec;

    #[test]
    fn identity_factorizes_trivially() {
        let f = factor_output_coset(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(f.coset, ComplexMatrix::identity(4));
        assert_eq!(f.rotations.len(), 3);
        assert!(f.rotations.iter().all(|r| r.alpha == 0.0 && r.beta == 0.0 && r.gamma == 0.0));
        assert_eq!(f.removed_parameter_count, 8);
        let g = factor_input_coset(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(g.coset, ComplexMatrix::identity(3));
    }

    #[test]
    fn three_mode_output_coset() {
        for seed in 0..10 {
            let u = haar_unitary(3, seed).unwrap();
            let f = factor_output_coset(&u).unwrap();
            assert_eq!(f.rotations.len(), 1);
            assert_eq!((f.rotations[0].mode_i, f.rotations[0].mode_j), (1, 2));
            assert!(f.coset.get(0, 2).norm() < 1e-12);
            assert!(f.reconstruct().max_abs_diff(&u).unwrap() < 1e-12);
            assert_eq!(f.removed_parameter_count, 3);
        }
    }

    #[test]
    fn four_mode_zero_pattern() {
        let u = haar_unitary(4, 17).unwrap();
        let f = factor_output_coset(&u).unwrap();
        for (r, c) in [(0, 2), (0, 3), (1, 3)] {
            assert!(f.coset.get(r, c).norm() < 1e-12);
        }
        assert_eq!(f.zero_positions(), vec![(1, 3), (1, 4), (2, 4)]);
        assert!(f.rotations.iter().all(|r| r.within(3)));
        assert!(f.subgroup_matrix().get(3, 3) == Complex64::new(1.0, 0.0));
    }

    #[test]
    fn input_coset_three_modes() {
        for seed in 0..10 {
            let u = haar_unitary(3, 50 + seed).unwrap();
            let f = factor_input_coset(&u).unwrap();
            assert!(f.coset.get(2, 0).norm() < 1e-12);
            assert!(f.reconstruct().max_abs_diff(&u).unwrap() < 1e-12);
            assert_eq!(f.zero_positions(), vec![(3, 1)]);
        }
    }

    #[test]
    fn input_zeros_mirror_output_zeros_of_transpose() {
        let u = haar_unitary(5, 4).unwrap();
        let fin = factor_input_coset(&u).unwrap();
        let fout = factor_output_coset(&u.transpose()).unwrap();
        let mirrored: Vec<_> = fout.zero_positions().iter().map(|&(r, c)| (c, r)).collect();
        let mut mirrored = mirrored;
        mirrored.sort_unstable();
        assert_eq!(fin.zero_positions(), mirrored);
        assert!(is_lower_hessenberg(&fin.coset, 1e-11));
        assert!(is_upper_hessenberg(&fout.coset, 1e-11));
    }

    #[test]
    fn factorization_invariants_across_sizes() {
        for n in 3..=6 {
            for seed in 0..5 {
                let u = haar_unitary(n, 1000 * n as u64 + seed).unwrap();
                for f in [factor_output_coset(&u).unwrap(), factor_input_coset(&u).unwrap()] {
                    assert!(f.reconstruct().max_abs_diff(&u).unwrap() < 1e-10);
                    assert!(f.max_zero_residual() < 1e-11);
                    assert!(f.rotations.iter().all(|r| r.mode_j < n));
                    assert!(f.coset_defect < 1e-10);
                    assert_eq!(f.removed_parameter_count, (n - 1) * (n - 1) - 1);
                    assert!(!f.nonunitary_warning());
                }
            }
        }
    }

    #[test]
    fn alternate_zero_moves_to_second_row() {
        let u = haar_unitary(3, 8).unwrap();
        let opts = FactorOptions { alternate_zero: true };
        let f = factor_output_coset_with(&u, opts).unwrap();
        assert!(f.coset.get(1, 2).norm() < 1e-12);
        assert!(f.coset.get(0, 2).norm() > 1e-3);
        assert_eq!(f.zero_positions(), vec![(2, 3)]);
        assert!(f.reconstruct().max_abs_diff(&u).unwrap() < 1e-12);
        let g = factor_input_coset_with(&u, opts).unwrap();
        assert_eq!(g.zero_positions(), vec![(3, 2)]);
        assert!(g.max_zero_residual() < 1e-12);
        assert!(g.reconstruct().max_abs_diff(&u).unwrap() < 1e-12);
    }

    #[test]
    fn nonunitary_input_is_flagged_not_rejected() {
        let m = haar_unitary(3, 2).unwrap().scale(Complex64::new(2.0, 0.0));
        let f = factor_output_coset(&m).unwrap();
        assert!(f.nonunitary_warning());
        assert!(f.coset.get(0, 2).norm() < 1e-12);
        assert!(f.reconstruct().max_abs_diff(&m).unwrap() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            factor_output_coset(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(factor_output_coset(&ComplexMatrix::identity(1)).is_err());
    }

    fn su3_netlist() -> Vec<ModeRotation> {
        vec![
            ModeRotation::new(1, 2, 0.4, 1.2, -0.3),
            ModeRotation::new(2, 3, 1.1, 0.7, 1.1),
            ModeRotation::new(1, 2, -0.8, 2.1, 0.5),
        ]
    }

    #[test]
    fn removed_elements_su3() {
        let net = su3_netlist();
        let u = compose(&net, 3).unwrap();
        let out = removed_elements(&factor_output_coset(&u).unwrap(), &net).unwrap();
        assert_eq!(out, vec![net[0]]);
        let inp = removed_elements(&factor_input_coset(&u).unwrap(), &net).unwrap();
        assert_eq!(inp, vec![net[2]]);
    }

    #[test]
    fn removed_elements_su4_triangle() {
        let net = vec![
            ModeRotation::new(1, 2, 0.1, 0.9, 0.2),
            ModeRotation::new(2, 3, 0.3, 1.4, -0.6),
            ModeRotation::new(1, 2, 1.0, 0.5, 0.7),
            ModeRotation::new(3, 4, -0.2, 2.2, 0.9),
            ModeRotation::new(2, 3, 0.6, 1.0, 0.1),
            ModeRotation::new(1, 2, -1.3, 0.8, 0.4),
        ];
        let u = compose(&net, 4).unwrap();
        let out = removed_elements(&factor_output_coset(&u).unwrap(), &net).unwrap();
        assert_eq!(out, net[..3].to_vec());
    }

    #[test]
    fn removed_elements_rejects_wrong_netlist() {
        let net = su3_netlist();
        let u = haar_unitary(3, 1).unwrap();
        assert!(matches!(
            removed_elements(&factor_output_coset(&u).unwrap(), &net),
            Err(Error::NetlistMismatch { .. })
        ));
    }
}
