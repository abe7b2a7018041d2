//! Weighted sums of rates over configuration families with one photon
//! pinned to a fixed mode, evaluated for `U` and for its coset matrix.
//!
//! Every per-term rate already carries its `c` weight, so a sum here is the
//! plain sum of the rates returned by [`crate::rates`].

use alloc::format;
use alloc::vec::Vec;

use crate::coset::{factor_input_coset, factor_output_coset, Side};
use crate::error::{Error, Result};
use crate::matfun::permanent_ryser;
use crate::matrix::ComplexMatrix;
use crate::numeric::CompensatedSum;
use crate::photons::{scattering_submatrix, DelaySpec, PhotonConfig};
use crate::rates::{permanent_auto, rate, RateMethod};

pub use crate::rates::PermanentPath;

/// Default acceptance bound: `|sum_full − sum_coset| <= SUM_TOL · max(1, sum_full)`.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SumSpec {
    pub side: Side,
    /// The mode that always holds one photon; every other mode varies.
    pub fixed_mode: usize,
    pub photon_number: usize,
    /// Output side: positional over the sorted input modes.
    /// Input side: the varying photons first (they must share one delay),
    /// the photon in `fixed_mode` last.
    pub delays: DelaySpec,
}

impl SumSpec {
    pub fn new(side: Side, fixed_mode: usize, photon_number: usize, delays: DelaySpec) -> Self {
        Self {
            side,
            fixed_mode,
            photon_number,
            delays,
        }
    }

    /// All photons together, fixed mode `n`.
    pub fn coincident(side: Side, n: usize, photon_number: usize) -> Self {
        Self::new(side, n, photon_number, DelaySpec::coincident(photon_number))
    }

    /// Modes other than `fixed_mode`, ascending.
    pub fn varying_modes(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&m| m != self.fixed_mode).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumTerm {
    /// The summed-over configuration (an output on the output side, an
    /// input on the input side).
    pub config: PhotonConfig,
    pub rate_full: f64,
    pub rate_coset: f64,
    /// Coset rate with the permanent taken through the Hessenberg
    /// determinant wherever the submatrix allows it; only for coincident
    /// photons.
    pub rate_coset_det: Option<f64>,
    /// Route used for `rate_coset_det`.
    pub path: Option<PermanentPath>,
    /// Route used for `rate_full` and `rate_coset` when photons are not all
    /// coincident.
    pub method: RateMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumReport {
    pub side: Side,
    pub fixed_mode: usize,
    pub sum_full: f64,
    pub sum_coset: f64,
    pub sum_coset_det: Option<f64>,
    pub per_term_table: Vec<SumTerm>,
    /// Largest `|rate_full − rate_coset|` over the terms.
    pub max_term_discrepancy: f64,
    /// `HessenbergDet` when at least one coset term went through the
    /// determinant, `Ryser` when none could; `None` for partially
    /// distinguishable photons.
    pub method: Option<PermanentPath>,
    pub coset: ComplexMatrix,
}

impl SumReport {
    /// `|sum_full − sum_coset|`.
    pub fn discrepancy(&self) -> f64 {
        (self.sum_full - self.sum_coset).abs()
    }

    /// Largest pairwise gap among the available sums.
    pub fn max_pairwise_discrepancy(&self) -> f64 {
        let mut d = self.discrepancy();
        if let Some(det) = self.sum_coset_det {
            d = d.max((det - self.sum_full).abs()).max((det - self.sum_coset).abs());
        }
        d
    }

    /// Whether every available pair of sums agrees within
    /// `tol · max(1, |sum_full|)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.max_pairwise_discrepancy() <= tol * self.sum_full.abs().max(1.0)
    }

    pub fn det_terms(&self) -> usize {
        self.per_term_table
            .iter()
            .filter(|t| t.path == Some(PermanentPath::HessenbergDet))
            .count()
    }
}

/// Non-decreasing multisets of `photon_number − 1` modes drawn from the
/// modes other than `fixed_mode`, each completed with `fixed_mode`.
/// Ordered lexicographically by the varying part.
pub fn enumerate_outputs(n: usize, photon_number: usize, fixed_mode: usize) -> Result<Vec<PhotonConfig>> {
    if photon_number == 0 {
        return Err(Error::Empty("photon number"));
    }
    if fixed_mode == 0 || fixed_mode > n {
        return Err(Error::ModeOutOfRange { index: fixed_mode, n });
    }
    let varying: Vec<usize> = (1..=n).filter(|&m| m != fixed_mode).collect();
    let k = photon_number - 1;
    let mut out = Vec::new();
    if k > 0 && varying.is_empty() {
        return Ok(out);
    }
    // odometer over non-decreasing index tuples
    let mut idx = alloc::vec![0usize; k];
    loop {
        let mut modes: Vec<usize> = idx.iter().map(|&i| varying[i]).collect();
        modes.push(fixed_mode);
        out.push(PhotonConfig::new(modes)?);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] + 1 < varying.len()) else {
            break;
        };
        let v = idx[pos] + 1;
        idx[pos..].iter_mut().for_each(|i| *i = v);
    }
    Ok(out)
}

/// Same family as [`enumerate_outputs`], read as source configurations.
pub fn enumerate_inputs(n: usize, photon_number: usize, fixed_mode: usize) -> Result<Vec<PhotonConfig>> {
    enumerate_outputs(n, photon_number, fixed_mode)
}

fn swap_order(n: usize, fixed: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.swap(fixed - 1, n - 1);
    order
}

fn check_spec(u: &ComplexMatrix, spec: &SumSpec, side: Side, pinned: &PhotonConfig) -> Result<usize> {
    let n = u.order()?;
    if spec.side != side {
        return Err(Error::BadSumSpec(format!(
            "spec is for the {} side, called for the {} side",
            spec.side.as_str(),
            side.as_str()
        )));
    }
    if n < 2 {
        return Err(Error::DimensionMismatch(format!("sum rules need n >= 2, got {n}")));
    }
    if spec.fixed_mode == 0 || spec.fixed_mode > n {
        return Err(Error::ModeOutOfRange {
            index: spec.fixed_mode,
            n,
        });
    }
    if spec.photon_number == 0 {
        return Err(Error::Empty("photon number"));
    }
    if pinned.photon_number() != spec.photon_number {
        return Err(Error::DimensionMismatch(format!(
            "spec has {} photons but the fixed configuration ({pinned}) has {}",
            spec.photon_number,
            pinned.photon_number()
        )));
    }
    pinned.check_modes(n)?;
    spec.delays.check_len(spec.photon_number)?;
    Ok(n)
}

/// `c_out · c_in · |Per S|²` with the permanent always through Ryser.
fn ryser_rate(u: &ComplexMatrix, input: &PhotonConfig, output: &PhotonConfig) -> Result<f64> {
    let s = scattering_submatrix(u, input, output)?;
    Ok(output.c_factor() * input.c_factor() * permanent_ryser(&s)?.norm_sqr())
}

fn auto_rate(u: &ComplexMatrix, input: &PhotonConfig, output: &PhotonConfig) -> Result<(f64, PermanentPath)> {
    let s = scattering_submatrix(u, input, output)?;
    let (per, path) = permanent_auto(&s)?;
    Ok((output.c_factor() * input.c_factor() * per.norm_sqr(), path))
}

/// Each entry of `family` is a summed-over configuration with its delays;
/// `pinned` is the configuration held fixed on the other side.
fn evaluate(
    u: &ComplexMatrix,
    coset: ComplexMatrix,
    spec: &SumSpec,
    pinned: &PhotonConfig,
    family: Vec<(PhotonConfig, DelaySpec)>,
) -> Result<SumReport> {
    let coincident = spec.delays.all_equal();
    let mut terms = Vec::with_capacity(family.len());
    for (config, delays) in &family {
        let (input, output) = match spec.side {
            Side::Output => (pinned, config),
            Side::Input => (config, pinned),
        };
        let term = if coincident {
            let (det, path) = auto_rate(&coset, input, output)?;
            SumTerm {
                config: config.clone(),
                rate_full: ryser_rate(u, input, output)?,
                rate_coset: ryser_rate(&coset, input, output)?,
                rate_coset_det: Some(det),
                path: Some(path),
                method: RateMethod::Indistinguishable(PermanentPath::Ryser),
            }
        } else {
            let full = rate(u, input, output, delays)?;
            let cos = rate(&coset, input, output, delays)?;
            SumTerm {
                config: config.clone(),
                rate_full: full.value,
                rate_coset: cos.value,
                rate_coset_det: None,
                path: None,
                method: full.method,
            }
        };
        terms.push(term);
    }
    let sum_full: CompensatedSum = terms.iter().map(|t| t.rate_full).collect();
    let sum_coset: CompensatedSum = terms.iter().map(|t| t.rate_coset).collect();
    let sum_coset_det = coincident.then(|| {
        terms
            .iter()
            .map(|t| t.rate_coset_det.unwrap_or(0.0))
            .collect::<CompensatedSum>()
            .value()
    });
    let method = coincident.then(|| {
        if terms.iter().any(|t| t.path == Some(PermanentPath::HessenbergDet)) {
            PermanentPath::HessenbergDet
        } else {
            PermanentPath::Ryser
        }
    });
    let max_term_discrepancy = terms
        .iter()
        .map(|t| (t.rate_full - t.rate_coset).abs())
        .fold(0.0, f64::max);
    Ok(SumReport {
        side: spec.side,
        fixed_mode: spec.fixed_mode,
        sum_full: sum_full.value(),
        sum_coset: sum_coset.value(),
        sum_coset_det,
        per_term_table: terms,
        max_term_discrepancy,
        method,
        coset,
    })
}

/// `Σ_x̄ R(input → x̄ ∪ {fixed})` for `U` and for its output-side coset.
///
/// A fixed mode other than `n` is handled by swapping it with mode `n`
/// before factorizing and swapping back afterwards, so the coset zeros
/// sit in the rows of the varying modes.
pub fn sum_over_outputs(u: &ComplexMatrix, input: &PhotonConfig, spec: &SumSpec) -> Result<SumReport> {
    let n = check_spec(u, spec, Side::Output, input)?;
    let swap = swap_order(n, spec.fixed_mode);
    let coset = factor_output_coset(&u.permute_rows(&swap))?.coset.permute_rows(&swap);
    let family = enumerate_outputs(n, spec.photon_number, spec.fixed_mode)?
        .into_iter()
        .map(|c| (c, spec.delays.clone()))
        .collect();
    evaluate(u, coset, spec, input, family)
}

/// `Σ_x̄ R(x̄ ∪ {fixed} → output)` for `U` and for its input-side coset.
///
/// The sum is only invariant when the photons entering the varying modes
/// are mutually indistinguishable, so their delays must agree.
pub fn sum_over_inputs(u: &ComplexMatrix, output: &PhotonConfig, spec: &SumSpec) -> Result<SumReport> {
    let n = check_spec(u, spec, Side::Input, output)?;
    let taus = spec.delays.taus();
    let (varying, fixed) = taus.split_at(taus.len() - 1);
    if varying.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::BadSumSpec(format!(
            "input-side sums need one common delay for the photons in the varying modes, got {varying:?}"
        )));
    }
    let tau_var = varying.first().copied().unwrap_or(0.0);
    let tau_fixed = fixed[0];
    let swap = swap_order(n, spec.fixed_mode);
    let coset = factor_input_coset(&u.permute_columns(&swap))?.coset.permute_columns(&swap);
    // delays are positional over each configuration's sorted modes
    let family = enumerate_inputs(n, spec.photon_number, spec.fixed_mode)?
        .into_iter()
        .map(|c| {
            let t = c
                .modes()
                .iter()
                .map(|&m| if m == spec.fixed_mode { tau_fixed } else { tau_var })
                .collect();
            Ok((c, DelaySpec::new(t, spec.delays.width())?))
        })
        .collect::<Result<_>>()?;
    evaluate(u, coset, spec, output, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::haar_unitary;
    use alloc::vec;
    use alloc::vec::Vec;

    fn cfg(m: &[usize]) -> PhotonConfig {
        PhotonConfig::new(m.to_vec()).unwrap()
    }

    fn mode_lists(v: &[PhotonConfig]) -> Vec<Vec<usize>> {
        v.iter().map(|c| c.modes().to_vec()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(mode_lists(&enumerate_outputs(3, 2, 3).unwrap()), vec![vec![1, 3], vec![2, 3]]);
        let mut four = mode_lists(&enumerate_outputs(4, 3, 4).unwrap());
        four.sort();
        assert_eq!(
            four,
            vec![
                vec![1, 1, 4],
                vec![1, 2, 4],
                vec![1, 3, 4],
                vec![2, 2, 4],
                vec![2, 3, 4],
                vec![3, 3, 4]
            ]
        );
        assert_eq!(mode_lists(&enumerate_outputs(2, 1, 2).unwrap()), vec![vec![2]]);
        assert_eq!(mode_lists(&enumerate_outputs(3, 2, 1).unwrap()), vec![vec![1, 2], vec![1, 3]]);
        assert!(matches!(enumerate_outputs(3, 2, 4), Err(Error::ModeOutOfRange { .. })));
        assert!(enumerate_outputs(3, 0, 3).is_err());
    }

    #[test]
    fn enumeration_counts_are_binomial() {
        // C(n-2 + k, k) multisets of size k over n-1 modes
        for n in 2..=6 {
            for np in 1..=4 {
                let k = np - 1;
                let mut expect = 1u64;
                for i in 0..k as u64 {
                    expect = expect * (n as u64 - 1 + i) / (i + 1);
                }
                assert_eq!(enumerate_outputs(n, np, n).unwrap().len() as u64, expect);
            }
        }
    }

    #[test]
    fn output_sum_n3_coincident() {
        let u = haar_unitary(3, 9).unwrap();
        let spec = SumSpec::coincident(Side::Output, 3, 2);
        let r = sum_over_outputs(&u, &cfg(&[2, 3]), &spec).unwrap();
        assert_eq!(r.per_term_table.len(), 2);
        assert!(r.discrepancy() < 1e-10);
        assert!(r.max_term_discrepancy > 1e-3);
        assert!(r.holds(1e-10));
    }

    #[test]
    fn output_sum_n3_delayed() {
        let u = haar_unitary(3, 10).unwrap();
        let spec = SumSpec::new(Side::Output, 3, 2, DelaySpec::new(vec![0.0, 0.7], 1.3).unwrap());
        let r = sum_over_outputs(&u, &cfg(&[2, 3]), &spec).unwrap();
        assert!(r.discrepancy() < 1e-10);
        assert_eq!(r.sum_coset_det, None);
        assert_eq!(r.method, None);
    }

    #[test]
    fn output_sum_n4_three_ways() {
        let u = haar_unitary(4, 2).unwrap();
        let spec = SumSpec::coincident(Side::Output, 4, 3);
        let r = sum_over_outputs(&u, &cfg(&[2, 3, 4]), &spec).unwrap();
        assert_eq!(r.per_term_table.len(), 6);
        assert!(r.max_pairwise_discrepancy() < 1e-10);
        assert_eq!(r.method, Some(PermanentPath::HessenbergDet));
        assert!(r.det_terms() > 0);
    }

    #[test]
    fn identity_leaves_one_term() {
        let u = ComplexMatrix::identity(3);
        let r = sum_over_outputs(&u, &cfg(&[2, 3]), &SumSpec::coincident(Side::Output, 3, 2)).unwrap();
        assert!((r.sum_full - 1.0).abs() < 1e-15);
        assert_eq!(r.per_term_table.iter().filter(|t| t.rate_full > 0.0).count(), 1);
        let r = sum_over_inputs(&u, &cfg(&[2, 3]), &SumSpec::coincident(Side::Input, 3, 2)).unwrap();
        assert!((r.sum_full - 1.0).abs() < 1e-15);
    }

    #[test]
    fn input_sum_n3() {
        for seed in 0..10 {
            let u = haar_unitary(3, 300 + seed).unwrap();
            let spec = SumSpec::new(Side::Input, 3, 2, DelaySpec::new(vec![0.4, -0.9], 0.8).unwrap());
            let r = sum_over_inputs(&u, &cfg(&[2, 3]), &spec).unwrap();
            assert_eq!(mode_lists(&r.per_term_table.iter().map(|t| t.config.clone()).collect::<Vec<_>>()), vec![vec![1, 3], vec![2, 3]]);
            assert!(r.discrepancy() < 1e-10, "{}", r.discrepancy());
        }
    }

    #[test]
    fn input_sum_three_photons_shared_delay() {
        let u = haar_unitary(4, 77).unwrap();
        let spec = SumSpec::new(Side::Input, 4, 3, DelaySpec::new(vec![0.2, 0.2, 1.1], 1.0).unwrap());
        let r = sum_over_inputs(&u, &cfg(&[1, 2, 4]), &spec).unwrap();
        assert!(r.discrepancy() < 1e-10, "{}", r.discrepancy());
    }

    #[test]
    fn input_sum_rejects_split_delays() {
        let u = haar_unitary(4, 1).unwrap();
        let spec = SumSpec::new(Side::Input, 4, 3, DelaySpec::new(vec![0.0, 0.5, 0.0], 1.0).unwrap());
        assert!(matches!(
            sum_over_inputs(&u, &cfg(&[1, 2, 4]), &spec),
            Err(Error::BadSumSpec(_))
        ));
    }

    #[test]
    fn other_fixed_modes() {
        let u = haar_unitary(4, 5).unwrap();
        for fixed in 1..=4 {
            let spec = SumSpec::new(Side::Output, fixed, 3, DelaySpec::new(vec![0.0, 0.0, 0.6], 1.0).unwrap());
            let r = sum_over_outputs(&u, &cfg(&[1, 3, 4]), &spec).unwrap();
            assert!(r.discrepancy() < 1e-10, "fixed {fixed}: {}", r.discrepancy());
            assert!(r.per_term_table.iter().all(|t| t.config.modes().contains(&fixed)));
            let spec = SumSpec::coincident(Side::Input, fixed, 3);
            let spec = SumSpec { fixed_mode: fixed, ..spec };
            let r = sum_over_inputs(&u, &cfg(&[2, 2, 3]), &spec).unwrap();
            assert!(r.max_pairwise_discrepancy() < 1e-10, "fixed {fixed}");
        }
    }

    #[test]
    fn spec_errors() {
        let u = haar_unitary(3, 0).unwrap();
        let out = SumSpec::coincident(Side::Output, 3, 2);
        assert!(matches!(
            sum_over_inputs(&u, &cfg(&[1, 3]), &out),
            Err(Error::BadSumSpec(_))
        ));
        assert!(matches!(
            sum_over_outputs(&u, &cfg(&[1, 2, 3]), &out),
            Err(Error::DimensionMismatch(_))
        ));
        let bad = SumSpec { fixed_mode: 5, ..out.clone() };
        assert!(matches!(
            sum_over_outputs(&u, &cfg(&[1, 3]), &bad),
            Err(Error::ModeOutOfRange { .. })
        ));
        let short = SumSpec { delays: DelaySpec::coincident(1), ..out };
        assert!(matches!(
            sum_over_outputs(&u, &cfg(&[1, 3]), &short),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
