//! Batch verification of the sum rules over Haar-random matrices.

use std::time::Instant;

use serde::Serialize;
use sumrules_core::coset::Side;
use sumrules_core::{
    haar_unitary, is_lower_hessenberg, is_upper_hessenberg, permanent_hessenberg, permanent_ryser,
    scattering_submatrix, sum_over_inputs, sum_over_outputs, DelaySpec, Error, PhotonConfig, Result,
    SumSpec, HESSENBERG_TOL,
};

/// Repetitions per timed permanent; small matrices finish in nanoseconds.
const TIMING_REPEATS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    /// Coset submatrices that were Hessenberg and got timed both ways.
    pub terms: usize,
    pub ryser_ns_per_term: f64,
    pub det_ns_per_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub n: usize,
    pub trials: usize,
    pub photon_number: usize,
    pub max_output_discrepancy: f64,
    /// `None` when the input side was skipped.
    pub max_input_discrepancy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_skipped: Option<String>,
    /// Largest relative gap `|sum_full − sum_coset| / max(1, sum_full)`.
    pub max_relative_discrepancy: f64,
    /// Draws where some output-side term moved by more than `1e-3`.
    pub draws_with_differing_terms: usize,
    /// Only for coincident photons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ScanSummary {
    pub fn max_discrepancy(&self) -> f64 {
        self.max_output_discrepancy.max(self.max_input_discrepancy.unwrap_or(0.0))
    }
}

fn time_ns(mut f: impl FnMut()) -> f64 {
    let start = Instant::now();
    for _ in 0..TIMING_REPEATS {
        f();
    }
    start.elapsed().as_nanos() as f64 / f64::from(TIMING_REPEATS)
}

/// Runs the output-side and input-side sums on `trials` Haar matrices
/// drawn with seeds `seed, seed+1, ...`.
///
/// The photon number is `delays.len()`. The pinned configuration is the
/// last `photon_number` modes and the fixed mode is `n`. The input side
/// needs the photons in the varying modes to share a delay; other delay
/// patterns skip it and say so in `input_skipped`.
pub fn invariance_scan(n: usize, trials: usize, seed: u64, delays: &DelaySpec) -> Result<ScanSummary> {
    if !(3..=6).contains(&n) {
        return Err(Error::DimensionMismatch(format!("scan supports n in 3..=6, got {n}")));
    }
    let np = delays.len();
    if np == 0 || np > n {
        return Err(Error::DimensionMismatch(format!("{np} photons in {n} modes")));
    }
    let pinned = PhotonConfig::new((n + 1 - np..=n).collect())?;
    let taus = delays.taus();
    let input_side = taus[..np - 1].windows(2).all(|w| w[0] == w[1]);
    let mut summary = ScanSummary {
        n,
        trials,
        photon_number: np,
        max_output_discrepancy: 0.0,
        max_input_discrepancy: input_side.then_some(0.0),
        input_skipped: (!input_side)
            .then(|| "photons in the varying modes have different delays".to_string()),
        max_relative_discrepancy: 0.0,
        draws_with_differing_terms: 0,
        timing: None,
    };
    let coincident = delays.all_equal();
    let mut timed = 0usize;
    let (mut ryser_ns, mut det_ns) = (0.0, 0.0);
    for t in 0..trials {
        let u = haar_unitary(n, seed.wrapping_add(t as u64))?;
        let out = sum_over_outputs(&u, &pinned, &SumSpec::new(Side::Output, n, np, delays.clone()))?;
        let d = out.max_pairwise_discrepancy();
        summary.max_output_discrepancy = summary.max_output_discrepancy.max(d);
        summary.max_relative_discrepancy = summary.max_relative_discrepancy.max(d / out.sum_full.max(1.0));
        if out.max_term_discrepancy > 1e-3 {
            summary.draws_with_differing_terms += 1;
        }
        if input_side {
            let inp = sum_over_inputs(&u, &pinned, &SumSpec::new(Side::Input, n, np, delays.clone()))?;
            let d = inp.max_pairwise_discrepancy();
            summary.max_input_discrepancy = summary.max_input_discrepancy.map(|m| m.max(d));
            summary.max_relative_discrepancy = summary.max_relative_discrepancy.max(d / inp.sum_full.max(1.0));
        }
        if coincident {
            for term in &out.per_term_table {
                let s = scattering_submatrix(&out.coset, &pinned, &term.config)?;
                if !(is_upper_hessenberg(&s, HESSENBERG_TOL) || is_lower_hessenberg(&s, HESSENBERG_TOL)) {
                    continue;
                }
                let mut sink = 0.0;
                ryser_ns += time_ns(|| sink += permanent_ryser(&s).map_or(0.0, |p| p.re));
                det_ns += time_ns(|| {
                    sink += permanent_hessenberg(&s, HESSENBERG_TOL).map_or(0.0, |p| p.re)
                });
                std::hint::black_box(sink);
                timed += 1;
            }
        }
    }
    if coincident && timed > 0 {
        summary.timing = Some(Timing {
            terms: timed,
            ryser_ns_per_term: ryser_ns / timed as f64,
            det_ns_per_term: det_ns / timed as f64,
        });
    }
    Ok(summary)
}
