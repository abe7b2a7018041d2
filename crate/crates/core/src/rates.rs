//! Coincidence rates for fully and partially distinguishable photons.
//!
//! Every rate carries the output weight `c = 1 / Π m!` for repeated
//! detection modes, so the physical total probability over all output
//! multisets is one. Inputs with repeated modes are normalized by the
//! norm of the input state, which is `Π m!` when the photons sharing a
//! mode also share a delay.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::{
    determinant, immanant, is_lower_hessenberg, is_upper_hessenberg, permanent_hessenberg,
    permanent_ryser, HESSENBERG_TOL,
};
use crate::matrix::ComplexMatrix;
use crate::numeric::exp;
use crate::partition::Partition;
use crate::perm::{factorial, for_each_permutation};
use crate::photons::{scattering_submatrix, DelaySpec, PhotonConfig};

/// Largest photon number for the double permutation sum.
pub const MAX_ORACLE_PHOTONS: usize = 7;

/// Largest photon number for [`rate_indistinguishable`].
pub const MAX_INDISTINGUISHABLE_PHOTONS: usize = 20;

/// Negative rates above this are rounding noise and are zeroed silently.
pub const NEGATIVE_RATE_TOL: f64 = 1e-12;

/// How a permanent was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermanentPath {
    Ryser,
    HessenbergDet,
}

impl PermanentPath {
    pub fn as_str(self) -> &'static str {
        match self {
            PermanentPath::Ryser => "ryser",
            PermanentPath::HessenbergDet => "hessenberg_det",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    Indistinguishable(PermanentPath),
    TwoPhoton,
    /// Doubled detection mode, permanent plus `(2,1)` immanant.
    ThreePhotonDoubled,
    /// Three per-slot amplitudes built from `(2,1)` immanants.
    ThreePhotonSlots,
    Oracle,
}

impl RateMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RateMethod::Indistinguishable(p) => p.as_str(),
            RateMethod::TwoPhoton => "two_photon",
            RateMethod::ThreePhotonDoubled => "three_photon_doubled",
            RateMethod::ThreePhotonSlots => "three_photon_slots",
            RateMethod::Oracle => "oracle",
        }
    }
}

/// A named amplitude that entered a closed-form rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude {
    pub label: String,
    pub value: Complex64,
}

impl Amplitude {
    fn new(label: impl Into<String>, value: Complex64) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }

    fn immanant(lambda: &Partition, value: Complex64) -> Self {
        Self::new(format!("imm{lambda}"), value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    /// Non-negative rate.
    pub value: f64,
    /// Value before clamping.
    pub raw: f64,
    /// Set when `raw` was below `-NEGATIVE_RATE_TOL` and got clamped.
    pub clamped: bool,
    pub method: RateMethod,
    pub decomposition: Vec<Amplitude>,
    pub notice: Option<String>,
}

impl RateResult {
    fn new(raw: f64, method: RateMethod, decomposition: Vec<Amplitude>) -> Self {
        Self {
            value: raw.max(0.0),
            raw,
            clamped: raw < -NEGATIVE_RATE_TOL,
            method,
            decomposition,
            notice: None,
        }
    }
}

fn visibility(delays: &DelaySpec, a: usize, b: usize) -> f64 {
    let s = delays.width();
    let d = delays.taus()[a] - delays.taus()[b];
    exp(-s * s * d * d)
}

fn require_photons(input: &PhotonConfig, output: &PhotonConfig, n: usize, what: &str) -> Result<()> {
    if input.photon_number() != n || output.photon_number() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} needs {n} input and output photons, got {} and {}",
            input.photon_number(),
            output.photon_number()
        )));
    }
    if !input.is_distinct() {
        return Err(Error::Unsupported(format!(
            "{what} needs distinct input modes, got ({input})"
        )));
    }
    Ok(())
}

/// Two photons with delay `τ₁₂`:
/// `c·[½(1+e^{-s²τ²})|Per S|² + ½(1−e^{-s²τ²})|Det S|²]`.
pub fn rate_two_photon(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
    delays: &DelaySpec,
) -> Result<RateResult> {
    require_photons(input, output, 2, "two-photon rate")?;
    delays.check_len(2)?;
    let s = scattering_submatrix(u, input, output)?;
    let per = s.get(0, 0) * s.get(1, 1) + s.get(0, 1) * s.get(1, 0);
    let det = determinant(&s)?;
    let e = visibility(delays, 0, 1);
    let raw =
        output.c_factor() * (0.5 * (1.0 + e) * per.norm_sqr() + 0.5 * (1.0 - e) * det.norm_sqr());
    Ok(RateResult::new(
        raw,
        RateMethod::TwoPhoton,
        alloc::vec![
            Amplitude::immanant(&Partition::row(2), per),
            Amplitude::immanant(&Partition::column(2), det),
        ],
    ))
}

/// Column order `[a, b, odd]` putting the photon whose delay differs last,
/// or `None` when all three delays differ.
fn odd_photon_last(taus: &[f64]) -> Option<[usize; 3]> {
    if taus[0] == taus[1] {
        Some([0, 1, 2])
    } else if taus[0] == taus[2] {
        Some([0, 2, 1])
    } else if taus[1] == taus[2] {
        Some([1, 2, 0])
    } else {
        None
    }
}

/// Three photons where two arrive together and the third is delayed.
///
/// With the delayed photon's column last, the double permutation sum groups
/// by the row `p` that receives the delayed photon. Writing `G_p` for the
/// sum of the two terms in group `p`, the rate is
/// `c·[Σ|G_p|² + e^{-s²τ²} Σ_{p≠q} G_p* G_q]`, and the `G_p` are the
/// immanant combinations
///
/// ```text
/// G_1 = ⅓(Per − Imm(M₁₃₂) − Imm(M₂₁₃) + Imm(M₃₁₂))
/// G_2 = ⅓(Per − Imm(M)    + Imm(M₁₃₂) − Imm(M₃₁₂))
/// G_3 = ⅓(Per + Imm(M)    + Imm(M₂₁₃))
/// ```
///
/// where `M_abc` lists the columns of `M` in the order `a, b, c` and `Imm`
/// is the `(2,1)` immanant. When two detections share a mode the
/// rate reduces to `c·[⅓(1+2e)|Per|² + ⅔(1−e)|Imm(M)|²]` with the repeated
/// rows first.
///
/// If all three delays differ this falls back to [`rate_oracle`] and sets
/// `notice`.
pub fn rate_three_photon_partial(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
    delays: &DelaySpec,
) -> Result<RateResult> {
    require_photons(input, output, 3, "three-photon rate")?;
    delays.check_len(3)?;
    let Some(cols) = odd_photon_last(delays.taus()) else {
        let value = rate_oracle(u, input, output, delays)?;
        let mut r = RateResult::new(value, RateMethod::Oracle, Vec::new());
        r.notice = Some("all three delays differ; evaluated with the permutation-sum oracle".to_string());
        return Ok(r);
    };
    let e = visibility(delays, cols[0], cols[2]);
    let c = output.c_factor();
    let s = scattering_submatrix(u, input, output)?.permute_columns(&cols);
    let per = permanent_ryser(&s)?;
    let mixed = Partition::new(alloc::vec![2, 1]).expect("valid");
    let imm = |order: &[usize]| immanant(&s.permute_columns(order), &mixed);

    let multiplicities = output.multiplicities();
    if multiplicities.len() == 2 {
        // one mode detected twice: bring the repeated rows to the top
        let m = output.modes();
        let rows = if m[0] == m[1] { [0, 1, 2] } else { [1, 2, 0] };
        let t = s.permute_rows(&rows);
        let imm21 = immanant(&t, &mixed)?;
        let raw = c
            * ((1.0 + 2.0 * e) / 3.0 * per.norm_sqr()
                + 2.0 * (1.0 - e) / 3.0 * imm21.norm_sqr());
        return Ok(RateResult::new(
            raw,
            RateMethod::ThreePhotonDoubled,
            alloc::vec![
                Amplitude::immanant(&Partition::row(3), per),
                Amplitude::immanant(&mixed, imm21),
            ],
        ));
    }

    let i_id = imm(&[0, 1, 2])?;
    let i_132 = imm(&[0, 2, 1])?;
    let i_213 = imm(&[1, 0, 2])?;
    let i_312 = imm(&[2, 0, 1])?;
    let a = (per - i_132 - i_213 + i_312) / 3.0;
    let b = (per - i_id + i_132 - i_312) / 3.0;
    let g = (per + i_id + i_213) / 3.0;
    let cross = (a + b).conj() * g + (b + g).conj() * a + (g + a).conj() * b;
    let raw = c * (a.norm_sqr() + b.norm_sqr() + g.norm_sqr() + e * cross.re);
    Ok(RateResult::new(
        raw,
        RateMethod::ThreePhotonSlots,
        alloc::vec![
            Amplitude::immanant(&Partition::row(3), per),
            Amplitude::new("A", a),
            Amplitude::new("B", b),
            Amplitude::new("C", g),
        ],
    ))
}

/// Fully indistinguishable photons: `c_out · c_in · |Per S|²`.
///
/// The permanent goes through the Hessenberg determinant when `S` has
/// either Hessenberg zero pattern, otherwise through Ryser.
pub fn rate_indistinguishable(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
) -> Result<RateResult> {
    if input.photon_number() > MAX_INDISTINGUISHABLE_PHOTONS {
        return Err(Error::TooLarge {
            what: "indistinguishable rate",
            n: input.photon_number(),
            max: MAX_INDISTINGUISHABLE_PHOTONS,
        });
    }
    let s = scattering_submatrix(u, input, output)?;
    let (per, path) = permanent_auto(&s)?;
    let raw = output.c_factor() * input.c_factor() * per.norm_sqr();
    Ok(RateResult::new(
        raw,
        RateMethod::Indistinguishable(path),
        alloc::vec![Amplitude::immanant(&Partition::row(s.rows()), per)],
    ))
}

/// Permanent through the cheapest applicable route.
pub fn permanent_auto(s: &ComplexMatrix) -> Result<(Complex64, PermanentPath)> {
    if is_upper_hessenberg(s, HESSENBERG_TOL) || is_lower_hessenberg(s, HESSENBERG_TOL) {
        Ok((permanent_hessenberg(s, HESSENBERG_TOL)?, PermanentPath::HessenbergDet))
    } else {
        Ok((permanent_ryser(s)?, PermanentPath::Ryser))
    }
}

struct PermutationTerms {
    perms: Vec<Vec<usize>>,
    amplitudes: Vec<Complex64>,
}

fn permutation_terms(s: &ComplexMatrix) -> PermutationTerms {
    let n = s.rows();
    let mut perms = Vec::with_capacity(factorial(n) as usize);
    let mut amplitudes = Vec::with_capacity(perms.capacity());
    for_each_permutation(n, |sigma| {
        // row k (detection k) receives photon sigma[k]
        amplitudes.push(
            sigma
                .iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |acc, (k, &p)| acc * s.get(k, p)),
        );
        perms.push(sigma.to_vec());
    });
    PermutationTerms { perms, amplitudes }
}

fn oracle_checks(input: &PhotonConfig, output: &PhotonConfig, delays: &DelaySpec) -> Result<()> {
    let np = input.photon_number();
    if np > MAX_ORACLE_PHOTONS {
        return Err(Error::TooLarge {
            what: "permutation-sum oracle",
            n: np,
            max: MAX_ORACLE_PHOTONS,
        });
    }
    if output.photon_number() != np {
        return Err(Error::DimensionMismatch(format!(
            "{np} input photons but {} output photons",
            output.photon_number()
        )));
    }
    delays.check_len(np)
}

/// Norm of the input state: `Σ_σ [ξ∘σ = ξ] · overlap(τ, τ∘σ)`. Equals one
/// for distinct input modes.
fn input_norm(input: &PhotonConfig, delays: &DelaySpec) -> f64 {
    let xi = input.modes();
    let mut total = 0.0;
    for_each_permutation(xi.len(), |sigma| {
        if sigma.iter().enumerate().all(|(k, &p)| xi[k] == xi[p]) {
            total += delays.overlap(sigma.iter().copied().enumerate());
        }
    });
    total
}

/// Brute-force double permutation sum, returned as a complex number so the
/// imaginary residue can be inspected:
///
/// `c_out / N_in · Σ_{σ,ρ} Π_k S[k][σ(k)] conj(S[k][ρ(k)]) · exp(−(s²/2) Σ_k (τ_{σ(k)} − τ_{ρ(k)})²)`
pub fn rate_oracle_complex(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
    delays: &DelaySpec,
) -> Result<Complex64> {
    oracle_checks(input, output, delays)?;
    let s = scattering_submatrix(u, input, output)?;
    let terms = permutation_terms(&s);
    let mut total = Complex64::new(0.0, 0.0);
    for (sigma, a) in terms.perms.iter().zip(&terms.amplitudes) {
        for (rho, b) in terms.perms.iter().zip(&terms.amplitudes) {
            let w = delays.overlap(sigma.iter().copied().zip(rho.iter().copied()));
            total += a * b.conj() * w;
        }
    }
    Ok(total * output.c_factor() / input_norm(input, delays))
}

/// Real part of [`rate_oracle_complex`].
pub fn rate_oracle(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
    delays: &DelaySpec,
) -> Result<f64> {
    Ok(rate_oracle_complex(u, input, output, delays)?.re)
}

/// Fully distinguishable limit: only the `σ = ρ` terms of the oracle survive.
pub fn rate_classical(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
) -> Result<f64> {
    oracle_checks(input, output, &DelaySpec::coincident(input.photon_number()))?;
    let s = scattering_submatrix(u, input, output)?;
    let terms = permutation_terms(&s);
    let diag: f64 = terms.amplitudes.iter().map(Complex64::norm_sqr).sum();
    Ok(output.c_factor() * diag)
}

/// Picks the cheapest exact route for the delay pattern:
/// equal delays use the permanent, two photons and the three-photon
/// "two together, one delayed" case use closed forms, anything else goes
/// to the oracle.
pub fn rate(
    u: &ComplexMatrix,
    input: &PhotonConfig,
    output: &PhotonConfig,
    delays: &DelaySpec,
) -> Result<RateResult> {
    delays.check_len(input.photon_number())?;
    if delays.all_equal() {
        return rate_indistinguishable(u, input, output);
    }
    let np = input.photon_number();
    if input.is_distinct() {
        if np == 2 {
            return rate_two_photon(u, input, output, delays);
        }
        if np == 3 && odd_photon_last(delays.taus()).is_some() {
            return rate_three_photon_partial(u, input, output, delays);
        }
    }
    let raw = rate_oracle(u, input, output, delays)?;
    Ok(RateResult::new(raw, RateMethod::Oracle, Vec::new()))
}
