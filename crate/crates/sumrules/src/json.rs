//! JSON shapes for matrices, factorizations, rates and sum reports.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written with the
//! shortest decimal that parses back to the same `f64`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sumrules_core::coset::CosetFactorization;
use sumrules_core::rates::RateResult;
use sumrules_core::{Complex64, ComplexMatrix, ModeRotation, SumReport, SumTerm};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid matrix: {0}")]
    Matrix(#[from] sumrules_core::Error),
}

/// `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = sumrules_core::Error;

    fn try_from(j: MatrixJson) -> Result<Self, Self::Error> {
        let data = j.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(j.rows, j.cols, data)
    }
}

/// Entries that are not `[re, im]` pairs, or a count other than
/// `rows · cols`, are rejected.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, FormatError> {
    let j: MatrixJson = serde_json::from_str(text)?;
    Ok(ComplexMatrix::try_from(j)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

pub fn matrix_to_string(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationJson {
    pub i: usize,
    pub j: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl From<&ModeRotation> for RotationJson {
    fn from(r: &ModeRotation) -> Self {
        Self {
            i: r.mode_i,
            j: r.mode_j,
            alpha: r.alpha,
            beta: r.beta,
            gamma: r.gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroEntryJson {
    pub row: usize,
    pub col: usize,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroPatternJson {
    pub entries: Vec<ZeroEntryJson>,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationJson {
    pub side: &'static str,
    pub n: usize,
    pub alternate_zero: bool,
    pub rotations: Vec<RotationJson>,
    pub coset: MatrixJson,
    pub zero_pattern: ZeroPatternJson,
    pub removed_parameter_count: usize,
    pub input_unitarity_defect: f64,
    pub coset_unitarity_defect: f64,
    pub nonunitary_warning: bool,
}

impl From<&CosetFactorization> for FactorizationJson {
    fn from(f: &CosetFactorization) -> Self {
        let entries = f
            .zero_positions()
            .into_iter()
            .map(|(row, col)| ZeroEntryJson {
                row,
                col,
                abs: f.coset.get(row - 1, col - 1).norm(),
            })
            .collect();
        Self {
            side: f.side.as_str(),
            n: f.n(),
            alternate_zero: f.alternate_zero,
            rotations: f.rotations.iter().map(RotationJson::from).collect(),
            coset: MatrixJson::from(&f.coset),
            zero_pattern: ZeroPatternJson {
                entries,
                max_abs: f.max_zero_residual(),
            },
            removed_parameter_count: f.removed_parameter_count,
            input_unitarity_defect: f.input_defect,
            coset_unitarity_defect: f.coset_defect,
            nonunitary_warning: f.nonunitary_warning(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeJson {
    pub label: String,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateJson {
    pub input: Vec<usize>,
    pub output: Vec<usize>,
    pub taus: Vec<f64>,
    pub s: f64,
    pub rate: f64,
    pub raw: f64,
    pub clamped: bool,
    pub method: &'static str,
    pub decomposition: Vec<AmplitudeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

impl RateJson {
    pub fn new(r: &RateResult, input: &[usize], output: &[usize], taus: &[f64], s: f64) -> Self {
        Self {
            input: input.to_vec(),
            output: output.to_vec(),
            taus: taus.to_vec(),
            s,
            rate: r.value,
            raw: r.raw,
            clamped: r.clamped,
            method: r.method.as_str(),
            decomposition: r
                .decomposition
                .iter()
                .map(|a| AmplitudeJson {
                    label: a.label.clone(),
                    value: [a.value.re, a.value.im],
                })
                .collect(),
            notice: r.notice.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumTermJson {
    pub config: Vec<usize>,
    pub rate_full: f64,
    pub rate_coset: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_coset_det: Option<f64>,
    pub path: &'static str,
}

impl From<&SumTerm> for SumTermJson {
    fn from(t: &SumTerm) -> Self {
        Self {
            config: t.config.modes().to_vec(),
            rate_full: t.rate_full,
            rate_coset: t.rate_coset,
            rate_coset_det: t.rate_coset_det,
            path: match t.path {
                Some(p) => p.as_str(),
                None => t.method.as_str(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReportJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub side: &'static str,
    pub fixed_mode: usize,
    pub pinned: Vec<usize>,
    pub sum_full: f64,
    pub sum_coset: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_coset_det: Option<f64>,
    /// Gap checked against the tolerance.
    pub discrepancy: f64,
    pub max_term_discrepancy: f64,
    pub method: &'static str,
    pub passed: bool,
    pub per_term_table: Vec<SumTermJson>,
}

impl SumReportJson {
    pub fn new(r: &SumReport, pinned: &[usize], seed: Option<u64>, discrepancy: f64, passed: bool) -> Self {
        Self {
            seed,
            side: r.side.as_str(),
            fixed_mode: r.fixed_mode,
            pinned: pinned.to_vec(),
            sum_full: r.sum_full,
            sum_coset: r.sum_coset,
            sum_coset_det: r.sum_coset_det,
            discrepancy,
            max_term_discrepancy: r.max_term_discrepancy,
            method: r.method.map_or("partial_distinguishability", |m| m.as_str()),
            passed,
            per_term_table: r.per_term_table.iter().map(SumTermJson::from).collect(),
        }
    }
}
