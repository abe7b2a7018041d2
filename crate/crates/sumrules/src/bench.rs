//! Ryser against the Hessenberg determinant on random Hessenberg inputs.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumrules_core::{permanent_hessenberg, permanent_ryser, Complex64, ComplexMatrix, Result, HESSENBERG_TOL};

pub const HEADER: [&str; 4] = ["n", "method", "mean_ns", "result_checksum"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ryser,
    HessenbergDet,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ryser => "ryser",
            Method::HessenbergDet => "hessenberg_det",
        }
    }

    pub fn permanent(self, m: &ComplexMatrix) -> Result<Complex64> {
        match self {
            Method::Ryser => permanent_ryser(m),
            Method::HessenbergDet => permanent_hessenberg(m, HESSENBERG_TOL),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub method: Method,
    pub mean_ns: f64,
    /// `Σ |Per|` over the timed matrices; both methods see the same inputs.
    pub checksum: f64,
}

/// `count` upper-Hessenberg matrices with entries uniform in the unit
/// square, scaled by `1/√2` so permanents stay moderate at large `n`.
pub fn hessenberg_inputs(n: usize, count: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..count)
        .map(|_| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if j > i + 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * scale
                }
            })
        })
        .collect()
}

pub fn time_method(method: Method, inputs: &[ComplexMatrix]) -> Result<(f64, f64)> {
    let start = Instant::now();
    let mut checksum = 0.0;
    for m in inputs {
        checksum += std::hint::black_box(method.permanent(m)?).norm();
    }
    let mean = start.elapsed().as_nanos() as f64 / inputs.len().max(1) as f64;
    Ok((mean, checksum))
}

/// One row per `(n, method)`, ascending `n`, Ryser first.
pub fn bench(ns: impl IntoIterator<Item = usize>, reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let inputs = hessenberg_inputs(n, reps, seed);
        for method in [Method::Ryser, Method::HessenbergDet] {
            let (mean_ns, checksum) = time_method(method, &inputs)?;
            rows.push(BenchRow {
                n,
                method,
                mean_ns,
                checksum,
            });
        }
    }
    Ok(rows)
}

/// Whether the two methods report the same checksum at every `n`.
pub fn checksums_agree(rows: &[BenchRow], rel_tol: f64) -> bool {
    rows.chunks(2).all(|pair| match pair {
        [a, b] => (a.checksum - b.checksum).abs() <= rel_tol * a.checksum.abs().max(b.checksum.abs()).max(1.0),
        _ => false,
    })
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.method.as_str().to_string(),
            format!("{:.0}", r.mean_ns),
            format!("{:.15e}", r.checksum),
        ])?;
    }
    w.flush()?;
    Ok(())
}
