//! The acceptance suite behind `sumrules selftest` and the `acceptance`
//! test target.
//!
//! Every criterion has a default tolerance. An override replaces all the
//! numeric bounds of the criteria it is applied to, which is how a
//! deliberately impossible tolerance shows that the checks can fail.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumrules_core::coset::Side;
use sumrules_core::numeric::close_rel;
use sumrules_core::rates::{rate_oracle, RateMethod};
use sumrules_core::{
    characters, determinant, embed_rotation, factor_output_coset, haar_unitary, immanant,
    permanent_hessenberg, permanent_naive, permanent_ryser, rate, rate_indistinguishable,
    rate_three_photon_partial, rate_two_photon, sum_over_inputs, sum_over_outputs, Complex64,
    ComplexMatrix, DelaySpec, ModeRotation, Partition, PhotonConfig, Result, SumSpec,
    HESSENBERG_TOL,
};

use crate::bench::{checksums_agree, hessenberg_inputs, time_method, Method};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Criterion {
    pub id: u8,
    pub key: &'static str,
    pub title: &'static str,
    check: fn(Option<f64>) -> Result<Outcome>,
}

impl Criterion {
    /// Errors count as failures.
    pub fn run(&self, tolerance: Option<f64>) -> Outcome {
        (self.check)(tolerance).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")))
    }
}

impl fmt::Debug for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Criterion({} {})", self.id, self.key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub id: u8,
    pub key: &'static str,
    pub title: &'static str,
    pub outcome: Outcome,
    pub seconds: f64,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {:<17} {} ({:.3} s): {}",
            if self.outcome.passed { "PASS" } else { "FAIL" },
            self.id,
            self.key,
            self.title,
            self.seconds,
            self.outcome.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, key: "hom", title: "two-photon dip on a balanced beamsplitter", check: hom },
        Criterion { id: 2, key: "two-photon", title: "two-photon closed form against the oracle", check: two_photon },
        Criterion { id: 3, key: "output-sum", title: "output sum rule, three modes", check: output_sum },
        Criterion { id: 4, key: "input-sum", title: "input sum rule, three modes", check: input_sum },
        Criterion { id: 5, key: "coset-pattern", title: "four-mode coset zeros and reconstruction", check: coset_pattern },
        Criterion { id: 6, key: "per-det-sum", title: "permanent sum equals determinant sum", check: per_det_sum },
        Criterion { id: 7, key: "hessenberg-per", title: "Hessenberg permanent through a determinant", check: hessenberg_per },
        Criterion { id: 8, key: "three-photon", title: "three-photon partial distinguishability", check: three_photon },
        Criterion { id: 9, key: "characters", title: "symmetric group character tables", check: character_tables },
        Criterion { id: 10, key: "immanants", title: "3x3 immanant identities", check: immanants },
        Criterion { id: 11, key: "ryser", title: "Ryser against the permutation sum", check: ryser },
        Criterion { id: 12, key: "performance", title: "determinant path against Ryser", check: performance },
        Criterion { id: 13, key: "total-probability", title: "total probability over outputs", check: total_probability },
    ]
}

/// Criteria whose key contains `filter`, or whose id equals it.
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    criteria()
        .into_iter()
        .filter(|c| match filter {
            None => true,
            Some(f) => c.key.contains(f) || c.id.to_string() == f,
        })
        .collect()
}

pub fn run_all(filter: Option<&str>, tolerance: Option<f64>) -> Vec<Line> {
    select(filter)
        .iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = c.run(tolerance);
            Line {
                id: c.id,
                key: c.key,
                title: c.title,
                outcome,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn cfg(m: &[usize]) -> Result<PhotonConfig> {
    PhotonConfig::new(m.to_vec())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(n: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        for m in rest.last().copied().unwrap_or(1)..=n {
            let mut v = rest.clone();
            v.push(m);
            out.push(v);
        }
    }
    out
}

fn rel_gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn hom(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-12);
    let bs = embed_rotation(&ModeRotation::new(1, 2, 0.0, std::f64::consts::FRAC_PI_2, 0.0), 2)?;
    let pair = cfg(&[1, 2])?;
    let at_zero = rate(&bs, &pair, &pair, &DelaySpec::with_taus(vec![0.0, 0.0])?)?.value;
    let far = rate(&bs, &pair, &pair, &DelaySpec::with_taus(vec![0.0, 1e3])?)?.value;
    let passed = at_zero.abs() <= tol && (far - 0.5).abs() <= tol;
    Ok(Outcome::new(passed, format!("rate(tau=0) = {at_zero:.3e}, rate(tau=1000) = {far:.15}")))
}

fn two_photon(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    let outputs = multisets(3, 2);
    for draw in 0..200u64 {
        let u = haar_unitary(3, 2000 + draw)?;
        let taus = vec![r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)];
        let s = [0.5, 1.0, 2.0][draw as usize % 3];
        let d = DelaySpec::new(taus, s)?;
        let input = cfg(&[[1, 2], [1, 3], [2, 3]][draw as usize % 3])?;
        for o in &outputs {
            let o = cfg(o)?;
            let closed = rate_two_photon(&u, &input, &o, &d)?.value;
            worst = worst.max((closed - rate_oracle(&u, &input, &o, &d)?).abs());
        }
    }
    Ok(Outcome::new(worst < tol, format!("200 draws x 6 outputs, max |closed - oracle| = {worst:.3e}")))
}

fn output_sum(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let mut r = rng(3);
    let input = cfg(&[2, 3])?;
    let mut worst: f64 = 0.0;
    let mut differing = [0usize; 2];
    for draw in 0..100u64 {
        let u = haar_unitary(3, 3000 + draw)?;
        let delayed = r.random_range(-3.0..3.0);
        for (k, taus) in [vec![0.0, 0.0], vec![0.0, delayed]].into_iter().enumerate() {
            let spec = SumSpec::new(Side::Output, 3, 2, DelaySpec::with_taus(taus)?);
            let rep = sum_over_outputs(&u, &input, &spec)?;
            worst = worst.max(rep.discrepancy());
            if rep.max_term_discrepancy > 1e-3 {
                differing[k] += 1;
            }
        }
    }
    let passed = worst < tol && differing.iter().all(|&d| d >= 90);
    Ok(Outcome::new(
        passed,
        format!(
            "max |sum(U) - sum(coset)| = {worst:.3e}; draws with a term moving > 1e-3: {} (tau=0), {} (tau random)",
            differing[0], differing[1]
        ),
    ))
}

fn input_sum(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let mut r = rng(4);
    let output = cfg(&[2, 3])?;
    let mut worst: f64 = 0.0;
    let mut differing = 0;
    for draw in 0..100u64 {
        let u = haar_unitary(3, 4000 + draw)?;
        let t = r.random_range(-3.0..3.0);
        let spec = SumSpec::new(Side::Input, 3, 2, DelaySpec::with_taus(vec![t, t])?);
        let rep = sum_over_inputs(&u, &output, &spec)?;
        worst = worst.max(rep.discrepancy());
        if rep.max_term_discrepancy > 1e-3 {
            differing += 1;
        }
    }
    Ok(Outcome::new(
        worst < tol,
        format!("max |sum(U) - sum(coset)| = {worst:.3e}; draws with a term moving > 1e-3: {differing}"),
    ))
}

fn coset_pattern(tol: Option<f64>) -> Result<Outcome> {
    let (zero_tol, rebuild_tol) = tol.map_or((1e-11, 1e-10), |t| (t, t));
    let mut zero: f64 = 0.0;
    let mut rebuild: f64 = 0.0;
    for draw in 0..100u64 {
        let u = haar_unitary(4, 5000 + draw)?;
        let f = factor_output_coset(&u)?;
        for (r, c) in [(0, 2), (0, 3), (1, 3)] {
            zero = zero.max(f.coset.get(r, c).norm());
        }
        rebuild = rebuild.max(f.reconstruct().max_abs_diff(&u)?);
    }
    Ok(Outcome::new(
        zero < zero_tol && rebuild < rebuild_tol,
        format!("max |coset (1,3),(1,4),(2,4)| = {zero:.3e}, max reconstruction error = {rebuild:.3e}"),
    ))
}

fn per_det_sum(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let input = cfg(&[2, 3, 4])?;
    let mut worst: f64 = 0.0;
    let mut det_terms = 0;
    let mut terms = 0;
    for draw in 0..50u64 {
        let u = haar_unitary(4, 6000 + draw)?;
        let rep = sum_over_outputs(&u, &input, &SumSpec::coincident(Side::Output, 4, 3))?;
        worst = worst.max(rep.max_pairwise_discrepancy());
        det_terms += rep.det_terms();
        terms += rep.per_term_table.len();
    }
    Ok(Outcome::new(
        worst < tol && terms == 300,
        format!(
            "max pairwise gap (full Ryser, coset Ryser, coset det) = {worst:.3e}; {det_terms}/{terms} coset terms went through the determinant"
        ),
    ))
}

fn hessenberg_per(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = 3 + k % 6;
        let mut m = random_matrix(n, &mut r);
        for i in 0..n {
            for j in i + 2..n {
                m[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        let h = permanent_hessenberg(&m, HESSENBERG_TOL)?;
        worst = worst.max(rel_gap(h, permanent_naive(&m)?)).max(rel_gap(h, permanent_ryser(&m)?));
    }
    Ok(Outcome::new(worst < tol, format!("100 matrices, n = 3..8, max relative gap = {worst:.3e}")))
}

fn three_photon(tol: Option<f64>) -> Result<Outcome> {
    let (closed_tol, collapse_tol) = tol.map_or((1e-9, 1e-11), |t| (t, t));
    let mut r = rng(8);
    let input = cfg(&[2, 3, 4])?;
    let outputs: Vec<PhotonConfig> = multisets(4, 3).iter().map(|o| cfg(o)).collect::<Result<_>>()?;
    let (mut doubled, mut slots, mut collapse): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let (mut n_doubled, mut n_slots) = (0, 0);
    for draw in 0..100u64 {
        let u = haar_unitary(4, 8000 + draw)?;
        let t = r.random_range(-3.0..3.0);
        let d = DelaySpec::with_taus(vec![0.0, 0.0, t])?;
        let together = DelaySpec::with_taus(vec![t, t, t])?;
        for o in &outputs {
            let closed = rate_three_photon_partial(&u, &input, o, &d)?;
            let gap = (closed.value - rate_oracle(&u, &input, o, &d)?).abs();
            match closed.method {
                RateMethod::ThreePhotonDoubled => {
                    doubled = doubled.max(gap);
                    n_doubled += 1;
                }
                RateMethod::ThreePhotonSlots => {
                    slots = slots.max(gap);
                    n_slots += 1;
                }
                _ => return Ok(Outcome::new(false, format!("unexpected route {}", closed.method.as_str()))),
            }
            let at_zero = rate_three_photon_partial(&u, &input, o, &together)?.value;
            let per = rate_indistinguishable(&u, &input, o)?.value;
            collapse = collapse.max((at_zero - per).abs());
        }
    }
    Ok(Outcome::new(
        doubled < closed_tol && slots < closed_tol && collapse < collapse_tol,
        format!(
            "doubled-output form {doubled:.3e} over {n_doubled} rates, three-slot form {slots:.3e} over {n_slots} rates, collapse at tau=0 {collapse:.3e}"
        ),
    ))
}

fn character_tables(_tol: Option<f64>) -> Result<Outcome> {
    // rows (3), (2,1), (1,1,1); columns identity, transpositions, 3-cycles
    let published = [[1, 1, 1], [2, 0, -1], [1, -1, 1]];
    let t = characters(3)?;
    let classes = [Partition::column(3), Partition::new(vec![2, 1])?, Partition::row(3)];
    let irreps = [Partition::row(3), Partition::new(vec![2, 1])?, Partition::column(3)];
    let mut s3 = [[0i64; 3]; 3];
    for (r, l) in irreps.iter().enumerate() {
        for (c, k) in classes.iter().enumerate() {
            s3[r][c] = t.value(l, k).unwrap_or(i64::MIN);
        }
    }
    let s3_ok = s3 == published;
    let s4_ok = characters(4)?.is_orthogonal();
    Ok(Outcome::new(s3_ok && s4_ok, format!("S3 table {s3:?} matches: {s3_ok}; S4 orthogonal: {s4_ok}")))
}

fn immanants(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-12);
    let mut r = rng(10);
    let mixed = Partition::new(vec![2, 1])?;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = random_matrix(3, &mut r);
        let e = |i: usize, j: usize| m.get(i - 1, j - 1);
        let expansion = 2.0 * e(1, 1) * e(2, 2) * e(3, 3) - e(1, 2) * e(2, 3) * e(3, 1) - e(1, 3) * e(2, 1) * e(3, 2);
        worst = worst
            .max((immanant(&m, &Partition::row(3))? - permanent_naive(&m)?).norm())
            .max((immanant(&m, &Partition::column(3))? - determinant(&m)?).norm())
            .max((immanant(&m, &mixed)? - expansion).norm());
    }
    Ok(Outcome::new(
        worst < tol,
        format!("50 matrices: max gap over Imm(3)=Per, Imm(1,1,1)=Det, Imm(2,1) expansion = {worst:.3e}"),
    ))
}

fn ryser(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-10);
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    let mut all_close = true;
    for n in 2..=7 {
        for _ in 0..50 {
            let m = random_matrix(n, &mut r);
            let (a, b) = (permanent_ryser(&m)?, permanent_naive(&m)?);
            worst = worst.max(rel_gap(a, b));
            all_close &= close_rel(a, b, tol);
        }
    }
    Ok(Outcome::new(all_close, format!("300 matrices, n = 2..7, max relative gap = {worst:.3e}")))
}

fn performance(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-9);
    let inputs = hessenberg_inputs(18, 5, 12);
    let (ryser_ns, ryser_sum) = time_method(Method::Ryser, &inputs)?;
    // the determinant is fast enough that a single call is mostly timer noise
    let repeated: Vec<ComplexMatrix> = inputs.iter().cycle().take(500).cloned().collect();
    let (det_ns, _) = time_method(Method::HessenbergDet, &repeated)?;
    let (_, det_sum) = time_method(Method::HessenbergDet, &inputs)?;
    let agree = checksums_agree(
        &[
            crate::bench::BenchRow { n: 18, method: Method::Ryser, mean_ns: ryser_ns, checksum: ryser_sum },
            crate::bench::BenchRow { n: 18, method: Method::HessenbergDet, mean_ns: det_ns, checksum: det_sum },
        ],
        tol,
    );
    let speedup = ryser_ns / det_ns;
    let big = hessenberg_inputs(20, 1, 20);
    let start = Instant::now();
    let p20 = permanent_ryser(&big[0])?;
    let ryser20 = start.elapsed().as_secs_f64();
    let p20_det = permanent_hessenberg(&big[0], HESSENBERG_TOL)?;
    let agree20 = close_rel(p20, p20_det, tol);
    Ok(Outcome::new(
        agree && agree20 && speedup >= 100.0 && ryser20 < 60.0,
        format!(
            "n=18: ryser {ryser_ns:.0} ns, det {det_ns:.0} ns, speedup {speedup:.0}x, checksums agree: {agree}; n=20 Ryser {ryser20:.3} s, matches det: {agree20}"
        ),
    ))
}

fn total_probability(tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(1e-8);
    let mut worst: f64 = 0.0;
    for n in 4..=5 {
        for np in 2..=3 {
            for draw in 0..5u64 {
                let u = haar_unitary(n, 13_000 + 100 * n as u64 + 10 * np as u64 + draw)?;
                let input = cfg(&(1..=np).collect::<Vec<_>>())?;
                let mut total = 0.0;
                for o in multisets(n, np) {
                    total += rate_indistinguishable(&u, &input, &cfg(&o)?)?.value;
                }
                worst = worst.max((total - 1.0).abs());
            }
        }
    }
    Ok(Outcome::new(worst < tol, format!("U(4), U(5) with 2 and 3 photons: max |total - 1| = {worst:.3e}")))
}
