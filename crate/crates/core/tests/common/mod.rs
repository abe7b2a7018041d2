#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumrules_core::{Complex64, ComplexMatrix, PhotonConfig};

pub fn cfg(m: &[usize]) -> PhotonConfig {
    PhotonConfig::new(m.to_vec()).unwrap()
}

pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every multiset of `k` modes out of `1..=n`.
pub fn all_multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in all_multisets(n, k - 1) {
        let lo = rest.last().copied().unwrap_or(1);
        for m in lo..=n {
            let mut v = rest.clone();
            v.push(m);
            out.push(v);
        }
    }
    out
}

fn cholesky(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (g[i][i] - s).sqrt();
            } else {
                l[i][j] = (g[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Detection probabilities from an explicit expansion of the photon state.
///
/// Photon `k` is created in spatial mode `input[k]` with a Gaussian
/// temporal profile centred on `taus[k]`; profiles with distinct centres
/// are orthonormalized (Cholesky of their overlap matrix), so each photon
/// becomes a superposition of creation operators over (spatial, temporal)
/// pairs. The product of these operators acting on vacuum is expanded as a
/// polynomial, and time-insensitive detection sums the Fock-state weights
/// over temporal labels.
pub struct FockOracle {
    n: usize,
    temporal: usize,
    weights: BTreeMap<Vec<u8>, f64>,
    norm: f64,
}

impl FockOracle {
    pub fn new(u: &ComplexMatrix, input: &[usize], taus: &[f64], s: f64) -> Self {
        assert_eq!(input.len(), taus.len());
        let n = u.rows();
        let mut centres: Vec<f64> = Vec::new();
        for &t in taus {
            if !centres.contains(&t) {
                centres.push(t);
            }
        }
        let temporal = centres.len();
        let gram: Vec<Vec<f64>> = centres
            .iter()
            .map(|a| centres.iter().map(|b| (-0.5 * s * s * (a - b) * (a - b)).exp()).collect())
            .collect();
        let l = cholesky(&gram);
        let mut state: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        state.insert(vec![0; n * temporal], Complex64::new(1.0, 0.0));
        for (k, &mode) in input.iter().enumerate() {
            let profile = &l[centres.iter().position(|&c| c == taus[k]).unwrap()];
            let mut next: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            for (occ, coef) in &state {
                for j in 0..n {
                    let a = u.get(j, mode - 1);
                    for (t, &w) in profile.iter().enumerate() {
                        if w == 0.0 {
                            continue;
                        }
                        let mut o = occ.clone();
                        o[j * temporal + t] += 1;
                        *next.entry(o).or_default() += coef * a * w;
                    }
                }
            }
            state = next;
        }
        let fact = |m: u8| (1..=m as u64).product::<u64>() as f64;
        let mut weights = BTreeMap::new();
        let mut norm = 0.0;
        for (occ, coef) in state {
            let w = coef.norm_sqr() * occ.iter().map(|&m| fact(m)).product::<f64>();
            norm += w;
            let mut spatial = vec![0u8; n];
            for (idx, &m) in occ.iter().enumerate() {
                spatial[idx / temporal] += m;
            }
            *weights.entry(spatial).or_insert(0.0) += w;
        }
        Self {
            n,
            temporal,
            weights,
            norm,
        }
    }

    /// Probability of detecting the multiset `output` (1-based modes).
    pub fn probability(&self, output: &[usize]) -> f64 {
        let mut spatial = vec![0u8; self.n];
        for &m in output {
            spatial[m - 1] += 1;
        }
        self.weights.get(&spatial).copied().unwrap_or(0.0) / self.norm
    }

    pub fn temporal_modes(&self) -> usize {
        self.temporal
    }
}
