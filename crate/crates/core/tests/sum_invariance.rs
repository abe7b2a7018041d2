mod common;

use common::{all_multisets, cfg, FockOracle};
use proptest::prelude::*;
use sumrules_core::coset::Side;
use sumrules_core::{
    enumerate_outputs, factor_input_coset, factor_output_coset, haar_unitary, is_upper_hessenberg,
    rate_indistinguishable, scattering_submatrix, sum_over_inputs, sum_over_outputs, DelaySpec,
    PermanentPath, SumSpec, HESSENBERG_TOL,
};

fn delays(np: usize, pattern: u8, a: f64, b: f64, s: f64) -> DelaySpec {
    let taus = match pattern {
        0 => vec![0.0; np],
        // first photons together, last one apart
        1 => (0..np).map(|k| if k + 1 == np { b } else { a }).collect(),
        _ => (0..np).map(|k| a + b * k as f64).collect(),
    };
    DelaySpec::new(taus, s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coset_reconstruction(n in 3usize..=6, seed in any::<u64>()) {
        let u = haar_unitary(n, seed).unwrap();
        for f in [factor_output_coset(&u).unwrap(), factor_input_coset(&u).unwrap()] {
            prop_assert!(f.reconstruct().max_abs_diff(&u).unwrap() < 1e-10);
            prop_assert!(f.max_zero_residual() < 1e-11);
            prop_assert!(f.rotations.iter().all(|r| r.mode_i < n && r.mode_j < n));
            prop_assert!(f.coset_defect < 1e-10);
            prop_assert_eq!(f.removed_parameter_count, (n - 1) * (n - 1) - 1);
        }
    }

    #[test]
    fn output_sums_are_invariant(
        n in 3usize..=6,
        np in 2usize..=3,
        seed in any::<u64>(),
        pattern in 0u8..3,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        s in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let u = haar_unitary(n, seed).unwrap();
        let input: Vec<usize> = (n + 1 - np..=n).collect();
        let spec = SumSpec::new(Side::Output, n, np, delays(np, pattern, a, b, s));
        let r = sum_over_outputs(&u, &cfg(&input), &spec).unwrap();
        prop_assert!(r.discrepancy() < 1e-9 * r.sum_full.max(1.0), "{}", r.discrepancy());
        if let Some(det) = r.sum_coset_det {
            prop_assert!((det - r.sum_coset).abs() < 1e-10);
        }
    }

    #[test]
    fn input_sums_are_invariant(
        n in 3usize..=6,
        np in 2usize..=3,
        seed in any::<u64>(),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let u = haar_unitary(n, seed).unwrap();
        let output: Vec<usize> = (1..np).chain([n]).collect();
        let mut taus = vec![a; np];
        taus[np - 1] = b;
        let spec = SumSpec::new(Side::Input, n, np, DelaySpec::new(taus, 1.0).unwrap());
        let r = sum_over_inputs(&u, &cfg(&output), &spec).unwrap();
        prop_assert!(r.discrepancy() < 1e-9 * r.sum_full.max(1.0), "{}", r.discrepancy());
    }
}

#[test]
fn terms_differ_while_sums_agree() {
    let mut differing = 0;
    for seed in 0..100 {
        let u = haar_unitary(4, seed).unwrap();
        let spec = SumSpec::coincident(Side::Output, 4, 3);
        let r = sum_over_outputs(&u, &cfg(&[2, 3, 4]), &spec).unwrap();
        assert!(r.discrepancy() < 1e-10);
        if r.max_term_discrepancy > 1e-3 {
            differing += 1;
        }
    }
    assert!(differing >= 90, "{differing}");
}

#[test]
fn det_and_ryser_agree_when_every_coset_submatrix_is_hessenberg() {
    for seed in 0..30 {
        let u = haar_unitary(4, 900 + seed).unwrap();
        let spec = SumSpec::coincident(Side::Output, 4, 3);
        let input = cfg(&[2, 3, 4]);
        let r = sum_over_outputs(&u, &input, &spec).unwrap();
        let all_hessenberg = r.per_term_table.iter().all(|t| {
            let s = scattering_submatrix(&r.coset, &input, &t.config).unwrap();
            is_upper_hessenberg(&s, HESSENBERG_TOL)
        });
        assert_eq!(r.det_terms() == r.per_term_table.len(), all_hessenberg);
        assert_eq!(r.method, Some(PermanentPath::HessenbergDet));
        let det = r.sum_coset_det.unwrap();
        assert!((det - r.sum_coset).abs() < 1e-10);
        assert!((det - r.sum_full).abs() < 1e-10);
    }
}

#[test]
fn sum_equals_weighted_permanent_sum() {
    // the family sum equals Σ c |Per|² written out by hand
    let u = haar_unitary(4, 12).unwrap();
    let input = cfg(&[2, 3, 4]);
    let r = sum_over_outputs(&u, &input, &SumSpec::coincident(Side::Output, 4, 3)).unwrap();
    let by_hand: f64 = enumerate_outputs(4, 3, 4)
        .unwrap()
        .iter()
        .map(|o| {
            let s = scattering_submatrix(&u, &input, o).unwrap();
            o.c_factor() * sumrules_core::permanent_naive(&s).unwrap().norm_sqr()
        })
        .sum();
    assert!((r.sum_full - by_hand).abs() < 1e-12);
}

#[test]
fn family_sum_matches_state_expansion() {
    let u = haar_unitary(4, 31).unwrap();
    let taus = [0.0, 0.0, 0.8];
    let f = FockOracle::new(&u, &[1, 2, 3], &taus, 1.0);
    let spec = SumSpec::new(Side::Output, 4, 3, DelaySpec::new(taus.to_vec(), 1.0).unwrap());
    let r = sum_over_outputs(&u, &cfg(&[1, 2, 3]), &spec).unwrap();
    let expect: f64 = enumerate_outputs(4, 3, 4)
        .unwrap()
        .iter()
        .map(|o| f.probability(o.modes()))
        .sum();
    assert!((r.sum_full - expect).abs() < 1e-12);
    // and the same number from the coset matrix
    let fc = FockOracle::new(&r.coset, &[1, 2, 3], &taus, 1.0);
    let expect_coset: f64 = enumerate_outputs(4, 3, 4)
        .unwrap()
        .iter()
        .map(|o| fc.probability(o.modes()))
        .sum();
    assert!((expect_coset - expect).abs() < 1e-12);
}

#[test]
fn weighted_completeness() {
    // dropping the fixed mode: the c-weighted family over every output
    // multiset exhausts the probability
    for n in 3..=5 {
        for np in 2..=3 {
            let u = haar_unitary(n, 70 + n as u64).unwrap();
            let input: Vec<usize> = (1..=np).collect();
            let total: f64 = all_multisets(n, np)
                .iter()
                .map(|o| rate_indistinguishable(&u, &cfg(&input), &cfg(o)).unwrap().value)
                .sum();
            assert!((total - 1.0).abs() < 1e-8);
            // the family with the fixed mode is a subset of that total
            let spec = SumSpec::coincident(Side::Output, n, np);
            let r = sum_over_outputs(&u, &cfg(&input), &spec).unwrap();
            assert!(r.sum_full <= total + 1e-12);
        }
    }
}
