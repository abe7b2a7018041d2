//! Permutations of `0..n` for the brute-force sums.

use alloc::vec::Vec;

/// `n!` as `u64`; panics past 20!.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).expect("factorial overflow")
}

/// Rearrange `p` into the next permutation in lexicographic order.
/// Returns `false` (leaving `p` sorted ascending) after the last one.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.reverse();
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
}

/// Cycle lengths of `p`, sorted non-increasing.
pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = alloc::vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

/// `+1` for even permutations, `-1` for odd.
pub fn sign(p: &[usize]) -> i64 {
    let transpositions: usize = cycle_type(p).iter().map(|l| l - 1).sum();
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
