//! Irreducible characters of the symmetric group via the
//! Murnaghan–Nakayama rule.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest degree [`characters`] will tabulate.
pub const MAX_TABLE_DEGREE: usize = 8;

/// `χ^λ` evaluated on the class with cycle type `mu`.
///
/// Rim hooks are stripped on the beta-set (abacus) of `λ`: removing a hook
/// of length `r` moves one bead from `b` to `b - r`, with sign `(-1)^h`
/// where `h` counts beads strictly between the two positions.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.degree() != mu.degree() {
        return Err(Error::DegreeMismatch {
            partition: lambda.degree(),
            n: mu.degree(),
        });
    }
    let k = lambda.parts().len();
    let beads: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i))
        .collect();
    Ok(strip(beads, mu.parts()))
}

fn strip(beads: Vec<usize>, hooks: &[usize]) -> i64 {
    let Some((&r, rest)) = hooks.split_first() else {
        return 1;
    };
    let mut total = 0;
    for (idx, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beads.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beads.clone();
        next[idx] = target;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * strip(next, rest);
    }
    total
}

/// Character table of `S_n`: rows are irreps, columns conjugacy classes,
/// both listed in reverse lexicographic partition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    degree: usize,
    partitions: Vec<Partition>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Irrep labels, which double as the cycle types labelling columns.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn classes(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn value(&self, irrep: &Partition, class: &Partition) -> Option<i64> {
        let r = self.partitions.iter().position(|p| p == irrep)?;
        let c = self.partitions.iter().position(|p| p == class)?;
        Some(self.values[r][c])
    }

    /// Character at the identity class, i.e. the irrep dimension.
    pub fn dimension(&self, irrep: &Partition) -> Option<i64> {
        self.value(irrep, &Partition::column(self.degree))
    }

    /// `Σ_c |c| χ^λ(c) χ^μ(c)` for every pair of irreps.
    pub fn inner_products(&self) -> Vec<Vec<i64>> {
        let sizes: Vec<i64> = self.partitions.iter().map(|c| c.class_size() as i64).collect();
        self.values
            .iter()
            .map(|a| {
                self.values
                    .iter()
                    .map(|b| (0..sizes.len()).map(|c| sizes[c] * a[c] * b[c]).sum())
                    .collect()
            })
            .collect()
    }

    /// Row orthogonality in exact integer arithmetic.
    pub fn is_orthogonal(&self) -> bool {
        let order = crate::perm::factorial(self.degree) as i64;
        self.inner_products().iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &v)| v == if i == j { order } else { 0 })
        })
    }
}

/// Full character table of `S_n` for `1 <= n <= 8`.
pub fn characters(n: usize) -> Result<CharacterTable> {
    if n == 0 {
        return Err(Error::Empty("symmetric group degree"));
    }
    if n > MAX_TABLE_DEGREE {
        return Err(Error::TooLarge {
            what: "character table",
            n,
            max: MAX_TABLE_DEGREE,
        });
    }
    let partitions = Partition::all(n);
    let values = partitions
        .iter()
        .map(|l| {
            partitions
                .iter()
                .map(|c| character(l, c).expect("same degree"))
                .collect()
        })
        .collect();
    Ok(CharacterTable {
        degree: n,
        partitions,
        values,
    })
}
