//! Integer partitions (Young diagrams).

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A partition of `n`: non-increasing positive parts summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadPartition("no parts".to_string()));
        }
        if parts.contains(&0) {
            return Err(Error::BadPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts the parts first; zero parts are still rejected.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// The one-row diagram `(n)`.
    pub fn row(n: usize) -> Self {
        Self { parts: alloc::vec![n] }
    }

    /// The one-column diagram `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self {
            parts: alloc::vec![1; n],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Transposed diagram.
    pub fn conjugate(&self) -> Self {
        let parts = (1..=self.parts[0])
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count())
            .collect();
        Self { parts }
    }

    /// All partitions of `n`, in reverse lexicographic order (`(n)` first).
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in (1..=remaining.min(max)).rev() {
                prefix.push(p);
                rec(remaining - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Size of the conjugacy class of `S_n` with this cycle type.
    pub fn class_size(&self) -> u64 {
        let n = self.degree();
        let mut denom: u64 = 1;
        let mut k = 0;
        while k < self.parts.len() {
            let len = self.parts[k];
            let mult = self.parts[k..].iter().take_while(|&&p| p == len).count();
            denom *= (len as u64).pow(mult as u32) * crate::perm::factorial(mult);
            k += mult;
        }
        crate::perm::factorial(n) / denom
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `2,1`, `(2,1)` or `2 1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::BadPartition(format!("bad part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}
