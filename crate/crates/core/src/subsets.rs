//! Index subsets and their lexicographic enumeration.
//!
//! Indices are zero-based throughout the library.

use crate::error::{Error, Result};

/// Default upper bound on the number of subsets a single enumeration may visit.
pub const DEFAULT_SUBSET_CAP: u128 = 100_000_000;

/// A strictly increasing tuple of indices into a family of `m` vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    /// Validates that `indices` is strictly increasing, non-empty and below `m`.
    pub fn new(indices: Vec<usize>, m: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset must be non-empty".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= m {
                return Err(Error::InvalidSubset(format!(
                    "index {last} out of range for {m} vectors"
                )));
            }
        }
        Ok(Self(indices))
    }

    /// Sorts arbitrary distinct indices first. Order inside a subset is
    /// irrelevant for unsigned volumes.
    pub fn from_unsorted(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        indices.sort_unstable();
        Self::new(indices, m)
    }

    /// All indices `0..m`.
    pub fn full(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[usize]> for SubsetIndex {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

/// `C(n, k)` in 128-bit arithmetic, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `C(n, k)` as a float, for normalizing sums.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    let b = binomial(n, k);
    if b == u128::MAX {
        // overflowed u128; product form
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    } else {
        b as f64
    }
}

/// Cursor over the `k`-subsets of `0..m` in lexicographic order.
///
/// `current` borrows the live subset, so hot loops avoid allocating.
#[derive(Debug, Clone)]
pub struct Combinations {
    m: usize,
    current: Vec<usize>,
    remaining: u128,
    started: bool,
}

impl Combinations {
    /// Starts at the first subset; fails if `C(m, k)` exceeds `cap`.
    pub fn new(m: usize, k: usize, cap: u128) -> Result<Self> {
        Self::range(m, k, 0, u128::MAX, cap)
    }

    /// Visits at most `len` subsets starting at lexicographic rank `start`.
    pub fn range(m: usize, k: usize, start: u128, len: u128, cap: u128) -> Result<Self> {
        if k > m {
            return Err(Error::Precondition(format!("subset size {k} exceeds {m}")));
        }
        let total = binomial(m, k);
        if total > cap {
            return Err(Error::CapExceeded {
                m,
                k,
                count: total,
                cap,
            });
        }
        let start = start.min(total);
        let remaining = len.min(total - start);
        let current = if remaining > 0 {
            unrank(m, k, start)
        } else {
            Vec::new()
        };
        Ok(Self {
            m,
            current,
            remaining,
            started: false,
        })
    }

    /// Moves to the next subset; returns false once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        if self.started {
            step_lex(&mut self.current, self.m);
        }
        self.started = true;
        self.remaining -= 1;
        true
    }

    pub fn current(&self) -> &[usize] {
        &self.current
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.advance().then(|| self.current.clone())
    }
}

/// Enumerates all `k`-subsets of `0..m` lexicographically.
///
/// `k = 0` yields exactly one empty subset.
pub fn enumerate_subsets(m: usize, k: usize, cap: u128) -> Result<Combinations> {
    Combinations::new(m, k, cap)
}

fn step_lex(c: &mut [usize], m: usize) {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return;
        }
    }
}

/// The subset with lexicographic rank `rank` among the `k`-subsets of `0..m`.
fn unrank(m: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        loop {
            let with_next = binomial(m - next - 1, left);
            if rank < with_next {
                out.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_choose_two_in_order() {
        let all: Vec<_> = enumerate_subsets(3, 2, DEFAULT_SUBSET_CAP).unwrap().collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn zero_size_yields_one_empty_subset() {
        let all: Vec<_> = enumerate_subsets(5, 0, DEFAULT_SUBSET_CAP).unwrap().collect();
        assert_eq!(all, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn ten_choose_four_count_and_distinct() {
        let all: Vec<_> = enumerate_subsets(10, 4, DEFAULT_SUBSET_CAP).unwrap().collect();
        assert_eq!(all.len(), 210);
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 210);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let err = Combinations::new(30, 15, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                m: 30,
                k: 15,
                count: 155_117_520,
                cap: 1000
            }
        );
    }

    #[test]
    fn ranges_tile_the_full_enumeration() {
        let full: Vec<_> = Combinations::new(9, 4, DEFAULT_SUBSET_CAP).unwrap().collect();
        let mut tiled = Vec::new();
        let mut start = 0;
        while start < 126 {
            tiled.extend(Combinations::range(9, 4, start, 17, DEFAULT_SUBSET_CAP).unwrap());
            start += 17;
        }
        assert_eq!(full, tiled);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn subset_validation() {
        assert!(SubsetIndex::new(vec![0, 2, 1], 3).is_err());
        assert!(SubsetIndex::new(vec![0, 3], 3).is_err());
        assert!(SubsetIndex::new(vec![], 3).is_err());
        assert_eq!(
            SubsetIndex::from_unsorted(vec![2, 0], 3).unwrap().indices(),
            &[0, 2]
        );
    }
}
