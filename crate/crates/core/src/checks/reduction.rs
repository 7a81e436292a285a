use super::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::linalg::{GramMatrix, VectorFamily};
use crate::subsets::Combinations;
use crate::summation::CompensatedSum;

/// The two wedge-sum ratios compared by the pivot reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPair {
    pub pivot: usize,
    pub j_hi: usize,
    pub j_lo: usize,
    pub r_hi: f64,
    pub r_lo: f64,
    /// `r_hi <= r_lo + tolerance`.
    pub feasible: bool,
}

impl RatioPair {
    /// `r_lo - r_hi`; negative when the interval for the replacement norm is empty.
    pub fn margin(&self) -> f64 {
        self.r_lo - self.r_hi
    }
}

/// Ratio of `sum |v_pivot ^ v_T|` to `sum |v_T|` over `j`-subsets `T` of the
/// other vectors. `j = 0` gives `||v_pivot||`.
pub fn ratio_r(family: &VectorFamily, pivot: usize, j: usize) -> Result<f64> {
    let gram = GramMatrix::of(family);
    ratio_with_gram(&gram, family.dim(), pivot, j)
}

pub(crate) fn ratio_with_gram(gram: &GramMatrix, dim: usize, pivot: usize, j: usize) -> Result<f64> {
    let d = gram.order();
    if d != dim {
        return Err(Error::Precondition(format!(
            "pivot ratios need m = d, got m = {d}, d = {dim}"
        )));
    }
    if pivot >= d {
        return Err(Error::InvalidSubset(format!("pivot {pivot} out of range")));
    }
    if j + 1 > d {
        return Err(Error::Precondition(format!(
            "need 0 <= j <= d - 1, got j = {j}, d = {d}"
        )));
    }
    if j == 0 {
        return Ok(gram.get(pivot, pivot).sqrt());
    }
    let others: Vec<usize> = (0..d).filter(|&i| i != pivot).collect();
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    let mut with_pivot = Vec::with_capacity(j + 1);
    let mut without = Vec::with_capacity(j);
    let mut cursor = Combinations::new(d - 1, j, u128::MAX)?;
    while cursor.advance() {
        without.clear();
        without.extend(cursor.current().iter().map(|&i| others[i]));
        with_pivot.clear();
        with_pivot.push(pivot);
        with_pivot.extend_from_slice(&without);
        num.add(gram.wedge_volume(&with_pivot)?);
        den.add(gram.wedge_volume(&without)?);
    }
    let den = den.value();
    if den <= 0.0 {
        return Err(Error::ZeroDenominator(format!(
            "ratio at pivot {pivot}, j = {j}"
        )));
    }
    Ok(num.value() / den)
}

/// Reduction inequality `R_{k-1} <= R_{k-2}` at pivot 0.
pub fn check_reduction(family: &VectorFamily, k: usize) -> Result<RatioPair> {
    check_reduction_at(family, 0, k, DEFAULT_TOLERANCE)
}

pub fn check_reduction_at(family: &VectorFamily, pivot: usize, k: usize, tolerance: f64) -> Result<RatioPair> {
    let d = family.dim();
    if k < 2 || k > d {
        return Err(Error::Precondition(format!(
            "need 2 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    let gram = GramMatrix::of(family);
    let r_hi = ratio_with_gram(&gram, d, pivot, k - 1)?;
    let r_lo = ratio_with_gram(&gram, d, pivot, k - 2)?;
    Ok(RatioPair {
        pivot,
        j_hi: k - 1,
        j_lo: k - 2,
        r_hi,
        r_lo,
        feasible: r_hi <= r_lo + tolerance,
    })
}
