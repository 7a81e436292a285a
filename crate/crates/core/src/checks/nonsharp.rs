use crate::error::{Error, Result};
use crate::linalg::VectorFamily;
use crate::sums::{PowerExponent, WedgeSums};

/// `2 (d - k + 1) / (d - k + 2)`: in `[1, 2)`, and equal to 1 only at `k = d`.
pub fn nonsharp_bound(d: usize, k: usize) -> f64 {
    let a = (d - k + 1) as f64;
    2.0 * a / (a + 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonSharpReport {
    pub k: usize,
    /// `M_{k,1} / M_{k-1,1}`.
    pub ratio: f64,
    pub bound: f64,
    /// `bound - ratio`, guaranteed nonnegative.
    pub margin: f64,
    /// `1 - ratio`, the conjectured sharp margin.
    pub sharp_margin: f64,
}

pub fn check_nonsharp(family: &VectorFamily, k: usize) -> Result<NonSharpReport> {
    let (m, d) = (family.count(), family.dim());
    if m != d || k <= 2 || k > d {
        return Err(Error::Precondition(format!(
            "need m = d and 2 < k <= d, got k = {k}, d = {d}, m = {m}"
        )));
    }
    let sums = WedgeSums::new(family);
    let hi = sums.evaluate(k, PowerExponent::Finite(1.0))?.mean;
    let lo = sums.evaluate(k - 1, PowerExponent::Finite(1.0))?.mean;
    if lo <= 0.0 {
        return Err(Error::ZeroDenominator(format!("M_{{{},1}}", k - 1)));
    }
    let ratio = hi / lo;
    let bound = nonsharp_bound(d, k);
    Ok(NonSharpReport {
        k,
        ratio,
        bound,
        margin: bound - ratio,
        sharp_margin: 1.0 - ratio,
    })
}
