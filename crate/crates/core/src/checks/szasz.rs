use crate::error::{Error, Result};
use crate::linalg::GramMatrix;
use crate::subsets::{binomial_f64, Combinations};
use crate::summation::CompensatedSum;

/// Both sides of the Szasz inequality
/// `(prod_{|A|=k} det M_A)^(1/C(n-1,k-1)) <= (prod_{|B|=k-1} det M_B)^(1/C(n-1,k-2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SzaszReport {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; zero by convention when `zero_minor` is set.
    pub margin: f64,
    /// Some principal minor vanished, so the log-space comparison is undefined.
    pub zero_minor: bool,
}

/// Szasz margin for `1 < k < n`, with products formed in log space.
pub fn check_szasz(matrix: &GramMatrix, k: usize) -> Result<SzaszReport> {
    let n = matrix.order();
    if k < 2 || k >= n {
        return Err(Error::Precondition(format!(
            "need 1 < k < n, got k = {k}, n = {n}"
        )));
    }
    let lhs_log = log_minor_sum(matrix, k)?;
    let rhs_log = log_minor_sum(matrix, k - 1)?;
    match (lhs_log, rhs_log) {
        (Some(l), Some(r)) => {
            let lhs = (l / binomial_f64(n - 1, k - 1)).exp();
            let rhs = (r / binomial_f64(n - 1, k - 2)).exp();
            Ok(SzaszReport {
                k,
                lhs,
                rhs,
                margin: rhs - lhs,
                zero_minor: false,
            })
        }
        (l, r) => Ok(SzaszReport {
            k,
            lhs: l.map_or(0.0, |l| (l / binomial_f64(n - 1, k - 1)).exp()),
            rhs: r.map_or(0.0, |r| (r / binomial_f64(n - 1, k - 2)).exp()),
            margin: 0.0,
            zero_minor: true,
        }),
    }
}

/// Sum of log principal `k`-minors, `None` if any vanishes.
fn log_minor_sum(matrix: &GramMatrix, k: usize) -> Result<Option<f64>> {
    let mut acc = CompensatedSum::new();
    let mut cursor = Combinations::new(matrix.order(), k, u128::MAX)?;
    while cursor.advance() {
        match matrix.log_principal_minor(cursor.current())? {
            Some(l) => acc.add(l),
            None => return Ok(None),
        }
    }
    Ok(Some(acc.value()))
}
