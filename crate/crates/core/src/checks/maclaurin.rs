use super::{CheckOptions, EQUALITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{elementary_symmetric_all, VectorFamily};
use crate::subsets::binomial_f64;
use crate::sums::{PowerExponent, WedgeSums};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
}

impl Verdict {
    pub fn from_margin(margin: f64, tolerance: f64) -> Self {
        // NaN margins count as violations
        if !(margin >= -tolerance) {
            Verdict::Violated
        } else if margin.abs() <= EQUALITY_TOLERANCE {
            Verdict::Equality
        } else {
            Verdict::Holds
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        }
    }

    /// Worst of a sequence: any violation wins, all-equality stays equality.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Equality;
        for v in verdicts {
            match v {
                Verdict::Violated => return Verdict::Violated,
                Verdict::Holds => out = Verdict::Holds,
                Verdict::Equality => {}
            }
        }
        out
    }
}

/// Chain `M_1 >= M_2 >= ... >= M_{k_max}` with per-pair margins.
#[derive(Debug, Clone, PartialEq)]
pub struct MaclaurinReport {
    pub p: PowerExponent,
    /// `means[k - 1] = M_{k,p}`.
    pub means: Vec<f64>,
    /// `margins[k - 2] = M_{k-1,p} - M_{k,p}`.
    pub margins: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    pub tolerance: f64,
}

impl MaclaurinReport {
    fn from_means(p: PowerExponent, means: Vec<f64>, tolerance: f64) -> Self {
        let margins: Vec<f64> = means.windows(2).map(|w| w[0] - w[1]).collect();
        let verdicts = margins
            .iter()
            .map(|&m| Verdict::from_margin(m, tolerance))
            .collect();
        Self {
            p,
            means,
            margins,
            verdicts,
            tolerance,
        }
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::combine(self.verdicts.iter().copied())
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Classical Maclaurin chain `(e_k / C(m,k))^(1/k)` for positive reals.
pub fn check_classical_maclaurin(xs: &[f64]) -> Result<MaclaurinReport> {
    if xs.is_empty() {
        return Err(Error::Precondition("need at least one value".into()));
    }
    if let Some((index, &value)) = xs
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x > 0.0))
    {
        return Err(Error::NonPositiveInput { index, value });
    }
    let m = xs.len();
    let e = elementary_symmetric_all(xs, m);
    let means = (1..=m)
        .map(|k| (e[k] / binomial_f64(m, k)).powf(1.0 / k as f64))
        .collect();
    Ok(MaclaurinReport::from_means(
        PowerExponent::Finite(1.0),
        means,
        super::DEFAULT_TOLERANCE,
    ))
}

/// Vector Maclaurin chain for `k = 1..=k_max` with default options.
pub fn check_vector_maclaurin(family: &VectorFamily, p: PowerExponent, k_max: usize) -> Result<MaclaurinReport> {
    check_vector_maclaurin_with(family, p, k_max, &CheckOptions::default())
}

/// Vector Maclaurin chain; `p = 2` is evaluated through the Gram spectrum.
pub fn check_vector_maclaurin_with(
    family: &VectorFamily,
    p: PowerExponent,
    k_max: usize,
    opts: &CheckOptions,
) -> Result<MaclaurinReport> {
    let (m, d) = (family.count(), family.dim());
    if k_max == 0 || k_max > d || d > m {
        return Err(Error::Precondition(format!(
            "need 1 <= k_max <= d <= m, got k_max = {k_max}, d = {d}, m = {m}"
        )));
    }
    let sums = WedgeSums::with_cap(family, opts.cap);
    let means = if p == PowerExponent::Finite(2.0) {
        let spectrum = sums.gram().spectrum()?;
        let e = elementary_symmetric_all(spectrum.values(), k_max);
        (1..=k_max)
            .map(|k| (e[k] / binomial_f64(m, k)).powf(1.0 / (2.0 * k as f64)))
            .collect()
    } else {
        (1..=k_max)
            .map(|k| sums.evaluate(k, p).map(|v| v.mean))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(MaclaurinReport::from_means(p, means, opts.tolerance))
}
