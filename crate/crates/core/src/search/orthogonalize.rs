//! Replacing vectors one at a time by orthogonal substitutes with
//! `S_k` non-decreasing and `S_{k-1}` non-increasing.

use crate::checks::{check_classical_maclaurin, DEFAULT_TOLERANCE};
use crate::checks::reduction::ratio_with_gram;
use crate::error::{Error, Result};
use crate::linalg::{complement_direction, dot, GramMatrix, VectorFamily};
use crate::subsets::binomial_f64;
use crate::sums::WedgeSums;

/// Relative slack for the per-step sandwich checks.
pub const STEP_REL_TOLERANCE: f64 = 1e-10;
/// Relative slack for the end-to-end mean comparison.
pub const CHAIN_REL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Replacement {
    pub family: VectorFamily,
    pub pivot: usize,
    /// `R_{k-1}` at the pivot.
    pub lo: f64,
    /// `R_{k-2}` at the pivot.
    pub hi: f64,
    /// Norm of the substitute, `(lo + hi) / 2`.
    pub norm: f64,
    pub s_k: (f64, f64),
    pub s_km1: (f64, f64),
}

/// Swaps `family[pivot]` for a vector orthogonal to the others whose norm is
/// the midpoint of `[R_{k-1}, R_{k-2}]`.
pub fn construct_orthogonal_replacement(family: &VectorFamily, pivot: usize, k: usize) -> Result<Replacement> {
    let (m, d) = (family.count(), family.dim());
    if m != d {
        return Err(Error::Precondition(format!("need m = d, got m = {m}, d = {d}")));
    }
    if k < 2 || k > d {
        return Err(Error::Precondition(format!("need 2 <= k <= d, got k = {k}, d = {d}")));
    }
    if pivot >= d {
        return Err(Error::InvalidSubset(format!("pivot {pivot} out of range")));
    }
    let others: Vec<usize> = (0..d).filter(|&i| i != pivot).collect();
    let direction = if d == 1 {
        vec![1.0]
    } else {
        complement_direction(family, &others)?
    };
    let gram = GramMatrix::of(family);
    let lo = ratio_with_gram(&gram, d, pivot, k - 1).map_err(span_error)?;
    let hi = ratio_with_gram(&gram, d, pivot, k - 2).map_err(span_error)?;
    if lo > hi + DEFAULT_TOLERANCE * hi.max(1.0) {
        return Err(Error::InfeasibleInterval { step: pivot, lo, hi });
    }
    let norm = 0.5 * (lo + hi);
    let v: Vec<f64> = direction.iter().map(|x| norm * x).collect();
    let replaced = family.with_vector(pivot, &v)?;

    let before = WedgeSums::new(family);
    let after = WedgeSums::new(&replaced);
    let s_k = (before.s_k(k)?, after.s_k(k)?);
    let s_km1 = (before.s_k(k - 1)?, after.s_k(k - 1)?);
    if s_k.1 < s_k.0 * (1.0 - STEP_REL_TOLERANCE) {
        return Err(Error::Postcondition(format!(
            "S_{k} decreased from {} to {} at pivot {pivot}",
            s_k.0, s_k.1
        )));
    }
    if s_km1.1 > s_km1.0 * (1.0 + STEP_REL_TOLERANCE) {
        return Err(Error::Postcondition(format!(
            "S_{} increased from {} to {} at pivot {pivot}",
            k - 1,
            s_km1.0,
            s_km1.1
        )));
    }
    Ok(Replacement {
        family: replaced,
        pivot,
        lo,
        hi,
        norm,
        s_k,
        s_km1,
    })
}

// A vanishing denominator means the other vectors are dependent.
fn span_error(e: Error) -> Error {
    match e {
        Error::ZeroDenominator(_) => Error::DegenerateSpan,
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub pivot: usize,
    pub lo: f64,
    pub hi: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonalization {
    pub family: VectorFamily,
    pub k: usize,
    pub steps: Vec<Step>,
    /// `M_{k,1}` before and after.
    pub mean_k: (f64, f64),
    /// `M_{k-1,1}` before and after.
    pub mean_km1: (f64, f64),
    /// Largest `|<u_i, u_j>| / (|u_i| |u_j|)` over pairs of output vectors.
    pub max_cosine: f64,
    /// `M_{k-1} - M_k` of the output norms (classical Maclaurin closes the chain).
    pub chain_margin: f64,
}

impl Orthogonalization {
    /// `M_{k-1}(orig) >= M_{k-1}(out) >= M_k(out) >= M_k(orig)`, with relative slack.
    pub fn sandwich_holds(&self, rel: f64) -> bool {
        self.mean_k.1 >= self.mean_k.0 * (1.0 - rel)
            && self.mean_km1.1 <= self.mean_km1.0 * (1.0 + rel)
            && self.chain_margin >= -rel * self.mean_km1.1
    }
}

/// Runs the replacement on pivots `0..d` in order.
pub fn monotone_orthogonalize(family: &VectorFamily, k: usize) -> Result<Orthogonalization> {
    let d = family.dim();
    let mut current = family.clone();
    let mut steps = Vec::with_capacity(d);
    for pivot in 0..family.count() {
        let r = construct_orthogonal_replacement(&current, pivot, k).map_err(|e| match e {
            Error::InfeasibleInterval { lo, hi, .. } => Error::InfeasibleInterval { step: pivot, lo, hi },
            other => other,
        })?;
        steps.push(Step {
            pivot,
            lo: r.lo,
            hi: r.hi,
            norm: r.norm,
        });
        current = r.family;
    }
    let mean = |f: &VectorFamily, j: usize| -> Result<f64> {
        Ok((WedgeSums::new(f).s_k(j)? / binomial_f64(d, j)).powf(1.0 / j as f64))
    };
    let mean_k = (mean(family, k)?, mean(&current, k)?);
    let mean_km1 = (mean(family, k - 1)?, mean(&current, k - 1)?);
    let norms: Vec<f64> = (0..d).map(|i| current.norm(i)).collect();
    let mut max_cosine: f64 = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            let c = dot(current.vector(i), current.vector(j)).abs() / (norms[i] * norms[j]);
            max_cosine = max_cosine.max(c);
        }
    }
    let classical = check_classical_maclaurin(&norms)?;
    let chain_margin = classical.margins[k - 2];
    let out = Orthogonalization {
        family: current,
        k,
        steps,
        mean_k,
        mean_km1,
        max_cosine,
        chain_margin,
    };
    if !out.sandwich_holds(CHAIN_REL_TOLERANCE) {
        return Err(Error::Postcondition(format!(
            "sandwich failed: M_k {:?}, M_(k-1) {:?}, chain margin {}",
            out.mean_k, out.mean_km1, out.chain_margin
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::random::{random_family, Distribution};

    #[test]
    fn orthogonal_input_is_fixed() {
        let f = VectorFamily::diagonal(&[1.5, 0.5, 2.0]);
        for k in 2..=3 {
            let r = construct_orthogonal_replacement(&f, 1, k).unwrap();
            assert!((r.lo - 0.5).abs() < 1e-15 && (r.hi - 0.5).abs() < 1e-15);
            assert!((r.s_k.0 - r.s_k.1).abs() < 1e-14);
            let out = monotone_orthogonalize(&f, k).unwrap();
            for (a, b) in out.family.as_flat().iter().zip(f.as_flat()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        let e = VectorFamily::standard_basis(4);
        assert_eq!(monotone_orthogonalize(&e, 3).unwrap().family, e);
    }

    #[test]
    fn two_dimensional_hand_case() {
        let f = VectorFamily::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let r = construct_orthogonal_replacement(&f, 1, 2).unwrap();
        // R_1 = |v_0 ^ v_1| / |v_0| = 1, R_0 = |v_1| = sqrt(2)
        assert!((r.lo - 1.0).abs() < 1e-15);
        assert!((r.hi - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(r.s_k.1 >= r.s_k.0);
        assert!(r.s_km1.1 <= r.s_km1.0);
        assert!(r.family.vector(1)[0].abs() < 1e-15);
        assert!(r.family.vector(1)[1] > 0.0);
    }

    #[test]
    fn pivot_zero_of_the_same_pair() {
        // R_1 at pivot 0 is |v_0 ^ v_1| / |v_1| = 1/sqrt(2); R_0 is |v_0| = 1
        let f = VectorFamily::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let r = construct_orthogonal_replacement(&f, 0, 2).unwrap();
        assert!((r.lo - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((r.hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_four_dimensional_k3() {
        for seed in 0..20 {
            let f = random_family(4, 4, Distribution::Gaussian, seed).unwrap();
            construct_orthogonal_replacement(&f, 0, 3).unwrap();
            let out = monotone_orthogonalize(&f, 3).unwrap();
            assert!(out.max_cosine <= 1e-9, "seed {seed}: {}", out.max_cosine);
            assert!(out.sandwich_holds(1e-9));
            assert_eq!(out.steps.len(), 4);
        }
    }

    #[test]
    fn dependent_others() {
        let f = VectorFamily::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 2.0, 0.0]]).unwrap();
        assert_eq!(construct_orthogonal_replacement(&f, 0, 2).unwrap_err(), Error::DegenerateSpan);
    }
}
