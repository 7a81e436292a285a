use super::family::{dot, norm, VectorFamily};
use super::gram::GramMatrix;
use crate::error::{Error, Result};

/// Component of `target` orthogonal to the span of `family[subset]`.
///
/// Modified Gram-Schmidt with one reorthogonalization pass.
pub fn project_complement(family: &VectorFamily, subset: &[usize], target: &[f64]) -> Result<Vec<f64>> {
    if target.len() != family.dim() {
        return Err(Error::Precondition(format!(
            "target has {} coordinates, family dimension is {}",
            target.len(),
            family.dim()
        )));
    }
    let basis = orthonormal_basis(family, subset)?;
    Ok(remove_components(target, &basis))
}

/// Orthonormal basis of `span(family[subset])`; fails with
/// [`Error::DegenerateSpan`] if those vectors have zero wedge volume.
pub fn orthonormal_basis(family: &VectorFamily, subset: &[usize]) -> Result<Vec<Vec<f64>>> {
    if subset.len() > family.dim() {
        return Err(Error::DegenerateSpan);
    }
    let sub = family.select(subset)?;
    let volume = GramMatrix::of(&sub).wedge_volume(&(0..subset.len()).collect::<Vec<_>>())?;
    if volume == 0.0 {
        return Err(Error::DegenerateSpan);
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(subset.len());
    for v in sub.vectors() {
        let w = remove_components(v, &basis);
        let n = norm(&w);
        if n == 0.0 {
            return Err(Error::DegenerateSpan);
        }
        basis.push(w.into_iter().map(|x| x / n).collect());
    }
    Ok(basis)
}

fn remove_components(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
    w
}

/// Unit normal to the hyperplane spanned by `d - 1` independent vectors of
/// `R^d`, signed so that its first nonzero coordinate is positive.
pub fn complement_direction(family: &VectorFamily, subset: &[usize]) -> Result<Vec<f64>> {
    let d = family.dim();
    if subset.len() + 1 != d {
        return Err(Error::Precondition(format!(
            "need exactly d - 1 = {} spanning vectors, got {}",
            d - 1,
            subset.len()
        )));
    }
    let basis = orthonormal_basis(family, subset)?;
    let mut best = Vec::new();
    let mut best_norm = -1.0;
    for c in 0..d {
        let mut e = vec![0.0; d];
        e[c] = 1.0;
        let r = remove_components(&e, &basis);
        let n = norm(&r);
        if n > best_norm {
            best_norm = n;
            best = r;
        }
    }
    let unit: Vec<f64> = best.iter().map(|x| x / best_norm).collect();
    let u = remove_components(&unit, &basis);
    let n = norm(&u);
    let mut u: Vec<f64> = u.into_iter().map(|x| x / n).collect();
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(u)
}
