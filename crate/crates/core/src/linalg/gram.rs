use nalgebra::DMatrix;

use super::family::{dot, VectorFamily};
use crate::error::{Error, Result};

/// Eigenvalues in `[-CLAMP_REL * lambda_max, 0)` are rounded up to zero;
/// anything more negative is reported as [`Error::DegenerateGram`].
pub const CLAMP_REL: f64 = 1e-9;

/// Subset sizes from which eigenvalue products are formed in log space.
pub const LOG_PRODUCT_MIN_K: usize = 20;

const SYMMETRY_REL: f64 = 1e-12;

/// Symmetric positive-semidefinite matrix of inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    /// Gram matrix of `family`; entry `(i, j)` is `<v_i, v_j>`.
    pub fn of(family: &VectorFamily) -> Self {
        let m = family.count();
        let mut entries = vec![0.0; m * m];
        for i in 0..m {
            let vi = family.vector(i);
            for j in i..m {
                let g = dot(vi, family.vector(j));
                entries[i * m + j] = g;
                entries[j * m + i] = g;
            }
        }
        Self { order: m, entries }
    }

    /// Wraps an explicit row-major matrix after checking symmetry and
    /// positive semidefiniteness (eigenvalues >= -1e-9 times the largest
    /// diagonal entry). The two triangles are averaged.
    pub fn from_entries(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 || entries.len() != order * order {
            return Err(Error::Precondition(format!(
                "{} entries do not form a {order}x{order} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("matrix has non-finite entries".into()));
        }
        let scale = entries.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        let mut sym = entries;
        for i in 0..order {
            for j in i + 1..order {
                let (a, b) = (sym[i * order + j], sym[j * order + i]);
                if (a - b).abs() > SYMMETRY_REL * scale {
                    return Err(Error::Precondition(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                sym[i * order + j] = avg;
                sym[j * order + i] = avg;
            }
        }
        let gram = Self { order, entries: sym };
        let max_diag = (0..order).map(|i| gram.get(i, i)).fold(0.0_f64, f64::max);
        let values = DMatrix::from_row_slice(order, order, &gram.entries).symmetric_eigenvalues();
        let threshold = CLAMP_REL * max_diag;
        if let Some(&bad) = values.iter().find(|&&l| l < -threshold) {
            return Err(Error::DegenerateGram {
                eigenvalue: bad,
                threshold,
            });
        }
        Ok(gram)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Simultaneous row/column permutation: new `(i, j)` is old `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.order;
        let mut entries = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                entries[i * m + j] = self.get(perm[i], perm[j]);
            }
        }
        Self { order: m, entries }
    }


    /// Spectrum of the whole matrix.
    pub fn spectrum(&self) -> Result<EigenSpectrum> {
        EigenSpectrum::of_matrix(DMatrix::from_row_slice(self.order, self.order, &self.entries))
    }

    fn submatrix(&self, idx: &[usize]) -> DMatrix<f64> {
        let k = idx.len();
        DMatrix::from_fn(k, k, |r, c| self.get(idx[r], idx[c]))
    }

    /// Natural log of the principal minor on `idx`, or `None` when it
    /// vanishes (a zero or clamped eigenvalue). The empty minor is 1.
    pub fn log_principal_minor(&self, idx: &[usize]) -> Result<Option<f64>> {
        match idx.len() {
            0 => Ok(Some(0.0)),
            1 => {
                let g = self.get(idx[0], idx[0]);
                Ok((g > 0.0).then(|| g.ln()))
            }
            _ => {
                let spec = EigenSpectrum::of_matrix(self.submatrix(idx))?;
                Ok(spec.log_product())
            }
        }
    }

    /// Principal minor `det(G_S)` computed from the eigenvalues of `G_S`.
    pub fn principal_minor(&self, idx: &[usize]) -> Result<f64> {
        match idx.len() {
            0 => Ok(1.0),
            1 => Ok(self.get(idx[0], idx[0])),
            _ => Ok(EigenSpectrum::of_matrix(self.submatrix(idx))?.product()),
        }
    }

    /// `|v_{i_1} ^ ... ^ v_{i_k}|`, the square root of the principal minor.
    pub fn wedge_volume(&self, idx: &[usize]) -> Result<f64> {
        match idx.len() {
            0 => Ok(1.0),
            1 => Ok(self.get(idx[0], idx[0]).sqrt()),
            _ => {
                let spec = EigenSpectrum::of_matrix(self.submatrix(idx))?;
                Ok(spec.sqrt_product())
            }
        }
    }
}

/// Eigenvalues of a symmetric PSD matrix, sorted descending, with small
/// negative values clamped to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
    clamp_applied: bool,
}

impl EigenSpectrum {
    fn of_matrix(mat: DMatrix<f64>) -> Result<Self> {
        let mut values: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        Self::from_values(values)
    }

    /// Applies the clamp rule to already-computed eigenvalues.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        let lambda_max = values.first().copied().unwrap_or(0.0).max(0.0);
        let threshold = CLAMP_REL * lambda_max;
        let mut clamp_applied = false;
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -threshold {
                    return Err(Error::DegenerateGram {
                        eigenvalue: *v,
                        threshold,
                    });
                }
                *v = 0.0;
                clamp_applied = true;
            }
        }
        Ok(Self {
            values,
            clamp_applied,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn clamp_applied(&self) -> bool {
        self.clamp_applied
    }

    /// Number of eigenvalues above `rel * lambda_max`.
    pub fn rank(&self, rel: f64) -> usize {
        let cut = rel * self.values.first().copied().unwrap_or(0.0);
        self.values.iter().filter(|&&v| v > cut).count()
    }

    fn has_zero(&self) -> bool {
        self.values.iter().any(|&v| v == 0.0)
    }

    fn log_product(&self) -> Option<f64> {
        (!self.has_zero()).then(|| self.values.iter().map(|v| v.ln()).sum())
    }

    fn product(&self) -> f64 {
        if self.has_zero() {
            0.0
        } else if self.values.len() >= LOG_PRODUCT_MIN_K {
            self.log_product().map_or(0.0, f64::exp)
        } else {
            self.values.iter().product()
        }
    }

    fn sqrt_product(&self) -> f64 {
        if self.has_zero() {
            0.0
        } else if self.values.len() >= LOG_PRODUCT_MIN_K {
            self.log_product().map_or(0.0, |l| (0.5 * l).exp())
        } else {
            self.values.iter().product::<f64>().sqrt()
        }
    }
}

/// Gram matrix of a family.
pub fn gram(family: &VectorFamily) -> GramMatrix {
    GramMatrix::of(family)
}

/// Volume of the parallelotope spanned by the vectors of `family` at `subset`.
pub fn wedge_volume(family: &VectorFamily, subset: &[usize]) -> Result<f64> {
    let k = subset.len();
    if k > family.dim().min(family.count()) {
        return Err(Error::Precondition(format!(
            "subset size {k} exceeds min(d, m) = {}",
            family.dim().min(family.count())
        )));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= family.count()) {
        return Err(Error::InvalidSubset(format!("index {bad} out of range")));
    }
    let sub = family.select(subset)?;
    GramMatrix::of(&sub).wedge_volume(&(0..k).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(rows: &[&[f64]]) -> VectorFamily {
        VectorFamily::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn orthonormal_gram_is_identity() {
        let g = gram(&fam(&[&[1.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(g.entries(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn small_grams() {
        assert_eq!(gram(&fam(&[&[1.0, 0.0], &[1.0, 1.0]])).entries(), &[1.0, 1.0, 1.0, 2.0]);
        assert_eq!(gram(&fam(&[&[3.0, 4.0]])).entries(), &[25.0]);
    }

    #[test]
    fn wedge_examples() {
        let e = fam(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(wedge_volume(&e, &[0, 1]).unwrap(), 1.0);
        let rect = fam(&[&[3.0, 0.0], &[0.0, 4.0]]);
        assert!((wedge_volume(&rect, &[0, 1]).unwrap() - 12.0).abs() < 1e-12);
        let shear = fam(&[&[1.0, 0.0], &[1.0, 1.0]]);
        assert!((wedge_volume(&shear, &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
        let tri = fam(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[1.0, 1.0, 1.0]]);
        assert!((wedge_volume(&tri, &[0, 1, 2]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_index_is_the_norm() {
        let f = fam(&[&[0.3, -1.7, 2.9]]);
        assert_eq!(wedge_volume(&f, &[0]).unwrap(), f.norm(0));
    }

    #[test]
    fn dependent_vectors_have_zero_or_tiny_volume() {
        let f = fam(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        assert!(wedge_volume(&f, &[0, 1]).unwrap() < 1e-6);
    }

    #[test]
    fn oversized_subset_rejected() {
        let f = fam(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(wedge_volume(&f, &[0, 1, 2]).is_err());
    }

    #[test]
    fn clamp_and_degenerate() {
        let s = EigenSpectrum::from_values(vec![1.0, -1e-12]).unwrap();
        assert!(s.clamp_applied());
        assert_eq!(s.values(), &[1.0, 0.0]);
        let err = EigenSpectrum::from_values(vec![1.0, -1e-6]).unwrap_err();
        assert!(matches!(err, Error::DegenerateGram { .. }));
    }

    #[test]
    fn from_entries_rejects_indefinite() {
        let err = GramMatrix::from_entries(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateGram { .. }));
        assert!(GramMatrix::from_entries(2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
    }

    #[test]
    fn large_k_uses_log_space_without_overflow() {
        // 0.1^24 is representable; (1e13)^48 is not, but its log is
        let f = VectorFamily::diagonal(&vec![0.1; 24]);
        let g = gram(&f);
        let v = g.wedge_volume(&(0..24).collect::<Vec<_>>()).unwrap();
        assert!((v / 1e-24 - 1.0).abs() < 1e-10);
        let big = VectorFamily::diagonal(&vec![1e13; 24]);
        let lg = gram(&big).log_principal_minor(&(0..24).collect::<Vec<_>>()).unwrap().unwrap();
        assert!((lg / (48.0 * 13.0 * std::f64::consts::LN_10) - 1.0).abs() < 1e-12);
    }
}
