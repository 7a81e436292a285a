use crate::error::{Error, Result};

/// An ordered list of `m` vectors in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    dim: usize,
    data: Vec<f64>,
}

impl VectorFamily {
    /// Builds a family from explicit rows. Every row must have the same
    /// positive length and finite coordinates.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidFamily("family has no vectors".into()));
        }
        let dim = rows[0].len();
        let mut data = Vec::with_capacity(dim * rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidFamily(format!(
                    "vector {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_flat(dim, data)
    }

    /// Builds a family from `count * dim` row-major coordinates.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFamily("dimension must be at least 1".into()));
        }
        if data.is_empty() || data.len() % dim != 0 {
            return Err(Error::InvalidFamily(format!(
                "{} coordinates do not split into vectors of dimension {dim}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidFamily(format!(
                "coordinate {} of vector {} is not finite",
                pos % dim,
                pos / dim
            )));
        }
        Ok(Self { dim, data })
    }

    /// The `d` standard basis vectors of `R^d`.
    pub fn standard_basis(d: usize) -> Self {
        Self::diagonal(&vec![1.0; d])
    }

    /// Scaled basis vectors `scales[i] * e_i`.
    pub fn diagonal(scales: &[f64]) -> Self {
        let d = scales.len();
        let mut data = vec![0.0; d * d];
        for (i, &s) in scales.iter().enumerate() {
            data[i * d + i] = s;
        }
        Self { dim: d, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.vectors().map(<[f64]>::to_vec).collect()
    }

    pub fn norm(&self, i: usize) -> f64 {
        norm(self.vector(i))
    }

    /// Replaces vector `i`; the new vector must have the family's dimension.
    pub fn with_vector(&self, i: usize, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::InvalidFamily(format!(
                "replacement has {} coordinates, expected {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidFamily("replacement is not finite".into()));
        }
        let mut out = self.clone();
        out.data[i * self.dim..(i + 1) * self.dim].copy_from_slice(v);
        Ok(out)
    }

    /// Keeps the vectors at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.count() {
                return Err(Error::InvalidSubset(format!(
                    "index {i} out of range for {} vectors",
                    self.count()
                )));
            }
            data.extend_from_slice(self.vector(i));
        }
        Self::from_flat(self.dim, data)
    }

    /// Applies `f` to every vector.
    pub fn map_vectors(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let rows = self.vectors().map(&mut f).collect();
        Self::new(rows)
    }

    /// Multiplies every coordinate by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
