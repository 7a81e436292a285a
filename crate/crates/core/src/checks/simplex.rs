use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{GramMatrix, VectorFamily};
use crate::summation::CompensatedSum;

/// Margin of `sum_{j>=2} |u_1 ^ .. ^ û_j ^ .. ^ u_d| ||u_j|| >= |u_2 ^ .. ^ u_d| ||u_1||`
/// (hats mark omitted vectors).
pub fn check_claim(family: &VectorFamily) -> Result<f64> {
    let (m, d) = (family.count(), family.dim());
    if m != d || d < 2 {
        return Err(Error::Precondition(format!(
            "need m = d >= 2, got m = {m}, d = {d}"
        )));
    }
    let gram = GramMatrix::of(family);
    let norm = |i: usize| gram.get(i, i).sqrt();
    let omit = |j: usize| (0..d).filter(|&i| i != j).collect::<Vec<_>>();
    let mut lhs = CompensatedSum::new();
    for j in 1..d {
        lhs.add(gram.wedge_volume(&omit(j))? * norm(j));
    }
    let rhs = gram.wedge_volume(&omit(0))? * norm(0);
    Ok(lhs.value() - rhs)
}

/// Barycentric coordinates from two independent routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Barycentric {
    /// Solution of the affine linear system.
    pub linear: Vec<f64>,
    /// Ratios of sub-simplex volumes; only for points in the closed simplex.
    pub wedge: Option<Vec<f64>>,
}

impl Barycentric {
    /// `max |linear - wedge| / max |linear|`, if the wedge route ran.
    pub fn disagreement(&self) -> Option<f64> {
        let wedge = self.wedge.as_ref()?;
        let scale = self.linear.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        let diff = self
            .linear
            .iter()
            .zip(wedge)
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        Some(diff / scale)
    }
}

const INSIDE_SLACK: f64 = 1e-12;

/// Barycentric coordinates of `point` with respect to the simplex whose `d`
/// vertices are the vectors of `vertices` (each in `R^{d-1}`).
///
/// The wedge route sets `beta_j = |wedge_{i != j}(v_i - u)| / |wedge_{i>0}(v_i - v_0)|`,
/// the volume of the sub-simplex opposite `v_j` over the volume of the simplex.
pub fn barycentric_coordinates(vertices: &VectorFamily, point: &[f64]) -> Result<Barycentric> {
    let d = vertices.count();
    let dim = vertices.dim();
    if d < 2 || dim + 1 != d || point.len() != dim {
        return Err(Error::Precondition(format!(
            "need d vertices in R^(d-1) and a point in R^(d-1), got {d} vertices in R^{dim}, point in R^{}",
            point.len()
        )));
    }
    let edges: Vec<Vec<f64>> = (1..d)
        .map(|i| vertices.vector(i).iter().zip(vertices.vector(0)).map(|(a, b)| a - b).collect())
        .collect();
    let full = square_volume(&edges);
    if full == 0.0 {
        return Err(Error::DegenerateSimplex);
    }

    let system = DMatrix::from_fn(d, d, |r, c| {
        if r < dim {
            vertices.vector(c)[r]
        } else {
            1.0
        }
    });
    let mut rhs = DVector::from_element(d, 1.0);
    for (r, &x) in point.iter().enumerate() {
        rhs[r] = x;
    }
    let linear: Vec<f64> = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::DegenerateSimplex)?
        .iter()
        .copied()
        .collect();

    let wedge = if linear.iter().all(|&b| b >= -INSIDE_SLACK) {
        let shifted: Vec<Vec<f64>> = vertices
            .vectors()
            .map(|v| v.iter().zip(point).map(|(a, b)| a - b).collect())
            .collect();
        let betas = (0..d)
            .map(|j| {
                let rest: Vec<Vec<f64>> = (0..d).filter(|&i| i != j).map(|i| shifted[i].clone()).collect();
                square_volume(&rest) / full
            })
            .collect::<Vec<_>>();
        Some(betas)
    } else {
        None
    };
    Ok(Barycentric { linear, wedge })
}

/// `|v_1 ^ .. ^ v_n|` for `n` vectors in `R^n`, as `|det|` of the LU factors.
fn square_volume(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    DMatrix::from_fn(n, n, |r, c| rows[r][c]).lu().determinant().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> VectorFamily {
        VectorFamily::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn claim_orthonormal_and_planar() {
        for d in 2..=7 {
            let m = check_claim(&VectorFamily::standard_basis(d)).unwrap();
            assert!((m - (d as f64 - 2.0)).abs() < 1e-12);
        }
        let f = VectorFamily::new(vec![vec![0.3, 2.0], vec![-1.1, 0.4]]).unwrap();
        assert!(check_claim(&f).unwrap().abs() < 1e-14);
    }

    #[test]
    fn centroid() {
        let b = barycentric_coordinates(&triangle(), &[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        for x in &b.linear {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
        for x in b.wedge.as_ref().unwrap() {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn vertex_indicator() {
        let b = barycentric_coordinates(&triangle(), &[1.0, 0.0]).unwrap();
        let expect = [0.0, 1.0, 0.0];
        for (x, e) in b.linear.iter().zip(expect) {
            assert!((x - e).abs() < 1e-14);
        }
        assert!(b.disagreement().unwrap() < 1e-12);
    }

    #[test]
    fn outside_point_skips_wedge_route() {
        let b = barycentric_coordinates(&triangle(), &[2.0, 2.0]).unwrap();
        assert!(b.wedge.is_none());
        assert!((b.linear.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_simplex() {
        let flat = VectorFamily::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(
            barycentric_coordinates(&flat, &[0.5, 0.5]),
            Err(Error::DegenerateSimplex)
        ));
    }

    #[test]
    fn segment_in_one_dimension() {
        let seg = VectorFamily::new(vec![vec![-1.0], vec![3.0]]).unwrap();
        let b = barycentric_coordinates(&seg, &[0.0]).unwrap();
        assert!((b.linear[0] - 0.75).abs() < 1e-14);
        assert!((b.wedge.unwrap()[0] - 0.75).abs() < 1e-14);
    }
}
