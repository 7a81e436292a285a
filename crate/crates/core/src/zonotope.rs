//! Zonotopes `Z = sum_i w_i [-v_i, v_i]` and their intrinsic volumes.
//!
//! With the default weights `w_i = 1/2`, `V_k(Z)` is the plain wedge sum
//! `S_k` of the generators.

use crate::checks::nonsharp_bound;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, GramMatrix, VectorFamily};
use crate::subsets::{Combinations, DEFAULT_SUBSET_CAP};
use crate::summation::CompensatedSum;
use crate::sums::{PowerExponent, WedgeSums};

/// Unit directions must satisfy `| ||u|| - 1 | <= UNIT_TOLERANCE`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    generators: VectorFamily,
    weights: Vec<f64>,
}

impl Zonotope {
    /// Sum of segments `1/2 [-v_i, v_i]`.
    pub fn new(generators: VectorFamily) -> Self {
        let weights = vec![0.5; generators.count()];
        Self {
            generators,
            weights,
        }
    }

    pub fn with_weights(generators: VectorFamily, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != generators.count() {
            return Err(Error::Precondition(format!(
                "{} weights for {} generators",
                weights.len(),
                generators.count()
            )));
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::NonPositiveInput { index, value });
        }
        Ok(Self {
            generators,
            weights,
        })
    }

    /// Segments `1/2 [-e_i, e_i]`: the unit cube centred at the origin.
    pub fn unit_cube(d: usize) -> Self {
        Self::new(VectorFamily::standard_basis(d))
    }

    pub fn generators(&self) -> &VectorFamily {
        &self.generators
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    fn default_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.5)
    }

    fn weight_factor(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&i| 2.0 * self.weights[i]).product()
    }

    /// `h_Z(u) = sum_i w_i |<u, v_i>|`.
    pub fn support_function(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u)?;
        Ok(self
            .generators
            .vectors()
            .zip(&self.weights)
            .map(|(v, w)| w * dot(u, v).abs())
            .sum())
    }

    /// `V_k(Z) = sum_{|S|=k} (prod_{i in S} 2 w_i) |v_S|`, `V_0 = 1`.
    pub fn intrinsic_volume(&self, k: usize) -> Result<f64> {
        self.intrinsic_volume_capped(k, DEFAULT_SUBSET_CAP)
    }

    pub fn intrinsic_volume_capped(&self, k: usize, cap: u128) -> Result<f64> {
        let d = self.dim();
        if k > d {
            return Err(Error::Precondition(format!("k = {k} exceeds d = {d}")));
        }
        if k == 0 {
            return Ok(1.0);
        }
        let m = self.generators.count();
        if k > m {
            return Ok(0.0);
        }
        if self.default_weights() {
            return Ok(WedgeSums::with_cap(&self.generators, cap)
                .evaluate(k, PowerExponent::Finite(1.0))?
                .raw_sum);
        }
        let gram = GramMatrix::of(&self.generators);
        self.weighted_sum(m, k, cap, |s| gram.wedge_volume(s))
    }

    /// `V_0..=V_{k_max}`.
    pub fn intrinsic_volumes(&self, k_max: usize) -> Result<Vec<f64>> {
        (0..=k_max).map(|k| self.intrinsic_volume(k)).collect()
    }

    /// Generators replaced by their components orthogonal to the unit vector
    /// `u`. The result stays in `R^d`.
    pub fn project_generators(&self, u: &[f64]) -> Result<Zonotope> {
        self.check_unit(u)?;
        let generators = self.generators.map_vectors(|v| {
            let c = dot(v, u);
            v.iter().zip(u).map(|(x, ui)| x - c * ui).collect()
        })?;
        Ok(Zonotope {
            generators,
            weights: self.weights.clone(),
        })
    }

    /// `V_k(pi_{u^perp} Z) = sum_{|S|=k} (prod 2 w_i) |v_S ^ u|` for unit `u`,
    /// evaluated on the original generators.
    pub fn projected_intrinsic_volume(&self, u: &[f64], k: usize) -> Result<f64> {
        self.check_unit(u)?;
        let d = self.dim();
        if k + 1 > d {
            return Err(Error::Precondition(format!(
                "projected volume needs k <= d - 1, got k = {k}, d = {d}"
            )));
        }
        if k == 0 {
            return Ok(1.0);
        }
        let m = self.generators.count();
        if k > m {
            return Ok(0.0);
        }
        let mut rows = self.generators.to_rows();
        rows.push(u.to_vec());
        let gram = GramMatrix::of(&VectorFamily::new(rows)?);
        let mut with_u = Vec::with_capacity(k + 1);
        self.weighted_sum(m, k, DEFAULT_SUBSET_CAP, |s| {
            with_u.clear();
            with_u.extend_from_slice(s);
            with_u.push(m);
            gram.wedge_volume(&with_u)
        })
    }

    fn weighted_sum(
        &self,
        m: usize,
        k: usize,
        cap: u128,
        mut volume: impl FnMut(&[usize]) -> Result<f64>,
    ) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        let mut cursor = Combinations::new(m, k, cap)?;
        while cursor.advance() {
            let s = cursor.current();
            acc.add(self.weight_factor(s) * volume(s)?);
        }
        Ok(acc.value())
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "direction has {} coordinates, expected {}",
                u.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    fn check_unit(&self, u: &[f64]) -> Result<()> {
        self.check_len(u)?;
        let n = norm(u);
        if !((n - 1.0).abs() <= UNIT_TOLERANCE) {
            return Err(Error::NonUnitDirection { norm: n });
        }
        Ok(())
    }
}

/// Which projection inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionForm {
    /// `V_{k-1}(piZ)/V_{k-1}(Z) <= V_{k-2}(piZ)/V_{k-2}(Z)`; conjectural.
    Sharp,
    /// Same with the factor `2(d-k+1)/(d-k+2)` on the right; a theorem for `3 <= k <= d`.
    Constant,
}

/// `RHS - LHS` of the selected projection inequality.
pub fn check_projection_inequality(z: &Zonotope, u: &[f64], k: usize, form: ProjectionForm) -> Result<f64> {
    let d = z.dim();
    let lowest = match form {
        ProjectionForm::Sharp => 2,
        ProjectionForm::Constant => 3,
    };
    if k < lowest || k > d {
        return Err(Error::Precondition(format!(
            "need {lowest} <= k <= d, got k = {k}, d = {d}"
        )));
    }
    let ratio = |j: usize| -> Result<f64> {
        let full = z.intrinsic_volume(j)?;
        if full <= 0.0 {
            return Err(Error::ZeroDenominator(format!("V_{j}(Z)")));
        }
        Ok(z.projected_intrinsic_volume(u, j)? / full)
    };
    let lhs = ratio(k - 1)?;
    let rhs = ratio(k - 2)?;
    let factor = match form {
        ProjectionForm::Sharp => 1.0,
        ProjectionForm::Constant => nonsharp_bound(d, k),
    };
    Ok(factor * rhs - lhs)
}

/// Log-concavity margins `1 - factor * V_{j+1} V_{j-1} / V_j^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct McMullenReport {
    pub j: usize,
    /// `(j+1)(m-j+1) / (j(m-j))`, which would follow from the conjecture.
    pub strong_factor: f64,
    /// `(j+1)/j`, valid for every convex body.
    pub weak_factor: f64,
    pub strong_margin: f64,
    pub weak_margin: f64,
}

pub fn mcmullen_factors(m: usize, j: usize) -> (f64, f64) {
    let (jf, mf) = (j as f64, m as f64);
    let strong = (jf + 1.0) * (mf - jf + 1.0) / (jf * (mf - jf));
    let weak = (jf + 1.0) / jf;
    (strong, weak)
}

pub fn check_mcmullen_zonotope(z: &Zonotope, j: usize) -> Result<McMullenReport> {
    let d = z.dim();
    let m = z.generators().count();
    if j < 1 || j + 1 > d || m <= j {
        return Err(Error::Precondition(format!(
            "need 1 <= j <= d - 1 and m > j, got j = {j}, d = {d}, m = {m}"
        )));
    }
    let v = z.intrinsic_volumes(j + 1)?;
    if v[j] <= 0.0 {
        return Err(Error::ZeroDenominator(format!("V_{j}(Z)")));
    }
    let ratio = v[j + 1] * v[j - 1] / (v[j] * v[j]);
    let (strong_factor, weak_factor) = mcmullen_factors(m, j);
    Ok(McMullenReport {
        j,
        strong_factor,
        weak_factor,
        strong_margin: 1.0 - strong_factor * ratio,
        weak_margin: 1.0 - weak_factor * ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::binomial;

    #[test]
    fn cube_support_function() {
        let z = Zonotope::unit_cube(3);
        assert_eq!(z.support_function(&[1.0, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(z.support_function(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        let s = 0.5_f64.sqrt();
        let sq = Zonotope::unit_cube(2);
        assert!((sq.support_function(&[s, s]).unwrap() - s).abs() < 1e-15);
        let width = sq.support_function(&[s, s]).unwrap() + sq.support_function(&[-s, -s]).unwrap();
        assert!((width - 2.0 * s).abs() < 1e-15);
    }

    #[test]
    fn cube_intrinsic_volumes_are_binomials() {
        for d in 1..=8 {
            let z = Zonotope::unit_cube(d);
            for k in 0..=d {
                assert_eq!(z.intrinsic_volume(k).unwrap(), binomial(d, k) as f64);
            }
        }
    }

    #[test]
    fn side_two_square() {
        let z = Zonotope::new(VectorFamily::diagonal(&[2.0, 2.0]));
        assert_eq!(z.intrinsic_volumes(2).unwrap(), vec![1.0, 4.0, 4.0]);
    }

    #[test]
    fn weights_scale_terms() {
        // segments [-e_i, e_i] form the cube of side 2
        let z = Zonotope::with_weights(VectorFamily::standard_basis(2), vec![1.0, 1.0]).unwrap();
        assert_eq!(z.intrinsic_volumes(2).unwrap(), vec![1.0, 4.0, 4.0]);
        assert!(Zonotope::with_weights(VectorFamily::standard_basis(2), vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn top_volume_is_determinant() {
        let f = VectorFamily::new(vec![
            vec![1.0, 2.0, 0.5],
            vec![-0.3, 1.0, 1.0],
            vec![0.7, 0.1, 2.0],
        ])
        .unwrap();
        // det by cofactor expansion
        let det = 1.0 * (1.0 * 2.0 - 1.0 * 0.1) - 2.0 * (-0.3 * 2.0 - 1.0 * 0.7) + 0.5 * (-0.3 * 0.1 - 1.0 * 0.7);
        let v3 = Zonotope::new(f).intrinsic_volume(3).unwrap();
        assert!((v3 - f64::abs(det)).abs() < 1e-12);
    }

    #[test]
    fn projecting_the_cube() {
        let z = Zonotope::unit_cube(3);
        let e3 = [0.0, 0.0, 1.0];
        let p = z.project_generators(&e3).unwrap();
        assert_eq!(
            p.generators().to_rows(),
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]
        );
        assert!((z.projected_intrinsic_volume(&e3, 1).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(z.projected_intrinsic_volume(&e3, 0).unwrap(), 1.0);
        assert!(matches!(
            z.project_generators(&[0.0, 0.0, 2.0]),
            Err(Error::NonUnitDirection { .. })
        ));
    }

    #[test]
    fn sharp_projection_on_cube() {
        for d in 2..=6 {
            let z = Zonotope::unit_cube(d);
            let mut u = vec![0.0; d];
            u[d - 1] = 1.0;
            let m = check_projection_inequality(&z, &u, 2, ProjectionForm::Sharp).unwrap();
            assert!((m - (1.0 - (d as f64 - 1.0) / d as f64)).abs() < 1e-14);
            // V_j(pi C)/V_j(C) = C(d-1,j)/C(d,j) = (d-j)/d, so every sharp margin is 1/d
            for k in 2..=d {
                let m = check_projection_inequality(&z, &u, k, ProjectionForm::Sharp).unwrap();
                assert!((m - 1.0 / d as f64).abs() < 1e-14, "d={d} k={k}: {m}");
            }
        }
    }

    #[test]
    fn mcmullen_on_cube_is_strong_equality() {
        for d in 2..=8 {
            let z = Zonotope::unit_cube(d);
            for j in 1..d {
                let r = check_mcmullen_zonotope(&z, j).unwrap();
                assert!(r.strong_margin.abs() < 1e-14, "d={d} j={j}: {}", r.strong_margin);
                assert!(r.weak_margin > 0.0);
            }
        }
    }

    #[test]
    fn strong_factor_dominates_weak() {
        for m in 2..30 {
            for j in 1..m {
                let (s, w) = mcmullen_factors(m, j);
                assert!(s >= w);
            }
        }
    }
}
