use crate::error::{Error, Result};
use crate::linalg::VectorFamily;
use crate::subsets::binomial_f64;
use crate::sums::WedgeSums;

/// `a_k^2 - a_{k-1} a_{k+1}` for a normalized sequence `a`.
pub fn newton_margin(prev: f64, mid: f64, next: f64) -> f64 {
    mid * mid - prev * next
}

/// Vector Newton probe at `k`: `(S_k/C(m,k))^2 - (S_{k-1}/C(m,k-1)) (S_{k+1}/C(m,k+1))`
/// with `p = 1` wedge sums. Positive means the inequality holds; no
/// theorem fixes its sign.
pub fn check_vector_newton(family: &VectorFamily, k: usize) -> Result<f64> {
    let (m, d) = (family.count(), family.dim());
    if k < 2 || k + 1 > d || m < d {
        return Err(Error::Precondition(format!(
            "need 2 <= k <= d - 1 and m >= d, got k = {k}, d = {d}, m = {m}"
        )));
    }
    let sums = WedgeSums::new(family);
    let norm = |j: usize| -> Result<f64> { Ok(sums.s_k(j)? / binomial_f64(m, j)) };
    Ok(newton_margin(norm(k - 1)?, norm(k)?, norm(k + 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::elementary_symmetric;

    #[test]
    fn orthonormal_is_equality() {
        for d in 3..=7 {
            let f = VectorFamily::standard_basis(d);
            for k in 2..d {
                assert!(check_vector_newton(&f, k).unwrap().abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_family_matches_scalar_newton() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let f = VectorFamily::diagonal(&xs);
        let a = |j| elementary_symmetric(&xs, j) / binomial_f64(4, j);
        let scalar = newton_margin(a(1), a(2), a(3));
        // a_1 = 10/4, a_2 = 35/6, a_3 = 50/4
        let hand = (35.0_f64 / 6.0).powi(2) - 2.5 * 12.5;
        assert!((scalar - hand).abs() < 1e-12);
        assert!((check_vector_newton(&f, 2).unwrap() - hand).abs() < 1e-10);
    }

    #[test]
    fn preconditions() {
        let f = VectorFamily::standard_basis(3);
        assert!(check_vector_newton(&f, 1).is_err());
        assert!(check_vector_newton(&f, 3).is_err());
    }
}
