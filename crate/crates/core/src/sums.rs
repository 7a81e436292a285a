//! Symmetric wedge sums `S_k` and the normalized power means `M_{k,p}`.
//!
//! For a family `v_1..v_m` and exponent `p`,
//!
//! ```text
//! M_{k,p} = ( sum_{|S|=k} |v_S|^p / C(m,k) )^(1/(k p))
//! ```
//!
//! with the geometric mean at `p = 0` and the maximum at `p = inf`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{elementary_symmetric, GramMatrix, VectorFamily};
use crate::subsets::{binomial, binomial_f64, Combinations, DEFAULT_SUBSET_CAP};
use crate::summation::CompensatedSum;

/// Subsets per parallel work unit. Fixed so that results do not depend on
/// the number of threads.
pub const CHUNK_SUBSETS: u128 = 2048;

/// Exponent of a symmetric power mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerExponent {
    /// Geometric mean of the wedge volumes.
    Zero,
    /// `p > 0`.
    Finite(f64),
    /// Maximum wedge volume.
    Infinity,
    /// `p < 0`. Only meaningful when every wedge volume is positive; used to
    /// probe the range where the inequality is known to fail.
    Negative(f64),
}

impl PowerExponent {
    /// Classifies any non-NaN `p`; `+inf` maps to [`PowerExponent::Infinity`].
    pub fn from_f64(p: f64) -> Result<Self> {
        if p.is_nan() || p == f64::NEG_INFINITY {
            Err(Error::Precondition(format!("unsupported exponent {p}")))
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p == 0.0 {
            Ok(Self::Zero)
        } else if p > 0.0 {
            Ok(Self::Finite(p))
        } else {
            Ok(Self::Negative(p))
        }
    }

    /// Numeric value, `+inf` for [`PowerExponent::Infinity`].
    pub fn value(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Finite(p) | Self::Negative(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Self::Negative(_))
    }
}

impl fmt::Display for PowerExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Infinity => write!(f, "inf"),
            Self::Finite(p) | Self::Negative(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PowerExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let p = match t.as_str() {
            "inf" | "+inf" | "infinity" | "∞" => f64::INFINITY,
            _ => t
                .parse::<f64>()
                .map_err(|_| Error::Precondition(format!("cannot parse exponent `{s}`")))?,
        };
        Self::from_f64(p)
    }
}

/// One evaluated symmetric sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSumValue {
    pub k: usize,
    pub p: PowerExponent,
    /// `sum |v_S|^p` for finite `p`, `sum log |v_S|` over non-vanishing
    /// subsets for `p = 0`, `max |v_S|` for `p = inf`.
    pub raw_sum: f64,
    pub mean: f64,
    /// Number of subsets whose wedge volume is exactly zero.
    pub vanished: u128,
    /// `k` exceeds the ambient dimension, so every wedge vanishes.
    pub beyond_dim: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: CompensatedSum,
    max: f64,
    vanished: u128,
}

/// Precomputed Gram matrix of a family, for evaluating many sums.
#[derive(Debug, Clone)]
pub struct WedgeSums {
    gram: GramMatrix,
    dim: usize,
    cap: u128,
}

impl WedgeSums {
    pub fn new(family: &VectorFamily) -> Self {
        Self::with_cap(family, DEFAULT_SUBSET_CAP)
    }

    pub fn with_cap(family: &VectorFamily, cap: u128) -> Self {
        Self {
            gram: GramMatrix::of(family),
            dim: family.dim(),
            cap,
        }
    }

    pub fn count(&self) -> usize {
        self.gram.order()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// Wedge volume of one subset.
    pub fn wedge(&self, subset: &[usize]) -> Result<f64> {
        if subset.len() > self.dim {
            return Ok(0.0);
        }
        self.gram.wedge_volume(subset)
    }

    /// `S_k = sum_{|S|=k} |v_S|` (the `p = 1` raw sum). `S_0 = 1`.
    pub fn s_k(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        Ok(self.evaluate(k, PowerExponent::Finite(1.0))?.raw_sum)
    }

    /// Evaluates `M_{k,p}` by enumerating all `k`-subsets.
    pub fn evaluate(&self, k: usize, p: PowerExponent) -> Result<SymmetricSumValue> {
        let m = self.count();
        if k == 0 || k > m {
            return Err(Error::Precondition(format!(
                "subset size {k} outside 1..={m}"
            )));
        }
        let total = binomial(m, k);
        if total > self.cap {
            return Err(Error::CapExceeded {
                m,
                k,
                count: total,
                cap: self.cap,
            });
        }
        if k > self.dim {
            if p.is_negative() {
                return Err(Error::InfeasibleTarget(format!(
                    "negative exponent with k = {k} > d = {}: every wedge vanishes",
                    self.dim
                )));
            }
            return Ok(SymmetricSumValue {
                k,
                p,
                raw_sum: 0.0,
                mean: 0.0,
                vanished: total,
                beyond_dim: true,
            });
        }

        let chunks = total.div_ceil(CHUNK_SUBSETS);
        let partials: Vec<Partial> = (0..chunks)
            .into_par_iter()
            .map(|c| self.chunk(m, k, c * CHUNK_SUBSETS, p))
            .collect::<Result<_>>()?;

        let mut acc = Partial::default();
        for part in &partials {
            acc.sum.merge(&part.sum);
            acc.max = acc.max.max(part.max);
            acc.vanished += part.vanished;
        }

        let count = binomial_f64(m, k);
        let kf = k as f64;
        let (raw_sum, mean) = match p {
            PowerExponent::Finite(q) | PowerExponent::Negative(q) => {
                let raw = acc.sum.value();
                (raw, (raw / count).powf(1.0 / (kf * q)))
            }
            PowerExponent::Zero => {
                let raw = acc.sum.value();
                let mean = if acc.vanished > 0 {
                    0.0
                } else {
                    (raw / (count * kf)).exp()
                };
                (raw, mean)
            }
            PowerExponent::Infinity => (acc.max, acc.max.powf(1.0 / kf)),
        };
        Ok(SymmetricSumValue {
            k,
            p,
            raw_sum,
            mean,
            vanished: acc.vanished,
            beyond_dim: false,
        })
    }

    fn chunk(&self, m: usize, k: usize, start: u128, p: PowerExponent) -> Result<Partial> {
        let mut cursor = Combinations::range(m, k, start, CHUNK_SUBSETS, self.cap)?;
        let mut part = Partial::default();
        while cursor.advance() {
            let vol = self.gram.wedge_volume(cursor.current())?;
            if vol == 0.0 {
                part.vanished += 1;
                if p.is_negative() {
                    return Err(Error::InfeasibleTarget(format!(
                        "zero wedge volume at {:?} under negative exponent",
                        cursor.current()
                    )));
                }
            }
            match p {
                PowerExponent::Finite(q) | PowerExponent::Negative(q) => {
                    if q == 1.0 {
                        part.sum.add(vol)
                    } else if q == 2.0 {
                        part.sum.add(vol * vol)
                    } else {
                        part.sum.add(vol.powf(q))
                    }
                }
                PowerExponent::Zero => {
                    if vol > 0.0 {
                        part.sum.add(vol.ln());
                    }
                }
                PowerExponent::Infinity => part.max = part.max.max(vol),
            }
        }
        Ok(part)
    }

    /// `sum_{|S|=k} |v_S|^2` as `e_k` of the Gram eigenvalues, without
    /// enumerating subsets.
    pub fn s_k_2_eigen(&self, k: usize) -> Result<f64> {
        let m = self.count();
        if k == 0 || k > m {
            return Err(Error::Precondition(format!(
                "subset size {k} outside 1..={m}"
            )));
        }
        let spectrum = self.gram.spectrum()?;
        Ok(elementary_symmetric(spectrum.values(), k))
    }

    /// `M_{k,2}` from the eigenvalue path.
    pub fn mean_2_eigen(&self, k: usize) -> Result<f64> {
        let raw = self.s_k_2_eigen(k)?;
        Ok((raw / binomial_f64(self.count(), k)).powf(1.0 / (2.0 * k as f64)))
    }
}

/// `M_{k,p}` of a family, enumerating all `k`-subsets.
pub fn s_k_p(family: &VectorFamily, k: usize, p: PowerExponent) -> Result<SymmetricSumValue> {
    WedgeSums::new(family).evaluate(k, p)
}

/// Eigenvalue route to `sum |v_S|^2`.
pub fn s_k_2_eigen(family: &VectorFamily, k: usize) -> Result<f64> {
    WedgeSums::new(family).s_k_2_eigen(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag123() -> VectorFamily {
        VectorFamily::diagonal(&[1.0, 2.0, 3.0])
    }

    #[test]
    fn orthonormal_means_are_one() {
        let f = VectorFamily::standard_basis(3);
        for k in 1..=3 {
            for p in [
                PowerExponent::Zero,
                PowerExponent::Finite(1.0),
                PowerExponent::Finite(2.0),
                PowerExponent::Infinity,
            ] {
                let v = s_k_p(&f, k, p).unwrap();
                assert!((v.mean - 1.0).abs() <= 1e-12, "k={k} p={p}: {}", v.mean);
            }
        }
    }

    #[test]
    fn diagonal_family_hand_values() {
        let f = diag123();
        let p1 = s_k_p(&f, 2, PowerExponent::Finite(1.0)).unwrap();
        assert!((p1.raw_sum - 11.0).abs() < 1e-12);
        assert!((p1.mean - (11.0_f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((p1.mean - 1.914854).abs() < 1e-6);
        let pinf = s_k_p(&f, 2, PowerExponent::Infinity).unwrap();
        assert!((pinf.mean - 6.0_f64.sqrt()).abs() < 1e-12);
        assert!((pinf.mean - 2.449490).abs() < 1e-6);
        let p0 = s_k_p(&f, 2, PowerExponent::Zero).unwrap();
        assert!((p0.mean - 36.0_f64.powf(1.0 / 6.0)).abs() < 1e-12);
        assert!((p0.mean - 1.817121).abs() < 1e-6);
    }

    #[test]
    fn eigen_path_on_diagonal_family() {
        let f = diag123();
        let e = s_k_2_eigen(&f, 2).unwrap();
        assert!((e - 49.0).abs() < 1e-10);
        let enumerated = s_k_p(&f, 2, PowerExponent::Finite(2.0)).unwrap().raw_sum;
        assert!((enumerated - 49.0).abs() < 1e-10);
    }

    #[test]
    fn eigen_path_on_identity() {
        let f = VectorFamily::standard_basis(6);
        for k in 1..=6 {
            let e = s_k_2_eigen(&f, k).unwrap();
            assert!((e - binomial(6, k) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_volume_under_geometric_mean() {
        let f = VectorFamily::new(vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = s_k_p(&f, 2, PowerExponent::Zero).unwrap();
        assert_eq!(v.mean, 0.0);
        assert_eq!(v.vanished, 1);
    }

    #[test]
    fn beyond_dimension_is_flagged() {
        let f = VectorFamily::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let v = s_k_p(&f, 3, PowerExponent::Finite(1.0)).unwrap();
        assert!(v.beyond_dim);
        assert_eq!(v.raw_sum, 0.0);
        assert_eq!(v.mean, 0.0);
    }

    #[test]
    fn negative_exponent_rejects_zero_volume() {
        let f = VectorFamily::new(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let err = s_k_p(&f, 2, PowerExponent::Negative(-1.0)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleTarget(_)));
    }

    #[test]
    fn cap_propagates() {
        let f = VectorFamily::standard_basis(12);
        let err = WedgeSums::with_cap(&f, 10).evaluate(6, PowerExponent::Finite(1.0)).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { count: 924, .. }));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("0".parse::<PowerExponent>().unwrap(), PowerExponent::Zero);
        assert_eq!("inf".parse::<PowerExponent>().unwrap(), PowerExponent::Infinity);
        assert_eq!("1.5".parse::<PowerExponent>().unwrap(), PowerExponent::Finite(1.5));
        assert_eq!("-1".parse::<PowerExponent>().unwrap(), PowerExponent::Negative(-1.0));
        assert!("abc".parse::<PowerExponent>().is_err());
        assert!("nan".parse::<PowerExponent>().is_err());
    }

    #[test]
    fn many_chunks_match_a_single_pass() {
        // C(16, 8) = 12870 subsets spans several chunks
        let rows: Vec<Vec<f64>> = (0..16)
            .map(|i| (0..8).map(|j| (((i * 31 + j * 17) % 23) as f64 - 11.0) / 7.0).collect())
            .collect();
        let f = VectorFamily::new(rows).unwrap();
        let sums = WedgeSums::new(&f);
        let chunked = sums.evaluate(8, PowerExponent::Finite(1.0)).unwrap().raw_sum;
        let mut seq = CompensatedSum::new();
        for s in Combinations::new(16, 8, DEFAULT_SUBSET_CAP).unwrap() {
            seq.add(sums.wedge(&s).unwrap());
        }
        assert!((chunked - seq.value()).abs() <= 1e-12 * chunked);
    }
}
