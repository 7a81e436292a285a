use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::VectorFamily;

/// How random families are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// i.i.d. standard normal coordinates.
    Gaussian,
    /// i.i.d. uniform coordinates on `[-1, 1]`.
    UniformCube,
    /// Standard basis plus `eps` times i.i.d. standard normal noise; needs `m = d`.
    NearOrthonormal(f64),
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Gaussian => f.write_str("gaussian"),
            Distribution::UniformCube => f.write_str("uniform-cube"),
            Distribution::NearOrthonormal(eps) => write!(f, "near-orthonormal({eps})"),
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Accepts `gaussian`, `uniform-cube` and `near-orthonormal(eps)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "gaussian" | "normal" => return Ok(Distribution::Gaussian),
            "uniform-cube" | "uniform" => return Ok(Distribution::UniformCube),
            _ => {}
        }
        let inner = t
            .strip_prefix("near-orthonormal(")
            .and_then(|r| r.strip_suffix(')'));
        match inner.map(|x| x.trim().parse::<f64>()) {
            Some(Ok(eps)) if eps.is_finite() && eps >= 0.0 => Ok(Distribution::NearOrthonormal(eps)),
            _ => Err(Error::Precondition(format!("unknown distribution `{s}`"))),
        }
    }
}

impl Distribution {
    pub fn check_shape(self, m: usize, d: usize) -> Result<()> {
        let ok = d >= 1
            && m >= d
            && match self {
                Distribution::NearOrthonormal(_) => m == d,
                _ => true,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::BadShape { m, d })
        }
    }
}

/// RNG for restart `stream` of a run seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// An `m x d` family drawn from `distribution`; stream 0 of `seed`.
pub fn random_family(m: usize, d: usize, distribution: Distribution, seed: u64) -> Result<VectorFamily> {
    sample_family(&mut substream(seed, 0), m, d, distribution)
}

pub fn sample_family<R: Rng>(rng: &mut R, m: usize, d: usize, distribution: Distribution) -> Result<VectorFamily> {
    distribution.check_shape(m, d)?;
    let mut data = Vec::with_capacity(m * d);
    match distribution {
        Distribution::Gaussian => data.extend((0..m * d).map(|_| rng.sample::<f64, _>(StandardNormal))),
        Distribution::UniformCube => data.extend((0..m * d).map(|_| rng.random_range(-1.0..=1.0))),
        Distribution::NearOrthonormal(eps) => {
            for i in 0..m {
                for j in 0..d {
                    let base = if i == j { 1.0 } else { 0.0 };
                    let noise: f64 = rng.sample(StandardNormal);
                    data.push(base + eps * noise);
                }
            }
        }
    }
    VectorFamily::from_flat(d, data)
}

/// Standard normal vector of length `n`.
pub(crate) fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
