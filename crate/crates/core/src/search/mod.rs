//! Seeded random families, local search for violating families, and the
//! monotone orthogonalization.

pub mod orthogonalize;
pub mod random;

use std::fmt;

use rayon::prelude::*;

use crate::checks::{check_reduction_at, check_vector_maclaurin_with, CheckOptions, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{norm, VectorFamily};
use crate::subsets::binomial_f64;
use crate::sums::{PowerExponent, WedgeSums};
use crate::zonotope::{check_projection_inequality, ProjectionForm, Zonotope};

pub use orthogonalize::{construct_orthogonal_replacement, monotone_orthogonalize, Orthogonalization, Replacement, Step};
pub use random::{random_family, sample_family, substream, Distribution};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Consecutive rejections before the step is halved.
pub const REJECTIONS_BEFORE_HALVING: usize = 20;
/// A restart ends once the step falls below this multiple of the scale.
pub const MIN_STEP_FACTOR: f64 = 1e-8;
/// Fresh draws tried when a restart's first sample is infeasible.
const INITIAL_DRAWS: usize = 32;

/// The quantity being minimized. Each margin is negative exactly when the
/// corresponding inequality fails on the sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `M_{k-1,p} - M_{k,p}`, `2 <= k <= d <= m`.
    Maclaurin { p: PowerExponent, k: usize },
    /// `1 - a_{k-1} a_{k+1} / a_k^2` with `a_j = S_j / C(m, j)`; scale free.
    Newton { k: usize },
    /// `R_{k-2} - R_{k-1}` at pivot 0, `m = d`.
    Reduction { k: usize },
    /// Sharp projection margin for the zonotope of `family[1..]` and
    /// direction `family[0] / |family[0]|`.
    ProjectionSharp { k: usize },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Maclaurin { p, k } => write!(f, "maclaurin(p={p},k={k})"),
            Target::Newton { k } => write!(f, "newton(k={k})"),
            Target::Reduction { k } => write!(f, "reduction(k={k})"),
            Target::ProjectionSharp { k } => write!(f, "projection_sharp(k={k})"),
        }
    }
}

impl Target {
    pub fn k(&self) -> usize {
        match *self {
            Target::Maclaurin { k, .. }
            | Target::Newton { k }
            | Target::Reduction { k }
            | Target::ProjectionSharp { k } => k,
        }
    }

    /// Whether an `m x d` family can be evaluated at all.
    pub fn supports(&self, m: usize, d: usize) -> bool {
        let k = self.k();
        match self {
            Target::Maclaurin { .. } => 2 <= k && k <= d && d <= m,
            Target::Newton { .. } => 2 <= k && k + 1 <= d && d <= m,
            Target::Reduction { .. } => 2 <= k && k <= d && d == m,
            Target::ProjectionSharp { .. } => 2 <= k && k <= d && k <= m,
        }
    }

    /// The margin of this target on `family`.
    pub fn evaluate(&self, family: &VectorFamily) -> Result<f64> {
        let (m, d) = (family.count(), family.dim());
        if !self.supports(m, d) {
            return Err(Error::InfeasibleTarget(format!("{self} on m = {m}, d = {d}")));
        }
        let margin = match *self {
            Target::Maclaurin { p, k } => {
                let report = check_vector_maclaurin_with(family, p, k, &CheckOptions::default())?;
                report.margins[k - 2]
            }
            Target::Newton { k } => {
                let sums = WedgeSums::new(family);
                let a = |j: usize| -> Result<f64> { Ok(sums.s_k(j)? / binomial_f64(m, j)) };
                let mid = a(k)?;
                if mid <= 0.0 {
                    return Err(Error::ZeroDenominator(format!("S_{k}")));
                }
                1.0 - a(k - 1)? * a(k + 1)? / (mid * mid)
            }
            Target::Reduction { k } => check_reduction_at(family, 0, k, DEFAULT_TOLERANCE)?.margin(),
            Target::ProjectionSharp { k } => {
                let u0 = family.vector(0);
                let n = norm(u0);
                if n <= 0.0 {
                    return Err(Error::ZeroDenominator("direction".into()));
                }
                let u: Vec<f64> = u0.iter().map(|x| x / n).collect();
                let rest: Vec<usize> = (1..m).collect();
                let z = Zonotope::new(family.select(&rest)?);
                check_projection_inequality(&z, &u, k, ProjectionForm::Sharp)?
            }
        };
        if margin.is_nan() {
            return Err(Error::InfeasibleTarget(format!("{self} evaluated to NaN")));
        }
        Ok(margin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// `(m, d)` shapes; restart `r` uses the `r mod len`-th shape the target supports.
    pub dims: Vec<(usize, usize)>,
    pub k_values: Vec<usize>,
    pub p_values: Vec<PowerExponent>,
    pub restarts: usize,
    pub steps: usize,
    pub scale: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

impl Default for SearchConfig {
    /// `m = d = 3`, `k = 2`, `p = -1`, 100 restarts.
    fn default() -> Self {
        Self {
            dims: vec![(3, 3)],
            k_values: vec![2],
            p_values: vec![PowerExponent::Negative(-1.0)],
            restarts: 100,
            steps: 2000,
            scale: 1.0,
            seed: DEFAULT_SEED,
            distribution: Distribution::Gaussian,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Precondition("restarts must be at least 1".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Precondition(format!("scale must be positive, got {}", self.scale)));
        }
        if self.dims.is_empty() {
            return Err(Error::Precondition("no (m, d) shapes given".into()));
        }
        for &(m, d) in &self.dims {
            self.distribution.check_shape(m, d)?;
        }
        Ok(())
    }

    /// Maclaurin targets for every `(p, k)` pair, in `p`-major order.
    pub fn maclaurin_targets(&self) -> Vec<Target> {
        self.p_values
            .iter()
            .flat_map(|&p| self.k_values.iter().map(move |&k| Target::Maclaurin { p, k }))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub target: Target,
    /// Smallest margin seen; negative is a violation.
    pub best_margin: f64,
    pub witness: VectorFamily,
    pub best_restart: usize,
    /// Best margin of every restart, `+inf` when a restart never found a feasible sample.
    pub trace: Vec<f64>,
    pub evaluations: u64,
    pub seed: u64,
}

struct RestartOutcome {
    best: Option<(f64, VectorFamily)>,
    evaluations: u64,
}

/// Random-restart hill descent on the target margin.
pub fn violation_search(config: &SearchConfig, target: Target) -> Result<SearchResult> {
    config.validate()?;
    let shapes: Vec<(usize, usize)> = config
        .dims
        .iter()
        .copied()
        .filter(|&(m, d)| target.supports(m, d))
        .collect();
    if shapes.is_empty() {
        return Err(Error::InfeasibleTarget(format!(
            "{target} is not defined on any of {:?}",
            config.dims
        )));
    }
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let (m, d) = shapes[r % shapes.len()];
            run_restart(config, target, r as u64, m, d)
        })
        .collect();

    let mut evaluations = 0;
    let mut trace = Vec::with_capacity(outcomes.len());
    let mut best: Option<(f64, usize, VectorFamily)> = None;
    for (r, o) in outcomes.into_iter().enumerate() {
        evaluations += o.evaluations;
        match o.best {
            Some((margin, family)) => {
                trace.push(margin);
                if best.as_ref().is_none_or(|b| margin < b.0) {
                    best = Some((margin, r, family));
                }
            }
            None => trace.push(f64::INFINITY),
        }
    }
    let (best_margin, best_restart, witness) = best.ok_or_else(|| {
        Error::InfeasibleTarget(format!("{target}: no feasible sample in any restart"))
    })?;
    Ok(SearchResult {
        target,
        best_margin,
        witness,
        best_restart,
        trace,
        evaluations,
        seed: config.seed,
    })
}

fn run_restart(config: &SearchConfig, target: Target, restart: u64, m: usize, d: usize) -> RestartOutcome {
    let mut rng = substream(config.seed, restart);
    let mut evaluations = 0;
    let mut current = None;
    for _ in 0..INITIAL_DRAWS {
        let Ok(f) = sample_family(&mut rng, m, d, config.distribution) else {
            break;
        };
        evaluations += 1;
        if let Ok(margin) = target.evaluate(&f) {
            current = Some((margin, f));
            break;
        }
    }
    let Some((mut margin, mut family)) = current else {
        return RestartOutcome { best: None, evaluations };
    };
    let mut step = config.scale;
    let mut rejections = 0;
    for _ in 0..config.steps {
        let noise = random::gaussian_vector(&mut rng, m * d);
        let data: Vec<f64> = family
            .as_flat()
            .iter()
            .zip(&noise)
            .map(|(x, z)| x + step * z)
            .collect();
        evaluations += 1;
        let accepted = VectorFamily::from_flat(d, data)
            .ok()
            .and_then(|c| target.evaluate(&c).ok().map(|mc| (mc, c)))
            .filter(|(mc, _)| *mc < margin);
        match accepted {
            Some((mc, c)) => {
                margin = mc;
                family = c;
                rejections = 0;
            }
            None => {
                rejections += 1;
                if rejections == REJECTIONS_BEFORE_HALVING {
                    step *= 0.5;
                    rejections = 0;
                    if step < MIN_STEP_FACTOR * config.scale {
                        break;
                    }
                }
            }
        }
    }
    RestartOutcome {
        best: Some((margin, family)),
        evaluations,
    }
}
