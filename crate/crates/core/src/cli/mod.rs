//! Command implementations behind the `vecmac` binary.
//!
//! Each command returns a [`RunReport`]; the binary prints it and exits with
//! [`RunReport::exit_status`].

pub mod config;
pub mod family_file;
pub mod json;

use std::path::Path;
use std::time::Instant;

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::checks::{
    check_classical_maclaurin, check_reduction_at, check_vector_maclaurin_with, CheckOptions, MaclaurinReport,
    Verdict, EQUALITY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::linalg::{norm, GramMatrix, VectorFamily};
use crate::search::{monotone_orthogonalize, violation_search, DEFAULT_SEED};
use crate::sums::PowerExponent;
use crate::zonotope::{check_mcmullen_zonotope, check_projection_inequality, ProjectionForm, Zonotope};

use config::{parse_search_config, resolve_seed};
use family_file::{read_family, write_family};
use json::{num, nums, object, rows};

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    /// `sha256:` followed by the hex digest of the input bytes.
    pub input_digest: String,
    pub results: Value,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub wall_time: f64,
    pub verdict: Verdict,
}

impl RunReport {
    /// 0 when the inequality holds (or is an equality), 1 when violated.
    pub fn exit_status(&self) -> i32 {
        match self.verdict {
            Verdict::Holds | Verdict::Equality => 0,
            Verdict::Violated => 1,
        }
    }

    pub fn to_value(&self) -> Value {
        object([
            ("command", Value::from(self.command.clone())),
            ("input_digest", Value::from(self.input_digest.clone())),
            ("results", self.results.clone()),
            (
                "tolerances",
                object([("verdict", num(self.tolerance)), ("equality", num(EQUALITY_TOLERANCE))]),
            ),
            ("seed", self.seed.map_or(Value::Null, Value::from)),
            ("wall_time_seconds", num(self.wall_time)),
            ("verdict", Value::from(self.verdict.as_str())),
            ("exit_status", Value::from(self.exit_status())),
        ])
    }

    pub fn render(&self) -> String {
        json::render(&self.to_value())
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn echo(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn verdict_strings(vs: &[Verdict]) -> Value {
    Value::from(vs.iter().map(|v| v.as_str()).collect::<Vec<_>>())
}

fn maclaurin_value(r: &MaclaurinReport) -> Value {
    object([
        ("p", Value::from(r.p.to_string())),
        ("k", Value::from((1..=r.means.len()).collect::<Vec<_>>())),
        ("means", nums(&r.means)),
        ("margins", nums(&r.margins)),
        ("verdicts", verdict_strings(&r.verdicts)),
        ("verdict", Value::from(r.verdict().as_str())),
    ])
}

/// Vector Maclaurin chain of the family in `path`, `k = 1..=k_max` (default `d`).
pub fn cli_check(path: &Path, p: PowerExponent, k_max: Option<usize>, opts: &CheckOptions) -> Result<RunReport> {
    let start = Instant::now();
    let (file, bytes) = read_family(path)?;
    let family = &file.family;
    let k_max = k_max.unwrap_or(family.dim());
    let report = check_vector_maclaurin_with(family, p, k_max, opts)?;
    let spectrum = GramMatrix::of(family).spectrum()?;
    let mut results = maclaurin_value(&report);
    let flags = object([
        ("eigen_path", Value::from(p == PowerExponent::Finite(2.0))),
        ("clamp_applied", Value::from(spectrum.clamp_applied())),
        ("gram_rank", Value::from(spectrum.rank(1e-12))),
    ]);
    results["flags"] = flags;
    results["m"] = Value::from(family.count());
    results["d"] = Value::from(family.dim());
    Ok(RunReport {
        command: echo(&["check", &path.display().to_string(), "--p", &p.to_string(), "--k", &k_max.to_string()]),
        input_digest: digest(&bytes),
        verdict: report.verdict(),
        results,
        tolerance: opts.tolerance,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Classical Maclaurin chain of positive scalars.
pub fn cli_chain(scalars: &[f64]) -> Result<RunReport> {
    let start = Instant::now();
    let report = check_classical_maclaurin(scalars)?;
    let text: Vec<String> = scalars.iter().map(|&x| family_file::format_number(x)).collect();
    let mut command = vec!["chain".to_string()];
    command.extend(scalars.iter().map(|x| x.to_string()));
    Ok(RunReport {
        command,
        input_digest: digest(text.join(",").as_bytes()),
        verdict: report.verdict(),
        results: maclaurin_value(&report),
        tolerance: report.tolerance,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Intrinsic volumes of the zonotope spanned by the family in `path`, and,
/// given a direction, its projection margins.
pub fn cli_zonotope(path: &Path, k_max: Option<usize>, direction: Option<&[f64]>, tolerance: f64) -> Result<RunReport> {
    let start = Instant::now();
    let (file, bytes) = read_family(path)?;
    let d = file.family.dim();
    let m = file.family.count();
    let z = match file.weights {
        Some(w) => Zonotope::with_weights(file.family, w)?,
        None => Zonotope::new(file.family),
    };
    let k_max = k_max.unwrap_or(d);
    if k_max > d {
        return Err(Error::Precondition(format!("k_max = {k_max} exceeds d = {d}")));
    }
    let volumes = z.intrinsic_volumes(k_max)?;
    let mut verdicts = Vec::new();
    let mut mcmullen = Vec::new();
    for j in 1..k_max.min(d) {
        if m <= j || volumes[j] <= 0.0 {
            continue;
        }
        let r = check_mcmullen_zonotope(&z, j)?;
        verdicts.push(Verdict::from_margin(r.weak_margin, tolerance));
        mcmullen.push(object([
            ("j", Value::from(j)),
            ("strong_factor", num(r.strong_factor)),
            ("weak_factor", num(r.weak_factor)),
            ("strong_margin", num(r.strong_margin)),
            ("weak_margin", num(r.weak_margin)),
        ]));
    }
    let mut results = object([
        ("d", Value::from(d)),
        ("m", Value::from(m)),
        ("weights", nums(z.weights())),
        ("intrinsic_volumes", nums(&volumes)),
        ("mcmullen", Value::Array(mcmullen)),
    ]);
    if let Some(raw) = direction {
        if raw.len() != d {
            return Err(Error::Precondition(format!("direction has {} coordinates, expected {d}", raw.len())));
        }
        let n = norm(raw);
        if n <= 0.0 {
            return Err(Error::NonUnitDirection { norm: n });
        }
        let u: Vec<f64> = raw.iter().map(|x| x / n).collect();
        let top = k_max.min(d - 1);
        let projected = z.project_generators(&u)?;
        let direct: Vec<f64> = (0..=top).map(|j| z.projected_intrinsic_volume(&u, j)).collect::<Result<_>>()?;
        let via_projection: Vec<f64> = (0..=top).map(|j| projected.intrinsic_volume(j)).collect::<Result<_>>()?;
        let mut sharp = Vec::new();
        let mut constant = Vec::new();
        for k in 2..=k_max.min(d) {
            if volumes[k - 1] <= 0.0 || volumes[k - 2] <= 0.0 {
                continue;
            }
            let s = check_projection_inequality(&z, &u, k, ProjectionForm::Sharp)?;
            sharp.push(object([("k", Value::from(k)), ("margin", num(s))]));
            if k >= 3 {
                let c = check_projection_inequality(&z, &u, k, ProjectionForm::Constant)?;
                verdicts.push(Verdict::from_margin(c, tolerance));
                constant.push(object([("k", Value::from(k)), ("margin", num(c))]));
            }
        }
        results["projection"] = object([
            ("direction", nums(&u)),
            ("support_function", num(z.support_function(&u)?)),
            ("width", num(z.support_function(&u)? + z.support_function(&u.iter().map(|x| -x).collect::<Vec<_>>())?)),
            ("projected_intrinsic_volumes", nums(&direct)),
            ("projected_intrinsic_volumes_via_generators", nums(&via_projection)),
            ("sharp", Value::Array(sharp)),
            ("constant", Value::Array(constant)),
        ]);
    }
    let mut command = echo(&["zonotope", &path.display().to_string(), "--k", &k_max.to_string()]);
    if let Some(u) = direction {
        command.push("--direction".into());
        command.push(u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    }
    Ok(RunReport {
        command,
        input_digest: digest(&bytes),
        verdict: Verdict::combine(verdicts),
        results,
        tolerance,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Pivot ratios of the family in `path` and its monotone orthogonalization
/// at `k`; the orthogonal family is written to `output` when given.
pub fn cli_reduce(path: &Path, k: usize, output: Option<&Path>, tolerance: f64) -> Result<RunReport> {
    let start = Instant::now();
    let (file, bytes) = read_family(path)?;
    let family = &file.family;
    let d = family.dim();
    let mut verdicts = Vec::new();
    let mut pivots = Vec::new();
    for pivot in 0..family.count().min(d) {
        let r = check_reduction_at(family, pivot, k, tolerance)?;
        verdicts.push(Verdict::from_margin(r.margin(), tolerance));
        pivots.push(object([
            ("pivot", Value::from(pivot)),
            ("r_k_minus_1", num(r.r_hi)),
            ("r_k_minus_2", num(r.r_lo)),
            ("margin", num(r.margin())),
            ("feasible", Value::from(r.feasible)),
        ]));
    }
    let mut results = object([
        ("d", Value::from(d)),
        ("k", Value::from(k)),
        ("pivot_ratios", Value::Array(pivots)),
    ]);
    match monotone_orthogonalize(family, k) {
        Ok(o) => {
            let steps: Vec<Value> = o
                .steps
                .iter()
                .map(|s| {
                    object([
                        ("pivot", Value::from(s.pivot)),
                        ("lo", num(s.lo)),
                        ("hi", num(s.hi)),
                        ("norm", num(s.norm)),
                    ])
                })
                .collect();
            results["orthogonalization"] = object([
                ("family", rows(o.family.to_rows())),
                ("steps", Value::Array(steps)),
                ("mean_k", nums(&[o.mean_k.0, o.mean_k.1])),
                ("mean_k_minus_1", nums(&[o.mean_km1.0, o.mean_km1.1])),
                ("max_cosine", num(o.max_cosine)),
                ("chain_margin", num(o.chain_margin)),
                ("sandwich_holds", Value::from(true)),
            ]);
            if let Some(out) = output {
                std::fs::write(out, write_family(&o.family, None))
                    .map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            }
        }
        Err(Error::InfeasibleInterval { step, lo, hi }) => {
            verdicts.push(Verdict::Violated);
            results["orthogonalization"] = object([(
                "infeasible",
                object([("step", Value::from(step)), ("lo", num(lo)), ("hi", num(hi))]),
            )]);
        }
        Err(e) => return Err(e),
    }
    Ok(RunReport {
        command: echo(&["reduce", &path.display().to_string(), "--k", &k.to_string()]),
        input_digest: digest(&bytes),
        verdict: Verdict::combine(verdicts),
        results,
        tolerance,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Where the search seed comes from, in decreasing priority.
#[derive(Debug, Clone, Default)]
pub struct SeedSources<'a> {
    pub flag: Option<u64>,
    pub env: Option<&'a str>,
}

/// Runs every target of the configuration (the default configuration when
/// `config_path` is `None`). The best witness is written to `witness_out`.
/// The verdict is `violated` when any target reaches a margin below `-tolerance`.
pub fn cli_search(
    config_path: Option<&Path>,
    seeds: &SeedSources<'_>,
    witness_out: Option<&Path>,
    tolerance: f64,
) -> Result<RunReport> {
    let start = Instant::now();
    let text = match config_path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let mut file = parse_search_config(&text)?;
    let seed = resolve_seed(seeds.flag, file.seed, seeds.env, DEFAULT_SEED)?;
    file.config.seed = seed;

    let mut verdicts = Vec::new();
    let mut runs = Vec::new();
    let mut best: Option<(f64, VectorFamily)> = None;
    for &target in &file.targets {
        let r = violation_search(&file.config, target)?;
        verdicts.push(Verdict::from_margin(r.best_margin, tolerance));
        runs.push(object([
            ("target", Value::from(target.to_string())),
            ("best_margin", num(r.best_margin)),
            ("best_restart", Value::from(r.best_restart)),
            ("m", Value::from(r.witness.count())),
            ("d", Value::from(r.witness.dim())),
            ("witness", rows(r.witness.to_rows())),
            ("trace", nums(&r.trace)),
            ("evaluations", Value::from(r.evaluations)),
            ("verdict", Value::from(Verdict::from_margin(r.best_margin, tolerance).as_str())),
        ]));
        if best.as_ref().is_none_or(|b| r.best_margin < b.0) {
            best = Some((r.best_margin, r.witness));
        }
    }
    if let (Some(out), Some((_, w))) = (witness_out, &best) {
        std::fs::write(out, write_family(w, None)).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    }
    let c = &file.config;
    let results = object([
        ("runs", Value::Array(runs)),
        (
            "config",
            object([
                ("dims", Value::from(c.dims.iter().map(|&(m, d)| vec![m, d]).collect::<Vec<_>>())),
                ("restarts", Value::from(c.restarts)),
                ("steps", Value::from(c.steps)),
                ("scale", num(c.scale)),
                ("distribution", Value::from(c.distribution.to_string())),
            ]),
        ),
    ]);
    let mut command = vec!["search".to_string()];
    if let Some(p) = config_path {
        command.push(p.display().to_string());
    }
    command.extend(["--seed".to_string(), seed.to_string()]);
    Ok(RunReport {
        command,
        input_digest: digest(text.as_bytes()),
        verdict: Verdict::combine(verdicts),
        results,
        tolerance,
        seed: Some(seed),
        wall_time: start.elapsed().as_secs_f64(),
    })
}
