//! Experiment harness behind the `awcd` binary. Everything it produces is CSV.
//!
//! Floats are written with Rust's shortest round-trip formatting, infinities
//! as `inf`/`-inf` and undefined values as `nan`, so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use thiserror::Error;

use crate::awcd::{run, test_matrix, AwcdConfig, Neighborhoods, TestMatrix, Variant, WeightMatrix};
use crate::eval::{best_rand_index, exact_recovery, modularity, partition_from_weights, rand_index, rand_index_at};
use crate::graph::Graph;
use crate::sbm::{replicate_seed, sample, true_weights, SbmError, SbmSpec};
use crate::theory::{ak_bk, expected_counts_k1, PolygonSpec};

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("{0} list is empty")]
    EmptyList(&'static str),
    #[error("invalid grid {spec:?}: {msg}")]
    Grid { spec: String, msg: String },
    #[error("radius must be positive")]
    Radius,
    #[error("need at least one iteration")]
    Iterations,
    #[error("quotient must exceed 1, got {0}")]
    Quotient(f64),
    #[error("accuracy threshold must lie in [0, 1], got {0}")]
    Threshold(f64),
    #[error(transparent)]
    Sbm(#[from] SbmError),
}

/// CSV token for a float.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

/// Parses `start:stop:count` (evenly spaced, both ends included), a
/// comma-separated list, or a single value. With `log` the colon form is
/// spaced geometrically and both ends must be positive.
pub fn parse_grid(spec: &str, log: bool) -> Result<Vec<f64>, ExperimentError> {
    let err = |msg: &str| ExperimentError::Grid {
        spec: spec.to_string(),
        msg: msg.to_string(),
    };
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| err(&format!("not a number: {s:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, count] => {
            let (start, stop) = (number(start)?, number(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| err("count must be a non-negative integer"))?;
            if count == 0 {
                return Err(err("count must be positive"));
            }
            if log && (start <= 0.0 || stop <= 0.0) {
                return Err(err("geometric spacing needs positive ends"));
            }
            if count == 1 {
                vec![start]
            } else {
                let last = (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        let t = i as f64 / last;
                        if i == 0 {
                            start
                        } else if i == count - 1 {
                            stop
                        } else if log {
                            (start.ln() + t * (stop.ln() - start.ln())).exp()
                        } else {
                            start + t * (stop - start)
                        }
                    })
                    .collect()
            }
        }
        [list] => list.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(err("expected start:stop:count or a comma-separated list")),
    };
    if grid.iter().any(|x| x.is_nan()) {
        return Err(err("NaN in grid"));
    }
    Ok(grid)
}

/// Seeds of replicates `0..reps` derived from `base`.
pub fn replicate_seeds(base: u64, reps: usize) -> Vec<u64> {
    (0..reps as u64).map(|r| replicate_seed(base, r)).collect()
}

/// Applies `f` to every item on up to `jobs` threads and returns the results
/// in input order.
pub fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let result = f(&items[idx]);
                slots.lock().expect("worker panicked")[idx] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every item processed"))
        .collect()
}

fn sort_floats(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Block size.
    pub n: usize,
    pub n_blocks: usize,
    pub thetas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub ks: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub variant: Variant,
    pub l_max: usize,
    /// Record wall-clock times; off by default so output is reproducible.
    pub timing: bool,
}

impl SweepConfig {
    /// Checks the lists and sorts the parameter lists ascending (duplicates
    /// removed). Seeds keep their replicate order.
    pub fn normalized(mut self) -> Result<Self, ExperimentError> {
        for (name, empty) in [
            ("theta", self.thetas.is_empty()),
            ("rho", self.rhos.is_empty()),
            ("k", self.ks.is_empty()),
            ("lambda", self.lambdas.is_empty()),
            ("seed", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(ExperimentError::EmptyList(name));
            }
        }
        if self.ks.contains(&0) {
            return Err(ExperimentError::Radius);
        }
        if self.l_max == 0 {
            return Err(ExperimentError::Iterations);
        }
        for &theta in &self.thetas {
            for &rho in &self.rhos {
                SbmSpec::symmetric(self.n, self.n_blocks, theta, rho)?;
            }
        }
        sort_floats(&mut self.thetas);
        sort_floats(&mut self.rhos);
        sort_floats(&mut self.lambdas);
        self.ks.sort_unstable();
        self.ks.dedup();
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub n_blocks: usize,
    pub theta: f64,
    pub rho: f64,
    pub k: usize,
    pub lambda: f64,
    pub seed: u64,
    pub rand_index: f64,
    pub exact_recovery: bool,
    /// `NaN` when the sampled graph has no edges.
    pub modularity: f64,
    pub wall_time_seconds: f64,
}

impl SweepRecord {
    pub const HEADER: &'static str =
        "n,K,theta,rho,k,lambda,seed,rand_index,exact_recovery,modularity,wall_time_seconds";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.n_blocks,
            fmt_float(self.theta),
            fmt_float(self.rho),
            self.k,
            fmt_float(self.lambda),
            self.seed,
            fmt_float(self.rand_index),
            self.exact_recovery,
            fmt_float(self.modularity),
            fmt_float(self.wall_time_seconds),
        )
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(SweepRecord::HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

struct Scored {
    rand_index: f64,
    exact: bool,
    modularity: f64,
}

fn score(g: &Graph, w: &WeightMatrix, w_star: &WeightMatrix) -> Scored {
    Scored {
        rand_index: rand_index(w, w_star).unwrap_or(1.0),
        exact: exact_recovery(w, w_star).expect("same dimensions"),
        modularity: modularity(g, &partition_from_weights(w)).unwrap_or(f64::NAN),
    }
}

/// Results of one sampled graph, indexed `[k][lambda]`.
fn sweep_unit(cfg: &SweepConfig, theta: f64, rho: f64, seed: u64) -> Vec<Vec<(Scored, f64)>> {
    let spec = SbmSpec::symmetric(cfg.n, cfg.n_blocks, theta, rho).expect("validated");
    let (g, labels) = sample(&spec, seed);
    let w_star = true_weights(&labels);
    cfg.ks
        .iter()
        .map(|&k| {
            if cfg.l_max == 1 {
                let start = Instant::now();
                let t = test_matrix(&g, &Neighborhoods::rings(&g, k), cfg.variant);
                let shared = start.elapsed().as_secs_f64();
                cfg.lambdas
                    .iter()
                    .map(|&lambda| {
                        let start = Instant::now();
                        let s = score(&g, &t.threshold(lambda), &w_star);
                        (s, shared + start.elapsed().as_secs_f64())
                    })
                    .collect()
            } else {
                cfg.lambdas
                    .iter()
                    .map(|&lambda| {
                        let start = Instant::now();
                        let out = run(&g, &AwcdConfig::new(k, lambda, cfg.variant).with_iterations(cfg.l_max));
                        let s = score(&g, &out.weights, &w_star);
                        (s, start.elapsed().as_secs_f64())
                    })
                    .collect()
            }
        })
        .collect()
}

/// One record per `(theta, rho, k, lambda, seed)` in that nesting order.
/// Each sampled graph is a unit of work; `jobs` only affects speed.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<Vec<SweepRecord>, ExperimentError> {
    let cfg = cfg.clone().normalized()?;
    let mut units = Vec::new();
    for &theta in &cfg.thetas {
        for &rho in &cfg.rhos {
            for &seed in &cfg.seeds {
                units.push((theta, rho, seed));
            }
        }
    }
    let results = parallel_map(&units, jobs, |&(theta, rho, seed)| sweep_unit(&cfg, theta, rho, seed));
    let n_seeds = cfg.seeds.len();
    let mut records = Vec::with_capacity(units.len() * cfg.ks.len() * cfg.lambdas.len());
    for (ti, &theta) in cfg.thetas.iter().enumerate() {
        for (ri, &rho) in cfg.rhos.iter().enumerate() {
            let base = (ti * cfg.rhos.len() + ri) * n_seeds;
            for (ki, &k) in cfg.ks.iter().enumerate() {
                for (li, &lambda) in cfg.lambdas.iter().enumerate() {
                    for (si, &seed) in cfg.seeds.iter().enumerate() {
                        let (s, time) = &results[base + si][ki][li];
                        records.push(SweepRecord {
                            n: cfg.n,
                            n_blocks: cfg.n_blocks,
                            theta,
                            rho,
                            k,
                            lambda,
                            seed,
                            rand_index: s.rand_index,
                            exact_recovery: s.exact,
                            modularity: s.modularity,
                            wall_time_seconds: if cfg.timing { *time } else { 0.0 },
                        });
                    }
                }
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateConfig {
    /// Block sizes to try.
    pub ns: Vec<usize>,
    pub n_blocks: usize,
    pub thetas: Vec<f64>,
    /// `theta / rho`, above 1.
    pub quotient: f64,
    pub k: usize,
    pub seeds: Vec<u64>,
    /// Mean best Rand index that counts as recovered.
    pub threshold: f64,
    pub variant: Variant,
    /// Thresholds to optimize over; `None` optimizes over all thresholds
    /// exactly.
    pub lambdas: Option<Vec<f64>>,
}

impl RateConfig {
    fn validate(&self) -> Result<(), ExperimentError> {
        if self.ns.is_empty() {
            return Err(ExperimentError::EmptyList("n"));
        }
        if self.thetas.is_empty() {
            return Err(ExperimentError::EmptyList("theta"));
        }
        if self.seeds.is_empty() {
            return Err(ExperimentError::EmptyList("seed"));
        }
        if matches!(&self.lambdas, Some(l) if l.is_empty()) {
            return Err(ExperimentError::EmptyList("lambda"));
        }
        if self.k == 0 {
            return Err(ExperimentError::Radius);
        }
        if self.quotient.is_nan() || self.quotient <= 1.0 {
            return Err(ExperimentError::Quotient(self.quotient));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(ExperimentError::Threshold(self.threshold));
        }
        for &n in &self.ns {
            for &theta in &self.thetas {
                SbmSpec::symmetric(n, self.n_blocks, theta, theta / self.quotient)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub theta: f64,
    pub rho: f64,
    /// Best-over-threshold Rand index averaged over seeds.
    pub mean_rand_index: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSummary {
    /// Ordered by `n`, then `theta`.
    pub points: Vec<RatePoint>,
    /// Smallest grid `theta` reaching the threshold, per `n`; `None` when no
    /// grid point does.
    pub theta_min: Vec<(usize, Option<f64>)>,
    /// Least-squares slope of `ln theta_min` against `ln n`; needs at least
    /// two feasible `n`.
    pub slope: Option<f64>,
}

/// Least-squares slope of `y` on `x`; `None` for fewer than two points or
/// constant `x`.
pub fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn best_rand(t: &TestMatrix, labels: &crate::sbm::Labeling, lambdas: Option<&[f64]>) -> f64 {
    match lambdas {
        None => best_rand_index(t, labels).map(|(r, _)| r),
        Some(grid) => grid
            .iter()
            .map(|&l| rand_index_at(t, labels, l))
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r))),
    }
    .unwrap_or(1.0)
}

pub fn run_rate(cfg: &RateConfig, jobs: usize) -> Result<RateSummary, ExperimentError> {
    cfg.validate()?;
    let mut ns = cfg.ns.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut thetas = cfg.thetas.clone();
    sort_floats(&mut thetas);
    let mut units = Vec::new();
    for &n in &ns {
        for &theta in &thetas {
            for &seed in &cfg.seeds {
                units.push((n, theta, seed));
            }
        }
    }
    let values = parallel_map(&units, jobs, |&(n, theta, seed)| {
        let spec = SbmSpec::symmetric(n, cfg.n_blocks, theta, theta / cfg.quotient).expect("validated");
        let (g, labels) = sample(&spec, seed);
        let t = test_matrix(&g, &Neighborhoods::rings(&g, cfg.k), cfg.variant);
        best_rand(&t, &labels, cfg.lambdas.as_deref())
    });
    let mut points = Vec::new();
    for (chunk, &(n, theta, _)) in values
        .chunks(cfg.seeds.len())
        .zip(units.iter().step_by(cfg.seeds.len()))
    {
        points.push(RatePoint {
            n,
            theta,
            rho: theta / cfg.quotient,
            mean_rand_index: chunk.iter().sum::<f64>() / chunk.len() as f64,
        });
    }
    let theta_min: Vec<(usize, Option<f64>)> = ns
        .iter()
        .map(|&n| {
            let first = points
                .iter()
                .find(|p| p.n == n && p.mean_rand_index >= cfg.threshold)
                .map(|p| p.theta);
            (n, first)
        })
        .collect();
    let feasible: Vec<(f64, f64)> = theta_min
        .iter()
        .filter_map(|&(n, t)| t.map(|t| ((n as f64).ln(), t.ln())))
        .collect();
    Ok(RateSummary {
        points,
        theta_min,
        slope: ls_slope(&feasible),
    })
}

/// Long-format CSV: `point` rows for every `(n, theta)`, `theta_min` rows for
/// every feasible `n` and one `slope` row when the slope exists.
pub fn rate_csv(summary: &RateSummary) -> String {
    let mut out = String::from("record,n,theta,rho,value\n");
    for p in &summary.points {
        let _ = writeln!(
            out,
            "point,{},{},{},{}",
            p.n,
            fmt_float(p.theta),
            fmt_float(p.rho),
            fmt_float(p.mean_rand_index)
        );
    }
    for &(n, theta) in &summary.theta_min {
        if let Some(theta) = theta {
            let p = summary
                .points
                .iter()
                .find(|p| p.n == n && p.theta == theta)
                .expect("theta_min comes from the points");
            let _ = writeln!(
                out,
                "theta_min,{},{},{},{}",
                n,
                fmt_float(theta),
                fmt_float(p.rho),
                fmt_float(p.mean_rand_index)
            );
        }
    }
    if let Some(slope) = summary.slope {
        let _ = writeln!(out, "slope,,,,{}", fmt_float(slope));
    }
    out
}

pub fn polygon_csv(poly: &PolygonSpec) -> String {
    let mut out = String::from("vertex,x,y,x_value,y_value\n");
    for (idx, (x, y)) in poly.vertices.iter().enumerate() {
        let value = |r: &crate::theory::Rational| *r.numer() as f64 / *r.denom() as f64;
        let _ = writeln!(out, "{idx},{x},{y},{},{}", fmt_float(value(x)), fmt_float(value(y)));
    }
    out
}

/// `a_k`, `b_k`, their difference and `(theta - rho)^k` for `k = 1..=k_max`.
pub fn ak_table_csv(theta: f64, rho: f64, n_blocks: usize, k_max: usize) -> String {
    let mut out = String::from("k,a_k,b_k,difference,power\n");
    for k in 1..=k_max {
        let (a, b) = ak_bk(theta, rho, n_blocks, k);
        let _ = writeln!(
            out,
            "{k},{},{},{},{}",
            fmt_float(a),
            fmt_float(b),
            fmt_float(a - b),
            fmt_float((theta - rho).powi(k as i32))
        );
    }
    out
}

pub fn constants_csv(theta: f64, rho: f64, n_blocks: usize, n: usize) -> String {
    let e = expected_counts_k1(theta, rho, n_blocks, n);
    format!("a,c,d\n{},{},{}\n", fmt_float(e.a), fmt_float(e.c), fmt_float(e.d))
}
