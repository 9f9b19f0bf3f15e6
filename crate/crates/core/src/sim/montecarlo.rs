//! Seeded, parallel Monte-Carlo statistics over sampled codes.
//!
//! Trial `i` draws from `derive_seed(seed, i)`, and all accumulators are
//! exact integers, so reports do not depend on scheduling or worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::sim::enumerate::{enumerate_weights, low_weight_dmin};
use crate::sim::sample::{derive_seed, rng_from_seed, sample_code_with, CodeFilter, NoZeroColumn};
use crate::spectrum::EnsembleParams;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub l: u32,
    pub mean: f64,
    /// Standard error of the mean; zero for a single trial.
    pub se: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbEstimate {
    pub count: u64,
    pub trials: u64,
    pub p: f64,
    /// Wilson score interval at 95%.
    pub wilson_center: f64,
    pub half_width: f64,
}

impl ProbEstimate {
    pub fn new(count: u64, trials: u64) -> Self {
        let t = trials as f64;
        let p = count as f64 / t;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / t;
        ProbEstimate {
            count,
            trials,
            p,
            wilson_center: (p + z2 / (2.0 * t)) / denom,
            half_width: Z95 / denom * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilteredStats {
    pub filter: &'static str,
    pub accepted: u64,
    /// Empty when no trial passed the filter.
    pub mean_spectrum: Vec<SpectrumEstimate>,
    pub p_dmin_le: Option<ProbEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub params: EnsembleParams,
    pub trials: u64,
    pub seed: u64,
    pub l0: u32,
    pub alpha: f64,
    /// Upper end `floor(n alpha)` of the distance event.
    pub l_max: u32,
    pub mean_spectrum: Vec<SpectrumEstimate>,
    /// Estimate of `P{l0 <= d_min <= floor(n alpha)}`.
    pub p_dmin_le: ProbEstimate,
    pub filtered: Option<FilteredStats>,
    pub filter_pass_rate: f64,
}

#[derive(Debug, Clone)]
pub struct MonteCarloConfig {
    pub trials: u64,
    pub seed: u64,
    pub l0: u32,
    pub alpha: f64,
    pub filter_on: bool,
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
    pub enum_cap: u64,
}

#[derive(Debug, Clone, Default)]
struct Moments {
    count: u64,
    sum: Vec<u128>,
    sumsq: Vec<u128>,
    events: u64,
}

impl Moments {
    fn new(len: usize) -> Self {
        Moments {
            count: 0,
            sum: vec![0; len],
            sumsq: vec![0; len],
            events: 0,
        }
    }

    fn push(&mut self, a: &[u64], event: bool) {
        self.count += 1;
        self.events += u64::from(event);
        for (l, &v) in a.iter().enumerate() {
            self.sum[l] += v as u128;
            self.sumsq[l] += (v as u128) * (v as u128);
        }
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.count += other.count;
        self.events += other.events;
        for l in 0..self.sum.len() {
            self.sum[l] += other.sum[l];
            self.sumsq[l] += other.sumsq[l];
        }
        self
    }

    fn estimates(&self) -> Vec<SpectrumEstimate> {
        if self.count == 0 {
            return Vec::new();
        }
        let t = self.count as u128;
        (0..self.sum.len())
            .map(|l| {
                let (s, ss) = (self.sum[l], self.sumsq[l]);
                let se = if t < 2 {
                    0.0
                } else {
                    // (T sum(x^2) - (sum x)^2) / (T^2 (T - 1)), exact numerator
                    let num = t * ss - s * s;
                    (num as f64 / ((t * t * (t - 1)) as f64)).sqrt()
                };
                SpectrumEstimate {
                    l: l as u32,
                    mean: s as f64 / t as f64,
                    se,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Acc {
    all: Moments,
    kept: Moments,
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Runs `cfg.trials` independent draws and aggregates their spectra.
pub fn monte_carlo(params: &EnsembleParams, cfg: &MonteCarloConfig) -> Result<SimReport> {
    monte_carlo_with_filter(params, cfg, cfg.filter_on.then_some(&NoZeroColumn as &dyn CodeFilter))
}

/// As [`monte_carlo`] with an arbitrary conditioning filter.
pub fn monte_carlo_with_filter(
    params: &EnsembleParams,
    cfg: &MonteCarloConfig,
    filter: Option<&dyn CodeFilter>,
) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::param(format!("alpha = {} is outside (0, 1)", cfg.alpha)));
    }
    let field = FieldSpec::new(params.q)?;
    let n = params.n as usize;
    let l_max = (params.n as f64 * cfg.alpha).floor() as u32;
    let in_event = |dmin: Option<u32>| dmin.is_some_and(|d| cfg.l0 <= d && d <= l_max);

    let trial = |i: u64| -> Result<(Vec<u64>, bool, bool)> {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, i));
        let code = sample_code_with(&field, params, &mut rng);
        let we = enumerate_weights(&field, &code.parity_matrix, cfg.enum_cap)?;
        let pass = filter.is_some_and(|f| f.accepts(&code));
        Ok((we.a, in_event(we.dmin), pass))
    };
    let empty = || Acc {
        all: Moments::new(n + 1),
        kept: Moments::new(n + 1),
    };
    let acc = with_pool(cfg.workers, || {
        (0..cfg.trials)
            .into_par_iter()
            .try_fold(empty, |mut acc, i| {
                let (a, event, pass) = trial(i)?;
                acc.all.push(&a, event);
                if pass {
                    acc.kept.push(&a, event);
                }
                Ok::<_, Error>(acc)
            })
            .try_reduce(empty, |x, y| {
                Ok(Acc {
                    all: x.all.merge(y.all),
                    kept: x.kept.merge(y.kept),
                })
            })
    })??;

    let filtered = filter.map(|f| FilteredStats {
        filter: f.name(),
        accepted: acc.kept.count,
        mean_spectrum: acc.kept.estimates(),
        p_dmin_le: (acc.kept.count > 0).then(|| ProbEstimate::new(acc.kept.events, acc.kept.count)),
    });
    Ok(SimReport {
        params: *params,
        trials: cfg.trials,
        seed: cfg.seed,
        l0: cfg.l0,
        alpha: cfg.alpha,
        l_max,
        mean_spectrum: acc.all.estimates(),
        p_dmin_le: ProbEstimate::new(acc.all.events, cfg.trials),
        filtered,
        filter_pass_rate: if filter.is_some() {
            acc.kept.count as f64 / cfg.trials as f64
        } else {
            1.0
        },
    })
}

/// Fraction of sampled codes with minimum distance at most `t`, using a
/// low-weight search instead of full enumeration.
pub fn small_dmin_rate(
    params: &EnsembleParams,
    trials: u64,
    seed: u64,
    t: u32,
    workers: usize,
) -> Result<ProbEstimate> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let field = FieldSpec::new(params.q)?;
    let hits = with_pool(workers, || {
        (0..trials)
            .into_par_iter()
            .filter(|&i| {
                let mut rng = rng_from_seed(derive_seed(seed, i));
                let code = sample_code_with(&field, params, &mut rng);
                low_weight_dmin(&field, &code.parity_matrix, t).is_some()
            })
            .count() as u64
    })?;
    Ok(ProbEstimate::new(hits, trials))
}
