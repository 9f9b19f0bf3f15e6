//! Subcommand arguments and their evaluation.

use clap::Args;
use serde::Serialize;
use serde_json::json;

use ldpc_spectra::bounds::{
    conditioned_min_distance_bound, kappa, min_distance_bound, smallx_inequality_margin,
};
use ldpc_spectra::figures::figure_data;
use ldpc_spectra::growth::{self, x1};
use ldpc_spectra::real::Real;
use ldpc_spectra::sim::{self, MonteCarloConfig, DEFAULT_CONFIG_CAP, DEFAULT_ENUM_CAP};
use ldpc_spectra::spectrum::{
    avg_weight_d2, avg_weight_distribution, small_weight_scaling, SmallWeightScaling,
    SpectrumTable, DEFAULT_N_CAP,
};
use ldpc_spectra::EnsembleParams;

use crate::output::{opt_real, rational_fields, rational_json, real, to_json, CommandResult, Table};
use crate::{CliError, Failure};

pub struct Context {
    pub seed: u64,
    pub thread_cap: Option<usize>,
}

fn param_error(msg: impl Into<String>) -> CliError {
    CliError::new(Failure::Parameter, msg)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnsembleArgs {
    /// Field order (a prime power).
    #[arg(long)]
    pub q: u32,
    /// Variable degree.
    #[arg(long)]
    pub c: u32,
    /// Check degree.
    #[arg(long)]
    pub d: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Left end of the grid (default 0).
    #[arg(long)]
    pub xmin: Option<f64>,
    /// Right end of the grid (default: right end of the finite domain).
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Number of grid points, at least 2.
    #[arg(long, default_value_t = 1001)]
    pub steps: usize,
}

impl GridArgs {
    fn points(&self, right: f64) -> Result<Vec<f64>, CliError> {
        let lo = self.xmin.unwrap_or(0.0);
        let hi = self.xmax.unwrap_or(right);
        if self.steps < 2 {
            return Err(param_error(format!("steps must be at least 2 (got {})", self.steps)));
        }
        if !(lo < hi) {
            return Err(param_error(format!("need xmin < xmax (got {lo} and {hi})")));
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| if i + 1 == self.steps { hi } else { lo + (hi - lo) * i as f64 / last })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    /// Coefficient recurrence (any d).
    Recurrence,
    /// Closed form, d = 2 only.
    ClosedForm,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Block length; d must divide c*n.
    #[arg(long)]
    pub n: u32,
    /// Largest accepted block length.
    #[arg(long, default_value_t = DEFAULT_N_CAP, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_cap: u32,
    #[arg(long, value_enum, default_value_t = SpectrumMethod::Recurrence)]
    pub method: SpectrumMethod,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GrowthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeltaArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Smallest distance of the event l0 <= d_min <= floor(n alpha).
    #[arg(long, default_value_t = 1)]
    pub l0: u32,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Also report statistics conditioned on no all-zero column.
    #[arg(long)]
    pub filter: bool,
    /// Worker threads (default: all available, capped by the environment).
    #[serde(skip)]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Largest number of codewords enumerated per code.
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub enum_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExhaustiveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: u32,
    /// Largest accepted number of (permutation, multiplier) configurations.
    #[arg(long, default_value_t = DEFAULT_CONFIG_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub config_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Block length for the minimum-distance terms.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub l0: u32,
    /// Normalized distance for the minimum-distance terms.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Condition on codes without an all-zero column (l0 = 2).
    #[arg(long)]
    pub conditioned: bool,
    /// Log-spaced points in (1e-6, 1/q^2) for the small-x margin.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GvArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Code rate in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Check degrees d for the comparison with x0(2, ceil(d/2), d).
    #[arg(long, value_delimiter = ',', default_value = "6,12,24,48")]
    pub d_list: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    /// Table id, 1 to 5.
    #[arg(long)]
    pub id: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SmallWeightArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Fixed weight l >= 1.
    #[arg(long)]
    pub l: u32,
    /// Increasing block lengths.
    #[arg(long, value_delimiter = ',', default_value = "24,48,96,192,384")]
    pub n_list: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_N_CAP, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_cap: u32,
}

fn spectrum_result(table: &SpectrumTable) -> CommandResult {
    let mut t = Table::new(&["l", "numerator", "denominator", "approx"]);
    let mut values = Vec::with_capacity(table.values.len());
    for (l, v) in table.values.iter().enumerate() {
        let [num, den, approx] = rational_fields(v);
        t.push(vec![l.to_string(), num, den, approx]);
        let mut entry = rational_json(v);
        entry["l"] = json!(l);
        values.push(entry);
    }
    CommandResult {
        data: json!({ "params": table.params, "values": values }),
        table: t,
    }
}

pub fn spectrum(a: &SpectrumArgs) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    let p = EnsembleParams::new(q, c, d, a.n)?;
    let table = match a.method {
        SpectrumMethod::Recurrence => avg_weight_distribution(&p, a.n_cap)?,
        SpectrumMethod::ClosedForm => avg_weight_d2(&p)?,
    };
    Ok(spectrum_result(&table))
}

pub fn exhaustive(a: &ExhaustiveArgs) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    let p = EnsembleParams::new(q, c, d, a.n)?;
    Ok(spectrum_result(&sim::exhaustive_ensemble(&p, a.config_cap)?))
}

pub fn growth(a: &GrowthArgs) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    let xs = a.grid.points(if d >= 3 { x1(q, d) } else { 1.0 })?;
    let points = growth::omega_curve(q, c, d, &xs)?;
    let mut t = Table::new(&["x", "omega", "domega"]);
    for p in &points {
        t.push(vec![real(p.x), real(p.omega), opt_real(p.domega)]);
    }
    Ok(CommandResult {
        data: to_json(&points)?,
        table: t,
    })
}

pub fn delta(a: &DeltaArgs) -> Result<CommandResult, CliError> {
    let xs = a.grid.points(if a.d >= 3 { x1(a.q, a.d) } else { 1.0 })?;
    let evals = growth::delta_curve(a.q, a.d, &xs)?;
    let mut t = Table::new(&["x", "z", "zhat1", "xhat1", "delta"]);
    for e in &evals {
        t.push(vec![real(e.x), real(e.z), real(e.zhat1), real(e.xhat1), real(e.delta)]);
    }
    Ok(CommandResult {
        data: to_json(&evals)?,
        table: t,
    })
}

pub fn landmarks(a: &EnsembleArgs) -> Result<CommandResult, CliError> {
    let lm = growth::landmarks(a.q, a.c, a.d)?;
    let r = lm.residuals;
    let abs = |x: Option<f64>| x.map(f64::abs);
    let data = json!({
        "q": lm.q, "c": lm.c, "d": lm.d,
        "x1": lm.x1, "x0": lm.x0, "x2": lm.x2, "x3": lm.x3,
        "zhat2": lm.zhat2, "zhat2_neg": lm.zhat2_neg, "z1": lm.z1,
        "residuals": {
            "omega_x0": abs(r.omega_x0),
            "domega_x3": abs(r.domega_x3),
            "xi_zhat2": abs(r.xi_zhat2),
        },
    });
    let table = Table::key_value(vec![
        ("x1", real(lm.x1)),
        ("x0", opt_real(lm.x0)),
        ("x2", opt_real(lm.x2)),
        ("x3", opt_real(lm.x3)),
        ("zhat2", opt_real(lm.zhat2)),
        ("zhat2_neg", opt_real(lm.zhat2_neg)),
        ("z1", real(lm.z1)),
        ("residual_omega_x0", opt_real(abs(r.omega_x0))),
        ("residual_domega_x3", opt_real(abs(r.domega_x3))),
        ("residual_xi_zhat2", opt_real(abs(r.xi_zhat2))),
    ]);
    Ok(CommandResult { data, table })
}

pub fn simulate(a: &SimulateArgs, ctx: &Context) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    let p = EnsembleParams::new(q, c, d, a.n)?;
    let requested = a.workers.map(|w| w as usize);
    let workers = match (requested, ctx.thread_cap) {
        (Some(w), Some(cap)) => w.min(cap),
        (Some(w), None) => w,
        (None, _) => 0,
    };
    let cfg = MonteCarloConfig {
        trials: a.trials,
        seed: ctx.seed,
        l0: a.l0,
        alpha: a.alpha,
        filter_on: a.filter,
        workers,
        enum_cap: a.enum_cap,
    };
    let report = sim::monte_carlo(&p, &cfg)?;
    let header: &[&str] = if a.filter {
        &["l", "mean", "se", "filtered_mean", "filtered_se"]
    } else {
        &["l", "mean", "se"]
    };
    let mut t = Table::new(header);
    for (i, e) in report.mean_spectrum.iter().enumerate() {
        let mut row = vec![e.l.to_string(), real(e.mean), real(e.se)];
        if let Some(f) = &report.filtered {
            let fe = f.mean_spectrum.get(i);
            row.push(opt_real(fe.map(|x| x.mean)));
            row.push(opt_real(fe.map(|x| x.se)));
        }
        t.push(row);
    }
    Ok(CommandResult {
        data: to_json(&report)?,
        table: t,
    })
}

pub fn bounds(a: &BoundsArgs) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    if a.points == 0 {
        return Err(param_error("points must be at least 1"));
    }
    let hi = 1.0 / (q as f64 * q as f64);
    let (lo_ln, hi_ln) = (1e-6f64.ln(), hi.ln());
    let xs: Vec<f64> = (0..a.points)
        .map(|i| (lo_ln + (hi_ln - lo_ln) * (i as f64 + 0.5) / a.points as f64).exp())
        .collect();
    let margin = smallx_inequality_margin(q, c, d, &xs)?;
    let k = kappa(q, c, d);

    let report = match (a.n, a.alpha) {
        (Some(n), Some(alpha)) => {
            let p = EnsembleParams::new(q, c, d, n)?;
            Some(if a.conditioned {
                conditioned_min_distance_bound(&p, alpha)?
            } else {
                min_distance_bound(&p, a.l0, alpha)?
            })
        }
        (None, None) => None,
        _ => return Err(param_error("--n and --alpha must be given together")),
    };

    let mut pairs = vec![
        ("kappa", real(k)),
        ("smallx_margin", real(margin.margin)),
        ("smallx_argmin", real(margin.argmin)),
    ];
    if let Some(r) = &report {
        pairs.extend([
            ("Delta", r.delta.to_string()),
            ("exponent_term", r.exponent_term.to_string()),
            ("poly_term", real(r.poly_term)),
            ("omega_alpha", real(r.omega_alpha)),
            ("exp_term", real(r.exp_term)),
            ("log_exp_term", real(r.log_exp_term)),
        ]);
    }
    let data = json!({
        "kappa": k,
        "smallx": { "margin": Real(margin.margin), "argmin": margin.argmin, "points": a.points },
        "min_distance": to_json(&report)?,
    });
    Ok(CommandResult {
        data,
        table: Table::key_value(pairs),
    })
}

pub fn gv_limit(a: &GvArgs) -> Result<CommandResult, CliError> {
    let gv = growth::gv_threshold(a.q, a.r)?;
    let mut rows = Vec::new();
    let mut t = Table::new(&["d", "c", "x0", "gv_threshold", "gap"]);
    for &d in &a.d_list {
        let c = d.div_ceil(2);
        let lm = growth::landmarks(2, c, d)?;
        let x0 = lm
            .x0
            .ok_or_else(|| CliError::new(Failure::Domain, format!("no zero of omega for d = {d}")))?;
        let gap = (x0 - gv).abs();
        t.push(vec![d.to_string(), c.to_string(), real(x0), real(gv), real(gap)]);
        rows.push(json!({ "d": d, "c": c, "x0": x0, "gap": gap }));
    }
    if a.d_list.is_empty() {
        t.push(vec![String::new(), String::new(), String::new(), real(gv), String::new()]);
    }
    Ok(CommandResult {
        data: json!({ "q": a.q, "r": a.r, "gv_threshold": gv, "approach": rows }),
        table: t,
    })
}

pub fn figure(a: &FigureArgs) -> Result<CommandResult, CliError> {
    let fig = figure_data(a.id)?;
    let header: Vec<&str> = fig.columns.iter().map(String::as_str).collect();
    let mut t = Table::new(&header);
    for row in &fig.rows {
        t.push(row.iter().map(|&v| real(v)).collect());
    }
    Ok(CommandResult {
        data: to_json(&fig)?,
        table: t,
    })
}

pub fn small_weight(a: &SmallWeightArgs) -> Result<CommandResult, CliError> {
    let EnsembleArgs { q, c, d } = a.ensemble;
    let scaling = small_weight_scaling(q, c, d, a.l, &a.n_list, a.n_cap)?;
    let values = match &scaling {
        SmallWeightScaling::ExactZero { values, .. } | SmallWeightScaling::Fit { values, .. } => values,
    };
    let mut t = Table::new(&["n", "numerator", "denominator", "approx"]);
    let mut entries = Vec::new();
    for (n, v) in values {
        let [num, den, approx] = rational_fields(v);
        t.push(vec![n.to_string(), num, den, approx]);
        let mut e = rational_json(v);
        e["n"] = json!(n);
        entries.push(e);
    }
    Ok(CommandResult {
        data: json!({ "scaling": to_json(&scaling)?, "values": entries }),
        table: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(xmin: Option<f64>, xmax: Option<f64>, steps: usize) -> GridArgs {
        GridArgs { xmin, xmax, steps }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let xs = grid(None, None, 4).points(0.8).unwrap();
        assert_eq!(xs.len(), 4);
        assert_eq!((xs[0], xs[3]), (0.0, 0.8));
        let xs = grid(Some(0.1), Some(0.3), 3).points(1.0).unwrap();
        assert!((xs[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(grid(None, None, 1).points(1.0).is_err());
        assert!(grid(Some(0.5), Some(0.5), 3).points(1.0).is_err());
        assert!(grid(Some(f64::NAN), None, 3).points(1.0).is_err());
    }
}
