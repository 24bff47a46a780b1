//! Subcommand implementations. Each returns the text printed on stdout;
//! files are written below the configured output directory.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use pretentious_core::dirichlet::{dirichlet_sum, euler_product_g, euler_product_u};
use pretentious_core::{
    checkpoint_partial_sums, fit_exponent, prime_sum_s, zeta, ComplexArgument, DerivedFunctionKind,
    Error, ExponentFit, FactorSieve, FitOptions, PartialSumSeries, SeriesEval, TailBound,
};

use crate::cache;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::report::{csv_text, fmt_real, write_file, Csv, VerificationReport};
use crate::verify::run_verification;

/// Loads the cached sieve for `sieve.limit` or builds it.
pub fn obtain_sieve(cfg: &ExperimentConfig) -> Result<FactorSieve> {
    let (sieve, _) = cache::load_or_build(&cfg.output_dir, cfg.sieve_limit)?;
    cfg.check_against(&sieve)?;
    Ok(sieve)
}

pub fn cmd_sieve(cfg: &ExperimentConfig) -> Result<String> {
    let start = Instant::now();
    let (sieve, cached) = cache::load_or_build(&cfg.output_dir, cfg.sieve_limit)?;
    let elapsed = start.elapsed();
    let path = cache::cache_path(&cfg.output_dir, cfg.sieve_limit);
    if !cached {
        cache::store(&path, &sieve)?;
    }
    let count = sieve.prime_count(sieve.limit())?;
    Ok(format!(
        "limit {}\nprimes {}\n{} {:.3} s\ncache {}\n",
        sieve.limit(),
        count,
        if cached { "loaded in" } else { "built in" },
        elapsed.as_secs_f64(),
        path.display()
    ))
}

fn out_path(cfg: &ExperimentConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

/// `sum_{n<=x} a(n)` at every checkpoint up to `sieve.limit`.
pub fn cmd_partial_sums(
    cfg: &ExperimentConfig,
    kind: DerivedFunctionKind,
    sieve: &FactorSieve,
) -> Result<String> {
    let series = checkpoint_partial_sums(&cfg.spec, kind, cfg.sieve_limit, &cfg.schedule(), sieve)?;
    let mut csv = Csv::new(&["x", "sum"]);
    for &(x, v) in &series.checkpoints {
        csv.row([x.to_string(), fmt_real(v)]);
    }
    let path = out_path(cfg, &format!("partial_sums_{kind}.csv"));
    csv.write(&path)?;
    let (x, v) = *series.checkpoints.last().expect("schedule ends at x_max");
    Ok(format!(
        "{} {kind}: sum up to {x} = {}\nwrote {}\n",
        series.spec_id,
        fmt_real(v),
        path.display()
    ))
}

/// `S(x) = sum_{p<=x} (1 + f(p)) log p` at every checkpoint.
pub fn cmd_prime_sum(cfg: &ExperimentConfig, sieve: &FactorSieve) -> Result<String> {
    let trace = prime_sum_s(&cfg.spec, cfg.sieve_limit, &cfg.schedule(), sieve)?;
    let mut csv = Csv::new(&["x", "value"]);
    for &(x, v) in &trace.checkpoints {
        csv.row([x.to_string(), fmt_real(v)]);
    }
    let path = out_path(cfg, "prime_sum.csv");
    csv.write(&path)?;
    Ok(format!(
        "S({}) = {}\nwrote {}\n",
        cfg.sieve_limit,
        fmt_real(trace.last_value()),
        path.display()
    ))
}

/// Series and products available to `cmd_series`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesName {
    Zeta,
    Dirichlet(DerivedFunctionKind),
    GProduct,
    UProduct,
}

impl SeriesName {
    pub const ALL: [SeriesName; 7] = [
        SeriesName::Zeta,
        SeriesName::Dirichlet(DerivedFunctionKind::FPlain),
        SeriesName::Dirichlet(DerivedFunctionKind::HConv),
        SeriesName::Dirichlet(DerivedFunctionKind::GConv),
        SeriesName::Dirichlet(DerivedFunctionKind::FMu2),
        SeriesName::GProduct,
        SeriesName::UProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesName::Zeta => "zeta",
            SeriesName::Dirichlet(k) => k.name(),
            SeriesName::GProduct => "G_product",
            SeriesName::UProduct => "U_product",
        }
    }
}

impl std::str::FromStr for SeriesName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SeriesName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SeriesName::ALL.iter().map(|n| n.name()).collect();
                format!("unknown series '{s}', expected one of {}", names.join(", "))
            })
    }
}

fn evaluate(
    cfg: &ExperimentConfig,
    which: SeriesName,
    s: ComplexArgument,
    sieve: &FactorSieve,
) -> pretentious_core::Result<SeriesEval> {
    match which {
        SeriesName::Zeta => zeta(s, cfg.zeta_tol),
        SeriesName::Dirichlet(kind) => dirichlet_sum(&cfg.spec, kind, s, cfg.truncation_n, sieve),
        SeriesName::GProduct => euler_product_g(&cfg.spec, s, cfg.euler_p, sieve),
        SeriesName::UProduct => euler_product_u(&cfg.spec, s, cfg.euler_p, sieve),
    }
}

/// Evaluates one series at every grid point. Errors at a point are
/// recorded in its row and do not stop the run.
pub fn cmd_series(
    cfg: &ExperimentConfig,
    which: SeriesName,
    sieve: &FactorSieve,
) -> Result<String> {
    let mut csv = Csv::new(&[
        "sigma",
        "t",
        "re",
        "im",
        "truncation",
        "tail_bound",
        "method",
        "status",
    ]);
    let mut out = String::new();
    for &s in &cfg.s_grid {
        match evaluate(cfg, which, s, sieve) {
            Ok(e) => {
                let tail = match e.tail {
                    TailBound::Rigorous(b) => fmt_real(b),
                    TailBound::Heuristic => "heuristic".into(),
                };
                csv.row([
                    fmt_real(s.sigma),
                    fmt_real(s.t),
                    fmt_real(e.value.re),
                    fmt_real(e.value.im),
                    e.truncation.to_string(),
                    tail.clone(),
                    e.method.name().to_string(),
                    "ok".to_string(),
                ]);
                let _ = writeln!(
                    out,
                    "{}({s}) = {} {:+}i  [{} {}, tail {tail}]",
                    which.name(),
                    e.value.re,
                    e.value.im + 0.0,
                    e.method.name(),
                    e.truncation
                );
            }
            Err(err) => {
                csv.row([
                    fmt_real(s.sigma),
                    fmt_real(s.t),
                    "NaN".into(),
                    "NaN".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    csv_text(&err.to_string()),
                ]);
                let _ = writeln!(out, "{}({s}): {err}", which.name());
            }
        }
    }
    let path = out_path(cfg, &format!("series_{}.csv", which.name()));
    csv.write(&path)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(out)
}

/// Runs the verification suite and writes `verify_report.csv`. The second
/// value is true when no line failed.
pub fn cmd_verify(cfg: &ExperimentConfig, sieve: &FactorSieve) -> Result<(String, bool)> {
    let report: VerificationReport = run_verification(cfg, &cfg.spec, sieve)?;
    let path = out_path(cfg, "verify_report.csv");
    report.to_csv().write(&path)?;
    write_file(
        &out_path(cfg, "verify_report.sha256"),
        format!("{}\n", report.config_hash).as_bytes(),
    )?;
    let mut out = report.summary();
    let _ = writeln!(out, "wrote {}", path.display());
    Ok((out, !report.any_fail()))
}

/// Checkpoints of the synthetic power law `x^alpha` on the configured
/// schedule.
pub fn synthetic_series(cfg: &ExperimentConfig, alpha: f64) -> Result<PartialSumSeries> {
    let xs = cfg.schedule().checkpoints(cfg.sieve_limit)?;
    let points = xs
        .into_iter()
        .map(|x| (x, (x as f64).powf(alpha)))
        .collect();
    Ok(PartialSumSeries::from_points(
        DerivedFunctionKind::FPlain,
        format!("synthetic(x^{alpha})"),
        points,
    ))
}

/// Fits the growth exponent of freshly computed partial sums, or of a
/// synthetic power law when `synthetic` is given.
pub fn cmd_exponent(
    cfg: &ExperimentConfig,
    kind: DerivedFunctionKind,
    synthetic: Option<f64>,
    sieve: Option<&FactorSieve>,
) -> Result<(String, ExponentFit)> {
    let series = match (synthetic, sieve) {
        (Some(alpha), _) => synthetic_series(cfg, alpha)?,
        (None, Some(sieve)) => {
            checkpoint_partial_sums(&cfg.spec, kind, cfg.sieve_limit, &cfg.schedule(), sieve)?
        }
        (None, None) => return Err(HarnessError::Config("exponent fit needs a sieve".into())),
    };
    let opts = FitOptions {
        window: None,
        epsilon_slack: cfg.epsilon_slack,
    };
    let fit = fit_exponent(&series, opts).map_err(|e| match e {
        Error::InsufficientData { got, needed } => HarnessError::Config(format!(
            "only {got} checkpoints in the fit window, {needed} needed; raise sieve.limit or lower checkpoint.ratio"
        )),
        other => other.into(),
    })?;
    let mut csv = Csv::new(&[
        "spec_id",
        "kind",
        "alpha_hat",
        "stderr",
        "x_lo",
        "x_hi",
        "points_used",
    ]);
    csv.row([
        csv_text(&series.spec_id),
        series.kind.name().to_string(),
        fmt_real(fit.alpha_hat),
        fmt_real(fit.stderr),
        fit.window.0.to_string(),
        fit.window.1.to_string(),
        fit.points_used.to_string(),
    ]);
    let path = out_path(cfg, "exponent.csv");
    csv.write(&path)?;
    let text = format!(
        "{} {}: alpha_hat = {} (stderr {}) on [{}, {}] from {} points\nwrote {}\n",
        series.spec_id,
        series.kind,
        fit.alpha_hat,
        fit.stderr,
        fit.window.0,
        fit.window.1,
        fit.points_used,
        path.display()
    );
    Ok((text, fit))
}
