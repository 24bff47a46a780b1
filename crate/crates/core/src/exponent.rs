//! Growth exponents of partial sums and the partial-summation (Kronecker)
//! check.

use crate::error::{check_range, Error, Result};
use crate::multiplicative::{DerivedFunctionKind, MultiplicativeFunction};
use crate::par::Execution;
use crate::sieve::FactorSieve;
use crate::summation::{checkpointed, CompensatedSum, Schedule};
use crate::verdict::Verdict;

/// Running sums `sum_{n<=x} a(n)` at ascending checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumSeries {
    pub checkpoints: Vec<(u64, f64)>,
    pub kind: DerivedFunctionKind,
    pub spec_id: String,
    /// Sums were accumulated in integer arithmetic and are exact.
    pub exact: bool,
}

impl PartialSumSeries {
    /// Wraps externally produced points, e.g. synthetic power laws.
    pub fn from_points(
        kind: DerivedFunctionKind,
        spec_id: impl Into<String>,
        checkpoints: Vec<(u64, f64)>,
    ) -> Self {
        Self {
            checkpoints,
            kind,
            spec_id: spec_id.into(),
            exact: false,
        }
    }
}

pub fn checkpoint_partial_sums<F>(
    func: &F,
    kind: DerivedFunctionKind,
    x_max: u64,
    schedule: &Schedule,
    sieve: &FactorSieve,
) -> Result<PartialSumSeries>
where
    F: MultiplicativeFunction + ?Sized,
{
    checkpoint_partial_sums_with(func, kind, x_max, schedule, sieve, Execution::default())
}

/// Integer-exact when `func` only takes values in `{-1, 0, 1}` at primes,
/// compensated floating point otherwise.
pub fn checkpoint_partial_sums_with<F>(
    func: &F,
    kind: DerivedFunctionKind,
    x_max: u64,
    schedule: &Schedule,
    sieve: &FactorSieve,
    exec: Execution,
) -> Result<PartialSumSeries>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("x_max", x_max, 1, sieve.limit())?;
    let xs = schedule.checkpoints(x_max)?;
    let exact = func.is_integral();
    let values: Vec<f64> = if exact {
        let sums: Vec<i64> =
            checkpointed(exec, x_max, &xs, |n| func.coefficient_int(kind, n, sieve));
        sums.into_iter().map(|v| v as f64).collect()
    } else {
        let sums: Vec<CompensatedSum> =
            checkpointed(exec, x_max, &xs, |n| func.coefficient(kind, n, sieve));
        sums.iter().map(CompensatedSum::value).collect()
    };
    Ok(PartialSumSeries {
        checkpoints: xs.into_iter().zip(values).collect(),
        kind,
        spec_id: func.id(),
        exact,
    })
}

/// Minimum number of checkpoints a fit may use.
pub const MIN_FIT_POINTS: usize = 8;

/// Fitted slope of `log M(x)` against `log x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub alpha_hat: f64,
    pub stderr: f64,
    pub window: (u64, u64),
    pub points_used: usize,
    pub epsilon_slack: f64,
}

/// Fit window and slack; `window = None` drops the first decade of
/// checkpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub window: Option<(u64, u64)>,
    pub epsilon_slack: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            window: None,
            epsilon_slack: 0.05,
        }
    }
}

/// `M(x) = max_{y <= x} |sum(y)|` over the checkpoints.
pub fn monotone_envelope(checkpoints: &[(u64, f64)]) -> Vec<(u64, f64)> {
    let mut m = 0.0f64;
    checkpoints
        .iter()
        .map(|&(x, v)| {
            m = m.max(v.abs());
            (x, m)
        })
        .collect()
}

/// Least-squares slope of `ln M` against `ln x` inside the window, skipping
/// checkpoints where `M = 0`.
pub fn fit_exponent(series: &PartialSumSeries, opts: FitOptions) -> Result<ExponentFit> {
    let first = series.checkpoints.first().map_or(1, |&(x, _)| x);
    let last = series.checkpoints.last().map_or(1, |&(x, _)| x);
    let (lo, hi) = opts.window.unwrap_or((first.saturating_mul(10), last));
    if lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "empty fit window [{lo}, {hi}]"
        )));
    }
    let pts: Vec<(f64, f64)> = monotone_envelope(&series.checkpoints)
        .into_iter()
        .filter(|&(x, m)| x >= lo && x <= hi && m > 0.0)
        .map(|(x, m)| ((x as f64).ln(), m.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            got: pts.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            got: 1,
            needed: MIN_FIT_POINTS,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        alpha_hat: slope,
        stderr,
        window: (lo, hi),
        points_used: pts.len(),
        epsilon_slack: opts.epsilon_slack,
    })
}

/// Checkpoints in each half of the Kronecker window.
pub const KRONECKER_HALF_WINDOW: usize = 8;
/// Late envelope at most this fraction of the early envelope passes.
pub const KRONECKER_DECAY: f64 = 0.9;

/// Trace of `sum_{n<=x} a(n) / x^sigma` and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerReport {
    pub trace: Vec<(u64, f64)>,
    /// `sup |sum_{m<=n} a(m)| / n^sigma` over the earlier half of the window.
    pub early_max: f64,
    /// Same over the later half.
    pub late_max: f64,
    pub verdict: Verdict,
}

/// Checks that `sum_{n<=x} a(n) = o(x^sigma)` looks plausible on `1..=x_max`,
/// with `coefficients[i] = a(i + 1)`.
///
/// The last `2 * KRONECKER_HALF_WINDOW` checkpoints of the default schedule
/// are split into an early and a late half and the supremum of the
/// normalized sum over every `n` in each half is compared: pass when both
/// vanish or the late one is at most [`KRONECKER_DECAY`] of the early one,
/// fail when it is not smaller at all.
pub fn kronecker_check(coefficients: &[f64], sigma: f64, x_max: u64) -> Result<KroneckerReport> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    check_range("x_max", x_max, 1, coefficients.len() as u64)?;
    let xs = Schedule::default().checkpoints(x_max)?;
    let need = 2 * KRONECKER_HALF_WINDOW + 1;
    let split = if xs.len() >= need {
        Some((
            xs[xs.len() - need],
            xs[xs.len() - KRONECKER_HALF_WINDOW - 1],
        ))
    } else {
        None
    };

    let mut sum = CompensatedSum::new();
    let mut trace = Vec::with_capacity(xs.len());
    let mut next = xs.iter().peekable();
    let (mut early_max, mut late_max) = (0.0f64, 0.0f64);
    for (i, &a) in coefficients[..x_max as usize].iter().enumerate() {
        let n = i as u64 + 1;
        sum.add(a);
        let normalized = sum.value() / (n as f64).powf(sigma);
        if let Some((start, mid)) = split {
            if n > mid {
                late_max = late_max.max(normalized.abs());
            } else if n > start {
                early_max = early_max.max(normalized.abs());
            }
        }
        if next.peek() == Some(&&n) {
            trace.push((n, normalized));
            next.next();
        }
    }

    let verdict = match split {
        None => Verdict::Inconclusive,
        Some(_) if early_max == 0.0 && late_max == 0.0 => Verdict::Pass,
        Some(_) if late_max <= KRONECKER_DECAY * early_max => Verdict::Pass,
        Some(_) if late_max >= early_max => Verdict::Fail,
        Some(_) => Verdict::Inconclusive,
    };
    Ok(KroneckerReport {
        trace,
        early_max,
        late_max,
        verdict,
    })
}

/// `a(n) = 1_prime(n) (1 + f(n)) log n` for `n = 1..=x_max`.
pub fn prime_log_coefficients<F>(func: &F, x_max: u64, sieve: &FactorSieve) -> Result<Vec<f64>>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("x_max", x_max, 1, sieve.limit())?;
    Ok((1..=x_max)
        .map(|n| {
            if sieve.is_prime(n) {
                (1.0 + func.prime_value(n)) * (n as f64).ln()
            } else {
                0.0
            }
        })
        .collect())
}
