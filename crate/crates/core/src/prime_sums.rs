//! Sums over primes: `S(x) = sum_{p<=x} (1 + f(p)) log p`, weighted
//! variants, and the pretentious distance to another function.

use crate::error::{check_range, Error, Result};
use crate::multiplicative::MultiplicativeFunction;
use crate::par::Execution;
use crate::sieve::FactorSieve;
use crate::summation::{checkpointed, CompensatedSum, Schedule};
use crate::verdict::Verdict;

/// Weight `w(p)` in `sum_{p<=x} (1 + f(p)) w(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimeWeight {
    LogP,
    InvPSigma(f64),
    LogOverPSigma(f64),
}

impl PrimeWeight {
    #[inline]
    fn at(self, p: u64) -> f64 {
        let pf = p as f64;
        match self {
            PrimeWeight::LogP => pf.ln(),
            PrimeWeight::InvPSigma(sigma) => pf.powf(-sigma),
            PrimeWeight::LogOverPSigma(sigma) => pf.ln() * pf.powf(-sigma),
        }
    }
}

/// Running prime sums at ascending checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSumTrace {
    pub checkpoints: Vec<(u64, f64)>,
    pub weight: PrimeWeight,
}

impl PrimeSumTrace {
    pub fn last_value(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |&(_, v)| v)
    }
}

/// `sum_{p<=x} (1 + f(p)) w(p)` at every checkpoint of `schedule`.
pub fn weighted_prime_sum<F>(
    func: &F,
    weight: PrimeWeight,
    x_max: u64,
    schedule: &Schedule,
    sieve: &FactorSieve,
) -> Result<PrimeSumTrace>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("x_max", x_max, 1, sieve.limit())?;
    let xs = schedule.checkpoints(x_max)?;
    let sums: Vec<CompensatedSum> = checkpointed(Execution::default(), x_max, &xs, |n| {
        if sieve.is_prime(n) {
            (1.0 + func.prime_value(n)) * weight.at(n)
        } else {
            0.0
        }
    });
    Ok(PrimeSumTrace {
        checkpoints: xs
            .into_iter()
            .zip(sums.iter().map(CompensatedSum::value))
            .collect(),
        weight,
    })
}

/// `S(x) = sum_{p<=x} (1 + f(p)) log p`; nondecreasing since `f >= -1`.
pub fn prime_sum_s<F>(
    func: &F,
    x_max: u64,
    schedule: &Schedule,
    sieve: &FactorSieve,
) -> Result<PrimeSumTrace>
where
    F: MultiplicativeFunction + ?Sized,
{
    weighted_prime_sum(func, PrimeWeight::LogP, x_max, schedule, sieve)
}

/// `D(f, g; x)^2 = sum_{p<=x} (1 - f(p) g(p)) / p` for real-valued `f, g`.
pub fn pretentious_distance_sq<F, G>(f: &F, g: &G, x: u64, sieve: &FactorSieve) -> Result<f64>
where
    F: MultiplicativeFunction + ?Sized,
    G: MultiplicativeFunction + ?Sized,
{
    let trace = pretentious_distance_trace(f, g, x, &Schedule::Explicit(vec![]), sieve)?;
    Ok(trace.last().map_or(0.0, |&(_, v)| v))
}

/// `D(f, g; x)^2` at every checkpoint.
pub fn pretentious_distance_trace<F, G>(
    f: &F,
    g: &G,
    x_max: u64,
    schedule: &Schedule,
    sieve: &FactorSieve,
) -> Result<Vec<(u64, f64)>>
where
    F: MultiplicativeFunction + ?Sized,
    G: MultiplicativeFunction + ?Sized,
{
    check_range("x", x_max, 0, sieve.limit())?;
    if x_max < 2 {
        return Ok(vec![(x_max, 0.0)]);
    }
    let xs = schedule.checkpoints(x_max)?;
    let sums: Vec<CompensatedSum> = checkpointed(Execution::default(), x_max, &xs, |n| {
        if sieve.is_prime(n) {
            (1.0 - f.prime_value(n) * g.prime_value(n)) / n as f64
        } else {
            0.0
        }
    });
    Ok(xs
        .into_iter()
        .zip(sums.iter().map(CompensatedSum::value))
        .collect())
}

/// Dyadic increments examined by the convergence verdict.
pub const DIAGNOSTIC_WINDOW: usize = 8;
/// Each increment must be at most this fraction of the previous one.
pub const DIAGNOSTIC_DECAY: f64 = 0.75;
/// Failing when the last increment is still at least this fraction of the
/// first increment in the window.
pub const DIAGNOSTIC_STALL: f64 = 0.5;

/// Trace and verdict of [`weighted_tail_diagnostic`].
#[derive(Debug, Clone, PartialEq)]
pub struct TailDiagnostic {
    pub trace: PrimeSumTrace,
    /// `T(2^k) - T(2^(k-1))` for `k = 1, 2, ...`.
    pub increments: Vec<f64>,
    pub verdict: Verdict,
}

/// Three-valued verdict on a sequence of nonnegative dyadic increments.
///
/// Pass when each of the last [`DIAGNOSTIC_WINDOW`] increments is at most
/// [`DIAGNOSTIC_DECAY`] times its predecessor; fail when the last one has
/// not dropped below [`DIAGNOSTIC_STALL`] times the window's first one.
pub fn dyadic_verdict(increments: &[f64]) -> Verdict {
    if increments.len() < DIAGNOSTIC_WINDOW + 1 {
        return Verdict::Inconclusive;
    }
    let window = &increments[increments.len() - DIAGNOSTIC_WINDOW - 1..];
    if window.windows(2).all(|w| w[1] <= DIAGNOSTIC_DECAY * w[0]) {
        return Verdict::Pass;
    }
    let (first, last) = (window[0], window[DIAGNOSTIC_WINDOW]);
    if last > 0.0 && last >= DIAGNOSTIC_STALL * first {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

/// Partial sums of `sum_p (1 + f(p)) log p / p^sigma` on a dyadic grid with
/// a convergence verdict. Diagnostic only.
pub fn weighted_tail_diagnostic<F>(
    func: &F,
    sigma: f64,
    x_max: u64,
    sieve: &FactorSieve,
) -> Result<TailDiagnostic>
where
    F: MultiplicativeFunction + ?Sized,
{
    weighted_tail_diagnostic_with(func, PrimeWeight::LogOverPSigma(sigma), x_max, sieve)
}

/// As [`weighted_tail_diagnostic`] for any prime weight.
pub fn weighted_tail_diagnostic_with<F>(
    func: &F,
    weight: PrimeWeight,
    x_max: u64,
    sieve: &FactorSieve,
) -> Result<TailDiagnostic>
where
    F: MultiplicativeFunction + ?Sized,
{
    if let PrimeWeight::InvPSigma(sigma) | PrimeWeight::LogOverPSigma(sigma) = weight {
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
    }
    let trace = weighted_prime_sum(func, weight, x_max, &Schedule::dyadic(), sieve)?;
    let dyadic: Vec<f64> = trace
        .checkpoints
        .iter()
        .filter(|(x, _)| x.is_power_of_two())
        .map(|&(_, v)| v)
        .collect();
    let increments: Vec<f64> = dyadic.windows(2).map(|w| w[1] - w[0]).collect();
    let verdict = dyadic_verdict(&increments);
    Ok(TailDiagnostic {
        trace,
        increments,
        verdict,
    })
}
