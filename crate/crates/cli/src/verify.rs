//! The verification suite: one report line per check.

use std::f64::consts::PI;

use pretentious_core::exponent::prime_log_coefficients;
use pretentious_core::prime_sums::{weighted_tail_diagnostic_with, PrimeWeight};
use pretentious_core::{
    checkpoint_partial_sums, eval_f, eval_g, eval_h, f_near_one, fit_exponent, identity_residual,
    kronecker_check, prime_sum_s, weighted_tail_diagnostic, zeta, ComplexArgument,
    DerivedFunctionKind, FactorSieve, FitOptions, Identity, MultiplicativeFunction, Truncation,
    Verdict,
};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{CheckLine, VerificationReport};

/// Largest `n` compared against the divisor-sum oracle.
pub const ORACLE_MAX: u64 = 10_000;
/// Allowed relative deviation from the divisor-sum oracle.
pub const ORACLE_TOL: f64 = 1e-12;
/// Most negative `h(p^m)` or `g(p^m)` accepted as nonnegative.
pub const NONNEG_TOL: f64 = 1e-12;
pub const ZETA_SANITY_TOL: f64 = 1e-10;

fn line(name: impl Into<String>, status: Verdict, measured: f64, budget: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        status,
        measured,
        budget,
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// A check whose computation failed is reported as a failure.
fn failed(name: impl Into<String>, budget: f64) -> CheckLine {
    line(name, Verdict::Fail, f64::NAN, budget)
}

/// Runs every check for `func` under `cfg`. Configuration problems are
/// reported before any check runs; computation errors inside a check become
/// failing lines.
pub fn run_verification(
    cfg: &ExperimentConfig,
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
) -> Result<VerificationReport> {
    cfg.validate()?;
    cfg.validate_for_verify()?;
    cfg.check_against(sieve)?;
    if sieve.limit() < cfg.sieve_limit {
        return Err(crate::error::HarnessError::Config(format!(
            "sieve covers {} but sieve.limit is {}",
            sieve.limit(),
            cfg.sieve_limit
        )));
    }

    let mut lines = vec![
        zeta_sanity(),
        nonnegativity(func, sieve, cfg.sieve_limit, false),
    ];
    lines.push(nonnegativity(func, sieve, cfg.sieve_limit, true));
    lines.push(divisor_oracle(func, sieve, cfg.sieve_limit, false));
    lines.push(divisor_oracle(func, sieve, cfg.sieve_limit, true));

    let trunc = Truncation {
        n_terms: cfg.truncation_n,
        primes_to: cfg.euler_p,
        zeta_tol: cfg.zeta_tol,
    };
    for &s in &cfg.s_grid {
        for id in Identity::ALL {
            lines.push(identity_line(cfg, func, sieve, id, s, trunc));
        }
    }

    lines.extend(prime_sum_lines(cfg, func, sieve));
    lines.push(distance_line(func, sieve, cfg.sieve_limit));
    lines.push(weighted_tail_line(func, sieve, cfg));
    lines.extend(exponent_lines(cfg, func, sieve));
    lines.push(near_one_line(cfg, func, sieve));

    Ok(VerificationReport {
        lines,
        config_hash: cfg.config_hash(),
    })
}

fn zeta_sanity() -> CheckLine {
    let eval = |sigma: f64| ComplexArgument::real(sigma).and_then(|s| zeta(s, 1e-12));
    match (eval(2.0), eval(4.0)) {
        (Ok(z2), Ok(z4)) => {
            let err = (z2.value.re - PI * PI / 6.0)
                .abs()
                .max((z4.value.re - PI.powi(4) / 90.0).abs())
                .max(z2.value.im.abs())
                .max(z4.value.im.abs());
            line(
                "zeta_sanity",
                verdict(err <= ZETA_SANITY_TOL),
                err,
                ZETA_SANITY_TOL,
            )
        }
        _ => failed("zeta_sanity", ZETA_SANITY_TOL),
    }
}

/// Minimum of `h` (or `g`) over all prime powers up to `limit`.
fn nonnegativity(
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
    limit: u64,
    g: bool,
) -> CheckLine {
    let name = if g { "g_nonnegative" } else { "h_nonnegative" };
    let Ok(primes) = sieve.primes_up_to(limit) else {
        return failed(name, -NONNEG_TOL);
    };
    let mut min = f64::INFINITY;
    for p in primes {
        let mut q = p;
        loop {
            let v = if g {
                eval_g(func, q, sieve)
            } else {
                eval_h(func, q, sieve)
            };
            match v {
                Ok(v) => min = min.min(v),
                Err(_) => return failed(name, -NONNEG_TOL),
            }
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }
    line(name, verdict(min >= -NONNEG_TOL), min, -NONNEG_TOL)
}

/// `h = f * 1` and `g = f mu^2 * 1` recomputed by summing over divisors.
fn divisor_oracle(
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
    limit: u64,
    g: bool,
) -> CheckLine {
    let name = if g {
        "g_divisor_oracle"
    } else {
        "h_divisor_oracle"
    };
    let top = limit.min(ORACLE_MAX);
    let mut f = vec![0.0; top as usize + 1];
    for n in 1..=top {
        let v = match eval_f(func, n, sieve) {
            Ok(v) => v,
            Err(_) => return failed(name, ORACLE_TOL),
        };
        let squarefree = sieve.is_squarefree(n).unwrap_or(false);
        f[n as usize] = if g && !squarefree { 0.0 } else { v };
    }
    let mut oracle = vec![0.0; top as usize + 1];
    for d in 1..=top {
        for m in (d..=top).step_by(d as usize) {
            oracle[m as usize] += f[d as usize];
        }
    }
    let mut worst = 0.0f64;
    for n in 1..=top {
        let v = if g {
            eval_g(func, n, sieve)
        } else {
            eval_h(func, n, sieve)
        };
        let Ok(v) = v else {
            return failed(name, ORACLE_TOL);
        };
        let o = oracle[n as usize];
        worst = worst.max((v - o).abs() / o.abs().max(1.0));
    }
    line(name, verdict(worst <= ORACLE_TOL), worst, ORACLE_TOL)
}

fn identity_line(
    cfg: &ExperimentConfig,
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
    id: Identity,
    s: ComplexArgument,
    trunc: Truncation,
) -> CheckLine {
    let name = format!("{id}@s={s}");
    let tol = cfg.tolerances.get(&id).copied();
    match identity_residual(id, func, s, trunc, sieve) {
        Ok(r) => {
            let budget = if r.heuristic {
                tol.unwrap_or(f64::NAN)
            } else {
                r.budget
            };
            let status = match r.passes(tol) {
                Some(ok) => verdict(ok),
                None => Verdict::Inconclusive,
            };
            line(name, status, r.residual, budget)
        }
        Err(_) => failed(name, tol.unwrap_or(f64::NAN)),
    }
}

/// Monotonicity of `S(x)` and its growth against the `F_plain` partial
/// sums.
fn prime_sum_lines(
    cfg: &ExperimentConfig,
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
) -> Vec<CheckLine> {
    let trace = match prime_sum_s(func, cfg.sieve_limit, &cfg.schedule(), sieve) {
        Ok(t) => t,
        Err(_) => {
            return vec![
                failed("prime_sum_monotone", 0.0),
                failed("prime_sum_growth", f64::NAN),
            ]
        }
    };
    let scale = trace
        .checkpoints
        .iter()
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max);
    let allowance = 1e-12 * scale.max(1.0);
    let drop = trace
        .checkpoints
        .windows(2)
        .map(|w| w[0].1 - w[1].1)
        .fold(0.0, f64::max);
    let monotone = line(
        "prime_sum_monotone",
        verdict(drop <= allowance),
        drop,
        allowance,
    );

    let growth = if trace.checkpoints.iter().all(|&(_, v)| v.abs() <= allowance) {
        line("prime_sum_growth", Verdict::Pass, 0.0, 0.0)
    } else {
        let s_series = pretentious_core::PartialSumSeries::from_points(
            DerivedFunctionKind::FPlain,
            func.id(),
            trace.checkpoints.clone(),
        );
        let f_series = checkpoint_partial_sums(
            func,
            DerivedFunctionKind::FPlain,
            cfg.sieve_limit,
            &cfg.schedule(),
            sieve,
        );
        let opts = FitOptions {
            window: None,
            epsilon_slack: cfg.epsilon_slack,
        };
        match (
            fit_exponent(&s_series, opts),
            f_series.and_then(|f| fit_exponent(&f, opts)),
        ) {
            (Ok(a_s), Ok(a_f)) => {
                let bound = a_f.alpha_hat + cfg.epsilon_slack;
                line(
                    "prime_sum_growth",
                    verdict(a_s.alpha_hat <= bound),
                    a_s.alpha_hat,
                    bound,
                )
            }
            _ => line(
                "prime_sum_growth",
                Verdict::Inconclusive,
                f64::NAN,
                f64::NAN,
            ),
        }
    };
    vec![monotone, growth]
}

/// `D(f, lambda; x)^2` has dyadic increments `sum (1 + f(p)) / p`.
fn distance_line(func: &dyn MultiplicativeFunction, sieve: &FactorSieve, limit: u64) -> CheckLine {
    let name = "pretentious_distance_to_liouville";
    match weighted_tail_diagnostic_with(func, PrimeWeight::InvPSigma(1.0), limit, sieve) {
        Ok(d) => line(name, d.verdict, d.trace.last_value(), f64::NAN),
        Err(_) => failed(name, f64::NAN),
    }
}

fn weighted_tail_line(
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
    cfg: &ExperimentConfig,
) -> CheckLine {
    let name = format!("weighted_tail_convergence@sigma={}", cfg.diagnostic_sigma);
    match weighted_tail_diagnostic(func, cfg.diagnostic_sigma, cfg.sieve_limit, sieve) {
        Ok(d) => {
            let last = d.increments.last().copied().unwrap_or(f64::NAN);
            line(name, d.verdict, last, f64::NAN)
        }
        Err(_) => failed(name, f64::NAN),
    }
}

/// Growth exponent of the `F_plain` partial sums and the partial-summation
/// check at `sigma = alpha_hat + epsilon`.
fn exponent_lines(
    cfg: &ExperimentConfig,
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
) -> Vec<CheckLine> {
    let opts = FitOptions {
        window: None,
        epsilon_slack: cfg.epsilon_slack,
    };
    let fit = checkpoint_partial_sums(
        func,
        DerivedFunctionKind::FPlain,
        cfg.sieve_limit,
        &cfg.schedule(),
        sieve,
    )
    .and_then(|s| fit_exponent(&s, opts));
    let fit = match fit {
        Ok(f) => f,
        Err(_) => {
            return vec![
                line("exponent_fit_F_plain", Verdict::Inconclusive, f64::NAN, 1.0),
                line(
                    "kronecker_prime_sum",
                    Verdict::Inconclusive,
                    f64::NAN,
                    f64::NAN,
                ),
            ]
        }
    };
    let (lo, hi) = (
        fit.alpha_hat - 2.0 * fit.stderr,
        fit.alpha_hat + 2.0 * fit.stderr,
    );
    let status = if hi < 1.0 {
        Verdict::Pass
    } else if lo >= 1.0 {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let exponent = line("exponent_fit_F_plain", status, fit.alpha_hat, 1.0);

    let sigma = fit.alpha_hat.max(0.0) + cfg.epsilon_slack;
    let name = format!("kronecker_prime_sum@sigma={sigma}");
    let kron = prime_log_coefficients(func, cfg.sieve_limit, sieve)
        .and_then(|a| kronecker_check(&a, sigma, cfg.sieve_limit));
    let kronecker = match kron {
        Ok(r) => line(name, r.verdict, r.late_max, r.early_max),
        Err(_) => line(name, Verdict::Inconclusive, f64::NAN, f64::NAN),
    };
    vec![exponent, kronecker]
}

/// `|F(1 + h)|` should shrink as `h` decreases when `F` vanishes at 1.
/// Finite evidence can only support the trend, never refute it.
fn near_one_line(
    cfg: &ExperimentConfig,
    func: &dyn MultiplicativeFunction,
    sieve: &FactorSieve,
) -> CheckLine {
    let mut hs = cfg.h_grid.clone();
    hs.sort_by(|a, b| b.total_cmp(a));
    match f_near_one(func, &hs, cfg.truncation_n, sieve) {
        Ok(vals) => {
            let mags: Vec<f64> = vals.iter().map(|(_, e)| e.value.norm()).collect();
            let decreasing = mags.windows(2).all(|w| w[1] < w[0]);
            let status = if decreasing {
                Verdict::Pass
            } else {
                Verdict::Inconclusive
            };
            line("F_near_one_trend", status, *mags.last().unwrap(), mags[0])
        }
        Err(_) => line(
            "F_near_one_trend",
            Verdict::Inconclusive,
            f64::NAN,
            f64::NAN,
        ),
    }
}
