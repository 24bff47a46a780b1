mod common;

use pretentious_core::exponent::{monotone_envelope, prime_log_coefficients};
use pretentious_core::{
    checkpoint_partial_sums, fit_exponent, kronecker_check, DerivedFunctionKind, FactorSieve,
    FitOptions, MultiplicativeFunction, PartialSumSeries, PrimeFunctionSpec, Schedule, Verdict,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn sieve() -> &'static FactorSieve {
    static S: OnceLock<FactorSieve> = OnceLock::new();
    S.get_or_init(|| FactorSieve::build(1_000_000).unwrap())
}

#[test]
fn integer_path_matches_naive_one_pass() {
    let s = sieve();
    let specs = [
        PrimeFunctionSpec::liouville(),
        PrimeFunctionSpec::liouville()
            .with_exception(2, 1.0)
            .unwrap(),
        PrimeFunctionSpec::constant(0.0)
            .unwrap()
            .with_exception(3, -1.0)
            .unwrap(),
    ];
    for spec in &specs {
        for kind in DerivedFunctionKind::ALL {
            let series =
                checkpoint_partial_sums(spec, kind, 1_000_000, &Schedule::default(), s).unwrap();
            assert!(series.exact);
            let mut running = 0i64;
            let mut it = series.checkpoints.iter().peekable();
            for n in 1..=1_000_000u64 {
                running += spec.coefficient(kind, n, s) as i64;
                if let Some(&&(x, v)) = it.peek() {
                    if x == n {
                        assert_eq!(v, running as f64, "{spec} {kind} x = {x}");
                        it.next();
                    }
                }
            }
        }
    }
}

#[test]
fn liouville_square_count_at_one_million() {
    let lam = PrimeFunctionSpec::liouville();
    let series = checkpoint_partial_sums(
        &lam,
        DerivedFunctionKind::HConv,
        1_000_000,
        &Schedule::default(),
        sieve(),
    )
    .unwrap();
    assert_eq!(series.checkpoints.last().unwrap(), &(1_000_000, 1000.0));
}

#[test]
fn liouville_partial_sum_exponent() {
    let s = FactorSieve::build(10_000_000).unwrap();
    let lam = PrimeFunctionSpec::liouville();
    let series = checkpoint_partial_sums(
        &lam,
        DerivedFunctionKind::FPlain,
        10_000_000,
        &Schedule::default(),
        &s,
    )
    .unwrap();
    let fit = fit_exponent(&series, FitOptions::default()).unwrap();
    assert!(
        (0.35..=0.65).contains(&fit.alpha_hat),
        "alpha = {}",
        fit.alpha_hat
    );
}

#[test]
fn kronecker_convergent_designs() {
    // a(n) = n^(sigma - 1 - beta): sum a(n) n^-sigma = zeta(1 + beta) < infinity.
    for &sigma in &[0.3, 0.5, 0.9, 1.3] {
        for &beta in &[0.2, 0.5, 1.0] {
            let a: Vec<f64> = (1..=200_000u64)
                .map(|n| (n as f64).powf(sigma - 1.0 - beta))
                .collect();
            let r = kronecker_check(&a, sigma, 200_000).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "sigma {sigma} beta {beta}");
        }
    }
    // a(n) = n^(sigma - 1) / ln^2(n + 1): sum a(n) n^-sigma ~ sum 1/(n ln^2 n).
    let a: Vec<f64> = (1..=1_000_000u64)
        .map(|n| (n as f64).powf(-0.3) / ((n + 1) as f64).ln().powi(2))
        .collect();
    assert_eq!(
        kronecker_check(&a, 0.7, 1_000_000).unwrap().verdict,
        Verdict::Pass
    );
}

#[test]
fn kronecker_divergent_designs() {
    for &sigma in &[0.3, 0.5, 0.9] {
        // a(n) = n^(sigma - 1 + 0.2): normalized sums grow like x^0.2.
        let a: Vec<f64> = (1..=200_000u64)
            .map(|n| (n as f64).powf(sigma - 0.8))
            .collect();
        assert_eq!(
            kronecker_check(&a, sigma, 200_000).unwrap().verdict,
            Verdict::Fail
        );
    }
    let one = PrimeFunctionSpec::constant(1.0).unwrap();
    let a = prime_log_coefficients(&one, 1_000_000, sieve()).unwrap();
    assert_eq!(
        kronecker_check(&a, 0.9, 1_000_000).unwrap().verdict,
        Verdict::Fail
    );
}

#[test]
fn kronecker_is_deterministic() {
    let spec = PrimeFunctionSpec::power_decay(1.0, 0.3).unwrap();
    let a = prime_log_coefficients(&spec, 500_000, sieve()).unwrap();
    let r1 = kronecker_check(&a, 0.95, 500_000).unwrap();
    let r2 = kronecker_check(&a, 0.95, 500_000).unwrap();
    assert_eq!(r1, r2);
}

proptest! {
    #[test]
    fn fit_is_scale_invariant(alpha in 0.0f64..1.2, c in 1e-3f64..1e3, wobble in 0.0f64..0.5) {
        let xs = Schedule::default().checkpoints(100_000).unwrap();
        let points: Vec<(u64, f64)> = xs
            .iter()
            .map(|&x| (x, (x as f64).powf(alpha) * (1.0 + wobble * (x as f64).ln().sin())))
            .collect();
        let base = PartialSumSeries::from_points(DerivedFunctionKind::FPlain, "s", points.clone());
        let scaled = PartialSumSeries::from_points(
            DerivedFunctionKind::FPlain,
            "s",
            points.iter().map(|&(x, v)| (x, c * v)).collect(),
        );
        let a = fit_exponent(&base, FitOptions::default()).unwrap();
        let b = fit_exponent(&scaled, FitOptions::default()).unwrap();
        prop_assert!((a.alpha_hat - b.alpha_hat).abs() < 1e-9);
    }

    #[test]
    fn envelope_dominates_and_grows(values in proptest::collection::vec(-1e6f64..1e6, 1..200)) {
        let cps: Vec<(u64, f64)> = values.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)).collect();
        let env = monotone_envelope(&cps);
        prop_assert!(env.windows(2).all(|w| w[0].1 <= w[1].1));
        prop_assert!(env.iter().zip(&cps).all(|(e, c)| e.1 >= c.1.abs()));
    }

    #[test]
    fn kronecker_passes_convergent_power_designs(sigma in 0.3f64..1.5, beta in 0.2f64..1.0) {
        let a: Vec<f64> = (1..=100_000u64).map(|n| (n as f64).powf(sigma - 1.0 - beta)).collect();
        prop_assert_eq!(kronecker_check(&a, sigma, 100_000).unwrap().verdict, Verdict::Pass);
    }
}
