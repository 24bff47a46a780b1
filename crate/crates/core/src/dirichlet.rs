//! Truncated Dirichlet series and Euler products with explicit tail
//! accounting, and residuals of the identities that link them.
//!
//! Tail bounds for series use `|a(n)| <= d(n)` (or `|a(n)| <= 1` for `f` and
//! `f mu^2`) together with `sum_{n<=x} d(n) <= x (1 + ln x)`; by partial
//! summation, for `sigma > 1`,
//!
//! ```text
//! sum_{n>N} d(n) n^-sigma <= sigma N^(1-sigma) / (sigma-1) * (1 + ln N + 1/(sigma-1)).
//! ```
//!
//! For `sigma <= 1` no effective bound is available and tails are flagged
//! [`TailBound::Heuristic`].

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::multiplicative::{DerivedFunctionKind, MultiplicativeFunction};
use crate::par::Execution;
use crate::sieve::FactorSieve;
use crate::summation::{total, CompensatedSum, ComplexSum};
use crate::zeta::zeta;

/// A point `s = sigma + i t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArgument {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexArgument {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma.is_finite() && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite argument {sigma} + {t}i"
            )));
        }
        Ok(Self { sigma, t })
    }

    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn conj(self) -> Self {
        Self {
            sigma: self.sigma,
            t: -self.t,
        }
    }
}

impl fmt::Display for ComplexArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.sigma, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    Rigorous(f64),
    Heuristic,
}

impl TailBound {
    pub fn rigorous(self) -> Option<f64> {
        match self {
            TailBound::Rigorous(b) => Some(b),
            TailBound::Heuristic => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DirectSum,
    EulerProduct,
    AlternatingAccelerated,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::DirectSum => "direct_sum",
            Method::EulerProduct => "euler_product",
            Method::AlternatingAccelerated => "alternating_accelerated",
        }
    }
}

/// A truncated series or product value with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: Complex64,
    /// Number of terms (series), prime bound (products) or acceleration
    /// depth (zeta).
    pub truncation: u64,
    pub tail: TailBound,
    pub method: Method,
}

/// Per-term relative rounding allowance added to rigorous tails, covering
/// the `exp`, `sin_cos` and product roundings of each term.
pub const ROUNDING: f64 = 8.0 * f64::EPSILON;

/// `sum_{n > N} n^-sigma <= N^(1-sigma) / (sigma - 1)`.
fn unit_tail(n: u64, sigma: f64) -> f64 {
    (n as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

/// `sum_{n > N} d(n) n^-sigma`, see the module docs.
fn divisor_tail(n: u64, sigma: f64) -> f64 {
    let nf = n as f64;
    sigma * nf.powf(1.0 - sigma) / (sigma - 1.0) * (1.0 + nf.ln() + 1.0 / (sigma - 1.0))
}

/// `n^-s`.
#[inline]
fn n_pow_neg_s(n: u64, s: ComplexArgument) -> Complex64 {
    let ln = (n as f64).ln();
    let mag = (-s.sigma * ln).exp();
    let (sin, cos) = (-s.t * ln).sin_cos();
    Complex64::new(mag * cos, mag * sin)
}

/// `ln(1 + w)`, accurate for small `|w|`.
#[inline]
fn ln_1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.re * w.re + w.im * w.im).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// `sum_{n<=N} a(n) n^-s` for the selected coefficient stream.
pub fn dirichlet_sum<F>(
    func: &F,
    kind: DerivedFunctionKind,
    s: ComplexArgument,
    n_terms: u64,
    sieve: &FactorSieve,
) -> Result<SeriesEval>
where
    F: MultiplicativeFunction + ?Sized,
{
    dirichlet_sum_with(func, kind, s, n_terms, sieve, Execution::default())
}

pub fn dirichlet_sum_with<F>(
    func: &F,
    kind: DerivedFunctionKind,
    s: ComplexArgument,
    n_terms: u64,
    sieve: &FactorSieve,
    exec: Execution,
) -> Result<SeriesEval>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("truncation N", n_terms, 1, sieve.limit())?;
    let (sum, abs_sum): (ComplexSum, CompensatedSum) = total(exec, n_terms, |n| {
        let a = func.coefficient(kind, n, sieve);
        if a == 0.0 {
            (Complex64::new(0.0, 0.0), 0.0)
        } else {
            let term = n_pow_neg_s(n, s) * a;
            (term, term.norm())
        }
    });
    let tail = if s.sigma > 1.0 {
        let truncation = match kind {
            DerivedFunctionKind::FPlain | DerivedFunctionKind::FMu2 => unit_tail(n_terms, s.sigma),
            DerivedFunctionKind::HConv | DerivedFunctionKind::GConv => {
                divisor_tail(n_terms, s.sigma)
            }
        };
        TailBound::Rigorous(truncation + ROUNDING * abs_sum.value())
    } else {
        TailBound::Heuristic
    };
    Ok(SeriesEval {
        value: sum.value(),
        truncation: n_terms,
        tail,
        method: Method::DirectSum,
    })
}

/// Product of `factor(p)` over primes `p <= bound`, accumulated as a sum of
/// logarithms.
struct LogProduct {
    value: Complex64,
    /// Allowance for rounding in the log terms and the final `exp`.
    rounding: f64,
}

fn log_product<L>(bound: u64, sieve: &FactorSieve, log_factor: L) -> Result<LogProduct>
where
    L: Fn(u64) -> Complex64 + Sync + Send,
{
    if bound < 2 {
        return Ok(LogProduct {
            value: Complex64::new(1.0, 0.0),
            rounding: 0.0,
        });
    }
    let degenerate = AtomicU64::new(u64::MAX);
    let (sum, abs_sum): (ComplexSum, CompensatedSum) = total(Execution::default(), bound, |n| {
        if !sieve.is_prime(n) {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let l = log_factor(n);
        if !l.re.is_finite() || l.re < -690.0 {
            degenerate.fetch_min(n, Ordering::Relaxed);
        }
        (l, l.norm())
    });
    let bad = degenerate.into_inner();
    if bad != u64::MAX {
        let l = log_factor(bad);
        return Err(Error::DegenerateFactor {
            prime: bad,
            magnitude: l.re.exp(),
        });
    }
    let value = sum.value().exp();
    let abs_sum = abs_sum.value();
    let rounding = if abs_sum == 0.0 {
        0.0
    } else {
        value.norm() * ((ROUNDING * abs_sum).exp_m1() + 2.0 * f64::EPSILON)
    };
    Ok(LogProduct { value, rounding })
}

/// `G_P(s) = prod_{p<=P} (p^s + f(p)) / (p^s - 1)`.
///
/// Rigorous tail for `sigma > 1` and `P^sigma >= 8`: with
/// `B = sup_{p>P} |1 + f(p)|`, every remaining log-factor is at most
/// `1.6 B p^-sigma`, so the log-tail is at most `2 B P^(1-sigma)/(sigma-1)`.
/// When `B = 0` the tail vanishes for every `sigma`.
pub fn euler_product_g<F>(
    func: &F,
    s: ComplexArgument,
    primes_to: u64,
    sieve: &FactorSieve,
) -> Result<SeriesEval>
where
    F: MultiplicativeFunction + ?Sized,
{
    if !(s.sigma > 0.0) {
        return Err(Error::Domain {
            what: "the G Euler product",
            sigma: s.sigma,
            t: s.t,
        });
    }
    check_range("Euler bound P", primes_to, 0, sieve.limit())?;
    let z = s.to_complex();
    let LogProduct { value, rounding } = log_product(primes_to, sieve, |p| {
        let ps = (z * (p as f64).ln()).exp();
        let w = (1.0 + func.prime_value(p)) / (ps - 1.0);
        ln_1p(w)
    })?;

    let sup = func.sup_one_plus_f_beyond(primes_to);
    let tail = if sup == 0.0 {
        TailBound::Rigorous(rounding)
    } else if s.sigma > 1.0 && (primes_to as f64).powf(s.sigma) >= 8.0 {
        let log_tail = 2.0 * sup * unit_tail(primes_to, s.sigma);
        TailBound::Rigorous(value.norm() * log_tail.exp_m1() + rounding)
    } else {
        TailBound::Heuristic
    };
    Ok(SeriesEval {
        value,
        truncation: primes_to,
        tail,
        method: Method::EulerProduct,
    })
}

/// `U_P(s) = prod_{p<=P} (1 - f(p)^2 p^-2s)`, for `sigma > 1/2`.
///
/// Every omitted factor has `|w| <= 2^-2sigma < 1/2`, so its log is at most
/// `2 f(p)^2 p^-2sigma`, giving a rigorous tail on the whole half-plane.
pub fn euler_product_u<F>(
    func: &F,
    s: ComplexArgument,
    primes_to: u64,
    sieve: &FactorSieve,
) -> Result<SeriesEval>
where
    F: MultiplicativeFunction + ?Sized,
{
    if !(s.sigma > 0.5) {
        return Err(Error::Domain {
            what: "the U Euler product",
            sigma: s.sigma,
            t: s.t,
        });
    }
    check_range("Euler bound P", primes_to, 0, sieve.limit())?;
    let z2 = s.to_complex() * 2.0;
    let LogProduct { value, rounding } = log_product(primes_to, sieve, |p| {
        let f = func.prime_value(p);
        let w = -(-z2 * (p as f64).ln()).exp() * (f * f);
        ln_1p(w)
    })?;

    let sup = func.sup_f_squared_beyond(primes_to);
    let tail = if sup == 0.0 {
        0.0
    } else {
        let q = primes_to.max(1) as f64;
        let log_tail = 2.0 * sup * q.powf(1.0 - 2.0 * s.sigma) / (2.0 * s.sigma - 1.0);
        value.norm() * log_tail.exp_m1()
    };
    Ok(SeriesEval {
        value,
        truncation: primes_to,
        tail: TailBound::Rigorous(tail + rounding),
        method: Method::EulerProduct,
    })
}

/// The identities checked numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `H(s) = zeta(s) F(s)`.
    HEqZetaF,
    /// `F_mu2(s) = F(s) U(s)`.
    Fmu2EqFU,
    /// `1/zeta(s) = F_mu2(s) / G(s)`, checked as `F_mu2 zeta = G`.
    RecipZetaEqFmu2OverG,
    /// Euler product of `G` against its Dirichlet series.
    GProductVsSum,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::HEqZetaF,
        Identity::Fmu2EqFU,
        Identity::RecipZetaEqFmu2OverG,
        Identity::GProductVsSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::HEqZetaF => "H_eq_zetaF",
            Identity::Fmu2EqFU => "Fmu2_eq_FU",
            Identity::RecipZetaEqFmu2OverG => "recip_zeta_eq_Fmu2_over_G",
            Identity::GProductVsSum => "G_product_vs_sum",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity '{s}'")))
    }
}

/// `|LHS - RHS|` for one identity at one point, with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub identity: Identity,
    pub point: ComplexArgument,
    pub residual: f64,
    /// Propagated tail bounds of the rigorous constituents plus a
    /// floating-point allowance.
    pub budget: f64,
    /// Some constituent only has a heuristic tail.
    pub heuristic: bool,
}

impl IdentityResidual {
    /// Pass/fail. Heuristic residuals are compared against `tolerance`
    /// and yield `None` when none is supplied.
    pub fn passes(&self, tolerance: Option<f64>) -> Option<bool> {
        if self.heuristic {
            tolerance.map(|tol| self.residual <= tol)
        } else {
            Some(self.residual <= self.budget)
        }
    }
}

/// Truncation parameters for [`identity_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Terms in each Dirichlet series.
    pub n_terms: u64,
    /// Prime bound for Euler products.
    pub primes_to: u64,
    /// Tolerance requested from the zeta evaluator.
    pub zeta_tol: f64,
}

struct Budget {
    bound: f64,
    heuristic: bool,
}

impl Budget {
    fn tail(e: &SeriesEval) -> Self {
        match e.tail {
            TailBound::Rigorous(b) => Budget {
                bound: b,
                heuristic: false,
            },
            TailBound::Heuristic => Budget {
                bound: 0.0,
                heuristic: true,
            },
        }
    }

    /// `|A B - Â B̂| <= |Â| tB + |B̂| tA + tA tB`.
    fn product(a: &SeriesEval, b: &SeriesEval) -> Self {
        let (ta, tb) = (Self::tail(a), Self::tail(b));
        Budget {
            bound: a.value.norm() * tb.bound + b.value.norm() * ta.bound + ta.bound * tb.bound,
            heuristic: ta.heuristic || tb.heuristic,
        }
    }

    fn plus(self, other: Self) -> Self {
        Budget {
            bound: self.bound + other.bound,
            heuristic: self.heuristic || other.heuristic,
        }
    }
}

/// Evaluates both sides of `identity` at `s` and compares them.
pub fn identity_residual<F>(
    identity: Identity,
    func: &F,
    s: ComplexArgument,
    trunc: Truncation,
    sieve: &FactorSieve,
) -> Result<IdentityResidual>
where
    F: MultiplicativeFunction + ?Sized,
{
    let n = trunc.n_terms;
    let series = |kind| dirichlet_sum(func, kind, s, n, sieve);
    let (lhs, rhs, budget) = match identity {
        Identity::HEqZetaF => {
            let h = series(DerivedFunctionKind::HConv)?;
            let f = series(DerivedFunctionKind::FPlain)?;
            let z = zeta(s, trunc.zeta_tol)?;
            (
                h.value,
                z.value * f.value,
                Budget::tail(&h).plus(Budget::product(&z, &f)),
            )
        }
        Identity::Fmu2EqFU => {
            let fm = series(DerivedFunctionKind::FMu2)?;
            let f = series(DerivedFunctionKind::FPlain)?;
            let u = euler_product_u(func, s, trunc.primes_to, sieve)?;
            (
                fm.value,
                f.value * u.value,
                Budget::tail(&fm).plus(Budget::product(&f, &u)),
            )
        }
        Identity::RecipZetaEqFmu2OverG => {
            let fm = series(DerivedFunctionKind::FMu2)?;
            let z = zeta(s, trunc.zeta_tol)?;
            let g = euler_product_g(func, s, trunc.primes_to, sieve)?;
            (
                fm.value * z.value,
                g.value,
                Budget::product(&fm, &z).plus(Budget::tail(&g)),
            )
        }
        Identity::GProductVsSum => {
            let gs = series(DerivedFunctionKind::GConv)?;
            let gp = euler_product_g(func, s, trunc.primes_to, sieve)?;
            (
                gs.value,
                gp.value,
                Budget::tail(&gs).plus(Budget::tail(&gp)),
            )
        }
    };
    let rounding = 64.0 * f64::EPSILON * (lhs.norm() + rhs.norm());
    Ok(IdentityResidual {
        identity,
        point: s,
        residual: (lhs - rhs).norm(),
        budget: budget.bound + rounding,
        heuristic: budget.heuristic,
    })
}

/// `F(1 + h)` for each `h`, the finite-range proxy for the behaviour of `F`
/// at `s = 1`.
pub fn f_near_one<F>(
    func: &F,
    hs: &[f64],
    n_terms: u64,
    sieve: &FactorSieve,
) -> Result<Vec<(f64, SeriesEval)>>
where
    F: MultiplicativeFunction + ?Sized,
{
    hs.iter()
        .map(|&h| {
            if !(h > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "offset h must be positive, got {h}"
                )));
            }
            let s = ComplexArgument::real(1.0 + h)?;
            Ok((
                h,
                dirichlet_sum(func, DerivedFunctionKind::FPlain, s, n_terms, sieve)?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicative::PrimeFunctionSpec;
    use std::f64::consts::PI;

    fn arg(sigma: f64, t: f64) -> ComplexArgument {
        ComplexArgument::new(sigma, t).unwrap()
    }

    #[test]
    fn single_term_series_is_one() {
        let sieve = FactorSieve::build(100).unwrap();
        let spec = PrimeFunctionSpec::power_decay(0.7, 0.3).unwrap();
        for kind in DerivedFunctionKind::ALL {
            let e = dirichlet_sum(&spec, kind, arg(0.7, 3.0), 1, &sieve).unwrap();
            assert_eq!(e.value, Complex64::new(1.0, 0.0));
        }
        assert!(
            dirichlet_sum(&spec, DerivedFunctionKind::FPlain, arg(2.0, 0.0), 0, &sieve).is_err()
        );
        assert!(dirichlet_sum(
            &spec,
            DerivedFunctionKind::FPlain,
            arg(2.0, 0.0),
            101,
            &sieve
        )
        .is_err());
    }

    #[test]
    fn liouville_series_closed_forms() {
        let sieve = FactorSieve::build(1_000_000).unwrap();
        let lam = PrimeFunctionSpec::liouville();
        let s = arg(2.0, 0.0);
        let f = dirichlet_sum(&lam, DerivedFunctionKind::FPlain, s, 1_000_000, &sieve).unwrap();
        let tail = f.tail.rigorous().unwrap();
        assert!((f.value.re - PI * PI / 15.0).abs() <= tail);
        let h = dirichlet_sum(&lam, DerivedFunctionKind::HConv, s, 1_000_000, &sieve).unwrap();
        assert!((h.value.re - PI.powi(4) / 90.0).abs() <= h.tail.rigorous().unwrap());
        let heur = dirichlet_sum(
            &lam,
            DerivedFunctionKind::FPlain,
            arg(0.9, 0.0),
            100,
            &sieve,
        )
        .unwrap();
        assert_eq!(heur.tail, TailBound::Heuristic);
    }

    #[test]
    fn g_product_examples() {
        let sieve = FactorSieve::build(100_000).unwrap();
        let lam = PrimeFunctionSpec::liouville();
        for sigma in [1.5, 2.0, 3.0] {
            let g = euler_product_g(&lam, arg(sigma, 0.0), 100_000, &sieve).unwrap();
            assert_eq!(g.value, Complex64::new(1.0, 0.0));
            assert_eq!(g.tail, TailBound::Rigorous(0.0));
        }
        let spec = lam.with_exception(2, 0.0).unwrap();
        let g = euler_product_g(&spec, arg(2.0, 0.0), 100_000, &sieve).unwrap();
        assert!((g.value.re - 4.0 / 3.0).abs() < 1e-10);
        let empty = euler_product_g(&spec, arg(2.0, 0.0), 0, &sieve).unwrap();
        assert_eq!(empty.value, Complex64::new(1.0, 0.0));
        assert!(euler_product_g(&spec, arg(0.0, 1.0), 10, &sieve).is_err());
    }

    #[test]
    fn u_product_examples() {
        let sieve = FactorSieve::build(1_000_000).unwrap();
        let lam = PrimeFunctionSpec::liouville();
        let u1 = euler_product_u(&lam, arg(1.0, 0.0), 1_000_000, &sieve).unwrap();
        assert!((u1.value.re - 6.0 / (PI * PI)).abs() <= u1.tail.rigorous().unwrap());
        let u2 = euler_product_u(&lam, arg(2.0, 0.0), 1_000_000, &sieve).unwrap();
        assert!((u2.value.re - 90.0 / PI.powi(4)).abs() <= u2.tail.rigorous().unwrap());
        let zero = PrimeFunctionSpec::constant(0.0).unwrap();
        let u = euler_product_u(&zero, arg(0.8, 5.0), 1000, &sieve).unwrap();
        assert_eq!(u.value, Complex64::new(1.0, 0.0));
        assert_eq!(u.tail, TailBound::Rigorous(0.0));
        assert!(euler_product_u(&lam, arg(0.5, 0.0), 10, &sieve).is_err());
    }

    #[test]
    fn zero_spec_fmu2_identity_is_exact() {
        let sieve = FactorSieve::build(10_000).unwrap();
        let zero = PrimeFunctionSpec::constant(0.0).unwrap();
        let trunc = Truncation {
            n_terms: 10_000,
            primes_to: 10_000,
            zeta_tol: 1e-12,
        };
        let r = identity_residual(Identity::Fmu2EqFU, &zero, arg(1.3, 2.0), trunc, &sieve).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.passes(None), Some(true));
    }

    #[test]
    fn heuristic_residual_needs_tolerance() {
        let sieve = FactorSieve::build(10_000).unwrap();
        let lam = PrimeFunctionSpec::liouville();
        let trunc = Truncation {
            n_terms: 10_000,
            primes_to: 10_000,
            zeta_tol: 1e-12,
        };
        let r = identity_residual(Identity::HEqZetaF, &lam, arg(0.9, 0.0), trunc, &sieve).unwrap();
        assert!(r.heuristic);
        assert_eq!(r.passes(None), None);
        assert!(r.passes(Some(1.0)).is_some());
    }

    #[test]
    fn near_one_rejects_nonpositive_offsets() {
        let sieve = FactorSieve::build(100).unwrap();
        assert!(f_near_one(&PrimeFunctionSpec::liouville(), &[0.1, 0.0], 100, &sieve).is_err());
    }
}
