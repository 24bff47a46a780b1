//! Completely multiplicative `f: N -> [-1, 1]` defined by its values at
//! primes, together with the induced functions `h = 1 * f`,
//! `g = 1 * (f mu^2)` and `f mu^2`.
//!
//! All four are evaluated from their prime-power closed forms; no divisor
//! sums are formed here.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::par::{for_each_chunk_mut, Execution};
use crate::sieve::{is_prime_trial, FactorSieve};

/// Rule giving `f(p)` for primes without an explicit exception.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseRule {
    /// `f(p) = -1`, i.e. the Liouville function.
    Liouville,
    /// `f(p) = c` with `c` in `[-1, 1]`.
    Constant(f64),
    /// `f(p) = clamp(-1 + c * p^(-a), -1, 1)`, `a > 0`.
    PowerDecay { c: f64, a: f64 },
}

/// Values of `f` at primes: a base rule plus a finite set of overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeFunctionSpec {
    base: BaseRule,
    exceptions: BTreeMap<u64, f64>,
}

/// The four coefficient streams built from `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DerivedFunctionKind {
    /// `f` itself.
    FPlain,
    /// `h = 1 * f`.
    HConv,
    /// `g = 1 * (f mu^2)`.
    GConv,
    /// `f mu^2`.
    FMu2,
}

impl DerivedFunctionKind {
    pub const ALL: [DerivedFunctionKind; 4] = [
        DerivedFunctionKind::FPlain,
        DerivedFunctionKind::HConv,
        DerivedFunctionKind::GConv,
        DerivedFunctionKind::FMu2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivedFunctionKind::FPlain => "F_plain",
            DerivedFunctionKind::HConv => "H_conv",
            DerivedFunctionKind::GConv => "G_conv",
            DerivedFunctionKind::FMu2 => "F_mu2",
        }
    }
}

impl fmt::Display for DerivedFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DerivedFunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F_plain" | "f" | "F" => Ok(DerivedFunctionKind::FPlain),
            "H_conv" | "h" | "H" => Ok(DerivedFunctionKind::HConv),
            "G_conv" | "g" | "G" => Ok(DerivedFunctionKind::GConv),
            "F_mu2" | "fmu2" | "Fmu2" => Ok(DerivedFunctionKind::FMu2),
            other => Err(Error::InvalidArgument(format!(
                "unknown function kind '{other}'"
            ))),
        }
    }
}

fn unit_interval(what: &str, v: f64) -> Result<f64> {
    if v.is_finite() && (-1.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} = {v} is not in [-1, 1]"
        )))
    }
}

impl PrimeFunctionSpec {
    /// Validates the base parameters and every exception (key prime, value
    /// in `[-1, 1]`).
    pub fn new(base: BaseRule, exceptions: BTreeMap<u64, f64>) -> Result<Self> {
        match base {
            BaseRule::Liouville => {}
            BaseRule::Constant(c) => {
                unit_interval("constant value", c)?;
            }
            BaseRule::PowerDecay { c, a } => {
                if !c.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "power_decay c = {c} is not finite"
                    )));
                }
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "power_decay a = {a} must be > 0"
                    )));
                }
            }
        }
        for (&p, &v) in &exceptions {
            if !is_prime_trial(p) {
                return Err(Error::InvalidArgument(format!(
                    "exception key {p} is not prime"
                )));
            }
            unit_interval(&format!("exception value at {p}"), v)?;
        }
        Ok(Self { base, exceptions })
    }

    pub fn liouville() -> Self {
        Self {
            base: BaseRule::Liouville,
            exceptions: BTreeMap::new(),
        }
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(BaseRule::Constant(c), BTreeMap::new())
    }

    pub fn power_decay(c: f64, a: f64) -> Result<Self> {
        Self::new(BaseRule::PowerDecay { c, a }, BTreeMap::new())
    }

    /// Adds (or replaces) an exception.
    pub fn with_exception(mut self, p: u64, value: f64) -> Result<Self> {
        let mut exc = std::mem::take(&mut self.exceptions);
        exc.insert(p, value);
        Self::new(self.base, exc)
    }

    /// Checks that every exception prime lies inside `sieve`.
    pub fn validate_against(&self, sieve: &FactorSieve) -> Result<()> {
        for &p in self.exceptions.keys() {
            if !sieve.is_prime(p) {
                return Err(Error::InvalidArgument(format!(
                    "exception key {p} is not a prime within the sieve limit {}",
                    sieve.limit()
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> BaseRule {
        self.base
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, f64> {
        &self.exceptions
    }

    fn base_value(&self, p: u64) -> f64 {
        match self.base {
            BaseRule::Liouville => -1.0,
            BaseRule::Constant(c) => c,
            BaseRule::PowerDecay { c, a } => (-1.0 + c * (p as f64).powf(-a)).clamp(-1.0, 1.0),
        }
    }

    /// `f(p)`, checked for primality.
    pub fn at_prime(&self, p: u64) -> Result<f64> {
        if !is_prime_trial(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(self.prime_value(p))
    }

    /// Stable textual identifier, e.g. `liouville{2:0.5,3:-0.25}`.
    pub fn id(&self) -> String {
        let mut s = match self.base {
            BaseRule::Liouville => "liouville".to_string(),
            BaseRule::Constant(c) => format!("constant(c={c})"),
            BaseRule::PowerDecay { c, a } => format!("power_decay(c={c},a={a})"),
        };
        if !self.exceptions.is_empty() {
            let parts: Vec<String> = self
                .exceptions
                .iter()
                .map(|(p, v)| format!("{p}:{v}"))
                .collect();
            s.push('{');
            s.push_str(&parts.join(","));
            s.push('}');
        }
        s
    }
}

impl fmt::Display for PrimeFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Below this distance from 1 the closed form loses more than about
/// `1e-12` to cancellation for exponents up to 32.
pub const DIRECT_SUM_RADIUS: f64 = 1e-2;

/// `h(p^m) = 1 + x + ... + x^m` with `x = f(p)`.
///
/// Uses the geometric closed form away from `x = 1` and plain summation
/// within [`DIRECT_SUM_RADIUS`] of it, where the closed form cancels.
#[inline]
pub fn geometric_prime_power(x: f64, m: u32) -> f64 {
    if (1.0 - x).abs() < DIRECT_SUM_RADIUS {
        let mut term = 1.0;
        let mut acc = 1.0;
        for _ in 0..m {
            term *= x;
            acc += term;
        }
        acc
    } else {
        (1.0 - x.powi(m as i32 + 1)) / (1.0 - x)
    }
}

/// A completely multiplicative function given by its prime values.
///
/// The provided methods evaluate `f`, `h`, `g` and `f mu^2` from the prime
/// values; implementors only need [`prime_value`](Self::prime_value).
pub trait MultiplicativeFunction: Sync {
    /// `f(p)` for a prime `p`; callers guarantee primality.
    fn prime_value(&self, p: u64) -> f64;

    /// Identifier used in reports.
    fn id(&self) -> String {
        "custom".to_string()
    }

    /// Upper bound on `|1 + f(p)|` over primes `p > bound`.
    fn sup_one_plus_f_beyond(&self, _bound: u64) -> f64 {
        2.0
    }

    /// Upper bound on `f(p)^2` over primes `p > bound`.
    fn sup_f_squared_beyond(&self, _bound: u64) -> f64 {
        1.0
    }

    /// True when every prime value is in `{-1, 0, 1}`, so that all four
    /// coefficient streams are integer valued.
    fn is_integral(&self) -> bool {
        false
    }

    /// Coefficient of `kind` at `n`, for `1 <= n <= sieve.limit()` (not
    /// range checked).
    fn coefficient(&self, kind: DerivedFunctionKind, n: u64, sieve: &FactorSieve) -> f64 {
        let mut acc = 1.0;
        for (p, a) in sieve.prime_powers(n) {
            let x = self.prime_value(p);
            let factor = match kind {
                DerivedFunctionKind::FPlain => x.powi(a as i32),
                DerivedFunctionKind::HConv => geometric_prime_power(x, a),
                DerivedFunctionKind::GConv => 1.0 + x,
                DerivedFunctionKind::FMu2 => {
                    if a > 1 {
                        return 0.0;
                    }
                    x
                }
            };
            acc *= factor;
            if acc == 0.0 {
                return 0.0;
            }
        }
        acc
    }

    /// Integer coefficient; only meaningful when [`is_integral`](Self::is_integral).
    fn coefficient_int(&self, kind: DerivedFunctionKind, n: u64, sieve: &FactorSieve) -> i64 {
        let mut acc = 1i64;
        for (p, a) in sieve.prime_powers(n) {
            let x = self.prime_value(p) as i64;
            let factor = match kind {
                DerivedFunctionKind::FPlain => x.pow(a),
                DerivedFunctionKind::HConv => match x {
                    1 => a as i64 + 1,
                    0 => 1,
                    _ => (a % 2 == 0) as i64,
                },
                DerivedFunctionKind::GConv => 1 + x,
                DerivedFunctionKind::FMu2 => {
                    if a > 1 {
                        return 0;
                    }
                    x
                }
            };
            acc *= factor;
            if acc == 0 {
                return 0;
            }
        }
        acc
    }
}

impl MultiplicativeFunction for PrimeFunctionSpec {
    fn id(&self) -> String {
        PrimeFunctionSpec::id(self)
    }

    #[inline]
    fn prime_value(&self, p: u64) -> f64 {
        match self.exceptions.get(&p) {
            Some(&v) => v,
            None => self.base_value(p),
        }
    }

    fn sup_one_plus_f_beyond(&self, bound: u64) -> f64 {
        let base = match self.base {
            BaseRule::Liouville => 0.0,
            BaseRule::Constant(c) => 1.0 + c,
            // 1 + f(p) = clamp(c p^-a, 0, 2) is nonincreasing in p.
            BaseRule::PowerDecay { c, a } => (c * (bound.max(1) as f64).powf(-a)).clamp(0.0, 2.0),
        };
        self.exceptions
            .range(bound + 1..)
            .map(|(_, &v)| 1.0 + v)
            .fold(base, f64::max)
    }

    fn sup_f_squared_beyond(&self, bound: u64) -> f64 {
        let base = match self.base {
            BaseRule::Liouville => 1.0,
            BaseRule::Constant(c) => c * c,
            BaseRule::PowerDecay { .. } => 1.0,
        };
        self.exceptions
            .range(bound + 1..)
            .map(|(_, &v)| v * v)
            .fold(base, f64::max)
    }

    fn is_integral(&self) -> bool {
        let unit = |v: f64| v == -1.0 || v == 0.0 || v == 1.0;
        let base_ok = match self.base {
            BaseRule::Liouville => true,
            BaseRule::Constant(c) => unit(c),
            BaseRule::PowerDecay { c, .. } => c == 0.0,
        };
        base_ok && self.exceptions.values().all(|&v| unit(v))
    }
}

/// `f(p)` for a prime `p`.
pub fn f_at_prime(spec: &PrimeFunctionSpec, p: u64) -> Result<f64> {
    spec.at_prime(p)
}

fn eval_kind<F>(func: &F, kind: DerivedFunctionKind, n: u64, sieve: &FactorSieve) -> Result<f64>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("n", n, 1, sieve.limit())?;
    Ok(func.coefficient(kind, n, sieve))
}

/// `f(n) = prod f(p)^a`.
pub fn eval_f<F: MultiplicativeFunction + ?Sized>(
    func: &F,
    n: u64,
    sieve: &FactorSieve,
) -> Result<f64> {
    eval_kind(func, DerivedFunctionKind::FPlain, n, sieve)
}

/// `h(n) = (1 * f)(n)`, nonnegative.
pub fn eval_h<F: MultiplicativeFunction + ?Sized>(
    func: &F,
    n: u64,
    sieve: &FactorSieve,
) -> Result<f64> {
    eval_kind(func, DerivedFunctionKind::HConv, n, sieve)
}

/// `g(n) = (1 * f mu^2)(n)`, with `g(p^m) = 1 + f(p)`.
pub fn eval_g<F: MultiplicativeFunction + ?Sized>(
    func: &F,
    n: u64,
    sieve: &FactorSieve,
) -> Result<f64> {
    eval_kind(func, DerivedFunctionKind::GConv, n, sieve)
}

/// `f(n) mu(n)^2`.
pub fn eval_f_mu2<F: MultiplicativeFunction + ?Sized>(
    func: &F,
    n: u64,
    sieve: &FactorSieve,
) -> Result<f64> {
    eval_kind(func, DerivedFunctionKind::FMu2, n, sieve)
}

const STREAM_CHUNK: usize = 1 << 16;

/// `a(1..=limit)` for the selected kind; element `i` holds `a(i + 1)`.
pub fn coefficient_stream<F>(
    func: &F,
    kind: DerivedFunctionKind,
    limit: u64,
    sieve: &FactorSieve,
) -> Result<Vec<f64>>
where
    F: MultiplicativeFunction + ?Sized,
{
    coefficient_stream_with(func, kind, limit, sieve, Execution::default())
}

pub fn coefficient_stream_with<F>(
    func: &F,
    kind: DerivedFunctionKind,
    limit: u64,
    sieve: &FactorSieve,
    exec: Execution,
) -> Result<Vec<f64>>
where
    F: MultiplicativeFunction + ?Sized,
{
    check_range("stream limit", limit, 0, sieve.limit())?;
    let mut out = vec![0.0; limit as usize];
    for_each_chunk_mut(exec, &mut out, STREAM_CHUNK, |offset, chunk| {
        for (i, slot) in chunk.iter_mut().enumerate() {
            *slot = func.coefficient(kind, (offset + i + 1) as u64, sieve);
        }
    });
    Ok(out)
}
