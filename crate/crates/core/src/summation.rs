//! Compensated accumulation and checkpointed running sums.

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::{map_blocks, Execution};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another compensated sum into this one.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Running-sum state that can be split across blocks and merged in order.
pub trait Accumulator: Default + Clone + Send {
    type Item;
    fn push(&mut self, item: Self::Item);
    fn merge(&mut self, other: &Self);
}

impl Accumulator for i64 {
    type Item = i64;
    #[inline]
    fn push(&mut self, item: i64) {
        *self += item;
    }
    fn merge(&mut self, other: &Self) {
        *self += *other;
    }
}

impl Accumulator for CompensatedSum {
    type Item = f64;
    #[inline]
    fn push(&mut self, item: f64) {
        self.add(item);
    }
    fn merge(&mut self, other: &Self) {
        CompensatedSum::merge(self, other);
    }
}

impl Accumulator for ComplexSum {
    type Item = Complex64;
    #[inline]
    fn push(&mut self, item: Complex64) {
        self.add(item);
    }
    fn merge(&mut self, other: &Self) {
        ComplexSum::merge(self, other);
    }
}

impl<A: Accumulator, B: Accumulator> Accumulator for (A, B) {
    type Item = (A::Item, B::Item);
    #[inline]
    fn push(&mut self, item: Self::Item) {
        self.0.push(item.0);
        self.1.push(item.1);
    }
    fn merge(&mut self, other: &Self) {
        self.0.merge(&other.0);
        self.1.merge(&other.1);
    }
}

/// Block length used by every checkpointed accumulation.
pub const SUM_BLOCK: u64 = 1 << 16;

/// Computes `sum_{n <= x} term(n)` for every `x` in `checkpoints`
/// (ascending, each in `1..=x_max`), summing over `n in 1..=x_max`.
///
/// The range is cut into fixed blocks of [`SUM_BLOCK`] indices; block
/// partials are merged left to right, so the result does not depend on the
/// execution mode.
pub fn checkpointed<A, F>(exec: Execution, x_max: u64, checkpoints: &[u64], term: F) -> Vec<A>
where
    A: Accumulator,
    F: Fn(u64) -> A::Item + Sync + Send,
{
    debug_assert!(checkpoints.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(checkpoints.last().is_none_or(|&x| x <= x_max));

    let parts = map_blocks(exec, 1..x_max + 1, SUM_BLOCK, |r: Range<u64>| {
        let first = checkpoints.partition_point(|&c| c < r.start);
        let mut idx = first;
        let mut acc = A::default();
        let mut marks = Vec::new();
        for n in r.clone() {
            acc.push(term(n));
            if idx < checkpoints.len() && checkpoints[idx] == n {
                marks.push(acc.clone());
                idx += 1;
            }
        }
        (acc, marks)
    });

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut running = A::default();
    for (total, marks) in parts {
        for m in &marks {
            let mut v = running.clone();
            v.merge(m);
            out.push(v);
        }
        running.merge(&total);
    }
    out
}

/// Total of `term(n)` over `n in 1..=n_max`, blockwise and order-stable.
pub fn total<A, F>(exec: Execution, n_max: u64, term: F) -> A
where
    A: Accumulator,
    F: Fn(u64) -> A::Item + Sync + Send,
{
    let parts = map_blocks(exec, 1..n_max + 1, SUM_BLOCK, |r: Range<u64>| {
        let mut acc = A::default();
        for n in r {
            acc.push(term(n));
        }
        acc
    });
    let mut running = A::default();
    for p in &parts {
        running.merge(p);
    }
    running
}

/// Checkpoint grid for running sums.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `x_k = ceil(x0 * ratio^k)`, deduplicated, plus `x_max` itself.
    Geometric { x0: f64, ratio: f64 },
    /// Explicit checkpoints; values above `x_max` are dropped and `x_max`
    /// is appended.
    Explicit(Vec<u64>),
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Geometric {
            x0: 1.0,
            ratio: 2f64.powf(0.25),
        }
    }
}

impl Schedule {
    pub fn geometric(x0: f64, ratio: f64) -> Self {
        Schedule::Geometric { x0, ratio }
    }

    /// Dyadic grid `1, 2, 4, ...`.
    pub fn dyadic() -> Self {
        Schedule::Geometric {
            x0: 1.0,
            ratio: 2.0,
        }
    }

    /// Ascending, deduplicated checkpoints in `1..=x_max`, always ending at
    /// `x_max`.
    pub fn checkpoints(&self, x_max: u64) -> Result<Vec<u64>> {
        if x_max == 0 {
            return Err(Error::InvalidArgument("x_max must be at least 1".into()));
        }
        let mut out: Vec<u64> = Vec::new();
        match self {
            Schedule::Geometric { x0, ratio } => {
                if !(x0.is_finite() && *x0 >= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "checkpoint origin must be >= 1, got {x0}"
                    )));
                }
                if !(ratio.is_finite() && *ratio > 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "checkpoint ratio must be > 1, got {ratio}"
                    )));
                }
                let mut k = 0i32;
                loop {
                    let x = (x0 * ratio.powi(k)).ceil();
                    if x > x_max as f64 {
                        break;
                    }
                    let x = x as u64;
                    if out.last() != Some(&x) {
                        out.push(x);
                    }
                    k += 1;
                }
            }
            Schedule::Explicit(xs) => {
                let mut xs: Vec<u64> = xs
                    .iter()
                    .copied()
                    .filter(|&x| x >= 1 && x <= x_max)
                    .collect();
                xs.sort_unstable();
                xs.dedup();
                out = xs;
            }
        }
        if out.last() != Some(&x_max) {
            out.push(x_max);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive() {
        // 1 + 1e-16 * 10^6: naive summation loses every small term.
        let mut c = CompensatedSum::new();
        c.add(1.0);
        for _ in 0..1_000_000 {
            c.add(1e-16);
        }
        assert!((c.value() - (1.0 + 1e-10)).abs() < 1e-15);
    }

    #[test]
    fn geometric_schedule() {
        let s = Schedule::default().checkpoints(10).unwrap();
        assert_eq!(s, vec![1, 2, 3, 4, 5, 6, 7, 8, 10]);
        let d = Schedule::dyadic().checkpoints(100).unwrap();
        assert_eq!(d, vec![1, 2, 4, 8, 16, 32, 64, 100]);
        assert!(Schedule::geometric(1.0, 1.0).checkpoints(10).is_err());
    }

    #[test]
    fn explicit_schedule_appends_max() {
        let s = Schedule::Explicit(vec![50, 3, 3, 200, 0])
            .checkpoints(100)
            .unwrap();
        assert_eq!(s, vec![3, 50, 100]);
    }

    #[test]
    fn checkpointed_matches_naive_across_blocks() {
        let x_max = 3 * SUM_BLOCK + 17;
        let cps = Schedule::default().checkpoints(x_max).unwrap();
        let term = |n: u64| {
            if n.is_multiple_of(3) {
                -1i64
            } else {
                (n % 2) as i64
            }
        };
        let got: Vec<i64> = checkpointed(Execution::Parallel, x_max, &cps, term);
        let mut naive = 0i64;
        let mut want = Vec::new();
        let mut it = cps.iter().peekable();
        for n in 1..=x_max {
            naive += term(n);
            if it.peek() == Some(&&n) {
                want.push(naive);
                it.next();
            }
        }
        assert_eq!(got, want);
        let seq: Vec<i64> = checkpointed(Execution::Sequential, x_max, &cps, term);
        assert_eq!(seq, got);
    }
}
