//! Smallest-prime-factor sieve and the classical arithmetic functions built
//! on it.

use crate::error::{check_range, Error, Result};
use crate::par::{for_each_chunk_mut, Execution};

/// Largest supported sieve limit: entries are stored as `u32`.
///
/// Memory is `4 * (limit + 1)` bytes, so `10^9` needs about 4 GB.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

/// Entries per segment, sized to stay resident in L2.
const SEGMENT: usize = 1 << 17;

/// Smallest-prime-factor table for `0..=limit`.
///
/// `spf[n]` is the least prime dividing `n` for `n >= 2`; `spf[1] = 1` is a
/// sentinel that terminates the factorization loop and `spf[0] = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl std::fmt::Debug for FactorSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorSieve")
            .field("limit", &self.limit)
            .finish()
    }
}

/// Canonical factorization: `(prime, exponent)` pairs, ascending in prime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> u64 {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).product()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.pairs.iter().map(|&(_, a)| a).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a == 1)
    }
}

/// Iterator over the `(p, a)` prime powers exactly dividing `n`.
pub struct PrimePowers<'a> {
    spf: &'a [u32],
    n: u64,
}

impl Iterator for PrimePowers<'_> {
    type Item = (u64, u32);

    #[inline]
    fn next(&mut self) -> Option<(u64, u32)> {
        if self.n <= 1 {
            return None;
        }
        let p = self.spf[self.n as usize] as u64;
        let mut a = 0;
        while self.n.is_multiple_of(p) {
            self.n /= p;
            a += 1;
        }
        Some((p, a))
    }
}

/// Plain sieve of Eratosthenes for the base primes of the segmented pass.
fn small_primes(bound: usize) -> Vec<u32> {
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl FactorSieve {
    /// Builds the sieve for `0..=limit` using the default execution mode.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, Execution::default())
    }

    /// Segmented construction. Each segment is marked independently from the
    /// same base primes, so the table is identical for every execution mode.
    pub fn build_with(limit: u64, exec: Execution) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        check_range("sieve limit", limit, 2, MAX_LIMIT)?;
        let len = (limit + 1) as usize;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(len).map_err(|_| Error::Resource {
            what: "smallest-prime-factor table",
            bytes: (len as u64) * 4,
        })?;
        spf.resize(len, 0);

        let base = small_primes(isqrt(limit) as usize);
        for_each_chunk_mut(exec, &mut spf, SEGMENT, |offset, seg| {
            let lo = offset as u64;
            let hi = lo + seg.len() as u64;
            for &p in &base {
                let p = p as u64;
                let sq = p * p;
                if sq >= hi {
                    break;
                }
                let mut m = sq.max(lo.div_ceil(p) * p);
                while m < hi {
                    let slot = &mut seg[(m - lo) as usize];
                    if *slot == 0 {
                        *slot = p as u32;
                    }
                    m += p;
                }
            }
            for (i, slot) in seg.iter_mut().enumerate() {
                if *slot == 0 {
                    let n = lo + i as u64;
                    *slot = if n == 0 { 0 } else { n as u32 };
                }
            }
        });
        Ok(Self { limit, spf })
    }

    /// Rebuilds a sieve from a raw table, checking the table invariants.
    pub fn from_spf(spf: Vec<u32>) -> Result<Self> {
        if spf.len() < 3 || spf[0] != 0 || spf[1] != 1 {
            return Err(Error::InvalidArgument(
                "malformed smallest-prime-factor table".into(),
            ));
        }
        for (n, &p) in spf.iter().enumerate().skip(2) {
            let p = p as usize;
            if p < 2 || n % p != 0 || spf[p] as usize != p || (p != n && p * p > n) {
                return Err(Error::InvalidArgument(format!(
                    "smallest-prime-factor table is inconsistent at n = {n}"
                )));
            }
        }
        Ok(Self {
            limit: spf.len() as u64 - 1,
            spf,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// The raw table, indexed by `n`.
    pub fn as_slice(&self) -> &[u32] {
        &self.spf
    }

    fn check(&self, n: u64) -> Result<()> {
        check_range("n", n, 1, self.limit)
    }

    /// Smallest prime factor of `n` (1 for `n = 1`).
    pub fn smallest_factor(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.spf[n as usize] as u64)
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Prime powers of `n` without range checking; `n` must be in
    /// `1..=limit`.
    #[inline]
    pub(crate) fn prime_powers(&self, n: u64) -> PrimePowers<'_> {
        debug_assert!(n >= 1 && n <= self.limit);
        PrimePowers { spf: &self.spf, n }
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        Ok(Factorization {
            pairs: self.prime_powers(n).collect(),
        })
    }

    /// Ω(n), prime factors with multiplicity.
    pub fn big_omega(&self, n: u64) -> Result<u32> {
        self.check(n)?;
        Ok(self.big_omega_unchecked(n))
    }

    #[inline]
    pub(crate) fn big_omega_unchecked(&self, mut n: u64) -> u32 {
        let mut k = 0;
        while n > 1 {
            n /= self.spf[n as usize] as u64;
            k += 1;
        }
        k
    }

    /// λ(n) = (−1)^Ω(n).
    pub fn liouville(&self, n: u64) -> Result<i8> {
        self.check(n)?;
        Ok(if self.big_omega_unchecked(n).is_multiple_of(2) {
            1
        } else {
            -1
        })
    }

    /// μ(n): zero unless `n` is squarefree, else (−1)^ω(n).
    pub fn moebius(&self, n: u64) -> Result<i8> {
        self.check(n)?;
        Ok(self.moebius_unchecked(n))
    }

    #[inline]
    pub(crate) fn moebius_unchecked(&self, n: u64) -> i8 {
        let mut sign = 1i8;
        for (_, a) in self.prime_powers(n) {
            if a > 1 {
                return 0;
            }
            sign = -sign;
        }
        sign
    }

    pub fn is_squarefree(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(self.moebius_unchecked(n) != 0)
    }

    /// Primes in `[2, x]`, ascending.
    pub fn primes_up_to(&self, x: u64) -> Result<Vec<u64>> {
        check_range("x", x, 0, self.limit)?;
        Ok((2..=x)
            .filter(|&n| self.spf[n as usize] as u64 == n)
            .collect())
    }

    /// π(x).
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        check_range("x", x, 0, self.limit)?;
        Ok((2..=x)
            .filter(|&n| self.spf[n as usize] as u64 == n)
            .count() as u64)
    }
}

/// Primality by trial division; used to validate small inputs that may lie
/// beyond any sieve.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_spf(n: u64) -> u64 {
        (2..=n).find(|d| n.is_multiple_of(*d)).unwrap()
    }

    #[test]
    fn small_table() {
        let s = FactorSieve::build(10).unwrap();
        assert_eq!(&s.as_slice()[1..], &[1, 2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(s.smallest_factor(9).unwrap(), 3);
    }

    #[test]
    fn matches_trial_division() {
        let s = FactorSieve::build(3000).unwrap();
        for n in 2..=3000 {
            assert_eq!(s.smallest_factor(n).unwrap(), trial_spf(n), "n = {n}");
        }
        assert_eq!(s.smallest_factor(97).unwrap(), 97);
        assert_eq!(s.smallest_factor(91).unwrap(), 7);
    }

    #[test]
    fn spans_several_segments() {
        let limit = 3 * SEGMENT as u64 + 1234;
        let s = FactorSieve::build(limit).unwrap();
        for n in (limit - 500)..=limit {
            assert_eq!(s.smallest_factor(n).unwrap(), trial_spf(n));
        }
    }

    #[test]
    fn factorize_examples() {
        let s = FactorSieve::build(1 << 20).unwrap();
        assert_eq!(
            s.factorize(360).unwrap().pairs,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert!(s.factorize(1).unwrap().pairs.is_empty());
        assert_eq!(s.factorize(1 << 20).unwrap().pairs, vec![(2, 20)]);
    }

    #[test]
    fn arithmetic_functions() {
        let s = FactorSieve::build(100).unwrap();
        assert_eq!(s.liouville(12).unwrap(), -1);
        assert_eq!(s.big_omega(12).unwrap(), 3);
        assert_eq!(s.liouville(1).unwrap(), 1);
        assert_eq!(s.moebius(1).unwrap(), 1);
        assert_eq!(s.moebius(4).unwrap(), 0);
        assert_eq!(s.moebius(30).unwrap(), -1);
        assert!(!s.is_squarefree(12).unwrap());
        assert!(s.is_squarefree(1).unwrap());
    }

    #[test]
    fn primes_enumeration() {
        let s = FactorSieve::build(100).unwrap();
        assert_eq!(s.primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(s.primes_up_to(2).unwrap(), vec![2]);
        assert_eq!(s.prime_count(100).unwrap(), 25);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            FactorSieve::build(1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            FactorSieve::build(MAX_LIMIT + 1),
            Err(Error::OutOfRange { .. })
        ));
        let s = FactorSieve::build(50).unwrap();
        assert!(s.factorize(0).is_err());
        assert!(s.factorize(51).is_err());
        assert!(s.liouville(51).is_err());
        assert!(s.primes_up_to(51).is_err());
    }

    #[test]
    fn from_spf_validates() {
        let s = FactorSieve::build(1000).unwrap();
        let back = FactorSieve::from_spf(s.as_slice().to_vec()).unwrap();
        assert_eq!(back, s);
        let mut bad = s.as_slice().to_vec();
        bad[91] = 13;
        assert!(FactorSieve::from_spf(bad).is_err());
    }

    #[test]
    fn trial_primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
