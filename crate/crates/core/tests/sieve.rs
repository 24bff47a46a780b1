mod common;

use common::{eratosthenes, trial_spf};
use pretentious_core::{Execution, FactorSieve};
use proptest::prelude::*;
use std::sync::OnceLock;

const LIMIT: u64 = 1_000_000;

fn sieve() -> &'static FactorSieve {
    static S: OnceLock<FactorSieve> = OnceLock::new();
    S.get_or_init(|| FactorSieve::build(LIMIT).unwrap())
}

#[test]
fn factorizations_reconstruct_every_n() {
    let s = sieve();
    for n in 1..=LIMIT {
        let f = s.factorize(n).unwrap();
        assert_eq!(f.reconstruct(), n);
        assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(f
            .pairs
            .iter()
            .all(|&(p, a)| a >= 1 && s.smallest_factor(p).unwrap() == p));
    }
}

#[test]
fn spf_invariants_against_trial_division() {
    let s = sieve();
    for n in (2..=LIMIT).step_by(97).chain([91, 97, 999_983, 1_000_000]) {
        let p = s.smallest_factor(n).unwrap();
        assert_eq!(p, trial_spf(n), "n = {n}");
        assert_eq!(p == n, s.is_prime(n));
    }
}

#[test]
fn prime_count_matches_eratosthenes() {
    let oracle = eratosthenes(LIMIT as usize);
    let count = oracle.iter().filter(|&&b| b).count() as u64;
    assert_eq!(count, 78_498);
    assert_eq!(sieve().prime_count(LIMIT).unwrap(), count);
    let primes = sieve().primes_up_to(LIMIT).unwrap();
    assert!(primes.iter().all(|&p| oracle[p as usize]));
    assert_eq!(primes.len() as u64, count);
}

#[test]
fn moebius_squared_is_squarefree_indicator() {
    let s = sieve();
    for n in 1..=LIMIT {
        let mu = s.moebius(n).unwrap();
        assert_eq!((mu * mu) as u8 == 1, s.is_squarefree(n).unwrap());
        assert_eq!(
            s.liouville(n).unwrap() == 1,
            s.big_omega(n).unwrap().is_multiple_of(2)
        );
    }
}

#[test]
fn parallel_and_sequential_tables_identical() {
    for limit in [2, 3, 1000, 131_071, 131_072, 131_073, 2_000_003] {
        let a = FactorSieve::build_with(limit, Execution::Sequential).unwrap();
        let b = FactorSieve::build_with(limit, Execution::Parallel).unwrap();
        assert_eq!(a.as_slice(), b.as_slice(), "limit = {limit}");
    }
}

proptest! {
    #[test]
    fn liouville_completely_multiplicative(a in 1u64..=1000, b in 1u64..=1000) {
        let s = sieve();
        prop_assert_eq!(
            s.liouville(a * b).unwrap(),
            s.liouville(a).unwrap() * s.liouville(b).unwrap()
        );
    }
}
