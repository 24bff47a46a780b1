#![allow(dead_code)]

use std::collections::BTreeMap;

use pretentious_core::{BaseRule, PrimeFunctionSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn unit_value(rng: &mut StdRng) -> f64 {
    match rng.gen_range(0..6) {
        0 => -1.0,
        1 => 1.0,
        2 => 0.0,
        _ => rng.gen_range(-1.0..=1.0),
    }
}

pub fn random_spec(rng: &mut StdRng) -> PrimeFunctionSpec {
    let base = match rng.gen_range(0..3) {
        0 => BaseRule::Liouville,
        1 => BaseRule::Constant(unit_value(rng)),
        _ => BaseRule::PowerDecay {
            c: rng.gen_range(-1.0..3.0),
            a: rng.gen_range(0.1..2.0),
        },
    };
    let mut exceptions = BTreeMap::new();
    for _ in 0..rng.gen_range(0..5) {
        let p = SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())];
        exceptions.insert(p, unit_value(rng));
    }
    PrimeFunctionSpec::new(base, exceptions).unwrap()
}

pub fn random_specs(seed: u64, count: usize) -> Vec<PrimeFunctionSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng)).collect()
}

/// Finite perturbations of the Liouville function used across tests.
pub fn liouville_perturbations() -> Vec<PrimeFunctionSpec> {
    let lam = PrimeFunctionSpec::liouville();
    vec![
        lam.clone()
            .with_exception(2, 0.5)
            .unwrap()
            .with_exception(3, -0.25)
            .unwrap(),
        lam.clone().with_exception(2, 1.0).unwrap(),
        lam.with_exception(5, 0.0)
            .unwrap()
            .with_exception(7, 0.3)
            .unwrap()
            .with_exception(11, -0.9)
            .unwrap(),
    ]
}

/// Smallest prime factor by trial division.
pub fn trial_spf(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// Boolean sieve of Eratosthenes, independent of the library sieve.
pub fn eratosthenes(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if is_prime[i] {
            for j in (i * i..=limit).step_by(i) {
                is_prime[j] = false;
            }
        }
        i += 1;
    }
    is_prime
}
