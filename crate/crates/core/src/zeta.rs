//! Riemann zeta for `Re(s) > 0` through the alternating eta series with
//! Chebyshev-weighted acceleration (Borwein's second algorithm).

use num_complex::Complex64;

use crate::dirichlet::{ComplexArgument, Method, SeriesEval, TailBound, ROUNDING};
use crate::error::{Error, Result};
use crate::summation::ComplexSum;

/// Largest acceleration depth; `(3 + sqrt 8)^n` stays finite in `f64` well
/// beyond it.
pub const MAX_DEPTH: usize = 250;

/// `3 + sqrt(8)`, the per-term contraction of the error bound.
const RATE: f64 = 5.828_427_124_746_19;

/// Error bound for depth `n`:
/// `3 (1 + 2|t|) e^{pi |t| / 2} / ((3 + sqrt 8)^n |1 - 2^{1-s}|)`,
/// valid for `Re(s) >= 1/2`.
fn depth_bound(n: usize, t: f64, denom: f64) -> f64 {
    3.0 * (1.0 + 2.0 * t.abs()) * (std::f64::consts::FRAC_PI_2 * t.abs()).exp()
        / (RATE.powi(n as i32) * denom)
}

/// `zeta(s)` to within `tol`.
///
/// The reported tail bound is rigorous for `Re(s) >= 1/2` and flagged
/// heuristic on `0 < Re(s) < 1/2`.
pub fn zeta(s: ComplexArgument, tol: f64) -> Result<SeriesEval> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let ComplexArgument { sigma, t } = s;
    if sigma == 1.0 && t == 0.0 {
        return Err(Error::Pole { sigma, t });
    }
    if !(sigma > 0.0) {
        return Err(Error::Domain {
            what: "zeta",
            sigma,
            t,
        });
    }
    let z = s.to_complex();
    // 1 - 2^{1-s}; vanishes on Re(s) = 1 at t = 2 pi k / ln 2.
    let two_pow = (Complex64::new(1.0, 0.0) - z) * std::f64::consts::LN_2;
    let factor = Complex64::new(1.0, 0.0) - two_pow.exp();
    let denom = factor.norm();
    if denom < 1e-12 {
        return Err(Error::Domain {
            what: "the eta-to-zeta conversion",
            sigma,
            t,
        });
    }

    // Half of the tolerance is left for rounding.
    let mut n = 1;
    while depth_bound(n, t, denom) > 0.5 * tol {
        if n == MAX_DEPTH {
            return Err(Error::Convergence {
                tol,
                terms: MAX_DEPTH,
                achieved: depth_bound(MAX_DEPTH, t, denom),
            });
        }
        n += 1;
    }

    // u_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), d_k = sum_{i<=k} u_i.
    let mut d = Vec::with_capacity(n + 1);
    let mut u = 1.0f64;
    let mut acc = 0.0f64;
    for i in 0..=n {
        acc += u;
        d.push(acc);
        let i = i as f64;
        let nf = n as f64;
        u *= 4.0 * (nf + i) * (nf - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    }
    let dn = d[n];

    let mut sum = ComplexSum::default();
    let mut abs_sum = 0.0;
    for (k, &dk) in d.iter().enumerate().take(n) {
        let weight = dk / dn - 1.0;
        let ln_k = ((k + 1) as f64).ln();
        let term = (-z * ln_k).exp() * weight;
        abs_sum += term.norm();
        sum.add(if k % 2 == 0 { term } else { -term });
    }
    let value = -sum.value() / factor;
    let bound = depth_bound(n, t, denom) + ROUNDING * (abs_sum / denom + value.norm());
    if bound > tol {
        return Err(Error::Convergence {
            tol,
            terms: n,
            achieved: bound,
        });
    }
    Ok(SeriesEval {
        value,
        truncation: n as u64,
        tail: if sigma >= 0.5 {
            TailBound::Rigorous(bound)
        } else {
            TailBound::Heuristic
        },
        method: Method::AlternatingAccelerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn s(sigma: f64, t: f64) -> ComplexArgument {
        ComplexArgument::new(sigma, t).unwrap()
    }

    #[test]
    fn even_values() {
        let z2 = zeta(s(2.0, 0.0), 1e-13).unwrap();
        assert!((z2.value.re - PI * PI / 6.0).abs() < 1e-12);
        assert!(z2.value.im.abs() < 1e-15);
        let z4 = zeta(s(4.0, 0.0), 1e-13).unwrap();
        assert!((z4.value.re - PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn negative_half_region_value() {
        // zeta(1/2) = -1.4603545088095868...
        let z = zeta(s(0.5, 0.0), 1e-13).unwrap();
        assert!((z.value.re + 1.460_354_508_809_586_8).abs() < 1e-11);
    }

    #[test]
    fn errors() {
        assert!(matches!(zeta(s(1.0, 0.0), 1e-10), Err(Error::Pole { .. })));
        assert!(matches!(
            zeta(s(0.0, 3.0), 1e-10),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            zeta(s(-1.0, 0.0), 1e-10),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            zeta(s(0.5, 400.0), 1e-12),
            Err(Error::Convergence { .. })
        ));
        let t0 = 2.0 * PI / std::f64::consts::LN_2;
        assert!(matches!(zeta(s(1.0, t0), 1e-10), Err(Error::Domain { .. })));
    }

    #[test]
    fn tail_flags() {
        let z = zeta(s(0.3, 2.0), 1e-10).unwrap();
        assert_eq!(z.tail, TailBound::Heuristic);
        let z = zeta(s(1.5, 2.0), 1e-10).unwrap();
        assert!(matches!(z.tail, TailBound::Rigorous(b) if b <= 1e-10));
    }
}
