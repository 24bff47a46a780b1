//! Completely multiplicative functions with values in `[-1, 1]`, their
//! Dirichlet series and Euler products, and the prime sums that govern
//! them.
//!
//! The crate is organized bottom-up:
//!
//! * [`sieve`]: smallest-prime-factor table, factorization, λ, μ, Ω.
//! * [`multiplicative`]: `f` from its prime values and the induced
//!   `h = 1 * f`, `g = 1 * (f mu^2)` and `f mu^2`.
//! * [`zeta`] and [`dirichlet`]: series, products, tail bounds and identity
//!   residuals.
//! * [`prime_sums`]: `sum_{p<=x} (1 + f(p)) log p`, weighted variants and
//!   pretentious distance.
//! * [`exponent`]: partial sums, growth-exponent fits and the Kronecker
//!   check.
//!
//! Bulk kernels are block-parallel through rayon when the `parallel`
//! feature is on (the default) and fall back to a sequential loop
//! otherwise; results are bit-identical either way.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirichlet;
pub mod error;
pub mod exponent;
pub mod multiplicative;
pub mod par;
pub mod prime_sums;
pub mod sieve;
pub mod summation;
pub mod verdict;
pub mod zeta;

pub use dirichlet::{
    dirichlet_sum, euler_product_g, euler_product_u, f_near_one, identity_residual,
    ComplexArgument, Identity, IdentityResidual, Method, SeriesEval, TailBound, Truncation,
};
pub use error::{Error, Result};
pub use exponent::{
    checkpoint_partial_sums, fit_exponent, kronecker_check, ExponentFit, FitOptions,
    KroneckerReport, PartialSumSeries,
};
pub use multiplicative::{
    coefficient_stream, eval_f, eval_f_mu2, eval_g, eval_h, f_at_prime, BaseRule,
    DerivedFunctionKind, MultiplicativeFunction, PrimeFunctionSpec,
};
pub use par::Execution;
pub use prime_sums::{
    pretentious_distance_sq, prime_sum_s, weighted_tail_diagnostic, PrimeSumTrace, PrimeWeight,
};
pub use sieve::{FactorSieve, Factorization};
pub use summation::Schedule;
pub use verdict::Verdict;
pub use zeta::zeta;
