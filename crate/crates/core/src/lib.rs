//! Exact Bernoulli numbers and closed-form sums of powers.
//!
//! The crate computes `B_n` from the classical recurrence
//! `B_n = -1/(n+1) * sum_{i<n} C(n+1, i) B_i` over exact rationals, builds the
//! polynomial `P(x) = sum_{i=0}^{k} C(k+1, i) B_i x^(k+1-i)` and from it the
//! closed form of `S_n^k = 1^k + 2^k + ... + n^k`, and answers divisibility
//! questions about those polynomials by exact division.
//!
//! The polynomial layer is generic over the coefficient field (see
//! [`Scalar`]); everything that must be exact is pinned to
//! [`ExactRational`] through the aliases below.

pub mod analysis;
pub mod bernoulli;
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod faulhaber;
pub mod poly;
pub mod render;
pub mod scalar;

pub use analysis::{
    check_problem2, check_problem3, check_problem4, factored_form, poly_divmod, value_divisibility,
    DivisibilityReport, FactoredForm,
};
pub use bernoulli::{bernoulli, bernoulli_range, recurrence_residual, BernoulliCache};
pub use error::{Error, Result};
pub use exact_arith::{binomial, ExactRational};
pub use faulhaber::{
    faulhaber_poly, p_poly, poly_compose_shift, poly_eval, power_sum_closed, power_sum_naive,
    telescope_residual, PowerSumVerification,
};
pub use num_bigint::BigInt;
pub use poly::Polynomial;
pub use scalar::Scalar;

/// Dense polynomial with exact rational coefficients.
pub type RationalPolynomial = Polynomial<ExactRational>;

/// Dense polynomial with `f64` coefficients, for quick approximate work.
pub type FloatPolynomial = Polynomial<f64>;

/// Dense polynomial with `f32` coefficients.
pub type Float32Polynomial = Polynomial<f32>;
