//! Divisibility of the power-sum polynomials and their structural factors.
//!
//! Divisibility here means exact polynomial division over the rationals.
//! Divisibility of the integer values is a different (and generally false)
//! statement: `S_3^2 = 14` is not a multiple of `3 * 4`. It is available
//! separately through [`value_divisibility`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact_arith::{gcd_all, ExactRational};
use crate::faulhaber::{faulhaber_poly, integer_form, power_sum_closed, PolynomialJson};
use crate::RationalPolynomial;

/// Outcome of dividing `S^k(x)` by a fixed divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    /// Exponent of the power sum that was divided.
    pub k: u32,
    pub divisor: RationalPolynomial,
    pub divides: bool,
    /// Meaningful only when `divides`.
    pub quotient: RationalPolynomial,
    pub remainder: RationalPolynomial,
}

/// JSON shape of a [`DivisibilityReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReportJson {
    pub k: u32,
    pub divisor: PolynomialJson,
    pub divides: bool,
    pub quotient: PolynomialJson,
    pub remainder: PolynomialJson,
}

impl DivisibilityReport {
    pub fn to_json(&self) -> DivisibilityReportJson {
        DivisibilityReportJson {
            k: self.k,
            divisor: PolynomialJson::from_poly(&self.divisor, None),
            divides: self.divides,
            quotient: PolynomialJson::from_poly(&self.quotient, None),
            remainder: PolynomialJson::from_poly(&self.remainder, None),
        }
    }
}

/// `S^k = scalar * prod(factor^multiplicity)`.
///
/// Factors are primitive integer polynomials with positive leading
/// coefficient, listed as `x`, `x+1`, `2x+1`, then the cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    pub k: u32,
    pub scalar: ExactRational,
    pub factors: Vec<(RationalPolynomial, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub factor: PolynomialJson,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredFormJson {
    pub k: u32,
    pub scalar: ExactRational,
    pub factors: Vec<FactorJson>,
}

impl FactoredForm {
    /// Multiplies everything back out.
    pub fn expand(&self) -> RationalPolynomial {
        self.factors.iter().fold(
            RationalPolynomial::constant(self.scalar.clone()),
            |acc, (f, m)| &acc * &f.pow(*m),
        )
    }

    pub fn to_json(&self) -> FactoredFormJson {
        FactoredFormJson {
            k: self.k,
            scalar: self.scalar.clone(),
            factors: self
                .factors
                .iter()
                .map(|(f, m)| FactorJson {
                    factor: PolynomialJson::from_poly(f, None),
                    multiplicity: *m,
                })
                .collect(),
        }
    }
}

/// Quotient and remainder of exact division over the rationals.
pub fn poly_divmod(
    dividend: &RationalPolynomial,
    divisor: &RationalPolynomial,
) -> Result<(RationalPolynomial, RationalPolynomial)> {
    dividend.div_rem(divisor).ok_or(Error::DivisionByZero)
}

fn q(n: i64) -> ExactRational {
    ExactRational::from(n)
}

/// `x(x+1) = x^2 + x`.
pub fn divisor_problem2() -> RationalPolynomial {
    RationalPolynomial::from_coeffs(vec![q(0), q(1), q(1)])
}

/// `x^2(x+1)^2 = x^4 + 2x^3 + x^2`.
pub fn divisor_problem3() -> RationalPolynomial {
    divisor_problem2().pow(2)
}

/// `x(x+1)(2x+1) = 2x^3 + 3x^2 + x`.
pub fn divisor_problem4() -> RationalPolynomial {
    &divisor_problem2() * &RationalPolynomial::linear(q(2), q(1))
}

fn report(
    k: u32,
    divisor: RationalPolynomial,
    cache: &BernoulliCache,
) -> Result<DivisibilityReport> {
    let (quotient, remainder) = poly_divmod(&faulhaber_poly(k, cache), &divisor)?;
    Ok(DivisibilityReport {
        k,
        divisor,
        divides: remainder.is_zero(),
        quotient,
        remainder,
    })
}

/// Is `S^k` divisible by `x(x+1)`? Requires `k >= 1`.
pub fn check_problem2(k: u32, cache: &BernoulliCache) -> Result<DivisibilityReport> {
    if k == 0 {
        return Err(Error::domain(
            "k must be >= 1: S_n^0 = n is not divisible by n(n+1)",
        ));
    }
    report(k, divisor_problem2(), cache)
}

/// Is `S^(2k+1)` divisible by `x^2(x+1)^2`? Requires `k >= 1`.
pub fn check_problem3(k: u32, cache: &BernoulliCache) -> Result<DivisibilityReport> {
    if k == 0 {
        return Err(Error::domain(
            "k must be >= 1: S_n^1 = n(n+1)/2 is not divisible by n^2(n+1)^2",
        ));
    }
    report(2 * k + 1, divisor_problem3(), cache)
}

/// Is `S^(2k)` divisible by `x(x+1)(2x+1)`? Requires `k >= 1`.
pub fn check_problem4(k: u32, cache: &BernoulliCache) -> Result<DivisibilityReport> {
    if k == 0 {
        return Err(Error::domain(
            "k must be >= 1: S_n^0 = n is not divisible by n(n+1)(2n+1)",
        ));
    }
    report(2 * k, divisor_problem4(), cache)
}

/// Does the integer `modulus(n)` divide the integer `S_n^k`?
///
/// `modulus(n)` must be a nonzero integer.
pub fn value_divisibility(
    n: &BigInt,
    k: u32,
    modulus: &RationalPolynomial,
    cache: &BernoulliCache,
) -> Result<bool> {
    if !n.is_positive() {
        return Err(Error::domain(format!("n must be >= 1, got {n}")));
    }
    let m = modulus.eval(&ExactRational::from(n.clone()));
    let m = m
        .to_integer()
        .ok_or_else(|| Error::domain(format!("modulus at n = {n} is {m}, not an integer")))?;
    if m.is_zero() {
        return Err(Error::domain(format!("modulus vanishes at n = {n}")));
    }
    let s = power_sum_closed(n, k, cache)?;
    Ok(s.is_multiple_of(&m))
}

/// Pulls the rational content and the factors `x`, `x+1`, `2x+1` out of `S^k`.
///
/// The cofactor left over is primitive; it is not factored further.
pub fn factored_form(k: u32, cache: &BernoulliCache) -> FactoredForm {
    let poly = faulhaber_poly(k, cache);
    let (den, ints) = integer_form(&poly);
    let mut content = gcd_all(&ints);
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    let scalar = ExactRational::new(content.clone(), den).expect("lcm is positive");
    let mut rest = RationalPolynomial::from_coeffs(
        ints.iter()
            .map(|c| ExactRational::from(c / &content))
            .collect(),
    );

    let candidates = [
        RationalPolynomial::x(),
        RationalPolynomial::linear(q(1), q(1)),
        RationalPolynomial::linear(q(2), q(1)),
    ];
    let mut factors = Vec::new();
    for f in candidates {
        let mut multiplicity = 0;
        while rest.degree().unwrap_or(0) >= 1 {
            let (quot, rem) = rest.div_rem(&f).expect("candidate is nonzero");
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            multiplicity += 1;
        }
        if multiplicity > 0 {
            factors.push((f, multiplicity));
        }
    }
    if rest != RationalPolynomial::one() {
        factors.push((rest, 1));
    }
    FactoredForm { k, scalar, factors }
}

/// Primitive with positive leading coefficient.
pub fn is_primitive(p: &RationalPolynomial) -> bool {
    p.coeffs().iter().all(ExactRational::is_integer)
        && p.leading_coeff()
            .is_some_and(|c| !c.is_negative() && !c.is_zero())
        && gcd_all(p.coeffs().iter().map(ExactRational::numer)).is_one()
}
