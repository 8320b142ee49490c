//! Closed-form power sums `S_n^k = 1^k + 2^k + ... + n^k`.
//!
//! Everything is built from one auxiliary polynomial
//! `P(x) = sum_{i=0}^{k} C(k+1, i) B_i x^(k+1-i)`, which satisfies
//! `P(x+1) - P(x) = (k+1) x^k` and `P(0) = 0`. Telescoping gives
//! `sum_{i=0}^{n-1} i^k = P(n)/(k+1)`, hence two equivalent closed forms:
//!
//! * `S_n^k = P(n)/(k+1) + n^k`
//! * `S_n^k = P(n+1)/(k+1)`
//!
//! Both count the `i = 0` term, which is `0^0 = 1` when `k = 0`; the
//! polynomial returned by [`faulhaber_poly`] and the value returned by
//! [`power_sum_closed`] subtract it so that `S_n^0 = n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact_arith::{binomial_row, lcm_all, ExactRational};
use crate::RationalPolynomial;

/// Closed form and brute-force value of `S_n^k` for one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumVerification {
    #[serde(with = "bigint_text")]
    pub n: BigInt,
    pub k: u32,
    #[serde(with = "bigint_text")]
    pub closed_value: BigInt,
    #[serde(with = "bigint_text")]
    pub oracle_value: BigInt,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl PowerSumVerification {
    pub fn new(n: BigInt, k: u32, closed_value: BigInt, oracle_value: BigInt) -> Self {
        let matches = closed_value == oracle_value;
        PowerSumVerification {
            n,
            k,
            closed_value,
            oracle_value,
            matches,
        }
    }
}

/// `P(x)` for exponent `k`: degree `k+1`, no constant term.
pub fn p_poly(k: u32, cache: &BernoulliCache) -> RationalPolynomial {
    let bernoulli = cache.range(k as usize);
    let row = binomial_row(u64::from(k) + 1);
    let top = k as usize + 1;
    let mut coeffs = vec![ExactRational::zero(); top + 1];
    for (i, (b, c)) in bernoulli.iter().zip(row).enumerate() {
        coeffs[top - i] = ExactRational::from(c) * b;
    }
    RationalPolynomial::from_coeffs(coeffs)
}

fn inv_k_plus_one(k: u32) -> ExactRational {
    ExactRational::new(1, u64::from(k) + 1).expect("k + 1 > 0")
}

/// `1` when `k = 0`, else `0`: the `0^k` term counted by both raw forms.
fn zero_power(k: u32) -> ExactRational {
    if k == 0 {
        ExactRational::one()
    } else {
        ExactRational::zero()
    }
}

/// `P(x)/(k+1) + x^k`, uncorrected.
pub fn theorem_form(k: u32, cache: &BernoulliCache) -> RationalPolynomial {
    let p = p_poly(k, cache);
    &p.scale(&inv_k_plus_one(k)) + &RationalPolynomial::monomial(ExactRational::one(), k as usize)
}

/// `P(x+1)/(k+1)`, uncorrected.
pub fn note_form(k: u32, cache: &BernoulliCache) -> RationalPolynomial {
    p_poly(k, cache)
        .compose_shift(&ExactRational::one())
        .scale(&inv_k_plus_one(k))
}

/// The polynomial `S^k(x)` of degree `k+1` with `S^k(n) = 1^k + ... + n^k`.
pub fn faulhaber_poly(k: u32, cache: &BernoulliCache) -> RationalPolynomial {
    &theorem_form(k, cache) - &RationalPolynomial::constant(zero_power(k))
}

pub fn poly_eval(p: &RationalPolynomial, x: &BigInt) -> ExactRational {
    p.eval(&ExactRational::from(x.clone()))
}

/// `p(x + c)`.
pub fn poly_compose_shift(p: &RationalPolynomial, c: &ExactRational) -> RationalPolynomial {
    p.compose_shift(c)
}

/// `P(x+1) - P(x) - (k+1) x^k`; the zero polynomial for every `k`.
pub fn telescope_residual(k: u32, cache: &BernoulliCache) -> RationalPolynomial {
    let p = p_poly(k, cache);
    let shifted = p.compose_shift(&ExactRational::one());
    let target = RationalPolynomial::monomial(ExactRational::from(i64::from(k) + 1), k as usize);
    &(&shifted - &p) - &target
}

fn require_nonnegative(n: &BigInt) -> Result<()> {
    if n.is_negative() {
        return Err(Error::domain(format!("n must be nonnegative, got {n}")));
    }
    Ok(())
}

/// `S_n^k` from `P(n+1)/(k+1)`.
///
/// A non-integral result means the arithmetic is broken and is reported as
/// [`Error::Invariant`].
pub fn power_sum_closed(n: &BigInt, k: u32, cache: &BernoulliCache) -> Result<BigInt> {
    require_nonnegative(n)?;
    closed_with(&p_poly(k, cache), n, k)
}

/// [`power_sum_closed`] with `P` already built.
pub(crate) fn closed_with(p: &RationalPolynomial, n: &BigInt, k: u32) -> Result<BigInt> {
    let at = poly_eval(p, &(n + 1u32));
    let value = at * inv_k_plus_one(k) - zero_power(k);
    value.to_integer().ok_or_else(|| {
        Error::Invariant(format!(
            "closed form of S_{n}^{k} is {value}, not an integer"
        ))
    })
}

/// `S_n^k` by literal summation.
pub fn power_sum_naive(n: &BigInt, k: u32) -> Result<BigInt> {
    require_nonnegative(n)?;
    let n = n
        .to_u64()
        .ok_or_else(|| Error::domain(format!("n = {n} is too large to sum term by term")))?;
    let mut total = BigUint::zero();
    let mut small: u128 = 0;
    for i in 1..=n {
        match u128::from(i).checked_pow(k) {
            Some(term) => match small.checked_add(term) {
                Some(s) => small = s,
                None => {
                    total += small;
                    small = term;
                }
            },
            None => total += BigUint::from(i).pow(k),
        }
    }
    total += small;
    Ok(BigInt::from(total))
}

/// Closed form against brute force on the grid `0..=max_n` x `0..=max_k`.
///
/// Rows are ordered by `k`, then `n`. The comparisons run in parallel but the
/// result is the same as a sequential sweep.
pub fn verify_power_sums(
    max_n: u64,
    max_k: u32,
    cache: &BernoulliCache,
) -> Result<Vec<PowerSumVerification>> {
    cache.ensure(max_k as usize);
    let polys: Vec<RationalPolynomial> = (0..=max_k).map(|k| p_poly(k, cache)).collect();
    let grid: Vec<(u32, u64)> = (0..=max_k)
        .flat_map(|k| (0..=max_n).map(move |n| (k, n)))
        .collect();
    grid.into_par_iter()
        .map(|(k, n)| {
            let n = BigInt::from(n);
            let closed = closed_with(&polys[k as usize], &n, k)?;
            let oracle = power_sum_naive(&n, k)?;
            Ok(PowerSumVerification::new(n, k, closed, oracle))
        })
        .collect()
}

/// Wire form of a polynomial: `(1/denominator) * sum coeffs[j] x^(deg-j)`
/// with integer `coeffs`, highest power first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    pub denominator: String,
    pub coeffs: Vec<String>,
}

impl PolynomialJson {
    pub fn from_poly(p: &RationalPolynomial, k: Option<u32>) -> Self {
        let (denominator, ints) = integer_form(p);
        PolynomialJson {
            k,
            denominator: denominator.to_string(),
            coeffs: ints.iter().rev().map(BigInt::to_string).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<RationalPolynomial> {
        let parse = |s: &str| {
            s.parse::<BigInt>().map_err(|_| Error::Parse {
                what: "integer",
                input: s.to_owned(),
            })
        };
        let d = parse(&self.denominator)?;
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .map(|c| ExactRational::new(parse(c)?, d.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalPolynomial::from_coeffs(coeffs))
    }
}

/// `(d, c)` with `p = (1/d) * sum c_i x^i`, `d` the lcm of the coefficient
/// denominators and `c` ascending.
pub fn integer_form(p: &RationalPolynomial) -> (BigInt, Vec<BigInt>) {
    let d = lcm_all(p.coeffs().iter().map(ExactRational::denom));
    let ints = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&d / c.denom()))
        .collect();
    (d, ints)
}

pub(crate) mod bigint_text {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn qp(c: &[&str]) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(c.iter().map(|s| q(s)).collect())
    }

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn p_poly_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(p_poly(0, &cache), qp(&["0", "1"]));
        assert_eq!(p_poly(1, &cache), qp(&["0", "-1", "1"]));
        assert_eq!(p_poly(3, &cache), qp(&["0", "0", "1", "-2", "1"]));
    }

    #[test]
    fn faulhaber_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(faulhaber_poly(0, &cache), qp(&["0", "1"]));
        assert_eq!(faulhaber_poly(1, &cache), qp(&["0", "1/2", "1/2"]));
        assert_eq!(faulhaber_poly(2, &cache), qp(&["0", "1/6", "1/2", "1/3"]));
        let s10 = faulhaber_poly(10, &cache);
        let expected = qp(&[
            "0", "5", "0", "-33", "0", "66", "0", "-66", "0", "55", "33", "6",
        ])
        .scale(&q("1/66"));
        assert_eq!(s10, expected);
    }

    #[test]
    fn raw_forms_count_zero_to_the_zero() {
        let cache = BernoulliCache::new();
        assert_eq!(theorem_form(0, &cache), qp(&["1", "1"]));
        assert_eq!(note_form(0, &cache), qp(&["1", "1"]));
    }

    #[test]
    fn eval_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(poly_eval(&qp(&["0", "-1", "1"]), &big(5)), q("20"));
        assert_eq!(poly_eval(&RationalPolynomial::zero(), &big(9)), q("0"));
        assert_eq!(poly_eval(&faulhaber_poly(2, &cache), &big(3)), q("14"));
    }

    #[test]
    fn closed_and_naive_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(power_sum_closed(&big(10), 1, &cache).unwrap(), big(55));
        assert_eq!(power_sum_closed(&big(4), 3, &cache).unwrap(), big(100));
        assert_eq!(power_sum_closed(&big(0), 7, &cache).unwrap(), big(0));
        assert_eq!(power_sum_closed(&big(0), 0, &cache).unwrap(), big(0));
        assert_eq!(power_sum_closed(&big(10), 2, &cache).unwrap(), big(385));
        assert_eq!(power_sum_naive(&big(3), 2).unwrap(), big(14));
        assert_eq!(power_sum_naive(&big(1), 0).unwrap(), big(1));
        assert_eq!(power_sum_naive(&big(2), 24).unwrap(), big(16_777_217));
        assert_eq!(power_sum_naive(&big(0), 5).unwrap(), big(0));
    }

    #[test]
    fn naive_handles_terms_beyond_u128() {
        // 2^130 does not fit in u128
        let expected = BigInt::one() + (BigInt::one() << 130usize);
        assert_eq!(power_sum_naive(&big(2), 130).unwrap(), expected);
    }

    #[test]
    fn negative_n_is_rejected() {
        let cache = BernoulliCache::new();
        let minus = BigInt::from(-1);
        assert!(matches!(
            power_sum_closed(&minus, 2, &cache),
            Err(Error::Domain(_))
        ));
        assert!(matches!(power_sum_naive(&minus, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn telescope_examples() {
        let cache = BernoulliCache::new();
        for k in [0, 3, 20] {
            assert!(telescope_residual(k, &cache).is_zero(), "k = {k}");
        }
    }

    #[test]
    fn json_form() {
        let cache = BernoulliCache::new();
        let j = PolynomialJson::from_poly(&faulhaber_poly(2, &cache), Some(2));
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"k":2,"denominator":"6","coeffs":["2","3","1","0"]}"#
        );
        assert_eq!(j.to_poly().unwrap(), faulhaber_poly(2, &cache));
        let z = PolynomialJson::from_poly(&RationalPolynomial::zero(), None);
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            r#"{"denominator":"1","coeffs":[]}"#
        );
    }

    #[test]
    fn small_grid_verifies() {
        let cache = BernoulliCache::new();
        let rows = verify_power_sums(20, 6, &cache).unwrap();
        assert_eq!(rows.len(), 21 * 7);
        assert!(rows.iter().all(|r| r.matches));
        assert_eq!((rows[0].k, rows[1].n.clone()), (0, big(1)));
    }
}
