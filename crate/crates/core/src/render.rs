//! Text and LaTeX rendering in the usual hand-written style, e.g.
//! `S_n^6 = 1/42 n(n+1)(2n+1)(3n^4 + 6n^3 - 3n + 1)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::analysis::FactoredForm;
use crate::exact_arith::ExactRational;
use crate::faulhaber::integer_form;
use crate::RationalPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Plain,
    Latex,
}

impl Style {
    fn power(self, var: &str, e: usize) -> String {
        match (e, self) {
            (0, _) => String::new(),
            (1, _) => var.to_owned(),
            (_, Style::Plain) => format!("{var}^{e}"),
            (_, Style::Latex) => format!("{var}^{{{e}}}"),
        }
    }

    fn sub_sup(self, base: &str, sub: &str, sup: Option<u32>) -> String {
        match (self, sup) {
            (Style::Plain, None) => format!("{base}_{sub}"),
            (Style::Plain, Some(s)) => format!("{base}_{sub}^{s}"),
            (Style::Latex, None) => format!("{base}_{{{sub}}}"),
            (Style::Latex, Some(s)) => format!("{base}_{sub}^{{{s}}}"),
        }
    }
}

/// `-1/2`, `7/6`, `1`, `0`.
pub fn rational(r: &ExactRational, style: Style) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    match style {
        Style::Plain => format!("{}/{}", r.numer(), r.denom()),
        Style::Latex => {
            let sign = if r.is_negative() { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
        }
    }
}

/// `B_4 = -1/30` or `B_{22} = \frac{854513}{138}`.
pub fn bernoulli_line(n: usize, value: &ExactRational, style: Style) -> String {
    format!(
        "{} = {}",
        style.sub_sup("B", &n.to_string(), None),
        rational(value, style)
    )
}

/// Integer coefficients (ascending) as `3n^4 + 6n^3 - 3n + 1`; `tight`
/// drops the spaces around signs, as inside `(2n+1)`.
pub fn integer_terms(ints: &[BigInt], var: &str, style: Style, tight: bool) -> String {
    let mut out = String::new();
    for (e, c) in ints.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if out.is_empty() {
            if c.is_negative() {
                "-"
            } else {
                ""
            }
        } else {
            match (c.is_negative(), tight) {
                (true, true) => "-",
                (false, true) => "+",
                (true, false) => " - ",
                (false, false) => " + ",
            }
        };
        out.push_str(sign);
        if !(mag.is_one() && e > 0) {
            out.push_str(&mag.to_string());
        }
        out.push_str(&style.power(var, e));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn scalar_prefix(r: &ExactRational, style: Style) -> Option<String> {
    if r.is_one() {
        return None;
    }
    if r.numer().is_one() && style == Style::Latex {
        return Some(format!("\\frac{{1}}{{{}}}", r.denom()));
    }
    Some(rational(r, style))
}

/// `1/d (c_m n^m + ... )` with integer `c`.
pub fn expanded_poly(p: &RationalPolynomial, style: Style) -> String {
    let (d, ints) = integer_form(p);
    let terms = integer_terms(&ints, "n", style, false);
    if d.is_one() {
        return terms;
    }
    let scalar = scalar_prefix(&ExactRational::new(1, d).expect("lcm > 0"), style).expect("d > 1");
    match (style, ints.iter().filter(|c| !c.is_zero()).count()) {
        (_, 1) => format!("{scalar} {terms}"),
        (Style::Plain, _) => format!("{scalar} ({terms})"),
        (Style::Latex, _) => format!("{scalar}\\left({terms}\\right)"),
    }
}

/// `S_n^k = 1/d (c_m n^m + ... )`.
pub fn expanded_sum(k: u32, p: &RationalPolynomial, style: Style) -> String {
    format!(
        "{} = {}",
        style.sub_sup("S", "n", Some(k)),
        expanded_poly(p, style)
    )
}

/// `S_n^k = scalar n^a(n+1)^b(2n+1)(cofactor)`.
pub fn factored_sum(form: &FactoredForm, style: Style) -> String {
    let lhs = style.sub_sup("S", "n", Some(form.k));
    let mut body = String::new();
    for (factor, mult) in &form.factors {
        let (_, ints) = integer_form(factor);
        let is_x = ints.len() == 2 && ints[0].is_zero() && ints[1].is_one();
        let linear = ints.len() == 2;
        let power = match (*mult, style) {
            (1, _) => String::new(),
            (m, Style::Plain) => format!("^{m}"),
            (m, Style::Latex) => format!("^{{{m}}}"),
        };
        if is_x {
            body.push_str(&style.power("n", *mult as usize));
        } else {
            let inner = integer_terms(&ints, "n", style, linear);
            body.push_str(&format!("({inner}){power}"));
        }
    }
    let rhs = match (scalar_prefix(&form.scalar, style), body.is_empty()) {
        (None, true) => "1".to_owned(),
        (None, false) => body,
        (Some(s), true) => s,
        (Some(s), false) => format!("{s} {body}"),
    };
    format!("{lhs} = {rhs}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::factored_form;
    use crate::bernoulli::BernoulliCache;
    use crate::faulhaber::faulhaber_poly;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn bernoulli_lines() {
        assert_eq!(bernoulli_line(4, &q("-1/30"), Style::Plain), "B_4 = -1/30");
        assert_eq!(bernoulli_line(0, &q("1"), Style::Plain), "B_0 = 1");
        assert_eq!(
            bernoulli_line(22, &q("854513/138"), Style::Latex),
            r"B_{22} = \frac{854513}{138}"
        );
        assert_eq!(
            bernoulli_line(1, &q("-1/2"), Style::Latex),
            r"B_{1} = -\frac{1}{2}"
        );
    }

    #[test]
    fn factored_lines() {
        let cache = BernoulliCache::new();
        let line = |k| factored_sum(&factored_form(k, &cache), Style::Plain);
        assert_eq!(line(0), "S_n^0 = n");
        assert_eq!(line(1), "S_n^1 = 1/2 n(n+1)");
        assert_eq!(line(2), "S_n^2 = 1/6 n(n+1)(2n+1)");
        assert_eq!(line(3), "S_n^3 = 1/4 n^2(n+1)^2");
        assert_eq!(line(6), "S_n^6 = 1/42 n(n+1)(2n+1)(3n^4 + 6n^3 - 3n + 1)");
        assert_eq!(
            line(7),
            "S_n^7 = 1/24 n^2(n+1)^2(3n^4 + 6n^3 - n^2 - 4n + 2)"
        );
        assert_eq!(
            factored_sum(&factored_form(6, &cache), Style::Latex),
            r"S_n^{6} = \frac{1}{42} n(n+1)(2n+1)(3n^{4} + 6n^{3} - 3n + 1)"
        );
    }

    #[test]
    fn expanded_lines() {
        let cache = BernoulliCache::new();
        let line = |k| expanded_sum(k, &faulhaber_poly(k, &cache), Style::Plain);
        assert_eq!(line(0), "S_n^0 = n");
        assert_eq!(line(1), "S_n^1 = 1/2 (n^2 + n)");
        assert_eq!(
            line(10),
            "S_n^10 = 1/66 (6n^11 + 33n^10 + 55n^9 - 66n^7 + 66n^5 - 33n^3 + 5n)"
        );
        assert_eq!(
            expanded_sum(9, &faulhaber_poly(9, &cache), Style::Latex),
            r"S_n^{9} = \frac{1}{20}\left(2n^{10} + 10n^{9} + 15n^{8} - 14n^{6} + 10n^{4} - 3n^{2}\right)"
        );
    }

    #[test]
    fn term_edge_cases() {
        let ints: Vec<BigInt> = [0, 0].into_iter().map(BigInt::from).collect();
        assert_eq!(integer_terms(&ints, "n", Style::Plain, false), "0");
        let ints: Vec<BigInt> = [-1, -1].into_iter().map(BigInt::from).collect();
        assert_eq!(integer_terms(&ints, "n", Style::Plain, true), "-n-1");
    }
}
