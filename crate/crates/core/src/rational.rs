//! Exact rational helpers: parsing, formatting, float conversion and
//! continued-fraction rationalization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational type used throughout the crate.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number {x}")))
}

/// How a textual number was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Literal {
    /// Integer or `p/q` fraction.
    Exact,
    /// Decimal with a fractional part or exponent.
    Decimal,
}

/// Parses `"3"`, `"-7/12"`, `"0.125"` or `"1.5e-3"` into an exact rational.
///
/// Decimal literals are read at face value (`"0.1"` is `1/10`).
pub fn parse(s: &str) -> Result<(Rational, Literal)> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok((Rational::new(p, q), Literal::Exact));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok((Rational::from_integer(n), Literal::Exact));
    }
    // decimal: [sign] digits [. digits] [e exp]
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    if neg {
        value = -value;
    }
    Ok((value, Literal::Decimal))
}

/// Formats as `"p"` or `"p/q"`.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Formats a float with 17 significant digits, which round-trips any `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// from the continued-fraction convergents and semiconvergents.
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("cannot rationalize {x}")));
    }
    Ok(rationalize_exact(&from_f64(x)?, max_den))
}

/// [`rationalize`] for a value that is already an exact rational, such as a
/// long decimal literal.
pub fn rationalize_exact(exact: &Rational, max_den: u64) -> Rational {
    if exact.denom() <= &BigInt::from(max_den) {
        return exact.clone();
    }
    let max_den = BigInt::from(max_den);
    // convergents h/k of the exact binary value
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            // largest admissible semiconvergent
            let t = (&max_den - &k0) / &k1;
            let semi = Rational::new(&t * &h1 + &h0, &t * &k1 + &k0);
            let conv = Rational::new(h1.clone(), k1.clone());
            let d_semi = (&semi - exact).abs();
            let d_conv = (&conv - exact).abs();
            return if d_semi < d_conv { semi } else { conv };
        }
        let h2 = &a * &h1 + &h0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return Rational::new(h1, k1);
        }
        rest = frac.recip();
    }
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    // lo and hi share the integer part: recurse on the reciprocals of the
    // fractional parts
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse("3").unwrap(), (int(3), Literal::Exact));
        assert_eq!(parse("-7/12").unwrap(), (ratio(-7, 12), Literal::Exact));
        assert_eq!(parse("0.1").unwrap(), (ratio(1, 10), Literal::Decimal));
        assert_eq!(parse("-1.5e-3").unwrap().0, ratio(-3, 2000));
        assert_eq!(parse("2E2").unwrap().0, int(200));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(1.0 / 3.0, 1_000_000_000_000).unwrap(), ratio(1, 3));
        assert_eq!(rationalize(-0.75, 100).unwrap(), ratio(-3, 4));
        assert_eq!(rationalize(std::f64::consts::PI, 1000).unwrap(), ratio(355, 113));
        assert_eq!(rationalize(2.0, 10).unwrap(), int(2));
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(4, 10)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(-4, 10), &ratio(-3, 10)), ratio(-1, 3));
        assert_eq!(simplest_between(&ratio(-1, 10), &ratio(1, 7)), int(0));
        assert_eq!(simplest_between(&ratio(5, 2), &ratio(5, 2)), ratio(5, 2));
        assert_eq!(simplest_between(&ratio(27, 10), &ratio(29, 10)), ratio(11, 4));
        let x = ratio(7, 22);
        let eps = ratio(1, 1_000_000);
        assert_eq!(simplest_between(&(&x - &eps), &(&x + &eps)), x);
    }

    #[test]
    fn float_formatting_round_trips() {
        let x = 0.381_966_011_250_105_1_f64;
        let s = format_f64(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }
}
