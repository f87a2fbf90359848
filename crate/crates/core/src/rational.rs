//! Exact rational scalars and their decimal/JSON rendering.
//!
//! All function data in this crate is carried by [`Rational`]
//! (arbitrary-precision, always in lowest terms, denominator > 0).
//! Floating point enters only at the eigensolver boundary.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for small rational literals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// 2^exp as an exact rational; `exp` may be negative.
pub fn pow2(exp: i64) -> Rational {
    let mag = BigInt::one() << exp.unsigned_abs() as usize;
    if exp >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Nearest double; relative error below 2^-52 even for huge numerators.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

fn pow10(exp: u64) -> BigInt {
    BigInt::from(10u32).pow(exp as u32)
}

fn div_round_half_even(numer: &BigInt, denom: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = numer.div_rem(denom);
    let twice: BigInt = &r * 2;
    match twice.cmp(denom) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if (&q % 2u32).is_zero() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Renders `value` with `digits` significant decimal digits, round-half-even.
///
/// Positional notation while the exponent is moderate, scientific otherwise.
pub fn decimal_string(value: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let numer = value.numer().abs();
    let denom = value.denom().clone();

    // First exponent guess from digit counts, then correct by re-rounding.
    let mut exp = numer.to_string().len() as i64 - denom.to_string().len() as i64;
    let mandatory = loop {
        let shift = digits as i64 - 1 - exp;
        let (n, d) = if shift >= 0 {
            (&numer * pow10(shift as u64), denom.clone())
        } else {
            (numer.clone(), &denom * pow10((-shift) as u64))
        };
        let q = div_round_half_even(&n, &d);
        let qs = q.to_string();
        if qs.len() > digits {
            exp += 1;
        } else if qs.len() < digits {
            exp -= 1;
        } else {
            break qs;
        }
    };

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp >= 0 && (exp as usize) < digits + 4 {
        let int_len = exp as usize + 1;
        if int_len >= digits {
            out.push_str(&mandatory);
            out.push_str(&"0".repeat(int_len - digits));
        } else {
            out.push_str(&mandatory[..int_len]);
            out.push('.');
            out.push_str(&mandatory[int_len..]);
        }
    } else if exp < 0 && exp >= -6 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&mandatory);
    } else {
        out.push_str(&mandatory[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&mandatory[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Parses a decimal integer string into a `BigInt` (used by the JSON codec).
pub fn parse_bigint(text: &str) -> Result<BigInt> {
    text.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {text:?}: {e}")))
}

/// Builds a rational from decimal numerator/denominator strings.
pub fn from_strings(numer: &str, denom: &str) -> Result<Rational> {
    let n = parse_bigint(numer)?;
    let d = parse_bigint(denom)?;
    if d.sign() != Sign::Plus {
        return Err(Error::Parse(format!("denominator must be positive: {denom}")));
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), rat_int(8));
        assert_eq!(pow2(0), rat_int(1));
        assert_eq!(pow2(-2), rat(1, 4));
    }

    #[test]
    fn nearest_double_on_huge_values() {
        // 1/3 scaled by 2^300 in numerator and denominator: value still 1/3.
        let huge = Rational::new(BigInt::one() << 300, (BigInt::one() << 300) * 3);
        let f = to_f64(&huge);
        assert!((f - 1.0 / 3.0).abs() < 1e-16);
        // A value far outside f64 integer range must still convert, not NaN.
        let big = Rational::new((BigInt::one() << 200) + 1, BigInt::from(3));
        let f = to_f64(&big);
        let expect = (2f64).powi(200) / 3.0;
        assert!((f - expect).abs() / expect < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 4), 3), "0.250");
        assert_eq!(decimal_string(&rat(-1, 4), 2), "-0.25");
        assert_eq!(decimal_string(&rat_int(2), 4), "2.000");
        assert_eq!(decimal_string(&rat_int(0), 30), "0");
        assert_eq!(decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&rat(2, 3), 5), "0.66667");
        assert_eq!(decimal_string(&rat_int(1234567), 3), "1230000");
    }

    #[test]
    fn decimal_round_half_even() {
        // 0.125 at two digits: ties to even -> 0.12
        assert_eq!(decimal_string(&rat(1, 8), 2), "0.12");
        // 0.375 at two digits: ties to even -> 0.38
        assert_eq!(decimal_string(&rat(3, 8), 2), "0.38");
        // Carry across all digits: 0.9995 at three digits -> 1.00
        assert_eq!(decimal_string(&rat(9995, 10000), 3), "1.00");
    }

    #[test]
    fn decimal_scientific_fallback() {
        let tiny = Rational::new(BigInt::one(), BigInt::from(10u8).pow(12));
        assert_eq!(decimal_string(&tiny, 3), "1.00e-12");
    }

    #[test]
    fn string_round_trip() {
        let v = from_strings("-7", "12").unwrap();
        assert_eq!(v, rat(-7, 12));
        assert!(from_strings("1", "0").is_err());
        assert!(from_strings("x", "1").is_err());
        assert!(from_strings("1", "-2").is_err());
    }
}
