//! Exact scalar and polynomial arithmetic.
//!
//! Every verdict-affecting computation in the crate runs on [`Rational`]
//! values, which are always kept in lowest terms. Quadratic extensions
//! ([`QuadExt`]) cover constructions that need one square root, and
//! [`CertifiedInterval`] brackets cover deeper nested radicals.

mod certified;
mod interval;
mod poly;
mod quadext;
mod scalar;

pub use certified::{sqrt_bracket, CertifiedInterval, CertifiedReal, MAX_BITS};
pub use interval::{quad_min_on_interval, quad_min_on_ray, quad_nonneg_on_interval, Interval};
pub use poly::Polynomial;
pub use quadext::QuadExt;
pub use scalar::ExactScalar;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, normalized after every operation.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Canonical `num/den` form, denominator omitted when it is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `num/den`, a bare integer, or a plain decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !ip.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Exact decimal expansion when the denominator has only factors 2 and 5.
pub fn terminating_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_multiple_of(&two) {
        den /= &two;
        twos += 1;
    }
    while den.is_multiple_of(&five) {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    debug_assert!(scaled.is_integer());
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let mut digits = n.abs().to_string();
    if digits.len() <= places {
        digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
    }
    let (ip, fp) = digits.split_at(digits.len() - places);
    let fp = fp.trim_end_matches('0');
    let body = if fp.is_empty() { ip.to_string() } else { format!("{ip}.{fp}") };
    Some(if neg { format!("-{body}") } else { body })
}

/// Scientific notation truncated to `digits` significant digits, valid at any
/// magnitude. Display only.
pub fn format_scientific(r: &Rational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let (n, d) = (r.numer().abs(), r.denom().clone());
    let ten = BigInt::from(10);
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    // mantissa = |r| / 10^e, brought into [1, 10)
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        if shift >= 0 {
            (&n * ten.pow(shift as u32)) / &d
        } else {
            &n / (&d * ten.pow((-shift) as u32))
        }
    };
    let mut m = scaled(e);
    if m.to_string().len() as u32 > digits {
        e += 1;
        m = scaled(e);
    } else if (m.to_string().len() as u32) < digits {
        e -= 1;
        m = scaled(e);
    }
    let s = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    let mantissa = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
    format!("{sign}{mantissa}e{e}")
}

/// Floating-point approximation, for human-readable tables only.
pub fn approx(r: &Rational) -> f64 {
    // Scale down huge operands before converting so the ratio stays finite.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        // Denominator vanished under the shift: value is astronomically large.
        return if n.is_sign_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    n / d
}

/// `floor(log2 |r|)` up to an error of one; `None` for zero.
pub(crate) fn log2_estimate(r: &Rational) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(r.numer().bits() as i64 - r.denom().bits() as i64)
}

/// Largest dyadic `<= r` with about `bits` significant bits.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, false)
}

/// Smallest dyadic `>= r` with about `bits` significant bits.
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, true)
}

fn round_dyadic(r: &Rational, bits: u32, up: bool) -> Rational {
    let Some(e) = log2_estimate(r) else {
        return Rational::zero();
    };
    let scale_exp = bits as i64 - e;
    let scaled = r * pow2(scale_exp);
    let n = if up { scaled.ceil() } else { scaled.floor() };
    n * pow2(-scale_exp)
}

/// Simplest rational (smallest denominator, then numerator) in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "simplest_between: empty range");
    if lo.is_positive() {
        simplest_pos(lo, hi)
    } else if hi.is_negative() {
        -simplest_pos(&-hi, &-lo)
    } else {
        Rational::zero()
    }
}

// Stern-Brocot descent through continued fractions, 0 < lo <= hi.
fn simplest_pos(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if &(fl.clone() + Rational::one()) <= hi {
        return fl + Rational::one();
    }
    // Same integer part; recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_pos(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scientific_formatting() {
        assert_eq!(format_scientific(&rat(1, 3), 4), "3.333e-1");
        assert_eq!(format_scientific(&int(1), 3), "1.00e0");
        assert_eq!(format_scientific(&rat(-99999, 1000), 3), "-9.99e1");
        assert_eq!(format_scientific(&int(1000), 2), "1.0e3");
        assert_eq!(format_scientific(&pow2(-2000), 3), "8.70e-603");
        assert_eq!(format_scientific(&Rational::zero(), 3), "0");
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-2, 6)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(terminating_decimal(&rat(-1, 8)).unwrap(), "-0.125");
        assert_eq!(terminating_decimal(&rat(3, 1)).unwrap(), "3");
        assert_eq!(terminating_decimal(&rat(1, 20)).unwrap(), "0.05");
        assert_eq!(terminating_decimal(&rat(1, 3)), None);
        for s in ["-0.125", "3", "0.05", "12.5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(terminating_decimal(&r).unwrap(), s);
        }
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let r = rat(1, 3);
        let lo = round_down(&r, 20);
        let hi = round_up(&r, 20);
        assert!(lo <= r && r <= hi);
        assert!(&hi - &lo < rat(1, 1 << 18));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            // canonical form: equal values share numerator and denominator
            let x = &a * &b;
            let y = &b * &a;
            prop_assert_eq!(x.numer(), y.numer());
            prop_assert_eq!(x.denom(), y.denom());
        }

        #[test]
        fn simplest_is_inside(a in small_rat(), b in small_rat()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let s = simplest_between(&lo, &hi);
            prop_assert!(lo <= s && s <= hi);
        }

        #[test]
        fn format_parse_roundtrip(a in small_rat()) {
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }
    }
}
