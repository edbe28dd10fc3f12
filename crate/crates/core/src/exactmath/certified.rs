use super::{log2_estimate, pow2, Interval, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A real number that can be enclosed to any requested precision.
pub trait CertifiedReal {
    /// Rational enclosure whose relative width shrinks roughly like
    /// `2^-bits` as `bits` grows.
    fn enclose(&self, bits: u32) -> Interval;
}

/// Upper bound on the precision any refinement loop will try.
pub const MAX_BITS: u32 = 1 << 16;

/// Rational bracket `lo <= true value <= hi` of an exact real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl CertifiedInterval {
    pub fn exact(x: Rational) -> Self {
        CertifiedInterval { lo: x.clone(), hi: x }
    }

    pub fn from_interval(iv: &Interval) -> Self {
        CertifiedInterval { lo: iv.lo().clone(), hi: iv.hi().clone() }
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone()).expect("bracket invariant lo <= hi")
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Encloses `x` with width at most `tol`, doubling precision as needed.
    pub fn refine<R: CertifiedReal + ?Sized>(x: &R, tol: &Rational, start_bits: u32) -> Result<Self> {
        if !tol.is_positive() {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        let mut bits = start_bits.max(16);
        loop {
            let iv = x.enclose(bits);
            if &iv.width() <= tol {
                return Ok(Self::from_interval(&iv));
            }
            if bits >= MAX_BITS {
                return Err(Error::PrecisionExhausted(bits));
            }
            bits = (bits * 2).min(MAX_BITS);
        }
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl CertifiedReal for Rational {
    fn enclose(&self, _bits: u32) -> Interval {
        Interval::point(self.clone())
    }
}

/// Bracket of `sqrt(r)` for `r >= 0` with about `bits` significant bits.
/// Exact (zero width) when `r` is a perfect rational square.
pub fn sqrt_bracket(r: &Rational, bits: u32) -> Interval {
    assert!(!r.is_negative(), "sqrt_bracket of a negative number");
    if r.is_zero() {
        return Interval::point(Rational::zero());
    }
    if let Some(s) = exact_sqrt(r) {
        return Interval::point(s);
    }
    // sqrt(r) ~ 2^(e/2); scale by 2^k so the integer root carries `bits` bits.
    let e = log2_estimate(r).unwrap();
    let k = (bits as i64 + 2 - e / 2).max(0);
    let scaled = r * pow2(2 * k);
    let fl = scaled.floor().to_integer();
    let s = fl.sqrt();
    let lo = Rational::from_integer(s.clone()) * pow2(-k);
    let hi = Rational::from_integer(s + BigInt::one()) * pow2(-k);
    Interval::new(lo, hi).unwrap()
}

fn exact_sqrt(r: &Rational) -> Option<Rational> {
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn sqrt_brackets() {
        let two = int(2);
        let b = sqrt_bracket(&two, 64);
        assert!(b.lo() * b.lo() <= two && two <= b.hi() * b.hi());
        assert!(b.width() < pow2(-60));
        assert_eq!(sqrt_bracket(&rat(9, 4), 10), Interval::point(rat(3, 2)));
    }

    struct Sqrt2;
    impl CertifiedReal for Sqrt2 {
        fn enclose(&self, bits: u32) -> Interval {
            sqrt_bracket(&int(2), bits)
        }
    }

    #[test]
    fn refine_reaches_tolerance() {
        let tol = pow2(-200);
        let c = CertifiedInterval::refine(&Sqrt2, &tol, 16).unwrap();
        assert!(c.width() <= tol);
        assert!(&c.lo * &c.lo <= int(2) && int(2) <= &c.hi * &c.hi);
    }

    proptest! {
        #[test]
        fn sqrt_encloses(n in 1i64..1_000_000, d in 1i64..1000, bits in 8u32..200) {
            let r = rat(n, d);
            let b = sqrt_bracket(&r, bits);
            prop_assert!(b.lo() * b.lo() <= r);
            prop_assert!(b.hi() * b.hi() >= r);
        }
    }
}
