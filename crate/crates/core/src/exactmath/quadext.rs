use super::{sqrt_bracket, CertifiedReal, Interval, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element `a + b*sqrt(d)` of a real quadratic field, `d >= 0`.
///
/// Values are normalized: `b == 0` forces `d == 0`, and a radicand that is a
/// rational square is folded into `a`. Arithmetic between two irrational
/// values needs radicands whose ratio is a rational square; mixing unrelated
/// fields panics (use the `checked_*` methods to test first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        assert!(!d.is_negative(), "QuadExt radicand must be nonnegative");
        if b.is_zero() || d.is_zero() {
            return QuadExt { a, b: Rational::zero(), d: Rational::zero() };
        }
        if let Some(s) = rational_sqrt(&d) {
            return QuadExt { a: a + b * s, b: Rational::zero(), d: Rational::zero() };
        }
        QuadExt { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: Rational::zero() }
    }

    /// `sqrt(r)` for rational `r >= 0`.
    pub fn sqrt(r: &Rational) -> Self {
        Self::new(Rational::zero(), Rational::one(), r.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `a^2 - b^2 d`, a rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    /// Exact sign relative to zero.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }

    /// Rewrites `self` over radicand `d` when possible.
    fn over_radicand(&self, d: &Rational) -> Option<QuadExt> {
        if self.b.is_zero() {
            return Some(QuadExt { a: self.a.clone(), b: Rational::zero(), d: d.clone() });
        }
        if &self.d == d {
            return Some(self.clone());
        }
        // sqrt(self.d) = s * sqrt(d) with s = sqrt(self.d / d) rational
        let s = rational_sqrt(&(&self.d / d))?;
        Some(QuadExt { a: self.a.clone(), b: &self.b * s, d: d.clone() })
    }

    fn common(x: &Self, y: &Self) -> Option<(QuadExt, QuadExt, Rational)> {
        let d = if !x.b.is_zero() { x.d.clone() } else { y.d.clone() };
        Some((x.over_radicand(&d)?, y.over_radicand(&d)?, d))
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let (x, y, d) = Self::common(self, o)?;
        Some(Self::new(x.a + y.a, x.b + y.b, d))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        let (x, y, d) = Self::common(self, o)?;
        Some(Self::new(x.a - y.a, x.b - y.b, d))
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let (x, y, d) = Self::common(self, o)?;
        let a = &x.a * &y.a + &x.b * &y.b * &d;
        let b = &x.a * &y.b + &x.b * &y.a;
        Some(Self::new(a, b, d))
    }

    /// `None` on mixed fields or a zero divisor.
    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.checked_mul(&o.conjugate())?;
        Some(Self::new(num.a / &n, num.b / &n, num.d))
    }

    /// Rational enclosure with about `bits` bits of relative accuracy.
    pub fn to_interval(&self, bits: u32) -> Interval {
        if self.b.is_zero() {
            return Interval::point(self.a.clone());
        }
        let root = sqrt_bracket(&self.d, bits + 8);
        Interval::point(self.a.clone()).add(&root.scale(&self.b))
    }

    pub fn approx(&self) -> f64 {
        super::approx(&self.a) + super::approx(&self.b) * super::approx(&self.d).sqrt()
    }
}

impl CertifiedReal for QuadExt {
    fn enclose(&self, bits: u32) -> Interval {
        self.to_interval(bits)
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d)
        }
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (sn, sd) = (r.numer().sqrt(), r.denom().sqrt());
    (&sn * &sn == *r.numer() && &sd * &sd == *r.denom()).then(|| Rational::new(sn, sd))
}

macro_rules! quad_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &QuadExt {
            type Output = QuadExt;
            fn $m(self, o: &QuadExt) -> QuadExt {
                self.$checked(o).unwrap_or_else(|| {
                    panic!("QuadExt {}: incompatible radicands {} and {} (or zero divisor)", stringify!($m), self.d, o.d)
                })
            }
        }
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, o: QuadExt) -> QuadExt {
                (&self).$m(&o)
            }
        }
    };
}
quad_op!(Add, add, checked_add);
quad_op!(Sub, sub, checked_sub);
quad_op!(Mul, mul, checked_mul);
quad_op!(Div, div, checked_div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn folding_and_normalization() {
        let x = QuadExt::new(int(1), int(2), int(9));
        assert_eq!(x, QuadExt::rational(int(7)));
        let y = QuadExt::new(int(1), int(0), int(5));
        assert_eq!(y.d(), &int(0));
    }

    #[test]
    fn arithmetic_in_one_field() {
        let r2 = QuadExt::sqrt(&int(2));
        assert_eq!(&r2 * &r2, QuadExt::rational(int(2)));
        let x = QuadExt::new(int(1), int(1), int(2));
        let inv = &QuadExt::rational(int(1)) / &x;
        assert_eq!(&inv * &x, QuadExt::rational(int(1)));
        // sqrt(8) = 2 sqrt(2): compatible radicands
        let r8 = QuadExt::sqrt(&int(8));
        assert_eq!(&r8 - &(&r2 * &QuadExt::rational(int(2))), QuadExt::rational(int(0)));
        assert!(QuadExt::sqrt(&int(3)).checked_add(&r2).is_none());
    }

    #[test]
    fn sign_cases() {
        // 41 - sqrt(1680) is a small positive number
        let e1 = QuadExt::new(int(41), int(-1), int(1680));
        assert_eq!(e1.sign(), Ordering::Greater);
        assert_eq!(QuadExt::new(int(-41), int(1), int(1680)).sign(), Ordering::Less);
        assert_eq!(QuadExt::new(int(3), int(-1), int(10)).sign(), Ordering::Less);
        assert_eq!(QuadExt::rational(int(0)).sign(), Ordering::Equal);
    }

    #[test]
    fn sign_matches_interval_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut decided = 0;
        for _ in 0..1000 {
            let d = int(rng.gen_range(2..500));
            let a = rat(rng.gen_range(-2000..2000), rng.gen_range(1..50));
            let b = rat(rng.gen_range(-200..200), rng.gen_range(1..50));
            let x = QuadExt::new(a, b, d);
            let iv = x.to_interval(200);
            let s = x.sign();
            assert!(iv.contains(&x.a().clone()) || !x.is_rational());
            match s {
                Ordering::Greater => assert!(!iv.is_negative()),
                Ordering::Less => assert!(!iv.is_positive()),
                Ordering::Equal => assert!(iv.contains(&int(0))),
            }
            if iv.is_positive() {
                assert_eq!(s, Ordering::Greater);
                decided += 1;
            } else if iv.is_negative() {
                assert_eq!(s, Ordering::Less);
                decided += 1;
            }
        }
        assert!(decided > 990);
    }
}
