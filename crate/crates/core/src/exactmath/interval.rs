use super::{round_down, round_up, Polynomial, Rational};
use crate::error::{Error, Result};
use num_traits::{Signed, Zero};

/// Closed interval `[lo, hi]` with rational endpoints.
///
/// Doubles as the carrier for outward-rounded interval arithmetic: the
/// arithmetic methods return enclosures of every pointwise result.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// True when `self` lies strictly to the left of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn scale(&self, s: &Rational) -> Interval {
        let a = &self.lo * s;
        let b = &self.hi * s;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let cands = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn square(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (&self.lo * &self.lo).max(&self.hi * &self.hi);
            Interval { lo: Rational::zero(), hi: m }
        } else {
            self.mul(self)
        }
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.lo <= Rational::zero() && o.hi >= Rational::zero() {
            return None;
        }
        let inv = Interval { lo: o.hi.recip(), hi: o.lo.recip() };
        Some(self.mul(&inv))
    }

    /// Enclosure of the square root; `None` if the interval reaches below 0.
    pub fn sqrt(&self, bits: u32) -> Option<Interval> {
        if self.lo.is_negative() {
            return None;
        }
        let lo = super::sqrt_bracket(&self.lo, bits).lo;
        let hi = super::sqrt_bracket(&self.hi, bits).hi;
        Some(Interval { lo, hi })
    }

    /// Widens both endpoints to dyadics with about `bits` significant bits.
    pub fn round_outward(&self, bits: u32) -> Interval {
        Interval { lo: round_down(&self.lo, bits), hi: round_up(&self.hi, bits) }
    }
}

fn check_quadratic(p: &Polynomial) -> Result<(Rational, Rational, Rational)> {
    match p.degree() {
        Some(d) if d > 2 => Err(Error::DegreeTooHigh(d)),
        _ => Ok((p.coeff(2), p.coeff(1), p.coeff(0))),
    }
}

/// Exact global minimum of a polynomial of degree at most 2 over `iv`.
/// Ties go to the smaller argument.
pub fn quad_min_on_interval(p: &Polynomial, iv: &Interval) -> Result<(Rational, Rational)> {
    let (a, b, _) = check_quadratic(p)?;
    let mut cands = vec![iv.lo.clone()];
    if a.is_positive() {
        let vertex = -b / (&a * Rational::from_integer(2.into()));
        if iv.lo < vertex && vertex < iv.hi {
            cands.push(vertex);
        }
    }
    cands.push(iv.hi.clone());
    let mut best: Option<(Rational, Rational)> = None;
    for t in cands {
        let v = p.eval(&t);
        match &best {
            Some((_, bv)) if &v >= bv => {}
            _ => best = Some((t, v)),
        }
    }
    Ok(best.expect("candidate list is never empty"))
}

/// Exact minimum over `[from, oo)`; `Ok(None)` when unbounded below.
pub fn quad_min_on_ray(p: &Polynomial, from: &Rational) -> Result<Option<(Rational, Rational)>> {
    let (a, b, _) = check_quadratic(p)?;
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        return Ok(None);
    }
    let mut t = from.clone();
    if a.is_positive() {
        let vertex = -b / (&a * Rational::from_integer(2.into()));
        if vertex > t {
            t = vertex;
        }
    }
    let v = p.eval(&t);
    Ok(Some((t, v)))
}

pub fn quad_nonneg_on_interval(p: &Polynomial, iv: &Interval) -> Result<bool> {
    let (_, min) = quad_min_on_interval(p, iv)?;
    Ok(!min.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use proptest::prelude::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(int(a), int(b)).unwrap()
    }

    #[test]
    fn min_examples() {
        let p = Polynomial::from_ints(&[0, 0, 1]);
        assert_eq!(quad_min_on_interval(&p, &iv(-1, 1)).unwrap(), (int(0), int(0)));
        let p = Polynomial::from_ints(&[2, -1]);
        assert_eq!(quad_min_on_interval(&p, &iv(0, 5)).unwrap(), (int(5), int(-3)));
        // 6(t-3)^2 = 6t^2 - 36t + 54
        let p = Polynomial::from_ints(&[54, -36, 6]);
        assert_eq!(quad_min_on_interval(&p, &iv(0, 2)).unwrap(), (int(2), int(6)));
    }

    #[test]
    fn min_ties_prefer_left() {
        let p = Polynomial::from_ints(&[0, 0, -1]);
        assert_eq!(quad_min_on_interval(&p, &iv(-1, 1)).unwrap().0, int(-1));
        let c = Polynomial::from_ints(&[4]);
        assert_eq!(quad_min_on_interval(&c, &iv(2, 3)).unwrap(), (int(2), int(4)));
    }

    #[test]
    fn nonneg_examples() {
        // (t - 1/2)^2
        let p = Polynomial::new(vec![rat(1, 4), int(-1), int(1)]);
        assert!(quad_nonneg_on_interval(&p, &iv(-1, 1)).unwrap());
        assert!(!quad_nonneg_on_interval(&Polynomial::from_ints(&[-2, 0, 1]), &iv(-1, 1)).unwrap());
        assert!(quad_nonneg_on_interval(&Polynomial::from_ints(&[1, 0, -1]), &iv(-1, 1)).unwrap());
    }

    #[test]
    fn rejects_cubic() {
        let p = Polynomial::from_ints(&[0, 0, 0, 1]);
        assert_eq!(quad_min_on_interval(&p, &iv(0, 1)), Err(Error::DegreeTooHigh(3)));
        assert!(quad_nonneg_on_interval(&p, &iv(0, 1)).is_err());
    }

    #[test]
    fn ray_minimum() {
        let p = Polynomial::from_ints(&[1, -4, 1]);
        assert_eq!(quad_min_on_ray(&p, &int(0)).unwrap(), Some((int(2), int(-3))));
        assert_eq!(quad_min_on_ray(&p, &int(5)).unwrap(), Some((int(5), int(6))));
        assert_eq!(quad_min_on_ray(&Polynomial::from_ints(&[0, -1]), &int(0)).unwrap(), None);
    }

    #[test]
    fn interval_arithmetic_encloses() {
        let a = Interval::new(rat(-1, 2), rat(3, 2)).unwrap();
        let b = Interval::new(int(2), int(3)).unwrap();
        let q = a.div(&b).unwrap();
        assert!(q.contains(&rat(-1, 4)) && q.contains(&rat(3, 4)));
        assert_eq!(a.square().lo(), &int(0));
        assert!(b.div(&a).is_none());
    }

    proptest! {
        #[test]
        fn min_is_lower_bound(c0 in -20i64..20, c1 in -20i64..20, c2 in -20i64..20,
                              lo in -10i64..10, w in 1i64..10,
                              samples in prop::collection::vec(0i64..=1000, 100)) {
            let p = Polynomial::from_ints(&[c0, c1, c2]);
            let i = iv(lo, lo + w);
            let (t, m) = quad_min_on_interval(&p, &i).unwrap();
            prop_assert!(i.contains(&t));
            prop_assert_eq!(p.eval(&t), m.clone());
            for s in samples {
                let x = int(lo) + rat(s * w, 1000);
                prop_assert!(p.eval(&x) >= m);
            }
        }
    }
}
