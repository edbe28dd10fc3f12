use super::{QuadExt, Rational};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Ordered field with exact sign determination.
///
/// Implemented for [`Rational`] and [`QuadExt`]; lets piecewise-parabolic
/// interpolants carry breakpoints from either.
pub trait ExactScalar: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn from_rational(r: Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// Panics on a zero divisor.
    fn over(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn sign(&self) -> Ordering;
    fn approx(&self) -> f64;

    fn cmp_exact(&self, o: &Self) -> Ordering {
        self.minus(o).sign()
    }

    fn is_zero_exact(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl ExactScalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn approx(&self) -> f64 {
        super::approx(self)
    }
    fn cmp_exact(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

impl ExactScalar for QuadExt {
    fn from_rational(r: Rational) -> Self {
        QuadExt::rational(r)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        QuadExt::sign(self)
    }
    fn approx(&self) -> f64 {
        QuadExt::approx(self)
    }
}
