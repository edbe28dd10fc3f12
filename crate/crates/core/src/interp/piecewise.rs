use crate::error::{Error, Result};
use crate::exactmath::{ExactScalar, Polynomial, Rational};
use crate::splines::PointSet;
use std::cmp::Ordering;
use std::fmt;

/// `c0 + c1 x + c2 x^2` with coefficients in an exact ordered field.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic<S> {
    pub c: [S; 3],
}

impl<S: ExactScalar> Quadratic<S> {
    pub fn new(c0: S, c1: S, c2: S) -> Self {
        Quadratic { c: [c0, c1, c2] }
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        if let Some(d) = p.degree() {
            if d > 2 {
                return Err(Error::DegreeTooHigh(d));
            }
        }
        Ok(Quadratic::new(
            S::from_rational(p.coeff(0)),
            S::from_rational(p.coeff(1)),
            S::from_rational(p.coeff(2)),
        ))
    }

    pub fn eval(&self, x: &S) -> S {
        self.c[2].times(x).plus(&self.c[1]).times(x).plus(&self.c[0])
    }

    pub fn slope(&self, x: &S) -> S {
        let two = S::from_rational(Rational::from_integer(2.into()));
        two.times(&self.c[2]).times(x).plus(&self.c[1])
    }

    pub fn leading(&self) -> &S {
        &self.c[2]
    }

    pub fn plus(&self, o: &Self) -> Self {
        Quadratic::new(self.c[0].plus(&o.c[0]), self.c[1].plus(&o.c[1]), self.c[2].plus(&o.c[2]))
    }

    pub fn scaled(&self, s: &S) -> Self {
        Quadratic::new(self.c[0].times(s), self.c[1].times(s), self.c[2].times(s))
    }

    /// `scale * (x - center)^2`.
    pub fn square_at(center: &S, scale: &S) -> Self {
        let two = S::from_rational(Rational::from_integer(2.into()));
        Quadratic::new(
            scale.times(center).times(center),
            scale.times(&two).times(center).negated(),
            scale.clone(),
        )
    }
}

impl<S: ExactScalar> fmt::Display for Quadratic<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})x^2 + ({})x + ({})", self.c[2], self.c[1], self.c[0])
    }
}

/// Piecewise quadratic on the whole line with increasing breakpoints; the
/// first and last pieces are unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseParabolic<S = Rational> {
    breakpoints: Vec<S>,
    pieces: Vec<Quadratic<S>>,
}

impl<S: ExactScalar> PiecewiseParabolic<S> {
    pub fn new(breakpoints: Vec<S>, pieces: Vec<Quadratic<S>>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::DimensionMismatch { expected: breakpoints.len() + 1, got: pieces.len() });
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0].cmp_exact(&w[1]) != Ordering::Less {
                return Err(Error::Unsorted(i + 1));
            }
        }
        Ok(PiecewiseParabolic { breakpoints, pieces })
    }

    pub fn parabola(q: Quadratic<S>) -> Self {
        PiecewiseParabolic { breakpoints: vec![], pieces: vec![q] }
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        Ok(Self::parabola(Quadratic::from_polynomial(p)?))
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Quadratic<S>] {
        &self.pieces
    }

    /// Index of the piece used at `x` (the right one at a breakpoint).
    pub fn piece_index(&self, x: &S) -> usize {
        self.breakpoints.iter().take_while(|b| b.cmp_exact(x) != Ordering::Greater).count()
    }

    pub fn eval(&self, x: &S) -> S {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn eval_rational(&self, x: &Rational) -> S {
        self.eval(&S::from_rational(x.clone()))
    }

    /// Keeps everything left of `at` and continues with `piece` from `at` on.
    pub fn splice(&self, at: S, piece: Quadratic<S>) -> Self {
        let keep = self.breakpoints.iter().take_while(|b| b.cmp_exact(&at) == Ordering::Less).count();
        let mut breakpoints = self.breakpoints[..keep].to_vec();
        let mut pieces = self.pieces[..=keep].to_vec();
        breakpoints.push(at);
        pieces.push(piece);
        PiecewiseParabolic { breakpoints, pieces }
    }

    /// Continuity, continuous slope, and nondecreasing leading coefficients:
    /// together these make the derivative convex.
    pub fn is_3monotone(&self) -> bool {
        self.breakpoints.iter().enumerate().all(|(i, b)| {
            let (l, r) = (&self.pieces[i], &self.pieces[i + 1]);
            l.eval(b) == r.eval(b)
                && l.slope(b) == r.slope(b)
                && l.leading().cmp_exact(r.leading()) != Ordering::Greater
        })
    }

    pub fn interpolates(&self, p: &PointSet) -> bool {
        p.points().iter().all(|pt| self.eval_rational(&pt.x) == S::from_rational(pt.y.clone()))
    }

    /// Pointwise `alpha * self + (1 - alpha) * other` on merged breakpoints.
    pub fn convex_combination(&self, other: &Self, alpha: &S) -> Result<Self> {
        let zero = S::from_rational(Rational::from_integer(0.into()));
        let one = S::from_rational(Rational::from_integer(1.into()));
        if alpha.cmp_exact(&zero) == Ordering::Less || alpha.cmp_exact(&one) == Ordering::Greater {
            return Err(Error::InvalidParameter(format!("convex weight {alpha} outside [0, 1]")));
        }
        let beta = one.minus(alpha);
        let mut merged: Vec<S> = self.breakpoints.iter().chain(other.breakpoints.iter()).cloned().collect();
        merged.sort_by(|a, b| a.cmp_exact(b));
        merged.dedup_by(|a, b| a.cmp_exact(b) == Ordering::Equal);
        let mut pieces = Vec::with_capacity(merged.len() + 1);
        for idx in 0..=merged.len() {
            // any representative point of the segment selects the right pieces
            let (i, j) = if idx == 0 {
                (0, 0)
            } else {
                (self.piece_index(&merged[idx - 1]), other.piece_index(&merged[idx - 1]))
            };
            pieces.push(self.pieces[i].scaled(alpha).plus(&other.pieces[j].scaled(&beta)));
        }
        Self::new(merged, pieces)
    }
}

/// True iff `g` passes through every point of `p` and is 3-monotone.
pub fn verify_3monotone_piecewise<S: ExactScalar>(p: &PointSet, g: &PiecewiseParabolic<S>) -> bool {
    g.is_3monotone() && g.interpolates(p)
}
