//! Exact generators for two pathological point families, and the parabola
//! geometry behind them.

mod expdigits;
mod nonlocal;

pub use expdigits::{eps_chain, gen_expdigits, EpsBracketJson, EpsTerm, ExpFamily, ExpSidecarJson};
pub use nonlocal::{gen_nonlocal, InterpolantJson, NonlocalFamily, NonlocalSidecarJson};

use crate::error::{Error, Result};
use crate::exactmath::{int, ExactScalar, Polynomial, QuadExt, Rational};
use crate::interp::{PiecewiseParabolic, Quadratic};
use crate::splines::Point;
use num_traits::{One, Signed};
use std::cmp::Ordering;

/// Unique polynomial of degree at most 2 through three points.
pub fn parabola_through(p1: &Point, p2: &Point, p3: &Point) -> Result<Polynomial> {
    let xs = [p1.x.clone(), p2.x.clone(), p3.x.clone()];
    for i in 0..3 {
        for j in i + 1..3 {
            if xs[i] == xs[j] {
                return Err(Error::DuplicateX(xs[i].to_string()));
            }
        }
    }
    Ok(crate::interp::lagrange(&xs, &[p1.y.clone(), p2.y.clone(), p3.y.clone()]))
}

fn cube_point(j: i64) -> Point {
    Point::ints(j, j * j * j)
}

/// Parabola through `(j, j^3)` for `j = i, i+1, i+2`; checked against its
/// closed form.
pub fn cubic_chord_parabola(i: i64) -> Polynomial {
    let p = parabola_through(&cube_point(i), &cube_point(i + 1), &cube_point(i + 2)).expect("distinct x");
    let closed = Polynomial::from_ints(&[i * i * i + 3 * i * i + 2 * i, -(3 * i * i + 6 * i + 2), 3 * i + 3]);
    assert_eq!(p, closed);
    p
}

/// Gaps `((i+1)^3 - chord(i+1), (i+2)^3 - chord(i+2))` where `chord` passes through
/// `(i-2, (i-2)^3 + eps)`, `(i-1, (i-1)^3)` and `(i, i^3)`.
pub fn lifted_chord_gaps(i: i64, eps: &Rational) -> (Rational, Rational) {
    let lifted = Point::new(int(i - 2), int((i - 2).pow(3)) + eps);
    let chord = parabola_through(&lifted, &cube_point(i - 1), &cube_point(i)).expect("distinct x");
    let d1 = int((i + 1).pow(3)) - chord.eval(&int(i + 1));
    let d2 = int((i + 2).pow(3)) - chord.eval(&int(i + 2));
    assert_eq!(d1, int(6) - eps);
    assert_eq!(d2, int(24) - eps * int(3));
    (d1, d2)
}

/// Parabola tangent to a base parabola and passing through two points above it.
#[derive(Clone, Debug, PartialEq)]
pub struct TangencyResult {
    pub parabola: Quadratic<QuadExt>,
    pub tangency_x: QuadExt,
    /// `parabola - base = scale * (x - tangency_x)^2`.
    pub scale: QuadExt,
}

impl TangencyResult {
    /// Rational form, when no radical is involved.
    pub fn rational_parabola(&self) -> Option<Polynomial> {
        let c: Option<Vec<Rational>> = self.parabola.c.iter().map(|q| q.to_rational()).collect();
        c.map(Polynomial::new)
    }
}

fn qe(r: Rational) -> QuadExt {
    QuadExt::from(r)
}

/// The parabola through `q1`, `q2` that touches `base` left of `q1` (the
/// one with the smaller quadratic coefficient). Requires both points above
/// `base` with `q1` the closer one, and the tangency inside `window` if given.
pub fn tangent_parabola(
    q1: &Point,
    q2: &Point,
    base: &Polynomial,
    window: Option<(&Rational, &Rational)>,
) -> Result<TangencyResult> {
    if q1.x >= q2.x {
        return Err(Error::Unsorted(1));
    }
    if base.degree().unwrap_or(0) > 2 {
        return Err(Error::DegreeTooHigh(base.degree().unwrap_or(0)));
    }
    let h1 = &q1.y - base.eval(&q1.x);
    let h2 = &q2.y - base.eval(&q2.x);
    if !h1.is_positive() || h1 >= h2 {
        return Err(Error::NoTangency);
    }
    // (x1 - t) = r (x2 - t) with r = sqrt(h1 / h2)
    let r = QuadExt::sqrt(&(&h1 / &h2));
    let one = qe(Rational::one());
    let t = (&qe(q1.x.clone()) - &(&r * &qe(q2.x.clone()))) / (&one - &r);
    let gap = &qe(q1.x.clone()) - &t;
    let scale = qe(h1.clone()) / (&gap * &gap);
    if let Some((lo, hi)) = window {
        if t.cmp_exact(&qe(lo.clone())) != Ordering::Greater || t.cmp_exact(&qe(hi.clone())) != Ordering::Less {
            return Err(Error::NoTangency);
        }
    }
    let base_q = Quadratic::<QuadExt>::from_polynomial(base)?;
    let parabola = base_q.plus(&Quadratic::square_at(&t, &scale));
    for q in [q1, q2] {
        if parabola.eval(&qe(q.x.clone())) != qe(q.y.clone()) {
            return Err(Error::Unverified("tangent parabola misses a point".into()));
        }
    }
    Ok(TangencyResult { parabola, tangency_x: t, scale })
}

/// `alpha * f + (1 - alpha) * g`, checked to stay 3-monotone.
pub fn convex_combination<S: ExactScalar>(
    f: &PiecewiseParabolic<S>,
    g: &PiecewiseParabolic<S>,
    alpha: &S,
) -> Result<PiecewiseParabolic<S>> {
    if !f.is_3monotone() || !g.is_3monotone() {
        return Err(Error::InvalidParameter("convex combination of a non-3-monotone function".into()));
    }
    let h = f.convex_combination(g, alpha)?;
    if !h.is_3monotone() {
        return Err(Error::Unverified("convex combination lost 3-monotonicity".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn parabolas() {
        let pi0 = parabola_through(&Point::ints(-1, 0), &Point::ints(0, 0), &Point::ints(1, 1)).unwrap();
        assert_eq!(pi0, Polynomial::new(vec![int(0), rat(1, 2), rat(1, 2)]));
        assert_eq!(pi0.eval(&int(2)), int(3));
        assert_eq!(cubic_chord_parabola(0), Polynomial::from_ints(&[0, -2, 3]));
        let flat = parabola_through(&Point::ints(0, 1), &Point::ints(1, 3), &Point::ints(2, 5)).unwrap();
        assert_eq!(flat.degree(), Some(1));
        assert!(parabola_through(&Point::ints(0, 1), &Point::ints(0, 3), &Point::ints(2, 5)).is_err());
    }

    #[test]
    fn chord_parabola_closed_form() {
        for i in -4..9 {
            let diff = &cubic_chord_parabola(i) - &cubic_chord_parabola(i - 2);
            let six_sq = Polynomial::from_ints(&[-i, 1]).pow(2).scale(&int(6));
            assert_eq!(diff, six_sq);
            assert_eq!(cubic_chord_parabola(i).eval(&int(i + 1)), int((i + 1).pow(3)));
        }
    }

    #[test]
    fn lifted_chord_gaps_closed_form() {
        assert_eq!(lifted_chord_gaps(5, &int(1)), (int(5), int(21)));
        assert_eq!(lifted_chord_gaps(4, &int(0)), (int(6), int(24)));
        assert_eq!(lifted_chord_gaps(3, &rat(1, 2)), (rat(11, 2), rat(45, 2)));
    }

    #[test]
    fn tangency_normalized_instance() {
        let r = tangent_parabola(&Point::ints(1, 5), &Point::ints(2, 21), &Polynomial::zero(), None).unwrap();
        let c = &r.parabola.c;
        let a = &c[2];
        let b = &c[1];
        let abar = a - &qe(int(6));
        assert!(abar.cmp_exact(&qe(rat(-1, 2))) == Ordering::Greater && abar.sign() == Ordering::Less);
        assert!(a.cmp_exact(&qe(int(5))) == Ordering::Greater && a.cmp_exact(&qe(int(6))) == Ordering::Less);
        assert!(b.cmp_exact(&qe(int(-2))) == Ordering::Greater && b.cmp_exact(&qe(rat(-1, 2))) == Ordering::Less);
        assert!(r.tangency_x.sign() == Ordering::Greater && r.tangency_x.cmp_exact(&qe(rat(1, 5))) == Ordering::Less);
        // constant term is the next chain value, 41 - sqrt(1680)
        assert_eq!(c[0].cmp_exact(&QuadExt::new(int(41), int(-1), int(1680))), Ordering::Equal);
        assert!(c[0].cmp_exact(&qe(rat(1, 5))) == Ordering::Less);
        assert_eq!(r.tangency_x, &(-b) / &(&qe(int(2)) * a));
    }

    #[test]
    fn tangency_rational_case() {
        // base pi_{i-1} = 0, points at u+2 and u+3 on (x - u - 1)^2 with u = 5
        let r = tangent_parabola(&Point::ints(7, 1), &Point::ints(8, 4), &Polynomial::zero(), None).unwrap();
        assert_eq!(r.tangency_x, qe(int(6)));
        assert_eq!(r.rational_parabola().unwrap(), Polynomial::from_ints(&[36, -12, 1]));
        assert!(tangent_parabola(&Point::ints(7, 4), &Point::ints(8, 1), &Polynomial::zero(), None).is_err());
        assert!(tangent_parabola(&Point::ints(7, 1), &Point::ints(8, 4), &Polynomial::zero(), Some((&int(0), &int(6)))).is_err());
    }

    #[test]
    fn combination_checks() {
        let f = PiecewiseParabolic::<Rational>::from_polynomial(&Polynomial::from_ints(&[0, 0, 1])).unwrap();
        let g = PiecewiseParabolic::from_polynomial(&Polynomial::from_ints(&[2, 0, 3])).unwrap();
        assert_eq!(convex_combination(&f, &g, &int(0)).unwrap(), g);
        assert_eq!(convex_combination(&f, &g, &int(1)).unwrap(), f);
        assert_eq!(convex_combination(&f, &g, &rat(1, 2)).unwrap().pieces()[0], Quadratic::from_polynomial(&Polynomial::from_ints(&[1, 0, 2])).unwrap());
    }
}
