use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int, rat, simplest_between, Polynomial, Rational};
use crate::interp::{PiecewiseParabolic, Quadratic};
use crate::splines::{Point, PointSet};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Point set whose every proper subset is 3-monotone interpolable while the
/// whole set is not, with explicit interpolants for each one-point deletion.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlocalFamily {
    /// Recursion depth `i`; the set has `2i + 2` points.
    pub level: usize,
    /// The `2i + 1` core points followed by the final point.
    pub points: PointSet,
    /// Left end of the ray where the upper parabola clears every lower one.
    pub anchor: Rational,
    /// Upper parabola of the last level; the final point lies one unit below
    /// it at `anchor`.
    pub upper: Polynomial,
    /// Lower parabola for each core point, in point order.
    pub lower: Vec<Polynomial>,
    /// `interpolants[k]` interpolates `points` without its `k`-th point.
    pub interpolants: Vec<PiecewiseParabolic>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InterpolantJson {
    pub removed: usize,
    pub breakpoints: Vec<String>,
    /// Ascending coefficients per piece.
    pub pieces: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NonlocalSidecarJson {
    pub anchor: String,
    pub upper: Vec<String>,
    pub lower: Vec<Vec<String>>,
    pub interpolants: Vec<InterpolantJson>,
}

fn coeffs(p: &Polynomial) -> Vec<String> {
    (0..3).map(|i| format_rational(&p.coeff(i))).collect()
}

impl NonlocalFamily {
    pub fn core(&self) -> PointSet {
        self.points.without(self.points.len() - 1)
    }

    pub fn sidecar(&self) -> NonlocalSidecarJson {
        NonlocalSidecarJson {
            anchor: format_rational(&self.anchor),
            upper: coeffs(&self.upper),
            lower: self.lower.iter().map(coeffs).collect(),
            interpolants: self
                .interpolants
                .iter()
                .enumerate()
                .map(|(k, g)| InterpolantJson {
                    removed: k,
                    breakpoints: g.breakpoints().iter().map(format_rational).collect(),
                    pieces: g.pieces().iter().map(|q| q.c.clone().map(|c| format_rational(&c))).collect(),
                })
                .collect(),
        }
    }
}

fn quad(p: &Polynomial) -> Quadratic<Rational> {
    Quadratic::from_polynomial(p).expect("degree at most 2")
}

fn shifted_square(center: &Rational, scale: &Rational) -> Polynomial {
    Polynomial::new(vec![-center.clone(), int(1)]).pow(2).scale(scale)
}

struct Level {
    points: Vec<Point>,
    anchor: Rational,
    upper: Polynomial,
    lower: Vec<Polynomial>,
    /// Interpolant of all points, equal to `upper` from the last tangency on.
    full: PiecewiseParabolic,
    /// Interpolant without point `k`, equal to `lower[k]` on `[anchor, oo)`.
    partial: Vec<PiecewiseParabolic>,
}

fn base_level() -> Level {
    let points: Vec<Point> = (0..3).map(|x| Point::ints(x, 0)).collect();
    let lower: Vec<Polynomial> = (0..3)
        .map(|k| {
            let rest: Vec<i64> = (0..3).filter(|&x| x != k).collect();
            // -(x - a)(x - b) through the two remaining points
            -&(&Polynomial::from_ints(&[-rest[0], 1]) * &Polynomial::from_ints(&[-rest[1], 1]))
        })
        .collect();
    Level {
        points,
        anchor: int(5),
        upper: Polynomial::zero(),
        partial: lower.iter().map(|p| PiecewiseParabolic::from_polynomial(p).expect("quadratic")).collect(),
        lower,
        full: PiecewiseParabolic::from_polynomial(&Polynomial::zero()).expect("quadratic"),
    }
}

/// Joins `g` (a parabola on `[anchor, oo)`) to the higher parabola `target`
/// with two C^1 splices inside `[u, u + 2]`, assuming `target - g` is a
/// positive definite quadratic whose vertex `mu` (relative to `u`) lies in
/// `(0, 2)` and whose relative depth `var` is below `mu (2 - mu)`.
fn two_knot_splice(g: &PiecewiseParabolic, u: &Rational, target: &Polynomial) -> Result<PiecewiseParabolic> {
    let right = g.pieces().last().expect("nonempty").clone();
    let gap = target - &Polynomial::new(right.c.to_vec());
    // gap(u + y) = lead ((y - mu)^2 + var)
    let local = gap.compose_affine(u, &int(1));
    let lead = local.coeff(2);
    let mu = -local.coeff(1) / (&lead * int(2));
    let var = local.coeff(0) / &lead - &mu * &mu;
    let two = int(2);
    if !lead.is_positive() || !mu.is_positive() || mu >= two || var.is_negative() || var >= &mu * (&two - &mu) {
        return Err(Error::NoTangency);
    }
    // s2 = mu + h and s1 = mu - var / h, with 0 <= s1 and s2 <= 2
    let h = simplest_between(&(&var / &mu), &(&two - &mu));
    let (s1, s2) = (&mu - &var / &h, &mu + &h);
    let kink = &lead * &h * &h / (&h * &h + &var);
    let (t1, t2) = (u + &s1, u + &s2);
    let middle = right.plus(&quad(&shifted_square(&t1, &kink)));
    Ok(g.splice(t1, middle).splice(t2, quad(target)))
}

/// Chooses a rational weight `beta` so that `d + beta e` is a shallow
/// positive quadratic whose vertex sits in `(0, 2)`, by bisection on the sign
/// of its discriminant. `d` and `e` are in the local variable `y = x - u`.
fn shallow_weight(d: &Polynomial, e: &Polynomial) -> Result<Rational> {
    let mix = |beta: &Rational| d + &e.scale(beta);
    let disc = |p: &Polynomial| p.coeff(1) * p.coeff(1) - int(4) * p.coeff(2) * p.coeff(0);
    let acceptable = |p: &Polynomial| {
        let lead = p.coeff(2);
        if !lead.is_positive() || disc(p).is_positive() {
            return false;
        }
        let mu = -p.coeff(1) / (&lead * int(2));
        let var = p.coeff(0) / &lead - &mu * &mu;
        mu.is_positive() && mu < int(2) && var * int(2) < &mu * (int(2) - &mu)
    };
    let (mut lo, mut hi) = (Rational::zero(), int(1));
    if !disc(&mix(&lo)).is_positive() || disc(&mix(&hi)).is_positive() {
        return Err(Error::NoTangency);
    }
    for _ in 0..256 {
        if acceptable(&mix(&hi)) {
            return Ok(hi);
        }
        let mid = (&lo + &hi) / int(2);
        if disc(&mix(&mid)).is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoTangency)
}

fn next_level(prev: &Level) -> Result<Level> {
    let u0 = prev.anchor.clone();
    let y = Polynomial::new(vec![-u0.clone(), int(1)]);
    let upper = &prev.upper + &shifted_square(&(&u0 + int(1)), &int(1));
    let new_points = [&u0 + int(2), &u0 + int(3)].map(|x| Point::new(x.clone(), upper.eval(&x)));
    let mut points = prev.points.clone();
    points.extend(new_points.iter().cloned());

    let mut lower = Vec::with_capacity(points.len());
    let mut partial = Vec::with_capacity(points.len());
    for (k, old) in prev.lower.iter().enumerate() {
        // through (u0, lowerrev(u0)) and both new points
        let target = &prev.upper + &(&y.pow(2).scale(&rat(5, 6)) - &y.scale(&rat(7, 6)));
        let to_local = |p: &Polynomial| p.compose_affine(&u0, &int(1));
        let d = to_local(&(&target - &prev.upper));
        let e = to_local(&(&prev.upper - old));
        let beta = shallow_weight(&d, &e)?;
        let g = super::convex_combination(&prev.full, &prev.partial[k], &(int(1) - &beta))?;
        partial.push(two_knot_splice(&g, &u0, &target)?);
        lower.push(target);
    }
    for (k, scale) in [rat(4, 9), rat(1, 4)].into_iter().enumerate() {
        let target = &prev.upper + &y.pow(2).scale(&scale);
        let other = &new_points[1 - k];
        debug_assert_eq!(target.eval(&other.x), other.y);
        partial.push(prev.full.splice(u0.clone(), quad(&target)));
        lower.push(target);
    }
    let full = prev.full.splice(&u0 + int(1), quad(&upper));
    Ok(Level { points, anchor: &u0 + int(5), upper, lower, full, partial })
}

/// Appends `scale (x - t0)^2` after the last point and breakpoint so the
/// interpolant also passes through `q`.
fn reach(g: &PiecewiseParabolic, last_x: &Rational, q: &Point) -> PiecewiseParabolic {
    let t0 = g.breakpoints().last().map_or(last_x.clone(), |b| b.clone().max(last_x.clone()));
    let right = g.pieces().last().expect("nonempty").clone();
    let gap = &q.y - right.eval(&q.x);
    let dist = &q.x - &t0;
    let scale = gap / (&dist * &dist);
    g.splice(t0.clone(), right.plus(&quad(&shifted_square(&t0, &scale))))
}

/// Family with `n` points (`n` even, at least 4).
pub fn gen_nonlocal(n: usize) -> Result<NonlocalFamily> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n must be even and at least 4, got {n}")));
    }
    let level = n / 2 - 1;
    let mut cur = base_level();
    for _ in 1..level {
        cur = next_level(&cur)?;
    }
    let q = Point::new(cur.anchor.clone(), cur.upper.eval(&cur.anchor) - int(1));
    let mut all = cur.points.clone();
    all.push(q.clone());
    let points = PointSet::new(all)?;

    let mut interpolants = Vec::with_capacity(n);
    for (k, g) in cur.partial.iter().enumerate() {
        let last_x = cur.points.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.x.clone()).max().expect("points");
        interpolants.push(reach(g, &last_x, &q));
    }
    interpolants.push(cur.full.clone());
    Ok(NonlocalFamily { level, points, anchor: cur.anchor, upper: cur.upper, lower: cur.lower, interpolants })
}
