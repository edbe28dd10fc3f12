//! Evidence for and against 3-monotone interpolability, its exact
//! verification, and the decision engine.

mod decide;
mod evidence;
pub mod lp;
mod piecewise;

pub use decide::{decide, fourtuple_witness, Budget};
pub use evidence::{
    parse_evidence, CertTerm, CertTermJson, CertificateJson, ConeCertificate, IterationReport, Verdict,
    VerdictJson, Witness, WitnessJson,
};
pub use piecewise::{verify_3monotone_piecewise, PiecewiseParabolic, Quadratic};

use crate::error::{Error, Result};
use crate::exactmath::{quad_min_on_interval, quad_nonneg_on_interval, Polynomial, Rational};
use crate::splines::{divided_difference, divided_diff_vector, BSplineBasis, Point, PointSet};
use num_traits::{One, Signed, Zero};

/// Order of monotonicity handled by the engine.
pub const ORDER: usize = 3;

/// `(M_1(t), ..., M_n(t))` at a fixed `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentVector {
    pub t: Rational,
    pub components: Vec<Rational>,
}

impl MomentVector {
    pub fn at(basis: &BSplineBasis, t: &Rational) -> Result<Self> {
        Ok(MomentVector { t: t.clone(), components: basis.moment_vector(t)? })
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of the third divided difference through four points. Computed by
/// the recursion and, for every omitted point, by comparing against the
/// parabola through the other three; all routes must agree.
pub fn fourtuple_sign(pts: &[Point]) -> Result<i8> {
    if pts.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: pts.len() });
    }
    for i in 1..4 {
        if pts[i - 1].x >= pts[i].x {
            return Err(if pts[i - 1].x == pts[i].x {
                Error::DuplicateX(pts[i].x.to_string())
            } else {
                Error::Unsorted(i)
            });
        }
    }
    let xs: Vec<Rational> = pts.iter().map(|p| p.x.clone()).collect();
    let ys: Vec<Rational> = pts.iter().map(|p| p.y.clone()).collect();
    let direct = sign_of(&divided_difference(&xs, &ys)?);
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let oxs: Vec<Rational> = others.iter().map(|&j| xs[j].clone()).collect();
        let oys: Vec<Rational> = others.iter().map(|&j| ys[j].clone()).collect();
        let p = lagrange(&oxs, &oys);
        let s = sign_of(&(&ys[i] - p.eval(&xs[i])));
        let by_parabola = if (3 - i) % 2 == 0 { s } else { -s };
        assert_eq!(by_parabola, direct, "divided-difference sign routes disagree");
    }
    Ok(direct)
}

/// Interpolating polynomial in Lagrange form.
pub(crate) fn lagrange(xs: &[Rational], ys: &[Rational]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for l in 0..xs.len() {
        let mut basis = Polynomial::constant(Rational::one());
        for m in 0..xs.len() {
            if m != l {
                let lin = Polynomial::new(vec![-&xs[m], Rational::one()]);
                basis = (&basis * &lin).scale(&(&xs[l] - &xs[m]).recip());
            }
        }
        acc = &acc + &basis.scale(&ys[l]);
    }
    acc
}

/// True iff every 4-point subset has a nonnegative third divided difference.
pub fn all_fourtuples_nonneg(p: &PointSet) -> bool {
    first_negative_fourtuple(p).is_none()
}

/// Lexicographically first index quadruple with a negative sign.
pub fn first_negative_fourtuple(p: &PointSet) -> Option<[usize; 4]> {
    let pts = p.points();
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let quad = [pts[a].clone(), pts[b].clone(), pts[c].clone(), pts[d].clone()];
                    if fourtuple_sign(&quad).expect("point sets are sorted") < 0 {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

fn dims(p: &PointSet) -> Result<usize> {
    if p.len() < ORDER + 1 {
        return Err(Error::TooFewPoints { needed: ORDER + 1, got: p.len() });
    }
    Ok(p.len() - ORDER)
}

/// Exact check of `c_j >= 0`, `t_j` in range and `sum_j c_j M(t_j) = v`.
pub fn verify_cone_certificate(p: &PointSet, cert: &ConeCertificate) -> Result<bool> {
    let n = dims(p)?;
    if cert.terms.len() > n {
        return Err(Error::DimensionMismatch { expected: n, got: cert.terms.len() });
    }
    let basis = BSplineBasis::from_points(p, ORDER)?;
    let v = divided_diff_vector(p, ORDER)?;
    let dom = basis.domain();
    let mut sum = vec![Rational::zero(); n];
    for term in &cert.terms {
        if term.c.is_negative() || !dom.contains(&term.t) {
            return Ok(false);
        }
        for (s, m) in sum.iter_mut().zip(basis.moment_vector(&term.t)?) {
            *s += &term.c * m;
        }
    }
    Ok(sum == v)
}

/// Exact check of `sum a_i v_i = -1` and per-interval nonnegativity of
/// `sum a_i M_i`.
pub fn verify_witness(p: &PointSet, w: &Witness) -> Result<bool> {
    let n = dims(p)?;
    if w.a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.a.len() });
    }
    let v = divided_diff_vector(p, ORDER)?;
    let dot: Rational = w.a.iter().zip(&v).map(|(a, b)| a * b).sum();
    if dot != -Rational::one() {
        return Ok(false);
    }
    let basis = BSplineBasis::from_points(p, ORDER)?;
    for j in 0..basis.num_intervals() {
        if !quad_nonneg_on_interval(&basis.combination(&w.a, j), &basis.interval(j))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Global minimizer of `sum a_i M_i` over the node range when the minimum is
/// negative; the smallest minimizer wins ties.
pub fn separation_oracle(a: &[Rational], basis: &BSplineBasis) -> Result<Option<(Rational, Rational)>> {
    if a.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: a.len() });
    }
    let mut best: Option<(Rational, Rational)> = None;
    for j in 0..basis.num_intervals() {
        let (t, val) = quad_min_on_interval(&basis.combination(a, j), &basis.interval(j))?;
        if best.as_ref().is_none_or(|(_, bv)| val < *bv) {
            best = Some((t, val));
        }
    }
    Ok(best.filter(|(_, v)| v.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::splines::NodeSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ps(pairs: &[(i64, i64)]) -> PointSet {
        PointSet::from_ints(pairs).unwrap()
    }

    #[test]
    fn fourtuple_examples() {
        let pts = |p: &[(i64, i64)]| p.iter().map(|&(x, y)| Point::ints(x, y)).collect::<Vec<_>>();
        assert_eq!(fourtuple_sign(&pts(&[(-1, 0), (0, 0), (1, 1), (2, 3)])).unwrap(), 0);
        assert_eq!(fourtuple_sign(&pts(&[(-1, 0), (0, 0), (1, 1), (2, 4)])).unwrap(), 1);
        assert_eq!(fourtuple_sign(&pts(&[(-1, 0), (0, 0), (1, 1), (2, 2)])).unwrap(), -1);
        assert!(fourtuple_sign(&pts(&[(0, 0), (-1, 0), (1, 1), (2, 2)])).is_err());
    }

    #[test]
    fn fourtuple_random_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut xs: Vec<i64> = Vec::new();
            while xs.len() < 4 {
                let x = rng.gen_range(-60..60);
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            xs.sort();
            let pts: Vec<Point> =
                xs.iter().map(|&x| Point::new(rat(x, 3), rat(rng.gen_range(-200..200), rng.gen_range(1..9)))).collect();
            let xr: Vec<Rational> = pts.iter().map(|p| p.x.clone()).collect();
            let yr: Vec<Rational> = pts.iter().map(|p| p.y.clone()).collect();
            assert_eq!(fourtuple_sign(&pts).unwrap(), sign_of(&divided_difference(&xr, &yr).unwrap()));
        }
    }

    #[test]
    fn fourtuple_scan() {
        let cubic = PointSet::new((0..7).map(|j| Point::ints(j, j * j * j)).collect()).unwrap();
        assert!(all_fourtuples_nonneg(&cubic));
        let dented = ps(&[(0, 0), (1, 1), (2, 8), (3, -50), (4, 64)]);
        assert!(!all_fourtuples_nonneg(&dented));
        assert_eq!(first_negative_fourtuple(&dented), Some([0, 1, 2, 3]));
    }

    #[test]
    fn witness_examples() {
        let p0 = ps(&[(-1, 0), (0, 0), (1, 1), (2, 2)]);
        assert!(!verify_witness(&p0, &Witness { a: vec![int(0)] }).unwrap());
        assert!(verify_witness(&p0, &Witness { a: vec![int(6)] }).unwrap());
        let p0q = ps(&[(-1, 0), (0, 0), (1, 1), (2, 3)]);
        assert!(!verify_witness(&p0q, &Witness { a: vec![int(6)] }).unwrap());
        assert!(verify_witness(&p0, &Witness { a: vec![int(6), int(1)] }).is_err());
    }

    #[test]
    fn certificate_examples() {
        let parab = ps(&[(0, 1), (1, 2), (2, 5), (3, 10), (4, 17)]);
        assert!(verify_cone_certificate(&parab, &ConeCertificate::default()).unwrap());
        let zero = ConeCertificate { terms: vec![CertTerm { c: int(0), t: int(2) }] };
        assert!(verify_cone_certificate(&parab, &zero).unwrap());
        let cubic = ps(&[(0, 0), (1, 1), (2, 8), (3, 27), (4, 64)]);
        let b = BSplineBasis::from_points(&cubic, 3).unwrap();
        assert_eq!(b.moment_vector(&int(2)).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        let good = ConeCertificate { terms: vec![CertTerm { c: int(2), t: int(2) }] };
        assert!(verify_cone_certificate(&cubic, &good).unwrap());
        let bad = ConeCertificate { terms: vec![CertTerm { c: int(-2), t: int(2) }] };
        assert!(!verify_cone_certificate(&cubic, &bad).unwrap());
        let out = ConeCertificate { terms: vec![CertTerm { c: int(1), t: int(9) }] };
        assert!(!verify_cone_certificate(&cubic, &out).unwrap());
    }

    #[test]
    fn separation_examples() {
        let b = BSplineBasis::new(NodeSequence::new(vec![int(0), int(1), int(2), int(3)], 3).unwrap());
        assert_eq!(separation_oracle(&[int(1)], &b).unwrap(), None);
        assert_eq!(separation_oracle(&[int(0)], &b).unwrap(), None);
        assert_eq!(separation_oracle(&[int(-1)], &b).unwrap(), Some((rat(3, 2), rat(-3, 4))));
    }
}
