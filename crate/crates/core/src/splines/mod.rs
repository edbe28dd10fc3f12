//! Divided differences and B-spline bases over rational node sequences.

mod points;

pub use points::{Point, PointSet, PointSetJson};

use crate::error::{Error, Result};
use crate::exactmath::{Interval, Polynomial, Rational};
use num_traits::{One, Zero};

/// Third (or generally k-th) divided differences over sliding windows.
pub type DividedDiffVector = Vec<Rational>;

fn check_distinct(xs: &[Rational]) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] == xs[j] {
                return Err(Error::DuplicateX(xs[i].to_string()));
            }
        }
    }
    Ok(())
}

/// The standard recursion over arbitrary values supporting subtraction and
/// division by a rational; shared by scalar and symbolic callers.
fn divided_difference_by<V: Clone>(
    xs: &[Rational],
    ys: &[V],
    sub: impl Fn(&V, &V) -> V,
    div: impl Fn(&V, &Rational) -> V,
) -> V {
    let mut table: Vec<V> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let num = sub(&table[i + 1], &table[i]);
            table[i] = div(&num, &(&xs[i + level] - &xs[i]));
        }
    }
    table.swap_remove(0)
}

/// `[x_0, ..., x_k] f` for values `ys[i] = f(xs[i])`. The abscissae need not be
/// sorted but must be pairwise distinct.
pub fn divided_difference(xs: &[Rational], ys: &[Rational]) -> Result<Rational> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), got: ys.len() });
    }
    if xs.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    check_distinct(xs)?;
    Ok(divided_difference_by(xs, ys, |a, b| a - b, |a, d| a / d))
}

/// `v_i = [x_i, ..., x_{i+k}] f` over every window of `k + 1` consecutive points.
pub fn divided_diff_vector(p: &PointSet, k: usize) -> Result<DividedDiffVector> {
    if p.len() < k + 1 {
        return Err(Error::TooFewPoints { needed: k + 1, got: p.len() });
    }
    let xs = p.xs();
    let ys = p.ys();
    Ok((0..p.len() - k)
        .map(|i| divided_difference_by(&xs[i..=i + k], &ys[i..=i + k], |a, b| a - b, |a, d| a / d))
        .collect())
}

/// Strictly increasing nodes `x_1 < ... < x_{n+k}` with spline order `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSequence {
    nodes: Vec<Rational>,
    order: usize,
}

impl NodeSequence {
    pub fn new(nodes: Vec<Rational>, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("spline order must be at least 1".into()));
        }
        if nodes.len() < order + 1 {
            return Err(Error::TooFewPoints { needed: order + 1, got: nodes.len() });
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::DuplicateX(w[0].to_string()));
            }
            if w[0] > w[1] {
                return Err(Error::Unsorted(i + 1));
            }
        }
        Ok(NodeSequence { nodes, order })
    }

    pub fn from_points(p: &PointSet, order: usize) -> Result<Self> {
        Self::new(p.xs(), order)
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of basis functions `n`.
    pub fn dim(&self) -> usize {
        self.nodes.len() - self.order
    }
}

/// B-splines `M_i(t) = k [x_i, ..., x_{i+k}] max(0, x - t)^{k-1}`, stored as one
/// exact polynomial per basis function and knot interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSplineBasis {
    nodes: NodeSequence,
    // pieces[i][j]: M_i on [x_j, x_{j+1}] (0-based), zero outside the support
    pieces: Vec<Vec<Polynomial>>,
}

impl BSplineBasis {
    pub fn new(nodes: NodeSequence) -> Self {
        let k = nodes.order;
        let n = nodes.dim();
        let xs = &nodes.nodes;
        let intervals = xs.len() - 1;
        let kk = Rational::from_integer((k as i64).into());
        let mut pieces = vec![vec![Polynomial::zero(); intervals]; n];
        for (i, row) in pieces.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate().take(i + k).skip(i) {
                // For t in [x_j, x_{j+1}], max(0, x_l - t)^{k-1} is (x_l - t)^{k-1}
                // exactly when l > j and vanishes otherwise.
                let window = &xs[i..=i + k];
                let values: Vec<Polynomial> = (i..=i + k)
                    .map(|l| {
                        if l > j {
                            let lin = Polynomial::new(vec![xs[l].clone(), -Rational::one()]);
                            lin.pow(k as u32 - 1)
                        } else {
                            Polynomial::zero()
                        }
                    })
                    .collect();
                let dd = divided_difference_by(window, &values, |a, b| a - b, |a, d| a.scale(&d.recip()));
                *slot = dd.scale(&kk);
            }
        }
        BSplineBasis { nodes, pieces }
    }

    pub fn from_points(p: &PointSet, k: usize) -> Result<Self> {
        Ok(Self::new(NodeSequence::from_points(p, k)?))
    }

    pub fn nodes(&self) -> &NodeSequence {
        &self.nodes
    }

    pub fn order(&self) -> usize {
        self.nodes.order
    }

    pub fn dim(&self) -> usize {
        self.pieces.len()
    }

    pub fn num_intervals(&self) -> usize {
        self.nodes.nodes.len() - 1
    }

    pub fn interval(&self, j: usize) -> Interval {
        Interval::new(self.nodes.nodes[j].clone(), self.nodes.nodes[j + 1].clone()).expect("nodes increase")
    }

    /// Whole node range `[x_1, x_{n+k}]`.
    pub fn domain(&self) -> Interval {
        let xs = &self.nodes.nodes;
        Interval::new(xs[0].clone(), xs[xs.len() - 1].clone()).expect("nodes increase")
    }

    pub fn piece(&self, i: usize, j: usize) -> &Polynomial {
        &self.pieces[i][j]
    }

    /// Basis indices whose support meets knot interval `j`.
    pub fn active(&self, j: usize) -> std::ops::Range<usize> {
        let k = self.order();
        j.saturating_sub(k - 1)..(j + 1).min(self.dim())
    }

    /// Knot interval used to evaluate at `t`: right piece at interior knots,
    /// left piece at the last node.
    pub fn locate(&self, t: &Rational) -> Result<usize> {
        let xs = &self.nodes.nodes;
        if t < &xs[0] || t > &xs[xs.len() - 1] {
            return Err(Error::OutOfRange {
                t: t.to_string(),
                lo: xs[0].to_string(),
                hi: xs[xs.len() - 1].to_string(),
            });
        }
        let pos = xs.partition_point(|x| x <= t);
        Ok(pos.saturating_sub(1).min(xs.len() - 2))
    }

    pub fn eval(&self, i: usize, t: &Rational) -> Result<Rational> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, n: self.dim() });
        }
        let j = self.locate(t)?;
        Ok(self.pieces[i][j].eval(t))
    }

    /// `(M_1(t), ..., M_n(t))`.
    pub fn moment_vector(&self, t: &Rational) -> Result<Vec<Rational>> {
        let j = self.locate(t)?;
        Ok((0..self.dim()).map(|i| self.pieces[i][j].eval(t)).collect())
    }

    /// `sum_i a_i p_ij` on knot interval `j`.
    pub fn combination(&self, a: &[Rational], j: usize) -> Polynomial {
        let mut acc = Polynomial::zero();
        for i in self.active(j) {
            if !a[i].is_zero() {
                acc = &acc + &self.pieces[i][j].scale(&a[i]);
            }
        }
        acc
    }
}

/// Exact `M_i(t)`.
pub fn eval_bspline(basis: &BSplineBasis, i: usize, t: &Rational) -> Result<Rational> {
    basis.eval(i, t)
}

pub fn bspline_basis(nodes: NodeSequence) -> BSplineBasis {
    BSplineBasis::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn divided_difference_examples() {
        let xs = ints(&[0, 1, 2, 3]);
        assert_eq!(divided_difference(&xs, &ints(&[0, 1, 8, 27])).unwrap(), int(1));
        assert_eq!(divided_difference(&xs, &ints(&[0, 1, 4, 9])).unwrap(), int(0));
        assert_eq!(divided_difference(&ints(&[-1, 0, 1, 2]), &ints(&[0, 0, 1, 3])).unwrap(), int(0));
        assert_eq!(divided_difference(&ints(&[1, 1]), &ints(&[0, 1])), Err(Error::DuplicateX("1".into())));
    }

    // Independent oracle: sum_l f(x_l) / prod_{m != l} (x_l - x_m).
    fn dd_oracle(xs: &[Rational], ys: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for l in 0..xs.len() {
            let mut den = Rational::one();
            for m in 0..xs.len() {
                if m != l {
                    den *= &xs[l] - &xs[m];
                }
            }
            s += &ys[l] / den;
        }
        s
    }

    #[test]
    fn divided_diff_vector_examples() {
        let parab = PointSet::new((0..6).map(|j| Point::new(int(j), int(2 * j * j - j + 3))).collect()).unwrap();
        assert!(divided_diff_vector(&parab, 3).unwrap().iter().all(|v| v.is_zero()));
        let cubic = PointSet::from_ints(&[(0, 0), (1, 1), (2, 8), (3, 27), (4, 64)]).unwrap();
        assert_eq!(divided_diff_vector(&cubic, 3).unwrap(), vec![int(1), int(1)]);
        let p0 = PointSet::from_ints(&[(-1, 0), (0, 0), (1, 1), (2, 2)]).unwrap();
        let v = divided_diff_vector(&p0, 3).unwrap();
        assert_eq!(v, vec![dd_oracle(&p0.xs(), &p0.ys())]);
        assert_eq!(v, vec![rat(-1, 6)]);
        assert!(divided_diff_vector(&p0, 4).is_err());
    }

    #[test]
    fn bspline_examples() {
        let b = BSplineBasis::new(NodeSequence::new(ints(&[0, 1, 2, 3]), 3).unwrap());
        assert_eq!(b.eval(0, &int(0)).unwrap(), int(0));
        assert_eq!(b.eval(0, &int(3)).unwrap(), int(0));
        assert_eq!(b.eval(0, &rat(3, 2)).unwrap(), rat(3, 4));
        let total: Rational = (0..3).map(|j| b.piece(0, j).integrate(&b.interval(j))).sum();
        assert_eq!(total, int(1));
        assert!(b.eval(0, &int(4)).is_err());
        assert!(b.eval(1, &int(1)).is_err());

        // brute force: 3 * [0,1,2,3] max(0, x - 3/2)^2
        let t = rat(3, 2);
        let ys: Vec<Rational> = (0..4)
            .map(|x| {
                let d = int(x) - &t;
                if d > Rational::zero() { &d * &d } else { Rational::zero() }
            })
            .collect();
        assert_eq!(int(3) * dd_oracle(&ints(&[0, 1, 2, 3]), &ys), rat(3, 4));

        let b6 = BSplineBasis::new(NodeSequence::new(ints(&[0, 1, 2, 3, 4, 5]), 3).unwrap());
        for s in 0..=30 {
            let t = rat(s, 10);
            assert_eq!(b6.eval(1, &(&t + int(1))).unwrap(), b6.eval(0, &t).unwrap());
        }
        for i in 0..3 {
            assert_eq!(b6.eval(i, &int(0)).unwrap(), int(0));
        }
    }

    #[test]
    fn generic_order() {
        // cubic B-spline on unit-spaced nodes peaks at 2/3
        let b = BSplineBasis::new(NodeSequence::new(ints(&[0, 1, 2, 3, 4]), 4).unwrap());
        let total: Rational = (0..4).map(|j| b.piece(0, j).integrate(&b.interval(j))).sum();
        assert_eq!(total, int(1));
        assert_eq!(b.eval(0, &int(2)).unwrap(), rat(2, 3));
    }

    fn distinct_xs(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::btree_set(-400i64..400, n).prop_map(|s| s.into_iter().map(|x| rat(x, 7)).collect())
    }

    proptest! {
        #[test]
        fn permutation_symmetry(xs in distinct_xs(5), ys in prop::collection::vec(-50i64..50, 5), rot in 0usize..5) {
            let ys: Vec<Rational> = ys.into_iter().map(int).collect();
            let base = divided_difference(&xs, &ys).unwrap();
            let mut idx: Vec<usize> = (0..5).collect();
            idx.rotate_left(rot);
            idx.swap(0, 4);
            let px: Vec<_> = idx.iter().map(|&i| xs[i].clone()).collect();
            let py: Vec<_> = idx.iter().map(|&i| ys[i].clone()).collect();
            prop_assert_eq!(divided_difference(&px, &py).unwrap(), base.clone());
            prop_assert_eq!(base, dd_oracle(&xs, &ys));
        }

        #[test]
        fn annihilation_and_leading_coefficient(xs in distinct_xs(5), cs in prop::collection::vec(-20i64..20, 5)) {
            let full = Polynomial::from_ints(&cs);
            let low = Polynomial::from_ints(&cs[..4]);
            let fy: Vec<_> = xs.iter().map(|x| full.eval(x)).collect();
            let ly: Vec<_> = xs.iter().map(|x| low.eval(x)).collect();
            prop_assert_eq!(divided_difference(&xs, &fy).unwrap(), int(cs[4]));
            prop_assert!(divided_difference(&xs, &ly).unwrap().is_zero());
        }
    }
}
