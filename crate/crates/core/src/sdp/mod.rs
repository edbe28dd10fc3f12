//! Block-diagonal semidefinite formulation of the witness search, its sparse
//! text encoding, and the doubly exponential toy instance.
//!
//! On each knot interval rescaled to `[-1, 1]`, the combination
//! `sum_i a_i p_ij(t)` must be nonnegative, which holds exactly when it equals
//! `T^T Q T + (1 - t^2) S^T R S` with `T = (1, t, t^2)`, `S = (1, t)` and
//! `Q, R` positive semidefinite. Free coefficients are split as
//! `a_i = a+_i - a-_i` with nonnegative 1x1 blocks.

mod sparse;

pub use sparse::{parse_sparse, write_sparse, RATIONAL_MARKER};

use crate::error::{Error, Result};
use crate::exactmath::{int, pow2, Polynomial, Rational};
use crate::interp::{verify_witness, Witness};
use crate::splines::{divided_diff_vector, BSplineBasis, PointSet};
use num_traits::{One, Signed, Zero};

/// Where each polynomial must be nonnegative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The rescaled knot interval `[-1, 1]`.
    UnitInterval,
    /// All of the real line.
    RealLine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPositivityInstance {
    /// `polys[i][j]`: basis function `i` on interval `j`, in the local variable.
    pub polys: Vec<Vec<Polynomial>>,
    pub v: Vec<Rational>,
    /// `(midpoint, half_width)` with `x = midpoint + half_width * t`.
    pub maps: Vec<(Rational, Rational)>,
    pub domain: Domain,
}

impl NonPositivityInstance {
    pub fn n(&self) -> usize {
        self.polys.len()
    }

    pub fn m(&self) -> usize {
        self.polys.first().map_or(0, Vec::len)
    }

    /// `sum_i a_i polys[i][j]`.
    pub fn combination(&self, a: &[Rational], j: usize) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, ai) in a.iter().enumerate() {
            acc = &acc + &self.polys[i][j].scale(ai);
        }
        acc
    }
}

/// Rescales every B-spline piece of `p` to `[-1, 1]`.
pub fn build_instance(p: &PointSet, k: usize) -> Result<NonPositivityInstance> {
    let basis = BSplineBasis::from_points(p, k)?;
    let v = divided_diff_vector(p, k)?;
    let maps: Vec<(Rational, Rational)> = (0..basis.num_intervals())
        .map(|j| {
            let iv = basis.interval(j);
            (iv.midpoint(), iv.width() / int(2))
        })
        .collect();
    let polys = (0..basis.dim())
        .map(|i| maps.iter().enumerate().map(|(j, (mid, half))| basis.piece(i, j).compose_affine(mid, half)).collect())
        .collect();
    Ok(NonPositivityInstance { polys, v, maps, domain: Domain::UnitInterval })
}

/// Entry `(block, row, col, value)` of a constraint matrix with `row <= col`,
/// 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub entries: Vec<Entry>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub size: usize,
}

/// Feasibility SDP: find PSD blocks `X` with `<F_c, X> = rhs_c` for all `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdpProblem {
    pub blocks: Vec<Block>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn entry_count(&self) -> usize {
        self.constraints.iter().map(|c| c.entries.len()).sum()
    }

    pub fn block_count(&self, size: usize) -> usize {
        self.blocks.iter().filter(|b| b.size == size).count()
    }
}

fn push(entries: &mut Vec<Entry>, block: usize, row: usize, col: usize, value: Rational) {
    if !value.is_zero() {
        entries.push(Entry { block, row, col, value });
    }
}

/// Coefficient matching for `k = 3`: five equations per interval (powers
/// `t^0..t^4`) and one for `sum_i a_i v_i = -1`.
pub fn build_sdp(inst: &NonPositivityInstance) -> Result<SdpProblem> {
    for row in &inst.polys {
        for p in row {
            if let Some(d) = p.degree() {
                if d > 2 {
                    return Err(Error::DegreeTooHigh(d));
                }
            }
        }
    }
    let (n, m) = (inst.n(), inst.m());
    let with_r = inst.domain == Domain::UnitInterval;
    let mut blocks = Vec::new();
    let mut q_block = Vec::with_capacity(m);
    let mut r_block = Vec::with_capacity(m);
    for j in 0..m {
        q_block.push(blocks.len());
        blocks.push(Block { label: format!("Q{}", j + 1), size: 3 });
        if with_r {
            r_block.push(blocks.len());
            blocks.push(Block { label: format!("R{}", j + 1), size: 2 });
        }
    }
    let plus0 = blocks.len();
    for i in 0..n {
        blocks.push(Block { label: format!("a+{}", i + 1), size: 1 });
    }
    let minus0 = blocks.len();
    for i in 0..n {
        blocks.push(Block { label: format!("a-{}", i + 1), size: 1 });
    }

    let mut constraints = Vec::with_capacity(5 * m + 1);
    for j in 0..m {
        for r in 0..5usize {
            let mut e = Vec::new();
            for a in 0..3usize {
                for b in a..3 {
                    if a + b == r {
                        push(&mut e, q_block[j], a, b, -Rational::one());
                    }
                }
            }
            if with_r {
                for a in 0..2usize {
                    for b in a..2 {
                        if a + b == r {
                            push(&mut e, r_block[j], a, b, -Rational::one());
                        }
                        if a + b + 2 == r {
                            push(&mut e, r_block[j], a, b, Rational::one());
                        }
                    }
                }
            }
            for i in 0..n {
                let c = inst.polys[i][j].coeff(r);
                push(&mut e, plus0 + i, 0, 0, c.clone());
                push(&mut e, minus0 + i, 0, 0, -c);
            }
            e.sort();
            constraints.push(Constraint { entries: e, rhs: Rational::zero() });
        }
    }
    let mut e = Vec::new();
    for (i, vi) in inst.v.iter().enumerate() {
        push(&mut e, plus0 + i, 0, 0, vi.clone());
        push(&mut e, minus0 + i, 0, 0, -vi);
    }
    e.sort();
    constraints.push(Constraint { entries: e, rhs: -Rational::one() });
    Ok(SdpProblem { blocks, constraints })
}

pub type Matrix = Vec<Vec<Rational>>;

/// Values for every block, each a dense symmetric matrix.
pub type SdpPoint = Vec<Matrix>;

fn det(mut a: Matrix) -> Rational {
    let n = a.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            for k in c..n {
                let s = &f * &a[c][k];
                a[r][k] -= s;
            }
        }
    }
    d
}

/// Exact PSD test: every principal minor is nonnegative.
pub fn is_psd(x: &[Vec<Rational>]) -> bool {
    let n = x.len();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub = idx.iter().map(|&r| idx.iter().map(|&c| x[r][c].clone()).collect()).collect();
        !det(sub).is_negative()
    })
}

/// Exact check of every equality and every PSD condition.
pub fn check_point(problem: &SdpProblem, x: &SdpPoint) -> bool {
    if x.len() != problem.blocks.len() || x.iter().zip(&problem.blocks).any(|(m, b)| m.len() != b.size) {
        return false;
    }
    let sym = x.iter().all(|m| (0..m.len()).all(|r| (0..m.len()).all(|c| m[r][c] == m[c][r])));
    sym && x.iter().all(|m| is_psd(m))
        && problem.constraints.iter().all(|con| {
            let lhs: Rational = con
                .entries
                .iter()
                .map(|e| {
                    let v = &e.value * &x[e.block][e.row][e.col];
                    if e.row == e.col {
                        v
                    } else {
                        v * int(2)
                    }
                })
                .sum();
            lhs == con.rhs
        })
}

/// Gram matrices for a quadratic `A t^2 + B t + C` that is nonnegative on
/// `[-1, 1]` (or on the whole line for `RealLine`).
fn sos_blocks(p: &Polynomial, domain: Domain) -> Result<(Matrix, Matrix)> {
    let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let globally = !a.is_negative() && !c.is_negative() && &b * &b <= int(4) * &a * &c;
    let lambda = if globally {
        Rational::zero()
    } else if domain == Domain::RealLine {
        return Err(Error::Unverified("quadratic is negative somewhere on the line".into()));
    } else {
        (&c - &a) / int(2)
    };
    let half_b = &b / int(2);
    let zero = Rational::zero();
    let q = vec![
        vec![&c - &lambda, half_b.clone(), zero.clone()],
        vec![half_b, &a + &lambda, zero.clone()],
        vec![zero.clone(), zero.clone(), zero.clone()],
    ];
    let r = vec![vec![lambda, zero.clone()], vec![zero.clone(), zero]];
    if !is_psd(&q) || !is_psd(&r) {
        return Err(Error::Unverified("quadratic is negative on the interval".into()));
    }
    Ok((q, r))
}

/// Feasible SDP point built from coefficients `a` by completing the square
/// on every interval.
pub fn sdp_point(inst: &NonPositivityInstance, a: &[Rational]) -> Result<SdpPoint> {
    if a.len() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), got: a.len() });
    }
    let mut x = Vec::new();
    for j in 0..inst.m() {
        let (q, r) = sos_blocks(&inst.combination(a, j), inst.domain)?;
        x.push(q);
        if inst.domain == Domain::UnitInterval {
            x.push(r);
        }
    }
    for sign in [1, -1] {
        for ai in a {
            let part = (ai * int(sign)).max(Rational::zero());
            x.push(vec![vec![part]]);
        }
    }
    Ok(x)
}

/// Instance with `n = m + 1` coefficients on the whole line: the constant
/// `a_2 - 2 a_1` and `a_{i+1} t^2 + 2 a_i t + a_1` for `i = 2..m`, with
/// `v = (-1, 0, ..., 0)` forcing `a_1 = 1`.
pub fn gen_exponential_toy(m: usize) -> Result<NonPositivityInstance> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("toy instance needs m >= 2, got {m}")));
    }
    let n = m + 1;
    let mut polys = vec![vec![Polynomial::zero(); m]; n];
    polys[1][0] = Polynomial::from_ints(&[1]);
    polys[0][0] = Polynomial::from_ints(&[-2]);
    for j in 1..m {
        polys[j + 1][j] = &polys[j + 1][j] + &Polynomial::from_ints(&[0, 0, 1]);
        polys[j][j] = &polys[j][j] + &Polynomial::from_ints(&[0, 2]);
        polys[0][j] = &polys[0][j] + &Polynomial::from_ints(&[1]);
    }
    let mut v = vec![Rational::zero(); n];
    v[0] = -Rational::one();
    let maps = vec![(Rational::zero(), Rational::one()); m];
    Ok(NonPositivityInstance { polys, v, maps, domain: Domain::RealLine })
}

/// `a_1 = 1` and `a_i = 2^(2^(i-2))` for `i >= 2`.
pub fn toy_feasible_point(m: usize) -> Vec<Rational> {
    (0..=m).map(|i| if i == 0 { Rational::one() } else { pow2(1i64 << (i - 1)) }).collect()
}

/// Lower bounds forced on any feasible point: `a_1 = 1`, `a_2 >= 2`, and
/// `a_{i+1} >= a_i^2` from the discriminant of each quadratic.
pub fn toy_lower_bounds(m: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one(), int(2)];
    while out.len() < m + 1 {
        let last = out.last().expect("nonempty").clone();
        out.push(&last * &last / &out[0]);
    }
    out.truncate(m + 1);
    out
}

/// Whether every toy constraint holds at `a` (nonnegativity on the line and
/// `sum a_i v_i = -1`).
pub fn toy_feasible(inst: &NonPositivityInstance, a: &[Rational]) -> bool {
    let dot: Rational = a.iter().zip(&inst.v).map(|(x, y)| x * y).sum();
    dot == -Rational::one() && (0..inst.m()).all(|j| sos_blocks(&inst.combination(a, j), Domain::RealLine).is_ok())
}

/// `2^(2^m) / (100 m)`.
pub fn growth_bound(m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(Error::InvalidParameter("growth bound needs m >= 1".into()));
    }
    Ok(pow2(1i64 << m) / int(100 * m as i64))
}

/// Verifies `a` against `p` and then tests `max |a_i| > 2^(2^m) / (100 m)`.
pub fn witness_growth_check(m: usize, p: &PointSet, a: &Witness) -> Result<bool> {
    if !verify_witness(p, a)? {
        return Err(Error::Unverified("witness does not verify".into()));
    }
    Ok(a.sup_norm() > growth_bound(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::splines::Point;

    fn p0() -> PointSet {
        PointSet::from_ints(&[(-1, 0), (0, 0), (1, 1), (2, 2)]).unwrap()
    }

    #[test]
    fn rescaling_is_exact() {
        let p = PointSet::new((0..6).map(|j| Point::ints(j, j * j * j)).collect()).unwrap();
        let inst = build_instance(&p, 3).unwrap();
        let basis = BSplineBasis::from_points(&p, 3).unwrap();
        assert_eq!((inst.n(), inst.m()), (3, 5));
        for j in 0..5 {
            let (mid, half) = &inst.maps[j];
            assert_eq!(half, &rat(1, 2));
            for s in -2..=2 {
                let t = rat(s, 2);
                let x = mid + half * &t;
                for i in 0..3 {
                    assert_eq!(inst.polys[i][j].eval(&t), basis.piece(i, j).eval(&x));
                }
            }
        }
        let inst0 = build_instance(&p0(), 3).unwrap();
        assert_eq!((inst0.n(), inst0.m()), (1, 3));
        assert_eq!(inst0.v, vec![rat(-1, 6)]);
    }

    #[test]
    fn inventory_and_counts() {
        let inst = build_instance(&p0(), 3).unwrap();
        let sdp = build_sdp(&inst).unwrap();
        assert_eq!(sdp.constraints.len(), 5 * 3 + 1);
        assert_eq!((sdp.block_count(3), sdp.block_count(2), sdp.block_count(1)), (3, 3, 2));
        assert_eq!(sdp.constraints.iter().filter(|c| c.rhs == int(-1)).count(), 1);
    }

    #[test]
    fn witness_gives_feasible_point() {
        let inst = build_instance(&p0(), 3).unwrap();
        let sdp = build_sdp(&inst).unwrap();
        let x = sdp_point(&inst, &[int(6)]).unwrap();
        assert!(check_point(&sdp, &x));
        let wrong = sdp_point(&inst, &[int(3)]).unwrap();
        assert!(!check_point(&sdp, &wrong));
        assert!(sdp_point(&inst, &[int(-6)]).is_err());
    }

    #[test]
    fn parabola_data_is_infeasible() {
        let par = PointSet::from_ints(&[(0, 0), (1, 1), (2, 4), (3, 9), (4, 16)]).unwrap();
        let inst = build_instance(&par, 3).unwrap();
        let sdp = build_sdp(&inst).unwrap();
        let last = sdp.constraints.last().unwrap();
        assert!(last.entries.is_empty() && last.rhs == int(-1));
    }

    #[test]
    fn toy_chain() {
        let inst = gen_exponential_toy(5).unwrap();
        let a = toy_feasible_point(5);
        assert_eq!(a[5], int(65536));
        assert!(toy_feasible(&inst, &a));
        let sdp = build_sdp(&inst).unwrap();
        assert_eq!((sdp.block_count(3), sdp.block_count(2), sdp.block_count(1)), (5, 0, 12));
        assert!(check_point(&sdp, &sdp_point(&inst, &a).unwrap()));
        assert_eq!(toy_lower_bounds(5), a);
        let mut low = a.clone();
        low[5] = int(65535);
        assert!(!toy_feasible(&inst, &low));
        assert!(gen_exponential_toy(1).is_err());
    }

    #[test]
    fn growth_bounds() {
        assert_eq!(growth_bound(2).unwrap(), rat(2, 25));
        assert_eq!(growth_bound(3).unwrap(), rat(64, 75));
        assert_eq!(growth_bound(4).unwrap(), rat(8192, 50));
        assert!(witness_growth_check(1, &p0(), &Witness { a: vec![int(6)] }).unwrap());
        assert!(witness_growth_check(1, &p0(), &Witness { a: vec![int(1)] }).is_err());
    }
}
