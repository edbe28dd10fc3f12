//! Exact revised simplex for `min c.x  s.t.  A x = b, x >= 0` with Bland's rule.

use crate::exactmath::Rational;
use num_traits::{One, Signed, Zero};

/// Sparse column: `(row, value)` pairs.
pub type Column = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct Lp {
    pub rows: usize,
    pub columns: Vec<Column>,
    pub costs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        /// Simplex multipliers `c_B^T B^{-1}`, one per row.
        duals: Vec<Rational>,
        objective: Rational,
        basis: Vec<usize>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau<'a> {
    cols: &'a [Column],
    costs: &'a [Rational],
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    // columns never allowed to enter
    barred: Vec<bool>,
}

impl<'a> Tableau<'a> {
    fn ftran(&self, col: &Column) -> Vec<Rational> {
        let m = self.binv.len();
        let mut u = vec![Rational::zero(); m];
        for (r, ur) in u.iter_mut().enumerate() {
            for (i, v) in col {
                let b = &self.binv[r][*i];
                if !b.is_zero() {
                    *ur += b * v;
                }
            }
        }
        u
    }

    fn duals(&self) -> Vec<Rational> {
        let m = self.binv.len();
        let mut y = vec![Rational::zero(); m];
        for (r, &bj) in self.basis.iter().enumerate() {
            let c = &self.costs[bj];
            if c.is_zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                let b = &self.binv[r][i];
                if !b.is_zero() {
                    *yi += c * b;
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, entering: usize, u: &[Rational]) {
        let m = self.binv.len();
        let piv = u[r].clone();
        let row_r: Vec<Rational> = self.binv[r].iter().map(|x| x / &piv).collect();
        let xr = &self.xb[r] / &piv;
        for i in 0..m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = &u[i];
            for (k, val) in row_r.iter().enumerate() {
                if !val.is_zero() {
                    let d = f * val;
                    self.binv[i][k] -= d;
                }
            }
            let d = f * &xr;
            self.xb[i] -= d;
        }
        self.binv[r] = row_r;
        self.xb[r] = xr;
        self.basis[r] = entering;
    }

    /// Runs Bland's rule to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        let n = self.cols.len();
        loop {
            let y = self.duals();
            let mut in_basis = vec![false; n];
            for &b in &self.basis {
                in_basis[b] = true;
            }
            let entering = (0..n).find(|&j| {
                if in_basis[j] || self.barred[j] {
                    return false;
                }
                let mut d = self.costs[j].clone();
                for (i, v) in &self.cols[j] {
                    d -= &y[*i] * v;
                }
                d.is_negative()
            });
            let Some(j) = entering else { return true };
            let u = self.ftran(&self.cols[j]);
            let mut best: Option<(usize, Rational)> = None;
            for (r, ur) in u.iter().enumerate() {
                if !ur.is_positive() {
                    continue;
                }
                let ratio = &self.xb[r] / ur;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, j, &u);
        }
    }
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for k in 0..n {
            a[c][k] = &a[c][k] / &piv;
            inv[c][k] = &inv[c][k] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..n {
                    let da = &f * &a[c][k];
                    a[r][k] -= da;
                    let di = &f * &inv[c][k];
                    inv[r][k] -= di;
                }
            }
        }
    }
    Some(inv)
}

impl Lp {
    pub fn new(rows: usize, rhs: Vec<Rational>) -> Self {
        assert_eq!(rows, rhs.len());
        Lp { rows, columns: vec![], costs: vec![], rhs }
    }

    pub fn push_column(&mut self, col: Column, cost: Rational) -> usize {
        self.columns.push(col);
        self.costs.push(cost);
        self.columns.len() - 1
    }

    fn finish(&self, t: &Tableau) -> LpOutcome {
        let mut x = vec![Rational::zero(); self.columns.len()];
        for (r, &b) in t.basis.iter().enumerate() {
            if b < x.len() {
                x[b] = t.xb[r].clone();
            }
        }
        let objective = x.iter().zip(&self.costs).map(|(a, c)| a * c).sum();
        LpOutcome::Optimal { x, duals: t.duals(), objective, basis: t.basis.clone() }
    }

    /// Solves from a known primal-feasible basis (one column index per row).
    /// Falls back to two-phase when the basis is singular or infeasible.
    pub fn solve_from(&self, basis: &[usize]) -> LpOutcome {
        let mat: Vec<Vec<Rational>> = {
            let mut b = vec![vec![Rational::zero(); self.rows]; self.rows];
            for (k, &j) in basis.iter().enumerate() {
                for (i, v) in &self.columns[j] {
                    b[*i][k] = v.clone();
                }
            }
            b
        };
        let Some(binv) = (basis.len() == self.rows).then(|| invert(&mat)).flatten() else {
            return self.solve();
        };
        let xb: Vec<Rational> = (0..self.rows)
            .map(|r| (0..self.rows).map(|i| &binv[r][i] * &self.rhs[i]).sum())
            .collect();
        if xb.iter().any(|v: &Rational| v.is_negative()) {
            return self.solve();
        }
        let mut t = Tableau {
            cols: &self.columns,
            costs: &self.costs,
            basis: basis.to_vec(),
            binv,
            xb,
            barred: vec![false; self.columns.len()],
        };
        if t.optimize() {
            self.finish(&t)
        } else {
            LpOutcome::Unbounded
        }
    }

    /// Two-phase simplex with one artificial per row.
    pub fn solve(&self) -> LpOutcome {
        let m = self.rows;
        let n = self.columns.len();
        let flip: Vec<bool> = self.rhs.iter().map(|b| b.is_negative()).collect();
        let sgn = |i: usize, v: &Rational| if flip[i] { -v } else { v.clone() };
        let mut cols: Vec<Column> =
            self.columns.iter().map(|c| c.iter().map(|(i, v)| (*i, sgn(*i, v))).collect()).collect();
        let mut phase1 = vec![Rational::zero(); n];
        for i in 0..m {
            cols.push(vec![(i, Rational::one())]);
            phase1.push(Rational::one());
        }
        let rhs: Vec<Rational> = (0..m).map(|i| sgn(i, &self.rhs[i])).collect();
        let ident: Vec<Vec<Rational>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        let mut t = Tableau {
            cols: &cols,
            costs: &phase1,
            basis: (n..n + m).collect(),
            binv: ident,
            xb: rhs,
            barred: vec![false; n + m],
        };
        t.optimize();
        if t.basis.iter().zip(&t.xb).any(|(&b, x)| b >= n && x.is_positive()) {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out where possible
        for r in 0..m {
            if t.basis[r] < n {
                continue;
            }
            let in_basis: Vec<usize> = t.basis.clone();
            if let Some((j, u)) = (0..n)
                .filter(|j| !in_basis.contains(j))
                .map(|j| (j, t.ftran(&cols[j])))
                .find(|(_, u)| !u[r].is_zero())
            {
                t.pivot(r, j, &u);
            }
        }
        for b in t.barred.iter_mut().skip(n) {
            *b = true;
        }
        let mut costs2 = self.costs.clone();
        costs2.extend(std::iter::repeat_n(Rational::zero(), m));
        let mut t2 = Tableau { cols: &cols, costs: &costs2, basis: t.basis, binv: t.binv, xb: t.xb, barred: t.barred };
        if !t2.optimize() {
            return LpOutcome::Unbounded;
        }
        match self.finish(&t2) {
            LpOutcome::Optimal { x, duals, objective, basis } => {
                let duals = duals.iter().enumerate().map(|(i, y)| sgn(i, y)).collect();
                LpOutcome::Optimal { x, duals, objective, basis }
            }
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn dense(lp: &mut Lp, rows: &[&[i64]], costs: &[i64]) {
        for (j, &c) in costs.iter().enumerate() {
            let col = rows.iter().enumerate().filter(|(_, r)| r[j] != 0).map(|(i, r)| (i, int(r[j]))).collect();
            lp.push_column(col, int(c));
        }
    }

    #[test]
    fn small_optimum_and_duals() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let mut lp = Lp::new(2, vec![int(4), int(6)]);
        dense(&mut lp, &[&[1, 2, 1, 0], &[3, 1, 0, 1]], &[-1, -1, 0, 0]);
        let LpOutcome::Optimal { x, duals, objective, .. } = lp.solve() else { panic!() };
        assert_eq!(x[0], rat(8, 5));
        assert_eq!(x[1], rat(6, 5));
        assert_eq!(objective, rat(-14, 5));
        // strong duality: b.y equals the optimum
        assert_eq!(&duals[0] * int(4) + &duals[1] * int(6), objective);
        let warm = lp.solve_from(&[2, 3]);
        assert!(matches!(warm, LpOutcome::Optimal { objective: ref o, .. } if *o == rat(-14, 5)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1, vec![int(-1)]);
        dense(&mut lp, &[&[1, 1]], &[0, 0]);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = Lp::new(1, vec![int(1)]);
        dense(&mut lp, &[&[1, -1]], &[0, -1]);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        // x + y = 2 twice, negative rhs row flipped
        let mut lp = Lp::new(3, vec![int(2), int(2), int(-1)]);
        dense(&mut lp, &[&[1, 1], &[1, 1], &[-1, 0]], &[1, 2]);
        let LpOutcome::Optimal { x, objective, .. } = lp.solve() else { panic!() };
        assert_eq!(x, vec![int(1), int(1)]);
        assert_eq!(objective, int(3));
    }
}
