//! Cutting-plane alternation between a witness LP and a certificate LP.
//!
//! The witness side maximizes a margin `s` subject to
//! `sum a_i M_i(t) >= s * W(t)` at the pooled cut points, where `W` is the sum
//! of all basis functions, together with `a.v = -1`, `|a_i| <= R` and
//! `s <= 1`. It is solved through its dual, which has only `n + 1` rows; the
//! simplex multipliers of that dual are `(a, s)`. A nonnegative margin
//! proposes a witness, which is checked against the whole node range and
//! refined by new cuts when it fails. A negative margin hands the pool to the
//! certificate side, a phase-one LP over the moment vectors at the cuts.

use super::lp::{Column, Lp, LpOutcome};
use super::{
    first_negative_fourtuple, verify_cone_certificate, verify_witness, CertTerm, ConeCertificate,
    IterationReport, Verdict, Witness, ORDER,
};
use crate::error::{Error, Result};
use crate::exactmath::{int, quad_min_on_interval, simplest_between, sqrt_bracket, Polynomial, Rational};
use crate::splines::{divided_diff_vector, BSplineBasis, PointSet};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Number of times the coefficient bound `R` may grow.
    pub max_rounds: usize,
    /// Cut points added beyond the initial knots and midpoints.
    pub max_cuts: usize,
    pub initial_radius: Rational,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rounds: 12, max_cuts: 500, initial_radius: int(4) }
    }
}

/// Witness supported on the window of a negative 4-tuple `s`, obtained by
/// writing its divided difference as a nonnegative combination of the
/// consecutive ones in between.
pub fn fourtuple_witness(p: &PointSet, s: [usize; 4]) -> Result<Witness> {
    let xs = p.xs();
    let ys = p.ys();
    let n = p.len() - ORDER;
    let weights = |idx: &[usize]| -> Vec<Rational> {
        idx.iter()
            .map(|&l| {
                idx.iter().filter(|&&m| m != l).fold(Rational::one(), |acc, &m| acc * (&xs[l] - &xs[m])).recip()
            })
            .collect()
    };
    let target = weights(&s);
    let value: Rational = s.iter().zip(&target).map(|(&l, w)| &ys[l] * w).sum();
    if !value.is_negative() {
        return Err(Error::InvalidParameter("4-tuple is not negative".into()));
    }
    let (lo, hi) = (s[0], s[3]);
    let mut lambda = vec![Rational::zero(); n];
    for l in lo..=hi - ORDER {
        let rhs = s.iter().position(|&q| q == l).map(|k| target[k].clone()).unwrap_or_default();
        let mut acc = rhs;
        for i in l.saturating_sub(ORDER).max(lo)..l {
            let w = weights(&(i..=i + ORDER).collect::<Vec<_>>());
            acc -= &lambda[i] * &w[l - i];
        }
        let own = weights(&(l..=l + ORDER).collect::<Vec<_>>());
        lambda[l] = acc / &own[0];
    }
    let scale = -value.recip();
    Ok(Witness { a: lambda.into_iter().map(|x| x * &scale).collect() })
}

struct Engine<'a> {
    p: &'a PointSet,
    basis: BSplineBasis,
    v: Vec<Rational>,
    n: usize,
    total: Vec<Polynomial>,
    pool: Vec<Rational>,
    seen: BTreeSet<Rational>,
    moments: Vec<Vec<Rational>>,
    witness_lp: Lp,
    lp_basis: Vec<usize>,
}


impl<'a> Engine<'a> {
    fn new(p: &'a PointSet, radius: &Rational) -> Result<Self> {
        let basis = BSplineBasis::from_points(p, ORDER)?;
        let v = divided_diff_vector(p, ORDER)?;
        let n = basis.dim();
        let ones = vec![Rational::one(); n];
        let total = (0..basis.num_intervals()).map(|j| basis.combination(&ones, j)).collect();
        let mut lp = Lp::new(n + 1, {
            let mut b = vec![Rational::zero(); n];
            b.push(Rational::one());
            b
        });
        let vcol: Column = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        lp.push_column(vcol.clone(), -Rational::one());
        lp.push_column(vcol.into_iter().map(|(i, x)| (i, -x)).collect(), Rational::one());
        for i in 0..n {
            lp.push_column(vec![(i, Rational::one())], radius.clone());
        }
        for i in 0..n {
            lp.push_column(vec![(i, -Rational::one())], radius.clone());
        }
        let sigma = lp.push_column(vec![(n, Rational::one())], Rational::one());
        let mut lp_basis: Vec<usize> = (0..n).map(|i| 2 + i).collect();
        lp_basis.push(sigma);
        let mut e = Engine {
            p,
            basis,
            v,
            n,
            total,
            pool: vec![],
            seen: BTreeSet::new(),
            moments: vec![],
            witness_lp: lp,
            lp_basis,
        };
        let xs = p.xs();
        for j in 0..xs.len() {
            e.add_cut(xs[j].clone())?;
            if j + 1 < xs.len() {
                e.add_cut((&xs[j] + &xs[j + 1]) / int(2))?;
            }
        }
        Ok(e)
    }

    fn add_cut(&mut self, t: Rational) -> Result<bool> {
        if !self.seen.insert(t.clone()) {
            return Ok(false);
        }
        let m = self.basis.moment_vector(&t)?;
        let w: Rational = m.iter().sum();
        let mut col: Column = m.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, -x)).collect();
        if !w.is_zero() {
            col.push((self.n, w));
        }
        self.witness_lp.push_column(col, Rational::zero());
        self.pool.push(t);
        self.moments.push(m);
        Ok(true)
    }

    fn set_radius(&mut self, radius: &Rational) {
        for c in &mut self.witness_lp.costs[2..2 + 2 * self.n] {
            *c = radius.clone();
        }
    }

    /// `Some((a, s))` at the optimum, `None` when no `a` in the box has `a.v = -1`.
    fn solve_witness_lp(&mut self) -> Option<(Vec<Rational>, Rational)> {
        match self.witness_lp.solve_from(&self.lp_basis) {
            LpOutcome::Optimal { duals, basis, .. } => {
                self.lp_basis = basis;
                let s = duals[self.n].clone();
                Some((duals[..self.n].to_vec(), s))
            }
            LpOutcome::Unbounded => None,
            LpOutcome::Infeasible => unreachable!("the witness dual always has a feasible basis"),
        }
    }

    /// Rounded points where `sum a_i M_i - s W` dips below zero, one per
    /// offending knot interval.
    fn violated_cuts(&self, a: &[Rational], s: &Rational) -> Result<Vec<Rational>> {
        let mut cuts = Vec::new();
        for j in 0..self.basis.num_intervals() {
            let h = &self.basis.combination(a, j) - &self.total[j].scale(s);
            let iv = self.basis.interval(j);
            let (t, val) = quad_min_on_interval(&h, &iv)?;
            if !val.is_negative() {
                continue;
            }
            cuts.push(round_cut(&h, &t, &val, iv.lo(), iv.hi()));
        }
        Ok(cuts)
    }

    fn try_certificate(&self) -> Result<Option<ConeCertificate>> {
        if self.v.iter().all(|x| x.is_zero()) {
            return Ok(Some(ConeCertificate::default()));
        }
        let mut lp = Lp::new(self.n, self.v.clone());
        for m in &self.moments {
            let col = m.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
            lp.push_column(col, Rational::zero());
        }
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                let terms: Vec<CertTerm> = x
                    .iter()
                    .zip(&self.pool)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, t)| CertTerm { c: c.clone(), t: t.clone() })
                    .collect();
                let cert = ConeCertificate { terms };
                Ok(verify_cone_certificate(self.p, &cert)?.then_some(cert))
            }
            _ => Ok(None),
        }
    }
}

/// Simplest rational near the interior minimizer `t` of the quadratic `h`
/// that keeps `h` negative; keeps cut coordinates short.
fn round_cut(h: &Polynomial, t: &Rational, val: &Rational, lo: &Rational, hi: &Rational) -> Rational {
    let lead = h.coeff(2);
    if !lead.is_positive() || t == lo || t == hi {
        return t.clone();
    }
    // h < 0 within sqrt(-val / lead) of t; use half of a lower bound for that
    let half_width_sq = -val / &lead / int(4);
    let delta = sqrt_bracket(&half_width_sq, 64).lo().clone();
    if !delta.is_positive() {
        return t.clone();
    }
    let left = (t - &delta).max(lo.clone());
    let right = (t + &delta).min(hi.clone());
    let r = simplest_between(&left, &right);
    if h.eval(&r).is_negative() {
        r
    } else {
        t.clone()
    }
}

/// Exact decision with verified evidence, or `Undecided` once the budget
/// runs out.
pub fn decide(p: &PointSet, budget: &Budget) -> Result<Verdict> {
    if p.len() < ORDER + 1 {
        return Err(Error::TooFewPoints { needed: ORDER + 1, got: p.len() });
    }
    let v = divided_diff_vector(p, ORDER)?;
    if p.len() == ORDER + 1 {
        return short_circuit(p, &v[0]);
    }
    if let Some(s) = first_negative_fourtuple(p) {
        let w = fourtuple_witness(p, s)?;
        if verify_witness(p, &w)? {
            return Ok(Verdict::NonInterpolable(w));
        }
    }
    if v.iter().all(|x| x.is_zero()) {
        return Ok(Verdict::Interpolable(ConeCertificate::default()));
    }

    let mut radius = budget.initial_radius.clone();
    let mut engine = Engine::new(p, &radius)?;
    let initial = engine.pool.len();
    let mut rounds = 0;
    let mut margin = None;
    let report = |rounds, cuts, radius: &Rational, margin: &Option<Rational>, reason: &str| {
        Verdict::Undecided(IterationReport {
            rounds,
            cuts,
            radius: radius.clone(),
            margin: margin.clone(),
            reason: reason.to_string(),
        })
    };
    loop {
        let added = engine.pool.len() - initial;
        let solved = engine.solve_witness_lp();
        let grow;
        match solved {
            None => grow = true,
            Some((a, s)) => {
                margin = Some(s.clone());
                let box_active = a.iter().any(|x| x.abs() == radius);
                let cuts = engine.violated_cuts(&a, &s)?;
                if !s.is_negative() {
                    let w = Witness { a: a.clone() };
                    if super::separation_oracle(&a, &engine.basis)?.is_none() && verify_witness(p, &w)? {
                        return Ok(Verdict::NonInterpolable(w));
                    }
                } else if let Some(cert) = engine.try_certificate()? {
                    return Ok(Verdict::Interpolable(cert));
                }
                if cuts.is_empty() {
                    grow = true;
                } else {
                    if added + cuts.len() > budget.max_cuts {
                        return Ok(report(rounds, added, &radius, &margin, "cut budget exhausted"));
                    }
                    for t in cuts {
                        engine.add_cut(t)?;
                    }
                    grow = s.is_negative() && box_active;
                }
            }
        }
        if grow {
            if rounds >= budget.max_rounds {
                return Ok(report(rounds, added, &radius, &margin, "round budget exhausted"));
            }
            rounds += 1;
            radius = &radius * &radius;
            engine.set_radius(&radius);
        }
    }
}

fn short_circuit(p: &PointSet, v: &Rational) -> Result<Verdict> {
    if v.is_negative() {
        return Ok(Verdict::NonInterpolable(Witness { a: vec![-v.recip()] }));
    }
    if v.is_zero() {
        return Ok(Verdict::Interpolable(ConeCertificate::default()));
    }
    let basis = BSplineBasis::from_points(p, ORDER)?;
    let t = p.points()[1].x.clone();
    let m = basis.eval(0, &t)?;
    Ok(Verdict::Interpolable(ConeCertificate { terms: vec![CertTerm { c: v / m, t }] }))
}
