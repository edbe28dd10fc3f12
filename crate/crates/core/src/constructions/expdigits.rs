use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int, pow2, CertifiedInterval, CertifiedReal, Interval, Rational, MAX_BITS};
use crate::splines::{Point, PointSet};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// `eps_j` of the gap chain: `eps_0 = 1` and each step maps `e` to the
/// constant term of the left tangent parabola through `(1, 6 - e)` and
/// `(2, 24 - 3e)`, written without cancellation as
/// `e^2 / (48 - 7e + 2 sqrt(12 (e^2 - 14e + 48)))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsTerm {
    pub index: usize,
}

fn step(e: &Interval, bits: u32) -> Interval {
    let e2 = e.square();
    let radicand = e2.sub(&e.scale(&int(14))).add(&Interval::point(int(48))).scale(&int(12));
    let root = radicand.sqrt(bits).expect("radicand stays positive for e in (0, 1]");
    let den = Interval::point(int(48)).sub(&e.scale(&int(7))).add(&root.scale(&int(2)));
    e2.div(&den).expect("denominator is positive").round_outward(bits)
}

impl CertifiedReal for EpsTerm {
    fn enclose(&self, bits: u32) -> Interval {
        let mut e = Interval::point(Rational::one());
        for _ in 0..self.index {
            e = step(&e, bits);
        }
        e
    }
}

fn chain_at(m: usize, bits: u32) -> Vec<Interval> {
    let mut out = vec![Interval::point(Rational::one())];
    for _ in 0..m {
        let next = step(out.last().expect("nonempty"), bits);
        out.push(next);
    }
    out
}

/// `2 * 2^(-2^j)`.
pub(crate) fn margin(j: usize) -> Rational {
    int(2) * pow2(-(1i64 << j))
}

fn certified(chain: &[Interval]) -> bool {
    (1..chain.len()).all(|j| {
        let prev = chain[j - 1].lo();
        let cap = prev * prev / int(5);
        chain[j].lo().is_positive() && chain[j].hi() < &cap && chain[j].hi() <= &margin(j)
    })
}

/// Brackets for `eps_0..=eps_m` certifying `0 < eps_j < eps_{j-1}^2 / 5` and
/// `eps_j <= 2 * 2^(-2^j)`; precision starts at `bits` (default `2^(m+3)`)
/// and doubles until the inequalities separate.
pub fn eps_chain(m: usize, bits: Option<u32>) -> Result<Vec<CertifiedInterval>> {
    let mut b = bits.unwrap_or_else(|| 1u32 << (m + 3).min(16)).max(8);
    loop {
        let chain = chain_at(m, b);
        if certified(&chain) {
            return Ok(chain.iter().map(CertifiedInterval::from_interval).collect());
        }
        if b >= MAX_BITS {
            return Err(Error::PrecisionExhausted(b));
        }
        b = (b * 2).min(MAX_BITS);
    }
}

/// The set `{(-1, 0), (0, 0), (1, 1), ..., (2m+1, (2m+1)^3), q}` with
/// `q = (2m+2, (2m+2)^3 - 6)`, and the same set with `q` raised by
/// `2 * 2^(-2^m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpFamily {
    pub m: usize,
    pub lower: PointSet,
    pub raised: PointSet,
    pub raise: Rational,
    pub eps: Vec<CertifiedInterval>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EpsBracketJson {
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExpSidecarJson {
    pub m: usize,
    pub raise: String,
    /// Parabola through the first three points, ascending coefficients.
    pub base_parabola: Vec<String>,
    pub eps: Vec<EpsBracketJson>,
}

impl ExpFamily {
    pub fn sidecar(&self) -> ExpSidecarJson {
        let pts = self.lower.points();
        let base = super::parabola_through(&pts[0], &pts[1], &pts[2]).expect("distinct x");
        ExpSidecarJson {
            m: self.m,
            raise: format_rational(&self.raise),
            base_parabola: (0..3).map(|i| format_rational(&base.coeff(i))).collect(),
            eps: self
                .eps
                .iter()
                .map(|c| EpsBracketJson { lo: format_rational(&c.lo), hi: format_rational(&c.hi) })
                .collect(),
        }
    }
}

pub fn gen_expdigits(m: usize, eps_bits: Option<u32>) -> Result<ExpFamily> {
    let top = 2 * m as i64 + 2;
    let mut pts = vec![Point::ints(-1, 0)];
    pts.extend((0..top).map(|j| Point::ints(j, j * j * j)));
    let q = Point::ints(top, top * top * top - 6);
    let raise = margin(m);
    let lower = PointSet::new(pts.iter().cloned().chain([q.clone()]).collect())?;
    let raised = PointSet::new(pts.into_iter().chain([Point::new(q.x, q.y + &raise)]).collect())?;
    Ok(ExpFamily { m, lower, raised, raise, eps: eps_chain(m, eps_bits)? })
}
