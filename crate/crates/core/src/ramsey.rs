//! Five-point coloring, the two explicit coefficient recursions, and search
//! for a subset whose certificate the recursions produce.

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, Rational};
use crate::interp::{fourtuple_sign, verify_cone_certificate, CertTerm, CertificateJson, ConeCertificate, ORDER};
use crate::splines::{divided_diff_vector, BSplineBasis, Point, PointSet};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiveTupleColor {
    VPositive,
    VNegative,
}

/// `VPositive` iff `v_1 / M_1(u_3) <= v_2 / M_2(u_3)` over the five points.
pub fn vcolor(u: &PointSet) -> Result<FiveTupleColor> {
    if u.len() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: u.len() });
    }
    let basis = BSplineBasis::from_points(u, ORDER)?;
    let v = divided_diff_vector(u, ORDER)?;
    let mid = &u.points()[2].x;
    let m = basis.moment_vector(mid)?;
    // both values are positive, so cross-multiplying keeps the order
    Ok(if &v[0] * &m[1] <= &v[1] * &m[0] { FiveTupleColor::VPositive } else { FiveTupleColor::VNegative })
}

/// One recursion step: `c` for basis index `index` and the bound `v_i / M_i(t_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionStep {
    pub index: usize,
    pub c: Rational,
    pub bound: Rational,
}

impl RecursionStep {
    pub fn holds(&self) -> bool {
        self.c <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionOutcome {
    pub certificate: ConeCertificate,
    pub trace: Vec<RecursionStep>,
}

fn setup(z: &PointSet) -> Result<(BSplineBasis, Vec<Rational>, Vec<Rational>)> {
    let basis = BSplineBasis::from_points(z, ORDER)?;
    let v = divided_diff_vector(z, ORDER)?;
    Ok((basis, v, z.xs()))
}

fn step(basis: &BSplineBasis, v: &[Rational], i: usize, c: Rational, t: &Rational) -> Result<RecursionStep> {
    if c.is_negative() {
        return Err(Error::NegativeCoefficient { index: i, value: c.to_string() });
    }
    let bound = &v[i] / basis.eval(i, t)?;
    let s = RecursionStep { index: i, c, bound };
    if !s.holds() {
        return Err(Error::Unverified(format!("coefficient {i} exceeds its inductive bound")));
    }
    Ok(s)
}

fn finish(trace: Vec<RecursionStep>, ts: Vec<Rational>) -> RecursionOutcome {
    let terms = trace.iter().zip(ts).map(|(s, t)| CertTerm { c: s.c.clone(), t }).collect();
    RecursionOutcome { certificate: ConeCertificate { terms }, trace }
}

/// Left-to-right recursion with support points `t_j = z_{j+2}`.
pub fn construct_certificate_forward(z: &PointSet) -> Result<RecursionOutcome> {
    let (basis, v, xs) = setup(z)?;
    let n = v.len();
    let ts: Vec<Rational> = (0..n).map(|j| xs[j + 2].clone()).collect();
    let mut trace: Vec<RecursionStep> = Vec::with_capacity(n);
    for i in 0..n {
        let mut rest = v[i].clone();
        if i > 0 {
            rest -= &trace[i - 1].c * basis.eval(i, &ts[i - 1])?;
        }
        let c = rest / basis.eval(i, &ts[i])?;
        trace.push(step(&basis, &v, i, c, &ts[i])?);
    }
    Ok(finish(trace, ts))
}

/// Right-to-left recursion with support points `t_j = z_{j+1}`.
pub fn construct_certificate_backward(z: &PointSet) -> Result<RecursionOutcome> {
    let (basis, v, xs) = setup(z)?;
    let n = v.len();
    let ts: Vec<Rational> = (0..n).map(|j| xs[j + 1].clone()).collect();
    let mut rev: Vec<RecursionStep> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut rest = v[i].clone();
        if let Some(next) = rev.last() {
            rest -= &next.c * basis.eval(i, &ts[i + 1])?;
        }
        let c = rest / basis.eval(i, &ts[i])?;
        rev.push(step(&basis, &v, i, c, &ts[i])?);
    }
    rev.reverse();
    Ok(finish(rev, ts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    /// Indices into the input point set, increasing.
    pub indices: Vec<usize>,
    /// The selected points as given (not mirrored).
    pub subset: PointSet,
    pub mirrored: bool,
    pub color: FiveTupleColor,
    /// Certificate for `subset`, or for its mirror image when `mirrored`.
    pub certificate: ConeCertificate,
    pub trace: Vec<RecursionStep>,
}

impl ExtractionResult {
    /// The point set the certificate refers to.
    pub fn oriented_subset(&self) -> PointSet {
        if self.mirrored {
            self.subset.mirrored()
        } else {
            self.subset.clone()
        }
    }

    pub fn verify(&self) -> Result<bool> {
        verify_cone_certificate(&self.oriented_subset(), &self.certificate)
    }

    pub fn to_json(&self) -> ExtractionJson {
        ExtractionJson {
            indices: self.indices.clone(),
            mirrored: self.mirrored,
            color: self.color,
            certificate: self.certificate.to_json(),
            bounds: self.trace.iter().map(|s| format_rational(&s.bound)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtractionJson {
    pub indices: Vec<usize>,
    pub mirrored: bool,
    pub color: FiveTupleColor,
    pub certificate: CertificateJson,
    pub bounds: Vec<String>,
}

struct Search<'a> {
    pts: &'a [Point],
    signs: HashMap<[usize; 4], i8>,
    colors: HashMap<[usize; 5], FiveTupleColor>,
}

impl<'a> Search<'a> {
    fn sign(&mut self, q: [usize; 4]) -> i8 {
        let pts = self.pts;
        *self.signs.entry(q).or_insert_with(|| {
            fourtuple_sign(&q.map(|i| pts[i].clone())).expect("indices increase")
        })
    }

    fn color(&mut self, q: [usize; 5]) -> FiveTupleColor {
        let pts = self.pts;
        *self.colors.entry(q).or_insert_with(|| {
            let u = PointSet::new(q.iter().map(|&i| pts[i].clone()).collect()).expect("indices increase");
            vcolor(&u).expect("five points")
        })
    }

    /// Whether `chosen + [next]` keeps every 4-tuple nonnegative and every
    /// 5-tuple of the wanted color.
    fn extends(&mut self, chosen: &[usize], next: usize, want: FiveTupleColor) -> bool {
        let s = chosen.len();
        for a in 0..s {
            for b in a + 1..s {
                for c in b + 1..s {
                    if self.sign([chosen[a], chosen[b], chosen[c], next]) < 0 {
                        return false;
                    }
                }
            }
        }
        for a in 0..s {
            for b in a + 1..s {
                for c in b + 1..s {
                    for d in c + 1..s {
                        if self.color([chosen[a], chosen[b], chosen[c], chosen[d], next]) != want {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Lexicographic depth-first search; `accept` may reject a complete
    /// subset, in which case the search continues.
    fn run(
        &mut self,
        chosen: &mut Vec<usize>,
        size: usize,
        want: FiveTupleColor,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return accept(chosen);
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        let remaining = size - chosen.len();
        for next in start..=self.pts.len().saturating_sub(remaining) {
            if self.extends(chosen, next, want) {
                chosen.push(next);
                if self.run(chosen, size, want, accept) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

/// Finds `n + 3` points of `p` (or of its mirror image) with all 4-tuples
/// nonnegative and all 5-tuples one color, and certifies them by the
/// matching recursion. Tries unmirrored before mirrored and `VPositive`
/// before `VNegative`; within each, the lexicographically smallest subset.
pub fn extract_interpolable_subset(p: &PointSet, n: usize) -> Result<ExtractionResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let size = n + ORDER;
    for mirrored in [false, true] {
        let oriented = if mirrored { p.mirrored() } else { p.clone() };
        let mut search = Search { pts: oriented.points(), signs: HashMap::new(), colors: HashMap::new() };
        for want in [FiveTupleColor::VPositive, FiveTupleColor::VNegative] {
            let mut found: Option<(Vec<usize>, RecursionOutcome)> = None;
            let mut accept = |idx: &[usize]| {
                let z = oriented.subset(idx).expect("indices in range");
                let outcome = match want {
                    FiveTupleColor::VPositive => construct_certificate_forward(&z),
                    FiveTupleColor::VNegative => construct_certificate_backward(&z),
                };
                match outcome {
                    Ok(o) if verify_cone_certificate(&z, &o.certificate).unwrap_or(false) => {
                        found = Some((idx.to_vec(), o));
                        true
                    }
                    _ => false,
                }
            };
            search.run(&mut Vec::with_capacity(size), size, want, &mut accept);
            if let Some((indices, o)) = found {
                return Ok(ExtractionResult {
                    subset: p.subset(&indices)?,
                    indices,
                    mirrored,
                    color: want,
                    certificate: o.certificate,
                    trace: o.trace,
                });
            }
        }
    }
    Err(Error::NotFound)
}
