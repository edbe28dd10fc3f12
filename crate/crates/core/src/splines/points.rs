use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point { x: crate::exactmath::int(x), y: crate::exactmath::int(y) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Planar points with strictly increasing x-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Rejects input that is not sorted by x or repeats an x-coordinate.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        for (i, w) in points.windows(2).enumerate() {
            match w[0].x.cmp(&w[1].x) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => return Err(Error::DuplicateX(w[1].x.to_string())),
                std::cmp::Ordering::Greater => return Err(Error::Unsorted(i + 1)),
            }
        }
        Ok(PointSet { points })
    }

    /// Sorts by x first; still rejects duplicate x.
    pub fn from_unsorted(mut points: Vec<Point>) -> Result<Self> {
        points.sort_by(|a, b| a.x.cmp(&b.x));
        Self::new(points)
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, y)| Point::ints(x, y)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    pub fn ys(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.y.clone()).collect()
    }

    /// Vertical mirror image `y -> -y`.
    pub fn mirrored(&self) -> PointSet {
        PointSet { points: self.points.iter().map(|p| Point::new(p.x.clone(), -&p.y)).collect() }
    }

    /// Points at the given (increasing) indices.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let pts = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, n: self.points.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(pts)
    }

    pub fn without(&self, index: usize) -> PointSet {
        let mut pts = self.points.clone();
        pts.remove(index);
        PointSet { points: pts }
    }

    pub fn with_point(&self, p: Point) -> Result<PointSet> {
        let mut pts = self.points.clone();
        pts.push(p);
        PointSet::from_unsorted(pts)
    }

    pub fn to_json(&self) -> PointSetJson {
        PointSetJson {
            points: self.points.iter().map(|p| [format_rational(&p.x), format_rational(&p.y)]).collect(),
        }
    }

    pub fn from_json(j: &PointSetJson) -> Result<Self> {
        let pts = j
            .points
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(pts)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("point set serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PointSetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

/// Wire form: `{"points": [["x", "y"], ...]}` with `num/den` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointSetJson {
    pub points: Vec<[String; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_order() {
        assert_eq!(PointSet::from_ints(&[(0, 0), (0, 1)]), Err(Error::DuplicateX("0".into())));
        assert_eq!(PointSet::from_ints(&[(1, 0), (0, 1)]), Err(Error::Unsorted(1)));
        assert!(PointSet::from_json_str(r#"{"points": [["1","0"],["1/2","3"]]}"#).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = PointSet::from_ints(&[(-1, 0), (0, 0), (1, 1), (2, 2)]).unwrap();
        let s = p.to_json_string();
        assert!(s.contains("\"-1\""));
        assert_eq!(PointSet::from_json_str(&s).unwrap(), p);
        let q = PointSet::from_json_str(r#"{"points": [["1/3","-2/4"],["2","7"]]}"#).unwrap();
        assert_eq!(q.points()[0].y, crate::exactmath::rat(-1, 2));
    }
}
