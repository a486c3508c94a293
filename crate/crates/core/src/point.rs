//! Points of the topological cube `[0,1]^n` with exact rational coordinates,
//! and the directed and symmetric L1 metrics on them.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::cube::{ExtDist, Rational, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPoint {
    coords: Vec<Rational>,
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl RPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        crate::cube::check_dim(coords.len())?;
        if let Some(c) = coords
            .iter()
            .find(|c| **c < Rational::zero() || **c > Rational::one())
        {
            return Err(Error::CoordinateOutOfRange(c.to_string()));
        }
        Ok(RPoint { coords })
    }

    pub(crate) fn new_unchecked(coords: Vec<Rational>) -> Self {
        RPoint { coords }
    }

    pub fn from_vertex(v: &Vertex) -> Self {
        RPoint {
            coords: v
                .coords()
                .into_iter()
                .map(|c| Rational::from_integer(c as i64))
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        RPoint {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinate sum.
    pub fn height(&self) -> Rational {
        self.coords.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Componentwise order.
    pub fn le(&self, other: &RPoint) -> bool {
        self.dim() == other.dim() && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// The vertex this point sits on, if every coordinate is 0 or 1.
    pub fn as_vertex(&self) -> Option<Vertex> {
        let mut bits = 0;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_one() {
                bits |= 1 << i;
            } else if !c.is_zero() {
                return None;
            }
        }
        Vertex::new(self.dim(), bits).ok()
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &RPoint) -> RPoint {
        RPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }
}

impl fmt::Display for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for RPoint {
    type Err = Error;

    /// Parses `"p1/q1,p2/q2,..."`; the empty string is the point of `[0,1]^0`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return RPoint::new(Vec::new());
        }
        RPoint::new(s.split(',').map(parse_rational).collect::<Result<_>>()?)
    }
}

fn same_dim(x: &RPoint, y: &RPoint) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// `Σ |yᵢ - xᵢ|` when `x ≤ y`, infinity otherwise.
pub fn d1_point(x: &RPoint, y: &RPoint) -> Result<ExtDist> {
    same_dim(x, y)?;
    if x.le(y) {
        Ok(ExtDist::Finite(y.height() - x.height()))
    } else {
        Ok(ExtDist::Infinite)
    }
}

/// Ordinary L1 distance.
pub fn l1(x: &RPoint, y: &RPoint) -> Result<Rational> {
    same_dim(x, y)?;
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .fold(Rational::zero(), |acc, (a, b)| acc + (a - b).abs()))
}

/// Symmetrized distance together with the common lower bound realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymDist {
    pub value: Rational,
    pub witness: RPoint,
}

/// The symmetric reflection of [`d1_point`] on a single cube: the minimum of
/// `d1(z,x) + d1(z,y)` over `z ≤ x, y`, attained at the componentwise minimum.
pub fn d1_sym(x: &RPoint, y: &RPoint) -> Result<SymDist> {
    same_dim(x, y)?;
    let z = x.meet(y);
    let value = (x.height() - z.height()) + (y.height() - z.height());
    Ok(SymDist { value, witness: z })
}
