//! Seeded generators of rationals, points and d-paths for randomized checks.

use rand::{Rng, RngExt};

use crate::cube::{Rational, Vertex};
use crate::dpath::PLSegmentPath;
use crate::point::RPoint;

/// Largest denominator drawn; small enough that ties are common.
pub const MAX_DENOMINATOR: i64 = 24;

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let q = rng.random_range(1..=MAX_DENOMINATOR);
    Rational::new(rng.random_range(0..=q), q)
}

pub fn point<R: Rng>(rng: &mut R, n: usize) -> RPoint {
    RPoint::new_unchecked((0..n).map(|_| rational(rng)).collect())
}

/// A pair `x ≤ y`.
pub fn ordered_pair<R: Rng>(rng: &mut R, n: usize) -> (RPoint, RPoint) {
    let (a, b) = (point(rng, n), point(rng, n));
    let lo = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| *x.min(y))
        .collect();
    let hi = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| *x.max(y))
        .collect();
    (RPoint::new_unchecked(lo), RPoint::new_unchecked(hi))
}

/// A random pair of vertices `alpha < beta` of `[n]`, `n ≥ 1`.
pub fn vertex_pair<R: Rng>(rng: &mut R, n: usize) -> (Vertex, Vertex) {
    loop {
        let a = rng.random_range(0..1u32 << n);
        let b = rng.random_range(0..1u32 << n);
        if a & b == a && a != b {
            return (
                Vertex::new(n, a).expect("in range"),
                Vertex::new(n, b).expect("in range"),
            );
        }
    }
}

/// Timing of a generated path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    /// Times equal the height gained since the start.
    Natural,
    /// Natural times with one breakpoint moved.
    Perturbed,
    /// Arbitrary increasing times.
    Arbitrary,
}

/// A coordinatewise nondecreasing path from `alpha` to `beta` through
/// `interior` random breakpoints, starting at time 0.
pub fn dpath<R: Rng>(
    rng: &mut R,
    alpha: &Vertex,
    beta: &Vertex,
    interior: usize,
    timing: Timing,
) -> PLSegmentPath {
    let n = alpha.dim();
    let mut columns: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let (a, b) = (alpha.coord(i + 1) as i64, beta.coord(i + 1) as i64);
            let mut col: Vec<Rational> = if a == b {
                vec![Rational::from_integer(a); interior]
            } else {
                (0..interior).map(|_| rational(rng)).collect()
            };
            col.sort();
            col.insert(0, Rational::from_integer(a));
            col.push(Rational::from_integer(b));
            col
        })
        .collect();
    let mut points: Vec<RPoint> = (0..interior + 2)
        .map(|k| RPoint::new_unchecked(columns.iter_mut().map(|c| c[k]).collect()))
        .collect();
    points.dedup();
    let h0 = points[0].height();
    let mut times: Vec<Rational> = match timing {
        Timing::Arbitrary => {
            let mut t = Rational::from_integer(0);
            points
                .iter()
                .map(|_| {
                    let now = t;
                    t += Rational::new(rng.random_range(1..=8), rng.random_range(1..=4));
                    now
                })
                .collect()
        }
        _ => points.iter().map(|p| p.height() - h0).collect(),
    };
    if timing == Timing::Perturbed && times.len() > 2 {
        let k = rng.random_range(1..times.len() - 1);
        // stay strictly between the neighbours
        times[k] = (times[k] + times[k + 1]) / Rational::from_integer(2);
    }
    PLSegmentPath::new(n, times.into_iter().zip(points).collect()).expect("increasing times")
}
