//! Tame directed paths as exact piecewise-linear data: validation,
//! naturality, reparametrization, transport along `T(f)`, Moore
//! composition, and the maps induced on spaces of natural paths.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cube::{compose, embedding, CubeMap, Rational, Vertex};
use crate::error::{Error, Result};
use crate::homset::{factorize, Factorization};
use crate::point::{d1_point, parse_rational, RPoint};
use crate::sts::Sts;
use crate::topo::t_eval;

/// A path in `[0,1]^n`, linear between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLSegmentPath {
    dim: usize,
    breakpoints: Vec<(Rational, RPoint)>,
}

/// Why a segment path fails to be a d-path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DPathDefect {
    Constant,
    StartNotVertex,
    EndNotVertex,
    /// Coordinate `coord` (1-based) decreases on segment `segment` (0-based).
    Decreasing {
        segment: usize,
        coord: usize,
    },
}

impl fmt::Display for DPathDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DPathDefect::Constant => write!(f, "path is constant"),
            DPathDefect::StartNotVertex => write!(f, "start point is not a vertex"),
            DPathDefect::EndNotVertex => write!(f, "end point is not a vertex"),
            DPathDefect::Decreasing { segment, coord } => {
                write!(f, "coordinate {coord} decreases on segment {segment}")
            }
        }
    }
}

fn lerp(a: &RPoint, b: &RPoint, s: Rational) -> RPoint {
    RPoint::new_unchecked(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| *x + (*y - *x) * s)
            .collect(),
    )
}

impl PLSegmentPath {
    /// Checks the structure only: at least one breakpoint, strictly
    /// increasing times, every point of dimension `dim`.
    pub fn new(dim: usize, breakpoints: Vec<(Rational, RPoint)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidPath("no breakpoints".into()));
        }
        if let Some((_, p)) = breakpoints.iter().find(|(_, p)| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if let Some(w) = breakpoints.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidPath(format!(
                "breakpoint times must strictly increase (breakpoint {})",
                w + 1
            )));
        }
        Ok(PLSegmentPath { dim, breakpoints })
    }

    /// Parses `(time, point)` string pairs.
    pub fn parse(dim: usize, breakpoints: &[(&str, &str)]) -> Result<Self> {
        let bps = breakpoints
            .iter()
            .map(|(t, p)| Ok((parse_rational(t)?, p.parse::<RPoint>()?)))
            .collect::<Result<Vec<_>>>()?;
        PLSegmentPath::new(dim, bps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[(Rational, RPoint)] {
        &self.breakpoints
    }

    pub fn start_time(&self) -> Rational {
        self.breakpoints[0].0
    }

    pub fn end_time(&self) -> Rational {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    pub fn start(&self) -> &RPoint {
        &self.breakpoints[0].1
    }

    pub fn end(&self) -> &RPoint {
        &self.breakpoints[self.breakpoints.len() - 1].1
    }

    /// `h(end) - h(start)`.
    pub fn height_increase(&self) -> Rational {
        self.end().height() - self.start().height()
    }

    /// The point at time `t`, if `t` lies in the domain.
    pub fn point_at(&self, t: Rational) -> Option<RPoint> {
        let bps = &self.breakpoints;
        if t < bps[0].0 || t > bps[bps.len() - 1].0 {
            return None;
        }
        let k = bps.partition_point(|(s, _)| *s <= t);
        if k == 0 || bps[k - 1].0 == t {
            return Some(bps[k.max(1) - 1].1.clone());
        }
        let ((t0, p0), (t1, p1)) = (&bps[k - 1], &bps[k]);
        Some(lerp(p0, p1, (t - t0) / (t1 - t0)))
    }

    /// Shifts every time by `delta`.
    pub fn shifted(&self, delta: Rational) -> Self {
        PLSegmentPath {
            dim: self.dim,
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(t, p)| (*t + delta, p.clone()))
                .collect(),
        }
    }

    /// Removes interior breakpoints where the velocity does not change.
    pub fn normalized(&self) -> Self {
        let mut out: Vec<(Rational, RPoint)> = vec![self.breakpoints[0].clone()];
        for k in 1..self.breakpoints.len() {
            let cur = &self.breakpoints[k];
            if out.len() >= 2 {
                let (t0, p0) = &out[out.len() - 2];
                let (t1, p1) = &out[out.len() - 1];
                let dt01 = *t1 - *t0;
                let dt12 = cur.0 - *t1;
                let collinear = p0
                    .coords()
                    .iter()
                    .zip(p1.coords())
                    .zip(cur.1.coords())
                    .all(|((a, b), c)| (*b - *a) * dt12 == (*c - *b) * dt01);
                if collinear {
                    out.pop();
                }
            }
            out.push(cur.clone());
        }
        PLSegmentPath {
            dim: self.dim,
            breakpoints: out,
        }
    }
}

impl fmt::Display for PLSegmentPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .breakpoints
            .iter()
            .map(|(t, p)| format!("{t}:({p})"))
            .collect();
        f.write_str(&parts.join(" -> "))
    }
}

/// Result of [`is_dpath`]; `defect` is `None` for a valid d-path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPathReport {
    pub defect: Option<DPathDefect>,
}

impl DPathReport {
    pub fn ok(&self) -> bool {
        self.defect.is_none()
    }
}

/// Coordinatewise nondecreasing, nonconstant, starting and ending at vertices.
pub fn is_dpath(p: &PLSegmentPath) -> DPathReport {
    let defect = (|| {
        for (k, w) in p.breakpoints.windows(2).enumerate() {
            let (a, b) = (w[0].1.coords(), w[1].1.coords());
            if let Some(i) = (0..p.dim).find(|&i| b[i] < a[i]) {
                return Some(DPathDefect::Decreasing {
                    segment: k,
                    coord: i + 1,
                });
            }
        }
        if p.start() == p.end() {
            return Some(DPathDefect::Constant);
        }
        if p.start().as_vertex().is_none() {
            return Some(DPathDefect::StartNotVertex);
        }
        if p.end().as_vertex().is_none() {
            return Some(DPathDefect::EndNotVertex);
        }
        None
    })();
    DPathReport { defect }
}

/// A d-path with `h(γ(t)) - h(γ(t₀)) = t - t₀` at every breakpoint, where
/// `t₀` is the start time. Since the path is linear between breakpoints,
/// this is the same as the coordinate slopes summing to 1 on every segment.
pub fn is_natural(p: &PLSegmentPath) -> bool {
    if !is_dpath(p).ok() {
        return false;
    }
    let (t0, h0) = (p.start_time(), p.start().height());
    p.breakpoints
        .iter()
        .all(|(t, x)| x.height() - h0 == *t - t0)
}

/// `d₁(γ(s), γ(t)) = t - s` for every pair of breakpoint times `s ≤ t`.
pub fn is_breakpoint_quasi_isometry(p: &PLSegmentPath) -> bool {
    let bps = &p.breakpoints;
    (0..bps.len()).all(|a| {
        (a..bps.len()).all(|b| {
            d1_point(&bps[a].1, &bps[b].1).ok()
                == Some(crate::cube::ExtDist::Finite(bps[b].0 - bps[a].0))
        })
    })
}

/// Reparametrizes a d-path by height, starting at time `t0`. Stretches
/// where the path is constant collapse to a single breakpoint.
pub fn naturalize_from(p: &PLSegmentPath, t0: Rational) -> Result<PLSegmentPath> {
    if let Some(d) = is_dpath(p).defect {
        return Err(Error::InvalidPath(d.to_string()));
    }
    let h0 = p.start().height();
    let mut out: Vec<(Rational, RPoint)> = Vec::with_capacity(p.breakpoints.len());
    for (_, x) in &p.breakpoints {
        let t = t0 + x.height() - h0;
        // equal heights along a monotone path mean equal points
        if out.last().is_some_and(|(s, _)| *s == t) {
            continue;
        }
        out.push((t, x.clone()));
    }
    PLSegmentPath::new(p.dim, out)
}

/// [`naturalize_from`] with the domain starting at 0.
pub fn naturalize(p: &PLSegmentPath) -> Result<PLSegmentPath> {
    naturalize_from(p, Rational::zero())
}

/// Interior times of the segment where two coordinates cross.
fn crossing_times(t0: Rational, a: &RPoint, t1: Rational, b: &RPoint) -> Vec<Rational> {
    let (xa, xb) = (a.coords(), b.coords());
    let mut out = Vec::new();
    for i in 0..xa.len() {
        for j in i + 1..xa.len() {
            // (xa_i - xa_j) + s·((xb_i - xa_i) - (xb_j - xa_j)) = 0
            let gap = xa[i] - xa[j];
            let rate = (xb[i] - xa[i]) - (xb[j] - xa[j]);
            if rate.is_zero() {
                continue;
            }
            let s = -gap / rate;
            if s > Rational::zero() && s < Rational::from_integer(1) {
                out.push(t0 + s * (t1 - t0));
            }
        }
    }
    out
}

/// Image of a path under `T(f)`, with breakpoints added wherever two
/// coordinates cross so that the result is again exactly piecewise linear.
pub fn transport(f: &CubeMap, p: &PLSegmentPath) -> Result<PLSegmentPath> {
    if p.dim != f.dom() {
        return Err(Error::DimensionMismatch {
            expected: f.dom(),
            found: p.dim,
        });
    }
    let mut times: Vec<Rational> = p.breakpoints.iter().map(|(t, _)| *t).collect();
    for w in p.breakpoints.windows(2) {
        times.extend(crossing_times(w[0].0, &w[0].1, w[1].0, &w[1].1));
    }
    times.sort();
    times.dedup();
    let bps = times
        .into_iter()
        .map(|t| {
            let x = p.point_at(t).expect("time inside the domain");
            Ok((t, t_eval(f, &x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    PLSegmentPath::new(f.cod(), bps)
}

// ---------------------------------------------------------------------------
// Paths through a symmetric transverse set

/// One leg of a Moore path: a segment path inside the cube `cube` of
/// dimension `path.dim()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub cube: usize,
    pub path: PLSegmentPath,
}

/// A Moore composite of legs. Consecutive legs share their switching time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLDPath {
    legs: Vec<Leg>,
}

/// Per-leg record of a naturality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegRecord {
    pub cube: usize,
    pub start_time: String,
    pub end_time: String,
    pub height_increase: String,
    pub natural: bool,
}

/// Total height increase and the per-leg verification records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityCertificate {
    pub total_length: Rational,
    pub legs: Vec<LegRecord>,
}

impl NaturalityCertificate {
    pub fn is_natural(&self) -> bool {
        self.legs.iter().all(|l| l.natural)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn value(&self) -> Result<Rational> {
        match self {
            Num::Int(v) => Ok(Rational::from_integer(*v)),
            Num::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LegFile {
    cube: usize,
    dim: usize,
    breakpoints: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PathFile {
    legs: Vec<LegFile>,
}

fn vertex_bits(p: &RPoint) -> Result<Vertex> {
    p.as_vertex()
        .ok_or_else(|| Error::InvalidPath(format!("({p}) is not a vertex")))
}

impl PLDPath {
    /// Checks that legs are present and that each starts when the previous
    /// one ends.
    pub fn new(legs: Vec<Leg>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::InvalidPath("no legs".into()));
        }
        if let Some(k) = legs
            .windows(2)
            .position(|w| w[0].path.end_time() != w[1].path.start_time())
        {
            return Err(Error::InvalidPath(format!(
                "leg {} does not start when leg {k} ends",
                k + 1
            )));
        }
        Ok(PLDPath { legs })
    }

    /// A single-leg path.
    pub fn single(cube: usize, path: PLSegmentPath) -> Self {
        PLDPath {
            legs: vec![Leg { cube, path }],
        }
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn start_time(&self) -> Rational {
        self.legs[0].path.start_time()
    }

    pub fn end_time(&self) -> Rational {
        self.legs[self.legs.len() - 1].path.end_time()
    }

    /// Vertex id in `sts` where leg `k` starts (`end = false`) or ends.
    fn endpoint_in(&self, sts: &Sts, k: usize, end: bool) -> Result<usize> {
        let leg = &self.legs[k];
        let p = if end {
            leg.path.end()
        } else {
            leg.path.start()
        };
        sts.vertex_of(leg.path.dim(), leg.cube, vertex_bits(p)?.bits())
    }

    pub fn start_vertex(&self, sts: &Sts) -> Result<usize> {
        self.endpoint_in(sts, 0, false)
    }

    pub fn end_vertex(&self, sts: &Sts) -> Result<usize> {
        self.endpoint_in(sts, self.legs.len() - 1, true)
    }

    /// Every leg is a d-path in an existing cube, and consecutive legs meet
    /// at the same vertex of `sts`.
    pub fn check_in(&self, sts: &Sts) -> Result<()> {
        for (k, leg) in self.legs.iter().enumerate() {
            if let Some(d) = is_dpath(&leg.path).defect {
                return Err(Error::InvalidPath(format!("leg {k}: {d}")));
            }
            if leg.cube >= sts.count(leg.path.dim()) {
                return Err(Error::UnknownCube {
                    dim: leg.path.dim(),
                    id: leg.cube,
                });
            }
        }
        for k in 0..self.legs.len() - 1 {
            let (a, b) = (
                self.endpoint_in(sts, k, true)?,
                self.endpoint_in(sts, k + 1, false)?,
            );
            if a != b {
                return Err(Error::EndpointMismatch(format!(
                    "leg {k} ends at vertex {a}, leg {} starts at vertex {b}",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn naturality(&self) -> NaturalityCertificate {
        let legs: Vec<LegRecord> = self
            .legs
            .iter()
            .map(|l| LegRecord {
                cube: l.cube,
                start_time: l.path.start_time().to_string(),
                end_time: l.path.end_time().to_string(),
                height_increase: l.path.height_increase().to_string(),
                natural: is_natural(&l.path),
            })
            .collect();
        NaturalityCertificate {
            total_length: self
                .legs
                .iter()
                .fold(Rational::zero(), |acc, l| acc + l.path.height_increase()),
            legs,
        }
    }

    pub fn is_natural(&self) -> bool {
        self.naturality().is_natural()
    }

    /// Naturalizes leg by leg on a domain starting at 0.
    pub fn naturalize(&self) -> Result<Self> {
        let mut t = Rational::zero();
        let mut legs = Vec::with_capacity(self.legs.len());
        for leg in &self.legs {
            let path = naturalize_from(&leg.path, t)?;
            t = path.end_time();
            legs.push(Leg {
                cube: leg.cube,
                path,
            });
        }
        PLDPath::new(legs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PathFile = serde_json::from_str(text)?;
        let legs = file
            .legs
            .iter()
            .map(|l| {
                let bps = l
                    .breakpoints
                    .iter()
                    .map(|row| {
                        let (t, coords) = row
                            .split_first()
                            .ok_or_else(|| Error::Parse("empty breakpoint".into()))?;
                        let coords = coords.iter().map(Num::value).collect::<Result<Vec<_>>>()?;
                        Ok((t.value()?, RPoint::new(coords)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Leg {
                    cube: l.cube,
                    path: PLSegmentPath::new(l.dim, bps)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PLDPath::new(legs)
    }

    pub fn to_json(&self) -> String {
        let file = PathFile {
            legs: self
                .legs
                .iter()
                .map(|l| LegFile {
                    cube: l.cube,
                    dim: l.path.dim(),
                    breakpoints: l
                        .path
                        .breakpoints()
                        .iter()
                        .map(|(t, p)| {
                            std::iter::once(Num::Text(t.to_string()))
                                .chain(p.coords().iter().map(|c| Num::Text(c.to_string())))
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }
}

/// `p ∗ q`: `q` shifted in time to start when `p` ends.
pub fn moore_compose(sts: &Sts, p: &PLDPath, q: &PLDPath) -> Result<PLDPath> {
    let (a, b) = (p.end_vertex(sts)?, q.start_vertex(sts)?);
    if a != b {
        return Err(Error::EndpointMismatch(format!(
            "first path ends at vertex {a}, second starts at vertex {b}"
        )));
    }
    let delta = p.end_time() - q.start_time();
    let mut legs = p.legs.clone();
    legs.extend(q.legs.iter().map(|l| Leg {
        cube: l.cube,
        path: l.path.shifted(delta),
    }));
    PLDPath::new(legs)
}

// ---------------------------------------------------------------------------
// Maps induced on spaces of natural paths

/// The coface composite `δ : [k] → [m]` with `δ(0) = alpha`, `δ(1) = beta`,
/// where `k = d₁(alpha, beta)`.
pub fn induced_coface(alpha: &Vertex, beta: &Vertex) -> Result<CubeMap> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch {
            expected: alpha.dim(),
            found: beta.dim(),
        });
    }
    if !alpha.lt(beta) {
        return Err(Error::NotStrictlyBelow {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
        });
    }
    let free = alpha.bits() ^ beta.bits();
    Ok(embedding(
        free.count_ones() as usize,
        alpha.dim(),
        alpha.bits(),
        free,
    ))
}

/// The factorization `f ∘ δ = δ' ∘ [f]_{α,β}`; `psi` is `[f]_{α,β}` and
/// `phi` is `δ'`, running from `f(α)` to `f(β)`.
pub fn induced_path_factorization(
    f: &CubeMap,
    alpha: &Vertex,
    beta: &Vertex,
) -> Result<Factorization> {
    if alpha.dim() != f.dom() {
        return Err(Error::DimensionMismatch {
            expected: f.dom(),
            found: alpha.dim(),
        });
    }
    let delta = induced_coface(alpha, beta)?;
    let fac = factorize(&compose(f, &delta)?)?;
    debug_assert_eq!(fac.phi.bottom_image(), f.apply_bits(alpha.bits()));
    debug_assert_eq!(fac.phi.top_image(), f.apply_bits(beta.bits()));
    Ok(fac)
}

/// `[f]_{α,β}`, the endo of `[d₁(α,β)]` induced by `f`.
pub fn induced_path_map(f: &CubeMap, alpha: &Vertex, beta: &Vertex) -> Result<CubeMap> {
    Ok(induced_path_factorization(f, alpha, beta)?.psi)
}

/// `[g∘f]_{α,β} = [g]_{f(α),f(β)} ∘ [f]_{α,β}`.
pub fn check_cocycle(f: &CubeMap, g: &CubeMap, alpha: &Vertex, beta: &Vertex) -> Result<bool> {
    let lhs = induced_path_map(&compose(g, f)?, alpha, beta)?;
    let (fa, fb) = (f.apply(alpha)?, f.apply(beta)?);
    let rhs = compose(
        &induced_path_map(g, &fa, &fb)?,
        &induced_path_map(f, alpha, beta)?,
    )?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{coface, crushing_example, gamma1, symmetry};

    fn path(dim: usize, bps: &[(&str, &str)]) -> PLSegmentPath {
        PLSegmentPath::parse(dim, bps).unwrap()
    }

    fn v(c: &[u8]) -> Vertex {
        Vertex::from_coords(c).unwrap()
    }

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn diagonal() -> PLSegmentPath {
        path(2, &[("0", "0,0"), ("2", "1,1")])
    }

    fn staircase() -> PLSegmentPath {
        path(2, &[("0", "0,0"), ("1", "1,0"), ("2", "1,1")])
    }

    #[test]
    fn dpath_examples() {
        assert!(is_dpath(&path(2, &[("0", "0,0"), ("1", "1,1")])).ok());
        assert!(is_dpath(&staircase()).ok());
        let bad = path(
            2,
            &[("0", "0,0"), ("1", "1/2,1/2"), ("2", "1,1/4"), ("3", "1,1")],
        );
        assert_eq!(
            is_dpath(&bad).defect,
            Some(DPathDefect::Decreasing {
                segment: 1,
                coord: 2
            })
        );
        assert_eq!(
            is_dpath(&path(1, &[("0", "1")])).defect,
            Some(DPathDefect::Constant)
        );
        assert_eq!(
            is_dpath(&path(1, &[("0", "0"), ("1", "1/2")])).defect,
            Some(DPathDefect::EndNotVertex)
        );
        assert!(PLSegmentPath::parse(1, &[("1", "0"), ("1", "1")]).is_err());
    }

    #[test]
    fn natural_examples() {
        assert!(is_natural(&diagonal()));
        assert!(is_natural(&staircase()));
        assert!(!is_natural(&path(2, &[("0", "0,0"), ("1", "1,1")])));
        // relative to its own start
        assert!(is_natural(&path(2, &[("3", "1,0"), ("4", "1,1")])));
    }

    #[test]
    fn naturalize_examples() {
        let p = path(2, &[("0", "0,0"), ("1", "1,1")]);
        assert_eq!(naturalize(&p).unwrap(), diagonal());
        assert_eq!(naturalize(&staircase()).unwrap(), staircase());
        let stall = path(2, &[("0", "0,0"), ("1", "1,0"), ("5", "1,0"), ("6", "1,1")]);
        assert_eq!(naturalize(&stall).unwrap(), staircase());
        let n = naturalize(&stall).unwrap();
        assert_eq!(naturalize(&n).unwrap(), n);
        assert!(naturalize(&path(1, &[("0", "1"), ("1", "0")])).is_err());
    }

    #[test]
    fn quasi_isometry_matches_naturality() {
        for p in [
            diagonal(),
            staircase(),
            path(2, &[("0", "0,0"), ("1", "1,1")]),
        ] {
            assert_eq!(is_breakpoint_quasi_isometry(&p), is_natural(&p));
        }
    }

    #[test]
    fn transport_examples() {
        let s1 = symmetry(1, 2).unwrap();
        assert_eq!(transport(&s1, &diagonal()).unwrap(), diagonal());
        assert_eq!(transport(&gamma1(), &diagonal()).unwrap(), diagonal());
        assert_eq!(transport(&gamma1(), &staircase()).unwrap(), staircase());
        // the other staircase is folded onto the first
        let other = path(2, &[("0", "0,0"), ("1", "0,1"), ("2", "1,1")]);
        assert_eq!(transport(&gamma1(), &other).unwrap(), staircase());
        let d = coface(1, 1, 2).unwrap();
        let edge = path(1, &[("0", "0"), ("1", "1")]);
        assert_eq!(
            transport(&d, &edge).unwrap(),
            path(2, &[("0", "1,0"), ("1", "1,1")])
        );
    }

    #[test]
    fn transport_inserts_crossings() {
        // x₂ overtakes x₁ at t = 1
        let p = path(2, &[("0", "1/2,0"), ("2", "1/2,1")]);
        let q = transport(&gamma1(), &p).unwrap();
        assert_eq!(q.breakpoints().len(), 3);
        assert_eq!(q.breakpoints()[1], (r("1"), "1/2,1/2".parse().unwrap()));
        assert_eq!(q.point_at(r("1/2")).unwrap(), "1/2,1/4".parse().unwrap());
        assert_eq!(q.end(), &"1,1/2".parse::<RPoint>().unwrap());
        let nat = naturalize(&path(
            3,
            &[("0", "0,0,0"), ("1", "1,1/3,2/3"), ("2", "1,1,1")],
        ))
        .unwrap();
        assert!(is_natural(&transport(&crushing_example(), &nat).unwrap()));
    }

    #[test]
    fn moore_composition() {
        let sts = Sts::representable(2, 2).unwrap();
        let top = crate::sts::representable_id(&CubeMap::identity(2)).unwrap();
        let p = PLDPath::single(top, path(2, &[("0", "0,0"), ("1", "1,0")]));
        let q = PLDPath::single(top, path(2, &[("0", "1,0"), ("1", "1,1")]));
        let pq = moore_compose(&sts, &p, &q).unwrap();
        assert_eq!(pq.legs().len(), 2);
        assert_eq!(pq.end_time(), r("2"));
        assert!(pq.is_natural());
        assert_eq!(pq.naturality().total_length, r("2"));
        assert!(moore_compose(&sts, &q, &p).is_err());
        pq.check_in(&sts).unwrap();
        let back = PLDPath::from_json(&pq.to_json()).unwrap();
        assert_eq!(back, pq);
    }

    #[test]
    fn json_accepts_integers() {
        let text = r#"{"legs":[{"cube":0,"dim":2,"breakpoints":[[0,"0","0"],["2",1,"1"]]}]}"#;
        let p = PLDPath::from_json(text).unwrap();
        assert_eq!(p.legs()[0].path, diagonal());
        assert!(PLDPath::from_json(r#"{"legs":[]}"#).is_err());
    }

    #[test]
    fn induced_coface_examples() {
        let d = induced_coface(&v(&[0, 1, 0]), &v(&[1, 1, 1])).unwrap();
        assert_eq!(d.to_literal(), "2>3:2,3,6,7");
        assert_eq!(
            induced_coface(&v(&[0, 0]), &v(&[1, 1])).unwrap(),
            CubeMap::identity(2)
        );
        assert_eq!(
            induced_coface(&v(&[0, 0]), &v(&[0, 1])).unwrap(),
            coface(1, 0, 2).unwrap()
        );
        assert!(induced_coface(&v(&[0, 1]), &v(&[1, 0])).is_err());
        assert!(induced_coface(&v(&[1, 1]), &v(&[1, 1])).is_err());
    }

    #[test]
    fn induced_path_map_examples() {
        let f = crushing_example();
        assert_eq!(
            induced_path_map(&f, &v(&[0, 0, 0]), &v(&[1, 1, 1])).unwrap(),
            f
        );
        assert_eq!(
            induced_path_map(&f, &v(&[0, 0, 0]), &v(&[0, 0, 1])).unwrap(),
            CubeMap::identity(1)
        );
        let s1 = symmetry(1, 2).unwrap();
        let fac = induced_path_factorization(&s1, &v(&[0, 0]), &v(&[1, 0])).unwrap();
        assert_eq!(fac.psi, CubeMap::identity(1));
        assert_eq!(fac.phi, coface(1, 0, 2).unwrap());
    }

    #[test]
    fn cocycle_on_examples() {
        let f = crushing_example();
        let g = symmetry(2, 3).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let (va, vb) = (Vertex::new(3, a).unwrap(), Vertex::new(3, b).unwrap());
                if va.lt(&vb) {
                    assert!(check_cocycle(&f, &g, &va, &vb).unwrap());
                }
            }
        }
    }
}
