//! Directed distances in realizations of finite symmetric transverse sets:
//! shortest paths on the 1-skeleton, sampled chain bounds through the cubes,
//! and lengths of d-paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::cube::{ExtDist, Rational};
use crate::dpath::PLDPath;
use crate::error::{Error, Result};
use crate::homset::endos;
use crate::point::{d1_point, parse_rational, RPoint};
use crate::quotient::UnionFind;
use crate::sts::Sts;

/// Vertices of `K` with one arc per edge `e`, from `(δ₁⁰)^*e` to `(δ₁¹)^*e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonDigraph {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

impl SkeletonDigraph {
    pub fn new(k: &Sts) -> Self {
        let nodes = k.count(0);
        let arcs: Vec<(usize, usize)> = (0..k.count(1))
            .map(|e| (k.face(1, 1, 0, e), k.face(1, 1, 1, e)))
            .collect();
        let mut out = vec![Vec::new(); nodes];
        for &(s, t) in &arcs {
            out[s].push(t);
        }
        SkeletonDigraph { nodes, arcs, out }
    }

    /// Unit-weight shortest path length.
    pub fn distance(&self, a: usize, b: usize) -> Result<ExtDist> {
        for v in [a, b] {
            if v >= self.nodes {
                return Err(Error::UnknownCube { dim: 0, id: v });
            }
        }
        let mut dist = vec![usize::MAX; self.nodes];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Ok(ExtDist::from_int(dist[v] as i64));
            }
            for &w in &self.out[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(ExtDist::Infinite)
    }
}

/// Directed distance between two vertices along the 1-skeleton.
pub fn vertex_distance(k: &Sts, a: usize, b: usize) -> Result<ExtDist> {
    SkeletonDigraph::new(k).distance(a, b)
}

/// A point `[c; x]` of the realization: local coordinates `x` in the cube
/// `c` of dimension `x.dim()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointPresentation {
    pub cube: usize,
    pub local: RPoint,
}

impl PointPresentation {
    pub fn dim(&self) -> usize {
        self.local.dim()
    }
}

impl FromStr for PointPresentation {
    type Err = Error;

    /// `"c,x1,…,xn"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let cube = parts
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("`{s}` does not start with a cube id")))?;
        let coords = parts.map(parse_rational).collect::<Result<Vec<_>>>()?;
        Ok(PointPresentation {
            cube,
            local: RPoint::new(coords)?,
        })
    }
}

impl fmt::Display for PointPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.local.dim() == 0 {
            write!(f, "{}", self.cube)
        } else {
            write!(f, "{},{}", self.cube, self.local)
        }
    }
}

/// Limits for [`chain_distance_sample`]: grids of resolution `2^k` are
/// tried for `k = 0, 1, …, max_level` while the node count stays within
/// `max_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainBudget {
    pub max_nodes: usize,
    pub max_level: u32,
}

impl Default for ChainBudget {
    fn default() -> Self {
        ChainBudget {
            max_nodes: 200_000,
            max_level: 3,
        }
    }
}

/// Best upper bound found, the finest level used, and whether the node
/// budget cut the refinement short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBound {
    pub bound: ExtDist,
    pub level: u32,
    pub exhausted: bool,
}

/// Grid point `y/r` of `[0,1]^n`, coordinate 1 least significant.
fn grid_index(y: &[u32], r: u32) -> usize {
    y.iter()
        .rev()
        .fold(0, |acc, &v| acc * (r as usize + 1) + v as usize)
}

fn grid_points(n: usize, r: u32) -> impl Iterator<Item = Vec<u32>> {
    let side = r as usize + 1;
    (0..side.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let v = (idx % side) as u32;
                idx /= side;
                v
            })
            .collect()
    })
}

/// Max-min evaluation of an endo on integer coordinates.
fn endo_on_grid(table: &[u32], y: &[u32]) -> Vec<u32> {
    (0..y.len())
        .map(|i| {
            table
                .iter()
                .enumerate()
                .filter(|(_, &img)| img >> i & 1 == 1)
                .map(|(eps, _)| {
                    (0..y.len())
                        .filter(|k| eps >> k & 1 == 1)
                        .map(|k| y[k])
                        .min()
                        .expect("nonempty support")
                })
                .max()
                .expect("the top vertex maps to the top vertex")
        })
        .collect()
}

/// The grid graph of one resolution level: grid points of every cube,
/// identified across faces and degeneracies, with an arc of length `1/r`
/// for each unit step up a coordinate inside a cube.
#[derive(Debug, Clone)]
pub struct ChainGraph {
    r: u32,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    classes: crate::quotient::QuotientSet,
    adj: Vec<Vec<usize>>,
}

impl ChainGraph {
    /// Grid points with denominators `2^level`.
    pub fn build(k: &Sts, level: u32) -> Result<Self> {
        let r = 1u32 << level;
        let side = r as usize + 1;
        let mut offsets = Vec::new();
        let mut total = 0usize;
        for n in 0..=k.max_dim() {
            offsets.push(total);
            total += k.count(n) * side.pow(n as u32);
        }
        let raw =
            |n: usize, c: usize, y: &[u32]| offsets[n] + c * side.pow(n as u32) + grid_index(y, r);
        let mut uf = UnionFind::new(total);
        for n in 1..=k.max_dim() {
            for c in 0..k.count(n) {
                for y in grid_points(n - 1, r) {
                    for slot in 0..2 * n {
                        let (i, a) = (slot / 2 + 1, (slot % 2) as u8);
                        let mut z = y.clone();
                        z.insert(i - 1, a as u32 * r);
                        uf.union(raw(n - 1, k.face(n, i, a, c), &y), raw(n, c, &z));
                    }
                }
            }
        }
        for n in 2..=k.max_dim() {
            if k.count(n) == 0 {
                continue;
            }
            let points: Vec<Vec<u32>> = grid_points(n, r).collect();
            for (e, psi) in endos(n)?.iter().enumerate() {
                if psi.is_identity() {
                    continue;
                }
                let images: Vec<Vec<u32>> = points
                    .iter()
                    .map(|y| endo_on_grid(psi.table(), y))
                    .collect();
                for c in 0..k.count(n) {
                    let fc = k.endo_action(n, e, c);
                    for (y, ty) in points.iter().zip(&images) {
                        uf.union(raw(n, fc, y), raw(n, c, ty));
                    }
                }
            }
        }
        let classes = uf.into_quotient();
        let mut adj = vec![Vec::new(); classes.class_count()];
        for n in 1..=k.max_dim() {
            for c in 0..k.count(n) {
                for y in grid_points(n, r) {
                    let from = classes.class_of(raw(n, c, &y));
                    for i in 0..n {
                        if y[i] < r {
                            let mut z = y.clone();
                            z[i] += 1;
                            adj[from].push(classes.class_of(raw(n, c, &z)));
                        }
                    }
                }
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ChainGraph {
            r,
            dims: k.counts().to_vec(),
            offsets,
            classes,
            adj,
        })
    }

    /// Number of points of the realization on this grid.
    pub fn node_count(&self) -> usize {
        self.classes.class_count()
    }

    fn node(&self, n: usize, c: usize, y: &[u32]) -> usize {
        let side = (self.r as usize + 1).pow(n as u32);
        self.classes
            .class_of(self.offsets[n] + c * side + grid_index(y, self.r))
    }

    /// Shortest chain from `p` to `q`: a straight move from `p` to a grid
    /// point of its cube, grid steps, and a straight move to `q`; or a
    /// single straight move when both lie in one cube.
    pub fn bound(&self, p: &PointPresentation, q: &PointPresentation) -> Result<ExtDist> {
        for x in [p, q] {
            if x.dim() >= self.dims.len() || x.cube >= self.dims[x.dim()] {
                return Err(Error::UnknownCube {
                    dim: x.dim(),
                    id: x.cube,
                });
            }
        }
        let step = Rational::new(1, self.r as i64);
        let nodes = self.node_count();
        let mut dist: Vec<Option<Rational>> = vec![None; nodes];
        let mut heap = BinaryHeap::new();
        let mut best = ExtDist::Infinite;
        if p.cube == q.cube && p.dim() == q.dim() {
            best = d1_point(&p.local, &q.local)?;
        }
        for y in grid_points(p.dim(), self.r) {
            if let ExtDist::Finite(d) = d1_point(&p.local, &grid_point(&y, self.r))? {
                let v = self.node(p.dim(), p.cube, &y);
                if dist[v].is_none_or(|old| d < old) {
                    dist[v] = Some(d);
                    heap.push(Reverse((d, v)));
                }
            }
        }
        let mut exit: Vec<Option<Rational>> = vec![None; nodes];
        for y in grid_points(q.dim(), self.r) {
            if let ExtDist::Finite(d) = d1_point(&grid_point(&y, self.r), &q.local)? {
                let v = self.node(q.dim(), q.cube, &y);
                if exit[v].is_none_or(|old| d < old) {
                    exit[v] = Some(d);
                }
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|known| d > known) {
                continue;
            }
            if ExtDist::Finite(d) >= best {
                break;
            }
            if let Some(e) = exit[v] {
                best = best.min(ExtDist::Finite(d + e));
            }
            for &w in &self.adj[v] {
                let nd = d + step;
                if dist[w].is_none_or(|known| nd < known) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        Ok(best)
    }
}

fn grid_point(y: &[u32], r: u32) -> RPoint {
    RPoint::new_unchecked(
        y.iter()
            .map(|&v| Rational::new(v as i64, r as i64))
            .collect(),
    )
}

/// Upper bound on the realized directed distance from `p` to `q`, taken
/// over chains through nested dyadic grids, with points identified across
/// shared faces and degeneracies. Refining the grid only adds chains, so
/// the bound never increases with budget.
pub fn chain_distance_sample(
    k: &Sts,
    p: &PointPresentation,
    q: &PointPresentation,
    budget: ChainBudget,
) -> Result<ChainBound> {
    for x in [p, q] {
        if x.dim() > k.max_dim() || x.cube >= k.count(x.dim()) {
            return Err(Error::UnknownCube {
                dim: x.dim(),
                id: x.cube,
            });
        }
    }
    let mut best = ExtDist::Infinite;
    let mut level = 0;
    let mut exhausted = false;
    for lv in 0..=budget.max_level {
        let side = (1usize << lv) + 1;
        let nodes: usize = (0..=k.max_dim())
            .map(|n| k.count(n) * side.pow(n as u32))
            .sum();
        if nodes > budget.max_nodes {
            exhausted = true;
            break;
        }
        best = best.min(ChainGraph::build(k, lv)?.bound(p, q)?);
        level = lv;
    }
    Ok(ChainBound {
        bound: best,
        level,
        exhausted,
    })
}

/// Total height increase over all legs.
pub fn dpath_length(p: &PLDPath) -> Rational {
    p.naturality().total_length
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{d1_vertex, CubeMap, Vertex};
    use crate::dpath::{moore_compose, PLSegmentPath};
    use crate::sts::representable_id;

    fn vid(bits: u32, n: usize) -> usize {
        representable_id(&CubeMap::new(0, n, vec![bits]).unwrap()).unwrap()
    }

    #[test]
    fn skeleton_distance_examples() {
        let sq = Sts::representable(2, 2).unwrap();
        assert_eq!(
            vertex_distance(&sq, vid(0, 2), vid(3, 2)).unwrap(),
            ExtDist::from_int(2)
        );
        assert_eq!(
            vertex_distance(&sq, vid(2, 2), vid(1, 2)).unwrap(),
            ExtDist::Infinite
        );
        assert_eq!(
            vertex_distance(&sq, vid(1, 2), vid(1, 2)).unwrap(),
            ExtDist::zero()
        );
        assert!(vertex_distance(&sq, 0, 9).is_err());
    }

    #[test]
    fn skeleton_matches_cube_metric() {
        for n in 0..=3 {
            let k = Sts::representable(n, n).unwrap();
            for a in 0..1u32 << n {
                for b in 0..1u32 << n {
                    let expected =
                        d1_vertex(&Vertex::new(n, a).unwrap(), &Vertex::new(n, b).unwrap())
                            .unwrap();
                    assert_eq!(vertex_distance(&k, vid(a, n), vid(b, n)).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn grid_endo_is_max_min() {
        assert_eq!(endo_on_grid(&[0, 1, 1, 3], &[1, 3]), vec![3, 1]);
        assert_eq!(
            endo_on_grid(&[0, 4, 4, 6, 4, 5, 6, 7], &[4, 2, 1]),
            vec![1, 2, 4]
        );
    }

    #[test]
    fn chain_examples() {
        let sq = Sts::representable(2, 2).unwrap();
        let top = representable_id(&CubeMap::identity(2)).unwrap();
        let pt = |s: &str| PointPresentation {
            cube: top,
            local: s.parse().unwrap(),
        };
        let b = chain_distance_sample(&sq, &pt("1/3,1/5"), &pt("1/2,1"), ChainBudget::default())
            .unwrap();
        assert_eq!(b.bound, ExtDist::Finite(Rational::new(29, 30)));
        let b =
            chain_distance_sample(&sq, &pt("1,1/2"), &pt("1/2,1"), ChainBudget::default()).unwrap();
        assert_eq!(b.bound, ExtDist::Infinite);
        let b = chain_distance_sample(
            &sq,
            &pt("0,0"),
            &pt("1,1"),
            ChainBudget {
                max_nodes: 10_000,
                max_level: 0,
            },
        )
        .unwrap();
        assert_eq!(b.bound, ExtDist::from_int(2));
        let tight = chain_distance_sample(
            &sq,
            &pt("0,0"),
            &pt("1,1"),
            ChainBudget {
                max_nodes: 20,
                max_level: 3,
            },
        )
        .unwrap();
        assert!(tight.exhausted);
    }

    #[test]
    fn chains_cross_shared_faces() {
        // two edges glued head to tail
        let script = crate::sts::parse_build_script(
            r#"[{"dim":0},{"dim":0},{"dim":0},
                {"dim":1,"attach":{"1,0":0,"1,1":1}},
                {"dim":1,"attach":{"1,0":1,"1,1":2}}]"#,
        )
        .unwrap();
        let (k, _) = crate::sts::certify_cellular(&script, None).unwrap();
        let p = PointPresentation {
            cube: 0,
            local: "1/4".parse().unwrap(),
        };
        let q = PointPresentation {
            cube: 1,
            local: "1/2".parse().unwrap(),
        };
        let b = chain_distance_sample(&k, &p, &q, ChainBudget::default()).unwrap();
        assert_eq!(b.bound, ExtDist::Finite(Rational::new(5, 4)));
        let back = chain_distance_sample(&k, &q, &p, ChainBudget::default()).unwrap();
        assert_eq!(back.bound, ExtDist::Infinite);
        assert_eq!(vertex_distance(&k, 0, 2).unwrap(), ExtDist::from_int(2));
    }

    #[test]
    fn presentation_parsing() {
        let p: PointPresentation = "3,1/2,1".parse().unwrap();
        assert_eq!(p.cube, 3);
        assert_eq!(p.to_string(), "3,1/2,1");
        assert!("x,1".parse::<PointPresentation>().is_err());
        assert!("1,2".parse::<PointPresentation>().is_err());
    }

    #[test]
    fn length_examples() {
        let sq = Sts::representable(2, 2).unwrap();
        let top = representable_id(&CubeMap::identity(2)).unwrap();
        let diag = PLDPath::single(
            top,
            PLSegmentPath::parse(2, &[("0", "0,0"), ("1", "1,1")]).unwrap(),
        );
        assert_eq!(dpath_length(&diag), Rational::from_integer(2));
        let e1 = PLDPath::single(
            top,
            PLSegmentPath::parse(2, &[("0", "0,0"), ("1", "1,0")]).unwrap(),
        );
        let e2 = PLDPath::single(
            top,
            PLSegmentPath::parse(2, &[("0", "1,0"), ("1", "1,1")]).unwrap(),
        );
        assert_eq!(
            dpath_length(&moore_compose(&sq, &e1, &e2).unwrap()),
            Rational::from_integer(2)
        );
        let nat = diag.naturalize().unwrap();
        assert_eq!(dpath_length(&nat), nat.end_time() - nat.start_time());
    }
}
