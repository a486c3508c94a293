//! Boolean cubes `[n] = {0,1}^n` and cotransverse maps between them.
//!
//! A vertex of `[n]` is stored as an `n`-bit mask. Coordinate 1 is the least
//! significant bit, so `(1,0)` in `[2]` has bits `0b01`. Map tables use the
//! same convention: entry `k` of a table is the image of the vertex whose
//! bits equal `k`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational numbers used for every coordinate, time and distance.
pub type Rational = Ratio<i64>;

/// Largest cube dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::DimensionTooLarge(n))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Scatter the low bits of `bits` into the positions set in `mask`.
#[inline]
pub(crate) fn deposit(bits: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut src = 0;
    for pos in 0..32 {
        if mask >> pos & 1 == 1 {
            out |= (bits >> src & 1) << pos;
            src += 1;
        }
    }
    out
}

/// Gather the bits of `bits` at the positions set in `mask` into the low bits.
#[inline]
pub(crate) fn extract(bits: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut dst = 0;
    for pos in 0..32 {
        if mask >> pos & 1 == 1 {
            out |= (bits >> pos & 1) << dst;
            dst += 1;
        }
    }
    out
}

/// A point of the boolean cube `[dim]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    dim: usize,
    bits: u32,
}

impl Vertex {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        check_dim(dim)?;
        if bits & !full_mask(dim) != 0 {
            return Err(Error::VertexOutOfRange {
                dim,
                bits: bits as u64,
            });
        }
        Ok(Vertex { dim, bits })
    }

    pub(crate) const fn new_unchecked(dim: usize, bits: u32) -> Self {
        Vertex { dim, bits }
    }

    /// Builds a vertex from its coordinates `(ε₁, …, εₙ)`.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let mut bits = 0;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Error::Parse(format!("coordinate {c} is not 0 or 1"))),
            }
        }
        Vertex::new(coords.len(), bits)
    }

    pub fn zero(dim: usize) -> Self {
        Vertex { dim, bits: 0 }
    }

    pub fn top(dim: usize) -> Self {
        Vertex {
            dim,
            bits: full_mask(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `i` (1-based).
    pub fn coord(&self, i: usize) -> u8 {
        (self.bits >> (i - 1) & 1) as u8
    }

    pub fn coords(&self) -> Vec<u8> {
        (1..=self.dim).map(|i| self.coord(i)).collect()
    }

    /// Number of coordinates equal to 1.
    pub fn height(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Product order.
    pub fn le(&self, other: &Vertex) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn lt(&self, other: &Vertex) -> bool {
        self.le(other) && self.bits != other.bits
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 1..=self.dim {
            if i > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.coord(i))?;
        }
        write!(f, ")")
    }
}

pub fn height(v: &Vertex) -> usize {
    v.height()
}

/// A value of `[0, ∞]` with exact finite part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtDist {
    Finite(Rational),
    Infinite,
}

impl ExtDist {
    pub fn zero() -> Self {
        ExtDist::Finite(Rational::from_integer(0))
    }

    pub fn from_int(v: i64) -> Self {
        ExtDist::Finite(Rational::from_integer(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtDist::Finite(r) => Some(r),
            ExtDist::Infinite => None,
        }
    }
}

impl Add for ExtDist {
    type Output = ExtDist;
    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinite,
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp(b),
            (ExtDist::Finite(_), ExtDist::Infinite) => Less,
            (ExtDist::Infinite, ExtDist::Finite(_)) => Greater,
            (ExtDist::Infinite, ExtDist::Infinite) => Equal,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(r) => write!(f, "{r}"),
            ExtDist::Infinite => write!(f, "inf"),
        }
    }
}

/// Directed distance between vertices: `h(y) - h(x)` when `x ≤ y`, else infinity.
pub fn d1_vertex(x: &Vertex, y: &Vertex) -> Result<ExtDist> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch {
            expected: x.dim,
            found: y.dim,
        });
    }
    if x.le(y) {
        Ok(ExtDist::from_int((y.height() - x.height()) as i64))
    } else {
        Ok(ExtDist::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    TableLength,
    ImageOutOfRange,
    DomainExceedsCodomain,
    NotStrictlyIncreasing,
    NotAdjacencyPreserving,
}

/// First offending pair `(x, y)` of a table that fails to be cotransverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub x: u32,
    pub y: u32,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::TableLength => "wrong table length",
            ViolationKind::ImageOutOfRange => "image outside the codomain",
            ViolationKind::DomainExceedsCodomain => "domain dimension exceeds codomain",
            ViolationKind::NotStrictlyIncreasing => "not strictly increasing",
            ViolationKind::NotAdjacencyPreserving => {
                "adjacent vertices not sent to adjacent vertices"
            }
        };
        write!(f, "{what} at pair ({}, {})", self.x, self.y)
    }
}

fn structural_check(table: &[u32], m: usize, n: usize) -> Option<Violation> {
    if table.len() != 1usize << m {
        return Some(Violation {
            x: 0,
            y: 0,
            kind: ViolationKind::TableLength,
        });
    }
    if m > n {
        return Some(Violation {
            x: 0,
            y: 0,
            kind: ViolationKind::DomainExceedsCodomain,
        });
    }
    let mask = full_mask(n);
    table
        .iter()
        .position(|v| v & !mask != 0)
        .map(|x| Violation {
            x: x as u32,
            y: x as u32,
            kind: ViolationKind::ImageOutOfRange,
        })
}

/// Checks both cotransverse axioms on covering pairs only.
///
/// Pairs are visited in increasing `x`, then increasing flipped coordinate.
pub fn validate_cotransverse(
    table: &[u32],
    m: usize,
    n: usize,
) -> std::result::Result<(), Violation> {
    if let Some(v) = structural_check(table, m, n) {
        return Err(v);
    }
    for x in 0..(1u32 << m) {
        for i in 0..m {
            if x >> i & 1 == 1 {
                continue;
            }
            let y = x | 1 << i;
            let (fx, fy) = (table[x as usize], table[y as usize]);
            if fx & !fy != 0 || fx == fy {
                return Err(Violation {
                    x,
                    y,
                    kind: ViolationKind::NotStrictlyIncreasing,
                });
            }
            if fy.count_ones() != fx.count_ones() + 1 {
                return Err(Violation {
                    x,
                    y,
                    kind: ViolationKind::NotAdjacencyPreserving,
                });
            }
        }
    }
    Ok(())
}

/// Quadratic reference check over all pairs of vertices.
pub fn validate_cotransverse_pairwise(
    table: &[u32],
    m: usize,
    n: usize,
) -> std::result::Result<(), Violation> {
    if let Some(v) = structural_check(table, m, n) {
        return Err(v);
    }
    let size = 1u32 << m;
    for x in 0..size {
        for y in 0..size {
            let vx = Vertex::new_unchecked(m, x);
            let vy = Vertex::new_unchecked(m, y);
            if !vx.lt(&vy) {
                continue;
            }
            let fx = Vertex::new_unchecked(n, table[x as usize]);
            let fy = Vertex::new_unchecked(n, table[y as usize]);
            if !fx.lt(&fy) {
                return Err(Violation {
                    x,
                    y,
                    kind: ViolationKind::NotStrictlyIncreasing,
                });
            }
            if vy.height() == vx.height() + 1 && fy.height() != fx.height() + 1 {
                return Err(Violation {
                    x,
                    y,
                    kind: ViolationKind::NotAdjacencyPreserving,
                });
            }
        }
    }
    Ok(())
}

/// A validated cotransverse map `[dom] → [cod]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMap {
    dom: usize,
    cod: usize,
    table: Vec<u32>,
}

impl CubeMap {
    pub fn new(dom: usize, cod: usize, table: Vec<u32>) -> Result<Self> {
        check_dim(cod)?;
        validate_cotransverse(&table, dom, cod).map_err(Error::NotCotransverse)?;
        Ok(CubeMap { dom, cod, table })
    }

    /// Caller guarantees the table is cotransverse.
    pub(crate) fn from_table_unchecked(dom: usize, cod: usize, table: Vec<u32>) -> Self {
        debug_assert!(validate_cotransverse(&table, dom, cod).is_ok());
        CubeMap { dom, cod, table }
    }

    pub fn identity(n: usize) -> Self {
        CubeMap {
            dom: n,
            cod: n,
            table: (0..1u32 << n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.table.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    #[inline]
    pub fn apply_bits(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn apply(&self, x: &Vertex) -> Result<Vertex> {
        if x.dim != self.dom {
            return Err(Error::DimensionMismatch {
                expected: self.dom,
                found: x.dim,
            });
        }
        Ok(Vertex::new_unchecked(self.cod, self.table[x.bits as usize]))
    }

    /// Image of the bottom vertex `0_m`.
    pub fn bottom_image(&self) -> u32 {
        self.table[0]
    }

    /// Image of the top vertex `1_m`.
    pub fn top_image(&self) -> u32 {
        self.table[full_mask(self.dom) as usize]
    }

    /// Whether the map lies in the cocubical subcategory, i.e. inserts
    /// constant coordinates and keeps the free ones in order.
    pub fn is_cocubical(&self) -> bool {
        let lo = self.bottom_image();
        let free = lo ^ self.top_image();
        free.count_ones() as usize == self.dom
            && self
                .table
                .iter()
                .enumerate()
                .all(|(x, &v)| v == lo | deposit(x as u32, free))
    }

    /// Map literal `m>n:a0,a1,...`.
    pub fn to_literal(&self) -> String {
        let cells: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        format!("{}>{}:{}", self.dom, self.cod, cells.join(","))
    }
}

impl fmt::Display for CubeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl FromStr for CubeMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed map literal `{s}`"));
        let (dims, cells) = s.trim().split_once(':').ok_or_else(bad)?;
        let (m, n) = dims.split_once('>').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        check_dim(m)?;
        check_dim(n)?;
        let table = cells
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CubeMap::new(m, n, table)
    }
}

/// `g ∘ f`.
pub fn compose(g: &CubeMap, f: &CubeMap) -> Result<CubeMap> {
    if f.cod != g.dom {
        return Err(Error::DimensionMismatch {
            expected: g.dom,
            found: f.cod,
        });
    }
    let table = f.table.iter().map(|&y| g.table[y as usize]).collect();
    Ok(CubeMap::from_table_unchecked(f.dom, g.cod, table))
}

/// The coface `δᵢ^α : [n-1] → [n]` inserting `alpha` at coordinate `i`.
pub fn coface(i: usize, alpha: u8, n: usize) -> Result<CubeMap> {
    check_dim(n)?;
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange {
            what: "coface",
            index: i,
            max: n,
        });
    }
    if alpha > 1 {
        return Err(Error::Parse(format!("coface value {alpha} is not 0 or 1")));
    }
    let pos = i - 1;
    let low = full_mask(pos);
    let table = (0..1u32 << (n - 1))
        .map(|x| (x & low) | (alpha as u32) << pos | (x & !low) << 1)
        .collect();
    Ok(CubeMap::from_table_unchecked(n - 1, n, table))
}

/// The symmetry `σᵢ : [n] → [n]` swapping coordinates `i` and `i+1`.
pub fn symmetry(i: usize, n: usize) -> Result<CubeMap> {
    check_dim(n)?;
    if i == 0 || i + 1 > n {
        return Err(Error::IndexOutOfRange {
            what: "symmetry",
            index: i,
            max: n.saturating_sub(1),
        });
    }
    let (a, b) = (i - 1, i);
    let table = (0..1u32 << n)
        .map(|x| {
            let (ba, bb) = (x >> a & 1, x >> b & 1);
            (x & !(1 << a | 1 << b)) | bb << a | ba << b
        })
        .collect();
    Ok(CubeMap::from_table_unchecked(n, n, table))
}

/// `γ₁(ε₁, ε₂) = (max, min)` on `[2]`.
pub fn gamma1() -> CubeMap {
    CubeMap::from_table_unchecked(2, 2, vec![0, 1, 1, 3])
}

/// The endo of `[n]` sending every vertex of height `k` to `ε_{1..k}`.
///
/// It is constant on height levels, so `sort(n) ∘ f = sort(n)` for every
/// endo `f`. For `n = 2` it is `γ₁`.
pub fn sort_to_front(n: usize) -> Result<CubeMap> {
    check_dim(n)?;
    let table = (0..1u32 << n)
        .map(|x| full_mask(x.count_ones() as usize))
        .collect();
    Ok(CubeMap::from_table_unchecked(n, n, table))
}

/// The example map `[3] → [3]` whose 2-face `(*,*,0)` collapses onto two edges.
pub fn crushing_example() -> CubeMap {
    CubeMap::from_table_unchecked(3, 3, vec![0, 4, 4, 6, 4, 5, 6, 7])
}

/// Coface composite `[m] → [n]` sending `x` to `base | deposit(x, free)`.
pub(crate) fn embedding(m: usize, n: usize, base: u32, free: u32) -> CubeMap {
    debug_assert_eq!(free.count_ones() as usize, m);
    debug_assert_eq!(base & free, 0);
    let table = (0..1u32 << m).map(|x| base | deposit(x, free)).collect();
    CubeMap::from_table_unchecked(m, n, table)
}

/// Elementary cofaces whose composite is the cocubical map `phi`, listed in
/// application order: `phi = steps[k-1] ∘ … ∘ steps[0]`.
pub(crate) fn coface_steps(phi: &CubeMap) -> Vec<(usize, u8)> {
    debug_assert!(phi.is_cocubical());
    let lo = phi.bottom_image();
    let free = lo ^ phi.top_image();
    let constant = full_mask(phi.cod) & !free;
    (0..phi.cod)
        .filter(|p| constant >> p & 1 == 1)
        .map(|p| (p + 1, (lo >> p & 1) as u8))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_examples() {
        assert_eq!(Vertex::new(3, 0b000).unwrap().height(), 0);
        assert_eq!(Vertex::new(3, 0b111).unwrap().height(), 3);
        assert_eq!(Vertex::new(3, 0b101).unwrap().height(), 2);
    }

    #[test]
    fn vertex_range_checked() {
        assert!(Vertex::new(2, 0b100).is_err());
        assert_eq!(Vertex::new(0, 0).unwrap(), Vertex::zero(0));
    }

    #[test]
    fn d1_vertex_examples() {
        let v = |c: &[u8]| Vertex::from_coords(c).unwrap();
        assert_eq!(
            d1_vertex(&v(&[0, 0]), &v(&[1, 1])).unwrap(),
            ExtDist::from_int(2)
        );
        assert_eq!(
            d1_vertex(&v(&[0, 1]), &v(&[1, 0])).unwrap(),
            ExtDist::Infinite
        );
        assert_eq!(
            d1_vertex(&v(&[1, 0, 0]), &v(&[1, 1, 0])).unwrap(),
            ExtDist::from_int(1)
        );
        assert!(d1_vertex(&v(&[1, 0, 0]), &v(&[1, 1])).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_cotransverse(&[0, 1, 1, 3], 2, 2).is_ok());
        let err = validate_cotransverse(&[0, 0, 0, 0], 2, 2).unwrap_err();
        assert_eq!(err.kind, ViolationKind::NotStrictlyIncreasing);
        assert_eq!((err.x, err.y), (0, 1));
        assert!(validate_cotransverse(crushing_example().table(), 3, 3).is_ok());
    }

    #[test]
    fn adjacency_violation_reported() {
        // 0 -> 3 jumps two levels
        let err = validate_cotransverse(&[0, 3], 1, 2).unwrap_err();
        assert_eq!(err.kind, ViolationKind::NotAdjacencyPreserving);
        assert!(validate_cotransverse(&[0, 1], 2, 2).is_err());
        assert_eq!(
            validate_cotransverse(&[0, 1, 2, 3], 2, 1).unwrap_err().kind,
            ViolationKind::DomainExceedsCodomain
        );
    }

    #[test]
    fn pairwise_oracle_agrees_on_all_small_tables() {
        for (m, n) in [(0, 2), (1, 2), (2, 2), (1, 3), (2, 3)] {
            let size = 1usize << m;
            let cod = 1u32 << n;
            let total = (cod as usize).pow(size as u32);
            for code in 0..total {
                let mut c = code;
                let table: Vec<u32> = (0..size)
                    .map(|_| {
                        let v = (c % cod as usize) as u32;
                        c /= cod as usize;
                        v
                    })
                    .collect();
                assert_eq!(
                    validate_cotransverse(&table, m, n).is_ok(),
                    validate_cotransverse_pairwise(&table, m, n).is_ok(),
                    "{m}>{n}: {table:?}"
                );
            }
        }
    }

    #[test]
    fn compose_examples() {
        let f = crushing_example();
        assert_eq!(compose(&CubeMap::identity(3), &f).unwrap(), f);
        let s = symmetry(1, 2).unwrap();
        assert!(compose(&s, &s).unwrap().is_identity());
        // γ₁∘σ₁: (0,1)->(1,0)->(1,0), (1,0)->(0,1)->(1,0)
        assert_eq!(compose(&gamma1(), &s).unwrap(), gamma1());
        assert!(compose(&f, &s).is_err());
    }

    #[test]
    fn generators() {
        let c = coface(1, 0, 1).unwrap();
        assert_eq!(c.table(), &[0]);
        let s = symmetry(1, 2).unwrap();
        assert_eq!(s.apply_bits(0b10), 0b01);
        let c = coface(2, 1, 2).unwrap();
        assert_eq!(c.table(), &[0b10, 0b11]);
        assert!(coface(0, 0, 2).is_err());
        assert!(coface(3, 0, 2).is_err());
        assert!(symmetry(2, 2).is_err());
        assert_eq!(sort_to_front(2).unwrap(), gamma1());
    }

    #[test]
    fn literal_round_trip() {
        let g: CubeMap = "2>2:0,1,1,3".parse().unwrap();
        assert_eq!(g, gamma1());
        assert_eq!(g.to_literal(), "2>2:0,1,1,3");
        assert!("2>2:0,2,2".parse::<CubeMap>().is_err());
        assert!("2>3:0,6,6,7".parse::<CubeMap>().is_err());
        assert!("garbage".parse::<CubeMap>().is_err());
        let p: CubeMap = "0>2:3".parse().unwrap();
        assert_eq!(p.apply_bits(0), 3);
    }

    #[test]
    fn cocubical_detection() {
        assert!(coface(2, 1, 3).unwrap().is_cocubical());
        assert!(CubeMap::identity(2).is_cocubical());
        assert!(!symmetry(1, 2).unwrap().is_cocubical());
        assert!(!gamma1().is_cocubical());
        let phi = compose(&coface(3, 0, 3).unwrap(), &coface(1, 1, 2).unwrap()).unwrap();
        let steps = coface_steps(&phi);
        let mut rebuilt = CubeMap::identity(1);
        let mut dim = 1;
        for (i, a) in steps {
            dim += 1;
            rebuilt = compose(&coface(i, a, dim).unwrap(), &rebuilt).unwrap();
        }
        assert_eq!(rebuilt, phi);
    }

    #[test]
    fn ext_dist_order_and_sum() {
        let one = ExtDist::from_int(1);
        assert!(one < ExtDist::Infinite);
        assert_eq!(one.clone() + ExtDist::Infinite, ExtDist::Infinite);
        assert_eq!(one.clone() + one, ExtDist::from_int(2));
    }
}
