//! Set-valued cotransverse objects and the coends attached to them: the
//! boundary hom-sets `∂ₙ⧠̂([p],[q])`, evaluation `Â(K)` on a symmetric
//! transverse set, and latching objects.
//!
//! Every coend is a union-find quotient of an explicitly listed disjoint
//! union, so class numbering is reproducible.

use rand::{Rng, RngExt};

use crate::cube::{coface, coface_steps, compose, CubeMap};
use crate::error::{Error, Result};
use crate::homset::{count_homset, endo_index, endos, factorize, homset, Budget};
pub use crate::quotient::{QuotientSet, UnionFind};
use crate::sts::{representable_id, Sts};

/// A covariant functor from the cotransverse category (truncated at
/// `max_dim`) to finite sets, stored on cofaces and endos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotransverseSetObj {
    name: String,
    counts: Vec<usize>,
    /// `cofaces[n][slot][a]` for `a ∈ A([n-1])`.
    cofaces: Vec<Vec<Vec<usize>>>,
    /// `endo_act[n][e][a]` for `a ∈ A([n])`.
    endo_act: Vec<Vec<Vec<usize>>>,
}

impl CotransverseSetObj {
    /// Tabulates `A(δᵢ^α)` via `coface(n, i, α, a)` (with `δᵢ^α : [n-1] → [n]`)
    /// and `A(ψ)` via `endo(n, e, ψ, a)`.
    pub fn from_generators(
        name: impl Into<String>,
        counts: Vec<usize>,
        coface_fn: impl Fn(usize, usize, u8, usize) -> Result<usize>,
        endo_fn: impl Fn(usize, usize, &CubeMap, usize) -> Result<usize>,
    ) -> Result<Self> {
        let max_dim = counts
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Parse("no dimensions".into()))?;
        if max_dim > crate::sts::MAX_STS_DIM {
            return Err(Error::DimensionTooLarge(max_dim));
        }
        let mut cofaces = vec![Vec::new(); max_dim + 1];
        let mut endo_act = vec![Vec::new(); max_dim + 1];
        for n in 0..=max_dim {
            if n > 0 {
                for slot in 0..2 * n {
                    let (i, a) = (slot / 2 + 1, (slot % 2) as u8);
                    let table = (0..counts[n - 1])
                        .map(|x| coface_fn(n, i, a, x))
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(&bad) = table.iter().find(|&&t| t >= counts[n]) {
                        return Err(Error::UnknownCube { dim: n, id: bad });
                    }
                    cofaces[n].push(table);
                }
            }
            for (e, psi) in endos(n)?.iter().enumerate() {
                let table = (0..counts[n])
                    .map(|x| endo_fn(n, e, psi, x))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(&bad) = table.iter().find(|&&t| t >= counts[n]) {
                    return Err(Error::UnknownCube { dim: n, id: bad });
                }
                endo_act[n].push(table);
            }
        }
        Ok(CotransverseSetObj {
            name: name.into(),
            counts,
            cofaces,
            endo_act,
        })
    }

    /// The constant functor on a `size`-element set.
    pub fn constant(size: usize, max_dim: usize) -> Result<Self> {
        CotransverseSetObj::from_generators(
            format!("constant-{size}"),
            vec![size; max_dim + 1],
            |_, _, _, a| Ok(a),
            |_, _, _, a| Ok(a),
        )
    }

    /// `⧠̂([k], -)`, acting by postcomposition; `k = 0` gives the vertices.
    pub fn corepresentable(k: usize, max_dim: usize) -> Result<Self> {
        let homs = (0..=max_dim)
            .map(|n| homset(k, n))
            .collect::<Result<Vec<_>>>()?;
        CotransverseSetObj::from_generators(
            format!("hom-{k}"),
            homs.iter().map(|h| h.len()).collect(),
            |n, i, a, x| representable_id(&compose(&coface(i, a, n)?, &homs[n - 1][x])?),
            |n, _, psi, x| representable_id(&compose(psi, &homs[n][x])?),
        )
    }

    /// `A([n]) = {0, …, n}` with `A(f)(h) = h + height(f(0))`.
    pub fn heights(max_dim: usize) -> Result<Self> {
        CotransverseSetObj::from_generators(
            "heights",
            (0..=max_dim).map(|n| n + 1).collect(),
            |_, _, a, h| Ok(h + a as usize),
            |_, _, _, h| Ok(h),
        )
    }

    /// Disjoint union, with `self`'s elements first.
    pub fn sum(&self, other: &CotransverseSetObj) -> Result<Self> {
        if self.counts.len() != other.counts.len() {
            return Err(Error::DimensionMismatch {
                expected: self.max_dim(),
                found: other.max_dim(),
            });
        }
        let split = |n: usize, x: usize| -> (bool, usize) {
            if x < self.counts[n] {
                (true, x)
            } else {
                (false, x - self.counts[n])
            }
        };
        CotransverseSetObj::from_generators(
            format!("{}+{}", self.name, other.name),
            self.counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
            |n, i, a, x| {
                let slot = 2 * (i - 1) + a as usize;
                Ok(match split(n - 1, x) {
                    (true, y) => self.cofaces[n][slot][y],
                    (false, y) => self.counts[n] + other.cofaces[n][slot][y],
                })
            },
            |n, e, _, x| {
                Ok(match split(n, x) {
                    (true, y) => self.endo_act[n][e][y],
                    (false, y) => self.counts[n] + other.endo_act[n][e][y],
                })
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    /// `A(f)(a)` for `f : [m] → [n]` and `a ∈ A([m])`.
    pub fn apply(&self, f: &CubeMap, a: usize) -> Result<usize> {
        if f.cod() > self.max_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.max_dim(),
                found: f.cod(),
            });
        }
        if a >= self.counts[f.dom()] {
            return Err(Error::UnknownCube {
                dim: f.dom(),
                id: a,
            });
        }
        let fac = factorize(f)?;
        let mut x = if fac.psi.is_identity() {
            a
        } else {
            self.endo_act[f.dom()][endo_index(&fac.psi)?][a]
        };
        let mut d = f.dom();
        for (pos, alpha) in coface_steps(&fac.phi) {
            d += 1;
            x = self.cofaces[d][2 * (pos - 1) + alpha as usize][x];
        }
        Ok(x)
    }

    /// `A(g∘f) = A(g)∘A(f)` on every composable pair with dimensions
    /// `≤ up_to`; returns the number of pairs, or the first failing pair.
    pub fn check_functoriality(
        &self,
        up_to: usize,
    ) -> Result<std::result::Result<u64, (CubeMap, CubeMap)>> {
        let top = up_to.min(self.max_dim());
        let mut pairs = 0;
        for n in 0..=top {
            for m in 0..=n {
                for l in 0..=m {
                    for g in homset(m, n)?.iter() {
                        for f in homset(l, m)?.iter() {
                            pairs += 1;
                            let gf = compose(g, f)?;
                            for a in 0..self.counts[l] {
                                if self.apply(&gf, a)? != self.apply(g, self.apply(f, a)?)? {
                                    return Ok(Err((f.clone(), g.clone())));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Ok(pairs))
    }

    /// Random composable pairs over the full range.
    pub fn check_functoriality_sampled<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<bool> {
        for _ in 0..samples {
            let n = rng.random_range(0..=self.max_dim());
            let m = rng.random_range(0..=n);
            let l = rng.random_range(0..=m);
            if self.counts[l] == 0 {
                continue;
            }
            let (gs, fs) = (homset(m, n)?, homset(l, m)?);
            let g = &gs[rng.random_range(0..gs.len())];
            let f = &fs[rng.random_range(0..fs.len())];
            let a = rng.random_range(0..self.counts[l]);
            if self.apply(&compose(g, f)?, a)? != self.apply(g, self.apply(f, a)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The objects used to exercise the latching identification.
pub fn test_battery(max_dim: usize) -> Result<Vec<CotransverseSetObj>> {
    Ok(vec![
        CotransverseSetObj::constant(1, max_dim)?,
        CotransverseSetObj::constant(2, max_dim)?,
        CotransverseSetObj::corepresentable(0, max_dim)?,
        CotransverseSetObj::corepresentable(1, max_dim)?,
        CotransverseSetObj::corepresentable(2, max_dim)?,
        CotransverseSetObj::heights(max_dim)?,
        CotransverseSetObj::corepresentable(1, max_dim)?
            .sum(&CotransverseSetObj::constant(1, max_dim)?)?,
    ])
}

// ---------------------------------------------------------------------------
// Boundary hom-sets

/// `∂ₙ⧠̂([p],[q])`: pairs `(h, g)` with `g : [p] → [m]`, `h : [m] → [q]`,
/// `m < n`, modulo `(h', k∘g) ~ (h'∘k, g)`.
#[derive(Debug, Clone)]
pub struct BoundaryHom {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    /// `(m, h, g)` for every element of the disjoint union.
    pub elements: Vec<(usize, CubeMap, CubeMap)>,
    pub quotient: QuotientSet,
    offsets: Vec<usize>,
}

/// `|∂ₙ⧠̂([p],[q])|` predicted in closed form: empty when `p > q` or
/// `n ≤ p`, otherwise the whole hom-set.
pub fn boundary_hom_closed_form(p: usize, q: usize, n: usize) -> Result<u128> {
    if p > q || n <= p {
        Ok(0)
    } else {
        count_homset(p, q, Budget::from_env())
    }
}

pub fn boundary_hom(p: usize, q: usize, n: usize) -> Result<BoundaryHom> {
    let budget = Budget::from_env();
    let mids: Vec<usize> = (0..n).collect();
    let mut elements = Vec::new();
    let mut offsets = vec![0; n + 1];
    for &m in &mids {
        offsets[m] = elements.len();
        budget.check(m, q)?;
        budget.check(p, m)?;
        for h in homset(m, q)?.iter() {
            for g in homset(p, m)?.iter() {
                elements.push((m, h.clone(), g.clone()));
            }
        }
    }
    offsets[n] = elements.len();
    let index = |m: usize, h: &CubeMap, g: &CubeMap| -> Result<usize> {
        let per = homset(p, m)?.len();
        Ok(offsets[m] + representable_id(h)? * per + representable_id(g)?)
    };
    let mut uf = UnionFind::new(elements.len());
    for &m in &mids {
        for &m2 in &mids {
            let ks = homset(m, m2)?;
            if ks.is_empty() {
                continue;
            }
            for h2 in homset(m2, q)?.iter() {
                for g in homset(p, m)?.iter() {
                    for k in ks.iter() {
                        let a = index(m2, h2, &compose(k, g)?)?;
                        let b = index(m, &compose(h2, k)?, g)?;
                        uf.union(a, b);
                    }
                }
            }
        }
    }
    Ok(BoundaryHom {
        p,
        q,
        n,
        elements,
        quotient: uf.into_quotient(),
        offsets,
    })
}

impl BoundaryHom {
    pub fn class_count(&self) -> usize {
        self.quotient.class_count()
    }

    /// The class of `(h, g)` with `g : [p] → [m]`.
    pub fn class_of(&self, m: usize, h: &CubeMap, g: &CubeMap) -> Result<usize> {
        if m >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "intermediate dimension",
                index: m,
                max: self.n.saturating_sub(1),
            });
        }
        let per = homset(self.p, m)?.len();
        Ok(self
            .quotient
            .class_of(self.offsets[m] + representable_id(h)? * per + representable_id(g)?))
    }

    /// `h ∘ g` for the representative of `class`.
    pub fn composite(&self, class: usize) -> Result<CubeMap> {
        let (_, h, g) = &self.elements[self.quotient.representative(class)];
        compose(h, g)
    }

    /// Composition is constant on classes and induces a bijection onto
    /// `⧠̂([p],[q])`, and the class count matches the closed form.
    pub fn matches_closed_form(&self) -> Result<bool> {
        let expected = boundary_hom_closed_form(self.p, self.q, self.n)?;
        if self.class_count() as u128 != expected {
            return Ok(false);
        }
        if expected == 0 {
            return Ok(true);
        }
        let mut hit = vec![false; homset(self.p, self.q)?.len()];
        for class in self.quotient.classes() {
            let (_, h, g) = &self.elements[class[0]];
            let c = compose(h, g)?;
            for &x in class {
                let (_, h, g) = &self.elements[x];
                if compose(h, g)? != c {
                    return Ok(false);
                }
            }
            let id = representable_id(&c)?;
            if std::mem::replace(&mut hit[id], true) {
                return Ok(false);
            }
        }
        Ok(hit.iter().all(|&b| b))
    }

    /// Every class has exactly one member `(h, g)` with `g` an endo and `h`
    /// cocubical, namely the factorization of the composite.
    pub fn normal_forms_unique(&self) -> bool {
        self.quotient.classes().all(|class| {
            class
                .iter()
                .filter(|&&x| {
                    let (m, h, _) = &self.elements[x];
                    *m == self.p && h.is_cocubical()
                })
                .count()
                == 1
        })
    }
}

/// `∂ₙ⧠̂([n],[m]) = ∅`.
pub fn matching_emptiness_check(n: usize, m: usize) -> Result<bool> {
    Ok(boundary_hom(n, m, n)?.class_count() == 0)
}

// ---------------------------------------------------------------------------
// Coends

/// A coend as a quotient of listed elements `(n, x, a)`.
#[derive(Debug, Clone)]
pub struct Coend {
    pub elements: Vec<(usize, usize, usize)>,
    pub quotient: QuotientSet,
    offsets: Vec<usize>,
    widths: Vec<usize>,
}

impl Coend {
    pub fn class_count(&self) -> usize {
        self.quotient.class_count()
    }

    /// The class of `(n, x, a)`.
    pub fn class_of(&self, n: usize, x: usize, a: usize) -> usize {
        self.quotient
            .class_of(self.offsets[n] + x * self.widths[n] + a)
    }
}

/// `Â(K)`: `⨆ₙ Kₙ × A([n])` modulo `(f^*x, a) ~ (x, A(f)a)`, generated by
/// cofaces and endos.
pub fn weighted_coend_eval(a: &CotransverseSetObj, k: &Sts) -> Result<Coend> {
    let top = a.max_dim().min(k.max_dim());
    let mut elements = Vec::new();
    let mut offsets = Vec::new();
    let mut widths = Vec::new();
    for n in 0..=top {
        offsets.push(elements.len());
        widths.push(a.count(n));
        for x in 0..k.count(n) {
            for v in 0..a.count(n) {
                elements.push((n, x, v));
            }
        }
    }
    let idx = |n: usize, x: usize, v: usize| offsets[n] + x * widths[n] + v;
    let mut uf = UnionFind::new(elements.len());
    for n in 0..=top {
        for x in 0..k.count(n) {
            if n > 0 {
                for slot in 0..2 * n {
                    let (i, al) = (slot / 2 + 1, (slot % 2) as u8);
                    let fx = k.face(n, i, al, x);
                    for v in 0..a.count(n - 1) {
                        uf.union(idx(n - 1, fx, v), idx(n, x, a.cofaces[n][slot][v]));
                    }
                }
            }
            for e in 0..a.endo_act[n].len() {
                let fx = k.endo_action(n, e, x);
                for v in 0..a.count(n) {
                    uf.union(idx(n, fx, v), idx(n, x, a.endo_act[n][e][v]));
                }
            }
        }
    }
    Ok(Coend {
        elements,
        quotient: uf.into_quotient(),
        offsets,
        widths,
    })
}

/// The latching object `Lₙ A`: `⨆_{p<n} ∂ₙ⧠̂([p],[n]) × A([p])` modulo
/// `(κ·k, a) ~ (κ, A(k)a)`, using every map `k` between dimensions `< n`.
#[derive(Debug, Clone)]
pub struct Latching {
    pub n: usize,
    pub boundary_homs: Vec<BoundaryHom>,
    /// `(p, class of ∂ₙ⧠̂([p],[n]), a)`.
    pub elements: Vec<(usize, usize, usize)>,
    pub quotient: QuotientSet,
}

pub fn latching(a: &CotransverseSetObj, n: usize) -> Result<Latching> {
    if n > a.max_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.max_dim(),
            found: n,
        });
    }
    let bh: Vec<BoundaryHom> = (0..n)
        .map(|p| boundary_hom(p, n, n))
        .collect::<Result<_>>()?;
    let mut elements = Vec::new();
    let mut offsets = Vec::new();
    for (p, b) in bh.iter().enumerate() {
        offsets.push(elements.len());
        for class in 0..b.class_count() {
            for v in 0..a.count(p) {
                elements.push((p, class, v));
            }
        }
    }
    let idx = |p: usize, class: usize, v: usize| offsets[p] + class * a.count(p) + v;
    let mut uf = UnionFind::new(elements.len());
    for p in 0..n {
        for p2 in 0..n {
            let ks = homset(p, p2)?;
            for class2 in 0..bh[p2].class_count() {
                // every member of the class gives the same precomposite class;
                // all of them are used, so nothing depends on that
                for &member in bh[p2].quotient.members(class2) {
                    let (m, h, g) = &bh[p2].elements[member];
                    for k in ks.iter() {
                        let class = bh[p].class_of(*m, h, &compose(g, k)?)?;
                        for v in 0..a.count(p) {
                            uf.union(idx(p, class, v), idx(p2, class2, a.apply(k, v)?));
                        }
                    }
                }
            }
        }
    }
    Ok(Latching {
        n,
        boundary_homs: bh,
        elements,
        quotient: uf.into_quotient(),
    })
}

/// Outcome of comparing `Lₙ A` with `Â(∂⧠̂[n])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchingComparison {
    pub latching: usize,
    pub boundary_eval: usize,
    pub bijective: bool,
}

/// Sends `(p, [h, g], a)` to `(h∘g, a)` and checks that this is a
/// well-defined bijection of quotients.
pub fn compare_latching(a: &CotransverseSetObj, n: usize) -> Result<LatchingComparison> {
    let lat = latching(a, n)?;
    let bd = Sts::boundary(n, a.max_dim())?;
    let ev = weighted_coend_eval(a, &bd)?;
    let mut image = vec![usize::MAX; lat.quotient.class_count()];
    let mut hit = vec![false; ev.class_count()];
    let mut bijective = true;
    for (x, &(p, class, v)) in lat.elements.iter().enumerate() {
        let b = &lat.boundary_homs[p];
        let target = ev.class_of(p, representable_id(&b.composite(class)?)?, v);
        let lc = lat.quotient.class_of(x);
        if image[lc] == usize::MAX {
            image[lc] = target;
            if std::mem::replace(&mut hit[target], true) {
                bijective = false;
            }
        } else if image[lc] != target {
            bijective = false;
        }
    }
    bijective &= hit.iter().all(|&h| h);
    Ok(LatchingComparison {
        latching: lat.quotient.class_count(),
        boundary_eval: ev.class_count(),
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_functorial() {
        for a in test_battery(3).unwrap() {
            assert!(a.check_functoriality(3).unwrap().is_ok(), "{}", a.name());
        }
    }

    #[test]
    fn broken_object_detected() {
        let mut a = CotransverseSetObj::heights(2).unwrap();
        a.cofaces[2][0].swap(0, 1);
        assert!(a.check_functoriality(2).unwrap().is_err());
    }

    #[test]
    fn boundary_hom_examples() {
        let b = boundary_hom(1, 2, 2).unwrap();
        assert_eq!(b.class_count(), 4);
        assert!(b.matches_closed_form().unwrap());
        assert!(b.normal_forms_unique());
        assert_eq!(boundary_hom(2, 1, 3).unwrap().class_count(), 0);
        assert_eq!(boundary_hom(2, 3, 2).unwrap().class_count(), 0);
    }

    #[test]
    fn matching_examples() {
        for (n, m) in [(2, 2), (2, 3), (3, 1)] {
            assert!(matching_emptiness_check(n, m).unwrap());
        }
    }

    #[test]
    fn coend_examples() {
        let one = CotransverseSetObj::constant(1, 2).unwrap();
        let sq = Sts::representable(2, 2).unwrap();
        assert_eq!(weighted_coend_eval(&one, &sq).unwrap().class_count(), 1);
        assert_eq!(
            weighted_coend_eval(&one, &Sts::empty(2).unwrap())
                .unwrap()
                .class_count(),
            0
        );
        let verts = CotransverseSetObj::corepresentable(0, 1).unwrap();
        let interval = Sts::representable(1, 1).unwrap();
        assert_eq!(
            weighted_coend_eval(&verts, &interval)
                .unwrap()
                .class_count(),
            2
        );
    }

    #[test]
    fn latching_examples() {
        let one = CotransverseSetObj::constant(1, 3).unwrap();
        assert_eq!(latching(&one, 0).unwrap().quotient.class_count(), 0);
        // the boundary of the interval is two separate points
        assert_eq!(latching(&one, 1).unwrap().quotient.class_count(), 2);
        for a in test_battery(3).unwrap() {
            for n in 0..=3 {
                let c = compare_latching(&a, n).unwrap();
                assert!(c.bijective, "{} at {n}: {c:?}", a.name());
                assert_eq!(c.latching, c.boundary_eval);
            }
        }
    }
}
