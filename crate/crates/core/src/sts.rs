//! Finite symmetric transverse sets (presheaves over the cotransverse
//! category), the precubical sets that freely generate them, and the finite
//! constructions used to build them: representables, boundaries,
//! truncations, pushouts and cell attachment.
//!
//! An [`Sts`] stores the action of the generating family only: every coface
//! and every endo of each dimension. A general `f^*` is recovered from the
//! factorization `f = φ ∘ ψ` as `ψ^* ∘ φ^*`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::cube::{
    check_dim, coface, coface_steps, compose, embedding, extract, full_mask, CubeMap,
};
use crate::error::{Error, Result};
use crate::homset::{endo_index, endos, factorize, homset, Budget};
use crate::quotient::UnionFind;

/// Largest dimension an [`Sts`] may carry; the endo monoid of `[5]` is far
/// beyond desk scale.
pub const MAX_STS_DIM: usize = 4;

const UNSET: usize = usize::MAX;

/// Index of the face `(i, alpha)` of an `n`-cube among its `2n` faces.
pub(crate) fn face_slot(i: usize, alpha: u8) -> usize {
    2 * (i - 1) + alpha as usize
}

fn slot_face(slot: usize) -> (usize, u8) {
    (slot / 2 + 1, (slot % 2) as u8)
}

fn parse_face_key(key: &str) -> Result<(usize, u8)> {
    let bad = || Error::Parse(format!("face key `{key}` is not of the form `i,alpha`"));
    let (i, a) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let a: u8 = a.trim().parse().map_err(|_| bad())?;
    if i == 0 || a > 1 {
        return Err(bad());
    }
    Ok((i, a))
}

fn check_sts_dim(n: usize) -> Result<()> {
    if n > MAX_STS_DIM {
        Err(Error::DimensionTooLarge(n))
    } else {
        Ok(())
    }
}

/// All cocubical maps `[k] → [n]`, sorted.
pub fn cocubical_maps(k: usize, n: usize) -> Vec<CubeMap> {
    if k > n {
        return Vec::new();
    }
    let full = full_mask(n);
    let mut out = Vec::new();
    for free in 0..=full {
        if free.count_ones() as usize != k {
            continue;
        }
        let rest = full & !free;
        // enumerate subsets of the constant coordinates
        let mut base = rest;
        loop {
            out.push(embedding(k, n, base, free));
            if base == 0 {
                break;
            }
            base = (base - 1) & rest;
        }
    }
    out.sort();
    out
}

/// Position of `g` in the sorted hom-set `⧠̂([g.dom],[g.cod])`; this is the
/// id of `g` as a cube of the representable on `[g.cod]`.
pub fn representable_id(g: &CubeMap) -> Result<usize> {
    homset(g.dom(), g.cod())?
        .binary_search(g)
        .map_err(|_| Error::Factorization(format!("{g} is not cotransverse")))
}

// ---------------------------------------------------------------------------
// Precubical sets

/// A finite precubical set. Cubes of each dimension are indexed `0..count`;
/// each also carries an external id used by the JSON format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precubical {
    max_dim: usize,
    ids: Vec<Vec<u64>>,
    /// `faces[n][slot][c]`, empty for `n = 0`.
    faces: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PrecubicalFile {
    max_dim: usize,
    cubes: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    faces: BTreeMap<String, BTreeMap<String, u64>>,
}

impl Precubical {
    /// Builds and validates a precubical set from per-dimension external ids
    /// and index-based face tables.
    pub fn new(ids: Vec<Vec<u64>>, faces: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::Precubical(
                "at least dimension 0 must be present".into(),
            ));
        }
        let max_dim = ids.len() - 1;
        check_sts_dim(max_dim)?;
        if faces.len() != ids.len() {
            return Err(Error::Precubical(
                "face tables do not cover every dimension".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for id in ids.iter().flatten() {
            if !seen.insert(*id) {
                return Err(Error::Precubical(format!("duplicate cube id {id}")));
            }
        }
        for n in 0..=max_dim {
            let expected = if n == 0 { 0 } else { 2 * n };
            if faces[n].len() != expected {
                return Err(Error::Precubical(format!(
                    "dimension {n} has {} face tables, expected {expected}",
                    faces[n].len()
                )));
            }
            for (slot, table) in faces[n].iter().enumerate() {
                if table.len() != ids[n].len() {
                    return Err(Error::Precubical(format!(
                        "face table {slot} of dimension {n} has the wrong length"
                    )));
                }
                if let Some(bad) = table.iter().find(|&&t| t >= ids[n - 1].len()) {
                    return Err(Error::UnknownCube {
                        dim: n - 1,
                        id: *bad,
                    });
                }
            }
        }
        let k = Precubical {
            max_dim,
            ids,
            faces,
        };
        k.check_cubical_identities()?;
        Ok(k)
    }

    fn check_cubical_identities(&self) -> Result<()> {
        for n in 2..=self.max_dim {
            for c in 0..self.count(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for alpha in 0..2 {
                            for beta in 0..2 {
                                let lhs = self.face(n - 1, i, alpha, self.face(n, j, beta, c));
                                let rhs = self.face(n - 1, j - 1, beta, self.face(n, i, alpha, c));
                                if lhs != rhs {
                                    return Err(Error::Precubical(format!(
                                        "cube {} violates the cubical identity for \
                                         faces ({i},{alpha}) and ({j},{beta})",
                                        self.ids[n][c]
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds from counts and a face function, with sequential external ids.
    pub fn from_fn(
        counts: &[usize],
        face: impl Fn(usize, usize, u8, usize) -> usize,
    ) -> Result<Self> {
        let mut next = 0u64;
        let ids = counts
            .iter()
            .map(|&c| {
                let v: Vec<u64> = (next..next + c as u64).collect();
                next += c as u64;
                v
            })
            .collect();
        let faces = (0..counts.len())
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..2 * n)
                    .map(|slot| {
                        let (i, a) = slot_face(slot);
                        (0..counts[n]).map(|c| face(n, i, a, c)).collect()
                    })
                    .collect()
            })
            .collect();
        Precubical::new(ids, faces)
    }

    /// A single vertex.
    pub fn point() -> Self {
        Precubical::from_fn(&[1], |_, _, _, _| 0).expect("valid")
    }

    /// The standard cube `□[n]`: its `k`-cubes are the cocubical maps
    /// `[k] → [n]` in the order of [`cocubical_maps`].
    pub fn standard_cube(n: usize) -> Result<Self> {
        check_sts_dim(n)?;
        let maps: Vec<Vec<CubeMap>> = (0..=n).map(|k| cocubical_maps(k, n)).collect();
        let counts: Vec<usize> = maps.iter().map(Vec::len).collect();
        Precubical::from_fn(&counts, |k, i, a, c| {
            let g =
                compose(&maps[k][c], &coface(i, a, k).expect("valid coface")).expect("composable");
            maps[k - 1].binary_search(&g).expect("cocubical composite")
        })
    }

    /// The boundary `∂□[n]`: the standard cube without its top cell.
    pub fn boundary_cube(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precubical("the boundary of a point is empty".into()));
        }
        Ok(Precubical::standard_cube(n)?.truncate(n - 1))
    }

    /// Keeps dimensions `0..=n`.
    pub fn truncate(&self, n: usize) -> Self {
        let keep = n.min(self.max_dim) + 1;
        Precubical {
            max_dim: keep - 1,
            ids: self.ids[..keep].to_vec(),
            faces: self.faces[..keep].to_vec(),
        }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.ids.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.ids.iter().map(Vec::len).collect()
    }

    pub fn external_id(&self, n: usize, c: usize) -> u64 {
        self.ids[n][c]
    }

    /// Dimension and index of an external id.
    pub fn locate(&self, id: u64) -> Option<(usize, usize)> {
        self.ids
            .iter()
            .enumerate()
            .find_map(|(n, v)| v.iter().position(|&x| x == id).map(|c| (n, c)))
    }

    /// `(δᵢ^α)^* c` for an `n`-cube `c`.
    pub fn face(&self, n: usize, i: usize, alpha: u8, c: usize) -> usize {
        self.faces[n][face_slot(i, alpha)][c]
    }

    /// `φ^* c` for a cocubical `φ` with codomain the dimension of `c`.
    pub fn apply_cocubical(&self, phi: &CubeMap, c: usize) -> usize {
        let mut d = phi.cod();
        let mut x = c;
        for &(pos, a) in coface_steps(phi).iter().rev() {
            x = self.face(d, pos, a, x);
            d -= 1;
        }
        x
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PrecubicalFile = serde_json::from_str(text)?;
        check_sts_dim(file.max_dim)?;
        let mut ids = vec![Vec::new(); file.max_dim + 1];
        for (dim, list) in &file.cubes {
            let n: usize = dim
                .parse()
                .map_err(|_| Error::Parse(format!("dimension key `{dim}` is not a number")))?;
            if n > file.max_dim {
                return Err(Error::Precubical(format!("dimension {n} exceeds max_dim")));
            }
            ids[n] = list.clone();
        }
        let mut index = std::collections::HashMap::new();
        for (n, list) in ids.iter().enumerate() {
            for (c, id) in list.iter().enumerate() {
                if index.insert(*id, (n, c)).is_some() {
                    return Err(Error::Precubical(format!("duplicate cube id {id}")));
                }
            }
        }
        let mut faces: Vec<Vec<Vec<usize>>> = (0..=file.max_dim)
            .map(|n| {
                let slots = if n == 0 { 0 } else { 2 * n };
                vec![vec![UNSET; ids[n].len()]; slots]
            })
            .collect();
        for (key, map) in &file.faces {
            let id: u64 = key
                .parse()
                .map_err(|_| Error::Parse(format!("cube key `{key}` is not a number")))?;
            let &(n, c) = index
                .get(&id)
                .ok_or_else(|| Error::Precubical(format!("faces given for unknown cube {id}")))?;
            for (fk, target) in map {
                let (i, a) = parse_face_key(fk)?;
                if i > n {
                    return Err(Error::Precubical(format!(
                        "cube {id} of dimension {n} has no face {fk}"
                    )));
                }
                match index.get(target) {
                    Some(&(tn, tc)) if tn + 1 == n => faces[n][face_slot(i, a)][c] = tc,
                    _ => {
                        return Err(Error::Precubical(format!(
                            "face {fk} of cube {id} is not a cube of dimension {}",
                            n - 1
                        )))
                    }
                }
            }
        }
        for (n, tables) in faces.iter().enumerate() {
            for (slot, table) in tables.iter().enumerate() {
                if let Some(c) = table.iter().position(|&t| t == UNSET) {
                    let (i, a) = slot_face(slot);
                    return Err(Error::Precubical(format!(
                        "cube {} is missing face {i},{a}",
                        ids[n][c]
                    )));
                }
            }
        }
        Precubical::new(ids, faces)
    }

    pub fn to_json(&self) -> String {
        let cubes = self
            .ids
            .iter()
            .enumerate()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect();
        let mut faces = BTreeMap::new();
        for n in 1..=self.max_dim {
            for c in 0..self.count(n) {
                let entry: BTreeMap<String, u64> = (0..2 * n)
                    .map(|slot| {
                        let (i, a) = slot_face(slot);
                        (format!("{i},{a}"), self.ids[n - 1][self.faces[n][slot][c]])
                    })
                    .collect();
                faces.insert(self.ids[n][c].to_string(), entry);
            }
        }
        let file = PrecubicalFile {
            max_dim: self.max_dim,
            cubes,
            faces,
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

/// Cube-index map between precubical sets, one component per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecubicalMap {
    pub components: Vec<Vec<usize>>,
}

impl PrecubicalMap {
    /// Checks that the map commutes with every face operator.
    pub fn check(&self, src: &Precubical, tgt: &Precubical) -> Result<()> {
        if self.components.len() != src.max_dim + 1 || tgt.max_dim < src.max_dim {
            return Err(Error::NotEquivariant("dimension ranges differ".into()));
        }
        for n in 0..=src.max_dim {
            if self.components[n].len() != src.count(n) {
                return Err(Error::NotEquivariant(format!(
                    "component {n} has the wrong length"
                )));
            }
            if let Some(&bad) = self.components[n].iter().find(|&&t| t >= tgt.count(n)) {
                return Err(Error::UnknownCube { dim: n, id: bad });
            }
            for slot in 0..if n == 0 { 0 } else { 2 * n } {
                let (i, a) = slot_face(slot);
                for c in 0..src.count(n) {
                    let lhs = self.components[n - 1][src.face(n, i, a, c)];
                    let rhs = tgt.face(n, i, a, self.components[n][c]);
                    if lhs != rhs {
                        return Err(Error::NotEquivariant(format!(
                            "face {i},{a} of {n}-cube {c} is not preserved"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dimensionwise pushout of precubical sets along `i: A → K`, `j: A → L`.
/// Cubes of `K` come first and keep their relative order.
pub fn precubical_pushout(
    a: &Precubical,
    k: &Precubical,
    l: &Precubical,
    i: &PrecubicalMap,
    j: &PrecubicalMap,
) -> Result<Precubical> {
    i.check(a, k)?;
    j.check(a, l)?;
    if k.max_dim != l.max_dim {
        return Err(Error::DimensionMismatch {
            expected: k.max_dim,
            found: l.max_dim,
        });
    }
    let quotients = glue(
        &k.counts(),
        &l.counts(),
        &a.counts(),
        &i.components,
        &j.components,
    );
    let counts: Vec<usize> = quotients.iter().map(|q| q.class_count()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k.max_dim + 1];
    for n in 1..=k.max_dim {
        for slot in 0..2 * n {
            let (fi, fa) = slot_face(slot);
            let mut table = Vec::with_capacity(counts[n]);
            for class in quotients[n].classes() {
                let image = |x: usize| {
                    let y = if x < k.count(n) {
                        k.face(n, fi, fa, x)
                    } else {
                        k.count(n - 1) + l.face(n, fi, fa, x - k.count(n))
                    };
                    quotients[n - 1].class_of(y)
                };
                let first = image(class[0]);
                if class.iter().any(|&x| image(x) != first) {
                    return Err(Error::NotEquivariant("pushout faces are ambiguous".into()));
                }
                table.push(first);
            }
            faces[n].push(table);
        }
    }
    Precubical::from_fn(&counts, |n, fi, fa, c| faces[n][face_slot(fi, fa)][c])
}

/// Dimensionwise quotient of `K ⊔ L` by `i(a) ~ j(a)`; `L` elements are
/// offset by `|K_n|`.
fn glue(
    k_counts: &[usize],
    l_counts: &[usize],
    a_counts: &[usize],
    i: &[Vec<usize>],
    j: &[Vec<usize>],
) -> Vec<crate::quotient::QuotientSet> {
    (0..k_counts.len())
        .map(|n| {
            let kn = k_counts[n];
            let mut uf = UnionFind::new(kn + l_counts.get(n).copied().unwrap_or(0));
            for x in 0..a_counts.get(n).copied().unwrap_or(0) {
                uf.union(i[n][x], kn + j[n][x]);
            }
            uf.into_quotient()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Symmetric transverse sets

/// A finite symmetric transverse set, truncated at `max_dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sts {
    max_dim: usize,
    counts: Vec<usize>,
    /// `faces[n][slot][c]`: the coface action, empty for `n = 0`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `endo_act[n][e][c]`: the action of the `e`-th endo of `[n]`.
    endo_act: Vec<Vec<Vec<usize>>>,
}

/// A composable pair on which the action is not contravariantly functorial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorialityViolation {
    pub f: CubeMap,
    pub g: CubeMap,
    pub cube: usize,
}

impl fmt::Display for FunctorialityViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "(g∘f)^* ≠ f^*∘g^* on cube {} for f = {}, g = {}",
            self.cube, self.f, self.g
        )
    }
}

impl Sts {
    /// Tabulates the generating action from closures. `face(n, i, α, c)`
    /// returns `(δᵢ^α)^* c`; `endo(n, e, ψ, c)` returns `ψ^* c` where `ψ` is
    /// the `e`-th endo of `[n]`.
    pub fn from_generators(
        counts: Vec<usize>,
        budget: Budget,
        face: impl Fn(usize, usize, u8, usize) -> Result<usize>,
        endo: impl Fn(usize, usize, &CubeMap, usize) -> Result<usize>,
    ) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Precubical(
                "at least dimension 0 must be present".into(),
            ));
        }
        let max_dim = counts.len() - 1;
        check_sts_dim(max_dim)?;
        let mut needed: u128 = 0;
        for (n, &c) in counts.iter().enumerate() {
            if c > 0 {
                needed += c as u128 * (2 * n + endos(n)?.len()) as u128;
            }
        }
        budget.require(needed)?;
        let mut faces = vec![Vec::new(); max_dim + 1];
        let mut endo_act = vec![Vec::new(); max_dim + 1];
        for n in 0..=max_dim {
            if n > 0 {
                for slot in 0..2 * n {
                    let (i, a) = slot_face(slot);
                    let table = (0..counts[n])
                        .map(|c| face(n, i, a, c))
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(&bad) = table.iter().find(|&&t| t >= counts[n - 1]) {
                        return Err(Error::UnknownCube {
                            dim: n - 1,
                            id: bad,
                        });
                    }
                    faces[n].push(table);
                }
            }
            if counts[n] > 0 {
                for (e, psi) in endos(n)?.iter().enumerate() {
                    let table = (0..counts[n])
                        .map(|c| endo(n, e, psi, c))
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(&bad) = table.iter().find(|&&t| t >= counts[n]) {
                        return Err(Error::UnknownCube { dim: n, id: bad });
                    }
                    endo_act[n].push(table);
                }
            }
        }
        Ok(Sts {
            max_dim,
            counts,
            faces,
            endo_act,
        })
    }

    /// No cubes in any dimension.
    pub fn empty(max_dim: usize) -> Result<Self> {
        Sts::from_generators(
            vec![0; max_dim + 1],
            Budget::from_env(),
            |_, _, _, _| Ok(0),
            |_, _, _, _| Ok(0),
        )
    }

    /// One cube per dimension; every operator acts trivially.
    pub fn terminal(max_dim: usize) -> Result<Self> {
        Sts::from_generators(
            vec![1; max_dim + 1],
            Budget::from_env(),
            |_, _, _, _| Ok(0),
            |_, _, _, _| Ok(0),
        )
    }

    /// `⧠̂[n]` truncated at `max_dim`, which may be below `n`: its `m`-cubes are the maps `[m] → [n]`
    /// in sorted order, acted on by precomposition.
    pub fn representable(n: usize, max_dim: usize) -> Result<Self> {
        Sts::representable_upto(n, max_dim, Some(n))
    }

    /// `∂⧠̂[n]`: the representable with its cubes of dimension `≥ n` removed.
    pub fn boundary(n: usize, max_dim: usize) -> Result<Self> {
        Sts::representable_upto(n, max_dim, n.checked_sub(1))
    }

    fn representable_upto(n: usize, max_dim: usize, top: Option<usize>) -> Result<Self> {
        check_sts_dim(max_dim)?;
        check_dim(n)?;
        let budget = Budget::from_env();
        let homs = (0..=max_dim)
            .map(|m| match top {
                Some(t) if m <= t => {
                    budget.check(m, n)?;
                    homset(m, n)
                }
                _ => Ok(Vec::new().into()),
            })
            .collect::<Result<Vec<_>>>()?;
        let counts = homs.iter().map(|h| h.len()).collect();
        Sts::from_generators(
            counts,
            budget,
            |m, i, a, c| representable_id(&compose(&homs[m][c], &coface(i, a, m)?)?),
            |m, _, psi, c| representable_id(&compose(&homs[m][c], psi)?),
        )
    }

    /// Removes every cube of dimension `> n`, keeping `max_dim`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut out = self.clone();
        for d in n + 1..=self.max_dim {
            out.counts[d] = 0;
            for t in out.faces[d].iter_mut() {
                t.clear();
            }
            out.endo_act[d].clear();
        }
        out
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    fn check_cube(&self, n: usize, c: usize) -> Result<()> {
        if n > self.max_dim || c >= self.counts[n] {
            Err(Error::UnknownCube { dim: n, id: c })
        } else {
            Ok(())
        }
    }

    /// `(δᵢ^α)^* c` for an `n`-cube `c` (unchecked indices).
    pub fn face(&self, n: usize, i: usize, alpha: u8, c: usize) -> usize {
        self.faces[n][face_slot(i, alpha)][c]
    }

    /// `ψ^* c` where `ψ` is the `e`-th endo of `[n]` (unchecked indices).
    pub fn endo_action(&self, n: usize, e: usize, c: usize) -> usize {
        self.endo_act[n][e][c]
    }

    fn apply_cocubical(&self, phi: &CubeMap, c: usize) -> usize {
        let mut d = phi.cod();
        let mut x = c;
        for &(pos, a) in coface_steps(phi).iter().rev() {
            x = self.face(d, pos, a, x);
            d -= 1;
        }
        x
    }

    /// `f^* c` for any cotransverse `f : [m] → [n]` and `n`-cube `c`.
    pub fn action(&self, f: &CubeMap, c: usize) -> Result<usize> {
        self.check_cube(f.cod(), c)?;
        let fac = factorize(f)?;
        let x = self.apply_cocubical(&fac.phi, c);
        if fac.psi.is_identity() {
            return Ok(x);
        }
        Ok(self.endo_act[f.dom()][endo_index(&fac.psi)?][x])
    }

    /// `f^*` on every cube of dimension `f.cod`.
    pub fn action_table(&self, f: &CubeMap) -> Result<Vec<usize>> {
        if f.cod() > self.max_dim {
            return Err(Error::DimensionMismatch {
                expected: self.max_dim,
                found: f.cod(),
            });
        }
        let fac = factorize(f)?;
        let e = (!fac.psi.is_identity())
            .then(|| endo_index(&fac.psi))
            .transpose()?;
        Ok((0..self.counts[f.cod()])
            .map(|c| {
                let x = self.apply_cocubical(&fac.phi, c);
                e.map_or(x, |e| self.endo_act[f.dom()][e][x])
            })
            .collect())
    }

    /// The `k`-cube, or vertex, of `c` selected by `[0] → [n], 0 ↦ v`.
    pub fn vertex_of(&self, n: usize, c: usize, v: u32) -> Result<usize> {
        if v > full_mask(n) {
            return Err(Error::VertexOutOfRange {
                dim: n,
                bits: v as u64,
            });
        }
        self.action(&CubeMap::new(0, n, vec![v])?, c)
    }

    /// Exhaustive check of `(g∘f)^* = f^*∘g^*` and `id^* = id` over every
    /// composable pair with codomain dimension `≤ up_to`. Returns the number
    /// of pairs checked.
    pub fn check_functoriality(
        &self,
        up_to: usize,
    ) -> Result<std::result::Result<u64, FunctorialityViolation>> {
        let top = up_to.min(self.max_dim);
        for n in 0..=top {
            let id = CubeMap::identity(n);
            let t = self.action_table(&id)?;
            if let Some(c) = (0..self.counts[n]).find(|&c| t[c] != c) {
                return Ok(Err(FunctorialityViolation {
                    f: id.clone(),
                    g: id,
                    cube: c,
                }));
            }
        }
        // tables[m][n][f] = f^* on K_n, for f : [m] → [n]
        let tables: Vec<Vec<Vec<Vec<usize>>>> = (0..=top)
            .map(|m| {
                (0..=top)
                    .map(|n| {
                        if m > n {
                            return Ok(Vec::new());
                        }
                        homset(m, n)?.iter().map(|f| self.action_table(f)).collect()
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut pairs = 0u64;
        for n in 0..=top {
            if self.counts[n] == 0 {
                continue;
            }
            for m in 0..=n {
                let gs = homset(m, n)?;
                for l in 0..=m {
                    let fs = homset(l, m)?;
                    let composites = homset(l, n)?;
                    for (gi, g) in gs.iter().enumerate() {
                        for (fi, f) in fs.iter().enumerate() {
                            pairs += 1;
                            let gf = compose(g, f)?;
                            let gfi = composites.binary_search(&gf).map_err(|_| {
                                Error::Factorization(format!(
                                    "composite {gf} missing from its hom-set"
                                ))
                            })?;
                            let (tg, tf, tgf) =
                                (&tables[m][n][gi], &tables[l][m][fi], &tables[l][n][gfi]);
                            if let Some(c) = (0..self.counts[n]).find(|&c| tgf[c] != tf[tg[c]]) {
                                return Ok(Err(FunctorialityViolation {
                                    f: f.clone(),
                                    g: g.clone(),
                                    cube: c,
                                }));
                            }
                        }
                    }
                }
            }
        }
        Ok(Ok(pairs))
    }

    /// Random composable pairs over the full dimension range.
    pub fn check_functoriality_sampled<R: Rng>(
        &self,
        rng: &mut R,
        samples: usize,
    ) -> Result<std::result::Result<u64, FunctorialityViolation>> {
        let mut checked = 0u64;
        let dims: Vec<usize> = (0..=self.max_dim).filter(|&n| self.counts[n] > 0).collect();
        if dims.is_empty() {
            return Ok(Ok(0));
        }
        for _ in 0..samples {
            let n = dims[rng.random_range(0..dims.len())];
            let m = rng.random_range(0..=n);
            let l = rng.random_range(0..=m);
            let gs = homset(m, n)?;
            let fs = homset(l, m)?;
            let g = &gs[rng.random_range(0..gs.len())];
            let f = &fs[rng.random_range(0..fs.len())];
            let c = rng.random_range(0..self.counts[n]);
            let lhs = self.action(&compose(g, f)?, c)?;
            let rhs = self.action(f, self.action(g, c)?)?;
            checked += 1;
            if lhs != rhs {
                return Ok(Err(FunctorialityViolation {
                    f: f.clone(),
                    g: g.clone(),
                    cube: c,
                }));
            }
        }
        Ok(Ok(checked))
    }

    /// Non-identity endos `f` of `[n]` with `f^* c = c`.
    pub fn fixing_endos(&self, n: usize, c: usize) -> Result<Vec<CubeMap>> {
        self.check_cube(n, c)?;
        Ok(endos(n)?
            .iter()
            .enumerate()
            .filter(|(e, f)| !f.is_identity() && self.endo_act[n][*e][c] == c)
            .map(|(_, f)| f.clone())
            .collect())
    }

    /// The underlying precubical set (forgetting the endo action).
    pub fn underlying_precubical(&self) -> Result<Precubical> {
        Precubical::from_fn(&self.counts, |n, i, a, c| self.face(n, i, a, c))
    }
}

// ---------------------------------------------------------------------------
// Free generation

/// A cube of the free symmetric transverse set on a precubical set `K`:
/// the endo `psi` applied to the generating `m`-cube `base` of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeCell {
    pub psi: CubeMap,
    pub base: usize,
}

impl FreeCell {
    /// Id of this cell in [`free_sts`]`(k)`.
    pub fn encode(&self, k: &Precubical) -> Result<usize> {
        let m = self.psi.dom();
        if self.base >= k.count(m) {
            return Err(Error::UnknownCube {
                dim: m,
                id: self.base,
            });
        }
        Ok(endo_index(&self.psi)? * k.count(m) + self.base)
    }

    pub fn decode(k: &Precubical, m: usize, id: usize) -> Result<FreeCell> {
        let per = k.count(m);
        let all = endos(m)?;
        if per == 0 || id >= per * all.len() {
            return Err(Error::UnknownCube { dim: m, id });
        }
        Ok(FreeCell {
            psi: all[id / per].clone(),
            base: id % per,
        })
    }
}

/// The free symmetric transverse set on `k`. Its `m`-cubes are the pairs
/// `(ψ, c)` with `ψ` an endo of `[m]` and `c ∈ K_m`; `f^*(ψ, c)` factors
/// `ψ ∘ f = φ' ∘ ψ'` and returns `(ψ', φ'^* c)`.
pub fn free_sts(k: &Precubical) -> Result<Sts> {
    let counts: Vec<usize> = (0..=k.max_dim())
        .map(|m| Ok(endos(m)?.len() * k.count(m)))
        .collect::<Result<_>>()?;
    let act = |f: &CubeMap, m: usize, id: usize| -> Result<usize> {
        let cell = FreeCell::decode(k, m, id)?;
        let fac = factorize(&compose(&cell.psi, f)?)?;
        FreeCell {
            base: k.apply_cocubical(&fac.phi, cell.base),
            psi: fac.psi,
        }
        .encode(k)
    };
    Sts::from_generators(
        counts,
        Budget::from_env(),
        |m, i, a, c| act(&coface(i, a, m)?, m, c),
        |m, _, psi, c| act(psi, m, c),
    )
}

/// The free symmetric transverse set on `□[n]`, or on `∂□[n]` when
/// `boundary` is set, its counterpart inside the representable on `[n]`,
/// and the comparison map `(ψ, φ) ↦ φ∘ψ` between them.
pub fn free_comparison(n: usize, boundary: bool) -> Result<(Sts, Sts, StsMap)> {
    let k = if boundary {
        Precubical::boundary_cube(n)?
    } else {
        Precubical::standard_cube(n)?
    };
    let free = free_sts(&k)?;
    let target = if boundary {
        Sts::boundary(n, n - 1)?
    } else {
        Sts::representable(n, n)?
    };
    let components = (0..=k.max_dim())
        .map(|m| {
            let cells = cocubical_maps(m, n);
            (0..free.count(m))
                .map(|id| {
                    let cell = FreeCell::decode(&k, m, id)?;
                    representable_id(&compose(&cells[cell.base], &cell.psi)?)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((free, target, StsMap { components }))
}

/// The induced map `free_sts(k) → free_sts(l)`.
pub fn free_map(k: &Precubical, l: &Precubical, map: &PrecubicalMap) -> Result<StsMap> {
    map.check(k, l)?;
    let components = (0..=k.max_dim())
        .map(|m| {
            (0..endos(m)?.len() * k.count(m))
                .map(|id| {
                    let cell = FreeCell::decode(k, m, id)?;
                    FreeCell {
                        base: map.components[m][cell.base],
                        psi: cell.psi,
                    }
                    .encode(l)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(StsMap { components })
}

// ---------------------------------------------------------------------------
// Maps, pushouts and isomorphisms

/// A map of symmetric transverse sets, one cube-index component per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StsMap {
    pub components: Vec<Vec<usize>>,
}

impl StsMap {
    pub fn identity(k: &Sts) -> Self {
        StsMap {
            components: k.counts.iter().map(|&c| (0..c).collect()).collect(),
        }
    }

    /// `[m]`-cubes `g` of a (truncated) representable on `[f.dom]` go to
    /// `f ∘ g` in a (truncated) representable on `[f.cod]`.
    pub fn postcomposition(f: &CubeMap, src: &Sts, tgt: &Sts) -> Result<Self> {
        let components = (0..=src.max_dim)
            .map(|m| {
                let homs = if src.count(m) == 0 {
                    Vec::new().into()
                } else {
                    homset(m, f.dom())?
                };
                if homs.len() != src.count(m) {
                    return Err(Error::NotEquivariant(format!(
                        "source is not a representable on [{}] in dimension {m}",
                        f.dom()
                    )));
                }
                homs.iter()
                    .map(|g| representable_id(&compose(f, g)?))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let map = StsMap { components };
        map.check(src, tgt)?;
        Ok(map)
    }

    /// Range and equivariance on every generating operator.
    pub fn check(&self, src: &Sts, tgt: &Sts) -> Result<()> {
        if src.max_dim != tgt.max_dim || self.components.len() != src.max_dim + 1 {
            return Err(Error::NotEquivariant("dimension ranges differ".into()));
        }
        for n in 0..=src.max_dim {
            let comp = &self.components[n];
            if comp.len() != src.counts[n] {
                return Err(Error::NotEquivariant(format!(
                    "component {n} has the wrong length"
                )));
            }
            if let Some(&bad) = comp.iter().find(|&&t| t >= tgt.counts[n]) {
                return Err(Error::UnknownCube { dim: n, id: bad });
            }
            if src.counts[n] == 0 {
                continue;
            }
            for slot in 0..if n == 0 { 0 } else { 2 * n } {
                let (i, a) = slot_face(slot);
                for (c, &image) in comp.iter().enumerate() {
                    if self.components[n - 1][src.face(n, i, a, c)] != tgt.face(n, i, a, image) {
                        return Err(Error::NotEquivariant(format!(
                            "face {i},{a} of {n}-cube {c} is not preserved"
                        )));
                    }
                }
            }
            for (e, psi) in endos(n)?.iter().enumerate() {
                for c in 0..src.counts[n] {
                    if comp[src.endo_act[n][e][c]] != tgt.endo_act[n][e][comp[c]] {
                        return Err(Error::NotEquivariant(format!(
                            "action of {psi} on {n}-cube {c} is not preserved"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Drops the components above dimension `n`.
    pub fn truncate(&self, n: usize) -> Self {
        StsMap {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(d, c)| if d > n { Vec::new() } else { c.clone() })
                .collect(),
        }
    }

    pub fn is_bijective(&self, tgt: &Sts) -> bool {
        self.components.iter().enumerate().all(|(n, comp)| {
            let mut seen = vec![false; tgt.count(n)];
            comp.len() == tgt.count(n)
                && comp.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
        })
    }
}

/// A pushout with its two coprojections.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub sts: Sts,
    pub left: StsMap,
    pub right: StsMap,
}

/// The pushout of `K ← A → L`, computed dimensionwise. Cubes are numbered
/// by their smallest representative, with `K` before `L`; in particular
/// `K`'s ids are preserved when `i` is injective.
pub fn pushout(a: &Sts, k: &Sts, l: &Sts, i: &StsMap, j: &StsMap) -> Result<Pushout> {
    i.check(a, k)?;
    j.check(a, l)?;
    if k.max_dim != l.max_dim {
        return Err(Error::DimensionMismatch {
            expected: k.max_dim,
            found: l.max_dim,
        });
    }
    let quotients = glue(
        &k.counts,
        &l.counts,
        &a.counts,
        &i.components,
        &j.components,
    );
    let counts: Vec<usize> = quotients.iter().map(|q| q.class_count()).collect();
    let classify = |n: usize,
                    x: usize,
                    from_k: &dyn Fn(usize) -> usize,
                    from_l: &dyn Fn(usize) -> usize,
                    tgt: usize| {
        let y = if x < k.counts[n] {
            from_k(x)
        } else {
            k.counts[tgt] + from_l(x - k.counts[n])
        };
        quotients[tgt].class_of(y)
    };
    let ambiguous = || Error::NotEquivariant("the glued action is not well defined".into());
    let sts = Sts::from_generators(
        counts,
        Budget::from_env(),
        |n, fi, fa, c| {
            let image = |x| {
                classify(
                    n,
                    x,
                    &|y| k.face(n, fi, fa, y),
                    &|y| l.face(n, fi, fa, y),
                    n - 1,
                )
            };
            let class = quotients[n].members(c);
            let first = image(class[0]);
            if class.iter().any(|&x| image(x) != first) {
                return Err(ambiguous());
            }
            Ok(first)
        },
        |n, e, _, c| {
            let image = |x| classify(n, x, &|y| k.endo_act[n][e][y], &|y| l.endo_act[n][e][y], n);
            let class = quotients[n].members(c);
            let first = image(class[0]);
            if class.iter().any(|&x| image(x) != first) {
                return Err(ambiguous());
            }
            Ok(first)
        },
    )?;
    let left = StsMap {
        components: (0..=k.max_dim)
            .map(|n| (0..k.counts[n]).map(|x| quotients[n].class_of(x)).collect())
            .collect(),
    };
    let right = StsMap {
        components: (0..=k.max_dim)
            .map(|n| {
                (0..l.counts[n])
                    .map(|x| quotients[n].class_of(k.counts[n] + x))
                    .collect()
            })
            .collect(),
    };
    Ok(Pushout { sts, left, right })
}

struct IsoSearch<'a> {
    a: &'a Sts,
    b: &'a Sts,
    fwd: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    steps: u64,
    limit: u64,
}

impl IsoSearch<'_> {
    /// Assigns `c ↦ d` in dimension `n` and propagates along all generators.
    fn assign(&mut self, n: usize, c: usize, d: usize) -> bool {
        let mut stack = vec![(n, c, d)];
        while let Some((n, c, d)) = stack.pop() {
            if self.fwd[n][c] == d {
                continue;
            }
            if self.fwd[n][c] != UNSET || self.used[n][d] {
                return false;
            }
            self.fwd[n][c] = d;
            self.used[n][d] = true;
            self.trail.push((n, c));
            if n > 0 {
                for slot in 0..2 * n {
                    stack.push((n - 1, self.a.faces[n][slot][c], self.b.faces[n][slot][d]));
                }
            }
            for e in 0..self.a.endo_act[n].len() {
                stack.push((n, self.a.endo_act[n][e][c], self.b.endo_act[n][e][d]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (n, c) = self.trail.pop().expect("nonempty trail");
            self.used[n][self.fwd[n][c]] = false;
            self.fwd[n][c] = UNSET;
        }
    }

    fn search(&mut self) -> Result<bool> {
        let next = (0..=self.a.max_dim)
            .rev()
            .find_map(|n| self.fwd[n].iter().position(|&t| t == UNSET).map(|c| (n, c)));
        let Some((n, c)) = next else {
            return Ok(true);
        };
        for d in 0..self.b.counts[n] {
            if self.used[n][d] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.limit {
                return Err(Error::Budget {
                    needed: self.steps as u128,
                    budget: self.limit as u128,
                });
            }
            let mark = self.trail.len();
            if self.assign(n, c, d) && self.search()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// An action-equivariant bijection `a → b`, found by backtracking with
/// propagation along the generating operators. `step_limit` bounds the
/// number of tentative assignments.
pub fn find_isomorphism(a: &Sts, b: &Sts, step_limit: u64) -> Result<Option<StsMap>> {
    if a.max_dim != b.max_dim || a.counts != b.counts {
        return Ok(None);
    }
    let mut s = IsoSearch {
        a,
        b,
        fwd: a.counts.iter().map(|&c| vec![UNSET; c]).collect(),
        used: b.counts.iter().map(|&c| vec![false; c]).collect(),
        trail: Vec::new(),
        steps: 0,
        limit: step_limit,
    };
    if !s.search()? {
        return Ok(None);
    }
    let map = StsMap { components: s.fwd };
    map.check(a, b)?;
    Ok(Some(map))
}

// ---------------------------------------------------------------------------
// Cellular construction

/// One step of a cellular build script: attach an `n`-cell whose face
/// `(i, α)` goes to the `(n-1)`-cube `attach["i,α"]` of the current skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub dim: usize,
    #[serde(default)]
    pub attach: BTreeMap<String, usize>,
}

/// Cell counts per dimension and the generating cube `(dim, id)` of each cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCertificate {
    pub cells: Vec<usize>,
    pub generators: Vec<(usize, usize)>,
}

pub fn parse_build_script(text: &str) -> Result<Vec<CellSpec>> {
    Ok(serde_json::from_str(text)?)
}

/// The map `∂⧠̂[n] → x` sending `g : [m] → [n]` to `g'^* x_{i,α}` for any
/// face `(i, α)` containing the image of `g`, where `g = δᵢ^α ∘ g'`.
pub fn attaching_map(x: &Sts, n: usize, faces: &[usize]) -> Result<StsMap> {
    if n == 0 || faces.len() != 2 * n {
        return Err(Error::Attach(format!(
            "an {n}-cell needs {} face images",
            2 * n
        )));
    }
    if let Some(&bad) = faces.iter().find(|&&f| f >= x.count(n - 1)) {
        return Err(Error::UnknownCube {
            dim: n - 1,
            id: bad,
        });
    }
    let full = full_mask(n);
    let mut components = vec![Vec::new(); x.max_dim + 1];
    for (m, comp) in components.iter_mut().enumerate().take(n) {
        for g in homset(m, n)?.iter() {
            let agree = !(g.bottom_image() ^ g.top_image()) & full;
            let mut image = None;
            for p in (0..n).filter(|p| agree >> p & 1 == 1) {
                let alpha = (g.bottom_image() >> p & 1) as u8;
                let rest = full & !(1 << p);
                let g1 = CubeMap::new(
                    m,
                    n - 1,
                    g.table().iter().map(|&v| extract(v, rest)).collect(),
                )?;
                let y = x.action(&g1, faces[face_slot(p + 1, alpha)])?;
                match image {
                    None => image = Some(y),
                    Some(prev) if prev != y => {
                        return Err(Error::Attach(format!(
                            "the faces disagree on the {m}-cube {g} of the boundary"
                        )))
                    }
                    _ => {}
                }
            }
            comp.push(image.expect("a proper sub-cube lies in some face"));
        }
    }
    let map = StsMap { components };
    map.check(&Sts::boundary(n, x.max_dim)?, x)?;
    Ok(map)
}

/// Attaches one `n`-cell to `x`; returns the new object and the id of the
/// cell's generating `n`-cube. Ids of `x` are preserved.
pub fn attach_cell(x: &Sts, n: usize, faces: &[usize]) -> Result<(Sts, usize)> {
    let cell = Sts::representable(n, x.max_dim)?;
    let bd = Sts::boundary(n, x.max_dim)?;
    let i = if n == 0 {
        StsMap {
            components: vec![Vec::new(); x.max_dim + 1],
        }
    } else {
        attaching_map(x, n, faces)?
    };
    let j = StsMap::identity(&bd);
    let po = pushout(&bd, x, &cell, &i, &j)?;
    let top = po.right.components[n][endo_index(&CubeMap::identity(n))?];
    Ok((po.sts, top))
}

/// Runs a build script, attaching cells in nondecreasing dimension.
pub fn certify_cellular(
    script: &[CellSpec],
    max_dim: Option<usize>,
) -> Result<(Sts, CellCertificate)> {
    let top = script.iter().map(|c| c.dim).max().unwrap_or(0);
    let max_dim = max_dim.unwrap_or(top);
    if top > max_dim {
        return Err(Error::Attach(format!(
            "a {top}-cell exceeds max_dim {max_dim}"
        )));
    }
    let mut x = Sts::empty(max_dim)?;
    let mut cert = CellCertificate {
        cells: vec![0; max_dim + 1],
        generators: Vec::new(),
    };
    let mut last = 0;
    for (step, cell) in script.iter().enumerate() {
        let n = cell.dim;
        if n < last {
            return Err(Error::Attach(format!(
                "step {step}: cells must be attached in nondecreasing dimension"
            )));
        }
        last = n;
        let mut faces = vec![UNSET; 2 * n];
        for (key, &target) in &cell.attach {
            let (i, a) = parse_face_key(key)?;
            if i > n {
                return Err(Error::Attach(format!(
                    "step {step}: an {n}-cell has no face {key}"
                )));
            }
            faces[face_slot(i, a)] = target;
        }
        if let Some(slot) = faces.iter().position(|&f| f == UNSET) {
            let (i, a) = slot_face(slot);
            return Err(Error::Attach(format!(
                "step {step}: face {i},{a} is not attached"
            )));
        }
        let (next, generator) = attach_cell(&x, n, &faces)?;
        x = next;
        cert.cells[n] += 1;
        cert.generators.push((n, generator));
    }
    Ok((x, cert))
}

/// A build script reproducing `⧠̂[n]`: one cell per cocubical face of `[n]`,
/// in the order of [`cocubical_maps`].
pub fn standard_cube_script(n: usize) -> Result<Vec<CellSpec>> {
    check_sts_dim(n)?;
    let mut script = Vec::new();
    for k in 0..=n {
        let maps = cocubical_maps(k, n);
        let lower = if k == 0 {
            Vec::new()
        } else {
            cocubical_maps(k - 1, n)
        };
        for phi in &maps {
            let mut attach = BTreeMap::new();
            for slot in 0..2 * k {
                let (i, a) = slot_face(slot);
                let g = compose(phi, &coface(i, a, k)?)?;
                let id = lower.binary_search(&g).expect("cocubical composite");
                attach.insert(format!("{i},{a}"), id);
            }
            script.push(CellSpec { dim: k, attach });
        }
    }
    Ok(script)
}

/// In a cellular object every `K_n` splits into `E(n)`-element orbits of
/// fresh cells, so `|K_n|` must be a multiple of `|End([n])|`. Returns the
/// implied cell counts, or the first dimension where this fails.
pub fn implied_cell_counts(k: &Sts) -> Result<std::result::Result<Vec<usize>, usize>> {
    let mut cells = Vec::new();
    for n in 0..=k.max_dim {
        let e = endos(n)?.len();
        if !k.count(n).is_multiple_of(e) {
            return Ok(Err(n));
        }
        cells.push(k.count(n) / e);
    }
    Ok(Ok(cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{crushing_example, symmetry};
    use crate::homset::count_homset;

    #[test]
    fn cocubical_counts() {
        // 3^n faces in total, C(n,k)·2^(n-k) of dimension k
        for n in 0..=3 {
            let total: usize = (0..=n).map(|k| cocubical_maps(k, n).len()).sum();
            assert_eq!(total, 3usize.pow(n as u32));
            for k in 0..=n {
                assert!(cocubical_maps(k, n).iter().all(CubeMap::is_cocubical));
            }
        }
    }

    #[test]
    fn representable_counts() {
        let r = Sts::representable(2, 2).unwrap();
        assert_eq!(r.counts(), &[4, 4, 4]);
        for n in 0..=3 {
            let r = Sts::representable(n, 3).unwrap();
            for m in 0..=3 {
                assert_eq!(
                    r.count(m) as u128,
                    count_homset(m, n, Budget::default()).unwrap()
                );
            }
        }
    }

    #[test]
    fn boundary_and_truncation() {
        assert!(Sts::boundary(0, 2).unwrap().is_empty());
        assert_eq!(
            Sts::boundary(3, 3).unwrap(),
            Sts::representable(3, 3).unwrap().truncate(2)
        );
        assert_eq!(Sts::boundary(4, 4).unwrap().counts(), &[16, 32, 96, 528, 0]);
        let b = Sts::boundary(2, 2).unwrap();
        assert_eq!(b.counts(), &[4, 4, 0]);
        let r = Sts::representable(2, 2).unwrap();
        assert_eq!(r.truncate(2), r);
    }

    #[test]
    fn representable_action_is_precomposition() {
        let r = Sts::representable(2, 2).unwrap();
        let homs = homset(1, 2).unwrap();
        for f in homset(1, 2).unwrap().iter() {
            for (c, g) in homset(2, 2).unwrap().iter().enumerate() {
                let got = r.action(f, c).unwrap();
                assert_eq!(homs[got], compose(g, f).unwrap());
            }
        }
    }

    #[test]
    fn constructions_are_functorial() {
        let objects = [
            Sts::representable(3, 3).unwrap(),
            Sts::boundary(3, 3).unwrap(),
            Sts::terminal(3).unwrap(),
            free_sts(&Precubical::standard_cube(2).unwrap()).unwrap(),
        ];
        for k in &objects {
            assert!(k.check_functoriality(3).unwrap().is_ok());
        }
    }

    #[test]
    fn corrupted_table_breaks_functoriality() {
        let mut r = Sts::representable(2, 2).unwrap();
        let s = endo_index(&symmetry(1, 2).unwrap()).unwrap();
        // swap the images of two cubes under σ₁
        r.endo_act[2][s].swap(0, 1);
        assert!(r.check_functoriality(2).unwrap().is_err());
    }

    #[test]
    fn free_standard_cube_is_representable() {
        for n in 0..=3 {
            let std = Precubical::standard_cube(n).unwrap();
            let free = free_sts(&std).unwrap();
            let rep = Sts::representable(n, n).unwrap();
            assert_eq!(free.counts(), rep.counts());
            let iso = find_isomorphism(&free, &rep, 1_000_000).unwrap().unwrap();
            assert!(iso.is_bijective(&rep));
        }
    }

    #[test]
    fn comparison_maps_are_isomorphisms() {
        for n in 0..=3 {
            for boundary in [false, true] {
                if boundary && n == 0 {
                    continue;
                }
                let (free, target, map) = free_comparison(n, boundary).unwrap();
                map.check(&free, &target).unwrap();
                assert!(map.is_bijective(&target));
            }
        }
    }

    #[test]
    fn free_of_point_is_point() {
        let free = free_sts(&Precubical::point()).unwrap();
        assert_eq!(free, Sts::terminal(0).unwrap());
    }

    #[test]
    fn precubical_json_round_trip() {
        let k = Precubical::standard_cube(2).unwrap();
        let back = Precubical::from_json(&k.to_json()).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn precubical_validation() {
        let bad_identity = r#"{"max_dim":2,
            "cubes":{"0":[0,1,2,3],"1":[10,11,12,13],"2":[20]},
            "faces":{"10":{"1,0":0,"1,1":1},"11":{"1,0":2,"1,1":3},
                     "12":{"1,0":0,"1,1":2},"13":{"1,0":1,"1,1":3},
                     "20":{"1,0":12,"1,1":13,"2,0":11,"2,1":10}}}"#;
        assert!(matches!(
            Precubical::from_json(bad_identity),
            Err(Error::Precubical(_))
        ));
        let missing = r#"{"max_dim":1,"cubes":{"0":[0,1],"1":[5]},"faces":{"5":{"1,0":0}}}"#;
        assert!(Precubical::from_json(missing).is_err());
        let square = r#"{"max_dim":2,
            "cubes":{"0":[0,1,2,3],"1":[10,11,12,13],"2":[20]},
            "faces":{"10":{"1,0":0,"1,1":1},"11":{"1,0":2,"1,1":3},
                     "12":{"1,0":0,"1,1":2},"13":{"1,0":1,"1,1":3},
                     "20":{"1,0":12,"1,1":13,"2,0":10,"2,1":11}}}"#;
        let k = Precubical::from_json(square).unwrap();
        assert_eq!(k.counts(), vec![4, 4, 1]);
    }

    #[test]
    fn pushout_along_identities() {
        let k = Sts::representable(2, 2).unwrap();
        let id = StsMap::identity(&k);
        let po = pushout(&k, &k, &k, &id, &id).unwrap();
        assert_eq!(po.sts, k);
    }

    #[test]
    fn crushed_face_in_pushout() {
        let f = crushing_example();
        let rep = Sts::representable(3, 3).unwrap();
        let bd = Sts::boundary(3, 3).unwrap();
        let df = StsMap::postcomposition(&f, &bd, &bd).unwrap();
        let po = pushout(&bd, &rep, &bd, &StsMap::identity(&bd), &df).unwrap();
        assert_eq!(
            po.sts.counts(),
            bd.counts()
                .iter()
                .enumerate()
                .map(|(n, &c)| if n == 3 { 66 } else { c })
                .collect::<Vec<_>>()
        );
        let top = po.left.components[3][endo_index(&CubeMap::identity(3)).unwrap()];
        let square = po.sts.face(3, 3, 0, top);
        let s1 = symmetry(1, 2).unwrap();
        assert_eq!(po.sts.action(&s1, square).unwrap(), square);
        assert_eq!(po.sts.face(2, 2, 0, square), po.sts.face(2, 1, 0, square));
        assert_eq!(po.sts.face(2, 1, 1, square), po.sts.face(2, 2, 1, square));
        // in the cube itself that face is an honest square
        let rep_square = rep.face(3, 3, 0, endo_index(&CubeMap::identity(3)).unwrap());
        assert_ne!(rep.action(&s1, rep_square).unwrap(), rep_square);
    }

    #[test]
    fn interval_from_cells() {
        let script =
            parse_build_script(r#"[{"dim":0},{"dim":0},{"dim":1,"attach":{"1,0":0,"1,1":1}}]"#)
                .unwrap();
        let (k, cert) = certify_cellular(&script, None).unwrap();
        assert_eq!(k.counts(), &[2, 1]);
        assert_eq!(cert.cells, vec![2, 1]);
        assert_eq!(k, Sts::representable(1, 1).unwrap());
    }

    #[test]
    fn point_from_one_cell() {
        let script = parse_build_script(r#"[{"dim":0}]"#).unwrap();
        let (k, _) = certify_cellular(&script, Some(2)).unwrap();
        assert_eq!(k.counts(), &[1, 0, 0]);
    }

    #[test]
    fn script_reproduces_representables() {
        for n in 0..=2 {
            let (k, cert) = certify_cellular(&standard_cube_script(n).unwrap(), None).unwrap();
            let rep = Sts::representable(n, n).unwrap();
            assert_eq!(k.counts(), rep.counts());
            assert!(find_isomorphism(&k, &rep, 1_000_000).unwrap().is_some());
            for &(d, g) in &cert.generators {
                assert!(k.fixing_endos(d, g).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn incompatible_attachment_rejected() {
        // a square whose left and bottom edges do not share a vertex
        let script = parse_build_script(
            r#"[{"dim":0},{"dim":0},{"dim":0},{"dim":0},
                {"dim":1,"attach":{"1,0":0,"1,1":1}},
                {"dim":1,"attach":{"1,0":2,"1,1":3}},
                {"dim":2,"attach":{"1,0":0,"1,1":1,"2,0":0,"2,1":1}}]"#,
        )
        .unwrap();
        assert!(matches!(
            certify_cellular(&script, None),
            Err(Error::Attach(_))
        ));
        let descending =
            parse_build_script(r#"[{"dim":1,"attach":{"1,0":0,"1,1":0}},{"dim":0}]"#).unwrap();
        assert!(certify_cellular(&descending, None).is_err());
    }

    #[test]
    fn terminal_is_obstructed() {
        let t = Sts::terminal(3).unwrap();
        assert_eq!(implied_cell_counts(&t).unwrap(), Err(2));
        assert_eq!(t.fixing_endos(2, 0).unwrap().len(), 3);
        let rep = Sts::representable(3, 3).unwrap();
        assert_eq!(implied_cell_counts(&rep).unwrap(), Ok(vec![8, 12, 6, 1]));
    }

    #[test]
    fn free_commutes_with_pushout() {
        // two squares glued along an edge
        let square = Precubical::standard_cube(2).unwrap();
        let edges = cocubical_maps(1, 2);
        let verts = cocubical_maps(0, 2);
        let along = |phi: &CubeMap| PrecubicalMap {
            components: vec![
                cocubical_maps(0, 1)
                    .iter()
                    .map(|v| verts.binary_search(&compose(phi, v).unwrap()).unwrap())
                    .collect(),
                vec![edges.binary_search(phi).unwrap()],
            ],
        };
        let lift = |m: PrecubicalMap| {
            let mut c = m.components;
            c.push(Vec::new());
            PrecubicalMap { components: c }
        };
        let edge2 = Precubical::from_fn(&[2, 1, 0], |_, _, a, _| a as usize).unwrap();
        let i = lift(along(&coface(1, 1, 2).unwrap()));
        let j = lift(along(&coface(1, 0, 2).unwrap()));
        let glued = precubical_pushout(&edge2, &square, &square, &i, &j).unwrap();
        assert_eq!(glued.counts(), vec![6, 7, 2]);
        let lhs = free_sts(&glued).unwrap();
        let fk = free_sts(&square).unwrap();
        let fa = free_sts(&edge2).unwrap();
        let fi = free_map(&edge2, &square, &i).unwrap();
        let fj = free_map(&edge2, &square, &j).unwrap();
        let rhs = pushout(&fa, &fk, &fk, &fi, &fj).unwrap();
        assert!(find_isomorphism(&lhs, &rhs.sts, 1_000_000)
            .unwrap()
            .is_some());
        // truncation commutes with the same pushout
        let low = pushout(
            &fa.truncate(1),
            &fk.truncate(1),
            &fk.truncate(1),
            &fi.truncate(1),
            &fj.truncate(1),
        )
        .unwrap();
        assert!(find_isomorphism(&low.sts, &rhs.sts.truncate(1), 1_000_000)
            .unwrap()
            .is_some());
    }
}
