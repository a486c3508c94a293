//! Hom-sets of the cotransverse category: enumeration, counting and the
//! unique `cocubical ∘ endo` factorization.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::binomial;
use rayon::prelude::*;

use crate::cube::{compose, embedding, extract, full_mask, CubeMap};
use crate::error::{Error, Result};

/// Default enumeration budget, in table cells `2^m · n`.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "TRANSVERSE_BUDGET";

/// Resource guard for exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub cells: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cells: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(cells: u128) -> Self {
        Budget { cells }
    }

    /// Reads the override from the environment, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    /// Guards an enumeration of `⧠̂([m],[n])`, costed at `2^m · n` cells.
    pub fn check(&self, m: usize, n: usize) -> Result<()> {
        let needed = if m >= 127 {
            u128::MAX
        } else {
            (1u128 << m).saturating_mul(n.max(1) as u128)
        };
        self.require(needed)
    }

    /// Guards an arbitrary allocation of `needed` cells.
    pub fn require(&self, needed: u128) -> Result<()> {
        if needed > self.cells {
            Err(Error::Budget {
                needed,
                budget: self.cells,
            })
        } else {
            Ok(())
        }
    }
}

struct Search {
    m: usize,
    n: usize,
    table: Vec<u32>,
    fixed: Vec<bool>,
}

impl Search {
    fn candidates(&self, x: u32) -> Vec<u32> {
        if x == 0 {
            return (0..1u32 << self.n)
                .filter(|v| v.count_ones() as usize <= self.n - self.m)
                .collect();
        }
        let low = x.trailing_zeros();
        let w = self.table[(x ^ 1 << low) as usize];
        (0..self.n as u32)
            .filter(|j| w >> j & 1 == 0)
            .map(|j| w | 1 << j)
            .filter(|&v| {
                (0..self.m as u32)
                    .filter(|&k| k != low && x >> k & 1 == 1)
                    .all(|k| {
                        let u = self.table[(x ^ 1 << k) as usize];
                        u & !v == 0
                    })
            })
            .collect()
    }

    fn run(&mut self, x: usize, out: &mut Vec<CubeMap>) {
        if x == self.table.len() {
            out.push(CubeMap::from_table_unchecked(
                self.m,
                self.n,
                self.table.clone(),
            ));
            return;
        }
        if self.fixed[x] {
            // prefix already assigned; re-check against lower covers
            let v = self.table[x];
            let ok = (0..self.m as u32).filter(|&k| x >> k & 1 == 1).all(|k| {
                let u = self.table[x ^ 1 << k];
                u & !v == 0 && v.count_ones() == u.count_ones() + 1
            });
            if ok {
                self.run(x + 1, out);
            }
            return;
        }
        for v in self.candidates(x as u32) {
            self.table[x] = v;
            self.run(x + 1, out);
        }
    }
}

/// Every cotransverse map `[m] → [n]`, sorted lexicographically by table.
///
/// The search assigns images in increasing vertex order, which is a linear
/// extension of the product order, so each vertex sees all of its lower
/// covers already placed.
pub fn enumerate_homset(m: usize, n: usize, budget: Budget) -> Result<Vec<CubeMap>> {
    budget.check(m, n)?;
    if m > n {
        return Ok(Vec::new());
    }
    let size = 1usize << m;
    let mut search = Search {
        m,
        n,
        table: vec![0; size],
        fixed: vec![false; size],
    };
    let mut out = Vec::new();
    search.run(0, &mut out);
    Ok(out)
}

/// Parallel enumeration: the search is split on the images of `0_m` and the
/// height-1 vertices, each branch is completed independently, and the merged
/// result is re-sorted.
pub fn enumerate_homset_par(m: usize, n: usize, budget: Budget) -> Result<Vec<CubeMap>> {
    budget.check(m, n)?;
    if m > n {
        return Ok(Vec::new());
    }
    if m == 0 {
        return enumerate_homset(m, n, budget);
    }
    // prefixes: (f(0), f(e_1), ..., f(e_m))
    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    for base in (0..1u32 << n).filter(|v| v.count_ones() as usize <= n - m) {
        let ups: Vec<u32> = (0..n as u32)
            .filter(|j| base >> j & 1 == 0)
            .map(|j| base | 1 << j)
            .collect();
        let mut acc = vec![vec![base]];
        for _ in 0..m {
            acc = acc
                .into_iter()
                .flat_map(|p| {
                    ups.iter().map(move |&u| {
                        let mut q = p.clone();
                        q.push(u);
                        q
                    })
                })
                .collect();
        }
        prefixes.extend(acc);
    }
    let mut all: Vec<CubeMap> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let size = 1usize << m;
            let mut search = Search {
                m,
                n,
                table: vec![0; size],
                fixed: vec![false; size],
            };
            search.table[0] = prefix[0];
            search.fixed[0] = true;
            for i in 0..m {
                search.table[1 << i] = prefix[i + 1];
                search.fixed[1 << i] = true;
            }
            let mut out = Vec::new();
            search.run(0, &mut out);
            out
        })
        .collect();
    all.sort();
    Ok(all)
}

type HomCache = Mutex<HashMap<(usize, usize), Arc<[CubeMap]>>>;

fn cache() -> &'static HomCache {
    static CACHE: OnceLock<HomCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached enumeration with the default budget.
pub fn homset(m: usize, n: usize) -> Result<Arc<[CubeMap]>> {
    if let Some(hit) = cache().lock().unwrap().get(&(m, n)) {
        return Ok(hit.clone());
    }
    let maps: Arc<[CubeMap]> = enumerate_homset(m, n, Budget::from_env())?.into();
    cache().lock().unwrap().insert((m, n), maps.clone());
    Ok(maps)
}

/// The endomorphism monoid of `[n]`, sorted.
pub fn endos(n: usize) -> Result<Arc<[CubeMap]>> {
    homset(n, n)
}

/// Position of an endo of `[n]` within [`endos`].
pub fn endo_index(f: &CubeMap) -> Result<usize> {
    let all = endos(f.dom())?;
    all.binary_search(f)
        .map_err(|_| Error::Factorization(format!("{f} is not an endo in the catalogue")))
}

/// `f = phi ∘ psi` with `psi` an endo of `[m]` and `phi` cocubical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub psi: CubeMap,
    pub phi: CubeMap,
}

/// The unique factorization of `f` through its own domain.
///
/// The free coordinates of `phi` are those where `f(0_m)` and `f(1_m)`
/// differ, in increasing order; the others are constants.
pub fn factorize(f: &CubeMap) -> Result<Factorization> {
    let (m, n) = (f.dom(), f.cod());
    let lo = f.bottom_image();
    let hi = f.top_image();
    let free = lo ^ hi;
    if lo & !hi != 0 || free.count_ones() as usize != m {
        return Err(Error::Factorization(format!(
            "{f}: images of 0 and 1 do not span a {m}-dimensional interval"
        )));
    }
    let psi_table: Vec<u32> = f.table().iter().map(|&v| extract(v, free)).collect();
    let psi = CubeMap::new(m, m, psi_table)
        .map_err(|e| Error::Factorization(format!("{f}: endo part invalid: {e}")))?;
    let phi = embedding(m, n, lo & !free & full_mask(n), free);
    if compose(&phi, &psi)? != *f {
        return Err(Error::Factorization(format!("{f}: reconstruction differs")));
    }
    Ok(Factorization { psi, phi })
}

/// `|⧠̂([m],[n])| = |End([m])| · C(n,m) · 2^(n-m)`.
pub fn count_homset(m: usize, n: usize, budget: Budget) -> Result<u128> {
    if m > n {
        return Ok(0);
    }
    budget.check(m, n)?;
    let endo_count = enumerate_homset(m, m, budget)?.len() as u128;
    Ok(endo_count * binomial(n as u128, m as u128) * (1u128 << (n - m)))
}

/// Outcome of the finality check on one map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalityReport {
    pub canonical: Factorization,
    /// Number of pairs `(h, g)` with `g` a level endo and `h ∘ g = f`.
    pub factorizations: usize,
}

/// A factorization `(h, g)` from which the canonical one is not reachable by
/// exactly one connecting endo.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalityCounterexample {
    pub h: CubeMap,
    pub g: CubeMap,
    pub connecting: usize,
}

/// Checks that the canonical factorization `(phi, psi)` is final among all
/// factorizations `(h, g)` of `f` through `[m]`: for each one there is
/// exactly one endo `k` with `h = phi ∘ k` and `psi = k ∘ g`.
pub fn check_factorization_final(
    f: &CubeMap,
) -> Result<std::result::Result<FinalityReport, FinalityCounterexample>> {
    let canonical = factorize(f)?;
    let m = f.dom();
    let ends = endos(m)?;
    let outs = homset(m, f.cod())?;
    let mut count = 0;
    for h in outs.iter() {
        for g in ends.iter() {
            if compose(h, g)? != *f {
                continue;
            }
            count += 1;
            let mut connecting = 0;
            for k in ends.iter() {
                if compose(&canonical.phi, k)? == *h && compose(k, g)? == canonical.psi {
                    connecting += 1;
                }
            }
            if connecting != 1 {
                return Ok(Err(FinalityCounterexample {
                    h: h.clone(),
                    g: g.clone(),
                    connecting,
                }));
            }
        }
    }
    Ok(Ok(FinalityReport {
        canonical,
        factorizations: count,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{coface, crushing_example, gamma1, symmetry, validate_cotransverse};

    // brute force over every set map [m] -> [n]
    fn brute_force(m: usize, n: usize) -> Vec<Vec<u32>> {
        let size = 1usize << m;
        let cod = 1usize << n;
        let mut out = Vec::new();
        for code in 0..cod.pow(size as u32) {
            let mut c = code;
            let table: Vec<u32> = (0..size)
                .map(|_| {
                    let v = (c % cod) as u32;
                    c /= cod;
                    v
                })
                .collect();
            if validate_cotransverse(&table, m, n).is_ok() {
                out.push(table);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_homset(0, 0, Budget::default()).unwrap().len(), 1);
        let one = enumerate_homset(1, 1, Budget::default()).unwrap();
        assert_eq!(one, vec![CubeMap::identity(1)]);
        let two = enumerate_homset(2, 2, Budget::default()).unwrap();
        let gamma1_prime: CubeMap = "2>2:0,2,2,3".parse().unwrap();
        let mut expected = vec![
            CubeMap::identity(2),
            symmetry(1, 2).unwrap(),
            gamma1(),
            gamma1_prime,
        ];
        expected.sort();
        assert_eq!(two, expected);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (m, n) in [(0, 0), (0, 2), (1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
            let tables: Vec<Vec<u32>> = enumerate_homset(m, n, Budget::default())
                .unwrap()
                .into_iter()
                .map(|f| f.table().to_vec())
                .collect();
            assert_eq!(tables, brute_force(m, n), "{m}>{n}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for (m, n) in [(1, 2), (2, 3), (3, 3), (2, 4), (3, 4)] {
            assert_eq!(
                enumerate_homset(m, n, Budget::default()).unwrap(),
                enumerate_homset_par(m, n, Budget::default()).unwrap()
            );
        }
    }

    #[test]
    fn budget_guard() {
        let err = enumerate_homset(3, 3, Budget::new(10)).unwrap_err();
        assert!(matches!(
            err,
            Error::Budget {
                needed: 24,
                budget: 10
            }
        ));
        assert!(enumerate_homset(3, 2, Budget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn factorize_examples() {
        let f = crushing_example();
        let fac = factorize(&f).unwrap();
        assert!(fac.phi.is_identity());
        assert_eq!(fac.psi, f);

        let d = coface(1, 0, 3).unwrap();
        let f = compose(&d, &gamma1()).unwrap();
        assert_eq!(f.to_literal(), "2>3:0,2,2,6");
        let fac = factorize(&f).unwrap();
        assert_eq!(fac.psi, gamma1());
        assert_eq!(fac.phi, d);

        let d = coface(2, 1, 2).unwrap();
        let fac = factorize(&d).unwrap();
        assert!(fac.psi.is_identity());
        assert_eq!(fac.phi, d);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_homset(1, 2, Budget::default()).unwrap(), 4);
        for n in 0..5 {
            assert_eq!(count_homset(0, n, Budget::default()).unwrap(), 1 << n);
        }
        assert_eq!(count_homset(2, 2, Budget::default()).unwrap(), 4);
        for n in 0..=3 {
            for m in 0..=n {
                assert_eq!(
                    count_homset(m, n, Budget::default()).unwrap(),
                    enumerate_homset(m, n, Budget::default()).unwrap().len() as u128
                );
            }
        }
    }

    #[test]
    fn finality_examples() {
        let r = check_factorization_final(&gamma1()).unwrap().unwrap();
        assert!(r.canonical.phi.is_identity());
        assert_eq!(r.canonical.psi, gamma1());
        // (id,γ₁), (σ₁,γ₁'), and (γ₁,g) for each of the four endos g
        assert_eq!(r.factorizations, 6);

        let d = coface(2, 0, 3).unwrap();
        let r = check_factorization_final(&d).unwrap().unwrap();
        assert!(r.canonical.psi.is_identity());
        assert_eq!(r.canonical.phi, d);

        assert!(check_factorization_final(&crushing_example())
            .unwrap()
            .is_ok());
    }

    #[test]
    fn factorization_of_composite_from_parts() {
        for f in homset(2, 3).unwrap().iter() {
            for g in homset(1, 2).unwrap().iter() {
                let fg = compose(f, g).unwrap();
                let fac_g = factorize(g).unwrap();
                let fac_mid = factorize(&compose(f, &fac_g.phi).unwrap()).unwrap();
                let expected = Factorization {
                    psi: compose(&fac_mid.psi, &fac_g.psi).unwrap(),
                    phi: fac_mid.phi,
                };
                assert_eq!(factorize(&fg).unwrap(), expected);
            }
        }
    }
}
