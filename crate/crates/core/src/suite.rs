//! Named randomized and exhaustive check suites with deterministic seeding.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{
    compose, d1_vertex, validate_cotransverse, validate_cotransverse_pairwise, CubeMap, ExtDist,
    Rational, Vertex,
};
use crate::dpath::PLDPath;
use crate::dpath::{
    check_cocycle, is_breakpoint_quasi_isometry, is_dpath, is_natural, naturalize, transport,
    PLSegmentPath,
};
use crate::error::{Error, Result};
use crate::geo::{dpath_length, vertex_distance, ChainGraph, PointPresentation};
use crate::homset::{check_factorization_final, count_homset, endos, factorize, homset, Budget};
use crate::point::{d1_point, d1_sym, l1, RPoint};
use crate::reedy::{boundary_hom, compare_latching, matching_emptiness_check, test_battery};
use crate::sample::{self, Timing};
use crate::sts::{cocubical_maps, free_comparison, representable_id, Sts};
use crate::topo::{t_eval, t_eval_maxmin, t_eval_permutation, TMap};

/// Every suite name accepted by [`run_suite`].
pub const SUITES: [&str; 12] = [
    "metric-axioms",
    "cotransverse-validate",
    "factorization-unique",
    "t-functoriality",
    "t-oracle",
    "quasi-isometry",
    "natural-paths",
    "free-iso",
    "boundary-hom",
    "latching",
    "cocycle",
    "skeleton-metric",
];

/// Largest dimension swept exhaustively over hom-sets.
pub const EXHAUSTIVE_DIM: usize = 3;

/// Failures stored per report; the count covers all of them.
pub const MAX_REPORTED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_dim: usize,
    pub seed: u64,
    pub budget: Budget,
    /// Random samples per unit of work (points per map, paths per pair, …).
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(max_dim: usize, seed: u64, budget: Budget) -> Self {
        SuiteConfig {
            max_dim,
            seed,
            budget,
            samples: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSuiteReport {
    pub suite: String,
    pub max_dim: usize,
    pub seed: u64,
    pub samples: usize,
    pub cases: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Set when part of the requested range was skipped for size.
    pub budget_exhausted: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CheckSuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Deterministic JSON: everything except the wall time.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CheckSuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} ({} cases, {} failures, max_dim {}, seed {}{})",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failure_count,
            self.max_dim,
            self.seed,
            if self.budget_exhausted {
                ", budget exhausted"
            } else {
                ""
            }
        )?;
        for fail in &self.failures {
            writeln!(f, "  {}: {}", fail.case, fail.detail)?;
        }
        if self.failure_count > self.failures.len() as u64 {
            writeln!(
                f,
                "  … {} more",
                self.failure_count - self.failures.len() as u64
            )?;
        }
        write!(f, "  wall time {:.3}s", self.wall_time.as_secs_f64())
    }
}

/// Tally of one unit of work. Merging keeps the first failures in unit order.
#[derive(Debug, Clone, Default)]
struct Outcome {
    cases: u64,
    failed: u64,
    failures: Vec<Failure>,
    exhausted: bool,
}

impl Outcome {
    fn check(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(Failure {
                    case: case(),
                    detail: detail(),
                });
            }
        }
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.cases += other.cases;
        self.failed += other.failed;
        self.exhausted |= other.exhausted;
        let room = MAX_REPORTED - self.failures.len();
        self.failures.extend(other.failures.into_iter().take(room));
        self
    }
}

fn unit_rng(seed: u64, unit: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (unit as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `f` on every item in parallel; item `i` gets its own generator.
fn par_units<T: Sync>(
    cfg: &SuiteConfig,
    items: &[T],
    f: impl Fn(&T, &mut ChaCha8Rng) -> Result<Outcome> + Sync,
) -> Result<Outcome> {
    items
        .par_iter()
        .enumerate()
        .map(|(i, item)| f(item, &mut unit_rng(cfg.seed, i)))
        .try_reduce(Outcome::default, |a, b| Ok(a.merge(b)))
}

/// Clamps the exhaustive range, noting when the request was larger.
fn clamp(cfg: &SuiteConfig, cap: usize, out: &mut Outcome) -> usize {
    if cfg.max_dim > cap {
        out.exhausted = true;
    }
    cfg.max_dim.min(cap)
}

/// Hom-sets `[m] → [n]` for `m ≤ n ≤ top` that fit the budget.
fn hom_pairs(cfg: &SuiteConfig, top: usize, out: &mut Outcome) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for n in 0..=top {
        for m in 0..=n {
            match cfg.budget.check(m, n) {
                Ok(()) => pairs.push((m, n)),
                Err(Error::Budget { .. }) => out.exhausted = true,
                Err(_) => {}
            }
        }
    }
    pairs
}

fn all_maps(pairs: &[(usize, usize)]) -> Result<Vec<CubeMap>> {
    let mut maps = Vec::new();
    for &(m, n) in pairs {
        maps.extend(homset(m, n)?.iter().cloned());
    }
    Ok(maps)
}

pub fn run_suite(
    name: &str,
    max_dim: usize,
    seed: u64,
    budget: Budget,
) -> Result<CheckSuiteReport> {
    run_suite_with(name, &SuiteConfig::new(max_dim, seed, budget))
}

pub fn run_suite_with(name: &str, cfg: &SuiteConfig) -> Result<CheckSuiteReport> {
    let start = Instant::now();
    let outcome = match name {
        "metric-axioms" => metric_axioms(cfg),
        "cotransverse-validate" => cotransverse_validate(cfg),
        "factorization-unique" => factorization_unique(cfg),
        "t-functoriality" => t_functoriality(cfg),
        "t-oracle" => t_oracle(cfg),
        "quasi-isometry" => quasi_isometry(cfg),
        "natural-paths" => natural_paths(cfg),
        "free-iso" => free_iso(cfg),
        "boundary-hom" => boundary_hom_suite(cfg),
        "latching" => latching_suite(cfg),
        "cocycle" => cocycle(cfg),
        "skeleton-metric" => skeleton_metric(cfg),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }?;
    Ok(CheckSuiteReport {
        suite: name.to_string(),
        max_dim: cfg.max_dim,
        seed: cfg.seed,
        samples: cfg.samples,
        cases: outcome.cases,
        failure_count: outcome.failed,
        failures: outcome.failures,
        budget_exhausted: outcome.exhausted,
        wall_time: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// Suites

fn metric_axioms(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, 6, &mut head);
    let dims: Vec<usize> = (0..=top).collect();
    let body = par_units(cfg, &dims, |&n, rng| {
        let mut out = Outcome::default();
        let size = 1u32 << n;
        let v = |b: u32| Vertex::new(n, b).expect("in range");
        for x in 0..size {
            out.check(
                d1_vertex(&v(x), &v(x))? == ExtDist::zero(),
                || format!("d1(x,x), n={n}, x={x:#b}"),
                || "nonzero".into(),
            );
            for y in 0..size {
                let dxy = d1_vertex(&v(x), &v(y))?;
                let expect = if x & y == x {
                    ExtDist::from_int((y.count_ones() - x.count_ones()) as i64)
                } else {
                    ExtDist::Infinite
                };
                out.check(
                    dxy == expect,
                    || format!("d1({x:#b},{y:#b}), n={n}"),
                    || format!("got {dxy}"),
                );
                for z in 0..size {
                    let sum = dxy.clone() + d1_vertex(&v(y), &v(z))?;
                    let dxz = d1_vertex(&v(x), &v(z))?;
                    out.check(
                        dxz <= sum,
                        || format!("triangle {x:#b},{y:#b},{z:#b}, n={n}"),
                        || format!("{dxz} > {sum}"),
                    );
                }
            }
        }
        for _ in 0..cfg.samples {
            let (x, y, z) = (
                sample::point(rng, n),
                sample::point(rng, n),
                sample::point(rng, n),
            );
            let dxz = d1_point(&x, &z)?;
            let sum = d1_point(&x, &y)? + d1_point(&y, &z)?;
            out.check(
                dxz <= sum,
                || format!("point triangle {x} | {y} | {z}"),
                || format!("{dxz} > {sum}"),
            );
            let sym = d1_sym(&x, &y)?;
            let w = &sym.witness;
            let through = d1_point(w, &x)? + d1_point(w, &y)?;
            out.check(
                sym.value == l1(&x, &y)? && through == ExtDist::Finite(sym.value),
                || format!("symmetrized {x} | {y}"),
                || format!("value {} witness {w}", sym.value),
            );
            // any other common lower bound does no better
            let scale = sample::rational(rng);
            let lower = RPoint::new_unchecked(w.coords().iter().map(|c| c * scale).collect());
            let other = d1_point(&lower, &x)? + d1_point(&lower, &y)?;
            out.check(
                other >= ExtDist::Finite(sym.value),
                || format!("witness minimality {x} | {y}"),
                || format!("{lower} gives {other}"),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn cotransverse_validate(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let body = par_units(cfg, &pairs, |&(m, n), rng| {
        let mut out = Outcome::default();
        let maps = homset(m, n)?;
        let expected = count_homset(m, n, cfg.budget)?;
        out.check(
            maps.len() as u128 == expected && maps.windows(2).all(|w| w[0] < w[1]),
            || format!("enumerate {m}>{n}"),
            || format!("{} maps, count {expected}", maps.len()),
        );
        for f in maps.iter() {
            out.check(
                validate_cotransverse_pairwise(f.table(), m, n).is_ok(),
                || format!("oracle {f}"),
                || "enumerated map rejected".into(),
            );
            if m == n {
                let h = |b: u32| b.count_ones();
                let ok = f.apply_bits(0) == 0
                    && f.top_image() == (1u32 << n) - 1
                    && (0..1u32 << n).all(|x| h(f.apply_bits(x)) == h(x));
                out.check(
                    ok,
                    || format!("endo {f}"),
                    || "not height preserving".into(),
                );
            }
        }
        for s in 0..cfg.samples {
            let mut table: Vec<u32> = if s % 2 == 0 && !maps.is_empty() {
                let mut t = maps[rng.random_range(0..maps.len())].table().to_vec();
                let at = rng.random_range(0..t.len());
                t[at] = rng.random_range(0..1u32 << n);
                t
            } else {
                (0..1usize << m)
                    .map(|_| rng.random_range(0..1u32 << n))
                    .collect()
            };
            if s % 7 == 3 {
                table.sort_by_key(|v| v.count_ones());
            }
            let fast = validate_cotransverse(&table, m, n).is_ok();
            let slow = validate_cotransverse_pairwise(&table, m, n).is_ok();
            let listed = maps.iter().any(|f| f.table() == table.as_slice());
            out.check(
                fast == slow && slow == listed,
                || format!("table {table:?} for {m}>{n}"),
                || format!("covering {fast}, pairwise {slow}, enumerated {listed}"),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn factorization_unique(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let maps = all_maps(&pairs)?;
    let body = par_units(cfg, &maps, |f, _| {
        let mut out = Outcome::default();
        let (m, n) = (f.dom(), f.cod());
        let fac = factorize(f)?;
        let mut found = Vec::new();
        for phi in cocubical_maps(m, n) {
            for psi in endos(m)?.iter() {
                if compose(&phi, psi)? == *f {
                    found.push((phi.clone(), psi.clone()));
                }
            }
        }
        out.check(
            found.len() == 1 && found[0] == (fac.phi.clone(), fac.psi.clone()),
            || format!("factor {f}"),
            || format!("{} cocubical-endo factorizations", found.len()),
        );
        let fin = check_factorization_final(f)?;
        out.check(fin.is_ok(), || format!("final {f}"), || format!("{fin:?}"));
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn t_functoriality(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let mut composable = Vec::new();
    for &(l, m) in &pairs {
        for &(m2, n) in &pairs {
            if m2 == m {
                composable.push((l, m, n));
            }
        }
    }
    let body = par_units(cfg, &composable, |&(l, m, n), rng| {
        let mut out = Outcome::default();
        let (fs, gs) = (homset(l, m)?, homset(m, n)?);
        let tf: Vec<TMap> = fs.iter().map(TMap::new).collect::<Result<_>>()?;
        let tg: Vec<TMap> = gs.iter().map(TMap::new).collect::<Result<_>>()?;
        let points: Vec<RPoint> = (0..cfg.samples).map(|_| sample::point(rng, l)).collect();
        for (f, tf) in fs.iter().zip(&tf) {
            let images: Vec<RPoint> = points.iter().map(|x| tf.eval(x)).collect::<Result<_>>()?;
            for (g, tg) in gs.iter().zip(&tg) {
                let tgf = TMap::new(&compose(g, f)?)?;
                let mut bad = None;
                for (x, fx) in points.iter().zip(&images) {
                    if tgf.eval(x)? != tg.eval(fx)? {
                        bad = Some(x.clone());
                        break;
                    }
                }
                out.check(
                    bad.is_none(),
                    || format!("T({g}∘{f})"),
                    || {
                        format!(
                            "differs at {}",
                            bad.as_ref().map(|x| x.to_string()).unwrap_or_default()
                        )
                    },
                );
            }
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn t_oracle(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let maps = all_maps(&pairs)?;
    let body = par_units(cfg, &maps, |f, rng| {
        let mut out = Outcome::default();
        let m = f.dom();
        for b in 0..1u32 << m {
            let v = Vertex::new(m, b)?;
            let image = t_eval(f, &RPoint::from_vertex(&v))?;
            let expect = RPoint::from_vertex(&f.apply(&v)?);
            out.check(
                image == expect,
                || format!("T({f}) at vertex {b:#b}"),
                || format!("got {image}"),
            );
        }
        let tf = TMap::new(f)?;
        for _ in 0..cfg.samples {
            let x = sample::point(rng, m);
            let a = t_eval_maxmin(f, &x)?;
            let b = tf.eval(&x)?;
            let ok = if f.is_endo() {
                a == b && t_eval_permutation(f, &x)? == a
            } else {
                a == b
            };
            out.check(
                ok,
                || format!("T({f}) at {x}"),
                || format!("max-min {a}, evaluator {b}"),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn quasi_isometry(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let maps = all_maps(&pairs)?;
    let body = par_units(cfg, &maps, |f, rng| {
        let mut out = Outcome::default();
        let tf = TMap::new(f)?;
        let shift = Rational::from_integer(f.apply_bits(0).count_ones() as i64);
        for _ in 0..cfg.samples {
            let (x, y) = sample::ordered_pair(rng, f.dom());
            let (fx, fy) = (tf.eval(&x)?, tf.eval(&y)?);
            let (before, after) = (d1_point(&x, &y)?, d1_point(&fx, &fy)?);
            out.check(
                before == after && fx.height() == x.height() + shift,
                || format!("T({f}) on {x} ≤ {y}"),
                || format!("distance {before} becomes {after}"),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

/// Concatenates two segment paths that meet at a common breakpoint.
fn concat(p: &PLSegmentPath, q: &PLSegmentPath) -> Result<PLSegmentPath> {
    let mut bps = p.breakpoints().to_vec();
    bps.extend(q.breakpoints()[1..].iter().cloned());
    PLSegmentPath::new(p.dim(), bps)
}

fn natural_paths(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs: Vec<(usize, usize)> = hom_pairs(cfg, top, &mut head)
        .into_iter()
        .filter(|&(m, _)| m >= 1)
        .collect();
    let body = par_units(cfg, &pairs, |&(m, n), rng| {
        let mut out = Outcome::default();
        let maps = homset(m, n)?;
        for s in 0..cfg.samples {
            let timing = [Timing::Natural, Timing::Perturbed, Timing::Arbitrary][s % 3];
            let (a, b) = sample::vertex_pair(rng, m);
            let interior = rng.random_range(0..4);
            let p = sample::dpath(rng, &a, &b, interior, timing);
            let report = is_dpath(&p);
            out.check(
                report.ok(),
                || format!("generated {p}"),
                || format!("{:?}", report.defect),
            );
            let nat = is_natural(&p);
            let qi = is_breakpoint_quasi_isometry(&p);
            let expect = match timing {
                Timing::Natural => Some(true),
                Timing::Perturbed if p.breakpoints().len() > 2 => Some(false),
                _ => None,
            };
            out.check(
                nat == qi && expect.is_none_or(|e| e == nat),
                || format!("naturality of {p}"),
                || format!("natural {nat}, quasi-isometric {qi}, expected {expect:?}"),
            );
            let q = naturalize(&p)?;
            let h0 = p.start().height();
            let on_trace = p
                .breakpoints()
                .iter()
                .all(|(_, x)| q.point_at(q.start_time() + x.height() - h0).as_ref() == Some(x));
            out.check(
                is_natural(&q)
                    && naturalize(&q)? == q
                    && q.start() == p.start()
                    && q.end() == p.end()
                    && q.end_time() - q.start_time() == p.height_increase()
                    && on_trace,
                || format!("naturalize {p}"),
                || format!("gave {q}"),
            );
            let f = &maps[rng.random_range(0..maps.len())];
            let moved = transport(f, &q)?;
            out.check(
                is_natural(&moved) && is_dpath(&moved).ok(),
                || format!("transport {q} by {f}"),
                || format!("gave {moved}"),
            );
            let bps = p.breakpoints();
            if bps.len() > 2 {
                let k = rng.random_range(1..bps.len() - 1);
                let first = PLSegmentPath::new(m, bps[..=k].to_vec())?;
                let second = PLSegmentPath::new(m, bps[k..].to_vec())?;
                let whole = transport(f, &p)?.normalized();
                let split = concat(&transport(f, &first)?, &transport(f, &second)?)?.normalized();
                out.check(
                    whole == split,
                    || format!("transport of a concatenation, {p} by {f}"),
                    || format!("{whole} vs {split}"),
                );
            }
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn free_iso(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let mut cases = Vec::new();
    for n in 0..=top {
        cases.push((n, false));
        if n > 0 {
            cases.push((n, true));
        }
    }
    let body = par_units(cfg, &cases, |&(n, boundary), _| {
        let mut out = Outcome::default();
        let (free, target, map) = free_comparison(n, boundary)?;
        let name = || format!("{}[{n}]", if boundary { "boundary" } else { "cube" });
        let counts_ok = (0..=free.max_dim()).all(|m| {
            let cells = if boundary && m == n {
                0
            } else {
                cocubical_maps(m, n).len()
            };
            endos(m)
                .map(|e| e.len() * cells == free.count(m))
                .unwrap_or(false)
        });
        out.check(
            counts_ok,
            || format!("free counts on {}", name()),
            || format!("{:?}", free.counts()),
        );
        let valid = map.check(&free, &target);
        out.check(
            valid.is_ok() && map.is_bijective(&target),
            || format!("comparison on {}", name()),
            || {
                format!(
                    "{valid:?}, counts {:?} vs {:?}",
                    free.counts(),
                    target.counts()
                )
            },
        );
        let funct = free.check_functoriality(free.max_dim())?;
        out.check(
            funct.is_ok(),
            || format!("functoriality of free {}", name()),
            || format!("{funct:?}"),
        );
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn boundary_hom_suite(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let mut triples = Vec::new();
    for n in 0..=top {
        for p in 0..=top {
            for q in 0..=top {
                triples.push((p, q, n));
            }
        }
    }
    let body = par_units(cfg, &triples, |&(p, q, n), _| {
        let mut out = Outcome::default();
        let b = boundary_hom(p, q, n)?;
        out.check(
            b.matches_closed_form()?,
            || format!("boundary hom ({p},{q}) below {n}"),
            || format!("{} classes", b.class_count()),
        );
        out.check(
            b.normal_forms_unique(),
            || format!("normal forms ({p},{q}) below {n}"),
            || "not unique".into(),
        );
        if p == 0 {
            out.check(
                matching_emptiness_check(n, q)?,
                || format!("matching object [{n}] at [{q}]"),
                || "nonempty".into(),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn latching_suite(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let battery = test_battery(top)?;
    let mut cases = Vec::new();
    for (i, _) in battery.iter().enumerate() {
        for n in 0..=top {
            cases.push((i, n));
        }
    }
    let body = par_units(cfg, &cases, |&(i, n), _| {
        let mut out = Outcome::default();
        let a = &battery[i];
        if n == 0 {
            let funct = a.check_functoriality(top)?;
            out.check(
                funct.is_ok(),
                || format!("functoriality of {}", a.name()),
                || format!("{funct:?}"),
            );
        }
        let cmp = compare_latching(a, n)?;
        out.check(
            cmp.bijective,
            || format!("latching of {} at [{n}]", a.name()),
            || {
                format!(
                    "{} latching classes vs {} boundary classes",
                    cmp.latching, cmp.boundary_eval
                )
            },
        );
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn cocycle(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let pairs = hom_pairs(cfg, top, &mut head);
    let firsts: Vec<CubeMap> = all_maps(&pairs)?
        .into_iter()
        .filter(|f| f.dom() >= 1)
        .collect();
    let body = par_units(cfg, &firsts, |f, _| {
        let mut out = Outcome::default();
        let m = f.dom();
        let vertex_pairs: Vec<(Vertex, Vertex)> = (0..1u32 << m)
            .flat_map(|a| (0..1u32 << m).map(move |b| (a, b)))
            .filter(|&(a, b)| a & b == a && a != b)
            .map(|(a, b)| Ok((Vertex::new(m, a)?, Vertex::new(m, b)?)))
            .collect::<Result<_>>()?;
        for p in f.cod()..=top {
            if cfg.budget.check(f.cod(), p).is_err() {
                out.exhausted = true;
                continue;
            }
            for g in homset(f.cod(), p)?.iter() {
                for (a, b) in &vertex_pairs {
                    out.check(
                        check_cocycle(f, g, a, b)?,
                        || format!("cocycle f={f}, g={g}, {a} < {b}"),
                        || "induced maps do not compose".into(),
                    );
                }
            }
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

fn skeleton_metric(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut head = Outcome::default();
    let top = clamp(cfg, EXHAUSTIVE_DIM, &mut head);
    let mut cases = Vec::new();
    for n in 0..=top {
        cases.push((n, false));
        if n >= 2 {
            cases.push((n, true));
        }
    }
    let body = par_units(cfg, &cases, |&(n, boundary), rng| {
        let mut out = Outcome::default();
        let k = if boundary {
            Sts::boundary(n, n)?
        } else {
            Sts::representable(n, n)?
        };
        let vertices = homset(0, n)?;
        for a in vertices.iter() {
            for b in vertices.iter() {
                let (va, vb) = (Vertex::new(n, a.table()[0])?, Vertex::new(n, b.table()[0])?);
                let got = vertex_distance(&k, representable_id(a)?, representable_id(b)?)?;
                let want = d1_vertex(&va, &vb)?;
                out.check(
                    got == want,
                    || {
                        format!(
                            "skeleton distance {va} → {vb} in {}[{n}]",
                            if boundary { "∂" } else { "" }
                        )
                    },
                    || format!("{got} vs {want}"),
                );
            }
        }
        if boundary || n == 0 {
            return Ok(out);
        }
        let graph = ChainGraph::build(&k, 1)?;
        let top_cube = representable_id(&CubeMap::identity(n))?;
        for a in vertices.iter() {
            for b in vertices.iter() {
                let at = |v: &CubeMap| PointPresentation {
                    cube: representable_id(v).expect("vertex"),
                    local: RPoint::new_unchecked(Vec::new()),
                };
                let got = graph.bound(&at(a), &at(b))?;
                let want = vertex_distance(&k, representable_id(a)?, representable_id(b)?)?;
                out.check(
                    got == want,
                    || format!("chain bound {a} → {b}"),
                    || format!("{got} vs {want}"),
                );
            }
        }
        for _ in 0..cfg.samples {
            let (x, y) = (sample::point(rng, n), sample::point(rng, n));
            let at = |x: &RPoint| PointPresentation {
                cube: top_cube,
                local: x.clone(),
            };
            let got = graph.bound(&at(&x), &at(&y))?;
            let want = d1_point(&x, &y)?;
            out.check(
                got == want,
                || format!("chain bound {x} → {y}"),
                || format!("{got} vs {want}"),
            );
            let (va, vb) = sample::vertex_pair(rng, n);
            let interior = rng.random_range(0..3);
            let p = naturalize(&sample::dpath(rng, &va, &vb, interior, Timing::Arbitrary))?;
            let path = PLDPath::single(top_cube, p);
            let length = dpath_length(&path);
            let ids =
                |v: &Vertex| representable_id(&CubeMap::new(0, n, vec![v.bits()]).expect("vertex"));
            let floor = vertex_distance(&k, ids(&va)?, ids(&vb)?)?;
            out.check(
                ExtDist::Finite(length) >= floor,
                || format!("length of {}", path.legs()[0].path),
                || format!("{length} below {floor}"),
            );
        }
        Ok(out)
    })?;
    Ok(head.merge(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nope", 1, 0, Budget::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn every_suite_passes_small() {
        for name in SUITES {
            let report =
                run_suite(name, 2, 7, Budget::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0, "{name}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("natural-paths", 2, 11, Budget::default()).unwrap();
        let b = run_suite("natural-paths", 2, 11, Budget::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn clamping_is_reported() {
        let r = run_suite("boundary-hom", 4, 0, Budget::default()).unwrap();
        assert!(r.budget_exhausted);
    }
}
