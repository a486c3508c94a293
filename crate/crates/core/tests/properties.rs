use proptest::prelude::*;

use transverse_core::cube::{compose, d1_vertex, CubeMap, ExtDist, Rational, Vertex};
use transverse_core::dpath::{is_dpath, is_natural, naturalize, transport};
use transverse_core::homset::{count_homset, enumerate_homset, factorize, homset, Budget};
use transverse_core::point::{d1_point, d1_sym, l1, RPoint};
use transverse_core::sample::{self, Timing};
use transverse_core::sts::Sts;
use transverse_core::topo::{t_eval, t_eval_maxmin, TMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_in(m: usize, n: usize) -> impl Strategy<Value = CubeMap> {
    let maps = homset(m, n).unwrap();
    (0..maps.len()).prop_map(move |i| maps[i].clone())
}

fn any_map() -> impl Strategy<Value = CubeMap> {
    (0usize..=3)
        .prop_flat_map(|n| (0..=n).prop_map(move |m| (m, n)))
        .prop_flat_map(|(m, n)| map_in(m, n))
}

/// A composable triple `[k] → [l] → [m] → [n]`.
fn composable_triple() -> impl Strategy<Value = (CubeMap, CubeMap, CubeMap)> {
    (0usize..=3, 0usize..=3, 0usize..=3, 0usize..=3)
        .prop_map(|(a, b, c, d)| {
            let mut v = [a, b, c, d];
            v.sort();
            v
        })
        .prop_flat_map(|[k, l, m, n]| (map_in(k, l), map_in(l, m), map_in(m, n)))
}

fn rational() -> impl Strategy<Value = Rational> {
    (1i64..=30).prop_flat_map(|q| (0..=q).prop_map(move |p| Rational::new(p, q)))
}

fn point(n: usize) -> impl Strategy<Value = RPoint> {
    proptest::collection::vec(rational(), n).prop_map(|c| RPoint::new(c).unwrap())
}

proptest! {
    #[test]
    fn literals_round_trip(f in any_map()) {
        let back: CubeMap = f.to_literal().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn points_round_trip(x in point(3)) {
        let back: RPoint = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn composition_is_associative((f, g, h) in composable_triple()) {
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn factorization_reassembles(f in any_map()) {
        let fac = factorize(&f).unwrap();
        prop_assert!(fac.phi.is_cocubical());
        prop_assert!(fac.psi.is_endo());
        prop_assert_eq!(compose(&fac.phi, &fac.psi).unwrap(), f);
    }

    #[test]
    fn maps_preserve_vertex_distance_on_comparable_pairs(f in any_map(), a in 0u32..8, b in 0u32..8) {
        let m = f.dom();
        let (a, b) = (a & ((1 << m) - 1), b & ((1 << m) - 1));
        let (lo, hi) = (Vertex::new(m, a & b).unwrap(), Vertex::new(m, a | b).unwrap());
        let before = d1_vertex(&lo, &hi).unwrap();
        let after = d1_vertex(&f.apply(&lo).unwrap(), &f.apply(&hi).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn t_is_monotone_and_extends_the_map(f in any_map(), x in point(3), y in point(3)) {
        let m = f.dom();
        let lo = RPoint::new(x.coords()[..m].to_vec()).unwrap().meet(&RPoint::new(y.coords()[..m].to_vec()).unwrap());
        let hi = RPoint::new(x.coords()[..m].iter().zip(&y.coords()[..m]).map(|(a, b)| *a.max(b)).collect()).unwrap();
        let t = TMap::new(&f).unwrap();
        prop_assert!(t.eval(&lo).unwrap().le(&t.eval(&hi).unwrap()));
        prop_assert_eq!(t.eval(&lo).unwrap(), t_eval_maxmin(&f, &lo).unwrap());
    }

    #[test]
    fn t_respects_composition((f, g, _h) in composable_triple(), x in point(3)) {
        let x = RPoint::new(x.coords()[..f.dom()].to_vec()).unwrap();
        let gf = compose(&g, &f).unwrap();
        prop_assert_eq!(t_eval(&gf, &x).unwrap(), t_eval(&g, &t_eval(&f, &x).unwrap()).unwrap());
    }

    #[test]
    fn lawvere_triangle(x in point(3), y in point(3), z in point(3)) {
        let lhs = d1_point(&x, &z).unwrap();
        let rhs = d1_point(&x, &y).unwrap() + d1_point(&y, &z).unwrap();
        prop_assert!(lhs <= rhs);
        prop_assert_eq!(d1_point(&x, &x).unwrap(), ExtDist::zero());
    }

    #[test]
    fn symmetrization_is_l1(x in point(3), y in point(3)) {
        let s = d1_sym(&x, &y).unwrap();
        prop_assert_eq!(s.value, l1(&x, &y).unwrap());
        prop_assert!(s.witness.le(&x) && s.witness.le(&y));
    }

    #[test]
    fn naturalization_is_idempotent(seed in any::<u64>(), n in 1usize..=3, interior in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = sample::vertex_pair(&mut rng, n);
        let p = sample::dpath(&mut rng, &a, &b, interior, Timing::Arbitrary);
        prop_assert!(is_dpath(&p).ok());
        let q = naturalize(&p).unwrap();
        prop_assert!(is_natural(&q));
        prop_assert_eq!(naturalize(&q).unwrap(), q.clone());
        prop_assert_eq!(q.end_time() - q.start_time(), p.height_increase());
    }

    #[test]
    fn transport_keeps_paths_natural(seed in any::<u64>(), f in any_map()) {
        prop_assume!(f.dom() >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = sample::vertex_pair(&mut rng, f.dom());
        let p = sample::dpath(&mut rng, &a, &b, 2, Timing::Natural);
        let moved = transport(&f, &p).unwrap();
        prop_assert!(is_dpath(&moved).ok());
        prop_assert!(is_natural(&moved));
    }

    #[test]
    fn representables_are_functorial_on_samples(seed in any::<u64>(), n in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = Sts::representable(n, 3).unwrap();
        prop_assert!(rep.check_functoriality_sampled(&mut rng, 50).unwrap().is_ok());
    }
}

#[test]
fn known_counts() {
    let counts: Vec<u128> = (0..=4)
        .map(|n| count_homset(n, n, Budget::default()).unwrap())
        .collect();
    assert_eq!(counts, vec![1, 1, 4, 66, 7128]);
}

#[test]
fn enumeration_respects_the_budget() {
    assert!(matches!(
        enumerate_homset(3, 4, Budget::new(10)),
        Err(transverse_core::Error::Budget { .. })
    ));
}
