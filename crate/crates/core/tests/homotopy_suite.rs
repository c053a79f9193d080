mod common;

use btds_core::dynamics::{compose, is_pairwise_continuous, is_pairwise_continuous_fast};
use btds_core::homotopy::{
    product, search_homotopy, search_with_escalation, standard_interval, verify_btds_homotopy,
    verify_with_ends, SearchProblem,
};
use btds_core::{BitopSpace, Homotopy, PointMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_spaces() -> Vec<BitopSpace> {
    (1..=2).flat_map(common::bitop_spaces).collect()
}

fn pairwise_maps(a: &BitopSpace, b: &BitopSpace) -> Vec<PointMap> {
    PointMap::all(a.n(), b.n())
        .filter(|m| is_pairwise_continuous_fast(a, b, m))
        .collect()
}

struct Success {
    f: PointMap,
    g: PointMap,
    bridge: PointMap,
    h: Homotopy,
}

/// Every `(f, g, F)` on `x`, `y` with a level-one homotopy.
fn successes(x: &BitopSpace, y: &BitopSpace) -> Vec<Success> {
    let unit = standard_interval(1).unwrap();
    let mut out = Vec::new();
    for f in pairwise_maps(x, x) {
        for g in pairwise_maps(y, y) {
            for bridge in pairwise_maps(x, y) {
                let p = SearchProblem::btds(
                    x.clone(),
                    y.clone(),
                    unit.clone(),
                    f.clone(),
                    g.clone(),
                    bridge.clone(),
                );
                if let Some(h) = search_homotopy(&p).unwrap().homotopy() {
                    out.push(Success {
                        f: f.clone(),
                        g: g.clone(),
                        bridge: bridge.clone(),
                        h: h.clone(),
                    });
                }
            }
        }
    }
    out
}

#[test]
fn reflexivity_with_identity_bridge() {
    let unit = standard_interval(1).unwrap();
    for x in small_spaces() {
        for f in pairwise_maps(&x, &x) {
            let id = PointMap::identity(x.n());
            let h = Homotopy::from_fn(x.clone(), x.clone(), unit.clone(), id, |p, _| f.apply(p))
                .unwrap();
            assert!(verify_btds_homotopy(&h, &f, &f).unwrap().holds);
        }
    }
}

#[test]
fn symmetry_and_transitivity_on_small_instances() {
    let spaces = small_spaces();
    let table: Vec<Vec<Vec<Success>>> = spaces
        .iter()
        .map(|x| spaces.iter().map(|y| successes(x, y)).collect())
        .collect();
    let mut symmetric = 0;
    let mut transitive = 0;
    for (xi, row) in table.iter().enumerate() {
        for (yi, found) in row.iter().enumerate() {
            for s in found {
                let start = compose(&s.g, &s.bridge).unwrap();
                let end = compose(&s.bridge, &s.f).unwrap();
                assert!(
                    verify_with_ends(&s.h.reverse(), &start, &end)
                        .unwrap()
                        .holds
                );
                symmetric += 1;
            }
            for (zi, z) in spaces.iter().enumerate() {
                for s1 in found {
                    for s2 in table[yi][zi].iter().filter(|s2| s2.f == s1.g) {
                        let k = compose(&s2.bridge, &s1.bridge).unwrap();
                        // G∘H₁ followed by H₂∘(F × id), on the level-two model.
                        let first = s1.h.post_compose(&s2.bridge, z).unwrap();
                        let second = s2.h.pre_compose(&s1.bridge, &spaces[xi]).unwrap();
                        let joined = first
                            .concatenate(&second)
                            .unwrap()
                            .with_bridge(k.clone())
                            .unwrap();
                        assert!(verify_btds_homotopy(&joined, &s1.f, &s2.g).unwrap().holds);
                        let p = SearchProblem::btds(
                            spaces[xi].clone(),
                            z.clone(),
                            standard_interval(1).unwrap(),
                            s1.f.clone(),
                            s2.g.clone(),
                            k,
                        );
                        let out = search_with_escalation(&p, 2).unwrap();
                        assert!(out.is_found());
                        transitive += 1;
                    }
                }
            }
        }
    }
    assert!(
        symmetric > 100 && transitive > 1000,
        "{symmetric} {transitive}"
    );
}

#[test]
fn refining_level_one_homotopies_keeps_them_valid() {
    let fine = standard_interval(2).unwrap();
    let finer = standard_interval(3).unwrap();
    for x in small_spaces() {
        for y in small_spaces() {
            for s in successes(&x, &y) {
                for level in [&fine, &finer] {
                    let r = s.h.refine(level).unwrap();
                    assert!(verify_btds_homotopy(&r, &s.f, &s.g).unwrap().holds);
                }
            }
        }
    }
}

#[test]
fn reverse_is_an_involution_preserving_continuity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spaces: Vec<BitopSpace> = (1..=3).flat_map(common::bitop_spaces).collect();
    for _ in 0..2_000 {
        let x = &spaces[rng.gen_range(0..spaces.len())];
        let y = &spaces[rng.gen_range(0..spaces.len())];
        let interval = standard_interval(rng.gen_range(1..=2)).unwrap();
        let bridge = PointMap::constant(x.n(), y.n(), 0).unwrap();
        let cells = x.n() * interval.n();
        let table = (0..cells).map(|_| rng.gen_range(0..y.n())).collect();
        let h = Homotopy::new(x.clone(), y.clone(), interval.clone(), bridge, table).unwrap();
        let r = h.reverse();
        assert_eq!(r.reverse(), h);
        let prod = product(x, interval.space()).unwrap();
        assert_eq!(
            is_pairwise_continuous(prod.space(), y, &h.as_point_map())
                .unwrap()
                .holds,
            is_pairwise_continuous(prod.space(), y, &r.as_point_map())
                .unwrap()
                .holds
        );
    }
}

#[test]
fn product_projections_are_pairwise_continuous() {
    let lefts: Vec<BitopSpace> = (1..=3).flat_map(common::bitop_spaces).collect();
    let mut rights: Vec<BitopSpace> = small_spaces();
    for k in 1..=2 {
        rights.push(standard_interval(k).unwrap().space().clone());
    }
    let check = |l: &BitopSpace, r: &BitopSpace| {
        let p = product(l, r).unwrap();
        assert!(is_pairwise_continuous_fast(
            p.space(),
            l,
            &p.left_projection()
        ));
        assert!(is_pairwise_continuous_fast(
            p.space(),
            r,
            &p.right_projection()
        ));
        for pt in 0..p.space().n() {
            let (a, b) = p.coords(pt);
            assert_eq!(p.point(a, b), pt);
        }
    };
    for l in &lefts {
        for r in &rights {
            check(l, r);
        }
    }
    let threes = common::bitop_spaces(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5_000 {
        check(
            &threes[rng.gen_range(0..threes.len())],
            &threes[rng.gen_range(0..threes.len())],
        );
    }
}
