//! Exhaustive theorem suites shared by `verify-paper` and the acceptance
//! tests. Each returns how many cases it checked and the violations it
//! met, capped to a few examples.

use btds_core::dynamics::{
    compose, is_continuous, is_continuous_fast, is_pairwise_continuous, is_pairwise_continuous_fast,
};
use btds_core::fintop::enumerate_topologies;
use btds_core::homotopy::{
    product, search_homotopy, search_with_escalation, standard_interval, verify_btds_homotopy,
    verify_iteration_homotopy, verify_with_ends, IntervalModel, SearchMode, SearchProblem,
};
use btds_core::{BitopPath, BitopSpace, FiniteTopology, HProperty, Homotopy, PointMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::AtlasRow;
use crate::error::Result;
use crate::props::{h_name, ph_name};

const EXAMPLES_KEPT: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub checked: u64,
    pub violations: u64,
    /// Violations where the required conditions are already contradictory
    /// or force a discontinuous end slice, so no table at any level works.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub obstructed: u64,
    pub examples: Vec<String>,
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

impl SuiteOutcome {
    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < EXAMPLES_KEPT {
                let e = example();
                if !self.examples.contains(&e) {
                    self.examples.push(e);
                }
            }
        }
    }

    fn record_obstructed(
        &mut self,
        ok: bool,
        obstructed: impl FnOnce() -> bool,
        example: impl FnOnce() -> String,
    ) {
        if !ok && obstructed() {
            self.obstructed += 1;
        }
        self.record(ok, example);
    }

    fn absorb(&mut self, other: SuiteOutcome) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.obstructed += other.obstructed;
        for e in other.examples {
            if self.examples.len() < EXAMPLES_KEPT && !self.examples.contains(&e) {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

use HProperty::*;

/// Rothberger/Menger chains and the Rothberger-to-Menger arrows.
pub const ARROWS: [(HProperty, HProperty); 7] = [
    (Menger, AlmostMenger),
    (AlmostMenger, WeakMenger),
    (Rothberger, AlmostRothberger),
    (AlmostRothberger, WeakRothberger),
    (Rothberger, Menger),
    (AlmostRothberger, AlmostMenger),
    (WeakRothberger, WeakMenger),
];

fn spaces(n: usize) -> Result<Vec<BitopSpace>> {
    let ts: Vec<FiniteTopology> = enumerate_topologies(n, n)?.collect();
    ts.iter()
        .flat_map(|a| {
            ts.iter()
                .map(move |b| Ok(BitopSpace::new(a.clone(), b.clone())?))
        })
        .collect()
}

fn pairwise_maps(a: &BitopSpace, b: &BitopSpace) -> Vec<PointMap> {
    PointMap::all(a.n(), b.n())
        .filter(|m| is_pairwise_continuous_fast(a, b, m))
        .collect()
}

/// Arrows `from ⟹ to` over sweep rows, with names built by `name`.
pub fn arrows(rows: &[AtlasRow], name: fn(HProperty) -> String) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for r in rows {
        for (from, to) in ARROWS {
            let (a, b) = (r.properties[&name(from)], r.properties[&name(to)]);
            out.record(!a || b, || {
                format!("{} ⟹ {} fails on row {}", name(from), name(to), r.hash)
            });
        }
    }
    out
}

/// `a ⟺ b` on the rows where `hypothesis` holds (every row when `None`).
pub fn equivalence(rows: &[AtlasRow], a: &str, b: &str, hypothesis: Option<&str>) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for r in rows
        .iter()
        .filter(|r| hypothesis.is_none_or(|h| r.properties[h]))
    {
        out.record(r.properties[a] == r.properties[b], || {
            format!("{a} ≠ {b} on row {}", r.hash)
        });
    }
    out
}

/// The H and PH verdicts agree on every library row.
pub fn h_matches_ph(rows: &[AtlasRow]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for r in rows {
        for p in HProperty::ALL {
            out.record(
                r.properties[&h_name(p)] == r.properties[&ph_name(p)],
                || format!("{} differs between H and PH on row {}", p.name(), r.hash),
            );
        }
    }
    out
}

/// Compositions `F∘f` and `g∘F` of continuous maps stay continuous:
/// per topology index for every pair of topologies on at most three
/// points, for every pairwise continuous triple on at most two points, and
/// for `samples` random triples on three points.
pub fn lemma_compositions(seed: u64, samples: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();

    let ts: Vec<FiniteTopology> = (1..=3)
        .map(|n| enumerate_topologies(n, 3).map(Iterator::collect::<Vec<_>>))
        .collect::<btds_core::Result<Vec<_>>>()?
        .concat();
    let continuous = |a: &FiniteTopology, b: &FiniteTopology| -> Vec<PointMap> {
        PointMap::all(a.n(), b.n())
            .filter(|m| is_continuous_fast(a, b, m))
            .collect()
    };
    let per_index: Vec<Result<SuiteOutcome>> = ts
        .par_iter()
        .map(|x| {
            let mut o = SuiteOutcome::default();
            let fs = continuous(x, x);
            for y in &ts {
                let bridges = continuous(x, y);
                let gs = continuous(y, y);
                for big_f in &bridges {
                    for f in &fs {
                        let ok = is_continuous(x, y, &compose(big_f, f)?)?.holds;
                        o.record(ok, || {
                            format!("F∘f: F={:?} f={:?}", big_f.table(), f.table())
                        });
                    }
                    for g in &gs {
                        let ok = is_continuous(x, y, &compose(g, big_f)?)?.holds;
                        o.record(ok, || {
                            format!("g∘F: g={:?} F={:?}", g.table(), big_f.table())
                        });
                    }
                }
            }
            Ok(o)
        })
        .collect();
    for o in per_index {
        out.absorb(o?);
    }

    let small: Vec<BitopSpace> = [spaces(1)?, spaces(2)?].concat();
    for x in &small {
        let fs = pairwise_maps(x, x);
        for y in &small {
            let bridges = pairwise_maps(x, y);
            let gs = pairwise_maps(y, y);
            for f in &fs {
                for g in &gs {
                    for big_f in &bridges {
                        let ok = is_pairwise_continuous(x, y, &compose(big_f, f)?)?.holds
                            && is_pairwise_continuous(x, y, &compose(g, big_f)?)?.holds;
                        out.record(ok, || {
                            format!(
                                "triple f={:?} g={:?} F={:?}",
                                f.table(),
                                g.table(),
                                big_f.table()
                            )
                        });
                    }
                }
            }
        }
    }

    let three = spaces(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    while drawn < samples {
        let x = &three[rng.gen_range(0..three.len())];
        let y = &three[rng.gen_range(0..three.len())];
        let (fs, gs, bridges) = (
            pairwise_maps(x, x),
            pairwise_maps(y, y),
            pairwise_maps(x, y),
        );
        for _ in 0..20 {
            let f = &fs[rng.gen_range(0..fs.len())];
            let g = &gs[rng.gen_range(0..gs.len())];
            let big_f = &bridges[rng.gen_range(0..bridges.len())];
            let ok = is_pairwise_continuous(x, y, &compose(big_f, f)?)?.holds
                && is_pairwise_continuous(x, y, &compose(g, big_f)?)?.holds;
            out.record(ok, || {
                format!(
                    "sampled triple f={:?} g={:?} F={:?}",
                    f.table(),
                    g.table(),
                    big_f.table()
                )
            });
            drawn += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationOutcome {
    pub reflexive: SuiteOutcome,
    pub symmetric: SuiteOutcome,
    pub transitive: SuiteOutcome,
}

impl RelationOutcome {
    pub fn passed(&self) -> bool {
        self.reflexive.passed() && self.symmetric.passed() && self.transitive.passed()
    }
}

struct Success {
    f: PointMap,
    g: PointMap,
    bridge: PointMap,
    h: Homotopy,
}

fn successes(x: &BitopSpace, y: &BitopSpace) -> Result<Vec<Success>> {
    let unit = standard_interval(1)?;
    let mut out = Vec::new();
    let gs = pairwise_maps(y, y);
    let bridges = pairwise_maps(x, y);
    for f in pairwise_maps(x, x) {
        for g in &gs {
            for bridge in &bridges {
                let p = SearchProblem::btds(
                    x.clone(),
                    y.clone(),
                    unit.clone(),
                    f.clone(),
                    g.clone(),
                    bridge.clone(),
                );
                if let Some(h) = search_homotopy(&p)?.homotopy() {
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
    Ok(out)
}

/// Witness constructions for reflexivity, symmetry and transitivity of
/// BTDS-homotopy on every system with at most `max_n` points, starting from
/// level-one homotopies:
/// * reflexivity: `H(x, t) = f(x)` with the identity bridge;
/// * symmetry: the time-reversed table runs from `g∘F` back to `F∘f`;
/// * transitivity: `G∘H₁` followed by `H₂∘(F × id)` on the level-two
///   model, bridged by `G∘F`, plus a fresh search for the composite.
pub fn relation_suite(max_n: usize) -> Result<RelationOutcome> {
    let all: Vec<BitopSpace> = (1..=max_n)
        .map(spaces)
        .collect::<Result<Vec<_>>>()?
        .concat();
    let unit = standard_interval(1)?;
    let mut out = RelationOutcome::default();

    for x in &all {
        for f in pairwise_maps(x, x) {
            let id = PointMap::identity(x.n());
            let h = Homotopy::from_fn(x.clone(), x.clone(), unit.clone(), id, |p, _| f.apply(p))?;
            let ok = verify_btds_homotopy(&h, &f, &f)?.holds;
            out.reflexive.record(ok, || format!("f = {:?}", f.table()));
        }
    }

    let pairs: Vec<(usize, usize)> = (0..all.len())
        .flat_map(|a| (0..all.len()).map(move |b| (a, b)))
        .collect();
    let found: Vec<Vec<Success>> = pairs
        .par_iter()
        .map(|&(a, b)| successes(&all[a], &all[b]))
        .collect::<Result<Vec<_>>>()?;
    let table = |a: usize, b: usize| &found[a * all.len() + b];

    for &(a, b) in &pairs {
        for s in table(a, b) {
            let start = compose(&s.g, &s.bridge)?;
            let end = compose(&s.bridge, &s.f)?;
            let ok = verify_with_ends(&s.h.reverse(), &start, &end)?.holds;
            out.symmetric
                .record(ok, || format!("reverse of {:?}", s.h.table()));
        }
    }

    let transitive: Vec<Result<SuiteOutcome>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut o = SuiteOutcome::default();
            for (c, z) in all.iter().enumerate() {
                for s1 in table(a, b) {
                    for s2 in table(b, c).iter().filter(|s2| s2.f == s1.g) {
                        let k = compose(&s2.bridge, &s1.bridge)?;
                        let first = s1.h.post_compose(&s2.bridge, z)?;
                        let second = s2.h.pre_compose(&s1.bridge, &all[a])?;
                        let joined = first.concatenate(&second)?.with_bridge(k.clone())?;
                        let glued = verify_btds_homotopy(&joined, &s1.f, &s2.g)?.holds;
                        let p = SearchProblem::btds(
                            all[a].clone(),
                            z.clone(),
                            unit.clone(),
                            s1.f.clone(),
                            s2.g.clone(),
                            k,
                        );
                        let searched = search_with_escalation(&p, 2)?.is_found();
                        o.record(glued && searched, || {
                            format!(
                                "{:?} then {:?}: glued {glued}, searched {searched}",
                                s1.h.table(),
                                s2.h.table()
                            )
                        });
                    }
                }
            }
            Ok(o)
        })
        .collect();
    for o in transitive {
        out.transitive.absorb(o?);
    }
    Ok(out)
}

/// Orbit `x0, f(x0), ...` up to `budget` points or the first repeat.
fn orbit(f: &PointMap, x0: usize, budget: usize) -> Vec<usize> {
    let mut seen = Vec::new();
    let mut x = x0;
    while seen.len() < budget && !seen.contains(&x) {
        seen.push(x);
        x = f.apply(x);
    }
    seen
}

/// Every `(x, t, value)` cell matches and the table is pairwise continuous
/// on the product.
fn meets(h: &Homotopy, cells: &[(usize, usize, usize)]) -> Result<bool> {
    if cells.iter().any(|&(x, t, v)| h.value(x, t) != v) {
        return Ok(false);
    }
    let prod = product(h.x(), h.interval().space())?;
    Ok(is_pairwise_continuous_fast(
        prod.space(),
        h.y(),
        &h.as_point_map(),
    ))
}

/// Cells pinned by the iteration conditions, with the two ends given
/// explicitly so the reversed conditions can be built the same way.
fn orbit_cells(
    (e0, e1): (usize, usize),
    f: &PointMap,
    start: &PointMap,
    end: &PointMap,
    x0: usize,
) -> Vec<(usize, usize, usize)> {
    orbit(f, x0, f.dom_n())
        .into_iter()
        .flat_map(|xn| {
            [
                (f.apply(xn), e0, start.apply(xn)),
                (f.apply(xn), e1, end.apply(xn)),
            ]
        })
        .collect()
}

fn ends(h: &Homotopy) -> (usize, usize) {
    (h.interval().e0(), h.interval().e1())
}

/// Two pinned cells that demand different values.
fn pins_conflict(cells: &[(usize, usize, usize)]) -> bool {
    cells.iter().any(|&(x, t, v)| {
        cells
            .iter()
            .any(|&(x2, t2, v2)| (x, t) == (x2, t2) && v != v2)
    })
}

struct IterSuccess {
    f: PointMap,
    g: PointMap,
    bridge: PointMap,
    x0: usize,
    h: Homotopy,
}

fn iteration_problem(
    x: &BitopSpace,
    y: &BitopSpace,
    unit: &IntervalModel,
    f: &PointMap,
    g: &PointMap,
    bridge: &PointMap,
    x0: usize,
) -> SearchProblem {
    let mut p = SearchProblem::btds(
        x.clone(),
        y.clone(),
        unit.clone(),
        f.clone(),
        g.clone(),
        bridge.clone(),
    );
    p.mode = SearchMode::Iteration { x0, budget: x.n() };
    p
}

fn iteration_successes(x: &BitopSpace, y: &BitopSpace) -> Result<Vec<IterSuccess>> {
    let unit = standard_interval(1)?;
    let mut out = Vec::new();
    let gs = pairwise_maps(y, y);
    let bridges = pairwise_maps(x, y);
    for f in pairwise_maps(x, x) {
        for g in &gs {
            for bridge in &bridges {
                for x0 in 0..x.n() {
                    let p = iteration_problem(x, y, &unit, &f, g, bridge, x0);
                    if let Some(h) = search_homotopy(&p)?.homotopy() {
                        out.push(IterSuccess {
                            f: f.clone(),
                            g: g.clone(),
                            bridge: bridge.clone(),
                            x0,
                            h: h.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The same three constructions for iteration homotopies started at a
/// point `x0`, with the orbit length capped at the size of `X`:
/// * reflexivity: `H(x, t) = x` with the identity bridge, since the
///   conditions only pin orbit points `f(xₙ)` to `f(xₙ)`;
/// * symmetry: the reversed table meets the swapped conditions;
/// * transitivity: a search for `(f, h)` over `K = G∘F` from `x0`, for
///   every second homotopy started at `F(x0)`.
pub fn iteration_relation_suite(max_n: usize) -> Result<RelationOutcome> {
    let all: Vec<BitopSpace> = (1..=max_n)
        .map(spaces)
        .collect::<Result<Vec<_>>>()?
        .concat();
    let unit = standard_interval(1)?;
    let mut out = RelationOutcome::default();

    for x in &all {
        let id = PointMap::identity(x.n());
        let h = Homotopy::from_fn(x.clone(), x.clone(), unit.clone(), id, |p, _| p)?;
        for f in pairwise_maps(x, x) {
            for x0 in 0..x.n() {
                let ok = verify_iteration_homotopy(&h, &f, &f, x0, x.n())?.holds;
                out.reflexive
                    .record(ok, || format!("f = {:?}, x0 = {x0}", f.table()));
            }
        }
    }

    let pairs: Vec<(usize, usize)> = (0..all.len())
        .flat_map(|a| (0..all.len()).map(move |b| (a, b)))
        .collect();
    let found: Vec<Vec<IterSuccess>> = pairs
        .par_iter()
        .map(|&(a, b)| iteration_successes(&all[a], &all[b]))
        .collect::<Result<Vec<_>>>()?;
    let table = |a: usize, b: usize| &found[a * all.len() + b];

    for &(a, b) in &pairs {
        for s in table(a, b) {
            let start = compose(&s.g, &s.bridge)?;
            let end = compose(&s.bridge, &s.f)?;
            let rev = s.h.reverse();
            let ok = meets(&rev, &orbit_cells(ends(&rev), &s.f, &start, &end, s.x0))?;
            out.symmetric
                .record(ok, || format!("reverse of {:?} from {}", s.h.table(), s.x0));
        }
    }

    let transitive: Vec<Result<SuiteOutcome>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut o = SuiteOutcome::default();
            for (c, z) in all.iter().enumerate() {
                for s1 in table(a, b) {
                    let y0 = s1.bridge.apply(s1.x0);
                    for s2 in table(b, c).iter().filter(|s2| s2.f == s1.g && s2.x0 == y0) {
                        let k = compose(&s2.bridge, &s1.bridge)?;
                        let p = iteration_problem(&all[a], z, &unit, &s1.f, &s2.g, &k, s1.x0);
                        let ok = search_with_escalation(&p, 2)?.is_found();
                        let start = compose(&k, &s1.f)?;
                        let end = compose(&s2.g, &k)?;
                        let cells = orbit_cells((0, 1), &s1.f, &start, &end, s1.x0);
                        o.record_obstructed(
                            ok,
                            || pins_conflict(&cells),
                            || {
                                format!(
                                    "f={:?} h={:?} K={:?} from {}",
                                    s1.f.table(),
                                    s2.g.table(),
                                    k.table(),
                                    s1.x0
                                )
                            },
                        );
                    }
                }
            }
            Ok(o)
        })
        .collect();
    for o in transitive {
        out.transitive.absorb(o?);
    }
    Ok(out)
}

struct PathSuccess {
    f: PointMap,
    g: PointMap,
    path: BitopPath,
    h: Homotopy,
}

fn path_cells(
    time: &IntervalModel,
    domain: &IntervalModel,
    path: &BitopPath,
    start: &PointMap,
    end: &PointMap,
) -> Vec<(usize, usize, usize)> {
    let (e0, e1) = (time.e0(), time.e1());
    let mut cells = Vec::new();
    for t in 0..time.n() {
        cells.push((domain.e0(), t, path.start()));
        cells.push((domain.e1(), t, path.end()));
    }
    for m in domain.interior().iter() {
        cells.push((m, e0, start.apply(m)));
        cells.push((m, e1, end.apply(m)));
    }
    cells
}

fn path_successes(unit: &IntervalModel, y: &BitopSpace) -> Result<Vec<PathSuccess>> {
    let mut out = Vec::new();
    let gs = pairwise_maps(y, y);
    for f in pairwise_maps(unit.space(), unit.space()) {
        for map in pairwise_maps(unit.space(), y) {
            let path = BitopPath::new(unit.clone(), y.clone(), map)?;
            for g in &gs {
                let p = SearchProblem::path(unit.clone(), f.clone(), g.clone(), path.clone());
                if let Some(h) = search_homotopy(&p)?.homotopy() {
                    out.push(PathSuccess {
                        f: f.clone(),
                        g: g.clone(),
                        path: path.clone(),
                        h: h.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The slices at time 0 and 1 are pinned completely: endpoints go to the
/// path's ends and interior points to `start` or `end`. Each slice must be
/// a pairwise continuous map out of the domain, whatever the time level.
fn path_obstructed(
    domain: &IntervalModel,
    path: &BitopPath,
    start: &PointMap,
    end: &PointMap,
) -> Result<bool> {
    for m in [start, end] {
        let slice: Vec<usize> = (0..domain.n())
            .map(|p| match p {
                p if p == domain.e0() => path.start(),
                p if p == domain.e1() => path.end(),
                p => m.apply(p),
            })
            .collect();
        let slice = PointMap::new(path.y().n(), slice)?;
        if !is_pairwise_continuous_fast(domain.space(), path.y(), &slice) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Path homotopies over the level-one model `I`, into targets with at most
/// `max_n` points and into `I` itself:
/// * reflexivity: a search for `(f, f)` along the identity path of `I`;
/// * symmetry: the reversed table meets the swapped conditions;
/// * transitivity: when the first target is `I`, the second path can be
///   composed with the first; a search for `(f, h)` along `G∘F`.
pub fn path_relation_suite(max_n: usize) -> Result<RelationOutcome> {
    let unit = standard_interval(1)?;
    let i = unit.space().clone();
    let mut targets: Vec<BitopSpace> = (1..=max_n)
        .map(spaces)
        .collect::<Result<Vec<_>>>()?
        .concat();
    targets.push(i.clone());
    let mut out = RelationOutcome::default();

    let id_path = BitopPath::new(unit.clone(), i.clone(), PointMap::identity(i.n()))?;
    for f in pairwise_maps(&i, &i) {
        let p = SearchProblem::path(unit.clone(), f.clone(), f.clone(), id_path.clone());
        let ok = search_with_escalation(&p, 2)?.is_found();
        let obstructed = !ok && path_obstructed(&unit, &id_path, &f, &f)?;
        out.reflexive.record_obstructed(
            ok,
            || obstructed,
            || format!("no path homotopy from f = {:?} to itself", f.table()),
        );
    }

    let found: Vec<Vec<PathSuccess>> = targets
        .par_iter()
        .map(|y| path_successes(&unit, y))
        .collect::<Result<Vec<_>>>()?;

    for s in found.iter().flatten() {
        let start = compose(&s.g, s.path.map())?;
        let end = compose(s.path.map(), &s.f)?;
        let rev = s.h.reverse();
        let ok = meets(
            &rev,
            &path_cells(rev.interval(), &unit, &s.path, &start, &end),
        )?;
        out.symmetric
            .record(ok, || format!("reverse of {:?}", s.h.table()));
    }

    let into_i = found.last().expect("I is a target");
    let transitive: Vec<Result<SuiteOutcome>> = targets
        .par_iter()
        .zip(found.par_iter())
        .map(|(z, second)| {
            let mut o = SuiteOutcome::default();
            for s1 in into_i {
                for s2 in second.iter().filter(|s2| s2.f == s1.g) {
                    let k = compose(s2.path.map(), s1.path.map())?;
                    let path = BitopPath::new(unit.clone(), z.clone(), k.clone())?;
                    let p =
                        SearchProblem::path(unit.clone(), s1.f.clone(), s2.g.clone(), path.clone());
                    let ok = search_with_escalation(&p, 2)?.is_found();
                    let obstructed = !ok
                        && path_obstructed(
                            &unit,
                            &path,
                            &compose(&k, &s1.f)?,
                            &compose(&s2.g, &k)?,
                        )?;
                    o.record_obstructed(
                        ok,
                        || obstructed,
                        || {
                            format!(
                                "f={:?} h={:?} along {:?}",
                                s1.f.table(),
                                s2.g.table(),
                                s2.path.map().table()
                            )
                        },
                    );
                }
            }
            Ok(o)
        })
        .collect();
    for o in transitive {
        out.transitive.absorb(o?);
    }
    Ok(out)
}
