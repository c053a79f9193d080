mod common;

use btds_core::selection::{
    context_library, decide_classical, decide_h_property, decide_ph_property, decide_selection,
    oracle_bounded, oracle_with_covers, Anchor, ClassicalProperty, HProperty, SelectionMode,
    SelectionProblem, SelectionReport,
};
use btds_core::{
    AnchorReading, BitopSpace, FamilyKind, SelectionOptions, TargetOpenness, TopologyIndex,
};
use rayon::prelude::*;

use HProperty::*;

const ARROWS: [(HProperty, HProperty); 7] = [
    (Rothberger, AlmostRothberger),
    (AlmostRothberger, WeakRothberger),
    (Menger, AlmostMenger),
    (AlmostMenger, WeakMenger),
    (Rothberger, Menger),
    (AlmostRothberger, AlmostMenger),
    (WeakRothberger, WeakMenger),
];

fn spaces_up_to(n: usize) -> Vec<BitopSpace> {
    (1..=n).flat_map(common::bitop_spaces).collect()
}

fn flag_settings() -> Vec<SelectionOptions> {
    let mut out = Vec::new();
    for reading in [AnchorReading::PerSet, AnchorReading::Union] {
        for openness in [TargetOpenness::Strict, TargetOpenness::CoverOnly] {
            out.push(SelectionOptions {
                reading,
                openness,
                ..SelectionOptions::default()
            });
        }
    }
    out
}

/// `[H verdicts; 6]`, `[PH verdicts; 6]` for every library context.
fn vectors(y: &BitopSpace, opts: &SelectionOptions) -> Vec<([bool; 6], [bool; 6])> {
    context_library(y)
        .unwrap()
        .iter()
        .map(|ctx| {
            let mut h = [false; 6];
            let mut ph = [false; 6];
            for (k, prop) in HProperty::ALL.into_iter().enumerate() {
                let hr = decide_h_property(&ctx.h, prop, opts).unwrap();
                let pr = decide_ph_property(&ctx.ph, prop, opts).unwrap();
                check_report(y, &hr);
                check_report(y, &pr);
                h[k] = hr.verdict;
                ph[k] = pr.verdict;
            }
            (h, ph)
        })
        .collect()
}

/// Refuting covers are genuine covers; decisions within caps are confirmed.
fn check_report(y: &BitopSpace, r: &SelectionReport) {
    assert_eq!(r.method, btds_core::selection::Method::Both);
    if let Some(refutation) = r.refutation() {
        assert!(refutation.cover.is_valid_for(y.topology(refutation.source)));
        assert!(refutation.sequence.is_some());
    }
}

fn idx(p: HProperty) -> usize {
    HProperty::ALL.iter().position(|&q| q == p).unwrap()
}

/// Every H, PH and classical decision over all spaces on at most three
/// points, under all four flag settings, with the oracle confirming each
/// one. Also checks the implication arrows and the conditional
/// equivalences on the same vectors.
#[test]
fn full_sweep_dual_paths_and_diagram() {
    let spaces = spaces_up_to(3);
    for opts in flag_settings() {
        spaces.par_iter().for_each(|y| {
            let t3 = y.is_pairwise_t3().unwrap().holds;
            for (h, ph) in vectors(y, &opts) {
                for v in [h, ph] {
                    for (from, to) in ARROWS {
                        assert!(!v[idx(from)] || v[idx(to)], "{from} ⟹ {to} fails on {y:?}");
                    }
                    assert_eq!(v[idx(AlmostRothberger)], v[idx(WeakRothberger)], "{y:?}");
                    assert_eq!(v[idx(AlmostMenger)], v[idx(WeakMenger)], "{y:?}");
                    if t3 {
                        assert_eq!(v[idx(Rothberger)], v[idx(AlmostRothberger)]);
                        assert_eq!(v[idx(Menger)], v[idx(AlmostMenger)]);
                    }
                }
                assert_eq!(h, ph, "library PH contexts share the H anchors");
            }
            for prop in ClassicalProperty::ALL {
                let r = decide_classical(y, prop, &opts).unwrap();
                check_report(y, &r);
            }
        });
    }
}

#[test]
fn classical_properties_on_finite_spaces() {
    let opts = SelectionOptions::default();
    for y in spaces_up_to(3) {
        for prop in [
            ClassicalProperty::WeaklyMenger,
            ClassicalProperty::AlmostMenger,
            ClassicalProperty::AlmostRothberger,
        ] {
            assert!(
                decide_classical(&y, prop, &opts).unwrap().verdict,
                "{prop} {y:?}"
            );
        }
        // δ₂-Menger: every τᵢ-cover has τⱼ-open refinements covering the space.
        let expected = TopologyIndex::BOTH.into_iter().all(|i| {
            let j = i.other();
            y.topology(i)
                .enumerate_irredundant_covers(i, 6)
                .unwrap()
                .iter()
                .all(|c| {
                    (0..y.n()).all(|p| {
                        let u = y.topology(j).min_nbhd(p);
                        c.members.iter().any(|&m| u.is_subset(m))
                    })
                })
        });
        assert_eq!(
            decide_classical(&y, ClassicalProperty::Delta2Menger, &opts)
                .unwrap()
                .verdict,
            expected,
            "{y:?}"
        );
    }
}

fn all_problems(y: &BitopSpace, anchors: Vec<Anchor>) -> Vec<SelectionProblem> {
    let mut out = Vec::new();
    for i in TopologyIndex::BOTH {
        for prop in HProperty::ALL {
            out.push(
                SelectionProblem::anchored(
                    y.clone(),
                    i,
                    prop.target(i),
                    prop.mode(),
                    anchors.clone(),
                )
                .unwrap(),
            );
        }
    }
    out
}

fn anchor_pairs(n: usize) -> Vec<Anchor> {
    (0..n)
        .flat_map(|start| (0..n).map(move |end| Anchor { start, end }))
        .collect()
}

/// Any anchors, not only library ones: a superset of anchors can only turn
/// a verdict from true to false.
#[test]
fn anchor_monotonicity() {
    for y in spaces_up_to(2) {
        let pairs = anchor_pairs(y.n());
        let sets: Vec<Vec<Anchor>> = (1u32..(1 << pairs.len()))
            .map(|m| {
                (0..pairs.len())
                    .filter(|&i| m >> i & 1 == 1)
                    .map(|i| pairs[i])
                    .collect()
            })
            .collect();
        for opts in flag_settings() {
            for (k, _) in all_problems(&y, vec![pairs[0]]).iter().enumerate() {
                let verdict = |a: &Vec<Anchor>| {
                    let p = all_problems(&y, a.clone()).swap_remove(k);
                    let p = p.with_flags(opts.reading, opts.openness);
                    decide_selection(&p, &opts).unwrap().verdict
                };
                let verdicts: Vec<bool> = sets.iter().map(verdict).collect();
                for (a, va) in sets.iter().zip(&verdicts) {
                    for (b, vb) in sets.iter().zip(&verdicts) {
                        if a.iter().all(|x| b.contains(x)) {
                            assert!(!vb || *va, "{a:?} ⊆ {b:?} on {y:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_lengths_are_monotone_and_stable() {
    for y in spaces_up_to(3) {
        for a in anchor_pairs(y.n()).into_iter().step_by(2) {
            for p in all_problems(&y, vec![a]) {
                let v: Vec<bool> = (1..=3)
                    .map(|l| oracle_bounded(&p, l, 6).unwrap().holds)
                    .collect();
                for w in v.windows(2) {
                    assert!(w[0] || !w[1], "false at L must stay false: {v:?}");
                }
                assert!(v.iter().all(|&b| b == v[0]), "{v:?} on {y:?}");
            }
        }
    }
}

/// Restricting the adversary to irredundant covers loses nothing.
#[test]
fn irredundant_adversary_suffices() {
    for y in spaces_up_to(3) {
        for a in anchor_pairs(y.n()) {
            for p in all_problems(&y, vec![a]) {
                let all = y
                    .topology(p.source)
                    .enumerate_all_covers(p.source, 6)
                    .unwrap();
                let irr = y
                    .topology(p.source)
                    .enumerate_irredundant_covers(p.source, 6)
                    .unwrap();
                assert_eq!(
                    oracle_with_covers(&p, &all, 1).unwrap().holds,
                    oracle_with_covers(&p, &irr, 1).unwrap().holds
                );
            }
        }
    }
}

#[test]
fn two_point_separation_instance() {
    let y = BitopSpace::new(
        btds_core::FiniteTopology::discrete(2),
        btds_core::FiniteTopology::indiscrete(2),
    )
    .unwrap();
    let opts = SelectionOptions::default();
    let lib = context_library(&y).unwrap();
    let point_a = &lib[0].h;
    assert!(
        decide_h_property(point_a, AlmostRothberger, &opts)
            .unwrap()
            .verdict
    );
    let r = decide_h_property(point_a, Rothberger, &opts).unwrap();
    assert!(!r.verdict);
    let refutation = r.refutation().unwrap();
    assert_eq!(refutation.source, TopologyIndex::First);
    assert_eq!(refutation.cover.members.len(), 2);
    assert!(!decide_h_property(point_a, Menger, &opts).unwrap().verdict);
    assert!(
        decide_h_property(point_a, AlmostMenger, &opts)
            .unwrap()
            .verdict
    );
    // The (2,1) direction alone is trivial: ψ₂ only has the cover {Y}.
    let p = SelectionProblem::anchored(
        y.clone(),
        TopologyIndex::Second,
        FamilyKind::Open(TopologyIndex::First),
        SelectionMode::Single,
        vec![Anchor { start: 0, end: 0 }],
    )
    .unwrap();
    assert!(decide_selection(&p, &opts).unwrap().verdict);
}
