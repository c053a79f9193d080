mod common;

use btds_core::bitop::SeparationWitness;
use btds_core::{BitopSpace, Prop22Outcome, TopologyIndex};

fn all_spaces() -> Vec<BitopSpace> {
    (1..=3).flat_map(common::bitop_spaces).collect()
}

/// Pairwise T1 straight from the open families.
fn brute_t1(s: &BitopSpace) -> bool {
    let o1 = common::opens_from_nbhds(s.t1());
    let o2 = common::opens_from_nbhds(s.t2());
    let n = s.n();
    (0..n).all(|x| {
        (0..n).filter(|&y| y != x).all(|y| {
            o1.iter().any(|&u| u >> x & 1 == 1 && u >> y & 1 == 0)
                && o2.iter().any(|&v| v >> y & 1 == 1 && v >> x & 1 == 0)
        })
    })
}

fn separated(a: &[u64], b: &[u64], x: usize, y: usize) -> bool {
    a.iter()
        .any(|&u| u >> x & 1 == 1 && b.iter().any(|&v| v >> y & 1 == 1 && u & v == 0))
}

fn brute_hausdorff(s: &BitopSpace) -> (bool, bool) {
    let o1 = common::opens_from_nbhds(s.t1());
    let o2 = common::opens_from_nbhds(s.t2());
    let n = s.n();
    let pairs = || (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)));
    let symmetric = pairs().all(|(x, y)| separated(&o1, &o2, x, y) && separated(&o2, &o1, x, y));
    let one_sided = pairs().all(|(x, y)| separated(&o1, &o2, x, y) || separated(&o1, &o2, y, x));
    (symmetric, one_sided)
}

#[test]
fn sweep_sizes() {
    assert_eq!(common::bitop_spaces(2).len(), 16);
    assert_eq!(common::bitop_spaces(3).len(), 841);
}

#[test]
fn pairwise_t1_matches_definition_and_is_swap_symmetric() {
    for s in all_spaces() {
        let v = s.is_pairwise_t1();
        assert_eq!(v.holds, brute_t1(&s), "{s:?}");
        assert_eq!(v.holds, s.swapped().is_pairwise_t1().holds);
        if let Some(SeparationWitness::PairwiseT1 { x, y }) = v.witness {
            assert_ne!(x, y);
        }
    }
}

#[test]
fn hausdorff_readings_match_definitions() {
    for s in all_spaces() {
        let (sym, one) = brute_hausdorff(&s);
        assert_eq!(s.is_pairwise_hausdorff().holds, sym, "{s:?}");
        assert_eq!(s.is_pairwise_hausdorff_one_sided().holds, one, "{s:?}");
        assert!(!sym || one);
    }
}

/// The three regularity forms are compared inside the checker, which errors
/// on any disagreement; here every instance must come back `Ok`.
#[test]
fn regularity_forms_agree_everywhere() {
    for s in all_spaces() {
        for i in TopologyIndex::BOTH {
            s.is_regular_wrt(i).unwrap();
        }
    }
}

#[test]
fn t3_decomposes() {
    let mut t3_count = 0;
    for s in all_spaces() {
        let t3 = s.is_pairwise_t3().unwrap().holds;
        let parts = s.is_pairwise_t1().holds
            && s.is_regular_wrt(TopologyIndex::First).unwrap().holds
            && s.is_regular_wrt(TopologyIndex::Second).unwrap().holds;
        assert_eq!(t3, parts, "{s:?}");
        if t3 {
            t3_count += 1;
            // On finite spaces T1 already forces both topologies discrete.
            assert!(s.t1().is_discrete() && s.t2().is_discrete());
        }
    }
    assert_eq!(t3_count, 3);
}

#[test]
fn prop_2_2_never_violated_under_symmetric_hausdorff() {
    let mut confirmed = 0;
    for s in all_spaces() {
        let report = s.check_prop_2_2().unwrap();
        assert!(
            !matches!(report.symmetric, Prop22Outcome::Violated { .. }),
            "{s:?}"
        );
        if report.symmetric == Prop22Outcome::Confirmed {
            confirmed += 1;
        }
    }
    assert!(confirmed > 0);
}

#[test]
fn finite_spaces_are_locally_compact_p_spaces() {
    for s in all_spaces() {
        assert!(s.is_pairwise_locally_compact());
        assert!(s.is_pairwise_p_space());
    }
}
