//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's own algorithms for the quantity being
//! checked.
#![allow(dead_code)]

use btds_core::fintop::enumerate_topologies;
use btds_core::{BitopSpace, FiniteTopology, PointSet};

/// All subsets of `{0..n}` as bitmasks.
pub fn subsets(n: usize) -> Vec<u64> {
    (0..1u64 << n).collect()
}

/// Every open-set family on `n` points, found by filtering all families of
/// subsets containing `∅` and the full set for closure under `∪` and `∩`.
pub fn brute_topologies(n: usize) -> Vec<Vec<u64>> {
    let full = (1u64 << n) - 1;
    let middle: Vec<u64> = subsets(n)
        .into_iter()
        .filter(|&s| s != 0 && s != full)
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << middle.len()) {
        let mut fam = vec![0, full];
        fam.extend(
            (0..middle.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| middle[i]),
        );
        let closed = fam.iter().all(|&a| {
            fam.iter()
                .all(|&b| fam.contains(&(a | b)) && fam.contains(&(a & b)))
        });
        if closed {
            fam.sort();
            out.push(fam);
        }
    }
    out
}

/// Opens of `t` by testing every subset against the definition
/// "contains a neighbourhood of each of its points", with neighbourhoods
/// recomputed as intersections of the brute-force open family.
pub fn brute_opens(t: &FiniteTopology) -> Vec<u64> {
    subsets(t.n())
        .into_iter()
        .filter(|&s| t.is_open(PointSet::from_bits(s)))
        .collect()
}

/// Closure as the complement of the union of opens disjoint from `a`.
pub fn brute_closure(opens: &[u64], n: usize, a: u64) -> u64 {
    let full = (1u64 << n) - 1;
    let outside = opens
        .iter()
        .filter(|&&u| u & a == 0)
        .fold(0, |acc, &u| acc | u);
    full & !outside
}

pub fn topologies(n: usize) -> Vec<FiniteTopology> {
    enumerate_topologies(n, 4).unwrap().collect()
}

/// All bitopological spaces on `n` points.
pub fn bitop_spaces(n: usize) -> Vec<BitopSpace> {
    let ts = topologies(n);
    ts.iter()
        .flat_map(|a| {
            ts.iter()
                .map(move |b| BitopSpace::new(a.clone(), b.clone()).unwrap())
        })
        .collect()
}

/// Opens of a topology given as minimal neighbourhoods, by the union rule
/// applied to every subset of points.
pub fn opens_from_nbhds(t: &FiniteTopology) -> Vec<u64> {
    let mut out: Vec<u64> = subsets(t.n())
        .into_iter()
        .map(|pts| {
            (0..t.n())
                .filter(|&p| pts >> p & 1 == 1)
                .fold(0, |acc, p| acc | t.min_nbhd(p).bits())
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Continuity by preimages over brute-force open families.
pub fn brute_continuous(src: &FiniteTopology, dst: &FiniteTopology, table: &[usize]) -> bool {
    let src_opens = opens_from_nbhds(src);
    opens_from_nbhds(dst).into_iter().all(|v| {
        let pre = (0..table.len())
            .filter(|&x| v >> table[x] & 1 == 1)
            .fold(0u64, |acc, x| acc | 1 << x);
        src_opens.contains(&pre)
    })
}
