//! Finite topologies in preorder form.
//!
//! A topology on `0..n` is stored as the minimal open neighbourhood of every
//! point. Open sets, closures and covers are derived from that table.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard limit imposed by the `u64` bit-vector encoding.
pub const MAX_POINTS: usize = 64;
/// Default point cap for open-set and cover enumeration.
pub const DEFAULT_OPEN_CAP: usize = 6;
/// Default point cap for exhaustive topology enumeration.
pub const DEFAULT_TOPOLOGY_CAP: usize = 4;

/// A subset of `0..n`, encoded as a bit vector.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(p: usize) -> Self {
        PointSet(1u64 << p)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        points.into_iter().fold(PointSet::EMPTY, |s, p| s.with(p))
    }

    #[inline]
    pub fn contains(self, p: usize) -> bool {
        p < MAX_POINTS && self.0 & (1u64 << p) != 0
    }

    #[inline]
    pub fn with(self, p: usize) -> Self {
        PointSet(self.0 | (1u64 << p))
    }

    #[inline]
    pub fn without(self, p: usize) -> Self {
        PointSet(self.0 & !(1u64 << p))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    /// Complement relative to `0..n`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        PointSet::full(n).difference(self)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn within(self, n: usize) -> bool {
        self.is_subset(PointSet::full(n))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    /// Every subset of `0..n` in ascending bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
        assert!(n < MAX_POINTS, "subset enumeration needs n < 64");
        (0..(1u64 << n)).map(PointSet)
    }

    /// All subsets of `self`, ascending.
    pub fn subsets(self) -> impl Iterator<Item = PointSet> {
        // Standard submask walk, collected so the order is ascending.
        let mut out = Vec::with_capacity(1 << self.len().min(20));
        let mut sub = 0u64;
        loop {
            out.push(PointSet(sub));
            if sub == self.0 {
                break;
            }
            sub = (sub.wrapping_sub(self.0)) & self.0;
        }
        out.into_iter()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_points(iter)
    }
}

/// Which of the two topologies of a bitopological space is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TopologyIndex {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl TopologyIndex {
    pub const BOTH: [TopologyIndex; 2] = [TopologyIndex::First, TopologyIndex::Second];

    pub fn other(self) -> Self {
        match self {
            TopologyIndex::First => TopologyIndex::Second,
            TopologyIndex::Second => TopologyIndex::First,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            TopologyIndex::First => 1,
            TopologyIndex::Second => 2,
        }
    }

    pub fn from_number(i: u8) -> Option<Self> {
        match i {
            1 => Some(TopologyIndex::First),
            2 => Some(TopologyIndex::Second),
            _ => None,
        }
    }
}

impl fmt::Display for TopologyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A topology on the points `0..n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr", into = "TopologyRepr")]
pub struct FiniteTopology {
    n: usize,
    min_nbhd: Vec<PointSet>,
}

#[derive(Serialize, Deserialize)]
struct TopologyRepr {
    n: usize,
    min_nbhd: Vec<PointSet>,
}

impl TryFrom<TopologyRepr> for FiniteTopology {
    type Error = Error;

    fn try_from(r: TopologyRepr) -> Result<Self> {
        if r.min_nbhd.len() != r.n {
            return Err(Error::InvalidNeighborhoods(format!(
                "{} neighbourhoods for {} points",
                r.min_nbhd.len(),
                r.n
            )));
        }
        FiniteTopology::from_min_nbhd(r.min_nbhd)
    }
}

impl From<FiniteTopology> for TopologyRepr {
    fn from(t: FiniteTopology) -> Self {
        TopologyRepr {
            n: t.n,
            min_nbhd: t.min_nbhd,
        }
    }
}

impl FiniteTopology {
    /// Builds a topology from its minimal-neighbourhood table, checking
    /// reflexivity and transitivity.
    pub fn from_min_nbhd(min_nbhd: Vec<PointSet>) -> Result<Self> {
        let n = min_nbhd.len();
        check_point_count(n)?;
        for (p, &u) in min_nbhd.iter().enumerate() {
            if !u.within(n) {
                return Err(Error::InvalidNeighborhoods(format!(
                    "neighbourhood {u} of point {p} leaves 0..{n}"
                )));
            }
            if !u.contains(p) {
                return Err(Error::InvalidNeighborhoods(format!(
                    "point {p} missing from its own neighbourhood {u}"
                )));
            }
            for q in u.iter() {
                if !min_nbhd[q].is_subset(u) {
                    return Err(Error::InvalidNeighborhoods(format!(
                        "{q} in U({p}) = {u} but U({q}) = {} is not contained in it",
                        min_nbhd[q]
                    )));
                }
            }
        }
        Ok(FiniteTopology { n, min_nbhd })
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopology {
            n,
            min_nbhd: (0..n).map(PointSet::singleton).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopology {
            n,
            min_nbhd: vec![PointSet::full(n); n],
        }
    }

    /// The topology generated by `family ∪ {∅, full}` under finite unions and
    /// intersections. In `strict` mode the family must already be a topology.
    pub fn from_open_family(n: usize, family: &[PointSet], strict: bool) -> Result<Self> {
        check_point_count(n)?;
        let full = PointSet::full(n);
        if let Some(bad) = family.iter().find(|u| !u.within(n)) {
            return Err(Error::OutOfRange {
                point: 63 - bad.bits().leading_zeros() as usize,
                n,
            });
        }
        if strict {
            let set: BTreeSet<PointSet> = family.iter().copied().collect();
            if !set.contains(&PointSet::EMPTY) {
                return Err(Error::StrictNotATopology("missing the empty set".into()));
            }
            if !set.contains(&full) {
                return Err(Error::StrictNotATopology("missing the full set".into()));
            }
            for &a in &set {
                for &b in &set {
                    if !set.contains(&a.union(b)) {
                        return Err(Error::StrictNotATopology(format!(
                            "{a} ∪ {b} = {} is missing",
                            a.union(b)
                        )));
                    }
                    if !set.contains(&a.intersection(b)) {
                        return Err(Error::StrictNotATopology(format!(
                            "{a} ∩ {b} = {} is missing",
                            a.intersection(b)
                        )));
                    }
                }
            }
        }
        // In the ∪/∩-closure, the smallest set containing p is the
        // intersection of all generators containing p.
        let min_nbhd = (0..n)
            .map(|p| {
                family
                    .iter()
                    .filter(|u| u.contains(p))
                    .fold(full, |acc, &u| acc.intersection(u))
            })
            .collect();
        Ok(FiniteTopology { n, min_nbhd })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.n)
    }

    #[inline]
    pub fn min_nbhd(&self, p: usize) -> PointSet {
        self.min_nbhd[p]
    }

    pub fn min_nbhds(&self) -> &[PointSet] {
        &self.min_nbhd
    }

    /// `U` is open iff it contains the minimal neighbourhood of each member.
    pub fn is_open(&self, u: PointSet) -> bool {
        u.within(self.n) && u.iter().all(|p| self.min_nbhd[p].is_subset(u))
    }

    pub fn is_closed(&self, c: PointSet) -> bool {
        c.within(self.n) && self.is_open(c.complement(self.n))
    }

    /// Smallest closed superset: the points whose minimal neighbourhood meets `a`.
    pub fn closure(&self, a: PointSet) -> PointSet {
        (0..self.n)
            .filter(|&p| !self.min_nbhd[p].is_disjoint(a))
            .collect()
    }

    /// Largest open subset.
    pub fn interior(&self, a: PointSet) -> PointSet {
        (0..self.n)
            .filter(|&p| self.min_nbhd[p].is_subset(a))
            .collect()
    }

    /// Smallest open superset: the union of the minimal neighbourhoods.
    pub fn open_hull(&self, a: PointSet) -> PointSet {
        a.iter()
            .fold(PointSet::EMPTY, |acc, p| acc.union(self.min_nbhd[p]))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|p| self.min_nbhd[p] == PointSet::singleton(p))
    }

    pub fn is_indiscrete(&self) -> bool {
        (0..self.n).all(|p| self.min_nbhd[p] == self.full())
    }

    /// Every open set of a topology with at most `cap` points, ascending.
    pub fn enumerate_opens(&self, cap: usize) -> Result<Vec<PointSet>> {
        if self.n > cap {
            return Err(Error::CapExceeded {
                what: "open-set enumeration",
                got: self.n,
                cap,
            });
        }
        Ok(self.opens_uncapped())
    }

    /// All open sets, built as unions of minimal neighbourhoods. Cost is
    /// proportional to the number of opens, not to `2^n`.
    pub(crate) fn opens_uncapped(&self) -> Vec<PointSet> {
        let mut opens: BTreeSet<PointSet> = BTreeSet::from([PointSet::EMPTY]);
        for &u in &self.min_nbhd {
            let grown: Vec<PointSet> = opens.iter().map(|&o| o.union(u)).collect();
            opens.extend(grown);
        }
        opens.into_iter().collect()
    }

    /// Covers by nonempty opens from which no member can be removed,
    /// canonical order, tagged with `index`.
    pub fn enumerate_irredundant_covers(
        &self,
        index: TopologyIndex,
        cap: usize,
    ) -> Result<Vec<Cover>> {
        let opens: Vec<PointSet> = self
            .enumerate_opens(cap)?
            .into_iter()
            .filter(|u| !u.is_empty())
            .collect();
        let full = self.full();
        let mut found: BTreeSet<Vec<PointSet>> = BTreeSet::new();
        let mut chosen = Vec::new();
        irredundant_rec(&opens, full, PointSet::EMPTY, &mut chosen, &mut found);
        Ok(found
            .into_iter()
            .map(|members| Cover { members, index })
            .collect())
    }

    /// Every cover by nonempty opens (redundant ones included), canonical order.
    pub fn enumerate_all_covers(&self, index: TopologyIndex, cap: usize) -> Result<Vec<Cover>> {
        let opens: Vec<PointSet> = self
            .enumerate_opens(cap)?
            .into_iter()
            .filter(|u| !u.is_empty())
            .collect();
        if opens.len() > 20 {
            return Err(Error::CapExceeded {
                what: "all-cover enumeration (nonempty opens)",
                got: opens.len(),
                cap: 20,
            });
        }
        let full = self.full();
        let mut covers: Vec<Vec<PointSet>> = (1u32..(1u32 << opens.len()))
            .map(|mask| {
                (0..opens.len())
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| opens[i])
                    .collect::<Vec<_>>()
            })
            .filter(|m| union_of(m) == full)
            .collect();
        covers.sort();
        Ok(covers
            .into_iter()
            .map(|members| Cover { members, index })
            .collect())
    }

    /// Specialisation-preorder encoding: bit `p*n + q` is set when
    /// `q ∈ U(p)` with `p ≠ q`. Used for canonical ordering and hashing.
    pub fn preorder_code(&self) -> u64 {
        let mut code = 0u64;
        let mut bit = 0;
        for p in 0..self.n {
            for q in 0..self.n {
                if p != q {
                    if self.min_nbhd[p].contains(q) {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
        }
        code
    }

    /// Relabels points: point `p` becomes `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut min_nbhd = vec![PointSet::EMPTY; self.n];
        for p in 0..self.n {
            min_nbhd[perm[p]] = self.min_nbhd[p].iter().map(|q| perm[q]).collect();
        }
        FiniteTopology {
            n: self.n,
            min_nbhd,
        }
    }
}

fn check_point_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidNeighborhoods(
            "a space needs at least one point".into(),
        ));
    }
    if n > MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "point count",
            got: n,
            cap: MAX_POINTS,
        });
    }
    Ok(())
}

pub(crate) fn union_of(members: &[PointSet]) -> PointSet {
    members.iter().fold(PointSet::EMPTY, |a, &u| a.union(u))
}

/// True when every member owns a point no other member covers.
pub fn is_irredundant(members: &[PointSet]) -> bool {
    (0..members.len()).all(|i| {
        let others = members
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(PointSet::EMPTY, |a, (_, &u)| a.union(u));
        !members[i].is_subset(others)
    })
}

fn irredundant_rec(
    opens: &[PointSet],
    full: PointSet,
    covered: PointSet,
    chosen: &mut Vec<PointSet>,
    found: &mut BTreeSet<Vec<PointSet>>,
) {
    let Some(p) = full.difference(covered).first() else {
        let mut members = chosen.clone();
        members.sort();
        found.insert(members);
        return;
    };
    for &u in opens.iter().filter(|u| u.contains(p)) {
        if chosen.contains(&u) {
            continue;
        }
        chosen.push(u);
        // Adding members only makes earlier ones more redundant, so prune early.
        if is_irredundant(chosen) {
            irredundant_rec(opens, full, covered.union(u), chosen, found);
        }
        chosen.pop();
    }
}

/// A finite family of nonempty open sets whose union is the whole space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Cover {
    pub members: Vec<PointSet>,
    pub index: TopologyIndex,
}

impl Cover {
    /// Validates and canonicalises (sorted, deduplicated) a cover of `t`.
    pub fn new(
        t: &FiniteTopology,
        index: TopologyIndex,
        mut members: Vec<PointSet>,
    ) -> Result<Self> {
        members.sort();
        members.dedup();
        if let Some(u) = members.iter().find(|u| u.is_empty() || !t.is_open(**u)) {
            return Err(Error::Invalid(format!(
                "cover member {u} is empty or not open in topology {index}"
            )));
        }
        if union_of(&members) != t.full() {
            return Err(Error::Invalid(format!(
                "members {members:?} do not cover 0..{}",
                t.n()
            )));
        }
        Ok(Cover { members, index })
    }

    pub fn union(&self) -> PointSet {
        union_of(&self.members)
    }

    /// Checks the invariants against `t`.
    pub fn is_valid_for(&self, t: &FiniteTopology) -> bool {
        self.members.iter().all(|&u| !u.is_empty() && t.is_open(u)) && self.union() == t.full()
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, u) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("}")
    }
}

/// Every topology on `n` labelled points exactly once, in ascending
/// specialisation-preorder code.
pub fn enumerate_topologies(n: usize, cap: usize) -> Result<impl Iterator<Item = FiniteTopology>> {
    check_point_count(n)?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "topology enumeration",
            got: n,
            cap,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
        .collect();
    let count = 1u64 << pairs.len();
    Ok((0..count).filter_map(move |code| {
        let mut min_nbhd: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (bit, &(p, q)) in pairs.iter().enumerate() {
            if code & (1 << bit) != 0 {
                min_nbhd[p] = min_nbhd[p].with(q);
            }
        }
        // Transitive iff each neighbourhood already absorbs its members' ones.
        let transitive = (0..n).all(|p| {
            min_nbhd[p]
                .iter()
                .all(|q| min_nbhd[q].is_subset(min_nbhd[p]))
        });
        transitive.then_some(FiniteTopology { n, min_nbhd })
    }))
}
