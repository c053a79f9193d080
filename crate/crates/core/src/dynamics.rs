//! Point maps, continuity, composition and orbits.

use serde::{Deserialize, Serialize};

use crate::bitop::{BitopSpace, Verdict};
use crate::error::{Error, Result};
use crate::fintop::{FiniteTopology, PointSet, TopologyIndex};

/// A total function `0..dom_n → 0..cod_n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct PointMap {
    cod_n: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    cod_n: usize,
    table: Vec<usize>,
}

impl TryFrom<MapRepr> for PointMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        PointMap::new(r.cod_n, r.table)
    }
}

impl From<PointMap> for MapRepr {
    fn from(m: PointMap) -> Self {
        MapRepr {
            cod_n: m.cod_n,
            table: m.table,
        }
    }
}

impl PointMap {
    pub fn new(cod_n: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&v| v >= cod_n) {
            return Err(Error::OutOfRange {
                point: bad,
                n: cod_n,
            });
        }
        Ok(PointMap { cod_n, table })
    }

    pub fn identity(n: usize) -> Self {
        PointMap {
            cod_n: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(dom_n: usize, cod_n: usize, value: usize) -> Result<Self> {
        PointMap::new(cod_n, vec![value; dom_n])
    }

    pub fn dom_n(&self) -> usize {
        self.table.len()
    }

    pub fn cod_n(&self) -> usize {
        self.cod_n
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, a: PointSet) -> PointSet {
        a.iter().map(|x| self.table[x]).collect()
    }

    pub fn preimage(&self, b: PointSet) -> PointSet {
        (0..self.dom_n())
            .filter(|&x| b.contains(self.table[x]))
            .collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.dom_n() == self.cod_n
            && self.image(PointSet::full(self.dom_n())) == PointSet::full(self.cod_n)
    }

    pub fn inverse(&self) -> Option<PointMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.cod_n];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(PointMap {
            cod_n: self.dom_n(),
            table,
        })
    }

    /// Every map `0..dom_n → 0..cod_n`, in lexicographic table order.
    pub fn all(dom_n: usize, cod_n: usize) -> impl Iterator<Item = PointMap> {
        let count = (cod_n as u64).pow(dom_n as u32);
        (0..count).map(move |mut code| {
            let mut table = vec![0; dom_n];
            for slot in table.iter_mut().rev() {
                *slot = (code % cod_n as u64) as usize;
                code /= cod_n as u64;
            }
            PointMap { cod_n, table }
        })
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &PointMap, inner: &PointMap) -> Result<PointMap> {
    if inner.cod_n() != outer.dom_n() {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose: inner lands in {} points, outer starts from {}",
            inner.cod_n(),
            outer.dom_n()
        )));
    }
    Ok(PointMap {
        cod_n: outer.cod_n,
        table: inner.table.iter().map(|&y| outer.table[y]).collect(),
    })
}

/// An open set of the codomain whose preimage is not open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityWitness {
    pub index: TopologyIndex,
    pub open: PointSet,
}

fn check_shape(src_n: usize, dst_n: usize, m: &PointMap) -> Result<()> {
    if m.dom_n() != src_n || m.cod_n() != dst_n {
        return Err(Error::ShapeMismatch(format!(
            "map {}→{} points used between spaces of {} and {} points",
            m.dom_n(),
            m.cod_n(),
            src_n,
            dst_n
        )));
    }
    Ok(())
}

/// Continuity of `m: src → dst`, decided twice: preimages of all opens, and
/// monotonicity of minimal neighbourhoods. The two must agree. The witness is
/// the smallest open set (in bit order) whose preimage is not open.
pub fn is_continuous(
    src: &FiniteTopology,
    dst: &FiniteTopology,
    m: &PointMap,
) -> Result<Verdict<PointSet>> {
    check_shape(src.n(), dst.n(), m)?;
    let by_nbhd =
        (0..src.n()).all(|x| m.image(src.min_nbhd(x)).is_subset(dst.min_nbhd(m.apply(x))));
    let bad_open = dst
        .opens_uncapped()
        .into_iter()
        .find(|&v| !src.is_open(m.preimage(v)));
    if by_nbhd != bad_open.is_none() {
        return Err(Error::InternalEquivalenceViolation(format!(
            "continuity of {:?}: neighbourhood test says {by_nbhd}, preimage test says {}",
            m.table(),
            bad_open.is_none()
        )));
    }
    Ok(match bad_open {
        Some(v) => Verdict::fail(v),
        None => Verdict::pass(),
    })
}

/// Neighbourhood-only continuity test, for hot loops over large products.
pub fn is_continuous_fast(src: &FiniteTopology, dst: &FiniteTopology, m: &PointMap) -> bool {
    m.dom_n() == src.n()
        && m.cod_n() == dst.n()
        && (0..src.n()).all(|x| m.image(src.min_nbhd(x)).is_subset(dst.min_nbhd(m.apply(x))))
}

pub fn is_pairwise_continuous(
    src: &BitopSpace,
    dst: &BitopSpace,
    m: &PointMap,
) -> Result<Verdict<ContinuityWitness>> {
    for index in TopologyIndex::BOTH {
        let v = is_continuous(src.topology(index), dst.topology(index), m)?;
        if let Some(open) = v.witness {
            return Ok(Verdict::fail(ContinuityWitness { index, open }));
        }
    }
    Ok(Verdict::pass())
}

pub fn is_pairwise_continuous_fast(src: &BitopSpace, dst: &BitopSpace, m: &PointMap) -> bool {
    TopologyIndex::BOTH
        .iter()
        .all(|&i| is_continuous_fast(src.topology(i), dst.topology(i), m))
}

/// Bijective, with both the map and its inverse pairwise continuous.
pub fn is_pairwise_homeomorphism(space: &BitopSpace, m: &PointMap) -> Result<bool> {
    let Some(inv) = m.inverse() else {
        return Ok(false);
    };
    Ok(is_pairwise_continuous(space, space, m)?.holds
        && is_pairwise_continuous(space, space, &inv)?.holds)
}

/// A bitopological dynamical system. `certified` records whether the map was
/// found pairwise continuous; [`Btds::unchecked`] lets contested fixtures load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Btds {
    space: BitopSpace,
    map: PointMap,
    certified: bool,
    witness: Option<ContinuityWitness>,
}

impl Btds {
    pub fn new(space: BitopSpace, map: PointMap) -> Result<Self> {
        let b = Btds::unchecked(space, map)?;
        match b.witness {
            Some(w) => Err(Error::NotPairwiseContinuous(format!(
                "preimage of topology-{} open {} is not open",
                w.index, w.open
            ))),
            None => Ok(b),
        }
    }

    pub fn unchecked(space: BitopSpace, map: PointMap) -> Result<Self> {
        let v = is_pairwise_continuous(&space, &space, &map)?;
        Ok(Btds {
            space,
            map,
            certified: v.holds,
            witness: v.witness,
        })
    }

    pub fn space(&self) -> &BitopSpace {
        &self.space
    }

    pub fn map(&self) -> &PointMap {
        &self.map
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn continuity_witness(&self) -> Option<ContinuityWitness> {
        self.witness
    }

    /// Orbit of `x`, truncated at the first repeated point or after `budget`
    /// points. Backward and full orbits need a pairwise homeomorphism.
    pub fn orbit(&self, x: usize, kind: OrbitKind, budget: usize) -> Result<Orbit> {
        if x >= self.space.n() {
            return Err(Error::OutOfRange {
                point: x,
                n: self.space.n(),
            });
        }
        match kind {
            OrbitKind::Forward => Ok(iterate(&self.map, x, budget)),
            OrbitKind::Backward | OrbitKind::Full => {
                if !is_pairwise_homeomorphism(&self.space, &self.map)? {
                    return Err(Error::NotInvertible(format!(
                        "{:?} is not a pairwise homeomorphism",
                        self.map.table()
                    )));
                }
                let inv = self.map.inverse().expect("homeomorphisms are bijective");
                let backward = iterate(&inv, x, budget);
                if kind == OrbitKind::Backward {
                    return Ok(backward);
                }
                // Bijections on finite sets are periodic: both directions walk
                // the same cycle.
                let mut full = iterate(&self.map, x, budget);
                for p in backward.points {
                    if !full.points.contains(&p) {
                        full.points.push(p);
                    }
                }
                Ok(full)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Forward,
    Backward,
    Full,
}

/// Distinct orbit points in iteration order. When the orbit closed within
/// the budget, `points[preperiod..]` is the cycle of length `period`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<usize>,
    pub preperiod: usize,
    pub period: Option<usize>,
}

fn iterate(m: &PointMap, x: usize, budget: usize) -> Orbit {
    let mut points = Vec::new();
    let mut cur = x;
    while points.len() < budget {
        if let Some(pos) = points.iter().position(|&p| p == cur) {
            return Orbit {
                preperiod: pos,
                period: Some(points.len() - pos),
                points,
            };
        }
        points.push(cur);
        cur = m.apply(cur);
    }
    // Budget spent; the orbit may still have closed on the last step.
    let closed = points.iter().position(|&p| p == cur);
    Orbit {
        preperiod: closed.unwrap_or(points.len()),
        period: closed.map(|pos| points.len() - pos),
        points,
    }
}
