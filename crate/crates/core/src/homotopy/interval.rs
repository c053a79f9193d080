use serde::{Deserialize, Serialize};

use crate::bitop::BitopSpace;
use crate::dynamics::{is_pairwise_continuous, is_pairwise_homeomorphism, PointMap};
use crate::error::{Error, Result};
use crate::fintop::{FiniteTopology, PointSet};

/// A finite stand-in for `[0,1]` with both topologies equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalModel {
    space: BitopSpace,
    e0: usize,
    e1: usize,
    reversal: PointMap,
    /// Subdivision count for models built by [`standard_interval`].
    level: Option<usize>,
}

/// The `2k + 1` point model `c₀ o₁ c₁ … o_k c_k`: point `2i` is the closed
/// point `cᵢ`, point `2i − 1` the open point `oᵢ`. `U(oᵢ) = {oᵢ}` and `U(cᵢ)`
/// is `cᵢ` with its adjacent open points. Sending `0 ↦ c₀`, `1 ↦ c_k`, the
/// `i`-th open subinterval to `oᵢ` and the interior cut points to `cᵢ` is a
/// continuous quotient of `[0,1]`.
pub fn standard_interval(k: usize) -> Result<IntervalModel> {
    if k == 0 {
        return Err(Error::Invalid("interval model needs k ≥ 1".into()));
    }
    let n = 2 * k + 1;
    let min_nbhd = (0..n)
        .map(|p| {
            if p % 2 == 1 {
                PointSet::singleton(p)
            } else {
                let mut u = PointSet::singleton(p);
                if p > 0 {
                    u = u.with(p - 1);
                }
                if p + 1 < n {
                    u = u.with(p + 1);
                }
                u
            }
        })
        .collect();
    let t = FiniteTopology::from_min_nbhd(min_nbhd)?;
    let space = BitopSpace::new(t.clone(), t)?;
    let reversal = PointMap::new(n, (0..n).rev().collect())?;
    Ok(IntervalModel {
        space,
        e0: 0,
        e1: n - 1,
        reversal,
        level: Some(k),
    })
}

impl IntervalModel {
    /// A custom model; checks equal topologies, closed endpoints, and that
    /// `reversal` is an involutive pairwise homeomorphism swapping them.
    pub fn new(space: BitopSpace, e0: usize, e1: usize, reversal: PointMap) -> Result<Self> {
        let n = space.n();
        if e0 >= n || e1 >= n || e0 == e1 {
            return Err(Error::Invalid(format!(
                "bad endpoints {e0}, {e1} for {n} points"
            )));
        }
        if space.t1() != space.t2() {
            return Err(Error::Invalid(
                "interval model topologies must coincide".into(),
            ));
        }
        for e in [e0, e1] {
            if !space.t1().is_closed(PointSet::singleton(e)) {
                return Err(Error::Invalid(format!(
                    "endpoint {e} is not a closed point"
                )));
            }
        }
        if reversal.dom_n() != n || reversal.cod_n() != n {
            return Err(Error::ShapeMismatch("reversal must be a self-map".into()));
        }
        if reversal.apply(e0) != e1 || reversal.apply(e1) != e0 {
            return Err(Error::Invalid("reversal must swap the endpoints".into()));
        }
        if (0..n).any(|p| reversal.apply(reversal.apply(p)) != p) {
            return Err(Error::Invalid("reversal must be an involution".into()));
        }
        if !is_pairwise_homeomorphism(&space, &reversal)? {
            return Err(Error::NotInvertible(
                "reversal is not a homeomorphism".into(),
            ));
        }
        Ok(IntervalModel {
            space,
            e0,
            e1,
            reversal,
            level: None,
        })
    }

    pub fn space(&self) -> &BitopSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn e0(&self) -> usize {
        self.e0
    }

    pub fn e1(&self) -> usize {
        self.e1
    }

    pub fn reversal(&self) -> &PointMap {
        &self.reversal
    }

    pub fn level(&self) -> Option<usize> {
        self.level
    }

    pub fn is_endpoint(&self, p: usize) -> bool {
        p == self.e0 || p == self.e1
    }

    pub fn interior(&self) -> PointSet {
        PointSet::full(self.n()).without(self.e0).without(self.e1)
    }

    /// The continuous surjection from this (finer) standard model onto a
    /// coarser one: fine subinterval `j` goes to coarse subinterval
    /// `⌈j·k/k'⌉`; a fine cut point between two subintervals with the same
    /// image goes there too, otherwise to the coarse cut point between them.
    pub fn quotient_onto(&self, coarse: &IntervalModel) -> Result<PointMap> {
        let (Some(fine_k), Some(coarse_k)) = (self.level, coarse.level) else {
            return Err(Error::Invalid(
                "quotients exist between standard models only".into(),
            ));
        };
        if fine_k < coarse_k {
            return Err(Error::Invalid(format!(
                "cannot map level {fine_k} onto finer level {coarse_k}"
            )));
        }
        let sub = |j: usize| (j * coarse_k).div_ceil(fine_k); // 1-based coarse subinterval
        let table = (0..self.n())
            .map(|p| {
                if p == 0 {
                    0
                } else if p == self.n() - 1 {
                    coarse.n() - 1
                } else if p % 2 == 1 {
                    2 * sub(p.div_ceil(2)) - 1
                } else {
                    let i = p / 2;
                    let (left, right) = (sub(i), sub(i + 1));
                    if left == right {
                        2 * left - 1
                    } else {
                        2 * left
                    }
                }
            })
            .collect();
        let q = PointMap::new(coarse.n(), table)?;
        debug_assert!(is_pairwise_continuous(&self.space, &coarse.space, &q)?.holds);
        Ok(q)
    }
}
