//! Homotopies of bitopological dynamical systems on finite interval models.
//!
//! The unit interval is replaced by a finite model receiving a continuous
//! quotient from `[0,1]`, so a homotopy verified here pulls back to a genuine
//! one on `X × [0,1]`. The converse does not hold: failing to find a table at
//! subdivision level `k` says nothing about the continuum.

mod interval;
mod product;
mod search;
mod verify;

pub use interval::{standard_interval, IntervalModel};
pub use product::{product, ProductSpace, MAX_PRODUCT_POINTS};
pub use search::{
    search_homotopy, search_with_escalation, SearchMode, SearchOutcome, SearchProblem,
    DEFAULT_K_CAP, DEFAULT_SEARCH_BUDGET,
};
pub use verify::{
    verify_btds_homotopy, verify_iteration_homotopy, verify_path_homotopy, verify_with_ends,
    BoundaryViolation, HomotopyVerdict,
};

use serde::{Deserialize, Serialize};

use crate::bitop::BitopSpace;
use crate::dynamics::{is_pairwise_continuous, PointMap};
use crate::error::{Error, Result};

/// A table `H: X × T → Y` together with the bridging map `F: X → Y`.
/// Construction only checks shapes; verification is a separate step so that
/// contested fixtures can be loaded as printed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homotopy {
    x: BitopSpace,
    y: BitopSpace,
    interval: IntervalModel,
    bridge: PointMap,
    /// Row-major: `table[x * |T| + t]`.
    table: Vec<usize>,
}

impl Homotopy {
    pub fn new(
        x: BitopSpace,
        y: BitopSpace,
        interval: IntervalModel,
        bridge: PointMap,
        table: Vec<usize>,
    ) -> Result<Self> {
        if bridge.dom_n() != x.n() || bridge.cod_n() != y.n() {
            return Err(Error::ShapeMismatch(format!(
                "bridge map {}→{} points between spaces of {} and {} points",
                bridge.dom_n(),
                bridge.cod_n(),
                x.n(),
                y.n()
            )));
        }
        let cells = x.n() * interval.n();
        if table.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "table has {} cells, expected {}",
                table.len(),
                cells
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= y.n()) {
            return Err(Error::OutOfRange {
                point: bad,
                n: y.n(),
            });
        }
        Ok(Homotopy {
            x,
            y,
            interval,
            bridge,
            table,
        })
    }

    /// Builds the table from a function of `(x, t)`.
    pub fn from_fn(
        x: BitopSpace,
        y: BitopSpace,
        interval: IntervalModel,
        bridge: PointMap,
        value: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let tn = interval.n();
        let table = (0..x.n() * tn).map(|c| value(c / tn, c % tn)).collect();
        Homotopy::new(x, y, interval, bridge, table)
    }

    pub fn x(&self) -> &BitopSpace {
        &self.x
    }

    pub fn y(&self) -> &BitopSpace {
        &self.y
    }

    pub fn interval(&self) -> &IntervalModel {
        &self.interval
    }

    pub fn bridge(&self) -> &PointMap {
        &self.bridge
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn value(&self, x: usize, t: usize) -> usize {
        self.table[x * self.interval.n() + t]
    }

    /// The row `t ↦ H(·, t)` at a fixed time, as a map `X → Y`.
    pub fn slice(&self, t: usize) -> PointMap {
        PointMap::new(
            self.y.n(),
            (0..self.x.n()).map(|x| self.value(x, t)).collect(),
        )
        .expect("table values are in range")
    }

    /// The table as a map on the product ground set.
    pub fn as_point_map(&self) -> PointMap {
        PointMap::new(self.y.n(), self.table.clone()).expect("table values are in range")
    }

    /// `H*(x, t) = H(x, r(t))` for the model's reversal `r`.
    pub fn reverse(&self) -> Homotopy {
        let r = self.interval.reversal();
        let mut out = self.clone();
        let tn = self.interval.n();
        for x in 0..self.x.n() {
            for t in 0..tn {
                out.table[x * tn + t] = self.value(x, r.apply(t));
            }
        }
        out
    }

    /// `G ∘ H`, landing in `z`, with bridge `G ∘ F`.
    pub fn post_compose(&self, g: &PointMap, z: &BitopSpace) -> Result<Homotopy> {
        if g.dom_n() != self.y.n() || g.cod_n() != z.n() {
            return Err(Error::ShapeMismatch(
                "post-composed map does not fit".into(),
            ));
        }
        let bridge = crate::dynamics::compose(g, &self.bridge)?;
        let table = self.table.iter().map(|&v| g.apply(v)).collect();
        Homotopy::new(
            self.x.clone(),
            z.clone(),
            self.interval.clone(),
            bridge,
            table,
        )
    }

    /// `H ∘ (F × id)` for `F: w → X`, with bridge `self.bridge ∘ F`.
    pub fn pre_compose(&self, f: &PointMap, w: &BitopSpace) -> Result<Homotopy> {
        if f.dom_n() != w.n() || f.cod_n() != self.x.n() {
            return Err(Error::ShapeMismatch("pre-composed map does not fit".into()));
        }
        let bridge = crate::dynamics::compose(&self.bridge, f)?;
        let interval = self.interval.clone();
        Homotopy::from_fn(w.clone(), self.y.clone(), interval, bridge, |x, t| {
            self.value(f.apply(x), t)
        })
    }

    /// Replaces the bridge map (the table is unchanged).
    pub fn with_bridge(&self, bridge: PointMap) -> Result<Homotopy> {
        Homotopy::new(
            self.x.clone(),
            self.y.clone(),
            self.interval.clone(),
            bridge,
            self.table.clone(),
        )
    }

    /// Runs `self` then `next` on a model of level `k₁ + k₂`; the end row of
    /// `self` must equal the start row of `next`.
    pub fn concatenate(&self, next: &Homotopy) -> Result<Homotopy> {
        let (k1, k2) = match (self.interval.level(), next.interval.level()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Invalid(
                    "concatenation needs standard interval models".into(),
                ))
            }
        };
        if self.x != next.x || self.y != next.y {
            return Err(Error::ShapeMismatch(
                "concatenated homotopies differ in spaces".into(),
            ));
        }
        let e1 = self.interval.e1();
        let e0 = next.interval.e0();
        if (0..self.x.n()).any(|x| self.value(x, e1) != next.value(x, e0)) {
            return Err(Error::Invalid(
                "end row of the first homotopy differs from start row of the second".into(),
            ));
        }
        let joined = standard_interval(k1 + k2)?;
        let split = 2 * k1;
        Homotopy::from_fn(
            self.x.clone(),
            self.y.clone(),
            joined,
            self.bridge.clone(),
            |x, t| {
                if t <= split {
                    self.value(x, t)
                } else {
                    next.value(x, t - split)
                }
            },
        )
    }

    /// Pulls the table back along the quotient from a finer standard model.
    pub fn refine(&self, fine: &IntervalModel) -> Result<Homotopy> {
        let q = fine.quotient_onto(&self.interval)?;
        Homotopy::from_fn(
            self.x.clone(),
            self.y.clone(),
            fine.clone(),
            self.bridge.clone(),
            |x, t| self.value(x, q.apply(t)),
        )
    }
}

/// A pairwise continuous map from an interval model with fixed endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitopPath {
    interval: IntervalModel,
    y: BitopSpace,
    map: PointMap,
}

impl BitopPath {
    pub fn new(interval: IntervalModel, y: BitopSpace, map: PointMap) -> Result<Self> {
        let v = is_pairwise_continuous(interval.space(), &y, &map)?;
        if let Some(w) = v.witness {
            return Err(Error::NotPairwiseContinuous(format!(
                "path: preimage of topology-{} open {} is not open",
                w.index, w.open
            )));
        }
        Ok(BitopPath { interval, y, map })
    }

    pub fn constant(interval: IntervalModel, y: BitopSpace, point: usize) -> Result<Self> {
        let map = PointMap::constant(interval.n(), y.n(), point)?;
        BitopPath::new(interval, y, map)
    }

    pub fn interval(&self) -> &IntervalModel {
        &self.interval
    }

    pub fn y(&self) -> &BitopSpace {
        &self.y
    }

    pub fn map(&self) -> &PointMap {
        &self.map
    }

    pub fn start(&self) -> usize {
        self.map.apply(self.interval.e0())
    }

    pub fn end(&self) -> usize {
        self.map.apply(self.interval.e1())
    }
}
