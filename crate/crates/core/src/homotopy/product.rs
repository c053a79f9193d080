use serde::{Deserialize, Serialize};

use crate::bitop::BitopSpace;
use crate::dynamics::PointMap;
use crate::error::{Error, Result};
use crate::fintop::{FiniteTopology, PointSet, TopologyIndex, MAX_POINTS};

pub const MAX_PRODUCT_POINTS: usize = MAX_POINTS;

/// `left × right` with the componentwise product topology in each index.
/// Point `(a, b)` is stored at `a * right.n() + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpace {
    left: BitopSpace,
    right: BitopSpace,
    space: BitopSpace,
}

pub fn product(left: &BitopSpace, right: &BitopSpace) -> Result<ProductSpace> {
    let n = left.n() * right.n();
    if n > MAX_PRODUCT_POINTS {
        return Err(Error::CapExceeded {
            what: "product space",
            got: n,
            cap: MAX_PRODUCT_POINTS,
        });
    }
    let factor = |i: TopologyIndex| -> Result<FiniteTopology> {
        let (l, r) = (left.topology(i), right.topology(i));
        let rn = right.n();
        let min_nbhd = (0..n)
            .map(|p| {
                let (a, b) = (p / rn, p % rn);
                l.min_nbhd(a)
                    .iter()
                    .flat_map(|a2| r.min_nbhd(b).iter().map(move |b2| a2 * rn + b2))
                    .collect::<PointSet>()
            })
            .collect();
        FiniteTopology::from_min_nbhd(min_nbhd)
    };
    let space = BitopSpace::new(
        factor(TopologyIndex::First)?,
        factor(TopologyIndex::Second)?,
    )?;
    Ok(ProductSpace {
        left: left.clone(),
        right: right.clone(),
        space,
    })
}

impl ProductSpace {
    pub fn left(&self) -> &BitopSpace {
        &self.left
    }

    pub fn right(&self) -> &BitopSpace {
        &self.right
    }

    pub fn space(&self) -> &BitopSpace {
        &self.space
    }

    pub fn point(&self, a: usize, b: usize) -> usize {
        a * self.right.n() + b
    }

    pub fn coords(&self, p: usize) -> (usize, usize) {
        (p / self.right.n(), p % self.right.n())
    }

    pub fn left_projection(&self) -> PointMap {
        PointMap::new(
            self.left.n(),
            (0..self.space.n()).map(|p| self.coords(p).0).collect(),
        )
        .expect("projection lands in range")
    }

    pub fn right_projection(&self) -> PointMap {
        PointMap::new(
            self.right.n(),
            (0..self.space.n()).map(|p| self.coords(p).1).collect(),
        )
        .expect("projection lands in range")
    }
}
