//! Bitopological spaces and pairwise separation axioms.
//!
//! Every checker reports a witness on failure so that sweeps can explain a
//! negative verdict instead of just counting it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fintop::{FiniteTopology, PointSet, TopologyIndex};

/// One ground set `0..n` carrying two topologies.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct BitopSpace {
    t1: FiniteTopology,
    t2: FiniteTopology,
}

/// Outcome of a predicate check. `witness` is set exactly when the check fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(w: W) -> Self {
        Verdict {
            holds: false,
            witness: Some(w),
        }
    }

    fn from_first_failure(w: Option<W>) -> Self {
        match w {
            Some(w) => Verdict::fail(w),
            None => Verdict::pass(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum SeparationWitness {
    /// No τ₁-open set holds `x` without `y`, or no τ₂-open set holds `y` without `x`.
    PairwiseT1 {
        x: usize,
        y: usize,
    },
    /// `x ∉ closed` (τᵢ-closed) cannot be separated from it.
    Regular {
        index: TopologyIndex,
        x: usize,
        closed: PointSet,
    },
    Hausdorff {
        x: usize,
        y: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop22Outcome {
    /// The hypotheses fail, nothing to check.
    Vacuous,
    Confirmed,
    /// A τ₁-open set that is not τ₂-open.
    Violated {
        open: PointSet,
    },
}

/// Verdicts for "pairwise regular + pairwise Hausdorff + τ₁ locally compact
/// w.r.t. τ₂ ⟹ τ₁ ⊆ τ₂" under the symmetric and the one-sided Hausdorff
/// readings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop22Report {
    pub symmetric: Prop22Outcome,
    pub one_sided: Prop22Outcome,
}

impl BitopSpace {
    pub fn new(t1: FiniteTopology, t2: FiniteTopology) -> Result<Self> {
        if t1.n() != t2.n() {
            return Err(Error::ShapeMismatch(format!(
                "topologies on {} and {} points",
                t1.n(),
                t2.n()
            )));
        }
        Ok(BitopSpace { t1, t2 })
    }

    pub fn discrete(n: usize) -> Self {
        BitopSpace {
            t1: FiniteTopology::discrete(n),
            t2: FiniteTopology::discrete(n),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        BitopSpace {
            t1: FiniteTopology::indiscrete(n),
            t2: FiniteTopology::indiscrete(n),
        }
    }

    pub fn n(&self) -> usize {
        self.t1.n()
    }

    pub fn full(&self) -> PointSet {
        self.t1.full()
    }

    pub fn t1(&self) -> &FiniteTopology {
        &self.t1
    }

    pub fn t2(&self) -> &FiniteTopology {
        &self.t2
    }

    pub fn topology(&self, i: TopologyIndex) -> &FiniteTopology {
        match i {
            TopologyIndex::First => &self.t1,
            TopologyIndex::Second => &self.t2,
        }
    }

    /// The same ground set with the two topologies exchanged.
    pub fn swapped(&self) -> Self {
        BitopSpace {
            t1: self.t2.clone(),
            t2: self.t1.clone(),
        }
    }

    pub fn is_pairwise_t1(&self) -> Verdict<SeparationWitness> {
        let n = self.n();
        let bad = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y)
            .find(|&(x, y)| self.t1.min_nbhd(x).contains(y) || self.t2.min_nbhd(y).contains(x));
        Verdict::from_first_failure(bad.map(|(x, y)| SeparationWitness::PairwiseT1 { x, y }))
    }

    /// τᵢ regular with respect to τⱼ. The defining condition and both
    /// reformulations (closure-nested neighbourhood, closure disjoint from the
    /// closed set) are evaluated by brute force over the open families and
    /// must agree.
    pub fn is_regular_wrt(&self, i: TopologyIndex) -> Result<Verdict<SeparationWitness>> {
        let ti = self.topology(i);
        let tj = self.topology(i.other());
        let n = self.n();
        let opens_i = ti.opens_uncapped();
        let opens_j = tj.opens_uncapped();
        let closed_i: Vec<PointSet> = opens_i.iter().map(|u| u.complement(n)).collect();

        let mut by_definition = None;
        let mut by_nested = true;
        let mut by_disjoint_closure = true;
        for x in 0..n {
            for &p in closed_i.iter().filter(|p| !p.contains(x)) {
                let separated = opens_i
                    .iter()
                    .filter(|u| u.contains(x))
                    .any(|&u| opens_j.iter().any(|&v| p.is_subset(v) && u.is_disjoint(v)));
                if !separated && by_definition.is_none() {
                    by_definition = Some((x, p));
                }
                let shrinks = opens_i
                    .iter()
                    .any(|&m| m.contains(x) && tj.closure(m).is_disjoint(p));
                by_disjoint_closure &= shrinks;
            }
            for &g in opens_i.iter().filter(|g| g.contains(x)) {
                let nested = opens_i
                    .iter()
                    .any(|&h| h.contains(x) && tj.closure(h).is_subset(g));
                by_nested &= nested;
            }
        }
        let holds = by_definition.is_none();
        if holds != by_nested || holds != by_disjoint_closure {
            return Err(Error::InternalEquivalenceViolation(format!(
                "regularity of topology {i}: definition={holds}, nested={by_nested}, \
                 disjoint-closure={by_disjoint_closure}"
            )));
        }
        Ok(Verdict::from_first_failure(by_definition.map(
            |(x, closed)| SeparationWitness::Regular {
                index: i,
                x,
                closed,
            },
        )))
    }

    pub fn is_pairwise_regular(&self) -> Result<Verdict<SeparationWitness>> {
        let first = self.is_regular_wrt(TopologyIndex::First)?;
        if !first.holds {
            return Ok(first);
        }
        self.is_regular_wrt(TopologyIndex::Second)
    }

    pub fn is_pairwise_t3(&self) -> Result<Verdict<SeparationWitness>> {
        let t1 = self.is_pairwise_t1();
        if !t1.holds {
            return Ok(t1);
        }
        self.is_pairwise_regular()
    }

    /// For `x ≠ y`: disjoint τ₁-open `U ∋ x` and τ₂-open `V ∋ y`, and disjoint
    /// τ₂-open `U' ∋ x` and τ₁-open `V' ∋ y`.
    pub fn is_pairwise_hausdorff(&self) -> Verdict<SeparationWitness> {
        let n = self.n();
        let bad = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y)
            .find(|&(x, y)| {
                !self.t1.min_nbhd(x).is_disjoint(self.t2.min_nbhd(y))
                    || !self.t2.min_nbhd(x).is_disjoint(self.t1.min_nbhd(y))
            });
        Verdict::from_first_failure(bad.map(|(x, y)| SeparationWitness::Hausdorff { x, y }))
    }

    /// Weaker reading: each unordered pair is separated by a τ₁-open set
    /// around one point and a disjoint τ₂-open set around the other, in at
    /// least one of the two assignments.
    pub fn is_pairwise_hausdorff_one_sided(&self) -> Verdict<SeparationWitness> {
        let n = self.n();
        let bad = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| {
                !self.t1.min_nbhd(x).is_disjoint(self.t2.min_nbhd(y))
                    && !self.t1.min_nbhd(y).is_disjoint(self.t2.min_nbhd(x))
            });
        Verdict::from_first_failure(bad.map(|(x, y)| SeparationWitness::Hausdorff { x, y }))
    }

    /// τᵢ locally compact with respect to τⱼ: each point has a τⱼ-neighbourhood
    /// that is τᵢ-compact. Its minimal τⱼ-neighbourhood is finite, hence compact.
    pub fn is_locally_compact_wrt(&self, i: TopologyIndex) -> bool {
        let tj = self.topology(i.other());
        (0..self.n()).all(|x| is_compact(tj.min_nbhd(x)))
    }

    pub fn is_pairwise_locally_compact(&self) -> bool {
        self.is_locally_compact_wrt(TopologyIndex::First)
            && self.is_locally_compact_wrt(TopologyIndex::Second)
    }

    /// Both topologies closed under countable unions of closed sets. On a
    /// finite space every such union is a finite one; checked directly.
    pub fn is_pairwise_p_space(&self) -> bool {
        TopologyIndex::BOTH.iter().all(|&i| {
            let t = self.topology(i);
            let closed: Vec<PointSet> = t
                .opens_uncapped()
                .into_iter()
                .map(|u| u.complement(t.n()))
                .collect();
            closed
                .iter()
                .all(|&a| closed.iter().all(|&b| t.is_closed(a.union(b))))
        })
    }

    /// Checks the inclusion `τ₁ ⊆ τ₂` whenever its hypotheses hold.
    pub fn check_prop_2_2(&self) -> Result<Prop22Report> {
        let regular = self.is_pairwise_regular()?.holds;
        let compact = self.is_locally_compact_wrt(TopologyIndex::First);
        let outcome = |hausdorff: bool| {
            if !(regular && hausdorff && compact) {
                return Prop22Outcome::Vacuous;
            }
            match self
                .t1
                .opens_uncapped()
                .into_iter()
                .find(|&u| !self.t2.is_open(u))
            {
                Some(open) => Prop22Outcome::Violated { open },
                None => Prop22Outcome::Confirmed,
            }
        };
        Ok(Prop22Report {
            symmetric: outcome(self.is_pairwise_hausdorff().holds),
            one_sided: outcome(self.is_pairwise_hausdorff_one_sided().holds),
        })
    }
}

fn is_compact(_finite_subset: PointSet) -> bool {
    true
}
