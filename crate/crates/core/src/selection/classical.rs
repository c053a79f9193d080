use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    decide_selection, AnchorReading, FamilyKind, Pool, SelectionMode, SelectionOptions,
    SelectionProblem, SelectionReport, TargetOpenness,
};
use crate::bitop::BitopSpace;
use crate::error::Result;
use crate::fintop::TopologyIndex;

/// Selection properties of a bitopological space with no homotopy attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalProperty {
    /// Finite τⱼ-open refinements of τᵢ-covers whose union is the space.
    Delta2Menger,
    /// Finite subfamilies with τⱼ-dense union.
    WeaklyMenger,
    /// Finite subfamilies whose τⱼ-closures cover.
    AlmostMenger,
    /// Single members whose τⱼ-closures cover.
    AlmostRothberger,
}

impl ClassicalProperty {
    pub const ALL: [ClassicalProperty; 4] = [
        ClassicalProperty::Delta2Menger,
        ClassicalProperty::WeaklyMenger,
        ClassicalProperty::AlmostMenger,
        ClassicalProperty::AlmostRothberger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalProperty::Delta2Menger => "delta2-menger",
            ClassicalProperty::WeaklyMenger => "weakly-menger",
            ClassicalProperty::AlmostMenger => "almost-menger",
            ClassicalProperty::AlmostRothberger => "almost-rothberger",
        }
    }

    /// The unanchored problem for covers from topology `i`.
    pub fn problem(self, y: &BitopSpace, i: TopologyIndex) -> SelectionProblem {
        let j = i.other();
        let (target, mode, pool) = match self {
            ClassicalProperty::Delta2Menger => (
                FamilyKind::Open(j),
                SelectionMode::Finite,
                Pool::Refinements(j),
            ),
            ClassicalProperty::WeaklyMenger => (
                FamilyKind::DenseUnion(i),
                SelectionMode::Finite,
                Pool::Members,
            ),
            ClassicalProperty::AlmostMenger => (
                FamilyKind::ClosureCover(i),
                SelectionMode::Finite,
                Pool::Members,
            ),
            ClassicalProperty::AlmostRothberger => (
                FamilyKind::ClosureCover(i),
                SelectionMode::Single,
                Pool::Members,
            ),
        };
        SelectionProblem {
            y: y.clone(),
            source: i,
            target,
            mode,
            anchors: None,
            pool,
            reading: AnchorReading::PerSet,
            openness: TargetOpenness::Strict,
        }
    }
}

impl fmt::Display for ClassicalProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Conjunction over both source indices. Anchor and openness flags in
/// `opts` do not apply here.
pub fn decide_classical(
    y: &BitopSpace,
    property: ClassicalProperty,
    opts: &SelectionOptions,
) -> Result<SelectionReport> {
    let reports = TopologyIndex::BOTH
        .into_iter()
        .map(|i| decide_selection(&property.problem(y, i), opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionReport::all(reports))
}
