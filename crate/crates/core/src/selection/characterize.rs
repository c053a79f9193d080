use super::{
    AnchorReading, Method, Refutation, RuleEntry, SelectionMode, SelectionProblem, SelectionReport,
    SelectionWitness,
};
use crate::error::Result;
use crate::fintop::{Cover, PointSet};

/// Closed-form decision. A cover repeated forever lets the player use every
/// admissible set, and any sequence over finitely many covers repeats one of
/// them forever, so the property holds iff each single cover, repeated,
/// admits a selection: the admissible sets meet the target and every
/// position has something to pick.
pub fn characterize(p: &SelectionProblem, point_cap: usize) -> Result<SelectionReport> {
    p.validate()?;
    let covers =
        p.y.topology(p.source)
            .enumerate_irredundant_covers(p.source, point_cap)?;
    Ok(characterize_over(p, &covers))
}

pub(crate) fn characterize_over(p: &SelectionProblem, covers: &[Cover]) -> SelectionReport {
    let mut entries = Vec::new();
    for anchor in p.slots() {
        for cover in covers {
            // The side condition is literal; it only fails for non-covers.
            if let Some(a) = anchor {
                if !cover.union().contains(a.start) {
                    continue;
                }
            }
            let eligible: Vec<PointSet> = p
                .pool_of(cover)
                .into_iter()
                .filter(|&u| match p.required_openness() {
                    Some(j) => p.y.topology(j).is_open(u),
                    None => true,
                })
                .collect();
            let end = anchor.map(|a| a.end);
            let hits = |u: &PointSet| end.is_none_or(|e| u.contains(e));
            let chosen: Vec<PointSet> = match (p.mode, p.reading, end) {
                (SelectionMode::Single, AnchorReading::PerSet, Some(_)) => {
                    eligible.iter().copied().filter(hits).collect()
                }
                _ => eligible.clone(),
            };
            let union = chosen.iter().fold(PointSet::EMPTY, |a, &u| a.union(u));
            let closure_union = chosen
                .iter()
                .fold(PointSet::EMPTY, |a, &u| a.union(p.closure_j(u)));
            let every_position_answerable = match (p.mode, p.reading) {
                (SelectionMode::Single, _) => !chosen.is_empty(),
                (SelectionMode::Finite, AnchorReading::PerSet) => chosen.iter().any(hits),
                (SelectionMode::Finite, AnchorReading::Union) => true,
            };
            let anchor_reached = end.is_none_or(|e| union.contains(e));
            let ok =
                every_position_answerable && anchor_reached && p.target_met(union, closure_union);
            if !ok {
                let reach = match p.target {
                    super::FamilyKind::ClosureCover(_) => closure_union,
                    super::FamilyKind::DenseUnion(i) => p.y.topology(i.other()).closure(union),
                    super::FamilyKind::Open(_) => union,
                };
                let uncovered = match end {
                    Some(e) if !every_position_answerable || !anchor_reached => Some(e),
                    _ => reach.complement(p.y.n()).first(),
                };
                return SelectionReport {
                    verdict: false,
                    method: Method::Characterization,
                    witness: SelectionWitness::Refutation(Refutation {
                        source: p.source,
                        anchor,
                        cover: cover.clone(),
                        sequence: None,
                        uncovered,
                    }),
                };
            }
            entries.push(RuleEntry {
                source: p.source,
                anchor,
                cover: cover.clone(),
                chosen,
            });
        }
    }
    SelectionReport {
        verdict: true,
        method: Method::Characterization,
        witness: SelectionWitness::Rule { entries },
    }
}
