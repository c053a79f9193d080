//! Homotopy-anchored Rothberger and Menger selection properties.
//!
//! Every property is decided twice: by a closed-form characterization over
//! irredundant covers, and by a bounded oracle that plays the selection game
//! literally against eventually-constant cover sequences. The two must agree.

mod characterize;
mod classical;
mod context;
mod oracle;

pub use characterize::characterize;
pub use classical::{decide_classical, ClassicalProperty};
pub use context::{
    context_library, decide_h_property, decide_ph_property, decide_property, ContextKind,
    HProperty, LibraryContext, SelectionContext,
};
pub use oracle::{oracle_bounded, oracle_with_covers, OracleRefutation, OracleVerdict};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitop::BitopSpace;
use crate::error::{Error, Result};
use crate::fintop::{Cover, PointSet, TopologyIndex};

/// Oracle limits: nonempty opens in the source topology, irredundant covers,
/// and sets available to a single selection.
pub const ORACLE_OPEN_CAP: usize = 12;
pub const ORACLE_COVER_CAP: usize = 64;
pub const ORACLE_POOL_CAP: usize = 16;
/// Number of adversary sequences the oracle may enumerate.
pub const ORACLE_SEQUENCE_CAP: usize = 1 << 22;

/// The target family `ℬ` of a selection hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "source", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `𝒪ⱼ`: ψⱼ-open covers. Carries `j`.
    Open(TopologyIndex),
    /// `𝒪̄ᵢⱼ`: ψᵢ-open families whose ψⱼ-closures cover. Carries `i`.
    ClosureCover(TopologyIndex),
    /// `𝒪ᴰᵢⱼ`: ψᵢ-open families with ψⱼ-dense union. Carries `i`.
    DenseUnion(TopologyIndex),
}

impl FamilyKind {
    /// The index whose openness or closure the family is judged by.
    pub fn j(self) -> TopologyIndex {
        match self {
            FamilyKind::Open(j) => j,
            FamilyKind::ClosureCover(i) | FamilyKind::DenseUnion(i) => i.other(),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyKind::Open(j) => write!(f, "O_{j}"),
            FamilyKind::ClosureCover(i) => write!(f, "Obar_{i}{}", i.other()),
            FamilyKind::DenseUnion(i) => write!(f, "OD_{i}{}", i.other()),
        }
    }
}

/// Membership of `fam` in the family `kind` over `y`. Closure and dense
/// families additionally require ψᵢ-open members.
pub fn family_member(kind: FamilyKind, y: &BitopSpace, fam: &[PointSet]) -> bool {
    let full = y.full();
    let union = fam.iter().fold(PointSet::EMPTY, |a, &u| a.union(u));
    match kind {
        FamilyKind::Open(j) => fam.iter().all(|&u| y.topology(j).is_open(u)) && union == full,
        FamilyKind::ClosureCover(i) => {
            let tj = y.topology(i.other());
            fam.iter().all(|&u| y.topology(i).is_open(u))
                && fam
                    .iter()
                    .fold(PointSet::EMPTY, |a, &u| a.union(tj.closure(u)))
                    == full
        }
        FamilyKind::DenseUnion(i) => {
            fam.iter().all(|&u| y.topology(i).is_open(u))
                && y.topology(i.other()).closure(union) == full
        }
    }
}

/// `S₁` picks one set per cover, `S_fin` a finite subfamily.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    Single,
    Finite,
}

/// Where the end anchor must land: in every selected set (`S₁`) or selected
/// subfamily union (`S_fin`), or only somewhere in the overall selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnchorReading {
    #[default]
    PerSet,
    Union,
}

/// Whether a selection into `𝒪ⱼ` needs ψⱼ-open members or just a cover.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetOpenness {
    #[default]
    Strict,
    CoverOnly,
}

/// The sets a player may pick from a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pool {
    /// Members of the cover itself.
    Members,
    /// Nonempty opens of the given index refining some member.
    Refinements(TopologyIndex),
}

/// The start and end values `H(x, 0)`, `H(x, 1)` of one anchor point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Anchor {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionProblem {
    pub y: BitopSpace,
    pub source: TopologyIndex,
    pub target: FamilyKind,
    pub mode: SelectionMode,
    /// `None` for the classical, unanchored properties.
    pub anchors: Option<Vec<Anchor>>,
    pub pool: Pool,
    pub reading: AnchorReading,
    pub openness: TargetOpenness,
}

impl SelectionProblem {
    /// An anchored problem picking cover members.
    pub fn anchored(
        y: BitopSpace,
        source: TopologyIndex,
        target: FamilyKind,
        mode: SelectionMode,
        anchors: Vec<Anchor>,
    ) -> Result<Self> {
        let p = SelectionProblem {
            y,
            source,
            target,
            mode,
            anchors: Some(anchors),
            pool: Pool::Members,
            reading: AnchorReading::PerSet,
            openness: TargetOpenness::Strict,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_flags(mut self, reading: AnchorReading, openness: TargetOpenness) -> Self {
        self.reading = reading;
        self.openness = openness;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let source_ok = match self.target {
            FamilyKind::Open(j) => j != self.source,
            FamilyKind::ClosureCover(i) | FamilyKind::DenseUnion(i) => i == self.source,
        };
        if !source_ok {
            return Err(Error::Invalid(format!(
                "target {} does not pair with source index {}",
                self.target, self.source
            )));
        }
        if let Some(anchors) = &self.anchors {
            if anchors.is_empty() {
                return Err(Error::Invalid("anchor set must be nonempty".into()));
            }
            let n = self.y.n();
            if let Some(a) = anchors.iter().find(|a| a.start >= n || a.end >= n) {
                return Err(Error::OutOfRange {
                    point: a.start.max(a.end),
                    n,
                });
            }
        }
        Ok(())
    }

    /// Anchor slots to quantify over: one `None` for unanchored problems.
    pub(crate) fn slots(&self) -> Vec<Option<Anchor>> {
        match &self.anchors {
            Some(a) => {
                let mut a = a.clone();
                a.sort();
                a.dedup();
                a.into_iter().map(Some).collect()
            }
            None => vec![None],
        }
    }

    /// The sets selectable from `cover`.
    pub(crate) fn pool_of(&self, cover: &Cover) -> Vec<PointSet> {
        match self.pool {
            Pool::Members => cover.members.clone(),
            Pool::Refinements(k) => self
                .y
                .topology(k)
                .opens_uncapped()
                .into_iter()
                .filter(|v| !v.is_empty() && cover.members.iter().any(|&u| v.is_subset(u)))
                .collect(),
        }
    }

    /// Openness required of every selected set, if any.
    pub(crate) fn required_openness(&self) -> Option<TopologyIndex> {
        match (self.target, self.openness) {
            (FamilyKind::Open(j), TargetOpenness::Strict) => Some(j),
            _ => None,
        }
    }

    /// Target test given the union and the union of ψⱼ-closures of a
    /// family whose members already meet [`Self::required_openness`].
    pub(crate) fn target_met(&self, union: PointSet, closure_union: PointSet) -> bool {
        let full = self.y.full();
        match self.target {
            FamilyKind::Open(_) => union == full,
            FamilyKind::ClosureCover(_) => closure_union == full,
            FamilyKind::DenseUnion(i) => self.y.topology(i.other()).closure(union) == full,
        }
    }

    pub(crate) fn closure_j(&self, u: PointSet) -> PointSet {
        self.y.topology(self.target.j()).closure(u)
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Characterization,
    /// Characterization confirmed by the oracle.
    Both,
}

/// Options shared by every decider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionOptions {
    pub reading: AnchorReading,
    pub openness: TargetOpenness,
    /// Longest adversary prefix plus tail checked by the oracle; 0 disables it.
    pub oracle_len: usize,
    /// Point cap for cover enumeration.
    pub point_cap: usize,
    /// Accept contexts whose homotopy failed verification.
    pub force: bool,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            reading: AnchorReading::PerSet,
            openness: TargetOpenness::Strict,
            oracle_len: 2,
            point_cap: crate::fintop::DEFAULT_OPEN_CAP,
            force: false,
        }
    }
}

/// The chosen sets for one adversary cover and anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEntry {
    pub source: TopologyIndex,
    pub anchor: Option<Anchor>,
    pub cover: Cover,
    pub chosen: Vec<PointSet>,
}

/// A cover (or cover sequence) no selection can answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub source: TopologyIndex,
    pub anchor: Option<Anchor>,
    pub cover: Cover,
    /// The oracle's refuting sequence: prefix covers then the repeated tail.
    pub sequence: Option<Vec<Cover>>,
    /// A point outside what any admissible selection reaches.
    pub uncovered: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionWitness {
    Rule { entries: Vec<RuleEntry> },
    Refutation(Refutation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub verdict: bool,
    pub method: Method,
    pub witness: SelectionWitness,
}

impl SelectionReport {
    pub fn refutation(&self) -> Option<&Refutation> {
        match &self.witness {
            SelectionWitness::Refutation(r) => Some(r),
            SelectionWitness::Rule { .. } => None,
        }
    }

    /// Conjunction of per-direction reports; the first refutation wins.
    pub(crate) fn all(reports: Vec<SelectionReport>) -> SelectionReport {
        let method = if reports.iter().all(|r| r.method == Method::Both) {
            Method::Both
        } else {
            Method::Characterization
        };
        let mut entries = Vec::new();
        for r in reports {
            match r.witness {
                SelectionWitness::Refutation(_) => return SelectionReport { method, ..r },
                SelectionWitness::Rule { entries: e } => entries.extend(e),
            }
        }
        SelectionReport {
            verdict: true,
            method,
            witness: SelectionWitness::Rule { entries },
        }
    }
}

/// Whether the oracle can run on `p` within its caps.
fn oracle_in_caps(p: &SelectionProblem, covers: &[Cover]) -> bool {
    let opens = p.y.topology(p.source).opens_uncapped().len() - 1;
    opens <= ORACLE_OPEN_CAP
        && covers.len() <= ORACLE_COVER_CAP
        && covers.iter().all(|c| p.pool_of(c).len() <= ORACLE_POOL_CAP)
}

/// Decides one direction of a selection property. The characterization
/// always runs; within caps the oracle is run for every sequence length up
/// to `opts.oracle_len` and any disagreement is an error.
pub fn decide_selection(p: &SelectionProblem, opts: &SelectionOptions) -> Result<SelectionReport> {
    p.validate()?;
    let covers =
        p.y.topology(p.source)
            .enumerate_irredundant_covers(p.source, opts.point_cap)?;
    let mut report = characterize::characterize_over(p, &covers);
    if opts.oracle_len == 0 || !oracle_in_caps(p, &covers) {
        return Ok(report);
    }
    for len in 1..=opts.oracle_len {
        let o = oracle::oracle_with_covers(p, &covers, len)?;
        if o.holds != report.verdict {
            return Err(Error::OracleDisagreement(format!(
                "source {} target {} {:?}: characterization says {}, oracle at length {len} says {}",
                p.source, p.target, p.mode, report.verdict, o.holds
            )));
        }
        if let (SelectionWitness::Refutation(r), Some(or)) = (&mut report.witness, o.refutation) {
            if r.sequence.is_none() {
                r.sequence = Some(or.sequence());
            }
        }
    }
    report.method = Method::Both;
    Ok(report)
}
