//! Instance documents: spaces with explicit open-set lists, maps, homotopy
//! tables and claims with declared expectations.

use std::collections::BTreeMap;

use btds_core::dynamics::{compose, is_continuous, is_pairwise_continuous};
use btds_core::homotopy::{
    search_with_escalation, standard_interval, verify_btds_homotopy, SearchOutcome, SearchProblem,
};
use btds_core::selection::{
    context_library, decide_classical, decide_h_property, decide_ph_property, ClassicalProperty,
    SelectionContext, SelectionReport,
};
use btds_core::{
    BitopSpace, FiniteTopology, HProperty, Homotopy, PointMap, PointSet, SelectionOptions,
    TopologyIndex,
};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::predicate::normalize;
use crate::props::{axiom_values, AXIOMS};
use crate::witness::{HomotopyRecord, SpaceRecord, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub name: String,
    #[serde(default)]
    pub anchor: Option<String>,
    #[serde(default = "one")]
    pub interval_k: usize,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceDoc>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub homotopies: BTreeMap<String, HomotopyDoc>,
    #[serde(default)]
    pub claims: Vec<Claim>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub t1: TopologyDoc,
    pub t2: TopologyDoc,
}

/// `"discrete"`, `"indiscrete"`, or the list of open sets by point label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologyDoc {
    Named(String),
    Opens(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub from: String,
    pub to: String,
    /// Image of each domain point, in the domain's point order.
    pub values: Vec<String>,
}

/// A BTDS-homotopy between `f` on `x` and `g` on `y` through `bridge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    pub x: String,
    pub y: String,
    pub f: String,
    pub g: String,
    pub bridge: String,
    /// Interval level; the document's `interval_k` when absent.
    #[serde(default)]
    pub k: Option<usize>,
    /// One row per point of `x`, one column per point of the interval model.
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    #[serde(default)]
    pub expect: Option<bool>,
    #[serde(flatten)]
    pub body: ClaimBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimBody {
    /// Continuity at one topology index (1 or 2).
    Continuous {
        map: String,
        index: u8,
    },
    PairwiseContinuous {
        map: String,
    },
    Composition {
        outer: String,
        inner: String,
        #[serde(default)]
        expect_values: Option<Vec<String>>,
    },
    BtdsHomotopy {
        homotopy: String,
        #[serde(default)]
        expect_boundary: Option<bool>,
        #[serde(default)]
        expect_continuity: Option<bool>,
    },
    /// Whether some homotopy exists up to the configured interval level.
    HomotopySearch {
        f: String,
        g: String,
        bridge: String,
        #[serde(default)]
        k_cap: Option<usize>,
    },
    Separation {
        space: String,
        axiom: String,
    },
    /// A selection property. Anchored ones name a context: `point:<label>`,
    /// `identity`, or `homotopy:<name>`.
    Property {
        space: String,
        property: String,
        #[serde(default)]
        context: Option<String>,
    },
}

impl ClaimBody {
    pub fn kind(&self) -> &'static str {
        match self {
            ClaimBody::Continuous { .. } => "continuous",
            ClaimBody::PairwiseContinuous { .. } => "pairwise_continuous",
            ClaimBody::Composition { .. } => "composition",
            ClaimBody::BtdsHomotopy { .. } => "btds_homotopy",
            ClaimBody::HomotopySearch { .. } => "homotopy_search",
            ClaimBody::Separation { .. } => "separation",
            ClaimBody::Property { .. } => "property",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedSpace {
    pub labels: Vec<String>,
    pub space: BitopSpace,
}

impl LoadedSpace {
    fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label_set(&self, s: PointSet) -> Vec<String> {
        s.iter().map(|p| self.labels[p].clone()).collect()
    }

    fn labels_of(&self, points: &[usize]) -> Vec<String> {
        points.iter().map(|&p| self.labels[p].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedMap {
    pub from: String,
    pub to: String,
    pub map: PointMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedHomotopy {
    pub doc: HomotopyDoc,
    pub h: Homotopy,
}

/// A validated document: every reference resolves and every shape fits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub doc: InstanceDoc,
    pub spaces: BTreeMap<String, LoadedSpace>,
    pub maps: BTreeMap<String, LoadedMap>,
    pub homotopies: BTreeMap<String, LoadedHomotopy>,
}

fn parse_err(msg: impl Into<String>) -> LabError {
    LabError::Parse(msg.into())
}

fn load_topology(
    name: &str,
    labels: &[String],
    doc: &TopologyDoc,
    strict: bool,
) -> Result<FiniteTopology> {
    let n = labels.len();
    match doc {
        TopologyDoc::Named(s) if s == "discrete" => Ok(FiniteTopology::discrete(n)),
        TopologyDoc::Named(s) if s == "indiscrete" => Ok(FiniteTopology::indiscrete(n)),
        TopologyDoc::Named(s) => Err(parse_err(format!("{name}: unknown topology '{s}'"))),
        TopologyDoc::Opens(sets) => {
            let mut family = Vec::new();
            for set in sets {
                let mut u = PointSet::EMPTY;
                for label in set {
                    let p = labels
                        .iter()
                        .position(|l| l == label)
                        .ok_or_else(|| parse_err(format!("{name}: unknown point '{label}'")))?;
                    u = u.with(p);
                }
                family.push(u);
            }
            FiniteTopology::from_open_family(n, &family, strict)
                .map_err(|e| parse_err(format!("{name}: {e}")))
        }
    }
}

impl Instance {
    pub fn parse(text: &str, strict: bool) -> Result<Self> {
        let doc: InstanceDoc = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        Instance::load(doc, strict)
    }

    pub fn load(doc: InstanceDoc, strict: bool) -> Result<Self> {
        let mut spaces = BTreeMap::new();
        for (name, s) in &doc.spaces {
            if s.points.is_empty() {
                return Err(parse_err(format!("space {name} has no points")));
            }
            let mut sorted = s.points.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != s.points.len() {
                return Err(parse_err(format!("space {name} repeats a point label")));
            }
            let t1 = load_topology(&format!("{name}.t1"), &s.points, &s.t1, strict)?;
            let t2 = load_topology(&format!("{name}.t2"), &s.points, &s.t2, strict)?;
            spaces.insert(
                name.clone(),
                LoadedSpace {
                    labels: s.points.clone(),
                    space: BitopSpace::new(t1, t2)?,
                },
            );
        }
        let space = |name: &str| -> Result<&LoadedSpace> {
            spaces
                .get(name)
                .ok_or_else(|| parse_err(format!("unknown space '{name}'")))
        };
        let mut maps = BTreeMap::new();
        for (name, m) in &doc.maps {
            let (from, to) = (space(&m.from)?, space(&m.to)?);
            if m.values.len() != from.labels.len() {
                return Err(parse_err(format!(
                    "map {name} lists {} values for {} points",
                    m.values.len(),
                    from.labels.len()
                )));
            }
            let table = m
                .values
                .iter()
                .map(|v| {
                    to.index_of(v).ok_or_else(|| {
                        parse_err(format!("map {name}: '{v}' is not a point of {}", m.to))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            maps.insert(
                name.clone(),
                LoadedMap {
                    from: m.from.clone(),
                    to: m.to.clone(),
                    map: PointMap::new(to.labels.len(), table)?,
                },
            );
        }
        let map = |name: &str| -> Result<&LoadedMap> {
            maps.get(name)
                .ok_or_else(|| parse_err(format!("unknown map '{name}'")))
        };
        let mut homotopies = BTreeMap::new();
        for (name, hd) in &doc.homotopies {
            let (x, y) = (space(&hd.x)?, space(&hd.y)?);
            let (f, g, bridge) = (map(&hd.f)?, map(&hd.g)?, map(&hd.bridge)?);
            let fits = |m: &LoadedMap, a: &str, b: &str| m.from == a && m.to == b;
            if !fits(f, &hd.x, &hd.x) || !fits(g, &hd.y, &hd.y) || !fits(bridge, &hd.x, &hd.y) {
                return Err(parse_err(format!(
                    "homotopy {name}: f must map {0}→{0}, g {1}→{1} and the bridge {0}→{1}",
                    hd.x, hd.y
                )));
            }
            let interval = standard_interval(hd.k.unwrap_or(doc.interval_k))?;
            if hd.rows.len() != x.labels.len() || hd.rows.iter().any(|r| r.len() != interval.n()) {
                return Err(parse_err(format!(
                    "homotopy {name}: expected {} rows of {} values",
                    x.labels.len(),
                    interval.n()
                )));
            }
            let mut table = Vec::new();
            for row in &hd.rows {
                for v in row {
                    table.push(y.index_of(v).ok_or_else(|| {
                        parse_err(format!("homotopy {name}: '{v}' is not a point of {}", hd.y))
                    })?);
                }
            }
            let h = Homotopy::new(
                x.space.clone(),
                y.space.clone(),
                interval,
                bridge.map.clone(),
                table,
            )?;
            homotopies.insert(name.clone(), LoadedHomotopy { doc: hd.clone(), h });
        }
        let inst = Instance {
            doc,
            spaces,
            maps,
            homotopies,
        };
        inst.check_claims()?;
        Ok(inst)
    }

    fn space(&self, name: &str) -> Result<&LoadedSpace> {
        self.spaces
            .get(name)
            .ok_or_else(|| parse_err(format!("unknown space '{name}'")))
    }

    fn map(&self, name: &str) -> Result<&LoadedMap> {
        self.maps
            .get(name)
            .ok_or_else(|| parse_err(format!("unknown map '{name}'")))
    }

    fn homotopy(&self, name: &str) -> Result<&LoadedHomotopy> {
        self.homotopies
            .get(name)
            .ok_or_else(|| parse_err(format!("unknown homotopy '{name}'")))
    }

    /// References resolve and every claim is over an implemented predicate.
    fn check_claims(&self) -> Result<()> {
        for c in &self.doc.claims {
            let ctx = |m: String| parse_err(format!("claim {}: {m}", c.id));
            match &c.body {
                ClaimBody::Continuous { map, index } => {
                    self.map(map).map_err(|e| ctx(e.to_string()))?;
                    TopologyIndex::from_number(*index)
                        .ok_or_else(|| ctx("index must be 1 or 2".into()))?;
                }
                ClaimBody::PairwiseContinuous { map } => {
                    self.map(map).map_err(|e| ctx(e.to_string()))?;
                }
                ClaimBody::Composition { outer, inner, .. } => {
                    let (o, i) = (self.map(outer)?, self.map(inner)?);
                    if i.to != o.from {
                        return Err(ctx(format!(
                            "{inner} lands in {}, {outer} starts at {}",
                            i.to, o.from
                        )));
                    }
                }
                ClaimBody::BtdsHomotopy { homotopy, .. } => {
                    self.homotopy(homotopy).map_err(|e| ctx(e.to_string()))?;
                }
                ClaimBody::HomotopySearch { f, g, bridge, .. } => {
                    let (f, g, b) = (self.map(f)?, self.map(g)?, self.map(bridge)?);
                    if f.from != f.to || g.from != g.to || b.from != f.from || b.to != g.from {
                        return Err(ctx("maps do not form f: X→X, g: Y→Y, F: X→Y".into()));
                    }
                }
                ClaimBody::Separation { space, axiom } => {
                    self.space(space).map_err(|e| ctx(e.to_string()))?;
                    if !AXIOMS.contains(&normalize(axiom).as_str()) {
                        return Err(ctx(format!("unknown axiom '{axiom}'")));
                    }
                }
                ClaimBody::Property {
                    space,
                    property,
                    context,
                } => {
                    let s = self.space(space).map_err(|e| ctx(e.to_string()))?;
                    match parse_property(property)
                        .ok_or_else(|| ctx(format!("unknown property '{property}'")))?
                    {
                        PropertyRef::Classical(_) => {}
                        PropertyRef::H(_) | PropertyRef::Ph(_) => {
                            let c = context
                                .as_deref()
                                .ok_or_else(|| ctx("anchored property needs a context".into()))?;
                            self.context_ref(s, space, c)
                                .map_err(|e| ctx(e.to_string()))?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn context_ref(&self, s: &LoadedSpace, space: &str, c: &str) -> Result<ContextRef> {
        if c == "identity" {
            return Ok(ContextRef::Library("identity".into()));
        }
        if let Some(label) = c.strip_prefix("point:") {
            let p = s
                .index_of(label)
                .ok_or_else(|| parse_err(format!("context {c}: no such point")))?;
            return Ok(ContextRef::Library(format!("point:{p}")));
        }
        if let Some(name) = c.strip_prefix("homotopy:") {
            let h = self.homotopy(name)?;
            if h.doc.y != space {
                return Err(parse_err(format!(
                    "context {c} lands in {}, not {space}",
                    h.doc.y
                )));
            }
            return Ok(ContextRef::Homotopy(name.into()));
        }
        Err(parse_err(format!("unknown context '{c}'")))
    }
}

enum ContextRef {
    Library(String),
    Homotopy(String),
}

#[derive(Clone, Copy)]
enum PropertyRef {
    H(HProperty),
    Ph(HProperty),
    Classical(ClassicalProperty),
}

fn parse_property(name: &str) -> Option<PropertyRef> {
    let n = normalize(name).replace('_', "-");
    if let Some(rest) = n.strip_prefix("ph-") {
        return HProperty::from_name(rest).map(PropertyRef::Ph);
    }
    if let Some(rest) = n.strip_prefix("h-") {
        return HProperty::from_name(rest).map(PropertyRef::H);
    }
    ClassicalProperty::ALL
        .into_iter()
        .find(|c| c.name() == n)
        .map(PropertyRef::Classical)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Match,
    Mismatch,
    /// No expectation declared, or the tool could not decide.
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub kind: String,
    pub verdict: Option<bool>,
    pub expected: Option<bool>,
    pub status: ClaimStatus,
    pub method: String,
    pub detail: String,
    /// Map values, for compositions, as point labels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    /// The witnessing open set, as point labels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_open: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub claims: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub unchecked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub instance: String,
    pub anchor: Option<String>,
    pub claims: Vec<ClaimResult>,
    pub summary: CheckSummary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub selection: SelectionOptions,
    pub k_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            selection: SelectionOptions::default(),
            k_cap: btds_core::homotopy::DEFAULT_K_CAP,
        }
    }
}

struct Outcome {
    verdict: Option<bool>,
    method: &'static str,
    detail: String,
    values: Option<Vec<String>>,
    witness_open: Option<Vec<String>>,
    witness: Option<Witness>,
    disagreements: Vec<String>,
}

impl Outcome {
    fn new(verdict: Option<bool>, method: &'static str, detail: String) -> Self {
        Outcome {
            verdict,
            method,
            detail,
            values: None,
            witness_open: None,
            witness: None,
            disagreements: Vec::new(),
        }
    }
}

fn expect_field(name: &str, want: Option<bool>, got: bool, out: &mut Vec<String>) {
    if let Some(w) = want {
        if w != got {
            out.push(format!("{name}: expected {w}, found {got}"));
        }
    }
}

/// Evaluates every claim in document order.
pub fn check(inst: &Instance, opts: &CheckOptions) -> Result<CheckReport> {
    let mut claims = Vec::new();
    let mut summary = CheckSummary::default();
    for c in &inst.doc.claims {
        let o = evaluate(inst, &c.body, opts)?;
        let mut disagreements = o.disagreements;
        if let (Some(want), Some(got)) = (c.expect, o.verdict) {
            if want != got {
                disagreements.insert(0, format!("expected {want}, found {got}"));
            }
        }
        let declared =
            c.expect.is_some() || !disagreements.is_empty() || has_field_expectation(&c.body);
        let status = if !disagreements.is_empty() {
            ClaimStatus::Mismatch
        } else if declared && (o.verdict.is_some() || c.expect.is_none()) {
            ClaimStatus::Match
        } else {
            ClaimStatus::Unchecked
        };
        match status {
            ClaimStatus::Match => summary.matches += 1,
            ClaimStatus::Mismatch => summary.mismatches += 1,
            ClaimStatus::Unchecked => summary.unchecked += 1,
        }
        claims.push(ClaimResult {
            id: c.id.clone(),
            kind: c.body.kind().into(),
            verdict: o.verdict,
            expected: c.expect,
            status,
            method: o.method.into(),
            detail: o.detail,
            values: o.values,
            witness_open: o.witness_open,
            witness: o.witness,
            disagreements,
        });
    }
    summary.claims = claims.len();
    Ok(CheckReport {
        instance: inst.doc.name.clone(),
        anchor: inst.doc.anchor.clone(),
        claims,
        summary,
    })
}

fn has_field_expectation(body: &ClaimBody) -> bool {
    match body {
        ClaimBody::Composition { expect_values, .. } => expect_values.is_some(),
        ClaimBody::BtdsHomotopy {
            expect_boundary,
            expect_continuity,
            ..
        } => expect_boundary.is_some() || expect_continuity.is_some(),
        _ => false,
    }
}

fn evaluate(inst: &Instance, body: &ClaimBody, opts: &CheckOptions) -> Result<Outcome> {
    Ok(match body {
        ClaimBody::Continuous { map, index } => {
            let m = inst.map(map)?;
            let (src, dst) = (inst.space(&m.from)?, inst.space(&m.to)?);
            let i = TopologyIndex::from_number(*index).expect("checked on load");
            let v = is_continuous(src.space.topology(i), dst.space.topology(i), &m.map)?;
            continuity_outcome(src, dst, &m.map, v.witness.map(|open| (i, open)))
        }
        ClaimBody::PairwiseContinuous { map } => {
            let m = inst.map(map)?;
            let (src, dst) = (inst.space(&m.from)?, inst.space(&m.to)?);
            let v = is_pairwise_continuous(&src.space, &dst.space, &m.map)?;
            continuity_outcome(src, dst, &m.map, v.witness.map(|w| (w.index, w.open)))
        }
        ClaimBody::Composition {
            outer,
            inner,
            expect_values,
        } => {
            let (o, i) = (inst.map(outer)?, inst.map(inner)?);
            let c = compose(&o.map, &i.map)?;
            let values = inst.space(&o.to)?.labels_of(c.table());
            let verdict = expect_values.as_ref().map(|e| *e == values);
            let mut out = Outcome::new(
                verdict,
                "table",
                format!("{outer}∘{inner} = [{}]", values.join(", ")),
            );
            if verdict == Some(false) {
                out.disagreements.push(format!(
                    "values: expected [{}]",
                    expect_values.as_ref().expect("present").join(", ")
                ));
            }
            out.values = Some(values);
            out
        }
        ClaimBody::BtdsHomotopy {
            homotopy,
            expect_boundary,
            expect_continuity,
        } => {
            let lh = inst.homotopy(homotopy)?;
            let (f, g) = (&inst.map(&lh.doc.f)?.map, &inst.map(&lh.doc.g)?.map);
            let v = verify_btds_homotopy(&lh.h, f, g)?;
            let start = compose(lh.h.bridge(), f)?.table().to_vec();
            let end = compose(g, lh.h.bridge())?.table().to_vec();
            let record = HomotopyRecord::of(&lh.h)?;
            let y = inst.space(&lh.doc.y)?;
            let x = inst.space(&lh.doc.x)?;
            let mut out = Outcome::new(
                Some(v.holds),
                "table",
                format!(
                    "boundary conditions {}, continuity on X × T {}",
                    if v.boundary_ok() { "hold" } else { "fail" },
                    if v.continuity_ok() { "holds" } else { "fails" }
                ),
            );
            if let Some(b) = v.boundary {
                out.detail += &format!(
                    "; cell ({}, t{}) is {} but should be {}",
                    x.labels[b.x], b.t, y.labels[b.actual], y.labels[b.expected]
                );
                out.witness = Some(Witness::HomotopyBoundary {
                    homotopy: record,
                    start,
                    end,
                    x: b.x,
                    t: b.t,
                    expected: b.expected,
                    actual: b.actual,
                });
            } else if let Some(w) = v.continuity {
                out.detail += &format!(
                    "; preimage of {{{}}} (topology {}) is not open",
                    y.label_set(w.open).join(", "),
                    w.index
                );
                out.witness_open = Some(y.label_set(w.open));
                out.witness = Some(Witness::HomotopyContinuityFailure {
                    homotopy: record,
                    index: w.index,
                    open: w.open.iter().collect(),
                });
            } else {
                out.witness = Some(Witness::HomotopyCertificate {
                    homotopy: record,
                    start,
                    end,
                });
            }
            expect_field(
                "boundary",
                *expect_boundary,
                v.boundary_ok(),
                &mut out.disagreements,
            );
            expect_field(
                "continuity",
                *expect_continuity,
                v.continuity_ok(),
                &mut out.disagreements,
            );
            out
        }
        ClaimBody::HomotopySearch {
            f,
            g,
            bridge,
            k_cap,
        } => {
            let (f, g, b) = (inst.map(f)?, inst.map(g)?, inst.map(bridge)?);
            let (x, y) = (inst.space(&f.from)?, inst.space(&g.from)?);
            let p = SearchProblem::btds(
                x.space.clone(),
                y.space.clone(),
                standard_interval(1)?,
                f.map.clone(),
                g.map.clone(),
                b.map.clone(),
            );
            let cap = k_cap.unwrap_or(opts.k_cap);
            match search_with_escalation(&p, cap)? {
                SearchOutcome::Found { homotopy, level } => {
                    let mut out = Outcome::new(
                        Some(true),
                        "search",
                        format!("homotopy found at level {}", level.unwrap_or(0)),
                    );
                    out.witness = Some(Witness::HomotopyCertificate {
                        homotopy: HomotopyRecord::of(&homotopy)?,
                        start: compose(&b.map, &f.map)?.table().to_vec(),
                        end: compose(&g.map, &b.map)?.table().to_vec(),
                    });
                    out
                }
                SearchOutcome::NotFound { .. } => Outcome::new(
                    None,
                    "search",
                    format!(
                        "no homotopy on interval models up to level {cap}; finer models untried"
                    ),
                ),
                SearchOutcome::Timeout { budget } => Outcome::new(
                    None,
                    "search",
                    format!("search budget of {budget} nodes exhausted"),
                ),
            }
        }
        ClaimBody::Separation { space, axiom } => {
            let s = inst.space(space)?;
            let vals = axiom_values(&s.space)?;
            let v = vals[&normalize(axiom)];
            Outcome::new(
                Some(v),
                "exhaustive",
                format!("{} on {space}: {v}", normalize(axiom)),
            )
        }
        ClaimBody::Property {
            space,
            property,
            context,
        } => {
            let s = inst.space(space)?;
            let sel = &opts.selection;
            let pref = parse_property(property).expect("checked on load");
            let ctx = match pref {
                PropertyRef::Classical(_) => None,
                PropertyRef::H(_) | PropertyRef::Ph(_) => {
                    let c = context.as_deref().expect("checked on load");
                    match resolve_context(inst, s, space, c, matches!(pref, PropertyRef::Ph(_)))? {
                        Ok(ctx) => Some(ctx),
                        Err(why) => return Ok(Outcome::new(None, "none", why)),
                    }
                }
            };
            let report = match (pref, &ctx) {
                (PropertyRef::Classical(c), _) => decide_classical(&s.space, c, sel)?,
                (PropertyRef::H(p), Some(ctx)) => decide_h_property(ctx, p, sel)?,
                (PropertyRef::Ph(p), Some(ctx)) => decide_ph_property(ctx, p, sel)?,
                _ => unreachable!("anchored properties always resolve a context"),
            };
            selection_outcome(s, &normalize(property), &report, sel)?
        }
    })
}

fn resolve_context(
    inst: &Instance,
    s: &LoadedSpace,
    space: &str,
    c: &str,
    path: bool,
) -> Result<std::result::Result<SelectionContext, String>> {
    match inst.context_ref(s, space, c)? {
        ContextRef::Library(name) => {
            let lib = context_library(&s.space)?
                .into_iter()
                .find(|l| l.name == name)
                .ok_or_else(|| LabError::Internal(format!("library lacks {name}")))?;
            Ok(Ok(if path { lib.ph } else { lib.h }))
        }
        ContextRef::Homotopy(_) if path => Ok(Err(format!(
            "context {c} is a BTDS homotopy; path properties need a path context"
        ))),
        ContextRef::Homotopy(name) => {
            let lh = inst.homotopy(&name)?;
            let (f, g) = (&inst.map(&lh.doc.f)?.map, &inst.map(&lh.doc.g)?.map);
            match SelectionContext::from_btds(c, &lh.h, f, g, false) {
                Ok(ctx) => Ok(Ok(ctx)),
                Err(btds_core::Error::Invalid(why)) => Ok(Err(why)),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn continuity_outcome(
    src: &LoadedSpace,
    dst: &LoadedSpace,
    map: &PointMap,
    failure: Option<(TopologyIndex, PointSet)>,
) -> Outcome {
    match failure {
        None => Outcome::new(
            Some(true),
            "exhaustive",
            "every open set pulls back to an open set".into(),
        ),
        Some((index, open)) => {
            let mut out = Outcome::new(
                Some(false),
                "exhaustive",
                format!(
                    "preimage of {{{}}} under topology {index} is {{{}}}, not open",
                    dst.label_set(open).join(", "),
                    src.label_set(map.preimage(open)).join(", ")
                ),
            );
            out.witness_open = Some(dst.label_set(open));
            out.witness = Some(Witness::ContinuityFailure {
                src: SpaceRecord::of(&src.space),
                dst: SpaceRecord::of(&dst.space),
                map: map.table().to_vec(),
                index,
                open: open.iter().collect(),
            });
            out
        }
    }
}

fn selection_outcome(
    s: &LoadedSpace,
    property: &str,
    report: &SelectionReport,
    sel: &SelectionOptions,
) -> Result<Outcome> {
    let method = match report.method {
        btds_core::selection::Method::Both => "characterization+oracle",
        btds_core::selection::Method::Characterization => "characterization",
        btds_core::selection::Method::Oracle => "oracle",
    };
    let Some(r) = report.refutation() else {
        return Ok(Outcome::new(
            Some(true),
            method,
            "a selection rule answers every cover".into(),
        ));
    };
    let cover: Vec<Vec<String>> = r.cover.members.iter().map(|&u| s.label_set(u)).collect();
    let mut out = Outcome::new(
        Some(false),
        method,
        format!(
            "repeating the topology-{} cover {cover:?} defeats every selection",
            r.source
        ),
    );
    out.witness = Some(Witness::SelectionRefutation {
        space: SpaceRecord::of(&s.space),
        property: property.into(),
        source: r.source,
        anchor: r.anchor,
        reading: sel.reading,
        openness: sel.openness,
        cover: r.cover.members.iter().map(|u| u.iter().collect()).collect(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = include_str!("fixtures/example_3_1.toml");

    fn example() -> Instance {
        Instance::parse(EXAMPLE, true).unwrap()
    }

    fn result<'a>(r: &'a CheckReport, id: &str) -> &'a ClaimResult {
        r.claims.iter().find(|c| c.id == id).unwrap()
    }

    #[test]
    fn fixture_loads_with_expected_shapes() {
        let inst = example();
        assert_eq!(inst.spaces["X"].space.n(), 4);
        assert_eq!(inst.spaces["Y"].space.n(), 3);
        assert_eq!(inst.maps["g"].map.table(), &[1, 2, 0]);
        assert_eq!(inst.homotopies["K"].h.table().len(), 12);
    }

    #[test]
    fn fixture_verdicts() {
        let r = check(&example(), &CheckOptions::default()).unwrap();
        let f = result(&r, "F-pairwise-continuous");
        assert_eq!((f.verdict, f.status), (Some(true), ClaimStatus::Match));
        let g = result(&r, "g-continuous-psi1");
        assert_eq!(g.verdict, Some(false));
        assert_eq!(g.status, ClaimStatus::Mismatch);
        assert_eq!(g.witness_open, Some(vec!["1".to_string()]));
        let ff = result(&r, "F-after-f");
        assert_eq!(ff.values.as_ref().unwrap(), &["1/2"; 4]);
        assert_eq!(ff.status, ClaimStatus::Match);
        let k = result(&r, "K-btds-homotopy");
        assert_eq!(k.disagreements.len(), 2, "{:?}", k.disagreements);
        assert!(k.disagreements.iter().all(|d| !d.starts_with("boundary")));
        let s = result(&r, "f-homotopic-to-g-via-F");
        assert_eq!(s.verdict, Some(true));
    }

    #[test]
    fn strict_rejects_non_topology() {
        let doc = r#"
            name = "bad"
            [spaces.S]
            points = ["a", "b"]
            t1 = [[], ["a"], ["b"], ["a", "b"], ["a"]]
            t2 = [[], ["a"], ["b"]]
        "#;
        assert!(matches!(
            Instance::parse(doc, true),
            Err(LabError::Parse(_))
        ));
        // Generated mode closes the family up instead.
        let inst = Instance::parse(doc, false).unwrap();
        assert!(inst.spaces["S"].space.t2().is_discrete());
    }

    #[test]
    fn dangling_references_rejected() {
        let doc = r#"
            name = "dangling"
            [[claims]]
            id = "c"
            kind = "pairwise_continuous"
            map = "nope"
        "#;
        assert!(matches!(
            Instance::parse(doc, true),
            Err(LabError::Parse(_))
        ));
        let unknown_kind = "name = \"x\"\n[[claims]]\nid = \"c\"\nkind = \"telepathy\"\n";
        assert!(Instance::parse(unknown_kind, true).is_err());
    }

    #[test]
    fn property_claims_with_contexts() {
        let doc = r#"
            name = "two"
            [spaces.S]
            points = ["a", "b"]
            t1 = "discrete"
            t2 = "indiscrete"

            [[claims]]
            id = "ar"
            kind = "property"
            space = "S"
            property = "H_almost_Rothberger"
            context = "point:a"
            expect = true

            [[claims]]
            id = "r"
            kind = "property"
            space = "S"
            property = "H-Rothberger"
            context = "point:a"
            expect = false

            [[claims]]
            id = "d2"
            kind = "property"
            space = "S"
            property = "delta2_menger"

            [[claims]]
            id = "t1"
            kind = "separation"
            space = "S"
            axiom = "pairwise_T1"
            expect = false
        "#;
        let r = check(
            &Instance::parse(doc, true).unwrap(),
            &CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(r.summary.matches, 3);
        assert_eq!(r.summary.unchecked, 1);
        let refuted = result(&r, "r");
        assert_eq!(refuted.method, "characterization+oracle");
        assert!(matches!(
            refuted.witness,
            Some(Witness::SelectionRefutation { .. })
        ));
        let d2 = result(&r, "d2");
        assert_eq!(d2.verdict, Some(false));
    }
}
