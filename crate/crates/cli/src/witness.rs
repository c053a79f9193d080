//! Self-contained witnesses and their independent re-verification.
//!
//! A witness carries every table it talks about, as explicit open-set
//! lists and value tables, so it can be checked without the instance file
//! that produced it. Re-verification avoids the code path that found the
//! witness: continuity is rechecked by preimage membership in the listed
//! open families, homotopy continuity through neighbourhoods rebuilt from
//! those lists, and selection refutations by the bounded game rather than
//! the characterization.

use btds_core::homotopy::standard_interval;
use btds_core::selection::{oracle_with_covers, Anchor, ClassicalProperty, SelectionProblem};
use btds_core::{
    AnchorReading, BitopSpace, Cover, HProperty, PointSet, SelectionOptions, TargetOpenness,
    TopologyIndex,
};
use serde::{Deserialize, Serialize};

use crate::atlas::{opens_of, space_from_opens, AtlasRow};
use crate::error::{LabError, Result};
use crate::predicate::Predicate;
use crate::props::{axiom_values, oracle_values, property_names};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub n: usize,
    pub t1: Vec<Vec<usize>>,
    pub t2: Vec<Vec<usize>>,
}

impl SpaceRecord {
    pub fn of(y: &BitopSpace) -> Self {
        SpaceRecord {
            n: y.n(),
            t1: opens_of(y.t1()),
            t2: opens_of(y.t2()),
        }
    }

    pub fn space(&self) -> Result<BitopSpace> {
        space_from_opens(self.n, &self.t1, &self.t2)
    }

    fn family(&self, i: TopologyIndex) -> Vec<u64> {
        let fam = match i {
            TopologyIndex::First => &self.t1,
            TopologyIndex::Second => &self.t2,
        };
        fam.iter().map(|u| bits(u)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyRecord {
    pub x: SpaceRecord,
    pub y: SpaceRecord,
    /// Level of the standard interval model.
    pub k: usize,
    pub bridge: Vec<usize>,
    /// `rows[x][t]`.
    pub rows: Vec<Vec<usize>>,
}

impl HomotopyRecord {
    pub fn of(h: &btds_core::Homotopy) -> Result<Self> {
        let k = h
            .interval()
            .level()
            .ok_or_else(|| LabError::Internal("witness needs a standard interval model".into()))?;
        let tn = h.interval().n();
        Ok(HomotopyRecord {
            x: SpaceRecord::of(h.x()),
            y: SpaceRecord::of(h.y()),
            k,
            bridge: h.bridge().table().to_vec(),
            rows: h.table().chunks(tn).map(<[usize]>::to_vec).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `open` is open in `dst` at `index` but its preimage is not open in `src`.
    ContinuityFailure {
        src: SpaceRecord,
        dst: SpaceRecord,
        map: Vec<usize>,
        index: TopologyIndex,
        open: Vec<usize>,
    },
    /// Cell `(x, t)` holds `actual` where the boundary condition asks for `expected`.
    HomotopyBoundary {
        homotopy: HomotopyRecord,
        start: Vec<usize>,
        end: Vec<usize>,
        x: usize,
        t: usize,
        expected: usize,
        actual: usize,
    },
    /// The table is not continuous on `X × T` at `index`.
    HomotopyContinuityFailure {
        homotopy: HomotopyRecord,
        index: TopologyIndex,
        open: Vec<usize>,
    },
    /// A table meeting the boundary rows `start`, `end` and continuous.
    HomotopyCertificate {
        homotopy: HomotopyRecord,
        start: Vec<usize>,
        end: Vec<usize>,
    },
    /// Repeating `cover` forever defeats every selection for `property`.
    SelectionRefutation {
        space: SpaceRecord,
        property: String,
        source: TopologyIndex,
        anchor: Option<Anchor>,
        reading: AnchorReading,
        openness: TargetOpenness,
        cover: Vec<Vec<usize>>,
    },
    /// A sweep row, to be recomputed by the bounded game alone.
    InstanceRow {
        row: AtlasRow,
        predicate: Option<String>,
        oracle_len: usize,
        reading: AnchorReading,
        openness: TargetOpenness,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reverification {
    pub kind: String,
    pub confirmed: bool,
    pub detail: String,
}

fn bits(points: &[usize]) -> u64 {
    points.iter().fold(0, |acc, &p| acc | 1u64 << p)
}

/// Smallest listed open containing `p`.
fn min_nbhd(family: &[u64], n: usize, p: usize) -> u64 {
    family
        .iter()
        .filter(|&&u| u >> p & 1 == 1)
        .fold((1u64 << n) - 1, |acc, &u| acc & u)
}

/// Whether `set ⊆ X × T` (bit `x*tn + t`) is open in the product at one
/// index, with neighbourhoods read off the listed families.
fn product_open(fx: &[u64], xn: usize, ft: &[u64], tn: usize, set: u64) -> bool {
    (0..xn * tn).filter(|c| set >> c & 1 == 1).all(|c| {
        let (ux, ut) = (min_nbhd(fx, xn, c / tn), min_nbhd(ft, tn, c % tn));
        (0..xn * tn)
            .filter(|d| ux >> (d / tn) & 1 == 1 && ut >> (d % tn) & 1 == 1)
            .all(|d| set >> d & 1 == 1)
    })
}

/// First (index, open) of `y` whose preimage under the table is not open.
fn table_discontinuity(h: &HomotopyRecord) -> Result<Option<(TopologyIndex, u64)>> {
    let interval = standard_interval(h.k)?;
    let t = SpaceRecord::of(interval.space());
    let tn = interval.n();
    if h.rows.len() != h.x.n || h.rows.iter().any(|r| r.len() != tn) {
        return Err(LabError::Parse("homotopy table has the wrong shape".into()));
    }
    for i in TopologyIndex::BOTH {
        for v in h.y.family(i) {
            let pre = (0..h.x.n * tn)
                .filter(|c| v >> h.rows[c / tn][c % tn] & 1 == 1)
                .fold(0u64, |acc, c| acc | 1 << c);
            if !product_open(&h.x.family(i), h.x.n, &t.family(i), tn, pre) {
                return Ok(Some((i, v)));
            }
        }
    }
    Ok(None)
}

fn boundary_mismatch(
    h: &HomotopyRecord,
    start: &[usize],
    end: &[usize],
) -> Result<Option<(usize, usize)>> {
    let interval = standard_interval(h.k)?;
    for x in 0..h.x.n {
        for (t, want) in [(interval.e0(), start[x]), (interval.e1(), end[x])] {
            if h.rows[x][t] != want {
                return Ok(Some((x, t)));
            }
        }
    }
    Ok(None)
}

fn selection_problem(
    y: BitopSpace,
    property: &str,
    source: TopologyIndex,
    anchor: Option<Anchor>,
    reading: AnchorReading,
    openness: TargetOpenness,
) -> Result<SelectionProblem> {
    let name = property.replace('_', "-");
    if let Some(h) = name
        .strip_prefix("h-")
        .or_else(|| name.strip_prefix("ph-"))
        .and_then(HProperty::from_name)
    {
        let anchor =
            anchor.ok_or_else(|| LabError::Parse("anchored property without an anchor".into()))?;
        let p = SelectionProblem::anchored(y, source, h.target(source), h.mode(), vec![anchor])?;
        return Ok(p.with_flags(reading, openness));
    }
    ClassicalProperty::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .map(|c| c.problem(&y, source))
        .ok_or_else(|| LabError::Parse(format!("unknown selection property '{property}'")))
}

pub fn reverify(w: &Witness) -> Result<Reverification> {
    let (kind, confirmed, detail) = match w {
        Witness::ContinuityFailure {
            src,
            dst,
            map,
            index,
            open,
        } => {
            src.space()?;
            dst.space()?;
            if map.len() != src.n || map.iter().any(|&v| v >= dst.n) {
                return Err(LabError::Parse("map does not fit its spaces".into()));
            }
            let v = bits(open);
            let pre = (0..src.n)
                .filter(|&x| v >> map[x] & 1 == 1)
                .fold(0u64, |a, x| a | 1 << x);
            let listed = dst.family(*index).contains(&v);
            let preimage_open = src.family(*index).contains(&pre);
            (
                "continuity_failure",
                listed && !preimage_open,
                format!(
                    "{} open in topology {index}: {listed}; preimage {} open: {preimage_open}",
                    PointSet::from_bits(v),
                    PointSet::from_bits(pre)
                ),
            )
        }
        Witness::HomotopyBoundary {
            homotopy,
            start,
            end,
            x,
            t,
            expected,
            actual,
        } => {
            let interval = standard_interval(homotopy.k)?;
            let want = if *t == interval.e0() {
                start.get(*x)
            } else if *t == interval.e1() {
                end.get(*x)
            } else {
                None
            };
            let got = homotopy.rows.get(*x).and_then(|r| r.get(*t));
            let ok = want == Some(expected) && got == Some(actual) && expected != actual;
            (
                "homotopy_boundary",
                ok,
                format!("cell ({x},{t}) holds {got:?}, boundary asks {want:?}"),
            )
        }
        Witness::HomotopyContinuityFailure {
            homotopy,
            index,
            open,
        } => {
            homotopy.x.space()?;
            homotopy.y.space()?;
            let found = table_discontinuity(homotopy)?;
            let v = bits(open);
            let tn = 2 * homotopy.k + 1;
            let pre = (0..homotopy.x.n * tn)
                .filter(|c| v >> homotopy.rows[c / tn][c % tn] & 1 == 1)
                .fold(0u64, |a, c| a | 1 << c);
            let named_fails = homotopy.y.family(*index).contains(&v)
                && !product_open(
                    &homotopy.x.family(*index),
                    homotopy.x.n,
                    &SpaceRecord::of(standard_interval(homotopy.k)?.space()).family(*index),
                    tn,
                    pre,
                );
            (
                "homotopy_continuity_failure",
                named_fails && found.is_some(),
                format!(
                    "preimage of {} at index {index} is not open",
                    PointSet::from_bits(v)
                ),
            )
        }
        Witness::HomotopyCertificate {
            homotopy,
            start,
            end,
        } => {
            homotopy.x.space()?;
            homotopy.y.space()?;
            if start.len() != homotopy.x.n || end.len() != homotopy.x.n {
                return Err(LabError::Parse(
                    "boundary rows have the wrong length".into(),
                ));
            }
            let boundary = boundary_mismatch(homotopy, start, end)?;
            let cont = table_discontinuity(homotopy)?;
            (
                "homotopy_certificate",
                boundary.is_none() && cont.is_none(),
                format!("boundary mismatch {boundary:?}, discontinuity {cont:?}"),
            )
        }
        Witness::SelectionRefutation {
            space,
            property,
            source,
            anchor,
            reading,
            openness,
            cover,
        } => {
            let y = space.space()?;
            let members: Vec<PointSet> =
                cover.iter().map(|u| u.iter().copied().collect()).collect();
            let cover = Cover::new(y.topology(*source), *source, members)?;
            let p = selection_problem(y, property, *source, *anchor, *reading, *openness)?;
            let v = oracle_with_covers(&p, &[cover], 1)?;
            (
                "selection_refutation",
                !v.holds,
                format!(
                    "{property} from topology {source}: constant sequence refutes: {}",
                    !v.holds
                ),
            )
        }
        Witness::InstanceRow {
            row,
            predicate,
            oracle_len,
            reading,
            openness,
        } => {
            let y = space_from_opens(row.n, &row.t1, &row.t2)?;
            let opts = SelectionOptions {
                reading: *reading,
                openness: *openness,
                ..SelectionOptions::default()
            };
            let mut fresh = oracle_values(
                &y,
                &row.h_anchors,
                &row.ph_anchors,
                &opts,
                (*oracle_len).max(1),
            )?;
            fresh.extend(axiom_values(&y)?);
            let mismatched: Vec<&String> = fresh
                .iter()
                .filter(|(k, v)| row.properties.get(*k) != Some(v))
                .map(|(k, _)| k)
                .collect();
            let pred_ok = match predicate {
                Some(src) => Predicate::parse(src, &property_names())?.eval(&fresh)?,
                None => true,
            };
            (
                "instance_row",
                mismatched.is_empty() && pred_ok,
                format!(
                    "row {}: mismatched {mismatched:?}, predicate holds {pred_ok}",
                    row.hash
                ),
            )
        }
    };
    Ok(Reverification {
        kind: kind.into(),
        confirmed,
        detail,
    })
}

/// Every witness found anywhere inside a JSON document or JSON-lines file.
pub fn collect_witnesses(text: &str) -> Result<Vec<Witness>> {
    let values: Vec<serde_json::Value> = match serde_json::from_str(text) {
        Ok(v) => vec![v],
        Err(_) => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| LabError::Parse(e.to_string())))
            .collect::<Result<_>>()?,
    };
    let mut out = Vec::new();
    for v in &values {
        walk(v, &mut out);
    }
    Ok(out)
}

fn walk(v: &serde_json::Value, out: &mut Vec<Witness>) {
    match v {
        serde_json::Value::Object(map) => {
            if map.contains_key("type") {
                if let Ok(w) = serde_json::from_value::<Witness>(v.clone()) {
                    out.push(w);
                    return;
                }
            }
            map.values().for_each(|c| walk(c, out));
        }
        serde_json::Value::Array(items) => items.iter().for_each(|c| walk(c, out)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use btds_core::{FiniteTopology, Homotopy, PointMap};

    fn sierpinski_pair() -> BitopSpace {
        let s = FiniteTopology::from_min_nbhd(vec![
            PointSet::from_points([0]),
            PointSet::from_points([0, 1]),
        ])
        .unwrap();
        BitopSpace::new(s.clone(), s).unwrap()
    }

    #[test]
    fn continuity_failure_confirmed_and_forgery_rejected() {
        let y = sierpinski_pair();
        let swap = vec![1, 0];
        let w = Witness::ContinuityFailure {
            src: SpaceRecord::of(&y),
            dst: SpaceRecord::of(&y),
            map: swap.clone(),
            index: TopologyIndex::First,
            open: vec![0],
        };
        assert!(reverify(&w).unwrap().confirmed);
        let forged = Witness::ContinuityFailure {
            src: SpaceRecord::of(&y),
            dst: SpaceRecord::of(&y),
            map: vec![0, 1],
            index: TopologyIndex::First,
            open: vec![0],
        };
        assert!(!reverify(&forged).unwrap().confirmed);
    }

    #[test]
    fn certificate_for_constant_homotopy() {
        let y = sierpinski_pair();
        let unit = standard_interval(1).unwrap();
        let id = PointMap::identity(2);
        let h = Homotopy::from_fn(y.clone(), y.clone(), unit, id, |x, _| x).unwrap();
        let rec = HomotopyRecord::of(&h).unwrap();
        let w = Witness::HomotopyCertificate {
            homotopy: rec.clone(),
            start: vec![0, 1],
            end: vec![0, 1],
        };
        assert!(reverify(&w).unwrap().confirmed);
        let mut bad = rec;
        bad.rows[0][1] = 1;
        let w = Witness::HomotopyCertificate {
            homotopy: bad,
            start: vec![0, 1],
            end: vec![0, 1],
        };
        assert!(!reverify(&w).unwrap().confirmed);
    }

    #[test]
    fn product_openness_matches_core_product() {
        let y = sierpinski_pair();
        let unit = standard_interval(1).unwrap();
        let prod = btds_core::homotopy::product(&y, unit.space()).unwrap();
        let x = SpaceRecord::of(&y);
        let t = SpaceRecord::of(unit.space());
        for set in 0u64..1 << 6 {
            for i in TopologyIndex::BOTH {
                assert_eq!(
                    product_open(&x.family(i), 2, &t.family(i), 3, set),
                    prod.space().topology(i).is_open(PointSet::from_bits(set))
                );
            }
        }
    }

    #[test]
    fn collects_nested_witnesses() {
        let y = sierpinski_pair();
        let w = Witness::ContinuityFailure {
            src: SpaceRecord::of(&y),
            dst: SpaceRecord::of(&y),
            map: vec![1, 0],
            index: TopologyIndex::First,
            open: vec![0],
        };
        let doc = serde_json::json!({"entries": [{"witness": w}, {"type": "not-a-witness"}]});
        let found = collect_witnesses(&doc.to_string()).unwrap();
        assert_eq!(found, vec![w]);
    }
}
