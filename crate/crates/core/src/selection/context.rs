use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    decide_selection, Anchor, FamilyKind, SelectionMode, SelectionOptions, SelectionProblem,
    SelectionReport,
};
use crate::bitop::BitopSpace;
use crate::dynamics::PointMap;
use crate::error::{Error, Result};
use crate::fintop::TopologyIndex;
use crate::homotopy::{
    standard_interval, verify_btds_homotopy, verify_iteration_homotopy, verify_path_homotopy,
    BitopPath, Homotopy, HomotopyVerdict, IntervalModel,
};

/// The six anchored properties, shared by the H, PH and HI variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HProperty {
    Rothberger,
    AlmostRothberger,
    WeakRothberger,
    Menger,
    AlmostMenger,
    WeakMenger,
}

impl HProperty {
    pub const ALL: [HProperty; 6] = [
        HProperty::Rothberger,
        HProperty::AlmostRothberger,
        HProperty::WeakRothberger,
        HProperty::Menger,
        HProperty::AlmostMenger,
        HProperty::WeakMenger,
    ];

    pub fn mode(self) -> SelectionMode {
        match self {
            HProperty::Rothberger | HProperty::AlmostRothberger | HProperty::WeakRothberger => {
                SelectionMode::Single
            }
            _ => SelectionMode::Finite,
        }
    }

    /// Target family for covers from topology `i`.
    pub fn target(self, i: TopologyIndex) -> FamilyKind {
        match self {
            HProperty::Rothberger | HProperty::Menger => FamilyKind::Open(i.other()),
            HProperty::AlmostRothberger | HProperty::AlmostMenger => FamilyKind::ClosureCover(i),
            HProperty::WeakRothberger | HProperty::WeakMenger => FamilyKind::DenseUnion(i),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HProperty::Rothberger => "rothberger",
            HProperty::AlmostRothberger => "almost-rothberger",
            HProperty::WeakRothberger => "weak-rothberger",
            HProperty::Menger => "menger",
            HProperty::AlmostMenger => "almost-menger",
            HProperty::WeakMenger => "weak-menger",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        HProperty::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for HProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which homotopy notion the anchors come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextKind {
    /// `(H(x,0), H(x,1))` for every `x ∈ X`.
    H,
    /// `(H(m,0), H(m,1))` for interior points `m` of the path domain.
    Ph,
    /// `(H(x,0), H(x,1))` for points `x` on one forward orbit.
    Hi,
}

/// Anchors extracted from a homotopy, plus whether it verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionContext {
    pub kind: ContextKind,
    pub label: String,
    pub y: BitopSpace,
    pub anchors: Vec<Anchor>,
    pub verified: bool,
}

fn admit(verdict: HomotopyVerdict, force: bool, label: &str) -> Result<bool> {
    if !verdict.holds && !force {
        return Err(Error::Invalid(format!(
            "context {label}: homotopy does not verify ({verdict:?})"
        )));
    }
    Ok(verdict.holds)
}

fn anchor_rows(h: &Homotopy, rows: impl IntoIterator<Item = usize>) -> Vec<Anchor> {
    let (e0, e1) = (h.interval().e0(), h.interval().e1());
    let mut anchors: Vec<Anchor> = rows
        .into_iter()
        .map(|x| Anchor {
            start: h.value(x, e0),
            end: h.value(x, e1),
        })
        .collect();
    anchors.sort();
    anchors.dedup();
    anchors
}

impl SelectionContext {
    /// A BTDS-homotopy context; refused if `h` fails verification, unless
    /// `force`.
    pub fn from_btds(
        label: impl Into<String>,
        h: &Homotopy,
        f: &PointMap,
        g: &PointMap,
        force: bool,
    ) -> Result<Self> {
        let label = label.into();
        let verified = admit(verify_btds_homotopy(h, f, g)?, force, &label)?;
        Ok(SelectionContext {
            kind: ContextKind::H,
            label,
            y: h.y().clone(),
            anchors: anchor_rows(h, 0..h.x().n()),
            verified,
        })
    }

    /// An iteration-homotopy context anchored on the orbit points
    /// `x₁, x₂, …` of `x0`.
    pub fn from_iteration(
        label: impl Into<String>,
        h: &Homotopy,
        f: &PointMap,
        g: &PointMap,
        x0: usize,
        budget: usize,
        force: bool,
    ) -> Result<Self> {
        let label = label.into();
        let verified = admit(
            verify_iteration_homotopy(h, f, g, x0, budget)?,
            force,
            &label,
        )?;
        let mut rows = Vec::new();
        let mut xn = x0;
        while rows.len() < budget && !rows.contains(&f.apply(xn)) {
            xn = f.apply(xn);
            rows.push(xn);
        }
        Ok(SelectionContext {
            kind: ContextKind::Hi,
            label,
            y: h.y().clone(),
            anchors: anchor_rows(h, rows),
            verified,
        })
    }

    /// A path-homotopy context anchored on the interior of the path domain.
    pub fn from_path(
        label: impl Into<String>,
        h: &Homotopy,
        domain: &IntervalModel,
        f: &PointMap,
        g: &PointMap,
        path: &BitopPath,
        force: bool,
    ) -> Result<Self> {
        let label = label.into();
        let verified = admit(verify_path_homotopy(h, domain, f, g, path)?, force, &label)?;
        Ok(SelectionContext {
            kind: ContextKind::Ph,
            label,
            y: h.y().clone(),
            anchors: anchor_rows(h, domain.interior().iter()),
            verified,
        })
    }

    /// The conjunction of several contexts of one kind over the same space:
    /// its anchor set is the union of theirs.
    pub fn merged(label: impl Into<String>, parts: &[SelectionContext]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Invalid("nothing to merge".into()))?;
        if parts.iter().any(|c| c.kind != first.kind || c.y != first.y) {
            return Err(Error::ShapeMismatch(
                "merged contexts must share kind and space".into(),
            ));
        }
        let mut anchors: Vec<Anchor> = parts.iter().flat_map(|c| c.anchors.clone()).collect();
        anchors.sort();
        anchors.dedup();
        Ok(SelectionContext {
            kind: first.kind,
            label: label.into(),
            y: first.y.clone(),
            anchors,
            verified: parts.iter().all(|c| c.verified),
        })
    }
}

/// Both directions `(1,2)` and `(2,1)` of `property` with the context's
/// anchors. Any context kind is accepted.
pub fn decide_property(
    ctx: &SelectionContext,
    property: HProperty,
    opts: &SelectionOptions,
) -> Result<SelectionReport> {
    if !ctx.verified && !opts.force {
        return Err(Error::Invalid(format!(
            "context {} is unverified; pass force to decide anyway",
            ctx.label
        )));
    }
    let reports = TopologyIndex::BOTH
        .into_iter()
        .map(|i| {
            let p = SelectionProblem::anchored(
                ctx.y.clone(),
                i,
                property.target(i),
                property.mode(),
                ctx.anchors.clone(),
            )?
            .with_flags(opts.reading, opts.openness);
            decide_selection(&p, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionReport::all(reports))
}

/// An H property; takes BTDS (`H`) or iteration (`HI`) contexts.
pub fn decide_h_property(
    ctx: &SelectionContext,
    property: HProperty,
    opts: &SelectionOptions,
) -> Result<SelectionReport> {
    if ctx.kind == ContextKind::Ph {
        return Err(Error::Invalid(
            "H properties need an H or HI context".into(),
        ));
    }
    decide_property(ctx, property, opts)
}

/// A PH property; takes path-homotopy contexts only.
pub fn decide_ph_property(
    ctx: &SelectionContext,
    property: HProperty,
    opts: &SelectionOptions,
) -> Result<SelectionReport> {
    if ctx.kind != ContextKind::Ph {
        return Err(Error::Invalid(
            "PH properties need a path-homotopy context".into(),
        ));
    }
    decide_property(ctx, property, opts)
}

/// A named pair of verified contexts over one space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LibraryContext {
    pub name: String,
    pub h: SelectionContext,
    pub ph: SelectionContext,
}

/// The fixed context library for `y`:
/// * `point:y`: a one-point system mapped constantly to `y`, and the
///   constant path at `y` over the level-one model;
/// * `identity`: the identity system on `y` with `H(x,t) = x`, and the
///   conjunction of all constant-path contexts.
///
/// Every context is built through the verifiers.
pub fn context_library(y: &BitopSpace) -> Result<Vec<LibraryContext>> {
    let n = y.n();
    let unit = standard_interval(1)?;
    let mut out = Vec::new();
    let mut point_ph = Vec::new();
    for p in 0..n {
        let name = format!("point:{p}");
        let one = BitopSpace::discrete(1);
        let bridge = PointMap::constant(1, n, p)?;
        let g = PointMap::constant(n, n, p)?;
        let h = Homotopy::from_fn(one, y.clone(), unit.clone(), bridge, |_, _| p)?;
        let h_ctx =
            SelectionContext::from_btds(name.clone(), &h, &PointMap::identity(1), &g, false)?;

        let path = BitopPath::constant(unit.clone(), y.clone(), p)?;
        let ph = Homotopy::from_fn(
            unit.space().clone(),
            y.clone(),
            unit.clone(),
            path.map().clone(),
            |_, _| p,
        )?;
        let ph_ctx = SelectionContext::from_path(
            name.clone(),
            &ph,
            &unit,
            &PointMap::identity(unit.n()),
            &g,
            &path,
            false,
        )?;
        point_ph.push(ph_ctx.clone());
        out.push(LibraryContext {
            name,
            h: h_ctx,
            ph: ph_ctx,
        });
    }
    let id = PointMap::identity(n);
    let h = Homotopy::from_fn(y.clone(), y.clone(), unit, id.clone(), |x, _| x)?;
    out.push(LibraryContext {
        name: "identity".into(),
        h: SelectionContext::from_btds("identity", &h, &id, &id, false)?,
        ph: SelectionContext::merged("identity", &point_ph)?,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fintop::FiniteTopology;

    fn ab() -> BitopSpace {
        BitopSpace::new(FiniteTopology::discrete(2), FiniteTopology::indiscrete(2)).unwrap()
    }

    fn point_ctx(y: &BitopSpace, p: usize) -> SelectionContext {
        context_library(y).unwrap().remove(p).h
    }

    #[test]
    fn one_point_space_has_all_properties() {
        let y = BitopSpace::discrete(1);
        for lib in context_library(&y).unwrap() {
            for prop in HProperty::ALL {
                let opts = SelectionOptions::default();
                assert!(decide_h_property(&lib.h, prop, &opts).unwrap().verdict);
                assert!(decide_ph_property(&lib.ph, prop, &opts).unwrap().verdict);
            }
        }
    }

    #[test]
    fn almost_rothberger_without_rothberger() {
        let ctx = point_ctx(&ab(), 0);
        let opts = SelectionOptions::default();
        assert!(
            decide_h_property(&ctx, HProperty::AlmostRothberger, &opts)
                .unwrap()
                .verdict
        );
        assert!(
            !decide_h_property(&ctx, HProperty::Rothberger, &opts)
                .unwrap()
                .verdict
        );
        let menger = decide_h_property(&ctx, HProperty::Menger, &opts).unwrap();
        assert!(!menger.verdict);
        assert_eq!(menger.refutation().unwrap().source, TopologyIndex::First);
    }

    #[test]
    fn ph_mirrors_h_on_library() {
        let y = ab();
        let opts = SelectionOptions::default();
        for lib in context_library(&y).unwrap() {
            assert_eq!(lib.h.anchors, lib.ph.anchors);
            for prop in HProperty::ALL {
                assert_eq!(
                    decide_h_property(&lib.h, prop, &opts).unwrap().verdict,
                    decide_ph_property(&lib.ph, prop, &opts).unwrap().verdict
                );
            }
        }
    }

    #[test]
    fn wrong_context_kind_rejected() {
        let lib = context_library(&ab()).unwrap();
        let opts = SelectionOptions::default();
        assert!(decide_ph_property(&lib[0].h, HProperty::Menger, &opts).is_err());
        assert!(decide_h_property(&lib[0].ph, HProperty::Menger, &opts).is_err());
    }

    #[test]
    fn iteration_context_with_constant_map() {
        let y = ab();
        let f = PointMap::constant(2, 2, 1).unwrap();
        let id = PointMap::identity(2);
        let h = Homotopy::from_fn(
            y.clone(),
            y.clone(),
            standard_interval(1).unwrap(),
            id,
            |x, _| x,
        )
        .unwrap();
        let g = PointMap::constant(2, 2, 1).unwrap();
        let hi = SelectionContext::from_iteration("hi", &h, &f, &g, 0, 10, false).unwrap();
        assert_eq!(hi.anchors, vec![Anchor { start: 1, end: 1 }]);
        let single = point_ctx(&y, 1);
        let opts = SelectionOptions::default();
        for prop in HProperty::ALL {
            assert_eq!(
                decide_h_property(&hi, prop, &opts).unwrap().verdict,
                decide_h_property(&single, prop, &opts).unwrap().verdict
            );
        }
    }

    #[test]
    fn unverified_context_needs_force() {
        let y = BitopSpace::discrete(2);
        let id = PointMap::identity(2);
        let swap = PointMap::new(2, vec![1, 0]).unwrap();
        let h = Homotopy::from_fn(
            y.clone(),
            y,
            standard_interval(1).unwrap(),
            id.clone(),
            |x, _| x,
        )
        .unwrap();
        assert!(SelectionContext::from_btds("bad", &h, &id, &swap, false).is_err());
        let forced = SelectionContext::from_btds("bad", &h, &id, &swap, true).unwrap();
        assert!(!forced.verified);
        let opts = SelectionOptions::default();
        assert!(decide_h_property(&forced, HProperty::Menger, &opts).is_err());
        let force = SelectionOptions {
            force: true,
            ..opts
        };
        assert!(decide_h_property(&forced, HProperty::Menger, &force).is_ok());
    }
}
