//! The property vector of one instance: separation axioms, the twelve
//! H/PH selection properties and the four classical ones.

use std::collections::BTreeMap;

use btds_core::selection::{
    decide_classical, decide_h_property, decide_ph_property, oracle_bounded, Anchor,
    ClassicalProperty, LibraryContext, Method, SelectionProblem,
};
use btds_core::{BitopSpace, HProperty, SelectionOptions, TopologyIndex};

use crate::error::Result;

pub const AXIOMS: [&str; 7] = [
    "pairwise_t1",
    "pairwise_regular",
    "pairwise_t3",
    "pairwise_hausdorff",
    "pairwise_hausdorff_one_sided",
    "pairwise_locally_compact",
    "pairwise_p_space",
];

pub fn h_name(p: HProperty) -> String {
    format!("h_{}", p.name().replace('-', "_"))
}

pub fn ph_name(p: HProperty) -> String {
    format!("ph_{}", p.name().replace('-', "_"))
}

pub fn classical_name(p: ClassicalProperty) -> String {
    p.name().replace('-', "_")
}

/// Every name a predicate may mention, normalized.
pub fn property_names() -> Vec<String> {
    let mut out: Vec<String> = AXIOMS.iter().map(|s| s.to_string()).collect();
    out.extend(HProperty::ALL.into_iter().map(h_name));
    out.extend(HProperty::ALL.into_iter().map(ph_name));
    out.extend(ClassicalProperty::ALL.into_iter().map(classical_name));
    out
}

pub type Values = BTreeMap<String, bool>;

pub fn axiom_values(y: &BitopSpace) -> Result<Values> {
    let vals = [
        y.is_pairwise_t1().holds,
        y.is_pairwise_regular()?.holds,
        y.is_pairwise_t3()?.holds,
        y.is_pairwise_hausdorff().holds,
        y.is_pairwise_hausdorff_one_sided().holds,
        y.is_pairwise_locally_compact(),
        y.is_pairwise_p_space(),
    ];
    Ok(AXIOMS.iter().map(|s| s.to_string()).zip(vals).collect())
}

/// Classical properties; the flag is true when every verdict was
/// confirmed by the oracle.
pub fn classical_values(y: &BitopSpace, opts: &SelectionOptions) -> Result<(Values, bool)> {
    let mut out = Values::new();
    let mut both = true;
    for p in ClassicalProperty::ALL {
        let r = decide_classical(y, p, opts)?;
        both &= r.method == Method::Both;
        out.insert(classical_name(p), r.verdict);
    }
    Ok((out, both))
}

pub fn context_values(lib: &LibraryContext, opts: &SelectionOptions) -> Result<(Values, bool)> {
    let mut out = Values::new();
    let mut both = true;
    for p in HProperty::ALL {
        let h = decide_h_property(&lib.h, p, opts)?;
        let ph = decide_ph_property(&lib.ph, p, opts)?;
        both &= h.method == Method::Both && ph.method == Method::Both;
        out.insert(h_name(p), h.verdict);
        out.insert(ph_name(p), ph.verdict);
    }
    Ok((out, both))
}

fn oracle_all(
    problems: impl IntoIterator<Item = SelectionProblem>,
    len: usize,
    cap: usize,
) -> Result<bool> {
    for p in problems {
        if !oracle_bounded(&p, len, cap)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

fn anchored(
    y: &BitopSpace,
    p: HProperty,
    anchors: &[Anchor],
    opts: &SelectionOptions,
) -> Result<Vec<SelectionProblem>> {
    TopologyIndex::BOTH
        .into_iter()
        .map(|i| {
            Ok(
                SelectionProblem::anchored(y.clone(), i, p.target(i), p.mode(), anchors.to_vec())?
                    .with_flags(opts.reading, opts.openness),
            )
        })
        .collect()
}

/// The selection properties recomputed by the bounded game alone, with no
/// use of the characterization. `len` is the adversary sequence length.
pub fn oracle_values(
    y: &BitopSpace,
    h_anchors: &[Anchor],
    ph_anchors: &[Anchor],
    opts: &SelectionOptions,
    len: usize,
) -> Result<Values> {
    let cap = opts.point_cap;
    let mut out = Values::new();
    for p in HProperty::ALL {
        out.insert(
            h_name(p),
            oracle_all(anchored(y, p, h_anchors, opts)?, len, cap)?,
        );
        out.insert(
            ph_name(p),
            oracle_all(anchored(y, p, ph_anchors, opts)?, len, cap)?,
        );
    }
    for p in ClassicalProperty::ALL {
        let problems = TopologyIndex::BOTH.into_iter().map(|i| p.problem(y, i));
        out.insert(classical_name(p), oracle_all(problems, len, cap)?);
    }
    Ok(out)
}
