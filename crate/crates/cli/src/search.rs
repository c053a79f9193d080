//! Counterexample search: sweep, filter by a predicate, and re-derive every
//! hit through the bounded game before reporting it.

use serde::{Deserialize, Serialize};

use crate::atlas::{classify_all, space_from_opens, sweep_spaces, AtlasRow};
use crate::config::SweepConfig;
use crate::error::{LabError, Result};
use crate::props::{axiom_values, oracle_values};
use crate::witness::Witness;

pub const EXHAUSTED: &str = "exhausted, none exist at this scale";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub hash: String,
    pub context: String,
    pub reconfirmed: bool,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Findings {
    pub predicate: String,
    pub max_points: usize,
    pub spaces_examined: usize,
    pub rows_examined: usize,
    pub status: String,
    pub findings: Vec<Finding>,
}

pub fn search(cfg: &SweepConfig) -> Result<Findings> {
    let src = cfg
        .predicate
        .clone()
        .ok_or_else(|| LabError::Predicate("search needs a predicate".into()))?;
    let pred = cfg.parse_predicate(&src)?;
    let spaces = sweep_spaces(cfg)?;
    let rows = classify_all(&spaces, cfg)?;
    let mut hits = Vec::new();
    for r in &rows {
        if pred.eval(&r.properties)? {
            hits.push(r.clone());
        }
    }
    let opts = cfg.selection_options();
    let len = cfg.oracle_len.max(1);
    let findings = cfg.install(|| {
        use rayon::prelude::*;
        hits.into_par_iter()
            .map(|row| reconfirm(row, &src, cfg, &opts, len))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Findings {
        predicate: src,
        max_points: cfg.max_points,
        spaces_examined: spaces.len(),
        rows_examined: rows.len(),
        status: if findings.is_empty() {
            EXHAUSTED.into()
        } else {
            format!("{} found", findings.len())
        },
        findings,
    })
}

fn reconfirm(
    row: AtlasRow,
    src: &str,
    cfg: &SweepConfig,
    opts: &btds_core::SelectionOptions,
    len: usize,
) -> Result<Finding> {
    let y = space_from_opens(row.n, &row.t1, &row.t2)?;
    let mut fresh = oracle_values(&y, &row.h_anchors, &row.ph_anchors, opts, len)?;
    fresh.extend(axiom_values(&y)?);
    if fresh != row.properties {
        return Err(LabError::Internal(format!(
            "row {}: oracle recomputation disagrees with the sweep",
            row.hash
        )));
    }
    Ok(Finding {
        hash: row.hash.clone(),
        context: row.context.clone(),
        reconfirmed: true,
        witness: Witness::InstanceRow {
            row,
            predicate: Some(src.to_string()),
            oracle_len: len,
            reading: cfg.anchor_reading,
            openness: cfg.target_openness,
        },
    })
}
