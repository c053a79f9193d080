//! Sweeps over topology pairs and the line-delimited atlas they produce.
//!
//! Each record is one (space, context) instance keyed by a hash of its
//! canonical encoding. Rows are written sorted by that hash, so two runs
//! with the same config produce the same bytes whatever the worker count.
//! Long sweeps checkpoint after every partition and pick up where they
//! stopped.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use btds_core::fintop::enumerate_topologies;
use btds_core::selection::{context_library, Anchor};
use btds_core::{BitopSpace, FiniteTopology, PointSet};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{hex16, SweepConfig};
use crate::error::{LabError, Result};
use crate::props::{axiom_values, classical_values, context_values, Values};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasRow {
    pub hash: String,
    pub n: usize,
    /// Open sets of each topology, as point lists.
    pub t1: Vec<Vec<usize>>,
    pub t2: Vec<Vec<usize>>,
    pub context: String,
    pub h_anchors: Vec<Anchor>,
    pub ph_anchors: Vec<Anchor>,
    /// Every selection verdict in the row was confirmed by the oracle.
    pub oracle_confirmed: bool,
    pub properties: Values,
}

pub fn opens_of(t: &FiniteTopology) -> Vec<Vec<usize>> {
    t.enumerate_opens(t.n())
        .expect("cap equals the point count")
        .into_iter()
        .map(|u| u.iter().collect())
        .collect()
}

/// Rebuilds a space from explicit open-set lists, insisting they form
/// topologies.
pub fn space_from_opens(n: usize, t1: &[Vec<usize>], t2: &[Vec<usize>]) -> Result<BitopSpace> {
    let topo = |fam: &[Vec<usize>]| -> Result<FiniteTopology> {
        let sets: Vec<PointSet> = fam.iter().map(|u| u.iter().copied().collect()).collect();
        Ok(FiniteTopology::from_open_family(n, &sets, true)?)
    };
    Ok(BitopSpace::new(topo(t1)?, topo(t2)?)?)
}

pub fn instance_hash(y: &BitopSpace, context: &str) -> String {
    let nb = |t: &FiniteTopology| {
        t.min_nbhds()
            .iter()
            .map(|u| u.bits().to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let key = format!(
        "btds-atlas/1;n={};t1={};t2={};ctx={context}",
        y.n(),
        nb(y.t1()),
        nb(y.t2())
    );
    hex16(&Sha256::digest(key.as_bytes()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for p in 0..n {
            if !prefix.contains(&p) {
                prefix.push(p);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

fn code(y: &BitopSpace) -> (u64, u64) {
    (y.t1().preorder_code(), y.t2().preorder_code())
}

/// Whether `y` is the least relabelling of itself.
fn is_canonical(y: &BitopSpace, perms: &[Vec<usize>]) -> bool {
    let own = code(y);
    perms.iter().all(|p| {
        (
            y.t1().permuted(p).preorder_code(),
            y.t2().permuted(p).preorder_code(),
        ) >= own
    })
}

/// Every space the config sweeps, in a fixed order: by point count, then
/// by the enumeration order of `τ₁` and `τ₂`. Above three points the pairs
/// may be sampled with the configured seed.
pub fn sweep_spaces(cfg: &SweepConfig) -> Result<Vec<BitopSpace>> {
    let mut out = Vec::new();
    for n in 1..=cfg.max_points {
        let ts: Vec<FiniteTopology> = enumerate_topologies(n, cfg.max_points)?.collect();
        let total = ts.len() * ts.len();
        let picks: Vec<usize> = match cfg.sample {
            Some(k) if n > 3 && k < total => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n as u64);
                let mut v = sample(&mut rng, total, k).into_vec();
                v.sort_unstable();
                v
            }
            _ => (0..total).collect(),
        };
        let perms = permutations(n);
        for i in picks {
            let y = BitopSpace::new(ts[i / ts.len()].clone(), ts[i % ts.len()].clone())?;
            if !cfg.iso_dedup || is_canonical(&y, &perms) {
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// All rows for one space: one per library context.
pub fn classify(y: &BitopSpace, cfg: &SweepConfig) -> Result<Vec<AtlasRow>> {
    let opts = cfg.selection_options();
    let axioms = axiom_values(y)?;
    let (classical, classical_both) = classical_values(y, &opts)?;
    let (t1, t2) = (opens_of(y.t1()), opens_of(y.t2()));
    context_library(y)?
        .iter()
        .map(|lib| {
            let (mut properties, both) = context_values(lib, &opts)?;
            properties.extend(axioms.clone());
            properties.extend(classical.clone());
            Ok(AtlasRow {
                hash: instance_hash(y, &lib.name),
                n: y.n(),
                t1: t1.clone(),
                t2: t2.clone(),
                context: lib.name.clone(),
                h_anchors: lib.h.anchors.clone(),
                ph_anchors: lib.ph.anchors.clone(),
                oracle_confirmed: both && classical_both && cfg.oracle_len > 0,
                properties,
            })
        })
        .collect()
}

/// Classifies `spaces` on the configured pool, sorted by hash.
pub fn classify_all(spaces: &[BitopSpace], cfg: &SweepConfig) -> Result<Vec<AtlasRow>> {
    let nested = cfg.install(|| {
        spaces
            .par_iter()
            .map(|y| classify(y, cfg))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut rows: Vec<AtlasRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.hash.cmp(&b.hash));
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    fingerprint: String,
    chunks_done: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateSummary {
    pub out: PathBuf,
    pub spaces: usize,
    pub chunks: usize,
    pub resumed_from: usize,
    pub rows: usize,
    pub complete: bool,
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = sidecar(path, ".tmp");
    fs::write(&tmp, bytes).map_err(LabError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(LabError::io(path))
}

pub fn row_line(row: &AtlasRow) -> String {
    serde_json::to_string(row).expect("rows serialize")
}

pub fn read_rows(text: &str) -> Result<Vec<AtlasRow>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| LabError::Parse(e.to_string())))
        .collect()
}

/// Writes the atlas for `cfg` to `out`. Rows of finished partitions go to
/// `<out>.partial` and progress to `<out>.checkpoint`; a later run with the
/// same config resumes after the last finished partition. A run with a
/// different config refuses to touch an existing checkpoint.
pub fn enumerate(cfg: &SweepConfig, out: &Path) -> Result<EnumerateSummary> {
    let spaces = sweep_spaces(cfg)?;
    let chunks: Vec<&[BitopSpace]> = spaces.chunks(cfg.chunk_size).collect();
    let partial = sidecar(out, ".partial");
    let ckpt_path = sidecar(out, ".checkpoint");
    let fingerprint = cfg.fingerprint();

    let resumed_from = if ckpt_path.exists() {
        let text = fs::read_to_string(&ckpt_path).map_err(LabError::io(&ckpt_path))?;
        let ck: Checkpoint =
            serde_json::from_str(&text).map_err(|e| LabError::Parse(format!("checkpoint: {e}")))?;
        if ck.fingerprint != fingerprint {
            return Err(LabError::Config(format!(
                "{} was written by a different configuration",
                ckpt_path.display()
            )));
        }
        ck.chunks_done.min(chunks.len())
    } else {
        if partial.exists() {
            fs::remove_file(&partial).map_err(LabError::io(&partial))?;
        }
        0
    };

    for (done, chunk) in chunks.iter().enumerate().skip(resumed_from) {
        if cfg.stop_after_chunks.is_some_and(|s| done >= s) {
            return Ok(EnumerateSummary {
                out: out.to_path_buf(),
                spaces: spaces.len(),
                chunks: chunks.len(),
                resumed_from,
                rows: 0,
                complete: false,
            });
        }
        let rows = classify_all(chunk, cfg)?;
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&partial)
            .map_err(LabError::io(&partial))?;
        let mut buf = String::new();
        for r in &rows {
            buf.push_str(&row_line(r));
            buf.push('\n');
        }
        f.write_all(buf.as_bytes())
            .map_err(LabError::io(&partial))?;
        f.sync_all().map_err(LabError::io(&partial))?;
        let ck = Checkpoint {
            fingerprint: fingerprint.clone(),
            chunks_done: done + 1,
        };
        write_atomic(
            &ckpt_path,
            serde_json::to_string(&ck).expect("checkpoint").as_bytes(),
        )?;
    }

    let text = if partial.exists() {
        fs::read_to_string(&partial).map_err(LabError::io(&partial))?
    } else {
        String::new()
    };
    // A crash between appending and checkpointing repeats a partition;
    // rows are deterministic, so dropping duplicate keys is safe.
    let rows: BTreeMap<String, AtlasRow> = read_rows(&text)?
        .into_iter()
        .map(|r| (r.hash.clone(), r))
        .collect();
    let mut body = String::new();
    for r in rows.values() {
        body.push_str(&row_line(r));
        body.push('\n');
    }
    write_atomic(out, body.as_bytes())?;
    for p in [&partial, &ckpt_path] {
        if p.exists() {
            fs::remove_file(p).map_err(LabError::io(p))?;
        }
    }
    Ok(EnumerateSummary {
        out: out.to_path_buf(),
        spaces: spaces.len(),
        chunks: chunks.len(),
        resumed_from,
        rows: rows.len(),
        complete: true,
    })
}
