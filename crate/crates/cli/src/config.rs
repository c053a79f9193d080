use std::path::{Path, PathBuf};

use btds_core::homotopy::DEFAULT_K_CAP;
use btds_core::{AnchorReading, SelectionOptions, TargetOpenness};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::predicate::Predicate;
use crate::props::property_names;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BTDS_LAB_CONFIG";

/// Largest point count a sweep may reach. Beyond this the pair count
/// outgrows anything a desk run finishes.
pub const HARD_MAX_POINTS: usize = 4;
pub const HARD_MAX_K: usize = 4;
pub const HARD_MAX_ORACLE_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub max_points: usize,
    /// Highest interval level tried when searching for homotopies.
    pub interval_k: usize,
    /// Adversary sequence length for the oracle cross-check; 0 disables it.
    pub oracle_len: usize,
    pub point_cap: usize,
    pub predicate: Option<String>,
    pub workers: Option<usize>,
    pub seed: u64,
    /// Topology pairs drawn per point count above three points; `None`
    /// sweeps everything.
    pub sample: Option<usize>,
    /// Keep one representative per relabelling class.
    pub iso_dedup: bool,
    pub out: Option<PathBuf>,
    pub strict_topology: bool,
    pub anchor_reading: AnchorReading,
    pub target_openness: TargetOpenness,
    /// Instances per checkpointed partition.
    pub chunk_size: usize,
    /// Stop after this many partitions, leaving the checkpoint behind.
    pub stop_after_chunks: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_points: 3,
            interval_k: DEFAULT_K_CAP,
            oracle_len: 2,
            point_cap: btds_core::fintop::DEFAULT_OPEN_CAP,
            predicate: None,
            workers: None,
            seed: 0,
            sample: None,
            iso_dedup: false,
            out: None,
            strict_topology: true,
            anchor_reading: AnchorReading::PerSet,
            target_openness: TargetOpenness::Strict,
            chunk_size: 64,
            stop_after_chunks: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| LabError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path`, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        match path.map(Path::to_path_buf).or(env) {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(LabError::io(&p))?;
                SweepConfig::from_toml(&text)
            }
            None => Ok(SweepConfig::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::Config(m));
        if !(1..=HARD_MAX_POINTS).contains(&self.max_points) {
            return bad(format!("max_points must be in 1..={HARD_MAX_POINTS}"));
        }
        if !(1..=HARD_MAX_K).contains(&self.interval_k) {
            return bad(format!("interval_k must be in 1..={HARD_MAX_K}"));
        }
        if self.oracle_len > HARD_MAX_ORACLE_LEN {
            return bad(format!("oracle_len must be at most {HARD_MAX_ORACLE_LEN}"));
        }
        if self.point_cap < self.max_points || self.point_cap > btds_core::fintop::MAX_POINTS {
            return bad("point_cap must cover max_points".into());
        }
        if self.workers == Some(0) || self.chunk_size == 0 || self.sample == Some(0) {
            return bad("workers, chunk_size and sample must be positive".into());
        }
        if let Some(p) = &self.predicate {
            self.parse_predicate(p)?;
        }
        Ok(())
    }

    pub fn parse_predicate(&self, src: &str) -> Result<Predicate> {
        Predicate::parse(src, &property_names())
    }

    pub fn selection_options(&self) -> SelectionOptions {
        SelectionOptions {
            reading: self.anchor_reading,
            openness: self.target_openness,
            oracle_len: self.oracle_len,
            point_cap: self.point_cap,
            force: false,
        }
    }

    /// Hash of everything that affects atlas content. Output paths, worker
    /// count and the interruption hook are left out.
    pub fn fingerprint(&self) -> String {
        let relevant = SweepConfig {
            out: None,
            workers: None,
            stop_after_chunks: None,
            predicate: None,
            ..self.clone()
        };
        let text = serde_json::to_string(&relevant).expect("config serializes");
        hex16(&Sha256::digest(text.as_bytes()))
    }

    /// Runs `f` on a pool with the configured worker count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            b = b.num_threads(w);
        }
        let pool = b.build().map_err(|e| LabError::Config(e.to_string()))?;
        Ok(pool.install(f))
    }
}

pub fn hex16(digest: &[u8]) -> String {
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
