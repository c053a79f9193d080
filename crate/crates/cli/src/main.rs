use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btds_lab::instance::{check, CheckOptions, Instance};
use btds_lab::witness::{collect_witnesses, reverify};
use btds_lab::{atlas, paper, search, to_json, LabError, Result, SweepConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "btds-lab",
    version,
    about = "Finite-model lab for bitopological dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the claims of an instance file.
    Check {
        instance: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Write the property atlas of every small space as JSON lines.
    Enumerate {
        #[command(flatten)]
        opts: Opts,
    },
    /// Find atlas rows satisfying a predicate over property names.
    Search {
        #[command(flatten)]
        opts: Opts,
    },
    /// Run the bundled fixtures and exhaustive suites.
    VerifyPaper {
        #[command(flatten)]
        opts: Opts,
    },
    /// Re-check witnesses found in a JSON or JSON-lines file.
    ReverifyWitness {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Opts {
    /// TOML sweep config; defaults to $BTDS_LAB_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    max_points: Option<usize>,
    #[arg(long)]
    interval_k: Option<usize>,
    #[arg(long)]
    oracle_len: Option<usize>,
    #[arg(long)]
    predicate: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    iso_dedup: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    strict_topology: Option<bool>,
    /// per-set or union
    #[arg(long)]
    anchor_reading: Option<String>,
    /// strict or cover-only
    #[arg(long)]
    target_openness: Option<String>,
    #[arg(long)]
    chunk_size: Option<usize>,
    #[arg(long, hide = true)]
    stop_after_chunks: Option<usize>,
}

fn kebab<T: serde::de::DeserializeOwned>(flag: &str, v: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(v.into()))
        .map_err(|_| LabError::Config(format!("--{flag}: unknown value {v:?}")))
}

impl Opts {
    fn config(&self) -> Result<SweepConfig> {
        let mut c = SweepConfig::load(self.config.as_deref())?;
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f.clone() { c.$f = v.into(); })*};
        }
        set!(
            max_points,
            interval_k,
            oracle_len,
            seed,
            chunk_size,
            strict_topology
        );
        if self.predicate.is_some() {
            c.predicate = self.predicate.clone();
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if self.sample.is_some() {
            c.sample = self.sample;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if self.stop_after_chunks.is_some() {
            c.stop_after_chunks = self.stop_after_chunks;
        }
        c.iso_dedup |= self.iso_dedup;
        if let Some(r) = &self.anchor_reading {
            c.anchor_reading = kebab("anchor-reading", r)?;
        }
        if let Some(o) = &self.target_openness {
            c.target_openness = kebab("target-openness", o)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(LabError::io(p)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Check { instance, opts } => {
            let cfg = opts.config()?;
            let text = std::fs::read_to_string(&instance).map_err(LabError::io(&instance))?;
            let inst = Instance::parse(&text, cfg.strict_topology)?;
            let report = check(
                &inst,
                &CheckOptions {
                    selection: cfg.selection_options(),
                    k_cap: cfg.interval_k,
                },
            )?;
            emit(&to_json(&report), cfg.out.as_deref())
        }
        Cmd::Enumerate { opts } => {
            let cfg = opts.config()?;
            let out = cfg
                .out
                .clone()
                .ok_or_else(|| LabError::Config("enumerate needs --out".into()))?;
            let summary = cfg.install(|| atlas::enumerate(&cfg, &out))??;
            emit(&to_json(&summary), None)
        }
        Cmd::Search { opts } => {
            let cfg = opts.config()?;
            let findings = search::search(&cfg)?;
            emit(&to_json(&findings), cfg.out.as_deref())
        }
        Cmd::VerifyPaper { opts } => {
            let cfg = opts.config()?;
            let report = paper::verify_paper(&cfg)?;
            emit(&to_json(&report), cfg.out.as_deref())
        }
        Cmd::ReverifyWitness { file, out } => {
            let text = std::fs::read_to_string(&file).map_err(LabError::io(&file))?;
            let results = collect_witnesses(&text)?
                .iter()
                .map(reverify)
                .collect::<Result<Vec<_>>>()?;
            emit(&to_json(&results), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
