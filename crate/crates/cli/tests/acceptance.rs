//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Reference values are brute-forced here rather than taken from the crate.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use btds_lab::atlas::{classify_all, instance_hash, opens_of, space_from_opens, sweep_spaces};
use btds_lab::core::fintop::enumerate_topologies;
use btds_lab::core::{BitopSpace, FiniteTopology, PointSet, TopologyIndex};
use btds_lab::paper::{verify_paper, Status};
use btds_lab::props::{oracle_values, AXIOMS};
use btds_lab::suites::{
    arrows, equivalence, iteration_relation_suite, lemma_compositions, path_relation_suite,
    relation_suite, RelationOutcome,
};
use btds_lab::witness::{reverify, Witness};
use btds_lab::{search::search, to_json, SweepConfig};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn check(cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(bad.into())
    }
}

fn lab<T>(r: btds_lab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn sweep3() -> Result<(SweepConfig, Vec<btds_lab::atlas::AtlasRow>), String> {
    let cfg = SweepConfig::default();
    let spaces = lab(sweep_spaces(&cfg))?;
    if spaces.len() != 1 + 16 + 841 {
        return Err(format!("sweep has {} spaces", spaces.len()));
    }
    let rows = lab(classify_all(&spaces, &cfg))?;
    Ok((cfg, rows))
}

/// Characterization and bounded game agree on every row: the sweep itself
/// errors on any disagreement, and every row is recomputed by the game alone.
fn criterion_1() -> Outcome {
    let (cfg, rows) = sweep3()?;
    if let Some(r) = rows.iter().find(|r| !r.oracle_confirmed) {
        return Err(format!("row {} not oracle-confirmed", r.hash));
    }
    let opts = cfg.selection_options();
    let mismatches: Vec<String> = rows
        .par_iter()
        .filter_map(|r| {
            let y = space_from_opens(r.n, &r.t1, &r.t2).ok()?;
            let fresh =
                oracle_values(&y, &r.h_anchors, &r.ph_anchors, &opts, cfg.oracle_len).ok()?;
            let same = fresh.iter().all(|(k, v)| r.properties.get(k) == Some(v));
            (!same || fresh.len() != 16).then(|| r.hash.clone())
        })
        .collect();
    check(
        mismatches.is_empty(),
        format!(
            "{} rows, 16 selection properties each, no disagreement",
            rows.len()
        ),
        format!("oracle disagrees on {mismatches:?}"),
    )
}

fn criterion_2() -> Outcome {
    let (_, rows) = sweep3()?;
    let h = arrows(&rows, btds_lab::props::h_name);
    let ph = arrows(&rows, btds_lab::props::ph_name);
    check(
        h.passed() && ph.passed() && h.checked == 7 * rows.len() as u64,
        format!(
            "{} H and {} PH arrow checks, no violation",
            h.checked, ph.checked
        ),
        format!("H {:?}; PH {:?}", h.examples, ph.examples),
    )
}

fn criterion_3() -> Outcome {
    let cfg = SweepConfig {
        max_points: 2,
        predicate: Some("h_almost_rothberger AND NOT h_rothberger".into()),
        ..SweepConfig::default()
    };
    let found = lab(search(&cfg))?;
    let y = BitopSpace::new(FiniteTopology::discrete(2), FiniteTopology::indiscrete(2))
        .map_err(|e| e.to_string())?;
    let ab: BTreeSet<String> = ["point:0", "point:1", "identity"]
        .iter()
        .map(|c| instance_hash(&y, c))
        .collect();
    let has_ab = found.findings.iter().any(|f| ab.contains(&f.hash));
    let all_reconfirmed = found
        .findings
        .iter()
        .all(|f| f.reconfirmed && reverify(&f.witness).map(|r| r.confirmed).unwrap_or(false));

    let menger = lab(search(&SweepConfig {
        predicate: Some("h_almost_menger AND NOT h_menger".into()),
        ..cfg.clone()
    }))?;
    let menger_ok = if menger.findings.is_empty() {
        menger.status == btds_lab::search::EXHAUSTED
    } else {
        menger
            .findings
            .iter()
            .all(|f| reverify(&f.witness).map(|r| r.confirmed).unwrap_or(false))
    };
    check(
        !found.findings.is_empty() && has_ab && all_reconfirmed && menger_ok,
        format!(
            "{} almost-Rothberger separations incl. the discrete/indiscrete pair; Menger: {}",
            found.findings.len(),
            menger.status
        ),
        format!(
            "findings {}, pair present {has_ab}, reconfirmed {all_reconfirmed}, menger {menger_ok}",
            found.findings.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let (_, rows) = sweep3()?;
    let t3 = Some("pairwise_t3");
    let cases = [
        ("h_almost_rothberger", "h_weak_rothberger", None),
        ("h_almost_menger", "h_weak_menger", None),
        ("ph_almost_rothberger", "ph_weak_rothberger", None),
        ("ph_almost_menger", "ph_weak_menger", None),
        ("h_rothberger", "h_almost_rothberger", t3),
        ("h_menger", "h_almost_menger", t3),
        ("h_rothberger", "h_weak_rothberger", t3),
        ("h_menger", "h_weak_menger", t3),
        ("ph_rothberger", "ph_weak_rothberger", t3),
        ("ph_menger", "ph_weak_menger", t3),
    ];
    let mut bad = Vec::new();
    let mut t3_cases = 0;
    for (a, b, hyp) in cases {
        let o = equivalence(&rows, a, b, hyp);
        if hyp.is_some() {
            t3_cases = o.checked;
        }
        if !o.passed() || o.checked == 0 {
            bad.push(format!("{a} vs {b}: {:?}", o.examples));
        }
    }
    // Every finite space is a pairwise P-space, so the unconditional ones
    // must cover all rows.
    let p_space = rows.iter().all(|r| r.properties["pairwise_p_space"]);
    check(
        bad.is_empty() && p_space && AXIOMS.contains(&"pairwise_t3"),
        format!(
            "{} rows, {t3_cases} pairwise-T3 rows, no violation",
            rows.len()
        ),
        format!("{bad:?}, all P-spaces {p_space}"),
    )
}

fn criterion_5() -> Outcome {
    let o = lab(lemma_compositions(0, 10_000))?;
    // 34 topologies up to three points, checked per index, plus all
    // pairwise triples on at most two points and 10⁴ sampled triples.
    check(
        o.passed() && o.checked >= 10_000,
        format!("{} compositions checked, none discontinuous", o.checked),
        format!("{:?}", o.examples),
    )
}

fn clean(r: &RelationOutcome) -> bool {
    r.passed() && r.reflexive.checked > 0 && r.symmetric.checked > 0 && r.transitive.checked > 0
}

/// The BTDS constructions must verify everywhere. For the iteration and
/// path variants the symmetric construction must verify, and every
/// reflexivity or transitivity failure must be a provable obstruction,
/// which is cross-checked below on the smallest path case.
fn criterion_6() -> Outcome {
    let h = lab(relation_suite(2))?;
    let ih = lab(iteration_relation_suite(2))?;
    let ph = lab(path_relation_suite(2))?;
    let explained = |o: &btds_lab::suites::SuiteOutcome| o.obstructed == o.violations;
    let ok = clean(&h)
        && ih.reflexive.passed()
        && ih.symmetric.passed()
        && ph.symmetric.passed()
        && explained(&ih.transitive)
        && explained(&ph.reflexive)
        && explained(&ph.transitive)
        && no_level_one_path_homotopy_for_constant_start();
    check(
        ok,
        format!(
            "H: {}/{}/{} cases clean; IH transitivity {} and PH reflexivity {} / transitivity {} counterexamples, all obstructed",
            h.reflexive.checked,
            h.symmetric.checked,
            h.transitive.checked,
            ih.transitive.violations,
            ph.reflexive.violations,
            ph.transitive.violations
        ),
        format!("H {:?}; IH {:?}; PH {:?}", h.transitive.examples, ih.transitive.examples, ph.reflexive.examples),
    )
}

/// Brute force over every level-one table: `f ≡ e0` on the three-point
/// interval admits no path homotopy to itself along the identity path.
fn no_level_one_path_homotopy_for_constant_start() -> bool {
    // Points e0 = 0, o = 1, e1 = 2; only the middle point is a singleton open.
    let opens: Vec<u64> = vec![0b000, 0b010, 0b011, 0b110, 0b111];
    let nbhd = |p: usize| {
        opens
            .iter()
            .filter(|&&u| u >> p & 1 == 1)
            .fold(0b111, |a, &u| a & u)
    };
    let prod_nbhd = |x: usize, t: usize| -> u64 {
        let (nx, nt) = (nbhd(x), nbhd(t));
        let mut s = 0;
        for a in 0..3 {
            for b in 0..3 {
                if nx >> a & 1 == 1 && nt >> b & 1 == 1 {
                    s |= 1 << (a * 3 + b);
                }
            }
        }
        s
    };
    let is_open = |s: u64| {
        (0..9)
            .filter(|&c| s >> c & 1 == 1)
            .all(|c| prod_nbhd(c / 3, c % 3) & !s == 0)
    };
    (0..3usize.pow(9)).all(|code| {
        let table: Vec<usize> = (0..9).map(|c| code / 3usize.pow(c) % 3).collect();
        let at = |x: usize, t: usize| table[x * 3 + t];
        let pinned =
            (0..3).all(|t| at(0, t) == 0 && at(2, t) == 2) && at(1, 0) == 0 && at(1, 2) == 0;
        let continuous = opens.iter().all(|&v| {
            let pre = (0..9)
                .filter(|&c| v >> table[c] & 1 == 1)
                .fold(0, |a, c| a | 1 << c);
            is_open(pre)
        });
        !(pinned && continuous)
    })
}

fn criterion_7() -> Outcome {
    let cfg = SweepConfig::default();
    let report = lab(verify_paper(&cfg))?;
    let get = |item: &str| {
        report
            .entry("Example 3.1", item)
            .ok_or(format!("missing {item}"))
    };
    let ff = get("F-after-f")?;
    let gf = get("g-after-F")?;
    let g = get("g-continuous-psi1")?;
    let boundary = get("K-btds-homotopy: boundary conditions")?;
    let tables = ff.status == Status::Pass
        && ff.detail.contains("[1/2, 1/2, 1/2, 1/2]")
        && gf.status == Status::Pass
        && gf.detail.contains("[1/2, 1/3, 1, 1]");
    let g_witness = g.status == Status::Finding
        && g.detail.contains("witness open set {1}")
        && match &g.witness {
            Some(w @ Witness::ContinuityFailure { open, index, .. }) => {
                open == &vec![0]
                    && *index == TopologyIndex::First
                    && reverify(w).map(|r| r.confirmed).unwrap_or(false)
            }
            _ => false,
        };
    let first = to_json(&report);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_btds-lab"))
        .arg("verify-paper")
        .env_remove(btds_lab::config::CONFIG_ENV)
        .output()
        .map_err(|e| e.to_string())?;
    let stable = out.status.success() && out.stdout == first.as_bytes();
    check(
        tables && g_witness && boundary.status == Status::Pass && stable,
        format!(
            "tables exact, g FINDING on {{1}}, K boundary verified, {} bytes stable",
            first.len()
        ),
        format!(
            "tables {tables}, g witness {g_witness}, boundary {:?}, stable {stable}",
            boundary.status
        ),
    )
}

fn brute_topologies(n: usize) -> BTreeSet<Vec<u64>> {
    let full = (1u64 << n) - 1;
    let middle: Vec<u64> = (1..full).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << middle.len()) {
        let mut fam: Vec<u64> = vec![0, full];
        fam.extend(
            (0..middle.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| middle[i]),
        );
        let closed = fam.iter().all(|&a| {
            fam.iter()
                .all(|&b| fam.contains(&(a | b)) && fam.contains(&(a & b)))
        });
        if closed {
            fam.sort();
            out.insert(fam);
        }
    }
    out
}

fn bits(opens: Vec<Vec<usize>>) -> Vec<u64> {
    let mut v: Vec<u64> = opens
        .iter()
        .map(|u| u.iter().fold(0, |a, &p| a | 1 << p))
        .collect();
    v.sort();
    v
}

fn criterion_8() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=3 {
        let fast: Vec<FiniteTopology> =
            lab(enumerate_topologies(n, n).map_err(Into::into))?.collect();
        let fast_set: BTreeSet<Vec<u64>> = fast.iter().map(|t| bits(opens_of(t))).collect();
        if fast_set != brute_topologies(n) || fast_set.len() != fast.len() {
            return Err(format!(
                "topologies on {n} points differ from the brute-force filter"
            ));
        }
        counts.push(fast.len());
        for t in &fast {
            let got: BTreeSet<Vec<u64>> = t
                .enumerate_irredundant_covers(TopologyIndex::First, 6)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|c| c.members.iter().map(|u| PointSet::bits(*u)).collect())
                .collect();
            let nonempty: Vec<u64> = bits(opens_of(t)).into_iter().filter(|&u| u != 0).collect();
            let full = (1u64 << n) - 1;
            let mut want = BTreeSet::new();
            for mask in 1u64..(1 << nonempty.len()) {
                let fam: Vec<u64> = (0..nonempty.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| nonempty[i])
                    .collect();
                let union = |skip: Option<usize>| {
                    fam.iter()
                        .enumerate()
                        .filter(|&(i, _)| Some(i) != skip)
                        .fold(0, |a, (_, &u)| a | u)
                };
                if union(None) == full && (0..fam.len()).all(|i| union(Some(i)) != full) {
                    want.insert(fam);
                }
            }
            if got != want {
                return Err(format!("irredundant covers differ on {t:?}"));
            }
        }
    }
    check(
        counts == [1, 4, 29],
        format!("topology counts {counts:?}; irredundant covers match the subset filter"),
        format!("topology counts {counts:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u8, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {n}: {tag} ({detail}; {:.1}s)",
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
