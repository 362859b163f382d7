//! TOML experiment manifests and their summary report.
//!
//! ```toml
//! out = "runs/sequences"
//! backend = "cadical"
//! workers = 8
//! timeout_secs = 3600
//!
//! [[stage]]
//! kind = "degree-sequences"
//! n = 13
//! lo = 2
//! hi = 5
//!
//! [[stage]]
//! kind = "filter-sequences"
//! params = "3,3,3:13"
//! input = "degseq_13_2_5.txt"
//! shard = "0..28"
//! ```
//!
//! Relative paths are resolved against `out`, which is resolved against
//! the manifest's directory.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Deserialize;

use super::{
    compute_colorings_from_matrices, degree_bounds, filter_satisfiable_matrices,
    filter_satisfiable_sequences, read_matrices, read_sequences, BlockClasses, BlockLibrary,
    BoundsVerdict, Campaign, FilterReport, GluingVerdict, SequenceOptions,
};
use crate::coloring::{DegreeTuple, RamseyParams};
use crate::coloring_set::ColoringSet;
use crate::degree::{enum_degree_matrices, enum_degree_sequences};
use crate::error::{Error, Result};
use crate::solver::{BackendKind, BatchConfig, Limits, Status};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub out: PathBuf,
    pub backend: Option<String>,
    pub workers: Option<usize>,
    pub timeout_secs: Option<u64>,
    /// Glue over isomorphism classes of blocks instead of weak classes.
    #[serde(default)]
    pub strong_blocks: bool,
    #[serde(rename = "stage", default)]
    pub stages: Vec<Stage>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Stage {
    RamseySet {
        params: String,
    },
    DegreeBounds {
        params: String,
        lo: u32,
        hi: u32,
    },
    DegreeSequences {
        n: usize,
        lo: u32,
        hi: u32,
    },
    FilterSequences {
        params: String,
        input: PathBuf,
        shard: Option<String>,
        other_colors: Option<(u32, u32)>,
        #[serde(default)]
        symmetry_break: bool,
        #[serde(default)]
        left_column: bool,
    },
    DegreeMatrices {
        n: usize,
        k: usize,
        left: PathBuf,
        bounds: Option<(u32, u32)>,
    },
    FilterMatrices {
        params: String,
        input: PathBuf,
        shard: Option<String>,
    },
    ColoringsFromMatrices {
        params: String,
        input: PathBuf,
        shard: Option<String>,
    },
    Gluing {
        target: String,
        triples: Vec<Vec<u32>>,
    },
    Campaign {
        /// Archive of the color-1 blocks.
        blocks: PathBuf,
        shard: Option<String>,
        #[serde(default)]
        dry_run: bool,
        #[serde(default = "default_sample")]
        sample: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn default_sample() -> usize {
    100
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::usage(format!("manifest: {e}")))
    }

    /// Reads a manifest and resolves `out` against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let mut m = Self::parse(&text)?;
        if m.out.is_relative() {
            if let Some(dir) = path.parent() {
                m.out = dir.join(&m.out);
            }
        }
        Ok(m)
    }

    fn backend(&self) -> Result<BackendKind> {
        match &self.backend {
            Some(b) => b.parse(),
            None => BackendKind::from_env(),
        }
    }

    fn limits(&self) -> Limits {
        self.timeout_secs
            .map_or_else(Limits::default, |s| Limits::timeout(Duration::from_secs(s)))
    }

    fn batch(&self, ledger: &str) -> Result<BatchConfig> {
        let mut c = BatchConfig::new(self.out.join(ledger));
        c.backend = self.backend()?;
        c.limits = self.limits();
        if let Some(w) = self.workers {
            c.workers = w;
        }
        Ok(c)
    }

    fn path(&self, p: &Path) -> PathBuf {
        if p.is_relative() {
            self.out.join(p)
        } else {
            p.to_path_buf()
        }
    }
}

/// Parses a half-open shard `A..B`; `A..` runs to the end.
pub fn parse_shard(s: &str) -> Result<Range<usize>> {
    let bad = || Error::usage(format!("shard `{s}` must look like A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = if b.trim().is_empty() {
        usize::MAX
    } else {
        b.trim().parse().map_err(|_| bad())?
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

fn shard_of(s: &Option<String>) -> Result<Range<usize>> {
    s.as_deref().map_or(Ok(0..usize::MAX), parse_shard)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportRow {
    pub stage: String,
    pub instances: usize,
    pub sat: usize,
    pub unsat: usize,
    pub unknown: usize,
    pub seconds: f64,
    pub result: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<28} {:>9} {:>8} {:>8} {:>8} {:>12}  result",
            "stage", "instances", "sat", "unsat", "unknown", "seconds"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<28} {:>9} {:>8} {:>8} {:>8} {:>12.2}  {}",
                r.stage, r.instances, r.sat, r.unsat, r.unknown, r.seconds, r.result
            )?;
        }
        Ok(())
    }
}

fn filter_row(stage: String, r: &FilterReport, seconds: f64) -> ReportRow {
    ReportRow {
        stage,
        instances: r.total,
        sat: r.survivors.len(),
        unsat: r.eliminated.len() + r.rejected.len(),
        unknown: r.unknown.len(),
        seconds: seconds.max(r.ledger.total_seconds()),
        result: if r.is_complete() {
            format!("{} survivors", r.survivors.len())
        } else {
            "incomplete".into()
        },
    }
}

fn write_lines<T: fmt::Display>(path: &Path, items: &[T]) -> Result<()> {
    let mut text = String::new();
    for x in items {
        text.push_str(&x.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::file(path, e))
}

fn params(s: &str) -> Result<RamseyParams> {
    s.parse()
}

/// Runs every stage in order, writing outputs under `out` and the report
/// to `out/report.txt`. A stage left incomplete does not stop later ones
/// that can run from existing files.
pub fn run_manifest(m: &Manifest) -> Result<Report> {
    fs::create_dir_all(&m.out).map_err(|e| Error::file(&m.out, e))?;
    let classes = if m.strong_blocks {
        BlockClasses::Strong
    } else {
        BlockClasses::Weak
    };
    let lib =
        BlockLibrary::new(m.out.join("blocks"), m.backend()?, m.limits()).with_classes(classes);
    let mut report = Report::default();
    for stage in &m.stages {
        let start = Instant::now();
        let row = run_stage(m, &lib, stage, start)?;
        log::info!("{} done: {}", row.stage, row.result);
        report.rows.push(row);
        let path = m.out.join("report.txt");
        let mut file = fs::File::create(&path).map_err(|e| Error::file(&path, e))?;
        write!(file, "{report}").map_err(|e| Error::file(&path, e))?;
    }
    Ok(report)
}

fn run_stage(m: &Manifest, lib: &BlockLibrary, stage: &Stage, start: Instant) -> Result<ReportRow> {
    let secs = || start.elapsed().as_secs_f64();
    Ok(match stage {
        Stage::RamseySet { params: ps } => {
            let p = params(ps)?;
            let set = lib.ramsey_set(&p)?;
            ReportRow {
                stage: format!("ramsey-set {p}"),
                instances: 1,
                sat: usize::from(!set.is_empty()),
                unsat: usize::from(set.is_empty()),
                seconds: secs(),
                result: format!("raw={} reduced={}", set.raw_count(), set.len()),
                ..Default::default()
            }
        }
        Stage::DegreeBounds { params: ps, lo, hi } => {
            let p = params(ps)?;
            let v = degree_bounds(&p, *lo, *hi, &m.backend()?, &m.limits())?;
            let (sat, unsat, unknown, result) = match &v {
                BoundsVerdict::Holds => (0, 1, 0, format!("bounds [{lo},{hi}] hold")),
                BoundsVerdict::Vacuous => (0, 0, 0, "vacuous".to_string()),
                BoundsVerdict::Violated(_) => (1, 0, 0, format!("bounds [{lo},{hi}] violated")),
                BoundsVerdict::Unknown => (0, 0, 1, "timeout".to_string()),
            };
            if let BoundsVerdict::Violated(a) = &v {
                let path = m.out.join("degree-bounds.counterexample.txt");
                fs::write(&path, a.to_string()).map_err(|e| Error::file(&path, e))?;
            }
            ReportRow {
                stage: format!("degree-bounds {p}"),
                instances: usize::from(v != BoundsVerdict::Vacuous),
                sat,
                unsat,
                unknown,
                seconds: secs(),
                result,
            }
        }
        Stage::DegreeSequences { n, lo, hi } => {
            let seqs = enum_degree_sequences(*n, *lo, *hi);
            let path = m.out.join(format!("degseq_{n}_{lo}_{hi}.txt"));
            write_lines(&path, &seqs)?;
            ReportRow {
                stage: format!("degree-sequences n={n}"),
                instances: seqs.len(),
                seconds: secs(),
                result: format!("{} sequences", seqs.len()),
                ..Default::default()
            }
        }
        Stage::FilterSequences {
            params: ps,
            input,
            shard,
            other_colors,
            symmetry_break,
            left_column,
        } => {
            let p = params(ps)?;
            let seqs = read_sequences(&m.path(input))?;
            let opts = SequenceOptions {
                other_colors: *other_colors,
                symmetry_break: *symmetry_break,
                left_column: *left_column,
            };
            let r = filter_satisfiable_sequences(
                &p,
                &seqs,
                shard_of(shard)?,
                opts,
                &m.batch("filter-seqs.ledger")?,
            )?;
            if r.is_complete() {
                write_lines(&m.out.join("filter-seqs.survivors.txt"), &r.select(&seqs)?)?;
            }
            filter_row(format!("filter-sequences {p}"), &r, secs())
        }
        Stage::DegreeMatrices { n, k, left, bounds } => {
            let left = read_sequences(&m.path(left))?;
            let mats = enum_degree_matrices(*n, *k, &left, *bounds);
            let path = m.out.join(format!("degmat_{n}_{k}.txt"));
            let mut text = Vec::new();
            for (i, mm) in mats.iter().enumerate() {
                mm.write_block(&format!("m{i:05}"), &mut text)
                    .map_err(|e| Error::file(&path, e))?;
            }
            fs::write(&path, text).map_err(|e| Error::file(&path, e))?;
            ReportRow {
                stage: format!("degree-matrices n={n} k={k}"),
                instances: mats.len(),
                seconds: secs(),
                result: format!("{} matrices", mats.len()),
                ..Default::default()
            }
        }
        Stage::FilterMatrices {
            params: ps,
            input,
            shard,
        } => {
            let p = params(ps)?;
            let mats = read_matrices(&m.path(input))?;
            let r = filter_satisfiable_matrices(
                &p,
                &mats,
                shard_of(shard)?,
                true,
                &m.batch("filter-mats.ledger")?,
            )?;
            if r.is_complete() {
                let path = m.out.join("filter-mats.survivors.txt");
                let mut text = Vec::new();
                for i in &r.survivors {
                    mats[*i]
                        .write_block(&format!("m{i:05}"), &mut text)
                        .map_err(|e| Error::file(&path, e))?;
                }
                fs::write(&path, text).map_err(|e| Error::file(&path, e))?;
            }
            filter_row(format!("filter-matrices {p}"), &r, secs())
        }
        Stage::ColoringsFromMatrices {
            params: ps,
            input,
            shard,
        } => {
            let p = params(ps)?;
            let mats = read_matrices(&m.path(input))?;
            let mut cfg = m.batch("enum.ledger")?;
            cfg.solutions = Some(m.out.join("enum"));
            let r = compute_colorings_from_matrices(&p, &mats, shard_of(shard)?, &cfg)?;
            if r.is_complete() {
                r.set.save(&m.out.join("enum.arc"))?;
            }
            let largest = r.largest().map_or(0, |(_, c)| c);
            ReportRow {
                stage: format!("colorings-from-matrices {p}"),
                instances: mats.len(),
                sat: r.ledger.count(Status::Sat),
                unsat: r.ledger.count(Status::Unsat),
                unknown: r.incomplete.len(),
                seconds: r.ledger.total_seconds(),
                result: format!(
                    "raw={} reduced={} largest={largest}{}",
                    r.raw,
                    r.set.len(),
                    if r.is_complete() { "" } else { " (partial)" }
                ),
            }
        }
        Stage::Gluing { target, triples } => {
            let p = params(target)?;
            let triples: Vec<DegreeTuple> =
                triples.iter().map(|t| DegreeTuple(t.clone())).collect();
            let mut cfg = m.batch("gluing.ledger")?;
            cfg.solutions = Some(m.out.join("gluing-sat"));
            let reports = super::prove_regularity(lib, &p, &triples, &cfg)?;
            let mut row = ReportRow {
                stage: format!("gluing {p}"),
                seconds: secs(),
                ..Default::default()
            };
            let mut verdicts = Vec::new();
            for r in &reports {
                row.instances += r.total;
                row.sat += r.sat.len();
                row.unsat += r.unsat;
                row.unknown += r.unknown.len();
                verdicts.push(format!("{}:{:?}", r.triple, r.verdict()));
            }
            row.result = verdicts.join(" ");
            row
        }
        Stage::Campaign {
            blocks,
            shard,
            dry_run,
            sample,
            seed,
        } => {
            let path = m.path(blocks);
            let text = fs::read_to_string(&path).map_err(|e| Error::file(&path, e))?;
            let r33313 = ColoringSet::parse_archive(&text)?.representatives();
            let c = Campaign::from_library(&r33313, lib)?;
            let shard = shard_of(shard)?;
            if *dry_run {
                let d = c.dry_run(shard, *sample, *seed, Some(&m.out.join("campaign-dry")))?;
                ReportRow {
                    stage: "campaign 4,3,3:30 (dry run)".into(),
                    instances: c.len(),
                    unknown: c.len(),
                    seconds: secs(),
                    result: format!(
                        "encoded {} (avg {:.0} clauses, {:.0} vars); untemplated {}",
                        d.sampled.len(),
                        d.mean_clauses(),
                        d.mean_vars(),
                        c.untemplated_len()
                    ),
                    ..Default::default()
                }
            } else {
                let mut cfg = m.batch("campaign.ledger")?;
                cfg.solutions = Some(m.out.join("campaign-sat"));
                let r = c.run(shard, &cfg)?;
                ReportRow {
                    stage: "campaign 4,3,3:30".into(),
                    instances: r.total,
                    sat: r.sat.len(),
                    unsat: r.unsat,
                    unknown: r.unknown.len(),
                    seconds: r.seconds,
                    result: match r.verdict() {
                        GluingVerdict::Eliminated => "all unsat".into(),
                        GluingVerdict::Found => "COLORING FOUND".into(),
                        GluingVerdict::Incomplete => "incomplete".into(),
                    },
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards() {
        assert_eq!(parse_shard("3..7").unwrap(), 3..7);
        assert_eq!(parse_shard("3..").unwrap(), 3..usize::MAX);
        assert!(parse_shard("7..3").is_err());
        assert!(parse_shard("x").is_err());
    }

    #[test]
    fn runs_a_toy_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            r#"
out = "{}"
backend = "cadical"
workers = 1

[[stage]]
kind = "ramsey-set"
params = "3,3:5"

[[stage]]
kind = "degree-bounds"
params = "3,3:5"
lo = 2
hi = 2

[[stage]]
kind = "degree-sequences"
n = 5
lo = 0
hi = 4

[[stage]]
kind = "filter-sequences"
params = "3,3:5"
input = "degseq_5_0_4.txt"

[[stage]]
kind = "degree-matrices"
n = 5
k = 2
left = "filter-seqs.survivors.txt"

[[stage]]
kind = "filter-matrices"
params = "3,3:5"
input = "degmat_5_2.txt"

[[stage]]
kind = "colorings-from-matrices"
params = "3,3:5"
input = "filter-mats.survivors.txt"
"#,
            dir.path().display()
        );
        let m = Manifest::parse(&text).unwrap();
        let r = run_manifest(&m).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert_eq!(r.rows[1].result, "bounds [2,2] hold");
        assert_eq!(r.rows[3].result, "1 survivors");
        assert_eq!(r.rows[4].instances, 1);
        assert!(
            r.rows[6].result.starts_with("raw=1 reduced=1"),
            "{}",
            r.rows[6].result
        );
        assert!(dir.path().join("report.txt").exists());
        assert!(Manifest::parse("out = 'x'\n[[stage]]\nkind = 'nope'\n").is_err());
    }
}
