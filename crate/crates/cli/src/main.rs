use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use ramsat_core::canonical::{canonical_form, DegreeMatrix};
use ramsat_core::coloring::parse_colorings;
use ramsat_core::degree::{count_degree_sequences, enum_degree_matrices, enum_degree_sequences};
use ramsat_core::encoder::{encode_circulant, encode_lex_symbreak, encode_ramsey};
use ramsat_core::pipeline::{
    compute_colorings_from_matrices, degree_bounds, filter_satisfiable_matrices,
    filter_satisfiable_sequences, parse_shard, read_matrices, read_sequences, run_gluing,
    run_manifest, BlockClasses, BlockLibrary, BoundsVerdict, Campaign, FilterReport, GluingVerdict,
    Manifest, SequenceOptions,
};
use ramsat_core::solver::{decode, solve, AllSolutions, BatchConfig, SolveStatus};
use ramsat_core::{
    reduce_mod_weak_iso, BackendKind, CnfFormula, ColorMatrix, ColoringSet, DegreeTuple, Error,
    Limits, Lit, RamseyCheck, RamseyParams,
};

const EXIT_USAGE: u8 = 1;
const EXIT_BACKEND: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_UNEXPECTED_SAT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ramsat",
    version,
    about = "SAT-based Ramsey coloring experiments"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Worker threads for batches [default: number of cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// `cadical`, `batsat`, or a solver executable [default: $RAMSAT_SOLVER or cadical]
    #[arg(long, global = true)]
    backend: Option<String>,
    /// Per-solve timeout in seconds
    #[arg(long, global = true)]
    timeout: Option<u64>,
    /// Log more (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct BatchArgs {
    /// Half-open index range `A..B`
    #[arg(long, default_value = "0..")]
    shard: String,
    /// Ledger file; rerunning with the same ledger resumes
    #[arg(long)]
    ledger: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// All colorings for PARAMS modulo weak isomorphism
    RamseySet {
        #[arg(long)]
        params: RamseyParams,
        /// Archive directory (reused when the archive exists)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prove every color degree lies in [lo, hi] (UNSAT of a violation)
    Bounds {
        #[arg(long)]
        params: RamseyParams,
        #[arg(long)]
        lo: u32,
        #[arg(long)]
        hi: u32,
    },
    /// Graphical degree sequences with entries in [lo, hi]
    Degseq {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        lo: u32,
        #[arg(long)]
        hi: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lex-sorted degree matrices over the given left columns
    Degmat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        left: PathBuf,
        /// Range `LO,HI` for the other columns
        #[arg(long, value_parser = parse_pair)]
        bounds: Option<(u32, u32)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep degree sequences realizable as color-1 degrees
    FilterSeqs {
        #[arg(long)]
        params: RamseyParams,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        /// Degree range `LO,HI` for the other colors
        #[arg(long, value_parser = parse_pair)]
        other_colors: Option<(u32, u32)>,
        #[arg(long)]
        symmetry_break: bool,
        /// Reject sequences that head no lex-sorted degree matrix
        #[arg(long)]
        left_column: bool,
        /// Survivors file, written once every input is decided
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep degree matrices realized by some coloring
    FilterMats {
        #[arg(long)]
        params: RamseyParams,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all colorings per degree matrix and reduce the union
    FromMatrices {
        #[arg(long)]
        params: RamseyParams,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long)]
        solutions: PathBuf,
        /// Archive of the reduced union, written once complete
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gluing batch for one degree triple of the pivot vertex
    Glue {
        #[arg(long)]
        target: RamseyParams,
        #[arg(long, value_parser = parse_tuple)]
        triple: DegreeTuple,
        /// Block library directory
        #[arg(long)]
        blocks: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long)]
        solutions: Option<PathBuf>,
        /// Use every isomorphism class of blocks, not one per weak class
        #[arg(long)]
        strong_blocks: bool,
    },
    /// The regular-triple (4,3,3;30) campaign
    Campaign {
        /// Archive of the color-1 blocks
        #[arg(long)]
        r33313: PathBuf,
        /// Block library directory
        #[arg(long)]
        blocks: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        /// Encode and check a random sample instead of solving
        #[arg(long)]
        dry_run: bool,
        #[arg(long, default_value_t = 100)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// DIMACS output directory for the dry run
        #[arg(long)]
        cnf_dir: Option<PathBuf>,
    },
    /// Canonical keys (and forms) of colorings
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print each canonical form
        #[arg(long)]
        forms: bool,
    },
    /// Reduce colorings modulo weak isomorphism
    Reduce {
        /// A coloring file or a directory of them
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that each coloring in a file is a Ramsey coloring
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        params: RamseyParams,
    },
    /// Encode a Ramsey problem as DIMACS
    Encode {
        #[arg(long)]
        params: RamseyParams,
        #[arg(long)]
        lex: bool,
        #[arg(long)]
        circulant: bool,
        #[arg(long)]
        out: PathBuf,
        /// Variable sidecar (`i j c var` per line)
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Solve a DIMACS file or a Ramsey problem directly
    Solve {
        #[arg(long, conflicts_with = "params")]
        cnf: Option<PathBuf>,
        #[arg(long)]
        params: Option<RamseyParams>,
        #[arg(long, requires = "params")]
        lex: bool,
        #[arg(long, requires = "params")]
        circulant: bool,
        /// Enumerate all models
        #[arg(long)]
        all: bool,
        /// `edges` (needs --params or --n/--k), `all`, or `1..V`
        #[arg(long, default_value = "edges")]
        project: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Write decoded colorings (or models) here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment manifest
    Run {
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_tuple(s: &str) -> Result<DegreeTuple, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(DegreeTuple)
}

struct Ctx {
    backend: BackendKind,
    limits: Limits,
    workers: Option<usize>,
}

impl Ctx {
    fn batch(&self, b: &BatchArgs) -> anyhow::Result<(BatchConfig, std::ops::Range<usize>)> {
        let mut cfg = BatchConfig::new(&b.ledger);
        cfg.backend = self.backend.clone();
        cfg.limits = self.limits;
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        Ok((cfg, parse_shard(&b.shard)?))
    }
}

/// Exit status chosen by a command that otherwise succeeded.
type Status = u8;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Backend { .. } | Error::Soundness(_)) => EXIT_BACKEND,
        Some(Error::Timeout { .. }) => EXIT_TIMEOUT,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let backend = match &cli.global.backend {
        Some(b) => b.parse()?,
        None => BackendKind::from_env()?,
    };
    let limits = cli
        .global
        .timeout
        .map_or_else(Limits::default, |s| Limits::timeout(Duration::from_secs(s)));
    let ctx = Ctx {
        backend,
        limits,
        workers: cli.global.workers,
    };

    match cli.cmd {
        Cmd::RamseySet { params, out } => {
            let set = match out {
                Some(dir) => {
                    BlockLibrary::new(dir, ctx.backend.clone(), ctx.limits).ramsey_set(&params)?
                }
                None => {
                    ramsat_core::pipeline::compute_ramsey_set(&params, &ctx.backend, &ctx.limits)?
                }
            };
            println!("raw={} reduced={}", set.raw_count(), set.len());
            Ok(0)
        }
        Cmd::Bounds { params, lo, hi } => {
            let start = std::time::Instant::now();
            let v = degree_bounds(&params, lo, hi, &ctx.backend, &ctx.limits)?;
            let secs = start.elapsed().as_secs_f64();
            Ok(match v {
                BoundsVerdict::Holds => {
                    println!("unsat {secs:.2}s; bounds hold");
                    0
                }
                BoundsVerdict::Vacuous => {
                    println!("vacuous; every degree is within [{lo}, {hi}]");
                    0
                }
                BoundsVerdict::Violated(a) => {
                    println!("sat {secs:.2}s; counterexample:");
                    print!("{a}");
                    EXIT_UNEXPECTED_SAT
                }
                BoundsVerdict::Unknown => {
                    println!("timeout {secs:.2}s");
                    EXIT_TIMEOUT
                }
            })
        }
        Cmd::Degseq { n, lo, hi, out } => {
            let hi = hi.unwrap_or(n.saturating_sub(1) as u32);
            match out {
                Some(path) => {
                    let seqs = enum_degree_sequences(n, lo, hi);
                    write_lines(&path, seqs.iter())?;
                    println!("{}", seqs.len());
                }
                None => println!("{}", count_degree_sequences(n, lo, hi)),
            }
            Ok(0)
        }
        Cmd::Degmat {
            n,
            k,
            left,
            bounds,
            out,
        } => {
            let left = read_sequences(&left)?;
            let mats = enum_degree_matrices(n, k, &left, bounds);
            if let Some(path) = out {
                write_matrices(&path, mats.iter().enumerate())?;
            }
            println!("{}", mats.len());
            Ok(0)
        }
        Cmd::FilterSeqs {
            params,
            input,
            batch,
            other_colors,
            symmetry_break,
            left_column,
            out,
        } => {
            let seqs = read_sequences(&input)?;
            let (cfg, shard) = ctx.batch(&batch)?;
            let opts = SequenceOptions {
                other_colors,
                symmetry_break,
                left_column,
            };
            let r = filter_satisfiable_sequences(&params, &seqs, shard, opts, &cfg)?;
            print_filter(&r);
            if let (Some(path), true) = (out, r.is_complete()) {
                write_lines(&path, r.select(&seqs)?.iter())?;
            }
            Ok(filter_status(&r))
        }
        Cmd::FilterMats {
            params,
            input,
            batch,
            out,
        } => {
            let mats = read_matrices(&input)?;
            let (cfg, shard) = ctx.batch(&batch)?;
            let r = filter_satisfiable_matrices(&params, &mats, shard, true, &cfg)?;
            print_filter(&r);
            if let (Some(path), true) = (out, r.is_complete()) {
                write_matrices(&path, r.survivors.iter().map(|&i| (i, &mats[i])))?;
            }
            Ok(filter_status(&r))
        }
        Cmd::FromMatrices {
            params,
            input,
            batch,
            solutions,
            out,
        } => {
            let mats = read_matrices(&input)?;
            let (mut cfg, shard) = ctx.batch(&batch)?;
            cfg.solutions = Some(solutions);
            let r = compute_colorings_from_matrices(&params, &mats, shard, &cfg)?;
            let largest = r.largest().map_or(0, |(_, c)| c);
            println!(
                "raw={} reduced={} largest={largest} incomplete={}",
                r.raw,
                r.set.len(),
                r.incomplete.len()
            );
            if let (Some(path), true) = (out, r.is_complete()) {
                r.set.save(&path)?;
            }
            Ok(
                if r.ledger
                    .iter()
                    .any(|(_, e)| e.status == ramsat_core::solver::Status::Timeout)
                {
                    EXIT_TIMEOUT
                } else {
                    0
                },
            )
        }
        Cmd::Glue {
            target,
            triple,
            blocks,
            batch,
            solutions,
            strong_blocks,
        } => {
            let classes = if strong_blocks {
                BlockClasses::Strong
            } else {
                BlockClasses::Weak
            };
            let lib =
                BlockLibrary::new(blocks, ctx.backend.clone(), ctx.limits).with_classes(classes);
            let gi = lib.instances(&target, &triple)?;
            let (mut cfg, shard) = ctx.batch(&batch)?;
            cfg.solutions = solutions;
            let r = run_gluing(&gi, shard, None, &cfg)?;
            println!(
                "triple={} instances={} unsat={} sat={} unknown={} seconds={:.2}",
                r.triple,
                r.total,
                r.unsat,
                r.sat.len(),
                r.unknown.len(),
                r.seconds
            );
            Ok(gluing_status(&r))
        }
        Cmd::Campaign {
            r33313,
            blocks,
            batch,
            dry_run,
            sample,
            seed,
            cnf_dir,
        } => {
            let text = fs::read_to_string(&r33313).with_context(|| r33313.display().to_string())?;
            let blocks1 = ColoringSet::parse_archive(&text)?.representatives();
            let lib = BlockLibrary::new(blocks, ctx.backend.clone(), ctx.limits);
            let c = Campaign::from_library(&blocks1, &lib)?;
            let (cfg, shard) = ctx.batch(&batch)?;
            if dry_run {
                let d = c.dry_run(shard, sample, seed, cnf_dir.as_deref())?;
                println!(
                    "instances={} untemplated={} encoded={} written={} resumed={} avg_clauses={:.0} avg_vars={:.0}",
                    c.len(),
                    c.untemplated_len(),
                    d.sampled.len(),
                    d.written,
                    d.resumed,
                    d.mean_clauses(),
                    d.mean_vars()
                );
                return Ok(0);
            }
            let r = c.run(shard, &cfg)?;
            println!(
                "instances={} unsat={} sat={} unknown={}",
                r.total,
                r.unsat,
                r.sat.len(),
                r.unknown.len()
            );
            Ok(gluing_status(&r))
        }
        Cmd::Canon { input, forms } => {
            for a in read_colorings(&input)? {
                let (rep, key) = canonical_form(&a)?;
                println!("{key}");
                if forms {
                    println!("{rep}");
                }
            }
            Ok(0)
        }
        Cmd::Reduce { input, out } => {
            let all = if input.is_dir() {
                let mut paths: Vec<PathBuf> = fs::read_dir(&input)
                    .with_context(|| input.display().to_string())?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "txt"))
                    .collect();
                paths.sort();
                let mut v = Vec::new();
                for p in paths {
                    v.extend(read_colorings(&p)?);
                }
                v
            } else {
                read_colorings(&input)?
            };
            let set = reduce_mod_weak_iso(all)?;
            println!("raw={} reduced={}", set.raw_count(), set.len());
            if let Some(path) = out {
                set.save(&path)?;
            }
            Ok(0)
        }
        Cmd::Verify { input, params } => {
            let all = read_colorings(&input)?;
            if all.is_empty() {
                bail!("{}: no colorings", input.display());
            }
            let mut bad = false;
            for a in &all {
                match a.verify_ramsey(&params)? {
                    RamseyCheck::Ok => match a.regular_tuple() {
                        Some(t) => {
                            let d: Vec<String> = t.0.iter().map(|x| x.to_string()).collect();
                            println!("ok; regular \u{27e8}{}\u{27e9}", d.join(","));
                        }
                        None => println!("ok; not regular"),
                    },
                    RamseyCheck::Violation { color, vertices } => {
                        let vs: Vec<String> =
                            vertices.iter().map(|v| (v + 1).to_string()).collect();
                        println!("violation; color {color} clique on {{{}}}", vs.join(","));
                        bad = true;
                    }
                }
            }
            Ok(if bad { EXIT_USAGE } else { 0 })
        }
        Cmd::Encode {
            params,
            lex,
            circulant,
            out,
            sidecar,
        } => {
            let (vm, f) = ramsey_formula(&params, lex, circulant);
            fs::write(&out, f.to_dimacs()).with_context(|| out.display().to_string())?;
            if let Some(path) = sidecar {
                fs::write(&path, vm.sidecar()).with_context(|| path.display().to_string())?;
            }
            println!("vars={} clauses={}", f.num_vars(), f.num_clauses());
            Ok(0)
        }
        Cmd::Solve {
            cnf,
            params,
            lex,
            circulant,
            all,
            project,
            n,
            k,
            out,
        } => solve_cmd(
            &ctx,
            cnf,
            params,
            lex,
            circulant,
            all,
            &project,
            n.zip(k),
            out,
        ),
        Cmd::Run { manifest } => {
            let m = Manifest::load(&manifest)?;
            let r = run_manifest(&m)?;
            print!("{r}");
            Ok(if r.rows.iter().any(|row| row.unknown > 0) {
                EXIT_TIMEOUT
            } else {
                0
            })
        }
    }
}

fn ramsey_formula(
    p: &RamseyParams,
    lex: bool,
    circulant: bool,
) -> (ramsat_core::VarMap, CnfFormula) {
    let (vm, mut f) = encode_ramsey(p);
    if circulant {
        f.extend(encode_circulant(&vm));
    }
    if lex {
        encode_lex_symbreak(&vm, &mut f);
    }
    (vm, f)
}

#[allow(clippy::too_many_arguments)]
fn solve_cmd(
    ctx: &Ctx,
    cnf: Option<PathBuf>,
    params: Option<RamseyParams>,
    lex: bool,
    circulant: bool,
    all: bool,
    project: &str,
    nk: Option<(usize, usize)>,
    out: Option<PathBuf>,
) -> anyhow::Result<Status> {
    let (f, vm) = match (&cnf, &params) {
        (Some(path), _) => {
            let file = fs::File::open(path).with_context(|| path.display().to_string())?;
            let f = CnfFormula::read_dimacs(std::io::BufReader::new(file))?;
            (f, nk.map(|(n, k)| ramsat_core::VarMap::new(n, k)))
        }
        (None, Some(p)) => {
            let (vm, f) = ramsey_formula(p, lex, circulant);
            (f, Some(vm))
        }
        (None, None) => bail!("give --cnf or --params"),
    };
    if let Some(vm) = &vm {
        if vm.num_vars() > f.num_vars() {
            bail!(
                "--n/--k describe {} edge variables, formula has {}",
                vm.num_vars(),
                f.num_vars()
            );
        }
    }
    let proj: Vec<Lit> = match project {
        "edges" => vm
            .map(|vm| vm.edge_vars())
            .ok_or_else(|| anyhow!("--project edges needs --params or --n and --k"))?,
        "all" => (1..=f.num_vars() as Lit).collect(),
        r => {
            let range = parse_shard(r)?;
            (range.start.max(1)..range.end.min(f.num_vars() + 1))
                .map(|v| v as Lit)
                .collect()
        }
    };
    let render = |m: &ramsat_core::Model| -> anyhow::Result<String> {
        Ok(match &vm {
            Some(vm) => decode(m, vm)?.to_string(),
            None => {
                let lits: Vec<String> = proj
                    .iter()
                    .map(|&v| if m.value(v) { v } else { -v }.to_string())
                    .collect();
                format!("v {} 0\n", lits.join(" "))
            }
        })
    };

    if !all {
        let r = solve(&f, &ctx.backend, &ctx.limits)?;
        match r.status {
            SolveStatus::Sat => {
                println!("sat {:.3}s", r.seconds);
                let text = render(r.model.as_ref().expect("sat carries a model"))?;
                if let (Some(vm), Some(p)) = (&vm, &params) {
                    let a = decode(r.model.as_ref().expect("model"), vm)?;
                    if a.verify_ramsey(p)? != RamseyCheck::Ok {
                        return Err(
                            Error::Soundness("decoded coloring fails verification".into()).into(),
                        );
                    }
                }
                match out {
                    Some(path) => {
                        fs::write(&path, text).with_context(|| path.display().to_string())?
                    }
                    None => print!("{text}"),
                }
                Ok(0)
            }
            SolveStatus::Unsat => {
                println!("unsat {:.3}s", r.seconds);
                Ok(0)
            }
            SolveStatus::Timeout => {
                println!("timeout {:.3}s", r.seconds);
                Ok(EXIT_TIMEOUT)
            }
        }
    } else {
        let mut it = AllSolutions::new(&f, &proj, &ctx.backend, &ctx.limits)?;
        let mut text = String::new();
        let status = loop {
            match it.next_model() {
                Ok(Some(m)) => {
                    text.push_str(&render(&m)?);
                    text.push('\n');
                }
                Ok(None) => break 0,
                Err(Error::Timeout { .. }) => break EXIT_TIMEOUT,
                Err(e) => return Err(e.into()),
            }
        };
        println!(
            "models={}{}",
            it.found(),
            if status == 0 { "" } else { " (timeout)" }
        );
        if let Some(path) = out {
            fs::write(&path, text).with_context(|| path.display().to_string())?;
        }
        Ok(status)
    }
}

fn print_filter(r: &FilterReport) {
    println!(
        "total={} sat={} unsat={} rejected={} unknown={}",
        r.total,
        r.survivors.len(),
        r.eliminated.len(),
        r.rejected.len(),
        r.unknown.len()
    );
}

fn filter_status(r: &FilterReport) -> Status {
    let timed_out = r
        .ledger
        .iter()
        .any(|(_, e)| e.status == ramsat_core::solver::Status::Timeout);
    if timed_out {
        EXIT_TIMEOUT
    } else {
        0
    }
}

fn gluing_status(r: &ramsat_core::pipeline::GluingReport) -> Status {
    match r.verdict() {
        GluingVerdict::Found => {
            for (i, a) in &r.sat {
                eprintln!("satisfiable gluing instance {i}");
                if let Some(a) = a {
                    eprint!("{a}");
                }
            }
            EXIT_UNEXPECTED_SAT
        }
        GluingVerdict::Eliminated => 0,
        GluingVerdict::Incomplete => {
            let timed_out = r
                .ledger
                .iter()
                .any(|(_, e)| e.status == ramsat_core::solver::Status::Timeout);
            if timed_out {
                EXIT_TIMEOUT
            } else {
                0
            }
        }
    }
}

fn read_colorings(path: &Path) -> anyhow::Result<Vec<ColorMatrix>> {
    let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
    if text.trim_start().starts_with("raw ") || text.trim_start().starts_with("key ") {
        return Ok(ColoringSet::parse_archive(&text)?.representatives());
    }
    Ok(parse_colorings(&text)?)
}

fn write_lines<T: std::fmt::Display>(
    path: &Path,
    items: impl Iterator<Item = T>,
) -> anyhow::Result<()> {
    let text: String = items.map(|x| format!("{x}\n")).collect();
    fs::write(path, text).with_context(|| path.display().to_string())
}

fn write_matrices<'a>(
    path: &Path,
    mats: impl Iterator<Item = (usize, &'a DegreeMatrix)>,
) -> anyhow::Result<()> {
    let mut out = Vec::new();
    for (i, m) in mats {
        m.write_block(&format!("m{i:05}"), &mut out)?;
    }
    fs::write(path, out).with_context(|| path.display().to_string())
}
