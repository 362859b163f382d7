//! Experiments composed from the encoder, enumerators and solver harness.
//!
//! Every long-running stage is a batch over stable instance ids, so it can
//! be sharded by index range and resumed from its ledger.

mod gluing;
mod manifest;

pub use gluing::{
    align_blocks, campaign_433_30, gluing_instance, prove_regularity, run_gluing, BlockClasses,
    BlockLibrary, Campaign, DryRunReport, GluingReport, GluingVerdict, CANDIDATE_TRIPLES,
};
pub use manifest::{parse_shard, run_manifest, Manifest, Report, ReportRow, Stage};

use std::fs;
use std::ops::Range;
use std::path::Path;

use crate::canonical::DegreeMatrix;
use crate::coloring::{parse_colorings, ColorMatrix, RamseyCheck, RamseyParams};
use crate::coloring_set::ColoringSet;
use crate::degree::{enum_degree_matrices, DegreeSequence};
use crate::encoder::{
    encode_color_column, encode_degree_bounds_violation, encode_degree_matrix, encode_degree_range,
    encode_lex_symbreak, encode_partitioned_symbreak, encode_ramsey, CnfFormula, VarMap,
};
use crate::error::{Error, Result};
use crate::solver::{
    decode, run_batch, solve, AllSolutions, BackendKind, BatchConfig, BatchLedger, Instance,
    Limits, Mode, SolveStatus, Status,
};

pub(crate) fn ensure_ramsey(a: &ColorMatrix, p: &RamseyParams) -> Result<()> {
    match a.verify_ramsey(p)? {
        RamseyCheck::Ok => Ok(()),
        v => Err(Error::Soundness(format!(
            "decoded coloring is not a {p} coloring: {v:?}"
        ))),
    }
}

/// All `p` colorings under the lex symmetry break, reduced modulo weak
/// isomorphism. `raw_count()` of the result is the number of models.
pub fn compute_ramsey_set(
    p: &RamseyParams,
    backend: &BackendKind,
    limits: &Limits,
) -> Result<ColoringSet> {
    let (vm, mut f) = encode_ramsey(p);
    encode_lex_symbreak(&vm, &mut f);
    let mut set = ColoringSet::new(Some(p.clone()));
    let proj = vm.edge_vars();
    for m in AllSolutions::new(&f, &proj, backend, limits)? {
        let a = decode(&m?, &vm)?;
        ensure_ramsey(&a, p)?;
        set.insert(&a)?;
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundsVerdict {
    /// No coloring has a color degree outside the range.
    Holds,
    /// The range already contains every possible degree.
    Vacuous,
    Violated(ColorMatrix),
    Unknown,
}

/// Asks whether some `p` coloring has a color degree outside `[lo, hi]`.
/// Vertex 1 stands for every vertex.
pub fn degree_bounds(
    p: &RamseyParams,
    lo: u32,
    hi: u32,
    backend: &BackendKind,
    limits: &Limits,
) -> Result<BoundsVerdict> {
    let (vm, mut f) = encode_ramsey(p);
    if p.n() < 2 || !encode_degree_bounds_violation(&vm, &mut f, 0, lo as usize, hi as usize)? {
        return Ok(BoundsVerdict::Vacuous);
    }
    let r = solve(&f, backend, limits)?;
    Ok(match r.status {
        SolveStatus::Unsat => BoundsVerdict::Holds,
        SolveStatus::Timeout => BoundsVerdict::Unknown,
        SolveStatus::Sat => {
            let a = decode(r.model.as_ref().expect("sat carries a model"), &vm)?;
            ensure_ramsey(&a, p)?;
            BoundsVerdict::Violated(a)
        }
    })
}

fn require_equal_sizes(p: &RamseyParams) -> Result<()> {
    let r = p.clique_sizes();
    if r.iter().any(|&x| x != r[0]) {
        return Err(Error::usage(format!(
            "degree-matrix stages need equal clique sizes, got {p}"
        )));
    }
    Ok(())
}

/// Extra constraints for the degree-sequence instances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SequenceOptions {
    /// Degree range imposed on every color other than 1 at every vertex.
    pub other_colors: Option<(u32, u32)>,
    /// Lex-order rows of vertices with equal color-1 degree.
    pub symmetry_break: bool,
    /// Reject, before solving, sequences that are not the left column of
    /// any lex-sorted degree matrix (other columns within `other_colors`).
    pub left_column: bool,
}

/// Whether `seq` heads some lex-sorted `n x k` degree matrix.
pub fn is_left_column(seq: &DegreeSequence, k: usize, bounds: Option<(u32, u32)>) -> bool {
    !enum_degree_matrices(seq.len(), k, std::slice::from_ref(seq), bounds).is_empty()
}

/// `p` with color-1 degrees `seq`, bound to vertices in order.
pub fn sequence_instance(
    p: &RamseyParams,
    seq: &DegreeSequence,
    opts: SequenceOptions,
) -> Result<(VarMap, CnfFormula)> {
    let (vm, mut f) = encode_ramsey(p);
    encode_color_column(&vm, &mut f, 1, seq.as_slice())?;
    if let Some((lo, hi)) = opts.other_colors {
        for v in 0..p.n() {
            for c in 2..=p.k() {
                encode_degree_range(&vm, &mut f, v, c, lo as usize, hi as usize)?;
            }
        }
    }
    if opts.symmetry_break {
        let m = DegreeMatrix::new(1, seq.as_slice().iter().map(|&d| vec![d]).collect())?;
        encode_partitioned_symbreak(&vm, &mut f, &m)?;
    }
    Ok((vm, f))
}

/// `dm(A) = M` with rows bound to vertices in order, plus the partitioned
/// symmetry break when asked.
pub fn matrix_instance(
    p: &RamseyParams,
    m: &DegreeMatrix,
    symmetry_break: bool,
) -> Result<(VarMap, CnfFormula)> {
    if m.n() != p.n() || m.k() != p.k() {
        return Err(Error::usage(format!(
            "degree matrix is {}x{}, params {p} need {}x{}",
            m.n(),
            m.k(),
            p.n(),
            p.k()
        )));
    }
    let (vm, mut f) = encode_ramsey(p);
    encode_degree_matrix(&vm, &mut f, m)?;
    if symmetry_break {
        encode_partitioned_symbreak(&vm, &mut f, m)?;
    }
    Ok((vm, f))
}

/// Outcome of a satisfiability filter over an indexed input list.
#[derive(Clone, Debug)]
pub struct FilterReport {
    pub total: usize,
    pub survivors: Vec<usize>,
    pub eliminated: Vec<usize>,
    /// Inputs refused before solving.
    pub rejected: Vec<usize>,
    /// Not yet run, timed out or failed.
    pub unknown: Vec<usize>,
    pub ledger: BatchLedger,
}

impl FilterReport {
    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty()
    }

    /// The surviving inputs; refuses while any input is unknown.
    pub fn select<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        if !self.is_complete() {
            return Err(Error::usage(format!(
                "{} of {} inputs are still unknown",
                self.unknown.len(),
                self.total
            )));
        }
        Ok(self.survivors.iter().map(|&i| items[i].clone()).collect())
    }
}

pub fn instance_id(prefix: &str, index: usize) -> String {
    format!("{prefix}_{index:05}")
}

fn clip(shard: Range<usize>, total: usize) -> Range<usize> {
    shard.start.min(total)..shard.end.min(total)
}

fn summarize(
    prefix: &str,
    total: usize,
    rejected: Vec<usize>,
    ledger: BatchLedger,
) -> FilterReport {
    let mut r = FilterReport {
        total,
        survivors: Vec::new(),
        eliminated: Vec::new(),
        rejected,
        unknown: Vec::new(),
        ledger,
    };
    for i in 0..total {
        if r.rejected.contains(&i) {
            continue;
        }
        match r.ledger.get(&instance_id(prefix, i)).map(|e| e.status) {
            Some(Status::Sat) => r.survivors.push(i),
            Some(Status::Unsat) => r.eliminated.push(i),
            _ => r.unknown.push(i),
        }
    }
    r
}

/// Keeps the sequences `s` for which some `p` coloring has color-1 degrees
/// `s`. Only indices in `shard` are solved; the report covers every input
/// using whatever the ledger already holds.
pub fn filter_satisfiable_sequences(
    p: &RamseyParams,
    seqs: &[DegreeSequence],
    shard: Range<usize>,
    opts: SequenceOptions,
    cfg: &BatchConfig,
) -> Result<FilterReport> {
    let prefix = "seq";
    let rejected: Vec<usize> = if opts.left_column {
        (0..seqs.len())
            .filter(|&i| !is_left_column(&seqs[i], p.k(), opts.other_colors))
            .collect()
    } else {
        Vec::new()
    };
    let ids: Vec<String> = clip(shard, seqs.len())
        .filter(|i| !rejected.contains(i))
        .map(|i| instance_id(prefix, i))
        .collect();
    let ledger = run_batch(
        &ids,
        |id| {
            let i = index_of(id)?;
            let (_, formula) = sequence_instance(p, &seqs[i], opts)?;
            Ok(Instance {
                id: id.to_string(),
                formula,
                mode: Mode::Solve,
                varmap: None,
            })
        },
        cfg,
    )?;
    Ok(summarize(prefix, seqs.len(), rejected, ledger))
}

fn index_of(id: &str) -> Result<usize> {
    id.rsplit('_')
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::usage(format!("malformed instance id `{id}`")))
}

fn rejected_matrices(p: &RamseyParams, mats: &[DegreeMatrix]) -> Vec<usize> {
    mats.iter()
        .enumerate()
        .filter(|(_, m)| m.n() != p.n() || m.k() != p.k() || !m.rows_sum_to_degree())
        .map(|(i, _)| i)
        .collect()
}

/// Keeps the degree matrices realized by some `p` coloring.
pub fn filter_satisfiable_matrices(
    p: &RamseyParams,
    mats: &[DegreeMatrix],
    shard: Range<usize>,
    symmetry_break: bool,
    cfg: &BatchConfig,
) -> Result<FilterReport> {
    require_equal_sizes(p)?;
    let prefix = "mat";
    let rejected = rejected_matrices(p, mats);
    let ids: Vec<String> = clip(shard, mats.len())
        .filter(|i| !rejected.contains(i))
        .map(|i| instance_id(prefix, i))
        .collect();
    let ledger = run_batch(
        &ids,
        |id| {
            let (_, formula) = matrix_instance(p, &mats[index_of(id)?], symmetry_break)?;
            Ok(Instance {
                id: id.to_string(),
                formula,
                mode: Mode::Solve,
                varmap: None,
            })
        },
        cfg,
    )?;
    Ok(summarize(prefix, mats.len(), rejected, ledger))
}

/// Union of all colorings per degree matrix.
#[derive(Debug)]
pub struct MatrixColorings {
    pub set: ColoringSet,
    /// Models summed over matrices.
    pub raw: usize,
    /// `(matrix index, models)` for every finished matrix.
    pub per_matrix: Vec<(usize, usize)>,
    /// Matrices without a finished enumeration; the union is partial
    /// while this is non-empty.
    pub incomplete: Vec<usize>,
    pub ledger: BatchLedger,
}

impl MatrixColorings {
    pub fn is_complete(&self) -> bool {
        self.incomplete.is_empty()
    }

    /// `(matrix index, models)` of the largest yield.
    pub fn largest(&self) -> Option<(usize, usize)> {
        self.per_matrix
            .iter()
            .copied()
            .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))
    }
}

/// Enumerates every coloring with each degree matrix under the partitioned
/// symmetry break, then reduces the union. Decoded models go to
/// `cfg.solutions`, which is required.
pub fn compute_colorings_from_matrices(
    p: &RamseyParams,
    mats: &[DegreeMatrix],
    shard: Range<usize>,
    cfg: &BatchConfig,
) -> Result<MatrixColorings> {
    require_equal_sizes(p)?;
    let dir = cfg
        .solutions
        .clone()
        .ok_or_else(|| Error::usage("a solutions directory is required"))?;
    let prefix = "enum";
    let rejected = rejected_matrices(p, mats);
    let ids: Vec<String> = clip(shard, mats.len())
        .filter(|i| !rejected.contains(i))
        .map(|i| instance_id(prefix, i))
        .collect();
    let ledger = run_batch(
        &ids,
        |id| {
            let (vm, formula) = matrix_instance(p, &mats[index_of(id)?], true)?;
            Ok(Instance {
                id: id.to_string(),
                formula,
                mode: Mode::All {
                    projection: vm.edge_vars(),
                },
                varmap: Some(vm),
            })
        },
        cfg,
    )?;

    let mut out = MatrixColorings {
        set: ColoringSet::new(Some(p.clone())),
        raw: 0,
        per_matrix: Vec::new(),
        incomplete: Vec::new(),
        ledger,
    };
    for i in 0..mats.len() {
        if rejected.contains(&i) {
            out.per_matrix.push((i, 0));
            continue;
        }
        let id = instance_id(prefix, i);
        match out.ledger.get(&id).map(|e| (e.status, e.count)) {
            Some((Status::Unsat, _)) => out.per_matrix.push((i, 0)),
            Some((Status::Sat, count)) => {
                let path = dir.join(format!("{id}.txt"));
                let Ok(text) = fs::read_to_string(&path) else {
                    out.incomplete.push(i);
                    continue;
                };
                let colorings = parse_colorings(&text)?;
                if colorings.len() != count {
                    return Err(Error::Soundness(format!(
                        "{} holds {} colorings, ledger says {count}",
                        path.display(),
                        colorings.len()
                    )));
                }
                for a in &colorings {
                    ensure_ramsey(a, p)?;
                }
                out.set.extend_parallel(&colorings)?;
                out.raw += count;
                out.per_matrix.push((i, count));
            }
            _ => out.incomplete.push(i),
        }
    }
    Ok(out)
}

/// Reads sequences, one per line.
pub fn read_sequences(path: &Path) -> Result<Vec<DegreeSequence>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    DegreeSequence::parse_many(&text)
}

/// Reads degree-matrix blocks.
pub fn read_matrices(path: &Path) -> Result<Vec<DegreeMatrix>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    Ok(DegreeMatrix::parse_many(&text)?
        .into_iter()
        .map(|(_, m)| m)
        .collect())
}
