//! SAT backends, model decoding, all-solutions enumeration and batches.

mod backend;
mod batch;

pub use backend::{
    parse_solver_output, Answer, Backend, BackendKind, BatsatBackend, CadicalBackend,
    ExternalBackend, SOLVER_ENV,
};
pub use batch::{run_batch, BatchConfig, BatchLedger, Instance, LedgerEntry, Mode, Status};

use std::time::{Duration, Instant};

use crate::coloring::ColorMatrix;
use crate::encoder::{CnfFormula, Lit, Model, VarMap};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(24 * 3600);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            timeout: Some(DEFAULT_TIMEOUT),
        }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits { timeout: None }
    }

    pub fn timeout(d: Duration) -> Self {
        Limits { timeout: Some(d) }
    }

    fn deadline(&self, start: Instant) -> Option<Instant> {
        self.timeout.and_then(|t| start.checked_add(t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub model: Option<Model>,
    pub seconds: f64,
    pub backend: String,
}

fn check_model(f: &CnfFormula, m: &Model, backend: &str) -> Result<()> {
    match f.first_falsified(m) {
        None => Ok(()),
        Some(i) => Err(Error::Soundness(format!(
            "{backend} returned a model falsifying clause {i}: {:?}",
            f.clauses()[i]
        ))),
    }
}

/// Single solve; a returned model has been checked against every clause.
pub fn solve(f: &CnfFormula, kind: &BackendKind, limits: &Limits) -> Result<SolveResult> {
    let start = Instant::now();
    let mut b = kind.create();
    for cl in f.clauses() {
        b.add_clause(cl);
    }
    let answer = b.solve(f.num_vars(), limits.deadline(start))?;
    let seconds = start.elapsed().as_secs_f64();
    let backend = kind.id();
    Ok(match answer {
        Answer::Sat(m) => {
            check_model(f, &m, &backend)?;
            SolveResult {
                status: SolveStatus::Sat,
                model: Some(m),
                seconds,
                backend,
            }
        }
        Answer::Unsat => SolveResult {
            status: SolveStatus::Unsat,
            model: None,
            seconds,
            backend,
        },
        Answer::Unknown => SolveResult {
            status: SolveStatus::Timeout,
            model: None,
            seconds,
            backend,
        },
    })
}

/// Enumerates projected models with blocking clauses.
///
/// Each call to [`AllSolutions::next_model`] returns a model whose
/// projection differs from all earlier ones. The blocking clauses issued
/// so far form a cursor that [`AllSolutions::resume`] accepts.
pub struct AllSolutions<'a> {
    formula: &'a CnfFormula,
    projection: Vec<Lit>,
    backend: Box<dyn Backend>,
    backend_id: String,
    deadline: Option<Instant>,
    blocked: Vec<Vec<Lit>>,
    done: bool,
}

impl<'a> AllSolutions<'a> {
    pub fn new(
        f: &'a CnfFormula,
        projection: &[Lit],
        kind: &BackendKind,
        limits: &Limits,
    ) -> Result<Self> {
        Self::resume(f, projection, kind, limits, &[])
    }

    pub fn resume(
        f: &'a CnfFormula,
        projection: &[Lit],
        kind: &BackendKind,
        limits: &Limits,
        cursor: &[Vec<Lit>],
    ) -> Result<Self> {
        if let Some(&v) = projection
            .iter()
            .find(|&&v| v < 1 || v as usize > f.num_vars())
        {
            return Err(Error::usage(format!(
                "projection variable {v} not in formula"
            )));
        }
        let mut backend = kind.create();
        for cl in f.clauses().iter().chain(cursor) {
            backend.add_clause(cl);
        }
        Ok(AllSolutions {
            formula: f,
            projection: projection.to_vec(),
            backend,
            backend_id: kind.id(),
            deadline: limits.deadline(Instant::now()),
            blocked: cursor.to_vec(),
            done: false,
        })
    }

    pub fn cursor(&self) -> &[Vec<Lit>] {
        &self.blocked
    }

    pub fn found(&self) -> usize {
        self.blocked.len()
    }

    pub fn next_model(&mut self) -> Result<Option<Model>> {
        if self.done {
            return Ok(None);
        }
        match self.backend.solve(self.formula.num_vars(), self.deadline)? {
            Answer::Sat(m) => {
                check_model(self.formula, &m, &self.backend_id)?;
                let block: Vec<Lit> = m.project(&self.projection).iter().map(|l| -l).collect();
                if block.is_empty() {
                    self.done = true;
                } else {
                    self.backend.add_clause(&block);
                    self.blocked.push(block);
                }
                Ok(Some(m))
            }
            Answer::Unsat => {
                self.done = true;
                Ok(None)
            }
            Answer::Unknown => Err(Error::Timeout {
                models: self.blocked.len(),
            }),
        }
    }

    /// Drains the enumeration.
    pub fn collect_all(mut self) -> Result<Vec<Model>> {
        let mut out = Vec::new();
        while let Some(m) = self.next_model()? {
            out.push(m);
        }
        Ok(out)
    }
}

impl Iterator for AllSolutions<'_> {
    type Item = Result<Model>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.next_model() {
            Ok(Some(m)) => Some(Ok(m)),
            Ok(None) => None,
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

pub fn solve_all(
    f: &CnfFormula,
    projection: &[Lit],
    kind: &BackendKind,
    limits: &Limits,
) -> Result<Vec<Model>> {
    AllSolutions::new(f, projection, kind, limits)?.collect_all()
}

/// Reads the coloring off the edge variables of `model`.
pub fn decode(model: &Model, vm: &VarMap) -> Result<ColorMatrix> {
    if model.num_vars() < vm.num_vars() {
        return Err(Error::usage("model does not cover the variable map"));
    }
    let mut a = ColorMatrix::empty(vm.n(), vm.k() as u8);
    for i in 0..vm.n() {
        for j in i + 1..vm.n() {
            let colors: Vec<usize> = (1..=vm.k())
                .filter(|&c| model.value(vm.var(i, j, c)))
                .collect();
            match colors[..] {
                [c] => a.set(i, j, c as u8),
                _ => {
                    return Err(Error::Soundness(format!(
                        "edge ({},{}) has colors {colors:?} in the model",
                        i + 1,
                        j + 1
                    )))
                }
            }
        }
    }
    Ok(a)
}
