use std::cell::Cell;
use std::fmt;
use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use batsat::{lbool, BasicSolver, SolverInterface};

use crate::encoder::{CnfFormula, Lit, Model};
use crate::error::{Error, Result};

/// Environment variable naming the backend: `cadical`, `batsat`, or the
/// path (plus arguments) of a DIMACS solver executable.
pub const SOLVER_ENV: &str = "RAMSAT_SOLVER";

/// Outcome of one backend call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Sat(Model),
    Unsat,
    Unknown,
}

/// An incremental clause sink that can be asked for a model.
pub trait Backend {
    fn name(&self) -> &str;
    fn add_clause(&mut self, clause: &[Lit]);
    /// Solves the clauses added so far over variables `1..=num_vars`.
    fn solve(&mut self, num_vars: usize, deadline: Option<Instant>) -> Result<Answer>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Cadical,
    Batsat,
    External { program: PathBuf, args: Vec<String> },
}

impl Default for BackendKind {
    fn default() -> Self {
        BackendKind::Cadical
    }
}

impl BackendKind {
    /// Reads [`SOLVER_ENV`], falling back to CaDiCaL.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SOLVER_ENV) {
            Ok(s) if !s.trim().is_empty() => s.parse(),
            _ => Ok(BackendKind::default()),
        }
    }

    pub fn create(&self) -> Box<dyn Backend> {
        match self {
            BackendKind::Cadical => Box::new(CadicalBackend::new()),
            BackendKind::Batsat => Box::new(BatsatBackend::new()),
            BackendKind::External { program, args } => {
                Box::new(ExternalBackend::new(program.clone(), args.clone()))
            }
        }
    }

    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let head = parts
            .next()
            .ok_or_else(|| Error::usage("empty backend name"))?;
        Ok(match head {
            "cadical" => BackendKind::Cadical,
            "batsat" => BackendKind::Batsat,
            prog => BackendKind::External {
                program: PathBuf::from(prog),
                args: parts.map(str::to_string).collect(),
            },
        })
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendKind::Cadical => f.write_str("cadical"),
            BackendKind::Batsat => f.write_str("batsat"),
            BackendKind::External { program, args } => {
                write!(f, "{}", program.display())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

struct Deadline(Option<Instant>);

impl cadical::Callbacks for Deadline {
    fn terminate(&mut self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

pub struct CadicalBackend {
    solver: cadical::Solver<Deadline>,
    max_var: usize,
}

impl CadicalBackend {
    pub fn new() -> Self {
        CadicalBackend {
            solver: cadical::Solver::new(),
            max_var: 0,
        }
    }
}

impl Default for CadicalBackend {
    fn default() -> Self {
        Self::new()
    }
}

impl Backend for CadicalBackend {
    fn name(&self) -> &str {
        "cadical"
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        for &l in clause {
            self.max_var = self.max_var.max(l.unsigned_abs() as usize);
        }
        self.solver.add_clause(clause.iter().copied());
    }

    fn solve(&mut self, num_vars: usize, deadline: Option<Instant>) -> Result<Answer> {
        self.solver.set_callbacks(Some(Deadline(deadline)));
        Ok(match self.solver.solve() {
            Some(true) => {
                let mut m = Model::new(num_vars);
                for v in 1..=num_vars.min(self.max_var) {
                    m.set(v as Lit, self.solver.value(v as Lit) == Some(true));
                }
                Answer::Sat(m)
            }
            Some(false) => Answer::Unsat,
            None => Answer::Unknown,
        })
    }
}

pub struct BatsatBackend {
    solver: BasicSolver,
    deadline: Rc<Cell<Option<Instant>>>,
    unsat: bool,
}

impl BatsatBackend {
    pub fn new() -> Self {
        let deadline: Rc<Cell<Option<Instant>>> = Rc::new(Cell::new(None));
        let mut solver = BasicSolver::default();
        let d = Rc::clone(&deadline);
        solver
            .cb_mut()
            .set_stop(move || d.get().is_some_and(|t| Instant::now() >= t));
        BatsatBackend {
            solver,
            deadline,
            unsat: false,
        }
    }

    fn lit(&mut self, l: Lit) -> batsat::Lit {
        let v = self.solver.var_of_int(l.unsigned_abs() - 1);
        batsat::Lit::new(v, l > 0)
    }
}

impl Default for BatsatBackend {
    fn default() -> Self {
        Self::new()
    }
}

impl Backend for BatsatBackend {
    fn name(&self) -> &str {
        "batsat"
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        let mut lits: Vec<batsat::Lit> = clause.iter().map(|&l| self.lit(l)).collect();
        if !self.solver.add_clause_reuse(&mut lits) {
            self.unsat = true;
        }
    }

    fn solve(&mut self, num_vars: usize, deadline: Option<Instant>) -> Result<Answer> {
        if self.unsat {
            return Ok(Answer::Unsat);
        }
        if num_vars > 0 {
            self.solver.var_of_int(num_vars as u32 - 1);
        }
        self.deadline.set(deadline);
        let res = self.solver.solve_limited(&[]);
        if res == lbool::TRUE {
            let mut m = Model::new(num_vars);
            for v in 1..=num_vars {
                let l = self.lit(v as Lit);
                m.set(v as Lit, self.solver.value_lit(l) == lbool::TRUE);
            }
            Ok(Answer::Sat(m))
        } else if res == lbool::FALSE {
            self.unsat = true;
            Ok(Answer::Unsat)
        } else {
            Ok(Answer::Unknown)
        }
    }
}

/// Runs a DIMACS solver binary on a temporary file for every call.
pub struct ExternalBackend {
    program: PathBuf,
    args: Vec<String>,
    clauses: CnfFormula,
}

impl ExternalBackend {
    pub fn new(program: PathBuf, args: Vec<String>) -> Self {
        ExternalBackend {
            program,
            args,
            clauses: CnfFormula::new(0),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Backend {
            backend: self.program.display().to_string(),
            msg: msg.into(),
        }
    }
}

impl Backend for ExternalBackend {
    fn name(&self) -> &str {
        "external"
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        let need = clause
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        while self.clauses.num_vars() < need {
            self.clauses.new_var();
        }
        self.clauses.add_clause(clause.iter().copied());
    }

    fn solve(&mut self, num_vars: usize, deadline: Option<Instant>) -> Result<Answer> {
        while self.clauses.num_vars() < num_vars {
            self.clauses.new_var();
        }
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        self.clauses.write_dimacs(file.as_file_mut())?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| self.err(format!("cannot start: {e}")))?;
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        loop {
            if child.try_wait()?.is_some() {
                break;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(Answer::Unknown);
            }
            std::thread::sleep(Duration::from_millis(5));
        }
        let out = reader
            .join()
            .map_err(|_| self.err("output reader panicked"))??;
        parse_solver_output(&out, num_vars).map_err(|msg| self.err(msg))
    }
}

/// Parses `s ...` / `v ...` solver output.
pub fn parse_solver_output(out: &str, num_vars: usize) -> std::result::Result<Answer, String> {
    let mut status = None;
    let mut lits = Vec::new();
    for line in out.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let l: Lit = tok
                    .parse()
                    .map_err(|_| format!("bad value literal `{tok}`"))?;
                if l != 0 {
                    lits.push(l);
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(Answer::Sat(Model::from_lits(num_vars, lits))),
        Some("UNSATISFIABLE") => Ok(Answer::Unsat),
        Some("UNKNOWN") | Some("INDETERMINATE") => Ok(Answer::Unknown),
        Some(other) => Err(format!("unrecognized status line `s {other}`")),
        None => Err("no status line in solver output".to_string()),
    }
}
