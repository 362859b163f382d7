use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use super::{decode, solve, AllSolutions, BackendKind, Limits, SolveStatus};
use crate::encoder::{CnfFormula, Lit, VarMap};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
    Timeout,
    Error,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        !matches!(self, Status::Timeout)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Timeout => "timeout",
            Status::Error => "error",
        })
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sat" => Ok(Status::Sat),
            "unsat" => Ok(Status::Unsat),
            "timeout" => Ok(Status::Timeout),
            "error" => Ok(Status::Error),
            _ => Err(Error::usage(format!("unknown status `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub status: Status,
    pub seconds: f64,
    /// Models found: 0 or 1 for single solves, the enumeration size otherwise.
    pub count: usize,
}

/// What to do with an instance.
#[derive(Clone, Debug)]
pub enum Mode {
    Solve,
    /// Enumerate all models projected to `projection`.
    All {
        projection: Vec<Lit>,
    },
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub formula: CnfFormula,
    pub mode: Mode,
    /// When set, models are decoded and written to the solutions directory.
    pub varmap: Option<VarMap>,
}

/// Append-only record of terminal and timed-out instances.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchLedger {
    entries: BTreeMap<String, LedgerEntry>,
}

impl BatchLedger {
    pub fn load(path: &Path) -> Result<Self> {
        let mut ledger = BatchLedger::default();
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(ledger),
            Err(e) => return Err(Error::file(path, e)),
        };
        for (no, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() || toks[0].starts_with('#') {
                continue;
            }
            let [id, status, seconds, count] = toks[..] else {
                return Err(Error::parse(
                    no + 1,
                    "ledger line must be `id status seconds count`",
                ));
            };
            let entry = LedgerEntry {
                status: status.parse()?,
                seconds: seconds
                    .parse()
                    .map_err(|e| Error::parse(no + 1, format!("bad seconds: {e}")))?,
                count: count
                    .parse()
                    .map_err(|e| Error::parse(no + 1, format!("bad count: {e}")))?,
            };
            ledger.record(id, entry);
        }
        Ok(ledger)
    }

    /// Records an entry unless it would replace a terminal status.
    pub fn record(&mut self, id: &str, entry: LedgerEntry) -> bool {
        match self.entries.get(id) {
            Some(old) if old.status.is_terminal() => false,
            _ => {
                self.entries.insert(id.to_string(), entry);
                true
            }
        }
    }

    pub fn get(&self, id: &str) -> Option<&LedgerEntry> {
        self.entries.get(id)
    }

    pub fn is_done(&self, id: &str) -> bool {
        self.get(id).is_some_and(|e| e.status.is_terminal())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LedgerEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.values().filter(|e| e.status == status).count()
    }

    pub fn total_seconds(&self) -> f64 {
        self.entries.values().map(|e| e.seconds).sum()
    }

    pub fn total_models(&self) -> usize {
        self.entries.values().map(|e| e.count).sum()
    }
}

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub workers: usize,
    pub backend: BackendKind,
    pub limits: Limits,
    pub ledger: PathBuf,
    pub solutions: Option<PathBuf>,
}

impl BatchConfig {
    pub fn new(ledger: impl Into<PathBuf>) -> Self {
        BatchConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            backend: BackendKind::default(),
            limits: Limits::default(),
            ledger: ledger.into(),
            solutions: None,
        }
    }
}

struct Shared {
    queue: VecDeque<(String, u8)>,
    ledger: BatchLedger,
    file: File,
}

/// Runs every id not yet terminal in the ledger, `cfg.workers` at a time.
///
/// `build` turns an id into an instance. Each result is appended and
/// flushed to the ledger before the next instance is taken. An instance
/// whose worker panics is retried once and then recorded as `error`.
pub fn run_batch<F>(ids: &[String], build: F, cfg: &BatchConfig) -> Result<BatchLedger>
where
    F: Fn(&str) -> Result<Instance> + Sync,
{
    if let Some(id) = ids
        .iter()
        .find(|id| id.is_empty() || id.contains(char::is_whitespace))
    {
        return Err(Error::usage(format!(
            "instance id `{id}` must be a non-empty word"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(id) = ids.iter().find(|id| !seen.insert(id.as_str())) {
        return Err(Error::usage(format!("duplicate instance id `{id}`")));
    }
    if let Some(parent) = cfg.ledger.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
    }
    if let Some(dir) = &cfg.solutions {
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    }
    let ledger = BatchLedger::load(&cfg.ledger)?;
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&cfg.ledger)
        .map_err(|e| Error::file(&cfg.ledger, e))?;
    let queue = ids
        .iter()
        .filter(|id| !ledger.is_done(id))
        .map(|id| (id.clone(), 0))
        .collect();
    let shared = Mutex::new(Shared {
        queue,
        ledger,
        file,
    });
    let io_error: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|s| {
        for _ in 0..cfg.workers.max(1) {
            s.spawn(|| loop {
                let Some((id, attempt)) = shared.lock().unwrap().queue.pop_front() else {
                    break;
                };
                let start = Instant::now();
                let outcome = panic::catch_unwind(AssertUnwindSafe(|| execute(&build, &id, cfg)));
                let entry = match outcome {
                    Ok(Ok(entry)) => entry,
                    Ok(Err(e)) => {
                        log::error!("instance {id}: {e}");
                        LedgerEntry {
                            status: Status::Error,
                            seconds: start.elapsed().as_secs_f64(),
                            count: 0,
                        }
                    }
                    Err(_) if attempt == 0 => {
                        log::warn!("worker died on {id}; requeueing");
                        shared.lock().unwrap().queue.push_back((id, 1));
                        continue;
                    }
                    Err(_) => LedgerEntry {
                        status: Status::Error,
                        seconds: start.elapsed().as_secs_f64(),
                        count: 0,
                    },
                };
                let mut sh = shared.lock().unwrap();
                if sh.ledger.record(&id, entry.clone()) {
                    let line = format!(
                        "{id} {} {:.3} {}\n",
                        entry.status, entry.seconds, entry.count
                    );
                    let res = sh
                        .file
                        .write_all(line.as_bytes())
                        .and_then(|_| sh.file.flush());
                    if let Err(e) = res {
                        io_error
                            .lock()
                            .unwrap()
                            .get_or_insert(Error::file(&cfg.ledger, e));
                        sh.queue.clear();
                    }
                }
            });
        }
    });

    if let Some(e) = io_error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(shared.into_inner().unwrap().ledger)
}

fn execute<F>(build: &F, id: &str, cfg: &BatchConfig) -> Result<LedgerEntry>
where
    F: Fn(&str) -> Result<Instance>,
{
    let start = Instant::now();
    let inst = build(id)?;
    let mut colorings = String::new();
    let (status, count) = match &inst.mode {
        Mode::Solve => {
            let r = solve(&inst.formula, &cfg.backend, &cfg.limits)?;
            if let (Some(m), Some(vm)) = (&r.model, &inst.varmap) {
                colorings.push_str(&decode(m, vm)?.to_string());
            }
            match r.status {
                SolveStatus::Sat => (Status::Sat, 1),
                SolveStatus::Unsat => (Status::Unsat, 0),
                SolveStatus::Timeout => (Status::Timeout, 0),
            }
        }
        Mode::All { projection } => {
            let mut it = AllSolutions::new(&inst.formula, projection, &cfg.backend, &cfg.limits)?;
            let mut status = Status::Unsat;
            loop {
                match it.next_model() {
                    Ok(Some(m)) => {
                        status = Status::Sat;
                        if let Some(vm) = &inst.varmap {
                            colorings.push_str(&decode(&m, vm)?.to_string());
                            colorings.push('\n');
                        }
                    }
                    Ok(None) => break,
                    Err(Error::Timeout { .. }) => {
                        status = Status::Timeout;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            (status, it.found())
        }
    };
    if let (Some(dir), Some(_)) = (&cfg.solutions, &inst.varmap) {
        let path = dir.join(format!("{id}.txt"));
        let tmp = dir.join(format!(".{id}.tmp"));
        fs::write(&tmp, colorings.as_bytes()).map_err(|e| Error::file(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::file(&path, e))?;
    }
    Ok(LedgerEntry {
        status,
        seconds: start.elapsed().as_secs_f64(),
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn trivial(id: &str) -> Result<Instance> {
        let mut f = CnfFormula::new(1);
        match id {
            "sat" => f.add_clause([1]),
            "unsat" => {
                f.add_clause([1]);
                f.add_clause([-1]);
            }
            "bad" => return Err(Error::usage("cannot build")),
            _ => {}
        }
        Ok(Instance {
            id: id.to_string(),
            formula: f,
            mode: Mode::Solve,
            varmap: None,
        })
    }

    fn ids(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_sat_row() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = BatchConfig::new(dir.path().join("ledger.txt"));
        let l = run_batch(&ids(&["sat"]), trivial, &cfg).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.get("sat").unwrap().status, Status::Sat);
        let text = fs::read_to_string(&cfg.ledger).unwrap();
        assert!(text.starts_with("sat sat "));
    }

    #[test]
    fn resume_skips_terminal_ids() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = BatchConfig::new(dir.path().join("ledger.txt"));
        cfg.workers = 2;
        let all = ids(&["sat", "unsat", "bad"]);
        let first = run_batch(&all[..2], trivial, &cfg).unwrap();
        let calls = AtomicUsize::new(0);
        let second = run_batch(
            &all,
            |id| {
                calls.fetch_add(1, Ordering::SeqCst);
                trivial(id)
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert_eq!(second.get("bad").unwrap().status, Status::Error);
        assert_eq!(
            first.get("unsat").unwrap().status,
            second.get("unsat").unwrap().status
        );
        let again = run_batch(&all, trivial, &cfg).unwrap();
        assert_eq!(again, BatchLedger::load(&cfg.ledger).unwrap());
        assert_eq!(fs::read_to_string(&cfg.ledger).unwrap().lines().count(), 3);
    }

    #[test]
    fn panicking_worker_is_retried_once() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = BatchConfig::new(dir.path().join("ledger.txt"));
        let calls = AtomicUsize::new(0);
        let prev = panic::take_hook();
        panic::set_hook(Box::new(|_| {}));
        let l = run_batch(
            &ids(&["boom"]),
            |_| -> Result<Instance> {
                calls.fetch_add(1, Ordering::SeqCst);
                panic!("worker crash")
            },
            &cfg,
        );
        panic::set_hook(prev);
        assert_eq!(calls.load(Ordering::SeqCst), 2);
        assert_eq!(l.unwrap().get("boom").unwrap().status, Status::Error);
    }

    #[test]
    fn terminal_status_is_never_downgraded() {
        let mut l = BatchLedger::default();
        let e = |status| LedgerEntry {
            status,
            seconds: 0.0,
            count: 0,
        };
        assert!(l.record("a", e(Status::Timeout)));
        assert!(l.record("a", e(Status::Unsat)));
        assert!(!l.record("a", e(Status::Timeout)));
        assert_eq!(l.get("a").unwrap().status, Status::Unsat);
    }

    #[test]
    fn rejects_bad_ids() {
        let cfg = BatchConfig::new("/nonexistent/ledger");
        assert!(run_batch(&ids(&["a b"]), trivial, &cfg).is_err());
        assert!(run_batch(&ids(&["a", "a"]), trivial, &cfg).is_err());
    }
}
