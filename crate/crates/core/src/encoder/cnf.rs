use std::fmt::Write as _;
use std::io::{self, BufRead};

use crate::error::{Error, Result};

/// A DIMACS literal: `v` or `-v` for variable `v >= 1`.
pub type Lit = i32;

/// Clause set over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    comments: Vec<String>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn new_var(&mut self) -> Lit {
        self.num_vars += 1;
        self.num_vars as Lit
    }

    /// Adds a clause. Panics on a zero literal or an undeclared variable.
    pub fn add_clause(&mut self, clause: impl IntoIterator<Item = Lit>) {
        let clause: Vec<Lit> = clause.into_iter().collect();
        for &l in &clause {
            assert!(
                l != 0 && l.unsigned_abs() as usize <= self.num_vars,
                "literal {l} outside 1..={}",
                self.num_vars
            );
        }
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Vec<Lit>>) {
        for c in clauses {
            self.add_clause(c);
        }
    }

    pub fn add_comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    /// Index of the first clause falsified by `model`, if any.
    pub fn first_falsified(&self, model: &Model) -> Option<usize> {
        self.clauses
            .iter()
            .position(|cl| !cl.iter().any(|&l| model.lit(l)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "c {c}");
        }
        let _ = writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len());
        for cl in &self.clauses {
            for l in cl {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn write_dimacs(&self, out: &mut impl io::Write) -> io::Result<()> {
        out.write_all(self.to_dimacs().as_bytes())
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        Self::read_dimacs(text.as_bytes())
    }

    pub fn read_dimacs(input: impl BufRead) -> Result<Self> {
        let mut f = CnfFormula::default();
        let mut declared: Option<(usize, usize)> = None;
        let mut current = Vec::new();
        for (no, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            if let Some(rest) = t.strip_prefix('c') {
                if rest.is_empty() || rest.starts_with(' ') {
                    f.comments.push(rest.trim().to_string());
                    continue;
                }
            }
            if let Some(rest) = t.strip_prefix("p cnf") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::parse(no + 1, format!("bad header: {e}")))?;
                if nums.len() != 2 {
                    return Err(Error::parse(no + 1, "header must be `p cnf V C`"));
                }
                f.num_vars = nums[0];
                declared = Some((nums[0], nums[1]));
                continue;
            }
            if declared.is_none() {
                return Err(Error::parse(no + 1, "clause before `p cnf` header"));
            }
            for tok in t.split_whitespace() {
                let l: Lit = tok
                    .parse()
                    .map_err(|e| Error::parse(no + 1, format!("bad literal `{tok}`: {e}")))?;
                if l == 0 {
                    f.clauses.push(std::mem::take(&mut current));
                } else {
                    if l.unsigned_abs() as usize > f.num_vars {
                        return Err(Error::parse(no + 1, format!("literal {l} exceeds header")));
                    }
                    current.push(l);
                }
            }
        }
        if !current.is_empty() {
            f.clauses.push(current);
        }
        match declared {
            None => Err(Error::parse(0, "missing `p cnf` header")),
            Some((_, c)) if c != f.clauses.len() => Err(Error::parse(
                0,
                format!("header declares {c} clauses, found {}", f.clauses.len()),
            )),
            _ => Ok(f),
        }
    }
}

/// A total assignment; `values[v]` is the value of variable `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(num_vars: usize) -> Self {
        Model {
            values: vec![false; num_vars + 1],
        }
    }

    /// Builds a model from the set of true literals; others default to false.
    pub fn from_lits(num_vars: usize, lits: impl IntoIterator<Item = Lit>) -> Self {
        let mut m = Model::new(num_vars);
        for l in lits {
            if l > 0 && (l as usize) <= num_vars {
                m.values[l as usize] = true;
            }
        }
        m
    }

    pub fn num_vars(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, var: Lit) -> bool {
        self.values[var.unsigned_abs() as usize]
    }

    pub fn set(&mut self, var: Lit, value: bool) {
        self.values[var.unsigned_abs() as usize] = value;
    }

    /// Truth value of literal `l`.
    pub fn lit(&self, l: Lit) -> bool {
        let v = self
            .values
            .get(l.unsigned_abs() as usize)
            .copied()
            .unwrap_or(false);
        if l > 0 {
            v
        } else {
            !v
        }
    }

    /// Literals of `vars` as they hold in this model.
    pub fn project(&self, vars: &[Lit]) -> Vec<Lit> {
        vars.iter()
            .map(|&v| if self.value(v) { v } else { -v })
            .collect()
    }
}
