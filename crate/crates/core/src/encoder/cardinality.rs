//! Sequential-counter cardinality constraints.

use super::{CnfFormula, Lit, VarMap};
use crate::canonical::DegreeMatrix;
use crate::coloring::DegreeTuple;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bit {
    False,
    True,
    Var(Lit),
}

impl Bit {
    fn not(self) -> Bit {
        match self {
            Bit::False => Bit::True,
            Bit::True => Bit::False,
            Bit::Var(l) => Bit::Var(-l),
        }
    }
}

fn add(f: &mut CnfFormula, bits: &[Bit]) {
    if bits.contains(&Bit::True) {
        return;
    }
    let lits: Vec<Lit> = bits
        .iter()
        .filter_map(|b| match b {
            Bit::Var(l) => Some(*l),
            _ => None,
        })
        .collect();
    if lits.is_empty() {
        add_false(f);
    } else {
        f.add_clause(lits);
    }
}

fn add_false(f: &mut CnfFormula) {
    let x = f.new_var();
    f.add_clause([x]);
    f.add_clause([-x]);
}

/// Registers `s(i, j)` ("at least `j` of the first `i` inputs are true"),
/// defined in both directions so they can be used under either polarity.
pub struct Counter {
    inputs: usize,
    cap: usize,
    last: Vec<Bit>,
}

impl Counter {
    pub fn new(f: &mut CnfFormula, lits: &[Lit], cap: usize) -> Self {
        // prev[j] = s(i-1, j), j in 0..=cap
        let mut prev: Vec<Bit> = (0..=cap)
            .map(|j| if j == 0 { Bit::True } else { Bit::False })
            .collect();
        for (idx, &x) in lits.iter().enumerate() {
            let i = idx + 1;
            let mut cur = prev.clone();
            for j in 1..=cap.min(i) {
                if i == 1 {
                    cur[j] = Bit::Var(x);
                    continue;
                }
                let s = f.new_var();
                let sb = Bit::Var(s);
                let x = Bit::Var(x);
                add(f, &[prev[j].not(), sb]);
                add(f, &[x.not(), prev[j - 1].not(), sb]);
                add(f, &[sb.not(), prev[j], x]);
                add(f, &[sb.not(), prev[j], prev[j - 1]]);
                cur[j] = sb;
            }
            prev = cur;
        }
        Counter {
            inputs: lits.len(),
            cap,
            last: prev,
        }
    }

    fn at_least(&self, j: usize) -> Bit {
        if j == 0 {
            Bit::True
        } else if j > self.inputs {
            Bit::False
        } else {
            assert!(j <= self.cap, "counter capped at {}", self.cap);
            self.last[j]
        }
    }

    /// Literal for "at least `j` inputs true", or a constant.
    pub fn at_least_lit(&self, j: usize) -> std::result::Result<Lit, bool> {
        match self.at_least(j) {
            Bit::Var(l) => Ok(l),
            Bit::True => Err(true),
            Bit::False => Err(false),
        }
    }
}

/// Exactly `d` of `lits` are true.
pub fn encode_exactly(f: &mut CnfFormula, lits: &[Lit], d: usize) {
    if d > lits.len() {
        add_false(f);
        return;
    }
    let cnt = Counter::new(f, lits, (d + 1).min(lits.len()));
    add(f, &[cnt.at_least(d)]);
    add(f, &[cnt.at_least(d + 1).not()]);
}

fn row_lits(vm: &VarMap, v: usize, c: usize) -> Vec<Lit> {
    (0..vm.n())
        .filter(|&u| u != v)
        .map(|u| vm.var(v, u, c))
        .collect()
}

/// Row `v` has exactly `d[c]` edges of each color `c`.
pub fn encode_degree_row(vm: &VarMap, f: &mut CnfFormula, v: usize, d: &DegreeTuple) -> Result<()> {
    if v >= vm.n() {
        return Err(Error::usage(format!("vertex {} out of range", v + 1)));
    }
    if d.k() != vm.k() {
        return Err(Error::usage(format!(
            "degree tuple {d} does not have {} colors",
            vm.k()
        )));
    }
    if d.total() as usize != vm.n() - 1 {
        return Err(Error::usage(format!(
            "degree tuple {d} does not sum to n-1 = {}",
            vm.n() - 1
        )));
    }
    for (c, &dc) in d.0.iter().enumerate() {
        encode_exactly(f, &row_lits(vm, v, c + 1), dc as usize);
    }
    Ok(())
}

/// `dm(A) = M`, row by row.
pub fn encode_degree_matrix(vm: &VarMap, f: &mut CnfFormula, m: &DegreeMatrix) -> Result<()> {
    if m.n() != vm.n() || m.k() != vm.k() {
        return Err(Error::usage(format!(
            "degree matrix is {}x{}, expected {}x{}",
            m.n(),
            m.k(),
            vm.n(),
            vm.k()
        )));
    }
    for (v, row) in m.rows().iter().enumerate() {
        encode_degree_row(vm, f, v, &DegreeTuple(row.clone()))?;
    }
    Ok(())
}

/// Vertex `v` has exactly `seq[v]` neighbors in color `c`.
pub fn encode_color_column(vm: &VarMap, f: &mut CnfFormula, c: usize, seq: &[u32]) -> Result<()> {
    if seq.len() != vm.n() {
        return Err(Error::usage(format!(
            "sequence has {} entries, expected {}",
            seq.len(),
            vm.n()
        )));
    }
    for (v, &d) in seq.iter().enumerate() {
        encode_exactly(f, &row_lits(vm, v, c), d as usize);
    }
    Ok(())
}

/// `lo <= deg_c(v) <= hi`.
pub fn encode_degree_range(
    vm: &VarMap,
    f: &mut CnfFormula,
    v: usize,
    c: usize,
    lo: usize,
    hi: usize,
) -> Result<()> {
    if v >= vm.n() || !(1..=vm.k()).contains(&c) {
        return Err(Error::usage(format!(
            "vertex {} / color {c} out of range",
            v + 1
        )));
    }
    let lits = row_lits(vm, v, c);
    let cnt = Counter::new(f, &lits, (hi + 1).min(lits.len()).max(lo.min(lits.len())));
    if lo > lits.len() {
        add_false(f);
        return Ok(());
    }
    add(f, &[cnt.at_least(lo)]);
    add(f, &[cnt.at_least(hi + 1).not()]);
    Ok(())
}

/// Some color degree of vertex `v` lies outside `[lo, hi]`.
///
/// Returns `false` (and adds nothing) when no degree can lie outside.
pub fn encode_degree_bounds_violation(
    vm: &VarMap,
    f: &mut CnfFormula,
    v: usize,
    lo: usize,
    hi: usize,
) -> Result<bool> {
    if lo > hi {
        return Err(Error::usage(format!("empty degree range [{lo},{hi}]")));
    }
    let m = vm.n().saturating_sub(1);
    if lo == 0 && hi >= m {
        return Ok(false);
    }
    let mut clause = Vec::new();
    for c in 1..=vm.k() {
        let lits = row_lits(vm, v, c);
        let cnt = Counter::new(f, &lits, (hi + 1).min(m).max(lo));
        clause.push(cnt.at_least(hi + 1));
        clause.push(cnt.at_least(lo).not());
    }
    add(f, &clause);
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every assignment to `m` inputs, checked against the counter's outputs.
    #[test]
    fn counter_matches_popcount() {
        for m in 0..=6 {
            for cap in 0..=m {
                let mut f = CnfFormula::new(m);
                let lits: Vec<Lit> = (1..=m as Lit).collect();
                let cnt = Counter::new(&mut f, &lits, cap);
                let aux = f.num_vars() - m;
                for bits in 0u32..(1 << m) {
                    let pop = bits.count_ones() as usize;
                    // the auxiliaries must admit exactly one extension, matching popcount
                    let mut ext = 0;
                    for a in 0u32..(1 << aux) {
                        let val = |l: Lit| {
                            let v = l.unsigned_abs() as usize;
                            let b = if v <= m {
                                bits >> (v - 1) & 1 == 1
                            } else {
                                a >> (v - m - 1) & 1 == 1
                            };
                            b == (l > 0)
                        };
                        if f.clauses().iter().all(|c| c.iter().any(|&l| val(l))) {
                            ext += 1;
                            for j in 0..=cap {
                                let expect = pop >= j;
                                match cnt.at_least_lit(j) {
                                    Ok(l) => assert_eq!(val(l), expect, "m={m} cap={cap} j={j}"),
                                    Err(b) => assert_eq!(b, expect),
                                }
                            }
                        }
                    }
                    assert_eq!(ext, 1);
                }
            }
        }
    }

    #[test]
    fn exactly_rejects_impossible() {
        let mut f = CnfFormula::new(2);
        encode_exactly(&mut f, &[1, 2], 3);
        assert!(f.clauses().iter().any(|c| c.len() == 1 && c[0] > 0));
        assert!(f.clauses().iter().any(|c| c.len() == 1 && c[0] < 0));
    }

    #[test]
    fn degree_row_arguments() {
        let vm = VarMap::new(3, 3);
        let mut f = CnfFormula::new(vm.num_vars());
        assert!(encode_degree_row(&vm, &mut f, 0, &DegreeTuple(vec![1, 0, 0])).is_err());
        assert!(encode_degree_row(&vm, &mut f, 5, &DegreeTuple(vec![2, 0, 0])).is_err());
        encode_degree_row(&vm, &mut f, 0, &DegreeTuple(vec![2, 0, 0])).unwrap();
        assert!(!encode_degree_bounds_violation(&vm, &mut f, 0, 0, 2).unwrap());
    }
}
