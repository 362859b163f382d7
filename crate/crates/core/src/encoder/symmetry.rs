//! Lexicographic row-ordering symmetry breaks.
//!
//! For rows `i < j`, `A_i <= A_j` compares the cell sequences with
//! positions `i` and `j` removed; cells compare as integers, `0` lowest.

use std::cmp::Ordering;

use super::{CnfFormula, Lit, VarMap};
use crate::canonical::DegreeMatrix;
use crate::coloring::ColorMatrix;
use crate::error::{Error, Result};

/// Adds `A_i <= A_j` for all `i < j`. Returns the number of auxiliaries added.
pub fn encode_lex_symbreak(vm: &VarMap, f: &mut CnfFormula) -> usize {
    let before = f.num_vars();
    for i in 0..vm.n() {
        for j in i + 1..vm.n() {
            lex_leq(vm, f, i, j);
        }
    }
    f.num_vars() - before
}

/// Adds `M_i == M_j => A_i <= A_j` for all `i < j`.
pub fn encode_partitioned_symbreak(
    vm: &VarMap,
    f: &mut CnfFormula,
    m: &DegreeMatrix,
) -> Result<usize> {
    if m.n() != vm.n() {
        return Err(Error::usage(format!(
            "degree matrix has {} rows, expected {}",
            m.n(),
            vm.n()
        )));
    }
    let before = f.num_vars();
    for i in 0..vm.n() {
        for j in i + 1..vm.n() {
            if m.row(i) == m.row(j) {
                lex_leq(vm, f, i, j);
            }
        }
    }
    Ok(f.num_vars() - before)
}

/// Chained comparator: `eq` holds while the compared prefixes are equal.
fn lex_leq(vm: &VarMap, f: &mut CnfFormula, i: usize, j: usize) {
    let k = vm.k();
    let positions: Vec<usize> = (0..vm.n()).filter(|&p| p != i && p != j).collect();
    let mut eq: Option<Lit> = None; // None = true
    for (t, &p) in positions.iter().enumerate() {
        let guard: Vec<Lit> = eq.map(|e| vec![-e]).unwrap_or_default();
        let a = |c| vm.var(i, p, c);
        let b = |c| vm.var(j, p, c);
        // cell(i,p) <= cell(j,p)
        for c in 1..=k {
            let mut cl = guard.clone();
            cl.push(-a(c));
            cl.extend((c..=k).map(b));
            f.add_clause(cl);
        }
        if t + 1 == positions.len() {
            break;
        }
        let next = f.new_var();
        for c in 1..=k {
            let mut cl = guard.clone();
            cl.extend([-a(c), -b(c), next]);
            f.add_clause(cl);
        }
        let mut cl = guard;
        cl.extend((1..=k).map(a));
        cl.extend((1..=k).map(b));
        cl.push(next);
        f.add_clause(cl);
        eq = Some(next);
    }
}

fn row_without(a: &ColorMatrix, r: usize, i: usize, j: usize) -> impl Iterator<Item = u8> + '_ {
    (0..a.n())
        .filter(move |&p| p != i && p != j)
        .map(move |p| a.get(r, p))
}

/// Evaluates the (optionally partitioned) predicate directly on a coloring.
pub fn satisfies_lex_predicate(a: &ColorMatrix, m: Option<&DegreeMatrix>) -> bool {
    (0..a.n()).all(|i| {
        (i + 1..a.n()).all(|j| {
            if let Some(m) = m {
                if m.row(i) != m.row(j) {
                    return true;
                }
            }
            row_without(a, i, i, j).cmp(row_without(a, j, i, j)) != Ordering::Greater
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices_have_no_constraints() {
        let vm = VarMap::new(2, 3);
        let mut f = CnfFormula::new(vm.num_vars());
        assert_eq!(encode_lex_symbreak(&vm, &mut f), 0);
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn partitioned_degenerates() {
        let vm = VarMap::new(5, 2);
        let distinct = DegreeMatrix::new(2, (0..5).map(|i| vec![i, 4 - i]).collect()).unwrap();
        let mut f = CnfFormula::new(vm.num_vars());
        encode_partitioned_symbreak(&vm, &mut f, &distinct).unwrap();
        assert_eq!(f.num_clauses(), 0);

        let equal = DegreeMatrix::new(2, vec![vec![2, 2]; 5]).unwrap();
        let mut g = CnfFormula::new(vm.num_vars());
        encode_partitioned_symbreak(&vm, &mut g, &equal).unwrap();
        let mut h = CnfFormula::new(vm.num_vars());
        encode_lex_symbreak(&vm, &mut h);
        assert_eq!(g, h);

        let short = DegreeMatrix::new(2, vec![vec![2, 2]; 4]).unwrap();
        assert!(encode_partitioned_symbreak(&vm, &mut g, &short).is_err());
    }

    #[test]
    fn predicate_on_small_rows() {
        // rows 0 and 1 compared on positions 2, 3
        let a = ColorMatrix::from_rows(
            2,
            &[
                vec![0, 1, 2, 1],
                vec![1, 0, 1, 2],
                vec![2, 1, 0, 1],
                vec![1, 2, 1, 0],
            ],
        )
        .unwrap();
        assert!(!satisfies_lex_predicate(&a, None));
        let m = DegreeMatrix::new(2, vec![vec![2, 1], vec![1, 2], vec![2, 1], vec![1, 2]]).unwrap();
        // only pairs (0,2) and (1,3) are compared
        assert!(satisfies_lex_predicate(&a, Some(&m)));
    }
}
