use super::{Lit, VarMap};
use crate::coloring::ColorMatrix;
use crate::error::{Error, Result};
use crate::partial::{Cell, PartialColoring};

/// Units for fixed cells, domain and equality clauses for symbols, and
/// pairwise exclusions for declared disequalities.
pub fn encode_partial(vm: &VarMap, t: &PartialColoring) -> Result<Vec<Vec<Lit>>> {
    if t.n() != vm.n() || t.k() as usize != vm.k() {
        return Err(Error::usage(format!(
            "template is ({}, {}), formula is ({}, {})",
            t.n(),
            t.k(),
            vm.n(),
            vm.k()
        )));
    }
    let mut out = Vec::new();
    for i in 0..t.n() {
        for j in i + 1..t.n() {
            if let Cell::Fixed(c) = t.get(i, j) {
                if c != 0 {
                    out.push(vec![vm.var(i, j, c as usize)]);
                }
            }
        }
    }
    let mut reps = Vec::with_capacity(t.symbols().len());
    for (s, sym) in t.symbols().iter().enumerate() {
        let cells = t.symbol_cells(s);
        let Some(&(ri, rj)) = cells.first() else {
            return Err(Error::usage(format!("symbol `{}` is never used", sym.name)));
        };
        reps.push((ri, rj));
        for c in 1..=vm.k() {
            if !sym.domain.contains(&(c as u8)) {
                out.push(vec![-vm.var(ri, rj, c)]);
            }
        }
        for &(i, j) in &cells[1..] {
            for &c in &sym.domain {
                let (x, y) = (vm.var(ri, rj, c as usize), vm.var(i, j, c as usize));
                out.push(vec![-x, y]);
                out.push(vec![x, -y]);
            }
            for c in 1..=vm.k() {
                if !sym.domain.contains(&(c as u8)) {
                    out.push(vec![-vm.var(i, j, c)]);
                }
            }
        }
    }
    for &(a, b) in t.neq() {
        let (sa, sb) = (&t.symbols()[a], &t.symbols()[b]);
        for c in sa.domain.iter().filter(|c| sb.domain.contains(c)) {
            let c = *c as usize;
            out.push(vec![
                -vm.var(reps[a].0, reps[a].1, c),
                -vm.var(reps[b].0, reps[b].1, c),
            ]);
        }
    }
    Ok(out)
}

/// Unit clauses pinning every colored cell of `a`.
pub fn encode_fixed(vm: &VarMap, a: &ColorMatrix) -> Result<Vec<Vec<Lit>>> {
    encode_partial(vm, &PartialColoring::from_coloring(a))
}
