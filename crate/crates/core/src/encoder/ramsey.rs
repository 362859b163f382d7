use itertools::Itertools;

use super::{CnfFormula, Lit, VarMap};
use crate::coloring::RamseyParams;

/// One-hot edge colors: pairwise at-most-one plus at-least-one per pair.
pub fn encode_adjacency(n: usize, k: usize) -> (VarMap, CnfFormula) {
    let vm = VarMap::new(n, k);
    let mut f = CnfFormula::new(vm.num_vars());
    f.add_comment(format!("varmap {}", vm.digest()));
    for i in 0..n {
        for j in i + 1..n {
            for c in 1..=k {
                for d in c + 1..=k {
                    f.add_clause([-vm.var(i, j, c), -vm.var(i, j, d)]);
                }
            }
            f.add_clause((1..=k).map(|c| vm.var(i, j, c)));
        }
    }
    (vm, f)
}

/// No `r`-subset of vertices is a clique in color `c`.
pub fn encode_no_clique(vm: &VarMap, r: usize, c: usize) -> Vec<Vec<Lit>> {
    if r < 2 || r > vm.n() {
        return Vec::new();
    }
    (0..vm.n())
        .combinations(r)
        .map(|set| {
            set.iter()
                .tuple_combinations()
                .map(|(&i, &j)| -vm.var(i, j, c))
                .collect()
        })
        .collect()
}

/// `(r_1, ..., r_k; n)` Ramsey colorings.
pub fn encode_ramsey(p: &RamseyParams) -> (VarMap, CnfFormula) {
    let (vm, mut f) = encode_adjacency(p.n(), p.k());
    f.add_comment(format!("params {p}"));
    for c in 1..=p.k() {
        f.extend(encode_no_clique(&vm, p.r(c as u8), c));
    }
    (vm, f)
}

/// `color(i, j) == color(i+1, j+1)` with indices mod `n`.
pub fn encode_circulant(vm: &VarMap) -> Vec<Vec<Lit>> {
    let n = vm.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = ((i + 1) % n, (j + 1) % n);
            if vm.pair_index(i, j) == vm.pair_index(a, b) {
                continue;
            }
            for c in 1..=vm.k() {
                let (x, y) = (vm.var(i, j, c), vm.var(a, b, c));
                out.push(vec![-x, y]);
                out.push(vec![x, -y]);
            }
        }
    }
    out
}
