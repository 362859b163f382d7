//! CNF encodings of coloring constraints.
//!
//! Edge-color variables are one-hot: for every pair `i < j` and color `c`
//! there is one variable, numbered lexicographically by `(i, j, c)`.

mod cardinality;
mod cnf;
mod ramsey;
mod symmetry;
mod template;

pub use cardinality::{
    encode_color_column, encode_degree_bounds_violation, encode_degree_matrix, encode_degree_range,
    encode_degree_row, encode_exactly, Counter,
};
pub use cnf::{CnfFormula, Lit, Model};
pub use ramsey::{encode_adjacency, encode_circulant, encode_no_clique, encode_ramsey};
pub use symmetry::{encode_lex_symbreak, encode_partitioned_symbreak, satisfies_lex_predicate};
pub use template::{encode_fixed, encode_partial};

use std::fmt::Write as _;
use std::io;

use sha2::{Digest, Sha256};

/// Mapping from `(i, j, c)` edge-color literals to variables `1..=V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarMap {
    n: usize,
    k: usize,
}

impl VarMap {
    pub fn new(n: usize, k: usize) -> Self {
        VarMap { n, k }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_pairs(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn num_vars(&self) -> usize {
        self.num_pairs() * self.k
    }

    /// Index of the unordered pair `{i, j}` in lexicographic order.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(
            i != j && j < self.n,
            "pair ({i},{j}) out of range for n={}",
            self.n
        );
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Variable for edge `{i, j}` having color `c` (1-based color).
    pub fn var(&self, i: usize, j: usize, c: usize) -> Lit {
        assert!((1..=self.k).contains(&c), "color {c} out of range");
        (self.pair_index(i, j) * self.k + c) as Lit
    }

    /// Inverse of [`VarMap::var`] for edge variables.
    pub fn edge_of(&self, var: Lit) -> Option<(usize, usize, usize)> {
        if var < 1 || var as usize > self.num_vars() {
            return None;
        }
        let idx = var as usize - 1;
        let (mut pair, c) = (idx / self.k, idx % self.k + 1);
        for i in 0..self.n {
            let row = self.n - i - 1;
            if pair < row {
                return Some((i, i + 1 + pair, c));
            }
            pair -= row;
        }
        None
    }

    pub fn edge_vars(&self) -> Vec<Lit> {
        (1..=self.num_vars() as Lit).collect()
    }

    /// Sidecar text: one `i j c var` line per variable, vertices 1-based.
    pub fn sidecar(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for c in 1..=self.k {
                    let _ = writeln!(s, "{} {} {} {}", i + 1, j + 1, c, self.var(i, j, c));
                }
            }
        }
        s
    }

    pub fn write_sidecar(&self, out: &mut impl io::Write) -> io::Result<()> {
        out.write_all(self.sidecar().as_bytes())
    }

    /// Short hex digest of the sidecar, stamped into DIMACS headers.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.sidecar().as_bytes());
        hex::encode(&hash[..8])
    }
}
