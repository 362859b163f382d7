//! Embedding smaller colorings around a vertex, and the gluing instance
//! space built from it.
//!
//! Vertex layout: vertex 0 is the pivot, followed by the `d_1` vertices of
//! block 1, then block 2, and so on. Row 0 is colored by block membership;
//! cells between different blocks are left free.

use std::collections::BTreeMap;

use crate::coloring::{Color, ColorMatrix, DegreeTuple, RamseyCheck, RamseyParams};
use crate::error::{Error, Result};
use crate::partial::{Cell, PartialColoring};

#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub target: RamseyParams,
    pub triple: DegreeTuple,
    /// One block per color, already expressed in the target's colors.
    pub blocks: Vec<PartialColoring>,
}

impl EmbeddingSpec {
    pub fn new(target: RamseyParams, triple: DegreeTuple, blocks: Vec<PartialColoring>) -> Self {
        EmbeddingSpec {
            target,
            triple,
            blocks,
        }
    }

    /// Offsets of each block's first vertex.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.triple.k());
        let mut next = 1;
        for &d in &self.triple.0 {
            off.push(next);
            next += d as usize;
        }
        off
    }
}

/// Checks a block against the parameters its neighborhood must satisfy.
/// Templates pass when some admissible symbol assignment is a Ramsey coloring
/// (or when free cells make the check impossible before solving).
pub fn check_block(target: &RamseyParams, c: Color, block: &PartialColoring) -> Result<()> {
    let d = block.n();
    if d == 0 {
        return Ok(());
    }
    let p = target.neighborhood(c, d)?;
    if block.count_free() > 0 {
        return Ok(());
    }
    let mut last = None;
    for values in block.symbol_assignments() {
        let a = block.instantiate(&values).with_k(target.k() as u8)?;
        match a.verify_ramsey(&p)? {
            RamseyCheck::Ok => return Ok(()),
            v => last = Some(v),
        }
    }
    match last {
        Some(RamseyCheck::Violation { color, vertices }) => {
            let vs: Vec<String> = vertices.iter().map(|v| (v + 1).to_string()).collect();
            Err(Error::usage(format!(
                "block {c} is not a {p} coloring: color {color} clique on {{{}}}",
                vs.join(",")
            )))
        }
        _ => Err(Error::usage(format!(
            "block {c} admits no symbol assignment"
        ))),
    }
}

pub fn build_embedding(spec: &EmbeddingSpec) -> Result<PartialColoring> {
    let p = &spec.target;
    let k = p.k();
    if spec.triple.k() != k || spec.blocks.len() != k {
        return Err(Error::usage(format!(
            "need {k} degrees and {k} blocks, got {} and {}",
            spec.triple.k(),
            spec.blocks.len()
        )));
    }
    if spec.triple.total() as usize + 1 != p.n() {
        return Err(Error::usage(format!(
            "degree tuple {} does not sum to n-1 = {}",
            spec.triple,
            p.n() - 1
        )));
    }
    for (c, (block, &d)) in spec.blocks.iter().zip(&spec.triple.0).enumerate() {
        if block.n() != d as usize {
            return Err(Error::usage(format!(
                "block {} has {} vertices, expected {d}",
                c + 1,
                block.n()
            )));
        }
        check_block(p, c as Color + 1, block)?;
    }

    let mut t = PartialColoring::free(p.n(), k as u8);
    let offsets = spec.offsets();
    let mut names: Vec<char> = Vec::new();
    for (c, block) in spec.blocks.iter().enumerate() {
        let off = offsets[c];
        for v in 0..block.n() {
            t.set(0, off + v, Cell::Fixed(c as Color + 1));
        }
        let mut ids = Vec::with_capacity(block.symbols().len());
        for sym in block.symbols() {
            let name = if names.contains(&sym.name) {
                ('A'..='Z')
                    .find(|ch| !names.contains(ch))
                    .ok_or_else(|| Error::usage("more than 26 symbols in one embedding"))?
            } else {
                sym.name
            };
            names.push(name);
            ids.push(t.add_symbol(name, sym.domain.clone())?);
        }
        for &(a, b) in block.neq() {
            t.add_neq(ids[a], ids[b])?;
        }
        for i in 0..block.n() {
            for j in i + 1..block.n() {
                let cell = match block.get(i, j) {
                    Cell::Sym(s) => Cell::Sym(ids[s]),
                    other => other,
                };
                t.set(off + i, off + j, cell);
            }
        }
    }
    Ok(t)
}

/// The cross product of block choices for one degree tuple, indexed in
/// mixed radix with the last color varying fastest.
#[derive(Clone, Debug)]
pub struct GluingInstances {
    pub target: RamseyParams,
    pub triple: DegreeTuple,
    pub block_sets: Vec<Vec<PartialColoring>>,
}

impl GluingInstances {
    pub fn new(
        target: RamseyParams,
        triple: DegreeTuple,
        block_sets: Vec<Vec<PartialColoring>>,
    ) -> Self {
        GluingInstances {
            target,
            triple,
            block_sets,
        }
    }

    pub fn len(&self) -> usize {
        self.block_sets.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block indices of instance `index`.
    pub fn choice(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.block_sets.len()];
        for (c, set) in self.block_sets.iter().enumerate().rev() {
            out[c] = index % set.len();
            index /= set.len();
        }
        out
    }

    pub fn get(&self, index: usize) -> Result<PartialColoring> {
        if index >= self.len() {
            return Err(Error::usage(format!(
                "instance {index} out of range 0..{}",
                self.len()
            )));
        }
        let blocks = self
            .choice(index)
            .iter()
            .zip(&self.block_sets)
            .map(|(&i, set)| set[i].clone())
            .collect();
        build_embedding(&EmbeddingSpec::new(
            self.target.clone(),
            self.triple.clone(),
            blocks,
        ))
    }

    /// Stable instance id such as `16-8-5_000012`.
    pub fn id(&self, index: usize) -> String {
        let t: Vec<String> = self.triple.0.iter().map(|d| d.to_string()).collect();
        format!("{}_{index:06}", t.join("-"))
    }

    pub fn iter_range(
        &self,
        range: std::ops::Range<usize>,
    ) -> impl Iterator<Item = Result<PartialColoring>> + '_ {
        range.map(move |i| self.get(i))
    }
}

/// A template every member of `set` satisfies.
///
/// Cells on which all members agree become fixed. Without `hints`, each
/// group of disagreeing cells that co-vary across `set` becomes one symbol
/// whose domain is the set of observed colors. With `hints`, the hint
/// template names the symbols, domains and disequalities; it is rejected
/// if any member contradicts it.
pub fn cover_template(
    set: &[ColorMatrix],
    hints: Option<&PartialColoring>,
) -> Result<PartialColoring> {
    let first = set
        .first()
        .ok_or_else(|| Error::usage("cannot cover an empty set"))?;
    let (n, k) = (first.n(), first.k());
    if set.iter().any(|a| a.n() != n || a.k() != k) {
        return Err(Error::usage("colorings to cover differ in size"));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let column =
        |(i, j): (usize, usize)| -> Vec<Color> { set.iter().map(|a| a.get(i, j)).collect() };

    let Some(h) = hints else {
        let mut t = PartialColoring::free(n, k);
        let mut groups: BTreeMap<Vec<Color>, usize> = BTreeMap::new();
        for &(i, j) in &pairs {
            let col = column((i, j));
            if col.iter().all(|&c| c == col[0]) {
                t.set(i, j, Cell::Fixed(col[0]));
                continue;
            }
            let next = groups.len();
            let id = match groups.get(&col) {
                Some(&id) => id,
                None => {
                    let name = (b'A' + next as u8) as char;
                    if next >= 26 {
                        return Err(Error::usage("more than 26 symbols needed; supply hints"));
                    }
                    let mut dom = col.clone();
                    dom.sort_unstable();
                    dom.dedup();
                    let id = t.add_symbol(name, dom)?;
                    groups.insert(col, id);
                    id
                }
            };
            t.set(i, j, Cell::Sym(id));
        }
        return Ok(t);
    };

    if h.n() != n || h.k() != k {
        return Err(Error::usage("hint template has the wrong size"));
    }
    for &(i, j) in &pairs {
        let col = column((i, j));
        match h.get(i, j) {
            Cell::Fixed(c) => {
                if col.iter().any(|&x| x != c) {
                    return Err(Error::usage(format!(
                        "hint fixes ({},{}) to {c} but a member disagrees",
                        i + 1,
                        j + 1
                    )));
                }
            }
            Cell::Sym(s) => {
                let sym = &h.symbols()[s];
                if let Some(c) = col.iter().find(|c| !sym.domain.contains(c)) {
                    return Err(Error::usage(format!(
                        "member colors ({},{}) with {c}, outside the domain of {}",
                        i + 1,
                        j + 1,
                        sym.name
                    )));
                }
            }
            Cell::Free => {}
        }
    }
    for (m, a) in set.iter().enumerate() {
        if !h.is_satisfied_by(a) {
            return Err(Error::usage(format!(
                "member {} violates the hint's symbol equalities or disequalities",
                m + 1
            )));
        }
    }
    Ok(h.clone())
}

/// Instance counts before and after templating, and their ratio.
pub fn template_reduction_factor(before: &[usize], after: &[usize]) -> (usize, usize, f64) {
    let b: usize = before.iter().product();
    let a: usize = after.iter().product();
    let ratio = if a == 0 {
        f64::INFINITY
    } else {
        b as f64 / a as f64
    };
    (b, a, ratio)
}
