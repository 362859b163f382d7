//! Edge-colored complete graphs and the primitive operations on them.
//!
//! Vertices are 0-indexed in memory. The text format and every message
//! meant for people use 1-indexed vertices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A color value. `0` means "no edge"; proper colors are `1..=k`.
pub type Color = u8;

/// Bijection on `0..len`, stored as the image of each point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation((0..len).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::usage(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// All permutations of `0..len` in lexicographic order.
    pub fn all(len: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..len).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..len).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..len).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// Per-color degrees `d_1..d_k` of one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeTuple(pub Vec<u32>);

impl DegreeTuple {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ">")
    }
}

/// The parameters `(r_1,...,r_k;n)` of a Ramsey coloring problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamseyParams {
    clique_sizes: Vec<usize>,
    n: usize,
}

impl RamseyParams {
    pub fn new(clique_sizes: Vec<usize>, n: usize) -> Result<Self> {
        if clique_sizes.is_empty() {
            return Err(Error::usage("at least one color is required"));
        }
        if clique_sizes.len() > 9 {
            return Err(Error::usage("at most 9 colors are supported"));
        }
        if let Some(&r) = clique_sizes.iter().find(|&&r| r < 2) {
            return Err(Error::usage(format!("clique size {r} is below 2")));
        }
        if n == 0 {
            return Err(Error::usage("vertex count must be at least 1"));
        }
        Ok(RamseyParams { clique_sizes, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.clique_sizes.len()
    }

    /// Forbidden clique size for color `c` (1-based).
    pub fn r(&self, c: Color) -> usize {
        self.clique_sizes[c as usize - 1]
    }

    pub fn clique_sizes(&self) -> &[usize] {
        &self.clique_sizes
    }

    pub fn with_n(&self, n: usize) -> Self {
        RamseyParams {
            clique_sizes: self.clique_sizes.clone(),
            n,
        }
    }

    /// Parameters that color `c'` of a recolored coloring must satisfy when
    /// colors are renamed by `sigma` (0-based over `0..k`).
    pub fn permute_colors(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.k() {
            return Err(Error::usage("color permutation has the wrong length"));
        }
        let mut r = vec![0; self.k()];
        for (c, &size) in self.clique_sizes.iter().enumerate() {
            r[sigma.apply(c)] = size;
        }
        Ok(RamseyParams {
            clique_sizes: r,
            n: self.n,
        })
    }

    /// What the neighborhood of a vertex in color `c` must avoid: the same
    /// sizes with `r_c` lowered by one.
    pub fn neighborhood(&self, c: Color, d: usize) -> Result<Self> {
        let mut r = self.clique_sizes.clone();
        let slot = &mut r[c as usize - 1];
        if *slot <= 2 {
            return Err(Error::usage(format!(
                "color {c} has clique size {}; no neighborhood in that color exists",
                *slot
            )));
        }
        *slot -= 1;
        RamseyParams::new(r, d.max(1)).map(|p| RamseyParams { n: d, ..p })
    }
}

impl fmt::Display for RamseyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.clique_sizes.iter().map(|r| r.to_string()).collect();
        write!(f, "{}:{}", r.join(","), self.n)
    }
}

impl FromStr for RamseyParams {
    type Err = Error;

    /// Parses `r1,r2,...:n`.
    fn from_str(s: &str) -> Result<Self> {
        let (sizes, n) = s
            .split_once(':')
            .ok_or_else(|| Error::usage(format!("params `{s}` must look like r1,r2,...:n")))?;
        let sizes = sizes
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::usage(format!("params `{s}`: {e}")))?;
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::usage(format!("params `{s}`: {e}")))?;
        RamseyParams::new(sizes, n)
    }
}

/// Outcome of [`ColorMatrix::verify_ramsey`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RamseyCheck {
    Ok,
    /// A monochromatic clique of forbidden size; vertices are 0-based.
    Violation {
        color: Color,
        vertices: Vec<usize>,
    },
}

impl RamseyCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, RamseyCheck::Ok)
    }
}

/// Symmetric `n x n` matrix with entries in `0..=k` and a zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorMatrix {
    n: usize,
    k: u8,
    cells: Vec<Color>,
}

impl fmt::Debug for ColorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColorMatrix(n={}, k={})\n{}", self.n, self.k, self)
    }
}

impl ColorMatrix {
    /// The edgeless matrix (all zeros).
    pub fn empty(n: usize, k: u8) -> Self {
        ColorMatrix {
            n,
            k,
            cells: vec![0; n * n],
        }
    }

    /// `K_n` with every edge in color `c`.
    pub fn monochromatic(n: usize, k: u8, c: Color) -> Self {
        let mut m = ColorMatrix::empty(n, k);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn from_rows(k: u8, rows: &[Vec<Color>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            cells.extend_from_slice(row);
        }
        let m = ColorMatrix { n, k, cells };
        m.validate()?;
        Ok(m)
    }

    /// Builds a matrix from an edge-color function over pairs `i < j`.
    pub fn from_fn(n: usize, k: u8, mut color: impl FnMut(usize, usize) -> Color) -> Self {
        let mut m = ColorMatrix::empty(n, k);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, color(i, j));
            }
        }
        m
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0 {
                return Err(Error::usage(format!("diagonal entry {} is nonzero", i + 1)));
            }
            for j in 0..self.n {
                let c = self.get(i, j);
                if c > self.k {
                    return Err(Error::usage(format!(
                        "entry ({},{}) = {c} exceeds k = {}",
                        i + 1,
                        j + 1,
                        self.k
                    )));
                }
                if c != self.get(j, i) {
                    return Err(Error::usage(format!(
                        "matrix is not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Color {
        self.cells[i * self.n + j]
    }

    /// Sets edge `{i,j}` in both triangles.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, c: Color) {
        debug_assert!(i != j || c == 0);
        self.cells[i * self.n + j] = c;
        self.cells[j * self.n + i] = c;
    }

    pub fn row(&self, i: usize) -> &[Color] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    /// Reinterprets the matrix over a different number of colors.
    pub fn with_k(&self, k: u8) -> Result<Self> {
        let m = ColorMatrix {
            n: self.n,
            k,
            cells: self.cells.clone(),
        };
        m.validate()?;
        Ok(m)
    }

    /// True when every off-diagonal entry is a proper color.
    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) != 0))
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) == 0 {
                    return Err(Error::usage(format!(
                        "coloring is incomplete: edge ({},{}) has no color",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::usage(format!(
                "vertex {} out of range 1..={}",
                v + 1,
                self.n
            )));
        }
        Ok(())
    }

    fn check_color(&self, c: Color) -> Result<()> {
        if c == 0 || c > self.k {
            return Err(Error::usage(format!(
                "color {c} out of range 1..={}",
                self.k
            )));
        }
        Ok(())
    }

    /// `N_c(v)`: vertices joined to `v` by an edge of color `c`, ascending.
    pub fn neighbors(&self, v: usize, c: Color) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        self.check_color(c)?;
        Ok((0..self.n)
            .filter(|&u| u != v && self.get(v, u) == c)
            .collect())
    }

    pub fn degree_tuple(&self, v: usize) -> Result<DegreeTuple> {
        self.check_vertex(v)?;
        let mut d = vec![0u32; self.k as usize];
        for &c in self.row(v) {
            if c != 0 {
                d[c as usize - 1] += 1;
            }
        }
        Ok(DegreeTuple(d))
    }

    /// `Some(t)` if every vertex has degree tuple `t`.
    pub fn regular_tuple(&self) -> Option<DegreeTuple> {
        let first = self.degree_tuple(0).ok()?;
        (1..self.n)
            .all(|v| self.degree_tuple(v).ok().as_ref() == Some(&first))
            .then_some(first)
    }

    /// Induced sub-coloring on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let n = vertices.len();
        let mut m = ColorMatrix::empty(n, self.k);
        for a in 0..n {
            for b in a + 1..n {
                m.set(a, b, self.get(vertices[a], vertices[b]));
            }
        }
        Ok(m)
    }

    /// `G^c_v`: the coloring induced on `N_c(v)`.
    pub fn project(&self, v: usize, c: Color) -> Result<Self> {
        let nbrs = self.neighbors(v, c)?;
        self.induced(&nbrs)
    }

    /// Checks that no color `c` contains a monochromatic `K_{r_c}`.
    pub fn verify_ramsey(&self, p: &RamseyParams) -> Result<RamseyCheck> {
        if p.n() != self.n {
            return Err(Error::usage(format!(
                "coloring has {} vertices but params say {}",
                self.n,
                p.n()
            )));
        }
        if p.k() != self.k as usize {
            return Err(Error::usage(format!(
                "coloring has {} colors but params say {}",
                self.k,
                p.k()
            )));
        }
        self.require_complete()?;
        for c in 1..=self.k {
            if let Some(clique) = self.find_clique(c, p.r(c)) {
                return Ok(RamseyCheck::Violation {
                    color: c,
                    vertices: clique,
                });
            }
        }
        Ok(RamseyCheck::Ok)
    }

    /// Searches for a monochromatic clique of size `r` in color `c`,
    /// extending partial cliques only by common `c`-neighbors.
    pub fn find_clique(&self, c: Color, r: usize) -> Option<Vec<usize>> {
        if r > self.n {
            return None;
        }
        if r <= 1 {
            return Some((0..r).collect());
        }
        let mut clique = Vec::with_capacity(r);
        let candidates: Vec<usize> = (0..self.n).collect();
        self.extend_clique(c, r, &mut clique, &candidates)
            .then_some(clique)
    }

    fn extend_clique(&self, c: Color, r: usize, clique: &mut Vec<usize>, cand: &[usize]) -> bool {
        if clique.len() == r {
            return true;
        }
        let need = r - clique.len();
        for (idx, &v) in cand.iter().enumerate() {
            if cand.len() - idx < need {
                break;
            }
            let next: Vec<usize> = cand[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| self.get(v, u) == c)
                .collect();
            if next.len() + 1 < need {
                continue;
            }
            clique.push(v);
            if self.extend_clique(c, r, clique, &next) {
                return true;
            }
            clique.pop();
        }
        false
    }

    /// Returns `B` with `B[pi(i)][pi(j)] = sigma(A[i][j])`.
    ///
    /// `sigma` acts on `0..k` as the 0-based image of colors `1..=k`;
    /// non-edges stay non-edges.
    pub fn apply_permutation(&self, pi: &Permutation, sigma: &Permutation) -> Result<Self> {
        if pi.len() != self.n {
            return Err(Error::usage(format!(
                "vertex permutation has length {}, expected {}",
                pi.len(),
                self.n
            )));
        }
        if sigma.len() != self.k as usize {
            return Err(Error::usage(format!(
                "color permutation has length {}, expected {}",
                sigma.len(),
                self.k
            )));
        }
        let mut out = ColorMatrix::empty(self.n, self.k);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.get(i, j);
                let mapped = if c == 0 {
                    0
                } else {
                    sigma.apply(c as usize - 1) as Color + 1
                };
                out.set(pi.apply(i), pi.apply(j), mapped);
            }
        }
        Ok(out)
    }

    /// Renames colors through an explicit table `map[c] = new color`
    /// (index 0 must map to 0). The result lives over `k` colors.
    pub fn recolor(&self, k: u8, map: &[Color]) -> Result<Self> {
        if map.len() != self.k as usize + 1 || map[0] != 0 {
            return Err(Error::usage("color map must cover 0..=k and fix 0"));
        }
        let mut out = ColorMatrix::empty(self.n, k);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = map[self.get(i, j) as usize];
                if c > k {
                    return Err(Error::usage(format!(
                        "color map sends an edge to {c} > {k}"
                    )));
                }
                out.set(i, j, c);
            }
        }
        Ok(out)
    }

    /// Upper triangle in row-major order.
    pub fn upper_triangle(&self) -> Vec<Color> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }

    /// Parses one coloring from the text format: `n k`, then `n` rows of
    /// `n` digits.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let m = Self::parse_lines(&mut lines)?;
        if let Some((no, _)) = lines.next() {
            return Err(Error::parse(no + 1, "trailing content after coloring"));
        }
        Ok(m)
    }

    /// Reads one block from a line iterator; used for multi-coloring files.
    pub(crate) fn parse_lines<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Self> {
        let (hno, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing `n k` header"))?;
        let (n, k) =
            parse_header(header).ok_or_else(|| Error::parse(hno + 1, "bad `n k` header"))?;
        if k > 9 {
            return Err(Error::parse(
                hno + 1,
                "the text format supports at most 9 colors",
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hno + 2 + i, format!("expected {n} rows")))?;
            let row = line
                .trim()
                .chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as Color)
                        .ok_or_else(|| Error::parse(no + 1, format!("unexpected `{ch}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::parse(
                    no + 1,
                    format!("expected {n} digits, got {}", row.len()),
                ));
            }
            rows.push(row);
        }
        ColorMatrix::from_rows(k as u8, &rows).map_err(|e| Error::parse(hno + 1, e.to_string()))
    }
}

pub(crate) fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let n = it.next()?.parse().ok()?;
    let k = it.next()?.parse().ok()?;
    it.next().is_none().then_some((n, k))
}

/// The text format: header line, then one digit string per row.
impl fmt::Display for ColorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        for i in 0..self.n {
            for &c in self.row(i) {
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parses a file holding several colorings back to back.
pub fn parse_colorings(text: &str) -> Result<Vec<ColorMatrix>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .peekable();
    let mut out = Vec::new();
    while lines.peek().is_some() {
        out.push(ColorMatrix::parse_lines(&mut lines)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> ColorMatrix {
        ColorMatrix::from_fn(5, 2, |i, j| {
            let d = (j - i) % 5;
            if d == 1 || d == 4 {
                1
            } else {
                2
            }
        })
    }

    fn circulant_29() -> ColorMatrix {
        ColorMatrix::parse(include_str!("../fixtures/circulant_433_29.txt")).unwrap()
    }

    #[test]
    fn neighbors_in_circulant_29() {
        let a = circulant_29();
        assert_eq!(a.neighbors(0, 1).unwrap(), (1..=12).collect::<Vec<_>>());
        assert_eq!(a.neighbors(0, 2).unwrap(), (13..=20).collect::<Vec<_>>());
        assert_eq!(a.neighbors(0, 3).unwrap(), (21..=28).collect::<Vec<_>>());
    }

    #[test]
    fn neighbors_small_cases() {
        let k3 = ColorMatrix::monochromatic(3, 1, 1);
        assert_eq!(k3.neighbors(0, 1).unwrap(), vec![1, 2]);
        let k4 = ColorMatrix::monochromatic(4, 3, 2);
        assert!(k4.neighbors(1, 3).unwrap().is_empty());
        assert!(k4.neighbors(4, 1).is_err());
        assert!(k4.neighbors(0, 4).is_err());
        assert!(k4.neighbors(0, 0).is_err());
    }

    #[test]
    fn degree_tuples() {
        assert_eq!(
            circulant_29().degree_tuple(0).unwrap(),
            DegreeTuple(vec![12, 8, 8])
        );
        assert_eq!(
            circulant_29().regular_tuple(),
            Some(DegreeTuple(vec![12, 8, 8]))
        );
        let single = ColorMatrix::empty(1, 3);
        assert_eq!(single.degree_tuple(0).unwrap(), DegreeTuple(vec![0, 0, 0]));
        let k4 = ColorMatrix::monochromatic(4, 3, 2);
        for v in 0..4 {
            assert_eq!(k4.degree_tuple(v).unwrap(), DegreeTuple(vec![0, 3, 0]));
        }
        assert!(k4.degree_tuple(4).is_err());
    }

    #[test]
    fn projections_of_circulant_29_are_smaller_ramsey_colorings() {
        let a = circulant_29();
        let p = "4,3,3:29".parse::<RamseyParams>().unwrap();
        for (c, expect) in [(1, "3,3,3:12"), (2, "4,2,3:8"), (3, "4,3,2:8")] {
            let block = a.project(0, c).unwrap();
            assert_eq!(p.neighborhood(c, block.n()).unwrap().to_string(), expect);
            let q: RamseyParams = expect.parse().unwrap();
            assert_eq!(block.verify_ramsey(&q).unwrap(), RamseyCheck::Ok);
        }
        // the 12x12 block is rows/cols 2..13 of the full matrix
        let block = a.project(0, 1).unwrap();
        assert_eq!(block.get(0, 2), a.get(1, 3));
    }

    #[test]
    fn project_edge_cases() {
        let k4 = ColorMatrix::monochromatic(4, 3, 2);
        assert_eq!(k4.project(0, 1).unwrap().n(), 0);
        let k3 = ColorMatrix::monochromatic(3, 1, 1);
        let p = k3.project(0, 1).unwrap();
        assert_eq!(p, ColorMatrix::monochromatic(2, 1, 1));
    }

    #[test]
    fn verify_examples() {
        let p: RamseyParams = "4,3,3:29".parse().unwrap();
        assert!(circulant_29().verify_ramsey(&p).unwrap().is_ok());
        let k3 = ColorMatrix::monochromatic(3, 3, 2);
        assert_eq!(
            k3.verify_ramsey(&"4,3,3:3".parse().unwrap()).unwrap(),
            RamseyCheck::Violation {
                color: 2,
                vertices: vec![0, 1, 2]
            }
        );
        assert!(pentagon()
            .verify_ramsey(&"3,3:5".parse().unwrap())
            .unwrap()
            .is_ok());
    }

    #[test]
    fn verify_rejects_incomplete_and_mismatched() {
        let m = ColorMatrix::empty(3, 2);
        assert!(matches!(
            m.verify_ramsey(&"3,3:3".parse().unwrap()),
            Err(Error::Usage(_))
        ));
        assert!(pentagon().verify_ramsey(&"3,3:6".parse().unwrap()).is_err());
        assert!(pentagon()
            .verify_ramsey(&"3,3,3:5".parse().unwrap())
            .is_err());
    }

    #[test]
    fn permutation_identity_and_inverse() {
        let a = circulant_29();
        let id = Permutation::identity(29);
        let cid = Permutation::identity(3);
        assert_eq!(a.apply_permutation(&id, &cid).unwrap(), a);
        let pi = Permutation::new((0..29).map(|i| (i * 7 + 3) % 29).collect()).unwrap();
        let sigma = Permutation::new(vec![2, 0, 1]).unwrap();
        let b = a.apply_permutation(&pi, &sigma).unwrap();
        assert_ne!(a, b);
        assert_eq!(
            b.apply_permutation(&pi.inverse(), &sigma.inverse())
                .unwrap(),
            a
        );
        assert!(a
            .apply_permutation(&Permutation::identity(3), &cid)
            .is_err());
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn params_parse_and_permute() {
        let p: RamseyParams = "4,3,3:30".parse().unwrap();
        assert_eq!(p.k(), 3);
        assert_eq!(p.r(1), 4);
        assert_eq!(p.to_string(), "4,3,3:30");
        let q = p
            .permute_colors(&Permutation::new(vec![1, 0, 2]).unwrap())
            .unwrap();
        assert_eq!(q.to_string(), "3,4,3:30");
        assert!("4,3".parse::<RamseyParams>().is_err());
        assert!("1,3:4".parse::<RamseyParams>().is_err());
        assert!("3,3:0".parse::<RamseyParams>().is_err());
    }

    #[test]
    fn text_format_rejects_bad_input() {
        assert!(ColorMatrix::parse("2 1\n01\n00\n").is_err());
        assert!(ColorMatrix::parse("2 1\n11\n10\n").is_err());
        assert!(ColorMatrix::parse("2 1\n02\n20\n").is_err());
        assert!(ColorMatrix::parse("2 1\n01\n").is_err());
        let m = ColorMatrix::parse("2 1\n01\n10\n").unwrap();
        assert_eq!(ColorMatrix::parse(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn all_permutations() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].as_slice(), &[0, 1, 2]);
        assert_eq!(all[5].as_slice(), &[2, 1, 0]);
        assert_eq!(Permutation::all(0).len(), 1);
    }
}
