//! Partially instantiated adjacency matrices.
//!
//! Text format: `n k`, then `n` rows of `n` characters, each a color digit,
//! `_` for a free cell, or an uppercase symbol. Trailing lines
//! `dom A 1 3` restrict a symbol's colors; `neq A B` forces two symbols
//! apart. Symbols without a `dom` line range over all colors.

use std::collections::BTreeSet;
use std::fmt;

use crate::coloring::{Color, ColorMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Fixed(Color),
    Free,
    Sym(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: char,
    pub domain: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    n: usize,
    k: u8,
    cells: Vec<Cell>,
    symbols: Vec<Symbol>,
    neq: Vec<(usize, usize)>,
}

impl PartialColoring {
    /// All off-diagonal cells free.
    pub fn free(n: usize, k: u8) -> Self {
        let mut cells = vec![Cell::Free; n * n];
        for i in 0..n {
            cells[i * n + i] = Cell::Fixed(0);
        }
        PartialColoring {
            n,
            k,
            cells,
            symbols: Vec::new(),
            neq: Vec::new(),
        }
    }

    /// Every cell fixed to the coloring's value.
    pub fn from_coloring(a: &ColorMatrix) -> Self {
        let mut t = PartialColoring::free(a.n(), a.k());
        for i in 0..a.n() {
            for j in i + 1..a.n() {
                if a.get(i, j) != 0 {
                    t.set(i, j, Cell::Fixed(a.get(i, j)));
                }
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, cell: Cell) {
        assert!(i != j, "diagonal cells are fixed");
        self.cells[i * self.n + j] = cell;
        self.cells[j * self.n + i] = cell;
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn neq(&self) -> &[(usize, usize)] {
        &self.neq
    }

    pub fn symbol_id(&self, name: char) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn add_symbol(&mut self, name: char, domain: Vec<Color>) -> Result<usize> {
        if !name.is_ascii_uppercase() {
            return Err(Error::usage(format!(
                "symbol `{name}` must be an uppercase letter"
            )));
        }
        if self.symbol_id(name).is_some() {
            return Err(Error::usage(format!("symbol `{name}` declared twice")));
        }
        if domain.is_empty() || domain.iter().any(|&c| c == 0 || c > self.k) {
            return Err(Error::usage(format!(
                "bad domain {domain:?} for symbol `{name}`"
            )));
        }
        let mut domain = domain;
        domain.sort_unstable();
        domain.dedup();
        self.symbols.push(Symbol { name, domain });
        Ok(self.symbols.len() - 1)
    }

    pub fn add_neq(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || a >= self.symbols.len() || b >= self.symbols.len() {
            return Err(Error::usage(
                "disequality must name two distinct declared symbols",
            ));
        }
        self.neq.push((a.min(b), a.max(b)));
        Ok(())
    }

    /// Upper-triangle cells holding symbol `s`.
    pub fn symbol_cells(&self, s: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) == Cell::Sym(s) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn count_free(&self) -> usize {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) == Cell::Free)
            .count()
    }

    /// Checks that every symbol occurs in some cell.
    pub fn validate(&self) -> Result<()> {
        for (s, sym) in self.symbols.iter().enumerate() {
            if self.symbol_cells(s).is_empty() {
                return Err(Error::usage(format!("symbol `{}` is never used", sym.name)));
            }
        }
        Ok(())
    }

    /// Symbol assignments allowed by the domains and disequalities.
    pub fn symbol_assignments(&self) -> Vec<Vec<Color>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.symbols.len());
        self.assign(&mut cur, &mut out);
        out
    }

    fn assign(&self, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        let s = cur.len();
        if s == self.symbols.len() {
            out.push(cur.clone());
            return;
        }
        for &c in &self.symbols[s].domain {
            let clash = self.neq.iter().any(|&(a, b)| {
                (b == s && a < s && cur[a] == c) || (a == s && b < s && cur[b] == c)
            });
            if !clash {
                cur.push(c);
                self.assign(cur, out);
                cur.pop();
            }
        }
    }

    /// The coloring obtained by fixing symbols to `values`; free cells stay 0.
    pub fn instantiate(&self, values: &[Color]) -> ColorMatrix {
        ColorMatrix::from_fn(self.n, self.k, |i, j| match self.get(i, j) {
            Cell::Fixed(c) => c,
            Cell::Free => 0,
            Cell::Sym(s) => values[s],
        })
    }

    /// True if `a` agrees with every fixed cell and some symbol assignment
    /// satisfying the side constraints matches `a` on the symbol cells.
    pub fn is_satisfied_by(&self, a: &ColorMatrix) -> bool {
        if a.n() != self.n {
            return false;
        }
        let mut values: Vec<Option<Color>> = vec![None; self.symbols.len()];
        for i in 0..self.n {
            for j in i + 1..self.n {
                match self.get(i, j) {
                    Cell::Fixed(c) if a.get(i, j) != c => return false,
                    Cell::Sym(s) => {
                        let c = a.get(i, j);
                        if !self.symbols[s].domain.contains(&c) {
                            return false;
                        }
                        match values[s] {
                            Some(v) if v != c => return false,
                            _ => values[s] = Some(c),
                        }
                    }
                    _ => {}
                }
            }
        }
        self.neq
            .iter()
            .all(|&(x, y)| values[x].is_none() || values[x] != values[y])
    }

    /// Sub-template induced on `vertices`, keeping only symbols still used.
    pub fn induced(&self, vertices: &[usize]) -> PartialColoring {
        let mut t = PartialColoring::free(vertices.len(), self.k);
        let mut remap = vec![None; self.symbols.len()];
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                let cell = match self.get(u, v) {
                    Cell::Sym(s) => {
                        let id = *remap[s].get_or_insert_with(|| {
                            t.symbols.push(self.symbols[s].clone());
                            t.symbols.len() - 1
                        });
                        Cell::Sym(id)
                    }
                    other => other,
                };
                t.set(a, b, cell);
            }
        }
        for &(x, y) in &self.neq {
            if let (Some(a), Some(b)) = (remap[x], remap[y]) {
                t.neq.push((a.min(b), a.max(b)));
            }
        }
        t
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty template"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::parse(no, format!("bad header: {e}")))?;
        let [n, k] = dims[..] else {
            return Err(Error::parse(no, "header must be `n k`"));
        };
        if k == 0 || k > 9 {
            return Err(Error::parse(no, format!("k = {k} outside 1..=9")));
        }
        let mut raw: Vec<Vec<char>> = Vec::with_capacity(n);
        for _ in 0..n {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(no, format!("expected {n} rows")))?;
            let row: Vec<char> = line.chars().collect();
            if row.len() != n {
                return Err(Error::parse(
                    no,
                    format!("row has {} cells, expected {n}", row.len()),
                ));
            }
            raw.push(row);
        }
        let mut t = PartialColoring::free(n, k as u8);
        let mut doms: Vec<(char, Vec<Color>)> = Vec::new();
        let mut neqs: Vec<(usize, char, char)> = Vec::new();
        for (no, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let sym = |s: &str| -> Result<char> {
                let mut cs = s.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_ascii_uppercase() => Ok(c),
                    _ => Err(Error::parse(no, format!("bad symbol `{s}`"))),
                }
            };
            match toks.as_slice() {
                ["dom", s, colors @ ..] if !colors.is_empty() => {
                    let dom = colors
                        .iter()
                        .map(|c| c.parse::<Color>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::parse(no, e.to_string()))?;
                    doms.push((sym(s)?, dom));
                }
                ["neq", a, b] => neqs.push((no, sym(a)?, sym(b)?)),
                _ => return Err(Error::parse(no, format!("unexpected line `{line}`"))),
            }
        }
        let used: BTreeSet<char> = raw
            .iter()
            .flatten()
            .copied()
            .filter(char::is_ascii_uppercase)
            .collect();
        for &name in &used {
            let dom = doms
                .iter()
                .find(|(s, _)| *s == name)
                .map(|(_, d)| d.clone())
                .unwrap_or_else(|| (1..=k as Color).collect());
            t.add_symbol(name, dom)?;
        }
        for (s, _) in &doms {
            if !used.contains(s) {
                return Err(Error::usage(format!("symbol `{s}` is never used")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ch = raw[i][j];
                if ch != raw[j][i] {
                    return Err(Error::usage(format!(
                        "template is not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j {
                    if ch != '0' {
                        return Err(Error::usage(format!("diagonal entry {} is nonzero", i + 1)));
                    }
                    continue;
                }
                if j < i {
                    continue;
                }
                let cell = match ch {
                    '_' => Cell::Free,
                    c if c.is_ascii_uppercase() => Cell::Sym(t.symbol_id(c).expect("declared")),
                    c => match c.to_digit(10) {
                        Some(d) if d >= 1 && d <= k as u32 => Cell::Fixed(d as Color),
                        _ => {
                            return Err(Error::usage(format!(
                                "bad cell `{c}` at ({},{})",
                                i + 1,
                                j + 1
                            )))
                        }
                    },
                };
                t.set(i, j, cell);
            }
        }
        for (no, a, b) in neqs {
            let (Some(x), Some(y)) = (t.symbol_id(a), t.symbol_id(b)) else {
                return Err(Error::parse(
                    no,
                    format!("neq names an unused symbol: {a} {b}"),
                ));
            };
            t.add_neq(x, y)?;
        }
        Ok(t)
    }
}

impl fmt::Display for PartialColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        for i in 0..self.n {
            for j in 0..self.n {
                let ch = match self.get(i, j) {
                    Cell::Fixed(c) => (b'0' + c) as char,
                    Cell::Free => '_',
                    Cell::Sym(s) => self.symbols[s].name,
                };
                write!(f, "{ch}")?;
            }
            writeln!(f)?;
        }
        for s in &self.symbols {
            let dom: Vec<String> = s.domain.iter().map(|c| c.to_string()).collect();
            writeln!(f, "dom {} {}", s.name, dom.join(" "))?;
        }
        for &(a, b) in &self.neq {
            writeln!(f, "neq {} {}", self.symbols[a].name, self.symbols[b].name)?;
        }
        Ok(())
    }
}
