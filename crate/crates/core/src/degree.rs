//! Graphical degree sequences and candidate degree matrices.

use std::fmt;

use crate::canonical::{lex_sort, DegreeMatrix};
use crate::error::{Error, Result};

/// A non-increasing sequence of vertex degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeSequence(Vec<u32>);

impl DegreeSequence {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::usage(format!(
                "degree sequence {values:?} is not non-increasing"
            )));
        }
        Ok(DegreeSequence(values))
    }

    /// Sorts `values` into a sequence.
    pub fn sorted(mut values: Vec<u32>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(values)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_graphical(&self) -> bool {
        erdos_gallai(&self.0)
    }

    /// One sequence per line, space separated; blank and `#` lines skipped.
    pub fn parse_many(text: &str) -> Result<Vec<DegreeSequence>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(no, l)| {
                let v = l
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<Vec<u32>, _>>()
                    .map_err(|e| Error::parse(no + 1, e.to_string()))?;
                DegreeSequence::new(v)
            })
            .collect()
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Even sum plus the Erdős–Gallai inequality for every prefix.
pub fn is_graphical(s: &DegreeSequence) -> bool {
    s.is_graphical()
}

fn erdos_gallai(d: &[u32]) -> bool {
    let n = d.len() as u64;
    if d.iter().map(|&x| x as u64).sum::<u64>() % 2 == 1 {
        return false;
    }
    if d.first().is_some_and(|&x| x as u64 >= n.max(1)) {
        return false;
    }
    let mut prefix = 0u64;
    for k in 1..=d.len() {
        prefix += d[k - 1] as u64;
        let kk = k as u64;
        let tail: u64 = d[k..].iter().map(|&x| (x as u64).min(kk)).sum();
        if prefix > kk * (kk - 1) + tail {
            return false;
        }
    }
    true
}

/// All graphical non-increasing sequences of length `n` with entries in
/// `[lo, hi]`, in lexicographic order.
pub fn enum_degree_sequences(n: usize, lo: u32, hi: u32) -> Vec<DegreeSequence> {
    let mut out = Vec::new();
    if n == 0 {
        if lo <= hi {
            out.push(DegreeSequence(Vec::new()));
        }
        return out;
    }
    let hi = hi.min(n as u32 - 1);
    if lo > hi {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    fill_sequences(n, lo, hi, &mut cur, &mut out);
    out
}

fn fill_sequences(n: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeSequence>) {
    if cur.len() == n {
        if erdos_gallai(cur) {
            out.push(DegreeSequence(cur.clone()));
        }
        return;
    }
    let top = cur.last().copied().unwrap_or(hi);
    for v in lo..=top {
        cur.push(v);
        fill_sequences(n, lo, hi, cur, out);
        cur.pop();
    }
}

/// Number of graphical sequences of length `n` with entries in `[lo, hi]`,
/// without materializing them.
pub fn count_degree_sequences(n: usize, lo: u32, hi: u32) -> usize {
    if n == 0 {
        return usize::from(lo <= hi);
    }
    let hi = hi.min(n as u32 - 1);
    if lo > hi {
        return 0;
    }
    fn go(n: usize, lo: u32, top: u32, cur: &mut Vec<u32>) -> usize {
        if cur.len() == n {
            return usize::from(erdos_gallai(cur));
        }
        let mut total = 0;
        for v in lo..=top {
            cur.push(v);
            total += go(n, lo, v, cur);
            cur.pop();
        }
        total
    }
    go(n, lo, hi, &mut Vec::with_capacity(n))
}

/// Degree matrices with left column from `left_columns`.
///
/// Emits every `n x k` matrix whose rows sum to `n - 1`, whose sorted
/// columns are graphical, whose entries outside the left column lie in
/// `bounds` (when given), and which is its own lex-sorted form, i.e. the
/// least doubly sorted arrangement. Output is sorted and deduplicated.
pub fn enum_degree_matrices(
    n: usize,
    k: usize,
    left_columns: &[DegreeSequence],
    bounds: Option<(u32, u32)>,
) -> Vec<DegreeMatrix> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let target = n as u32 - 1;
    let (lo, hi) = bounds.unwrap_or((0, target));
    for left in left_columns {
        if left.len() != n || left.as_slice().iter().any(|&v| v > target) {
            continue;
        }
        let mut e = MatrixEnum {
            n,
            k,
            lo,
            hi: hi.min(target),
            target,
            left: left.as_slice(),
            rows: Vec::with_capacity(n),
            out: &mut out,
        };
        e.fill();
    }
    out.sort();
    out.dedup();
    out
}

struct MatrixEnum<'a> {
    n: usize,
    k: usize,
    lo: u32,
    hi: u32,
    target: u32,
    left: &'a [u32],
    rows: Vec<Vec<u32>>,
    out: &'a mut Vec<DegreeMatrix>,
}

impl MatrixEnum<'_> {
    fn fill(&mut self) {
        let i = self.rows.len();
        if i == self.n {
            self.finish();
            return;
        }
        let mut row = vec![0u32; self.k];
        row[0] = self.left[i];
        let rest = self.target - self.left[i];
        self.fill_row(&mut row, 1, rest);
    }

    fn fill_row(&mut self, row: &mut Vec<u32>, c: usize, rest: u32) {
        if c == self.k {
            if rest != 0 {
                return;
            }
            let i = self.rows.len();
            // rows non-increasing
            if i > 0 && self.rows[i - 1] < *row {
                return;
            }
            if !self.columns_feasible(row) {
                return;
            }
            self.rows.push(row.clone());
            self.fill();
            self.rows.pop();
            return;
        }
        let remaining_cols = (self.k - c - 1) as u32;
        let lo = self.lo.max(rest.saturating_sub(remaining_cols * self.hi));
        let hi = self.hi.min(rest.saturating_sub(remaining_cols * self.lo));
        if lo > hi {
            return;
        }
        for v in (lo..=hi).rev() {
            row[c] = v;
            self.fill_row(row, c + 1, rest - v);
        }
    }

    /// Column order so far must not already be violated: for adjacent
    /// columns, the prefix of the left one must not be lexicographically
    /// smaller than the prefix of the right one.
    fn columns_feasible(&self, new_row: &[u32]) -> bool {
        for c in 1..self.k {
            let mut state = std::cmp::Ordering::Equal;
            for r in self.rows.iter().map(|r| r.as_slice()).chain([new_row]) {
                state = r[c - 1].cmp(&r[c]);
                if state != std::cmp::Ordering::Equal {
                    break;
                }
            }
            if state == std::cmp::Ordering::Less {
                return false;
            }
        }
        true
    }

    fn finish(&mut self) {
        for c in 0..self.k {
            let col = DegreeSequence::sorted(self.rows.iter().map(|r| r[c]).collect());
            if !col.is_graphical() {
                return;
            }
        }
        let m = DegreeMatrix::new(self.k, self.rows.clone()).expect("rows have k entries");
        if lex_sort(&m) == m {
            self.out.push(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    /// Degree sequences of all graphs on `n` labeled vertices.
    fn realizable(n: usize) -> std::collections::BTreeSet<Vec<u32>> {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u64..(1 << pairs.len()) {
            let mut d = vec![0u32; n];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    d[i] += 1;
                    d[j] += 1;
                }
            }
            d.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(d);
        }
        out
    }

    #[test]
    fn erdos_gallai_matches_exhaustive_search() {
        for n in 1..=6 {
            let real = realizable(n);
            let all = enum_degree_sequences(n, 0, n as u32 - 1);
            let got: std::collections::BTreeSet<Vec<u32>> =
                all.iter().map(|s| s.as_slice().to_vec()).collect();
            assert_eq!(got, real, "n={n}");
        }
    }

    #[test]
    fn small_examples() {
        assert!(DegreeSequence::new(vec![0, 0, 0]).unwrap().is_graphical());
        assert!(!DegreeSequence::new(vec![3, 1]).unwrap().is_graphical());
        assert!(DegreeSequence::new(vec![1, 2]).is_err());
        let two: Vec<Vec<u32>> = enum_degree_sequences(2, 0, 1)
            .iter()
            .map(|s| s.as_slice().to_vec())
            .collect();
        assert_eq!(two, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(
            enum_degree_sequences(3, 2, 2),
            vec![DegreeSequence(vec![2, 2, 2])]
        );
    }

    #[test]
    fn bounded_equals_filtered() {
        for n in 1..=10 {
            let all = enum_degree_sequences(n, 0, n as u32 - 1);
            for (lo, hi) in [(1, 3), (2, 5), (0, 2)] {
                let filtered: Vec<_> = all
                    .iter()
                    .filter(|s| s.as_slice().iter().all(|&v| v >= lo && v <= hi))
                    .cloned()
                    .collect();
                assert_eq!(enum_degree_sequences(n, lo, hi), filtered);
                assert_eq!(count_degree_sequences(n, lo, hi), filtered.len());
            }
        }
    }

    #[test]
    fn bounded_sequence_count() {
        assert_eq!(enum_degree_sequences(13, 2, 5).len(), 280);
    }

    #[test]
    fn matrix_examples() {
        let tri = DegreeSequence::new(vec![2, 2, 2]).unwrap();
        let ms = enum_degree_matrices(3, 1, &[tri], None);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].rows(), vec![vec![2], vec![2], vec![2]]);
        let big = DegreeSequence::new(vec![3, 3, 3]).unwrap();
        assert!(enum_degree_matrices(3, 2, &[big], None).is_empty());
    }

    #[test]
    fn matrices_are_fixpoints_with_graphical_columns() {
        let left = enum_degree_sequences(6, 1, 3);
        let ms = enum_degree_matrices(6, 2, &left, None);
        assert!(!ms.is_empty());
        for m in &ms {
            assert_eq!(lex_sort(m), *m);
            assert!(m.rows_sum_to_degree());
            for c in 0..2 {
                assert!(DegreeSequence::sorted(m.column(c)).is_graphical());
            }
            assert!(left.contains(&DegreeSequence::new(m.column(0)).unwrap()));
        }
    }

    /// Brute force over all rows assignments for a tiny case.
    #[test]
    fn matrices_match_brute_force() {
        let n = 5;
        let left = enum_degree_sequences(n, 0, 4);
        let fast = enum_degree_matrices(n, 3, &left, None);
        let rows: Vec<Vec<u32>> = (0..=4u32)
            .flat_map(|a| (0..=4 - a).map(move |b| vec![a, b, 4 - a - b]))
            .collect();
        let mut slow = std::collections::BTreeSet::new();
        for combo in (0..n).map(|_| rows.iter()).multi_cartesian_product() {
            let m = DegreeMatrix::new(3, combo.into_iter().cloned().collect()).unwrap();
            let ok = (0..3).all(|c| DegreeSequence::sorted(m.column(c)).is_graphical());
            if ok {
                let s = lex_sort(&m);
                if left.contains(&DegreeSequence::new(s.column(0)).unwrap()) {
                    slow.insert(s);
                }
            }
        }
        assert_eq!(fast, slow.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn sequence_file_round_trip() {
        let seqs = enum_degree_sequences(5, 1, 3);
        let text: String = seqs.iter().map(|s| format!("{s}\n")).collect();
        assert_eq!(DegreeSequence::parse_many(&text).unwrap(), seqs);
    }
}
