//! Archives of colorings deduplicated by canonical key.
//!
//! Archive text: an optional `raw <count>` line, then for each member a
//! `key <hex>` line followed by the coloring in the usual `n k` + rows
//! format, blocks separated by blank lines.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::canonical::{canonical_key, CanonicalKey};
use crate::coloring::{ColorMatrix, RamseyParams};
use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct ColoringSet {
    params: Option<RamseyParams>,
    dims: Option<(usize, u8)>,
    members: BTreeMap<CanonicalKey, ColorMatrix>,
    raw: usize,
    archive: Option<(PathBuf, BufWriter<File>)>,
}

impl ColoringSet {
    pub fn new(params: Option<RamseyParams>) -> Self {
        ColoringSet {
            params,
            ..Default::default()
        }
    }

    pub fn params(&self) -> Option<&RamseyParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of colorings offered to the set, duplicates included.
    pub fn raw_count(&self) -> usize {
        self.raw
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.members.keys()
    }

    pub fn members(&self) -> impl Iterator<Item = (&CanonicalKey, &ColorMatrix)> {
        self.members.iter()
    }

    pub fn representatives(&self) -> Vec<ColorMatrix> {
        self.members.values().cloned().collect()
    }

    pub fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.members.contains_key(key)
    }

    fn check_dims(&mut self, a: &ColorMatrix) -> Result<()> {
        match self.dims {
            None => {
                self.dims = Some((a.n(), a.k()));
                Ok(())
            }
            Some((n, k)) if (n, k) == (a.n(), a.k()) => Ok(()),
            Some((n, k)) => Err(Error::usage(format!(
                "coloring is ({}, {}) but the set holds ({n}, {k})",
                a.n(),
                a.k()
            ))),
        }
    }

    /// Adds `rep` under `key` unless the class is already present.
    pub fn insert_keyed(&mut self, key: CanonicalKey, rep: ColorMatrix) -> Result<bool> {
        self.check_dims(&rep)?;
        self.raw += 1;
        if self.members.contains_key(&key) {
            return Ok(false);
        }
        if let Some((path, w)) = &mut self.archive {
            write_block(w, &key, &rep)
                .and_then(|_| w.flush())
                .map_err(|e| Error::file(path.clone(), e))?;
        }
        self.members.insert(key, rep);
        Ok(true)
    }

    /// Adds `a` as its class representative if the class is new. The first
    /// member seen is kept as is, so it still satisfies any asymmetric
    /// parameters the set was computed for.
    pub fn insert(&mut self, a: &ColorMatrix) -> Result<bool> {
        self.check_dims(a)?;
        let key = canonical_key(a)?;
        self.insert_keyed(key, a.clone())
    }

    /// Keys `batch` in parallel, then merges in order.
    pub fn extend_parallel(&mut self, batch: &[ColorMatrix]) -> Result<usize> {
        for a in batch {
            self.check_dims(a)?;
        }
        let keys: Vec<CanonicalKey> = batch.par_iter().map(canonical_key).collect::<Result<_>>()?;
        let mut added = 0;
        for (key, a) in keys.into_iter().zip(batch) {
            added += usize::from(self.insert_keyed(key, a.clone())?);
        }
        Ok(added)
    }

    /// Loads `path` if it exists and appends every new member to it.
    pub fn with_archive(params: Option<RamseyParams>, path: &Path) -> Result<Self> {
        let mut set = if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
            let mut s = Self::parse_archive(&text)?;
            s.params = params;
            s
        } else {
            ColoringSet::new(params)
        };
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::file(path, e))?;
        set.archive = Some((path.to_path_buf(), BufWriter::new(file)));
        Ok(set)
    }

    pub fn write_archive(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "raw {}", self.raw)?;
        for (key, rep) in &self.members {
            write_block(out, key, rep)?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path).map_err(|e| Error::file(path, e))?);
        self.write_archive(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::file(path, e))
    }

    /// Reads an archive; keys are taken as written, not recomputed.
    pub fn parse_archive(text: &str) -> Result<Self> {
        let mut set = ColoringSet::new(None);
        let mut raw = None;
        let mut lines = text.lines().enumerate().peekable();
        while let Some((no, line)) = lines.next() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(r) = line.strip_prefix("raw ") {
                raw = Some(
                    r.trim()
                        .parse()
                        .map_err(|_| Error::parse(no + 1, "bad raw count"))?,
                );
                continue;
            }
            let hex = line
                .strip_prefix("key ")
                .ok_or_else(|| Error::parse(no + 1, "expected `key <hex>`"))?;
            let key = CanonicalKey::from_hex(hex)?;
            let mut block = String::new();
            while let Some((_, l)) = lines.peek() {
                if l.trim().is_empty() || l.starts_with("key ") {
                    break;
                }
                block.push_str(l);
                block.push('\n');
                lines.next();
            }
            let rep = ColorMatrix::parse(&block)?;
            set.insert_keyed(key, rep)?;
        }
        set.raw = raw.unwrap_or(set.members.len()).max(set.members.len());
        Ok(set)
    }
}

fn write_block(out: &mut impl Write, key: &CanonicalKey, rep: &ColorMatrix) -> std::io::Result<()> {
    writeln!(out, "key {key}")?;
    write!(out, "{rep}")?;
    writeln!(out)
}

/// One representative per weak-isomorphism class of `colorings`.
pub fn reduce_mod_weak_iso(
    colorings: impl IntoIterator<Item = ColorMatrix>,
) -> Result<ColoringSet> {
    let mut set = ColoringSet::new(None);
    let mut batch = Vec::with_capacity(4096);
    for a in colorings {
        batch.push(a);
        if batch.len() == batch.capacity() {
            set.extend_parallel(&batch)?;
            batch.clear();
        }
    }
    set.extend_parallel(&batch)?;
    Ok(set)
}
