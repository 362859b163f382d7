//! Gluing batches: eliminating degree triples of a pivot vertex, and the
//! campaign over the regular triple.

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{clip, compute_ramsey_set, ensure_ramsey, index_of};
use crate::canonical::canonical_form_fixed_colors;
use crate::coloring::{
    parse_colorings, Color, ColorMatrix, DegreeTuple, Permutation, RamseyParams,
};
use crate::coloring_set::ColoringSet;
use crate::embed::{cover_template, GluingInstances};
use crate::encoder::{encode_degree_row, encode_partial, encode_ramsey, CnfFormula, VarMap};
use crate::error::{Error, Result};
use crate::partial::PartialColoring;
use crate::solver::{
    run_batch, BackendKind, BatchConfig, BatchLedger, Instance, Limits, Mode, Status,
};

/// Possible color-degree triples of a vertex in a (4,3,3;30) coloring, with
/// `d_2 >= d_3`. Endpoint-degree conditions are not encoded.
pub const CANDIDATE_TRIPLES: [[u32; 3]; 6] = [
    [13, 8, 8],
    [14, 8, 7],
    [15, 7, 7],
    [15, 8, 6],
    [16, 7, 6],
    [16, 8, 5],
];

/// Which blocks stand for a neighborhood.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BlockClasses {
    /// One block per weak-isomorphism class.
    #[default]
    Weak,
    /// One block per isomorphism class (colors fixed): every admissible
    /// color permutation of each weak representative. Gluing over these
    /// is exhaustive.
    Strong,
}

/// Ramsey sets computed on demand and cached as archives in one directory.
#[derive(Clone, Debug)]
pub struct BlockLibrary {
    pub dir: PathBuf,
    pub backend: BackendKind,
    pub limits: Limits,
    pub classes: BlockClasses,
}

impl BlockLibrary {
    pub fn new(dir: impl Into<PathBuf>, backend: BackendKind, limits: Limits) -> Self {
        BlockLibrary {
            dir: dir.into(),
            backend,
            limits,
            classes: BlockClasses::Weak,
        }
    }

    pub fn with_classes(mut self, classes: BlockClasses) -> Self {
        self.classes = classes;
        self
    }

    pub fn archive_path(&self, p: &RamseyParams) -> PathBuf {
        let r = p.clique_sizes().iter().join("-");
        self.dir.join(format!("ramsey_{r}_{}.arc", p.n()))
    }

    /// The reduced set of `p`, loaded from the archive or computed and saved.
    pub fn ramsey_set(&self, p: &RamseyParams) -> Result<ColoringSet> {
        let path = self.archive_path(p);
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| Error::file(&path, e))?;
            let set = ColoringSet::parse_archive(&text)?;
            for (_, a) in set.members() {
                ensure_ramsey(a, p)?;
            }
            return Ok(set);
        }
        let set = compute_ramsey_set(p, &self.backend, &self.limits)?;
        fs::create_dir_all(&self.dir).map_err(|e| Error::file(&self.dir, e))?;
        let tmp = path.with_extension("tmp");
        set.save(&tmp)?;
        fs::rename(&tmp, &path).map_err(|e| Error::file(&path, e))?;
        Ok(set)
    }

    /// Colorings of the color-`c` neighborhood of a vertex with `d` such
    /// neighbors, written in the target's colors. Colors with clique size
    /// 2 in the neighborhood problem are absent from it.
    pub fn neighborhood_blocks(
        &self,
        target: &RamseyParams,
        c: Color,
        d: usize,
    ) -> Result<Vec<ColorMatrix>> {
        let q = target.neighborhood(c, d)?;
        let k = target.k() as u8;
        if d <= 1 {
            return Ok(vec![ColorMatrix::empty(d, k)]);
        }
        let present: Vec<Color> = (1..=k).filter(|&x| q.r(x) > 2).collect();
        if present.is_empty() {
            return Ok(Vec::new());
        }
        let sizes = present.iter().map(|&x| q.r(x)).collect();
        let base = RamseyParams::new(sizes, d)?;
        let mut map = vec![0];
        map.extend(&present);
        let mut reps = self.ramsey_set(&base)?.representatives();
        if self.classes == BlockClasses::Strong {
            reps = color_orbits(&reps, &base)?;
        }
        reps.iter()
            .map(|a| {
                let b = a.recolor(k, &map)?;
                ensure_ramsey(&b, &q)?;
                Ok(b)
            })
            .collect()
    }

    /// The gluing instance space for `triple` with one block per
    /// representative.
    pub fn instances(
        &self,
        target: &RamseyParams,
        triple: &DegreeTuple,
    ) -> Result<GluingInstances> {
        let sets = triple
            .0
            .iter()
            .enumerate()
            .map(|(c, &d)| {
                Ok(self
                    .neighborhood_blocks(target, c as Color + 1, d as usize)?
                    .iter()
                    .map(PartialColoring::from_coloring)
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GluingInstances::new(target.clone(), triple.clone(), sets))
    }
}

/// The images of `reps` under color permutations that stay in
/// `R(p)`, one per isomorphism class.
fn color_orbits(reps: &[ColorMatrix], p: &RamseyParams) -> Result<Vec<ColorMatrix>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for a in reps {
        for sigma in Permutation::all(p.k()) {
            let b = a.apply_permutation(&Permutation::identity(a.n()), &sigma)?;
            if b.verify_ramsey(p)?.is_ok() && seen.insert(canonical_form_fixed_colors(&b)?.1) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// Relabels each coloring's vertices to agree with `set[0]` on as many
/// cells as possible. Exhaustive, so only for small blocks.
pub fn align_blocks(set: &[ColorMatrix]) -> Result<Vec<ColorMatrix>> {
    let Some(first) = set.first() else {
        return Ok(Vec::new());
    };
    let n = first.n();
    if n > 9 {
        return Err(Error::usage(format!("cannot align blocks of {n} vertices")));
    }
    let mut out = vec![first.clone()];
    for a in &set[1..] {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for perm in (0..n).permutations(n) {
            let mut agree = 0;
            for i in 0..n {
                for j in i + 1..n {
                    agree += usize::from(a.get(perm[i], perm[j]) == first.get(i, j));
                }
            }
            if best.as_ref().map_or(true, |(b, _)| agree > *b) {
                best = Some((agree, perm));
            }
        }
        let perm = best.expect("at least one permutation").1;
        out.push(ColorMatrix::from_fn(n, a.k(), |i, j| {
            a.get(perm[i], perm[j])
        }));
    }
    Ok(out)
}

/// The formula for instance `index`; with `regular`, every row is also
/// held to that degree tuple.
pub fn gluing_instance(
    gi: &GluingInstances,
    index: usize,
    regular: Option<&DegreeTuple>,
) -> Result<(VarMap, CnfFormula)> {
    let t = gi.get(index)?;
    let (vm, mut f) = encode_ramsey(&gi.target);
    f.extend(encode_partial(&vm, &t)?);
    if let Some(d) = regular {
        for v in 0..vm.n() {
            encode_degree_row(&vm, &mut f, v, d)?;
        }
    }
    Ok((vm, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingVerdict {
    /// Every instance is unsatisfiable.
    Eliminated,
    /// Some instance completed to a coloring.
    Found,
    Incomplete,
}

#[derive(Clone, Debug)]
pub struct GluingReport {
    pub triple: DegreeTuple,
    pub total: usize,
    pub unsat: usize,
    /// Satisfiable instances with the coloring when it was saved.
    pub sat: Vec<(usize, Option<ColorMatrix>)>,
    pub unknown: Vec<usize>,
    pub seconds: f64,
    pub ledger: BatchLedger,
}

impl GluingReport {
    pub fn verdict(&self) -> GluingVerdict {
        if !self.sat.is_empty() {
            GluingVerdict::Found
        } else if self.unknown.is_empty() && self.unsat == self.total {
            GluingVerdict::Eliminated
        } else {
            GluingVerdict::Incomplete
        }
    }
}

fn gluing_id(gi: &GluingInstances, i: usize) -> String {
    gi.id(i)
}

/// Solves the instances of `gi` in `shard` and reports over all of them.
pub fn run_gluing(
    gi: &GluingInstances,
    shard: Range<usize>,
    regular: Option<&DegreeTuple>,
    cfg: &BatchConfig,
) -> Result<GluingReport> {
    let ids: Vec<String> = clip(shard, gi.len()).map(|i| gluing_id(gi, i)).collect();
    let ledger = run_batch(
        &ids,
        |id| {
            let (vm, formula) = gluing_instance(gi, index_of(id)?, regular)?;
            Ok(Instance {
                id: id.to_string(),
                formula,
                mode: Mode::Solve,
                varmap: Some(vm),
            })
        },
        cfg,
    )?;
    let mut r = GluingReport {
        triple: gi.triple.clone(),
        total: gi.len(),
        unsat: 0,
        sat: Vec::new(),
        unknown: Vec::new(),
        seconds: 0.0,
        ledger,
    };
    for i in 0..gi.len() {
        let id = gluing_id(gi, i);
        let Some(e) = r.ledger.get(&id) else {
            r.unknown.push(i);
            continue;
        };
        r.seconds += e.seconds;
        match e.status {
            Status::Unsat => r.unsat += 1,
            Status::Sat => {
                let a = cfg
                    .solutions
                    .as_ref()
                    .and_then(|d| fs::read_to_string(d.join(format!("{id}.txt"))).ok())
                    .and_then(|t| parse_colorings(&t).ok())
                    .and_then(|mut v| v.pop());
                if let Some(a) = &a {
                    ensure_ramsey(a, &gi.target)?;
                }
                r.sat.push((i, a));
            }
            _ => r.unknown.push(i),
        }
    }
    Ok(r)
}

/// Runs every triple in `triples` through its gluing batch. All triples
/// share the ledger; ids carry the triple.
pub fn prove_regularity(
    lib: &BlockLibrary,
    target: &RamseyParams,
    triples: &[DegreeTuple],
    cfg: &BatchConfig,
) -> Result<Vec<GluingReport>> {
    triples
        .iter()
        .map(|t| {
            let gi = lib.instances(target, t)?;
            let r = run_gluing(&gi, 0..gi.len(), None, cfg)?;
            if r.verdict() == GluingVerdict::Found {
                log::warn!("triple {t}: {} satisfiable gluing instance(s)", r.sat.len());
            }
            Ok(r)
        })
        .collect()
}

/// The regular-triple campaign: one instance per color-1 block, with the
/// color-2 and color-3 blocks replaced by covering templates.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub instances: GluingInstances,
    /// The colorings each template must cover, per color.
    pub sources: Vec<Vec<ColorMatrix>>,
    pub regular: DegreeTuple,
}

/// Builds the campaign from color-1 blocks `r33313` and the colorings for
/// the other two sides (already in target colors). `hints` optionally name
/// the template for each side.
pub fn campaign_433_30(
    r33313: &[ColorMatrix],
    side2: Vec<ColorMatrix>,
    side3: Vec<ColorMatrix>,
    hints: [Option<&PartialColoring>; 2],
) -> Result<Campaign> {
    let target: RamseyParams = "4,3,3:30".parse()?;
    let regular = DegreeTuple(CANDIDATE_TRIPLES[0].to_vec());
    let t2 = cover_template(&side2, hints[0])?;
    let t3 = cover_template(&side3, hints[1])?;
    let block1 = r33313.iter().map(PartialColoring::from_coloring).collect();
    Ok(Campaign {
        instances: GluingInstances::new(target, regular.clone(), vec![block1, vec![t2], vec![t3]]),
        sources: vec![r33313.to_vec(), side2, side3],
        regular,
    })
}

impl Campaign {
    /// Templated sides read from the library and aligned before covering.
    pub fn from_library(r33313: &[ColorMatrix], lib: &BlockLibrary) -> Result<Self> {
        let target: RamseyParams = "4,3,3:30".parse()?;
        let side2 = align_blocks(&lib.neighborhood_blocks(&target, 2, 8)?)?;
        let side3 = align_blocks(&lib.neighborhood_blocks(&target, 3, 8)?)?;
        campaign_433_30(r33313, side2, side3, [None, None])
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Instance count without templates.
    pub fn untemplated_len(&self) -> usize {
        self.sources.iter().map(Vec::len).product()
    }

    pub fn instance(&self, index: usize) -> Result<(VarMap, CnfFormula)> {
        gluing_instance(&self.instances, index, Some(&self.regular))
    }

    pub fn run(&self, shard: Range<usize>, cfg: &BatchConfig) -> Result<GluingReport> {
        run_gluing(&self.instances, shard, Some(&self.regular), cfg)
    }

    /// Checks that instance `index` fixes its color-1 block and pivot row
    /// exactly and that each template admits every coloring it stands for.
    pub fn check_coverage(&self, index: usize) -> Result<()> {
        let t = self.instances.get(index)?;
        let offsets: Vec<usize> = {
            let mut next = 1;
            self.regular
                .0
                .iter()
                .map(|&d| {
                    let o = next;
                    next += d as usize;
                    o
                })
                .collect()
        };
        let choice = self.instances.choice(index);
        for (c, &d) in self.regular.0.iter().enumerate() {
            let vs: Vec<usize> = (offsets[c]..offsets[c] + d as usize).collect();
            let block = t.induced(&vs);
            let covered: Vec<&ColorMatrix> = if self.instances.block_sets[c].len() == 1 {
                self.sources[c].iter().collect()
            } else {
                vec![&self.sources[c][choice[c]]]
            };
            for a in covered {
                if !block.is_satisfied_by(a) {
                    return Err(Error::Soundness(format!(
                        "instance {} does not admit a color-{} block it should cover",
                        self.instances.id(index),
                        c + 1
                    )));
                }
            }
            for &v in &vs {
                if t.get(0, v) != crate::partial::Cell::Fixed(c as Color + 1) {
                    return Err(Error::Soundness(format!(
                        "instance {} pivot row is wrong at vertex {}",
                        self.instances.id(index),
                        v + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Encodes `sample` random instances from `shard` without solving,
    /// checking coverage of each. With `out`, DIMACS files are written
    /// there; files already present are counted as resumed and not
    /// rewritten.
    pub fn dry_run(
        &self,
        shard: Range<usize>,
        sample_size: usize,
        seed: u64,
        out: Option<&Path>,
    ) -> Result<DryRunReport> {
        let shard = clip(shard, self.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked: Vec<usize> = sample(&mut rng, shard.len(), sample_size.min(shard.len()))
            .into_iter()
            .map(|i| shard.start + i)
            .collect();
        picked.sort_unstable();
        if let Some(dir) = out {
            fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
        }
        let mut r = DryRunReport {
            sampled: Vec::with_capacity(picked.len()),
            vars: 0,
            clauses: 0,
            written: 0,
            resumed: 0,
        };
        for &i in &picked {
            self.check_coverage(i)?;
            let id = self.instances.id(i);
            let (_, f) = self.instance(i)?;
            r.vars += f.num_vars();
            r.clauses += f.num_clauses();
            if let Some(dir) = out {
                let path = dir.join(format!("{id}.cnf"));
                if path.exists() {
                    r.resumed += 1;
                } else {
                    let tmp = dir.join(format!(".{id}.tmp"));
                    fs::write(&tmp, f.to_dimacs()).map_err(|e| Error::file(&tmp, e))?;
                    fs::rename(&tmp, &path).map_err(|e| Error::file(&path, e))?;
                    r.written += 1;
                }
            }
            r.sampled.push(id);
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DryRunReport {
    pub sampled: Vec<String>,
    pub vars: usize,
    pub clauses: usize,
    pub written: usize,
    pub resumed: usize,
}

impl DryRunReport {
    pub fn mean_vars(&self) -> f64 {
        self.vars as f64 / self.sampled.len().max(1) as f64
    }

    pub fn mean_clauses(&self) -> f64 {
        self.clauses as f64 / self.sampled.len().max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lib(dir: &Path) -> BlockLibrary {
        BlockLibrary::new(dir, BackendKind::Cadical, Limits::default())
    }

    #[test]
    fn library_caches_and_recolors() {
        let dir = tempfile::tempdir().unwrap();
        let l = lib(dir.path());
        let target: RamseyParams = "4,3,3:30".parse().unwrap();
        let b2 = l.neighborhood_blocks(&target, 2, 8).unwrap();
        assert_eq!(b2.len(), 3);
        assert!(l.archive_path(&"4,3:8".parse().unwrap()).exists());
        for a in &b2 {
            assert!((0..8).all(|i| a.row(i).iter().all(|&c| c != 2)));
        }
        let b3 = l.neighborhood_blocks(&target, 3, 8).unwrap();
        assert!(b3
            .iter()
            .all(|a| (0..8).all(|i| a.row(i).iter().all(|&c| c != 3))));
        assert_eq!(l.neighborhood_blocks(&target, 2, 8).unwrap(), b2);
    }

    #[test]
    fn toy_gluing_finds_and_eliminates() {
        // (3,3;5): the pentagon is <2,2> regular, so only that triple survives.
        let dir = tempfile::tempdir().unwrap();
        let l = lib(&dir.path().join("blocks"));
        let target: RamseyParams = "3,3:5".parse().unwrap();
        let mut cfg = BatchConfig::new(dir.path().join("ledger"));
        cfg.solutions = Some(dir.path().join("sol"));
        let triples = vec![DegreeTuple(vec![2, 2]), DegreeTuple(vec![1, 3])];
        let r = prove_regularity(&l, &target, &triples, &cfg).unwrap();
        assert_eq!(r[0].verdict(), GluingVerdict::Found);
        assert!(r[0].sat[0].1.is_some());
        assert_eq!(r[1].verdict(), GluingVerdict::Eliminated);
    }

    #[test]
    fn alignment_preserves_classes() {
        let dir = tempfile::tempdir().unwrap();
        let target: RamseyParams = "4,3,3:30".parse().unwrap();
        let raw = lib(dir.path()).neighborhood_blocks(&target, 2, 8).unwrap();
        let aligned = align_blocks(&raw).unwrap();
        let q = target.neighborhood(2, 8).unwrap();
        for (a, b) in raw.iter().zip(&aligned) {
            assert!(b.verify_ramsey(&q).unwrap().is_ok());
            assert!(crate::canonical::weakly_isomorphic_brute_force(a, b));
        }
    }
}
