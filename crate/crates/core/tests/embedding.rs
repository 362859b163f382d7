use std::collections::BTreeSet;

use ramsat_core::embed::cover_template;
use ramsat_core::pipeline::{
    align_blocks, compute_ramsey_set, gluing_instance, BlockClasses, BlockLibrary,
};
use ramsat_core::solver::{decode, solve_all};
use ramsat_core::{
    canonical_key, BackendKind, CanonicalKey, ColorMatrix, DegreeTuple, Limits, Permutation,
    RamseyParams,
};

fn library(dir: &std::path::Path, classes: BlockClasses) -> BlockLibrary {
    BlockLibrary::new(dir, BackendKind::Cadical, Limits::default()).with_classes(classes)
}

fn triples(n: u32) -> Vec<DegreeTuple> {
    (0..n)
        .flat_map(|d1| (0..n - d1).map(move |d2| DegreeTuple(vec![d1, d2, n - 1 - d1 - d2])))
        .collect()
}

/// Classes of `R(p)` with a member that has a vertex of degree `t`.
fn direct_classes(
    set: &[ColorMatrix],
    p: &RamseyParams,
    t: &DegreeTuple,
) -> BTreeSet<CanonicalKey> {
    let id = Permutation::identity(p.n());
    set.iter()
        .filter(|a| {
            Permutation::all(p.k()).iter().any(|sigma| {
                let b = a.apply_permutation(&id, sigma).unwrap();
                b.verify_ramsey(p).unwrap().is_ok()
                    && (0..p.n()).any(|v| b.degree_tuple(v).unwrap() == *t)
            })
        })
        .map(|a| canonical_key(a).unwrap())
        .collect()
}

/// Solutions over every gluing instance, checked against the blocks.
fn glued_classes(lib: &BlockLibrary, p: &RamseyParams, t: &DegreeTuple) -> BTreeSet<CanonicalKey> {
    let gi = lib.instances(p, t).unwrap();
    let mut out = BTreeSet::new();
    for i in 0..gi.len() {
        let template = gi.get(i).unwrap();
        let (vm, f) = gluing_instance(&gi, i, None).unwrap();
        for m in solve_all(
            &f,
            &vm.edge_vars(),
            &BackendKind::Cadical,
            &Limits::default(),
        )
        .unwrap()
        {
            let a = decode(&m, &vm).unwrap();
            assert!(a.verify_ramsey(p).unwrap().is_ok());
            assert_eq!(a.degree_tuple(0).unwrap(), *t);
            assert!(template.is_satisfied_by(&a));
            out.insert(canonical_key(&a).unwrap());
        }
    }
    out
}

#[test]
fn gluing_over_isomorphism_classes_is_exhaustive() {
    let dir = tempfile::tempdir().unwrap();
    let p: RamseyParams = "4,3,3:5".parse().unwrap();
    let all = compute_ramsey_set(&p, &BackendKind::Cadical, &Limits::default())
        .unwrap()
        .representatives();
    let strong = library(dir.path(), BlockClasses::Strong);
    let weak = library(dir.path(), BlockClasses::Weak);
    let mut weak_misses = 0;
    for t in triples(5) {
        let direct = direct_classes(&all, &p, &t);
        assert_eq!(glued_classes(&strong, &p, &t), direct, "{t}");
        let w = glued_classes(&weak, &p, &t);
        assert!(w.is_subset(&direct));
        weak_misses += direct.len() - w.len();
    }
    // Permuting colors inside one block is not a symmetry of the whole
    // coloring, so weak representatives alone can miss classes.
    assert!(weak_misses > 0);
}

#[test]
fn strong_blocks_cover_weak_ones() {
    let dir = tempfile::tempdir().unwrap();
    let target: RamseyParams = "4,3,3:30".parse().unwrap();
    for (c, d) in [(1, 6), (2, 6), (3, 5)] {
        let weak = library(dir.path(), BlockClasses::Weak)
            .neighborhood_blocks(&target, c, d)
            .unwrap();
        let strong = library(dir.path(), BlockClasses::Strong)
            .neighborhood_blocks(&target, c, d)
            .unwrap();
        let keys: BTreeSet<_> = strong.iter().map(|a| canonical_key(a).unwrap()).collect();
        assert!(strong.len() >= weak.len());
        assert_eq!(
            keys,
            weak.iter().map(|a| canonical_key(a).unwrap()).collect()
        );
    }
}

#[test]
fn cover_templates_admit_every_member() {
    let dir = tempfile::tempdir().unwrap();
    let lib = library(dir.path(), BlockClasses::Weak);
    let target: RamseyParams = "4,3,3:30".parse().unwrap();
    for (c, d) in [(2, 8), (3, 8), (2, 7), (3, 6)] {
        let blocks = align_blocks(&lib.neighborhood_blocks(&target, c, d).unwrap()).unwrap();
        let t = cover_template(&blocks, None).unwrap();
        for a in &blocks {
            assert!(t.is_satisfied_by(a), "color {c}, {d} vertices");
        }
    }
}
