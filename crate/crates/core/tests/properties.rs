use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

use ramsat_core::canonical::weakly_isomorphic_brute_force;
use ramsat_core::degree::{enum_degree_matrices, is_graphical, DegreeSequence};
use ramsat_core::encoder::{
    encode_degree_matrix, encode_degree_range, encode_degree_row, encode_lex_symbreak,
    encode_ramsey, satisfies_lex_predicate,
};
use ramsat_core::solver::{decode, solve, solve_all, AllSolutions};
use ramsat_core::{
    alpha, canonical_key, degree_matrix, lex_sort, reduce_mod_weak_iso, BackendKind, CnfFormula,
    ColorMatrix, DegreeMatrix, DegreeTuple, Limits, Lit, Model, Permutation, RamseyParams,
    SolveStatus,
};

fn params(s: &str) -> RamseyParams {
    s.parse().unwrap()
}

fn coloring(n: usize, k: u8, cells: &[u8]) -> ColorMatrix {
    let mut it = cells.iter();
    ColorMatrix::from_fn(n, k, |_, _| it.next().map_or(1, |&c| c % k + 1))
}

fn arb_coloring(max_n: usize, k: u8) -> impl Strategy<Value = ColorMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(any::<u8>(), n * (n - 1) / 2)
            .prop_map(move |cells| coloring(n, k, &cells))
    })
}

fn arb_perm(len: usize) -> impl Strategy<Value = Permutation> {
    Just((0..len).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn arb_coloring_and_perms(
    max_n: usize,
    k: u8,
) -> impl Strategy<Value = (ColorMatrix, Permutation, Permutation)> {
    arb_coloring(max_n, k).prop_flat_map(move |a| {
        let n = a.n();
        (Just(a), arb_perm(n), arb_perm(k as usize))
    })
}

/// Every complete `k`-coloring of `K_n`.
fn all_colorings(n: usize, k: u8) -> Vec<ColorMatrix> {
    let m = n * (n - 1) / 2;
    (0..(k as usize).pow(m as u32))
        .map(|mut code| {
            ColorMatrix::from_fn(n, k, |_, _| {
                let c = (code % k as usize) as u8 + 1;
                code /= k as usize;
                c
            })
        })
        .collect()
}

/// Checks every vertex subset; no pruning.
fn brute_force_ramsey(a: &ColorMatrix, p: &RamseyParams) -> bool {
    (1..=p.k() as u8).all(|c| {
        (0..a.n()).combinations(p.r(c)).all(|s| {
            s.iter()
                .tuple_combinations()
                .any(|(&i, &j)| a.get(i, j) != c)
        })
    })
}

fn truth_table(f: &CnfFormula, proj: &[Lit]) -> BTreeSet<Vec<bool>> {
    let n = f.num_vars();
    (0..1u32 << n)
        .filter_map(|bits| {
            let m = Model::from_lits(
                n,
                (1..=n as Lit).map(|v| if bits >> (v - 1) & 1 == 1 { v } else { -v }),
            );
            f.first_falsified(&m)
                .is_none()
                .then(|| proj.iter().map(|&v| m.value(v)).collect())
        })
        .collect()
}

fn arb_formula() -> impl Strategy<Value = CnfFormula> {
    (1usize..=12).prop_flat_map(|n| {
        let lit = (1..=n as Lit, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        proptest::collection::vec(proptest::collection::vec(lit, 1..=3), 0..=3 * n).prop_map(
            move |clauses| {
                let mut f = CnfFormula::new(n);
                for c in clauses {
                    f.add_clause(c);
                }
                f
            },
        )
    })
}

const BACKENDS: [BackendKind; 2] = [BackendKind::Cadical, BackendKind::Batsat];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_tuples_sum_to_n_minus_one(a in arb_coloring(9, 3)) {
        for v in 0..a.n() {
            prop_assert_eq!(a.degree_tuple(v).unwrap().total() as usize, a.n() - 1);
        }
    }

    #[test]
    fn ramsey_property_is_closed_under_weak_isomorphism(
        (a, pi, sigma) in arb_coloring_and_perms(8, 3),
        sizes in proptest::collection::vec(2usize..=4, 3),
    ) {
        let p = RamseyParams::new(sizes, a.n()).unwrap();
        let b = a.apply_permutation(&pi, &sigma).unwrap();
        let q = p.permute_colors(&sigma).unwrap();
        prop_assert_eq!(a.verify_ramsey(&p).unwrap().is_ok(), b.verify_ramsey(&q).unwrap().is_ok());
    }

    #[test]
    fn keys_and_abstraction_are_class_invariants((a, pi, sigma) in arb_coloring_and_perms(10, 3)) {
        let b = a.apply_permutation(&pi, &sigma).unwrap();
        prop_assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        prop_assert_eq!(alpha(&a).unwrap(), alpha(&b).unwrap());
    }

    #[test]
    fn lex_sort_ignores_row_order((a, pi) in arb_coloring(9, 3).prop_flat_map(|a| { let n = a.n(); (Just(a), arb_perm(n)) })) {
        let m = degree_matrix(&a).unwrap();
        let shuffled = DegreeMatrix::new(3, (0..m.n()).map(|i| m.row(pi.apply(i)).to_vec()).collect()).unwrap();
        let s = lex_sort(&m);
        prop_assert_eq!(lex_sort(&shuffled), s.clone());
        prop_assert_eq!(lex_sort(&s), s);
    }

    #[test]
    fn all_sat_matches_truth_table(f in arb_formula(), mask in any::<u16>()) {
        let proj: Vec<Lit> = (1..=f.num_vars() as Lit).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let expected = truth_table(&f, &proj);
        for b in &BACKENDS {
            let got: BTreeSet<Vec<bool>> = solve_all(&f, &proj, b, &Limits::default())
                .unwrap()
                .iter()
                .map(|m| proj.iter().map(|&v| m.value(v)).collect())
                .collect();
            prop_assert_eq!(&got, &expected);
        }
    }

    #[test]
    fn sat_models_satisfy_the_formula(f in arb_formula()) {
        let sat = !truth_table(&f, &[]).is_empty();
        for b in &BACKENDS {
            let r = solve(&f, b, &Limits::default()).unwrap();
            prop_assert_eq!(r.status == SolveStatus::Sat, sat);
            if let Some(m) = &r.model {
                prop_assert!(f.first_falsified(m).is_none());
            }
        }
    }

    #[test]
    fn degree_row_counts_are_exact(n in 2usize..=8, v in 0usize..8, split in any::<(u8, u8)>()) {
        let v = v % n;
        let d1 = split.0 as u32 % n as u32;
        let d2 = split.1 as u32 % (n as u32 - d1);
        let d = DegreeTuple(vec![d1, d2, n as u32 - 1 - d1 - d2]);
        let (vm, mut f) = encode_ramsey(&RamseyParams::new(vec![n + 1; 3], n).unwrap());
        encode_degree_row(&vm, &mut f, v, &d).unwrap();
        let mut it = AllSolutions::new(&f, &vm.edge_vars(), &BackendKind::Cadical, &Limits::default()).unwrap();
        for _ in 0..20 {
            let Some(m) = it.next_model().unwrap() else { break };
            prop_assert_eq!(decode(&m, &vm).unwrap().degree_tuple(v).unwrap(), d.clone());
        }
    }

    #[test]
    fn degree_range_matches_counting(n in 2usize..=5, c in 1usize..=2, lo in 0usize..6, width in 0usize..4) {
        let hi = lo + width;
        let (vm, mut f) = encode_ramsey(&RamseyParams::new(vec![n + 1; 2], n).unwrap());
        encode_degree_range(&vm, &mut f, 0, c, lo, hi).unwrap();
        let models = solve_all(&f, &vm.edge_vars(), &BackendKind::Cadical, &Limits::default()).unwrap();
        let expected = all_colorings(n, 2)
            .into_iter()
            .filter(|a| (lo..=hi).contains(&(a.degree_tuple(0).unwrap().0[c - 1] as usize)))
            .count();
        prop_assert_eq!(models.len(), expected);
    }
}

#[test]
fn verify_ramsey_matches_brute_force() {
    for (n, k, sets) in [
        (4, 3, vec!["3,3,3", "2,3,3", "3,2,4"]),
        (5, 2, vec!["3,3", "4,3", "2,5", "3,4"]),
    ] {
        let colorings = all_colorings(n, k);
        for s in sets {
            let p = params(&format!("{s}:{n}"));
            for a in &colorings {
                assert_eq!(
                    a.verify_ramsey(&p).unwrap().is_ok(),
                    brute_force_ramsey(a, &p),
                    "{p}\n{a}"
                );
            }
        }
    }
}

#[test]
fn key_equality_is_weak_isomorphism_on_k4() {
    let all = all_colorings(4, 2);
    assert_eq!(all.len(), 64);
    let keys: Vec<_> = all.iter().map(|a| canonical_key(a).unwrap()).collect();
    for i in 0..all.len() {
        for j in i..all.len() {
            assert_eq!(
                keys[i] == keys[j],
                weakly_isomorphic_brute_force(&all[i], &all[j])
            );
        }
    }
}

#[test]
fn decoded_models_are_ramsey_colorings() {
    for s in ["3,3:4", "3,3:5", "4,3:5", "4,3:6", "4,3:7", "4,3:8"] {
        let p = params(s);
        let (vm, f) = encode_ramsey(&p);
        let mut it = AllSolutions::new(
            &f,
            &vm.edge_vars(),
            &BackendKind::Cadical,
            &Limits::default(),
        )
        .unwrap();
        for _ in 0..300 {
            let Some(m) = it.next_model().unwrap() else {
                break;
            };
            for (i, j) in (0..p.n()).tuple_combinations() {
                assert_eq!((1..=p.k()).filter(|&c| m.value(vm.var(i, j, c))).count(), 1);
            }
            assert!(decode(&m, &vm).unwrap().verify_ramsey(&p).unwrap().is_ok());
        }
    }
    let p = params("3,3,3:13");
    let (vm, f) = encode_ramsey(&p);
    let r = solve(&f, &BackendKind::Cadical, &Limits::default()).unwrap();
    assert!(decode(r.model.as_ref().unwrap(), &vm)
        .unwrap()
        .verify_ramsey(&p)
        .unwrap()
        .is_ok());
}

#[test]
fn labeled_pentagon_count() {
    let (vm, f) = encode_ramsey(&params("3,3:5"));
    assert_eq!(
        solve_all(
            &f,
            &vm.edge_vars(),
            &BackendKind::Cadical,
            &Limits::default()
        )
        .unwrap()
        .len(),
        12
    );
}

#[test]
fn symmetry_break_preserves_classes() {
    for (s, classes) in [("4,3:5", 9), ("4,3:6", 15)] {
        let p = params(s);
        let reduce = |lex: bool| {
            let (vm, mut f) = encode_ramsey(&p);
            if lex {
                encode_lex_symbreak(&vm, &mut f);
            }
            let models = solve_all(
                &f,
                &vm.edge_vars(),
                &BackendKind::Cadical,
                &Limits::default(),
            )
            .unwrap();
            let set = reduce_mod_weak_iso(models.iter().map(|m| decode(m, &vm).unwrap())).unwrap();
            set.keys().cloned().collect::<Vec<_>>()
        };
        let plain = reduce(false);
        assert_eq!(plain.len(), classes);
        assert_eq!(plain, reduce(true));
    }
}

/// Some relabeling meets the full row-order predicate, and some relabeling
/// whose degree matrix is exactly `alpha` meets the partitioned one.
#[test]
fn symmetry_break_is_complete_up_to_six_vertices() {
    let mut cases: Vec<ColorMatrix> = (2..=5).flat_map(|n| all_colorings(n, 2)).collect();
    cases.extend(all_colorings(4, 3));
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for n in [5, 6] {
        for _ in 0..60 {
            cases.push(arb_coloring(n, 3).new_tree(&mut runner).unwrap().current());
        }
    }
    cases.retain(|a| a.n() >= 2);
    let id = |k: u8| Permutation::identity(k as usize);
    for a in &cases {
        let m = alpha(a).unwrap();
        let perms = Permutation::all(a.n());
        let full = perms
            .iter()
            .any(|pi| satisfies_lex_predicate(&a.apply_permutation(pi, &id(a.k())).unwrap(), None));
        let partitioned = Permutation::all(a.k() as usize).iter().any(|sigma| {
            perms.iter().any(|pi| {
                let b = a.apply_permutation(pi, sigma).unwrap();
                degree_matrix(&b).unwrap() == m && satisfies_lex_predicate(&b, Some(&m))
            })
        });
        assert!(full && partitioned, "{a}");
    }
}

/// Labeled solutions split over degree matrices with rows in vertex order.
#[test]
fn solutions_are_the_disjoint_union_over_degree_matrices() {
    let p = params("3,3:5");
    let rows: Vec<Vec<u32>> = (0..=4).map(|d| vec![d, 4 - d]).collect();
    let mut total = 0;
    let mut seen = BTreeMap::new();
    for choice in (0..5).map(|_| rows.iter()).multi_cartesian_product() {
        let m = DegreeMatrix::new(2, choice.into_iter().cloned().collect()).unwrap();
        let graphical = (0..2).all(|c| {
            let mut col = m.column(c);
            col.sort_unstable_by(|x, y| y.cmp(x));
            is_graphical(&DegreeSequence::new(col).unwrap())
        });
        if !graphical {
            continue;
        }
        let (vm, mut f) = encode_ramsey(&p);
        encode_degree_matrix(&vm, &mut f, &m).unwrap();
        for model in solve_all(
            &f,
            &vm.edge_vars(),
            &BackendKind::Cadical,
            &Limits::default(),
        )
        .unwrap()
        {
            let a = decode(&model, &vm).unwrap();
            assert_eq!(degree_matrix(&a).unwrap(), m);
            assert!(seen.insert(a.upper_triangle(), ()).is_none());
            total += 1;
        }
    }
    assert_eq!(total, 12);
}

#[test]
fn enumerated_matrices_are_sorted_with_graphical_columns() {
    let left: Vec<DegreeSequence> = ramsat_core::degree::enum_degree_sequences(7, 1, 4);
    for m in enum_degree_matrices(7, 3, &left, None) {
        assert_eq!(lex_sort(&m), m);
        for c in 0..3 {
            let mut col = m.column(c);
            col.sort_unstable_by(|x, y| y.cmp(x));
            assert!(is_graphical(&DegreeSequence::new(col).unwrap()));
        }
    }
}
