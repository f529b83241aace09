use degen_core::bipartite::{
    condition_4_1, condition_4_11, condition_4_1_certificate, condition_5_3,
    hall_violation_witness, has_perfect_matching, maximum_matching,
};
use degen_core::{BipartiteMask, IndexSet, Side};
use itertools::Itertools;
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = IndexSet> {
    (0u32..1 << n).map(move |bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect())
}

/// Perfect matching by trying every permutation.
fn brute_pm(g: &BipartiteMask) -> bool {
    let n = g.n();
    (0..n)
        .permutations(n)
        .any(|p| p.iter().enumerate().all(|(j, &l)| g.contains(j, l)))
        || n == 0
}

fn brute_cond41(g: &BipartiteMask) -> bool {
    brute_pm(g) || (0..g.n()).any(|j| brute_pm(&g.without_index(j)))
}

fn max_deficiency(g: &BipartiteMask) -> usize {
    subsets(g.n())
        .map(|a| {
            let gamma = g.neighborhood(&a, Side::Left).unwrap();
            a.len().saturating_sub(gamma.len())
        })
        .max()
        .unwrap()
}

fn all_masks(n: usize) -> impl Iterator<Item = BipartiteMask> {
    (0u64..1 << (n * n)).map(move |code| BipartiteMask::from_code(n, code))
}

#[test]
fn konig_defect_duality() {
    for n in 1..=4 {
        for g in all_masks(n) {
            assert_eq!(maximum_matching(&g).size(), n - max_deficiency(&g), "{g}");
        }
    }
}

#[test]
fn hall_equivalence() {
    for n in 1..=4 {
        for g in all_masks(n) {
            let violator =
                subsets(n).any(|a| g.neighborhood(&a, Side::Left).unwrap().len() < a.len());
            assert_eq!(has_perfect_matching(&g), !violator, "{g}");
            assert_eq!(
                hall_violation_witness(&g, false).unwrap().is_some(),
                violator
            );
        }
    }
}

#[test]
fn dense_masks_have_perfect_matchings() {
    for n in 1..=4 {
        for g in all_masks(n).filter(|g| g.edge_count() > n * n - n) {
            assert!(has_perfect_matching(&g), "{g}");
        }
    }
}

#[test]
fn condition_4_1_matches_brute_force() {
    for n in 1..=4 {
        for g in all_masks(n) {
            let expect = brute_cond41(&g);
            assert_eq!(condition_4_1(&g), expect, "{g}");
            match condition_4_1_certificate(&g) {
                None => assert!(!expect),
                Some(cert) => {
                    let mut used = vec![false; n];
                    for (j, l) in cert.assignment.iter().enumerate() {
                        match l {
                            None => assert_eq!(cert.removed, Some(j)),
                            Some(l) => {
                                assert!(g.contains(j, *l) && Some(*l) != cert.removed);
                                assert!(!std::mem::replace(&mut used[*l], true));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn threshold_counterexample_at_three() {
    // n² − 2n + 1 = 4 edges, all meeting row 2 or column 0
    let g = BipartiteMask::from_edges(3, &[(2, 0), (2, 1), (2, 2), (1, 0)]).unwrap();
    assert!(!condition_4_1(&g));
    assert!(condition_4_1(&g.with_edge(0, 2)));
    for g in all_masks(3).filter(|g| g.edge_count() >= 5) {
        assert!(condition_4_1(&g), "{g}");
    }
}

#[test]
fn structural_examples() {
    assert_eq!(
        condition_5_3(&BipartiteMask::complete_symmetric(5)).unwrap(),
        None
    );
    let mut pairs = vec![(0, 2), (1, 2), (3, 4), (3, 3), (4, 4), (2, 3), (2, 4)];
    let g = BipartiteMask::symmetric_from_pairs(5, &pairs).unwrap();
    let w = condition_5_3(&g).unwrap().unwrap();
    assert_eq!(
        (w.k, w.set, w.gamma),
        (2, IndexSet::from([0, 1]), IndexSet::from([2]))
    );
    // vertex 0 isolated, the rest a clique with loops
    pairs = (1..5).tuple_combinations().collect();
    pairs.extend((1..5).map(|j| (j, j)));
    let g = BipartiteMask::symmetric_from_pairs(5, &pairs).unwrap();
    assert_eq!(condition_5_3(&g).unwrap(), None);
    assert!(condition_5_3(&BipartiteMask::complete(3)).is_err());
}

fn mask_strategy(symmetric: bool) -> impl Strategy<Value = BipartiteMask> {
    (1usize..=6, 0.05f64..0.6, any::<u64>()).prop_map(move |(n, p, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = if symmetric {
            BipartiteMask::empty_symmetric(n)
        } else {
            BipartiteMask::empty(n)
        };
        for j in 0..n {
            for l in 0..n {
                if (!symmetric || l >= j) && rng.random_bool(p) {
                    if symmetric {
                        g.insert_symmetric(j, l);
                    } else {
                        g.insert(j, l);
                    }
                }
            }
        }
        g
    })
}

fn check_violator(g: &BipartiteMask) -> Result<(), TestCaseError> {
    let n = g.n();
    let Some(w) = hall_violation_witness(g, true).unwrap() else {
        prop_assert!(has_perfect_matching(g));
        return Ok(());
    };
    prop_assert!(!has_perfect_matching(g));
    prop_assert_eq!(w.gamma.len() + 1, w.set.len());
    prop_assert!(w.set.len() <= n.div_ceil(2));
    for &v in &w.gamma {
        let hits = w
            .set
            .iter()
            .filter(|&&u| match w.side {
                Side::Right => g.contains(v, u),
                _ => g.contains(u, v),
            })
            .count();
        prop_assert!(hits >= 2 || w.set.len() == 1);
    }
    if g.is_symmetric() {
        prop_assert!(w.set.is_disjoint(&g.tilde_neighborhood(&w.set).unwrap()));
    }
    // the dichotomy
    let isolated = g.isolated_count() > 0;
    let structural = if g.is_symmetric() {
        condition_5_3(g).unwrap().is_some()
    } else {
        condition_4_11(g).unwrap().is_some()
    };
    prop_assert!(isolated || structural);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn minimum_violators_asym(g in mask_strategy(false)) {
        check_violator(&g)?;
    }

    #[test]
    fn minimum_violators_sym(g in mask_strategy(true)) {
        check_violator(&g)?;
    }
}

proptest! {
    #[test]
    fn condition_4_1_is_monotone(g in mask_strategy(false), j in 0usize..6, l in 0usize..6) {
        let (j, l) = (j % g.n(), l % g.n());
        if condition_4_1(&g) {
            prop_assert!(condition_4_1(&g.with_edge(j, l)));
        }
        prop_assert_eq!(condition_4_1(&g), brute_cond41(&g));
    }

    #[test]
    fn matching_is_valid(g in mask_strategy(false)) {
        let m = maximum_matching(&g);
        let mut cols = IndexSet::new();
        for (j, l) in m.pairs() {
            prop_assert!(g.contains(j, l));
            prop_assert!(cols.insert(l));
        }
        prop_assert_eq!(m.is_perfect(), brute_pm(&g));
    }
}
