mod common;

use gcomplex::calculus::differential;
use gcomplex::sign::permutation_sign;
use gcomplex::{canonical_form, ComplexSpec, DirectedGraph, Flavor, SignConvention};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph() -> impl Strategy<Value = DirectedGraph> {
    (1usize..=5).prop_flat_map(|nv| {
        prop::collection::vec((0..nv, 0..nv), 0..=7).prop_map(move |edges| DirectedGraph::new(nv, edges).unwrap())
    })
}

fn graph_and_perm() -> impl Strategy<Value = (DirectedGraph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let perm = Just((0..g.n_vertices()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), perm)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_matches_brute_force(g in graph(), n in 1i64..=4, directed in any::<bool>()) {
        if let Err(msg) = common::sign_consistent(&g, n, directed) {
            prop_assert!(false, "{}", msg);
        }
    }

    #[test]
    fn relabeling_changes_only_the_vertex_sign((g, perm) in graph_and_perm(), n in 1i64..=4) {
        let conv = SignConvention::new(n);
        let a = canonical_form(&g, conv, true);
        let b = canonical_form(&g.relabeled(&perm), conv, true);
        prop_assert_eq!(a.is_zero(), b.is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a.graph, &b.graph);
            let expected = if conv.vertices_odd() { permutation_sign(&perm) } else { 1 };
            prop_assert_eq!(a.sign * b.sign, expected);
        }
    }

    #[test]
    fn canonical_form_is_idempotent(g in graph(), n in 1i64..=4, directed in any::<bool>()) {
        let conv = SignConvention::new(n);
        let a = canonical_form(&g, conv, directed);
        if !a.is_zero() {
            let b = canonical_form(&a.graph, conv, directed);
            prop_assert_eq!(b.graph, a.graph);
            prop_assert_eq!(b.sign, 1);
        }
    }

    #[test]
    fn bracket_identities_hold(seed in any::<u64>()) {
        if let Err(msg) = common::bracket_identities(seed, 1) {
            prop_assert!(false, "{}", msg);
        }
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), v in 2usize..=4, extra in 0usize..=2, n in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for flavor in [Flavor::FcGC, Flavor::GCor, Flavor::FGC] {
            let x = common::random_cochain(&mut rng, ComplexSpec::new(flavor, n), v, v - 1 + extra, 3);
            prop_assert!(differential(&differential(&x)).is_zero(), "{}", x.to_text());
        }
    }
}

#[test]
fn enumeration_matches_oracle_through_five_vertices() {
    let checked = common::oracle_equivalence(5).unwrap();
    assert!(checked > 100, "only {checked} buckets checked");
}

#[test]
fn ranks_agree_across_fields() {
    let flavors = [(Flavor::FcGC, 1), (Flavor::FcGC, 2), (Flavor::GC, 2), (Flavor::GCor, 2), (Flavor::GCor, 3)];
    common::field_independence(&flavors, 6, 3).unwrap();
}

#[test]
fn euler_characteristics_agree() {
    for n in [2, 3] {
        common::euler_consistency(ComplexSpec::new(Flavor::GC, n), 4).unwrap();
    }
}

#[test]
fn seeded_sign_and_bracket_samples() {
    common::sign_consistency(7, 200).unwrap();
    common::bracket_identities(11, 4).unwrap();
}
