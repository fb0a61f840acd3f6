mod common;

use proptest::prelude::*;
use qpkit::graphs::{is_chordal, min_induced_cycle};
use qpkit::koszul::{koszul_differential, koszul_dim, linear_strand, GlIndex, DEFAULT_BUDGET};
use qpkit::models::{graph_model, toric_model};
use qpkit::polytopes::LatticeConfig;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn toric_differentials_compose_to_zero(a in common::toric_config(6)) {
        let m = toric_model(&a).unwrap();
        for q in 1..=2 {
            for p in 1..=m.n.min(4) {
                let outer = koszul_differential(&m, p, q).unwrap();
                let inner = koszul_differential(&m, p + 1, q - 1).unwrap();
                prop_assert!(outer.mul(&inner).is_zero());
            }
        }
    }

    #[test]
    fn graph_differentials_compose_to_zero(g in common::graph(6)) {
        let m = graph_model(&g).unwrap();
        for q in 1..=2 {
            for p in 1..=m.n {
                let outer = koszul_differential(&m, p, q).unwrap();
                let inner = koszul_differential(&m, p + 1, q - 1).unwrap();
                prop_assert!(outer.mul(&inner).is_zero());
            }
        }
    }

    #[test]
    fn betti_numbers_ignore_point_order((a, perm) in common::toric_config(7).prop_flat_map(|a| {
        let n = a.len();
        (Just(a), common::permutation(n))
    })) {
        let shuffled = LatticeConfig::new(perm.iter().map(|&i| a.points()[i].clone()).collect()).unwrap();
        let (m1, m2) = (toric_model(&a).unwrap(), toric_model(&shuffled).unwrap());
        for p in 1..=m1.n.min(4) {
            prop_assert_eq!(koszul_dim(&m1, p, 1).unwrap(), koszul_dim(&m2, p, 1).unwrap());
            prop_assert_eq!(koszul_dim(&m1, p, 2).unwrap(), koszul_dim(&m2, p, 2).unwrap());
        }
    }

    #[test]
    fn graph_strands_follow_holes((g, perm) in common::graph(7).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), common::permutation(n))
    })) {
        let m = graph_model(&g).unwrap();
        let s = linear_strand(&m, m.n, DEFAULT_BUDGET).unwrap();
        prop_assert!(!s.truncated);
        match min_induced_cycle(&g) {
            None => {
                prop_assert!(is_chordal(&g));
                prop_assert_eq!(s.gl_index, GlIndex::Infinite);
            }
            Some(len) => prop_assert_eq!(s.gl_index, GlIndex::Finite(len - 3)),
        }
        if let GlIndex::Finite(gl) = s.gl_index {
            prop_assert!(gl <= s.ell);
        }
        prop_assert!(s.ell <= m.n);
        let relabelled = linear_strand(&graph_model(&g.relabel(&perm)).unwrap(), m.n, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(s, relabelled);
    }
}
