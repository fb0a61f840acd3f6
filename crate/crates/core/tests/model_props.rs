mod common;

use proptest::collection::vec;
use proptest::prelude::*;
use qpkit::models::{graph_model, pointset_model, toric_model, PointConfig, DEFAULT_SAMPLE_BOUND};
use qpkit::polytopes::{binomial, minkowski_count};
use qpkit::projection::trial_rng;
use qpkit::ratlin::rat;
use num_traits::Zero;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn toric_quadric_count(a in common::toric_config(10)) {
        let m = toric_model(&a).unwrap();
        prop_assert_eq!(m.n + 1, a.len());
        prop_assert_eq!(m.dim_i2(), binomial(m.n + 2, 2) - minkowski_count(&a));
        prop_assert_eq!(m.dim_x, a.affine_dim());
        prop_assert!(m.irreducible && m.nondegenerate);
    }

    #[test]
    fn toric_samples_lie_on_x(a in common::toric_config(10), seed in any::<u64>()) {
        let m = toric_model(&a).unwrap();
        let mut rng = trial_rng(seed, 0);
        for _ in 0..3 {
            let p = m.sample_point(&mut rng, DEFAULT_SAMPLE_BOUND);
            for b in 0..m.quadrics.dim() {
                prop_assert!(m.quadrics.evaluate(b, &p).is_zero());
            }
            prop_assert!(m.check_membership(&p).is_ok());
        }
    }

    #[test]
    fn graph_quadrics_are_non_edges(g in common::graph(9), seed in any::<u64>()) {
        let m = graph_model(&g).unwrap();
        let n = g.vertex_count();
        prop_assert_eq!(m.dim_i2(), n * (n - 1) / 2 - g.edge_count());
        let p = m.sample_point(&mut trial_rng(seed, 0), DEFAULT_SAMPLE_BOUND);
        for b in 0..m.quadrics.dim() {
            prop_assert!(m.quadrics.evaluate(b, &p).is_zero());
        }
    }

    #[test]
    fn adding_points_never_adds_quadrics(coords in vec(vec(-4i64..=4, 4), 2..10)) {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        let mut last = usize::MAX;
        for c in coords {
            let mut candidate = pts.clone();
            candidate.push(c);
            let Ok(cfg) = PointConfig::from_i64(3, &candidate) else { continue };
            pts = candidate;
            let m = pointset_model(&cfg).unwrap();
            prop_assert!(m.dim_i2() <= last);
            prop_assert!(m.dim_i2() + pts.len() >= binomial(5, 2));
            last = m.dim_i2();
            for p in cfg.points() {
                prop_assert!(m.check_membership(p).is_ok());
            }
        }
    }
}

#[test]
fn point_off_a_point_set_is_rejected() {
    let cfg = PointConfig::from_i64(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    let m = pointset_model(&cfg).unwrap();
    assert!(m.check_membership(&[rat(1), rat(1), rat(0)]).is_err());
    assert!(m.check_membership(&[rat(2), rat(0), rat(0)]).is_ok());
}
