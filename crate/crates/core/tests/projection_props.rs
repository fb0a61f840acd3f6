mod common;

use proptest::prelude::*;
use qpkit::models::{graph_model, toric_model, DEFAULT_SAMPLE_BOUND};
use qpkit::projection::{kappa_at, kappa_oracle, kappa_sequence, qp_upper_search, trial_rng, SearchStatus};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gradient_kernel_matches_interpolation(a in common::toric_config(8), seed in any::<u64>(), size in 0usize..4) {
        let m = toric_model(&a).unwrap();
        let mut rng = trial_rng(seed, 0);
        let gamma: Vec<_> = (0..size.min(m.n)).map(|_| m.sample_point(&mut rng, DEFAULT_SAMPLE_BOUND)).collect();
        let fast = kappa_at(&m, &gamma).unwrap();
        let monomials = (m.n + 2 - gamma.len()) * (m.n + 1 - gamma.len()) / 2;
        match kappa_oracle(&m, &gamma, monomials + 10, &mut rng) {
            Ok(slow) => prop_assert_eq!(fast, slow),
            // coincident samples; nothing to compare
            Err(qpkit::Error::GammaNotGeneral { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn kappa_decreases_along_chains(a in common::toric_config(8), seed in any::<u64>()) {
        let m = toric_model(&a).unwrap();
        let seq = kappa_sequence(&m, 2, seed).unwrap();
        prop_assert_eq!(seq.values[0], m.dim_i2());
        prop_assert!(seq.values.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(seq.qp() <= m.codim());
        let gamma: Vec<_> = {
            let mut rng = trial_rng(seed, 7);
            (0..seq.qp()).map(|_| m.sample_point(&mut rng, DEFAULT_SAMPLE_BOUND)).collect()
        };
        // more points than qp cannot leave quadrics when the first qp already kill them
        if kappa_at(&m, &gamma).unwrap() == 0 {
            let mut more = gamma.clone();
            more.push(m.sample_point(&mut trial_rng(seed, 8), DEFAULT_SAMPLE_BOUND));
            prop_assert_eq!(kappa_at(&m, &more).unwrap(), 0);
        }
    }

    #[test]
    fn graph_witnesses_kill_all_quadrics(g in common::graph(6), seed in any::<u64>()) {
        let m = graph_model(&g).unwrap();
        let s = qp_upper_search(&m, m.n + 1, 1, seed).unwrap();
        prop_assert_eq!(s.status, SearchStatus::Found);
        prop_assert_eq!(kappa_at(&m, &s.witness).unwrap(), 0);
        prop_assert_eq!(s.k, Some(s.witness.len()));
        prop_assert!(s.certified_lower <= s.witness.len());
    }
}
