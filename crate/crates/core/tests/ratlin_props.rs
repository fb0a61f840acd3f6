use num_traits::Zero;
use proptest::prelude::*;
use qpkit::ratlin::{rat, Rational, RationalMatrix};

fn matrix() -> impl Strategy<Value = RationalMatrix> {
    (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |v| {
            let entries = v
                .into_iter()
                .map(|(n, d)| Rational::new(n.into(), d.into()))
                .collect();
            RationalMatrix::new(r, c, entries)
        })
    })
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let (r, p) = m.rref();
        let (rr, pp) = r.rref();
        prop_assert_eq!(&r, &rr);
        prop_assert_eq!(p, pp);
    }

    #[test]
    fn rank_of_transpose(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        if !k.is_empty() {
            let basis = RationalMatrix::from_rows(m.cols(), k.clone());
            prop_assert_eq!(basis.rank(), k.len());
        }
    }

    #[test]
    fn scaling_rows_keeps_rref(m in matrix(), s in 1i64..5) {
        let scaled = RationalMatrix::new(
            m.rows(),
            m.cols(),
            m.entries().iter().map(|x| x * rat(-s)).collect(),
        );
        prop_assert_eq!(m.rref(), scaled.rref());
    }
}
