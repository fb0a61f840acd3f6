#![allow(dead_code)]

use proptest::collection::{btree_set, vec};
use proptest::prelude::*;
use qpkit::graphs::GraphSpec;
use qpkit::polytopes::LatticeConfig;

/// Configurations of 3 to `max_points` distinct points in dimension 1 to 3.
pub fn toric_config(max_points: usize) -> impl Strategy<Value = LatticeConfig> {
    (1usize..=3)
        .prop_flat_map(move |d| {
            let hi = if d == 1 { 9 } else { 3 };
            btree_set(vec(0i64..=hi, d), 3..=max_points)
        })
        .prop_map(|set| LatticeConfig::new(set.into_iter().collect()).unwrap())
}

/// Graphs on 2 to `max_vertices` vertices with arbitrary edge sets.
pub fn graph(max_vertices: usize) -> impl Strategy<Value = GraphSpec> {
    (2usize..=max_vertices).prop_flat_map(|n| {
        vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let edges: Vec<(usize, usize)> = pairs.into_iter().zip(mask).filter(|(_, m)| *m).map(|(e, _)| e).collect();
            GraphSpec::new(n, &edges).unwrap()
        })
    })
}

/// Random trees: vertex `i > 0` hangs off a parent below it.
pub fn tree(max_vertices: usize) -> impl Strategy<Value = GraphSpec> {
    (2usize..=max_vertices).prop_flat_map(|n| {
        vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            let edges: Vec<(usize, usize)> =
                parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            GraphSpec::new(n, &edges).unwrap()
        })
    })
}

/// A unimodular `d × d` matrix built from elementary row operations.
pub fn unimodular(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    vec((0..d, 0..d, -2i64..=2, any::<bool>()), 0..6).prop_map(move |ops| {
        let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, c, flip) in ops {
            if i != j {
                for k in 0..d {
                    m[i][k] += c * m[j][k];
                }
            } else if flip {
                m[i].iter_mut().for_each(|x| *x = -*x);
            }
        }
        m
    })
}

/// A permutation of `0..n`.
pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}
