#![allow(dead_code)]

use proptest::prelude::*;
use schemex_core::FamilySpec;

/// Small P-polynomial families, relations in natural distance order.
pub fn metric_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (3usize..16).prop_map(|n| FamilySpec::Cycle { n }),
        (1usize..4, 2usize..5).prop_map(|(n, q)| FamilySpec::Hamming { n, q }),
        (4usize..9).prop_flat_map(|v| (Just(v), 1..=(v / 2).min(3))).prop_map(|(v, k)| FamilySpec::Johnson { v, k }),
        (2usize..9).prop_map(|n| FamilySpec::Complete { n }),
    ]
}

/// Any small family, including ones that are not P-polynomial.
pub fn any_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        4 => metric_family(),
        1 => (2usize..5, 2usize..5).prop_map(|(cliques, size)| FamilySpec::DisjointCliques { cliques, size }),
        1 => Just(FamilySpec::Cyclotomic13),
        1 => Just(FamilySpec::Petersen),
    ]
}

/// A permutation of `0..=d` fixing the first `fixed` indices.
pub fn permutation_fixing(d: usize, fixed: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((fixed..=d).collect::<Vec<_>>()).prop_shuffle().prop_map(move |tail| (0..fixed).chain(tail).collect())
}
