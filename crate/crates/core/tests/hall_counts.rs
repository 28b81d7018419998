mod common;

use std::collections::BTreeMap;

use bkss_core::bracket::{enumerate_basic_products, Gen, MultidegreeFilter};
use bkss_core::spectral::{superdiagonal_free_basis, top_generators};
use common::witt;

#[test]
fn oracle_hand_values() {
    assert_eq!(witt(&[2]), 0);
    assert_eq!(witt(&[1, 1]), 1);
    assert_eq!(witt(&[3]), 0);
    assert_eq!(witt(&[2, 2]), 1);
    assert_eq!(witt(&[2, 1]), 1);
    assert_eq!(witt(&[1, 1, 1]), 2);
}

#[test]
fn basic_products_match_witt() {
    let gens: Vec<Gen> = (1..=3).map(|i| Gen::x(i, 4)).collect();
    let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for t in enumerate_basic_products(&gens, 7, &MultidegreeFilter::Any) {
        *counts.entry(t.multidegree_over(&gens)).or_default() += 1;
    }
    for a in 0..=7u32 {
        for b in 0..=7 - a {
            for c in 0..=7 - a - b {
                let alpha = vec![a, b, c];
                let got = counts.get(&alpha).copied().unwrap_or(0);
                assert_eq!(got, witt(&alpha), "multidegree {alpha:?}");
            }
        }
    }
}

#[test]
fn superdiagonal_free_part_by_multidegree() {
    for p in 4..=6u32 {
        let gens = top_generators(p - 1);
        let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for t in superdiagonal_free_basis(p) {
            *counts.entry(t.multidegree_over(&gens)).or_default() += 1;
        }
        let mut expected = BTreeMap::new();
        for r in 0..gens.len() {
            let mut alpha = vec![1u32; gens.len()];
            alpha[r] = 2;
            expected.insert(alpha.clone(), witt(&alpha));
        }
        assert_eq!(counts, expected, "p = {p}");
    }
}
