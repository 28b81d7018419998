use bkss_core::bracket::LinearCombo;
use bkss_core::spectral::{d1_bruteforce, d1_simplified, dsep_generators, e1_entry};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn oracle_agrees_through_p6() {
    for p in 4..=6 {
        let gens = dsep_generators(p).unwrap();
        for w in &gens {
            let brute = d1_bruteforce(&LinearCombo::term(w.term.clone()), p).unwrap();
            assert_eq!(brute, d1_simplified(w).unwrap().total(), "p = {p}, w = {}", w.term);
        }
    }
}

#[test]
fn dsep_counts() {
    assert_eq!(dsep_generators(4).unwrap().len(), 2);
    assert_eq!(dsep_generators(6).unwrap().len(), 96);
}

#[test]
fn diagonal_ranks() {
    for p in 2..=7u32 {
        assert_eq!(e1_entry(p, p).free_rank(), factorial(p as usize - 2));
    }
    for p in 4..=7u32 {
        assert_eq!(e1_entry(p - 1, p).torsion.len(), factorial(p as usize - 3));
    }
}
