use std::collections::BTreeSet;

use bkss_core::bracket::{all_bracketings, Gen, HallNormalizer, LinearCombo};
use bkss_core::correspondence::*;
use bkss_core::spectral::{d1_simplified, dsep_generators, e1_entry, separated_terms, top_generators};
use bkss_core::utg::{enumerate_marked, enumerate_trees, relation_vectors, GeneratorSet, GraphKey, RelationKind};
use bkss_core::zlinalg::{Lattice, SparseVec};
use num_bigint::BigInt;

#[test]
fn tree_round_trips_through_degree_five() {
    for d in 1..=5u32 {
        let labels: Vec<Gen> = (1..=d).map(|i| Gen::x(i, d + 1)).collect();
        for t in all_bracketings(&labels) {
            let s = psi_t(&t).unwrap();
            let (s2, back) = phi_t(&s.graph).unwrap();
            assert_eq!(back, t);
            assert_eq!(s.sign * s2, 1);
        }
        for g in enumerate_trees(d as usize) {
            let (s, t) = phi_t(&g).unwrap();
            let again = psi_t(&t).unwrap();
            assert_eq!(again.graph.canonical_key(), g.canonical_key());
            assert_eq!(again.sign, s);
        }
    }
}

#[test]
fn marked_round_trips_and_exhaustion() {
    for p in 4..=6 {
        let mut image: BTreeSet<GraphKey> = BTreeSet::new();
        for w in separated_terms(p).unwrap() {
            let g = psi_d(&w).unwrap();
            let (s, back) = phi_d(&g.graph).unwrap();
            assert_eq!(back.term, w.term);
            assert_eq!(s, g.sign, "{}", w.term);
            image.insert(g.graph.canonical_key());
            let (vk, vp) = g.graph.marks().unwrap();
            let _ = vk;
            image.insert(g.graph.flip(vp).canonical_key());
        }
        let all: BTreeSet<GraphKey> = enumerate_marked(p as usize - 1).iter().map(|g| g.canonical_key()).collect();
        assert_eq!(image, all, "p = {p}");
    }
}

#[test]
fn graded_jacobi_form_holds_in_hall_basis() {
    let gens = top_generators(5);
    let mut norm = HallNormalizer::new(gens.iter().copied());
    let labels: Vec<Gen> = gens.clone();
    for t in all_bracketings(&labels) {
        for path in bracket_paths(&t) {
            if let Some(tr) = jacobi_at(&t, &path) {
                let mut sum = LinearCombo::zero();
                for (c, term) in &tr {
                    sum.add_scaled(&norm.normalize(term).unwrap(), &BigInt::from(*c));
                }
                assert!(sum.is_zero(), "{t} at {path:?}: {sum}");
            }
        }
    }
}

fn in_span(lat: &Lattice, gens: &GeneratorSet, terms: &[(BigInt, bkss_core::utg::UniTriGraph)]) -> bool {
    let v: SparseVec = gens.combo_vector(terms).unwrap();
    lat.contains(&v).unwrap()
}

#[test]
fn psi_t_respects_relations() {
    for d in 2..=5u32 {
        let gens = GeneratorSet::new(enumerate_trees(d as usize));
        let as_only = Lattice::from_vectors(gens.len(), relation_vectors(&gens, RelationKind::As).unwrap()).unwrap();
        let mut full = as_only.clone();
        for v in relation_vectors(&gens, RelationKind::Ihx).unwrap() {
            full.insert(v).unwrap();
        }
        let labels: Vec<Gen> = (1..=d).map(|i| Gen::x(i, d + 1)).collect();
        for t in all_bracketings(&labels).into_iter().take(400) {
            let st = psi_t(&t).unwrap();
            for path in bracket_paths(&t) {
                let (s, u) = antisymmetry_at(&t, &path);
                let su = psi_t(&u).unwrap();
                let terms = vec![(BigInt::from(st.sign), st.graph.clone()), (BigInt::from(-s * su.sign), su.graph)];
                assert!(in_span(&as_only, &gens, &terms), "antisymmetry {t} at {path:?}");
                if let Some(tr) = jacobi_at(&t, &path) {
                    let terms: Vec<_> = tr
                        .iter()
                        .map(|(c, x)| {
                            let s = psi_t(x).unwrap();
                            (BigInt::from(c * s.sign), s.graph)
                        })
                        .collect();
                    assert!(in_span(&full, &gens, &terms), "jacobi {t} at {path:?}");
                }
            }
        }
    }
}

#[test]
fn psi_d_respects_relations() {
    for p in 4..=5 {
        let (gens, _) = marked_group(p).unwrap();
        let mut lat = Lattice::from_vectors(gens.len(), relation_vectors(&gens, RelationKind::As).unwrap()).unwrap();
        for v in relation_vectors(&gens, RelationKind::IhxSep).unwrap() {
            lat.insert(v).unwrap();
        }
        let (_, rels) = dsep_relations(p).unwrap();
        for r in rels {
            let terms: Vec<_> = r
                .iter()
                .map(|(c, w)| {
                    let s = psi_d(w).unwrap();
                    (BigInt::from(c * s.sign), s.graph)
                })
                .collect();
            assert!(in_span(&lat, &gens, &terms));
        }
    }
}

#[test]
fn marked_group_matches_algebra() {
    for p in 4..=5 {
        let (_, d) = marked_group(p).unwrap();
        let a = dsep_group(p).unwrap();
        assert_eq!(d.free_rank, a.free_rank, "p = {p}");
        assert_eq!(d.invariant_factors, a.invariant_factors, "p = {p}");
        assert_eq!(a.free_rank, e1_entry(p - 1, p).free_rank(), "p = {p}");
    }
}

#[test]
fn tree_ranks() {
    for p in 3..=6u32 {
        let g = tree_group(p).unwrap();
        assert_eq!(g.free_rank, (1..=(p as usize - 2)).product::<usize>());
        assert!(g.invariant_factors.is_empty());
        assert_eq!(g.free_rank, e1_entry(p, p).free_rank());
    }
}

#[test]
fn differentials_agree_across_sides() {
    for p in 4..=6 {
        let space = TreeSpace::new(p).unwrap();
        let lat = space.lattice().unwrap();
        for w in dsep_generators(p).unwrap() {
            let alg = psi_ext_combo(&d1_simplified(&w).unwrap().total()).unwrap();
            let g = psi_d(&w).unwrap();
            let mut terms = alg.clone();
            for (c, t) in d1_combinatorial(&g.graph).unwrap() {
                terms.push((-c * g.sign, t));
            }
            let v = space.vector(&terms).unwrap();
            assert!(lat.contains(&v).unwrap(), "p = {p}, w = {}", w.term);
        }
    }
}

#[test]
fn second_page() {
    for (p, rank, d1_rank) in [(4, 1, 1), (5, 2, 4), (6, 3, 21)] {
        let e = e2_diagonal(p).unwrap();
        let c = e.certificate.unwrap();
        assert!(c.equal && c.image_in_stu2 && c.stu2_in_image, "p = {p}: {c:?}");
        assert_eq!((e.group.free_rank, e.d1_rank), (rank, d1_rank), "p = {p}");
        assert!(e.group.invariant_factors.is_empty(), "p = {p}");
    }
}
