use bkss_core::bracket::{swap_sign, BracketError, Gen, HallNormalizer, LinearCombo, Term};
use bkss_core::correspondence::{antisymmetry_at, bracket_paths, jacobi_at, phi_t, psi_t};
use bkss_core::utg::UniTriGraph;
use bkss_core::zlinalg::{
    cokernel_of_relations, smith_normal_form, sparse_from_dense, subgroup_equal, IntMatrix, Lattice, SparseVec,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max, 0..=max).prop_flat_map(|(cols, rows)| {
        (Just(cols), prop::collection::vec(prop::collection::vec(-12i64..=12, cols), rows))
    })
}

fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Bracket the leaves in their given order, splitting at the `cuts` positions.
fn bracket(leaves: &[Gen], cuts: &[usize]) -> Term {
    if leaves.len() == 1 {
        return Term::Leaf(leaves[0]);
    }
    let cut = 1 + cuts[0] % (leaves.len() - 1);
    let rest = &cuts[1..];
    let (a, b) = leaves.split_at(cut);
    let (ca, cb) = rest.split_at(rest.len().min(a.len().saturating_sub(1)));
    Term::br(bracket(a, ca), bracket(b, cb))
}

/// A bracketing of `x(1,d+1), ..., x(d,d+1)` in some leaf order.
fn labelled_tree(max_degree: u32) -> impl Strategy<Value = Term> {
    (1..=max_degree).prop_flat_map(|d| {
        let leaves: Vec<Gen> = (1..=d).map(|i| Gen::x(i, d + 1)).collect();
        (Just(leaves).prop_shuffle(), prop::collection::vec(any::<usize>(), d as usize))
            .prop_map(|(l, cuts)| bracket(&l, &cuts))
    })
}

/// A bracket of weight at most `max` over three generators, repeats allowed.
fn word(max: usize) -> impl Strategy<Value = Term> {
    let alphabet = [Gen::x(1, 4), Gen::x(2, 4), Gen::x(3, 4)];
    (prop::collection::vec(0usize..3, 2..=max), prop::collection::vec(any::<usize>(), max)).prop_map(
        move |(idx, cuts)| {
            let leaves: Vec<Gen> = idx.iter().map(|&i| alphabet[i]).collect();
            bracket(&leaves, &cuts)
        },
    )
}

/// `None` exactly when the term involves a square outside the Hall span.
fn normalized(norm: &mut HallNormalizer, t: &Term) -> Option<LinearCombo> {
    match norm.normalize(t) {
        Ok(v) => Some(v),
        Err(BracketError::NotInHallSpan(_)) => None,
        Err(e) => panic!("{t}: {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization((cols, rows) in matrix(5)) {
        let m = IntMatrix::from_rows(cols, &rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert!(s.d.is_diagonal());
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
                prop_assert!(!w[0].is_negative());
            }
        }
    }

    #[test]
    fn cokernel_rank_matches_lattice_rank((cols, rows) in matrix(5)) {
        let rels: Vec<SparseVec> = big(&rows).iter().map(|r| sparse_from_dense(r)).collect();
        let g = cokernel_of_relations(cols, rels.clone());
        let lat = Lattice::from_vectors(cols, rels).unwrap();
        prop_assert_eq!(g.free_rank, cols - lat.rank());
        prop_assert_eq!(g.relation_rank, lat.rank());
    }

    #[test]
    fn subgroups_survive_row_operations(
        (cols, rows) in matrix(4),
        i in any::<usize>(),
        j in any::<usize>(),
        k in -5i64..=5,
    ) {
        prop_assume!(rows.len() >= 2);
        let a = big(&rows);
        let mut b = a.clone();
        let (i, j) = (i % b.len(), j % b.len());
        prop_assume!(i != j);
        let add: Vec<BigInt> = b[i].iter().map(|x| x * k).collect();
        for (x, y) in b[j].iter_mut().zip(add) {
            *x += y;
        }
        b.swap(0, 1);
        for x in b[0].iter_mut() {
            *x = -x.clone();
        }
        prop_assert!(subgroup_equal(&a, &b).unwrap());
        let _ = cols;
    }

    #[test]
    fn lattice_contains_integer_combinations(
        (cols, rows) in matrix(4),
        coeffs in prop::collection::vec(-6i64..=6, 5),
    ) {
        let rows = big(&rows);
        let lat = Lattice::from_vectors(cols, rows.iter().map(|r| sparse_from_dense(r))).unwrap();
        let mut v = vec![BigInt::zero(); cols];
        for (r, c) in rows.iter().zip(&coeffs) {
            for (x, y) in v.iter_mut().zip(r) {
                *x += y * c;
            }
        }
        prop_assert!(lat.contains(&sparse_from_dense(&v)).unwrap());
    }

    #[test]
    fn swap_sign_is_symmetric(a in 1usize..20, b in 1usize..20) {
        prop_assert_eq!(swap_sign(a, b), swap_sign(b, a));
        prop_assert_eq!(swap_sign(a, b).abs(), 1);
    }

    #[test]
    fn antisymmetry_is_an_involution(t in word(6), pick in any::<usize>()) {
        let paths = bracket_paths(&t);
        let path = &paths[pick % paths.len()];
        let (s1, u) = antisymmetry_at(&t, path);
        let (s2, back) = antisymmetry_at(&u, path);
        prop_assert_eq!(back, t);
        prop_assert_eq!(s1 * s2, 1);
    }

    #[test]
    fn normalization_is_idempotent_and_respects_relations(t in word(6), pick in any::<usize>()) {
        let mut norm = HallNormalizer::new([Gen::x(1, 4), Gen::x(2, 4), Gen::x(3, 4)]);
        let paths = bracket_paths(&t);
        let path = &paths[pick % paths.len()];
        let (s, u) = antisymmetry_at(&t, path);
        let n = normalized(&mut norm, &t);
        prop_assert_eq!(normalized(&mut norm, &u).map(|x| x.scale(s)), n.clone());
        let Some(n) = n else { return Ok(()) };
        prop_assert_eq!(norm.normalize_combo(&n).unwrap(), n);
        if let Some(triple) = jacobi_at(&t, path) {
            let mut sum = LinearCombo::zero();
            for (c, x) in &triple {
                match normalized(&mut norm, x) {
                    Some(v) => sum.add_scaled(&v, &BigInt::from(*c)),
                    None => return Ok(()),
                }
            }
            prop_assert!(sum.is_zero(), "{}", sum);
        }
    }

    #[test]
    fn tree_bijection_round_trips(t in labelled_tree(7)) {
        let s = psi_t(&t).unwrap();
        let (s2, back) = phi_t(&s.graph).unwrap();
        prop_assert_eq!(back, t);
        prop_assert_eq!(s.sign * s2, 1);
    }

    #[test]
    fn canonical_key_ignores_node_numbering(t in labelled_tree(7)) {
        prop_assume!(t.weight() >= 2);
        let g = psi_t(&t).unwrap().graph;
        for root in g.labels() {
            let planar = g.to_planar(root).unwrap();
            let h = UniTriGraph::from_planar(root, &planar);
            prop_assert_eq!(h.canonical_key(), g.canonical_key());
        }
        let h = g.flip(g.trivalent_nodes().next().unwrap());
        prop_assert_ne!(h.canonical_key(), g.canonical_key());
    }
}
