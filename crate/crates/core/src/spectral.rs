//! First page of the homotopy spectral sequence along the diagonal and the
//! differential `d1: E1(p-1,p) -> E1(p,p)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bracket::{
    all_bracketings, enumerate_basic_products, sort_children, sorted_bracketings, swap_sign, BracketError, Gen,
    LinearCombo, MultidegreeFilter, Term,
};
use crate::config_space::{KnownGroup, SphereGroup};
use crate::cosimplicial::{push_combo, CosimplicialError, Direction};
use crate::zlinalg::{cokernel_of_relations, GroupPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("{0} is not a separated generator for p = {1}: {2}")]
    NotSeparated(String, u32, &'static str),
    #[error("malformed multidegree for p = {1}: {0}")]
    Multidegree(String, u32),
    #[error("p = {0} is outside the supported range ({1})")]
    OutOfRange(u32, &'static str),
    #[error(transparent)]
    Cosimplicial(#[from] CosimplicialError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// `E1(p,q)` as a direct sum of homotopy groups of spheres indexed by basic
/// products. Summands are split by whether the sphere group evaluates to
/// `Z`, `Z/2`, or stays formal.
#[derive(Clone, Debug)]
pub struct E1Entry {
    pub p: u32,
    pub q: u32,
    pub basis: Vec<Term>,
    pub torsion: Vec<(Term, SphereGroup)>,
    pub formal: Vec<(Term, SphereGroup)>,
    pub group: GroupPresentation,
}

impl E1Entry {
    fn assemble(p: u32, q: u32, summands: Vec<(Term, SphereGroup)>) -> E1Entry {
        let mut basis = Vec::new();
        let mut torsion = Vec::new();
        let mut formal = Vec::new();
        for (t, g) in summands {
            match g.evaluate() {
                KnownGroup::Z => basis.push(t),
                KnownGroup::Z2 => torsion.push((t, g)),
                KnownGroup::Formal => formal.push((t, g)),
            }
        }
        let n = basis.len() + torsion.len();
        let relations = (0..torsion.len()).map(|i| vec![(basis.len() + i, BigInt::from(2))]).collect();
        let group = cokernel_of_relations(n, relations);
        E1Entry { p, q, basis, torsion, formal, group }
    }

    pub fn free_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty() && self.torsion.is_empty() && self.formal.is_empty()
    }
}

/// Generators `x(i,p)`, `1 <= i < p`.
pub fn top_generators(p: u32) -> Vec<Gen> {
    (1..p).map(|i| Gen::x(i, p)).collect()
}

/// `E1(p,q)` for `0 <= p`. Entries with `q < p` are zero.
pub fn e1_entry(p: u32, q: u32) -> E1Entry {
    if q < p || p == 0 || q < 2 {
        return E1Entry::assemble(p, q, Vec::new());
    }
    if p == 1 {
        let s = SphereGroup { q: q as usize, m: 2 };
        return E1Entry::assemble(p, q, vec![(Term::Leaf(Gen::y(1)), s)]);
    }
    let gens = top_generators(p);
    let products = enumerate_basic_products(&gens, (q - 1) as usize, &MultidegreeFilter::AtLeastOnce);
    let summands = products
        .into_iter()
        .map(|t| {
            let m = t.height() + 1;
            (t, SphereGroup { q: q as usize, m })
        })
        .collect();
    E1Entry::assemble(p, q, summands)
}

/// The free part `F` of `E1(p-1,p)`.
pub fn superdiagonal_free_basis(p: u32) -> Vec<Term> {
    e1_entry(p - 1, p).basis
}

/// A bracket `[c1,c2]` over `x(i,p-1)` in which `x(k,p-1)` occurs once in
/// each side and every other generator exactly once overall.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DsepElement {
    pub term: Term,
    pub p: u32,
    pub k: u32,
    pub left: BTreeSet<u32>,
    pub right: BTreeSet<u32>,
}

fn first_indices(t: &Term, j: u32) -> Option<Vec<u32>> {
    t.leaves()
        .into_iter()
        .map(|g| match g {
            Gen::X(i, jj) if jj == j => Some(i),
            _ => None,
        })
        .collect()
}

impl DsepElement {
    pub fn new(term: Term, p: u32) -> Result<DsepElement, SpectralError> {
        let err = |m| SpectralError::NotSeparated(term.to_string(), p, m);
        if p < 4 {
            return Err(SpectralError::OutOfRange(p, "separated generators need p >= 4"));
        }
        let (c1, c2) = term.children().ok_or_else(|| err("not a bracket"))?;
        let l1 = first_indices(c1, p - 1).ok_or_else(|| err("generator outside x(.,p-1)"))?;
        let l2 = first_indices(c2, p - 1).ok_or_else(|| err("generator outside x(.,p-1)"))?;
        let s1: BTreeSet<u32> = l1.iter().copied().collect();
        let s2: BTreeSet<u32> = l2.iter().copied().collect();
        if s1.len() != l1.len() || s2.len() != l2.len() {
            return Err(err("a generator repeats inside one side"));
        }
        let shared: Vec<u32> = s1.intersection(&s2).copied().collect();
        if shared.len() != 1 {
            return Err(err("the sides must share exactly one generator"));
        }
        let all: BTreeSet<u32> = s1.union(&s2).copied().collect();
        if all != (1..p - 1).collect() {
            return Err(err("labels must cover 1..p-2"));
        }
        Ok(DsepElement { term: term.clone(), p, k: shared[0], left: s1, right: s2 })
    }

    /// Children sorted at every node; returns the antisymmetry sign relating
    /// the input to the canonical representative.
    pub fn canonical(term: &Term, p: u32) -> Result<(i32, DsepElement), SpectralError> {
        DsepElement::new(term.clone(), p)?;
        let (s, t) = sort_children(term);
        Ok((s, DsepElement::new(t, p)?))
    }

    pub fn is_canonical(&self) -> bool {
        sort_children(&self.term).1 == self.term
    }

    pub fn sides(&self) -> (&Term, &Term) {
        self.term.children().expect("validated at construction")
    }
}

/// Every canonical separated generator for `p`, sorted.
pub fn dsep_generators(p: u32) -> Result<Vec<DsepElement>, SpectralError> {
    if p < 4 {
        return Err(SpectralError::OutOfRange(p, "separated generators need p >= 4"));
    }
    let j = p - 1;
    let mut out = BTreeSet::new();
    for k in 1..j {
        let others: Vec<u32> = (1..j).filter(|&i| i != k).collect();
        for mask in 0..(1u32 << others.len()) {
            let mut left = vec![Gen::x(k, j)];
            let mut right = vec![Gen::x(k, j)];
            for (b, &i) in others.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    left.push(Gen::x(i, j));
                } else {
                    right.push(Gen::x(i, j));
                }
            }
            left.sort();
            right.sort();
            let ls = sorted_bracketings(&left);
            let rs = sorted_bracketings(&right);
            for a in &ls {
                for b in &rs {
                    let (_, e) = DsepElement::canonical(&Term::br(a.clone(), b.clone()), p)?;
                    out.insert(e);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Every separated term for `p` under any bracketing and child order.
pub fn separated_terms(p: u32) -> Result<Vec<DsepElement>, SpectralError> {
    if p < 4 {
        return Err(SpectralError::OutOfRange(p, "separated generators need p >= 4"));
    }
    let j = p - 1;
    let mut out = Vec::new();
    for k in 1..j {
        let others: Vec<u32> = (1..j).filter(|&i| i != k).collect();
        for mask in 0..(1u32 << others.len()) {
            let mut left = vec![Gen::x(k, j)];
            let mut right = vec![Gen::x(k, j)];
            for (b, &i) in others.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    left.push(Gen::x(i, j));
                } else {
                    right.push(Gen::x(i, j));
                }
            }
            for a in all_bracketings(&left) {
                for b in all_bracketings(&right) {
                    out.push(DsepElement::new(Term::br(a.clone(), b), p)?);
                }
            }
        }
    }
    Ok(out)
}

fn parity(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `[[c1,c2],a] = e1 [[c1,a],c2] + e2 [[a,c2],c1]` by antisymmetry and the
/// graded Jacobi identity.
pub fn jacobi_split(c1: &Term, c2: &Term, a: &Term) -> [(i32, Term); 2] {
    let (al, be, ga) = (c1.weight(), c2.weight(), a.weight());
    let outer = swap_sign(al + be, ga) * -parity(be * (ga + 1));
    let to_a2c2_c1 = parity(ga * (al + 1)) * swap_sign(al, be + ga) * swap_sign(be, ga);
    let to_c1a2_c2 = parity(al * (be + 1)) * swap_sign(be, ga + al) * swap_sign(ga, al);
    [
        (outer * to_c1a2_c2, Term::br(Term::br(c1.clone(), a.clone()), c2.clone())),
        (outer * to_a2c2_c1, Term::br(Term::br(a.clone(), c2.clone()), c1.clone())),
    ]
}

/// Rewrite a bracket over `x(i,p-1)` with one generator repeated into a
/// combination of canonical separated generators, using antisymmetry and
/// Jacobi only.
pub fn reduce_to_dsep(t: &Term, p: u32) -> Result<LinearCombo, SpectralError> {
    if p < 4 {
        return Err(SpectralError::OutOfRange(p, "separated generators need p >= 4"));
    }
    let labels = first_indices(t, p - 1).ok_or_else(|| SpectralError::Multidegree(t.to_string(), p))?;
    let mut counts = vec![0u32; p as usize - 1];
    for i in &labels {
        counts[*i as usize] += 1;
    }
    let twice: Vec<u32> = (1..p - 1).filter(|&i| counts[i as usize] == 2).collect();
    let ok = twice.len() == 1 && (1..p - 1).all(|i| counts[i as usize] == 1 || i == twice[0]);
    if !ok {
        return Err(SpectralError::Multidegree(t.to_string(), p));
    }
    let k = twice[0];
    let mut out = LinearCombo::zero();
    for (s, term) in separate(t, k, p - 1) {
        let (sc, e) = DsepElement::canonical(&term, p)?;
        out.add_term(e.term, BigInt::from(s * sc));
    }
    Ok(out)
}

fn count_k(t: &Term, k: u32, j: u32) -> usize {
    t.leaves().iter().filter(|g| **g == Gen::X(k, j)).count()
}

fn separate(t: &Term, k: u32, j: u32) -> Vec<(i32, Term)> {
    let (a, b) = t.children().expect("weight >= 2 when a generator repeats");
    let (ca, cb) = (count_k(a, k, j), count_k(b, k, j));
    if ca == 1 && cb == 1 {
        return vec![(1, t.clone())];
    }
    let (s0, inner, rest) = if ca == 2 { (1, a, b) } else { (swap_sign(a.weight(), b.weight()), b, a) };
    let mut out = Vec::new();
    for (s1, sub) in separate(inner, k, j) {
        let (c1, c2) = sub.children().unwrap();
        for (s2, term) in jacobi_split(c1, c2, rest) {
            out.push((s0 * s1 * s2, term));
        }
    }
    out
}

/// Alternating sum of coface pushforwards from level `p-1` to level `p`.
pub fn d1_bruteforce(w: &LinearCombo, p: u32) -> Result<LinearCombo, SpectralError> {
    if p == 0 {
        return Err(SpectralError::OutOfRange(p, "d1 needs p >= 1"));
    }
    let mut out = LinearCombo::zero();
    for l in 0..=p {
        let pushed = push_combo(Direction::coface(l, p - 1)?, w)?;
        out.add_scaled(&pushed, &BigInt::from(parity(l as usize)));
    }
    Ok(out)
}

/// The two halves of the simplified differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Parts {
    pub at_k: LinearCombo,
    pub at_top: LinearCombo,
}

impl D1Parts {
    pub fn total(&self) -> LinearCombo {
        let mut t = self.at_k.clone();
        t.add(&self.at_top);
        t
    }
}

/// `x(i,p-1) -> x(i',p)` with `i' = i+1` for `i > k`, and `k` sent to `k_to`.
fn shift_at_k(c: &Term, k: u32, k_to: u32, p: u32) -> Term {
    c.map_leaves(&|g| match g {
        Gen::X(i, _) if i < k => Gen::x(i, p),
        Gen::X(i, _) if i > k => Gen::x(i + 1, p),
        _ => Gen::x(k_to, p),
    })
}

fn lift(c: &Term, p: u32) -> Term {
    c.map_leaves(&|g| match g {
        Gen::X(i, _) => Gen::x(i, p),
        y => y,
    })
}

/// `d1(w)` for a separated generator by the relabelling formula.
pub fn d1_simplified(w: &DsepElement) -> Result<D1Parts, SpectralError> {
    let w = DsepElement::new(w.term.clone(), w.p)?;
    let (p, k) = (w.p, w.k);
    let (c1, c2) = w.sides();
    let sk = BigInt::from(parity(k as usize));
    let mut at_k = LinearCombo::zero();
    at_k.add_term(Term::br(shift_at_k(c1, k, k, p), shift_at_k(c2, k, k + 1, p)), sk.clone());
    at_k.add_term(Term::br(shift_at_k(c1, k, k + 1, p), shift_at_k(c2, k, k, p)), sk);
    let st = BigInt::from(parity(p as usize - 1));
    let mut at_top = LinearCombo::zero();
    at_top.add_term(Term::br(c1.clone(), lift(c2, p)), st.clone());
    at_top.add_term(Term::br(lift(c1, p), c2.clone()), st);
    Ok(D1Parts { at_k, at_top })
}

/// Outcome of `d1` in the degenerate range `p <= 3`.
#[derive(Clone, Debug)]
pub struct LowD1 {
    pub p: u32,
    pub images: Vec<(Term, LinearCombo)>,
    pub source: E1Entry,
    pub target: E1Entry,
}

/// `d1: E1(p-1,p) -> E1(p,p)` for `p` in `1..=3`, evaluated on the free
/// generators of the source.
pub fn d1_low(p: u32) -> Result<LowD1, SpectralError> {
    if !(1..=3).contains(&p) {
        return Err(SpectralError::OutOfRange(p, "low-degree differential covers p = 1, 2, 3"));
    }
    let source = e1_entry(p - 1, p);
    let target = e1_entry(p, p);
    let mut images = Vec::new();
    for b in &source.basis {
        images.push((b.clone(), d1_bruteforce(&LinearCombo::term(b.clone()), p)?));
    }
    Ok(LowD1 { p, images, source, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::normalize_to_hall;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn low_entries() {
        assert!(e1_entry(0, 1).is_zero());
        assert_eq!(e1_entry(2, 2).basis, vec![t("x12")]);
        assert_eq!(e1_entry(1, 2).basis, vec![t("y(1)")]);
        assert_eq!(e1_entry(2, 3).basis, vec![t("x12")]);
        assert_eq!(e1_entry(3, 3).free_rank(), 1);
        assert_eq!(e1_entry(5, 5).free_rank(), 6);
        assert!(e1_entry(4, 3).is_zero());
    }

    #[test]
    fn superdiagonal_p4() {
        let e = e1_entry(3, 4);
        assert_eq!(e.basis, vec![t("[x13,[x13,x23]]"), t("[x23,[x13,x23]]")]);
        assert_eq!(e.torsion.len(), 1);
        assert_eq!(e.torsion[0].0, t("[x13,x23]"));
        assert_eq!(e.group.describe(), "Z^2 + Z/2");
    }

    #[test]
    fn dsep_small() {
        let g = dsep_generators(4).unwrap();
        let terms: Vec<Term> = g.iter().map(|e| e.term.clone()).collect();
        assert!(terms.contains(&t("[x13,[x13,x23]]")));
        assert!(terms.contains(&t("[x23,[x13,x23]]")));
        assert_eq!(g.len(), 2);
        let (s, e) = DsepElement::canonical(&t("[[x13,x23],x13]"), 4).unwrap();
        assert_eq!(e.term, t("[x13,[x13,x23]]"));
        assert_eq!(s, 1);
        assert!(DsepElement::new(t("[[x13,x13],x23]"), 4).is_err());
        assert!(dsep_generators(3).is_err());
    }

    #[test]
    fn reduction_sound() {
        let gens = top_generators(3);
        for s in ["[x23,[x13,x13]]", "[[x13,x13],x23]", "[x13,[x13,x23]]"] {
            let r = reduce_to_dsep(&t(s), 4).unwrap();
            let mut lhs = normalize_to_hall(&t(s), &gens).unwrap();
            let mut rhs = LinearCombo::zero();
            for (term, c) in r.iter() {
                rhs.add_scaled(&normalize_to_hall(term, &gens).unwrap(), c);
            }
            lhs.sub(&rhs);
            assert!(lhs.is_zero(), "{s}: {lhs}");
        }
    }

    #[test]
    fn simplified_p4() {
        let w = DsepElement::new(t("[x13,[x13,x23]]"), 4).unwrap();
        let d = d1_simplified(&w).unwrap();
        let mut k = LinearCombo::scaled(t("[x14,[x24,x34]]"), -1);
        k.add_term(t("[x24,[x14,x34]]"), BigInt::from(-1));
        assert_eq!(d.at_k, k);
        let mut top = LinearCombo::scaled(t("[x13,[x14,x24]]"), -1);
        top.add_term(t("[x14,[x13,x23]]"), BigInt::from(-1));
        assert_eq!(d.at_top, top);
        assert_eq!(d1_bruteforce(&LinearCombo::term(w.term.clone()), 4).unwrap(), d.total());
    }

    #[test]
    fn low_degree() {
        let d2 = d1_low(2).unwrap();
        assert_eq!(d2.images.len(), 1);
        assert_eq!(d2.images[0].1, LinearCombo::scaled(t("x12"), -1));
        let d3 = d1_low(3).unwrap();
        assert!(d3.images.iter().all(|(_, c)| c.is_zero()));
    }
}
