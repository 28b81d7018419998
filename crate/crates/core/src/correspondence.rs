//! Signed correspondences between brackets and labelled graphs: trees for
//! brackets over `x(.,p)`, marked one-loop graphs for separated generators.
//! Also the combinatorial differential and the diagonal of the second page.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bracket::{swap_sign, Gen, LinearCombo, Term};
use crate::spectral::{dsep_generators, DsepElement, SpectralError};
use crate::utg::{
    enumerate_marked, enumerate_one_loop, enumerate_trees, marked_k, quotient_group, relation_vectors, stu_vector,
    GeneratorSet, GraphError, Half, Planar, RelationKind, Shape, UniTriGraph,
};
use crate::zlinalg::{
    cokernel_of_relations, subgroup_equal_sparse, GroupPresentation, Lattice, LinalgError, SparseVec,
};

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error("{0} is not a bracket of distinct x(i,r) with one common r")]
    NotTreeShaped(String),
    #[error("{0} cannot be joined along exactly one shared label")]
    NotJoinable(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("malformed marked graph: {0}")]
    MalformedMarked(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

type Result<T> = std::result::Result<T, CorrespondenceError>;

fn parity(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Two label sets with their crossing count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSetPair {
    pub l1: BTreeSet<u32>,
    pub l2: BTreeSet<u32>,
}

impl LabelSetPair {
    pub fn new(l1: BTreeSet<u32>, l2: BTreeSet<u32>) -> Self {
        LabelSetPair { l1, l2 }
    }

    /// `#{(a,b) in L1 x L2 : a > b}`, ignoring labels common to both sets.
    pub fn crossing(&self) -> usize {
        let shared: BTreeSet<u32> = self.l1.intersection(&self.l2).copied().collect();
        self.l1
            .iter()
            .filter(|a| !shared.contains(a))
            .map(|a| self.l2.iter().filter(|b| !shared.contains(*b) && *a > **b).count())
            .sum()
    }
}

/// A graph with a sign.
#[derive(Clone, Debug)]
pub struct SignedGraph {
    pub graph: UniTriGraph,
    pub sign: i32,
}

pub type SignedTree = SignedGraph;

/// Root `r` and labels `i` of a bracket over `x(i,r)` with distinct `i`.
pub fn tree_labels(t: &Term) -> Result<(u32, BTreeSet<u32>)> {
    let bad = || CorrespondenceError::NotTreeShaped(t.to_string());
    let mut root = None;
    let mut labels = BTreeSet::new();
    for g in t.leaves() {
        let Gen::X(i, r) = g else { return Err(bad()) };
        if *root.get_or_insert(r) != r || !labels.insert(i) {
            return Err(bad());
        }
    }
    Ok((root.ok_or_else(bad)?, labels))
}

fn planar_of(t: &Term) -> Planar {
    match t {
        Term::Leaf(Gen::X(i, _)) => Planar::Leaf(*i),
        Term::Leaf(Gen::Y(k)) => Planar::Leaf(*k),
        Term::Br(a, b) => Planar::node(planar_of(a), planar_of(b)),
    }
}

fn term_of(p: &Planar, root: u32) -> Term {
    match p {
        Planar::Leaf(i) => Term::x(*i, root),
        Planar::Node(a, b) => Term::br(term_of(a, root), term_of(b, root)),
    }
}

fn label_set(t: &Term, root: u32) -> BTreeSet<u32> {
    let mut s: BTreeSet<u32> =
        t.leaves().into_iter().filter_map(|g| if let Gen::X(i, _) = g { Some(i) } else { None }).collect();
    s.insert(root);
    s
}

/// `(-1)^(#L1 + #(L1 x> L2))` at every bracket node, multiplied together.
pub fn bracket_sign(t: &Term, root: u32) -> i32 {
    match t {
        Term::Leaf(_) => 1,
        Term::Br(a, b) => {
            let pair = LabelSetPair::new(label_set(a, root), label_set(b, root));
            bracket_sign(a, root) * bracket_sign(b, root) * parity(pair.l1.len() + pair.crossing())
        }
    }
}

/// The unsigned tree of a bracket over `x(.,r)`: leaves for the indices
/// and for `r`, every bracket a node ordered (towards `r`, left, right).
pub fn psi_t_unsigned(t: &Term) -> Result<UniTriGraph> {
    let (root, labels) = tree_labels(t)?;
    if labels.iter().any(|&i| i == 0 || i >= root) {
        return Err(CorrespondenceError::NotTreeShaped(t.to_string()));
    }
    Ok(UniTriGraph::from_planar(root, &planar_of(t)))
}

pub fn psi_t(t: &Term) -> Result<SignedTree> {
    let graph = psi_t_unsigned(t)?;
    let (root, _) = tree_labels(t)?;
    Ok(SignedGraph { graph, sign: bracket_sign(t, root) })
}

/// The bracket of a tree read from its highest leaf, unsigned.
pub fn phi_t_unsigned(g: &UniTriGraph) -> Result<Term> {
    if g.validate_structure()? != Shape::Tree {
        return Err(CorrespondenceError::MalformedTree("not a tree".into()));
    }
    let root = *g.labels().last().ok_or_else(|| CorrespondenceError::MalformedTree("no leaves".into()))?;
    Ok(term_of(&g.to_planar(root)?, root))
}

pub fn phi_t(g: &UniTriGraph) -> Result<(i32, Term)> {
    let t = phi_t_unsigned(g)?;
    let (root, _) = tree_labels(&t)?;
    Ok((bracket_sign(&t, root), t))
}

/// Join the trees of `a` (over `x(.,ra)`) and `b` (over `x(.,rb)`) at their
/// common leaf `k`: both copies of `k` are removed and a new node ordered
/// (leaf `k`, tree of `a`, tree of `b`) is added.
pub fn join_at(a: &Term, b: &Term) -> Result<SignedGraph> {
    let whole = || CorrespondenceError::NotJoinable(Term::br(a.clone(), b.clone()).to_string());
    let (ra, la) = tree_labels(a)?;
    let (rb, lb) = tree_labels(b)?;
    let shared: Vec<u32> = la.intersection(&lb).copied().collect();
    if ra == rb || shared.len() != 1 || la.contains(&rb) || lb.contains(&ra) {
        return Err(whole());
    }
    let k = shared[0];
    let (ga, ha) = psi_t_unsigned(a)?.cut_leaf(k)?;
    let (gb, hb) = psi_t_unsigned(b)?.cut_leaf(k)?;
    let (mut g, off) = ga.disjoint_union(&gb);
    let n = g.add_node();
    let leaf = g.add_leaf(k);
    g.connect((n, 0), (leaf, 0));
    g.connect((n, 1), ha);
    g.connect((n, 2), (hb.0 + off, hb.1));
    let pair = LabelSetPair::new(label_set(a, ra), label_set(b, rb));
    let sign = bracket_sign(a, ra) * bracket_sign(b, rb) * parity(pair.l1.len() + pair.crossing());
    Ok(SignedGraph { graph: g, sign })
}

/// `psi_t` on brackets over one `x(.,r)`, and the join at the shared label
/// on brackets `[A,B]` with `A` and `B` over different second indices.
pub fn psi_ext(t: &Term) -> Result<SignedGraph> {
    if tree_labels(t).is_ok() {
        return psi_t(t);
    }
    let (a, b) = t.children().ok_or_else(|| CorrespondenceError::NotJoinable(t.to_string()))?;
    join_at(a, b)
}

pub fn psi_ext_combo(c: &LinearCombo) -> Result<Vec<(BigInt, UniTriGraph)>> {
    c.iter()
        .map(|(t, k)| {
            let s = psi_ext(t)?;
            Ok((k * s.sign, s.graph))
        })
        .collect()
}

/// The marked graph of a separated generator `[c1,c2]` with shared label `k`:
/// the trees of `c1` and `c2` are cut open at `k` and at `p-1` and closed up
/// through `v_k = (leaf k, c1 side, c2 side)` and
/// `v_{p-1} = (leaf p-1, c2 side, c1 side)`.
pub fn psi_d(w: &DsepElement) -> Result<SignedGraph> {
    let (c1, c2) = w.sides();
    let (top, k) = (w.p - 1, w.k);
    let g1 = psi_t_unsigned(c1)?;
    let g2 = psi_t_unsigned(c2)?;
    let (u, off) = g1.disjoint_union(&g2);
    let ends = [g1.leaf(k)?, g1.leaf(top)?, g2.leaf(k)? + off, g2.leaf(top)? + off];
    let outer: Vec<Half> = ends.iter().map(|&l| u.neighbor((l, 0))).collect();
    let (mut h, map) = u.remove_nodes(&ends);
    let lk = h.add_leaf(k);
    let lp = h.add_leaf(top);
    let vk = h.add_node();
    let vp = h.add_node();
    h.connect((vk, 0), (lk, 0));
    h.connect((vp, 0), (lp, 0));
    for (side, (at_k, at_p)) in [((vk, 1), (vp, 2)), ((vk, 2), (vp, 1))].into_iter().enumerate() {
        let (a, b) = (outer[2 * side], outer[2 * side + 1]);
        if ends.contains(&a.0) {
            h.connect(at_k, at_p);
        } else {
            h.connect(at_k, (map[a.0], a.1));
            h.connect(at_p, (map[b.0], b.1));
        }
    }
    h.set_marks(Some((vk, vp)));
    let pair = LabelSetPair::new(label_set(c1, top), label_set(c2, top));
    let sign = bracket_sign(c1, top) * bracket_sign(c2, top) * parity(pair.crossing());
    Ok(SignedGraph { graph: h, sign })
}

/// Inverse of `psi_d`. A graph whose cyclic order at `v_{p-1}` is reversed
/// relative to the `psi_d` layout comes back with an extra sign `-1`.
pub fn phi_d(g: &UniTriGraph) -> Result<(i32, DsepElement)> {
    let bad = |m: &str| CorrespondenceError::MalformedMarked(m.to_string());
    g.validate()?;
    let (vk, vp) = g.marks().ok_or_else(|| bad("no marks"))?;
    let leaf_slot =
        |v: usize| (0..3).find(|&s| g.is_leaf(g.neighbor((v, s)).0)).ok_or_else(|| bad("mark without leaf"));
    let (sk, sp) = (leaf_slot(vk)?, leaf_slot(vp)?);
    let (lk, lp) = (g.neighbor((vk, sk)).0, g.neighbor((vp, sp)).0);
    let k = g.label_of(lk).unwrap();
    let top = g.label_of(lp).unwrap();
    if Some(&top) != g.labels().last() {
        return Err(bad("second mark must sit at the highest leaf"));
    }
    let removed = [lk, lp, vk, vp];
    let (mut h, map) = g.remove_nodes(&removed);
    let open: Vec<(Half, u32)> =
        vec![((vk, (sk + 1) % 3), k), ((vk, (sk + 2) % 3), k), ((vp, (sp + 1) % 3), top), ((vp, (sp + 2) % 3), top)];
    let new_leaf: Vec<usize> = open.iter().map(|&(_, l)| h.add_leaf(l)).collect();
    for (i, &(half, _)) in open.iter().enumerate() {
        let partner = g.neighbor(half);
        match open.iter().position(|&(o, _)| o == partner) {
            Some(j) => h.connect((new_leaf[i], 0), (new_leaf[j], 0)),
            None => h.connect((new_leaf[i], 0), (map[partner.0], partner.1)),
        }
    }
    let comps = h.components();
    let comp_of = |v: usize| comps.iter().position(|c| c.contains(&v)).unwrap();
    let (c1, c2) = (comp_of(new_leaf[0]), comp_of(new_leaf[1]));
    if c1 == c2 || comps.len() != 2 {
        return Err(bad("marks do not split the cycle into two arcs"));
    }
    let orient = if comp_of(new_leaf[3]) == c1 { 1 } else { -1 };
    let extract = |c: usize| -> Result<Term> {
        let others: Vec<usize> =
            comps.iter().enumerate().filter(|(i, _)| *i != c).flat_map(|(_, v)| v.clone()).collect();
        phi_t_unsigned(&h.remove_nodes(&others).0)
    };
    let (t1, t2) = (extract(c1)?, extract(c2)?);
    let pair = LabelSetPair::new(label_set(&t1, top), label_set(&t2, top));
    let sign = orient * bracket_sign(&t1, top) * bracket_sign(&t2, top) * parity(pair.crossing());
    Ok((sign, DsepElement::new(Term::br(t1, t2), top + 1)?))
}

/// `G_p^1 - G_p^2 - (G_k^2 - G_k^1)`: the STU expansion at the highest leaf
/// minus the STU expansion at leaf `k`.
pub fn d1_combinatorial(g: &UniTriGraph) -> Result<Vec<(BigInt, UniTriGraph)>> {
    let bad = |m: &str| CorrespondenceError::MalformedMarked(m.to_string());
    g.validate()?;
    let (vk, vp) = g.marks().ok_or_else(|| bad("no marks"))?;
    let k = marked_k(g).ok_or_else(|| bad("no leaf at the first mark"))?;
    let top = *g.labels().last().unwrap();
    if g.leaf_anchor(top)?.0 != vp || g.leaf_anchor(k)?.0 != vk {
        return Err(bad("marks must hang the leaves k and p-1"));
    }
    let (p1, p2) = g.stu(top)?;
    let (k2, k1) = g.stu(k)?;
    let one = BigInt::from(1);
    Ok(vec![(one.clone(), p1), (-&one, p2), (-&one, k2), (one, k1)])
}

/// Trees of degree `p-1` with the AS and IHX relation vectors.
pub struct TreeSpace {
    pub p: u32,
    pub gens: GeneratorSet,
    pub relations: Vec<SparseVec>,
}

impl TreeSpace {
    pub fn new(p: u32) -> Result<TreeSpace> {
        let gens = GeneratorSet::new(enumerate_trees(p as usize - 1));
        let mut relations = relation_vectors(&gens, RelationKind::As)?;
        relations.extend(relation_vectors(&gens, RelationKind::Ihx)?);
        Ok(TreeSpace { p, gens, relations })
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Ok(Lattice::from_vectors(self.gens.len(), self.relations.iter().cloned())?)
    }

    pub fn vector(&self, terms: &[(BigInt, UniTriGraph)]) -> Result<SparseVec> {
        Ok(self.gens.combo_vector(terms)?)
    }
}

/// Differences of STU expansions at two cycle-anchored leaves of one-loop
/// graphs with `leaves` leaves. With `top_only`, one of the two leaves is the
/// highest.
pub fn stu2_vectors(trees: &GeneratorSet, leaves: usize, top_only: bool) -> Result<Vec<SparseVec>> {
    let mut out = Vec::new();
    for g in enumerate_one_loop(leaves) {
        let cyc = g.cycle_nodes();
        let anchored: Vec<u32> =
            g.labels().into_iter().filter(|&l| cyc.contains(&g.leaf_anchor(l).unwrap().0)).collect();
        let mut stu = BTreeMap::new();
        for &n in &anchored {
            stu.insert(n, stu_vector(trees, &g, n)?);
        }
        for (i, &n) in anchored.iter().enumerate() {
            for &m in &anchored[i + 1..] {
                if top_only && m != leaves as u32 {
                    continue;
                }
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (c, x) in &stu[&n] {
                    *acc.entry(*c).or_default() += x;
                }
                for (c, x) in &stu[&m] {
                    *acc.entry(*c).or_default() -= x;
                }
                let v: SparseVec = acc.into_iter().filter(|(_, x)| *x != BigInt::from(0)).collect();
                if !v.is_empty() {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

/// Both inclusions between the image of the combinatorial differential and
/// the span of STU-squared differences, modulo AS and IHX.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stu2Certificate {
    pub marked_graphs: usize,
    pub stu2_relations: usize,
    pub image_in_stu2: bool,
    pub stu2_in_image: bool,
    pub equal: bool,
}

#[derive(Clone, Debug)]
pub struct E2Diagonal {
    pub p: u32,
    pub tree_count: usize,
    pub group: GroupPresentation,
    pub d1_rank: usize,
    pub certificate: Option<Stu2Certificate>,
}

/// `E2(p,p)`: trees of degree `p-1` modulo AS, IHX and the image of the
/// combinatorial differential for `p >= 4`; `Z` for `p = 3`; `0` below.
pub fn e2_diagonal(p: u32) -> Result<E2Diagonal> {
    if p <= 3 {
        let n = usize::from(p == 3);
        return Ok(E2Diagonal {
            p,
            tree_count: n,
            group: cokernel_of_relations(n, Vec::new()),
            d1_rank: 0,
            certificate: None,
        });
    }
    let space = TreeSpace::new(p)?;
    let n = space.gens.len();
    let marked = enumerate_marked(p as usize - 1);
    let mut image = Vec::new();
    for g in &marked {
        let v = space.vector(&d1_combinatorial(g)?)?;
        if !v.is_empty() {
            image.push(v);
        }
    }
    let stu2 = stu2_vectors(&space.gens, p as usize - 1, false)?;
    let base = space.lattice()?;
    let mut with_image = base.clone();
    for v in &image {
        with_image.insert(v.clone())?;
    }
    let mut with_stu2 = base.clone();
    for v in &stu2 {
        with_stu2.insert(v.clone())?;
    }
    let mut image_in_stu2 = true;
    for v in &image {
        image_in_stu2 &= with_stu2.contains(v)?;
    }
    let mut stu2_in_image = true;
    for v in &stu2 {
        stu2_in_image &= with_image.contains(v)?;
    }
    let a: Vec<SparseVec> = space.relations.iter().chain(&image).cloned().collect();
    let b: Vec<SparseVec> = space.relations.iter().chain(&stu2).cloned().collect();
    let equal = subgroup_equal_sparse(n, &a, &b)?;
    let d1_rank = with_image.rank() - base.rank();
    Ok(E2Diagonal {
        p,
        tree_count: n,
        group: cokernel_of_relations(n, a),
        d1_rank,
        certificate: Some(Stu2Certificate {
            marked_graphs: marked.len(),
            stu2_relations: stu2.len(),
            image_in_stu2,
            stu2_in_image,
            equal,
        }),
    })
}

/// `T_{p-1}`: trees of degree `p-1` modulo AS and IHX.
pub fn tree_group(p: u32) -> Result<GroupPresentation> {
    let gens = GeneratorSet::new(enumerate_trees(p as usize - 1));
    Ok(quotient_group(&gens, &[RelationKind::As, RelationKind::Ihx])?)
}

/// `D_{p-1}`: marked graphs with `p-1` leaves modulo AS and separated IHX.
pub fn marked_group(p: u32) -> Result<(GeneratorSet, GroupPresentation)> {
    let gens = GeneratorSet::new(enumerate_marked(p as usize - 1));
    let q = quotient_group(&gens, &[RelationKind::As, RelationKind::IhxSep])?;
    Ok((gens, q))
}

/// Positions of the bracket nodes of `t`, as left/right paths from the top.
pub fn bracket_paths(t: &Term) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    fn walk(t: &Term, path: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if let Term::Br(a, b) = t {
            out.push(path.clone());
            path.push(false);
            walk(a, path, out);
            path.pop();
            path.push(true);
            walk(b, path, out);
            path.pop();
        }
    }
    walk(t, &mut Vec::new(), &mut out);
    out
}

pub fn subterm<'a>(t: &'a Term, path: &[bool]) -> &'a Term {
    path.iter().fold(t, |s, &right| {
        let (a, b) = s.children().expect("path follows bracket nodes");
        if right {
            b
        } else {
            a
        }
    })
}

pub fn replace_at(t: &Term, path: &[bool], new: Term) -> Term {
    match path.split_first() {
        None => new,
        Some((&right, rest)) => {
            let (a, b) = t.children().expect("path follows bracket nodes");
            if right {
                Term::br(a.clone(), replace_at(b, rest, new))
            } else {
                Term::br(replace_at(a, rest, new), b.clone())
            }
        }
    }
}

/// `t = sign * t'` with the children at `path` exchanged.
pub fn antisymmetry_at(t: &Term, path: &[bool]) -> (i32, Term) {
    let (a, b) = subterm(t, path).children().expect("path names a bracket");
    let swapped = Term::br(b.clone(), a.clone());
    (swap_sign(a.weight(), b.weight()), replace_at(t, path, swapped))
}

/// The three signed terms of the graded Jacobi identity
/// `(-1)^((l3-1)l1) [v1,[v2,v3]] + (-1)^((l1-1)l2) [v2,[v3,v1]] + (-1)^((l2-1)l3) [v3,[v1,v2]] = 0`
/// at a node `[v1,[v2,v3]]`, with `l` the homotopy degree. `None` if the
/// right child is a generator.
pub fn jacobi_at(t: &Term, path: &[bool]) -> Option<[(i32, Term); 3]> {
    let (v1, r) = subterm(t, path).children()?;
    let (v2, v3) = r.children()?;
    let (l1, l2, l3) = (v1.weight() + 1, v2.weight() + 1, v3.weight() + 1);
    let br = |a: &Term, b: &Term, c: &Term| replace_at(t, path, Term::br(a.clone(), Term::br(b.clone(), c.clone())));
    Some([
        (parity((l3 - 1) * l1), br(v1, v2, v3)),
        (parity((l1 - 1) * l2), br(v2, v3, v1)),
        (parity((l2 - 1) * l3), br(v3, v1, v2)),
    ])
}

/// A relation as signed separated generators.
pub type SignedRelation = Vec<(i32, DsepElement)>;

/// Antisymmetry and separated Jacobi relations among the canonical
/// separated generators for `p`, as vectors over `dsep_generators(p)`.
pub fn dsep_relations(p: u32) -> Result<(Vec<DsepElement>, Vec<SignedRelation>)> {
    let gens = dsep_generators(p)?;
    let mut rels = Vec::new();
    for w in &gens {
        for path in bracket_paths(&w.term) {
            if path.is_empty() {
                continue;
            }
            let (s, flipped) = antisymmetry_at(&w.term, &path);
            let flipped_ok = subterm(&flipped, &path).children().map(|(_, r)| !r.is_leaf()).unwrap_or(false);
            if let Some(triple) = jacobi_at(&w.term, &path) {
                rels.push(triple.iter().map(|(c, t)| canonical(*c, t, p)).collect::<Result<Vec<_>>>()?);
            }
            if flipped_ok {
                if let Some(triple) = jacobi_at(&flipped, &path) {
                    rels.push(triple.iter().map(|(c, t)| canonical(*c * s, t, p)).collect::<Result<Vec<_>>>()?);
                }
            }
        }
    }
    Ok((gens, rels))
}

fn canonical(c: i32, t: &Term, p: u32) -> Result<(i32, DsepElement)> {
    let (s, e) = DsepElement::canonical(t, p)?;
    Ok((c * s, e))
}

/// `Z[D^sep_p]` modulo antisymmetry and the separated Jacobi identity.
pub fn dsep_group(p: u32) -> Result<GroupPresentation> {
    let (gens, rels) = dsep_relations(p)?;
    let index: BTreeMap<&DsepElement, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let vectors = rels
        .iter()
        .map(|r| {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (c, e) in r {
                *acc.entry(index[e]).or_default() += *c;
            }
            acc.into_iter().filter(|(_, x)| *x != BigInt::from(0)).collect()
        })
        .collect();
    Ok(cokernel_of_relations(gens.len(), vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn crossing_counts() {
        let pair = LabelSetPair::new([1, 3].into(), [2, 3].into());
        assert_eq!(pair.crossing(), 0);
        let pair = LabelSetPair::new([2, 3].into(), [1, 3].into());
        assert_eq!(pair.crossing(), 1);
        assert_eq!(bracket_sign(&t("[x13,x23]"), 3), 1);
        assert_eq!(bracket_sign(&t("[x23,x13]"), 3), -1);
    }

    #[test]
    fn base_case() {
        let s = psi_t(&t("x12")).unwrap();
        assert_eq!(s.sign, 1);
        assert_eq!(s.graph.labels(), vec![1, 2]);
        assert_eq!(phi_t(&s.graph).unwrap(), (1, t("x12")));
        assert!(psi_t(&t("[x13,x13]")).is_err());
        assert!(psi_t(&t("[x13,x24]")).is_err());
    }

    #[test]
    fn tree_round_trip() {
        for g in enumerate_trees(4) {
            let (s, term) = phi_t(&g).unwrap();
            let back = psi_t(&term).unwrap();
            assert_eq!(back.sign, s);
            assert_eq!(back.graph.canonical_key(), g.canonical_key());
        }
    }

    #[test]
    fn marked_round_trip_p4() {
        let w = DsepElement::new(t("[x13,[x13,x23]]"), 4).unwrap();
        let g = psi_d(&w).unwrap();
        assert_eq!(g.graph.validate().unwrap(), Shape::OneLoop);
        assert_eq!(marked_k(&g.graph), Some(1));
        assert_eq!(g.graph.degree(), 3);
        let (s, back) = phi_d(&g.graph).unwrap();
        assert_eq!(s, g.sign);
        assert_eq!(back.term, w.term);
    }

    #[test]
    fn join_shape() {
        let j = join_at(&t("[x13,x23]"), &t("x14")).unwrap();
        assert_eq!(j.graph.validate().unwrap(), Shape::Tree);
        assert_eq!(j.graph.labels(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn low_e2() {
        assert_eq!(e2_diagonal(3).unwrap().group.describe(), "Z");
        for p in 0..=2 {
            assert!(e2_diagonal(p).unwrap().group.is_trivial());
        }
    }
}
