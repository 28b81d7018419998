//! Labelled unitrivalent graphs with cyclic orders: trees, one-loop graphs
//! with two marked nodes, canonical keys, enumeration, and the AS, IHX and
//! STU relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::zlinalg::{cokernel_of_relations, GroupPresentation, SparseVec};

const OPEN: usize = usize::MAX;

/// A half-edge: `(node, slot)`.
pub type Half = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("no leaf labelled {0}")]
    NoLeaf(u32),
    #[error("leaf {0} is not adjacent to a trivalent node")]
    DegenerateLeaf(u32),
    #[error("edge at ({0},{1}) does not join two distinct trivalent nodes")]
    DegenerateEdge(usize, usize),
    #[error("relation output {0} is missing from the generator list")]
    MissingGenerator(String),
}

/// Planar binary tree with labelled leaves. Trees are read as rooted at
/// their highest leaf with children listed in cyclic order after the parent.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Planar {
    Leaf(u32),
    Node(Box<Planar>, Box<Planar>),
}

impl Planar {
    pub fn node(a: Planar, b: Planar) -> Planar {
        Planar::Node(Box::new(a), Box::new(b))
    }

    pub fn labels(&self) -> Vec<u32> {
        match self {
            Planar::Leaf(l) => vec![*l],
            Planar::Node(a, b) => {
                let mut v = a.labels();
                v.extend(b.labels());
                v
            }
        }
    }

    pub fn map_labels(&self, f: &impl Fn(u32) -> u32) -> Planar {
        match self {
            Planar::Leaf(l) => Planar::Leaf(f(*l)),
            Planar::Node(a, b) => Planar::node(a.map_labels(f), b.map_labels(f)),
        }
    }
}

/// Every planar binary tree whose leaves are exactly `labels`, each once.
pub fn all_planar(labels: &[u32]) -> Vec<Planar> {
    if labels.len() == 1 {
        return vec![Planar::Leaf(labels[0])];
    }
    let n = labels.len();
    let mut out = Vec::new();
    for mask in 1..(1u32 << n) - 1 {
        let left: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
        let right: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| labels[i]).collect();
        let ls = all_planar(&left);
        let rs = all_planar(&right);
        for a in &ls {
            for b in &rs {
                out.push(Planar::node(a.clone(), b.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
enum Token {
    Leaf(u32),
    Node(bool),
    Back(usize, usize),
    Seen,
    Component,
}

/// Canonical key: equal iff the graphs are isomorphic respecting labels,
/// cyclic orders and marks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKey(Vec<Token>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Tree,
    OneLoop,
    Other,
}

/// Leaves have one slot, trivalent nodes three; the slot order of a
/// trivalent node is its cyclic order.
#[derive(Clone, Debug, Default)]
pub struct UniTriGraph {
    adj: Vec<Vec<Half>>,
    label: Vec<Option<u32>>,
    marks: Option<(usize, usize)>,
}

impl UniTriGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_leaf(&mut self, label: u32) -> usize {
        self.adj.push(vec![(OPEN, 0)]);
        self.label.push(Some(label));
        self.adj.len() - 1
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(vec![(OPEN, 0); 3]);
        self.label.push(None);
        self.adj.len() - 1
    }

    pub fn connect(&mut self, a: Half, b: Half) {
        self.adj[a.0][a.1] = b;
        self.adj[b.0][b.1] = a;
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }

    pub fn label_of(&self, v: usize) -> Option<u32> {
        self.label[v]
    }

    pub fn neighbor(&self, h: Half) -> Half {
        self.adj[h.0][h.1]
    }

    pub fn slots(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn marks(&self) -> Option<(usize, usize)> {
        self.marks
    }

    pub fn set_marks(&mut self, marks: Option<(usize, usize)>) {
        self.marks = marks;
    }

    pub fn is_marked(&self, v: usize) -> bool {
        matches!(self.marks, Some((a, b)) if a == v || b == v)
    }

    pub fn leaf_count(&self) -> usize {
        self.label.iter().filter(|l| l.is_some()).count()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.label.iter().flatten().copied().collect();
        v.sort();
        v
    }

    pub fn leaf(&self, label: u32) -> Result<usize, GraphError> {
        self.label.iter().position(|l| *l == Some(label)).ok_or(GraphError::NoLeaf(label))
    }

    pub fn trivalent_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| !self.is_leaf(v))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &(w, _) in &self.adj[v] {
                    if w != OPEN && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn shape(&self) -> Shape {
        if !self.is_connected() {
            return Shape::Other;
        }
        match (self.edge_count() + 1).checked_sub(self.adj.len()) {
            Some(0) => Shape::Tree,
            Some(1) => Shape::OneLoop,
            _ => Shape::Other,
        }
    }

    /// Nodes left after repeatedly stripping nodes of degree at most one.
    pub fn cycle_nodes(&self) -> BTreeSet<usize> {
        let n = self.adj.len();
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = self.adj.iter().map(|s| s.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(w, _) in &self.adj[v] {
                if w != OPEN && alive[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 {
                        stack.push(w);
                    }
                }
            }
        }
        (0..n).filter(|&v| alive[v]).collect()
    }

    /// The trivalent node a leaf hangs from.
    pub fn leaf_anchor(&self, label: u32) -> Result<Half, GraphError> {
        let l = self.leaf(label)?;
        let h = self.adj[l][0];
        if h.0 == OPEN || self.is_leaf(h.0) {
            return Err(GraphError::DegenerateLeaf(label));
        }
        Ok(h)
    }

    /// Checks degrees, incidences, distinct labels `1..n` and marks.
    pub fn validate(&self) -> Result<Shape, GraphError> {
        let labels = self.labels();
        if labels != (1..=labels.len() as u32).collect::<Vec<_>>() {
            return Err(GraphError::Invalid(format!("labels {labels:?} are not 1..n")));
        }
        self.validate_structure()
    }

    /// `validate` without the requirement that labels run through `1..n`.
    pub fn validate_structure(&self) -> Result<Shape, GraphError> {
        let bad = |m: String| Err(GraphError::Invalid(m));
        for (v, slots) in self.adj.iter().enumerate() {
            if slots.len() != 1 && slots.len() != 3 {
                return bad(format!("node {v} has degree {}", slots.len()));
            }
            if (slots.len() == 1) != self.label[v].is_some() {
                return bad(format!("node {v}: labels go exactly on leaves"));
            }
            for (s, &h) in slots.iter().enumerate() {
                if h.0 == OPEN || h.0 >= self.adj.len() || self.adj[h.0].get(h.1) != Some(&(v, s)) {
                    return bad(format!("half-edge ({v},{s}) is not properly connected"));
                }
            }
        }
        let mut labels = self.labels();
        labels.dedup();
        if labels.len() != self.leaf_count() {
            return bad("repeated leaf label".into());
        }
        let shape = self.shape();
        if let Some((a, b)) = self.marks {
            if shape != Shape::OneLoop {
                return bad("marked graphs have exactly one cycle".into());
            }
            let cyc = self.cycle_nodes();
            for m in [a, b] {
                if self.is_leaf(m) || !cyc.contains(&m) || !self.adj[m].iter().any(|&(w, _)| self.is_leaf(w)) {
                    return bad(format!("mark {m} must be a cycle node next to a leaf"));
                }
            }
            if a == b {
                return bad("the two marks coincide".into());
            }
        }
        Ok(shape)
    }

    /// Canonical key from a depth-first walk starting at the highest leaf of
    /// each component, visiting the slots of each node in cyclic order after
    /// the slot it was entered through.
    pub fn canonical_key(&self) -> GraphKey {
        let mut comps: Vec<(u32, usize)> = self
            .components()
            .into_iter()
            .map(|c| {
                let start = c.iter().copied().filter(|&v| self.label[v].is_some()).max_by_key(|&v| self.label[v]);
                let start = start.unwrap_or(c[0]);
                (self.label[start].unwrap_or(0), start)
            })
            .collect();
        comps.sort_by(|a, b| b.cmp(a));
        let n = self.adj.len();
        let mut idx = vec![OPEN; n];
        let mut entry = vec![0usize; n];
        let mut used: BTreeSet<Half> = BTreeSet::new();
        let mut tokens = Vec::new();
        let mut counter = 0;
        for (_, start) in comps {
            tokens.push(Token::Component);
            let mut stack: Vec<Half> = vec![(start, 0)];
            while let Some((v, s)) = stack.pop() {
                if v == OPEN {
                    tokens.push(Token::Seen);
                    continue;
                }
                if idx[v] != OPEN {
                    let rel = (s + self.adj[v].len() - entry[v]) % self.adj[v].len();
                    tokens.push(Token::Back(idx[v], rel));
                    continue;
                }
                idx[v] = counter;
                counter += 1;
                entry[v] = s;
                match self.label[v] {
                    Some(l) => tokens.push(Token::Leaf(l)),
                    None => tokens.push(Token::Node(self.is_marked(v))),
                }
                let deg = self.adj[v].len();
                let order: Vec<usize> =
                    if v == start { (0..deg).collect() } else { (1..deg).map(|r| (s + r) % deg).collect() };
                let mut pending = Vec::new();
                for slot in order {
                    if used.contains(&(v, slot)) {
                        pending.push(None);
                        continue;
                    }
                    let h = self.adj[v][slot];
                    used.insert((v, slot));
                    used.insert(h);
                    pending.push(Some(h));
                }
                for p in pending.into_iter().rev() {
                    stack.push(p.unwrap_or((OPEN, 0)));
                }
            }
        }
        GraphKey(tokens)
    }

    /// Copy with nodes in `remove` dropped; half-edges towards removed nodes
    /// are left open. Returns the old-to-new index map.
    fn without(&self, remove: &[usize]) -> (UniTriGraph, Vec<usize>) {
        let n = self.adj.len();
        let mut map = vec![OPEN; n];
        let mut next = 0;
        for (v, m) in map.iter_mut().enumerate() {
            if !remove.contains(&v) {
                *m = next;
                next += 1;
            }
        }
        let mut g = UniTriGraph::new();
        for v in 0..n {
            if map[v] == OPEN {
                continue;
            }
            let slots = self.adj[v]
                .iter()
                .map(|&(w, t)| if w == OPEN || map[w] == OPEN { (OPEN, 0) } else { (map[w], t) })
                .collect();
            g.adj.push(slots);
            g.label.push(self.label[v]);
        }
        g.marks = match self.marks {
            Some((a, b)) if map[a] != OPEN && map[b] != OPEN => Some((map[a], map[b])),
            _ => None,
        };
        (g, map)
    }

    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> UniTriGraph {
        let mut g = self.clone();
        for l in g.label.iter_mut().flatten() {
            *l = f(*l);
        }
        g
    }

    /// Reverse the cyclic order at a trivalent node.
    pub fn flip(&self, v: usize) -> UniTriGraph {
        assert!(!self.is_leaf(v), "flip needs a trivalent node");
        let mut g = self.clone();
        let (h1, h2) = (self.adj[v][1], self.adj[v][2]);
        let fix = |h: Half| -> Half {
            if h == (v, 1) {
                (v, 2)
            } else if h == (v, 2) {
                (v, 1)
            } else {
                h
            }
        };
        let (h1, h2) = (fix(h1), fix(h2));
        g.adj[v][1] = h2;
        g.adj[v][2] = h1;
        g.adj[h2.0][h2.1] = (v, 1);
        g.adj[h1.0][h1.1] = (v, 2);
        g
    }

    /// The two graphs of the IHX relation at the edge leaving `v` through
    /// `slot`: the relation reads `G - G' + G''`.
    pub fn ihx(&self, v: usize, slot: usize) -> Result<(UniTriGraph, UniTriGraph), GraphError> {
        let (w, t) = self.adj[v][slot];
        if self.is_leaf(v) || w == OPEN || self.is_leaf(w) || w == v {
            return Err(GraphError::DegenerateEdge(v, slot));
        }
        let ev1 = (v, (slot + 1) % 3);
        let ev2 = (v, (slot + 2) % 3);
        let ew1 = (w, (t + 1) % 3);
        let ew2 = (w, (t + 2) % 3);
        let first = [(ev1, (w, 2)), (ev2, (v, 1)), (ew1, (v, 2)), (ew2, (w, 1))];
        let second = [(ev1, (w, 2)), (ev2, (v, 1)), (ew1, (w, 1)), (ew2, (v, 2))];
        Ok((self.rewire(v, w, &first), self.rewire(v, w, &second)))
    }

    fn rewire(&self, v: usize, w: usize, place: &[(Half, Half); 4]) -> UniTriGraph {
        let pos = |h: Half| place.iter().find(|(old, _)| *old == h).map(|(_, new)| *new);
        let mut g = self.clone();
        g.adj[v] = vec![(OPEN, 0); 3];
        g.adj[w] = vec![(OPEN, 0); 3];
        g.connect((v, 0), (w, 0));
        for &(old, new) in place {
            let partner = self.adj[old.0][old.1];
            let target = pos(partner).unwrap_or(partner);
            g.connect(new, target);
        }
        g
    }

    /// The two graphs of the STU relation at leaf `n`: the relation reads
    /// `G = G' - G''`. Labels above `n` move up by one; marks are dropped.
    pub fn stu(&self, n: u32) -> Result<(UniTriGraph, UniTriGraph), GraphError> {
        let l = self.leaf(n)?;
        let (v, s) = self.leaf_anchor(n)?;
        let e1 = self.adj[v][(s + 1) % 3];
        let e2 = self.adj[v][(s + 2) % 3];
        if e1.0 == v || e1.0 == l || e2.0 == l {
            return Err(GraphError::DegenerateLeaf(n));
        }
        let build = |at_n: Half, at_n1: Half| -> UniTriGraph {
            let (mut g, map) = self.without(&[l, v]);
            g.marks = None;
            for lab in g.label.iter_mut().flatten() {
                if *lab > n {
                    *lab += 1;
                }
            }
            let a = g.add_leaf(n);
            let b = g.add_leaf(n + 1);
            g.connect((a, 0), (map[at_n.0], at_n.1));
            g.connect((b, 0), (map[at_n1.0], at_n1.1));
            g
        };
        Ok((build(e2, e1), build(e1, e2)))
    }

    /// Tree as a planar tree rooted at leaf `root`.
    pub fn to_planar(&self, root: u32) -> Result<Planar, GraphError> {
        let r = self.leaf(root)?;
        let (v, s) = self.adj[r][0];
        self.planar_from(v, s, 0)
    }

    fn planar_from(&self, v: usize, s: usize, depth: usize) -> Result<Planar, GraphError> {
        if depth > self.adj.len() {
            return Err(GraphError::Invalid("cycle reached while reading a tree".into()));
        }
        if let Some(l) = self.label[v] {
            return Ok(Planar::Leaf(l));
        }
        let (a, sa) = self.adj[v][(s + 1) % 3];
        let (b, sb) = self.adj[v][(s + 2) % 3];
        Ok(Planar::node(self.planar_from(a, sa, depth + 1)?, self.planar_from(b, sb, depth + 1)?))
    }

    /// Tree from a planar tree hung below a new leaf `root`; every internal
    /// node gets the cyclic order (parent, left, right).
    pub fn from_planar(root: u32, t: &Planar) -> UniTriGraph {
        let mut g = UniTriGraph::new();
        let r = g.add_leaf(root);
        let h = g.attach_planar(t);
        g.connect((r, 0), h);
        g
    }

    /// Adds the planar tree and returns the open half-edge at its top.
    pub fn attach_planar(&mut self, t: &Planar) -> Half {
        match t {
            Planar::Leaf(l) => (self.add_leaf(*l), 0),
            Planar::Node(a, b) => {
                let v = self.add_node();
                let ha = self.attach_planar(a);
                let hb = self.attach_planar(b);
                self.connect((v, 1), ha);
                self.connect((v, 2), hb);
                (v, 0)
            }
        }
    }

    /// Join two leaves into one edge, removing both.
    pub fn glue_leaves(&self, a: u32, b: u32) -> Result<UniTriGraph, GraphError> {
        let la = self.leaf(a)?;
        let lb = self.leaf(b)?;
        let ha = self.adj[la][0];
        let hb = self.adj[lb][0];
        if ha.0 == lb {
            return Err(GraphError::Invalid("gluing the two ends of one edge".into()));
        }
        let (mut g, map) = self.without(&[la, lb]);
        g.connect((map[ha.0], ha.1), (map[hb.0], hb.1));
        Ok(g)
    }

    /// Disjoint union; returns the index offset of the second graph.
    pub fn disjoint_union(&self, other: &UniTriGraph) -> (UniTriGraph, usize) {
        let off = self.adj.len();
        let mut g = self.clone();
        for (slots, lab) in other.adj.iter().zip(&other.label) {
            g.adj.push(slots.iter().map(|&(w, t)| if w == OPEN { (OPEN, 0) } else { (w + off, t) }).collect());
            g.label.push(*lab);
        }
        (g, off)
    }

    /// Replace leaf `label` by an open half-edge at its anchor; returns that
    /// half-edge (in the new indexing) and the graph.
    pub fn cut_leaf(&self, label: u32) -> Result<(UniTriGraph, Half), GraphError> {
        let l = self.leaf(label)?;
        let h = self.adj[l][0];
        let (g, map) = self.without(&[l]);
        Ok((g, (map[h.0], h.1)))
    }

    pub fn remove_nodes(&self, nodes: &[usize]) -> (UniTriGraph, Vec<usize>) {
        self.without(nodes)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{name}\" {{");
        let _ = writeln!(s, "  node [shape=point];");
        let mut leaves: Vec<(u32, usize)> = (0..self.adj.len()).filter_map(|v| self.label[v].map(|l| (l, v))).collect();
        leaves.sort();
        for (l, v) in &leaves {
            let _ = writeln!(s, "  n{v} [shape=plaintext, label=\"{l}\"];");
        }
        for v in self.trivalent_nodes() {
            let style = if self.is_marked(v) { "shape=circle, style=filled, fillcolor=black, width=0.12" } else { "" };
            let _ = writeln!(s, "  n{v} [{style}{}xlabel=\"{v}\"];", if style.is_empty() { "" } else { ", " });
        }
        let rank: Vec<String> = leaves.iter().map(|(_, v)| format!("n{v}")).collect();
        let _ = writeln!(s, "  {{ rank=same; {} }}", rank.join("; "));
        for i in 0..leaves.len().saturating_sub(1) {
            let _ = writeln!(s, "  n{} -- n{} [style=invis];", leaves[i].1, leaves[i + 1].1);
        }
        for (v, slots) in self.adj.iter().enumerate() {
            for (k, &(w, t)) in slots.iter().enumerate() {
                if w != OPEN && (v, k) < (w, t) {
                    let _ = writeln!(s, "  n{v} -- n{w} [taillabel=\"{k}\", headlabel=\"{t}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// All labelled trees of degree `d` (leaves `1..=d+1`), sorted by key.
pub fn enumerate_trees(d: usize) -> Vec<UniTriGraph> {
    assert!(d >= 1, "tree degree starts at 1");
    let labels: Vec<u32> = (1..=d as u32).collect();
    let mut out: Vec<UniTriGraph> =
        all_planar(&labels).iter().map(|t| UniTriGraph::from_planar(d as u32 + 1, t)).collect();
    out.sort_by_cached_key(|g| g.canonical_key());
    out
}

/// All connected one-loop graphs with `leaves` labelled leaves, obtained by
/// gluing the two highest leaves of every tree with `leaves + 2` leaves.
pub fn enumerate_one_loop(leaves: usize) -> Vec<UniTriGraph> {
    let n = leaves as u32;
    let mut seen: BTreeMap<GraphKey, UniTriGraph> = BTreeMap::new();
    for t in enumerate_trees(leaves + 1) {
        if let Ok(g) = t.glue_leaves(n + 1, n + 2) {
            if g.shape() == Shape::OneLoop {
                seen.entry(g.canonical_key()).or_insert(g);
            }
        }
    }
    seen.into_values().collect()
}

/// All `(k, top)`-marked graphs with `top` leaves, `1 <= k < top`.
pub fn enumerate_marked(top: usize) -> Vec<UniTriGraph> {
    let top = top as u32;
    let mut out: BTreeMap<GraphKey, UniTriGraph> = BTreeMap::new();
    for g in enumerate_one_loop(top as usize) {
        let cyc = g.cycle_nodes();
        let Ok((vj, _)) = g.leaf_anchor(top) else {
            continue;
        };
        for k in 1..top {
            let Ok((vk, _)) = g.leaf_anchor(k) else {
                continue;
            };
            if vk != vj && cyc.contains(&vk) && cyc.contains(&vj) {
                let mut m = g.clone();
                m.set_marks(Some((vk, vj)));
                out.entry(m.canonical_key()).or_insert(m);
            }
        }
    }
    out.into_values().collect()
}

/// The `k` of a `(k, top)`-marked graph.
pub fn marked_k(g: &UniTriGraph) -> Option<u32> {
    let (vk, _) = g.marks()?;
    g.adj[vk].iter().find_map(|&(w, _)| g.label_of(w))
}

/// An ordered generator list with key lookup.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub graphs: Vec<UniTriGraph>,
    index: HashMap<GraphKey, usize>,
}

impl GeneratorSet {
    pub fn new(graphs: Vec<UniTriGraph>) -> Self {
        let index = graphs.iter().enumerate().map(|(i, g)| (g.canonical_key(), i)).collect();
        GeneratorSet { graphs, index }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn position(&self, g: &UniTriGraph) -> Result<usize, GraphError> {
        self.index
            .get(&g.canonical_key())
            .copied()
            .ok_or_else(|| GraphError::MissingGenerator(format!("{:?}", g.canonical_key())))
    }

    /// `sum c_i g_i` as a sparse vector.
    pub fn vector(&self, terms: &[(i64, &UniTriGraph)]) -> Result<SparseVec, GraphError> {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, g) in terms {
            *acc.entry(self.position(g)?).or_default() += *c;
        }
        Ok(acc.into_iter().filter(|(_, c)| *c != BigInt::from(0)).collect())
    }

    pub fn combo_vector(&self, terms: &[(BigInt, UniTriGraph)]) -> Result<SparseVec, GraphError> {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, g) in terms {
            *acc.entry(self.position(g)?).or_default() += c;
        }
        Ok(acc.into_iter().filter(|(_, c)| *c != BigInt::from(0)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationKind {
    As,
    Ihx,
    IhxSep,
}

/// AS: `g + flip(g)` per trivalent node. IHX: `g - g' + g''` per edge between
/// trivalent nodes. IHXsep skips edges touching a marked node.
pub fn relation_vectors(gens: &GeneratorSet, kind: RelationKind) -> Result<Vec<SparseVec>, GraphError> {
    let mut out = Vec::new();
    for g in &gens.graphs {
        match kind {
            RelationKind::As => {
                for v in g.trivalent_nodes() {
                    let r = gens.vector(&[(1, g), (1, &g.flip(v))])?;
                    if !r.is_empty() {
                        out.push(r);
                    }
                }
            }
            RelationKind::Ihx | RelationKind::IhxSep => {
                for v in g.trivalent_nodes() {
                    for s in 0..3 {
                        let (w, t) = g.neighbor((v, s));
                        if g.is_leaf(w) || w == v || (w, t) < (v, s) {
                            continue;
                        }
                        if kind == RelationKind::IhxSep && (g.is_marked(v) || g.is_marked(w)) {
                            continue;
                        }
                        let (g1, g2) = g.ihx(v, s)?;
                        let r = gens.vector(&[(1, g), (-1, &g1), (1, &g2)])?;
                        if !r.is_empty() {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn quotient_group(gens: &GeneratorSet, kinds: &[RelationKind]) -> Result<GroupPresentation, GraphError> {
    let mut rels = Vec::new();
    for k in kinds {
        rels.extend(relation_vectors(gens, *k)?);
    }
    Ok(cokernel_of_relations(gens.len(), rels))
}

/// `G' - G''` from the STU relation at leaf `n`, as a vector over `gens`.
pub fn stu_vector(gens: &GeneratorSet, g: &UniTriGraph, n: u32) -> Result<SparseVec, GraphError> {
    let (a, b) = g.stu(n)?;
    gens.vector(&[(1, &a), (-1, &b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn tree_counts() {
        for d in 1..=5 {
            let t = enumerate_trees(d);
            assert_eq!(t.len(), fact(2 * d - 2) / fact(d - 1), "degree {d}");
            let keys: BTreeSet<GraphKey> = t.iter().map(|g| g.canonical_key()).collect();
            assert_eq!(keys.len(), t.len());
        }
    }

    #[test]
    fn small_quotients() {
        let t1 = GeneratorSet::new(enumerate_trees(1));
        assert_eq!(quotient_group(&t1, &[RelationKind::As, RelationKind::Ihx]).unwrap().describe(), "Z");
        let t2 = GeneratorSet::new(enumerate_trees(2));
        assert_eq!(t2.len(), 2);
        assert_eq!(quotient_group(&t2, &[RelationKind::As, RelationKind::Ihx]).unwrap().describe(), "Z");
    }

    #[test]
    fn flip_is_involution() {
        for g in enumerate_trees(3) {
            for v in g.trivalent_nodes() {
                let f = g.flip(v);
                assert_ne!(f.canonical_key(), g.canonical_key());
                assert_eq!(f.flip(v).canonical_key(), g.canonical_key());
            }
        }
    }

    #[test]
    fn planar_round_trip() {
        for g in enumerate_trees(4) {
            let p = g.to_planar(5).unwrap();
            assert_eq!(UniTriGraph::from_planar(5, &p).canonical_key(), g.canonical_key());
        }
    }

    #[test]
    fn marks_change_key() {
        let m = enumerate_marked(3);
        assert!(!m.is_empty());
        for g in &m {
            assert_eq!(g.validate().unwrap(), Shape::OneLoop);
            let mut u = g.clone();
            u.set_marks(None);
            assert_ne!(u.canonical_key(), g.canonical_key());
        }
    }

    #[test]
    fn stu_adds_a_leaf() {
        for g in enumerate_trees(3) {
            let (a, b) = g.stu(1).unwrap();
            assert_eq!(a.leaf_count(), g.leaf_count() + 1);
            assert_eq!(a.node_count(), g.node_count());
            assert_eq!(b.labels(), (1..=5).collect::<Vec<_>>());
        }
    }
}
