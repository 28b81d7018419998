//! Homotopy of configuration spaces of points in `R^2 x D^1`: the classes
//! `x(i,j)`, their relations, and the wedge-of-spheres decomposition.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bracket::{enumerate_basic_products, BracketError, Gen, LinearCombo, MultidegreeFilter, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfError {
    #[error("x({0},{1}) is not a generator (indices must differ and lie in 1..={2})")]
    BadPair(u32, u32, u32),
    #[error("expected a bracket of two generators sharing one index, got {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// Generators of `pi_2` of the configuration space of `n` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfContext {
    pub n: u32,
}

impl ConfContext {
    pub fn new(n: u32) -> Self {
        ConfContext { n }
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = (2..=self.n).flat_map(|j| (1..j).map(move |i| Gen::x(i, j))).collect();
        v.sort();
        v
    }

    /// Generators `x(i,j)`, `i < j`, of the j-th wedge summand.
    pub fn summand_generators(&self, j: u32) -> Vec<Gen> {
        (1..j).map(|i| Gen::x(i, j)).collect()
    }

    /// The largest second index among the leaves, which picks out the wedge
    /// summand a basic product belongs to.
    pub fn summand_index(t: &Term) -> Option<u32> {
        t.leaves()
            .iter()
            .filter_map(|g| match g {
                Gen::X(_, j) => Some(*j),
                Gen::Y(_) => None,
            })
            .max()
    }

    pub fn orient(&self, i: u32, j: u32) -> Result<(Gen, i32), ConfError> {
        orient_normalize(i, j, self.n)
    }
}

/// `x(i,j) = -x(j,i)`: the oriented generator and the sign relating it to
/// the requested one.
pub fn orient_normalize(i: u32, j: u32, n: u32) -> Result<(Gen, i32), ConfError> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(ConfError::BadPair(i, j, n));
    }
    Ok(if i < j { (Gen::X(i, j), 1) } else { (Gen::X(j, i), -1) })
}

/// True iff some bracket node of `t` has children with disjoint supports.
/// Tangent classes live on separate sphere factors, so a tangent leaf is
/// disjoint from everything except the same tangent class.
pub fn disjoint_support_vanishes(t: &Term) -> bool {
    node_vanishes(t).1
}

fn leaf_tokens(g: &Gen) -> Vec<(u8, u32)> {
    match *g {
        Gen::X(i, j) => vec![(0, i), (0, j)],
        Gen::Y(k) => vec![(1, k)],
    }
}

fn node_vanishes(t: &Term) -> (Vec<(u8, u32)>, bool) {
    match t {
        Term::Leaf(g) => {
            let mut s = leaf_tokens(g);
            s.sort();
            (s, false)
        }
        Term::Br(a, b) => {
            let (sa, va) = node_vanishes(a);
            let (sb, vb) = node_vanishes(b);
            let meet = sa.iter().any(|x| sb.binary_search(x).is_ok());
            let mut s = sa;
            s.extend(sb);
            s.sort();
            s.dedup();
            (s, va || vb || !meet)
        }
    }
}

/// The three equal forms `[x_ij, x_jk] = [x_ji, x_ik] = [x_ik, x_kj]` of a
/// bracket of two generators sharing one index, each rewritten over oriented
/// generators. The first form is the input itself.
pub fn triple_rewrite(t: &Term) -> Result<Vec<LinearCombo>, ConfError> {
    let bad = || ConfError::ShapeMismatch(t.to_string());
    let (Term::Leaf(Gen::X(a, b)), Term::Leaf(Gen::X(c, d))) = t.children().ok_or_else(bad)? else {
        return Err(bad());
    };
    let (a, b, c, d) = (*a, *b, *c, *d);
    let shared: Vec<u32> = [a, b].into_iter().filter(|x| *x == c || *x == d).collect();
    if shared.len() != 1 {
        return Err(bad());
    }
    let s = shared[0];
    let i = if a == s { b } else { a };
    let k = if c == s { d } else { c };
    let n = a.max(b).max(c).max(d);
    let (_, s1) = orient_normalize(i, s, n)?;
    let (_, s2) = orient_normalize(s, k, n)?;
    let outer = s1 * s2;
    let form = |p: (u32, u32), q: (u32, u32)| -> Result<LinearCombo, ConfError> {
        let (g, sg) = orient_normalize(p.0, p.1, n)?;
        let (h, sh) = orient_normalize(q.0, q.1, n)?;
        Ok(LinearCombo::scaled(Term::br(Term::Leaf(g), Term::Leaf(h)), outer * sg * sh))
    };
    Ok(vec![form((i, s), (s, k))?, form((s, i), (i, k))?, form((i, k), (k, s))?])
}

/// Only the three values the long-knot computation needs are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KnownGroup {
    Z,
    Z2,
    Formal,
}

/// The formal symbol `pi_q(S^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SphereGroup {
    pub q: usize,
    pub m: usize,
}

impl SphereGroup {
    pub fn evaluate(&self) -> KnownGroup {
        match (self.q, self.m) {
            (q, m) if q == m => KnownGroup::Z,
            (3, 2) => KnownGroup::Z,
            (q, m) if q == m + 1 && m >= 3 => KnownGroup::Z2,
            _ => KnownGroup::Formal,
        }
    }
}

impl fmt::Display for SphereGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.evaluate() {
            KnownGroup::Z => write!(f, "Z"),
            KnownGroup::Z2 => write!(f, "Z/2"),
            KnownGroup::Formal => write!(f, "pi_{}(S^{})", self.q, self.m),
        }
    }
}

/// `pi_q` of the configuration space of `n` points as a formal sum over
/// basic products of height at most `q-1` in each wedge summand.
pub fn pi_decomposition(n: u32, q: usize) -> Vec<(Term, SphereGroup)> {
    let ctx = ConfContext::new(n);
    let mut out = Vec::new();
    for j in 2..=n {
        let gens = ctx.summand_generators(j);
        for t in enumerate_basic_products(&gens, q.saturating_sub(1), &MultidegreeFilter::Any) {
            let m = t.height() + 1;
            out.push((t, SphereGroup { q, m }));
        }
    }
    out
}
