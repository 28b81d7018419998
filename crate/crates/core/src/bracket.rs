//! Iterated Whitehead brackets of degree-two classes, integer combinations
//! of them, and reduction to basic products (Hall basis).

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("generator {0} is not in the declared generator set")]
    UnknownGenerator(Gen),
    #[error("{0} has a component outside the span of basic products")]
    NotInHallSpan(String),
    #[error("cannot parse term: {0}")]
    Parse(String),
}

/// A degree-two homotopy class: `x(i,j)` with `i < j` from the configuration
/// space factor, or `y(k)` from the k-th tangent sphere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Gen {
    X(u32, u32),
    Y(u32),
}

impl Gen {
    /// Panics unless `1 <= i < j`.
    pub fn x(i: u32, j: u32) -> Gen {
        assert!(1 <= i && i < j, "x({i},{j}) is not oriented");
        Gen::X(i, j)
    }

    pub fn y(k: u32) -> Gen {
        assert!(k >= 1, "y({k}) out of range");
        Gen::Y(k)
    }

    fn order_key(&self) -> (u8, u32, u32) {
        match *self {
            Gen::X(i, j) => (0, j, i),
            Gen::Y(k) => (1, k, 0),
        }
    }
}

/// Configuration generators by `(j, i)`, then tangent generators by `k`.
impl Ord for Gen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::X(i, j) => write!(f, "x({i},{j})"),
            Gen::Y(k) => write!(f, "y({k})"),
        }
    }
}

/// A rooted binary tree with generator leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Leaf(Gen),
    Br(Box<Term>, Box<Term>),
}

impl Term {
    pub fn leaf(g: Gen) -> Term {
        Term::Leaf(g)
    }

    pub fn br(a: Term, b: Term) -> Term {
        Term::Br(Box::new(a), Box::new(b))
    }

    /// The generator `x(i,j)` as a term.
    pub fn x(i: u32, j: u32) -> Term {
        Term::Leaf(Gen::x(i, j))
    }

    pub fn weight(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Br(a, b) => a.weight() + b.weight(),
        }
    }

    /// Every generator has height one, so height equals weight.
    pub fn height(&self) -> usize {
        self.weight()
    }

    /// The class lives in `pi_{weight + 1}`.
    pub fn homotopy_dim(&self) -> usize {
        self.weight() + 1
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Leaf(_))
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Leaf(_) => None,
            Term::Br(a, b) => Some((a, b)),
        }
    }

    pub fn leaves(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Gen>) {
        match self {
            Term::Leaf(g) => out.push(*g),
            Term::Br(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Strand indices of configuration leaves.
    pub fn support(&self) -> BTreeSet<u32> {
        let mut s = BTreeSet::new();
        for g in self.leaves() {
            if let Gen::X(i, j) = g {
                s.insert(i);
                s.insert(j);
            }
        }
        s
    }

    /// Occurrence count of each generator, in generator order.
    pub fn multidegree(&self) -> BTreeMap<Gen, u32> {
        let mut m = BTreeMap::new();
        for g in self.leaves() {
            *m.entry(g).or_insert(0) += 1;
        }
        m
    }

    pub fn multidegree_over(&self, gens: &[Gen]) -> Vec<u32> {
        let m = self.multidegree();
        gens.iter().map(|g| m.get(g).copied().unwrap_or(0)).collect()
    }

    pub fn map_leaves(&self, f: &impl Fn(Gen) -> Gen) -> Term {
        match self {
            Term::Leaf(g) => Term::Leaf(f(*g)),
            Term::Br(a, b) => Term::br(a.map_leaves(f), b.map_leaves(f)),
        }
    }

    pub fn internal_nodes(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Br(a, b) => 1 + a.internal_nodes() + b.internal_nodes(),
        }
    }
}

/// Weight first, then lexicographic on `(left, right)`.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.weight().cmp(&other.weight()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Term::Leaf(a), Term::Leaf(b)) => a.cmp(b),
            (Term::Br(a1, b1), Term::Br(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Term::Leaf(_), Term::Br(..)) => Ordering::Less,
            (Term::Br(..), Term::Leaf(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(g) => write!(f, "{g}"),
            Term::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Term {
    type Err = BracketError;

    /// Accepts `x(1,3)`, `y(2)`, `x13` (single-digit indices) and nested `[a,b]`.
    fn from_str(s: &str) -> Result<Term, BracketError> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_term(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(BracketError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(t)
    }
}

fn parse_term(c: &[char], pos: &mut usize) -> Result<Term, BracketError> {
    let err = |m: &str| BracketError::Parse(m.to_string());
    match c.get(*pos) {
        Some('[') => {
            *pos += 1;
            let a = parse_term(c, pos)?;
            if c.get(*pos) != Some(&',') {
                return Err(err("expected ','"));
            }
            *pos += 1;
            let b = parse_term(c, pos)?;
            if c.get(*pos) != Some(&']') {
                return Err(err("expected ']'"));
            }
            *pos += 1;
            Ok(Term::br(a, b))
        }
        Some(&k) if k == 'x' || k == 'y' => {
            *pos += 1;
            let nums = if c.get(*pos) == Some(&'(') {
                *pos += 1;
                let start = *pos;
                while *pos < c.len() && c[*pos] != ')' {
                    *pos += 1;
                }
                if *pos == c.len() {
                    return Err(err("unclosed '('"));
                }
                let inner: String = c[start..*pos].iter().collect();
                *pos += 1;
                inner
                    .split(',')
                    .map(|x| x.parse::<u32>().map_err(|_| err("bad index")))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                let start = *pos;
                while *pos < c.len() && c[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                c[start..*pos].iter().map(|d| d.to_digit(10).unwrap()).collect()
            };
            match (k, nums.as_slice()) {
                ('x', [i, j]) if *i >= 1 && i < j => Ok(Term::Leaf(Gen::X(*i, *j))),
                ('y', [m]) if *m >= 1 => Ok(Term::Leaf(Gen::Y(*m))),
                _ => Err(err("malformed generator")),
            }
        }
        _ => Err(err("unexpected character")),
    }
}

/// `(-1)^((w1+1)(w2+1))`: the sign in `[a,b] = sign * [b,a]` for classes of
/// weights `w1`, `w2`.
pub fn swap_sign(w1: usize, w2: usize) -> i32 {
    if ((w1 + 1) * (w2 + 1)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn parity(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Finite integer combination of terms; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LinearCombo {
    terms: BTreeMap<Term, BigInt>,
}

impl LinearCombo {
    pub fn zero() -> Self {
        LinearCombo::default()
    }

    pub fn term(t: Term) -> Self {
        Self::scaled(t, BigInt::one())
    }

    pub fn scaled(t: Term, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(t, c.into());
        out
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(Term::Leaf(g))
    }

    pub fn add_term(&mut self, t: Term, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinearCombo, f: &BigInt) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * f);
        }
    }

    pub fn add(&mut self, other: &LinearCombo) {
        self.add_scaled(other, &BigInt::one());
    }

    pub fn sub(&mut self, other: &LinearCombo) {
        self.add_scaled(other, &BigInt::from(-1));
    }

    pub fn scale(&self, f: impl Into<BigInt>) -> LinearCombo {
        let f = f.into();
        let mut out = LinearCombo::zero();
        out.add_scaled(self, &f);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &Term) -> BigInt {
        self.terms.get(t).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &BigInt)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.keys()
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> LinearCombo {
        let mut out = LinearCombo::zero();
        for (t, c) in &self.terms {
            out.add_term(f(t), c.clone());
        }
        out
    }
}

impl FromIterator<(Term, BigInt)> for LinearCombo {
    fn from_iter<I: IntoIterator<Item = (Term, BigInt)>>(iter: I) -> Self {
        let mut out = LinearCombo::zero();
        for (t, c) in iter {
            out.add_term(t, c);
        }
        out
    }
}

impl fmt::Display for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A bracket expression whose leaves are combinations of terms.
#[derive(Clone, Debug)]
pub enum ComboTree {
    Leaf(LinearCombo),
    Br(Box<ComboTree>, Box<ComboTree>),
}

impl ComboTree {
    pub fn br(a: ComboTree, b: ComboTree) -> ComboTree {
        ComboTree::Br(Box::new(a), Box::new(b))
    }
}

/// Bracket two combinations bilinearly, skipping pairs rejected by `keep`.
pub fn bracket_combos(a: &LinearCombo, b: &LinearCombo, keep: impl Fn(&Term, &Term) -> bool) -> LinearCombo {
    let mut out = LinearCombo::zero();
    for (s, cs) in a.iter() {
        for (t, ct) in b.iter() {
            if keep(s, t) {
                out.add_term(Term::br(s.clone(), t.clone()), cs * ct);
            }
        }
    }
    out
}

/// Full multilinear expansion.
pub fn expand_bilinear(expr: &ComboTree) -> LinearCombo {
    match expr {
        ComboTree::Leaf(c) => c.clone(),
        ComboTree::Br(a, b) => bracket_combos(&expand_bilinear(a), &expand_bilinear(b), |_, _| true),
    }
}

fn is_square(t: &Term) -> bool {
    matches!(t, Term::Br(a, b) if a == b)
}

/// Hall condition for an ordered pair of basic products.
pub fn is_basic_pair(a: &Term, b: &Term) -> bool {
    if a >= b {
        return false;
    }
    match b {
        Term::Leaf(_) => true,
        Term::Br(c, _) => **c <= *a,
    }
}

pub fn is_basic(t: &Term) -> bool {
    match t {
        Term::Leaf(_) => true,
        Term::Br(a, b) => is_basic(a) && is_basic(b) && is_basic_pair(a, b),
    }
}

/// Rewrites terms into combinations of basic products using graded
/// antisymmetry and the graded Jacobi identity. Results are memoized per
/// instance.
pub struct HallNormalizer {
    gens: BTreeSet<Gen>,
    memo: HashMap<(Term, Term), LinearCombo>,
}

impl HallNormalizer {
    pub fn new(gens: impl IntoIterator<Item = Gen>) -> Self {
        HallNormalizer { gens: gens.into_iter().collect(), memo: HashMap::new() }
    }

    pub fn generators(&self) -> impl Iterator<Item = &Gen> {
        self.gens.iter()
    }

    pub fn normalize(&mut self, t: &Term) -> Result<LinearCombo, BracketError> {
        let raw = self.reduce(t)?;
        if let Some(bad) = raw.terms().find(|t| is_square(t)) {
            return Err(BracketError::NotInHallSpan(bad.to_string()));
        }
        Ok(raw)
    }

    pub fn normalize_combo(&mut self, c: &LinearCombo) -> Result<LinearCombo, BracketError> {
        let mut out = LinearCombo::zero();
        for (t, k) in c.iter() {
            out.add_scaled(&self.normalize(t)?, k);
        }
        Ok(out)
    }

    /// Reduction allowing squares `[u,u]` of odd-weight basic products as
    /// irreducible atoms.
    fn reduce(&mut self, t: &Term) -> Result<LinearCombo, BracketError> {
        match t {
            Term::Leaf(g) => {
                if !self.gens.contains(g) {
                    return Err(BracketError::UnknownGenerator(*g));
                }
                Ok(LinearCombo::term(t.clone()))
            }
            Term::Br(a, b) => {
                let ra = self.reduce(a)?;
                let rb = self.reduce(b)?;
                let mut out = LinearCombo::zero();
                for (u, cu) in ra.iter() {
                    for (v, cv) in rb.iter() {
                        let r = self.bracket_atoms(u, v)?;
                        out.add_scaled(&r, &(cu * cv));
                    }
                }
                Ok(out)
            }
        }
    }

    fn bracket_atoms(&mut self, x: &Term, y: &Term) -> Result<LinearCombo, BracketError> {
        if is_square(y) {
            // [z,[u,u]] = 2 (-1)^w(z) [u,[u,z]] for u of odd weight
            let (u, _) = y.children().unwrap();
            if u == x {
                // Jacobi only gives 3 [u,[u,u]] = 0.
                return Err(BracketError::NotInHallSpan(Term::br(x.clone(), y.clone()).to_string()));
            }
            let inner = self.bracket_atoms(u, x)?;
            let mut out = LinearCombo::zero();
            for (t, c) in inner.iter() {
                let r = self.bracket_atoms(u, t)?;
                out.add_scaled(&r, &(c * BigInt::from(2 * parity(x.weight()))));
            }
            return Ok(out);
        }
        if is_square(x) {
            let s = swap_sign(x.weight(), y.weight());
            return Ok(self.bracket_atoms(y, x)?.scale(s));
        }
        self.hall(x, y)
    }

    fn hall(&mut self, u: &Term, v: &Term) -> Result<LinearCombo, BracketError> {
        let key = (u.clone(), v.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let out = self.hall_uncached(u, v)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn hall_uncached(&mut self, u: &Term, v: &Term) -> Result<LinearCombo, BracketError> {
        match u.cmp(v) {
            Ordering::Equal => {
                if u.weight() % 2 == 1 {
                    Ok(LinearCombo::term(Term::br(u.clone(), u.clone())))
                } else {
                    Err(BracketError::NotInHallSpan(Term::br(u.clone(), v.clone()).to_string()))
                }
            }
            Ordering::Greater => Ok(self.hall(v, u)?.scale(swap_sign(u.weight(), v.weight()))),
            Ordering::Less => {
                let Term::Br(c, d) = v else {
                    return Ok(LinearCombo::term(Term::br(u.clone(), v.clone())));
                };
                if **c <= *u {
                    return Ok(LinearCombo::term(Term::br(u.clone(), v.clone())));
                }
                let (a, b, g) = (u.weight(), c.weight(), d.weight());
                let s0 = -parity(g * (a + 1));
                let mut out = LinearCombo::zero();
                // [u,[c,d]] = s0 ( (-1)^{a(b+1)} [c,[d,u]] + (-1)^{b(g+1)} [d,[u,c]] )
                let f1 = s0 * parity(a * (b + 1)) * swap_sign(g, a);
                for (t, k) in self.hall(u, d)?.iter() {
                    let r = self.bracket_atoms(c, t)?;
                    out.add_scaled(&r, &(k * BigInt::from(f1)));
                }
                let f2 = s0 * parity(b * (g + 1));
                for (t, k) in self.hall(u, c)?.iter() {
                    let r = self.bracket_atoms(d, t)?;
                    out.add_scaled(&r, &(k * BigInt::from(f2)));
                }
                Ok(out)
            }
        }
    }
}

/// One-shot normalization against a generator set.
pub fn normalize_to_hall(t: &Term, gens: &[Gen]) -> Result<LinearCombo, BracketError> {
    HallNormalizer::new(gens.iter().copied()).normalize(t)
}

/// Which multidegrees (over the sorted generator list) are wanted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultidegreeFilter {
    Any,
    Exactly(Vec<u32>),
    /// Every generator exactly once.
    EachOnce,
    /// One generator exactly twice, every other exactly once.
    OneTwice,
    /// Every generator at least once.
    AtLeastOnce,
}

impl MultidegreeFilter {
    fn admits_partial(&self, md: &[u32]) -> bool {
        match self {
            MultidegreeFilter::Any | MultidegreeFilter::AtLeastOnce => true,
            MultidegreeFilter::Exactly(t) => md.iter().zip(t).all(|(a, b)| a <= b),
            MultidegreeFilter::EachOnce => md.iter().all(|&a| a <= 1),
            MultidegreeFilter::OneTwice => md.iter().all(|&a| a <= 2) && md.iter().filter(|&&a| a == 2).count() <= 1,
        }
    }

    pub fn accepts(&self, md: &[u32]) -> bool {
        match self {
            MultidegreeFilter::Any => true,
            MultidegreeFilter::Exactly(t) => md == t.as_slice(),
            MultidegreeFilter::EachOnce => md.iter().all(|&a| a == 1),
            MultidegreeFilter::OneTwice => {
                md.iter().all(|&a| a == 1 || a == 2) && md.iter().filter(|&&a| a == 2).count() == 1
            }
            MultidegreeFilter::AtLeastOnce => md.iter().all(|&a| a >= 1),
        }
    }
}

/// All basic products over `gens` of weight at most `max_weight` whose
/// multidegree passes `filter`, in the basic-product order.
pub fn enumerate_basic_products(gens: &[Gen], max_weight: usize, filter: &MultidegreeFilter) -> Vec<Term> {
    let mut gens: Vec<Gen> = gens.to_vec();
    gens.sort();
    gens.dedup();
    let n = gens.len();
    let mut by_weight: Vec<Vec<(Term, Vec<u32>)>> = vec![Vec::new(); max_weight + 1];
    if max_weight >= 1 {
        for (i, g) in gens.iter().enumerate() {
            let mut md = vec![0; n];
            md[i] = 1;
            if filter.admits_partial(&md) {
                by_weight[1].push((Term::Leaf(*g), md));
            }
        }
    }
    for w in 2..=max_weight {
        let mut level = Vec::new();
        for wa in 1..=w / 2 {
            let wb = w - wa;
            for (a, ma) in &by_weight[wa] {
                for (b, mb) in &by_weight[wb] {
                    if !is_basic_pair(a, b) {
                        continue;
                    }
                    let md: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                    if filter.admits_partial(&md) {
                        level.push((Term::br(a.clone(), b.clone()), md));
                    }
                }
            }
        }
        level.sort_by(|x, y| x.0.cmp(&y.0));
        by_weight[w] = level;
    }
    by_weight.into_iter().flatten().filter(|(_, md)| filter.accepts(md)).map(|(t, _)| t).collect()
}

/// All bracketings (with leaf order) of the given distinct leaves.
pub fn all_bracketings(leaves: &[Gen]) -> Vec<Term> {
    if leaves.len() == 1 {
        return vec![Term::Leaf(leaves[0])];
    }
    let n = leaves.len();
    let mut out = Vec::new();
    for mask in 1..(1u32 << n) - 1 {
        let left: Vec<Gen> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| leaves[i]).collect();
        let right: Vec<Gen> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| leaves[i]).collect();
        let ls = all_bracketings(&left);
        let rs = all_bracketings(&right);
        for a in &ls {
            for b in &rs {
                out.push(Term::br(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Bracketings with the children of every node in increasing order; one
/// representative per antisymmetry class.
pub fn sorted_bracketings(leaves: &[Gen]) -> Vec<Term> {
    if leaves.len() == 1 {
        return vec![Term::Leaf(leaves[0])];
    }
    let n = leaves.len();
    let mut out = Vec::new();
    // the first leaf always goes left of the split to avoid repeats
    for mask in 0..(1u32 << (n - 1)) - 1 {
        let full = (mask << 1) | 1;
        let left: Vec<Gen> = (0..n).filter(|i| full >> i & 1 == 1).map(|i| leaves[i]).collect();
        let right: Vec<Gen> = (0..n).filter(|i| full >> i & 1 == 0).map(|i| leaves[i]).collect();
        let ls = sorted_bracketings(&left);
        let rs = sorted_bracketings(&right);
        for a in &ls {
            for b in &rs {
                let t = if a < b { Term::br(a.clone(), b.clone()) } else { Term::br(b.clone(), a.clone()) };
                out.push(t);
            }
        }
    }
    out.sort();
    out
}

/// Sort children at every node by antisymmetry; returns the sign picked up.
pub fn sort_children(t: &Term) -> (i32, Term) {
    match t {
        Term::Leaf(_) => (1, t.clone()),
        Term::Br(a, b) => {
            let (sa, a) = sort_children(a);
            let (sb, b) = sort_children(b);
            if a > b {
                let s = swap_sign(a.weight(), b.weight());
                (sa * sb * s, Term::br(b, a))
            } else {
                (sa * sb, Term::br(a, b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn swap_signs() {
        assert_eq!(swap_sign(1, 1), 1);
        assert_eq!(swap_sign(1, 2), 1);
        assert_eq!(swap_sign(2, 2), -1);
    }

    #[test]
    fn parse_and_render() {
        let s = "[x(1,3),[x(1,3),x(2,3)]]";
        assert_eq!(t(s).to_string(), s);
        assert_eq!(t("[x13,x23]"), t("[x(1,3),x(2,3)]"));
        assert!("[x31,x23]".parse::<Term>().is_err());
    }

    #[test]
    fn bilinear_expansion() {
        let mut a = LinearCombo::term(t("x12"));
        a.add(&LinearCombo::term(t("x13")));
        let e =
            expand_bilinear(&ComboTree::br(ComboTree::Leaf(a.clone()), ComboTree::Leaf(LinearCombo::term(t("x23")))));
        assert_eq!(e.to_string(), "[x(1,2),x(2,3)] + [x(1,3),x(2,3)]");
        let z = expand_bilinear(&ComboTree::br(ComboTree::Leaf(LinearCombo::zero()), ComboTree::Leaf(a.clone())));
        assert!(z.is_zero());
        let sq = expand_bilinear(&ComboTree::br(ComboTree::Leaf(a.clone()), ComboTree::Leaf(a)));
        assert_eq!(sq.len(), 4);
    }

    #[test]
    fn hall_small() {
        let gens = [Gen::x(1, 3), Gen::x(2, 3)];
        assert_eq!(normalize_to_hall(&t("[x23,x13]"), &gens).unwrap(), LinearCombo::term(t("[x13,x23]")));
        assert_eq!(normalize_to_hall(&t("[x13,x23]"), &gens).unwrap(), LinearCombo::term(t("[x13,x23]")));
        assert!(normalize_to_hall(&t("[x13,x13]"), &gens).is_err());
        assert!(normalize_to_hall(&t("[x12,x13]"), &gens).is_err());
        let r = normalize_to_hall(&t("[x23,[x13,x13]]"), &gens).unwrap();
        assert_eq!(r, LinearCombo::scaled(t("[x13,[x13,x23]]"), -2));
        assert!(normalize_to_hall(&t("[x13,[x13,x13]]"), &gens).is_err());
        assert!(normalize_to_hall(&t("[[x13,x13],x13]"), &gens).is_err());
    }

    #[test]
    fn generator_jacobi_vanishes() {
        let gens = [Gen::x(1, 4), Gen::x(2, 4), Gen::x(3, 4)];
        let mut n = HallNormalizer::new(gens);
        let mut sum = LinearCombo::zero();
        for s in ["[x14,[x24,x34]]", "[x24,[x34,x14]]", "[x34,[x14,x24]]"] {
            sum.add(&n.normalize(&t(s)).unwrap());
        }
        assert!(sum.is_zero(), "{sum}");
    }

    #[test]
    fn enumeration_examples() {
        let g2 = [Gen::x(1, 3), Gen::x(2, 3)];
        let one = enumerate_basic_products(&g2, 2, &MultidegreeFilter::EachOnce);
        assert_eq!(one, vec![t("[x13,x23]")]);
        let g3 = [Gen::x(1, 4), Gen::x(2, 4), Gen::x(3, 4)];
        assert_eq!(enumerate_basic_products(&g3, 3, &MultidegreeFilter::EachOnce).len(), 2);
        let f = enumerate_basic_products(&g2, 3, &MultidegreeFilter::OneTwice);
        assert_eq!(f, vec![t("[x13,[x13,x23]]"), t("[x23,[x13,x23]]")]);
    }

    #[test]
    fn bracketing_counts() {
        let g: Vec<Gen> = (1..=4).map(|i| Gen::x(i, 5)).collect();
        assert_eq!(all_bracketings(&g).len(), 120);
        assert_eq!(sorted_bracketings(&g).len(), 15);
    }
}
