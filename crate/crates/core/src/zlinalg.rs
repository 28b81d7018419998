//! Integer linear algebra: Smith and Hermite normal forms, cokernels of
//! relation matrices and subgroup comparison in `Z^n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("vector length {found} does not match ambient rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("column index {0} out of range")]
    ColumnOutOfRange(usize),
}

/// Dense matrix over the integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, x) in row.iter().enumerate() {
                m.data[r * cols + c] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * f;
            if !v.is_zero() {
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * f;
            if !v.is_zero() {
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, each
/// diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..d.rows {
        for c in t..d.cols {
            let x = d.get(r, c);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if d.get(br, bc).abs() <= x.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if d.get(r, t).is_zero() {
                    continue;
                }
                let q = -(d.get(r, t) / d.get(t, t));
                d.add_row(r, t, &q);
                u.add_row(r, t, &q);
                if !d.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if d.get(t, c).is_zero() {
                    continue;
                }
                let q = -(d.get(t, c) / d.get(t, t));
                d.add_col(c, t, &q);
                v.add_col(c, t, &q);
                if !d.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it to the pivot
                let mut best = (t, t);
                for r in t + 1..rows {
                    if !d.get(r, t).is_zero() && d.get(r, t).abs() < d.get(best.0, best.1).abs() {
                        best = (r, t);
                    }
                }
                for c in t + 1..cols {
                    if !d.get(t, c).is_zero() && d.get(t, c).abs() < d.get(best.0, best.1).abs() {
                        best = (t, c);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            let piv = d.get(t, t).clone();
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !d.get(r, c).is_multiple_of(&piv)));
            match bad {
                Some(r) => {
                    let one = BigInt::one();
                    d.add_row(t, r, &one);
                    u.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Snf { u, d, v }
}

/// Sparse integer vector: sorted `(column, value)` pairs with nonzero values.
pub type SparseVec = Vec<(usize, BigInt)>;

pub fn sparse_from_dense(v: &[BigInt]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_from_i64(pairs: &[(usize, i64)]) -> SparseVec {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for &(c, x) in pairs {
        *acc.entry(c).or_insert_with(BigInt::zero) += x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// a + f * b
fn axpy(a: &SparseVec, f: &BigInt, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale(a: &SparseVec, f: &BigInt) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(c, x)| (*c, x * f)).collect()
}

fn lin2(f: &BigInt, a: &SparseVec, g: &BigInt, b: &SparseVec) -> SparseVec {
    axpy(&scale(a, f), g, b)
}

fn entry(a: &SparseVec, c: usize) -> Option<&BigInt> {
    a.binary_search_by_key(&c, |e| e.0).ok().map(|i| &a[i].1)
}

/// A finitely generated abelian group `Z^generator_count / rowspan(relations)`.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relations: Vec<SparseVec>,
    /// Invariant factors greater than one, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    pub relation_rank: usize,
}

impl GroupPresentation {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Human readable form such as `Z^2 + Z/2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Isomorphism type of `Z^cols / rowspan(m)` for a dense matrix.
pub fn cokernel_invariants(m: &IntMatrix) -> GroupPresentation {
    let rows: Vec<SparseVec> = (0..m.rows()).map(|r| sparse_from_dense(m.row(r))).collect();
    cokernel_of_relations(m.cols(), rows)
}

/// Isomorphism type of `Z^n / span(relations)`.
///
/// Unit pivots are eliminated on the sparse rows first; whatever is left
/// goes through the dense Smith form.
pub fn cokernel_of_relations(n: usize, relations: Vec<SparseVec>) -> GroupPresentation {
    let kept = relations.clone();
    let mut rows: Vec<Option<SparseVec>> =
        relations.into_iter().map(|r| if r.is_empty() { None } else { Some(r) }).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in r {
                col_rows[*c].insert(i);
            }
        }
    }
    let mut units = 0usize;
    loop {
        // pick a unit entry, preferring short rows and sparse columns
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (c, x) in r {
                if x.abs().is_one() {
                    let cost = (r.len() - 1) * (col_rows[*c].len() - 1);
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((i, *c, cost));
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pi, pc, _)) = best else { break };
        let prow = rows[pi].take().unwrap();
        for (c, _) in &prow {
            col_rows[*c].remove(&pi);
        }
        let pval = entry(&prow, pc).unwrap().clone();
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for oi in others {
            let orow = rows[oi].take().unwrap();
            let f = -(entry(&orow, pc).unwrap() * &pval);
            let new = axpy(&orow, &f, &prow);
            for (c, _) in &orow {
                col_rows[*c].remove(&oi);
            }
            for (c, _) in &new {
                col_rows[*c].insert(oi);
            }
            if !new.is_empty() {
                rows[oi] = Some(new);
            }
        }
        units += 1;
    }
    let rest: Vec<SparseVec> = rows.into_iter().flatten().collect();
    let live: Vec<usize> = {
        let mut s = BTreeSet::new();
        for r in &rest {
            for (c, _) in r {
                s.insert(*c);
            }
        }
        s.into_iter().collect()
    };
    let mut invariant_factors = Vec::new();
    let mut rank = units;
    if !rest.is_empty() {
        let index: BTreeMap<usize, usize> = live.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut dense = IntMatrix::zeros(rest.len(), live.len());
        for (r, row) in rest.iter().enumerate() {
            for (c, x) in row {
                dense.set(r, index[c], x.clone());
            }
        }
        let snf = smith_normal_form(&dense);
        for d in snf.invariant_factors() {
            rank += 1;
            if !d.is_one() {
                invariant_factors.push(d);
            }
        }
    }
    GroupPresentation {
        generator_count: n,
        relations: kept,
        invariant_factors,
        free_rank: n - rank,
        relation_rank: rank,
    }
}

/// A subgroup of `Z^n` kept as a row echelon basis keyed by pivot column.
#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    basis: BTreeMap<usize, SparseVec>,
}

impl Lattice {
    pub fn new(n: usize) -> Self {
        Lattice { n, basis: BTreeMap::new() }
    }

    pub fn from_vectors(n: usize, vs: impl IntoIterator<Item = SparseVec>) -> Result<Self, LinalgError> {
        let mut l = Lattice::new(n);
        for v in vs {
            l.insert(v)?;
        }
        Ok(l)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn check(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.last() {
            Some((c, _)) if *c >= self.n => Err(LinalgError::ColumnOutOfRange(*c)),
            _ => Ok(()),
        }
    }

    pub fn insert(&mut self, v: SparseVec) -> Result<(), LinalgError> {
        self.check(&v)?;
        let mut r = v;
        while let Some((c, x)) = r.first().cloned() {
            let Some(b) = self.basis.get(&c) else {
                if x.is_negative() {
                    r = scale(&r, &BigInt::from(-1));
                }
                self.basis.insert(c, r);
                return Ok(());
            };
            let bx = b[0].1.clone();
            if x.is_multiple_of(&bx) {
                r = axpy(&r, &-(&x / &bx), b);
                continue;
            }
            let e = x.extended_gcd(&bx);
            // e.gcd = e.x * x + e.y * bx
            let newb = lin2(&e.y, b, &e.x, &r);
            let rest = lin2(&(&x / &e.gcd), b, &-(&bx / &e.gcd), &r);
            let newb = if newb[0].1.is_negative() { scale(&newb, &BigInt::from(-1)) } else { newb };
            self.basis.insert(c, newb);
            r = rest;
        }
        Ok(())
    }

    /// Reduce `v` against the basis; zero iff `v` lies in the lattice.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        let mut floor = 0usize;
        loop {
            let Some(pos) = r.iter().position(|(c, _)| *c >= floor) else {
                return r;
            };
            let (c, x) = r[pos].clone();
            match self.basis.get(&c) {
                Some(b) => {
                    let (q, _) = x.div_mod_floor(&b[0].1);
                    if !q.is_zero() {
                        r = axpy(&r, &-q, b);
                    }
                    floor = c + 1;
                }
                None => floor = c + 1,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        self.check(v)?;
        let mut r = v.clone();
        while let Some((c, x)) = r.first().cloned() {
            let Some(b) = self.basis.get(&c) else {
                return Ok(false);
            };
            if !x.is_multiple_of(&b[0].1) {
                return Ok(false);
            }
            r = axpy(&r, &-(&x / &b[0].1), b);
        }
        Ok(true)
    }

    /// Canonical Hermite normal form: positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`.
    pub fn hermite(&self) -> Vec<SparseVec> {
        let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&c, b) in self.basis.iter().rev() {
            let mut r = b.clone();
            for (&pc, pb) in &rows {
                if let Some(x) = entry(&r, pc) {
                    let (q, _) = x.div_mod_floor(&pb[0].1);
                    if !q.is_zero() {
                        r = axpy(&r, &-q, pb);
                    }
                }
            }
            rows.insert(c, r);
        }
        rows.into_values().collect()
    }
}

/// Hermite normal form of the subgroup generated by `vectors`.
pub fn hermite_normal_form(n: usize, vectors: &[SparseVec]) -> Result<Vec<SparseVec>, LinalgError> {
    Ok(Lattice::from_vectors(n, vectors.iter().cloned())?.hermite())
}

/// Whether two finite sets of vectors in `Z^n` generate the same subgroup.
pub fn subgroup_equal(gens_a: &[Vec<BigInt>], gens_b: &[Vec<BigInt>]) -> Result<bool, LinalgError> {
    let n = gens_a.first().or(gens_b.first()).map_or(0, |v| v.len());
    for v in gens_a.iter().chain(gens_b) {
        if v.len() != n {
            return Err(LinalgError::LengthMismatch { expected: n, found: v.len() });
        }
    }
    let a: Vec<SparseVec> = gens_a.iter().map(|v| sparse_from_dense(v)).collect();
    let b: Vec<SparseVec> = gens_b.iter().map(|v| sparse_from_dense(v)).collect();
    subgroup_equal_sparse(n, &a, &b)
}

pub fn subgroup_equal_sparse(n: usize, a: &[SparseVec], b: &[SparseVec]) -> Result<bool, LinalgError> {
    Ok(hermite_normal_form(n, a)? == hermite_normal_form(n, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small() {
        let m = IntMatrix::from_rows(2, &[vec![2i64, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d.diagonal(), bi(&[2, 4]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
    }

    #[test]
    fn snf_zero_and_empty() {
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(smith_normal_form(&z).d, z);
        let e = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&e);
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_invariants(&IntMatrix::zeros(0, 3));
        assert_eq!((g.free_rank, g.invariant_factors.len()), (3, 0));
        let g = cokernel_invariants(&IntMatrix::from_rows(1, &[vec![2i64]]));
        assert_eq!(g.describe(), "Z/2");
    }

    #[test]
    fn subgroup_examples() {
        assert!(subgroup_equal(&[bi(&[1, 0])], &[bi(&[-1, 0])]).unwrap());
        assert!(!subgroup_equal(&[bi(&[2, 0])], &[bi(&[1, 0])]).unwrap());
        assert!(subgroup_equal(&[bi(&[1, 1]), bi(&[0, 2])], &[bi(&[1, -1]), bi(&[0, 2])]).unwrap());
        assert!(subgroup_equal(&[bi(&[1, 1])], &[bi(&[1])]).is_err());
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_vectors(3, [sparse_from_i64(&[(0, 2), (1, 1)]), sparse_from_i64(&[(1, 3)])]).unwrap();
        assert!(l.contains(&sparse_from_i64(&[(0, 2), (1, 4)])).unwrap());
        assert!(!l.contains(&sparse_from_i64(&[(0, 1)])).unwrap());
        assert!(l.reduce(&sparse_from_i64(&[(0, 4), (1, 5)])).is_empty());
    }
}
