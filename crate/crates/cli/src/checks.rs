//! The verification suites behind `bkss verify` and the acceptance target.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, Result};
use bkss_core::bracket::{all_bracketings, Gen, HallNormalizer, LinearCombo, Term};
use bkss_core::correspondence::{
    antisymmetry_at, bracket_paths, d1_combinatorial, e2_diagonal, jacobi_at, marked_group, phi_d, phi_t, psi_d,
    psi_ext_combo, psi_t, tree_group, TreeSpace,
};
use bkss_core::cosimplicial::check_cosimplicial_identities;
use bkss_core::spectral::{
    d1_bruteforce, d1_low, d1_simplified, dsep_generators, e1_entry, separated_terms, top_generators, DsepElement,
};
use bkss_core::utg::{enumerate_trees, relation_vectors, GeneratorSet, RelationKind, UniTriGraph};
use bkss_core::zlinalg::Lattice;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub failures: Vec<String>,
}

impl Check {
    fn new(id: u8, name: &'static str) -> Self {
        Check { id, name, passed: true, detail: String::new(), failures: Vec::new() }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.passed = false;
        self.failures.push(msg.into());
    }

    fn finish(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {}: {}: {} ({})", self.id, status, self.name, self.detail)
    }
}

pub const SUITES: &[&str] = &["paper-fixed-points", "oracle", "correspondence", "ranks", "all"];

pub fn suite_ids(name: &str) -> Option<Vec<u8>> {
    match name {
        "paper-fixed-points" | "all" => Some((1..=10).collect()),
        "oracle" => Some(vec![2, 3, 10]),
        "correspondence" => Some(vec![6, 7, 9]),
        "ranks" => Some(vec![4, 5, 8]),
        _ => None,
    }
}

pub fn run(id: u8) -> Result<Check> {
    match id {
        1 => low_degree(),
        2 => oracle_equivalence(),
        3 => worked_example(),
        4 => rank_identities(),
        5 => superdiagonal(),
        6 => round_trips(),
        7 => relation_correspondence(),
        8 => second_page(),
        9 => cross_side(),
        10 => simplicial_identities(),
        _ => Err(anyhow!("no criterion {id}")),
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn parse(s: &str) -> Result<Term> {
    s.parse::<Term>().map_err(|e| anyhow!("{e}"))
}

fn combo(terms: &[(i64, &str)]) -> Result<LinearCombo> {
    let mut c = LinearCombo::zero();
    for (k, t) in terms {
        c.add_term(parse(t)?, BigInt::from(*k));
    }
    Ok(c)
}

pub fn low_degree() -> Result<Check> {
    let mut c = Check::new(1, "low-degree d1");
    let two = d1_low(2)?;
    let x12 = Term::x(1, 2);
    match two.images.as_slice() {
        [(src, img)] if *src == Term::Leaf(Gen::y(1)) => {
            let k = img.coeff(&x12);
            let unit = k == BigInt::from(1) || k == BigInt::from(-1);
            if img.len() != 1 || !unit {
                c.fail(format!("d1(y1) = {img}"));
            } else if two.target.basis != vec![x12.clone()] {
                c.fail("target of d1 at p = 2 is not Z<x(1,2)>");
            }
        }
        other => c.fail(format!("unexpected source at p = 2: {other:?}")),
    }
    let two_image = two.images.first().map(|(_, i)| i.to_string()).unwrap_or_default();
    let three = d1_low(3)?;
    for (src, img) in &three.images {
        if !img.is_zero() {
            c.fail(format!("d1({src}) = {img} at p = 3"));
        }
    }
    if three.images.len() != 1 || three.images[0].0 != Term::x(1, 2) {
        c.fail("source at p = 3 is not Z<x(1,2)>");
    }
    // The four nonzero coface pushes of x(1,2), in order.
    let pieces = [combo(&[(1, "x23")])?, combo(&[(1, "x13"), (1, "x23")])?, combo(&[(1, "x12"), (1, "x13")])?];
    let mut sum = LinearCombo::zero();
    sum.add(&pieces[0]);
    sum.sub(&pieces[1]);
    sum.add(&pieces[2]);
    sum.sub(&LinearCombo::term(Term::x(1, 2)));
    let brute = d1_bruteforce(&LinearCombo::term(Term::x(1, 2)), 3)?;
    if !sum.is_zero() || !brute.is_zero() {
        c.fail(format!("cancellation at p = 3 gives {brute}"));
    }
    Ok(c.finish(format!("p=2: d1(y1) = {two_image}, isomorphism up to sign; p=3: zero map")))
}

pub fn oracle_equivalence() -> Result<Check> {
    let mut c = Check::new(2, "oracle equivalence");
    let mut counts = Vec::new();
    for p in 4..=6 {
        let gens = dsep_generators(p)?;
        let bad: Vec<String> = gens
            .par_iter()
            .map(|w| -> Result<Option<String>> {
                let brute = d1_bruteforce(&LinearCombo::term(w.term.clone()), p)?;
                let simple = d1_simplified(w)?.total();
                Ok((brute != simple).then(|| format!("p={p} {}: {brute} vs {simple}", w.term)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for b in bad {
            c.fail(b);
        }
        counts.push(format!("p={p}: {}", gens.len()));
    }
    Ok(c.finish(format!("generators checked {}", counts.join(", "))))
}

pub const WORKED_EXAMPLE: &str = "[[[x37,x27],x57],[[x17,x27],[x47,x67]]]";

pub fn worked_example() -> Result<Check> {
    let mut c = Check::new(3, "worked example at p = 8");
    let w = DsepElement::new(parse(WORKED_EXAMPLE)?, 8)?;
    let d = d1_simplified(&w)?;
    let at_k =
        combo(&[(1, "[[[x48,x28],x68],[[x18,x38],[x58,x78]]]"), (1, "[[[x48,x38],x68],[[x18,x28],[x58,x78]]]")])?;
    let at_top =
        combo(&[(-1, "[[[x37,x27],x57],[[x18,x28],[x48,x68]]]"), (-1, "[[[x38,x28],x58],[[x17,x27],[x47,x67]]]")])?;
    if w.k != 2 {
        c.fail(format!("repeated index is {} instead of 2", w.k));
    }
    if d.at_k != at_k {
        c.fail(format!("d^k gives {}", d.at_k));
    }
    if d.at_top != at_top {
        c.fail(format!("d^(p-1) gives {}", d.at_top));
    }
    Ok(c.finish(crate::report::join_signed(&d.at_k.to_string(), &d.at_top.to_string())))
}

pub fn rank_identities() -> Result<Check> {
    let mut c = Check::new(4, "rank identities");
    let mut seen = Vec::new();
    for p in 3..=6u32 {
        let expect = factorial(p as usize - 2);
        let hall = e1_entry(p, p).free_rank();
        let trees = tree_group(p)?;
        if hall != expect || trees.free_rank != expect || !trees.invariant_factors.is_empty() {
            c.fail(format!("p={p}: Hall {hall}, trees {}, expected Z^{expect}", trees.describe()));
        }
        seen.push(format!("p={p}: {hall}/{}", trees.free_rank));
    }
    Ok(c.finish(format!("Hall/tree ranks {}", seen.join(", "))))
}

/// Witt's count of basic products of multidegree `alpha`.
pub fn witt(alpha: &[u32]) -> i64 {
    let n: u32 = alpha.iter().sum();
    if n == 0 {
        return 0;
    }
    let g = alpha.iter().fold(0, |a, &b| gcd(a, b));
    let mut total: i128 = 0;
    for d in (1..=g).filter(|d| g % d == 0) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let m = n / d;
        let mut multinomial: i128 = (1..=m as i128).product();
        for a in alpha {
            multinomial /= (1..=(a / d) as i128).product::<i128>();
        }
        total += mu as i128 * multinomial;
    }
    (total / n as i128) as i64
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            n /= f;
            if n.is_multiple_of(f) {
                return 0;
            }
            mu = -mu;
        }
        f += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn superdiagonal() -> Result<Check> {
    let mut c = Check::new(5, "superdiagonal structure");
    let mut seen = Vec::new();
    for p in 4..=6u32 {
        let e = e1_entry(p - 1, p);
        let t = e.torsion.len();
        if t != factorial(p as usize - 3) || e.group.invariant_factors.iter().any(|d| *d != BigInt::from(2)) {
            c.fail(format!("p={p}: {t} torsion symbols, group {}", e.group.describe()));
        }
        let gens = top_generators(p - 1);
        let mut by_degree: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for b in &e.basis {
            *by_degree.entry(b.multidegree_over(&gens)).or_default() += 1;
        }
        let mut expected_total = 0;
        for r in 0..gens.len() {
            let mut alpha = vec![1u32; gens.len()];
            alpha[r] = 2;
            let want = witt(&alpha);
            expected_total += want;
            let got = by_degree.get(&alpha).copied().unwrap_or(0);
            if got != want {
                c.fail(format!("p={p}: multidegree {alpha:?} has {got} basis elements, expected {want}"));
            }
        }
        if by_degree.values().sum::<i64>() != expected_total {
            c.fail(format!("p={p}: basis has elements outside the repeated multidegrees"));
        }
        seen.push(format!("p={p}: |T|={t}, |F|={}", e.basis.len()));
    }
    let hand = [parse("[x13,[x13,x23]]")?, parse("[x23,[x13,x23]]")?];
    let basis = e1_entry(3, 4).basis;
    let mut norm = HallNormalizer::new(top_generators(3));
    let mut hits = BTreeSet::new();
    for h in &hand {
        let n = norm.normalize(h)?;
        match n.iter().collect::<Vec<_>>().as_slice() {
            [(t, k)] if (**k == BigInt::from(1) || **k == BigInt::from(-1)) && basis.contains(t) => {
                hits.insert((*t).clone());
            }
            _ => c.fail(format!("{h} normalizes to {n}")),
        }
    }
    if hits.len() != 2 || basis.len() != 2 {
        c.fail(format!("p=4 F basis is {basis:?}"));
    }
    Ok(c.finish(seen.join(", ")))
}

pub fn round_trips() -> Result<Check> {
    let mut c = Check::new(6, "bijection round trips");
    let mut trees = 0;
    for d in 1..=5u32 {
        let labels: Vec<Gen> = (1..=d).map(|i| Gen::x(i, d + 1)).collect();
        for t in all_bracketings(&labels) {
            let s = psi_t(&t)?;
            let (s2, back) = phi_t(&s.graph)?;
            if back != t || s.sign * s2 != 1 {
                c.fail(format!("tree round trip on {t}"));
            }
            trees += 1;
        }
        for g in enumerate_trees(d as usize) {
            let (s, t) = phi_t(&g)?;
            let again = psi_t(&t)?;
            if again.graph.canonical_key() != g.canonical_key() || again.sign != s {
                c.fail(format!("tree round trip on the graph of {t}"));
            }
            trees += 1;
        }
    }
    let mut marked = 0;
    for p in 4..=6 {
        for w in separated_terms(p)? {
            let g = psi_d(&w)?;
            let (s, back) = phi_d(&g.graph)?;
            if back.term != w.term || s * g.sign != 1 {
                c.fail(format!("marked round trip on {}", w.term));
            }
            marked += 1;
        }
    }
    Ok(c.finish(format!("{trees} tree cases, {marked} marked cases")))
}

fn random_bracketing(labels: &mut [Gen], rng: &mut StdRng) -> Term {
    if labels.len() == 1 {
        return Term::Leaf(labels[0]);
    }
    let cut = rng.gen_range(1..labels.len());
    let (a, b) = labels.split_at_mut(cut);
    Term::br(random_bracketing(a, rng), random_bracketing(b, rng))
}

fn in_span(lat: &Lattice, gens: &GeneratorSet, terms: &[(BigInt, UniTriGraph)]) -> Result<bool> {
    Ok(lat.contains(&gens.combo_vector(terms)?)?)
}

pub fn relation_correspondence() -> Result<Check> {
    let mut c = Check::new(7, "relation correspondence");
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut antisym, mut jacobi) = (0, 0);
    for d in 2..=5u32 {
        let gens = GeneratorSet::new(enumerate_trees(d as usize));
        let as_only = Lattice::from_vectors(gens.len(), relation_vectors(&gens, RelationKind::As)?)?;
        let mut full = as_only.clone();
        for v in relation_vectors(&gens, RelationKind::Ihx)? {
            full.insert(v)?;
        }
        for _ in 0..100 {
            let mut labels: Vec<Gen> = (1..=d).map(|i| Gen::x(i, d + 1)).collect();
            labels.shuffle(&mut rng);
            let t = random_bracketing(&mut labels, &mut rng);
            let paths = bracket_paths(&t);
            let path = paths.choose(&mut rng).expect("degree >= 2 has a bracket").clone();
            let st = psi_t(&t)?;
            let (s, u) = antisymmetry_at(&t, &path);
            let su = psi_t(&u)?;
            let terms = [(BigInt::from(st.sign), st.graph.clone()), (BigInt::from(-s * su.sign), su.graph)];
            if !in_span(&as_only, &gens, &terms)? {
                c.fail(format!("antisymmetry of {t} at {path:?} is not AS"));
            }
            antisym += 1;
            let jpaths: Vec<_> = paths.iter().filter(|q| jacobi_at(&t, q).is_some()).collect();
            if let Some(q) = jpaths.choose(&mut rng) {
                let tr = jacobi_at(&t, q).expect("filtered");
                let terms = tr
                    .iter()
                    .map(|(k, x)| psi_t(x).map(|s| (BigInt::from(k * s.sign), s.graph)))
                    .collect::<Result<Vec<_>, _>>()?;
                if !in_span(&full, &gens, &terms)? {
                    c.fail(format!("Jacobi of {t} at {q:?} is not in AS + IHX"));
                }
                jacobi += 1;
            }
        }
    }
    let mut separated = 0;
    for p in 4..=5 {
        let (gens, _) = marked_group(p)?;
        let mut lat = Lattice::from_vectors(gens.len(), relation_vectors(&gens, RelationKind::As)?)?;
        for v in relation_vectors(&gens, RelationKind::IhxSep)? {
            lat.insert(v)?;
        }
        let signed = |k: i32, t: &Term| -> Result<(BigInt, UniTriGraph)> {
            let s = psi_d(&DsepElement::new(t.clone(), p)?)?;
            Ok((BigInt::from(k * s.sign), s.graph))
        };
        for w in separated_terms(p)? {
            for path in bracket_paths(&w.term) {
                let (s, u) = antisymmetry_at(&w.term, &path);
                if !in_span(&lat, &gens, &[signed(1, &w.term)?, signed(-s, &u)?])? {
                    c.fail(format!("p={p}: antisymmetry of {} at {path:?} is not AS", w.term));
                }
                separated += 1;
                if path.is_empty() {
                    continue;
                }
                if let Some(tr) = jacobi_at(&w.term, &path) {
                    let terms = tr.iter().map(|(k, t)| signed(*k, t)).collect::<Result<Vec<_>>>()?;
                    if !in_span(&lat, &gens, &terms)? {
                        c.fail(format!("p={p}: Jacobi of {} at {path:?} is not in AS + IHXsep", w.term));
                    }
                    separated += 1;
                }
            }
        }
    }
    Ok(c.finish(format!(
        "{antisym} antisymmetry, {jacobi} Jacobi, {separated} separated antisymmetry and Jacobi cases"
    )))
}

pub fn second_page() -> Result<Check> {
    let mut c = Check::new(8, "second page on the diagonal");
    let mut seen = Vec::new();
    for p in 0..=5u32 {
        let e = e2_diagonal(p)?;
        let want_zero = p <= 2;
        let got = e.group.describe();
        if want_zero && !e.group.is_trivial() {
            c.fail(format!("p={p}: {got}, expected 0"));
        }
        if p == 3 && (e.group.free_rank != 1 || !e.group.invariant_factors.is_empty()) {
            c.fail(format!("p=3: {got}, expected Z"));
        }
        if p >= 4 {
            match &e.certificate {
                Some(cert) if cert.equal && cert.image_in_stu2 && cert.stu2_in_image => {}
                other => c.fail(format!("p={p}: certificate {other:?}")),
            }
        }
        seen.push(format!("p={p}: {got}"));
    }
    Ok(c.finish(seen.join(", ")))
}

pub fn cross_side() -> Result<Check> {
    let mut c = Check::new(9, "cross-side d1 agreement");
    let mut n = 0;
    for p in 4..=5 {
        let space = TreeSpace::new(p)?;
        let lat = space.lattice()?;
        for w in dsep_generators(p)? {
            let alg = psi_ext_combo(&d1_simplified(&w)?.total())?;
            let g = psi_d(&w)?;
            let comb = d1_combinatorial(&g.graph)?;
            let mut terms = alg.clone();
            for (k, t) in &comb {
                terms.push((-k * g.sign, t.clone()));
            }
            if !lat.contains(&space.vector(&terms)?)? {
                let show = |v: &[(BigInt, UniTriGraph)]| -> String {
                    v.iter()
                        .map(|(k, t)| match phi_t(t) {
                            Ok((s, x)) => format!("{}*{x}", k * s),
                            Err(_) => format!("{k}*<graph>"),
                        })
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                c.fail(format!("p={p} {}: algebraic {} vs combinatorial {}", w.term, show(&alg), show(&comb)));
            }
            n += 1;
        }
    }
    Ok(c.finish(format!("{n} generators at p=4,5")))
}

pub fn simplicial_identities() -> Result<Check> {
    let mut c = Check::new(10, "cosimplicial identities");
    let (count, failures) = check_cosimplicial_identities(7)?;
    for f in failures.iter().take(20) {
        c.fail(format!("{} on {} at level {}: {} vs {}", f.identity, f.generator, f.level, f.lhs, f.rhs));
    }
    if !failures.is_empty() {
        c.passed = false;
    }
    Ok(c.finish(format!("{count} identity instances through level 7, {} failures", failures.len())))
}
