//! Serializable results for each subcommand plus their text rendering.

use std::fmt::Write as _;

use anyhow::Result;
use bkss_core::bracket::{LinearCombo, Term};
use bkss_core::correspondence::{dsep_group, e2_diagonal, marked_group, psi_ext_combo, Stu2Certificate, TreeSpace};
use bkss_core::cosimplicial::{push_combo, Direction};
use bkss_core::spectral::{d1_bruteforce, d1_low, d1_simplified, dsep_generators, e1_entry};
use bkss_core::utg::{enumerate_trees, quotient_group, GeneratorSet, RelationKind};
use bkss_core::zlinalg::{GroupPresentation, IntMatrix};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Group {
    pub description: String,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
}

impl From<&GroupPresentation> for Group {
    fn from(g: &GroupPresentation) -> Self {
        Group {
            description: g.describe(),
            free_rank: g.free_rank,
            invariant_factors: g.invariant_factors.iter().map(|d| d.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summand {
    pub term: String,
    pub group: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct E1Report {
    pub p: u32,
    pub q: u32,
    pub group: Group,
    pub basis: Vec<String>,
    pub torsion: Vec<Summand>,
    pub formal: Vec<Summand>,
}

pub fn e1(p: u32, q: u32) -> E1Report {
    let e = e1_entry(p, q);
    let summands = |v: &[(Term, bkss_core::config_space::SphereGroup)]| {
        v.iter().map(|(t, g)| Summand { term: t.to_string(), group: g.to_string() }).collect()
    };
    E1Report {
        p,
        q,
        group: Group::from(&e.group),
        basis: e.basis.iter().map(|t| t.to_string()).collect(),
        torsion: summands(&e.torsion),
        formal: summands(&e.formal),
    }
}

impl E1Report {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let mut head = self.group.description.clone();
        if !self.formal.is_empty() {
            head.push_str(&format!(" + {} formal summands", self.formal.len()));
        }
        let _ = writeln!(s, "E1({},{}) = {}", self.p, self.q, head);
        let _ = writeln!(s, "free rank: {}", self.group.free_rank);
        for t in &self.basis {
            let _ = writeln!(s, "  Z    {t}");
        }
        for t in &self.torsion {
            let _ = writeln!(s, "  {:<4} {}", t.group, t.term);
        }
        for t in &self.formal {
            let _ = writeln!(s, "  {} {}", t.group, t.term);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowImage {
    pub source: String,
    pub image: String,
    pub expansion: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatedImage {
    pub generator: String,
    pub k: u32,
    pub at_k: String,
    pub at_top: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    pub agree: bool,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mismatch {
    pub generator: String,
    pub alternating_sum: String,
    pub simplified: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct D1Report {
    pub p: u32,
    pub source: Group,
    pub target: Group,
    pub map: String,
    pub low: Vec<LowImage>,
    pub separated: Vec<SeparatedImage>,
    pub tree_rank: Option<usize>,
    pub oracle: Option<OracleResult>,
}

fn bracketed(c: &LinearCombo) -> String {
    if c.len() == 1 && c.iter().all(|(_, k)| *k == BigInt::from(1)) {
        c.to_string()
    } else {
        format!("({c})")
    }
}

/// `d0(x) - d1(x) + ...` written out term by term.
fn expansion(x: &Term, p: u32) -> Result<String> {
    let mut s = String::new();
    for l in 0..=p {
        let c = push_combo(Direction::coface(l, p - 1)?, &LinearCombo::term(x.clone()))?;
        let piece = if c.is_zero() { "0".to_string() } else { bracketed(&c) };
        match (l, l % 2) {
            (0, _) => s.push_str(&piece),
            (_, 0) => s.push_str(&format!(" + {piece}")),
            _ => s.push_str(&format!(" - {piece}")),
        }
    }
    let total = d1_bruteforce(&LinearCombo::term(x.clone()), p)?;
    s.push_str(&format!(" = {}", if total.is_zero() { "0".to_string() } else { total.to_string() }));
    Ok(s)
}

fn classify(m: &IntMatrix, rows: usize, cols: usize) -> String {
    if (0..rows).all(|r| m.row(r).iter().all(|x| *x == BigInt::from(0))) {
        return "zero".into();
    }
    if rows == cols && (m.determinant() == BigInt::from(1) || m.determinant() == BigInt::from(-1)) {
        return "isomorphism".into();
    }
    let snf = bkss_core::zlinalg::smith_normal_form(m);
    let rank = snf.d.diagonal().iter().filter(|x| **x != BigInt::from(0)).count();
    format!("rank {rank}")
}

pub fn d1(p: u32, oracle: bool) -> Result<D1Report> {
    let source = e1_entry(p - 1, p);
    let target = e1_entry(p, p);
    let mut report = D1Report {
        p,
        source: Group::from(&source.group),
        target: Group::from(&target.group),
        map: String::new(),
        low: Vec::new(),
        separated: Vec::new(),
        tree_rank: None,
        oracle: None,
    };
    if p <= 3 {
        let low = d1_low(p)?;
        let rows: Vec<Vec<BigInt>> =
            low.images.iter().map(|(_, img)| low.target.basis.iter().map(|b| img.coeff(b)).collect()).collect();
        let m = IntMatrix::from_rows(low.target.basis.len(), &rows);
        report.map = classify(&m, rows.len(), low.target.basis.len());
        for (src, img) in &low.images {
            report.low.push(LowImage {
                source: src.to_string(),
                image: if img.is_zero() { "0".into() } else { img.to_string() },
                expansion: expansion(src, p)?,
            });
        }
        return Ok(report);
    }
    let gens = dsep_generators(p)?;
    let parts: Vec<_> = gens.par_iter().map(|w| d1_simplified(w).map(|d| (w, d))).collect::<Result<_, _>>()?;
    let space = TreeSpace::new(p)?;
    let base = space.lattice()?;
    let mut with_image = base.clone();
    for (w, d) in &parts {
        report.separated.push(SeparatedImage {
            generator: w.term.to_string(),
            k: w.k,
            at_k: d.at_k.to_string(),
            at_top: d.at_top.to_string(),
        });
        with_image.insert(space.vector(&psi_ext_combo(&d.total())?)?)?;
    }
    let rank = with_image.rank() - base.rank();
    report.tree_rank = Some(rank);
    report.map = format!("rank {rank} in T_{}", p - 1);
    if oracle {
        let checked: Vec<Option<Mismatch>> = parts
            .par_iter()
            .map(|(w, d)| {
                let brute = d1_bruteforce(&LinearCombo::term(w.term.clone()), p)?;
                let simple = d.total();
                Ok(if brute == simple {
                    None
                } else {
                    Some(Mismatch {
                        generator: w.term.to_string(),
                        alternating_sum: brute.to_string(),
                        simplified: simple.to_string(),
                    })
                })
            })
            .collect::<Result<_>>()?;
        let mismatches: Vec<Mismatch> = checked.into_iter().flatten().collect();
        report.oracle = Some(OracleResult { agree: mismatches.is_empty(), checked: parts.len(), mismatches });
    }
    Ok(report)
}

pub fn join_signed(a: &str, b: &str) -> String {
    match (a, b) {
        ("0", _) => b.to_string(),
        (_, "0") => a.to_string(),
        _ => match b.strip_prefix('-') {
            Some(rest) => format!("{a} - {rest}"),
            None => format!("{a} + {b}"),
        },
    }
}

impl D1Report {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "d1: E1({},{}) = {} -> E1({},{}) = {}",
            self.p - 1,
            self.p,
            self.source.description,
            self.p,
            self.p,
            self.target.description
        );
        for l in &self.low {
            let _ = writeln!(s, "d1({}) = {}", l.source, l.image);
            let _ = writeln!(s, "  {}", l.expansion);
        }
        for g in &self.separated {
            let _ = writeln!(s, "d1({}) = {}", g.generator, join_signed(&g.at_k, &g.at_top));
        }
        let _ = writeln!(s, "map: {}", self.map);
        if let Some(o) = &self.oracle {
            if o.agree {
                let _ = writeln!(s, "oracle: agree on {} generators", o.checked);
            } else {
                let _ = writeln!(s, "oracle: DISAGREE on {} of {} generators", o.mismatches.len(), o.checked);
                for m in &o.mismatches {
                    let _ = writeln!(s, "  {}", m.generator);
                    let _ = writeln!(s, "    alternating sum: {}", m.alternating_sum);
                    let _ = writeln!(s, "    simplified:      {}", m.simplified);
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct E2Report {
    pub p: u32,
    pub group: Group,
    pub e2_invariant_factors: Vec<String>,
    pub tree_count: usize,
    pub d1_matrix_rank: usize,
    pub certificates: Option<Stu2Certificate>,
}

pub fn e2(p: u32) -> Result<E2Report> {
    let e = e2_diagonal(p)?;
    let group = Group::from(&e.group);
    Ok(E2Report {
        p,
        e2_invariant_factors: group.invariant_factors.clone(),
        group,
        tree_count: e.tree_count,
        d1_matrix_rank: e.d1_rank,
        certificates: e.certificate,
    })
}

impl E2Report {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "E2({},{}) = {}", self.p, self.p, self.group.description);
        if let Some(c) = &self.certificates {
            let _ = writeln!(s, "trees of degree {}: {}", self.p - 1, self.tree_count);
            let _ = writeln!(s, "rank of d1 modulo AS, IHX: {}", self.d1_matrix_rank);
            let _ = writeln!(s, "marked graphs: {}", c.marked_graphs);
            let _ = writeln!(s, "STU2 differences: {}", c.stu2_relations);
            let _ = writeln!(s, "image of d1 inside STU2 span: {}", c.image_in_stu2);
            let _ = writeln!(s, "STU2 span inside image of d1: {}", c.stu2_in_image);
            let _ = writeln!(s, "subgroups equal: {}", c.equal);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreesReport {
    pub degree: usize,
    pub generators: usize,
    pub modulo: Vec<String>,
    pub group: Group,
}

pub fn parse_relations(s: &str) -> Result<Vec<RelationKind>, String> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| match x.trim().to_ascii_lowercase().as_str() {
            "as" => Ok(RelationKind::As),
            "ihx" => Ok(RelationKind::Ihx),
            other => Err(format!("unknown relation '{other}' (expected as, ihx)")),
        })
        .collect()
}

pub fn trees(degree: usize, kinds: &[RelationKind]) -> Result<TreesReport> {
    let gens = GeneratorSet::new(enumerate_trees(degree));
    let q = quotient_group(&gens, kinds)?;
    Ok(TreesReport {
        degree,
        generators: gens.len(),
        modulo: kinds.iter().map(|k| format!("{k:?}").to_uppercase()).collect(),
        group: Group::from(&q),
    })
}

impl TreesReport {
    pub fn text(&self) -> String {
        let rel = if self.modulo.is_empty() { "nothing".to_string() } else { self.modulo.join(", ") };
        format!(
            "trees of degree {}: {} generators\nmodulo {}: {}\n",
            self.degree, self.generators, rel, self.group.description
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DsepReport {
    pub p: u32,
    pub generators: Vec<SeparatedGenerator>,
    pub algebraic: Group,
    pub marked_graphs: usize,
    pub combinatorial: Group,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatedGenerator {
    pub term: String,
    pub k: u32,
}

pub fn dsep(p: u32) -> Result<DsepReport> {
    let gens = dsep_generators(p)?;
    let (marked, comb) = marked_group(p)?;
    Ok(DsepReport {
        p,
        generators: gens.iter().map(|w| SeparatedGenerator { term: w.term.to_string(), k: w.k }).collect(),
        algebraic: Group::from(&dsep_group(p)?),
        marked_graphs: marked.len(),
        combinatorial: Group::from(&comb),
    })
}

impl DsepReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "separated generators for p = {}: {}", self.p, self.generators.len());
        for g in &self.generators {
            let _ = writeln!(s, "  k={} {}", g.k, g.term);
        }
        let _ = writeln!(s, "modulo antisymmetry and separated Jacobi: {}", self.algebraic.description);
        let _ = writeln!(s, "marked graphs: {}", self.marked_graphs);
        let _ = writeln!(s, "marked graphs modulo AS, IHXsep: {}", self.combinatorial.description);
        s
    }
}
