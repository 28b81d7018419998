use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use bkss_cli::checks::{self, SUITES};
use bkss_cli::report;
use bkss_core::correspondence::{psi_d, psi_t};
use bkss_core::spectral::{dsep_generators, DsepElement};
use bkss_core::utg::{enumerate_trees, GeneratorSet};
use bkss_core::Term;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "bkss", version, about = "Integral E1 and E2 computations for the long knot spectral sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for independent generators.
    #[arg(long, env = "BKSS_JOBS", global = true)]
    jobs: Option<usize>,

    /// Permit p >= 8, where matrix sizes grow factorially.
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The group E1(p,q).
    E1 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// The differential d1: E1(p-1,p) -> E1(p,p).
    D1 {
        #[arg(long)]
        p: u32,
        /// Compare the simplified formula against the full alternating sum.
        #[arg(long)]
        oracle: bool,
    },
    /// The group E2(p,p) with its STU2 certificate.
    E2 {
        #[arg(long)]
        p: u32,
    },
    /// Labelled trees of a given degree modulo local relations.
    Trees {
        #[arg(long)]
        degree: usize,
        /// Comma separated subset of `as,ihx`.
        #[arg(long, default_value = "as,ihx")]
        modulo: String,
    },
    /// Separated generators and marked graphs for p.
    Dsep {
        #[arg(long)]
        p: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Graphviz output for trees, marked graphs or a single bracket.
    ExportDot {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        p: Option<u32>,
        /// A bracket such as `[[x13,x23],x(4,5)]`; with `--p` it is read as a separated term.
        #[arg(long)]
        term: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(anyhow::Error::msg(msg.into()).context(UsageMarker))
}

#[derive(Debug)]
struct UsageMarker;

impl std::fmt::Display for UsageMarker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("usage error")
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn render<T: Serialize>(format: Format, v: &T, text: impl FnOnce(&T) -> String) -> Result<String> {
    match format {
        Format::Text => Ok(text(v)),
        Format::Json => json(v),
        Format::Dot => usage("--format dot applies to trees and export-dot only"),
    }
}

fn guard(p: u32, allow_large: bool) -> Result<()> {
    if p >= 8 && !allow_large {
        return usage(format!("p = {p} is beyond the default bound; pass --allow-large to proceed"));
    }
    if p == 7 {
        eprintln!("warning: p = 7 may take several minutes");
    }
    Ok(())
}

struct Outcome {
    text: String,
    ok: bool,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    let ok = |text| Ok(Outcome { text, ok: true });
    match &cli.command {
        Command::E1 { p, q } => {
            guard(*p, cli.allow_large)?;
            if q < p {
                return usage("e1 needs p <= q");
            }
            ok(render(format, &report::e1(*p, *q), report::E1Report::text)?)
        }
        Command::D1 { p, oracle } => {
            guard(*p, cli.allow_large)?;
            if *p < 2 {
                return usage("d1 needs p >= 2");
            }
            let r = report::d1(*p, *oracle)?;
            let agree = r.oracle.as_ref().is_none_or(|o| o.agree);
            Ok(Outcome { text: render(format, &r, report::D1Report::text)?, ok: agree })
        }
        Command::E2 { p } => {
            guard(*p, cli.allow_large)?;
            let r = report::e2(*p)?;
            let ok = r.certificates.as_ref().is_none_or(|c| c.equal);
            Ok(Outcome { text: render(format, &r, report::E2Report::text)?, ok })
        }
        Command::Trees { degree, modulo } => {
            if *degree == 0 {
                return usage("tree degree starts at 1");
            }
            guard(*degree as u32 + 1, cli.allow_large)?;
            let kinds = match report::parse_relations(modulo) {
                Ok(k) => k,
                Err(e) => return usage(e),
            };
            if format == Format::Dot {
                return ok(trees_dot(*degree));
            }
            ok(render(format, &report::trees(*degree, &kinds)?, report::TreesReport::text)?)
        }
        Command::Dsep { p } => {
            guard(*p, cli.allow_large)?;
            if *p < 4 {
                return usage("separated generators need p >= 4");
            }
            ok(render(format, &report::dsep(*p)?, report::DsepReport::text)?)
        }
        Command::Verify { suite } => {
            let Some(ids) = checks::suite_ids(suite) else {
                return usage(format!("unknown suite '{suite}' (expected one of {})", SUITES.join(", ")));
            };
            let mut results = Vec::new();
            for id in ids {
                let start = Instant::now();
                let c = checks::run(id)?;
                eprintln!("criterion {id}: {:.2?}", start.elapsed());
                results.push(c);
            }
            let passed = results.iter().all(|c| c.passed);
            let text = render(format, &results, |rs| {
                let mut s = String::new();
                for c in rs {
                    s.push_str(&c.line());
                    s.push('\n');
                    for f in &c.failures {
                        s.push_str(&format!("    {f}\n"));
                    }
                }
                let n = rs.iter().filter(|c| c.passed).count();
                s.push_str(&format!("{n} of {} passed\n", rs.len()));
                s
            })?;
            Ok(Outcome { text, ok: passed })
        }
        Command::ExportDot { degree, p, term } => ok(export_dot(*degree, *p, term.as_deref(), cli.allow_large)?),
    }
}

fn trees_dot(degree: usize) -> String {
    let gens = GeneratorSet::new(enumerate_trees(degree));
    gens.graphs.iter().enumerate().map(|(i, g)| g.to_dot(&format!("tree_{degree}_{i}"))).collect()
}

fn export_dot(degree: Option<usize>, p: Option<u32>, term: Option<&str>, allow_large: bool) -> Result<String> {
    match (degree, p, term) {
        (Some(d), None, None) if d >= 1 => {
            guard(d as u32 + 1, allow_large)?;
            Ok(trees_dot(d))
        }
        (None, Some(p), None) if p >= 4 => {
            guard(p, allow_large)?;
            let mut s = String::new();
            for (i, w) in dsep_generators(p)?.iter().enumerate() {
                s.push_str(&psi_d(w)?.graph.to_dot(&format!("marked_{p}_{i}")));
            }
            Ok(s)
        }
        (None, p, Some(t)) => {
            let t: Term = match t.parse() {
                Ok(t) => t,
                Err(e) => return usage(format!("cannot parse term: {e}")),
            };
            let g = match p {
                Some(p) => psi_d(&DsepElement::new(t, p).map_err(|e| anyhow!("{e}")).context(UsageMarker)?)?,
                None => psi_t(&t).map_err(|e| anyhow!("{e}")).context(UsageMarker)?,
            };
            Ok(g.graph.to_dot("term"))
        }
        _ => usage("export-dot takes one of --degree N (N >= 1), --p P (P >= 4), or --term T [--p P]"),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = execute(&cli).and_then(|o| emit(cli.out.as_ref(), &o.text).map(|_| o.ok));
    eprintln!("elapsed: {:.2?}", start.elapsed());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<UsageMarker>().is_some() => {
            eprintln!("error: {}", e.root_cause());
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
