use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use delpezzo::complement::{self, ComplementCertificate};
use delpezzo::enumerate::{classify_all, SearchConfig};
use delpezzo::graph::DualGraph;
use delpezzo::rational::{self, format, Rational};
use delpezzo::singularity::{self, CyclicQuotientType, ResolutionChain};
use delpezzo::table::{self, ClassificationTable, RowReport, TableRow};

#[derive(Parser)]
#[command(name = "delpezzo", version, about = "Dual-graph search for log del Pezzo pairs with an elliptic boundary curve")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the search and write the classification table.
    Enumerate {
        /// File for json, directory for dot; `-` writes json to stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Largest n tried when listing complements.
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        /// Worker threads; 0 lets rayon decide.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Single-threaded search.
        #[arg(long)]
        deterministic: bool,
        /// Fail unless the surfaces and boundary options match the
        /// reference table one to one.
        #[arg(long)]
        verify_golden: bool,
    },
    /// Re-derive every column of one reference row.
    VerifyRow {
        id: u32,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Verify all rows of a table.
    VerifyAll {
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Cyclic quotient point `[m,k]` against `bC`.
    Sing {
        m: u64,
        k: u64,
        #[arg(long, default_value = "6/7")]
        b: String,
        /// Index of a boundary component through the point.
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
    /// Hirzebruch-Jung chain of `[m,k]`, or the type of a chain.
    Hj {
        m: Option<u64>,
        k: Option<u64>,
        /// Comma separated weights, e.g. `-2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        chain: Option<String>,
    },
    /// Check an n-complement of a reference row, or search for one.
    ComplementCheck {
        #[arg(long)]
        row: u32,
        /// 1-based boundary option.
        #[arg(long, default_value_t = 1)]
        option: usize,
        #[arg(long, default_value_t = 7)]
        n: u32,
        /// `label=p/q`, repeated; omit to search.
        #[arg(long = "coef")]
        coefs: Vec<String>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Write DOT files for reference rows.
    ExportDot {
        /// Row id; all rows when omitted.
        #[arg(long)]
        row: Option<u32>,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

fn load(path: &Option<PathBuf>) -> Result<ClassificationTable> {
    match path {
        None => Ok(ClassificationTable::golden()),
        Some(p) => {
            let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(ClassificationTable::from_json(&s)?)
        }
    }
}

fn frac(s: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| anyhow!("bad fraction {s:?}: {}", e.0))
}

fn print_report(rep: &RowReport) {
    println!("row {}", rep.id);
    for c in &rep.checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        println!("  {mark}  {:<26} {}", c.name, c.detail);
    }
}

fn write_dot(dir: &Path, rows: &[TableRow]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in rows {
        let g = DualGraph::from_record(&r.graph)?;
        let path = dir.join(format!("row-{:02}.dot", r.id));
        fs::write(&path, g.to_dot(&format!("row {}", r.id)))?;
    }
    Ok(())
}

/// Surfaces and sub-rows against the reference, one line per mismatch.
fn golden_mismatches(found: &ClassificationTable, reference: &ClassificationTable) -> Vec<String> {
    let mut out = Vec::new();
    for r in &reference.rows {
        match found.rows.iter().find(|f| f.id == r.id) {
            None => out.push(format!("row {} not produced", r.id)),
            Some(f) if f.boundary_options.len() != r.boundary_options.len() || !f.flags.is_empty() => {
                out.push(format!(
                    "row {}: {} boundary options, reference has {}",
                    r.id,
                    f.boundary_options.len(),
                    r.boundary_options.len()
                ))
            }
            _ => {}
        }
    }
    for f in found.rows.iter().filter(|f| reference.row(f.id).is_err()) {
        out.push(format!("surface {} has no reference row", f.id));
    }
    out
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Enumerate { output, format: fmt, max_n, jobs, deterministic, verify_golden } => {
            if jobs > 0 {
                rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().ok();
            }
            let cfg = SearchConfig { parallel: !deterministic && jobs != 1 };
            let res = classify_all(&cfg)?;
            let reference = ClassificationTable::golden();
            let t = table::build_table(&res, &reference, max_n)?;
            eprintln!(
                "{} surfaces, {} boundary options, {} search states",
                t.rows.len(),
                t.sub_row_count(),
                res.states.len()
            );
            for ((kind, reason), n) in &res.rejections {
                eprintln!("rejected [{kind}] {reason}: {n}");
            }
            match (fmt, output.as_str()) {
                (Format::Json, "-") => print!("{}", t.to_json()),
                (Format::Json, p) => fs::write(p, t.to_json())?,
                (Format::Dot, "-") => bail!("dot output needs a directory"),
                (Format::Dot, p) => write_dot(Path::new(p), &t.rows)?,
            }
            if verify_golden {
                let bad = golden_mismatches(&t, &reference);
                for m in &bad {
                    eprintln!("golden mismatch: {m}");
                }
                return Ok(bad.is_empty());
            }
            Ok(true)
        }
        Cmd::VerifyRow { id, table } => {
            let t = load(&table)?;
            let rep = table::verify_row(t.row(id)?)?;
            print_report(&rep);
            Ok(rep.passed())
        }
        Cmd::VerifyAll { table } => {
            let t = load(&table)?;
            let mut ok = true;
            for r in &t.rows {
                let rep = table::verify_row(r)?;
                print_report(&rep);
                ok &= rep.passed();
            }
            Ok(ok)
        }
        Cmd::Sing { m, k, b, d } => {
            let b = frac(&b)?;
            let t = CyclicQuotientType::with_boundary(m, k, d)?;
            let chain = t.chain()?;
            println!("type        [{},{}] (d = {})", t.m, t.k, t.d);
            println!("chain       {:?}", chain.weights);
            println!("mld         {}", format(&singularity::mld(&t, &b)));
            println!("codiscrep.  {}", format(&singularity::codiscrepancy(&t, &b)));
            match singularity::series_of(&t) {
                Ok((r, k)) => println!("series      m = {r} mod {k}"),
                Err(e) => println!("series      none ({e})"),
            }
            println!("1/7-lt      {}", singularity::is_one_seventh_lt(&t));
            Ok(true)
        }
        Cmd::Hj { m, k, chain } => {
            match (m, k, chain) {
                (_, _, Some(c)) => {
                    let w = c
                        .split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<Result<Vec<_>, _>>()?;
                    let t = ResolutionChain::new(w)?.cq_type();
                    println!("[{},{}]", t.m, t.k);
                }
                (Some(m), Some(k), None) => {
                    println!("{:?}", singularity::hj_expand(m, k)?.weights);
                }
                _ => bail!("give m and k, or --chain"),
            }
            Ok(true)
        }
        Cmd::ComplementCheck { row, option, n, coefs, table } => {
            let t = load(&table)?;
            let r = t.row(row)?;
            let opt = r
                .boundary_options
                .get(option.wrapping_sub(1))
                .ok_or_else(|| anyhow!("row {row} has no option {option}"))?;
            let p = r.pair(opt)?;
            if coefs.is_empty() {
                match complement::find_complement(&p, n)? {
                    Some(c) => {
                        let m: BTreeMap<_, _> = c
                            .plus_coefficients
                            .iter()
                            .map(|(&v, q)| (p.graph.label(v).to_string(), format(q)))
                            .collect();
                        println!("{n}-complement {m:?}");
                        Ok(true)
                    }
                    None => {
                        println!("no {n}-complement on the tracked curves");
                        Ok(false)
                    }
                }
            } else {
                let mut plus = BTreeMap::new();
                for c in &coefs {
                    let (l, q) = c.split_once('=').ok_or_else(|| anyhow!("expected label=p/q"))?;
                    let v = p.graph.find(l).ok_or_else(|| anyhow!("no curve {l}"))?;
                    plus.insert(v, frac(q)?);
                }
                let rep = complement::verify_complement(
                    &p,
                    &ComplementCertificate { n, plus_coefficients: plus },
                )?;
                println!(
                    "integral {} degree-zero {} lc {} dominates {} ({} triviality)",
                    rep.integral, rep.degree_zero, rep.log_canonical, rep.dominates, rep.triviality
                );
                for f in &rep.failures {
                    println!("  {f}");
                }
                Ok(rep.passed())
            }
        }
        Cmd::ExportDot { row, output, table } => {
            let t = load(&table)?;
            let rows: Vec<TableRow> = match row {
                Some(id) => vec![t.row(id)?.clone()],
                None => t.rows.clone(),
            };
            write_dot(&output, &rows)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
