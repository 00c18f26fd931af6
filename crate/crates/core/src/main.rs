use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ksvec::hypergraph::Hypergraph;
use ksvec::iso::{are_isomorphic, canonical_form};
use ksvec::ks::{
    connected_components, find_parity_proof, has_delta_feature, is_critical, is_ks,
    verify_coordinatization,
};
use ksvec::mmp::{serialize_hypergraph, HypergraphReader};
use ksvec::pipeline::{
    exhaustive_criticals, random_campaign, size_tag, CriticalFamily, DEFAULT_BUDGET,
};
use ksvec::stats::{distribution, CountMode, DistributionBuilder};
use ksvec::vecgen::build_master_from_tokens;

#[derive(Parser)]
#[command(name = "ksvec", version, about = "Kochen-Specker master sets and their critical subsets")]
struct Cli {
    /// Worker threads for parallel stages
    #[arg(long, global = true, env = "KSVEC_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a master set from vector components
    Vecfind {
        /// Comma-separated component tokens, e.g. -1,0,1 or 0,1,w
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        components: Vec<String>,
        #[arg(long)]
        dim: usize,
        /// Order n of the cyclotomic field Q(zeta_n); inferred from the tokens if absent
        #[arg(long)]
        field_order: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report KS, criticality, parity, delta-feature and components per hypergraph
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        field_order: Option<u32>,
    },
    /// Strip a KS master down to critical subsets
    Criticals {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Number of random runs
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        /// Campaign seed; required in random mode
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Refuse exhaustive mode on masters with more edges than this
        #[arg(long, default_value_t = 40)]
        max_edges: usize,
        /// Run exhaustive mode regardless of --max-edges
        #[arg(long)]
        force: bool,
        /// Solver-call budget for exhaustive mode
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Size distribution of a file of criticals as CSV plus a text histogram
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Skip re-verifying that every line is critical
        #[arg(long)]
        trust: bool,
        /// Count every line instead of one per isomorphism class
        #[arg(long)]
        raw: bool,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test two hypergraphs for isomorphism
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Print the canonical form of every hypergraph in a file
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Random,
    Exhaustive,
}

/// Failure classes, mapped to exit codes in `main`.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Budget(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} workers: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Failure>() {
                Some(Failure::Usage(_)) => 1,
                Some(Failure::Budget(_)) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Vecfind {
            components,
            dim,
            field_order,
            out,
        } => vecfind(&components, dim, field_order, out.as_deref()),
        Cmd::Check { input, field_order } => check(&input, field_order),
        Cmd::Criticals {
            input,
            mode,
            runs,
            seed,
            out,
            max_edges,
            force,
            budget,
        } => criticals(&input, mode, runs, seed, &out, max_edges, force, budget),
        Cmd::Stats {
            input,
            trust,
            raw,
            out,
        } => stats(&input, trust, raw, out.as_deref()),
        Cmd::Iso { a, b } => iso(&a, &b),
        Cmd::Canon { input } => canon(&input),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path)
        .map_err(|e| Failure::Data(format!("cannot open {}: {e}", path.display())))?;
    Ok(BufReader::new(f))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Every hypergraph in `path`; parse errors carry the line number.
fn read_all(path: &Path, field_order: Option<u32>) -> Result<Vec<Hypergraph>> {
    read_each(path, field_order, |_, h| Ok(Some(h)))
}

fn read_each<T>(
    path: &Path,
    field_order: Option<u32>,
    mut f: impl FnMut(usize, Hypergraph) -> Result<Option<T>>,
) -> Result<Vec<T>> {
    let reader = HypergraphReader::new(open(path)?).with_field_order(field_order);
    let mut out = Vec::new();
    for (line, rec) in reader {
        let h = rec.map_err(|e| Failure::Data(format!("{}:{line}: {e}", path.display())))?;
        if let Some(t) = f(line, h)? {
            out.push(t);
        }
    }
    Ok(out)
}

fn read_one(path: &Path) -> Result<Hypergraph> {
    let mut all = read_all(path, None)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Failure::Data(format!("{}: no hypergraph", path.display())).into()),
        n => Err(Failure::Data(format!(
            "{}: expected one hypergraph, found {n}",
            path.display()
        ))
        .into()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vecfind(tokens: &[String], dim: usize, order: Option<u32>, out: Option<&Path>) -> Result<()> {
    if dim < 2 {
        return Err(Failure::Usage(format!("--dim must be at least 2, got {dim}")).into());
    }
    let master = build_master_from_tokens(tokens, dim, order)
        .map_err(|e| Failure::Data(e.to_string()))?;
    let Some(master) = master else {
        println!("0-0; no orthogonal basis");
        if let Some(p) = out {
            create(p)?.flush()?;
        }
        return Ok(());
    };
    let h = &master.hypergraph;
    let comps: Vec<String> = connected_components(h)
        .iter()
        .map(|c| {
            let kind = if is_ks(c) { "KS" } else { "non-KS" };
            format!("{} ({kind})", size_tag(c))
        })
        .collect();
    println!("{}; components: {}", size_tag(h), comps.join(", "));
    if let Some(p) = out {
        let mut w = create(p)?;
        writeln!(w, "{}", serialize_hypergraph(h, true))?;
        w.flush()?;
    }
    Ok(())
}

fn check(path: &Path, order: Option<u32>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    read_each(path, order, |line, h| {
        let parity = match find_parity_proof(&h) {
            Some(p) => p
                .edges
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
            None => "none".into(),
        };
        let comps: Vec<String> = connected_components(&h).iter().map(size_tag).collect();
        let coords = match verify_coordinatization(&h) {
            Ok(true) => "valid",
            Ok(false) => "invalid",
            Err(_) if h.coordinatization().is_none() => "absent",
            Err(_) => "incomplete",
        };
        writeln!(w, "# line {line}: {}", size_tag(&h))?;
        writeln!(w, "KS: {}", yes_no(is_ks(&h)))?;
        writeln!(w, "critical: {}", yes_no(is_critical(&h)))?;
        writeln!(w, "parity: {parity}")?;
        writeln!(w, "delta: {}", yes_no(has_delta_feature(&h)))?;
        writeln!(w, "components: {}", comps.join(", "))?;
        writeln!(w, "coordinatization: {coords}")?;
        Ok(None::<()>)
    })?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn criticals(
    input: &Path,
    mode: Mode,
    runs: u64,
    seed: Option<u64>,
    out: &Path,
    max_edges: usize,
    force: bool,
    budget: u64,
) -> Result<()> {
    let master = read_one(input)?;
    let tag = size_tag(&master);
    let start = Instant::now();
    let (family, header, truncated) = match mode {
        Mode::Random => {
            let seed = seed
                .ok_or_else(|| Failure::Usage("--seed is required in random mode".into()))?;
            let c = random_campaign(&master, runs, seed)
                .map_err(|e| Failure::Data(format!("{tag}: {e}")))?;
            let header = format!("# master {tag} mode random runs {runs} seed {seed}");
            (c.family, header, false)
        }
        Mode::Exhaustive => {
            if master.edge_count() > max_edges && !force {
                return Err(Failure::Usage(format!(
                    "exhaustive mode refused: {tag} has more than {max_edges} edges (raise --max-edges or pass --force)"
                ))
                .into());
            }
            let r = exhaustive_criticals(&master, budget)
                .map_err(|e| Failure::Data(format!("{tag}: {e}")))?;
            let header = format!(
                "# master {tag} mode exhaustive budget {budget} calls {} truncated {}",
                r.solver_calls, r.truncated
            );
            (r.family, header, r.truncated)
        }
    };
    write_family(out, &header, &family)?;
    eprintln!(
        "{} critical classes from {tag} in {:.2?}",
        family.records.len(),
        start.elapsed()
    );
    if truncated {
        return Err(Failure::Budget(format!(
            "solver-call budget of {budget} exhausted; partial results written"
        ))
        .into());
    }
    Ok(())
}

fn sidecar(out: &Path) -> PathBuf {
    let csv = out.with_extension("csv");
    if csv == out {
        let mut s = out.as_os_str().to_owned();
        s.push(".csv");
        PathBuf::from(s)
    } else {
        csv
    }
}

fn write_family(out: &Path, header: &str, family: &CriticalFamily) -> Result<()> {
    let mut w = create(out)?;
    writeln!(w, "{header}")?;
    for r in &family.records {
        writeln!(w, "{}", serialize_hypergraph(&r.hypergraph, true))?;
    }
    w.flush()?;
    let dist = distribution(family.records.iter().map(|r| &r.hypergraph), CountMode::Dedup);
    std::fs::write(sidecar(out), dist.to_csv())
        .with_context(|| format!("cannot write {}", sidecar(out).display()))?;
    Ok(())
}

fn stats(input: &Path, trust: bool, raw: bool, out: Option<&Path>) -> Result<()> {
    let mode = if raw { CountMode::Raw } else { CountMode::Dedup };
    let mut builder = DistributionBuilder::new(mode);
    let offenders = read_each(input, None, |line, h| {
        let bad = !trust && !is_critical(&h);
        builder.push(&h);
        Ok(bad.then(|| format!("line {line} ({})", size_tag(&h))))
    })?;
    if !offenders.is_empty() {
        return Err(Failure::Data(format!(
            "not critical: {}",
            offenders.join(", ")
        ))
        .into());
    }
    let dist = builder.finish();
    match out {
        Some(p) => std::fs::write(p, dist.to_csv())
            .with_context(|| format!("cannot write {}", p.display()))?,
        None => {
            print!("{}", dist.to_csv());
            println!();
        }
    }
    print!("{}", dist.histogram(50));
    Ok(())
}

fn iso(a: &Path, b: &Path) -> Result<()> {
    let ha = read_one(a)?;
    let hb = read_one(b)?;
    match are_isomorphic(&ha, &hb) {
        Some(map) => {
            println!("isomorphic: yes");
            let pairs: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(v, &w)| format!("{}->{}", ha.label(v), hb.label(w)))
                .collect();
            println!("witness: {}", pairs.join(" "));
        }
        None => println!("isomorphic: no"),
    }
    Ok(())
}

fn canon(input: &Path) -> Result<()> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    read_each(input, None, |_, h| {
        writeln!(w, "{}", canonical_form(&h).canonical_string)?;
        Ok(None::<()>)
    })?;
    Ok(())
}
