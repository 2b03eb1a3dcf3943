use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rdress::catalog::{summary_table, CatalogEntry};
use rdress::dressing::{compute_h, first_mode, Branch, DressingConfig};
use rdress::equations::{GridOptions, DEFAULT_TOL};
use rdress::fdsolver::{compare, evolve, Boundary};
use rdress::singular::first_singular_time;
use rdress::{Catalog, Error, Exec, GridSpec, ScalarField};

/// Exact-solution verification, dressing and cross-checks for quasilinear
/// reaction-diffusion equations.
#[derive(Parser)]
#[command(name = "rdress", version)]
struct Cli {
    /// Run grid sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual-check catalog records and print the reproduction matrix.
    #[command(group(ArgGroup::new("which").required(true).args(["id", "all"])))]
    Verify {
        /// Record id; repeatable.
        #[arg(long)]
        id: Vec<String>,
        #[arg(long)]
        all: bool,
        /// `xmin,xmax,nx,tmin,tmax,nt`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
        grid: Option<GridSpec>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write entries with their reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a first-mode solution from two records.
    Dress {
        #[arg(long = "M")]
        m: String,
        #[arg(long = "Q")]
        q: String,
        #[arg(long, default_value = "minus")]
        branch: Branch,
        /// Constant phase offset.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c0: f64,
        /// Phases without a closed form are integrated per point, so the
        /// default grid is coarser than for `verify`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid, default_value = DRESS_GRID)]
        grid: GridSpec,
        /// Write the dressed solution as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Finite-difference evolution from a record's initial slice.
    Evolve {
        #[arg(long)]
        id: String,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 0.05)]
        dx: f64,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        x_max: f64,
        /// Output times, including both ends.
        #[arg(long, default_value_t = 11)]
        frames: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample a record, or its dressing phase, on a grid.
    Export {
        #[arg(long)]
        id: String,
        #[arg(long, value_enum, default_value_t = FieldKind::U)]
        field: FieldKind,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
        grid: Option<GridSpec>,
        /// Output file; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List, dump or re-check the record catalog
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Ids, equation labels and notes.
    List,
    /// Write the catalog as JSON.
    Dump {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reload a catalog file, compare it with the built-in records and
    /// verify every entry.
    Check {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    #[value(name = "u")]
    U,
    #[value(name = "H")]
    H,
}

const DRESS_GRID: &str = "-10,10,101,0,2,21";

/// Bad input from the user; exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse::<GridSpec>().map_err(|e| e.to_string())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::UnknownId(_) | Error::InvalidGrid(_) | Error::Parse(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match run(cli.command, exec) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// `Ok(false)` means the command ran but a check failed.
fn run(command: Command, exec: Exec) -> Result<bool> {
    match command {
        Command::Verify { id, all, grid, tol, json } => verify(&id, all, grid, tol, json.as_deref(), exec),
        Command::Dress { m, q, branch, c0, grid, emit } => dress(&m, &q, branch, c0, grid, emit.as_deref(), exec),
        Command::Evolve { id, t1, dx, x_min, x_max, frames, csv } => {
            evolve_cmd(&id, t1, dx, (x_min, x_max), frames, csv.as_deref(), exec)
        }
        Command::Export { id, field, grid, csv } => export(&id, field, grid, csv.as_deref()),
        Command::Catalog(c) => catalog(c, exec),
    }
}

fn entry(cat: &Catalog, id: &str) -> Result<CatalogEntry> {
    Ok(cat.get(id)?.entry()?)
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("cannot create {}", path.display()))
}

fn verify(ids: &[String], all: bool, grid: Option<GridSpec>, tol: f64, json: Option<&Path>, exec: Exec) -> Result<bool> {
    let grid = grid.unwrap_or_else(GridSpec::default_grid);
    let mut cat = Catalog::builtin();
    let selected: Vec<&str> = ids.iter().map(String::as_str).collect();
    let rows = cat.verify(if all { None } else { Some(&selected) }, &grid, tol, exec)?;
    print!("{}", summary_table(&rows));
    if let Some(path) = json {
        let mut out = Vec::with_capacity(rows.len());
        for v in &rows {
            let mut value = serde_json::to_value(entry(&cat, &v.id)?)?;
            value["status"] = json!(v.status.label());
            value["report"] = serde_json::to_value(&v.report)?;
            out.push(value);
        }
        serde_json::to_writer_pretty(create(path)?, &out)?;
    }
    Ok(rows.iter().all(|v| v.report.pass))
}

/// Probe points for comparing fields.
fn probes(grid: &GridSpec) -> Vec<(f64, f64)> {
    let (nx, nt) = (grid.nx.min(41), grid.nt.min(11));
    let sub = GridSpec { nx, nt, ..*grid };
    sub.xs().into_iter().flat_map(|x| sub.ts().into_iter().map(move |t| (x, t))).collect()
}

fn max_diff(a: &ScalarField, b: &ScalarField, pts: &[(f64, f64)]) -> Option<f64> {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for &(x, t) in pts {
        if let (Ok(u), Ok(v)) = (a.eval_complex(x, t), b.eval_complex(x, t)) {
            worst = worst.max((u - v).norm());
            n += 1;
        }
    }
    (n * 2 > pts.len()).then_some(worst)
}

fn dress(
    m_id: &str,
    q_id: &str,
    branch: Branch,
    c0: f64,
    grid: GridSpec,
    emit: Option<&Path>,
    exec: Exec,
) -> Result<bool> {
    let cat = Catalog::builtin();
    let (m, q) = (entry(&cat, m_id)?, entry(&cat, q_id)?);
    let target = serde_json::to_value(&m.target)?;
    if target != serde_json::to_value(&q.target)? {
        return Err(anyhow!("`{m_id}` and `{q_id}` solve different equations"));
    }
    let coefs = m.target.coefficients().ok_or_else(|| anyhow!("target `{}` has no general form", m.target.name()))?;
    let cfg = DressingConfig::default().with_branch(branch).with_c0(c0);
    let opts = GridOptions { exec, ..GridOptions::default() };
    let d = first_mode(&m.expression, &q.expression, &coefs, &cfg, &grid, opts)?;
    println!("compatibility:   {}", d.compat.summary());
    println!("hamilton-jacobi: {}", d.hj.summary());
    let residual = rdress::CatalogEntry {
        id: format!("{m_id}*{q_id}"),
        paper_eq: String::new(),
        params: Default::default(),
        expression: d.u.clone(),
        target: m.target.clone(),
    }
    .verify(&grid, opts)?;
    println!("dressed field:   {}", residual.summary());

    let pts = probes(&grid);
    for other in cat.entries()? {
        if serde_json::to_value(&other.target)? != target {
            continue;
        }
        if max_diff(&d.u, &other.expression, &pts).is_some_and(|e| e <= 1e-8) {
            println!("matches {} {}", other.id, other.paper_eq);
        } else if max_diff(&d.u, &(-other.expression.clone()), &pts).is_some_and(|e| e <= 1e-8) {
            println!("matches -{} {}", other.id, other.paper_eq);
        }
    }
    if let Some(path) = emit {
        serde_json::to_writer_pretty(create(path)?, &d)?;
    }
    let mut ok = true;
    for (name, r) in [("compatibility condition", &d.compat), ("Hamilton-Jacobi equation", &d.hj)] {
        if !r.pass {
            eprintln!("failed: {name} (max scaled residual {:.3e})", r.max_scaled);
            ok = false;
        }
    }
    Ok(ok && residual.pass)
}

fn evolve_cmd(
    id: &str,
    t1: f64,
    dx: f64,
    x_range: (f64, f64),
    frames: usize,
    csv_path: Option<&Path>,
    exec: Exec,
) -> Result<bool> {
    if !(t1 >= 0.0) || frames == 0 {
        return Err(Usage(format!("need t1 >= 0 and at least one frame, got t1 = {t1}, frames = {frames}")).into());
    }
    let cat = Catalog::builtin();
    let e = entry(&cat, id)?;
    if e.is_complex() {
        return Err(anyhow!("`{id}` is complex-valued; the solver is real"));
    }
    let coefs = e.target.coefficients().ok_or_else(|| anyhow!("target `{}` has no general form", e.target.name()))?;
    if t1 > 0.0 {
        if let Some(ev) = first_singular_time(&e.expression, x_range, (0.0, t1 / 0.9), 801, 201)? {
            if t1 > 0.9 * ev.t {
                return Err(anyhow!(
                    "`{id}` becomes singular at t = {:.4} (x = {:.3}); refusing to evolve to t = {t1}",
                    ev.t,
                    ev.x
                ));
            }
        }
    }
    let frames = if t1 == 0.0 { 1 } else { frames };
    let bc = Boundary::Dirichlet(e.expression.clone());
    let sol = evolve(&coefs, &e.expression, x_range, dx, (0.0, t1), frames, &bc, exec)?;
    let norms = compare(&e.expression, &sol);
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["t", "x", "numeric", "exact", "error"])?;
        for (t, row) in sol.ts.iter().zip(&sol.values) {
            for (x, v) in sol.xs.iter().zip(row) {
                let exact = e.expression.eval_real(*x, *t).unwrap_or(f64::NAN);
                w.serialize((t, x, v, exact, v - exact))?;
            }
        }
        let mut file = w.into_inner().map_err(|e| anyhow!("{}", e.error()))?;
        for n in &norms {
            writeln!(file, "# t={} linf={:e} l2={:e}", n.t, n.linf, n.l2)?;
        }
    }
    println!("{}", sol.summary_json()?);
    println!("{:>8} {:>12} {:>12}", "t", "linf", "l2");
    for n in &norms {
        println!("{:>8.4} {:>12.4e} {:>12.4e}", n.t, n.linf, n.l2);
    }
    Ok(true)
}

/// Records built by dressing a catalog pair, with that pair.
const DRESSED: [(&str, &str, &str); 3] = [
    ("fhns_u1", "fhns_kink_M", "fhns_kink_Q"),
    ("fhns_u2", "fhns_M2", "fhns_Q2"),
    ("fhns_u2_dressed", "fhns_M2", "fhns_Q2"),
];

fn export(id: &str, field: FieldKind, grid: Option<GridSpec>, csv_path: Option<&Path>) -> Result<bool> {
    let grid = grid.unwrap_or_else(GridSpec::default_grid);
    let cat = Catalog::builtin();
    let e = entry(&cat, id)?;
    let f = match field {
        FieldKind::U => e.expression,
        FieldKind::H => {
            let (_, m, q) = DRESSED
                .iter()
                .find(|(d, _, _)| *d == id)
                .ok_or_else(|| anyhow!("`{id}` is not built by dressing; no phase to export"))?;
            let coefs = e.target.coefficients().ok_or_else(|| anyhow!("target has no general form"))?;
            compute_h(&entry(&cat, m)?.expression, &entry(&cat, q)?.expression, &coefs, &DressingConfig::default())?
        }
    };
    let sink: Box<dyn Write> = match csv_path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["t", "x", "value"])?;
    let mut worst_im = 0.0_f64;
    for t in grid.ts() {
        for x in grid.xs() {
            let v = f.eval_complex(x, t).ok();
            if let Some(z) = v {
                worst_im = worst_im.max(z.im.abs() / (1.0 + z.norm()));
            }
            w.serialize((t, x, v.map_or(f64::NAN, |z| z.re)))?;
        }
    }
    w.flush()?;
    if worst_im > 1e-10 {
        eprintln!("warning: dropped imaginary parts up to {worst_im:.3e} (relative)");
    }
    Ok(true)
}

fn catalog(c: CatalogCommand, exec: Exec) -> Result<bool> {
    let cat = Catalog::builtin();
    match c {
        CatalogCommand::List => {
            for r in cat.records() {
                println!("{:<26} {:<16} {}", r.id, r.paper_eq, r.note.unwrap_or(""));
            }
            Ok(true)
        }
        CatalogCommand::Dump { out } => {
            let text = cat.dump_json()?;
            match out {
                Some(p) => create(&p)?.write_all(text.as_bytes())?,
                None => println!("{text}"),
            }
            Ok(true)
        }
        CatalogCommand::Check { file, grid } => {
            let grid = grid.unwrap_or_else(GridSpec::default_grid);
            let src = std::fs::read_to_string(&file).with_context(|| format!("cannot read {}", file.display()))?;
            let entries = Catalog::load_json(&src)?;
            let opts = GridOptions { exec, ..GridOptions::default() };
            let mut ok = true;
            println!("{:<26} {:<10} {:>11}  result", "id", "round-trip", "max_scaled");
            for e in &entries {
                let same = match cat.get(&e.id).and_then(|r| r.entry()) {
                    Ok(b) => {
                        b.expression.to_sexpr() == e.expression.to_sexpr()
                            && serde_json::to_value(&b.target)? == serde_json::to_value(&e.target)?
                            && b.params == e.params
                    }
                    Err(_) => false,
                };
                let r = e.verify(&grid, opts)?;
                ok &= same && r.pass;
                let rt = if same { "same" } else { "differs" };
                println!("{:<26} {:<10} {:>11.3e}  {}", e.id, rt, r.max_scaled, if r.pass { "pass" } else { "FAIL" });
            }
            Ok(ok)
        }
    }
}
