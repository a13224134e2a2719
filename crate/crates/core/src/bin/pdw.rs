//! `pdw`: command-line front end for the Turán, Delsarte and Wiener bounds.
//!
//! Exit codes: 0 success, 1 invalid input, 2 uncertified or failed solve,
//! 3 property violation.

use clap::{Args, Parser, Subcommand};
use pdw_core::config::{CommandKind, Format, RunConfig, ShapeKind, Suite};
use pdw_core::report::{self, DelsarteBody, DemoBody, Render, WienerBody};
use pdw_core::wiener::{self, LowerMethod, SolverParams};
use pdw_core::{delsarte, suites, turan, Domain, Error, TrigPolynomial};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INVALID: u8 = 1;
const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "pdw", version, about = "Certified bounds for the Wiener constant of positive definite functions")]
struct Cli {
    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Write the extremal function in canonical coefficient text form.
    #[arg(long, global = true)]
    dump_function: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lower bound for the Turán constant of [-δ, δ]ⁿ.
    Turan(TuranArgs),
    /// Linear programming bound for the Delsarte constant of a ball.
    Delsarte(DelsarteArgs),
    /// Two-sided bounds for W_n(D).
    Wiener(WienerArgs),
    /// Seeded property suites.
    Verify(VerifyArgs),
    /// Growth of the real-line ratio without periodization.
    DemoRealline(DemoArgs),
}

#[derive(Args)]
struct TuranArgs {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    /// Grid size M.
    #[arg(long)]
    grid: Option<usize>,
    /// Frequency bound N.
    #[arg(long)]
    freq: Option<usize>,
}

#[derive(Args)]
struct DelsarteArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    /// Basis size K.
    #[arg(long)]
    basis: Option<usize>,
    /// Sample grid size G.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct WienerArgs {
    #[arg(long, value_enum)]
    domain: Option<ShapeKind>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Turán grid size M.
    #[arg(long)]
    grid: Option<usize>,
    /// Turán frequency bound N.
    #[arg(long)]
    freq: Option<usize>,
    /// Delsarte basis size K.
    #[arg(long)]
    basis: Option<usize>,
    /// Delsarte sample grid size G.
    #[arg(long)]
    delsarte_grid: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    domain: Option<ShapeKind>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cells: Option<usize>,
}

#[derive(Args)]
struct DemoArgs {
    /// Radii to evaluate; repeat the flag for several.
    #[arg(long)]
    radius: Vec<f64>,
    #[arg(long)]
    dim: Option<usize>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::DomainExceedsCell(_) | Error::UnsupportedShape(_) | Error::DimensionMismatch { .. } => {
                EXIT_INVALID
            }
            Error::Mismatch(_) => EXIT_VIOLATION,
            _ => EXIT_UNCERTIFIED,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Run<T> = std::result::Result<T, Failure>;

/// Rendered report plus the exit code it implies.
struct Output {
    body: String,
    code: u8,
}

impl Cli {
    fn flags(&self) -> (CommandKind, Option<Suite>, RunConfig) {
        let mut c = RunConfig { format: self.format, output: self.output.clone(), ..Default::default() };
        let (kind, suite) = match &self.command {
            Cmd::Turan(a) => {
                c.delta = a.delta;
                c.dim = a.dim;
                c.grid_size = a.grid;
                c.freq_bound = a.freq;
                (CommandKind::Turan, None)
            }
            Cmd::Delsarte(a) => {
                c.dim = a.dim;
                c.radius = a.radius;
                c.basis_size = a.basis;
                c.delsarte_grid = a.grid;
                (CommandKind::Delsarte, None)
            }
            Cmd::Wiener(a) => {
                c.domain = a.domain;
                c.delta = a.delta;
                c.dim = a.dim;
                c.q = a.q;
                c.p = a.p;
                c.epsilon = a.epsilon;
                c.grid_size = a.grid;
                c.freq_bound = a.freq;
                c.basis_size = a.basis;
                c.delsarte_grid = a.delsarte_grid;
                (CommandKind::Wiener, None)
            }
            Cmd::Verify(a) => {
                c.suite = Some(a.suite);
                c.samples = a.samples;
                c.dim = a.dim;
                c.delta = a.delta;
                c.domain = a.domain;
                c.seed = a.seed;
                c.cells = a.cells;
                (CommandKind::Verify, Some(a.suite))
            }
            Cmd::DemoRealline(a) => {
                c.radii = (!a.radius.is_empty()).then(|| a.radius.clone());
                c.dim = a.dim;
                (CommandKind::DemoRealline, None)
            }
        };
        c.command = Some(kind);
        (kind, suite, c)
    }
}

fn required<T: Copy>(value: Option<T>, name: &str) -> Run<T> {
    value.ok_or_else(|| fail(EXIT_INVALID, format!("--{name} is required")))
}

fn render<T: Serialize + Render>(command: &str, cfg: &RunConfig, body: &T) -> Run<String> {
    Ok(match cfg.format.unwrap_or_default() {
        Format::Json => report::to_json(command, cfg, body)? + "\n",
        Format::Csv => body.csv()?,
        Format::Text => body.text(),
    })
}

fn dump(path: &Option<PathBuf>, text: &str) -> Run<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| fail(EXIT_INVALID, format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn domain_for(shape: ShapeKind, dim: usize, delta: f64) -> Run<Domain> {
    Ok(match shape {
        ShapeKind::Cube => Domain::cube(dim, delta)?,
        ShapeKind::Ball => Domain::ball(dim, delta)?,
    })
}

fn cmd_turan(cfg: &RunConfig, dump_path: &Option<PathBuf>) -> Run<Output> {
    let delta = required(cfg.delta, "delta")?;
    turan::check_delta(delta)?;
    let m = cfg.grid_size.unwrap_or(turan::DEFAULT_GRID);
    let n_freq = cfg.freq_bound.unwrap_or_else(|| turan::default_freq_bound(delta, m));
    let base = turan::turan_lp_lower(delta, m, n_freq)?;
    let dim = cfg.dim.unwrap_or(1);
    let est = if dim == 1 { base.clone() } else { turan::turan_cube(&base, dim)? };
    let w = &base.witness;
    let n = base.freq_bound as i64;
    let poly = TrigPolynomial::from_real_coeffs(1, (-n..=n).map(|v| (vec![v], w.fourier(v))))?;
    dump(dump_path, &poly.to_text())?;
    let code = if est.certified { 0 } else { EXIT_UNCERTIFIED };
    Ok(Output { body: render("turan", cfg, &est)?, code })
}

fn cmd_delsarte(cfg: &RunConfig, dump_path: &Option<PathBuf>) -> Run<Output> {
    let dim = required(cfg.dim, "dim")?;
    if dim > delsarte::MAX_DIM {
        return Err(fail(
            EXIT_INVALID,
            format!("dim {dim} exceeds the design cap of {} for the Delsarte solver", delsarte::MAX_DIM),
        ));
    }
    let radius = cfg.radius.unwrap_or(delsarte::REFERENCE_RADIUS);
    let k = cfg.basis_size.unwrap_or(delsarte::DEFAULT_BASIS);
    let g = cfg.delsarte_grid.unwrap_or(delsarte::DEFAULT_GRID);
    let bound = delsarte::delsarte_lp(dim, radius, k, g)?;
    let f = &bound.function;
    let mut text = format!("# radial Laguerre-Gaussian coefficients, dim {}, scale {:e}\n", f.dim, f.scale);
    for (i, c) in f.coefficients.iter().enumerate() {
        text += &format!("{i}  {c:e}\n");
    }
    dump(dump_path, &text)?;
    let code = if bound.certified { 0 } else { EXIT_UNCERTIFIED };
    let body = DelsarteBody::new(bound)?;
    Ok(Output { body: render("delsarte", cfg, &body)?, code })
}

fn cmd_wiener(cfg: &RunConfig, dump_path: &Option<PathBuf>) -> Run<Output> {
    let delta = required(cfg.delta, "delta")?;
    let dim = cfg.dim.unwrap_or(1);
    let domain = domain_for(cfg.domain.unwrap_or(ShapeKind::Cube), dim, delta)?;
    let params = SolverParams {
        turan_grid: cfg.grid_size.unwrap_or(turan::DEFAULT_GRID),
        turan_freq: cfg.freq_bound,
        delsarte_basis: cfg.basis_size.unwrap_or(delsarte::DEFAULT_BASIS),
        delsarte_grid: cfg.delsarte_grid.unwrap_or(delsarte::DEFAULT_GRID),
    };
    let p = cfg.p.unwrap_or(2);
    let report = if p == 2 {
        wiener::wiener_bounds(&domain, cfg.q, cfg.epsilon, &params)?
    } else {
        let q = cfg
            .q
            .or_else(|| wiener::best_lattice_q(&domain))
            .ok_or_else(|| fail(EXIT_INVALID, "no lattice order q >= 2 fits this domain"))?;
        wiener::wiener_p_bounds(&domain, p, q, &params)?
    };
    if dump_path.is_some() {
        if report.lower.method == LowerMethod::LatticeComb {
            let q = report.lower.params["q"] as u32;
            let eps = report.lower.params["epsilon"];
            let comb = pdw_core::constructions::lattice_comb(q, dim, eps, None)?;
            dump(dump_path, &comb.poly.to_text())?;
        } else {
            eprintln!("no explicit witness for lower method {}; nothing dumped", report.lower.method.as_str());
        }
    }
    let code = if report.certified { 0 } else { EXIT_UNCERTIFIED };
    Ok(Output { body: render("wiener", cfg, &WienerBody::from(&report))?, code })
}

fn cmd_verify(cfg: &RunConfig) -> Run<Output> {
    let suite = required(cfg.suite, "suite")?;
    let samples = cfg.samples.unwrap_or(100);
    let seed = cfg.seed.unwrap_or(7);
    let dim = cfg.dim.unwrap_or(1);
    let summary = match suite {
        Suite::Hlawka => {
            let domain = domain_for(cfg.domain.unwrap_or(ShapeKind::Cube), dim, cfg.delta.unwrap_or(0.25))?;
            suites::hlawka_suite(&domain, samples, seed)?
        }
        Suite::Realline => {
            if dim != 1 {
                return Err(fail(EXIT_INVALID, "the realline suite is one-dimensional"));
            }
            suites::realline_suite(samples, cfg.cells.unwrap_or(20), cfg.delta, seed)?
        }
        Suite::Parseval => suites::parseval_suite(dim, samples, seed)?,
    };
    for f in &summary.failures {
        eprintln!("sample {} failed: {}\n{}", f.index, f.detail, f.function);
    }
    let code = if summary.all_passed() { 0 } else { EXIT_VIOLATION };
    Ok(Output { body: render("verify", cfg, &summary)?, code })
}

fn cmd_demo(cfg: &RunConfig) -> Run<Output> {
    let dim = cfg.dim.unwrap_or(1);
    let radii = cfg.radii.clone().unwrap_or_else(|| vec![1.0, 10.0, 100.0]);
    let rows = radii.iter().map(|r| wiener::realline_counterexample(*r, dim)).collect::<pdw_core::Result<Vec<_>>>()?;
    Ok(Output { body: render("demo-realline", cfg, &DemoBody::new(rows))?, code: 0 })
}

fn configure_threads() -> Run<()> {
    if let Ok(v) = std::env::var("PDW_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| fail(EXIT_INVALID, format!("PDW_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Run<u8> {
    configure_threads()?;
    let (kind, suite, flags) = cli.flags();
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = flags.overlay(file).overlay(RunConfig::defaults(kind, suite));
    cfg.validate()?;
    let out = match kind {
        CommandKind::Turan => cmd_turan(&cfg, &cli.dump_function)?,
        CommandKind::Delsarte => cmd_delsarte(&cfg, &cli.dump_function)?,
        CommandKind::Wiener => cmd_wiener(&cfg, &cli.dump_function)?,
        CommandKind::Verify => cmd_verify(&cfg)?,
        CommandKind::DemoRealline => cmd_demo(&cfg)?,
    };
    match &cfg.output {
        Some(p) => std::fs::write(p, &out.body).map_err(|e| fail(EXIT_INVALID, format!("cannot write {}: {e}", p.display())))?,
        None => print!("{}", out.body),
    }
    if out.code == EXIT_UNCERTIFIED {
        eprintln!("warning: result is not certified");
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
