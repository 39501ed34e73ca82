use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use klrvv::engine::{Algebra, AlgebraDescriptor, Element};
use klrvv::expr::eval_str;
use klrvv::klr_vv::{root_partitions, theta_bijection};
use klrvv::quiver::{Branch, DimVector, OrbitDescriptor, SeqDisplay};
use klrvv::suite::{run_suite, NuSpec, SuiteConfig};
use klrvv::Error;

#[derive(Parser, Debug)]
#[command(name = "klrvv", version, about = "Normal forms and verification suites for KLR and VV algebras")]
struct Cli {
    /// A1, A2, A3 or separated(A1,A2,...)
    #[arg(long, global = true)]
    case: Option<String>,
    /// Order of p² for a generic orbit at a root of unity
    #[arg(long, global = true)]
    p_order: Option<u32>,
    /// Dimension vector, e.g. "l + p2*l" or "2*p + p3"; closed under θ
    #[arg(long, global = true)]
    nu: Option<String>,
    /// Degree cap for dimension comparisons
    #[arg(long, global = true)]
    cap: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Q or GF(p)
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// TOML file with the keys case, p_order, nu, cap, seed, field
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression
    Nf { expr: String },
    /// Product of two expressions
    Mul { left: String, right: String },
    /// Graded dimension up to the cap
    Dim,
    /// Root partitions of both halves of ν
    Roots,
    /// Run a verification suite: relations, morita:<name>, fullness, heredity, dims, all
    Verify { suite: String },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_config(cli: &Cli) -> Result<SuiteConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<SuiteConfig>(&text)
                .map_err(|e| Failure::Usage(format!("configuration error in {}: {e}", path.display())))?
        }
        None => {
            let case = cli.case.clone().ok_or_else(|| Failure::Usage("--case is required without --config".into()))?;
            let nu = cli.nu.clone().ok_or_else(|| Failure::Usage("--nu is required without --config".into()))?;
            SuiteConfig::new(&case, &nu)
        }
    };
    if let Some(c) = &cli.case {
        cfg.case = c.clone();
    }
    if let Some(n) = &cli.nu {
        cfg.nu = NuSpec::Text(n.clone());
    }
    if cli.p_order.is_some() {
        cfg.p_order = cli.p_order;
    }
    if let Some(c) = cli.cap {
        cfg.cap = c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = &cli.field {
        cfg.field = f.clone();
    }
    Ok(cfg)
}

fn algebra(cfg: &SuiteConfig) -> Result<(Algebra, OrbitDescriptor, DimVector), Failure> {
    let (orbit, nu, _) = cfg.resolve()?;
    let alg = Algebra::new(AlgebraDescriptor::vv(nu.clone(), orbit.clone()).with_cap(cfg.cap))?;
    Ok((alg, orbit, nu))
}

#[derive(Serialize)]
struct Term {
    coeff: String,
    mono: String,
}

#[derive(Serialize)]
struct ElementOut {
    text: String,
    terms: Vec<Term>,
}

fn element_out(alg: &Algebra, a: &Element) -> ElementOut {
    let terms = a.terms().map(|(m, c)| Term { coeff: c.to_string(), mono: alg.format_mono(m) }).collect();
    ElementOut { text: alg.format_element(a), terms }
}

/// Writes a line to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_element(alg: &Algebra, a: &Element, format: Format) {
    match format {
        Format::Text => emit(&alg.format_element(a)),
        Format::Json => emit(&serde_json::to_string_pretty(&element_out(alg, a)).expect("serializes")),
    }
}

#[derive(Serialize)]
struct PartitionOut {
    side: &'static str,
    roots: Vec<String>,
    seq: String,
    theta: Option<Vec<u8>>,
}

fn roots(orbit: &OrbitDescriptor, nu: &DimVector, format: Format) -> Result<(), Failure> {
    let mut out = Vec::new();
    for (side, branch) in [("+", Branch::Plus), ("-", Branch::Minus)] {
        let half = nu.branch_part(branch);
        if half.is_empty() {
            continue;
        }
        for p in root_partitions(&half, orbit)? {
            let roots = p
                .parts
                .iter()
                .map(|r| r.vertices(orbit).iter().map(|v| orbit.format_vertex(v)).collect::<Vec<_>>().join("+"))
                .collect();
            let theta = theta_bijection(&p, orbit).ok();
            out.push(PartitionOut { side, roots, seq: SeqDisplay(orbit, &p.seq).to_string(), theta });
        }
    }
    match format {
        Format::Json => emit(&serde_json::to_string_pretty(&out).expect("serializes")),
        Format::Text => {
            for p in &out {
                let theta = p.theta.as_ref().map(|t| format!("  theta = {t:?}")).unwrap_or_default();
                emit(&format!("{}  [{}]  i = {}{theta}", p.side, p.roots.join(" | "), p.seq));
            }
            emit(&format!("{} root partitions", out.len()));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Nf { expr } => {
            let (alg, _, _) = algebra(&cfg)?;
            print_element(&alg, &eval_str(expr, &alg)?, cli.format);
        }
        Command::Mul { left, right } => {
            let (alg, _, _) = algebra(&cfg)?;
            let a = eval_str(left, &alg)?;
            let b = eval_str(right, &alg)?;
            print_element(&alg, &alg.multiply(&a, &b)?, cli.format);
        }
        Command::Dim => {
            let (alg, _, _) = algebra(&cfg)?;
            let s = alg.graded_dimension(cfg.cap);
            match cli.format {
                Format::Text => emit(&s.to_string()),
                Format::Json => {
                    let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
                    let v = serde_json::json!({ "lowest": s.lowest_degree(), "cap": s.cap(), "coeffs": coeffs });
                    emit(&serde_json::to_string_pretty(&v).expect("serializes"));
                }
            }
        }
        Command::Roots => {
            let (orbit, nu, _) = cfg.resolve()?;
            roots(&orbit, &nu, cli.format)?;
        }
        Command::Verify { suite } => {
            let report = run_suite(&cfg, suite)?;
            match cli.format {
                Format::Text => emit(report.to_text().trim_end()),
                Format::Json => emit(&report.to_json()),
            }
            if !report.overall() {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
