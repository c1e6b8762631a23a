use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use vss_core::cohomology::{normalized_basis, poincare_polynomial};
use vss_core::diagrams::weight_space;
use vss_core::knots::{extend_invariant, parse_corpus, CorpusEntry, Framing, SingularKnot, V2};
use vss_core::linalg::format_rational;
use vss_core::spectral::{e1_dim, e2_dim, verify_prop_e2};
use vss_core::verify::{bless, verify_all};

#[derive(Parser)]
#[command(
    name = "vss",
    version,
    about = "Exact spectral-sequence and weight-system computations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    V2,
    Framing,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré polynomial coefficients of F(p).
    Dims {
        #[arg(long)]
        p: usize,
    },
    /// Normalized E1 entry in bidegree (-p, q).
    E1 {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Diagonal report for n chords, or a single E2 entry with --p and --q.
    E2 {
        #[arg(long, conflicts_with_all = ["p", "q"], required_unless_present_all = ["p", "q"])]
        n: Option<usize>,
        #[arg(long, requires = "q")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        q: Option<usize>,
    },
    /// Dimension of the space of weight systems of degree n.
    Weights {
        #[arg(long)]
        n: usize,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, env = "VSS_GOLDEN_DIR")]
        golden_dir: Option<PathBuf>,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
    /// Evaluate an invariant, extended over double points, on each code in a file.
    KnotEval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        invariant: Invariant,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let text = matches!(cli.format, Format::Text);
    match &cli.command {
        Command::Dims { p } => {
            if *p == 0 {
                return Err(usage("--p must be at least 1"));
            }
            let coeffs = poincare_polynomial(*p);
            Ok(if text {
                format!("{}\n", joined(&coeffs))
            } else {
                format!("{}\n", json!({ "p": p, "coefficients": coeffs }))
            })
        }
        Command::E1 { p, q } => {
            let dim = e1_dim(*p, *q).map_err(usage)?;
            let basis: Vec<String> = normalized_basis(*p, *q)
                .map_err(usage)?
                .monomials
                .iter()
                .map(ToString::to_string)
                .collect();
            Ok(if text {
                format!("{dim}\n{}\n", basis.join(" "))
            } else {
                format!(
                    "{}\n",
                    json!({ "p": p, "q": q, "dim": dim, "basis": basis })
                )
            })
        }
        Command::E2 { n: Some(n), .. } => {
            let report = verify_prop_e2(*n).map_err(usage)?;
            Ok(if text {
                format!(
                    "n={} dim_e1={} dim_e2={} dim_w={} iso={} cotower={}\n",
                    report.n,
                    report.dim_e1,
                    report.dim_e2,
                    report.dim_w,
                    report.iso,
                    joined(&report.cotower)
                )
            } else {
                format!("{}\n", report.to_json())
            })
        }
        Command::E2 { p, q, .. } => {
            let (p, q) = (p.expect("clap enforces --p"), q.expect("clap enforces --q"));
            let dim = e2_dim(p, q).map_err(usage)?;
            Ok(if text {
                format!("{dim}\n")
            } else {
                format!("{}\n", json!({ "p": p, "q": q, "dim": dim }))
            })
        }
        Command::Weights { n } => {
            let dim = weight_space(*n).dim();
            Ok(if text {
                format!("{dim}\n")
            } else {
                format!("{}\n", json!({ "n": n, "dim": dim }))
            })
        }
        Command::Verify {
            all,
            max_n,
            golden_dir,
            bless: write,
        } => {
            if !*all {
                return Err(usage("verify needs --all"));
            }
            if *max_n == 0 {
                return Err(usage("--max-n must be at least 1"));
            }
            if *write {
                let dir = golden_dir
                    .as_ref()
                    .ok_or_else(|| usage("--bless needs --golden-dir"))?;
                let names = bless(dir, *max_n).map_err(usage)?;
                return Ok(format!("{}\n", names.join("\n")));
            }
            let report = verify_all(*max_n, golden_dir.as_deref());
            let out = if text {
                report.to_text()
            } else {
                format!("{}\n", report.to_json())
            };
            if report.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Verification)
            }
        }
        Command::KnotEval { file, invariant } => {
            let content = std::fs::read_to_string(file)
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let entries = read_codes(&content).map_err(usage)?;
            let mut rows = Vec::new();
            for e in &entries {
                let value = match invariant {
                    Invariant::V2 => extend_invariant(&V2, &e.knot),
                    Invariant::Framing => extend_invariant(&Framing, &e.knot),
                };
                rows.push((e.name.clone(), e.knot.to_string(), format_rational(&value)));
            }
            Ok(if text {
                rows.iter().map(|(n, _, v)| format!("{n}\t{v}\n")).collect()
            } else {
                let items: Vec<_> = rows
                    .iter()
                    .map(|(n, c, v)| json!({ "name": n, "code": c, "value": v }))
                    .collect();
                format!("{}\n", serde_json::Value::Array(items))
            })
        }
    }
}

/// Accepts corpus-style `name<TAB>code` lines or bare codes (named by line number).
fn read_codes(content: &str) -> Result<Vec<CorpusEntry>, String> {
    if content.contains('\t') {
        return parse_corpus(content).map_err(|e| e.to_string());
    }
    let mut out = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let knot: SingularKnot = line.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push(CorpusEntry {
            name: format!("line{}", i + 1),
            knot,
        });
    }
    Ok(out)
}
