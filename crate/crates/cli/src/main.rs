use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slicereg::compose::{compose, iterate, CompositionVariant};
use slicereg::hardy::{
    closed_form_norm, composition_matrix, h2_norm, hp_norm, norm_lower_bound, operator_norm_with,
    MatrixSide, NormOptions, QuadratureConfig,
};
use slicereg::io::{parse_series, series_to_json, to_json_string, write_series};
use slicereg::moebius::{classify, denjoy_wolff_trace};
use slicereg::verify::{run_verify, Status, VerifyReport};
use slicereg::{regular_conjugate, star_reciprocal, star_truncated, Series};

#[derive(Parser)]
#[command(name = "slicereg", version, about = "Slice regular power series, compositions and Hardy-space operators")]
struct Cli {
    /// Truncation degree for series results and operator sections.
    #[arg(long, global = true, default_value_t = 128)]
    degree: usize,
    /// Convergence tolerance for iterative computations.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for sampled grids and random sweeps.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    /// Right-linear `f ↦ f ⊙ φ`.
    C,
    /// Left-linear `f ↦ f ⊙_l φ`.
    D,
}

#[derive(Subcommand)]
enum Command {
    /// Regular product f * g.
    Star {
        f: PathBuf,
        g: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Regular conjugate f^c.
    Conjugate {
        f: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// *-reciprocal truncated to --degree.
    Reciprocal {
        f: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Composition of f with phi.
    Compose {
        f: PathBuf,
        phi: PathBuf,
        #[arg(long, default_value = "odot-right")]
        variant: CompositionVariant,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// H^p norm (p = 2 uses the coefficient formula).
    Norm {
        f: PathBuf,
        /// Exponent in [1, inf]; `inf` is accepted.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Operator norm of the composition operator on the degree-N section.
    Opnorm {
        phi: PathBuf,
        #[arg(long, value_enum, default_value_t = Side::C)]
        side: Side,
        /// Comma-separated section sizes; defaults to --degree.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// n-fold slice iterate of a slice-preserving self-map.
    Iterate {
        f: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify a slice-preserving regular Moebius map.
    Classify { f: PathBuf },
    /// Iterate toward the Denjoy-Wolff point, reporting the sup-distance trace.
    DenjoyWolff {
        f: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
    },
    /// Replay worked examples and property sweeps; exits 1 if any case fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let degree = cli.degree;
    match &cli.command {
        Command::Star { f, g, output } => {
            let r = star_truncated(&load(f)?, &load(g)?, degree);
            emit_series(cli, &r, output.as_ref())?;
        }
        Command::Conjugate { f, output } => emit_series(cli, &regular_conjugate(&load(f)?), output.as_ref())?,
        Command::Reciprocal { f, output } => {
            emit_series(cli, &star_reciprocal(&load(f)?, degree)?, output.as_ref())?
        }
        Command::Compose { f, phi, variant, output } => {
            let r = compose(&load(f)?, &load(phi)?, *variant, degree)?;
            emit_series(cli, &r, output.as_ref())?;
        }
        Command::Norm { f, p } => {
            let f = load(f)?;
            let v = if *p == 2.0 {
                json!({ "p": 2.0, "norm": h2_norm(&f), "method": "coefficients" })
            } else {
                let cfg = QuadratureConfig {
                    seed: cli.seed,
                    ..QuadratureConfig::default()
                };
                let n = hp_norm(&f, *p, &cfg)?;
                json!({ "p": p, "norm": n.value, "method": "quadrature", "monotone": n.monotone, "grid": n.grid })
            };
            emit_value(cli, &v, &[("p", "p"), ("norm", "norm")])?;
        }
        Command::Opnorm { phi, side, sizes } => {
            let phi = load(phi)?;
            let sizes = if sizes.is_empty() { vec![degree] } else { sizes.clone() };
            let side = match side {
                Side::C => MatrixSide::RightLinearC,
                Side::D => MatrixSide::LeftLinearD,
            };
            let opts = NormOptions {
                tol: cli.tol,
                seed: cli.seed,
                ..NormOptions::default()
            };
            let (lower, closed) = match phi.preserved_slice() {
                Some(_) => (Some(norm_lower_bound(&phi, 16)?), Some(closed_form_norm(&phi))),
                None => (None, None),
            };
            let rows: Vec<Value> = sizes
                .iter()
                .map(|&n| -> Result<Value> {
                    let m = composition_matrix(&phi, n, side)?;
                    let r = operator_norm_with(&m, &opts)?;
                    Ok(json!({
                        "N": n,
                        "norm": r.value,
                        "lower_bound": lower,
                        "closed_form": closed,
                        "iterations": r.iterations,
                        "residual": r.residual,
                        "method": r.method,
                    }))
                })
                .collect::<Result<_>>()?;
            let cols = [("N", "N"), ("norm", "norm"), ("lower_bound", "lower_bound"), ("closed_form", "closed_form")];
            if rows.len() == 1 {
                emit_value(cli, &rows[0], &cols)?;
            } else {
                emit_rows(cli, &Value::Array(rows), &cols)?;
            }
        }
        Command::Iterate { f, n, output } => emit_series(cli, &iterate(&load(f)?, *n, degree)?, output.as_ref())?,
        Command::Classify { f } => {
            let c = classify(&load(f)?)?;
            let v = serde_json::to_value(&c)?;
            match cli.out {
                Output::Json => println!("{}", to_json_string(&v)),
                _ => {
                    let sep = if cli.out == Output::Csv { "," } else { "  " };
                    let kind = v["kind"].as_str().unwrap_or_default();
                    println!("kind{sep}{kind}");
                    for p in &c.fixed_points {
                        let [w, x, y, z] = p.point.to_array();
                        println!(
                            "fixed_point{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}",
                            num(w),
                            num(x),
                            num(y),
                            num(z),
                            serde_json::to_value(p.location)?.as_str().unwrap_or_default(),
                            num(p.multiplier)
                        );
                    }
                }
            }
        }
        Command::DenjoyWolff { f, n_max } => {
            let dw = denjoy_wolff_trace(&load(f)?, cli.tol, *n_max)?;
            match cli.out {
                Output::Json => println!("{}", to_json_string(&dw)),
                Output::Csv | Output::Table => {
                    let sep = if cli.out == Output::Csv { "," } else { "  " };
                    println!("n{sep}sup_distance");
                    for (n, d) in dw.trace.iter().enumerate() {
                        println!("{n}{sep}{}", num(*d));
                    }
                }
            }
            if !dw.converged {
                eprintln!(
                    "warning: not converged after {} iterations (distance {:e})",
                    dw.trace.len() - 1,
                    dw.trace.last().copied().unwrap_or(f64::NAN)
                );
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { suite } => {
            let report = run_verify(suite, cli.seed);
            print!("{}", render_report(cli.out, &report));
            return Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load(path: &PathBuf) -> Result<Series> {
    parse_series(path).with_context(|| format!("reading {}", path.display()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit_series(cli: &Cli, s: &Series, output: Option<&PathBuf>) -> Result<()> {
    let s = &s.clone().trimmed();
    if let Some(path) = output {
        write_series(path, s)?;
        return Ok(());
    }
    match cli.out {
        Output::Json => println!("{}", series_to_json(s)),
        Output::Csv => {
            println!("n,w,x,y,z");
            for (n, c) in s.coeffs().iter().enumerate() {
                let [w, x, y, z] = c.to_array();
                println!("{n},{},{},{},{}", num(w), num(x), num(y), num(z));
            }
        }
        Output::Table => {
            println!("radius {}", s.radius());
            println!("{:>5}  {:>24}  {:>24}  {:>24}  {:>24}", "n", "w", "x", "y", "z");
            for (n, c) in s.coeffs().iter().enumerate() {
                let [w, x, y, z] = c.to_array();
                println!("{n:>5}  {w:>24.16e}  {x:>24.16e}  {y:>24.16e}  {z:>24.16e}");
            }
        }
    }
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit_value(cli: &Cli, v: &Value, cols: &[(&str, &str)]) -> Result<()> {
    emit_rows(cli, &Value::Array(vec![v.clone()]), cols)
}

/// JSON prints the value as is; table and CSV print the listed columns.
fn emit_rows(cli: &Cli, rows: &Value, cols: &[(&str, &str)]) -> Result<()> {
    let list = rows.as_array().context("rows must be an array")?;
    match cli.out {
        Output::Json => {
            let v = if list.len() == 1 { &list[0] } else { rows };
            println!("{}", to_json_string(v));
        }
        Output::Csv | Output::Table => {
            let sep = if cli.out == Output::Csv { "," } else { "  " };
            println!("{}", cols.iter().map(|c| c.1).collect::<Vec<_>>().join(sep));
            for r in list {
                println!("{}", cols.iter().map(|c| cell(&r[c.0])).collect::<Vec<_>>().join(sep));
            }
        }
    }
    Ok(())
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::FlaggedDiscrepancy => "FLAGGED",
        Status::Skipped => "SKIPPED",
    }
}

fn render_report(out: Output, report: &VerifyReport) -> String {
    let mut s = String::new();
    match out {
        Output::Json => {
            s = to_json_string(report);
            s.push('\n');
        }
        Output::Csv => {
            s.push_str("name,paper_anchor,status,max_error\n");
            for c in &report.cases {
                let _ = writeln!(s, "{},\"{}\",{},{}", c.name, c.anchor.replace('"', "\"\""), status_name(c.status), num(c.max_error));
            }
        }
        Output::Table => {
            let width = report.cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
            for c in &report.cases {
                let _ = writeln!(s, "{:<7}  {:<width$}  {:>10.3e}  {}", status_name(c.status), c.name, c.max_error, c.anchor);
            }
            let m = &report.summary;
            let _ = writeln!(s, "pass {}  fail {}  flagged {}  skipped {}", m.pass, m.fail, m.flagged, m.skipped);
            for n in &m.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
    }
    s
}
