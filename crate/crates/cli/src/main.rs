use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mmm_core::algebra::DegreeBound;
use mmm_core::fpgroup::{h1_certificate, PresentationFile};
use mmm_core::linalg::VectorQ;
use mmm_core::report::{run_suite, TOR_J_MAX};
use mmm_core::stable::{CoefficientLabel, StableCohomology, StableCohomologyTable};

/// Exact verification of stable twisted cohomology of mapping class groups.
#[derive(Debug, Parser)]
#[command(name = "mmm", version)]
struct Cli {
    /// Degree bound (internal degree for verify-all, cohomological degree for hilbert)
    #[arg(long, global = true, env = "MMM_DEGREE_BOUND", default_value_t = 24)]
    max_degree: usize,

    /// Worker threads; defaults to all cores
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coefficients {
    #[value(name = "Q")]
    Q,
    #[value(name = "H")]
    H,
    #[value(name = "Htilde")]
    Htilde,
    #[value(name = "HtildeDual")]
    HtildeDual,
}

impl From<Coefficients> for CoefficientLabel {
    fn from(c: Coefficients) -> Self {
        match c {
            Coefficients::Q => CoefficientLabel::Q,
            Coefficients::H => CoefficientLabel::H,
            Coefficients::Htilde => CoefficientLabel::HTilde,
            Coefficients::HtildeDual => CoefficientLabel::HTildeDual,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every check and emit the verification report; exit 0 iff all pass
    VerifyAll {
        /// Add wall-clock timings in a separate `timings` field
        #[arg(long)]
        timings: bool,
    },
    /// Dimension table by cohomological degree
    Hilbert {
        #[arg(long, value_enum)]
        coefficients: Coefficients,
    },
    /// Tor_j over A of the unit tangent bundle coefficients, against exterior powers
    Tor {
        #[arg(long, default_value_t = TOR_J_MAX)]
        j_max: usize,
    },
    /// Generators M_{i,j} of the odd part and their syzygies
    Generators,
    /// Exactness of the contraction sequence of differential forms
    Exactness,
    /// First cohomology of a finitely presented group from a JSON file
    H1 {
        file: PathBuf,
        /// Also print bases of cocycles and coboundaries
        #[arg(long)]
        certify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            usage_error(ErrorKind::InvalidValue, "--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global thread pool is configured once");
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(kind: ErrorKind, message: &str) -> ! {
    Cli::command().error(kind, message).exit()
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::VerifyAll { timings } => verify_all(cli, *timings),
        Command::Hilbert { coefficients } => hilbert(cli, (*coefficients).into()),
        Command::Tor { j_max } => tor(cli, *j_max),
        Command::Generators => generators(cli),
        Command::Exactness => exactness(cli),
        Command::H1 { file, certify } => h1(cli, file, *certify),
    }
}

fn internal_bound(cli: &Cli) -> DegreeBound {
    if cli.max_degree % 2 == 1 {
        usage_error(
            ErrorKind::InvalidValue,
            &format!("--max-degree must be even, got {}", cli.max_degree),
        );
    }
    DegreeBound::new(cli.max_degree).expect("even bound")
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn verify_all(cli: &Cli, timings: bool) -> Result<ExitCode> {
    let bound = internal_bound(cli);
    let report = run_suite(bound, timings)?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(cli, &text)?;
    match report.first_failure() {
        None => Ok(ExitCode::SUCCESS),
        Some(c) => {
            eprintln!("check {} failed", c.check_id);
            Ok(ExitCode::from(1))
        }
    }
}

fn hilbert(cli: &Cli, label: CoefficientLabel) -> Result<ExitCode> {
    // odd-degree classes of F sit one internal degree higher, even-degree
    // classes of the dual need room for the image in F
    let max = cli.max_degree;
    let bound = DegreeBound::new(if max.is_multiple_of(2) {
        max + 2
    } else {
        max + 1
    })?;
    let stable = StableCohomology::new(bound)?;
    let mut table = stable.table(label)?;
    truncate(&mut table, max);
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&table)?,
        Format::Csv => {
            let mut out = String::from("cohomological_degree,dim\n");
            for (c, d) in &table.dims {
                out.push_str(&format!("{c},{d}\n"));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (c, d) in &table.dims {
                out.push_str(&format!("{c}\t{d}\n"));
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn truncate(table: &mut StableCohomologyTable, max: usize) {
    table.dims.retain(|c, _| *c <= max);
    if let Some(g) = table.generator_report.as_mut() {
        g.retain(|c, _| *c <= max);
    }
}

fn tor(cli: &Cli, j_max: usize) -> Result<ExitCode> {
    let stable = StableCohomology::new(internal_bound(cli))?;
    let report = stable.verify_tor_theorem(j_max)?;
    let rows: Vec<(usize, usize, usize)> = report
        .results
        .iter()
        .flat_map(|t| t.dims.iter().map(move |(d, n)| (t.j, *d, *n)))
        .filter(|(_, d, _)| d % 2 == 0)
        .collect();
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = String::from("j,internal_degree,dim\n");
            for (j, d, n) in rows {
                out.push_str(&format!("{j},{d},{n}\n"));
            }
            out
        }
        Format::Text => {
            let mut out = String::from("j\tdegree\tdim\n");
            for (j, d, n) in rows {
                out.push_str(&format!("{j}\t{d}\t{n}\n"));
            }
            for m in &report.mismatches {
                out.push_str(&format!(
                    "mismatch: j={} degree={} computed {} expected {}\n",
                    m.j, m.internal_degree, m.computed, m.expected
                ));
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn generators(cli: &Cli) -> Result<ExitCode> {
    let stable = StableCohomology::new(internal_bound(cli))?;
    let report = stable.verify_generators_mij()?;
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = String::from(
                "internal_degree,cohomological_degree,kernel_dim,span_rank,minimal_generators,wedge2_dim\n",
            );
            for r in &report.per_degree {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.internal_degree,
                    r.cohomological_degree,
                    r.kernel_dim,
                    r.span_rank,
                    r.minimal_generators,
                    r.wedge2_dim
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::from("degree\tkernel\tspan\tgenerators\tΛ²E\n");
            for r in report.per_degree.iter().filter(|r| r.internal_degree > 0) {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    r.cohomological_degree,
                    r.kernel_dim,
                    r.span_rank,
                    r.minimal_generators,
                    r.wedge2_dim
                ));
            }
            out.push_str(&format!("syzygies checked: {}\n", report.syzygies_checked));
            if let Some(c) = &report.counterexample {
                out.push_str(&format!("counterexample: {c}\n"));
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn exactness(cli: &Cli) -> Result<ExitCode> {
    let stable = StableCohomology::new(internal_bound(cli))?;
    let forms = stable.forms();
    let reports = (1..=cli.max_degree)
        .map(|d| forms.verify_exactness(d))
        .collect::<mmm_core::Result<Vec<_>>>()?;
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&reports)?,
        Format::Csv | Format::Text => {
            let sep = if cli.format == Some(Format::Csv) {
                ","
            } else {
                "\t"
            };
            let mut out = [
                "internal_degree",
                "form_degree",
                "dim",
                "rank_in",
                "rank_out",
                "exact",
            ]
            .join(sep)
                + "\n";
            for r in &reports {
                for s in &r.spots {
                    out.push_str(
                        &[
                            r.internal_degree.to_string(),
                            s.form_degree.to_string(),
                            s.dim.to_string(),
                            s.rank_in.to_string(),
                            s.rank_out.to_string(),
                            s.exact.to_string(),
                        ]
                        .join(sep),
                    );
                    out.push('\n');
                }
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(if reports.iter().all(|r| r.exact) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn h1(cli: &Cli, file: &Path, certify: bool) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let input = PresentationFile::from_json(&text)?;
    let (pres, rep) = input.build()?;
    let cert = h1_certificate(&pres, &rep)?;
    let dense = |vs: &[VectorQ]| -> Vec<Vec<String>> {
        vs.iter()
            .map(|v| v.to_dense().iter().map(ToString::to_string).collect())
            .collect()
    };
    let out = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let mut value = json!({ "h1_dim": cert.dimension });
            if certify {
                value["cocycles"] = json!(dense(&cert.cocycles));
                value["coboundaries"] = json!(dense(&cert.coboundaries));
            }
            to_json(&value)?
        }
        Format::Csv => {
            let mut out = String::from("kind,index,coordinates\n");
            out.push_str(&format!("h1_dim,0,{}\n", cert.dimension));
            if certify {
                for (kind, vs) in [
                    ("cocycle", &cert.cocycles),
                    ("coboundary", &cert.coboundaries),
                ] {
                    for (k, v) in dense(vs).iter().enumerate() {
                        out.push_str(&format!("{kind},{k},{}\n", v.join(" ")));
                    }
                }
            }
            out
        }
        Format::Text => {
            let mut out = format!("{}\n", cert.dimension);
            if certify {
                for (kind, vs) in [("Z1", &cert.cocycles), ("B1", &cert.coboundaries)] {
                    out.push_str(&format!("{kind} basis ({}):\n", vs.len()));
                    for v in dense(vs) {
                        out.push_str(&format!("  [{}]\n", v.join(", ")));
                    }
                }
            }
            out
        }
    };
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}
