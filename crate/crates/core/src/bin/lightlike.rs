use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lightlike::ambient::{sample_box, StructureReport};
use lightlike::analysis::{analyze, Options};
use lightlike::error::exit;
use lightlike::reproduce::reproduce;
use lightlike::scenario::Scenario;
use lightlike::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lightlike",
    version,
    about = "Analyze lightlike submanifolds of almost contact metric manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the submanifold described by a scenario file.
    Analyze {
        file: PathBuf,
        /// Override both verdict tolerances.
        #[arg(long)]
        tol: Option<f64>,
        /// Number of random sample points (or explicit points kept).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare a bundled worked example with its closed-form values.
    Reproduce {
        #[arg(value_parser = ["4-3", "4-5", "5-2"])]
        example: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the almost contact identities of a scenario's ambient space.
    CheckStructure {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Half-width of the coordinate box the points are drawn from.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn structure_text(name: &str, r: &StructureReport) -> String {
    let mut out = format!(
        "ambient of {name}: {} points, seed {}, mu = {}, tol {:e}\n",
        r.points, r.seed, r.mu, r.tol
    );
    for (k, v) in &r.residuals {
        let mark = match r.verdicts.get(k) {
            Some(true) => "ok  ",
            Some(false) => "FAIL",
            None => "    ",
        };
        out.push_str(&format!("  {mark} {k:<24} {v:.3e}\n"));
    }
    out.push_str(if r.passed() {
        "result  pass\n"
    } else {
        "result  FAIL\n"
    });
    out
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze {
            file,
            tol,
            samples,
            seed,
            out,
            format,
        } => {
            let scn = Scenario::load(&file)?;
            let report = analyze(&scn, &Options { tol, samples, seed })?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            emit(&text, out.as_ref())?;
            Ok(if report.passed() {
                exit::PASS
            } else {
                exit::VERDICT_FAILURE
            })
        }
        Command::Reproduce { example, format } => {
            let r = reproduce(&example)?;
            let text = match format {
                Format::Text => r.to_text(),
                Format::Json => serde_json::to_string_pretty(&r).expect("serializable") + "\n",
            };
            print!("{text}");
            Ok(if r.passed() {
                exit::PASS
            } else {
                exit::VERDICT_FAILURE
            })
        }
        Command::CheckStructure {
            file,
            samples,
            seed,
            tol,
            radius,
            format,
        } => {
            let scn = Scenario::load(&file)?;
            let seed = seed.unwrap_or(scn.samples.seed);
            let n = scn.space.dim();
            let points = sample_box(&vec![(-radius, radius); n], samples, seed);
            let tol = tol.unwrap_or(scn.tolerances.algebraic);
            let r = scn.space.check_structure(&points, seed, tol)?;
            let text = match format {
                Format::Text => structure_text(&scn.name, &r),
                Format::Json => serde_json::to_string_pretty(&r).expect("serializable") + "\n",
            };
            print!("{text}");
            Ok(if r.passed() {
                exit::PASS
            } else {
                exit::VERDICT_FAILURE
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
