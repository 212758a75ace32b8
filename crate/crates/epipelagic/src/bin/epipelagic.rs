use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use epipelagic::cli::{self, exit_code};
use epipelagic::Error;

/// Endoscopic lifts and L-packets of epipelagic representations.
#[derive(Parser)]
#[command(name = "epipelagic", version)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lift a stratum to its cuspidal support on the general linear side.
    Lift {
        #[arg(long)]
        input: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Enumerate the L-packet of a stratum's signs.
    Packet {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check closed forms against brute force.
    Verify {
        /// gauss, quadform, hecke, concordance, packets or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "p", value_delimiter = ',', default_values_t = [3u32, 5, 7])]
        primes: Vec<u32>,
    },
    /// Gauss sum of a diagonal form over F_p.
    Gauss {
        #[arg(long)]
        p: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        form: Vec<i64>,
    },
}

fn verbose() -> bool {
    std::env::var("EPIPELAGIC_VERBOSE").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn emit(text: String, output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Schema(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Result<i32, Error> {
    match cmd {
        Cmd::Lift { input, output, format } => {
            let text = read(&input)?;
            let out = match format {
                Format::Json => cli::render(&cli::run_lift(&text)?),
                Format::Table => cli::lift_table(&text)? + "\n",
            };
            emit(out, output.as_ref())?;
        }
        Cmd::Packet { input, format } => {
            let text = read(&input)?;
            let out = match format {
                Format::Json => cli::render(&cli::run_packet(&text)?),
                Format::Table => cli::packet_table(&text)? + "\n",
            };
            emit(out, None)?;
        }
        Cmd::Verify { suite, primes } => {
            let (report, json) = cli::run_verify_json(&suite, &primes)?;
            if verbose() {
                for c in &report.checks {
                    eprintln!("{:?} {} p={} {} {}", c.status, c.suite, c.p, c.name, c.detail.as_deref().unwrap_or(""));
                }
            }
            emit(cli::render(&json), None)?;
            if !report.all_pass() {
                return Ok(cli::EXIT_FAILED);
            }
        }
        Cmd::Gauss { p, form } => emit(cli::render(&cli::run_gauss(p, &form)?), None)?,
    }
    Ok(cli::EXIT_OK)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match run(args.cmd) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
