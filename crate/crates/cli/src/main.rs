mod analyze;
mod input;
mod selftest;
mod trajectory;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entangle_core::apf::Apf;
use entangle_core::state::StateVector;

use crate::analyze::{Options, Sections};
use crate::input::{
    code_text, info_line, parse_code, read_source, Failure, Format, Loaded, SideArg,
};

/// Entanglement and code analysis of qubit states from binary linear codes
/// and bipolar sequences.
#[derive(Parser)]
#[command(name = "entangle-lab", version)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "ENTANGLE_LAB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// File path, `-` for standard input, or the literal text.
    input: String,

    /// Input format.
    #[arg(long, value_enum, default_value = "anf")]
    from: Format,

    /// Qubit count for ANF input; defaults to one past the highest variable.
    #[arg(long)]
    qubits: Option<usize>,

    /// Colour class that receives the Hadamards when deriving a code.
    #[arg(long, value_enum, default_value = "c")]
    side: SideArg,
}

impl InputArgs {
    fn load(&self) -> Result<Loaded, Failure> {
        Loaded::load(
            &read_source(&self.input)?,
            self.from,
            self.qubits,
            self.side,
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Anf,
    Code,
    Vector,
}

#[derive(Subcommand)]
enum Command {
    /// Converts between ANF, generator-matrix and state-vector forms.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        /// Output format.
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<String>,
    },
    /// Writes a JSON report of the selected analyses (all when none is given).
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        multispectra: bool,
        #[arg(long)]
        parl: bool,
        #[arg(long)]
        hierarchy: bool,
        #[arg(long)]
        se: bool,
        #[arg(long)]
        crypto: bool,
        /// Exact arithmetic (the default).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Floating-point state arithmetic.
        #[arg(long)]
        float: bool,
        /// Seed for the PAR_l optimizer.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Adds wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Prints a measurement trajectory table.
    Trajectory {
        #[command(flatten)]
        input: InputArgs,
        /// HI string applied to the input to give the measurement frame.
        #[arg(long)]
        basis: Option<String>,
        /// Most-destructive measurement order (the default without --order).
        #[arg(long, conflicts_with = "order")]
        search: bool,
        /// Qubits to measure, comma separated.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Outcome bits for --order, comma separated.
        #[arg(long, value_delimiter = ',', requires = "order")]
        outcomes: Option<Vec<u8>>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Seeded randomized cross-checks between independent code paths.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        rounds: usize,
    },
}

fn emit(text: &str, out: Option<&str>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::precondition(format!("writing {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn convert(input: &InputArgs, to: Target) -> Result<String, Failure> {
    let text = read_source(&input.input)?;
    match (input.from, to) {
        (Format::Anf, Target::Code) => {
            let a = Apf::parse(text.trim(), input.qubits)?;
            let split = a
                .is_lp()
                .ok_or_else(|| entangle_core::Error::NotBipartiteQuadratic(a.to_string()))?;
            let code = a.graph_code(input.side.side())?;
            let info = match input.side {
                SideArg::C => split.t_cperp,
                SideArg::CPerp => split.t_c,
            };
            let info: Vec<usize> = (0..a.n()).filter(|v| info >> v & 1 == 1).collect();
            Ok(code_text(&code, &info))
        }
        (Format::Code, Target::Anf) => {
            let code = parse_code(&text)?;
            let a = match info_line(&text)? {
                Some(info) => Apf::from_code_with_info(&code, &info)?,
                None => Apf::from_code(&code)?,
            };
            Ok(format!("{a}\n"))
        }
        (Format::Anf, Target::Vector) => {
            Ok(Apf::parse(text.trim(), input.qubits)?.expand()?.to_text())
        }
        (Format::Code, Target::Vector) => {
            Ok(StateVector::indicator_from_code(&parse_code(&text)?)?.to_text())
        }
        (from, _) => Err(Failure::precondition(format!(
            "conversion from {} is not supported; use anf->code, code->anf, anf->vector or code->vector",
            from.name()
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::precondition(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Convert { input, to, out } => emit(&convert(&input, to)?, out.as_deref()),
        Command::Analyze {
            input,
            multispectra,
            parl,
            hierarchy,
            se,
            crypto,
            exact: _,
            float,
            seed,
            timings,
            out,
        } => {
            let loaded = input.load()?;
            let opts = Options {
                sections: Sections {
                    multispectra,
                    parl,
                    hierarchy,
                    se,
                    crypto,
                },
                float,
                seed,
                side: input.side,
                timings,
            };
            emit(
                &json_text(&analyze::analyze(&loaded, &opts)?),
                out.as_deref(),
            )
        }
        Command::Trajectory {
            input,
            basis,
            search: _,
            order,
            outcomes,
            json,
            out,
        } => {
            let loaded = input.load()?;
            let req = trajectory::Request {
                basis: basis.as_deref(),
                order: order.as_deref(),
                outcomes: outcomes.as_deref(),
            };
            let (t, basis) = trajectory::run(&loaded, &req)?;
            let text = if json {
                json_text(&trajectory::to_json(&t, &basis))
            } else {
                trajectory::to_table(&t, &basis)
            };
            emit(&text, out.as_deref())
        }
        Command::Selftest { seed, rounds } => {
            for line in selftest::run(seed, rounds)? {
                println!("{line}");
            }
            println!("selftest passed (seed {seed})");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("entangle-lab: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
