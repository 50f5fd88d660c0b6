use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equilibria::exact::{parse_rational, Rational};
use equilibria_cli::{emit_instance, emit_result, parse_instance, parse_result, run, CliError, CliResult, Command, Flags, Format, Output};

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("{s:?} is not an integer or num/den rational"))
}

#[derive(Parser)]
#[command(name = "equilibria", version, about = "Exact equilibrium and fixed-point solvers with checkable certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Accuracy for approximate solvers, as `num/den`.
    #[arg(long, global = true, value_parser = rational)]
    epsilon: Option<Rational>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Solver variant; the choices depend on the instance kind.
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Work cap (steps, pivots, iterations or bits). Defaults to $EQUILIBRIA_CAP.
    #[arg(long, global = true, alias = "iter-cap")]
    cap: Option<u64>,
    /// Record wall-clock time in the result.
    #[arg(long, global = true)]
    timing: bool,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Instance document, or `-` for stdin.
    instance: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance and emit a result with its certificate.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Cross-check against the exhaustive oracle.
        #[arg(long)]
        oracle_check: bool,
        /// Lemke-Howson starting label.
        #[arg(long)]
        dropped_label: Option<usize>,
        /// Initial Scarf grid pitch.
        #[arg(long, value_parser = rational)]
        pitch: Option<Rational>,
        /// Scarf refinements before giving up.
        #[arg(long)]
        retries: Option<usize>,
        /// Stopping probability for the discounted SSG method.
        #[arg(long, value_parser = rational)]
        beta: Option<Rational>,
        /// Largest parity label accepted.
        #[arg(long)]
        label_cap: Option<u32>,
    },
    /// Answer a yes/no question about one node or the instance.
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        node: Option<usize>,
        /// Is the value at `--node` at least this?
        #[arg(long, value_parser = rational)]
        threshold: Option<Rational>,
        /// Largest parity label accepted.
        #[arg(long)]
        label_cap: Option<u32>,
    },
    /// Re-validate a result (or a fresh solve) with the module's checker.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Result document to check; solves afresh when absent.
        #[arg(long)]
        result: Option<PathBuf>,
    },
    /// Exhaustive reference answer for small instances.
    Oracle {
        #[command(flatten)]
        input: Input,
    },
    /// Emit the associated self-map as a circuit document.
    ExportCircuit {
        #[command(flatten)]
        input: Input,
        /// `division-free` (default) or `division`.
        #[arg(long)]
        form: Option<String>,
    },
}

fn read(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn main_inner(cli: Cli) -> CliResult<String> {
    let g = cli.global;
    let mut flags = Flags { epsilon: g.epsilon, seed: g.seed, method: g.method, cap: g.cap, timing: g.timing, ..Flags::default() };
    let (command, input) = match cli.command {
        Cmd::Solve { input, oracle_check, dropped_label, pitch, retries, beta, label_cap } => {
            flags.oracle_check = oracle_check;
            flags.dropped_label = dropped_label;
            flags.pitch = pitch;
            flags.retries = retries;
            flags.beta = beta;
            flags.label_cap = label_cap;
            (Command::Solve, input)
        }
        Cmd::Decide { input, node, threshold, label_cap } => {
            flags.node = node;
            flags.threshold = threshold;
            flags.label_cap = label_cap;
            (Command::Decide, input)
        }
        Cmd::Certify { input, result } => {
            flags.result = result.map(|p| read(&p).and_then(|t| parse_result(&t))).transpose()?;
            (Command::Certify, input)
        }
        Cmd::Oracle { input } => (Command::Oracle, input),
        Cmd::ExportCircuit { input, form } => {
            flags.form = form;
            (Command::ExportCircuit, input)
        }
    };
    let doc = parse_instance(&read(&input.instance)?)?;
    let text = match run(&doc, command, &flags)? {
        Output::Result(r) => emit_result(&r, g.format),
        Output::Instance(d) => emit_instance(&d),
    };
    match g.output {
        Some(p) => {
            std::fs::write(&p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("equilibria: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
