use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tropicount::cli::{cmd_check2d, cmd_count, cmd_decompose, cmd_oracle, cmd_types, parse_param, render_pretty, CliError, Overrides};

#[derive(Parser)]
#[command(name = "tropicount", version, about = "Count rational tropical curves through affine constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Compact JSON output (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,

    /// Human-readable report instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Seed for random translations of the constraints.
    #[arg(long)]
    seed: Option<u64>,

    /// Numerator bound for random translations.
    #[arg(long = "box", value_name = "B")]
    box_bound: Option<u64>,

    /// Fail instead of translating special constraints.
    #[arg(long)]
    no_resample: bool,

    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Number of resampling attempts after the first.
    #[arg(long, env = "TROPICOUNT_MAX_RETRIES")]
    max_retries: Option<u32>,

    /// Value for a named parameter in the problem file, as name=value.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            box_bound: self.box_bound,
            no_resample: self.no_resample,
            max_retries: self.max_retries,
            threads: self.threads,
            params: self.params.iter().cloned().collect(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count curves through the constraints of a problem file.
    Count {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the combinatorial types of a degree.
    Types { file: PathBuf },
    /// Compare both sides of the plane multiplicity identity for each curve.
    Check2d {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build a polyhedral decomposition adapted to curves and a fan.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Plane curve numbers N_1..N_dmax from the recursion.
    Oracle { dmax: usize },
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let (name, result) = match &cli.command {
        Command::Count { file, run } => ("count", cmd_count(&read(file)?, &run.overrides()).map(|v| (v, true))),
        Command::Types { file } => ("types", cmd_types(&read(file)?).map(|v| (v, true))),
        Command::Check2d { file, run } => ("check2d", cmd_check2d(&read(file)?, &run.overrides())),
        Command::Decompose { file, run } => ("decompose", cmd_decompose(&read(file)?, &run.overrides()).map(|v| (v, true))),
        Command::Oracle { dmax } => ("oracle", cmd_oracle(*dmax).map(|v| (v, true))),
    };
    let (value, ok) = match result {
        Ok(r) => r,
        Err(e) => return Ok(fail(&e)),
    };
    if cli.pretty {
        print!("{}", render_pretty(name, &value));
    } else {
        println!("{}", serde_json::to_string(&value)?);
    }
    if !ok {
        eprintln!("error: some rows do not agree");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    // usage errors exit 1; 2 is reserved for non-general constraints
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
