use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use bloch_poincare::scenario::{
    emit, parse_batch, run, run_batch, summary, Format, Kind, Overrides, ScenarioConfig, ScenarioError, ScenarioResult,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bloch-poincare", version, about = "Run optimal-evolution and polarization scenarios from JSON files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an optimal Hamiltonian and sample its trajectory.
    Evolve(Common),
    /// Find the frame of maximal degree of coherence.
    OptimizeCoherence(Common),
    /// Lift a Jones matrix to Stokes space or classify a Mueller matrix.
    Mueller(Common),
    /// Sweep the two-beam interference law over analyzer settings.
    Interference(Common),
    /// Pair a quantum and an optical scenario and check each correspondence.
    Correspondence(Common),
    /// Run every scenario of a `{"scenarios": [...]}` file concurrently.
    Batch(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Configuration file; standard input when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Endpoint fidelity tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Read angles in the configuration as degrees.
    #[arg(long)]
    degrees: bool,
    /// Seed for Mueller classification probes.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            hbar: self.hbar,
            tolerance: self.tolerance,
            degrees: self.degrees,
            seed: self.seed,
            output: self.output.clone(),
            format: self.format.map(|f| match f {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            }),
        }
    }

    fn read_config(&self) -> ScenarioResult<String> {
        match &self.config {
            Some(p) => std::fs::read_to_string(p).map_err(|e| ScenarioError::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| ScenarioError::Io(format!("stdin: {e}")))?;
                Ok(s)
            }
        }
    }
}

fn single(kind: Kind, args: &Common) -> ScenarioResult<()> {
    let cfg = ScenarioConfig::parse(&args.read_config()?, Some(kind), &args.overrides())?;
    let out = run(&cfg)?;
    if let Some(text) = emit(&out, &cfg.output)? {
        print!("{text}");
    } else {
        eprintln!("{}", summary(&out));
    }
    Ok(())
}

fn batch(args: &Common) -> ScenarioResult<()> {
    let mut overrides = args.overrides();
    if overrides.output.take().is_some() {
        return Err(ScenarioError::Schema(
            "--output is per scenario in a batch; set `output.path` in each entry".into(),
        ));
    }
    let cfgs = parse_batch(&args.read_config()?, &overrides)?;
    let mut first_err = None;
    for (i, (cfg, res)) in cfgs.iter().zip(run_batch(&cfgs)).enumerate() {
        let res = res.and_then(|out| emit(&out, &cfg.output).map(|text| (out, text)));
        match res {
            Ok((_, Some(text))) => print!("{text}"),
            Ok((out, None)) => eprintln!("scenarios[{i}]: {}", summary(&out)),
            Err(e) => {
                eprintln!("scenarios[{i}]: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Evolve(a) => single(Kind::Evolve, a),
        Command::OptimizeCoherence(a) => single(Kind::OptimizeCoherence, a),
        Command::Mueller(a) => single(Kind::Mueller, a),
        Command::Interference(a) => single(Kind::Interference, a),
        Command::Correspondence(a) => single(Kind::Correspondence, a),
        Command::Batch(a) => batch(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bloch-poincare: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
