use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use traffic_web::app::{self, RunConfig};
use traffic_web::io::format_g17;
use traffic_web::ModelParams;

#[derive(Debug, Parser)]
#[command(
    name = "traffic-web",
    version,
    about = "Grow and analyse traffic-driven weighted web graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow one graph and write its edge list, node table and trajectories.
    Generate(ModelArgs),
    /// Measure distributions, exponents and spectra of an edge list.
    Analyze(AnalyzeArgs),
    /// Print mean-field predictions for a parameter point.
    Predict(PredictArgs),
    /// Run independent growths with seeds seed, seed+1, ... and aggregate them.
    Ensemble(ModelArgs),
    /// Compare measured exponents with both prediction pathways.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Out-links per new node.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Reinforcement per new in-link.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Seed ring size [default: m + 1].
    #[arg(long)]
    n0: Option<usize>,
    /// Final node count.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1.3)]
    bin_ratio: f64,
    #[arg(long, default_value_t = 10.0)]
    xmin: f64,
    /// Comma-separated birth steps of nodes whose growth is recorded.
    #[arg(long, value_delimiter = ',')]
    track: Vec<usize>,
    /// Write edge lists and node tables for every ensemble run.
    #[arg(long)]
    write_graphs: bool,
}

impl ModelArgs {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let params = ModelParams::new(
            self.m,
            self.delta,
            self.n0.unwrap_or(self.m + 1),
            self.n,
            self.seed,
        )?;
        let mut config = RunConfig::new(params, &self.out_dir);
        config.runs = self.runs;
        config.bin_ratio = self.bin_ratio;
        config.x_min = self.xmin;
        config.tracked = self.track.clone();
        config.write_graphs = self.write_graphs;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "analysis")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1.3)]
    bin_ratio: f64,
    #[arg(long, default_value_t = 10.0)]
    xmin: f64,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Strength/degree constant; defaults to delta + 1.
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Compare an existing edge list instead of growing a new graph.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(args) => {
            let config = args.config()?;
            let result = app::run_generate(&config);
            match &result {
                Ok(out) => {
                    print!("{}", app::format_invariants(&out.invariants));
                    for p in &out.paths {
                        eprintln!("wrote {}", p.display());
                    }
                }
                Err(_) => {
                    let inv = config.out_dir.join("invariants.tsv");
                    if let Ok(text) = std::fs::read_to_string(&inv) {
                        print!("{text}");
                    }
                }
            }
            result.context("generate failed")?;
        }
        Command::Analyze(args) => {
            let params = ModelParams::new(1, 0.0, 2, 2, 0)?;
            let mut config = RunConfig::new(params, &args.out_dir);
            config.bin_ratio = args.bin_ratio;
            config.x_min = args.xmin;
            config.input = Some(args.input.clone());
            config.validate()?;
            let (report, paths) = app::run_analyze(&config)
                .with_context(|| format!("analyzing {}", args.input.display()))?;
            for (k, v) in report.summary() {
                println!("{k}\t{}", format_g17(v));
            }
            for p in &paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Predict(args) => {
            print!("{}", app::run_predict(args.m, args.delta, args.a)?);
        }
        Command::Ensemble(args) => {
            let config = args.config()?;
            let report = app::run_ensemble(&config).context("ensemble failed")?;
            println!("# key\tmean\tstddev\truns");
            for (k, mean, sd, n) in &report.aggregate {
                println!("{k}\t{}\t{}\t{n}", format_g17(*mean), format_g17(*sd));
            }
        }
        Command::Compare(args) => {
            let mut config = args.model.config()?;
            config.input = args.input;
            print!("{}", app::run_compare(&config)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
