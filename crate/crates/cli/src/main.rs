use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spso_core::bench::{run_benchmark, write_outputs, BenchError, BenchmarkSpec};
use spso_core::export::{export_convergence_csv, export_cost_csv, export_waypoints_csv, format_float, ExportError};
use spso_core::suite::{build_benchmark_suite, SuiteEntry};
use spso_core::{load_scenario, run, Algorithm, ConfigError, Scenario, ScenarioConfig, SwarmConfig};

#[derive(Parser)]
#[command(name = "spso", version, about = "UAV path planning with swarm optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one path and write its waypoints, cost and convergence trace
    Plan(PlanArgs),
    /// Run a scenario x algorithm x run matrix and write a summary table
    Bench(BenchArgs),
    /// Built-in benchmark suite
    Suite {
        #[command(subcommand)]
        command: SuiteCommand,
    },
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// Write the eight suite scenarios as TOML files with their terrains
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "suite")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SwarmArgs {
    /// Iterations per run
    #[arg(long)]
    iters: Option<usize>,
    /// Swarm (population) size
    #[arg(long)]
    swarm: Option<usize>,
}

impl SwarmArgs {
    fn config(&self) -> SwarmConfig {
        let d = SwarmConfig::default();
        SwarmConfig {
            max_iterations: self.iters.unwrap_or(d.max_iterations),
            swarm_size: self.swarm.unwrap_or(d.swarm_size),
            ..d
        }
    }
}

#[derive(Args)]
struct PlanArgs {
    scenario: PathBuf,
    #[arg(long, default_value = "spso")]
    algo: String,
    #[command(flatten)]
    swarm: SwarmArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Use the built-in suite generated from this seed (the default, seed 0)
    #[arg(long, conflicts_with = "scenarios")]
    suite_seed: Option<u64>,
    /// Comma-separated scenario files; each is named by its file stem
    #[arg(long, value_delimiter = ',')]
    scenarios: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "spso,pso,theta_pso,qpso,ga,de,abc")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value = "spso")]
    baseline: String,
    #[command(flatten)]
    swarm: SwarmArgs,
    /// Base seed every per-run seed is derived from
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "bench")]
    out: PathBuf,
    /// Maximum concurrent runs (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

enum Failure {
    Run(String),
    Config(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Run(_) => 1,
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Run(m) | Failure::Config(m) | Failure::Io(m) => m,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Invalid(_) | BenchError::Optimize(_) => Failure::Config(e.to_string()),
            BenchError::Export(_) | BenchError::Io { .. } => Failure::Io(e.to_string()),
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))
}

fn parse_algorithm(name: &str) -> Result<Algorithm, Failure> {
    name.parse()
        .map_err(|e: spso_core::OptimizeError| Failure::Config(e.to_string()))
}

fn plan(args: PlanArgs) -> Result<(), Failure> {
    let algorithm = parse_algorithm(&args.algo)?;
    let scenario = load_scenario(&args.scenario)?;
    let config = SwarmConfig {
        seed: args.seed,
        ..args.swarm.config()
    }
    .equal_budget(algorithm);
    let outcome = run(algorithm, &scenario, &config).map_err(|e| Failure::Config(e.to_string()))?;
    let trace = outcome.trace();
    create_dir(&args.out)?;
    export_waypoints_csv(&trace.best_path, args.out.join("waypoints.csv"))?;
    export_cost_csv(&trace.best_cost, args.out.join("cost.csv"))?;
    export_convergence_csv(trace, args.out.join("convergence.csv"))?;
    let c = &trace.best_cost;
    println!("algorithm   {algorithm}");
    println!("total cost  {}", format_float(c.total, 6));
    println!(
        "terms       F1 {}  F2 {}  F3 {}  F4 {}",
        format_float(c.f1, 3),
        format_float(c.f2, 3),
        format_float(c.f3, 3),
        format_float(c.f4, 3)
    );
    println!("feasible    {}", outcome.is_feasible());
    println!("written to  {}", args.out.display());
    if outcome.is_feasible() {
        Ok(())
    } else {
        Err(Failure::Run("no feasible path found".into()))
    }
}

fn bench_scenarios(args: &BenchArgs) -> Result<Vec<(String, Scenario)>, Failure> {
    if args.scenarios.is_empty() {
        let suite = build_benchmark_suite(args.suite_seed.unwrap_or(0)).map_err(|e| Failure::Config(e.to_string()))?;
        return Ok(suite.into_iter().map(|e| (e.name(), e.scenario)).collect());
    }
    args.scenarios
        .iter()
        .map(|p| {
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .ok_or_else(|| Failure::Config(format!("{}: not a file path", p.display())))?;
            Ok((id, load_scenario(p)?))
        })
        .collect()
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let algorithms = args
        .algos
        .iter()
        .map(|a| parse_algorithm(a))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = BenchmarkSpec {
        scenarios: bench_scenarios(&args)?,
        algorithms,
        runs_per_cell: args.runs,
        config: args.swarm.config(),
        baseline: parse_algorithm(&args.baseline)?,
        base_seed: args.seed,
        jobs: args.jobs,
    };
    spec.validate()?;
    create_dir(&args.out)?;
    let result = run_benchmark(&spec)?;
    write_outputs(&spec, &result, &args.out)?;
    println!(
        "{:<10} {:<10} {:>12} {:>10} {:>9} {:>10} {:>4} {:>8}",
        "scenario", "algorithm", "mean", "std", "t", "p", "", "feasible"
    );
    for r in &result.summary {
        println!(
            "{:<10} {:<10} {:>12} {:>10} {:>9} {:>10} {:>4} {:>5}/{}",
            r.scenario,
            r.algorithm,
            format_float(r.mean, 3),
            format_float(r.std, 3),
            format_float(r.t, 3),
            format_float(r.p, 4),
            r.verdict,
            r.feasible,
            r.runs
        );
    }
    println!(
        "{} runs, summary in {}",
        result.runs.len(),
        args.out.join("summary.csv").display()
    );
    if result.all_cells_feasible() {
        Ok(())
    } else {
        Err(Failure::Run("some cells produced no feasible run".into()))
    }
}

fn write_suite_entry(entry: &SuiteEntry, out: &Path) -> Result<(), Failure> {
    let config = ScenarioConfig::describe(&entry.scenario, &format!("terrain_{}.asc", entry.terrain_index + 1));
    let file = out.join(format!("{}.toml", entry.name()));
    let kind = if entry.complicated { "complicated" } else { "simple" };
    let text = format!("# suite scenario {} ({kind})\n{}", entry.id, config.to_toml());
    fs::write(&file, text).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
    export_waypoints_csv(&entry.witness, out.join(format!("{}_witness.csv", entry.name())))?;
    Ok(())
}

fn suite_generate(seed: u64, out: &Path) -> Result<(), Failure> {
    let suite = build_benchmark_suite(seed).map_err(|e| Failure::Config(e.to_string()))?;
    create_dir(out)?;
    let mut terrains_written = [false; 2];
    for entry in &suite {
        let k = entry.terrain_index;
        if !terrains_written[k] {
            let file = out.join(format!("terrain_{}.asc", k + 1));
            entry
                .scenario
                .terrain
                .save_esri_ascii(&file)
                .map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            terrains_written[k] = true;
        }
        write_suite_entry(entry, out)?;
    }
    println!("wrote {} scenarios to {}", suite.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan(args) => plan(args),
        Command::Bench(args) => bench(args),
        Command::Suite {
            command: SuiteCommand::Generate { seed, out },
        } => suite_generate(seed, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
