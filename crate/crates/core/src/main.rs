use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biait::bench::{
    builtin_world, emit_svg, load_scenario, load_trace, run_bench, run_trial, save_scenario,
    save_trace, summarize, write_csv, write_summary_csv, Scenario, WorldParams, WORLDS,
};
use biait::sampling::Variational;
use biait::{Algorithm, Error, PlannerConfig, Result, Status};

#[derive(Parser)]
#[command(name = "biait", version, about = "Bidirectional anytime path planning benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded trial and write its trace.
    Run(RunArgs),
    /// Run seeded trials for several planners and write metrics as CSV.
    Bench(BenchArgs),
    /// Render a 2D trace as SVG.
    EmitSvg {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the built-in worlds.
    Worlds {
        /// Also write each world as a scenario file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file, or the name of a built-in world.
    #[arg(long)]
    scenario: String,
    /// Dimension for `empty-d`.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Seed of the `maze2d` generator.
    #[arg(long, default_value_t = 3)]
    maze_seed: u64,
}

#[derive(Args)]
struct TuningArgs {
    #[arg(long, default_value_t = 1000)]
    time_budget_ms: u64,
    #[arg(long)]
    target_cost: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// Exponential batch schedule as INIT,ALPHA.
    #[arg(long, value_parser = parse_variational)]
    variational: Option<Variational>,
    #[arg(long)]
    p_near: Option<f64>,
    #[arg(long)]
    max_batches: Option<usize>,
    /// Stop at the first solution.
    #[arg(long)]
    first: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, value_parser = parse_algorithm)]
    planner: Algorithm,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Record the full event log in the trace.
    #[arg(long)]
    events: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated planner list.
    #[arg(long, default_value = "biait,ait", value_delimiter = ',', value_parser = parse_algorithm)]
    planners: Vec<Algorithm>,
    /// Inclusive range A..B, or a comma-separated list.
    #[arg(long, default_value = "1..10", value_parser = parse_seeds)]
    seeds: Seeds,
    #[arg(long, default_value_t = 1)]
    trials_parallel: usize,
    #[command(flatten)]
    tuning: TuningArgs,
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Clone)]
struct Seeds(Vec<u64>);

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    Algorithm::parse(s).map_err(|e| e.to_string())
}

fn parse_variational(s: &str) -> std::result::Result<Variational, String> {
    let (init, alpha) = s.split_once(',').ok_or("expected INIT,ALPHA")?;
    let init = init.trim().parse().map_err(|e| format!("INIT: {e}"))?;
    let alpha = alpha.trim().parse().map_err(|e| format!("ALPHA: {e}"))?;
    Ok(Variational::new(init, alpha))
}

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|e| format!("seed `{x}`: {e}")))
            .collect::<std::result::Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err("empty seed set".into());
    }
    Ok(Seeds(seeds))
}

fn resolve_scenario(args: &ScenarioArgs) -> Result<Scenario> {
    let path = Path::new(&args.scenario);
    if path.exists() || WORLDS.iter().all(|(n, _)| *n != args.scenario) && !args.scenario.starts_with("empty-") {
        return load_scenario(path);
    }
    let params = WorldParams {
        dim: args.dim,
        maze_seed: args.maze_seed,
    };
    builtin_world(&args.scenario, &params)
}

fn config(t: &TuningArgs) -> PlannerConfig {
    let mut cfg = PlannerConfig::default();
    cfg.termination.time_budget_ms = Some(t.time_budget_ms);
    cfg.termination.target_cost = t.target_cost;
    cfg.termination.max_batches = t.max_batches;
    cfg.termination.stop_on_first_solution = t.first;
    if let Some(b) = t.batch_size {
        cfg.sampler.batch_size = b;
    }
    cfg.sampler.variational = t.variational;
    if let Some(p) = t.p_near {
        cfg.sampler.p_near = p;
    }
    cfg
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let scenario = resolve_scenario(&args.scenario)?;
    let mut cfg = config(&args.tuning);
    cfg.record_events = args.events;
    let trial = run_trial(&scenario, args.planner, &cfg, args.seed)?;
    save_trace(&trial.trace, &args.out)?;
    let m = &trial.metrics;
    println!(
        "{} on {} seed {}: {} c_init={} t_init_ms={} c_best={} lazy_pops={} edge_pops={} collision_checks={}",
        m.planner.name(),
        m.world,
        m.seed,
        m.status.as_str(),
        fmt_opt(m.c_init),
        fmt_opt(m.t_init_ms),
        fmt_opt(m.c_best),
        m.n_lazy_pops(),
        m.n_edge_pops,
        m.n_collision_checks
    );
    Ok(if m.status == Status::Failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.summary.csv"))
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let scenario = resolve_scenario(&args.scenario)?;
    let cfg = config(&args.tuning);
    cfg.validate()?;
    let rows = run_bench(&scenario, &args.planners, &cfg, &args.seeds.0, args.trials_parallel)?;
    write_csv(&rows, std::fs::File::create(&args.csv)?)?;
    let summary = summarize(&rows);
    write_summary_csv(&summary, std::fs::File::create(summary_path(&args.csv))?)?;
    for s in &summary {
        println!(
            "{:>6} {}: solved {}/{}  t_init_ms median {} [{}, {}]  c_init median {} [{}, {}]",
            s.planner.name(),
            s.world,
            s.solved,
            s.trials,
            fmt_opt(s.t_init_median),
            fmt_opt(s.t_init_q1),
            fmt_opt(s.t_init_q3),
            fmt_opt(s.c_init_median),
            fmt_opt(s.c_init_q1),
            fmt_opt(s.c_init_q3)
        );
    }
    Ok(if rows.iter().all(|r| r.status == Status::Failed) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn worlds(export: Option<PathBuf>) -> Result<ExitCode> {
    for (name, about) in WORLDS {
        println!("{name:<10} {about}");
    }
    if let Some(dir) = export {
        std::fs::create_dir_all(&dir)?;
        for (name, _) in WORLDS {
            let s = builtin_world(name, &WorldParams::default())?;
            save_scenario(&s, dir.join(format!("{}.json", s.name)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::EmitSvg { trace, out } => {
            emit_svg(&load_trace(trace)?, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Worlds { export } => worlds(export),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Io(_) = e {
                eprintln!("hint: check the file paths");
            }
            ExitCode::from(2)
        }
    }
}
