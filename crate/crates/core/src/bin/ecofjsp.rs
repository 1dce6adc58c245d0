use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use ecofjsp::cli::{
    self, load_enriched, parse_front, tradeoff_table, FrontFormat, InstanceSource, MarketSource,
    RunManifest, SolveRequest, DEFAULT_DELTAS,
};
use ecofjsp::decode::CapRule;
use ecofjsp::exact::{self, BruteForceLimits, MilpEmission, Objective};
use ecofjsp::model::{benchmark, SyntheticMarket};

#[derive(Parser)]
#[command(
    name = "ecofjsp",
    version,
    about = "Energy-aware flexible job shop scheduling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the memetic NSGA-III and write front, Gantt, trade-off and manifest files.
    Solve(SolveArgs),
    /// Trade-off table of a saved front.
    Analyze {
        front: PathBuf,
        #[arg(long, default_value = "ms")]
        axis_a: Objective,
        #[arg(long, default_value = "ec")]
        axis_b: Objective,
        /// Relative increases of axis A in percent.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_DELTAS.to_vec())]
        deltas: Vec<f64>,
    },
    /// Exact Pareto front of a tiny instance by enumeration.
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 6)]
        max_ops: usize,
        #[arg(long, default_value_t = 24)]
        max_horizon: usize,
        /// Write the front here as JSON instead of printing CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the mixed-integer model in LP format.
    EmitMilp {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "ec")]
        objective: Objective,
        #[arg(long)]
        eps_ms: Option<f64>,
        #[arg(long)]
        eps_ec: Option<f64>,
        #[arg(long)]
        eps_em: Option<f64>,
        /// Big-M constant, at least twice the horizon.
        #[arg(long)]
        big_l: Option<f64>,
        #[arg(long, default_value_t = 200_000)]
        max_variables: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Synthetic hourly market CSV.
    GenMarket {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 168)]
        hours: usize,
        #[arg(long, default_value_t = 0.72)]
        correlation: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Repeat a solve from its manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// Instance file, or a benchmark name such as mk01.
    instance: String,
    /// Hourly market CSV (timestamp,price_eur_mwh,emission_g_per_kwh).
    #[arg(long, conflicts_with = "synth_seed")]
    market: Option<PathBuf>,
    /// Use a synthetic market with this seed.
    #[arg(long)]
    synth_seed: Option<u64>,
    #[arg(long, default_value_t = 168)]
    synth_hours: usize,
    /// Keep this many profile steps (tiling when longer than the data).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 15)]
    step_minutes: u32,
    #[arg(long, default_value_t = ecofjsp::model::DEFAULT_BASE_DEMAND_KW)]
    base_demand_kw: f64,
    /// Seed of generated benchmark instances when no file is available.
    #[arg(long, default_value_t = 0)]
    surrogate_seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    generations: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    population_size: Option<usize>,
    #[arg(long)]
    divisions: Option<usize>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    refine: Option<bool>,
    #[arg(long, value_parser = parse_cap_rule)]
    cap_rule: Option<CapRule>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_cap_rule(s: &str) -> Result<CapRule, String> {
    match s {
        "step-max" => Ok(CapRule::StepMax),
        "window-mean" => Ok(CapRule::WindowMean),
        _ => Err(format!(
            "unknown cap rule {s:?}, expected step-max or window-mean"
        )),
    }
}

impl ProblemArgs {
    fn request(&self) -> Result<SolveRequest> {
        let instance = if Path::new(&self.instance).exists()
            || benchmark::benchmark_shape(&self.instance).is_none()
        {
            InstanceSource::File {
                path: PathBuf::from(&self.instance),
            }
        } else {
            InstanceSource::Benchmark {
                name: self.instance.clone(),
                surrogate_seed: self.surrogate_seed,
            }
        };
        let market = match (&self.market, self.synth_seed) {
            (Some(path), _) => MarketSource::Csv { path: path.clone() },
            (None, Some(seed)) => MarketSource::Synthetic(SyntheticMarket {
                seed,
                hours: self.synth_hours,
                ..SyntheticMarket::default()
            }),
            (None, None) => anyhow::bail!(ecofjsp::Error::Parameter(
                "either --market or --synth-seed is required".into()
            )),
        };
        let mut req = SolveRequest::new(instance, market);
        req.steps = self.steps;
        req.step_minutes = self.step_minutes;
        req.base_demand_kw = self.base_demand_kw;
        Ok(req)
    }
}

fn write_or_print(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn solve(args: &SolveArgs) -> Result<()> {
    let mut req = args.problem.request()?;
    if let Some(path) = &args.config {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        req.config = ecofjsp::EvolveConfig::from_config_str(&text)?;
    }
    let c = &mut req.config;
    if let Some(x) = args.seed {
        c.seed = x;
    }
    if let Some(x) = args.generations {
        c.generation_limit = x;
    }
    if let Some(x) = args.time_limit {
        c.runtime_limit_seconds = Some(x);
    }
    if let Some(x) = args.population_size {
        c.population_size = x;
    }
    if let Some(x) = args.divisions {
        c.divisions = x;
    }
    if let Some(x) = args.crossover_rate {
        c.crossover_rate = x;
    }
    if let Some(x) = args.mutation_rate {
        c.mutation_rate = x;
    }
    if let Some(x) = args.refine {
        c.refine = x;
    }
    if let Some(x) = args.cap_rule {
        c.cap_rule = x;
    }
    c.validate()?;
    run_and_write(&req, &args.out)
}

fn run_and_write(req: &SolveRequest, out: &Path) -> Result<()> {
    let artifacts = cli::solve(req)?;
    artifacts.write_to(out)?;
    let m = &artifacts.manifest;
    eprintln!(
        "{} front members after {} generations in {:.1}s{}; outputs in {}",
        m.front_size,
        m.generations_completed,
        m.elapsed_seconds,
        if m.stopped_by_time {
            " (time limit)"
        } else {
            ""
        },
        out.display()
    );
    print!("{}", artifacts.tradeoffs_text);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Analyze {
            front,
            axis_a,
            axis_b,
            deltas,
        } => {
            let text = std::fs::read_to_string(&front)
                .with_context(|| format!("reading {}", front.display()))?;
            let points = parse_front(&text)?;
            print!(
                "{}",
                tradeoff_table(&points, axis_a, axis_b, &deltas)?.to_text()
            );
            Ok(())
        }
        Command::Oracle {
            problem,
            max_ops,
            max_horizon,
            out,
        } => {
            let e = load_enriched(&problem.request()?)?;
            let front = exact::brute_force_pareto(
                &e,
                BruteForceLimits {
                    max_ops,
                    max_horizon,
                },
            )?;
            match out {
                Some(p) => {
                    write_or_print(Some(&p), &cli::export_front(&front, &e, FrontFormat::Json))
                }
                None => write_or_print(None, &cli::export_front(&front, &e, FrontFormat::Csv)),
            }
        }
        Command::EmitMilp {
            problem,
            objective,
            eps_ms,
            eps_ec,
            eps_em,
            big_l,
            max_variables,
            out,
        } => {
            let e = load_enriched(&problem.request()?)?;
            let mut m = MilpEmission::new(objective);
            m.eps_makespan = eps_ms;
            m.eps_cost = eps_ec;
            m.eps_emissions = eps_em;
            m.big_l = big_l;
            m.max_variables = max_variables;
            write_or_print(out.as_deref(), &exact::emit_milp(&e, &m)?)
        }
        Command::GenMarket {
            seed,
            hours,
            correlation,
            out,
        } => {
            let params = SyntheticMarket {
                seed,
                hours,
                correlation,
                ..SyntheticMarket::default()
            };
            write_or_print(out.as_deref(), &params.generate()?.to_csv())
        }
        Command::Replay { manifest, out } => {
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let m: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;
            run_and_write(&m.replay_request(), &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<ecofjsp::Error>()
                .map_or(1, ecofjsp::Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
