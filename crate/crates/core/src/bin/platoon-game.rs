use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use platoon_game::error::{GameError, Result};
use platoon_game::game::PricingPolicy;
use platoon_game::learning::{run, Algorithm};
use platoon_game::metrics::{emit, fmt_f64, OutputFormat, Summary};
use platoon_game::potential::{
    check_exactness, exact_potential_exists, search_four_cycles, FourCycle, PotentialKind,
    DEFAULT_PROFILE_GUARD,
};
use platoon_game::scenario::ScenarioSpec;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

/// Stream used by verification trials, away from the population and day streams.
const VERIFY_STREAM: u64 = u64::MAX;

#[derive(Parser)]
#[command(
    name = "platoon-game",
    version,
    about = "Departure-time game of cars and platooning trucks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a learner on a scenario and write its trace and summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Comma-separated output formats: csv, json, truck_csv.
        #[arg(long, value_delimiter = ',')]
        emit: Option<Vec<OutputFormat>>,
    },
    /// Check potential exactness on random unilateral deviations.
    VerifyPotential {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run every (value, seed) cell of a parameter sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Seeds as a list (`1,2,5`) or inclusive ranges (`1..20`).
        #[arg(long, default_value = "1")]
        seeds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide exact-potential existence by enumerating every profile.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PROFILE_GUARD)]
        guard: u64,
    },
}

#[derive(Clone, Copy)]
enum SweepParam {
    Beta,
    EquipmentRatio,
    Delay,
}

impl std::str::FromStr for SweepParam {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(SweepParam::Beta),
            "equipment_ratio" => Ok(SweepParam::EquipmentRatio),
            "delay" => Ok(SweepParam::Delay),
            other => Err(GameError::InvalidConfig {
                field: "--param".into(),
                reason: format!(
                    "unknown sweep parameter {other:?} (expected beta, equipment_ratio or delay)"
                ),
            }),
        }
    }
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Beta => "beta",
            SweepParam::EquipmentRatio => "equipment_ratio",
            SweepParam::Delay => "delay",
        }
    }

    fn apply(self, spec: &mut ScenarioSpec, value: f64) -> Result<()> {
        match self {
            SweepParam::Beta => spec.game.beta = value,
            SweepParam::EquipmentRatio => spec.population.equipment_ratio = Some(value),
            SweepParam::Delay => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(GameError::InvalidConfig {
                        field: "--values".into(),
                        reason: format!("delay must be a whole number of days, got {value}"),
                    });
                }
                spec.policy = PricingPolicy::CarTaxDelayed {
                    delay: value as u32,
                };
            }
        }
        spec.validate()
    }
}

fn output_dir(flag: Option<PathBuf>, spec: &ScenarioSpec) -> PathBuf {
    flag.or_else(|| std::env::var_os("PLATOON_GAME_OUT").map(PathBuf::from))
        .or_else(|| spec.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = |part: &str| GameError::InvalidConfig {
        field: "--seeds".into(),
        reason: format!("cannot parse {part:?}"),
    };
    let mut seeds = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad(part))?;
                let hi: u64 = hi
                    .trim()
                    .trim_start_matches('=')
                    .parse()
                    .map_err(|_| bad(part))?;
                if lo > hi {
                    return Err(bad(part));
                }
                seeds.extend(lo..=hi);
            }
            None => seeds.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    if seeds.is_empty() {
        return Err(bad(s));
    }
    Ok(seeds)
}

fn describe_cycle(c: &FourCycle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "counterexample 4-cycle:");
    let _ = writeln!(
        s,
        "  start cars   {:?}",
        c.start.cars.iter().map(|r| r.get()).collect::<Vec<_>>()
    );
    let _ = writeln!(
        s,
        "  start trucks {:?}",
        c.start.trucks.iter().map(|r| r.get()).collect::<Vec<_>>()
    );
    let _ = writeln!(
        s,
        "  {} -> {}, {} -> {}, {} back, {} back",
        c.first, c.first_to, c.second, c.second_to, c.first, c.second
    );
    let _ = write!(s, "  sum of utility gains {:e}", c.violation);
    s
}

fn cmd_run(
    config: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    algorithm: Option<Algorithm>,
    max_iters: Option<usize>,
    formats: Option<Vec<OutputFormat>>,
) -> Result<u8> {
    let mut spec = ScenarioSpec::load(config)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(algorithm) = algorithm {
        spec.learner.algorithm = algorithm;
    }
    if let Some(max_iters) = max_iters {
        spec.learner.max_iters = max_iters;
    }
    spec.validate()?;
    let formats = formats.unwrap_or_else(|| spec.output.formats.clone());
    let dir = output_dir(out, &spec);

    let game = spec.build_game()?;
    let trace = run(&game, spec.learner, spec.perturbations.clone(), spec.seed)?;
    let summary = Summary::from_trace(&game, &trace)?;
    emit(&trace, &summary, &dir, &formats)?;

    println!("algorithm        {:?}", trace.algorithm);
    println!("seed             {}", spec.seed);
    println!("iterations       {}", summary.iterations);
    match summary.certified_at {
        Some(t) => println!("certified        yes (day {t})"),
        None => println!("certified        no"),
    }
    println!("s_nash           {:.4} km/h", summary.s_nash);
    println!("s_optimal        {:.4} km/h", summary.s_optimal);
    println!("s_preference     {:.4} km/h", summary.s_preference);
    println!("ratio_nash       {:.4}", summary.ratio_nash);
    println!("ratio_preference {:.4}", summary.ratio_preference);
    println!("final n          {:?}", summary.final_n);
    println!("final m          {:?}", summary.final_m);
    println!("output           {}", dir.display());
    Ok(if summary.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn cmd_verify(config: &Path, trials: usize, seed: Option<u64>) -> Result<u8> {
    let mut spec = ScenarioSpec::load(config)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let game = spec.build_game()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(VERIFY_STREAM);

    let cfg = game.config().clone();
    let (kind, game) = match cfg.policy {
        PricingPolicy::CarTax => (PotentialKind::PhiCarTax, game),
        PricingPolicy::TruckSubsidy { .. } => (PotentialKind::PsiTruckSubsidy, game),
        PricingPolicy::NoPricing if cfg.beta == 0.0 => {
            // Without platooning the car tax is identically zero, so the
            // unpriced game coincides with the taxed one and shares its potential.
            let taxed = game.with_config(platoon_game::GameConfig {
                policy: PricingPolicy::CarTax,
                ..cfg
            })?;
            (PotentialKind::PhiCarTax, taxed)
        }
        PricingPolicy::NoPricing => {
            let cycle = match exact_potential_exists(&game, DEFAULT_PROFILE_GUARD) {
                Ok(verdict) => {
                    println!(
                        "exhaustive 4-cycle check over {} cycles",
                        verdict.cycles_checked
                    );
                    verdict.counterexample
                }
                Err(GameError::SizeGuard { .. }) => {
                    println!("game too large to enumerate; sampling {trials} random 4-cycles");
                    search_four_cycles(&game, trials, &mut rng)?
                }
                Err(e) => return Err(e),
            };
            return Ok(match cycle {
                Some(c) => {
                    println!("no exact potential without pricing (beta = {})", cfg.beta);
                    println!("{}", describe_cycle(&c));
                    EXIT_OK
                }
                None => {
                    println!("no violating 4-cycle found");
                    EXIT_CHECK_FAILED
                }
            });
        }
        PricingPolicy::CarTaxDelayed { .. } => return Err(GameError::Policy(
            "the delayed car tax has no potential of its own; verify the car_tax policy instead"
                .into(),
        )),
    };

    let report = check_exactness(kind, &game, trials, &mut rng)?;
    println!("potential        {kind:?}");
    println!("trials           {}", report.trials);
    println!("max error        {:e}", report.max_error);
    if report.passed() {
        println!("potential exists");
        Ok(EXIT_OK)
    } else {
        println!("potential check failed");
        Ok(EXIT_CHECK_FAILED)
    }
}

struct Cell {
    value: f64,
    seed: u64,
    summary: Summary,
}

fn cmd_sweep(
    config: &Path,
    param: &str,
    values: &[f64],
    seeds: &str,
    out: Option<PathBuf>,
) -> Result<u8> {
    let param: SweepParam = param.parse()?;
    let seeds = parse_seeds(seeds)?;
    let base = ScenarioSpec::load(config)?;
    let dir = output_dir(out, &base);
    fs::create_dir_all(&dir).map_err(|e| GameError::Io {
        path: dir.clone(),
        source: e,
    })?;

    let jobs: Vec<(f64, u64)> = values
        .iter()
        .flat_map(|&v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(value, seed)| {
            let mut spec = base.clone();
            spec.seed = seed;
            param.apply(&mut spec, value)?;
            let game = spec.build_game()?;
            let trace = run(&game, spec.learner, spec.perturbations.clone(), seed)?;
            let summary = Summary::from_trace(&game, &trace)?;
            let cell_dir = dir
                .join(format!("{}={}", param.name(), value))
                .join(format!("seed={seed}"));
            emit(&trace, &summary, &cell_dir, &spec.output.formats)?;
            Ok(Cell {
                value,
                seed,
                summary,
            })
        })
        .collect::<Result<_>>()?;

    let mut csv =
        String::from("param_value,seed,iterations,converged,s_nash,max_truck_concentration\n");
    for c in &cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            c.value,
            c.seed,
            c.summary.iterations,
            c.summary.converged,
            fmt_f64(c.summary.s_nash),
            c.summary.max_truck_concentration
        );
    }
    let path = dir.join("sweep.csv");
    fs::write(&path, &csv).map_err(|e| GameError::Io {
        path: path.clone(),
        source: e,
    })?;

    println!(
        "{:>16} {:>6} {:>6} {:>9} {:>10} {:>6}",
        param.name(),
        "seed",
        "iters",
        "converged",
        "s_nash",
        "max m"
    );
    for c in &cells {
        println!(
            "{:>16} {:>6} {:>6} {:>9} {:>10.4} {:>6}",
            c.value,
            c.seed,
            c.summary.iterations,
            c.summary.converged,
            c.summary.s_nash,
            c.summary.max_truck_concentration
        );
    }
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_oracle(config: &Path, seed: Option<u64>, guard: u64) -> Result<u8> {
    let mut spec = ScenarioSpec::load(config)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let game = spec.build_game()?;
    let verdict = exact_potential_exists(&game, guard)?;
    println!("checked {} 4-cycles", verdict.cycles_checked);
    match &verdict.counterexample {
        None => println!("exact potential"),
        Some(c) => {
            println!("no exact potential");
            println!("{}", describe_cycle(c));
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            out,
            algorithm,
            max_iters,
            emit,
        } => cmd_run(&config, seed, out, algorithm, max_iters, emit),
        Command::VerifyPotential {
            config,
            trials,
            seed,
        } => cmd_verify(&config, trials, seed),
        Command::Sweep {
            config,
            param,
            values,
            seeds,
            out,
        } => cmd_sweep(&config, &param, &values, &seeds, out),
        Command::Oracle {
            config,
            seed,
            guard,
        } => cmd_oracle(&config, seed, guard),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
