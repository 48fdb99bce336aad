use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ifsdyn::dimension::{common_ratio, similarity_dimension};
use ifsdyn::format::{num, to_csv, to_pgm};
use ifsdyn::osc::OscViolation;
use ifsdyn::render::ChaosGameConfig;
use ifsdyn::verify::{run_suite, Suite, VerifyConfig};
use ifsdyn::{
    attractor_chaos_game, attractor_deterministic, classify_periodicity, distinct_system,
    evolved_dimension, moran_dimension, osc_check, sequence_distance, shift_n, EvolutionOperator,
    OperatorKind, OpenBox, OscVerdict, Scenario, Time,
};

const DEFAULT_SCENARIO: &str = include_str!("../../../scenarios/sierpinski.json");

#[derive(Parser)]
#[command(name = "ifsdyn", version, about = "Dynamics of iterated function systems")]
struct Cli {
    /// Scenario document (defaults to the built-in Sierpinski scenario).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation tolerance for sequence distances.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Prefix horizon for generated streams.
    #[arg(long, global = true)]
    horizon: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Det,
    Chaos,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two sequences, with its tail bound.
    Distance {
        seq1: String,
        seq2: String,
        #[arg(long)]
        csv: bool,
    },
    /// Apply the shift `n` times.
    Shift {
        seq: String,
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
    /// Evolve a sequence with a named operator.
    Evolve {
        seq: String,
        #[arg(long)]
        operator: String,
        #[arg(long)]
        time: String,
    },
    /// Periodicity class of a sequence.
    Classify { seq: String },
    /// Render the attractor of the sequence's distinct maps as a PGM image.
    Attractor {
        seq: String,
        #[arg(long, value_enum, default_value_t = Method::Det)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        points: usize,
        #[arg(long, default_value_t = 100)]
        burn_in: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Similarity dimension, optionally after evolving.
    Dimension {
        seq: String,
        #[arg(long, requires = "time")]
        operator: Option<String>,
        #[arg(long, requires = "operator")]
        time: Option<String>,
    },
    /// Open set condition for the sequence's distinct maps.
    Osc {
        seq: String,
        /// Open box as `lo:hi` per axis, comma separated (default: interior of the space).
        #[arg(long)]
        open_set: Option<String>,
    },
    /// Run the invariant suites and emit a CSV report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Chaos-game budget of the Sierpinski containment check.
        #[arg(long, default_value_t = 1_000_000)]
        chaos_points: usize,
    },
}

/// Failure with an exit code and a one-line message.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind,
            message: message.into(),
        }
    }
}

impl From<ifsdyn::Error> for Failure {
    fn from(e: ifsdyn::Error) -> Self {
        let kind = match &e {
            ifsdyn::Error::Parse { .. } => "parse",
            ifsdyn::Error::Validation { .. } => "validation",
            ifsdyn::Error::UnknownEntity { .. } | ifsdyn::Error::UnknownSymbol(_) => "unknown_name",
            _ => "invalid",
        };
        Failure::usage(kind, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn load_scenario(cli: &Cli) -> Result<Scenario, Failure> {
    let text = match &cli.scenario {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?,
        None => DEFAULT_SCENARIO.to_string(),
    };
    let mut scenario = Scenario::parse(&text)?;
    let d = &mut scenario.defaults;
    if let Some(s) = cli.seed {
        d.seed = s;
    }
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t < 1.0) {
            return Err(ifsdyn::Error::InvalidTolerance(t).into());
        }
        d.tolerance = t;
    }
    if let Some(r) = cli.resolution {
        d.resolution = r;
    }
    if let Some(h) = cli.horizon {
        if h == 0 {
            return Err(Failure::usage("invalid", "horizon must be positive"));
        }
        d.horizon = h;
    }
    Ok(scenario)
}

fn parse_time(op: EvolutionOperator, text: &str) -> Result<Time, Failure> {
    let bad = || Failure::usage("invalid", format!("cannot parse time `{text}`"));
    match op.kind {
        OperatorKind::ShiftDiscrete => match text.parse::<u64>() {
            Ok(n) => Ok(Time::Steps(n)),
            Err(_) => text.parse::<f64>().map(Time::Real).map_err(|_| bad()),
        },
        OperatorKind::ScaleExp => text.parse::<f64>().map(Time::Real).map_err(|_| bad()),
    }
}

fn parse_open_box(text: &str) -> Result<OpenBox, Failure> {
    let bad = || Failure::usage("invalid", format!("open set `{text}` is not `lo:hi[,lo:hi...]`"));
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for axis in text.split(',') {
        let (lo, hi) = axis.split_once(':').ok_or_else(bad)?;
        lower.push(lo.trim().parse::<f64>().map_err(|_| bad())?);
        upper.push(hi.trim().parse::<f64>().map_err(|_| bad())?);
    }
    Ok(OpenBox::new(&lower, &upper)?)
}

fn run(cli: &Cli) -> CmdResult {
    let scenario = load_scenario(cli)?;
    let d = scenario.defaults;
    match &cli.command {
        Command::Distance { seq1, seq2, csv } => {
            let f = scenario.sequence(seq1)?;
            let g = scenario.sequence(seq2)?;
            let r = sequence_distance(f, g, d.tolerance)?;
            if *csv {
                println!("seq1,seq2,value,tail_bound,truncation_depth");
                println!("{seq1},{seq2},{},{},{}", num(r.value), num(r.tail_bound), r.truncation_depth);
            } else {
                println!("value={}", num(r.value));
                println!("tail_bound={}", num(r.tail_bound));
                println!("truncation_depth={}", r.truncation_depth);
            }
        }
        Command::Shift { seq, steps } => {
            let f = scenario.sequence(seq)?;
            println!("{}", shift_n(f, *steps).describe());
        }
        Command::Evolve { seq, operator, time } => {
            let f = scenario.sequence(seq)?;
            let op = scenario.operator(operator)?;
            let t = parse_time(op, time)?;
            let evolved = op.evolve(f, t)?;
            println!("{}", evolved.describe());
            if op.kind == OperatorKind::ScaleExp {
                let system = distinct_system(&evolved);
                for (name, map) in system.as_alphabet().entries() {
                    println!("ratio.{name}={}", num(map.ratio()));
                }
            }
        }
        Command::Classify { seq } => {
            let f = scenario.sequence(seq)?;
            let report = classify_periodicity(f, d.horizon);
            println!("classification={}", report.classification);
            if let Some(w) = report.witness {
                println!("witness=shift^{} = shift^{} = {}", w.from, w.to, w.canonical);
            }
        }
        Command::Attractor {
            seq,
            method,
            out,
            points,
            burn_in,
            workers,
            max_iters,
        } => {
            let system = distinct_system(scenario.sequence(seq)?);
            let raster = match method {
                Method::Det => {
                    let r = attractor_deterministic(&system, d.resolution, *max_iters, 0.0)?;
                    println!("iterations={}", r.iterations);
                    println!("converged={}", r.converged);
                    r.raster
                }
                Method::Chaos => {
                    let config = ChaosGameConfig {
                        resolution: d.resolution,
                        n_points: *points,
                        seed: d.seed,
                        burn_in: *burn_in,
                        workers: *workers,
                    };
                    attractor_chaos_game(&system, &config)?
                }
            };
            fs::write(out, to_pgm(&raster))
                .map_err(|e| Failure::usage("io", format!("{}: {e}", out.display())))?;
            println!("occupied={}", raster.occupied_count());
            println!("pixel_diameter={}", num(raster.pixel_diameter()));
        }
        Command::Dimension { seq, operator, time } => {
            let f = scenario.sequence(seq)?;
            let system = distinct_system(f);
            let base = similarity_dimension(&system)?;
            println!("s={}", num(base.s));
            println!("method={}", base.method);
            if let (Some(name), Some(time)) = (operator, time) {
                let op = scenario.operator(name)?;
                let t = parse_time(op, time)?;
                let evolved = distinct_system(&op.evolve(f, t)?);
                let resolved = similarity_dimension(&evolved)?;
                if op.kind == OperatorKind::ScaleExp {
                    if let Some(r) = common_ratio(&system) {
                        let r_t = op.ratio_action(r, t)?;
                        println!("s_evolved_formula={}", num(evolved_dimension(base.s, r, r_t)?.s));
                    }
                }
                println!("s_evolved_resolved={}", num(moran_dimension(&evolved.ratios())?.s));
                println!("s_evolved_method={}", resolved.method);
            }
        }
        Command::Osc { seq, open_set } => {
            let system = distinct_system(scenario.sequence(seq)?);
            let v = match open_set {
                Some(text) => parse_open_box(text)?,
                None => OpenBox::interior(&scenario.space),
            };
            let result = osc_check(&system, &v)?;
            let names = system.names();
            match result.verdict {
                OscVerdict::Satisfied => println!("verdict=satisfied"),
                OscVerdict::Unknown(why) => {
                    println!("verdict=unknown");
                    println!("reason={why}");
                }
                OscVerdict::Violated(OscViolation::Overlap { i, j, witness }) => {
                    println!("verdict=violated");
                    println!("overlap={},{}", names[i], names[j]);
                    let w: Vec<String> = witness.iter().map(|x| num(*x)).collect();
                    println!("witness={}", w.join(","));
                }
                OscVerdict::Violated(OscViolation::NotContained { i, image }) => {
                    println!("verdict=violated");
                    println!("not_contained={}", names[i]);
                    let p: Vec<String> = image.iter().map(|x| num(*x)).collect();
                    println!("image={}", p.join(","));
                }
            }
        }
        Command::Verify {
            suite,
            out,
            chaos_points,
        } => {
            let suite: Suite = suite.parse()?;
            let mut config = VerifyConfig::from_scenario(&scenario);
            config.chaos_points = *chaos_points;
            let rows = run_suite(suite, &scenario, &config)?;
            let report = to_csv(&rows);
            let failed = rows.iter().filter(|r| !r.passed).count();
            match out {
                Some(path) => {
                    fs::write(path, &report)
                        .map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
                    println!("passed={} failed={failed}", rows.len() - failed);
                }
                None => print!("{report}"),
            }
            if failed > 0 {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error");
            eprintln!("error[usage]: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error[{}]: {}", f.kind, one_line(&f.message));
            ExitCode::from(f.code)
        }
    }
}
