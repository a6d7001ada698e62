//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or parameter
//! values), 2 for data errors (unreadable or invalid scene files, I/O).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::energy::{base_energy, exact_distribution_capped};
use crate::error::{Error, Result};
use crate::graph::{build_graph, GraphConfig};
use crate::harness::{emit_trace, generate_scene, run_benchmark, GeneratorConfig, OrientationMode};
use crate::inference::{
    consistency_energy, exhaustive_map, hard_labels, infer, ussa_map, AnnealConfig,
};
use crate::potentials::ProbClamp;
use crate::scene::{load_scene, save_scene, EnergyWeights, Scene, WeightPreset};

/// Largest scene for which `exact --distribution` prints the full table.
const DISTRIBUTION_CAP: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "crossing-crf", version, about = "Scene-level pedestrian crossing-intention inference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infer intentions for a scene (exhaustive for small scenes, annealing otherwise).
    Infer {
        scene: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        anneal: AnnealArgs,
    },
    /// Exhaustive MAP labelling, optionally with the full Gibbs table.
    Exact {
        scene: PathBuf,
        /// Print every configuration with its base energy and probability (n <= 12).
        #[arg(long)]
        distribution: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Write a synthetic scene file.
    Generate {
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Compare seeded annealing against exhaustive search on generated scenes.
    Bench {
        /// Report path; printed to stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        anneal: AnnealArgs,
    },
    /// Run seeded annealing on a scene and write its energy trace as CSV.
    Trace {
        scene: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        anneal: AnnealArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    JaadInfer,
    PieInfer,
    JaadTrain,
    PieTrain,
}

impl From<PresetArg> for WeightPreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::JaadInfer => WeightPreset::JaadInfer,
            PresetArg::PieInfer => WeightPreset::PieInfer,
            PresetArg::JaadTrain => WeightPreset::JaadTrain,
            PresetArg::PieTrain => WeightPreset::PieTrain,
        }
    }
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Weight preset; explicit weight flags override it.
    #[arg(long, value_enum, default_value = "jaad-infer")]
    preset: PresetArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = EnergyWeights::DEFAULT_LAMBDA1)]
    lambda1: f64,
    #[arg(long, default_value_t = EnergyWeights::DEFAULT_LAMBDA2)]
    lambda2: f64,
    /// Pedestrian distance threshold in pixels.
    #[arg(long, default_value_t = 50.0)]
    delta_d: f64,
    /// Probability clamp applied before logarithms.
    #[arg(long, default_value_t = 1e-7)]
    log_eps: f64,
}

impl ModelArgs {
    fn weights(&self) -> Result<EnergyWeights> {
        let p = EnergyWeights::preset(self.preset.into());
        EnergyWeights::new(
            self.alpha.unwrap_or(p.alpha),
            self.beta.unwrap_or(p.beta),
            self.gamma.unwrap_or(p.gamma),
            self.lambda1,
            self.lambda2,
        )
    }

    fn graph(&self) -> Result<GraphConfig> {
        GraphConfig::with_delta_d(self.delta_d)
    }

    fn clamp(&self) -> Result<ProbClamp> {
        ProbClamp::new(self.log_eps)
    }
}

#[derive(Debug, Args)]
struct AnnealArgs {
    #[arg(long, default_value_t = 1.0)]
    tau0: f64,
    #[arg(long, default_value_t = 0.95)]
    cooling: f64,
    /// Proposal count; defaults to max(64, 20 n).
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    exhaustive_threshold: usize,
}

impl AnnealArgs {
    fn config(&self) -> Result<AnnealConfig> {
        let cfg = AnnealConfig {
            tau0: self.tau0,
            cooling: self.cooling,
            max_iters: self.max_iters,
            rng_seed: self.seed,
            exhaustive_threshold: self.exhaustive_threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientationArg {
    Clustered,
    Unknown,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long = "pedestrians", short = 'n', default_value_t = 5)]
    n_pedestrians: usize,
    /// Scene generator seed.
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    #[arg(long, default_value_t = 0.8)]
    confidence: f64,
    #[arg(long, default_value_t = 16)]
    frames: usize,
    #[arg(long, default_value_t = 320.0)]
    arena_width: f64,
    #[arg(long, default_value_t = 180.0)]
    arena_height: f64,
    #[arg(long, value_enum, default_value = "clustered")]
    orientation: OrientationArg,
}

impl GenArgs {
    fn config(&self) -> Result<GeneratorConfig> {
        let cfg = GeneratorConfig {
            n_pedestrians: self.n_pedestrians,
            rng_seed: self.gen_seed,
            confidence: self.confidence,
            frame_count: self.frames,
            arena: (self.arena_width, self.arena_height),
            orientation_mode: match self.orientation {
                OrientationArg::Clustered => OrientationMode::Clustered,
                OrientationArg::Unknown => OrientationMode::Unknown,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn label_name(y: u8) -> &'static str {
    if y == 1 {
        "C"
    } else {
        "NC"
    }
}

fn write_output(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn cmd_infer(scene: &Scene, model: &ModelArgs, anneal: &AnnealArgs) -> Result<()> {
    let (w, cfg, clamp) = (model.weights()?, anneal.config()?, model.clamp()?);
    let graph = build_graph(scene, &model.graph()?)?;
    let result = infer(scene, &graph, &w, &cfg, clamp)?;
    let hard = hard_labels(scene, &graph)?;
    let breakdown = base_energy(scene, &graph, &result.labels, &w, clamp)?;
    let (e_pp, e_pe) = consistency_energy(&result.labels, &graph, &hard);

    for (id, y) in graph.ped_nodes.iter().zip(result.labels.iter()) {
        println!("{id} → {}", label_name(y));
    }
    println!("method: {}", result.method);
    println!("energy: {}", result.energy);
    println!(
        "base: unary_sum={} pp_sum={} pe_sum={} total={}",
        breakdown.unary_sum, breakdown.pp_sum, breakdown.pe_sum, breakdown.total
    );
    println!("consistency: e_pp={e_pp} e_pe={e_pe}");
    println!(
        "evaluations: {} (best at {})",
        result.evaluations, result.evaluations_to_best
    );
    Ok(())
}

fn cmd_exact(scene: &Scene, distribution: bool, model: &ModelArgs) -> Result<()> {
    let (w, clamp) = (model.weights()?, model.clamp()?);
    let graph = build_graph(scene, &model.graph()?)?;
    let hard = hard_labels(scene, &graph)?;
    let result = exhaustive_map(scene, &graph, &w, &hard, clamp)?;
    for (id, y) in graph.ped_nodes.iter().zip(result.labels.iter()) {
        println!("{id} → {}", label_name(y));
    }
    println!("labels: {}", result.labels);
    println!("energy: {}", result.energy);
    if distribution {
        let table = exact_distribution_capped(scene, &graph, &w, clamp, DISTRIBUTION_CAP)?;
        println!("configuration,base_energy,probability");
        for (y, e, p) in table.iter() {
            println!("{y},{e},{p}");
        }
        println!("sum: {}", table.total());
    }
    Ok(())
}

fn run_command(command: Command) -> Result<()> {
    match command {
        Command::Infer {
            scene,
            model,
            anneal,
        } => cmd_infer(&load_scene(scene)?, &model, &anneal),
        Command::Exact {
            scene,
            distribution,
            model,
        } => cmd_exact(&load_scene(scene)?, distribution, &model),
        Command::Generate { out, gen } => {
            let scene = generate_scene(&gen.config()?)?;
            save_scene(&scene, &out)?;
            println!("wrote {} pedestrians to {}", scene.len(), out.display());
            Ok(())
        }
        Command::Bench {
            out,
            trials,
            gen,
            model,
            anneal,
        } => {
            let report = run_benchmark(
                &gen.config()?,
                trials,
                &model.weights()?,
                &anneal.config()?,
                &model.graph()?,
                model.clamp()?,
            )?;
            let mut json = report.to_json();
            json.push('\n');
            match out {
                Some(path) => {
                    write_output(&path, &json)?;
                    println!(
                        "scenes={} optimal_match_rate={} mean_evaluations_to_best={} mean_energy_gap={}",
                        report.scenes,
                        report.optimal_match_rate,
                        report.mean_evaluations_to_best,
                        report.mean_energy_gap
                    );
                }
                None => print!("{json}"),
            }
            Ok(())
        }
        Command::Trace {
            scene,
            out,
            model,
            anneal,
        } => {
            let scene = load_scene(scene)?;
            let (w, cfg, clamp) = (model.weights()?, anneal.config()?, model.clamp()?);
            let graph = build_graph(&scene, &model.graph()?)?;
            let hard = hard_labels(&scene, &graph)?;
            let result = ussa_map(&scene, &graph, &w, &hard, &cfg, clamp)?;
            emit_trace(&result, &out)?;
            println!(
                "labels: {} energy: {} evaluations: {} best at: {}",
                result.labels, result.energy, result.evaluations, result.evaluations_to_best
            );
            Ok(())
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
