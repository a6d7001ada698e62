//! Synthetic scenes, solver benchmarking and energy-trace output.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::DEFAULT_ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::graph::{build_graph, GraphConfig};
use crate::inference::{
    anneal, exhaustive_search, hard_labels, AnnealConfig, InferenceProblem, InferenceResult,
    Method,
};
use crate::potentials::{interaction_state, ProbClamp};
use crate::scene::{
    BoundingBox, EnergyWeights, Orientation, PairKey, PedestrianObservation, Scene,
};

/// Energies closer than this count as the same optimum.
pub const MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrientationMode {
    /// Each pedestrian faces left or right at random.
    #[default]
    Clustered,
    /// No orientation information.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub n_pedestrians: usize,
    pub rng_seed: u64,
    /// Probability that each supplied probability points at the hidden truth.
    pub confidence: f64,
    pub frame_count: usize,
    /// Width and height in pixels.
    pub arena: (f64, f64),
    pub orientation_mode: OrientationMode,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_pedestrians: 5,
            rng_seed: 0,
            confidence: 0.8,
            frame_count: 16,
            arena: (320.0, 180.0),
            orientation_mode: OrientationMode::Clustered,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_pedestrians == 0 {
            return Err(Error::Config("n_pedestrians must be positive".into()));
        }
        if !(self.confidence > 0.5 && self.confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence must lie in (0.5, 1), got {}",
                self.confidence
            )));
        }
        if self.frame_count == 0 {
            return Err(Error::Config("frame_count must be positive".into()));
        }
        // Boxes are up to 40 x 100 px.
        if !(self.arena.0 > 40.0 && self.arena.1 > 100.0) {
            return Err(Error::Config(format!(
                "arena {:?} is too small for a pedestrian box",
                self.arena
            )));
        }
        Ok(())
    }
}

/// Probability on the correct side of 0.5 when `agree`, on the wrong side otherwise.
fn biased_prob(rng: &mut ChaCha8Rng, truth: u8, confidence: f64) -> f64 {
    let agree = rng.random::<f64>() < confidence;
    let strength = rng.random_range(0.55..0.99);
    if (truth == 1) == agree {
        strength
    } else {
        1.0 - strength
    }
}

/// Three-way distribution whose argmax is `peak`.
fn peaked_simplex(rng: &mut ChaCha8Rng, peak: usize) -> [f64; 3] {
    let draws: [f64; 3] = std::array::from_fn(|_| rng.sample(Exp1));
    let total: f64 = draws.iter().sum();
    let weight = rng.random_range(0.55..0.9);
    std::array::from_fn(|k| {
        let spread = (1.0 - weight) * draws[k] / total;
        if k == peak {
            weight + spread
        } else {
            spread
        }
    })
}

/// Builds a random valid scene around a hidden ground-truth labelling.
pub fn generate_scene(cfg: &GeneratorConfig) -> Result<Scene> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let (width, height) = cfg.arena;
    let n = cfg.n_pedestrians;
    let frames = cfg.frame_count;

    let ids: Vec<String> = (0..n).map(|i| format!("p{i:02}")).collect();
    let truth: Vec<u8> = (0..n).map(|_| u8::from(rng.random::<bool>())).collect();

    let mut scene = Scene::default();
    for (i, id) in ids.iter().enumerate() {
        let w = rng.random_range(20.0..40.0);
        let h = rng.random_range(50.0..100.0);
        let (x_lo, x_hi) = (w / 2.0, width - w / 2.0);
        let (y_lo, y_hi) = (h / 2.0, height - h / 2.0);
        let cx = rng.random_range(x_lo..x_hi);
        let cy = rng.random_range(y_lo..y_hi);
        let vx = rng.random_range(-2.0..2.0);
        let vy = rng.random_range(-0.5..0.5);
        let boxes = (0..frames)
            .map(|t| {
                let back = (frames - 1 - t) as f64;
                let x = (cx - vx * back).clamp(x_lo, x_hi);
                let y = (cy - vy * back).clamp(y_lo, y_hi);
                BoundingBox::new(x - w / 2.0, y - h / 2.0, x + w / 2.0, y + h / 2.0)
            })
            .collect();
        let orientation = match cfg.orientation_mode {
            OrientationMode::Clustered if rng.random::<bool>() => Orientation::Left,
            OrientationMode::Clustered => Orientation::Right,
            OrientationMode::Unknown => Orientation::Unknown,
        };
        scene.pedestrians.push(PedestrianObservation {
            id: id.clone(),
            boxes,
            orientation,
            unary_prob: biased_prob(&mut rng, truth[i], cfg.confidence),
        });
        scene
            .pe_probs
            .insert(id.clone(), biased_prob(&mut rng, truth[i], cfg.confidence));
    }

    for i in 0..n {
        for j in i + 1..n {
            let true_state = interaction_state(truth[i], truth[j]).index();
            let peak = if rng.random::<f64>() < cfg.confidence {
                true_state
            } else {
                (true_state + rng.random_range(1..3)) % 3
            };
            scene.pp_probs.insert(
                PairKey::new(ids[i].clone(), ids[j].clone()),
                peaked_simplex(&mut rng, peak),
            );
        }
    }

    scene.ego_speed = Some((0..frames).map(|_| rng.random_range(0.0..12.0)).collect());
    scene.ground_truth = Some(ids.into_iter().zip(truth).collect());
    Ok(scene)
}

/// Decorrelated per-trial seed.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(master ^ mix(trial))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneOutcome {
    pub scene_id: String,
    pub n: usize,
    /// Solver `infer` would dispatch to for this scene.
    pub method: Method,
    pub e_exact: f64,
    pub e_ussa: f64,
    pub evaluations: usize,
    pub evaluations_to_best: usize,
    /// Fraction of pedestrians whose annealed label equals the hidden truth.
    pub label_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub scenes: usize,
    pub optimal_match_rate: f64,
    pub mean_evaluations_to_best: f64,
    pub mean_energy_gap: f64,
    pub mean_label_accuracy: f64,
    pub per_scene: Vec<SceneOutcome>,
}

impl BenchmarkReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run_trial(
    gen: &GeneratorConfig,
    trial: usize,
    w: &EnergyWeights,
    anneal_cfg: &AnnealConfig,
    graph_cfg: &GraphConfig,
    clamp: ProbClamp,
) -> Result<SceneOutcome> {
    let scene = generate_scene(&GeneratorConfig {
        rng_seed: trial_seed(gen.rng_seed, trial as u64),
        ..*gen
    })?;
    let graph = build_graph(&scene, graph_cfg)?;
    let hard = hard_labels(&scene, &graph)?;
    let problem = InferenceProblem::new(&scene, &graph, w, &hard, clamp)?;
    let exact = exhaustive_search(&problem, DEFAULT_ENUMERATION_CAP)?;
    let cfg = AnnealConfig {
        rng_seed: trial_seed(anneal_cfg.rng_seed, trial as u64),
        ..*anneal_cfg
    };
    let ussa = anneal(&problem, hard.seed(), &cfg)?;

    let truth = scene.ground_truth.as_ref().expect("generated scenes carry truth");
    let correct = graph
        .ped_nodes
        .iter()
        .zip(ussa.labels.iter())
        .filter(|(id, y)| truth[*id] == *y)
        .count();

    Ok(SceneOutcome {
        scene_id: format!("scene-{trial:04}"),
        n: graph.len(),
        method: if graph.len() <= anneal_cfg.exhaustive_threshold {
            Method::Exhaustive
        } else {
            Method::Ussa
        },
        e_exact: exact.energy,
        e_ussa: ussa.energy,
        evaluations: ussa.evaluations,
        evaluations_to_best: ussa.evaluations_to_best,
        label_accuracy: correct as f64 / graph.len() as f64,
    })
}

/// Runs seeded annealing and exhaustive search on `trials` generated scenes.
/// Trials run in parallel; each derives its seeds from the trial index so the
/// report does not depend on scheduling.
pub fn run_benchmark(
    gen: &GeneratorConfig,
    trials: usize,
    w: &EnergyWeights,
    anneal_cfg: &AnnealConfig,
    graph_cfg: &GraphConfig,
    clamp: ProbClamp,
) -> Result<BenchmarkReport> {
    gen.validate()?;
    anneal_cfg.validate()?;
    if gen.n_pedestrians > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n: gen.n_pedestrians,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }

    let per_scene = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(gen, t, w, anneal_cfg, graph_cfg, clamp))
        .collect::<Result<Vec<_>>>()?;

    let mean = |f: &dyn Fn(&SceneOutcome) -> f64| {
        if per_scene.is_empty() {
            0.0
        } else {
            per_scene.iter().map(f).sum::<f64>() / per_scene.len() as f64
        }
    };
    Ok(BenchmarkReport {
        scenes: per_scene.len(),
        optimal_match_rate: mean(&|s| {
            f64::from(u8::from((s.e_ussa - s.e_exact).abs() <= MATCH_TOLERANCE))
        }),
        mean_evaluations_to_best: mean(&|s| s.evaluations_to_best as f64),
        // The exact minimum may sit a rounding step above an equal annealed one.
        mean_energy_gap: mean(&|s| (s.e_ussa - s.e_exact).max(0.0)),
        mean_label_accuracy: mean(&|s| s.label_accuracy),
        per_scene,
    })
}

pub const TRACE_HEADER: &str = "evaluation,candidate_energy,best_energy,temperature";

pub fn trace_csv(result: &InferenceResult) -> String {
    let mut out = String::with_capacity(32 * (result.trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for e in &result.trace {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.evaluation, e.candidate_energy, e.best_energy, e.temperature
        ));
    }
    out
}

/// Writes the energy trajectory as CSV.
pub fn emit_trace(result: &InferenceResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    file.write_all(trace_csv(result).as_bytes()).map_err(io_err)
}
