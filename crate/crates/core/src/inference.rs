//! MAP inference over the inference energy
//!
//! ```text
//! E_infer(y) = E_base(y) + lambda1 * E_pp(y) + lambda2 * E_pe(y)
//! ```
//!
//! where `E_pp` counts graph edges whose interaction state disagrees with the
//! argmax of the supplied pair distribution and `E_pe` counts pedestrians whose
//! label disagrees with the thresholded environment probability.
//!
//! Small scenes are solved by enumerating every labelling. Larger scenes use
//! simulated annealing started from the thresholded unary probabilities
//! (single-label flips, Metropolis acceptance, geometric cooling), returning
//! the best labelling seen.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::energy::{check_labels, PotentialTables, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::SceneGraph;
use crate::potentials::{interaction_state, InteractionState, ProbClamp};
use crate::scene::{EnergyWeights, LabelConfiguration, Scene};

/// Discrete predictions read off the supplied probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct HardLabels {
    /// `1[p_i > 0.5]` per pedestrian node.
    pub node_hard: Vec<u8>,
    /// `argmax p_ij` per graph edge, aligned with `SceneGraph::pp_edges`.
    pub pp_hard: Vec<InteractionState>,
    /// `1[p_ie > 0.5]` per pedestrian node.
    pub pe_hard: Vec<u8>,
}

impl HardLabels {
    pub fn seed(&self) -> LabelConfiguration {
        LabelConfiguration::new(self.node_hard.clone()).expect("thresholded labels are binary")
    }
}

fn threshold(p: f64) -> u8 {
    u8::from(p > 0.5)
}

/// Index of the largest component; the smallest index wins ties.
fn argmax_state(probs: &[f64; 3]) -> InteractionState {
    let mut best = 0;
    for k in 1..3 {
        if probs[k] > probs[best] {
            best = k;
        }
    }
    InteractionState::from_index(best).expect("index below 3")
}

pub fn hard_labels(scene: &Scene, graph: &SceneGraph) -> Result<HardLabels> {
    let mut node_hard = Vec::with_capacity(graph.len());
    let mut pe_hard = Vec::with_capacity(graph.len());
    for id in &graph.ped_nodes {
        let ped = scene
            .pedestrian(id)
            .ok_or_else(|| Error::Config(format!("graph node {id} is not in the scene")))?;
        node_hard.push(threshold(ped.unary_prob));
        let p_ie = scene
            .pe_probs
            .get(id)
            .ok_or_else(|| Error::MissingEnvProb(id.clone()))?;
        pe_hard.push(threshold(*p_ie));
    }
    let pp_hard = graph
        .edge_ids()
        .map(|(a, b)| {
            scene
                .pair_probs(a, b)
                .map(argmax_state)
                .ok_or_else(|| Error::MissingPairProbs(a.to_string(), b.to_string()))
        })
        .collect::<Result<_>>()?;
    Ok(HardLabels {
        node_hard,
        pp_hard,
        pe_hard,
    })
}

fn mismatch_counts(labels: &[u8], graph: &SceneGraph, hard: &HardLabels) -> (usize, usize) {
    let pp = graph
        .pp_edges
        .iter()
        .zip(&hard.pp_hard)
        .filter(|(&(i, j), &k)| interaction_state(labels[i], labels[j]) != k)
        .count();
    let pe = labels
        .iter()
        .zip(&hard.pe_hard)
        .filter(|(y, h)| y != h)
        .count();
    (pp, pe)
}

/// `(E_pp, E_pe)`: number of edges and nodes disagreeing with the hard labels.
pub fn consistency_energy(
    y: &LabelConfiguration,
    graph: &SceneGraph,
    hard: &HardLabels,
) -> (f64, f64) {
    let (pp, pe) = mismatch_counts(y.as_slice(), graph, hard);
    (pp as f64, pe as f64)
}

/// Everything needed to score a labelling, compiled once per scene.
#[derive(Clone, Debug)]
pub struct InferenceProblem<'g> {
    graph: &'g SceneGraph,
    tables: PotentialTables,
    weights: EnergyWeights,
    hard: HardLabels,
}

impl<'g> InferenceProblem<'g> {
    pub fn new(
        scene: &Scene,
        graph: &'g SceneGraph,
        w: &EnergyWeights,
        hard: &HardLabels,
        clamp: ProbClamp,
    ) -> Result<Self> {
        if hard.node_hard.len() != graph.len()
            || hard.pe_hard.len() != graph.len()
            || hard.pp_hard.len() != graph.pp_edges.len()
        {
            return Err(Error::Config("hard labels do not match the graph".into()));
        }
        Ok(Self {
            graph,
            tables: PotentialTables::compile(scene, graph, clamp)?,
            weights: *w,
            hard: hard.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn hard_labels(&self) -> &HardLabels {
        &self.hard
    }

    pub fn energy(&self, labels: &[u8]) -> f64 {
        let base = self.tables.breakdown(labels, &self.weights).total;
        let (pp, pe) = mismatch_counts(labels, self.graph, &self.hard);
        base + self.weights.lambda1 * pp as f64 + self.weights.lambda2 * pe as f64
    }
}

pub fn inference_energy(
    scene: &Scene,
    graph: &SceneGraph,
    y: &LabelConfiguration,
    w: &EnergyWeights,
    hard: &HardLabels,
    clamp: ProbClamp,
) -> Result<f64> {
    check_labels(graph, y)?;
    Ok(InferenceProblem::new(scene, graph, w, hard, clamp)?.energy(y.as_slice()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Exhaustive,
    #[serde(rename = "USSA")]
    Ussa,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "Exhaustive",
            Method::Ussa => "USSA",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    /// 1-based index of the energy evaluation.
    pub evaluation: usize,
    pub candidate_energy: f64,
    pub best_energy: f64,
    /// Annealing temperature; 0 for exhaustive enumeration.
    pub temperature: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InferenceResult {
    pub labels: LabelConfiguration,
    pub energy: f64,
    pub trace: Vec<TraceEntry>,
    pub evaluations: usize,
    /// Evaluation index at which `labels` was first reached.
    pub evaluations_to_best: usize,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealConfig {
    pub tau0: f64,
    /// Geometric rate applied to the temperature after every evaluation.
    pub cooling: f64,
    /// Number of proposals. `None` uses `max(64, 20 n)`.
    pub max_iters: Option<usize>,
    pub rng_seed: u64,
    /// Scenes with at most this many pedestrians are enumerated exactly.
    pub exhaustive_threshold: usize,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            tau0: 1.0,
            cooling: 0.95,
            max_iters: None,
            rng_seed: 0,
            exhaustive_threshold: 3,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau0.is_finite() && self.tau0 > 0.0) {
            return Err(Error::Config(format!("tau0 must be positive, got {}", self.tau0)));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::Config(format!(
                "cooling must lie in (0, 1), got {}",
                self.cooling
            )));
        }
        if self.max_iters == Some(0) {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.exhaustive_threshold == 0 {
            return Err(Error::Config("exhaustive_threshold must be at least 1".into()));
        }
        Ok(())
    }

    pub fn iterations(&self, n: usize) -> usize {
        self.max_iters.unwrap_or_else(|| 64.max(20 * n))
    }
}

/// Near-equal energies count as ties so that rounding noise cannot override
/// the lexicographic tie-break.
fn improves(candidate: f64, best: f64) -> bool {
    candidate < best - 1e-12 * best.abs().max(1.0)
}

/// Enumerates every labelling in lexicographic order.
pub fn exhaustive_map(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    hard: &HardLabels,
    clamp: ProbClamp,
) -> Result<InferenceResult> {
    let problem = InferenceProblem::new(scene, graph, w, hard, clamp)?;
    exhaustive_search(&problem, DEFAULT_ENUMERATION_CAP)
}

pub fn exhaustive_search(problem: &InferenceProblem<'_>, cap: usize) -> Result<InferenceResult> {
    let n = problem.len();
    if n > cap || n >= 64 {
        return Err(Error::CapExceeded { n, cap });
    }
    let total = 1u64 << n;
    let mut trace = Vec::with_capacity(total as usize);
    let mut best = LabelConfiguration::zeros(n);
    let mut best_energy = f64::INFINITY;
    let mut best_at = 0;
    for k in 0..total {
        let y = LabelConfiguration::from_index(n, k);
        let e = problem.energy(y.as_slice());
        let evaluation = k as usize + 1;
        if k == 0 || improves(e, best_energy) {
            best = y;
            best_energy = e;
            best_at = evaluation;
        }
        trace.push(TraceEntry {
            evaluation,
            candidate_energy: e,
            best_energy,
            temperature: 0.0,
        });
    }
    Ok(InferenceResult {
        labels: best,
        energy: best_energy,
        evaluations: trace.len(),
        trace,
        evaluations_to_best: best_at,
        method: Method::Exhaustive,
    })
}

/// Simulated annealing from an arbitrary starting labelling.
///
/// The start is evaluation 1 at temperature `tau0`. Each following evaluation
/// `t` flips one uniformly chosen label and is accepted by the Metropolis rule
/// at temperature `tau0 * cooling^(t-1)`.
pub fn anneal(
    problem: &InferenceProblem<'_>,
    init: LabelConfiguration,
    cfg: &AnnealConfig,
) -> Result<InferenceResult> {
    cfg.validate()?;
    let n = problem.len();
    if init.len() != n {
        return Err(Error::LabelLength {
            expected: n,
            found: init.len(),
        });
    }
    if n == 0 {
        return Err(Error::Config("cannot anneal an empty scene".into()));
    }

    let iterations = cfg.iterations(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut trace = Vec::with_capacity(iterations + 1);

    let mut current = init;
    let mut current_energy = problem.energy(current.as_slice());
    let mut best = current.clone();
    let mut best_energy = current_energy;
    let mut best_at = 1;
    let mut tau = cfg.tau0;
    trace.push(TraceEntry {
        evaluation: 1,
        candidate_energy: current_energy,
        best_energy,
        temperature: tau,
    });

    for step in 0..iterations {
        tau *= cfg.cooling;
        let i = rng.random_range(0..n);
        current.flip(i);
        let candidate_energy = problem.energy(current.as_slice());
        let delta = candidate_energy - current_energy;
        let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / tau).exp();

        let evaluation = step + 2;
        if improves(candidate_energy, best_energy) {
            best = current.clone();
            best_energy = candidate_energy;
            best_at = evaluation;
        }
        trace.push(TraceEntry {
            evaluation,
            candidate_energy,
            best_energy,
            temperature: tau,
        });

        if accept {
            current_energy = candidate_energy;
        } else {
            current.flip(i);
        }
    }

    Ok(InferenceResult {
        labels: best,
        energy: best_energy,
        evaluations: trace.len(),
        trace,
        evaluations_to_best: best_at,
        method: Method::Ussa,
    })
}

/// Annealing seeded with the thresholded unary probabilities.
pub fn ussa_map(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    hard: &HardLabels,
    cfg: &AnnealConfig,
    clamp: ProbClamp,
) -> Result<InferenceResult> {
    let problem = InferenceProblem::new(scene, graph, w, hard, clamp)?;
    anneal(&problem, hard.seed(), cfg)
}

/// Exhaustive search up to `cfg.exhaustive_threshold` pedestrians, seeded
/// annealing above it.
pub fn infer(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    cfg: &AnnealConfig,
    clamp: ProbClamp,
) -> Result<InferenceResult> {
    cfg.validate()?;
    let hard = hard_labels(scene, graph)?;
    if graph.len() <= cfg.exhaustive_threshold {
        exhaustive_map(scene, graph, w, &hard, clamp)
    } else {
        ussa_map(scene, graph, w, &hard, cfg, clamp)
    }
}
