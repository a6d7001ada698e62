//! Weighted global energy, exact Gibbs distribution and the ground-truth
//! scoring objective.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::SceneGraph;
use crate::potentials::{interaction_state, pe_potential, pp_potential, unary_potential, ProbClamp};
use crate::scene::{EnergyWeights, LabelConfiguration, PairKey, Scene};

/// Largest scene enumerated by default (2^20 configurations).
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBreakdown {
    pub unary_sum: f64,
    pub pp_sum: f64,
    pub pe_sum: f64,
    /// `alpha * unary_sum + beta * pp_sum + gamma * pe_sum`
    pub total: f64,
}

/// Pairwise cost table for one graph edge, indexed by interaction state.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTable {
    pub i: usize,
    pub j: usize,
    pub probs: [f64; 3],
    pub cost: [f64; 3],
}

/// Every potential value the graph can take, evaluated once.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTables {
    /// `unary[i][y]`
    pub unary: Vec<[f64; 2]>,
    /// `env[i][y]`
    pub env: Vec<[f64; 2]>,
    /// Aligned with `SceneGraph::pp_edges`.
    pub pairs: Vec<PairTable>,
}

impl PotentialTables {
    pub fn compile(scene: &Scene, graph: &SceneGraph, clamp: ProbClamp) -> Result<Self> {
        let mut unary = Vec::with_capacity(graph.len());
        let mut env = Vec::with_capacity(graph.len());
        for id in &graph.ped_nodes {
            let ped = scene
                .pedestrian(id)
                .ok_or_else(|| Error::Config(format!("graph node {id} is not in the scene")))?;
            unary.push([
                unary_potential(0, ped.unary_prob, clamp),
                unary_potential(1, ped.unary_prob, clamp),
            ]);
            let p_ie = *scene
                .pe_probs
                .get(id)
                .ok_or_else(|| Error::MissingEnvProb(id.clone()))?;
            env.push([pe_potential(0, p_ie, clamp), pe_potential(1, p_ie, clamp)]);
        }

        let mut pairs = Vec::with_capacity(graph.pp_edges.len());
        for &(i, j) in &graph.pp_edges {
            let (a, b) = (&graph.ped_nodes[i], &graph.ped_nodes[j]);
            let probs = *scene
                .pair_probs(a, b)
                .ok_or_else(|| Error::MissingPairProbs(a.clone(), b.clone()))?;
            // States 1, 0, 2 are reached by (0,0), (0,1), (1,1).
            let mut cost = [0.0; 3];
            for (y_i, y_j) in [(0, 1), (0, 0), (1, 1)] {
                cost[interaction_state(y_i, y_j).index()] = pp_potential(y_i, y_j, &probs, clamp)?;
            }
            pairs.push(PairTable { i, j, probs, cost });
        }

        let used: BTreeSet<PairKey> = graph
            .edge_ids()
            .map(|(a, b)| PairKey::new(a, b))
            .collect();
        let unused = scene.pp_probs.keys().filter(|k| !used.contains(*k)).count();
        if unused > 0 {
            log::warn!("ignoring {unused} pair probability entries with no graph edge");
        }

        Ok(Self { unary, env, pairs })
    }

    pub fn len(&self) -> usize {
        self.unary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unary.is_empty()
    }

    pub fn breakdown(&self, labels: &[u8], w: &EnergyWeights) -> EnergyBreakdown {
        debug_assert_eq!(labels.len(), self.unary.len());
        let unary_sum: f64 = self
            .unary
            .iter()
            .zip(labels)
            .map(|(c, &y)| c[y as usize])
            .sum();
        let pp_sum: f64 = self
            .pairs
            .iter()
            .map(|p| p.cost[interaction_state(labels[p.i], labels[p.j]).index()])
            .sum();
        let pe_sum: f64 = self
            .env
            .iter()
            .zip(labels)
            .map(|(c, &y)| c[y as usize])
            .sum();
        EnergyBreakdown {
            unary_sum,
            pp_sum,
            pe_sum,
            total: w.alpha * unary_sum + w.beta * pp_sum + w.gamma * pe_sum,
        }
    }
}

pub(crate) fn check_labels(graph: &SceneGraph, y: &LabelConfiguration) -> Result<()> {
    if y.len() != graph.len() {
        return Err(Error::LabelLength {
            expected: graph.len(),
            found: y.len(),
        });
    }
    Ok(())
}

pub fn base_energy(
    scene: &Scene,
    graph: &SceneGraph,
    y: &LabelConfiguration,
    w: &EnergyWeights,
    clamp: ProbClamp,
) -> Result<EnergyBreakdown> {
    check_labels(graph, y)?;
    let tables = PotentialTables::compile(scene, graph, clamp)?;
    Ok(tables.breakdown(y.as_slice(), w))
}

/// Exact Gibbs distribution over every labelling of a small scene, stored in
/// lexicographic configuration order.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsTable {
    n: usize,
    energies: Vec<f64>,
    probabilities: Vec<f64>,
    log_partition: f64,
}

impl GibbsTable {
    pub fn from_energies(n: usize, energies: Vec<f64>) -> Self {
        debug_assert_eq!(energies.len(), 1usize << n);
        let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = energies.iter().map(|e| (-(e - min)).exp()).collect();
        let z_shifted: f64 = weights.iter().sum();
        let probabilities = weights.into_iter().map(|w| w / z_shifted).collect();
        Self {
            n,
            energies,
            probabilities,
            log_partition: -min + z_shifted.ln(),
        }
    }

    pub fn num_pedestrians(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `ln Z`
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn probability(&self, y: &LabelConfiguration) -> f64 {
        self.probabilities[y.index() as usize]
    }

    pub fn energy(&self, y: &LabelConfiguration) -> f64 {
        self.energies[y.index() as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (LabelConfiguration, f64, f64)> + '_ {
        (0..self.len()).map(|k| {
            (
                LabelConfiguration::from_index(self.n, k as u64),
                self.energies[k],
                self.probabilities[k],
            )
        })
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Most probable configuration; the lexicographically smallest on ties.
    pub fn argmax(&self) -> LabelConfiguration {
        let mut best = 0;
        for (k, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = k;
            }
        }
        LabelConfiguration::from_index(self.n, best as u64)
    }

    /// `P(y_i = 1)`
    pub fn marginal(&self, i: usize) -> f64 {
        let bit = self.n - 1 - i;
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(k, _)| (k >> bit) & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn exact_distribution(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    clamp: ProbClamp,
) -> Result<GibbsTable> {
    exact_distribution_capped(scene, graph, w, clamp, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_distribution_capped(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    clamp: ProbClamp,
    cap: usize,
) -> Result<GibbsTable> {
    let n = graph.len();
    if n > cap || n >= 64 {
        return Err(Error::CapExceeded { n, cap });
    }
    let tables = PotentialTables::compile(scene, graph, clamp)?;
    let energies = (0..1u64 << n)
        .map(|k| {
            let y = LabelConfiguration::from_index(n, k);
            tables.breakdown(y.as_slice(), w).total
        })
        .collect();
    Ok(GibbsTable::from_energies(n, energies))
}

/// Base energy of the scene's ground-truth labelling.
pub fn training_objective(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    clamp: ProbClamp,
) -> Result<f64> {
    let gt = scene
        .ground_truth
        .as_ref()
        .ok_or_else(|| Error::MissingGroundTruth("<all>".into()))?;
    let labels = graph
        .ped_nodes
        .iter()
        .map(|id| gt.get(id).copied().ok_or_else(|| Error::MissingGroundTruth(id.clone())))
        .collect::<Result<Vec<_>>>()?;
    let y = LabelConfiguration::new(labels)?;
    Ok(base_energy(scene, graph, &y, w, clamp)?.total)
}
