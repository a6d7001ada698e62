//! Test-only reference implementations. These deliberately avoid the energy
//! and inference modules and rebuild everything from the potential functions
//! and the raw scene maps.

#![allow(dead_code)]

use crossing_crf::graph::SceneGraph;
use crossing_crf::potentials::{
    interaction_state, pe_potential, pp_potential, unary_potential, ProbClamp,
};
use crossing_crf::scene::{EnergyWeights, Scene};

pub const ORACLE_TOL: f64 = 1e-9;

/// Hard labels recomputed from scratch: node and environment thresholds plus
/// the argmax state of each edge distribution (lowest index on ties).
pub struct NaiveHard {
    pub node: Vec<u8>,
    pub env: Vec<u8>,
    pub edge: Vec<usize>,
}

pub fn naive_hard(scene: &Scene, graph: &SceneGraph) -> NaiveHard {
    let node = graph
        .ped_nodes
        .iter()
        .map(|id| (scene.pedestrian(id).unwrap().unary_prob > 0.5) as u8)
        .collect();
    let env = graph
        .ped_nodes
        .iter()
        .map(|id| (scene.pe_probs[id] > 0.5) as u8)
        .collect();
    let edge = graph
        .edge_ids()
        .map(|(a, b)| {
            let p = scene.pair_probs(a, b).unwrap();
            let max = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            p.iter().position(|&v| v == max).unwrap()
        })
        .collect();
    NaiveHard { node, env, edge }
}

/// Inference energy of `y` straight from the potentials.
pub fn naive_energy(
    scene: &Scene,
    graph: &SceneGraph,
    hard: &NaiveHard,
    y: &[u8],
    w: &EnergyWeights,
    clamp: ProbClamp,
) -> f64 {
    let mut e = 0.0;
    for (i, id) in graph.ped_nodes.iter().enumerate() {
        let ped = scene.pedestrian(id).unwrap();
        e += w.alpha * unary_potential(y[i], ped.unary_prob, clamp);
        e += w.gamma * pe_potential(y[i], scene.pe_probs[id], clamp);
        if y[i] != hard.env[i] {
            e += w.lambda2;
        }
    }
    for (k, &(i, j)) in graph.pp_edges.iter().enumerate() {
        let probs = scene
            .pair_probs(&graph.ped_nodes[i], &graph.ped_nodes[j])
            .unwrap();
        e += w.beta * pp_potential(y[i], y[j], probs, clamp).unwrap();
        if interaction_state(y[i], y[j]).index() != hard.edge[k] {
            e += w.lambda1;
        }
    }
    e
}

/// Every labelling as a vector, bit `i` of the counter driving pedestrian `i`.
pub fn all_labellings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..1 << n).map(move |m| (0..n).map(|i| ((m >> i) & 1) as u8).collect())
}

/// Minimum energy and every labelling within `ORACLE_TOL` of it.
pub fn naive_argmin(
    scene: &Scene,
    graph: &SceneGraph,
    w: &EnergyWeights,
    clamp: ProbClamp,
) -> (f64, Vec<Vec<u8>>) {
    let hard = naive_hard(scene, graph);
    let scored: Vec<(Vec<u8>, f64)> = all_labellings(graph.len())
        .map(|y| {
            let e = naive_energy(scene, graph, &hard, &y, w, clamp);
            (y, e)
        })
        .collect();
    let min = scored.iter().map(|(_, e)| *e).fold(f64::INFINITY, f64::min);
    let mut set: Vec<Vec<u8>> = scored
        .into_iter()
        .filter(|(_, e)| *e <= min + ORACLE_TOL)
        .map(|(y, _)| y)
        .collect();
    set.sort();
    (min, set)
}
