//! Scene-level pedestrian crossing-intention inference.
//!
//! A traffic scene is modelled as a conditional random field over a graph with
//! one node per tracked pedestrian and a single label-free environment node.
//! Upstream perception models supply three kinds of probabilities:
//!
//! * `p_i`: the probability that pedestrian `i` intends to cross,
//! * `p_ij`: a distribution over three interaction states for a pedestrian pair
//!   (inconsistent, both waiting, both crossing),
//! * `p_ie`: the probability that the environment supports `i` crossing.
//!
//! These become negative log-likelihood potentials ([`potentials`]), are
//! weighted into a global energy ([`energy`]), and the minimum-energy binary
//! labelling is found either by exhaustive enumeration or by simulated
//! annealing seeded from the thresholded unary probabilities ([`inference`]).
//!
//! ```no_run
//! use crossing_crf::prelude::*;
//!
//! # fn main() -> Result<(), crossing_crf::Error> {
//! let scene = load_scene("scene.json")?;
//! let graph = build_graph(&scene, &GraphConfig::default())?;
//! let result = infer(
//!     &scene,
//!     &graph,
//!     &EnergyWeights::default(),
//!     &AnnealConfig::default(),
//!     ProbClamp::default(),
//! )?;
//! for (id, label) in graph.ped_nodes.iter().zip(result.labels.iter()) {
//!     println!("{id}: {}", if label == 1 { "C" } else { "NC" });
//! }
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod energy;
mod error;
pub mod graph;
pub mod harness;
pub mod inference;
pub mod potentials;
pub mod scene;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::energy::{
        base_energy, exact_distribution, training_objective, EnergyBreakdown, GibbsTable,
    };
    pub use crate::graph::{build_graph, GraphConfig, SceneGraph};
    pub use crate::harness::{
        emit_trace, generate_scene, run_benchmark, BenchmarkReport, GeneratorConfig,
        OrientationMode,
    };
    pub use crate::inference::{
        consistency_energy, exhaustive_map, hard_labels, infer, inference_energy, ussa_map,
        AnnealConfig, HardLabels, InferenceResult, Method,
    };
    pub use crate::potentials::{InteractionState, ProbClamp};
    pub use crate::scene::{
        load_scene, save_scene, validate_scene, EnergyWeights, LabelConfiguration, Orientation,
        PedestrianObservation, Scene,
    };
}
