// Scores every labelling of a two-pedestrian scene and splits the energy
// into unary, pairwise and environment parts.

use crossing_crf::prelude::*;
use crossing_crf::scene::scene_from_json;

const SCENE: &str = r#"{
  "pedestrians": [
    {"id": "p1", "boxes": [[100, 50, 130, 140]], "orientation": "left", "unary_prob": 0.8},
    {"id": "p2", "boxes": [[125, 55, 150, 140]], "orientation": "left", "unary_prob": 0.4}
  ],
  "pp_probs": [{"a": "p1", "b": "p2", "probs": [0.1, 0.2, 0.7]}],
  "pe_probs": {"p1": 0.7, "p2": 0.6}
}"#;

pub fn run_example() -> Result<Vec<(LabelConfiguration, f64)>, Box<dyn std::error::Error>> {
    let scene = scene_from_json(SCENE)?;
    let graph = build_graph(&scene, &GraphConfig::default())?;
    let w = EnergyWeights::default();
    let clamp = ProbClamp::default();
    let hard = hard_labels(&scene, &graph)?;

    println!("labels  unary    pp       pe       base     inference");
    let mut scored = Vec::new();
    for k in 0..1u64 << graph.len() {
        let y = LabelConfiguration::from_index(graph.len(), k);
        let b = base_energy(&scene, &graph, &y, &w, clamp)?;
        let e = inference_energy(&scene, &graph, &y, &w, &hard, clamp)?;
        println!(
            "{:<7} {:<8.4} {:<8.4} {:<8.4} {:<8.4} {e:.4}",
            y.to_string(),
            b.unary_sum, b.pp_sum, b.pe_sum, b.total
        );
        scored.push((y, e));
    }
    let best = exhaustive_map(&scene, &graph, &w, &hard, clamp)?;
    println!("MAP {} at {:.4}", best.labels, best.energy);
    Ok(scored)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
