// Builds the pedestrian graph for a small two-sided scene and prints its edges.

use crossing_crf::prelude::*;
use crossing_crf::scene::scene_from_json;

const SCENE: &str = r#"{
  "pedestrians": [
    {"id": "a", "boxes": [[100, 50, 120, 110]], "orientation": "left", "unary_prob": 0.8},
    {"id": "b", "boxes": [[130, 52, 150, 112]], "orientation": "left", "unary_prob": 0.7},
    {"id": "c", "boxes": [[260, 40, 280, 100]], "orientation": "left", "unary_prob": 0.6},
    {"id": "d", "boxes": [[200, 60, 220, 120]], "orientation": "right", "unary_prob": 0.2}
  ],
  "pp_probs": [],
  "pe_probs": {"a": 0.7, "b": 0.6, "c": 0.5, "d": 0.3}
}"#;

pub fn run_example() -> Result<SceneGraph, Box<dyn std::error::Error>> {
    let scene = scene_from_json(SCENE)?;
    for delta in [20.0, 50.0, 200.0] {
        let graph = build_graph(&scene, &GraphConfig::with_delta_d(delta)?)?;
        let edges: Vec<String> = graph.edge_ids().map(|(a, b)| format!("{a}-{b}")).collect();
        println!("delta_d = {delta:>5}: [{}]", edges.join(", "));
    }

    let mut unknown = scene.clone();
    unknown.pedestrians[3].orientation = Orientation::Unknown;
    let fallback = build_graph(&unknown, &GraphConfig::default())?;
    let edges: Vec<String> = fallback.edge_ids().map(|(a, b)| format!("{a}-{b}")).collect();
    println!("one orientation unknown: [{}]", edges.join(", "));

    Ok(build_graph(&scene, &GraphConfig::default())?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
