// Writes the annealing energy trace of a five-pedestrian scene as CSV.

use std::path::PathBuf;

use crossing_crf::prelude::*;

pub fn run_example() -> Result<PathBuf, Box<dyn std::error::Error>> {
    let scene = generate_scene(&GeneratorConfig {
        n_pedestrians: 5,
        rng_seed: 5,
        ..Default::default()
    })?;
    let graph = build_graph(&scene, &GraphConfig::default())?;
    let w = EnergyWeights::default();
    let clamp = ProbClamp::default();
    let hard = hard_labels(&scene, &graph)?;
    let cfg = AnnealConfig {
        max_iters: Some(40),
        ..Default::default()
    };
    let result = ussa_map(&scene, &graph, &w, &hard, &cfg, clamp)?;

    let path = std::env::temp_dir().join(format!("energy_trace_{}.csv", std::process::id()));
    emit_trace(&result, &path)?;
    for entry in result.trace.iter().take(8) {
        println!(
            "{:>3} candidate {:.4} best {:.4} tau {:.4}",
            entry.evaluation, entry.candidate_energy, entry.best_energy, entry.temperature
        );
    }
    println!("... {} rows written to {}", result.trace.len(), path.display());
    Ok(path)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = run_example()?;
    print!("{}", std::fs::read_to_string(path)?.lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
