// Runs seeded annealing and exhaustive search on the same ten-pedestrian
// scene and compares their answers and evaluation counts.

use crossing_crf::prelude::*;

pub fn run_example() -> Result<(InferenceResult, InferenceResult), Box<dyn std::error::Error>> {
    let scene = generate_scene(&GeneratorConfig {
        n_pedestrians: 10,
        rng_seed: 3,
        ..Default::default()
    })?;
    let graph = build_graph(&scene, &GraphConfig::default())?;
    let w = EnergyWeights::default();
    let clamp = ProbClamp::default();
    let hard = hard_labels(&scene, &graph)?;

    let exact = exhaustive_map(&scene, &graph, &w, &hard, clamp)?;
    let annealed = ussa_map(&scene, &graph, &w, &hard, &AnnealConfig::default(), clamp)?;
    let seed_energy = inference_energy(&scene, &graph, &hard.seed(), &w, &hard, clamp)?;

    println!("seed       {} energy {seed_energy:.4}", hard.seed());
    println!(
        "exhaustive {} energy {:.4} ({} evaluations)",
        exact.labels, exact.energy, exact.evaluations
    );
    println!(
        "annealing  {} energy {:.4} (best after {} of {} evaluations)",
        annealed.labels, annealed.energy, annealed.evaluations_to_best, annealed.evaluations
    );
    Ok((exact, annealed))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
