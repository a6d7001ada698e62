// Enumerates the Gibbs distribution of a generated scene and prints
// per-pedestrian crossing marginals.

use crossing_crf::prelude::*;

pub fn run_example() -> Result<GibbsTable, Box<dyn std::error::Error>> {
    let scene = generate_scene(&GeneratorConfig {
        n_pedestrians: 4,
        rng_seed: 7,
        ..Default::default()
    })?;
    let graph = build_graph(&scene, &GraphConfig::default())?;
    let table = exact_distribution(&scene, &graph, &EnergyWeights::default(), ProbClamp::default())?;

    println!("configuration  energy     probability");
    for (y, e, p) in table.iter() {
        println!("{:<14} {e:<10.4} {p:.6}", y.to_string());
    }
    println!("sum = {:.12}, ln Z = {:.6}", table.total(), table.log_partition());
    for (i, id) in graph.ped_nodes.iter().enumerate() {
        println!("P({id} crosses) = {:.4}", table.marginal(i));
    }
    println!("most probable: {}", table.argmax());
    Ok(table)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
