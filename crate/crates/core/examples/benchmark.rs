// Benchmarks seeded annealing against the exhaustive optimum on generated
// scenes for several weight presets.

use crossing_crf::prelude::*;
use crossing_crf::scene::WeightPreset;

pub fn run_example() -> Result<Vec<BenchmarkReport>, Box<dyn std::error::Error>> {
    let gen = GeneratorConfig {
        n_pedestrians: 8,
        rng_seed: 42,
        ..Default::default()
    };
    let mut reports = Vec::new();
    for preset in WeightPreset::ALL {
        let report = run_benchmark(
            &gen,
            50,
            &EnergyWeights::preset(preset),
            &AnnealConfig::default(),
            &GraphConfig::default(),
            ProbClamp::default(),
        )?;
        println!(
            "{:<11} match {:.2}  evaluations-to-best {:>6.2}  gap {:.2e}  accuracy {:.3}",
            preset.name(),
            report.optimal_match_rate,
            report.mean_evaluations_to_best,
            report.mean_energy_gap,
            report.mean_label_accuracy
        );
        reports.push(report);
    }
    Ok(reports)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
