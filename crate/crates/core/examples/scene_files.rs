// Generates a scene, writes it to disk, reads it back and shows what
// validation reports for a broken copy.

use crossing_crf::prelude::*;

pub fn run_example() -> Result<Scene, Box<dyn std::error::Error>> {
    let scene = generate_scene(&GeneratorConfig {
        n_pedestrians: 3,
        rng_seed: 1,
        frame_count: 4,
        ..Default::default()
    })?;
    let path = std::env::temp_dir().join(format!("scene_{}.json", std::process::id()));
    save_scene(&scene, &path)?;
    let loaded = load_scene(&path)?;
    std::fs::remove_file(&path)?;
    assert_eq!(loaded, scene);
    println!("round trip of {} pedestrians is exact", loaded.len());

    let mut broken = loaded.clone();
    broken.pedestrians[0].unary_prob = 1.5;
    broken.pedestrians[1].boxes.pop();
    broken.pe_probs.insert("ghost".into(), 0.5);
    let report = validate_scene(&broken);
    println!("broken copy valid: {}", report.is_valid());
    println!("{report}");
    Ok(loaded)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()?;
    Ok(())
}
