macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(scene_graph, "scene_graph.rs");
example!(energy_breakdown, "energy_breakdown.rs");
example!(gibbs_table, "gibbs_table.rs");
example!(ussa_vs_exhaustive, "ussa_vs_exhaustive.rs");
example!(energy_trace, "energy_trace.rs");
example!(benchmark, "benchmark.rs");
example!(scene_files, "scene_files.rs");

#[test]
fn scene_graph_example_runs() {
    let graph = scene_graph::run_example().unwrap();
    assert_eq!(graph.pp_edges, vec![(0, 1), (2, 3)]);
    assert_eq!(graph.pe_edges.len(), 4);
}

#[test]
fn energy_breakdown_example_runs() {
    let scored = energy_breakdown::run_example().unwrap();
    assert_eq!(scored.len(), 4);
    let (best, e) = scored
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert_eq!(best.as_slice(), &[1, 1]);
    // 5.3(-ln 0.8 - ln 0.4) + 0.7(-ln 0.7) + 2.5(-ln 0.7 - ln 0.6)
    assert!((e - 8.457_425_580_917_253).abs() < 1e-12, "{e}");
}

#[test]
fn gibbs_table_example_runs() {
    let table = gibbs_table::run_example().unwrap();
    assert_eq!(table.len(), 16);
    assert!((table.total() - 1.0).abs() < 1e-12);
}

#[test]
fn ussa_vs_exhaustive_example_runs() {
    let (exact, annealed) = ussa_vs_exhaustive::run_example().unwrap();
    assert_eq!(exact.evaluations, 1024);
    assert!(annealed.energy >= exact.energy - 1e-9);
}

#[test]
fn energy_trace_example_runs() {
    let path = energy_trace::run_example().unwrap();
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(csv.lines().count(), 42);
}

#[test]
fn benchmark_example_runs() {
    let reports = benchmark::run_example().unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.scenes == 50));
}

#[test]
fn scene_files_example_runs() {
    let scene = scene_files::run_example().unwrap();
    assert_eq!(scene.len(), 3);
}
