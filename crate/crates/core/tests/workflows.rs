use std::fs;
use std::path::Path;

use traffic_web::analysis::{self, GraphView, Quantity};
use traffic_web::app::{self, analyze, simulate, AnalysisOptions, RunConfig};
use traffic_web::io;
use traffic_web::ModelParams;

fn params(m: usize, delta: f64, n: usize, seed: u64) -> ModelParams {
    ModelParams::with_minimal_seed(m, delta, n, seed).unwrap()
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap()
}

#[test]
fn edge_list_round_trip_preserves_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let view = simulate(&params(2, 0.5, 1000, 11), &[]).unwrap().view;
    let path = dir.path().join("edges.tsv");
    io::write_edge_list(&view, &path).unwrap();
    let back = io::read_edge_list(&path).unwrap();

    assert_eq!(back.len(), view.len());
    assert_eq!(back.params(), view.params());
    for i in 0..view.len() {
        assert_eq!(back.k_in(i), view.k_in(i));
        assert_eq!(back.k_out(i), view.k_out(i));
        assert_eq!(back.s_in(i), view.s_in(i));
        assert_eq!(back.s_out(i), view.s_out(i));
        assert_eq!(back.out_weights(i), view.out_weights(i));
    }

    let opts = AnalysisOptions::default();
    let a = analyze(&view, &opts).unwrap();
    let b = analyze(&back, &opts).unwrap();
    assert_eq!(a.summary(), b.summary());
    assert_eq!(a.clustering, b.clustering);
    assert_eq!(a.knn, b.knn);
    assert_eq!(a.knn_in_in, b.knn_in_in);
    assert_eq!(a.knn_in_out, b.knn_in_out);
    for ((qa, ta), (qb, tb)) in a.distributions.iter().zip(&b.distributions) {
        assert_eq!(qa, qb);
        assert_eq!(ta, tb);
    }
}

#[test]
fn zero_delta_node_table_has_equal_strength_and_degree() {
    let dir = tempfile::tempdir().unwrap();
    let view = simulate(&params(3, 0.0, 2000, 4), &[]).unwrap().view;
    let path = dir.path().join("nodes.tsv");
    io::write_node_table(&view, &path).unwrap();
    let rows = io::read_node_table(&path).unwrap();
    assert_eq!(rows.len(), view.len());
    for r in &rows {
        assert_eq!(r.s_in, r.k_in as f64);
        assert_eq!(r.s_out, 3.0);
    }
    assert!(view.all_weights().iter().all(|&w| w == 1.0));
    let a = analysis::strength_degree_slope(&view).unwrap();
    assert_eq!(a.a, 1.0);
}

#[test]
fn node_table_out_strength_follows_in_degree() {
    let dir = tempfile::tempdir().unwrap();
    for (m, delta) in [(1, 0.7), (2, 0.5), (4, 2.0)] {
        let view = simulate(&params(m, delta, 3000, 8), &[]).unwrap().view;
        let path = dir.path().join("nodes.tsv");
        io::write_node_table(&view, &path).unwrap();
        for r in io::read_node_table(&path).unwrap() {
            // seed nodes carry m ring in-links that were never reinforced for
            let k = if r.birth == 0 { r.k_in - m } else { r.k_in };
            let expected = m as f64 + delta * k as f64;
            assert!((r.s_out - expected).abs() <= 1e-9 * expected, "{r:?}");
        }
    }
}

#[test]
fn s_out_distribution_is_affine_image_of_k_in() {
    let (m, delta) = (2, 0.5);
    let view = simulate(&params(m, delta, 5000, 2), &[]).unwrap().view;
    let k = analysis::distribution(&view, Quantity::KIn).unwrap();
    let s = analysis::distribution(&view, Quantity::SOut).unwrap();
    for i in 0..view.len() {
        let k_growth = if view.birth(i) == 0 { k[i] - m as f64 } else { k[i] };
        assert_eq!(s[i], m as f64 + delta * k_growth);
    }
}

#[test]
fn generate_is_byte_for_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let p = params(2, 0.5, 10_000, 42);
    let mut cfg = RunConfig::new(p, a.path());
    cfg.tracked = vec![10, 100];
    let out_a = app::run_generate(&cfg).unwrap();
    cfg.out_dir = b.path().to_path_buf();
    let out_b = app::run_generate(&cfg).unwrap();
    assert_eq!(out_a.paths.len(), out_b.paths.len());
    for (pa, pb) in out_a.paths.iter().zip(&out_b.paths) {
        assert_eq!(pa.file_name(), pb.file_name());
        assert_eq!(read(pa), read(pb), "{}", pa.display());
    }
    assert!(out_a.invariants.max_relative() <= app::INVARIANT_TOLERANCE);
    assert!(a.path().join("trajectory_b100.tsv").exists());
}

#[test]
fn different_seeds_give_different_graphs() {
    let a = simulate(&params(2, 0.5, 2000, 1), &[]).unwrap().view;
    let b = simulate(&params(2, 0.5, 2000, 2), &[]).unwrap().view;
    let ea: Vec<_> = a.edges().collect();
    let eb: Vec<_> = b.edges().collect();
    assert_ne!(ea, eb);
}

#[test]
fn seed_only_generation() {
    let dir = tempfile::tempdir().unwrap();
    let p = ModelParams::new(2, 0.5, 3, 3, 0).unwrap();
    let cfg = RunConfig::new(p, dir.path());
    app::run_generate(&cfg).unwrap();
    let view = io::read_edge_list(&dir.path().join("edges.tsv")).unwrap();
    assert_eq!(view.len(), 3);
    assert_eq!(view.edge_count(), 6);
    assert!((0..3).all(|i| view.k_in(i) == 2 && view.s_out(i) == 2.0));
    let rows = io::read_node_table(&dir.path().join("nodes.tsv")).unwrap();
    assert!(rows.iter().all(|r| r.birth == 0 && r.k_in == 2 && r.s_in == 2.0));
}

#[test]
fn trajectories_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = simulate(&params(2, 0.5, 5000, 3), &[50]).unwrap();
    let traj = &run.trajectories[0];
    let path = dir.path().join("t.tsv");
    io::write_trajectory(traj, &path).unwrap();
    let back = io::read_trajectory(&path).unwrap();
    assert_eq!(back.len(), traj.points.len());
    for (p, (t, s, k)) in traj.points.iter().zip(back) {
        assert_eq!((p.t, p.s_in, p.k_in), (t, s, k));
    }
    assert_eq!(traj.points.first().unwrap().t, 50);
    assert_eq!(traj.points.first().unwrap().s_in, 1.0);
    assert_eq!(traj.points.last().unwrap().t, 5000 - 3);
}

#[test]
fn single_run_ensemble_equals_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = params(2, 0.5, 3000, 17);
    let mut cfg = RunConfig::new(p, dir.path());
    cfg.tracked = vec![20];
    let report = app::run_ensemble(&cfg).unwrap();
    assert_eq!(report.runs.len(), 1);

    let run = simulate(&p, &[20]).unwrap();
    let single = analyze(&run.view, &cfg.analysis_options()).unwrap();
    let entries = app::run_entries(&run, &single);
    assert_eq!(report.runs[0].entries, entries);
    for (k, mean, sd, n) in &report.aggregate {
        let v = entries.iter().find(|(e, _)| e == k).unwrap().1;
        assert_eq!((*mean, *sd, *n), (v, 0.0, 1), "{k}");
    }
    assert!(dir.path().join("ensemble_summary.tsv").exists());
    assert!(dir.path().join("run_0").join("fit_summary.tsv").exists());
}

#[test]
fn ensemble_runs_use_distinct_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(params(2, 0.5, 3000, 5), dir.path());
    cfg.runs = 3;
    cfg.write_graphs = true;
    let report = app::run_ensemble(&cfg).unwrap();
    let seeds: Vec<u64> = report.runs.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, vec![5, 6, 7]);
    assert_ne!(report.runs[0].entries, report.runs[1].entries);
    let e0 = read(&dir.path().join("run_0/edges.tsv"));
    let e1 = read(&dir.path().join("run_1/edges.tsv"));
    assert_ne!(e0, e1);
}

#[test]
fn analyze_writes_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = params(2, 0.5, 5000, 1);
    let view = simulate(&p, &[]).unwrap().view;
    let input = dir.path().join("edges.tsv");
    io::write_edge_list(&view, &input).unwrap();
    let mut cfg = RunConfig::new(p, dir.path().join("out"));
    cfg.input = Some(input);
    let (_, paths) = app::run_analyze(&cfg).unwrap();
    for name in [
        "dist_k_in.tsv",
        "dist_w.tsv",
        "dist_s_in.tsv",
        "dist_s_out.tsv",
        "spectrum_clustering.tsv",
        "spectrum_knn.tsv",
        "spectrum_knn_in_in.tsv",
        "spectrum_knn_in_out.tsv",
        "strength_vs_degree.tsv",
        "fit_summary.tsv",
    ] {
        assert!(paths.iter().any(|p| p.ends_with(name)), "{name} missing");
    }
    let summary = io::read_summary(&dir.path().join("out/fit_summary.tsv")).unwrap();
    for key in [
        "gamma_kin_mle",
        "gamma_sin_mle",
        "gamma_w_mle",
        "A_measured",
        "theta_measured",
        "gamma_from_A",
    ] {
        assert!(summary.iter().any(|(k, _)| k == key), "{key} missing");
    }
}

#[test]
fn zero_delta_analysis_reports_unit_a() {
    let view = simulate(&params(2, 0.0, 20_000, 6), &[]).unwrap().view;
    let report = analyze(&view, &AnalysisOptions::default()).unwrap();
    assert_eq!(report.a_measured(), Some(1.0));
}

#[test]
fn knn_is_flat_on_configuration_model() {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    let n = 20_000;
    // degrees from a truncated power law
    let degrees: Vec<usize> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            ((3.0 * (1.0 - u).powf(-1.0 / 1.5)) as usize).min(60)
        })
        .collect();
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
        .collect();
    stubs.shuffle(&mut rng);
    let edges: Vec<(usize, usize, f64)> = stubs
        .chunks_exact(2)
        .filter(|p| p[0] != p[1])
        .map(|p| (p[0], p[1], 1.0))
        .collect();
    let view = GraphView::from_edges(n, &edges, None, None).unwrap();
    let slope = analysis::knn_spectrum(&view)
        .loglog_slope(analysis::RELIABLE_CLASS_SIZE)
        .unwrap();
    assert!(slope.abs() < 0.1, "slope {slope}");
}

#[test]
fn malformed_edge_list_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    fs::write(&path, "# traffic-web edge list\n0\t1\t1\n1\t2\n").unwrap();
    let err = io::read_edge_list(&path).unwrap_err();
    assert!(matches!(err, traffic_web::Error::Parse { line: 3, .. }), "{err}");
    fs::write(&path, "0\t1\t-1\n").unwrap();
    assert!(matches!(
        io::read_edge_list(&path).unwrap_err(),
        traffic_web::Error::Domain(_)
    ));
}
