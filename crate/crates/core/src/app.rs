//! Workflows behind the command-line subcommands.
//!
//! Ensemble run `r` uses seed `base_seed + r` and writes into `run_<r>/`
//! under the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{
    self, distribution, fit_power_law_mle, log_bin, matched_x_min, stats, strength_degree_slope,
    trajectory_slope, FitResult, GraphView, Quantity, SpectrumTable, StrengthDegreeFit,
    RELIABLE_CLASS_SIZE,
};
use crate::error::{Error, Result};
use crate::growth::{GrowthState, InvariantReport, Trajectory};
use crate::io;
use crate::params::ModelParams;
use crate::theory::{self, Prediction};
use crate::variates::seeded_rng;

/// Tolerance of the post-run invariant check.
pub const INVARIANT_TOLERANCE: f64 = 1e-9;

/// Decades of late-time growth used to estimate trajectory slopes.
pub const TRAJECTORY_DECADES: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub runs: usize,
    pub out_dir: PathBuf,
    pub bin_ratio: f64,
    pub x_min: f64,
    pub tracked: Vec<usize>,
    pub input: Option<PathBuf>,
    /// Also write per-run edge lists and node tables in ensembles.
    pub write_graphs: bool,
}

impl RunConfig {
    pub fn new(params: ModelParams, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            params,
            runs: 1,
            out_dir: out_dir.into(),
            bin_ratio: analysis::DEFAULT_BIN_RATIO,
            x_min: analysis::DEFAULT_X_MIN,
            tracked: Vec::new(),
            input: None,
            write_graphs: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.runs < 1 {
            return Err(Error::domain("runs must be at least 1"));
        }
        if !(self.bin_ratio > 1.0) {
            return Err(Error::domain(format!(
                "bin ratio must exceed 1, got {}",
                self.bin_ratio
            )));
        }
        if !(self.x_min > 0.0) {
            return Err(Error::domain(format!("x_min must be positive, got {}", self.x_min)));
        }
        Ok(())
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            bin_ratio: self.bin_ratio,
            x_min: self.x_min,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub bin_ratio: f64,
    /// Cutoff for the in-degree tail; the other quantities use the cutoff
    /// with the same upper-tail fraction.
    pub x_min: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            bin_ratio: analysis::DEFAULT_BIN_RATIO,
            x_min: analysis::DEFAULT_X_MIN,
        }
    }
}

/// One completed growth run.
#[derive(Debug)]
pub struct RunOutput {
    pub view: GraphView,
    pub trajectories: Vec<Trajectory>,
    pub invariants: InvariantReport,
}

pub fn simulate(params: &ModelParams, tracked: &[usize]) -> Result<RunOutput> {
    let mut state = GrowthState::init(*params)?;
    let mut rng = seeded_rng(params.rng_seed);
    let trajectories = state.grow(&mut rng, tracked)?;
    let invariants = state.check_invariants();
    Ok(RunOutput {
        view: GraphView::from_state(&state),
        trajectories,
        invariants,
    })
}

/// Everything measured on one graph.
#[derive(Debug)]
pub struct AnalysisReport {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub distributions: Vec<(Quantity, SpectrumTable)>,
    pub fits: Vec<(Quantity, Result<FitResult>)>,
    pub strength: Result<StrengthDegreeFit>,
    pub theta_measured: Option<f64>,
    pub gamma_from_a: Option<f64>,
    pub clustering: SpectrumTable,
    pub mean_clustering: f64,
    pub knn: SpectrumTable,
    pub knn_in_in: SpectrumTable,
    pub knn_in_out: SpectrumTable,
}

impl AnalysisReport {
    pub fn fit(&self, q: Quantity) -> Option<&FitResult> {
        self.fits
            .iter()
            .find(|(k, _)| *k == q)
            .and_then(|(_, r)| r.as_ref().ok())
    }

    pub fn a_measured(&self) -> Option<f64> {
        self.strength.as_ref().ok().map(|s| s.a)
    }

    /// `key<TAB>value` entries of the fit summary, in a fixed order.
    pub fn summary(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("n_nodes".to_string(), self.n_nodes as f64),
            ("n_edges".to_string(), self.n_edges as f64),
        ];
        for (q, key) in [
            (Quantity::KIn, "kin"),
            (Quantity::SIn, "sin"),
            (Quantity::SOut, "sout"),
            (Quantity::Weight, "w"),
        ] {
            if let Some(f) = self.fit(q) {
                out.push((format!("gamma_{key}_mle"), f.exponent));
                out.push((format!("gamma_{key}_stderr"), f.stderr));
                out.push((format!("x_min_{key}"), f.x_min));
                out.push((format!("n_tail_{key}"), f.n_tail as f64));
            }
        }
        if let Ok(s) = &self.strength {
            out.push(("A_measured".into(), s.a));
            out.push(("strength_loglog_slope".into(), s.loglog_slope));
        }
        if let Some(t) = self.theta_measured {
            out.push(("theta_measured".into(), t));
        }
        if let Some(g) = self.gamma_from_a {
            out.push(("gamma_from_A".into(), g));
        }
        out.push(("mean_clustering".into(), self.mean_clustering));
        let mut opt = |key: &str, v: Option<f64>| {
            if let Some(v) = v {
                out.push((key.to_string(), v));
            }
        };
        opt("clustering_spearman", self.clustering.spearman(RELIABLE_CLASS_SIZE));
        opt("knn_spearman", self.knn.spearman(RELIABLE_CLASS_SIZE));
        opt("knn_in_in_slope", self.knn_in_in.loglog_slope(RELIABLE_CLASS_SIZE));
        opt("knn_in_out_slope", self.knn_in_out.loglog_slope(RELIABLE_CLASS_SIZE));
        opt("knn_in_in_mean", self.knn_in_in.class_weighted_mean(1.0));
        opt("knn_in_out_mean", self.knn_in_out.class_weighted_mean(1.0));
        out
    }
}

pub fn analyze(view: &GraphView, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let samples: Vec<(Quantity, Vec<f64>)> = Quantity::ALL
        .iter()
        .map(|&q| distribution(view, q).map(|s| (q, s)))
        .collect::<Result<_>>()?;
    let k_in = &samples[0].1;

    let mut distributions = Vec::new();
    for (q, s) in &samples {
        let positive: Vec<f64> = s.iter().copied().filter(|&x| x > 0.0).collect();
        if !positive.is_empty() {
            distributions.push((*q, log_bin(&positive, opts.bin_ratio)?));
        }
    }

    let fits = samples
        .iter()
        .map(|(q, s)| {
            let fit = if *q == Quantity::KIn {
                fit_power_law_mle(s, opts.x_min)
            } else {
                matched_x_min(k_in, opts.x_min, s).and_then(|x| fit_power_law_mle(s, x))
            };
            (*q, fit)
        })
        .collect();

    let strength = strength_degree_slope(view);
    let (theta_measured, gamma_from_a) = match (&strength, view.params()) {
        (Ok(s), Some(p)) => {
            let th = theory::theta(p.delta, p.m, s.a);
            (Some(th), theory::gamma_from_theta(th).ok())
        }
        _ => (None, None),
    };

    Ok(AnalysisReport {
        n_nodes: view.len(),
        n_edges: view.edge_count(),
        distributions,
        fits,
        strength,
        theta_measured,
        gamma_from_a,
        clustering: analysis::clustering_spectrum(view),
        mean_clustering: analysis::mean_clustering(view),
        knn: analysis::knn_spectrum(view),
        knn_in_in: analysis::knn_in_in_spectrum(view),
        knn_in_out: analysis::knn_in_out_spectrum(view),
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes the tables and the fit summary of `report` into `dir`.
pub fn write_analysis(report: &AnalysisReport, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    for (q, table) in &report.distributions {
        let path = dir.join(format!("dist_{}.tsv", q.name()));
        io::write_spectrum(table, "density", &path)?;
        paths.push(path);
    }
    let spectra = [
        ("spectrum_clustering.tsv", "C", &report.clustering),
        ("spectrum_knn.tsv", "k_nn", &report.knn),
        ("spectrum_knn_in_in.tsv", "k_nn_in_in", &report.knn_in_in),
        ("spectrum_knn_in_out.tsv", "k_nn_out_in", &report.knn_in_out),
    ];
    for (name, col, table) in spectra {
        let path = dir.join(name);
        io::write_spectrum(table, col, &path)?;
        paths.push(path);
    }
    if let Ok(s) = &report.strength {
        let path = dir.join("strength_vs_degree.tsv");
        io::write_spectrum(&s.classes, "mean_s_in", &path)?;
        paths.push(path);
    }
    let path = dir.join("fit_summary.tsv");
    io::write_summary(&report.summary(), &path)?;
    paths.push(path);
    Ok(paths)
}

fn invariant_summary(r: &InvariantReport) -> Vec<(String, f64)> {
    vec![
        ("out_strength_rel".into(), r.out_strength),
        ("weight_symmetry_rel".into(), r.weight_symmetry),
        ("total_strength_rel".into(), r.total_strength),
        ("in_strength_rel".into(), r.in_strength),
        ("sampler_mismatches".into(), r.sampler_mismatches as f64),
        ("max_rel".into(), r.max_relative()),
        ("tolerance".into(), INVARIANT_TOLERANCE),
        ("passed".into(), if r.passes(INVARIANT_TOLERANCE) { 1.0 } else { 0.0 }),
    ]
}

fn write_run_graph(run: &RunOutput, dir: &Path, paths: &mut Vec<PathBuf>) -> Result<()> {
    let edges = dir.join("edges.tsv");
    io::write_edge_list(&run.view, &edges)?;
    let nodes = dir.join("nodes.tsv");
    io::write_node_table(&run.view, &nodes)?;
    paths.push(edges);
    paths.push(nodes);
    Ok(())
}

fn write_trajectories(run: &RunOutput, dir: &Path, paths: &mut Vec<PathBuf>) -> Result<()> {
    for traj in &run.trajectories {
        let path = dir.join(format!("trajectory_b{}.tsv", traj.birth));
        io::write_trajectory(traj, &path)?;
        paths.push(path);
    }
    Ok(())
}

#[derive(Debug)]
pub struct GenerateOutput {
    pub paths: Vec<PathBuf>,
    pub invariants: InvariantReport,
}

/// Grows one graph and writes its edge list, node table, trajectories and
/// invariant summary. Fails after writing if an invariant is violated.
pub fn run_generate(config: &RunConfig) -> Result<GenerateOutput> {
    config.validate()?;
    ensure_dir(&config.out_dir)?;
    let run = simulate(&config.params, &config.tracked)?;
    let mut paths = Vec::new();
    write_run_graph(&run, &config.out_dir, &mut paths)?;
    write_trajectories(&run, &config.out_dir, &mut paths)?;
    let inv_path = config.out_dir.join("invariants.tsv");
    io::write_summary(&invariant_summary(&run.invariants), &inv_path)?;
    paths.push(inv_path);
    check_invariants(&run.invariants)?;
    Ok(GenerateOutput {
        paths,
        invariants: run.invariants,
    })
}

fn check_invariants(r: &InvariantReport) -> Result<()> {
    if r.passes(INVARIANT_TOLERANCE) {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!(
            "max relative deviation {:e} (tolerance {INVARIANT_TOLERANCE:e}), {} sampler mismatches",
            r.max_relative(),
            r.sampler_mismatches
        )))
    }
}

pub fn format_invariants(r: &InvariantReport) -> String {
    let mut s = String::new();
    for (k, v) in invariant_summary(r) {
        let _ = writeln!(s, "{k}\t{}", io::format_g17(v));
    }
    s
}

/// Reads `config.input` and writes every analysis table into `config.out_dir`.
pub fn run_analyze(config: &RunConfig) -> Result<(AnalysisReport, Vec<PathBuf>)> {
    let input = config
        .input
        .as_deref()
        .ok_or_else(|| Error::domain("analyze needs an input edge list"))?;
    let view = io::read_edge_list(input)?;
    let report = analyze(&view, &config.analysis_options())?;
    let paths = write_analysis(&report, &config.out_dir)?;
    Ok((report, paths))
}

/// Tabulated predictions; `a = None` uses the mean-weight approximation.
pub fn run_predict(m: usize, delta: f64, a: Option<f64>) -> Result<String> {
    let p = Prediction::new(delta, m, a)?;
    let (lo, hi) = theory::gamma_bracket(m);
    let mut s = String::new();
    let _ = writeln!(s, "m\t{m}");
    let _ = writeln!(s, "delta\t{}", io::format_g17(delta));
    let _ = writeln!(s, "A\t{}", io::format_g17(p.a));
    let _ = writeln!(s, "A_source\t{}", if a.is_some() { "given" } else { "delta+1" });
    let _ = writeln!(s, "theta\t{}", io::format_g17(p.theta));
    let _ = writeln!(s, "gamma\t{}", io::format_g17(p.gamma));
    let _ = writeln!(s, "mean_weight\t{}", io::format_g17(p.mean_weight));
    let _ = writeln!(s, "gamma_min\t{}", io::format_g17(lo));
    let _ = writeln!(s, "gamma_max\t{}", io::format_g17(hi));
    Ok(s)
}

/// Summary of one ensemble member.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub entries: Vec<(String, f64)>,
}

impl RunSummary {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    pub runs: Vec<RunSummary>,
    /// `(key, mean, stddev, runs reporting the key)`
    pub aggregate: Vec<(String, f64, f64, usize)>,
}

impl EnsembleReport {
    pub fn mean(&self, key: &str) -> Option<f64> {
        self.aggregate
            .iter()
            .find(|(k, ..)| k == key)
            .map(|&(_, m, _, _)| m)
    }
}

pub fn run_seed(base: u64, run: usize) -> u64 {
    base.wrapping_add(run as u64)
}

/// Fit summary plus invariant and trajectory entries for one run.
pub fn run_entries(run: &RunOutput, report: &AnalysisReport) -> Vec<(String, f64)> {
    let mut entries = report.summary();
    entries.push(("invariant_max_rel".into(), run.invariants.max_relative()));
    for traj in &run.trajectories {
        if let Some(slope) = trajectory_slope(traj, TRAJECTORY_DECADES) {
            entries.push((format!("traj_slope_b{}", traj.birth), slope));
        }
    }
    entries
}

pub fn aggregate(runs: &[RunSummary]) -> Vec<(String, f64, f64, usize)> {
    let mut keys: Vec<String> = Vec::new();
    for r in runs {
        for (k, _) in &r.entries {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.into_iter()
        .map(|k| {
            let values: Vec<f64> = runs.iter().filter_map(|r| r.get(&k)).collect();
            let (mean, sd) = stats::mean_and_stddev(&values);
            (k, mean, sd, values.len())
        })
        .collect()
}

/// Runs `config.runs` independent growths in parallel and aggregates their summaries.
pub fn run_ensemble(config: &RunConfig) -> Result<EnsembleReport> {
    config.validate()?;
    ensure_dir(&config.out_dir)?;
    let opts = config.analysis_options();
    let runs: Vec<RunSummary> = (0..config.runs)
        .into_par_iter()
        .map(|r| {
            let seed = run_seed(config.params.rng_seed, r);
            let params = ModelParams {
                rng_seed: seed,
                ..config.params
            };
            let run = simulate(&params, &config.tracked)?;
            check_invariants(&run.invariants)?;
            let report = analyze(&run.view, &opts)?;
            let dir = config.out_dir.join(format!("run_{r}"));
            let mut paths = write_analysis(&report, &dir)?;
            write_trajectories(&run, &dir, &mut paths)?;
            if config.write_graphs {
                write_run_graph(&run, &dir, &mut paths)?;
            }
            Ok(RunSummary {
                run: r,
                seed,
                entries: run_entries(&run, &report),
            })
        })
        .collect::<Result<_>>()?;

    let aggregate = aggregate(&runs);
    write_ensemble_tables(&runs, &aggregate, &config.out_dir)?;
    Ok(EnsembleReport { runs, aggregate })
}

fn write_ensemble_tables(
    runs: &[RunSummary],
    aggregate: &[(String, f64, f64, usize)],
    dir: &Path,
) -> Result<()> {
    let mut per_run = String::from("# run\tseed");
    for (k, ..) in aggregate {
        per_run.push('\t');
        per_run.push_str(k);
    }
    per_run.push('\n');
    for r in runs {
        let _ = write!(per_run, "{}\t{}", r.run, r.seed);
        for (k, ..) in aggregate {
            let v = r.get(k).map(io::format_g17).unwrap_or_else(|| "nan".into());
            let _ = write!(per_run, "\t{v}");
        }
        per_run.push('\n');
    }
    let path = dir.join("ensemble_runs.tsv");
    fs::write(&path, per_run).map_err(|e| Error::io(&path, e))?;

    let mut summary = String::from("# key\tmean\tstddev\truns\n");
    for (k, mean, sd, n) in aggregate {
        let _ = writeln!(
            summary,
            "{k}\t{}\t{}\t{n}",
            io::format_g17(*mean),
            io::format_g17(*sd)
        );
    }
    let path = dir.join("ensemble_summary.tsv");
    fs::write(&path, summary).map_err(|e| Error::io(&path, e))
}

/// Measured exponents next to the approximate-A and measured-A predictions.
/// Uses `config.input` when set, otherwise grows a fresh graph.
pub fn run_compare(config: &RunConfig) -> Result<String> {
    let (view, trajectories) = match &config.input {
        Some(path) => (io::read_edge_list(path)?, Vec::new()),
        None => {
            config.validate()?;
            let run = simulate(&config.params, &config.tracked)?;
            check_invariants(&run.invariants)?;
            (run.view, run.trajectories)
        }
    };
    let params = view
        .params()
        .copied()
        .ok_or_else(|| Error::domain("input carries no model parameters"))?;
    let report = analyze(&view, &config.analysis_options())?;
    let approx = Prediction::new(params.delta, params.m, None)?;
    let measured = report
        .a_measured()
        .map(|a| Prediction::new(params.delta, params.m, Some(a)))
        .transpose()?;

    let mut s = String::from("# quantity\tapprox_A\tmeasured_A\tobserved\n");
    let cell = |v: Option<f64>| v.map(io::format_g17).unwrap_or_else(|| "-".into());
    let mut row = |name: &str, a: Option<f64>, b: Option<f64>, c: Option<f64>| {
        let _ = writeln!(s, "{name}\t{}\t{}\t{}", cell(a), cell(b), cell(c));
    };
    row("A", Some(approx.a), measured.map(|p| p.a), report.a_measured());
    row("theta", Some(approx.theta), measured.map(|p| p.theta), None);
    for traj in &trajectories {
        row(
            &format!("traj_slope_b{}", traj.birth),
            Some(approx.theta),
            measured.map(|p| p.theta),
            trajectory_slope(traj, TRAJECTORY_DECADES),
        );
    }
    for (q, key) in [
        (Quantity::KIn, "gamma_kin"),
        (Quantity::SIn, "gamma_sin"),
        (Quantity::SOut, "gamma_sout"),
        (Quantity::Weight, "gamma_w"),
    ] {
        row(
            key,
            Some(approx.gamma),
            measured.map(|p| p.gamma),
            report.fit(q).map(|f| f.exponent),
        );
    }
    Ok(s)
}
