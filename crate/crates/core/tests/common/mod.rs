//! Double-loop reference implementations of the spectra, built on dense
//! adjacency matrices. Only meant for graphs of a few hundred nodes.

#![allow(dead_code)]

use std::collections::BTreeMap;

use traffic_web::analysis::{GraphView, SpectrumTable};
use traffic_web::app::simulate;
use traffic_web::ModelParams;

pub struct Dense {
    pub n: usize,
    /// `directed[i][j]`: link i -> j exists.
    pub directed: Vec<Vec<bool>>,
    /// Simple undirected projection.
    pub undirected: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(view: &GraphView) -> Self {
        let n = view.len();
        let mut directed = vec![vec![false; n]; n];
        for (i, j, _) in view.edges() {
            directed[i][j] = true;
        }
        let mut undirected = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                undirected[i][j] = i != j && (directed[i][j] || directed[j][i]);
            }
        }
        Dense {
            n,
            directed,
            undirected,
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.undirected[i][j]).count()
    }

    pub fn k_in(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.directed[j][i]).count()
    }

    pub fn k_out(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.directed[i][j]).count()
    }

    pub fn triangles(&self, i: usize) -> usize {
        let a = &self.undirected;
        let mut t = 0;
        for j in 0..self.n {
            for l in j + 1..self.n {
                if a[i][j] && a[i][l] && a[j][l] {
                    t += 1;
                }
            }
        }
        t
    }

    pub fn clustering(&self, i: usize) -> f64 {
        let k = self.degree(i);
        if k < 2 {
            return 0.0;
        }
        self.triangles(i) as f64 / (k * (k - 1) / 2) as f64
    }

    pub fn knn(&self, i: usize) -> Option<f64> {
        let k = self.degree(i);
        if k == 0 {
            return None;
        }
        let sum: usize = (0..self.n)
            .filter(|&j| self.undirected[i][j])
            .map(|j| self.degree(j))
            .sum();
        Some(sum as f64 / k as f64)
    }

    pub fn knn_in_in(&self, i: usize) -> Option<f64> {
        let k = self.k_in(i);
        if k == 0 {
            return None;
        }
        let sum: usize = (0..self.n)
            .filter(|&j| self.directed[j][i])
            .map(|j| self.k_in(j))
            .sum();
        Some(sum as f64 / k as f64)
    }

    pub fn knn_in_out(&self, i: usize) -> Option<f64> {
        let k = self.k_out(i);
        if k == 0 {
            return None;
        }
        let sum: usize = (0..self.n)
            .filter(|&j| self.directed[i][j])
            .map(|j| self.k_in(j))
            .sum();
        Some(sum as f64 / k as f64)
    }
}

/// `(class, count, mean)` rows, classes ascending.
pub fn class_table(pairs: impl IntoIterator<Item = (usize, f64)>) -> Vec<(usize, usize, f64)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (k, v) in pairs {
        groups.entry(k).or_default().push(v);
    }
    groups
        .into_iter()
        .map(|(k, vs)| (k, vs.len(), vs.iter().sum::<f64>() / vs.len() as f64))
        .collect()
}

pub fn reference_spectra(d: &Dense) -> [Vec<(usize, usize, f64)>; 4] {
    let n = d.n;
    [
        class_table(
            (0..n)
                .filter(|&i| d.degree(i) >= 2)
                .map(|i| (d.degree(i), d.clustering(i))),
        ),
        class_table((0..n).filter_map(|i| d.knn(i).map(|v| (d.degree(i), v)))),
        class_table((0..n).filter_map(|i| d.knn_in_in(i).map(|v| (d.k_in(i), v)))),
        class_table((0..n).filter_map(|i| d.knn_in_out(i).map(|v| (d.k_in(i), v)))),
    ]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// First mismatch between a computed table and a reference one.
pub fn table_mismatch(
    got: &SpectrumTable,
    want: &[(usize, usize, f64)],
    tol: f64,
) -> Option<String> {
    if got.rows.len() != want.len() {
        return Some(format!("{} rows, expected {}", got.rows.len(), want.len()));
    }
    for (row, &(k, count, mean)) in got.rows.iter().zip(want) {
        if row.class != k as f64 || row.count != count || !close(row.mean, mean, tol) {
            return Some(format!(
                "row ({}, {}, {}) vs reference ({k}, {count}, {mean})",
                row.class, row.count, row.mean
            ));
        }
    }
    None
}

/// A model graph with at most `max_nodes` nodes; parameters vary with `case`.
pub fn small_model_graph(case: u64, max_nodes: usize) -> GraphView {
    let m = 1 + (case % 3) as usize;
    let delta = [0.0, 0.3, 0.5, 1.0, 2.5][(case % 5) as usize];
    let n0 = m + 1 + (case % 4) as usize;
    let n = (n0 + 10 + (case as usize * 37) % max_nodes).min(max_nodes);
    let params = ModelParams::new(m, delta, n0, n, 1000 + case).unwrap();
    simulate(&params, &[]).unwrap().view
}
