//! Clustering and degree-correlation spectra.
//!
//! The undirected quantities live on the simple projection of the graph,
//! where `k = |V(i)|`. The directed ones use in-degrees of in- and
//! out-neighbours and are grouped by the node's own in-degree.

use super::table::SpectrumTable;
use super::view::GraphView;

/// Local clustering of node `i`; 0 when its degree is below 2.
pub fn local_clustering(view: &GraphView, i: usize) -> f64 {
    let g = view.undirected();
    let nbrs = g.neighbors(i);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for &j in nbrs {
        links += sorted_intersection_len(nbrs, g.neighbors(j));
    }
    // each linked pair was seen from both ends
    links as f64 / (k * (k - 1)) as f64
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Triangles through each node of the undirected projection.
///
/// Edges are oriented from lower to higher (degree, id) rank, so every
/// triangle is found once from its lowest-ranked corner.
pub fn triangle_counts(view: &GraphView) -> Vec<usize> {
    let g = view.undirected();
    let n = g.len();
    let rank_before = |a: usize, b: usize| (g.degree(a), a) < (g.degree(b), b);
    let forward: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&v| rank_before(u, v))
                .collect()
        })
        .collect();
    let mut triangles = vec![0usize; n];
    let mut mark = vec![false; n];
    for u in 0..n {
        for &v in &forward[u] {
            mark[v] = true;
        }
        for &v in &forward[u] {
            for &w in &forward[v] {
                if mark[w] {
                    triangles[u] += 1;
                    triangles[v] += 1;
                    triangles[w] += 1;
                }
            }
        }
        for &v in &forward[u] {
            mark[v] = false;
        }
    }
    triangles
}

/// Local clustering of every node.
pub fn clustering_coefficients(view: &GraphView) -> Vec<f64> {
    let g = view.undirected();
    triangle_counts(view)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let k = g.degree(i);
            if k < 2 {
                0.0
            } else {
                2.0 * t as f64 / (k * (k - 1)) as f64
            }
        })
        .collect()
}

/// Average clustering over all nodes, degree < 2 counted as 0.
pub fn mean_clustering(view: &GraphView) -> f64 {
    if view.is_empty() {
        return 0.0;
    }
    clustering_coefficients(view).iter().sum::<f64>() / view.len() as f64
}

/// C(k): mean local clustering per undirected degree class, classes `k >= 2`.
pub fn clustering_spectrum(view: &GraphView) -> SpectrumTable {
    let g = view.undirected();
    let c = clustering_coefficients(view);
    SpectrumTable::from_class_values(
        (0..view.len())
            .filter(|&i| g.degree(i) >= 2)
            .map(|i| (g.degree(i), c[i])),
    )
}

/// Average degree of the undirected neighbours of `i`; `None` for isolated nodes.
pub fn knn_of(view: &GraphView, i: usize) -> Option<f64> {
    let g = view.undirected();
    let nbrs = g.neighbors(i);
    (!nbrs.is_empty())
        .then(|| nbrs.iter().map(|&j| g.degree(j) as f64).sum::<f64>() / nbrs.len() as f64)
}

/// k_nn(k) per undirected degree class.
pub fn knn_spectrum(view: &GraphView) -> SpectrumTable {
    let g = view.undirected();
    SpectrumTable::from_class_values(
        (0..view.len()).filter_map(|i| knn_of(view, i).map(|v| (g.degree(i), v))),
    )
}

/// Average in-degree of the in-neighbours of `i`; `None` when `k_in(i) = 0`.
pub fn knn_in_in_of(view: &GraphView, i: usize) -> Option<f64> {
    let src = view.in_neighbors(i);
    (!src.is_empty())
        .then(|| src.iter().map(|&j| view.k_in(j) as f64).sum::<f64>() / src.len() as f64)
}

/// Average in-degree of the out-neighbours of `i`; `None` when `k_out(i) = 0`.
pub fn knn_in_out_of(view: &GraphView, i: usize) -> Option<f64> {
    let dst = view.out_neighbors(i);
    (!dst.is_empty())
        .then(|| dst.iter().map(|&j| view.k_in(j) as f64).sum::<f64>() / dst.len() as f64)
}

/// k_nn,in^in per in-degree class; nodes without in-links are excluded.
pub fn knn_in_in_spectrum(view: &GraphView) -> SpectrumTable {
    SpectrumTable::from_class_values(
        (0..view.len()).filter_map(|i| knn_in_in_of(view, i).map(|v| (view.k_in(i), v))),
    )
}

/// k_nn,out^in per in-degree class, class 0 included.
pub fn knn_in_out_spectrum(view: &GraphView) -> SpectrumTable {
    SpectrumTable::from_class_values(
        (0..view.len()).filter_map(|i| knn_in_out_of(view, i).map(|v| (view.k_in(i), v))),
    )
}
