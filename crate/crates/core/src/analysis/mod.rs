//! Observables of a completed graph: distributions, tail exponents, the
//! strength/degree constant, and clustering and correlation spectra.

mod distribution;
mod fit;
mod spectra;
pub mod stats;
mod table;
mod view;

pub use distribution::{bin_edges, distribution, log_bin, Quantity, DEFAULT_BIN_RATIO};
pub use fit::{
    fit_power_law_logbin, fit_power_law_mle, matched_x_min, strength_degree_fit,
    strength_degree_slope, trajectory_slope, FitMethod, FitResult, StrengthDegreeFit, DEFAULT_X_MIN, MIN_TAIL,
    MIN_STRENGTH_CLASS,
};
pub use spectra::{
    clustering_coefficients, clustering_spectrum, knn_in_in_of, knn_in_in_spectrum,
    knn_in_out_of, knn_in_out_spectrum, knn_of, knn_spectrum, local_clustering, mean_clustering,
    triangle_counts,
};
pub use table::{SpectrumRow, SpectrumTable, RELIABLE_CLASS_SIZE};
pub use view::{GraphView, Undirected};
