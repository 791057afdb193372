//! Mean-field predictions for the growth model.
//!
//! Under the proportionality `s_in = A k_in`, in-strength grows as
//! `(t / i)^theta` with `theta = A / (delta + 1 + 1/m)`, and the tails of
//! `k_in`, `s_in` and `s_out` share the exponent `1 + 1/theta`. The constant
//! `A` is either taken from a simulated graph or approximated by the mean
//! edge weight `delta + 1`.

use crate::error::{Error, Result};

/// Predicted exponents for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub a: f64,
    pub theta: f64,
    pub gamma: f64,
    pub mean_weight: f64,
}

impl Prediction {
    /// Uses `a` when given, otherwise the mean-weight approximation.
    pub fn new(delta: f64, m: usize, a: Option<f64>) -> Result<Self> {
        if !(delta >= 0.0) || m == 0 {
            return Err(Error::domain(format!(
                "need delta >= 0 and m >= 1, got delta={delta}, m={m}"
            )));
        }
        let a = a.unwrap_or_else(|| a_approx(delta));
        if !(a > 0.0) {
            return Err(Error::domain(format!("A must be positive, got {a}")));
        }
        let theta = theta(delta, m, a);
        Ok(Prediction {
            a,
            theta,
            gamma: gamma_from_theta(theta)?,
            mean_weight: mean_weight(delta),
        })
    }
}

/// Mean-weight approximation of the strength/degree ratio.
pub fn a_approx(delta: f64) -> f64 {
    delta + 1.0
}

/// Average edge weight at large times.
pub fn mean_weight(delta: f64) -> f64 {
    delta + 1.0
}

pub fn theta(delta: f64, m: usize, a: f64) -> f64 {
    a / (delta + 1.0 + 1.0 / m as f64)
}

/// Tail exponent shared by `k_in`, `s_in` and `s_out`.
pub fn gamma_from_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::domain(format!("theta must be positive, got {theta}")));
    }
    Ok(1.0 + 1.0 / theta)
}

/// Inverse of [`gamma_from_theta`].
pub fn theta_from_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::domain(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok(1.0 / (gamma - 1.0))
}

/// In-strength at time `t` of the node born at time `birth`.
pub fn predicted_strength(birth: f64, t: f64, theta: f64) -> f64 {
    (t / birth).powf(theta)
}

/// Large-time total in-strength after `t` steps, seed excluded.
pub fn expected_total_in_strength(t: u64, m: usize, delta: f64) -> f64 {
    let m = m as f64;
    m * (1.0 + 1.0 / m + delta) * t as f64
}

/// Range of the approximate exponent over `delta in [0, inf)`: `(2, 2 + 1/m]`.
pub fn gamma_bracket(m: usize) -> (f64, f64) {
    (2.0, 2.0 + 1.0 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn a_approx_values() {
        assert_eq!(a_approx(0.0), 1.0);
        assert_eq!(a_approx(0.5), 1.5);
        assert_eq!(a_approx(2.0), 3.0);
    }

    #[test]
    fn theta_values() {
        assert!((theta(0.0, 2, 1.0) - 2.0 / 3.0).abs() < EPS);
        let t = theta(1000.0, 2, 1001.0);
        assert!((t - 1001.0 / 1001.5).abs() < EPS);
        assert!(t > 0.9995 && t < 1.0);
        assert!((theta(0.5, 2, 1.5) - 0.75).abs() < EPS);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_from_theta(1.0).unwrap(), 2.0);
        assert!((gamma_from_theta(2.0 / 3.0).unwrap() - 2.5).abs() < EPS);
        assert!((gamma_from_theta(0.855).unwrap() - 2.17).abs() < 0.005);
        assert!(gamma_from_theta(0.0).is_err());
        assert!(gamma_from_theta(-0.3).is_err());
    }

    #[test]
    fn inversion_round_trip() {
        let th = theta_from_gamma(2.17).unwrap();
        assert!((gamma_from_theta(th).unwrap() - 2.17).abs() < EPS);
        // A implied by gamma = 2.17 at m = 2, delta = 0.5
        let a = th * (0.5 + 1.0 + 0.5);
        assert!((a - 1.7094).abs() < 1e-4);
    }

    #[test]
    fn strength_law() {
        for &th in &[0.3, 0.75, 1.0] {
            for &i in &[1.0, 17.0, 1e4] {
                assert_eq!(predicted_strength(i, i, th), 1.0);
            }
        }
        assert!((predicted_strength(10.0, 1000.0, 1.0) - 100.0).abs() < 1e-9);
        assert!((predicted_strength(100.0, 1e5, 0.75) - 177.827_941).abs() < 1e-5);
    }

    #[test]
    fn total_strength() {
        assert_eq!(expected_total_in_strength(0, 2, 0.5), 0.0);
        assert_eq!(expected_total_in_strength(10, 2, 0.5), 40.0);
    }

    #[test]
    fn prediction_struct() {
        let p = Prediction::new(0.5, 2, None).unwrap();
        assert_eq!(p.a, 1.5);
        assert!((p.theta - 0.75).abs() < EPS);
        assert!((p.gamma - 7.0 / 3.0).abs() < EPS);
        assert_eq!(p.mean_weight, 1.5);
        let p = Prediction::new(0.5, 2, Some(1.71)).unwrap();
        assert!((p.gamma - 2.1696).abs() < 1e-3);
        assert!(Prediction::new(-1.0, 2, None).is_err());
        assert!(Prediction::new(0.5, 2, Some(0.0)).is_err());
    }

    #[test]
    fn approximate_gamma_decreases_within_bracket() {
        for m in 1..=6 {
            let (lo, hi) = gamma_bracket(m);
            let mut prev = f64::INFINITY;
            for k in 0..400 {
                let delta = k as f64 * 0.25;
                let g = Prediction::new(delta, m, None).unwrap().gamma;
                assert!(g > lo && g <= hi + EPS, "m={m} delta={delta} g={g}");
                assert!(g < prev);
                prev = g;
            }
            assert!((Prediction::new(0.0, m, None).unwrap().gamma - hi).abs() < EPS);
        }
    }
}
