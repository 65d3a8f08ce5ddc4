//! Closed-form drift and hitting-time bounds, computed without touching
//! the simulators so that simulated and theoretical values stay independent.
//!
//! Two different quantities are traditionally both written δ:
//! `delta_descent` is the guaranteed per-step decrease of the expected
//! squared distance to the goal, and `delta_jump` is the per-step
//! activation probability of a bearing-only agent.

use core::f64::consts::PI;

use crate::error::{check_range, SteerError};

/// Moments of a planned step drawn uniformly from the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscConstants {
    /// `E|Δ·u|` for any unit direction `u`.
    pub abs_projection_mean: f64,
    /// `E‖Δ‖²`.
    pub second_moment: f64,
}

/// `E|x| = 4/(3π)` and `E(x² + y²) = 1/2` for the uniform unit disc.
pub fn disc_constants() -> DiscConstants {
    DiscConstants {
        abs_projection_mean: 4.0 / (3.0 * PI),
        second_moment: 0.5,
    }
}

/// Distance to the goal below which the expected squared-distance
/// descent of at least `delta_descent` per step is no longer guaranteed:
/// `(B(1 + μ²) + δ) / (A(1 − μ)/2)`.
pub fn equilibrium_radius(consts: &DiscConstants, mu: f64, delta_descent: f64) -> f64 {
    (consts.second_moment * (1.0 + mu * mu) + delta_descent)
        / (consts.abs_projection_mean * (1.0 - mu) / 2.0)
}

/// Upper bound on the steps needed to come from distance `d0` to within
/// the equilibrium radius: `(D0² − R²)/δ`. Returns
/// [`SteerError::VacuousBound`] when `d0` is not beyond that radius.
pub fn k_delta_bound(
    d0: f64,
    mu: f64,
    delta_descent: f64,
    consts: &DiscConstants,
) -> Result<f64, SteerError> {
    check_range("mu", mu, mu > 0.0 && mu < 1.0, "0 < mu < 1")?;
    check_range(
        "delta_descent",
        delta_descent,
        delta_descent > 0.0,
        "delta_descent > 0",
    )?;
    check_range("d0", d0, d0 > 0.0, "d0 > 0")?;
    let radius = equilibrium_radius(consts, mu, delta_descent);
    if d0 <= radius {
        return Err(SteerError::VacuousBound { d0, radius });
    }
    Ok((d0 * d0 - radius * radius) / delta_descent)
}

/// Lower bound on the expected centroid step along the required direction
/// for the full-visibility linear swarm: `0.5(1 − μ)/(8n)`.
pub fn linear_drift_bound(n: usize, mu: f64) -> f64 {
    debug_assert!(n >= 1);
    0.5 * (1.0 - mu) / (8.0 * n as f64)
}

/// Angular-spread guard: `psi_star` this close to π is refused.
pub const PSI_STAR_MARGIN: f64 = 1e-6;

/// The `Var*` constant of the bearing-only drift bound:
/// `δ²(σ/2)² (1 − cos⁴(h)) / (h − ½ sin(π − ψ*))` with `h = (π − ψ*)/2`.
pub fn var_star(delta_jump: f64, sigma: f64, psi_star: f64) -> Result<f64, SteerError> {
    check_range(
        "delta_jump",
        delta_jump,
        (0.0..=1.0).contains(&delta_jump),
        "0 <= delta_jump <= 1",
    )?;
    check_range("sigma", sigma, sigma > 0.0, "sigma > 0")?;
    check_range(
        "psi_star",
        psi_star,
        (0.0..PI - PSI_STAR_MARGIN).contains(&psi_star),
        "0 <= psi_star < pi - 1e-6",
    )?;
    let half = (PI - psi_star) / 2.0;
    // 1 - cos^4 = sin^2 (1 + cos^2), free of cancellation near half = 0
    let (s, c) = (libm::sin(half), libm::cos(half));
    let numerator = s * s * (1.0 + c * c);
    let denominator = half_minus_half_sin_double(half);
    let scale = delta_jump * delta_jump * (sigma / 2.0) * (sigma / 2.0);
    Ok(scale * numerator / denominator)
}

/// `h − ½ sin 2h`, by Taylor series where direct evaluation cancels.
fn half_minus_half_sin_double(h: f64) -> f64 {
    let u = 2.0 * h;
    if u < 0.02 {
        let u2 = u * u;
        0.5 * u * u2 * (1.0 / 6.0 - u2 * (1.0 / 120.0 - u2 * (1.0 / 5040.0 - u2 / 362_880.0)))
    } else {
        h - 0.5 * libm::sin(u)
    }
}

/// Lower bound on the expected centroid step for the bearing-only swarm:
/// `0.25(1 − μ) Var* / n²`.
pub fn bearing_drift_bound(n: usize, mu: f64, vstar: f64) -> f64 {
    debug_assert!(n >= 1 && vstar >= 0.0);
    let n = n as f64;
    0.25 * (1.0 - mu) * vstar / (n * n)
}

/// Exact expected drift of a single walker under a fixed direction:
/// `0.5(1 − μ) E[Δx | Δx ≥ 0]`, where the conditional mean equals `A`.
pub fn single_agent_drift(consts: &DiscConstants, mu: f64) -> f64 {
    0.5 * (1.0 - mu) * consts.abs_projection_mean
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::geometry::Vec2;
    use crate::sampling::{sample_unit_disc, RngStream};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn analytic_disc_constants() {
        let c = disc_constants();
        assert!(close(c.abs_projection_mean, 0.424_413_181_578_387_6, 1e-12));
        assert!(close(c.second_moment, 0.5, 1e-12));
    }

    #[test]
    fn monte_carlo_disc_constants() {
        let c = disc_constants();
        let mut rng = RngStream::from_seed(77);
        let dir = Vec2::from_angle(0.7);
        let n = 1_000_000;
        let mut s = 0.0;
        for _ in 0..n {
            s += sample_unit_disc(&mut rng).dot(dir).abs();
        }
        assert!(close(s / n as f64, c.abs_projection_mean, 0.002));
    }

    #[test]
    fn equilibrium_radius_examples() {
        let c = disc_constants();
        assert!(close(equilibrium_radius(&c, 0.1, 0.5), 5.2622, 1e-3));
        assert!(close(equilibrium_radius(&c, 0.1, 1e-12), 2.6442, 1e-3));
        let mut prev = 0.0;
        for i in 1..100 {
            let r = equilibrium_radius(&c, i as f64 / 100.0, 0.5);
            assert!(r > prev);
            prev = r;
        }
        assert!(equilibrium_radius(&c, 1.0 - 1e-9, 0.5) > 1e8);
    }

    #[test]
    fn k_delta_examples() {
        let c = disc_constants();
        let r = equilibrium_radius(&c, 0.1, 0.5);
        assert!(close(r * r, 27.69, 0.01));
        assert!(close(
            k_delta_bound(100.0, 0.1, 0.5, &c).unwrap(),
            19_944.6,
            0.1
        ));
        assert!(close(
            k_delta_bound(10.0, 0.1, 0.5, &c).unwrap(),
            144.6,
            0.1
        ));
        assert!(matches!(
            k_delta_bound(r, 0.1, 0.5, &c),
            Err(SteerError::VacuousBound { .. })
        ));
        assert!(k_delta_bound(10.0, 0.1, 0.0, &c).is_err());
    }

    #[test]
    fn k_delta_decreases_in_delta() {
        let c = disc_constants();
        for &d0 in &[10.0, 40.0, 100.0] {
            let mut prev = f64::INFINITY;
            for i in 1..200 {
                let delta = i as f64 * 0.01;
                match k_delta_bound(d0, 0.1, delta, &c) {
                    Ok(k) => {
                        assert!(k < prev && k > 0.0);
                        prev = k;
                    }
                    Err(SteerError::VacuousBound { .. }) => break,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn equilibrium_radius_increases_in_delta() {
        let c = disc_constants();
        let mut prev = 0.0;
        for i in 0..100 {
            let r = equilibrium_radius(&c, 0.3, i as f64 * 0.05);
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn linear_bound_examples() {
        assert!(close(linear_drift_bound(10, 0.01), 0.006_187_5, 1e-15));
        let one = linear_drift_bound(1, 0.0);
        assert!(close(one, 0.0625, 1e-15));
        assert!(one <= single_agent_drift(&disc_constants(), 0.0));
        assert!(close(
            single_agent_drift(&disc_constants(), 0.0),
            0.2122,
            1e-4
        ));
        assert!(linear_drift_bound(10, 1.0) == 0.0);
    }

    #[test]
    fn var_star_examples() {
        // psi* = 0: (1 - cos^4(pi/2)) / (pi/2 - sin(pi)/2) = 2/pi
        let v0 = var_star(1.0, 2.0, 0.0).unwrap();
        assert!(close(v0, 2.0 / PI, 1e-9), "{v0}");
        // psi* = pi/2: (1 - 1/4) / (pi/4 - 1/2)
        let v1 = var_star(1.0, 2.0, PI / 2.0).unwrap();
        assert!(close(v1, 0.75 / (PI / 4.0 - 0.5), 1e-9), "{v1}");
        assert!(close(v1, 2.628, 1e-3));
        assert_eq!(var_star(0.0, 2.0, 1.0).unwrap(), 0.0);
        assert!(var_star(1.0, 2.0, PI).is_err());
        assert!(var_star(1.0, 2.0, PI - 1e-7).is_err());
        assert!(var_star(1.0, 2.0, -0.1).is_err());
        // series branch agrees with direct evaluation at the switch-over
        let h = 0.01;
        let direct = h - 0.5 * libm::sin(2.0 * h);
        assert!(close(
            half_minus_half_sin_double(h * (1.0 - 1e-12)),
            direct,
            1e-9 * direct
        ));
        assert!(var_star(1.5, 2.0, 0.0).is_err());
    }

    #[test]
    fn var_star_is_continuous_and_positive() {
        let steps = 10_000;
        let top = PI - 1e-3;
        let mut prev = var_star(1.0, 1.0, 0.0).unwrap();
        for i in 1..=steps {
            let psi = top * i as f64 / steps as f64;
            let half = (PI - psi) / 2.0;
            assert!(half - 0.5 * libm::sin(PI - psi) > 0.0);
            let v = var_star(1.0, 1.0, psi).unwrap();
            assert!(v > 0.0 && v.is_finite());
            // grows without bound as psi* approaches pi, never jumps down
            assert!(v > prev, "not increasing at {psi}");
            prev = v;
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn bearing_bound_examples() {
        assert!(close(
            bearing_drift_bound(10, 0.01, 0.6366),
            1.5756e-3,
            1e-6
        ));
        assert_eq!(bearing_drift_bound(10, 0.01, 0.0), 0.0);
        let a = bearing_drift_bound(7, 0.2, 1.3);
        let b = bearing_drift_bound(14, 0.2, 1.3);
        assert!(close(a / 4.0, b, 1e-15));
    }
}
