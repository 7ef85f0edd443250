//! Derivative-free evaluation of f'(z) via the trapezium-rule discretization
//! of Cauchy's integral formula on a small circle, with successive doubling
//! of the node count until two consecutive levels agree.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumDerivError {
    #[error("invalid derivative configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("function value is not finite at sample point {location}")]
    NonFiniteSample { location: Complex64 },
}

/// Configuration for [`cauchy_derivative`].
#[derive(Debug, Clone, Copy)]
pub struct DerivConfig {
    /// Radius of the circular contour around the evaluation point.
    pub radius: f64,
    /// Relative agreement required between consecutive doubling levels.
    pub rel_tol: f64,
    /// Largest node count tried; must be `initial_nodes` times a power of two.
    pub max_nodes: usize,
    /// Node count of the first level.
    pub initial_nodes: usize,
}

impl Default for DerivConfig {
    fn default() -> Self {
        Self {
            radius: 1e-2,
            rel_tol: 1e-15,
            max_nodes: 1 << 12,
            initial_nodes: 8,
        }
    }
}

impl DerivConfig {
    pub fn validate(&self) -> Result<(), NumDerivError> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(NumDerivError::InvalidConfig("radius must be positive"));
        }
        if self.rel_tol <= 0.0 {
            return Err(NumDerivError::InvalidConfig("rel_tol must be positive"));
        }
        if self.initial_nodes == 0 {
            return Err(NumDerivError::InvalidConfig("initial_nodes must be positive"));
        }
        if !self.max_nodes.is_multiple_of(self.initial_nodes)
            || !(self.max_nodes / self.initial_nodes).is_power_of_two()
        {
            return Err(NumDerivError::InvalidConfig(
                "max_nodes must be initial_nodes times a power of two",
            ));
        }
        Ok(())
    }
}

/// A derivative estimate together with the level bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct DerivEstimate {
    pub value: Complex64,
    /// False when the doubling procedure hit `max_nodes` without two
    /// consecutive levels agreeing to `rel_tol`.
    pub converged: bool,
    /// Nodes used at the final level.
    pub nodes: usize,
}

/// Trapezium-rule estimate of f'(z) with `m` nodes on the circle of radius
/// `r` around `z`. Node values are supplied by the caller.
fn level_estimate(values: &[Complex64], radius: f64) -> Complex64 {
    let m = values.len();
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        let theta = TAU * (j as f64) / (m as f64);
        sum += Complex64::from_polar(1.0, -theta) * v;
    }
    sum / (m as f64 * radius)
}

/// Single-level trapezium-rule derivative, exposed for convergence tests.
#[cfg(test)]
pub(crate) fn trapezium_derivative(
    f: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    radius: f64,
    nodes: usize,
) -> Complex64 {
    let values: Vec<Complex64> = (0..nodes)
        .map(|j| f(z + Complex64::from_polar(radius, TAU * (j as f64) / (nodes as f64))))
        .collect();
    level_estimate(&values, radius)
}

/// Approximates f'(z) from values of f alone.
///
/// Doubles the node count from `cfg.initial_nodes` until two consecutive
/// estimates agree to `cfg.rel_tol` (relative to `max(1, |estimate|)`), the
/// differences stop shrinking (the rounding plateau of the cancellation in
/// the weighted sum, typically around 1e-14 relative), or `cfg.max_nodes`
/// is reached; previously computed samples are reused at each doubling.
/// The caller is responsible for f being holomorphic on the closed disk of
/// radius `cfg.radius` about `z`.
pub fn cauchy_derivative(
    f: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    cfg: &DerivConfig,
) -> Result<DerivEstimate, NumDerivError> {
    cfg.validate()?;
    let sample = |point: Complex64| -> Result<Complex64, NumDerivError> {
        let v = f(point);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumDerivError::NonFiniteSample { location: point })
        }
    };

    let mut m = cfg.initial_nodes;
    let mut values: Vec<Complex64> = (0..m)
        .map(|j| sample(z + Complex64::from_polar(cfg.radius, TAU * (j as f64) / (m as f64))))
        .collect::<Result<_, _>>()?;
    let mut estimate = level_estimate(&values, cfg.radius);
    let mut previous_diff = f64::INFINITY;

    while m < cfg.max_nodes {
        let next_m = m * 2;
        let mut next = Vec::with_capacity(next_m);
        for j in 0..next_m {
            if j.is_multiple_of(2) {
                next.push(values[j / 2]);
            } else {
                next.push(sample(
                    z + Complex64::from_polar(cfg.radius, TAU * (j as f64) / (next_m as f64)),
                )?);
            }
        }
        let refined = level_estimate(&next, cfg.radius);
        let diff = (refined - estimate).norm();
        if diff <= cfg.rel_tol * refined.norm().max(1.0) {
            return Ok(DerivEstimate {
                value: refined,
                converged: true,
                nodes: next_m,
            });
        }
        // Exponential convergence means each doubling shrinks the
        // difference until rounding takes over; once it stops shrinking
        // the current estimate is as accurate as double precision allows.
        if diff >= previous_diff {
            return Ok(DerivEstimate {
                value: estimate,
                converged: true,
                nodes: m,
            });
        }
        previous_diff = diff;
        estimate = refined;
        values = next;
        m = next_m;
    }

    Ok(DerivEstimate {
        value: estimate,
        converged: false,
        nodes: m,
    })
}
