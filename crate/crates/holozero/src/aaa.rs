//! The AAA greedy rational approximation algorithm: the discrete core and
//! the continuum variant that adaptively samples a rectangle boundary.
//!
//! Each iteration inserts the support point where the current error is
//! largest and recomputes the barycentric weights as the minimal right
//! singular vector of the Loewner matrix of the linearized least-squares
//! problem.

use crate::geometry::BoundaryParam;
use crate::rational::{BarycentricRational, RationalError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AAAError {
    #[error("AAA needs at least two sample points")]
    TooFewPoints,
    #[error("non-finite function value at sample point {location}")]
    NonFiniteValue { location: Complex64 },
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// Tolerances and sampling rules for the AAA algorithm.
#[derive(Debug, Clone, Copy)]
pub struct AAAConfig {
    /// Convergence tolerance relative to the largest sampled |F|.
    pub rel_tol: f64,
    /// Maximum number of support points (equivalently AAA iterations).
    pub max_degree: usize,
    /// Size of the initial equispaced boundary sample (continuum variant).
    pub init_samples: usize,
    /// Lower bound on sample points per gap between support points.
    pub min_gap_samples: usize,
    /// With m support points each gap receives
    /// `max(min_gap_samples, gap_sample_target - m)` samples.
    pub gap_sample_target: usize,
}

impl Default for AAAConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_degree: 150,
            init_samples: 16,
            min_gap_samples: 3,
            gap_sample_target: 16,
        }
    }
}

/// Outcome of an AAA run.
#[derive(Debug, Clone)]
pub struct AAAResult {
    pub approximation: BarycentricRational,
    /// Largest |F - r| over the final sample set.
    pub achieved_error: f64,
    /// Largest |F| seen over all sampled points; the convergence test is
    /// `achieved_error <= rel_tol * scale`.
    pub scale: f64,
    pub converged: bool,
    /// Number of support points placed (equals the iteration count).
    pub iterations: usize,
}

/// Weights minimizing the linearized least-squares error: the minimal right
/// singular vector of the Loewner matrix with rows
/// `(F_i - f_j) / (Z_i - z_j)` over the sample points `Z_i`.
fn solve_weights(
    samples: &[(Complex64, Complex64)],
    support: &[(Complex64, Complex64)],
) -> Vec<Complex64> {
    let m = support.len();
    if m == 1 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let rows = samples.len();
    let loewner = DMatrix::<Complex64>::from_fn(rows, m, |i, j| {
        let (zi, fi) = samples[i];
        let (zj, fj) = support[j];
        (fi - fj) / (zi - zj)
    });
    // Singular values come back sorted in descending order; on a tie for the
    // smallest this deterministically picks the last vector.
    let svd = loewner.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let last = vt.row(vt.nrows() - 1);
    last.iter().map(|x| x.conj()).collect()
}

fn max_error_index(
    samples: &[(Complex64, Complex64)],
    r: &BarycentricRational,
) -> (usize, f64) {
    let mut best = (0usize, -1.0f64);
    for (i, (z, f)) in samples.iter().enumerate() {
        let err = (f - r.eval(*z)).norm();
        if err > best.1 {
            best = (i, err);
        }
    }
    (best.0, best.1)
}

/// AAA on a fixed discrete sample set.
///
/// Support points are chosen greedily at the maximum of |F - r| over the
/// points not yet selected (starting from r = mean of F). Exhausting the
/// sample set before reaching the tolerance yields a non-converged result.
pub fn aaa_discrete(
    points: &[Complex64],
    values: &[Complex64],
    cfg: &AAAConfig,
) -> Result<AAAResult, AAAError> {
    assert_eq!(points.len(), values.len());
    if points.len() < 2 {
        return Err(AAAError::TooFewPoints);
    }
    for (z, f) in points.iter().zip(values) {
        if !f.is_finite() {
            return Err(AAAError::NonFiniteValue { location: *z });
        }
    }

    let scale = values.iter().map(|f| f.norm()).fold(0.0, f64::max);
    let mean = values.iter().sum::<Complex64>() / (values.len() as f64);

    let mut remaining: Vec<(Complex64, Complex64)> =
        points.iter().copied().zip(values.iter().copied()).collect();
    let mut support: Vec<(Complex64, Complex64)> = Vec::new();

    // first support point: farthest from the mean
    let (first, _) = remaining
        .iter()
        .enumerate()
        .max_by(|a, b| (a.1 .1 - mean).norm().total_cmp(&(b.1 .1 - mean).norm()))
        .map(|(i, _)| (i, ()))
        .expect("remaining is nonempty");
    support.push(remaining.swap_remove(first));

    loop {
        let weights = solve_weights(&remaining, &support);
        let r = BarycentricRational::new(
            support.iter().map(|s| s.0).collect(),
            support.iter().map(|s| s.1).collect(),
            weights,
        )?;
        if remaining.is_empty() {
            // degenerate: every sample became a support point
            return Ok(AAAResult {
                approximation: r,
                achieved_error: 0.0,
                scale,
                converged: false,
                iterations: support.len(),
            });
        }
        let (worst, err) = max_error_index(&remaining, &r);
        if err <= cfg.rel_tol * scale {
            return Ok(AAAResult {
                approximation: r,
                achieved_error: err,
                scale,
                converged: true,
                iterations: support.len(),
            });
        }
        if support.len() >= cfg.max_degree {
            return Ok(AAAResult {
                approximation: r,
                achieved_error: err,
                scale,
                converged: false,
                iterations: support.len(),
            });
        }
        support.push(remaining.swap_remove(worst));
    }
}

/// Continuum AAA on a rectangle boundary.
///
/// The sample set is rebuilt every iteration: support points are sorted by
/// boundary parameter and `max(min_gap_samples, gap_sample_target - m)`
/// samples are placed equispaced strictly between consecutive support points
/// (cyclically). The first support point comes from an initial equispaced
/// boundary sample at the maximum deviation from the sample mean.
pub fn aaa_continuum(
    g: impl Fn(Complex64) -> Complex64,
    boundary: &BoundaryParam,
    cfg: &AAAConfig,
) -> Result<AAAResult, AAAError> {
    let perimeter = boundary.total_length();
    let mut cache: HashMap<u64, Complex64> = HashMap::new();
    let mut eval = |t: f64| -> Result<(Complex64, Complex64), AAAError> {
        let point = boundary.point(t);
        let value = match cache.get(&t.to_bits()) {
            Some(v) => *v,
            None => {
                let v = g(point);
                cache.insert(t.to_bits(), v);
                v
            }
        };
        if !value.is_finite() {
            return Err(AAAError::NonFiniteValue { location: point });
        }
        Ok((point, value))
    };

    // bootstrap sample
    let init: Vec<(f64, Complex64, Complex64)> = (0..cfg.init_samples)
        .map(|k| {
            let t = perimeter * (k as f64) / (cfg.init_samples as f64);
            eval(t).map(|(p, v)| (t, p, v))
        })
        .collect::<Result<_, _>>()?;
    let mean = init.iter().map(|(_, _, v)| v).sum::<Complex64>() / (init.len() as f64);
    let first = init
        .iter()
        .max_by(|a, b| (a.2 - mean).norm().total_cmp(&(b.2 - mean).norm()))
        .expect("bootstrap sample is nonempty");

    // support points keyed by boundary parameter, kept sorted
    let mut support_ts: Vec<f64> = vec![first.0];
    let mut support: Vec<(Complex64, Complex64)> = vec![(first.1, first.2)];

    loop {
        let m = support.len();
        let per_gap = cfg.min_gap_samples.max(cfg.gap_sample_target.saturating_sub(m));

        // rebuild the sample set strictly between consecutive support points
        let mut samples: Vec<(Complex64, Complex64)> = Vec::with_capacity(m * per_gap);
        let mut sample_ts: Vec<f64> = Vec::with_capacity(m * per_gap);
        for i in 0..m {
            let t_a = support_ts[i];
            let t_b = if i + 1 < m {
                support_ts[i + 1]
            } else {
                support_ts[0] + perimeter
            };
            let gap = t_b - t_a;
            for j in 1..=per_gap {
                let t = t_a + gap * (j as f64) / (per_gap + 1) as f64;
                let (p, v) = eval(t)?;
                samples.push((p, v));
                sample_ts.push(t % perimeter);
            }
        }
        // The convergence scale is the largest |g| over the current sample
        // set: values near a boundary-adjacent singularity dominate it only
        // until the greedy step promotes them to support points.
        let scale = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);

        let weights = solve_weights(&samples, &support);
        let r = BarycentricRational::new(
            support.iter().map(|s| s.0).collect(),
            support.iter().map(|s| s.1).collect(),
            weights,
        )?;

        let (worst, err) = max_error_index(&samples, &r);
        if err <= cfg.rel_tol * scale {
            return Ok(AAAResult {
                approximation: r,
                achieved_error: err,
                scale,
                converged: true,
                iterations: m,
            });
        }
        if m >= cfg.max_degree {
            return Ok(AAAResult {
                approximation: r,
                achieved_error: err,
                scale,
                converged: false,
                iterations: m,
            });
        }

        // promote the worst sample to a support point, keeping ts sorted
        let t_new = sample_ts[worst];
        let insert_at = support_ts.partition_point(|&t| t < t_new);
        support_ts.insert(insert_at, t_new);
        support.insert(insert_at, samples[worst]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rectangle;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_square() -> BoundaryParam {
        Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap().boundary()
    }

    #[test]
    fn discrete_constant_converges_immediately() {
        let points: Vec<Complex64> = (0..10).map(|k| c(k as f64, 0.0)).collect();
        let values = vec![c(3.0, 1.0); 10];
        let res = aaa_discrete(&points, &values, &AAAConfig::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.achieved_error, 0.0);
    }

    #[test]
    fn discrete_linear_function_is_reproduced() {
        let points: Vec<Complex64> = (0..12)
            .map(|k| c((k as f64) / 3.0 - 2.0, 0.5 - (k as f64) / 7.0))
            .collect();
        let values: Vec<Complex64> = points.to_vec();
        let res = aaa_discrete(&points, &values, &AAAConfig::default()).unwrap();
        assert!(res.converged);
        assert!(res.iterations <= 2);
        assert_eq!(res.iterations, res.approximation.len());
        for &z in &points {
            assert!((res.approximation.eval(z) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn discrete_recovers_pole_of_reciprocal() {
        let points: Vec<Complex64> = (0..64)
            .map(|k| 2.0 * Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64) / 64.0))
            .collect();
        let values: Vec<Complex64> = points.iter().map(|z| 1.0 / z).collect();
        let res = aaa_discrete(&points, &values, &AAAConfig::default()).unwrap();
        assert!(res.converged);
        assert!(res.iterations <= 3);
        let poles = res.approximation.poles().unwrap();
        assert!(poles.iter().any(|p| p.location.norm() < 1e-12));
    }

    #[test]
    fn discrete_rejects_tiny_sample_sets() {
        assert!(matches!(
            aaa_discrete(&[c(0.0, 0.0)], &[c(1.0, 0.0)], &AAAConfig::default()),
            Err(AAAError::TooFewPoints)
        ));
    }

    #[test]
    fn continuum_constant_converges_at_one_point() {
        let res = aaa_continuum(|_| c(2.5, -1.0), &unit_square(), &AAAConfig::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn continuum_recovers_interior_pole_and_residue() {
        let a = c(0.4, 0.4);
        let res = aaa_continuum(|z| 4.0 / (z - a), &unit_square(), &AAAConfig::default()).unwrap();
        assert!(res.converged);
        let poles = res.approximation.poles().unwrap();
        let best = poles
            .iter()
            .min_by(|p, q| (p.location - a).norm().total_cmp(&(q.location - a).norm()))
            .unwrap();
        assert!((best.location - a).norm() < 1e-12);
        assert!((best.residue - c(4.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn continuum_log_derivative_of_power_zero() {
        // g = f'/f for f = e^z (z - a)^4: a simple pole at a with residue 4
        let a = c(0.3, 0.7);
        let g = move |z: Complex64| 1.0 + 4.0 / (z - a);
        let res = aaa_continuum(g, &unit_square(), &AAAConfig::default()).unwrap();
        assert!(res.converged);
        let poles = res.approximation.poles().unwrap();
        let best = poles
            .iter()
            .min_by(|p, q| (p.location - a).norm().total_cmp(&(q.location - a).norm()))
            .unwrap();
        assert!((best.location - a).norm() < 1e-12);
        assert!((best.residue - c(4.0, 0.0)).norm() < 1e-2);
    }

    #[test]
    fn continuum_iteration_count_matches_support_count() {
        let a = c(0.2, 0.6);
        let b = c(0.8, 0.3);
        let res = aaa_continuum(
            move |z| 1.0 / (z - a) + 2.0 / (z - b),
            &unit_square(),
            &AAAConfig::default(),
        )
        .unwrap();
        assert_eq!(res.iterations, res.approximation.len());
    }

    #[test]
    fn continuum_rational_targets_recover_all_poles() {
        // degree-d rationals with poles inside: AAA should need at most d+1
        // support points and find every pole to 1e-10
        let poles = [c(0.2, 0.3), c(0.7, 0.6), c(0.5, 0.1), c(0.15, 0.8), c(0.85, 0.2), c(0.4, 0.55)];
        for d in 1..=6 {
            let ps = &poles[..d];
            let g = {
                let ps = ps.to_vec();
                move |z: Complex64| {
                    ps.iter()
                        .enumerate()
                        .map(|(k, p)| (1.0 + k as f64) / (z - p))
                        .sum::<Complex64>()
                }
            };
            let res = aaa_continuum(g, &unit_square(), &AAAConfig::default()).unwrap();
            assert!(res.converged, "d = {d}");
            assert!(res.iterations <= d + 1, "d = {d}, m = {}", res.iterations);
            let found = res.approximation.poles().unwrap();
            for p in ps {
                let dist = found
                    .iter()
                    .map(|q| (q.location - p).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(dist < 1e-10, "d = {d}, pole {p}: nearest {dist:e}");
            }
        }
    }

    #[test]
    fn continuum_converged_result_does_not_overfit() {
        let a = c(0.35, 0.45);
        let g = move |z: Complex64| (3.0 * z).exp() + 2.0 / (z - a);
        let boundary = unit_square();
        let cfg = AAAConfig::default();
        let res = aaa_continuum(g, &boundary, &cfg).unwrap();
        assert!(res.converged);
        // fresh boundary points not used during the fit
        let mut worst = 0.0f64;
        for k in 0..256 {
            let t = boundary.total_length() * ((k as f64) + 0.371) / 256.0;
            let z = boundary.point(t);
            worst = worst.max((g(z) - res.approximation.eval(z)).norm());
        }
        assert!(worst <= 100.0 * cfg.rel_tol * res.scale, "worst = {worst:e}");
    }

    #[test]
    fn continuum_reports_non_finite_samples() {
        // pole exactly at the first bootstrap sample (the lower-left corner)
        let res = aaa_continuum(|z| 1.0 / z, &unit_square(), &AAAConfig::default());
        match res {
            Err(AAAError::NonFiniteValue { location }) => {
                assert!(location.norm() < 1e-12);
            }
            other => panic!("expected non-finite sample error, got {other:?}"),
        }
    }
}
