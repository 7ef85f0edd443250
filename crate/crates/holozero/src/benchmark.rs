//! Function-evaluation comparison between the rational-approximation
//! pipeline and the Delves-Lyness moment baseline on the line-of-zeros
//! benchmark product, without subdivision or polishing.
//!
//! Both methods consume the logarithmic derivative; their cost is measured
//! as the number of f'/f evaluations. The baseline's work is driven by the
//! quadrature tolerance, the rational pipeline's by the AAA tolerance.

use crate::aaa::{aaa_continuum, AAAConfig};
use crate::baseline::delves_lyness_zeros;
use crate::demos::{compfunc_handle, compfunc_zeros};
use crate::geometry::Rectangle;
use crate::quadrature::QuadConfig;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AaaLogDeriv,
    DelvesLyness,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::AaaLogDeriv => "aaa-logderiv",
            Method::DelvesLyness => "delves-lyness",
        }
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, Copy)]
pub struct BenchRow {
    pub method: Method,
    pub tolerance: f64,
    /// Evaluations of the logarithmic derivative.
    pub evaluations: u64,
    /// Largest distance from a true zero to its nearest computed zero;
    /// infinite when the method failed or missed a zero entirely.
    pub max_zero_error: f64,
    pub converged: bool,
}

fn max_zero_error(true_zeros: &[Complex64], computed: &[Complex64]) -> f64 {
    true_zeros
        .iter()
        .map(|a| {
            computed
                .iter()
                .map(|z| (z - a).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Runs both methods on the benchmark product with n+1 zeros in the unit
/// square, once per tolerance, and reports two rows per tolerance.
pub fn line_zero_comparison(n: usize, tolerances: &[f64]) -> Vec<BenchRow> {
    let square = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let true_zeros = compfunc_zeros(n);
    let residue_tol = 1e-2;
    let mut rows = Vec::with_capacity(2 * tolerances.len());

    for &tol in tolerances {
        // rational pipeline: continuum AAA of f'/f, poles filtered by
        // containment and integer residue
        let handle = compfunc_handle(n);
        let cfg = AAAConfig {
            rel_tol: tol,
            ..AAAConfig::default()
        };
        let row = match aaa_continuum(|z| handle.log_derivative(z), &square.boundary(), &cfg) {
            Ok(res) => {
                let computed: Vec<Complex64> = res
                    .approximation
                    .poles()
                    .unwrap_or_default()
                    .into_iter()
                    .filter(|p| {
                        let nearest = p.residue.re.round();
                        square.contains(p.location)
                            && nearest >= 1.0
                            && (p.residue - nearest).norm() <= residue_tol
                    })
                    .map(|p| p.location)
                    .collect();
                BenchRow {
                    method: Method::AaaLogDeriv,
                    tolerance: tol,
                    evaluations: handle.eval_counts().f,
                    max_zero_error: max_zero_error(&true_zeros, &computed),
                    converged: res.converged,
                }
            }
            Err(_) => BenchRow {
                method: Method::AaaLogDeriv,
                tolerance: tol,
                evaluations: handle.eval_counts().f,
                max_zero_error: f64::INFINITY,
                converged: false,
            },
        };
        rows.push(row);

        // moment baseline at matching quadrature tolerance
        let handle = compfunc_handle(n);
        let quad = QuadConfig {
            rel_tol: tol,
            abs_tol: tol,
            ..QuadConfig::default()
        };
        let row = match delves_lyness_zeros(&handle, &square, &quad) {
            Ok(zeros) => BenchRow {
                method: Method::DelvesLyness,
                tolerance: tol,
                evaluations: handle.eval_counts().f,
                max_zero_error: max_zero_error(&true_zeros, &zeros),
                converged: true,
            },
            Err(_) => BenchRow {
                method: Method::DelvesLyness,
                tolerance: tol,
                evaluations: handle.eval_counts().f,
                max_zero_error: f64::INFINITY,
                converged: false,
            },
        };
        rows.push(row);
    }
    rows
}
