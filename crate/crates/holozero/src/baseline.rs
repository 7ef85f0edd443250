//! Quadrature-moment baseline for benchmarking: ordinary moments of the
//! argument principle, Newton's identities, and companion-matrix roots.
//!
//! This module works on a single region (no subdivision); it exists so the
//! rational-approximation pipeline and the classical moment method can be
//! compared on equal footing by function-evaluation count.

use crate::function::FunctionHandle;
use crate::geometry::{Edge, Rectangle};
use crate::linalg;
use crate::quadrature::{gk_integrate_edge, QuadConfig, INTEGER_TOL};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("quadrature failed to converge on edge {edge}")]
    Quadrature { edge: Edge },
    #[error("zeroth moment {value} is not close to a nonnegative integer")]
    NonIntegerCount { value: Complex64 },
    #[error("companion-matrix eigenvalue solver failed")]
    Eigensolver,
}

/// Ordinary moments s_0..s_N of the argument principle over a region.
#[derive(Debug, Clone)]
pub struct MomentVector {
    /// s_k = (1/2 pi i) contour integral of z^k f'/f.
    pub values: Vec<Complex64>,
}

impl MomentVector {
    /// The zero count s_0, rounded.
    pub fn count(&self) -> u32 {
        self.values[0].re.round() as u32
    }
}

/// Monic polynomial sharing the zeros (with multiplicity) of f inside the
/// region: z^N + sigma_1 z^{N-1} + ... + sigma_N.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentPolynomial {
    pub coefficients: Vec<Complex64>,
}

impl EquivalentPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }
}

fn moment_integrand(fh: &FunctionHandle, k: usize) -> impl Fn(Complex64) -> Complex64 + '_ {
    move |z| z.powi(k as i32) * fh.log_derivative(z)
}

fn moment_k(
    fh: &FunctionHandle,
    rect: &Rectangle,
    k: usize,
    cfg: &QuadConfig,
) -> Result<Complex64, BaselineError> {
    let mut total = Complex64::new(0.0, 0.0);
    for edge in rect.edges() {
        let r = gk_integrate_edge(moment_integrand(fh, k), &edge, cfg);
        if !r.converged {
            return Err(BaselineError::Quadrature { edge });
        }
        total += r.value;
    }
    Ok(total / Complex64::new(0.0, TAU))
}

/// Computes s_0..s_N by adaptive Gauss-Kronrod integration per edge.
///
/// Requires a zero-free boundary; s_0 must land within tolerance of a
/// nonnegative integer.
pub fn moments(
    fh: &FunctionHandle,
    rect: &Rectangle,
    n: usize,
    cfg: &QuadConfig,
) -> Result<MomentVector, BaselineError> {
    let mut values = Vec::with_capacity(n + 1);
    for k in 0..=n {
        values.push(moment_k(fh, rect, k, cfg)?);
    }
    let s0 = values[0];
    let rounded = s0.re.round();
    if rounded < 0.0 || (s0 - rounded).norm() > INTEGER_TOL {
        return Err(BaselineError::NonIntegerCount { value: s0 });
    }
    values[0] = Complex64::new(rounded, 0.0);
    Ok(MomentVector { values })
}

/// Solves the lower-triangular Newton-identity system for the coefficients
/// of the equivalent polynomial:
/// `s_k + s_{k-1} sigma_1 + ... + s_1 sigma_{k-1} + k sigma_k = 0`.
pub fn newton_identities(moments: &MomentVector) -> EquivalentPolynomial {
    let n = moments.count() as usize;
    let s = &moments.values;
    let mut sigma: Vec<Complex64> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut accum = s[k];
        for j in 1..k {
            accum += s[k - j] * sigma[j - 1];
        }
        sigma.push(-accum / (k as f64));
    }
    EquivalentPolynomial {
        coefficients: sigma,
    }
}

/// Zeros of the monic equivalent polynomial as eigenvalues of its companion
/// matrix; repeated zeros appear as repeated eigenvalues.
pub fn companion_roots(p: &EquivalentPolynomial) -> Result<Vec<Complex64>, BaselineError> {
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        // last column holds -sigma_{N-i} against the monomial ordering
        m[(i, n - 1)] = -p.coefficients[n - 1 - i];
    }
    let mut roots = linalg::eigenvalues(m).ok_or(BaselineError::Eigensolver)?;
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(roots)
}

/// The full moment pipeline on one region: count via s_0, then the higher
/// moments, Newton's identities, and companion roots.
pub fn delves_lyness_zeros(
    fh: &FunctionHandle,
    rect: &Rectangle,
    cfg: &QuadConfig,
) -> Result<Vec<Complex64>, BaselineError> {
    let count = moments(fh, rect, 0, cfg)?.count() as usize;
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut values = vec![Complex64::new(count as f64, 0.0)];
    for k in 1..=count {
        values.push(moment_k(fh, rect, k, cfg)?);
    }
    let poly = newton_identities(&MomentVector { values });
    companion_roots(&poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Unit-area square centered on the real axis so real test zeros like
    /// 0.5 and 0.3 sit in the interior rather than on the boundary.
    fn test_square() -> Rectangle {
        Rectangle::new(0.0, 1.0, -0.5, 0.5).unwrap()
    }

    #[test]
    fn moments_of_single_simple_zero() {
        let fh = FunctionHandle::with_derivative(|z| z - c(0.5, 0.0), |_| c(1.0, 0.0));
        let m = moments(&fh, &test_square(), 1, &QuadConfig::default()).unwrap();
        assert_eq!(m.count(), 1);
        assert!((m.values[1] - c(0.5, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn moments_of_double_zero_match_power_sums() {
        // f = (z - 0.3)^2: s_1 = 0.6, s_2 = 2 * 0.3^2 = 0.18
        let fh = FunctionHandle::with_derivative(
            |z| (z - c(0.3, 0.0)).powi(2),
            |z| 2.0 * (z - c(0.3, 0.0)),
        );
        let m = moments(&fh, &test_square(), 2, &QuadConfig::default()).unwrap();
        assert_eq!(m.count(), 2);
        assert!((m.values[1] - c(0.6, 0.0)).norm() < 1e-9);
        assert!((m.values[2] - c(0.18, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_free_region_gives_empty_pipeline() {
        let fh = FunctionHandle::with_derivative(|z| z.exp(), |z| z.exp());
        let m = moments(&fh, &test_square(), 0, &QuadConfig::default()).unwrap();
        assert_eq!(m.count(), 0);
        assert!(newton_identities(&m).coefficients.is_empty());
        let zeros = delves_lyness_zeros(&fh, &test_square(), &QuadConfig::default()).unwrap();
        assert!(zeros.is_empty());
    }

    #[test]
    fn newton_identities_reproduce_hand_algebra() {
        // s = (1, 0.5): p(z) = z - 0.5
        let p = newton_identities(&MomentVector {
            values: vec![c(1.0, 0.0), c(0.5, 0.0)],
        });
        assert_eq!(p.degree(), 1);
        assert!((p.coefficients[0] - c(-0.5, 0.0)).norm() < 1e-15);

        // s = (2, 0.6, 0.18): p(z) = z^2 - 0.6 z + 0.09 = (z - 0.3)^2
        let p = newton_identities(&MomentVector {
            values: vec![c(2.0, 0.0), c(0.6, 0.0), c(0.18, 0.0)],
        });
        assert_eq!(p.degree(), 2);
        assert!((p.coefficients[0] - c(-0.6, 0.0)).norm() < 1e-15);
        assert!((p.coefficients[1] - c(0.09, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn companion_roots_of_simple_polynomials() {
        // z - 0.5
        let roots = companion_roots(&EquivalentPolynomial {
            coefficients: vec![c(-0.5, 0.0)],
        })
        .unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(0.5, 0.0)).norm() < 1e-14);

        // z^2 - 1
        let roots = companion_roots(&EquivalentPolynomial {
            coefficients: vec![c(0.0, 0.0), c(-1.0, 0.0)],
        })
        .unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn repeated_zero_appears_as_clustered_eigenvalues() {
        // (z - 0.3)^2: eigenvalues split as O(sqrt(eps)) around 0.3
        let roots = companion_roots(&EquivalentPolynomial {
            coefficients: vec![c(-0.6, 0.0), c(0.09, 0.0)],
        })
        .unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r - c(0.3, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn round_trip_recovers_simple_zeros() {
        let zeros = [c(0.2, 0.3), c(0.7, -0.35), c(0.45, 0.15)];
        let fh = FunctionHandle::with_derivative(
            move |z| zeros.iter().map(|a| z - a).product(),
            move |z| {
                let mut p = c(1.0, 0.0);
                let mut s = c(0.0, 0.0);
                for a in zeros {
                    s = s * (z - a) + p;
                    p *= z - a;
                }
                s
            },
        );
        let mut computed =
            delves_lyness_zeros(&fh, &test_square(), &QuadConfig::default()).unwrap();
        computed.sort_by(|a, b| a.re.total_cmp(&b.re));
        let mut expected = zeros.to_vec();
        expected.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(computed.len(), 3);
        for (c_, e) in computed.iter().zip(&expected) {
            assert!((c_ - e).norm() < 1e-7);
        }
    }

    #[test]
    fn boundary_zero_is_a_quadrature_error() {
        let fh = FunctionHandle::with_derivative(|z| z, |_| c(1.0, 0.0));
        match moments(&fh, &test_square(), 0, &QuadConfig::default()) {
            Err(BaselineError::Quadrature { .. }) => {}
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }
}
