//! Barycentric rational functions: evaluation, poles, zeros, and residues.
//!
//! A rational function of degree m-1 is represented by m support points
//! `z_j`, values `f_j`, and weights `w_j` as `r = n/d` with
//! `n(z) = sum w_j f_j / (z - z_j)` and `d(z) = sum w_j / (z - z_j)`.
//! Poles and zeros come from the finite eigenvalues of an (m+1) x (m+1)
//! arrowhead pencil whose first row holds `w_j` (poles) or `w_j f_j`
//! (zeros).

use crate::linalg;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RationalError {
    #[error("support points, values, and weights must have equal nonzero lengths")]
    LengthMismatch,
    #[error("support points must be pairwise distinct")]
    DuplicateSupport,
    #[error("eigenvalue solver failed to converge")]
    Eigensolver,
}

/// A pole of a rational function together with its residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleInfo {
    pub location: Complex64,
    pub residue: Complex64,
}

/// Rational function in barycentric form.
#[derive(Debug, Clone)]
pub struct BarycentricRational {
    support: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl BarycentricRational {
    pub fn new(
        support: Vec<Complex64>,
        values: Vec<Complex64>,
        weights: Vec<Complex64>,
    ) -> Result<Self, RationalError> {
        let m = support.len();
        if m == 0 || values.len() != m || weights.len() != m {
            return Err(RationalError::LengthMismatch);
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if support[i] == support[j] {
                    return Err(RationalError::DuplicateSupport);
                }
            }
        }
        Ok(Self {
            support,
            values,
            weights,
        })
    }

    /// Number of support points; the represented degree is `len() - 1`.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Always false: a barycentric rational carries at least one support
    /// point by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self) -> usize {
        self.support.len() - 1
    }

    pub fn support(&self) -> &[Complex64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Evaluates r(z). At a support point the removable singularity is
    /// resolved to the interpolated value `f_j`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if let Some(j) = self.support.iter().position(|&s| s == z) {
            return self.values[j];
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for j in 0..self.support.len() {
            let t = self.weights[j] / (z - self.support[j]);
            num += t * self.values[j];
            den += t;
        }
        num / den
    }

    /// Poles of r with residues `n(a)/d'(a)`.
    ///
    /// The two exactly-infinite eigenvalues of the pencil (more when the
    /// weights sum to zero) are discarded, as are eigenvalues beyond
    /// 1e13 times the support scale or with non-finite components.
    pub fn poles(&self) -> Result<Vec<PoleInfo>, RationalError> {
        if self.len() < 2 {
            return Ok(Vec::new());
        }
        let locations = self.pencil_eigenvalues(&self.weights)?;
        let mut poles: Vec<PoleInfo> = locations
            .into_iter()
            .map(|a| PoleInfo {
                location: a,
                residue: self.residue_at(a),
            })
            .filter(|p| p.residue.is_finite())
            .collect();
        poles.sort_by(|a, b| {
            (a.location.re, a.location.im).partial_cmp(&(b.location.re, b.location.im)).unwrap()
        });
        Ok(poles)
    }

    /// Zeros of r (finite eigenvalues of the pencil with first row w_j f_j).
    pub fn zeros(&self) -> Result<Vec<Complex64>, RationalError> {
        let top: Vec<Complex64> = self
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, f)| w * f)
            .collect();
        if top.iter().all(|t| t.norm() == 0.0) {
            return Ok(Vec::new());
        }
        let mut zeros = self.pencil_eigenvalues(&top)?;
        zeros.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        Ok(zeros)
    }

    /// Residue of r at a simple pole `a`: n(a) / d'(a).
    fn residue_at(&self, a: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut dden = Complex64::new(0.0, 0.0);
        for j in 0..self.support.len() {
            let diff = a - self.support[j];
            num += self.weights[j] * self.values[j] / diff;
            dden -= self.weights[j] / (diff * diff);
        }
        num / dden
    }

    /// Finite eigenvalues of the arrowhead pencil with the supplied first
    /// row, solved in coordinates scaled so the support lies in the unit
    /// disk.
    ///
    /// The pencil eigenvalues are the zeros of `N(z) = sum c_j / (z - z_j)`
    /// (`c` being the first-row entries). Clustered support points make the
    /// pencil strongly non-normal and can cost the eigensolver six or seven
    /// digits, so each eigenvalue is polished by a few guarded Newton steps
    /// on `N` directly.
    fn pencil_eigenvalues(&self, top: &[Complex64]) -> Result<Vec<Complex64>, RationalError> {
        let m = self.support.len();
        let center = self.support.iter().sum::<Complex64>() / (m as f64);
        let radius = self
            .support
            .iter()
            .map(|z| (z - center).norm())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let scaled: Vec<Complex64> = self.support.iter().map(|z| (z - center) / radius).collect();

        let eigs = linalg::arrowhead_pencil_finite_eigs(top, &scaled)
            .ok_or(RationalError::Eigensolver)?;

        let mut finite: Vec<Complex64> = eigs
            .into_iter()
            .filter(|l| l.is_finite() && l.norm() <= 1e13)
            .map(|l| self.refine_node_sum_zero(top, center + radius * l, radius))
            .collect();
        // The pencil has exactly two infinite eigenvalues in exact
        // arithmetic, so more than m-1 finite ones means the filter let a
        // spurious near-infinite value through; drop the largest.
        if finite.len() > m - 1 {
            finite.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            finite.truncate(m - 1);
        }
        Ok(finite)
    }

    /// Newton refinement of a zero of `N(z) = sum c_j / (z - z_j)` from an
    /// eigenvalue estimate. Steps that grow |N|, leave the neighborhood of
    /// the estimate, or go non-finite are rejected.
    fn refine_node_sum_zero(&self, coeffs: &[Complex64], start: Complex64, radius: f64) -> Complex64 {
        let n = |z: Complex64| -> Complex64 {
            self.support
                .iter()
                .zip(coeffs)
                .map(|(zj, c)| c / (z - zj))
                .sum()
        };
        let n_prime = |z: Complex64| -> Complex64 {
            -self
                .support
                .iter()
                .zip(coeffs)
                .map(|(zj, c)| c / ((z - zj) * (z - zj)))
                .sum::<Complex64>()
        };
        let mut best = start;
        let mut best_abs = n(start).norm();
        let mut z = start;
        for _ in 0..3 {
            let step = n(z) / n_prime(z);
            if !step.is_finite() || step.norm() > 1e-2 * radius {
                break;
            }
            z -= step;
            if (z - start).norm() > 5e-2 * radius {
                break;
            }
            let abs = n(z).norm();
            if abs < best_abs {
                best = z;
                best_abs = abs;
            } else {
                break;
            }
        }
        best
    }
}
