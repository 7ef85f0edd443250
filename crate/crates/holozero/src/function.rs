//! User-function handles: f together with its derivative channel (exact or
//! derivative-free) and race-free evaluation counters.

use crate::numderiv::{cauchy_derivative, DerivConfig};
use num_complex::Complex64;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

type DynFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Evaluation counts for the two channels of a [`FunctionHandle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalCounts {
    pub f: u64,
    pub fprime: u64,
}

impl EvalCounts {
    pub fn since(self, earlier: EvalCounts) -> EvalCounts {
        EvalCounts {
            f: self.f - earlier.f,
            fprime: self.fprime - earlier.fprime,
        }
    }
}

/// A holomorphic function together with a derivative channel.
///
/// Every evaluation of f and f' anywhere in the pipeline (quadrature, AAA
/// sampling, numerical differentiation, polishing) goes through the handle
/// and increments the shared counters. When the handle was built with
/// [`FunctionHandle::derivative_free`], the f' channel is backed by
/// [`cauchy_derivative`] and each derivative call increments the f counter
/// by the number of trapezium nodes used.
#[derive(Clone)]
pub struct FunctionHandle {
    f: DynFn,
    fprime: DynFn,
    f_count: Arc<AtomicU64>,
    fprime_count: Arc<AtomicU64>,
    derivative_free: bool,
}

impl FunctionHandle {
    /// Handle for a function with an explicitly known derivative.
    pub fn with_derivative(
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        fprime: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            fprime: Arc::new(fprime),
            f_count: Arc::new(AtomicU64::new(0)),
            fprime_count: Arc::new(AtomicU64::new(0)),
            derivative_free: false,
        }
    }

    /// Handle whose derivative channel approximates f' from values of f
    /// alone. Consumers that build rational approximations of f'/f are
    /// expected to loosen their tolerance accordingly (see
    /// [`FunctionHandle::is_derivative_free`]).
    pub fn derivative_free(
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        cfg: DerivConfig,
    ) -> Self {
        let raw: DynFn = Arc::new(f);
        let f_count = Arc::new(AtomicU64::new(0));
        let fprime: DynFn = {
            let raw = Arc::clone(&raw);
            let f_count = Arc::clone(&f_count);
            Arc::new(move |z: Complex64| {
                let counted = |w: Complex64| {
                    f_count.fetch_add(1, Ordering::Relaxed);
                    raw(w)
                };
                match cauchy_derivative(counted, z, &cfg) {
                    Ok(est) => est.value,
                    // A non-finite sample inside the derivative stencil is
                    // surfaced as a non-finite derivative value so that
                    // quadrature and AAA report the failure at this point.
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            })
        };
        Self {
            f: raw,
            fprime,
            f_count,
            fprime_count: Arc::new(AtomicU64::new(0)),
            derivative_free: true,
        }
    }

    pub fn f(&self, z: Complex64) -> Complex64 {
        self.f_count.fetch_add(1, Ordering::Relaxed);
        (self.f)(z)
    }

    pub fn fprime(&self, z: Complex64) -> Complex64 {
        self.fprime_count.fetch_add(1, Ordering::Relaxed);
        (self.fprime)(z)
    }

    /// The logarithmic derivative f'(z)/f(z).
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.fprime(z) / self.f(z)
    }

    pub fn eval_counts(&self) -> EvalCounts {
        EvalCounts {
            f: self.f_count.load(Ordering::Relaxed),
            fprime: self.fprime_count.load(Ordering::Relaxed),
        }
    }

    pub fn reset_counts(&self) {
        self.f_count.store(0, Ordering::Relaxed);
        self.fprime_count.store(0, Ordering::Relaxed);
    }

    pub fn is_derivative_free(&self) -> bool {
        self.derivative_free
    }
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("derivative_free", &self.derivative_free)
            .field("eval_counts", &self.eval_counts())
            .finish()
    }
}

/// Wraps a bare function into a derivative-free handle; see
/// [`FunctionHandle::derivative_free`].
pub fn wrap_derivative_free(
    f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    cfg: DerivConfig,
) -> FunctionHandle {
    FunctionHandle::derivative_free(f, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counters_track_both_channels() {
        let h = FunctionHandle::with_derivative(|z| z * z, |z| 2.0 * z);
        h.f(c(1.0, 0.0));
        h.f(c(2.0, 0.0));
        h.fprime(c(1.0, 0.0));
        assert_eq!(h.eval_counts(), EvalCounts { f: 2, fprime: 1 });
        let _ = h.log_derivative(c(0.5, 0.5));
        assert_eq!(h.eval_counts(), EvalCounts { f: 3, fprime: 2 });
    }

    #[test]
    fn derivative_free_exp_matches_exp() {
        let h = FunctionHandle::derivative_free(|z| z.exp(), DerivConfig::default());
        let d = h.fprime(c(1.0, 0.0));
        assert!((d - c(1.0, 0.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn derivative_free_counts_f_evals_per_node() {
        let h = FunctionHandle::derivative_free(|z| z.exp(), DerivConfig::default());
        let before = h.eval_counts();
        h.fprime(c(0.0, 0.0));
        let used = h.eval_counts().since(before);
        assert_eq!(used.fprime, 1);
        // successive doubling starts at 8 nodes and must have refined at least once
        assert!(used.f >= 16);
        assert!(used.f.is_power_of_two() || used.f.is_multiple_of(8));
    }

    #[test]
    fn clones_share_counters() {
        let h = FunctionHandle::with_derivative(|z| z, |_| c(1.0, 0.0));
        let h2 = h.clone();
        h.f(c(0.0, 0.0));
        h2.f(c(1.0, 0.0));
        assert_eq!(h.eval_counts().f, 2);
    }
}
