//! Built-in demo problems exercised by the CLI and the acceptance suite.
//!
//! Every demo fixes its own function handle, search rectangle, engine
//! tuning, and (where available) an independent oracle for the expected
//! answers, so runs are reproducible down to the bit level.

use crate::engine::EngineConfig;
use crate::function::FunctionHandle;
use crate::geometry::Rectangle;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

type C = Complex64;

/// How a demo is meant to be run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoMode {
    /// Full engine: argument-principle subdivision plus approximation.
    FindZeros,
    /// Meromorphic target: uniform manual subdivision, then approximation.
    ManualPoles { depth: u32 },
}

/// A ready-to-run demo problem.
pub struct DemoProblem {
    pub name: &'static str,
    pub summary: &'static str,
    pub rect: Rectangle,
    pub handle: FunctionHandle,
    pub mode: DemoMode,
    /// Demo-tuned engine configuration (seed and thread count are the
    /// caller's to override).
    pub config: EngineConfig,
}

/// Names and one-line summaries of all built-in demos.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("grid100", "product with 100 zeros on a 10x10 grid in [-1,1]+[-1,1]i"),
        ("quasirandom100", "product with 100 quasi-random simple zeros in the unit square"),
        ("annular", "transcendental stability function of an annular combustion chamber"),
        ("sheets", "branch-cut-free product of the two Riemann sheets of sin(sqrt(z^2+1))-z"),
        ("circulant-det", "eigenvalues of a seeded 50x50 circulant matrix as zeros of det(A-zI)"),
        ("circulant-resolvent", "the same eigenvalues as poles of the scalarized resolvent"),
        ("funcchoice", "exp(z)(z-a)^alpha with a configurable zero and order"),
    ]
}

/// Extra parameters accepted by parameterizable demos.
#[derive(Debug, Clone, Copy)]
pub struct DemoParams {
    /// Zero order for `funcchoice`.
    pub alpha: u32,
    /// Zero location for `funcchoice`.
    pub zero: C,
    /// Run seed; fixes the resolvent probe vectors.
    pub seed: u64,
}

impl Default for DemoParams {
    fn default() -> Self {
        Self {
            alpha: 4,
            zero: C::new(0.3, 0.7),
            seed: 0,
        }
    }
}

/// Builds a demo by name; `None` for unknown names.
pub fn build(name: &str, params: &DemoParams) -> Option<DemoProblem> {
    match name {
        "grid100" => Some(grid100()),
        "quasirandom100" => Some(quasirandom100()),
        "annular" => Some(annular()),
        "sheets" => Some(sheets()),
        "circulant-det" => Some(circulant_det()),
        "circulant-resolvent" => Some(circulant_resolvent(params.seed)),
        "funcchoice" => Some(func_choice(params.alpha, params.zero)),
        _ => None,
    }
}

/// Handle for a monic product over the given zeros; the derivative is
/// accumulated alongside the product so it stays exact at the zeros.
pub fn product_handle(zeros: Vec<C>) -> FunctionHandle {
    let zs = Arc::new(zeros);
    let zs2 = Arc::clone(&zs);
    FunctionHandle::with_derivative(
        move |z| zs.iter().map(|a| z - a).product(),
        move |z| {
            let mut product = C::new(1.0, 0.0);
            let mut derivative = C::new(0.0, 0.0);
            for a in zs2.iter() {
                derivative = derivative * (z - a) + product;
                product *= z - a;
            }
            derivative
        },
    )
}

// ---------------------------------------------------------------------------
// grid100

/// The 10x10 grid of zeros: (j + ik)/10 for odd j, k in [-9, 9]. All 100
/// points lie strictly inside [-1,1]+[-1,1]i.
pub fn grid100_points() -> Vec<C> {
    let odd = [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9];
    let mut points = Vec::with_capacity(100);
    for j in odd {
        for k in odd {
            points.push(C::new(j as f64 / 10.0, k as f64 / 10.0));
        }
    }
    points
}

pub fn grid100() -> DemoProblem {
    DemoProblem {
        name: "grid100",
        summary: catalog()[0].1,
        rect: Rectangle::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
        handle: product_handle(grid100_points()),
        mode: DemoMode::FindZeros,
        config: EngineConfig::default(),
    }
}

// ---------------------------------------------------------------------------
// quasirandom100

/// Van der Corput radical inverse in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut denom = 1.0;
    while index > 0 {
        denom *= base as f64;
        result += (index % base) as f64 / denom;
        index /= base;
    }
    result
}

/// 100 quasi-random simple zeros: a Halton (2,3) sequence mapped affinely
/// into the unit square. The map constants keep every coordinate away from
/// the dyadic subdivision lines the engine uses.
pub fn quasirandom100_points() -> Vec<C> {
    (1..=100)
        .map(|j| {
            C::new(
                0.0317 + 0.9382 * radical_inverse(j, 2),
                0.0274 + 0.9382 * radical_inverse(j, 3),
            )
        })
        .collect()
}

pub fn quasirandom100() -> DemoProblem {
    DemoProblem {
        name: "quasirandom100",
        summary: catalog()[1].1,
        rect: Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap(),
        handle: product_handle(quasirandom100_points()),
        mode: DemoMode::FindZeros,
        config: EngineConfig::default(),
    }
}

// ---------------------------------------------------------------------------
// annular combustion chamber

pub const ANNULAR_A: f64 = -0.19435;
pub const ANNULAR_B: f64 = 1000.41;
pub const ANNULAR_C: f64 = 522463.0;
pub const ANNULAR_T: f64 = 0.005;

pub fn annular_f(z: C) -> C {
    z * z + ANNULAR_A * z + ANNULAR_B * (-ANNULAR_T * z).exp() + ANNULAR_C
}

pub fn annular_fprime(z: C) -> C {
    2.0 * z + ANNULAR_A - ANNULAR_T * ANNULAR_B * (-ANNULAR_T * z).exp()
}

pub fn annular_rect() -> Rectangle {
    Rectangle::new(-2500.0, 10.0, -15000.0, 15000.0).unwrap()
}

pub fn annular() -> DemoProblem {
    // The region spans tens of thousands of units with zeros a few dozen
    // units from the left edge, so the boundary integrals need a much
    // larger panel budget than the defaults.
    let config = EngineConfig {
        quad: crate::quadrature::QuadConfig {
            max_subdivisions: 800,
            ..Default::default()
        },
        ..EngineConfig::default()
    };
    DemoProblem {
        name: "annular",
        summary: catalog()[2].1,
        rect: annular_rect(),
        handle: FunctionHandle::with_derivative(annular_f, annular_fprime),
        mode: DemoMode::FindZeros,
        config,
    }
}

// ---------------------------------------------------------------------------
// Riemann sheets

/// The two sheets of sin(sqrt(z^2+1)) - z under the principal square root.
pub fn sheet_values(z: C) -> (C, C) {
    let s = (z * z + 1.0).sqrt().sin();
    (s - z, -s - z)
}

/// Pointwise product of the sheets: F(z) = z^2 - sin^2(sqrt(z^2+1)).
/// Both sin^2(w) and sin(2w)/w are even in w, so F is single-valued and
/// entire despite the square root.
pub fn sheets_f(z: C) -> C {
    let w = (z * z + 1.0).sqrt();
    let s = w.sin();
    z * z - s * s
}

pub fn sheets_fprime(z: C) -> C {
    let w = (z * z + 1.0).sqrt();
    // F' = z (2 - sin(2w)/w); series near w = 0 (z near +/- i)
    let ratio = if w.norm() < 1e-3 {
        let w2 = w * w;
        2.0 - 4.0 / 3.0 * w2 + 4.0 / 15.0 * w2 * w2
    } else {
        (2.0 * w).sin() / w
    };
    z * (2.0 - ratio)
}

pub fn sheets_rect() -> Rectangle {
    Rectangle::new(-5.0, 5.0, -5.0, 5.0).unwrap()
}

pub fn sheets() -> DemoProblem {
    DemoProblem {
        name: "sheets",
        summary: catalog()[3].1,
        rect: sheets_rect(),
        handle: FunctionHandle::with_derivative(sheets_f, sheets_fprime),
        mode: DemoMode::FindZeros,
        config: EngineConfig::default(),
    }
}

// ---------------------------------------------------------------------------
// 50x50 circulant matrix, two ways

/// Seed for the circulant entries. Chosen (and frozen) so that every
/// eigenvalue lies well inside the search rectangle, keeps at least 0.03
/// away from every manual depth-6 subdivision line, and the pairwise
/// separation stays above 0.13.
pub const CIRCULANT_SEED: u64 = 38;
pub const CIRCULANT_N: usize = 50;

/// First row of the circulant matrix: entries drawn from {-0.4, 0.4}.
pub fn circulant_entries() -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(CIRCULANT_SEED);
    (0..CIRCULANT_N)
        .map(|_| if rng.random::<bool>() { 0.4 } else { -0.4 })
        .collect()
}

/// The circulant matrix itself: row j is the first row cyclically shifted
/// right j times.
pub fn circulant_matrix() -> DMatrix<f64> {
    let c = circulant_entries();
    let n = CIRCULANT_N;
    DMatrix::from_fn(n, n, |j, k| c[(k + n - j) % n])
}

/// Analytic eigenvalues of the circulant matrix: the discrete Fourier
/// transform of its first row. This is the trusted oracle the computed
/// spectra are compared against.
pub fn circulant_eigenvalues() -> Vec<C> {
    let c = circulant_entries();
    let n = CIRCULANT_N;
    (0..n)
        .map(|m| {
            (0..n)
                .map(|l| c[l] * C::from_polar(1.0, TAU * (l as f64) * (m as f64) / (n as f64)))
                .sum()
        })
        .collect()
}

pub fn circulant_rect() -> Rectangle {
    // Deliberately asymmetric about both axes so that unperturbed
    // subdivision lines avoid the real-axis eigenvalues.
    Rectangle::new(-5.1, 5.0, -4.9, 4.7).unwrap()
}

/// Shared LU factorization of A - zI, memoized on the last z: the f and f'
/// channels are always queried back to back at the same point, so each
/// point is factored once.
type FactoredLu = Arc<nalgebra::LU<C, nalgebra::Dyn, nalgebra::Dyn>>;

struct ShiftedLu {
    matrix: DMatrix<C>,
    memo: Mutex<Option<(u128, FactoredLu)>>,
}

impl ShiftedLu {
    fn new(matrix: DMatrix<C>) -> Self {
        Self {
            matrix,
            memo: Mutex::new(None),
        }
    }

    fn key(z: C) -> u128 {
        ((z.re.to_bits() as u128) << 64) | z.im.to_bits() as u128
    }

    fn at(&self, z: C) -> FactoredLu {
        let key = Self::key(z);
        if let Some((k, lu)) = self.memo.lock().unwrap().as_ref() {
            if *k == key {
                return Arc::clone(lu);
            }
        }
        let mut m = self.matrix.clone();
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)] -= z;
        }
        let lu = Arc::new(m.lu());
        *self.memo.lock().unwrap() = Some((key, Arc::clone(&lu)));
        lu
    }
}

/// f(z) = det(A - zI) via LU; f'(z) = -tr(adj(A - zI)) by Jacobi's formula.
pub fn circulant_det() -> DemoProblem {
    let lu = Arc::new(ShiftedLu::new(circulant_matrix().map(|x| C::new(x, 0.0))));
    let lu2 = Arc::clone(&lu);
    let handle = FunctionHandle::with_derivative(
        move |z| lu.at(z).determinant(),
        move |z| {
            let lu = lu2.at(z);
            let det = lu.determinant();
            match lu.try_inverse() {
                Some(inv) => {
                    let trace: C = (0..CIRCULANT_N).map(|i| inv[(i, i)]).sum();
                    -det * trace
                }
                None => C::new(f64::NAN, f64::NAN),
            }
        },
    );
    DemoProblem {
        name: "circulant-det",
        summary: catalog()[4].1,
        rect: circulant_rect(),
        handle,
        mode: DemoMode::FindZeros,
        config: EngineConfig::default(),
    }
}

/// Default manual subdivision depth for the resolvent demo.
pub const CIRCULANT_RESOLVENT_DEPTH: u32 = 6;

/// f(z) = u*(A - zI)^{-1} v with seeded probe vectors; a pole-finding
/// problem, so the demo runs in manual-subdivision mode.
pub fn circulant_resolvent(seed: u64) -> DemoProblem {
    let lu = Arc::new(ShiftedLu::new(circulant_matrix().map(|x| C::new(x, 0.0))));
    // salt keeps the probe-vector stream distinct from the split-offset
    // stream derived from the same run seed
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x7e50_13e9));
    let mut draw = || C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let u = Arc::new(DVector::<C>::from_fn(CIRCULANT_N, |_, _| draw()));
    let v = Arc::new(DVector::<C>::from_fn(CIRCULANT_N, |_, _| draw()));

    let (lu2, u2, v2) = (Arc::clone(&lu), Arc::clone(&u), Arc::clone(&v));
    let handle = FunctionHandle::with_derivative(
        move |z| match lu.at(z).solve(v.as_ref()) {
            Some(x) => u.dotc(&x),
            None => C::new(f64::NAN, f64::NAN),
        },
        move |z| {
            // f'(z) = u*(A - zI)^{-2} v: solve twice with the same factors
            let lu = lu2.at(z);
            match lu.solve(v2.as_ref()).and_then(|x| lu.solve(&x)) {
                Some(y) => u2.dotc(&y),
                None => C::new(f64::NAN, f64::NAN),
            }
        },
    );
    // The resolvent's computed values lose relative accuracy near its own
    // zeros (cancellation in u*x), so the default 1e-13 fit tolerance sits
    // below the data noise and AAA would churn to the degree cap chasing
    // it. 1e-11 converges at modest degree and still places the poles to
    // better than 1e-10.
    let config = EngineConfig {
        aaa: crate::aaa::AAAConfig {
            rel_tol: 1e-11,
            ..Default::default()
        },
        ..EngineConfig::default()
    };
    DemoProblem {
        name: "circulant-resolvent",
        summary: catalog()[5].1,
        rect: circulant_rect(),
        handle,
        mode: DemoMode::ManualPoles {
            depth: CIRCULANT_RESOLVENT_DEPTH,
        },
        config,
    }
}

// ---------------------------------------------------------------------------
// funcchoice

/// f(z) = exp(z) (z - a)^alpha and its derivative.
pub fn func_choice_handle(alpha: u32, a: C) -> FunctionHandle {
    let alpha_i = alpha as i32;
    FunctionHandle::with_derivative(
        move |z| z.exp() * (z - a).powi(alpha_i),
        move |z| z.exp() * (z - a).powi(alpha_i - 1) * (z - a + alpha as f64),
    )
}

pub fn func_choice(alpha: u32, a: C) -> DemoProblem {
    DemoProblem {
        name: "funcchoice",
        summary: catalog()[6].1,
        rect: Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap(),
        handle: func_choice_handle(alpha, a),
        mode: DemoMode::FindZeros,
        config: EngineConfig::default(),
    }
}

// ---------------------------------------------------------------------------
// comparison test function

/// Zeros of the benchmark product: a line of n+1 points across the middle
/// of the unit square, a_j = (0.1 + 0.8 j/n) + 0.5i (a single zero at
/// 0.1 + 0.5i when n = 0).
pub fn compfunc_zeros(n: usize) -> Vec<C> {
    if n == 0 {
        return vec![C::new(0.1, 0.5)];
    }
    (0..=n)
        .map(|j| C::new(0.1 + 0.8 * (j as f64) / (n as f64), 0.5))
        .collect()
}

/// Handle for the benchmark product with n+1 zeros.
pub fn compfunc_handle(n: usize) -> FunctionHandle {
    product_handle(compfunc_zeros(n))
}

// ---------------------------------------------------------------------------
// shared helpers

/// Median of |f| over an n-by-n grid of interior points of the rectangle;
/// used for relative residuals when exact zeros are unknown.
pub fn median_abs_on_grid(f: impl Fn(C) -> C, rect: &Rectangle, n: usize) -> f64 {
    let mut samples = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = rect.re_min + rect.width() * (i as f64 + 0.5) / n as f64;
            let y = rect.im_min + rect.height() * (j as f64 + 0.5) / n as f64;
            let v = f(C::new(x, y)).norm();
            if v.is_finite() {
                samples.push(v);
            }
        }
    }
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}
