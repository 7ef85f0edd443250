//! Small dense eigenvalue helpers shared by the rational and baseline
//! modules. Everything works on complex matrices via nalgebra's Schur
//! decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

const SCHUR_MAX_ITER: usize = 200_000;

/// Eigenvalues of a dense complex matrix. `None` if the QR iteration fails
/// to converge.
pub(crate) fn eigenvalues(m: DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)?;
    let eig = schur.eigenvalues()?;
    Some(eig.iter().copied().collect())
}

/// Shift candidates for the shift-and-invert reduction, chosen outside the
/// unit disk that the caller scales its data into. Several are tried in case
/// one happens to land on (or extremely near) an eigenvalue.
const SHIFTS: [Complex64; 5] = [
    Complex64::new(1.305_7, 2.037_1),
    Complex64::new(-1.711_3, 2.294_9),
    Complex64::new(2.902_1, -1.113_7),
    Complex64::new(-2.317_9, -2.104_3),
    Complex64::new(3.055_3, 0.128_9),
];

/// Finite eigenvalues of the arrowhead pencil
///
/// ```text
///   ( 0    t_1 ... t_m )        ( 0        )
///   ( 1    z_1         )  v  =  (   1      )  lambda v
///   ( ...       ...    )        (     ...  )
///   ( 1            z_m )        (        1 )
/// ```
///
/// computed by shift-and-invert: the standard eigenvalues `mu` of
/// `(E - s B)^{-1} B` satisfy `lambda = s + 1/mu`, and the pencil's two (or
/// more) infinite eigenvalues map to `mu = 0` where they are filtered out
/// without any assumption on `sum(t)`. Callers are expected to scale `z`
/// into the unit disk so the fixed shifts sit away from the data.
pub(crate) fn arrowhead_pencil_finite_eigs(
    top: &[Complex64],
    diag: &[Complex64],
) -> Option<Vec<Complex64>> {
    assert_eq!(top.len(), diag.len());
    let m = diag.len();
    let n = m + 1;
    // |mu| below this is treated as an infinite pencil eigenvalue; the
    // corresponding |lambda| bound matches the 1e13 spurious filter used by
    // callers.
    const MU_CUTOFF: f64 = 1e-13;

    for &shift in &SHIFTS {
        let mut shifted = DMatrix::<Complex64>::zeros(n, n);
        let mut b = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..m {
            shifted[(0, j + 1)] = top[j];
            shifted[(j + 1, 0)] = Complex64::new(1.0, 0.0);
            shifted[(j + 1, j + 1)] = diag[j] - shift;
            b[(j + 1, j + 1)] = Complex64::new(1.0, 0.0);
        }
        let lu = shifted.lu();
        let Some(x) = lu.solve(&b) else {
            continue;
        };
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let Some(mu) = eigenvalues(x) else {
            continue;
        };
        let finite: Vec<Complex64> = mu
            .into_iter()
            .filter(|mu| mu.norm() > MU_CUTOFF)
            .map(|mu| shift + 1.0 / mu)
            .collect();
        if finite.iter().all(|l| l.is_finite()) {
            return Some(finite);
        }
    }
    None
}
