//! holozero finds all zeros of a holomorphic function (with their
//! multiplicities) inside a rectangular region of the complex plane.
//!
//! The method has two stages. First the search region is subdivided by
//! Cauchy's argument principle until no piece holds more than a configurable
//! number of zeros, with adaptive Gauss-Kronrod quadrature supplying the
//! counts and a seeded perturbation scheme relocating any split edge that
//! lands on a zero. Then the logarithmic derivative f'/f is approximated on
//! each accepted piece by a continuum AAA rational fit of its boundary
//! samples; the poles of that fit inside the piece are the zeros of f, their
//! residues the multiplicities, and the argument-principle count verifies
//! that none were missed. Zeros of multiplicity alpha appear as simple poles
//! of f'/f with residue alpha, so high-order zeros cost no accuracy.
//!
//! The derivative may be supplied exactly or approximated from values of f
//! alone (a trapezium-rule discretization of Cauchy's integral formula, see
//! [`numderiv`]). A classical moment-based baseline ([`baseline`]) and an
//! evaluation-count benchmark ([`benchmark`]) are included, along with a set
//! of reproducible demo problems ([`demos`]) and a small expression parser
//! ([`exprparse`]) used by the command-line frontend.
//!
//! ```
//! use holozero::{find_zeros, EngineConfig, FunctionHandle, Rectangle};
//! use num_complex::Complex64;
//!
//! let f = FunctionHandle::with_derivative(
//!     |z| z * z + 1.0,
//!     |z| 2.0 * z,
//! );
//! let omega = Rectangle::new(-2.0, 2.0, -2.0, 2.0).unwrap();
//! let (zeros, report) = find_zeros(&f, omega, &EngineConfig::default()).unwrap();
//! assert_eq!(zeros.len(), 2);
//! assert_eq!(report.total_multiplicity, 2);
//! assert!((zeros[0].location - Complex64::new(0.0, -1.0)).norm() < 1e-12);
//! assert!((zeros[1].location - Complex64::new(0.0, 1.0)).norm() < 1e-12);
//! ```

pub mod aaa;
pub mod baseline;
pub mod benchmark;
pub mod demos;
pub mod engine;
pub mod exprparse;
pub mod function;
pub mod geometry;
mod linalg;
pub mod numderiv;
pub mod quadrature;
pub mod rational;

pub use aaa::{aaa_continuum, aaa_discrete, AAAConfig, AAAError, AAAResult};
pub use engine::{
    find_poles_manual, find_zeros, subdivide, EngineConfig, EngineError, RecordKind, RegionNode,
    RegionReport, RegionTree, RunReport, ZeroRecord,
};
pub use function::{wrap_derivative_free, EvalCounts, FunctionHandle};
pub use geometry::{BoundaryParam, Edge, GeometryError, Rectangle};
pub use numderiv::{cauchy_derivative, DerivConfig, DerivEstimate, NumDerivError};
pub use quadrature::{
    count_zeros, gk_integrate_edge, ArgPrincipleOutcome, EdgeCache, QuadConfig, QuadResult,
};
pub use rational::{BarycentricRational, PoleInfo, RationalError};
