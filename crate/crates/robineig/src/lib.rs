//! Weighted Robin eigenvalues on balls with singular radial weights, and the
//! associated nonlinear Robin boundary-value problem with quadratic gradient
//! growth.
//!
//! The central object is the first eigenvalue of the quotient
//!
//! ```text
//!             k[u] + gamma * b[u]      k[u]  = ∫ u'(r)^2 r^{N-1} dr
//! lambda  =  --------------------,     m_f[u] = ∫ f(r) u(r)^2 r^{N-1} dr
//!                  m_f[u]              b[u]  = R^{N-1} u(R)^2
//! ```
//!
//! minimized over radial H^1 functions on the ball of radius `R` in `R^N`
//! (all forms per unit solid angle). The weight `f` is a finite sum of
//! monomials `c r^p` with `p >= -2`; the borderline `p = -2` is the Hardy
//! weight, for which the eigenvalue curve and its plateau are known in
//! closed form and used as oracles throughout the test suites.
//!
//! The companion solver handles
//!
//! ```text
//! Δu + sigma0 |∇u|^2 + lambda f = 0   in B_R,
//! ∂u/∂ν + beta u = 0                  on ∂B_R,
//! ```
//!
//! through the exponential substitution `v = e^{sigma0 u}`, which reduces the
//! PDE to a linear radial ODE plus a closed-form amplitude equation.
//!
//! Crate layout:
//!
//! - [`domain`] — admissible weights, dimensions, problem parameters, and the
//!   weight mini-language used by the CLI.
//! - [`mesh`] — graded radial meshes and exact assembly of the stiffness,
//!   weighted-mass, plain-mass, and boundary forms over P1 elements.
//! - [`eig`] — extremal eigenpairs of symmetric tridiagonal pencils via
//!   inertia-count bisection and inverse iteration.
//! - [`spectral`] — the user-facing eigenvalue API: Robin/Dirichlet solves,
//!   gamma sweeps, plateau detection, trace and norm-equivalence constants,
//!   local thresholds.
//! - [`bvp`] — the nonlinear boundary-value solver (indicial analysis,
//!   adaptive integration from the singular point, amplitude, residuals).
//! - [`specfun`] — independent closed-form oracles: Bessel J, its first zero,
//!   the Gamma function, the Hardy eigenvalue curve, two explicit solutions.
//! - [`validation`] — the deterministic check suite run by `robineig validate`
//!   and by the acceptance tests.
//!
//! All types are immutable after construction and all operations are pure,
//! so values may be shared freely across threads.

pub mod bvp;
pub mod domain;
pub mod eig;
pub mod mesh;
pub mod specfun;
pub mod spectral;
pub mod validation;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
