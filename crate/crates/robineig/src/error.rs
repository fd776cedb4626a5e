use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Weight term list violates admissibility (negative coefficient,
    /// exponent below -2, or all coefficients zero).
    #[error("inadmissible weight: {0}")]
    InvalidWeight(String),

    /// Weight mini-language string could not be parsed.
    #[error("cannot parse weight spec `{0}`: {1}")]
    WeightParse(String, String),

    /// Mesh construction parameters out of range.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// Scalar parameter out of its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A pivot of the shifted factorization is exactly zero; the caller
    /// perturbs the shift by an ulp-scale step and retries.
    #[error("zero pivot in tridiagonal factorization at shift {shift}")]
    PivotBreakdown { shift: f64 },

    /// Eigenvalue bisection or inverse iteration did not reach the requested
    /// tolerance; the last bracket is reported.
    #[error("eigensolver did not converge: bracket [{lo}, {hi}], residual {residual}")]
    EigenNonConvergence { lo: f64, hi: f64, residual: f64 },

    /// Eigenvalue index out of range for the pencil size.
    #[error("eigenvalue index {k} out of range for pencil of size {size}")]
    IndexOutOfRange { k: usize, size: usize },

    /// The indicial equation has no real root: the singular-term strength
    /// exceeds the critical threshold (N-2)^2/4.
    #[error(
        "indicial discriminant negative: lambda_tilde * c2 = {product} exceeds (N-2)^2/4 = {limit}"
    )]
    DiscriminantNegative { product: f64, limit: f64 },

    /// The linear mode crossed zero before the boundary: no positive solution
    /// exists for this datum.
    #[error("no positive solution: Phi(R) = {phi_at_r} <= 0")]
    NoPositiveSolution { phi_at_r: f64 },

    /// Existence gate: solvability requires sigma0 * lambda strictly below
    /// the first weighted Dirichlet eigenvalue.
    #[error(
        "existence gate failed: lambda_tilde = {lambda_tilde} >= first weighted Dirichlet \
         eigenvalue {dirichlet} (necessity: lambda <= lambda_1f, threshold independent of beta)"
    )]
    ExistenceGateFailed { lambda_tilde: f64, dirichlet: f64 },

    /// Adaptive integrator step size underflowed.
    #[error("step size underflow at r = {r} (step {step})")]
    StepSizeUnderflow { r: f64, step: f64 },

    /// Argument outside the validated range of a special function.
    #[error("special function argument out of range: {0}")]
    SpecFunDomain(String),
}
