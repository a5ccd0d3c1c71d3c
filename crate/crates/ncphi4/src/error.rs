use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A model parameter violates its validity range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The root discriminant `theta^4 m^4 - 4 theta^2 a` is negative, so the
    /// denominator roots are complex and the real decomposition does not
    /// exist.
    #[error("complex roots: a = {a} exceeds theta^2 m^4 / 4 = {bound}")]
    ComplexRoots { a: f64, bound: f64 },

    /// The two roots coincide (`a = theta^2 m^4 / 4`), so the partial-fraction
    /// form divides by `m2^2 - m1^2 = 0`.
    #[error("degenerate roots: m1^2 = m2^2 = {value}, partial fractions unavailable")]
    DegenerateRoots { value: f64 },

    /// A ribbon graph violates a structural invariant.
    #[error("malformed graph: {0}")]
    Graph(String),

    /// A graph file could not be parsed.
    #[error("graph parse error at line {line}: {message}")]
    GraphParse { line: usize, message: String },

    /// Adaptive quadrature failed to reach the requested tolerance. The
    /// partial estimate and its error bound are carried along.
    #[error("quadrature did not converge: partial value {partial}, error estimate {estimate}")]
    QuadratureNoConverge { partial: f64, estimate: f64 },

    /// The least-squares design matrix is singular.
    #[error("degenerate design matrix in divergence fit")]
    SingularFit,

    /// A divergence fit exceeded the residual acceptance threshold.
    #[error(
        "fit rejected for {quantity}: residual rms {residual:e} exceeds \
         {threshold:e} of dominant term {dominant:e}"
    )]
    FitRejected {
        quantity: String,
        residual: f64,
        dominant: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
