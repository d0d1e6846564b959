//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid polygon input (self-intersection, repeated vertices, too few vertices).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A disk cover satisfying the corner-exclusivity rules cannot be built.
    #[error("cover error: {0}")]
    Cover(String),

    /// Scalar argument outside the domain of a kernel or special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mellin line lies outside the integrability strip declared for the input.
    #[error("strip error: {0}")]
    Strip(String),

    /// Requested evaluation points cannot be resolved by the sampled transform.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Input function violates a support precondition.
    #[error("support error: {0}")]
    Support(String),

    /// Evaluation point too close to a pole of the continued symbol.
    #[error("pole proximity: nearest pole at {pole}, distance {distance:.3e}")]
    PoleProximity { pole: f64, distance: f64 },

    /// Contour for residue extraction would cross another pole.
    #[error("contour error: {0}")]
    Contour(String),

    /// Continuation window |Re λ| < Q + 1/4 too small for the requested point.
    #[error("window error: {0}")]
    Window(String),

    /// Hardy-weight integral ∫|v|² dx/x diverges for the given input.
    #[error("hardy weight error: {0}")]
    HardyWeight(String),

    /// Dense linear algebra failure (non-SPD Gram, singular factorization).
    #[error("linear algebra error: {0}")]
    LinAlg(String),

    /// Mismatched grids between operands.
    #[error("grid error: {0}")]
    Grid(String),

    /// Galerkin assembly failure on a degenerate element.
    #[error("assembly error: {0}")]
    Assembly(String),

    /// Invalid experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A refinement ladder aborted mid-sweep; completed levels were persisted.
    #[error("ladder error: {0}")]
    Ladder(String),

    /// File I/O wrapper for import/export helpers.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
