use thiserror::Error;

use crate::lattice::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode count {requested} exceeds the Fock cap of {cap} modes")]
    ModeCap { requested: usize, cap: usize },

    #[error("Fock dimension 2^{modes} exceeds the configured cap {cap}")]
    DimensionCap { modes: usize, cap: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not an isometry: ||W*W - I|| = {residual:e}")]
    NotIsometry { residual: f64 },

    #[error("shift {0} is not in the cone")]
    NotInCone(Point),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("window corners inverted")]
    InvertedWindow,

    #[error("window has {points} points, above the cap of {cap}")]
    WindowCap { points: usize, cap: usize },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("parity undefined: vector is not parity-homogeneous")]
    ParityUndefined,

    #[error("product-system element invalid: {0}")]
    InvalidElement(String),

    #[error("translation {0} is not a symmetry witness on the window")]
    InvalidWitness(Point),

    #[error("support of the single-particle vector escapes the window under the shift")]
    SupportEscapes,

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Resource-cap failures get their own exit code in the CLI.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::ModeCap { .. } | Error::DimensionCap { .. } | Error::WindowCap { .. }
        )
    }
}
