use thiserror::Error;

/// Failures reported by the numeric kernels and the formula machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Series argument is outside the region where the series converges usefully.
    #[error("argument outside convergence domain: {0}")]
    ConvergenceDomain(String),

    /// The requested accuracy cannot be reached at the available precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// An intermediate `1 - f^2` in a tangent doubling chain fell below the precision floor.
    #[error("tangent pole proximity at doubling step {step}")]
    PoleProximity { step: u32 },

    /// A floor could not be certified even after precision escalation.
    #[error("floor ambiguous after {attempts} attempts (value within error bound of an integer)")]
    FloorAmbiguity { attempts: u32 },

    /// The second angle degenerates (`1 - Im = 0`), so no finite second constant exists.
    #[error("degenerate angle: the second constant is not finite")]
    DegenerateAngle,

    /// A fixed-point iteration failed to settle within its iteration cap.
    #[error("iteration did not converge within {iterations} iterations")]
    Divergence { iterations: u32 },

    /// The doubling recurrence produced a value violating `2u <= u' <= 2u + 1`.
    #[error("internal consistency check failed at k = {k}")]
    Consistency { k: u32 },

    /// Exact materialisation of the rational second constant was refused.
    #[error("k = {k} exceeds the materialisation cap {cap}; pass the force flag to override")]
    MaterializationCap { k: u32, cap: u32 },

    /// A formula or precision context was malformed.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A formula document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Reading or writing a formula document or sidecar failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
