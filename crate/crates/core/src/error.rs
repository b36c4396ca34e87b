use thiserror::Error;

/// Errors raised by the numerical and physical operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NonHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("{name} = {value} is outside {range}")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("function returned a non-finite value at x = {at}")]
    NonFinite { at: f64 },

    #[error("initial state must be |0> = (1, 0) in the working basis; rotate the basis first")]
    NotReferenceState,

    #[error("initial and target states coincide up to a global phase")]
    DegenerateEndpoints,

    #[error("endpoints are orthogonal; the overlap form is singular there")]
    OrthogonalEndpoints,

    #[error("evolution reached the target with fidelity {fidelity}, below 1 - {tolerance:e}")]
    EndpointMismatch { fidelity: f64, tolerance: f64 },

    #[error("time {t} outside [0, {t_min}]")]
    TimeOutOfRange { t: f64, t_min: f64 },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },

    #[error("consecutive samples {index} and {next} coincide up to phase", next = index + 1)]
    RepeatedSample { index: usize },

    #[error("invalid Stokes vector: {0}")]
    InvalidStokes(String),

    #[error("invalid coherency matrix: {0}")]
    InvalidCoherency(String),

    #[error("total intensity is zero")]
    ZeroIntensity,

    #[error("no polarized part: the wave is unpolarized")]
    Unpolarized,

    #[error("principal axes undefined: the polarized part is circular")]
    CircularPolarization,

    #[error("A(J (x) J*)A^-1 has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("Mueller matrix is non-physical: {0}")]
    NonPhysicalMueller(String),

    #[error("mismatched scenario pairing: {0}")]
    PairingMismatch(String),

    #[error("invariant violated: {what} (residual {residual:e})")]
    InvariantViolation { what: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
