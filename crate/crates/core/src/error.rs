use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported Bessel order {0} (only 0 and 1 are implemented)")]
    UnsupportedOrder(i32),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("grid too small: need at least {needed} points, got {got}")]
    GridTooSmall { needed: usize, got: usize },

    #[error("state is not in the operator domain (relative constraint defect {defect:.3e})")]
    NotInDomain { defect: f64 },

    #[error("resolvent is singular at shift {0} (eigenvalue of the point interaction)")]
    SingularResolvent(Complex64),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("shift {shift} does not exceed |e_alpha| = {bound}; the quadratic form is not coercive")]
    ShiftTooSmall { shift: f64, bound: f64 },

    #[error("Nehari rescale undefined: F + omega*M = {0} is not positive")]
    RescaleUndefined(f64),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("numerical overflow: non-finite field values")]
    NumericalOverflow,

    #[error("no scale c in (1, {c_max}] satisfies the blow-up certificate (margins at c_max: action {action_margin:.3e}, energy {energy_margin:.3e}, pohozaev {pohozaev_margin:.3e})")]
    CertificateUnsatisfiable {
        c_max: f64,
        action_margin: f64,
        energy_margin: f64,
        pohozaev_margin: f64,
    },

    #[error("reference ground state did not converge")]
    UnusableReference,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("virial breakdown is only defined for the focusing sign")]
    InapplicableSign,

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("snapshot error: {0}")]
    Snapshot(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
