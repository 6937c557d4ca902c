use core::fmt;

/// Errors shared by every layer of the toolkit.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// `eps` sits within `BOUNDARY_DELTA` of a regime boundary (`eps = nuq`
    /// or `eps = 1`), where a mode exponent degenerates and delay formulas
    /// diverge.
    BoundaryEnergy { eps: f64, nuq: f64 },
    /// An input lies outside an operation's domain.
    Domain { what: &'static str, value: f64 },
    /// The 4x4 matching system is numerically singular (condition estimate
    /// above the configured limit).
    SingularSystem { cond: f64 },
    /// The bracketing scan found no interior minimum on the curve.
    NoInteriorMinimum,
    /// No complex step height reproduces the requested delay within the
    /// scanned range.
    NoMimic { e0_kev: f64, target: f64 },
    /// The spatial grid captured too little of the reflected packet.
    Leakage { tau: f64, captured: f64 },
    /// The centroid trajectory is not linear enough for a delay fit.
    Fit { rms: f64, limit: f64 },
    /// Invalid packet or sweep configuration.
    Config { what: &'static str },
    /// The two finite-difference half-steps disagree beyond tolerance.
    FiniteDifference { spread: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BoundaryEnergy { eps, nuq } => write!(
                f,
                "boundary energy: eps = {eps} is too close to a regime boundary (nuq = {nuq} or 1)"
            ),
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::SingularSystem { cond } => {
                write!(
                    f,
                    "matching system numerically singular (cond ~ {cond:.3e})"
                )
            }
            Error::NoInteriorMinimum => write!(f, "no interior minimum found by bracketing scan"),
            Error::NoMimic { e0_kev, target } => write!(
                f,
                "no complex height mimics delay {target} at E0 = {e0_kev} KeV in the scanned range"
            ),
            Error::Leakage { tau, captured } => write!(
                f,
                "packet norm leaked off the grid at tau = {tau} (captured {captured:.4})"
            ),
            Error::Fit { rms, limit } => write!(
                f,
                "centroid trajectory not linear: residual rms {rms:.3e} exceeds {limit:.3e}"
            ),
            Error::Config { what } => write!(f, "invalid configuration: {what}"),
            Error::FiniteDifference { spread } => {
                write!(f, "finite-difference half-steps disagree by {spread:.3e}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
