//! Crate-wide error type.

/// Errors produced by solvers, payment construction, and numeric routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor argument violates its documented constraint.
    InvalidParameter(String),
    /// A probability argument fell outside `[0, 1]`.
    ProbabilityOutOfRange(f64),
    /// The density vanishes at the given point, so the virtual value is undefined there.
    ZeroDensity(f64),
    /// The distribution's virtual value decreases somewhere; threshold formulas do not apply.
    NotRegular { at: f64 },
    /// A function required to be monotone violates monotonicity on the check grid.
    NotMonotone {
        what: &'static str,
        at: f64,
        violation: f64,
    },
    /// Two quadrature refinements disagree beyond tolerance.
    QuadratureNonConvergence { estimate: f64, disagreement: f64 },
    /// The two revenue accounting routes disagree beyond tolerance.
    RevenueMismatch { direct: f64, virtual_surplus: f64 },
    /// A discrete optimization instance admits no feasible point.
    Infeasible(String),
    /// Reading or writing an output file failed.
    Io(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ProbabilityOutOfRange(q) => {
                write!(f, "probability {q} outside [0, 1]")
            }
            Error::ZeroDensity(v) => {
                write!(f, "density is zero at {v}; virtual value undefined")
            }
            Error::NotRegular { at } => {
                write!(f, "distribution is not regular: virtual value decreases near {at}")
            }
            Error::NotMonotone { what, at, violation } => {
                write!(f, "{what} must be monotone but changes by {violation} near {at}")
            }
            Error::QuadratureNonConvergence { estimate, disagreement } => {
                write!(
                    f,
                    "quadrature did not converge: estimate {estimate}, refinement disagreement {disagreement}"
                )
            }
            Error::RevenueMismatch { direct, virtual_surplus } => {
                write!(
                    f,
                    "revenue accounting mismatch: direct payments give {direct}, virtual surplus gives {virtual_surplus}"
                )
            }
            Error::Infeasible(msg) => write!(f, "infeasible instance: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
