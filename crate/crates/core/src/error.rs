use num_complex::Complex64;
use std::fmt;

/// Errors raised by the counting pipeline.
///
/// `StructuralViolation` is deliberately loud: it means a certified bracket or
/// sign assumption failed, i.e. either a genuine counterexample to the count
/// structure or a numerical breakdown. It is never silently corrected.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on user input was violated (bad n, k, angle, ...).
    InvalidArgument(String),
    /// A certified sign/bracket assumption failed on ray k of the order-n family.
    StructuralViolation {
        n: u32,
        k: u32,
        segment: String,
        detail: String,
    },
    /// The winding contour passed too close to a zero of the map.
    BoundaryZero { location: Complex64, magnitude: f64 },
    /// The winding number on the search region does not match the analytic degree.
    WindingMismatch { expected: i64, got: i64 },
    /// The signed index sum over all found zeros misses the analytic degree.
    CompletenessFailure {
        expected: i64,
        got: i64,
        detail: String,
    },
    /// A zero with vanishing Jacobian determinant had no analytic annotation.
    DegenerateUnexplained { location: Complex64, det_ratio: f64 },
    /// Two independent counting routes disagree.
    Mismatch { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::StructuralViolation {
                n,
                k,
                segment,
                detail,
            } => write!(
                f,
                "structural violation on ray k={k} (n={n}), segment {segment}: {detail}"
            ),
            Error::BoundaryZero {
                location,
                magnitude,
            } => write!(
                f,
                "contour point {location} is too close to a zero (|f| = {magnitude:.3e})"
            ),
            Error::WindingMismatch { expected, got } => write!(
                f,
                "winding number {got} on the search region does not equal the analytic degree {expected}"
            ),
            Error::CompletenessFailure {
                expected,
                got,
                detail,
            } => write!(
                f,
                "signed index sum {got} does not reach the analytic degree {expected}: {detail}"
            ),
            Error::DegenerateUnexplained {
                location,
                det_ratio,
            } => write!(
                f,
                "degenerate zero near {location} (|det|/|p'|^2 = {det_ratio:.3e}) has no analytic annotation"
            ),
            Error::Mismatch { detail } => write!(f, "count mismatch: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
