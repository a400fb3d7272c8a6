use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// Input outside the domain of a special function.
    Domain { x: f64 },
    /// The root-finding bracket does not contain a sign change.
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// `C_AI = 0`: the equivalent noise is unbounded.
    DegenerateBudget,
    /// Structurally degenerate input such as an all-zero covariance.
    DegenerateInput(&'static str),
    /// A matrix that must be positive definite is not.
    Singular(&'static str),
    /// A least-squares fit received non-positive data.
    DegenerateFit,
    /// Zero Fisher information.
    Unobservable,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::Domain { x } => write!(f, "argument {x} outside function domain"),
            Error::Bracket { lo, hi, f_lo, f_hi } => write!(
                f,
                "no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})"
            ),
            Error::DegenerateBudget => {
                write!(f, "zero AI capacity budget has unbounded equivalent noise")
            }
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::Singular(what) => write!(f, "matrix not positive definite: {what}"),
            Error::DegenerateFit => write!(f, "fit requires strictly positive gaps"),
            Error::Unobservable => write!(f, "parameter unobservable: zero Fisher information"),
        }
    }
}

impl core::error::Error for Error {}
