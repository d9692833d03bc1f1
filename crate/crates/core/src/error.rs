use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {re}{im:+}i lies on a pole of the gamma function")]
    Pole { re: f64, im: f64 },
    #[error("result overflows the representable range")]
    Overflow,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    Convergence { tol: f64, estimate: f64 },
    #[error(
        "characteristic function has not decayed at the grid edge: |t^(m-1) phi(t)| = {tail:e}"
    )]
    Truncation { tail: f64 },
    #[error("no closed-form order-statistic characteristic function for parent {0}")]
    UnsupportedParent(String),
    #[error("need at least {required} observations, got {got}")]
    InsufficientData { required: usize, got: usize },
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
