use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {estimate:e})")]
    NoConvergence { subdivisions: usize, estimate: f64 },

    #[error("root not bracketed on [{lo:e}, {hi:e}]: f(lo)={flo:e}, f(hi)={fhi:e}")]
    NotBracketed { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root finder exceeded {0} iterations")]
    MaxIterations(usize),

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParameter { name: &'static str, msg: String },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("drive not realizable: {0}")]
    Realizability(String),

    #[error("external flux undefined at t={t:e} s: E_J(t)/(2E_J) = {ratio}")]
    FluxDomain { t: f64, ratio: f64 },

    #[error("infeasible selection: {0}")]
    Infeasible(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("dataset parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn param(name: &'static str, msg: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            msg: msg.into(),
        }
    }
}
