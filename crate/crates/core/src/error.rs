use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: degree {n} is out of range ({requirement})")]
    InvalidDegree {
        what: &'static str,
        n: usize,
        requirement: &'static str,
    },

    #[error("n = {0} is even; the two-nodal-domain results only cover odd n")]
    EvenDegree(usize),

    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} did not converge (n = {n}, index = {index})")]
    NoConvergence {
        what: &'static str,
        n: usize,
        index: usize,
    },

    #[error("grid spacing {spacing:.3e} too coarse; need at most {required:.3e} (resolution >= {min_resolution})")]
    ResolutionTooCoarse {
        spacing: f64,
        required: f64,
        min_resolution: usize,
    },

    #[error("topology error: {0}")]
    Topology(String),
}
