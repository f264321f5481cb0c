//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building states or evaluating the
/// security pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain.
    #[error("parameter `{name}` = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The requested Fock cutoff is too small for converged moments.
    #[error("cutoff {cutoff} too small for converged coefficients (need >= {required})")]
    Truncation { cutoff: usize, required: usize },

    /// The adaptive cutoff hit its hard cap without converging.
    #[error("coefficient series not converged at maximum cutoff {max}")]
    CutoffExhausted { max: usize },

    /// A heralding sequence annihilated the state.
    #[error("heralding probability underflow (norm^2 = {norm_sq:.3e})")]
    ZeroProbability { norm_sq: f64 },

    /// A herald produced a state that is not of Schmidt form.
    #[error("herald output not Schmidt-diagonal (off-diagonal weight {residual:.3e} > {tol:.0e})")]
    NotSchmidt { residual: f64, tol: f64 },

    /// A covariance matrix violated a physicality bound beyond tolerance.
    #[error("unphysical covariance: {what} = {value}")]
    Unphysical { what: &'static str, value: f64 },

    /// Transmissivity optimization was requested for an un-heralded state.
    #[error("state kind {kind} has no beam-splitter transmissivity to optimize")]
    NothingToOptimize { kind: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;
