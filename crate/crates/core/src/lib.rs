//! Secret-key-rate simulation of continuous-variable measurement-device-independent
//! QKD with Gaussian and non-Gaussian resource states.
//!
//! The protocol modelled here is the extreme asymmetric entanglement-based CV-MDI
//! scheme: Alice and Bob each prepare a two-mode entangled state, send one mode to
//! an untrusted relay over a thermal loss channel (Bob's link is lossless), and the
//! relay performs optimal Gaussian entanglement swapping. Alice's resource may be a
//! plain two-mode squeezed vacuum (TMSV) or one of three heralded non-Gaussian
//! states obtained by passing her travelling mode through a pair of beam splitters
//! with single-photon injection and detection:
//!
//! - 1PAS: one photon added, then one subtracted,
//! - 2PAS: the add-then-subtract sequence applied twice,
//! - 2PR: both stages inject and detect one photon ("photon replacement").
//!
//! All four states are pure and of Schmidt form `Σ cₙ|nn⟩`, which makes both the
//! brute-force Fock-space treatment and the Gaussian covariance pipeline cheap.
//!
//! Module map:
//!
//! - [`fock`]: truncated Fock-space engine; builds TMSV states and applies the
//!   generic two-stage beam-splitter herald. Ground truth for everything else.
//! - [`states`]: closed-form coefficient series and heralding probabilities for
//!   the four state kinds, plus squeezing-unit conversion.
//! - [`gaussian`]: covariance extraction, thermal-loss channel, entanglement swap.
//! - [`security`]: mutual information, symplectic spectra, Holevo bound, secret
//!   key rate, and logarithmic negativity.
//! - [`experiments`]: parameter sweeps, transmissivity optimization, and the
//!   maximum-distance / maximum-noise frontier finders.
//! - [`oracle`]: independent dense reference implementations (beam-splitter matrix
//!   exponentials, quadrature-operator moments, partial-transpose trace norms)
//!   used only for validation.
//! - [`audit`]: the validation battery comparing fast paths against the oracles
//!   and the reference closed forms.
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm` feature
//! when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod audit;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
mod math;
pub mod oracle;
pub mod security;
pub mod states;

pub use error::{Error, Result};
pub use fock::{apply_herald, bs_kraus, tmsv_state, Cutoff, FockMatrix, HeraldSpec, SchmidtState};
pub use gaussian::{
    apply_channel, covariance_from_state, swap, ChannelParams, LossyCov, PreparedCov, SwappedCov,
};
pub use security::{
    holevo_bound, holevo_g, log_negativity, mutual_information, secret_key_rate, security_report,
    SecurityReport,
};
pub use states::{coeffs, from_db, SqueezeParam, StateKind};
