//! Closed-form coefficient series for the four resource states.
//!
//! With `λ = tanh r` and amplitude transmissivity `T` of the heralding beam
//! splitters, the unnormalized Schmidt coefficients are
//!
//! ```text
//! TMSV:  √(1−λ²) λⁿ
//! 1PAS:  √(1−λ²) λⁿ T²ⁿ   (1−T²)  (n+1)
//! 2PAS:  √(1−λ²) λⁿ T⁴ⁿ   (1−T²)² (n+1)²
//! 2PR:   √(1−λ²) λⁿ T²ⁿ⁻² [T² − n(1−T²)]²
//! ```
//!
//! Heralding success probabilities are always computed as the converged sum of
//! squared unnormalized coefficients (joint probability of the whole chain for
//! 2PAS), never from the reference closed forms: the closed form for the 2PR
//! probability is known to be inconsistent (its zero-squeezing limit is `2T⁴`
//! where the series forces `T⁴`), and the one for the 2PAS probability matches
//! the series only at `λ = 0`. The reference expressions are kept verbatim in
//! [`closed_form_p1`], [`closed_form_p2`] and [`closed_form_p2pr`] so the
//! validation battery can document the discrepancies.

use crate::error::{Error, Result};
use crate::fock::{converged_series, Cutoff, SchmidtState};
use crate::math;

/// The four resource states of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Two-mode squeezed vacuum (the Gaussian baseline).
    Tmsv,
    /// One photon added then subtracted.
    Pas1,
    /// The add-then-subtract sequence applied twice.
    Pas2,
    /// Two-photon replacement (inject and detect at both stages).
    Pr2,
}

impl StateKind {
    pub const ALL: [StateKind; 4] = [StateKind::Tmsv, StateKind::Pas1, StateKind::Pas2, StateKind::Pr2];

    /// Heralded kinds carry a beam-splitter transmissivity knob; the TMSV does not.
    pub fn is_heralded(self) -> bool {
        !matches!(self, StateKind::Tmsv)
    }

    pub fn name(self) -> &'static str {
        match self {
            StateKind::Tmsv => "TMSV",
            StateKind::Pas1 => "1PAS",
            StateKind::Pas2 => "2PAS",
            StateKind::Pr2 => "2PR",
        }
    }
}

impl core::fmt::Display for StateKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "TMSV" | "tmsv" => Ok(StateKind::Tmsv),
            "1PAS" | "1pas" | "pas1" => Ok(StateKind::Pas1),
            "2PAS" | "2pas" | "pas2" => Ok(StateKind::Pas2),
            "2PR" | "2pr" | "pr2" => Ok(StateKind::Pr2),
            _ => Err(Error::Domain {
                name: "state kind",
                value: f64::NAN,
                domain: "TMSV | 1PAS | 2PAS | 2PR",
            }),
        }
    }
}

/// Squeezing strength in its three equivalent parameterizations.
///
/// `db = 10·log₁₀(e²ʳ)` and `lambda = tanh r`; the three fields are kept
/// mutually consistent by the constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    pub r: f64,
    pub db: f64,
    pub lambda: f64,
}

/// Convert a squeezing value in decibel to the natural parameterizations.
pub fn from_db(r_db: f64) -> Result<SqueezeParam> {
    if !(r_db >= 0.0) {
        return Err(Error::Domain {
            name: "r_db",
            value: r_db,
            domain: "[0, inf)",
        });
    }
    let r = r_db * core::f64::consts::LN_10 / 20.0;
    Ok(SqueezeParam {
        r,
        db: r_db,
        lambda: math::tanh(r),
    })
}

impl SqueezeParam {
    /// Build from `λ = tanh r` directly.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::Domain {
                name: "lambda",
                value: lambda,
                domain: "[0, 1)",
            });
        }
        // r = atanh(lambda)
        let r = 0.5 * math::ln((1.0 + lambda) / (1.0 - lambda));
        Ok(SqueezeParam {
            r,
            db: 20.0 * r / core::f64::consts::LN_10,
            lambda,
        })
    }
}

fn check_t(kind: StateKind, t: f64) -> Result<()> {
    if kind.is_heralded() && !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain {
            name: "transmissivity",
            value: t,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

/// Closed-form state constructor.
///
/// Returns the normalized state with `success_prob` equal to the converged sum
/// of squared unnormalized coefficients (1 for the TMSV). `t` is ignored for
/// the TMSV kind.
pub fn coeffs(kind: StateKind, sq: &SqueezeParam, t: f64, cutoff: Cutoff) -> Result<SchmidtState> {
    check_t(kind, t)?;
    let l = sq.lambda;
    let amp = math::sqrt(1.0 - l * l);
    let term = |n: usize| -> f64 {
        let ni = n as i32;
        let base = amp * math::powi(l, ni);
        match kind {
            StateKind::Tmsv => base,
            StateKind::Pas1 => base * math::powi(t, 2 * ni) * (1.0 - t * t) * (n as f64 + 1.0),
            StateKind::Pas2 => {
                let f = (1.0 - t * t) * (n as f64 + 1.0);
                base * math::powi(t, 4 * ni) * f * f
            }
            StateKind::Pr2 => {
                let f = t * t - n as f64 * (1.0 - t * t);
                base * math::powi(t, 2 * ni - 2) * f * f
            }
        }
    };
    let raw = converged_series(term, cutoff)?;
    let success = if kind.is_heralded() {
        raw.iter().map(|c| c * c).sum()
    } else {
        1.0
    };
    SchmidtState::from_unnormalized(raw, success)
}

/// Reference closed form for the 1PAS heralding probability,
/// `(1−λ²)(1−T²)²(ζ+1)/(1−ζ)³` with `ζ = λ²T⁴`.
///
/// Agrees with the coefficient-series norm to rounding; kept only for
/// cross-validation.
pub fn closed_form_p1(sq: &SqueezeParam, t: f64) -> f64 {
    let l2 = sq.lambda * sq.lambda;
    let z = l2 * math::powi(t, 4);
    let omt2 = 1.0 - t * t;
    (1.0 - l2) * omt2 * omt2 * (z + 1.0) / math::powi(1.0 - z, 3)
}

/// Reference closed form for the 2PAS heralding probability, transcribed
/// verbatim with `ζ = λ²T⁸`.
///
/// Its bracket evaluates to 1 at `ζ = 0` (so the `λ → 0` limit `(1−T²)⁴`
/// agrees with the series), but for `λ > 0` it matches neither the joint
/// two-stage probability nor the second-stage-only convention; the validation
/// battery records the discrepancy.
pub fn closed_form_p2(sq: &SqueezeParam, t: f64) -> f64 {
    let l2 = sq.lambda * sq.lambda;
    let z = l2 * math::powi(t, 8);
    let omt2 = 1.0 - t * t;
    let num = -16.0 * math::powi(z, 4) - math::powi(z, 3) - 11.0 * z * z + 5.0 * z - 1.0;
    let den = math::powi(z, 5) - 5.0 * math::powi(z, 4) + 10.0 * math::powi(z, 3)
        - 10.0 * z * z
        + 5.0 * z
        - 1.0;
    (1.0 - l2) * math::powi(omt2, 4) * (num / den)
}

/// Reference closed form for the 2PR heralding probability, transcribed
/// verbatim including its internal inconsistencies (a duplicated `+T⁴` term,
/// an eighth power on a polynomial bracket, and a term odd in `λ`). Its
/// `λ = 0` limit is `2T⁴` whereas the coefficient series forces `T⁴`. Kept
/// only so the validation battery can document the mismatch.
pub fn closed_form_p2pr(sq: &SqueezeParam, t: f64) -> f64 {
    let l = sq.lambda;
    let l2 = l * l;
    let t2 = t * t;
    let t4 = math::powi(t, 4);
    let t6 = math::powi(t, 6);
    let t8 = math::powi(t, 8);
    let bracket = math::powi(l, 6) * t8 * (t8 - 8.0 * t6 + 24.0 * t4 - 32.0 * t2 + 11.0)
        + t4 * math::powi(l, 4) * (11.0 * t8 - 56.0 * t6 + 96.0 * t4 - 56.0 * t2 + 11.0)
        + t4
        + l2 * math::powi(11.0 * t8 - 32.0 * t6 + 24.0 * t4 - 8.0 * t2 + 1.0, 8)
        + t4
        + l * math::powi(t, 12);
    (1.0 - l2) / math::powi(1.0 - l2 * t4, 5) * bracket
}
