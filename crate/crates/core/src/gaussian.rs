//! Covariance pipeline: state moments, thermal-loss channel, entanglement swap.
//!
//! Covariances are expressed in shot-noise units (vacuum quadrature variance
//! 1). Every two-mode state here has a standard-form covariance matrix
//! `[[a·I, c·Z], [c·Z, b·I]]`, so three numbers per stage suffice. For a
//! Schmidt-form state `Σ cₙ|nn⟩` the moments are
//!
//! ```text
//! a = Σ (2n+1) cₙ²          (both marginals are equal)
//! c = 2 Σ (n+1) cₙ cₙ₊₁
//! ```
//!
//! which for the TMSV gives `a = (1+λ²)/(1−λ²) = cosh 2r` and
//! `c = 2λ/(1−λ²) = sinh 2r`, hence the Gaussian purity identity `a² − c² = 1`.
//! Heralded non-Gaussian states stay pure but their covariance alone does not
//! satisfy that identity (`a² − c² ≥ 1` with a small excess); only the
//! inequality is enforced here.

use crate::error::{Error, Result};
use crate::fock::SchmidtState;
use crate::math;

const PHYS_TOL: f64 = 1e-10;

/// Second moments of the two resource states before the channel.
///
/// `var_a`/`corr_a` describe Alice's (possibly heralded) state, `var_b`/`corr_b`
/// Bob's TMSV. All in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedCov {
    pub var_a: f64,
    pub corr_a: f64,
    pub var_b: f64,
    pub corr_b: f64,
}

impl PreparedCov {
    pub fn new(var_a: f64, corr_a: f64, var_b: f64, corr_b: f64) -> Result<Self> {
        for (what, v) in [("Alice variance", var_a), ("Bob variance", var_b)] {
            if !(v >= 1.0 - PHYS_TOL) {
                return Err(Error::Unphysical { what, value: v });
            }
        }
        for (what, v, c) in [
            ("Alice a^2 - c^2", var_a, corr_a),
            ("Bob a^2 - c^2", var_b, corr_b),
        ] {
            if v * v - c * c < 1.0 - PHYS_TOL {
                return Err(Error::Unphysical {
                    what,
                    value: v * v - c * c,
                });
            }
        }
        Ok(PreparedCov {
            var_a,
            corr_a,
            var_b,
            corr_b,
        })
    }

    /// Moments of Alice's state paired with a TMSV of variance `var_b` for Bob.
    pub fn from_alice_state(alice: &SchmidtState, var_b: f64) -> Result<Self> {
        let (var_a, corr_a) = covariance_from_state(alice)?;
        let corr_b = math::sqrt((var_b * var_b - 1.0).max(0.0));
        PreparedCov::new(var_a, corr_a, var_b, corr_b)
    }
}

/// Standard-form covariance moments of a Schmidt-form state.
pub fn covariance_from_state(state: &SchmidtState) -> Result<(f64, f64)> {
    let c = state.coeffs();
    let var: f64 = c
        .iter()
        .enumerate()
        .map(|(n, cn)| (2 * n + 1) as f64 * cn * cn)
        .sum();
    let corr: f64 = c
        .windows(2)
        .enumerate()
        .map(|(n, w)| 2.0 * (n as f64 + 1.0) * w[0] * w[1])
        .sum();
    Ok((var, corr))
}

/// TMSV covariance moments `(cosh 2r, sinh 2r)` from `λ = tanh r`.
pub fn tmsv_cov(lambda: f64) -> (f64, f64) {
    let d = 1.0 - lambda * lambda;
    ((1.0 + lambda * lambda) / d, 2.0 * lambda / d)
}

/// Thermal-loss channel description for the two links to the relay.
///
/// Alice's link has transmissivity `τ = 10^(−αL/10)`; Bob sits next to the
/// relay, so his link is lossless (`tau_b = 1` always) and only picks up his
/// half of the excess noise. The total excess noise `ξ` is split equally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub length_km: f64,
    pub attenuation_db_km: f64,
    pub tau_a: f64,
    pub tau_b: f64,
    pub xi_a: f64,
    pub xi_b: f64,
}

impl ChannelParams {
    pub fn new(length_km: f64, attenuation_db_km: f64, xi_total: f64) -> Result<Self> {
        if !(length_km >= 0.0) {
            return Err(Error::Domain {
                name: "length_km",
                value: length_km,
                domain: "[0, inf)",
            });
        }
        if !(attenuation_db_km >= 0.0) {
            return Err(Error::Domain {
                name: "attenuation_db_km",
                value: attenuation_db_km,
                domain: "[0, inf)",
            });
        }
        if !(xi_total >= 0.0) {
            return Err(Error::Domain {
                name: "xi_total",
                value: xi_total,
                domain: "[0, inf)",
            });
        }
        let tau_a = math::powf(10.0, -attenuation_db_km * length_km / 10.0);
        Ok(ChannelParams {
            length_km,
            attenuation_db_km,
            tau_a,
            tau_b: 1.0,
            xi_a: xi_total / 2.0,
            xi_b: xi_total / 2.0,
        })
    }
}

/// Covariance data after the two travelling modes passed their channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyCov {
    /// Alice's retained-mode variance (untouched by the channel).
    pub var_a: f64,
    /// Alice's cross covariance, already scaled by `√τ`.
    pub corr_a: f64,
    /// Variance of Alice's mode as received by the relay.
    pub var_a_relay: f64,
    /// Variance of Bob's mode as received by the relay.
    pub var_b_relay: f64,
    /// Bob's cross covariance (his link is lossless).
    pub corr_b: f64,
    /// Bob's retained-mode variance.
    pub var_b: f64,
}

/// Send the travelling modes through the loss channels.
pub fn apply_channel(prep: &PreparedCov, ch: &ChannelParams) -> LossyCov {
    LossyCov {
        var_a: prep.var_a,
        corr_a: math::sqrt(ch.tau_a) * prep.corr_a,
        var_a_relay: ch.tau_a * (prep.var_a - 1.0) + 1.0 + ch.xi_a,
        var_b_relay: prep.var_b + ch.xi_b,
        corr_b: prep.corr_b,
        var_b: prep.var_b,
    }
}

/// Final Alice-Bob covariance after the relay's optimal Gaussian swap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwappedCov {
    pub var_a: f64,
    pub var_b: f64,
    pub corr: f64,
}

/// Optimal Gaussian entanglement swapping at the relay.
///
/// With `D = var_a_relay + var_b_relay`:
///
/// ```text
/// x₁ = a₁ − (√τ c)² / D,   x₂ = b₁ − d² / D,   x' = (√τ c)·d / D
/// ```
pub fn swap(lossy: &LossyCov) -> Result<SwappedCov> {
    let den = lossy.var_a_relay + lossy.var_b_relay;
    if !(den > 0.0) {
        return Err(Error::Domain {
            name: "relay variance sum",
            value: den,
            domain: "(0, inf)",
        });
    }
    let out = SwappedCov {
        var_a: lossy.var_a - lossy.corr_a * lossy.corr_a / den,
        var_b: lossy.var_b - lossy.corr_b * lossy.corr_b / den,
        corr: lossy.corr_a * lossy.corr_b / den,
    };
    for (what, v) in [("swapped x1", out.var_a), ("swapped x2", out.var_b)] {
        if v < 1.0 - PHYS_TOL {
            return Err(Error::Unphysical { what, value: v });
        }
    }
    let det = out.var_a * out.var_b - out.corr * out.corr;
    if det < 1.0 - 1e-8 {
        return Err(Error::Unphysical {
            what: "swapped determinant",
            value: det,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{tmsv_state, Cutoff};

    #[test]
    fn vacuum_moments() {
        let vac = tmsv_state(0.0, Cutoff::Auto).unwrap();
        let (a, c) = covariance_from_state(&vac).unwrap();
        assert_eq!(a, 1.0);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn tmsv_moments_closed_form() {
        // lambda = 0.5: a = 5/3, c = 4/3, purity a^2 - c^2 = 1
        let st = tmsv_state(0.5, Cutoff::Auto).unwrap();
        let (a, c) = covariance_from_state(&st).unwrap();
        assert!((a - 5.0 / 3.0).abs() < 1e-12);
        assert!((c - 4.0 / 3.0).abs() < 1e-12);
        assert!((a * a - c * c - 1.0).abs() < 1e-10);
        let (a2, c2) = tmsv_cov(0.5);
        assert!((a - a2).abs() < 1e-12 && (c - c2).abs() < 1e-12);
    }

    #[test]
    fn channel_arithmetic() {
        // 25 km at 0.2 dB/km is tau = 10^(-1/2)
        let ch = ChannelParams::new(25.0, 0.2, 0.0).unwrap();
        assert!((ch.tau_a - 0.316227766016838).abs() < 1e-14);
        assert_eq!(ch.tau_b, 1.0);

        // identity channel leaves the bundle untouched
        let prep = PreparedCov::new(5.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0, 4.0 / 3.0).unwrap();
        let id = ChannelParams::new(0.0, 0.2, 0.0).unwrap();
        let lossy = apply_channel(&prep, &id);
        assert_eq!(lossy.var_a_relay, prep.var_a);
        assert_eq!(lossy.var_b_relay, prep.var_b);
        assert_eq!(lossy.corr_a, prep.corr_a);

        // a2 = tau (a1 - 1) + 1 + xi_a on plain numbers
        let prep = PreparedCov::new(5.0 / 3.0, 0.0, 1.0, 0.0).unwrap();
        let mut ch = ChannelParams::new(0.0, 0.2, 0.004).unwrap();
        ch.tau_a = 0.5;
        ch.xi_a = 0.002;
        let lossy = apply_channel(&prep, &ch);
        assert!((lossy.var_a_relay - (0.5 * (2.0 / 3.0) + 1.0 + 0.002)).abs() < 1e-15);
    }

    #[test]
    fn swap_symbolic_case() {
        // V_A = V_B = 5/3, no loss: x1 = x2 = (V^2+1)/(2V) = 17/15, x' = (V^2-1)/(2V) = 8/15
        let v: f64 = 5.0 / 3.0;
        let c = (v * v - 1.0).sqrt();
        let prep = PreparedCov::new(v, c, v, c).unwrap();
        let ch = ChannelParams::new(0.0, 0.2, 0.0).unwrap();
        let out = swap(&apply_channel(&prep, &ch)).unwrap();
        assert!((out.var_a - 17.0 / 15.0).abs() < 1e-12);
        assert!((out.var_b - 17.0 / 15.0).abs() < 1e-12);
        assert!((out.corr - 8.0 / 15.0).abs() < 1e-12);
        assert!((out.var_a * out.var_b - out.corr * out.corr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_limits() {
        // no Alice correlation survives a dead channel
        let v: f64 = 5.0 / 3.0;
        let c = (v * v - 1.0).sqrt();
        let prep = PreparedCov::new(v, c, v, c).unwrap();
        let mut ch = ChannelParams::new(0.0, 0.2, 0.0).unwrap();
        ch.tau_a = 1e-30;
        let out = swap(&apply_channel(&prep, &ch)).unwrap();
        assert!(out.corr.abs() < 1e-12);
        assert!((out.var_a - v).abs() < 1e-12);

        // vacuum Alice: x1 = a1, x' = 0
        let prep = PreparedCov::new(1.0, 0.0, v, c).unwrap();
        let ch = ChannelParams::new(10.0, 0.2, 0.0).unwrap();
        let out = swap(&apply_channel(&prep, &ch)).unwrap();
        assert_eq!(out.corr, 0.0);
        assert!((out.var_a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_rejects_degenerate_relay() {
        let lossy = LossyCov {
            var_a: 1.0,
            corr_a: 0.0,
            var_a_relay: -1.0,
            var_b_relay: 0.5,
            corr_b: 0.0,
            var_b: 1.0,
        };
        assert!(swap(&lossy).is_err());
    }

    #[test]
    fn prepared_cov_validation() {
        assert!(PreparedCov::new(0.5, 0.0, 1.0, 0.0).is_err());
        assert!(PreparedCov::new(1.5, 1.4, 1.0, 0.0).is_err());
    }
}
