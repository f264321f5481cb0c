//! Key-rate and entanglement metrics under one-mode collective attacks.
//!
//! Everything is in bits (base-2 logs). The secret key rate for reverse
//! reconciliation with heralded resource states is
//!
//! ```text
//! SKR = P · (γ·I_AB − χ_BE)
//! ```
//!
//! where `P` is the heralding success probability, `γ` the reconciliation
//! efficiency, `I_AB` the mutual information of the homodyne outcomes, and
//! `χ_BE` the Holevo bound evaluated from the symplectic spectrum of the
//! swapped covariance matrix.
//!
//! Floating-point policy: radicands and eigenvalue deficits within 1e−9 of
//! their physical bound are clamped onto it; larger violations are errors.

use crate::error::{Error, Result};
use crate::fock::{first_power_adequate, SchmidtState};
use crate::gaussian::SwappedCov;
use crate::math;

const CLAMP_TOL: f64 = 1e-9;

/// Security metrics of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityReport {
    /// Alice-Bob mutual information (bits/pulse).
    pub i_ab: f64,
    /// Symplectic eigenvalues of the swapped covariance matrix.
    pub v1: f64,
    pub v2: f64,
    /// Conditional symplectic eigenvalue after Bob's homodyne measurement.
    pub v_bar: f64,
    /// Holevo bound on Eve's information (bits/pulse).
    pub chi_be: f64,
    /// Secret key rate (bits/pulse); negative values are reported as-is.
    pub skr: f64,
    /// Heralding probability that entered the rate.
    pub success_prob: f64,
}

/// Mutual information of double homodyne on a standard-form covariance.
///
/// `I_AB = ½ log₂( x₂ / (x₂ − x'²/x₁) )`.
pub fn mutual_information(cov: &SwappedCov) -> Result<f64> {
    if !(cov.var_a > 0.0) {
        return Err(Error::Domain {
            name: "var_a",
            value: cov.var_a,
            domain: "(0, inf)",
        });
    }
    let conditional = cov.var_b - cov.corr * cov.corr / cov.var_a;
    if !(conditional > 0.0) {
        return Err(Error::Domain {
            name: "conditional variance",
            value: conditional,
            domain: "(0, inf)",
        });
    }
    Ok(0.5 * math::log2(cov.var_b / conditional))
}

/// Entropy of a thermal state with symplectic eigenvalue `x ≥ 1`:
/// `G(x) = ((x+1)/2)·log₂((x+1)/2) − ((x−1)/2)·log₂((x−1)/2)`, with `G(1) = 0`.
pub fn holevo_g(x: f64) -> Result<f64> {
    if x < 1.0 - CLAMP_TOL {
        return Err(Error::Domain {
            name: "symplectic eigenvalue",
            value: x,
            domain: "[1, inf)",
        });
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let hi = (x + 1.0) / 2.0;
    let lo = (x - 1.0) / 2.0;
    Ok(hi * math::log2(hi) - lo * math::log2(lo))
}

/// Symplectic spectrum and Holevo bound of a swapped covariance matrix.
///
/// With `Δ = x₁² + x₂² − 2x'²` and `det = (x₁x₂ − x'²)²`:
/// `ν₁,₂ = √(Δ/2 ± √(Δ² − 4·det)/2)`, `ν̄ = √(x₁² − x₁x'²/x₂)`,
/// `χ_BE = G(ν₁) + G(ν₂) − G(ν̄)`.
pub fn holevo_bound(cov: &SwappedCov) -> Result<(f64, f64, f64, f64)> {
    let (x1, x2, xp) = (cov.var_a, cov.var_b, cov.corr);
    let delta = x1 * x1 + x2 * x2 - 2.0 * xp * xp;
    let det = x1 * x2 - xp * xp;
    // Delta^2 - 4 det^2 factorizes exactly as (x1-x2)^2 ((x1+x2)^2 - 4 xp^2);
    // the factored form avoids the cancellation that plagues near-degenerate
    // spectra, and nu2^2 = 2 det^2 / (Delta + root) avoids the subtraction
    // entirely.
    let disc = (x1 - x2) * (x1 - x2) * ((x1 + x2) * (x1 + x2) - 4.0 * xp * xp);
    if disc < -CLAMP_TOL {
        return Err(Error::Unphysical {
            what: "symplectic discriminant",
            value: disc,
        });
    }
    let root = math::sqrt(disc.max(0.0));
    let clamp_nu = |sq: f64, what: &'static str| -> Result<f64> {
        let nu = math::sqrt(sq.max(0.0));
        if nu < 1.0 - CLAMP_TOL {
            return Err(Error::Unphysical { what, value: sq });
        }
        Ok(nu.max(1.0))
    };
    let v1 = clamp_nu(0.5 * (delta + root), "nu1^2")?;
    let v2 = clamp_nu(2.0 * det * det / (delta + root), "nu2^2")?;
    // nu_bar^2 = x1^2 - x1 xp^2 / x2 = (x1/x2) det, stable near purity
    let v_bar = clamp_nu(x1 * det / x2, "nu_bar^2")?;
    let chi = holevo_g(v1)? + holevo_g(v2)? - holevo_g(v_bar)?;
    Ok((v1, v2, v_bar, chi))
}

/// `SKR = P·(γ·I_AB − χ_BE)`; linear in the heralding probability.
pub fn secret_key_rate(success_prob: f64, gamma: f64, i_ab: f64, chi_be: f64) -> f64 {
    success_prob * (gamma * i_ab - chi_be)
}

/// Full security evaluation of one covariance point.
pub fn security_report(cov: &SwappedCov, success_prob: f64, gamma: f64) -> Result<SecurityReport> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            domain: "(0, 1]",
        });
    }
    if !(success_prob > 0.0 && success_prob <= 1.0) {
        return Err(Error::Domain {
            name: "success_prob",
            value: success_prob,
            domain: "(0, 1]",
        });
    }
    let i_ab = mutual_information(cov)?;
    let (v1, v2, v_bar, chi_be) = holevo_bound(cov)?;
    Ok(SecurityReport {
        i_ab,
        v1,
        v2,
        v_bar,
        chi_be,
        skr: secret_key_rate(success_prob, gamma, i_ab, chi_be),
        success_prob,
    })
}

/// Logarithmic negativity of a pure Schmidt-form state.
///
/// The partial transpose of `Σ cₙ|nn⟩⟨mm|` has singular values `{|cᵢcⱼ|}`, so
/// the trace norm is `(Σ|cₙ|)²` and `E_N = 2·log₂ Σ|cₙ|`. The first-power sum
/// converges more slowly than the norm, so the truncation check here is on the
/// `Σ|cₙ|` tail rather than the quadratic one.
pub fn log_negativity(state: &SchmidtState) -> Result<f64> {
    let c = state.coeffs();
    if !first_power_adequate(c) {
        return Err(Error::Truncation {
            cutoff: state.cutoff(),
            required: state.cutoff() + 1,
        });
    }
    let abs_sum: f64 = c.iter().map(|x| x.abs()).sum();
    Ok(2.0 * math::log2(abs_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{tmsv_state, Cutoff, SchmidtState};

    #[test]
    fn mutual_information_examples() {
        // uncorrelated modes share nothing
        let cov = SwappedCov {
            var_a: 1.4,
            var_b: 1.2,
            corr: 0.0,
        };
        assert_eq!(mutual_information(&cov).unwrap(), 0.0);

        // plain arithmetic: x1 = x2 = 2, x' = 1
        let cov = SwappedCov {
            var_a: 2.0,
            var_b: 2.0,
            corr: 1.0,
        };
        let want = 0.5 * (4.0f64 / 3.0).log2();
        assert!((mutual_information(&cov).unwrap() - want).abs() < 1e-15);

        // pure swapped case at V = 5/3: I = log2(17/15)
        let cov = SwappedCov {
            var_a: 17.0 / 15.0,
            var_b: 17.0 / 15.0,
            corr: 8.0 / 15.0,
        };
        let want = (17.0f64 / 15.0).log2();
        assert!((mutual_information(&cov).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.18057).abs() < 1e-5);
    }

    #[test]
    fn mutual_information_domain() {
        let cov = SwappedCov {
            var_a: 1.0,
            var_b: 1.0,
            corr: 1.5,
        };
        assert!(mutual_information(&cov).is_err());
    }

    #[test]
    fn holevo_g_values() {
        assert_eq!(holevo_g(1.0).unwrap(), 0.0);
        assert_eq!(holevo_g(1.0 - 5e-10).unwrap(), 0.0);
        assert!((holevo_g(3.0).unwrap() - 2.0).abs() < 1e-14);
        let want = 1.25 * 1.25f64.log2() - 0.25 * 0.25f64.log2();
        assert!((holevo_g(1.5).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.902410).abs() < 1e-6);
        assert!(holevo_g(0.5).is_err());
    }

    #[test]
    fn holevo_bound_product_state() {
        // x' = 0: eigenvalues are the two variances, nu_bar = x1
        let cov = SwappedCov {
            var_a: 1.7,
            var_b: 2.4,
            corr: 0.0,
        };
        let (v1, v2, v_bar, chi) = holevo_bound(&cov).unwrap();
        assert!((v1 - 2.4).abs() < 1e-12);
        assert!((v2 - 1.7).abs() < 1e-12);
        assert!((v_bar - 1.7).abs() < 1e-12);
        let want = holevo_g(2.4).unwrap();
        assert!((chi - want).abs() < 1e-12);
    }

    #[test]
    fn holevo_bound_degenerate_spectrum() {
        // x1 = x2 = 2, x' = 1: Delta = 6, det = 3, both eigenvalues sqrt(3)
        let cov = SwappedCov {
            var_a: 2.0,
            var_b: 2.0,
            corr: 1.0,
        };
        let (v1, v2, v_bar, chi) = holevo_bound(&cov).unwrap();
        let r3 = 3.0f64.sqrt();
        assert!((v1 - r3).abs() < 1e-12);
        assert!((v2 - r3).abs() < 1e-12);
        assert!((v_bar - r3).abs() < 1e-12);
        // chi = 2 G(sqrt 3) - G(sqrt 3) = G(sqrt 3)
        assert!((chi - holevo_g(r3).unwrap()).abs() < 1e-12);
        assert!((chi - 1.145421).abs() < 1e-6);
    }

    #[test]
    fn skr_composition() {
        let i = (17.0f64 / 15.0).log2();
        let skr = secret_key_rate(1.0, 0.95, i, 0.0);
        assert!((skr - 0.95 * i).abs() < 1e-15);
        assert!((skr - 0.171544).abs() < 1e-6);

        // linear in the heralding probability
        assert!((secret_key_rate(0.1, 0.95, i, 0.1) - 0.1 * (0.95 * i - 0.1)).abs() < 1e-15);

        // without correlations the rate cannot be positive
        assert!(secret_key_rate(0.7, 0.95, 0.0, 0.3) <= 0.0);
    }

    #[test]
    fn log_negativity_tmsv() {
        let vac = tmsv_state(0.0, Cutoff::Auto).unwrap();
        assert_eq!(log_negativity(&vac).unwrap(), 0.0);

        // E_N = log2((1+l)/(1-l)); log2(3) at l = 0.5
        let st = tmsv_state(0.5, Cutoff::Auto).unwrap();
        let want = 3.0f64.log2();
        assert!((log_negativity(&st).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn log_negativity_needs_first_power_tail() {
        // passes the quadratic adequacy check at cutoff 20 but not the linear one
        let st = tmsv_state(0.42, Cutoff::Exact(20)).unwrap();
        assert!(matches!(log_negativity(&st), Err(Error::Truncation { .. })));
    }

    #[test]
    fn log_negativity_depends_on_magnitudes_only() {
        let base = vec![0.8, 0.5, 0.2, 0.05, 1e-4, 1e-6, 1e-9, 1e-12, 0.0, 0.0];
        let flipped: Vec<f64> = base
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 1 { -c } else { *c })
            .collect();
        let a = SchmidtState::from_unnormalized(base, 1.0).unwrap();
        let b = SchmidtState::from_unnormalized(flipped, 1.0).unwrap();
        let ea = log_negativity(&a).unwrap();
        let eb = log_negativity(&b).unwrap();
        assert!((ea - eb).abs() < 1e-14);
    }
}
