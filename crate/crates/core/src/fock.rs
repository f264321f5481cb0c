//! Truncated Fock-space engine.
//!
//! Everything in this crate works with pure two-mode states of Schmidt form
//! `Σₙ cₙ|nn⟩` with real, normalized coefficients. This module constructs the
//! two-mode squeezed vacuum (`cₙ ∝ λⁿ`) and applies the generic heralded
//! non-Gaussian operation: mix one mode with an `|m₁⟩` ancilla on a beam
//! splitter, project the ancilla on `|n₁⟩`, then repeat with `|m₂⟩`/`|n₂⟩` on a
//! second beam splitter of equal transmissivity.
//!
//! Beam-splitter convention: the `transmissivity` parameter `T` of
//! [`HeraldSpec`] and [`bs_kraus`] is the *amplitude* transmissivity, i.e. the
//! rotation angle in the two-mode exponent is `arccos(T)` and the power
//! transmission of the splitter is `T²`. Under this convention the heralded
//! coefficient series produced here agree exactly with the closed forms in
//! [`crate::states`] (for example, the add-then-subtract stage pair acts on
//! `|nn⟩` as `(n+1)·T²ⁿ·(1−T²)`), which is the correctness gate enforced by the
//! validation suite.
//!
//! All operations are pure functions; precomputed matrices never hold shared
//! mutable state, so everything here is safe to call from any number of
//! threads.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Hard cap for the adaptive cutoff search.
pub const MAX_CUTOFF: usize = 200;

/// Smallest admissible Fock cutoff.
pub const MIN_CUTOFF: usize = 8;

/// Starting point of the adaptive cutoff search (doubled until converged).
const ADAPTIVE_START: usize = 30;

/// Relative bound on the last two indices' contribution to `Σ (2n+1)cₙ²`.
const SECOND_MOMENT_TOL: f64 = 1e-12;

/// Relative bound on the last two indices' contribution to `Σ |cₙ|`.
const FIRST_POWER_TOL: f64 = 1e-12;

/// A trailing term counts as stagnant when it adds less than this (relative).
const STAGNATION_TOL: f64 = 1e-16;
const STAGNATION_RUN: usize = 10;

/// Relative bound on non-Schmidt weight in a herald output.
const SCHMIDT_TOL: f64 = 1e-12;

/// Below this squared norm a heralding sequence counts as annihilation.
const ZERO_PROB_FLOOR: f64 = 1e-300;

/// Fock truncation policy for state constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    /// Start at 30 photons and double (up to 200) until the coefficient tails
    /// are converged for both quadratic moments and first-power sums.
    Auto,
    /// Use exactly this photon-number cutoff; fails with the required cutoff
    /// if the tails are not converged.
    Exact(usize),
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Auto
    }
}

/// A pure two-mode state `Σₙ cₙ|nn⟩` with its heralding success probability.
///
/// Constructors normalize the coefficients (`Σ cₙ² = 1`), fix the global sign
/// so that `Σ cₙ ≥ 0`, and verify that the truncation tail is negligible for
/// second-moment (covariance) purposes. `success_prob` is the probability that
/// the full heralding sequence which produced the state fired as required; it
/// is 1 for un-heralded states.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtState {
    coeffs: Vec<f64>,
    success_prob: f64,
}

impl SchmidtState {
    /// Normalize a raw coefficient vector into a state.
    ///
    /// `success_prob` must already account for the whole heralding chain.
    pub fn from_unnormalized(coeffs: Vec<f64>, success_prob: f64) -> Result<Self> {
        if coeffs.len() < MIN_CUTOFF + 1 {
            return Err(Error::Domain {
                name: "coeffs.len()",
                value: coeffs.len() as f64,
                domain: "cutoff >= 8, i.e. at least 9 entries",
            });
        }
        if !(success_prob > 0.0 && success_prob <= 1.0) {
            return Err(Error::Domain {
                name: "success_prob",
                value: success_prob,
                domain: "(0, 1]",
            });
        }
        for &c in &coeffs {
            if !c.is_finite() {
                return Err(Error::Domain {
                    name: "coeffs[n]",
                    value: c,
                    domain: "finite reals",
                });
            }
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        if norm_sq < ZERO_PROB_FLOOR {
            return Err(Error::ZeroProbability { norm_sq });
        }
        let inv = 1.0 / math::sqrt(norm_sq);
        let sign = if coeffs.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        let coeffs: Vec<f64> = coeffs.iter().map(|c| c * inv * sign).collect();
        if !second_moment_adequate(&coeffs) {
            return Err(Error::Truncation {
                cutoff: coeffs.len() - 1,
                required: coeffs.len(), // caller-side growth required
            });
        }
        Ok(SchmidtState { coeffs, success_prob })
    }

    /// Normalized Schmidt coefficients, index = photon number.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Photon-number cutoff `N` (coefficients run over `0..=N`).
    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Probability that the heralding chain which produced this state fired.
    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    /// `|Σ cₙ² − 1| ≤ 1e−12`; always true for states built by this crate.
    pub fn is_normalized(&self) -> bool {
        let n: f64 = self.coeffs.iter().map(|c| c * c).sum();
        (n - 1.0).abs() <= 1e-12
    }
}

fn second_moment_adequate(coeffs: &[f64]) -> bool {
    let total: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| (2 * n + 1) as f64 * c * c)
        .sum();
    let k = coeffs.len();
    let tail: f64 = coeffs[k - 2..]
        .iter()
        .zip(k - 2..)
        .map(|(c, n)| (2 * n + 1) as f64 * c * c)
        .sum();
    tail <= SECOND_MOMENT_TOL * total
}

pub(crate) fn first_power_adequate(coeffs: &[f64]) -> bool {
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let k = coeffs.len();
    let tail: f64 = coeffs[k - 2..].iter().map(|c| c.abs()).sum();
    tail <= FIRST_POWER_TOL * total
}

fn tail_stagnant(coeffs: &[f64]) -> bool {
    if coeffs.len() < STAGNATION_RUN {
        return false;
    }
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    coeffs[coeffs.len() - STAGNATION_RUN..]
        .iter()
        .all(|c| c * c < STAGNATION_TOL * total)
}

/// Build a coefficient series from a term function under a cutoff policy.
///
/// Adaptive mode doubles the cutoff until the tail is converged for second
/// moments, first-power sums, and plain norm stagnation, so any state this
/// returns supports covariance extraction and log-negativity downstream.
pub(crate) fn converged_series<F: Fn(usize) -> f64>(term: F, cutoff: Cutoff) -> Result<Vec<f64>> {
    let fill = |n: usize| -> Vec<f64> { (0..=n).map(&term).collect() };
    match cutoff {
        Cutoff::Exact(n) => {
            if n < MIN_CUTOFF {
                return Err(Error::Domain {
                    name: "cutoff",
                    value: n as f64,
                    domain: "integer >= 8",
                });
            }
            let coeffs = fill(n);
            if second_moment_adequate(&coeffs) {
                return Ok(coeffs);
            }
            // report the cutoff that would have been enough
            let mut m = n;
            while m < MAX_CUTOFF {
                m = (2 * m).min(MAX_CUTOFF);
                let probe = fill(m);
                if let Some(req) = (n + 1..=m).find(|&k| second_moment_adequate(&probe[..=k])) {
                    return Err(Error::Truncation { cutoff: n, required: req });
                }
            }
            Err(Error::CutoffExhausted { max: MAX_CUTOFF })
        }
        Cutoff::Auto => {
            let mut n = ADAPTIVE_START;
            loop {
                let coeffs = fill(n);
                if second_moment_adequate(&coeffs)
                    && first_power_adequate(&coeffs)
                    && tail_stagnant(&coeffs)
                {
                    return Ok(coeffs);
                }
                if n >= MAX_CUTOFF {
                    return Err(Error::CutoffExhausted { max: MAX_CUTOFF });
                }
                n = (2 * n).min(MAX_CUTOFF);
            }
        }
    }
}

/// Two-mode squeezed vacuum, `cₙ = √(1−λ²)·λⁿ` with `λ = tanh r ∈ [0, 1)`.
pub fn tmsv_state(lambda: f64, cutoff: Cutoff) -> Result<SchmidtState> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain {
            name: "lambda",
            value: lambda,
            domain: "[0, 1)",
        });
    }
    let amp = math::sqrt(1.0 - lambda * lambda);
    let coeffs = converged_series(|n| amp * math::powi(lambda, n as i32), cutoff)?;
    SchmidtState::from_unnormalized(coeffs, 1.0)
}

/// Dense real matrix on a truncated single-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.dim + col] = value;
    }

    /// `self * other`, both square of equal dimension.
    pub fn mul(&self, other: &FockMatrix) -> FockMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = FockMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

/// Binomial coefficient with a small lower index, exact in f64.
fn binom_small(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64;
    }
    acc / factorial(k as u8)
}

/// Heralded single-mode Kraus operator of one beam-splitter stage.
///
/// `K[j', j] = ⟨j', n| U(T) |j, m⟩` for a beam splitter of amplitude
/// transmissivity `t`, with the `|m⟩` ancilla injected and `|n⟩` detected.
/// Photon-number conservation makes the matrix single-banded:
/// `K[j', j] = 0` unless `j' = j + m − n`. Rows that would fall outside the
/// truncated space are dropped, so callers must pad the dimension by the
/// number of injected photons if exactness at the top of the space matters
/// (see [`apply_herald`]).
pub fn bs_kraus(t: f64, inject: u8, detect: u8, cutoff: usize) -> Result<FockMatrix> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain {
            name: "transmissivity",
            value: t,
            domain: "(0, 1)",
        });
    }
    if inject > 8 || detect > 8 {
        return Err(Error::Domain {
            name: "photon count",
            value: inject.max(detect) as f64,
            domain: "0..=8",
        });
    }
    let m = inject as usize;
    let n = detect as usize;
    let s = math::sqrt(1.0 - t * t);
    let dim = cutoff + 1;
    let mut out = FockMatrix::zeros(dim);
    for j in 0..dim {
        let jp = j + m;
        if jp < n {
            continue;
        }
        let jp = jp - n;
        if jp >= dim {
            continue;
        }
        // sqrt(j'! n! / (j! m!)), kept overflow-free via the j'!/j! ratio
        let mut fact_ratio = 1.0;
        if jp > j {
            for k in j + 1..=jp {
                fact_ratio *= k as f64;
            }
        } else {
            for k in jp + 1..=j {
                fact_ratio /= k as f64;
            }
        }
        let pref = math::sqrt(fact_ratio * factorial(detect) / factorial(inject));
        let lo = jp.saturating_sub(m);
        let hi = j.min(jp);
        let mut sum = 0.0;
        for p in lo..=hi {
            let sign = if (j - p) % 2 == 0 { 1.0 } else { -1.0 };
            sum += binom_small(j, j - p)
                * binom_small(m, jp - p)
                * math::powi(t, (2 * p + m - jp) as i32)
                * sign
                * math::powi(s, ((j - p) + (jp - p)) as i32);
        }
        out.set(jp, j, pref * sum);
    }
    Ok(out)
}

/// Photon counts and beam-splitter transmissivity of the two heralding stages.
///
/// Stage 1 injects `|m1⟩` and detects `|n1⟩`; stage 2 injects `|m2⟩` and
/// detects `|n2⟩`. Both splitters share the amplitude transmissivity `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldSpec {
    pub m1: u8,
    pub n1: u8,
    pub m2: u8,
    pub n2: u8,
    pub transmissivity: f64,
}

impl HeraldSpec {
    pub fn new(m1: u8, n1: u8, m2: u8, n2: u8, transmissivity: f64) -> Result<Self> {
        for (name, v) in [("m1", m1), ("n1", n1), ("m2", m2), ("n2", n2)] {
            if v > 1 {
                return Err(Error::Domain {
                    name,
                    value: v as f64,
                    domain: "{0, 1}",
                });
            }
        }
        if !(transmissivity > 0.0 && transmissivity < 1.0) {
            return Err(Error::Domain {
                name: "transmissivity",
                value: transmissivity,
                domain: "(0, 1)",
            });
        }
        Ok(HeraldSpec {
            m1,
            n1,
            m2,
            n2,
            transmissivity,
        })
    }

    /// Add one photon at the first splitter, subtract one at the second.
    pub fn photon_add_subtract(transmissivity: f64) -> Result<Self> {
        HeraldSpec::new(1, 0, 0, 1, transmissivity)
    }

    /// Inject and detect one photon at both splitters.
    pub fn photon_replace(transmissivity: f64) -> Result<Self> {
        HeraldSpec::new(1, 1, 1, 1, transmissivity)
    }
}

/// Apply a two-stage herald to mode b of a Schmidt-form state.
///
/// The composite Kraus operator `K₂K₁` is built on a space padded by the
/// number of injected photons, so no amplitude is clipped at the top of the
/// truncation. The output must again be of Schmidt form `Σ c′ₙ|nn⟩`; if the
/// off-diagonal weight exceeds 1e−12 of the total the spec is outside the
/// family this crate models and an error is returned. The returned state's
/// `success_prob` is the input's multiplied by the probability that both
/// detections fired, so chained heralds accumulate the joint probability.
pub fn apply_herald(state: &SchmidtState, spec: &HeraldSpec) -> Result<SchmidtState> {
    let n_in = state.cutoff();
    let pad = (spec.m1 + spec.m2) as usize;
    let work = n_in + pad;
    let k1 = bs_kraus(spec.transmissivity, spec.m1, spec.n1, work)?;
    let k2 = bs_kraus(spec.transmissivity, spec.m2, spec.n2, work)?;
    let composite = k2.mul(&k1);

    let c = state.coeffs();
    let mut diag = vec![0.0; n_in + 1];
    let mut diag_sq = 0.0;
    let mut off_sq = 0.0;
    for n in 0..=n_in {
        for j in 0..=work {
            let amp = c[n] * composite.get(j, n);
            if j == n {
                diag[n] = amp;
                diag_sq += amp * amp;
            } else {
                off_sq += amp * amp;
            }
        }
    }
    let total = diag_sq + off_sq;
    if total < ZERO_PROB_FLOOR {
        return Err(Error::ZeroProbability { norm_sq: total });
    }
    if off_sq > SCHMIDT_TOL * total {
        return Err(Error::NotSchmidt {
            residual: off_sq / total,
            tol: SCHMIDT_TOL,
        });
    }
    SchmidtState::from_unnormalized(diag, diag_sq * state.success_prob())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tmsv_examples() {
        // zero squeezing is the vacuum
        let vac = tmsv_state(0.0, Cutoff::Auto).unwrap();
        assert_eq!(vac.coeffs()[0], 1.0);
        assert!(vac.coeffs()[1..].iter().all(|&c| c == 0.0));
        assert_eq!(vac.success_prob(), 1.0);

        // direct evaluation of sqrt(1-l^2) l^n at l = 0.5
        let st = tmsv_state(0.5, Cutoff::Exact(40)).unwrap();
        let amp = 0.75_f64.sqrt();
        assert!((st.coeffs()[0] - amp).abs() < 1e-12);
        assert!((st.coeffs()[1] - amp * 0.5).abs() < 1e-12);
        assert!((st.coeffs()[2] - amp * 0.25).abs() < 1e-12);
        assert!(st.is_normalized());

        // 3 dB worth of squeezing, normalized at cutoff 40
        let st = tmsv_state(0.33228, Cutoff::Exact(40)).unwrap();
        let sum: f64 = st.coeffs().iter().map(|c| c * c).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tmsv_domain_errors() {
        assert!(matches!(tmsv_state(-0.1, Cutoff::Auto), Err(Error::Domain { .. })));
        assert!(matches!(tmsv_state(1.0, Cutoff::Auto), Err(Error::Domain { .. })));
        assert!(matches!(
            tmsv_state(0.3, Cutoff::Exact(4)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn truncation_error_reports_required_cutoff() {
        // lambda = 0.8 decays far too slowly for a cutoff of 10
        match tmsv_state(0.8, Cutoff::Exact(10)) {
            Err(Error::Truncation { cutoff: 10, required }) => {
                assert!(required > 10 && required <= MAX_CUTOFF);
                assert!(tmsv_state(0.8, Cutoff::Exact(required)).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn kraus_transmission_branch() {
        // m = n = 0 is the pure attenuation operator, K[j,j] = t^j
        let t = 0.7;
        let k = bs_kraus(t, 0, 0, 12).unwrap();
        for j in 0..=12 {
            assert!((k.get(j, j) - t.powi(j as i32)).abs() < 1e-14);
            for jp in 0..=12 {
                if jp != j {
                    assert_eq!(k.get(jp, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn kraus_addition_branch() {
        // m = 1, n = 0 populates only the superdiagonal:
        // K[j+1, j] = sqrt(j+1) * sqrt(1-t^2) * t^j
        let t: f64 = 0.6;
        let s = (1.0 - t * t).sqrt();
        let k = bs_kraus(t, 1, 0, 12).unwrap();
        for j in 0..12 {
            let want = ((j + 1) as f64).sqrt() * s * t.powi(j as i32);
            assert!((k.get(j + 1, j) - want).abs() < 1e-14);
        }
        for j in 0..=12 {
            for jp in 0..=12 {
                if jp != j + 1 {
                    assert_eq!(k.get(jp, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn kraus_replacement_diagonal() {
        // m = n = 1: K[j,j] = t^(j-1) (t^2 - j(1-t^2)), with K[0,0] = t
        let t = 0.75;
        let k = bs_kraus(t, 1, 1, 12).unwrap();
        assert!((k.get(0, 0) - t).abs() < 1e-14);
        for j in 1..=12 {
            let want = t.powi(j as i32 - 1) * (t * t - j as f64 * (1.0 - t * t));
            assert!((k.get(j, j) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn herald_on_vacuum() {
        // add one photon to the vacuum, then watch it leak out again
        let vac = tmsv_state(0.0, Cutoff::Auto).unwrap();
        for t in [0.3, 0.6, 0.9] {
            let spec = HeraldSpec::photon_add_subtract(t).unwrap();
            let out = apply_herald(&vac, &spec).unwrap();
            assert!((out.coeffs()[0] - 1.0).abs() < 1e-14);
            let want = (1.0 - t * t) * (1.0 - t * t);
            assert!((out.success_prob() - want).abs() < 1e-14 * want);
        }
    }

    #[test]
    fn herald_zero_probability() {
        // detecting a photon that was never injected annihilates the vacuum
        let vac = tmsv_state(0.0, Cutoff::Auto).unwrap();
        let spec = HeraldSpec::new(0, 1, 0, 1, 0.5).unwrap();
        assert!(matches!(
            apply_herald(&vac, &spec),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn herald_shape_error() {
        // a net photon-number shift cannot stay of Schmidt form
        let st = tmsv_state(0.2, Cutoff::Auto).unwrap();
        let spec = HeraldSpec::new(1, 0, 0, 0, 0.5).unwrap();
        assert!(matches!(apply_herald(&st, &spec), Err(Error::NotSchmidt { .. })));
    }

    #[test]
    fn herald_spec_validation() {
        assert!(HeraldSpec::new(2, 0, 0, 1, 0.5).is_err());
        assert!(HeraldSpec::new(1, 0, 0, 1, 0.0).is_err());
        assert!(HeraldSpec::new(1, 0, 0, 1, 1.0).is_err());
    }
}
