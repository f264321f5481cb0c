//! Validation battery: closed forms against the brute-force oracles.
//!
//! Each section compares an implementation path with an independent reference
//! over the standard grid `λ ∈ {0.05, 0.114623, 0.2, 0.33228}`,
//! `T ∈ {0.3, 0.6, 0.9}`. Rows marked `expected_mismatch` document known
//! inconsistencies in the reference closed forms (the 2PR probability
//! expression and the 2PAS one away from `λ = 0`); they do not fail the
//! battery. Everything else must hold at its stated tolerance.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::fock::{apply_herald, tmsv_state, Cutoff, HeraldSpec, SchmidtState};
use crate::math;
use crate::oracle;
use crate::security::log_negativity;
use crate::states::{
    closed_form_p1, closed_form_p2, closed_form_p2pr, coeffs, SqueezeParam, StateKind,
};

/// Squeezing grid of the validation battery (`λ = tanh r`).
pub const LAMBDA_GRID: [f64; 4] = [0.05, 0.114623, 0.2, 0.33228];
/// Transmissivity grid of the validation battery.
pub const T_GRID: [f64; 3] = [0.3, 0.6, 0.9];

/// One comparison between an implementation value and a reference value.
#[derive(Debug, Clone)]
pub struct AuditRow {
    pub label: String,
    pub implementation: f64,
    pub reference: f64,
    /// Absolute or relative error, as stated by the section's `tol_note`.
    pub err: f64,
    pub tol: f64,
    pub within: bool,
    /// Known inconsistency of the reference; informational only.
    pub expected_mismatch: bool,
}

impl AuditRow {
    fn checked(label: String, implementation: f64, reference: f64, err: f64, tol: f64) -> Self {
        AuditRow {
            label,
            implementation,
            reference,
            err,
            tol,
            within: err <= tol,
            expected_mismatch: false,
        }
    }

    fn informational(label: String, implementation: f64, reference: f64, err: f64) -> Self {
        AuditRow {
            label,
            implementation,
            reference,
            err,
            tol: f64::INFINITY,
            within: false,
            expected_mismatch: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditSection {
    pub title: String,
    pub tol_note: String,
    pub rows: Vec<AuditRow>,
}

impl AuditSection {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.within || r.expected_mismatch)
    }

    /// Largest error over rows that are gates (not informational).
    pub fn worst_err(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| !r.expected_mismatch)
            .map(|r| r.err)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub sections: Vec<AuditSection>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(AuditSection::passed)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Build the heralded state by brute force from a TMSV through [`apply_herald`].
pub fn herald_state_via_oracle(kind: StateKind, lambda: f64, t: f64) -> Result<SchmidtState> {
    let base = tmsv_state(lambda, Cutoff::Auto)?;
    match kind {
        StateKind::Tmsv => Ok(base),
        StateKind::Pas1 => apply_herald(&base, &HeraldSpec::photon_add_subtract(t)?),
        StateKind::Pas2 => {
            let once = apply_herald(&base, &HeraldSpec::photon_add_subtract(t)?)?;
            apply_herald(&once, &HeraldSpec::photon_add_subtract(t)?)
        }
        StateKind::Pr2 => apply_herald(&base, &HeraldSpec::photon_replace(t)?),
    }
}

/// Elementwise coefficient error and success-probability relative error of a
/// candidate state against the brute-force construction.
pub fn compare_to_oracle(candidate: &SchmidtState, kind: StateKind, lambda: f64, t: f64) -> Result<(f64, f64)> {
    let reference = herald_state_via_oracle(kind, lambda, t)?;
    let n = candidate.coeffs().len().max(reference.coeffs().len());
    let at = |s: &SchmidtState, i: usize| s.coeffs().get(i).copied().unwrap_or(0.0);
    let coeff_err = (0..n)
        .map(|i| (at(candidate, i) - at(&reference, i)).abs())
        .fold(0.0, f64::max);
    let prob_err = rel_err(candidate.success_prob(), reference.success_prob());
    Ok((coeff_err, prob_err))
}

/// Closed-form states against the Fock-space oracle on the full grid.
pub fn oracle_equivalence() -> Result<AuditSection> {
    let mut rows = Vec::new();
    for kind in [StateKind::Pas1, StateKind::Pas2, StateKind::Pr2] {
        for &lambda in &LAMBDA_GRID {
            let sq = SqueezeParam::from_lambda(lambda)?;
            for &t in &T_GRID {
                let analytic = coeffs(kind, &sq, t, Cutoff::Auto)?;
                let (coeff_err, prob_err) = compare_to_oracle(&analytic, kind, lambda, t)?;
                rows.push(AuditRow::checked(
                    format!("{kind} l={lambda} T={t} coeffs"),
                    0.0,
                    0.0,
                    coeff_err,
                    1e-10,
                ));
                rows.push(AuditRow::checked(
                    format!("{kind} l={lambda} T={t} success prob"),
                    analytic.success_prob(),
                    herald_state_via_oracle(kind, lambda, t)?.success_prob(),
                    prob_err,
                    1e-10,
                ));
            }
        }
    }
    Ok(AuditSection {
        title: String::from("heralded states vs Fock-space oracle"),
        tol_note: String::from("max |dc| and relative probability error, tol 1e-10"),
        rows,
    })
}

/// Reference probability closed forms against the series norms.
///
/// P1 must match everywhere. The transcribed P2 matches only at `λ = 0` (it
/// agrees with neither the joint two-stage probability nor the
/// second-stage-only one elsewhere), and the transcribed 2PR expression is
/// inconsistent already in its zero-squeezing limit (2T⁴ against the series'
/// T⁴); those rows are recorded as expected mismatches.
pub fn probability_audit() -> Result<AuditSection> {
    let mut rows = Vec::new();
    for &lambda in &LAMBDA_GRID {
        let sq = SqueezeParam::from_lambda(lambda)?;
        for &t in &T_GRID {
            let p1_series = coeffs(StateKind::Pas1, &sq, t, Cutoff::Auto)?.success_prob();
            let p1_closed = closed_form_p1(&sq, t);
            rows.push(AuditRow::checked(
                format!("P1 l={lambda} T={t}"),
                p1_series,
                p1_closed,
                rel_err(p1_series, p1_closed),
                1e-10,
            ));

            let p2_joint = coeffs(StateKind::Pas2, &sq, t, Cutoff::Auto)?.success_prob();
            let p2_second = p2_joint / p1_series;
            let p2_closed = closed_form_p2(&sq, t);
            rows.push(AuditRow::informational(
                format!("P2(joint) l={lambda} T={t}"),
                p2_joint,
                p2_closed,
                rel_err(p2_joint, p2_closed),
            ));
            rows.push(AuditRow::informational(
                format!("P2(second stage only) l={lambda} T={t}"),
                p2_second,
                p2_closed,
                rel_err(p2_second, p2_closed),
            ));

            let p2pr_series = coeffs(StateKind::Pr2, &sq, t, Cutoff::Auto)?.success_prob();
            let p2pr_closed = closed_form_p2pr(&sq, t);
            rows.push(AuditRow::informational(
                format!("P_2PR l={lambda} T={t}"),
                p2pr_series,
                p2pr_closed,
                rel_err(p2pr_series, p2pr_closed),
            ));
        }
    }

    // zero-squeezing limits: the recorded evidence rows
    let sq0 = SqueezeParam::from_lambda(0.0)?;
    for &t in &T_GRID {
        let omt2 = 1.0 - t * t;
        let p1 = coeffs(StateKind::Pas1, &sq0, t, Cutoff::Auto)?.success_prob();
        rows.push(AuditRow::checked(
            format!("P1 limit l=0 T={t} vs (1-T^2)^2"),
            p1,
            omt2 * omt2,
            rel_err(p1, omt2 * omt2),
            1e-12,
        ));
        let p2 = coeffs(StateKind::Pas2, &sq0, t, Cutoff::Auto)?.success_prob();
        rows.push(AuditRow::checked(
            format!("P2 limit l=0 T={t} vs (1-T^2)^4"),
            p2,
            math::powi(omt2, 4),
            rel_err(p2, math::powi(omt2, 4)),
            1e-12,
        ));
        let p2pr = coeffs(StateKind::Pr2, &sq0, t, Cutoff::Auto)?.success_prob();
        rows.push(AuditRow::checked(
            format!("P_2PR limit l=0 T={t} vs series T^4"),
            p2pr,
            math::powi(t, 4),
            rel_err(p2pr, math::powi(t, 4)),
            1e-12,
        ));
        rows.push(AuditRow::informational(
            format!("P_2PR limit l=0 T={t}: closed form gives 2T^4"),
            closed_form_p2pr(&sq0, t),
            math::powi(t, 4),
            rel_err(closed_form_p2pr(&sq0, t), math::powi(t, 4)),
        ));
    }

    Ok(AuditSection {
        title: String::from("reference probability closed forms vs series norms"),
        tol_note: String::from("relative error; P2 and P_2PR rows are informational"),
        rows,
    })
}

/// Log-negativity closed form against both trace-norm routes.
pub fn log_negativity_audit() -> Result<AuditSection> {
    let mut rows = Vec::new();
    for kind in StateKind::ALL {
        for &lambda in &LAMBDA_GRID {
            let sq = SqueezeParam::from_lambda(lambda)?;
            for &t in &T_GRID {
                let state = coeffs(kind, &sq, t, Cutoff::Auto)?;
                let closed = log_negativity(&state)?;
                let schmidt = math::log2(oracle::pt_trace_norm_schmidt(&state));
                rows.push(AuditRow::checked(
                    format!("E_N {kind} l={lambda} T={t} vs Schmidt singular values"),
                    closed,
                    schmidt,
                    (closed - schmidt).abs(),
                    1e-12,
                ));
                let dense = math::log2(oracle::pt_trace_norm_dense(&state));
                rows.push(AuditRow::checked(
                    format!("E_N {kind} l={lambda} T={t} vs dense eigensolver"),
                    closed,
                    dense,
                    (closed - dense).abs(),
                    1e-8,
                ));
                if kind == StateKind::Tmsv {
                    let analytic = math::log2((1.0 + lambda) / (1.0 - lambda));
                    rows.push(AuditRow::checked(
                        format!("E_N TMSV l={lambda} vs log2((1+l)/(1-l))"),
                        closed,
                        analytic,
                        (closed - analytic).abs(),
                        1e-10,
                    ));
                    break; // T is irrelevant for the TMSV
                }
            }
        }
    }
    Ok(AuditSection {
        title: String::from("log-negativity closed form vs partial-transpose trace norms"),
        tol_note: String::from("absolute error; tol 1e-12 (Schmidt route), 1e-8 (dense route)"),
        rows,
    })
}

/// Diagnosis of the beam-splitter transmissivity convention.
///
/// The heralded coefficient series and P1 pin down the amplitude reading
/// (rotation angle `arccos T`); the alternate power reading (`arccos √T`)
/// produces a 1PAS probability that disagrees with the reference closed form,
/// which is recorded here as the reason it was rejected.
pub fn bs_convention_audit() -> Result<AuditSection> {
    let mut rows = Vec::new();
    for &lambda in &[0.114623, 0.33228] {
        let sq = SqueezeParam::from_lambda(lambda)?;
        for &t in &T_GRID {
            let closed = closed_form_p1(&sq, t);
            let adopted = herald_state_via_oracle(StateKind::Pas1, lambda, t)?.success_prob();
            rows.push(AuditRow::checked(
                format!("adopted amplitude reading: P(1PAS) l={lambda} T={t}"),
                adopted,
                closed,
                rel_err(adopted, closed),
                1e-10,
            ));

            // the rejected reading: amplitude sqrt(T), i.e. power transmissivity T
            let base = tmsv_state(lambda, Cutoff::Auto)?;
            let spec = HeraldSpec::photon_add_subtract(math::sqrt(t))?;
            let rejected = apply_herald(&base, &spec)?.success_prob();
            rows.push(AuditRow::informational(
                format!("rejected power reading: P(1PAS) l={lambda} T={t}"),
                rejected,
                closed,
                rel_err(rejected, closed),
            ));
        }
    }
    Ok(AuditSection {
        title: String::from("beam-splitter transmissivity convention"),
        tol_note: String::from("relative error of P(1PAS) vs reference closed form"),
        rows,
    })
}

/// Closed-form Kraus matrices against the per-block matrix exponential.
pub fn kraus_audit() -> Result<AuditSection> {
    let mut rows = Vec::new();
    for &t in &T_GRID {
        let mut worst = 0.0f64;
        for (m, n) in [(0u8, 0u8), (1, 0), (0, 1), (1, 1)] {
            let fast = crate::fock::bs_kraus(t, m, n, 20)?;
            let slow = oracle::kraus_via_matexp(t, m, n, 20)?;
            for j in 0..=20 {
                for jp in 0..=20 {
                    worst = worst.max((fast.get(jp, j) - slow.get(jp, j)).abs());
                }
            }
        }
        rows.push(AuditRow::checked(
            format!("Kraus closed form vs matrix exponential, T={t}"),
            0.0,
            0.0,
            worst,
            1e-12,
        ));
        rows.push(AuditRow::checked(
            format!("beam-splitter block orthogonality, T={t}"),
            0.0,
            0.0,
            oracle::block_orthogonality_error(t, 12),
            1e-12,
        ));
    }
    Ok(AuditSection {
        title: String::from("beam-splitter matrix elements"),
        tol_note: String::from("max absolute element error, tol 1e-12"),
        rows,
    })
}

/// The full battery, in report order.
pub fn full_report() -> Result<ValidationReport> {
    Ok(ValidationReport {
        sections: alloc::vec![
            kraus_audit()?,
            bs_convention_audit()?,
            oracle_equivalence()?,
            probability_audit()?,
            log_negativity_audit()?,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn battery_passes_on_clean_build() {
        let report = full_report().unwrap();
        for section in &report.sections {
            assert!(section.passed(), "section failed: {}", section.title);
        }
        assert!(report.passed());
    }

    #[test]
    fn mutated_coefficients_are_caught() {
        // tamper with one analytic coefficient and the oracle gate must trip
        let sq = SqueezeParam::from_lambda(0.2).unwrap();
        let clean = coeffs(StateKind::Pas1, &sq, 0.8, Cutoff::Auto).unwrap();
        let mut tampered: Vec<f64> = clean.coeffs().to_vec();
        tampered[1] *= 1.0 + 1e-6;
        let tampered = SchmidtState::from_unnormalized(tampered, clean.success_prob()).unwrap();
        let (coeff_err, _) = compare_to_oracle(&tampered, StateKind::Pas1, 0.2, 0.8).unwrap();
        assert!(coeff_err > 1e-10, "mutation not detected: {coeff_err}");

        let (clean_err, clean_prob) = compare_to_oracle(&clean, StateKind::Pas1, 0.2, 0.8).unwrap();
        assert!(clean_err <= 1e-10 && clean_prob <= 1e-10);
    }

    #[test]
    fn expected_mismatches_are_flagged() {
        let section = probability_audit().unwrap();
        let flagged: Vec<_> = section
            .rows
            .iter()
            .filter(|r| r.expected_mismatch && r.label.contains("P_2PR limit"))
            .collect();
        assert!(!flagged.is_empty());
        // the closed form doubles the series value at l = 0
        for row in flagged {
            assert!((row.implementation / row.reference - 2.0).abs() < 1e-10);
        }
        assert!(section.passed());
    }
}
