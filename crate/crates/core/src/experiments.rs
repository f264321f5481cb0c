//! Parameter sweeps, transmissivity optimization, and feasibility frontiers.
//!
//! Every routine here is deterministic: fixed scan orders, no randomized
//! starts, and golden-section refinement with a fixed shrink factor. Repeated
//! runs with identical configurations produce bit-identical results. Grid
//! cells are independent pure computations, so callers may farm them out to
//! threads as long as results are merged back in grid order.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fock::Cutoff;
use crate::gaussian::{apply_channel, swap, ChannelParams, PreparedCov};
use crate::security::{log_negativity, security_report, SecurityReport};
use crate::states::{coeffs, from_db, StateKind};

/// Protocol-level settings shared by every sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    /// Reverse-reconciliation efficiency γ.
    pub gamma: f64,
    /// Fiber attenuation in dB/km.
    pub attenuation_db_km: f64,
    /// Bob's TMSV squeezing in dB; `None` ties it to Alice's.
    pub bob_squeeze_db: Option<f64>,
}

impl Default for Protocol {
    fn default() -> Self {
        Protocol {
            gamma: 0.95,
            attenuation_db_km: 0.2,
            bob_squeeze_db: None,
        }
    }
}

impl Protocol {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Domain {
                name: "gamma",
                value: self.gamma,
                domain: "(0, 1]",
            });
        }
        if !(self.attenuation_db_km >= 0.0) {
            return Err(Error::Domain {
                name: "attenuation_db_km",
                value: self.attenuation_db_km,
                domain: "[0, inf)",
            });
        }
        Ok(())
    }
}

/// Settings of the one-dimensional transmissivity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TOptimizer {
    /// Number of coarse scan points (at least 50 by default).
    pub coarse_points: usize,
    /// Width of the final golden-section bracket.
    pub refine_tol: f64,
    /// Search domain, strictly inside (0, 1) to avoid degenerate heralds.
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for TOptimizer {
    fn default() -> Self {
        TOptimizer {
            coarse_points: 50,
            refine_tol: 1e-4,
            t_min: 0.01,
            t_max: 0.999,
        }
    }
}

impl TOptimizer {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 2 {
            return Err(Error::Domain {
                name: "coarse_points",
                value: self.coarse_points as f64,
                domain: "[2, inf)",
            });
        }
        if !(self.t_min > 0.0 && self.t_max < 1.0 && self.t_min < self.t_max) {
            return Err(Error::Domain {
                name: "t search domain",
                value: self.t_min,
                domain: "0 < t_min < t_max < 1",
            });
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::Domain {
                name: "refine_tol",
                value: self.refine_tol,
                domain: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Evenly spaced grid including both endpoints (a single point sits at `start`).
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return alloc::vec![start];
    }
    let step = (end - start) / (points - 1) as f64;
    (0..points).map(|i| start + i as f64 * step).collect()
}

/// Full pipeline for one parameter point: resource state, channel, swap,
/// security metrics. `t` is ignored for the TMSV kind.
pub fn skr_point(
    kind: StateKind,
    r_db: f64,
    t: f64,
    length_km: f64,
    xi_total: f64,
    protocol: &Protocol,
) -> Result<SecurityReport> {
    protocol.validate()?;
    let sq = from_db(r_db)?;
    let alice = coeffs(kind, &sq, t, Cutoff::Auto)?;
    let bob_sq = match protocol.bob_squeeze_db {
        Some(db) => from_db(db)?,
        None => sq,
    };
    let (var_b, _) = crate::gaussian::tmsv_cov(bob_sq.lambda);
    let prep = PreparedCov::from_alice_state(&alice, var_b)?;
    let ch = ChannelParams::new(length_km, protocol.attenuation_db_km, xi_total)?;
    let cov = swap(&apply_channel(&prep, &ch))?;
    security_report(&cov, alice.success_prob(), protocol.gamma)
}

/// Result of the transmissivity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TOptimum {
    pub t_star: f64,
    pub report: SecurityReport,
    /// False when the key rate is non-positive over the whole scan; the
    /// least-negative point is returned in that case.
    pub feasible: bool,
}

/// Maximize the key rate over the beam-splitter transmissivity.
///
/// Coarse equidistant scan followed by golden-section refinement around the
/// best coarse point. Ties resolve to the smallest transmissivity, and the
/// returned optimum never falls below any scanned point.
pub fn optimize_t(
    kind: StateKind,
    r_db: f64,
    length_km: f64,
    xi_total: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
) -> Result<TOptimum> {
    if !kind.is_heralded() {
        return Err(Error::NothingToOptimize { kind: kind.name() });
    }
    optimizer.validate()?;
    let eval = |t: f64| skr_point(kind, r_db, t, length_km, xi_total, protocol);

    let grid = linspace(optimizer.t_min, optimizer.t_max, optimizer.coarse_points.max(2));
    let mut best_idx = 0;
    let mut best_t = grid[0];
    let mut best = eval(best_t)?;
    for (i, &t) in grid.iter().enumerate().skip(1) {
        let report = eval(t)?;
        if report.skr > best.skr {
            best_idx = i;
            best_t = t;
            best = report;
        }
    }

    if best.skr <= 0.0 {
        return Ok(TOptimum {
            t_star: best_t,
            report: best,
            feasible: false,
        });
    }

    // golden-section refinement inside the bracket around the coarse argmax
    let mut a = grid[best_idx.saturating_sub(1)];
    let mut b = grid[(best_idx + 1).min(grid.len() - 1)];
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > optimizer.refine_tol {
        if fc.skr > fd.skr {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = eval(d)?;
        }
    }
    let (t_ref, refined) = if fc.skr >= fd.skr { (c, fc) } else { (d, fd) };
    let (t_star, report) = if refined.skr > best.skr {
        (t_ref, refined)
    } else {
        (best_t, best)
    };
    Ok(TOptimum {
        t_star,
        report,
        feasible: true,
    })
}

/// Best achievable key rate at one (L, ξ) point: T-optimized for heralded
/// kinds, direct for the TMSV.
pub fn best_rate(
    kind: StateKind,
    r_db: f64,
    length_km: f64,
    xi_total: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
) -> Result<(Option<f64>, SecurityReport)> {
    if kind.is_heralded() {
        let opt = optimize_t(kind, r_db, length_km, xi_total, protocol, optimizer)?;
        Ok((Some(opt.t_star), opt.report))
    } else {
        let report = skr_point(kind, r_db, 0.5, length_km, xi_total, protocol)?;
        Ok((None, report))
    }
}

/// Positive-key floor used by the frontier finders.
pub const SKR_FLOOR: f64 = 1e-10;
/// Bisection resolution of [`max_distance`] in km.
pub const DISTANCE_RESOLUTION_KM: f64 = 0.1;
/// Bisection resolution of [`max_noise`] in shot-noise units.
pub const NOISE_RESOLUTION: f64 = 1e-5;
const DISTANCE_CAP_KM: f64 = 4096.0;
const NOISE_CAP: f64 = 2.0;

/// Largest distance with an (optimized) key rate above `skr_floor`, to 0.1 km.
pub fn max_distance(
    kind: StateKind,
    r_db: f64,
    xi_total: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
    skr_floor: f64,
) -> Result<f64> {
    let rate = |l: f64| -> Result<f64> {
        Ok(best_rate(kind, r_db, l, xi_total, protocol, optimizer)?.1.skr)
    };
    if rate(0.0)? < skr_floor {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while rate(hi)? >= skr_floor {
        lo = hi;
        hi *= 2.0;
        if hi > DISTANCE_CAP_KM {
            return Ok(DISTANCE_CAP_KM);
        }
    }
    while hi - lo > DISTANCE_RESOLUTION_KM {
        let mid = 0.5 * (lo + hi);
        if rate(mid)? >= skr_floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest total excess noise with an (optimized) key rate above `skr_floor`.
pub fn max_noise(
    kind: StateKind,
    r_db: f64,
    length_km: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
    skr_floor: f64,
) -> Result<f64> {
    let rate = |xi: f64| -> Result<f64> {
        Ok(best_rate(kind, r_db, length_km, xi, protocol, optimizer)?.1.skr)
    };
    if rate(0.0)? < skr_floor {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1e-3;
    while rate(hi)? >= skr_floor {
        lo = hi;
        hi *= 2.0;
        if hi > NOISE_CAP {
            return Ok(NOISE_CAP);
        }
    }
    while hi - lo > NOISE_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if rate(mid)? >= skr_floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Grids and settings of a full sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kinds: Vec<StateKind>,
    pub r_db_grid: Vec<f64>,
    pub l_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    pub protocol: Protocol,
    pub optimizer: TOptimizer,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        self.optimizer.validate()?;
        for (name, grid) in [
            ("kinds", self.kinds.len()),
            ("r_db_grid", self.r_db_grid.len()),
            ("l_grid", self.l_grid.len()),
            ("xi_grid", self.xi_grid.len()),
        ] {
            if grid == 0 {
                return Err(Error::Domain {
                    name,
                    value: 0.0,
                    domain: "non-empty",
                });
            }
        }
        for grid in [&self.r_db_grid, &self.l_grid, &self.xi_grid] {
            if grid.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Domain {
                    name: "grid ordering",
                    value: f64::NAN,
                    domain: "ascending",
                });
            }
        }
        Ok(())
    }
}

/// Security metrics of one successful sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRecord {
    pub skr: f64,
    /// Optimized transmissivity; absent for the TMSV.
    pub t_star: Option<f64>,
    pub success_prob: f64,
    pub i_ab: f64,
    pub chi_be: f64,
    pub v1: f64,
    pub v2: f64,
    pub feasible: bool,
}

/// One sweep cell; failures are recorded in place and never abort the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub kind: StateKind,
    pub r_db: f64,
    pub length_km: f64,
    pub xi: f64,
    pub outcome: core::result::Result<CellRecord, String>,
}

/// Sweep output with the grids echoed for downstream writers.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kinds: Vec<StateKind>,
    pub r_db_grid: Vec<f64>,
    pub l_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

/// Evaluate one sweep cell (pure; safe to call from worker threads).
pub fn evaluate_cell(
    kind: StateKind,
    r_db: f64,
    length_km: f64,
    xi: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
) -> core::result::Result<CellRecord, String> {
    match best_rate(kind, r_db, length_km, xi, protocol, optimizer) {
        Ok((t_star, report)) => Ok(CellRecord {
            skr: report.skr,
            t_star,
            success_prob: report.success_prob,
            i_ab: report.i_ab,
            chi_be: report.chi_be,
            v1: report.v1,
            v2: report.v2,
            feasible: report.skr > 0.0,
        }),
        Err(e) => Err(e.to_string()),
    }
}

/// Fill every `(kind, r_dB, L, ξ)` cell in deterministic nested order.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut cells = Vec::with_capacity(
        config.kinds.len() * config.r_db_grid.len() * config.l_grid.len() * config.xi_grid.len(),
    );
    for &kind in &config.kinds {
        for &r_db in &config.r_db_grid {
            for &l in &config.l_grid {
                for &xi in &config.xi_grid {
                    cells.push(SweepCell {
                        kind,
                        r_db,
                        length_km: l,
                        xi,
                        outcome: evaluate_cell(kind, r_db, l, xi, &config.protocol, &config.optimizer),
                    });
                }
            }
        }
    }
    Ok(SweepResult {
        kinds: config.kinds.clone(),
        r_db_grid: config.r_db_grid.clone(),
        l_grid: config.l_grid.clone(),
        xi_grid: config.xi_grid.clone(),
        cells,
    })
}

/// One `(E_N, P)` sample of a log-negativity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognegSample {
    pub t: f64,
    pub e_n: f64,
    pub success_prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LognegCurve {
    pub kind: StateKind,
    pub samples: Vec<LognegSample>,
}

/// Log-negativity and success probability against transmissivity.
///
/// The TMSV has no transmissivity dependence; its curve repeats the baseline
/// value so writers can treat all kinds uniformly.
pub fn logneg_scan(kinds: &[StateKind], r_db: f64, t_grid: &[f64]) -> Result<Vec<LognegCurve>> {
    if t_grid.is_empty() {
        return Err(Error::Domain {
            name: "t_grid",
            value: 0.0,
            domain: "non-empty",
        });
    }
    let sq = from_db(r_db)?;
    let mut curves = Vec::new();
    for &kind in kinds {
        let samples = if kind.is_heralded() {
            t_grid
                .iter()
                .map(|&t| {
                    let state = coeffs(kind, &sq, t, Cutoff::Auto)?;
                    Ok(LognegSample {
                        t,
                        e_n: log_negativity(&state)?,
                        success_prob: state.success_prob(),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            let state = coeffs(kind, &sq, 0.5, Cutoff::Auto)?;
            let e_n = log_negativity(&state)?;
            t_grid
                .iter()
                .map(|&t| LognegSample {
                    t,
                    e_n,
                    success_prob: 1.0,
                })
                .collect()
        };
        curves.push(LognegCurve { kind, samples });
    }
    Ok(curves)
}

/// Squeezing interval on `r_db_grid` where `kind_a`'s maximum distance
/// overtakes `kind_b`'s. Returns the bracketing grid pair, or `None` if the
/// sign never flips.
pub fn distance_crossover(
    kind_a: StateKind,
    kind_b: StateKind,
    r_db_grid: &[f64],
    xi_total: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
    skr_floor: f64,
) -> Result<Option<(f64, f64)>> {
    let mut prev: Option<(f64, f64)> = None;
    for &r in r_db_grid {
        let da = max_distance(kind_a, r, xi_total, protocol, optimizer, skr_floor)?;
        let db = max_distance(kind_b, r, xi_total, protocol, optimizer, skr_floor)?;
        let diff = da - db;
        if let Some((r_prev, diff_prev)) = prev {
            if diff_prev <= 0.0 && diff > 0.0 {
                return Ok(Some((r_prev, r)));
            }
        }
        prev = Some((r, diff));
    }
    Ok(None)
}

/// Same as [`distance_crossover`] but on the noise-tolerance frontier at a
/// fixed channel length.
pub fn noise_crossover(
    kind_a: StateKind,
    kind_b: StateKind,
    r_db_grid: &[f64],
    length_km: f64,
    protocol: &Protocol,
    optimizer: &TOptimizer,
    skr_floor: f64,
) -> Result<Option<(f64, f64)>> {
    let mut prev: Option<(f64, f64)> = None;
    for &r in r_db_grid {
        let na = max_noise(kind_a, r, length_km, protocol, optimizer, skr_floor)?;
        let nb = max_noise(kind_b, r, length_km, protocol, optimizer, skr_floor)?;
        let diff = na - nb;
        if let Some((r_prev, diff_prev)) = prev {
            if diff_prev <= 0.0 && diff > 0.0 {
                return Ok(Some((r_prev, r)));
            }
        }
        prev = Some((r, diff));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.0, 5);
        assert_eq!(g, alloc::vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 9.0, 1), alloc::vec![2.0]);
    }

    #[test]
    fn tmsv_cannot_be_optimized() {
        let err = optimize_t(
            StateKind::Tmsv,
            1.0,
            0.0,
            0.0,
            &Protocol::default(),
            &TOptimizer::default(),
        );
        assert!(matches!(err, Err(Error::NothingToOptimize { .. })));
    }

    #[test]
    fn optimizer_beats_fixed_transmissivities() {
        let proto = Protocol::default();
        let opt = TOptimizer::default();
        let best = optimize_t(StateKind::Pas1, 1.0, 10.0, 0.004, &proto, &opt).unwrap();
        assert!(best.feasible);
        for t in [0.5, 0.9] {
            let fixed = skr_point(StateKind::Pas1, 1.0, t, 10.0, 0.004, &proto).unwrap();
            assert!(best.report.skr >= fixed.skr);
        }
    }

    #[test]
    fn optimizer_is_reproducible() {
        let proto = Protocol::default();
        let opt = TOptimizer::default();
        let a = optimize_t(StateKind::Pas1, 2.0, 20.0, 0.004, &proto, &opt).unwrap();
        let b = optimize_t(StateKind::Pas1, 2.0, 20.0, 0.004, &proto, &opt).unwrap();
        assert_eq!(a.t_star.to_bits(), b.t_star.to_bits());
        assert_eq!(a.report.skr.to_bits(), b.report.skr.to_bits());
    }

    #[test]
    fn no_squeezing_means_no_distance() {
        let proto = Protocol::default();
        let opt = TOptimizer::default();
        for kind in StateKind::ALL {
            let d = max_distance(kind, 0.0, 0.004, &proto, &opt, SKR_FLOOR).unwrap();
            assert_eq!(d, 0.0, "kind {kind}");
        }
    }

    #[test]
    fn degenerate_sweep_reduces_to_single_cell() {
        let config = SweepConfig {
            kinds: alloc::vec![StateKind::Pas1],
            r_db_grid: alloc::vec![1.0],
            l_grid: alloc::vec![5.0],
            xi_grid: alloc::vec![0.004],
            protocol: Protocol::default(),
            optimizer: TOptimizer::default(),
        };
        let result = sweep(&config).unwrap();
        assert_eq!(result.cells.len(), 1);
        let cell = result.cells[0].outcome.as_ref().unwrap();
        let direct = optimize_t(StateKind::Pas1, 1.0, 5.0, 0.004, &config.protocol, &config.optimizer)
            .unwrap();
        assert_eq!(cell.skr.to_bits(), direct.report.skr.to_bits());
        assert_eq!(cell.t_star, Some(direct.t_star));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let mut config = SweepConfig {
            kinds: alloc::vec![StateKind::Tmsv],
            r_db_grid: alloc::vec![1.0, 0.5],
            l_grid: alloc::vec![0.0],
            xi_grid: alloc::vec![0.0],
            protocol: Protocol::default(),
            optimizer: TOptimizer::default(),
        };
        assert!(sweep(&config).is_err());
        config.r_db_grid = alloc::vec![];
        assert!(sweep(&config).is_err());
    }

    #[test]
    fn logneg_scan_has_tmsv_baseline() {
        let curves = logneg_scan(&StateKind::ALL, 1.0, &linspace(0.1, 0.9, 9)).unwrap();
        let tmsv = curves.iter().find(|c| c.kind == StateKind::Tmsv).unwrap();
        let e2r = 10f64.powf(0.1);
        let want = ((e2r - 1.0) / (e2r + 1.0) + 1.0).log2() - (1.0 - (e2r - 1.0) / (e2r + 1.0)).log2();
        for s in &tmsv.samples {
            assert!((s.e_n - want).abs() < 1e-10);
            assert_eq!(s.success_prob, 1.0);
        }
    }
}
