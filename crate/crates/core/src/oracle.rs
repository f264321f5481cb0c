//! Brute-force reference implementations used only for validation.
//!
//! Nothing in the production pipeline calls into this module; the fast closed
//! forms elsewhere are checked against these dense computations by the test
//! suite and by the `verify` command of the CLI.
//!
//! Three oracles live here:
//!
//! - beam-splitter matrix elements obtained by exponentiating the truncated
//!   two-mode generator block by block (photon number is conserved, so each
//!   block of fixed total is a finite rotation that can be exponentiated
//!   exactly to rounding),
//! - covariance moments obtained from dense quadrature operators applied to
//!   the two-mode state vector,
//! - the trace norm of the partially transposed density operator, both via
//!   enumeration of the Schmidt singular values `{|cᵢcⱼ|}` and via a dense
//!   symmetric eigensolver that knows nothing about the Schmidt structure.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fock::{FockMatrix, SchmidtState};
use crate::math;

/// exp(G) for a small dense matrix, by scaling-and-squaring with a Taylor
/// series. Good to rounding for the skew-symmetric generators used here.
fn matexp(g: &[f64], dim: usize) -> Vec<f64> {
    let norm: f64 = (0..dim)
        .map(|i| (0..dim).map(|j| g[i * dim + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > 0.5 {
        scaled *= 0.5;
        squarings += 1;
    }
    let scale = 1.0 / math::powi(2.0, squarings as i32);
    let a: Vec<f64> = g.iter().map(|x| x * scale).collect();

    // exp(A) = sum A^k / k!, truncated once terms vanish
    let mut result = vec![0.0; dim * dim];
    for i in 0..dim {
        result[i * dim + i] = 1.0;
    }
    let mut term = result.clone();
    for k in 1..=24 {
        let mut next = vec![0.0; dim * dim];
        for i in 0..dim {
            for l in 0..dim {
                let t = term[i * dim + l];
                if t == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    next[i * dim + j] += t * a[l * dim + j];
                }
            }
        }
        let inv_k = 1.0 / k as f64;
        for x in next.iter_mut() {
            *x *= inv_k;
        }
        for (r, t) in result.iter_mut().zip(next.iter()) {
            *r += t;
        }
        term = next;
    }
    for _ in 0..squarings {
        let mut sq = vec![0.0; dim * dim];
        for i in 0..dim {
            for l in 0..dim {
                let t = result[i * dim + l];
                if t == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    sq[i * dim + j] += t * result[l * dim + j];
                }
            }
        }
        result = sq;
    }
    result
}

/// Rotation block of the beam splitter on the subspace of `total` photons.
///
/// Basis `|j, total−j⟩` for `j = 0..=total`; the generator is
/// `θ(b†c − bc†)` with `θ = arccos(t)` and `t` the amplitude transmissivity.
pub fn bs_block(t: f64, total: usize) -> Vec<f64> {
    let theta = math::acos(t);
    let dim = total + 1;
    let mut g = vec![0.0; dim * dim];
    for j in 0..total {
        let coupling = theta * math::sqrt(((j + 1) * (total - j)) as f64);
        g[(j + 1) * dim + j] = coupling;
        g[j * dim + (j + 1)] = -coupling;
    }
    matexp(&g, dim)
}

/// `⟨j', n| U |j, m⟩` assembled from the per-block matrix exponentials.
///
/// Independent route to the closed-form [`crate::fock::bs_kraus`]; the same
/// amplitude-transmissivity convention applies.
pub fn kraus_via_matexp(t: f64, inject: u8, detect: u8, cutoff: usize) -> Result<FockMatrix> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain {
            name: "transmissivity",
            value: t,
            domain: "(0, 1)",
        });
    }
    let m = inject as usize;
    let n = detect as usize;
    let dim = cutoff + 1;
    let mut out = FockMatrix::zeros(dim);
    let mut blocks: Vec<Option<Vec<f64>>> = vec![None; cutoff + m + 1];
    for j in 0..dim {
        let total = j + m;
        let jp = match (j + m).checked_sub(n) {
            Some(v) if v < dim => v,
            _ => continue,
        };
        let block = blocks[total].get_or_insert_with(|| bs_block(t, total));
        out.set(jp, j, block[jp * (total + 1) + j]);
    }
    Ok(out)
}

/// Largest deviation of `UᵀU` from the identity over blocks up to `max_total`.
pub fn block_orthogonality_error(t: f64, max_total: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for total in 0..=max_total {
        let dim = total + 1;
        let u = bs_block(t, total);
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim).map(|k| u[k * dim + i] * u[k * dim + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
    }
    worst
}

/// Covariance moments via dense quadrature operators on the two-mode space.
///
/// Returns `(var, corr_q, corr_p)` where `corr_p` should equal `−corr_q` for
/// Schmidt-form states (the `Z` block structure).
pub fn covariance_dense(state: &SchmidtState) -> (f64, f64, f64) {
    let c = state.coeffs();
    let d = c.len() + 2; // pad so q cannot push amplitude out of the space
    let idx = |a: usize, b: usize| a * d + b;
    let mut psi = vec![0.0; d * d];
    for (n, &cn) in c.iter().enumerate() {
        psi[idx(n, n)] = cn;
    }

    // q|n> = sqrt(n)|n-1> + sqrt(n+1)|n+1>   (vacuum variance 1 convention)
    // r|n> = -sqrt(n)|n-1> + sqrt(n+1)|n+1>, p = i r up to the sign handled below
    let apply_mode_a = |v: &[f64], lower_sign: f64| -> Vec<f64> {
        let mut out = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                let amp = v[idx(a, b)];
                if amp == 0.0 {
                    continue;
                }
                if a > 0 {
                    out[idx(a - 1, b)] += lower_sign * math::sqrt(a as f64) * amp;
                }
                if a + 1 < d {
                    out[idx(a + 1, b)] += math::sqrt((a + 1) as f64) * amp;
                }
            }
        }
        out
    };
    let apply_mode_b = |v: &[f64], lower_sign: f64| -> Vec<f64> {
        let mut out = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                let amp = v[idx(a, b)];
                if amp == 0.0 {
                    continue;
                }
                if b > 0 {
                    out[idx(a, b - 1)] += lower_sign * math::sqrt(b as f64) * amp;
                }
                if b + 1 < d {
                    out[idx(a, b + 1)] += math::sqrt((b + 1) as f64) * amp;
                }
            }
        }
        out
    };
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(x, y)| x * y).sum() };

    let qa = apply_mode_a(&psi, 1.0);
    let qb = apply_mode_b(&psi, 1.0);
    let ra = apply_mode_a(&psi, -1.0);
    let rb = apply_mode_b(&psi, -1.0);

    let var_q = dot(&qa, &qa);
    let corr_q = dot(&qa, &qb);
    // <p_a p_b> = -<psi| r_a r_b |psi> with r = a† - a; r is anti-Hermitian,
    // so the inner product <r_a psi | r_b psi> already carries the minus sign
    let corr_p = dot(&ra, &rb);
    (var_q, corr_q, corr_p)
}

/// Trace norm of the partial transpose from the Schmidt singular values,
/// `Σᵢⱼ |cᵢ cⱼ|`, without using the algebraic shortcut `(Σ|c|)²`.
pub fn pt_trace_norm_schmidt(state: &SchmidtState) -> f64 {
    let c = state.coeffs();
    let mut acc = 0.0;
    for ci in c {
        for cj in c {
            acc += (ci * cj).abs();
        }
    }
    acc
}

/// Trace norm of the dense partially transposed density operator.
///
/// Builds the full `(K+1)² × (K+1)²` matrix and sums the absolute eigenvalues
/// from a dense symmetric eigensolver; `K` is reduced below the state's cutoff
/// only as far as the first-power tail allows (relative weight `≤ 1e−10`).
pub fn pt_trace_norm_dense(state: &SchmidtState) -> f64 {
    let c = state.coeffs();
    let abs_total: f64 = c.iter().map(|x| x.abs()).sum();
    let mut k = c.len() - 1;
    let mut tail = 0.0;
    while k > 8 {
        let next_tail = tail + c[k].abs();
        if next_tail > 1e-10 * abs_total {
            break;
        }
        tail = next_tail;
        k -= 1;
    }
    let d = k + 1;
    let dim = d * d;
    let mut rho_pt = vec![0.0; dim * dim];
    for i in 0..d {
        for j in 0..d {
            rho_pt[(i * d + j) * dim + (j * d + i)] = c[i] * c[j];
        }
    }
    let eigs = symmetric_eigenvalues(&mut rho_pt, dim);
    eigs.iter().map(|x| x.abs()).sum()
}

/// Eigenvalues of a dense symmetric matrix (destroys the input).
///
/// Householder tridiagonalization followed by implicit-shift QL iteration.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(a, n, &mut d, &mut e);
    ql_implicit(&mut d, &mut e);
    d
}

fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -math::sqrt(h) } else { math::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (2.0 * h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

fn ql_implicit(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let hypot = |x: f64, y: f64| math::sqrt(x * x + y * y);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut cth) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = cth * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                cth = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cth * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cth * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{bs_kraus, tmsv_state, Cutoff};

    #[test]
    fn eigensolver_known_spectrum() {
        // tridiagonal Toeplitz [2, -1]: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 24;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let mut eigs = symmetric_eigenvalues(&mut a, n);
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (k, val) in (1..=n).zip(eigs.iter()) {
            let want = 2.0 - 2.0 * (k as f64 * core::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((val - want).abs() < 1e-12, "eig {k}: {val} vs {want}");
        }
    }

    #[test]
    fn matexp_rotation() {
        // 2x2 skew block must exponentiate to a rotation
        let th = 1.1;
        let g = vec![0.0, -th, th, 0.0];
        let u = matexp(&g, 2);
        assert!((u[0] - th.cos()).abs() < 1e-15);
        assert!((u[1] + th.sin()).abs() < 1e-15);
        assert!((u[2] - th.sin()).abs() < 1e-15);
        assert!((u[3] - th.cos()).abs() < 1e-15);
    }

    #[test]
    fn kraus_closed_form_matches_matexp() {
        for t in [0.3, 0.6, 0.9] {
            for (m, n) in [(0u8, 0u8), (1, 0), (0, 1), (1, 1)] {
                let fast = bs_kraus(t, m, n, 24).unwrap();
                let slow = kraus_via_matexp(t, m, n, 24).unwrap();
                for j in 0..=24 {
                    for jp in 0..=24 {
                        assert!(
                            (fast.get(jp, j) - slow.get(jp, j)).abs() < 1e-12,
                            "K[{jp},{j}] mismatch at t={t} m={m} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_are_orthogonal() {
        for t in [0.2, 0.5, 0.8] {
            assert!(block_orthogonality_error(t, 12) < 1e-12);
        }
    }

    #[test]
    fn dense_covariance_matches_sums() {
        let st = tmsv_state(0.5, Cutoff::Auto).unwrap();
        let (var, corr_q, corr_p) = covariance_dense(&st);
        assert!((var - 5.0 / 3.0).abs() < 1e-10);
        assert!((corr_q - 4.0 / 3.0).abs() < 1e-10);
        assert!((corr_p + 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn pt_trace_norm_routes_agree() {
        let st = tmsv_state(0.33228, Cutoff::Auto).unwrap();
        let schmidt = pt_trace_norm_schmidt(&st);
        let dense = pt_trace_norm_dense(&st);
        assert!(((schmidt - dense) / schmidt).abs() < 1e-9);
        // geometric series: (Sum |c|)^2 = (1+l)/(1-l)
        let want = (1.0 + 0.33228) / (1.0 - 0.33228);
        assert!((schmidt - want).abs() < 1e-9);
    }
}
