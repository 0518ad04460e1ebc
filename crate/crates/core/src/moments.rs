//! Moments μ_n = ∫₀^∞ (1/4)e^{−t/2}Ψ(t)tⁿ dt, Li coefficients, the linear
//! maps between the two sequences, the recurrence through the Taylor
//! coefficients a_j of ξ(1/(1−w)), and Hankel determinants of the moments.

use crate::dd::{KahanSum, DD};
use crate::error::{Error, Result};
use crate::mangoldt::{digamma_quarter, MangoldtTable};
use crate::quad::{adaptive_vec, QuadOptions};
use crate::specfun::{self, SpecFunAccuracy, LN_PI};
use crate::zerotable::{li_from_zeros, sum_inv_gamma_sq, TailModel, ZeroTable};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// sup |Ψ| < 0.094, used to bound the moment integrand beyond the cutoff.
pub const PSI_SUP: f64 = 0.094;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    /// Integration of Ψ against the weight (prime side below the table
    /// height, zero side above it).
    Quadrature,
    FromLi,
}

#[derive(Clone, Debug)]
pub struct MomentSequence {
    /// μ₀..μ_N.
    pub values: Vec<f64>,
    pub method: MomentMethod,
    pub est_errors: Vec<f64>,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiMethod {
    ZeroSum,
    FromMoments,
    Recurrence,
}

#[derive(Clone, Debug)]
pub struct LiSequence {
    /// λ₁..λ_M; `values[0]` is λ₁.
    pub values: Vec<f64>,
    pub method: LiMethod,
}

impl LiSequence {
    /// λ_n for n ≥ 1.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }
}

/// Settings for [`moment_sequence`].
#[derive(Clone, Copy, Debug)]
pub struct MomentConfig {
    /// Upper end of the integration; beyond it |Ψ| < 0.094 bounds the rest.
    pub t_cut: f64,
    pub quad: QuadOptions,
    pub acc: SpecFunAccuracy,
}

impl Default for MomentConfig {
    fn default() -> Self {
        MomentConfig {
            t_cut: 200.0,
            quad: QuadOptions { abs_tol: 1e-14, rel_tol: 1e-14, max_intervals: 4000 },
            acc: SpecFunAccuracy::default(),
        }
    }
}

/// g_j(x) for j = 0..=m with ∫_x^∞ e^{−t/2}t^j dt = e^{−x/2}g_j(x):
/// g₀ = 2, g_j = 2x^j + 2j·g_{j−1}. All terms are positive.
fn upper_poly(x: f64, m: usize, out: &mut [f64]) {
    let mut p = 1.0;
    out[0] = 2.0;
    for j in 1..=m {
        p *= x;
        out[j] = 2.0 * p + 2.0 * j as f64 * out[j - 1];
    }
}

/// ∫_x^∞ e^{−t/2}t^j dt for j = 0..=m.
fn upper_half(x: f64, m: usize) -> Vec<f64> {
    let mut g = vec![0.0; m + 1];
    upper_poly(x, m, &mut g);
    let e = (-0.5 * x).exp();
    g.iter().map(|v| v * e).collect()
}

/// ∫_0^T e^{−ct}t^j dt for j = 0..=m, as j!/c^{j+1} minus the upper part.
fn lower_incomplete(c: f64, t: f64, m: usize) -> Vec<DD> {
    let e = (-c * t).exp();
    let mut out = Vec::with_capacity(m + 1);
    let mut full = DD::from_f64(1.0 / c);
    let mut upper = e / c;
    let mut p = 1.0;
    out.push(full - upper);
    for j in 1..=m {
        p *= t;
        full = full * (j as f64 / c);
        upper = (p * e + j as f64 * upper) / c;
        out.push(full - upper);
    }
    out
}

/// ∫_x^∞ e^{−ct}t^j dt for complex c with Re c > 0, j = 0..=m.
fn upper_complex(c: Complex64, x: f64, m: usize) -> Vec<Complex64> {
    let e = (-c * x).exp();
    let inv = c.inv();
    let mut out = Vec::with_capacity(m + 1);
    let mut v = e * inv;
    let mut p = 1.0;
    out.push(v);
    for j in 1..=m {
        p *= x;
        v = (e * p + v * j as f64) * inv;
        out.push(v);
    }
    out
}

/// μ₀..μ_{n_max}.
///
/// On [0, T₀] with T₀ = min(t_cut, log X) the prime side is integrated
/// piece by piece: the exponential and linear terms in closed form, the
/// prime-power sum exactly (each term is a truncated power times e^{−t/2}),
/// and the Lerch term by adaptive Gauss-Kronrod. On [T₀, t_cut] Ψ is
/// 2Σγ⁻² − 2Σcos(γt)/γ² with Σγ⁻² completed exactly, integrated in closed
/// form per ordinate. Beyond t_cut the bound |Ψ| < 0.094 gives `est_errors`.
pub fn moment_sequence(
    n_max: usize,
    table: &MangoldtTable,
    zeros: &ZeroTable,
    cfg: &MomentConfig,
) -> Result<MomentSequence> {
    if n_max > 40 {
        return Err(Error::domain("moment_sequence", format!("n_max = {n_max} above 40")));
    }
    if !(cfg.t_cut >= 40.0) {
        return Err(Error::domain("moment_sequence", format!("t_cut = {} below 40", cfg.t_cut)));
    }
    if zeros.is_empty() {
        return Err(Error::Insufficient { op: "moment_sequence", needed: 1, have: 0 });
    }
    let m = n_max;
    let t0 = cfg.t_cut.min(table.t_max());
    let mut total: Vec<DD> = vec![DD::ZERO; m + 1];
    let mut err = vec![0.0; m + 1];

    // (1/4)·4(e^{t/2} + e^{−t/2} − 2): ∫t^n + ∫e^{−t}t^n − 2∫e^{−t/2}t^n
    let e1 = lower_incomplete(1.0, t0, m + 1);
    let eh = lower_incomplete(0.5, t0, m + 1);
    let mut pw = DD::from_f64(t0);
    for n in 0..=m {
        let poly = pw / (n as f64 + 1.0);
        total[n] += poly + e1[n] - eh[n] * 2.0;
        err[n] += 4.0 * f64::EPSILON * poly.to_f64().abs();
        pw = pw * t0;
    }

    // linear term (t/2)(ψ(1/4) − log π)
    let lin = 0.125 * (digamma_quarter() - LN_PI);
    for n in 0..=m {
        total[n] += eh[n + 1] * lin;
    }

    // −(1/4)Σ Λ(n)/√n ∫_{log n}^{T₀} e^{−t/2}t^j(t − log n) dt
    let k = table.count_upto(t0);
    let mut acc_h: Vec<KahanSum> = vec![KahanSum::new(); m + 1];
    let mut g = vec![0.0; m + 2];
    for (i, &pp) in table.prime_powers()[..k].iter().enumerate() {
        let nf = pp as f64;
        let l = nf.ln();
        let w = table.lambda_at(i) / nf;
        upper_poly(l, m + 1, &mut g);
        for j in 0..=m {
            acc_h[j].add(w * (g[j + 1] - l * g[j]));
        }
    }
    let (s0, s1) = table.sums(k, 0.5);
    let gt = upper_half(t0, m + 1);
    for j in 0..=m {
        let at_end = s0 * gt[j + 1] - s1 * gt[j];
        let part = DD::from_f64(acc_h[j].value()) - at_end;
        total[j] = total[j] - part * 0.25;
        err[j] += 8.0 * f64::EPSILON * acc_h[j].value().abs();
    }

    // (1/16)∫ e^{−t/2}t^j (C − e^{−t/2}Φ(e^{−2t}, 2, 1/4))
    let c = specfun::c_const();
    let acc = cfg.acc;
    let mut lerch_err: Option<Error> = None;
    let mut breaks = vec![0.0, 0.05, 0.25, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0];
    breaks.retain(|&b| b < t0);
    breaks.push(t0);
    let r = adaptive_vec(
        m + 1,
        |t, out| {
            let v = if t == 0.0 {
                0.0
            } else {
                match specfun::lerch_phi2((-2.0 * t).exp(), 0.25, &acc) {
                    Ok(l) => c - (-0.5 * t).exp() * l.value,
                    Err(e) => {
                        lerch_err.get_or_insert(e);
                        0.0
                    }
                }
            };
            let mut p = (-0.5 * t).exp() * v / 16.0;
            for o in out.iter_mut() {
                *o = p;
                p *= t;
            }
        },
        &breaks,
        cfg.quad,
    )?;
    if let Some(e) = lerch_err {
        return Err(e);
    }
    for j in 0..=m {
        total[j] += r.values[j];
        err[j] += r.errors[j];
    }

    // zero side on [T₀, t_cut]
    if cfg.t_cut > t0 {
        let s2 = sum_inv_gamma_sq(zeros);
        let ga = upper_half(t0, m);
        let gb = upper_half(cfg.t_cut, m);
        let mut zs: Vec<KahanSum> = vec![KahanSum::new(); m + 1];
        for &gam in zeros.ordinates.iter().rev() {
            let cz = Complex64::new(0.5, -gam);
            let ja = upper_complex(cz, t0, m);
            let jb = upper_complex(cz, cfg.t_cut, m);
            let inv2 = 1.0 / (gam * gam);
            for j in 0..=m {
                zs[j].add(inv2 * (ja[j] - jb[j]).re);
            }
        }
        for j in 0..=m {
            total[j] += 0.5 * s2 * (ga[j] - gb[j]) - 0.5 * zs[j].value();
            // omitted ordinates: Σ_{γ>T} γ⁻²|J| with |J| ≲ 2T₀^j e^{−T₀/2}/γ
            err[j] += crate::zerotable::tail_sigma2(zeros.cutoff().max(100.0)).unwrap_or(0.0) * ga[j] / zeros.cutoff().max(1.0);
        }
    }

    // beyond t_cut
    let gc = upper_half(cfg.t_cut, m);
    for j in 0..=m {
        err[j] += 0.25 * PSI_SUP * gc[j];
    }
    Ok(MomentSequence { values: total.iter().map(|v| v.to_f64()).collect(), method: MomentMethod::Quadrature, est_errors: err })
}

/// μ_n alone; see [`moment_sequence`].
pub fn moment_mu(n: usize, table: &MangoldtTable, zeros: &ZeroTable, cfg: &MomentConfig) -> Result<(f64, f64)> {
    let s = moment_sequence(n, table, zeros, cfg)?;
    Ok((s.values[n], s.est_errors[n]))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as f64
}

/// Coefficient of μ_k in λ_n:
/// n!(−1)^k ((k − (4n−1)/2)² + 2n + 7/4)/(k!(k+3)!(n−k−1)!).
/// For n ≤ 3 this reproduces λ₁ = μ₀, λ₂ = 6μ₀ − μ₁, λ₃ = 19μ₀ − 7μ₁ + μ₂/2.
pub fn li_coefficient(n: usize, k: usize) -> f64 {
    if n == 0 || k >= n {
        return 0.0;
    }
    let q = (2 * k) as f64 - (4 * n) as f64 + 1.0;
    let poly = (q * q + (8 * n) as f64 + 7.0) / 4.0;
    // n!/(k!(n−k−1)!) = n·C(n−1, k)
    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
    s * n as f64 * binom(n - 1, k) * poly / factorial(k + 3)
}

/// Coefficient of λ_j in μ_n: n!(−1)^{j+1} Σ_{k=1}^{n−j+2} k 2^{k−1} C(n−k+2, j).
pub fn moment_coefficient(n: usize, j: usize) -> f64 {
    if j == 0 || j > n + 1 {
        return 0.0;
    }
    let mut inner = 0.0;
    for k in 1..=(n + 2 - j) {
        inner += k as f64 * 2f64.powi(k as i32 - 1) * binom(n + 2 - k, j);
    }
    let s = if j % 2 == 1 { 1.0 } else { -1.0 };
    s * factorial(n) * inner
}

/// λ_n from μ₀..μ_{n−1}.
pub fn li_from_moments(mu: &MomentSequence, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("li_from_moments", "λ is indexed from 1"));
    }
    if mu.len() < n {
        return Err(Error::Insufficient { op: "li_from_moments", needed: n, have: mu.len() });
    }
    let mut s = KahanSum::new();
    for k in 0..n {
        s.add(li_coefficient(n, k) * mu.values[k]);
    }
    Ok(s.value())
}

/// λ₁..λ_{N+1} from μ₀..μ_N.
pub fn li_sequence_from_moments(mu: &MomentSequence) -> Result<LiSequence> {
    let values = (1..=mu.len()).map(|n| li_from_moments(mu, n)).collect::<Result<Vec<_>>>()?;
    Ok(LiSequence { values, method: LiMethod::FromMoments })
}

/// λ₁..λ_{n_max} from the zeros, each including its density tail.
pub fn li_sequence_from_zeros(n_max: usize, zeros: &ZeroTable, tail: &TailModel) -> Result<LiSequence> {
    let values = (1..=n_max).map(|n| li_from_zeros(n, zeros, tail).map(|z| z.value)).collect::<Result<Vec<_>>>()?;
    Ok(LiSequence { values, method: LiMethod::ZeroSum })
}

/// μ_n from λ₁..λ_{n+1}.
pub fn moments_from_li(li: &LiSequence, n: usize) -> Result<f64> {
    if li.values.len() < n + 1 {
        return Err(Error::Insufficient { op: "moments_from_li", needed: n + 1, have: li.values.len() });
    }
    let mut s = KahanSum::new();
    for j in 1..=n + 1 {
        s.add(moment_coefficient(n, j) * li.values[j - 1]);
    }
    Ok(s.value())
}

/// μ₀..μ_{M−1} from λ₁..λ_M.
pub fn moment_sequence_from_li(li: &LiSequence) -> Result<MomentSequence> {
    let n = li.values.len();
    let values = (0..n).map(|k| moments_from_li(li, k)).collect::<Result<Vec<_>>>()?;
    Ok(MomentSequence { est_errors: vec![0.0; n], values, method: MomentMethod::FromLi })
}

/// L maps (μ₀..μ_N) to (λ₁..λ_{N+1}); M maps back.
#[derive(Clone, Debug)]
pub struct TransformMatrices {
    pub l: DMatrix<f64>,
    pub m: DMatrix<f64>,
    /// max |(LM − I)_{ij}| / (|L||M|)_{ij}, checked at construction.
    pub roundtrip_err: f64,
}

/// Builds both matrices for N ≤ 64 and verifies that they are inverse.
pub fn transform_matrices(n: usize) -> Result<TransformMatrices> {
    if n > 64 {
        return Err(Error::domain("transform_matrices", format!("N = {n} above 64")));
    }
    let d = n + 1;
    let l = DMatrix::from_fn(d, d, |i, k| li_coefficient(i + 1, k));
    let m = DMatrix::from_fn(d, d, |i, j| moment_coefficient(i, j + 1));
    let mut worst: f64 = 0.0;
    for (p, q) in [(&l, &m), (&m, &l)] {
        let prod = p * q;
        let scale = p.abs() * q.abs();
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                let s = scale[(i, j)].max(1.0);
                worst = worst.max((prod[(i, j)] - target).abs() / s);
            }
        }
    }
    if worst > 1e-12 {
        return Err(Error::numerical("transform_matrices", format!("round trip error {worst:e}")));
    }
    Ok(TransformMatrices { l, m, roundtrip_err: worst })
}

/// a₁..a_{j_max} from λ₁..λ_{j_max} by
/// a_{n+1} = (λ_{n+1} + Σ_{j=1}^{n} a_{n−j+1}λ_j)/(n+1).
pub fn a_from_li(li: &LiSequence, j_max: usize) -> Result<Vec<f64>> {
    if li.values.len() < j_max {
        return Err(Error::Insufficient { op: "a_from_li", needed: j_max, have: li.values.len() });
    }
    let lam = &li.values;
    let mut a: Vec<f64> = Vec::with_capacity(j_max);
    for n in 0..j_max {
        let mut s = KahanSum::new();
        s.add(lam[n]);
        for j in 1..=n {
            s.add(a[n - j] * lam[j - 1]);
        }
        a.push(s.value() / (n + 1) as f64);
    }
    Ok(a)
}

/// λ₁..λ_M back from a₁..a_M by λ_{n+1} = (n+1)a_{n+1} − Σ a_{n−j+1}λ_j.
pub fn li_from_a(a: &[f64]) -> LiSequence {
    let mut lam: Vec<f64> = Vec::with_capacity(a.len());
    for n in 0..a.len() {
        let mut s = KahanSum::new();
        s.add((n + 1) as f64 * a[n]);
        for j in 1..=n {
            s.add(-a[n - j] * lam[j - 1]);
        }
        lam.push(s.value());
    }
    LiSequence { values: lam, method: LiMethod::Recurrence }
}

/// b_{n,k} for 0 ≤ k ≤ n, with `a[i]` = a_{i+1}.
pub fn b_coeff(n: usize, k: usize, a: &[f64]) -> Result<f64> {
    if k > n {
        return Err(Error::domain("b_coeff", format!("k = {k} above n = {n}")));
    }
    if n > k && a.len() < n - k {
        return Err(Error::Insufficient { op: "b_coeff", needed: n - k, have: a.len() });
    }
    let q = (2 * k) as f64 - (4 * n + 3) as f64;
    let head = factorial(n + 1) / factorial(n - k) * (q * q / 4.0 + (2 * n) as f64 + 3.75);
    let mut s = KahanSum::new();
    s.add(head);
    for j in k + 1..=n {
        let d = (2 * j - k) as f64;
        s.add(factorial(j) / factorial(j - k - 1) * (d * d + (k + 2) as f64) * a[n - j]);
    }
    Ok(factorial(n) / (factorial(k) * factorial(k + 3)) * s.value())
}

/// (−1)^n μ_n − [(n+1)! a_{n+1} − Σ_{k<n}(−1)^k b_{n,k} μ_k].
pub fn recurrence_residual(n: usize, mu: &[f64], a: &[f64]) -> Result<f64> {
    if mu.len() <= n || a.len() <= n {
        return Err(Error::Insufficient { op: "recurrence_residual", needed: n + 1, have: mu.len().min(a.len()) });
    }
    let mut s = KahanSum::new();
    s.add(factorial(n + 1) * a[n]);
    for (k, &m) in mu.iter().enumerate().take(n) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s.add(-sign * b_coeff(n, k, a)? * m);
    }
    let lhs = if n % 2 == 0 { mu[n] } else { -mu[n] };
    Ok(lhs - s.value())
}

/// Determinant of a Hankel matrix of moments.
#[derive(Clone, Copy, Debug)]
pub struct HankelReport {
    pub det: f64,
    /// First-order bound Σ|∂det/∂μ_k|·err_k from the moment errors.
    pub err: f64,
    /// log det from a Cholesky factorization, when it succeeds.
    pub log_det: Option<f64>,
    /// The matrix failed to factor as positive definite. With moments from
    /// quadrature this points to accumulated moment error.
    pub indefinite: bool,
}

impl HankelReport {
    /// det − err > 0.
    pub fn certainly_positive(&self) -> bool {
        self.det - self.err > 0.0
    }
}

/// det[μ_{i+j}] (or det[μ_{i+j+1}] when `shifted`) of size n+1, by
/// Gaussian elimination with partial pivoting in double-double.
pub fn hankel_det(mu: &MomentSequence, n: usize, shifted: bool) -> Result<HankelReport> {
    let off = usize::from(shifted);
    let need = 2 * n + 1 + off;
    if mu.len() < need {
        return Err(Error::Insufficient { op: "hankel_det", needed: need, have: mu.len() });
    }
    let d = n + 1;
    let mut a: Vec<Vec<DD>> = (0..d).map(|i| (0..d).map(|j| DD::from_f64(mu.values[i + j + off])).collect()).collect();
    let mut det = DD::ONE;
    for c in 0..d {
        let p = (c..d).max_by(|&x, &y| a[x][c].hi.abs().total_cmp(&a[y][c].hi.abs())).unwrap();
        if a[p][c].hi == 0.0 {
            det = DD::ZERO;
            break;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c];
        for r in c + 1..d {
            let f = a[r][c] / a[c][c];
            for j in c..d {
                let v = a[c][j] * f;
                a[r][j] = a[r][j] - v;
            }
        }
    }
    let det = det.to_f64();

    let h = DMatrix::from_fn(d, d, |i, j| mu.values[i + j + off]);
    // ∂det/∂H_ij = det·(H⁻¹)_ji
    let err = match h.clone().try_inverse() {
        Some(inv) => {
            let mut e = 0.0;
            for i in 0..d {
                for j in 0..d {
                    e += (det * inv[(j, i)]).abs() * mu.est_errors.get(i + j + off).copied().unwrap_or(0.0);
                }
            }
            e
        }
        None => f64::INFINITY,
    };
    let chol = h.cholesky();
    let log_det = chol.as_ref().map(|c| 2.0 * c.l().diagonal().iter().map(|v| v.ln()).sum::<f64>());
    Ok(HankelReport { det, err, log_det, indefinite: chol.is_none() })
}
