//! The integral operator φ ↦ ∫_{−a}^{a} G(t,u)φ(u)du on L²(−a, a), with
//! G(t,u) = Ψ(t) + Ψ(u) − Ψ(t − u): Nyström discretization, spectrum and
//! trace, and the equivalent matrix H(γ, μ; a) indexed by zeros.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, GaussLegendre};
use crate::zerotable::{tail_sigma2, ZeroTable};
use nalgebra::DMatrix;

/// Nyström discretization on [−a, a].
#[derive(Clone, Debug)]
pub struct OperatorDiscretization {
    pub a: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// √w_i G(t_i, t_j) √w_j.
    pub sym_matrix: DMatrix<f64>,
    /// G(t_i, t_i) = 2Ψ(t_i).
    pub diagonal_kernel: Vec<f64>,
}

/// Node placement for [`discretize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeScheme {
    /// Gauss-Legendre panels split at 0 and at the given kinks.
    CompositeGauss,
    /// Equal-width midpoint rule.
    Midpoint,
}

/// Splits `n` nodes over panels in proportion to their lengths, at least
/// two per panel.
fn panel_counts(lengths: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = lengths.iter().sum();
    let mut counts: Vec<usize> = lengths.iter().map(|l| ((l / total) * n as f64).round().max(2.0) as usize).collect();
    loop {
        let s: usize = counts.iter().sum();
        if s == n {
            break;
        }
        // adjust the panel whose share is furthest from its count
        let i = (0..counts.len())
            .max_by(|&x, &y| {
                let dx = lengths[x] / total * n as f64 - counts[x] as f64;
                let dy = lengths[y] / total * n as f64 - counts[y] as f64;
                if s > n { dy.total_cmp(&dx) } else { dx.total_cmp(&dy) }
            })
            .unwrap();
        if s > n {
            if counts[i] > 2 {
                counts[i] -= 1;
            } else {
                break;
            }
        } else {
            counts[i] += 1;
        }
    }
    counts
}

/// Quadrature nodes and weights on [−a, a].
pub fn operator_nodes(a: f64, n: usize, kinks: &[f64], scheme: NodeScheme) -> (Vec<f64>, Vec<f64>) {
    match scheme {
        NodeScheme::Midpoint => {
            let h = 2.0 * a / n as f64;
            ((0..n).map(|i| -a + (i as f64 + 0.5) * h).collect(), vec![h; n])
        }
        NodeScheme::CompositeGauss => {
            let mut br = vec![-a, 0.0, a];
            for &k in kinks {
                if k > 0.0 && k < a {
                    br.push(k);
                    br.push(-k);
                }
            }
            br.sort_by(f64::total_cmp);
            br.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
            let lengths: Vec<f64> = br.windows(2).map(|w| w[1] - w[0]).collect();
            let counts = if n >= 2 * lengths.len() { panel_counts(&lengths, n) } else { vec![0; lengths.len()] };
            if counts.iter().sum::<usize>() != n {
                // too few nodes for the panels: a single rule
                let g = GaussLegendre::new(n);
                let (x, w): (Vec<f64>, Vec<f64>) = g.mapped(-a, a).unzip();
                return (x, w);
            }
            let mut x = Vec::with_capacity(n);
            let mut w = Vec::with_capacity(n);
            for (seg, &c) in br.windows(2).zip(&counts) {
                let (gx, gw) = gauss_legendre(c);
                let h = 0.5 * (seg[1] - seg[0]);
                let m = 0.5 * (seg[1] + seg[0]);
                for (xi, wi) in gx.iter().zip(&gw) {
                    x.push(m + h * xi);
                    w.push(h * wi);
                }
            }
            (x, w)
        }
    }
}

/// Builds the symmetrized Nyström matrix of G from an even Ψ.
pub fn discretize(
    a: f64,
    n: usize,
    psi: impl Fn(f64) -> f64,
    kinks: &[f64],
    scheme: NodeScheme,
) -> Result<OperatorDiscretization> {
    if !(a > 0.0 && a.is_finite()) || n < 8 {
        return Err(Error::domain("discretize", format!("need a > 0 and n ≥ 8, got a = {a}, n = {n}")));
    }
    let (nodes, weights) = operator_nodes(a, n, kinks, scheme);
    let p: Vec<f64> = nodes.iter().map(|&t| psi(t.abs())).collect();
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let g = if i == j { 2.0 * p[i] } else { p[i] + p[j] - psi((nodes[i] - nodes[j]).abs()) };
            let v = sw[i] * g * sw[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let diagonal_kernel = p.iter().map(|v| 2.0 * v).collect();
    Ok(OperatorDiscretization { a, nodes, weights, sym_matrix: m, diagonal_kernel })
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Σ w_i G(t_i, t_i).
    pub trace_quadrature: f64,
    pub trace_eigsum: f64,
    pub min_eig: f64,
    /// Eigenvalues below this in magnitude are numerically zero.
    pub spectral_floor: f64,
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("symmetric_eigenvalues", "eigensolver produced non-finite values"));
    }
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

pub fn spectrum(disc: &OperatorDiscretization) -> Result<SpectrumReport> {
    let norm = disc.sym_matrix.norm();
    let eigenvalues = symmetric_eigenvalues(disc.sym_matrix.clone())?;
    let trace_quadrature = disc.weights.iter().zip(&disc.diagonal_kernel).map(|(w, g)| w * g).sum();
    let trace_eigsum = eigenvalues.iter().sum();
    let min_eig = *eigenvalues.last().unwrap_or(&0.0);
    Ok(SpectrumReport { eigenvalues, trace_quadrature, trace_eigsum, min_eig, spectral_floor: 1e-12 * norm })
}

/// sinc and its first two derivatives, with Taylor series near 0.
fn sinc_d(u: f64) -> (f64, f64, f64) {
    if u.abs() < 0.05 {
        let u2 = u * u;
        let s = 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)));
        let d1 = u * (-1.0 / 3.0 + u2 * (1.0 / 30.0 - u2 * (1.0 / 840.0 - u2 / 45360.0)));
        let d2 = -1.0 / 3.0 + u2 * (1.0 / 10.0 - u2 * (1.0 / 168.0 - u2 / 6480.0));
        return (s, d1, d2);
    }
    let (sn, cs) = u.sin_cos();
    let s = sn / u;
    let d1 = (cs - s) / u;
    let d2 = -s - 2.0 * d1 / u;
    (s, d1, d2)
}

/// sin(u)/u with the series 1 − u²/6 + u⁴/120 below |u| = 1e-4.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// H(x,y;a) = (2a/(xy))(sinc(a(x−y)) − sinc(ax) − sinc(ay) + 1)
/// = ∫_{−a}^{a} (e^{ixt} − 1)(e^{−iyt} − 1)/(xy) dt.
/// For |x| or |y| below 1e-5 the numerator is expanded to second order in
/// the small variable.
pub fn h_kernel(x: f64, y: f64, a: f64) -> f64 {
    const SMALL: f64 = 1e-5;
    let (x, y) = if x.abs() < y.abs() { (x, y) } else { (y, x) };
    if x.abs() < SMALL {
        // N(x) = sinc(a(x−y)) − sinc(ax) − sinc(ay) + 1 ≈ x N′(0) + x²N″(0)/2
        if y.abs() < SMALL {
            // both small: sinc′(u)/u and the cross term of the double expansion
            return 2.0 * a * a * a / 3.0 - a.powi(5) * (x * x + y * y - x * y) / 15.0;
        }
        let (_, d1, d2) = sinc_d(a * y);
        let n1 = -a * d1;
        let n2 = a * a * (d2 + 1.0 / 3.0);
        return 2.0 * a / y * (n1 + 0.5 * x * n2);
    }
    2.0 * a / (x * y) * (sinc(a * (x - y)) - sinc(a * x) - sinc(a * y) + 1.0)
}

/// The matrix [H(s_i, s_j; a)] over s = (γ₁..γ_m, −γ₁..−γ_m).
pub fn zero_system_matrix(a: f64, ordinates: &[f64]) -> DMatrix<f64> {
    let m = ordinates.len();
    let s = |i: usize| if i < m { ordinates[i] } else { -ordinates[i - m] };
    let mut h = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..2 * m {
        for j in 0..=i {
            let v = h_kernel(s(i), s(j), a);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Nonzero spectrum of the operator from the first `m` zeros: the
/// eigenvalues of the 2m×2m matrix [H(s_i, s_j; a)] over s = ±γ.
///
/// H(−x,−y) = H(x,y), so the matrix has blocks [[A, B], [B, A]] and is
/// orthogonally similar to diag(A + B, A − B). The block structure is
/// checked on the assembled matrix before the two halves are diagonalized.
pub fn zero_system_spectrum(a: f64, table: &ZeroTable, m: usize) -> Result<Vec<f64>> {
    zero_system_eigenvalues(a, table, m, None)
}

/// As [`zero_system_spectrum`], with the zeros above γ_m folded in through
/// their mean: (e^{iγt} − 1)(e^{−iγu} − 1)/γ² summed over |γ| > γ_m averages
/// to the constant c = Σ_{|γ|>γ_m} 1/γ², estimated by the zero density. The
/// constant kernel is the Gram contribution of g = √c on [−a, a], so the
/// system gains one row with ⟨f_γ, g⟩ = √c·2a(sinc(aγ) − 1)/γ, odd in γ.
pub fn zero_system_spectrum_completed(a: f64, table: &ZeroTable, m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > table.len() {
        return Err(Error::Insufficient { op: "zero_system_spectrum", needed: m.max(1), have: table.len() });
    }
    let c = tail_sigma2(table.ordinates[m - 1])?;
    zero_system_eigenvalues(a, table, m, Some(c))
}

fn zero_system_eigenvalues(a: f64, table: &ZeroTable, m: usize, tail: Option<f64>) -> Result<Vec<f64>> {
    if m == 0 || m > table.len() {
        return Err(Error::Insufficient { op: "zero_system_spectrum", needed: m.max(1), have: table.len() });
    }
    let g = &table.ordinates[..m];
    let h = zero_system_matrix(a, g);
    let blk_a = h.view((0, 0), (m, m));
    let blk_b = h.view((0, m), (m, m));
    let scale = h.amax();
    let asym = (&blk_a - h.view((m, m), (m, m))).amax().max((&blk_b - h.view((m, 0), (m, m))).amax());
    if asym > 1e-13 * scale {
        return Err(Error::numerical("zero_system_spectrum", format!("block structure violated by {asym:e}")));
    }
    let plus = &blk_a + &blk_b;
    let mut minus = &blk_a - &blk_b;
    drop(h);
    if let Some(c) = tail {
        // the border row is odd under γ → −γ, so it couples to the A − B half
        // through (e_i − e_{m+i})/√2 with weight √2
        let mut bordered = DMatrix::zeros(m + 1, m + 1);
        bordered.view_mut((0, 0), (m, m)).copy_from(&minus);
        for (i, &x) in g.iter().enumerate() {
            let v = std::f64::consts::SQRT_2 * c.sqrt() * 2.0 * a * (sinc(a * x) - 1.0) / x;
            bordered[(i, m)] = v;
            bordered[(m, i)] = v;
        }
        bordered[(m, m)] = 2.0 * a * c;
        minus = bordered;
    }
    let mut ev = symmetric_eigenvalues(plus)?;
    ev.extend(symmetric_eigenvalues(minus)?);
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// K(t,u) = (1/2)(|t| + |u| − |t − u|)
/// = (1/2π)∫ (e^{izt} − 1)(e^{−izu} − 1)/z² dz.
pub fn k_kernel(t: f64, u: f64) -> f64 {
    0.5 * (t.abs() + u.abs() - (t - u).abs())
}

/// K(t,u;y) = (1/2y)(1 − e^{−y(t+|t|)} − e^{−y(u+|u|)} + e^{−y(t+u+|t−u|)})
/// for y > 0: the same integral along Im z = y, with the second factor
/// conjugated, (1/2π)∫ (e^{izt} − 1)/z · conj((e^{izu} − 1)/z) dx.
pub fn k_kernel_shifted(t: f64, u: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("k_kernel_shifted", format!("y = {y} must be positive")));
    }
    Ok((1.0 - (-y * (t + t.abs())).exp() - (-y * (u + u.abs())).exp() + (-y * (t + u + (t - u).abs())).exp()) / (2.0 * y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_nodes_cover_interval() {
        let (x, w) = operator_nodes(1.0, 40, &[0.69, 1.1], NodeScheme::CompositeGauss);
        assert_eq!(x.len(), 40);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.iter().all(|v| v.abs() < 1.0));
        let (x, w) = operator_nodes(1.0, 8, &[0.69], NodeScheme::CompositeGauss);
        assert_eq!(x.len(), 8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let (_, w) = operator_nodes(0.5, 10, &[], NodeScheme::Midpoint);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn h_kernel_branches_join() {
        let a = 1.3;
        let direct = |x: f64, y: f64| 2.0 * a / (x * y) * (sinc(a * (x - y)) - sinc(a * x) - sinc(a * y) + 1.0);
        for y in [0.7, 5.0, 40.0] {
            let x = 0.99e-5;
            let v = h_kernel(x, y, a);
            assert!((v - direct(x, y)).abs() < 1e-9 * v.abs().max(1.0), "{y}: {v} {}", direct(x, y));
        }
        let lo = h_kernel(0.99e-5, 0.98e-5, a);
        let hi = h_kernel(2e-3, 3e-3, a);
        assert!((lo - 2.0 * a * a * a / 3.0).abs() < 1e-9);
        assert!((hi - 2.0 * a * a * a / 3.0).abs() < 1e-4);
    }

    #[test]
    fn sinc_derivatives_join() {
        for u in [0.0499, 0.0501] {
            let (s, d1, d2) = sinc_d(u);
            let h = 1e-4;
            let f = |v: f64| v.sin() / v;
            assert!((s - f(u)).abs() < 1e-15);
            assert!((d1 - (f(u + h) - f(u - h)) / (2.0 * h)).abs() < 1e-8);
            assert!((d2 - (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h)).abs() < 1e-6);
        }
    }

    #[test]
    fn k_kernel_cases() {
        assert_eq!(k_kernel(2.0, 1.0), 1.0);
        assert_eq!(k_kernel(1.0, 2.0), 1.0);
        assert_eq!(k_kernel(-1.0, 2.0), 0.0);
        assert_eq!(k_kernel(-2.0, -1.0), 1.0);
        let y = 0.7;
        let v = k_kernel_shifted(2.0, 1.0, y).unwrap();
        assert!((v - (1.0 - (-2.0 * y).exp()) / (2.0 * y)).abs() < 1e-15);
        assert_eq!(k_kernel_shifted(-1.0, 2.0, y).unwrap(), 0.0);
        assert!(k_kernel_shifted(1.0, 1.0, 0.0).is_err());
    }
}
