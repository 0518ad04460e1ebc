//! Zero-side evaluation: ingestion of zero ordinates, Ψ(t) as a sum over
//! zeros with a one-sided tail bound, the kernel G(t,u), Li coefficients and
//! power sums over zeros.
//!
//! All sums over γ run over the positive ordinates and double the real part,
//! using the symmetry γ → −γ of the zeros of ξ(1/2 − iz).

use crate::dd::KahanSum;
use crate::error::{Error, Result};
use crate::quad::{adaptive, QuadOptions};
use crate::specfun::EULER_GAMMA;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

/// Ascending positive ordinates γ of nontrivial zeros ρ = 1/2 + iγ.
#[derive(Clone, Debug)]
pub struct ZeroTable {
    pub ordinates: Vec<f64>,
    pub source: String,
    /// Zeros are taken to be simple and on the critical line.
    pub assumed_simple: bool,
}

/// Smooth Riemann-von Mangoldt count θ(T)/π + 1 of zeros with 0 < γ ≤ T.
pub fn smooth_count(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * x.ln() - x + 7.0 / 8.0 + 1.0 / (48.0 * PI * t)
}

/// Density (1/2π) log(u/2π) of ordinates near height u.
pub fn density(u: f64) -> f64 {
    (u / (2.0 * PI)).ln() / (2.0 * PI)
}

impl ZeroTable {
    /// Builds a table from ordinates already in memory, applying the same
    /// checks as [`load_zeros`].
    pub fn from_ordinates(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        let source = source.into();
        let path = Path::new(&source).to_path_buf();
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Parse { path, line: i + 2, msg: format!("ordinate {} not above {}", w[1], w[0]) });
            }
        }
        check_density(&ordinates, &path)?;
        Ok(ZeroTable { ordinates, source, assumed_simple: true })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Largest ordinate used.
    pub fn cutoff(&self) -> f64 {
        self.ordinates.last().copied().unwrap_or(0.0)
    }

    /// The first `m` ordinates as a new table.
    pub fn truncated(&self, m: usize) -> ZeroTable {
        ZeroTable {
            ordinates: self.ordinates[..m.min(self.len())].to_vec(),
            source: self.source.clone(),
            assumed_simple: self.assumed_simple,
        }
    }
}

fn check_density(ord: &[f64], path: &Path) -> Result<()> {
    if let Some(&first) = ord.first() {
        if !(first > 14.0 && first < 14.2) {
            return Err(Error::Data { path: path.to_path_buf(), msg: format!("first ordinate {first} is not the first zeta zero") });
        }
    }
    // at γ_k the count jumps from k−1 to k; compare the midpoint
    for (i, &g) in ord.iter().enumerate() {
        let dev = (i as f64 + 0.5) - smooth_count(g);
        if dev.abs() > 2.0 {
            return Err(Error::Data {
                path: path.to_path_buf(),
                msg: format!("zero count {} at height {g} departs from the Riemann-von Mangoldt count by {dev:.2}", i + 1),
            });
        }
    }
    Ok(())
}

/// Reads at most `limit` ordinates from a text file (one per line, `#`
/// comments and blank lines ignored).
pub fn load_zeros(path: &Path, limit: usize) -> Result<ZeroTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut ord = Vec::with_capacity(limit.min(1 << 20));
    for (i, line) in text.lines().enumerate() {
        if ord.len() >= limit {
            break;
        }
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let g: f64 = s.parse().map_err(|_| Error::Parse { path: path.to_path_buf(), line: i + 1, msg: format!("not a number: {s:?}") })?;
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::Parse { path: path.to_path_buf(), line: i + 1, msg: format!("ordinate {g} is not positive") });
        }
        if let Some(&prev) = ord.last() {
            if !(g > prev) {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("ordinates must be strictly increasing ({g} after {prev})"),
                });
            }
        }
        ord.push(g);
    }
    if ord.is_empty() {
        return Err(Error::Data { path: path.to_path_buf(), msg: "no ordinates".into() });
    }
    check_density(&ord, path)?;
    Ok(ZeroTable { ordinates: ord, source: path.display().to_string(), assumed_simple: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    None,
    DensityIntegral,
}

/// Treatment of the zeros above the table.
#[derive(Clone, Copy, Debug)]
pub struct TailModel {
    pub cutoff: f64,
    pub mode: TailMode,
    /// Estimate of Σ_{γ>cutoff} 2/γ².
    pub est: f64,
}

impl TailModel {
    pub fn none(table: &ZeroTable) -> Self {
        TailModel { cutoff: table.cutoff(), mode: TailMode::None, est: 0.0 }
    }

    /// Density-integral tail above the last ordinate.
    pub fn density(table: &ZeroTable) -> Result<Self> {
        let cutoff = table.cutoff();
        Ok(TailModel { cutoff, mode: TailMode::DensityIntegral, est: tail_sigma2(cutoff)? })
    }
}

/// (1/π)(log(T/2π) + 1)/T, the density estimate of Σ_{γ>T} 2/γ².
pub fn tail_sigma2(cutoff: f64) -> Result<f64> {
    if !(cutoff >= 100.0) {
        return Err(Error::domain("tail_sigma2", format!("cutoff = {cutoff} below 100")));
    }
    Ok(((cutoff / (2.0 * PI)).ln() + 1.0) / (PI * cutoff))
}

/// An enclosure [lower, upper] with the untruncated central value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub central: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }
}

/// Ψ(t) = 2Σ_{0<γ≤T}(1 − cos γt)/γ². Each omitted pair lies in [0, 4/γ²],
/// so the enclosure is [central, central + 2·est].
pub fn psi_zero_side(t: f64, table: &ZeroTable, tail: &TailModel) -> Interval {
    if t == 0.0 {
        return Interval { central: 0.0, lower: 0.0, upper: 0.0 };
    }
    let mut s = KahanSum::new();
    for &g in &table.ordinates {
        // 1 − cos x = 2 sin²(x/2) keeps small arguments accurate
        let h = (0.5 * g * t).sin();
        s.add(2.0 * h * h / (g * g));
    }
    let central = 2.0 * s.value();
    Interval { central, lower: central, upper: central + 2.0 * tail.est }
}

/// Σ_{γ>0} 1/(1/4 + γ²) = 1 + γ₀/2 − log(4π)/2, summed over all zeros.
pub fn li1_closed_form() -> f64 {
    1.0 + 0.5 * EULER_GAMMA - 0.5 * (4.0 * PI).ln()
}

/// Σ_{γ>0} 1/γ² over all zeros. Uses 1/γ² = 1/(1/4+γ²) + 1/(4γ²(1/4+γ²)):
/// the first series has a closed form and the second converges like γ⁻⁴.
pub fn sum_inv_gamma_sq(table: &ZeroTable) -> f64 {
    let mut s = KahanSum::new();
    for &g in table.ordinates.iter().rev() {
        let g2 = g * g;
        s.add(0.25 / (g2 * (0.25 + g2)));
    }
    // density tail of Σ_{γ>T} 1/(4γ⁴), about 1e-16 at T = 7.5e4
    let t = table.cutoff();
    s.add(((t / (2.0 * PI)).ln() + 1.0 / 3.0) / (24.0 * PI * t * t * t));
    li1_closed_form() + s.value()
}

/// Ψ(t) from the zeros with the constant part completed exactly:
/// 2Σ_{all γ>0} γ⁻² − 2Σ_{γ≤T} cos(γt)/γ². The omitted cosine tail is
/// oscillatory and of order 1/(T²t).
pub fn psi_zero_side_completed(t: f64, table: &ZeroTable, s2: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let mut s = KahanSum::new();
    for &g in &table.ordinates {
        s.add((g * t).cos() / (g * g));
    }
    2.0 * (s2 - s.value())
}

/// G(t,u) = Ψ(t) + Ψ(u) − Ψ(t − u) for an even Ψ.
pub fn kernel_g(t: f64, u: f64, psi: impl Fn(f64) -> f64) -> f64 {
    psi(t.abs()) + psi(u.abs()) - psi((t - u).abs())
}

/// G(t,u) = 2Σ_{γ>0}[cos γ(t−u) − cos γt − cos γu + 1]/γ², enclosed with
/// ±4·est for the omitted zeros.
pub fn kernel_g_zero_sum(t: f64, u: f64, table: &ZeroTable, tail: &TailModel) -> Interval {
    let mut s = KahanSum::new();
    for &g in &table.ordinates {
        let c = (g * (t - u)).cos() - (g * t).cos() - (g * u).cos() + 1.0;
        s.add(c / (g * g));
    }
    let central = 2.0 * s.value();
    Interval { central, lower: central - 4.0 * tail.est, upper: central + 4.0 * tail.est }
}

/// A zero sum with its density-model tail.
#[derive(Clone, Copy, Debug)]
pub struct ZeroSum {
    /// Truncated sum plus the tail estimate.
    pub value: f64,
    pub truncated: f64,
    pub tail: f64,
}

/// ∫_T^∞ f(u) (1/2π) log(u/2π) du for f = O(u⁻²), by the substitution
/// v = T/u.
fn density_tail(f: impl Fn(f64) -> f64, cutoff: f64) -> f64 {
    let g = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let u = cutoff / v;
        f(u) * density(u) * cutoff / (v * v)
    };
    let opts = QuadOptions { abs_tol: 1e-22, rel_tol: 1e-11, max_intervals: 4000 };
    adaptive(g, 0.0, 1.0, opts).map(|r| r.0).unwrap_or(f64::NAN)
}

/// λ_n = Σ_ρ [1 − (1 − 1/ρ)^n] over ρ = 1/2 ± iγ. On the critical line
/// |1 − 1/ρ| = 1, so each conjugate pair contributes 4 sin²(nθ/2) with
/// θ = 2 arctan(1/(2γ)).
pub fn li_from_zeros(n: usize, table: &ZeroTable, tail: &TailModel) -> Result<ZeroSum> {
    if n == 0 || n > 10_000 {
        return Err(Error::domain("li_from_zeros", format!("n = {n} outside 1..=10000")));
    }
    let nf = n as f64;
    let term = |g: f64| {
        let h = (nf * (0.5 / g).atan()).sin();
        4.0 * h * h
    };
    let mut s = KahanSum::new();
    for &g in table.ordinates.iter().rev() {
        s.add(term(g));
    }
    let truncated = s.value();
    let t = match tail.mode {
        TailMode::None => 0.0,
        TailMode::DensityIntegral => density_tail(term, tail.cutoff),
    };
    Ok(ZeroSum { value: truncated + t, truncated, tail: t })
}

/// Σ_ρ ρ^{−m} = 2Σ_{γ>0} Re[(1/2 + iγ)^{−m}] for m ≥ 2.
pub fn zero_power_sum(m: u32, table: &ZeroTable, tail: &TailModel) -> Result<ZeroSum> {
    if m < 2 {
        return Err(Error::domain("zero_power_sum", format!("m = {m} must be at least 2")));
    }
    let term = |g: f64| 2.0 * Complex64::new(0.5, g).powi(-(m as i32)).re;
    let mut s = KahanSum::new();
    for &g in table.ordinates.iter().rev() {
        s.add(term(g));
    }
    let truncated = s.value();
    let t = match tail.mode {
        TailMode::None => 0.0,
        TailMode::DensityIntegral => density_tail(term, tail.cutoff),
    };
    Ok(ZeroSum { value: truncated + t, truncated, tail: t })
}

/// Ψ_ω(t) from the zeros:
/// Σ_γ [ωt(γ²+ω²) + (γ²−ω²) − e^{−ωt}((γ²−ω²)cos γt + 2γω sin γt)]/(γ²+ω²)².
/// No tail is added; the omitted terms are bounded by about
/// (ωt + 1 + e^{−ωt})·est.
pub fn psi_omega_zero_side(t: f64, omega: f64, table: &ZeroTable) -> f64 {
    let t = t.abs();
    let e = (-omega * t).exp();
    let w2 = omega * omega;
    let mut s = KahanSum::new();
    for &g in &table.ordinates {
        let g2 = g * g;
        let d = g2 + w2;
        let (sn, cs) = (g * t).sin_cos();
        s.add((omega * t * d + (g2 - w2) - e * ((g2 - w2) * cs + 2.0 * g * omega * sn)) / (d * d));
    }
    2.0 * s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST: [f64; 10] = [
        14.134725141734694,
        21.022039638771555,
        25.010857580145688,
        30.424876125859513,
        32.935061587739189,
        37.586178158825671,
        40.918719012147495,
        43.327073280914999,
        48.005150881167159,
        49.773832477672302,
    ];

    #[test]
    fn psi_zero_side_vanishes_at_origin() {
        let t = ZeroTable::from_ordinates(FIRST.to_vec(), "inline").unwrap();
        let tail = TailModel::none(&t);
        let i = psi_zero_side(0.0, &t, &tail);
        assert_eq!((i.lower, i.upper), (0.0, 0.0));
    }

    #[test]
    fn tail_sigma2_reference_and_monotone() {
        let v = tail_sigma2(1000.0).unwrap();
        assert!((v - ((1000.0 / (2.0 * PI)).ln() + 1.0) / (PI * 1000.0)).abs() < 1e-18);
        assert!((v - 1.93e-3).abs() < 1e-5);
        assert!(tail_sigma2(2000.0).unwrap() < v);
        assert!(tail_sigma2(50.0).is_err());
    }

    #[test]
    fn ordering_is_enforced() {
        let mut v = FIRST.to_vec();
        v.swap(3, 4);
        assert!(matches!(ZeroTable::from_ordinates(v, "inline"), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn kernel_identities() {
        let t = ZeroTable::from_ordinates(FIRST.to_vec(), "inline").unwrap();
        let tail = TailModel::none(&t);
        let psi = |x: f64| psi_zero_side(x, &t, &tail).central;
        assert!(kernel_g(1.3, 0.0, psi).abs() < 1e-15);
        assert!(kernel_g(0.0, 0.7, psi).abs() < 1e-15);
        assert!((kernel_g(0.9, 0.9, psi) - 2.0 * psi(0.9)).abs() < 1e-15);
        let z = kernel_g_zero_sum(1.0, 2.0, &t, &tail).central;
        assert!((z - kernel_g(1.0, 2.0, psi)).abs() < 1e-14);
    }

    #[test]
    fn li_term_matches_complex_power() {
        let t = ZeroTable::from_ordinates(FIRST.to_vec(), "inline").unwrap();
        let tail = TailModel::none(&t);
        for n in [1usize, 2, 5, 17] {
            let mut direct = 0.0;
            for &g in &FIRST {
                let rho = Complex64::new(0.5, g);
                direct += 2.0 * (1.0 - (1.0 - rho.inv()).powi(n as i32)).re;
            }
            let v = li_from_zeros(n, &t, &tail).unwrap().value;
            assert!((v - direct).abs() < 1e-14, "n = {n}");
        }
        assert!(li_from_zeros(0, &t, &tail).is_err());
    }

    #[test]
    fn omega_zero_side_reduces_to_psi() {
        let t = ZeroTable::from_ordinates(FIRST.to_vec(), "inline").unwrap();
        let tail = TailModel::none(&t);
        for x in [0.3, 1.0, 4.0] {
            let a = psi_omega_zero_side(x, 0.0, &t);
            let b = psi_zero_side(x, &t, &tail).central;
            assert!((a - b).abs() < 1e-15);
        }
    }
}
