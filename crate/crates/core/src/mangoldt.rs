//! Prime-side arithmetic: a sieve of prime powers, the weighted Chebyshev
//! sum φ(t) = Σ_{n≤e^t} Λ(n) n^{−σ}(t − log n), and the closed-form
//! evaluation of Ψ(t) and of its shifted variants Ψ_ω(t).
//!
//! The table stores only the prime powers (as `u32`) and their exponents.
//! Prefix sums of Λ(n)n^{−σ} and Λ(n)n^{−σ}log n are kept in double-double
//! at every [`BLOCK`]-th entry, so each evaluation costs a binary search and
//! at most `BLOCK` terms regardless of t.

use crate::dd::DD;
use crate::error::{Error, Result};
use crate::specfun::{self, SpecFunAccuracy, EULER_GAMMA, LN_PI};
use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

/// Spacing of the stored prefix sums.
pub const BLOCK: usize = 64;

/// Default upper bound on the sieve limit.
pub const DEFAULT_BUDGET: u64 = 1 << 31;

const CACHE_MAGIC: &[u8; 8] = b"ZSCREWLM";
const CACHE_VERSION: u32 = 2;

struct Prefix {
    s0: Vec<DD>,
    s1: Vec<DD>,
}

/// Von Mangoldt data up to `limit`.
pub struct MangoldtTable {
    limit: u64,
    n: Vec<u32>,
    exp: Vec<u8>,
    prefixes: Mutex<HashMap<u64, Arc<Prefix>>>,
}

impl std::fmt::Debug for MangoldtTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MangoldtTable").field("limit", &self.limit).field("prime_powers", &self.n.len()).finish()
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_primes(n: usize) -> Vec<u32> {
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve of Eratosthenes over odd numbers; returns all prime
/// powers up to `limit` with their exponents.
fn sieve_prime_powers(limit: u64) -> (Vec<u32>, Vec<u8>) {
    let root = isqrt(limit) as usize;
    let base = small_primes(root.max(2));
    let estimate = (limit as f64 / (limit as f64).ln().max(1.0) * 1.2) as usize + 16;
    let mut primes: Vec<u32> = Vec::with_capacity(estimate);
    if limit >= 2 {
        primes.push(2);
    }
    const SEG: u64 = 1 << 20; // odd numbers per segment
    let mut seg = vec![false; SEG as usize];
    // next odd multiple to strike for each odd base prime
    let mut next: Vec<u64> = base.iter().skip(1).map(|&p| (p as u64) * (p as u64)).collect();
    let mut lo = 3u64; // first odd number of the segment
    while lo <= limit {
        let hi = (lo + 2 * SEG).min(limit + 1); // exclusive
        let len = ((hi - lo) + 1) / 2;
        seg[..len as usize].iter_mut().for_each(|c| *c = false);
        for (k, &p) in base.iter().skip(1).enumerate() {
            let p = p as u64;
            let mut m = next[k];
            if m >= hi {
                continue;
            }
            while m < hi {
                seg[((m - lo) / 2) as usize] = true;
                m += 2 * p;
            }
            next[k] = m;
        }
        for i in 0..len as usize {
            if !seg[i] {
                primes.push((lo + 2 * i as u64) as u32);
            }
        }
        lo = hi;
    }
    let mut powers: Vec<(u32, u8)> = Vec::new();
    for &p in &base {
        let p = p as u64;
        let mut q = p * p;
        let mut k = 2u8;
        while q <= limit {
            powers.push((q as u32, k));
            q *= p;
            k += 1;
        }
    }
    powers.sort_unstable();
    let total = primes.len() + powers.len();
    let mut n = Vec::with_capacity(total);
    let mut exp = Vec::with_capacity(total);
    let mut j = 0;
    for &p in &primes {
        while j < powers.len() && powers[j].0 < p {
            n.push(powers[j].0);
            exp.push(powers[j].1);
            j += 1;
        }
        n.push(p);
        exp.push(1);
    }
    for &(q, k) in &powers[j..] {
        n.push(q);
        exp.push(k);
    }
    (n, exp)
}

/// Builds the table up to `limit` with the default memory budget.
pub fn build_table(limit: u64) -> Result<MangoldtTable> {
    MangoldtTable::build(limit, DEFAULT_BUDGET)
}

impl MangoldtTable {
    /// Sieves [2, limit]; `budget` caps the limit.
    pub fn build(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain("build_table", format!("limit = {limit} must be at least 2")));
        }
        if limit > budget || limit > u32::MAX as u64 {
            return Err(Error::Capacity { limit, budget: budget.min(u32::MAX as u64) });
        }
        let (n, exp) = sieve_prime_powers(limit);
        Ok(MangoldtTable { limit, n, exp, prefixes: Mutex::new(HashMap::new()) })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest t with e^t ≤ limit.
    pub fn t_max(&self) -> f64 {
        (self.limit as f64).ln()
    }

    pub fn prime_power_count(&self) -> usize {
        self.n.len()
    }

    /// Prime powers in ascending order.
    pub fn prime_powers(&self) -> &[u32] {
        &self.n
    }

    /// Λ of the i-th prime power.
    #[inline]
    pub fn lambda_at(&self, i: usize) -> f64 {
        (self.n[i] as f64).ln() / self.exp[i] as f64
    }

    /// Λ(n) for any n ≤ limit.
    pub fn lambda(&self, n: u64) -> f64 {
        if n > self.limit || n < 2 {
            return 0.0;
        }
        match self.n.binary_search(&(n as u32)) {
            Ok(i) => self.lambda_at(i),
            Err(_) => 0.0,
        }
    }

    /// Number of prime powers n with log n ≤ t.
    pub fn count_upto(&self, t: f64) -> usize {
        if t < LN_2 {
            return 0;
        }
        self.n.partition_point(|&m| (m as f64).ln() <= t)
    }

    fn check_range(&self, op: &'static str, t: f64) -> Result<()> {
        if !(t.exp().floor() <= self.limit as f64) {
            return Err(Error::Range { op, t, limit: self.limit });
        }
        Ok(())
    }

    /// Logarithms of the first prime powers up to e^t, at most `cap` of
    /// them; these are the kinks of Ψ.
    pub fn log_breakpoints(&self, t: f64, cap: usize) -> Vec<f64> {
        let k = self.count_upto(t).min(cap);
        self.n[..k].iter().map(|&m| (m as f64).ln()).collect()
    }

    fn prefix(&self, sigma: f64) -> Arc<Prefix> {
        let key = sigma.to_bits();
        if let Some(p) = self.prefixes.lock().unwrap().get(&key) {
            return p.clone();
        }
        let blocks = self.n.len() / BLOCK + 1;
        let mut s0 = Vec::with_capacity(blocks);
        let mut s1 = Vec::with_capacity(blocks);
        let mut a0 = DD::ZERO;
        let mut a1 = DD::ZERO;
        for i in 0..self.n.len() {
            if i % BLOCK == 0 {
                s0.push(a0);
                s1.push(a1);
            }
            let (w, ln) = self.weight(i, sigma);
            a0 += w;
            a1 += DD::mul_f64_exact(w, ln);
        }
        if self.n.len() % BLOCK == 0 {
            s0.push(a0);
            s1.push(a1);
        }
        let p = Arc::new(Prefix { s0, s1 });
        self.prefixes.lock().unwrap().insert(key, p.clone());
        p
    }

    #[inline]
    fn weight(&self, i: usize, sigma: f64) -> (f64, f64) {
        let nf = self.n[i] as f64;
        let ln = nf.ln();
        let lam = ln / self.exp[i] as f64;
        let w = if sigma == 0.5 {
            lam / nf.sqrt()
        } else if sigma == 1.0 {
            lam / nf
        } else if sigma == 0.0 {
            lam
        } else {
            lam * (-sigma * ln).exp()
        };
        (w, ln)
    }

    /// (Σ w, Σ w log n) over the first `k` prime powers, w = Λ(n)n^{−σ}.
    pub(crate) fn sums(&self, k: usize, sigma: f64) -> (DD, DD) {
        let p = self.prefix(sigma);
        let b = k / BLOCK;
        let mut a0 = p.s0[b];
        let mut a1 = p.s1[b];
        for i in b * BLOCK..k {
            let (w, ln) = self.weight(i, sigma);
            a0 += w;
            a1 += DD::mul_f64_exact(w, ln);
        }
        (a0, a1)
    }

    /// Σ_{n≤e^t} Λ(n)n^{−σ}(t − log n) in double-double, with the number of
    /// prime powers used.
    pub fn weighted_sum(&self, t: f64, sigma: f64) -> Result<(DD, usize)> {
        self.check_range("chebyshev_weighted", t)?;
        let k = self.count_upto(t);
        if k == 0 {
            return Ok((DD::ZERO, 0));
        }
        let (s0, s1) = self.sums(k, sigma);
        Ok((s0 * t - s1, k))
    }

    /// Σ_{n≤e^t} Λ(n)n^{−σ}, the derivative of [`Self::weighted_sum`] in t.
    pub fn weighted_slope(&self, t: f64, sigma: f64) -> Result<f64> {
        self.check_range("chebyshev_weighted", t)?;
        let k = self.count_upto(t);
        Ok(self.sums(k, sigma).0.to_f64())
    }

    /// Chebyshev's ψ(x) = Σ_{n≤x} Λ(n).
    pub fn chebyshev_psi(&self, x: u64) -> f64 {
        let k = self.n.partition_point(|&m| (m as u64) <= x);
        self.sums(k, 0.0).0.to_f64()
    }

    /// Writes the binary cache: 16-byte header (magic, version, limit),
    /// entry count as u64, the prime powers as u32 and the exponents as u8,
    /// all little-endian.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let tmp = path.with_extension("tmp");
        let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp).map_err(io)?);
        w.write_all(CACHE_MAGIC).map_err(io)?;
        w.write_all(&CACHE_VERSION.to_le_bytes()).map_err(io)?;
        w.write_all(&(self.limit as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&(self.n.len() as u64).to_le_bytes()).map_err(io)?;
        for &m in &self.n {
            w.write_all(&m.to_le_bytes()).map_err(io)?;
        }
        w.write_all(&self.exp).map_err(io)?;
        w.into_inner().map_err(|e| io(e.into_error()))?.sync_all().map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }

    /// Reads a cache written by [`Self::save_cache`].
    pub fn load_cache(path: &Path) -> Result<Self> {
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let bad = |msg: &str| Error::Data { path: path.to_path_buf(), msg: msg.to_string() };
        let mut r = std::io::BufReader::new(std::fs::File::open(path).map_err(io)?);
        let mut head = [0u8; 24];
        r.read_exact(&mut head).map_err(io)?;
        if &head[..8] != CACHE_MAGIC {
            return Err(bad("not a sieve cache (bad magic)"));
        }
        let version = u32::from_le_bytes(head[8..12].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(bad(&format!("unsupported cache version {version}")));
        }
        let limit = u32::from_le_bytes(head[12..16].try_into().unwrap()) as u64;
        let count = u64::from_le_bytes(head[16..24].try_into().unwrap()) as usize;
        let mut buf = vec![0u8; count * 4];
        r.read_exact(&mut buf).map_err(io)?;
        let n: Vec<u32> = buf.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        let mut exp = vec![0u8; count];
        r.read_exact(&mut exp).map_err(io)?;
        if n.windows(2).any(|w| w[0] >= w[1]) || n.last().map(|&m| m as u64 > limit).unwrap_or(false) {
            return Err(bad("cache entries are not ascending or exceed the limit"));
        }
        Ok(MangoldtTable { limit, n, exp, prefixes: Mutex::new(HashMap::new()) })
    }
}

/// Σ_{n≤e^t} Λ(n) n^{−1/2}(t − log n).
pub fn chebyshev_weighted(t: f64, table: &MangoldtTable) -> Result<f64> {
    Ok(table.weighted_sum(t, 0.5)?.0.to_f64())
}

/// φ(t)/(4e^{t/2}).
pub fn asymptotic_ratio(t: f64, table: &MangoldtTable) -> Result<f64> {
    Ok(chebyshev_weighted(t, table)? / (4.0 * (0.5 * t).exp()))
}

/// A Ψ value with diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct PsiEvalResult {
    pub value: f64,
    pub prime_terms_used: usize,
    pub series_terms_used: usize,
    /// Bound on the truncation error of the Lerch series.
    pub est_error: f64,
}

/// Ψ(t) from the primes and special functions. Even in t.
pub fn psi_prime_side(t: f64, table: &MangoldtTable, acc: &SpecFunAccuracy) -> Result<PsiEvalResult> {
    let t = t.abs();
    if t == 0.0 {
        return Ok(PsiEvalResult { value: 0.0, prime_terms_used: 0, series_terms_used: 0, est_error: 0.0 });
    }
    let (phi, k) = table.weighted_sum(t, 0.5)?;
    let lerch = specfun::lerch_phi2((-2.0 * t).exp(), 0.25, acc)?;
    let e = (-0.5 * t).exp();
    // e^{t/2} + e^{−t/2} − 2 = 4 sinh²(t/4)
    let sh = (0.25 * t).sinh();
    let growth = DD::mul_f64_exact(16.0 * sh, sh);
    let lin = 0.5 * t * (digamma_quarter() - LN_PI);
    let arch = 0.25 * (specfun::c_const() - e * lerch.value);
    let value = (growth - phi + lin + arch).to_f64();
    Ok(PsiEvalResult { value, prime_terms_used: k, series_terms_used: lerch.terms, est_error: 0.25 * e * lerch.err })
}

/// ψ(1/4) = −γ₀ − π/2 − 3 log 2.
pub fn digamma_quarter() -> f64 {
    -EULER_GAMMA - 0.5 * PI - 3.0 * LN_2
}

/// Constant term of Ψ′ on (0, log 2): π/4 − (γ₀ + 3 log 2 + log π)/2.
///
/// The log π comes from the linear term (t/2)(ψ(1/4) − log π); dropping it
/// moves the roots of Ψ′ away from 0.152631 and 0.464002.
pub fn psi_derivative_constant() -> f64 {
    0.25 * PI - 0.5 * (EULER_GAMMA + 3.0 * LN_2 + LN_PI)
}

/// Closed-form Ψ′(t) = 2(e^{t/2} − e^{−t/2}) + c − arctan(e^{t/2}) +
/// arctanh(e^{−t/2}) on (0, log 2), where no prime power contributes.
pub fn psi_prime_derivative(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < LN_2) {
        return Err(Error::domain("psi_prime_derivative", format!("t = {t} outside (0, log 2)")));
    }
    let c = psi_derivative_constant();
    let h = (0.5 * t).exp();
    // arctanh(e^{−t/2}) = (1/2)log((1 + e^{−t/2})/(1 − e^{−t/2}))
    let e = (-0.5 * t).exp();
    let atanh = 0.5 * ((1.0 + e) / -(-0.5 * t).exp_m1()).ln();
    Ok(4.0 * (0.5 * t).sinh() + c - h.atan() + atanh)
}

/// Ψ_ω(t) from its closed form. ω = ±1/2 use dedicated formulas; other
/// values use the generic expression with a = 1/4 + ω/2.
pub fn psi_omega_prime_side(
    t: f64,
    omega: f64,
    table: &MangoldtTable,
    acc: &SpecFunAccuracy,
) -> Result<PsiEvalResult> {
    let t = t.abs();
    if omega == 0.0 {
        return psi_prime_side(t, table, acc);
    }
    if t == 0.0 {
        return Ok(PsiEvalResult { value: 0.0, prime_terms_used: 0, series_terms_used: 0, est_error: 0.0 });
    }
    let a = 0.25 + 0.5 * omega;
    if a <= 0.0 && a == a.floor() && omega != -0.5 {
        return Err(Error::domain("psi_omega_prime_side", format!("omega = {omega} hits a pole of the gamma factor")));
    }
    let sigma = 0.5 + omega;
    let (phi, k) = table.weighted_sum(t, sigma)?;
    let z = (-2.0 * t).exp();
    let (main, lerch) = if omega == 0.5 {
        let l = specfun::lerch_phi2(z, 0.5, acc)?;
        let v = DD::from_f64(0.5 * (t + 1.0) * (t + 1.0)) - 1.5 + (-t).exp()
            - 0.5 * t * (EULER_GAMMA + 2.0 * LN_2 + LN_PI)
            + 0.25 * (0.5 * PI * PI - (-t).exp() * l.value);
        (v, l)
    } else if omega == -0.5 {
        let l = specfun::lerch_phi2(z, 1.0, acc)?;
        let v = DD::from_f64(t.exp_m1()) - t - 0.5 * t * (EULER_GAMMA + LN_PI)
            + 0.25 * (PI * PI / 6.0 - z * l.value);
        (v, l)
    } else {
        let l = specfun::lerch_phi2_any(z, a, acc)?;
        let u = 1.0 - 2.0 * omega;
        let v = 1.0 + 2.0 * omega;
        let w = 1.0 - 4.0 * omega * omega;
        let growth = DD::from_f64(((0.5 - omega) * t).exp() / (u * u)) + (-(0.5 + omega) * t).exp() / (v * v)
            - (4.0 - 2.0 * (1.0 - omega * t) * w) / (w * w);
        let val = growth * 4.0
            + 0.5 * t * (specfun::digamma_real(a) - LN_PI)
            + 0.25 * (specfun::trigamma_real(a) - (-(0.5 + omega) * t).exp() * l.value);
        (val, l)
    };
    let value = (main - phi).to_f64();
    Ok(PsiEvalResult { value, prime_terms_used: k, series_terms_used: lerch.terms, est_error: 0.25 * lerch.err })
}

/// Ψ_{ω+η}(t) from values of Ψ_ω by
/// e^{−ηt}Ψ_ω(t) + 2η∫₀ᵗ e^{−ηu}Ψ_ω(u)du + η²∫₀ᵗ (t−u)e^{−ηu}Ψ_ω(u)du.
/// `breaks` should contain the kinks of Ψ_ω inside (0, t).
pub fn psi_omega_shift(
    psi_omega: impl Fn(f64) -> f64,
    eta: f64,
    t: f64,
    breaks: &[f64],
    opts: crate::quad::QuadOptions,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::domain("psi_omega_shift", format!("eta = {eta} must be positive")));
    }
    let t = t.abs();
    let mut pts = vec![0.0];
    pts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < t));
    pts.push(t);
    let r = crate::quad::adaptive_vec(
        1,
        |u, out| {
            let p = psi_omega(u);
            out[0] = (-eta * u).exp() * p * (2.0 * eta + eta * eta * (t - u));
        },
        &pts,
        opts,
    )
    .map_err(|e| match e {
        Error::Quadrature { err, tol, .. } => Error::Quadrature { op: "psi_omega_shift", err, tol },
        other => other,
    })?;
    Ok((-eta * t).exp() * psi_omega(t) + r.values[0])
}

/// (ξ'/ξ)(s) for real s > 1:
/// 1/(s−1) + 1/s − (log π)/2 + ψ(s/2)/2 − Σ Λ(n)n^{−s}.
/// The Dirichlet series runs over the whole table; the part beyond X =
/// limit is −ψ(X)X^{−s} + sX^{1−s}/(s−1), from ψ(u) ≈ u under the
/// integral, with error O(X^{1/2−s} log²X).
pub fn xi_log_derivative(s: f64, table: &MangoldtTable) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::domain("xi_log_derivative", format!("s = {s} must exceed 1")));
    }
    // one pass for Σ Λ(n)n^{−s} and ψ(X); no prefix tables are kept
    let mut dirichlet = DD::ZERO;
    let mut cheb = DD::ZERO;
    for i in 0..table.prime_power_count() {
        let nf = table.n[i] as f64;
        let lam = nf.ln() / table.exp[i] as f64;
        cheb += lam;
        dirichlet += if s == 1.5 { lam / (nf * nf.sqrt()) } else { lam * nf.powf(-s) };
    }
    let x = table.limit() as f64;
    let psi_x = cheb.to_f64();
    let tail = -psi_x * x.powf(-s) + s * x.powf(1.0 - s) / (s - 1.0);
    let head = 1.0 / (s - 1.0) + 1.0 / s - 0.5 * LN_PI + 0.5 * specfun::digamma_real(0.5 * s);
    Ok((DD::from_f64(head) - dirichlet - tail).to_f64())
}

/// A Ψ evaluator bound to a table, usable as a plain callable.
#[derive(Clone, Copy)]
pub struct PrimeSide<'a> {
    pub table: &'a MangoldtTable,
    pub acc: SpecFunAccuracy,
}

impl<'a> PrimeSide<'a> {
    pub fn new(table: &'a MangoldtTable) -> Self {
        PrimeSide { table, acc: SpecFunAccuracy::default() }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(psi_prime_side(t, self.table, &self.acc)?.value)
    }

    /// Evaluates Ψ, panicking if t lies outside the table. For use inside
    /// quadrature loops whose range was validated beforehand.
    pub fn call(&self, t: f64) -> f64 {
        self.eval(t).expect("psi evaluated outside the validated range")
    }
}
