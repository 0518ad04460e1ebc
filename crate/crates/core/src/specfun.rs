//! Special functions on the real line (and the complex digamma needed by the
//! archimedean terms): digamma, trigamma, the Hurwitz-Lerch transcendent at
//! s = 2, Bernoulli polynomials and the small-t expansion of the Lerch term
//! in Ψ.

use crate::dd::KahanSum;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Euler-Mascheroni constant γ₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;
/// Catalan's constant G.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;
/// log π.
pub const LN_PI: f64 = 1.144_729_885_849_400_174_143_427_351_353_058_711_647;
/// Stieltjes constant γ₁ (used only by oracles).
pub const STIELTJES_GAMMA1: f64 = -0.072_815_845_483_676_724_860_586_375_874_901_319_137;

/// ζ(2, 1/4) = π² + 8G, the constant that makes Ψ(0) vanish.
pub fn c_const() -> f64 {
    PI * PI + 8.0 * CATALAN
}

/// The linear coefficient π + 4 log 2 + 2 in the small-t expansion.
pub fn a_const() -> f64 {
    PI + 4.0 * LN_2 + 2.0
}

/// Returns Catalan's constant.
pub fn catalan() -> f64 {
    CATALAN
}

/// Accuracy policy for series evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecFunAccuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for SpecFunAccuracy {
    fn default() -> Self {
        SpecFunAccuracy { abs_tol: 1e-15, max_terms: 2_000_000 }
    }
}

impl SpecFunAccuracy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_terms < 1 {
            return Err(Error::domain("SpecFunAccuracy", format!("abs_tol = {abs_tol}, max_terms = {max_terms}")));
        }
        Ok(SpecFunAccuracy { abs_tol, max_terms })
    }
}

/// A series value with the number of terms used and a bound on the
/// truncation error.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    pub err: f64,
}

const SHIFT: f64 = 10.0;

fn digamma_asymptotic(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    x.ln() - 0.5 / x - tail
}

fn trigamma_asymptotic(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let tail = r
        * (1.0 / 6.0
            - r * (1.0 / 30.0
                - r * (1.0 / 42.0 - r * (1.0 / 30.0 - r * (5.0 / 66.0 - r * (691.0 / 2730.0 - r * 7.0 / 6.0))))));
    (1.0 + 0.5 / x + tail) / x
}

/// ψ(x) for any real x that is not a nonpositive integer.
pub fn digamma_real(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        // reflection ψ(x) = ψ(1 − x) − π cot(πx)
        return digamma_real(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT {
        acc += 1.0 / y;
        y += 1.0;
    }
    digamma_asymptotic(y) - acc
}

/// ψ'(x) for any real x that is not a nonpositive integer.
pub fn trigamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    trigamma_asymptotic(y) + acc
}

/// Digamma function Γ'/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("digamma", format!("x = {x} must be positive")));
    }
    Ok(digamma_real(x))
}

/// Trigamma function ψ'(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("trigamma", format!("x = {x} must be positive")));
    }
    Ok(trigamma_real(x))
}

/// Complex digamma for Re z > 0, by upward recurrence and Stirling's series.
pub fn digamma_complex(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < SHIFT || w.re < 1.0 {
        acc += w.inv();
        w += 1.0;
    }
    let r = (w * w).inv();
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    w.ln() - 0.5 * w.inv() - tail - acc
}

fn bernoulli_numbers() -> &'static [f64] {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| {
        // exact values through B₃₀; beyond, B_{2n} = (−1)^{n+1} 2 (2n)! ζ(2n) / (2π)^{2n}
        const EVEN: [(f64, f64); 16] = [
            (1.0, 1.0),
            (1.0, 6.0),
            (-1.0, 30.0),
            (1.0, 42.0),
            (-1.0, 30.0),
            (5.0, 66.0),
            (-691.0, 2730.0),
            (7.0, 6.0),
            (-3617.0, 510.0),
            (43867.0, 798.0),
            (-174611.0, 330.0),
            (854513.0, 138.0),
            (-236364091.0, 2730.0),
            (8553103.0, 6.0),
            (-23749461029.0, 870.0),
            (8615841276005.0, 14322.0),
        ];
        let n = 80;
        let mut b = vec![0.0f64; n + 1];
        b[1] = -0.5;
        let mut fact = 1.0f64;
        for m in 1..=n {
            fact *= m as f64;
            if m % 2 == 1 {
                continue;
            }
            b[m] = if m / 2 < EVEN.len() {
                EVEN[m / 2].0 / EVEN[m / 2].1
            } else {
                let zeta: f64 = (1..=60).rev().map(|k| (k as f64).powi(-(m as i32))).sum();
                let sign = if (m / 2) % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * fact * zeta / (2.0 * PI).powi(m as i32)
            };
        }
        b[0] = 1.0;
        b
    })
}

/// Bernoulli number B_n (B₁ = −1/2), n ≤ 80.
pub fn bernoulli(n: usize) -> f64 {
    bernoulli_numbers()[n]
}

/// Bernoulli polynomial B_n(x) = Σ C(n,k) B_k x^{n−k}, n ≤ 80.
pub fn bernoulli_poly(n: usize, x: f64) -> f64 {
    let b = bernoulli_numbers();
    // Horner in x over the coefficients C(n,k) B_k of x^{n−k}
    let mut c = 1.0;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(c * b[k]);
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    // coeffs[k] multiplies x^{n−k}
    coeffs.iter().fold(0.0, |acc, ck| acc * x + ck)
}

/// ζ(2 − k, a) = −B_{k−1}(a)/(k − 1) for integer k ≥ 2.
pub fn hurwitz_zeta_nonpos(k: usize, a: f64) -> f64 {
    assert!(k >= 2, "hurwitz_zeta_nonpos needs k >= 2");
    -bernoulli_poly(k - 1, a) / (k - 1) as f64
}

/// Φ(e^{−ε}, 2, a) for small ε > 0 from the expansion
/// e^{aε}[ζ(2,a) + ε(log ε + γ₀ − 1 + ψ(a)) + Σ_{k≥2} ζ(2−k,a)(−ε)^k/k!].
fn lerch_near_one(eps: f64, a: f64, acc: &SpecFunAccuracy) -> Result<SeriesValue> {
    let mut s = KahanSum::new();
    s.add(trigamma_real(a));
    s.add(eps * (eps.ln() + EULER_GAMMA - 1.0 + digamma_real(a)));
    let mut pow = -eps; // (−ε)^k / k!
    let mut last = f64::INFINITY;
    let mut k = 2;
    while k <= 60 {
        pow *= -eps / k as f64;
        let term = hurwitz_zeta_nonpos(k, a) * pow;
        s.add(term);
        last = term.abs();
        if last < acc.abs_tol * 1e-3 && k > 3 {
            break;
        }
        k += 1;
    }
    if last > acc.abs_tol {
        return Err(Error::Truncation { op: "lerch_phi2", terms: k, tol: acc.abs_tol });
    }
    Ok(SeriesValue { value: (a * eps).exp() * s.value(), terms: k, err: last })
}

/// Hurwitz-Lerch transcendent Φ(z, 2, a) = Σ_{n≥0} zⁿ/(n+a)² for
/// z ∈ [0, 1], a > 0.
pub fn lerch_phi2(z: f64, a: f64, acc: &SpecFunAccuracy) -> Result<SeriesValue> {
    if !(0.0..=1.0).contains(&z) || !(a > 0.0) {
        return Err(Error::domain("lerch_phi2", format!("z = {z}, a = {a}")));
    }
    lerch_phi2_any(z, a, acc)
}

/// Φ(z, 2, a) for z ∈ [0, 1] and any real a that is not a nonpositive
/// integer; terms with n + a < 0 are peeled off explicitly.
pub fn lerch_phi2_any(z: f64, a: f64, acc: &SpecFunAccuracy) -> Result<SeriesValue> {
    if a <= 0.0 {
        if a == a.floor() {
            return Err(Error::domain("lerch_phi2", format!("a = {a} is a nonpositive integer")));
        }
        let m = (-a).floor() as usize + 1;
        let mut s = KahanSum::new();
        let mut zn = 1.0;
        for n in 0..m {
            let d = n as f64 + a;
            s.add(zn / (d * d));
            zn *= z;
        }
        if zn == 0.0 {
            return Ok(SeriesValue { value: s.value(), terms: m, err: 0.0 });
        }
        let rest = lerch_phi2_any(z, a + m as f64, acc)?;
        s.add(zn * rest.value);
        return Ok(SeriesValue { value: s.value(), terms: m + rest.terms, err: zn * rest.err });
    }
    if z == 0.0 {
        return Ok(SeriesValue { value: 1.0 / (a * a), terms: 1, err: 0.0 });
    }
    if z == 1.0 {
        return Ok(SeriesValue { value: trigamma_real(a), terms: 0, err: 1e-15 * trigamma_real(a) });
    }
    if 1.0 - z < 1e-4 {
        return lerch_near_one(-z.ln(), a, acc);
    }
    let mut s = KahanSum::new();
    let mut zn = 1.0;
    let mut n = 0usize;
    loop {
        let d = n as f64 + a;
        s.add(zn / (d * d));
        n += 1;
        zn *= z;
        let d = n as f64 + a;
        let bound = zn / (d * d * (1.0 - z));
        if bound < acc.abs_tol {
            return Ok(SeriesValue { value: s.value(), terms: n, err: bound });
        }
        if n >= acc.max_terms {
            return Err(Error::Truncation { op: "lerch_phi2", terms: n, tol: acc.abs_tol });
        }
    }
}

/// Small-t expansion of C − e^{−t/2}Φ(e^{−2t}, 2, 1/4):
/// 2t log(1/t) + A t − Σ_{k=2}^{terms} ζ(2−k, 1/4)(−2t)^k/k!.
pub fn g_infty_smallt(t: f64, terms: usize, acc: &SpecFunAccuracy) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) || terms < 2 {
        return Err(Error::domain("g_infty_smallt", format!("t = {t}, terms = {terms}")));
    }
    let mut s = KahanSum::new();
    s.add(-2.0 * t * t.ln());
    s.add(a_const() * t);
    let mut pow = 1.0;
    for k in 1..=terms + 1 {
        pow *= -2.0 * t / k as f64;
        if k < 2 {
            continue;
        }
        let term = hurwitz_zeta_nonpos(k, 0.25) * pow;
        if k == terms + 1 {
            if term.abs() > acc.abs_tol {
                return Err(Error::Truncation { op: "g_infty_smallt", terms, tol: acc.abs_tol });
            }
        } else {
            s.add(-term);
        }
    }
    Ok(s.value())
}
