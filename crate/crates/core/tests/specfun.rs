mod common;

use std::f64::consts::PI;
use zscrew::specfun::*;

fn acc() -> SpecFunAccuracy {
    SpecFunAccuracy::default()
}

#[test]
fn digamma_values() {
    assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
    let q = -EULER_GAMMA - PI / 2.0 - 3.0 * 2f64.ln();
    assert!((digamma(0.25).unwrap() - q).abs() < 1e-14);
    assert!((q + 4.2274535).abs() < 1e-7);
    assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-14);
    assert!(digamma(0.0).is_err());
    assert!(digamma(-1.5).is_err());
}

#[test]
fn trigamma_values() {
    assert!((trigamma(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
    assert!((trigamma(0.5).unwrap() - PI * PI / 2.0).abs() < 1e-13);
    assert!((trigamma(0.25).unwrap() - (PI * PI + 8.0 * catalan())).abs() < 1e-13);
    assert!((c_const() - 17.197329154507).abs() < 1e-11);
}

/// Σ zⁿ/(n + a)² summed directly for 10⁶ terms.
fn lerch_brute(z: f64, a: f64) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    let mut zn = 1.0;
    for n in 0..1_000_000 {
        let d = n as f64 + a;
        let y = zn / (d * d) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
        zn *= z;
        if zn == 0.0 {
            break;
        }
    }
    s
}

#[test]
fn lerch_values() {
    assert_eq!(lerch_phi2(0.0, 0.25, &acc()).unwrap().value, 16.0);
    assert!((lerch_phi2(1.0, 0.25, &acc()).unwrap().value - c_const()).abs() < 1e-13);
    let z = (-2f64).exp();
    let v = lerch_phi2(z, 0.25, &acc()).unwrap();
    assert!((v.value - lerch_brute(z, 0.25)).abs() < 1e-12);
    for &z in &[0.5, 0.9, 0.99, 0.999] {
        let v = lerch_phi2(z, 0.25, &acc()).unwrap().value;
        assert!((v - lerch_brute(z, 0.25)).abs() < 1e-12, "z = {z}");
    }
    assert!(lerch_phi2(1.5, 0.25, &acc()).is_err());
}

#[test]
fn lerch_near_one_against_slow_series() {
    // 1 − z below the switch: the brute series needs ~10⁷ terms, so compare
    // with the tail estimate Σ_{n≥N} zⁿ/(n+a)² ≈ z^N/(N+a) via an integral
    let z: f64 = (-5e-5f64).exp();
    let a = 0.25;
    let v = lerch_phi2(z, a, &acc()).unwrap().value;
    let n = 2_000_000usize;
    let mut s = 0.0;
    let mut zn = 1.0;
    for k in 0..n {
        let d = k as f64 + a;
        s += zn / (d * d);
        zn *= z;
    }
    // Σ_{k≥n} ≈ ∫_{n−1/2}^∞ z^x/(x+a)² dx, integrated numerically
    let eps = -z.ln();
    let tail = zscrew::quad::adaptive(
        |u: f64| {
            let x = (n as f64 - 0.5) / u;
            (-eps * x).exp() / ((x + a) * (x + a)) * x / u
        },
        0.0,
        1.0,
        zscrew::quad::QuadOptions::default(),
    )
    .unwrap()
    .0;
    assert!((v - (s + tail)).abs() < 1e-10, "{v} {}", s + tail);
}

#[test]
fn catalan_against_accelerated_series() {
    // Euler transform of the alternating series Σ (−1)^k/(2k+1)²
    let n = 60;
    let mut terms: Vec<f64> = (0..n).map(|k| 1.0 / ((2 * k + 1) as f64).powi(2)).collect();
    let mut s = 0.0;
    for j in 0..n {
        s += terms[0] / 2f64.powi(j as i32 + 1);
        let next: Vec<f64> = terms.windows(2).map(|w| w[0] - w[1]).collect();
        terms = next;
        if terms.is_empty() {
            break;
        }
    }
    assert!((catalan() - s).abs() < 1e-15);
    assert!((catalan() - 0.9159655942).abs() < 1e-10);
    // alternating partial sums bracket G
    let s0 = 1.0;
    let s1 = 1.0 - 1.0 / 9.0;
    assert!(s1 < catalan() && catalan() < s0);
}

/// Bernoulli polynomials as exact rationals p/q.
fn bernoulli_poly_exact(n: usize, x_num: i128, x_den: i128) -> (i128, i128) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    fn add(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        let n = a.0 * b.1 + b.0 * a.1;
        let d = a.1 * b.1;
        let g = gcd(n, d).max(1);
        (n / g, d / g)
    }
    fn mul(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        let n = a.0 * b.0;
        let d = a.1 * b.1;
        let g = gcd(n, d).max(1);
        (n / g, d / g)
    }
    // B_m from Σ_{k<m+1} C(m+1,k) B_k = 0
    let mut b: Vec<(i128, i128)> = vec![(1, 1)];
    for m in 1..=n {
        let mut s = (0, 1);
        let mut c: i128 = 1;
        for (k, bk) in b.iter().enumerate() {
            s = add(s, mul((c, 1), *bk));
            c = c * (m + 1 - k) as i128 / (k + 1) as i128;
        }
        b.push(mul(s, (-1, (m + 1) as i128)));
    }
    let mut out = (0, 1);
    let mut c: i128 = 1;
    for k in 0..=n {
        let xp = (x_num.pow((n - k) as u32), x_den.pow((n - k) as u32));
        out = add(out, mul(mul((c, 1), b[k]), xp));
        c = c * (n - k) as i128 / (k + 1) as i128;
    }
    out
}

#[test]
fn hurwitz_at_nonpositive_integers() {
    assert!((hurwitz_zeta_nonpos(2, 0.25) - 0.25).abs() < 1e-15);
    for k in 2..=12 {
        let (p, q) = bernoulli_poly_exact(k - 1, 1, 4);
        let exact = -(p as f64) / (q as f64) / (k - 1) as f64;
        assert!((hurwitz_zeta_nonpos(k, 0.25) - exact).abs() < 1e-14 * exact.abs().max(1.0), "k = {k}");
    }
}

#[test]
fn small_t_expansion() {
    let direct = |t: f64| c_const() - (-t / 2.0).exp() * lerch_phi2((-2.0 * t).exp(), 0.25, &acc()).unwrap().value;
    let v = g_infty_smallt(0.05, 20, &acc()).unwrap();
    assert!((v - direct(0.05)).abs() < 1e-10);
    for &t in &[1e-3, 1e-4, 1e-5] {
        let v = g_infty_smallt(t, 20, &acc()).unwrap();
        let r = v / (2.0 * t * (1.0 / t).ln());
        // the next term is A t, relatively A/(2 log(1/t))
        assert!((r - 1.0).abs() < a_const() / (2.0 * (1.0 / t).ln()) * 1.01, "t = {t}: {r}");
    }
    assert!((a_const() - (PI + 4.0 * 2f64.ln() + 2.0)).abs() < 1e-15);
}
