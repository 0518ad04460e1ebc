mod common;

use common::{small_table, von_mangoldt};
use zscrew::mangoldt::*;
use zscrew::quad::QuadOptions;
use zscrew::specfun::{digamma_real, SpecFunAccuracy, LN_PI};

fn acc() -> SpecFunAccuracy {
    SpecFunAccuracy::default()
}

fn psi(t: f64) -> f64 {
    psi_prime_side(t, small_table(), &acc()).unwrap().value
}

#[test]
fn lambda_matches_trial_division() {
    let tb = small_table();
    let ln2 = 2f64.ln();
    assert!((tb.lambda(2) - ln2).abs() < 1e-15);
    assert!((tb.lambda(8) - ln2).abs() < 1e-15);
    assert_eq!(tb.lambda(6), 0.0);
    assert!((tb.lambda(9) - 3f64.ln()).abs() < 1e-15);
    let mut x: u64 = 12345;
    for _ in 0..2000 {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let n = 2 + (x >> 33) % ((1 << 24) - 2);
        assert!((tb.lambda(n) - von_mangoldt(n)).abs() < 1e-12, "n = {n}");
    }
    for n in 1..3000u64 {
        assert!((tb.lambda(n) - von_mangoldt(n)).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn chebyshev_psi_accumulates_lambda() {
    let tb = small_table();
    let mut s = 0.0;
    let mut prev = 0.0;
    for n in 1..=20_000u64 {
        s += von_mangoldt(n);
        if n % 997 == 0 || n == 20_000 {
            let c = tb.chebyshev_psi(n);
            assert!((c - s).abs() < 1e-9 * s.max(1.0), "n = {n}");
            assert!(c >= prev);
            prev = c;
        }
    }
}

#[test]
fn weighted_sum_against_naive_loop() {
    let tb = small_table();
    assert_eq!(chebyshev_weighted(0.5, tb).unwrap(), 0.0);
    assert_eq!(chebyshev_weighted(2f64.ln(), tb).unwrap(), 0.0);
    for &t in &[3.0f64, 7.3, 11.0] {
        let top = t.exp().floor() as u64;
        let naive: f64 = (2..=top).map(|n| von_mangoldt(n) / (n as f64).sqrt() * (t - (n as f64).ln())).sum();
        let v = chebyshev_weighted(t, tb).unwrap();
        assert!((v - naive).abs() < 1e-12 * naive.max(1.0), "t = {t}: {v} {naive}");
    }
    assert_eq!(asymptotic_ratio(0.5, tb).unwrap(), 0.0);
    assert!(chebyshev_weighted(20.0, tb).is_err());
}

#[test]
fn psi_reference_values() {
    assert_eq!(psi(0.0), 0.0);
    assert!((psi(0.464002) - 0.0396618).abs() < 1e-6);
    for &t in &[0.3, 1.7, 4.2] {
        assert_eq!(psi(t), psi(-t));
    }
}

#[test]
fn derivative_roots_and_blowup() {
    assert!(psi_prime_derivative(0.152631).unwrap().abs() <= 1e-4);
    assert!(psi_prime_derivative(0.464002).unwrap().abs() <= 1e-4);
    // arctanh(e^{−t/2}) ≈ (1/2)log(4/t) drives the blow-up
    assert!((psi_prime_derivative(1e-6).unwrap() - 5.700210663327).abs() < 1e-9);
    let d = psi_prime_derivative(1e-12).unwrap() - psi_prime_derivative(1e-6).unwrap();
    assert!((d - 0.5 * 1e6f64.ln()).abs() < 1e-5);
    assert!(psi_prime_derivative(0.8).is_err());
}

#[test]
fn omega_variants_vanish_at_origin_and_reduce() {
    let tb = small_table();
    for i in -8..=8 {
        let om = i as f64 / 8.0;
        let v = psi_omega_prime_side(0.0, om, tb, &acc()).unwrap().value;
        assert!(v.abs() < 1e-12, "omega = {om}");
        let v = psi_omega_prime_side(1e-9, om, tb, &acc()).unwrap().value;
        assert!(v.abs() < 1e-7, "omega = {om}: {v}");
    }
    for &t in &[0.1, 1.0, 3.0] {
        assert_eq!(psi_omega_prime_side(t, 0.0, tb, &acc()).unwrap().value, psi(t));
    }
}

fn breaks(t: f64) -> Vec<f64> {
    small_table().log_breakpoints(t, 10_000)
}

fn opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 20_000 }
}

#[test]
fn half_shift_matches_closed_form() {
    let tb = small_table();
    for &t in &[0.5, 1.0, 2.0] {
        let shifted = psi_omega_shift(psi, 0.5, t, &breaks(t), opts()).unwrap();
        let direct = psi_omega_prime_side(t, 0.5, tb, &acc()).unwrap().value;
        assert!((shifted - direct).abs() < 1e-6, "t = {t}: {shifted} {direct}");
    }
    // the generic formula on either side of 1/2 joins the dedicated one
    let h = 1e-3;
    let mid = 0.5
        * (psi_omega_prime_side(1.0, 0.5 + h, tb, &acc()).unwrap().value
            + psi_omega_prime_side(1.0, 0.5 - h, tb, &acc()).unwrap().value);
    let at = psi_omega_prime_side(1.0, 0.5, tb, &acc()).unwrap().value;
    assert!((mid - at).abs() < 1e-5, "{mid} {at}");
}

#[test]
fn shift_limits_and_composition() {
    let tb = small_table();
    let s = psi_omega_shift(psi, 1e-8, 1.5, &breaks(1.5), opts()).unwrap();
    assert!((s - psi(1.5)).abs() < 1e-7);
    let p03 = |u: f64| psi_omega_prime_side(u, 0.3, tb, &acc()).unwrap().value;
    let s1 = psi_omega_shift(psi, 0.3, 2.0, &breaks(2.0), opts()).unwrap();
    assert!((s1 - p03(2.0)).abs() < 1e-6);
    let twice = psi_omega_shift(p03, 0.2, 2.0, &breaks(2.0), opts()).unwrap();
    let once = psi_omega_shift(psi, 0.5, 2.0, &breaks(2.0), opts()).unwrap();
    let direct = psi_omega_prime_side(2.0, 0.5, tb, &acc()).unwrap().value;
    assert!((twice - once).abs() < 1e-6);
    assert!((twice - direct).abs() < 1e-6);
    assert!(psi_omega_shift(psi, 0.0, 1.0, &[], opts()).is_err());
}

#[test]
fn continuous_across_prime_powers() {
    let eps = 1e-8;
    for n in [2u64, 3, 4, 5, 7, 8, 9] {
        let l = (n as f64).ln();
        let d = (psi(l + eps) - psi(l - eps)).abs();
        assert!(d <= 20.0 * eps, "n = {n}: {d}");
    }
}

#[test]
fn positive_and_bounded_on_fine_grid() {
    let tb = small_table();
    let t_max = tb.t_max();
    let mut k = 1;
    let mut sup: f64 = 0.0;
    loop {
        let t = k as f64 * 1e-3;
        if t > t_max {
            break;
        }
        let v = psi(t);
        assert!(v > 0.0, "t = {t}: {v}");
        sup = sup.max(v);
        k += 1;
    }
    assert!(sup < 0.094, "sup = {sup}");
}

#[test]
fn omega_at_least_half_is_nonnegative() {
    let tb = small_table();
    for &om in &[0.5, 0.75, 1.0] {
        let mut t = 0.01;
        while t <= tb.t_max() {
            let v = psi_omega_prime_side(t, om, tb, &acc()).unwrap().value;
            assert!(v >= 0.0, "omega = {om}, t = {t}: {v}");
            t += 0.01;
        }
    }
}

/// ζ(s) and ζ'(s) for real s > 1 by Euler-Maclaurin summation.
fn zeta_and_derivative(s: f64) -> (f64, f64) {
    const N: usize = 40;
    const B: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let nf = N as f64;
    let ln = nf.ln();
    let mut z = 0.0;
    let mut dz = 0.0;
    for n in 1..N {
        let x = (n as f64).powf(-s);
        z += x;
        dz -= (n as f64).ln() * x;
    }
    let a = nf.powf(1.0 - s) / (s - 1.0);
    z += a + 0.5 * nf.powf(-s);
    dz += a * (-ln - 1.0 / (s - 1.0)) - 0.5 * ln * nf.powf(-s);
    let mut fact = 1.0;
    for (k, b) in B.iter().enumerate() {
        let k = k + 1;
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        let mut p = 1.0;
        let mut dp = 0.0;
        for j in 0..(2 * k - 1) {
            dp = dp * (s + j as f64) + p;
            p *= s + j as f64;
        }
        let w = nf.powf(-s - (2 * k) as f64 + 1.0);
        z += b / fact * p * w;
        dz += b / fact * w * (dp - ln * p);
    }
    (z, dz)
}

#[test]
fn xi_log_derivative_against_euler_maclaurin() {
    let s = 1.5;
    let (z, dz) = zeta_and_derivative(s);
    assert!((z - 2.612375348685488).abs() < 1e-13);
    let oracle = 1.0 / (s - 1.0) + 1.0 / s - 0.5 * LN_PI + 0.5 * digamma_real(0.5 * s) + dz / z;
    let v = xi_log_derivative(s, small_table()).unwrap();
    assert!((v - oracle).abs() < 1e-6, "{v} {oracle}");
    assert!(xi_log_derivative(1.0, small_table()).is_err());
}

#[test]
fn prime_side_struct_matches_function() {
    let p = PrimeSide::new(small_table());
    assert_eq!(p.call(1.3), psi(1.3));
    assert!(p.eval(17.0).is_err());
}
