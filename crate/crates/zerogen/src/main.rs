//! Locates the first N ordinates of nontrivial zeta zeros with the
//! Riemann-Siegel formula and writes them one per line.
//!
//! Usage: `zerogen COUNT [OUT]`. The low-lying ordinates are best replaced by
//! high-precision values; see `tools/make_zeros.py`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::{BufWriter, Write};

/// Riemann-Siegel theta function, asymptotic form.
fn theta(t: f64) -> f64 {
    let t2 = t * t;
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t * t2)
        + 31.0 / (80640.0 * t * t2 * t2)
        + 127.0 / (430080.0 * t * t2 * t2 * t2)
}

fn theta_prime(t: f64) -> f64 {
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

fn rs_kernel(p: Complex64) -> Complex64 {
    let two_pi = Complex64::new(2.0 * PI, 0.0);
    (two_pi * (p * p - p - 1.0 / 16.0)).cos() / (two_pi * p).cos()
}

/// Derivatives 0..=12 of the Riemann-Siegel kernel at real `p`, by the
/// trapezoidal rule on a circle (the kernel is entire).
fn kernel_derivatives(p: f64) -> [f64; 13] {
    const M: usize = 96;
    const R: f64 = 0.55;
    let mut samples = [(Complex64::new(0.0, 0.0), 0.0); M];
    for (j, slot) in samples.iter_mut().enumerate() {
        // offset the nodes so none lands on a removable singularity
        let phi = 2.0 * PI * (j as f64 + 0.37) / M as f64;
        let w = Complex64::from_polar(R, phi);
        *slot = (rs_kernel(Complex64::new(p, 0.0) + w), phi);
    }
    let mut out = [0.0; 13];
    let mut fact = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        let scale = R.powi(-(k as i32));
        let acc: Complex64 = samples
            .iter()
            .map(|&(f, phi)| f * Complex64::from_polar(scale, -(k as f64) * phi))
            .sum();
        *slot = fact * acc.re / M as f64;
    }
    out
}

fn rs_remainder(p: f64, a: f64) -> f64 {
    let d = kernel_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    let c0 = d[0];
    let c1 = -d[3] / (96.0 * pi2);
    let c2 = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4);
    let c3 = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5308416.0 * pi6);
    let c4 = d[0] / (128.0 * pi2)
        + 19.0 * d[4] / (24576.0 * pi4)
        + 11.0 * d[8] / (5898240.0 * pi6)
        + d[12] / (2038431744.0 * pi8);
    c0 + a * (c1 + a * (c2 + a * (c3 + a * c4)))
}

struct Hardy {
    inv_sqrt: Vec<f64>,
    ln: Vec<f64>,
}

impl Hardy {
    fn new(t_max: f64) -> Self {
        let n_max = (t_max / (2.0 * PI)).sqrt() as usize + 2;
        Hardy {
            inv_sqrt: (1..=n_max).map(|n| 1.0 / (n as f64).sqrt()).collect(),
            ln: (1..=n_max).map(|n| (n as f64).ln()).collect(),
        }
    }

    /// Hardy's Z function via Riemann-Siegel with four correction terms.
    fn z(&self, t: f64) -> f64 {
        let tau = (t / (2.0 * PI)).sqrt();
        let n = tau.floor() as usize;
        let p = tau - n as f64;
        let th = theta(t);
        let mut sum = 0.0;
        for k in 0..n {
            sum += self.inv_sqrt[k] * (th - t * self.ln[k]).cos();
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        2.0 * sum + sign * tau.powf(-0.5) * rs_remainder(p, 1.0 / tau)
    }
}

fn gram_point(n: i64, guess: f64) -> f64 {
    let target = n as f64 * PI;
    let mut t = guess;
    for _ in 0..50 {
        let dt = (theta(t) - target) / theta_prime(t);
        t -= dt;
        if dt.abs() < 1e-13 * t {
            break;
        }
    }
    t
}

/// Illinois-modified regula falsi on a bracketing interval.
fn refine(h: &Hardy, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < 1e-13 * b {
            return c;
        }
        let fc = h.z(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Appends sign changes of Z on (a, b] found with `sub` equal steps.
fn scan(h: &Hardy, a: f64, b: f64, sub: usize, zeros: &mut Vec<f64>) {
    let mut ta = a;
    let mut fa = h.z(ta);
    for s in 1..=sub {
        let tb = a + (b - a) * s as f64 / sub as f64;
        let fb = h.z(tb);
        if (fa > 0.0) != (fb > 0.0) {
            zeros.push(refine(h, ta, fa, tb, fb));
        }
        ta = tb;
        fa = fb;
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let count: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let out_path = args.get(2).cloned().unwrap_or_else(|| "zeros_rs.txt".to_string());
    const SUB: usize = 24;

    // N(T) ~ (T/2pi) log(T/2pi): generous upper bound for the table size
    let mut t_max = 100.0;
    while (t_max / (2.0 * PI)) * (t_max / (2.0 * PI)).ln() - t_max / (2.0 * PI) < count as f64 + 100.0 {
        t_max *= 1.1;
    }
    let h = Hardy::new(t_max * 1.1);

    let mut zeros: Vec<f64> = Vec::with_capacity(count + 16);
    let mut g_prev = gram_point(-1, 9.7);
    // last Gram point at which the count was confirmed, and the count there
    let mut checked = (g_prev, 0usize);
    let mut n: i64 = 0;
    let mut mismatches = 0usize;
    while zeros.len() < count {
        let g = gram_point(n, g_prev + 2.0 * PI / (g_prev / (2.0 * PI)).ln().max(1.0));
        scan(&h, g_prev, g, SUB, &mut zeros);
        let fa = h.z(g);
        // at a good Gram point N(g_n) = n + 1 unless S(g_n) != 0
        let good = if n % 2 == 0 { fa > 0.0 } else { fa < 0.0 };
        if good {
            if zeros.len() as i64 != n + 1 {
                // rescan everything since the last confirmed point more finely
                let mut fine = SUB * 16;
                loop {
                    zeros.truncate(checked.1);
                    let steps = ((g - checked.0) / (g - g_prev)).round().max(1.0) as usize;
                    scan(&h, checked.0, g, fine * steps, &mut zeros);
                    if zeros.len() as i64 == n + 1 || fine > SUB * 4096 {
                        break;
                    }
                    fine *= 4;
                }
                if zeros.len() as i64 != n + 1 {
                    mismatches += 1;
                    eprintln!("count mismatch at gram {n} (t={g:.3}): found {}", zeros.len());
                }
            }
            checked = (g, zeros.len());
        }
        g_prev = g;
        n += 1;
    }
    zeros.truncate(count);
    eprintln!("found {} zeros up to {:.6}; {} gram mismatches", zeros.len(), zeros[zeros.len() - 1], mismatches);

    let file = std::fs::File::create(&out_path).expect("create output");
    let mut w = BufWriter::new(file);
    for z in &zeros {
        writeln!(w, "{z:.12}").unwrap();
    }
}
