//! Acceptance checks as JSON-lines records (id, target, computed, tol, pass).

use crate::commands::acc;
use crate::context::Ctx;
use crate::error::CliError;
use serde_json::{json, Value};
use std::f64::consts::PI;
use zscrew::mangoldt::*;
use zscrew::moments::*;
use zscrew::operator::{discretize, spectrum, zero_system_spectrum_completed, NodeScheme};
use zscrew::quad::{adaptive_breaks, sign_changes, QuadOptions};
use zscrew::specfun::EULER_GAMMA;
use zscrew::weil::*;
use zscrew::zerotable::{li_from_zeros, psi_zero_side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Spectra,
    Moments,
    All,
}

pub struct Record {
    pub id: String,
    pub target: Value,
    pub computed: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Record {
    /// |computed − target| ≤ tol.
    fn near(id: impl Into<String>, target: f64, computed: f64, tol: f64) -> Self {
        Record { id: id.into(), target: json!(target), computed, tol, pass: (computed - target).abs() <= tol }
    }

    /// A one-sided condition described by `target`.
    fn cond(id: impl Into<String>, target: &str, computed: f64, tol: f64, pass: bool) -> Self {
        Record { id: id.into(), target: json!(target), computed, tol, pass }
    }

    pub fn to_json(&self) -> String {
        let computed = serde_json::Number::from_f64(self.computed).map_or(Value::Null, Value::Number);
        json!({ "id": self.id, "target": self.target, "computed": computed, "tol": self.tol, "pass": self.pass })
            .to_string()
    }
}

pub fn run(ctx: &Ctx, suite: Suite) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        identities(ctx, &mut out)?;
    }
    if matches!(suite, Suite::Moments | Suite::All) {
        moments(ctx, &mut out)?;
    }
    if matches!(suite, Suite::Spectra | Suite::All) {
        spectra(ctx, &mut out)?;
    }
    Ok(out)
}

fn identities(ctx: &Ctx, out: &mut Vec<Record>) -> Result<(), CliError> {
    let tb = ctx.primes_full()?;
    let z = ctx.zeros()?;
    let tail = ctx.tail()?;
    let acc = acc(ctx)?;
    let psi = |t: f64| psi_prime_side(t, &tb, &acc).map(|r| r.value);

    let roots = sign_changes(psi_prime_derivative, 0.01, 0.69, 0.01, 1e-13)?;
    if roots.len() != 2 {
        return Err(CliError::numerical(format!("expected two critical points on (0, log 2), found {}", roots.len())));
    }
    out.push(Record::near("1.t1", 0.152631, roots[0], 1e-5));
    out.push(Record::near("1.t2", 0.464002, roots[1], 1e-5));
    out.push(Record::near("1.psi_t2", 0.0396618, psi(roots[1])?, 1e-6));

    let mut hw: f64 = 0.0;
    for &t in &[0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let iv = psi_zero_side(t, z, &tail);
        let p = psi(t)?;
        let outside = (iv.lower - p).max(p - iv.upper).max(0.0);
        out.push(Record::cond(format!("2.enclosure.t={t}"), "prime side inside zero-side interval", outside, 0.0, iv.contains(p)));
        hw = hw.max(iv.half_width());
    }
    out.push(Record::cond("2.half_width", "<= 4e-3", hw, 4e-3, hw <= 4e-3));

    let mut sup: f64 = 0.0;
    for k in 0..=1000 {
        sup = sup.max(psi(k as f64 * 10f64.ln() / 1000.0)?);
    }
    out.push(Record::cond("3.sup", "< 0.094", sup, 0.0, sup < 0.094));
    let mut min = f64::INFINITY;
    for k in 1..=(tb.t_max() / 1e-3).floor() as usize {
        min = min.min(psi(k as f64 * 1e-3)?);
    }
    out.push(Record::cond(format!("3.positivity.t_max={:.4}", tb.t_max()), "> 0", min, 0.0, min > 0.0));

    for &t in &[0.5, 1.0, 2.0, 3.0] {
        let d = triangle(t)?;
        let r = explicit_formula_rhs(&d, &tb, ArchimedeanOptions::default())?.with_lhs(explicit_formula_lhs(&d, z, &tail));
        out.push(Record::near(format!("4.weil.t={t}"), 0.0, r.rhs - psi(t)?, 1e-4));
    }

    for &(a, k) in &[(1.0, 1u32), (1.0, 3), (2.0, 2)] {
        let l = chi_pairing_lhs(k, a, z, &tail)?;
        let r = chi_pairing_rhs(k, a, &tb, &acc)?;
        out.push(Record::near(format!("5.chi.a={a}.k={k}"), 0.0, l.total() - r.total(), 1e-4));
    }
    let mut pts = Vec::new();
    for k in 8..=64u32 {
        let v = chi_pairing_rhs(k, 1.0, &tb, &acc)?.total().abs();
        let x = (k as f64).ln();
        pts.push((x, (v / x).ln()));
    }
    out.push(Record::near("5.decay_exponent", 2.0, -slope(&pts), 0.2));

    out.push(Record::near("10.asymptotic_ratio.t=20", 1.0, asymptotic_ratio(20.0, &tb)?, 0.05));

    let t_max = tb.t_max();
    let mut br = vec![0.0];
    br.extend(tb.log_breakpoints(10.0, 100_000));
    br.push(t_max);
    let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-13, max_intervals: 100_000 };
    let integrand = |t: f64| psi(t).map(|v| v * (-t).exp()).unwrap_or(f64::NAN);
    let (v, _) = adaptive_breaks(integrand, &br, opts)?;
    let x = xi_log_derivative(1.5, &tb)?;
    out.push(Record::near("11.fourier.z=i", x, v + 0.5 * 0.094 * (-t_max).exp(), 1e-6));

    let qo = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 20_000 };
    for &t in &[0.5, 1.0, 2.0] {
        let s = psi_omega_shift(|u| psi(u).unwrap_or(f64::NAN), 0.5, t, &tb.log_breakpoints(t, 10_000), qo)?;
        let d = psi_omega_prime_side(t, 0.5, &tb, &acc)?.value;
        out.push(Record::near(format!("12.shift.t={t}"), d, s, 1e-6));
    }
    let mut red: f64 = 0.0;
    for &t in &[0.1, 0.5, 1.0, 5.0, 15.0] {
        red = red.max((psi_omega_prime_side(t, 0.0, &tb, &acc)?.value - psi(t)?).abs());
    }
    out.push(Record::near("12.omega0_reduction", 0.0, red, 1e-12));
    let f = |t: f64| psi_omega_prime_side(t, -0.1, &tb, &acc).map(|r| r.value);
    let ch = sign_changes(f, 0.05, t_max, 0.05, 1e-9)?;
    let first = ch.first().copied().unwrap_or(f64::NAN);
    out.push(Record::cond("12.sign_change.omega=-0.1", "sign change exists", first, 0.0, !ch.is_empty()));
    Ok(())
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 * p.0, b + p.0 * p.1));
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn moments(ctx: &Ctx, out: &mut Vec<Record>) -> Result<(), CliError> {
    let tb = ctx.primes_full()?;
    let z = ctx.zeros()?;
    let tail = ctx.tail()?;
    let cfg = MomentConfig { t_cut: ctx.cfg.t_cut, acc: acc(ctx)?, ..MomentConfig::default() };
    let mu = moment_sequence(11, &tb, z, &cfg)?;
    for n in 1..=6 {
        let a = li_from_zeros(n, z, &tail)?.value;
        out.push(Record::near(format!("6.lambda.n={n}"), a, li_from_moments(&mu, n)?, 1e-3));
    }
    let classical = 1.0 + 0.5 * EULER_GAMMA - (2.0 * PI.sqrt()).ln();
    out.push(Record::near("6.lambda1_closed_form", classical, li_from_zeros(1, z, &tail)?.value, 1e-5));
    let rt = (1..=12).map(|n| transform_matrices(n).map(|t| t.roundtrip_err)).collect::<Result<Vec<_>, _>>()?;
    out.push(Record::near("6.transform_roundtrip", 0.0, rt.into_iter().fold(0.0, f64::max), 1e-10));

    let li = li_sequence_from_zeros(12, z, &tail)?;
    let a = a_from_li(&li, 12)?;
    let mut bmin = f64::INFINITY;
    for n in 0..=5 {
        out.push(Record::near(format!("7.recurrence.n={n}"), 0.0, recurrence_residual(n, &mu.values, &a)?, 1e-4));
        for k in 0..=n {
            bmin = bmin.min(b_coeff(n, k, &a)?);
        }
    }
    out.push(Record::cond("7.b_min", "> 0", bmin, 0.0, bmin > 0.0));

    for n in 0..=5 {
        for shifted in [false, true] {
            let h = hankel_det(&mu, n, shifted)?;
            let id = format!("8.hankel{}.n={n}", if shifted { "_shifted" } else { "" });
            out.push(Record::cond(id, "det - err > 0", h.det - h.err, h.err, h.certainly_positive()));
        }
    }
    Ok(())
}

fn spectra(ctx: &Ctx, out: &mut Vec<Record>) -> Result<(), CliError> {
    let tb = ctx.primes_for("report", 2.0)?;
    let acc = acc(ctx)?;
    let ps = PrimeSide::new(&tb);
    let run = |a: f64| -> Result<_, CliError> {
        let d = discretize(a, 200, |t| ps.call(t), &tb.log_breakpoints(2.0 * a, 100_000), NodeScheme::CompositeGauss)?;
        Ok(spectrum(&d)?)
    };
    let s = run(1.0)?;
    out.push(Record::cond("9.min_eig.a=1", ">= -1e-9", s.min_eig, 1e-9, s.min_eig >= -1e-9));
    let mut br = vec![0.0];
    br.extend(tb.log_breakpoints(1.0, 100));
    br.push(1.0);
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 20_000 };
    let integral = 4.0 * adaptive_breaks(|t| psi_prime_side(t, &tb, &acc).map_or(f64::NAN, |r| r.value), &br, opts)?.0;
    out.push(Record::near("9.trace.a=1", integral, s.trace_eigsum, 1e-6));
    let zs = zero_system_spectrum_completed(1.0, ctx.zeros()?, 2000)?;
    let dev = (0..5).map(|k| (zs[k] - s.eigenvalues[k]).abs()).fold(0.0, f64::max);
    out.push(Record::near("9.zero_system_top5.m=2000", 0.0, dev, 1e-3));
    let small = run(0.1)?;
    out.push(Record::cond("9.min_eig.a=0.1", "> 0", small.min_eig, 0.0, small.min_eig > 0.0));
    Ok(())
}
