//! Subcommand implementations; each returns a table for the emitter.

use crate::context::Ctx;
use crate::error::CliError;
use crate::output::{Cell, Table};
use std::f64::consts::LN_2;
use zscrew::mangoldt::{psi_omega_prime_side, psi_prime_side, PrimeSide};
use zscrew::moments::{hankel_det, li_from_moments, li_sequence_from_zeros, moment_sequence, MomentConfig};
use zscrew::operator::{discretize, spectrum, zero_system_spectrum, zero_system_spectrum_completed, NodeScheme};
use zscrew::quad::sign_changes;
use zscrew::specfun::SpecFunAccuracy;
use zscrew::weil::{chi_pairing_lhs, chi_pairing_rhs, explicit_formula_lhs, explicit_formula_rhs, triangle, ArchimedeanOptions};
use zscrew::zerotable::{psi_omega_zero_side, psi_zero_side};

const MAX_ROWS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Side {
    Prime,
    Zeros,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LiMethod {
    Zeros,
    Moments,
    Both,
}

pub fn acc(ctx: &Ctx) -> Result<SpecFunAccuracy, CliError> {
    Ok(SpecFunAccuracy::new(ctx.cfg.abs_tol, SpecFunAccuracy::default().max_terms)?)
}

/// lo, lo + step, … up to hi (hi included when it lies on the grid).
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(CliError::config(format!("bad range [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(vec![lo]);
    }
    if !(step > 0.0) {
        return Err(CliError::config(format!("step = {step} must be positive")));
    }
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor();
    if n >= MAX_ROWS as f64 {
        return Err(CliError::config(format!("{n} rows requested, limit {MAX_ROWS}")));
    }
    Ok((0..=n as usize).map(|k| lo + k as f64 * step).collect())
}

/// 1000 points spanning [0, log 10]; the row nearest log 2 is marked.
pub fn figure1_grid() -> Vec<f64> {
    let h = 10f64.ln() / 999.0;
    (0..1000).map(|k| if k == 999 { 10f64.ln() } else { k as f64 * h }).collect()
}

pub fn psi(ctx: &Ctx, ts: &[f64], side: Side, figure1: bool) -> Result<Table, CliError> {
    let mut cols = vec!["t", "psi_prime", "psi_zero_lo", "psi_zero_hi", "agree"];
    if figure1 {
        cols.push("log2_marker");
    }
    let mut table = Table::new(&cols);
    let t_hi = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let primes = if side != Side::Zeros { Some(ctx.primes_for("psi", t_hi)?) } else { None };
    let zeros = if side != Side::Prime { Some((ctx.zeros()?, ctx.tail()?)) } else { None };
    let acc = acc(ctx)?;
    let marker = figure1.then(|| {
        let mut best = 0;
        for (i, t) in ts.iter().enumerate() {
            if (t - LN_2).abs() < (ts[best] - LN_2).abs() {
                best = i;
            }
        }
        best
    });
    for (i, &t) in ts.iter().enumerate() {
        let p = match &primes {
            Some(tb) => Some(psi_prime_side(t, tb, &acc)?.value),
            None => None,
        };
        let iv = zeros.as_ref().map(|(z, tail)| psi_zero_side(t, z, tail));
        let agree = match (p, iv) {
            (Some(p), Some(iv)) => Cell::B(iv.contains(p)),
            _ => Cell::Null,
        };
        let mut row = vec![t.into(), p.into(), iv.map(|v| v.lower).into(), iv.map(|v| v.upper).into(), agree];
        if let Some(m) = marker {
            row.push((i == m).into());
        }
        table.push(row);
    }
    Ok(table)
}

fn check_omega(omega: f64) -> Result<(), CliError> {
    if !(-1.0..=1.0).contains(&omega) {
        return Err(CliError::config(format!("omega = {omega} outside [-1, 1]")));
    }
    Ok(())
}

pub fn psi_omega(ctx: &Ctx, omega: f64, ts: &[f64], side: Side) -> Result<Table, CliError> {
    check_omega(omega)?;
    let mut table = Table::new(&["t", "omega", "psi_omega_prime", "psi_omega_zero"]);
    let t_hi = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let primes = if side != Side::Zeros { Some(ctx.primes_for("psi-omega", t_hi)?) } else { None };
    let zeros = if side != Side::Prime { Some(ctx.zeros()?) } else { None };
    let acc = acc(ctx)?;
    for &t in ts {
        let p = match &primes {
            Some(tb) => Some(psi_omega_prime_side(t, omega, tb, &acc)?.value),
            None => None,
        };
        let z = zeros.map(|z| psi_omega_zero_side(t, omega, z));
        table.push(vec![t.into(), omega.into(), p.into(), z.into()]);
    }
    Ok(table)
}

pub fn scan_sign(ctx: &Ctx, omega: f64, t_max: f64, step: f64) -> Result<Table, CliError> {
    check_omega(omega)?;
    if !(t_max > 0.0) || !(step > 0.0) || step > t_max {
        return Err(CliError::config(format!("need 0 < step <= t_max, got step = {step}, t_max = {t_max}")));
    }
    let tb = ctx.primes_for("scan-sign", t_max)?;
    let acc = acc(ctx)?;
    let f = |t: f64| psi_omega_prime_side(t, omega, &tb, &acc).map(|r| r.value);
    let changes = sign_changes(f, step, t_max, step, 1e-10)?;
    let first = changes.first().map_or(Cell::S("none".into()), |&t| Cell::F(t));
    let mut table = Table::new(&["omega", "t_max", "first_sign_change", "count"]);
    table.push(vec![omega.into(), t_max.into(), first, changes.len().into()]);
    Ok(table)
}

fn moment_config(ctx: &Ctx) -> Result<MomentConfig, CliError> {
    Ok(MomentConfig { t_cut: ctx.cfg.t_cut, acc: acc(ctx)?, ..MomentConfig::default() })
}

pub fn moments(ctx: &Ctx, n_max: usize) -> Result<Table, CliError> {
    let tb = ctx.primes_full()?;
    let mu = moment_sequence(n_max, &tb, ctx.zeros()?, &moment_config(ctx)?)?;
    let mut table = Table::new(&["n", "mu", "est_error"]);
    for n in 0..=n_max {
        table.push(vec![n.into(), mu.values[n].into(), mu.est_errors[n].into()]);
    }
    Ok(table)
}

pub fn li(ctx: &Ctx, n_max: usize, method: LiMethod) -> Result<Table, CliError> {
    if n_max == 0 {
        return Err(CliError::config("n-max must be at least 1"));
    }
    let zs = if method != LiMethod::Moments {
        Some(li_sequence_from_zeros(n_max, ctx.zeros()?, &ctx.tail()?)?)
    } else {
        None
    };
    let mu = if method != LiMethod::Zeros {
        let tb = ctx.primes_full()?;
        Some(moment_sequence(n_max - 1, &tb, ctx.zeros()?, &moment_config(ctx)?)?)
    } else {
        None
    };
    let mut table = Table::new(&["n", "lambda_zeros", "lambda_moments", "difference"]);
    for n in 1..=n_max {
        let a = zs.as_ref().map(|s| s.values[n - 1]);
        let b = match &mu {
            Some(m) => Some(li_from_moments(m, n)?),
            None => None,
        };
        let d = a.zip(b).map(|(a, b)| a - b);
        table.push(vec![n.into(), a.into(), b.into(), d.into()]);
    }
    Ok(table)
}

pub fn hankel(ctx: &Ctx, n_max: usize) -> Result<Table, CliError> {
    let tb = ctx.primes_full()?;
    let mu = moment_sequence(2 * n_max + 1, &tb, ctx.zeros()?, &moment_config(ctx)?)?;
    let mut table = Table::new(&["n", "variant", "det", "err", "log_det", "certainly_positive"]);
    for n in 0..=n_max {
        for shifted in [false, true] {
            let h = hankel_det(&mu, n, shifted)?;
            let variant = if shifted { "shifted" } else { "plain" };
            table.push(vec![n.into(), variant.into(), h.det.into(), h.err.into(), h.log_det.into(), h.certainly_positive().into()]);
        }
    }
    Ok(table)
}

pub fn spectrum_cmd(ctx: &Ctx, a: f64, nodes: usize, zero_system: Option<usize>, plain: bool) -> Result<Table, CliError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CliError::config(format!("a = {a} must be positive")));
    }
    let tb = ctx.primes_for("spectrum", 2.0 * a)?;
    let ps = PrimeSide::new(&tb);
    let kinks = tb.log_breakpoints(2.0 * a, 100_000);
    let disc = discretize(a, nodes, |t| ps.call(t), &kinks, NodeScheme::CompositeGauss)?;
    let ny = spectrum(&disc)?.eigenvalues;
    let zs = match zero_system {
        Some(m) => {
            let z = ctx.zeros()?;
            Some(if plain { zero_system_spectrum(a, z, m)? } else { zero_system_spectrum_completed(a, z, m)? })
        }
        None => None,
    };
    let mut cols = vec!["index", "eigenvalue"];
    if zs.is_some() {
        cols.push("zero_system");
    }
    let rows = ny.len().max(zs.as_ref().map_or(0, |v| v.len()));
    let mut table = Table::new(&cols);
    for i in 0..rows {
        let mut row = vec![i.into(), ny.get(i).copied().into()];
        if let Some(z) = &zs {
            row.push(z.get(i).copied().into());
        }
        table.push(row);
    }
    Ok(table)
}

pub fn weil_check(ctx: &Ctx, ts: &[f64]) -> Result<Table, CliError> {
    let t_hi = ts.iter().fold(0.0f64, |m, t| m.max(*t));
    let tb = ctx.primes_for("weil-check", t_hi)?;
    let z = ctx.zeros()?;
    let tail = ctx.tail()?;
    let acc = acc(ctx)?;
    let mut table = Table::new(&[
        "t", "zero_side", "archimedean", "prime_side", "pole_terms", "log_pi_term", "lhs", "rhs", "residual", "psi_prime",
        "rhs_minus_psi",
    ]);
    for &t in ts {
        let d = triangle(t)?;
        let r = explicit_formula_rhs(&d, &tb, ArchimedeanOptions::from_accuracy(&acc))?.with_lhs(explicit_formula_lhs(&d, z, &tail));
        let p = psi_prime_side(t, &tb, &acc)?.value;
        table.push(vec![
            t.into(),
            r.zero_side.into(),
            r.archimedean.into(),
            r.prime_side.into(),
            r.pole_terms.into(),
            r.log_pi_term.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.residual.into(),
            p.into(),
            (r.rhs - p).into(),
        ]);
    }
    Ok(table)
}

pub fn chi_check(ctx: &Ctx, a: f64, ks: &[u32]) -> Result<Table, CliError> {
    let tb = ctx.primes_for("chi-check", 2.0 * a)?;
    let z = ctx.zeros()?;
    let tail = ctx.tail()?;
    let acc = acc(ctx)?;
    let mut table =
        Table::new(&["a", "k", "zero_first", "zero_second", "prime_first", "prime_second", "residual", "near_resonance"]);
    for &k in ks {
        let l = chi_pairing_lhs(k, a, z, &tail)?;
        let r = chi_pairing_rhs(k, a, &tb, &acc)?;
        table.push(vec![
            a.into(),
            (k as usize).into(),
            l.first.into(),
            l.second.into(),
            r.first.into(),
            r.second.into(),
            (l.total() - r.total()).into(),
            l.near_resonance.into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 0.0, 1.0).unwrap(), vec![0.0]);
        assert_eq!(grid(1.0, 2.0, 0.5).unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
        let f = figure1_grid();
        assert_eq!(f.len(), 1000);
        assert_eq!(f[0], 0.0);
        assert_eq!(*f.last().unwrap(), 10f64.ln());
    }
}
