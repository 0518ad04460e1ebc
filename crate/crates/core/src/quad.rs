//! Quadrature rules: Gauss-Legendre nodes of any order, composite rules with
//! caller-supplied breakpoints, and a globally adaptive Gauss-Kronrod (10/21)
//! scheme that integrates several functions at once.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;
use std::cmp::Ordering;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let k = (i + 1) as f64;
        let nf = n as f64;
        let mut z = (std::f64::consts::PI * (k - 0.25) / (nf + 0.5)).cos()
            * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// A fixed Gauss-Legendre rule that can be mapped onto any interval.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mut s = crate::dd::KahanSum::new();
        for (x, w) in self.mapped(a, b) {
            s.add(w * f(x));
        }
        s.value()
    }
}

/// Composite Gauss-Legendre nodes over consecutive breakpoints, `per_panel`
/// nodes on each panel. Breakpoints must be ascending.
pub fn composite_nodes(breaks: &[f64], per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(per_panel);
    let mut x = Vec::with_capacity(per_panel * breaks.len());
    let mut w = Vec::with_capacity(per_panel * breaks.len());
    for pair in breaks.windows(2) {
        if pair[1] > pair[0] {
            for (xi, wi) in gl.mapped(pair[0], pair[1]) {
                x.push(xi);
                w.push(wi);
            }
        }
    }
    (x, w)
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077970749081398,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Tolerances and limits for [`adaptive`] and [`adaptive_vec`].
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 20_000 }
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    vals: Vec<f64>,
    errs: Vec<f64>,
    key: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.total_cmp(&o.key)
    }
}

fn gk21(dim: usize, f: &mut dyn FnMut(f64, &mut [f64]), a: f64, b: f64, buf: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(c, buf);
    for d in 0..dim {
        k[d] = WGK[10] * buf[d];
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        for x in [c - dx, c + dx] {
            f(x, buf);
            for d in 0..dim {
                k[d] += WGK[j] * buf[d];
                if j % 2 == 1 {
                    g[d] += WG[j / 2] * buf[d];
                }
            }
        }
    }
    let vals: Vec<f64> = k.iter().map(|v| v * h).collect();
    let errs: Vec<f64> = k.iter().zip(&g).map(|(kv, gv)| ((kv - gv) * h).abs()).collect();
    (vals, errs)
}

/// Adaptive Gauss-Kronrod integration of `dim` functions at once over the
/// panels `breaks[i]..breaks[i+1]`. `f(x, out)` fills `out[..dim]`. The
/// interval with the largest scaled error is bisected until every
/// component meets `max(abs_tol, rel_tol * |value|)`.
pub fn adaptive_vec(
    dim: usize,
    mut f: impl FnMut(f64, &mut [f64]),
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult> {
    let mut buf = vec![0.0; dim];
    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = vec![0.0; dim];
    let scale_key = |errs: &[f64], tot: &[f64]| -> f64 {
        errs.iter()
            .zip(tot)
            .map(|(e, t)| e / opts.abs_tol.max(opts.rel_tol * t.abs()))
            .fold(0.0, f64::max)
    };
    let mut segs = Vec::new();
    for pair in breaks.windows(2) {
        if pair[1] > pair[0] {
            let (vals, errs) = gk21(dim, &mut f, pair[0], pair[1], &mut buf);
            for d in 0..dim {
                total[d] += vals[d];
                total_err[d] += errs[d];
            }
            segs.push(Segment { a: pair[0], b: pair[1], vals, errs, key: 0.0 });
        }
    }
    for mut s in segs {
        s.key = scale_key(&s.errs, &total);
        heap.push(s);
    }
    let mut count = heap.len();
    loop {
        let done = (0..dim).all(|d| total_err[d] <= opts.abs_tol.max(opts.rel_tol * total[d].abs()));
        if done {
            break;
        }
        if count >= opts.max_intervals {
            let worst = (0..dim).map(|d| total_err[d]).fold(0.0, f64::max);
            return Err(Error::Quadrature { op: "adaptive_vec", err: worst, tol: opts.abs_tol });
        }
        let Some(seg) = heap.pop() else { break };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // interval exhausted at machine resolution; accept it as is
            heap.push(Segment { key: -1.0, ..seg });
            if heap.peek().map(|s| s.key < 0.0).unwrap_or(true) {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(dim, &mut f, seg.a, m, &mut buf);
        let (v2, e2) = gk21(dim, &mut f, m, seg.b, &mut buf);
        for d in 0..dim {
            total[d] += v1[d] + v2[d] - seg.vals[d];
            total_err[d] += e1[d] + e2[d] - seg.errs[d];
        }
        let k1 = scale_key(&e1, &total);
        let k2 = scale_key(&e2, &total);
        heap.push(Segment { a: seg.a, b: m, vals: v1, errs: e1, key: k1 });
        heap.push(Segment { a: m, b: seg.b, vals: v2, errs: e2, key: k2 });
        count += 1;
    }
    // re-sum from the leaves to shed the drift of incremental updates
    let mut values = vec![crate::dd::KahanSum::new(); dim];
    let mut errors = vec![0.0; dim];
    for s in heap.iter() {
        for d in 0..dim {
            values[d].add(s.vals[d]);
            errors[d] += s.errs[d];
        }
    }
    Ok(QuadResult { values: values.iter().map(|v| v.value()).collect(), errors, intervals: count })
}

/// Scalar adaptive integration over [a, b].
pub fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)> {
    adaptive_breaks(f, &[a, b], opts)
}

/// Scalar adaptive integration over panels split at `breaks`.
pub fn adaptive_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], opts: QuadOptions) -> Result<(f64, f64)> {
    let r = adaptive_vec(1, |x, out| out[0] = f(x), breaks, opts)?;
    Ok((r.values[0], r.errors[0]))
}

/// Root of f in [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain("bisect", format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign changes of f on [lo, hi]: sampled on a grid of spacing `step`,
/// then each bracket refined by bisection to `tol`. Grid points where f
/// is exactly zero are not counted.
pub fn sign_changes(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, step: f64, tol: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) {
        return Err(Error::domain("sign_changes", format!("[{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n {
        let t = (lo + i as f64 * step).min(hi);
        let v = f(t)?;
        if v == 0.0 {
            continue;
        }
        if let Some((pt, pv)) = prev {
            if pv.signum() != v.signum() {
                out.push(bisect(&f, pt, t, tol)?);
            }
        }
        prev = Some((t, v));
    }
    Ok(out)
}
