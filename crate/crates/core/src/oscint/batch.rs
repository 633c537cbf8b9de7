//! Batched head quadrature and Hankel-form tails.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{CertifiedValue, Combination, OrderTuple, QuadConfig, SPLIT_CEILING};
use crate::bessel::{bessel_j_sequence, hankel_scaled_sequence};
use crate::error::{Error, Result};
use crate::quad::{adaptive_gk21, gk21_nodes};

const HEAD_WIDTH: f64 = 0.5;
const BLOCK: usize = 16;
const TAYLOR_TERMS: usize = 40;
const DC_PANELS: usize = 8;
const MAX_DC_PANELS: usize = 1 << 14;
const ROUNDING: f64 = 64.0 * f64::EPSILON;

type Series = [Complex64; TAYLOR_TERMS];
const ZERO_SERIES: Series = [Complex64 { re: 0.0, im: 0.0 }; TAYLOR_TERMS];

/// Split radius used for tuples whose largest order is `nmax`.
pub(super) fn radius_for(split: f64, nmax: usize) -> f64 {
    let need = (2 * nmax + 40) as f64;
    if split >= need {
        split
    } else {
        (need / 50.0).ceil() * 50.0
    }
}

/// Orders tabulated for a given radius; depends on the radius only so that
/// every tuple sees identical Bessel values whatever batch it is in.
fn order_cap(radius: f64) -> usize {
    ((radius - 40.0) / 2.0).floor() as usize
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    value: f64,
    error: f64,
    mass: f64,
}

impl Acc {
    fn converged(&self, tol: f64) -> bool {
        self.error <= tol || self.error <= ROUNDING * self.mass
    }
}

fn eval_real(c: &Combination, j: &[f64]) -> f64 {
    c.terms
        .iter()
        .map(|(w, k)| w * k.0.iter().map(|&n| j[n as usize]).product::<f64>())
        .sum()
}

fn sum_blocks(blocks: Vec<Vec<Acc>>, n: usize) -> Vec<Acc> {
    let mut out = vec![Acc::default(); n];
    for b in blocks {
        for (o, a) in out.iter_mut().zip(b) {
            o.value += a.value;
            o.error += a.error;
            o.mass += a.mass;
        }
    }
    out
}

fn head_pass(items: &[&Combination], radius: f64, cap: usize, width: f64) -> Vec<Acc> {
    let npanels = ((radius / width).round() as usize).max(1);
    let nblocks = npanels.div_ceil(BLOCK);
    let blocks: Vec<Vec<Acc>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Acc::default(); items.len()];
            let mut k = vec![0.0; items.len()];
            let mut g = vec![0.0; items.len()];
            for p in b * BLOCK..((b + 1) * BLOCK).min(npanels) {
                let lo = p as f64 * width;
                let hi = if p + 1 == npanels { radius } else { lo + width };
                k.iter_mut().for_each(|v| *v = 0.0);
                g.iter_mut().for_each(|v| *v = 0.0);
                for node in gk21_nodes(lo, hi) {
                    let j = bessel_j_sequence(cap, node.x);
                    for (i, it) in items.iter().enumerate() {
                        let y = node.x * eval_real(it, &j);
                        k[i] += node.wk * y;
                        g[i] += node.wg * y;
                        acc[i].mass += node.wk * y.abs();
                    }
                }
                for i in 0..items.len() {
                    acc[i].value += k[i];
                    acc[i].error += (k[i] - g[i]).abs();
                }
            }
            acc
        })
        .collect();
    sum_blocks(blocks, items.len())
}

/// Runs `pass` at increasing resolution on the items that have not yet met
/// `tol`; returns the final accumulators and convergence flags.
fn refine<F>(items: &[&Combination], tol: f64, start: usize, limit: usize, pass: F) -> Vec<(Acc, bool)>
where
    F: Fn(&[&Combination], usize) -> Vec<Acc>,
{
    let mut out = vec![(Acc::default(), false); items.len()];
    let mut pending: Vec<usize> = (0..items.len()).collect();
    let mut level = start;
    while !pending.is_empty() {
        let sub: Vec<&Combination> = pending.iter().map(|&i| items[i]).collect();
        let res = pass(&sub, level);
        let last = level * 2 > limit;
        let mut still = Vec::new();
        for (&i, a) in pending.iter().zip(res) {
            let ok = a.converged(tol);
            out[i] = (a, ok);
            if !ok && !last {
                still.push(i);
            }
        }
        pending = still;
        level *= 2;
    }
    out
}

/// `z⁰` coefficient of `∏ (u_n z + ū_n z⁻¹)/2`.
fn laurent_zero(orders: &[u16; 6], u: &[Complex64]) -> f64 {
    let mut c = [Complex64::new(0.0, 0.0); 13];
    c[6] = Complex64::new(1.0, 0.0);
    for (j, &n) in orders.iter().enumerate() {
        let a = u[n as usize] * 0.5;
        let b = a.conj();
        let mut next = [Complex64::new(0.0, 0.0); 13];
        let mut p = 6 - j;
        while p <= 6 + j {
            next[p + 1] += a * c[p];
            next[p - 1] += b * c[p];
            p += 2;
        }
        c = next;
    }
    c[6].re
}

fn dc_pass(items: &[&Combination], radius: f64, cap: usize, panels: usize) -> Vec<Acc> {
    let width = 1.0 / panels as f64;
    let nblocks = panels.div_ceil(BLOCK);
    let blocks: Vec<Vec<Acc>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Acc::default(); items.len()];
            let mut k = vec![0.0; items.len()];
            let mut g = vec![0.0; items.len()];
            for p in b * BLOCK..((b + 1) * BLOCK).min(panels) {
                let lo = p as f64 * width;
                let hi = if p + 1 == panels { 1.0 } else { lo + width };
                k.iter_mut().for_each(|v| *v = 0.0);
                g.iter_mut().for_each(|v| *v = 0.0);
                for node in gk21_nodes(lo, hi) {
                    let t = node.x;
                    let x = radius / t;
                    let u = hankel_scaled_sequence(cap, x);
                    let jac = radius * radius / (t * t * t);
                    for (i, it) in items.iter().enumerate() {
                        let p0: f64 = it.terms.iter().map(|(w, key)| w * laurent_zero(&key.0, &u)).sum();
                        let y = jac * p0;
                        k[i] += node.wk * y;
                        g[i] += node.wg * y;
                        acc[i].mass += node.wk * y.abs();
                    }
                }
                for i in 0..items.len() {
                    acc[i].value += k[i];
                    acc[i].error += (k[i] - g[i]).abs();
                }
            }
            acc
        })
        .collect();
    sum_blocks(blocks, items.len())
}

/// Taylor coefficients of `u_n(R + h) = Σ c_k h^k`, `n = 0..=nmax`, from the
/// differential equation `x²u'' + (2ix² + x)u' + (ix − n²)u = 0`.
pub fn taylor_scaled_hankel(nmax: usize, radius: f64, terms: usize) -> Vec<Vec<Complex64>> {
    let u = hankel_scaled_sequence(nmax + 1, radius);
    let i = Complex64::new(0.0, 1.0);
    let r = radius;
    (0..=nmax)
        .map(|n| {
            let mut c = vec![Complex64::new(0.0, 0.0); terms.max(2)];
            c[0] = u[n];
            c[1] = if n == 0 { -u[1] - i * u[0] } else { u[n - 1] - (n as f64 / r) * u[n] - i * u[n] };
            let n2 = (n * n) as f64;
            for k in 0..terms.saturating_sub(2) {
                let kf = k as f64;
                let prev = if k >= 1 { c[k - 1] } else { Complex64::new(0.0, 0.0) };
                let a1 = Complex64::new(2.0 * r * kf * (kf + 1.0) + r * (kf + 1.0), 2.0 * r * r * (kf + 1.0));
                let a0 = Complex64::new(kf * (kf - 1.0) + kf - n2, 4.0 * r * kf + r);
                let am = Complex64::new(0.0, 2.0 * kf - 1.0);
                c[k + 2] = -(a1 * c[k + 1] + a0 * c[k] + am * prev) / (r * r * (kf + 1.0) * (kf + 2.0));
            }
            c.truncate(terms);
            c
        })
        .collect()
}

fn series_mul_acc(out: &mut Series, a: &Series, b: &Series, scale: f64) {
    for k in 0..TAYLOR_TERMS {
        if b[k] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let bk = b[k] * scale;
        for m in 0..TAYLOR_TERMS - k {
            out[k + m] += a[m] * bk;
        }
    }
}

/// Laurent coefficients (powers −6..6) of `∏ (u z + ū z⁻¹)/2` as Taylor
/// series in `h = x − R`.
fn laurent_series(orders: &[u16; 6], table: &[(Series, Series)]) -> [Series; 13] {
    let mut c = [ZERO_SERIES; 13];
    let (u, ub) = &table[orders[0] as usize];
    for k in 0..TAYLOR_TERMS {
        c[7][k] = u[k] * 0.5;
        c[5][k] = ub[k] * 0.5;
    }
    for (j, &n) in orders.iter().enumerate().skip(1) {
        let (u, ub) = &table[n as usize];
        let mut next = [ZERO_SERIES; 13];
        let mut p = 6 - j;
        while p <= 6 + j {
            series_mul_acc(&mut next[p + 1], u, &c[p], 0.5);
            series_mul_acc(&mut next[p - 1], ub, &c[p], 0.5);
            p += 2;
        }
        c = next;
    }
    c
}

/// `∫_R^∞ A(x) e^{iSx} dx` from the Taylor coefficients of `A` at `R` by
/// repeated integration by parts.
fn ibp(a: &[Complex64], s: f64, radius: f64) -> (Complex64, f64) {
    let is = Complex64::new(0.0, s);
    let mut fact = 1.0;
    let mut pow = is;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut last = [0.0; 2];
    for (k, ak) in a.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = *ak * (sign * fact) / pow;
        sum += t;
        abs_sum += t.norm();
        last = [last[1], t.norm()];
        fact *= (k + 1) as f64;
        pow *= is;
    }
    let value = -Complex64::from_polar(1.0, s * radius) * sum;
    (value, last[0] + last[1] + ROUNDING * abs_sum)
}

fn oscillatory(item: &Combination, table: &[(Series, Series)], radius: f64) -> (f64, f64) {
    let mut total = [ZERO_SERIES; 3];
    for (w, key) in &item.terms {
        let c = laurent_series(&key.0, table);
        for (s, tot) in total.iter_mut().enumerate() {
            for k in 0..TAYLOR_TERMS {
                tot[k] += c[8 + 2 * s][k] * *w;
            }
        }
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for (s, p) in total.iter().enumerate() {
        // A(R + h) = (R + h) P_S(R + h)
        let mut a = [Complex64::new(0.0, 0.0); TAYLOR_TERMS];
        for k in 0..TAYLOR_TERMS {
            a[k] = p[k] * radius + if k > 0 { p[k - 1] } else { Complex64::new(0.0, 0.0) };
        }
        let (v, e) = ibp(&a, 2.0 * (s + 1) as f64, radius);
        value += 2.0 * v.re;
        error += 2.0 * e;
    }
    (value, error)
}

/// Evaluates each combination as a single integral over `[0, ∞)`.
pub(super) fn evaluate(combos: &[Combination], cfg: &QuadConfig) -> Vec<Result<CertifiedValue>> {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, c) in combos.iter().enumerate() {
        groups.entry(radius_for(cfg.split_radius, c.max_order()).to_bits()).or_default().push(i);
    }
    let mut out: Vec<Option<Result<CertifiedValue>>> = (0..combos.len()).map(|_| None).collect();
    for (bits, idx) in groups {
        let radius = f64::from_bits(bits);
        let cap = order_cap(radius);
        let items: Vec<&Combination> = idx.iter().map(|&i| &combos[i]).collect();

        let base = (radius / HEAD_WIDTH).round() as usize;
        let head = refine(&items, cfg.head_tol, base, cfg.max_panels.max(base), |sub, panels| {
            head_pass(sub, radius, cap, radius / panels as f64)
        });
        let dc = refine(&items, cfg.head_tol, DC_PANELS, MAX_DC_PANELS, |sub, panels| {
            dc_pass(sub, radius, cap, panels)
        });

        let table: Vec<(Series, Series)> = taylor_scaled_hankel(cap, radius, TAYLOR_TERMS)
            .into_iter()
            .map(|c| {
                let mut u = ZERO_SERIES;
                let mut ub = ZERO_SERIES;
                for k in 0..TAYLOR_TERMS {
                    u[k] = c[k];
                    ub[k] = c[k].conj();
                }
                (u, ub)
            })
            .collect();
        let osc: Vec<(f64, f64)> = items.par_iter().map(|it| oscillatory(it, &table, radius)).collect();

        for (pos, &i) in idx.iter().enumerate() {
            let (h, h_ok) = head[pos];
            let (d, d_ok) = dc[pos];
            let (o, o_err) = osc[pos];
            let value = h.value + d.value + o;
            let floor = ROUNDING * (h.mass + d.mass);
            let error = h.error + d.error + o_err + floor;
            out[i] = Some(if h_ok && d_ok {
                Ok(CertifiedValue::new(value, error))
            } else {
                Err(Error::AccuracyNotAchieved { requested: cfg.head_tol, achieved: error, value })
            });
        }
    }
    out.into_iter().map(|r| r.expect("every combination is in a group")).collect()
}

/// `∫₀^R ∏ J_{nᵢ}(r) r dr` by adaptive Gauss–Kronrod quadrature.
pub fn head_integral(t: &OrderTuple, radius: f64, tol: f64) -> Result<CertifiedValue> {
    if !(radius.is_finite() && radius >= 0.0 && radius <= SPLIT_CEILING) {
        return Err(Error::InvalidInput(format!("radius must lie in [0, 1e4], got {radius}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if radius == 0.0 {
        return Ok(CertifiedValue::exact(0.0));
    }
    let key = t.key();
    let cap = key.max_order();
    let f = |x: f64| {
        let j = bessel_j_sequence(cap, x);
        x * key.0.iter().map(|&n| j[n as usize]).product::<f64>()
    };
    let initial = (2.0 * radius).ceil() as usize;
    let max_panels = QuadConfig::default().max_panels.max(4 * initial);
    let q = adaptive_gk21(f, 0.0, radius, initial, tol, max_panels);
    let v = CertifiedValue::new(t.sign() * q.value, q.error);
    if q.converged {
        Ok(v)
    } else {
        Err(Error::AccuracyNotAchieved { requested: tol, achieved: q.error, value: v.value })
    }
}
