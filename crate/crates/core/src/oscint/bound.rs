//! Closed-form tail estimate for `∫_R^∞ ∏ J_{nᵢ}(x) x dx`.
//!
//! Each factor is replaced by its Hankel form
//! `J_n = (2/πx)^{1/2} [Re(w_n(x) e^{i(x − nπ/2 − π/4)}) + ρ]` with
//! `w_n = Σ_{m<2K} i^m a_m(n) x^{−m}` and `|ρ| ≤ |a_{2K}| x^{−2K} + |a_{2K+1}| x^{−2K−1}`,
//! valid once `K ≥ n/2`. Orders too large for that are either expanded with
//! more terms or bounded by `|J_n(x)| ≤ x^{−1/3}`. Non-oscillating terms are
//! integrated exactly, oscillating ones by integration by parts with an
//! explicit remainder.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{CertifiedValue, OrderTuple};
use crate::bessel::hankel_coefficient;

const IBP_DEPTH: usize = 12;
const MAX_TERMS: usize = 30;

/// `Σ c · e^{i f x} · x^{−p/6}` keyed by `(f, p)`.
#[derive(Debug, Clone, Default)]
struct TrigSum(BTreeMap<(i32, i32), Complex64>);

/// `Σ c · x^{−p/6}` with `c ≥ 0`, keyed by `p`.
#[derive(Debug, Clone, Default)]
struct PowSum(BTreeMap<i32, f64>);

impl TrigSum {
    fn one() -> Self {
        TrigSum(BTreeMap::from([((0, 0), Complex64::new(1.0, 0.0))]))
    }

    fn mul(&self, o: &TrigSum) -> TrigSum {
        let mut out = BTreeMap::new();
        for (&(fa, pa), &ca) in &self.0 {
            for (&(fb, pb), &cb) in &o.0 {
                *out.entry((fa + fb, pa + pb)).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        TrigSum(out)
    }
}

impl PowSum {
    fn one() -> Self {
        PowSum(BTreeMap::from([(0, 1.0)]))
    }

    fn mul(&self, o: &PowSum) -> PowSum {
        let mut out = BTreeMap::new();
        for (&pa, &ca) in &self.0 {
            for (&pb, &cb) in &o.0 {
                *out.entry(pa + pb).or_insert(0.0) += ca * cb;
            }
        }
        PowSum(out)
    }

    fn add(&self, o: &PowSum) -> PowSum {
        let mut out = self.0.clone();
        for (&p, &c) in &o.0 {
            *out.entry(p).or_insert(0.0) += c;
        }
        PowSum(out)
    }

    /// `∫_R^∞`; infinite when a term does not decay fast enough.
    fn integrate(&self, r: f64) -> f64 {
        let mut total = 0.0;
        for (&p6, &c) in &self.0 {
            if c == 0.0 {
                continue;
            }
            let p = p6 as f64 / 6.0;
            if p <= 1.0 {
                return f64::INFINITY;
            }
            total += c * r.powf(1.0 - p) / (p - 1.0);
        }
        total
    }
}

/// `∫_R^∞ x^{−p} e^{isx} dx` for `s ≠ 0`, `p > 0`, with an error bound.
fn oscillatory_power(p: f64, s: f64, r: f64) -> (Complex64, f64) {
    let is = Complex64::new(0.0, s);
    let lead = -Complex64::from_polar(1.0, s * r) / is;
    let mut value = Complex64::new(0.0, 0.0);
    let mut factor = Complex64::new(1.0, 0.0);
    for j in 0..IBP_DEPTH {
        value += lead * factor * r.powf(-p - j as f64);
        factor *= (p + j as f64) / is;
    }
    let rem = factor.norm() * 2.0 * r.powf(-p - IBP_DEPTH as f64) / s.abs();
    (value, rem)
}

fn integrate_trig(t: &TrigSum, r: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut error = 0.0;
    for (&(f, p6), &c) in &t.0 {
        if c.norm() == 0.0 {
            continue;
        }
        let p = p6 as f64 / 6.0;
        if f == 0 {
            if p <= 1.0 {
                return (0.0, f64::INFINITY);
            }
            value += c.re * r.powf(1.0 - p) / (p - 1.0);
            error += f64::EPSILON * c.norm() * r.powf(1.0 - p) / (p - 1.0);
        } else {
            if p <= 0.0 {
                return (0.0, f64::INFINITY);
            }
            let (v, e) = oscillatory_power(p, f as f64, r);
            value += (c * v).re;
            error += c.norm() * e;
        }
    }
    (value, error)
}

/// One factor `J_n / (2/πx)^{1/2}` split into main part, a bound for the
/// main part's modulus and a bound for the remainder.
struct Factor {
    main: TrigSum,
    modulus: PowSum,
    defect: PowSum,
}

fn hankel_factor(n: usize, terms: usize) -> Factor {
    let phase = Complex64::from_polar(1.0, -(n as f64) * FRAC_PI_2 - FRAC_PI_4);
    let mut main = BTreeMap::new();
    let mut modulus = BTreeMap::new();
    let mut ipow = Complex64::new(1.0, 0.0);
    for m in 0..2 * terms {
        let a = hankel_coefficient(n, m);
        let c = ipow * a * phase * 0.5;
        main.insert((1, 6 * m as i32), c);
        main.insert((-1, 6 * m as i32), c.conj());
        modulus.insert(6 * m as i32, a.abs());
        ipow *= Complex64::new(0.0, 1.0);
    }
    let defect = BTreeMap::from([
        (12 * terms as i32, hankel_coefficient(n, 2 * terms).abs()),
        (6 * (2 * terms as i32 + 1), hankel_coefficient(n, 2 * terms + 1).abs()),
    ]);
    Factor { main: TrigSum(main), modulus: PowSum(modulus), defect: PowSum(defect) }
}

/// `|J_n| ≤ x^{−1/3}`, i.e. `|J_n|/(2/πx)^{1/2} ≤ (π/2)^{1/2} x^{1/6}`.
fn envelope_factor() -> Factor {
    Factor {
        main: TrigSum::default(),
        modulus: PowSum::default(),
        defect: PowSum(BTreeMap::from([(-1, FRAC_PI_2.sqrt())])),
    }
}

/// `∫_R^∞ w(x) ∏ J` where `w = x · (2/πx)^{k/2}` absorbs the factor count;
/// returns (value, error).
fn integrate_product(factors: &[Factor], weight_p6: i32, weight_c: f64, r: f64) -> (f64, f64) {
    let mut main = TrigSum::one();
    let mut modulus = PowSum::one();
    let mut excess = PowSum::default();
    for f in factors {
        // ∏(m+e) − ∏m, kept with nonnegative coefficients
        let with_defect = f.modulus.add(&f.defect);
        excess = excess.mul(&with_defect).add(&modulus.mul(&f.defect));
        modulus = modulus.mul(&f.modulus);
        main = main.mul(&f.main);
    }
    let weight = TrigSum(BTreeMap::from([((0, weight_p6), Complex64::new(weight_c, 0.0))]));
    let (v, e) = integrate_trig(&main.mul(&weight), r);
    let w = PowSum(BTreeMap::from([(weight_p6, weight_c)]));
    let ex = excess.mul(&w).integrate(r);
    (v, e + ex)
}

fn expanded(orders: &[u16; 6], order: usize, r: f64) -> Option<(f64, f64)> {
    let mut factors = Vec::with_capacity(6);
    for &n in orders {
        let k = order.max((n as usize).div_ceil(2));
        if k > MAX_TERMS {
            return None;
        }
        factors.push(hankel_factor(n as usize, k));
    }
    // x · (2/πx)^3
    Some(integrate_product(&factors, 12, (2.0 / PI).powi(3), r))
}

fn enveloped(orders: &[u16; 6], order: usize, r: f64) -> (f64, f64) {
    let good = |n: u16| (n as usize) <= 2 * order;
    let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
    for &n in orders {
        *counts.entry(n).or_insert(0) += 1;
    }
    let squares = counts.values().all(|c| c % 2 == 0);
    if squares && orders.iter().any(|&n| !good(n)) {
        // integrand is a product of squares: 0 ≤ ∏J ≤ x^{−b/3} ∏_{good} J
        let bad = orders.iter().filter(|&&n| !good(n)).count() as i32;
        let factors: Vec<Factor> =
            orders.iter().filter(|&&n| good(n)).map(|&n| hankel_factor(n as usize, order)).collect();
        let g = factors.len() as i32;
        let p6 = -6 + 2 * bad + 3 * g;
        let c = (2.0 / PI).powf(g as f64 / 2.0);
        let (v, e) = integrate_product(&factors, p6, c, r);
        let upper = (v + e).max(0.0);
        return (0.5 * upper, 0.5 * upper);
    }
    let factors: Vec<Factor> = orders
        .iter()
        .map(|&n| if good(n) { hankel_factor(n as usize, order) } else { envelope_factor() })
        .collect();
    integrate_product(&factors, 12, (2.0 / PI).powi(3), r)
}

/// Analytic estimate of `∫_R^∞ ∏ J_{nᵢ}(x) x dx` using `order` Hankel
/// correction terms; `abs_error` is infinite if no bound is available.
pub fn tail_bound(t: &OrderTuple, radius: f64, order: usize) -> CertifiedValue {
    if !(radius.is_finite() && radius >= 20.0) {
        return CertifiedValue::new(0.0, f64::INFINITY);
    }
    let order = order.clamp(1, MAX_TERMS);
    let orders = t.key().0;
    let mut best = enveloped(&orders, order, radius);
    if let Some(e) = expanded(&orders, order, radius) {
        if e.1 < best.1 {
            best = e;
        }
    }
    if !best.1.is_finite() {
        return CertifiedValue::new(0.0, f64::INFINITY);
    }
    CertifiedValue::new(t.sign() * best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscint::{head_integral, IntegralEngine, QuadConfig};

    fn t(o: [i64; 6]) -> OrderTuple {
        OrderTuple::new(o).unwrap()
    }

    #[test]
    fn oscillatory_power_matches_closed_form() {
        // finite-range quadrature; the part beyond 4000 is below 1/4000²
        let r = 40.0;
        let (v, e) = oscillatory_power(2.0, 2.0, r);
        let q = crate::quad::adaptive_gk21(|x: f64| (2.0 * x).cos() / (x * x), r, 4000.0, 4000, 1e-15, 200_000);
        // remainder beyond 4000 is below 1/(2·4000²)
        assert!((v.re - q.value).abs() < 1e-7 + e, "{} vs {}", v.re, q.value);
        assert!(e < 1e-12);
    }

    #[test]
    fn tail_of_alpha_zero_matches_engine() {
        let engine = IntegralEngine::new(QuadConfig::default()).unwrap();
        let full = engine.integral(&t([0; 6])).unwrap();
        let head = head_integral(&t([0; 6]), 100.0, 1e-13).unwrap();
        for order in 1..=3 {
            let tail = tail_bound(&t([0; 6]), 100.0, order);
            let diff = full.value - head.value - tail.value;
            assert!(diff.abs() <= tail.abs_error + full.abs_error + head.abs_error, "order {order}: {diff} vs {tail}");
        }
    }

    #[test]
    fn crux_tail_examples() {
        let head0 = head_integral(&t([0; 6]), 100.0, 1e-12).unwrap();
        let tail0 = tail_bound(&t([0; 6]), 100.0, 2);
        assert!(200.0 * tail0.magnitude_bound() < head0.lower());
        for n in [2i64, 4, 8, 20, 50, 100, 200] {
            let b = tail_bound(&t([n, -n, 0, 0, 0, 0]), 100.0, 2);
            assert!(25.0 * b.magnitude_bound() < head0.lower(), "n={n}: {b}");
        }
    }

    #[test]
    fn error_shrinks_on_doubling() {
        for o in [[0, 0, 0, 0, 0, 0], [3, 1, 2, 0, 0, 0], [9, 9, 0, 0, 0, 0], [12, 8, 4, 0, 0, 0], [40, 20, 20, 0, 0, 0]] {
            let mut prev = f64::INFINITY;
            let mut r = 25.0;
            while r < 1e5 {
                let b = tail_bound(&t(o), r, 2);
                assert!(b.abs_error < prev || (b.abs_error == 0.0 && prev == 0.0), "{o:?} at R={r}: {b}");
                prev = b.abs_error;
                r *= 2.0;
            }
            assert!(prev < 1e-6, "{o:?}: {prev}");
        }
    }

    #[test]
    fn more_terms_tighten() {
        let r = 200.0;
        let e1 = tail_bound(&t([1, 1, 0, 0, 0, 0]), r, 1).abs_error;
        let e2 = tail_bound(&t([1, 1, 0, 0, 0, 0]), r, 2).abs_error;
        let e3 = tail_bound(&t([1, 1, 0, 0, 0, 0]), r, 3).abs_error;
        assert!(e2 < e1 && e3 < e2, "{e1} {e2} {e3}");
    }
}
