//! Multilinear forms over the delta-constrained measure `dΣ` on `(S¹)⁶`.
//!
//! Every form reduces to lattice sums `(2π)⁵ Σ_{Σnⱼ=0} ∏ f̂ⱼ(nⱼ) I_{n₁…n₆}`.
//! The weight `|ω₄+ω₅+ω₆|² − 1 = 2(1 + ω₄·ω₅ + ω₅·ω₆ + ω₆·ω₄)` enters through
//! frequency shifts, `ω₄·ω₅ ↦ e₁(ω₄) e₋₁(ω₅)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circfun::{extension_norm6_spectral, lattice_sum, random_test_function, TestKind, TrigPoly};
use crate::error::{Error, Result};
use crate::oscint::{CanonicalTuple, CertifiedValue, IntegralEngine, OrderTuple};
use crate::report::VerificationRecord;
use crate::seqtab::{SequenceCache, C0, EPS1, EPS2, GAMMA3};

/// Largest total degree of the six slots of a sixfold form.
pub const MAX_FORM_DEGREE_SUM: usize = 96;

/// Below this `Σ_{n≠0} |ĥ(n)|²` a function counts as constant.
pub const CONSTANT_ENERGY: f64 = 1e-20;

/// Bracket value the budget must stay below.
pub const BRACKET_LIMIT: f64 = 0.974;

fn tau(k: i32) -> f64 {
    (2.0 * PI).powi(k)
}

fn one() -> TrigPoly {
    TrigPoly::constant(1.0)
}

fn e(k: i64) -> TrigPoly {
    TrigPoly::monomial(k, Complex64::new(1.0, 0.0))
}

/// `∫ f₁(ω₁)…f₆(ω₆) dΣ` as a complex number with its error.
pub fn sixfold_form_complex(engine: &IntegralEngine, slots: [&TrigPoly; 6]) -> Result<(Complex64, f64)> {
    let total: usize = slots.iter().map(|p| p.degree()).sum();
    if total > MAX_FORM_DEGREE_SUM {
        return Err(Error::Refused(format!("slot degrees sum to {total}, above {MAX_FORM_DEGREE_SUM}")));
    }
    let s = lattice_sum(engine, slots)?;
    Ok((s.value * tau(5), s.abs_error * tau(5)))
}

/// Real part of [`sixfold_form_complex`]; exact for conjugate-symmetric
/// inputs.
pub fn sixfold_form(engine: &IntegralEngine, slots: [&TrigPoly; 6]) -> Result<CertifiedValue> {
    let (v, err) = sixfold_form_complex(engine, slots)?;
    Ok(CertifiedValue::new(v.re, err))
}

/// `T(h₁,h₂,h₃) = ∫ h₁h₂h₃ (|ω₄+ω₅+ω₆|² − 1) dΣ`.
pub fn trilinear_t(engine: &IntegralEngine, h1: &TrigPoly, h2: &TrigPoly, h3: &TrigPoly) -> Result<CertifiedValue> {
    let (o, ep, em) = (one(), e(1), e(-1));
    let a = sixfold_form(engine, [h1, h2, h3, &o, &o, &o])?;
    let b = sixfold_form(engine, [h1, h2, h3, &ep, &em, &o])?;
    Ok((a + b * 3.0) * 2.0)
}

/// `C(f) = ∫ f(ω₁)…f(ω₆) (|ω₄+ω₅+ω₆|² − 1) dΣ` through the shift expansion.
pub fn weighted_c(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    let (fp, fm) = (f.shift(1), f.shift(-1));
    let a = sixfold_form(engine, [f, f, f, f, f, f])?;
    let b = sixfold_form(engine, [f, f, f, &fp, &fm, f])?;
    Ok((a + b * 3.0) * 2.0)
}

fn signed_values(engine: &IntegralEngine, tuples: &[[i64; 6]]) -> Result<Vec<(f64, f64)>> {
    let ts: Vec<OrderTuple> = tuples.iter().map(|&o| OrderTuple::new(o)).collect::<Result<_>>()?;
    engine.ensure(ts.iter().map(|t| t.key()).collect::<Vec<CanonicalTuple>>())?;
    Ok(ts
        .iter()
        .map(|t| {
            let v = engine.lookup(t.key()).expect("ensured above");
            (t.sign() * v.value, v.abs_error)
        })
        .collect())
}

/// `∫ f(ω₁)…f(ω₆) dΣ` summed over multisets of frequencies, each weighted by
/// its number of orderings.
pub fn symmetric_sixfold(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    let terms = f.terms();
    if terms.is_empty() {
        return Ok(CertifiedValue::exact(0.0));
    }
    let lo = terms[0].0;
    let hi = terms[terms.len() - 1].0;
    let mut tuples: Vec<[i64; 6]> = Vec::new();
    let mut weights: Vec<Complex64> = Vec::new();
    let mut idx = [0usize; 6];
    fn rec(
        pos: usize,
        start: usize,
        sum: i64,
        idx: &mut [usize; 6],
        terms: &[(i64, Complex64)],
        bounds: (i64, i64),
        out: &mut (Vec<[i64; 6]>, Vec<Complex64>),
    ) {
        if pos == 6 {
            if sum != 0 {
                return;
            }
            let mut orders = [0i64; 6];
            let mut w = Complex64::new(1.0, 0.0);
            for (o, &i) in orders.iter_mut().zip(idx.iter()) {
                *o = terms[i].0;
                w *= terms[i].1;
            }
            let mut count = 720.0;
            let mut run = 1;
            for k in 1..=6 {
                if k < 6 && idx[k] == idx[k - 1] {
                    run += 1;
                } else {
                    count /= (1..=run).product::<usize>() as f64;
                    run = 1;
                }
            }
            out.0.push(orders);
            out.1.push(w * count);
            return;
        }
        let left = (6 - pos) as i64;
        for i in start..terms.len() {
            let n = terms[i].0;
            // the remaining slots all carry frequencies in [n, hi]
            if sum + left * n > 0 {
                break;
            }
            if sum + n + (left - 1) * bounds.1 < 0 {
                continue;
            }
            idx[pos] = i;
            rec(pos + 1, i, sum + n, idx, terms, bounds, out);
        }
    }
    let mut out = (Vec::new(), Vec::new());
    rec(0, 0, 0, &mut idx, &terms, (lo, hi), &mut out);
    tuples.append(&mut out.0);
    weights.append(&mut out.1);
    let vals = signed_values(engine, &tuples)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let (mut err, mut mass) = (0.0, 0.0);
    for (w, (v, e)) in weights.iter().zip(vals) {
        acc += w * v;
        err += w.norm() * e;
        mass += w.norm() * v.abs();
    }
    let c = tau(5);
    Ok(CertifiedValue::new(c * acc.re, c * (err + 16.0 * f64::EPSILON * mass + acc.im.abs())))
}

fn require_real(f: &TrigPoly, what: &str) -> Result<()> {
    let scale = f.dense().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !f.is_real(1e-12 * scale.max(1e-300)) {
        return Err(Error::Precondition(format!("{what} must be real-valued")));
    }
    Ok(())
}

/// `Ψ(f) = 2[T(f², f², f²) − C(f)]` for real `f`, with `C` through the shift
/// expansion.
pub fn psi(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    require_real(f, "f")?;
    let f2 = f.mul(f);
    let t = trilinear_t(engine, &f2, &f2, &f2)?;
    let c = weighted_c(engine, f)?;
    Ok((t - c) * 2.0)
}

/// `Ψ` using `C(f) = (4/5) ∫ f⊗⁶ dΣ`, which follows from
/// `Σ_{i<j<k} (|ωᵢ+ωⱼ+ωₖ|² − 1) = 16` on the support of `dΣ`.
pub fn psi_fast(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    require_real(f, "f")?;
    let f2 = f.mul(f);
    let t = trilinear_t(engine, &f2, &f2, &f2)?;
    let c = symmetric_sixfold(engine, f)? * 0.8;
    Ok((t - c) * 2.0)
}

/// `(2π)²(5/4) C(f)` against `‖f̂σ‖₆⁶` for `f = f⋆`.
pub fn geometric_identity_check(engine: &IntegralEngine, f: &TrigPoly) -> Result<VerificationRecord> {
    let scale = f.dense().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let fs = f.star();
    if f.dense().len() != fs.dense().len()
        || f.dense().iter().zip(fs.dense()).any(|(a, b)| (a - b).norm() > 1e-12 * scale.max(1e-300))
    {
        return Err(Error::Precondition("geometric identity needs f = f⋆".into()));
    }
    let c = weighted_c(engine, f)?;
    let lhs = c * (tau(2) * 1.25);
    let rhs = extension_norm6_spectral(engine, f)?;
    let diff = lhs - rhs;
    Ok(VerificationRecord::new(
        "geometric-identity",
        "||f sigma^||_6^6 = (2 pi)^2 (5/4) int f^6 (|w4+w5+w6|^2 - 1) dSigma",
        json!({ "coefficients": crate::circfun::write_coefficients(f) }),
    )
    .with_value("weighted_side", lhs.value)
    .with_value("norm6", rhs.value)
    .with_value("difference", diff.value)
    .decide_within(-diff.value.abs(), diff.abs_error))
}

fn require_even_meanzero_real(g: &TrigPoly) -> Result<()> {
    require_real(g, "g")?;
    let scale = g.dense().iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    if g.mean().norm() > 1e-14 * scale {
        return Err(Error::Precondition("g must have mean zero".into()));
    }
    if !g.is_antipodal(1e-14 * scale) {
        return Err(Error::Precondition("g must have even frequencies only".into()));
    }
    Ok(())
}

/// `T(c,g,g) = −2c(2π)⁵ Σ |ĝ(n)|² βₙ` for even real mean-zero `g`.
pub fn t_cgg_spectral(seq: &SequenceCache, c: f64, g: &TrigPoly) -> Result<CertifiedValue> {
    require_even_meanzero_real(g)?;
    let terms: Vec<(i64, Complex64)> = g.terms();
    let ns: Vec<usize> = terms.iter().map(|t| t.0.unsigned_abs() as usize).collect();
    let betas = seq.beta_many(&ns)?;
    let mut acc = CertifiedValue::exact(0.0);
    for ((_, cf), b) in terms.iter().zip(betas) {
        acc = acc + b * cf.norm_sqr();
    }
    Ok(acc * (-2.0 * c * tau(5)))
}

/// `T(g,g,g) = −2(2π)⁵ Σₙ Σₘ ĝ(n) ĝ(m) conj ĝ(n+m) δₙ,ₘ` from the `δ` cache.
pub fn trilinear_t_spectral_gpart(seq: &SequenceCache, g: &TrigPoly) -> Result<CertifiedValue> {
    require_even_meanzero_real(g)?;
    let d = g.degree() as i64;
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    for n in (-d..=d).filter(|n| *n != 0) {
        for m in (-d..=d).filter(|m| *m != 0) {
            let k = n + m;
            if k == 0 || k.abs() > d {
                continue;
            }
            let w = g.coeff(n) * g.coeff(m) * g.coeff(k).conj();
            if w.norm() == 0.0 {
                continue;
            }
            pairs.push((n, m));
            weights.push(w);
        }
    }
    let deltas = seq.delta_many(&pairs)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (w, dl) in weights.iter().zip(deltas) {
        acc += w * dl.value;
        err += w.norm() * dl.abs_error;
    }
    let c = -2.0 * tau(5);
    Ok(CertifiedValue::new(c * acc.re, c.abs() * (err + acc.im.abs())))
}

/// Nonnegativity on a fine grid, even frequencies and `ĥ(0) = ‖ĥ‖_∞`.
pub fn check_nonneg_antipodal(h: &TrigPoly) -> Result<()> {
    require_real(h, "h")?;
    let scale = h.dense().iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    if !h.is_antipodal(1e-14 * scale) {
        return Err(Error::Precondition("h must be antipodally symmetric (even frequencies only)".into()));
    }
    let grid = (8 * (h.degree() + 1)).next_power_of_two().max(1024);
    let min = h.samples(grid)?.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min < -1e-12 * scale {
        return Err(Error::Precondition(format!("h takes the negative value {min:e} on the grid")));
    }
    let c = h.mean().re;
    if h.dense().iter().any(|z| z.norm() > c * (1.0 + 1e-12) + 1e-300) {
        return Err(Error::Precondition("h(0) is not the largest coefficient".into()));
    }
    Ok(())
}

/// Pieces of `T(h,h,h) = T(c,c,c) + 3T(c,c,g) + 3T(c,g,g) + T(g,g,g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TDecomposition {
    pub ccc: CertifiedValue,
    pub ccg: CertifiedValue,
    pub cgg: CertifiedValue,
    pub ggg: CertifiedValue,
}

impl TDecomposition {
    /// `T(h,h,h) − T(c,c,c)`.
    pub fn excess(&self) -> CertifiedValue {
        self.ccg * 3.0 + self.cgg * 3.0 + self.ggg
    }
}

pub fn t_decomposition(engine: &IntegralEngine, h: &TrigPoly) -> Result<TDecomposition> {
    let c = h.mean().re;
    let cc = TrigPoly::constant(c);
    let g = h.add(&TrigPoly::constant(-c));
    Ok(TDecomposition {
        ccc: trilinear_t(engine, &cc, &cc, &cc)?,
        ccg: trilinear_t(engine, &cc, &cc, &g)?,
        cgg: trilinear_t(engine, &cc, &g, &g)?,
        ggg: trilinear_t(engine, &g, &g, &g)?,
    })
}

/// `T(h,h,h) ≤ T(c,c,c)` with `c = ĥ(0)`, strict unless `h` is constant.
pub fn thm7_check(engine: &IntegralEngine, h: &TrigPoly) -> Result<VerificationRecord> {
    check_nonneg_antipodal(h)?;
    let dec = t_decomposition(engine, h)?;
    let excess = dec.excess();
    let margin = -excess.value;
    let energy = h.oscillation_energy();
    let rec = VerificationRecord::new(
        "trilinear-monotonicity",
        "T(h,h,h) <= T(c,c,c), equality only for constant h",
        json!({ "coefficients": crate::circfun::write_coefficients(h) }),
    )
    .with_value("t_ccc", dec.ccc.value)
    .with_value("t_hhh", dec.ccc.value + excess.value)
    .with_value("t_cgg", dec.cgg.value)
    .with_value("t_ggg", dec.ggg.value)
    .with_value("oscillation_energy", energy);
    Ok(if energy < CONSTANT_ENERGY {
        rec.decide_within(margin, excess.abs_error).with_note("constant input: equality case")
    } else {
        rec.decide(margin, excess.abs_error)
    })
}

/// `cₙ = α₀ + 2(−1)ⁿαₙ − 3α̃₀ − 12(−1)ⁿα̃ₙ`.
pub fn c_n(seq: &SequenceCache, n: i64) -> Result<CertifiedValue> {
    if !(1..=256).contains(&n) {
        return Err(Error::InvalidInput(format!("c_n is defined here for 1 <= n <= 256, got {n}")));
    }
    let s = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(seq.alpha(0)? + seq.alpha(n)? * (2.0 * s) - seq.alpha_tilde(0)? * 3.0 - seq.alpha_tilde(n)? * (12.0 * s))
}

/// Lower bound the chain gives for `n ≥ 7`.
pub const CN_TAIL_FLOOR: f64 = 0.110;

/// `cₙ − error > 0`, and `cₙ > 0.110` from `n = 7` on.
pub fn cn_check(seq: &SequenceCache, n: i64) -> Result<VerificationRecord> {
    let v = c_n(seq, n)?;
    let floor = if n >= 7 { CN_TAIL_FLOOR } else { 0.0 };
    Ok(VerificationRecord::new("cn-positive", "c_n > eta > 0", json!({ "n": n }))
        .with_value("c_n", v.value)
        .with_value("c_n_error", v.abs_error)
        .with_value("floor", floor)
        .decide(v.value - floor, v.abs_error))
}

/// Batch version of [`cn_check`] for `1..=n_max`.
pub fn cn_sweep(seq: &SequenceCache, n_max: usize) -> Result<Vec<VerificationRecord>> {
    let ns: Vec<usize> = (0..=n_max).collect();
    seq.prefetch_alpha(&ns)?;
    (1..=n_max as i64).map(|n| cn_check(seq, n)).collect()
}

/// `3/(4π²n) + 3/(32π²(n−1)n(n+1)) + 1/(500n⁴)`, the bound on `αₙ`.
pub fn alpha_upper_chain(n: usize) -> f64 {
    let n = n as f64;
    3.0 / (4.0 * PI * PI * n) + 3.0 / (32.0 * PI * PI * (n - 1.0) * n * (n + 1.0)) + 1.0 / (500.0 * n.powi(4))
}

/// `5αₙ + 5·err < α₀ − err` for every even `n ∈ [2, n_max]`, the footnote
/// `5α₁ = α₀`, and `αₙ ≤ 1/50` for `n ≥ 10`.
pub fn crux_check(seq: &SequenceCache, n_max: usize) -> Result<VerificationRecord> {
    if n_max < 2 || n_max % 2 == 1 || n_max > 512 {
        return Err(Error::InvalidInput(format!("n_max must be even in [2, 512], got {n_max}")));
    }
    let ns: Vec<usize> = std::iter::once(0).chain(std::iter::once(1)).chain((2..=n_max).step_by(2)).collect();
    seq.prefetch_alpha(&ns)?;
    let a0 = seq.alpha(0)?;
    let mut worst = (f64::INFINITY, 0usize);
    let mut chain_worst = f64::INFINITY;
    for n in (2..=n_max).step_by(2) {
        let a = seq.alpha(n as i64)?;
        let slack = (a0.value - a0.abs_error) - (5.0 * a.value + 5.0 * a.abs_error);
        if slack < worst.0 {
            worst = (slack, n);
        }
        if n >= 10 {
            chain_worst = chain_worst.min(1.0 / 50.0 - (a.value + a.abs_error));
        }
    }
    let chain_bound = if n_max >= 10 { 1.0 / 50.0 - alpha_upper_chain(10) } else { f64::INFINITY };
    let foot = seq.footnote_check()?;
    let margin = worst.0.min(chain_worst).min(chain_bound);
    let rec = VerificationRecord::new("crux", "5 alpha_n < alpha_0 for even n != 0", json!({ "n_max": n_max }))
        .with_value("alpha0", a0.value)
        .with_value("min_slack", worst.0)
        .with_value("tightest_n", worst.1 as f64)
        .with_value("alpha_chain_slack", chain_worst)
        .with_value("chain_bound_slack", chain_bound)
        .with_value("footnote_difference", foot.values["difference"]);
    let rec = rec.decide(margin, 0.0);
    Ok(if foot.pass { rec } else { rec.fail_with(foot.slack, "footnote identity failed") })
}

/// `Φ⁶(1 + εg) = Φ⁶(1) + ε² Q(g) + O(ε³)` with
/// `Q = (2π)⁴[9Σ|ĝ|²αₙ + 6Σ|ĝ|²(−1)ⁿαₙ − 3α₀‖g‖²/(2π)]` for real mean-zero `g`.
pub fn quadratic_coefficient(seq: &SequenceCache, g: &TrigPoly) -> Result<CertifiedValue> {
    let mut acc = CertifiedValue::exact(0.0);
    let terms = g.terms();
    let ns: Vec<usize> = terms.iter().map(|t| t.0.unsigned_abs() as usize).chain(std::iter::once(0)).collect();
    seq.prefetch_alpha(&ns)?;
    for (n, c) in terms {
        let a = seq.alpha(n.abs())?;
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc + a * ((9.0 + 6.0 * s) * c.norm_sqr());
    }
    let a0 = seq.alpha(0)?;
    Ok((acc - a0 * (3.0 * g.l2_norm_sq() / (2.0 * PI))) * tau(4))
}

/// `ε` sweep used for the order of the quadratic-model defect.
pub const DEFECT_SWEEP: [f64; 3] = [0.04, 0.02, 0.01];

/// Result of the local expansion around the constant function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalExpansion {
    pub phi6_one: f64,
    pub quadratic: f64,
    /// `(±ε, Φ⁶(1±εg), error)`.
    pub phi6: Vec<(f64, f64, f64)>,
    /// `(ε, max_± |Φ⁶(1±εg) − Φ⁶(1) − ε²Q|)` over the halving sweep.
    pub defects: Vec<(f64, f64)>,
    pub min_order: f64,
}

fn phi6(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    let n = extension_norm6_spectral(engine, f)?;
    Ok(n * (1.0 / f.l2_norm_sq().powi(3)))
}

pub fn local_expansion(seq: &SequenceCache, g: &TrigPoly, eps_list: &[f64]) -> Result<LocalExpansion> {
    require_real(g, "g")?;
    if g.mean().norm() > 1e-14 {
        return Err(Error::Precondition("g must have mean zero".into()));
    }
    if (g.l2_norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("g must have unit L2 norm, got {}", g.l2_norm())));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && *e <= 0.1)) {
        return Err(Error::Precondition("every epsilon must lie in (0, 0.1]".into()));
    }
    let engine = seq.engine();
    let base = phi6(engine, &one())?;
    let q = quadratic_coefficient(seq, g)?;
    let at = |e: f64| phi6(engine, &one().add(&g.scale_real(e)));
    let phi6s = eps_list
        .iter()
        .flat_map(|&e| [e, -e])
        .map(|e| at(e).map(|v| (e, v.value, v.abs_error)))
        .collect::<Result<Vec<_>>>()?;
    // max over ±ε of |defect| = |a|ε³ + |b|ε⁴ + O(ε⁵): no cancellation between orders
    let defects = DEFECT_SWEEP
        .iter()
        .map(|&e| {
            let d = |s: f64| at(s).map(|v| (v.value - base.value - e * e * q.value).abs());
            Ok((e, d(e)?.max(d(-e)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_order = defects
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .fold(f64::INFINITY, f64::min);
    Ok(LocalExpansion { phi6_one: base.value, quadratic: q.value, phi6: phi6s, defects, min_order })
}

/// Order the quadratic-model defect must reach.
pub const MIN_DEFECT_ORDER: f64 = 2.5;

/// `Φ(1 ± εg) ≤ Φ(1)` and `Ψ(1 ± εg) ≥ 0` for each `ε`, and the defect of the quadratic model
/// decays with order at least 2.5.
pub fn local_extremizer_check(seq: &SequenceCache, g: &TrigPoly, eps_list: &[f64]) -> Result<VerificationRecord> {
    let ex = local_expansion(seq, g, eps_list)?;
    let a0_err = seq.alpha(0)?.abs_error * tau(4);
    let mut margin = f64::INFINITY;
    let mut budget: f64 = 0.0;
    for &(_, v, err) in &ex.phi6 {
        if ex.phi6_one - v - (err + a0_err) < margin - budget {
            margin = ex.phi6_one - v;
            budget = err + a0_err;
        }
    }
    let mut psi_min = CertifiedValue::exact(f64::INFINITY);
    for e in eps_list.iter().flat_map(|&e| [e, -e]) {
        let p = psi_fast(seq.engine(), &one().add(&g.scale_real(e)))?;
        if p.value + p.abs_error < psi_min.value + psi_min.abs_error {
            psi_min = p;
        }
    }
    let order_ok = ex.min_order >= MIN_DEFECT_ORDER;
    let psi_ok = psi_min.value >= -psi_min.abs_error;
    let rec = VerificationRecord::new(
        "local-extremizer",
        "Phi(1 + eps g) <= Phi(1) and Psi(1 + eps g) >= 0 with an O(eps^3) quadratic-model defect",
        json!({ "eps": eps_list, "coefficients": crate::circfun::write_coefficients(g) }),
    )
    .with_value("phi6_one", ex.phi6_one)
    .with_value("quadratic", ex.quadratic)
    .with_value("defect_order", ex.min_order)
    .with_value("psi_min", psi_min.value)
    .with_value("psi_min_error", psi_min.abs_error)
    .decide(margin, budget);
    Ok(match (order_ok, psi_ok) {
        (true, true) => rec,
        (false, _) => rec.fail_with(ex.min_order - MIN_DEFECT_ORDER, format!("defect order {:.3} below {MIN_DEFECT_ORDER}", ex.min_order)),
        (true, false) => rec.fail_with(psi_min.value + psi_min.abs_error, "Psi below its error budget"),
    })
}

/// `E = −B/2 − 3D/2` with `B = ∫g₁g₂`, `D = ∫g₁g₂(ω₄·ω₅)`, `E = ∫g₁g₄(ω₄·ω₅)`.
pub fn e_relation_check(engine: &IntegralEngine, g: &TrigPoly) -> Result<VerificationRecord> {
    require_real(g, "g")?;
    let (o, ep, em) = (one(), e(1), e(-1));
    let b = sixfold_form(engine, [g, g, &o, &o, &o, &o])?;
    let d = sixfold_form(engine, [g, g, &o, &ep, &em, &o])?;
    let (gp, gm) = (g.shift(1), g.shift(-1));
    let e1 = sixfold_form(engine, [g, &o, &o, &gp, &em, &o])?;
    let e2 = sixfold_form(engine, [g, &o, &o, &gm, &ep, &o])?;
    let ev = (e1 + e2) * 0.5;
    let diff = ev + b * 0.5 + d * 1.5;
    Ok(VerificationRecord::new("e-relation", "E = -B/2 - 3D/2", json!({ "coefficients": crate::circfun::write_coefficients(g) }))
        .with_value("B", b.value)
        .with_value("D", d.value)
        .with_value("E", ev.value)
        .decide_within(-diff.value.abs(), diff.abs_error))
}

/// `[0.08 + (1+ε₂)·0.486 + γ₃/4]/(1−ε₁)`.
pub fn bracket_constant() -> f64 {
    (0.08 + (1.0 + EPS2) * 0.486 + GAMMA3 / 4.0) / (1.0 - EPS1)
}

/// `Σₙ ((a₁+…+aₙ)/n)² / Σ aₙ²` over the infinite sequence that continues
/// with zeros.
pub fn hardy_ratio(a: &[f64]) -> f64 {
    let denom: f64 = a.iter().map(|x| x * x).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let mut partial = 0.0;
    let mut lhs = 0.0;
    let mut inv_sq = 0.0;
    for (i, x) in a.iter().enumerate() {
        partial += x;
        let n = (i + 1) as f64;
        lhs += (partial / n).powi(2);
        inv_sq += 1.0 / (n * n);
    }
    // Σ_{n>N} 1/n² = π²/6 − Σ_{n≤N} 1/n²
    lhs += partial * partial * (PI * PI / 6.0 - inv_sq).max(0.0);
    lhs / denom
}

/// `ηₙ,₄ = 21c₀/(8n(n+1)(n+2)(n+3)(n+4))`.
pub fn eta_n4(n: i64) -> f64 {
    let n = n as f64;
    21.0 * C0 / (8.0 * n * (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0))
}

/// Instance check of the bound on the trilinear term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBudget {
    /// `S₁ … S₆`.
    pub s: [f64; 6],
    /// `|Σ_{n,m ≥ 2} ĥ(n)ĥ(m) conj ĥ(n+m) δₙ,ₘ|`.
    pub lhs: f64,
    pub lhs_error: f64,
    /// `ĥ(0) Σ_{n ≥ 2} |ĥ(n)|² βₙ`.
    pub rhs: f64,
    pub rhs_error: f64,
    pub bracket: f64,
    /// Hardy ratio of `aⱼ₋₁ = |ĥ(2j)| β₂ⱼ^{1/2}`, `j ≥ 2`.
    pub hardy: f64,
    pub constants: (f64, f64, f64),
}

impl SpectralBudget {
    pub fn s_total(&self) -> f64 {
        self.s.iter().sum()
    }

    pub fn record(&self) -> VerificationRecord {
        let lhs_margin = (self.rhs - self.rhs_error) - (self.lhs + self.lhs_error);
        let s_margin = self.bracket * (self.rhs - self.rhs_error) - self.s_total();
        let margin = lhs_margin.min(s_margin).min(BRACKET_LIMIT - self.bracket).min(4.0 - self.hardy);
        let mut r = VerificationRecord::new(
            "trilinear-budget",
            "|sum h(n) h(m) conj h(n+m) delta_nm| <= |h|_inf sum |h(n)|^2 beta_n",
            json!({}),
        );
        for (i, s) in self.s.iter().enumerate() {
            r = r.with_value(&format!("S{}", i + 1), *s);
        }
        r.with_value("lhs", self.lhs)
            .with_value("rhs", self.rhs)
            .with_value("bracket", self.bracket)
            .with_value("hardy_ratio", self.hardy)
            .decide_within(margin, 0.0)
    }
}

/// Computes both sides of the trilinear bound and its six-sum split for a
/// nonnegative antipodal `h`.
pub fn s_budget(seq: &SequenceCache, h: &TrigPoly) -> Result<SpectralBudget> {
    check_nonneg_antipodal(h)?;
    let d = h.degree() as i64;
    let c = h.mean().re;
    let hc = |n: i64| h.coeff(n);
    let mut pairs = Vec::new();
    for n in (2..=d).step_by(2) {
        for m in (2..=d - n).step_by(2) {
            pairs.push((n, m));
        }
    }
    let deltas = seq.delta_many(&pairs)?;
    let term = |n: i64, m: i64, coef: f64| hc(n) * hc(m) * hc(n + m).conj() * coef;
    let zero = Complex64::new(0.0, 0.0);
    let mut total = zero;
    let mut err = 0.0;
    let mut s = [zero; 6];
    for (&(n, m), dl) in pairs.iter().zip(&deltas) {
        let t = term(n, m, dl.value);
        total += t;
        err += (hc(n) * hc(m) * hc(n + m)).norm() * dl.abs_error;
        let (hi, lo) = (n.max(m), n.min(m));
        let eta = if lo == 4 { eta_n4(hi) } else { 0.0 };
        let resid = term(hi, lo, dl.value - eta);
        if m == 2 {
            s[0] += t;
        } else if n == 2 {
            s[1] += t;
        } else if m <= n {
            if m == 4 {
                s[2] += term(n, 4, eta);
            }
            s[4] += resid;
        } else {
            if n == 4 {
                s[3] += term(m, 4, eta);
            }
            s[5] += resid;
        }
    }
    let ns: Vec<usize> = (2..=d as usize).step_by(2).collect();
    let betas = seq.beta_many(&ns)?;
    let mut rhs = 0.0;
    let mut rhs_err = 0.0;
    let mut hardy_seq = Vec::new();
    for (&n, b) in ns.iter().zip(&betas) {
        let w = hc(n as i64).norm_sqr();
        rhs += w * b.value;
        rhs_err += w * b.abs_error;
        if n >= 4 {
            hardy_seq.push(hc(n as i64).norm() * b.value.max(0.0).sqrt());
        }
    }
    Ok(SpectralBudget {
        s: s.map(|z| z.norm()),
        lhs: total.norm(),
        lhs_error: err,
        rhs: c * rhs,
        rhs_error: c * rhs_err,
        bracket: bracket_constant(),
        hardy: hardy_ratio(&hardy_seq),
        constants: (EPS1, EPS2, GAMMA3),
    })
}

/// One evaluated trial of the explorer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerTrial {
    pub seed: u64,
    pub psi: f64,
    pub psi_error: f64,
    /// `Ψ(h)/‖h‖₂⁶`.
    pub normalized: f64,
}

/// `(n, Re, Im)` of a coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

/// Evidence gathered on `Ψ ≥ 0`; never a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub minimum: Option<ExplorerTrial>,
    pub minimizer: Vec<Coefficient>,
    /// Trials with `Ψ < −error`: potential counterexamples.
    pub flagged: Vec<ExplorerTrial>,
}

/// Largest degree the explorer accepts.
pub const EXPLORER_MAX_DEGREE: usize = 12;

/// Evaluates `Ψ` on `trials` random nonnegative antipodal functions; trial `i`
/// uses seed `seed + i`.
pub fn conjecture_explorer(engine: &IntegralEngine, degree: usize, trials: usize, seed: u64) -> Result<ConjectureReport> {
    if degree % 2 == 1 || degree > EXPLORER_MAX_DEGREE {
        return Err(Error::InvalidInput(format!("explorer degree must be even and at most {EXPLORER_MAX_DEGREE}, got {degree}")));
    }
    if trials > 0 && 2 * degree <= crate::circfun::DENSE_DEGREE {
        engine.dense(2 * degree)?;
    }
    let results: Vec<(ExplorerTrial, TrigPoly)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let h = random_test_function(degree, s, TestKind::NonnegAntipodal)?;
            let p = psi_fast(engine, &h)?;
            let norm6 = h.l2_norm_sq().powi(3);
            Ok((ExplorerTrial { seed: s, psi: p.value, psi_error: p.abs_error, normalized: p.value / norm6 }, h))
        })
        .collect::<Result<_>>()?;
    let mut minimum: Option<(ExplorerTrial, TrigPoly)> = None;
    let mut flagged = Vec::new();
    for (t, h) in results {
        if t.psi < -t.psi_error {
            flagged.push(t.clone());
        }
        if minimum.as_ref().is_none_or(|(m, _)| t.normalized < m.normalized) {
            minimum = Some((t, h));
        }
    }
    let (minimum, minimizer) = match minimum {
        Some((t, h)) => (Some(t), h.terms().into_iter().map(|(n, c)| Coefficient { n, re: c.re, im: c.im }).collect()),
        None => (None, Vec::new()),
    };
    Ok(ConjectureReport { degree, trials, seed, minimum, minimizer, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscint::QuadConfig;
    use std::sync::Arc;

    fn seq() -> SequenceCache {
        SequenceCache::from_config(QuadConfig::default()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn sixfold_basics() {
        let s = seq();
        let eng = s.engine();
        let o = one();
        let v = sixfold_form(eng, [&o, &o, &o, &o, &o, &o]).unwrap();
        assert!(close(v.value, tau(5) * 0.336_827_961_8, 1e-9), "{v}");
        assert!((v.value - 3298.43).abs() < 0.05);
        let e2 = e(2);
        assert_eq!(sixfold_form(eng, [&e2, &o, &o, &o, &o, &o]).unwrap().value, 0.0);
        let g = random_test_function(6, 5, TestKind::EvenRealMeanZero).unwrap();
        let lhs = sixfold_form(eng, [&g, &g, &o, &o, &o, &o]).unwrap();
        let mut rhs = 0.0;
        for (n, c) in g.terms() {
            rhs += c.norm_sqr() * s.alpha(n).unwrap().value;
        }
        assert!(close(lhs.value, tau(5) * rhs, 1e-12));
        let big = TrigPoly::monomial(17, Complex64::new(1.0, 0.0));
        assert!(sixfold_form(eng, [&big, &big, &big, &big, &big, &big]).is_err());
    }

    #[test]
    fn t_values_and_symmetry() {
        let s = seq();
        let eng = s.engine();
        let o = one();
        let t = trilinear_t(eng, &o, &o, &o).unwrap();
        let b0 = s.beta(0).unwrap().value;
        assert!(close(t.value, -2.0 * tau(5) * b0, 1e-12));
        assert!((t.value - 2638.8).abs() < 0.1, "{t}");
        let a = random_test_function(4, 1, TestKind::Real).unwrap();
        let b = random_test_function(4, 2, TestKind::Real).unwrap();
        let c = random_test_function(4, 3, TestKind::Real).unwrap();
        let x = trilinear_t(eng, &a, &b, &c).unwrap();
        for p in [trilinear_t(eng, &b, &a, &c).unwrap(), trilinear_t(eng, &c, &b, &a).unwrap()] {
            assert!((p.value - x.value).abs() <= 1e-12 * x.value.abs().max(1.0) + p.abs_error + x.abs_error);
        }
    }

    #[test]
    fn bilinear_and_trilinear_spectral() {
        let s = seq();
        let eng = s.engine();
        for seed in 0..6 {
            let g = random_test_function(8, seed, TestKind::EvenRealMeanZero).unwrap();
            let c = TrigPoly::constant(1.7);
            let direct = trilinear_t(eng, &c, &g, &g).unwrap();
            let spec = t_cgg_spectral(&s, 1.7, &g).unwrap();
            assert!((direct.value - spec.value).abs() <= 1e-11 * direct.value.abs(), "{direct} {spec}");
            assert!(direct.value < 0.0);
            assert_eq!(trilinear_t(eng, &c, &c, &g).unwrap().value, 0.0);
            let ggg = trilinear_t(eng, &g, &g, &g).unwrap();
            let gs = trilinear_t_spectral_gpart(&s, &g).unwrap();
            assert!((ggg.value - gs.value).abs() <= 1e-11 * ggg.value.abs().max(1e-3), "{ggg} {gs}");
        }
        let g2 = TrigPoly::cosine(2, 0.3);
        let gs = trilinear_t_spectral_gpart(&s, &g2).unwrap();
        let ggg = trilinear_t(eng, &g2, &g2, &g2).unwrap();
        assert!((gs.value - ggg.value).abs() < 1e-14);
        assert_eq!(trilinear_t_spectral_gpart(&s, &TrigPoly::zero()).unwrap().value, 0.0);
        assert!(trilinear_t_spectral_gpart(&s, &TrigPoly::cosine(1, 1.0)).is_err());
    }

    #[test]
    fn decomposition_identity() {
        let s = seq();
        let eng = s.engine();
        for seed in 0..4 {
            let h = random_test_function(6, seed, TestKind::NonnegAntipodal).unwrap();
            let dec = t_decomposition(eng, &h).unwrap();
            let full = trilinear_t(eng, &h, &h, &h).unwrap();
            let sum = dec.ccc + dec.excess();
            assert!((full.value - sum.value).abs() <= 1e-12 * full.value.abs(), "{full} {sum}");
        }
    }

    #[test]
    fn thm7_cases() {
        let s = seq();
        let eng = s.engine();
        let r = thm7_check(eng, &one()).unwrap();
        assert!(r.pass && r.margin == 0.0, "{r:?}");
        let h = one().add(&TrigPoly::cosine(2, 0.4));
        let r = thm7_check(eng, &h).unwrap();
        assert!(r.pass && r.margin > 1.0, "{r:?}");
        assert!(matches!(thm7_check(eng, &one().add(&TrigPoly::cosine(2, 3.0))), Err(Error::Precondition(_))));
        assert!(matches!(thm7_check(eng, &one().add(&TrigPoly::cosine(1, 0.1))), Err(Error::Precondition(_))));
    }

    #[test]
    fn psi_routes() {
        let s = seq();
        let eng = s.engine();
        let p = psi(eng, &one()).unwrap();
        assert!(p.value.abs() <= p.abs_error + 1e-9, "{p}");
        for seed in 0..3 {
            let f = random_test_function(4, seed, TestKind::Real).unwrap();
            let a = psi(eng, &f).unwrap();
            let b = psi_fast(eng, &f).unwrap();
            assert!((a.value - b.value).abs() <= 1e-10 * a.value.abs().max(1e-6), "{a} {b}");
        }
        // second-order coefficient 12 (2π)⁵ Σ |ĝ|² cₙ
        let g = random_test_function(5, 9, TestKind::RealMeanZero).unwrap();
        let mut sc = 0.0;
        for (n, c) in g.terms() {
            sc += c.norm_sqr() * c_n(&s, n.abs()).unwrap().value;
        }
        let second = 12.0 * tau(5) * sc;
        let eps = 1e-3;
        let f = one().add(&g.scale_real(eps));
        let fm = one().add(&g.scale_real(-eps));
        let even_part = 0.5 * (psi_fast(eng, &f).unwrap().value + psi_fast(eng, &fm).unwrap().value) / (eps * eps);
        assert!((even_part - second).abs() < 1e-3 * second, "{even_part} {second}");
        assert!(psi(eng, &TrigPoly::monomial(2, Complex64::new(1.0, 0.0))).is_err());
    }

    #[test]
    fn geometric_identity() {
        let s = seq();
        let eng = s.engine();
        assert!(geometric_identity_check(eng, &one()).unwrap().pass);
        let r = geometric_identity_check(eng, &one().add(&TrigPoly::cosine(2, 0.3))).unwrap();
        assert!(r.pass, "{r:?}");
        for seed in 0..3 {
            let f = random_test_function(6, seed, TestKind::EvenReal).unwrap();
            let r = geometric_identity_check(eng, &f).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(geometric_identity_check(eng, &TrigPoly::cosine(1, 1.0)).is_err());
    }

    #[test]
    fn c_n_values() {
        let s = seq();
        assert!((c_n(&s, 1).unwrap().value - 0.5085).abs() < 1e-3);
        assert!((c_n(&s, 2).unwrap().value - 0.0424).abs() < 1e-3);
        for r in cn_sweep(&s, 20).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        assert!(c_n(&s, 0).is_err());
    }

    #[test]
    fn crux_small() {
        let s = seq();
        let r = crux_check(&s, 40).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.values["tightest_n"], 2.0);
        assert!(alpha_upper_chain(10) <= 1.0 / 50.0);
        assert!(crux_check(&s, 3).is_err());
    }

    #[test]
    fn local_expansion_matches_finite_differences() {
        let s = seq();
        let g = random_test_function(4, 11, TestKind::RealMeanZero).unwrap();
        let ex = local_expansion(&s, &g, &[0.05]).unwrap();
        assert!(ex.min_order >= 2.5, "{ex:?}");
        let eng = s.engine();
        let h = 1e-3;
        let p = |e: f64| phi6(eng, &one().add(&g.scale_real(e))).unwrap().value;
        let fd = (p(h) + p(-h) - 2.0 * ex.phi6_one) / (2.0 * h * h);
        assert!((fd - ex.quadratic).abs() < 1e-3 * ex.quadratic.abs(), "{fd} {}", ex.quadratic);
        let r = local_extremizer_check(&s, &g, &[0.01, 0.02, 0.05]).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(local_extremizer_check(&s, &g.scale_real(2.0), &[0.01]).is_err());
        assert!(local_extremizer_check(&s, &g, &[0.2]).is_err());
    }

    #[test]
    fn e_relation() {
        let s = seq();
        for seed in 0..3 {
            let g = random_test_function(5, seed, TestKind::RealMeanZero).unwrap();
            let r = e_relation_check(s.engine(), &g).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn budget() {
        let s = seq();
        assert!(bracket_constant() < BRACKET_LIMIT);
        assert!((bracket_constant() - 0.9736).abs() < 1e-3);
        let h = one().add(&TrigPoly::cosine(2, 0.4)).add(&TrigPoly::cosine(4, 0.1));
        let b = s_budget(&s, &h).unwrap();
        assert!(b.lhs <= b.rhs && b.record().pass, "{b:?}");
        for seed in 0..5 {
            let h = random_test_function(10, seed, TestKind::NonnegAntipodal).unwrap();
            let b = s_budget(&s, &h).unwrap();
            assert!(b.record().pass, "{b:?}");
            assert!(b.s_total() + 1e-15 >= b.lhs);
        }
    }

    #[test]
    fn hardy() {
        assert_eq!(hardy_ratio(&[]), 0.0);
        // a single spike gives ζ(2)
        assert!((hardy_ratio(&[1.0]) - PI * PI / 6.0).abs() < 1e-12);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let len = rng.random_range(1..200);
            let a: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
            assert!(hardy_ratio(&a) <= 4.0);
        }
    }

    #[test]
    fn explorer() {
        let eng = Arc::new(IntegralEngine::new(QuadConfig::default()).unwrap());
        let r = conjecture_explorer(&eng, 2, 50, 7).unwrap();
        assert!(r.flagged.is_empty(), "{r:?}");
        let m = r.minimum.clone().unwrap();
        assert!(m.psi >= -m.psi_error);
        assert_eq!(conjecture_explorer(&eng, 2, 50, 7).unwrap(), r);
        let empty = conjecture_explorer(&eng, 4, 0, 1).unwrap();
        assert!(empty.minimum.is_none() && empty.minimizer.is_empty());
        assert!(conjecture_explorer(&eng, 3, 1, 1).is_err());
        assert!(conjecture_explorer(&eng, 14, 1, 1).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn t_symmetry_and_signs(s1 in 0u64..200, s2 in 0u64..200, d in 1usize..5, c in 0.1f64..3.0) {
            let s = seq();
            let eng = s.engine();
            let a = random_test_function(d, s1, TestKind::Real).unwrap();
            let b = random_test_function(d + 1, s2, TestKind::Real).unwrap();
            let g = random_test_function(2 * d, s1 ^ s2, TestKind::EvenRealMeanZero).unwrap();
            let x = trilinear_t(eng, &a, &b, &g).unwrap();
            let y = trilinear_t(eng, &g, &a, &b).unwrap();
            proptest::prop_assert!((x.value - y.value).abs() <= x.abs_error + y.abs_error + 1e-12 * x.value.abs());
            let cc = TrigPoly::constant(c);
            proptest::prop_assert!(trilinear_t(eng, &cc, &g, &g).unwrap().upper() < 0.0);
            let p = psi(eng, &a).unwrap();
            let a2 = a.mul(&a);
            let parts = (trilinear_t(eng, &a2, &a2, &a2).unwrap() - weighted_c(eng, &a).unwrap()) * 2.0;
            proptest::prop_assert!((p.value - parts.value).abs() <= 1e-12 * p.value.abs().max(1.0));
        }
    }
}
