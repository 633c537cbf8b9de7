//! Trigonometric polynomials on the unit circle and their extension transform.
//!
//! `f(ω) = Σ f̂(n) e^{inθ}` with `‖f‖₂² = 2π Σ |f̂(n)|²`. The extension
//! `f̂σ(x) = ∫ f(ω) e^{−ix·ω} dσ_ω` equals `2π Σ f̂(n) (−i)ⁿ Jₙ(|x|) e^{inφ}` in
//! polar coordinates `x = |x| e^{iφ}`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::bessel::bessel_j_sequence;
use crate::error::{Error, Result};
use crate::oscint::{CanonicalTuple, CertifiedValue, IntegralEngine, OrderTuple};
use crate::quad::adaptive_gk21;

/// Dense trigonometric polynomial, coefficients stored for `−d..=d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    degree: usize,
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl TrigPoly {
    /// Builds from `(n, f̂(n))` pairs; repeated frequencies are summed.
    pub fn new<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let pairs: Vec<(i64, Complex64)> = pairs.into_iter().collect();
        let d = pairs.iter().map(|p| p.0.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![ZERO; 2 * d + 1];
        for (n, c) in pairs {
            coeffs[(n + d as i64) as usize] += c;
        }
        TrigPoly::from_dense(coeffs)
    }

    /// From coefficients of `−d..=d` (odd length).
    pub fn from_dense(coeffs: Vec<Complex64>) -> Self {
        assert!(coeffs.len() % 2 == 1, "dense coefficient vector must have odd length");
        let d = coeffs.len() / 2;
        let mut p = TrigPoly { degree: d, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        let mut d = self.degree;
        while d > 0 && self.coeffs[self.degree - d] == ZERO && self.coeffs[self.degree + d] == ZERO {
            d -= 1;
        }
        if d < self.degree {
            let cut = self.degree - d;
            self.coeffs = self.coeffs[cut..cut + 2 * d + 1].to_vec();
            self.degree = d;
        }
    }

    pub fn zero() -> Self {
        TrigPoly { degree: 0, coeffs: vec![ZERO] }
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly { degree: 0, coeffs: vec![Complex64::new(c, 0.0)] }
    }

    /// `c·eₙ`.
    pub fn monomial(n: i64, c: Complex64) -> Self {
        TrigPoly::new([(n, c)])
    }

    /// `a·cos(nθ)`.
    pub fn cosine(n: i64, a: f64) -> Self {
        let h = Complex64::new(0.5 * a, 0.0);
        TrigPoly::new([(n, h), (-n, h)])
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let d = self.degree as i64;
        if n.abs() > d { ZERO } else { self.coeffs[(n + d) as usize] }
    }

    /// Coefficients of `−d..=d`.
    pub fn dense(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Nonzero `(n, f̂(n))` in increasing `n`.
    pub fn terms(&self) -> Vec<(i64, Complex64)> {
        let d = self.degree as i64;
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != ZERO).map(|(i, c)| (i as i64 - d, *c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// `f̂(−n) = conj f̂(n)` within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        let d = self.degree as i64;
        (-d..=d).all(|n| (self.coeff(-n) - self.coeff(n).conj()).norm() <= tol)
    }

    /// Odd coefficients vanish within `tol`.
    pub fn is_antipodal(&self, tol: f64) -> bool {
        let d = self.degree as i64;
        (-d..=d).filter(|n| n % 2 != 0).all(|n| self.coeff(n).norm() <= tol)
    }

    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        2.0 * PI * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `Σ_{n≠0} |f̂(n)|²`.
    pub fn oscillation_energy(&self) -> f64 {
        let d = self.degree as i64;
        (-d..=d).filter(|&n| n != 0).map(|n| self.coeff(n).norm_sqr()).sum()
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let d = self.degree as i64;
        // Horner in e^{iθ} starting from the top frequency
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * Complex64::from_polar(1.0, -(d as f64) * theta)
    }

    /// `f⋆(ω) = conj f(−ω)`, so `f̂⋆(n) = (−1)ⁿ conj f̂(−n)`.
    pub fn star(&self) -> Self {
        let d = self.degree as i64;
        let coeffs = (-d..=d).map(|n| self.coeff(-n).conj() * if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        TrigPoly { degree: self.degree, coeffs }
    }

    /// `ω ↦ f(−ω)`.
    pub fn reflect(&self) -> Self {
        let d = self.degree as i64;
        let coeffs = (-d..=d).map(|n| self.coeff(n) * if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        TrigPoly { degree: self.degree, coeffs }
    }

    /// `θ ↦ f(θ − θ₀)`.
    pub fn rotate(&self, theta0: f64) -> Self {
        let d = self.degree as i64;
        let coeffs = (-d..=d).map(|n| self.coeff(n) * Complex64::from_polar(1.0, -(n as f64) * theta0)).collect();
        TrigPoly { degree: self.degree, coeffs }
    }

    /// Multiplication by `e_k`.
    pub fn shift(&self, k: i64) -> Self {
        TrigPoly::new(self.terms().into_iter().map(|(n, c)| (n + k, c)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TrigPoly::from_dense(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &TrigPoly) -> Self {
        let d = self.degree.max(other.degree) as i64;
        TrigPoly::from_dense((-d..=d).map(|n| self.coeff(n) + other.coeff(n)).collect())
    }

    /// Pointwise product (coefficient convolution).
    pub fn mul(&self, other: &TrigPoly) -> Self {
        let d = self.degree + other.degree;
        let mut coeffs = vec![ZERO; 2 * d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TrigPoly::from_dense(coeffs)
    }

    /// Values at `θ_k = 2πk/N`, exact for `N > 2d`.
    pub fn samples(&self, n: usize) -> Result<Vec<Complex64>> {
        if n <= 2 * self.degree {
            return Err(Error::InvalidInput(format!("grid of {n} points cannot resolve degree {}", self.degree)));
        }
        let mut buf = vec![ZERO; n];
        for (k, c) in self.terms() {
            buf[k.rem_euclid(n as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        Ok(buf)
    }

    /// Discrete coefficients of grid samples, truncated to `|n| ≤ bandwidth`.
    /// Returns the polynomial and the L² norm of the discarded coefficients.
    pub fn from_samples(samples: &[Complex64], bandwidth: usize) -> Result<(TrigPoly, f64)> {
        let n = samples.len();
        if n == 0 || 2 * bandwidth >= n {
            return Err(Error::InvalidInput(format!("bandwidth {bandwidth} needs more than {n} samples")));
        }
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let b = bandwidth as i64;
        let poly = TrigPoly::from_dense((-b..=b).map(|k| buf[k.rem_euclid(n as i64) as usize] * scale).collect());
        let mut dropped = 0.0;
        for (i, c) in buf.iter().enumerate() {
            let k = if i <= n / 2 { i as i64 } else { i as i64 - n as i64 };
            if k.abs() > b {
                dropped += (c * scale).norm_sqr();
            }
        }
        Ok((poly, (2.0 * PI * dropped).sqrt()))
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().iter().map(|(n, c)| format!("({:+.6}{:+.6}i)e{n}", c.re, c.im)).collect();
        if parts.is_empty() { write!(f, "0") } else { write!(f, "{}", parts.join(" + ")) }
    }
}

/// A non-polynomial function replaced by its grid interpolant.
#[derive(Debug, Clone)]
pub struct GridInterpolant {
    pub poly: TrigPoly,
    /// L² norm of the coefficients dropped by truncation.
    pub residual: f64,
    pub grid_size: usize,
}

fn check_grid(f: &TrigPoly, grid_size: usize) -> Result<()> {
    if !grid_size.is_power_of_two() || grid_size < 8 * (f.degree() + 1) {
        return Err(Error::InvalidInput(format!(
            "grid size must be a power of two at least {}, got {grid_size}",
            8 * (f.degree() + 1)
        )));
    }
    Ok(())
}

fn interpolate(values: Vec<f64>, grid_size: usize) -> Result<GridInterpolant> {
    let samples: Vec<Complex64> = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let (poly, residual) = TrigPoly::from_samples(&samples, grid_size / 4)?;
    Ok(GridInterpolant { poly, residual, grid_size })
}

/// Interpolant of `|f|`, truncated to a quarter of the grid.
pub fn abs_interpolant(f: &TrigPoly, grid_size: usize) -> Result<GridInterpolant> {
    check_grid(f, grid_size)?;
    let s = f.samples(grid_size)?;
    interpolate(s.iter().map(|z| z.norm()).collect(), grid_size)
}

/// `f_♯ = √((|f|² + |f⋆|²)/2)` sampled on the grid and truncated to a quarter
/// of it.
pub fn antipodal_rearrangement(f: &TrigPoly, grid_size: usize) -> Result<GridInterpolant> {
    check_grid(f, grid_size)?;
    let s = f.samples(grid_size)?;
    let half = grid_size / 2;
    // f⋆(θ_k) = conj f(θ_k + π), and |·| drops the conjugate
    let vals = (0..grid_size).map(|k| (0.5 * (s[k].norm_sqr() + s[(k + half) % grid_size].norm_sqr())).sqrt()).collect();
    interpolate(vals, grid_size)
}

/// Families of random test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    /// `h = |g|² + floor` with `g` supported on even frequencies.
    NonnegAntipodal,
    /// Real, `ĝ(0) = 0`, `‖g‖₂ = 1`.
    RealMeanZero,
    /// Real, `‖f‖₂ = 1`.
    Real,
    /// Real with even frequencies only, `‖f‖₂ = 1`.
    EvenReal,
    /// Real, even frequencies, `ĝ(0) = 0`, `‖g‖₂ = 1`.
    EvenRealMeanZero,
}

impl TestKind {
    pub const ALL: [TestKind; 5] =
        [TestKind::NonnegAntipodal, TestKind::RealMeanZero, TestKind::Real, TestKind::EvenReal, TestKind::EvenRealMeanZero];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::NonnegAntipodal => "nonneg-antipodal",
            TestKind::RealMeanZero => "real-meanzero",
            TestKind::Real => "real",
            TestKind::EvenReal => "even-real",
            TestKind::EvenRealMeanZero => "even-real-meanzero",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown test function kind {s:?}")))
    }
}

/// Largest degree accepted by [`random_test_function`].
pub const MAX_RANDOM_DEGREE: usize = 64;

/// Additive floor of the nonnegative family.
pub const NONNEG_FLOOR: f64 = 1e-3;

/// Deterministic random test function of the given degree bound.
///
/// The antipodal kinds require an even degree.
pub fn random_test_function(degree: usize, seed: u64, kind: TestKind) -> Result<TrigPoly> {
    if degree > MAX_RANDOM_DEGREE {
        return Err(Error::InvalidInput(format!("degree must be at most {MAX_RANDOM_DEGREE}, got {degree}")));
    }
    let antipodal = matches!(kind, TestKind::NonnegAntipodal | TestKind::EvenReal | TestKind::EvenRealMeanZero);
    if antipodal && degree % 2 == 1 {
        return Err(Error::InvalidInput(format!("{kind} functions need an even degree, got {degree}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let d = degree as i64;
    match kind {
        TestKind::NonnegAntipodal => {
            let g: Vec<(i64, Complex64)> =
                (0..=d).step_by(2).map(|n| (n, Complex64::new(gauss(), gauss()))).collect();
            let g = TrigPoly::new(g);
            let g = g.scale_real(1.0 / (g.l2_norm() / (2.0 * PI).sqrt()));
            let h = g.mul(&g.star().reflect());
            Ok(symmetrize(&h.add(&TrigPoly::constant(NONNEG_FLOOR))))
        }
        _ => {
            let step = if antipodal { 2 } else { 1 };
            let meanzero = matches!(kind, TestKind::RealMeanZero | TestKind::EvenRealMeanZero);
            let mut pairs = Vec::new();
            if !meanzero {
                pairs.push((0, Complex64::new(gauss(), 0.0)));
            }
            let mut n = step;
            while n <= d {
                let c = Complex64::new(gauss(), gauss()) * std::f64::consts::FRAC_1_SQRT_2;
                pairs.push((n, c));
                pairs.push((-n, c.conj()));
                n += step;
            }
            let f = TrigPoly::new(pairs);
            if f.is_zero() {
                return Ok(f);
            }
            Ok(f.scale_real(1.0 / f.l2_norm()))
        }
    }
}

/// Enforces `f̂(−n) = conj f̂(n)` exactly by averaging.
pub fn symmetrize(f: &TrigPoly) -> TrigPoly {
    let d = f.degree() as i64;
    TrigPoly::from_dense((-d..=d).map(|n| 0.5 * (f.coeff(n) + f.coeff(-n).conj())).collect())
}

/// Largest degree accepted by the spectral `L⁶` route.
pub const SPECTRAL_MAX_DEGREE: usize = 16;

/// Largest slot degree served by the dense integral table.
pub const DENSE_DEGREE: usize = 20;

/// Complex lattice sum with its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: Complex64,
    pub abs_error: f64,
}

/// `Σ_{n₁+…+n₆=0} ∏ f̂ⱼ(nⱼ) I_{n₁…n₆}` with signed orders.
pub fn lattice_sum(engine: &IntegralEngine, slots: [&TrigPoly; 6]) -> Result<LatticeSum> {
    let terms: Vec<Vec<(i64, Complex64)>> = slots.iter().map(|p| p.terms()).collect();
    if terms.iter().any(|t| t.is_empty()) {
        return Ok(LatticeSum { value: ZERO, abs_error: 0.0 });
    }
    let dmax = slots.iter().map(|p| p.degree()).max().unwrap_or(0);
    if dmax <= DENSE_DEGREE {
        let table = engine.dense(dmax)?;
        Ok(lattice_walk(&terms, slots[5], |o| table.get(o)))
    } else {
        let mut keys = rustc_hash::FxHashSet::default();
        let mut bad = None;
        walk_tuples(&terms, slots[5], usize::MAX, |o, _| match OrderTuple::new(o) {
            Ok(t) => {
                keys.insert(t.key());
            }
            Err(e) => bad = Some(e),
        });
        if let Some(e) = bad {
            return Err(e);
        }
        engine.ensure(keys.into_iter().collect::<Vec<CanonicalTuple>>())?;
        Ok(lattice_walk(&terms, slots[5], |o| {
            let t = OrderTuple::new(o).expect("validated above");
            let v = engine.lookup(t.key()).expect("ensured above");
            (t.sign() * v.value, v.abs_error)
        }))
    }
}

/// Visits every zero-sum tuple with nonzero coefficients whose first index is
/// the `first`-th term of slot 0 (or all when `first` is `usize::MAX`).
fn walk_tuples(terms: &[Vec<(i64, Complex64)>], last: &TrigPoly, first: usize, mut visit: impl FnMut([i64; 6], Complex64)) {
    let reach: Vec<i64> = (0..6).map(|j| terms[j..].iter().map(|t| t.iter().map(|p| p.0.abs()).max().unwrap_or(0)).sum()).collect();
    let range = if first == usize::MAX { 0..terms[0].len() } else { first..first + 1 };
    for &(n1, c1) in &terms[0][range] {
        for &(n2, c2) in &terms[1] {
            let s2 = n1 + n2;
            if s2.abs() > reach[2] {
                continue;
            }
            let p2 = c1 * c2;
            for &(n3, c3) in &terms[2] {
                let s3 = s2 + n3;
                if s3.abs() > reach[3] {
                    continue;
                }
                let p3 = p2 * c3;
                for &(n4, c4) in &terms[3] {
                    let s4 = s3 + n4;
                    if s4.abs() > reach[4] {
                        continue;
                    }
                    let p4 = p3 * c4;
                    for &(n5, c5) in &terms[4] {
                        let n6 = -(s4 + n5);
                        let c6 = last.coeff(n6);
                        if c6 == ZERO {
                            continue;
                        }
                        visit([n1, n2, n3, n4, n5, n6], p4 * c5 * c6);
                    }
                }
            }
        }
    }
}

fn lattice_walk(terms: &[Vec<(i64, Complex64)>], last: &TrigPoly, get: impl Fn([i64; 6]) -> (f64, f64) + Sync) -> LatticeSum {
    let parts: Vec<(Complex64, f64, f64)> = (0..terms[0].len())
        .into_par_iter()
        .map(|i| {
            let mut acc = ZERO;
            let mut err = 0.0;
            let mut mass = 0.0;
            walk_tuples(terms, last, i, |o, p| {
                let (v, e) = get(o);
                acc += p * v;
                let m = p.norm();
                err += m * e;
                mass += m * v.abs();
            });
            (acc, err, mass)
        })
        .collect();
    let (mut value, mut err, mut mass) = (ZERO, 0.0, 0.0);
    for (a, e, m) in parts {
        value += a;
        err += e;
        mass += m;
    }
    LatticeSum { value, abs_error: err + 16.0 * f64::EPSILON * mass }
}

/// `‖f̂σ‖⁶_{L⁶(ℝ²)} = (2π)⁷ Σ f̂(n₁)f̂(n₂)f̂(n₃)f̂⋆(n₄)f̂⋆(n₅)f̂⋆(n₆) I_{n₁…n₆}`.
pub fn extension_norm6_spectral(engine: &IntegralEngine, f: &TrigPoly) -> Result<CertifiedValue> {
    if f.degree() > SPECTRAL_MAX_DEGREE {
        return Err(Error::Refused(format!(
            "spectral L6 norm is limited to degree {SPECTRAL_MAX_DEGREE}, got {}",
            f.degree()
        )));
    }
    let fs = f.star();
    let s = lattice_sum(engine, [f, f, f, &fs, &fs, &fs])?;
    let c = (2.0 * PI).powi(7);
    // the sum is real; any imaginary part is rounding
    Ok(CertifiedValue::new(c * s.value.re, c * (s.abs_error + s.value.im.abs())))
}

/// Cutoff accepted by the direct route.
pub const MIN_RADIAL_CUT: f64 = 100.0;

/// `∫_{ℝ²} |f̂σ|⁶` by planar quadrature: an exact equispaced rule in the
/// angle, adaptive panels in `r ≤ R`, and the phase-averaged Hankel tail
/// `(2π)³/R ∫ D(θ) dθ` past `R`, where `D = Σ_k C(3,k)² |f(θ+π)|^{2(3−k)} |f(θ)|^{2k}`.
pub fn extension_norm6_direct(f: &TrigPoly, radial_cut: f64) -> Result<CertifiedValue> {
    if !radial_cut.is_finite() || !(MIN_RADIAL_CUT..=1e5).contains(&radial_cut) {
        return Err(Error::InvalidInput(format!("radial cut must lie in [{MIN_RADIAL_CUT}, 1e5], got {radial_cut}")));
    }
    if f.is_zero() {
        return Ok(CertifiedValue::exact(0.0));
    }
    let d = f.degree();
    let m = 6 * d + 2;
    let terms = f.terms();
    let phases: Vec<Vec<Complex64>> =
        terms.iter().map(|(n, _)| (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * (n * k as i64) as f64 / m as f64)).collect()).collect();
    let radial = |r: f64| -> f64 {
        let j = bessel_j_sequence(d, r);
        let amps: Vec<Complex64> = terms
            .iter()
            .map(|&(n, c)| {
                let a = n.unsigned_abs() as usize;
                let jn = if n < 0 && a % 2 == 1 { -j[a] } else { j[a] };
                // (−i)ⁿ
                let rot = match n.rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, -1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, 1.0),
                };
                2.0 * PI * c * rot * jn
            })
            .collect();
        let mut s = 0.0;
        for k in 0..m {
            let mut z = ZERO;
            for (a, ph) in amps.iter().zip(&phases) {
                z += a * ph[k];
            }
            s += z.norm_sqr().powi(3);
        }
        2.0 * PI / m as f64 * s * r
    };
    let panels = radial_cut.ceil() as usize;
    let crude = adaptive_gk21(radial, 0.0, radial_cut, panels, f64::INFINITY, panels).value;
    let head = adaptive_gk21(radial, 0.0, radial_cut, panels, 1e-11 * crude.abs(), 50 * panels);
    if !head.converged {
        return Err(Error::AccuracyNotAchieved { requested: 1e-11 * crude.abs(), achieved: head.error, value: head.value });
    }
    let s = f.samples(m)?;
    let dsum: f64 = (0..m)
        .map(|k| {
            let a = s[(k + m / 2) % m].norm_sqr();
            let b = s[k].norm_sqr();
            a * a * a + 9.0 * a * a * b + 9.0 * a * b * b + b * b * b
        })
        .sum::<f64>()
        * (2.0 * PI / m as f64);
    let tail = (2.0 * PI).powi(3) / radial_cut * dsum;
    // next Hankel order shifts the averaged amplitude by O(n²/r)
    let tail_err = tail * (4.0 * (d * d) as f64 + 2.0) / radial_cut;
    Ok(CertifiedValue::new(head.value + tail, head.error + tail_err))
}

/// `Φ(f) = ‖f̂σ‖₆ / ‖f‖₂` through the spectral route.
pub fn phi(engine: &IntegralEngine, f: &TrigPoly) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::InvalidInput("Φ is undefined for the zero function".into()));
    }
    let n6 = extension_norm6_spectral(engine, f)?;
    Ok(n6.value.max(0.0).powf(1.0 / 6.0) / f.l2_norm())
}

/// Parses `n,re,im` records. A leading `n,re,im` header, blank lines and
/// `#` comments are skipped; a missing imaginary part reads as zero.
pub fn read_coefficients<R: Read>(reader: R) -> Result<TrigPoly> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut seen = std::collections::BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Parse { line, message: e.to_string() }
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 1);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if seen.is_empty() && i == 0 && rec.get(0) == Some("n") {
            continue;
        }
        if rec.len() < 2 || rec.len() > 3 {
            return Err(Error::Parse { line, message: format!("expected n,re[,im], got {} fields", rec.len()) });
        }
        let n: i64 = rec[0].parse().map_err(|_| Error::Parse { line, message: format!("bad frequency {:?}", &rec[0]) })?;
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse { line, message: format!("bad number {s:?}") })?;
            if v.is_finite() { Ok(v) } else { Err(Error::Parse { line, message: format!("non-finite number {s:?}") }) }
        };
        let re = num(&rec[1])?;
        let im = if rec.len() == 3 { num(&rec[2])? } else { 0.0 };
        if n.unsigned_abs() as usize > crate::oscint::MAX_ORDER {
            return Err(Error::Parse { line, message: format!("frequency {n} is out of range") });
        }
        if seen.insert(n, Complex64::new(re, im)).is_some() {
            return Err(Error::Parse { line, message: format!("frequency {n} appears twice") });
        }
    }
    Ok(TrigPoly::new(seen))
}

/// Writes nonzero coefficients as `n,re,im` with a header line.
pub fn write_coefficients(f: &TrigPoly) -> String {
    let mut s = String::from("n,re,im\n");
    for (n, c) in f.terms() {
        s.push_str(&format!("{n},{:e},{:e}\n", c.re, c.im));
    }
    s
}
