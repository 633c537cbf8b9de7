//! Autoconvolutions of arc-length measure σ on the unit circle.
//!
//! `σ∗σ(x) = 4/(|x|√(4−|x|²))` on `0 < |x| < 2`, and `σ∗σ∗σ` is the radial
//! function
//!
//! ```text
//! σ∗σ∗σ(r) = (4/r) ∫_{A(r)}^1 du / (√(1−u²) √(a + 1 − u) √(b + 1 + u))
//! a = (1−r)²/(2r),  b = (3+r)(1−r)/(2r),  A(r) = −1 + max(0, (3+r)(r−1)/(2r))
//! ```
//!
//! supported on `r < 3` with a logarithmic singularity on the unit circle.
//! With `u = cos θ` the integrand becomes `1/(√(a + 2sin²(θ/2)) √(b + 1 + cos θ))`
//! and the near-singular ends are straightened by `sinh` substitutions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::quad::{adaptive_gk21, tanh_sinh};
use crate::report::VerificationRecord;

/// Below this radius the analytic limit `8π/√3` is returned.
pub const SMALL_RADIUS: f64 = 1e-4;
/// Closest admissible distance to the singular radius.
pub const SINGULAR_GAP: f64 = 1e-8;

const TOL: f64 = 1e-13;

/// Radial samples of a profile that excludes `r = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub singular_radius: f64,
}

impl RadialProfile {
    /// Two-column CSV `r,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            s.push_str(&format!("{r:.10},{v:.12e}\n"));
        }
        s
    }
}

/// `σ∗σ(r) = 4/(r√(4−r²))` for `0 < r < 2`.
pub fn sigma2(r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be finite, got {r}")));
    }
    if r <= 0.0 || r >= 2.0 {
        return Err(Error::Domain(format!("sigma2 is finite only on 0 < r < 2, got {r}")));
    }
    Ok(4.0 / (r * ((2.0 - r) * (2.0 + r)).sqrt()))
}

/// `8π/√3`, the value of `σ∗σ∗σ` at the origin.
pub fn sigma3_at_origin() -> f64 {
    8.0 * PI / 3f64.sqrt()
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let q = adaptive_gk21(f, a, b, 8, TOL, 20_000);
    q.value
}

/// `∫_0^{θ₁} dθ / √(s + 2sin²(θ/2))` weighted by `w(θ)`, with
/// `θ = √(2s) sinh t`.
fn near_zero_piece(scale: f64, theta1: f64, w: impl Fn(f64) -> f64) -> f64 {
    let c = (2.0 * scale).sqrt();
    let t1 = (theta1 / c).asinh();
    integrate(
        |t| {
            let th = c * t.sinh();
            let sn = (0.5 * th).sin();
            c * t.cosh() / (scale + 2.0 * sn * sn).sqrt() * w(th)
        },
        0.0,
        t1,
    )
}

/// `σ∗σ∗σ(r)`.
pub fn sigma3(r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be finite, got {r}")));
    }
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    if r >= 3.0 {
        return Ok(0.0);
    }
    if (r - 1.0).abs() < SINGULAR_GAP {
        return Err(Error::NearSingularity(format!("r = {r}")));
    }
    if r < SMALL_RADIUS {
        return Ok(sigma3_at_origin());
    }
    let a = (1.0 - r) * (1.0 - r) / (2.0 * r);
    let b = (3.0 + r) * (1.0 - r) / (2.0 * r);
    let total = if r < 1.0 {
        // singular scales a at θ = 0 and b at θ = π
        let left = near_zero_piece(a, 0.5 * PI, |th| {
            let c = (0.5 * (PI - th)).sin();
            1.0 / (b + 2.0 * c * c).sqrt()
        });
        let right = near_zero_piece(b, 0.5 * PI, |psi| {
            let s = (0.5 * (PI - psi)).sin();
            1.0 / (a + 2.0 * s * s).sqrt()
        });
        left + right
    } else {
        let cap = -1.0 + (3.0 + r) * (r - 1.0) / (2.0 * r);
        let tmax = cap.clamp(-1.0, 1.0).acos();
        if tmax <= 0.0 {
            return Ok(0.0);
        }
        let half = 0.5 * tmax;
        // b + 1 + cos θ = 2 sin(θmax − φ/2) sin(φ/2) with φ = θmax − θ
        let bsum = |phi: f64| 2.0 * (tmax - 0.5 * phi).sin() * (0.5 * phi).sin();
        let left = near_zero_piece(a, half, |th| 1.0 / bsum(tmax - th).sqrt());
        // φ = 2δ sinh²t, δ = π − θmax: b + 1 + cos θ = 2 sin(δ cosh²t) sin(δ sinh²t)
        let delta = PI - tmax;
        let t1 = (half / (2.0 * delta)).sqrt().asinh();
        let right = integrate(
            |t| {
                let (sh, ch) = (t.sinh(), t.cosh());
                let q = delta * sh * sh;
                let sinc = if q == 0.0 { 1.0 } else { q.sin() / q };
                let th = tmax - 2.0 * q;
                let sn = (0.5 * th).sin();
                4.0 * delta * ch / (2.0 * delta * (delta * ch * ch).sin() * sinc).sqrt() / (a + 2.0 * sn * sn).sqrt()
            },
            0.0,
            t1,
        );
        left + right
    };
    Ok(4.0 / r * total)
}

/// `σ∗σ∗σ(1 ± ε)/|log ε|` for each ε, sorted by radius.
pub fn log_ratio_profile(eps_list: &[f64]) -> Result<RadialProfile> {
    let mut pts = Vec::with_capacity(2 * eps_list.len());
    for &e in eps_list {
        if !(1e-7..=1e-2).contains(&e) {
            return Err(Error::InvalidInput(format!("epsilon must lie in [1e-7, 1e-2], got {e}")));
        }
        let l = e.ln().abs();
        for r in [1.0 - e, 1.0 + e] {
            pts.push((r, sigma3(r)? / l));
        }
    }
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(RadialProfile {
        radii: pts.iter().map(|p| p.0).collect(),
        values: pts.iter().map(|p| p.1).collect(),
        singular_radius: 1.0,
    })
}

/// Equispaced samples of `σ∗σ∗σ` on `[r_min, r_max]`.
pub fn sigma3_profile(r_min: f64, r_max: f64, samples: usize) -> Result<RadialProfile> {
    if !(0.0 <= r_min && r_min <= r_max && r_max <= 3.0) || samples == 0 {
        return Err(Error::InvalidInput(format!("need 0 <= r_min <= r_max <= 3 and samples > 0, got [{r_min}, {r_max}] x {samples}")));
    }
    let mut radii = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let r = if samples == 1 { r_min } else { r_min + (r_max - r_min) * i as f64 / (samples - 1) as f64 };
        radii.push(r);
        values.push(sigma3(r)?);
    }
    Ok(RadialProfile { radii, values, singular_radius: 1.0 })
}

/// `2π ∫₀³ σ∗σ∗σ(r) r dr`, which should equal `(2π)³`.
pub fn total_mass() -> f64 {
    let g = 2.0 * SINGULAR_GAP;
    let f = |r: f64, _: f64, _: f64| sigma3(r).expect("radius kept away from 1") * r;
    let inner = tanh_sinh(f, 0.0, 1.0 - g, 1e-10).value;
    let outer = tanh_sinh(f, 1.0 + g, 3.0, 1e-10).value;
    2.0 * PI * (inner + outer)
}

/// Relative mass error against `(2π)³`, required below `1e-3`.
pub fn mass_check() -> VerificationRecord {
    let m = total_mass();
    let exact = (2.0 * PI).powi(3);
    let rel = (m - exact).abs() / exact;
    VerificationRecord::new("sigma3-mass", "2 pi int_0^3 sigma3(r) r dr = (2 pi)^3", json!({}))
        .with_value("mass", m)
        .with_value("relative_error", rel)
        .decide(1e-3 - rel, 0.0)
}

/// The quadrature value at `r = SMALL_RADIUS` against `2π·σ∗σ(1) = 8π/√3`.
pub fn origin_check() -> Result<VerificationRecord> {
    let v = sigma3(SMALL_RADIUS)?;
    let oracle = 2.0 * PI * sigma2(1.0)?;
    let rel = (v - oracle).abs() / oracle;
    Ok(VerificationRecord::new("sigma3-origin", "sigma3(0) = 8 pi / sqrt 3", json!({ "r": SMALL_RADIUS }))
        .with_value("sigma3", v)
        .with_value("oracle", oracle)
        .with_value("relative_error", rel)
        .decide(1e-5 - rel, 0.0))
}

/// Ratios `σ∗σ∗σ(1±ε)/|log ε|` stay positive with `max/min ≤ 4`.
pub fn log_ratio_check(eps_list: &[f64]) -> Result<VerificationRecord> {
    let p = log_ratio_profile(eps_list)?;
    let lo = p.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = p.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ratio = hi / lo;
    let margin = if lo > 0.0 { 4.0 - ratio } else { -1.0 };
    Ok(VerificationRecord::new("sigma3-log-ratio", "c <= sigma3(x)/|log||x|-1|| <= C", json!({ "eps": eps_list }))
        .with_value("min_ratio", lo)
        .with_value("max_ratio", hi)
        .decide(margin, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `σ∗σ` from the mass `M(ρ)` of the set `{φ : |1 + e^{iφ}| < ρ}`, found by
    /// bisection, differentiated numerically with Richardson extrapolation.
    fn sigma2_oracle(rho: f64) -> f64 {
        let mass = |rho: f64| {
            // |1 + e^{iφ}| is decreasing on [0, π]; locate where it equals ρ
            let (mut lo, mut hi) = (0.0f64, PI);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let v = (2.0 + 2.0 * mid.cos()).max(0.0).sqrt();
                if v > rho { lo = mid } else { hi = mid }
            }
            2.0 * PI * 2.0 * (PI - 0.5 * (lo + hi))
        };
        let d = |h: f64| (mass(rho + h) - mass(rho - h)) / (2.0 * h);
        let h = 1e-4 * (2.0 - rho).min(1.0);
        let rich = (16.0 * d(h / 2.0) - d(h)) / 15.0;
        rich / (2.0 * PI * rho)
    }

    /// `∫_{S¹} σ∗σ(|x − ω|) dσ_ω` by tanh-sinh in the angle.
    fn sigma3_oracle(r: f64) -> f64 {
        if r == 0.0 {
            return 2.0 * PI * sigma2(1.0).unwrap();
        }
        let c = ((r * r + 1.0 - 4.0) / (2.0 * r)).max(-1.0);
        let phic = c.acos();
        let q = tanh_sinh(
            |phi, _, db| {
                let rho2 = r * r + 1.0 - 2.0 * r * phi.cos();
                // 4 − ρ² = 2r(cos φ − cos φc) = 4r sin((φc+φ)/2) sin(db/2)
                let gap = if phic < PI { 4.0 * r * (0.5 * (phic + phi)).sin() * (0.5 * db).sin() } else { 4.0 - rho2 };
                4.0 / (rho2.sqrt() * gap.sqrt())
            },
            0.0,
            phic,
            1e-12,
        );
        2.0 * q.value
    }

    #[test]
    fn sigma2_values() {
        assert!((sigma2(2f64.sqrt()).unwrap() - 2.0).abs() < 1e-14);
        assert!((sigma2(1.0).unwrap() - 4.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(matches!(sigma2(0.0), Err(Error::Domain(_))));
        assert!(matches!(sigma2(2.0), Err(Error::Domain(_))));
        for r in [0.1, 0.5, 1.0, 1.5, 1.9] {
            let o = sigma2_oracle(r);
            let v = sigma2(r).unwrap();
            assert!((o - v).abs() < 1e-6 * v, "r={r}: {v} vs {o}");
        }
    }

    #[test]
    fn sigma3_against_angular_oracle() {
        for r in [0.0, 0.5, 1.5, 2.5, 0.9, 1.1, 2.9, 2.999] {
            let v = sigma3(r).unwrap();
            let o = sigma3_oracle(r);
            assert!((v - o).abs() < 1e-5 * o, "r={r}: {v} vs {o}");
        }
    }

    #[test]
    fn sigma3_limits_and_support() {
        assert!((sigma3(0.0).unwrap() - 14.510_394_913_402_35).abs() < 1e-9);
        let near0 = sigma3(2e-4).unwrap();
        assert!((near0 - sigma3_at_origin()).abs() < 1e-3);
        assert_eq!(sigma3(3.0).unwrap(), 0.0);
        assert_eq!(sigma3(7.0).unwrap(), 0.0);
        let edge = sigma3(2.999).unwrap();
        assert!(edge > 0.0 && edge.is_finite(), "{edge}");
        assert!(matches!(sigma3(1.0 + 1e-9), Err(Error::NearSingularity(_))));
        assert!(sigma3(-0.1).is_err());
    }

    #[test]
    fn log_growth() {
        let p = log_ratio_profile(&[1e-3, 1e-4, 1e-5]).unwrap();
        assert_eq!(p.values.len(), 6);
        assert!(p.radii.windows(2).all(|w| w[0] < w[1]));
        assert!(log_ratio_check(&[1e-3, 1e-4, 1e-5]).unwrap().pass);
        assert!(log_ratio_profile(&[1e-2]).unwrap().values.iter().all(|v| v.is_finite()));
        assert!(log_ratio_profile(&[0.5]).is_err());
    }

    #[test]
    fn mass_and_origin() {
        let r = mass_check();
        assert!(r.pass, "{r:?}");
        assert!(origin_check().unwrap().pass);
    }
}
