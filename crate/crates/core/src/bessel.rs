//! Bessel functions `J_n` of integer order on `[0, ∞)`.
//!
//! Three evaluation schemes are combined:
//! * power series for small arguments,
//! * Miller backward recurrence (normalized either by the Neumann sum
//!   `J_0 + 2 Σ J_{2k} = 1` or, for `x ≥ 25`, against the Hankel values of
//!   `J_0`/`J_1`),
//! * the Hankel asymptotic expansion of `H^{(1)}_0`, `H^{(1)}_1` followed by
//!   forward recurrence, used whenever `x` is large compared with the order.
//!
//! Negative orders are folded with `J_{-n} = (-1)^n J_n` at the interface.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Smallest argument for which the Hankel expansion of orders 0 and 1 is
/// used; there the optimally truncated series is below 1e-17.
pub const HANKEL_MIN_ARG: f64 = 25.0;

/// A signed integer Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselOrder(pub i64);

impl BesselOrder {
    /// Nonnegative order and the parity sign picked up by folding.
    pub fn fold(self) -> (usize, f64) {
        let n = self.0.unsigned_abs() as usize;
        let sign = if self.0 < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
        (n, sign)
    }
}

impl From<i64> for BesselOrder {
    fn from(n: i64) -> Self {
        BesselOrder(n)
    }
}

/// Coefficient `a_k(n) = ∏_{j=1}^{k} (4n² − (2j−1)²) / (k! 8^k)` of the
/// Hankel expansion.
pub fn hankel_coefficient(n: usize, k: usize) -> f64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut a = 1.0;
    for j in 1..=k {
        let odd = (2 * j - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * j as f64);
    }
    a
}

/// `u_n(x) = H^{(1)}_n(x) e^{-ix}` for `n = 0, 1` from the Hankel series.
fn hankel_scaled_low(n: usize, x: f64) -> Complex64 {
    debug_assert!(x >= HANKEL_MIN_ARG);
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev_mag = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= Complex64::new(0.0, (mu - odd * odd) / (8.0 * k as f64 * x));
        let mag = term.norm();
        if mag > prev_mag {
            break;
        }
        sum += term;
        if mag < 1e-18 {
            break;
        }
        prev_mag = mag;
    }
    let phase = -(n as f64) * 0.5 * PI - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * Complex64::from_polar(1.0, phase) * sum
}

/// `u_k(x) = H^{(1)}_k(x) e^{-ix}` for `k = 0..=nmax`, `x ≥ 25`.
///
/// Forward recurrence on the Hankel function is stable for every order
/// because it follows the dominant solution.
pub fn hankel_scaled_sequence(nmax: usize, x: f64) -> Vec<Complex64> {
    assert!(x >= HANKEL_MIN_ARG, "hankel_scaled_sequence needs x >= {HANKEL_MIN_ARG}");
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(hankel_scaled_low(0, x));
    if nmax >= 1 {
        out.push(hankel_scaled_low(1, x));
    }
    for k in 1..nmax {
        let next = out[k] * (2.0 * k as f64 / x) - out[k - 1];
        out.push(next);
    }
    out
}

fn series(n: usize, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= 0.5 * x / k as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    let mut term = lead;
    let mut sum = lead;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller_start(nmax: usize, x: f64) -> usize {
    let top = (nmax as f64).max(x);
    let m = (top + 30.0 + 20.0 * x.cbrt()).ceil() as usize;
    m + (m % 2)
}

fn miller_sequence(nmax: usize, x: f64) -> Vec<f64> {
    let m = miller_start(nmax, x);
    let mut vals = vec![0.0; m + 2];
    vals[m] = 1e-300;
    let mut sum = 0.0;
    let mut k = m;
    while k > 0 {
        let jm1 = (2.0 * k as f64 / x) * vals[k] - vals[k + 1];
        vals[k - 1] = jm1;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            sum += 2.0 * jm1;
        }
        if jm1.abs() > 1e250 {
            let s = 1e-250;
            for v in vals[k - 1..=m].iter_mut() {
                *v *= s;
            }
            sum *= s;
        }
        k -= 1;
    }
    sum += vals[0];
    let scale = if x >= HANKEL_MIN_ARG {
        let j0 = (hankel_scaled_low(0, x) * Complex64::from_polar(1.0, x)).re;
        let j1 = (hankel_scaled_low(1, x) * Complex64::from_polar(1.0, x)).re;
        if j0.abs() >= j1.abs() { j0 / vals[0] } else { j1 / vals[1] }
    } else {
        1.0 / sum
    };
    vals.truncate(nmax + 1);
    for v in vals.iter_mut() {
        *v *= scale;
    }
    vals
}

fn forward_usable(nmax: usize, x: f64) -> bool {
    x >= HANKEL_MIN_ARG && x >= 1.25 * nmax as f64 + 10.0
}

/// `J_0(x), …, J_nmax(x)` for `x ≥ 0`.
pub fn bessel_j_sequence(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    if forward_usable(nmax, x) {
        let rot = Complex64::from_polar(1.0, x);
        let j0 = (hankel_scaled_low(0, x) * rot).re;
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(j0);
        if nmax >= 1 {
            out.push((hankel_scaled_low(1, x) * rot).re);
        }
        for k in 1..nmax {
            let next = (2.0 * k as f64 / x) * out[k] - out[k - 1];
            out.push(next);
        }
        return out;
    }
    miller_sequence(nmax, x)
}

fn check_arg(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidInput(format!("Bessel argument must be finite and nonnegative, got {r}")));
    }
    Ok(())
}

/// `J_n(r)` for any integer order and finite `r ≥ 0`.
pub fn bessel_j(n: impl Into<BesselOrder>, r: f64) -> Result<f64> {
    check_arg(r)?;
    let (n, sign) = n.into().fold();
    let v = if r == 0.0 {
        if n == 0 { 1.0 } else { 0.0 }
    } else if r <= 1.0 {
        series(n, r)
    } else {
        bessel_j_sequence(n, r)[n]
    };
    Ok(sign * v)
}

/// `|J_0(r) − (2/(πr))^{1/2} cos(r − π/4)|`.
pub fn j0_asymptotic_defect(r: f64) -> Result<f64> {
    check_arg(r)?;
    if r == 0.0 {
        return Err(Error::InvalidInput("j0_asymptotic_defect needs r > 0".into()));
    }
    let j0 = bessel_j(0, r)?;
    Ok((j0 - (2.0 / (PI * r)).sqrt() * (r - FRAC_PI_4).cos()).abs())
}

/// `min(r^{-1/3}, r^n / (2^n n!))`, an upper bound for `|J_n(r)|`.
pub fn envelope_bound(n: impl Into<BesselOrder>, r: f64) -> Result<f64> {
    let n = n.into();
    if n.0 < 0 {
        return Err(Error::InvalidInput("envelope_bound takes n >= 0".into()));
    }
    check_arg(r)?;
    if r == 0.0 {
        return Err(Error::InvalidInput("envelope_bound needs r > 0".into()));
    }
    let n = n.0 as usize;
    let mut small = 1.0;
    for k in 1..=n {
        small *= 0.5 * r / k as f64;
    }
    Ok(r.powf(-1.0 / 3.0).min(small))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0, f64::NAN).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, f64::INFINITY).is_err());
    }

    /// First zero of J_0, located independently by bisection on the power
    /// series evaluated in long form.
    #[test]
    fn first_zero_of_j0() {
        let f = |x: f64| {
            let mut term = 1.0f64;
            let mut sum = 1.0;
            for k in 1..60 {
                term *= -(x * x) / (4.0 * (k * k) as f64);
                sum += term;
            }
            sum
        };
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 { hi = mid } else { lo = mid }
        }
        let zero = 0.5 * (lo + hi);
        assert!((zero - 2.404825557695773).abs() < 1e-13);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn known_values() {
        // Abramowitz & Stegun tables
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 10.0, -0.245_935_764_451_348_3),
            (1, 10.0, 0.043_472_746_168_861_6),
            (5, 10.0, -0.234_061_528_186_793_6),
            (10, 10.0, 0.207_486_106_633_358_9),
            (0, 100.0, 0.019_985_850_304_223_12),
            (2, 30.0, 0.078_451_246_073_265_38),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-14, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn schemes_agree_across_switchover() {
        for &x in &[24.9, 25.0, 40.0, 90.0, 300.0, 800.0] {
            let fw = bessel_j_sequence(10, x);
            let mi = miller_sequence(10, x);
            for n in 0..=10 {
                assert!((fw[n] - mi[n]).abs() < 2e-15, "n={n} x={x}: {} vs {}", fw[n], mi[n]);
            }
        }
        for &x in &[0.3, 0.9, 1.0] {
            let mi = miller_sequence(12, x);
            for n in 0..=12 {
                assert!((series(n, x) - mi[n]).abs() < 1e-16 + 1e-14 * mi[n].abs());
            }
        }
    }

    #[test]
    fn hankel_scaled_matches_j() {
        for &x in &[25.0, 60.0, 500.0] {
            let u = hankel_scaled_sequence(20, x);
            let j = bessel_j_sequence(20, x);
            let rot = Complex64::from_polar(1.0, x);
            for n in 0..=20 {
                assert!(((u[n] * rot).re - j[n]).abs() < 1e-14);
            }
            // Wronskian: J_{n+1} Y_n − J_n Y_{n+1} = 2/(πx)
            for n in 0..20 {
                let h0 = u[n] * rot;
                let h1 = u[n + 1] * rot;
                let w = h1.re * h0.im - h0.re * h1.im;
                assert!((w - 2.0 / (PI * x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn large_argument_and_order() {
        let x = 1e6;
        let v = bessel_j(64, x).unwrap();
        assert!(v.abs() < (2.0 / (PI * x)).sqrt() * 1.01);
        let j = bessel_j_sequence(400, 300.0);
        let m = miller_sequence(400, 300.0);
        for n in 0..=400 {
            assert!((j[n] - m[n]).abs() < 1e-15);
        }
    }

    #[test]
    fn normalization_sum() {
        for &x in &[0.5, 7.0, 33.0, 50.0] {
            let j = bessel_j_sequence(120, x);
            let s: f64 = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-10, "x={x}: {s}");
        }
    }

    #[test]
    fn j0_defect_examples() {
        assert!(j0_asymptotic_defect(10.0).unwrap() <= 10f64.powf(-1.5));
        assert!(j0_asymptotic_defect(100.0).unwrap() <= 1e-3);
        assert!(j0_asymptotic_defect(1.0).unwrap() <= 1.0);
        assert!(j0_asymptotic_defect(0.0).is_err());
    }

    #[test]
    fn envelope_examples() {
        assert!((envelope_bound(0, 8.0).unwrap() - 0.5).abs() < 1e-15);
        let e = envelope_bound(5, 1.0).unwrap();
        assert!((e - 1.0 / (32.0 * 120.0)).abs() < 1e-18);
        assert!(bessel_j(5, 1.0).unwrap().abs() <= e);
        assert!(envelope_bound(-1, 1.0).is_err());
    }

    #[test]
    fn envelope_sweep() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n: i64 = rng.random_range(0..=64);
            let r: f64 = 10f64.powf(rng.random_range(-2.0..4.0));
            assert!(bessel_j(n, r).unwrap().abs() <= envelope_bound(n, r).unwrap() * (1.0 + 1e-12));
        }
    }

    proptest! {
        #[test]
        fn parity(n in -64i64..=64, r in 0.0f64..2000.0) {
            let a = bessel_j(n, r).unwrap();
            let b = bessel_j(-n, r).unwrap();
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(a, s * b);
        }

        #[test]
        fn recurrence_residual(n in 1usize..=64, r in 0.5f64..1e4) {
            let j = bessel_j_sequence(n + 1, r);
            let res = j[n - 1] + j[n + 1] - 2.0 * n as f64 / r * j[n];
            prop_assert!(res.abs() <= 1e-10 * j[n].abs().max(1.0));
        }
    }
}
