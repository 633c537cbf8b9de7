//! Quadrature rules shared by the integral engines.
//!
//! Two families live here: the 21-point Gauss–Kronrod pair (fixed panels and
//! an adaptive bisection driver) and double-exponential tanh-sinh quadrature
//! for integrands with endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1]; odd indices are the embedded Gauss nodes.
#[allow(clippy::excessive_precision)]
pub const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
pub const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
pub const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One node of a 21-point panel: abscissa, Kronrod weight, Gauss weight
/// (zero for Kronrod-only nodes). Weights are already scaled to the panel.
#[derive(Debug, Clone, Copy)]
pub struct PanelNode {
    pub x: f64,
    pub wk: f64,
    pub wg: f64,
}

/// The 21 nodes of the Gauss–Kronrod pair mapped onto `[a, b]`.
pub fn gk21_nodes(a: f64, b: f64) -> [PanelNode; 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [PanelNode { x: c, wk: WGK21[10] * h, wg: 0.0 }; 21];
    for j in 0..10 {
        let wg = if j % 2 == 1 { WG10[j / 2] * h } else { 0.0 };
        let dx = h * XGK21[j];
        out[2 * j] = PanelNode { x: c - dx, wk: WGK21[j] * h, wg };
        out[2 * j + 1] = PanelNode { x: c + dx, wk: WGK21[j] * h, wg };
    }
    out
}

/// Result of a single panel: Kronrod value, |Kronrod − Gauss|, and ∫|f|.
#[derive(Debug, Clone, Copy, Default)]
pub struct PanelEstimate {
    pub value: f64,
    pub error: f64,
    pub abs_mass: f64,
}

pub fn gk21<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> PanelEstimate {
    let mut k = 0.0;
    let mut g = 0.0;
    let mut m = 0.0;
    for node in gk21_nodes(a, b) {
        let y = f(node.x);
        k += node.wk * y;
        g += node.wg * y;
        m += node.wk * y.abs();
    }
    PanelEstimate { value: k, error: (k - g).abs(), abs_mass: m }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Adaptive bisection with the 21-point pair, starting from `initial`
/// equal panels. Stops once the summed |K − G| falls below `tol`.
pub fn adaptive_gk21<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    tol: f64,
    max_panels: usize,
) -> Quadrature {
    let initial = initial.max(1);
    let mut heap = BinaryHeap::with_capacity(initial * 2);
    let h = (b - a) / initial as f64;
    for i in 0..initial {
        let lo = a + h * i as f64;
        let hi = if i + 1 == initial { b } else { lo + h };
        heap.push(Panel { a: lo, b: hi, est: gk21(&mut f, lo, hi) });
    }
    loop {
        let (value, error, mass) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.est.value, acc.1 + p.est.error, acc.2 + p.est.abs_mass)
        });
        let floor = 50.0 * f64::EPSILON * mass;
        if error <= tol || error <= floor {
            return Quadrature { value, error: error.max(floor), panels: heap.len(), converged: true };
        }
        if heap.len() >= max_panels {
            return Quadrature { value, error: error.max(floor), panels: heap.len(), converged: false };
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Quadrature { value, error: error.max(floor), panels: heap.len(), converged: false };
        }
        heap.push(Panel { a: worst.a, b: mid, est: gk21(&mut f, worst.a, mid) });
        heap.push(Panel { a: mid, b: worst.b, est: gk21(&mut f, mid, worst.b) });
    }
}

/// Tanh-sinh quadrature on `[a, b]`. Tolerates integrable endpoint
/// singularities; `f` receives `(x, distance_to_a, distance_to_b)` so the
/// caller can evaluate near-endpoint factors without cancellation.
///
/// The step is halved until successive estimates agree to `tol` (relative).
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let tmax = 6.5;
    let mut eval = |t: f64| -> f64 {
        let s = pi2 * t.sinh();
        let cs = s.cosh();
        // 1 - tanh(s) computed stably
        let e = (-2.0 * s.abs()).exp();
        let one_minus = 2.0 * e / (1.0 + e);
        let w = pi2 * t.cosh() / (cs * cs);
        let th = s.tanh();
        let (da, db) = if t >= 0.0 {
            (half * (1.0 + th), half * one_minus)
        } else {
            (half * one_minus, half * (1.0 - th))
        };
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        let x = mid + half * th;
        let y = f(x, da, db);
        if y.is_finite() { y * w * half } else { 0.0 }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h;
    let mut level = 0;
    loop {
        h *= 0.5;
        level += 1;
        let mut add = 0.0;
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            add += eval(t) + eval(-t);
            k += 2;
        }
        sum += add;
        let cur = sum * h;
        let diff = (cur - prev).abs();
        if level >= 3 && diff <= tol * cur.abs().max(1e-300) {
            return Quadrature { value: cur, error: diff, panels: level, converged: true };
        }
        if level >= 12 {
            return Quadrature { value: cur, error: diff, panels: level, converged: false };
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk21_integrates_polynomials_exactly() {
        let est = gk21(|x| x.powi(20) - 3.0 * x.powi(7), -1.0, 2.0);
        let exact = (2f64.powi(21) + 1.0) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((est.value - exact).abs() < 1e-10 * exact.abs());
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let q = adaptive_gk21(|x| (6.0 * x).cos(), 0.0, 100.0, 10, 1e-13, 10_000);
        assert!(q.converged);
        assert!((q.value - (600.0f64).sin() / 6.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-1/2} dx = 2, ∫_{-1}^{1} (1-x²)^{-1/2} = π
        let q = tanh_sinh(|_x, da, _db| da.powf(-0.5), 0.0, 1.0, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-10, "{}", q.value);
        let q = tanh_sinh(|_x, da, db| 1.0 / (da * db).sqrt(), -1.0, 1.0, 1e-12);
        assert!((q.value - std::f64::consts::PI).abs() < 1e-10);
        let q = tanh_sinh(|_x, da, _db| -da.ln(), 0.0, 1.0, 1e-12);
        assert!((q.value - 1.0).abs() < 1e-10);
    }
}
