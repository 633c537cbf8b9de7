//! Bessel values, the J₀ asymptotic defect and the envelope bound.
//!
//! ```text
//! cargo run --example bessel_values
//! ```

use circlext::bessel::{bessel_j, envelope_bound, j0_asymptotic_defect};

fn main() -> circlext::Result<()> {
    for r in [0.5, 5.0, 50.0, 500.0] {
        let js: Vec<String> = (0..5).map(|n| bessel_j(n, r).map(|v| format!("{v:+.12e}"))).collect::<Result<_, _>>()?;
        println!("r = {r:>6}: J_0..J_4 = {}", js.join(" "));
    }
    println!("J_-3(7) = {:+.15e}, -J_3(7) = {:+.15e}", bessel_j(-3, 7.0)?, -bessel_j(3, 7.0)?);

    // the defect decays like r^{-3/2}
    for r in [10.0f64, 100.0, 1000.0, 10000.0] {
        let d = j0_asymptotic_defect(r)?;
        println!("r = {r:>7}: |J_0 - asymptotic| = {d:.3e}, times r^1.5 = {:.4}", d * r.powf(1.5));
    }

    let mut worst: f64 = 0.0;
    for n in 0..40i64 {
        for k in 1..400 {
            let r = 0.25 * k as f64;
            worst = worst.max(bessel_j(n, r)?.abs() / envelope_bound(n, r)?);
        }
    }
    println!("max of |J_n| / envelope over n < 40, r <= 100: {worst:.4}");
    Ok(())
}
