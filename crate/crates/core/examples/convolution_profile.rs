//! Radial profile of σ∗σ∗σ, its value at the origin, the logarithmic
//! singularity at r = 1 and the total mass.
//!
//! ```text
//! cargo run --release --example convolution_profile
//! ```

use circlext::circlegeom::{log_ratio_profile, mass_check, origin_check, sigma2, sigma3, sigma3_at_origin};

fn main() -> circlext::Result<()> {
    println!("sigma*sigma(1) = {:.12}  (4/sqrt 3 = {:.12})", sigma2(1.0)?, 4.0 / 3f64.sqrt());
    println!("sigma3(0) = {:.12}", sigma3_at_origin());
    println!("{}", origin_check()?.summary_line());

    println!("\n{:>6} {:>14}", "r", "sigma3(r)");
    for k in 0..=30 {
        let r = 0.1 * k as f64;
        if (r - 1.0).abs() < 1e-9 {
            println!("{r:>6.2} {:>14}", "log-singular");
            continue;
        }
        println!("{r:>6.2} {:>14.8}", sigma3(r)?);
    }

    let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let p = log_ratio_profile(&eps)?;
    println!("\nsigma3(r)/|log|r-1|| near r = 1:");
    for (r, v) in p.radii.iter().zip(&p.values) {
        println!("  r = 1 {:+.0e}: {v:.6}", r - 1.0);
    }
    println!("\n{}", mass_check().summary_line());
    Ok(())
}
