//! Antipodal rearrangement and grid interpolation of |f|.
//!
//! ```text
//! cargo run --release --example rearrangement
//! ```

use circlext::circfun::{abs_interpolant, antipodal_rearrangement, phi, random_test_function, TestKind};
use circlext::oscint::{IntegralEngine, QuadConfig};

fn main() -> circlext::Result<()> {
    let engine = IntegralEngine::new(QuadConfig::default())?;
    let f = random_test_function(3, 5, TestKind::Real)?;
    for grid in [64usize, 256, 1024] {
        let a = abs_interpolant(&f, grid)?;
        let r = antipodal_rearrangement(&f, grid)?;
        println!(
            "grid {grid:>5}: |f| residual {:.2e}; rearranged degree {}, residual {:.2e}, antipodal {}",
            a.residual,
            r.poly.degree(),
            r.residual,
            r.poly.is_antipodal(1e-12)
        );
    }
    let r = antipodal_rearrangement(&f, 64)?;
    println!("Phi(f) = {:.6}, Phi(rearranged on 64 points) = {:.6}", phi(&engine, &f)?, phi(&engine, &r.poly)?);
    Ok(())
}
