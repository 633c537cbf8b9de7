//! ‖f̂σ‖₆⁶ from the lattice sum over sixfold integrals and from direct
//! quadrature of the extension, for a few random polynomials.
//!
//! ```text
//! cargo run --release --example norm6_dual_route -- 2000
//! ```

use circlext::circfun::{extension_norm6_direct, extension_norm6_spectral, phi, random_test_function, TestKind, TrigPoly};
use circlext::oscint::{IntegralEngine, QuadConfig};

fn main() -> circlext::Result<()> {
    let cut: f64 = std::env::args().nth(1).map(|s| s.parse().expect("radial cut")).unwrap_or(2000.0);
    let engine = IntegralEngine::new(QuadConfig::default())?;
    println!("Phi(1) = {:.6}", phi(&engine, &TrigPoly::constant(1.0))?);
    for (i, degree) in [1usize, 3, 5, 8].into_iter().enumerate() {
        let f = random_test_function(degree, 40 + i as u64, TestKind::Real)?;
        let s = extension_norm6_spectral(&engine, &f)?;
        let d = extension_norm6_direct(&f, cut)?;
        println!(
            "degree {degree}: spectral {s}  direct {d}  relative gap {:.2e}  Phi = {:.6}",
            (s.value - d.value).abs() / s.value,
            phi(&engine, &f)?
        );
    }
    Ok(())
}
