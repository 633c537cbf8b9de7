//! Random search for the smallest Ψ(h)/‖h‖⁶ over nonnegative antipodal h.
//!
//! ```text
//! cargo run --release --example conjecture_explorer -- 8 10000 1
//! ```

use circlext::forms::conjecture_explorer;
use circlext::oscint::{IntegralEngine, QuadConfig};

fn main() -> circlext::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer"));
    let degree = args.next().unwrap_or(8) as usize;
    let trials = args.next().unwrap_or(2000) as usize;
    let seed = args.next().unwrap_or(1);
    let engine = IntegralEngine::new(QuadConfig::default())?;
    let r = conjecture_explorer(&engine, degree, trials, seed)?;
    if let Some(m) = &r.minimum {
        println!("min Psi/|h|^6 = {:.6} (Psi = {:.6e} +- {:.1e}, seed {})", m.normalized, m.psi, m.psi_error, m.seed);
        for c in &r.minimizer {
            println!("  {:>3} {:+.6e} {:+.6e}", c.n, c.re, c.im);
        }
    }
    println!("flagged: {}", r.flagged.len());
    Ok(())
}
