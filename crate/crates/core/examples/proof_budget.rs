//! The six-sum split of the trilinear bound, the bracket constant and
//! Hardy ratios for a few nonnegative antipodal h.
//!
//! ```text
//! cargo run --release --example proof_budget
//! ```

use circlext::circfun::{random_test_function, TestKind};
use circlext::forms::{bracket_constant, hardy_ratio, s_budget};
use circlext::oscint::QuadConfig;
use circlext::seqtab::SequenceCache;

fn main() -> circlext::Result<()> {
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    println!("bracket = {:.6}", bracket_constant());
    for seed in 1..=5 {
        let h = random_test_function(10, seed, TestKind::NonnegAntipodal)?;
        let b = s_budget(&seq, &h)?;
        let s: Vec<String> = b.s.iter().map(|x| format!("{x:.2e}")).collect();
        println!(
            "seed {seed}: lhs {:.4e} <= rhs {:.4e} (ratio {:.3}); S = [{}], sum/rhs {:.3}; hardy {:.3}",
            b.lhs,
            b.rhs,
            b.lhs / b.rhs,
            s.join(", "),
            b.s_total() / b.rhs,
            b.hardy
        );
    }
    let harmonic: Vec<f64> = (1..=100_000).map(|n| 1.0 / (n as f64).sqrt()).collect();
    println!("hardy ratio of n^-1/2 truncated at 1e5: {:.4} (sup 4)", hardy_ratio(&harmonic));
    Ok(())
}
