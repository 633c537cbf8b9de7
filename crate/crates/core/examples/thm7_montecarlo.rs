//! T(h,h,h) ≤ T(c,c,c) on random nonnegative antipodal h.
//!
//! ```text
//! cargo run --release --example thm7_montecarlo -- 2000
//! ```

use circlext::oscint::QuadConfig;
use circlext::replab::{thm7_suite, SuiteOptions};
use circlext::seqtab::SequenceCache;

fn main() -> circlext::Result<()> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse().expect("count")).unwrap_or(1000);
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    let recs = thm7_suite(&seq, SuiteOptions { seeds: Some(n), base_seed: 1 })?;
    let failed = recs.iter().filter(|r| !r.pass).count();
    let ratio = recs
        .iter()
        .map(|r| (r.values["t_hhh"] / r.values["t_ccc"], r.values["seed"]))
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    println!("{n} functions, {failed} failures");
    println!("largest T(h,h,h)/T(c,c,c) = {:.6} (seed {})", ratio.0, ratio.1);
    Ok(())
}
