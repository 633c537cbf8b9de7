//! Φ near the constant function: Φ⁶(1+εg) against the quadratic model and the
//! observed order of the defect.
//!
//! ```text
//! cargo run --release --example local_extremizer
//! ```

use circlext::circfun::{random_test_function, TestKind};
use circlext::forms::{c_n, local_expansion, local_extremizer_check};
use circlext::oscint::QuadConfig;
use circlext::seqtab::SequenceCache;

fn main() -> circlext::Result<()> {
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    let cn: Vec<String> = (1..=8).map(|n| c_n(&seq, n).map(|v| format!("{:.5}", v.value))).collect::<Result<_, _>>()?;
    println!("c_1..c_8 = {}", cn.join(", "));
    for seed in 1..=3 {
        let g = random_test_function(4 + seed as usize, seed, TestKind::RealMeanZero)?;
        let ex = local_expansion(&seq, &g, &[0.01, 0.02, 0.05])?;
        println!("seed {seed}: Phi^6(1) = {:.6}, Q = {:.4}", ex.phi6_one, ex.quadratic);
        for (e, v, _) in &ex.phi6 {
            println!("   eps {e:+.2}: Phi^6 = {v:.8}, model {:.8}", ex.phi6_one + e * e * ex.quadratic);
        }
        for (e, d) in &ex.defects {
            println!("   eps {e:.2}: defect {d:.3e}");
        }
        println!("   order {:.2}; {}", ex.min_order, local_extremizer_check(&seq, &g, &[0.01, 0.02, 0.05])?.summary_line().split(" [").next().unwrap_or(""));
    }
    Ok(())
}
