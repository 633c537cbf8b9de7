//! Prints the α/α̃/β and γ/γ̃/δ tables with their rounded values and errors,
//! next to the published digits.
//!
//! ```text
//! cargo run --release --example tables
//! ```

use circlext::oscint::QuadConfig;
use circlext::seqtab::{round_half_even, SequenceCache, REFERENCE_TABLE1, REFERENCE_TABLE2};

fn main() -> circlext::Result<()> {
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    println!("{:>3} {:>11} {:>11} {:>11} {:>9}", "n", "alpha", "alpha~", "beta", "err");
    for (row, r) in seq.table1()?.iter().zip(REFERENCE_TABLE1) {
        println!(
            "{:>3} {:>11} {:>11} {:>11} {:>9.1e}",
            row.n,
            round_half_even(row.alpha.value, 7),
            round_half_even(row.alpha_tilde.value, 7),
            round_half_even(row.beta.value, 7),
            row.alpha.abs_error.max(row.alpha_tilde.abs_error)
        );
        println!("{:>3} {:>11.7} {:>11.7} {:>11.7}", "", r.1, r.2, r.3);
    }
    println!();
    println!("{:>3} {:>3} {:>12} {:>12} {:>12}", "n", "m", "gamma", "gamma~", "delta");
    for (row, r) in seq.table2()?.iter().zip(REFERENCE_TABLE2) {
        println!(
            "{:>3} {:>3} {:>12} {:>12} {:>12}",
            row.n,
            row.m,
            round_half_even(row.gamma.value, 8),
            round_half_even(row.gamma_tilde.value, 8),
            round_half_even(row.delta.value, 8)
        );
        println!("{:>7} {:>12.8} {:>12.8} {:>12.8}", "", r.2, r.3, r.4);
    }
    let bad = seq.table_checks()?.into_iter().filter(|r| !r.pass).count();
    println!("\nentries outside the published precision: {bad}");
    Ok(())
}
