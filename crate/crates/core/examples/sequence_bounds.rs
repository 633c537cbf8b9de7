//! Checks the asymptotic bounds for αₙ, α̃ₙ, βₙ and δₙ,ₘ over a range of
//! indices and prints the tightest cases.
//!
//! ```text
//! cargo run --release --example sequence_bounds -- 200
//! ```

use circlext::oscint::QuadConfig;
use circlext::report::VerificationRecord;
use circlext::seqtab::SequenceCache;

fn worst(label: &str, recs: &[VerificationRecord]) {
    let failed = recs.iter().filter(|r| !r.pass).count();
    let tight = recs
        .iter()
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
        .expect("non-empty");
    println!("{label}: {} checked, {failed} failed; tightest {}", recs.len(), tight.summary_line());
}

fn main() -> circlext::Result<()> {
    let nmax: usize = std::env::args().nth(1).map(|s| s.parse().expect("integer")).unwrap_or(100);
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    let ns: Vec<usize> = (0..=nmax).collect();
    seq.prefetch_alpha(&ns)?;

    let alpha: Vec<_> = (7..=nmax).map(|n| seq.alpha_asymptotic_check(n)).collect::<Result<_, _>>()?;
    worst("alpha asymptotics", &alpha);

    let evens: Vec<usize> = (2..=nmax).step_by(2).collect();
    seq.beta_many(&evens)?;
    let beta: Vec<_> = evens.iter().map(|&n| seq.beta_corollary_check(n)).collect::<Result<_, _>>()?;
    worst("beta bound", &beta);

    let dmax = nmax.min(100);
    let mut pairs = Vec::new();
    for n in (2..=dmax).step_by(2) {
        for m in (2..=n).step_by(2) {
            if m == 2 || m == 4 || m >= 6 {
                pairs.push((n as i64, m as i64));
            }
        }
    }
    seq.delta_many(&pairs)?;
    for case in [2usize, 4, 6] {
        let recs: Vec<_> = pairs
            .iter()
            .filter(|&&(_, m)| if case == 6 { m >= 6 } else { m as usize == case })
            .filter(|&&(n, m)| m != 4 || n >= 4)
            .map(|&(n, m)| seq.delta_corollary_check(n as usize, m as usize))
            .collect::<Result<_, _>>()?;
        worst(&format!("delta bound m={case}{}", if case == 6 { "+" } else { "" }), &recs);
    }
    Ok(())
}
