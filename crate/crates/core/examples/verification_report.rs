//! Runs one verification suite and writes its JSON report.
//!
//! ```text
//! cargo run --release --example verification_report -- crux report.json
//! ```

use circlext::replab::{verify, Config, Suite, SuiteOptions};

fn main() -> circlext::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().unwrap_or_else(|| "cn".into()).parse()?;
    let cfg = Config::default();
    let seq = cfg.sequences()?;
    let report = verify(&cfg, &seq, suite, SuiteOptions::default())?;
    println!("{}: {}/{} passed in {:.2}s", report.suite, report.summary.passed, report.summary.total, report.wall_clock_seconds);
    if let Some(path) = args.next() {
        std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
