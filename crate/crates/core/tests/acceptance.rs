//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! status if any criterion fails.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

use std::f64::consts::PI;
use std::time::Instant;

use circlext::circfun::{random_test_function, TestKind, TrigPoly};
use circlext::circlegeom::{log_ratio_check, mass_check, origin_check, sigma3, SMALL_RADIUS};
use circlext::forms::{self, conjecture_explorer};
use circlext::oscint::QuadConfig;
use circlext::replab::{self, SuiteOptions};
use circlext::report::VerificationRecord;
use circlext::seqtab::SequenceCache;
use circlext::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn all_pass(recs: &[VerificationRecord]) -> (bool, String) {
    let failed: Vec<&VerificationRecord> = recs.iter().filter(|r| !r.pass).collect();
    let slack = recs.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let mut detail = format!("{}/{} records pass, min slack {slack:.3e}", recs.len() - failed.len(), recs.len());
    if let Some(r) = failed.first() {
        detail.push_str(&format!("; first failure: {}", r.summary_line()));
    }
    (failed.is_empty() && !recs.is_empty(), detail)
}

fn outcome(recs: &[VerificationRecord]) -> Outcome {
    let (pass, detail) = all_pass(recs);
    Outcome { pass, detail }
}

fn tables(seq: &SequenceCache) -> Result<Outcome> {
    let recs = seq.table_checks()?;
    let mut o = outcome(&recs);
    o.pass &= recs.len() == 54;
    Ok(o)
}

fn footnote(seq: &SequenceCache) -> Result<Outcome> {
    let r = seq.footnote_check()?;
    Ok(Outcome {
        pass: r.pass,
        detail: format!("5 alpha_1 - alpha_0 = {:.3e}, budget {:.3e}", r.values["difference"], r.error_budget),
    })
}

fn crux(seq: &SequenceCache) -> Result<Outcome> {
    let r = forms::crux_check(seq, 400)?;
    Ok(Outcome {
        pass: r.pass,
        detail: format!(
            "min slack {:.4e} at n = {}, 1/50 slack {:.3e}",
            r.values["min_slack"], r.values["tightest_n"], r.values["alpha_chain_slack"]
        ),
    })
}

fn asymptotics(seq: &SequenceCache) -> Result<Outcome> {
    let recs = replab::asymptotics_suite(seq)?;
    let mut o = outcome(&recs);
    let n2 = recs
        .iter()
        .find(|r| r.claim == "beta-corollary" && r.inputs["n"] == 2)
        .map(|r| r.values["relative_deviation"])
        .unwrap_or(f64::NAN);
    o.pass &= (n2 - 0.028).abs() < 5e-4 && n2 < 0.03;
    for (claim, lo, hi) in [("alpha-asymptotic", 7, 200), ("beta-corollary", 2, 200), ("delta-corollary-iii", 6, 100)] {
        let ns: Vec<i64> = recs.iter().filter(|r| r.claim == claim).filter_map(|r| r.inputs["n"].as_i64()).collect();
        o.pass &= ns.iter().min() == Some(&lo) && ns.iter().max() == Some(&hi);
    }
    o.detail.push_str(&format!("; beta n=2 relative deviation {n2:.5}"));
    Ok(o)
}

fn cn(seq: &SequenceCache) -> Result<Outcome> {
    let recs = forms::cn_sweep(seq, 200)?;
    let mut o = outcome(&recs);
    let tail = recs.iter().filter(|r| r.inputs["n"].as_i64().unwrap_or(0) >= 7).map(|r| r.values["c_n"]).fold(f64::INFINITY, f64::min);
    let all = recs.iter().map(|r| r.values["c_n"]).fold(f64::INFINITY, f64::min);
    o.pass &= tail > 0.110;
    o.detail.push_str(&format!("; min c_n {all:.5}, min over n >= 7 {tail:.5}"));
    Ok(o)
}

fn dual_route(seq: &SequenceCache) -> Result<Outcome> {
    let recs: Vec<VerificationRecord> = (0..50)
        .map(|i| {
            let f = random_test_function(1 + i % 8, 6000 + i as u64, TestKind::Real)?;
            replab::dual_route_check(seq.engine(), &f)
        })
        .collect::<Result<_>>()?;
    let worst = recs.iter().map(|r| r.values["relative_difference"]).fold(0.0, f64::max);
    let mut o = outcome(&recs);
    o.detail.push_str(&format!("; worst relative difference {worst:.2e}"));
    Ok(o)
}

fn geometric_identity(seq: &SequenceCache) -> Result<Outcome> {
    let recs: Vec<VerificationRecord> = (0..20)
        .map(|i| {
            let f = random_test_function(2 + 2 * (i % 4), 7000 + i as u64, TestKind::EvenReal)?;
            forms::geometric_identity_check(seq.engine(), &f)
        })
        .collect::<Result<_>>()?;
    Ok(outcome(&recs))
}

fn thm7(seq: &SequenceCache) -> Result<Outcome> {
    let mut recs = replab::thm7_suite(seq, SuiteOptions { seeds: Some(1000), base_seed: 1 })?;
    let strict_ok = recs.iter().all(|r| r.values["oscillation_energy"] >= 1e-20 && r.margin > r.error_budget);
    let c = forms::thm7_check(seq.engine(), &TrigPoly::constant(2.5))?;
    let equality_ok = c.pass && c.margin.abs() <= c.error_budget;
    recs.push(c);
    let mut o = outcome(&recs);
    o.pass &= strict_ok && equality_ok;
    o.detail.push_str("; constant h meets equality within its budget");
    Ok(o)
}

fn local(seq: &SequenceCache) -> Result<Outcome> {
    let recs = replab::local_suite(seq, SuiteOptions { seeds: Some(100), base_seed: 1 })?;
    let order = recs.iter().map(|r| r.values["defect_order"]).fold(f64::INFINITY, f64::min);
    let mut o = outcome(&recs);
    o.detail.push_str(&format!("; min defect order {order:.3}"));
    Ok(o)
}

fn budget(seq: &SequenceCache) -> Result<Outcome> {
    let recs = replab::budget_suite(seq, SuiteOptions { seeds: Some(200), base_seed: 1 })?;
    let counts = (
        recs.iter().filter(|r| r.claim == "bracket").count(),
        recs.iter().filter(|r| r.claim == "trilinear-budget").count(),
        recs.iter().filter(|r| r.claim == "hardy").count(),
    );
    let mut o = outcome(&recs);
    o.pass &= counts == (1, 200, 100) && forms::bracket_constant() < 0.974;
    o.detail.push_str(&format!("; bracket {:.5}", forms::bracket_constant()));
    Ok(o)
}

fn convolution() -> Result<Outcome> {
    let exact = 8.0 * PI / 3f64.sqrt();
    let direct = (sigma3(SMALL_RADIUS)? - exact).abs() / exact;
    let recs = vec![origin_check()?, log_ratio_check(&[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])?, mass_check()];
    let mut o = outcome(&recs);
    o.pass &= direct <= 1e-5;
    o.detail.push_str(&format!("; quadrature at r = {SMALL_RADIUS:e} vs 8 pi/sqrt 3 relative {direct:.2e}"));
    Ok(o)
}

fn explorer(seq: &SequenceCache) -> Result<Outcome> {
    let r = conjecture_explorer(seq.engine(), 8, 10_000, 1)?;
    let m = r.minimum.clone().expect("trials > 0");
    let mut detail = format!("min Psi {:.6e} +- {:.1e} (normalized {:.5}) at seed {}", m.psi, m.psi_error, m.normalized, m.seed);
    for f in &r.flagged {
        detail.push_str(&format!("; FLAGGED seed {} Psi {:.6e}", f.seed, f.psi));
    }
    Ok(Outcome { pass: m.psi >= -m.psi_error && r.flagged.is_empty(), detail })
}

fn main() {
    let seq = SequenceCache::from_config(QuadConfig::default()).expect("default configuration");
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Result<Outcome> + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 table reproduction", Box::new(|| tables(&seq))),
        ("2 footnote identity", Box::new(|| footnote(&seq))),
        ("3 crux inequality", Box::new(|| crux(&seq))),
        ("4 asymptotic bounds", Box::new(|| asymptotics(&seq))),
        ("5 c_n positivity", Box::new(|| cn(&seq))),
        ("6 dual-route L6 norm", Box::new(|| dual_route(&seq))),
        ("7 geometric identity", Box::new(|| geometric_identity(&seq))),
        ("8 trilinear monotonicity", Box::new(|| thm7(&seq))),
        ("9 local extremizer", Box::new(|| local(&seq))),
        ("10 proof budget", Box::new(|| budget(&seq))),
        ("11 convolution", Box::new(convolution)),
        ("12 conjecture explorer", Box::new(|| explorer(&seq))),
    ];
    let mut failures = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let o = run().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        if !o.pass {
            failures += 1;
        }
        println!("{} {name} ({:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
