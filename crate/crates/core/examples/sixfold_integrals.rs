//! Sixfold Bessel integrals for given orders, with their error estimates.
//!
//! ```text
//! cargo run --release --example sixfold_integrals -- 3 -1 -2 0 0 0
//! ```

use circlext::oscint::{tail_bound, IntegralEngine, OrderTuple, QuadConfig};

fn main() -> circlext::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).map(|s| s.parse().expect("integer order")).collect();
    let engine = IntegralEngine::new(QuadConfig::default())?;
    let mut tuples = vec![[0i64; 6], [1, -1, 0, 0, 0, 0], [1, 1, -1, -1, 0, 0], [6, -4, -2, 0, 0, 0], [7, -2, -5, 1, -1, 0]];
    if args.len() == 6 {
        tuples.insert(0, [args[0], args[1], args[2], args[3], args[4], args[5]]);
    }
    for o in tuples {
        let t = OrderTuple::new(o)?;
        let v = engine.integral(&t)?;
        println!("I{o:?} = {v}   (canonical {:?}, sign {:+})", t.key().0, t.sign());
    }

    // permutations and sign flips share one cache entry
    let before = engine.len();
    engine.integral(&OrderTuple::new([0, 2, 0, -3, 0, 1])?)?;
    engine.integral(&OrderTuple::new([-2, 3, -1, 0, 0, 0])?)?;
    println!("cache entries: {before} -> {}", engine.len());

    let t = OrderTuple::new([4, -4, 0, 0, 0, 0])?;
    println!("tail bound past R = 200 for {:?}: {}", t.key().0, tail_bound(&t, 200.0, 2));

    let wide = QuadConfig { split_radius: 400.0, ..QuadConfig::default() };
    let a = engine.integral(&t)?;
    let b = IntegralEngine::new(wide)?.integral(&t)?;
    println!("split 200 vs 400: {:.3e} apart, allowed {:.3e}", (a.value - b.value).abs(), a.abs_error + b.abs_error);
    Ok(())
}
