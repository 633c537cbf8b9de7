//! The trilinear form T and its split into constant and oscillating parts,
//! against the closed forms in βₙ and δₙ,ₘ.
//!
//! ```text
//! cargo run --release --example trilinear_forms
//! ```

use circlext::circfun::{random_test_function, TestKind, TrigPoly};
use circlext::forms::{t_cgg_spectral, t_decomposition, trilinear_t, trilinear_t_spectral_gpart};
use circlext::oscint::QuadConfig;
use circlext::seqtab::SequenceCache;

fn main() -> circlext::Result<()> {
    let seq = SequenceCache::from_config(QuadConfig::default())?;
    let engine = seq.engine();
    let one = TrigPoly::constant(1.0);
    println!("T(1,1,1) = {}", trilinear_t(engine, &one, &one, &one)?);

    let h = random_test_function(8, 3, TestKind::NonnegAntipodal)?;
    let c = h.mean().re;
    let g = h.add(&TrigPoly::constant(-c));
    let dec = t_decomposition(engine, &h)?;
    println!("h = c + g with c = {c:.6}, degree {}", h.degree());
    println!("  T(c,c,c) = {}", dec.ccc);
    println!("  T(c,c,g) = {}", dec.ccg);
    println!("  T(c,g,g) = {}   from beta: {}", dec.cgg, t_cgg_spectral(&seq, c, &g)?);
    println!("  T(g,g,g) = {}   from delta: {}", dec.ggg, trilinear_t_spectral_gpart(&seq, &g)?);
    println!("  T(h,h,h) - T(c,c,c) = {}", dec.excess());
    Ok(())
}
