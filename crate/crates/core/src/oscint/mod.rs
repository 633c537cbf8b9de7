//! Sixfold Bessel integrals `I = ∫₀^∞ J_{n₁}(r)⋯J_{n₆}(r) r dr`.
//!
//! The integral is split at a radius `R ≥ 2·max|nᵢ| + 40`. On `[0, R]` the
//! integrand is summed over fixed Gauss–Kronrod panels. Past `R` every factor
//! is written as `J_n = (u_n e^{ix} + ū_n e^{-ix})/2` with the slowly varying
//! `u_n(x) = H¹_n(x) e^{-ix}`; the product becomes `Σ_S P_S(x) e^{iSx}`. The
//! non-oscillating `P_0` part is integrated in `t = R/x`, the `S ≠ 0` parts by
//! repeated integration by parts from Taylor coefficients of `u_n` at `R`.
//!
//! Results are keyed by [`CanonicalTuple`], so permutations and sign flips of
//! the orders share one computation.

mod batch;
mod bound;
mod dense;
mod store;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use batch::{head_integral, taylor_scaled_hankel};
pub use bound::tail_bound;
pub use dense::{zero_sum_keys, DenseTable, DENSE_LIMIT};
pub use store::{read_cache_file, write_cache_file, CacheRecord};

/// Largest single order accepted.
pub const MAX_ORDER: usize = 512;
/// Largest accepted `Σ|nᵢ|`.
pub const MAX_TOTAL_ORDER: usize = 1024;
/// Largest radius accepted by [`head_integral`].
pub const SPLIT_CEILING: f64 = 1.0e4;

/// A real number with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub value: f64,
    pub abs_error: f64,
}

impl CertifiedValue {
    pub fn new(value: f64, abs_error: f64) -> Self {
        CertifiedValue { value, abs_error: abs_error.abs() }
    }

    pub fn exact(value: f64) -> Self {
        CertifiedValue { value, abs_error: 0.0 }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.abs_error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error
    }

    /// Upper bound for `|value|`.
    pub fn magnitude_bound(&self) -> f64 {
        self.value.abs() + self.abs_error
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.abs_error
    }

    pub fn scale(self, c: f64) -> Self {
        CertifiedValue { value: c * self.value, abs_error: c.abs() * self.abs_error }
    }
}

impl Add for CertifiedValue {
    type Output = CertifiedValue;
    fn add(self, o: Self) -> Self {
        CertifiedValue { value: self.value + o.value, abs_error: self.abs_error + o.abs_error }
    }
}

impl Sub for CertifiedValue {
    type Output = CertifiedValue;
    fn sub(self, o: Self) -> Self {
        CertifiedValue { value: self.value - o.value, abs_error: self.abs_error + o.abs_error }
    }
}

impl Neg for CertifiedValue {
    type Output = CertifiedValue;
    fn neg(self) -> Self {
        CertifiedValue { value: -self.value, abs_error: self.abs_error }
    }
}

impl Mul<f64> for CertifiedValue {
    type Output = CertifiedValue;
    fn mul(self, c: f64) -> Self {
        self.scale(c)
    }
}

impl std::fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.12e} ± {:.1e}", self.value, self.abs_error)
    }
}

/// Six nonnegative orders sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalTuple(pub [u16; 6]);

impl CanonicalTuple {
    pub fn orders(&self) -> [u16; 6] {
        self.0
    }

    pub fn max_order(&self) -> usize {
        self.0[0] as usize
    }

    pub fn total_order(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }
}

impl std::fmt::Display for CanonicalTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let o = self.0;
        write!(f, "({},{},{},{},{},{})", o[0], o[1], o[2], o[3], o[4], o[5])
    }
}

/// Six signed Bessel orders, stored canonically with the parity sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderTuple {
    key: CanonicalTuple,
    negative: bool,
}

impl OrderTuple {
    pub fn new(orders: [i64; 6]) -> Result<Self> {
        let mut abs = [0u16; 6];
        let mut negative = false;
        for (slot, &n) in abs.iter_mut().zip(orders.iter()) {
            let a = n.unsigned_abs() as usize;
            if a > MAX_ORDER {
                return Err(Error::Refused(format!("order {n} exceeds the supported maximum {MAX_ORDER}")));
            }
            if n < 0 && a % 2 == 1 {
                negative = !negative;
            }
            *slot = a as u16;
        }
        abs.sort_unstable_by(|a, b| b.cmp(a));
        let key = CanonicalTuple(abs);
        if key.total_order() > MAX_TOTAL_ORDER {
            return Err(Error::Refused(format!(
                "total order {} exceeds the supported maximum {MAX_TOTAL_ORDER}",
                key.total_order()
            )));
        }
        Ok(OrderTuple { key, negative })
    }

    pub fn key(&self) -> CanonicalTuple {
        self.key
    }

    /// `±1`, the product of `(−1)^{|n|}` over negative orders.
    pub fn sign(&self) -> f64 {
        if self.negative { -1.0 } else { 1.0 }
    }
}

/// Quadrature settings for the sixfold engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Smallest head/tail boundary; raised to `2·max|nᵢ| + 40` when needed.
    pub split_radius: f64,
    /// Absolute tolerance for the head and for each tail piece.
    pub head_tol: f64,
    /// Number of Hankel correction terms used by [`tail_bound`].
    pub tail_order: usize,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { split_radius: 200.0, head_tol: 1e-13, tail_order: 2, max_panels: 200_000 }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_radius.is_finite() && self.split_radius >= 20.0 && self.split_radius <= SPLIT_CEILING) {
            return Err(Error::InvalidInput(format!("split_radius must lie in [20, 1e4], got {}", self.split_radius)));
        }
        if !(self.head_tol > 0.0 && self.head_tol.is_finite()) {
            return Err(Error::InvalidInput(format!("head_tol must be positive, got {}", self.head_tol)));
        }
        if !(1..=3).contains(&self.tail_order) {
            return Err(Error::InvalidInput(format!("tail_order must be 1, 2 or 3, got {}", self.tail_order)));
        }
        if self.max_panels < 16 {
            return Err(Error::InvalidInput(format!("max_panels must be at least 16, got {}", self.max_panels)));
        }
        Ok(())
    }

    /// Short digest identifying the settings that affect computed values.
    pub fn hash(&self) -> String {
        let text = format!(
            "split_radius={:e};head_tol={:e};tail_order={};max_panels={}",
            self.split_radius, self.head_tol, self.tail_order, self.max_panels
        );
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// A real linear combination of canonical integrals, evaluated as one
/// integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub terms: Vec<(f64, CanonicalTuple)>,
}

impl Combination {
    pub fn single(key: CanonicalTuple) -> Self {
        Combination { terms: vec![(1.0, key)] }
    }

    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|(_, k)| k.max_order()).max().unwrap_or(0)
    }
}

/// Memoizing evaluator of sixfold integrals.
///
/// Reads are concurrent; inserts take the write lock once per batch.
#[derive(Debug)]
pub struct IntegralEngine {
    cfg: QuadConfig,
    cache: RwLock<FxHashMap<CanonicalTuple, CertifiedValue>>,
    dense: Mutex<Option<Arc<DenseTable>>>,
}

impl IntegralEngine {
    pub fn new(cfg: QuadConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(IntegralEngine { cfg, cache: RwLock::new(FxHashMap::default()), dense: Mutex::new(None) })
    }

    pub fn config(&self) -> &QuadConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, key: CanonicalTuple) -> Option<CertifiedValue> {
        self.cache.read().expect("cache lock").get(&key).copied()
    }

    /// Computes every missing key in one parallel batch.
    pub fn ensure<I: IntoIterator<Item = CanonicalTuple>>(&self, keys: I) -> Result<()> {
        let missing: Vec<CanonicalTuple> = {
            let cache = self.cache.read().expect("cache lock");
            let mut seen = rustc_hash::FxHashSet::default();
            keys.into_iter().filter(|k| !cache.contains_key(k) && seen.insert(*k)).collect()
        };
        if missing.is_empty() {
            return Ok(());
        }
        for k in &missing {
            if k.total_order() > MAX_TOTAL_ORDER || k.max_order() > MAX_ORDER {
                return Err(Error::Refused(format!("tuple {k} is beyond the supported orders")));
            }
        }
        let combos: Vec<Combination> = missing.iter().map(|&k| Combination::single(k)).collect();
        let results = batch::evaluate(&combos, &self.cfg);
        let mut first_err = None;
        let mut cache = self.cache.write().expect("cache lock");
        for (k, r) in missing.into_iter().zip(results) {
            match r {
                Ok(v) => {
                    cache.insert(k, v);
                }
                Err(e) => {
                    if first_err.is_none() {
                        first_err = Some(e);
                    }
                }
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// `I_{n₁…n₆}` including the parity sign of the tuple.
    pub fn integral(&self, t: &OrderTuple) -> Result<CertifiedValue> {
        let key = t.key();
        if let Some(v) = self.lookup(key) {
            return Ok(v.scale(t.sign()));
        }
        self.ensure([key])?;
        Ok(self.lookup(key).expect("inserted by ensure").scale(t.sign()))
    }

    /// Value of a canonical key, computing it if needed.
    pub fn value(&self, key: CanonicalTuple) -> Result<CertifiedValue> {
        if let Some(v) = self.lookup(key) {
            return Ok(v);
        }
        self.ensure([key])?;
        Ok(self.lookup(key).expect("inserted by ensure"))
    }

    /// Evaluates linear combinations directly as single integrals (no
    /// cancellation between separately rounded integrals).
    pub fn combinations(&self, combos: &[Combination]) -> Result<Vec<CertifiedValue>> {
        for c in combos {
            for (_, k) in &c.terms {
                if k.total_order() > MAX_TOTAL_ORDER || k.max_order() > MAX_ORDER {
                    return Err(Error::Refused(format!("tuple {k} is beyond the supported orders")));
                }
            }
        }
        batch::evaluate(combos, &self.cfg).into_iter().collect()
    }

    pub fn combination(&self, combo: &Combination) -> Result<CertifiedValue> {
        Ok(self.combinations(std::slice::from_ref(combo))?.remove(0))
    }

    /// A dense table covering at least `max_order`, reused across calls.
    pub fn dense(&self, max_order: usize) -> Result<Arc<DenseTable>> {
        if let Some(t) = self.dense.lock().expect("dense lock").as_ref() {
            if t.max_order() >= max_order {
                return Ok(Arc::clone(t));
            }
        }
        // built without the lock held: the build runs parallel work that may
        // steal tasks which themselves ask for a table
        let t = Arc::new(DenseTable::build(self, max_order)?);
        let mut slot = self.dense.lock().expect("dense lock");
        match slot.as_ref() {
            Some(cur) if cur.max_order() >= max_order => Ok(Arc::clone(cur)),
            _ => {
                *slot = Some(Arc::clone(&t));
                Ok(t)
            }
        }
    }

    /// Snapshot of the cache in canonical order.
    pub fn entries(&self) -> BTreeMap<CanonicalTuple, CertifiedValue> {
        self.cache.read().expect("cache lock").iter().map(|(k, v)| (*k, *v)).collect()
    }

    /// Writes the cache as line-delimited JSON.
    pub fn save(&self, path: &Path) -> Result<()> {
        let hash = self.cfg.hash();
        let records: Vec<CacheRecord> = self
            .entries()
            .into_iter()
            .map(|(k, v)| CacheRecord { orders: k.0, value: v.value, abs_error: v.abs_error, config_hash: hash.clone() })
            .collect();
        write_cache_file(path, &records)
    }

    /// Loads records produced under the same configuration; returns how many
    /// were taken.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let hash = self.cfg.hash();
        let records = read_cache_file(path)?;
        let mut cache = self.cache.write().expect("cache lock");
        let mut taken = 0;
        for r in records {
            let mut o = r.orders;
            o.sort_unstable_by(|a, b| b.cmp(a));
            if r.config_hash == hash && o == r.orders {
                cache.insert(CanonicalTuple(o), CertifiedValue::new(r.value, r.abs_error));
                taken += 1;
            }
        }
        Ok(taken)
    }
}

/// One-shot evaluation of `I_{n₁…n₆}`.
pub fn sixfold_integral(t: &OrderTuple, cfg: &QuadConfig) -> Result<CertifiedValue> {
    IntegralEngine::new(*cfg)?.integral(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tuple(o: [i64; 6]) -> OrderTuple {
        OrderTuple::new(o).unwrap()
    }

    #[test]
    fn canonical_form_and_sign() {
        let t = tuple([2, -3, 0, 5, -1, 4]);
        assert_eq!(t.key().0, [5, 4, 3, 2, 1, 0]);
        assert_eq!(t.sign(), 1.0);
        let t = tuple([2, -3, 0, 0, 0, 0]);
        assert_eq!(t.sign(), -1.0);
        let t = tuple([-2, 2, 0, 0, 0, 0]);
        assert_eq!(t.sign(), 1.0);
        assert!(OrderTuple::new([600, 0, 0, 0, 0, 0]).is_err());
        assert!(OrderTuple::new([400, 400, 300, 0, 0, 0]).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig::default().validate().is_ok());
        let bad = QuadConfig { split_radius: 10.0, ..QuadConfig::default() };
        assert!(bad.validate().is_err());
        let bad = QuadConfig { tail_order: 4, ..QuadConfig::default() };
        assert!(bad.validate().is_err());
        let bad = QuadConfig { head_tol: 0.0, ..QuadConfig::default() };
        assert!(bad.validate().is_err());
        assert_ne!(QuadConfig::default().hash(), bad.hash());
    }

    #[test]
    fn table_values() {
        let e = IntegralEngine::new(QuadConfig::default()).unwrap();
        let cases: [([i64; 6], f64, f64); 5] = [
            ([0, 0, 0, 0, 0, 0], 0.3368280, 5e-7),
            ([2, -2, 0, 0, 0, 0], 0.0369428, 5e-7),
            ([1, 1, 0, 0, 0, 0], 0.0673656, 5e-7),
            ([10, -10, 0, 0, 0, 0], 0.0075896, 5e-7),
            ([2, 2, -4, 0, 0, 0], 0.00090754, 5e-8),
        ];
        for (o, want, tol) in cases {
            let v = e.integral(&tuple(o)).unwrap();
            assert!((v.value - want).abs() <= tol, "{o:?}: {v} vs {want}");
            assert!(v.abs_error < 1e-11, "{o:?}: {v}");
        }
    }

    #[test]
    fn alpha_one_is_a_fifth_of_alpha_zero() {
        let e = IntegralEngine::new(QuadConfig::default()).unwrap();
        let a0 = e.integral(&tuple([0; 6])).unwrap();
        let a1 = e.integral(&tuple([1, 1, 0, 0, 0, 0])).unwrap();
        assert!((5.0 * a1.value - a0.value).abs() <= 5.0 * a1.abs_error + a0.abs_error + 1e-13);
    }

    #[test]
    fn split_independence() {
        let lo = IntegralEngine::new(QuadConfig { split_radius: 100.0, ..QuadConfig::default() }).unwrap();
        let hi = IntegralEngine::new(QuadConfig { split_radius: 400.0, ..QuadConfig::default() }).unwrap();
        for o in [[0, 0, 0, 0, 0, 0], [3, 3, 0, 0, 0, 0], [6, 4, 2, 0, 0, 0], [12, 8, 4, 0, 0, 0], [7, 5, 3, 2, 2, 1]] {
            let a = lo.integral(&tuple(o)).unwrap();
            let b = hi.integral(&tuple(o)).unwrap();
            assert!((a.value - b.value).abs() <= a.abs_error + b.abs_error, "{o:?}: {a} vs {b}");
        }
    }

    #[test]
    fn combination_matches_parts() {
        let e = IntegralEngine::new(QuadConfig::default()).unwrap();
        let a = CanonicalTuple([2, 2, 0, 0, 0, 0]);
        let at = CanonicalTuple([2, 2, 1, 1, 0, 0]);
        let beta = e.combination(&Combination { terms: vec![(3.0, at), (-1.0, a)] }).unwrap();
        let parts = e.value(at).unwrap().scale(3.0) - e.value(a).unwrap();
        assert!((beta.value - parts.value).abs() <= beta.abs_error + parts.abs_error);
        assert!((beta.value - 0.0046171).abs() < 1.5e-6);
    }

    #[test]
    fn cache_round_trip() {
        let e = IntegralEngine::new(QuadConfig::default()).unwrap();
        e.ensure([CanonicalTuple([1, 1, 0, 0, 0, 0]), CanonicalTuple([0; 6])]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        e.save(&path).unwrap();
        let f = IntegralEngine::new(QuadConfig::default()).unwrap();
        assert_eq!(f.load(&path).unwrap(), 2);
        assert_eq!(f.entries(), e.entries());
        let g = IntegralEngine::new(QuadConfig { split_radius: 300.0, ..QuadConfig::default() }).unwrap();
        assert_eq!(g.load(&path).unwrap(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permutation_and_parity(o in proptest::array::uniform6(-6i64..=6), perm in Just([0usize, 1, 2, 3, 4, 5]).prop_shuffle(), flip in 0usize..6) {
            let t = tuple(o);
            let mut p = [0i64; 6];
            for i in 0..6 { p[i] = o[perm[i]]; }
            let tp = tuple(p);
            prop_assert_eq!(t.key(), tp.key());
            prop_assert_eq!(t.sign(), tp.sign());
            let mut f = o;
            f[flip] = -f[flip];
            let tf = tuple(f);
            let expect = if o[flip] % 2 != 0 { -t.sign() } else { t.sign() };
            prop_assert_eq!(tf.key(), t.key());
            prop_assert_eq!(tf.sign(), expect);
        }
    }

    #[test]
    fn permutation_invariance_is_bitwise() {
        let e = IntegralEngine::new(QuadConfig::default()).unwrap();
        let a = e.integral(&tuple([3, 1, 0, 2, 0, 0])).unwrap();
        let f = IntegralEngine::new(QuadConfig::default()).unwrap();
        let b = f.integral(&tuple([0, 0, 2, 1, 3, 0])).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = f.integral(&tuple([0, 0, 2, -1, 3, 0])).unwrap();
        assert_eq!(c.value, -b.value);
    }
}
