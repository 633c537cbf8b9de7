//! Flat lookup of every canonical tuple up to a fixed order.
//!
//! Sorted tuples `x₁ ≤ … ≤ x₆ ≤ D` are ranked in the combinatorial number
//! system via `yᵢ = xᵢ + i`, so the table holds `C(D+6, 6)` slots and a lookup
//! is a sort of six integers plus six table reads.

use super::{CanonicalTuple, CertifiedValue, IntegralEngine};
use crate::error::{Error, Result};

/// Largest order a dense table may cover.
pub const DENSE_LIMIT: usize = 40;

#[derive(Debug, Clone)]
pub struct DenseTable {
    max_order: usize,
    binom: Vec<[u64; 7]>,
    values: Vec<f64>,
    errors: Vec<f64>,
}

fn binomials(n: usize) -> Vec<[u64; 7]> {
    let mut t = vec![[0u64; 7]; n + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = 1;
        for k in 1..7 {
            row[k] = if k > i { 0 } else { binom(i as u64, k as u64) };
        }
    }
    t
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Canonical tuples reachable from a zero-sum signed tuple with all orders
/// at most `d`: even total and the largest order at most the sum of the rest.
pub fn zero_sum_keys(d: usize) -> Vec<CanonicalTuple> {
    let d = d as u16;
    let mut keys = Vec::new();
    for a in 0..=d {
        for b in 0..=a {
            for c in 0..=b {
                for e in 0..=c {
                    for f in 0..=e {
                        for g in 0..=f {
                            let rest = b + c + e + f + g;
                            if (a + rest) % 2 == 0 && a <= rest {
                                keys.push(CanonicalTuple([a, b, c, e, f, g]));
                            }
                        }
                    }
                }
            }
        }
    }
    keys
}

impl DenseTable {
    /// Fills a table from the engine, computing missing entries in one batch.
    pub fn build(engine: &IntegralEngine, max_order: usize) -> Result<Self> {
        if max_order > DENSE_LIMIT {
            return Err(Error::Refused(format!("dense tables are limited to order {DENSE_LIMIT}, asked for {max_order}")));
        }
        let keys = zero_sum_keys(max_order);
        engine.ensure(keys.iter().copied())?;
        let binom = binomials(max_order + 6);
        let size = binom[max_order + 6][6] as usize;
        let mut table = DenseTable { max_order, binom, values: vec![0.0; size], errors: vec![0.0; size] };
        for k in keys {
            let v = engine.lookup(k).expect("ensured above");
            let mut asc = k.0;
            asc.reverse();
            let r = table.rank(asc);
            table.values[r] = v.value;
            table.errors[r] = v.abs_error;
        }
        Ok(table)
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn rank(&self, asc: [u16; 6]) -> usize {
        let mut r = 0u64;
        for (i, &x) in asc.iter().enumerate() {
            r += self.binom[x as usize + i][i + 1];
        }
        r as usize
    }

    /// Signed `(value, abs_error)` of `I_{n₁…n₆}` for a zero-sum tuple.
    ///
    /// Orders beyond the table or tuples that are not zero-sum give
    /// meaningless results; callers enumerate only valid tuples.
    #[inline]
    pub fn get(&self, orders: [i64; 6]) -> (f64, f64) {
        let mut asc = [0u16; 6];
        let mut odd_neg = false;
        for (slot, &n) in asc.iter_mut().zip(&orders) {
            let a = n.unsigned_abs();
            odd_neg ^= n < 0 && a % 2 == 1;
            *slot = a as u16;
        }
        asc.sort_unstable();
        let r = self.rank(asc);
        let v = self.values[r];
        (if odd_neg { -v } else { v }, self.errors[r])
    }

    pub fn certified(&self, orders: [i64; 6]) -> CertifiedValue {
        let (v, e) = self.get(orders);
        CertifiedValue::new(v, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscint::{OrderTuple, QuadConfig};

    #[test]
    fn ranks_are_a_bijection() {
        let t = DenseTable { max_order: 5, binom: binomials(11), values: vec![], errors: vec![] };
        let mut seen = std::collections::HashSet::new();
        for k in zero_sum_keys(5) {
            let mut asc = k.0;
            asc.reverse();
            assert!(seen.insert(t.rank(asc)));
            assert!(t.rank(asc) < binomials(11)[11][6] as usize);
        }
    }

    #[test]
    fn matches_engine_with_signs() {
        let eng = IntegralEngine::new(QuadConfig::default()).unwrap();
        let t = DenseTable::build(&eng, 6).unwrap();
        for o in [[3i64, -1, -2, 0, 0, 0], [-3, 1, 2, 0, 0, 0], [2, -2, 1, -1, 0, 0], [6, -5, -1, 0, 0, 0], [-1, -1, -1, 1, 1, 1]] {
            let (v, e) = t.get(o);
            let ot = OrderTuple::new(o).unwrap();
            let w = eng.integral(&ot).unwrap();
            assert_eq!(v, w.value);
            assert_eq!(e, w.abs_error);
        }
        assert!(DenseTable::build(&eng, DENSE_LIMIT + 1).is_err());
    }
}
