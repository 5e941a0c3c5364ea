//! Weight distributions of the cyclic codes with two nonzeros whose
//! codewords are `c_{a,b}(t) = Tr(a α^t + b α^{dt})`, `0 ≤ t < p^n - 1`.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::spectra;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Weight → number of codewords, over all `p^{2n}` pairs `(a, b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightDistribution(pub BTreeMap<u64, u64>);

impl WeightDistribution {
    fn add(&mut self, w: u64, count: u64) {
        *self.0.entry(w).or_insert(0) += count;
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.0.iter().map(|(w, c)| json!({"w": w, "count": c})).collect::<Vec<_>>(),
        })
    }
}

/// Hamming weight of `c_{a,b}` by direct evaluation.
pub fn codeword_weight(ctx: &FieldCtx, a: Elem, b: Elem, d: u64) -> u64 {
    let q1 = ctx.group_order() as u64;
    (0..q1)
        .filter(|&t| {
            let x = ctx.exp(t);
            let xd = ctx.exp(t * (d % q1) % q1);
            ctx.trace(ctx.add(ctx.mul(a, x), ctx.mul(b, xd))) != 0
        })
        .count() as u64
}

/// The distribution from the Walsh table of `x^d`: for `b ≠ 0` the
/// weight is `(p - 1)(p^n - W_d(a')) / p`, with `a'` running over the whole
/// field `p^n - 1` times; the pairs with `b = 0` are counted directly.
pub fn weight_distribution_via_walsh(ctx: &FieldCtx, d: u64) -> Result<WeightDistribution> {
    let p = ctx.p() as u64;
    if (d % (p - 1).max(1)) != 1 % (p - 1).max(1) {
        return Err(Error::ConditionViolated(format!("d = {d} is not 1 mod {}", p - 1)));
    }
    let walsh = spectra::walsh_fast(ctx, d)?;
    let q = ctx.order() as u64;
    let q1 = q - 1;
    let mut dist = WeightDistribution::default();
    dist.add(0, 1);
    dist.add(q / p * (p - 1), q1);
    for w in walsh.values() {
        let w = w
            .as_i64()
            .map_err(|_| Error::ConditionViolated("Walsh value is not an integer".into()))?;
        let num = (p - 1) as i64 * (q as i64 - w);
        if num % p as i64 != 0 {
            return Err(Error::ConditionViolated(format!("weight {num}/{p} is not an integer")));
        }
        dist.add((num / p as i64) as u64, q1);
    }
    Ok(dist)
}

/// Enumerates every codeword; `O(p^{3n})`.
pub fn weight_distribution_brute(ctx: &FieldCtx, d: u64) -> WeightDistribution {
    let q = ctx.order();
    let parts: Vec<BTreeMap<u64, u64>> = (0..q)
        .into_par_iter()
        .map(|a| {
            let mut local = BTreeMap::new();
            for b in 0..q {
                *local.entry(codeword_weight(ctx, Elem(a), Elem(b), d)).or_insert(0) += 1;
            }
            local
        })
        .collect();
    let mut dist = WeightDistribution::default();
    for part in parts {
        for (w, c) in part {
            dist.add(w, c);
        }
    }
    dist
}
