//! Crosscorrelation and Walsh spectra of decimated m-sequences.
//!
//! For `f(x) = Tr(x^d)` and `a = α^τ`,
//! `C_d(τ) = Σ_t ω^{s_{t+τ} - s_{dt}} = -1 + W_f(a)`, and `W_f(α^τ)` is the
//! (Z_p)^n transform of `ω^{f}` evaluated at the window
//! `(s_τ, s_{τ+1}, …, s_{τ+n-1})`, because `Tr(α^τ x) = Σ_i x_i s_{τ+i}`.

use crate::arith;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::transform;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Upper bound on transform memory, in 32-bit words.
pub const TRANSFORM_WORDS: u64 = 1 << 26;
/// Largest `p^{n(l-1)}` enumerated by the brute-force counters.
pub const COUNT_BUDGET: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Fast,
    /// Decomposition over cosets of the `N`-th powers.
    Coset,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Fast => "fast",
            Method::Coset => "coset",
        })
    }
}

/// Value multiset of `C_d(τ)` over `τ ∈ [0, p^n - 2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub p: u32,
    pub n: u32,
    pub d: u64,
    pub method: Method,
    entries: BTreeMap<CycInt, u64>,
}

impl SpectrumTable {
    pub fn new(
        p: u32,
        n: u32,
        d: u64,
        method: Method,
        entries: impl IntoIterator<Item = (CycInt, u64)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in entries {
            *map.entry(v).or_insert(0) += c;
        }
        map.retain(|_, c| *c > 0);
        SpectrumTable {
            p,
            n,
            d,
            method,
            entries: map,
        }
    }

    /// Table with integer values.
    pub fn from_ints(
        p: u32,
        n: u32,
        d: u64,
        method: Method,
        entries: impl IntoIterator<Item = (i64, u64)>,
    ) -> Self {
        Self::new(
            p,
            n,
            d,
            method,
            entries.into_iter().map(|(v, c)| (CycInt::from_int(p, v), c)),
        )
    }

    pub fn entries(&self) -> &BTreeMap<CycInt, u64> {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = &CycInt> {
        self.entries.keys()
    }

    pub fn value_count(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn count(&self, v: &CycInt) -> u64 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn count_int(&self, v: i64) -> u64 {
        self.count(&CycInt::from_int(self.p, v))
    }

    /// `Σ value · count`.
    pub fn weighted_sum(&self) -> CycInt {
        self.entries.iter().fold(CycInt::zero(self.p), |acc, (v, &c)| {
            &acc + &v.scale(&BigInt::from(c))
        })
    }

    /// Same value multiset, ignoring `d` and method.
    pub fn same_distribution(&self, other: &SpectrumTable) -> bool {
        self.p == other.p && self.n == other.n && self.entries == other.entries
    }

    /// `(value, count)` pairs when every value is a rational integer.
    pub fn int_entries(&self) -> Option<Vec<(i64, u64)>> {
        self.entries
            .iter()
            .map(|(v, &c)| v.as_i64().ok().map(|v| (v, c)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "entries": self.entries.iter().map(|(v, c)| json!({"value": v.to_json(), "count": c})).collect::<Vec<_>>(),
            "method": self.method,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("spectrum record lacks `{k}`")))
        };
        let (p, n, d) = (field("p")? as u32, field("n")? as u32, field("d")?);
        let method: Method = serde_json::from_value(v.get("method").cloned().unwrap_or(Value::Null))?;
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("spectrum record lacks `entries`".into()))?
            .iter()
            .map(|e| {
                let value = CycInt::from_json(p, e.get("value").unwrap_or(&Value::Null))?;
                let count = e
                    .get("count")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("entry lacks `count`".into()))?;
                Ok((value, count))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(p, n, d, method, entries))
    }
}

impl Serialize for SpectrumTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for SpectrumTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(|(v, c)| format!("{v}:{c}")).collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

/// `W_f(a)` for `f(x) = Tr(x^d)` at every `a`, indexed by discrete log:
/// slot 0 is `a = 0`, slot `1 + τ` is `a = α^τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshTable {
    pub p: u32,
    pub n: u32,
    pub d: u64,
    /// Reduced coordinates, `p - 1` per slot.
    coords: Vec<i32>,
}

impl WalshTable {
    pub fn len(&self) -> usize {
        self.coords.len() / self.stride()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn stride(&self) -> usize {
        self.p as usize - 1
    }

    fn slot(&self, i: usize) -> CycInt {
        let s = self.stride();
        CycInt::from_coords(
            self.p,
            self.coords[i * s..(i + 1) * s].iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn at_zero(&self) -> CycInt {
        self.slot(0)
    }

    /// `W(α^τ)`.
    pub fn at_log(&self, tau: u64) -> CycInt {
        self.slot(1 + (tau % (self.len() as u64 - 1)) as usize)
    }

    pub fn at(&self, ctx: &FieldCtx, a: Elem) -> CycInt {
        match ctx.log(a) {
            Some(t) => self.at_log(t as u64),
            None => self.at_zero(),
        }
    }

    /// `W(α^τ)` when the table is integer valued (always for `p = 2`).
    pub fn int_at_log(&self, tau: u64) -> Option<i64> {
        let s = self.stride();
        let i = 1 + (tau % (self.len() as u64 - 1)) as usize;
        let c = &self.coords[i * s..(i + 1) * s];
        c[1..].iter().all(|&x| x == 0).then_some(c[0] as i64)
    }

    /// All slots in order: `a = 0` first, then `α^0, α^1, …`.
    pub fn values(&self) -> impl Iterator<Item = CycInt> + '_ {
        (0..self.len()).map(|i| self.slot(i))
    }

    /// `Σ_a W(a)^l` over every `a`, including zero.
    pub fn power_sum(&self, l: u32) -> CycInt {
        self.values().fold(CycInt::zero(self.p), |acc, w| &acc + &w.pow(l))
    }

    /// Spectrum of `C_d(τ) = W(α^τ) - 1`.
    pub fn to_spectrum(&self) -> SpectrumTable {
        let s = self.stride();
        let body = &self.coords[s..];
        let counts: HashMap<&[i32], u64> = body
            .par_chunks(s * 4096)
            .map(|part| {
                let mut local: HashMap<&[i32], u64> = HashMap::new();
                for key in part.chunks(s) {
                    *local.entry(key).or_insert(0) += 1;
                }
                local
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            });
        let one = CycInt::one(self.p);
        SpectrumTable::new(
            self.p,
            self.n,
            self.d,
            Method::Fast,
            counts.into_iter().map(|(k, c)| {
                let w = CycInt::from_coords(self.p, k.iter().map(|&x| BigInt::from(x)).collect());
                (&w - &one, c)
            }),
        )
    }
}

/// `d mod (p^n - 1)` after checking `gcd(d, p^n - 1) = 1`.
pub fn coprime_decimation(ctx: &FieldCtx, d: u64) -> Result<u64> {
    let m = ctx.group_order() as u64;
    if arith::gcd(d % m, m) != 1 {
        return Err(Error::NotCoprime { d, modulus: m });
    }
    Ok(d % m)
}

/// Whether `d` is a power of `p` modulo `p^n - 1`.
pub fn is_degenerate(ctx: &FieldCtx, d: u64) -> bool {
    let m = ctx.group_order() as u64;
    (0..ctx.n()).any(|j| (ctx.pow_p(j) as u64) % m == d % m)
}

/// `s_{dt}` over one period.
fn decimated_seq(ctx: &FieldCtx, d: u64) -> Vec<u8> {
    let m = ctx.group_order() as u64;
    let s = ctx.trace_seq();
    let step = d % m;
    let mut idx = 0u64;
    (0..m)
        .map(|_| {
            let v = s[idx as usize];
            idx += step;
            if idx >= m {
                idx -= m;
            }
            v
        })
        .collect()
}

fn naive_counts(p: usize, doubled: &[u8], v: &[u8], tau: usize) -> Vec<u64> {
    let len = v.len();
    let a = &doubled[tau..tau + len];
    if p == 2 {
        let ones: u64 = a.iter().zip(v).map(|(x, y)| (x ^ y) as u64).sum();
        return vec![len as u64 - ones, ones];
    }
    let mut counts = vec![0u64; p];
    for (&x, &y) in a.iter().zip(v) {
        let diff = x as usize + p - y as usize;
        counts[if diff >= p { diff - p } else { diff }] += 1;
    }
    counts
}

/// `C_d(τ)` by direct summation over one period.
pub fn crosscorr_naive(ctx: &FieldCtx, d: u64, tau: u64) -> Result<CycInt> {
    let d = coprime_decimation(ctx, d)?;
    let m = ctx.group_order() as usize;
    let doubled: Vec<u8> = ctx.trace_seq().iter().chain(ctx.trace_seq()).copied().collect();
    let v = decimated_seq(ctx, d);
    let counts = naive_counts(ctx.p() as usize, &doubled, &v, (tau % m as u64) as usize);
    Ok(CycInt::from_counts(ctx.p(), &counts))
}

/// `C_d(τ)` for every `τ`, by direct summation.
pub fn crosscorr_all_naive(ctx: &FieldCtx, d: u64) -> Result<Vec<CycInt>> {
    let d = coprime_decimation(ctx, d)?;
    let m = ctx.group_order() as usize;
    let p = ctx.p() as usize;
    let doubled: Vec<u8> = ctx.trace_seq().iter().chain(ctx.trace_seq()).copied().collect();
    let v = decimated_seq(ctx, d);
    Ok((0..m)
        .into_par_iter()
        .map(|tau| CycInt::from_counts(ctx.p(), &naive_counts(p, &doubled, &v, tau)))
        .collect())
}

pub fn spectrum_naive(ctx: &FieldCtx, d: u64) -> Result<SpectrumTable> {
    let values = crosscorr_all_naive(ctx, d)?;
    Ok(SpectrumTable::new(
        ctx.p(),
        ctx.n(),
        d,
        Method::Naive,
        values.into_iter().map(|v| (v, 1)),
    ))
}

/// Walsh table of `Tr(x^d)` for invertible `d`.
pub fn walsh_fast(ctx: &FieldCtx, d: u64) -> Result<WalshTable> {
    coprime_decimation(ctx, d)?;
    walsh_power_table(ctx, d)
}

/// Walsh table of `Tr(x^d)` for any `d >= 1`, invertible or not.
pub fn walsh_power_table(ctx: &FieldCtx, d: u64) -> Result<WalshTable> {
    let (p, n, q) = (ctx.p() as usize, ctx.n(), ctx.order() as usize);
    if (q as u64) * p as u64 > TRANSFORM_WORDS {
        return Err(Error::MemoryBudget(q as u64));
    }
    let m = q - 1;
    let f = decimated_seq(ctx, d);
    let exp = ctx.exp_table();
    let s = ctx.trace_seq();
    let stride = p - 1;
    let mut coords = vec![0i32; q * stride];

    // rolling window u(τ) = Σ_i s_{τ+i} p^i, split into ranges so that
    // each worker starts from a directly computed window
    let window = |tau: usize| -> usize {
        (0..n as usize).fold(0, |acc, i| acc + s[(tau + i) % m] as usize * p.pow(i as u32))
    };
    let top = p.pow(n - 1);
    let range = 4096usize;

    if p == 2 {
        let mut g = vec![1i32; q];
        for (i, &x) in exp.iter().enumerate() {
            g[x as usize] = 1 - 2 * f[i] as i32;
        }
        transform::fwht(&mut g);
        coords[0] = g[0];
        coords[1..].par_chunks_mut(range).enumerate().for_each(|(ci, out)| {
            let start = ci * range;
            let mut u = window(start);
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = g[u];
                u = u / 2 + s[(start + k + n as usize) % m] as usize * top;
            }
        });
    } else {
        let mut counts = vec![0u32; q * p];
        counts[0] = 1;
        for (i, &x) in exp.iter().enumerate() {
            counts[x as usize * p + f[i] as usize] = 1;
        }
        transform::dft_counts(&mut counts, p);
        let reduce = |u: usize, out: &mut [i32]| {
            let c = &counts[u * p..(u + 1) * p];
            for j in 0..stride {
                out[j] = c[j] as i32 - c[p - 1] as i32;
            }
        };
        reduce(0, &mut coords[..stride]);
        coords[stride..]
            .par_chunks_mut(range * stride)
            .enumerate()
            .for_each(|(ci, out)| {
                let start = ci * range;
                let mut u = window(start);
                for (k, slot) in out.chunks_mut(stride).enumerate() {
                    reduce(u, slot);
                    u = u / p + s[(start + k + n as usize) % m] as usize * top;
                }
            });
    }
    Ok(WalshTable {
        p: ctx.p(),
        n,
        d,
        coords,
    })
}

/// `W_f(a) = Σ_x ω^{Tr(x^d) - Tr(ax)}` at one point, by direct summation.
pub fn walsh_naive_point(ctx: &FieldCtx, d: u64, a: Elem) -> CycInt {
    let p = ctx.p() as usize;
    let mut counts = vec![0u64; p];
    for x in ctx.elements() {
        let e = ctx.trace(ctx.pow(x, d)) as usize + p - ctx.trace(ctx.mul(a, x)) as usize;
        counts[e % p] += 1;
    }
    CycInt::from_counts(ctx.p(), &counts)
}

/// Spectrum of an invertible decimation via the fast transform.
pub fn spectrum(ctx: &FieldCtx, d: u64) -> Result<SpectrumTable> {
    Ok(walsh_fast(ctx, d)?.to_spectrum())
}

pub fn spectrum_with(ctx: &FieldCtx, d: u64, method: Method) -> Result<SpectrumTable> {
    match method {
        Method::Naive => spectrum_naive(ctx, d),
        Method::Fast => spectrum(ctx, d),
        Method::Coset => Err(Error::MethodInapplicable(
            "the coset method needs a coset count".into(),
        )),
    }
}

/// `P^{(l)} = Σ_a W(a)^l` from a spectrum of an invertible decimation, whose
/// omitted `a = 0` point has `W(0) = 0`.
pub fn moment(table: &SpectrumTable, l: u32) -> CycInt {
    let one = CycInt::one(table.p);
    let zero_point = if l == 0 { one.clone() } else { CycInt::zero(table.p) };
    table.entries().iter().fold(zero_point, |acc, (v, &c)| {
        &acc + &(v + &one).pow(l).scale(&BigInt::from(c))
    })
}

fn check_budget(ctx: &FieldCtx, exponent: u32) -> Result<()> {
    let cost = (ctx.order() as u128).pow(exponent);
    if cost > COUNT_BUDGET {
        return Err(Error::Budget(cost));
    }
    Ok(())
}

/// Powers `x^d` for every packed `x`.
fn power_map(ctx: &FieldCtx, d: u64) -> Vec<u32> {
    ctx.elements().map(|x| ctx.pow(x, d).0).collect()
}

/// `N^{(l)}`: l-tuples over the whole field with `Σ x_i = 0` and `Σ x_i^d = 0`.
pub fn solution_count_n(ctx: &FieldCtx, d: u64, l: u32) -> Result<u64> {
    if !(1..=4).contains(&l) {
        return Err(Error::OutOfDomain(format!("l = {l}, expected 1..=4")));
    }
    check_budget(ctx, l - 1)?;
    let q = ctx.order() as usize;
    let pw = power_map(ctx, d);
    Ok(match l {
        1 => 1,
        2 => ctx
            .elements()
            .filter(|&x| ctx.add(Elem(pw[x.0 as usize]), Elem(pw[ctx.neg(x).0 as usize])).is_zero())
            .count() as u64,
        3 => (0..q as u32)
            .into_par_iter()
            .map(|a| {
                let x1 = Elem(a);
                ctx.elements()
                    .filter(|&x2| {
                        let x3 = ctx.neg(ctx.add(x1, x2));
                        let s = ctx.add(Elem(pw[a as usize]), Elem(pw[x2.0 as usize]));
                        ctx.add(s, Elem(pw[x3.0 as usize])).is_zero()
                    })
                    .count() as u64
            })
            .sum(),
        _ => {
            // pairs histogram over (x1 + x2, x1^d + x2^d)
            let mut hist = vec![0u32; q * q];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    let s = ctx.add(Elem(a), Elem(b)).0 as usize;
                    let t = ctx.add(Elem(pw[a as usize]), Elem(pw[b as usize])).0 as usize;
                    hist[s * q + t] += 1;
                }
            }
            (0..q)
                .flat_map(|s| (0..q).map(move |t| (s, t)))
                .map(|(s, t)| {
                    let (ns, nt) = (ctx.neg(Elem(s as u32)).0 as usize, ctx.neg(Elem(t as u32)).0 as usize);
                    hist[s * q + t] as u64 * hist[ns * q + nt] as u64
                })
                .sum()
        }
    })
}

/// `b_l`: nonzero `(x_1, …, x_{l-1})` with `Σ x_i + 1 = 0` and `Σ x_i^d + 1 = 0`.
pub fn b_l_count(ctx: &FieldCtx, d: u64, l: u32) -> Result<u64> {
    if !(3..=4).contains(&l) {
        return Err(Error::OutOfDomain(format!("l = {l}, expected 3 or 4")));
    }
    check_budget(ctx, l - 1)?;
    let pw = power_map(ctx, d);
    let minus_one = ctx.neg(Elem::ONE);
    let closes = |xs: &[Elem]| -> bool {
        let last = xs.iter().fold(minus_one, |acc, &x| ctx.sub(acc, x));
        if last.is_zero() {
            return false;
        }
        let powers = xs
            .iter()
            .chain(std::iter::once(&last))
            .fold(Elem::ONE, |acc, &x| ctx.add(acc, Elem(pw[x.0 as usize])));
        powers.is_zero()
    };
    Ok(match l {
        3 => ctx.nonzero().filter(|&x| closes(&[x])).count() as u64,
        _ => ctx
            .exp_table()
            .par_iter()
            .map(|&a| ctx.nonzero().filter(|&b| closes(&[Elem(a), b])).count() as u64)
            .sum(),
    })
}

/// `#{x ∈ F : (x + 1)^d - x^d = b}`.
pub fn difference_count(ctx: &FieldCtx, d: u64, b: Elem) -> u64 {
    ctx.elements()
        .filter(|&x| ctx.sub(ctx.pow(ctx.add(x, Elem::ONE), d), ctx.pow(x, d)) == b)
        .count() as u64
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub lhs: CycInt,
    pub rhs: CycInt,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(label: impl Into<String>, lhs: CycInt, rhs: CycInt) -> Self {
        let holds = lhs == rhs;
        IdentityCheck {
            label: label.into(),
            lhs,
            rhs,
            holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub p: u32,
    pub n: u32,
    pub d: u64,
    pub checks: Vec<IdentityCheck>,
}

impl MomentReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Checks `Σ C = 1`, the shifted products `Σ_τ C(τ - t) C(τ)` at `t = 0`
/// and three seeded random `t`, and the cubic power sum against `b_3`.
pub fn moment_identity_check(ctx: &FieldCtx, d: u64, seed: u64) -> Result<MomentReport> {
    let values = if ctx.order() <= 1 << 14 {
        crosscorr_all_naive(ctx, d)?
    } else {
        let w = walsh_fast(ctx, d)?;
        let one = CycInt::one(ctx.p());
        (0..ctx.group_order() as u64).map(|t| &w.at_log(t) - &one).collect()
    };
    let p = ctx.p();
    let q = BigInt::from(ctx.order());
    let m = values.len();
    let int = |k: BigInt| CycInt::from_int(p, k);
    let mut checks = Vec::new();

    let sum = values.iter().fold(CycInt::zero(p), |acc, v| &acc + v);
    checks.push(IdentityCheck::new("sum", sum, CycInt::one(p)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shifts = vec![0usize];
    if m > 1 {
        shifts.extend((0..3).map(|_| rng.gen_range(1..m)));
    }
    for t in shifts {
        let lhs = (0..m).fold(CycInt::zero(p), |acc, tau| {
            &acc + &(&values[(tau + m - t) % m] * &values[tau])
        });
        let rhs = if t == 0 { &q * &q - &q - 1 } else { -&q - 1 };
        checks.push(IdentityCheck::new(format!("shift-product t={t}"), lhs, int(rhs)));
    }

    if (ctx.order() as u128) * (ctx.order() as u128) <= COUNT_BUDGET {
        let cubes = values.iter().fold(CycInt::zero(p), |acc, v| &acc + &v.pow(3));
        let b3 = b_l_count(ctx, d, 3)?;
        let qm1: BigInt = &q - 1;
        let rhs: BigInt = -(&qm1 * &qm1) + 2 + BigInt::from(b3) * &q * &q;
        checks.push(IdentityCheck::new("cube-sum", cubes, int(rhs)));
    }
    Ok(MomentReport {
        p,
        n: ctx.n(),
        d,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    fn ints(t: &SpectrumTable) -> Vec<(i64, u64)> {
        t.int_entries().unwrap()
    }

    #[test]
    fn degenerate_decimation_is_autocorrelation() {
        let c = ctx(2, 5);
        assert_eq!(crosscorr_naive(&c, 2, 0).unwrap(), CycInt::from_int(2, 31));
        assert_eq!(crosscorr_naive(&c, 4, 3).unwrap(), CycInt::from_int(2, -1));
        for (p, n, d) in [(2, 5, 8), (3, 3, 9), (5, 2, 1)] {
            let c = ctx(p, n);
            let q = c.order() as i64;
            assert_eq!(ints(&spectrum(&c, d).unwrap()), vec![(-1, q as u64 - 2), (q - 1, 1)]);
        }
    }

    #[test]
    fn small_spectra() {
        let c = ctx(2, 5);
        let s = spectrum(&c, 3).unwrap();
        assert_eq!(ints(&s), vec![(-9, 6), (-1, 15), (7, 10)]);
        assert!(s.same_distribution(&spectrum_naive(&c, 3).unwrap()));
        for tau in 0..31 {
            let v = crosscorr_naive(&c, 3, tau).unwrap().as_i64().unwrap();
            assert!([7, -9, -1].contains(&v));
        }
        let t = spectrum(&ctx(3, 3), 7).unwrap();
        assert_eq!(ints(&t), vec![(-10, 3), (-1, 17), (8, 6)]);
    }

    #[test]
    fn non_coprime_rejected() {
        let c = ctx(2, 4);
        assert!(matches!(spectrum(&c, 3), Err(Error::NotCoprime { .. })));
        assert!(matches!(crosscorr_naive(&c, 5, 0), Err(Error::NotCoprime { .. })));
        assert!(walsh_power_table(&c, 3).is_ok());
    }

    #[test]
    fn walsh_of_linear_function_is_a_spike() {
        let c = ctx(2, 4);
        let w = walsh_fast(&c, 1).unwrap();
        let vals: Vec<i64> = w.values().map(|v| v.as_i64().unwrap()).collect();
        assert_eq!(vals.iter().filter(|&&v| v == 16).count(), 1);
        assert_eq!(vals.iter().filter(|&&v| v == 0).count(), 15);
        assert_eq!(w.at(&c, Elem::ONE), CycInt::from_int(2, 16));
    }

    #[test]
    fn walsh_matches_pointwise_definition() {
        for (p, n, d) in [(2, 6, 3), (2, 6, 6), (3, 4, 7), (5, 3, 3), (7, 2, 5), (3, 3, 2)] {
            let c = ctx(p, n);
            let w = walsh_power_table(&c, d).unwrap();
            for a in c.elements() {
                assert_eq!(w.at(&c, a), walsh_naive_point(&c, d, a), "p={p} n={n} d={d}");
            }
        }
    }

    #[test]
    fn walsh_parseval_and_zero_point() {
        for (p, n, d) in [(2, 8, 7), (3, 5, 5), (5, 3, 7)] {
            let c = ctx(p, n);
            let w = walsh_fast(&c, d).unwrap();
            let q = BigInt::from(c.order());
            assert!(w.at_zero().is_zero());
            assert_eq!(w.power_sum(1), CycInt::from_int(p, q.clone()));
            let energy = w.values().fold(CycInt::zero(p), |acc, v| &acc + &(&v * &v.conjugate()));
            assert_eq!(energy, CycInt::from_int(p, &q * &q));
        }
    }

    #[test]
    fn gold_n6_fast_equals_naive_at_every_shift() {
        let c = ctx(2, 6);
        let w = walsh_fast(&c, 5).unwrap();
        let naive = crosscorr_all_naive(&c, 5).unwrap();
        for (tau, v) in naive.iter().enumerate() {
            assert_eq!(*v, &w.at_log(tau as u64) - &CycInt::one(2));
        }
    }

    #[test]
    fn moments_low_order() {
        let c = ctx(2, 5);
        let t = spectrum(&c, 3).unwrap();
        assert_eq!(moment(&t, 0), CycInt::from_int(2, 32));
        assert_eq!(moment(&t, 1), CycInt::from_int(2, 32));
        assert_eq!(moment(&t, 2), CycInt::from_int(2, 1024));
        let m1 = difference_count(&c, 3, Elem::ONE);
        assert_eq!(moment(&t, 3), CycInt::from_int(2, 1024 * m1));
        for (p, n, d) in [(3, 3, 5), (5, 2, 5)] {
            let c = ctx(p, n);
            let q = c.order() as i64;
            let t = spectrum(&c, d).unwrap();
            assert_eq!(moment(&t, 1), CycInt::from_int(p, q));
            assert_eq!(moment(&t, 2), CycInt::from_int(p, q * q));
        }
    }

    #[test]
    fn solution_counts() {
        let c = ctx(3, 2);
        assert_eq!(solution_count_n(&c, 5, 1).unwrap(), 1);
        assert_eq!(solution_count_n(&c, 5, 2).unwrap(), 9);
        let c = ctx(2, 5);
        let n3 = solution_count_n(&c, 3, 3).unwrap();
        let q = 32i64;
        let p3 = moment(&spectrum(&c, 3).unwrap(), 3).as_i64().unwrap();
        assert_eq!(p3 * (q - 1), q * q * n3 as i64 - q * q * q);
        assert!(matches!(solution_count_n(&ctx(2, 12), 5, 4), Err(Error::Budget(_))));
    }

    #[test]
    fn b_counts() {
        // degenerate d: every nonzero x_1 other than 1 closes the system
        assert_eq!(b_l_count(&ctx(2, 4), 1, 3).unwrap(), 14);
        // d = 2^m + 3 at m = 2, 3: nonzero solutions
        assert_eq!(b_l_count(&ctx(2, 4), 7, 3).unwrap(), 2);
        assert_eq!(b_l_count(&ctx(2, 6), 11, 3).unwrap(), 8);
        let c = ctx(2, 5);
        assert_eq!(b_l_count(&c, 3, 3).unwrap(), difference_count(&c, 3, Elem::ONE) - 2);
    }

    #[test]
    fn moment_identities_small() {
        let r = moment_identity_check(&ctx(2, 4), 7, 1).unwrap();
        assert!(r.all_hold(), "{r:?}");
        let shifted: Vec<_> = r.checks.iter().filter(|c| c.label.starts_with("shift-product")).collect();
        assert_eq!(shifted.len(), 4);
        assert_eq!(shifted[1].rhs, CycInt::from_int(2, -17));
        assert!(moment_identity_check(&ctx(3, 3), 5, 2).unwrap().all_hold());
    }

    #[test]
    fn spectrum_json_shape() {
        let s = spectrum(&ctx(2, 5), 3).unwrap();
        assert_eq!(
            s.to_json().to_string(),
            r#"{"p":2,"n":5,"d":3,"entries":[{"value":-9,"count":6},{"value":-1,"count":15},{"value":7,"count":10}],"method":"fast"}"#
        );
        assert_eq!(SpectrumTable::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(s.to_string(), "{-9:6, -1:15, 7:10}");
    }
}
