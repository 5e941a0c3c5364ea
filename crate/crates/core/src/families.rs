//! Catalog of decimation families with known or bounded spectra.
//!
//! Each descriptor builds, for a prime `p`, a degree `n` and named integer
//! parameters, the decimation `d` together with its predicted spectrum:
//! either an exact distribution of `C_d(τ)` over the `p^n - 1` shifts, or
//! a bound on the number of values and the set they are drawn from.

use crate::arith;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::spectra::{self, Method, SpectrumTable};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Named integer parameters such as `k`, `t` or `i`.
pub type Params = BTreeMap<String, i64>;

type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedDistribution,
    ProvedValuesOnly,
    AtMostK,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ProvedDistribution => "proved-distribution",
            Status::ProvedValuesOnly => "proved-values-only",
            Status::AtMostK => "at-most-k",
        })
    }
}

/// Whether a closed-form table counts shifts (`p^n - 1` entries) or every
/// `a ∈ GF(p^n)` (`p^n` entries, one of them the `-1` at `a = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    PerShift,
    AllPoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Prediction {
    /// Exact value → count over the shifts.
    Distribution { entries: BTreeMap<i64, u64> },
    /// At most `k` values, all drawn from `values`.
    AtMost { k: usize, values: BTreeSet<i64> },
}

impl Prediction {
    pub fn to_json(&self) -> Value {
        match self {
            Prediction::Distribution { entries } => json!({
                "kind": "distribution",
                "entries": entries.iter().map(|(v, c)| json!({"value": v, "count": c})).collect::<Vec<_>>(),
            }),
            Prediction::AtMost { k, values } => json!({
                "kind": "at-most",
                "k": k,
                "values": values,
            }),
        }
    }
}

/// One admissible parameter point of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub d: u64,
    pub prediction: Prediction,
}

/// A free parameter and the range searched when enumerating points.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    range: fn(u32, u32) -> (i64, i64),
}

pub struct FamilyDescriptor {
    pub id: &'static str,
    pub prime: &'static str,
    pub domain: &'static str,
    pub params: &'static [ParamSpec],
    pub status: Status,
    pub convention: Convention,
    /// Interpretation fixed where the printed statement is ambiguous.
    pub note: &'static str,
    build: fn(u32, u32, &Params) -> Result<Instance>,
}

impl fmt::Debug for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyDescriptor").field("id", &self.id).finish_non_exhaustive()
    }
}

impl FamilyDescriptor {
    /// Decimation and prediction at one point, after every domain check.
    pub fn instance(&self, p: u32, n: u32, params: &Params) -> Result<Instance> {
        if !arith::is_prime(p as u64) {
            return Err(Error::CompositeP(p as u64));
        }
        if n == 0 {
            return Err(Error::OutOfDomain("n must be positive".into()));
        }
        if let Some(extra) = params.keys().find(|k| !self.params.iter().any(|s| s.name == k.as_str())) {
            return Err(Error::OutOfDomain(format!("{} takes no parameter `{extra}`", self.id)));
        }
        let inst = (self.build)(p, n, params)?;
        if let Prediction::Distribution { entries } = &inst.prediction {
            let total: u64 = entries.values().sum();
            let q = arith::checked_pow(p as u64, n).unwrap_or(0);
            if total + 1 != q {
                return Err(Error::OutOfDomain(format!(
                    "{} table has {total} entries at p={p} n={n}",
                    self.id
                )));
            }
        }
        Ok(inst)
    }

    pub fn decimation(&self, p: u32, n: u32, params: &Params) -> Result<u64> {
        Ok(self.instance(p, n, params)?.d)
    }

    /// Every admissible parameter point at `(p, n)`.
    pub fn points(&self, p: u32, n: u32) -> Vec<(Params, Instance)> {
        let mut grid: Vec<Params> = vec![Params::new()];
        for spec in self.params {
            let (lo, hi) = (spec.range)(p, n);
            grid = grid
                .into_iter()
                .flat_map(|base| {
                    (lo..=hi).map(move |v| {
                        let mut next = base.clone();
                        next.insert(spec.name.to_string(), v);
                        next
                    })
                })
                .collect();
        }
        grid.into_iter()
            .filter_map(|ps| self.instance(p, n, &ps).ok().map(|inst| (ps, inst)))
            .collect()
    }
}

// ---- arithmetic helpers ----

fn out(msg: impl Into<String>) -> Error {
    Error::OutOfDomain(msg.into())
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(out(msg))
    }
}

fn param(ps: &Params, name: &str) -> Result<i64> {
    ps.get(name).copied().ok_or_else(|| out(format!("missing parameter `{name}`")))
}

fn ip(p: u32, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// `p^e` as an exact rational, `e` may be negative.
fn qp(p: u32, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(ip(p, e as u32))
    } else {
        Q::new(1, ip(p, (-e) as u32))
    }
}

fn qi(v: i128) -> Q {
    Q::from_integer(v)
}

fn sign(m: u32) -> i128 {
    if m.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn modulus(p: u32, n: u32) -> Result<u64> {
    match arith::checked_pow(p as u64, n) {
        Some(q) if q <= 1 << 62 => Ok(q - 1),
        _ => Err(out(format!("{p}^{n} is too large"))),
    }
}

/// `p^e mod m`.
fn pmod(p: u32, e: u64, m: u64) -> u64 {
    arith::pow_mod(p as u64, e, m)
}

/// Reduces `d` and insists on `gcd(d, p^n - 1) = 1`.
fn coprime(p: u32, n: u32, d: u64) -> Result<u64> {
    let m = modulus(p, n)?;
    let d = d % m;
    if arith::gcd(d, m) != 1 {
        return Err(out(format!("gcd({d}, {m}) != 1")));
    }
    Ok(d)
}

/// Value/count rows with exact rational entries, merged and checked.
fn table(rows: Vec<(Q, Q)>) -> Result<BTreeMap<i64, u64>> {
    let mut map = BTreeMap::new();
    for (v, c) in rows {
        if !v.is_integer() || !c.is_integer() {
            return Err(out(format!("non-integral table entry {v} : {c}")));
        }
        let (v, c) = (v.to_integer(), c.to_integer());
        if c < 0 {
            return Err(out(format!("negative count {c} for value {v}")));
        }
        if c > 0 {
            let v = i64::try_from(v).map_err(|_| out("value out of range"))?;
            *map.entry(v).or_insert(0u64) += c as u64;
        }
    }
    Ok(map)
}

fn dist(rows: Vec<(Q, Q)>) -> Result<Prediction> {
    Ok(Prediction::Distribution { entries: table(rows)? })
}

/// Removes the `a = 0` point from an all-points table.
fn normalized(rows: Vec<(Q, Q)>) -> Result<Prediction> {
    let mut entries = table(rows)?;
    match entries.get_mut(&-1) {
        Some(c) if *c > 0 => *c -= 1,
        _ => return Err(out("all-points table lacks the value -1")),
    }
    entries.retain(|_, c| *c > 0);
    Ok(Prediction::Distribution { entries })
}

fn at_most(k: usize, p: u32, m: u32, js: &[i64]) -> Prediction {
    let pm = ip(p, m) as i64;
    Prediction::AtMost {
        k,
        values: js.iter().map(|j| -1 + j * pm).collect(),
    }
}

fn inst(d: u64, prediction: Prediction) -> Instance {
    Instance { d, prediction }
}

// ---- closed forms ----

/// Three values `-1`, `-1 ± p^{(n+e)/2}`.
fn three_valued(p: u32, n: u32, e: u32) -> Result<Prediction> {
    need((n + e).is_multiple_of(2) && n > e, "n - e must be positive and even")?;
    let big = qp(p, ((n + e) / 2) as i64);
    let (a, b) = (qp(p, (n - e) as i64), qp(p, ((n - e) / 2) as i64));
    let q = qp(p, n as i64);
    let rows = if p == 2 {
        vec![
            (big - 1, a / 2 + b / 2),
            (-big - 1, a / 2 - b / 2),
            (qi(-1), q - a - 1),
        ]
    } else {
        vec![
            (big - 1, (a + b) / 2),
            (-big - 1, (a - b) / 2),
            (qi(-1), q - a - 1),
        ]
    };
    dist(rows)
}

/// Ternary three values `-1`, `-1 ± 3^{m+1}` at `n = 2m + 1`.
fn ternary_three_valued(n: u32) -> Result<Prediction> {
    let m = (n - 1) / 2;
    let big = qp(3, m as i64 + 1);
    let (a, b) = (qp(3, n as i64 - 1), qp(3, m as i64));
    dist(vec![
        (big - 1, (a + b) / 2),
        (-big - 1, (a - b) / 2),
        (qi(-1), qp(3, n as i64) - a - 1),
    ])
}

/// Binary four values over all points, `r1 = gcd(r, m)`.
fn niho_four_valued(m: u32, r1: u32) -> Result<Prediction> {
    let n = 2 * m;
    let (r1, m, n) = (r1 as i64, m as i64, n as i64);
    let two = |e: i64| qp(2, e);
    normalized(vec![
        (-two(m) - 1, (two(n + r1 - 1) - two(m + r1 - 1)) / (two(r1) + 1)),
        (qi(-1), two(n - r1) - two(m - r1)),
        (two(m) - 1, (two(n + r1 - 1) - two(n) + two(m + r1 - 1)) / (two(r1) - 1)),
        (two(r1 + m) - 1, (two(n) - two(m)) / (two(3 * r1) - two(r1))),
    ])
}

pub fn tau(m: u32) -> BigRational {
    let mut prev = BigRational::from_integer(BigInt::from(2));
    let mut cur = BigRational::new(BigInt::from(1), BigInt::from(2));
    if m == 0 {
        return prev;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for _ in 1..m {
        let next = &cur * &half - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `2^m τ_m`, an integer.
fn scaled_tau(m: u32) -> Result<i128> {
    let t = tau(m) * BigRational::from_integer(BigInt::from(1u8) << m);
    if !t.is_integer() {
        return Err(out("2^m tau_m is not an integer"));
    }
    t.to_integer().to_i128().ok_or_else(|| out("tau out of range"))
}

/// Six-valued table for `d = 3(2^m - 1) + 1`, odd `m`, in terms of a
/// parameter `R` (`R = -2^m τ_m + 2^{m+1} + 1` if the two forms agree).
pub fn dfhr_r_table(m: u32, r: i64) -> Result<BTreeMap<i64, u64>> {
    let q = qp(2, m as i64);
    let r = qi(r as i128);
    table(vec![
        (-q - 1, (qi(11) * q * q - qi(24) * q + r) / 30),
        (qi(-1), (qi(9) * q * q + qi(22) * q - qi(3) * r - 20) / 24),
        (q - 1, (q * q - qi(2) * q + r - 4) / 6),
        (qi(2) * q - 1, (q * q - r + 12) / 12),
        (qi(3) * q - 1, (q - 2) / 3),
        (qi(4) * q - 1, (q * q - qi(14) * q + r + 20) / 120),
    ])
}

// ---- family builders ----

fn two_only(p: u32) -> Result<()> {
    need(p == 2, "requires p = 2")
}

fn odd_only(p: u32) -> Result<()> {
    need(p % 2 == 1, "requires odd p")
}

fn half(n: u32) -> Result<u32> {
    need(n.is_multiple_of(2), "requires even n")?;
    Ok(n / 2)
}

fn gold_like(p: u32, n: u32, ps: &Params, kasami: bool) -> Result<Instance> {
    let k = param(ps, "k")?;
    need(k >= 1 && k < n as i64, "requires 1 <= k < n")?;
    let k = k as u32;
    let e = arith::gcd(n as u64, k as u64) as u32;
    need((n / e) % 2 == 1, "requires n/gcd(n,k) odd")?;
    let m = modulus(p, n)?;
    let d = if kasami {
        (pmod(p, 2 * k as u64, m) + m - pmod(p, k as u64, m) + 1) % m
    } else if p == 2 {
        pmod(2, k as u64, m) + 1
    } else {
        // (p^{2k} + 1)/2, exact since p is odd
        let mm = 2 * m;
        ((arith::pow_mod(p as u64, 2 * k as u64, mm) + 1) % mm) / 2
    };
    Ok(inst(coprime(p, n, d)?, three_valued(p, n, e)?))
}

fn build_gold(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    two_only(p)?;
    gold_like(p, n, ps, false)
}

fn build_kasami_welch(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    two_only(p)?;
    gold_like(p, n, ps, true)
}

fn build_trachtenberg_half(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    odd_only(p)?;
    gold_like(p, n, ps, false)
}

fn build_trachtenberg_kw(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    odd_only(p)?;
    gold_like(p, n, ps, true)
}

fn cusick_dobbertin(p: u32, n: u32, first: bool) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    need(m % 2 == 1 && m >= 3, "requires n = 2m with odd m >= 3")?;
    let d = if first {
        (1u64 << m) + (1u64 << m.div_ceil(2)) + 1
    } else {
        (1u64 << (m + 1)) + 3
    };
    Ok(inst(coprime(p, n, d)?, three_valued(2, n, 2)?))
}

fn build_cd_a(p: u32, n: u32, _: &Params) -> Result<Instance> {
    cusick_dobbertin(p, n, true)
}

fn build_cd_b(p: u32, n: u32, _: &Params) -> Result<Instance> {
    cusick_dobbertin(p, n, false)
}

fn build_welch(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    need(n % 2 == 1 && n >= 3, "requires odd n >= 3")?;
    let m = (n - 1) / 2;
    Ok(inst(coprime(p, n, (1u64 << m) + 3)?, three_valued(2, n, 1)?))
}

fn build_hollmann_xiang(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    need(n % 2 == 1 && n >= 5, "requires odd n >= 5")?;
    let j = if n % 4 == 1 { (n - 1) / 4 } else { (3 * n - 1) / 4 };
    let d = (1u64 << ((n - 1) / 2)) + (1u64 << j) - 1;
    Ok(inst(coprime(p, n, d)?, three_valued(2, n, 1)?))
}

fn build_ternary_welch(p: u32, n: u32, _: &Params) -> Result<Instance> {
    need(p == 3, "requires p = 3")?;
    need(n % 2 == 1 && n >= 3, "requires odd n >= 3")?;
    let m = (n - 1) / 2;
    let d = 2 * 3u64.pow(m) + 1;
    Ok(inst(coprime(p, n, d)?, ternary_three_valued(n)?))
}

fn build_katz_langevin(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    need(p == 3, "requires p = 3")?;
    need(n % 2 == 1 && n >= 3, "requires odd n >= 3")?;
    let k = param(ps, "k")?;
    need(k >= 1 && k < n as i64, "requires 1 <= k < n")?;
    need((4 * k - 1) % n as i64 == 0, "requires n | 4k - 1")?;
    let m = modulus(p, n)?;
    let d = (pmod(3, k as u64, m) + 2) % m;
    Ok(inst(coprime(p, n, d)?, ternary_three_valued(n)?))
}

fn niho_case(p: u32, n: u32) -> Result<u32> {
    two_only(p)?;
    let m = half(n)?;
    need(m % 2 == 0, "requires n = 2m with even m")?;
    Ok(m)
}

fn build_niho_case1(p: u32, n: u32, _: &Params) -> Result<Instance> {
    let m = niho_case(p, n)?;
    let d = 2 * ((1u64 << m) - 1) + 1;
    Ok(inst(coprime(p, n, d)?, niho_four_valued(m, 1)?))
}

fn build_niho_case2(p: u32, n: u32, _: &Params) -> Result<Instance> {
    let m = niho_case(p, n)?;
    let d = ((1u64 << (m / 2)) + 1) * ((1u64 << m) - 1) + 2;
    Ok(inst(coprime(p, n, d)?, niho_four_valued(m, m / 2)?))
}

fn build_niho_case3(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    let m = niho_case(p, n)?;
    let t = param(ps, "t")?;
    need(t > 0 && t < m as i64, "requires 0 < t < m")?;
    need(arith::gcd(t as u64, n as u64) == 1, "requires gcd(t, n) = 1")?;
    // (2^{(m+1)t} - 1)/(2^t - 1) = Σ_{i ≤ m} 2^{ti}
    let md = modulus(2, n)?;
    let d = (0..=m as u64).fold(0u64, |acc, i| (acc + pmod(2, i * t as u64, md)) % md);
    Ok(inst(coprime(p, n, d)?, niho_four_valued(m, 1)?))
}

fn build_niho_case4(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    let t = param(ps, "t")?;
    need(t > 0 && m as i64 % (2 * t) == 0, "requires 2t | m")?;
    let t = t as u32;
    let ratio = ((1u64 << m) - 1) / ((1u64 << t) - 1);
    let d = ratio * ((1u64 << m) - 1) + 2;
    Ok(inst(coprime(p, n, d)?, niho_four_valued(m, t)?))
}

fn two_adic(x: u64) -> u32 {
    x.trailing_zeros()
}

fn build_niho_unified(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    let r = param(ps, "r")?;
    let sg = param(ps, "sign")?;
    need(sg == 1 || sg == -1, "requires sign = 1 or -1")?;
    need(r >= 1 && r < m as i64, "requires 1 <= r < m")?;
    let r = r as u32;
    need(two_adic(r as u64) < two_adic(m as u64), "requires v2(r) < v2(m)")?;
    let big = (1u64 << m) + 1;
    let den = if sg == 1 { (1u64 << r) + 1 } else { (1u64 << r) - 1 } % big;
    let inv = arith::mod_inverse(den, big).ok_or_else(|| out("2^r ± 1 not invertible mod 2^m + 1"))?;
    let s = arith::mul_mod(1u64 << r, inv, big);
    let d = s * ((1u64 << m) - 1) + 1;
    let r1 = arith::gcd(r as u64, m as u64) as u32;
    Ok(inst(coprime(p, n, d)?, niho_four_valued(m, r1)?))
}

fn build_helleseth_2pm(p: u32, n: u32, _: &Params) -> Result<Instance> {
    odd_only(p)?;
    let m = half(n)?;
    let pm = ip(p, m);
    need(pm % 3 != 2, "requires p^m != 2 mod 3")?;
    let q = qi(ip(p, n));
    let pmq = qi(pm);
    let pred = dist(vec![
        (-pmq - 1, (q - pmq) / 3),
        (qi(-1), (q - pmq - 2) / 2),
        (pmq - 1, pmq),
        (qi(2) * pmq - 1, (q - pmq) / 6),
    ])?;
    Ok(inst(coprime(p, n, 2 * pm as u64 - 1)?, pred))
}

fn build_ternary_3k(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    need(p == 3, "requires p = 3")?;
    need(n.is_multiple_of(3), "requires n = 3k")?;
    let k = n / 3;
    need(k % 2 == 1, "requires odd k")?;
    let j = param(ps, "j")?;
    need(j == 1 || j == 2, "requires j = 1 or 2")?;
    let md = modulus(3, n)?;
    let d = (pmod(3, j as u64 * k as u64, md) + 2) % md;
    // the table's r is k
    let r = k as i64;
    let t = |e: i64| qp(3, e);
    let pred = dist(vec![
        (qi(-1), qi(2) * t(3 * r - 1) + t(2 * r - 1) - t(r) - 1),
        (t(2 * r) - 1, t(r)),
        (t((3 * r + 1) / 2) - 1, (t(3 * r - 1) - t(2 * r - 1)) / 2),
        (-t((3 * r + 1) / 2) - 1, (t(3 * r - 1) - t(2 * r - 1)) / 2),
    ])?;
    Ok(inst(coprime(p, n, d)?, pred))
}

fn build_helleseth_2m3(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    need(m >= 2, "requires m >= 2")?;
    let mi = m as i64;
    let t = |e: i64| qp(2, e);
    let b = t(mi) + qi(-sign(m)) + 1;
    let pred = dist(vec![
        (-t(mi) - 1, t(2 * mi - 1) - t(mi - 3) * b - t(mi - 1)),
        (qi(-1), (t(mi) * b + t(mi - 1) - 3) / 3),
        (t(mi) - 1, t(2 * mi - 1) - t(mi - 2) * b),
        (qi(2) * t(mi) - 1, t(mi - 1)),
        (qi(3) * t(mi) - 1, (t(mi - 3) * b - t(mi - 1)) / 3),
    ])?;
    Ok(inst(coprime(p, n, (1u64 << m) + 3)?, pred))
}

fn build_dobbertin_4r(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    need(n.is_multiple_of(4) && (n / 4) % 2 == 1, "requires n = 4r with odd r")?;
    let r = (n / 4) as i64;
    let t = |e: i64| qp(2, e);
    let mid = (t(4 * r - 1) + t(3 * r - 1)) / 3;
    let outer = (t(4 * r - 2) - t(3 * r - 3)) / 3;
    let pred = normalized(vec![
        (qi(-1), t(4 * r - 1) - t(3 * r - 2)),
        (t(2 * r) - 1, mid),
        (-t(2 * r) - 1, mid),
        (t(2 * r + 1) - 1, outer + t(2 * r - 2)),
        (-t(2 * r + 1) - 1, outer - t(2 * r - 2)),
    ])?;
    let d = (1u64 << (2 * r)) + (1u64 << r) + 1;
    Ok(inst(coprime(p, n, d)?, pred))
}

fn kasami_fraction(p: u32, n: u32, ps: &Params, l: u32, k: u32) -> Result<Instance> {
    two_only(p)?;
    need(n % 2 == 1 && n >= 3, "requires odd n >= 3")?;
    let t = param(ps, "t")?;
    need(t >= 1 && t < n as i64, "requires 1 <= t < n")?;
    let t = t as u64;
    let md = modulus(2, n)?;
    let num = (pmod(2, l as u64 * t, md) + 1) % md;
    let den = (pmod(2, k as u64 * t, md) + 1) % md;
    let d = crate::niho::resolve_fraction(num, den, md)?;
    let e = arith::gcd(n as u64, t) as u32;
    let values = [0i64, 1, -1, 3, -3]
        .iter()
        .map(|&s| {
            let e2 = match s.abs() {
                0 => return Ok(-1),
                1 => (n + e) / 2,
                _ => (n + 3 * e) / 2,
            };
            need(e2 < 63, "value out of range")?;
            Ok(-1 + s.signum() * (1i64 << e2))
        })
        .collect::<Result<BTreeSet<i64>>>()?;
    Ok(inst(coprime(p, n, d)?, Prediction::AtMost { k: 5, values }))
}

fn build_kfrac_2t(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    kasami_fraction(p, n, ps, 2, 1)
}

fn build_kfrac_5t(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    kasami_fraction(p, n, ps, 5, 1)
}

fn build_kfrac_5t_3t(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    kasami_fraction(p, n, ps, 5, 3)
}

fn s3_decimation(p: u32, n: u32) -> Result<u64> {
    let m = n / 2;
    coprime(p, n, 3 * (p as u64).pow(m) - 2)
}

fn build_xia_s3_even(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    need(m % 2 == 0 && m % 4 != 2, "requires even m with m != 2 mod 4")?;
    let q = qp(2, m as i64);
    let qt = qi(scaled_tau(m)?);
    let pred = dist(vec![
        (-q - 1, (qi(11) * q * q - qt - qi(10) * q + 1) / 30),
        (qi(-1), (qi(3) * q * q + qt - qi(4) * q - 9) / 8),
        (q - 1, (q * q - qt + qi(6) * q + 1) / 6),
        (qi(2) * q - 1, (q * q + qt - qi(2) * q - 1) / 12),
        (qi(4) * q - 1, (q * q - qt + 1) / 120),
    ])?;
    Ok(inst(s3_decimation(p, n)?, pred))
}

fn build_dfhr_s3_odd(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    need(m % 2 == 1, "requires odd m")?;
    let q = qp(2, m as i64);
    let qt = qi(scaled_tau(m)?);
    let pred = dist(vec![
        (-q - 1, (qi(11) * q * q - qt - qi(22) * q + 1) / 30),
        (qi(-1), (qi(9) * q * q + qi(3) * qt + qi(16) * q - 23) / 24),
        (q - 1, (q * q - qt - 3) / 6),
        (qi(2) * q - 1, (q * q + qt - qi(2) * q + 11) / 12),
        (qi(3) * q - 1, (q - 2) / 3),
        (qi(4) * q - 1, (q * q - qt - qi(12) * q + 21) / 120),
    ])?;
    Ok(inst(s3_decimation(p, n)?, pred))
}

fn build_hkl_s4(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    let m = half(n)?;
    need(m >= 1, "requires m >= 1")?;
    let d = coprime(p, n, 4 * (1u64 << m) - 3)?;
    let pred = if m % 2 == 0 {
        at_most(5, 2, m, &[-1, 0, 1, 2, 4])
    } else {
        at_most(6, 2, m, &[-1, 0, 1, 2, 3, 4])
    };
    Ok(inst(d, pred))
}

fn build_xia_ternary_s3(p: u32, n: u32, _: &Params) -> Result<Instance> {
    need(p == 3, "requires p = 3")?;
    let m = half(n)?;
    need(m % 4 != 2, "requires m != 2 mod 4")?;
    let q = qp(3, m as i64);
    let s = qi(sign(m));
    let pred = dist(vec![
        (-q - 1, (qi(11) * q * q - qi(16) * q - s * q + 6) / 30),
        (qi(-1), (qi(3) * q * q + qi(2) * q + s * q - 14) / 8),
        (q - 1, (q * q - s * q + 6) / 6),
        (qi(2) * q - 1, (q * q + qi(4) * q + s * q - 6) / 12),
        (qi(4) * q - 1, (q * q - qi(6) * q - s * q + 6) / 120),
    ])?;
    Ok(inst(s3_decimation(p, n)?, pred))
}

fn build_helleseth_half(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    odd_only(p)?;
    let m = half(n)?;
    need(ip(p, n) % 4 == 1, "requires p^n = 1 mod 4")?;
    let i = param(ps, "i")?;
    need(i >= 0 && i < n as i64, "requires 0 <= i < n")?;
    let md = modulus(p, n)?;
    let d = (md / 2 + pmod(p, i as u64, md)) % md;
    let q = qi(ip(p, n));
    let h = qi(ip(p, m));
    let pred = dist(vec![
        (qi(-1), (q - 5) / 2),
        (h - 1, (q - 1) / 4),
        (-h - 1, (q - 1) / 4),
        ((q + h) / 2 - 1, qi(1)),
        ((q - h) / 2 - 1, qi(1)),
    ])?;
    Ok(inst(coprime(p, n, d)?, pred))
}

fn build_helleseth_1978(p: u32, n: u32, _: &Params) -> Result<Instance> {
    two_only(p)?;
    need(n.is_multiple_of(4) && (n / 4).is_multiple_of(2), "requires n = 4m with even m")?;
    let m = (n / 4) as i64;
    let t = |e: i64| qp(2, e);
    let pred = dist(vec![
        (t(2 * m) - 1, (t(4 * m) - t(m)) / 3),
        (qi(-1), t(4 * m - 1) - t(3 * m - 1) + t(2 * m - 1) - t(m - 1) - 2),
        (-t(2 * m) - 1, t(3 * m) - t(2 * m)),
        (-t(2 * m + 1) - 1, (t(4 * m) - qi(3) * t(3 * m) + qi(3) * t(2 * m) - t(m)) / 6),
        (t(3 * m) - 1, qi(1)),
        (t(2 * m) * (t(m) - 1) - 1, t(m)),
    ])?;
    let d = (1u64 << (2 * m)) - (1u64 << m) + 1;
    Ok(inst(coprime(p, n, d)?, pred))
}

fn build_helleseth_third(p: u32, n: u32, ps: &Params) -> Result<Instance> {
    need(p % 3 == 2, "requires p = 2 mod 3")?;
    let m = half(n)?;
    let i = param(ps, "i")?;
    need(i >= 0 && i < n as i64, "requires 0 <= i < n")?;
    let md = modulus(p, n)?;
    let third = md / 3;
    let f = (third % 3) * (pmod(p, i as u64, 3)) % 3;
    need(f != 2, "requires f != 2 mod 3")?;
    let d = (third + pmod(p, i as u64, md)) % md;
    let big = qi(ip(p, m));
    let q = big * big;
    let s = qi(sign(m));
    let a = -s * big; // (-1)^{m+1} p^m
    let rows = if f == 0 {
        vec![
            (qi(-1), (qi(4) * q + qi(2) * a - 29) / 9),
            (a - 1, (qi(2) * q - qi(2) * a - 4) / 9),
            (-a - 1, (qi(8) * q - qi(2) * a - 10) / 27),
            (qi(2) * a - 1, (q + qi(2) * a + 1) / 27),
            ((q - qi(2) * a) / 3 - 1, qi(1)),
            ((q + a) / 3 - 1, qi(2)),
        ]
    } else {
        vec![
            (qi(-1), (qi(4) * q + qi(2) * a - 20) / 9),
            (a - 1, (qi(2) * q - qi(2) * a - 4) / 9),
            (-a - 1, (qi(8) * q - qi(2) * a - 28) / 27),
            (qi(2) * a - 1, (q + qi(2) * a - 8) / 27),
            ((q - qi(2) * a) / 3 - 1, qi(2)),
            ((q + qi(4) * a) / 3 - 1, qi(1)),
        ]
    };
    Ok(inst(coprime(p, n, d)?, dist(rows)?))
}

fn build_helleseth_2003(p: u32, n: u32, _: &Params) -> Result<Instance> {
    need(n.is_multiple_of(4), "requires n = 4m")?;
    let m = n / 4;
    let pm = ip(p, m);
    need(pm % 3 != 2, "requires p^m != 2 mod 3")?;
    let md = modulus(p, n)?;
    let d = (pmod(p, 2 * m as u64, md) + md - pmod(p, m as u64, md) + 1) % md;
    let x = qi(pm);
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let pred = dist(vec![
        (-qi(2) * x2 - 1, (x4 - qi(3) * x3 + qi(3) * x2 - x) / 6),
        (-x2 - 1, x3 - x2),
        (qi(-1), (x4 - x3 + x2 - x - 4) / 2),
        (x2 - 1, (x4 - x) / 3),
        (x3 - x2 - 1, x),
        (x3 - 1, qi(1)),
    ])?;
    Ok(inst(coprime(p, n, d)?, pred))
}

// ---- catalog ----

const fn spec(name: &'static str, range: fn(u32, u32) -> (i64, i64)) -> ParamSpec {
    ParamSpec { name, range }
}

fn below_n(_: u32, n: u32) -> (i64, i64) {
    (1, n as i64 - 1)
}

fn from_zero(_: u32, n: u32) -> (i64, i64) {
    (0, n as i64 - 1)
}

fn below_half(_: u32, n: u32) -> (i64, i64) {
    (1, (n as i64 / 2 - 1).max(0))
}

fn signs(_: u32, _: u32) -> (i64, i64) {
    (-1, 1)
}

fn one_two(_: u32, _: u32) -> (i64, i64) {
    (1, 2)
}

const K: &[ParamSpec] = &[spec("k", below_n)];
const T: &[ParamSpec] = &[spec("t", below_n)];
const I: &[ParamSpec] = &[spec("i", from_zero)];
const J: &[ParamSpec] = &[spec("j", one_two)];
const RS: &[ParamSpec] = &[spec("r", below_half), spec("sign", signs)];
const NONE: &[ParamSpec] = &[];

macro_rules! family {
    ($id:expr, $prime:expr, $domain:expr, $params:expr, $status:ident, $conv:ident, $note:expr, $build:expr) => {
        FamilyDescriptor {
            id: $id,
            prime: $prime,
            domain: $domain,
            params: $params,
            status: Status::$status,
            convention: Convention::$conv,
            note: $note,
            build: $build,
        }
    };
}

static CATALOG: &[FamilyDescriptor] = &[
    family!("gold", "2", "d = 2^k + 1, n/gcd(n,k) odd", K, ProvedDistribution, PerShift, "", build_gold),
    family!("kasami-welch", "2", "d = 2^{2k} - 2^k + 1, n/gcd(n,k) odd", K, ProvedDistribution, PerShift, "", build_kasami_welch),
    family!("cusick-dobbertin-a", "2", "n = 2m, m odd, d = 2^m + 2^{(m+1)/2} + 1", NONE, ProvedDistribution, PerShift, "", build_cd_a),
    family!("cusick-dobbertin-b", "2", "n = 2m, m odd, d = 2^{m+1} + 3", NONE, ProvedDistribution, PerShift, "", build_cd_b),
    family!("welch", "2", "n = 2m + 1, d = 2^m + 3", NONE, ProvedDistribution, PerShift, "", build_welch),
    family!(
        "hollmann-xiang",
        "2",
        "n odd, d = 2^{(n-1)/2} + 2^j - 1",
        NONE,
        ProvedDistribution,
        PerShift,
        "j = (n-1)/4 for n = 1 mod 4, j = (3n-1)/4 for n = 3 mod 4",
        build_hollmann_xiang
    ),
    family!("ternary-welch", "3", "n = 2m + 1, d = 2*3^m + 1", NONE, ProvedDistribution, PerShift, "", build_ternary_welch),
    family!(
        "katz-langevin",
        "3",
        "n = 2m + 1, n | 4k - 1, d = 3^k + 2",
        K,
        ProvedDistribution,
        PerShift,
        "d = 2*3^r + 1 with n | 4r + 1 is the same class with k = n - r",
        build_katz_langevin
    ),
    family!(
        "trachtenberg-half",
        "odd",
        "d = (p^{2k} + 1)/2, n/gcd(n,k) odd",
        K,
        ProvedDistribution,
        PerShift,
        "(p^{2k} + 1)/2 is an integer reduced mod p^n - 1",
        build_trachtenberg_half
    ),
    family!("trachtenberg-kw", "odd", "d = p^{2k} - p^k + 1, n/gcd(n,k) odd", K, ProvedDistribution, PerShift, "", build_trachtenberg_kw),
    family!("niho-4val-case1", "2", "n = 2m, m even, d = 2(2^m - 1) + 1", NONE, ProvedDistribution, AllPoints, "r1 = 1", build_niho_case1),
    family!("niho-4val-case2", "2", "n = 2m, m even, d = (2^{m/2} + 1)(2^m - 1) + 2", NONE, ProvedDistribution, AllPoints, "r1 = m/2", build_niho_case2),
    family!(
        "niho-4val-case3",
        "2",
        "n = 2m, m even, 0 < t < m, gcd(t, n) = 1, d = (2^{(m+1)t} - 1)/(2^t - 1)",
        T,
        ProvedDistribution,
        AllPoints,
        "r1 = 1",
        build_niho_case3
    ),
    family!(
        "niho-4val-case4",
        "2",
        "n = 2m, 2t | m, d = ((2^m - 1)/(2^t - 1))(2^m - 1) + 2",
        T,
        ProvedDistribution,
        AllPoints,
        "r1 = t",
        build_niho_case4
    ),
    family!(
        "niho-4val-unified",
        "2",
        "n = 2m, s = 2^r (2^r ± 1)^{-1} mod 2^m + 1, v2(r) < v2(m), d = s(2^m - 1) + 1",
        RS,
        ProvedDistribution,
        AllPoints,
        "r1 = gcd(r, m)",
        build_niho_unified
    ),
    family!("helleseth-2pm", "odd", "n = 2m, p^m != 2 mod 3, d = 2p^m - 1", NONE, ProvedDistribution, PerShift, "", build_helleseth_2pm),
    family!(
        "zhang-xia-ternary",
        "3",
        "n = 3k, k odd, d = 3^{jk} + 2, j in {1, 2}",
        J,
        ProvedDistribution,
        PerShift,
        "the table parameter r equals k",
        build_ternary_3k
    ),
    family!("helleseth-2m3", "2", "n = 2m, d = 2^m + 3", NONE, ProvedDistribution, PerShift, "", build_helleseth_2m3),
    family!("dobbertin-4r", "2", "n = 4r, r odd, d = 2^{2r} + 2^r + 1", NONE, ProvedDistribution, AllPoints, "", build_dobbertin_4r),
    family!("kasami-frac-2t", "2", "n odd, d = (2^{2t} + 1)/(2^t + 1)", T, AtMostK, PerShift, "", build_kfrac_2t),
    family!("kasami-frac-5t", "2", "n odd, d = (2^{5t} + 1)/(2^t + 1)", T, AtMostK, PerShift, "", build_kfrac_5t),
    family!("kasami-frac-5t-3t", "2", "n odd, d = (2^{5t} + 1)/(2^{3t} + 1)", T, AtMostK, PerShift, "", build_kfrac_5t_3t),
    family!("xia-s3-even", "2", "n = 2m, m even, m != 2 mod 4, d = 3(2^m - 1) + 1", NONE, ProvedDistribution, PerShift, "", build_xia_s3_even),
    family!(
        "hkl-s4",
        "2",
        "n = 2m, d = 4(2^m - 1) + 1",
        NONE,
        AtMostK,
        PerShift,
        "five values for even m, six for odd m",
        build_hkl_s4
    ),
    family!("xia-ternary-s3", "3", "n = 2m, m != 2 mod 4, d = 3(3^m - 1) + 1", NONE, ProvedDistribution, PerShift, "", build_xia_ternary_s3),
    family!(
        "helleseth-half",
        "odd",
        "p^n = 1 mod 4, d = (p^n - 1)/2 + p^i",
        I,
        ProvedDistribution,
        PerShift,
        "restricted to even n, where p^{n/2} is an integer",
        build_helleseth_half
    ),
    family!(
        "helleseth-1978",
        "2",
        "n = 4m, m even, d = 2^{2m} - 2^m + 1",
        NONE,
        ProvedDistribution,
        PerShift,
        "the value with count (2^{4m} - 2^m)/3 is -1 + 2^{2m}",
        build_helleseth_1978
    ),
    family!("dfhr-s3-odd", "2", "n = 2m, m odd, d = 3(2^m - 1) + 1", NONE, ProvedDistribution, PerShift, "", build_dfhr_s3_odd),
    family!(
        "helleseth-third",
        "2 mod 3",
        "n = 2m, d = (p^n - 1)/3 + p^i, f = p^i (p^n - 1)/3 != 2 mod 3",
        I,
        ProvedDistribution,
        PerShift,
        "",
        build_helleseth_third
    ),
    family!("helleseth-2003", "any", "n = 4m, p^m != 2 mod 3, d = p^{2m} - p^m + 1", NONE, ProvedDistribution, PerShift, "", build_helleseth_2003),
];

pub fn catalog() -> &'static [FamilyDescriptor] {
    CATALOG
}

pub fn find(id: &str) -> Result<&'static FamilyDescriptor> {
    CATALOG
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

pub fn predicted_spectrum(family: &FamilyDescriptor, p: u32, n: u32, params: &Params) -> Result<Prediction> {
    Ok(family.instance(p, n, params)?.prediction)
}

/// Parses `k=1,t=2`.
pub fn parse_params(text: &str) -> Result<Params> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value, got `{kv}`")))?;
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("parameter `{k}` is not an integer")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

// ---- verification ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub value: CycInt,
    pub predicted: u64,
    pub computed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub family: String,
    pub params: Params,
    pub d: u64,
    pub status: Status,
    pub pass: bool,
    pub computed: SpectrumTable,
    pub predicted: Prediction,
    /// Count differences, or unexpected values for bounded families.
    pub diff: Vec<Mismatch>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "params": self.params,
            "d": self.d,
            "status": self.status,
            "verdict": if self.pass { "pass" } else { "fail" },
            "computed": self.computed.to_json()["entries"],
            "predicted": self.predicted.to_json(),
            "diff": self.diff.iter().map(|m| json!({
                "value": m.value.to_json(),
                "predicted": m.predicted,
                "computed": m.computed,
            })).collect::<Vec<_>>(),
        })
    }
}

fn compare(p: u32, prediction: &Prediction, status: Status, computed: &SpectrumTable) -> (bool, Vec<Mismatch>) {
    match prediction {
        Prediction::Distribution { entries } => {
            let want: BTreeMap<CycInt, u64> =
                entries.iter().map(|(&v, &c)| (CycInt::from_int(p, v), c)).collect();
            let keys: BTreeSet<&CycInt> = want.keys().chain(computed.entries().keys()).collect();
            let diff: Vec<Mismatch> = keys
                .into_iter()
                .filter_map(|v| {
                    let (a, b) = (want.get(v).copied().unwrap_or(0), computed.count(v));
                    (a != b).then(|| Mismatch {
                        value: v.clone(),
                        predicted: a,
                        computed: b,
                    })
                })
                .collect();
            (diff.is_empty(), diff)
        }
        Prediction::AtMost { k, values } => {
            let allowed: BTreeSet<CycInt> = values.iter().map(|&v| CycInt::from_int(p, v)).collect();
            let diff: Vec<Mismatch> = computed
                .entries()
                .iter()
                .filter(|(v, _)| !allowed.contains(v))
                .map(|(v, &c)| Mismatch {
                    value: v.clone(),
                    predicted: 0,
                    computed: c,
                })
                .collect();
            let exact = status != Status::ProvedValuesOnly || computed.value_count() == values.len();
            (diff.is_empty() && computed.value_count() <= *k && exact, diff)
        }
    }
}

/// Checks a computed spectrum against the family's prediction.
pub fn verify_family(
    family: &FamilyDescriptor,
    p: u32,
    n: u32,
    params: &Params,
    computed: &SpectrumTable,
) -> Result<Verdict> {
    let inst = family.instance(p, n, params)?;
    let (pass, diff) = compare(p, &inst.prediction, family.status, computed);
    Ok(Verdict {
        family: family.id.to_string(),
        params: params.clone(),
        d: inst.d,
        status: family.status,
        pass,
        computed: computed.clone(),
        predicted: inst.prediction,
        diff,
    })
}

/// Computes the spectrum for one point and verifies it.
pub fn verify_point(ctx: &FieldCtx, family: &FamilyDescriptor, params: &Params) -> Result<Verdict> {
    let d = family.decimation(ctx.p(), ctx.n(), params)?;
    let computed = spectra::spectrum(ctx, d)?;
    verify_family(family, ctx.p(), ctx.n(), params, &computed)
}

/// Every admissible point of the given families at the context's `(p, n)`,
/// with one spectrum computation per distinct `d`.
pub fn verify_all(ctx: &FieldCtx, families: &[&FamilyDescriptor]) -> Result<Vec<Verdict>> {
    let (p, n) = (ctx.p(), ctx.n());
    let points: Vec<(&FamilyDescriptor, Params, Instance)> = families
        .iter()
        .flat_map(|f| f.points(p, n).into_iter().map(move |(ps, inst)| (*f, ps, inst)))
        .collect();
    let mut cache: HashMap<u64, SpectrumTable> = HashMap::new();
    let mut out = Vec::with_capacity(points.len());
    for (f, ps, inst) in points {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(inst.d) {
            e.insert(spectra::spectrum(ctx, inst.d)?);
        }
        out.push(verify_family(f, p, n, &ps, &cache[&inst.d])?);
    }
    Ok(out)
}

// ---- coset decomposition ----

/// The spectrum of `d` from the sums `S(c) = Σ_x ω^{Tr(c x^N)}`, which
/// only depend on the coset of `c` modulo the `N`-th powers: with
/// `d' = d p^j` and `(d' - 1) N ≡ 0 mod p^n - 1`,
/// `C_d(τ) = -1 + (1/N) Σ_{j < N} S(α^{j d'} - α^{τ + j})`.
pub fn coset_spectrum_method(ctx: &FieldCtx, d: u64, big_n: u64) -> Result<SpectrumTable> {
    let q1 = ctx.group_order() as u64;
    if big_n == 0 || !q1.is_multiple_of(big_n) {
        return Err(Error::MethodInapplicable(format!("{big_n} does not divide {q1}")));
    }
    spectra::coprime_decimation(ctx, d)?;
    let d1 = (0..ctx.n())
        .map(|j| arith::mul_mod(d % q1, ctx.pow_p(j) as u64 % q1, q1))
        .find(|&d1| arith::mul_mod((d1 + q1 - 1) % q1, big_n, q1) == 0)
        .ok_or_else(|| {
            Error::MethodInapplicable(format!("(d p^j - 1) N != 0 mod {q1} for every j"))
        })?;

    let p = ctx.p();
    let pz = p as usize;
    let s = ctx.trace_seq();
    let q = ctx.order() as i64;
    // S(α^k) = 1 + N Σ_i ω^{s_{k + iN}}
    let per_coset: Vec<CycInt> = (0..big_n)
        .map(|k| {
            let mut counts = vec![0i64; pz];
            for i in (k..q1).step_by(big_n as usize) {
                counts[s[i as usize] as usize] += big_n as i64;
            }
            counts[0] += 1;
            CycInt::from_counts(p, &counts)
        })
        .collect();
    let at_zero = CycInt::from_int(p, q);
    let n_big = BigInt::from(big_n);
    let one = CycInt::one(p);
    let firsts: Vec<Elem> = (0..big_n).map(|j| ctx.exp(j * d1)).collect();

    let values: Vec<CycInt> = (0..q1)
        .into_par_iter()
        .map(|tau| {
            let mut acc = CycInt::zero(p);
            for (j, &a) in firsts.iter().enumerate() {
                let c = ctx.sub(a, ctx.exp(tau + j as u64));
                let term = match ctx.log(c) {
                    None => &at_zero,
                    Some(l) => &per_coset[(l as u64 % big_n) as usize],
                };
                acc += term;
            }
            let scaled = acc.div_exact(&n_big).expect("coset sum divisible by N");
            &scaled - &one
        })
        .collect();
    Ok(SpectrumTable::new(p, ctx.n(), d, Method::Coset, values.into_iter().map(|v| (v, 1))))
}

/// Unit shorthand for tests and examples.
pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    fn dist_of(pred: &Prediction) -> &BTreeMap<i64, u64> {
        match pred {
            Prediction::Distribution { entries } => entries,
            other => panic!("expected distribution, got {other:?}"),
        }
    }

    #[test]
    fn catalog_ids_unique_and_large() {
        let ids: BTreeSet<&str> = catalog().iter().map(|f| f.id).collect();
        assert_eq!(ids.len(), catalog().len());
        assert!(catalog().len() >= 22);
        assert!(matches!(find("nope"), Err(Error::UnknownFamily(_))));
        assert_eq!(find("dfhr-s3-odd").unwrap().status, Status::ProvedDistribution);
        assert_eq!(find("hkl-s4").unwrap().status, Status::AtMostK);
    }

    #[test]
    fn gold_prediction() {
        let g = find("gold").unwrap();
        let inst = g.instance(2, 5, &params(&[("k", 1)])).unwrap();
        assert_eq!(inst.d, 3);
        assert_eq!(
            dist_of(&inst.prediction),
            &BTreeMap::from([(-9, 6), (-1, 15), (7, 10)])
        );
        let err = g.instance(2, 6, &params(&[("k", 3)])).unwrap_err();
        assert!(err.to_string().contains("odd"), "{err}");
        assert!(g.instance(2, 5, &params(&[("t", 1)])).is_err());
        assert!(g.instance(2, 5, &Params::new()).is_err());
    }

    #[test]
    fn helleseth_half_prediction() {
        let f = find("helleseth-half").unwrap();
        let inst = f.instance(5, 2, &params(&[("i", 0)])).unwrap();
        assert_eq!(inst.d, 13);
        assert_eq!(
            dist_of(&inst.prediction),
            &BTreeMap::from([(-6, 6), (-1, 10), (4, 6), (9, 1), (14, 1)])
        );
    }

    #[test]
    fn tau_values() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(tau(1), r(1, 2));
        assert_eq!(tau(2), r(-7, 4));
        assert_eq!(tau(3), r(-11, 8));
        for m in 1..=64 {
            let t = tau(m);
            assert!(t.denom() <= &(BigInt::from(1) << m));
            let two = BigRational::from_integer(2.into());
            assert!(t <= two && t >= -two, "m={m}");
            assert_eq!(tau(m + 2), tau(m + 1) / BigRational::from_integer(2.into()) - tau(m));
        }
    }

    #[test]
    fn dfhr_six_counts_at_m3() {
        let f = find("dfhr-s3-odd").unwrap();
        let inst = f.instance(2, 6, &Params::new()).unwrap();
        assert_eq!(inst.d, 22);
        let e = dist_of(&inst.prediction);
        assert_eq!(e.values().sum::<u64>(), 63);
        let f = find("dfhr-s3-odd").unwrap();
        let e = f.instance(2, 10, &Params::new()).unwrap().prediction;
        assert_eq!(dist_of(&e).len(), 6);
    }

    #[test]
    fn tables_sum_and_balance_on_grid() {
        for (p, n) in [(2, 4), (2, 5), (2, 6), (2, 8), (2, 9), (2, 10), (2, 12), (3, 3), (3, 4), (3, 5), (3, 6), (5, 2), (5, 3), (7, 2)] {
            for f in catalog() {
                for (ps, inst) in f.points(p, n) {
                    if let Prediction::Distribution { entries } = &inst.prediction {
                        let q = (p as u64).pow(n);
                        assert_eq!(entries.values().sum::<u64>(), q - 1, "{} {ps:?}", f.id);
                        let s: i128 = entries.iter().map(|(&v, &c)| v as i128 * c as i128).sum();
                        assert_eq!(s, 1, "{} p={p} n={n} {ps:?}", f.id);
                    }
                }
            }
        }
    }

    #[test]
    fn small_grid_verifies() {
        for (p, n) in [(2, 4), (2, 5), (2, 6), (3, 3), (5, 2)] {
            let c = ctx(p, n);
            let all: Vec<&FamilyDescriptor> = catalog().iter().collect();
            for v in verify_all(&c, &all).unwrap() {
                assert!(v.pass, "{} p={p} n={n} {:?}: {:?}", v.family, v.params, v.diff);
            }
        }
    }

    #[test]
    fn kasami_welch_n9() {
        let f = find("kasami-welch").unwrap();
        let v = verify_point(&ctx(2, 9), f, &params(&[("k", 3)])).unwrap();
        assert_eq!(v.d, 57);
        assert!(v.pass);
        assert_eq!(
            v.computed.int_entries().unwrap(),
            vec![(-65, 28), (-1, 447), (63, 36)]
        );
    }

    #[test]
    fn unified_normalization() {
        let f = find("niho-4val-unified").unwrap();
        let ps = params(&[("r", 1), ("sign", -1)]);
        let inst = f.instance(2, 8, &ps).unwrap();
        assert_eq!(inst.d, 31);
        assert_eq!(dist_of(&inst.prediction)[&-1], 119);
        assert!(verify_point(&ctx(2, 8), f, &ps).unwrap().pass);
    }

    #[test]
    fn hkl_containment_m2() {
        let f = find("hkl-s4").unwrap();
        let v = verify_point(&ctx(2, 4), f, &Params::new()).unwrap();
        assert_eq!(v.d, 13);
        assert!(v.pass, "{:?}", v.diff);
    }

    #[test]
    fn r_table_matches_tau_form_when_r_agrees() {
        for m in [3u32, 5, 7] {
            let r = -scaled_tau(m).unwrap() as i64 + (2 << m) + 1;
            let by_r = dfhr_r_table(m, r).unwrap();
            let f = find("dfhr-s3-odd").unwrap();
            let by_tau = f.instance(2, 2 * m, &Params::new()).unwrap().prediction;
            assert_eq!(&by_r, dist_of(&by_tau));
        }
    }

    #[test]
    fn coset_method_examples() {
        let c = ctx(2, 8);
        let a = coset_spectrum_method(&c, 13, 5).unwrap();
        assert!(a.same_distribution(&spectra::spectrum(&c, 13).unwrap()));
        let c = ctx(5, 2);
        let a = coset_spectrum_method(&c, 13, 3).unwrap();
        assert!(a.same_distribution(&spectra::spectrum(&c, 13).unwrap()));
        let err = coset_spectrum_method(&ctx(2, 5), 3, 7).unwrap_err();
        assert!(matches!(err, Error::MethodInapplicable(_)));
        let err = coset_spectrum_method(&ctx(2, 8), 7, 5).unwrap_err();
        assert!(matches!(err, Error::MethodInapplicable(_)));
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_params("k=1, t=-2").unwrap(), params(&[("k", 1), ("t", -2)]));
        assert_eq!(parse_params("").unwrap(), Params::new());
        assert!(parse_params("k").is_err());
        assert!(parse_params("k=x").is_err());
    }
}
