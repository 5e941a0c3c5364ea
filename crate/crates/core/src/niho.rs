//! Niho exponents `d = s(p^m - 1) + 1` over GF(p^{2m}) and the reduction of
//! their Walsh values to root counts on the unit circle:
//! `W_d(a) = (N(a) - 1) p^m`, where `N(a)` counts `x` with `x^{p^m+1} = 1`
//! and `x^{2s-1} - a x^s - ā x^{s-1} + 1 = 0`.

use crate::arith;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::spectra;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NihoParams {
    pub p: u32,
    pub m: u32,
    s: u64,
}

impl NihoParams {
    /// `s` is reduced mod `p^m + 1`; negative values are allowed.
    pub fn new(p: u32, m: u32, s: i64) -> Self {
        let r = (p as i64).pow(m) + 1;
        NihoParams {
            p,
            m,
            s: s.rem_euclid(r) as u64,
        }
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// `s(p^m - 1) + 1 mod p^{2m} - 1`.
    pub fn decimation(&self) -> u64 {
        let pm = (self.p as u64).pow(self.m);
        (self.s * (pm - 1) + 1) % (pm * pm - 1)
    }

    /// The `s` of a Niho exponent, if `d ≡ 1 mod p^m - 1`.
    pub fn from_decimation(p: u32, m: u32, d: u64) -> Option<Self> {
        let pm = (p as u64).pow(m);
        let d = d % (pm * pm - 1);
        let d = if d == 0 { pm * pm - 1 } else { d };
        ((d - 1) % (pm - 1) == 0).then(|| NihoParams {
            p,
            m,
            s: ((d - 1) / (pm - 1)) % (pm + 1),
        })
    }
}

/// `d1 / d2 mod modulus`, in `[0, modulus)`; zero only when `d1 ≡ 0`.
pub fn resolve_fraction(d1: u64, d2: u64, modulus: u64) -> Result<u64> {
    let inv = arith::mod_inverse(d2 % modulus, modulus).ok_or(Error::NotInvertible {
        value: d2,
        modulus,
    })?;
    Ok(arith::mul_mod(d1 % modulus, inv, modulus))
}

/// Parses `"d"` or `"d1/d2"` and reduces it mod `modulus`.
pub fn parse_decimation(text: &str, modulus: u64) -> Result<u64> {
    let num = |t: &str| -> Result<u64> {
        let v: u128 = t
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not a decimation: `{text}`")))?;
        Ok((v % modulus as u128) as u64)
    };
    match text.split_once('/') {
        Some((a, b)) => resolve_fraction(num(a)?, num(b)?, modulus),
        None => num(text),
    }
}

fn half_degree(ctx: &FieldCtx) -> Result<u32> {
    if !ctx.n().is_multiple_of(2) {
        return Err(Error::OddDegree(ctx.n()));
    }
    Ok(ctx.n() / 2)
}

/// Root counter for one `s`, reusable across many `a`.
struct RootCounter<'a> {
    ctx: &'a FieldCtx,
    pm: u64,
    e_lead: u64,
    e_s: u64,
    e_s1: u64,
}

impl<'a> RootCounter<'a> {
    fn new(ctx: &'a FieldCtx, s: i64) -> Result<Self> {
        let m = half_degree(ctx)?;
        let pm = ctx.pow_p(m) as u64;
        let r = (pm + 1) as i64;
        Ok(RootCounter {
            ctx,
            pm,
            e_lead: (2 * s - 1).rem_euclid(r) as u64,
            e_s: s.rem_euclid(r) as u64,
            e_s1: (s - 1).rem_euclid(r) as u64,
        })
    }

    fn count(&self, a: Elem) -> u32 {
        let ctx = self.ctx;
        let abar = ctx.frobenius(a, ctx.n() / 2);
        let (na, nabar) = (ctx.neg(a), ctx.neg(abar));
        let step = self.pm - 1;
        (0..=self.pm)
            .filter(|&k| {
                let lx = k * step;
                let t0 = ctx.exp(lx * self.e_lead);
                let t1 = ctx.mul(na, ctx.exp(lx * self.e_s));
                let t2 = ctx.mul(nabar, ctx.exp(lx * self.e_s1));
                let sum = ctx.add(ctx.add(t0, t1), ctx.add(t2, Elem::ONE));
                sum.is_zero()
            })
            .count() as u32
    }
}

/// `N(a)`: roots on the unit circle of `x^{2s-1} - a x^s - ā x^{s-1} + 1`.
pub fn count_unit_roots(ctx: &FieldCtx, s: i64, a: Elem) -> Result<u32> {
    Ok(RootCounter::new(ctx, s)?.count(a))
}

/// `N(α^τ)` for every `τ`.
pub fn unit_root_counts(ctx: &FieldCtx, s: i64) -> Result<Vec<u32>> {
    let rc = RootCounter::new(ctx, s)?;
    Ok(ctx.exp_table().par_iter().map(|&a| rc.count(Elem(a))).collect())
}

/// How many nonzero `a` have each root count.
pub fn root_histogram(ctx: &FieldCtx, s: i64) -> Result<BTreeMap<u32, u64>> {
    let mut h = BTreeMap::new();
    for c in unit_root_counts(ctx, s)? {
        *h.entry(c).or_insert(0) += 1;
    }
    Ok(h)
}

/// `{(N(a) - 1) p^m : a ≠ 0}`.
pub fn niho_value_set(ctx: &FieldCtx, s: i64) -> Result<BTreeSet<i64>> {
    let pm = ctx.pow_p(half_degree(ctx)?) as i64;
    Ok(root_histogram(ctx, s)?
        .keys()
        .map(|&c| (c as i64 - 1) * pm)
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub p: u32,
    pub m: u32,
    pub s: i64,
    pub d: u64,
    pub points_checked: u64,
    /// `(τ, W(α^τ), (N(α^τ) - 1) p^m)` where they differ.
    pub mismatches: Vec<(u64, CycInt, CycInt)>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the Walsh table of `x^d` with the root counts at every `a ≠ 0`.
/// `d` need not be invertible.
pub fn check_identity(ctx: &FieldCtx, s: i64) -> Result<IdentityReport> {
    let m = half_degree(ctx)?;
    let params = NihoParams::new(ctx.p(), m, s);
    let d = params.decimation();
    let walsh = spectra::walsh_power_table(ctx, if d == 0 { ctx.group_order() as u64 } else { d })?;
    let counts = unit_root_counts(ctx, s)?;
    let pm = ctx.pow_p(m) as i64;
    let mismatches = counts
        .iter()
        .enumerate()
        .filter_map(|(tau, &c)| {
            let w = walsh.at_log(tau as u64);
            let predicted = CycInt::from_int(ctx.p(), (c as i64 - 1) * pm);
            (w != predicted).then_some((tau as u64, w, predicted))
        })
        .collect();
    Ok(IdentityReport {
        p: ctx.p(),
        m,
        s,
        d,
        points_checked: counts.len() as u64,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    #[test]
    fn fractions() {
        assert_eq!(resolve_fraction(5, 3, 31).unwrap(), 12);
        assert_eq!(resolve_fraction(40, 1, 31).unwrap(), 9);
        assert!(matches!(
            resolve_fraction(1, 3, 63),
            Err(Error::NotInvertible { value: 3, modulus: 63 })
        ));
        assert_eq!(parse_decimation("57/3", 31).unwrap(), 19);
        assert_eq!(parse_decimation(" 40 ", 31).unwrap(), 9);
        assert!(parse_decimation("x/3", 31).is_err());
    }

    #[test]
    fn kasami_welch_fraction_matches_integer_form() {
        // (2^{3k} + 1)/(2^k + 1) = 2^{2k} - 2^k + 1
        for k in 1..=2u32 {
            let (a, b) = ((1u64 << (3 * k)) + 1, (1u64 << k) + 1);
            let d = resolve_fraction(a, b, 31).unwrap();
            assert_eq!(d, (1 << (2 * k)) - (1 << k) + 1);
        }
        let t = spectra::spectrum(&ctx(2, 5), 13).unwrap();
        assert_eq!(t.int_entries().unwrap(), vec![(-9, 6), (-1, 15), (7, 10)]);
    }

    #[test]
    fn params_reduce_s() {
        let a = NihoParams::new(2, 4, 2);
        assert_eq!(a.decimation(), 31);
        assert_eq!(NihoParams::new(2, 4, 2 + 17), a);
        assert_eq!(NihoParams::new(2, 4, -15), a);
        assert_eq!(NihoParams::from_decimation(2, 4, 31), Some(a));
        assert_eq!(NihoParams::from_decimation(2, 4, 32), None);
    }

    #[test]
    fn identity_binary_m3_s3() {
        let r = check_identity(&ctx(2, 6), 3).unwrap();
        assert_eq!(r.points_checked, 63);
        assert!(r.holds(), "{:?}", r.mismatches);
    }

    #[test]
    fn degenerate_s1() {
        let c = ctx(2, 6);
        let r = check_identity(&c, 1).unwrap();
        assert!(r.holds());
        let h = root_histogram(&c, 1).unwrap();
        // W = 2^6 once, 0 elsewhere
        assert_eq!(h, BTreeMap::from([(1, 62), (9, 1)]));
    }

    #[test]
    fn hkl_root_counts() {
        let c = ctx(2, 8);
        let counts: BTreeSet<u32> = root_histogram(&c, 4).unwrap().keys().copied().collect();
        assert!(counts.is_subset(&BTreeSet::from([0, 1, 2, 3, 5])), "{counts:?}");
    }

    #[test]
    fn value_sets() {
        let vs = niho_value_set(&ctx(2, 8), 2).unwrap();
        assert_eq!(vs, BTreeSet::from([-16, 0, 16, 32]));
        let vs = niho_value_set(&ctx(3, 4), 2).unwrap();
        assert!(vs.is_subset(&BTreeSet::from([-9, 0, 9, 18])));
        let vs = niho_value_set(&ctx(2, 4), 3).unwrap();
        assert!(vs.iter().all(|v| (-4..=16).contains(v) && v % 4 == 0));
    }

    #[test]
    fn root_count_sum_consistency() {
        // Σ_{a ≠ 0} (N(a) - 1) p^m = p^n - W(0)
        for (p, n, s) in [(2, 6, 3), (3, 4, 2), (2, 8, 5)] {
            let c = ctx(p, n);
            let pm = c.pow_p(n / 2) as i64;
            let total: i64 = unit_root_counts(&c, s).unwrap().iter().map(|&k| (k as i64 - 1) * pm).sum();
            let d = NihoParams::new(p, n / 2, s).decimation();
            let w0 = spectra::walsh_power_table(&c, d).unwrap().at_zero().as_i64().unwrap();
            assert_eq!(total + w0, c.order() as i64);
        }
    }

    #[test]
    fn odd_degree_rejected() {
        assert!(matches!(count_unit_roots(&ctx(2, 5), 2, Elem::ONE), Err(Error::OddDegree(5))));
    }
}
