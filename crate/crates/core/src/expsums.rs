//! Kloosterman, cubic and mixed exponential sums over finite fields.
//!
//! Inverses use the convention `0^{-1} = 0`. Sums written over the nonzero
//! elements say so; the others run over the whole field.

use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

fn binary(ctx: &FieldCtx) -> Result<()> {
    if ctx.p() != 2 {
        return Err(Error::OutOfDomain("this sum is defined over GF(2^n)".into()));
    }
    Ok(())
}

fn sign(t: u8) -> i64 {
    if t == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_x (-1)^{Tr f(x)}` over the chosen elements, in parallel.
fn binary_sum<F>(ctx: &FieldCtx, nonzero_only: bool, f: F) -> i64
where
    F: Fn(Elem) -> Elem + Sync,
{
    let start = u32::from(nonzero_only);
    (start..ctx.order())
        .into_par_iter()
        .map(|x| sign(ctx.trace(f(Elem(x)))))
        .sum()
}

/// `K(a) = Σ_{x ∈ F} ω^{Tr(x^{-1} + a x)}` for any characteristic.
pub fn kloosterman_cyc(ctx: &FieldCtx, a: Elem) -> CycInt {
    let p = ctx.p() as usize;
    let counts = (0..ctx.order())
        .into_par_iter()
        .fold(
            || vec![0u64; p],
            |mut acc, x| {
                let x = Elem(x);
                acc[ctx.trace(ctx.add(ctx.inv0(x), ctx.mul(a, x))) as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; p],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    CycInt::from_counts(ctx.p(), &counts)
}

/// Binary Kloosterman sum, including the `x = 0` term.
pub fn kloosterman(ctx: &FieldCtx, a: Elem) -> Result<i64> {
    binary(ctx)?;
    Ok(binary_sum(ctx, false, |x| ctx.add(ctx.inv0(x), ctx.mul(a, x))))
}

/// `C(b, a) = Σ_x (-1)^{Tr(b x^3 + a x)}`.
pub fn cubic_sum(ctx: &FieldCtx, b: Elem, a: Elem) -> Result<i64> {
    binary(ctx)?;
    Ok(binary_sum(ctx, false, |x| ctx.add(ctx.mul(b, ctx.pow(x, 3)), ctx.mul(a, x))))
}

/// `G(b, a) = Σ_{x ≠ 0} (-1)^{Tr(b x^3 + a x^{-1})}`.
pub fn g_sum(ctx: &FieldCtx, b: Elem, a: Elem) -> Result<i64> {
    binary(ctx)?;
    Ok(binary_sum(ctx, true, |x| ctx.add(ctx.mul(b, ctx.pow(x, 3)), ctx.mul(a, ctx.inv0(x)))))
}

/// `R = Σ_{y ∉ GF(2)} (-1)^{Tr(1/y)} K(1/(y^3 + y))` over GF(2^m), by direct
/// evaluation.
pub fn r_sum(ctx: &FieldCtx) -> Result<i64> {
    binary(ctx)?;
    let klo: Vec<i64> = (0..ctx.order())
        .into_par_iter()
        .map(|a| kloosterman_seq(ctx, Elem(a)))
        .collect();
    Ok((2..ctx.order())
        .map(|y| {
            let y = Elem(y);
            let arg = ctx.inv0(ctx.add(ctx.pow(y, 3), y));
            sign(ctx.trace(ctx.inv0(y))) * klo[arg.0 as usize]
        })
        .sum())
}

fn kloosterman_seq(ctx: &FieldCtx, a: Elem) -> i64 {
    ctx.elements()
        .map(|x| sign(ctx.trace(ctx.add(ctx.inv0(x), ctx.mul(a, x)))))
        .sum()
}

/// Whether a sum value is divisible by `k` in `Z[ω]`.
pub fn divisible_by(v: &CycInt, k: u32) -> bool {
    v.div_exact(&BigInt::from(k)).is_some()
}

/// Closed range `[1 - 2^{m/2+1}, 1 + 2^{m/2+1}]` test for a binary
/// Kloosterman value that includes the `x = 0` term.
pub fn within_weil_range(m: u32, k: i64) -> bool {
    let bound = 2f64.powf(m as f64 / 2.0 + 1.0);
    ((k - 1) as f64).abs() <= bound
}

#[derive(Clone, Debug, Serialize)]
pub struct KloostermanReport {
    pub p: u32,
    pub m: u32,
    pub modulus: u32,
    pub points: u64,
    /// Values of `a` (packed) whose sum is not divisible.
    pub not_divisible: Vec<u32>,
    /// Values of `a` outside the Weil range (binary only).
    pub outside_weil: Vec<u32>,
}

impl KloostermanReport {
    pub fn holds(&self) -> bool {
        self.not_divisible.is_empty() && self.outside_weil.is_empty()
    }
}

/// Checks `K(a) ≡ 0 mod p` (`mod 4` for `p = 2`) over every `a ≠ 0`, and
/// the Weil range in the binary case.
pub fn kloosterman_check(ctx: &FieldCtx) -> KloostermanReport {
    let modulus = if ctx.p() == 2 { 4 } else { ctx.p() };
    let mut report = KloostermanReport {
        p: ctx.p(),
        m: ctx.n(),
        modulus,
        points: ctx.group_order() as u64,
        not_divisible: vec![],
        outside_weil: vec![],
    };
    let values: Vec<(u32, CycInt)> = (1..ctx.order())
        .map(|a| (a, kloosterman_cyc(ctx, Elem(a))))
        .collect();
    for (a, v) in values {
        if !divisible_by(&v, modulus) {
            report.not_divisible.push(a);
        }
        if ctx.p() == 2 {
            let k = v.as_i64().expect("binary sums are integers");
            if !within_weil_range(ctx.n(), k) {
                report.outside_weil.push(a);
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Op6Report {
    pub n: u32,
    pub k: u32,
    /// `Σ_{x≠0} (-1)^{Tr(x^{2^k+1} + x^{-1})}` and the same with `x^3`.
    pub first: (i64, i64),
    /// `Σ_{x≠0} (-1)^{Tr(x + x^{-1})}` and the sum over `v` of the rational
    /// function `(v^{2^k} + 1) v^{2^k} / (v^{2^k} + v)^{2^k+1}`.
    pub second: (i64, i64),
}

impl Op6Report {
    pub fn first_holds(&self) -> bool {
        self.first.0 == self.first.1
    }

    pub fn second_holds(&self) -> bool {
        self.second.0 == self.second.1
    }

    pub fn holds(&self) -> bool {
        self.first_holds() && self.second_holds()
    }
}

/// Both sum identities for odd `n` and `gcd(k, n) = 1`.
pub fn op6_check(ctx: &FieldCtx, k: u32) -> Result<Op6Report> {
    binary(ctx)?;
    let n = ctx.n();
    if n.is_multiple_of(2) {
        return Err(Error::OutOfDomain(format!("n = {n} must be odd")));
    }
    if k == 0 || crate::arith::gcd(k as u64, n as u64) != 1 {
        return Err(Error::OutOfDomain(format!("gcd({k}, {n}) must be 1")));
    }
    let e = (1u64 << k) + 1;
    let lhs1 = binary_sum(ctx, true, |x| ctx.add(ctx.pow(x, e), ctx.inv0(x)));
    let rhs1 = binary_sum(ctx, true, |x| ctx.add(ctx.pow(x, 3), ctx.inv0(x)));
    let lhs2 = binary_sum(ctx, true, |x| ctx.add(x, ctx.inv0(x)));
    let rhs2 = binary_sum(ctx, true, |v| {
        let vk = ctx.frobenius(v, k);
        let num = ctx.mul(ctx.add(vk, Elem::ONE), vk);
        let den = ctx.pow(ctx.add(vk, v), e);
        ctx.mul(num, ctx.inv0(den))
    });
    Ok(Op6Report {
        n,
        k,
        first: (lhs1, rhs1),
        second: (lhs2, rhs2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    fn brute(c: &FieldCtx, f: impl Fn(Elem) -> Elem, skip_zero: bool) -> i64 {
        c.elements()
            .filter(|x| !(skip_zero && x.is_zero()))
            .map(|x| if c.trace(f(x)) == 0 { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn kloosterman_basics() {
        for m in 2..=8 {
            let c = ctx(2, m);
            assert_eq!(kloosterman(&c, Elem::ZERO).unwrap(), 0);
            for a in c.elements() {
                let k = kloosterman(&c, a).unwrap();
                assert_eq!(k, brute(&c, |x| c.add(c.inv0(x), c.mul(a, x)), false));
                assert_eq!(kloosterman_cyc(&c, a).as_i64().unwrap(), k);
            }
        }
    }

    #[test]
    fn divisibility_and_weil() {
        for m in 2..=8 {
            assert!(kloosterman_check(&ctx(2, m)).holds(), "m={m}");
        }
        for m in 1..=4 {
            let r = kloosterman_check(&ctx(3, m));
            assert!(r.holds(), "{r:?}");
        }
        // the x = 0 term shifts the centre to 1
        assert!(within_weil_range(5, 12));
        assert!(!within_weil_range(5, -12));
    }

    #[test]
    fn cubic_and_g() {
        let c = ctx(2, 5);
        let one = Elem::ONE;
        for a in c.nonzero() {
            assert_eq!(cubic_sum(&c, Elem::ZERO, a).unwrap(), 0);
            assert_eq!(g_sum(&c, Elem::ZERO, a).unwrap(), -1);
            assert_eq!(g_sum(&c, a, Elem::ZERO).unwrap(), -1);
            assert_eq!(cubic_sum(&c, a, Elem::ZERO).unwrap(), 0);
        }
        let want = brute(&c, |x| c.add(c.pow(x, 3), x), false);
        assert_eq!(cubic_sum(&c, one, one).unwrap(), want);
        let want = brute(&c, |x| c.add(c.pow(x, 3), c.inv0(x)), true);
        assert_eq!(g_sum(&c, one, one).unwrap(), want);
    }

    #[test]
    fn r_sum_direct_values() {
        let want = [(3, 12), (5, -60), (7, 252)];
        for (m, r) in want {
            let c = ctx(2, m);
            assert_eq!(r_sum(&c).unwrap(), r);
            // nested evaluation without the Kloosterman table
            let nested: i64 = (2..c.order())
                .map(Elem)
                .map(|y| {
                    let a = c.inv0(c.add(c.pow(y, 3), y));
                    let k = brute(&c, |x| c.add(c.inv0(x), c.mul(a, x)), false);
                    if c.trace(c.inv0(y)) == 0 { k } else { -k }
                })
                .sum();
            assert_eq!(nested, r);
        }
    }

    #[test]
    fn op6_values() {
        let cases = [(5, 2, -9, 11), (7, 2, -41, -13), (7, 3, -41, -13), (9, 2, 7, -5), (11, 3, 23, 67)];
        for (n, k, first, second) in cases {
            let r = op6_check(&ctx(2, n), k).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!((r.first.0, r.second.0), (first, second));
        }
        let r = op6_check(&ctx(2, 5), 1).unwrap();
        assert!(r.first_holds());
        assert!(op6_check(&ctx(2, 6), 1).is_err());
        assert!(op6_check(&ctx(2, 9), 3).is_err());
    }
}
