//! Prime-power fields GF(p^n) with materialized exp/log tables.
//!
//! Elements are packed coefficient vectors in the polynomial basis
//! `1, α, …, α^{n-1}`: the element `Σ c_i α^i` is stored as the integer
//! `Σ c_i p^i`.

use crate::arith;
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::path::Path;

/// Largest order for which exp/log tables are built.
pub const TABLE_LIMIT: u64 = 1 << 24;
/// Largest order accepted for primitivity testing.
pub const ARITH_LIMIT: u64 = 1 << 40;
/// Primes up to this bound are accepted as ground-field characteristics.
pub const PRIME_LIMIT: u64 = 1 << 16;

/// A field element as a packed base-p coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Characteristic `p`, degree `n` and the primitive modulus
/// `x^n + c_{n-1} x^{n-1} + … + c_0`, stored as `c_0..c_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    coeffs: Vec<u32>,
}

impl FieldSpec {
    /// Validates primality of `p`, `c_0 != 0` and primitivity of the modulus.
    pub fn new(p: u32, n: u32, coeffs: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if n == 0 || coeffs.len() != n as usize {
            return Err(Error::InvalidSpec(format!(
                "expected {n} coefficients, got {}",
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidSpec(format!("coefficient {c} is not reduced mod {p}")));
        }
        if coeffs[0] == 0 {
            return Err(Error::InvalidSpec("constant coefficient is zero".into()));
        }
        if !is_primitive(p, n, &coeffs)? {
            return Err(Error::NotPrimitive);
        }
        Ok(FieldSpec { p, n, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `c_0..c_{n-1}`; the leading 1 is implied.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = vec![format!("x^{}", self.n)];
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if self.n == 1 {
            terms[0] = "x".into();
        }
        write!(f, "{}", terms.join(" + "))
    }
}

fn check_prime(p: u32) -> Result<()> {
    if (p as u64) >= PRIME_LIMIT || !arith::is_prime(p as u64) {
        return Err(Error::CompositeP(p as u64));
    }
    Ok(())
}

fn bounded_order(p: u32, n: u32, bound: u64) -> Result<u64> {
    let too_large = || Error::TooLarge {
        p: p as u64,
        n,
        bound_log2: bound.trailing_zeros(),
    };
    let q = arith::checked_pow(p as u64, n).ok_or_else(too_large)?;
    if q > bound {
        return Err(too_large());
    }
    Ok(q)
}

/// Polynomials mod `c(x)` over GF(p), used only for primitivity tests.
struct PolyRing<'a> {
    p: u64,
    c: &'a [u32],
}

impl PolyRing<'_> {
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.c.len();
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            for (i, &ci) in self.c.iter().enumerate() {
                let sub = t * ci as u64 % self.p;
                prod[k - n + i] = (prod[k - n + i] + self.p - sub) % self.p;
            }
        }
        prod.truncate(n);
        prod
    }

    fn x(&self) -> Vec<u64> {
        let n = self.c.len();
        let mut v = vec![0u64; n];
        if n == 1 {
            v[0] = (self.p - self.c[0] as u64) % self.p;
        } else {
            v[1] = 1;
        }
        v
    }

    fn pow_x(&self, mut e: u64) -> Vec<u64> {
        let mut acc = vec![0u64; self.c.len()];
        acc[0] = 1;
        let mut base = self.x();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn is_one(v: &[u64]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// Whether `x` has multiplicative order `p^n - 1` modulo the monic polynomial
/// with low coefficients `coeffs`.
pub fn is_primitive(p: u32, n: u32, coeffs: &[u32]) -> Result<bool> {
    check_prime(p)?;
    let q = bounded_order(p, n, ARITH_LIMIT)?;
    if coeffs.len() != n as usize || coeffs[0] == 0 {
        return Ok(false);
    }
    let ring = PolyRing { p: p as u64, c: coeffs };
    if !is_one(&ring.pow_x(q - 1)) {
        return Ok(false);
    }
    for r in arith::prime_divisors(q - 1)? {
        if is_one(&ring.pow_x((q - 1) / r)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The primitive polynomial whose coefficient vector `(c_{n-1}, …, c_0)`
/// is lexicographically least.
pub fn find_primitive_polynomial(p: u32, n: u32) -> Result<FieldSpec> {
    check_prime(p)?;
    let q = bounded_order(p, n, ARITH_LIMIT)?;
    for v in 1..q {
        if v % p as u64 == 0 {
            continue;
        }
        let coeffs: Vec<u32> = digits(v, p, n);
        if is_primitive(p, n, &coeffs)? {
            return Ok(FieldSpec { p, n, coeffs });
        }
    }
    unreachable!("every finite field has a primitive element")
}

fn digits(mut v: u64, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect()
}

/// Parses modulus overrides, one `p n c_0 … c_{n-1}` line each.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_modulus_overrides(text: &str) -> Result<Vec<FieldSpec>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(str::parse::<u32>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if nums.len() < 3 || nums.len() != 2 + nums[1] as usize {
            return Err(Error::Parse(format!(
                "line {}: expected `p n c_0 .. c_(n-1)`",
                lineno + 1
            )));
        }
        out.push(FieldSpec::new(nums[0], nums[1], nums[2..].to_vec())?);
    }
    Ok(out)
}

pub fn load_modulus_overrides(path: &Path) -> Result<Vec<FieldSpec>> {
    parse_modulus_overrides(&std::fs::read_to_string(path)?)
}

/// The override for `(p, n)` if present, else the canonical modulus.
pub fn resolve_spec(p: u32, n: u32, overrides: &[FieldSpec]) -> Result<FieldSpec> {
    match overrides.iter().find(|s| s.p == p && s.n == n) {
        Some(s) => Ok(s.clone()),
        None => find_primitive_polynomial(p, n),
    }
}

/// GF(p^n) with exp/log tables, trace of the basis, and the m-sequence
/// `s_t = Tr(α^t)`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    pow_p: Vec<u32>,
    basis_trace: Vec<u8>,
    trace_mask: u32,
    seq: Vec<u8>,
}

impl FieldCtx {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let q = bounded_order(spec.p, spec.n, TABLE_LIMIT)? as u32;
        let p = spec.p;
        let n = spec.n as usize;
        let pow_p: Vec<u32> = (0..=n).map(|i| p.pow(i as u32)).collect();
        let top = pow_p[n - 1];
        // packed -t·c(x) without the leading term, for each top digit t
        let reduce: Vec<u32> = (0..p)
            .map(|t| {
                spec.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| ((p - t * c % p) % p) * pow_p[i])
                    .sum()
            })
            .collect();

        let mut ctx = FieldCtx {
            spec,
            q,
            exp: Vec::with_capacity(q as usize - 1),
            log: vec![u32::MAX; q as usize],
            pow_p,
            basis_trace: Vec::new(),
            trace_mask: 0,
            seq: Vec::new(),
        };
        let mut cur = 1u32;
        for i in 0..q - 1 {
            if ctx.log[cur as usize] != u32::MAX {
                return Err(Error::NotPrimitive);
            }
            ctx.exp.push(cur);
            ctx.log[cur as usize] = i;
            let t = cur / top;
            let shifted = (cur % top) * p;
            cur = ctx.add(Elem(shifted), Elem(reduce[t as usize])).0;
        }
        if cur != 1 {
            return Err(Error::NotPrimitive);
        }

        ctx.basis_trace = (0..n as u64)
            .map(|i| {
                let t = ctx.conjugate_sum(ctx.exp(i), 1, ctx.spec.n);
                debug_assert!(t.0 < p);
                t.0 as u8
            })
            .collect();
        ctx.trace_mask = ctx
            .basis_trace
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &t)| m | (t as u32) << i);
        ctx.seq = ctx.exp.iter().map(|&x| ctx.trace(Elem(x))).collect();
        Ok(ctx)
    }

    /// The field built on the canonical (lexicographically least) modulus.
    pub fn canonical(p: u32, n: u32) -> Result<Self> {
        bounded_order(p, n, TABLE_LIMIT)?;
        Self::new(find_primitive_polynomial(p, n)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    /// `p^n`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// `p^n - 1`, the period of the multiplicative group.
    pub fn group_order(&self) -> u32 {
        self.q - 1
    }

    /// `p^i` for `0 <= i <= n`.
    pub fn pow_p(&self, i: u32) -> u32 {
        self.pow_p[i as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp.iter().map(|&x| Elem(x))
    }

    /// `α^i`, exponent taken mod `p^n - 1`.
    pub fn exp(&self, i: u64) -> Elem {
        Elem(self.exp[(i % (self.q as u64 - 1)) as usize])
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    /// Discrete log base α; `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u32> {
        match self.log[x.0 as usize] {
            u32::MAX => None,
            l => Some(l),
        }
    }

    pub fn digits(&self, x: Elem) -> Vec<u32> {
        digits(x.0 as u64, self.spec.p, self.spec.n)
    }

    pub fn from_digits(&self, ds: &[u32]) -> Elem {
        let p = self.spec.p;
        Elem(ds.iter().rev().fold(0u32, |acc, &d| acc * p + d % p))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut scale) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale *= p;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut scale) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * scale;
            scale *= p;
            x /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match (self.log(a), self.log(b)) {
            (Some(i), Some(j)) => self.exp(i as u64 + j as u64),
            _ => Elem::ZERO,
        }
    }

    /// Multiplies by an element of the prime field.
    pub fn scale(&self, a: Elem, k: u32) -> Elem {
        self.mul(a, Elem(k % self.spec.p))
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.log(a)
            .map(|i| self.exp((self.q as u64 - 1 - i as u64) % (self.q as u64 - 1)))
    }

    /// `a^{-1}` with the convention `0 ↦ 0`.
    pub fn inv0(&self, a: Elem) -> Elem {
        self.inv(a).unwrap_or(Elem::ZERO)
    }

    /// `a^e`, with `0^0 = 1` and `0^e = 0` for `e > 0`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match self.log(a) {
            Some(i) => {
                let m = self.q as u64 - 1;
                self.exp(arith::mul_mod(i as u64, e % m, m))
            }
            None if e == 0 => Elem::ONE,
            None => Elem::ZERO,
        }
    }

    /// `a^{p^k}`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        let e = (self.spec.p as u64).pow(k % self.spec.n);
        self.pow(a, e)
    }

    fn conjugate_sum(&self, x: Elem, step: u32, n: u32) -> Elem {
        (0..n / step).fold(Elem::ZERO, |acc, j| self.add(acc, self.frobenius(x, j * step)))
    }

    /// Absolute trace to GF(p), as a symbol in `0..p`.
    pub fn trace(&self, x: Elem) -> u8 {
        let p = self.spec.p;
        if p == 2 {
            return ((x.0 & self.trace_mask).count_ones() & 1) as u8;
        }
        let mut v = x.0;
        let mut acc = 0u32;
        for &t in &self.basis_trace {
            acc += (v % p) * t as u32;
            v /= p;
        }
        (acc % p) as u8
    }

    /// `Tr^n_m(x) = x + x^{p^m} + … + x^{p^{n-m}}`.
    pub fn relative_trace(&self, x: Elem, m: u32) -> Result<Elem> {
        if m == 0 || !self.spec.n.is_multiple_of(m) {
            return Err(Error::NotASubfield { m, n: self.spec.n });
        }
        Ok(self.conjugate_sum(x, m, self.spec.n))
    }

    /// Whether `x` lies in the subfield GF(p^m).
    pub fn in_subfield(&self, x: Elem, m: u32) -> bool {
        self.frobenius(x, m) == x
    }

    /// The m-sequence `s_t = Tr(α^t)` over one period.
    pub fn trace_seq(&self) -> &[u8] {
        &self.seq
    }

    /// `Tr(α^t)`, index taken mod `p^n - 1`.
    pub fn s(&self, t: u64) -> u8 {
        self.seq[(t % (self.q as u64 - 1)) as usize]
    }

    pub fn unit_circle(&self) -> Result<UnitCircle> {
        if !self.spec.n.is_multiple_of(2) {
            return Err(Error::OddDegree(self.spec.n));
        }
        let m = self.spec.n / 2;
        let step = self.pow_p(m) as u64 - 1;
        let elements = (0..=step + 1).map(|k| self.exp(k * step)).collect();
        Ok(UnitCircle { m, elements })
    }
}

/// The `p^m + 1` elements of norm 1 in GF(p^{2m}).
#[derive(Clone, Debug)]
pub struct UnitCircle {
    pub m: u32,
    pub elements: Vec<Elem>,
}

impl UnitCircle {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}
