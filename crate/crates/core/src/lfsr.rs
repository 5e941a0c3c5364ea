//! m-sequences from the trace form and from the linear recursion, plus
//! Golomb's randomness postulates as checkable properties.

use crate::arith;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldSpec};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Origin {
    /// `s_t = Tr(α^t)` for the given modulus.
    Trace { modulus: Vec<u32> },
    /// Linear recursion with the modulus as characteristic polynomial.
    Recursion {
        modulus: Vec<u32>,
        initial_state: Vec<u8>,
    },
    /// `t ↦ s_{dt}` of another sequence.
    Decimation { d: u64 },
    /// Supplied directly.
    Raw,
}

/// One period of a p-ary sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSeq {
    pub p: u32,
    pub n: u32,
    pub symbols: Vec<u8>,
    pub origin: Origin,
}

impl MSeq {
    /// Wraps arbitrary symbols, e.g. to test the Golomb checks on
    /// sequences that are not m-sequences.
    pub fn raw(p: u32, n: u32, symbols: Vec<u8>) -> Self {
        MSeq {
            p,
            n,
            symbols,
            origin: Origin::Raw,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Smallest `τ` with `self[t] = other[t + τ]` for all `t`.
    pub fn shift_relative_to(&self, other: &MSeq) -> Option<usize> {
        find_rotation(&other.symbols, &self.symbols)
    }

    /// Rotates left by `tau`, so that the result at `t` is `self[t + τ]`.
    pub fn rotated(&self, tau: usize) -> MSeq {
        let mut symbols = self.symbols.clone();
        if !symbols.is_empty() {
            symbols.rotate_left(tau % self.len());
        }
        MSeq { symbols, ..self.clone() }
    }

    pub fn to_digits(&self) -> String {
        self.symbols.iter().map(|&s| char::from_digit(s as u32, 36).unwrap_or('?')).collect()
    }
}

pub fn generate_trace(ctx: &FieldCtx) -> MSeq {
    MSeq {
        p: ctx.p(),
        n: ctx.n(),
        symbols: ctx.trace_seq().to_vec(),
        origin: Origin::Trace {
            modulus: ctx.spec().coeffs().to_vec(),
        },
    }
}

/// One period of `s_{t+n} = -(c_{n-1} s_{t+n-1} + … + c_0 s_t)`.
pub fn generate_recursion(spec: &FieldSpec, initial_state: &[u8]) -> Result<MSeq> {
    let (p, n) = (spec.p(), spec.n() as usize);
    if initial_state.len() != n {
        return Err(Error::InvalidSpec(format!(
            "initial state needs {n} symbols, got {}",
            initial_state.len()
        )));
    }
    if initial_state.iter().any(|&s| s as u32 >= p) {
        return Err(Error::InvalidSpec(format!("initial state symbols must be below {p}")));
    }
    if initial_state.iter().all(|&s| s == 0) {
        return Err(Error::ZeroState);
    }
    let period = spec.order() as usize - 1;
    let c = spec.coeffs();
    let mut s: Vec<u8> = initial_state.to_vec();
    s.reserve(period);
    for t in 0..period.saturating_sub(n) {
        let acc: u32 = (0..n).map(|i| c[i] * s[t + i] as u32).sum();
        s.push(((p - acc % p) % p) as u8);
    }
    s.truncate(period);
    Ok(MSeq {
        p,
        n: n as u32,
        symbols: s,
        origin: Origin::Recursion {
            modulus: c.to_vec(),
            initial_state: initial_state.to_vec(),
        },
    })
}

/// `t ↦ s_{dt}`.
pub fn decimate(seq: &MSeq, d: u64) -> Result<MSeq> {
    let len = seq.len() as u64;
    if arith::gcd(d % len.max(1), len) != 1 {
        return Err(Error::NotCoprime { d, modulus: len });
    }
    let step = d % len;
    let mut idx = 0u64;
    let symbols = (0..len)
        .map(|_| {
            let s = seq.symbols[idx as usize];
            idx = (idx + step) % len;
            s
        })
        .collect();
    Ok(MSeq {
        symbols,
        origin: Origin::Decimation { d },
        ..seq.clone()
    })
}

/// Position of `needle` as a rotation of `hay`, by KMP over `hay ++ hay`.
fn find_rotation(hay: &[u8], needle: &[u8]) -> Option<usize> {
    let n = needle.len();
    if n != hay.len() {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    k = 0;
    for (i, &c) in hay.iter().chain(hay.iter()).enumerate().take(2 * n - 1) {
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == n {
            return Some(i + 1 - n);
        }
    }
    None
}

/// Outcome of the six Golomb checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GolombReport {
    pub span: bool,
    pub decimation: bool,
    pub shift_and_subtract: bool,
    pub balance: bool,
    pub autocorrelation: bool,
    /// Binary sequences only.
    pub runs: Option<bool>,
}

impl GolombReport {
    pub fn all_hold(&self) -> bool {
        self.span
            && self.decimation
            && self.shift_and_subtract
            && self.balance
            && self.autocorrelation
            && self.runs.unwrap_or(true)
    }
}

fn expected_period(seq: &MSeq) -> Option<usize> {
    arith::checked_pow(seq.p as u64, seq.n).map(|q| q as usize - 1)
}

fn span_holds(seq: &MSeq) -> bool {
    let (p, n) = (seq.p as usize, seq.n as usize);
    let len = seq.len();
    if Some(len) != expected_period(seq) || len == 0 {
        return false;
    }
    let top = p.pow(n as u32 - 1);
    let mut seen = vec![false; len + 1];
    let window = |start: usize| -> usize {
        (0..n).fold(0, |acc, i| acc + seq.symbols[(start + i) % len] as usize * p.pow(i as u32))
    };
    let mut w = window(0);
    for t in 0..len {
        if w == 0 || seen[w] {
            return false;
        }
        seen[w] = true;
        w = w / p + seq.symbols[(t + n) % len] as usize * top;
    }
    true
}

fn balance_holds(seq: &MSeq) -> bool {
    let p = seq.p as usize;
    if Some(seq.len()) != expected_period(seq) {
        return false;
    }
    let mut counts = vec![0usize; p];
    for &s in &seq.symbols {
        if s as usize >= p {
            return false;
        }
        counts[s as usize] += 1;
    }
    let ones = (seq.len() + 1) / p;
    counts[0] + 1 == ones && counts[1..].iter().all(|&c| c == ones)
}

fn decimation_holds(seq: &MSeq) -> bool {
    let len = seq.len() as u64;
    let picks: Vec<u64> = (2..len).filter(|&d| arith::gcd(d, len) == 1).take(3).collect();
    picks.into_iter().all(|d| match decimate(seq, d) {
        Ok(dec) => span_holds(&dec) && balance_holds(&dec),
        Err(_) => false,
    })
}

fn shift_and_subtract_holds(seq: &MSeq) -> bool {
    let len = seq.len();
    if len < 2 {
        return len == 1;
    }
    let p = seq.p as u8;
    let mut taus = vec![1, 2, len / 2, len - 1];
    taus.retain(|&t| t > 0 && t < len);
    taus.dedup();
    taus.into_iter().all(|tau| {
        let diff: Vec<u8> = (0..len)
            .map(|t| (seq.symbols[(t + tau) % len] + p - seq.symbols[t]) % p)
            .collect();
        find_rotation(&seq.symbols, &diff).is_some()
    })
}

/// `Σ_t ω^{s_{t+τ} - s_t}` for every `τ`.
pub fn autocorrelation(seq: &MSeq) -> Vec<CycInt> {
    let (p, len) = (seq.p as usize, seq.len());
    let doubled: Vec<u8> = seq.symbols.iter().chain(seq.symbols.iter()).copied().collect();
    (0..len)
        .into_par_iter()
        .map(|tau| {
            let mut counts = vec![0u64; p];
            for (a, &b) in doubled[tau..tau + len].iter().zip(&seq.symbols) {
                counts[(*a as usize + p - b as usize) % p] += 1;
            }
            CycInt::from_counts(seq.p, &counts)
        })
        .collect()
}

fn autocorrelation_holds(seq: &MSeq) -> bool {
    let len = seq.len() as i64;
    autocorrelation(seq).iter().enumerate().all(|(tau, v)| {
        let want = if tau == 0 { len } else { -1 };
        *v == CycInt::from_int(seq.p, want)
    })
}

/// Cyclic runs as `(symbol, length)` pairs.
pub fn runs(seq: &MSeq) -> Vec<(u8, usize)> {
    let s = &seq.symbols;
    let len = s.len();
    let Some(start) = (0..len).find(|&i| s[i] != s[(i + len - 1) % len]) else {
        return if len == 0 { Vec::new() } else { vec![(s[0], len)] };
    };
    let mut out: Vec<(u8, usize)> = Vec::new();
    for k in 0..len {
        let c = s[(start + k) % len];
        match out.last_mut() {
            Some((sym, l)) if *sym == c => *l += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

/// `k ≤ n-2`: `2^{n-k-1}` runs of length `k`, half of each symbol; one run
/// of `n-1` zeros and one of `n` ones.
fn runs_hold(seq: &MSeq) -> bool {
    let n = seq.n as usize;
    if Some(seq.len()) != expected_period(seq) {
        return false;
    }
    let mut zeros = vec![0usize; n + 1];
    let mut ones = vec![0usize; n + 1];
    for (sym, l) in runs(seq) {
        if l > n {
            return false;
        }
        match sym {
            0 => zeros[l] += 1,
            _ => ones[l] += 1,
        }
    }
    (1..=n).all(|k| {
        let (z, o) = match k {
            _ if k + 2 <= n => (1 << (n - k - 2), 1 << (n - k - 2)),
            _ if k + 1 == n => (1, 0),
            _ => (0, 1),
        };
        zeros[k] == z && ones[k] == o
    })
}

pub fn check_golomb(seq: &MSeq) -> GolombReport {
    GolombReport {
        span: span_holds(seq),
        decimation: decimation_holds(seq),
        shift_and_subtract: shift_and_subtract_holds(seq),
        balance: balance_holds(seq),
        autocorrelation: autocorrelation_holds(seq),
        runs: (seq.p == 2).then(|| runs_hold(seq)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::find_primitive_polynomial;

    fn ctx(p: u32, n: u32) -> FieldCtx {
        FieldCtx::canonical(p, n).unwrap()
    }

    fn histogram(seq: &MSeq) -> Vec<usize> {
        let mut h = vec![0; seq.p as usize];
        for &s in &seq.symbols {
            h[s as usize] += 1;
        }
        h
    }

    #[test]
    fn trace_form_examples() {
        let s = generate_trace(&ctx(2, 3));
        assert_eq!(s.len(), 7);
        assert_eq!(histogram(&s), vec![3, 4]);
        assert_eq!(histogram(&generate_trace(&ctx(2, 2))), vec![1, 2]);
        assert_eq!(histogram(&generate_trace(&ctx(3, 2))), vec![2, 3, 3]);
    }

    #[test]
    fn recursion_is_a_shift_of_the_trace_form() {
        for (p, n) in [(2, 3), (2, 8), (3, 2), (3, 4), (5, 3), (7, 2)] {
            let c = ctx(p, n);
            let reference = generate_trace(&c);
            let mut init = vec![0u8; n as usize];
            init[0] = 1;
            let rec = generate_recursion(c.spec(), &init).unwrap();
            assert!(rec.shift_relative_to(&reference).is_some(), "{p} {n}");
        }
        let spec = find_primitive_polynomial(3, 2).unwrap();
        let rec = generate_recursion(&spec, &[2, 1]).unwrap();
        assert_eq!(rec.len(), 8);
        assert!((1..8).all(|t| rec.rotated(t).symbols != rec.symbols));
        assert!(matches!(generate_recursion(&spec, &[0, 0]), Err(Error::ZeroState)));
    }

    #[test]
    fn decimation_examples() {
        let c = ctx(2, 3);
        let s = generate_trace(&c);
        assert_eq!(decimate(&s, 1).unwrap().symbols, s.symbols);
        assert!(decimate(&s, 2).unwrap().shift_relative_to(&s).is_some());
        let other = FieldSpec::new(2, 3, vec![1, 0, 1]).unwrap();
        let rec = generate_recursion(&other, &[1, 0, 0]).unwrap();
        let d3 = decimate(&s, 3).unwrap();
        assert!(d3.shift_relative_to(&rec).is_some());
        assert!(d3.shift_relative_to(&s).is_none());
        assert!(matches!(
            decimate(&generate_trace(&ctx(2, 4)), 3),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn decimation_composes() {
        let s = generate_trace(&ctx(3, 3));
        let a = decimate(&decimate(&s, 5).unwrap(), 7).unwrap();
        let b = decimate(&s, 35 % 26).unwrap();
        assert_eq!(a.symbols, b.symbols);
    }

    #[test]
    fn golomb_on_genuine_sequences() {
        for (p, n) in [(2, 1), (2, 2), (2, 4), (2, 7), (3, 1), (3, 3), (5, 2), (7, 2)] {
            let r = check_golomb(&generate_trace(&ctx(p, n)));
            assert!(r.all_hold(), "{p} {n}: {r:?}");
            assert_eq!(r.runs.is_some(), p == 2);
        }
    }

    #[test]
    fn golomb_rejects_period_four() {
        let r = check_golomb(&MSeq::raw(2, 2, vec![0, 1, 0, 1]));
        assert!(!r.span);
    }

    #[test]
    fn run_distribution_n4() {
        let s = generate_trace(&ctx(2, 4));
        let mut by_len = [0usize; 5];
        for (_, l) in runs(&s) {
            by_len[l] += 1;
        }
        assert_eq!(by_len, [0, 4, 2, 1, 1]);
    }

    #[test]
    fn two_level_autocorrelation() {
        let s = generate_trace(&ctx(5, 2));
        let ac = autocorrelation(&s);
        assert_eq!(ac[0], CycInt::from_int(5, 24));
        assert!(ac[1..].iter().all(|v| *v == CycInt::from_int(5, -1)));
    }
}
