//! Word-sized number theory: modular arithmetic, primality, factorization.

use crate::error::{Error, Result};
use num_integer::Integer;

const TRIAL_BOUND: u64 = 1_000_000;
const RHO_BUDGET: u64 = 1 << 26;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `p^n`, or `None` on overflow.
pub fn checked_pow(p: u64, n: u32) -> Option<u64> {
    p.checked_pow(n)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the whole u64 range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
///
/// Trial division up to 10^6, then Brent's variant of Pollard rho with a
/// fixed starting point so that results and timing are reproducible.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    let mut primes = Vec::new();
    let mut rest = n;
    let mut f = 2u64;
    while f <= TRIAL_BOUND && f * f <= rest {
        while rest.is_multiple_of(f) {
            primes.push(f);
            rest /= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let split = rho(m).ok_or(Error::FactorizationFailure(n))?;
        stack.push(split);
        stack.push(m / split);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

pub fn prime_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factor(n)?
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

fn rho(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1..64u64 {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut g, mut q) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
            spent += r;
            if spent > RHO_BUDGET {
                return None;
            }
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}
