//! Exact arithmetic in Z[ω], ω a primitive p-th root of unity.
//!
//! Values are stored in the basis `1, ω, …, ω^{p-2}`, reduced with
//! `1 + ω + … + ω^{p-1} = 0`, so every value has one representation.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coords: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coords: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn from_int(p: u32, k: impl Into<BigInt>) -> Self {
        let mut v = Self::zero(p);
        v.coords[0] = k.into();
        v
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// `ω^j`.
    pub fn omega_pow(p: u32, j: u64) -> Self {
        let mut counts = vec![0u64; p as usize];
        counts[(j % p as u64) as usize] = 1;
        Self::from_counts(p, &counts)
    }

    /// `Σ_j counts[j] ω^j`.
    pub fn from_counts<T: Copy + Into<BigInt>>(p: u32, counts: &[T]) -> Self {
        assert_eq!(counts.len(), p as usize, "need one count per residue");
        let full: Vec<BigInt> = counts.iter().map(|&c| c.into()).collect();
        Self::reduce(p, full)
    }

    /// Builds a value from already reduced basis coordinates.
    pub fn from_coords(p: u32, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), p as usize - 1);
        CycInt { p, coords }
    }

    /// Reduces a length-p coefficient vector in `1, ω, …, ω^{p-1}`.
    fn reduce(p: u32, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        CycInt { p, coords: full }
    }

    fn full(&self) -> Vec<BigInt> {
        let mut v = self.coords.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn as_integer(&self) -> Result<BigInt> {
        if self.is_rational() {
            Ok(self.coords[0].clone())
        } else {
            Err(Error::NotRational)
        }
    }

    pub fn as_i64(&self) -> Result<i64> {
        self.as_integer()?.to_i64().ok_or(Error::NotRational)
    }

    /// Complex conjugation `ω ↦ ω^{p-1}`.
    pub fn conjugate(&self) -> Self {
        let p = self.p as usize;
        let full = self.full();
        let swapped = (0..p).map(|j| full[(p - j) % p].clone()).collect();
        Self::reduce(self.p, swapped)
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt {
            p: self.p,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// `self / k` when every coordinate is divisible by `k`.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(CycInt { p: self.p, coords })
    }

    /// Floating-point value, for debugging and sanity assertions only.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.p as f64;
        self.coords.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * j as f64 / p;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    /// Plain JSON integer when rational, else `{"p": p, "coords": [...]}`.
    pub fn to_json(&self) -> Value {
        if self.is_rational() {
            big_to_json(&self.coords[0])
        } else {
            json!({
                "p": self.p,
                "coords": self.coords.iter().map(big_to_json).collect::<Vec<_>>(),
            })
        }
    }

    /// Inverse of [`CycInt::to_json`]; `p` is needed for plain integers.
    pub fn from_json(p: u32, v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("not a cyclotomic integer: {v}"));
        match v {
            Value::Number(n) => Ok(Self::from_int(p, parse_big(&n.to_string()).ok_or_else(bad)?)),
            Value::Object(map) => {
                let q = map.get("p").and_then(Value::as_u64).ok_or_else(bad)? as u32;
                if q != p {
                    return Err(bad());
                }
                let coords = map
                    .get("coords")
                    .and_then(Value::as_array)
                    .ok_or_else(bad)?
                    .iter()
                    .map(|c| match c {
                        Value::Number(n) => parse_big(&n.to_string()),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(bad)?;
                if coords.len() != p as usize - 1 {
                    return Err(bad());
                }
                Ok(Self::from_coords(p, coords))
            }
            _ => Err(bad()),
        }
    }
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => Value::from(i),
        None => Value::Number(b.to_string().parse().expect("integer literal")),
    }
}

fn parse_big(s: &str) -> Option<BigInt> {
    s.parse().ok()
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coords[0]);
        }
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = match j {
                0 => String::new(),
                1 => "w".into(),
                _ => format!("w^{j}"),
            };
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{unit}")?,
                _ => write!(f, "{mag}{unit}")?,
            }
        }
        Ok(())
    }
}

/// Rational values first, by value; irrational values after them, by
/// coordinate vector.
impl Ord for CycInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then_with(|| match (self.is_rational(), other.is_rational()) {
                (true, true) => self.coords[0].cmp(&other.coords[0]),
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => self.coords.cmp(&other.coords),
            })
    }
}

impl PartialOrd for CycInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        CycInt {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        CycInt {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        CycInt::reduce(self.p, full)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        assert_eq!(self.p, rhs.p);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}
