//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! A value is `num / den` where `num` holds the coordinates in the power
//! basis 1, ζ_m, …, ζ_m^{φ(m)−1}.  The representative is always reduced
//! modulo the cyclotomic polynomial Φ_m and has gcd(num, den) = 1 with
//! den > 0, so two values of the same conductor are equal iff their fields
//! are equal.  Values of different conductors are lifted to the lcm.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of Φ_m, constant term first (monic, degree φ(m)).
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    // Φ_m = (x^m − 1) / Π_{d | m, d < m} Φ_d
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            poly = div_monic_exact(&poly, &div);
        }
    }
    let arc = Arc::new(poly);
    cyclotomic_cache().write().unwrap().insert(m, arc.clone());
    arc
}

fn div_monic_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                r[i + j] = r[i + j].checked_sub(c.checked_mul(b[j]).unwrap()).unwrap();
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "cyclotomic division must be exact");
    q
}

/// Euler's totient φ(m) = deg Φ_m.
pub fn totient(m: u32) -> usize {
    cyclotomic_poly(m).len() - 1
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// An exact element of Q(ζ_m).
#[derive(Clone)]
pub struct CycloNum {
    m: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNum {
    pub fn zero(m: u32) -> Self {
        CycloNum { m, num: vec![BigInt::zero(); totient(m)], den: BigInt::one() }
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    pub fn from_int(m: u32, c: i64) -> Self {
        Self::from_bigint(m, BigInt::from(c))
    }

    pub fn from_bigint(m: u32, c: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); totient(m)];
        num[0] = c;
        CycloNum { m, num, den: BigInt::one() }
    }

    pub fn from_ratio(m: u32, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        let mut x = Self::from_int(m, n);
        x.den = BigInt::from(d);
        x.normalize();
        x
    }

    /// ζ_m^k.
    pub fn zeta(m: u32, k: i64) -> Self {
        let mut coeffs = vec![0i64; m as usize];
        coeffs[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_exponent_coeffs(m, &coeffs)
    }

    /// Σ_k coeffs[k] ζ_m^k for a coefficient vector of length m.
    pub fn from_exponent_coeffs(m: u32, coeffs: &[i64]) -> Self {
        let mut acc = RootSum::new(m);
        for (k, &c) in coeffs.iter().enumerate() {
            acc.add(k as u64, c);
        }
        acc.finish()
    }

    fn from_big_exponent_coeffs(m: u32, mut a: Vec<BigInt>, den: BigInt) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        reduce_big(&mut a, &phi);
        a.truncate(deg);
        a.resize(deg, BigInt::zero());
        let mut x = CycloNum { m, num: a, den };
        x.normalize();
        x
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// Power-basis numerator coordinates (length φ(m)).
    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Returns the value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_integer_value(&self, c: i64) -> bool {
        self.den.is_one()
            && self.num[0] == BigInt::from(c)
            && self.num.iter().skip(1).all(Zero::is_zero)
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    /// Rewrites the value over a multiple M of its conductor.
    pub fn lift(&self, big_m: u32) -> Self {
        assert!(big_m.is_multiple_of(self.m), "conductor {} does not divide {}", self.m, big_m);
        if big_m == self.m {
            return self.clone();
        }
        let step = (big_m / self.m) as usize;
        let mut a = vec![BigInt::zero(); big_m as usize];
        for (i, c) in self.num.iter().enumerate() {
            a[i * step] = c.clone();
        }
        Self::from_big_exponent_coeffs(big_m, a, self.den.clone())
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.m == b.m {
            (a.clone(), b.clone())
        } else {
            let l = lcm(a.m, b.m);
            (a.lift(l), b.lift(l))
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = Self::align(self, other);
            return a.add_ref(&b);
        }
        let num = if self.den == other.den {
            self.num.iter().zip(&other.num).map(|(x, y)| x + y).collect()
        } else {
            self.num.iter().zip(&other.num).map(|(x, y)| x * &other.den + y * &self.den).collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        let mut r = CycloNum { m: self.m, num, den };
        r.normalize();
        r
    }

    pub fn neg_ref(&self) -> Self {
        CycloNum { m: self.m, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = Self::align(self, other);
            return a.mul_ref(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.m);
        }
        let deg = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * deg];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let phi = cyclotomic_poly(self.m);
        reduce_big(&mut prod, &phi);
        prod.truncate(deg);
        let mut r = CycloNum { m: self.m, num: prod, den: &self.den * &other.den };
        r.normalize();
        r
    }

    /// self · ζ_m^k.
    pub fn mul_zeta(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.m as i64;
        let mut a = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.num.iter().enumerate() {
            a[(i as i64 + k).rem_euclid(m) as usize] = c.clone();
        }
        Self::from_big_exponent_coeffs(self.m, a, self.den.clone())
    }

    pub fn scale_int(&self, c: i64) -> Self {
        let mut r = CycloNum {
            m: self.m,
            num: self.num.iter().map(|x| x * c).collect(),
            den: self.den.clone(),
        };
        r.normalize();
        r
    }

    pub fn div_int(&self, c: i64) -> Self {
        assert!(c != 0, "division by zero");
        let mut r = CycloNum { m: self.m, num: self.num.clone(), den: &self.den * c };
        r.normalize();
        r
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut result = Self::one(self.m);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            k >>= 1;
        }
        result
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Φ_m over Q.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_poly(self.m);
        let to_rat = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut r0: Vec<BigRational> =
            phi.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let mut r1 = to_rat(&self.num);
        rtrim(&mut r1);
        let mut s0: Vec<BigRational> = vec![BigRational::zero()];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = rdivmod(&r0, &r1);
            let s = rsub(&s0, &rmul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        debug_assert_eq!(r0.len(), 1, "Φ_m is irreducible, so the gcd is a constant");
        let c = r0[0].clone();
        let factor = BigRational::from_integer(self.den.clone()) / c;
        let coeffs: Vec<BigRational> = s0.iter().map(|x| x * &factor).collect();
        let mut den = BigInt::one();
        for x in &coeffs {
            den = den.lcm(x.denom());
        }
        let mut num: Vec<BigInt> = coeffs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        num.resize(phi.len() - 1, BigInt::zero());
        let mut r = CycloNum { m: self.m, num, den };
        r.normalize();
        Ok(r)
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.invert()?))
    }

    /// The Galois conjugate σ_k: ζ_m ↦ ζ_m^k (gcd(k, m) = 1).
    pub fn galois(&self, k: u64) -> Self {
        let m = self.m as u64;
        let mut a = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.num.iter().enumerate() {
            a[((i as u64 * k) % m) as usize] += c;
        }
        Self::from_big_exponent_coeffs(self.m, a, self.den.clone())
    }

    /// Complex conjugate (σ_{−1}).
    pub fn conj(&self) -> Self {
        self.galois(self.m as u64 - 1)
    }

    /// Whether the value lies in Q(ζ_{m'}) for a divisor m' of the conductor:
    /// that subfield is the fixed field of {σ_k : k ≡ 1 mod m'}.
    pub fn in_subfield(&self, m_sub: u32) -> Result<bool> {
        if m_sub == 0 || !self.m.is_multiple_of(m_sub) {
            return Err(Error::Invalid(format!("{m_sub} does not divide the conductor {}", self.m)));
        }
        let m = self.m as u64;
        for k in (1..m).step_by(m_sub as usize) {
            if k.gcd(&m) != 1 {
                continue;
            }
            if self.galois(k) != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Numerical value at ζ_m = exp(2πi/m); diagnostics only.
    pub fn embed_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * i as f64 / self.m as f64;
            acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
        }
        acc / den
    }

    /// Coordinates over ζ_m^0 … ζ_m^{m−1}, zero-padded (JSON layout).
    pub fn padded_numerator(&self) -> Vec<BigInt> {
        let mut v = self.num.clone();
        v.resize(self.m as usize, BigInt::zero());
        v
    }

    /// JSON value `{"m":…, "num":[…], "den":…}`; integers that overflow i64
    /// are written as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let int = |c: &BigInt| match c.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(c.to_string()),
        };
        serde_json::json!({
            "m": self.m,
            "num": self.padded_numerator().iter().map(int).collect::<Vec<_>>(),
            "den": int(&self.den),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed cyclotomic value {v}"));
        let m = v.get("m").and_then(|x| x.as_u64()).ok_or_else(bad)? as u32;
        if m == 0 {
            return Err(bad());
        }
        let int = |x: &serde_json::Value| -> Result<BigInt> {
            if let Some(i) = x.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(s) = x.as_str() {
                s.parse().map_err(|_| bad())
            } else {
                Err(bad())
            }
        };
        let num = v.get("num").and_then(|x| x.as_array()).ok_or_else(bad)?;
        if num.len() > m as usize {
            return Err(bad());
        }
        let mut a = vec![BigInt::zero(); m as usize];
        for (i, x) in num.iter().enumerate() {
            a[i] = int(x)?;
        }
        let den = int(v.get("den").ok_or_else(bad)?)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_big_exponent_coeffs(m, a, den))
    }
}

fn reduce_big(a: &mut [BigInt], phi: &[i64]) {
    let deg = phi.len() - 1;
    for i in (deg..a.len()).rev() {
        if a[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut a[i]);
        for j in 0..deg {
            if phi[j] != 0 {
                a[i - deg + j] -= &c * phi[j];
            }
        }
    }
}

fn rtrim(a: &mut Vec<BigRational>) {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigRational::zero());
    }
}

fn rsub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut r: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    rtrim(&mut r);
    r
}

fn rmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    rtrim(&mut r);
    r
}

fn rdivmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    rtrim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &b[j];
                r[i + j] -= t;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    rtrim(&mut r);
    rtrim(&mut q);
    (q, r)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Self::align(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => format!("z{}", self.m),
                (_, true) => format!("z{}^{}", self.m, i),
                (1, false) => format!("{}*z{}", mag, self.m),
                (_, false) => format!("{}*z{}^{}", mag, self.m, i),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (sign, body)) in terms.iter().enumerate() {
            if k == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if *sign == "-" { " - " } else { " + " });
            }
            s.push_str(body);
        }
        if self.den.is_one() {
            write!(f, "{s}")
        } else if terms.len() == 1 {
            write!(f, "{s}/{}", self.den)
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CycloNum::from_json(&v).map_err(D::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$inner(rhs)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                self.$inner(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        self.neg_ref()
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        self.neg_ref()
    }
}

/// Accumulator for Σ c_k ζ_m^k with small integer counts, the shape of every
/// character sum.  Reduction modulo Φ_m happens once, at the end.
#[derive(Clone, Debug)]
pub struct RootSum {
    m: u32,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new(m: u32) -> Self {
        RootSum { m, counts: vec![0; m as usize] }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// Adds c·ζ_m^k.
    #[inline]
    pub fn add(&mut self, k: u64, c: i64) {
        let idx = (k % self.m as u64) as usize;
        self.counts[idx] += c;
    }

    pub fn merge(&mut self, other: &RootSum) {
        assert_eq!(self.m, other.m, "conductor mismatch");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn finish(&self) -> CycloNum {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut a: Vec<i128> = self.counts.iter().map(|&c| c as i128).collect();
        let mut ok = true;
        'outer: for i in (deg..a.len()).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            a[i] = 0;
            for j in 0..deg {
                match c.checked_mul(phi[j] as i128).and_then(|t| a[i - deg + j].checked_sub(t)) {
                    Some(v) => a[i - deg + j] = v,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if !ok {
            let big: Vec<BigInt> = self.counts.iter().map(|&c| BigInt::from(c)).collect();
            return CycloNum::from_big_exponent_coeffs(self.m, big, BigInt::one());
        }
        a.truncate(deg);
        let mut r =
            CycloNum { m: self.m, num: a.into_iter().map(BigInt::from).collect(), den: BigInt::one() };
        r.normalize();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(totient(42), 12);
        assert_eq!(cyclotomic_poly(105)[7], -2);
    }

    #[test]
    fn basic_identities() {
        let z3 = CycloNum::zeta(3, 1);
        let z3sq = CycloNum::zeta(3, 2);
        assert_eq!(&z3 + &z3sq, CycloNum::from_int(3, -1));
        let d = &z3sq - &z3;
        assert_eq!(&d * &d, CycloNum::from_int(3, -3));
        assert_eq!(CycloNum::zeta(6, 1), -CycloNum::zeta(3, 2));
        assert_eq!(CycloNum::zeta(2, 1), CycloNum::zeta(6, 3));
        assert_ne!(z3, z3sq);
    }

    #[test]
    fn inverses() {
        assert_eq!(CycloNum::from_int(5, -1).invert().unwrap(), CycloNum::from_int(5, -1));
        assert_eq!(CycloNum::zeta(3, 1).invert().unwrap(), CycloNum::zeta(3, 2));
        let d = CycloNum::zeta(3, 2) - CycloNum::zeta(3, 1);
        let expected = (CycloNum::zeta(3, 1) - CycloNum::zeta(3, 2)).div_int(3);
        assert_eq!(d.invert().unwrap(), expected);
        assert_eq!(CycloNum::zero(7).invert().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn complex_embedding() {
        let v = CycloNum::from_int(6, -1).embed_complex();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let i = CycloNum::zeta(4, 1).embed_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let d = (CycloNum::zeta(3, 2) - CycloNum::zeta(3, 1)).embed_complex();
        assert!((d - Complex64::new(0.0, -3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn subfields() {
        let z = CycloNum::from_int(6, -1);
        assert!(z.in_subfield(2).unwrap());
        assert!(CycloNum::from_int(12, 7).in_subfield(1).unwrap());
        let d = CycloNum::zeta(6, 4) - CycloNum::zeta(6, 2);
        assert!(!d.in_subfield(2).unwrap());
        assert!(d.in_subfield(3).unwrap());
        assert!(z.in_subfield(4).is_err());
    }

    #[test]
    fn json_layout() {
        let x = CycloNum::zeta(6, 2) - CycloNum::zeta(6, 1);
        let v = x.to_json();
        assert_eq!(v["m"], 6);
        assert_eq!(v["num"].as_array().unwrap().len(), 6);
        assert_eq!(CycloNum::from_json(&v).unwrap(), x);
        let s = serde_json::to_string(&x).unwrap();
        let back: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn display() {
        assert_eq!(CycloNum::from_int(3, -1).to_string(), "-1");
        assert_eq!((CycloNum::zeta(3, 2) - CycloNum::zeta(3, 1)).to_string(), "-1 - 2*z3");
        assert_eq!(CycloNum::from_ratio(4, 1, 2).to_string(), "1/2");
    }
}
