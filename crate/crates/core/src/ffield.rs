//! Small finite fields given by discrete-log tables, their named extensions,
//! and the canonical root choices (N-th roots, Artin–Schreier roots).
//!
//! An element is stored as its *code*: the base-p digits of its
//! representative in F_p[x]/(f), lowest degree first.  The modulus `f` is the
//! smallest-code monic irreducible polynomial of degree e and the generator is
//! the smallest-code primitive element, so all tables are reproducible.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the size of any field or extension that may be built.
pub const DEFAULT_CAP: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
}

impl FieldSpec {
    pub fn new(p: u32, e: u32) -> Self {
        FieldSpec { p, e }
    }

    /// Splits a prime power q into (p, e).
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid(format!("q = {q} is not a prime power")));
        }
        let p = smallest_prime_factor(q);
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::Invalid(format!("q = {q} is not a prime power")));
        }
        Ok(FieldSpec { p: p as u32, e })
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.e)
    }
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let d = smallest_prime_factor(n);
        out.push(d);
        while n.is_multiple_of(d) {
            n /= d;
        }
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub e: u32,
    /// Coefficients of the monic modulus, constant term first.
    pub modulus: Vec<u32>,
    pub generator: u32,
}

pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    n: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[i] = log(1 + g^i), NONE when 1 + g^i = 0
    zech: Vec<u32>,
    trace: Vec<u32>,
    log_minus_one: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (modulus {:?}, generator {})", self.q, self.modulus, self.generator.0)
    }
}

/// Builds F_q with the smallest-code modulus and generator.
pub fn build_field(spec: FieldSpec) -> Result<Field> {
    build_field_with(spec, DEFAULT_CAP, 0)
}

/// Builds F_q choosing the `gen_rank`-th smallest primitive element
/// (0 = smallest) as generator.
pub fn build_field_with(spec: FieldSpec, cap: u64, gen_rank: usize) -> Result<Field> {
    let FieldSpec { p, e } = spec;
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(Error::Invalid("extension degree e must be positive".into()));
    }
    let size = spec.size();
    if size > cap as u128 || size > (1u128 << 31) {
        return Err(Error::CapExceeded { size, cap });
    }
    let q = size as u32;
    let n = q - 1;
    let modulus = smallest_irreducible(p, e);

    let n_factors = prime_factors(n as u64);
    let available = euler_phi(n as u64) as usize;
    if gen_rank >= available {
        return Err(Error::NoSuchGenerator { rank: gen_rank, available });
    }
    let mut seen = 0;
    let mut generator = None;
    for code in 1..q {
        let g = to_digits(code, p, e);
        let primitive = n_factors.iter().all(|&r| {
            let t = poly_pow_mod(&g, (n as u64) / r, &modulus, p);
            !is_one(&t)
        });
        if primitive {
            if seen == gen_rank {
                generator = Some(code);
                break;
            }
            seen += 1;
        }
    }
    let generator = generator.expect("a finite field has a primitive element");
    let gdig = to_digits(generator, p, e);

    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![NONE; q as usize];
    let mut cur = to_digits(1, p, e);
    for i in 0..n {
        let c = from_digits(&cur, p);
        exp.push(c);
        log[c as usize] = i;
        cur = poly_mul_mod(&cur, &gdig, &modulus, p);
    }
    debug_assert_eq!(from_digits(&cur, p), 1);

    let mut zech = vec![NONE; n as usize];
    for i in 0..n as usize {
        let c = exp[i];
        let d0 = c % p;
        let w = c - d0 + (d0 + 1) % p;
        zech[i] = log[w as usize];
    }
    let log_minus_one = if p == 2 { 0 } else { n / 2 };
    let mut f = Field {
        p,
        e,
        q,
        n,
        modulus,
        generator: Elem(generator),
        exp,
        log,
        zech,
        trace: Vec::new(),
        log_minus_one,
    };
    let mut trace = Vec::with_capacity(q as usize);
    for c in 0..q {
        let x = Elem(c);
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..e {
            acc = f.add(acc, y);
            y = f.pow(y, p as u64);
        }
        debug_assert!(acc.0 < p, "trace must land in the prime field");
        trace.push(acc.0);
    }
    f.trace = trace;
    Ok(f)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    for r in prime_factors(n) {
        result = result / r * (r - 1);
        while n.is_multiple_of(r) {
            n /= r;
        }
    }
    result
}

impl Field {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// N = q − 1, the order of k*.
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, e: self.e }
    }
    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
            generator: self.generator.0,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, i: i64) -> Elem {
        Elem(i.rem_euclid(self.p as i64) as u32)
    }

    pub fn minus_one(&self) -> Elem {
        self.neg(Elem::ONE)
    }

    /// Discrete logarithm to the base of the generator.
    pub fn log(&self, x: Elem) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NONE).then_some(l)
    }

    /// Logarithm of a unit; panics on zero.
    pub fn log_unit(&self, x: Elem) -> u32 {
        let l = self.log[x.0 as usize];
        assert!(l != NONE, "logarithm of zero");
        l
    }

    pub fn exp(&self, i: u64) -> Elem {
        Elem(self.exp[(i % self.n as u64) as usize])
    }

    pub fn log_minus_one(&self) -> u32 {
        self.log_minus_one
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + self.n - la };
        let z = self.zech[d as usize];
        if z == NONE {
            Elem::ZERO
        } else {
            let s = la as u64 + z as u64;
            Elem(self.exp[(s % self.n as u64) as usize])
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        let l = self.log[a.0 as usize] + self.log_minus_one;
        Elem(self.exp[(l % self.n) as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % self.n as u64) as usize])
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((self.n - l) % self.n) as usize]))
    }

    /// Inverse of a unit; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn try_div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.try_inv(b)?))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let l = self.log[a.0 as usize] as u128 * k as u128;
        Elem(self.exp[(l % self.n as u128) as usize])
    }

    /// Integer power allowing negative exponents (units only when k < 0).
    pub fn powi(&self, a: Elem, k: i64) -> Elem {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            self.pow(self.inv(a), k.unsigned_abs())
        }
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// Absolute trace to F_p, as an integer in [0, p).
    pub fn trace(&self, x: Elem) -> u32 {
        self.trace[x.0 as usize]
    }

    /// Multiplicative order of a unit.
    pub fn order(&self, x: Elem) -> u32 {
        let l = self.log_unit(x);
        self.n / gcd_u64(l as u64, self.n as u64) as u32
    }

    /// The base-p digit vector of an element.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        to_digits(x.0, self.p, self.e)
    }
}

/// Builds F_q from q directly.
pub fn field_q(q: u64) -> Result<Arc<Field>> {
    Ok(Arc::new(build_field(FieldSpec::from_q(q)?)?))
}

// ---------------------------------------------------------------------------
// polynomials over F_p (digit vectors, constant term first)

fn to_digits(mut code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(code % p);
        code /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_one(a: &[u32]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&x| x == 0)
}

fn poly_mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let e = f.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * e.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..e {
            let sub = c * f[j] as u64 % p64;
            prod[i - e + j] = (prod[i - e + j] + p64 - sub) % p64;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|x| x as u32).collect()
}

fn poly_pow_mod(a: &[u32], mut k: u64, f: &[u32], p: u32) -> Vec<u32> {
    let e = f.len() - 1;
    let mut result = vec![0; e];
    result[0] = 1 % p;
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = poly_mul_mod(&result, &base, f, p);
        }
        base = poly_mul_mod(&base, &base, f, p);
        k >>= 1;
    }
    result
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut k = p as u64 - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

fn trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    let p64 = p as u64;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p64;
        for (j, &bj) in b.iter().enumerate() {
            let idx = dr - db + j;
            r[idx] = ((r[idx] as u64 + p64 - c * bj as u64 % p64) % p64) as u32;
        }
        trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&x| x == 0)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree e.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    let mut x = vec![0u32; e];
    x[1] = 1;
    // x^(p^k) mod f for k = 0..=e
    let mut frob = vec![x.clone()];
    for _ in 0..e {
        let last = frob.last().unwrap();
        frob.push(poly_pow_mod(last, p as u64, f, p));
    }
    if frob[e] != x {
        return false;
    }
    for r in prime_factors(e as u64) {
        let k = e / r as usize;
        let mut h = frob[k].clone();
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for c in 0..count {
        let mut f = to_digits(c as u32, p, e);
        f.push(1);
        if e > 1 && f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---------------------------------------------------------------------------
// extensions

/// A degree-r extension k_r of a base field together with a fixed embedding.
pub struct ExtensionField {
    base: Arc<Field>,
    r: u32,
    field: Arc<Field>,
    embed: Vec<Elem>,
    restrict: Vec<u32>,
    as_one: OnceLock<Option<Elem>>,
}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} over F_{} (degree {})", self.field.q(), self.base.q(), self.r)
    }
}

pub fn extend(base: &Arc<Field>, r: u32) -> Result<ExtensionField> {
    extend_with_cap(base, r, DEFAULT_CAP)
}

/// Builds k_r.  The base generator γ is sent to γ'^{u(Q−1)/(q−1)} for the
/// smallest unit u mod q−1 for which this is a ring homomorphism (u = 1
/// whenever that choice is additive).
pub fn extend_with_cap(base: &Arc<Field>, r: u32, cap: u64) -> Result<ExtensionField> {
    if r == 0 {
        return Err(Error::Invalid("extension degree must be positive".into()));
    }
    let size = (base.q() as u128).pow(r);
    if size > cap as u128 || size > (1u128 << 31) {
        return Err(Error::CapExceeded { size, cap });
    }
    let field = if r == 1 {
        base.clone()
    } else {
        Arc::new(build_field_with(FieldSpec::new(base.p(), base.e() * r), cap, 0)?)
    };
    let n = base.n() as u64;
    let big_n = field.n() as u64;
    let m = big_n / n;
    let mut chosen = None;
    for u in 1..=n {
        if gcd_u64(u, n) != 1 {
            continue;
        }
        let image = |i: u64| field.exp(m * u % big_n * (i % n) % big_n);
        let additive = (0..n).all(|i| {
            let lhs = match base.zech[i as usize] {
                NONE => Elem::ZERO,
                z => image(z as u64),
            };
            lhs == field.add(Elem::ONE, image(i))
        });
        if additive {
            chosen = Some(u);
            break;
        }
    }
    let u = chosen.expect("some Frobenius twist of the embedding is additive");
    let mut embed = vec![Elem::ZERO; base.q() as usize];
    let mut restrict = vec![NONE; field.q() as usize];
    restrict[0] = 0;
    for i in 0..n {
        let x = base.exp(i);
        let y = field.exp(m * u % big_n * i % big_n);
        embed[x.0 as usize] = y;
        restrict[y.0 as usize] = x.0;
    }
    Ok(ExtensionField { base: base.clone(), r, field, embed, restrict, as_one: OnceLock::new() })
}

impl ExtensionField {
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x.0 as usize]
    }

    /// Preimage of an element lying in the embedded base field.
    pub fn restrict(&self, y: Elem) -> Option<Elem> {
        let c = self.restrict[y.0 as usize];
        (c != NONE).then_some(Elem(c))
    }

    /// x ↦ x^q.
    pub fn frobenius(&self, y: Elem) -> Elem {
        self.field.pow(y, self.base.q() as u64)
    }

    /// ᴺ√a = γ'^{dlog(embed a)/N} with N = q − 1.
    pub fn nth_root(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInput("N-th root"));
        }
        let n = self.base.n();
        let d = self.field.log_unit(self.embed(a));
        if !d.is_multiple_of(n) {
            return Err(Error::Invalid(format!(
                "extension of degree {} does not contain the N-th roots of {}",
                self.r, a.0
            )));
        }
        Ok(self.field.exp((d / n) as u64))
    }

    /// r(t) = embed(t)·r(1), where r(1) is the smallest-code solution of
    /// x^q − x = 1.
    pub fn artin_schreier_root(&self, t: Elem) -> Result<Elem> {
        if t.is_zero() {
            return Ok(Elem::ZERO);
        }
        let r1 = self.as_one.get_or_init(|| {
            self.field.elements().find(|&x| self.field.sub(self.frobenius(x), x) == Elem::ONE)
        });
        match r1 {
            Some(r1) => Ok(self.field.mul(self.embed(t), *r1)),
            None => Err(Error::Invalid(format!(
                "x^q - x = 1 has no solution in an extension of degree {}",
                self.r
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f3 = build_field(FieldSpec::new(3, 1)).unwrap();
        assert_eq!(f3.generator(), Elem(2));
        let f4 = build_field(FieldSpec::new(2, 2)).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.generator(), Elem(2));
        let f9 = build_field(FieldSpec::new(3, 2)).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.generator(), Elem(4));
        assert_eq!(build_field(FieldSpec::new(4, 1)).unwrap_err(), Error::NotPrime(4));
        let f7 = build_field(FieldSpec::new(7, 1)).unwrap();
        assert_eq!(f7.generator(), Elem(3));
    }

    #[test]
    fn trace_examples() {
        let f4 = build_field(FieldSpec::new(2, 2)).unwrap();
        assert_eq!(f4.trace(Elem(1)), 0);
        let f3 = build_field(FieldSpec::new(3, 1)).unwrap();
        assert_eq!(f3.trace(Elem(2)), 2);
        assert_eq!(f3.trace(Elem(0)), 0);
    }

    #[test]
    fn second_generator() {
        let f5 = build_field_with(FieldSpec::new(5, 1), DEFAULT_CAP, 1).unwrap();
        assert_eq!(f5.generator(), Elem(3));
        let err = build_field_with(FieldSpec::new(3, 1), DEFAULT_CAP, 1).unwrap_err();
        assert_eq!(err, Error::NoSuchGenerator { rank: 1, available: 1 });
    }
}
