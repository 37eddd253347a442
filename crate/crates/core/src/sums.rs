//! Gauss sums, Jacobi sums and the Pochhammer analogues over a fixed field
//! and additive character.
//!
//! A [`Ctx`] owns the field, the additive character ψ and the table of all
//! Gauss sums g(χ_j).  Divisions by Gauss sums never invert a cyclotomic
//! number: they use g(η)·g°(η̄) = η(−1)·q instead.

use std::sync::{Arc, OnceLock};

use crate::chars::{value_conductor, AddChar, MulChar};
use crate::cyclo::{CycloNum, RootSum};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};

pub struct Ctx {
    field: Arc<Field>,
    psi: AddChar,
    m: u32,
    gauss: Vec<CycloNum>,
    gauss_inv: Vec<CycloNum>,
    gauss_circ_inv: Vec<CycloNum>,
    poch: Vec<OnceLock<Vec<CycloNum>>>,
    poch_inv: Vec<OnceLock<Vec<CycloNum>>>,
    poch_circ: Vec<OnceLock<Vec<CycloNum>>>,
    poch_circ_inv: Vec<OnceLock<Vec<CycloNum>>>,
}

impl std::fmt::Debug for Ctx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ctx({:?}, psi_{})", self.field, self.psi.a.0)
    }
}

impl Ctx {
    /// Context with the standard additive character ψ = ψ_1.
    pub fn new(field: Arc<Field>) -> Self {
        Self::with_psi(field, Elem::ONE).expect("ψ_1 is nontrivial")
    }

    /// Context with ψ_a; a must be nonzero.
    pub fn with_psi(field: Arc<Field>, a: Elem) -> Result<Self> {
        if a.is_zero() || !field.contains(a) {
            return Err(Error::Invalid("the additive character must be nontrivial".into()));
        }
        let psi = AddChar::new(a);
        let m = value_conductor(&field);
        let n = field.n();
        let gauss: Vec<CycloNum> = (0..n).map(|j| gauss_sum(&field, MulChar::new(n, j as i64), psi)).collect();
        let q = field.q() as i64;
        let gauss_inv = (0..n)
            .map(|j| {
                // 1/g(α) = α(−1)·g°(ᾱ)/q
                let a = MulChar::new(n, j as i64);
                let gc = circ(&gauss[a.conj().index() as usize], a.conj(), q);
                gc.scale_int(a.sign(&field)).div_int(q)
            })
            .collect();
        let gauss_circ_inv = (0..n)
            .map(|j| {
                // 1/g°(μ) = μ(−1)·g(μ̄)/q
                let mu = MulChar::new(n, j as i64);
                gauss[mu.conj().index() as usize].scale_int(mu.sign(&field)).div_int(q)
            })
            .collect();
        let lazy = || (0..n).map(|_| OnceLock::new()).collect::<Vec<_>>();
        Ok(Ctx {
            field,
            psi,
            m,
            gauss,
            gauss_inv,
            gauss_circ_inv,
            poch: lazy(),
            poch_inv: lazy(),
            poch_circ: lazy(),
            poch_circ_inv: lazy(),
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn psi(&self) -> AddChar {
        self.psi
    }

    /// Value conductor m = p·N.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn q(&self) -> i64 {
        self.field.q() as i64
    }

    pub fn chr(&self, j: i64) -> MulChar {
        MulChar::new(self.n(), j)
    }

    pub fn eps(&self) -> MulChar {
        MulChar::trivial(self.n())
    }

    pub fn chars(&self) -> impl Iterator<Item = MulChar> + '_ {
        (0..self.n()).map(move |j| self.chr(j as i64))
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum::zero(self.m)
    }

    pub fn one(&self) -> CycloNum {
        CycloNum::one(self.m)
    }

    pub fn int(&self, c: i64) -> CycloNum {
        CycloNum::from_int(self.m, c)
    }

    fn idx(&self, a: MulChar) -> usize {
        assert_eq!(a.group_order(), self.n(), "character does not belong to this field");
        a.index() as usize
    }

    /// χ(x) as a cyclotomic number (0 at x = 0).
    pub fn chi(&self, a: MulChar, x: Elem) -> CycloNum {
        a.eval(&self.field, x)
    }

    /// ψ(x) for the context's additive character.
    pub fn psi_val(&self, x: Elem) -> CycloNum {
        self.psi.eval(&self.field, x)
    }

    /// ψ_b(x) = ψ(bx) relative to the context's additive character.
    pub fn psi_twist(&self, b: Elem, x: Elem) -> CycloNum {
        self.psi.eval(&self.field, self.field.mul(b, x))
    }

    /// Exponent of ψ(x) in ζ_m.
    pub fn psi_exp(&self, x: Elem) -> u64 {
        self.psi.exponent(&self.field, x)
    }

    /// g(η) = −Σ_{x∈k*} ψ(x)η(x).
    pub fn gauss(&self, a: MulChar) -> &CycloNum {
        &self.gauss[self.idx(a)]
    }

    /// g°(η) = q^{δ(η)} g(η).
    pub fn gauss_circ(&self, a: MulChar) -> CycloNum {
        circ(self.gauss(a), a, self.q())
    }

    /// 1/g(η).
    pub fn gauss_inv(&self, a: MulChar) -> &CycloNum {
        &self.gauss_inv[self.idx(a)]
    }

    /// 1/g°(η).
    pub fn gauss_circ_inv(&self, a: MulChar) -> &CycloNum {
        &self.gauss_circ_inv[self.idx(a)]
    }

    /// (α)_ν = g(αν)/g(α).
    pub fn pochhammer(&self, a: MulChar, nu: MulChar) -> &CycloNum {
        &self.poch_table(a)[self.idx(nu)]
    }

    /// 1/(α)_ν = g(α)/g(αν).
    pub fn pochhammer_inv(&self, a: MulChar, nu: MulChar) -> &CycloNum {
        let i = self.idx(a);
        &self.poch_inv[i].get_or_init(|| {
            self.chars().map(|nu| self.gauss(a).mul_ref(self.gauss_inv(a.mul(nu)))).collect()
        })[self.idx(nu)]
    }

    /// (α)°_ν = g°(αν)/g°(α).
    pub fn pochhammer_circ(&self, a: MulChar, nu: MulChar) -> &CycloNum {
        let i = self.idx(a);
        &self.poch_circ[i].get_or_init(|| {
            self.chars()
                .map(|nu| self.gauss_circ(a.mul(nu)).mul_ref(self.gauss_circ_inv(a)))
                .collect()
        })[self.idx(nu)]
    }

    /// 1/(α)°_ν = g°(α)/g°(αν).
    pub fn pochhammer_circ_inv(&self, a: MulChar, nu: MulChar) -> &CycloNum {
        let i = self.idx(a);
        &self.poch_circ_inv[i].get_or_init(|| {
            self.chars()
                .map(|nu| self.gauss_circ(a).mul_ref(self.gauss_circ_inv(a.mul(nu))))
                .collect()
        })[self.idx(nu)]
    }

    /// Full table ν ↦ (α)_ν.
    pub fn poch_table(&self, a: MulChar) -> &[CycloNum] {
        let i = self.idx(a);
        self.poch[i].get_or_init(|| {
            self.chars().map(|nu| self.gauss(a.mul(nu)).mul_ref(self.gauss_inv(a))).collect()
        })
    }

    /// Full table ν ↦ 1/(β)°_ν.
    pub fn poch_circ_inv_table(&self, b: MulChar) -> &[CycloNum] {
        let _ = self.pochhammer_circ_inv(b, self.eps());
        self.poch_circ_inv[self.idx(b)].get().unwrap()
    }

    /// j(η_1, …, η_n): direct enumeration for n ≤ 3, Gauss sums otherwise.
    pub fn jacobi(&self, chis: &[MulChar]) -> Result<CycloNum> {
        self.check_jacobi(chis)?;
        if chis.len() <= 3 {
            Ok(self.jacobi_direct(chis))
        } else {
            self.jacobi_gauss(chis)
        }
    }

    fn check_jacobi(&self, chis: &[MulChar]) -> Result<()> {
        if chis.len() < 2 {
            return Err(Error::Arity { expected: 2, got: chis.len() });
        }
        for c in chis {
            if c.group_order() != self.n() {
                return Err(Error::FieldMismatch(self.n(), c.group_order()));
            }
        }
        Ok(())
    }

    /// (−1)^{n−1} Σ_{x_1+…+x_n=1, x_i ∈ k*} Π η_i(x_i), by enumeration.
    pub fn jacobi_direct(&self, chis: &[MulChar]) -> CycloNum {
        let f = &*self.field;
        let n = chis.len();
        let p = f.p() as u64;
        let mut acc = RootSum::new(self.m);
        let mut xs = vec![Elem::ONE; n - 1];
        // odometer over (k*)^{n−1}; the last coordinate is forced
        'outer: loop {
            let s = f.sum(xs.iter().copied());
            let last = f.sub(Elem::ONE, s);
            if !last.is_zero() {
                let mut e = 0u64;
                for (c, &x) in chis.iter().zip(xs.iter().chain(std::iter::once(&last))) {
                    e += p * ((c.index() as u64 * f.log_unit(x) as u64) % f.n() as u64);
                }
                acc.add(e, 1);
            }
            for x in xs.iter_mut() {
                if x.0 + 1 < f.q() {
                    x.0 += 1;
                    continue 'outer;
                }
                x.0 = 1;
            }
            break;
        }
        let v = acc.finish();
        if n.is_multiple_of(2) {
            v.neg_ref()
        } else {
            v
        }
    }

    /// The Gauss-sum expression for j(η_1, …, η_n).
    pub fn jacobi_gauss(&self, chis: &[MulChar]) -> Result<CycloNum> {
        self.check_jacobi(chis)?;
        let q = self.q();
        if chis.iter().all(|c| c.is_trivial()) {
            let n = chis.len() as u32;
            let num = 1 - (1 - q).pow(n);
            return Ok(CycloNum::from_ratio(self.m, num, q));
        }
        let mut v = self.one();
        for &c in chis {
            v = v.mul_ref(self.gauss(c));
        }
        let prod = MulChar::product(self.n(), chis.iter().copied());
        Ok(v.mul_ref(self.gauss_circ_inv(prod)))
    }
}

fn circ(g: &CycloNum, a: MulChar, q: i64) -> CycloNum {
    if a.is_trivial() {
        g.scale_int(q)
    } else {
        g.clone()
    }
}

/// g(η) with respect to ψ, by direct summation.
pub fn gauss_sum(f: &Field, eta: MulChar, psi: AddChar) -> CycloNum {
    let m = value_conductor(f);
    let mut acc = RootSum::new(m);
    for x in f.units() {
        let e = eta.exponent(f, x).unwrap() + psi.exponent(f, x);
        acc.add(e, -1);
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{build_field, FieldSpec};

    fn ctx(p: u32, e: u32) -> Ctx {
        Ctx::new(Arc::new(build_field(FieldSpec::new(p, e)).unwrap()))
    }

    #[test]
    fn gauss_values() {
        let c = ctx(3, 1);
        let chi = c.chr(1);
        assert_eq!(*c.gauss(c.eps()), c.one());
        let expected = CycloNum::zeta(3, 2) - CycloNum::zeta(3, 1);
        assert_eq!(*c.gauss(chi), expected);
        assert_eq!(c.gauss(chi).mul_ref(c.gauss(chi)), c.int(-3));
        assert_eq!(c.gauss_circ(c.eps()), c.int(3));
        assert_eq!(c.gauss_circ(chi), expected);
        assert_eq!(ctx(5, 1).gauss_circ(MulChar::trivial(4)), CycloNum::from_int(20, 5));
    }

    #[test]
    fn jacobi_values() {
        let c = ctx(3, 1);
        let (e, chi) = (c.eps(), c.chr(1));
        assert_eq!(c.jacobi(&[e, e]).unwrap(), c.int(-1));
        assert_eq!(c.jacobi(&[chi, chi]).unwrap(), c.int(-1));
        assert_eq!(c.jacobi(&[chi, e]).unwrap(), c.int(1));
        assert_eq!(c.jacobi_gauss(&[chi, e]).unwrap(), c.int(1));
        assert!(matches!(c.jacobi(&[chi]), Err(Error::Arity { .. })));
    }

    #[test]
    fn pochhammer_values() {
        let c = ctx(3, 1);
        let (e, chi) = (c.eps(), c.chr(1));
        assert_eq!(*c.pochhammer(chi, e), c.one());
        assert_eq!(*c.pochhammer(e, chi), CycloNum::zeta(3, 2) - CycloNum::zeta(3, 1));
        assert_eq!(c.pochhammer(chi, chi).mul_ref(c.pochhammer_circ(chi, chi)), c.int(-1));
        for a in c.chars() {
            for nu in c.chars() {
                assert_eq!(c.pochhammer(a, nu).mul_ref(c.pochhammer_inv(a, nu)), c.one());
                assert_eq!(c.pochhammer_circ(a, nu).mul_ref(c.pochhammer_circ_inv(a, nu)), c.one());
            }
        }
    }

    #[test]
    fn trivial_psi_rejected() {
        let f = Arc::new(build_field(FieldSpec::new(3, 1)).unwrap());
        assert!(Ctx::with_psi(f, Elem::ZERO).is_err());
    }
}
