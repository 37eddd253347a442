//! Multiplicative and additive characters of a finite field k.
//!
//! Multiplicative characters are indexed against the field's generator γ:
//! χ_j(γ^k) = ζ_N^{jk} with χ_j(0) = 0.  Additive characters are
//! ψ_a(x) = ζ_p^{Tr(ax)}.  Values are reported in Q(ζ_{pN}), the common home
//! of every sum built from them.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};

/// The value conductor p·(q − 1) of a field.
pub fn value_conductor(f: &Field) -> u32 {
    f.p() * f.n()
}

/// A multiplicative character χ_j of a group of order `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MulChar {
    n: u32,
    j: u32,
}

impl MulChar {
    pub fn new(n: u32, j: i64) -> Self {
        assert!(n > 0, "character group must be nonempty");
        MulChar { n, j: j.rem_euclid(n as i64) as u32 }
    }

    pub fn of(f: &Field, j: i64) -> Self {
        Self::new(f.n(), j)
    }

    pub fn trivial(n: u32) -> Self {
        MulChar { n, j: 0 }
    }

    pub fn index(self) -> u32 {
        self.j
    }

    pub fn group_order(self) -> u32 {
        self.n
    }

    pub fn is_trivial(self) -> bool {
        self.j == 0
    }

    /// δ(χ): 1 for the trivial character, 0 otherwise.
    pub fn delta(self) -> u32 {
        (self.j == 0) as u32
    }

    fn check(self, other: MulChar) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.n, other.n))
        }
    }

    pub fn try_mul(self, other: MulChar) -> Result<MulChar> {
        self.check(other)?;
        Ok(MulChar { n: self.n, j: (self.j + other.j) % self.n })
    }

    /// Product of characters of the same group; panics on a group mismatch.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: MulChar) -> MulChar {
        self.try_mul(other).expect("characters of different groups")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: MulChar) -> MulChar {
        self.mul(other.conj())
    }

    /// ᾱ = α^{−1}.
    pub fn conj(self) -> MulChar {
        MulChar { n: self.n, j: (self.n - self.j) % self.n }
    }

    pub fn inv(self) -> MulChar {
        self.conj()
    }

    pub fn pow(self, k: i64) -> MulChar {
        MulChar::new(self.n, self.j as i64 * k)
    }

    pub fn product<I: IntoIterator<Item = MulChar>>(n: u32, it: I) -> MulChar {
        it.into_iter().fold(MulChar::trivial(n), MulChar::mul)
    }

    /// Exponent e with χ(x) = ζ_{pN}^e, or None when x = 0.
    pub fn exponent(self, f: &Field, x: Elem) -> Option<u64> {
        assert_eq!(self.n, f.n(), "character does not belong to this field");
        let l = f.log(x)? as u64;
        let m = value_conductor(f) as u64;
        Some(f.p() as u64 * ((self.j as u64 * l) % self.n as u64) % m)
    }

    pub fn eval(self, f: &Field, x: Elem) -> CycloNum {
        let m = value_conductor(f);
        match self.exponent(f, x) {
            None => CycloNum::zero(m),
            Some(e) => CycloNum::zeta(m, e as i64),
        }
    }

    /// χ(−1) ∈ {±1}.
    pub fn sign(self, f: &Field) -> i64 {
        let l = f.log_minus_one() as u64;
        if (self.j as u64 * l).is_multiple_of(self.n as u64) {
            1
        } else {
            -1
        }
    }
}

impl Mul for MulChar {
    type Output = MulChar;

    fn mul(self, other: MulChar) -> MulChar {
        MulChar::mul(self, other)
    }
}

impl Div for MulChar {
    type Output = MulChar;

    fn div(self, other: MulChar) -> MulChar {
        MulChar::div(self, other)
    }
}

impl fmt::Debug for MulChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{}", self.j)
    }
}

impl fmt::Display for MulChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.j)
    }
}

/// ψ_a(x) = ζ_p^{Tr(ax)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AddChar {
    pub a: Elem,
}

impl AddChar {
    pub fn new(a: Elem) -> Self {
        AddChar { a }
    }

    pub fn is_trivial(self) -> bool {
        self.a.is_zero()
    }

    /// Exponent e with ψ_a(x) = ζ_{pN}^e.
    pub fn exponent(self, f: &Field, x: Elem) -> u64 {
        let t = f.trace(f.mul(self.a, x)) as u64;
        t * f.n() as u64
    }

    pub fn eval(self, f: &Field, x: Elem) -> CycloNum {
        CycloNum::zeta(value_conductor(f), self.exponent(f, x) as i64)
    }
}

pub fn enumerate_mulchars(f: &Field) -> Vec<MulChar> {
    (0..f.n()).map(|j| MulChar { n: f.n(), j }).collect()
}

pub fn enumerate_addchars(f: &Field) -> Vec<AddChar> {
    f.elements().map(AddChar::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{build_field, FieldSpec};

    #[test]
    fn evaluation() {
        let f3 = build_field(FieldSpec::new(3, 1)).unwrap();
        let eps = MulChar::trivial(2);
        let chi = MulChar::of(&f3, 1);
        assert!(eps.eval(&f3, Elem(0)).is_zero());
        assert_eq!(eps.eval(&f3, Elem(2)), CycloNum::one(6));
        assert_eq!(chi.eval(&f3, Elem(2)), CycloNum::from_int(6, -1));
        assert_eq!(AddChar::new(Elem(1)).eval(&f3, Elem(0)), CycloNum::one(6));
        assert_eq!(AddChar::new(Elem(1)).eval(&f3, Elem(1)), CycloNum::zeta(3, 1));
        assert_eq!(AddChar::new(Elem(2)).eval(&f3, Elem(2)), CycloNum::zeta(3, 1));
    }

    #[test]
    fn group_structure() {
        let f3 = build_field(FieldSpec::new(3, 1)).unwrap();
        let chi = MulChar::of(&f3, 1);
        assert!(chi.mul(chi).is_trivial());
        assert_eq!(MulChar::trivial(2).delta(), 1);
        assert_eq!(chi.delta(), 0);
        let f5 = build_field(FieldSpec::new(5, 1)).unwrap();
        assert_eq!(enumerate_mulchars(&f5).len(), 4);
        assert_eq!(enumerate_addchars(&f5).len(), 5);
        assert_eq!(MulChar::new(4, 1).try_mul(MulChar::new(2, 1)), Err(Error::FieldMismatch(4, 2)));
    }
}
