//! Hypergeometric varieties: their twisted point counts and the explicit
//! isomorphisms between them.
//!
//! Every family is cut out by equations in which a multiplicative coordinate
//! x enters only through x^N (N = q − 1) and an Artin–Schreier coordinate t
//! only through t^q − t.  The acting group multiplies the former and
//! translates the latter, so a group element g = (ξ, a) satisfies
//! Frob(P) = g·P exactly when x^N = ξ and t^q − t = a.  This makes the
//! Frobenius-twisted fixed-point counts Λ_g computable over k itself.

pub mod count;
pub mod iso;
pub mod points;
pub mod reducible;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chars::MulChar;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::genhgf::{thetas, Partition};
use crate::matrix::{MatK, MatZ};
use crate::sums::Ctx;

pub use count::{lambda_g, n_chi, n_chi_closed_form, naive_count, naive_count_with_budget, Support};

/// A family member with its parameters in the base field k.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarietySpec {
    /// X_{Δ,z} ⊂ A^{n+d}: coordinates (t_i, u_i, s).
    GeneralXDz { delta: Partition, z: MatK },
    /// ₘXₙ,λ ⊂ Fer₂^m × AS^{n−m}.
    MXn { m: usize, n: usize, lam: Elem },
    /// Fer_n^*: x₁^N + ⋯ + x_n^N = 1, Π x_i ≠ 0.
    FermatStar { n: usize },
    /// AS^*: t^q − t = z^N, z ≠ 0.
    ASStar,
    LauricellaD { lam: Vec<Elem> },
    LauricellaA { lam: Vec<Elem> },
    LauricellaC { lam: Vec<Elem> },
    Humbert1 { lam: [Elem; 2] },
    Humbert3 { lam: [Elem; 2] },
}

impl fmt::Debug for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes = |v: &[Elem]| v.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(",");
        match self {
            VarietySpec::GeneralXDz { delta, z } => write!(f, "X[{delta}, z={z:?}]"),
            VarietySpec::MXn { m, n, lam } => write!(f, "{m}X{n}[λ={}]", lam.0),
            VarietySpec::FermatStar { n } => write!(f, "Fer{n}*"),
            VarietySpec::ASStar => write!(f, "AS*"),
            VarietySpec::LauricellaD { lam } => write!(f, "X_FD[λ={}]", codes(lam)),
            VarietySpec::LauricellaA { lam } => write!(f, "X_FA[λ={}]", codes(lam)),
            VarietySpec::LauricellaC { lam } => write!(f, "X_FC[λ={}]", codes(lam)),
            VarietySpec::Humbert1 { lam } => write!(f, "X_Phi1[λ={}]", codes(lam)),
            VarietySpec::Humbert3 { lam } => write!(f, "X_Phi3[λ={}]", codes(lam)),
        }
    }
}

/// The coordinate layout of a family: `mult` coordinates in A* (acted on
/// by k*), `add` Artin–Schreier coordinates (acted on by k) and `free`
/// coordinates the group does not touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub mult: usize,
    pub add: usize,
    pub free: usize,
}

/// An element (ξ, a) of (k*)^mult × k^add.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElem {
    pub mult: Vec<Elem>,
    pub add: Vec<Elem>,
}

/// A character (χ_i) × (ψ_{c_j}) of (k*)^mult × k^add.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupChar {
    pub mult: Vec<MulChar>,
    pub add: Vec<Elem>,
}

impl fmt::Debug for GroupChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.mult.iter().map(|x| x.to_string()).collect();
        if self.add.is_empty() {
            write!(f, "({})", m.join(","))
        } else {
            let a: Vec<String> = self.add.iter().map(|x| format!("psi{}", x.0)).collect();
            write!(f, "({}; {})", m.join(","), a.join(","))
        }
    }
}

impl GroupChar {
    pub fn new(mult: Vec<MulChar>, add: Vec<Elem>) -> Self {
        GroupChar { mult, add }
    }

    /// Every character of (k*)^mult × k^add.
    pub fn enumerate(ctx: &Ctx, layout: Layout) -> Vec<GroupChar> {
        let mut out = Vec::new();
        crate::hgf::for_each_tuple(layout.mult, ctx.n(), |js| {
            crate::hgf::for_each_tuple(layout.add, ctx.field().q(), |cs| {
                out.push(GroupChar {
                    mult: js.iter().map(|&j| ctx.chr(j as i64)).collect(),
                    add: cs.iter().map(|&c| Elem(c)).collect(),
                });
            });
        });
        out
    }

    /// Exponent of χ(g) in ζ_{pN}.
    pub fn exponent(&self, ctx: &Ctx, g: &GroupElem) -> u64 {
        let f = ctx.field();
        let mut e = 0u64;
        for (c, &x) in self.mult.iter().zip(&g.mult) {
            e += c.exponent(f, x).expect("group elements are units");
        }
        for (&c, &a) in self.add.iter().zip(&g.add) {
            e += ctx.psi_exp(f.mul(c, a));
        }
        e % ctx.m() as u64
    }

    pub fn eval(&self, ctx: &Ctx, g: &GroupElem) -> CycloNum {
        CycloNum::zeta(ctx.m(), self.exponent(ctx, g) as i64)
    }

    /// χ ∘ (x ↦ x*A) on the multiplicative part: χ*ᵗA.
    pub fn pull_back(&self, a: &MatZ) -> Result<GroupChar> {
        Ok(GroupChar { mult: char_monomial(&self.mult, &a.transpose())?, add: self.add.clone() })
    }
}

impl VarietySpec {
    pub fn layout(&self) -> Layout {
        let (mult, add, free) = match self {
            VarietySpec::GeneralXDz { delta, z } => (delta.len(), delta.n() - delta.len(), z.rows()),
            VarietySpec::MXn { m, n, .. } => (2 * m + (n - m), n - m, 0),
            VarietySpec::FermatStar { n } => (*n, 0, 0),
            VarietySpec::ASStar => (1, 1, 0),
            VarietySpec::LauricellaD { lam } => (2 * lam.len() + 2, 0, 0),
            VarietySpec::LauricellaA { lam } => (3 * lam.len() + 1, 0, 0),
            VarietySpec::LauricellaC { lam } => (2 * lam.len() + 2, 0, 0),
            VarietySpec::Humbert1 { .. } => (5, 1, 0),
            VarietySpec::Humbert3 { .. } => (4, 2, 0),
        };
        Layout { mult, add, free }
    }

    /// Checks the parameters against the base field.
    pub fn validate(&self, f: &Field) -> Result<()> {
        let units = |v: &[Elem]| {
            if v.iter().any(|x| x.is_zero() || !f.contains(*x)) {
                Err(Error::Invalid("λ entries must lie in k*".into()))
            } else {
                Ok(())
            }
        };
        match self {
            VarietySpec::GeneralXDz { delta, z } => {
                delta.check_field(f)?;
                if z.cols() != delta.n() {
                    return Err(Error::Arity { expected: delta.n(), got: z.cols() });
                }
                Ok(())
            }
            VarietySpec::MXn { m, n, lam } => {
                if m > n {
                    return Err(Error::Invalid("ₘXₙ needs m ≤ n".into()));
                }
                units(&[*lam])
            }
            VarietySpec::FermatStar { n } if *n == 0 => Err(Error::Arity { expected: 1, got: 0 }),
            VarietySpec::FermatStar { .. } | VarietySpec::ASStar => Ok(()),
            VarietySpec::LauricellaD { lam } | VarietySpec::LauricellaA { lam } | VarietySpec::LauricellaC { lam } => {
                if lam.is_empty() {
                    return Err(Error::Arity { expected: 1, got: 0 });
                }
                units(lam)
            }
            VarietySpec::Humbert1 { lam } | VarietySpec::Humbert3 { lam } => units(lam),
        }
    }

    /// The same family with every parameter pushed through `emb`.
    pub fn map_params(&self, emb: impl Fn(Elem) -> Elem) -> VarietySpec {
        let v = |l: &[Elem]| l.iter().map(|&x| emb(x)).collect::<Vec<_>>();
        match self {
            VarietySpec::GeneralXDz { delta, z } => {
                let rows = z.to_rows().iter().map(|r| v(r)).collect();
                VarietySpec::GeneralXDz { delta: delta.clone(), z: MatK::from_rows(rows).expect("same shape") }
            }
            VarietySpec::MXn { m, n, lam } => VarietySpec::MXn { m: *m, n: *n, lam: emb(*lam) },
            VarietySpec::FermatStar { n } => VarietySpec::FermatStar { n: *n },
            VarietySpec::ASStar => VarietySpec::ASStar,
            VarietySpec::LauricellaD { lam } => VarietySpec::LauricellaD { lam: v(lam) },
            VarietySpec::LauricellaA { lam } => VarietySpec::LauricellaA { lam: v(lam) },
            VarietySpec::LauricellaC { lam } => VarietySpec::LauricellaC { lam: v(lam) },
            VarietySpec::Humbert1 { lam } => VarietySpec::Humbert1 { lam: [emb(lam[0]), emb(lam[1])] },
            VarietySpec::Humbert3 { lam } => VarietySpec::Humbert3 { lam: [emb(lam[0]), emb(lam[1])] },
        }
    }

    /// The defining equations evaluated on U = (x^N) for the multiplicative
    /// coordinates, S = (t^q − t) for the Artin–Schreier ones and the free
    /// coordinates s, all in the field `f` that holds the parameters.
    pub fn equations_hold(&self, f: &Field, u: &[Elem], s_as: &[Elem], free: &[Elem]) -> bool {
        let one = Elem::ONE;
        let sum = |v: &[Elem]| f.sum(v.iter().copied());
        let prod = |v: &[Elem]| f.product(v.iter().copied());
        match self {
            VarietySpec::GeneralXDz { delta, z } => {
                let x = z.left_mul_vec(f, free);
                let mut ai = 0;
                for ((&m, &o), (&ui, _)) in delta.parts().iter().zip(&delta.offsets()).zip(u.iter().zip(0..)) {
                    let blk = &x[o..o + m];
                    if blk[0] != ui {
                        return false;
                    }
                    // t^{Nj}(u^q − u) = θ̄_j(sz)  ⇔  S_j = θ_j(sz) since t^N = sz₀ ≠ 0
                    let th = match thetas(f, blk) {
                        Ok(t) => t,
                        Err(_) => return false,
                    };
                    for t in th {
                        if s_as[ai] != t {
                            return false;
                        }
                        ai += 1;
                    }
                }
                true
            }
            VarietySpec::MXn { m, n, lam } => {
                let (x, rest) = u.split_at(*m);
                let (y, zz) = rest.split_at(*m);
                if x.iter().zip(y).any(|(&a, &b)| f.add(a, b) != one) {
                    return false;
                }
                if zz.iter().zip(s_as).any(|(&a, &b)| a != b) {
                    return false;
                }
                let sign = if n % 2 == 0 { one } else { f.minus_one() };
                f.mul(f.mul(sign, *lam), prod(x)) == f.mul(prod(y), prod(zz))
            }
            VarietySpec::FermatStar { .. } => sum(u) == one,
            VarietySpec::ASStar => s_as[0] == u[0],
            VarietySpec::LauricellaD { lam } => {
                let k = lam.len() + 1;
                let (x, y) = u.split_at(k);
                x.iter().zip(y).all(|(&a, &b)| f.add(a, b) == one)
                    && lam.iter().enumerate().all(|(i, &l)| f.mul(l, f.mul(x[0], x[i + 1])) == f.mul(y[0], y[i + 1]))
            }
            VarietySpec::LauricellaA { lam } => {
                let k = lam.len();
                let (x, rest) = u.split_at(k + 1);
                let (y, zz) = rest.split_at(k);
                sum(x) == one
                    && y.iter().zip(zz).all(|(&a, &b)| f.add(a, b) == one)
                    && lam.iter().enumerate().all(|(i, &l)| f.mul(l, f.mul(x[0], y[i])) == f.mul(x[i + 1], zz[i]))
            }
            VarietySpec::LauricellaC { lam } => {
                let k = lam.len() + 1;
                let (x, y) = u.split_at(k);
                sum(x) == one
                    && sum(y) == one
                    && lam.iter().enumerate().all(|(i, &l)| f.mul(l, f.mul(x[0], y[0])) == f.mul(x[i + 1], y[i + 1]))
            }
            VarietySpec::Humbert1 { lam } => {
                // coordinates (x₁, x₂, y₁, y₂, z; t)
                let [x1, x2, y1, y2, zz] = [u[0], u[1], u[2], u[3], u[4]];
                f.add(x1, y1) == one
                    && f.add(x2, y2) == one
                    && s_as[0] == zz
                    && f.mul(lam[0], f.mul(x1, x2)) == f.mul(y1, y2)
                    && f.mul(lam[1], x1) == f.mul(y1, zz)
            }
            VarietySpec::Humbert3 { lam } => {
                // coordinates (x, y, z₁, z₂; t₁, t₂)
                let [x, y, z1, z2] = [u[0], u[1], u[2], u[3]];
                f.add(x, y) == one
                    && s_as[0] == z1
                    && s_as[1] == z2
                    && f.mul(lam[0], x) == f.mul(y, z1)
                    && lam[1] == f.mul(z1, z2)
            }
        }
    }
}

/// x * A = (Π_i x_i^{a_{i1}}, …) for x in (k*)^n.
pub fn monomial_map(f: &Field, x: &[Elem], a: &MatZ) -> Result<Vec<Elem>> {
    if x.len() != a.rows() {
        return Err(Error::Arity { expected: a.rows(), got: x.len() });
    }
    if x.iter().any(|v| v.is_zero()) {
        return Err(Error::ZeroInput("monomial map argument"));
    }
    Ok((0..a.cols())
        .map(|c| f.product(x.iter().enumerate().map(|(r, &v)| f.powi(v, a.get(r, c)))))
        .collect())
}

/// χ * A for characters: (Π_i χ_i^{a_{i1}}, …).
pub fn char_monomial(chi: &[MulChar], a: &MatZ) -> Result<Vec<MulChar>> {
    if chi.len() != a.rows() {
        return Err(Error::Arity { expected: a.rows(), got: chi.len() });
    }
    let n = chi.first().map(|c| c.group_order()).ok_or(Error::Arity { expected: 1, got: 0 })?;
    Ok((0..a.cols())
        .map(|c| MulChar::product(n, chi.iter().enumerate().map(|(r, &x)| x.pow(a.get(r, c)))))
        .collect())
}
