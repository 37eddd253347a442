//! Naive point counts, Λ_g and the character components N(X; χ).

use std::collections::HashMap;
use std::sync::Arc;

use crate::chars::MulChar;
use crate::cyclo::{CycloNum, RootSum};
use crate::error::{Error, Result};
use crate::ffield::{extend, Elem, Field};
use crate::genhgf::{phi_delta, thetas, HDeltaChar, JmChar};
use crate::hgf::{for_each_tuple, hgf, Humbert, Lauricella};
use crate::sums::Ctx;

use super::{GroupChar, GroupElem, Layout, VarietySpec};

/// Default bound on the number of tuples a naive enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// #X(k_r) for the defining equations read over k_r (with N and q those of
/// the base field).
pub fn naive_count(spec: &VarietySpec, base: &Arc<Field>, r: u32) -> Result<u64> {
    naive_count_with_budget(spec, base, r, DEFAULT_BUDGET)
}

/// Counts by grouping each coordinate by its value x^N (multiplicative),
/// t^q − t (Artin–Schreier) or itself (free), so every point of k_r^{…} is
/// accounted for exactly once.
pub fn naive_count_with_budget(spec: &VarietySpec, base: &Arc<Field>, r: u32, budget: u128) -> Result<u64> {
    spec.validate(base)?;
    let ext = extend(base, r)?;
    let kf = ext.field().clone();
    let target = spec.map_params(|x| ext.embed(x));
    let layout = spec.layout();
    let n = base.n() as u64;
    let q = base.q() as u64;

    let histogram = |vals: Vec<Elem>| {
        let mut h: HashMap<Elem, u64> = HashMap::new();
        for v in vals {
            *h.entry(v).or_default() += 1;
        }
        let mut v: Vec<(Elem, u64)> = h.into_iter().collect();
        v.sort();
        v
    };
    let pow_n = histogram(kf.units().map(|x| kf.pow(x, n)).collect());
    let as_map = histogram(kf.elements().map(|t| kf.sub(kf.pow(t, q), t)).collect());
    let free: Vec<(Elem, u64)> = kf.elements().map(|x| (x, 1)).collect();

    let size = (pow_n.len() as u128).pow(layout.mult as u32)
        * (as_map.len() as u128).pow(layout.add as u32)
        * (free.len() as u128).pow(layout.free as u32);
    if size > budget {
        return Err(Error::Budget { size, budget });
    }

    let mut total = 0u64;
    let mut u = vec![Elem::ZERO; layout.mult];
    let mut s = vec![Elem::ZERO; layout.add];
    let mut z = vec![Elem::ZERO; layout.free];
    for_each_tuple(layout.mult, pow_n.len() as u32, |iu| {
        let mut wu = 1u64;
        for (k, &i) in iu.iter().enumerate() {
            u[k] = pow_n[i as usize].0;
            wu *= pow_n[i as usize].1;
        }
        for_each_tuple(layout.add, as_map.len() as u32, |ia| {
            let mut wa = wu;
            for (k, &i) in ia.iter().enumerate() {
                s[k] = as_map[i as usize].0;
                wa *= as_map[i as usize].1;
            }
            for_each_tuple(layout.free, free.len() as u32, |iz| {
                for (k, &i) in iz.iter().enumerate() {
                    z[k] = free[i as usize].0;
                }
                if target.equations_hold(&kf, &u, &s, &z) {
                    total += wa;
                }
            });
        });
    });
    Ok(total)
}

fn group_order(f: &Field, layout: Layout) -> u64 {
    (f.n() as u64).pow(layout.mult as u32) * (f.q() as u64).pow(layout.add as u32)
}

fn check_elem(f: &Field, layout: Layout, g: &GroupElem) -> Result<()> {
    if g.mult.len() != layout.mult {
        return Err(Error::Arity { expected: layout.mult, got: g.mult.len() });
    }
    if g.add.len() != layout.add {
        return Err(Error::Arity { expected: layout.add, got: g.add.len() });
    }
    if g.mult.iter().any(|x| x.is_zero() || !f.contains(*x)) || g.add.iter().any(|x| !f.contains(*x)) {
        return Err(Error::Invalid("group element outside (k*)^m × k^a".into()));
    }
    Ok(())
}

fn check_char(ctx: &Ctx, layout: Layout, chi: &GroupChar) -> Result<()> {
    if chi.mult.len() != layout.mult {
        return Err(Error::Arity { expected: layout.mult, got: chi.mult.len() });
    }
    if chi.add.len() != layout.add {
        return Err(Error::Arity { expected: layout.add, got: chi.add.len() });
    }
    for c in &chi.mult {
        if c.group_order() != ctx.n() {
            return Err(Error::FieldMismatch(c.group_order(), ctx.n()));
        }
    }
    Ok(())
}

/// δ′(g): the number of free coordinates s for which the reduced system
/// holds at (U, S) = g.
fn delta_prime(f: &Field, spec: &VarietySpec, g: &GroupElem) -> u64 {
    let d = spec.layout().free;
    let mut count = 0;
    for_each_tuple(d, f.q(), |codes| {
        let s: Vec<Elem> = codes.iter().map(|&c| Elem(c)).collect();
        if spec.equations_hold(f, &g.mult, &g.add, &s) {
            count += 1;
        }
    });
    count
}

/// Λ_g = #{P ∈ X(k̄) | Frob(P) = g·P} = #G · δ′(g).
pub fn lambda_g(ctx: &Ctx, spec: &VarietySpec, g: &GroupElem) -> Result<u64> {
    let f = ctx.field();
    spec.validate(f)?;
    let layout = spec.layout();
    check_elem(f, layout, g)?;
    Ok(group_order(f, layout) * delta_prime(f, spec, g))
}

/// The group elements with δ′(g) ≠ 0, each with its multiplicity.
#[derive(Clone, Debug)]
pub struct Support {
    pub layout: Layout,
    pub group_order: u64,
    pub entries: Vec<(GroupElem, u64)>,
}

impl Support {
    pub fn new(ctx: &Ctx, spec: &VarietySpec) -> Result<Self> {
        let f = ctx.field();
        spec.validate(f)?;
        let layout = spec.layout();
        let mut entries = Vec::new();
        if let VarietySpec::GeneralXDz { delta, z } = spec {
            // every s with nonzero leading entries lands on exactly one g
            let mut acc: HashMap<GroupElem, u64> = HashMap::new();
            let offsets = delta.offsets();
            let mut err = None;
            for_each_tuple(z.rows(), f.q(), |codes| {
                let s: Vec<Elem> = codes.iter().map(|&c| Elem(c)).collect();
                let v = z.left_mul_vec(f, &s);
                let mut g = GroupElem { mult: Vec::new(), add: Vec::new() };
                for (&m, &o) in delta.parts().iter().zip(&offsets) {
                    let x = &v[o..o + m];
                    if x[0].is_zero() {
                        return;
                    }
                    g.mult.push(x[0]);
                    match thetas(f, x) {
                        Ok(t) => g.add.extend(t),
                        Err(e) => err = Some(e),
                    }
                }
                *acc.entry(g).or_default() += 1;
            });
            if let Some(e) = err {
                return Err(e);
            }
            entries.extend(acc);
        } else {
            let units: Vec<Elem> = f.units().collect();
            for_each_tuple(layout.mult, units.len() as u32, |iu| {
                let mult: Vec<Elem> = iu.iter().map(|&i| units[i as usize]).collect();
                for_each_tuple(layout.add, f.q(), |ia| {
                    let g = GroupElem { mult: mult.clone(), add: ia.iter().map(|&c| Elem(c)).collect() };
                    if spec.equations_hold(f, &g.mult, &g.add, &[]) {
                        entries.push((g, 1));
                    }
                });
            });
        }
        entries.sort_by(|a, b| (&a.0.mult, &a.0.add).cmp(&(&b.0.mult, &b.0.add)));
        Ok(Support { layout, group_order: group_order(f, layout), entries })
    }

    /// #X(k) = Λ_1 = #G·δ′(1).
    pub fn point_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|(g, _)| g.mult.iter().all(|&x| x == Elem::ONE) && g.add.iter().all(|x| x.is_zero()))
            .map(|(_, c)| *c * self.group_order)
            .sum()
    }

    /// N(X; χ) = Σ_g δ′(g) χ(g).
    pub fn n_chi(&self, ctx: &Ctx, chi: &GroupChar) -> Result<CycloNum> {
        check_char(ctx, self.layout, chi)?;
        let mut acc = RootSum::new(ctx.m());
        for (g, c) in &self.entries {
            acc.add(chi.exponent(ctx, g), *c as i64);
        }
        Ok(acc.finish())
    }
}

/// N(X; χ) := (1/#G) Σ_g χ(g) Λ_g.
pub fn n_chi(ctx: &Ctx, spec: &VarietySpec, chi: &GroupChar) -> Result<CycloNum> {
    check_char(ctx, spec.layout(), chi)?;
    Support::new(ctx, spec)?.n_chi(ctx, chi)
}

fn hypothesis(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(what.into()))
    }
}

/// The closed-form value of N(X; χ) in terms of Gauss and Jacobi sums and
/// the hypergeometric function attached to the family.
pub fn n_chi_closed_form(ctx: &Ctx, spec: &VarietySpec, chi: &GroupChar) -> Result<CycloNum> {
    let f = ctx.field();
    spec.validate(f)?;
    check_char(ctx, spec.layout(), chi)?;
    let n_ = ctx.n();
    let jac2 = |a: MulChar, b: MulChar| ctx.jacobi(&[a, b]);
    let conj = |v: &[MulChar]| v.iter().map(|x| x.conj()).collect::<Vec<_>>();
    // g(γ)·γ̄(c) for an additive factor
    let as_factor = |g: MulChar, c: Elem| -> Result<CycloNum> {
        hypothesis(!c.is_zero(), "additive character components must be nontrivial")?;
        Ok(ctx.gauss(g).mul_ref(&ctx.chi(g.conj(), c)))
    };
    let pairs = |a: &[MulChar], b: &[MulChar]| -> Result<CycloNum> {
        let mut v = ctx.one();
        for (&x, &y) in a.iter().zip(b) {
            hypothesis(!x.mul(y).is_trivial(), "α_i β_i ≠ ε")?;
            v = v.mul_ref(&jac2(x, y)?);
        }
        Ok(v)
    };
    let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    let m = &chi.mult;
    match spec {
        VarietySpec::GeneralXDz { delta, z } => {
            let mut blocks = Vec::with_capacity(delta.len());
            let mut ai = 0;
            for (i, &part) in delta.parts().iter().enumerate() {
                blocks.push(JmChar::new(m[i], chi.add[ai..ai + part - 1].to_vec()));
                ai += part - 1;
            }
            phi_delta(ctx, &HDeltaChar::new(delta, blocks)?, z)
        }
        VarietySpec::MXn { m: mm, n, lam } => {
            let (a, rest) = m.split_at(*mm);
            let (b, g) = rest.split_at(*mm);
            let mut coef = pairs(a, b)?;
            let mut c = Elem::ONE;
            for (&gj, &cj) in g.iter().zip(&chi.add) {
                coef = coef.mul_ref(&as_factor(gj, cj)?);
                c = f.mul(c, cj);
            }
            let mut lower = conj(b);
            lower.extend(conj(g));
            let v = hgf(ctx, a, &lower, f.mul(c, *lam));
            Ok(coef.mul_ref(&v).scale_int(sign(n + 1)))
        }
        // j(α) of a single character is 1: the only point is x = 1
        VarietySpec::FermatStar { n: 1 } => Ok(ctx.one()),
        VarietySpec::FermatStar { n } => Ok(ctx.jacobi(m)?.scale_int(sign(n - 1))),
        VarietySpec::ASStar => {
            // (ξ, a) ↦ α(ξ)ψ(ca): substituting z ↦ c z on the curve gives ᾱ(c)
            Ok(as_factor(m[0], chi.add[0])?.neg_ref())
        }
        VarietySpec::LauricellaD { lam } => {
            let k = lam.len() + 1;
            let (a, b) = m.split_at(k);
            let coef = pairs(a, b)?;
            let fd = Lauricella::D { a: a[0], b: a[1..].to_vec(), c: b[0].conj(), d: conj(&b[1..]) };
            Ok(coef.mul_ref(&fd.eval(ctx, lam)?).neg_ref())
        }
        VarietySpec::LauricellaA { lam } => {
            let k = lam.len();
            let (a, rest) = m.split_at(k + 1);
            let (b, g) = rest.split_at(k);
            hypothesis(!MulChar::product(n_, a.iter().copied()).is_trivial(), "α₀⋯αₙ ≠ ε")?;
            let coef = ctx.jacobi(a)?.mul_ref(&pairs(b, g)?);
            let fa = Lauricella::A { a: a[0], b: b.to_vec(), c: conj(&a[1..]), d: conj(g) };
            Ok(coef.mul_ref(&fa.eval(ctx, lam)?).scale_int(sign(k)))
        }
        VarietySpec::LauricellaC { lam } => {
            let k = lam.len() + 1;
            let (a, b) = m.split_at(k);
            hypothesis(!MulChar::product(n_, a.iter().copied()).is_trivial(), "α₀⋯αₙ ≠ ε")?;
            hypothesis(!MulChar::product(n_, b.iter().copied()).is_trivial(), "β₀⋯βₙ ≠ ε")?;
            let coef = ctx.jacobi(a)?.mul_ref(&ctx.jacobi(b)?);
            let fc = Lauricella::C { a: a[0], b: b[0], c: conj(&a[1..]), d: conj(&b[1..]) };
            Ok(coef.mul_ref(&fc.eval(ctx, lam)?).scale_int(sign(k - 1)))
        }
        VarietySpec::Humbert1 { lam } => {
            let [a1, a2, b1, b2, g] = [m[0], m[1], m[2], m[3], m[4]];
            let c = chi.add[0];
            let coef = as_factor(g, c)?.mul_ref(&pairs(&[a1, a2], &[b1, b2])?);
            let phi = Humbert::Phi1 { a: a1, b: a2, c: b1.conj(), d1: b2.conj(), d2: g.conj() };
            Ok(coef.mul_ref(&phi.eval(ctx, lam[0], f.mul(c, lam[1]))).neg_ref())
        }
        VarietySpec::Humbert3 { lam } => {
            let [a, b, g1, g2] = [m[0], m[1], m[2], m[3]];
            let (c1, c2) = (chi.add[0], chi.add[1]);
            let coef = as_factor(g1, c1)?.mul_ref(&as_factor(g2, c2)?).mul_ref(&pairs(&[a], &[b])?);
            let phi = Humbert::Phi3 { b: a, c: g1.conj(), d1: b.conj(), d2: g2.conj() };
            let v = phi.eval(ctx, f.mul(c1, lam[0]), f.mul(f.mul(c1, c2), lam[1]));
            Ok(coef.mul_ref(&v).neg_ref())
        }
    }
}
