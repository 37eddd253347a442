//! Hypergeometric functions over k built from Pochhammer symbols: the
//! one-variable F (and the classical ₘFₙ), Appell–Lauricella F_A…F_D,
//! Humbert Φ₁–Φ₃, the discrete Fourier transform on (k*)^n and the four
//! integral-type "iteration" transforms.

use serde::{Deserialize, Serialize};

use crate::chars::MulChar;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ffield::Elem;
use crate::sums::Ctx;

/// Walks every tuple in {0, …, base−1}^n (little-endian odometer).
pub fn for_each_tuple(n: usize, base: u32, mut visit: impl FnMut(&[u32])) {
    if n > 0 && base == 0 {
        return;
    }
    let mut t = vec![0u32; n];
    loop {
        visit(&t);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            t[k] += 1;
            if t[k] < base {
                break;
            }
            t[k] = 0;
            k += 1;
        }
    }
}

/// 1/(1−q)^n · Σ_{ν ∈ (k̂*)^n} coef(ν) · Π ν_i(λ_i).
///
/// Every term vanishes as soon as some λ_i = 0 (ν(0) = 0 for all ν).
pub fn character_sum(ctx: &Ctx, lam: &[Elem], mut coef: impl FnMut(&[MulChar]) -> CycloNum) -> CycloNum {
    let f = ctx.field();
    if lam.iter().any(|x| x.is_zero()) {
        return ctx.zero();
    }
    let logs: Vec<u64> = lam.iter().map(|&x| f.log_unit(x) as u64).collect();
    let (n, p, big_n) = (lam.len(), f.p() as u64, f.n() as u64);
    let mut acc = ctx.zero();
    let mut nus = vec![ctx.eps(); n];
    for_each_tuple(n, f.n(), |js| {
        let mut e = 0u64;
        for i in 0..n {
            nus[i] = ctx.chr(js[i] as i64);
            e += p * ((js[i] as u64 * logs[i]) % big_n);
        }
        let c = coef(&nus);
        if !c.is_zero() {
            acc = acc.add_ref(&c.mul_zeta(e as i64));
        }
    });
    let scale = (1 - ctx.q()).pow(n as u32);
    acc.div_int(scale)
}

/// Parameters of F(α_1, …, α_m; β_1, …, β_{n+1}; λ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HgfParams {
    pub upper: Vec<MulChar>,
    pub lower: Vec<MulChar>,
}

impl HgfParams {
    pub fn new(upper: Vec<MulChar>, lower: Vec<MulChar>) -> Self {
        HgfParams { upper, lower }
    }

    /// ₘFₙ(α; β): the lower list gets ε appended.
    pub fn classical(upper: Vec<MulChar>, mut lower: Vec<MulChar>, n: u32) -> Self {
        lower.push(MulChar::trivial(n));
        HgfParams { upper, lower }
    }

    pub fn is_classical(&self) -> bool {
        self.lower.last().is_some_and(|b| b.is_trivial())
    }

    pub fn eval(&self, ctx: &Ctx, lam: Elem) -> CycloNum {
        hgf(ctx, &self.upper, &self.lower, lam)
    }

    /// The Fourier coefficient ν ↦ Π(α_i)_ν / Π(β_j)°_ν (the transform of F
    /// up to the factor −1).
    pub fn coefficient(&self, ctx: &Ctx, nu: MulChar) -> CycloNum {
        let mut c = ctx.one();
        for &a in &self.upper {
            c = c.mul_ref(ctx.pochhammer(a, nu));
        }
        for &b in &self.lower {
            c = c.mul_ref(ctx.pochhammer_circ_inv(b, nu));
        }
        c
    }
}

/// F(α; β; λ) = 1/(1−q) Σ_ν Π(α_i)_ν / Π(β_j)°_ν · ν(λ).
pub fn hgf(ctx: &Ctx, upper: &[MulChar], lower: &[MulChar], lam: Elem) -> CycloNum {
    let params = HgfParams::new(upper.to_vec(), lower.to_vec());
    character_sum(ctx, &[lam], |nu| params.coefficient(ctx, nu[0]))
}

/// ₘFₙ(α; β; λ) = F(α; β, ε; λ).
pub fn mfn(ctx: &Ctx, upper: &[MulChar], lower: &[MulChar], lam: Elem) -> CycloNum {
    let mut l = lower.to_vec();
    l.push(ctx.eps());
    hgf(ctx, upper, &l, lam)
}

/// Result of shifting parameters to classical notation:
/// F(params; λ) = prefactor · twist(λ) · F(classical; λ).
#[derive(Clone, Debug)]
pub struct ShiftedParams {
    pub prefactor: CycloNum,
    pub twist: MulChar,
    pub classical: HgfParams,
}

impl ShiftedParams {
    pub fn eval(&self, ctx: &Ctx, lam: Elem) -> CycloNum {
        self.prefactor.mul_ref(&ctx.chi(self.twist, lam)).mul_ref(&self.classical.eval(ctx, lam))
    }
}

/// Rewrites F(α; β_1, …, β_{n+1}) with last lower parameter β = β_{n+1} as
/// Π(α_i)_{β̄}/Π(β_j)°_{β̄} · β̄(λ) · F(α_iβ̄; β_jβ̄).
pub fn shift_parameters(ctx: &Ctx, params: &HgfParams) -> Result<ShiftedParams> {
    let beta = *params.lower.last().ok_or(Error::Arity { expected: 1, got: 0 })?;
    let bb = beta.conj();
    let mut prefactor = ctx.one();
    for &a in &params.upper {
        prefactor = prefactor.mul_ref(ctx.pochhammer(a, bb));
    }
    for &b in &params.lower {
        prefactor = prefactor.mul_ref(ctx.pochhammer_circ_inv(b, bb));
    }
    let classical = HgfParams {
        upper: params.upper.iter().map(|a| a.mul(bb)).collect(),
        lower: params.lower.iter().map(|b| b.mul(bb)).collect(),
    };
    Ok(ShiftedParams { prefactor, twist: bb, classical })
}

/// F(α_1..α_m; β_1..β_n; λ) = F(β̄_1..β̄_n; ᾱ_1..ᾱ_m; (−1)^{m−n}/λ).
pub fn inverse_relation(ctx: &Ctx, params: &HgfParams, lam: Elem) -> Result<(HgfParams, Elem)> {
    let f = ctx.field();
    if lam.is_zero() {
        return Err(Error::ZeroInput("inverse relation argument"));
    }
    let (m, n) = (params.upper.len() as i64, params.lower.len() as i64);
    let sign = if (m - n).rem_euclid(2) == 0 { Elem::ONE } else { f.minus_one() };
    let new = HgfParams {
        upper: params.lower.iter().map(|b| b.conj()).collect(),
        lower: params.upper.iter().map(|a| a.conj()).collect(),
    };
    Ok((new, f.div(sign, lam)))
}

// ---------------------------------------------------------------------------
// Appell–Lauricella functions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LauricellaKind {
    A,
    B,
    C,
    D,
}

/// Lauricella functions in n variables, with the parameter names of the
/// displayed definitions: F_A(α; β_i; γ_i; δ_i), F_B(α_i; β_i; γ; δ_i),
/// F_C(α; β; γ_i; δ_i), F_D(α; β_i; γ; δ_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lauricella {
    A { a: MulChar, b: Vec<MulChar>, c: Vec<MulChar>, d: Vec<MulChar> },
    B { a: Vec<MulChar>, b: Vec<MulChar>, c: MulChar, d: Vec<MulChar> },
    C { a: MulChar, b: MulChar, c: Vec<MulChar>, d: Vec<MulChar> },
    D { a: MulChar, b: Vec<MulChar>, c: MulChar, d: Vec<MulChar> },
}

impl Lauricella {
    pub fn kind(&self) -> LauricellaKind {
        match self {
            Lauricella::A { .. } => LauricellaKind::A,
            Lauricella::B { .. } => LauricellaKind::B,
            Lauricella::C { .. } => LauricellaKind::C,
            Lauricella::D { .. } => LauricellaKind::D,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Lauricella::A { d, .. }
            | Lauricella::B { d, .. }
            | Lauricella::C { d, .. }
            | Lauricella::D { d, .. } => d.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let lens: Vec<usize> = match self {
            Lauricella::A { b, c, .. } => vec![b.len(), c.len()],
            Lauricella::B { a, b, .. } => vec![a.len(), b.len()],
            Lauricella::C { c, .. } => vec![c.len()],
            Lauricella::D { b, .. } => vec![b.len()],
        };
        for l in lens {
            if l != n {
                return Err(Error::Arity { expected: n, got: l });
            }
        }
        if n == 0 {
            return Err(Error::Arity { expected: 1, got: 0 });
        }
        Ok(())
    }

    /// Exact value; F_B goes through its rewrite as an F_A at 1/λ.
    pub fn eval(&self, ctx: &Ctx, lam: &[Elem]) -> Result<CycloNum> {
        self.validate()?;
        if lam.len() != self.n() {
            return Err(Error::Arity { expected: self.n(), got: lam.len() });
        }
        if let Lauricella::B { .. } = self {
            if lam.iter().any(|x| x.is_zero()) {
                return Ok(ctx.zero());
            }
            let (fa, inv) = self.b_as_a(ctx, lam)?;
            return fa.eval(ctx, &inv);
        }
        Ok(self.eval_direct(ctx, lam))
    }

    /// F_B(α_i; β_i; γ; δ_i; λ) = F_A(γ̄; δ̄_i; ᾱ_i; β̄_i; 1/λ) for λ ∈ (k*)^n.
    pub fn b_as_a(&self, ctx: &Ctx, lam: &[Elem]) -> Result<(Lauricella, Vec<Elem>)> {
        match self {
            Lauricella::B { a, b, c, d } => {
                let f = ctx.field();
                let inv = lam.iter().map(|&x| f.try_inv(x)).collect::<Result<Vec<_>>>()?;
                let conj = |v: &[MulChar]| v.iter().map(|x| x.conj()).collect::<Vec<_>>();
                Ok((Lauricella::A { a: c.conj(), b: conj(d), c: conj(a), d: conj(b) }, inv))
            }
            _ => Err(Error::Invalid("only F_B has an F_A rewrite".into())),
        }
    }

    /// The defining n-fold character sum (for every kind, including F_B).
    pub fn eval_direct(&self, ctx: &Ctx, lam: &[Elem]) -> CycloNum {
        let n = ctx.n();
        character_sum(ctx, lam, |nu| {
            let prod = MulChar::product(n, nu.iter().copied());
            let mut c = ctx.one();
            let mut mul = |x: &CycloNum| c = c.mul_ref(x);
            match self {
                Lauricella::A { a, b, c: g, d } => {
                    mul(ctx.pochhammer(*a, prod));
                    for i in 0..nu.len() {
                        mul(ctx.pochhammer(b[i], nu[i]));
                        mul(ctx.pochhammer_circ_inv(g[i], nu[i]));
                        mul(ctx.pochhammer_circ_inv(d[i], nu[i]));
                    }
                }
                Lauricella::B { a, b, c: g, d } => {
                    mul(ctx.pochhammer_circ_inv(*g, prod));
                    for i in 0..nu.len() {
                        mul(ctx.pochhammer(a[i], nu[i]));
                        mul(ctx.pochhammer(b[i], nu[i]));
                        mul(ctx.pochhammer_circ_inv(d[i], nu[i]));
                    }
                }
                Lauricella::C { a, b, c: g, d } => {
                    mul(ctx.pochhammer(*a, prod));
                    mul(ctx.pochhammer(*b, prod));
                    for i in 0..nu.len() {
                        mul(ctx.pochhammer_circ_inv(g[i], nu[i]));
                        mul(ctx.pochhammer_circ_inv(d[i], nu[i]));
                    }
                }
                Lauricella::D { a, b, c: g, d } => {
                    mul(ctx.pochhammer(*a, prod));
                    mul(ctx.pochhammer_circ_inv(*g, prod));
                    for i in 0..nu.len() {
                        mul(ctx.pochhammer(b[i], nu[i]));
                        mul(ctx.pochhammer_circ_inv(d[i], nu[i]));
                    }
                }
            }
            c
        })
    }
}

// ---------------------------------------------------------------------------
// Humbert functions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HumbertKind {
    Phi1,
    Phi2,
    Phi3,
}

/// Φ₁(α; β; γ; δ₁, δ₂), Φ₂(β, β′; γ; δ₁, δ₂), Φ₃(β; γ; δ₁, δ₂).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Humbert {
    Phi1 { a: MulChar, b: MulChar, c: MulChar, d1: MulChar, d2: MulChar },
    Phi2 { b: MulChar, b2: MulChar, c: MulChar, d1: MulChar, d2: MulChar },
    Phi3 { b: MulChar, c: MulChar, d1: MulChar, d2: MulChar },
}

impl Humbert {
    pub fn kind(&self) -> HumbertKind {
        match self {
            Humbert::Phi1 { .. } => HumbertKind::Phi1,
            Humbert::Phi2 { .. } => HumbertKind::Phi2,
            Humbert::Phi3 { .. } => HumbertKind::Phi3,
        }
    }

    pub fn eval(&self, ctx: &Ctx, l1: Elem, l2: Elem) -> CycloNum {
        character_sum(ctx, &[l1, l2], |nu| {
            let (mu, nv) = (nu[0], nu[1]);
            let mn = mu.mul(nv);
            let mut v = ctx.one();
            let mut mul = |x: &CycloNum| v = v.mul_ref(x);
            match self {
                Humbert::Phi1 { a, b, c, d1, d2 } => {
                    mul(ctx.pochhammer(*a, mn));
                    mul(ctx.pochhammer(*b, mu));
                    mul(ctx.pochhammer_circ_inv(*c, mn));
                    mul(ctx.pochhammer_circ_inv(*d1, mu));
                    mul(ctx.pochhammer_circ_inv(*d2, nv));
                }
                Humbert::Phi2 { b, b2, c, d1, d2 } => {
                    mul(ctx.pochhammer(*b, mu));
                    mul(ctx.pochhammer(*b2, nv));
                    mul(ctx.pochhammer_circ_inv(*c, mn));
                    mul(ctx.pochhammer_circ_inv(*d1, mu));
                    mul(ctx.pochhammer_circ_inv(*d2, nv));
                }
                Humbert::Phi3 { b, c, d1, d2 } => {
                    mul(ctx.pochhammer(*b, mu));
                    mul(ctx.pochhammer_circ_inv(*c, mn));
                    mul(ctx.pochhammer_circ_inv(*d1, mu));
                    mul(ctx.pochhammer_circ_inv(*d2, nv));
                }
            }
            v
        })
    }
}

// ---------------------------------------------------------------------------
// Fourier analysis on (k*)^n

/// A function on (k*)^n — or, for transforms, on (k̂*)^n — stored densely.
/// The entry for (t_1, …, t_n) sits at Σ_i log(t_i)·N^i; the entry for
/// (χ_{j_1}, …, χ_{j_n}) at Σ_i j_i·N^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFn {
    pub vars: usize,
    pub values: Vec<CycloNum>,
}

impl TorusFn {
    pub fn from_fn(ctx: &Ctx, vars: usize, mut f: impl FnMut(&[Elem]) -> CycloNum) -> Self {
        let fld = ctx.field();
        let mut values = Vec::with_capacity((ctx.n() as usize).pow(vars as u32));
        let mut pt = vec![Elem::ONE; vars];
        for_each_tuple(vars, ctx.n(), |ls| {
            for i in 0..vars {
                pt[i] = fld.exp(ls[i] as u64);
            }
            values.push(f(&pt));
        });
        TorusFn { vars, values }
    }

    pub fn from_char_fn(ctx: &Ctx, vars: usize, mut f: impl FnMut(&[MulChar]) -> CycloNum) -> Self {
        let mut values = Vec::with_capacity((ctx.n() as usize).pow(vars as u32));
        let mut nus = vec![ctx.eps(); vars];
        for_each_tuple(vars, ctx.n(), |js| {
            for i in 0..vars {
                nus[i] = ctx.chr(js[i] as i64);
            }
            values.push(f(&nus));
        });
        TorusFn { vars, values }
    }

    fn index_of_logs(n: u32, logs: impl Iterator<Item = u32>) -> usize {
        let mut idx = 0usize;
        let mut w = 1usize;
        for l in logs {
            idx += l as usize * w;
            w *= n as usize;
        }
        idx
    }

    /// Value at a point of (k*)^n.
    pub fn at(&self, ctx: &Ctx, t: &[Elem]) -> &CycloNum {
        assert_eq!(t.len(), self.vars, "arity mismatch");
        let f = ctx.field();
        &self.values[Self::index_of_logs(ctx.n(), t.iter().map(|&x| f.log_unit(x)))]
    }

    /// Value at a character tuple.
    pub fn at_char(&self, ctx: &Ctx, nu: &[MulChar]) -> &CycloNum {
        assert_eq!(nu.len(), self.vars, "arity mismatch");
        &self.values[Self::index_of_logs(ctx.n(), nu.iter().map(|c| c.index()))]
    }
}

/// f̂(ν) = Σ_{t ∈ (k*)^n} f(t) Π ν̄_i(t_i).
pub fn dft(ctx: &Ctx, f: &TorusFn) -> TorusFn {
    transform(ctx, f, -1)
}

/// f(λ) = 1/(q−1)^n Σ_ν f̂(ν) Π ν_i(λ_i).
pub fn idft(ctx: &Ctx, fh: &TorusFn) -> TorusFn {
    let t = transform(ctx, fh, 1);
    let scale = (ctx.n() as i64).pow(fh.vars as u32);
    TorusFn { vars: t.vars, values: t.values.iter().map(|v| v.div_int(scale)).collect() }
}

fn transform(ctx: &Ctx, f: &TorusFn, sign: i64) -> TorusFn {
    let (n, vars) = (ctx.n() as u64, f.vars);
    let p = ctx.field().p() as i64;
    let size = f.values.len();
    let digits = |mut idx: usize| -> Vec<u64> {
        (0..vars)
            .map(|_| {
                let d = (idx as u64) % n;
                idx /= n as usize;
                d
            })
            .collect()
    };
    let all: Vec<Vec<u64>> = (0..size).map(digits).collect();
    let values = all
        .iter()
        .map(|js| {
            let mut acc = ctx.zero();
            for (t_idx, ls) in all.iter().enumerate() {
                let v = &f.values[t_idx];
                if v.is_zero() {
                    continue;
                }
                let e: u64 = js.iter().zip(ls).map(|(j, l)| (j * l) % n).sum();
                acc = acc.add_ref(&v.mul_zeta(sign * p * e as i64));
            }
            acc
        })
        .collect();
    TorusFn { vars, values }
}

/// The four integral transforms relating f̂ to Jacobi/Gauss-sum kernels.
/// For clauses I and II, `betas` = (β_1, …, β_i) determines i; clauses III
/// and IV act on the first `i` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Iteration {
    I { alpha: MulChar, betas: Vec<MulChar> },
    II { alpha: MulChar, betas: Vec<MulChar> },
    III { alpha: MulChar, beta: MulChar, i: usize },
    IV { alpha: MulChar, i: usize },
}

impl Iteration {
    pub fn i(&self) -> usize {
        match self {
            Iteration::I { betas, .. } | Iteration::II { betas, .. } => betas.len(),
            Iteration::III { i, .. } | Iteration::IV { i, .. } => *i,
        }
    }

    /// Checks the non-degeneracy hypothesis of the clause.
    pub fn validate(&self, vars: usize) -> Result<()> {
        let i = self.i();
        if i == 0 || i > vars {
            return Err(Error::Invalid(format!("clause acts on {i} of {vars} variables")));
        }
        match self {
            Iteration::I { alpha, betas } | Iteration::II { alpha, betas } => {
                let n = alpha.group_order();
                if alpha.conj().mul(MulChar::product(n, betas.iter().copied())).is_trivial() {
                    return Err(Error::Hypothesis("ᾱβ_1⋯β_i must be nontrivial".into()));
                }
            }
            Iteration::III { alpha, beta, .. } => {
                if alpha.div(*beta).is_trivial() {
                    return Err(Error::Hypothesis("αβ̄ must be nontrivial".into()));
                }
            }
            Iteration::IV { .. } => {}
        }
        Ok(())
    }

    /// Left-hand side, computed from the Fourier transform f̂.
    pub fn lhs(&self, ctx: &Ctx, fh: &TorusFn, lam: &[Elem]) -> Result<CycloNum> {
        self.validate(fh.vars)?;
        if lam.len() != fh.vars {
            return Err(Error::Arity { expected: fh.vars, got: lam.len() });
        }
        let i = self.i();
        let n = ctx.n();
        let kernel = |nu: &[MulChar]| -> CycloNum {
            let head = MulChar::product(n, nu[..i].iter().copied());
            let mut c = ctx.one();
            match self {
                Iteration::I { alpha, betas } => {
                    c = c.mul_ref(ctx.pochhammer(*alpha, head));
                    for (b, v) in betas.iter().zip(nu) {
                        c = c.mul_ref(ctx.pochhammer_circ_inv(*b, *v));
                    }
                }
                Iteration::II { alpha, betas } => {
                    c = c.mul_ref(ctx.pochhammer_circ_inv(*alpha, head));
                    for (b, v) in betas.iter().zip(nu) {
                        c = c.mul_ref(ctx.pochhammer(*b, *v));
                    }
                }
                Iteration::III { alpha, beta, .. } => {
                    c = c.mul_ref(ctx.pochhammer(*alpha, head));
                    c = c.mul_ref(ctx.pochhammer_circ_inv(*beta, head));
                }
                Iteration::IV { alpha, .. } => {
                    c = c.mul_ref(ctx.pochhammer_circ_inv(*alpha, head));
                }
            }
            c
        };
        // character_sum divides by (1−q)^n; we need 1/(q−1)^n.
        let mut sum = character_sum(ctx, lam, |nu| fh.at_char(ctx, nu).mul_ref(&kernel(nu)));
        if fh.vars % 2 == 1 {
            sum = sum.neg_ref();
        }
        let front = match self {
            Iteration::I { alpha, betas } => {
                let mut chis = vec![alpha.conj().mul(MulChar::product(n, betas.iter().copied()))];
                chis.extend(betas.iter().map(|b| b.conj()));
                let j = ctx.jacobi(&chis)?;
                if i % 2 == 1 {
                    j.neg_ref()
                } else {
                    j
                }
            }
            Iteration::II { alpha, betas } => {
                let mut chis = vec![alpha.mul(MulChar::product(n, betas.iter().copied()).conj())];
                chis.extend(betas.iter().copied());
                let j = ctx.jacobi(&chis)?;
                if i % 2 == 1 {
                    j.neg_ref()
                } else {
                    j
                }
            }
            Iteration::III { alpha, beta, .. } => ctx.jacobi(&[*alpha, alpha.conj().mul(*beta)])?.neg_ref(),
            Iteration::IV { alpha, .. } => ctx.gauss(alpha.conj()).neg_ref(),
        };
        Ok(front.mul_ref(&sum))
    }

    /// Right-hand side: the convolution of f against the clause's kernel.
    pub fn rhs(&self, ctx: &Ctx, f: &TorusFn, lam: &[Elem]) -> Result<CycloNum> {
        self.validate(f.vars)?;
        if lam.len() != f.vars || lam.iter().any(|x| x.is_zero()) {
            return Err(Error::Invalid("λ must lie in (k*)^n".into()));
        }
        let fld = ctx.field();
        let i = self.i();
        let n = ctx.n();
        let mut acc = ctx.zero();
        let mut arg = lam.to_vec();
        let mut add = |arg: &[Elem], e: Option<u64>| {
            if let Some(e) = e {
                acc = acc.add_ref(&f.at(ctx, arg).mul_zeta(e as i64));
            }
        };
        let exp = |c: MulChar, x: Elem| c.exponent(fld, x);
        match self {
            Iteration::I { alpha, betas } | Iteration::II { alpha, betas } => {
                let prod = MulChar::product(n, betas.iter().copied());
                let (outer, divide) = match self {
                    Iteration::I { .. } => (alpha.conj().mul(prod), true),
                    _ => (alpha.mul(prod.conj()), false),
                };
                let mut us = vec![Elem::ONE; i];
                for_each_tuple(i, n, |ls| {
                    for k in 0..i {
                        us[k] = fld.exp(ls[k] as u64);
                    }
                    let s = fld.sub(Elem::ONE, fld.sum(us.iter().copied()));
                    let Some(mut e) = exp(outer, s) else { return };
                    for k in 0..i {
                        let bk = if divide { betas[k].conj() } else { betas[k] };
                        e += exp(bk, us[k]).unwrap();
                        arg[k] = if divide { fld.div(lam[k], us[k]) } else { fld.mul(lam[k], us[k]) };
                    }
                    add(&arg, Some(e));
                });
            }
            Iteration::III { alpha, beta, .. } => {
                let ab = alpha.conj().mul(*beta);
                for u in fld.units() {
                    for k in 0..i {
                        arg[k] = fld.mul(lam[k], u);
                    }
                    let e = exp(ab, fld.sub(Elem::ONE, u)).map(|e| e + exp(*alpha, u).unwrap());
                    add(&arg, e);
                }
            }
            Iteration::IV { alpha, .. } => {
                for u in fld.units() {
                    for k in 0..i {
                        arg[k] = fld.neg(fld.div(lam[k], u));
                    }
                    let e = exp(alpha.conj(), u).unwrap() + ctx.psi_exp(u);
                    add(&arg, Some(e));
                }
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{build_field, FieldSpec};
    use std::sync::Arc;

    fn ctx(p: u32, e: u32) -> Ctx {
        Ctx::new(Arc::new(build_field(FieldSpec::new(p, e)).unwrap()))
    }

    #[test]
    fn spot_values() {
        let c = ctx(3, 1);
        let chi = c.chr(1);
        assert_eq!(mfn(&c, &[], &[], Elem(1)), c.psi_val(Elem(2)));
        assert_eq!(mfn(&c, &[], &[], Elem(1)), CycloNum::zeta(3, 2));
        assert_eq!(mfn(&c, &[chi], &[], Elem(2)), c.int(-1));
        assert_eq!(mfn(&c, &[chi, chi], &[c.eps()], Elem(1)), c.int(-1));
        assert!(mfn(&c, &[chi], &[], Elem(0)).is_zero());
    }

    #[test]
    fn one_variable_lauricella() {
        let c = ctx(5, 1);
        for a in c.chars() {
            for b in c.chars() {
                let (g, d) = (c.chr(1), c.chr(3));
                for lam in c.field().units() {
                    let f = hgf(&c, &[a, b], &[g, d], lam);
                    let fd = Lauricella::D { a, b: vec![b], c: g, d: vec![d] };
                    assert_eq!(fd.eval(&c, &[lam]).unwrap(), f);
                    let fa = Lauricella::A { a, b: vec![b], c: vec![g], d: vec![d] };
                    assert_eq!(fa.eval(&c, &[lam]).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn dft_examples() {
        let c = ctx(5, 1);
        let f = TorusFn::from_fn(&c, 1, |t| if t[0] == Elem::ONE { c.one() } else { c.zero() });
        let fh = dft(&c, &f);
        assert!(fh.values.iter().all(|v| *v == c.one()));
        assert_eq!(idft(&c, &fh), f);
        let nu0 = c.chr(3);
        let g = TorusFn::from_fn(&c, 1, |t| c.chi(nu0, t[0]));
        let gh = dft(&c, &g);
        for nu in c.chars() {
            let expected = if nu == nu0 { c.int(4) } else { c.zero() };
            assert_eq!(*gh.at_char(&c, &[nu]), expected);
        }
    }

    #[test]
    fn iteration_precondition() {
        let c = ctx(5, 1);
        let a = c.chr(1);
        let it = Iteration::III { alpha: a, beta: a, i: 1 };
        assert!(matches!(it.validate(1), Err(Error::Hypothesis(_))));
    }
}
