//! General hypergeometric functions Φ_Δ(χ; z) attached to a partition Δ.
//!
//! J(m) is the group of truncated unit power series h₀ + h₁T + ⋯ + h_{m−1}T^{m−1}
//! (embedded in GL_m(k) through the shift matrix), H_Δ the block-diagonal
//! product of the J(N_i), and W_Δ the group generated by block permutations
//! and the reparametrisation matrices μ(c).  Characters of J(m) are written
//! through ι(h) = (h₀, θ₁(h), …, θ_{m−1}(h)), θ_i being the coefficients of
//! log(h₀ + h₁T + ⋯).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chars::MulChar;
use crate::cyclo::{CycloNum, RootSum};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::hgf::{self, for_each_tuple, Humbert, Lauricella};
use crate::matrix::MatK;
use crate::sums::Ctx;

// ---------------------------------------------------------------------------
// Partitions

/// A partition Δ = (N₁ ≤ ⋯ ≤ N_l) of n.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("partition parts must be nondecreasing".into()));
        }
        Ok(Partition { parts })
    }

    /// Parses "1,1,2".
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad partition part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// n = Σ N_i.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of blocks l.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Column offset of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &p| {
                let o = *acc;
                *acc += p;
                Some(o)
            })
            .collect()
    }

    /// Grouped form ((n₁, p₁), …, (n_k, p_k)) with n₁ < ⋯ < n_k.
    pub fn grouped(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((n, c)) if *n == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn largest(&self) -> usize {
        *self.parts.last().expect("nonempty")
    }

    /// The character theory of J(N) needs p ≥ N for every part.
    pub fn check_field(&self, f: &Field) -> Result<()> {
        let big = self.largest();
        if big as u64 > f.p() as u64 {
            return Err(Error::PartTooLarge { part: big, p: f.p() });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// θ, p and μ polynomials

fn int_inv(f: &Field, i: usize) -> Result<Elem> {
    if (i as u64).is_multiple_of(f.p() as u64) {
        return Err(Error::PartTooLarge { part: i + 1, p: f.p() });
    }
    Ok(f.inv(f.from_int(i as i64)))
}

/// θ₁(x), …, θ_{m−1}(x) for x = (x₀, …, x_{m−1}), x₀ ≠ 0.
pub fn thetas(f: &Field, x: &[Elem]) -> Result<Vec<Elem>> {
    let x0 = *x.first().ok_or(Error::Arity { expected: 1, got: 0 })?;
    let inv0 = f.try_inv(x0).map_err(|_| Error::ZeroInput("x0"))?;
    let xs: Vec<Elem> = x.iter().map(|&v| f.mul(v, inv0)).collect();
    let mut th = vec![Elem::ZERO; x.len()];
    for i in 1..x.len() {
        // i·θ_i = i·X_i − Σ_{j<i} j·θ_j·X_{i−j}
        let mut acc = f.mul(f.from_int(i as i64), xs[i]);
        for j in 1..i {
            acc = f.sub(acc, f.mul(f.from_int(j as i64), f.mul(th[j], xs[i - j])));
        }
        th[i] = f.mul(acc, int_inv(f, i)?);
    }
    th.remove(0);
    Ok(th)
}

/// θ_i(x₀, …, x_i).
pub fn theta(f: &Field, i: usize, x: &[Elem]) -> Result<Elem> {
    if i == 0 || x.len() <= i {
        return Err(Error::Arity { expected: i + 1, got: x.len() });
    }
    Ok(thetas(f, &x[..=i])?[i - 1])
}

/// θ̄_i(x) = x₀^i θ_i(x).
pub fn theta_bar(f: &Field, i: usize, x: &[Elem]) -> Result<Elem> {
    let t = theta(f, i, x)?;
    Ok(f.mul(f.pow(x[0], i as u64), t))
}

/// p₀(y), …, p_{len−1}(y): coefficients of exp(y₁T + y₂T² + ⋯).
pub fn p_polys(f: &Field, y: &[Elem], len: usize) -> Result<Vec<Elem>> {
    let mut p = vec![Elem::ZERO; len];
    if len == 0 {
        return Ok(p);
    }
    p[0] = Elem::ONE;
    for i in 1..len {
        // i·p_i = Σ_{k=1}^{i} k·y_k·p_{i−k}
        let mut acc = Elem::ZERO;
        for k in 1..=i {
            let yk = y.get(k - 1).copied().unwrap_or(Elem::ZERO);
            acc = f.add(acc, f.mul(f.from_int(k as i64), f.mul(yk, p[i - k])));
        }
        p[i] = f.mul(acc, int_inv(f, i)?);
    }
    Ok(p)
}

/// p_i(y).
pub fn p_poly(f: &Field, i: usize, y: &[Elem]) -> Result<Elem> {
    Ok(p_polys(f, y, i + 1)?[i])
}

/// μ(c) = (μ_{i,j}(c))_{0≤i,j<m}, row i holding the coefficients of
/// (c₁T + c₂T² + ⋯)^i truncated at T^{m−1}; m = c.len() + 1.
pub fn mu_matrix(f: &Field, c: &[Elem]) -> Result<MatK> {
    if c.first().is_some_and(|c1| c1.is_zero()) {
        return Err(Error::ZeroInput("c1"));
    }
    let m = c.len() + 1;
    let mut series = vec![Elem::ZERO; m];
    series[1..].copy_from_slice(c);
    let mut out = MatK::zeros(m, m);
    let mut power = vec![Elem::ZERO; m];
    power[0] = Elem::ONE;
    for i in 0..m {
        for (j, &v) in power.iter().enumerate() {
            out.set(i, j, v);
        }
        power = trunc_mul(f, &power, &series);
    }
    Ok(out)
}

/// μ(c)′ = (μ_{i,j}(c))_{1≤i,j<m}.
pub fn mu_matrix_prime(f: &Field, c: &[Elem]) -> Result<MatK> {
    let mu = mu_matrix(f, c)?;
    let m = mu.rows();
    let mut out = MatK::zeros(m - 1, m - 1);
    for i in 1..m {
        for j in 1..m {
            out.set(i - 1, j - 1, mu.get(i, j));
        }
    }
    Ok(out)
}

fn trunc_mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let m = a.len();
    let mut out = vec![Elem::ZERO; m];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(m - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// J(m) and its characters

/// [h₀, …, h_{m−1}] = Σ h_iΛ^i ∈ J(m).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JmElem {
    h: Vec<Elem>,
}

impl JmElem {
    pub fn new(h: Vec<Elem>) -> Result<Self> {
        match h.first() {
            None => Err(Error::Arity { expected: 1, got: 0 }),
            Some(h0) if h0.is_zero() => Err(Error::ZeroInput("h0")),
            _ => Ok(JmElem { h }),
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut h = vec![Elem::ZERO; m];
        h[0] = Elem::ONE;
        JmElem { h }
    }

    pub fn m(&self) -> usize {
        self.h.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.h
    }

    pub fn mul(&self, f: &Field, other: &JmElem) -> Result<JmElem> {
        if self.m() != other.m() {
            return Err(Error::Arity { expected: self.m(), got: other.m() });
        }
        Ok(JmElem { h: trunc_mul(f, &self.h, &other.h) })
    }

    /// The upper-triangular Toeplitz matrix Σ h_iΛ^i.
    pub fn to_matrix(&self) -> MatK {
        let m = self.m();
        let mut out = MatK::zeros(m, m);
        for r in 0..m {
            for c in r..m {
                out.set(r, c, self.h[c - r]);
            }
        }
        out
    }
}

/// ι(h) = (h₀, θ₁(h), …, θ_{m−1}(h)); requires m ≤ p.
pub fn iota(f: &Field, h: &JmElem) -> Result<(Elem, Vec<Elem>)> {
    if h.m() as u64 > f.p() as u64 {
        return Err(Error::PartTooLarge { part: h.m(), p: f.p() });
    }
    Ok((h.h[0], thetas(f, &h.h)?))
}

/// ι⁻¹(a₀, a) = [a₀, a₀p₁(a), …, a₀p_{m−1}(a)].
pub fn iota_inv(f: &Field, a0: Elem, a: &[Elem]) -> Result<JmElem> {
    let m = a.len() + 1;
    if m as u64 > f.p() as u64 {
        return Err(Error::PartTooLarge { part: m, p: f.p() });
    }
    let p = p_polys(f, a, m)?;
    JmElem::new(p.into_iter().map(|v| f.mul(a0, v)).collect())
}

/// The character (α, ψ_{a₁}, …, ψ_{a_{m−1}})∘ι of J(m).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JmChar {
    pub alpha: MulChar,
    pub a: Vec<Elem>,
}

impl fmt::Debug for JmChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_empty() {
            write!(f, "{:?}", self.alpha)
        } else {
            let a: Vec<String> = self.a.iter().map(|x| x.0.to_string()).collect();
            write!(f, "({:?}; {})", self.alpha, a.join(","))
        }
    }
}

impl JmChar {
    pub fn new(alpha: MulChar, a: Vec<Elem>) -> Self {
        JmChar { alpha, a }
    }

    pub fn mult(alpha: MulChar) -> Self {
        JmChar { alpha, a: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.a.len() + 1
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha.is_trivial() && self.a.iter().all(|x| x.is_zero())
    }

    /// Exponent of ζ_{pN} from the ι-coordinates (h₀, θ).
    fn exponent_from_iota(&self, ctx: &Ctx, log_h0: u32, th: &[Elem]) -> u64 {
        let f = ctx.field();
        let n = f.n() as u64;
        let mut e = f.p() as u64 * ((self.alpha.index() as u64 * log_h0 as u64) % n);
        for (&a, &t) in self.a.iter().zip(th) {
            e += ctx.psi_exp(f.mul(a, t));
        }
        e % ctx.m() as u64
    }

    pub fn eval(&self, ctx: &Ctx, h: &JmElem) -> Result<CycloNum> {
        if h.m() != self.m() {
            return Err(Error::Arity { expected: self.m(), got: h.m() });
        }
        let (h0, th) = iota(ctx.field(), h)?;
        let l = ctx.field().log_unit(h0);
        Ok(CycloNum::zeta(ctx.m(), self.exponent_from_iota(ctx, l, &th) as i64))
    }

    /// (α, a)ᵗμ(c) = (α, a·ᵗμ(c)′).
    pub fn act_mu(&self, f: &Field, c: &[Elem]) -> Result<JmChar> {
        if c.len() + 1 != self.m() {
            return Err(Error::Arity { expected: self.m() - 1, got: c.len() });
        }
        if self.a.is_empty() {
            return Ok(self.clone());
        }
        let mt = mu_matrix_prime(f, c)?.transpose();
        Ok(JmChar { alpha: self.alpha, a: mt.left_mul_vec(f, &self.a) })
    }
}

/// χ(h) for a character of J(m).
pub fn jm_char_eval(ctx: &Ctx, chi: &JmChar, h: &JmElem) -> Result<CycloNum> {
    chi.eval(ctx, h)
}

// ---------------------------------------------------------------------------
// H_Δ

/// diag(h₁, …, h_l) ∈ H_Δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HDeltaElem {
    pub blocks: Vec<JmElem>,
}

impl HDeltaElem {
    pub fn new(delta: &Partition, blocks: Vec<JmElem>) -> Result<Self> {
        check_shape(delta, blocks.iter().map(|b| b.m()))?;
        Ok(HDeltaElem { blocks })
    }

    pub fn to_matrix(&self) -> MatK {
        MatK::block_diag(&self.blocks.iter().map(|b| b.to_matrix()).collect::<Vec<_>>())
    }
}

/// χ = (χ₁, …, χ_l), χ_i a character of J(N_i).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HDeltaChar {
    pub blocks: Vec<JmChar>,
}

impl fmt::Debug for HDeltaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.blocks.iter().map(|x| format!("{x:?}")).collect();
        write!(f, "[{}]", b.join(" | "))
    }
}

fn check_shape(delta: &Partition, sizes: impl Iterator<Item = usize>) -> Result<()> {
    let sizes: Vec<usize> = sizes.collect();
    if sizes != delta.parts() {
        return Err(Error::Invalid(format!("block sizes {sizes:?} do not match partition {delta}")));
    }
    Ok(())
}

impl HDeltaChar {
    pub fn new(delta: &Partition, blocks: Vec<JmChar>) -> Result<Self> {
        check_shape(delta, blocks.iter().map(|b| b.m()))?;
        Ok(HDeltaChar { blocks })
    }

    /// (α₁, …, α_n) for Δ = (1, …, 1).
    pub fn from_mult(alphas: &[MulChar]) -> Self {
        HDeltaChar { blocks: alphas.iter().map(|&a| JmChar::mult(a)).collect() }
    }

    pub fn partition(&self) -> Partition {
        Partition { parts: self.blocks.iter().map(|b| b.m()).collect() }
    }

    /// Product of the multiplicative parts, α₁⋯α_l.
    pub fn alpha_product(&self) -> MulChar {
        let n = self.blocks[0].alpha.group_order();
        MulChar::product(n, self.blocks.iter().map(|b| b.alpha))
    }

    /// Every character of H_Δ: N^l · q^{n−l} of them.
    pub fn enumerate(ctx: &Ctx, delta: &Partition) -> Vec<HDeltaChar> {
        let f = ctx.field();
        let n = ctx.n();
        let q = f.q();
        let extra = delta.n() - delta.len();
        let mut out = Vec::new();
        for_each_tuple(delta.len(), n, |js| {
            for_each_tuple(extra, q, |codes| {
                let mut it = codes.iter();
                let blocks = delta
                    .parts()
                    .iter()
                    .zip(js)
                    .map(|(&m, &j)| {
                        let a = (1..m).map(|_| Elem(*it.next().expect("enough codes"))).collect();
                        JmChar::new(ctx.chr(j as i64), a)
                    })
                    .collect();
                out.push(HDeltaChar { blocks });
            });
        });
        out
    }

    pub fn eval(&self, ctx: &Ctx, h: &HDeltaElem) -> Result<CycloNum> {
        if h.blocks.len() != self.blocks.len() {
            return Err(Error::Arity { expected: self.blocks.len(), got: h.blocks.len() });
        }
        let mut v = ctx.one();
        for (c, b) in self.blocks.iter().zip(&h.blocks) {
            v = v.mul_ref(&c.eval(ctx, b)?);
        }
        Ok(v)
    }
}

/// χ(h) for a character of H_Δ.
pub fn hdelta_char_eval(ctx: &Ctx, chi: &HDeltaChar, h: &HDeltaElem) -> Result<CycloNum> {
    chi.eval(ctx, h)
}

// ---------------------------------------------------------------------------
// Φ_Δ

fn check_z(ctx: &Ctx, delta: &Partition, z: &MatK) -> Result<()> {
    delta.check_field(ctx.field())?;
    if z.cols() != delta.n() {
        return Err(Error::Arity { expected: delta.n(), got: z.cols() });
    }
    if z.rows() == 0 {
        return Err(Error::Arity { expected: 1, got: 0 });
    }
    Ok(())
}

/// χ(sz) = Π_i χ_i([sz₀^{(i)}, …]), zero if some sz₀^{(i)} vanishes.
pub fn chi_of_sz(ctx: &Ctx, chi: &HDeltaChar, s: &[Elem], z: &MatK) -> Result<CycloNum> {
    let delta = chi.partition();
    check_z(ctx, &delta, z)?;
    if s.len() != z.rows() {
        return Err(Error::Arity { expected: z.rows(), got: s.len() });
    }
    let f = ctx.field();
    let v = z.left_mul_vec(f, s);
    let mut e = 0u64;
    for (b, &o) in chi.blocks.iter().zip(&delta.offsets()) {
        let x = &v[o..o + b.m()];
        let Some(l) = f.log(x[0]) else {
            return Ok(ctx.zero());
        };
        e += b.exponent_from_iota(ctx, l, &thetas(f, x)?);
    }
    Ok(CycloNum::zeta(ctx.m(), e as i64))
}

/// The data of z needed to evaluate Φ_Δ(χ; z) for many χ: for every s with
/// all leading entries nonzero, the ι-coordinates of each block of sz.
#[derive(Clone, Debug)]
pub struct PreparedZ {
    delta: Partition,
    m: u32,
    /// Per contributing s: (log h₀, θ₁, …) for each block, concatenated.
    rows: Vec<(Vec<u32>, Vec<Elem>)>,
}

impl PreparedZ {
    pub fn new(ctx: &Ctx, delta: &Partition, z: &MatK) -> Result<Self> {
        check_z(ctx, delta, z)?;
        let f = ctx.field();
        let offsets = delta.offsets();
        let mut rows = Vec::new();
        let mut err = None;
        for_each_tuple(z.rows(), f.q(), |codes| {
            if err.is_some() {
                return;
            }
            let s: Vec<Elem> = codes.iter().map(|&c| Elem(c)).collect();
            let v = z.left_mul_vec(f, &s);
            let mut logs = Vec::with_capacity(delta.len());
            let mut th = Vec::with_capacity(delta.n() - delta.len());
            for (&m, &o) in delta.parts().iter().zip(&offsets) {
                let x = &v[o..o + m];
                let Some(l) = f.log(x[0]) else {
                    return;
                };
                logs.push(l);
                match thetas(f, x) {
                    Ok(t) => th.extend(t),
                    Err(e) => err = Some(e),
                }
            }
            rows.push((logs, th));
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(PreparedZ { delta: delta.clone(), m: ctx.m(), rows })
    }

    /// Φ_Δ(χ; z).
    pub fn phi(&self, ctx: &Ctx, chi: &HDeltaChar) -> Result<CycloNum> {
        check_shape(&self.delta, chi.blocks.iter().map(|b| b.m()))?;
        let f = ctx.field();
        let n = f.n() as u64;
        let p = f.p() as u64;
        let m = self.m as u64;
        let js: Vec<u64> = chi.blocks.iter().map(|b| b.alpha.index() as u64).collect();
        let a: Vec<Elem> = chi.blocks.iter().flat_map(|b| b.a.iter().copied()).collect();
        let mut acc = RootSum::new(self.m);
        for (logs, th) in &self.rows {
            let mut e = 0u64;
            for (&j, &l) in js.iter().zip(logs) {
                e += p * ((j * l as u64) % n);
            }
            for (&ai, &t) in a.iter().zip(th) {
                if !ai.is_zero() {
                    e += ctx.psi_exp(f.mul(ai, t));
                }
            }
            acc.add(e % m, 1);
        }
        Ok(acc.finish())
    }
}

/// Φ_Δ(χ; z) = Σ_{s∈k^d} χ(sz).
pub fn phi_delta(ctx: &Ctx, chi: &HDeltaChar, z: &MatK) -> Result<CycloNum> {
    PreparedZ::new(ctx, &chi.partition(), z)?.phi(ctx, chi)
}

// ---------------------------------------------------------------------------
// W_Δ

/// The part of w ∈ W_Δ acting on one group of p_i equal parts n_i:
/// diag(μ(c₁), …, μ(c_{p_i}))·P̃_σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WGroup {
    /// σ as 0-based images σ(0), …, σ(p_i − 1).
    pub sigma: Vec<usize>,
    /// c_j ∈ k* × k^{n_i−2}; empty when n_i = 1.
    pub cs: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WDeltaElem {
    pub groups: Vec<WGroup>,
}

fn is_permutation(s: &[usize]) -> bool {
    let mut seen = vec![false; s.len()];
    s.iter().all(|&x| x < s.len() && !std::mem::replace(&mut seen[x], true))
}

fn unit_c(n: usize) -> Vec<Elem> {
    let mut c = vec![Elem::ZERO; n.saturating_sub(1)];
    if let Some(c1) = c.first_mut() {
        *c1 = Elem::ONE;
    }
    c
}

impl WDeltaElem {
    pub fn new(f: &Field, delta: &Partition, groups: Vec<WGroup>) -> Result<Self> {
        let shape = delta.grouped();
        if groups.len() != shape.len() {
            return Err(Error::Arity { expected: shape.len(), got: groups.len() });
        }
        for (g, &(n, p)) in groups.iter().zip(&shape) {
            if g.sigma.len() != p || !is_permutation(&g.sigma) {
                return Err(Error::Invalid(format!("σ = {:?} is not a permutation of {p} blocks", g.sigma)));
            }
            if g.cs.len() != p {
                return Err(Error::Arity { expected: p, got: g.cs.len() });
            }
            for c in &g.cs {
                if c.len() != n - 1 {
                    return Err(Error::Arity { expected: n - 1, got: c.len() });
                }
                if c.first().is_some_and(|c1| c1.is_zero()) {
                    return Err(Error::ZeroInput("c1"));
                }
                if c.iter().any(|&x| !f.contains(x)) {
                    return Err(Error::Invalid("c entry outside the field".into()));
                }
            }
        }
        Ok(WDeltaElem { groups })
    }

    pub fn identity(delta: &Partition) -> Self {
        let groups = delta
            .grouped()
            .into_iter()
            .map(|(n, p)| WGroup { sigma: (0..p).collect(), cs: vec![unit_c(n); p] })
            .collect();
        WDeltaElem { groups }
    }

    /// A generating set: every transposition inside each group and every
    /// μ(c) placed in a single block.
    pub fn generators(f: &Field, delta: &Partition) -> Vec<WDeltaElem> {
        let shape = delta.grouped();
        let id = Self::identity(delta);
        let mut out = Vec::new();
        for (gi, &(n, p)) in shape.iter().enumerate() {
            for a in 0..p {
                for b in a + 1..p {
                    let mut w = id.clone();
                    w.groups[gi].sigma.swap(a, b);
                    out.push(w);
                }
            }
            if n >= 2 {
                for block in 0..p {
                    for_each_tuple(n - 1, f.q(), |codes| {
                        if codes[0] == 0 || codes.iter().enumerate().all(|(i, &c)| c == u32::from(i == 0)) {
                            return;
                        }
                        let mut w = id.clone();
                        w.groups[gi].cs[block] = codes.iter().map(|&c| Elem(c)).collect();
                        out.push(w);
                    });
                }
            }
        }
        out
    }

    /// The image in GL_n(k).
    pub fn to_matrix(&self, f: &Field) -> Result<MatK> {
        let mut blocks = Vec::new();
        for g in &self.groups {
            let p = g.sigma.len();
            let mus = g.cs.iter().map(|c| mu_matrix(f, c)).collect::<Result<Vec<_>>>()?;
            let n = mus[0].rows();
            let mut m = MatK::zeros(n * p, n * p);
            for (j, &sj) in g.sigma.iter().enumerate() {
                // block (σ(j), j) holds μ(c_{σ(j)})
                let mu = &mus[sj];
                for r in 0..n {
                    for c in 0..n {
                        m.set(sj * n + r, j * n + c, mu.get(r, c));
                    }
                }
            }
            blocks.push(m);
        }
        Ok(MatK::block_diag(&blocks))
    }
}

/// χᵗw: block j of each group becomes χ_{σ⁻¹(j)}ᵗμ(c_j).
pub fn w_action_on_char(f: &Field, chi: &HDeltaChar, w: &WDeltaElem) -> Result<HDeltaChar> {
    let delta = chi.partition();
    let shape = delta.grouped();
    if w.groups.len() != shape.len() {
        return Err(Error::Arity { expected: shape.len(), got: w.groups.len() });
    }
    let mut out = Vec::with_capacity(chi.blocks.len());
    let mut start = 0;
    for (g, &(_, p)) in w.groups.iter().zip(&shape) {
        if g.sigma.len() != p {
            return Err(Error::Arity { expected: p, got: g.sigma.len() });
        }
        let mut inv = vec![0; p];
        for (j, &s) in g.sigma.iter().enumerate() {
            inv[s] = j;
        }
        for (j, &ij) in inv.iter().enumerate() {
            out.push(chi.blocks[start + ij].act_mu(f, &g.cs[j])?);
        }
        start += p;
    }
    Ok(HDeltaChar { blocks: out })
}

// ---------------------------------------------------------------------------
// Normal forms for d = 2 and their classical reductions

/// The normalised matrices for d = 2, n ∈ {4, 5} whose Φ_Δ reduces to a
/// classical function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalForm {
    /// Δ = (1,1,1,1), z = [[1,1,1,0],[−1,−λ,0,1]]: Gauss ₂F₁.
    Gauss { lam: Elem },
    /// Δ = (1,1,2), z = [[−1,1,0,−λ],[1,0,1,0]]: Kummer ₁F₁.
    Kummer { lam: Elem },
    /// Δ = (2,2), z = [[1,0,0,λ],[0,−1,1,0]]: Bessel ₀F₁.
    Bessel { lam: Elem },
    /// Δ = (1,1,1,1,1), z = [[1,1,1,1,0],[−1,−x,−y,0,1]]: Appell F₁.
    Appell { x: Elem, y: Elem },
    /// Δ = (1,1,1,2), z = [[−1,−x,1,0,−y],[1,1,0,1,0]]: Humbert Φ₁.
    Humbert1 { x: Elem, y: Elem },
    /// Δ = (1,1,1,2), z = [[1,1,1,0,1],[0,x,y,1,0]]: Humbert Φ₂.
    Humbert2 { x: Elem, y: Elem },
    /// Δ = (1,2,2), z = [[1,1,0,0,1],[x,0,y,1,0]]: Humbert Φ₃.
    Humbert3 { x: Elem, y: Elem },
}

impl NormalForm {
    pub fn partition(&self) -> Partition {
        let parts = match self {
            NormalForm::Gauss { .. } => vec![1, 1, 1, 1],
            NormalForm::Kummer { .. } => vec![1, 1, 2],
            NormalForm::Bessel { .. } => vec![2, 2],
            NormalForm::Appell { .. } => vec![1, 1, 1, 1, 1],
            NormalForm::Humbert1 { .. } | NormalForm::Humbert2 { .. } => vec![1, 1, 1, 2],
            NormalForm::Humbert3 { .. } => vec![1, 2, 2],
        };
        Partition { parts }
    }

    pub fn matrix(&self, f: &Field) -> MatK {
        let o = Elem::ZERO;
        let i = Elem::ONE;
        let m = f.minus_one();
        let rows = match *self {
            NormalForm::Gauss { lam } => vec![vec![i, i, i, o], vec![m, f.neg(lam), o, i]],
            NormalForm::Kummer { lam } => vec![vec![m, i, o, f.neg(lam)], vec![i, o, i, o]],
            NormalForm::Bessel { lam } => vec![vec![i, o, o, lam], vec![o, m, i, o]],
            NormalForm::Appell { x, y } => vec![vec![i, i, i, i, o], vec![m, f.neg(x), f.neg(y), o, i]],
            NormalForm::Humbert1 { x, y } => vec![vec![m, f.neg(x), i, o, f.neg(y)], vec![i, i, o, i, o]],
            NormalForm::Humbert2 { x, y } => vec![vec![i, i, i, o, i], vec![o, x, y, i, o]],
            NormalForm::Humbert3 { x, y } => vec![vec![i, i, o, o, i], vec![x, o, y, i, o]],
        };
        MatK::from_rows(rows).expect("rectangular")
    }

    /// Recognises a normalised z for the given partition.
    pub fn recognize(f: &Field, delta: &Partition, z: &MatK) -> Result<NormalForm> {
        let g = |r, c| z.get(r, c);
        let unsupported = || Error::Unsupported(format!("z = {z:?} is not a supported normal form for Δ = {delta}"));
        if z.rows() != 2 || z.cols() != delta.n() {
            return Err(unsupported());
        }
        let candidates: Vec<NormalForm> = match delta.parts() {
            [1, 1, 1, 1] => vec![NormalForm::Gauss { lam: f.neg(g(1, 1)) }],
            [1, 1, 2] => vec![NormalForm::Kummer { lam: f.neg(g(0, 3)) }],
            [2, 2] => vec![NormalForm::Bessel { lam: g(0, 3) }],
            [1, 1, 1, 1, 1] => vec![NormalForm::Appell { x: f.neg(g(1, 1)), y: f.neg(g(1, 2)) }],
            [1, 1, 1, 2] => vec![
                NormalForm::Humbert1 { x: f.neg(g(0, 1)), y: f.neg(g(0, 4)) },
                NormalForm::Humbert2 { x: g(1, 1), y: g(1, 2) },
            ],
            [1, 2, 2] => vec![NormalForm::Humbert3 { x: g(1, 0), y: g(1, 2) }],
            _ => vec![],
        };
        candidates.into_iter().find(|c| c.matrix(f) == *z).ok_or_else(unsupported)
    }
}

fn hyp(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(what.into()))
    }
}

fn mult_chars(chi: &HDeltaChar) -> Vec<MulChar> {
    chi.blocks.iter().map(|b| b.alpha).collect()
}

/// The classical closed form of Φ_Δ(χ; z) for z in one of the normal forms,
/// computed through Gauss/Jacobi sums and the classical functions.
pub fn reduce_to_classical(ctx: &Ctx, delta: &Partition, z: &MatK, chi: &HDeltaChar) -> Result<CycloNum> {
    check_shape(delta, chi.blocks.iter().map(|b| b.m()))?;
    let form = NormalForm::recognize(ctx.field(), delta, z)?;
    reduce_normal_form(ctx, form, chi)
}

/// As [`reduce_to_classical`], for an already recognised normal form.
pub fn reduce_normal_form(ctx: &Ctx, form: NormalForm, chi: &HDeltaChar) -> Result<CycloNum> {
    check_shape(&form.partition(), chi.blocks.iter().map(|b| b.m()))?;
    let f = ctx.field();
    let eps = ctx.eps();
    let al = mult_chars(chi);
    let q1 = ctx.q() - 1;
    // δ(α₁⋯α_l)(q − 1); the whole expression vanishes otherwise.
    if !chi.alpha_product().is_trivial() {
        return Ok(ctx.zero());
    }
    let v = match form {
        NormalForm::Gauss { lam } => {
            hyp(!lam.is_zero(), "λ ≠ 0")?;
            hyp(!al[0].is_trivial() && !al[1].is_trivial(), "α₁, α₂ ≠ ε")?;
            let j = ctx.jacobi(&[al[0], al[3]])?;
            let fv = hgf::mfn(ctx, &[al[1].conj(), al[3]], &[al[0].mul(al[3])], lam);
            j.mul_ref(&fv).scale_int(-q1)
        }
        NormalForm::Kummer { lam } => {
            hyp(!lam.is_zero(), "λ ≠ 0")?;
            hyp(!al[0].is_trivial(), "α₁ ≠ ε")?;
            let a = chi.blocks[2].a[0];
            hyp(!a.is_zero(), "a ≠ 0")?;
            let j = ctx.jacobi(&[al[0], al[1]])?;
            let fv = hgf::hgf(ctx, &[al[1]], &[al[0].mul(al[1]), eps], f.mul(a, lam));
            j.mul_ref(&fv).scale_int(-q1)
        }
        NormalForm::Bessel { lam } => {
            // −δ(α₁α₂)(q−1)·α₁(−a₁)·g(ᾱ₁)·₀F₁(; α₁; −a₁a₂λ)
            let (a1, a2) = (chi.blocks[0].a[0], chi.blocks[1].a[0]);
            hyp(!lam.is_zero(), "λ ≠ 0")?;
            hyp(!a1.is_zero() && !a2.is_zero(), "a₁, a₂ ≠ 0")?;
            let pre = ctx.chi(al[0], f.neg(a1)).mul_ref(ctx.gauss(al[0].conj()));
            let fv = hgf::hgf(ctx, &[], &[al[0], eps], f.neg(f.mul(f.mul(a1, a2), lam)));
            pre.mul_ref(&fv).scale_int(-q1)
        }
        NormalForm::Appell { x, y } => {
            hyp(!x.is_zero() && !y.is_zero(), "x, y ≠ 0")?;
            hyp(al[..3].iter().all(|a| !a.is_trivial()), "α₁, α₂, α₃ ≠ ε")?;
            let j = ctx.jacobi(&[al[0], al[4]])?;
            let fd = Lauricella::D { a: al[4], b: vec![al[1].conj(), al[2].conj()], c: al[0].mul(al[4]), d: vec![eps, eps] };
            j.mul_ref(&fd.eval(ctx, &[x, y])?).scale_int(-q1)
        }
        NormalForm::Humbert1 { x, y } => {
            hyp(!x.is_zero() && !y.is_zero(), "x, y ≠ 0")?;
            hyp(!al[0].is_trivial() && !al[1].is_trivial(), "α₁, α₂ ≠ ε")?;
            let a = chi.blocks[3].a[0];
            hyp(!a.is_zero(), "a ≠ 0")?;
            let j = ctx.jacobi(&[al[0], al[2]])?;
            let h = Humbert::Phi1 { a: al[2], b: al[1].conj(), c: al[0].mul(al[2]), d1: eps, d2: eps };
            j.mul_ref(&h.eval(ctx, x, f.mul(a, y))).scale_int(-q1)
        }
        NormalForm::Humbert2 { x, y } => {
            // −δ(α₁⋯α₄)(q−1)·α₄(a)·g(ᾱ₄)·Φ₂(ᾱ₂, ᾱ₃; α₄; ax, ay)
            hyp(!x.is_zero() && !y.is_zero(), "x, y ≠ 0")?;
            hyp(!al[1].is_trivial() && !al[2].is_trivial(), "α₂, α₃ ≠ ε")?;
            let a = chi.blocks[3].a[0];
            hyp(!a.is_zero(), "a ≠ 0")?;
            let h = Humbert::Phi2 { b: al[1].conj(), b2: al[2].conj(), c: al[3], d1: eps, d2: eps };
            let pre = ctx.chi(al[3], a).mul_ref(ctx.gauss(al[3].conj()));
            pre.mul_ref(&h.eval(ctx, f.mul(a, x), f.mul(a, y))).scale_int(-q1)
        }
        NormalForm::Humbert3 { x, y } => {
            // −δ(α₁α₂α₃)(q−1)·α₃(a₂)·g(ᾱ₃)·Φ₃(ᾱ₁; α₃; a₂x, a₁a₂y)
            hyp(!x.is_zero() && !y.is_zero(), "x, y ≠ 0")?;
            hyp(!al[0].is_trivial(), "α₁ ≠ ε")?;
            let (a1, a2) = (chi.blocks[1].a[0], chi.blocks[2].a[0]);
            hyp(!a1.is_zero() && !a2.is_zero(), "a₁, a₂ ≠ 0")?;
            let h = Humbert::Phi3 { b: al[0].conj(), c: al[2], d1: eps, d2: eps };
            let v = h.eval(ctx, f.mul(a2, x), f.mul(f.mul(a1, a2), y));
            let pre = ctx.chi(al[2], a2).mul_ref(ctx.gauss(al[2].conj()));
            pre.mul_ref(&v).scale_int(-q1)
        }
    };
    Ok(v)
}

// ---------------------------------------------------------------------------
// Normalisation for Δ = (1, …, 1), d = 2

/// [i j] ≠ 0 for every listed pair.
pub fn in_general_position(f: &Field, z: &MatK, pairs: &[(usize, usize)]) -> bool {
    z.rows() == 2 && pairs.iter().all(|&(i, j)| !z.bracket(f, i, j).is_zero())
}

/// For z ∈ M(2, n) with [i n−1], [i n], [n−1 n] ≠ 0 (1-based, i ≤ n−2),
/// finds g ∈ GL₂(k) and a diagonal h with g·z·h = [[1,…,1,1,0],[−1,−λ₁,…,−λ_{n−3},0,1]].
/// Returns (λ, g, h) with h given by its diagonal.
pub fn normalize_lauricella(f: &Field, z: &MatK) -> Result<(Vec<Elem>, MatK, Vec<Elem>)> {
    let n = z.cols();
    if z.rows() != 2 || n < 3 {
        return Err(Error::Arity { expected: 2, got: z.rows() });
    }
    let (u, v) = (n - 2, n - 1);
    let mut pairs = vec![(u, v)];
    for i in 0..u {
        pairs.push((i, u));
        pairs.push((i, v));
    }
    if !in_general_position(f, z, &pairs) {
        return Err(Error::GeneralPosition("[i n−1], [i n], [n−1 n] must be nonzero".into()));
    }
    let g0 = z.select_columns(&[u, v]).inverse(f).expect("[n−1 n] ≠ 0");
    let w = g0.mul(f, z)?;
    let a: Vec<Elem> = (0..u).map(|i| w.get(0, i)).collect();
    let b: Vec<Elem> = (0..u).map(|i| w.get(1, i)).collect();
    let r = f.neg(f.div(a[0], b[0]));
    let lam = (1..u).map(|i| f.div(f.mul(b[i], a[0]), f.mul(a[i], b[0]))).collect();
    let g = MatK::from_rows(vec![vec![Elem::ONE, Elem::ZERO], vec![Elem::ZERO, r]])?.mul(f, &g0)?;
    let mut h: Vec<Elem> = a.iter().map(|&x| f.inv(x)).collect();
    h.push(Elem::ONE);
    h.push(f.inv(r));
    Ok((lam, g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{build_field, FieldSpec};
    use std::sync::Arc;

    fn ctx(q: u32) -> Ctx {
        let f = build_field(FieldSpec::from_q(q as u64).unwrap()).unwrap();
        Ctx::new(Arc::new(f))
    }

    #[test]
    fn theta_and_p_values() {
        let c = ctx(5);
        let f = c.field();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        assert_eq!(theta(f, 1, &e(&[2, 3])).unwrap(), f.div(f.from_int(3), f.from_int(2)));
        assert_eq!(theta(f, 2, &e(&[1, 2, 3])).unwrap(), f.from_int(1));
        assert_eq!(p_poly(f, 0, &e(&[2, 3])).unwrap(), Elem::ONE);
        assert_eq!(p_poly(f, 1, &e(&[2, 3])).unwrap(), f.from_int(2));
        assert_eq!(p_poly(f, 2, &e(&[2, 3])).unwrap(), Elem::ZERO);
        assert!(theta(f, 1, &e(&[0, 1])).is_err());
        assert!(matches!(theta(f, 5, &e(&[1, 0, 0, 0, 0, 1])), Err(Error::PartTooLarge { .. })));
    }

    #[test]
    fn iota_example_over_f3() {
        let c = ctx(3);
        let f = c.field();
        let h = JmElem::new(vec![Elem(2), Elem(1)]).unwrap();
        assert_eq!(iota(f, &h).unwrap(), (Elem(2), vec![Elem(2)]));
        assert_eq!(iota(f, &JmElem::identity(2)).unwrap(), (Elem::ONE, vec![Elem::ZERO]));
        let chi = JmChar::new(c.chr(1), vec![Elem(1)]);
        assert_eq!(chi.eval(&c, &h).unwrap(), CycloNum::zeta(c.m(), 4).neg_ref());
    }

    #[test]
    fn mu_small_cases() {
        let c = ctx(5);
        let f = c.field();
        assert_eq!(mu_matrix(f, &[Elem::ONE, Elem::ZERO, Elem::ZERO]).unwrap(), MatK::identity(4));
        assert_eq!(mu_matrix(f, &[Elem(3)]).unwrap(), MatK::from_ints(f, &[&[1, 0], &[0, 3]]));
        assert!(mu_matrix(f, &[Elem::ZERO, Elem::ONE]).is_err());
    }

    #[test]
    fn phi_delta_one_variable() {
        let c = ctx(3);
        let z = MatK::from_ints(c.field(), &[&[1]]);
        let d = Partition::ones(1);
        assert_eq!(phi_delta(&c, &HDeltaChar::new(&d, vec![JmChar::mult(c.eps())]).unwrap(), &z).unwrap(), c.int(2));
        assert!(phi_delta(&c, &HDeltaChar::new(&d, vec![JmChar::mult(c.chr(1))]).unwrap(), &z).unwrap().is_zero());
    }

    #[test]
    fn partition_checks() {
        let d = Partition::parse("1,1,2").unwrap();
        assert_eq!(d.grouped(), vec![(1, 2), (2, 1)]);
        assert_eq!(d.offsets(), vec![0, 1, 2]);
        assert!(Partition::parse("2,1").is_err());
        let c = ctx(3);
        assert!(Partition::parse("1,3").unwrap().check_field(c.field()).is_ok());
        assert!(matches!(Partition::parse("4").unwrap().check_field(c.field()), Err(Error::PartTooLarge { .. })));
    }
}
