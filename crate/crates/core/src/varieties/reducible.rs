//! Degenerate parameters at which a variety splits into simpler pieces.
//!
//! In each case the variety W is a disjoint union of pieces W^L indexed by
//! labels L with entries in k*, and every piece is the image of an
//! embedding i^L of a smaller model variety M.  A subgroup of the torus of W
//! acts on every piece compatibly with the torus of M, so twisted counts on W
//! reduce to twisted counts on M:
//!
//! * Euler–Gauss (λ = 1): ₂X₂,₁ = ⊔ ₂X₂,₁^{a,b}, i^{a,b}(u, v) = (u, v, bv, au)
//!   from Fer₂^*, and N(₂X₂,₁; χ) = N(Fer₂^*; (α₁α₄, α₂α₃)).
//! * F_D with λ_{m−1} = λ_m: pieces (x_m, y_m) = (a x_{m−1}, b y_{m−1}) of the
//!   m-variable variety, each a copy of the (m−1)-variable one, with the last
//!   two characters of each block merged.
//! * Appell F₂ with λ₂ = 1: pieces a x₀y₂ = x₂z₂, each the image of ₃X₃,λ
//!   under P ↦ ᴺ√d^a · (P * Q), and N(X_{F₂,(λ,1)}; χ) = χ(d)·N(₃X₃,λ; χ*ᵗQ).

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chars::MulChar;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ffield::{extend, Elem, ExtensionField, Field};
use crate::matrix::MatZ;
use crate::sums::Ctx;

use super::count::Support;
use super::iso::{first_degree_with_points, Check, POINT_BUDGET};
use super::points::{enumerate_points, on_variety, Point};
use super::{char_monomial, monomial_map, GroupChar, GroupElem, VarietySpec};

/// The monomial data of the Appell F₂ → ₃X₃ reduction.
pub fn appell2_q() -> MatZ {
    MatZ::from_rows(&[
        &[1, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 1],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[-1, 0, -1, 0, -1, 0, -1],
    ])
}

/// d = (−1, 1, 1, 1, 1, 1, −1).
pub fn appell2_d(f: &Field) -> Vec<Elem> {
    let m1 = f.minus_one();
    vec![m1, Elem::ONE, Elem::ONE, Elem::ONE, Elem::ONE, Elem::ONE, m1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReducibleCase {
    /// ₂X₂,λ at λ = 1.
    EulerGauss,
    /// X_{F_D^m,λ} with λ_{m−1} = λ_m (m ≥ 2).
    LauricellaD { lam: Vec<Elem> },
    /// X_{F₂,(λ,1)}.
    Appell2 { lam: Elem },
}

impl ReducibleCase {
    pub fn name(&self) -> &'static str {
        match self {
            ReducibleCase::EulerGauss => "EulerGauss",
            ReducibleCase::LauricellaD { .. } => "FD_reduce",
            ReducibleCase::Appell2 { .. } => "F2_reduce",
        }
    }

    /// Checks the degeneracy and returns (W, M).
    pub fn specs(&self, f: &Field) -> Result<(VarietySpec, VarietySpec)> {
        match self {
            ReducibleCase::EulerGauss => {
                Ok((VarietySpec::MXn { m: 2, n: 2, lam: Elem::ONE }, VarietySpec::FermatStar { n: 2 }))
            }
            ReducibleCase::LauricellaD { lam } => {
                let m = lam.len();
                if m < 2 || lam[m - 1] != lam[m - 2] {
                    return Err(Error::Hypothesis("the last two λ_i must coincide".into()));
                }
                Ok((
                    VarietySpec::LauricellaD { lam: lam.clone() },
                    VarietySpec::LauricellaD { lam: lam[..m - 1].to_vec() },
                ))
            }
            ReducibleCase::Appell2 { lam } => {
                if lam.is_zero() || !f.contains(*lam) {
                    return Err(Error::Hypothesis("λ must lie in k*".into()));
                }
                Ok((
                    VarietySpec::LauricellaA { lam: vec![*lam, Elem::ONE] },
                    VarietySpec::MXn { m: 3, n: 3, lam: *lam },
                ))
            }
        }
    }

    /// The piece containing a point of W, as a label in k_r (still to be
    /// checked to lie in k*).
    fn label(&self, kf: &Field, p: &Point) -> Vec<Elem> {
        let x = &p.mult;
        match self {
            // (x₁, x₂, y₁, y₂): y₂ = a x₁, y₁ = b x₂
            ReducibleCase::EulerGauss => vec![kf.div(x[3], x[0]), kf.div(x[2], x[1])],
            ReducibleCase::LauricellaD { lam } => {
                let m = lam.len();
                vec![kf.div(x[m], x[m - 1]), kf.div(x[2 * m + 1], x[2 * m])]
            }
            // (x₀, x₁, x₂, y₁, y₂, z₁, z₂): a x₀ y₂ = x₂ z₂
            ReducibleCase::Appell2 { .. } => vec![kf.div(kf.mul(x[2], x[6]), kf.mul(x[0], x[4]))],
        }
    }

    fn n_labels(&self) -> usize {
        match self {
            ReducibleCase::Appell2 { .. } => 1,
            _ => 2,
        }
    }

    /// Pulls a character of W back to M: (twist point, χ′) with
    /// N(W; χ) = χ(twist)·N(M; χ′).
    pub fn pull(&self, f: &Field, chi: &GroupChar) -> Result<(Vec<Elem>, GroupChar)> {
        let a = &chi.mult;
        let ones = |k: usize| vec![Elem::ONE; k];
        match self {
            ReducibleCase::EulerGauss => Ok((ones(4), GroupChar::new(vec![a[0].mul(a[3]), a[1].mul(a[2])], vec![]))),
            ReducibleCase::LauricellaD { lam } => {
                let m = lam.len();
                let merge = |block: &[MulChar]| {
                    let mut v = block[..m - 1].to_vec();
                    v.push(block[m - 1].mul(block[m]));
                    v
                };
                let mut mult = merge(&a[..=m]);
                mult.extend(merge(&a[m + 1..]));
                Ok((ones(2 * m + 2), GroupChar::new(mult, vec![])))
            }
            ReducibleCase::Appell2 { .. } => {
                let pulled = char_monomial(a, &appell2_q().transpose())?;
                Ok((appell2_d(f), GroupChar::new(pulled, vec![])))
            }
        }
    }

    /// i^L applied to a point of M over k_r.
    fn embed_point(&self, ext: &ExtensionField, label: &[Elem], p: &Point) -> Result<Point> {
        let kf = ext.field();
        let x = &p.mult;
        let mult = match self {
            ReducibleCase::EulerGauss => {
                let (a, b) = (ext.embed(label[0]), ext.embed(label[1]));
                vec![x[0], x[1], kf.mul(b, x[1]), kf.mul(a, x[0])]
            }
            ReducibleCase::LauricellaD { lam } => {
                let k = lam.len() - 1;
                let (a, b) = (ext.embed(label[0]), ext.embed(label[1]));
                let mut v = x[..=k].to_vec();
                v.push(kf.mul(a, x[k]));
                v.extend(&x[k + 1..]);
                v.push(kf.mul(b, x[2 * k + 1]));
                v
            }
            ReducibleCase::Appell2 { .. } => {
                let r = ext.nth_root(ext.base().minus_one())?;
                let mut scale = vec![Elem::ONE; 7];
                scale[0] = r;
                scale[6] = kf.mul(ext.embed(label[0]), r);
                let m = monomial_map(kf, x, &appell2_q())?;
                m.iter().zip(&scale).map(|(&u, &s)| kf.mul(u, s)).collect()
            }
        };
        Ok(Point { mult, add: vec![], free: vec![] })
    }

    /// Degree step for the enumeration: the Appell embedding needs ᴺ√−1.
    fn degree_step(&self, f: &Field) -> u32 {
        match self {
            ReducibleCase::Appell2 { .. } => f.n(),
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducibleReport {
    pub case: String,
    pub whole: VarietySpec,
    pub model: VarietySpec,
    /// Size of k_r used for the point-level checks.
    pub extension_size: u32,
    pub whole_points: usize,
    pub model_points: usize,
    /// Number of labels L whose piece is nonempty.
    pub nonempty_pieces: usize,
    pub characters: usize,
    pub checks: Vec<Check>,
}

impl ReducibleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// All labels (k*)^n.
fn labels(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|l| f.units().map(move |u| [l.clone(), vec![u]].concat())).collect();
    }
    out
}

/// Compares N(W; χ) with χ(twist)·N(M; χ′) for every χ of W.
pub fn reducible_counts(ctx: &Ctx, case: &ReducibleCase) -> Result<(usize, Check)> {
    let f = ctx.field();
    let (whole, model) = case.specs(f)?;
    let (sw, sm) = (Support::new(ctx, &whole)?, Support::new(ctx, &model)?);
    let mut check = Check::new("N(W; χ) = χ(d)·N(M; χ′)");
    let chars = GroupChar::enumerate(ctx, whole.layout());
    for chi in &chars {
        let (d, pulled) = case.pull(f, chi)?;
        let twist: CycloNum = chi.eval(ctx, &GroupElem { mult: d, add: vec![] });
        let lhs = sw.n_chi(ctx, chi)?;
        let rhs = twist.mul_ref(&sm.n_chi(ctx, &pulled)?);
        if lhs != rhs {
            check.fail(format!("χ = {:?}: {lhs:?} vs {rhs:?}", chi.mult));
        }
    }
    Ok((chars.len(), check))
}

/// Verifies the decomposition and the embeddings by enumeration over the
/// smallest suitable k_r, and the count identity for every character.
pub fn reducible_decomposition(f: &Arc<Field>, case: &ReducibleCase, budget: usize) -> Result<ReducibleReport> {
    let (whole, model) = case.specs(f)?;
    let r = first_degree_with_points(&whole, f, case.degree_step(f), budget)?;
    let ext = extend(f, r)?;
    let kf = ext.field().clone();
    let w_points = enumerate_points(&whole, &ext, budget)?;
    let m_points = enumerate_points(&model, &ext, budget)?;

    let mut decomposition = Check::new("every point lies in exactly one piece W^L, L ∈ (k*)^n");
    let mut pieces: HashMap<Vec<Elem>, HashSet<Point>> = HashMap::new();
    for p in &w_points {
        let lab = case.label(&kf, p);
        match lab.iter().map(|&v| ext.restrict(v)).collect::<Option<Vec<Elem>>>() {
            Some(l) if l.iter().all(|v| !v.is_zero()) => {
                pieces.entry(l).or_default().insert(p.clone());
            }
            _ => decomposition.fail(format!("label {lab:?} of {:?} is not in k*", p.mult)),
        }
    }

    let mut embeddings = Check::new("each i^L maps M bijectively onto W^L");
    for lab in labels(f, case.n_labels()) {
        let piece = pieces.get(&lab);
        let mut images = HashSet::new();
        for p in &m_points {
            let img = case.embed_point(&ext, &lab, p)?;
            if !on_variety(&whole, &ext, &img) || piece.is_none_or(|s| !s.contains(&img)) {
                embeddings.fail(format!("i^{lab:?}({:?}) = {:?} is not in W^L", p.mult, img.mult));
            }
            images.insert(img);
        }
        let size = piece.map_or(0, |s| s.len());
        if images.len() != m_points.len() || size != images.len() {
            embeddings.fail(format!("L = {lab:?}: #M = {}, #images = {}, #W^L = {size}", m_points.len(), images.len()));
        }
    }

    let ctx = Ctx::new(f.clone());
    let (characters, counts) = reducible_counts(&ctx, case)?;
    Ok(ReducibleReport {
        case: case.name().into(),
        whole,
        model,
        extension_size: kf.q(),
        whole_points: w_points.len(),
        model_points: m_points.len(),
        nonempty_pieces: pieces.len(),
        characters,
        checks: vec![decomposition, embeddings, counts],
    })
}

/// [`reducible_decomposition`] with the default point budget.
pub fn reducible_report(f: &Arc<Field>, case: &ReducibleCase) -> Result<ReducibleReport> {
    reducible_decomposition(f, case, POINT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_q;
    use crate::sums::Ctx;

    #[test]
    fn appell_pullback_matches_displayed_characters() {
        let ctx = Ctx::new(field_q(7).unwrap());
        let (a, b1, b2, c1, c2) = (ctx.chr(1), ctx.chr(2), ctx.chr(3), ctx.chr(4), ctx.chr(5));
        let e = ctx.eps();
        let chi = GroupChar::new(vec![a, e, e, b1, b2, c1.conj(), c2.conj()], vec![]);
        let (_, pulled) = ReducibleCase::Appell2 { lam: Elem(3) }.pull(ctx.field(), &chi).unwrap();
        assert_eq!(pulled.mult, vec![a, b1, a.mul(c2.conj()), e, c1.conj(), a.mul(b2).conj().mul(c2)]);
    }

    #[test]
    fn degeneracy_is_required() {
        let f = field_q(5).unwrap();
        let case = ReducibleCase::LauricellaD { lam: vec![Elem(2), Elem(3)] };
        assert!(matches!(case.specs(&f), Err(Error::Hypothesis(_))));
    }
}
