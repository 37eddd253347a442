//! Explicit enumeration of the points of a family over an extension k_r.
//!
//! The defining systems only see U = x^N and S = t^q − t, so the points are
//! found by solving for the admissible (U, S) values family by family and
//! then taking every N-th root and every Artin–Schreier preimage.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Elem, ExtensionField, Field};
use crate::genhgf::thetas;
use crate::hgf::for_each_tuple;

use super::VarietySpec;

/// A point: multiplicative coordinates, Artin–Schreier coordinates and free
/// coordinates, all in the extension field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub mult: Vec<Elem>,
    pub add: Vec<Elem>,
    pub free: Vec<Elem>,
}

/// Fibres of x ↦ x^N on k_r* and of t ↦ t^q − t on k_r (N, q of the base).
pub struct Fibres {
    pub field: Arc<Field>,
    pub roots: HashMap<Elem, Vec<Elem>>,
    pub as_preimages: HashMap<Elem, Vec<Elem>>,
}

impl Fibres {
    pub fn new(ext: &ExtensionField) -> Self {
        let kf = ext.field().clone();
        let n = ext.base().n() as u64;
        let q = ext.base().q() as u64;
        let mut roots: HashMap<Elem, Vec<Elem>> = HashMap::new();
        for x in kf.units() {
            roots.entry(kf.pow(x, n)).or_default().push(x);
        }
        let mut as_preimages: HashMap<Elem, Vec<Elem>> = HashMap::new();
        for t in kf.elements() {
            as_preimages.entry(kf.sub(kf.pow(t, q), t)).or_default().push(t);
        }
        Fibres { field: kf, roots, as_preimages }
    }

    fn is_power(&self, u: Elem) -> bool {
        self.roots.contains_key(&u)
    }

    fn is_as_value(&self, s: Elem) -> bool {
        self.as_preimages.contains_key(&s)
    }

    fn powers(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.roots.keys().copied().collect();
        v.sort();
        v
    }
}

/// Every admissible (U, S, free) triple of `spec` over the fibres' field;
/// `spec` must already hold parameters of that field.
fn solve_values(spec: &VarietySpec, fib: &Fibres) -> Vec<(Vec<Elem>, Vec<Elem>, Vec<Elem>)> {
    let f = &*fib.field;
    let one = Elem::ONE;
    let pw = fib.powers();
    let mut out = Vec::new();
    let comp = |u: Elem| f.sub(one, u);
    let ok_power = |u: Elem| fib.is_power(u);
    let ok_as = |u: Elem| fib.is_power(u) && fib.is_as_value(u);
    let mut push = |u: Vec<Elem>, s: Vec<Elem>, z: Vec<Elem>| {
        if spec.equations_hold(f, &u, &s, &z) {
            out.push((u, s, z));
        }
    };
    match spec {
        VarietySpec::GeneralXDz { delta, z } => {
            let offsets = delta.offsets();
            for_each_tuple(z.rows(), f.q(), |codes| {
                let s: Vec<Elem> = codes.iter().map(|&c| Elem(c)).collect();
                let v = z.left_mul_vec(f, &s);
                let mut u = Vec::new();
                let mut a = Vec::new();
                for (&m, &o) in delta.parts().iter().zip(&offsets) {
                    let x = &v[o..o + m];
                    if !ok_power(x[0]) {
                        return;
                    }
                    u.push(x[0]);
                    match thetas(f, x) {
                        Ok(t) => a.extend(t),
                        Err(_) => return,
                    }
                }
                if a.iter().all(|&t| fib.is_as_value(t)) {
                    push(u, a, s);
                }
            });
        }
        VarietySpec::MXn { m, n, lam } => {
            let l = n - m;
            let good_x: Vec<Elem> = pw.iter().copied().filter(|&u| ok_power(comp(u))).collect();
            let good_z: Vec<Elem> = pw.iter().copied().filter(|&u| ok_as(u)).collect();
            let sign = if n % 2 == 0 { one } else { f.minus_one() };
            for_each_tuple(*m, good_x.len() as u32, |ix| {
                let ux: Vec<Elem> = ix.iter().map(|&i| good_x[i as usize]).collect();
                let uy: Vec<Elem> = ux.iter().map(|&u| comp(u)).collect();
                let lhs = f.mul(f.mul(sign, *lam), f.product(ux.iter().copied()));
                let rhs_y = f.product(uy.iter().copied());
                let free_z = l.saturating_sub(1);
                for_each_tuple(free_z, good_z.len() as u32, |iz| {
                    let mut uz: Vec<Elem> = iz.iter().map(|&i| good_z[i as usize]).collect();
                    if l > 0 {
                        let denom = f.mul(rhs_y, f.product(uz.iter().copied()));
                        let last = f.div(lhs, denom);
                        if !ok_as(last) {
                            return;
                        }
                        uz.push(last);
                    }
                    let mut u = ux.clone();
                    u.extend(&uy);
                    u.extend(&uz);
                    push(u, uz, vec![]);
                });
            });
        }
        VarietySpec::FermatStar { n } => {
            for_each_tuple(n - 1, pw.len() as u32, |iu| {
                let mut u: Vec<Elem> = iu.iter().map(|&i| pw[i as usize]).collect();
                let last = f.sub(one, f.sum(u.iter().copied()));
                if ok_power(last) {
                    u.push(last);
                    push(u, vec![], vec![]);
                }
            });
        }
        VarietySpec::ASStar => {
            for &u in &pw {
                if ok_as(u) {
                    push(vec![u], vec![u], vec![]);
                }
            }
        }
        VarietySpec::LauricellaD { lam } => {
            for &x0 in &pw {
                let y0 = comp(x0);
                if !ok_power(y0) {
                    continue;
                }
                let mut xs = vec![x0];
                let mut ys = vec![y0];
                let mut ok = true;
                for &l in lam {
                    // λ x₀ x_i = y₀ (1 − x_i)
                    let denom = f.add(f.mul(l, x0), y0);
                    if denom.is_zero() {
                        ok = false;
                        break;
                    }
                    let xi = f.div(y0, denom);
                    if !ok_power(xi) || !ok_power(comp(xi)) {
                        ok = false;
                        break;
                    }
                    xs.push(xi);
                    ys.push(comp(xi));
                }
                if ok {
                    xs.extend(ys);
                    push(xs, vec![], vec![]);
                }
            }
        }
        VarietySpec::LauricellaA { lam } => {
            let k = lam.len();
            let good_y: Vec<Elem> = pw.iter().copied().filter(|&u| ok_power(comp(u))).collect();
            for &x0 in &pw {
                for_each_tuple(k, good_y.len() as u32, |iy| {
                    let ys: Vec<Elem> = iy.iter().map(|&i| good_y[i as usize]).collect();
                    let zs: Vec<Elem> = ys.iter().map(|&y| comp(y)).collect();
                    let mut xs = vec![x0];
                    for i in 0..k {
                        let xi = f.div(f.mul(lam[i], f.mul(x0, ys[i])), zs[i]);
                        if !ok_power(xi) {
                            return;
                        }
                        xs.push(xi);
                    }
                    xs.extend(&ys);
                    xs.extend(&zs);
                    push(xs, vec![], vec![]);
                });
            }
        }
        VarietySpec::LauricellaC { lam } => {
            let k = lam.len();
            for &x0 in &pw {
                for &y0 in &pw {
                    for_each_tuple(k, pw.len() as u32, |ix| {
                        let xi: Vec<Elem> = ix.iter().map(|&i| pw[i as usize]).collect();
                        let mut u = vec![x0];
                        u.extend(&xi);
                        let mut v = vec![y0];
                        for i in 0..k {
                            v.push(f.div(f.mul(lam[i], f.mul(x0, y0)), xi[i]));
                        }
                        if v.iter().all(|&y| ok_power(y)) {
                            u.extend(v);
                            push(u, vec![], vec![]);
                        }
                    });
                }
            }
        }
        VarietySpec::Humbert1 { lam } => {
            for &x1 in &pw {
                let y1 = comp(x1);
                if !ok_power(y1) {
                    continue;
                }
                let z = f.div(f.mul(lam[1], x1), y1);
                if !ok_as(z) {
                    continue;
                }
                let denom = f.add(f.mul(lam[0], x1), y1);
                if denom.is_zero() {
                    continue;
                }
                let x2 = f.div(y1, denom);
                let y2 = comp(x2);
                if ok_power(x2) && ok_power(y2) {
                    push(vec![x1, x2, y1, y2, z], vec![z], vec![]);
                }
            }
        }
        VarietySpec::Humbert3 { lam } => {
            for &x in &pw {
                let y = comp(x);
                if !ok_power(y) {
                    continue;
                }
                let z1 = f.div(f.mul(lam[0], x), y);
                if !ok_as(z1) {
                    continue;
                }
                let z2 = f.div(lam[1], z1);
                if ok_as(z2) {
                    push(vec![x, y, z1, z2], vec![z1, z2], vec![]);
                }
            }
        }
    }
    out
}

/// All points of `spec` over k_r, with a bound on how many are produced.
pub fn enumerate_points(spec: &VarietySpec, ext: &ExtensionField, budget: usize) -> Result<Vec<Point>> {
    spec.validate(ext.base())?;
    let fib = Fibres::new(ext);
    points_with_fibres(spec, ext, &fib, budget)
}

pub fn points_with_fibres(spec: &VarietySpec, ext: &ExtensionField, fib: &Fibres, budget: usize) -> Result<Vec<Point>> {
    let target = spec.map_params(|x| ext.embed(x));
    let mut out = Vec::new();
    for (u, s, z) in solve_values(&target, fib) {
        let root_lists: Vec<&Vec<Elem>> = u.iter().map(|v| &fib.roots[v]).collect();
        let as_lists: Vec<&Vec<Elem>> = s.iter().map(|v| &fib.as_preimages[v]).collect();
        let size = root_lists.iter().chain(&as_lists).map(|l| l.len()).product::<usize>();
        if out.len() + size > budget {
            return Err(Error::Budget { size: (out.len() + size) as u128, budget: budget as u128 });
        }
        let lens: Vec<u32> = root_lists.iter().chain(&as_lists).map(|l| l.len() as u32).collect();
        let mut idx = vec![0u32; lens.len()];
        loop {
            let mult = root_lists.iter().zip(&idx).map(|(l, &i)| l[i as usize]).collect();
            let add = as_lists.iter().zip(&idx[root_lists.len()..]).map(|(l, &i)| l[i as usize]).collect();
            out.push(Point { mult, add, free: z.clone() });
            let mut k = 0;
            loop {
                if k == lens.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < lens[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == lens.len() {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Does `p` satisfy the equations of `spec` (parameters in the base) over
/// the extension?
pub fn on_variety(spec: &VarietySpec, ext: &ExtensionField, p: &Point) -> bool {
    let kf = ext.field();
    let n = ext.base().n() as u64;
    let q = ext.base().q() as u64;
    let layout = spec.layout();
    if p.mult.len() != layout.mult || p.add.len() != layout.add || p.free.len() != layout.free {
        return false;
    }
    if p.mult.iter().any(|x| x.is_zero()) {
        return false;
    }
    let u: Vec<Elem> = p.mult.iter().map(|&x| kf.pow(x, n)).collect();
    let s: Vec<Elem> = p.add.iter().map(|&t| kf.sub(kf.pow(t, q), t)).collect();
    spec.map_params(|x| ext.embed(x)).equations_hold(kf, &u, &s, &p.free)
}
