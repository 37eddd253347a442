//! Seeded sampling of field elements, matrices and group elements.

use ffhgf::genhgf::WGroup;
use ffhgf::hgf::TorusFn;
use ffhgf::{Ctx, CycloNum, Elem, Field, HDeltaElem, JmElem, MatK, Partition, WDeltaElem};
use rand::Rng;

pub fn elem(f: &Field, rng: &mut impl Rng) -> Elem {
    Elem(rng.gen_range(0..f.q()))
}

pub fn unit(f: &Field, rng: &mut impl Rng) -> Elem {
    Elem(rng.gen_range(1..f.q()))
}

pub fn matrix(f: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> MatK {
    MatK::from_rows((0..rows).map(|_| (0..cols).map(|_| elem(f, rng)).collect()).collect())
        .expect("rows have equal length")
}

pub fn gl(f: &Field, d: usize, rng: &mut impl Rng) -> MatK {
    loop {
        let g = matrix(f, d, d, rng);
        if !g.det(f).is_zero() {
            return g;
        }
    }
}

pub fn jm(f: &Field, m: usize, rng: &mut impl Rng) -> JmElem {
    let mut h = vec![unit(f, rng)];
    h.extend((1..m).map(|_| elem(f, rng)));
    JmElem::new(h).expect("leading coefficient is a unit")
}

pub fn h_delta(f: &Field, delta: &Partition, rng: &mut impl Rng) -> HDeltaElem {
    HDeltaElem::new(delta, delta.parts().iter().map(|&m| jm(f, m, rng)).collect()).expect("blocks match Δ")
}

/// A uniformly random block permutation with random μ(c) blocks.
pub fn w_delta(f: &Field, delta: &Partition, rng: &mut impl Rng) -> WDeltaElem {
    let groups = delta
        .grouped()
        .into_iter()
        .map(|(n, p)| {
            let mut sigma: Vec<usize> = (0..p).collect();
            for i in (1..p).rev() {
                sigma.swap(i, rng.gen_range(0..=i));
            }
            let cs = (0..p)
                .map(|_| {
                    let mut c: Vec<Elem> = (1..n).map(|_| elem(f, rng)).collect();
                    if let Some(c1) = c.first_mut() {
                        *c1 = unit(f, rng);
                    }
                    c
                })
                .collect();
            WGroup { sigma, cs }
        })
        .collect();
    WDeltaElem::new(f, delta, groups).expect("well-formed W_Δ element")
}

/// A function on (k*)^vars with small random cyclotomic integer values.
pub fn torus_fn(ctx: &Ctx, vars: usize, rng: &mut impl Rng) -> TorusFn {
    let m = ctx.m();
    TorusFn::from_fn(ctx, vars, |_| {
        let coeffs: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        CycloNum::from_exponent_coeffs(m, &coeffs)
    })
}
