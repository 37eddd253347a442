use std::sync::Arc;

use ffhgf::genhgf::*;
use ffhgf::{build_field, Ctx, Elem, Error, Field, FieldSpec, MatK, MatZ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(q: u64) -> Ctx {
    Ctx::new(Arc::new(build_field(FieldSpec::from_q(q).unwrap()).unwrap()))
}

fn rand_elem(f: &Field, rng: &mut impl Rng) -> Elem {
    Elem(rng.gen_range(0..f.q()))
}

fn rand_unit(f: &Field, rng: &mut impl Rng) -> Elem {
    Elem(rng.gen_range(1..f.q()))
}

fn rand_matrix(f: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> MatK {
    MatK::from_rows((0..rows).map(|_| (0..cols).map(|_| rand_elem(f, rng)).collect()).collect()).unwrap()
}

fn rand_gl(f: &Field, d: usize, rng: &mut impl Rng) -> MatK {
    loop {
        let g = rand_matrix(f, d, d, rng);
        if !g.det(f).is_zero() {
            return g;
        }
    }
}

fn rand_jm(f: &Field, m: usize, rng: &mut impl Rng) -> JmElem {
    let mut h = vec![rand_unit(f, rng)];
    h.extend((1..m).map(|_| rand_elem(f, rng)));
    JmElem::new(h).unwrap()
}

fn rand_h(f: &Field, delta: &Partition, rng: &mut impl Rng) -> HDeltaElem {
    HDeltaElem::new(delta, delta.parts().iter().map(|&m| rand_jm(f, m, rng)).collect()).unwrap()
}

fn rand_w(f: &Field, delta: &Partition, rng: &mut impl Rng) -> WDeltaElem {
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
                    let mut c: Vec<Elem> = (1..n).map(|_| rand_elem(f, rng)).collect();
                    if let Some(c1) = c.first_mut() {
                        *c1 = rand_unit(f, rng);
                    }
                    c
                })
                .collect();
            WGroup { sigma, cs }
        })
        .collect();
    WDeltaElem::new(f, delta, groups).unwrap()
}

fn e(f: &Field, v: &[i64]) -> Vec<Elem> {
    v.iter().map(|&x| f.from_int(x)).collect()
}

#[test]
fn theta_is_additive_on_products() {
    let c = ctx(5);
    let f = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = rand_jm(f, 4, &mut rng);
        let y = rand_jm(f, 4, &mut rng);
        let z = x.mul(f, &y).unwrap();
        let (tx, ty, tz) = (thetas(f, x.coeffs()).unwrap(), thetas(f, y.coeffs()).unwrap(), thetas(f, z.coeffs()).unwrap());
        for i in 0..3 {
            assert_eq!(tz[i], f.add(tx[i], ty[i]));
        }
    }
}

#[test]
fn theta_two_matches_closed_form() {
    // θ₂ = X₂ − X₁²/2 with X_j = x_j/x₀
    let c = ctx(7);
    let f = c.field();
    for x0 in f.units() {
        for x1 in f.elements() {
            for x2 in f.elements() {
                let (a, b) = (f.div(x1, x0), f.div(x2, x0));
                let expect = f.sub(b, f.div(f.mul(a, a), f.from_int(2)));
                assert_eq!(theta(f, 2, &[x0, x1, x2]).unwrap(), expect);
                assert_eq!(theta_bar(f, 2, &[x0, x1, x2]).unwrap(), f.mul(f.mul(x0, x0), expect));
            }
        }
    }
    assert_eq!(p_poly(f, 2, &e(f, &[2, 3])).unwrap(), f.add(f.from_int(3), f.div(f.from_int(4), f.from_int(2))));
}

#[test]
fn iota_is_an_isomorphism() {
    for q in [5, 7] {
        let c = ctx(q);
        let f = c.field();
        for m in 1..=3usize {
            let mut all = Vec::new();
            ffhgf_tuples(m, f.q(), |t| {
                if t[0] != 0 {
                    all.push(JmElem::new(t.iter().map(|&x| Elem(x)).collect()).unwrap());
                }
            });
            for h in &all {
                let (a0, a) = iota(f, h).unwrap();
                assert_eq!(&iota_inv(f, a0, &a).unwrap(), h);
            }
            for h in all.iter().step_by(7) {
                for k in all.iter().step_by(5) {
                    let (h0, th) = iota(f, h).unwrap();
                    let (k0, tk) = iota(f, k).unwrap();
                    let (p0, tp) = iota(f, &h.mul(f, k).unwrap()).unwrap();
                    assert_eq!(p0, f.mul(h0, k0));
                    for i in 0..m - 1 {
                        assert_eq!(tp[i], f.add(th[i], tk[i]));
                    }
                }
            }
        }
    }
}

fn ffhgf_tuples(n: usize, base: u32, mut visit: impl FnMut(&[u32])) {
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

#[test]
fn characters_of_jm_are_homomorphisms() {
    let c = ctx(5);
    let f = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let chi = JmChar::new(c.chr(rng.gen_range(0..4)), vec![rand_elem(f, &mut rng), rand_elem(f, &mut rng)]);
        let h = rand_jm(f, 3, &mut rng);
        let k = rand_jm(f, 3, &mut rng);
        let lhs = chi.eval(&c, &h.mul(f, &k).unwrap()).unwrap();
        let rhs = chi.eval(&c, &h).unwrap().mul_ref(&chi.eval(&c, &k).unwrap());
        assert_eq!(lhs, rhs);
        let triv = JmChar::new(c.eps(), vec![Elem::ZERO; 2]);
        assert_eq!(triv.eval(&c, &h).unwrap(), c.one());
    }
}

#[test]
fn mu_group_law_and_diagonal() {
    let c = ctx(5);
    let f = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = vec![rand_unit(f, &mut rng), rand_elem(f, &mut rng), rand_elem(f, &mut rng)];
        let b = vec![rand_unit(f, &mut rng), rand_elem(f, &mut rng), rand_elem(f, &mut rng)];
        let mb = mu_matrix(f, &b).unwrap();
        let cc: Vec<Elem> = (1..4)
            .map(|k| (1..4).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(a[j - 1], mb.get(j, k)))))
            .collect();
        let ma = mu_matrix(f, &a).unwrap();
        assert_eq!(ma.mul(f, &mb).unwrap(), mu_matrix(f, &cc).unwrap());
        for i in 0..4 {
            assert_eq!(ma.get(i, i), f.pow(a[0], i as u64));
        }
    }
}

#[test]
fn theta_intertwines_mu() {
    // (x₀, θ(x))·μ(y) = (x₀, θ(x·μ(y)))
    let c = ctx(7);
    let f = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let x = rand_jm(f, 4, &mut rng);
        let y = vec![rand_unit(f, &mut rng), rand_elem(f, &mut rng), rand_elem(f, &mut rng)];
        let mu = mu_matrix(f, &y).unwrap();
        let (x0, th) = iota(f, &x).unwrap();
        let mut lhs_in = vec![x0];
        lhs_in.extend(th);
        let lhs = mu.left_mul_vec(f, &lhs_in);
        let xm = mu.left_mul_vec(f, x.coeffs());
        let (y0, ty) = iota(f, &JmElem::new(xm).unwrap()).unwrap();
        let mut rhs = vec![y0];
        rhs.extend(ty);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn w_matrices_and_character_action() {
    let c = ctx(5);
    let f = c.field();
    let d = Partition::parse("1,1,2").unwrap();
    let id = WDeltaElem::identity(&d);
    assert_eq!(id.to_matrix(f).unwrap(), MatK::identity(4));
    let w = WDeltaElem::new(
        f,
        &d,
        vec![WGroup { sigma: vec![1, 0], cs: vec![vec![], vec![]] }, WGroup { sigma: vec![0], cs: vec![vec![Elem(3)]] }],
    )
    .unwrap();
    let expect = MatK::from_ints(f, &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 3]]);
    assert_eq!(w.to_matrix(f).unwrap(), expect);
    let chi = HDeltaChar::new(
        &d,
        vec![JmChar::mult(c.chr(1)), JmChar::mult(c.chr(2)), JmChar::new(c.chr(3), vec![Elem(2)])],
    )
    .unwrap();
    let acted = w_action_on_char(f, &chi, &w).unwrap();
    let want = HDeltaChar::new(
        &d,
        vec![JmChar::mult(c.chr(2)), JmChar::mult(c.chr(1)), JmChar::new(c.chr(3), vec![f.mul(Elem(3), Elem(2))])],
    )
    .unwrap();
    assert_eq!(acted, want);
    assert_eq!(w_action_on_char(f, &chi, &id).unwrap(), chi);
}

#[test]
fn block_permutations_compose() {
    let c = ctx(3);
    let f = c.field();
    let d = Partition::parse("2,2,2").unwrap();
    let perms = [vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1], vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]];
    let pw = |s: &Vec<usize>| {
        WDeltaElem::new(f, &d, vec![WGroup { sigma: s.clone(), cs: vec![vec![Elem::ONE]; 3] }]).unwrap().to_matrix(f).unwrap()
    };
    for s in &perms {
        for t in &perms {
            let st: Vec<usize> = (0..3).map(|i| s[t[i]]).collect();
            assert_eq!(pw(s).mul(f, &pw(t)).unwrap(), pw(&st));
        }
        assert_eq!(pw(s).transpose(), pw(s).inverse(f).unwrap());
    }
    // The all-ones partition reduces to ordinary permutation matrices.
    let ones = Partition::ones(3);
    for s in &perms {
        let w = WDeltaElem::new(f, &ones, vec![WGroup { sigma: s.clone(), cs: vec![vec![]; 3] }]).unwrap();
        let pz = MatZ::permutation(s);
        let m = w.to_matrix(f).unwrap();
        for r in 0..3 {
            for col in 0..3 {
                assert_eq!(m.get(r, col), f.from_int(pz.get(r, col)));
            }
        }
    }
}

fn check_symmetry(q: u64, delta: &str, zs: usize, randoms: usize, seed: u64) {
    let c = ctx(q);
    let f = c.field();
    let d = Partition::parse(delta).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chars = HDeltaChar::enumerate(&c, &d);
    let mut ws = WDeltaElem::generators(f, &d);
    ws.extend((0..randoms).map(|_| rand_w(f, &d, &mut rng)));
    for _ in 0..zs {
        let z = rand_matrix(f, 2, d.n(), &mut rng);
        let pz = PreparedZ::new(&c, &d, &z).unwrap();
        for w in &ws {
            let zw = z.mul(f, &w.to_matrix(f).unwrap()).unwrap();
            let pzw = PreparedZ::new(&c, &d, &zw).unwrap();
            for chi in &chars {
                let lhs = pz.phi(&c, &w_action_on_char(f, chi, w).unwrap()).unwrap();
                assert_eq!(lhs, pzw.phi(&c, chi).unwrap(), "Δ={delta} q={q} z={z:?} w={w:?} χ={chi:?}");
            }
        }
    }
}

#[test]
fn symmetry_under_w_delta() {
    check_symmetry(3, "1,1,1,1", 4, 5, 10);
    check_symmetry(4, "1,1,2", 3, 5, 11);
    check_symmetry(5, "2,2", 2, 5, 12);
    check_symmetry(5, "1,3", 1, 3, 13);
    check_symmetry(3, "1,2,2", 2, 3, 14);
}

#[test]
fn gl_invariance_and_h_equivariance() {
    for (q, delta) in [(3, "1,1,1,1"), (4, "1,1,2"), (5, "2,2"), (5, "1,3"), (3, "1,1,1,2")] {
        let c = ctx(q);
        let f = c.field();
        let d = Partition::parse(delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q * 100 + d.len() as u64);
        let chars = HDeltaChar::enumerate(&c, &d);
        for _ in 0..4 {
            let z = rand_matrix(f, 2, d.n(), &mut rng);
            let g = rand_gl(f, 2, &mut rng);
            let h = rand_h(f, &d, &mut rng);
            let pz = PreparedZ::new(&c, &d, &z).unwrap();
            let pgz = PreparedZ::new(&c, &d, &g.mul(f, &z).unwrap()).unwrap();
            let pzh = PreparedZ::new(&c, &d, &z.mul(f, &h.to_matrix()).unwrap()).unwrap();
            for chi in &chars {
                let base = pz.phi(&c, chi).unwrap();
                assert_eq!(pgz.phi(&c, chi).unwrap(), base);
                assert_eq!(pzh.phi(&c, chi).unwrap(), chi.eval(&c, &h).unwrap().mul_ref(&base));
            }
        }
    }
}

#[test]
fn chi_of_sz_agrees_with_prepared_sum() {
    let c = ctx(5);
    let f = c.field();
    let d = Partition::parse("2").unwrap();
    let z = MatK::from_ints(f, &[&[1, 2], &[3, 1]]);
    let chi = HDeltaChar::new(&d, vec![JmChar::new(c.chr(1), vec![Elem(2)])]).unwrap();
    let mut sum = c.zero();
    for s1 in f.elements() {
        for s2 in f.elements() {
            let v = chi_of_sz(&c, &chi, &[s1, s2], &z).unwrap();
            // hand expansion: α(sz₀)·ψ(a·sz₁/sz₀)
            let x0 = f.add(s1, f.mul(Elem(3), s2));
            let x1 = f.add(f.mul(Elem(2), s1), s2);
            let hand = if x0.is_zero() {
                c.zero()
            } else {
                c.chi(c.chr(1), x0).mul_ref(&c.psi_val(f.mul(Elem(2), f.div(x1, x0))))
            };
            assert_eq!(v, hand);
            sum = sum.add_ref(&v);
        }
    }
    assert!(chi_of_sz(&c, &chi, &[Elem::ZERO, Elem::ZERO], &z).unwrap().is_zero());
    assert_eq!(phi_delta(&c, &chi, &z).unwrap(), sum);
}

#[test]
fn reductions_match_phi_delta() {
    for q in [3, 5] {
        let c = ctx(q);
        let f = c.field();
        let units: Vec<Elem> = f.units().collect();
        let mut forms = Vec::new();
        for &l in &units {
            forms.extend([NormalForm::Gauss { lam: l }, NormalForm::Kummer { lam: l }, NormalForm::Bessel { lam: l }]);
        }
        for &x in units.iter().take(3) {
            for &y in units.iter().rev().take(2) {
                forms.extend([
                    NormalForm::Appell { x, y },
                    NormalForm::Humbert1 { x, y },
                    NormalForm::Humbert2 { x, y },
                    NormalForm::Humbert3 { x, y },
                ]);
            }
        }
        let mut checked = 0;
        for form in forms {
            let d = form.partition();
            let z = form.matrix(f);
            assert_eq!(NormalForm::recognize(f, &d, &z).unwrap(), form);
            let pz = PreparedZ::new(&c, &d, &z).unwrap();
            for chi in HDeltaChar::enumerate(&c, &d) {
                match reduce_to_classical(&c, &d, &z, &chi) {
                    Ok(v) => {
                        assert_eq!(v, pz.phi(&c, &chi).unwrap(), "{form:?} {chi:?}");
                        checked += 1;
                    }
                    Err(Error::Hypothesis(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(checked > 100);
    }
}

#[test]
fn vanishing_without_delta_condition() {
    let c = ctx(5);
    let f = c.field();
    let z = NormalForm::Gauss { lam: Elem(2) }.matrix(f);
    let chi = HDeltaChar::from_mult(&[c.chr(1), c.chr(1), c.chr(1), c.chr(0)]);
    assert!(phi_delta(&c, &chi, &z).unwrap().is_zero());
}

#[test]
fn unsupported_shapes_are_rejected() {
    let c = ctx(5);
    let f = c.field();
    let d = Partition::parse("1,1,1,1").unwrap();
    let z = MatK::from_ints(f, &[&[1, 2, 1, 0], &[-1, -2, 0, 1]]);
    let chi = HDeltaChar::from_mult(&[c.chr(1), c.chr(1), c.chr(1), c.chr(1)]);
    assert!(matches!(reduce_to_classical(&c, &d, &z, &chi), Err(Error::Unsupported(_))));
    let chi = HDeltaChar::from_mult(&[c.eps(), c.chr(1), c.chr(1), c.chr(2)]);
    let z = NormalForm::Gauss { lam: Elem(2) }.matrix(f);
    assert!(matches!(reduce_to_classical(&c, &d, &z, &chi), Err(Error::Hypothesis(_))));
}

#[test]
fn lauricella_normalization() {
    for q in [5, 7] {
        let c = ctx(q);
        let f = c.field();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for n in [4, 5] {
            let d = Partition::ones(n);
            let chars = HDeltaChar::enumerate(&c, &d);
            let mut done = 0;
            while done < 3 {
                let z = rand_matrix(f, 2, n, &mut rng);
                let Ok((lam, g, h)) = normalize_lauricella(f, &z) else {
                    continue;
                };
                done += 1;
                let hm = MatK::block_diag(
                    &h.iter().map(|&x| MatK::from_rows(vec![vec![x]]).unwrap()).collect::<Vec<_>>(),
                );
                let zn = g.mul(f, &z).unwrap().mul(f, &hm).unwrap();
                let mut row0 = vec![Elem::ONE; n - 1];
                row0.push(Elem::ZERO);
                let mut row1 = vec![f.minus_one()];
                row1.extend(lam.iter().map(|&l| f.neg(l)));
                row1.extend([Elem::ZERO, Elem::ONE]);
                assert_eq!(zn, MatK::from_rows(vec![row0, row1]).unwrap());
                let he = HDeltaElem::new(&d, h.iter().map(|&x| JmElem::new(vec![x]).unwrap()).collect()).unwrap();
                for chi in chars.iter().step_by(7) {
                    let lhs = phi_delta(&c, chi, &zn).unwrap();
                    assert_eq!(lhs, chi.eval(&c, &he).unwrap().mul_ref(&phi_delta(&c, chi, &z).unwrap()));
                }
            }
        }
    }
}

#[test]
fn small_characteristic_is_rejected() {
    let c = ctx(4);
    let d = Partition::parse("1,3").unwrap();
    let z = rand_matrix(c.field(), 2, 4, &mut ChaCha8Rng::seed_from_u64(0));
    assert!(matches!(PreparedZ::new(&c, &d, &z), Err(Error::PartTooLarge { .. })));
}
