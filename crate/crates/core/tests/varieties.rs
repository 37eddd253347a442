use std::sync::Arc;

use ffhgf::ffield::field_q;
use ffhgf::genhgf::{phi_delta, HDeltaChar};
use ffhgf::matrix::{MatK, MatZ};
use ffhgf::varieties::count::Support;
use ffhgf::varieties::{
    char_monomial, lambda_g, monomial_map, n_chi, n_chi_closed_form, naive_count, GroupChar, GroupElem,
    VarietySpec,
};
use ffhgf::{Ctx, CycloNum, Elem, Error, Field, MulChar, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(q: u64) -> Ctx {
    Ctx::new(field_q(q).unwrap())
}

fn e(v: u32) -> Elem {
    Elem(v)
}

fn units(f: &Field) -> Vec<Elem> {
    f.units().collect()
}

fn rand_unit(rng: &mut ChaCha8Rng, f: &Field) -> Elem {
    Elem(rng.gen_range(1..f.q()))
}

fn all_families(f: &Field, rng: &mut ChaCha8Rng) -> Vec<VarietySpec> {
    let mut u = || rand_unit(rng, f);
    vec![
        VarietySpec::FermatStar { n: 2 },
        VarietySpec::FermatStar { n: 3 },
        VarietySpec::ASStar,
        VarietySpec::MXn { m: 2, n: 2, lam: u() },
        VarietySpec::MXn { m: 1, n: 2, lam: u() },
        VarietySpec::MXn { m: 0, n: 2, lam: u() },
        VarietySpec::MXn { m: 2, n: 3, lam: u() },
        VarietySpec::LauricellaD { lam: vec![u(), u()] },
        VarietySpec::LauricellaA { lam: vec![u(), u()] },
        VarietySpec::LauricellaC { lam: vec![u(), u()] },
        VarietySpec::Humbert1 { lam: [u(), u()] },
        VarietySpec::Humbert3 { lam: [u(), u()] },
    ]
}

fn sum_all(ctx: &Ctx, support: &Support, spec: &VarietySpec) -> CycloNum {
    let mut total = ctx.zero();
    for chi in GroupChar::enumerate(ctx, spec.layout()) {
        total = total.add_ref(&support.n_chi(ctx, &chi).unwrap());
    }
    total
}

#[test]
fn counting_examples() {
    let f3 = field_q(3).unwrap();
    assert_eq!(naive_count(&VarietySpec::FermatStar { n: 2 }, &f3, 1).unwrap(), 0);
    for q in [4, 5, 7] {
        assert_eq!(naive_count(&VarietySpec::FermatStar { n: 2 }, &field_q(q).unwrap(), 1).unwrap(), 0);
    }
    assert_eq!(naive_count(&VarietySpec::FermatStar { n: 2 }, &f3, 2).unwrap(), 4);
    assert_eq!(naive_count(&VarietySpec::ASStar, &f3, 1).unwrap(), 0);

    let c = ctx(3);
    let fer = VarietySpec::FermatStar { n: 2 };
    assert_eq!(lambda_g(&c, &fer, &GroupElem { mult: vec![e(2), e(2)], add: vec![] }).unwrap(), 4);
    assert_eq!(lambda_g(&c, &fer, &GroupElem { mult: vec![e(1), e(1)], add: vec![] }).unwrap(), 0);
    let eps = c.eps();
    let n = n_chi(&c, &fer, &GroupChar::new(vec![eps, eps], vec![])).unwrap();
    assert!(n.is_integer_value(1));
    let closed = n_chi_closed_form(&c, &fer, &GroupChar::new(vec![eps, eps], vec![])).unwrap();
    assert_eq!(n, closed);

    let as_ = VarietySpec::ASStar;
    for xi in [e(1), e(2)] {
        for a in [e(0), e(1), e(2)] {
            let l = lambda_g(&c, &as_, &GroupElem { mult: vec![xi], add: vec![a] }).unwrap();
            assert_eq!(l, if a == xi { 6 } else { 0 });
        }
    }
    let n = n_chi(&c, &as_, &GroupChar::new(vec![eps], vec![e(1)])).unwrap();
    assert!(n.is_integer_value(-1));
    assert_eq!(n.neg_ref(), *c.gauss(eps));
}

#[test]
fn character_components_sum_to_point_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3, 4] {
        let c = ctx(q);
        let f = c.field().clone();
        for spec in all_families(&f, &mut rng) {
            let support = Support::new(&c, &spec).unwrap();
            let naive = naive_count(&spec, &f, 1).unwrap();
            assert_eq!(support.point_count(), naive, "{spec:?}");
            assert!(sum_all(&c, &support, &spec).is_integer_value(naive as i64), "{spec:?} q={q}");
        }
    }
}

fn rand_z(rng: &mut ChaCha8Rng, f: &Field, d: usize, n: usize) -> MatK {
    let rows = (0..d).map(|_| (0..n).map(|_| Elem(rng.gen_range(0..f.q()))).collect()).collect();
    MatK::from_rows(rows).unwrap()
}

#[test]
fn general_variety_counts_are_phi_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3, 4] {
        let c = ctx(q);
        let f = c.field().clone();
        for delta in ["1,1,2", "2,2"] {
            let delta = Partition::parse(delta).unwrap();
            for _ in 0..10 {
                let z = rand_z(&mut rng, &f, 2, delta.n());
                let spec = VarietySpec::GeneralXDz { delta: delta.clone(), z: z.clone() };
                let support = Support::new(&c, &spec).unwrap();
                for chi in HDeltaChar::enumerate(&c, &delta) {
                    let g = GroupChar::new(
                        chi.blocks.iter().map(|b| b.alpha).collect(),
                        chi.blocks.iter().flat_map(|b| b.a.iter().copied()).collect(),
                    );
                    assert_eq!(support.n_chi(&c, &g).unwrap(), phi_delta(&c, &chi, &z).unwrap());
                }
                assert_eq!(support.point_count(), naive_count(&spec, &f, 1).unwrap());
            }
        }
    }
}

/// Checks every character meeting the hypotheses and returns how many did.
fn closed_forms_hold(c: &Ctx, spec: &VarietySpec) -> usize {
    let support = Support::new(c, spec).unwrap();
    let mut checked = 0;
    for chi in GroupChar::enumerate(c, spec.layout()) {
        match n_chi_closed_form(c, spec, &chi) {
            Ok(v) => {
                assert_eq!(support.n_chi(c, &chi).unwrap(), v, "{spec:?} {chi:?}");
                checked += 1;
            }
            Err(Error::Hypothesis(_)) => {}
            Err(other) => panic!("{other}"),
        }
    }
    checked
}

#[test]
fn closed_forms_for_one_variable_families() {
    for q in [3, 5] {
        let c = ctx(q);
        let f = c.field().clone();
        for lam in units(&f) {
            for (m, n) in [(2, 2), (1, 2), (0, 2), (1, 1), (0, 1)] {
                let spec = VarietySpec::MXn { m, n, lam };
                assert!(closed_forms_hold(&c, &spec) > 0);
            }
        }
        for n in 1..=3 {
            closed_forms_hold(&c, &VarietySpec::FermatStar { n });
        }
        closed_forms_hold(&c, &VarietySpec::ASStar);
    }
}

#[test]
fn closed_forms_for_two_variable_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [3, 5] {
        let c = ctx(q);
        let f = c.field().clone();
        for _ in 0..2 {
            let l = [rand_unit(&mut rng, &f), rand_unit(&mut rng, &f)];
            assert!(closed_forms_hold(&c, &VarietySpec::LauricellaD { lam: l.to_vec() }) > 0);
            assert!(closed_forms_hold(&c, &VarietySpec::Humbert1 { lam: l }) > 0);
            assert!(closed_forms_hold(&c, &VarietySpec::Humbert3 { lam: l }) > 0);
            if q == 3 {
                assert!(closed_forms_hold(&c, &VarietySpec::LauricellaA { lam: l.to_vec() }) > 0);
                assert!(closed_forms_hold(&c, &VarietySpec::LauricellaC { lam: l.to_vec() }) > 0);
            }
        }
    }
}

#[test]
fn closed_form_reports_violated_hypotheses() {
    let c = ctx(5);
    let a = c.chr(1);
    let chi = GroupChar::new(vec![a, c.chr(2), a.conj(), c.chr(3)], vec![]);
    let err = n_chi_closed_form(&c, &VarietySpec::MXn { m: 2, n: 2, lam: e(2) }, &chi).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)));
    assert!(err.to_string().starts_with("theorem hypothesis not met"));
}

#[test]
fn monomial_calculus() {
    let f9: Arc<Field> = field_q(9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x: Vec<Elem> = (0..3).map(|_| rand_unit(&mut rng, &f9)).collect();
    let y: Vec<Elem> = (0..3).map(|_| rand_unit(&mut rng, &f9)).collect();
    assert_eq!(monomial_map(&f9, &x, &MatZ::identity(3)).unwrap(), x);
    assert_eq!(
        monomial_map(&f9, &x[..2], &MatZ::from_rows(&[&[1], &[1]])).unwrap(),
        vec![f9.mul(x[0], x[1])]
    );
    let rand_int = |rng: &mut ChaCha8Rng, r, c| {
        MatZ::from_vecs((0..r).map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect()).collect())
    };
    let a = rand_int(&mut rng, 3, 4);
    let b = rand_int(&mut rng, 4, 2);
    let xa = monomial_map(&f9, &x, &a).unwrap();
    assert_eq!(monomial_map(&f9, &xa, &b).unwrap(), monomial_map(&f9, &x, &a.mul(&b)).unwrap());
    let xy: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| f9.mul(u, v)).collect();
    let ya = monomial_map(&f9, &y, &a).unwrap();
    let prod: Vec<Elem> = xa.iter().zip(&ya).map(|(&u, &v)| f9.mul(u, v)).collect();
    assert_eq!(monomial_map(&f9, &xy, &a).unwrap(), prod);
    let a2 = rand_int(&mut rng, 3, 4);
    let sum = monomial_map(&f9, &x, &a.add(&a2)).unwrap();
    let x2 = monomial_map(&f9, &x, &a2).unwrap();
    assert_eq!(sum, xa.iter().zip(&x2).map(|(&u, &v)| f9.mul(u, v)).collect::<Vec<_>>());

    // χ(x*A) = (χ*ᵗA)(x)
    let c = Ctx::new(f9.clone());
    let chi: Vec<MulChar> = (0..4).map(|_| c.chr(rng.gen_range(0..8))).collect();
    let value = |ch: &[MulChar], pt: &[Elem]| {
        ch.iter().zip(pt).fold(c.one(), |acc, (&k, &p)| acc.mul_ref(&c.chi(k, p)))
    };
    let pulled = char_monomial(&chi, &a.transpose()).unwrap();
    assert_eq!(value(&chi, &xa), value(&pulled, &x));
    assert!(monomial_map(&f9, &x, &rand_int(&mut rng, 2, 2)).is_err());
}

#[test]
fn enumerated_points_match_counts() {
    use ffhgf::ffield::extend;
    use ffhgf::varieties::points::{enumerate_points, on_variety};
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (q, r) in [(3, 1), (3, 2), (4, 1), (5, 1)] {
        let f = field_q(q).unwrap();
        let ext = extend(&f, r).unwrap();
        let mut specs = all_families(&f, &mut rng);
        specs.push(VarietySpec::GeneralXDz {
            delta: Partition::parse("1,1,2").unwrap(),
            z: rand_z(&mut rng, &f, 2, 4),
        });
        for spec in specs {
            let pts = enumerate_points(&spec, &ext, 1 << 22).unwrap();
            assert_eq!(pts.len() as u128, naive_count(&spec, &f, r).unwrap() as u128, "{spec:?} q={q} r={r}");
            assert!(pts.iter().all(|p| on_variety(&spec, &ext, p)));
        }
    }
}
