use std::sync::Arc;

use ffhgf::ffield::field_q;
use ffhgf::matrix::MatZ;
use ffhgf::varieties::iso::{
    build_iso, build_iso_for_lambda, first_degree_with_points, parse_cycles, permutations, transport_check, verify_composition, verify_iso_over,
    Iso, IsoFamily, Symmetry, TransportChecker, POINT_BUDGET,
};
use ffhgf::varieties::GroupChar;
use ffhgf::{Ctx, Elem, Error, Field};

/// The first λ ∈ (k*)^k in general position for `family`.
fn generic_lambda(f: &Field, family: IsoFamily) -> Vec<Elem> {
    let units: Vec<Elem> = f.units().collect();
    let k = family.n_lambda();
    let mut idx = vec![0usize; k];
    loop {
        let lam: Vec<Elem> = idx.iter().map(|&i| units[i]).collect();
        if family.general_position(f, &lam).is_ok() {
            return lam;
        }
        let mut j = 0;
        while j < k {
            idx[j] += 1;
            if idx[j] < units.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        assert!(j < k, "no λ in general position for {family:?} over F_{}", f.q());
    }
}

fn witness_degree(iso: &Iso) -> u32 {
    first_degree_with_points(&iso.source, iso.field(), iso.degree, POINT_BUDGET).unwrap()
}

fn verify_all(f: &Arc<Field>, family: IsoFamily, syms: &[Symmetry]) {
    let lam = generic_lambda(f, family);
    let first = build_iso_for_lambda(f, family, &lam, &syms[0]).unwrap();
    let r = witness_degree(&first);
    for sym in syms {
        let iso = build_iso_for_lambda(f, family, &lam, sym).unwrap();
        let report = verify_iso_over(&iso, r, POINT_BUDGET).unwrap();
        assert!(report.source_points > 0, "{family:?} {sym}: empty source");
        assert!(report.passed(), "{family:?} over F_{} {sym}: {:?}", f.q(), report.first_failure());
    }
}

fn transports_all(f: &Arc<Field>, family: IsoFamily) -> usize {
    let ctx = Ctx::new(f.clone());
    let lam = generic_lambda(f, family);
    let mut checked = 0;
    for sym in family.all_symmetries(f) {
        let iso = build_iso_for_lambda(f, family, &lam, &sym).unwrap();
        let checker = TransportChecker::new(&ctx, &iso).unwrap();
        let (n, failures) = checker.check_all(&ctx, &iso.source).unwrap();
        assert!(failures.is_empty(), "{family:?} over F_{} {sym}: {:?}", f.q(), failures[0]);
        checked += n;
    }
    checked
}

#[test]
fn gauss_symmetries_q3_all_of_s4() {
    let f = field_q(3).unwrap();
    let syms: Vec<Symmetry> = permutations(4).into_iter().map(Symmetry::perm).collect();
    verify_all(&f, IsoFamily::Gauss, &syms);
}

#[test]
fn gauss_symmetries_q4() {
    let f = field_q(4).unwrap();
    let syms: Vec<Symmetry> = permutations(4).into_iter().map(Symmetry::perm).collect();
    verify_all(&f, IsoFamily::Gauss, &syms);
}

#[test]
fn gauss_lambda_orbit_is_the_anharmonic_group() {
    for q in [5, 7, 9] {
        let f = field_q(q).unwrap();
        let lam = generic_lambda(&f, IsoFamily::Gauss)[0];
        let one = Elem::ONE;
        let orbit = [
            lam,
            f.inv(lam),
            f.sub(one, lam),
            f.inv(f.sub(one, lam)),
            f.div(lam, f.sub(lam, one)),
            f.div(f.sub(lam, one), lam),
        ];
        for sigma in permutations(4) {
            let iso = build_iso_for_lambda(&f, IsoFamily::Gauss, &[lam], &Symmetry::perm(sigma)).unwrap();
            assert!(orbit.contains(&iso.lambda_target()[0]));
        }
        let s13 = Symmetry::perm(parse_cycles(4, "(1 3)").unwrap());
        let iso = build_iso_for_lambda(&f, IsoFamily::Gauss, &[lam], &s13).unwrap();
        assert_eq!(iso.lambda_target(), vec![f.sub(one, lam)]);
        let m1 = f.minus_one();
        assert_eq!(iso.d, vec![m1, one, one, f.div(f.sub(lam, one), lam)]);
    }
}

#[test]
fn kummer_symmetries_q3() {
    let f = field_q(3).unwrap();
    verify_all(&f, IsoFamily::Kummer, &IsoFamily::Kummer.all_symmetries(&f));
}

#[test]
fn lauricella_d_symmetries_q4() {
    let f = field_q(4).unwrap();
    let fam = IsoFamily::LauricellaD { m: 2 };
    let mut syms = fam.generators(&f);
    syms.push(Symmetry::perm(parse_cycles(5, "(1 4)(2 5 3)").unwrap()));
    verify_all(&f, fam, &syms);
}

#[test]
fn humbert1_symmetries_q3() {
    let f = field_q(3).unwrap();
    verify_all(&f, IsoFamily::Humbert1, &IsoFamily::Humbert1.all_symmetries(&f));
}

#[test]
fn humbert3_symmetries_q3() {
    let f = field_q(3).unwrap();
    verify_all(&f, IsoFamily::Humbert3, &IsoFamily::Humbert3.all_symmetries(&f));
}

#[test]
fn lauricella_a_symmetries_q4() {
    let f = field_q(4).unwrap();
    let fam = IsoFamily::LauricellaA { m: 2 };
    verify_all(&f, fam, &fam.all_symmetries(&f));
}

#[test]
fn no_general_position_for_small_fields() {
    // over F_3 every choice of λ is degenerate for F_D² and F_A²
    let f = field_q(3).unwrap();
    for fam in [IsoFamily::LauricellaD { m: 2 }, IsoFamily::LauricellaA { m: 2 }] {
        for a in f.units() {
            for b in f.units() {
                assert!(matches!(fam.general_position(&f, &[a, b]), Err(Error::GeneralPosition(_))));
            }
        }
    }
}

#[test]
fn transports_every_character() {
    let cases: Vec<(u64, IsoFamily)> = vec![
        (3, IsoFamily::Gauss),
        (4, IsoFamily::Gauss),
        (5, IsoFamily::Gauss),
        (7, IsoFamily::Gauss),
        (3, IsoFamily::Kummer),
        (5, IsoFamily::Kummer),
        (4, IsoFamily::LauricellaD { m: 2 }),
        (5, IsoFamily::LauricellaD { m: 2 }),
        (3, IsoFamily::Humbert1),
        (4, IsoFamily::Humbert1),
        (3, IsoFamily::Humbert3),
        (4, IsoFamily::Humbert3),
        (4, IsoFamily::LauricellaA { m: 2 }),
        (5, IsoFamily::LauricellaA { m: 2 }),
    ];
    for (q, fam) in cases {
        let f = field_q(q).unwrap();
        assert!(transports_all(&f, fam) > 0);
    }
}

#[test]
fn named_transports() {
    // Gauss, σ = (1 3), every χ = (α₁, …, α₄) over F_5
    let f = field_q(5).unwrap();
    let ctx = Ctx::new(f.clone());
    let s13 = Symmetry::perm(parse_cycles(4, "(1 3)").unwrap());
    let iso = build_iso_for_lambda(&f, IsoFamily::Gauss, &[Elem(2)], &s13).unwrap();
    for chi in GroupChar::enumerate(&ctx, iso.source.layout()) {
        let o = transport_check(&ctx, &iso, &chi).unwrap();
        assert!(o.equal, "{:?}", o.chi);
    }
    // Kummer, σ = (1 2), c = 1
    let sym = Symmetry::new(vec![1, 0], vec![Elem::ONE]);
    let iso = build_iso_for_lambda(&f, IsoFamily::Kummer, &[Elem(3)], &sym).unwrap();
    assert_eq!(iso.q, MatZ::from_rows(&[&[-1, -1, -1], &[0, 1, 0], &[0, 0, 1]]));
    for chi in GroupChar::enumerate(&ctx, iso.source.layout()) {
        assert!(transport_check(&ctx, &iso, &chi).unwrap().equal);
    }
}

#[test]
fn composition_law() {
    let f = field_q(3).unwrap();
    for fam in [IsoFamily::Gauss, IsoFamily::Kummer, IsoFamily::Humbert3, IsoFamily::Humbert1] {
        let lam = generic_lambda(&f, fam);
        let x = fam.normalized_x(&f, &lam).unwrap();
        let gens = fam.generators(&f);
        let r = witness_degree(&build_iso(&f, fam, &x, &gens[0]).unwrap());
        for a in &gens {
            for b in &gens {
                let c = verify_composition(&f, fam, &x, (a, b), r, POINT_BUDGET).unwrap();
                assert!(c.passed, "{fam:?} {a} then {b}: {:?}", c.witness);
            }
        }
    }
    let f4 = field_q(4).unwrap();
    let fam = IsoFamily::LauricellaA { m: 2 };
    let x = fam.normalized_x(&f4, &generic_lambda(&f4, fam)).unwrap();
    let gens = fam.generators(&f4);
    let r = witness_degree(&build_iso(&f4, fam, &x, &gens[0]).unwrap());
    let c = verify_composition(&f4, fam, &x, (&gens[0], &gens[1]), r, POINT_BUDGET).unwrap();
    assert!(c.passed, "{:?}", c.witness);
}

#[test]
fn non_normalized_parameters() {
    // h_w is defined for every x with d_x ∈ (k*)^n, not only normalized ones
    let f = field_q(5).unwrap();
    let x = IsoFamily::Gauss.z_matrix(&IsoFamily::Gauss.normalized_x(&f, &[Elem(3)]).unwrap());
    assert_eq!(x.cols(), 4);
    let ctx = Ctx::new(f.clone());
    let xg = ffhgf::matrix::MatK::from_rows(vec![vec![Elem(2), Elem(3)], vec![Elem(4), Elem(2)]]).unwrap();
    for sigma in permutations(4) {
        let Ok(iso) = build_iso(&f, IsoFamily::Gauss, &xg, &Symmetry::perm(sigma)) else {
            continue;
        };
        let checker = TransportChecker::new(&ctx, &iso).unwrap();
        let (_, failures) = checker.check_all(&ctx, &iso.source).unwrap();
        assert!(failures.is_empty());
    }
}

#[test]
fn corrupted_q_is_caught() {
    let f = field_q(3).unwrap();
    let s13 = Symmetry::perm(parse_cycles(4, "(1 3)").unwrap());
    let mut iso = build_iso_for_lambda(&f, IsoFamily::Gauss, &[Elem(2)], &s13).unwrap();
    let v = iso.q.get(2, 0);
    iso.q.set(2, 0, v + 1);
    let report = verify_iso_over(&iso, witness_degree(&iso), POINT_BUDGET).unwrap();
    assert!(!report.passed());
    assert!(report.first_failure().unwrap().witness.is_some());

    let f = field_q(5).unwrap();
    let ctx = Ctx::new(f.clone());
    let mut iso = build_iso_for_lambda(&f, IsoFamily::Gauss, &[Elem(2)], &s13).unwrap();
    iso.d[3] = f.mul(iso.d[3], f.minus_one());
    let checker = TransportChecker::new(&ctx, &iso).unwrap();
    let (_, failures) = checker.check_all(&ctx, &iso.source).unwrap();
    assert!(!failures.is_empty());
}

#[test]
fn gauss_one_three_relation() {
    // F(α₁,α₂; α₁α₂β₁, β̄₂; λ)
    //   = α₁(−1)·j(α₁,β₁)/j(α₁, (α₁α₂β₁)⁻¹)·β₂(λ/(λ−1))·F(α₁,α₂; β̄₁, β̄₂; 1−λ)
    // whenever α₁β₁, α₂β₂, α₂β₁ ≠ ε
    use ffhgf::hgf::hgf;
    let mut checked = 0;
    for q in [3, 4, 5, 7] {
        let f = field_q(q).unwrap();
        let ctx = Ctx::new(f.clone());
        let chars: Vec<_> = ctx.chars().collect();
        for &a1 in &chars {
            for &a2 in &chars {
                for &b1 in &chars {
                    for &b2 in &chars {
                        if a1.mul(b1).is_trivial() || a2.mul(b2).is_trivial() || a2.mul(b1).is_trivial() {
                            continue;
                        }
                        for lam in f.units().filter(|&l| l != Elem::ONE) {
                            let lhs = hgf(&ctx, &[a1, a2], &[a1.mul(a2).mul(b1), b2.conj()], lam);
                            let coef = ctx
                                .jacobi(&[a1, b1])
                                .unwrap()
                                .div_ref(&ctx.jacobi(&[a1, a1.mul(a2).mul(b1).conj()]).unwrap())
                                .unwrap()
                                .scale_int(a1.sign(&f))
                                .mul_ref(&ctx.chi(b2, f.div(lam, f.sub(lam, Elem::ONE))));
                            let rhs = coef.mul_ref(&hgf(&ctx, &[a1, a2], &[b1.conj(), b2.conj()], f.sub(Elem::ONE, lam)));
                            assert_eq!(lhs, rhs, "q={q}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}
