use ffhgf::ffield::field_q;
use ffhgf::varieties::reducible::{reducible_counts, reducible_report, ReducibleCase};
use ffhgf::{Ctx, Elem, Error};

fn assert_passes(q: u64, case: ReducibleCase) {
    let f = field_q(q).unwrap();
    let report = reducible_report(&f, &case).unwrap();
    assert!(report.whole_points > 0 && report.model_points > 0, "{case:?} q={q}: vacuous");
    for c in &report.checks {
        assert!(c.passed, "{case:?} q={q}: {} failed at {:?}", c.name, c.witness);
    }
}

#[test]
fn euler_gauss_decomposition() {
    for q in [3, 4, 5] {
        assert_passes(q, ReducibleCase::EulerGauss);
    }
}

#[test]
fn lauricella_d_merging() {
    assert_passes(3, ReducibleCase::LauricellaD { lam: vec![Elem(2), Elem(2)] });
    assert_passes(3, ReducibleCase::LauricellaD { lam: vec![Elem(1), Elem(1)] });
    assert_passes(5, ReducibleCase::LauricellaD { lam: vec![Elem(2), Elem(3), Elem(3)] });
}

#[test]
fn appell2_to_3x3() {
    for lam in [1, 2] {
        assert_passes(3, ReducibleCase::Appell2 { lam: Elem(lam) });
    }
    let ctx = Ctx::new(field_q(5).unwrap());
    for lam in 1..5 {
        let (n, check) = reducible_counts(&ctx, &ReducibleCase::Appell2 { lam: Elem(lam) }).unwrap();
        assert_eq!(n, 4usize.pow(7));
        assert!(check.passed, "{:?}", check.witness);
    }
}

#[test]
fn non_degenerate_inputs_are_rejected() {
    let f = field_q(5).unwrap();
    let case = ReducibleCase::LauricellaD { lam: vec![Elem(2), Elem(3)] };
    assert!(matches!(reducible_report(&f, &case), Err(Error::Hypothesis(_))));
}
