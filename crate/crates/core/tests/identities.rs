//! Classical identities for Gauss/Jacobi sums and one-variable
//! hypergeometric functions, checked exhaustively at small q.

use std::sync::Arc;

use ffhgf::hgf::{
    dft, hgf, idft, inverse_relation, mfn, shift_parameters, HgfParams, Humbert, Iteration, Lauricella,
    TorusFn,
};
use ffhgf::{build_field, CycloNum, Ctx, Elem, FieldSpec, MulChar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx_q(q: u64) -> Ctx {
    Ctx::new(Arc::new(build_field(FieldSpec::from_q(q).unwrap()).unwrap()))
}

#[test]
fn gauss_sum_reflection() {
    for q in [3, 4, 5, 7, 8, 9] {
        let c = ctx_q(q);
        for eta in c.chars() {
            let lhs = c.gauss(eta).mul_ref(&c.gauss_circ(eta.conj()));
            assert_eq!(lhs, c.int(eta.sign(c.field()) * c.q()), "q={q} eta={eta:?}");
        }
    }
}

#[test]
fn jacobi_matches_gauss_expression() {
    for q in [3, 4, 5, 7] {
        let c = ctx_q(q);
        for a in c.chars() {
            for b in c.chars() {
                assert_eq!(c.jacobi_direct(&[a, b]), c.jacobi_gauss(&[a, b]).unwrap());
                if q <= 5 {
                    for d in c.chars() {
                        assert_eq!(c.jacobi_direct(&[a, b, d]), c.jacobi_gauss(&[a, b, d]).unwrap());
                    }
                }
            }
        }
    }
    let c = ctx_q(3);
    let e = c.eps();
    for n in 2..6usize {
        let expected = CycloNum::from_ratio(6, 1 - (1 - 3i64).pow(n as u32), 3);
        assert_eq!(c.jacobi_gauss(&vec![e; n]).unwrap(), expected);
    }
    // four characters: enumeration against the Gauss-sum expression
    let c = ctx_q(4);
    for a in c.chars() {
        for b in c.chars() {
            let chis = [a, b, a.conj(), c.chr(1)];
            assert_eq!(c.jacobi_direct(&chis), c.jacobi(&chis).unwrap());
        }
    }
}

#[test]
fn jacobi_values_lie_in_smaller_field() {
    for q in [3, 4, 5] {
        let c = ctx_q(q);
        for a in c.chars() {
            for b in c.chars() {
                assert!(c.jacobi(&[a, b]).unwrap().in_subfield(c.n()).unwrap());
            }
        }
    }
    let c = ctx_q(3);
    assert!(!c.gauss(c.chr(1)).in_subfield(2).unwrap());
}

#[test]
fn pochhammer_reflection() {
    for q in [3, 4, 5, 7] {
        let c = ctx_q(q);
        for a in c.chars() {
            for nu in c.chars() {
                let lhs = c.pochhammer(a, nu).mul_ref(c.pochhammer_circ(a.conj(), nu.conj()));
                assert_eq!(lhs, c.int(nu.sign(c.field())));
            }
        }
    }
}

#[test]
fn zero_f_zero_and_one_f_zero() {
    for q in [3, 4, 5, 7] {
        let c = ctx_q(q);
        let f = c.field().clone();
        for lam in f.units() {
            assert_eq!(mfn(&c, &[], &[], lam), c.psi_val(f.neg(lam)));
            for a in c.chars().filter(|a| !a.is_trivial()) {
                let rhs = c.chi(a.conj(), f.sub(Elem::ONE, lam));
                assert_eq!(mfn(&c, &[a], &[], lam), rhs);
            }
        }
    }
}

#[test]
fn euler_gauss_summation() {
    for q in [3, 4, 5] {
        let c = ctx_q(q);
        for a in c.chars() {
            for b in c.chars().filter(|b| !b.is_trivial()) {
                for g in c.chars().filter(|&g| g != a) {
                    let lhs = mfn(&c, &[a, b], &[g], Elem::ONE);
                    let num = c.jacobi(&[a, b.div(g)]).unwrap();
                    let den = c.jacobi(&[a, g.conj()]).unwrap();
                    assert_eq!(lhs, num.div_ref(&den).unwrap(), "q={q} {a:?} {b:?} {g:?}");
                }
            }
        }
    }
}

#[test]
fn kummer_product_formula() {
    for q in [3, 4, 5] {
        let c = ctx_q(q);
        let f = c.field().clone();
        for a in c.chars().filter(|a| !a.is_trivial()) {
            for b in c.chars().filter(|&b| b != a) {
                for lam in f.elements() {
                    let lhs = c.psi_val(lam).mul_ref(&mfn(&c, &[a.conj().mul(b)], &[b], lam));
                    let rhs = mfn(&c, &[a], &[b], f.neg(lam));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn kummer_product_needs_admissible_alpha() {
    // α = ε or α = β fall outside the reduction the formula comes from, and
    // the identity genuinely fails there.
    let c = ctx_q(3);
    let f = c.field().clone();
    let (e, chi) = (c.eps(), c.chr(1));
    for (a, b) in [(e, e), (e, chi), (chi, chi)] {
        let lam = Elem::ONE;
        let lhs = c.psi_val(lam).mul_ref(&mfn(&c, &[a.conj().mul(b)], &[b], lam));
        assert_ne!(lhs, mfn(&c, &[a], &[b], f.neg(lam)));
    }
}

#[test]
fn values_do_not_depend_on_psi() {
    for q in [3, 4, 5] {
        let f = Arc::new(build_field(FieldSpec::from_q(q).unwrap()).unwrap());
        let ctxs: Vec<Ctx> = f.units().map(|a| Ctx::with_psi(f.clone(), a).unwrap()).collect();
        let c0 = &ctxs[0];
        for a in c0.chars() {
            for b in c0.chars() {
                for lam in f.units() {
                    let v0 = mfn(c0, &[a, b], &[c0.chr(1)], lam);
                    let fd = Lauricella::D { a, b: vec![b, a], c: c0.chr(1), d: vec![c0.eps(), c0.eps()] };
                    let w0 = fd.eval(c0, &[lam, f.add(lam, Elem::ONE)]).unwrap();
                    for c in &ctxs[1..] {
                        assert_eq!(mfn(c, &[a, b], &[c.chr(1)], lam), v0);
                        assert_eq!(fd.eval(c, &[lam, f.add(lam, Elem::ONE)]).unwrap(), w0);
                    }
                }
            }
        }
    }
}

#[test]
fn parameter_shift() {
    let c = ctx_q(5);
    let f = c.field().clone();
    for a1 in c.chars() {
        for b2 in c.chars() {
            let p = HgfParams::new(vec![a1, c.chr(3)], vec![c.chr(2), b2]);
            let s = shift_parameters(&c, &p).unwrap();
            assert!(s.classical.is_classical());
            for lam in f.elements() {
                assert_eq!(s.eval(&c, lam), p.eval(&c, lam));
            }
        }
    }
    let p = HgfParams::classical(vec![c.chr(1)], vec![c.chr(2)], c.n());
    let s = shift_parameters(&c, &p).unwrap();
    assert_eq!(s.prefactor, c.one());
    assert_eq!(s.classical, p);
}

#[test]
fn inverse_relation_holds() {
    for q in [3, 5] {
        let c = ctx_q(q);
        let f = c.field().clone();
        for a in c.chars() {
            for b in c.chars() {
                let params = [
                    HgfParams::new(vec![a], vec![]),
                    HgfParams::new(vec![a, b], vec![c.chr(1)]),
                    HgfParams::new(vec![a, b], vec![c.eps(), b.conj()]),
                ];
                for p in &params {
                    for lam in f.units() {
                        let (p2, l2) = inverse_relation(&c, p, lam).unwrap();
                        assert_eq!(p2.eval(&c, l2), p.eval(&c, lam));
                        let (p3, l3) = inverse_relation(&c, &p2, l2).unwrap();
                        assert_eq!((&p3, l3), (p, lam));
                    }
                }
            }
        }
        assert!(inverse_relation(&c, &HgfParams::new(vec![c.eps()], vec![]), Elem::ZERO).is_err());
    }
}

#[test]
fn lauricella_b_rewrite_matches_definition() {
    let c = ctx_q(3);
    let f = c.field().clone();
    let chars: Vec<MulChar> = c.chars().collect();
    for &a1 in &chars {
        for &b2 in &chars {
            for &g in &chars {
                let fb = Lauricella::B { a: vec![a1, c.chr(1)], b: vec![c.eps(), b2], c: g, d: vec![b2, a1] };
                for l1 in f.units() {
                    for l2 in f.units() {
                        assert_eq!(fb.eval(&c, &[l1, l2]).unwrap(), fb.eval_direct(&c, &[l1, l2]));
                    }
                }
            }
        }
    }
    let c = ctx_q(4);
    let f = c.field().clone();
    let fb = Lauricella::B { a: vec![c.chr(1), c.chr(2)], b: vec![c.chr(2), c.eps()], c: c.chr(1), d: vec![c.eps(), c.chr(1)] };
    for l1 in f.units() {
        for l2 in f.units() {
            assert_eq!(fb.eval(&c, &[l1, l2]).unwrap(), fb.eval_direct(&c, &[l1, l2]));
        }
    }
}

#[test]
fn symmetric_lower_parameters() {
    let c = ctx_q(4);
    let f = c.field().clone();
    let (a, b, g, d) = (c.chr(1), c.chr(2), c.chr(0), c.chr(2));
    for l1 in f.units() {
        for l2 in f.units() {
            let lam = [l1, l2];
            let fa = Lauricella::A { a, b: vec![b, a], c: vec![g, d], d: vec![d, c.chr(1)] };
            let fa2 = Lauricella::A { a, b: vec![b, a], c: vec![d, c.chr(1)], d: vec![g, d] };
            assert_eq!(fa.eval(&c, &lam).unwrap(), fa2.eval(&c, &lam).unwrap());
            let fc = Lauricella::C { a, b, c: vec![g, d], d: vec![d, c.chr(1)] };
            let fc2 = Lauricella::C { a, b, c: vec![d, c.chr(1)], d: vec![g, d] };
            assert_eq!(fc.eval(&c, &lam).unwrap(), fc2.eval(&c, &lam).unwrap());
        }
    }
}

#[test]
fn humbert_at_zero_vanishes() {
    let c = ctx_q(3);
    let e = c.eps();
    let h = Humbert::Phi3 { b: e, c: e, d1: e, d2: e };
    assert!(h.eval(&c, Elem(0), Elem(0)).is_zero());
    let h1 = Humbert::Phi1 { a: c.chr(1), b: e, c: e, d1: e, d2: e };
    assert!(h1.eval(&c, Elem(2), Elem(0)).is_zero());
}

fn random_torus_fn(c: &Ctx, vars: usize, rng: &mut ChaCha8Rng) -> TorusFn {
    let m = c.m();
    TorusFn::from_fn(c, vars, |_| {
        let coeffs: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        CycloNum::from_exponent_coeffs(m, &coeffs)
    })
}

#[test]
fn fourier_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3, 5] {
        let c = ctx_q(q);
        for _ in 0..5 {
            let f = random_torus_fn(&c, 2, &mut rng);
            assert_eq!(idft(&c, &dft(&c, &f)), f);
        }
    }
}

#[test]
fn iteration_clauses() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3, 5] {
        let c = ctx_q(q);
        let f = c.field().clone();
        let n = c.n() as i64;
        for _ in 0..6 {
            let fun = random_torus_fn(&c, 2, &mut rng);
            let fh = dft(&c, &fun);
            let r = |rng: &mut ChaCha8Rng| c.chr(rng.gen_range(0..n));
            let (a, b1, b2) = (r(&mut rng), r(&mut rng), r(&mut rng));
            let lam = [f.exp(rng.gen_range(0..n) as u64), f.exp(rng.gen_range(0..n) as u64)];
            let clauses = [
                Iteration::I { alpha: a, betas: vec![b1] },
                Iteration::I { alpha: a, betas: vec![b1, b2] },
                Iteration::II { alpha: a, betas: vec![b1] },
                Iteration::II { alpha: a, betas: vec![b1, b2] },
                Iteration::III { alpha: a, beta: b1, i: 1 },
                Iteration::III { alpha: a, beta: b1, i: 2 },
                Iteration::IV { alpha: a, i: 1 },
                Iteration::IV { alpha: a, i: 2 },
            ];
            for cl in &clauses {
                if cl.validate(2).is_err() {
                    continue;
                }
                let lhs = cl.lhs(&c, &fh, &lam).unwrap();
                let rhs = cl.rhs(&c, &fun, &lam).unwrap();
                assert_eq!(lhs, rhs, "q={q} clause {cl:?}");
            }
        }
    }
}

#[test]
fn delta_function_transform() {
    let c = ctx_q(5);
    let a = c.chr(1);
    let b = c.chr(2);
    let delta = TorusFn::from_fn(&c, 1, |t| if t[0] == Elem::ONE { c.one() } else { c.zero() });
    let fh = dft(&c, &delta);
    let cl = Iteration::I { alpha: a, betas: vec![b] };
    for lam in c.field().units() {
        assert_eq!(cl.lhs(&c, &fh, &[lam]).unwrap(), cl.rhs(&c, &delta, &[lam]).unwrap());
    }
    let c3 = ctx_q(3);
    let delta3 = TorusFn::from_fn(&c3, 1, |t| if t[0] == Elem::ONE { c3.one() } else { c3.zero() });
    let cl = Iteration::IV { alpha: c3.chr(1), i: 1 };
    for lam in c3.field().units() {
        assert_eq!(cl.lhs(&c3, &dft(&c3, &delta3), &[lam]).unwrap(), cl.rhs(&c3, &delta3, &[lam]).unwrap());
    }
    // the ₂F₁ analogue has transform −Π(α)_ν/Π(β)°_ν
    let p = HgfParams::classical(vec![a, b], vec![c.chr(3)], c.n());
    let fun = TorusFn::from_fn(&c, 1, |t| hgf(&c, &p.upper, &p.lower, t[0]));
    let fh = dft(&c, &fun);
    for nu in c.chars() {
        assert_eq!(*fh.at_char(&c, &[nu]), p.coefficient(&c, nu).neg_ref());
    }
}
