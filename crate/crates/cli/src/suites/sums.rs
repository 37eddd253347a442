//! A1–A6: Gauss and Jacobi sums, Pochhammer symbols and one-variable
//! hypergeometric identities.

use ffhgf::hgf::mfn;
use ffhgf::{CycloNum, Elem, MulChar};
use serde_json::json;

use super::{ctx_or_record, field_params, per_q};
use crate::config::SuiteConfig;
use crate::report::{Record, Tally};

fn idx(chis: &[MulChar]) -> Vec<u32> {
    chis.iter().map(|c| c.index()).collect()
}

pub fn a1(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "g(η)·g°(η̄) = η(−1)·q";
    per_q(&cfg.qs(&[3, 4, 5, 7]), |q| {
        let claim = format!("A1/gauss-reflection/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let mut t = Tally::new(claim, ANCHOR, field_params(&c));
        for eta in c.chars() {
            let lhs = c.gauss(eta).mul_ref(&c.gauss_circ(eta.conj()));
            t.eq(&lhs, &c.int(eta.sign(c.field()) * c.q()), || json!({ "eta": eta.index() }));
        }
        vec![t.finish()]
    })
}

pub fn a2(cfg: &SuiteConfig) -> Vec<Record> {
    per_q(&cfg.qs(&[3, 4, 5, 7]), |q| {
        const ANCHOR: &str = "j(χ₁,…,χₙ) by enumeration equals its Gauss-sum expression";
        let claim = format!("A2/jacobi-pairs/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let mut out = Vec::new();
        let mut t = Tally::new(claim, ANCHOR, field_params(&c));
        for a in c.chars() {
            for b in c.chars() {
                let res = c.jacobi_gauss(&[a, b]);
                if let Some(g) = t.ok(res, || json!({ "chis": idx(&[a, b]) })) {
                    t.eq(&c.jacobi_direct(&[a, b]), &g, || json!({ "chis": idx(&[a, b]) }));
                }
            }
        }
        out.push(t.finish());
        if q <= 5 {
            let mut t = Tally::new(format!("A2/jacobi-triples/q={q}"), ANCHOR, field_params(&c));
            for a in c.chars() {
                for b in c.chars() {
                    for d in c.chars() {
                        let chis = [a, b, d];
                        if let Some(g) = t.ok(c.jacobi_gauss(&chis), || json!({ "chis": idx(&chis) })) {
                            t.eq(&c.jacobi_direct(&chis), &g, || json!({ "chis": idx(&chis) }));
                        }
                    }
                }
            }
            out.push(t.finish());
        }
        // j(ε, …, ε) = (1 − (1 − q)ⁿ)/q, by both branches where enumeration is cheap
        let mut t = Tally::new(
            format!("A2/jacobi-trivial/q={q}"),
            "j(ε,…,ε) = (1 − (1 − q)ⁿ)/q",
            field_params(&c),
        );
        for n in 2..=5usize {
            let eps = vec![c.eps(); n];
            let expect = CycloNum::from_ratio(c.m(), 1 - (1 - c.q()).pow(n as u32), c.q());
            let via_gauss = c.jacobi_gauss(&eps);
            if let Some(g) = t.ok(via_gauss, || json!({ "n": n })) {
                if q == 3 && n == 2 {
                    t.spot(&g, &c.int(-1), || json!({ "n": n }));
                }
                t.eq(&g, &expect, || json!({ "n": n, "branch": "gauss" }));
            }
            if n <= 3 {
                t.eq(&c.jacobi_direct(&eps), &expect, || json!({ "n": n, "branch": "enumeration" }));
            }
        }
        out.push(t.finish());
        out
    })
}

pub fn a3(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "(α)_ν·(ᾱ)°_ν̄ = ν(−1)";
    per_q(&cfg.qs(&[3, 4, 5, 7]), |q| {
        let claim = format!("A3/pochhammer-reflection/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let mut t = Tally::new(claim, ANCHOR, field_params(&c));
        for a in c.chars() {
            for nu in c.chars() {
                let lhs = c.pochhammer(a, nu).mul_ref(c.pochhammer_circ(a.conj(), nu.conj()));
                t.eq(&lhs, &c.int(nu.sign(c.field())), || json!({ "alpha": a.index(), "nu": nu.index() }));
            }
        }
        vec![t.finish()]
    })
}

pub fn a4(cfg: &SuiteConfig) -> Vec<Record> {
    per_q(&cfg.qs(&[3, 4, 5, 7]), |q| {
        let claim = format!("A4/zero-f-zero/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, "₀F₀(λ) = ψ(−λ)") {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let mut t0 = Tally::new(claim, "₀F₀(λ) = ψ(−λ)", field_params(&c));
        let mut t1 = Tally::new(format!("A4/one-f-zero/q={q}"), "₁F₀(α; λ) = ᾱ(1 − λ) for α ≠ ε", field_params(&c));
        for lam in f.units() {
            t0.eq(&mfn(&c, &[], &[], lam), &c.psi_val(f.neg(lam)), || json!({ "lam": lam.0 }));
            for a in c.chars().filter(|a| !a.is_trivial()) {
                let rhs = c.chi(a.conj(), f.sub(Elem::ONE, lam));
                t1.eq(&mfn(&c, &[a], &[], lam), &rhs, || json!({ "alpha": a.index(), "lam": lam.0 }));
            }
        }
        vec![t0.finish(), t1.finish()]
    })
}

pub fn a5(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "₂F₁(α, β; γ; 1) = j(α, β/γ)/j(α, γ̄) for β ≠ ε, γ ≠ α";
    let mut out = per_q(&cfg.qs(&[3, 4, 5]), |q| {
        let claim = format!("A5/euler-gauss/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let mut t = Tally::new(claim, ANCHOR, field_params(&c));
        for a in c.chars() {
            for b in c.chars() {
                for g in c.chars() {
                    if b.is_trivial() || g == a {
                        t.skip();
                        continue;
                    }
                    let inst = || json!({ "alpha": a.index(), "beta": b.index(), "gamma": g.index() });
                    let rhs = c.jacobi(&[a, b.div(g)]).and_then(|num| num.div_ref(&c.jacobi(&[a, g.conj()])?));
                    if let Some(rhs) = t.ok(rhs, inst) {
                        t.eq(&mfn(&c, &[a, b], &[g], Elem::ONE), &rhs, inst);
                    }
                }
            }
        }
        vec![t.finish()]
    });
    const SPOT: &str = "₂F₁(χ₁, χ₁; ε; 1) = −1 over F_3";
    match ctx_or_record(cfg, 3, "A5/euler-gauss-spot/q=3", SPOT) {
        Ok(c) => {
            let mut t = Tally::new("A5/euler-gauss-spot/q=3", SPOT, field_params(&c));
            let chi = c.chr(1);
            t.spot(&mfn(&c, &[chi, chi], &[c.eps()], Elem::ONE), &c.int(-1), || json!({}));
            out.push(t.finish());
        }
        Err(r) => out.push(r),
    }
    out
}

pub fn a6(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "ψ(λ)·₁F₁(ᾱβ; β; λ) = ₁F₁(α; β; −λ) for α ∉ {ε, β}";
    per_q(&cfg.qs(&[3, 4, 5]), |q| {
        let claim = format!("A6/kummer-product/q={q}");
        let c = match ctx_or_record(cfg, q, &claim, ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let mut t = Tally::new(claim, ANCHOR, field_params(&c));
        for a in c.chars() {
            for b in c.chars() {
                if a.is_trivial() || a == b {
                    t.skip();
                    continue;
                }
                for lam in f.elements() {
                    let lhs = c.psi_val(lam).mul_ref(&mfn(&c, &[a.conj().mul(b)], &[b], lam));
                    let rhs = mfn(&c, &[a], &[b], f.neg(lam));
                    t.eq(&lhs, &rhs, || json!({ "alpha": a.index(), "beta": b.index(), "lam": lam.0 }));
                }
            }
        }
        vec![t.finish()]
    })
}
