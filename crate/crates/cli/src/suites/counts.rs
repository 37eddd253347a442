//! A10 and A12: point counts of the hypergeometric varieties.

use ffhgf::varieties::count::Support;
use ffhgf::varieties::{n_chi_closed_form, naive_count, GroupChar, VarietySpec};
use ffhgf::{Ctx, Error, Field, Partition};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{ctx_or_record, field_params, per_q};
use crate::config::SuiteConfig;
use crate::report::{Record, Tally};
use crate::sample;

/// Short family name used in claim ids.
pub fn spec_name(spec: &VarietySpec) -> String {
    match spec {
        VarietySpec::GeneralXDz { delta, .. } => format!("xdz({delta})"),
        VarietySpec::MXn { m, n, .. } => format!("x{m}{n}"),
        VarietySpec::FermatStar { n } => format!("fermat{n}"),
        VarietySpec::ASStar => "artin-schreier".into(),
        VarietySpec::LauricellaD { lam } => format!("fd{}", lam.len()),
        VarietySpec::LauricellaA { lam } => format!("fa{}", lam.len()),
        VarietySpec::LauricellaC { lam } => format!("fc{}", lam.len()),
        VarietySpec::Humbert1 { .. } => "phi1".into(),
        VarietySpec::Humbert3 { .. } => "phi3".into(),
    }
}

fn spec_params(ctx: &Ctx, spec: &VarietySpec) -> Value {
    let mut p = field_params(ctx);
    p["variety"] = serde_json::to_value(spec).unwrap_or(Value::Null);
    p
}

/// One representative of every family, with seeded random parameters.
fn all_families(f: &Field, rng: &mut impl rand::Rng) -> Vec<VarietySpec> {
    let mut u = || sample::unit(f, rng);
    let mut specs = vec![
        VarietySpec::FermatStar { n: 1 },
        VarietySpec::FermatStar { n: 2 },
        VarietySpec::FermatStar { n: 3 },
        VarietySpec::ASStar,
        VarietySpec::MXn { m: 2, n: 2, lam: u() },
        VarietySpec::MXn { m: 1, n: 2, lam: u() },
        VarietySpec::MXn { m: 0, n: 2, lam: u() },
        VarietySpec::MXn { m: 1, n: 1, lam: u() },
        VarietySpec::MXn { m: 2, n: 3, lam: u() },
        VarietySpec::LauricellaD { lam: vec![u(), u()] },
        VarietySpec::LauricellaA { lam: vec![u(), u()] },
        VarietySpec::LauricellaC { lam: vec![u(), u()] },
        VarietySpec::Humbert1 { lam: [u(), u()] },
        VarietySpec::Humbert3 { lam: [u(), u()] },
    ];
    for d in ["1,1,2", "2,2"] {
        let delta = Partition::parse(d).expect("valid partition");
        let z = sample::matrix(f, 2, delta.n(), rng);
        specs.push(VarietySpec::GeneralXDz { delta, z });
    }
    specs
}

pub fn a10(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "Σ_χ N(X; χ) = #X(k)";
    per_q(&cfg.qs(&[3, 4]), |q| {
        let c = match ctx_or_record(cfg, q, &format!("A10/character-sum/q={q}"), ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let specs = all_families(&f, &mut cfg.rng(&format!("A10/{q}")));
        let mut out: Vec<Record> = specs
            .par_iter()
            .map(|spec| {
                let mut t = Tally::new(format!("A10/character-sum/{}/q={q}", spec_name(spec)), ANCHOR, spec_params(&c, spec));
                let naive = t.ok(naive_count(spec, &f, 1), || json!({}));
                let support = t.ok(Support::new(&c, spec), || json!({}));
                if let (Some(naive), Some(support)) = (naive, support) {
                    let pc = support.point_count();
                    t.holds(pc == naive, || json!({ "support": pc, "naive": naive }));
                    let mut total = c.zero();
                    for chi in GroupChar::enumerate(&c, spec.layout()) {
                        match support.n_chi(&c, &chi) {
                            Ok(v) => total = total.add_ref(&v),
                            Err(e) => t.error(e, || json!({ "chi": format!("{chi:?}") })),
                        }
                    }
                    t.eq(&total, &c.int(naive as i64), || json!({ "naive": naive }));
                }
                t.finish()
            })
            .collect();
        let mut empty = Tally::new(format!("A10/fermat2-empty/q={q}"), "#Fer₂^*(k) = 0", field_params(&c));
        if let Some(n) = empty.ok(naive_count(&VarietySpec::FermatStar { n: 2 }, &f, 1), || json!({})) {
            empty.spot(&c.int(n as i64), &c.zero(), || json!({}));
        }
        out.push(empty.finish());
        if q == 3 {
            let mut t = Tally::new("A10/artin-schreier-empty/q=3", "#AS^*(F_3) = 0", field_params(&c));
            if let Some(n) = t.ok(naive_count(&VarietySpec::ASStar, &f, 1), || json!({})) {
                t.spot(&c.int(n as i64), &c.zero(), || json!({}));
            }
            out.push(t.finish());
        }
        out
    })
}

/// Compares N(X; χ) with its closed form for every χ meeting the hypotheses.
fn closed_form_record(ctx: &Ctx, claim: String, specs: &[VarietySpec]) -> Record {
    const ANCHOR: &str = "N(X; χ) equals its closed form wherever the hypotheses hold";
    let mut params = field_params(ctx);
    params["varieties"] = serde_json::to_value(specs).unwrap_or(Value::Null);
    let mut t = Tally::new(claim, ANCHOR, params);
    for spec in specs {
        let Some(support) = t.ok(Support::new(ctx, spec), || json!({ "variety": format!("{spec:?}") })) else {
            continue;
        };
        for chi in GroupChar::enumerate(ctx, spec.layout()) {
            let inst = || json!({ "variety": format!("{spec:?}"), "chi": format!("{chi:?}") });
            match n_chi_closed_form(ctx, spec, &chi) {
                Ok(v) => match support.n_chi(ctx, &chi) {
                    Ok(n) => t.eq(&n, &v, inst),
                    Err(e) => t.error(e, inst),
                },
                Err(Error::Hypothesis(_)) => t.skip(),
                Err(e) => t.error(e, inst),
            }
        }
    }
    t.finish()
}

pub fn a12(cfg: &SuiteConfig) -> Vec<Record> {
    per_q(&cfg.qs(&[3, 5]), |q| {
        let c = match ctx_or_record(cfg, q, &format!("A12/closed-form/q={q}"), "closed-form counts") {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let units: Vec<_> = f.units().collect();
        let mut groups: Vec<(String, Vec<VarietySpec>)> = Vec::new();
        for (m, n) in [(2, 2), (1, 2), (0, 2), (1, 1), (0, 1)] {
            let specs = units.iter().map(|&lam| VarietySpec::MXn { m, n, lam }).collect();
            groups.push((format!("x{m}{n}"), specs));
        }
        groups.push(("fermat".into(), (1..=3).map(|n| VarietySpec::FermatStar { n }).collect()));
        groups.push(("artin-schreier".into(), vec![VarietySpec::ASStar]));
        let mut rng = cfg.rng(&format!("A12/{q}"));
        let lams: Vec<[ffhgf::Elem; 2]> = (0..2).map(|_| [sample::unit(&f, &mut rng), sample::unit(&f, &mut rng)]).collect();
        groups.push(("fd2".into(), lams.iter().map(|l| VarietySpec::LauricellaD { lam: l.to_vec() }).collect()));
        groups.push(("phi1".into(), lams.iter().map(|&l| VarietySpec::Humbert1 { lam: l }).collect()));
        groups.push(("phi3".into(), lams.iter().map(|&l| VarietySpec::Humbert3 { lam: l }).collect()));
        // F_A and F_C have 7 and 8 coordinates; they run over F_3 only
        if q == 3 {
            groups.push(("fa2".into(), lams.iter().map(|l| VarietySpec::LauricellaA { lam: l.to_vec() }).collect()));
            groups.push(("fc2".into(), lams.iter().map(|l| VarietySpec::LauricellaC { lam: l.to_vec() }).collect()));
        }
        groups
            .into_par_iter()
            .map(|(name, specs)| closed_form_record(&c, format!("A12/closed-form/{name}/q={q}"), &specs))
            .collect()
    })
}
