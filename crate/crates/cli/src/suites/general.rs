//! A7–A9, A11, A18: the general function Φ_Δ, its symmetries, its point
//! counts and reductions, and the Fourier transform on (k*)².

use ffhgf::genhgf::{phi_delta, reduce_to_classical, w_action_on_char, NormalForm, PreparedZ};
use ffhgf::hgf::{dft, idft, Iteration};
use ffhgf::varieties::count::Support;
use ffhgf::varieties::{naive_count, GroupChar, VarietySpec};
use ffhgf::{Ctx, Error, HDeltaChar, MatK, Partition, WDeltaElem};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{ctx_or_record, field_params, mat_json, merge, per_q, piece};
use crate::config::SuiteConfig;
use crate::report::{Record, Tally};
use crate::sample;

/// Δ and its default field sizes for the symmetry criteria.
const SHAPES: &[(&str, &[u64])] = &[
    ("1,1,1,1", &[3, 4, 5]),
    ("1,1,2", &[3, 4, 5]),
    ("2,2", &[3, 4, 5]),
    ("1,1,1,2", &[3, 5]),
    ("1,2,2", &[3, 5]),
    ("1,1,1,1,1", &[3, 5]),
    ("1,3", &[5, 7]),
];

/// (Δ, q) pairs to run; pairs where Δ is not admissible over F_q (p < N_l)
/// are dropped, which only happens for user-supplied field lists.
fn shape_jobs(cfg: &SuiteConfig, shapes: &[(&'static str, &[u64])]) -> Vec<(&'static str, u64)> {
    let mut jobs = Vec::new();
    for &(d, qs) in shapes {
        for q in cfg.qs(qs) {
            let ok = match (Partition::parse(d), cfg.field(q)) {
                (Ok(delta), Ok(f)) => delta.check_field(&f).is_ok(),
                _ => true, // let the criterion report the error
            };
            if ok {
                jobs.push((d, q));
            }
        }
    }
    jobs
}

/// Context, partition and characters for one (Δ, q) job.
fn setup(cfg: &SuiteConfig, d: &str, q: u64, claim: &str, anchor: &str) -> Result<(Ctx, Partition), Record> {
    let c = ctx_or_record(cfg, q, claim, anchor)?;
    let delta = Partition::parse(d).map_err(|e| {
        let mut t = Tally::new(claim, anchor, json!({ "delta": d }));
        t.error(e, || json!({}));
        t.finish()
    })?;
    Ok((c, delta))
}

pub fn a7(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "Φ_Δ(χᵗw; z) = Φ_Δ(χ; zw) for w ∈ W_Δ";
    shape_jobs(cfg, SHAPES)
        .into_par_iter()
        .map(|(d, q)| {
            let claim = format!("A7/symmetry/delta={d}/q={q}");
            let (c, delta) = match setup(cfg, d, q, &claim, ANCHOR) {
                Ok(s) => s,
                Err(r) => return r,
            };
            let f = c.field().clone();
            let mut rng = cfg.rng(&format!("A7/{d}/{q}"));
            let mut ws = WDeltaElem::generators(&f, &delta);
            let n_gens = ws.len();
            ws.extend((0..cfg.samples.random_w).map(|_| sample::w_delta(&f, &delta, &mut rng)));
            let zs: Vec<MatK> = (0..cfg.samples.random_z).map(|_| sample::matrix(&f, 2, delta.n(), &mut rng)).collect();
            let mut params = field_params(&c);
            params["delta"] = json!(d);
            params["generators"] = json!(n_gens);
            params["random_w"] = json!(cfg.samples.random_w);
            params["random_z"] = json!(zs.len());
            let t = Tally::new(claim, ANCHOR, params);
            let chars = HDeltaChar::enumerate(&c, &delta);
            let pieces = zs
                .par_iter()
                .map(|z| {
                    let mut t = piece();
                    let Some(pz) = t.ok(PreparedZ::new(&c, &delta, z), || json!({ "z": mat_json(z) })) else {
                        return t;
                    };
                    for (wi, w) in ws.iter().enumerate() {
                        let inst = || json!({ "z": mat_json(z), "w": wi });
                        let zw = w.to_matrix(&f).and_then(|wm| z.mul(&f, &wm));
                        let Some(zw) = t.ok(zw, inst) else { continue };
                        let Some(pzw) = t.ok(PreparedZ::new(&c, &delta, &zw), inst) else { continue };
                        for chi in &chars {
                            let inst = || json!({ "z": mat_json(z), "w": wi, "chi": format!("{chi:?}") });
                            let lhs = w_action_on_char(&f, chi, w).and_then(|cw| pz.phi(&c, &cw));
                            let rhs = pzw.phi(&c, chi);
                            match (lhs, rhs) {
                                (Ok(l), Ok(r)) => t.eq(&l, &r, inst),
                                (Err(e), _) | (_, Err(e)) => t.error(e, inst),
                            }
                        }
                    }
                    t
                })
                .collect();
            merge(t, pieces)
        })
        .collect()
}

pub fn a8(cfg: &SuiteConfig) -> Vec<Record> {
    const GL: &str = "Φ_Δ(χ; gz) = Φ_Δ(χ; z) for g ∈ GL₂";
    const H: &str = "Φ_Δ(χ; zh) = χ(h)·Φ_Δ(χ; z) for h ∈ H_Δ";
    shape_jobs(cfg, SHAPES)
        .into_par_iter()
        .flat_map(|(d, q)| {
            let gl_claim = format!("A8/gl-invariance/delta={d}/q={q}");
            let (c, delta) = match setup(cfg, d, q, &gl_claim, GL) {
                Ok(s) => s,
                Err(r) => return vec![r],
            };
            let f = c.field().clone();
            let mut rng = cfg.rng(&format!("A8/{d}/{q}"));
            let jobs: Vec<(MatK, Vec<MatK>, Vec<ffhgf::HDeltaElem>)> = (0..cfg.samples.random_z)
                .map(|_| {
                    let z = sample::matrix(&f, 2, delta.n(), &mut rng);
                    let gs = (0..cfg.samples.random_gh).map(|_| sample::gl(&f, 2, &mut rng)).collect();
                    let hs = (0..cfg.samples.random_gh).map(|_| sample::h_delta(&f, &delta, &mut rng)).collect();
                    (z, gs, hs)
                })
                .collect();
            let mut params = field_params(&c);
            params["delta"] = json!(d);
            params["random_z"] = json!(jobs.len());
            params["per_z"] = json!(cfg.samples.random_gh);
            let chars = HDeltaChar::enumerate(&c, &delta);
            let pieces: Vec<(Tally, Tally)> = jobs
                .par_iter()
                .map(|(z, gs, hs)| {
                    let (mut tg, mut th) = (piece(), piece());
                    let Some(pz) = tg.ok(PreparedZ::new(&c, &delta, z), || json!({ "z": mat_json(z) })) else {
                        return (tg, th);
                    };
                    let base: Vec<_> = chars.iter().map(|chi| pz.phi(&c, chi)).collect();
                    for (gi, g) in gs.iter().enumerate() {
                        let inst = || json!({ "z": mat_json(z), "g": mat_json(g) });
                        let gz = g.mul(&f, z).and_then(|gz| PreparedZ::new(&c, &delta, &gz));
                        let Some(pgz) = tg.ok(gz, inst) else { continue };
                        for (chi, b) in chars.iter().zip(&base) {
                            let inst = || json!({ "z": mat_json(z), "g": gi, "chi": format!("{chi:?}") });
                            match (pgz.phi(&c, chi), b) {
                                (Ok(l), Ok(r)) => tg.eq(&l, r, inst),
                                (Err(e), _) => tg.error(e, inst),
                                (_, Err(e)) => tg.error(e, inst),
                            }
                        }
                    }
                    for (hi, h) in hs.iter().enumerate() {
                        let inst = || json!({ "z": mat_json(z), "h": mat_json(&h.to_matrix()) });
                        let zh = z.mul(&f, &h.to_matrix()).and_then(|zh| PreparedZ::new(&c, &delta, &zh));
                        let Some(pzh) = th.ok(zh, inst) else { continue };
                        for (chi, b) in chars.iter().zip(&base) {
                            let inst = || json!({ "z": mat_json(z), "h": hi, "chi": format!("{chi:?}") });
                            let lhs = pzh.phi(&c, chi);
                            let rhs = chi.eval(&c, h).and_then(|v| Ok(v.mul_ref(b.as_ref().map_err(Clone::clone)?)));
                            match (lhs, rhs) {
                                (Ok(l), Ok(r)) => th.eq(&l, &r, inst),
                                (Err(e), _) | (_, Err(e)) => th.error(e, inst),
                            }
                        }
                    }
                    (tg, th)
                })
                .collect();
            let (gp, hp): (Vec<Tally>, Vec<Tally>) = pieces.into_iter().unzip();
            vec![
                merge(Tally::new(gl_claim, GL, params.clone()), gp),
                merge(Tally::new(format!("A8/h-equivariance/delta={d}/q={q}"), H, params), hp),
            ]
        })
        .collect()
}

pub fn a9(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "N(X_{Δ,z}; χ) = Φ_Δ(χ; z), and the components sum to #X_{Δ,z}(k)";
    let shapes: &[(&str, &[u64])] = &[("1,1,2", &[3, 4]), ("2,2", &[3, 4])];
    shape_jobs(cfg, shapes)
        .into_par_iter()
        .map(|(d, q)| {
            let claim = format!("A9/count-is-phi/delta={d}/q={q}");
            let (c, delta) = match setup(cfg, d, q, &claim, ANCHOR) {
                Ok(s) => s,
                Err(r) => return r,
            };
            let f = c.field().clone();
            let mut rng = cfg.rng(&format!("A9/{d}/{q}"));
            let zs: Vec<MatK> = (0..cfg.samples.count_z).map(|_| sample::matrix(&f, 2, delta.n(), &mut rng)).collect();
            let mut params = field_params(&c);
            params["delta"] = json!(d);
            params["random_z"] = json!(zs.len());
            let t = Tally::new(claim, ANCHOR, params);
            let chars = HDeltaChar::enumerate(&c, &delta);
            let pieces = zs
                .par_iter()
                .map(|z| {
                    let mut t = piece();
                    let spec = VarietySpec::GeneralXDz { delta: delta.clone(), z: z.clone() };
                    let Some(support) = t.ok(Support::new(&c, &spec), || json!({ "z": mat_json(z) })) else {
                        return t;
                    };
                    for chi in &chars {
                        let g = GroupChar::new(
                            chi.blocks.iter().map(|b| b.alpha).collect(),
                            chi.blocks.iter().flat_map(|b| b.a.iter().copied()).collect(),
                        );
                        let inst = || json!({ "z": mat_json(z), "chi": format!("{chi:?}") });
                        match (support.n_chi(&c, &g), phi_delta(&c, chi, z)) {
                            (Ok(l), Ok(r)) => t.eq(&l, &r, inst),
                            (Err(e), _) | (_, Err(e)) => t.error(e, inst),
                        }
                    }
                    let naive = naive_count(&spec, &f, 1);
                    if let Some(n) = t.ok(naive, || json!({ "z": mat_json(z) })) {
                        let pc = support.point_count();
                        t.holds(pc == n, || json!({ "z": mat_json(z), "support": pc, "naive": n }));
                    }
                    t
                })
                .collect();
            merge(t, pieces)
        })
        .collect()
}

fn form_name(form: &NormalForm) -> &'static str {
    match form {
        NormalForm::Gauss { .. } => "gauss",
        NormalForm::Kummer { .. } => "kummer",
        NormalForm::Bessel { .. } => "bessel",
        NormalForm::Appell { .. } => "appell-f1",
        NormalForm::Humbert1 { .. } => "humbert-phi1",
        NormalForm::Humbert2 { .. } => "humbert-phi2",
        NormalForm::Humbert3 { .. } => "humbert-phi3",
    }
}

pub fn a11(cfg: &SuiteConfig) -> Vec<Record> {
    const ANCHOR: &str = "Φ_Δ(χ; z) in normal form equals its classical expression";
    per_q(&cfg.qs(&[3, 5]), |q| {
        let c = match ctx_or_record(cfg, q, &format!("A11/reduction/q={q}"), ANCHOR) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let units: Vec<_> = f.units().collect();
        let mut groups: Vec<Vec<NormalForm>> = vec![Vec::new(); 7];
        for &l in &units {
            groups[0].push(NormalForm::Gauss { lam: l });
            groups[1].push(NormalForm::Kummer { lam: l });
            groups[2].push(NormalForm::Bessel { lam: l });
        }
        for &x in &units {
            for &y in &units {
                groups[3].push(NormalForm::Appell { x, y });
                groups[4].push(NormalForm::Humbert1 { x, y });
                groups[5].push(NormalForm::Humbert2 { x, y });
                groups[6].push(NormalForm::Humbert3 { x, y });
            }
        }
        groups
            .into_par_iter()
            .map(|forms| {
                let name = form_name(&forms[0]);
                let delta = forms[0].partition();
                let mut params = field_params(&c);
                params["delta"] = json!(delta.to_string());
                params["parameters"] = json!(forms.len());
                let mut t = Tally::new(format!("A11/reduction/{name}/q={q}"), ANCHOR, params);
                let chars = HDeltaChar::enumerate(&c, &delta);
                for form in &forms {
                    let z = form.matrix(&f);
                    let inst = || json!({ "form": format!("{form:?}") });
                    let recognized = NormalForm::recognize(&f, &delta, &z);
                    t.holds(recognized.as_ref().ok() == Some(form), inst);
                    let Some(pz) = t.ok(PreparedZ::new(&c, &delta, &z), inst) else { continue };
                    for chi in &chars {
                        let inst = || json!({ "form": format!("{form:?}"), "chi": format!("{chi:?}") });
                        match reduce_to_classical(&c, &delta, &z, chi) {
                            Ok(v) => match pz.phi(&c, chi) {
                                Ok(p) => t.eq(&v, &p, inst),
                                Err(e) => t.error(e, inst),
                            },
                            Err(Error::Hypothesis(_)) => t.skip(),
                            Err(e) => t.error(e, inst),
                        }
                    }
                }
                t.finish()
            })
            .collect()
    })
}

pub fn a18(cfg: &SuiteConfig) -> Vec<Record> {
    per_q(&cfg.qs(&[3, 5]), |q| {
        const ROUND: &str = "f = F⁻¹(F f) on functions of (k*)²";
        const ITER: &str = "iteration clauses (i)–(iv) relating f̂ and f on (k*)²";
        let c = match ctx_or_record(cfg, q, &format!("A18/fourier-inversion/q={q}"), ROUND) {
            Ok(c) => c,
            Err(r) => return vec![r],
        };
        let f = c.field().clone();
        let n = c.n() as i64;
        let mut rng = cfg.rng(&format!("A18/{q}"));
        let funs: Vec<_> = (0..cfg.samples.torus_fns).map(|_| sample::torus_fn(&c, 2, &mut rng)).collect();
        let params: Vec<_> = funs
            .iter()
            .map(|_| {
                let mut r = || c.chr(rng.gen_range(0..n));
                let (a, b1, b2) = (r(), r(), r());
                let lam = [f.exp(rng.gen_range(0..n) as u64), f.exp(rng.gen_range(0..n) as u64)];
                (a, b1, b2, lam)
            })
            .collect();
        let mut p = field_params(&c);
        p["functions"] = json!(funs.len());
        let mut round = Tally::new(format!("A18/fourier-inversion/q={q}"), ROUND, p.clone());
        let mut iter = Tally::new(format!("A18/iteration/q={q}"), ITER, p);
        for (k, (fun, &(a, b1, b2, lam))) in funs.iter().zip(&params).enumerate() {
            let fh = dft(&c, fun);
            round.holds(idft(&c, &fh) == *fun, || json!({ "function": k }));
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
                    iter.skip();
                    continue;
                }
                let inst = || json!({ "function": k, "clause": format!("{cl:?}"), "lam": [lam[0].0, lam[1].0] });
                match (cl.lhs(&c, &fh, &lam), cl.rhs(&c, fun, &lam)) {
                    (Ok(l), Ok(r)) => iter.eq(&l, &r, inst),
                    (Err(e), _) | (_, Err(e)) => iter.error(e, inst),
                }
            }
        }
        vec![round.finish(), iter.finish()]
    })
}
