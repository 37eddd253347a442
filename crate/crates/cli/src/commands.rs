//! The `ffhgf` subcommands.
//!
//! Every subcommand writes JSON to standard output.  Leaving out a
//! parameter (a character, λ) tabulates over all its values; with
//! `--table` such tables, and `verify` reports, are written as CSV.  [`run`] returns the text and whether
//! the command succeeded (for `iso` and `verify`: whether every check
//! passed), so that the binary only has to print and pick an exit code.

use clap::{Args, Parser, Subcommand};
use ffhgf::genhgf::{phi_delta, reduce_to_classical, NormalForm};
use ffhgf::hgf::{for_each_tuple, hgf, mfn, Humbert, Lauricella};
use ffhgf::varieties::count::Support;
use ffhgf::varieties::iso::{
    build_iso, build_iso_for_lambda, parse_cycles, verify_iso_over, first_degree_with_points, IsoFamily, Symmetry,
    TransportChecker, POINT_BUDGET,
};
use ffhgf::varieties::{n_chi_closed_form, naive_count, GroupChar, VarietySpec};
use ffhgf::{Ctx, CycloNum, Elem, Error, HDeltaChar, MulChar, Partition};
use serde_json::{json, Value};

use crate::config::SuiteConfig;
use crate::report::{mat_json, value_json};
use crate::suites::run_suite;
use crate::{args, parse_err, Result};

#[derive(Parser, Debug)]
#[command(name = "ffhgf", version, about = "Exact hypergeometric functions over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field size q (for `verify`: a comma-separated list)
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Characteristic, with --e, instead of --q
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Degree over the prime field, with --p
    #[arg(long, global = true)]
    pub e: Option<u32>,
    /// Seed for the randomized parts of `verify`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest field or extension size that may be built
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// JSON output (the default)
    #[arg(long, global = true)]
    pub json: bool,
    /// CSV tables instead of JSON
    #[arg(long, global = true, conflicts_with = "json")]
    pub table: bool,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Use the generator of this rank (0 = smallest code)
    #[arg(long = "gen-rank", global = true, default_value_t = 0)]
    pub gen_rank: usize,
    /// Use ψ_a for this element code a instead of ψ₁
    #[arg(long, global = true)]
    pub psi: Option<u32>,
    /// Include wall-clock times in `verify` reports
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Field descriptor: modulus, generator
    Field,
    /// Gauss sum g(η)
    Gauss {
        /// Character index (all characters when omitted)
        #[arg(long)]
        chi: Option<String>,
    },
    /// Jacobi sum j(χ₁, …, χₙ)
    Jacobi {
        #[arg(long)]
        chis: String,
    },
    /// ₘFₙ(α; β; λ) with ε appended to the lower parameters
    Hgf {
        #[arg(long)]
        upper: Option<String>,
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        lam: Option<i64>,
        /// Evaluate F(α; β; λ) as given, without appending ε
        #[arg(long)]
        raw: bool,
        /// (m, n) of the full table printed by `--table` without parameters
        #[arg(long, default_value = "2,1")]
        shape: String,
    },
    /// Lauricella F_A, F_B, F_C or F_D
    Lauricella {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        lam: String,
    },
    /// Humbert Φ₁ (a,b,c,d1,d2), Φ₂ (b,b2,c,d1,d2) or Φ₃ (b,c,d1,d2)
    Humbert {
        #[arg(long)]
        kind: u8,
        #[arg(long)]
        params: String,
        #[arg(long)]
        lam: String,
    },
    /// General hypergeometric function Φ_Δ(χ; z)
    Phi {
        /// Partition Δ of n as block sizes, e.g. "1,1,2"
        #[arg(long)]
        delta: String,
        /// d×n matrix as ';'-separated rows of element codes, e.g. "1,0,1,1;0,1,1,2"
        #[arg(long)]
        z: String,
        /// Character of H_Δ, e.g. "1,0,1|a=2" (all characters when omitted)
        #[arg(long)]
        chi: Option<String>,
    },
    /// Twisted point counts N(X; χ) of a hypergeometric variety
    Count {
        /// mxn, fermat, as, fd, fa, fc, phi1, phi3 or general
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lam: Option<String>,
        /// Partition Δ for --family general
        #[arg(long)]
        delta: Option<String>,
        /// Matrix z for --family general (';'-separated rows)
        #[arg(long)]
        z: Option<String>,
        /// Character, e.g. "1,1,0,0" or "1,2,0|1" (all characters when omitted)
        #[arg(long)]
        chi: Option<String>,
    },
    /// Isomorphism attached to a symmetry, with its checks
    Iso {
        /// gauss, kummer, fd, fa, phi1 or phi3
        #[arg(long)]
        family: String,
        /// Number of variables of F_D / F_A
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        lam: Option<String>,
        /// Parameter matrix x instead of λ
        #[arg(long)]
        x: Option<String>,
        /// Permutation in 1-based cycle notation, e.g. "1 3" or "(1 4)(2 5 3)"
        #[arg(long, default_value = "id")]
        sigma: String,
        /// Scalars c of the symmetry (Kummer, Φ₁, Φ₃); default all 1
        #[arg(long)]
        c: Option<String>,
        /// Also verify the map point by point over an extension
        #[arg(long)]
        points: bool,
    },
    /// Run a verification suite (see `SUITES`; `all` runs A1–A18)
    Verify {
        #[arg(long)]
        suite: String,
    },
}

/// Text to print and whether the command succeeded.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub success: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Output { text: serde_json::to_string_pretty(&v).expect("JSON values serialize"), success: true }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_args<I, T>(argv: I) -> Result<Output>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| parse_err(e.to_string()))?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Output> {
    match cli.global.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(j).build().map_err(|e| parse_err(e.to_string()))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

fn config(g: &Global, suite: &str) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(suite);
    cfg.seed = g.seed;
    cfg.gen_rank = g.gen_rank;
    cfg.psi = g.psi;
    if let Some(cap) = g.cap {
        cfg.cap = cap;
    }
    cfg
}

fn single_q(g: &Global) -> Result<u64> {
    match (&g.q, g.p, g.e) {
        (Some(q), None, None) => match args::u64s(q)?.as_slice() {
            [q] => Ok(*q),
            _ => Err(parse_err("this command takes a single --q")),
        },
        (None, Some(p), e) => Ok(p.pow(e.unwrap_or(1))),
        (None, None, Some(_)) => Err(parse_err("--e needs --p")),
        (Some(_), _, _) => Err(parse_err("give either --q or --p/--e")),
        (None, None, None) => Err(parse_err("missing --q (or --p/--e)")),
    }
}

fn value(v: &CycloNum, extra: Value) -> Value {
    let mut out = value_json(v);
    out["text"] = json!(v.to_string());
    if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
        o.extend(e);
    }
    out
}

fn idx(chis: &[MulChar]) -> Vec<u32> {
    chis.iter().map(|c| c.index()).collect()
}

/// CSV with a header row.
fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| parse_err(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn value_cells(v: &CycloNum) -> Vec<String> {
    let z = v.embed_complex();
    let j = v.to_json();
    vec![v.to_string(), format!("{:.12}", z.re), format!("{:.12}", z.im), j["num"].to_string(), j["den"].to_string()]
}

const VALUE_COLUMNS: [&str; 5] = ["value", "re", "im", "num", "den"];

/// Columns whose cells are JSON numbers or arrays rather than text.
const NUMERIC_COLUMNS: [&str; 5] = ["lam", "re", "im", "num", "den"];

/// A value table: CSV with `--table`, otherwise a JSON array of row objects.
fn table(g: &Global, output_cols: &[&str], rows: Vec<Vec<String>>) -> Result<Output> {
    let header: Vec<&str> = output_cols.iter().copied().chain(VALUE_COLUMNS).collect();
    if g.table {
        return Ok(Output { text: csv_text(&header, rows)?, success: true });
    }
    let objects: Vec<Value> = rows
        .into_iter()
        .map(|row| {
            let fields = header.iter().zip(row).map(|(&col, cell)| {
                let v = if NUMERIC_COLUMNS.contains(&col) {
                    serde_json::from_str(&cell).unwrap_or(Value::String(cell))
                } else {
                    Value::String(cell)
                };
                (col.to_string(), v)
            });
            Value::Object(fields.collect())
        })
        .collect();
    Ok(Output::json(Value::Array(objects)))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    if let Command::Verify { suite } = &cli.command {
        return verify(g, suite);
    }
    let q = single_q(g)?;
    let cfg = config(g, "");
    let ctx = cfg.ctx(q)?;
    let f = ctx.field().clone();
    match &cli.command {
        Command::Field => {
            let d = f.descriptor();
            Ok(Output::json(json!({
                "p": d.p, "e": d.e, "q": f.q(), "modulus": d.modulus, "generator": d.generator,
                "psi": ctx.psi().a.0, "value_conductor": ctx.m(),
            })))
        }
        Command::Gauss { chi } => match chi {
            Some(s) if !g.table => {
                let eta = args::one_char(&ctx, s)?;
                Ok(Output::json(value(ctx.gauss(eta), json!({ "q": q, "chi": eta.index() }))))
            }
            _ => {
                let rows = ctx.chars().map(|eta| [vec![eta.index().to_string()], value_cells(ctx.gauss(eta))].concat()).collect();
                table(g, &["chi"], rows)
            }
        },
        Command::Jacobi { chis } => {
            let chis = args::chars(&ctx, chis)?;
            let v = ctx.jacobi(&chis)?;
            Ok(Output::json(value(&v, json!({ "q": q, "chis": idx(&chis) }))))
        }
        Command::Hgf { upper, lower, lam, raw, shape } => {
            let eval = |up: &[MulChar], lo: &[MulChar], l: Elem| if *raw { hgf(&ctx, up, lo, l) } else { mfn(&ctx, up, lo, l) };
            match (upper, lam) {
                (Some(up), Some(l)) if !g.table => {
                    let up = args::chars(&ctx, up)?;
                    let lo = args::chars(&ctx, lower.as_deref().unwrap_or(""))?;
                    let l = args::elem(&f, *l)?;
                    let v = eval(&up, &lo, l);
                    Ok(Output::json(value(&v, json!({ "q": q, "upper": idx(&up), "lower": idx(&lo), "lam": l.0 }))))
                }
                (Some(up), _) => {
                    let up = args::chars(&ctx, up)?;
                    let lo = args::chars(&ctx, lower.as_deref().unwrap_or(""))?;
                    let rows = f.elements().map(|l| [vec![l.0.to_string()], value_cells(&eval(&up, &lo, l))].concat()).collect();
                    table(g, &["lam"], rows)
                }
                (None, _) => {
                    let (m, n) = match args::ints(shape)?.as_slice() {
                        [m, n] if *m >= 0 && *n >= 0 => (*m as usize, *n as usize),
                        _ => return Err(parse_err("--shape takes m,n")),
                    };
                    let mut rows = Vec::new();
                    for_each_tuple(m + n, ctx.n(), |js| {
                        let chis: Vec<MulChar> = js.iter().map(|&j| ctx.chr(j as i64)).collect();
                        let (up, lo) = chis.split_at(m);
                        for l in f.elements() {
                            let join = |v: &[MulChar]| idx(v).iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                            rows.push([vec![join(up), join(lo), l.0.to_string()], value_cells(&eval(up, lo, l))].concat());
                        }
                    });
                    table(g, &["upper", "lower", "lam"], rows)
                }
            }
        }
        Command::Lauricella { kind, n, a, b, c, d, lam } => {
            let list = |s: &str| -> Result<Vec<MulChar>> {
                let v = args::chars(&ctx, s)?;
                if v.len() != *n {
                    return Err(parse_err(format!("expected {n} character indices in {s:?}")));
                }
                Ok(v)
            };
            let one = |s: &str| args::one_char(&ctx, s);
            let func = match kind.to_ascii_uppercase().as_str() {
                "A" => Lauricella::A { a: one(a)?, b: list(b)?, c: list(c)?, d: list(d)? },
                "B" => Lauricella::B { a: list(a)?, b: list(b)?, c: one(c)?, d: list(d)? },
                "C" => Lauricella::C { a: one(a)?, b: one(b)?, c: list(c)?, d: list(d)? },
                "D" => Lauricella::D { a: one(a)?, b: list(b)?, c: one(c)?, d: list(d)? },
                other => return Err(parse_err(format!("unknown Lauricella kind {other:?}"))),
            };
            let lam = args::elems(&f, lam)?;
            let v = func.eval(&ctx, &lam)?;
            Ok(Output::json(value(&v, json!({ "q": q, "function": func, "lam": lam }))))
        }
        Command::Humbert { kind, params, lam } => {
            let p = args::chars(&ctx, params)?;
            let func = match (kind, p.as_slice()) {
                (1, &[a, b, c, d1, d2]) => Humbert::Phi1 { a, b, c, d1, d2 },
                (2, &[b, b2, c, d1, d2]) => Humbert::Phi2 { b, b2, c, d1, d2 },
                (3, &[b, c, d1, d2]) => Humbert::Phi3 { b, c, d1, d2 },
                _ => return Err(parse_err("Φ₁ and Φ₂ take five characters, Φ₃ four; --kind is 1, 2 or 3")),
            };
            let l = args::elems(&f, lam)?;
            let [l1, l2] = l[..] else { return Err(parse_err("--lam takes two element codes")) };
            let v = func.eval(&ctx, l1, l2);
            Ok(Output::json(value(&v, json!({ "q": q, "function": func, "lam": [l1.0, l2.0] }))))
        }
        Command::Phi { delta, z, chi } => {
            let delta = Partition::parse(delta)?;
            let z = args::matrix(&f, z)?;
            let form = NormalForm::recognize(&f, &delta, &z).ok();
            match chi {
                Some(s) if !g.table => {
                    let chi = args::hdelta_char(&ctx, &delta, s)?;
                    let v = phi_delta(&ctx, &chi, &z)?;
                    let reduction = match reduce_to_classical(&ctx, &delta, &z, &chi) {
                        Ok(r) => json!({ "value": value(&r, json!({})), "agrees": r == v }),
                        Err(e) => json!({ "error": e.to_string() }),
                    };
                    Ok(Output::json(value(
                        &v,
                        json!({
                            "q": q, "delta": delta.to_string(), "z": mat_json(&z), "chi": format!("{chi:?}"),
                            "normal_form": form.map(|f| format!("{f:?}")), "reduction": reduction,
                        }),
                    )))
                }
                _ => {
                    let pz = ffhgf::genhgf::PreparedZ::new(&ctx, &delta, &z)?;
                    let rows = HDeltaChar::enumerate(&ctx, &delta)
                        .iter()
                        .map(|chi| Ok([vec![format!("{chi:?}")], value_cells(&pz.phi(&ctx, chi)?)].concat()))
                        .collect::<ffhgf::Result<Vec<_>>>()?;
                    table(g, &["chi"], rows)
                }
            }
        }
        Command::Count { family, m, n, lam, delta, z, chi } => {
            let spec = variety(&ctx, family, *m, *n, lam.as_deref(), delta.as_deref(), z.as_deref())?;
            spec.validate(&f)?;
            let support = Support::new(&ctx, &spec)?;
            let closed = |chi: &GroupChar| match n_chi_closed_form(&ctx, &spec, chi) {
                Ok(v) => Ok(Some(v)),
                Err(Error::Hypothesis(_)) | Err(Error::Unsupported(_)) => Ok(None),
                Err(e) => Err(e),
            };
            match chi {
                Some(s) if !g.table => {
                    let chi = args::group_char(&ctx, spec.layout(), s)?;
                    let v = support.n_chi(&ctx, &chi)?;
                    let cf = match n_chi_closed_form(&ctx, &spec, &chi) {
                        Ok(c) => json!({ "value": value(&c, json!({})), "agrees": c == v }),
                        Err(e) => json!({ "error": e.to_string() }),
                    };
                    Ok(Output::json(value(
                        &v,
                        json!({ "q": q, "variety": spec, "chi": format!("{chi:?}"), "points": support.point_count(), "closed_form": cf }),
                    )))
                }
                Some(_) | None if g.table => {
                    let rows = GroupChar::enumerate(&ctx, spec.layout())
                        .iter()
                        .map(|chi| {
                            let v = support.n_chi(&ctx, chi)?;
                            let cf = closed(chi)?.map(|c| c.to_string()).unwrap_or_default();
                            Ok([vec![format!("{chi:?}"), cf], value_cells(&v)].concat())
                        })
                        .collect::<ffhgf::Result<Vec<_>>>()?;
                    table(g, &["chi", "closed_form"], rows)
                }
                _ => {
                    let naive = naive_count(&spec, &f, 1)?;
                    Ok(Output::json(json!({
                        "q": q, "variety": spec, "layout": spec.layout(), "points": support.point_count(), "naive_count": naive,
                    })))
                }
            }
        }
        Command::Iso { family, m, lam, x, sigma, c, points } => iso(&ctx, family, *m, lam.as_deref(), x.as_deref(), sigma, c.as_deref(), *points),
        Command::Verify { .. } => unreachable!("handled above"),
    }
}

fn variety(
    ctx: &Ctx,
    family: &str,
    m: Option<usize>,
    n: Option<usize>,
    lam: Option<&str>,
    delta: Option<&str>,
    z: Option<&str>,
) -> Result<VarietySpec> {
    let f = ctx.field();
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| parse_err(format!("--{name} is required for --family {family}")));
    let lams = || -> Result<Vec<Elem>> { args::elems(f, lam.ok_or_else(|| parse_err(format!("--lam is required for --family {family}")))?) };
    Ok(match family {
        "mxn" => match lams()?.as_slice() {
            [l] => VarietySpec::MXn { m: need(m, "m")?, n: need(n, "n")?, lam: *l },
            _ => return Err(parse_err("--lam takes one element code")),
        },
        "fermat" => VarietySpec::FermatStar { n: need(n, "n")? },
        "as" => VarietySpec::ASStar,
        "fd" => VarietySpec::LauricellaD { lam: lams()? },
        "fa" => VarietySpec::LauricellaA { lam: lams()? },
        "fc" => VarietySpec::LauricellaC { lam: lams()? },
        "phi1" | "phi3" => {
            let l = lams()?;
            let [a, b] = l[..] else { return Err(parse_err("--lam takes two element codes")) };
            if family == "phi1" {
                VarietySpec::Humbert1 { lam: [a, b] }
            } else {
                VarietySpec::Humbert3 { lam: [a, b] }
            }
        }
        "general" => {
            let delta = Partition::parse(delta.ok_or_else(|| parse_err("--delta is required for --family general"))?)?;
            let z = args::matrix(f, z.ok_or_else(|| parse_err("--z is required for --family general"))?)?;
            VarietySpec::GeneralXDz { delta, z }
        }
        other => return Err(parse_err(format!("unknown family {other:?}"))),
    })
}

fn iso_family(name: &str, m: usize) -> Result<IsoFamily> {
    Ok(match name {
        "gauss" => IsoFamily::Gauss,
        "kummer" => IsoFamily::Kummer,
        "fd" => IsoFamily::LauricellaD { m },
        "fa" => IsoFamily::LauricellaA { m },
        "phi1" => IsoFamily::Humbert1,
        "phi3" => IsoFamily::Humbert3,
        other => return Err(parse_err(format!("unknown isomorphism family {other:?}"))),
    })
}

#[allow(clippy::too_many_arguments)]
fn iso(
    ctx: &Ctx,
    family: &str,
    m: usize,
    lam: Option<&str>,
    x: Option<&str>,
    sigma: &str,
    c: Option<&str>,
    points: bool,
) -> Result<Output> {
    let f = ctx.field();
    let family = iso_family(family, m)?;
    let perm = parse_cycles(family.perm_size(), sigma)?;
    let scalars = match c {
        Some(s) => args::elems(f, s)?,
        None => vec![Elem::ONE; family.n_scalars()],
    };
    let sym = Symmetry::new(perm, scalars);
    let iso = match (lam, x) {
        (Some(l), None) => build_iso_for_lambda(f, family, &args::elems(f, l)?, &sym)?,
        (None, Some(x)) => build_iso(f, family, &args::matrix(f, x)?, &sym)?,
        _ => return Err(parse_err("give exactly one of --lam and --x")),
    };
    let checker = TransportChecker::new(ctx, &iso)?;
    let (checked, failures) = checker.check_all(ctx, &iso.source)?;
    let mut out = json!({
        "q": f.q(),
        "family": family.name(),
        "symmetry": sym.to_string(),
        "lambda_source": iso.lambda_source(),
        "lambda_target": iso.lambda_target(),
        "x": mat_json(&iso.x),
        "x_w": mat_json(&iso.x_w),
        "q_matrix": iso.q.to_rows(),
        "d": iso.d,
        "degree": iso.degree,
        "source": iso.source,
        "target": iso.target,
        "transport": {
            "characters": checked,
            "failures": failures.len(),
            "first_failure": failures.first().map(|o| json!({
                "chi": format!("{:?}", o.chi), "chi_w": format!("{:?}", o.chi_w),
                "lhs": value_json(&o.lhs), "rhs": value_json(&o.rhs),
            })),
        },
    });
    let mut success = failures.is_empty();
    if points {
        let r = first_degree_with_points(&iso.source, f, iso.degree, POINT_BUDGET)?;
        let report = verify_iso_over(&iso, r, POINT_BUDGET)?;
        success &= report.passed() && report.source_points > 0;
        out["points"] = serde_json::to_value(&report)?;
    }
    Ok(Output { success, ..Output::json(out) })
}

fn verify(g: &Global, suite: &str) -> Result<Output> {
    let mut cfg = config(g, suite);
    cfg.fields = match (&g.q, g.p) {
        (Some(q), _) => Some(args::u64s(q)?),
        (None, Some(p)) => Some(vec![p.pow(g.e.unwrap_or(1))]),
        _ => None,
    };
    let report = run_suite(&cfg)?;
    let report = if g.timing { report } else { report.without_timing() };
    let success = report.all_passed();
    let text = if g.table { report.to_csv()? } else { serde_json::to_string_pretty(&report)? };
    Ok(Output { text, success })
}
