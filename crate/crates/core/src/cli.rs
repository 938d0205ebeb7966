//! Batch command-line surface. Each verb reads one JSON document (or a
//! `{"batch": [...]}` of them) and writes one result document.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::codec::{self, Decoder, Defaults};
use crate::dist::{convolve, pullback_preimage, pullback_sharp, pushforward};
use crate::error::{Error, Result};
use crate::euler::{
    euler_compatibility_check, family_derive, finiteness_pipeline, j_membership, lp_eval, lp_imprimitive, psi_image,
    PipelineVerdict,
};
use crate::iwmod::{char_ideal, chi_decompose, chipart_verify, finiteness_certificate, CharIdealGen, Finiteness};
use crate::measure::{pro_pullback, pro_pushforward, pseudo_multiply};
use crate::padic::{Elem, Ring};
use crate::series::{coprimality_certificate, quotient_order, Coprimality, PowerSeries, QuotientOrder, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Inconclusive,
    NotFinite,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Inconclusive => "inconclusive",
            Status::NotFinite => "not-finite",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Inconclusive => 2,
            Status::NotFinite => 3,
        }
    }
}

/// Result of one verb on one document, before the envelope is added.
#[derive(Clone, Debug, PartialEq)]
pub struct Reply {
    pub payload: Value,
    pub status: Status,
    pub certified_precision: Option<u32>,
}

impl Reply {
    fn ok(payload: Value, prec: Option<u32>) -> Reply {
        Reply { payload, status: Status::Ok, certified_precision: prec }
    }

    fn failure(e: &Error) -> Reply {
        let status = match e {
            Error::PrecisionExhausted(_) => Status::Inconclusive,
            _ => Status::Error,
        };
        Reply { payload: error_json(e), status, certified_precision: None }
    }
}

fn error_json(e: &Error) -> Value {
    let dbg = format!("{e:?}");
    let kind = dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string();
    json!({ "error": kind, "message": e.to_string() })
}

pub const VERBS: &[&str] = &[
    "ring",
    "series.prep",
    "series.eval",
    "series.order",
    "series.coprime",
    "dist.push",
    "dist.pull",
    "dist.conv",
    "measure.reduce",
    "measure.push",
    "measure.pull",
    "measure.chi",
    "measure.twist",
    "measure.pseudo-mul",
    "module.char",
    "module.chi",
    "module.chipart",
    "module.finiteness",
    "euler.check",
    "euler.derive",
    "euler.psi",
    "euler.lp",
    "euler.pipeline",
];

fn get<'a>(doc: &'a Value, name: &str) -> Result<&'a Value> {
    doc.get(name).ok_or_else(|| Error::SchemaViolation(format!("{name}: missing")))
}

fn get_u64(doc: &Value, name: &str) -> Result<u64> {
    get(doc, name)?.as_u64().ok_or_else(|| Error::SchemaViolation(format!("{name}: expected a nonnegative integer")))
}

fn get_str<'a>(doc: &'a Value, name: &str) -> Result<&'a str> {
    get(doc, name)?.as_str().ok_or_else(|| Error::SchemaViolation(format!("{name}: expected a string")))
}

fn level(doc: &Value) -> Result<u32> {
    u32::try_from(get_u64(doc, "n")?).map_err(|_| Error::SchemaViolation("n: too large".into()))
}

fn eval_at_root(f: &PowerSeries, zeta: &Elem) -> Result<Elem> {
    let f = f.embed(zeta.ring())?;
    let x = zeta - &zeta.ring().one(zeta.prec());
    if x.is_zero() {
        return Ok(f.coeff(0).clone());
    }
    f.eval_at(&x)
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Uniformizer => json!({ "uniformizer": true }),
        Witness::Polynomial(c) => json!({ "polynomial": c.iter().map(codec::elem_json).collect::<Vec<_>>() }),
    }
}

fn finiteness_reply(f: Finiteness, prec: u32) -> Reply {
    match f {
        Finiteness::Certified { exponents } => Reply::ok(json!({ "exponents": exponents, "verdict": "certified" }), Some(prec)),
        Finiteness::NotFinite { root_order } => Reply {
            payload: json!({ "root_order": root_order, "verdict": "not-finite" }),
            status: Status::NotFinite,
            certified_precision: Some(prec),
        },
        Finiteness::Inconclusive(reason) => Reply {
            payload: json!({ "reason": reason, "verdict": "inconclusive" }),
            status: Status::Inconclusive,
            certified_precision: Some(prec),
        },
    }
}

fn dispatch(verb: &str, doc: &Value, dec: &Decoder) -> Result<Reply> {
    if !doc.is_object() {
        return Err(Error::SchemaViolation("document: expected an object".into()));
    }
    let ring = || dec.ring(get(doc, "ring")?, "ring");
    match verb {
        "ring" => {
            let r = ring()?;
            Ok(Reply::ok(ring_info(&r), Some(r.default_precision())))
        }
        "series.prep" => {
            let r = ring()?;
            let w = dec.series(get(doc, "series")?, &r, "series")?.weierstrass_prepare()?;
            Ok(Reply::ok(codec::weierstrass_json(&w), Some(w.certified_precision)))
        }
        "series.eval" => {
            let r = ring()?;
            let f = dec.series(get(doc, "series")?, &r, "series")?;
            let v = match (doc.get("at"), doc.get("root")) {
                (Some(x), None) => f.eval_at(&dec.elem(x, &r, r.default_precision(), "at")?)?,
                (None, Some(z)) => eval_at_root(&f, &dec.root(z, &r, "root")?)?,
                _ => return Err(Error::SchemaViolation("at: give exactly one of at, root".into())),
            };
            Ok(Reply::ok(json!({ "value": codec::elem_json(&v) }), Some(v.prec())))
        }
        "series.order" => {
            let r = ring()?;
            let f = dec.series(get(doc, "series")?, &r, "series")?;
            let n = level(doc)?;
            Ok(match quotient_order(&f, n)? {
                QuotientOrder::Finite { exponent } => Reply::ok(json!({ "exponent": exponent, "n": n }), Some(f.prec())),
                QuotientOrder::NotFinite { root_order } => Reply {
                    payload: json!({ "n": n, "root_order": root_order }),
                    status: Status::NotFinite,
                    certified_precision: Some(f.prec()),
                },
                QuotientOrder::Inconclusive(reason) => Reply {
                    payload: json!({ "n": n, "reason": reason }),
                    status: Status::Inconclusive,
                    certified_precision: None,
                },
            })
        }
        "series.coprime" => {
            let r = ring()?;
            let f = dec.series(get(doc, "f")?, &r, "f")?;
            let g = dec.series(get(doc, "g")?, &r, "g")?;
            let prec = f.prec().min(g.prec());
            Ok(match coprimality_certificate(&f, &g)? {
                Coprimality::Certified { exponent } => {
                    Reply::ok(json!({ "exponent": exponent, "verdict": "certified" }), Some(prec))
                }
                Coprimality::NotCoprime(w) => Reply {
                    payload: json!({ "verdict": "not-coprime", "witness": witness_json(&w) }),
                    status: Status::NotFinite,
                    certified_precision: Some(prec),
                },
                Coprimality::Inconclusive(reason) => Reply {
                    payload: json!({ "reason": reason, "verdict": "inconclusive" }),
                    status: Status::Inconclusive,
                    certified_precision: None,
                },
            })
        }
        "dist.push" | "dist.pull" => {
            let r = ring()?;
            let phi = dec.morphism(get(doc, "morphism")?, "morphism")?;
            let mu = dec.distribution(get(doc, "dist")?, &r, "dist")?;
            let out = if verb == "dist.push" {
                Some(pushforward(&phi, &mu)?)
            } else {
                match doc.get("mode").and_then(Value::as_str).unwrap_or("sharp") {
                    "sharp" => Some(pullback_sharp(&phi, &mu)?),
                    "preimage" => pullback_preimage(&phi, &mu)?,
                    other => return Err(Error::SchemaViolation(format!("mode: unknown mode {other:?}"))),
                }
            };
            let prec = out.as_ref().map(|d| d.prec());
            Ok(Reply::ok(json!({ "dist": out.as_ref().map(codec::dist_json) }), prec))
        }
        "dist.conv" => {
            let r = ring()?;
            let a = dec.distribution(get(doc, "a")?, &r, "a")?;
            let b = dec.distribution(get(doc, "b")?, &r, "b")?;
            let c = convolve(&a, &b)?;
            Ok(Reply::ok(json!({ "dist": codec::dist_json(&c) }), Some(c.prec())))
        }
        "measure.reduce" => {
            let r = ring()?;
            let mu = dec.measure(get(doc, "measure")?, &r, "measure")?;
            let d = mu.level_reduce(level(doc)?)?;
            Ok(Reply::ok(json!({ "dist": codec::dist_json(&d) }), Some(d.prec())))
        }
        "measure.push" | "measure.pull" => {
            let r = ring()?;
            let phi = dec.morphism(get(doc, "morphism")?, "morphism")?;
            let mu = dec.measure(get(doc, "measure")?, &r, "measure")?;
            let out = if verb == "measure.push" { pro_pushforward(&phi, &mu)? } else { pro_pullback(&phi, &mu)? };
            Ok(Reply::ok(json!({ "measure": codec::measure_json(&out) }), Some(out.prec())))
        }
        "measure.chi" => {
            let r = ring()?;
            let mu = dec.measure(get(doc, "measure")?, &r, "measure")?;
            let chi = dec.character(get(doc, "character")?, mu.delta(), &r, "character")?;
            let f = mu.chi_quotient(&chi)?;
            Ok(Reply::ok(json!({ "ring": codec::ring_json(f.ring()), "series": codec::series_json(&f) }), Some(f.prec())))
        }
        "measure.twist" => {
            let r = ring()?;
            let mu = dec.measure(get(doc, "measure")?, &r, "measure")?;
            let chi = dec.character(get(doc, "character")?, mu.delta(), &r, "character")?;
            let zeta = dec.root(get(doc, "root")?, chi.ring(), "root")?;
            let v = mu.twist_eval(&chi, &zeta)?;
            Ok(Reply::ok(json!({ "ring": codec::ring_json(v.ring()), "value": codec::elem_json(&v) }), Some(v.prec())))
        }
        "measure.pseudo-mul" => {
            let r = ring()?;
            let nu = dec.pseudo(get(doc, "pseudo")?, &r, "pseudo")?;
            let alpha = dec.measure(get(doc, "alpha")?, &r, "alpha")?;
            let out = pseudo_multiply(&nu, &alpha)?;
            Ok(Reply::ok(json!({ "measure": codec::measure_json(&out) }), Some(out.prec())))
        }
        "module.char" => {
            let r = ring()?;
            let g = char_ideal(&dec.presentation(get(doc, "presentation")?, &r, "presentation")?)?;
            Ok(Reply::ok(codec::char_gen_json(&g), Some(g.certified_precision())))
        }
        "module.chi" => {
            let r = ring()?;
            let pres = dec.presentation(get(doc, "presentation")?, &r, "presentation")?;
            let chi = dec.character(get(doc, "character")?, pres.delta(), &r, "character")?;
            let part = chi_decompose(&pres, &chi)?;
            let g = char_ideal(&part)?;
            Ok(Reply::ok(
                json!({
                    "char": codec::char_gen_json(&g),
                    "presentation": codec::presentation_json(&part),
                    "ring": codec::ring_json(part.ring()),
                }),
                Some(g.certified_precision()),
            ))
        }
        "module.chipart" => {
            let r = ring()?;
            let rep = chipart_verify(&dec.presentation(get(doc, "presentation")?, &r, "presentation")?)?;
            let rhs: Vec<Value> =
                rep.rhs.iter().map(|(b, g)| json!({ "char": codec::char_gen_json(g), "levels": b })).collect();
            let gap = match &rep.gap {
                Ok((a, b)) => json!([a, b]),
                Err(reason) => json!({ "mismatch": reason }),
            };
            let prec = rep.rhs.iter().map(|(_, g)| g.certified_precision()).chain([rep.lhs.certified_precision()]).min();
            Ok(Reply::ok(json!({ "gap": gap, "lhs": codec::char_gen_json(&rep.lhs), "rhs": rhs }), prec))
        }
        "module.finiteness" => {
            let r = ring()?;
            let gen = match (doc.get("generator"), doc.get("presentation")) {
                (Some(g), None) => CharIdealGen::from_series_or_vanishing(&dec.series(g, &r, "generator")?)?,
                (None, Some(p)) => char_ideal(&dec.presentation(p, &r, "presentation")?)?,
                _ => return Err(Error::SchemaViolation("generator: give exactly one of generator, presentation".into())),
            };
            let prec = gen.certified_precision();
            Ok(finiteness_reply(finiteness_certificate(&gen, level(doc)?)?, prec))
        }
        "euler.check" => {
            let r = ring()?;
            let (fam, _) = dec.scenario(get(doc, "scenario")?, &r, "scenario")?;
            let reports = euler_compatibility_check(&fam)?;
            let edges: Vec<Value> = reports
                .iter()
                .map(|e| {
                    let d = e.discrepancy.as_ref().map(|(g, k)| json!({ "degree": k, "delta": g }));
                    json!({ "discrepancy": d, "lower": e.lower, "upper": e.upper })
                })
                .collect();
            let ok = reports.iter().all(|e| e.discrepancy.is_none());
            let status = if ok { Status::Ok } else { Status::Error };
            Ok(Reply { payload: json!({ "compatible": ok, "edges": edges }), status, certified_precision: None })
        }
        "euler.derive" => {
            let r = ring()?;
            let (fam, _) = dec.scenario(get(doc, "scenario")?, &r, "scenario")?;
            let top = get_str(doc, "top")?;
            let master = dec.measure(get(doc, "master")?, &r, "master")?;
            let out = family_derive(&fam.poset, top, &master)?;
            let prec = out.measures.values().map(|m| m.prec()).min();
            Ok(Reply::ok(codec::family_json(&out), prec))
        }
        "euler.psi" => {
            let r = ring()?;
            let (fam, psi) = dec.scenario(get(doc, "scenario")?, &r, "scenario")?;
            let mut out = Vec::new();
            for sym in &psi {
                let entry = match psi_image(sym, &fam) {
                    Ok(img) => {
                        let j = if fam.poset.node(&sym.node)?.is_trivial() {
                            None
                        } else {
                            j_membership(&fam, &sym.node, &img)?
                        };
                        let j = j.map(|(i, c)| json!({ "cofactor": codec::series_json(&c), "generator": i }));
                        json!({ "ideal": sym.ideal, "image": codec::measure_json(&img), "j": j, "node": sym.node })
                    }
                    Err(e) => json!({ "failure": error_json(&e), "ideal": sym.ideal, "node": sym.node }),
                };
                out.push(entry);
            }
            Ok(Reply::ok(json!({ "symbols": out }), None))
        }
        "euler.lp" => {
            let r = ring()?;
            let (fam, _) = dec.scenario(get(doc, "scenario")?, &r, "scenario")?;
            let node = get_str(doc, "node")?;
            let delta = fam.poset.node(node)?.delta.clone();
            let chi = dec.character(get(doc, "character")?, &delta, &r, "character")?;
            let zeta = dec.root(get(doc, "root")?, chi.ring(), "root")?;
            let v = lp_eval(&fam, node, &chi, &zeta)?;
            let imprimitive = match doc.get("imprimitive") {
                None => None,
                Some(spec) => {
                    let prime = get_str(spec, "prime").map_err(|e| prefix("imprimitive", e))?;
                    let ramified = spec.get("ramified").and_then(Value::as_bool).unwrap_or(false);
                    let datum = fam.poset.node(node)?.frobenius_of(prime).ok();
                    Some(lp_imprimitive(&v.value, datum, &chi, ramified)?)
                }
            };
            Ok(Reply::ok(
                json!({
                    "clearing_factor": v.clearing_factor.as_ref().map(codec::elem_json),
                    "imprimitive": imprimitive.as_ref().map(codec::elem_json),
                    "ring": codec::ring_json(v.value.ring()),
                    "value": codec::elem_json(&v.value),
                }),
                Some(v.value.prec()),
            ))
        }
        "euler.pipeline" => {
            let r = ring()?;
            let (fam, _) = dec.scenario(get(doc, "scenario")?, &r, "scenario")?;
            let conductor = get_str(doc, "conductor")?;
            let delta = fam.poset.node(conductor)?.delta.clone();
            let chi = dec.character(get(doc, "character")?, &delta, &r, "character")?;
            let verdict =
                finiteness_pipeline(&fam, &chi, conductor, level(doc)?, get_str(doc, "aux")?, get_str(doc, "aux_node")?)?;
            Ok(pipeline_reply(verdict))
        }
        other => Err(Error::InvalidInput(format!("unknown verb {other:?}"))),
    }
}

fn prefix(path: &str, e: Error) -> Error {
    match e {
        Error::SchemaViolation(m) => Error::SchemaViolation(format!("{path}.{m}")),
        other => other,
    }
}

fn pipeline_reply(v: PipelineVerdict) -> Reply {
    match v {
        PipelineVerdict::Certified { values } => {
            let prec = values.iter().map(|x| x.direct.prec().min(x.auxiliary.prec())).min();
            let vals: Vec<Value> = values
                .iter()
                .map(|x| {
                    json!({
                        "agree": x.agree,
                        "auxiliary": codec::elem_json(&x.auxiliary),
                        "direct": codec::elem_json(&x.direct),
                        "k": x.k,
                        "root_order": x.root_order,
                    })
                })
                .collect();
            Reply::ok(json!({ "values": vals, "verdict": "certified" }), prec)
        }
        PipelineVerdict::NotFinite { root_order } => Reply {
            payload: json!({ "root_order": root_order, "verdict": "not-finite" }),
            status: Status::NotFinite,
            certified_precision: None,
        },
        PipelineVerdict::Inconclusive(reason) => Reply {
            payload: json!({ "reason": reason, "verdict": "inconclusive" }),
            status: Status::Inconclusive,
            certified_precision: None,
        },
        PipelineVerdict::NoAuxiliaryPrime(reason) => Reply {
            payload: json!({ "reason": reason, "verdict": "no-auxiliary-prime" }),
            status: Status::Inconclusive,
            certified_precision: None,
        },
    }
}

fn ring_info(r: &Ring) -> Value {
    json!({
        "ramification": r.ramification(),
        "residue_degree": r.residue_degree(),
        "residue_size": r.residue_size(),
        "spec": codec::ring_json(r),
        "wild_level": r.wild_level(),
    })
}

/// Runs one verb on one document; `index` seeds random inputs.
pub fn run_reply(verb: &str, doc: &Value, defaults: &Defaults, index: u64) -> Reply {
    let dec = Decoder::new(defaults, index);
    match dispatch(verb, doc, &dec) {
        Ok(r) => r,
        Err(e) => Reply::failure(&e),
    }
}

fn envelope(verb: &str, input: &Value, defaults: &Defaults, r: &Reply) -> Value {
    let digest = codec::digest(&json!({
        "input": input,
        "precision": defaults.precision,
        "seed": defaults.seed,
        "tdeg": defaults.tdeg,
    }));
    json!({
        "certified_precision": r.certified_precision,
        "input_digest": digest,
        "payload": r.payload,
        "status": r.status.as_str(),
        "verb": verb,
    })
}

/// Runs a verb on a parsed input, fanning a batch out over `workers` threads.
/// Batch results are assembled in input order; the batch status is the most
/// severe item status.
pub fn run_document(verb: &str, input: &Value, defaults: &Defaults, workers: usize) -> (Value, i32) {
    let Some(items) = input.get("batch").and_then(Value::as_array) else {
        let r = run_reply(verb, input, defaults, 0);
        return (envelope(verb, input, defaults, &r), r.status.exit_code());
    };
    let work = || -> Vec<(Value, Status, Option<u32>)> {
        items
            .par_iter()
            .enumerate()
            .map(|(i, doc)| {
                let r = run_reply(verb, doc, defaults, i as u64);
                (envelope(verb, doc, defaults, &r), r.status, r.certified_precision)
            })
            .collect()
    };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    let status = results.iter().map(|r| r.1).max().unwrap_or(Status::Ok);
    let prec = results.iter().filter_map(|r| r.2).min();
    let docs: Vec<Value> = results.into_iter().map(|r| r.0).collect();
    let r = Reply { payload: json!({ "results": docs }), status, certified_precision: prec };
    (envelope(verb, input, defaults, &r), status.exit_code())
}

#[derive(Parser, Debug)]
#[command(name = "iwasawa", version, about = "Iwasawa-theoretic computations over p-adic rings")]
pub struct Cli {
    /// Default p-adic precision (digits of π).
    #[arg(long, global = true, env = "IWASAWA_PRECISION", default_value_t = 32)]
    pub precision: u32,
    /// Default T-adic truncation length.
    #[arg(long, global = true, env = "IWASAWA_TDEG", default_value_t = 64)]
    pub tdeg: usize,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for `{"random": ...}` inputs.
    #[arg(long, global = true, env = "IWASAWA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for batch documents.
    #[arg(long, global = true, env = "IWASAWA_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Input document; `-` or absent reads stdin.
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a coefficient ring.
    Ring(Input),
    /// Power series over the ring.
    #[command(subcommand)]
    Series(SeriesVerb),
    /// Distributions on finite groups.
    #[command(subcommand)]
    Dist(DistVerb),
    /// Measures on Δ × Z_p.
    #[command(subcommand)]
    Measure(MeasureVerb),
    /// Presented Λ[Δ]-modules.
    #[command(subcommand)]
    Module(ModuleVerb),
    /// Families of measures over moduli.
    #[command(subcommand)]
    Euler(EulerVerb),
}

#[derive(Subcommand, Debug)]
pub enum SeriesVerb {
    Prep(Input),
    Eval(Input),
    Order(Input),
    Coprime(Input),
}

#[derive(Subcommand, Debug)]
pub enum DistVerb {
    Push(Input),
    Pull(Input),
    Conv(Input),
}

#[derive(Subcommand, Debug)]
pub enum MeasureVerb {
    Reduce(Input),
    Push(Input),
    Pull(Input),
    Chi(Input),
    Twist(Input),
    PseudoMul(Input),
}

#[derive(Subcommand, Debug)]
pub enum ModuleVerb {
    Char(Input),
    Chi(Input),
    Chipart(Input),
    Finiteness(Input),
}

#[derive(Subcommand, Debug)]
pub enum EulerVerb {
    Check(Input),
    Derive(Input),
    Psi(Input),
    Lp(Input),
    Pipeline(Input),
}

impl Command {
    fn split(&self) -> (&'static str, &Input) {
        use Command::*;
        match self {
            Ring(i) => ("ring", i),
            Series(v) => match v {
                SeriesVerb::Prep(i) => ("series.prep", i),
                SeriesVerb::Eval(i) => ("series.eval", i),
                SeriesVerb::Order(i) => ("series.order", i),
                SeriesVerb::Coprime(i) => ("series.coprime", i),
            },
            Dist(v) => match v {
                DistVerb::Push(i) => ("dist.push", i),
                DistVerb::Pull(i) => ("dist.pull", i),
                DistVerb::Conv(i) => ("dist.conv", i),
            },
            Measure(v) => match v {
                MeasureVerb::Reduce(i) => ("measure.reduce", i),
                MeasureVerb::Push(i) => ("measure.push", i),
                MeasureVerb::Pull(i) => ("measure.pull", i),
                MeasureVerb::Chi(i) => ("measure.chi", i),
                MeasureVerb::Twist(i) => ("measure.twist", i),
                MeasureVerb::PseudoMul(i) => ("measure.pseudo-mul", i),
            },
            Module(v) => match v {
                ModuleVerb::Char(i) => ("module.char", i),
                ModuleVerb::Chi(i) => ("module.chi", i),
                ModuleVerb::Chipart(i) => ("module.chipart", i),
                ModuleVerb::Finiteness(i) => ("module.finiteness", i),
            },
            Euler(v) => match v {
                EulerVerb::Check(i) => ("euler.check", i),
                EulerVerb::Derive(i) => ("euler.derive", i),
                EulerVerb::Psi(i) => ("euler.psi", i),
                EulerVerb::Lp(i) => ("euler.lp", i),
                EulerVerb::Pipeline(i) => ("euler.pipeline", i),
            },
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Renders a result document: pretty JSON with sorted keys and a final newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("value serializes");
    s.push('\n');
    s
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.precision == 0 || cli.tdeg == 0 || cli.workers == 0 {
        eprintln!("error: --precision, --tdeg and --workers must be positive");
        return 1;
    }
    let defaults = Defaults { precision: cli.precision, tdeg: cli.tdeg, seed: cli.seed };
    let (verb, input) = cli.command.split();
    let (doc, code) = match read_input(input.input.as_ref()) {
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return 1;
        }
        Ok(text) => match serde_json::from_str::<Value>(&text) {
            Ok(v) => run_document(verb, &v, &defaults, cli.workers),
            Err(e) => {
                let r = Reply {
                    payload: json!({ "error": "SchemaViolation", "message": format!("input: {e}") }),
                    status: Status::Error,
                    certified_precision: None,
                };
                (envelope(verb, &Value::Null, &defaults, &r), 1)
            }
        },
    };
    let text = render(&doc);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    code
}
