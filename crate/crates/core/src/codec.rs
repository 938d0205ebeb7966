//! Canonical JSON documents. Decoding reports the offending field path in a
//! `SchemaViolation`; encoding is canonical (sorted keys, digit lists without
//! trailing zeros), so decode ∘ encode is the identity on canonical input.

use std::cell::RefCell;
use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::euler::{MeasureFamily, ModuliPoset, ModulusNode, PosetEdge, PsiSymbol};
use crate::groups::{ring_for_order, Character, FiniteAbelianGroup, GroupMorphism};
use crate::iwmod::{CharIdealGen, ModulePresentation};
use crate::measure::{GammaContext, GroupElement, ProMeasure, PseudoMeasure};
use crate::padic::{Elem, Ring, RingSpec, ZpInt};
use crate::series::{PowerSeries, WeierstrassData};

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::SchemaViolation(format!("{path}: {msg}"))
}

fn field<'a>(v: &'a Value, name: &str, path: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| bad(&format!("{path}.{name}"), "missing"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(path, "expected a nonnegative integer"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(path, "expected an integer"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn u64_list(v: &Value, path: &str) -> Result<Vec<u64>> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| as_u64(x, &format!("{path}[{i}]"))).collect()
}

/// Element of Δ written as a map key: coordinates joined by commas.
pub fn element_key(g: &[u64]) -> String {
    g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(k: &str, path: &str) -> Result<Vec<u64>> {
    if k.is_empty() {
        return Ok(Vec::new());
    }
    k.split(',').map(|s| s.trim().parse::<u64>().map_err(|_| bad(path, format!("bad element key {k:?}")))).collect()
}

/// Defaults applied where a document leaves a field out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defaults {
    pub precision: u32,
    pub tdeg: usize,
    pub seed: u64,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults { precision: 32, tdeg: 64, seed: 0 }
    }
}

/// Decoder for one document. Random series draw from a generator seeded by
/// the configured seed and the document's batch index.
pub struct Decoder {
    pub defaults: Defaults,
    rng: RefCell<ChaCha8Rng>,
}

impl Decoder {
    pub fn new(defaults: &Defaults, index: u64) -> Decoder {
        let seed = defaults.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index;
        Decoder { defaults: defaults.clone(), rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)) }
    }

    pub fn ring(&self, v: &Value, path: &str) -> Result<Ring> {
        let p = as_u64(field(v, "p", path)?, &format!("{path}.p"))?;
        let prec = match v.get("prec") {
            Some(x) => as_u64(x, &format!("{path}.prec"))? as u32,
            None => self.defaults.precision,
        };
        let unram = match v.get("unram") {
            Some(x) => as_array(x, &format!("{path}.unram"))?
                .iter()
                .enumerate()
                .map(|(i, c)| as_i64(c, &format!("{path}.unram[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            None => vec![0, 1],
        };
        let eisenstein = match v.get("eisenstein") {
            Some(x) => as_array(x, &format!("{path}.eisenstein"))?
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let q = format!("{path}.eisenstein[{i}]");
                    as_array(c, &q)?.iter().enumerate().map(|(j, d)| as_i64(d, &format!("{q}[{j}]"))).collect()
                })
                .collect::<Result<Vec<Vec<i64>>>>()?,
            None => vec![vec![-(p as i64)], vec![1]],
        };
        Ring::new(RingSpec { p, unram, eisenstein, prec }).map_err(|e| match e {
            Error::SchemaViolation(_) => e,
            other => bad(path, other),
        })
    }

    pub fn elem(&self, v: &Value, ring: &Ring, prec: u32, path: &str) -> Result<Elem> {
        if let Some(n) = v.as_i64() {
            return Ok(ring.int(n, prec));
        }
        if v.is_object() {
            let prec = match v.get("prec") {
                Some(x) => as_u64(x, &format!("{path}.prec"))? as u32,
                None => prec,
            };
            let coords = as_array(field(v, "coords", path)?, &format!("{path}.coords"))?
                .iter()
                .enumerate()
                .map(|(i, c)| u64_list(c, &format!("{path}.coords[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            return Elem::from_digits(ring, &coords, prec).map_err(|e| match e {
                Error::SchemaViolation(m) => bad(path, m),
                other => bad(path, other),
            });
        }
        Err(bad(path, "expected an integer or {coords, prec}"))
    }

    fn random_elem(&self, ring: &Ring, prec: u32) -> Result<Elem> {
        let p = ring.p();
        let n = ring.ramification() * ring.residue_degree();
        let mut rng = self.rng.borrow_mut();
        let digits: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let k = ring.coord_digits(i / ring.residue_degree(), prec);
                let mut d: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
                while d.last() == Some(&0) {
                    d.pop();
                }
                d
            })
            .collect();
        Elem::from_digits(ring, &digits, prec)
    }

    /// `{coeffs, tdeg?, prec?}`, a bare coefficient array, or `{random: {degree}}`.
    pub fn series(&self, v: &Value, ring: &Ring, path: &str) -> Result<PowerSeries> {
        let get_u = |name: &str, dflt: u64| -> Result<u64> {
            match v.get(name) {
                Some(x) => as_u64(x, &format!("{path}.{name}")),
                None => Ok(dflt),
            }
        };
        let (tdeg, prec) = if v.is_object() {
            (get_u("tdeg", self.defaults.tdeg as u64)? as usize, get_u("prec", ring.default_precision() as u64)? as u32)
        } else {
            (self.defaults.tdeg, ring.default_precision())
        };
        if tdeg == 0 {
            return Err(bad(&format!("{path}.tdeg"), "must be positive"));
        }
        if let Some(r) = v.get("random") {
            let deg = as_u64(field(r, "degree", &format!("{path}.random"))?, &format!("{path}.random.degree"))?;
            let c = (0..=deg.min(tdeg as u64 - 1)).map(|_| self.random_elem(ring, prec)).collect::<Result<Vec<_>>>()?;
            return PowerSeries::new(ring, c, tdeg);
        }
        let list = if v.is_array() { v } else { field(v, "coeffs", path)? };
        let c = as_array(list, &format!("{path}.coeffs"))?
            .iter()
            .enumerate()
            .map(|(i, x)| self.elem(x, ring, prec, &format!("{path}.coeffs[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let c = c.into_iter().map(|x| x.cap_precision(prec)).collect();
        PowerSeries::new(ring, c, tdeg).map(|f| f.cap_precision(prec))
    }

    pub fn group(&self, v: &Value, path: &str) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(u64_list(v, path)?).map_err(|e| bad(path, e))
    }

    pub fn group_element(&self, v: &Value, g: &FiniteAbelianGroup, path: &str) -> Result<Vec<u64>> {
        let x = u64_list(v, path)?;
        g.check(&x).map_err(|e| bad(path, e))?;
        Ok(x)
    }

    pub fn morphism(&self, v: &Value, path: &str) -> Result<GroupMorphism> {
        let dom = self.group(field(v, "domain", path)?, &format!("{path}.domain"))?;
        let cod = self.group(field(v, "codomain", path)?, &format!("{path}.codomain"))?;
        self.morphism_between(v, &dom, &cod, path)
    }

    fn morphism_between(
        &self,
        v: &Value,
        dom: &FiniteAbelianGroup,
        cod: &FiniteAbelianGroup,
        path: &str,
    ) -> Result<GroupMorphism> {
        let q = format!("{path}.images");
        let images = as_array(field(v, "images", path)?, &q)?
            .iter()
            .enumerate()
            .map(|(i, x)| u64_list(x, &format!("{q}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        GroupMorphism::new(dom.clone(), cod.clone(), images).map_err(|e| bad(path, e))
    }

    pub fn distribution(&self, v: &Value, ring: &Ring, path: &str) -> Result<Distribution> {
        let g = self.group(field(v, "group", path)?, &format!("{path}.group"))?;
        let q = format!("{path}.values");
        let vals = as_array(field(v, "values", path)?, &q)?
            .iter()
            .enumerate()
            .map(|(i, x)| self.elem(x, ring, ring.default_precision(), &format!("{q}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(&g, vals).map_err(|e| bad(path, e))
    }

    /// `{levels: [b_i]}`: χ(e_i) = ζ_{d_i}^{b_i}, valued in the smallest ring
    /// over `base` holding the needed roots.
    pub fn character(&self, v: &Value, g: &FiniteAbelianGroup, base: &Ring, path: &str) -> Result<Character> {
        let b = u64_list(field(v, "levels", path)?, &format!("{path}.levels"))?;
        if b.len() != g.rank() {
            return Err(bad(&format!("{path}.levels"), format!("expected {} entries", g.rank())));
        }
        let order = b.iter().zip(g.orders()).fold(1u64, |acc, (&bi, &d)| {
            let o = d / num_integer::gcd(bi % d, d);
            num_integer::lcm(acc, o)
        });
        let ring = ring_for_order(base, order)?;
        Character::from_levels(g, &ring, &b)
    }

    pub fn zp_int(&self, v: &Value, path: &str) -> Result<ZpInt> {
        serde_json::from_value(v.clone()).map_err(|_| bad(path, "expected an integer, {num, den} or {digits}"))
    }

    pub fn group_elem_full(&self, v: &Value, g: &FiniteAbelianGroup, path: &str) -> Result<GroupElement> {
        let delta = self.group_element(field(v, "delta", path)?, g, &format!("{path}.delta"))?;
        let gamma = self.zp_int(field(v, "gamma", path)?, &format!("{path}.gamma"))?;
        Ok(GroupElement { delta, gamma })
    }

    /// Map from element keys to series; absent elements are zero.
    fn series_map(&self, v: &Value, g: &FiniteAbelianGroup, ring: &Ring, path: &str) -> Result<Vec<PowerSeries>> {
        let obj = v.as_object().ok_or_else(|| bad(path, "expected a map from elements to series"))?;
        let mut slots: Vec<Option<PowerSeries>> = vec![None; g.order() as usize];
        for (k, s) in obj {
            let q = format!("{path}.{k:?}");
            let x = parse_key(k, &q)?;
            let i = g.index(&x).map_err(|e| bad(&q, e))?;
            slots[i] = Some(self.series(s, ring, &q)?);
        }
        let (m, prec) = slots
            .iter()
            .flatten()
            .next()
            .map(|f| (f.len(), f.prec()))
            .unwrap_or((self.defaults.tdeg, ring.default_precision()));
        Ok(slots.into_iter().map(|s| s.unwrap_or_else(|| PowerSeries::zero(ring, m, prec))).collect())
    }

    pub fn measure(&self, v: &Value, ring: &Ring, path: &str) -> Result<ProMeasure> {
        let g = self.group(field(v, "delta", path)?, &format!("{path}.delta"))?;
        let gamma = match v.get("gamma") {
            Some(x) => GammaContext { label: as_str(field(x, "label", path)?, &format!("{path}.gamma.label"))?.into() },
            None => GammaContext::default(),
        };
        let series = self.series_map(field(v, "series", path)?, &g, ring, &format!("{path}.series"))?;
        ProMeasure::new(&g, &gamma, series).map_err(|e| bad(path, e))
    }

    pub fn pseudo(&self, v: &Value, ring: &Ring, path: &str) -> Result<PseudoMeasure> {
        let num = self.measure(field(v, "num", path)?, ring, &format!("{path}.num"))?;
        let den = self.series(field(v, "den", path)?, ring, &format!("{path}.den"))?;
        PseudoMeasure::new(num, den)
    }

    /// A group-ring element: a series (placed at the identity) or an element map.
    pub fn entry(&self, v: &Value, g: &FiniteAbelianGroup, ring: &Ring, path: &str) -> Result<ProMeasure> {
        let is_series = v.is_array() || v.get("coeffs").is_some() || v.get("random").is_some();
        if is_series {
            return Ok(ProMeasure::scalar(g, &self.series(v, ring, path)?));
        }
        ProMeasure::new(g, &GammaContext::default(), self.series_map(v, g, ring, path)?).map_err(|e| bad(path, e))
    }

    pub fn presentation(&self, v: &Value, ring: &Ring, path: &str) -> Result<ModulePresentation> {
        let g = match v.get("delta") {
            Some(x) => self.group(x, &format!("{path}.delta"))?,
            None => FiniteAbelianGroup::trivial(),
        };
        let q = format!("{path}.rows");
        let rows = as_array(field(v, "rows", path)?, &q)?
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let qi = format!("{q}[{i}]");
                as_array(r, &qi)?
                    .iter()
                    .enumerate()
                    .map(|(j, e)| self.entry(e, &g, ring, &format!("{qi}[{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ModulePresentation::new(&g, rows).map_err(|e| bad(path, e))
    }

    /// `{order: m, power: k}` → ζ_m^k in the smallest ring over `base` containing it.
    pub fn root(&self, v: &Value, base: &Ring, path: &str) -> Result<Elem> {
        let m = as_u64(field(v, "order", path)?, &format!("{path}.order"))?;
        let k = match v.get("power") {
            Some(x) => as_u64(x, &format!("{path}.power"))?,
            None => 1,
        };
        let ring = ring_for_order(base, m)?;
        Ok(ring.root_of_unity(m, ring.default_precision())?.pow(k))
    }

    pub fn scenario(&self, v: &Value, ring: &Ring, path: &str) -> Result<(MeasureFamily, Vec<PsiSymbol>)> {
        let qn = format!("{path}.nodes");
        let mut nodes = Vec::new();
        for (i, n) in as_array(field(v, "nodes", path)?, &qn)?.iter().enumerate() {
            let q = format!("{qn}[{i}]");
            let label = as_str(field(n, "label", &q)?, &format!("{q}.label"))?;
            let delta = self.group(field(n, "delta", &q)?, &format!("{q}.delta"))?;
            let primes = match n.get("primes") {
                Some(x) => as_array(x, &format!("{q}.primes"))?
                    .iter()
                    .enumerate()
                    .map(|(j, s)| as_str(s, &format!("{q}.primes[{j}]")).map(String::from))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let mut node = ModulusNode::new(label, &delta, &[]);
            node.primes = primes;
            if let Some(fr) = n.get("frobenius") {
                let obj = fr.as_object().ok_or_else(|| bad(&format!("{q}.frobenius"), "expected a map"))?;
                for (l, g) in obj {
                    let el = self.group_elem_full(g, &delta, &format!("{q}.frobenius.{l}"))?;
                    node.frobenius.insert(l.clone(), el);
                }
            }
            if let Some(w) = n.get("w") {
                node.w = as_u64(w, &format!("{q}.w"))?;
            }
            if let Some(js) = n.get("j_generators") {
                let qj = format!("{q}.j_generators");
                for (j, e) in as_array(js, &qj)?.iter().enumerate() {
                    node.j_generators.push(self.entry(e, &delta, ring, &format!("{qj}[{j}]"))?);
                }
            }
            nodes.push(node);
        }
        let find = |label: &str, q: &str| -> Result<FiniteAbelianGroup> {
            nodes.iter().find(|n| n.label == label).map(|n| n.delta.clone()).ok_or_else(|| bad(q, format!("unknown node {label}")))
        };
        let qe = format!("{path}.edges");
        let mut edges = Vec::new();
        if let Some(es) = v.get("edges") {
            for (i, e) in as_array(es, &qe)?.iter().enumerate() {
                let q = format!("{qe}[{i}]");
                let upper = as_str(field(e, "upper", &q)?, &format!("{q}.upper"))?;
                let lower = as_str(field(e, "lower", &q)?, &format!("{q}.lower"))?;
                let (du, dl) = (find(upper, &q)?, find(lower, &q)?);
                let morphism = self.morphism_between(e, &du, &dl, &q)?;
                edges.push(PosetEdge { upper: upper.into(), lower: lower.into(), morphism });
            }
        }
        let poset = ModuliPoset::new(nodes, edges).map_err(|e| bad(path, e))?;
        let mut measures = BTreeMap::new();
        if let Some(ms) = v.get("measures") {
            let obj = ms.as_object().ok_or_else(|| bad(&format!("{path}.measures"), "expected a map"))?;
            for (label, m) in obj {
                let q = format!("{path}.measures.{label}");
                poset.node(label).map_err(|e| bad(&q, e))?;
                measures.insert(label.clone(), self.measure(m, ring, &q)?);
            }
        }
        let trivial = match v.get("trivial") {
            Some(Value::Null) | None => None,
            Some(t) => Some(self.pseudo(t, ring, &format!("{path}.trivial"))?),
        };
        let mut psi = Vec::new();
        if let Some(ps) = v.get("psi") {
            let qp = format!("{path}.psi");
            for (i, s) in as_array(ps, &qp)?.iter().enumerate() {
                let q = format!("{qp}[{i}]");
                let node = as_str(field(s, "node", &q)?, &format!("{q}.node"))?;
                let delta = poset.node(node).map_err(|e| bad(&q, e))?.delta.clone();
                psi.push(PsiSymbol {
                    node: node.into(),
                    ideal: as_str(field(s, "ideal", &q)?, &format!("{q}.ideal"))?.into(),
                    norm: as_u64(field(s, "norm", &q)?, &format!("{q}.norm"))?,
                    sigma: self.group_elem_full(field(s, "sigma", &q)?, &delta, &format!("{q}.sigma"))?,
                });
            }
        }
        Ok((MeasureFamily { poset, measures, trivial }, psi))
    }
}

pub fn ring_json(r: &Ring) -> Value {
    serde_json::to_value(r.spec()).expect("ring spec serializes")
}

pub fn elem_json(x: &Elem) -> Value {
    json!({ "coords": x.digits(), "prec": x.prec() })
}

pub fn series_json(f: &PowerSeries) -> Value {
    let c: Vec<Value> = f.as_poly().iter().map(elem_json).collect();
    json!({ "coeffs": c, "prec": f.prec(), "tdeg": f.len() })
}

pub fn dist_json(d: &Distribution) -> Value {
    let v: Vec<Value> = d.values().iter().map(elem_json).collect();
    json!({ "group": d.group().orders(), "values": v })
}

fn series_map_json(g: &FiniteAbelianGroup, series: &[PowerSeries]) -> Value {
    let mut m = Map::new();
    for (i, f) in series.iter().enumerate() {
        m.insert(element_key(&g.element(i)), series_json(f));
    }
    Value::Object(m)
}

pub fn measure_json(mu: &ProMeasure) -> Value {
    json!({
        "delta": mu.delta().orders(),
        "gamma": { "label": mu.gamma().label },
        "series": series_map_json(mu.delta(), mu.series()),
    })
}

pub fn pseudo_json(nu: &PseudoMeasure) -> Value {
    json!({ "den": series_json(nu.den()), "num": measure_json(nu.num()) })
}

pub fn presentation_json(p: &ModulePresentation) -> Value {
    let rows: Vec<Vec<Value>> =
        p.rows().iter().map(|r| r.iter().map(|e| series_map_json(p.delta(), e.series())).collect()).collect();
    json!({ "delta": p.delta().orders(), "rows": rows })
}

pub fn weierstrass_json(w: &WeierstrassData) -> Value {
    let (a, b) = w.mu();
    json!({
        "certified_precision": w.certified_precision,
        "lambda": w.lambda,
        "mu": [a, b],
        "mu_digits": w.mu_digits,
        "poly": w.poly.iter().map(elem_json).collect::<Vec<_>>(),
        "unit": series_json(&w.unit),
    })
}

pub fn char_gen_json(g: &CharIdealGen) -> Value {
    let (a, b) = g.mu();
    json!({
        "certified_precision": g.certified_precision(),
        "lambda": g.lambda(),
        "mu": [a, b],
        "mu_digits": g.mu_digits(),
        "poly": g.poly().iter().map(elem_json).collect::<Vec<_>>(),
        "ring": ring_json(g.ring()),
        "uniformizer_ambiguity": g.has_uniformizer_ambiguity(),
        "vanishing": g.is_vanishing(),
    })
}

pub fn family_json(fam: &MeasureFamily) -> Value {
    let mut m = Map::new();
    for (k, mu) in &fam.measures {
        m.insert(k.clone(), measure_json(mu));
    }
    json!({
        "measures": Value::Object(m),
        "trivial": fam.trivial.as_ref().map(pseudo_json),
    })
}

fn group_elem_json(g: &GroupElement) -> Value {
    json!({ "delta": g.delta, "gamma": serde_json::to_value(&g.gamma).expect("ZpInt serializes") })
}

/// Inverse of [`Decoder::scenario`].
pub fn scenario_json(fam: &MeasureFamily, psi: &[PsiSymbol]) -> Value {
    let nodes: Vec<Value> = fam
        .poset
        .nodes
        .iter()
        .map(|n| {
            let frob: Map<String, Value> = n.frobenius.iter().map(|(k, g)| (k.clone(), group_elem_json(g))).collect();
            let js: Vec<Value> = n.j_generators.iter().map(|j| series_map_json(&n.delta, j.series())).collect();
            json!({
                "delta": n.delta.orders(),
                "frobenius": frob,
                "j_generators": js,
                "label": n.label,
                "primes": n.primes,
                "w": n.w,
            })
        })
        .collect();
    let edges: Vec<Value> = fam
        .poset
        .edges
        .iter()
        .map(|e| json!({ "images": e.morphism.images(), "lower": e.lower, "upper": e.upper }))
        .collect();
    let psi: Vec<Value> = psi
        .iter()
        .map(|s| json!({ "ideal": s.ideal, "node": s.node, "norm": s.norm, "sigma": group_elem_json(&s.sigma) }))
        .collect();
    let mut doc = family_json(fam);
    doc["edges"] = Value::Array(edges);
    doc["nodes"] = Value::Array(nodes);
    doc["psi"] = Value::Array(psi);
    doc
}

/// SHA-256 of the compact serialization (sorted keys) of a document.
pub fn digest(v: &Value) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(serde_json::to_vec(v).expect("value serializes")))
}
