//! Euler-compatible measure families over a poset of moduli.
//!
//! Arithmetic data (Frobenius elements, norms, conductors) enters as labels and
//! declared group elements; nothing here is computed from a number field.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::groups::{Character, FiniteAbelianGroup, GroupMorphism};
use crate::iwmod::{cyclotomic_witness, root_orbits, CharIdealGen};
use crate::measure::{pro_pushforward, pseudo_multiply, GroupElement, ProMeasure, PseudoMeasure};
use crate::padic::{Elem, Ring};
use crate::series::PowerSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct ModulusNode {
    pub label: String,
    /// Torsion part of the Galois group at this modulus.
    pub delta: FiniteAbelianGroup,
    /// Prime labels dividing the modulus; empty for the trivial modulus.
    pub primes: Vec<String>,
    /// Artin elements of primes and ideals prime to the modulus.
    pub frobenius: BTreeMap<String, GroupElement>,
    /// Number of roots of unity, carried as a label.
    pub w: u64,
    pub j_generators: Vec<ProMeasure>,
}

impl ModulusNode {
    pub fn new(label: &str, delta: &FiniteAbelianGroup, primes: &[&str]) -> ModulusNode {
        ModulusNode {
            label: label.into(),
            delta: delta.clone(),
            primes: primes.iter().map(|s| s.to_string()).collect(),
            frobenius: BTreeMap::new(),
            w: 1,
            j_generators: Vec::new(),
        }
    }

    pub fn with_frobenius(mut self, label: &str, g: GroupElement) -> ModulusNode {
        self.frobenius.insert(label.into(), g);
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn frobenius_of(&self, label: &str) -> Result<&GroupElement> {
        self.frobenius
            .get(label)
            .ok_or_else(|| Error::MissingFrobeniusDatum(format!("{label} at node {}", self.label)))
    }
}

/// An edge from a modulus to one dividing it, with the restriction map on Δ.
#[derive(Clone, Debug, PartialEq)]
pub struct PosetEdge {
    pub upper: String,
    pub lower: String,
    pub morphism: GroupMorphism,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ModuliPoset {
    pub nodes: Vec<ModulusNode>,
    pub edges: Vec<PosetEdge>,
}

impl ModuliPoset {
    pub fn new(nodes: Vec<ModulusNode>, edges: Vec<PosetEdge>) -> Result<ModuliPoset> {
        let poset = ModuliPoset { nodes, edges };
        let mut seen = BTreeSet::new();
        for n in &poset.nodes {
            if !seen.insert(n.label.clone()) {
                return Err(Error::InvalidInput(format!("duplicate node {}", n.label)));
            }
            for (l, g) in &n.frobenius {
                n.delta
                    .check(&g.delta)
                    .map_err(|_| Error::InvalidInput(format!("Frobenius {l} at {} is not in Δ", n.label)))?;
            }
        }
        for e in &poset.edges {
            let (u, l) = (poset.node(&e.upper)?, poset.node(&e.lower)?);
            if e.morphism.domain() != &u.delta || e.morphism.codomain() != &l.delta {
                return Err(Error::InvalidMorphism(format!("edge {} -> {}", e.upper, e.lower)));
            }
            if l.primes.iter().any(|p| !u.primes.contains(p)) {
                return Err(Error::InvalidInput(format!("{} does not divide {}", e.lower, e.upper)));
            }
        }
        Ok(poset)
    }

    pub fn node(&self, label: &str) -> Result<&ModulusNode> {
        self.nodes.iter().find(|n| n.label == label).ok_or_else(|| Error::NodeMissing(label.into()))
    }

    pub fn edge(&self, upper: &str, lower: &str) -> Result<&PosetEdge> {
        self.edges
            .iter()
            .find(|e| e.upper == upper && e.lower == lower)
            .ok_or_else(|| Error::NodeMissing(format!("edge {upper} -> {lower}")))
    }

    /// Π (1 − σ_l^{-1}) over primes of the upper node not dividing the lower one,
    /// as an element of O[Δ_lower][[T]].
    pub fn euler_product(&self, edge: &PosetEdge, ring: &Ring, m: usize, prec: u32) -> Result<ProMeasure> {
        let (u, l) = (self.node(&edge.upper)?, self.node(&edge.lower)?);
        let mut acc = ProMeasure::scalar(&l.delta, &PowerSeries::one(ring, m, prec));
        for p in u.primes.iter().filter(|p| !l.primes.contains(p)) {
            let f = ProMeasure::euler_factor(&l.delta, l.frobenius_of(p)?, ring, m, prec)?;
            acc = acc.checked_mul(&f)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureFamily {
    pub poset: ModuliPoset,
    pub measures: BTreeMap<String, ProMeasure>,
    /// Pseudo-measure at the trivial modulus, when the poset has one.
    pub trivial: Option<PseudoMeasure>,
}

impl MeasureFamily {
    pub fn measure(&self, label: &str) -> Result<&ProMeasure> {
        self.measures.get(label).ok_or_else(|| Error::NodeMissing(label.into()))
    }

    pub fn trivial_measure(&self) -> Result<&PseudoMeasure> {
        self.trivial.as_ref().ok_or_else(|| Error::NodeMissing("(1)".into()))
    }

    fn is_trivial(&self, label: &str) -> Result<bool> {
        Ok(self.poset.node(label)?.is_trivial())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReport {
    pub upper: String,
    pub lower: String,
    /// First (Δ-element, T-degree) where the two sides differ.
    pub discrepancy: Option<(Vec<u64>, usize)>,
}

fn truncate_pair(a: ProMeasure, b: ProMeasure) -> Result<(ProMeasure, ProMeasure)> {
    let m = a.len().min(b.len());
    let cut = |x: ProMeasure| {
        let s = x.series().iter().map(|f| f.truncate(m)).collect();
        ProMeasure::new(x.delta(), x.gamma(), s)
    };
    Ok((cut(a)?, cut(b)?))
}

/// Checks π_*μ(upper) = Π(1 − σ_l^{-1})·μ(lower) on every edge; at the trivial
/// node both sides are multiplied by the declared denominator first.
pub fn euler_compatibility_check(fam: &MeasureFamily) -> Result<Vec<EdgeReport>> {
    let mut out = Vec::with_capacity(fam.poset.edges.len());
    for e in &fam.poset.edges {
        let upper = fam.measure(&e.upper)?;
        let pushed = pro_pushforward(&e.morphism, upper)?;
        let euler = fam.poset.euler_product(e, upper.ring(), upper.len(), upper.prec())?;
        let (lhs, rhs) = if fam.is_trivial(&e.lower)? {
            let nu = fam.trivial_measure()?;
            (pushed.mul_series(nu.den())?, euler.checked_mul(nu.num())?)
        } else {
            (pushed, euler.checked_mul(fam.measure(&e.lower)?)?)
        };
        let (lhs, rhs) = truncate_pair(lhs, rhs)?;
        out.push(EdgeReport { upper: e.upper.clone(), lower: e.lower.clone(), discrepancy: lhs.first_discrepancy(&rhs) });
    }
    Ok(out)
}

/// The first failing edge of a report as an `Incompatible` error.
pub fn require_compatible(reports: &[EdgeReport]) -> Result<()> {
    match reports.iter().find(|r| r.discrepancy.is_some()) {
        None => Ok(()),
        Some(r) => {
            let (d, k) = r.discrepancy.clone().unwrap();
            Err(Error::Incompatible {
                edge: format!("{} -> {}", r.upper, r.lower),
                detail: format!("coefficient of T^{k} at Δ-element {d:?}"),
            })
        }
    }
}

/// X with (1 − σ^{-1})·X = Y. With s = σ^{-1}, d = ord(δ) and S = Σ_{k<d} s^k,
/// (1 − s)·S = 1 − (1+T)^{-ad} =: w lies in Λ, so X = S·Y/w.
fn solve_euler(y: &ProMeasure, sigma: &GroupElement) -> Result<ProMeasure> {
    let delta = y.delta();
    let (ring, m, prec) = (y.ring(), y.len(), y.prec());
    let s = ProMeasure::dirac(delta, &sigma.inverse(delta, ring.p()), ring, m, prec)?;
    let one = ProMeasure::scalar(delta, &PowerSeries::one(ring, m, prec));
    let d = delta.element_order(&sigma.delta);
    let mut sum = one.clone();
    let mut pw = one.clone();
    for _ in 1..d {
        pw = pw.checked_mul(&s)?;
        sum = sum.checked_add(&pw)?;
    }
    let w = one.checked_sub(&pw.checked_mul(&s)?)?;
    let w = w.series()[0].clone();
    if w.is_zero() {
        return Err(Error::FactorNotInvertible("Frobenius has trivial Γ-component".into()));
    }
    let sy = sum.checked_mul(y)?;
    let series = sy
        .series()
        .iter()
        .map(|f| f.div_exact(&w))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::FactorNotInvertible(format!("norm division failed: {e}")))?;
    let x = ProMeasure::new(delta, y.gamma(), series)?;
    let euler = ProMeasure::euler_factor(delta, sigma, ring, m, prec)?;
    let (lhs, rhs) = truncate_pair(euler.checked_mul(&x)?, y.clone())?;
    if let Some((d, k)) = lhs.first_discrepancy(&rhs) {
        return Err(Error::FactorNotInvertible(format!("no solution at T^{k}, Δ-element {d:?}")));
    }
    Ok(x)
}

/// Fills in every node below `top` by dividing pushforwards by Euler factors.
/// Each division costs the truncation degree λ = 1.
pub fn family_derive(poset: &ModuliPoset, top: &str, master: &ProMeasure) -> Result<MeasureFamily> {
    if &poset.node(top)?.delta != master.delta() {
        return Err(Error::DomainMismatch(format!("master is not on Δ of {top}")));
    }
    let mut measures = BTreeMap::new();
    let mut trivial = None;
    let mut done = BTreeSet::from([top.to_string()]);
    measures.insert(top.to_string(), master.clone());
    let mut queue = VecDeque::from([top.to_string()]);
    while let Some(label) = queue.pop_front() {
        for e in poset.edges.iter().filter(|e| e.upper == label) {
            if !done.insert(e.lower.clone()) {
                continue;
            }
            let (u, l) = (poset.node(&e.upper)?, poset.node(&e.lower)?);
            let mut x = pro_pushforward(&e.morphism, &measures[&label])?;
            for p in u.primes.iter().filter(|p| !l.primes.contains(p)) {
                x = solve_euler(&x, l.frobenius_of(p)?)?;
            }
            if l.is_trivial() {
                trivial = Some(PseudoMeasure::from_measure(x));
            } else {
                measures.insert(e.lower.clone(), x);
                queue.push_back(e.lower.clone());
            }
        }
    }
    Ok(MeasureFamily { poset: poset.clone(), measures, trivial })
}

/// ψ⟨𝔤, 𝔞⟩ data: the Artin element σ_𝔞 at node 𝔤 and the norm N(𝔞).
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSymbol {
    pub node: String,
    pub ideal: String,
    pub norm: u64,
    pub sigma: GroupElement,
}

impl PsiSymbol {
    /// σ_𝔞 − N(𝔞) in O[Δ][[T]].
    pub fn element(&self, delta: &FiniteAbelianGroup, ring: &Ring, m: usize, prec: u32) -> Result<ProMeasure> {
        if self.norm < 2 {
            return Err(Error::InvalidInput(format!("norm of {} must be at least 2", self.ideal)));
        }
        let s = ProMeasure::dirac(delta, &self.sigma, ring, m, prec)?;
        let n = PowerSeries::constant(&ring.int(self.norm as i64, prec), m);
        s.checked_sub(&ProMeasure::scalar(delta, &n))
    }
}

/// (σ_𝔞 − N(𝔞))·μ(𝔤); at the trivial node via the pseudo-measure.
pub fn psi_image(sym: &PsiSymbol, fam: &MeasureFamily) -> Result<ProMeasure> {
    let node = fam.poset.node(&sym.node)?;
    if node.is_trivial() {
        let nu = fam.trivial_measure()?;
        let n = nu.num();
        let alpha = sym.element(&node.delta, n.ring(), n.len(), n.prec())?;
        return pseudo_multiply(nu, &alpha);
    }
    let mu = fam.measure(&sym.node)?;
    sym.element(&node.delta, mu.ring(), mu.len(), mu.prec())?.checked_mul(mu)
}

/// Finds c ∈ Λ and a J-generator j with x = c·j·μ(𝔤), verified coordinate-wise.
pub fn j_membership(fam: &MeasureFamily, node: &str, x: &ProMeasure) -> Result<Option<(usize, PowerSeries)>> {
    let n = fam.poset.node(node)?;
    let mu = fam.measure(node)?;
    for (i, j) in n.j_generators.iter().enumerate() {
        let b = j.checked_mul(mu)?;
        let pivot = b
            .series()
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .filter_map(|(k, f)| f.weierstrass_prepare().ok().map(|w| ((w.mu_digits, w.lambda), k)))
            .min();
        let Some((_, k)) = pivot else { continue };
        let Ok(c) = x.series()[k].div_exact(&b.series()[k]) else { continue };
        let (lhs, rhs) = truncate_pair(b.mul_series(&c)?, x.clone())?;
        if lhs.first_discrepancy(&rhs).is_none() {
            return Ok(Some((i, c)));
        }
    }
    Ok(None)
}

/// L_{p,𝔥}(ξ) for ξ = χ·ζ^κ; at the trivial node the value of the numerator
/// together with the denominator evaluated at the same point.
#[derive(Clone, Debug, PartialEq)]
pub struct LpValue {
    pub value: Elem,
    pub clearing_factor: Option<Elem>,
}

pub fn lp_eval(fam: &MeasureFamily, node: &str, chi: &Character, zeta: &Elem) -> Result<LpValue> {
    let zinv = zeta.invert()?;
    let chi_inv = chi.inverse();
    if fam.poset.node(node)?.is_trivial() {
        let one = zeta.ring().one(zeta.prec());
        if chi.is_trivial() && zeta.agrees(&one) {
            return Err(Error::TrivialCharacterAtTrivialModulus);
        }
        let nu = fam.trivial_measure()?;
        let value = nu.num().twist_eval(&chi_inv, &zinv)?;
        let den = nu.den().embed(zeta.ring())?;
        let x = &zinv - &one;
        let clearing = if x.is_zero() { den.coeff(0).clone() } else { den.eval_at(&x)? };
        return Ok(LpValue { value, clearing_factor: Some(clearing) });
    }
    let value = fam.measure(node)?.twist_eval(&chi_inv, &zinv)?;
    Ok(LpValue { value, clearing_factor: None })
}

/// Multiplies by 1 − χ(δ_𝔭) when 𝔭 is unramified, otherwise leaves the value.
pub fn lp_imprimitive(value: &Elem, datum: Option<&GroupElement>, chi: &Character, ramified: bool) -> Result<Elem> {
    if ramified {
        return Ok(value.clone());
    }
    let g = datum.ok_or_else(|| Error::MissingFrobeniusDatum("p".into()))?;
    let target = value.ring();
    let c = target.embed(&chi.eval(&g.delta)?)?;
    Ok(value * &(&target.one(c.prec()) - &c))
}

/// Generator of the characteristic ideal attached to χ: chi_quotient of μ at the
/// conductor node, or of T·μ(1) for trivial χ.
pub fn units_char_ideal(fam: &MeasureFamily, chi: &Character, conductor: &str) -> Result<CharIdealGen> {
    let f = units_series(fam, chi, conductor)?;
    let p2 = chi.ring().p() == 2;
    Ok(CharIdealGen::from_series_or_vanishing(&f)?.with_ambiguity(p2))
}

fn units_series(fam: &MeasureFamily, chi: &Character, conductor: &str) -> Result<PowerSeries> {
    let node = fam.poset.node(conductor)?;
    if chi.is_trivial() {
        if !node.is_trivial() {
            return Err(Error::InvalidInput("trivial character needs the trivial node".into()));
        }
        let nu = fam.trivial_measure()?;
        let n = nu.num();
        let t = ProMeasure::scalar(n.delta(), &PowerSeries::t(n.ring(), n.len(), n.prec()));
        return pseudo_multiply(nu, &t)?.chi_quotient(chi);
    }
    fam.measure(conductor)?.chi_quotient(chi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouteValue {
    pub root_order: u64,
    pub k: u64,
    /// E(ζ)·g(ζ−1) from the generator at the conductor.
    pub direct: Elem,
    /// The twisted evaluation at the auxiliary node.
    pub auxiliary: Elem,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineVerdict {
    Certified { values: Vec<RouteValue> },
    NotFinite { root_order: u64 },
    Inconclusive(String),
    NoAuxiliaryPrime(String),
}

/// End-to-end finiteness of the Γ_n-(co)invariants attached to χ, using an
/// auxiliary prime ℓ and the node f_χℓ above the conductor.
pub fn finiteness_pipeline(
    fam: &MeasureFamily,
    chi: &Character,
    conductor: &str,
    n: u32,
    aux: &str,
    aux_node: &str,
) -> Result<PipelineVerdict> {
    let node = fam.poset.node(conductor)?;
    let Ok(sigma) = node.frobenius_of(aux) else {
        return Ok(PipelineVerdict::NoAuxiliaryPrime(format!("no Frobenius datum for {aux}")));
    };
    let ring = chi.ring();
    let p = ring.p();
    if chi.is_trivial() {
        if sigma.gamma.divisible_by_p(p)? {
            return Ok(PipelineVerdict::NoAuxiliaryPrime(format!("{aux} is totally split in the first layer")));
        }
    } else if chi.eval(&sigma.delta)?.agrees(&ring.one(ring.default_precision())) {
        return Ok(PipelineVerdict::NoAuxiliaryPrime(format!("χ is trivial on the Frobenius of {aux}")));
    }
    let g = match units_series(fam, chi, conductor) {
        Err(Error::PrecisionExhausted(s)) => return Ok(PipelineVerdict::Inconclusive(s)),
        r => r?,
    };
    let gen = match CharIdealGen::from_series_or_vanishing(&g) {
        Err(Error::PrecisionExhausted(s)) => return Ok(PipelineVerdict::Inconclusive(s)),
        r => r?,
    };
    if gen.is_vanishing() {
        return Ok(PipelineVerdict::Inconclusive(format!("generator vanishes at precision {}", g.prec())));
    }
    let edge = fam.poset.edge(aux_node, conductor)?;
    let upper = fam.measure(aux_node)?;
    let chi_up = chi.pullback(&edge.morphism)?;
    let ext = ring.with_p_power_roots(n)?;
    let chi_inv_l = ext.embed(&chi.eval(&node.delta.neg(&sigma.delta))?)?;
    let g_ext = g.embed(&ext)?;
    let mut values = Vec::new();
    let mut vanishing = None;
    for (j, k) in root_orbits(p, ring.wild_level(), n) {
        let pj = p.pow(j);
        let zeta = ext.root_of_unity(pj, ext.default_precision())?.pow(k);
        let one = ext.one(zeta.prec());
        let x = &zeta - &one;
        let gv = if x.is_zero() { g_ext.coeff(0).clone() } else { g_ext.eval_at(&x)? };
        if gv.is_zero() {
            vanishing.get_or_insert(j);
        }
        // E(ζ) = 1 − χ(δ_ℓ)^{-1}ζ^{-a}
        let a = sigma.gamma.residue(p, j)?;
        let a = u64::try_from(&a).expect("residue below p^j");
        let zpow = zeta.pow((pj - a % pj) % pj);
        let e = &one - &(&chi_inv_l * &zpow);
        let direct = &e * &gv;
        let mut auxiliary = upper.twist_eval(&chi_up, &zeta)?;
        if chi.is_trivial() {
            auxiliary = &auxiliary * &x;
        }
        let agree = direct.agrees(&auxiliary);
        values.push(RouteValue { root_order: pj, k, direct, auxiliary, agree });
    }
    if let Some(j) = vanishing {
        if let Some(root_order) = cyclotomic_witness(&gen, n) {
            return Ok(PipelineVerdict::NotFinite { root_order });
        }
        return Ok(PipelineVerdict::Inconclusive(format!(
            "value at a root of order {} vanishes at precision",
            p.pow(j)
        )));
    }
    Ok(PipelineVerdict::Certified { values })
}
