//! Characteristic ideals of finitely presented torsion Λ- and Λ[Δ]-modules.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groups::{ring_for_order, Character, FiniteAbelianGroup};
use crate::measure::{GammaContext, ProMeasure};
use crate::padic::{cyclotomic_shifted, Elem, Ring};
use crate::series::{poly, quotient_order, PowerSeries, QuotientOrder};

/// Largest number of maximal minors examined for a non-square presentation.
const MAX_MINORS: usize = 4096;

/// M = (free module of rank `cols`)/(row space), entries in O[Δ][[T]].
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation {
    delta: FiniteAbelianGroup,
    rows: Vec<Vec<ProMeasure>>,
}

impl ModulePresentation {
    pub fn new(delta: &FiniteAbelianGroup, rows: Vec<Vec<ProMeasure>>) -> Result<ModulePresentation> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidInput("empty presentation".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged presentation matrix".into()));
        }
        let first = &rows[0][0];
        for e in rows.iter().flatten() {
            if e.delta() != delta {
                return Err(Error::DomainMismatch("entry over a different group".into()));
            }
            if e.ring() != first.ring() {
                return Err(Error::SpecMismatch);
            }
            if e.len() != first.len() {
                return Err(Error::InvalidInput("entry truncations differ".into()));
            }
        }
        Ok(ModulePresentation { delta: delta.clone(), rows })
    }

    /// A presentation over Λ = O[[T]].
    pub fn over_lambda(rows: Vec<Vec<PowerSeries>>) -> Result<ModulePresentation> {
        let triv = FiniteAbelianGroup::trivial();
        let rows = rows.into_iter().map(|r| r.iter().map(|f| ProMeasure::scalar(&triv, f)).collect()).collect();
        ModulePresentation::new(&triv, rows)
    }

    /// Λ/(f).
    pub fn cyclic(f: &PowerSeries) -> ModulePresentation {
        ModulePresentation::over_lambda(vec![vec![f.clone()]]).expect("1x1 presentation")
    }

    /// Block-diagonal sum of two presentations over the same group.
    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        let zero = ProMeasure::zero(&self.delta, self.ring(), self.tdeg(), self.ring().default_precision());
        let (c1, c2) = (self.cols(), other.cols());
        let mut rows = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(zero.clone(), c2));
            rows.push(row);
        }
        for r in &other.rows {
            let mut row = vec![zero.clone(); c1];
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        ModulePresentation::new(&self.delta, rows)
    }

    pub fn delta(&self) -> &FiniteAbelianGroup {
        &self.delta
    }

    pub fn ring(&self) -> &Ring {
        self.rows[0][0].ring()
    }

    pub fn tdeg(&self) -> usize {
        self.rows[0][0].len()
    }

    pub fn rows(&self) -> &[Vec<ProMeasure>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols()
    }

    /// The same module as a Λ-module: each entry a ∈ O[Δ][[T]] becomes the
    /// |Δ|×|Δ| block of multiplication by a, rows indexed by (relation, ε).
    pub fn over_lambda_matrix(&self) -> Vec<Vec<PowerSeries>> {
        let g = &self.delta;
        let elems = g.elements();
        let k = elems.len();
        let mut out = vec![Vec::with_capacity(self.cols() * k); self.nrows() * k];
        for (i, row) in self.rows.iter().enumerate() {
            for (ei, eps) in elems.iter().enumerate() {
                let line = &mut out[i * k + ei];
                for a in row {
                    for d in &elems {
                        let idx = g.index(&g.sub(d, eps)).expect("element of Δ");
                        line.push(a.series()[idx].clone());
                    }
                }
            }
        }
        out
    }
}

/// A generator π^μ·P of a characteristic ideal, up to units.
#[derive(Clone, Debug, PartialEq)]
pub struct CharIdealGen {
    ring: Ring,
    mu_digits: u32,
    poly: Vec<Elem>,
    certified_precision: u32,
    tdeg: usize,
    /// Known only up to a power of the uniformizer.
    uniformizer_ambiguity: bool,
}

impl CharIdealGen {
    pub fn from_series(f: &PowerSeries) -> Result<CharIdealGen> {
        let w = f.weierstrass_prepare()?;
        Ok(CharIdealGen {
            ring: f.ring().clone(),
            mu_digits: w.mu_digits,
            poly: w.poly,
            certified_precision: w.certified_precision,
            tdeg: f.len(),
            uniformizer_ambiguity: false,
        })
    }

    /// Like [`CharIdealGen::from_series`], but a series vanishing at precision
    /// gives a generator known only to lie in π^N.
    pub fn from_series_or_vanishing(f: &PowerSeries) -> Result<CharIdealGen> {
        match CharIdealGen::from_series(f) {
            Err(Error::PrecisionExhausted(_)) if f.is_zero() => Ok(CharIdealGen {
                ring: f.ring().clone(),
                mu_digits: f.prec(),
                poly: Vec::new(),
                certified_precision: 0,
                tdeg: f.len(),
                uniformizer_ambiguity: false,
            }),
            r => r,
        }
    }

    pub fn with_ambiguity(mut self, flag: bool) -> CharIdealGen {
        self.uniformizer_ambiguity = flag;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn mu_digits(&self) -> u32 {
        self.mu_digits
    }

    /// μ normalized by v(p) = 1, as (numerator, denominator).
    pub fn mu(&self) -> (u32, u32) {
        (self.mu_digits, self.ring.ramification() as u32)
    }

    pub fn lambda(&self) -> usize {
        self.poly.len().saturating_sub(1)
    }

    pub fn poly(&self) -> &[Elem] {
        &self.poly
    }

    pub fn certified_precision(&self) -> u32 {
        self.certified_precision
    }

    pub fn tdeg(&self) -> usize {
        self.tdeg
    }

    pub fn has_uniformizer_ambiguity(&self) -> bool {
        self.uniformizer_ambiguity
    }

    /// True when the generator vanished at working precision.
    pub fn is_vanishing(&self) -> bool {
        self.poly.is_empty()
    }

    /// π^μ·P as a series.
    pub fn generator(&self) -> PowerSeries {
        if self.is_vanishing() {
            return PowerSeries::zero(&self.ring, self.tdeg, self.mu_digits);
        }
        let c: Vec<Elem> = self.poly.iter().map(|c| c.mul_pi_pow(self.mu_digits)).collect();
        PowerSeries::new(&self.ring, c, self.tdeg).expect("coefficients in ring")
    }

    /// Same ideal: equal μ and P agreeing at the joint precision.
    pub fn same_ideal(&self, other: &CharIdealGen) -> bool {
        self.ring == other.ring
            && self.mu_digits == other.mu_digits
            && self.poly.len() == other.poly.len()
            && self.poly.iter().zip(&other.poly).all(|(a, b)| a.agrees(b))
    }
}

fn series_det(m: &[Vec<PowerSeries>]) -> PowerSeries {
    // expansion along rows, memoized on the set of used columns
    let n = m.len();
    let ring = m[0][0].ring();
    let len = m[0][0].len();
    let prec = m.iter().flatten().map(|f| f.prec()).min().unwrap();
    let mut table: HashMap<u64, PowerSeries> = HashMap::new();
    table.insert(0, PowerSeries::one(ring, len, prec));
    for row in m.iter().take(n) {
        let mut next: HashMap<u64, PowerSeries> = HashMap::new();
        for (mask, d) in &table {
            for (j, a) in row.iter().enumerate() {
                if mask >> j & 1 == 1 || a.is_zero() {
                    continue;
                }
                let sign_neg = (mask >> (j + 1)).count_ones() % 2 == 1;
                let t = d * a;
                let e = next.entry(mask | 1 << j).or_insert_with(|| PowerSeries::zero(ring, len, prec));
                *e = if sign_neg { &*e - &t } else { &*e + &t };
            }
        }
        table = next;
    }
    table.remove(&((1u64 << n) - 1)).unwrap_or_else(|| PowerSeries::zero(ring, len, prec))
}

/// Determinant of a square matrix of series.
pub fn determinant(m: &[Vec<PowerSeries>]) -> Result<PowerSeries> {
    if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    if m.len() > 20 {
        return Err(Error::InvalidInput("matrix too large".into()));
    }
    Ok(series_det(m))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// gcd of nonzero series, as π^{min μ} times the gcd of distinguished parts.
fn series_gcd(fs: &[PowerSeries]) -> Result<CharIdealGen> {
    let mut acc: Option<CharIdealGen> = None;
    for f in fs.iter().filter(|f| !f.is_zero()) {
        let g = CharIdealGen::from_series(f)?;
        acc = Some(match acc {
            None => g,
            Some(a) => {
                let poly = crate::series::distinguished_gcd(&a.poly, &g.poly)?;
                CharIdealGen {
                    mu_digits: a.mu_digits.min(g.mu_digits),
                    poly,
                    certified_precision: a.certified_precision.min(g.certified_precision),
                    ..a
                }
            }
        });
    }
    acc.ok_or(Error::NonTorsion)
}

/// Char_Λ(M) as the gcd of the maximal minors of the Λ-presentation.
pub fn char_ideal(pres: &ModulePresentation) -> Result<CharIdealGen> {
    let m = pres.over_lambda_matrix();
    let (r, c) = (m.len(), m[0].len());
    if r < c {
        return Err(Error::NonTorsion);
    }
    if r == c {
        let d = determinant(&m)?;
        if d.is_zero() {
            return Err(Error::NonTorsion);
        }
        return CharIdealGen::from_series(&d);
    }
    let rows = combinations(r, c);
    if rows.len() > MAX_MINORS {
        return Err(Error::InvalidInput(format!("{} maximal minors exceed the limit", rows.len())));
    }
    let minors = rows
        .iter()
        .map(|sel| determinant(&sel.iter().map(|&i| m[i].clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    series_gcd(&minors)
}

/// O(χ) ⊗_{O[Δ]} M, presented over Λ_{O(χ)}.
pub fn chi_decompose(pres: &ModulePresentation, chi: &Character) -> Result<ModulePresentation> {
    let rows = pres
        .rows
        .iter()
        .map(|r| r.iter().map(|a| a.chi_quotient(chi)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ModulePresentation::over_lambda(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChipartReport {
    pub lhs: CharIdealGen,
    /// One entry per character, in the group's enumeration order of levels.
    pub rhs: Vec<(Vec<u64>, CharIdealGen)>,
    /// (a, b) with 𝔲^a·Char(M) = 𝔲^b·Π_χ Char(M_χ), or the reason no such pair exists.
    pub gap: std::result::Result<(u32, u32), String>,
}

/// Compares Char(M) with the product of the Char(M_χ) over all characters of Δ.
pub fn chipart_verify(pres: &ModulePresentation) -> Result<ChipartReport> {
    let lhs = char_ideal(pres)?;
    let delta = pres.delta();
    let ring = ring_for_order(pres.ring(), delta.exponent())?;
    let mut rhs = Vec::new();
    for b in delta.elements() {
        let chi = Character::from_levels(delta, &ring, &b)?;
        rhs.push((b, char_ideal(&chi_decompose(pres, &chi)?)?));
    }
    let scale = (ring.ramification() / pres.ring().ramification()) as u32;
    let lhs_mu = lhs.mu_digits * scale;
    let rhs_mu: u32 = rhs.iter().map(|(_, g)| g.mu_digits).sum();
    let prec = rhs.iter().map(|(_, g)| g.certified_precision).chain([lhs.certified_precision * scale]).min().unwrap();
    let mut prod = vec![ring.one(prec)];
    for (_, g) in &rhs {
        prod = poly::mul(&ring, &prod, &g.poly, prec);
    }
    let lp = lhs.poly.iter().map(|c| ring.embed(c)).collect::<Result<Vec<_>>>()?;
    let gap = if lp.len() != prod.len() {
        Err(format!("λ differs: {} against {}", lp.len() - 1, prod.len() - 1))
    } else if let Some(i) = (0..lp.len()).find(|&i| !lp[i].agrees(&prod[i])) {
        Err(format!("distinguished parts differ at degree {i}"))
    } else {
        Ok((rhs_mu.saturating_sub(lhs_mu), lhs_mu.saturating_sub(rhs_mu)))
    };
    Ok(ChipartReport { lhs, rhs, gap })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// Exponents e_0..e_n with #Λ/(gen, ω_k) = q^{e_k}.
    Certified { exponents: Vec<u64> },
    /// P vanishes at the primitive roots of unity of this order.
    NotFinite { root_order: u64 },
    Inconclusive(String),
}

/// Decides whether gen is prime to ω_n by evaluating π^μ·P at ζ−1 for every
/// ζ with ζ^{p^n} = 1, one root per Galois orbit over the coefficient ring.
pub fn finiteness_certificate(gen: &CharIdealGen, n: u32) -> Result<Finiteness> {
    let ring = gen.ring();
    let p = ring.p();
    if p.checked_pow(n).is_none_or(|v| v > gen.tdeg as u64) {
        return Err(Error::TruncationTooSmall { need: p.saturating_pow(n) as usize, have: gen.tdeg });
    }
    if gen.is_vanishing() {
        return Ok(Finiteness::Inconclusive(format!("generator vanishes at precision {}", gen.mu_digits)));
    }
    let ext = ring.with_p_power_roots(n)?;
    let w = ring.wild_level();
    let prec = gen.certified_precision;
    let coeffs = gen.poly.iter().map(|c| ext.embed(&c.cap_precision(prec))).collect::<Result<Vec<_>>>()?;
    let eval = |x: &Elem| {
        let mut acc = ext.zero(x.prec());
        for c in coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    };
    let mut vanishing = None;
    for (j, k) in root_orbits(p, w, n) {
        let z = ext.root_of_unity(p.pow(j), ext.default_precision())?.pow(k);
        let x = &z - &ext.one(z.prec());
        if eval(&x).is_zero() {
            vanishing.get_or_insert(j);
        }
    }
    if let Some(j) = vanishing {
        if let Some(root_order) = cyclotomic_witness(gen, n) {
            return Ok(Finiteness::NotFinite { root_order });
        }
        return Ok(Finiteness::Inconclusive(format!(
            "value at a root of order {} vanishes at precision without a cyclotomic factor",
            p.pow(j)
        )));
    }
    let f = gen.generator();
    let mut exponents = Vec::new();
    for k in 0..=n {
        match quotient_order(&f, k)? {
            QuotientOrder::Finite { exponent } => exponents.push(exponent),
            other => {
                return Ok(Finiteness::Inconclusive(format!(
                    "values are nonzero but the order at level {k} is {other:?}"
                )))
            }
        }
    }
    Ok(Finiteness::Certified { exponents })
}

/// (j, k) such that ζ_{p^j}^k, 0 ≤ j ≤ n, runs over one root of unity per
/// Galois orbit over a ring whose wild level is w.
pub(crate) fn root_orbits(p: u64, w: u32, n: u32) -> Vec<(u32, u64)> {
    let mut out = vec![(0, 1)];
    for j in 1..=n {
        let bound = p.pow(j.min(w));
        out.extend((1..bound.max(2)).filter(|k| k % p != 0).map(|k| (j, k)));
    }
    out
}

/// Smallest p^j, j ≤ n, with Φ_{p^j}(1+T) dividing the distinguished part.
pub(crate) fn cyclotomic_witness(gen: &CharIdealGen, n: u32) -> Option<u64> {
    let ring = gen.ring();
    let p = ring.p();
    let prec = gen.certified_precision;
    (0..=n).find_map(|j| {
        let phi: Vec<Elem> = cyclotomic_shifted(p, j).iter().map(|c| ring.bigint(c, prec)).collect();
        let r = poly::rem_monic(ring, &gen.poly, &phi, prec);
        r.iter().all(|c| c.is_zero()).then(|| p.pow(j))
    })
}

/// The measure with the given coordinates, for presentations written by hand.
pub fn group_ring_entry(delta: &FiniteAbelianGroup, series: Vec<PowerSeries>) -> Result<ProMeasure> {
    ProMeasure::new(delta, &GammaContext::default(), series)
}
