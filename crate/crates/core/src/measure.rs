//! Measures on Δ×Γ, stored as elements Σ_δ f_δ(T)·δ of O[Δ][[T]] with T = γ−1.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::groups::{Character, FiniteAbelianGroup, GroupMorphism};
use crate::padic::{Elem, Ring, ZpInt};
use crate::series::PowerSeries;

/// The fixed topological generator γ of Γ, with κ(γ) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaContext {
    pub label: String,
}

impl Default for GammaContext {
    fn default() -> Self {
        GammaContext { label: "gamma".into() }
    }
}

/// An element (δ, γ^a) of Δ×Γ with a ∈ Z_p.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub delta: Vec<u64>,
    pub gamma: ZpInt,
}

impl GroupElement {
    pub fn new(delta: Vec<u64>, gamma: impl Into<ZpInt>) -> GroupElement {
        GroupElement { delta, gamma: gamma.into() }
    }

    pub fn inverse(&self, group: &FiniteAbelianGroup, p: u64) -> GroupElement {
        GroupElement { delta: group.neg(&self.delta), gamma: self.gamma.neg(p) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProMeasure {
    delta: FiniteAbelianGroup,
    gamma: GammaContext,
    series: Vec<PowerSeries>,
}

impl ProMeasure {
    /// One series per element of Δ, in enumeration order. Precision is the
    /// minimum over the coordinates.
    pub fn new(delta: &FiniteAbelianGroup, gamma: &GammaContext, series: Vec<PowerSeries>) -> Result<ProMeasure> {
        if series.len() as u64 != delta.order() {
            return Err(Error::InvalidInput(format!(
                "expected {} series, got {}",
                delta.order(),
                series.len()
            )));
        }
        let first = &series[0];
        if series.iter().any(|f| f.ring() != first.ring()) {
            return Err(Error::SpecMismatch);
        }
        if series.iter().any(|f| f.len() != first.len()) {
            return Err(Error::InvalidInput("series truncations differ".into()));
        }
        let prec = series.iter().map(|f| f.prec()).min().unwrap();
        let series = series.into_iter().map(|f| f.cap_precision(prec)).collect();
        Ok(ProMeasure { delta: delta.clone(), gamma: gamma.clone(), series })
    }

    pub fn zero(delta: &FiniteAbelianGroup, ring: &Ring, m: usize, prec: u32) -> ProMeasure {
        let series = vec![PowerSeries::zero(ring, m, prec); delta.order() as usize];
        ProMeasure { delta: delta.clone(), gamma: GammaContext::default(), series }
    }

    /// f placed at the identity of Δ.
    pub fn scalar(delta: &FiniteAbelianGroup, f: &PowerSeries) -> ProMeasure {
        let mut out = ProMeasure::zero(delta, f.ring(), f.len(), f.prec());
        out.series[0] = f.clone();
        out
    }

    /// The Dirac measure at (δ, γ^a), i.e. (1+T)^a·δ.
    pub fn dirac(delta: &FiniteAbelianGroup, g: &GroupElement, ring: &Ring, m: usize, prec: u32) -> Result<ProMeasure> {
        let i = delta.index(&g.delta)?;
        let mut out = ProMeasure::zero(delta, ring, m, prec);
        out.series[i] = PowerSeries::binomial_power(ring, &g.gamma, m, prec)?;
        Ok(out)
    }

    /// The group-ring element 1 − g^{-1}.
    pub fn euler_factor(delta: &FiniteAbelianGroup, g: &GroupElement, ring: &Ring, m: usize, prec: u32) -> Result<ProMeasure> {
        let one = ProMeasure::scalar(delta, &PowerSeries::one(ring, m, prec));
        one.checked_sub(&ProMeasure::dirac(delta, &g.inverse(delta, ring.p()), ring, m, prec)?)
    }

    /// Rebuilds the measure whose level-n reduction is `d`, a distribution on Δ×Z/p^n.
    pub fn from_level(delta: &FiniteAbelianGroup, n: u32, d: &Distribution, m: usize) -> Result<ProMeasure> {
        let ring = d.ring();
        let pn = level_size(ring.p(), n, m)?;
        if *d.group() != delta.product(&FiniteAbelianGroup::cyclic(pn)) {
            return Err(Error::DomainMismatch("distribution is not on Δ×Z/p^n".into()));
        }
        let prec = d.prec();
        let basis: Vec<PowerSeries> =
            (0..pn).map(|i| PowerSeries::binomial_power(ring, &ZpInt::Int(i as i64), m, prec)).collect::<Result<_>>()?;
        let mut series = Vec::with_capacity(delta.order() as usize);
        for di in 0..delta.order() as usize {
            let mut f = PowerSeries::zero(ring, m, prec);
            for (i, b) in basis.iter().enumerate() {
                let c = &d.values()[di * pn as usize + i];
                if !c.is_zero() {
                    f = &f + &b.scale(c);
                }
            }
            series.push(f);
        }
        ProMeasure::new(delta, &GammaContext::default(), series)
    }

    pub fn delta(&self) -> &FiniteAbelianGroup {
        &self.delta
    }

    pub fn gamma(&self) -> &GammaContext {
        &self.gamma
    }

    pub fn with_gamma(mut self, gamma: &GammaContext) -> ProMeasure {
        self.gamma = gamma.clone();
        self
    }

    pub fn ring(&self) -> &Ring {
        self.series[0].ring()
    }

    /// Truncation degree M.
    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn prec(&self) -> u32 {
        self.series[0].prec()
    }

    pub fn series(&self) -> &[PowerSeries] {
        &self.series
    }

    pub fn series_at(&self, d: &[u64]) -> Result<&PowerSeries> {
        Ok(&self.series[self.delta.index(d)?])
    }

    pub fn is_zero(&self) -> bool {
        self.series.iter().all(|f| f.is_zero())
    }

    pub fn cap_precision(&self, n: u32) -> ProMeasure {
        let series = self.series.iter().map(|f| f.cap_precision(n)).collect();
        ProMeasure { series, ..self.clone() }
    }

    pub fn embed(&self, target: &Ring) -> Result<ProMeasure> {
        let series = self.series.iter().map(|f| f.embed(target)).collect::<Result<Vec<_>>>()?;
        ProMeasure::new(&self.delta, &self.gamma, series)
    }

    fn same_shape(&self, other: &ProMeasure) -> Result<()> {
        if self.delta != other.delta || self.gamma != other.gamma {
            return Err(Error::DomainMismatch("measures on different groups".into()));
        }
        if self.ring() != other.ring() {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ProMeasure) -> Result<ProMeasure> {
        self.same_shape(other)?;
        let series = self.series.iter().zip(&other.series).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        ProMeasure::new(&self.delta, &self.gamma, series)
    }

    pub fn checked_sub(&self, other: &ProMeasure) -> Result<ProMeasure> {
        self.same_shape(other)?;
        let series = self.series.iter().zip(&other.series).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
        ProMeasure::new(&self.delta, &self.gamma, series)
    }

    pub fn scale(&self, c: &Elem) -> ProMeasure {
        let series = self.series.iter().map(|f| f.scale(c)).collect();
        ProMeasure { series, ..self.clone() }
    }

    /// Multiplication by a series in T, coordinate-wise.
    pub fn mul_series(&self, f: &PowerSeries) -> Result<ProMeasure> {
        let series = self.series.iter().map(|g| g.checked_mul(f)).collect::<Result<_>>()?;
        ProMeasure::new(&self.delta, &self.gamma, series)
    }

    /// Product in O[Δ][[T]].
    pub fn checked_mul(&self, other: &ProMeasure) -> Result<ProMeasure> {
        self.same_shape(other)?;
        let g = &self.delta;
        let elems = g.elements();
        let prec = self.prec().min(other.prec());
        let mut series = vec![PowerSeries::zero(self.ring(), self.len().min(other.len()), prec); elems.len()];
        for (i, a) in elems.iter().enumerate() {
            if self.series[i].is_zero() {
                continue;
            }
            for (j, b) in elems.iter().enumerate() {
                if other.series[j].is_zero() {
                    continue;
                }
                let k = g.index(&g.add(a, b))?;
                series[k] = &series[k] + &self.series[i].checked_mul(&other.series[j])?;
            }
        }
        ProMeasure::new(&self.delta, &self.gamma, series)
    }

    /// First (Δ-index, T-degree) where the two measures disagree at precision.
    pub fn first_discrepancy(&self, other: &ProMeasure) -> Option<(Vec<u64>, usize)> {
        for (i, (a, b)) in self.series.iter().zip(&other.series).enumerate() {
            let m = a.len().min(b.len());
            for k in 0..m {
                if !a.coeff(k).agrees(b.coeff(k)) {
                    return Some((self.delta.element(i), k));
                }
            }
        }
        None
    }

    /// The distribution μ_H on Δ×Z/p^n: index δ·p^n + i holds μ(δ, γ^iΓ_n).
    pub fn level_reduce(&self, n: u32) -> Result<Distribution> {
        let ring = self.ring();
        let pn = level_size(ring.p(), n, self.len())? as usize;
        let prec = self.prec();
        let omega = PowerSeries::omega(ring, n, pn + 1, prec)?;
        let mut values = Vec::with_capacity(self.series.len() * pn);
        for f in &self.series {
            // reduce mod ω_n, which is monic of degree p^n
            let mut c: Vec<Elem> = f.coeffs().to_vec();
            for k in (pn..c.len()).rev() {
                let lead = c[k].clone();
                if lead.is_zero() {
                    continue;
                }
                for (j, w) in omega.coeffs().iter().enumerate().take(pn) {
                    c[k - pn + j] = &c[k - pn + j] - &(&lead * w);
                }
                c[k] = ring.zero(prec);
            }
            c.truncate(pn);
            // T^k = Σ_i C(k,i)(−1)^{k−i}(1+T)^i
            for i in 0..pn {
                let mut s = ring.zero(prec);
                let mut binom = BigInt::from(1);
                for (k, ck) in c.iter().enumerate().skip(i) {
                    if k > i {
                        binom = binom * k / (k - i);
                    }
                    if !ck.is_zero() {
                        let t = ck.scale(&binom);
                        s = if (k - i) % 2 == 0 { &s + &t } else { &s - &t };
                    }
                }
                values.push(s);
            }
        }
        Distribution::new(&self.delta.product(&FiniteAbelianGroup::cyclic(pn as u64)), values)
    }

    /// Σ_δ χ(δ)·f_δ(T), with coefficients in the ring of χ.
    pub fn chi_quotient(&self, chi: &Character) -> Result<PowerSeries> {
        if chi.group() != &self.delta {
            return Err(Error::DomainMismatch("character is not on Δ".into()));
        }
        let target = chi.ring();
        let mut acc = PowerSeries::zero(target, self.len(), self.prec());
        for (i, f) in self.series.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let f = f.embed(target)?;
            acc = &acc + &f.scale(&chi.eval(&self.delta.element(i))?);
        }
        Ok(acc)
    }

    /// ∫ χ(δ)ζ^{κ(g)} dμ = chi_quotient(μ, χ) evaluated at ζ−1.
    pub fn twist_eval(&self, chi: &Character, zeta: &Elem) -> Result<Elem> {
        let g = self.chi_quotient(chi)?;
        let target = zeta.ring();
        let p = self.ring().p();
        let one = target.one(zeta.prec());
        let mut pn = 1u64;
        let mut z = zeta.clone();
        while !z.agrees(&one) {
            pn = pn.checked_mul(p).filter(|&v| v <= self.len() as u64).ok_or(Error::TruncationTooSmall {
                need: pn.saturating_mul(p) as usize,
                have: self.len(),
            })?;
            z = z.pow(p);
        }
        let g = g.embed(target)?;
        let x = zeta - &one;
        if x.is_zero() {
            return Ok(g.coeff(0).clone());
        }
        g.eval_at(&x)
    }

    /// ∫ f dμ for f locally constant at level n, given by its values on Δ×Z/p^n.
    pub fn integrate_locally_constant(&self, n: u32, f: &[Elem]) -> Result<Elem> {
        self.level_reduce(n)?.integrate(f)
    }
}

fn level_size(p: u64, n: u32, m: usize) -> Result<u64> {
    p.checked_pow(n).filter(|&v| v <= m as u64).ok_or(Error::TruncationTooSmall {
        need: p.saturating_pow(n) as usize,
        have: m,
    })
}

/// Coordinate-wise pushforward along φ: Δ → Δ′, identity on Γ.
pub fn pro_pushforward(phi: &GroupMorphism, mu: &ProMeasure) -> Result<ProMeasure> {
    if phi.domain() != &mu.delta {
        return Err(Error::DomainMismatch("pushforward: measure is not on the domain".into()));
    }
    let mut out = ProMeasure::zero(phi.codomain(), mu.ring(), mu.len(), mu.prec());
    for (i, j) in phi.table().into_iter().enumerate() {
        out.series[j] = &out.series[j] + &mu.series[i];
    }
    Ok(out.with_gamma(&mu.gamma))
}

/// Coordinate-wise pullback φ^♯ along φ: Δ → Δ′.
pub fn pro_pullback(phi: &GroupMorphism, mu: &ProMeasure) -> Result<ProMeasure> {
    if phi.codomain() != &mu.delta {
        return Err(Error::DomainMismatch("pullback: measure is not on the codomain".into()));
    }
    let series = phi.table().into_iter().map(|j| mu.series[j].clone()).collect();
    ProMeasure::new(phi.domain(), &mu.gamma, series)
}

/// A quotient num/den with den a nonzerodivisor of O[[T]].
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoMeasure {
    num: ProMeasure,
    den: PowerSeries,
}

impl PseudoMeasure {
    pub fn new(num: ProMeasure, den: PowerSeries) -> Result<PseudoMeasure> {
        if num.ring() != den.ring() {
            return Err(Error::SpecMismatch);
        }
        den.weierstrass_prepare()?;
        Ok(PseudoMeasure { num, den })
    }

    /// A genuine measure viewed with denominator 1.
    pub fn from_measure(mu: ProMeasure) -> PseudoMeasure {
        let den = PowerSeries::one(mu.ring(), mu.len(), mu.prec());
        PseudoMeasure { num: mu, den }
    }

    pub fn num(&self) -> &ProMeasure {
        &self.num
    }

    pub fn den(&self) -> &PowerSeries {
        &self.den
    }

    pub fn delta(&self) -> &FiniteAbelianGroup {
        self.num.delta()
    }
}

/// The measure α·num/den; every coordinate of α·num must be divisible by den.
pub fn pseudo_multiply(nu: &PseudoMeasure, alpha: &ProMeasure) -> Result<ProMeasure> {
    let prod = alpha.checked_mul(&nu.num)?;
    let series = prod.series.iter().map(|f| f.div_exact(&nu.den)).collect::<Result<Vec<_>>>()?;
    ProMeasure::new(&prod.delta, &prod.gamma, series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingSpec;

    const M: usize = 16;

    fn zp(p: u64) -> Ring {
        Ring::new(RingSpec::zp(p, 10)).unwrap()
    }

    fn rand_measure(delta: &FiniteAbelianGroup, ring: &Ring, seed: u64) -> ProMeasure {
        let mut s = seed;
        let series = (0..delta.order())
            .map(|_| {
                let c: Vec<i64> = (0..M)
                    .map(|_| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((s >> 33) % 1000) as i64 - 500
                    })
                    .collect();
                PowerSeries::from_ints(ring, &c, M, 10)
            })
            .collect();
        ProMeasure::new(delta, &GammaContext::default(), series).unwrap()
    }

    #[test]
    fn dirac_reduces_to_dirac() {
        let r = zp(2);
        let d = FiniteAbelianGroup::trivial();
        let mu = ProMeasure::scalar(&d, &PowerSeries::one(&r, M, 10));
        for n in 0..4 {
            let lv = mu.level_reduce(n).unwrap();
            let expect = Distribution::dirac(lv.group(), &[0], &r, 10).unwrap();
            assert_eq!(lv, expect);
        }
        let g = ProMeasure::dirac(&d, &GroupElement::new(vec![], 1), &r, M, 10).unwrap();
        let lv = g.level_reduce(2).unwrap();
        assert_eq!(lv, Distribution::dirac(lv.group(), &[1], &r, 10).unwrap());
        assert!(matches!(g.level_reduce(5), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn levels_are_compatible() {
        let r = zp(2);
        let d = FiniteAbelianGroup::cyclic(3);
        let mu = rand_measure(&d, &r, 7);
        let l2 = mu.level_reduce(2).unwrap();
        let l1 = mu.level_reduce(1).unwrap();
        // fiber sums over i ≡ i' mod 2
        for di in 0..3usize {
            for i in 0..2usize {
                let a = &l2.values()[di * 4 + i] + &l2.values()[di * 4 + i + 2];
                assert_eq!(a, l1.values()[di * 2 + i]);
            }
        }
        let back = ProMeasure::from_level(&d, 2, &l2, M).unwrap().level_reduce(2).unwrap();
        assert_eq!(back, l2);
    }

    #[test]
    fn chi_quotient_of_generator() {
        let r = zp(3);
        let d = FiniteAbelianGroup::cyclic(2);
        let mu = ProMeasure::dirac(&d, &GroupElement::new(vec![1], 0), &r, M, 10).unwrap();
        let chi = Character::from_levels(&d, &r, &[1]).unwrap();
        let q = mu.chi_quotient(&chi).unwrap();
        assert_eq!(q, PowerSeries::from_ints(&r, &[-1], M, 10));
    }

    #[test]
    fn twist_eval_trivial_is_mass() {
        let r = zp(5);
        let d = FiniteAbelianGroup::cyclic(2);
        let mu = rand_measure(&d, &r, 3);
        let chi = Character::trivial(&d, &r).unwrap();
        let v = mu.twist_eval(&chi, &r.one(10)).unwrap();
        assert_eq!(v, mu.level_reduce(0).unwrap().total_mass());
    }

    #[test]
    fn twist_eval_dirac() {
        let r = zp(2);
        let d = FiniteAbelianGroup::trivial();
        let mu = ProMeasure::dirac(&d, &GroupElement::new(vec![], 1), &r, M, 10).unwrap();
        let chi = Character::trivial(&d, &r).unwrap();
        let ext = r.with_p_power_roots(2).unwrap();
        let zeta = ext.root_of_unity(4, 10).unwrap();
        let v = mu.twist_eval(&chi.embed(&ext).unwrap(), &zeta).unwrap();
        assert_eq!(v, zeta.cap_precision(v.prec()));
    }

    #[test]
    fn pseudo_multiply_examples() {
        let r = zp(2);
        let d = FiniteAbelianGroup::trivial();
        let t = PowerSeries::t(&r, M, 10);
        let num = ProMeasure::scalar(&d, &PowerSeries::from_ints(&r, &[3, 1, 5], M, 10));
        let nu = PseudoMeasure::new(num.clone(), t.clone()).unwrap();
        let out = pseudo_multiply(&nu, &ProMeasure::scalar(&d, &t)).unwrap();
        assert_eq!(out.len(), M - 1);
        assert_eq!(out.series()[0], num.series()[0].cap_precision(out.prec()).truncate(M - 1));

        let w1 = PowerSeries::omega(&r, 1, M, 10).unwrap();
        let out = pseudo_multiply(&nu, &ProMeasure::scalar(&d, &w1)).unwrap();
        let expect = num.series()[0].checked_mul(&PowerSeries::from_ints(&r, &[2, 1], M, 10)).unwrap();
        assert_eq!(out.series()[0], expect.cap_precision(out.prec()).truncate(M - 1));

        let one = ProMeasure::scalar(&d, &PowerSeries::one(&r, M, 10));
        assert!(matches!(pseudo_multiply(&nu, &one), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn euler_factor_has_zero_augmentation() {
        let r = zp(3);
        let d = FiniteAbelianGroup::cyclic(2);
        let e = ProMeasure::euler_factor(&d, &GroupElement::new(vec![1], 2), &r, M, 10).unwrap();
        assert!(e.level_reduce(0).unwrap().total_mass().is_zero());
    }
}
