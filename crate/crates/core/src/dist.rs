//! Distributions on finite abelian groups, stored by their singleton masses.
//! Equivalently, elements of the group ring A[G].

use crate::error::{Error, Result};
use crate::groups::{FiniteAbelianGroup, GroupMorphism};
use crate::padic::{Elem, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    group: FiniteAbelianGroup,
    values: Vec<Elem>,
}

impl Distribution {
    /// `values[i]` is the mass of the i-th group element in enumeration order.
    pub fn new(group: &FiniteAbelianGroup, values: Vec<Elem>) -> Result<Distribution> {
        if values.len() as u64 != group.order() {
            return Err(Error::DomainMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let ring = values[0].ring();
        if values.iter().any(|v| v.ring() != ring) {
            return Err(Error::SpecMismatch);
        }
        Ok(Distribution { group: group.clone(), values })
    }

    pub fn zero(group: &FiniteAbelianGroup, ring: &Ring, prec: u32) -> Distribution {
        Distribution { group: group.clone(), values: vec![ring.zero(prec); group.order() as usize] }
    }

    pub fn dirac(group: &FiniteAbelianGroup, g: &[u64], ring: &Ring, prec: u32) -> Result<Distribution> {
        let mut d = Distribution::zero(group, ring, prec);
        d.values[group.index(g)?] = ring.one(prec);
        Ok(d)
    }

    /// Mass `c` on every element.
    pub fn uniform(group: &FiniteAbelianGroup, c: &Elem) -> Distribution {
        Distribution { group: group.clone(), values: vec![c.clone(); group.order() as usize] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ring(&self) -> &Ring {
        self.values[0].ring()
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn value(&self, g: &[u64]) -> Result<&Elem> {
        Ok(&self.values[self.group.index(g)?])
    }

    pub fn prec(&self) -> u32 {
        self.values.iter().map(|v| v.prec()).min().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// μ(X) for a subset given as a list of elements.
    pub fn mass(&self, x: &[Vec<u64>]) -> Result<Elem> {
        let mut acc = self.ring().zero(self.prec());
        for g in x {
            acc = &acc + self.value(g)?;
        }
        Ok(acc)
    }

    pub fn total_mass(&self) -> Elem {
        let mut acc = self.ring().zero(self.prec());
        for v in &self.values {
            acc = &acc + v;
        }
        acc
    }

    fn same_group(&self, other: &Distribution) -> Result<()> {
        if self.group != other.group {
            return Err(Error::DomainMismatch("distributions on different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Distribution) -> Result<Distribution> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(Distribution { group: self.group.clone(), values })
    }

    pub fn sub(&self, other: &Distribution) -> Result<Distribution> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
        Ok(Distribution { group: self.group.clone(), values })
    }

    pub fn scale(&self, c: &Elem) -> Result<Distribution> {
        let values = self.values.iter().map(|a| a.checked_mul(c)).collect::<Result<_>>()?;
        Ok(Distribution { group: self.group.clone(), values })
    }

    /// μ restricted to X: masses outside X set to zero.
    pub fn restrict(&self, x: &[Vec<u64>]) -> Result<Distribution> {
        let mut keep = vec![false; self.values.len()];
        for g in x {
            keep[self.group.index(g)?] = true;
        }
        let zero = self.ring().zero(self.prec());
        let values = self.values.iter().zip(keep).map(|(v, k)| if k { v.clone() } else { zero.clone() }).collect();
        Ok(Distribution { group: self.group.clone(), values })
    }

    /// (σ_*μ)(X) = μ(σ^{-1}X).
    pub fn translate(&self, sigma: &[u64]) -> Result<Distribution> {
        self.group.check(sigma)?;
        let mut values = self.values.clone();
        for (i, v) in self.values.iter().enumerate() {
            let g = self.group.add(&self.group.element(i), sigma);
            values[self.group.index(&g)?] = v.clone();
        }
        Ok(Distribution { group: self.group.clone(), values })
    }

    /// ∫ f dμ = Σ f(g) μ({g}).
    pub fn integrate(&self, f: &[Elem]) -> Result<Elem> {
        if f.len() != self.values.len() {
            return Err(Error::DomainMismatch("integrand length".into()));
        }
        let mut acc = self.ring().zero(self.prec());
        for (v, x) in self.values.iter().zip(f) {
            acc = acc.checked_add(&x.checked_mul(v)?)?;
        }
        Ok(acc)
    }

    /// The external product α ⊠ β on G × H.
    pub fn product(&self, other: &Distribution) -> Result<Distribution> {
        let group = self.group.product(&other.group);
        let mut values = Vec::with_capacity(self.values.len() * other.values.len());
        for a in &self.values {
            for b in &other.values {
                values.push(a.checked_mul(b)?);
            }
        }
        Ok(Distribution { group, values })
    }

    /// Sparse group-ring form Σ c_g [g], zero terms omitted.
    pub fn to_group_ring(&self) -> Vec<(Vec<u64>, Elem)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (self.group.element(i), v.clone()))
            .collect()
    }

    pub fn from_group_ring(
        group: &FiniteAbelianGroup,
        ring: &Ring,
        prec: u32,
        terms: &[(Vec<u64>, Elem)],
    ) -> Result<Distribution> {
        let mut d = Distribution::zero(group, ring, prec);
        for (g, c) in terms {
            let i = group.index(g)?;
            d.values[i] = d.values[i].checked_add(c)?;
        }
        Ok(d)
    }
}

/// (π_*μ)(y) = μ(π^{-1}{y}).
pub fn pushforward(phi: &GroupMorphism, mu: &Distribution) -> Result<Distribution> {
    if phi.domain() != mu.group() {
        return Err(Error::DomainMismatch("pushforward: measure is not on the domain".into()));
    }
    let mut out = Distribution::zero(phi.codomain(), mu.ring(), mu.prec());
    for (i, j) in phi.table().into_iter().enumerate() {
        out.values[j] = &out.values[j] + &mu.values[i];
    }
    Ok(out)
}

/// (π^♯μ′)({g}) = μ′({π(g)}).
pub fn pullback_sharp(phi: &GroupMorphism, mu: &Distribution) -> Result<Distribution> {
    if phi.codomain() != mu.group() {
        return Err(Error::DomainMismatch("pullback: measure is not on the codomain".into()));
    }
    let values = phi.table().into_iter().map(|j| mu.values[j].clone()).collect();
    Ok(Distribution { group: phi.domain().clone(), values })
}

/// A μ′ with π^♯μ′ = μ, when μ is invariant under the kernel; `None` otherwise.
pub fn pullback_preimage(phi: &GroupMorphism, mu: &Distribution) -> Result<Option<Distribution>> {
    if phi.domain() != mu.group() {
        return Err(Error::DomainMismatch("preimage: measure is not on the domain".into()));
    }
    let mut out = Distribution::zero(phi.codomain(), mu.ring(), mu.prec());
    let mut seen = vec![false; out.values.len()];
    for (i, j) in phi.table().into_iter().enumerate() {
        if !seen[j] {
            out.values[j] = mu.values[i].clone();
            seen[j] = true;
        }
    }
    if pullback_sharp(phi, &out)? == *mu {
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

/// α ∗ β = m_*(α ⊠ β) for the addition map m.
pub fn convolve(alpha: &Distribution, beta: &Distribution) -> Result<Distribution> {
    alpha.same_group(beta)?;
    pushforward(&GroupMorphism::addition(&alpha.group), &alpha.product(beta)?)
}
