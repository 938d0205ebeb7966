//! Finite abelian groups Z/d_1 × ... × Z/d_r, morphisms and characters.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::padic::{Elem, Ring};

/// Elements are exponent vectors; enumeration is lexicographic with the first
/// coordinate varying slowest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<FiniteAbelianGroup> {
        if orders.contains(&0) {
            return Err(Error::InvalidInput("cyclic orders must be positive".into()));
        }
        let total = orders.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        match total {
            Some(n) if n <= 1 << 20 => Ok(FiniteAbelianGroup { orders }),
            _ => Err(Error::InvalidInput("group too large to enumerate".into())),
        }
    }

    pub fn trivial() -> FiniteAbelianGroup {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn cyclic(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![n]).expect("positive order")
    }

    /// G × H, enumerated with the G-coordinates slowest.
    pub fn product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteAbelianGroup { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        g.len() == self.rank() && g.iter().zip(&self.orders).all(|(x, d)| x < d)
    }

    pub fn check(&self, g: &[u64]) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementOutOfGroup(g.to_vec()))
        }
    }

    pub fn index(&self, g: &[u64]) -> Result<usize> {
        self.check(g)?;
        Ok(g.iter().zip(&self.orders).fold(0u64, |acc, (x, d)| acc * d + x) as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut g = vec![0; self.rank()];
        for (x, d) in g.iter_mut().zip(&self.orders).rev() {
            *x = idx as u64 % d;
            idx /= *d as usize;
        }
        g
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order() as usize).map(|i| self.element(i)).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    /// k·a for any integer k.
    pub fn mul(&self, a: &[u64], k: i64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(x, &d)| ((*x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(1, |acc, (x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }
}

/// A homomorphism given by the images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMorphism {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    images: Vec<Vec<u64>>,
}

/// Kernel and image, both listed in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelImage {
    pub kernel: Vec<Vec<u64>>,
    pub image: Vec<Vec<u64>>,
    pub surjective: bool,
}

impl GroupMorphism {
    pub fn new(
        domain: FiniteAbelianGroup,
        codomain: FiniteAbelianGroup,
        images: Vec<Vec<u64>>,
    ) -> Result<GroupMorphism> {
        if images.len() != domain.rank() {
            return Err(Error::InvalidMorphism(format!(
                "{} generator images for a group of rank {}",
                images.len(),
                domain.rank()
            )));
        }
        for (i, (img, &d)) in images.iter().zip(&domain.orders).enumerate() {
            if !codomain.contains(img) {
                return Err(Error::InvalidMorphism(format!("image {i} is not in the codomain")));
            }
            if d % codomain.element_order(img) != 0 {
                return Err(Error::InvalidMorphism(format!(
                    "image of generator {i} has order not dividing {d}"
                )));
            }
        }
        Ok(GroupMorphism { domain, codomain, images })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> GroupMorphism {
        let images = (0..g.rank())
            .map(|i| {
                let mut v = g.identity();
                if g.orders[i] > 1 {
                    v[i] = 1;
                }
                v
            })
            .collect();
        GroupMorphism { domain: g.clone(), codomain: g.clone(), images }
    }

    pub fn zero(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> GroupMorphism {
        let images = vec![codomain.identity(); domain.rank()];
        GroupMorphism { domain: domain.clone(), codomain: codomain.clone(), images }
    }

    /// Addition G × G → G.
    pub fn addition(g: &FiniteAbelianGroup) -> GroupMorphism {
        let id = GroupMorphism::identity(g);
        let mut images = id.images.clone();
        images.extend(id.images);
        GroupMorphism { domain: g.product(g), codomain: g.clone(), images }
    }

    /// Every homomorphism between the two groups, in lexicographic order of images.
    pub fn all(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Vec<GroupMorphism> {
        let choices: Vec<Vec<Vec<u64>>> = domain
            .orders
            .iter()
            .map(|&d| {
                codomain
                    .elements()
                    .into_iter()
                    .filter(|h| d % codomain.element_order(h) == 0)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let images = pick.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            out.push(GroupMorphism { domain: domain.clone(), codomain: codomain.clone(), images });
            let mut k = choices.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    pub fn domain(&self) -> &FiniteAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAbelianGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn apply(&self, g: &[u64]) -> Vec<u64> {
        let mut acc = self.codomain.identity();
        for (x, img) in g.iter().zip(&self.images) {
            acc = self.codomain.add(&acc, &self.codomain.mul(img, *x as i64));
        }
        acc
    }

    /// Image of each domain element, indexed by enumeration.
    pub fn table(&self) -> Vec<usize> {
        self.domain
            .elements()
            .iter()
            .map(|g| self.codomain.index(&self.apply(g)).expect("image lies in codomain"))
            .collect()
    }

    pub fn compose(&self, then: &GroupMorphism) -> Result<GroupMorphism> {
        if self.codomain != then.domain {
            return Err(Error::DomainMismatch("composition".into()));
        }
        let images = self.images.iter().map(|g| then.apply(g)).collect();
        Ok(GroupMorphism { domain: self.domain.clone(), codomain: then.codomain.clone(), images })
    }

    pub fn kernel_image(&self) -> KernelImage {
        let id = self.codomain.identity();
        let mut kernel = Vec::new();
        let mut hit = vec![false; self.codomain.order() as usize];
        for g in self.domain.elements() {
            let h = self.apply(&g);
            if h == id {
                kernel.push(g);
            }
            hit[self.codomain.index(&h).unwrap()] = true;
        }
        let image: Vec<Vec<u64>> = (0..hit.len()).filter(|&i| hit[i]).map(|i| self.codomain.element(i)).collect();
        let surjective = image.len() == hit.len();
        KernelImage { kernel, image, surjective }
    }
}

/// A character with values in a coefficient ring: the i-th generator maps to
/// ζ_m^{a_i}, where ζ_m is the ring's designated root of order m = exponent(G).
#[derive(Clone, Debug)]
pub struct Character {
    group: FiniteAbelianGroup,
    ring: Ring,
    exponents: Vec<u64>,
    powers: Vec<Elem>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Character) -> bool {
        self.group == other.group && self.ring == other.ring && self.exponents == other.exponents
    }
}

/// Smallest ring reachable from `base` containing the roots of unity of order `m`.
pub fn ring_for_order(base: &Ring, m: u64) -> Result<Ring> {
    let p = base.p();
    let (mut s, mut t) = (0, m);
    while t % p == 0 {
        t /= p;
        s += 1;
    }
    if !(base.residue_size() - 1).is_multiple_of(t) {
        return Err(Error::RootNotAvailable { order: m });
    }
    base.with_p_power_roots(s)
}

impl Character {
    pub fn new(group: &FiniteAbelianGroup, ring: &Ring, exponents: Vec<u64>) -> Result<Character> {
        let m = group.exponent();
        if exponents.len() != group.rank() {
            return Err(Error::InvalidInput("one exponent per generator required".into()));
        }
        for (a, &d) in exponents.iter().zip(group.orders()) {
            if *a >= m || (a * d) % m != 0 {
                return Err(Error::InvalidInput(format!("exponent {a} incompatible with generator order {d}")));
            }
        }
        // values lie in μ_o for the order o of χ; ζ_m^{m/o} = ζ_o
        let o = exponents.iter().fold(1u64, |acc, &a| acc.lcm(&(m / a.gcd(&m))));
        let zeta = ring.root_of_unity(o, ring.default_precision())?;
        let mut powers = Vec::with_capacity(o as usize);
        let mut x = ring.one(ring.default_precision());
        for _ in 0..o {
            powers.push(x.clone());
            x = &x * &zeta;
        }
        if !x.agrees(&ring.one(x.prec())) {
            return Err(Error::RootNotAvailable { order: o });
        }
        Ok(Character { group: group.clone(), ring: ring.clone(), exponents, powers })
    }

    /// The character with χ(e_i) = ζ_{d_i}^{b_i}.
    pub fn from_levels(group: &FiniteAbelianGroup, ring: &Ring, b: &[u64]) -> Result<Character> {
        let m = group.exponent();
        let exps = b.iter().zip(group.orders()).map(|(&bi, &d)| (m / d) * (bi % d)).collect();
        Character::new(group, ring, exps)
    }

    pub fn trivial(group: &FiniteAbelianGroup, ring: &Ring) -> Result<Character> {
        Character::new(group, ring, vec![0; group.rank()])
    }

    /// All characters of the group, ordered like the group's own enumeration.
    pub fn all(group: &FiniteAbelianGroup, ring: &Ring) -> Result<Vec<Character>> {
        group.elements().iter().map(|b| Character::from_levels(group, ring, b)).collect()
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn root_order(&self) -> u64 {
        self.group.exponent()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// k with χ(g) = ζ_m^k.
    pub fn exponent_at(&self, g: &[u64]) -> Result<u64> {
        self.group.check(g)?;
        let m = self.root_order();
        Ok(g.iter().zip(&self.exponents).fold(0, |acc, (x, a)| (acc + x * a) % m))
    }

    pub fn eval(&self, g: &[u64]) -> Result<Elem> {
        let o = self.powers.len() as u64;
        Ok(self.powers[(self.exponent_at(g)? / (self.root_order() / o)) as usize].clone())
    }

    /// Order of χ as an element of the dual group.
    pub fn order(&self) -> u64 {
        let m = self.root_order();
        self.exponents.iter().fold(1, |acc, &a| acc.lcm(&(m / a.gcd(&m))))
    }

    pub fn inverse(&self) -> Character {
        let m = self.root_order();
        let exponents = self.exponents.iter().map(|&a| (m - a) % m).collect();
        Character::new(&self.group, &self.ring, exponents).expect("inverse of a valid character")
    }

    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.group != other.group || self.ring != other.ring {
            return Err(Error::DomainMismatch("characters on different groups".into()));
        }
        let m = self.root_order();
        let exponents = self.exponents.iter().zip(&other.exponents).map(|(a, b)| (a + b) % m).collect();
        Character::new(&self.group, &self.ring, exponents)
    }

    /// χ ∘ φ for a morphism into this character's group.
    pub fn pullback(&self, phi: &GroupMorphism) -> Result<Character> {
        if phi.codomain() != &self.group {
            return Err(Error::DomainMismatch("character pullback".into()));
        }
        let dom = phi.domain();
        let m = dom.exponent();
        let mine = self.root_order();
        let mut exps = Vec::with_capacity(dom.rank());
        for img in phi.images() {
            // χ(φ(e_i)) = ζ_mine^k = ζ_m^{k m / mine} for a compatible system of roots
            let k = self.exponent_at(img)? as u128;
            let num = k * m as u128;
            if !num.is_multiple_of(mine as u128) {
                return Err(Error::InvalidMorphism("character order does not divide target exponent".into()));
            }
            exps.push(((num / mine as u128) % m as u128) as u64);
        }
        let out = Character::new(dom, &self.ring, exps)?;
        Ok(out)
    }

    /// Same exponents, values in a ring containing this one.
    pub fn embed(&self, target: &Ring) -> Result<Character> {
        let c = Character::new(&self.group, target, self.exponents.clone())?;
        let g = (0..self.group.rank())
            .map(|i| {
                let mut v = self.group.identity();
                v[i] = 1 % self.group.orders()[i];
                v
            })
            .collect::<Vec<_>>();
        for gen in g {
            if !target.embed(&self.eval(&gen)?)?.agrees(&c.eval(&gen)?) {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(c)
    }
}

/// e_χ = (1/#G) Σ_g χ(g^{-1}) g.
pub fn idempotent(chi: &Character) -> Result<Distribution> {
    let g = chi.group();
    let ring = chi.ring();
    let prec = ring.default_precision();
    let inv = ring
        .bigint(&BigInt::from(g.order()), prec)
        .invert()
        .map_err(|_| Error::OrderNotInvertible)?;
    let values = g
        .elements()
        .iter()
        .map(|x| Ok(&chi.eval(&g.neg(x))? * &inv))
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(g, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingSpec;

    fn z5(prec: u32) -> Ring {
        Ring::new(RingSpec::zp(5, prec)).unwrap()
    }

    #[test]
    fn groups() {
        assert_eq!(FiniteAbelianGroup::cyclic(2).order(), 2);
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.elements()[5], vec![1, 1]);
        assert_eq!(g.index(&[1, 3]).unwrap(), 7);
        assert_eq!(FiniteAbelianGroup::trivial().order(), 1);
        assert_eq!(FiniteAbelianGroup::trivial().elements(), vec![Vec::<u64>::new()]);
        assert!(matches!(g.index(&[2, 0]), Err(Error::ElementOutOfGroup(_))));
    }

    #[test]
    fn kernels() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        let z2 = FiniteAbelianGroup::cyclic(2);
        let red = GroupMorphism::new(z4.clone(), z2.clone(), vec![vec![1]]).unwrap();
        let ki = red.kernel_image();
        assert_eq!(ki.kernel, vec![vec![0], vec![2]]);
        assert!(ki.surjective);
        assert_eq!(GroupMorphism::identity(&z4).kernel_image().kernel, vec![vec![0]]);
        let zero = GroupMorphism::zero(&z4, &z2).kernel_image();
        assert_eq!(zero.kernel.len(), 4);
        assert_eq!(zero.image, vec![vec![0]]);
        assert!(GroupMorphism::new(z2.clone(), z4.clone(), vec![vec![1]]).is_err());
        assert_eq!(GroupMorphism::all(&z4, &z2).len(), 2);
        assert_eq!(GroupMorphism::all(&z2, &z4).len(), 2);
    }

    #[test]
    fn character_values() {
        let r = z5(3);
        let z2 = FiniteAbelianGroup::cyclic(2);
        let z4 = FiniteAbelianGroup::cyclic(4);
        let triv = Character::trivial(&z4, &r).unwrap();
        assert_eq!(triv.eval(&[3]).unwrap(), r.one(3));
        let sgn = Character::new(&z2, &r, vec![1]).unwrap();
        assert_eq!(sgn.eval(&[1]).unwrap(), r.int(-1, 3));
        let chi = Character::new(&z4, &r, vec![1]).unwrap();
        assert_eq!(chi.eval(&[1]).unwrap().to_bigint(), BigInt::from(57));
        let z3 = FiniteAbelianGroup::cyclic(3);
        assert!(matches!(Character::new(&z3, &r, vec![1]), Err(Error::RootNotAvailable { order: 3 })));
    }

    #[test]
    fn idempotents() {
        let r = z5(2);
        let t = Character::trivial(&FiniteAbelianGroup::trivial(), &r).unwrap();
        assert_eq!(idempotent(&t).unwrap().values(), &[r.one(2)]);
        let z2 = FiniteAbelianGroup::cyclic(2);
        let chi = Character::new(&z2, &r, vec![1]).unwrap();
        let e = idempotent(&chi).unwrap();
        assert_eq!(e.values()[0].to_bigint(), BigInt::from(13));
        assert_eq!(e.values()[1].to_bigint(), BigInt::from(12));
        let r2 = Ring::new(RingSpec::zp(2, 4)).unwrap();
        let chi2 = Character::new(&z2, &r2, vec![1]).unwrap();
        assert_eq!(idempotent(&chi2).unwrap_err(), Error::OrderNotInvertible);
    }

    #[test]
    fn pullbacks() {
        let r = Ring::new(RingSpec::zp(7, 4)).unwrap();
        let z6 = FiniteAbelianGroup::cyclic(6);
        let z3 = FiniteAbelianGroup::cyclic(3);
        let chi = Character::new(&z3, &r, vec![1]).unwrap();
        let phi = GroupMorphism::new(z6.clone(), z3.clone(), vec![vec![1]]).unwrap();
        let psi = chi.pullback(&phi).unwrap();
        for g in z6.elements() {
            assert_eq!(psi.eval(&g).unwrap(), chi.eval(&phi.apply(&g)).unwrap());
        }
    }
}
