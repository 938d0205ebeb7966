#![allow(dead_code)]

use std::collections::BTreeMap;

use iwasawa::euler::{MeasureFamily, ModuliPoset, ModulusNode, PosetEdge};
use iwasawa::groups::{FiniteAbelianGroup, GroupMorphism};
use iwasawa::measure::{pseudo_multiply, GammaContext, GroupElement, ProMeasure, PseudoMeasure};
use iwasawa::padic::{Elem, Ring, RingSpec};
use iwasawa::series::PowerSeries;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zp(p: u64, prec: u32) -> Ring {
    Ring::new(RingSpec::zp(p, prec)).unwrap()
}

/// Z_9 = Z_3[i].
pub fn unram3(prec: u32) -> Ring {
    Ring::new(RingSpec::unramified(3, vec![1, 0, 1], prec)).unwrap()
}

/// Z_4 = Z_2[x]/(x²+x+1), which holds the cube roots of unity.
pub fn unram2(prec: u32) -> Ring {
    Ring::new(RingSpec::unramified(2, vec![1, 1, 1], prec)).unwrap()
}

/// Z_2[√2].
pub fn wild2(prec: u32) -> Ring {
    Ring::new(RingSpec { p: 2, unram: vec![0, 1], eisenstein: vec![vec![-2], vec![0], vec![1]], prec }).unwrap()
}

pub fn rand_elem(r: &mut ChaCha8Rng, ring: &Ring, prec: u32) -> Elem {
    let n = ring.ramification() * ring.residue_degree();
    let p = BigInt::from(ring.p());
    let coords = (0..n)
        .map(|_| (0..=prec).fold(BigInt::from(0), |acc, _| acc * &p + BigInt::from(r.gen_range(0..ring.p()))))
        .collect();
    Elem::from_coords(ring, coords, prec).unwrap()
}

pub fn rand_unit(r: &mut ChaCha8Rng, ring: &Ring, prec: u32) -> Elem {
    loop {
        let x = rand_elem(r, ring, prec);
        if x.is_unit() {
            return x;
        }
    }
}

pub fn rand_series(r: &mut ChaCha8Rng, ring: &Ring, deg: usize, m: usize, prec: u32) -> PowerSeries {
    let c = (0..=deg.min(m - 1)).map(|_| rand_elem(r, ring, prec)).collect();
    PowerSeries::new(ring, c, m).unwrap()
}

/// π^μ·P·U with P distinguished of degree λ and U a unit polynomial of degree ≤ 2.
pub fn prepared(r: &mut ChaCha8Rng, ring: &Ring, mu: u32, lambda: usize, m: usize, prec: u32) -> PowerSeries {
    let pi = ring.uniformizer(prec);
    let mut p: Vec<Elem> = (0..lambda).map(|_| &rand_elem(r, ring, prec) * &pi).collect();
    p.push(ring.one(prec));
    let p = PowerSeries::new(ring, p, m).unwrap();
    let mut u = vec![rand_unit(r, ring, prec)];
    for _ in 0..r.gen_range(0..=2) {
        u.push(rand_elem(r, ring, prec));
    }
    let u = PowerSeries::new(ring, u, m).unwrap();
    let f = &p * &u;
    let c = f.coeffs().iter().map(|x| x.mul_pi_pow(mu).cap_precision(prec)).collect();
    PowerSeries::new(ring, c, m).unwrap()
}

pub fn rand_measure(r: &mut ChaCha8Rng, delta: &FiniteAbelianGroup, ring: &Ring, m: usize, prec: u32) -> ProMeasure {
    let s = (0..delta.order()).map(|_| rand_series(r, ring, m - 1, m, prec)).collect();
    ProMeasure::new(delta, &GammaContext::default(), s).unwrap()
}

pub fn groups_up_to_12() -> Vec<FiniteAbelianGroup> {
    [vec![], vec![2], vec![3], vec![4], vec![2, 2], vec![6], vec![8], vec![12]]
        .into_iter()
        .map(|o| FiniteAbelianGroup::new(o).unwrap())
        .collect()
}

/// Every abelian group of order ≤ 8 up to isomorphism.
pub fn groups_up_to_8() -> Vec<FiniteAbelianGroup> {
    [vec![], vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6], vec![7], vec![8], vec![2, 4], vec![2, 2, 2]]
        .into_iter()
        .map(|o| FiniteAbelianGroup::new(o).unwrap())
        .collect()
}

/// Nodes (1) ← ℓ₁ ← ℓ₁ℓ₂ with Δ = 1, Z/2, Z/2×Z/3, den = T at (1) and
/// numerator `num`. The measures above (1) are solved from the Euler relations,
/// with free fibre coordinates filled from `fill`.
pub fn three_node(ring: &Ring, num: &PowerSeries, fill: [&PowerSeries; 2]) -> MeasureFamily {
    let (m, n) = (num.len(), num.prec());
    let d0 = FiniteAbelianGroup::trivial();
    let d1 = FiniteAbelianGroup::cyclic(2);
    let d2 = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
    let n0 = ModulusNode::new("(1)", &d0, &[])
        .with_frobenius("l1", GroupElement::new(vec![], 1))
        .with_frobenius("l2", GroupElement::new(vec![], 2));
    let n1 = ModulusNode::new("l1", &d1, &["l1"]).with_frobenius("l2", GroupElement::new(vec![1], 3));
    let n2 = ModulusNode::new("l1l2", &d2, &["l1", "l2"]);
    let e1 = PosetEdge { upper: "l1".into(), lower: "(1)".into(), morphism: GroupMorphism::zero(&d1, &d0) };
    let e2 = PosetEdge {
        upper: "l1l2".into(),
        lower: "l1".into(),
        morphism: GroupMorphism::new(d2.clone(), d1.clone(), vec![vec![1], vec![0]]).unwrap(),
    };
    let poset = ModuliPoset::new(vec![n0, n1, n2], vec![e1.clone(), e2.clone()]).unwrap();
    let nu = PseudoMeasure::new(ProMeasure::scalar(&d0, num), PowerSeries::t(ring, m, n)).unwrap();

    let pushed = pseudo_multiply(&nu, &poset.euler_product(&e1, ring, m, n).unwrap()).unwrap();
    let r = fill[0].truncate(pushed.len());
    let mu1 = ProMeasure::new(&d1, &GammaContext::default(), vec![&pushed.series()[0] - &r, r]).unwrap();

    let target = poset.euler_product(&e2, ring, mu1.len(), n).unwrap().checked_mul(&mu1).unwrap();
    let k = target.len();
    let extra = fill[1].truncate(k);
    let mut coords = vec![PowerSeries::zero(ring, k, n); 6];
    coords[0] = &target.series()[0] - &extra;
    coords[1] = extra;
    coords[3] = target.series()[1].clone();
    let mu2 = ProMeasure::new(&d2, &GammaContext::default(), coords).unwrap();
    let measures = BTreeMap::from([("l1".to_string(), mu1), ("l1l2".to_string(), mu2)]);
    MeasureFamily { poset, measures, trivial: Some(nu) }
}

/// Two nodes f ← fℓ with Δ = Z/2 and Z/2×Z/2, built so that the sign
/// character at f has χ-quotient `g`. Frobenius of ℓ at f is (δ, a).
pub fn sign_family(ring: &Ring, g: &PowerSeries, fill: &PowerSeries, a: i64) -> MeasureFamily {
    let (m, n) = (g.len(), g.prec());
    let d1 = FiniteAbelianGroup::cyclic(2);
    let d2 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
    let f = ModulusNode::new("f", &d1, &["q"]).with_frobenius("l", GroupElement::new(vec![1], a));
    let fl = ModulusNode::new("fl", &d2, &["q", "l"]);
    let e = PosetEdge {
        upper: "fl".into(),
        lower: "f".into(),
        morphism: GroupMorphism::new(d2.clone(), d1.clone(), vec![vec![1], vec![0]]).unwrap(),
    };
    let poset = ModuliPoset::new(vec![f, fl], vec![e.clone()]).unwrap();
    let r = fill.truncate(m);
    let mu = ProMeasure::new(&d1, &GammaContext::default(), vec![g + &r, r]).unwrap();
    let target = poset.euler_product(&e, ring, m, n).unwrap().checked_mul(&mu).unwrap();
    let k = target.len();
    let mut coords = vec![PowerSeries::zero(ring, k, n); 4];
    coords[0] = target.series()[0].clone();
    coords[2] = target.series()[1].clone();
    let up = ProMeasure::new(&d2, &GammaContext::default(), coords).unwrap();
    let measures = BTreeMap::from([("f".to_string(), mu), ("fl".to_string(), up)]);
    MeasureFamily { poset, measures, trivial: None }
}

/// (1) ← ℓ with Δ = 1 and Z/2, den = T and numerator `num`; Frobenius of ℓ
/// at (1) has Γ-exponent a.
pub fn trivial_family(ring: &Ring, num: &PowerSeries, fill: &PowerSeries, a: i64) -> MeasureFamily {
    let (m, n) = (num.len(), num.prec());
    let d0 = FiniteAbelianGroup::trivial();
    let d1 = FiniteAbelianGroup::cyclic(2);
    let n0 = ModulusNode::new("(1)", &d0, &[]).with_frobenius("l", GroupElement::new(vec![], a));
    let n1 = ModulusNode::new("l", &d1, &["l"]);
    let e = PosetEdge { upper: "l".into(), lower: "(1)".into(), morphism: GroupMorphism::zero(&d1, &d0) };
    let poset = ModuliPoset::new(vec![n0, n1], vec![e.clone()]).unwrap();
    let nu = PseudoMeasure::new(ProMeasure::scalar(&d0, num), PowerSeries::t(ring, m, n)).unwrap();
    let pushed = pseudo_multiply(&nu, &poset.euler_product(&e, ring, m, n).unwrap()).unwrap();
    let r = fill.truncate(pushed.len());
    let mu = ProMeasure::new(&d1, &GammaContext::default(), vec![&pushed.series()[0] - &r, r]).unwrap();
    MeasureFamily { poset, measures: BTreeMap::from([("l".to_string(), mu)]), trivial: Some(nu) }
}
