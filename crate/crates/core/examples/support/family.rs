//! The three-node family (1) ← ℓ₁ ← ℓ₁ℓ₂ over Z_3 shared by several examples.

use std::collections::BTreeMap;

use iwasawa::euler::{MeasureFamily, ModuliPoset, ModulusNode, PosetEdge};
use iwasawa::groups::{FiniteAbelianGroup, GroupMorphism};
use iwasawa::measure::{pseudo_multiply, GroupElement, ProMeasure, PseudoMeasure};
use iwasawa::padic::Ring;
use iwasawa::series::PowerSeries;

pub const M: usize = 16;
pub const N: u32 = 12;

/// Δ = 1, Z/2, Z/2×Z/3 with den T at (1). The upper measures are solved from
/// the Euler relations with a few free coordinates filled in by hand.
pub fn three_node(ring: &Ring) -> MeasureFamily {
    let s = |c: &[i64]| PowerSeries::from_ints(ring, c, M, N);
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
    let nu = PseudoMeasure::new(ProMeasure::scalar(&d0, &s(&[3, 1, 4, 1, 5])), PowerSeries::t(ring, M, N)).unwrap();

    let pushed = pseudo_multiply(&nu, &poset.euler_product(&e1, ring, M, N).unwrap()).unwrap();
    let r = s(&[2, 7, 1]).truncate(pushed.len());
    let mu1 = ProMeasure::new(&d1, &Default::default(), vec![&pushed.series()[0] - &r, r]).unwrap();

    let target = poset.euler_product(&e2, ring, mu1.len(), N).unwrap().checked_mul(&mu1).unwrap();
    let k = target.len();
    let extra = s(&[1, -1, 2]).truncate(k);
    let mut coords = vec![PowerSeries::zero(ring, k, N); 6];
    coords[0] = &target.series()[0] - &extra;
    coords[1] = extra;
    coords[3] = target.series()[1].clone();
    let mu2 = ProMeasure::new(&d2, &Default::default(), coords).unwrap();
    let measures = BTreeMap::from([("l1".to_string(), mu1), ("l1l2".to_string(), mu2)]);
    MeasureFamily { poset, measures, trivial: Some(nu) }
}

