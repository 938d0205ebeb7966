//! An Euler system of measures on three moduli: compatibility, derivation
//! from the top measure, ψ-images and p-adic L-values. With `--json` the
//! family is printed as a scenario document for the `euler` verbs.
//!
//!     cargo run --example euler_family [-- --json]

#[path = "support/family.rs"]
mod family;

use family::{three_node, N};
use iwasawa::codec::scenario_json;
use iwasawa::euler::{euler_compatibility_check, family_derive, j_membership, lp_eval, lp_imprimitive, psi_image, ModuliPoset, PsiSymbol};
use iwasawa::groups::{Character, FiniteAbelianGroup};
use iwasawa::measure::GroupElement;
use iwasawa::padic::{Ring, RingSpec};

fn main() -> iwasawa::Result<()> {
    let ring = Ring::new(RingSpec::zp(3, N))?;
    let fam = three_node(&ring);
    let psi = vec![PsiSymbol { node: "l1".into(), ideal: "a".into(), norm: 2, sigma: GroupElement::new(vec![1], 1) }];
    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&scenario_json(&fam, &psi)).unwrap());
        return Ok(());
    }

    for r in euler_compatibility_check(&fam)? {
        println!("{} → {}: {}", r.upper, r.lower, if r.discrepancy.is_none() { "compatible" } else { "broken" });
    }

    let upper = ModuliPoset::new(fam.poset.nodes[1..].to_vec(), vec![fam.poset.edge("l1l2", "l1")?.clone()])?;
    let derived = family_derive(&upper, "l1l2", &fam.measures["l1l2"])?;
    println!("derived μ(l1) certified to π^{} mod T^{}", derived.measures["l1"].prec(), derived.measures["l1"].len());

    let x = psi_image(&psi[0], &fam)?;
    let mut with_j = fam.clone();
    let j = psi[0].element(&FiniteAbelianGroup::cyclic(2), &ring, fam.measures["l1"].len(), N)?;
    with_j.poset.nodes[1].j_generators.push(j);
    println!("ψ-image in J(l1): {}", j_membership(&with_j, "l1", &x)?.is_some());

    let ext = ring.with_p_power_roots(1)?;
    let zeta = ext.root_of_unity(3, ext.default_precision())?;
    let sign = Character::from_levels(&FiniteAbelianGroup::cyclic(2), &ring, &[1])?;
    let v = lp_eval(&fam, "l1", &sign, &zeta)?;
    println!("L(sign·ζ_3) at l1 = {}", v.value);
    let datum = fam.poset.node("l1")?.frobenius_of("l2")?;
    println!("with the Euler factor at l2: {}", lp_imprimitive(&v.value, Some(datum), &sign, false)?);

    let triv = Character::trivial(&FiniteAbelianGroup::trivial(), &ring)?;
    let v0 = lp_eval(&fam, "(1)", &triv, &zeta)?;
    println!("L(ζ_3) at (1) = {} / {}", v0.value, v0.clearing_factor.unwrap());
    Ok(())
}
