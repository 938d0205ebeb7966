//! Finiteness of Γ_n-coinvariants for a character, decided from the measure at
//! its conductor and cross-checked against an auxiliary modulus.
//!
//!     cargo run --example finiteness_pipeline

#[path = "support/family.rs"]
mod family;

use family::{three_node, N};
use iwasawa::euler::{finiteness_pipeline, units_char_ideal, PipelineVerdict};
use iwasawa::groups::{Character, FiniteAbelianGroup};
use iwasawa::padic::{Ring, RingSpec};

fn report(name: &str, v: &PipelineVerdict) {
    match v {
        PipelineVerdict::Certified { values } => {
            let agree = values.iter().filter(|r| r.agree).count();
            println!("{name}: finite, routes agree at {agree} of {} roots", values.len());
        }
        other => println!("{name}: {other:?}"),
    }
}

fn main() -> iwasawa::Result<()> {
    let ring = Ring::new(RingSpec::zp(3, N))?;
    let fam = three_node(&ring);

    let sign = Character::from_levels(&FiniteAbelianGroup::cyclic(2), &ring, &[1])?;
    let g = units_char_ideal(&fam, &sign, "l1")?;
    println!("sign: λ = {}, μ = {:?}", g.lambda(), g.mu());
    for n in 0..3 {
        report(&format!("sign, n = {n}"), &finiteness_pipeline(&fam, &sign, "l1", n, "l2", "l1l2")?);
    }

    let triv = Character::trivial(&FiniteAbelianGroup::trivial(), &ring)?;
    report("trivial, n = 1", &finiteness_pipeline(&fam, &triv, "(1)", 1, "l1", "l1")?);
    report("trivial via l3", &finiteness_pipeline(&fam, &triv, "(1)", 1, "l3", "l1")?);
    Ok(())
}
