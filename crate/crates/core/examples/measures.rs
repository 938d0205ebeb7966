//! Measures on Δ × Z_p: finite levels, χ-quotients, twisted evaluation and
//! pseudo-measures.
//!
//!     cargo run --example measures

use iwasawa::groups::{Character, FiniteAbelianGroup};
use iwasawa::measure::{pseudo_multiply, GammaContext, ProMeasure, PseudoMeasure};
use iwasawa::padic::{Ring, RingSpec};
use iwasawa::series::PowerSeries;

fn main() -> iwasawa::Result<()> {
    let ring = Ring::new(RingSpec::zp(3, 10))?;
    let delta = FiniteAbelianGroup::cyclic(2);
    let mu = ProMeasure::new(
        &delta,
        &GammaContext::default(),
        vec![PowerSeries::from_ints(&ring, &[1, 2, 0, 1], 16, 10), PowerSeries::from_ints(&ring, &[5, 0, 3], 16, 10)],
    )?;
    for n in 0..3 {
        let d = mu.level_reduce(n)?;
        println!("level {n}: {:?}", d.values().iter().map(|v| v.to_bigint()).collect::<Vec<_>>());
    }

    let sign = Character::from_levels(&delta, &ring, &[1])?;
    println!("sign part: {}", mu.chi_quotient(&sign)?);

    let ext = ring.with_p_power_roots(1)?;
    let zeta = ext.root_of_unity(3, ext.default_precision())?;
    let sign_ext = sign.embed(&ext)?;
    println!("∫ sign·ζ^x dμ = {}", mu.embed(&ext)?.twist_eval(&sign_ext, &zeta)?);

    // ν = (3 + T + 4T²)/T, paired with the augmentation ideal.
    let triv = FiniteAbelianGroup::trivial();
    let num = ProMeasure::scalar(&triv, &PowerSeries::from_ints(&ring, &[3, 1, 4], 16, 10));
    let nu = PseudoMeasure::new(num, PowerSeries::t(&ring, 16, 10))?;
    let alpha = ProMeasure::scalar(&triv, &PowerSeries::omega(&ring, 1, 16, 10)?);
    println!("ω_1·ν = {}", pseudo_multiply(&nu, &alpha)?.series()[0]);
    Ok(())
}
