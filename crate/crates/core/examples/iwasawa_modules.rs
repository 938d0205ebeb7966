//! Characteristic ideals of finitely presented Λ[Δ]-modules, χ-parts and
//! finiteness of coinvariants.
//!
//!     cargo run --example iwasawa_modules

use iwasawa::groups::FiniteAbelianGroup;
use iwasawa::iwmod::{char_ideal, chipart_verify, finiteness_certificate, group_ring_entry, CharIdealGen, ModulePresentation};
use iwasawa::padic::{Ring, RingSpec};
use iwasawa::series::PowerSeries;

fn main() -> iwasawa::Result<()> {
    let z3 = Ring::new(RingSpec::zp(3, 12))?;
    let s = |c: &[i64]| PowerSeries::from_ints(&z3, c, 16, 12);
    let pres = ModulePresentation::over_lambda(vec![vec![s(&[-3, 1]), s(&[0])], vec![s(&[1]), s(&[9, 0, 1])]])?;
    let c = char_ideal(&pres)?;
    println!("Char = π^{:?}·({})", c.mu(), c.generator());

    // Over Z_5[Z/2]: one relation whose χ-parts are T − 2 and T + 6.
    let z5 = Ring::new(RingSpec::zp(5, 10))?;
    let d = FiniteAbelianGroup::cyclic(2);
    let entry = group_ring_entry(&d, vec![PowerSeries::from_ints(&z5, &[-4, 1], 16, 10), PowerSeries::from_ints(&z5, &[2, 1], 16, 10)])?;
    let m = ModulePresentation::new(&d, vec![vec![entry]])?;
    let rep = chipart_verify(&m)?;
    for (levels, g) in &rep.rhs {
        println!("χ{levels:?}: λ = {}, μ = {:?}", g.lambda(), g.mu());
    }
    println!("gap {:?}", rep.gap);

    let z2 = Ring::new(RingSpec::zp(2, 12))?;
    for coeffs in [&[-2i64, 1][..], &[0, 2, 1]] {
        let g = CharIdealGen::from_series(&PowerSeries::from_ints(&z2, coeffs, 16, 12))?;
        println!("{coeffs:?} at n = 2: {:?}", finiteness_certificate(&g, 2)?);
    }
    Ok(())
}
