//! Arithmetic in Z_p, an unramified extension and a wildly ramified one.
//!
//!     cargo run --example padic_rings

use iwasawa::padic::{Ring, RingSpec};

fn main() -> iwasawa::Result<()> {
    let z5 = Ring::new(RingSpec::zp(5, 8))?;
    let x = z5.int(-7, 8);
    let y = z5.int(50, 8);
    println!("in Z_5: -7 = {x}");
    println!("v(50) = {:?}, 1/(-7) = {}", y.valuation().as_ratio(), x.invert()?);

    // Teichmüller lift of 2 and the fourth roots of unity it generates.
    let t = z5.teichmueller(&[2], 8)?;
    println!("ω(2) = {t}, ω(2)^4 = {}", t.pow(4));

    // Z_9 = Z_3[i]: residue field F_9 and its eighth roots of unity.
    let z9 = Ring::new(RingSpec::unramified(3, vec![1, 0, 1], 6))?;
    let zeta8 = z9.root_of_unity(8, 6)?;
    println!("Z_9: residue size {}, ζ_8^4 = {}", z9.residue_size(), zeta8.pow(4));

    // Z_2[√2] has e = 2, so v(π) = 1/2.
    let w = Ring::new(RingSpec { p: 2, unram: vec![0, 1], eisenstein: vec![vec![-2], vec![0], vec![1]], prec: 10 })?;
    let pi = w.uniformizer(10);
    println!("Z_2[√2]: e = {}, v(π) = {:?}, π² = {}", w.ramification(), pi.valuation().as_ratio(), pi.pow(2));

    // Adjoining p-power roots of unity to Z_3.
    let z3 = Ring::new(RingSpec::zp(3, 6))?;
    let ext = z3.with_p_power_roots(1)?;
    let zeta = ext.root_of_unity(3, 12)?;
    println!("Z_3[ζ_3]: e = {}, v(ζ_3 − 1) = {:?}", ext.ramification(), (&zeta - &ext.one(12)).valuation().as_ratio());
    Ok(())
}
