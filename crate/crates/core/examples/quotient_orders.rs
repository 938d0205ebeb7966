//! Orders of Λ/(f, ω_n) and coprimality certificates.
//!
//!     cargo run --example quotient_orders

use iwasawa::padic::{Ring, RingSpec};
use iwasawa::series::{coprimality_certificate, quotient_order, PowerSeries};

fn main() -> iwasawa::Result<()> {
    let z2 = Ring::new(RingSpec::zp(2, 16))?;
    let f = PowerSeries::from_ints(&z2, &[-2, 1], 32, 16);
    for n in 0..4 {
        println!("#Λ/(T − 2, ω_{n}): {:?}", quotient_order(&f, n)?);
    }

    let omega1 = PowerSeries::omega(&z2, 1, 32, 16)?;
    println!("ω_1 = {omega1}");
    println!("#Λ/(ω_1, ω_2): {:?}", quotient_order(&omega1, 2)?);
    println!("(T − 2, ω_1): {:?}", coprimality_certificate(&f, &omega1)?);

    let z3 = Ring::new(RingSpec::zp(3, 12))?;
    let a = PowerSeries::from_ints(&z3, &[0, 3, 1], 16, 12);
    let b = PowerSeries::from_ints(&z3, &[0, 1], 16, 12);
    println!("(T² + 3T, T): {:?}", coprimality_certificate(&a, &b)?);
    Ok(())
}
