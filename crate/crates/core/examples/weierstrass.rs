//! Weierstrass preparation f = π^μ·P·U and evaluation at points of the open disc.
//!
//!     cargo run --example weierstrass

use iwasawa::padic::{Ring, RingSpec};
use iwasawa::series::PowerSeries;

fn main() -> iwasawa::Result<()> {
    let z3 = Ring::new(RingSpec::zp(3, 10))?;
    // 9 + 3T + 9T^3 + 3T^4 = 3·(3 + T + 3T^3 + T^4)
    let f = PowerSeries::from_ints(&z3, &[9, 3, 0, 9, 3], 16, 10);
    let w = f.weierstrass_prepare()?;
    println!("f = {f}");
    println!("μ = {:?}, λ = {}, certified to π^{}", w.mu(), w.lambda, w.certified_precision);
    println!("P = {}", w.distinguished());
    println!("U = {}", w.unit);
    assert_eq!(w.reconstruct(), f);

    let g = PowerSeries::from_ints(&z3, &[-3, 0, 1], 16, 10);
    let prod = f.checked_mul(&g)?.weierstrass_prepare()?;
    println!("λ(f·g) = {} = {} + {}", prod.lambda, w.lambda, g.weierstrass_prepare()?.lambda);

    let x = z3.int(6, 10);
    println!("f(6) = {}", f.eval_at(&x)?);

    // The zero series has no preparation at any finite precision.
    match PowerSeries::zero(&z3, 16, 10).weierstrass_prepare() {
        Err(e) => println!("zero series: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
