//! Distributions on finite groups: pushforward, pullbacks and convolution.
//!
//!     cargo run --example distributions

use iwasawa::dist::{convolve, pullback_preimage, pullback_sharp, pushforward, Distribution};
use iwasawa::groups::{FiniteAbelianGroup, GroupMorphism};
use iwasawa::padic::{Ring, RingSpec};

fn main() -> iwasawa::Result<()> {
    let ring = Ring::new(RingSpec::zp(5, 6))?;
    let z4 = FiniteAbelianGroup::cyclic(4);
    let z2 = FiniteAbelianGroup::cyclic(2);
    let phi = GroupMorphism::new(z4.clone(), z2.clone(), vec![vec![1]])?;

    let mu = Distribution::new(&z4, (1..=4).map(|i| ring.int(i, 6)).collect())?;
    let pushed = pushforward(&phi, &mu)?;
    println!("μ = {:?}", mu.values().iter().map(|v| v.to_bigint()).collect::<Vec<_>>());
    println!("π_*μ = {:?}", pushed.values().iter().map(|v| v.to_bigint()).collect::<Vec<_>>());
    println!("total mass {} = {}", mu.total_mass().to_bigint(), pushed.total_mass().to_bigint());

    let back = pullback_sharp(&phi, &pushed)?;
    println!("π^♯π_*μ = {:?}", back.values().iter().map(|v| v.to_bigint()).collect::<Vec<_>>());
    println!("preimage of μ: {}", if pullback_preimage(&phi, &mu)?.is_some() { "exists" } else { "none" });
    println!("preimage of π^♯π_*μ: {}", if pullback_preimage(&phi, &back)?.is_some() { "exists" } else { "none" });

    let delta = Distribution::dirac(&z4, &[1], &ring, 6)?;
    let shifted = convolve(&mu, &delta)?;
    assert_eq!(shifted, mu.translate(&[1])?);
    println!("μ ∗ δ_1 = {:?}", shifted.values().iter().map(|v| v.to_bigint()).collect::<Vec<_>>());
    Ok(())
}
