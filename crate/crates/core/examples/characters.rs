//! Characters of a finite abelian group and their idempotents.
//!
//!     cargo run --example characters

use iwasawa::dist::convolve;
use iwasawa::groups::{idempotent, ring_for_order, Character, FiniteAbelianGroup, GroupMorphism};
use iwasawa::padic::{Ring, RingSpec};

fn main() -> iwasawa::Result<()> {
    let g = FiniteAbelianGroup::new(vec![2, 3])?;
    // Z_5 has no cube roots of unity, so start from Z_25 = Z_5[√2].
    let base = Ring::new(RingSpec::unramified(5, vec![-2, 0, 1], 8))?;
    let ring = ring_for_order(&base, g.exponent())?;
    println!("Z/2 × Z/3 over a ring with residue size {}", ring.residue_size());
    for chi in Character::all(&g, &ring)? {
        let values: Vec<String> = g.elements().iter().map(|x| chi.eval(x).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("χ with exponents {:?}, order {}: {}", chi.exponents(), chi.order(), values.join(", "));
        let e = idempotent(&chi)?;
        assert_eq!(convolve(&e, &e)?, e);
    }

    let phi = GroupMorphism::new(FiniteAbelianGroup::cyclic(6), g.clone(), vec![vec![1, 1]])?;
    let chi = Character::from_levels(&g, &ring, &[1, 1])?;
    println!("pullback to Z/6 has order {}", chi.pullback(&phi)?.order());
    Ok(())
}
