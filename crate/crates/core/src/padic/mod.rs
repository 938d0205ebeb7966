//! Complete local coefficient rings Z_q[π]/(E) with explicit precision.

mod elem;
mod residue;
mod ring;
mod zp;

pub use elem::{Elem, Valuation};
pub use residue::ResidueField;
pub use ring::{cyclotomic_shifted, Ring, RingSpec, MAX_ABSOLUTE_DEGREE};
pub use zp::ZpInt;
