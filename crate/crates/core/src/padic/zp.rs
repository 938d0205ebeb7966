use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A p-adic integer given exactly (an integer or a fraction with unit
/// denominator) or by a finite list of base-p digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZpInt {
    Int(i64),
    Ratio { num: i64, den: u64 },
    Digits { digits: Vec<u64> },
}

impl ZpInt {
    /// Number of known p-adic digits, `None` when exact.
    pub fn known_digits(&self) -> Option<u32> {
        match self {
            ZpInt::Digits { digits } => Some(digits.len() as u32),
            _ => None,
        }
    }

    /// Representative in [0, p^k).
    pub fn residue(&self, p: u64, k: u32) -> Result<BigInt> {
        let m = num_traits::pow(BigInt::from(p), k as usize);
        match self {
            ZpInt::Int(n) => Ok(BigInt::from(*n).mod_floor(&m)),
            ZpInt::Ratio { num, den } => {
                if *den == 0 || den % p == 0 {
                    return Err(Error::InvalidInput(format!("denominator {den} is not a p-adic unit")));
                }
                if m.is_one() {
                    return Ok(BigInt::zero());
                }
                let d = BigInt::from(*den);
                let g = d.extended_gcd(&m);
                Ok((BigInt::from(*num) * g.x).mod_floor(&m))
            }
            ZpInt::Digits { digits } => {
                if (digits.len() as u32) < k {
                    return Err(Error::InsufficientExponentPrecision { need: k, have: digits.len() as u32 });
                }
                let mut x = BigInt::zero();
                for &d in digits[..k as usize].iter().rev() {
                    x = x * p + d;
                }
                Ok(x)
            }
        }
    }

    /// First k base-p digits.
    pub fn digits(&self, p: u64, k: u32) -> Result<Vec<u64>> {
        Ok(Self::digits_of_int(&self.residue(p, k)?, p, k))
    }

    fn digits_of_int(x: &BigInt, p: u64, k: u32) -> Vec<u64> {
        let mut x = x.clone();
        let pb = BigInt::from(p);
        let mut out = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (q, r) = x.div_rem(&pb);
            out.push(r.to_u64().unwrap());
            x = q;
        }
        out
    }

    pub fn neg(&self, p: u64) -> ZpInt {
        match self {
            ZpInt::Int(n) => ZpInt::Int(-n),
            ZpInt::Ratio { num, den } => ZpInt::Ratio { num: -num, den: *den },
            ZpInt::Digits { digits } => {
                let k = digits.len() as u32;
                let m = num_traits::pow(BigInt::from(p), k as usize);
                let x = (-self.residue(p, k).expect("all digits known")).mod_floor(&m);
                ZpInt::Digits { digits: Self::digits_of_int(&x, p, k) }
            }
        }
    }

    /// True when the value is divisible by p (needs one known digit).
    pub fn divisible_by_p(&self, p: u64) -> Result<bool> {
        Ok(self.residue(p, 1)?.is_zero())
    }

    /// Sum, exact when both are exact and small, otherwise as digits.
    pub fn add(&self, other: &ZpInt, p: u64) -> Result<ZpInt> {
        use ZpInt::*;
        let frac = |z: &ZpInt| match z {
            Int(n) => Some((*n as i128, 1i128)),
            Ratio { num, den } => Some((*num as i128, *den as i128)),
            Digits { .. } => None,
        };
        if let (Some((a, b)), Some((c, d))) = (frac(self), frac(other)) {
            let num = a * d + c * b;
            let den = b * d;
            let g = num.gcd(&den).max(1);
            let (num, den) = (num / g, den / g);
            if let (Ok(num), Ok(den)) = (i64::try_from(num), u64::try_from(den)) {
                return Ok(if den == 1 { Int(num) } else { Ratio { num, den } });
            }
        }
        let k = match (self.known_digits(), other.known_digits()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 40,
        };
        let m = num_traits::pow(BigInt::from(p), k as usize);
        let s = (self.residue(p, k)? + other.residue(p, k)?).mod_floor(&m);
        let digits = Self::digits_of_int(&s, p, k);
        Ok(Digits { digits })
    }
}

impl From<i64> for ZpInt {
    fn from(n: i64) -> ZpInt {
        ZpInt::Int(n)
    }
}
