//! Truncated power series O[[T]] / (π^N, T^M).
//!
//! A series of length M is handled through its polynomial representative of
//! degree < M: division by distinguished polynomials and reduction modulo ω_n
//! act on that representative.

mod order;
pub(crate) mod poly;
mod weierstrass;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::{Elem, Ring, ZpInt};

pub use order::{coprimality_certificate, distinguished_gcd, quotient_order, Coprimality, QuotientOrder, Witness};
pub use weierstrass::WeierstrassData;

#[derive(Clone)]
pub struct PowerSeries {
    ring: Ring,
    coeffs: Vec<Elem>,
    prec: u32,
}

impl PowerSeries {
    /// Pads or truncates `coeffs` to length `m`; all coefficients are brought to
    /// the smallest precision present.
    pub fn new(ring: &Ring, coeffs: Vec<Elem>, m: usize) -> Result<PowerSeries> {
        if m == 0 {
            return Err(Error::InvalidInput("series length must be positive".into()));
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::SpecMismatch);
        }
        let prec = coeffs.iter().map(|c| c.prec()).min().unwrap_or(ring.default_precision());
        Ok(PowerSeries::from_parts(ring, coeffs, m, prec))
    }

    pub(crate) fn from_parts(ring: &Ring, mut coeffs: Vec<Elem>, m: usize, prec: u32) -> PowerSeries {
        coeffs.truncate(m);
        for c in coeffs.iter_mut() {
            if c.prec() != prec {
                debug_assert!(c.prec() > prec, "coefficient below series precision");
                *c = c.cap_precision(prec);
            }
        }
        while coeffs.len() < m {
            coeffs.push(ring.zero(prec));
        }
        PowerSeries { ring: ring.clone(), coeffs, prec }
    }

    pub fn zero(ring: &Ring, m: usize, prec: u32) -> PowerSeries {
        PowerSeries::from_parts(ring, Vec::new(), m, prec)
    }

    pub fn one(ring: &Ring, m: usize, prec: u32) -> PowerSeries {
        PowerSeries::constant(&ring.one(prec), m)
    }

    pub fn constant(c: &Elem, m: usize) -> PowerSeries {
        PowerSeries::from_parts(c.ring(), vec![c.clone()], m, c.prec())
    }

    /// The variable T.
    pub fn t(ring: &Ring, m: usize, prec: u32) -> PowerSeries {
        PowerSeries::from_ints(ring, &[0, 1], m, prec)
    }

    pub fn from_ints(ring: &Ring, c: &[i64], m: usize, prec: u32) -> PowerSeries {
        let coeffs = c.iter().map(|&x| ring.int(x, prec)).collect();
        PowerSeries::from_parts(ring, coeffs, m, prec)
    }

    pub fn from_bigints(ring: &Ring, c: &[BigInt], m: usize, prec: u32) -> PowerSeries {
        let coeffs = c.iter().map(|x| ring.bigint(x, prec)).collect();
        PowerSeries::from_parts(ring, coeffs, m, prec)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Truncation length M.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, m: usize) -> PowerSeries {
        PowerSeries::from_parts(&self.ring, self.coeffs.clone(), m, self.prec)
    }

    pub fn cap_precision(&self, n: u32) -> PowerSeries {
        let n = n.min(self.prec);
        PowerSeries::from_parts(&self.ring, self.coeffs.clone(), self.len(), n)
    }

    /// Coefficients mapped into `target` (see [`Ring::embed`]).
    pub fn embed(&self, target: &Ring) -> Result<PowerSeries> {
        if *target == self.ring {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs.iter().map(|c| target.embed(c)).collect::<Result<Vec<_>>>()?;
        PowerSeries::new(target, coeffs, self.len())
    }

    fn check(&self, other: &PowerSeries) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let c = (0..m).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(PowerSeries::from_parts(&self.ring, c, m, self.prec.min(other.prec)))
    }

    pub fn checked_sub(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let c = (0..m).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Ok(PowerSeries::from_parts(&self.ring, c, m, self.prec.min(other.prec)))
    }

    pub fn checked_mul(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let prec = self.prec.min(other.prec);
        let a = poly::trimmed(&self.coeffs[..m]);
        let b = poly::trimmed(&other.coeffs[..m]);
        let mut c = poly::mul_trunc(&self.ring, a, b, m, prec);
        c.truncate(m);
        Ok(PowerSeries::from_parts(&self.ring, c, m, prec))
    }

    pub fn scale(&self, c: &Elem) -> PowerSeries {
        let prec = self.prec.min(c.prec());
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        PowerSeries::from_parts(&self.ring, coeffs, self.len(), prec)
    }

    /// Multiplies by T^k (shifting out the top coefficients).
    pub fn shift(&self, k: usize) -> PowerSeries {
        let m = self.len();
        let mut c = vec![self.ring.zero(self.prec); k.min(m)];
        c.extend(self.coeffs.iter().take(m.saturating_sub(k)).cloned());
        PowerSeries::from_parts(&self.ring, c, m, self.prec)
    }

    pub fn pow(&self, mut n: u64) -> PowerSeries {
        let mut acc = PowerSeries::one(&self.ring, self.len(), self.prec);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse in O[[T]] / T^M; requires a unit constant term.
    pub fn invert(&self) -> Result<PowerSeries> {
        let c0inv = self.coeffs[0].invert()?;
        let m = self.len();
        let mut inv: Vec<Elem> = Vec::with_capacity(m);
        inv.push(c0inv.clone());
        for k in 1..m {
            let mut s = self.ring.zero(self.prec);
            for j in 1..=k {
                s = &s + &(&self.coeffs[j] * &inv[k - j]);
            }
            inv.push(-&(&s * &c0inv));
        }
        Ok(PowerSeries::from_parts(&self.ring, inv, m, self.prec))
    }

    /// Σ f_i x^i for x in the maximal ideal of the coefficient ring or of a ring
    /// it embeds into. Result precision is min(N, prec(x), M·ord(x)).
    pub fn eval_at(&self, x: &Elem) -> Result<Elem> {
        let o = match x.ord() {
            Some(0) => return Err(Error::NotInMaximalIdeal),
            Some(o) => o,
            None => x.prec(),
        };
        let target = x.ring();
        let f = self.embed(target)?;
        let mut acc = target.zero(f.prec);
        for c in f.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        let bound = (self.len() as u64 * o as u64).min(u32::MAX as u64) as u32;
        Ok(acc.cap_precision(bound))
    }

    /// Composition f(g(T)) for g with zero constant term.
    pub fn compose(&self, g: &PowerSeries) -> Result<PowerSeries> {
        self.check(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(Error::NotInMaximalIdeal);
        }
        let m = self.len().min(g.len());
        let g = g.truncate(m);
        let mut acc = PowerSeries::zero(&self.ring, m, self.prec.min(g.prec));
        for c in self.coeffs[..m].iter().rev() {
            acc = &(&acc * &g) + &PowerSeries::constant(c, m);
        }
        Ok(acc)
    }

    /// (1+T)^α modulo (π^N, T^M), by the base-p digits of α.
    pub fn binomial_power(ring: &Ring, alpha: &ZpInt, m: usize, prec: u32) -> Result<PowerSeries> {
        if let ZpInt::Int(a) = alpha {
            if *a >= 0 {
                return Ok(binomial_exact(ring, *a as u64, m, prec));
            }
        }
        let p = ring.p();
        let e = ring.ramification() as u32;
        let mut extra = 0u32;
        let mut reach = 1u64;
        while reach * p <= m.saturating_sub(1) as u64 {
            reach *= p;
            extra += 1;
        }
        let k = prec.div_ceil(e) + extra;
        let digits = alpha.digits(p, k)?;
        let mut acc = PowerSeries::one(ring, m, prec);
        let mut base = PowerSeries::from_ints(ring, &[1, 1], m, prec);
        for (i, &d) in digits.iter().enumerate() {
            if d != 0 {
                acc = &acc * &base.pow(d);
            }
            if i + 1 < digits.len() {
                base = base.pow(p);
            }
        }
        Ok(acc)
    }

    /// ω_n = (1+T)^{p^n} - 1.
    pub fn omega(ring: &Ring, n: u32, m: usize, prec: u32) -> Result<PowerSeries> {
        let pn = ring.p().checked_pow(n).filter(|&v| v <= m as u64);
        let pn = pn.ok_or(Error::TruncationTooSmall {
            need: ring.p().saturating_pow(n) as usize,
            have: m,
        })?;
        let mut w = binomial_exact(ring, pn, m, prec);
        w.coeffs[0] = ring.zero(prec);
        Ok(w)
    }

    /// Weierstrass preparation with the least-index convention for λ.
    pub fn weierstrass_prepare(&self) -> Result<WeierstrassData> {
        weierstrass::prepare(self, self.len())
    }

    /// As [`PowerSeries::weierstrass_prepare`], failing with `LambdaOverflow`
    /// when λ is not below `bound`.
    pub fn weierstrass_prepare_bounded(&self, bound: usize) -> Result<WeierstrassData> {
        weierstrass::prepare(self, bound.min(self.len()))
    }

    /// The quotient q with self = d·q, via the Weierstrass data of d = π^m·P·U.
    /// Fails with `NotDivisible` when the remainder does not vanish at precision.
    ///
    /// Only self mod T^M is known. When P = T^λ the quotient is exact to degree
    /// M − λ. Otherwise T^λ ≡ (terms of order ≥ v) mod P, so the unknown tail
    /// moves the remainder only modulo π^{⌊M/λ⌋v}, and the quotient's coefficient
    /// of T^j modulo π^{v·⌊(M−λ−j)/λ⌋}; the result is cut to where that error
    /// is below its precision.
    pub fn div_exact(&self, d: &PowerSeries) -> Result<PowerSeries> {
        self.check(d)?;
        let w = d.weierstrass_prepare()?;
        let m = w.mu_digits;
        let lam = w.lambda;
        if self.coeffs.iter().any(|c| c.ord().is_some_and(|o| o < m)) {
            return Err(Error::NotDivisible(format!("dividend not divisible by uniformizer^{m}")));
        }
        let big_m = self.len();
        let mut prec = (self.prec - m).min(w.certified_precision);
        let mut len = big_m.saturating_sub(lam);
        let v = w.poly[..lam].iter().filter_map(|c| c.ord()).min();
        if let (Some(v), true) = (v, lam > 0) {
            let blocks = (big_m - lam) / (2 * lam);
            prec = prec.min(blocks as u32 * v);
            len = big_m - lam - lam * prec.div_ceil(v) as usize;
        }
        if prec == 0 || len == 0 {
            return Err(Error::PrecisionExhausted(format!(
                "division by a distinguished part of degree {lam} leaves nothing at truncation {big_m}"
            )));
        }
        let h = self.coeffs.iter().map(|c| Ok(c.div_pi_pow(m)?.cap_precision(prec))).collect::<Result<Vec<_>>>()?;
        let (q, r) = poly::divrem_monic(&self.ring, poly::trimmed(&h), &w.poly, prec);
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible("nonzero remainder by the distinguished part".into()));
        }
        let q = PowerSeries::from_parts(&self.ring, q, len, prec);
        Ok(&q * &w.unit.cap_precision(prec).truncate(len).invert()?)
    }

    /// Polynomial representative with trailing zeros removed.
    pub fn as_poly(&self) -> Vec<Elem> {
        poly::trimmed(&self.coeffs).to_vec()
    }
}

/// (1+T)^a for a nonnegative integer a, from exact binomial coefficients.
fn binomial_exact(ring: &Ring, a: u64, m: usize, prec: u32) -> PowerSeries {
    let mut c = Vec::with_capacity(m);
    let mut b = BigInt::one();
    for i in 0..m as u64 {
        if i > a {
            break;
        }
        c.push(ring.bigint(&b, prec));
        b = b * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    PowerSeries::from_parts(ring, c, m, prec)
}

impl PartialEq for PowerSeries {
    fn eq(&self, other: &PowerSeries) -> bool {
        self.ring == other.ring
            && self.len() == other.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees(b))
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = if self.ring.ramification() == 1 && self.ring.residue_degree() == 1 {
                c.to_bigint().to_string()
            } else {
                format!("({c})")
            };
            terms.push(match i {
                0 => s,
                1 => format!("{s}*T"),
                _ => format!("{s}*T^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(pi^{}, T^{})", terms.join(" + "), self.prec, self.len())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a PowerSeries> for &'a PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: &'a PowerSeries) -> PowerSeries {
                self.$checked(rhs).expect("series over different rings")
            }
        }
        impl $tr<PowerSeries> for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: PowerSeries) -> PowerSeries {
                self.$checked(&rhs).expect("series over different rings")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        let c = self.coeffs.iter().map(|x| -x).collect();
        PowerSeries::from_parts(&self.ring, c, self.len(), self.prec)
    }
}

impl Neg for PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        -&self
    }
}
