use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ring::Ring;
use crate::error::{Error, Result};

/// Valuation normalised so that v(p) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// `digits / ramification`, where `digits` is the π-adic order.
    Finite { digits: u32, ramification: u32 },
    /// The element vanishes at its precision.
    BelowPrecision,
}

impl Valuation {
    /// Reduced fraction (numerator, denominator).
    pub fn as_ratio(&self) -> Option<(u32, u32)> {
        match *self {
            Valuation::Finite { digits, ramification } => {
                let g = digits.gcd(&ramification).max(1);
                Some((digits / g, ramification / g))
            }
            Valuation::BelowPrecision => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_ratio() {
            Some((n, 1)) => write!(f, "{n}"),
            Some((n, d)) => write!(f, "{n}/{d}"),
            None => write!(f, "BelowPrecision"),
        }
    }
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn vp(x: &BigInt, p: &BigInt) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    if *p == BigInt::from(2) {
        return x.trailing_zeros().unwrap_or(0) as u32;
    }
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// An element of a coefficient ring, known modulo π^prec.
///
/// Coordinates are stored in the basis x^i π^j at index `j*f + i`; coordinate
/// j is kept reduced into [0, p^{ceil((prec-j)/e)}).
#[derive(Clone)]
pub struct Elem {
    pub(crate) ring: Ring,
    pub(crate) coords: Vec<BigInt>,
    pub(crate) prec: u32,
}

impl Elem {
    pub(crate) fn from_raw(ring: &Ring, mut coords: Vec<BigInt>, prec: u32) -> Elem {
        let f = ring.0.f;
        for (idx, c) in coords.iter_mut().enumerate() {
            let k = ring.coord_digits(idx / f, prec);
            if k == 0 {
                if !c.is_zero() {
                    *c = BigInt::zero();
                }
            } else {
                let m = ring.pow_p(k);
                if c.is_negative() || *c >= *m {
                    *c = c.mod_floor(&m);
                }
            }
        }
        Elem { ring: ring.clone(), coords, prec }
    }

    /// Builds an element from integer coordinates (index `j*f + i`).
    pub fn from_coords(ring: &Ring, coords: Vec<BigInt>, prec: u32) -> Result<Elem> {
        if coords.len() != ring.0.e * ring.0.f {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                ring.0.e * ring.0.f,
                coords.len()
            )));
        }
        Ok(Elem::from_raw(ring, coords, prec))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// The integer representative when the ring is Z_p (or the x^0 π^0 coordinate otherwise).
    pub fn to_bigint(&self) -> BigInt {
        self.coords[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// π-adic order, `None` when the element vanishes at precision.
    pub fn ord(&self) -> Option<u32> {
        let f = self.ring.0.f;
        let e = self.ring.0.e as u32;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| e * vp(c, &self.ring.0.pb) + (idx / f) as u32)
            .min()
    }

    pub fn valuation(&self) -> Valuation {
        match self.ord() {
            Some(d) => Valuation::Finite { digits: d, ramification: self.ring.0.e as u32 },
            None => Valuation::BelowPrecision,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.ord() == Some(0)
    }

    /// Residue class as a vector over F_p in the x-basis.
    pub fn residue(&self) -> Vec<u64> {
        let p = &self.ring.0.pb;
        self.coords[..self.ring.0.f]
            .iter()
            .map(|c| c.mod_floor(p).to_u64().unwrap())
            .collect()
    }

    pub fn reduce_precision(&self, n: u32) -> Result<Elem> {
        if n > self.prec {
            return Err(Error::PrecisionIncrease { have: self.prec, want: n });
        }
        Ok(Elem::from_raw(&self.ring, self.coords.clone(), n))
    }

    /// Lowers precision to `n` if above it; never raises.
    pub fn cap_precision(&self, n: u32) -> Elem {
        if n >= self.prec {
            self.clone()
        } else {
            Elem::from_raw(&self.ring, self.coords.clone(), n)
        }
    }

    fn check(&self, other: &Elem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Elem::from_raw(&self.ring, coords, self.prec.min(other.prec)))
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Elem::from_raw(&self.ring, coords, self.prec.min(other.prec)))
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero(prec));
        }
        let coords = mul_raw(&self.ring, &self.coords, &other.coords);
        Ok(Elem::from_raw(&self.ring, coords, prec))
    }

    /// Product with absolute precision min(N_a + ord b, N_b + ord a), which is
    /// what the representatives actually determine.
    pub fn mul_sharp(&self, other: &Elem) -> Elem {
        self.check(other).expect("operands from different rings");
        let oa = self.ord().unwrap_or(self.prec);
        let ob = other.ord().unwrap_or(other.prec);
        let prec = (self.prec + ob).min(other.prec + oa);
        let coords = mul_raw(&self.ring, &self.coords, &other.coords);
        Elem::from_raw(&self.ring, coords, prec)
    }

    /// Multiplies by π^k; precision rises by k.
    pub fn mul_pi_pow(&self, k: u32) -> Elem {
        if k == 0 {
            return self.clone();
        }
        let n = self.prec + k;
        let pik = self.ring.uniformizer(n).pow(k as u64);
        let coords = mul_raw(&self.ring, &self.coords, &pik.coords);
        Elem::from_raw(&self.ring, coords, n)
    }

    pub fn scale(&self, n: &BigInt) -> Elem {
        let coords = self.coords.iter().map(|c| c * n).collect();
        Elem::from_raw(&self.ring, coords, self.prec)
    }

    pub fn pow(&self, mut n: u64) -> Elem {
        let mut acc = self.ring.one(self.prec);
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

    /// Multiplicative inverse by Newton iteration from the residue inverse.
    pub fn invert(&self) -> Result<Elem> {
        match self.ord() {
            None => return Err(Error::PrecisionExhausted("inverting an element that vanishes at precision".into())),
            Some(0) => {}
            Some(_) => return Err(Error::NotUnit),
        }
        let field = self.ring.residue_field();
        let r = field.inv(&self.residue()).ok_or(Error::NotUnit)?;
        let one = self.ring.one(self.prec);
        let two = self.ring.int(2, self.prec);
        let mut y = self.ring.lift_residue(&r, self.prec);
        for _ in 0..64 {
            let ay = self * &y;
            if ay.agrees(&one) {
                return Ok(y);
            }
            y = &y * &(&two - &ay);
        }
        Err(Error::PrecisionExhausted("Newton iteration did not converge".into()))
    }

    /// Divides by π once; precision drops by one.
    pub fn div_pi(&self) -> Result<Elem> {
        match self.ord() {
            Some(0) => return Err(Error::NotDivisible("element is a unit".into())),
            None if self.prec == 0 => return Ok(self.clone()),
            _ => {}
        }
        let ring = &self.ring;
        let (e, f) = (ring.0.e, ring.0.f);
        let n = self.prec - 1;
        let mut shifted = vec![BigInt::zero(); e * f];
        for j in 1..e {
            for i in 0..f {
                shifted[(j - 1) * f + i] = self.coords[j * f + i].clone();
            }
        }
        let mut c0 = vec![BigInt::zero(); e * f];
        for (c, x) in c0.iter_mut().zip(&self.coords[..f]) {
            *c = x / &ring.0.pb;
        }
        let c0 = Elem::from_raw(ring, c0, n);
        let ppi = Elem::from_raw(ring, ring.p_over_pi_coords(n).into_owned(), n);
        Ok(&Elem::from_raw(ring, shifted, n) + &(&c0 * &ppi))
    }

    /// Divides by π^k; fails when the order is below k.
    pub fn div_pi_pow(&self, k: u32) -> Result<Elem> {
        if let Some(o) = self.ord() {
            if o < k {
                return Err(Error::NotDivisible(format!("order {o} below {k}")));
            }
        }
        if k > self.prec {
            return Ok(self.ring.zero(0));
        }
        let mut x = self.clone();
        for _ in 0..k {
            x = x.div_pi()?;
        }
        Ok(x)
    }

    /// Exact quotient self / other. Precision drops by ord(other).
    pub fn div_exact(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        let v = other
            .ord()
            .ok_or_else(|| Error::PrecisionExhausted("divisor vanishes at precision".into()))?;
        let a = self.div_pi_pow(v)?;
        let b = other.div_pi_pow(v)?;
        Ok(&a * &b.invert()?)
    }

    /// Teichmüller representative of this element's residue.
    pub fn teichmueller(&self) -> Result<Elem> {
        self.ring.teichmueller(&self.residue(), self.prec)
    }

    /// True when the two elements coincide at the smaller precision.
    pub fn agrees(&self, other: &Elem) -> bool {
        self.ring == other.ring && (self - other).is_zero()
    }

    /// Base-p digits of every coordinate, little-endian, without trailing zeros.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let p = &self.ring.0.pb;
        self.coords
            .iter()
            .map(|c| {
                let mut out = Vec::new();
                let mut x = c.clone();
                while !x.is_zero() {
                    let (q, r) = x.div_rem(p);
                    out.push(r.to_u64().unwrap());
                    x = q;
                }
                out
            })
            .collect()
    }

    /// Inverse of [`Elem::digits`]; rejects non-canonical digits.
    pub fn from_digits(ring: &Ring, digits: &[Vec<u64>], prec: u32) -> Result<Elem> {
        let p = ring.p();
        let f = ring.0.f;
        if digits.len() != ring.0.e * f {
            return Err(Error::SchemaViolation(format!(
                "coords: expected {} entries, got {}",
                ring.0.e * f,
                digits.len()
            )));
        }
        let mut coords = Vec::with_capacity(digits.len());
        for (idx, ds) in digits.iter().enumerate() {
            if let Some(d) = ds.iter().find(|&&d| d >= p) {
                return Err(Error::SchemaViolation(format!("coords[{idx}]: digit {d} >= p")));
            }
            if ds.last() == Some(&0) {
                return Err(Error::SchemaViolation(format!("coords[{idx}]: trailing zero digit")));
            }
            if ds.len() as u32 > ring.coord_digits(idx / f, prec) {
                return Err(Error::SchemaViolation(format!("coords[{idx}]: more digits than precision")));
            }
            let mut x = BigInt::zero();
            for &d in ds.iter().rev() {
                x = x * &ring.0.pb + BigInt::from(d);
            }
            coords.push(x);
        }
        Ok(Elem::from_raw(ring, coords, prec))
    }
}

/// Multiplication in Z_q = Z[x]/(unram), no reduction mod p.
fn zq_mul(ring: &Ring, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let f = ring.0.f;
    if f == 1 {
        return vec![&a[0] * &b[0]];
    }
    let mut r = vec![BigInt::zero(); 2 * f - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                r[i + j] += x * y;
            }
        }
    }
    for d in (f..2 * f - 1).rev() {
        let c = std::mem::take(&mut r[d]);
        if c.is_zero() {
            continue;
        }
        for t in 0..f {
            r[d - f + t] -= &c * &ring.0.unram[t];
        }
    }
    r.truncate(f);
    r
}

pub(crate) fn mul_raw(ring: &Ring, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (e, f) = (ring.0.e, ring.0.f);
    if e == 1 && f == 1 {
        return vec![&a[0] * &b[0]];
    }
    let block = |v: &[BigInt], j: usize| -> Vec<BigInt> { v[j * f..(j + 1) * f].to_vec() };
    let nz = |v: &[BigInt]| v.iter().any(|c| !c.is_zero());
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); f]; 2 * e - 1];
    for j1 in 0..e {
        let x = block(a, j1);
        if !nz(&x) {
            continue;
        }
        for j2 in 0..e {
            let y = block(b, j2);
            if !nz(&y) {
                continue;
            }
            for (s, v) in t[j1 + j2].iter_mut().zip(zq_mul(ring, &x, &y)) {
                *s += v;
            }
        }
    }
    // π^e = -(E_0 + ... + E_{e-1} π^{e-1})
    for j in (e..2 * e - 1).rev() {
        let c = std::mem::replace(&mut t[j], vec![BigInt::zero(); f]);
        if !nz(&c) {
            continue;
        }
        for k in 0..e {
            let prod = zq_mul(ring, &c, &ring.0.eis[k]);
            for (s, v) in t[j - e + k].iter_mut().zip(prod) {
                *s -= v;
            }
        }
    }
    t.truncate(e);
    t.into_iter().flatten().collect()
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, f) = (self.ring.0.e, self.ring.0.f);
        if e == 1 && f == 1 {
            return write!(fmt, "{} + O({}^{})", self.coords[0], self.ring.p(), self.prec);
        }
        let mut terms = Vec::new();
        for j in 0..e {
            for i in 0..f {
                let c = &self.coords[j * f + i];
                if c.is_zero() {
                    continue;
                }
                let mut t = c.to_string();
                if i > 0 {
                    t.push_str(&format!("*x^{i}"));
                }
                if j > 0 {
                    t.push_str(&format!("*pi^{j}"));
                }
                terms.push(t);
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(fmt, "{} + O(pi^{})", terms.join(" + "), self.prec)
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Elem) -> bool {
        self.agrees(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                self.$checked(rhs).expect("operands from different rings")
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                self.$checked(&rhs).expect("operands from different rings")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let coords = self.coords.iter().map(|c| -c).collect();
        Elem::from_raw(&self.ring, coords, self.prec)
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}
