use crate::error::{Error, Result};
use crate::padic::{cyclotomic_shifted, Elem, Ring};

use super::poly;
use super::PowerSeries;

/// Size of Λ/(f, ω_n), as an exponent of the residue-field size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientOrder {
    Finite { exponent: u64 },
    /// f vanishes at every primitive root of unity of this order.
    NotFinite { root_order: u64 },
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Both inputs are divisible by π.
    Uniformizer,
    /// A common distinguished factor of positive degree.
    Polynomial(Vec<Elem>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coprimality {
    Certified { exponent: u64 },
    NotCoprime(Witness),
    Inconclusive(String),
}

fn exact_poly(ring: &Ring, c: &[num_bigint::BigInt], prec: u32) -> Vec<Elem> {
    c.iter().map(|x| ring.bigint(x, prec)).collect()
}

/// #Λ/(f, ω_n) = q^e with e = μ·p^n + ord det(ω_n acting on O[T]/(P)).
pub fn quotient_order(f: &PowerSeries, n: u32) -> Result<QuotientOrder> {
    let ring = f.ring();
    let p = ring.p();
    let pn = p
        .checked_pow(n)
        .filter(|&v| v <= f.len() as u64)
        .ok_or(Error::TruncationTooSmall { need: p.saturating_pow(n) as usize, have: f.len() })?;
    let w = f.weierstrass_prepare()?;
    let base = w.mu_digits as u64 * pn;
    if w.lambda == 0 {
        return Ok(QuotientOrder::Finite { exponent: base });
    }
    let prec = w.certified_precision;
    let omega = PowerSeries::omega(ring, n, pn as usize + 1, prec)?;
    let mut omega = omega.coeffs().to_vec();
    omega[0] = ring.zero(prec);
    let mat = poly::mult_matrix(ring, &omega, &w.poly, prec);
    if let Some(o) = poly::det_ord(mat) {
        return Ok(QuotientOrder::Finite { exponent: base + o as u64 });
    }
    for j in 0..=n {
        let phi = exact_poly(ring, &cyclotomic_shifted(p, j), prec);
        let r = poly::rem_monic(ring, &w.poly, &phi, prec);
        if r.iter().all(|c| c.is_zero()) {
            return Ok(QuotientOrder::NotFinite { root_order: p.pow(j) });
        }
    }
    Ok(QuotientOrder::Inconclusive(format!(
        "determinant vanishes at precision {prec} without a cyclotomic factor"
    )))
}

/// Decides whether Λ/(f, g) is finite.
pub fn coprimality_certificate(f: &PowerSeries, g: &PowerSeries) -> Result<Coprimality> {
    if f.ring() != g.ring() {
        return Err(Error::SpecMismatch);
    }
    let wf = f.weierstrass_prepare()?;
    let wg = g.weierstrass_prepare()?;
    if wf.mu_digits > 0 && wg.mu_digits > 0 {
        return Ok(Coprimality::NotCoprime(Witness::Uniformizer));
    }
    // Work modulo the distinguished part of the factor without π-power.
    let (modw, other) = if wf.mu_digits == 0 { (&wf, &wg) } else { (&wg, &wf) };
    let ring = f.ring();
    let prec = modw.certified_precision.min(other.certified_precision);
    let base = other.mu_digits as u64 * modw.lambda as u64;
    if modw.lambda == 0 {
        return Ok(Coprimality::Certified { exponent: 0 });
    }
    let mat = poly::mult_matrix(ring, &other.poly, &modw.poly, prec);
    if let Some(o) = poly::det_ord(mat) {
        return Ok(Coprimality::Certified { exponent: base + o as u64 });
    }
    let d = distinguished_gcd(&wf.poly, &wg.poly)?;
    if d.len() > 1 {
        return Ok(Coprimality::NotCoprime(Witness::Polynomial(d)));
    }
    Ok(Coprimality::Inconclusive(format!("resultant vanishes at precision {prec}")))
}

/// Monic gcd of two distinguished polynomials, by Euclid's algorithm where each
/// remainder is replaced by the distinguished part of its primitive part.
pub fn distinguished_gcd(a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
    let ring = a[0].ring().clone();
    let (mut a, mut b) = if a.len() >= b.len() { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
    loop {
        let prec = a.iter().chain(&b).map(|c| c.prec()).min().unwrap();
        if b.len() <= 1 {
            return Ok(vec![ring.one(prec)]);
        }
        let r = poly::rem_monic(&ring, &a, &b, prec);
        let r = poly::trimmed(&r).to_vec();
        if r.is_empty() {
            return Ok(b);
        }
        let len = r.len();
        let w = PowerSeries::from_parts(&ring, r, len, prec).weierstrass_prepare()?;
        if w.lambda == 0 {
            return Ok(vec![ring.one(prec)]);
        }
        a = b;
        b = w.poly;
    }
}
