use crate::error::{Error, Result};
use crate::padic::Elem;

use super::poly;
use super::PowerSeries;

/// f = π^μ · U · P with P distinguished of degree λ and U a unit.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    /// μ in π-adic digits; μ = mu_digits / e in the normalisation v(p) = 1.
    pub mu_digits: u32,
    pub ramification: u32,
    pub lambda: usize,
    /// Monic, little-endian, length λ+1.
    pub poly: Vec<Elem>,
    pub unit: PowerSeries,
    pub certified_precision: u32,
}

impl WeierstrassData {
    /// μ as a reduced fraction.
    pub fn mu(&self) -> (u32, u32) {
        let g = num_integer::gcd(self.mu_digits, self.ramification).max(1);
        (self.mu_digits / g, self.ramification / g)
    }

    /// P as a series of the same length as the input.
    pub fn distinguished(&self) -> PowerSeries {
        let ring = self.unit.ring();
        PowerSeries::from_parts(ring, self.poly.clone(), self.unit.len(), self.certified_precision)
    }

    /// π^μ · U · P.
    pub fn reconstruct(&self) -> PowerSeries {
        let up = &self.unit * &self.distinguished();
        let ring = up.ring().clone();
        let prec = self.certified_precision + self.mu_digits;
        let c = up.coeffs().iter().map(|x| x.mul_pi_pow(self.mu_digits)).collect();
        PowerSeries::from_parts(&ring, c, up.len(), prec)
    }

    /// Whether every non-leading coefficient of P lies in the maximal ideal.
    pub fn is_distinguished(&self) -> bool {
        self.poly.last().is_some_and(|c| c.agrees(&c.ring().one(c.prec())))
            && self.poly[..self.lambda].iter().all(|c| !c.is_unit())
    }
}

pub(super) fn prepare(f: &PowerSeries, bound: usize) -> Result<WeierstrassData> {
    let ring = f.ring().clone();
    let m = f
        .coeffs()
        .iter()
        .filter_map(|c| c.ord())
        .min()
        .ok_or_else(|| Error::PrecisionExhausted("series vanishes at precision".into()))?;
    let n = f.prec() - m;
    let g: Vec<Elem> = f.coeffs().iter().map(|c| c.div_pi_pow(m)).collect::<Result<_>>()?;
    let lambda = g.iter().position(|c| c.is_unit()).expect("minimal order is attained");
    if lambda >= bound {
        return Err(Error::LambdaOverflow { tdeg: bound });
    }
    let g = poly::trimmed(&g).to_vec();
    let e = ring.ramification() as u32;
    if lambda == 0 {
        return Ok(WeierstrassData {
            mu_digits: m,
            ramification: e,
            lambda,
            poly: vec![ring.one(n)],
            unit: PowerSeries::from_parts(&ring, g, f.len(), n),
            certified_precision: n,
        });
    }

    let mut p: Vec<Elem> = vec![ring.zero(n); lambda];
    p.push(ring.one(n));
    let (mut q, mut r) = poly::divrem_monic(&ring, &g, &p, n);
    let qs = PowerSeries::from_parts(&ring, q.clone(), lambda, n);
    let mut qinv = qs.invert()?.coeffs().to_vec();
    let two = ring.int(2, n);
    let mut converged = false;
    for _ in 0..(2 * (32 - n.leading_zeros()) + 8) {
        if r.iter().all(|c| c.is_zero()) {
            converged = true;
            break;
        }
        let delta = poly::rem_monic(&ring, &poly::mul(&ring, &qinv, &r, n), &p, n);
        for (pi, d) in p.iter_mut().zip(delta) {
            *pi = &*pi + &d;
        }
        (q, r) = poly::divrem_monic(&ring, &g, &p, n);
        let qq = poly::rem_monic(&ring, &poly::mul(&ring, &q, &qinv, n), &p, n);
        let mut corr: Vec<Elem> = qq.iter().map(|c| -c).collect();
        corr[0] = &corr[0] + &two;
        qinv = poly::rem_monic(&ring, &poly::mul(&ring, &qinv, &corr, n), &p, n);
    }
    if !converged {
        return Err(Error::PrecisionExhausted("preparation iteration did not converge".into()));
    }
    Ok(WeierstrassData {
        mu_digits: m,
        ramification: e,
        lambda,
        poly: p,
        unit: PowerSeries::from_parts(&ring, q, f.len(), n),
        certified_precision: n,
    })
}
