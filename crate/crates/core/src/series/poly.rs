//! Dense polynomials over a coefficient ring, as little-endian `Elem` vectors.

use crate::padic::{Elem, Ring};

/// Drops trailing coefficients that vanish at precision.
pub(crate) fn trimmed(a: &[Elem]) -> &[Elem] {
    let mut n = a.len();
    while n > 0 && a[n - 1].is_zero() {
        n -= 1;
    }
    &a[..n]
}

pub(crate) fn mul_trunc(ring: &Ring, a: &[Elem], b: &[Elem], m: usize, prec: u32) -> Vec<Elem> {
    let n = (a.len() + b.len()).saturating_sub(1).min(m);
    let mut out = vec![ring.zero(prec); n];
    for (i, x) in a.iter().enumerate() {
        if i >= n || x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

pub(crate) fn mul(ring: &Ring, a: &[Elem], b: &[Elem], prec: u32) -> Vec<Elem> {
    mul_trunc(ring, a, b, usize::MAX, prec)
}

/// Quotient and remainder by a monic divisor `b` (leading coefficient taken as 1).
pub(crate) fn divrem_monic(ring: &Ring, a: &[Elem], b: &[Elem], prec: u32) -> (Vec<Elem>, Vec<Elem>) {
    let d = b.len() - 1;
    let mut r: Vec<Elem> = a.to_vec();
    if r.len() <= d {
        r.resize(d, ring.zero(prec));
        return (Vec::new(), r);
    }
    let mut q = vec![ring.zero(prec); r.len() - d];
    for top in (d..r.len()).rev() {
        let c = r[top].clone();
        if c.is_zero() {
            continue;
        }
        let shift = top - d;
        for k in 0..d {
            if !b[k].is_zero() {
                r[shift + k] = &r[shift + k] - &(&c * &b[k]);
            }
        }
        r[top] = ring.zero(prec);
        q[shift] = c;
    }
    r.truncate(d);
    (q, r)
}

pub(crate) fn rem_monic(ring: &Ring, a: &[Elem], b: &[Elem], prec: u32) -> Vec<Elem> {
    divrem_monic(ring, a, b, prec).1
}

/// Matrix of multiplication by `f` on O[T]/(b), b monic of degree d, in the
/// basis 1, T, ..., T^{d-1}; column j is the image of T^j.
pub(crate) fn mult_matrix(ring: &Ring, f: &[Elem], b: &[Elem], prec: u32) -> Vec<Vec<Elem>> {
    let d = b.len() - 1;
    let mut col = rem_monic(ring, f, b, prec);
    let mut cols = Vec::with_capacity(d);
    for _ in 0..d {
        cols.push(col.clone());
        // multiply by T and reduce
        let mut next = vec![ring.zero(prec)];
        next.extend(col.iter().cloned());
        col = rem_monic(ring, &next, b, prec);
    }
    (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
}

/// π-adic order of a determinant, by elimination with pivots of least order.
/// `None` when the determinant vanishes at the available precision.
pub(crate) fn det_ord(mut a: Vec<Vec<Elem>>) -> Option<u32> {
    let n = a.len();
    let mut total = 0u32;
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Some(o) = x.ord() {
                    if best.is_none_or(|b| o < b.0) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let (o, pi, pj) = best?;
        total += o;
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        let prow: Vec<Elem> = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].div_exact(&pivot).expect("pivot has least order");
            for j in k + 1..n {
                let t = factor.mul_sharp(&prow[j]);
                row[j] = &row[j] - &t;
            }
            row[k] = pivot.ring().zero(pivot.prec());
        }
    }
    Some(total)
}
