//! The residue field F_q = F_p[x]/(m) of an unramified ring, with small dense
//! polynomial helpers over F_p.

/// Polynomial over F_p, little-endian, not necessarily trimmed.
type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y % p) % p;
        }
    }
    trim(&mut out);
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Remainder of `a` by a nonzero `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let shift = top - dm;
        for (k, &mk) in m.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - c * mk % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

/// Finite field F_p[x]/(m), elements stored as coefficient vectors of length f.
#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u64,
    modulus: Poly,
    f: usize,
}

impl ResidueField {
    /// `modulus` is monic of degree f with coefficients already reduced mod p.
    /// Returns `None` when it is reducible.
    pub fn new(p: u64, modulus: Vec<u64>) -> Option<ResidueField> {
        let f = modulus.len() - 1;
        let field = ResidueField { p, modulus, f };
        if field.irreducible() {
            Some(field)
        } else {
            None
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    // Rabin's test: x^{p^f} = x mod m and gcd(x^{p^{f/r}} - x, m) = 1 for primes r | f.
    fn irreducible(&self) -> bool {
        if self.f == 1 {
            return true;
        }
        let x = vec![0, 1];
        let frob = |k: usize| -> Poly {
            let mut y = x.clone();
            for _ in 0..k {
                y = self.poly_pow(&y, self.p);
            }
            y
        };
        let sub_x = |mut y: Poly| -> Poly {
            y.resize(y.len().max(2), 0);
            y[1] = (y[1] + self.p - 1) % self.p;
            trim(&mut y);
            y
        };
        if !sub_x(frob(self.f)).is_empty() {
            return false;
        }
        for r in prime_factors(self.f as u64) {
            let g = poly_gcd(&sub_x(frob(self.f / r as usize)), &self.modulus, self.p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    fn poly_pow(&self, a: &[u64], mut e: u64) -> Poly {
        let mut base = poly_rem(a, &self.modulus, self.p);
        let mut acc: Poly = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, self.p), &self.modulus, self.p);
            }
            base = poly_rem(&poly_mul(&base, &base, self.p), &self.modulus, self.p);
            e >>= 1;
        }
        acc
    }

    fn pad(&self, mut a: Poly) -> Vec<u64> {
        a.resize(self.f, 0);
        a
    }

    pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
        let a: Poly = a.iter().map(|c| c % self.p).collect();
        self.pad(poly_rem(&a, &self.modulus, self.p))
    }

    pub fn one(&self) -> Vec<u64> {
        self.pad(vec![1])
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c % self.p == 0)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pad(poly_rem(&poly_mul(a, b, self.p), &self.modulus, self.p))
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        self.pad(self.poly_pow(a, e))
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.size() - 2))
        }
    }

    /// All elements in lexicographic order of their coefficient vectors.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.size()).map(|n| self.element(n)).collect()
    }

    /// The n-th element in enumeration order.
    pub fn element(&self, mut n: u64) -> Vec<u64> {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = n % self.p;
            n /= self.p;
        }
        v
    }

    /// Smallest (in enumeration order) generator of the multiplicative group.
    pub fn multiplicative_generator(&self) -> Vec<u64> {
        let q1 = self.size() - 1;
        let factors = prime_factors(q1);
        let one = self.one();
        (1..self.size())
            .map(|n| self.element(n))
            .filter(|a| !self.is_zero(a))
            .find(|a| factors.iter().all(|&r| self.pow(a, q1 / r) != one))
            .expect("finite field has a primitive element")
    }
}
