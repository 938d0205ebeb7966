use std::borrow::Cow;
use std::fmt;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::elem::Elem;
use super::residue::{is_prime, ResidueField};
use crate::error::{Error, Result};

/// Upper bound on e·f accepted by [`Ring::new`].
pub const MAX_ABSOLUTE_DEGREE: usize = 128;

/// Description of a coefficient ring O = Z_q[π]/(E) with Z_q = Z_p[x]/(unram).
///
/// `unram` is the monic unramified modulus, little-endian, length f+1.
/// `eisenstein` lists the e+1 coefficients of E, each a little-endian vector
/// of at most f integers (an element of Z_q). `prec` is the default absolute
/// precision in π-adic digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub unram: Vec<i64>,
    pub eisenstein: Vec<Vec<i64>>,
    pub prec: u32,
}

impl RingSpec {
    /// Z_p itself (E = π - p).
    pub fn zp(p: u64, prec: u32) -> RingSpec {
        RingSpec { p, unram: vec![0, 1], eisenstein: vec![vec![-(p as i64)], vec![1]], prec }
    }

    /// Unramified ring Z_p[x]/(modulus).
    pub fn unramified(p: u64, modulus: Vec<i64>, prec: u32) -> RingSpec {
        RingSpec { p, unram: modulus, eisenstein: vec![vec![-(p as i64)], vec![1]], prec }
    }

    /// Z_p[ζ_{p^k}] with uniformizer π = ζ - 1. `prec` counts p-adic digits
    /// and is scaled to π-adic digits.
    pub fn cyclotomic(p: u64, k: u32, prec: u32) -> RingSpec {
        RingSpec::zp(p, prec).with_cyclotomic_layer(k, prec)
    }

    /// Same unramified part, Eisenstein polynomial replaced by Φ_{p^k}(1+π).
    /// `prec` counts p-adic digits.
    pub fn with_cyclotomic_layer(&self, k: u32, prec: u32) -> RingSpec {
        let phi = cyclotomic_shifted(self.p, k);
        let e = phi.len() as u32 - 1;
        let eisenstein = phi
            .iter()
            .map(|c| vec![i64::try_from(c).expect("cyclotomic coefficient fits i64")])
            .collect();
        RingSpec { p: self.p, unram: self.unram.clone(), eisenstein, prec: prec * e }
    }
}

/// Coefficients of Φ_{p^k}(1+X), little-endian. For k = 0 returns X (i.e. 1+X-1).
pub fn cyclotomic_shifted(p: u64, k: u32) -> Vec<BigInt> {
    if k == 0 {
        return vec![BigInt::zero(), BigInt::one()];
    }
    let step = p.pow(k - 1) as usize;
    let deg = step * (p as usize - 1);
    let mut out = vec![BigInt::zero(); deg + 1];
    for i in 0..p as usize {
        let n = i * step;
        let mut c = BigInt::one();
        for (j, o) in out.iter_mut().enumerate().take(n + 1) {
            *o += &c;
            c = c * BigInt::from(n - j) / BigInt::from(j + 1);
        }
    }
    out
}

pub(crate) struct RingInner {
    pub(crate) spec: RingSpec,
    pub(crate) p: u64,
    pub(crate) pb: BigInt,
    pub(crate) f: usize,
    pub(crate) e: usize,
    /// Monic unramified modulus, length f+1.
    pub(crate) unram: Vec<BigInt>,
    /// Lower Eisenstein coefficients E_0..E_{e-1}, each of length f.
    pub(crate) eis: Vec<Vec<BigInt>>,
    pub(crate) residue: ResidueField,
    pub(crate) cap: u32,
    pow_p: Vec<BigInt>,
    cyclotomic_level: Option<u32>,
    wild_level: u32,
    tame_generator: Vec<u64>,
    p_over_pi: OnceLock<Vec<BigInt>>,
    tame_root: OnceLock<Vec<BigInt>>,
    extensions: Mutex<BTreeMap<u32, Ring>>,
}

/// A validated coefficient ring. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Ring(pub(crate) Arc<RingInner>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring(p={}, f={}, e={})", self.0.p, self.0.f, self.0.e)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.unram == other.0.unram
                && self.0.eis == other.0.eis)
    }
}

impl Eq for Ring {}

fn padded(v: &[i64], len: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
    out.resize(len, BigInt::zero());
    out
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        let p = spec.p;
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidInput(format!("p = {p} is not a supported prime")));
        }
        if spec.unram.len() < 2 || *spec.unram.last().unwrap() != 1 {
            return Err(Error::InvalidInput("unram must be monic of degree >= 1".into()));
        }
        if spec.prec == 0 {
            return Err(Error::InvalidInput("prec must be positive".into()));
        }
        let f = spec.unram.len() - 1;
        match p.checked_pow(f as u32) {
            Some(q) if q < 1 << 62 => {}
            _ => return Err(Error::RingTooLarge { size: f, bound: 62 }),
        }
        let red: Vec<u64> =
            spec.unram.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        let residue = ResidueField::new(p, red).ok_or(Error::NotIrreducible { p })?;

        if spec.eisenstein.len() < 2 {
            return Err(Error::NotEisenstein("degree must be at least 1".into()));
        }
        let e = spec.eisenstein.len() - 1;
        if e * f > MAX_ABSOLUTE_DEGREE {
            return Err(Error::RingTooLarge { size: e * f, bound: MAX_ABSOLUTE_DEGREE });
        }
        if spec.eisenstein.iter().any(|c| c.len() > f) {
            return Err(Error::NotEisenstein("coefficient has more than f coordinates".into()));
        }
        let lead = padded(&spec.eisenstein[e], f);
        if !lead[0].is_one() || lead[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotEisenstein("not monic".into()));
        }
        let pb = BigInt::from(p);
        let eis: Vec<Vec<BigInt>> =
            spec.eisenstein[..e].iter().map(|c| padded(c, f)).collect();
        for (j, c) in eis.iter().enumerate() {
            if c.iter().any(|x| !x.is_multiple_of(&pb)) {
                return Err(Error::NotEisenstein(format!("coefficient {j} is not divisible by p")));
            }
        }
        let e0_over_p: Vec<u64> = eis[0]
            .iter()
            .map(|x| (x / &pb).mod_floor(&pb).try_into().unwrap())
            .collect();
        if residue.is_zero(&residue.reduce(&e0_over_p)) {
            return Err(Error::NotEisenstein("constant term has valuation > 1".into()));
        }

        let cap = (2 * spec.prec).max(64);
        let kmax = cap as usize / e + 3;
        let mut pow_p = Vec::with_capacity(kmax + 1);
        let mut acc = BigInt::one();
        for _ in 0..=kmax {
            pow_p.push(acc.clone());
            acc *= &pb;
        }

        let cyclotomic_level = detect_cyclotomic(p, e, &eis);
        let wild_level = match cyclotomic_level {
            Some(k) => k,
            None if p == 2 => 1,
            None => 0,
        };
        let tame_generator = residue.multiplicative_generator();
        let inner = RingInner {
            unram: padded(&spec.unram, f + 1),
            spec,
            p,
            pb,
            f,
            e,
            eis,
            residue,
            cap,
            pow_p,
            cyclotomic_level,
            wild_level,
            tame_generator,
            p_over_pi: OnceLock::new(),
            tame_root: OnceLock::new(),
            extensions: Mutex::new(BTreeMap::new()),
        };
        let ring = Ring(Arc::new(inner));
        let c = ring.compute_p_over_pi(cap);
        let _ = ring.0.p_over_pi.set(c.coords);
        let t = ring.compute_teichmueller(&ring.0.tame_generator.clone(), cap)?;
        let _ = ring.0.tame_root.set(t.coords);
        Ok(ring)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Residue degree f.
    pub fn residue_degree(&self) -> usize {
        self.0.f
    }

    /// Ramification index e.
    pub fn ramification(&self) -> usize {
        self.0.e
    }

    pub fn default_precision(&self) -> u32 {
        self.0.spec.prec
    }

    /// Size q of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.0.residue.size()
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.0.residue
    }

    /// Largest k such that the designated primitive p^k-th root of unity lives in the ring.
    pub fn wild_level(&self) -> u32 {
        self.0.wild_level
    }

    /// `Some(k)` when E(π) = Φ_{p^k}(1+π).
    pub fn cyclotomic_level(&self) -> Option<u32> {
        self.0.cyclotomic_level
    }

    pub(crate) fn pow_p(&self, k: u32) -> Cow<'_, BigInt> {
        match self.0.pow_p.get(k as usize) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(num_traits::pow(self.0.pb.clone(), k as usize)),
        }
    }

    /// p-adic exponent to which coordinate with π-index `j` is reduced at precision `n`.
    pub(crate) fn coord_digits(&self, j: usize, n: u32) -> u32 {
        let n = n as usize;
        if n > j {
            ((n - j).div_ceil(self.0.e)) as u32
        } else {
            0
        }
    }

    pub fn zero(&self, prec: u32) -> Elem {
        Elem::from_raw(self, vec![BigInt::zero(); self.0.e * self.0.f], prec)
    }

    pub fn one(&self, prec: u32) -> Elem {
        self.int(1, prec)
    }

    pub fn int(&self, n: i64, prec: u32) -> Elem {
        self.bigint(&BigInt::from(n), prec)
    }

    pub fn bigint(&self, n: &BigInt, prec: u32) -> Elem {
        let mut c = vec![BigInt::zero(); self.0.e * self.0.f];
        c[0] = n.clone();
        Elem::from_raw(self, c, prec)
    }

    /// The uniformizer π.
    pub fn uniformizer(&self, prec: u32) -> Elem {
        let mut c = vec![BigInt::zero(); self.0.e * self.0.f];
        if self.0.e >= 2 {
            c[self.0.f] = BigInt::one();
        } else {
            for (i, x) in self.0.eis[0].iter().enumerate() {
                c[i] = -x;
            }
        }
        Elem::from_raw(self, c, prec)
    }

    /// Generator x of the unramified part.
    pub fn unramified_generator(&self, prec: u32) -> Elem {
        let mut c = vec![BigInt::zero(); self.0.e * self.0.f];
        if self.0.f >= 2 {
            c[1] = BigInt::one();
        } else {
            c[0] = -&self.0.unram[0];
        }
        Elem::from_raw(self, c, prec)
    }

    /// Lift of a residue-field element with coordinates in the x-basis.
    pub fn lift_residue(&self, c: &[u64], prec: u32) -> Elem {
        let r = self.0.residue.reduce(c);
        let mut coords = vec![BigInt::zero(); self.0.e * self.0.f];
        for (i, v) in r.into_iter().enumerate() {
            coords[i] = BigInt::from(v);
        }
        Elem::from_raw(self, coords, prec)
    }

    fn compute_p_over_pi(&self, prec: u32) -> Elem {
        // π^e = p·w with w = -(E_0 + E_1 π + ... + E_{e-1} π^{e-1})/p, a unit.
        let (e, f) = (self.0.e, self.0.f);
        let mut w = vec![BigInt::zero(); e * f];
        for j in 0..e {
            for i in 0..f {
                w[j * f + i] = -(&self.0.eis[j][i] / &self.0.pb);
            }
        }
        let w = Elem::from_raw(self, w, prec + 1);
        let winv = w.invert().expect("Eisenstein quotient is a unit");
        let pi = self.uniformizer(prec + 1);
        (&pi.pow(e as u64 - 1) * &winv).reduce_precision(prec).unwrap()
    }

    /// p/π as raw coordinates, correct to at least `prec` digits.
    pub(crate) fn p_over_pi_coords(&self, prec: u32) -> Cow<'_, [BigInt]> {
        if prec <= self.0.cap {
            Cow::Borrowed(self.0.p_over_pi.get().expect("initialized"))
        } else {
            Cow::Owned(self.compute_p_over_pi(prec).coords)
        }
    }

    fn compute_teichmueller(&self, c: &[u64], prec: u32) -> Result<Elem> {
        if self.0.residue.is_zero(c) {
            return Err(Error::ZeroResidue);
        }
        let q = self.residue_size();
        let mut x = self.lift_residue(c, prec);
        for _ in 0..=prec {
            let y = x.pow(q);
            if y.coords == x.coords {
                return Ok(x);
            }
            x = y;
        }
        Ok(x)
    }

    /// The Teichmüller representative of a nonzero residue `c`, found as the
    /// fixed point of x ↦ x^q.
    pub fn teichmueller(&self, c: &[u64], prec: u32) -> Result<Elem> {
        if prec <= self.0.cap && self.0.residue.reduce(c) == self.0.tame_generator {
            return Ok(Elem::from_raw(self, self.0.tame_root.get().unwrap().clone(), prec));
        }
        self.compute_teichmueller(c, prec)
    }

    /// Chosen generator of the residue field's multiplicative group.
    pub fn tame_generator(&self) -> &[u64] {
        &self.0.tame_generator
    }

    /// Designated primitive (q-1)-th root of unity: the Teichmüller lift of the tame generator.
    pub fn tame_root(&self, prec: u32) -> Elem {
        self.teichmueller(&self.0.tame_generator.clone(), prec).expect("generator is nonzero")
    }

    /// Designated primitive p^k-th root of unity: (1+π)^{p^{K-k}} on a cyclotomic
    /// layer of level K, and -1 for k = 1 over a ring with p = 2.
    pub fn p_power_root(&self, k: u32, prec: u32) -> Result<Elem> {
        if k == 0 {
            return Ok(self.one(prec));
        }
        if k > self.0.wild_level {
            return Err(Error::RootNotAvailable { order: self.0.p.pow(k) });
        }
        let base = match self.0.cyclotomic_level {
            Some(_) => &self.one(prec) + &self.uniformizer(prec),
            None => self.int(-1, prec),
        };
        Ok(base.pow(self.0.p.pow(self.0.wild_level - k)))
    }

    /// Designated primitive root of unity of order `m`.
    pub fn root_of_unity(&self, m: u64, prec: u32) -> Result<Elem> {
        if m == 0 {
            return Err(Error::InvalidInput("root order 0".into()));
        }
        let p = self.0.p;
        let (mut tame, mut s) = (m, 0u32);
        while tame % p == 0 {
            tame /= p;
            s += 1;
        }
        let q1 = self.residue_size() - 1;
        if !q1.is_multiple_of(tame) || s > self.0.wild_level {
            return Err(Error::RootNotAvailable { order: m });
        }
        // ζ_m = α_t^u β_{p^s}^v with u ≡ p^{-s} (mod t), v ≡ t^{-1} (mod p^s), so that
        // the designated roots form a compatible system: ζ_m^{m/l} = ζ_l.
        let ps = p.pow(s);
        let u = mod_inverse(ps % tame, tame);
        let v = mod_inverse(tame % ps, ps);
        let alpha = self.tame_root(prec).pow(q1 / tame);
        Ok(&alpha.pow(u) * &self.p_power_root(s, prec)?.pow(v))
    }

    /// A ring containing the p^k-th roots of unity, together with this ring
    /// embedded in it. Returns `self` when the roots are already present.
    pub fn with_p_power_roots(&self, k: u32) -> Result<Ring> {
        if k <= self.0.wild_level {
            return Ok(self.clone());
        }
        if self.0.e != 1 && self.0.cyclotomic_level.is_none() {
            return Err(Error::RootNotAvailable { order: self.0.p.pow(k) });
        }
        if let Some(r) = self.0.extensions.lock().unwrap().get(&k) {
            return Ok(r.clone());
        }
        let base_digits = self.0.spec.prec.div_ceil(self.0.e as u32);
        let ext = Ring::new(self.0.spec.with_cyclotomic_layer(k, base_digits))?;
        self.0.extensions.lock().unwrap().insert(k, ext.clone());
        Ok(ext)
    }

    /// Image of `x` under the canonical embedding of its ring into `self`.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        let src = x.ring();
        if src == self {
            return Ok(x.clone());
        }
        if src.0.p != self.0.p || src.0.unram != self.0.unram {
            return Err(Error::SpecMismatch);
        }
        let (es, et) = (src.0.e as u32, self.0.e as u32);
        if et % es != 0 {
            return Err(Error::SpecMismatch);
        }
        let prec = x.prec() * (et / es);
        let f = self.0.f;
        if es == 1 {
            let mut c = vec![BigInt::zero(); self.0.e * f];
            c[..f].clone_from_slice(&x.coords[..f]);
            return Ok(Elem::from_raw(self, c, prec));
        }
        let (ks, kt) = match (src.0.cyclotomic_level, self.0.cyclotomic_level) {
            (Some(a), Some(b)) if a <= b => (a, b),
            _ => return Err(Error::SpecMismatch),
        };
        // π_src = (1+π)^{p^{kt-ks}} - 1
        let one = self.one(prec);
        let image = &(&one + &self.uniformizer(prec)).pow(self.0.p.pow(kt - ks)) - &one;
        let mut acc = self.zero(prec);
        let mut power = one.clone();
        for j in 0..src.0.e {
            let mut c = vec![BigInt::zero(); self.0.e * f];
            c[..f].clone_from_slice(&x.coords[j * f..(j + 1) * f]);
            acc = &acc + &(&Elem::from_raw(self, c, prec) * &power);
            power = &power * &image;
        }
        Ok(acc)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    g.x.rem_euclid(m as i128) as u64
}

fn detect_cyclotomic(p: u64, e: usize, eis: &[Vec<BigInt>]) -> Option<u32> {
    let mut k = 1u32;
    loop {
        let phi = p.checked_pow(k - 1)? * (p - 1);
        if phi as usize > e {
            return None;
        }
        if phi as usize == e {
            let target = cyclotomic_shifted(p, k);
            let matches = eis.iter().enumerate().all(|(j, c)| {
                c[0] == target[j] && c[1..].iter().all(|x| x.is_zero())
            });
            return matches.then_some(k);
        }
        k += 1;
    }
}
