//! Acceptance suite. Runs as a plain binary so every criterion reports one
//! line whether it passes or not.

mod common;

use std::error::Error as StdError;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use common::*;
use iwasawa::dist::{convolve, pullback_preimage, pullback_sharp, pushforward, Distribution};
use iwasawa::euler::{
    euler_compatibility_check, finiteness_pipeline, j_membership, psi_image, units_char_ideal, MeasureFamily,
    PipelineVerdict, PsiSymbol,
};
use iwasawa::groups::{ring_for_order, Character, FiniteAbelianGroup, GroupMorphism};
use iwasawa::iwmod::{chipart_verify, finiteness_certificate, Finiteness, ModulePresentation};
use iwasawa::measure::{GammaContext, GroupElement, ProMeasure};
use iwasawa::padic::{Ring, ZpInt};
use iwasawa::series::{quotient_order, PowerSeries, QuotientOrder};
use iwasawa::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, Box<dyn StdError + Send + Sync>>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn rand_dist(r: &mut ChaCha8Rng, g: &FiniteAbelianGroup, ring: &Ring, prec: u32) -> Distribution {
    Distribution::new(g, (0..g.order()).map(|_| rand_elem(r, ring, prec)).collect()).unwrap()
}

fn operator_identities() -> Check {
    const PREC: u32 = 16;
    let mut r = rng(101);
    let mut morphisms = 0;
    for p in [2, 3, 5] {
        let ring = zp(p, PREC);
        for dom in groups_up_to_12() {
            for cod in groups_up_to_12() {
                for phi in GroupMorphism::all(&dom, &cod) {
                    morphisms += 1;
                    let ki = phi.kernel_image();
                    let k = ring.int(ki.kernel.len() as i64, PREC);
                    for _ in 0..25 {
                        let mu = rand_dist(&mut r, &dom, &ring, PREC);
                        let lhs = pullback_sharp(&phi, &pushforward(&phi, &mu)?)?;
                        let mut rhs = Distribution::zero(&dom, &ring, PREC);
                        for s in &ki.kernel {
                            rhs = rhs.add(&mu.translate(s)?)?;
                        }
                        ensure!(lhs == rhs, "pull∘push differs from the kernel sum for {phi:?}");

                        let nu = rand_dist(&mut r, &cod, &ring, PREC);
                        let pulled = pullback_sharp(&phi, &nu)?;
                        let lhs = pushforward(&phi, &pulled)?;
                        ensure!(lhs == nu.restrict(&ki.image)?.scale(&k)?, "push∘pull differs for {phi:?}");

                        // image of π^♯ against kernel-invariant distributions, both ways
                        let invariant = |d: &Distribution| ki.kernel.iter().all(|s| d.translate(s).unwrap() == *d);
                        ensure!(invariant(&pulled), "π^♯ν is not kernel-invariant for {phi:?}");
                        let back = pullback_preimage(&phi, &pulled)?;
                        ensure!(
                            back.is_some_and(|b| pullback_sharp(&phi, &b).unwrap() == pulled),
                            "invariant distribution not reached for {phi:?}"
                        );
                        ensure!(
                            pullback_preimage(&phi, &mu)?.is_some() == invariant(&mu),
                            "preimage test disagrees with invariance for {phi:?}"
                        );
                    }
                    let injective = cod.elements().iter().all(|y| {
                        let d = Distribution::dirac(&cod, y, &ring, PREC).unwrap();
                        !pullback_sharp(&phi, &d).unwrap().is_zero()
                    });
                    ensure!(injective == ki.surjective, "π^♯ injectivity differs from surjectivity for {phi:?}");
                }
            }
        }
    }
    Ok(format!("{morphisms} morphisms over p = 2, 3, 5, 25 draws each"))
}

fn group_ring_dictionary() -> Check {
    const PREC: u32 = 8;
    let ring = zp(3, PREC);
    let mut r = rng(202);
    let mut pairs = 0;
    for g in groups_up_to_8() {
        let els = g.elements();
        for x in &els {
            let a = Distribution::dirac(&g, x, &ring, PREC)?;
            ensure!(Distribution::from_group_ring(&g, &ring, PREC, &a.to_group_ring())? == a, "dirac round trip");
            for y in &els {
                let b = Distribution::dirac(&g, y, &ring, PREC)?;
                ensure!(convolve(&a, &b)? == Distribution::dirac(&g, &g.add(x, y), &ring, PREC)?, "δ_x∗δ_y ≠ δ_(x+y)");
                pairs += 1;
            }
        }
        for _ in 0..5 {
            let a = rand_dist(&mut r, &g, &ring, PREC);
            let b = rand_dist(&mut r, &g, &ring, PREC);
            ensure!(Distribution::from_group_ring(&g, &ring, PREC, &a.to_group_ring())? == a, "round trip on {g:?}");
            let mut prod = vec![ring.zero(PREC); g.order() as usize];
            for (x, u) in a.to_group_ring() {
                for (y, v) in b.to_group_ring() {
                    let i = g.index(&g.add(&x, &y))?;
                    prod[i] = &prod[i] + &(&u * &v);
                }
            }
            ensure!(convolve(&a, &b)? == Distribution::new(&g, prod)?, "convolution differs from product on {g:?}");
        }
    }
    Ok(format!("11 groups, {pairs} basis pairs"))
}

fn weierstrass_suite() -> Check {
    const M: usize = 32;
    const PREC: u32 = 16;
    let rings = [zp(2, PREC), zp(3, PREC), zp(5, PREC), unram3(PREC), wild2(PREC)];
    let mut r = rng(303);
    let mut pool = Vec::new();
    for ring in &rings {
        for _ in 0..100 {
            let (mu, lambda) = (r.gen_range(0..=2u32), r.gen_range(0..=5usize));
            let f = prepared(&mut r, ring, mu, lambda, M, PREC);
            let w = f.weierstrass_prepare()?;
            ensure!((w.mu_digits, w.lambda) == (mu, lambda), "invariants ({}, {}) for ({mu}, {lambda})", w.mu_digits, w.lambda);
            ensure!(w.is_distinguished(), "P is not distinguished");
            ensure!(w.certified_precision == PREC - mu, "precision loss differs from μ");
            ensure!(w.reconstruct() == f, "reconstruction fails for {f}");
            pool.push((f, mu, lambda));
        }
    }
    for _ in 0..100 {
        let ring = r.gen_range(0..rings.len());
        let pick = |r: &mut ChaCha8Rng| loop {
            let (f, mu, lambda) = &pool[r.gen_range(0..pool.len())];
            if f.ring() == &rings[ring] {
                return (f.clone(), *mu, *lambda);
            }
        };
        let ((f, mf, lf), (g, mg, lg)) = (pick(&mut r), pick(&mut r));
        let w = (&f * &g).weierstrass_prepare()?;
        ensure!((w.mu_digits, w.lambda) == (mf + mg, lf + lg), "λ, μ not additive");
    }
    let z = PowerSeries::zero(&rings[1], M, PREC);
    ensure!(matches!(z.weierstrass_prepare(), Err(Error::PrecisionExhausted(_))), "zero series prepared");
    let f = PowerSeries::from_ints(&rings[1], &[3, 0, 0, 0, 0, 1], M, PREC);
    ensure!(
        matches!(f.weierstrass_prepare_bounded(3), Err(Error::LambdaOverflow { tdeg: 3 })),
        "λ = 5 accepted below bound 3"
    );
    Ok("500 preparations, 100 products, both failure modes".into())
}

fn rand_zp(r: &mut ChaCha8Rng, p: u64) -> ZpInt {
    match r.gen_range(0..3) {
        0 => ZpInt::Int(r.gen_range(-1_000_000..1_000_000)),
        1 => loop {
            let den = r.gen_range(1..50u64);
            if den % p != 0 {
                break ZpInt::Ratio { num: r.gen_range(-1000..1000), den };
            }
        },
        _ => ZpInt::Digits { digits: (0..24).map(|_| r.gen_range(0..p)).collect() },
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn binomial_suite() -> Check {
    const M: usize = 64;
    const PREC: u32 = 12;
    let mut r = rng(404);
    for i in 0..50 {
        let p = [2, 3, 5][i % 3];
        let ring = zp(p, PREC);
        let (a, b) = (rand_zp(&mut r, p), rand_zp(&mut r, p));
        let fa = PowerSeries::binomial_power(&ring, &a, M, PREC)?;
        let fb = PowerSeries::binomial_power(&ring, &b, M, PREC)?;
        let fab = PowerSeries::binomial_power(&ring, &a.add(&b, p)?, M, PREC)?;
        ensure!(&fa * &fb == fab, "(1+T)^α(1+T)^β ≠ (1+T)^(α+β) for {a:?}, {b:?}");
    }
    let mut cases = 0;
    for p in [2u64, 3, 5] {
        let ring = zp(p, PREC);
        let mut n = 0;
        while p.pow(n) <= M as u64 {
            let pn = p.pow(n);
            let b = PowerSeries::binomial_power(&ring, &ZpInt::Int(pn as i64), M, PREC)?;
            let w = PowerSeries::omega(&ring, n, M, PREC)?;
            ensure!(&b - &PowerSeries::one(&ring, M, PREC) == w, "binomial_power(p^n) − 1 ≠ ω_n at p^n = {pn}");
            let exact: Vec<BigInt> = (0..M as u64).map(|k| if k == 0 { 0.into() } else { binomial(pn, k) }).collect();
            ensure!(w == PowerSeries::from_bigints(&ring, &exact, M, PREC), "ω_{n} coefficients wrong for p = {p}");
            cases += 1;
            n += 1;
        }
    }
    Ok(format!("50 random pairs, {cases} values of p^n"))
}

fn evaluation_consistency() -> Check {
    const M: usize = 16;
    const PREC: u32 = 8;
    let mut r = rng(505);
    let mut evals = 0;
    for (base, orders) in [(zp(3, PREC), vec![1u64, 3]), (unram2(PREC), vec![1, 2, 4])] {
        let p = base.p();
        for i in 0..50 {
            let delta = FiniteAbelianGroup::new([vec![], vec![2], vec![6]][i % 3].clone())?;
            let mu = rand_measure(&mut r, &delta, &base, M, PREC);
            for b in delta.elements() {
                let chi = {
                    let o = b.iter().zip(delta.orders()).fold(1, |acc, (&x, &d)| {
                        num_integer::lcm(acc, d / num_integer::gcd(x, d))
                    });
                    Character::from_levels(&delta, &ring_for_order(&base, o)?, &b)?
                };
                for &order in &orders {
                    let n = order.ilog(p);
                    let target = ring_for_order(chi.ring(), order)?;
                    let root = target.root_of_unity(order, target.default_precision())?;
                    let d = mu.level_reduce(n)?;
                    for k in 0..order {
                        let zeta = root.pow(k);
                        let got = mu.twist_eval(&chi, &zeta)?;
                        let mut sum = target.zero(target.default_precision());
                        for (idx, mass) in d.values().iter().enumerate() {
                            let g = d.group().element(idx);
                            let (dl, i) = g.split_at(delta.rank());
                            let c = target.embed(&chi.eval(dl)?)?;
                            sum = &sum + &(&(&c * &zeta.pow(i[0])) * &target.embed(mass)?);
                        }
                        ensure!(got == sum, "twist_eval differs from the level-{n} sum");
                        evals += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{evals} (μ, χ, ζ) triples"))
}

#[allow(clippy::needless_range_loop)]
fn smith_exponent(f: &PowerSeries, n: u32, prec: u32) -> Option<u64> {
    let p = f.ring().p() as i128;
    let q = p.pow(prec);
    let pn = (p as u64).pow(n) as usize;
    let md = |x: i128| x.rem_euclid(q);
    // ω_n = (1+T)^{p^n} − 1, monic of degree p^n
    let omega: Vec<i128> =
        (0..=pn as u64).map(|k| if k == 0 { 0 } else { md(binomial(pn as u64, k).to_i128().unwrap()) }).collect();
    let coeffs: Vec<i128> = f.as_poly().iter().map(|c| md(c.to_bigint().to_i128().unwrap())).collect();
    let mut a = vec![vec![0i128; pn]; pn];
    for j in 0..pn {
        let mut v = vec![0i128; pn + coeffs.len()];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i + j] = md(v[i + j] + c);
        }
        for d in (pn..v.len()).rev() {
            let c = v[d];
            if c != 0 {
                for (k, &o) in omega.iter().enumerate() {
                    v[d - pn + k] = md(v[d - pn + k] - c * o);
                }
            }
        }
        for i in 0..pn {
            a[i][j] = v[i];
        }
    }
    let val = |x: i128| -> u32 {
        if x == 0 {
            return prec;
        }
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let inv = |x: i128| -> i128 {
        // x is a unit mod q
        let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, q, x);
        while nr != 0 {
            let k = r / nr;
            (t, nt) = (nt, t - k * nt);
            (r, nr) = (nr, r - k * nr);
        }
        md(t)
    };
    let mut total = 0u64;
    for k in 0..pn {
        let (mut best, mut at) = (prec, (k, k));
        for i in k..pn {
            for j in k..pn {
                let v = val(a[i][j]);
                if v < best {
                    best = v;
                    at = (i, j);
                }
            }
        }
        if best >= prec {
            return None;
        }
        a.swap(k, at.0);
        for row in a.iter_mut() {
            row.swap(k, at.1);
        }
        let pv = p.pow(best);
        let u = inv(a[k][k] / pv);
        for i in k + 1..pn {
            let c = md(a[i][k] / pv * u);
            for j in k..pn {
                a[i][j] = md(a[i][j] - c * a[k][j]);
            }
        }
        for j in k + 1..pn {
            let c = md(a[k][j] / pv * u);
            for i in k..pn {
                a[i][j] = md(a[i][j] - c * a[i][k]);
            }
        }
        total += best as u64;
    }
    Some(total)
}

fn order_growth() -> Check {
    const M: usize = 64;
    const PREC: u32 = 16;
    let mut r = rng(606);
    let mut fitted = 0;
    for i in 0..50 {
        let p = [2u64, 3][i % 2];
        let ring = zp(p, PREC);
        let (mu, lambda) = (r.gen_range(0..=1u32), r.gen_range(0..=3usize));
        let f = prepared(&mut r, &ring, mu, lambda, M, PREC);
        let mut e = Vec::new();
        for n in 0..=3 {
            let got = quotient_order(&f, n)?;
            match smith_exponent(&f, n, PREC) {
                Some(x) => ensure!(got == QuotientOrder::Finite { exponent: x }, "level {n}: {got:?} against Smith {x}"),
                None => ensure!(!matches!(got, QuotientOrder::Finite { .. }), "Smith form degenerate but order finite"),
            }
            if let QuotientOrder::Finite { exponent } = got {
                e.push(exponent as i64);
            }
        }
        if e.len() == 4 {
            let (m, l, p) = (mu as i64, lambda as i64, p as i64);
            let nu = e[2] - m * p.pow(2) - 2 * l;
            ensure!(e[3] == m * p.pow(3) + 3 * l + nu, "growth law fails: {e:?} with μ = {m}, λ = {l}");
            fitted += 1;
        }
    }
    let f = PowerSeries::from_ints(&zp(2, PREC), &[-2, 1], M, PREC);
    let worked: Vec<QuotientOrder> = (0..=3).map(|n| quotient_order(&f, n)).collect::<Result<_, _>>()?;
    let want: Vec<QuotientOrder> = [1, 3, 4, 5].into_iter().map(|exponent| QuotientOrder::Finite { exponent }).collect();
    ensure!(worked == want, "T − 2 over Z_2 gives {worked:?}");
    Ok(format!("50 series against the Smith oracle, {fitted} growth fits, T − 2 gives 1, 3, 4, 5"))
}

fn chi_part_formula() -> Check {
    const M: usize = 32;
    const PREC: u32 = 12;
    let ring = zp(5, PREC);
    let d = FiniteAbelianGroup::cyclic(2);
    let half = ring.int(2, PREC).invert()?;
    let mut r = rng(707);
    for i in 0..20 {
        let k = 1 + i % 2;
        let mut rows = Vec::new();
        for _ in 0..k {
            let mut row = Vec::new();
            for _ in 0..k {
                let (la, lb) = (r.gen_range(0..=1), r.gen_range(0..=1));
                let (ma, mb) = (r.gen_range(0..=1), r.gen_range(0..=1));
                let a = prepared(&mut r, &ring, ma, la, M, PREC);
                let b = prepared(&mut r, &ring, mb, lb, M, PREC);
                let f0 = (&a + &b).scale(&half);
                let f1 = (&a - &b).scale(&half);
                row.push(ProMeasure::new(&d, &GammaContext::default(), vec![f0, f1])?);
            }
            rows.push(row);
        }
        let rep = chipart_verify(&ModulePresentation::new(&d, rows)?)?;
        ensure!(rep.gap == Ok((0, 0)), "presentation {i}: gap {:?}", rep.gap);
    }
    let ring = zp(2, PREC);
    let s = |c: &[i64]| PowerSeries::from_ints(&ring, c, 16, PREC);
    let rows = vec![
        vec![ProMeasure::new(&d, &GammaContext::default(), vec![s(&[-1]), s(&[1])])?],
        vec![ProMeasure::scalar(&d, &s(&[4]))],
    ];
    let rep = chipart_verify(&ModulePresentation::new(&d, rows)?)?;
    ensure!(rep.gap == Ok((1, 0)), "worked instance gives {:?}", rep.gap);
    Ok("20 presentations over Z_5 with gap (0, 0), worked p = 2 instance with gap (1, 0)".into())
}

fn euler_layer() -> Check {
    const M: usize = 16;
    const N: u32 = 12;
    let ring = zp(3, N);
    let s = |c: &[i64]| PowerSeries::from_ints(&ring, c, M, N);
    let fam = three_node(&ring, &s(&[3, 1, 4, 1, 5]), [&s(&[2, 7, 1]), &s(&[1, -1, 2])]);
    let rep = euler_compatibility_check(&fam)?;
    ensure!(rep.len() == 2 && rep.iter().all(|e| e.discrepancy.is_none()), "scenario is not compatible");

    let perturb = |fam: &MeasureFamily, node: &str, idx: usize, k: usize| -> MeasureFamily {
        let mut fam = fam.clone();
        let mu = fam.measures.get_mut(node).unwrap();
        let mut coords = mu.series().to_vec();
        let mut c = coords[idx].as_poly();
        c.resize(k + 1, ring.zero(N));
        c[k] = &c[k] + &ring.one(N);
        coords[idx] = PowerSeries::new(&ring, c, coords[idx].len()).unwrap();
        *mu = ProMeasure::new(mu.delta(), mu.gamma(), coords).unwrap();
        fam
    };
    let mut localized = 0;
    let phi = &fam.poset.edge("l1l2", "l1")?.morphism;
    for idx in 0..6 {
        for k in [0, 3, 7] {
            let rep = euler_compatibility_check(&perturb(&fam, "l1l2", idx, k))?;
            let bad: Vec<_> = rep.iter().filter(|e| e.discrepancy.is_some()).collect();
            let where_ = Some((phi.apply(&phi.domain().element(idx)), k));
            ensure!(
                bad.len() == 1 && bad[0].upper == "l1l2" && bad[0].discrepancy == where_,
                "perturbation at ({idx}, T^{k}) reported as {bad:?}"
            );
            localized += 1;
        }
    }
    for idx in 0..2 {
        let rep = euler_compatibility_check(&perturb(&fam, "l1", idx, 2))?;
        ensure!(rep.iter().any(|e| e.discrepancy.is_some()), "perturbation of l1 missed");
    }

    let mut fam = fam;
    let mut checked = 0;
    for (node, sigma, norm) in [
        ("l1", GroupElement::new(vec![1], 1), 2),
        ("l1", GroupElement::new(vec![0], 2), 4),
        ("l1", GroupElement::new(vec![1], 0), 7),
        ("l1l2", GroupElement::new(vec![1, 2], 1), 5),
    ] {
        let sym = PsiSymbol { node: node.into(), ideal: format!("a{checked}"), norm, sigma };
        let mu = fam.measures[node].clone();
        let j = sym.element(mu.delta(), &ring, mu.len(), N)?;
        let at = fam.poset.nodes.iter().position(|n| n.label == node).unwrap();
        fam.poset.nodes[at].j_generators.push(j);
        let img = psi_image(&sym, &fam)?;
        let (i, c) = j_membership(&fam, node, &img)?.ok_or("ψ image not found in J·μ")?;
        let again = fam.poset.nodes[at].j_generators[i].checked_mul(&mu)?.mul_series(&c)?;
        let m = again.len().min(img.len());
        let cut = |x: &ProMeasure| x.series().iter().map(|f| f.truncate(m)).collect::<Vec<_>>();
        ensure!(cut(&again) == cut(&img), "cofactor does not reproduce the ψ image");
        checked += 1;
    }
    Ok(format!("compatible, {localized} perturbations localized, {checked} ψ images divisible"))
}

fn pipeline_kind(v: &PipelineVerdict) -> String {
    match v {
        PipelineVerdict::Certified { .. } => "certified".into(),
        PipelineVerdict::NotFinite { root_order } => format!("not-finite {root_order}"),
        PipelineVerdict::Inconclusive(_) => "inconclusive".into(),
        PipelineVerdict::NoAuxiliaryPrime(s) => format!("no auxiliary prime: {s}"),
    }
}

fn certificate_kind(v: &Finiteness) -> String {
    match v {
        Finiteness::Certified { .. } => "certified".into(),
        Finiteness::NotFinite { root_order } => format!("not-finite {root_order}"),
        Finiteness::Inconclusive(_) => "inconclusive".into(),
    }
}

fn pipeline_equivalence() -> Check {
    const M: usize = 32;
    const N: u32 = 10;
    let mut r = rng(909);
    let mut families: Vec<(Ring, MeasureFamily, bool)> = Vec::new();
    for i in 0..18 {
        let p = [3u64, 5][i % 2];
        let ring = zp(p, N);
        let (mu, lambda) = (r.gen_range(0..=1), r.gen_range(0..=3));
        let g = prepared(&mut r, &ring, mu, lambda, M, N);
        let fill = rand_series(&mut r, &ring, 3, M, N);
        if i % 4 < 2 {
            families.push((ring.clone(), sign_family(&ring, &g, &fill, 1 + (i as i64 % 2)), false));
        } else {
            families.push((ring.clone(), trivial_family(&ring, &g, &fill, 1), true));
        }
    }
    let ring = zp(3, N);
    let fill = rand_series(&mut r, &ring, 3, M, N);
    let h = prepared(&mut r, &ring, 0, 1, M, N);
    let g = &PowerSeries::omega(&ring, 1, M, N)? * &h;
    families.push((ring.clone(), sign_family(&ring, &g, &fill, 1), false));
    let zero = PowerSeries::zero(&ring, M, 4);
    families.push((ring.clone(), sign_family(&ring, &zero, &fill, 1), false));

    let (mut kinds, mut routes) = (std::collections::BTreeMap::new(), 0);
    for (idx, (ring, fam, trivial)) in families.iter().enumerate() {
        let rep = euler_compatibility_check(fam)?;
        ensure!(rep.iter().all(|e| e.discrepancy.is_none()), "family {idx} is not compatible");
        let (conductor, aux_node) = if *trivial { ("(1)", "l") } else { ("f", "fl") };
        let delta = fam.poset.node(conductor)?.delta.clone();
        let chi = if *trivial {
            Character::trivial(&delta, ring)?
        } else {
            Character::from_levels(&delta, ring, &[1])?
        };
        let gen = units_char_ideal(fam, &chi, conductor).map_err(|e| format!("family {idx}: {e}"))?;
        let mut n = 0;
        while n <= 3 && ring.p().pow(n) <= M as u64 {
            let v = finiteness_pipeline(fam, &chi, conductor, n, "l", aux_node)
                .map_err(|e| format!("family {idx}, n = {n}: pipeline: {e}"))?;
            let c = finiteness_certificate(&gen, n).map_err(|e| format!("family {idx}, n = {n}: certificate: {e}"))?;
            let (a, b) = (pipeline_kind(&v), certificate_kind(&c));
            ensure!(a == b, "family {idx}, n = {n}: pipeline {a}, certificate {b}");
            if let PipelineVerdict::Certified { values } = &v {
                ensure!(values.iter().all(|x| x.agree), "family {idx}, n = {n}: evaluation routes disagree");
                routes += values.len();
            }
            *kinds.entry(a.split(' ').next().unwrap().to_string()).or_insert(0) += 1;
            n += 1;
        }
    }
    ensure!(kinds.get("not-finite").is_some_and(|&k| k > 0), "engineered ω_1 multiple not detected");
    ensure!(kinds.get("inconclusive").is_some_and(|&k| k > 0), "engineered zero generator not inconclusive");
    Ok(format!("20 families, verdicts {kinds:?}, {routes} route pairs agree"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run_binary(verb: &str, input: &Path, workers: usize) -> Result<(Vec<u8>, i32), Box<dyn StdError + Send + Sync>> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_iwasawa"));
    cmd.args(verb.split('.')).arg("--workers").arg(workers.to_string()).arg(input);
    for var in ["IWASAWA_PRECISION", "IWASAWA_TDEG", "IWASAWA_SEED", "IWASAWA_WORKERS"] {
        cmd.env_remove(var);
    }
    let out = cmd.output()?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn cli_reproducibility() -> Check {
    let dir = golden_dir();
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    let entries = manifest.as_array().ok_or("manifest is not a list")?;
    ensure!(entries.len() >= 25, "corpus has only {} documents", entries.len());
    let mut codes = std::collections::BTreeSet::new();
    for e in entries {
        let name = e["name"].as_str().ok_or("name")?;
        let verb = e["verb"].as_str().ok_or("verb")?;
        let exit = e["exit"].as_i64().ok_or("exit")? as i32;
        let input = dir.join(format!("{name}.json"));
        let (a, ca) = run_binary(verb, &input, 1)?;
        let (b, cb) = run_binary(verb, &input, 4)?;
        ensure!(a == b, "{name}: output differs between 1 and 4 workers");
        ensure!(ca == cb && ca == exit, "{name}: exit codes {ca}, {cb}, expected {exit}");
        let expected = std::fs::read(dir.join(format!("{name}.expected.json")))?;
        ensure!(a == expected, "{name}: output differs from the recorded result");
        let doc: Value = serde_json::from_slice(&a)?;
        let status = doc["status"].as_str().unwrap_or_default();
        let want = match exit {
            0 => "ok",
            1 => "error",
            2 => "inconclusive",
            _ => "not-finite",
        };
        ensure!(status == want, "{name}: status {status} with exit {exit}");
        codes.insert(exit);
    }
    ensure!(codes.len() == 4, "corpus does not exercise every exit code: {codes:?}");
    Ok(format!("{} documents identical across 1 and 4 workers", entries.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("distribution operator identities", operator_identities),
        ("distribution and group-ring dictionary", group_ring_dictionary),
        ("Weierstrass preparation suite", weierstrass_suite),
        ("binomial powers and ω_n", binomial_suite),
        ("twisted evaluation consistency", evaluation_consistency),
        ("quotient order growth", order_growth),
        ("χ-part formula", chi_part_formula),
        ("Euler layer", euler_layer),
        ("finiteness pipeline equivalence", pipeline_equivalence),
        ("CLI reproducibility", cli_reproducibility),
    ];
    let start = Instant::now();
    let results: Vec<(Check, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|e| {
                        let msg = e
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into());
                        Err(format!("panicked: {msg}").into())
                    });
                    (r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (r, secs))) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {e} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

