//! Complete factorization of rational polynomials.
//!
//! The engine is Zassenhaus: Yun squarefree decomposition over Q, then per
//! squarefree part a deterministic Berlekamp factorization modulo a small
//! well-chosen prime, multifactor Hensel lifting past the Landau-Mignotte
//! coefficient bound, and subset recombination with exact trial division.
//! Everything is deterministic and the result is certified by exact division,
//! so the lifting internals only affect speed, never correctness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{primitive_int_poly, Poly};
use crate::rat::Rat;

/// Factors f as c * prod f_i^(e_i) with each f_i monic irreducible over Q.
/// Factors are sorted by degree, then coefficient order, so the output is
/// deterministic. Panics on the zero polynomial.
pub fn factor_over_q(f: &Poly<Rat>) -> (Rat, Vec<(Poly<Rat>, usize)>) {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let c = f.leading();
    if f.is_constant() {
        return (c, Vec::new());
    }
    let mut out: Vec<(Poly<Rat>, usize)> = Vec::new();
    for (part, mult) in yun_squarefree(&f.monic()) {
        for irr in factor_squarefree(&part) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    (c, out)
}

/// The rational roots of f with multiplicities, sorted increasingly.
///
/// Candidates come from root finding modulo large primes followed by Newton
/// lifting past the height bound max(|c0|, |lead|) of the primitive integer
/// polynomial; a root of multiplicity m is a simple root of the (m-1)-th
/// derivative, so scanning all derivative levels is complete. Every
/// candidate is certified by exact evaluation and exact division, so the
/// modular internals only affect speed, never the result. This avoids full
/// factorization, which grinds on the huge-coefficient characteristic
/// polynomials arising in the Lie pipeline.
pub fn rational_roots(f: &Poly<Rat>) -> Vec<(Rat, usize)> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let mut out: Vec<(Rat, usize)> = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut g = f.monic();
    let mut at_zero = 0usize;
    while g.deg() > 0 && g.coeff(0).is_zero() {
        g = Poly::new(g.coeffs()[1..].to_vec());
        at_zero += 1;
    }
    if at_zero > 0 {
        out.push((Rat::zero(), at_zero));
    }
    let mut candidates: Vec<Rat> = Vec::new();
    let mut level = g.clone();
    while level.deg() >= 1 {
        for r in lifted_root_candidates(&level) {
            if !candidates.contains(&r) {
                candidates.push(r);
            }
        }
        level = level.derivative();
    }
    for r in candidates {
        let lin = Poly::new(vec![-r.clone(), Rat::one()]);
        let mut mult = 0usize;
        let mut cur = g.clone();
        while cur.deg() >= 1 {
            let (q, rem) = cur.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            cur = q;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Nonzero rational-root candidates of one polynomial: roots modulo up to
/// three large primes, Newton-lifted and rationally reconstructed. The list
/// can contain non-roots (callers verify) but misses a true rational root
/// only if every tried prime divides one of finitely many fixed nonzero
/// integers attached to that root.
fn lifted_root_candidates(level: &Poly<Rat>) -> Vec<Rat> {
    if level.deg() == 1 {
        return vec![-level.coeff(0) / level.coeff(1)];
    }
    let mut ints: Vec<BigInt> = primitive_int_poly(level)
        .coeffs()
        .iter()
        .map(|c| c.numer().clone())
        .collect();
    while ints.first().is_some_and(Zero::is_zero) {
        ints.remove(0); // zero roots are handled by the caller
    }
    if ints.len() <= 1 {
        return Vec::new();
    }
    // a reduced root n/d has n | c0 and d | lead
    let bound = ints[0].magnitude().max(ints.last().unwrap().magnitude()).clone();
    let target = BigInt::from(bound.clone()) * BigInt::from(bound) * 2 + 1;
    let derivative: Vec<BigInt> =
        ints.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut found: Vec<Rat> = Vec::new();
    let mut good_primes = 0usize;
    for p in crate::modp::PrimeStream::new() {
        if good_primes == 3 {
            break;
        }
        let fp: Vec<u64> = ints.iter().map(|c| big_to_u64_mod(c, p)).collect();
        if *fp.last().unwrap() == 0 {
            continue;
        }
        let Some(roots) = crate::modp::roots_mod_p(&fp, p) else {
            continue;
        };
        good_primes += 1;
        let dfp: Vec<u64> = derivative.iter().map(|c| big_to_u64_mod(c, p)).collect();
        for r0 in roots {
            // Newton lifting needs a simple root mod p
            if horner_mod_u64(&dfp, r0, p) == 0 {
                continue;
            }
            if let Some(r) = lift_root(&ints, &derivative, r0, p, &target) {
                if !found.contains(&r) {
                    found.push(r);
                }
            }
        }
    }
    found
}

fn horner_mod_u64(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (crate::modp::mul_mod(acc, x, p) + c % p) % p;
    }
    acc
}

fn horner_mod_big(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = mod_reduce(&(acc * x + c), m);
    }
    acc
}

/// Quadratic Newton lifting of a simple root mod p to a root mod p^(2^k)
/// past `target`, then rational reconstruction.
fn lift_root(
    ints: &[BigInt],
    derivative: &[BigInt],
    r0: u64,
    p: u64,
    target: &BigInt,
) -> Option<Rat> {
    let mut modulus = BigInt::from(p);
    let mut r = BigInt::from(r0);
    while modulus < *target {
        modulus = &modulus * &modulus;
        let fr = horner_mod_big(ints, &r, &modulus);
        let dfr = horner_mod_big(derivative, &r, &modulus);
        // the derivative is a unit mod p, hence mod every p-power
        let inv = mod_inverse(&dfr, &modulus);
        r = mod_reduce(&(&r - fr * inv), &modulus);
    }
    crate::modp::rat_reconstruct(&r, &modulus)
}

/// Whether f splits into linear factors over Q (counted with multiplicity).
pub fn splits_over_q(f: &Poly<Rat>) -> bool {
    let (_, factors) = factor_over_q(f);
    factors.iter().all(|(g, _)| g.deg() == 1)
}

pub fn is_irreducible(f: &Poly<Rat>) -> bool {
    if f.is_constant() {
        return false;
    }
    let (_, factors) = factor_over_q(f);
    factors.len() == 1 && factors[0].1 == 1
}

pub use crate::poly::yun_squarefree;

impl crate::poly::RootScalar for Rat {
    fn poly_roots(f: &Poly<Rat>) -> Vec<(Rat, usize)> {
        rational_roots(f)
    }
}

/// Whether f stays irreducible after reduction modulo the prime p. Returns
/// None when the reduction is not faithful (a denominator or the leading
/// coefficient vanishes mod p), so callers can only ever act on a definite
/// answer.
pub fn irreducible_mod_p(f: &Poly<Rat>, p: u64) -> Option<bool> {
    assert!(p >= 2);
    if f.is_zero() || f.is_constant() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut reduced = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        if (c.denom() % &pb).is_zero() {
            return None;
        }
        let den_inv = mod_inverse(&mod_reduce(c.denom(), &pb), &pb);
        let num = mod_reduce(c.numer(), &pb);
        reduced.push(((num * den_inv) % &pb).to_u64().unwrap());
    }
    if *reduced.last().unwrap() == 0 {
        return None; // degree dropped
    }
    if f.deg() == 1 {
        return Some(true);
    }
    let gp = fp_monic(&reduced, p);
    let dgp = fp_derivative(&gp, p);
    if fp_gcd(&gp, &dgp, p).len() != 1 {
        return Some(false); // repeated factor mod p
    }
    Some(berlekamp_factor_count(&gp, p) == 1)
}

/// Irreducible monic factors of a monic squarefree rational polynomial.
fn factor_squarefree(g: &Poly<Rat>) -> Vec<Poly<Rat>> {
    if g.deg() == 1 {
        return vec![g.clone()];
    }
    let gi = primitive_int_poly(g);
    let coeffs: Vec<BigInt> = gi.coeffs().iter().map(|r| r.numer().clone()).collect();
    zassenhaus(&coeffs)
        .into_iter()
        .map(|f| Poly::new(f.into_iter().map(Rat::from_integer).collect()).monic())
        .collect()
}

/// Primitive squarefree integer polynomial (positive leading coefficient)
/// into primitive integer irreducibles.
fn zassenhaus(g: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = g.len() - 1;
    if n == 1 {
        return vec![g.to_vec()];
    }
    let lc = g.last().unwrap().clone();

    // Prime selection: among the first few primes keeping g squarefree with
    // unit leading coefficient, take the one with the fewest modular factors.
    let mut best: Option<(u64, usize)> = None;
    let mut usable = 0;
    for p in odd_primes() {
        if (&lc % p).is_zero() {
            continue;
        }
        let gp = poly_mod_p(g, p);
        if gp.len() != n + 1 {
            continue;
        }
        let dgp = fp_derivative(&gp, p);
        if fp_gcd(&gp, &dgp, p).len() != 1 {
            continue;
        }
        let r = berlekamp_factor_count(&gp, p);
        if r == 1 {
            return vec![g.to_vec()];
        }
        if best.is_none_or(|(_, br)| r < br) {
            best = Some((p, r));
        }
        usable += 1;
        if usable == 4 {
            break;
        }
    }
    let (p, _) = best.expect("no usable prime found");
    let gp = fp_monic(&poly_mod_p(g, p), p);
    let modular = berlekamp(&gp, p);

    // Landau-Mignotte: coefficients of lc(g) * (any monic rational factor)
    // are bounded by |lc| * binom(n, n/2) * ||g||_2.
    let norm2: BigInt = {
        let s: BigInt = g.iter().map(|a| a * a).sum();
        s.sqrt() + 1
    };
    let bound = lc.abs() * binom_big(n, n / 2) * norm2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    // pad to a power-of-two exponent so quadratic lifting lands exactly
    let big_k = k.next_power_of_two();
    let modulus = pb.pow(big_k);

    let lc_inv = mod_inverse(&lc, &modulus);
    let f_monic: Vec<BigInt> = g.iter().map(|a| mod_reduce(&(a * &lc_inv), &modulus)).collect();
    let lifted = hensel_tree(
        &f_monic,
        &modular.iter().map(|f| f.iter().map(|&c| BigInt::from(c)).collect()).collect::<Vec<_>>(),
        &pb,
        big_k,
    );

    recombine(g.to_vec(), lifted, &modulus)
}

/// Subset recombination with exact trial division. `lifted` holds monic
/// factors of g/lc modulo `modulus`; true integer factors appear as
/// primitive parts of lc * (subset product) reduced symmetrically.
fn recombine(mut g: Vec<BigInt>, lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut avail: Vec<Vec<BigInt>> = lifted;
    'outer: loop {
        let deg_g = g.len() - 1;
        if avail.len() <= 1 || deg_g <= 1 {
            break;
        }
        let lc = g.last().unwrap().clone();
        let mut d = 1;
        while 2 * d <= avail.len() {
            let mut idx: Vec<usize> = (0..d).collect();
            loop {
                let mut prod = vec![mod_reduce(&lc, modulus)];
                for &i in &idx {
                    prod = modm_mul(&prod, &avail[i], modulus);
                }
                if prod.len() - 1 <= deg_g {
                    let cand: Vec<BigInt> =
                        prod.iter().map(|a| sym_reduce(a, modulus)).collect();
                    if let Some((factor, quotient)) = try_divide(&g, &cand) {
                        for &i in idx.iter().rev() {
                            avail.remove(i);
                        }
                        out.push(factor);
                        g = quotient;
                        continue 'outer;
                    }
                }
                if !next_combination(&mut idx, avail.len()) {
                    break;
                }
            }
            d += 1;
        }
        break;
    }
    if g.len() > 1 {
        out.push(positive_primitive(&g));
    }
    out
}

/// If primitive_part(cand) divides g over Z, returns (factor, g / factor).
fn try_divide(g: &[BigInt], cand: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    if cand.last().is_none_or(Zero::is_zero) {
        return None;
    }
    let factor = positive_primitive(cand);
    let fq = Poly::new(factor.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let gq = Poly::new(g.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let (q, r) = gq.divrem(&fq);
    if !r.is_zero() {
        return None;
    }
    let qi = primitive_int_poly(&q);
    let mut quotient: Vec<BigInt> = qi.coeffs().iter().map(|c| c.numer().clone()).collect();
    // primitive * primitive = primitive, so q was already integral up to sign
    if g.last().unwrap().sign() != (quotient.last().unwrap() * factor.last().unwrap()).sign() {
        for c in quotient.iter_mut() {
            *c = -c.clone();
        }
    }
    Some((factor, quotient))
}

fn positive_primitive(f: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    assert!(!g.is_zero());
    if f.last().unwrap().is_negative() {
        g = -g;
    }
    f.iter().map(|c| c / &g).collect()
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ---- Hensel lifting (monic, divide and conquer) ----

/// Lifts monic factors of the monic `f` from mod p to mod p^(2^log2k)... the
/// exponent `k` must be a power of two. Runtime asserts certify each step.
fn hensel_tree(f: &[BigInt], factors: &[Vec<BigInt>], p: &BigInt, k: u32) -> Vec<Vec<BigInt>> {
    let modulus = p.pow(k);
    if factors.len() == 1 {
        return vec![f.iter().map(|c| mod_reduce(c, &modulus)).collect()];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let mut a0 = vec![BigInt::one()];
    for fac in left {
        a0 = modm_mul(&a0, fac, p);
    }
    let mut b0 = vec![BigInt::one()];
    for fac in right {
        b0 = modm_mul(&b0, fac, p);
    }
    let (s0, t0) = bezout_mod_p(&a0, &b0, p);
    let (a, b) = hensel_pair(f, a0, b0, s0, t0, p, k);
    let mut out = hensel_tree(&a, left, p, k);
    out.extend(hensel_tree(&b, right, p, k));
    out
}

/// Quadratic Hensel steps taking f = A*B from mod p to mod p^k (k a power of
/// two), keeping A and B monic.
#[allow(clippy::too_many_arguments)]
fn hensel_pair(
    f: &[BigInt],
    mut a: Vec<BigInt>,
    mut b: Vec<BigInt>,
    mut s: Vec<BigInt>,
    mut t: Vec<BigInt>,
    p: &BigInt,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut e = 1u32;
    let mut m = p.clone();
    while e < k {
        let m2 = (&m) * (&m);
        let fe: Vec<BigInt> = f.iter().map(|c| mod_reduce(c, &m2)).collect();
        // factor update
        let err = modm_sub(&fe, &modm_mul(&a, &b, &m2), &m2);
        let se = modm_mul(&s, &err, &m2);
        let (q, r) = modm_divrem_monic(&se, &b, &m2);
        let a_new = modm_add(&modm_add(&a, &modm_mul(&t, &err, &m2), &m2), &modm_mul(&q, &a, &m2), &m2);
        let b_new = modm_add(&b, &r, &m2);
        // Bezout update
        let sb = modm_sub(
            &modm_add(&modm_mul(&s, &a_new, &m2), &modm_mul(&t, &b_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let sbs = modm_mul(&s, &sb, &m2);
        let (c, d) = modm_divrem_monic(&sbs, &b_new, &m2);
        let s_new = modm_sub(&s, &d, &m2);
        let t_new = modm_sub(
            &modm_sub(&t, &modm_mul(&t, &sb, &m2), &m2),
            &modm_mul(&c, &a_new, &m2),
            &m2,
        );
        a = a_new;
        b = b_new;
        s = s_new;
        t = t_new;
        m = m2;
        e *= 2;
        assert!(a.last().unwrap().is_one() && b.last().unwrap().is_one(), "hensel lost monicity");
    }
    let err = modm_sub(
        &f.iter().map(|x| mod_reduce(x, &m)).collect::<Vec<_>>(),
        &modm_mul(&a, &b, &m),
        &m,
    );
    assert!(err.iter().all(Zero::is_zero), "hensel lift verification failed");
    (a, b)
}

/// Bezout pair s*a + t*b = 1 mod p for coprime monic a, b mod p.
fn bezout_mod_p(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let pu = p.to_u64().expect("small prime");
    let au: Vec<u64> = a.iter().map(|c| big_to_u64_mod(c, pu)).collect();
    let bu: Vec<u64> = b.iter().map(|c| big_to_u64_mod(c, pu)).collect();
    let (g, s, t) = fp_ext_gcd(&fp_trim(au), &fp_trim(bu), pu);
    assert_eq!(g.len(), 1, "hensel halves not coprime");
    let ginv = fp_inv(g[0], pu);
    let scale = |f: &[u64]| -> Vec<BigInt> {
        f.iter().map(|&c| BigInt::from(mulmod(c, ginv, pu))).collect()
    };
    (scale(&s), scale(&t))
}

// ---- dense BigInt polynomials modulo m (ascending coefficients) ----

fn mod_reduce(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x % m;
    if r.is_negative() { r + m } else { r }
}

fn sym_reduce(x: &BigInt, m: &BigInt) -> BigInt {
    let r = mod_reduce(x, m);
    if &r * 2 > *m { r - m } else { r }
}

fn modm_trim(mut f: Vec<BigInt>) -> Vec<BigInt> {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn modm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    modm_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default()
                    + b.get(i).cloned().unwrap_or_default();
                mod_reduce(&x, m)
            })
            .collect(),
    )
}

fn modm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    modm_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default()
                    - b.get(i).cloned().unwrap_or_default();
                mod_reduce(&x, m)
            })
            .collect(),
    )
}

fn modm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    modm_trim(out.into_iter().map(|c| mod_reduce(&c, m)).collect())
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn modm_divrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(d.last().is_some_and(One::is_one), "divisor must be monic");
    let dd = d.len() - 1;
    if a.len() <= dd {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dd];
    for k in (dd..rem.len()).rev() {
        let q = rem[k].clone();
        if q.is_zero() {
            continue;
        }
        quot[k - dd] = q.clone();
        for (i, dc) in d.iter().enumerate() {
            let t = &rem[k - dd + i] - &q * dc;
            rem[k - dd + i] = mod_reduce(&t, m);
        }
    }
    (modm_trim(quot), modm_trim(rem))
}

fn mod_inverse(x: &BigInt, m: &BigInt) -> BigInt {
    let eg = x.extended_gcd(m);
    assert!(eg.gcd.is_one(), "not invertible modulo m");
    mod_reduce(&eg.x, m)
}

fn big_to_u64_mod(x: &BigInt, p: u64) -> u64 {
    let r = mod_reduce(x, &BigInt::from(p));
    r.to_u64().unwrap()
}

fn binom_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

// ---- F_p polynomial arithmetic (u64 coefficients, ascending) ----

fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0);
    powmod(a, p - 2, p)
}

fn fp_trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    fp_trim(f.iter().map(|c| big_to_u64_mod(c, p)).collect())
}

fn fp_monic(f: &[u64], p: u64) -> Vec<u64> {
    let inv = fp_inv(*f.last().unwrap(), p);
    f.iter().map(|&c| mulmod(c, inv, p)).collect()
}

fn fp_derivative(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return Vec::new();
    }
    fp_trim(
        f[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| mulmod(c, (i as u64 + 1) % p, p))
            .collect(),
    )
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!d.is_empty());
    if a.len() < d.len() {
        return (Vec::new(), a.to_vec());
    }
    let dl_inv = fp_inv(*d.last().unwrap(), p);
    let dd = d.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - dd];
    for k in (dd..rem.len()).rev() {
        if rem[k] == 0 {
            continue;
        }
        let q = mulmod(rem[k], dl_inv, p);
        quot[k - dd] = q;
        for (i, &dc) in d.iter().enumerate() {
            let t = (rem[k - dd + i] + p - mulmod(q, dc, p) % p) % p;
            rem[k - dd + i] = t;
        }
    }
    (fp_trim(quot), fp_trim(rem))
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = fp_trim(a.to_vec());
    let mut y = fp_trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    if x.is_empty() { x } else { fp_monic(&x, p) }
}

fn fp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    // returns (g, s, t) with s*a + t*b = g
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let news = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let newt = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = news;
        t0 = t1;
        t1 = newt;
    }
    (r0, s0, t0)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_powmod(mut base: Vec<u64>, mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    base = fp_divrem(&base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &base, p), modulus, p).1;
        }
        base = fp_divrem(&fp_mul(&base, &base, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

/// Berlekamp matrix kernel dimension = number of irreducible factors of the
/// monic squarefree g mod p.
fn berlekamp_factor_count(g: &[u64], p: u64) -> usize {
    berlekamp_kernel(&fp_monic(g, p), p).len()
}

/// Kernel basis of (Frobenius - identity) acting on F_p[x]/(g).
fn berlekamp_kernel(g: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = g.len() - 1;
    // row i = coefficients of x^(p*i) mod g
    let xp = fp_powmod(vec![0, 1], p, g, p);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for i in 0..n {
        if i > 0 {
            cur = fp_divrem(&fp_mul(&cur, &xp, p), g, p).1;
        }
        let mut row = vec![0u64; n];
        for (j, &c) in cur.iter().enumerate() {
            row[j] = c;
        }
        rows.push(row);
    }
    // h^p = h means h * (Rows - I) = 0; kernel of the transpose
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[j][i] = (rows[i][j] + p - if i == j { 1 } else { 0 }) % p;
        }
    }
    fp_kernel(m, p)
}

/// Kernel basis by Gaussian elimination mod p.
fn fp_kernel(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fp_inv(m[r][c], p);
        for j in 0..cols {
            m[r][j] = mulmod(m[r][j], inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - mulmod(f, m[r][j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for fc in 0..cols {
        if pivots.contains(&fc) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[fc] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[ri][fc]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Deterministic Berlekamp: all monic irreducible factors of the monic
/// squarefree g over F_p.
fn berlekamp(g: &[u64], p: u64) -> Vec<Vec<u64>> {
    let kernel = berlekamp_kernel(g, p);
    let r = kernel.len();
    let mut factors = vec![g.to_vec()];
    if r == 1 {
        return factors;
    }
    for v in &kernel {
        if factors.len() == r {
            break;
        }
        let vpoly = fp_trim(v.clone());
        if vpoly.len() <= 1 {
            continue; // constant kernel vector splits nothing
        }
        let mut next = Vec::new();
        for w in std::mem::take(&mut factors) {
            if w.len() <= 2 {
                next.push(w);
                continue;
            }
            let mut rem = w.clone();
            let mut pieces = Vec::new();
            for s in 0..p {
                if rem.len() <= 1 {
                    break;
                }
                let mut shifted = vpoly.clone();
                shifted[0] = (shifted[0] + p - s) % p;
                let d = fp_gcd(&rem, &fp_trim(shifted), p);
                if d.len() > 1 {
                    pieces.push(d.clone());
                    rem = fp_monic(&fp_divrem(&rem, &d, p).0, p);
                }
            }
            if rem.len() > 1 {
                pieces.push(rem);
            }
            next.extend(pieces);
        }
        factors = next;
    }
    assert_eq!(factors.len(), r, "berlekamp split incomplete");
    factors.sort();
    factors
}
