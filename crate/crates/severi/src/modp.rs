//! Deterministic mod-p linear algebra with Chinese remaindering and
//! rational reconstruction. Used to accelerate exact kernel computations:
//! candidates are computed modulo a few large primes, lifted back to Q, and
//! always verified exactly by the caller, so a bad prime can cost time but
//! never correctness.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; the argument must be nonzero mod p.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; the witness set decides primality for all
/// 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes descending from just below 2^62, in a fixed order. The 2-bit
/// headroom keeps sums of a few residues inside u64.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> PrimeStream {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        PrimeStream::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while !is_prime_u64(self.next) {
            self.next -= 2;
        }
        let p = self.next;
        self.next -= 2;
        Some(p)
    }
}

pub fn bigint_mod_p(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    let (_, digits) = r.to_u64_digits();
    match digits.as_slice() {
        [] => 0,
        [d] => *d,
        _ => unreachable!("residue fits one limb"),
    }
}

/// Reduction of a rational mod p; None when the denominator vanishes.
pub fn rat_mod_p(x: &Rat, p: u64) -> Option<u64> {
    let den = bigint_mod_p(x.denom(), p);
    if den == 0 {
        return None;
    }
    Some(mul_mod(bigint_mod_p(x.numer(), p), inv_mod(den, p), p))
}

/// In-place row reduction to reduced echelon form over F_p; returns the
/// pivot columns and drops zero rows.
pub fn rref_mod_p(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let c = rows[r][col];
                for k in 0..ncols {
                    let sub = mul_mod(c, rows[rank][k], p);
                    rows[r][k] = (rows[r][k] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Canonical basis (reduced echelon rows with their pivot columns) of the
/// solution space of `rows * x = 0` over F_p.
pub fn kernel_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut sys: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let pivots = rref_mod_p(&mut sys, p);
    let mut kernel = Vec::with_capacity(ncols - pivots.len());
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in sys.iter().zip(&pivots) {
            if row[free] % p != 0 {
                v[pc] = p - row[free] % p;
            }
        }
        kernel.push(v);
    }
    let kpivots = rref_mod_p(&mut kernel, p);
    (kernel, kpivots)
}

/// Chinese remainder lift of per-prime residues to the canonical residue
/// modulo the product; returns (value, modulus).
pub fn crt_combine(residues: &[u64], primes: &[u64]) -> (BigInt, BigInt) {
    assert_eq!(residues.len(), primes.len());
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let cur = bigint_mod_p(&value, p);
        let m = bigint_mod_p(&modulus, p);
        let delta = mul_mod((r + p - cur) % p, inv_mod(m, p), p);
        value += &modulus * BigInt::from(delta);
        modulus *= BigInt::from(p);
    }
    (value, modulus)
}

/// Lifts a residue to the unique fraction n/d with |n|, d <= sqrt(m/2) when
/// one exists (extended Euclid truncated at the bound).
pub fn rat_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = a.clone();
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1.abs() > bound {
        if r1.is_zero() {
            return None;
        }
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if num_integer::gcd(r1.clone(), t1.clone()) != BigInt::one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

// --- dense univariate polynomials over F_p, little-endian coefficients ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of a modulo b; b must be nonzero.
pub fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty());
    let mut r: Vec<u64> = a.iter().map(|&x| x % p).collect();
    poly_trim(&mut r);
    let lead_inv = inv_mod(*b.last().unwrap() % p, p);
    while r.len() >= b.len() {
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            let sub = mul_mod(c, bi % p, p);
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Monic gcd over F_p.
pub fn poly_gcd_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.iter().map(|&c| c % p).collect();
    let mut y: Vec<u64> = b.iter().map(|&c| c % p).collect();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem_mod_p(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        for c in x.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

pub fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai % p == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai % p, bj % p, p)) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// base^e modulo the monic-equivalent of f, over F_p.
pub fn poly_powmod(base: &[u64], e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut sq = poly_rem_mod_p(base, f, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem_mod_p(&poly_mul_mod_p(&acc, &sq, p), f, p);
        }
        sq = poly_rem_mod_p(&poly_mul_mod_p(&sq, &sq, p), f, p);
        e >>= 1;
    }
    acc
}

pub fn poly_derivative_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(i as u64 % p, c % p, p))
        .collect();
    poly_trim(&mut out);
    out
}

/// Degrees of the irreducible factors of a squarefree monic polynomial over
/// F_p, with how much total degree each factor degree carries.
pub fn distinct_degree_profile(f: &[u64], p: u64) -> Vec<(usize, usize)> {
    let mut f: Vec<u64> = f.iter().map(|&c| c % p).collect();
    poly_trim(&mut f);
    assert!(f.len() >= 2, "need positive degree");
    // normalize monic
    let inv = inv_mod(*f.last().unwrap(), p);
    for c in f.iter_mut() {
        *c = mul_mod(*c, inv, p);
    }
    let mut out = Vec::new();
    let mut h = vec![0u64, 1]; // x
    let mut d = 0usize;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.len() - 1, f.len() - 1));
            break;
        }
        h = poly_powmod(&h, p, &f, p);
        // gcd(h - x, f) collects all factors of degree d
        let mut hx = h.clone();
        while hx.len() < 2 {
            hx.push(0);
        }
        hx[1] = (hx[1] + p - 1) % p;
        poly_trim(&mut hx);
        if hx.is_empty() {
            out.push((d, f.len() - 1));
            break;
        }
        let g = poly_gcd_mod_p(&hx, &f, p);
        if g.len() > 1 {
            out.push((d, g.len() - 1));
            let (q, r) = poly_divmod_exact(&f, &g, p);
            debug_assert!(r.is_empty());
            f = q;
            h = poly_rem_mod_p(&h, &f, p);
        }
    }
    out
}

fn poly_divmod_exact(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r: Vec<u64> = a.iter().map(|&x| x % p).collect();
    poly_trim(&mut r);
    let lead_inv = inv_mod(*b.last().unwrap() % p, p);
    let mut q = vec![0u64; r.len().saturating_sub(b.len() - 1)];
    while r.len() >= b.len() {
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - b.len();
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let sub = mul_mod(c, bi % p, p);
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    poly_trim(&mut q);
    (q, r)
}

/// Monic squarefree part f / gcd(f, f') over F_p.
pub fn squarefree_part_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let mut fp: Vec<u64> = f.iter().map(|&c| c % p).collect();
    poly_trim(&mut fp);
    if fp.len() <= 1 {
        return fp;
    }
    let g = poly_gcd_mod_p(&fp, &poly_derivative_mod_p(&fp, p), p);
    let mut out = if g.len() <= 1 {
        fp
    } else {
        let (q, r) = poly_divmod_exact(&fp, &g, p);
        debug_assert!(r.is_empty());
        q
    };
    if let Some(&lead) = out.last() {
        let inv = inv_mod(lead, p);
        for c in out.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    out
}

/// All roots in F_p of a polynomial that is squarefree mod p, found by
/// splitting the linear-factor part with deterministic shifts. Returns None
/// if the splitting stalls (pathological prime), never an incomplete list.
pub fn roots_mod_p(f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut f: Vec<u64> = f.iter().map(|&c| c % p).collect();
    poly_trim(&mut f);
    assert!(f.len() >= 2);
    // linear-factor part: gcd(x^p - x, f)
    let xp = poly_powmod(&[0, 1], p, &f, p);
    let mut xpx = xp;
    while xpx.len() < 2 {
        xpx.push(0);
    }
    xpx[1] = (xpx[1] + p - 1) % p;
    poly_trim(&mut xpx);
    let lin = if xpx.is_empty() { f.clone() } else { poly_gcd_mod_p(&xpx, &f, p) };
    let mut roots = Vec::new();
    let mut stack = vec![lin];
    let mut shift = 0u64;
    let mut budget = 512usize;
    while let Some(g) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        if g.len() == 2 {
            // monic gcds: root of x + c is -c
            let c = mul_mod(g[0], inv_mod(g[1], p), p);
            roots.push((p - c) % p);
            continue;
        }
        if budget == 0 {
            return None;
        }
        budget -= 1;
        // g(x) | x^p - x, so gcd with (x+shift)^((p-1)/2) - 1 splits it
        shift += 1;
        let base = vec![shift % p, 1];
        let mut w = poly_powmod(&base, (p - 1) / 2, &g, p);
        if w.is_empty() {
            w = vec![p - 1];
        } else {
            w[0] = (w[0] + p - 1) % p;
        }
        poly_trim(&mut w);
        if w.is_empty() {
            stack.push(g);
            continue;
        }
        let d = poly_gcd_mod_p(&w, &g, p);
        if d.len() <= 1 || d.len() == g.len() {
            stack.push(g);
            continue;
        }
        let (q, r) = poly_divmod_exact(&g, &d, p);
        debug_assert!(r.is_empty());
        stack.push(d);
        stack.push(q);
    }
    roots.sort_unstable();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;
    use crate::rat::rat;

    #[test]
    fn prime_stream_yields_large_distinct_primes() {
        let primes: Vec<u64> = PrimeStream::new().take(8).collect();
        for w in primes.windows(2) {
            assert!(w[0] > w[1]);
        }
        for &p in &primes {
            assert!(is_prime_u64(p));
            assert!(p < 1 << 62 && p > 1 << 61);
        }
    }

    #[test]
    fn primality_agrees_with_trial_division_below_2000() {
        let sieve = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), sieve(n), "n = {n}");
        }
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn modular_inverse_and_power() {
        let p = PrimeStream::new().next().unwrap();
        for a in [1u64, 2, 3, 12345, p - 1] {
            assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
        }
        assert_eq!(pow_mod(3, 0, p), 1);
        assert_eq!(pow_mod(2, 62, p), ((1u128 << 62) % p as u128) as u64);
    }

    #[test]
    fn kernel_mod_p_matches_exact_kernel() {
        let p = PrimeStream::new().next().unwrap();
        // rank-2 integer matrix with kernel dimension 2
        let m = Mat::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1), rat(8, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(-1, 1)],
        ]);
        let exact = m.rref().kernel_basis();
        let rows: Vec<Vec<u64>> = (0..3)
            .map(|i| (0..4).map(|j| rat_mod_p(&m[(i, j)], p).unwrap()).collect())
            .collect();
        let (kernel, pivots) = kernel_mod_p(&rows, 4, p);
        assert_eq!(kernel.len(), exact.len());
        assert_eq!(pivots.len(), kernel.len());
        // the mod-p kernel rows are reductions of the canonical exact rows
        let canon = crate::mat::Subspace::from_rows(exact).basis_rows();
        for (row, exact_row) in kernel.iter().zip(&canon) {
            for (x, ex) in row.iter().zip(exact_row) {
                assert_eq!(*x, rat_mod_p(ex, p).unwrap());
            }
        }
    }

    #[test]
    fn crt_and_reconstruction_round_trip() {
        let primes: Vec<u64> = PrimeStream::new().take(4).collect();
        let samples = [
            rat(0, 1),
            rat(22, 7),
            rat(-355, 113),
            rat(123456789, 987654321),
            Rat::new(BigInt::from(10).pow(25) + 1, BigInt::from(3)),
            Rat::new(BigInt::from(-7), BigInt::from(10).pow(20) + 9),
        ];
        for x in &samples {
            let residues: Vec<u64> = primes.iter().map(|&p| rat_mod_p(x, p).unwrap()).collect();
            let (v, m) = crt_combine(&residues, &primes);
            assert_eq!(rat_reconstruct(&v, &m), Some(x.clone()), "x = {x}");
        }
    }

    #[test]
    fn distinct_degree_profile_of_known_factorizations() {
        let p = PrimeStream::new().next().unwrap();
        // (x - 1)(x - 2)(x^2 + 1 shifted to stay irreducible?) build from
        // known factors directly: two linears and one irreducible quadratic
        let lin = poly_mul_mod_p(&[p - 1, 1], &[p - 2, 1], p);
        // x^2 - a with a a quadratic nonresidue is irreducible
        let mut a = 2u64;
        while pow_mod(a, (p - 1) / 2, p) == 1 {
            a += 1;
        }
        let quad = vec![p - a, 0, 1];
        let f = poly_mul_mod_p(&lin, &quad, p);
        let mut profile = distinct_degree_profile(&f, p);
        profile.sort_unstable();
        assert_eq!(profile, vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn roots_mod_p_finds_all_roots() {
        let p = PrimeStream::new().next().unwrap();
        // (x - 3)(x - 7)(x - 1000000007)(x^2 - a)
        let mut f = poly_mul_mod_p(&[p - 3, 1], &[p - 7, 1], p);
        f = poly_mul_mod_p(&f, &[p - 1000000007, 1], p);
        let mut a = 2u64;
        while pow_mod(a, (p - 1) / 2, p) == 1 {
            a += 1;
        }
        f = poly_mul_mod_p(&f, &[p - a, 0, 1], p);
        assert_eq!(roots_mod_p(&f, p), Some(vec![3, 7, 1000000007]));
        // no roots at all
        assert_eq!(roots_mod_p(&[p - a, 0, 1], p), Some(vec![]));
    }

    #[test]
    fn poly_gcd_and_powmod_consistency() {
        let p = PrimeStream::new().next().unwrap();
        let f = poly_mul_mod_p(&[1, 1], &[2, 1], p);
        let g = poly_mul_mod_p(&[1, 1], &[5, 1], p);
        assert_eq!(poly_gcd_mod_p(&f, &g, p), vec![1, 1]);
        // Fermat: x^p = x mod (x^2 - x), check powmod plumbing
        let modulus = vec![0, p - 1, 1];
        let xp = poly_powmod(&[0, 1], p, &modulus, p);
        assert_eq!(xp, vec![0, 1]);
    }

    #[test]
    fn reconstruction_needs_enough_primes() {
        // a fraction too tall for a single 62-bit prime reconstructs wrongly
        // or not at all from one residue, and correctly from three
        let x = Rat::new(BigInt::from(10).pow(25) + 1, BigInt::from(10).pow(24) + 7);
        let primes: Vec<u64> = PrimeStream::new().take(3).collect();
        let residues: Vec<u64> = primes.iter().map(|&p| rat_mod_p(&x, p).unwrap()).collect();
        let (v1, m1) = crt_combine(&residues[..1], &primes[..1]);
        assert_ne!(rat_reconstruct(&v1, &m1), Some(x.clone()));
        let (v3, m3) = crt_combine(&residues, &primes);
        assert_eq!(rat_reconstruct(&v3, &m3), Some(x));
    }
}
