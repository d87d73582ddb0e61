//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator, the only scalar type the rest of the crate builds
//! on. Serialization is the string form `p/q` (or `p` when `q = 1`) with the
//! sign on the numerator, which is what `Display`/`FromStr` on the underlying
//! ratio type already produce.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// `p/q` as a reduced rational. Panics on `q = 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`; rejects empty strings and zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rat::from_integer)
            .map_err(|e| format!("bad integer {s:?}: {e}")),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let q: BigInt = q.trim().parse().map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(p, q))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denominator_lcm(values: &[Rat]) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        l = l.lcm(v.denom());
    }
    l
}

/// Scales rationals to coprime integers: returns `(ints, scale)` with
/// `ints[i] = values[i] * scale`, `scale > 0`, and `gcd(ints) = 1` unless all
/// values are zero.
pub fn to_primitive_integers(values: &[Rat]) -> (Vec<BigInt>, Rat) {
    let l = denominator_lcm(values);
    let ints: Vec<BigInt> = values.iter().map(|v| v.numer() * &l / v.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return (ints, Rat::from_integer(l));
    }
    let ints = ints.iter().map(|x| x / &g).collect();
    (ints, Rat::new(l, g))
}

/// Exact q-adic valuation of a nonzero rational (positive prime q).
pub fn valuation(r: &Rat, q: &BigInt) -> i64 {
    assert!(!r.is_zero(), "valuation of zero");
    let count = |mut n: BigInt| -> i64 {
        let mut v = 0;
        n = n.abs();
        while (&n % q).is_zero() {
            n /= q;
            v += 1;
        }
        v
    };
    count(r.numer().clone()) - count(r.denom().clone())
}

/// The primes up to `bound` dividing `n`, by trial division. A leftover
/// cofactor with all factors above the bound is reported separately so
/// callers can tell the scan was incomplete.
pub fn small_prime_factors(n: &BigInt, bound: u64) -> (Vec<u64>, BigInt) {
    let mut rest = n.abs();
    let mut primes = Vec::new();
    if rest.is_zero() || rest.is_one() {
        return (primes, rest);
    }
    let mut p = 2u64;
    while p <= bound {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        if (&rest % &bp).is_zero() {
            primes.push(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Any factor <= bound has been stripped, so a leftover <= bound is itself
    // a prime in range.
    if !rest.is_one() && rest <= BigInt::from(bound) {
        primes.push(u64::try_from(&rest).expect("fits"));
        rest = BigInt::one();
    }
    (primes, rest)
}

/// Exact integer cube root when `n` is a perfect cube.
pub fn exact_cube_root(n: &BigInt) -> Option<BigInt> {
    let r = n.abs().nth_root(3);
    let signed = if n.is_negative() { -r } else { r };
    if &signed * &signed * &signed == *n {
        Some(signed)
    } else {
        None
    }
}

/// Exact integer square root when `n` is a perfect square (n >= 0).
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "17", "-5"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // canonicalization: sign on numerator, lowest terms
        assert_eq!(format_rat(&parse_rat("4/-6").unwrap()), "-2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn primitive_integers() {
        let vals = vec![rat(1, 2), rat(-3, 4), rat_int(0)];
        let (ints, scale) = to_primitive_integers(&vals);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(Rat::from_integer(ints[i].clone()), v * &scale);
        }
    }

    #[test]
    fn valuations_and_roots() {
        assert_eq!(valuation(&rat(8, 3), &BigInt::from(2)), 3);
        assert_eq!(valuation(&rat(3, 8), &BigInt::from(2)), -3);
        assert_eq!(exact_cube_root(&BigInt::from(-27)), Some(BigInt::from(-3)));
        assert_eq!(exact_cube_root(&BigInt::from(26)), None);
        assert_eq!(exact_sqrt(&BigInt::from(49)), Some(BigInt::from(7)));
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
    }

    #[test]
    fn small_factors() {
        let (ps, rest) = small_prime_factors(&BigInt::from(2 * 2 * 7 * 11), 100);
        assert_eq!(ps, vec![2, 7, 11]);
        assert!(rest.is_one());
    }
}
