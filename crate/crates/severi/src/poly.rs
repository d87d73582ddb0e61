//! Univariate polynomials over an exact field scalar.
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial has an empty coefficient vector. Division, gcd, resultants
//! and interpolation are exact.

use num_traits::Zero;

use crate::rat::Rat;
use crate::scalar::FieldScalar;

#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: FieldScalar> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![K::one()] }
    }

    pub fn constant(c: K) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![K::zero(), K::one()] }
    }

    /// c * x^k
    pub fn monomial(c: K, k: usize) -> Self {
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| K::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; panics on the zero polynomial.
    pub fn deg(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> K {
        assert!(!self.is_zero());
        self.coeffs.last().cloned().unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let dl = divisor.leading();
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].clone() / dl.clone();
            quot[k - dd] = q.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = rem[k - dd + i].clone() - q.clone() * dc.clone();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        assert!(!self.is_zero());
        self.scale(&self.leading().inv())
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() { a } else { a.monic() }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * K::from_int((i + 1) as i64))
                .collect(),
        )
    }

    /// self(other(x))
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Whether the polynomial has no repeated roots (gcd with derivative is
    /// constant).
    pub fn is_squarefree(&self) -> bool {
        assert!(!self.is_zero());
        self.gcd(&self.derivative()).is_constant()
    }

    /// Resultant of two polynomials via the Euclidean recursion; exact over
    /// any field.
    pub fn resultant(&self, other: &Self) -> K {
        fn go<K: FieldScalar>(a: &Poly<K>, b: &Poly<K>) -> K {
            if a.is_zero() || b.is_zero() {
                // res with a zero polynomial vanishes unless both are (nonzero)
                // constants, which is excluded here
                return K::zero();
            }
            let (da, db) = (a.deg(), b.deg());
            if da == 0 {
                return pow_k(&a.leading(), db);
            }
            if db == 0 {
                return pow_k(&b.leading(), da);
            }
            let r = a.rem(b);
            if r.is_zero() {
                return K::zero();
            }
            let sign = if (da * db) % 2 == 1 { -K::one() } else { K::one() };
            sign * pow_k(&b.leading(), da - r.deg()) * go(b, &r)
        }
        fn pow_k<K: FieldScalar>(x: &K, e: usize) -> K {
            let mut acc = K::one();
            for _ in 0..e {
                acc = acc * x.clone();
            }
            acc
        }
        go(self, other)
    }

    /// Discriminant (-1)^(n(n-1)/2) res(f, f') / lc(f).
    pub fn discriminant(&self) -> K {
        let n = self.deg();
        assert!(n >= 1);
        let r = self.resultant(&self.derivative());
        let s = if (n * (n - 1) / 2) % 2 == 1 { -K::one() } else { K::one() };
        s * r / self.leading()
    }
}

impl<K: FieldScalar> std::fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "{c:?}*x")?,
                _ => write!(f, "{c:?}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Scalars whose univariate polynomials support exact root finding in the
/// scalar's own field. Implemented for rationals (via integer factorization
/// of the primitive part) and for number-field elements (via Trager norms).
pub trait RootScalar: FieldScalar {
    /// All roots lying in the field itself, with multiplicities, in a
    /// deterministic order. The polynomial splits into linear factors
    /// exactly when the multiplicities sum to its degree.
    fn poly_roots(f: &Poly<Self>) -> Vec<(Self, usize)>;
}

/// Yun's algorithm over any field of characteristic zero: monic f equals
/// prod out_i^(i) with the out_i squarefree, pairwise coprime and monic.
pub fn yun_squarefree<K: FieldScalar>(f: &Poly<K>) -> Vec<(Poly<K>, usize)> {
    assert!(!f.is_zero() && !f.is_constant());
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.divrem(&a).0;
    let mut c = df.divrem(&a).0.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let p = b.gcd(&c);
        if !p.is_constant() {
            out.push((p.clone(), i));
        }
        b = b.divrem(&p).0;
        c = c.divrem(&p).0.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Interpolating polynomial through distinct sample points (Newton form,
/// exact). Degree is at most points.len() - 1.
pub fn interpolate<K: FieldScalar>(points: &[(K, K)]) -> Poly<K> {
    let n = points.len();
    assert!(n > 0);
    // divided differences
    let mut dd: Vec<K> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].clone() - dd[i - 1].clone();
            let den = points[i].0.clone() - points[i - level].0.clone();
            assert!(!den.is_zero(), "repeated interpolation node");
            dd[i] = num / den;
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        let lin = Poly::new(vec![-points[i].0.clone(), K::one()]);
        acc = if i + 1 == n {
            Poly::constant(dd[i].clone())
        } else {
            acc.mul(&lin).add(&Poly::constant(dd[i].clone()))
        };
    }
    acc
}

/// Clears denominators and content: returns the primitive integer-coefficient
/// polynomial with positive leading coefficient that is a rational multiple
/// of the input.
pub fn primitive_int_poly(f: &Poly<Rat>) -> Poly<Rat> {
    use num_traits::Signed;
    assert!(!f.is_zero());
    let (ints, _) = crate::rat::to_primitive_integers(f.coeffs());
    let mut coeffs: Vec<Rat> = ints.into_iter().map(Rat::from_integer).collect();
    if coeffs.last().unwrap().is_negative() {
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    Poly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    type P = Poly<Rat>;

    #[test]
    fn arithmetic_basics() {
        let f = P::from_int_coeffs(&[1, 2, 1]); // (x+1)^2
        let g = P::from_int_coeffs(&[1, 1]);
        assert_eq!(g.mul(&g), f);
        assert_eq!(f.eval(&rat_int(2)), rat_int(9));
        assert_eq!(f.derivative(), P::from_int_coeffs(&[2, 2]));
        assert_eq!(f.compose(&P::from_int_coeffs(&[-1, 1])).coeffs(), &[
            rat_int(0),
            rat_int(0),
            rat_int(1)
        ]);
    }

    #[test]
    fn divrem_and_gcd() {
        let a = P::from_int_coeffs(&[-1, 0, 0, 1]); // x^3 - 1
        let b = P::from_int_coeffs(&[-1, 0, 1]); // x^2 - 1
        let (q, r) = a.divrem(&b);
        assert_eq!(a, q.mul(&b).add(&r));
        assert!(r.deg() < b.deg());
        assert_eq!(a.gcd(&b), P::from_int_coeffs(&[-1, 1]));
        assert!(a.is_squarefree());
        assert!(!a.mul(&a).is_squarefree());
    }

    #[test]
    fn divrem_random_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..40 {
            let da = rng.random_range(0..8);
            let db = rng.random_range(1..5);
            let a = P::new((0..=da).map(|_| rat(rng.random_range(-9..=9), 1)).collect());
            let mut bc: Vec<Rat> = (0..db).map(|_| rat(rng.random_range(-9..=9), 1)).collect();
            bc.push(rat_int(rng.random_range(1..=5)));
            let b = P::new(bc);
            let (q, r) = a.divrem(&b);
            assert_eq!(a, q.mul(&b).add(&r));
            assert!(r.is_zero() || r.deg() < b.deg());
        }
    }

    #[test]
    fn resultant_and_discriminant() {
        let f = P::from_int_coeffs(&[-1, 0, 1]); // x^2-1
        let g = P::from_int_coeffs(&[-4, 0, 1]); // x^2-4
        assert_eq!(f.resultant(&g), rat_int(9));
        assert_eq!(f.resultant(&f), rat_int(0));

        // x^2 - 3x + 2 has discriminant 1
        assert_eq!(P::from_int_coeffs(&[2, -3, 1]).discriminant(), rat_int(1));
        // these two cubics generate the cyclic cubic fields used throughout:
        // conductor 7 and conductor 9, with square discriminants 49 and 81
        assert_eq!(P::from_int_coeffs(&[-1, -2, 1, 1]).discriminant(), rat_int(49));
        assert_eq!(P::from_int_coeffs(&[1, -3, 0, 1]).discriminant(), rat_int(81));
    }

    #[test]
    fn interpolation_recovers_poly() {
        let f = P::new(vec![rat(1, 2), rat_int(-3), rat_int(0), rat_int(2)]);
        let pts: Vec<(Rat, Rat)> =
            (0..6).map(|i| (rat_int(i - 2), f.eval(&rat_int(i - 2)))).collect();
        assert_eq!(interpolate(&pts), f);
    }

    #[test]
    fn primitive_normalization() {
        let f = P::new(vec![rat(1, 2), rat(3, 4), rat(-5, 2)]);
        let p = primitive_int_poly(&f);
        assert_eq!(p.coeffs(), &[rat_int(-2), rat_int(-3), rat_int(10)]);
    }
}
