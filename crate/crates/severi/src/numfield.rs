//! Number fields as explicit Q-algebras.
//!
//! A field is either a simple extension Q[x]/(m) or a relative extension of
//! another field, forming a tower. Internally every field is flattened: it
//! carries an absolute Q-basis and the full multiplication table, so element
//! arithmetic never walks the tower. Elements are coordinate vectors; an
//! element may be "unbound" (a plain rational constant not yet attached to a
//! field), which is what lets rational literals mix freely into field
//! arithmetic.
//!
//! On top of this live the Galois-cubic automorphism data used by the cyclic
//! algebra machinery, Trager factorization over a field, and splitting-field
//! towers.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::factorq::{factor_over_q, is_irreducible};
use crate::mat::{Mat, SpanSolver};
use crate::poly::{interpolate, yun_squarefree, Poly};
use crate::rat::{exact_sqrt, Rat};
use crate::scalar::FieldScalar;

pub struct NumberField {
    base: Option<Arc<NumberField>>,
    /// Monic irreducible polynomial of the top generator over the base
    /// field; coefficients bound to `base` (plain rationals when base is Q).
    step_poly: Poly<NfElem>,
    step_degree: usize,
    /// Absolute degree over Q.
    degree: usize,
    /// table[p*degree+q] = coordinates of basis_p * basis_q.
    table: Vec<Vec<Rat>>,
    /// Lazily computed primitive element (coords, minimal polynomial over Q).
    primitive: OnceLock<(Vec<Rat>, Poly<Rat>)>,
}

impl NumberField {
    /// Q[x]/(m) for monic irreducible m of degree >= 2.
    pub fn new_root_of(m: &Poly<Rat>) -> Arc<NumberField> {
        assert!(!m.is_zero() && m.deg() >= 2, "extension needs degree >= 2");
        assert!(m.leading().is_one(), "minimal polynomial must be monic");
        assert!(is_irreducible(m), "reducible step polynomial");
        let d = m.deg();
        // x^e mod m for e in 0..2d-1
        let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(2 * d - 1);
        for e in 0..d {
            let mut v = vec![Rat::zero(); d];
            v[e] = Rat::one();
            powers.push(v);
        }
        for _ in d..2 * d - 1 {
            let last = powers.last().unwrap().clone();
            let mut v = vec![Rat::zero(); d];
            for i in 0..d - 1 {
                v[i + 1] = last[i].clone();
            }
            let top = last[d - 1].clone();
            if !top.is_zero() {
                for i in 0..d {
                    v[i] -= &top * m.coeff(i);
                }
            }
            powers.push(v);
        }
        let mut table = Vec::with_capacity(d * d);
        for p in 0..d {
            for q in 0..d {
                table.push(powers[p + q].clone());
            }
        }
        Arc::new(NumberField {
            base: None,
            step_poly: lift_poly(m),
            step_degree: d,
            degree: d,
            table,
            primitive: OnceLock::new(),
        })
    }

    /// Relative extension by a monic polynomial over `self` (coefficients
    /// bound to `self` or plain rationals). The caller guarantees
    /// irreducibility over `self`; arithmetic below does not depend on it
    /// but field axioms do.
    pub fn extend(self: &Arc<Self>, step: &Poly<NfElem>) -> Arc<NumberField> {
        assert!(!step.is_zero() && step.deg() >= 2);
        let step: Poly<NfElem> =
            Poly::new(step.coeffs().iter().map(|c| self.coerce(c)).collect());
        assert!(step.leading().is_one(), "step polynomial must be monic");
        let m = self.degree;
        let d = step.deg();
        let n = m * d;
        // powers of the new generator as polynomials over self, degree < d
        let mut powers: Vec<Vec<NfElem>> = Vec::with_capacity(2 * d - 1);
        for e in 0..d {
            let mut v = vec![self.zero_elem(); d];
            v[e] = self.one_elem();
            powers.push(v);
        }
        for _ in d..2 * d - 1 {
            let last = powers.last().unwrap().clone();
            let mut v = vec![self.zero_elem(); d];
            for i in 0..d - 1 {
                v[i + 1] = last[i].clone();
            }
            let top = last[d - 1].clone();
            if !top.is_zero() {
                for (i, item) in v.iter_mut().enumerate() {
                    *item = item.clone() - top.clone() * step.coeff(i);
                }
            }
            powers.push(v);
        }
        let mut table = Vec::with_capacity(n * n);
        for p in 0..n {
            let (j, i) = (p / m, p % m);
            for q in 0..n {
                let (l, k) = (q / m, q % m);
                // (b_i g^j)(b_k g^l) = (b_i b_k) g^(j+l)
                let bb = self.elem(self.table[i * m + k].clone());
                let mut out = vec![Rat::zero(); n];
                for (t, c) in powers[j + l].iter().enumerate() {
                    let prod = bb.clone() * c.clone();
                    for (r, x) in self.coerce(&prod).coords.iter().enumerate() {
                        out[t * m + r] = x.clone();
                    }
                }
                table.push(out);
            }
        }
        Arc::new(NumberField {
            base: Some(self.clone()),
            step_poly: step,
            step_degree: d,
            degree: n,
            table,
            primitive: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<NumberField>> {
        self.base.as_ref()
    }

    pub fn step_degree(&self) -> usize {
        self.step_degree
    }

    pub fn step_poly(&self) -> &Poly<NfElem> {
        &self.step_poly
    }

    /// The tower as minimal polynomials bottom-up; None when some step has
    /// non-rational coefficients (a genuinely relative step).
    pub fn tower_rational_steps(&self) -> Option<Vec<Poly<Rat>>> {
        let mut steps = Vec::new();
        let mut cur = Some(self);
        while let Some(f) = cur {
            let coeffs: Option<Vec<Rat>> =
                f.step_poly.coeffs().iter().map(NfElem::as_rational).collect();
            steps.push(Poly::new(coeffs?));
            cur = f.base.as_deref();
        }
        steps.reverse();
        Some(steps)
    }

    pub fn elem(self: &Arc<Self>, coords: Vec<Rat>) -> NfElem {
        assert_eq!(coords.len(), self.degree);
        NfElem { field: Some(self.clone()), coords }
    }

    pub fn constant(self: &Arc<Self>, r: Rat) -> NfElem {
        let mut coords = vec![Rat::zero(); self.degree];
        coords[0] = r;
        self.elem(coords)
    }

    fn zero_elem(self: &Arc<Self>) -> NfElem {
        self.constant(Rat::zero())
    }

    fn one_elem(self: &Arc<Self>) -> NfElem {
        self.constant(Rat::one())
    }

    /// Generator of the top step.
    pub fn generator(self: &Arc<Self>) -> NfElem {
        let m = self.base.as_ref().map_or(1, |b| b.degree);
        let mut coords = vec![Rat::zero(); self.degree];
        coords[m] = Rat::one();
        self.elem(coords)
    }

    /// Embeds an element of any field below in the tower (or a plain
    /// rational) into this field. The flattened bases are nested, so this is
    /// zero padding.
    pub fn embed(self: &Arc<Self>, x: &NfElem) -> NfElem {
        match &x.field {
            None => self.constant(x.coords[0].clone()),
            Some(f) => {
                if Arc::ptr_eq(f, self) {
                    return x.clone();
                }
                let mut cur = self.base.as_ref();
                let mut in_chain = false;
                while let Some(b) = cur {
                    if Arc::ptr_eq(b, f) {
                        in_chain = true;
                        break;
                    }
                    cur = b.base.as_ref();
                }
                assert!(in_chain, "element is not from a subfield of this tower");
                let mut coords = x.coords.clone();
                coords.resize(self.degree, Rat::zero());
                self.elem(coords)
            }
        }
    }

    /// Like embed but panics unless the element is bound to this exact field
    /// or unbound.
    fn coerce(self: &Arc<Self>, x: &NfElem) -> NfElem {
        match &x.field {
            None => self.constant(x.coords[0].clone()),
            Some(f) => {
                assert!(Arc::ptr_eq(f, self), "element bound to a different field");
                x.clone()
            }
        }
    }

    /// An element of a tower as a polynomial in the top generator with
    /// coefficients in the base field (constant rationals when base is Q).
    pub fn top_coefficients(self: &Arc<Self>, x: &NfElem) -> Vec<NfElem> {
        let x = self.coerce(x);
        match &self.base {
            None => x.coords.iter().map(|c| NfElem::from_rat(c.clone())).collect(),
            Some(b) => {
                let m = b.degree;
                (0..self.step_degree)
                    .map(|j| b.elem(x.coords[j * m..(j + 1) * m].to_vec()))
                    .collect()
            }
        }
    }

    fn mul_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.degree;
        let mut out = vec![Rat::zero(); n];
        for (p, ap) in a.iter().enumerate() {
            if ap.is_zero() {
                continue;
            }
            for (q, bq) in b.iter().enumerate() {
                if bq.is_zero() {
                    continue;
                }
                let c = ap * bq;
                for (k, t) in self.table[p * n + q].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by x on the Q-basis (the regular
    /// representation).
    pub fn mul_matrix(self: &Arc<Self>, x: &NfElem) -> Mat<Rat> {
        let x = self.coerce(x);
        let n = self.degree;
        Mat::from_fn(n, n, |i, j| {
            // column j = x * basis_j
            let mut acc = Rat::zero();
            for (p, ap) in x.coords.iter().enumerate() {
                if !ap.is_zero() {
                    acc += ap * &self.table[p * n + j][i];
                }
            }
            acc
        })
    }

    /// Field norm N_{K/Q} as the determinant of the regular representation.
    pub fn norm(self: &Arc<Self>, x: &NfElem) -> Rat {
        self.mul_matrix(x).det()
    }

    pub fn trace(self: &Arc<Self>, x: &NfElem) -> Rat {
        self.mul_matrix(x).trace()
    }

    /// Monic minimal polynomial of x over Q.
    pub fn min_poly(self: &Arc<Self>, x: &NfElem) -> Poly<Rat> {
        let x = self.coerce(x);
        let mut rows: Vec<Vec<Rat>> = vec![{
            let mut v = vec![Rat::zero(); self.degree];
            v[0] = Rat::one();
            v
        }];
        let mut power = rows[0].clone();
        loop {
            power = self.mul_coords(&power, &x.coords);
            let solver = SpanSolver::new(Mat::from_rows(rows.clone()));
            if let Some(cs) = solver.coordinates(&power) {
                let mut coeffs: Vec<Rat> = cs.into_iter().map(|c| -c).collect();
                coeffs.push(Rat::one());
                return Poly::new(coeffs);
            }
            rows.push(power.clone());
            assert!(rows.len() <= self.degree, "minimal polynomial search overran degree");
        }
    }

    /// A primitive element for the tower with its minimal polynomial over Q;
    /// computed lazily by trying generator + k * (primitive of base).
    pub fn primitive_element(self: &Arc<Self>) -> (NfElem, Poly<Rat>) {
        let (coords, mp) = self.primitive.get_or_init(|| {
            let gen = self.generator();
            match &self.base {
                None => (gen.coords.clone(), self.rational_step()),
                Some(b) => {
                    let (lower, _) = b.primitive_element();
                    let lower = self.embed(&lower);
                    let mut k = 1i64;
                    loop {
                        let cand = gen.clone() + lower.clone() * NfElem::from_int(k);
                        let mp = self.min_poly(&cand);
                        if mp.deg() == self.degree {
                            return (cand.coords, mp);
                        }
                        k += 1;
                        assert!(k < 1000, "primitive element search exhausted");
                    }
                }
            }
        });
        (self.elem(coords.clone()), mp.clone())
    }

    fn rational_step(&self) -> Poly<Rat> {
        Poly::new(
            self.step_poly
                .coeffs()
                .iter()
                .map(|c| c.as_rational().expect("rational step"))
                .collect(),
        )
    }
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumberField(deg {} over ", self.degree)?;
        match &self.base {
            None => write!(f, "Q")?,
            Some(b) => write!(f, "deg-{} base", b.degree)?,
        }
        write!(f, ")")
    }
}

/// Element of a number field: coordinates on the flattened Q-basis. An
/// element with no field attached is a plain rational constant that binds to
/// a field on first contact.
#[derive(Clone)]
pub struct NfElem {
    field: Option<Arc<NumberField>>,
    coords: Vec<Rat>,
}

impl NfElem {
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Some(r) when the element is a rational constant.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn pow(&self, e: usize) -> NfElem {
        let mut acc = NfElem::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn unify(a: &NfElem, b: &NfElem) -> (Option<Arc<NumberField>>, Vec<Rat>, Vec<Rat>) {
        match (&a.field, &b.field) {
            (None, None) => (None, a.coords.clone(), b.coords.clone()),
            (Some(f), None) => {
                (Some(f.clone()), a.coords.clone(), f.constant(b.coords[0].clone()).coords)
            }
            (None, Some(f)) => {
                (Some(f.clone()), f.constant(a.coords[0].clone()).coords, b.coords.clone())
            }
            (Some(f), Some(g)) => {
                assert!(Arc::ptr_eq(f, g), "arithmetic between elements of different fields");
                (Some(f.clone()), a.coords.clone(), b.coords.clone())
            }
        }
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = NfElem::unify(self, other);
        a == b
    }
}

impl std::fmt::Debug for NfElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "nf{:?}", self.coords)
    }
}

impl std::ops::Add for NfElem {
    type Output = NfElem;
    fn add(self, rhs: NfElem) -> NfElem {
        let (field, a, b) = NfElem::unify(&self, &rhs);
        NfElem { field, coords: a.iter().zip(&b).map(|(x, y)| x + y).collect() }
    }
}

impl std::ops::Sub for NfElem {
    type Output = NfElem;
    fn sub(self, rhs: NfElem) -> NfElem {
        let (field, a, b) = NfElem::unify(&self, &rhs);
        NfElem { field, coords: a.iter().zip(&b).map(|(x, y)| x - y).collect() }
    }
}

impl std::ops::Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem { field: self.field, coords: self.coords.iter().map(|x| -x).collect() }
    }
}

impl std::ops::Mul for NfElem {
    type Output = NfElem;
    fn mul(self, rhs: NfElem) -> NfElem {
        let (field, a, b) = NfElem::unify(&self, &rhs);
        match &field {
            None => NfElem { field: None, coords: vec![&a[0] * &b[0]] },
            Some(f) => NfElem { field: field.clone(), coords: f.mul_coords(&a, &b) },
        }
    }
}

impl std::ops::Div for NfElem {
    type Output = NfElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: NfElem) -> NfElem {
        assert!(!rhs.is_zero(), "division by zero field element");
        let (field, a, b) = NfElem::unify(&self, &rhs);
        match &field {
            None => NfElem { field: None, coords: vec![&a[0] / &b[0]] },
            Some(f) => {
                // solve (rhs) * x = self in coordinates
                let rb = f.elem(b);
                let m = f.mul_matrix(&rb);
                let x = m.solve(&a).expect("nonzero element must be invertible");
                NfElem { field: field.clone(), coords: x }
            }
        }
    }
}

impl Zero for NfElem {
    fn zero() -> Self {
        NfElem { field: None, coords: vec![Rat::zero()] }
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl One for NfElem {
    fn one() -> Self {
        NfElem { field: None, coords: vec![Rat::one()] }
    }
    fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }
}

impl FieldScalar for NfElem {
    fn from_rat(r: Rat) -> Self {
        NfElem { field: None, coords: vec![r] }
    }
}

impl crate::poly::RootScalar for NfElem {
    fn poly_roots(f: &Poly<NfElem>) -> Vec<(NfElem, usize)> {
        assert!(!f.is_zero());
        if f.is_constant() {
            return Vec::new();
        }
        let field = f.coeffs().iter().find_map(|c| c.field.clone());
        let mut roots: Vec<(NfElem, usize)> = Vec::new();
        match field {
            None => {
                let rational = Poly::new(f.coeffs().iter().map(|c| c.coords[0].clone()).collect());
                for (r, e) in crate::factorq::rational_roots(&rational) {
                    roots.push((NfElem::from_rat(r), e));
                }
            }
            Some(k) => {
                let bound = Poly::new(f.coeffs().iter().map(|c| k.embed(c)).collect());
                // split off the rational-coefficient case first: factoring
                // over Q and refining each piece keeps the Trager norms small
                let mut pieces: Vec<(Poly<NfElem>, usize)> = Vec::new();
                if let Some(qc) =
                    f.coeffs().iter().map(|c| c.as_rational()).collect::<Option<Vec<Rat>>>()
                {
                    let (_, qf) = crate::factorq::factor_over_q(&Poly::new(qc));
                    for (g, e) in qf {
                        pieces.push((Poly::new(g.coeffs().iter().map(|c| k.constant(c.clone())).collect()), e));
                    }
                } else {
                    pieces.push((bound.clone(), 1));
                }
                for (piece, outer) in pieces {
                    if piece.deg() == 1 {
                        let root = -(piece.coeff(0) / piece.coeff(1));
                        roots.push((root, outer));
                        continue;
                    }
                    let (_, factors) = nf_factor(&k, &piece);
                    for (g, e) in factors {
                        if g.deg() == 1 {
                            let root = -(g.coeff(0) / g.coeff(1));
                            roots.push((root, outer * e));
                        }
                    }
                }
                for (r, _) in roots.iter_mut() {
                    *r = k.embed(r);
                }
            }
        }
        roots.sort_by(|a, b| a.0.coords.cmp(&b.0.coords));
        roots
    }
}

/// A rational polynomial viewed over a number field (coefficients unbound).
pub fn lift_poly(f: &Poly<Rat>) -> Poly<NfElem> {
    Poly::new(f.coeffs().iter().map(|c| NfElem::from_rat(c.clone())).collect())
}

/// Evaluation of a rational polynomial at a field element.
pub fn eval_poly(f: &Poly<Rat>, x: &NfElem) -> NfElem {
    lift_poly(f).eval(x)
}

/// Galois-cubic structure: a degree-3 field whose generator's conjugates all
/// live in the field, together with the chosen generator sigma of the Galois
/// group (as the image of the field generator).
#[derive(Clone, Debug)]
pub struct CubicGaloisData {
    pub field: Arc<NumberField>,
    pub sigma_image: NfElem,
}

impl CubicGaloisData {
    /// Builds and verifies the data from a proposed sigma image: it must be
    /// a root of the field polynomial distinct from the generator, and the
    /// induced map must have order 3.
    pub fn from_sigma_image(field: Arc<NumberField>, sigma_image: NfElem) -> CubicGaloisData {
        assert_eq!(field.degree(), 3, "cubic field required");
        assert!(field.base().is_none(), "cubic field must be a simple extension");
        let m = field.rational_step();
        let image = field.coerce(&sigma_image);
        assert!(eval_poly(&m, &image).is_zero(), "sigma image is not a conjugate root");
        assert!(image != field.generator(), "sigma must not be the identity");
        let data = CubicGaloisData { field: field.clone(), sigma_image: image };
        let a = field.generator();
        let a3 = data.sigma(&data.sigma(&data.sigma(&a)));
        assert!(a3 == a, "sigma does not have order 3");
        data
    }

    /// Applies sigma: an element written as a polynomial in the generator is
    /// mapped to the same polynomial at sigma(generator).
    pub fn sigma(&self, e: &NfElem) -> NfElem {
        let e = self.field.coerce(e);
        let mut acc = self.field.constant(Rat::zero());
        for c in e.coords.iter().rev() {
            acc = acc * self.sigma_image.clone() + NfElem::from_rat(c.clone());
        }
        acc
    }

    pub fn min_poly(&self) -> Poly<Rat> {
        self.field.rational_step()
    }
}

/// Square root of the discriminant when m is a Galois cubic (disc a rational
/// square), None otherwise. Panics unless m is a monic irreducible cubic.
pub fn is_galois_cubic(m: &Poly<Rat>) -> Option<Rat> {
    assert!(!m.is_zero() && m.deg() == 3, "cubic polynomial required");
    assert!(m.leading().is_one(), "monic polynomial required");
    assert!(is_irreducible(m), "irreducible polynomial required");
    let disc = m.discriminant();
    if disc.is_negative() {
        return None;
    }
    let num = exact_sqrt(disc.numer())?;
    let den = exact_sqrt(disc.denom())?;
    Some(Rat::new(num, den))
}

/// The cubic field Q[x]/(m) with its canonical Galois generator. The two
/// non-identity automorphisms are distinguished by taking the sigma image
/// with lexicographically smaller coordinates.
pub fn cubic_sigma(m: &Poly<Rat>) -> CubicGaloisData {
    let d = is_galois_cubic(m).expect("not a Galois cubic");
    let field = NumberField::new_root_of(m);
    let a = field.generator();
    // other two roots: ((-c2 - a) +- d/m'(a)) / 2
    let mpa = eval_poly(&m.derivative(), &a);
    let s = NfElem::from_rat(-m.coeff(2)) - a.clone();
    let delta = NfElem::from_rat(d) / mpa;
    let half = NfElem::from_rat(Rat::new(1.into(), 2.into()));
    let r1 = (s.clone() + delta.clone()) * half.clone();
    let r2 = (s - delta) * half;
    for r in [&r1, &r2] {
        assert!(eval_poly(m, r).is_zero(), "conjugate root formula failed");
    }
    let image = if r1.coords() < r2.coords() { r1 } else { r2 };
    CubicGaloisData::from_sigma_image(field, image)
}

/// The cyclic cubic norm x * sigma(x) * sigma^2(x), asserted rational.
pub fn nf_norm(data: &CubicGaloisData, x: &NfElem) -> Rat {
    let s = data.sigma(x);
    let s2 = data.sigma(&s);
    let n = data.field.coerce(x) * s * s2;
    n.as_rational().expect("norm of a field element must be rational")
}

/// Factors a polynomial over a number field into monic irreducibles with
/// multiplicities; the scalar returned first is the leading coefficient.
pub fn nf_factor(
    field: &Arc<NumberField>,
    f: &Poly<NfElem>,
) -> (NfElem, Vec<(Poly<NfElem>, usize)>) {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let lead = f.leading();
    if f.is_constant() {
        return (lead, Vec::new());
    }
    let monic = f.monic();
    let mut out = Vec::new();
    for (part, mult) in yun_squarefree(&monic) {
        for irr in factor_squarefree_over(Some(field), &part) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.deg().cmp(&b.deg()).then_with(|| {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                match x.coords().cmp(y.coords()) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    (lead, out)
}

/// Trager over a tower: the norm to the base field is taken degree by
/// degree, recursing until coefficients are rational.
fn factor_squarefree_over(
    field: Option<&Arc<NumberField>>,
    f: &Poly<NfElem>,
) -> Vec<Poly<NfElem>> {
    if f.deg() <= 1 {
        return vec![f.clone()];
    }
    let Some(k) = field else {
        // base of the tower: plain rational factorization
        let rf = Poly::new(f.coeffs().iter().map(|c| c.as_rational().expect("rational")).collect());
        let (_, factors) = factor_over_q(&rf);
        return factors.into_iter().map(|(g, _)| lift_poly(&g)).collect();
    };
    let n = f.deg();
    let d = k.step_degree();
    let gamma = k.generator();
    let base = k.base();
    for shift in shift_stream() {
        // g(x) = f(x - s*gamma), then N(g) via Res_y(m(y), g with gamma -> y)
        let s_gamma = gamma.clone() * NfElem::from_rat(shift.clone());
        let g = f.compose(&Poly::new(vec![-s_gamma.clone(), NfElem::one()]));
        // coefficients of g as polynomials in gamma over the base field
        let coeff_polys: Vec<Vec<NfElem>> =
            g.coeffs().iter().map(|c| k.top_coefficients(c)).collect();
        let mut points: Vec<(NfElem, NfElem)> = Vec::with_capacity(n * d + 1);
        for t in 0..=(n * d) as i64 {
            let xt = eval_node(t);
            // B_t(y) = sum_i c_i(y) xt^i
            let mut bt = Poly::zero();
            let mut xp = NfElem::one();
            for cp in &coeff_polys {
                let term = Poly::new(cp.iter().map(|c| c.clone() * xp.clone()).collect());
                bt = bt.add(&term);
                xp = xp * NfElem::from_rat(xt.clone());
            }
            let value = k.step_poly().resultant(&bt);
            points.push((NfElem::from_rat(xt), value));
        }
        let norm = interpolate(&points);
        assert_eq!(norm.deg(), n * d, "norm polynomial degree mismatch");
        assert!(norm.leading().is_one(), "norm polynomial must be monic");
        if !norm.is_squarefree() {
            continue;
        }
        let norm_factors = factor_squarefree_over(base, &norm);
        if norm_factors.len() == 1 {
            // f is already irreducible over k
            return vec![f.clone()];
        }
        let mut parts = Vec::new();
        for big_g in norm_factors {
            let lifted = Poly::new(big_g.coeffs().iter().map(|c| k.embed(c)).collect());
            let h = g.gcd(&lifted);
            if !h.is_constant() {
                // undo the shift
                let back = h.compose(&Poly::new(vec![s_gamma.clone(), NfElem::one()]));
                parts.push(back.monic());
            }
        }
        let total: usize = parts.iter().map(Poly::deg).sum();
        assert_eq!(total, n, "trager split lost degree");
        let mut product = Poly::constant(NfElem::one());
        for p in &parts {
            product = product.mul(p);
        }
        assert!(product == *f, "trager factors do not multiply back");
        return parts;
    }
    unreachable!("shift stream is infinite")
}

fn shift_stream() -> impl Iterator<Item = Rat> {
    (0i64..).map(|k| {
        if k == 0 {
            Rat::zero()
        } else if k % 2 == 1 {
            Rat::from_integer(((k + 1) / 2).into())
        } else {
            -Rat::from_integer((k / 2).into())
        }
    })
}

fn eval_node(t: i64) -> Rat {
    // 0, 1, -1, 2, -2, ...
    if t == 0 {
        Rat::zero()
    } else if t % 2 == 1 {
        Rat::from_integer(((t + 1) / 2).into())
    } else {
        Rat::from_integer((-(t / 2)).into())
    }
}

/// Smallest tower over which p splits into linear factors; None when p
/// already splits over Q.
pub fn splitting_field(p: &Poly<Rat>) -> Option<Arc<NumberField>> {
    assert!(!p.is_zero());
    let (_, factors) = factor_over_q(p);
    let mut pending: Vec<Poly<Rat>> =
        factors.into_iter().filter(|(g, _)| g.deg() > 1).map(|(g, _)| g).collect();
    let first = pending.pop()?;
    let mut field = NumberField::new_root_of(&first);
    let mut queue: Vec<Poly<NfElem>> = pending.iter().map(lift_poly).collect();
    queue.push(lift_poly(&first));
    loop {
        let mut nonlinear: Vec<Poly<NfElem>> = Vec::new();
        for g in &queue {
            let bound = Poly::new(g.coeffs().iter().map(|c| field.embed(c)).collect());
            let (_, fs) = nf_factor(&field, &bound);
            nonlinear.extend(fs.into_iter().filter(|(h, _)| h.deg() > 1).map(|(h, _)| h));
        }
        let Some(step) = nonlinear.first().cloned() else {
            return Some(field);
        };
        field = field.extend(&step);
        queue = nonlinear;
    }
}
