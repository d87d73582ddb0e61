//! Finite-dimensional Lie algebras presented by structure constants.
//!
//! Provides the Killing form with semisimplicity/simplicity checks, Cartan
//! subalgebra search, splitness testing with simultaneous eigenspace data,
//! recognition of split sl3 forms via an explicit Chevalley basis, the
//! Cartan-swapping automorphism tau, and highest-weight tooling for the
//! ten-dimensional modules that drive the surface pipeline.

use rand::Rng;
use thiserror::Error;

use crate::mat::{Mat, SpanSolver, Subspace};
use crate::poly::RootScalar;
use crate::scalar::FieldScalar;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),
    #[error("regular element search budget exhausted")]
    CartanSearchFailed,
    #[error("Cartan subalgebra is not split")]
    NotSplit,
    #[error("root system degeneracy: {0}")]
    RootDegeneracy(String),
    #[error("unexpected module structure: {0}")]
    BadModule(String),
    #[error("highest weights differ")]
    WeightMismatch,
}

// Index conventions for the standard basis of sl3 used throughout:
// h1, h2 span the diagonal Cartan, e1, e2 are the simple positive root
// vectors, e3 = [e1, e2], f1, f2, f3 the corresponding negatives.
pub const SL3_H1: usize = 0;
pub const SL3_H2: usize = 1;
pub const SL3_E1: usize = 2;
pub const SL3_E2: usize = 3;
pub const SL3_E3: usize = 4;
pub const SL3_F1: usize = 5;
pub const SL3_F2: usize = 6;
pub const SL3_F3: usize = 7;

/// A Lie algebra over K given by structure constants: sc[i][j] holds the
/// coordinates of [e_i, e_j].
#[derive(Clone, Debug)]
pub struct LieAlg<K> {
    dim: usize,
    sc: Vec<Vec<Vec<K>>>,
}

impl<K: FieldScalar> LieAlg<K> {
    /// Validates antisymmetry and the Jacobi identity on all basis triples.
    pub fn new(dim: usize, sc: Vec<Vec<Vec<K>>>) -> Result<Self, LieError> {
        if sc.len() != dim || sc.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
        {
            return Err(LieError::InvalidStructure("structure constant shape mismatch".into()));
        }
        let g = LieAlg { dim, sc };
        for i in 0..dim {
            for j in i..dim {
                let lhs = &g.sc[i][j];
                let rhs: Vec<K> = g.sc[j][i].iter().map(|c| -c.clone()).collect();
                if *lhs != rhs {
                    return Err(LieError::InvalidStructure(format!(
                        "antisymmetry fails on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let mut total = vec![K::zero(); dim];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = g.sc[a][b].clone();
                        let term = g.bracket(&inner, &unit_vec(dim, c));
                        for (t, v) in total.iter_mut().zip(term) {
                            *t = t.clone() + v;
                        }
                    }
                    if total.iter().any(|c| !c.is_zero()) {
                        return Err(LieError::InvalidStructure(format!(
                            "Jacobi identity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Structure constants of the span of the given matrices under the
    /// commutator, together with the solver expressing matrices in that
    /// basis. Fails when the matrices are dependent or the span is not
    /// closed under commutators.
    pub fn from_matrix_span(mats: &[Mat<K>]) -> Result<(Self, SpanSolver<K>), LieError> {
        assert!(!mats.is_empty());
        let m = mats[0].rows();
        assert!(mats.iter().all(|a| a.rows() == m && a.cols() == m));
        let dim = mats.len();
        let rows: Vec<Vec<K>> = mats.iter().map(|a| a.entries().to_vec()).collect();
        let solver = SpanSolver::new(Mat::from_rows(rows));
        if solver.dim() != dim {
            return Err(LieError::InvalidStructure("matrices are linearly dependent".into()));
        }
        let mut sc = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let comm = mats[i].commutator(&mats[j]);
                let coords = solver.coordinates(comm.entries()).ok_or_else(|| {
                    LieError::InvalidStructure("span is not closed under the commutator".into())
                })?;
                sc[i][j] = coords;
            }
        }
        let g = LieAlg::new(dim, sc)?;
        Ok((g, solver))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<K>>] {
        &self.sc
    }

    /// [x, y] for coordinate vectors.
    pub fn bracket(&self, x: &[K], y: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (o, s) in out.iter_mut().zip(&self.sc[i][j]) {
                    if !s.is_zero() {
                        *o = o.clone() + c.clone() * s.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad(x): column j is [x, e_j].
    pub fn ad(&self, x: &[K]) -> Mat<K> {
        let n = self.dim;
        let mut cols: Vec<Vec<K>> = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(self.bracket(x, &unit_vec(n, j)));
        }
        Mat::from_fn(n, n, |i, j| cols[j][i].clone())
    }

    /// ad of every basis vector (the adjoint representation).
    pub fn adjoint_rep(&self) -> Vec<Mat<K>> {
        (0..self.dim).map(|i| self.ad(&unit_vec(self.dim, i))).collect()
    }

    /// Killing form kappa(e_i, e_j) = trace(ad e_i ad e_j).
    pub fn killing(&self) -> Mat<K> {
        let ads = self.adjoint_rep();
        let n = self.dim;
        Mat::from_fn(n, n, |i, j| {
            let mut acc = K::zero();
            for p in 0..n {
                for q in 0..n {
                    let a = &ads[i][(p, q)];
                    let b = &ads[j][(q, p)];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
            }
            acc
        })
    }

    /// Same algebra over a new scalar type.
    pub fn map_scalars<L: FieldScalar>(&self, mut f: impl FnMut(&K) -> L) -> LieAlg<L> {
        let sc = self
            .sc
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(&mut f).collect()).collect())
            .collect();
        LieAlg { dim: self.dim, sc }
    }

    /// Structure constants after the change of basis b'_i = sum_j r[(j,i)] b_j.
    pub fn change_basis(&self, r: &Mat<K>) -> Result<LieAlg<K>, LieError> {
        assert_eq!(r.rows(), self.dim);
        assert_eq!(r.cols(), self.dim);
        let rinv = r
            .inverse()
            .ok_or_else(|| LieError::InvalidStructure("basis change is singular".into()))?;
        let col = |j: usize| -> Vec<K> { (0..self.dim).map(|i| r[(i, j)].clone()).collect() };
        let mut sc = vec![vec![Vec::new(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                sc[i][j] = rinv.apply(&self.bracket(&col(i), &col(j)));
            }
        }
        LieAlg::new(self.dim, sc)
    }

    /// Dimension of the centroid: all matrices commuting with every ad e_i.
    pub fn centroid_dimension(&self) -> usize {
        let n = self.dim;
        let ads = self.adjoint_rep();
        // unknown C is n x n, flattened row-major; one n x n block of
        // equations per generator t: C ad_t - ad_t C = 0
        let mut rows: Vec<Vec<K>> = Vec::with_capacity(n * n * n);
        for adt in &ads {
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![K::zero(); n * n];
                    for q in 0..n {
                        row[i * n + q] = row[i * n + q].clone() + adt[(q, j)].clone();
                    }
                    for p in 0..n {
                        row[p * n + j] = row[p * n + j].clone() - adt[(i, p)].clone();
                    }
                    rows.push(row);
                }
            }
        }
        Mat::from_rows(rows).rref().kernel_basis().len()
    }
}

/// Killing form plus the validation flags consumed by the pipeline.
pub struct KillingReport<K> {
    pub killing: Mat<K>,
    pub semisimple: bool,
    pub simple8: bool,
}

pub fn killing_and_checks<K: FieldScalar>(g: &LieAlg<K>) -> KillingReport<K> {
    let killing = g.killing();
    let semisimple = killing.rref().rank() == g.dim();
    // a semisimple algebra is simple iff its centroid is one-dimensional:
    // each simple summand contributes at least one centroid dimension
    let simple8 = semisimple && g.dim() == 8 && g.centroid_dimension() == 1;
    KillingReport { killing, semisimple, simple8 }
}

/// A simultaneous eigenspace of the Cartan action; weights are listed per
/// Cartan basis vector.
#[derive(Clone, Debug)]
pub struct WeightSpace<K> {
    pub weights: Vec<K>,
    pub basis: Vec<Vec<K>>,
}

#[derive(Clone, Debug)]
pub struct CartanData<K> {
    pub basis: Vec<Vec<K>>,
    pub split: bool,
    pub weight_spaces: Option<Vec<WeightSpace<K>>>,
}

/// Verifies the Cartan axioms for an explicit candidate basis: closure,
/// nilpotency and self-normalization.
pub fn cartan_from_basis<K: FieldScalar>(
    g: &LieAlg<K>,
    basis: Vec<Vec<K>>,
) -> Result<CartanData<K>, LieError> {
    let rows = Subspace::from_rows(basis).basis_rows();
    if rows.is_empty() || !is_cartan(g, &rows) {
        return Err(LieError::InvalidStructure(
            "basis does not span a Cartan subalgebra".into(),
        ));
    }
    Ok(CartanData { basis: rows, split: false, weight_spaces: None })
}

/// Cartan subalgebra search: the Fitting-null component of ad(x) for random
/// integer vectors x with escalating coefficient bound, accepted once it is
/// a nilpotent self-normalizing subalgebra.
pub fn cartan_subalgebra<K: FieldScalar>(
    g: &LieAlg<K>,
    rng: &mut impl Rng,
) -> Result<CartanData<K>, LieError> {
    let n = g.dim();
    for bexp in 0..6u32 {
        let bound = 1i64 << bexp;
        for _ in 0..40 {
            let x: Vec<K> =
                (0..n).map(|_| K::from_int(rng.random_range(-bound..=bound))).collect();
            if x.iter().all(|c| c.is_zero()) {
                continue;
            }
            let fitting = g.ad(&x).pow(n);
            let kernel = fitting.rref().kernel_basis();
            if kernel.is_empty() || kernel.len() == n {
                continue;
            }
            let h = Subspace::from_rows(kernel).basis_rows();
            if is_cartan(g, &h) {
                return Ok(CartanData { basis: h, split: false, weight_spaces: None });
            }
        }
    }
    Err(LieError::CartanSearchFailed)
}

fn is_cartan<K: FieldScalar>(g: &LieAlg<K>, h: &[Vec<K>]) -> bool {
    subalgebra_closed(g, h) && lower_central_terminates(g, h) && self_normalizing(g, h)
}

fn subalgebra_closed<K: FieldScalar>(g: &LieAlg<K>, h: &[Vec<K>]) -> bool {
    let solver = SpanSolver::new(Mat::from_rows(h.to_vec()));
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            if !solver.contains(&g.bracket(a, b)) {
                return false;
            }
        }
    }
    true
}

fn lower_central_terminates<K: FieldScalar>(g: &LieAlg<K>, h: &[Vec<K>]) -> bool {
    let mut cur: Vec<Vec<K>> = Vec::new();
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            cur.push(g.bracket(a, b));
        }
    }
    let mut cur = Subspace::from_rows(cur);
    for _ in 0..=g.dim() {
        if cur.dim() == 0 {
            return true;
        }
        let mut next = Vec::new();
        for a in h {
            for b in cur.basis_rows() {
                next.push(g.bracket(a, &b));
            }
        }
        let next = Subspace::from_rows(next);
        if next.dim() == cur.dim() {
            return false;
        }
        cur = next;
    }
    false
}

fn self_normalizing<K: FieldScalar>(g: &LieAlg<K>, h: &[Vec<K>]) -> bool {
    let n = g.dim();
    let r = h.len();
    let rref = Mat::from_rows(h.to_vec()).rref();
    let pivots = rref.pivots.clone();
    // rem(v) = v - sum_i v[pivot_i] row_i vanishes exactly on span(h)
    let mut rem: Mat<K> = Mat::identity(n);
    for (i, &p) in pivots.iter().enumerate() {
        for k in 0..n {
            rem[(k, p)] = rem[(k, p)].clone() - rref.mat[(i, k)].clone();
        }
    }
    let mut rows: Vec<Vec<K>> = Vec::with_capacity(r * n);
    for hj in h {
        let cond = rem.matmul(&g.ad(hj));
        for i in 0..n {
            rows.push(cond.row(i).to_vec());
        }
    }
    Mat::from_rows(rows).rref().kernel_basis().len() == r
}

/// Splitness of a Cartan subalgebra: the characteristic polynomial of ad h
/// must split into linear factors for each basis vector and a few random
/// combinations, and the whole algebra must decompose into simultaneous
/// eigenspaces. On success the weight-space decomposition is stored.
pub fn is_split_cartan<K: RootScalar>(g: &LieAlg<K>, cartan: &mut CartanData<K>) -> bool {
    cartan.split = false;
    cartan.weight_spaces = None;
    let n = g.dim();
    let r = cartan.basis.len();

    // simultaneous eigenspace refinement, one Cartan basis vector at a time.
    // A joint eigenbasis for the Cartan basis diagonalizes every element of
    // the subalgebra, so succeeding here decides splitness outright.
    let mut spaces: Vec<WeightSpace<K>> = vec![WeightSpace {
        weights: Vec::new(),
        basis: (0..n).map(|i| unit_vec(n, i)).collect(),
    }];
    for h in &cartan.basis {
        let adh = g.ad(h);
        let mut next = Vec::new();
        for space in &spaces {
            let m = space.basis.len();
            let solver = SpanSolver::new(Mat::from_rows(space.basis.clone()));
            let mut cols = Vec::with_capacity(m);
            for v in &space.basis {
                match solver.coordinates(&adh.apply(v)) {
                    Some(c) => cols.push(c),
                    // not even invariant under the Cartan action
                    None => return false,
                }
            }
            let rest = Mat::from_fn(m, m, |i, j| cols[j][i].clone());
            let roots = K::poly_roots(&rest.char_poly());
            let mut captured = 0;
            for (lam, _) in roots {
                let shifted = rest.sub(&Mat::identity(m).scale(&lam));
                let ker = shifted.rref().kernel_basis();
                captured += ker.len();
                if ker.is_empty() {
                    continue;
                }
                let vectors: Vec<Vec<K>> = ker
                    .iter()
                    .map(|co| {
                        let mut v = vec![K::zero(); n];
                        for (c, b) in co.iter().zip(&space.basis) {
                            for (t, bv) in v.iter_mut().zip(b) {
                                *t = t.clone() + c.clone() * bv.clone();
                            }
                        }
                        v
                    })
                    .collect();
                let mut weights = space.weights.clone();
                weights.push(lam);
                next.push(WeightSpace { weights, basis: Subspace::from_rows(vectors).basis_rows() });
            }
            if captured != m {
                // a defective action cannot be simultaneously diagonalized
                return false;
            }
        }
        spaces = next;
    }
    debug_assert_eq!(spaces.iter().map(|s| s.basis.len()).sum::<usize>(), n);
    debug_assert!(spaces.iter().all(|s| s.weights.len() == r));
    cartan.split = true;
    cartan.weight_spaces = Some(spaces);
    true
}

/// Chevalley basis data of an sl3 form, as coordinate vectors in the parent
/// algebra: e3 = [e1, e2] and f3 = [f2, f1].
#[derive(Clone, Debug)]
pub struct ChevalleyBasis<K> {
    pub h1: Vec<K>,
    pub h2: Vec<K>,
    pub e1: Vec<K>,
    pub e2: Vec<K>,
    pub e3: Vec<K>,
    pub f1: Vec<K>,
    pub f2: Vec<K>,
    pub f3: Vec<K>,
}

impl<K> ChevalleyBasis<K> {
    pub fn vectors(&self) -> [&Vec<K>; 8] {
        [&self.h1, &self.h2, &self.e1, &self.e2, &self.e3, &self.f1, &self.f2, &self.f3]
    }
}

/// An explicit isomorphism from an eight-dimensional split algebra onto
/// trace-zero 3x3 matrices: images of the parent basis plus the Chevalley
/// basis realizing the inverse direction.
pub struct Sl3Iso<K> {
    pub chevalley: ChevalleyBasis<K>,
    pub images: Vec<Mat<K>>,
}

/// Standard basis of sl3 in the fixed order (h1, h2, e1, e2, e3, f1, f2, f3).
pub fn sl3_standard_matrices<K: FieldScalar>() -> Vec<Mat<K>> {
    let e = |i: usize, j: usize| Mat::from_fn(3, 3, |r, c| {
        if (r, c) == (i, j) {
            K::one()
        } else {
            K::zero()
        }
    });
    let h1 = e(0, 0).sub(&e(1, 1));
    let h2 = e(1, 1).sub(&e(2, 2));
    vec![h1, h2, e(0, 1), e(1, 2), e(0, 2), e(1, 0), e(2, 1), e(2, 0)]
}

/// sl3 as an abstract algebra over the standard basis, with the matching
/// Chevalley basis (the unit coordinate vectors).
pub fn sl3_algebra<K: FieldScalar>() -> (LieAlg<K>, ChevalleyBasis<K>) {
    let (g, _) = LieAlg::from_matrix_span(&sl3_standard_matrices::<K>())
        .expect("standard sl3 basis is closed and independent");
    let u = |i: usize| unit_vec(8, i);
    let chev = ChevalleyBasis {
        h1: u(SL3_H1),
        h2: u(SL3_H2),
        e1: u(SL3_E1),
        e2: u(SL3_E2),
        e3: u(SL3_E3),
        f1: u(SL3_F1),
        f2: u(SL3_F2),
        f3: u(SL3_F3),
    };
    (g, chev)
}

/// Whether the given basis images define a Lie homomorphism: commutators of
/// images must match the structure constants on every basis pair.
pub fn is_bracket_preserving<K: FieldScalar>(g: &LieAlg<K>, images: &[Mat<K>]) -> bool {
    assert_eq!(images.len(), g.dim());
    for i in 0..g.dim() {
        for j in (i + 1)..g.dim() {
            let lhs = images[i].commutator(&images[j]);
            let mut rhs = Mat::zeros(images[0].rows(), images[0].cols());
            for (k, c) in g.structure_constants()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    rhs = rhs.add(&images[k].scale(c));
                }
            }
            if !lhs.sub(&rhs).is_zero_matrix() {
                return false;
            }
        }
    }
    true
}

/// Constructs an isomorphism onto sl3 from a split Cartan decomposition by
/// locating a simple root pair, normalizing the attached sl2 triples and
/// mapping the resulting Chevalley basis onto the standard one.
pub fn split_iso_sl3<K: RootScalar>(
    g: &LieAlg<K>,
    cartan: &CartanData<K>,
) -> Result<Sl3Iso<K>, LieError> {
    if g.dim() != 8 {
        return Err(LieError::RootDegeneracy(format!("dimension {} is not 8", g.dim())));
    }
    if cartan.basis.len() != 2 {
        return Err(LieError::RootDegeneracy("Cartan rank is not 2".into()));
    }
    let spaces = match (&cartan.split, &cartan.weight_spaces) {
        (true, Some(s)) => s,
        _ => return Err(LieError::NotSplit),
    };
    let mut roots: Vec<(Vec<K>, Vec<K>)> = Vec::new();
    let mut zero_dim = 0;
    for s in spaces {
        if s.weights.iter().all(|w| w.is_zero()) {
            zero_dim += s.basis.len();
        } else {
            for v in &s.basis {
                roots.push((s.weights.clone(), v.clone()));
            }
        }
    }
    if zero_dim != 2 || roots.len() != 6 {
        return Err(LieError::RootDegeneracy(format!(
            "weight decomposition has {zero_dim}-dim zero space and {} root vectors",
            roots.len()
        )));
    }
    let find_root = |w: &[K]| roots.iter().find(|(rw, _)| rw.as_slice() == w);
    let add_w = |a: &[K], b: &[K]| -> Vec<K> {
        a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
    };
    let neg_w = |a: &[K]| -> Vec<K> { a.iter().map(|x| -x.clone()).collect() };

    let alpha = roots[0].clone();
    let beta = roots
        .iter()
        .skip(1)
        .find(|(w, _)| *w != neg_w(&alpha.0) && find_root(&add_w(&alpha.0, w)).is_some())
        .cloned()
        .ok_or_else(|| LieError::RootDegeneracy("no simple pair found".into()))?;

    let cartan_solver = SpanSolver::new(Mat::from_rows(cartan.basis.clone()));
    let sl2_triple = |root: &(Vec<K>, Vec<K>)| -> Result<(Vec<K>, Vec<K>, Vec<K>), LieError> {
        let e = root.1.clone();
        let (_, fraw) = find_root(&neg_w(&root.0))
            .ok_or_else(|| LieError::RootDegeneracy("missing opposite root".into()))?;
        let hraw = g.bracket(&e, fraw);
        let coords = cartan_solver
            .coordinates(&hraw)
            .ok_or_else(|| LieError::RootDegeneracy("[e, f] fell outside the Cartan".into()))?;
        // evaluate the root on hraw via the stored weights
        let mut c = K::zero();
        for (co, w) in coords.iter().zip(&root.0) {
            c = c + co.clone() * w.clone();
        }
        if c.is_zero() {
            return Err(LieError::RootDegeneracy("root vanishes on its coroot".into()));
        }
        let scale = K::from_int(2) / c;
        let f: Vec<K> = fraw.iter().map(|x| scale.clone() * x.clone()).collect();
        let h = g.bracket(&e, &f);
        Ok((e, f, h))
    };
    let (e1, f1, h1) = sl2_triple(&alpha)?;
    let (e2, f2, h2) = sl2_triple(&beta)?;

    // A2 Cartan matrix checks: alpha(h1) = 2, beta(h1) = -1 and symmetrically
    let scaled = |v: &[K], c: i64| -> Vec<K> {
        v.iter().map(|x| K::from_int(c) * x.clone()).collect()
    };
    if g.bracket(&h1, &e1) != scaled(&e1, 2)
        || g.bracket(&h2, &e2) != scaled(&e2, 2)
        || g.bracket(&h1, &e2) != scaled(&e2, -1)
        || g.bracket(&h2, &e1) != scaled(&e1, -1)
    {
        return Err(LieError::RootDegeneracy("Cartan matrix is not A2".into()));
    }

    let e3 = g.bracket(&e1, &e2);
    let f3 = g.bracket(&f2, &f1);
    if e3.iter().all(|c| c.is_zero()) || f3.iter().all(|c| c.is_zero()) {
        return Err(LieError::RootDegeneracy("degenerate third root vector".into()));
    }
    let chev = ChevalleyBasis { h1, h2, e1, e2, e3, f1, f2, f3 };

    let x = Mat::from_fn(8, 8, |i, j| chev.vectors()[j][i].clone());
    let xinv = x
        .inverse()
        .ok_or_else(|| LieError::RootDegeneracy("Chevalley candidate is dependent".into()))?;
    let std = sl3_standard_matrices::<K>();
    let images: Vec<Mat<K>> = (0..8)
        .map(|i| {
            let mut acc: Mat<K> = Mat::zeros(3, 3);
            for (j, t) in std.iter().enumerate() {
                let c = xinv[(j, i)].clone();
                if !c.is_zero() {
                    acc = acc.add(&t.scale(&c));
                }
            }
            acc
        })
        .collect();
    if !is_bracket_preserving(g, &images) {
        return Err(LieError::RootDegeneracy("constructed map fails the bracket check".into()));
    }
    Ok(Sl3Iso { chevalley: chev, images })
}

/// Preimages of the standard sl3 basis under a faithful 3x3 representation
/// given by basis images; None when the images do not span sl3.
pub fn standard_basis_preimages<K: FieldScalar>(images: &[Mat<K>]) -> Option<ChevalleyBasis<K>> {
    let rows: Vec<Vec<K>> = images.iter().map(|m| m.entries().to_vec()).collect();
    let solver = SpanSolver::new(Mat::from_rows(rows));
    if solver.dim() != 8 {
        return None;
    }
    let std = sl3_standard_matrices::<K>();
    let mut pre = Vec::with_capacity(8);
    for t in &std {
        pre.push(solver.coordinates(t.entries())?);
    }
    let mut it = pre.into_iter();
    Some(ChevalleyBasis {
        h1: it.next().unwrap(),
        h2: it.next().unwrap(),
        e1: it.next().unwrap(),
        e2: it.next().unwrap(),
        e3: it.next().unwrap(),
        f1: it.next().unwrap(),
        f2: it.next().unwrap(),
        f3: it.next().unwrap(),
    })
}

/// The automorphism swapping the two Chevalley generators: h1 <-> h2,
/// e1 <-> e2, f1 <-> f2, e3 -> -e3, f3 -> -f3. Returned as a matrix on
/// coordinates, verified to preserve brackets and square to the identity.
pub fn tau_automorphism<K: FieldScalar>(
    g: &LieAlg<K>,
    chev: &ChevalleyBasis<K>,
) -> Result<Mat<K>, LieError> {
    if g.dim() != 8 {
        return Err(LieError::RootDegeneracy("tau needs an 8-dimensional algebra".into()));
    }
    let x = Mat::from_fn(8, 8, |i, j| chev.vectors()[j][i].clone());
    let xinv = x
        .inverse()
        .ok_or_else(|| LieError::InvalidStructure("Chevalley basis is dependent".into()))?;
    let mut d: Mat<K> = Mat::zeros(8, 8);
    let one = K::one;
    d[(SL3_H2, SL3_H1)] = one();
    d[(SL3_H1, SL3_H2)] = one();
    d[(SL3_E2, SL3_E1)] = one();
    d[(SL3_E1, SL3_E2)] = one();
    d[(SL3_E3, SL3_E3)] = -one();
    d[(SL3_F2, SL3_F1)] = one();
    d[(SL3_F1, SL3_F2)] = one();
    d[(SL3_F3, SL3_F3)] = -one();
    let tau = x.matmul(&d).matmul(&xinv);

    let n = g.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = tau.apply(&g.structure_constants()[i][j]);
            let rhs =
                g.bracket(&tau.apply(&unit_vec(n, i)), &tau.apply(&unit_vec(n, j)));
            if lhs != rhs {
                return Err(LieError::InvalidStructure("tau fails the bracket check".into()));
            }
        }
    }
    if !tau.matmul(&tau).sub(&Mat::identity(8)).is_zero_matrix() {
        return Err(LieError::InvalidStructure("tau does not square to the identity".into()));
    }
    if tau.apply(&chev.h1) != chev.h2 {
        return Err(LieError::InvalidStructure("tau does not swap the Cartan basis".into()));
    }
    Ok(tau)
}

/// Precomposes a representation of standard sl3 (images in the fixed basis
/// order) with tau.
pub fn compose_with_tau<K: FieldScalar>(images: &[Mat<K>]) -> Vec<Mat<K>> {
    assert_eq!(images.len(), 8);
    vec![
        images[SL3_H2].clone(),
        images[SL3_H1].clone(),
        images[SL3_E2].clone(),
        images[SL3_E1].clone(),
        images[SL3_E3].neg(),
        images[SL3_F2].clone(),
        images[SL3_F1].clone(),
        images[SL3_F3].neg(),
    ]
}

/// Exponent vectors of the cubic monomials in the fixed embedding order
/// s^3, t^3, u^3, s^2 t, t^2 u, u^2 s, s t^2, t u^2, u s^2, s t u.
pub const CUBIC_MONOMIALS: [[usize; 3]; 10] = [
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [2, 1, 0],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [0, 1, 2],
    [2, 0, 1],
    [1, 1, 1],
];

fn monomial_index(e: &[usize; 3]) -> usize {
    CUBIC_MONOMIALS.iter().position(|m| m == e).expect("cubic exponent vector")
}

/// The action induced on cubic-monomial coordinates by the linear flow
/// x' = a x on P^2: row i holds the expansion of the derivative of the i-th
/// monomial. This is a Lie algebra homomorphism gl3 -> gl10.
pub fn sym3_matrix<K: FieldScalar>(a: &Mat<K>) -> Mat<K> {
    assert_eq!(a.rows(), 3);
    assert_eq!(a.cols(), 3);
    let mut x: Mat<K> = Mat::zeros(10, 10);
    for (i, exps) in CUBIC_MONOMIALS.iter().enumerate() {
        for v in 0..3 {
            if exps[v] == 0 {
                continue;
            }
            for w in 0..3 {
                if a[(v, w)].is_zero() {
                    continue;
                }
                let mut ne = *exps;
                ne[v] -= 1;
                ne[w] += 1;
                let k = monomial_index(&ne);
                let c = K::from_int(exps[v] as i64) * a[(v, w)].clone();
                x[(i, k)] = x[(i, k)].clone() + c;
            }
        }
    }
    x
}

/// Images of the standard sl3 basis on the cubic-monomial module.
pub fn sym3_rep<K: FieldScalar>() -> Vec<Mat<K>> {
    sl3_standard_matrices::<K>().iter().map(sym3_matrix).collect()
}

/// Highest weight of a ten-dimensional representation of standard sl3,
/// reported as (weight at h1, weight at h2); only (3, 0) and (0, 3) are in
/// scope and anything else is an error.
pub fn highest_weight<K: FieldScalar>(images: &[Mat<K>]) -> Result<(i64, i64), LieError> {
    highest_weight_vector(images).map(|(_, w)| w)
}

fn highest_weight_vector<K: FieldScalar>(
    images: &[Mat<K>],
) -> Result<(Vec<K>, (i64, i64)), LieError> {
    assert_eq!(images.len(), 8);
    let n = images[0].rows();
    if n != 10 || images.iter().any(|m| m.rows() != 10 || m.cols() != 10) {
        return Err(LieError::BadModule(format!("module dimension {n}, expected 10")));
    }
    let mut rows: Vec<Vec<K>> = Vec::with_capacity(20);
    for idx in [SL3_E1, SL3_E2] {
        for i in 0..10 {
            rows.push(images[idx].row(i).to_vec());
        }
    }
    let kernel = Mat::from_rows(rows).rref().kernel_basis();
    if kernel.len() != 1 {
        return Err(LieError::BadModule(format!(
            "joint kernel of the raising operators has dimension {}",
            kernel.len()
        )));
    }
    let v = kernel.into_iter().next().unwrap();
    let weight_at = |idx: usize| -> Option<i64> {
        let image = images[idx].apply(&v);
        for cand in [0i64, 3, -3] {
            let scaled: Vec<K> = v.iter().map(|x| K::from_int(cand) * x.clone()).collect();
            if image == scaled {
                return Some(cand);
            }
        }
        None
    };
    let w1 = weight_at(SL3_H1);
    let w2 = weight_at(SL3_H2);
    match (w1, w2) {
        (Some(3), Some(0)) => Ok((v, (3, 0))),
        (Some(0), Some(3)) => Ok((v, (0, 3))),
        _ => Err(LieError::BadModule(format!(
            "unexpected highest weight ({w1:?}, {w2:?})"
        ))),
    }
}

/// Words over the two lowering operators in length-then-lex order, applied
/// greedily to the highest weight vector until ten independent vectors are
/// found. The same words evaluated in both modules give the intertwiner.
pub fn module_isomorphism<K: FieldScalar>(
    images0: &[Mat<K>],
    images1: &[Mat<K>],
) -> Result<Mat<K>, LieError> {
    let (v0, w0) = highest_weight_vector(images0)?;
    let (v1, w1) = highest_weight_vector(images1)?;
    if w0 != w1 {
        return Err(LieError::WeightMismatch);
    }
    let apply_word = |images: &[Mat<K>], word: &[usize], v: &Vec<K>| -> Vec<K> {
        let mut cur = v.clone();
        for d in word.iter().rev() {
            cur = images[SL3_F1 + d].apply(&cur);
        }
        cur
    };
    let mut kept_words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut vecs0: Vec<Vec<K>> = vec![v0.clone()];
    'outer: for len in 1..=9usize {
        for code in 0..(1u32 << len) {
            if vecs0.len() == 10 {
                break 'outer;
            }
            let word: Vec<usize> =
                (0..len).map(|k| ((code >> (len - 1 - k)) & 1) as usize).collect();
            let cand = apply_word(images0, &word, &v0);
            if cand.iter().all(|c| c.is_zero()) {
                continue;
            }
            vecs0.push(cand);
            if Mat::from_rows(vecs0.clone()).rref().rank() == vecs0.len() {
                kept_words.push(word);
            } else {
                vecs0.pop();
            }
        }
    }
    if vecs0.len() != 10 {
        return Err(LieError::BadModule("lowering words do not span the module".into()));
    }
    let u0 = Mat::from_fn(10, 10, |i, j| vecs0[j][i].clone());
    let vecs1: Vec<Vec<K>> =
        kept_words.iter().map(|w| apply_word(images1, w, &v1)).collect();
    let u1 = Mat::from_fn(10, 10, |i, j| vecs1[j][i].clone());
    let u0inv = u0
        .inverse()
        .ok_or_else(|| LieError::BadModule("selected vectors are dependent".into()))?;
    let f = u1.matmul(&u0inv);
    if f.inverse().is_none() {
        return Err(LieError::BadModule("intertwiner candidate is singular".into()));
    }
    for k in 0..8 {
        let lhs = f.matmul(&images0[k]);
        let rhs = images1[k].matmul(&f);
        if !lhs.sub(&rhs).is_zero_matrix() {
            return Err(LieError::BadModule("intertwining identity fails".into()));
        }
    }
    Ok(f)
}

pub fn unit_vec<K: FieldScalar>(n: usize, i: usize) -> Vec<K> {
    let mut v = vec![K::zero(); n];
    v[i] = K::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{NfElem, NumberField};
    use crate::rat::{rat_int, Rat};
    use crate::UniPoly;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rmat(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| rat_int(rows[i][j]))
    }

    fn sl2_matrices() -> Vec<Mat<Rat>> {
        vec![
            rmat(&[&[0, 1], &[0, 0]]),
            rmat(&[&[1, 0], &[0, -1]]),
            rmat(&[&[0, 0], &[1, 0]]),
        ]
    }

    fn so3() -> LieAlg<Rat> {
        // [e0,e1]=e2, [e1,e2]=e0, [e2,e0]=e1
        let z = || vec![Rat::zero(); 3];
        let u = |i: usize| unit_vec::<Rat>(3, i);
        let mut sc = vec![vec![z(); 3]; 3];
        sc[0][1] = u(2);
        sc[1][0] = u(2).iter().map(|c| -c.clone()).collect();
        sc[1][2] = u(0);
        sc[2][1] = u(0).iter().map(|c| -c.clone()).collect();
        sc[2][0] = u(1);
        sc[0][2] = u(1).iter().map(|c| -c.clone()).collect();
        LieAlg::new(3, sc).unwrap()
    }

    #[test]
    fn rejects_invalid_structure_constants() {
        // antisymmetry violation
        let z = || vec![Rat::zero(); 2];
        let mut sc = vec![vec![z(); 2]; 2];
        sc[0][1] = unit_vec(2, 0);
        sc[1][0] = unit_vec(2, 0);
        assert!(matches!(LieAlg::new(2, sc), Err(LieError::InvalidStructure(_))));

        // Jacobi violation: [e0,e1]=e0, [e0,e2]=e1, [e1,e2]=0
        let z3 = || vec![Rat::zero(); 3];
        let neg = |v: Vec<Rat>| v.iter().map(|c| -c.clone()).collect::<Vec<_>>();
        let mut sc = vec![vec![z3(); 3]; 3];
        sc[0][1] = unit_vec(3, 0);
        sc[1][0] = neg(unit_vec(3, 0));
        sc[0][2] = unit_vec(3, 1);
        sc[2][0] = neg(unit_vec(3, 1));
        let err = LieAlg::new(3, sc);
        assert!(matches!(err, Err(LieError::InvalidStructure(ref m)) if m.contains("Jacobi")));
    }

    #[test]
    fn sl2_killing_cartan_and_split() {
        let (g, _) = LieAlg::from_matrix_span(&sl2_matrices()).unwrap();
        let report = killing_and_checks(&g);
        assert!(report.semisimple);
        assert!(!report.simple8);
        // textbook values in the (e, h, f) order
        assert_eq!(report.killing[(1, 1)], rat_int(8));
        assert_eq!(report.killing[(0, 2)], rat_int(4));
        assert_eq!(report.killing[(0, 0)], rat_int(0));

        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let cartan = cartan_subalgebra(&g, &mut rng).unwrap();
        assert_eq!(cartan.basis.len(), 1);

        // the diagonal Cartan is split with weights -2, 0, 2
        let mut diag = cartan_from_basis(&g, vec![unit_vec(3, 1)]).unwrap();
        assert!(is_split_cartan(&g, &mut diag));
        let mut weights: Vec<Rat> = diag
            .weight_spaces
            .unwrap()
            .iter()
            .map(|s| s.weights[0].clone())
            .collect();
        weights.sort();
        assert_eq!(weights, vec![rat_int(-2), rat_int(0), rat_int(2)]);
    }

    #[test]
    fn solvable_algebra_is_not_semisimple() {
        // [x, y] = y
        let z = || vec![Rat::zero(); 2];
        let mut sc = vec![vec![z(); 2]; 2];
        sc[0][1] = unit_vec(2, 1);
        sc[1][0] = vec![Rat::zero(), -Rat::one()];
        let g = LieAlg::new(2, sc).unwrap();
        let report = killing_and_checks(&g);
        assert!(!report.semisimple);
        assert_eq!(report.killing.rref().rank(), 1);
    }

    #[test]
    fn so3_splits_only_after_extending_scalars() {
        let g = so3();
        assert!(killing_and_checks(&g).semisimple);
        let mut cartan = cartan_from_basis(&g, vec![unit_vec(3, 2)]).unwrap();
        assert!(!is_split_cartan(&g, &mut cartan));
        assert!(!cartan.split);

        // over Q(i) the same subalgebra becomes split with weights +-i
        let qi = NumberField::new_root_of(&UniPoly::from_int_coeffs(&[1, 0, 1]));
        let gi = g.map_scalars(|c| qi.constant(c.clone()));
        let basis = vec![unit_vec::<NfElem>(3, 2)
            .iter()
            .map(|c| qi.embed(c))
            .collect::<Vec<_>>()];
        let mut cartan_i = cartan_from_basis(&gi, basis).unwrap();
        assert!(is_split_cartan(&gi, &mut cartan_i));
        let spaces = cartan_i.weight_spaces.unwrap();
        let i_gen = qi.generator();
        let mut nonzero: Vec<NfElem> = spaces
            .iter()
            .filter(|s| !s.weights[0].is_zero())
            .map(|s| s.weights[0].clone())
            .collect();
        nonzero.sort_by(|a, b| a.coords().cmp(b.coords()));
        assert_eq!(nonzero, vec![-i_gen.clone(), i_gen]);
    }

    #[test]
    fn sl3_checks_and_split_iso() {
        let (g, chev) = sl3_algebra::<Rat>();
        let report = killing_and_checks(&g);
        assert!(report.semisimple);
        assert!(report.simple8);

        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let found = cartan_subalgebra(&g, &mut rng).unwrap();
        assert_eq!(found.basis.len(), 2);

        let mut diag = cartan_from_basis(&g, vec![chev.h1.clone(), chev.h2.clone()]).unwrap();
        assert!(is_split_cartan(&g, &mut diag));
        let spaces = diag.weight_spaces.as_ref().unwrap();
        let nonzero: Vec<_> =
            spaces.iter().filter(|s| s.weights.iter().any(|w| !w.is_zero())).collect();
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero.iter().all(|s| s.basis.len() == 1));

        let iso = split_iso_sl3(&g, &diag).unwrap();
        assert!(is_bracket_preserving(&g, &iso.images));
        assert!(iso.images.iter().all(|m| m.trace().is_zero()));
        let flat: Vec<Vec<Rat>> = iso.images.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(Mat::from_rows(flat).rref().rank(), 8);
    }

    #[test]
    fn scrambled_sl3_is_recognized() {
        let (g, chev) = sl3_algebra::<Rat>();
        // unipotent change of basis with ones above the diagonal
        let r = Mat::from_fn(8, 8, |i, j| {
            if i == j {
                Rat::one()
            } else if j > i {
                rat_int(1)
            } else {
                Rat::zero()
            }
        });
        let scr = g.change_basis(&r).unwrap();
        assert!(killing_and_checks(&scr).simple8);
        let rinv = r.inverse().unwrap();
        let basis = vec![rinv.apply(&chev.h1), rinv.apply(&chev.h2)];
        let mut cartan = cartan_from_basis(&scr, basis).unwrap();
        assert!(is_split_cartan(&scr, &mut cartan));
        let iso = split_iso_sl3(&scr, &cartan).unwrap();
        assert!(is_bracket_preserving(&scr, &iso.images));
    }

    #[test]
    fn tau_swaps_cartan_and_is_involutive() {
        let (g, chev) = sl3_algebra::<Rat>();
        let tau = tau_automorphism(&g, &chev).unwrap();
        assert_eq!(tau.apply(&chev.h1), chev.h2);
        assert_eq!(tau.apply(&chev.h2), chev.h1);
        assert_eq!(tau.apply(&chev.e1), chev.e2);
        assert_eq!(
            tau.apply(&chev.e3),
            chev.e3.iter().map(|c| -c.clone()).collect::<Vec<_>>()
        );
        assert!(tau.matmul(&tau).sub(&Mat::identity(8)).is_zero_matrix());
    }

    #[test]
    fn sym3_is_a_representation() {
        // the induced flow respects commutators and sends the identity to
        // three times the identity (the Euler derivation on cubics)
        let id3: Mat<Rat> = Mat::identity(3);
        assert!(sym3_matrix(&id3)
            .sub(&Mat::identity(10).scale(&rat_int(3)))
            .is_zero_matrix());
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = Mat::from_fn(3, 3, |_, _| rat_int(rng.random_range(-4..=4)));
            let b = Mat::from_fn(3, 3, |_, _| rat_int(rng.random_range(-4..=4)));
            let lhs = sym3_matrix(&a.commutator(&b));
            let rhs = sym3_matrix(&a).commutator(&sym3_matrix(&b));
            assert!(lhs.sub(&rhs).is_zero_matrix());
        }
        let (g, _) = sl3_algebra::<Rat>();
        assert!(is_bracket_preserving(&g, &sym3_rep::<Rat>()));
    }

    #[test]
    fn sym3_highest_weight_and_tau_twist() {
        let images = sym3_rep::<Rat>();
        assert_eq!(highest_weight(&images).unwrap(), (3, 0));
        let twisted = compose_with_tau(&images);
        assert_eq!(highest_weight(&twisted).unwrap(), (0, 3));
        let (g, _) = sl3_algebra::<Rat>();
        let adjoint = g.adjoint_rep();
        assert!(matches!(highest_weight(&adjoint), Err(LieError::BadModule(_))));
    }

    #[test]
    fn module_isomorphism_schur_and_conjugation() {
        let images = sym3_rep::<Rat>();
        let f = module_isomorphism(&images, &images).unwrap();
        // Schur: an endo-intertwiner of an irreducible module is scalar
        let c = f[(0, 0)].clone();
        assert!(f.sub(&Mat::identity(10).scale(&c)).is_zero_matrix());

        let p = Mat::from_fn(10, 10, |i, j| {
            if i == j {
                Rat::one()
            } else if j == i + 1 {
                rat_int(2)
            } else {
                Rat::zero()
            }
        });
        let pinv = p.inverse().unwrap();
        let conj: Vec<Mat<Rat>> =
            images.iter().map(|m| p.matmul(m).matmul(&pinv)).collect();
        let f = module_isomorphism(&images, &conj).unwrap();
        let ratio = f.matmul(&p.inverse().unwrap());
        let c = ratio[(0, 0)].clone();
        assert!(!c.is_zero());
        assert!(ratio.sub(&Mat::identity(10).scale(&c)).is_zero_matrix());

        // weight mismatch without the tau correction, fixed by composing
        let twisted: Vec<Mat<Rat>> = compose_with_tau(&conj);
        assert!(matches!(
            module_isomorphism(&images, &twisted),
            Err(LieError::WeightMismatch)
        ));
        let corrected = module_isomorphism(&compose_with_tau(&images), &twisted).unwrap();
        assert!(corrected.inverse().is_some());
    }
}
