//! Dense matrices over an exact field scalar.
//!
//! Everything here is exact: reduced row echelon form with first-nonzero
//! pivoting, kernels, solving, inverses and characteristic polynomials. For
//! large rational systems a fraction-free integer elimination path keeps
//! entry growth under control; it is selected by a size threshold and
//! produces the same (unique) reduced echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rat::{to_primitive_integers, Rat};
use crate::scalar::FieldScalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// Past this many entries, rational elimination switches to the
/// fraction-free integer path.
const FRACTION_FREE_THRESHOLD: usize = 10_000;

impl<K: FieldScalar> Mat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[K] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<K> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<L: FieldScalar>(&self, mut f: impl FnMut(&K) -> L) -> Mat<L> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out: Mat<K> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut acc = K::zero();
        for i in 0..self.rows {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Reduced row echelon form with first-nonzero pivoting (plain field
    /// arithmetic; the rational front end may reroute to the fraction-free
    /// path instead).
    pub fn rref(&self) -> Rref<K> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let t = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = t;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                        m[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, pivots }
    }

    /// Solves `self * x = b`, returning None when inconsistent. When the
    /// system is underdetermined the free variables are set to zero.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(self.rows, b.len());
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let rr = aug.rref();
        if rr.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (r, &p) in rr.pivots.iter().enumerate() {
            x[p] = rr.mat[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                K::one()
            } else {
                K::zero()
            }
        });
        let rr = aug.rref();
        if rr.pivots.len() < n || rr.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| rr.mat[(i, n + j)].clone()))
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return K::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = det * m[(c, c)].clone();
            let inv = m[(c, c)].inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let t = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = t;
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(lambda I - self)` by the
    /// Faddeev-LeVerrier recurrence; monic of degree n, exact.
    pub fn char_poly(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols, "char_poly of non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![K::zero(); n + 1];
        coeffs[n] = K::one();
        let mut b = Mat::identity(n);
        for k in 1..=n {
            let m = self.matmul(&b);
            let c = -(m.trace() / K::from_int(k as i64));
            coeffs[n - k] = c.clone();
            b = m;
            for i in 0..n {
                let t = b[(i, i)].clone() + c.clone();
                b[(i, i)] = t;
            }
        }
        Poly::new(coeffs)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl<K> std::ops::Index<(usize, usize)> for Mat<K> {
    type Output = K;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Mat<K> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

impl<K: std::fmt::Debug> std::fmt::Debug for Mat<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Result of row reduction: the reduced matrix together with its pivot
/// columns (so rank and kernel come for free).
#[derive(Clone, Debug)]
pub struct Rref<K> {
    pub mat: Mat<K>,
    pub pivots: Vec<usize>,
}

impl<K: FieldScalar> Rref<K> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A basis of the right kernel, one vector per free column, in free
    /// column order. Each has a 1 in its free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let n = self.mat.cols();
        let mut basis = Vec::with_capacity(n - self.pivots.len());
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; n];
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = Some(r);
            }
            v
        };
        for f in 0..n {
            if pivot_set[f].is_some() {
                continue;
            }
            let mut v = vec![K::zero(); n];
            v[f] = K::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = -self.mat[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// RREF and kernel of a rational matrix. Dispatches to fraction-free integer
/// elimination above the size threshold; both paths yield the unique RREF.
pub fn rref_and_kernel(m: &Mat<Rat>) -> (Mat<Rat>, Vec<Vec<Rat>>, usize) {
    let rr = if m.rows() * m.cols() > FRACTION_FREE_THRESHOLD {
        rref_fraction_free(m)
    } else {
        m.rref()
    };
    let kernel = rr.kernel_basis();
    let rank = rr.rank();
    (rr.mat, kernel, rank)
}

/// Fraction-free elimination for rational matrices: rows are scaled to
/// primitive integer vectors, eliminated by cross-multiplication with
/// gcd stripping, and only normalized to rationals at the end.
pub fn rref_fraction_free(m: &Mat<Rat>) -> Rref<Rat> {
    let cols = m.cols();
    // echelon rows as primitive integer vectors, sorted by pivot column
    let mut echelon: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for i in 0..m.rows() {
        let (mut row, _) = to_primitive_integers(m.row(i));
        reduce_int_row(&mut row, &echelon);
        if let Some(p) = row.iter().position(|x| !x.is_zero()) {
            strip_gcd(&mut row);
            // re-reduce existing rows against the new pivot right away so the
            // stored set stays fully reduced
            for (_, r) in echelon.iter_mut() {
                if !r[p].is_zero() {
                    cross_eliminate(r, &row, p);
                    strip_gcd(r);
                }
            }
            let pos = echelon.partition_point(|(q, _)| *q < p);
            echelon.insert(pos, (p, row));
        }
    }
    let pivots: Vec<usize> = echelon.iter().map(|(p, _)| *p).collect();
    let mut mat = Mat::zeros(echelon.len(), cols);
    for (r, (p, row)) in echelon.iter().enumerate() {
        let lead = Rat::from_integer(row[*p].clone());
        for (c, x) in row.iter().enumerate() {
            if !x.is_zero() {
                mat[(r, c)] = Rat::from_integer(x.clone()) / lead.clone();
            }
        }
    }
    Rref { mat, pivots }
}

fn reduce_int_row(row: &mut Vec<BigInt>, echelon: &[(usize, Vec<BigInt>)]) {
    for (p, er) in echelon {
        if !row[*p].is_zero() {
            cross_eliminate(row, er, *p);
        }
    }
    strip_gcd(row);
}

/// row := row * er[p] - row[p] * er, which zeroes column p.
fn cross_eliminate(row: &mut [BigInt], er: &[BigInt], p: usize) {
    let a = er[p].clone();
    let b = row[p].clone();
    for (x, e) in row.iter_mut().zip(er) {
        *x = &*x * &a - &b * e;
    }
}

fn strip_gcd(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Solves coordinate problems against a fixed full-row-rank basis matrix:
/// given basis rows b_1..b_k, expresses vectors v as sum x_i b_i.
pub struct SpanSolver<K> {
    basis: Mat<K>,
    pivot_cols: Vec<usize>,
    inv_on_pivots: Mat<K>,
}

impl<K: FieldScalar> SpanSolver<K> {
    /// `basis` rows must be linearly independent.
    pub fn new(basis: Mat<K>) -> Self {
        let rr = basis.rref();
        assert_eq!(rr.rank(), basis.rows(), "basis rows dependent");
        let pivot_cols = rr.pivots.clone();
        let k = basis.rows();
        let square = Mat::from_fn(k, k, |i, j| basis[(i, pivot_cols[j])].clone());
        let inv_on_pivots = square.transpose().inverse().expect("invertible by construction");
        SpanSolver { basis, pivot_cols, inv_on_pivots }
    }

    pub fn basis(&self) -> &Mat<K> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `v` in the basis, or None when `v` is outside the span.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        assert_eq!(v.len(), self.basis.cols());
        let restricted: Vec<K> = self.pivot_cols.iter().map(|&c| v[c].clone()).collect();
        let x = self.inv_on_pivots.apply(&restricted);
        // candidate found from the pivot coordinates; verify on all of them
        for c in 0..self.basis.cols() {
            let mut acc = K::zero();
            for (i, xi) in x.iter().enumerate() {
                if !xi.is_zero() {
                    acc = acc + xi.clone() * self.basis[(i, c)].clone();
                }
            }
            if acc != v[c] {
                return None;
            }
        }
        Some(x)
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Row span of a set of vectors in canonical (RREF) form; two spans are equal
/// iff their canonical forms are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<K> {
    rref: Mat<K>,
    pivots: Vec<usize>,
}

impl<K: FieldScalar> Subspace<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let rr = Mat::from_rows(rows).rref();
        let mat = Mat::from_fn(rr.rank(), rr.mat.cols(), |i, j| rr.mat[(i, j)].clone());
        Subspace { rref: mat, pivots: rr.pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rref.cols()
    }

    pub fn basis_rows(&self) -> Vec<Vec<K>> {
        (0..self.dim()).map(|i| self.rref.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[K]) -> bool {
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for c in 0..w.len() {
                    let t = w[c].clone() - f.clone() * self.rref[(r, c)].clone();
                    w[c] = t;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn rmat(rng: &mut ChaCha12Rng, rows: usize, cols: usize, bound: i64) -> Mat<Rat> {
        Mat::from_fn(rows, cols, |_, _| rat_int(rng.random_range(-bound..=bound)))
    }

    #[test]
    fn rref_identity() {
        let id: Mat<Rat> = Mat::identity(3);
        let (r, kernel, rank) = rref_and_kernel(&id);
        assert_eq!(rank, 3);
        assert!(kernel.is_empty());
        assert_eq!(r, id);
    }

    #[test]
    fn rref_rank_one() {
        let m = Mat::from_rows(vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(1)]]);
        let (_, kernel, rank) = rref_and_kernel(&m);
        assert_eq!(rank, 1);
        assert_eq!(kernel, vec![vec![rat_int(-1), rat_int(1)]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        for _ in 0..10 {
            let m = rmat(&mut rng, 5, 8, 4);
            let (_, kernel, rank) = rref_and_kernel(&m);
            assert_eq!(rank + kernel.len(), 8);
            for v in &kernel {
                assert!(m.apply(v).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn rref_idempotent_and_paths_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..10 {
            let m = rmat(&mut rng, 6, 9, 5);
            let rr = m.rref();
            let again = rr.mat.rref();
            assert_eq!(rr.mat, again.mat);
            let ff = rref_fraction_free(&m);
            assert_eq!(rr.mat, ff.mat);
            assert_eq!(rr.pivots, ff.pivots);
        }
    }

    #[test]
    fn char_poly_small_cases() {
        let d = Mat::from_rows(vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(2)]]);
        // diag(1,2) -> x^2 - 3x + 2
        assert_eq!(d.char_poly().coeffs(), &[rat_int(2), rat_int(-3), rat_int(1)]);

        let mut jordan: Mat<Rat> = Mat::zeros(3, 3);
        jordan[(0, 1)] = rat_int(1);
        jordan[(1, 2)] = rat_int(1);
        assert_eq!(
            jordan.char_poly().coeffs(),
            &[rat_int(0), rat_int(0), rat_int(0), rat_int(1)]
        );
    }

    #[test]
    fn char_poly_companion() {
        // companion of x^3 + x^2 - 2x - 1
        let c = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0), rat_int(2)],
            vec![rat_int(0), rat_int(1), rat_int(-1)],
        ]);
        assert_eq!(
            c.char_poly().coeffs(),
            &[rat_int(-1), rat_int(-2), rat_int(1), rat_int(1)]
        );
    }

    #[test]
    fn cayley_hamilton_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for n in [2usize, 3, 5, 8, 12] {
            let m = rmat(&mut rng, n, n, 3);
            let p = m.char_poly();
            let mut acc: Mat<Rat> = Mat::zeros(n, n);
            // Horner evaluation of p at the matrix
            for c in p.coeffs().iter().rev() {
                acc = acc.matmul(&m);
                for i in 0..n {
                    let t = acc[(i, i)].clone() + c.clone();
                    acc[(i, i)] = t;
                }
            }
            assert!(acc.is_zero_matrix(), "Cayley-Hamilton failed at n={n}");
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let x = m.solve(&[rat_int(3), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
        assert_eq!(m.det(), rat_int(1));

        let singular = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.det(), rat_int(0));
        assert!(singular.solve(&[rat_int(0), rat_int(1)]).is_none());
    }

    #[test]
    fn span_solver_roundtrip() {
        let basis = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(2), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1), rat_int(-1)],
        ]);
        let solver = SpanSolver::new(basis.clone());
        let v: Vec<Rat> = (0..4)
            .map(|c| rat(3, 2) * basis[(0, c)].clone() - rat_int(2) * basis[(1, c)].clone())
            .collect();
        assert_eq!(solver.coordinates(&v), Some(vec![rat(3, 2), rat_int(-2)]));
        assert!(!solver.contains(&[rat_int(0), rat_int(0), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn subspace_equality_is_span_level() {
        let a = Subspace::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(2), rat_int(2)],
        ]);
        let b = Subspace::from_rows(vec![
            vec![rat_int(1), rat_int(3), rat_int(2)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ]);
        assert_eq!(a, b);
        assert!(a.contains(&[rat_int(2), rat_int(4), rat_int(2)]));
        assert!(!a.contains(&[rat_int(0), rat_int(0), rat_int(1)]));
    }
}
