//! Dense linear algebra over any [`Scalar`] backend.
//!
//! Dimensions here are small (tens), so everything is dense and row-major.
//! Exact backends pivot on the first nonzero entry; the floating backend
//! uses partial pivoting on magnitude.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar, Tol};

#[derive(Clone, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        let tol = Tol::default();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if F::is_exact() && a.is_zero(tol) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if F::is_exact() && b.is_zero(tol) {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Matrix<F> {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix<F>, f: impl Fn(F, F) -> F) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        let data = self.data.iter().map(|a| a.clone() * s.clone()).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self, tol: Tol) -> bool {
        self.data.iter().all(|a| a.is_zero(tol))
    }

    pub fn approx_eq(&self, other: &Matrix<F>, tol: Tol) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Entries flattened row-major.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn rank(&self, tol: Tol) -> usize {
        F::rank_of(self, tol)
    }
}

fn choose_pivot<F: Scalar>(m: &Matrix<F>, col: usize, from: usize, tol: Tol) -> Option<usize> {
    if F::is_exact() {
        (from..m.rows).find(|&r| !m[(r, col)].is_zero(tol))
    } else {
        (from..m.rows)
            .filter(|&r| !m[(r, col)].is_zero(tol))
            .max_by(|&a, &b| m[(a, col)].magnitude().total_cmp(&m[(b, col)].magnitude()))
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Scalar>(m: &Matrix<F>, tol: Tol) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = choose_pivot(&a, col, row, tol) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let inv = a[(row, col)].inv().expect("pivot is nonzero");
        for j in col..a.cols {
            a[(row, j)] = a[(row, j)].clone() * inv.clone();
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero(tol) {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in col..a.cols {
                a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(row, j)].clone();
            }
        }
        pivots.push(col);
        row += 1;
    }
    if !F::is_exact() {
        // flush round-off below tolerance so downstream zero tests agree
        for v in a.data.iter_mut() {
            if v.is_zero(tol) {
                *v = F::zero();
            }
        }
    }
    (a, pivots)
}

pub fn gaussian_rank<F: Scalar>(m: &Matrix<F>, tol: Tol) -> usize {
    rref(m, tol).1.len()
}

/// Rank by fraction-free (Bareiss) elimination: rows are cleared of
/// denominators and all intermediate entries stay integral.
pub fn bareiss_rank(m: &Matrix<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in col + 1..cols {
                let v = &a[rank][col] * &a[r][j] - &a[r][col] * &a[rank][j];
                a[r][j] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Scalar>(m: &Matrix<F>, tol: Tol) -> Vec<Vec<F>> {
    let (r, pivots) = rref(m, tol);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); m.cols()];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve<F: Scalar>(m: &Matrix<F>, b: &[F], tol: Tol) -> Option<Vec<F>> {
    assert_eq!(m.rows(), b.len());
    let mut aug = Matrix::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols())] = b[i].clone();
    }
    let (r, pivots) = rref(&aug, tol);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![F::zero(); m.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, m.cols())].clone();
    }
    Some(x)
}

pub fn inverse<F: Scalar>(m: &Matrix<F>, tol: Tol) -> Option<Matrix<F>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = F::one();
    }
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Row and column divisors `r`, `c` such that `diag(r)⁻¹ · m · diag(c)⁻¹`
/// has entries of modulus at most 1 with a unit entry in every nonzero row
/// and column. Divisors are powers of two, so exact backends see the same
/// matrix up to exact rescaling and floating ones lose no precision.
fn equilibrators<F: Scalar>(m: &Matrix<F>) -> (Vec<F>, Vec<F>) {
    let pow2 = |x: f64| {
        if x > 0.0 && x.is_finite() {
            2f64.powi(x.log2().round() as i32)
        } else {
            1.0
        }
    };
    let as_f = |x: f64| F::from_rational(&crate::scalar::Rational::from_float(x).expect("finite"));
    let mut rows = vec![1.0; m.rows()];
    let mut cols = vec![1.0; m.cols()];
    for _ in 0..3 {
        for (c, s) in cols.iter_mut().enumerate() {
            let big = (0..m.rows())
                .map(|r| m[(r, c)].magnitude() / rows[r])
                .fold(0.0, f64::max);
            *s = pow2(big);
        }
        for (r, s) in rows.iter_mut().enumerate() {
            let big = (0..m.cols())
                .map(|c| m[(r, c)].magnitude() / cols[c])
                .fold(0.0, f64::max);
            *s = pow2(big);
        }
    }
    (
        rows.into_iter().map(as_f).collect(),
        cols.into_iter().map(as_f).collect(),
    )
}

fn rescale<F: Scalar>(m: &Matrix<F>, rows: &[F], cols: &[F], invert: bool) -> Matrix<F> {
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let f = rows[r].clone() * cols[c].clone();
            out[(r, c)] = if invert {
                out[(r, c)].div(&f).expect("nonzero")
            } else {
                out[(r, c)].clone() * f
            };
        }
    }
    out
}

/// Pivots below this (after equilibration) count as zero in
/// [`equilibrated_rank`]; looser tolerances would reject maps that are merely
/// ill-conditioned.
const RANK_EPS: f64 = 1e-12;

/// Rank of `m` after two-sided power-of-two equilibration. Floating backends
/// use a threshold near machine precision, never above `tol`.
pub fn equilibrated_rank<F: Scalar>(m: &Matrix<F>, tol: Tol) -> usize {
    if F::is_exact() {
        return m.rank(tol);
    }
    let (r, c) = equilibrators(m);
    rescale(m, &r, &c, true).rank(Tol(tol.0.min(RANK_EPS)))
}

/// Inverse of `m` computed on its equilibrated form, with the rank found;
/// the inverse is `None` when `m` is singular.
pub fn equilibrated_inverse<F: Scalar>(m: &Matrix<F>, tol: Tol) -> (usize, Option<Matrix<F>>) {
    if F::is_exact() {
        let rank = m.rank(tol);
        return (
            rank,
            if rank == m.rows() {
                inverse(m, tol)
            } else {
                None
            },
        );
    }
    let (r, c) = equilibrators(m);
    let scaled = rescale(m, &r, &c, true);
    let tol = Tol(tol.0.min(RANK_EPS));
    let rank = scaled.rank(tol);
    if rank < m.rows() {
        return (rank, None);
    }
    // m = R S C, so m⁻¹ = C⁻¹ S⁻¹ R⁻¹
    let inv = inverse(&scaled, tol).map(|si| rescale(&si, &c, &r, true));
    (rank, inv)
}

/// A subspace of `F^dim`, stored as the rows of its reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    dim: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> Subspace<F> {
    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::span(
            dim,
            Matrix::<F>::identity(dim).row_vectors(),
            Tol::default(),
        )
    }

    pub fn span(dim: usize, vectors: impl IntoIterator<Item = Vec<F>>, tol: Tol) -> Self {
        let rows: Vec<Vec<F>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(dim);
        }
        assert!(
            rows.iter().all(|v| v.len() == dim),
            "vector length mismatch"
        );
        let (r, pivots) = rref(&Matrix::from_rows(rows), tol);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { dim, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates with respect to the echelon basis (read off at the pivot
    /// columns) if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F], tol: Tol) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            for (r, x) in residual.iter_mut().zip(b) {
                *r = r.clone() - c.clone() * x.clone();
            }
        }
        let scale = v.iter().map(Scalar::magnitude).fold(1.0, f64::max);
        residual
            .iter()
            .all(|r| r.is_zero(Tol(tol.0 * scale)))
            .then_some(coords)
    }

    pub fn contains(&self, v: &[F], tol: Tol) -> bool {
        self.coordinates(v, tol).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>, tol: Tol) -> bool {
        self.basis.iter().all(|b| other.contains(b, tol))
    }

    pub fn sum(&self, other: &Subspace<F>, tol: Tol) -> Subspace<F> {
        Self::span(
            self.dim,
            self.basis.iter().chain(&other.basis).cloned(),
            tol,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Complex64};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| q(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        let t = Tol::default();
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).rank(t), 1);
        assert_eq!(qm(&[&[0, 0], &[0, 0]]).rank(t), 0);
        assert_eq!(qm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).rank(t), 2);
        assert_eq!(Matrix::<Rational>::identity(5).rank(t), 5);
    }

    #[test]
    fn bareiss_handles_fractions() {
        let half = parse_rational("1/2").unwrap();
        let m = Matrix::from_rows(vec![vec![half.clone(), q(1)], vec![q(1), q(2)]]);
        assert_eq!(bareiss_rank(&m), 1);
        assert_eq!(gaussian_rank(&m, Tol::default()), 1);
    }

    #[test]
    fn nullspace_and_solve() {
        let m = qm(&[&[1, 1, 0], &[0, 1, 1]]);
        let ns = nullspace(&m, Tol::default());
        assert_eq!(ns.len(), 1);
        assert!(m
            .mul_vec(&ns[0])
            .iter()
            .all(|x| Scalar::is_zero(x, Tol::default())));
        let x = solve(&m, &[q(1), q(2)], Tol::default()).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(1), q(2)]);
        let inconsistent = qm(&[&[1, 1], &[1, 1]]);
        assert!(solve(&inconsistent, &[q(1), q(2)], Tol::default()).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&m, Tol::default()).unwrap();
        assert!(m.mul(&inv).approx_eq(&Matrix::identity(2), Tol::default()));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]]), Tol::default()).is_none());
    }

    #[test]
    fn floating_rank_uses_tolerance() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let m = Matrix::from_rows(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0 + 1e-13)]]);
        assert_eq!(m.rank(Tol(1e-9)), 1);
        assert_eq!(m.rank(Tol(1e-15)), 2);
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::span(
            3,
            vec![
                vec![q(1), q(1), q(0)],
                vec![q(2), q(2), q(0)],
                vec![q(0), q(1), q(1)],
            ],
            Tol::default(),
        );
        assert_eq!(s.dim(), 2);
        let v = vec![q(1), q(3), q(2)];
        let c = s.coordinates(&v, Tol::default()).unwrap();
        let mut recon = vec![q(0); 3];
        for (ci, b) in c.iter().zip(s.basis()) {
            for (r, x) in recon.iter_mut().zip(b) {
                *r += ci * x;
            }
        }
        assert_eq!(recon, v);
        assert!(!s.contains(&[q(1), q(0), q(0)], Tol::default()));
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_gaussian(entries in proptest::collection::vec(-3i64..=3, 20), den in 1i64..4) {
            let rows: Vec<Vec<Rational>> = entries
                .chunks(5)
                .map(|c| c.iter().map(|&v| Rational::new(v.into(), den.into())).collect())
                .collect();
            let m = Matrix::from_rows(rows);
            prop_assert_eq!(bareiss_rank(&m), gaussian_rank(&m, Tol::default()));
        }
    }
}
