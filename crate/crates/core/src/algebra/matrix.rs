//! Dense matrices over an exact field, fraction-free elimination and the
//! subspace operations built on it.

use std::fmt;

use num_traits::Zero;

use super::scalar::Field;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Row-echelon data produced by [`ScalarMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: ScalarMatrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> ScalarMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// Builds from a list of rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<F>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors of length `n`.
    pub fn from_columns(n: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n, "column length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Conjugate transpose (plain transpose over ℚ).
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).conj());
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ScalarMatrix<G> {
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                context: "matrix product",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Vertical concatenation.
    pub fn vstack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Fraction-free (Bareiss) forward elimination. Every update has the
    /// form `row_i ← (p·row_i − a_ic·row_r) / p_prev`, so entries stay
    /// minors of the input and no intermediate fractions are introduced
    /// beyond those already present.
    pub fn bareiss_echelon(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut prev = F::one();
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let piv = a.get(r, c).clone();
            for i in r + 1..a.rows {
                let aic = a.get(i, c).clone();
                for j in c + 1..a.cols {
                    let v = (piv.clone() * a.get(i, j).clone() - aic.clone() * a.get(r, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, c, F::zero());
            }
            // rows above are untouched; scale nothing else
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Reduced row-echelon form, obtained from the Bareiss echelon form by
    /// normalising pivots and back-substituting.
    pub fn rref(&self) -> Rref<F> {
        let (mut a, pivots) = self.bareiss_echelon();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = a.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..a.cols {
                let v = a.get(r, j).clone() * inv.clone();
                a.set(r, j, v);
            }
            for i in 0..r {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        Rref { matrix: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.bareiss_echelon().1.len()
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut a = self.clone();
        let mut prev = F::one();
        let mut sign = F::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return F::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            let piv = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let v = (piv.clone() * a.get(i, j).clone() - aik.clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, k, F::zero());
            }
            prev = piv;
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    /// Basis of the null space. Vector count equals `cols − rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -matrix.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space (the pivot columns of the input).
    pub fn image_basis(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.bareiss_echelon();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// One solution of `self · x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if self.rank() < n {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![F::zero(); n];
            e[j] = F::one();
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }
}

impl<F: Field> fmt::Display for ScalarMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Canonical basis of `span(vectors)`: the nonzero rows of the RREF.
pub fn reduce_basis<F: Field>(n: usize, vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = ScalarMatrix::from_rows(n, vectors);
    let Rref { matrix, pivots } = m.rref();
    (0..pivots.len()).map(|r| matrix.row(r).to_vec()).collect()
}

/// `span(u) ∩ span(v)` in `F^n`, as a canonical basis.
pub fn intersect<F: Field>(n: usize, u: &[Vec<F>], v: &[Vec<F>]) -> Vec<Vec<F>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let u = reduce_basis(n, u);
    let v = reduce_basis(n, v);
    // kernel of [U | −V]: coefficient pairs (a, b) with Σ a_i u_i = Σ b_j v_j
    let mut cols: Vec<Vec<F>> = u.clone();
    cols.extend(v.iter().map(|c| c.iter().map(|x| -x.clone()).collect()));
    let stacked = ScalarMatrix::from_columns(n, &cols);
    let combos: Vec<Vec<F>> = stacked
        .kernel_basis()
        .into_iter()
        .map(|coef| {
            let mut w = vec![F::zero(); n];
            for (a, ui) in coef.iter().zip(&u) {
                for (wk, uk) in w.iter_mut().zip(ui) {
                    *wk = wk.clone() + a.clone() * uk.clone();
                }
            }
            w
        })
        .collect();
    reduce_basis(n, &combos)
}

/// Basis of the orthogonal complement of `span(u)` in `F^n` with respect to
/// the Hermitian product (the Euclidean one over ℚ).
pub fn orth_complement<F: Field>(n: usize, u: &[Vec<F>]) -> Vec<Vec<F>> {
    if u.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![F::zero(); n];
                e[i] = F::one();
                e
            })
            .collect();
    }
    let conj_rows: Vec<Vec<F>> = u.iter().map(|r| r.iter().map(Field::conj).collect()).collect();
    ScalarMatrix::from_rows(n, &conj_rows).kernel_basis()
}

/// Orthogonal projector onto `span(u)^⊥`: `Id − B (B*B)⁻¹ B*`.
pub fn complement_projector<F: Field>(n: usize, u: &[Vec<F>]) -> ScalarMatrix<F> {
    let basis = reduce_basis(n, u);
    if basis.is_empty() {
        return ScalarMatrix::identity(n);
    }
    let b = ScalarMatrix::from_columns(n, &basis);
    let gram = b.adjoint().mul(&b);
    let gram_inv = gram
        .inverse()
        .expect("Gram matrix of an independent basis is invertible");
    ScalarMatrix::identity(n).sub(&b.mul(&gram_inv).mul(&b.adjoint()))
}

/// True when `span(a) = span(b)`.
pub fn same_span<F: Field>(n: usize, a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    reduce_basis(n, a) == reduce_basis(n, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{rat_int, Rational};

    fn m(rows: &[&[i64]]) -> ScalarMatrix<Rational> {
        let cols = rows[0].len();
        let data: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        ScalarMatrix::from_rows(cols, &data)
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn kernel_of_divergence_row_at_e1() {
        let k = m(&[&[1, 0]]).kernel_basis();
        assert_eq!(k, vec![v(&[0, 1])]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(ScalarMatrix::<Rational>::identity(2).kernel_basis().is_empty());
        assert_eq!(ScalarMatrix::<Rational>::zeros(2, 2).kernel_basis().len(), 2);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), rat_int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ScalarMatrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&v(&[1, 3])).is_none());
        let x = a.solve(&v(&[1, 2])).unwrap();
        assert_eq!(a.mul_vec(&x), v(&[1, 2]));
    }

    #[test]
    fn subspace_examples() {
        assert!(intersect(2, &[v(&[1, 0])], &[v(&[0, 1])]).is_empty());
        let c = orth_complement(2, &[v(&[1, 1])]);
        assert!(same_span(2, &c, &[v(&[1, -1])]));
        let p = complement_projector(2, &[v(&[1, 0])]);
        assert_eq!(p.mul_vec(&v(&[3, 4])), v(&[0, 4]));
    }

    #[test]
    fn intersect_planes_in_r3() {
        let a = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        let b = [v(&[0, 1, 1]), v(&[1, 1, 1])];
        let w = intersect(3, &a, &b);
        assert!(same_span(3, &w, &[v(&[1, 0, 0])]));
    }
}
