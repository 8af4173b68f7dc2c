//! Matrices with polynomial entries: products, evaluation, minors and the
//! characteristic polynomial.

use std::fmt;

use num_traits::Zero;

use super::matrix::ScalarMatrix;
use super::poly::MultiPoly;
use super::scalar::{Field, Rational};
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        Self {
            nvars,
            rows,
            cols,
            entries: vec![MultiPoly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.set(i, i, MultiPoly::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged polynomial matrix");
            for p in r {
                assert_eq!(p.nvars(), nvars, "entry arity");
                entries.push(p);
            }
        }
        Self {
            nvars,
            rows: nrows,
            cols,
            entries,
        }
    }

    /// Constant matrix.
    pub fn from_scalar(nvars: usize, m: &ScalarMatrix<Rational>) -> Self {
        let mut out = Self::zeros(nvars, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, MultiPoly::constant(nvars, m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    /// Common degree of all nonzero entries, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            let d = p.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows || self.nvars != rhs.nvars {
            return Err(AlgebraError::DimensionMismatch {
                context: "polynomial matrix product",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.nvars, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = MultiPoly::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("polynomial matrix dimensions")
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        Self {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Vertical concatenation `[self; below]`.
    pub fn vstack(&self, below: &Self) -> Result<Self, AlgebraError> {
        if self.cols != below.cols || self.nvars != below.nvars {
            return Err(AlgebraError::DimensionMismatch {
                context: "vertical stacking",
                left: (self.rows, self.cols),
                right: (below.rows, below.cols),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Ok(Self {
            nvars: self.nvars,
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Appends constant columns `[self | w_1 | w_2 ...]`.
    pub fn augment_constant_columns(&self, cols: &[Vec<Rational>]) -> Self {
        let newc = self.cols + cols.len();
        let mut out = Self::zeros(self.nvars, self.rows, newc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for (k, w) in cols.iter().enumerate() {
                out.set(i, self.cols + k, MultiPoly::constant(self.nvars, w[i].clone()));
            }
        }
        out
    }

    pub fn eval<G>(&self, point: &[G]) -> ScalarMatrix<G>
    where
        G: Field,
    {
        let data = self.entries.iter().map(|p| p.eval(point)).collect();
        ScalarMatrix::from_vec(self.rows, self.cols, data)
    }

    /// Applies the matrix to a constant vector, giving a polynomial vector.
    pub fn apply_constant(&self, v: &[Rational]) -> Vec<MultiPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = MultiPoly::zero(self.nvars);
                for (j, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        acc = &acc + &self.get(i, j).scale(c);
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant by Laplace expansion along rows, memoised over column
    /// subsets. Division-free, so it works over the polynomial ring.
    pub fn determinant(&self) -> MultiPoly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.minor(&rows, &cols)
    }

    /// Determinant of the submatrix on the given (sorted) rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        let m = rows.len();
        assert_eq!(m, cols.len(), "minor must be square");
        assert!(m <= 20, "minor size too large for subset expansion");
        if m == 0 {
            return MultiPoly::one(self.nvars);
        }
        // dp[mask] = det(rows[0..popcount(mask)], cols in mask)
        let full = 1usize << m;
        let mut dp: Vec<Option<MultiPoly>> = vec![None; full];
        dp[0] = Some(MultiPoly::one(self.nvars));
        for mask in 1..full {
            let r = mask.count_ones() as usize;
            let row = rows[r - 1];
            let mut acc = MultiPoly::zero(self.nvars);
            let mut pos = 0usize;
            for (j, &col) in cols.iter().enumerate() {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let entry = self.get(row, col);
                if !entry.is_zero() {
                    if let Some(sub) = dp[mask ^ (1 << j)].as_ref() {
                        if !sub.is_zero() {
                            let term = entry * sub;
                            acc = if (r - 1 + pos) % 2 == 0 {
                                &acc + &term
                            } else {
                                &acc - &term
                            };
                        }
                    }
                }
                pos += 1;
            }
            dp[mask] = Some(acc);
        }
        dp[full - 1].take().expect("full mask computed")
    }

    /// All `size × size` minors, rows and columns in lexicographic subset
    /// order. For a matrix homogeneous of degree `k` every minor is
    /// homogeneous of degree `size·k`.
    pub fn minors(&self, size: usize) -> Result<Vec<MultiPoly>, AlgebraError> {
        if size == 0 || size > self.rows.min(self.cols) {
            return Err(AlgebraError::MinorSizeOutOfRange {
                size,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let row_sets = subsets(self.rows, size);
        let col_sets = subsets(self.cols, size);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.minor(rs, cs));
            }
        }
        Ok(out)
    }

    /// First nonzero `size × size` minor in subset order, with its index sets.
    pub fn first_nonzero_minor(&self, size: usize) -> Option<(Vec<usize>, Vec<usize>, MultiPoly)> {
        if size == 0 || size > self.rows.min(self.cols) {
            return None;
        }
        let col_sets = subsets(self.cols, size);
        for rs in subsets(self.rows, size) {
            for cs in &col_sets {
                let m = self.minor(&rs, cs);
                if !m.is_zero() {
                    return Some((rs, cs.clone(), m));
                }
            }
        }
        None
    }

    /// Coefficients `c_0 .. c_{n−1}` of `det(λ·Id − M) = λ^n + c_{n−1}λ^{n−1} + … + c_0`
    /// by the Faddeev–LeVerrier recurrence. The only divisions are by the
    /// integers `1..n`, never by polynomials.
    pub fn charpoly(&self) -> Result<Vec<MultiPoly>, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                context: "characteristic polynomial",
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let mut coeffs = vec![MultiPoly::zero(self.nvars); n];
        let id = Self::identity(self.nvars, n);
        // M_1 = Id, c_{n-1} = -tr(M)
        let mut mk = id.clone();
        let mut prev_c = MultiPoly::one(self.nvars);
        for k in 1..=n {
            if k > 1 {
                mk = self.mul(&mk).add(&id.scale(&prev_c));
            }
            let amk = self.mul(&mk);
            let mut tr = MultiPoly::zero(self.nvars);
            for i in 0..n {
                tr = &tr + amk.get(i, i);
            }
            let c = tr.scale(&-Rational::new(1.into(), (k as i64).into()));
            coeffs[n - k] = c.clone();
            prev_c = c;
        }
        Ok(coeffs)
    }

    /// `self^e` for square matrices.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.nvars, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_string_rows(&self, prefix: &str) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.to_string_with(prefix)).collect())
            .collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_string_rows("ξ");
        write!(f, "[")?;
        for (i, r) in rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
