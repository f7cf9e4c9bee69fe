//! Dense matrices over the exact rational scalars.
//!
//! Everything downstream (Weyl group elements, module generators, Hom-complex
//! differentials) is a small dense matrix, so this module provides the usual
//! kernel/image/rank toolbox via exact Gauss-Jordan elimination. Pivoting is
//! deterministic (first nonzero entry wins), which keeps every derived basis
//! reproducible across runs.

use crate::scalar::{self, Scalar};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix with the given integer entries, row-major.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&n| scalar::int(n)).collect()).collect())
    }

    /// dim x 1 column from a coordinate vector.
    pub fn column(v: &[Scalar]) -> Self {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// `self * v` for a coordinate vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Row-vector action `v * self`; this is how covectors transform.
    pub fn apply_left(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                let mut acc = Scalar::zero();
                for i in 0..self.rows {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[i].is_zero() {
                        acc += &v[i] * a;
                    }
                }
                acc
            })
            .collect()
    }

    /// Writes `block` into `self` with top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Submatrix determinant for the given row and column index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Scalar {
        assert_eq!(rows.len(), cols.len());
        let sub = Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone());
        sub.det()
    }

    /// Determinant by exact fraction elimination.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for c in col..n {
                    let delta = &factor * &m[(col, c)];
                    m[(r, c)] -= delta;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(piv, row);
            let inv = self[(row, col)].recip();
            for c in col..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let delta = &factor * &self[(row, c)];
                        self[(r, c)] -= delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, as coordinate vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().peekable();
        let mut pivot_row_of_col = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row_of_col[c] = Some(r);
        }
        for free in 0..self.cols {
            if piv_iter.peek() == Some(&&free) {
                piv_iter.next();
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (&pc, row) in pivots.iter().zip(0..) {
                let _ = row;
                if let Some(r) = pivot_row_of_col[pc] {
                    v[pc] = -m[(r, free)].clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let sols = self.solve_matrix(&Mat::column(b))?;
        Some(sols.col_vec(0))
    }

    /// Solves `self * X = B` columnwise; `None` if any column is inconsistent.
    /// Free variables are set to zero, so the answer is deterministic.
    pub fn solve_matrix(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + b.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, self.cols, b);
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(c, j)] = aug[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let x = self.solve_matrix(&Mat::identity(self.rows))?;
        if (self * &x) == Mat::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    /// Coefficients `c_0..c_n` of `det(xI - M) = c_0 + c_1 x + ... + c_n x^n`,
    /// by the Faddeev-LeVerrier recurrence. Exact.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Mat::identity(n);
        for k in 1..=n {
            m = self * &m;
            let c = -(m.trace() / scalar::int(k as i64));
            coeffs[n - k] = c.clone();
            for i in 0..n {
                m[(i, i)] += &c;
            }
        }
        coeffs
    }

    /// `det(I - self)`, the quantity deciding ellipticity of a group element.
    pub fn det_one_minus(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let m = Mat::from_fn(n, n, |i, j| {
            let mut v = -self[(i, j)].clone();
            if i == j {
                v += Scalar::one();
            }
            v
        });
        m.det()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(scalar::render_short).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incremental column-span builder over exact rationals.
///
/// Vectors are inserted one at a time; each accepted vector becomes a basis
/// member, and `express` later rewrites arbitrary vectors as combinations of
/// the accepted ones. Reduction is fully pivoted and deterministic.
pub struct SpanBuilder {
    dim: usize,
    /// (pivot position, reduced vector, combination over accepted basis)
    rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut r = v.to_vec();
        let mut combo = vec![Scalar::zero(); self.rows.len()];
        for (j, (piv, reduced, t)) in self.rows.iter().enumerate() {
            let _ = j;
            let coeff = r[*piv].clone();
            if coeff.is_zero() {
                continue;
            }
            for (rk, bk) in r.iter_mut().zip(reduced) {
                if !bk.is_zero() {
                    *rk -= &coeff * bk;
                }
            }
            for (ck, tk) in combo.iter_mut().zip(t) {
                if !tk.is_zero() {
                    *ck += &coeff * tk;
                }
            }
        }
        (r, combo)
    }

    /// Inserts `v`; returns `true` when it enlarges the span (and joins the basis).
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (mut r, combo) = self.reduce(v);
        let Some(piv) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[piv].clone();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
        // combination for the reduced vector: (e_new - combo) / lead
        let m = self.rows.len();
        let mut t = vec![Scalar::zero(); m + 1];
        for (tk, ck) in t.iter_mut().zip(&combo) {
            *tk = -(ck / &lead);
        }
        t[m] = lead.recip();
        for (_, _, old_t) in self.rows.iter_mut() {
            old_t.push(Scalar::zero());
        }
        // back-eliminate the new pivot from existing reduced vectors
        for idx in 0..self.rows.len() {
            let coeff = self.rows[idx].1[piv].clone();
            if coeff.is_zero() {
                continue;
            }
            for k in 0..self.dim {
                if !r[k].is_zero() {
                    let delta = &coeff * &r[k];
                    self.rows[idx].1[k] -= delta;
                }
            }
            for k in 0..t.len() {
                if !t[k].is_zero() {
                    let delta = &coeff * &t[k];
                    self.rows[idx].2[k] -= delta;
                }
            }
        }
        self.rows.push((piv, r, t));
        true
    }

    /// True if `v` already lies in the span.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let (r, _) = self.reduce(v);
        r.iter().all(Zero::is_zero)
    }

    /// Coefficients of `v` over the accepted basis, or `None` if outside the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim);
        let (r, combo) = self.reduce(v);
        if r.iter().all(Zero::is_zero) {
            Some(combo)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat {
        Mat::from_int_rows(&[&[a, b], &[c, d]])
    }

    #[test]
    fn product_and_inverse() {
        let a = m2(3, 2, 0, -3);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Mat::identity(2));
        assert_eq!(a.det(), int(-9));
    }

    #[test]
    fn kernel_and_rank() {
        let a = Mat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(v).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Mat::from_int_rows(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&[int(1), int(2)]).is_some());
        assert!(a.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn charpoly_matches_det_and_trace() {
        let a = m2(3, 1, -1, -3);
        let p = a.charpoly();
        // x^2 - tr x + det = x^2 - 0x - 8
        assert_eq!(p, vec![int(-8), int(0), int(1)]);
        assert_eq!(a.det_one_minus(), int(1) - a.trace() + a.det());
    }

    #[test]
    fn span_builder_expresses_members() {
        let mut span = SpanBuilder::new(3);
        let v1 = vec![int(1), int(2), int(0)];
        let v2 = vec![int(0), int(1), int(1)];
        assert!(span.insert(&v1));
        assert!(span.insert(&v2));
        assert!(!span.insert(&[int(1), int(3), int(1)]));
        let combo = span.express(&[int(2), int(5), int(1)]).unwrap();
        assert_eq!(combo, vec![int(2), int(1)]);
        assert!(span.express(&[int(0), int(0), int(1)]).is_none());
        assert_eq!(span.express(&[frac(1, 2), int(1), int(0)]).unwrap(), vec![frac(1, 2), int(0)]);
    }
}
