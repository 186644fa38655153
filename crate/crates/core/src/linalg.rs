//! Exact dense linear algebra over the rationals.
//!
//! Everything that decides a verdict (ranks, kernels, cohomology dimensions)
//! is computed here without rounding. Matrices are small (a few hundred rows
//! at most), so a dense row-major layout with Gauss-Jordan elimination is
//! sufficient.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_scalar(&self[(r, c)]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(Mat {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Mat::from_fn(rows.len(), ncols, |r, c| int(rows[r][c]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<Scalar>]) -> Self {
        Mat::from_fn(nrows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = &self[(r, k)];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(
                "cannot add matrices of different shapes".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack with different row counts".into()));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        }))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), self.cols, |r, c| self[(rows[r], c)].clone())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(&self[(r, c)]))
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn kernel_basis(&self) -> Subspace {
        kernel_basis(self)
    }

    /// Column span, with a basis read off the reduced echelon form of the transpose.
    pub fn column_space(&self) -> Subspace {
        let (r, pivots) = rref(&self.transpose());
        let basis = Mat::from_fn(self.rows, pivots.len(), |row, c| r[(c, row)].clone());
        Subspace {
            ambient_dim: self.rows,
            basis,
        }
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n)).ok()?;
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }
}

/// Gauss-Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current pivot row.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if found != pr {
            for c in 0..cols {
                a.data.swap(found * cols + c, pr * cols + c);
            }
        }
        let inv = a[(pr, col)].recip();
        for c in col..cols {
            if !a[(pr, c)].is_zero() {
                let v = &a[(pr, c)] * &inv;
                a[(pr, c)] = v;
            }
        }
        for r in 0..rows {
            if r == pr || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for c in col..cols {
                if a[(pr, c)].is_zero() {
                    continue;
                }
                let sub = &factor * &a[(pr, c)];
                a[(r, c)] -= sub;
            }
        }
        pivots.push(col);
        pr += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

/// Basis of the null space: one vector per free column.
pub fn kernel_basis(m: &Mat) -> Subspace {
    let (r, pivots) = rref(m);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); n];
        v[free] = Scalar::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        vectors.push(v);
    }
    Subspace {
        ambient_dim: n,
        basis: Mat::from_columns(n, &vectors),
    }
}

/// Complement and projection for a subspace: the complement is spanned by the
/// standard basis vectors at the non-pivot coordinates of the subspace's
/// reduced basis, and the projection returns coordinates on that complement
/// (vanishing on `s`).
pub fn quotient_data(ambient_dim: usize, s: &Subspace) -> Result<(Subspace, Mat)> {
    if s.ambient_dim != ambient_dim {
        return Err(Error::AmbientMismatch {
            expected: ambient_dim,
            got: s.ambient_dim,
        });
    }
    let (r, pivots) = rref(&s.basis.transpose());
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    let complement = Mat::from_fn(ambient_dim, free.len(), |row, c| {
        if row == free[c] {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let mut projection = Mat::zeros(free.len(), ambient_dim);
    for (row, &j) in free.iter().enumerate() {
        projection[(row, j)] = Scalar::one();
        for (t, &p) in pivots.iter().enumerate() {
            let v = &r[(t, j)];
            if !v.is_zero() {
                projection[(row, p)] = -v.clone();
            }
        }
    }
    Ok((
        Subspace {
            ambient_dim,
            basis: complement,
        },
        projection,
    ))
}

/// `dim ker(d_out) - rank(d_in)` for a two-step complex `A --d_in--> B --d_out--> C`.
pub fn cohomology_dim(d_in: &Mat, d_out: &Mat) -> Result<usize> {
    if d_in.rows != d_out.cols {
        return Err(Error::Shape(format!(
            "d_in lands in dimension {} but d_out starts from dimension {}",
            d_in.rows, d_out.cols
        )));
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(Error::NotAComplex {
            rows: comp.rows,
            cols: comp.cols,
        });
    }
    Ok(d_out.cols - rank(d_out) - rank(d_in))
}

/// Subspace of `K^ambient_dim` given by linearly independent basis columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
}

impl Subspace {
    pub fn new(basis: Mat) -> Result<Self> {
        if rank(&basis) != basis.cols {
            return Err(Error::Shape("basis vectors are linearly dependent".into()));
        }
        Ok(Subspace {
            ambient_dim: basis.rows,
            basis,
        })
    }

    /// Span of arbitrary vectors (dependent ones are dropped).
    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::AmbientMismatch {
                expected: ambient_dim,
                got: vectors
                    .iter()
                    .map(Vec::len)
                    .find(|&l| l != ambient_dim)
                    .unwrap_or(0),
            });
        }
        Ok(Mat::from_columns(ambient_dim, vectors).column_space())
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Mat::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Mat::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let aug = self
            .basis
            .hstack(&Mat::from_columns(self.ambient_dim, &[v.to_vec()]))
            .expect("same rows");
        rank(&aug) == self.dim()
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let k = self.dim();
        let aug = self
            .basis
            .hstack(&Mat::from_columns(self.ambient_dim, &[v.to_vec()]))
            .expect("same rows");
        let (r, pivots) = rref(&aug);
        if pivots.contains(&k) {
            return None;
        }
        // independent columns: pivot t sits in column t
        Some((0..k).map(|t| r[(t, k)].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && {
            let aug = self.basis.hstack(&other.basis).expect("same rows");
            rank(&aug) == self.dim()
        }
    }
}

/// Max-norm of a rational vector, as a float.
pub fn max_abs(v: &[Scalar]) -> f64 {
    v.iter().map(|x| to_f64(&x.abs())).fold(0.0, f64::max)
}
