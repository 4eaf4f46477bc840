//! Dense exact linear algebra over Q and Q(z).
//!
//! Determinants and inverses use fraction-free (Bareiss) elimination, which
//! only needs exact division in the coefficient ring. Over Q(z) the matrix is
//! first cleared of denominators row by row so elimination runs on
//! polynomials and gcd reductions happen once per output entry.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::Rational;

/// A column vector of rationals.
pub type Column = Vec<Rational>;

/// Minimal ring interface needed by the generic matrix routines.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Division that the caller knows to be exact in the ring.
    fn exact_div(&self, other: &Self) -> Result<Self>;
}

macro_rules! scalar_impl {
    ($t:ty, $div:expr) => {
        impl Scalar for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn one() -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn plus(&self, other: &Self) -> Self {
                self + other
            }
            fn minus(&self, other: &Self) -> Self {
                self - other
            }
            fn times(&self, other: &Self) -> Self {
                self * other
            }
            fn negated(&self) -> Self {
                -self
            }
            fn exact_div(&self, other: &Self) -> Result<Self> {
                let div: fn(&$t, &$t) -> Result<$t> = $div;
                div(self, other)
            }
        }
    };
}

scalar_impl!(Rational, |a, b| a.checked_div(b));
scalar_impl!(Polynomial, |a, b| a.exact_div(b));
scalar_impl!(RationalFunction, |a, b| a.checked_div(b));

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatrixR = Matrix<Rational>;
pub type MatrixF = Matrix<RationalFunction>;
pub type MatrixP = Matrix<Polynomial>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// An `n x 1` matrix.
    pub fn from_column(col: Vec<T>) -> Self {
        Matrix {
            rows: col.len(),
            cols: 1,
            data: col,
        }
    }

    /// Places the given columns side by side.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != r) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Matrix::from_fn(r, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).plus(other.get(i, j))
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).minus(other.get(i, j))
        }))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if b.is_zero() {
                    continue;
                }
                acc = acc.plus(&a.times(b));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        Ok(self.mul(&Matrix::from_column(v.to_vec()))?.data)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Bareiss forward elimination on `[self | rhs]`. Returns the reduced
    /// augmented matrix and the permutation sign, or `None` if `self` is
    /// singular.
    fn bareiss_forward(&self, rhs: Option<&Self>) -> Result<Option<(Self, bool)>> {
        let n = self.require_square()?;
        let extra = rhs.map_or(0, |r| r.cols);
        let width = n + extra;
        let mut m = Matrix::from_fn(n, width, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                rhs.unwrap().get(i, j - n).clone()
            }
        });
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(None);
                };
                for j in 0..width {
                    m.data.swap(k * width + j, p * width + j);
                }
                negate = !negate;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                let factor = m.get(i, k).clone();
                for j in k + 1..width {
                    let v = pivot.times(m.get(i, j)).minus(&factor.times(m.get(k, j)));
                    m.set(i, j, v.exact_div(&prev)?);
                }
                m.set(i, k, T::zero());
            }
            prev = pivot;
        }
        Ok(Some((m, negate)))
    }

    /// Exact determinant by fraction-free elimination.
    pub fn bareiss_determinant(&self) -> Result<T> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(T::one());
        }
        match self.bareiss_forward(None)? {
            None => Ok(T::zero()),
            Some((m, negate)) => {
                let d = m.get(n - 1, n - 1).clone();
                Ok(if negate { d.negated() } else { d })
            }
        }
    }

    /// Returns `(d, X)` with `self * X = d * I` and `d = det(self)`, computed
    /// without leaving the ring. Errors with [`Error::Singular`] when `det = 0`.
    pub fn bareiss_adjugate(&self) -> Result<(T, Self)> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok((T::one(), Matrix::zeros(0, 0)));
        }
        let (m, negate) = self
            .bareiss_forward(Some(&Matrix::identity(n)))?
            .ok_or(Error::Singular)?;
        let last = m.get(n - 1, n - 1).clone();
        let mut x = Matrix::zeros(n, n);
        for c in 0..n {
            for i in (0..n).rev() {
                let mut acc = last.times(m.get(i, n + c));
                for j in i + 1..n {
                    acc = acc.minus(&m.get(i, j).times(x.get(j, c)));
                }
                x.set(i, c, acc.exact_div(m.get(i, i))?);
            }
        }
        if negate {
            Ok((last.negated(), x.map(T::negated)))
        } else {
            Ok((last, x))
        }
    }
}

impl Matrix<Rational> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    pub fn determinant(&self) -> Result<Rational> {
        self.bareiss_determinant()
    }

    pub fn inverse(&self) -> Result<Self> {
        let (d, adj) = self.bareiss_adjugate()?;
        let inv = d.recip()?;
        Ok(adj.scale(&inv))
    }

    /// Lifts to constant rational functions.
    pub fn to_functions(&self) -> MatrixF {
        self.map(|x| RationalFunction::constant(x.clone()))
    }
}

impl Matrix<RationalFunction> {
    /// Rewrites `self = diag(1/r_i) * P` with `r_i` the monic lcm of the
    /// denominators in row `i`; returns `(r, P)`.
    fn clear_denominators(&self) -> Result<(Vec<Polynomial>, MatrixP)> {
        let mut lcms = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Polynomial::one();
            for f in self.row(i) {
                let g = l.gcd(f.den())?;
                l = &l * &f.den().exact_div(&g)?;
            }
            lcms.push(l);
        }
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for f in self.row(i) {
                data.push(&f.num().clone() * &lcms[i].exact_div(f.den())?);
            }
        }
        Ok((lcms, Matrix::new(self.rows, self.cols, data)?))
    }

    pub fn determinant(&self) -> Result<RationalFunction> {
        self.require_square()?;
        let (lcms, p) = self.clear_denominators()?;
        let det = p.bareiss_determinant()?;
        let scale = lcms.iter().fold(Polynomial::one(), |acc, l| &acc * l);
        RationalFunction::new(det, scale)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let (lcms, p) = self.clear_denominators()?;
        let (d, adj) = p.bareiss_adjugate()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        // self^{-1} = P^{-1} diag(r) = adj * diag(r) / d
        let mut data = Vec::with_capacity(adj.data.len());
        for i in 0..adj.rows {
            for j in 0..adj.cols {
                data.push(RationalFunction::new(adj.get(i, j) * &lcms[j], d.clone())?);
            }
        }
        Matrix::new(adj.rows, adj.cols, data)
    }

    pub fn derivative(&self) -> Self {
        self.map(RationalFunction::derivative)
    }

    pub fn eval(&self, z: &Rational) -> Result<MatrixR> {
        let data = self
            .data
            .iter()
            .map(|f| f.eval(z))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(self.rows, self.cols, data)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(ToString::to_string)
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

/// Outcome of a possibly singular square solve `a x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// Present iff the system is solvable.
    pub particular: Option<Column>,
    pub kernel_basis: Vec<Column>,
}

impl SolveReport {
    pub fn solvable(&self) -> bool {
        self.particular.is_some()
    }
}

/// Reduced row echelon form of `[a | b]`: rows, pivot columns.
fn rref(a: &MatrixR, b: &[Rational]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let (n, m) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .cloned()
                .chain(std::iter::once(b[i].clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=m {
                    let v = &rows[i][j] - &(&f * &rows[r][j]);
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    (rows, pivots)
}

/// Basis of `{x : a x = 0}` from the pivot-free columns.
pub fn kernel(a: &MatrixR) -> Vec<Column> {
    let zero = vec![Rational::zero(); a.rows()];
    let (rows, pivots) = rref(a, &zero);
    kernel_from_rref(a.cols(), &rows, &pivots)
}

fn kernel_from_rref(m: usize, rows: &[Vec<Rational>], pivots: &[usize]) -> Vec<Column> {
    (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); m];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[r][free];
            }
            v
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection of `v` onto the span of `basis` (assumed independent).
pub fn project_onto(v: &[Rational], basis: &[Column]) -> Column {
    if basis.is_empty() {
        return vec![Rational::zero(); v.len()];
    }
    let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| dot(&basis[i], &basis[j]));
    let rhs: Column = basis.iter().map(|b| dot(b, v)).collect();
    let coeffs = gram
        .inverse()
        .expect("independent basis")
        .mul_vec(&rhs)
        .unwrap();
    let mut out = vec![Rational::zero(); v.len()];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Solves a square, possibly singular system exactly.
///
/// The particular solution sets the pivot-free coordinates to zero; when `a`
/// is symmetric it is then projected orthogonally off the kernel, so it has
/// zero component along every eigenvector of `a` with eigenvalue 0.
pub fn solve_singular(a: &MatrixR, b: &[Rational]) -> Result<SolveReport> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rhs of length {} for {n}x{n} system",
            b.len()
        )));
    }
    let (rows, pivots) = rref(a, b);
    let kernel_basis = kernel_from_rref(n, &rows, &pivots);
    let inconsistent = rows[pivots.len()..].iter().any(|row| !row[n].is_zero());
    if inconsistent {
        return Ok(SolveReport {
            particular: None,
            kernel_basis,
        });
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[r][n].clone();
    }
    if a.is_symmetric() && !kernel_basis.is_empty() {
        let proj = project_onto(&x, &kernel_basis);
        for (xi, pi) in x.iter_mut().zip(&proj) {
            *xi = &*xi - pi;
        }
    }
    Ok(SolveReport {
        particular: Some(x),
        kernel_basis,
    })
}

/// The scalar Vandermonde matrix with rows `z_k^p`, `p = 0..len-1`.
pub fn vandermonde(points: &[Rational]) -> MatrixR {
    let len = points.len();
    Matrix::from_fn(len, len, |p, k| points[k].pow(p as u32))
}

/// Checks pairwise distinctness; reports the first offending pair (1-based).
pub fn check_distinct(points: &[Rational]) -> Result<()> {
    for j in 0..points.len() {
        for i in 0..j {
            if points[i] == points[j] {
                return Err(Error::RepeatedPoints(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

/// Recovers residues `L_1..L_s` from moments `G_1..G_s` with
/// `sum_k z_k^(p-1) L_k = G_p`. The block system is `I_n`-blocked, so it is
/// solved as one scalar Vandermonde inverse applied column by column.
pub fn vandermonde_residues(points: &[Rational], moments: &[Column]) -> Result<Vec<Column>> {
    check_distinct(points)?;
    if moments.len() != points.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} moments for {} points",
            moments.len(),
            points.len()
        )));
    }
    let dim = moments.first().map_or(0, Vec::len);
    if moments.iter().any(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch("moments of unequal length".into()));
    }
    let inv = vandermonde(points).inverse()?;
    Ok((0..points.len())
        .map(|k| {
            (0..dim)
                .map(|e| {
                    (0..points.len())
                        .map(|p| inv.get(k, p) * &moments[p][e])
                        .sum()
                })
                .collect()
        })
        .collect())
}
