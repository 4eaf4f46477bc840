//! The problem instance: the natural representation of `S_n`, the residue
//! matrices `P_k = P(1, k+1)`, their sum `T`, the expansion coefficients
//! `T_p` at infinity and the coefficient matrix `A(z) = sum_k P_k / (z - z_k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_distinct, Column, Matrix, MatrixF, MatrixR};
use crate::ratfunc::RationalFunction;
use crate::rational::Rational;

/// The sign of the coupling parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Rho {
    Plus,
    Minus,
}

impl Rho {
    pub fn sign(self) -> i64 {
        match self {
            Rho::Plus => 1,
            Rho::Minus => -1,
        }
    }

    pub fn as_rational(self) -> Rational {
        Rational::from(self.sign())
    }

    pub fn flipped(self) -> Rho {
        match self {
            Rho::Plus => Rho::Minus,
            Rho::Minus => Rho::Plus,
        }
    }
}

impl TryFrom<i64> for Rho {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Rho::Plus),
            -1 => Ok(Rho::Minus),
            other => Err(Error::InvalidRho(other)),
        }
    }
}

impl From<Rho> for i64 {
    fn from(r: Rho) -> i64 {
        r.sign()
    }
}

/// `dW/dz = rho * A(z) W` for `S_n` with poles `z_1..z_(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KZSystem {
    n: usize,
    points: Vec<Rational>,
    rho: Rho,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    n: usize,
    points: Vec<Rational>,
    rho: i64,
}

impl KZSystem {
    pub fn new(n: usize, points: Vec<Rational>, rho: Rho) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if points.len() != n - 1 {
            return Err(Error::PointCount {
                expected: n - 1,
                got: points.len(),
            });
        }
        check_distinct(&points)?;
        Ok(KZSystem { n, points, rho })
    }

    /// Parses `{"n": 3, "points": ["0", "1"], "rho": -1}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        KZSystem::new(doc.n, doc.points, Rho::try_from(doc.rho)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn with_rho(&self, rho: Rho) -> Self {
        KZSystem {
            rho,
            ..self.clone()
        }
    }

    /// `P_k`, 1-based `k`.
    pub fn p(&self, k: usize) -> MatrixR {
        p_k(self.n, k).expect("k in range")
    }

    /// `T_p = sum_k P_k z_k^(p+1)`.
    pub fn t_coeff(&self, p: usize) -> MatrixR {
        t_coeff_unchecked(self.n, &self.points, p)
    }

    pub fn t(&self) -> MatrixR {
        t_matrix(self.n)
    }

    pub fn a_matrix(&self) -> MatrixF {
        let mut a = MatrixF::zeros(self.n, self.n);
        for (k, z) in self.points.iter().enumerate() {
            let pk = self.p(k + 1);
            let pole = RationalFunction::simple_pole(Rational::one(), z);
            for i in 0..self.n {
                for j in 0..self.n {
                    if !pk.get(i, j).is_zero() {
                        let v = a.get(i, j) + &pole;
                        a.set(i, j, v);
                    }
                }
            }
        }
        a
    }
}

/// Matrix of the transposition `(i j)` in the natural representation, 1-based.
pub fn perm_matrix(n: usize, i: usize, j: usize) -> Result<MatrixR> {
    if i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::IndexOutOfRange(format!(
            "transposition ({i} {j}) in S_{n}"
        )));
    }
    let (i, j) = (i - 1, j - 1);
    Ok(Matrix::from_fn(n, n, |r, c| {
        let one = (r == i && c == j) || (r == j && c == i) || (r == c && r != i && r != j);
        if one {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// `P_k = P(1, k+1)` for `1 <= k <= n-1`.
pub fn p_k(n: usize, k: usize) -> Result<MatrixR> {
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(format!("P_{k} for n = {n}")));
    }
    perm_matrix(n, 1, k + 1)
}

/// `S = [[2-n, e], [e^T, 0]]` with `e` the row of `n-1` ones.
pub fn s_matrix(n: usize) -> MatrixR {
    Matrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => Rational::from(2 - n as i64),
        (0, _) | (_, 0) => Rational::one(),
        _ => Rational::zero(),
    })
}

/// `T = sum_k P_k`.
pub fn t_matrix(n: usize) -> MatrixR {
    (1..n).fold(MatrixR::zeros(n, n), |acc, k| {
        acc.add(&p_k(n, k).unwrap()).unwrap()
    })
}

/// `sum_k P_k z_k^(p+1)` with no distinctness requirement on the points.
pub fn t_coeff_unchecked(n: usize, points: &[Rational], p: usize) -> MatrixR {
    points
        .iter()
        .enumerate()
        .fold(MatrixR::zeros(n, n), |acc, (k, z)| {
            let w = z.pow(p as u32 + 1);
            acc.add(&p_k(n, k + 1).unwrap().scale(&w)).unwrap()
        })
}

/// Eigen-structure of `T`, known in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralData {
    /// `n-1`, `n-2`, `-1`.
    pub eigenvalues: [Rational; 3],
    pub v1: Column,
    /// Consecutive differences `e_(i+1) - e_(i+2)`, spanning
    /// `{col[0, a_1..a_(n-1)] : sum a_i = 0}`.
    pub v2_basis: Vec<Column>,
    pub v3: Column,
    /// `N_i`: ones at positions 1 and `i+1`, `-2/(n-2)` elsewhere.
    pub n_vectors: Vec<Column>,
}

pub fn spectral_data(n: usize) -> Result<SpectralData> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let ni = n as i64;
    let v1 = vec![Rational::one(); n];
    let v3: Column = (0..n)
        .map(|i| Rational::from(if i == 0 { ni - 1 } else { -1 }))
        .collect();
    let v2_basis = (1..n - 1)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v[i + 1] = -Rational::one();
            v
        })
        .collect();
    let other = Rational::new(-2, ni - 2)?;
    let n_vectors = (1..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j == 0 || j == i {
                        Rational::one()
                    } else {
                        other.clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(SpectralData {
        eigenvalues: [
            Rational::from(ni - 1),
            Rational::from(ni - 2),
            Rational::from(-1),
        ],
        v1,
        v2_basis,
        v3,
        n_vectors,
    })
}
