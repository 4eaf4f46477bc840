//! Rational solutions at `rho = -1` in partial-fraction form, the
//! fundamental matrix they assemble into, and its `rho = +1` dual
//! `(W^{-1})^T`.
//!
//! Every column is produced by the same three steps: run the recurrence at
//! infinity from a seed, read the polynomial part off `G_(-1)` and `G_0`,
//! and recover the residues from the moments `G_1..G_(n-1)` with one
//! Vandermonde solve.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{vandermonde_residues, Column, Matrix, MatrixF, MatrixR};
use crate::model::{spectral_data, KZSystem, Rho};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::Rational;
use crate::series::{run_recurrence, SeriesCoefficients};

/// `sum_k L_k / (z - z_k) + sum_q Q_q z^q` with `n x w` coefficient
/// matrices (`w = 1` for a single solution column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractionSolution {
    pub points: Vec<Rational>,
    pub residues: Vec<MatrixR>,
    pub poly_part: Vec<MatrixR>,
    pub rho: Rho,
}

impl PartialFractionSolution {
    pub fn new(
        points: Vec<Rational>,
        residues: Vec<MatrixR>,
        poly_part: Vec<MatrixR>,
        rho: Rho,
    ) -> Result<Self> {
        if residues.len() != points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} residues for {} points",
                residues.len(),
                points.len()
            )));
        }
        let shape = residues
            .first()
            .or(poly_part.first())
            .map(|m| (m.rows(), m.cols()));
        if let Some((r, c)) = shape {
            if residues
                .iter()
                .chain(&poly_part)
                .any(|m| m.rows() != r || m.cols() != c)
            {
                return Err(Error::DimensionMismatch(
                    "coefficient matrices of unequal shape".into(),
                ));
            }
        }
        let mut poly_part = poly_part;
        while poly_part.len() > 1 && poly_part.last().is_some_and(Matrix::is_zero) {
            poly_part.pop();
        }
        Ok(PartialFractionSolution {
            points,
            residues,
            poly_part,
            rho,
        })
    }

    fn shape(&self) -> (usize, usize) {
        self.residues
            .first()
            .or(self.poly_part.first())
            .map_or((0, 0), |m| (m.rows(), m.cols()))
    }

    pub fn dim(&self) -> usize {
        self.shape().0
    }

    pub fn width(&self) -> usize {
        self.shape().1
    }

    /// Residues of column `j` as plain columns.
    pub fn column_residues(&self, j: usize) -> Vec<Column> {
        self.residues.iter().map(|l| l.column(j)).collect()
    }

    /// Coefficient of `xi^p` at infinity: `sum_k z_k^(p-1) L_k` for `p >= 1`,
    /// `Q_(-p)` otherwise.
    pub fn moment(&self, p: i64) -> MatrixR {
        let (r, c) = self.shape();
        if p <= 0 {
            return self
                .poly_part
                .get((-p) as usize)
                .cloned()
                .unwrap_or_else(|| MatrixR::zeros(r, c));
        }
        self.points
            .iter()
            .zip(&self.residues)
            .fold(MatrixR::zeros(r, c), |acc, (z, l)| {
                acc.add(&l.scale(&z.pow((p - 1) as u32))).unwrap()
            })
    }

    /// The solution as a matrix of rational functions.
    pub fn value(&self) -> MatrixF {
        let (r, c) = self.shape();
        let den: Polynomial = self.points.iter().fold(Polynomial::one(), |acc, z| {
            &acc * &Polynomial::linear_root(z)
        });
        let cofactors: Vec<Polynomial> = self
            .points
            .iter()
            .map(|z| den.exact_div(&Polynomial::linear_root(z)).unwrap())
            .collect();
        Matrix::from_fn(r, c, |i, j| {
            let mut num = Polynomial::zero();
            for (l, cof) in self.residues.iter().zip(&cofactors) {
                num = &num + &cof.scale(l.get(i, j));
            }
            let q = Polynomial::new(self.poly_part.iter().map(|m| m.get(i, j).clone()).collect());
            num = &num + &(&q * &den);
            RationalFunction::new(num, den.clone()).unwrap()
        })
    }

    /// Exact value at `z0`.
    pub fn evaluate(&self, z0: &Rational) -> Result<MatrixR> {
        let (r, c) = self.shape();
        let mut acc = MatrixR::zeros(r, c);
        for (z, l) in self.points.iter().zip(&self.residues) {
            let d = z0 - z;
            if d.is_zero() {
                return Err(Error::Pole { at: z0.clone() });
            }
            acc = acc.add(&l.scale(&d.recip()?))?;
        }
        for (q, m) in self.poly_part.iter().enumerate() {
            acc = acc.add(&m.scale(&z0.pow(q as u32)))?;
        }
        Ok(acc)
    }

    /// Places solutions side by side.
    pub fn hstack(parts: &[PartialFractionSolution]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::DimensionMismatch("nothing to stack".into()))?;
        if parts
            .iter()
            .any(|p| p.points != first.points || p.rho != first.rho)
        {
            return Err(Error::DimensionMismatch(
                "solutions for different systems".into(),
            ));
        }
        let stack = |mats: Vec<MatrixR>| -> Result<MatrixR> {
            let cols: Vec<Column> = mats.iter().flat_map(|m| m.columns()).collect();
            Matrix::from_columns(&cols)
        };
        let residues = (0..first.points.len())
            .map(|k| stack(parts.iter().map(|p| p.residues[k].clone()).collect()))
            .collect::<Result<Vec<_>>>()?;
        let degree = parts.iter().map(|p| p.poly_part.len()).max().unwrap_or(0);
        let poly_part = (0..degree)
            .map(|q| stack(parts.iter().map(|p| p.moment(-(q as i64))).collect()))
            .collect::<Result<Vec<_>>>()?;
        PartialFractionSolution::new(first.points.clone(), residues, poly_part, first.rho)
    }

    /// Partial-fraction decomposition of a matrix whose entries have at most
    /// simple poles, all located at `points`.
    pub fn from_matrix(points: &[Rational], rho: Rho, m: &MatrixF) -> Result<Self> {
        let (r, c) = (m.rows(), m.cols());
        let mut residues = vec![MatrixR::zeros(r, c); points.len()];
        let mut poly: Vec<MatrixR> = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let f = m.get(i, j);
                let mut rest = f.den().clone();
                for (k, z) in points.iter().enumerate() {
                    match f.pole_order(z) {
                        0 => {}
                        1 => {
                            rest = rest.exact_div(&Polynomial::linear_root(z))?;
                            // residue = num(z_k) / (den / (z - z_k))(z_k)
                            let cof = f.den().exact_div(&Polynomial::linear_root(z))?;
                            residues[k].set(i, j, f.num().eval(z).checked_div(&cof.eval(z))?);
                        }
                        order => {
                            return Err(Error::Invariant(format!(
                                "entry ({i},{j}) has a pole of order {order} at {z}"
                            )))
                        }
                    }
                }
                if !rest.is_one() {
                    return Err(Error::Invariant(format!(
                        "entry ({i},{j}) has poles away from the z_k"
                    )));
                }
                let (quot, _) = f.num().div_rem(f.den())?;
                for (q, coeff) in quot.coeffs().iter().enumerate() {
                    while poly.len() <= q {
                        poly.push(MatrixR::zeros(r, c));
                    }
                    poly[q].set(i, j, coeff.clone());
                }
            }
        }
        if poly.is_empty() {
            poly.push(MatrixR::zeros(r, c));
        }
        PartialFractionSolution::new(points.to_vec(), residues, poly, rho)
    }
}

/// `n` independent solution columns `Y_1..Y_n` at `rho = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalSolution {
    pub columns: Vec<PartialFractionSolution>,
    pub rho: Rho,
}

impl FundamentalSolution {
    pub fn as_partial_fraction(&self) -> PartialFractionSolution {
        PartialFractionSolution::hstack(&self.columns).expect("columns share one system")
    }

    pub fn matrix(&self) -> MatrixF {
        self.as_partial_fraction().value()
    }

    pub fn evaluate(&self, z0: &Rational) -> Result<MatrixR> {
        self.as_partial_fraction().evaluate(z0)
    }
}

fn require_minus(sys: &KZSystem) -> Result<()> {
    if sys.rho() != Rho::Minus {
        return Err(Error::RequiresRhoMinus);
    }
    Ok(())
}

/// Series for `Y_1`: `G_(n-1) = V_1`, everything below zero.
pub fn y1_series(sys: &KZSystem) -> Result<SeriesCoefficients> {
    require_minus(sys)?;
    let n = sys.n();
    let seeds = BTreeMap::from([(n as i64 - 1, vec![Rational::one(); n])]);
    run_recurrence(sys, -1, n as i64 - 1, &seeds)
}

/// The seed `G_(n-2) = col[0, a_1..a_(n-1)]` for `Y_j`: `a_(j-1) = 1`,
/// `a_(n-1) = -1`, all other `a_k = 0`.
pub fn yj_seed(n: usize, j: usize) -> Result<Column> {
    if !(2..n).contains(&j) {
        return Err(Error::IndexOutOfRange(format!(
            "Y_{j} for n = {n} (need 2 <= j <= n-1)"
        )));
    }
    let mut g = vec![Rational::zero(); n];
    g[j - 1] = Rational::one();
    g[n - 1] = -Rational::one();
    Ok(g)
}

pub fn yj_series(sys: &KZSystem, j: usize) -> Result<SeriesCoefficients> {
    require_minus(sys)?;
    let n = sys.n();
    let seeds = BTreeMap::from([(n as i64 - 2, yj_seed(n, j)?)]);
    run_recurrence(sys, -1, n as i64 - 1, &seeds)
}

/// Series for `Y_n`: `G_(-1) = V_3`.
pub fn yn_series(sys: &KZSystem) -> Result<SeriesCoefficients> {
    require_minus(sys)?;
    let n = sys.n();
    let seeds = BTreeMap::from([(-1, spectral_data(n)?.v3)]);
    run_recurrence(sys, -1, n as i64 - 1, &seeds)
}

/// Assembles `sum_k L_k / (z - z_k) + G_0 + z G_(-1)` from a series that
/// reaches `G_(n-1)`.
pub fn column_from_series(
    sys: &KZSystem,
    series: &SeriesCoefficients,
) -> Result<PartialFractionSolution> {
    let n = sys.n() as i64;
    let get = |p: i64| -> Result<Column> {
        if p < series.start() {
            return Ok(vec![Rational::zero(); sys.n()]);
        }
        series.get(p).cloned().ok_or(Error::MissingCoefficient(p))
    };
    if series.leading_index().is_some_and(|m| m < -1) {
        return Err(Error::Invariant("series starts below G_(-1)".into()));
    }
    let moments = (1..n).map(get).collect::<Result<Vec<_>>>()?;
    let residues = vandermonde_residues(sys.points(), &moments)?;
    PartialFractionSolution::new(
        sys.points().to_vec(),
        residues.into_iter().map(Matrix::from_column).collect(),
        vec![Matrix::from_column(get(0)?), Matrix::from_column(get(-1)?)],
        sys.rho(),
    )
}

pub fn build_y1(sys: &KZSystem) -> Result<PartialFractionSolution> {
    column_from_series(sys, &y1_series(sys)?)
}

pub fn build_yj(sys: &KZSystem, j: usize) -> Result<PartialFractionSolution> {
    column_from_series(sys, &yj_series(sys, j)?)
}

pub fn build_yn(sys: &KZSystem) -> Result<PartialFractionSolution> {
    column_from_series(sys, &yn_series(sys)?)
}

/// `W = [Y_1, Y_2, ..., Y_n]`; fails if `det W` vanishes identically.
pub fn build_fundamental(sys: &KZSystem) -> Result<FundamentalSolution> {
    require_minus(sys)?;
    let mut columns = vec![build_y1(sys)?];
    for j in 2..sys.n() {
        columns.push(build_yj(sys, j)?);
    }
    columns.push(build_yn(sys)?);
    let fundamental = FundamentalSolution {
        columns,
        rho: Rho::Minus,
    };
    if fundamental.matrix().determinant()?.is_zero() {
        return Err(Error::Invariant(
            "constructed columns are linearly dependent".into(),
        ));
    }
    Ok(fundamental)
}

/// `(W^{-1})^T` for the `rho = -1` fundamental matrix `W`: a fundamental
/// solution of the `rho = +1` system.
pub fn rho_plus_fundamental(sys: &KZSystem) -> Result<MatrixF> {
    let w = build_fundamental(&sys.with_rho(Rho::Minus))?.matrix();
    Ok(w.inverse()?.transpose())
}

/// [`rho_plus_fundamental`] in partial-fraction form.
pub fn rho_plus_partial_fraction(sys: &KZSystem) -> Result<PartialFractionSolution> {
    PartialFractionSolution::from_matrix(sys.points(), Rho::Plus, &rho_plus_fundamental(sys)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::series::moments_check;

    fn col(v: &[i64]) -> Column {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn s3() -> KZSystem {
        KZSystem::new(3, vec![q(0, 1), q(1, 1)], Rho::Minus).unwrap()
    }

    /// dY/dz - rho A Y, computed directly.
    fn residual(sys: &KZSystem, m: &MatrixF) -> MatrixF {
        let rho = RationalFunction::constant(sys.rho().as_rational());
        m.derivative()
            .sub(&sys.a_matrix().mul(m).unwrap().scale(&rho))
            .unwrap()
    }

    #[test]
    fn first_solution_s3() {
        let sys = s3();
        let y1 = build_y1(&sys).unwrap();
        assert_eq!(
            y1.column_residues(0),
            vec![col(&[-1, -1, -1]), col(&[1, 1, 1])]
        );
        assert!(y1.poly_part.iter().all(Matrix::is_zero));
        let f =
            RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[0, -1, 1])).unwrap();
        assert_eq!(
            y1.value(),
            MatrixF::from_column(vec![f.clone(), f.clone(), f])
        );
        assert!(residual(&sys, &y1.value()).is_zero());
        assert_eq!(
            y1.evaluate(&q(2, 1)).unwrap(),
            MatrixR::from_column(vec![q(1, 2), q(1, 2), q(1, 2)])
        );
        assert_eq!(y1.evaluate(&q(0, 1)), Err(Error::Pole { at: q(0, 1) }));

        let y1 = build_y1(&KZSystem::new(3, vec![q(0, 1), q(2, 1)], Rho::Minus).unwrap()).unwrap();
        assert_eq!(y1.column_residues(0)[0], vec![q(-1, 2); 3]);
        assert_eq!(y1.column_residues(0)[1], vec![q(1, 2); 3]);
    }

    #[test]
    fn second_solution_s3() {
        let sys = s3();
        let series = yj_series(&sys, 2).unwrap();
        assert_eq!(series.get(1).unwrap(), &col(&[0, 1, -1]));
        assert_eq!(series.get(2).unwrap(), &vec![q(-1, 3), q(2, 3), q(-1, 3)]);
        let y2 = build_yj(&sys, 2).unwrap();
        assert_eq!(
            y2.column_residues(0),
            vec![
                vec![q(1, 3), q(1, 3), q(-2, 3)],
                vec![q(-1, 3), q(2, 3), q(-1, 3)]
            ]
        );
        assert!(residual(&sys, &y2.value()).is_zero());
        assert!(build_yj(&sys, 1).is_err());
        assert!(build_yj(&sys, 3).is_err());
    }

    #[test]
    fn last_solution_s3() {
        let sys = s3();
        let y3 = build_yn(&sys).unwrap();
        assert_eq!(y3.moment(-1).column(0), col(&[2, -1, -1]));
        assert_eq!(y3.moment(0).column(0), col(&[-1, 2, -1]));
        assert!(residual(&sys, &y3.value()).is_zero());
        for z in sys.points() {
            for f in y3.value().entries() {
                assert!(f.pole_order(z) <= 1);
            }
        }
    }

    #[test]
    fn seeds_are_zero_sum() {
        for n in 3..=7 {
            for j in 2..n {
                let g = yj_seed(n, j).unwrap();
                assert!(g[0].is_zero());
                assert!(g.iter().cloned().sum::<Rational>().is_zero());
            }
        }
    }

    #[test]
    fn fundamental_s3_and_s4() {
        for sys in [
            s3(),
            KZSystem::new(4, vec![q(0, 1), q(1, 1), q(2, 1)], Rho::Minus).unwrap(),
        ] {
            let w = build_fundamental(&sys).unwrap();
            assert_eq!(w.columns.len(), sys.n());
            let m = w.matrix();
            assert!(residual(&sys, &m).is_zero());
            assert!(!m.determinant().unwrap().is_zero());
            for p in w.as_partial_fraction().poly_part.iter().skip(2) {
                assert!(p.is_zero());
            }
            let z0 = q(7, 3);
            let direct = m.eval(&z0).unwrap();
            assert_eq!(w.evaluate(&z0).unwrap(), direct);
            for (j, c) in w.columns.iter().enumerate() {
                assert_eq!(c.evaluate(&z0).unwrap().column(0), direct.column(j));
            }
        }
    }

    #[test]
    fn moments_extend_past_the_vandermonde_window() {
        let sys = KZSystem::new(5, vec![q(-1, 2), q(3, 1), q(0, 1), q(5, 4)], Rho::Minus).unwrap();
        let n = sys.n() as i64;
        for s in [
            y1_series(&sys).unwrap(),
            yj_series(&sys, 3).unwrap(),
            yn_series(&sys).unwrap(),
        ] {
            let col = column_from_series(&sys, &s).unwrap();
            let mut seeds = BTreeMap::new();
            for (p, g) in s.iter() {
                seeds.insert(p, g.clone());
            }
            let extended = run_recurrence(&sys, -1, n - 1 + 3, &seeds).unwrap();
            assert!(moments_check(&sys, &extended, &col.column_residues(0), 3));
        }
    }

    #[test]
    fn rho_plus_dual() {
        let sys = s3();
        let y = rho_plus_fundamental(&sys).unwrap();
        let plus = sys.with_rho(Rho::Plus);
        assert!(residual(&plus, &y).is_zero());
        let w = build_fundamental(&sys).unwrap().matrix();
        assert_eq!(y.transpose().mul(&w).unwrap(), MatrixF::identity(3));
        let pf = rho_plus_partial_fraction(&sys).unwrap();
        assert_eq!(pf.value(), y);
        assert!(pf.poly_part.len() <= sys.n());
    }

    #[test]
    fn wrong_rho_is_rejected() {
        let plus = s3().with_rho(Rho::Plus);
        assert_eq!(build_y1(&plus), Err(Error::RequiresRhoMinus));
        assert_eq!(build_fundamental(&plus), Err(Error::RequiresRhoMinus));
        assert!(rho_plus_fundamental(&plus).is_ok());
    }
}
