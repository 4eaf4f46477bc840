//! Laurent coefficients at infinity.
//!
//! With `z = 1/xi` a solution becomes `V(xi) = sum_p G_p xi^p`, and the
//! coefficients obey
//!
//! ```text
//! [(q+1) I + rho T] G_(q+1) = -rho * sum_(j >= 0, j + l = q) T_j G_l
//! ```
//!
//! The step operator is singular exactly when `q+1` is an eigenvalue of
//! `-rho T`; there the right-hand side must have no kernel component and
//! the new coefficient is determined only up to the kernel.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{project_onto, solve_singular, Column, MatrixR};
use crate::model::{KZSystem, Rho};
use crate::ratfunc::RationalFunction;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoefficients {
    dim: usize,
    start: i64,
    entries: BTreeMap<i64, Column>,
}

impl SeriesCoefficients {
    pub fn new(dim: usize, start: i64) -> Self {
        SeriesCoefficients {
            dim,
            start,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The index `m` the series is declared to start at.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Highest stored index.
    pub fn end(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn get(&self, p: i64) -> Option<&Column> {
        self.entries.get(&p)
    }

    pub fn insert(&mut self, p: i64, g: Column) {
        assert!(p >= self.start, "index below the start of the series");
        assert_eq!(g.len(), self.dim, "coefficient of the wrong length");
        self.entries.insert(p, g);
    }

    /// First index with a nonzero coefficient.
    pub fn leading_index(&self) -> Option<i64> {
        self.entries
            .iter()
            .find(|(_, g)| g.iter().any(|x| !x.is_zero()))
            .map(|(&p, _)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Column)> {
        self.entries.iter().map(|(&p, g)| (p, g))
    }
}

/// `(q+1) I + rho T` for `index = q+1`.
pub fn step_operator(sys: &KZSystem, index: i64) -> MatrixR {
    let n = sys.n();
    let rho = sys.rho().as_rational();
    MatrixR::identity(n)
        .scale(&Rational::from(index))
        .add(&sys.t().scale(&rho))
        .unwrap()
}

/// Indices `q+1` at which the step operator is singular.
pub fn singular_indices(sys: &KZSystem) -> [i64; 3] {
    let n = sys.n() as i64;
    match sys.rho() {
        Rho::Minus => [-1, n - 2, n - 1],
        Rho::Plus => [-(n - 1), -(n - 2), 1],
    }
}

/// Right-hand side of the step producing `G_(q+1)`, already carrying the
/// `-rho` factor.
pub fn recurrence_rhs(sys: &KZSystem, coeffs: &SeriesCoefficients, q: i64) -> Result<Column> {
    let n = sys.n();
    let mut acc = vec![Rational::zero(); n];
    for l in coeffs.start()..=q {
        let g = coeffs.get(l).ok_or(Error::MissingCoefficient(l))?;
        if g.iter().all(Rational::is_zero) {
            continue;
        }
        let tg = sys.t_coeff((q - l) as usize).mul_vec(g)?;
        for (a, x) in acc.iter_mut().zip(&tg) {
            *a = &*a + x;
        }
    }
    if sys.rho() == Rho::Plus {
        for a in acc.iter_mut() {
            *a = -&*a;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceStepResult {
    /// `G_(q+1)`, absent when the step is obstructed.
    pub coefficient: Option<Column>,
    pub was_singular: bool,
    /// Kernel of the step operator: the freedom left at this index.
    pub freedom: Vec<Column>,
    /// Kernel component of the right-hand side when it is nonzero.
    pub obstruction: Option<Column>,
}

/// Solves for `G_(q+1)` from the stored `G_start..G_q`.
pub fn recurrence_step(
    sys: &KZSystem,
    coeffs: &SeriesCoefficients,
    q: i64,
) -> Result<RecurrenceStepResult> {
    let rhs = recurrence_rhs(sys, coeffs, q)?;
    let op = step_operator(sys, q + 1);
    let report = solve_singular(&op, &rhs)?;
    let was_singular = !report.kernel_basis.is_empty();
    let obstruction = if report.solvable() {
        None
    } else {
        // the operator is symmetric, so its cokernel is its kernel
        Some(project_onto(&rhs, &report.kernel_basis))
    };
    Ok(RecurrenceStepResult {
        coefficient: report.particular,
        was_singular,
        freedom: report.kernel_basis,
        obstruction,
    })
}

/// Whether the stored `G_index` satisfies its step equation.
pub fn step_holds(sys: &KZSystem, coeffs: &SeriesCoefficients, index: i64) -> Result<bool> {
    let g = coeffs.get(index).ok_or(Error::MissingCoefficient(index))?;
    let rhs = recurrence_rhs(sys, coeffs, index - 1)?;
    Ok(step_operator(sys, index).mul_vec(g)? == rhs)
}

/// Runs the recurrence over `start..=end`. Seeded indices take the given
/// value (which must satisfy its step equation); all others are solved with
/// the zero-kernel-component choice.
pub fn run_recurrence(
    sys: &KZSystem,
    start: i64,
    end: i64,
    seeds: &BTreeMap<i64, Column>,
) -> Result<SeriesCoefficients> {
    let mut coeffs = SeriesCoefficients::new(sys.n(), start);
    for index in start..=end {
        match seeds.get(&index) {
            Some(seed) => {
                if seed.len() != sys.n() {
                    return Err(Error::DimensionMismatch(format!(
                        "seed G_{index} has length {}",
                        seed.len()
                    )));
                }
                coeffs.insert(index, seed.clone());
                if !step_holds(sys, &coeffs, index)? {
                    return Err(Error::Obstruction { index });
                }
            }
            None => {
                let step = recurrence_step(sys, &coeffs, index - 1)?;
                let g = step.coefficient.ok_or(Error::Obstruction { index })?;
                coeffs.insert(index, g);
            }
        }
    }
    Ok(coeffs)
}

/// Recomputes `reference` by the recurrence, taking only its values at the
/// start and at the singular indices as given.
pub fn replay(
    sys: &KZSystem,
    reference: &SeriesCoefficients,
    end: i64,
) -> Result<SeriesCoefficients> {
    let start = reference.start();
    let mut seeds = BTreeMap::new();
    for idx in std::iter::once(start).chain(singular_indices(sys)) {
        if idx >= start && idx <= end {
            let g = reference.get(idx).ok_or(Error::MissingCoefficient(idx))?;
            seeds.insert(idx, g.clone());
        }
    }
    run_recurrence(sys, start, end, &seeds)
}

/// `sum_k z_k^(p-1) L_k` for `p >= 1`.
pub fn moment_from_residues(points: &[Rational], residues: &[Column], p: i64) -> Column {
    assert!(p >= 1);
    let dim = residues.first().map_or(0, Vec::len);
    let mut acc = vec![Rational::zero(); dim];
    for (z, l) in points.iter().zip(residues) {
        let w = z.pow((p - 1) as u32);
        for (a, x) in acc.iter_mut().zip(l) {
            *a = &*a + &(&w * x);
        }
    }
    acc
}

/// True iff `sum_k z_k^(p-1) L_k = G_p` for every `1 <= p <= n-1+extra`.
pub fn moments_check(
    sys: &KZSystem,
    coeffs: &SeriesCoefficients,
    residues: &[Column],
    extra: usize,
) -> bool {
    let top = (sys.n() - 1 + extra) as i64;
    (1..=top).all(|p| match coeffs.get(p) {
        Some(g) => moment_from_residues(sys.points(), residues, p) == *g,
        None => false,
    })
}

/// Laurent coefficients at infinity of a column of rational functions,
/// over `lo..=hi`.
pub fn expand_at_infinity(column: &[RationalFunction], lo: i64, hi: i64) -> SeriesCoefficients {
    let mut coeffs = SeriesCoefficients::new(column.len(), lo);
    let expanded: Vec<Vec<Rational>> = column
        .iter()
        .map(|f| f.laurent_at_infinity(lo, hi))
        .collect();
    for (off, p) in (lo..=hi).enumerate() {
        coeffs.insert(p, expanded.iter().map(|e| e[off].clone()).collect());
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MatrixF;
    use crate::model::spectral_data;
    use crate::rational::q;

    fn col(v: &[i64]) -> Column {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn s3() -> KZSystem {
        KZSystem::new(3, vec![q(0, 1), q(1, 1)], Rho::Minus).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let sys = s3();
        let mut c = SeriesCoefficients::new(3, -1);
        c.insert(-1, col(&[0, 0, 0]));
        assert_eq!(recurrence_rhs(&sys, &c, -1).unwrap(), col(&[0, 0, 0]));
        c.insert(-1, col(&[2, -1, -1]));
        assert_eq!(recurrence_rhs(&sys, &c, -1).unwrap(), col(&[-1, -1, 2]));
        assert_eq!(
            recurrence_rhs(&sys, &c, 0),
            Err(Error::MissingCoefficient(0))
        );
    }

    #[test]
    fn step_examples() {
        let sys = s3();
        let mut c = SeriesCoefficients::new(3, -1);
        c.insert(-1, col(&[0, 0, 0]));
        let step = recurrence_step(&sys, &c, -1).unwrap();
        assert_eq!(step.coefficient, Some(col(&[0, 0, 0])));
        assert!(!step.was_singular);

        c.insert(-1, col(&[2, -1, -1]));
        let step = recurrence_step(&sys, &c, -1).unwrap();
        let g0 = step.coefficient.unwrap();
        assert_eq!(g0, col(&[-1, 2, -1]));
        // T G_0 = -T_0 G_(-1)
        assert_eq!(sys.t().mul_vec(&g0).unwrap(), col(&[1, 1, -2]));
    }

    #[test]
    fn obstruction_is_reported() {
        let sys = s3();
        // seed G_1 = V1 with nothing below: the step at index 2 sees
        // rhs = T_0 V1 = V1, which has a component along ker(2I - T) = V1
        let mut c = SeriesCoefficients::new(3, 1);
        c.insert(1, col(&[1, 1, 1]));
        let step = recurrence_step(&sys, &c, 1).unwrap();
        assert!(step.was_singular);
        assert!(step.coefficient.is_none());
        assert_eq!(step.obstruction, Some(col(&[1, 1, 1])));
    }

    #[test]
    fn singular_index_sets_match_determinants() {
        for n in 3..=7 {
            for rho in [Rho::Minus, Rho::Plus] {
                let pts: Vec<Rational> = (0..n - 1).map(|k| Rational::from(k as i64)).collect();
                let sys = KZSystem::new(n, pts, rho).unwrap();
                let sing = singular_indices(&sys);
                for idx in -(n as i64) - 2..=(n as i64) + 2 {
                    let det_zero = step_operator(&sys, idx).determinant().unwrap().is_zero();
                    assert_eq!(det_zero, sing.contains(&idx), "n={n} rho={rho:?} idx={idx}");
                }
            }
        }
    }

    #[test]
    fn recurrence_output_satisfies_every_step() {
        let sys = KZSystem::new(5, vec![q(1, 2), q(-3, 1), q(2, 7), q(4, 1)], Rho::Minus).unwrap();
        let sd = spectral_data(5).unwrap();
        let seeds = BTreeMap::from([(-1, sd.v3.clone())]);
        let c = run_recurrence(&sys, -1, 8, &seeds).unwrap();
        for idx in -1..=8 {
            assert!(step_holds(&sys, &c, idx).unwrap(), "index {idx}");
        }
        assert_eq!(c.leading_index(), Some(-1));
        let replayed = replay(&sys, &c, 8).unwrap();
        assert_eq!(replayed, c);
    }

    #[test]
    fn invalid_seed_is_rejected() {
        let sys = s3();
        let seeds = BTreeMap::from([(-1, col(&[1, 1, 1]))]);
        assert_eq!(
            run_recurrence(&sys, -1, 2, &seeds),
            Err(Error::Obstruction { index: -1 })
        );
    }

    #[test]
    fn moments_of_first_s3_solution() {
        // Y1 = V1 / (z (z - 1)); oracle: 1/(z(z-1)) = sum_(p>=2) z^(-p)
        let sys = s3();
        let residues = vec![col(&[-1, -1, -1]), col(&[1, 1, 1])];
        let seeds = BTreeMap::from([(2, col(&[1, 1, 1]))]);
        let c = run_recurrence(&sys, -1, 5, &seeds).unwrap();
        for p in 2..=5 {
            assert_eq!(c.get(p).unwrap(), &col(&[1, 1, 1]));
        }
        assert!(moments_check(&sys, &c, &residues, 0));
        assert!(moments_check(&sys, &c, &residues, 3));
        assert!(
            !moments_check(&sys, &c, &residues, 4),
            "G_6 was never computed"
        );
        let mut bad = residues.clone();
        bad[0][1] = Rational::from(0);
        assert!(!moments_check(&sys, &c, &bad, 3));
    }

    #[test]
    fn expansion_of_a_known_column() {
        let sys = s3();
        let f = RationalFunction::new(
            crate::poly::Polynomial::one(),
            crate::poly::Polynomial::from_ints(&[0, -1, 1]),
        )
        .unwrap();
        let column = vec![f.clone(), f.clone(), f];
        let e = expand_at_infinity(&column, -1, 5);
        assert_eq!(e.leading_index(), Some(2));
        let r = replay(&sys, &e, 5).unwrap();
        assert_eq!(r, e);
        let _ = MatrixF::from_column(column);
    }
}
