//! Exact verification: ODE residuals, fundamentality, pole orders, the
//! series at infinity, the integrality gate for the two-pole `S_3` system
//! and the commutation relations of the transpositions.
//!
//! Zero is always decided on canonical forms, never by sampling.

use serde::Serialize;

use crate::builder::{rho_plus_fundamental, PartialFractionSolution};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixF, MatrixP, MatrixR};
use crate::model::{perm_matrix, KZSystem, Rho};
use crate::poly::Polynomial;
use crate::ratfunc::RationalFunction;
use crate::rational::Rational;
use crate::series::{expand_at_infinity, moments_check, replay, SeriesCoefficients};

/// Number of series indices checked beyond `n - 1`.
pub const EXTRA_MOMENTS: usize = 3;

/// One failed check, with an exact witness where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_num: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_den: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
}

impl Finding {
    fn new(check: &str, message: String) -> Self {
        Finding {
            check: check.into(),
            message,
            entry: None,
            residual_num: None,
            residual_den: None,
            point: None,
            value: None,
        }
    }
}

/// `details` lists failures only, so every flag is true iff it is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ode_residual_zero: bool,
    /// `None` for non-square inputs.
    pub det_nonzero: Option<bool>,
    pub pole_orders_ok: bool,
    pub moments_ok: bool,
    pub details: Vec<Finding>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.ode_residual_zero
            && self.det_nonzero != Some(false)
            && self.pole_orders_ok
            && self.moments_ok
    }
}

/// `dW/dz - rho A(z) W`.
pub fn ode_residual(sys: &KZSystem, w: &MatrixF) -> Result<MatrixF> {
    if w.rows() != sys.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows for n = {}",
            w.rows(),
            sys.n()
        )));
    }
    let aw = sys.a_matrix().mul(w)?;
    let aw = match sys.rho() {
        Rho::Minus => aw.map(|f| f.scale(&-Rational::one())),
        Rho::Plus => aw,
    };
    w.derivative().sub(&aw)
}

/// A small integer where `f` is defined and nonzero.
fn witness_point(f: &RationalFunction) -> Option<(Rational, Rational)> {
    if f.is_zero() {
        return None;
    }
    (0i64..).flat_map(|t| [t, -t - 1]).find_map(|t| {
        let z = Rational::from(t);
        match f.eval(&z) {
            Ok(v) if !v.is_zero() => Some((z, v)),
            _ => None,
        }
    })
}

fn residual_findings(residual: &MatrixF) -> Vec<Finding> {
    let mut out = Vec::new();
    for i in 0..residual.rows() {
        for j in 0..residual.cols() {
            let f = residual.get(i, j);
            if f.is_zero() {
                continue;
            }
            let mut finding = Finding::new(
                "ode_residual",
                format!("residual entry ({i},{j}) is {}", f.render()),
            );
            finding.entry = Some([i, j]);
            finding.residual_num = Some(f.num().coeffs().to_vec());
            finding.residual_den = Some(f.den().coeffs().to_vec());
            if let Some((z, v)) = witness_point(f) {
                finding.point = Some(z);
                finding.value = Some(v);
            }
            out.push(finding);
        }
    }
    out
}

fn pole_findings(sys: &KZSystem, w: &MatrixF) -> Vec<Finding> {
    let mut out = Vec::new();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            let f = w.get(i, j);
            let mut rest = f.den().clone();
            for z in sys.points() {
                let order = f.pole_order(z);
                if order > 1 {
                    let mut finding = Finding::new(
                        "pole_order",
                        format!("entry ({i},{j}) has a pole of order {order}"),
                    );
                    finding.entry = Some([i, j]);
                    finding.point = Some(z.clone());
                    out.push(finding);
                }
                for _ in 0..order {
                    rest = rest
                        .exact_div(&Polynomial::linear_root(z))
                        .expect("root of the denominator");
                }
            }
            if rest.degree() != Some(0) {
                let mut finding = Finding::new(
                    "pole_order",
                    format!(
                        "entry ({i},{j}) has poles away from the z_k: {}",
                        rest.render("z")
                    ),
                );
                finding.entry = Some([i, j]);
                out.push(finding);
            }
        }
    }
    out
}

/// Laurent coefficients at infinity of column `j` from its leading index (or
/// index 1 if that is lower) to `n - 1 + EXTRA_MOMENTS`; `None` for a zero
/// column.
fn column_series(sys: &KZSystem, w: &MatrixF, j: usize) -> Option<SeriesCoefficients> {
    let column = w.column(j);
    let lo = column
        .iter()
        .filter_map(RationalFunction::order_at_infinity)
        .min()?;
    let hi = (sys.n() - 1 + EXTRA_MOMENTS) as i64;
    Some(expand_at_infinity(&column, lo.min(1), hi))
}

fn series_findings(sys: &KZSystem, w: &MatrixF) -> Vec<Finding> {
    let mut out = Vec::new();
    for j in 0..w.cols() {
        let Some(series) = column_series(sys, w, j) else {
            continue;
        };
        let end = series.end().unwrap_or(series.start());
        match replay(sys, &series, end) {
            Ok(replayed) => {
                if let Some(p) = (series.start()..=end).find(|&p| replayed.get(p) != series.get(p))
                {
                    out.push(Finding::new(
                        "moments",
                        format!(
                            "column {j}: G_{p} differs from the value forced by the recurrence"
                        ),
                    ));
                }
            }
            Err(e) => out.push(Finding::new("moments", format!("column {j}: {e}"))),
        }
    }
    out
}

/// Exact verification of a candidate solution (one or more columns).
pub fn verify_ode(sys: &KZSystem, w: &MatrixF) -> Result<VerificationReport> {
    let residual = ode_residual(sys, w)?;
    let mut details = residual_findings(&residual);
    let ode_residual_zero = details.is_empty();

    let det_nonzero = if w.is_square() {
        let nonzero = !w.determinant()?.is_zero();
        if !nonzero {
            details.push(Finding::new(
                "det_nonzero",
                "determinant is identically zero".into(),
            ));
        }
        Some(nonzero)
    } else {
        None
    };

    let poles = pole_findings(sys, w);
    let pole_orders_ok = poles.is_empty();
    details.extend(poles);

    let series = series_findings(sys, w);
    let moments_ok = series.is_empty();
    details.extend(series);

    Ok(VerificationReport {
        ode_residual_zero,
        det_nonzero,
        pole_orders_ok,
        moments_ok,
        details,
    })
}

/// [`verify_ode`] plus the moment identity `sum_k z_k^(p-1) L_k = G_p`
/// against the stored residues, for `p` up to `n - 1 + EXTRA_MOMENTS`.
pub fn verify_partial_fraction(
    sys: &KZSystem,
    sol: &PartialFractionSolution,
) -> Result<VerificationReport> {
    if sol.points != sys.points() {
        return Err(Error::DimensionMismatch(
            "solution points differ from the system".into(),
        ));
    }
    if sol.rho != sys.rho() {
        return Err(Error::DimensionMismatch(
            "solution rho differs from the system".into(),
        ));
    }
    let w = sol.value();
    let mut report = verify_ode(sys, &w)?;
    for j in 0..w.cols() {
        let Some(series) = column_series(sys, &w, j) else {
            continue;
        };
        if !moments_check(sys, &series, &sol.column_residues(j), EXTRA_MOMENTS) {
            report.moments_ok = false;
            report.details.push(Finding::new(
                "moments",
                format!("column {j}: residues do not reproduce the moments"),
            ));
        }
    }
    Ok(report)
}

/// Builds `W` at `rho = -1`, forms `(W^{-1})^T` and checks it against the
/// `rho = +1` system.
pub fn verify_duality(sys: &KZSystem) -> Result<bool> {
    let dual = rho_plus_fundamental(sys)?;
    Ok(verify_ode(&sys.with_rho(Rho::Plus), &dual)?.all_ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoRationalFundamental,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NoRationalFundamental => "no_rational_fundamental",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateVerdict {
    pub m1: i64,
    pub m2: i64,
    pub lambda_squared: u128,
    pub verdict: Verdict,
}

/// Largest `r` with `r^2 <= v`, by bisection.
pub fn isqrt(v: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if mid.checked_mul(mid).is_some_and(|sq| sq <= v) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Residue of `m1 P_1/(z - z_1) + m2 P_2/(z - z_2)` at infinity, in the
/// basis used for the `S_3` two-pole system.
pub fn gate_matrix(m1: i64, m2: i64) -> MatrixR {
    MatrixR::from_ints(&[&[0, m1, m2], &[m1, m2, 0], &[m2, 0, m1]])
}

/// `det(z I - a)`.
pub fn characteristic_polynomial(a: &MatrixR) -> Result<Polynomial> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.cols(),
        });
    }
    let m: MatrixP = Matrix::from_fn(n, n, |i, j| {
        let c = Polynomial::constant(-a.get(i, j).clone());
        if i == j {
            &c + &Polynomial::z()
        } else {
            c
        }
    });
    m.bareiss_determinant()
}

/// The non-trivial eigenvalues of [`gate_matrix`] are `±sqrt(m1^2 - m1 m2 + m2^2)`;
/// if that is not an integer no rational fundamental solution exists. An
/// integer value proves nothing either way.
pub fn rationality_gate(m1: i64, m2: i64) -> GateVerdict {
    // Nonnegative and below 3 * 2^126, so u128 holds it for all i64 input.
    let (a, b) = (m1.unsigned_abs() as u128, m2.unsigned_abs() as u128);
    let lambda_squared = if (m1 < 0) == (m2 < 0) {
        a.abs_diff(b).pow(2) + a * b
    } else {
        a * a + a * b + b * b
    };
    let r = isqrt(lambda_squared);
    let verdict = if r * r == lambda_squared {
        Verdict::Inconclusive
    } else {
        Verdict::NoRationalFundamental
    };
    GateVerdict {
        m1,
        m2,
        lambda_squared,
        verdict,
    }
}

/// Result of the exhaustive commutation check on transpositions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub n: usize,
    pub holds: bool,
    /// Ordered pairs checked for `P(i,j) = P(j,i)`.
    pub pairs_checked: usize,
    /// Ordered triples checked for `[P(i,j) + P(j,k), P(i,k)] = 0`.
    pub triples_checked: usize,
    /// Ordered quadruples checked for `[P(i,j), P(k,l)] = 0`.
    pub quadruples_checked: usize,
    pub failures: Vec<String>,
}

pub fn consistency_relations(n: usize) -> Result<ConsistencyReport> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let p: Vec<Vec<Option<MatrixR>>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| (i != j).then(|| perm_matrix(n, i, j)).transpose())
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let p = |i: usize, j: usize| p[i][j].as_ref().expect("distinct indices");
    let mut report = ConsistencyReport {
        n,
        holds: true,
        pairs_checked: 0,
        triples_checked: 0,
        quadruples_checked: 0,
        failures: Vec::new(),
    };
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            report.pairs_checked += 1;
            if p(i, j) != p(j, i) {
                report
                    .failures
                    .push(format!("P({},{}) != P({},{})", i + 1, j + 1, j + 1, i + 1));
            }
            for k in (0..n).filter(|&k| k != i && k != j) {
                report.triples_checked += 1;
                if !p(i, j).add(p(j, k))?.commutator(p(i, k))?.is_zero() {
                    report.failures.push(format!(
                        "[P({0},{1}) + P({1},{2}), P({0},{2})] != 0",
                        i + 1,
                        j + 1,
                        k + 1
                    ));
                }
                for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                    report.quadruples_checked += 1;
                    if !p(i, j).commutator(p(k, l))?.is_zero() {
                        report.failures.push(format!(
                            "[P({},{}), P({},{})] != 0",
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1
                        ));
                    }
                }
            }
        }
    }
    report.holds = report.failures.is_empty();
    Ok(report)
}
