//! The versioned JSON documents written and read by the command line.
//!
//! A solution document stores `W(z) = sum_k L_k / (z - z_k) + sum_q Q_q z^q`:
//!
//! ```json
//! {
//!   "schema": "kz-rational/1",
//!   "kind": "solution",
//!   "n": 3,
//!   "rho": -1,
//!   "points": ["0", "1"],
//!   "residues": [[["-1", "1/3", "..."], ["..."], ["..."]], ["..."]],
//!   "poly_part": [[["..."]]]
//! }
//! ```
//!
//! `residues[k]` is `L_(k+1)` and `poly_part[q]` is `Q_q`, each a list of
//! rows. Every scalar is a reduced `"p/q"` (or integer) string, so writing a
//! parsed document reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::builder::PartialFractionSolution;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixR};
use crate::model::{KZSystem, Rho};
use crate::rational::Rational;
use crate::verify::{ConsistencyReport, GateVerdict, VerificationReport};

pub const SCHEMA: &str = "kz-rational/1";

type Rows = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub schema: String,
    pub kind: String,
    pub n: usize,
    pub rho: i64,
    pub points: Vec<Rational>,
    pub residues: Vec<Rows>,
    pub poly_part: Vec<Rows>,
}

fn rows(m: &MatrixR) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn matrix(rows: &Rows, n: usize, width: usize, what: &str) -> Result<MatrixR> {
    if rows.len() != n || rows.iter().any(|r| r.len() != width) {
        return Err(Error::Parse(format!(
            "{what} must be a {n} x {width} matrix"
        )));
    }
    Matrix::from_rows(rows.clone())
}

impl SolutionDocument {
    pub fn from_solution(sys: &KZSystem, sol: &PartialFractionSolution) -> Self {
        SolutionDocument {
            schema: SCHEMA.into(),
            kind: "solution".into(),
            n: sys.n(),
            rho: sol.rho.sign(),
            points: sol.points.clone(),
            residues: sol.residues.iter().map(rows).collect(),
            poly_part: sol.poly_part.iter().map(rows).collect(),
        }
    }

    /// Validates the document and rebuilds the system and the solution.
    pub fn to_solution(&self) -> Result<(KZSystem, PartialFractionSolution)> {
        if self.schema != SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema {:?} (expected {SCHEMA:?})",
                self.schema
            )));
        }
        if self.kind != "solution" {
            return Err(Error::Parse(format!(
                "expected a solution document, got kind {:?}",
                self.kind
            )));
        }
        let sys = KZSystem::new(self.n, self.points.clone(), Rho::try_from(self.rho)?)?;
        if self.residues.len() != self.points.len() {
            return Err(Error::Parse(format!(
                "{} residues for {} points",
                self.residues.len(),
                self.points.len()
            )));
        }
        if self.poly_part.is_empty() {
            return Err(Error::Parse(
                "poly_part must hold at least the constant term".into(),
            ));
        }
        let width = self.poly_part[0].first().map_or(0, Vec::len);
        if width == 0 {
            return Err(Error::Parse("solution has no columns".into()));
        }
        let residues = self
            .residues
            .iter()
            .enumerate()
            .map(|(k, r)| matrix(r, self.n, width, &format!("residues[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let poly = self
            .poly_part
            .iter()
            .enumerate()
            .map(|(q, r)| matrix(r, self.n, width, &format!("poly_part[{q}]")))
            .collect::<Result<Vec<_>>>()?;
        let sol = PartialFractionSolution::new(self.points.clone(), residues, poly, sys.rho())?;
        Ok((sys, sol))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn render(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T> {
    pub schema: &'static str,
    pub kind: &'static str,
    pub ok: bool,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn report_json(report: &VerificationReport) -> String {
    to_json(&Envelope {
        schema: SCHEMA,
        kind: "verification",
        ok: report.all_ok(),
        body: report,
    })
}

pub fn gate_json(verdict: &GateVerdict) -> String {
    to_json(&Envelope {
        schema: SCHEMA,
        kind: "gate",
        ok: true,
        body: verdict,
    })
}

pub fn consistency_json(report: &ConsistencyReport) -> String {
    to_json(&Envelope {
        schema: SCHEMA,
        kind: "consistency",
        ok: report.holds,
        body: report,
    })
}
