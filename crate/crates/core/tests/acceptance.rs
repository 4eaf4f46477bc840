//! Acceptance suite: one PASS/FAIL line per criterion. All checks are exact
//! (zero tolerance); the only numeric thresholds are wall-clock budgets.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kz_rational::builder::{build_fundamental, build_y1, build_yj, build_yn, rho_plus_fundamental};
use kz_rational::closed_form::cross_route;
use kz_rational::linalg::{Column, MatrixF, MatrixR};
use kz_rational::model::{p_k, perm_matrix, s_matrix, spectral_data, t_matrix};
use kz_rational::rational::q;
use kz_rational::verify::{
    characteristic_polynomial, consistency_relations, gate_matrix, ode_residual, rationality_gate,
    verify_ode, verify_partial_fraction, Verdict,
};
use kz_rational::{KZSystem, Polynomial, Rational, RationalFunction, Rho};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of the randomized sweep.
const SWEEP_SEED: u64 = 0x4b5a_0001;
const SWEEP_DIMS: std::ops::RangeInclusive<usize> = 3..=7;
const CASES_PER_DIM: usize = 5;
/// Bound on |numerator| and denominator of random points.
const POINT_BOUND: i64 = 20;
const WORKED_CASE_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn col(v: &[i64]) -> Column {
    v.iter().map(|&x| Rational::from(x)).collect()
}

fn sweep_cases() -> Vec<KZSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let mut out = Vec::new();
    for n in SWEEP_DIMS {
        for _ in 0..CASES_PER_DIM {
            let mut points: Vec<Rational> = Vec::new();
            while points.len() < n - 1 {
                let p = q(
                    rng.gen_range(-POINT_BOUND..=POINT_BOUND),
                    rng.gen_range(1..=POINT_BOUND),
                );
                if !points.contains(&p) {
                    points.push(p);
                }
            }
            out.push(KZSystem::new(n, points, Rho::Minus).unwrap());
        }
    }
    out
}

fn describe(sys: &KZSystem) -> String {
    let pts: Vec<String> = sys.points().iter().map(|p| p.to_string()).collect();
    format!("n={} points=({})", sys.n(), pts.join(","))
}

fn worked_s3() -> Outcome {
    let start = Instant::now();
    let sys = KZSystem::new(3, vec![q(0, 1), q(1, 1)], Rho::Minus).unwrap();
    let y1 = build_y1(&sys).map_err(|e| e.to_string())?;
    let y2 = build_yj(&sys, 2).map_err(|e| e.to_string())?;
    let y3 = build_yn(&sys).map_err(|e| e.to_string())?;

    let f = &RationalFunction::simple_pole(q(1, 1), &q(1, 1))
        - &RationalFunction::simple_pole(q(1, 1), &q(0, 1));
    ensure(
        y1.value() == MatrixF::from_column(vec![f.clone(), f.clone(), f]),
        "Y1 != col[1,1,1](1/(z-1) - 1/z)",
    )?;
    ensure(
        y2.column_residues(0)
            == vec![
                vec![q(1, 3), q(1, 3), q(-2, 3)],
                vec![q(-1, 3), q(2, 3), q(-1, 3)],
            ],
        "Y2 residues differ",
    )?;
    ensure(
        y2.poly_part.iter().all(|m| m.is_zero()),
        "Y2 has a polynomial part",
    )?;
    ensure(
        y3.moment(-1).column(0) == col(&[2, -1, -1]),
        "Y3 linear term is not z col[2,-1,-1]",
    )?;
    ensure(y3.poly_part.len() == 2, "Y3 polynomial part is not linear")?;
    for (name, y) in [("Y1", &y1), ("Y2", &y2), ("Y3", &y3)] {
        ensure(
            ode_residual(&sys, &y.value()).unwrap().is_zero(),
            format!("{name} residual nonzero"),
        )?;
    }
    let w = build_fundamental(&sys).map_err(|e| e.to_string())?.matrix();
    let det = w.determinant().unwrap();
    ensure(!det.is_zero(), "det W == 0")?;
    let elapsed = start.elapsed();
    ensure(elapsed < WORKED_CASE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("det W = {}, {elapsed:.2?}", det.render()))
}

fn randomized_sweep(cases: &[KZSystem]) -> Outcome {
    let start = Instant::now();
    for sys in cases {
        let sol = build_fundamental(sys)
            .map_err(|e| format!("{}: {e}", describe(sys)))?
            .as_partial_fraction();
        let r = verify_partial_fraction(sys, &sol).unwrap();
        ensure(
            r.ode_residual_zero && r.det_nonzero == Some(true) && r.pole_orders_ok && r.moments_ok,
            format!("{}: {:?}", describe(sys), r),
        )?;
        ensure(
            sol.poly_part.len() <= 2,
            format!("{}: polynomial part above degree 1", describe(sys)),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("{} cases, {elapsed:.2?}", cases.len()))
}

fn duality(cases: &[KZSystem]) -> Outcome {
    let start = Instant::now();
    for sys in cases {
        let w = build_fundamental(sys).unwrap().matrix();
        let dual = rho_plus_fundamental(sys).map_err(|e| format!("{}: {e}", describe(sys)))?;
        let r = verify_ode(&sys.with_rho(Rho::Plus), &dual).unwrap();
        ensure(r.all_ok(), format!("{}: {:?}", describe(sys), r))?;
        let product = &dual.determinant().unwrap() * &w.determinant().unwrap();
        ensure(
            product == RationalFunction::one(),
            format!("{}: det product {}", describe(sys), product.render()),
        )?;
    }
    Ok(format!("{} cases, {:.2?}", cases.len(), start.elapsed()))
}

fn cross_routes(cases: &[KZSystem]) -> Outcome {
    let mut systems = vec![KZSystem::new(4, vec![q(0, 1), q(1, 1), q(2, 1)], Rho::Minus).unwrap()];
    systems.extend(cases.iter().filter(|s| (4..=6).contains(&s.n())).cloned());
    let mut failed: Vec<(usize, &str, String)> = Vec::new();
    let mut agreed: Vec<&str> = Vec::new();
    for sys in &systems {
        let report = cross_route(sys).map_err(|e| e.to_string())?;
        for c in &report.checks {
            if c.agrees {
                if !agreed.contains(&c.name) {
                    agreed.push(c.name);
                }
            } else if !failed
                .iter()
                .any(|(n, name, _)| *n == sys.n() && *name == c.name)
            {
                failed.push((sys.n(), c.name, c.detail.clone()));
            }
        }
    }
    agreed.retain(|name| !failed.iter().any(|(_, f, _)| f == name));
    if failed.is_empty() {
        return Ok(format!(
            "{} systems; agree: {}",
            systems.len(),
            agreed.join(", ")
        ));
    }
    let lines: Vec<String> = failed
        .iter()
        .map(|(n, name, detail)| format!("n={n}: {name} ({detail})"))
        .collect();
    Err(format!(
        "{} systems; agree: {}\n      disagree:\n      {}",
        systems.len(),
        agreed.join(", "),
        lines.join("\n      ")
    ))
}

fn spectral() -> Outcome {
    for n in 3..=8usize {
        let t = t_matrix(n);
        let shift = MatrixR::identity(n).scale(&Rational::from(n as i64 - 2));
        ensure(
            t == shift.add(&s_matrix(n)).unwrap(),
            format!("n={n}: T != (n-2)I + S"),
        )?;
        let spec = spectral_data(n).unwrap();
        let eig = |v: &Column, l: &Rational| {
            t.mul_vec(v).unwrap() == v.iter().map(|x| x * l).collect::<Column>()
        };
        ensure(
            spec.eigenvalues == [q(n as i64 - 1, 1), q(n as i64 - 2, 1), q(-1, 1)],
            "eigenvalues",
        )?;
        ensure(eig(&spec.v1, &spec.eigenvalues[0]), format!("n={n}: T V1"))?;
        ensure(
            spec.v2_basis.iter().all(|v| eig(v, &spec.eigenvalues[1])),
            format!("n={n}: T V2"),
        )?;
        ensure(eig(&spec.v3, &spec.eigenvalues[2]), format!("n={n}: T V3"))?;
        let mut sum = vec![Rational::zero(); n];
        for nv in &spec.n_vectors {
            sum = sum.iter().zip(nv).map(|(a, b)| a + b).collect();
        }
        ensure(sum == spec.v3, format!("n={n}: sum N_i != V3"))?;
        for k in 1..n {
            for s in 1..n {
                let lhs = p_k(n, k).unwrap().mul_vec(&spec.n_vectors[s - 1]).unwrap();
                let rhs = p_k(n, s).unwrap().mul_vec(&spec.n_vectors[k - 1]).unwrap();
                ensure(lhs == rhs, format!("n={n}: P_{k} N_{s} != P_{s} N_{k}"))?;
            }
        }
    }
    Ok("n = 3..8".into())
}

fn gate() -> Outcome {
    for m2 in -10..=10i64 {
        let expected = if m2 == 0 || m2 == 1 {
            Verdict::Inconclusive
        } else {
            Verdict::NoRationalFundamental
        };
        let v = rationality_gate(1, m2);
        ensure(
            v.verdict == expected,
            format!("gate(1,{m2}) = {}", v.verdict),
        )?;
    }
    for m1 in -6..=6i64 {
        for m2 in -6..=6i64 {
            ensure(
                rationality_gate(m1, m2).lambda_squared == rationality_gate(m2, m1).lambda_squared,
                "gate not symmetric",
            )?;
            let chi = characteristic_polynomial(&gate_matrix(m1, m2)).unwrap();
            let expected = &Polynomial::linear_root(&Rational::from(m1 + m2))
                * &Polynomial::from_ints(&[-(m1 * m1 - m1 * m2 + m2 * m2), 0, 1]);
            ensure(
                chi == expected,
                format!("characteristic polynomial for ({m1},{m2})"),
            )?;
        }
    }
    Ok("m2 in [-10,10]; characteristic polynomial for |m1|,|m2| <= 6".into())
}

fn consistency() -> Outcome {
    let mut counts = Vec::new();
    for n in 3..=7 {
        let r = consistency_relations(n).unwrap();
        ensure(r.holds, format!("n={n}: {:?}", r.failures))?;
        counts.push(format!(
            "n={}:{}/{}/{}",
            n, r.pairs_checked, r.triples_checked, r.quadruples_checked
        ));
    }
    ensure(
        perm_matrix(4, 1, 2).unwrap() == perm_matrix(4, 2, 1).unwrap(),
        "P(1,2) != P(2,1)",
    )?;
    Ok(format!("pairs/triples/quadruples {}", counts.join(" ")))
}

struct Run {
    code: i32,
    stdout: Vec<u8>,
}

fn exe(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_kz-rational"))
        .args(args)
        .output()
        .expect("spawn");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
    }
}

fn cli_closed_loop() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (a, b) = (path("a.json"), path("b.json"));
    let build = |out: &str| {
        exe(&[
            "build", "--n", "3", "--points", "0,1", "--rho", "-1", "--output", out,
        ])
    };
    ensure(build(&a).code == 0 && build(&b).code == 0, "build failed")?;
    let text = std::fs::read_to_string(&a).unwrap();
    ensure(
        text == std::fs::read_to_string(&b).unwrap(),
        "build output not byte-identical",
    )?;
    let v1 = exe(&["verify", "--input", &a]);
    let v2 = exe(&["verify", "--input", &a]);
    ensure(v1.code == 0, "verify of a fresh build did not exit 0")?;
    ensure(v1.stdout == v2.stdout, "verify output not byte-identical")?;

    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let bad = path("bad.json");
    let mut corrupted = 0;
    for (k, residue) in doc["residues"].as_array().unwrap().iter().enumerate() {
        for (i, row) in residue.as_array().unwrap().iter().enumerate() {
            for (j, entry) in row.as_array().unwrap().iter().enumerate() {
                let s = entry.as_str().unwrap();
                for (pos, ch) in s.char_indices().filter(|(_, c)| c.is_ascii_digit()) {
                    // d -> d % 9 + 1 always changes the digit and never yields a zero denominator.
                    let d = ch.to_digit(10).unwrap();
                    let mut changed = s.to_string();
                    changed.replace_range(pos..pos + 1, &(d % 9 + 1).to_string());
                    let mut doc = doc.clone();
                    doc["residues"][k][i][j] = serde_json::Value::String(changed.clone());
                    std::fs::write(&bad, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
                    let run = exe(&["verify", "--input", &bad]);
                    ensure(
                        run.code == 1,
                        format!("L_{}[{i}][{j}] {s} -> {changed}: exit {}", k + 1, run.code),
                    )?;
                    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
                    let witness = report["details"].as_array().unwrap().iter().any(|f| {
                        f["check"] == "ode_residual"
                            && f.get("entry").is_some()
                            && f.get("point").is_some()
                            && f.get("value").is_some()
                    });
                    ensure(witness, format!("no witness for {s} -> {changed}"))?;
                    corrupted += 1;
                }
            }
        }
    }
    std::fs::write(&bad, "{ not json").unwrap();
    ensure(
        exe(&["verify", "--input", &bad]).code == 2,
        "malformed JSON did not exit 2",
    )?;
    Ok(format!(
        "{corrupted} single-digit corruptions all rejected with witnesses"
    ))
}

fn main() -> ExitCode {
    let cases = sweep_cases();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("worked S3 case", Box::new(worked_s3)),
        (
            "randomized exactness sweep",
            Box::new(|| randomized_sweep(&cases)),
        ),
        ("duality rho = +1", Box::new(|| duality(&cases))),
        ("cross-route agreement", Box::new(|| cross_routes(&cases))),
        ("spectral facts", Box::new(spectral)),
        ("rationality gate", Box::new(gate)),
        ("consistency relations", Box::new(consistency)),
        ("CLI closed loop", Box::new(cli_closed_loop)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(note) => println!("[PASS] criterion {}: {name} -- {note}", i + 1),
            Err(why) => {
                failures += 1;
                println!("[FAIL] criterion {}: {name} -- {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
