//! Writes a solution document, reads it back, verifies it, then corrupts one
//! residue and shows the witness the verifier reports.

use kz_rational::builder::build_fundamental;
use kz_rational::io::{report_json, SolutionDocument};
use kz_rational::rational::q;
use kz_rational::verify::verify_partial_fraction;
use kz_rational::{KZSystem, Rational, Rho};

fn main() -> kz_rational::Result<()> {
    let sys = KZSystem::new(3, vec![q(-1, 2), q(2, 1)], Rho::Minus)?;
    let sol = build_fundamental(&sys)?.as_partial_fraction();
    let text = SolutionDocument::from_solution(&sys, &sol).render();
    print!("{text}");

    let mut doc = SolutionDocument::parse(&text)?;
    let (sys2, back) = doc.to_solution()?;
    println!(
        "round trip identical: {}",
        SolutionDocument::from_solution(&sys2, &back).render() == text
    );
    println!(
        "verified: {}",
        verify_partial_fraction(&sys2, &back)?.all_ok()
    );

    doc.residues[0][0][0] = &doc.residues[0][0][0] + &Rational::one();
    let (sys3, bad) = doc.to_solution()?;
    let report = verify_partial_fraction(&sys3, &bad)?;
    print!("{}", report_json(&report));
    Ok(())
}
