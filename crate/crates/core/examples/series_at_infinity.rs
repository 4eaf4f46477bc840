//! The recurrence for the Laurent coefficients at infinity: singular
//! indices, a solvable resonant step, and residues recovered from moments.

use std::collections::BTreeMap;

use kz_rational::builder::yj_seed;
use kz_rational::linalg::vandermonde_residues;
use kz_rational::rational::q;
use kz_rational::series::{recurrence_step, run_recurrence, singular_indices};
use kz_rational::{KZSystem, Rho};

fn show(v: &[kz_rational::Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> kz_rational::Result<()> {
    let sys = KZSystem::new(4, vec![q(-1, 1), q(1, 2), q(3, 1)], Rho::Minus)?;
    println!("singular indices: {:?}", singular_indices(&sys));

    let seeds = BTreeMap::from([(2, yj_seed(4, 2)?)]);
    let series = run_recurrence(&sys, -1, 2, &seeds)?;
    // the step into G_3 is resonant; it is solvable and leaves a kernel direction
    let step = recurrence_step(&sys, &series, 2)?;
    println!(
        "G_3 singular: {}, free directions: {}",
        step.was_singular,
        step.freedom.len()
    );
    let g3 = step.coefficient.expect("solvable");
    println!("G_3 = {}", show(&g3));

    let moments = vec![
        series.get(1).unwrap().clone(),
        series.get(2).unwrap().clone(),
        g3,
    ];
    for (k, l) in vandermonde_residues(sys.points(), &moments)?
        .iter()
        .enumerate()
    {
        println!("L{} = {}", k + 1, show(l));
    }
    Ok(())
}
