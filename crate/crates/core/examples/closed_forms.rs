//! Compares the explicit coefficient formulas with the generic route.
//!
//! The first-solution weights, the top moment of `Y_j` and the pairwise
//! form of `G_1` agree exactly. The stated expansion coefficients of
//! `G_1` over the `N_s` do not agree for `n >= 4`; `exact_beta` prints the
//! correct ones.

use kz_rational::closed_form::{cross_route, exact_beta, stated_beta};
use kz_rational::rational::q;
use kz_rational::{KZSystem, Rho};

fn main() -> kz_rational::Result<()> {
    for n in 3..=6usize {
        let points = (0..n as i64 - 1).map(|i| q(i * i - 2, i + 1)).collect();
        let sys = KZSystem::new(n, points, Rho::Minus)?;
        let report = cross_route(&sys)?;
        println!("n = {n}");
        for c in &report.checks {
            println!(
                "  {:<22} {}",
                c.name,
                if c.agrees { "agrees" } else { "DISAGREES" }
            );
        }
    }

    let n = 5;
    let stated: Vec<String> = (1..n)
        .map(|s| stated_beta(n, s, 2, 1).unwrap().to_string())
        .collect();
    let exact: Vec<String> = exact_beta(n, 2, 1)?.iter().map(|b| b.to_string()).collect();
    println!(
        "n = 5, pair (2,1): stated beta [{}], exact beta [{}]",
        stated.join(", "),
        exact.join(", ")
    );
    Ok(())
}
