//! The `rho = +1` system is solved by `(W^{-1})^T`, where `W` solves
//! `rho = -1`. The dual has simple poles and a polynomial part of degree
//! up to `n - 1`.

use kz_rational::builder::{build_fundamental, rho_plus_fundamental, rho_plus_partial_fraction};
use kz_rational::rational::q;
use kz_rational::verify::verify_ode;
use kz_rational::{KZSystem, Rho};

fn main() -> kz_rational::Result<()> {
    let sys = KZSystem::new(4, vec![q(0, 1), q(1, 1), q(2, 1)], Rho::Minus)?;
    let w = build_fundamental(&sys)?.matrix();
    let dual = rho_plus_fundamental(&sys)?;

    let report = verify_ode(&sys.with_rho(Rho::Plus), &dual)?;
    println!("dual verifies: {}", report.all_ok());
    let product = &w.determinant()? * &dual.determinant()?;
    println!("det W * det dual = {}", product.render());

    let pf = rho_plus_partial_fraction(&sys)?;
    println!("polynomial part degree: {}", pf.poly_part.len() - 1);
    println!("dual[0][0] = {}", dual.get(0, 0).render());
    Ok(())
}
