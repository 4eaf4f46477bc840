//! The three-point case `n = 3`, poles at 0 and 1: every column of the
//! fundamental matrix, its determinant and the exact residual.

use kz_rational::builder::{build_fundamental, build_y1, build_yj, build_yn};
use kz_rational::rational::q;
use kz_rational::verify::ode_residual;
use kz_rational::{KZSystem, Rho};

fn main() -> kz_rational::Result<()> {
    let sys = KZSystem::new(3, vec![q(0, 1), q(1, 1)], Rho::Minus)?;

    for (name, y) in [
        ("Y1", build_y1(&sys)?),
        ("Y2", build_yj(&sys, 2)?),
        ("Y3", build_yn(&sys)?),
    ] {
        println!("{name}:");
        for (k, l) in y.column_residues(0).iter().enumerate() {
            let l: Vec<String> = l.iter().map(|x| x.to_string()).collect();
            println!("  L{} = [{}]", k + 1, l.join(", "));
        }
        for f in y.value().entries() {
            println!("  {}", f.render());
        }
    }

    let w = build_fundamental(&sys)?.matrix();
    println!("det W = {}", w.determinant()?.render());
    println!("residual is zero: {}", ode_residual(&sys, &w)?.is_zero());
    Ok(())
}
