//! Builds and verifies the fundamental matrix for n = 3..7 on a fixed set
//! of poles, printing the verification flags and timings.

use std::time::Instant;

use kz_rational::builder::build_fundamental;
use kz_rational::rational::q;
use kz_rational::verify::verify_partial_fraction;
use kz_rational::{KZSystem, Rho};

fn main() -> kz_rational::Result<()> {
    let pool = [q(0, 1), q(1, 1), q(-3, 2), q(5, 7), q(4, 1), q(-2, 9)];
    for n in 3..=7 {
        let sys = KZSystem::new(n, pool[..n - 1].to_vec(), Rho::Minus)?;
        let start = Instant::now();
        let sol = build_fundamental(&sys)?.as_partial_fraction();
        let report = verify_partial_fraction(&sys, &sol)?;
        println!(
            "n={n}: residual={} det={:?} poles={} moments={} ({:.1?})",
            report.ode_residual_zero,
            report.det_nonzero,
            report.pole_orders_ok,
            report.moments_ok,
            start.elapsed()
        );
    }
    Ok(())
}
