//! Integrality test for the two-pole `S_3` system with couplings `m1`, `m2`.

use kz_rational::verify::{characteristic_polynomial, gate_matrix, rationality_gate};

fn main() -> kz_rational::Result<()> {
    for (m1, m2) in [(1, 1), (1, 2), (1, 3), (2, 2), (3, 5), (-3, 5)] {
        let v = rationality_gate(m1, m2);
        println!(
            "m1={m1:>2} m2={m2:>2}  lambda^2={:>3}  {}",
            v.lambda_squared, v.verdict
        );
    }
    println!(
        "char poly for (1, 2): {}",
        characteristic_polynomial(&gate_matrix(1, 2))?
    );
    Ok(())
}
