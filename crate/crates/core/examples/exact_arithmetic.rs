//! Exact rationals, polynomials and rational functions.
//!
//! ```text
//! cargo run --example exact_arithmetic
//! ```

use kz_rational::{Polynomial, Rational, RationalFunction};

fn main() -> kz_rational::Result<()> {
    let a: Rational = "3/4".parse()?;
    let b = Rational::new(-5, 6)?;
    println!("{a} + {b} = {}", &a + &b);
    println!("{a} / {b} = {}", a.checked_div(&b)?);

    // (z^2 - 1) and (z^2 - 3z + 2) share the factor z - 1
    let p = Polynomial::from_ints(&[-1, 0, 1]);
    let r = Polynomial::from_ints(&[2, -3, 1]);
    println!("gcd({p}, {r}) = {}", p.gcd(&r)?);

    let f = RationalFunction::new(p, r)?;
    println!("f = {}", f.render());
    println!("f' = {}", f.derivative().render());
    println!("f(1/2) = {}", f.eval(&Rational::new(1, 2)?)?);
    println!("pole order of f at 2: {}", f.pole_order(&Rational::from(2)));
    Ok(())
}
