//! The field of rational functions Q(z), kept in canonical form: reduced,
//! with a monic denominator. Equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            Ok(RationalFunction { num, den })
        } else {
            let inv = lc.recip()?;
            Ok(RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            })
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    /// `c / (z - pole)`.
    pub fn simple_pole(c: Rational, pole: &Rational) -> Self {
        RationalFunction::new(Polynomial::constant(c), Polynomial::linear_root(pole))
            .expect("nonzero denominator")
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Quotient rule, reduced.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::Pole { at: z.clone() });
        }
        Ok(&self.num.eval(z) / &d)
    }

    /// Order of the pole at `c`; zero when `c` is not a pole.
    pub fn pole_order(&self, c: &Rational) -> usize {
        self.den.root_multiplicity(c)
    }

    /// Smallest `p` with a nonzero coefficient of `xi^p` in the expansion
    /// of `f(1/xi)`, i.e. `deg den - deg num`. `None` for the zero function.
    pub fn order_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().expect("nonzero denominator") as i64;
        Some(dd - dn)
    }

    /// Coefficients of `xi^p`, `p = lo..=hi`, in the Laurent expansion of
    /// `f(1/xi)` at `xi = 0`.
    pub fn laurent_at_infinity(&self, lo: i64, hi: i64) -> Vec<Rational> {
        let len = (hi - lo + 1).max(0) as usize;
        let Some(lead) = self.order_at_infinity() else {
            return vec![Rational::zero(); len];
        };
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        // reversed polynomials: num(1/xi) xi^dn and den(1/xi) xi^dd; den is monic
        let rnum: Vec<Rational> = (0..=dn).map(|k| self.num.coeff(dn - k)).collect();
        let rden: Vec<Rational> = (0..=dd).map(|k| self.den.coeff(dd - k)).collect();
        let terms = (hi - lead + 1).max(0) as usize;
        let mut series: Vec<Rational> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut s = rnum.get(k).cloned().unwrap_or_default();
            for j in 1..=k.min(dd) {
                s = &s - &(&rden[j] * &series[k - j]);
            }
            series.push(s);
        }
        (lo..=hi)
            .map(|p| {
                let k = p - lead;
                if k < 0 {
                    Rational::zero()
                } else {
                    series[k as usize].clone()
                }
            })
            .collect()
    }

    /// `num(z) / den(z)` with ascending-power polynomials.
    pub fn render(&self) -> String {
        if self.den.is_one() {
            self.num.to_string()
        } else {
            format!("({}) / ({})", self.num, self.den)
        }
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.render())
    }
}

fn combine(a: &RationalFunction, b: &RationalFunction, subtract: bool) -> RationalFunction {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if subtract { -b } else { b.clone() };
    }
    let g = a.den.gcd(&b.den).expect("nonzero denominators");
    let (a_cof, b_cof) = if g.is_one() {
        (b.den.clone(), a.den.clone())
    } else {
        (b.den.exact_div(&g).unwrap(), a.den.exact_div(&g).unwrap())
    };
    let left = &a.num * &a_cof;
    let right = &b.num * &b_cof;
    let num = if subtract {
        &left - &right
    } else {
        &left + &right
    };
    RationalFunction::new(num, &a.den * &a_cof).expect("nonzero denominator")
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        combine(self, rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        combine(self, rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den).unwrap();
        let g2 = rhs.num.gcd(&self.den).unwrap();
        let num = &self.num.exact_div(&g1).unwrap() * &rhs.num.exact_div(&g2).unwrap();
        let den = &self.den.exact_div(&g2).unwrap() * &rhs.den.exact_div(&g1).unwrap();
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
