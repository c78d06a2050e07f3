//! Polynomials and rational functions in `s` with complex coefficients.
//!
//! Admittances of finite R-L circuits are rational in `s = jω`; this module
//! carries that structure. No GCD reduction is done, so common factors may
//! survive; the contract is pointwise correctness. Denominators are kept
//! monic.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::fmt_real;

/// Ascending-degree coefficients. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c · s^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        + rhs.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `num / den` with a nonzero, monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let lead = den.leading().ok_or(Error::Pole)?;
        let one = Complex64::new(1.0, 0.0);
        if lead == one {
            return Ok(Self { num, den });
        }
        let divide =
            |p: Polynomial| Polynomial::new(p.coeffs.into_iter().map(|c| c / lead).collect());
        let mut den = divide(den);
        // Division may leave the leading term one ulp away from 1.
        *den.coeffs.last_mut().expect("nonzero denominator") = one;
        Ok(Self {
            num: divide(num),
            den,
        })
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::constant(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
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

    /// Rescales so the denominator is monic. Already-normalized values come
    /// back unchanged.
    pub fn normalized(&self) -> Self {
        Self::new(self.num.clone(), self.den.clone()).expect("denominator is nonzero")
    }

    /// `num(s) / den(s)`; fails when `|den(s)| < 1e-300`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let d = self.den.eval(s);
        if !(d.norm() >= 1e-300) {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(s) / d)
    }
}

/// Pointwise sum (parallel combination).
pub fn rf_add(x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
    if x.den == y.den {
        return RationalFunction::new(&x.num + &y.num, x.den.clone()).expect("monic denominator");
    }
    let num = &(&x.num * &y.den) + &(&y.num * &x.den);
    let den = &x.den * &y.den;
    RationalFunction::new(num, den).expect("product of monic denominators")
}

/// `1 / (1/x + 1/y) = xy / (x + y)` (series combination).
pub fn rf_reciprocal_sum(x: &RationalFunction, y: &RationalFunction) -> Result<RationalFunction> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::SingularSeries);
    }
    // x = a/b, y = c/d  =>  ac / (ad + bc)
    let num = &x.num * &y.num;
    let den = &(&x.num * &y.den) + &(&y.num * &x.den);
    if den.is_zero() {
        return Err(Error::SingularSeries);
    }
    RationalFunction::new(num, den)
}

pub fn rf_eval(x: &RationalFunction, s: Complex64) -> Result<Complex64> {
    x.eval(s)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&fmt_coeff(*c))?;
            match k {
                0 => {}
                1 => f.write_str("*s")?,
                _ => write!(f, "*s^{k}")?,
            }
        }
        Ok(())
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        fmt_real(c.re)
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("({}{}{}j)", fmt_real(c.re), sign, fmt_real(c.im.abs()))
    }
}

/// `(c0 + c1*s + …)/(d0 + d1*s + …)`
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}
