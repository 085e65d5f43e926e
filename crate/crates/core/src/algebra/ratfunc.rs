//! Rational functions as numerator/denominator pairs.
//!
//! Arithmetic does not cancel common factors on its own (GCDs are costly);
//! call [`RatFunc::cancel`] when sizes matter. Every constructor normalizes
//! the denominator to integer coefficients with unit content and a positive
//! leading coefficient, moving the scale into the numerator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::{exact_divide, gcd};
use super::mpoly::{Cx, MPoly, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = MPoly::align(&num, &den);
        Ok(RatFunc::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> RatFunc {
        if num.is_zero() {
            let vars = num.vars().clone();
            return RatFunc {
                num,
                den: MPoly::one(vars),
            };
        }
        let pd = den.primitive();
        // den = k · pd  ⇒  num/den = (num/k)/pd
        let (_, lc_d) = den.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let k = lc_d / pd.leading_coeff();
        RatFunc {
            num: num.scale(&(BigRational::one() / k)),
            den: pd,
        }
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        let vars = p.vars().clone();
        RatFunc {
            num: p,
            den: MPoly::one(vars),
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial, if the denominator is constant.
    pub fn as_poly(&self) -> Option<MPoly> {
        if self.den.is_constant() {
            Some(self.num.scale(&(BigRational::one() / self.den.constant_term())))
        } else {
            None
        }
    }

    pub fn with_vars(&self, vars: &Vars) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.with_vars(vars)?,
            den: self.den.with_vars(vars)?,
        })
    }

    pub fn uses_var(&self, v: &str) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    /// Removes the GCD of numerator and denominator.
    pub fn cancel(&self) -> RatFunc {
        if self.num.is_zero() || self.den.is_constant() {
            return self.clone();
        }
        let g = gcd(&self.num, &self.den);
        if g.is_constant() {
            return self.clone();
        }
        RatFunc::normalized(
            exact_divide(&self.num, &g).expect("gcd divides numerator"),
            exact_divide(&self.den, &g).expect("gcd divides denominator"),
        )
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc::normalized(self.num.pow(k), self.den.pow(k))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Numeric value; a vanishing denominator (relative to the numerator,
    /// `|den| ≤ tol·(1+|num|)`) is reported as a pole.
    pub fn eval(&self, point: &[Cx], pole_tol: f64) -> Result<Cx> {
        let n = self.num.eval(point)?;
        let d = self.den.eval(point)?;
        if d.norm() <= pole_tol * (1.0 + n.norm()) {
            return Err(Error::Pole {
                context: format!("denominator {} vanishes", self.den),
            });
        }
        Ok(n / d)
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval_exact(point)?;
        if d.is_zero() {
            return Err(Error::Pole {
                context: format!("denominator {} vanishes exactly", self.den),
            });
        }
        Ok(self.num.eval_exact(point)? / d)
    }

    /// Substitutes `name := value`.
    pub fn subst(&self, name: &str, value: &RatFunc) -> RatFunc {
        if !self.uses_var(name) {
            return self.clone();
        }
        let a = compose_poly(&self.num, name, value);
        let b = compose_poly(&self.den, name, value);
        a.div(&b).expect("substituted denominator is not identically zero")
    }

    /// Substitutes rational values for some variables.
    pub fn specialize<F>(&self, lookup: F) -> Result<RatFunc>
    where
        F: Fn(&str) -> Option<BigRational>,
    {
        RatFunc::new(self.num.specialize(&lookup), self.den.specialize(&lookup))
    }

    pub fn rename(&self, map: &[(&str, &str)]) -> RatFunc {
        let n = self.num.rename(map);
        let d = self.den.rename(map);
        let (n, d) = MPoly::align(&n, &d);
        RatFunc { num: n, den: d }
    }

    /// Exact equality as rational functions (cross-multiplication).
    pub fn equals(&self, other: &RatFunc) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

/// Evaluates polynomial `p` with `name := value`, as a rational function
/// with denominator `den(value)^deg`.
pub fn compose_poly(p: &MPoly, name: &str, value: &RatFunc) -> RatFunc {
    let deg = p.degree_in(name);
    if deg == 0 {
        return RatFunc::from_poly(p.clone());
    }
    let (p, vn) = MPoly::align(p, value.num());
    let vd = value.den().with_vars(p.vars()).expect("aligned");
    let coeffs = p.coeffs_in(name);
    // Σ c_k · num^k · den^(deg-k)
    let mut num_pows = vec![MPoly::one(p.vars().clone())];
    let mut den_pows = vec![MPoly::one(p.vars().clone())];
    for k in 1..=deg as usize {
        num_pows.push(&num_pows[k - 1] * &vn);
        den_pows.push(&den_pows[k - 1] * &vd);
    }
    let mut acc = MPoly::zero(p.vars().clone());
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &(&(c * &num_pows[k]) * &den_pows[deg as usize - k]);
    }
    RatFunc::new(acc, den_pows[deg as usize].clone()).expect("nonzero denominator")
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            let (n, d) = MPoly::align(&(&self.num + &rhs.num), &self.den);
            return RatFunc::normalized(n, d);
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let d = &self.den * &rhs.den;
        let (n, d) = MPoly::align(&n, &d);
        RatFunc::normalized(n, d)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let n = &self.num * &rhs.num;
        let d = &self.den * &rhs.den;
        let (n, d) = MPoly::align(&n, &d);
        RatFunc::normalized(n, d)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
