//! Univariate polynomials over the Gaussian rationals Q(i).
//!
//! Sampling draws coordinates from a dyadic complex grid, so after
//! substitution the remaining univariate problem has exact Q(i)
//! coefficients. Keeping them exact lets root polishing evaluate residuals
//! without cancellation error.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::{rat_to_f64, Cx, MPoly};
use crate::error::{Error, Result};

pub type Qi = Complex<BigRational>;

pub fn qi_zero() -> Qi {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn qi_real(r: BigRational) -> Qi {
    Complex::new(r, BigRational::zero())
}

/// Exact Q(i) value of a finite double-precision complex number.
pub fn qi_from_cx(c: Cx) -> Option<Qi> {
    Some(Complex::new(
        BigRational::from_float(c.re)?,
        BigRational::from_float(c.im)?,
    ))
}

pub fn qi_to_cx(q: &Qi) -> Cx {
    Cx::new(rat_to_f64(&q.re), rat_to_f64(&q.im))
}

/// Coefficients in ascending powers; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct QiPoly {
    coeffs: Vec<Qi>,
}

impl QiPoly {
    pub fn new(mut coeffs: Vec<Qi>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QiPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Qi] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: &Qi) -> Qi {
        let mut acc = qi_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> QiPoly {
        QiPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn to_cx(&self) -> Vec<Cx> {
        self.coeffs.iter().map(qi_to_cx).collect()
    }

    /// Restricts `p` to a line: every variable except `var` is replaced by
    /// the exact value returned by `lookup`.
    pub fn from_mpoly<F>(p: &MPoly, var: &str, lookup: F) -> Result<QiPoly>
    where
        F: Fn(&str) -> Option<Qi>,
    {
        let vars = p.vars().clone();
        let vi = p.var_index(var);
        let mut vals: Vec<Option<Qi>> = Vec::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if Some(i) == vi {
                vals.push(None);
                continue;
            }
            let used = p.uses_var(v);
            match lookup(v) {
                Some(x) => vals.push(Some(x)),
                None if !used => vals.push(Some(qi_zero())),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        // Cache powers of each substituted value.
        let mut powers: Vec<Vec<Qi>> = Vec::with_capacity(vars.len());
        for (i, val) in vals.iter().enumerate() {
            let d = p.degree_in(&vars[i]) as usize;
            let mut pw = vec![qi_real(BigRational::one())];
            if let Some(x) = val {
                for k in 1..=d {
                    let next = &pw[k - 1] * x;
                    pw.push(next);
                }
            }
            powers.push(pw);
        }
        let deg = vi.map_or(0, |_| p.degree_in(var) as usize);
        let mut out = vec![qi_zero(); deg + 1];
        for (m, c) in p.terms() {
            let mut t = qi_real(c.clone());
            let mut k = 0;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if Some(i) == vi {
                    k = e as usize;
                } else {
                    t *= &powers[i][e as usize];
                }
            }
            out[k] = &out[k] + t;
        }
        Ok(QiPoly::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, vars_of};

    #[test]
    fn restriction_matches_direct_evaluation() {
        let v = vars_of(&["x", "y"]);
        let p = MPoly::parse("x^2*y + 3*x*y^2 - 1", &v).unwrap();
        let x0 = Complex::new(rat(2), rat(1));
        let q = QiPoly::from_mpoly(&p, "y", |n| (n == "x").then(|| x0.clone())).unwrap();
        assert_eq!(q.degree(), 2);
        let y0 = Complex::new(rat(-1), rat(3));
        let direct = {
            let x2 = &x0 * &x0;
            &x2 * &y0 + &x0 * &y0 * &y0 * qi_real(rat(3)) - qi_real(rat(1))
        };
        assert_eq!(q.eval(&y0), direct);
    }

    #[test]
    fn derivative_of_cube() {
        let p = QiPoly::new(vec![qi_zero(), qi_zero(), qi_zero(), qi_real(rat(2))]);
        assert_eq!(p.derivative().coeffs()[2], qi_real(rat(6)));
    }
}
