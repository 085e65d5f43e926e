//! Exact division, pseudo-remainders and multivariate GCD over Q.

use num_traits::Zero;

use super::mpoly::{mul_by_term, MPoly, Monomial};
use crate::error::{Error, Result};

/// Division with remainder by successive leading-term cancellation
/// (graded lex). Terms of the dividend whose monomial is not divisible by
/// `lt(f)` move to the remainder.
pub fn div_rem(p: &MPoly, f: &MPoly) -> Result<(MPoly, MPoly)> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (p, f) = MPoly::align(p, f);
    let vars = p.vars().clone();
    let (lm, lc) = {
        let (m, c) = f.leading_term().expect("nonzero");
        (m.clone(), c.clone())
    };
    let mut q = MPoly::zero(vars.clone());
    let mut rem = MPoly::zero(vars.clone());
    let mut r = p;
    while let Some((m, c)) = r.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        match m.div(&lm) {
            Some(quot_m) => {
                let coef = &c / &lc;
                let t = MPoly::from_terms(vars.clone(), [(quot_m.exponents().to_vec(), coef.clone())]);
                q = &q + &t;
                r = &r - &mul_by_term(&f, &quot_m, &coef);
            }
            None => {
                let t = MPoly::from_terms(vars.clone(), [(m.exponents().to_vec(), c)]);
                rem = &rem + &t;
                r = &r - &t;
            }
        }
    }
    Ok((q, rem))
}

/// Quotient `p / f`, failing with the remainder as witness unless the
/// division is exact.
pub fn exact_divide(p: &MPoly, f: &MPoly) -> Result<MPoly> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if f.is_constant() {
        return Ok(p.scale(&(num_rational::BigRational::from_integer(1.into()) / f.constant_term())));
    }
    let (p, f) = MPoly::align(p, f);
    let vars = p.vars().clone();
    let (lm, lc) = {
        let (m, c) = f.leading_term().expect("nonzero");
        (m.clone(), c.clone())
    };
    let mut q = MPoly::zero(vars.clone());
    let mut r = p;
    while let Some((m, c)) = r.leading_term() {
        let Some(quot_m) = m.div(&lm) else {
            return Err(Error::NonExactDivision {
                remainder: r.to_string(),
            });
        };
        let coef = c / &lc;
        q = &q + &MPoly::from_terms(vars.clone(), [(quot_m.exponents().to_vec(), coef.clone())]);
        r = &r - &mul_by_term(&f, &quot_m, &coef);
    }
    Ok(q)
}

/// Leading coefficient of `p` viewed as a polynomial in `var`.
pub fn lead_coeff_in(p: &MPoly, var: &str) -> MPoly {
    p.coeffs_in(var).pop().expect("at least one coefficient")
}

/// Pseudo-remainder `prem(a, b)` with respect to `var`:
/// `lc(b)^(deg a - deg b + 1) · a = q·b + r`, `deg r < deg b`.
pub fn prem(a: &MPoly, b: &MPoly, var: &str) -> MPoly {
    let (a, b) = MPoly::align(a, b);
    let db = b.degree_in(var);
    let da = a.degree_in(var);
    if a.is_zero() || da < db {
        return a;
    }
    let lcb = lead_coeff_in(&b, var);
    let vars = a.vars().clone();
    let vi = a.var_index(var);
    let mut r = a;
    let mut e = da - db + 1;
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = lead_coeff_in(&r, var);
        let shift = match vi {
            Some(i) => {
                let mut ex = vec![0u32; vars.len()];
                ex[i] = dr - db;
                Monomial::new(ex)
            }
            None => Monomial::one(vars.len()),
        };
        let t = mul_by_term(&lcr, &shift, &num_rational::BigRational::from_integer(1.into()));
        r = &(&lcb * &r) - &(&t * &b);
        e -= 1;
    }
    if e > 0 {
        r = &lcb.pow(e) * &r;
    }
    r
}

/// GCD of the coefficients of `p` with respect to `var` (a polynomial free
/// of `var`), normalized primitive.
pub fn content_in(p: &MPoly, var: &str) -> MPoly {
    let mut g = MPoly::zero(p.vars().clone());
    for c in p.coeffs_in(var).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// `p / content_in(p, var)`, normalized primitive.
pub fn primitive_part_in(p: &MPoly, var: &str) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    exact_divide(p, &c).expect("content divides").primitive()
}

/// Greatest common divisor over Q, normalized primitive (integer
/// coefficients, unit content, positive leading coefficient). `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let (a, b) = MPoly::align(a, b);
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let vars = a.vars().clone();
    if a.is_constant() || b.is_constant() {
        return MPoly::one(vars);
    }
    // Cheap exits: one divides the other.
    if a.num_terms() <= b.num_terms() {
        if exact_divide(&b, &a).is_ok() {
            return a.primitive();
        }
    } else if exact_divide(&a, &b).is_ok() {
        return b.primitive();
    }
    // Main variable: the used variable of smallest combined degree keeps
    // the remainder sequence short.
    let v = vars
        .iter()
        .filter(|v| a.uses_var(v) || b.uses_var(v))
        .min_by_key(|v| {
            let (da, db) = (a.degree_in(v), b.degree_in(v));
            if da == 0 || db == 0 {
                0
            } else {
                da + db
            }
        })
        .expect("non-constant")
        .clone();
    if !a.uses_var(&v) {
        return gcd(&a, &content_in(&b, &v));
    }
    if !b.uses_var(&v) {
        return gcd(&content_in(&a, &v), &b);
    }
    let ca = content_in(&a, &v);
    let cb = content_in(&b, &v);
    let c = gcd(&ca, &cb);
    let mut p = exact_divide(&a, &ca).expect("content divides");
    let mut q = exact_divide(&b, &cb).expect("content divides");
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            return c.primitive();
        }
        p = q;
        q = primitive_part_in(&r, &v);
    }
    (&c * &primitive_part_in(&q, &v)).primitive()
}

/// Divides out every power of `f` from `p`; returns the cofactor and the
/// multiplicity removed.
pub fn remove_factor(p: &MPoly, f: &MPoly) -> (MPoly, u32) {
    let mut cur = p.clone();
    let mut k = 0;
    if f.is_constant() || p.is_zero() {
        return (cur, 0);
    }
    while let Ok(q) = exact_divide(&cur, f) {
        cur = q;
        k += 1;
    }
    (cur, k)
}

/// Square-free part with respect to `var`: `p / gcd(p, dp/dvar)`.
pub fn squarefree_in(p: &MPoly, var: &str) -> MPoly {
    let d = p.derivative(var);
    if d.is_zero() {
        return p.primitive();
    }
    let g = gcd(p, &d);
    exact_divide(p, &g).expect("gcd divides").primitive()
}

/// True when `p` is a nonzero constant.
pub fn is_unit(p: &MPoly) -> bool {
    p.is_constant() && !p.constant_term().is_zero()
}
