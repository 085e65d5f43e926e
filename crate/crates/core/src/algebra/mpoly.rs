//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`] under graded
//! lexicographic order, so iteration order (and therefore printing and
//! leading-term selection) is deterministic. Each polynomial carries its own
//! ordered variable list; binary operations work over the union of the two
//! lists, with the left operand's variables first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Complex double used at every numeric boundary.
pub type Cx = Complex64;

/// Exponent vector. Trailing zeros are insignificant for comparison.
#[derive(Clone, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn trimmed(&self) -> &[u32] {
        let end = self.0.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        &self.0[..end]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (self.exp(i), other.exp(i));
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the first differing
    /// exponent (earlier variables weigh more).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Shared, ordered variable list.
pub type Vars = Arc<[String]>;

pub fn vars_of(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// A polynomial in `vars` with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero(vars: Vars) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: BigRational) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(vars: Vars) -> Self {
        MPoly::constant(vars, BigRational::one())
    }

    pub fn var(vars: Vars, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(Monomial(e), BigRational::one());
        Ok(p)
    }

    /// Builds from `(exponents, coefficient)` pairs; zero coefficients are
    /// dropped and duplicate monomials summed.
    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn uses_var(&self, name: &str) -> bool {
        self.degree_in(name) > 0
    }

    /// Names of the variables that actually occur, in ring order.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-expresses the polynomial over another variable list, which must
    /// contain every variable that occurs.
    pub fn with_vars(&self, vars: &Vars) -> Result<MPoly> {
        if Arc::ptr_eq(&self.vars, vars) || self.vars[..] == vars[..] {
            return Ok(MPoly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|m| m.exp(i) > 0) {
                        return Err(Error::UnknownVariable(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MPoly::zero(vars.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    e[*j] = m.exp(i);
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Union variable list: `a`'s variables, then any new ones from `b`.
    pub fn union_vars(a: &Vars, b: &Vars) -> Vars {
        if Arc::ptr_eq(a, b) || a[..] == b[..] {
            return a.clone();
        }
        let mut v: Vec<String> = a.to_vec();
        for name in b.iter() {
            if !v.contains(name) {
                v.push(name.clone());
            }
        }
        v.into()
    }

    pub fn align(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        let vars = MPoly::union_vars(&a.vars, &b.vars);
        (
            a.with_vars(&vars).expect("union contains all variables"),
            b.with_vars(&vars).expect("union contains all variables"),
        )
    }

    /// Drops variables that do not occur.
    pub fn compact(&self) -> MPoly {
        let used = self.used_vars();
        let vars: Vars = used.into();
        self.with_vars(&vars).expect("used variables are present")
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, v)| (mm.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `name`: entry `k` multiplies `name^k`.
    /// The coefficient polynomials keep the full variable list.
    pub fn coeffs_in(&self, name: &str) -> Vec<MPoly> {
        let Some(i) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(name) as usize;
        let mut out = vec![MPoly::zero(self.vars.clone()); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exp(i) as usize;
            let mut e = m.0.clone();
            e[i] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(vars: &Vars, name: &str, coeffs: &[MPoly]) -> Result<MPoly> {
        let x = MPoly::var(vars.clone(), name)?;
        let mut acc = MPoly::zero(vars.clone());
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + &c.with_vars(vars)?;
        }
        Ok(acc)
    }

    /// Substitutes `name := value`.
    pub fn subst(&self, name: &str, value: &MPoly) -> MPoly {
        if !self.uses_var(name) {
            return self.clone();
        }
        let (me, v) = MPoly::align(self, value);
        let coeffs = me.coeffs_in(name);
        let mut acc = MPoly::zero(me.vars.clone());
        for c in coeffs.iter().rev() {
            acc = &(&acc * &v) + c;
        }
        acc
    }

    pub fn derivative(&self, name: &str) -> MPoly {
        let Some(i) = self.var_index(name) else {
            return MPoly::zero(self.vars.clone());
        };
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let k = m.exp(i);
            if k > 0 {
                let mut e = m.0.clone();
                e[i] -= 1;
                out.add_term(Monomial(e), c * rat(k as i64));
            }
        }
        out
    }

    fn check_arity<T>(&self, point: &[T]) -> Result<()> {
        let needed = (0..self.vars.len())
            .rev()
            .find(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .map_or(0, |i| i + 1);
        if point.len() < needed {
            return Err(Error::Arity {
                expected: needed,
                got: point.len(),
            });
        }
        Ok(())
    }

    /// Numeric value at `point` (indexed by this polynomial's variables).
    pub fn eval(&self, point: &[Cx]) -> Result<Cx> {
        self.check_arity(point)?;
        let mut powers: Vec<Vec<Cx>> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let d = self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0) as usize;
            let base = point.get(i).copied().unwrap_or(Cx::new(0.0, 0.0));
            let mut pw = Vec::with_capacity(d + 1);
            pw.push(Cx::new(1.0, 0.0));
            for k in 1..=d {
                pw.push(pw[k - 1] * base);
            }
            powers.push(pw);
        }
        let mut acc = Cx::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Cx::new(rat_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= powers[i][e as usize];
                }
            }
            acc += t;
        }
        if !acc.re.is_finite() || !acc.im.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(acc)
    }

    /// Value together with the largest term magnitude, the natural scale for
    /// judging whether a residual is "zero".
    pub fn eval_with_scale(&self, point: &[Cx]) -> Result<(Cx, f64)> {
        self.check_arity(point)?;
        let mut acc = Cx::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for (m, c) in &self.terms {
            let mut t = Cx::new(rat_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[i].powu(e);
                }
            }
            scale = scale.max(t.norm());
            acc += t;
        }
        if !acc.re.is_finite() || !acc.im.is_finite() || !scale.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok((acc, scale))
    }

    /// Numeric value with variables looked up by name.
    pub fn eval_named<F>(&self, lookup: F) -> Result<Cx>
    where
        F: Fn(&str) -> Option<Cx>,
    {
        let point = self.named_point(&lookup)?;
        self.eval(&point)
    }

    fn named_point<T: Clone + Zero, F>(&self, lookup: &F) -> Result<Vec<T>>
    where
        F: Fn(&str) -> Option<T>,
    {
        let mut pt = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|m| m.exp(i) > 0);
            match lookup(v) {
                Some(x) => pt.push(x),
                None if !used => pt.push(T::zero()),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        Ok(pt)
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        self.check_arity(point)?;
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_exact_named<F>(&self, lookup: F) -> Result<BigRational>
    where
        F: Fn(&str) -> Option<BigRational>,
    {
        let point = self.named_point(&lookup)?;
        self.eval_exact(&point)
    }

    /// Substitutes rational values for some variables, keeping the rest.
    pub fn specialize<F>(&self, lookup: F) -> MPoly
    where
        F: Fn(&str) -> Option<BigRational>,
    {
        let vals: Vec<Option<BigRational>> = self.vars.iter().map(|v| lookup(v)).collect();
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut e = m.0.clone();
            for (i, val) in vals.iter().enumerate() {
                if let Some(val) = val {
                    if e[i] > 0 {
                        coef *= num_traits::pow(val.clone(), e[i] as usize);
                        e[i] = 0;
                    }
                }
            }
            out.add_term(Monomial(e), coef);
        }
        out
    }

    /// Renames variables; names not in `map` are kept.
    pub fn rename(&self, map: &[(&str, &str)]) -> MPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                map.iter()
                    .find(|(from, _)| from == v)
                    .map(|(_, to)| to.to_string())
                    .unwrap_or_else(|| v.clone())
            })
            .collect();
        // Merging may produce duplicates; rebuild through the unique list.
        let mut uniq: Vec<String> = Vec::new();
        for v in &vars {
            if !uniq.contains(v) {
                uniq.push(v.clone());
            }
        }
        let uvars: Vars = uniq.clone().into();
        let mut out = MPoly::zero(uvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; uniq.len()];
            for (i, v) in vars.iter().enumerate() {
                let j = uniq.iter().position(|u| u == v).unwrap();
                e[j] += m.exp(i);
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Scales to integer coefficients with unit content and a positive
    /// leading coefficient. Returns the zero polynomial unchanged.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = BigRational::new(den_lcm, num_gcd);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// `p ≡ q` iff `p·lc(q) = q·lc(p)`.
    pub fn equal_up_to_scale(&self, other: &MPoly) -> bool {
        let (a, b) = MPoly::align(self, other);
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        a.scale(&b.leading_coeff()) == b.scale(&a.leading_coeff())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rat_to_f64(c).abs())
            .fold(0.0, f64::max)
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars[..] == other.vars[..] {
            return self.terms == other.terms;
        }
        let (a, b) = MPoly::align(self, other);
        a.terms == b.terms
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        if self.vars[..] != rhs.vars[..] {
            let (a, b) = MPoly::align(self, rhs);
            return &a + &b;
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        if self.vars[..] != rhs.vars[..] {
            let (a, b) = MPoly::align(self, rhs);
            return &a - &b;
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.vars[..] != rhs.vars[..] {
            let (a, b) = MPoly::align(self, rhs);
            return &a * &b;
        }
        let mut out = MPoly::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Multiplies `p` by the monomial-term `c·m` (used by division routines).
pub(crate) fn mul_by_term(p: &MPoly, m: &Monomial, c: &BigRational) -> MPoly {
    p.mul_term(m, c)
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MPoly {
    /// Canonical expanded form: terms in descending graded-lex order,
    /// explicit `*`, `^` powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        vars_of(&["x", "y"])
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::new(vec![1]));
    }

    #[test]
    fn eval_simple_polynomial() {
        let x = MPoly::var(xy(), "x").unwrap();
        let y = MPoly::var(xy(), "y").unwrap();
        let p = &(&x * &x) + &(&MPoly::constant(xy(), rat(2)) * &(&x * &y));
        let v = p.eval(&[Cx::new(1.0, 0.0), Cx::new(2.0, 0.0)]).unwrap();
        assert_eq!(v, Cx::new(5.0, 0.0));
    }

    #[test]
    fn zero_polynomial_evaluates_to_zero() {
        let p = MPoly::zero(xy());
        assert_eq!(p.eval(&[]).unwrap(), Cx::new(0.0, 0.0));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let y = MPoly::var(xy(), "y").unwrap();
        assert!(matches!(
            y.eval(&[Cx::new(1.0, 0.0)]),
            Err(Error::Arity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let x = MPoly::var(xy(), "x").unwrap().pow(40);
        assert_eq!(x.eval(&[Cx::new(1e10, 0.0)]), Err(Error::NonFinite));
    }

    #[test]
    fn coefficient_views_round_trip() {
        let x = MPoly::var(xy(), "x").unwrap();
        let y = MPoly::var(xy(), "y").unwrap();
        let p = &(&(&x * &y) * &y) + &(&x - &MPoly::one(xy()));
        let cs = p.coeffs_in("y");
        assert_eq!(cs.len(), 3);
        assert_eq!(MPoly::from_coeffs_in(&xy(), "y", &cs).unwrap(), p);
    }

    #[test]
    fn mixed_variable_lists_align() {
        let x = MPoly::var(vars_of(&["x"]), "x").unwrap();
        let y = MPoly::var(vars_of(&["y"]), "y").unwrap();
        let s = &x + &y;
        assert_eq!(s.vars().len(), 2);
        assert_eq!(s.to_string(), "x + y");
    }

    #[test]
    fn primitive_normalizes_content_and_sign() {
        let x = MPoly::var(xy(), "x").unwrap();
        let p = (&x - &MPoly::one(xy())).scale(&rat_frac(-2, 3));
        assert_eq!(p.primitive().to_string(), "x - 1");
    }
}
