//! Exact polynomial arithmetic and the numeric boundary (evaluation, roots).

mod gcd;
mod mpoly;
mod parse;
mod qi;
mod ratfunc;
mod resultant;
mod roots;

pub use gcd::{
    content_in, div_rem, exact_divide, gcd, is_unit, lead_coeff_in, prem, primitive_part_in,
    remove_factor, squarefree_in,
};
pub use mpoly::{rat, rat_frac, rat_to_f64, vars_of, Cx, MPoly, Monomial, Vars};
pub use parse::{parse_poly, parse_ratfunc};
pub use qi::{qi_from_cx, qi_real, qi_to_cx, qi_zero, Qi, QiPoly};
pub use ratfunc::{compose_poly, RatFunc};
pub use resultant::{determinant, resultant, sylvester_matrix};
pub use roots::{polish_exact, roots, roots_exact, sort_roots};

/// Default absolute residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Parses a rational number such as `-3/4` or `7`.
pub fn parse_rational(s: &str) -> crate::Result<num_rational::BigRational> {
    let s = s.trim();
    let bad = || crate::Error::Invalid(format!("not a rational number: `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&d) {
        return Err(bad());
    }
    Ok(num_rational::BigRational::new(n, d))
}

/// Prints a rational the way [`parse_rational`] reads it.
pub fn fmt_rational(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
