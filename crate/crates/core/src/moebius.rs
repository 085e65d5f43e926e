//! The Möbius family `x ↦ h(x + a)/(1 + b x)`: parameter dynamics under
//! composition, the period generators derived from them, and the matching
//! recurrence polynomials `F(x, X)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{
    gcd, parse_poly, remove_factor, roots_exact, vars_of, Cx, MPoly, Qi, QiPoly, RatFunc,
    Vars, DEFAULT_TOL,
};
use crate::error::{Error, Result};

/// Parameters after some number of compositions:
/// `X⁽ⁿ⁾ = hₙ (x + aₙ)/(1 + bₙ x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusState {
    pub a: RatFunc,
    pub b: RatFunc,
    pub h: RatFunc,
}

pub fn param_vars() -> Vars {
    vars_of(&["a", "b", "h"])
}

impl MoebiusState {
    /// `(a, b, h)` as symbols.
    pub fn symbolic() -> MoebiusState {
        let v = param_vars();
        let s = |n: &str| RatFunc::from_poly(MPoly::var(v.clone(), n).unwrap());
        MoebiusState {
            a: s("a"),
            b: s("b"),
            h: s("h"),
        }
    }

    pub fn constant(a: BigRational, b: BigRational, h: BigRational) -> MoebiusState {
        let v = param_vars();
        let c = |x: BigRational| RatFunc::from_poly(MPoly::constant(v.clone(), x));
        MoebiusState {
            a: c(a),
            b: c(b),
            h: c(h),
        }
    }
}

/// One more composition with the base map.
pub fn param_step(base: &MoebiusState, s: &MoebiusState) -> Result<MoebiusState> {
    let one = RatFunc::from_poly(MPoly::one(param_vars()));
    let d1 = &s.h + &(&base.a * &s.b);
    let d2 = &one + &(&(&base.b * &s.h) * &s.a);
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::DegenerateFamily("a parameter-update denominator vanishes identically".into()));
    }
    let a = (&base.a + &(&s.a * &s.h)).div(&d1)?.cancel();
    let b = (&s.b + &(&base.b * &s.h)).div(&d2)?.cancel();
    let h = (&base.h * &d1).div(&d2)?.cancel();
    Ok(MoebiusState { a, b, h })
}

/// Constant term positive, integer coefficients with content 1.
pub fn normalize(p: &MPoly) -> MPoly {
    let q = p.primitive();
    if q.constant_term() < BigRational::zero() {
        -&q
    } else {
        q
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (2..n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Numerators of `a⁽ⁿ⁺¹⁾ − a`, `b⁽ⁿ⁺¹⁾ − b`, `h⁽ⁿ⁺¹⁾ − h` for symbolic
/// `(a, b, h)`.
pub fn periodicity_numerators(n: u32) -> Result<[MPoly; 3]> {
    let base = MoebiusState::symbolic();
    let mut s = base.clone();
    for _ in 0..n {
        s = param_step(&base, &s)?;
    }
    Ok([
        (&s.a - &base.a).cancel().num().clone(),
        (&s.b - &base.b).cancel().num().clone(),
        (&s.h - &base.h).cancel().num().clone(),
    ])
}

/// The period-`n` generator in `(a, b, h)`: common factor of the three
/// periodicity conditions with the trivial factors (`a`, `b`, `h`, `h − 1`,
/// `1 − ab`) and the generators of proper divisors removed.
pub fn derive_gamma(n: u32) -> Result<MPoly> {
    if !(2..=8).contains(&n) {
        return Err(Error::Invalid(format!("period {n} outside 2..=8")));
    }
    let nums = periodicity_numerators(n)?;
    let nonzero: Vec<&MPoly> = nums.iter().filter(|p| !p.is_zero()).collect();
    let mut g = match nonzero.as_slice() {
        [] => return Err(Error::DegenerateFamily("all periodicity conditions vanish identically".into())),
        [first, rest @ ..] => rest.iter().fold((*first).clone(), |acc, p| gcd(&acc, p)),
    };
    let v = param_vars();
    let mut strip: Vec<MPoly> = ["a", "b", "h", "h - 1", "1 - a*b"]
        .iter()
        .map(|t| parse_poly(t, &v).unwrap())
        .collect();
    for d in divisors(n) {
        strip.push(derive_gamma(d)?);
    }
    for f in &strip {
        g = remove_factor(&g, f).0;
    }
    if g.is_constant() {
        return Err(Error::NoCommonFactor {
            numerators: nums.iter().map(|p| p.to_string()).collect(),
        });
    }
    Ok(normalize(&g))
}

/// `(x + a)^k · γ(a, b, X(1 + bx)/(x + a))` with `k = deg_h γ`, over `[x, X]`.
pub fn recurrence_from_gamma(gamma: &MPoly, a: &BigRational, b: &BigRational) -> Result<MPoly> {
    if (a * b).is_one() {
        return Err(Error::DegenerateParameters {
            map: "moebius2d".into(),
            reason: "ab = 1".into(),
        });
    }
    let g = gamma.specialize(|n| match n {
        "a" => Some(a.clone()),
        "b" => Some(b.clone()),
        _ => None,
    });
    let xv = vars_of(&["x", "X"]);
    let text = format!("X*(1 + ({b})*x)/(x + ({a}))");
    let h = crate::algebra::parse_ratfunc(&text, &xv)?;
    let r = crate::algebra::compose_poly(&g.with_vars(&vars_of(&["h"]))?, "h", &h);
    // compose_poly clears exactly den(h)^deg_h, i.e. (x + a)^k.
    let num = r.num().with_vars(&xv)?;
    let scale = r.den().leading_coeff();
    Ok(normalize(&num.scale(&(BigRational::one() / scale))))
}

/// `F⁽ⁿ⁾(x, X)` for constant `a`, `b`, from the derived generator.
pub fn recurrence_f(n: u32, a: &BigRational, b: &BigRational) -> Result<MPoly> {
    recurrence_from_gamma(&derive_gamma(n)?, a, b)
}

/// Roots `X` of `F(x0, X)`, with exact polishing.
pub fn recurrence_roots(f: &MPoly, x0: &Qi) -> Result<Vec<Cx>> {
    let up = QiPoly::from_mpoly(f, "X", |n| (n == "x").then(|| x0.clone()))?;
    roots_exact(&up, DEFAULT_TOL)
}

/// `μ± = (1 + ab ± √((3 + ab)(ab − 1)))/2`.
pub fn mu_pm(a: Cx, b: Cx) -> (Cx, Cx) {
    let ab = a * b;
    let s = ((3.0 + ab) * (ab - 1.0)).sqrt();
    ((1.0 + ab + s) / 2.0, (1.0 + ab - s) / 2.0)
}

/// Orbit started by the branch `x0 → x1`: the Möbius factor `h` implied by
/// the first step is kept for the rest of the orbit.
pub fn follow_branch(a: Cx, b: Cx, x0: Cx, x1: Cx, n: usize) -> Result<Vec<Cx>> {
    let den = x0 + a;
    if den.norm() <= 1e-12 * (1.0 + x0.norm()) {
        return Err(Error::Pole {
            context: "x + a".into(),
        });
    }
    let h = x1 * (1.0 + b * x0) / den;
    let mut out = vec![x0, x1];
    for _ in 2..=n {
        let x = *out.last().unwrap();
        let d = 1.0 + b * x;
        if d.norm() <= 1e-12 * (1.0 + x.norm()) {
            return Err(Error::Pole {
                context: "1 + bx".into(),
            });
        }
        out.push(h * (x + a) / d);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qi_real, rat, rat_frac};

    fn printed(n: u32) -> MPoly {
        let (_, g) = crate::varieties::gamma_symbolic("moebius2d", n).unwrap();
        g[0].with_vars(&param_vars()).unwrap()
    }

    #[test]
    fn step_of_affine_map() {
        let base = MoebiusState::constant(rat(1), rat(0), rat(2));
        let s = param_step(&base, &base).unwrap();
        assert_eq!(s, MoebiusState::constant(rat_frac(3, 2), rat(0), rat(4)));
    }

    #[test]
    fn symbolic_first_step() {
        let base = MoebiusState::symbolic();
        let s = param_step(&base, &base).unwrap();
        let want = crate::algebra::parse_ratfunc("a*(1 + h)/(h + a*b)", &param_vars()).unwrap();
        assert_eq!(s.a, want);
    }

    #[test]
    fn derived_generators_match_printed() {
        for n in 2..=6 {
            assert!(derive_gamma(n).unwrap().equal_up_to_scale(&printed(n)), "n = {n}");
        }
    }

    #[test]
    fn period2_recurrence() {
        let f = recurrence_f(2, &rat(3), &rat(5)).unwrap();
        let want = parse_poly("(1 + 5*x)*X + x + 3", f.vars()).unwrap();
        assert!(f.equal_up_to_scale(&want));
    }

    #[test]
    fn period2_orbit_with_b_zero() {
        let f = recurrence_f(2, &rat(1), &rat(0)).unwrap();
        let r = recurrence_roots(&f, &qi_real(rat(0))).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] + 1.0).norm() < 1e-15);
        let o = follow_branch(Cx::new(1.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), r[0], 2).unwrap();
        assert!(o[2].norm() < 1e-15);
    }
}
