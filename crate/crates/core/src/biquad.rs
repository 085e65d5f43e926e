//! The symmetric biquadratic correspondence
//! `S_q(X, x) = aX²x² + b(X + x)Xx + c(X − x)² + dXx + e(X + x) + f = 0`:
//! branch solving, composition, period generators and the bridge from the
//! 3d Lotka–Volterra invariants.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{
    qi_to_cx, remove_factor, resultant, roots_exact, vars_of, Cx, MPoly, Qi, QiPoly, Vars,
    DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::orbit::relative_distance;
use crate::rng::{derive_seed, grid_point, rng_for};

pub type BiquadParams = [BigRational; 6];
pub type BiquadParamsC = [Cx; 6];

pub const PARAM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Coefficient polynomials of `S_q(X, x)` as a quadratic in `X`:
/// `ξ(x) = ax² + bx + c`, `η(x) = bx² + (d − 2c)x + e`, `ρ(x) = cx² + ex + f`.
pub fn xi_eta_rho(q: &BiquadParamsC, x: Cx) -> (Cx, Cx, Cx) {
    let [a, b, c, d, e, f] = *q;
    (
        a * x * x + b * x + c,
        b * x * x + (d - 2.0 * c) * x + e,
        c * x * x + e * x + f,
    )
}

pub fn s_eval(q: &BiquadParamsC, big_x: Cx, x: Cx) -> Cx {
    let (xi, eta, rho) = xi_eta_rho(q, x);
    xi * big_x * big_x + eta * big_x + rho
}

/// `|S_q(X, x)|` relative to the size of its terms.
pub fn s_residual(q: &BiquadParamsC, big_x: Cx, x: Cx) -> f64 {
    let [a, b, c, d, e, f] = *q;
    let (xx, xs) = (big_x, x);
    let terms = [
        a * xx * xx * xs * xs,
        b * (xx + xs) * xx * xs,
        c * (xx - xs) * (xx - xs),
        d * xx * xs,
        e * (xx + xs),
        f,
    ];
    let scale: f64 = [
        (a * xx * xx * xs * xs).norm(),
        (b * xx * xx * xs).norm() + (b * xx * xs * xs).norm(),
        (c * xx * xx).norm() + (c * xs * xs).norm() + (2.0 * c * xx * xs).norm(),
        (d * xx * xs).norm(),
        (e * xx).norm() + (e * xs).norm(),
        f.norm(),
    ]
    .iter()
    .sum();
    terms.iter().sum::<Cx>().norm() / (1.0 + scale)
}

/// `S_q(X, x)` over the variables named `big_x`, `x` within `vars`.
pub fn biquad_poly(q: &BiquadParams, vars: &Vars, big_x: &str, x: &str) -> Result<MPoly> {
    let v = |n: &str| MPoly::var(vars.clone(), n);
    let (xx, xs) = (v(big_x)?, v(x)?);
    let k = |i: usize| MPoly::constant(vars.clone(), q[i].clone());
    let xxxs = &xx * &xs;
    let sum = &xx + &xs;
    let diff = &xx - &xs;
    let parts = [
        &k(0) * &(&xxxs * &xxxs),
        &k(1) * &(&sum * &xxxs),
        &k(2) * &(&diff * &diff),
        &k(3) * &xxxs,
        &k(4) * &sum,
        k(5),
    ];
    Ok(parts.iter().fold(MPoly::zero(vars.clone()), |acc, p| &acc + p))
}

/// The (at most two) solutions `X` of `S_q(X, x) = 0`, in canonical order.
pub fn solve_branches(q: &BiquadParamsC, x: Cx) -> Result<Vec<Cx>> {
    let (xi, eta, rho) = xi_eta_rho(q, x);
    let scale = xi.norm().max(eta.norm()).max(rho.norm());
    if scale == 0.0 || (xi.norm() <= 1e-14 * scale && eta.norm() <= 1e-14 * scale) {
        return Err(Error::DegenerateRootProblem);
    }
    crate::algebra::roots(&[rho, eta, xi], DEFAULT_TOL).or_else(|e| match e {
        // Leading coefficient negligible: a single finite branch.
        Error::DegenerateRootProblem => Ok(vec![-rho / eta]),
        e => Err(e),
    })
}

fn guard(reason: &str) -> Error {
    Error::DegenerateFamily(reason.to_string())
}

/// Follows the correspondence from `x0 → x1` for `n` steps, never stepping
/// back to the point just left.
pub fn follow(q: &BiquadParamsC, x0: Cx, x1: Cx, n: usize) -> Result<Vec<Cx>> {
    let mut out = vec![x0, x1];
    while out.len() <= n {
        let k = out.len();
        let (prev, cur) = (out[k - 2], out[k - 1]);
        let (xi, _, _) = xi_eta_rho(q, cur);
        let r = solve_branches(q, cur)?;
        if r.len() < 2 || xi.norm() <= 1e-10 * (1.0 + cur.norm()) {
            return Err(guard("branch escapes to infinity"));
        }
        if (r[0] - r[1]).norm() <= 1e-6 * (1.0 + r[0].norm()) {
            return Err(guard("the two branches coincide"));
        }
        let next = if (r[0] - prev).norm() >= (r[1] - prev).norm() {
            r[0]
        } else {
            r[1]
        };
        out.push(next);
    }
    Ok(out)
}

/// Parameters of the two-step correspondence: `Res_y(S_q(X, y), S_q(y, x))`
/// with the backtracking factor `(X − x)²` divided out, put back into the
/// six-parameter form (integer, content 1).
pub fn compose(q: &BiquadParams) -> Result<BiquadParams> {
    let vars = vars_of(&["X", "x", "y"]);
    let s1 = biquad_poly(q, &vars, "X", "y")?;
    let s2 = biquad_poly(q, &vars, "y", "x")?;
    if s1.is_zero() {
        return Err(guard("S is identically zero"));
    }
    let r = resultant(&s1, &s2, "y")?;
    if r.is_zero() {
        return Err(Error::ResultantCollapsed { var: "y".into() });
    }
    let back = &MPoly::var(vars.clone(), "X")? - &MPoly::var(vars.clone(), "x")?;
    let (rest, k) = remove_factor(&r, &back);
    if k > 2 {
        return Err(Error::DegenerateComposition(format!(
            "the non-backtracking factor contains X - x: {rest}"
        )));
    }
    let rest = rest.primitive();
    let out = extract_params(&rest)?;
    check_composition(q, &out)?;
    Ok(out)
}

/// Reads the six parameters off a polynomial in `X`, `x` of the symmetric
/// form, or reports it.
pub fn extract_params(p: &MPoly) -> Result<BiquadParams> {
    let coef = |ex: u32, ey: u32| -> BigRational {
        p.terms()
            .find(|(m, _)| {
                let e = |n: &str| p.var_index(n).map_or(0, |i| m.exp(i));
                e("X") == ex && e("x") == ey && m.degree() == ex + ey
            })
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    };
    let (a, b, c) = (coef(2, 2), coef(2, 1), coef(2, 0));
    let d = coef(1, 1) + &c + &c;
    let (e, f) = (coef(1, 0), coef(0, 0));
    let q = [a, b, c, d, e, f];
    let vars = p.vars().clone();
    if biquad_poly(&q, &vars, "X", "x")? != *p {
        return Err(Error::DegenerateComposition(format!(
            "not of the symmetric six-parameter form: {p}"
        )));
    }
    Ok(q)
}

fn to_c(q: &BiquadParams) -> BiquadParamsC {
    std::array::from_fn(|i| Cx::new(crate::algebra::rat_to_f64(&q[i]), 0.0))
}

/// The composed correspondence must hold on genuine two-step transitions.
fn check_composition(q: &BiquadParams, q2: &BiquadParams) -> Result<()> {
    let (qc, q2c) = (to_c(q), to_c(q2));
    let mut rng = rng_for(0xb1c0);
    let mut good = 0;
    for _ in 0..64 {
        if good == 8 {
            break;
        }
        let x0 = qi_to_cx(&grid_point(&mut rng));
        let Ok(b) = solve_branches(&qc, x0) else { continue };
        let Ok(orbit) = follow(&qc, x0, b[0], 2) else { continue };
        if s_residual(&q2c, orbit[2], x0) > 1e-8 {
            return Err(Error::DegenerateComposition(format!(
                "composed correspondence misses a two-step transition (residual {:e})",
                s_residual(&q2c, orbit[2], x0)
            )));
        }
        good += 1;
    }
    if good < 8 {
        return Err(Error::SamplingFailed {
            attempts: 64,
            reason: "too few regular two-step transitions".into(),
        });
    }
    Ok(())
}

fn gammas() -> &'static Vec<(u32, MPoly)> {
    static G: OnceLock<Vec<(u32, MPoly)>> = OnceLock::new();
    G.get_or_init(|| {
        (3..=5)
            .map(|n| (n, crate::varieties::gamma_symbolic("biquad", n).expect("catalog").1[0].clone()))
            .collect()
    })
}

/// γ⁽ⁿ⁾ as a polynomial in `a, …, f`.
pub fn gamma_biquad_poly(n: u32) -> Result<MPoly> {
    gammas()
        .iter()
        .find(|(k, _)| *k == n)
        .map(|(_, g)| g.clone())
        .ok_or_else(|| Error::UnknownGenerator {
            map: "biquad".into(),
            period: n,
            available: vec![3, 4, 5],
        })
}

pub fn gamma_biquad(n: u32, q: &BiquadParamsC) -> Result<Cx> {
    gamma_biquad_poly(n)?.eval(q)
}

pub fn gamma_biquad_exact(n: u32, q: &BiquadParams) -> Result<BigRational> {
    gamma_biquad_poly(n)?.eval_exact(q)
}

/// The 3d Lotka–Volterra identification `q(r, s)`.
pub fn from_3dlv(r: &BigRational, s: &BigRational) -> BiquadParams {
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let five = BigRational::from_integer(5.into());
    [
        r + &one,
        s - &two * r - &one,
        r - s,
        s * s + r * s + &five * r - &two * s + &one,
        -(r * (s + &one)),
        BigRational::zero(),
    ]
}

/// [`from_3dlv`] as polynomials in `r, s`.
pub fn from_3dlv_symbolic() -> [MPoly; 6] {
    let v = vars_of(&["r", "s"]);
    [
        "r + 1",
        "s - 2*r - 1",
        "r - s",
        "s^2 + r*s + 5*r - 2*s + 1",
        "-r*(s + 1)",
        "0",
    ]
    .map(|t| crate::algebra::parse_poly(t, &v).unwrap())
}

pub fn from_3dlv_c(r: Cx, s: Cx) -> BiquadParamsC {
    [
        r + 1.0,
        s - 2.0 * r - 1.0,
        r - s,
        s * s + r * s + 5.0 * r - 2.0 * s + 1.0,
        -r * (s + 1.0),
        Cx::new(0.0, 0.0),
    ]
}

/// Parameters on `γ⁽ⁿ⁾ = 0`: `a, …, e` from the grid, `f` solved.
pub fn sample_on_gamma(n: u32, seed: u64) -> Result<BiquadParamsC> {
    let g = gamma_biquad_poly(n)?;
    for draw in 0..crate::varieties::MAX_DRAWS {
        let mut rng = rng_for(derive_seed(seed, draw as u64));
        let drawn: Vec<Qi> = (0..5).map(|_| grid_point(&mut rng)).collect();
        let lookup = |name: &str| PARAM_NAMES[..5].iter().position(|p| *p == name).map(|i| drawn[i].clone());
        let up = QiPoly::from_mpoly(&g, "f", lookup)?;
        if up.degree() == 0 {
            continue;
        }
        let Ok(fs) = roots_exact(&up, DEFAULT_TOL) else { continue };
        let mut q: BiquadParamsC = [Cx::new(0.0, 0.0); 6];
        for i in 0..5 {
            q[i] = qi_to_cx(&drawn[i]);
        }
        q[5] = fs[0];
        return Ok(q);
    }
    Err(Error::SamplingFailed {
        attempts: crate::varieties::MAX_DRAWS,
        reason: format!("γ({n}) degenerate in f"),
    })
}

/// Outcome of one branch-followed period trial.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodTrial {
    pub params: BiquadParamsC,
    pub orbit: Vec<Cx>,
    pub return_error: f64,
    /// Smallest step at which the orbit already came back, if before `n`.
    pub early_return: Option<usize>,
}

/// Samples `q` on `γ⁽ⁿ⁾ = 0` and a starting point, takes the first branch
/// and follows it `n` steps.
pub fn period_trial(n: u32, seed: u64) -> Result<PeriodTrial> {
    let q = sample_on_gamma(n, seed)?;
    let mut rng = rng_for(derive_seed(seed, 0xface));
    let x0 = qi_to_cx(&grid_point(&mut rng));
    let b = solve_branches(&q, x0)?;
    let orbit = follow(&q, x0, b[0], n as usize)?;
    let return_error = relative_distance(&[x0], &[orbit[n as usize]]);
    let early_return = (1..n as usize).find(|k| relative_distance(&[x0], &[orbit[*k]]) <= 1e-8);
    Ok(PeriodTrial {
        params: q,
        orbit,
        return_error,
        early_return,
    })
}
