//! The symmetric QRT map: parameters, reduction to the biquadratic
//! correspondence with `q = q' + h·q''`, and the period-n recurrence
//! polynomials `γ⁽ⁿ⁾(q' + H(x, X)·q'')`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    exact_divide, parse_poly, qi_from_cx, qi_to_cx, roots_exact, vars_of, Cx, MPoly, QiPoly,
    RatFunc, Vars, DEFAULT_TOL,
};
use crate::biquad::{solve_branches, BiquadParams, BiquadParamsC};
use crate::catalog::{catalog_get, IntegrableMap, Params, QRT_PARAM_NAMES};
use crate::error::{Error, Result};
use crate::orbit::{verify_period, OrbitReport};
use crate::rng::{derive_seed, grid_point, rng_for, small_rational};
use crate::varieties::gamma_get;

#[derive(Clone, Debug, PartialEq)]
pub struct QrtParams {
    pub qp: BiquadParams,
    pub qpp: BiquadParams,
}

impl QrtParams {
    pub fn params(&self) -> Params {
        QRT_PARAM_NAMES
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let v = if i < 6 { &self.qp[i] } else { &self.qpp[i - 6] };
                (k.to_string(), v.clone())
            })
            .collect()
    }

    pub fn map(&self) -> Result<IntegrableMap> {
        catalog_get("qrt", &self.params())
    }

    /// Small random rationals for all twelve parameters.
    pub fn random(seed: u64) -> QrtParams {
        let mut rng = rng_for(seed);
        let mut draw = || -> BiquadParams { std::array::from_fn(|_| small_rational(&mut rng, 5, 3)) };
        QrtParams {
            qp: draw(),
            qpp: draw(),
        }
    }
}

/// `q' + h·q''`.
pub fn reduce_to_biquadratic(p: &QrtParams, h: Cx) -> BiquadParamsC {
    let f = crate::algebra::rat_to_f64;
    std::array::from_fn(|i| Cx::new(f(&p.qp[i]), 0.0) + h * f(&p.qpp[i]))
}

pub fn reduce_exact(p: &QrtParams, h: &BigRational) -> BiquadParams {
    std::array::from_fn(|i| &p.qp[i] + h * &p.qpp[i])
}

pub fn qrt_apply(m: &IntegrableMap, x: Cx, y: Cx) -> Result<(Cx, Cx)> {
    let r = m.apply(&[x, y])?;
    Ok((r[0], r[1]))
}

/// `H(x, y) = −(ξ'(x)y² + η'(x)y + ρ'(x))/(ξ''(x)y² + η''(x)y + ρ''(x))`.
pub fn qrt_invariant(p: &QrtParams, x: Cx, y: Cx) -> Result<Cx> {
    let f = crate::algebra::rat_to_f64;
    let num = crate::biquad::s_eval(&p.qp.each_ref().map(|v| Cx::new(f(v), 0.0)), y, x);
    let den = crate::biquad::s_eval(&p.qpp.each_ref().map(|v| Cx::new(f(v), 0.0)), y, x);
    if den.norm() <= crate::catalog::POLE_TOL * (1.0 + num.norm()) {
        return Err(Error::Pole {
            context: "QRT invariant denominator".into(),
        });
    }
    Ok(-num / den)
}

/// A recurrence polynomial `F(x, X)` and where it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRelation {
    pub period: u32,
    pub source: String,
    pub vars: Vec<String>,
    pub f: String,
}

/// `ξ(t)X² + η(t)X + ρ(t)` with symbolic or numeric biquadratic entries.
fn curve(q: &[MPoly; 6], x: &MPoly, big_x: &MPoly) -> MPoly {
    let [a, b, c, d, e, f] = q;
    let x2 = x * x;
    let xi = &(&(a * &x2) + &(b * x)) + c;
    let eta = &(&(b * &x2) + &(&(d - &(c + c)) * x)) + e;
    let rho = &(&(c * &x2) + &(e * x)) + f;
    &(&(&xi * &(big_x * big_x)) + &(&eta * big_x)) + &rho
}

/// `F = D^(k) · γ⁽ⁿ⁾(q' + H q'')` where `H = −N/D` is the invariant at
/// `(x, X)` and `k = deg_h γ⁽ⁿ⁾(q' + h q'')`; `qp`, `qpp` are polynomials
/// over `vars` (constants for a concrete instance, symbols otherwise).
pub fn recurrence_poly(n: u32, qp: &[MPoly; 6], qpp: &[MPoly; 6], vars: &Vars) -> Result<MPoly> {
    let g = crate::biquad::gamma_biquad_poly(n)?;
    let x = MPoly::var(vars.clone(), "x")?;
    let big_x = MPoly::var(vars.clone(), "X")?;
    let num = curve(qp, &x, &big_x);
    let den = curve(qpp, &x, &big_x);
    if den.is_zero() {
        return Err(Error::DegenerateParameters {
            map: "qrt".into(),
            reason: "q'' = 0".into(),
        });
    }
    // q_i' D − q_i'' N, i.e. D·(q' + H q'').
    let entries: Vec<RatFunc> = (0..6)
        .map(|i| RatFunc::from_poly(&(&qp[i] * &den) - &(&qpp[i] * &num)))
        .collect();
    let syms: Vars = crate::biquad::PARAM_NAMES.map(String::from).to_vec().into();
    let full = crate::varieties::compose_generator(&g, &syms, &entries, vars)?;
    let full = full.as_poly().expect("polynomial substitution");
    // deg_h of γ(q' + h q'').
    let mut hv: Vec<String> = vars.to_vec();
    hv.push("__h".into());
    let hv: Vars = hv.into();
    let h = MPoly::var(hv.clone(), "__h")?;
    let lin: Vec<RatFunc> = (0..6)
        .map(|i| Ok(RatFunc::from_poly(&qp[i].with_vars(&hv)? + &(&qpp[i].with_vars(&hv)? * &h))))
        .collect::<Result<_>>()?;
    let in_h = crate::varieties::compose_generator(&g, &syms, &lin, &hv)?;
    let k = in_h.num().degree_in("__h");
    let total = g.total_degree();
    if in_h.num().is_zero() || full.is_zero() {
        return Err(Error::DegenerateParameters {
            map: "qrt".into(),
            reason: format!("γ({n}) vanishes identically on q' + h q''"),
        });
    }
    let mut f = full;
    for _ in k..total {
        f = exact_divide(&f, &den)?;
    }
    Ok(f)
}

/// Period-`n` recurrence for concrete parameters, normalized.
pub fn qrt_recurrence(p: &QrtParams, n: u32) -> Result<(MPoly, RecurrenceRelation)> {
    let vars = vars_of(&["x", "X"]);
    let c = |r: &BigRational| MPoly::constant(vars.clone(), r.clone());
    let qp = p.qp.each_ref().map(c);
    let qpp = p.qpp.each_ref().map(c);
    let f = recurrence_poly(n, &qp, &qpp, &vars)?.primitive();
    if f.is_constant() {
        return Err(Error::DegenerateParameters {
            map: "qrt".into(),
            reason: format!("period-{n} recurrence is constant"),
        });
    }
    let rel = RecurrenceRelation {
        period: n,
        source: "qrt".into(),
        vars: vars.to_vec(),
        f: f.to_string(),
    };
    Ok((f, rel))
}

/// Symbolic version over `x, X` and the twelve parameter symbols.
pub fn qrt_recurrence_symbolic(n: u32) -> Result<MPoly> {
    let mut names: Vec<String> = vec!["x".into(), "X".into()];
    names.extend(QRT_PARAM_NAMES.iter().map(|s| s.to_string()));
    let vars: Vars = names.into();
    let qp: [MPoly; 6] = std::array::from_fn(|i| MPoly::var(vars.clone(), QRT_PARAM_NAMES[i]).unwrap());
    let qpp: [MPoly; 6] = std::array::from_fn(|i| MPoly::var(vars.clone(), QRT_PARAM_NAMES[i + 6]).unwrap());
    recurrence_poly(n, &qp, &qpp, &vars)
}

/// `H(x, X) = −N/D` over `x, X` and the parameter symbols.
pub fn invariant_symbolic(vars: &Vars) -> Result<RatFunc> {
    let x = MPoly::var(vars.clone(), "x")?;
    let big_x = MPoly::var(vars.clone(), "X")?;
    let qp: [MPoly; 6] = std::array::from_fn(|i| MPoly::var(vars.clone(), QRT_PARAM_NAMES[i]).unwrap());
    let qpp: [MPoly; 6] = std::array::from_fn(|i| MPoly::var(vars.clone(), QRT_PARAM_NAMES[i + 6]).unwrap());
    RatFunc::new(-&curve(&qp, &x, &big_x), curve(&qpp, &x, &big_x))
}

/// Outcome of one recurrence/2d-map coherence trial.
#[derive(Clone, Debug)]
pub struct CoherenceTrial {
    pub h: Cx,
    pub start: (Cx, Cx),
    pub report: OrbitReport,
    /// Draws rejected by degeneracy guards before this one.
    pub rejected: usize,
}

/// Draws `x`, solves `γ⁽ⁿ⁾(q' + h q'') = 0` for `h` and `H(x, y) = h` for
/// `y`, then checks that `(x, y)` has period `n` under the 2d map.
pub fn coherence_trial(m: &IntegrableMap, p: &QrtParams, n: u32, seed: u64, tol: f64) -> Result<CoherenceTrial> {
    let g = gamma_get(m, n)?;
    let gh = &g.gammas[0];
    let up = QiPoly::from_mpoly(gh, "h", |_| None)?;
    let hs = roots_exact(&up, DEFAULT_TOL)?;
    let mut rejected = 0;
    for draw in 0..crate::varieties::MAX_DRAWS {
        let mut rng = rng_for(derive_seed(seed, draw as u64));
        let xq = grid_point(&mut rng);
        let x = qi_to_cx(&xq);
        let h = hs[draw % hs.len()];
        let q = reduce_to_biquadratic(p, h);
        if q.iter().all(|v| v.norm() < 1e-12) {
            rejected += 1;
            continue;
        }
        let Ok(ys) = solve_branches(&q, x) else {
            rejected += 1;
            continue;
        };
        if ys.len() < 2 || (ys[0] - ys[1]).norm() <= 1e-6 * (1.0 + ys[0].norm()) {
            rejected += 1;
            continue;
        }
        // Polish y exactly against the invariant curve.
        let y = match qi_from_cx(h) {
            Some(hq) => {
                let hq2 = hq.clone();
                let curve_y = QiPoly::new(
                    (0..3)
                        .map(|k| {
                            let entry = |i: usize| {
                                crate::algebra::qi_real(p.qp[i].clone())
                                    + &hq2 * crate::algebra::qi_real(p.qpp[i].clone())
                            };
                            let [a, b, c, d, e, f] = std::array::from_fn::<_, 6, _>(entry);
                            let xx = &xq * &xq;
                            match k {
                                2 => &a * &xx + &b * &xq + &c,
                                1 => &b * &xx + (&d - &c - &c) * &xq + &e,
                                _ => &c * &xx + &e * &xq + &f,
                            }
                        })
                        .collect(),
                );
                crate::algebra::polish_exact(&curve_y, ys[0], 3)
            }
            None => ys[0],
        };
        if y.norm() < crate::varieties::MIN_COORD {
            rejected += 1;
            continue;
        }
        match verify_period(m, &[x, y], n as usize, tol) {
            Ok(report) => {
                return Ok(CoherenceTrial {
                    h,
                    start: (x, y),
                    report,
                    rejected,
                })
            }
            Err(Error::PoleAtStep { .. }) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingFailed {
        attempts: crate::varieties::MAX_DRAWS,
        reason: "every draw hit a degeneracy guard".into(),
    })
}

/// The printed period-3 display `(a'+Ha'')(f'+Hf'') − … ` with `H` the
/// invariant, as a rational function over `x, X` and the parameters.
pub fn printed_f3(vars: &Vars) -> Result<RatFunc> {
    let mut hv: Vec<String> = vars.to_vec();
    hv.push("H".into());
    let hv: Vars = hv.into();
    let text = "(a1 + H*a2)*(f1 + H*f2) - (b1 + H*b2)*(e1 + H*e2) - 3*(c1 + H*c2)^2 + (c1 + H*c2)*(d1 + H*d2)";
    let p = parse_poly(text, &hv)?;
    let h = invariant_symbolic(vars)?.with_vars(&hv)?;
    RatFunc::from_poly(p).subst("H", &h).with_vars(vars)
}

pub fn is_zero_params(q: &BiquadParams) -> bool {
    q.iter().all(|v| v.is_zero())
}
