//! The concrete maps: components, invariants and parameters behind one
//! interface.
//!
//! Every map carries exact rational parameters. Explicit maps store their
//! components as rational functions; the 4d Lotka–Volterra map is implicit
//! (a cyclic system solved through a quadratic) and the Euler top is the
//! Hirota–Kimura linear system `X - x = α(Yz + Zy)` etc., whose Cramer
//! solution is also kept symbolically for elimination.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    fmt_rational, parse_rational, parse_ratfunc, rat, vars_of, Cx, MPoly, RatFunc, Vars,
};
use crate::error::{Error, Result};
use crate::rng::{rng_for, small_rational};

pub type Params = BTreeMap<String, BigRational>;
pub type PointC = Vec<Cx>;

/// `|den| ≤ POLE_TOL·(1 + |num|)` is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Relative deviation under which a candidate image of the implicit 4d
/// Lotka–Volterra map counts as conserving the invariants.
const LV_CONSERVE_TOL: f64 = 1e-7;

pub const MAP_NAMES: [&str; 9] = [
    "lyness2",
    "lyness5",
    "lyness8",
    "lv3",
    "lv4",
    "toda3",
    "euler",
    "moebius2d",
    "qrt",
];

pub const QRT_PARAM_NAMES: [&str; 12] = [
    "a1", "b1", "c1", "d1", "e1", "f1", "a2", "b2", "c2", "d2", "e2", "f2",
];

/// Parameter names a map requires (Euler alternatively accepts I, J, K).
pub fn param_names(name: &str) -> Result<Vec<&'static str>> {
    Ok(match name {
        "lyness2" => vec!["a"],
        "lyness5" | "lyness8" | "lv3" | "lv4" | "toda3" => vec![],
        "euler" => vec!["alpha", "beta", "gamma"],
        "moebius2d" => vec!["a", "b"],
        "qrt" => QRT_PARAM_NAMES.to_vec(),
        _ => return Err(Error::UnknownMap(name.to_string())),
    })
}

#[derive(Clone, Debug)]
pub struct Invariant {
    pub name: String,
    pub func: RatFunc,
}

#[derive(Clone, Debug)]
enum Solver {
    Explicit,
    CyclicLv,
    HirotaKimura([BigRational; 3]),
}

#[derive(Clone, Debug)]
pub struct IntegrableMap {
    name: String,
    vars: Vars,
    params: Params,
    components: Option<Vec<RatFunc>>,
    solver: Solver,
    invariants: Vec<Invariant>,
}

/// Serializable description of a catalog map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub name: String,
    pub d: usize,
    pub vars: Vec<String>,
    pub params: BTreeMap<String, String>,
    pub components: Vec<String>,
    pub invariants: Vec<(String, String)>,
}

impl MapDescriptor {
    /// Rebuilds the map this descriptor was produced from.
    pub fn load(&self) -> Result<IntegrableMap> {
        let mut p = Params::new();
        for (k, v) in &self.params {
            p.insert(k.clone(), parse_rational(v)?);
        }
        catalog_get(&self.name, &p)
    }
}

fn image_name(v: &str) -> String {
    v.to_uppercase()
}

fn need(map: &str, params: &Params, key: &str) -> Result<BigRational> {
    params.get(key).cloned().ok_or_else(|| Error::MissingParameter {
        map: map.to_string(),
        param: key.to_string(),
    })
}

/// Parses `text` over `coords`, with parameter names substituted by value.
fn rf(text: &str, coords: &Vars, params: &Params) -> Result<RatFunc> {
    let mut all: Vec<String> = coords.to_vec();
    all.extend(params.keys().cloned());
    let r = parse_ratfunc(text, &all.into())?;
    r.specialize(|n| params.get(n).cloned())?.with_vars(coords)
}

fn det3(m: &[[MPoly; 3]; 3]) -> MPoly {
    let minor = |a: &MPoly, b: &MPoly, c: &MPoly, d: &MPoly| &(a * d) - &(b * c);
    let t0 = &m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let t1 = &m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let t2 = &m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &(&t0 - &t1) + &t2
}

/// Builds a catalog map.
pub fn catalog_get(name: &str, params: &Params) -> Result<IntegrableMap> {
    let map = build(name, params)?;
    map.check_invariants(20, 0x1d3a)?;
    Ok(map)
}

fn build(name: &str, params: &Params) -> Result<IntegrableMap> {
    let mk = |vars: Vars, comps: &[&str], p: &Params, invs: &[(&str, &str)]| -> Result<IntegrableMap> {
        let components = comps
            .iter()
            .map(|c| rf(c, &vars, p))
            .collect::<Result<Vec<_>>>()?;
        let invariants = invs
            .iter()
            .map(|(n, t)| {
                Ok(Invariant {
                    name: n.to_string(),
                    func: rf(t, &vars, p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegrableMap {
            name: name.to_string(),
            vars,
            params: p.clone(),
            components: Some(components),
            solver: Solver::Explicit,
            invariants,
        })
    };
    let none = Params::new();
    match name {
        "lyness2" => {
            let a = need(name, params, "a")?;
            if a.is_zero() {
                return Err(Error::DegenerateParameters {
                    map: name.into(),
                    reason: "a = 0 collapses the map to a constant".into(),
                });
            }
            let p: Params = [("a".to_string(), a)].into();
            mk(vars_of(&["x"]), &["a/x"], &p, &[])
        }
        "lyness5" => mk(vars_of(&["x", "y"]), &["(1 + x)/y", "x"], &none, &[]),
        "lyness8" => mk(
            vars_of(&["x", "y", "z"]),
            &["(1 + x + y)/z", "x", "y"],
            &none,
            &[],
        ),
        "lv3" => mk(
            vars_of(&["x", "y", "z"]),
            &[
                "x*(1 - y + y*z)/(1 - z + z*x)",
                "y*(1 - z + z*x)/(1 - x + x*y)",
                "z*(1 - x + x*y)/(1 - y + y*z)",
            ],
            &none,
            &[("r", "x*y*z"), ("s", "(1 - x)*(1 - y)*(1 - z)")],
        ),
        "lv4" => {
            let vars = vars_of(&["x", "y", "z", "u"]);
            let inv = |n: &str, t: &str| -> Result<Invariant> {
                Ok(Invariant {
                    name: n.into(),
                    func: rf(t, &vars, &none)?,
                })
            };
            Ok(IntegrableMap {
                name: name.into(),
                vars: vars.clone(),
                params: none.clone(),
                components: None,
                solver: Solver::CyclicLv,
                invariants: vec![
                    inv("H1", "x*(1 - u) + y*(1 - x) + z*(1 - y) + u*(1 - z)")?,
                    inv("H2", "x*(1 - u)*z*(1 - y) + y*(1 - x)*u*(1 - z)")?,
                    inv("r", "x*y*z*u")?,
                ],
            })
        }
        "toda3" => {
            let a = "(z*u + z*x + w*u)";
            let b = "(y*w + y*z + v*w)";
            let c = "(x*v + x*y + u*v)";
            let comps = [
                format!("y*{a}/{b}"),
                format!("z*{c}/{a}"),
                format!("x*{b}/{c}"),
                format!("u*{b}/{a}"),
                format!("v*{a}/{c}"),
                format!("w*{c}/{b}"),
            ];
            let refs: Vec<&str> = comps.iter().map(|s| s.as_str()).collect();
            mk(
                vars_of(&["x", "y", "z", "u", "v", "w"]),
                &refs,
                &none,
                &[
                    ("t1", "x + y + z + u + v + w"),
                    ("t2", "x*y + y*z + z*x + u*v + v*w + w*u + x*v + y*w + z*u"),
                    ("t3", "x*y*z"),
                    ("t3p", "u*v*w"),
                ],
            )
        }
        "moebius2d" => {
            let a = need(name, params, "a")?;
            let b = need(name, params, "b")?;
            if (&a * &b).is_one() {
                return Err(Error::DegenerateParameters {
                    map: name.into(),
                    reason: "ab = 1 collapses the Moebius factor to a constant".into(),
                });
            }
            let p: Params = [("a".to_string(), a), ("b".to_string(), b)].into();
            mk(
                vars_of(&["x", "y"]),
                &["(x + a)*y", "y*(1 + b*x)/(1 + b*y*(x + a))"],
                &p,
                &[("h", "y*(1 + b*x)")],
            )
        }
        "qrt" => {
            let mut p = Params::new();
            for k in QRT_PARAM_NAMES {
                p.insert(k.to_string(), need(name, params, k)?);
            }
            if QRT_PARAM_NAMES[6..].iter().all(|k| p[*k].is_zero()) {
                return Err(Error::DegenerateParameters {
                    map: name.into(),
                    reason: "q'' = 0 makes the invariant's denominator vanish".into(),
                });
            }
            let xi = |s: &str, t: &str| format!("(a{s}*{t}^2 + b{s}*{t} + c{s})");
            let eta = |s: &str, t: &str| format!("(b{s}*{t}^2 + (d{s} - 2*c{s})*{t} + e{s})");
            let rho = |s: &str, t: &str| format!("(c{s}*{t}^2 + e{s}*{t} + f{s})");
            let num = format!(
                "{e1}*{r2} - {r1}*{e2} - x*({r1}*{x2} - {x1}*{r2})",
                e1 = eta("1", "y"),
                r2 = rho("2", "y"),
                r1 = rho("1", "y"),
                e2 = eta("2", "y"),
                x2 = xi("2", "y"),
                x1 = xi("1", "y"),
            );
            let den = format!(
                "{r1}*{x2} - {x1}*{r2} - x*({x1}*{e2} - {e1}*{x2})",
                e1 = eta("1", "y"),
                r2 = rho("2", "y"),
                r1 = rho("1", "y"),
                e2 = eta("2", "y"),
                x2 = xi("2", "y"),
                x1 = xi("1", "y"),
            );
            let vars = vars_of(&["x", "y"]);
            if rf(&den, &vars, &p)?.is_zero() {
                return Err(Error::DegenerateParameters {
                    map: name.into(),
                    reason: "the map's denominator vanishes identically".into(),
                });
            }
            let second = format!("({num})/({den})");
            let h = format!(
                "-({}*y^2 + {}*y + {})/({}*y^2 + {}*y + {})",
                xi("1", "x"),
                eta("1", "x"),
                rho("1", "x"),
                xi("2", "x"),
                eta("2", "x"),
                rho("2", "x")
            );
            mk(vars, &["y", &second], &p, &[("h", &h)])
        }
        "euler" => {
            let mut p = Params::new();
            let has_ijk = ["I", "J", "K"].iter().all(|k| params.contains_key(*k));
            let (al, be, ga) = if has_ijk {
                let (i, j, k) = (&params["I"], &params["J"], &params["K"]);
                if i.is_zero() || j.is_zero() || k.is_zero() {
                    return Err(Error::DegenerateParameters {
                        map: name.into(),
                        reason: "moments of inertia must be nonzero".into(),
                    });
                }
                let two = rat(2);
                let al = (j - k) / (&two * i);
                let be = (k - i) / (&two * j);
                let ga = (i - j) / (&two * k);
                for (key, val) in [("alpha", &al), ("beta", &be), ("gamma", &ga)] {
                    if let Some(given) = params.get(key) {
                        if given != val {
                            return Err(Error::DegenerateParameters {
                                map: name.into(),
                                reason: format!("{key} disagrees with I, J, K"),
                            });
                        }
                    }
                }
                for key in ["I", "J", "K"] {
                    p.insert(key.to_string(), params[key].clone());
                }
                (al, be, ga)
            } else {
                (
                    need(name, params, "alpha")?,
                    need(name, params, "beta")?,
                    need(name, params, "gamma")?,
                )
            };
            p.insert("alpha".into(), al.clone());
            p.insert("beta".into(), be.clone());
            p.insert("gamma".into(), ga.clone());
            let vars = vars_of(&["x", "y", "z"]);
            let c = |t: &str| rf(t, &vars, &p).map(|r| r.as_poly().expect("polynomial"));
            let m = [
                [c("1")?, c("-alpha*z")?, c("-alpha*y")?],
                [c("-beta*z")?, c("1")?, c("-beta*x")?],
                [c("-gamma*y")?, c("-gamma*x")?, c("1")?],
            ];
            let d = det3(&m);
            let rhs = [c("x")?, c("y")?, c("z")?];
            let mut comps = Vec::with_capacity(3);
            for col in 0..3 {
                let mut mc = m.clone();
                for row in 0..3 {
                    mc[row][col] = rhs[row].clone();
                }
                comps.push(RatFunc::new(det3(&mc), d.clone())?);
            }
            let den = "(1 - beta*gamma*x^2)";
            let invs: Vec<(String, String)> = if has_ijk {
                vec![
                    ("H1".into(), format!("(I*x^2 + J*y^2 + K*z^2)/{den}")),
                    ("H2".into(), format!("(I^2*x^2 + J^2*y^2 + K^2*z^2)/{den}")),
                ]
            } else {
                vec![
                    ("H1".into(), format!("(beta*x^2 - alpha*y^2)/{den}")),
                    ("H2".into(), format!("(gamma*x^2 - alpha*z^2)/{den}")),
                ]
            };
            let invariants = invs
                .iter()
                .map(|(n, t)| {
                    Ok(Invariant {
                        name: n.clone(),
                        func: rf(t, &vars, &p)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IntegrableMap {
                name: name.into(),
                vars,
                params: p,
                components: Some(comps),
                solver: Solver::HirotaKimura([al, be, ga]),
                invariants,
            })
        }
        _ => Err(Error::UnknownMap(name.to_string())),
    }
}

fn cx_close_to_zero(den: Cx, num: Cx) -> bool {
    den.norm() <= POLE_TOL * (1.0 + num.norm())
}

fn to_cx(r: &BigRational) -> Cx {
    Complex64::new(crate::algebra::rat_to_f64(r), 0.0)
}

impl IntegrableMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Names of the image coordinates (`x → X`, ...).
    pub fn image_vars(&self) -> Vec<String> {
        self.vars.iter().map(|v| image_name(v)).collect()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<&BigRational> {
        self.params.get(key)
    }

    /// Explicit components, or `None` for the implicit 4d LV map.
    pub fn components(&self) -> Option<&[RatFunc]> {
        self.components.as_deref()
    }

    pub fn invariants(&self) -> &[Invariant] {
        &self.invariants
    }

    pub fn invariant(&self, name: &str) -> Option<&RatFunc> {
        self.invariants.iter().find(|i| i.name == name).map(|i| &i.func)
    }

    fn check_point(&self, p: &[Cx]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::Arity {
                expected: self.dim(),
                got: p.len(),
            });
        }
        if p.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// One step of the map.
    pub fn apply(&self, p: &[Cx]) -> Result<PointC> {
        self.check_point(p)?;
        match &self.solver {
            Solver::Explicit => self
                .components
                .as_ref()
                .expect("explicit map")
                .iter()
                .map(|c| c.eval(p, POLE_TOL))
                .collect(),
            Solver::CyclicLv => self.apply_cyclic(p),
            Solver::HirotaKimura(abg) => {
                let [al, be, ga] = [to_cx(&abg[0]), to_cx(&abg[1]), to_cx(&abg[2])];
                hirota_kimura_solve([al, be, ga], [p[0], p[1], p[2]]).map(|v| v.to_vec())
            }
        }
    }

    fn apply_cyclic(&self, p: &[Cx]) -> Result<PointC> {
        let cands = lv_cyclic_candidates(p)?;
        let h0 = self.invariants_eval(p)?;
        let mut scored: Vec<(f64, f64, PointC)> = Vec::new();
        let n = p.len();
        for c in cands {
            let Ok(h1) = self.invariants_eval(&c) else {
                continue;
            };
            let dev = h0
                .iter()
                .zip(&h1)
                .map(|(a, b)| (a - b).norm() / (1.0 + a.norm()))
                .fold(0.0, f64::max);
            // Distance from the trivial solution X_j = 1 - x_{j+1}.
            let trivial = (0..n)
                .map(|j| (c[j] - (Cx::new(1.0, 0.0) - p[(j + 1) % n])).norm())
                .fold(0.0, f64::max);
            scored.push((dev, trivial, c));
        }
        let mut ok: Vec<&(f64, f64, PointC)> =
            scored.iter().filter(|s| s.0 <= LV_CONSERVE_TOL).collect();
        if ok.is_empty() {
            return Err(Error::NoConservingRoot);
        }
        ok.sort_by(|a, b| b.1.total_cmp(&a.1));
        Ok(ok[0].2.clone())
    }

    /// Exact image at a rational point.
    pub fn apply_exact(&self, p: &[BigRational]) -> Result<Vec<BigRational>> {
        if p.len() != self.dim() {
            return Err(Error::Arity {
                expected: self.dim(),
                got: p.len(),
            });
        }
        match &self.solver {
            Solver::Explicit | Solver::HirotaKimura(_) => self
                .components
                .as_ref()
                .expect("components")
                .iter()
                .map(|c| c.eval_exact(p))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| match e {
                    Error::Pole { .. } if matches!(self.solver, Solver::HirotaKimura(_)) => {
                        Error::SingularLinearSystem
                    }
                    e => e,
                }),
            Solver::CyclicLv => lv_cyclic_exact(p),
        }
    }

    pub fn invariants_eval(&self, p: &[Cx]) -> Result<Vec<Cx>> {
        self.check_point(p)?;
        self.invariants
            .iter()
            .map(|i| i.func.eval(p, POLE_TOL))
            .collect()
    }

    pub fn invariants_eval_exact(&self, p: &[BigRational]) -> Result<Vec<BigRational>> {
        self.invariants.iter().map(|i| i.func.eval_exact(p)).collect()
    }

    /// Exact conservation check of every invariant at `count` random
    /// rational points (points hitting a pole are skipped).
    pub fn check_invariants(&self, count: usize, seed: u64) -> Result<()> {
        if self.invariants.is_empty() {
            return Ok(());
        }
        let mut rng = rng_for(seed);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < count && attempts < count * 20 {
            attempts += 1;
            let p: Vec<BigRational> = (0..self.dim()).map(|_| small_rational(&mut rng, 9, 5)).collect();
            let Ok(h0) = self.invariants_eval_exact(&p) else {
                continue;
            };
            let Ok(img) = self.apply_exact(&p) else {
                continue;
            };
            let Ok(h1) = self.invariants_eval_exact(&img) else {
                continue;
            };
            for (inv, (a, b)) in self.invariants.iter().zip(h0.iter().zip(&h1)) {
                if a != b {
                    let dev = crate::algebra::rat_to_f64(&(a - b)).abs();
                    return Err(Error::InvariantNotConserved {
                        map: self.name.clone(),
                        invariant: inv.name.clone(),
                        deviation: dev,
                    });
                }
            }
            checked += 1;
        }
        Ok(())
    }

    /// Cleared relation between image coordinate `j` and the point, as a
    /// polynomial in the coordinates and the image variable: `X·den − num`
    /// for explicit maps, the consistency quadratic for the implicit LV map.
    pub fn relation(&self, j: usize) -> Result<MPoly> {
        let t = image_name(&self.vars[j]);
        let mut all: Vec<String> = self.vars.to_vec();
        all.push(t.clone());
        let vars: Vars = all.into();
        match &self.components {
            Some(c) => {
                let tp = MPoly::var(vars.clone(), &t)?;
                let num = c[j].num().with_vars(&vars)?;
                let den = c[j].den().with_vars(&vars)?;
                Ok(&(&tp * &den) - &num)
            }
            None => lv_consistency(&self.vars, j, &t),
        }
    }

    pub fn descriptor(&self) -> MapDescriptor {
        let components = match &self.components {
            Some(c) if !matches!(self.solver, Solver::HirotaKimura(_)) => {
                c.iter().map(|r| r.to_string()).collect()
            }
            Some(_) => vec![
                "X - x = alpha*(Y*z + Z*y)".into(),
                "Y - y = beta*(Z*x + X*z)".into(),
                "Z - z = gamma*(X*y + Y*x)".into(),
            ],
            None => {
                let n = self.dim();
                (0..n)
                    .map(|j| {
                        let prev = image_name(&self.vars[(j + n - 1) % n]);
                        format!(
                            "{}*(1 - {}) = {}*(1 - {})",
                            image_name(&self.vars[j]),
                            prev,
                            self.vars[j],
                            self.vars[(j + 1) % n]
                        )
                    })
                    .collect()
            }
        };
        MapDescriptor {
            name: self.name.clone(),
            d: self.dim(),
            vars: self.vars.to_vec(),
            params: self
                .params
                .iter()
                .filter(|(k, _)| {
                    // Derived Euler parameters are reproduced from I, J, K.
                    !(self.params.contains_key("I") && ["alpha", "beta", "gamma"].contains(&k.as_str()))
                })
                .map(|(k, v)| (k.clone(), fmt_rational(v)))
                .collect(),
            components,
            invariants: self
                .invariants
                .iter()
                .map(|i| (i.name.clone(), i.func.to_string()))
                .collect(),
        }
    }
}

/// Solves `X - x = α(Yz + Zy)`, `Y - y = β(Zx + Xz)`, `Z - z = γ(Xy + Yx)`
/// for `(X, Y, Z)`.
pub fn hirota_kimura_solve(abg: [Cx; 3], p: [Cx; 3]) -> Result<[Cx; 3]> {
    let [al, be, ga] = abg;
    let [x, y, z] = p;
    let one = Cx::new(1.0, 0.0);
    let m = [
        [one, -al * z, -al * y],
        [-be * z, one, -be * x],
        [-ga * y, -ga * x, one],
    ];
    let det = |m: &[[Cx; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let scale: f64 = m
        .iter()
        .map(|r| r.iter().map(|c| c.norm()).fold(0.0, f64::max))
        .product();
    if d.norm() <= POLE_TOL * (1.0 + scale) {
        return Err(Error::SingularLinearSystem);
    }
    let rhs = [x, y, z];
    let mut out = [Cx::new(0.0, 0.0); 3];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        out[col] = det(&mc) / d;
    }
    Ok(out)
}

/// Möbius chain for the cyclic LV system: with `X_1 = t`,
/// `X_j = c_j/(1 − X_{j−1})`, each `X_j = (p t + q)/(r t + s)`. Returns the
/// quadratic `A t² + B t + C` whose roots close the cycle
/// (`X_1(1 − X_d) = c_1`), for a generic ring element type.
fn lv_quadratic<T>(c: &[T], one: T, zero: T) -> (T, T, T)
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Neg<Output = T>,
{
    let (mut p, mut q, mut r, mut s) = (one.clone(), zero.clone(), zero, one);
    for cj in &c[1..] {
        let np = cj.clone() * r.clone();
        let nq = cj.clone() * s.clone();
        let nr = r - p;
        let ns = s - q;
        p = np;
        q = nq;
        r = nr;
        s = ns;
    }
    let c1 = c[0].clone();
    let a = r.clone() - p;
    let b = s.clone() - q - c1.clone() * r;
    let cc = -(c1 * s);
    (a, b, cc)
}

fn lv_chain_cx(c: &[Cx], t: Cx) -> Result<PointC> {
    let mut out = vec![t];
    for cj in &c[1..] {
        let den = Cx::new(1.0, 0.0) - *out.last().unwrap();
        if cx_close_to_zero(den, *cj) {
            return Err(Error::Pole {
                context: "cyclic Lotka-Volterra chain".into(),
            });
        }
        out.push(cj / den);
    }
    Ok(out)
}

/// Both solutions of the cyclic LV system `X_j(1 − X_{j−1}) = x_j(1 − x_{j+1})`
/// (one of them is always the trivial `X_j = 1 − x_{j+1}`).
pub fn lv_cyclic_candidates(x: &[Cx]) -> Result<Vec<PointC>> {
    let n = x.len();
    let one = Cx::new(1.0, 0.0);
    let c: Vec<Cx> = (0..n).map(|j| x[j] * (one - x[(j + 1) % n])).collect();
    let (a, b, cc) = lv_quadratic(&c, one, Cx::new(0.0, 0.0));
    let scale = a.norm().max(b.norm()).max(cc.norm());
    let ts: Vec<Cx> = if a.norm() <= 1e-14 * scale {
        if b.norm() == 0.0 {
            return Err(Error::NoConservingRoot);
        }
        vec![-cc / b]
    } else {
        let disc = (b * b - 4.0 * a * cc).sqrt();
        // Stable pair: q = -(b + sign·disc)/2.
        let qv = if (b.conj() * disc).re >= 0.0 {
            -(b + disc) / 2.0
        } else {
            -(b - disc) / 2.0
        };
        if qv.norm() == 0.0 {
            vec![Cx::new(0.0, 0.0), Cx::new(0.0, 0.0)]
        } else {
            vec![qv / a, cc / qv]
        }
    };
    let mut out = Vec::new();
    for t in ts {
        if let Ok(v) = lv_chain_cx(&c, t) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Pole {
            context: "cyclic Lotka-Volterra chain".into(),
        });
    }
    Ok(out)
}

/// Exact non-trivial solution of the cyclic LV system (Vieta: the product
/// of roots is known and one root is `1 − x_2`).
pub fn lv_cyclic_exact(x: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = x.len();
    let one = BigRational::one();
    let c: Vec<BigRational> = (0..n).map(|j| &x[j] * (&one - &x[(j + 1) % n])).collect();
    let (a, b, cc) = lv_quadratic(&c, one.clone(), BigRational::zero());
    let trivial = &one - &x[1];
    let t = if a.is_zero() {
        if b.is_zero() {
            return Err(Error::NoConservingRoot);
        }
        -cc / b
    } else {
        -(b / a) - &trivial
    };
    let mut out = vec![t];
    for cj in &c[1..] {
        let den = &one - out.last().unwrap();
        if den.is_zero() {
            return Err(Error::Pole {
                context: "cyclic Lotka-Volterra chain".into(),
            });
        }
        out.push(cj / den);
    }
    let trivial_sol: Vec<BigRational> = (0..n).map(|j| &one - &x[(j + 1) % n]).collect();
    let r0: BigRational = x.iter().fold(one.clone(), |acc, v| acc * v);
    let r1: BigRational = out.iter().fold(one.clone(), |acc, v| acc * v);
    if out == trivial_sol && r0 != r1 {
        return Err(Error::NoConservingRoot);
    }
    Ok(out)
}

/// Consistency quadratic for image coordinate `j` of the cyclic LV map, as
/// a polynomial in the image variable `t_name` and the coordinates.
fn lv_consistency(coords: &Vars, j: usize, t_name: &str) -> Result<MPoly> {
    let n = coords.len();
    let mut all: Vec<String> = coords.to_vec();
    all.push(t_name.to_string());
    let vars: Vars = all.into();
    let one = MPoly::one(vars.clone());
    let zero = MPoly::zero(vars.clone());
    // Rotate so that coordinate j comes first.
    let c: Vec<MPoly> = (0..n)
        .map(|k| {
            let i = (j + k) % n;
            let xi = MPoly::var(vars.clone(), &coords[i]).unwrap();
            let xn = MPoly::var(vars.clone(), &coords[(i + 1) % n]).unwrap();
            &xi * &(&one - &xn)
        })
        .collect();
    let (a, b, cc) = lv_quadratic(&c, one, zero);
    let t = MPoly::var(vars.clone(), t_name)?;
    Ok(&(&(&a * &t.pow(2)) + &(&b * &t)) + &cc)
}

/// Descriptor list for every map that needs no parameters plus the given
/// parametrized instances.
pub fn describe_all(instances: &[(&str, Params)]) -> Result<Vec<MapDescriptor>> {
    instances
        .iter()
        .map(|(n, p)| catalog_get(n, p).map(|m| m.descriptor()))
        .collect()
}

/// Convenience: parameters from `(name, "p/q")` pairs.
pub fn params_from(pairs: &[(&str, &str)]) -> Result<Params> {
    pairs
        .iter()
        .map(|(k, v)| Ok((k.to_string(), parse_rational(v)?)))
        .collect()
}

/// Converts a rational point for numeric use.
pub fn point_to_cx(p: &[BigRational]) -> PointC {
    p.iter().map(to_cx).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    #[test]
    fn lyness5_step() {
        let m = catalog_get("lyness5", &Params::new()).unwrap();
        assert_eq!(m.apply(&[cx(1.0), cx(1.0)]).unwrap(), vec![cx(2.0), cx(1.0)]);
    }

    #[test]
    fn lv3_concrete_step_and_invariants() {
        let m = catalog_get("lv3", &Params::new()).unwrap();
        let img = m.apply_exact(&[rat(2), rat(3), rat(4)]).unwrap();
        assert_eq!(img, vec![rat(4), rat(3), rat(2)]);
        let h = m.invariants_eval_exact(&[rat(2), rat(3), rat(4)]).unwrap();
        assert_eq!(h, vec![rat(24), rat(-6)]);
        assert_eq!(m.invariants_eval_exact(&img).unwrap(), h);
    }

    #[test]
    fn lv3_symmetric_fixed_point() {
        let m = catalog_get("lv3", &Params::new()).unwrap();
        assert_eq!(m.apply(&[cx(1.0); 3]).unwrap(), vec![cx(1.0); 3]);
    }

    #[test]
    fn unknown_and_missing() {
        assert!(matches!(catalog_get("nope", &Params::new()), Err(Error::UnknownMap(_))));
        assert!(matches!(
            catalog_get("lyness2", &Params::new()),
            Err(Error::MissingParameter { .. })
        ));
        let p = params_from(&[("a", "2"), ("b", "1/2")]).unwrap();
        assert!(matches!(
            catalog_get("moebius2d", &p),
            Err(Error::DegenerateParameters { .. })
        ));
    }

    #[test]
    fn euler_zero_parameters_is_identity() {
        let p = params_from(&[("alpha", "0"), ("beta", "0"), ("gamma", "0")]).unwrap();
        let m = catalog_get("euler", &p).unwrap();
        let pt = [Cx::new(0.3, 1.0), cx(-2.0), Cx::new(0.0, 0.5)];
        let img = m.apply(&pt).unwrap();
        for (a, b) in img.iter().zip(pt.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn toda_sum_invariant() {
        let m = catalog_get("toda3", &Params::new()).unwrap();
        let pt = [cx(1.0), cx(2.0), cx(-3.0), cx(0.5), cx(-1.0), cx(0.5)];
        assert!(m.invariants_eval(&pt).unwrap()[0].norm() < 1e-15);
    }

    #[test]
    fn descriptor_round_trips() {
        let p = params_from(&[("a", "1"), ("b", "3")]).unwrap();
        let d = catalog_get("moebius2d", &p).unwrap().descriptor();
        let json = serde_json::to_string(&d).unwrap();
        let back: MapDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.load().unwrap().descriptor(), d);
    }

    #[test]
    fn lv4_relation_has_trivial_root() {
        let m = catalog_get("lv4", &Params::new()).unwrap();
        let rel = m.relation(0).unwrap();
        assert_eq!(rel.degree_in("X"), 2);
        // X = 1 - y solves the consistency condition identically.
        let one_minus_y = MPoly::parse("1 - y", rel.vars()).unwrap();
        assert!(rel.subst("X", &one_minus_y).is_zero());
    }
}
