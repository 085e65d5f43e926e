//! Invariant-variety generators γ⁽ⁿ⁾, membership tests and seeded sampling
//! of points on a variety.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    parse_poly, parse_rational, qi_to_cx, roots_exact, Cx, MPoly, Qi, QiPoly, RatFunc, Vars,
    DEFAULT_TOL,
};
use crate::catalog::{IntegrableMap, PointC, POLE_TOL, QRT_PARAM_NAMES};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, grid_point, rng_for};

/// Redraws before the sampler gives up.
pub const MAX_DRAWS: usize = 32;
/// Sampled coordinates smaller than this in modulus are rejected.
pub const MIN_COORD: f64 = 1e-3;
/// Relative size under which an excluded stratum counts as hit.
const EXCLUDED_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Checksum {
    pub at: Vec<String>,
    pub value: String,
}

/// One generator record of the shipped catalog.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorEntry {
    pub map: String,
    pub period: u32,
    pub symbols: Vec<String>,
    pub gammas: Vec<String>,
    pub solve_for: Vec<String>,
    #[serde(default)]
    pub excluded: Vec<String>,
    #[serde(default)]
    pub checks: Vec<Checksum>,
}

const CATALOG_JSON: &str = include_str!("../data/varieties.json");

pub fn generator_entries() -> &'static [GeneratorEntry] {
    static ENTRIES: OnceLock<Vec<GeneratorEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("shipped generator catalog parses"))
}

/// Periods with a known generator. QRT generators come from the
/// biquadratic ones.
pub fn available_periods(map: &str) -> Vec<u32> {
    let key = if map == "qrt" { "biquad" } else { map };
    generator_entries()
        .iter()
        .filter(|e| e.map == key)
        .map(|e| e.period)
        .collect()
}

pub fn entry(map: &str, period: u32) -> Result<&'static GeneratorEntry> {
    generator_entries()
        .iter()
        .find(|e| e.map == map && e.period == period)
        .ok_or_else(|| Error::UnknownGenerator {
            map: map.to_string(),
            period,
            available: available_periods(map),
        })
}

/// The generator polynomials of an entry, over its symbols.
pub fn gamma_symbolic(map: &str, period: u32) -> Result<(Vars, Vec<MPoly>)> {
    let e = entry(map, period)?;
    let vars: Vars = e.symbols.clone().into();
    let gs = e
        .gammas
        .iter()
        .map(|g| parse_poly(g, &vars))
        .collect::<Result<Vec<_>>>()?;
    Ok((vars, gs))
}

/// Evaluates each recorded checksum point; returns `(expected, got)` pairs.
pub fn checksum_values(map: &str, period: u32) -> Result<Vec<(BigRational, BigRational)>> {
    let e = entry(map, period)?;
    let (_, gs) = gamma_symbolic(map, period)?;
    e.checks
        .iter()
        .map(|c| {
            let at = c.at.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Ok((parse_rational(&c.value)?, gs[0].eval_exact(&at)?))
        })
        .collect()
}

#[derive(Clone, Debug)]
enum Solver {
    Single {
        var: String,
        poly: MPoly,
    },
    /// First generator linear in `first`; its solution substituted into the
    /// second generator leaves `poly` in `second`.
    Pair {
        first: String,
        first_value: RatFunc,
        second: String,
        poly: MPoly,
    },
}

/// γ⁽ⁿ⁾ of one map together with its substitution into the coordinates.
#[derive(Clone, Debug)]
pub struct VarietyGenerator {
    pub map_name: String,
    pub period: u32,
    pub symbols: Vars,
    /// Generators over `symbols`, parameters already substituted.
    pub gammas: Vec<MPoly>,
    /// Each symbol as a function of the coordinates.
    pub substitution: Vec<RatFunc>,
    /// Numerators of γ_α(H(x)) over the coordinates.
    pub composed: Vec<MPoly>,
    pub solve_for: Vec<String>,
    excluded: Vec<RatFunc>,
    solver: Solver,
}

/// Numerator of `g` with each symbol replaced by a rational function of
/// the coordinates.
pub fn compose_generator(g: &MPoly, symbols: &Vars, subs: &[RatFunc], coords: &Vars) -> Result<RatFunc> {
    let mut all: Vec<String> = coords.to_vec();
    let renamed: Vec<(String, String)> = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), format!("__sym{i}")))
        .collect();
    all.extend(renamed.iter().map(|(_, t)| t.clone()));
    let big: Vars = all.into();
    let pairs: Vec<(&str, &str)> = renamed.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut num = g.rename(&pairs).with_vars(&big)?;
    let mut den = MPoly::one(big.clone());
    for (i, (_, t)) in renamed.iter().enumerate() {
        let h = subs[i].with_vars(&big)?;
        let r = crate::algebra::compose_poly(&num, t, &h);
        num = r.num().with_vars(&big)?;
        den = &den * &r.den().with_vars(&big)?;
    }
    // Left unreduced: the numerator is coprime to the denominator for every
    // generator of top degree, and a gcd here is costly.
    RatFunc::new(num.with_vars(coords)?, den.with_vars(coords)?)
}

fn symbol_function(map: &IntegrableMap, s: &str) -> Option<RatFunc> {
    if let Some(h) = map.invariant(s) {
        return Some(h.clone());
    }
    if map.vars().iter().any(|v| v == s) {
        return Some(RatFunc::from_poly(MPoly::var(map.vars().clone(), s).ok()?));
    }
    None
}

impl VarietyGenerator {
    fn build(
        map: &IntegrableMap,
        period: u32,
        symbols: Vars,
        gammas: Vec<MPoly>,
        solve_for: Vec<String>,
        excluded_syms: &[String],
    ) -> Result<VarietyGenerator> {
        let params = map.params().clone();
        let gammas: Vec<MPoly> = gammas
            .iter()
            .map(|g| g.specialize(|n| params.get(n).cloned()))
            .collect();
        let mut substitution = Vec::new();
        for s in symbols.iter() {
            match symbol_function(map, s) {
                Some(f) => substitution.push(f),
                None if params.contains_key(s) => {
                    substitution.push(RatFunc::from_poly(MPoly::constant(
                        map.vars().clone(),
                        params[s].clone(),
                    )))
                }
                None => return Err(Error::UnknownVariable(s.clone())),
            }
        }
        let coords = map.vars().clone();
        let composed = gammas
            .iter()
            .map(|g| compose_generator(g, &symbols, &substitution, &coords).map(|r| r.num().clone()))
            .collect::<Result<Vec<_>>>()?;
        let excluded = excluded_syms
            .iter()
            .map(|s| symbol_function(map, s).ok_or_else(|| Error::UnknownVariable(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        let solver = match (composed.len(), solve_for.len()) {
            (1, 1) => Solver::Single {
                var: solve_for[0].clone(),
                poly: composed[0].clone(),
            },
            (2, 2) => {
                let (first, second) = (solve_for[0].clone(), solve_for[1].clone());
                let c = composed[0].coeffs_in(&first);
                if c.len() != 2 {
                    return Err(Error::Invalid(format!(
                        "first generator must be linear in {first}"
                    )));
                }
                let first_value = RatFunc::new(-&c[0], c[1].clone())?;
                let poly = RatFunc::from_poly(composed[1].clone())
                    .subst(&first, &first_value)
                    .num()
                    .clone();
                Solver::Pair {
                    first,
                    first_value,
                    second,
                    poly,
                }
            }
            _ => {
                return Err(Error::Invalid(
                    "sampling supports one or two generators with as many solve variables".into(),
                ))
            }
        };
        Ok(VarietyGenerator {
            map_name: map.name().to_string(),
            period,
            symbols,
            gammas,
            substitution,
            composed,
            solve_for,
            excluded,
            solver,
        })
    }

    /// Values of the generator symbols at `p`.
    pub fn symbol_values(&self, p: &[Cx]) -> Result<Vec<Cx>> {
        self.substitution.iter().map(|f| f.eval(p, POLE_TOL)).collect()
    }
}

/// Generator of period `period` for `map` (for QRT built from the
/// biquadratic generators with `q = q' + h·q''`).
pub fn gamma_get(map: &IntegrableMap, period: u32) -> Result<VarietyGenerator> {
    if map.name() == "qrt" {
        let (syms, gs) = gamma_symbolic("biquad", period)?;
        let hv: Vars = vec!["h".to_string()].into();
        let h = MPoly::var(hv.clone(), "h")?;
        let subs: Vec<RatFunc> = (0..6)
            .map(|i| {
                let p1 = map.param(QRT_PARAM_NAMES[i]).cloned().unwrap_or_else(BigRational::zero);
                let p2 = map.param(QRT_PARAM_NAMES[i + 6]).cloned().unwrap_or_else(BigRational::zero);
                RatFunc::from_poly(&MPoly::constant(hv.clone(), p1) + &h.scale(&p2))
            })
            .collect();
        let g = compose_generator(&gs[0], &syms, &subs, &hv)?.num().clone();
        if g.is_constant() {
            return Err(Error::DegenerateParameters {
                map: "qrt".into(),
                reason: format!("the period-{period} generator is constant in h"),
            });
        }
        return VarietyGenerator::build(map, period, hv, vec![g], vec!["y".into()], &[]);
    }
    let e = entry(map.name(), period)?;
    let (syms, gs) = gamma_symbolic(map.name(), period)?;
    VarietyGenerator::build(map, period, syms, gs, e.solve_for.clone(), &e.excluded)
}

/// Residual of each generator at `p`: `|γ_α| / (1 + Σ|terms|)`.
pub fn membership_residuals(g: &VarietyGenerator, p: &[Cx]) -> Result<Vec<f64>> {
    let vals = g.symbol_values(p)?;
    g.gammas
        .iter()
        .map(|gam| {
            let (v, scale) = gam.eval_with_scale(&vals)?;
            Ok(v.norm() / (1.0 + scale))
        })
        .collect()
}

/// Whether every generator vanishes at `p` within `tol`, with residuals.
pub fn membership(g: &VarietyGenerator, p: &[Cx], tol: f64) -> Result<(bool, Vec<f64>)> {
    let r = membership_residuals(g, p)?;
    Ok((r.iter().all(|v| *v <= tol), r))
}

/// A point on a variety together with how it was drawn.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub point: PointC,
    /// Index among the admissible lifts, in canonical root order.
    pub root_index: usize,
    /// Number of draws used (1 = first draw succeeded).
    pub draws: usize,
}

fn on_excluded(g: &VarietyGenerator, p: &[Cx]) -> bool {
    g.excluded.iter().any(|f| {
        let v = f.eval(p, POLE_TOL);
        match v {
            Ok(v) => {
                let (_, scale) = f.num().eval_with_scale(p).unwrap_or((v, 1.0));
                v.norm() <= EXCLUDED_TOL * (1.0 + scale)
            }
            Err(_) => true,
        }
    })
}

fn admissible(g: &VarietyGenerator, p: &[Cx]) -> bool {
    if p.iter().any(|c| !c.re.is_finite() || !c.im.is_finite() || c.norm() < MIN_COORD) {
        return false;
    }
    if on_excluded(g, p) {
        return false;
    }
    matches!(membership(g, p, DEFAULT_TOL), Ok((true, _)))
}

/// Every admissible point of the variety above the drawn free coordinates,
/// in canonical root order.
pub fn lifts(g: &VarietyGenerator, coords: &Vars, drawn: &[(String, Qi)]) -> Result<Vec<PointC>> {
    let lookup = |n: &str| drawn.iter().find(|(k, _)| k == n).map(|(_, v)| v.clone());
    let assemble = |extra: &[(&str, Cx)]| -> PointC {
        coords
            .iter()
            .map(|c| {
                extra
                    .iter()
                    .find(|(k, _)| k == c)
                    .map(|(_, v)| *v)
                    .or_else(|| lookup(c).map(|q| qi_to_cx(&q)))
                    .unwrap_or(Cx::new(f64::NAN, 0.0))
            })
            .collect()
    };
    let mut out = Vec::new();
    match &g.solver {
        Solver::Single { var, poly } => {
            let up = QiPoly::from_mpoly(poly, var, lookup)?;
            if up.degree() == 0 {
                return Err(Error::DegenerateRootProblem);
            }
            for r in roots_exact(&up, DEFAULT_TOL)? {
                let p = assemble(&[(var, r)]);
                if admissible(g, &p) {
                    out.push(p);
                }
            }
        }
        Solver::Pair {
            first,
            first_value,
            second,
            poly,
        } => {
            let up = QiPoly::from_mpoly(poly, second, lookup)?;
            if up.degree() == 0 {
                return Err(Error::DegenerateRootProblem);
            }
            for r in roots_exact(&up, DEFAULT_TOL)? {
                let partial = assemble(&[(second, r), (first, Cx::new(0.0, 0.0))]);
                let Ok(fv) = first_value.eval(&partial, POLE_TOL) else {
                    continue;
                };
                let p = assemble(&[(second, r), (first, fv)]);
                if admissible(g, &p) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Draws the free coordinates of a variety sample.
pub fn draw_free(g: &VarietyGenerator, coords: &Vars, seed: u64) -> Vec<(String, Qi)> {
    let mut rng = rng_for(seed);
    coords
        .iter()
        .filter(|c| !g.solve_for.contains(c))
        .map(|c| (c.clone(), grid_point(&mut rng)))
        .collect()
}

/// A seeded point on the variety: free coordinates from the dyadic grid,
/// the rest solved from the generators; the first admissible root in
/// canonical order is taken.
pub fn sample_on_variety(g: &VarietyGenerator, coords: &Vars, seed: u64) -> Result<Sample> {
    let mut last = String::from("no admissible root");
    for draw in 0..MAX_DRAWS {
        let drawn = draw_free(g, coords, derive_seed(seed, draw as u64));
        match lifts(g, coords, &drawn) {
            Ok(pts) if !pts.is_empty() => {
                return Ok(Sample {
                    point: pts[0].clone(),
                    root_index: 0,
                    draws: draw + 1,
                })
            }
            Ok(_) => {}
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::SamplingFailed {
        attempts: MAX_DRAWS,
        reason: last,
    })
}

/// [`sample_on_variety`] for a map's own generator.
pub fn sample_for_map(map: &IntegrableMap, g: &VarietyGenerator, seed: u64) -> Result<Sample> {
    sample_on_variety(g, map.vars(), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_frac};
    use crate::catalog::{catalog_get, params_from, Params};

    fn lv3() -> IntegrableMap {
        catalog_get("lv3", &Params::new()).unwrap()
    }

    #[test]
    fn printed_generators_load() {
        let (_, g) = gamma_symbolic("lv3", 3).unwrap();
        assert_eq!(g[0].to_string(), "r^2 - r*s + s^2 + r + s + 1");
        let (_, g) = gamma_symbolic("moebius2d", 6).unwrap();
        assert_eq!(g[0], parse_poly("1 - h + h^2 + 3*a*b*h", g[0].vars()).unwrap());
        let (_, g) = gamma_symbolic("lv3", 5).unwrap();
        assert_eq!(g[0].num_terms(), 24);
    }

    #[test]
    fn unknown_pair_lists_periods() {
        match entry("lv3", 7) {
            Err(Error::UnknownGenerator { available, .. }) => assert_eq!(available, vec![2, 3, 4, 5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn checksums_match() {
        for (m, n) in [("lv3", 5), ("biquad", 5)] {
            for (want, got) in checksum_values(m, n).unwrap() {
                assert_eq!(want, got);
            }
        }
    }

    #[test]
    fn lv3_period2_membership() {
        let g = gamma_get(&lv3(), 2).unwrap();
        let on = [Cx::new(2.0, 0.0), Cx::new(3.0, 0.0), Cx::new(1.5, 0.0)];
        assert!(membership(&g, &on, 1e-12).unwrap().0);
        let off = [Cx::new(2.0, 0.0), Cx::new(3.0, 0.0), Cx::new(4.0, 0.0)];
        let (ok, r) = membership(&g, &off, 1e-9).unwrap();
        assert!(!ok && r[0] > 0.1);
    }

    #[test]
    fn lv3_period2_lift_is_exact() {
        let m = lv3();
        let g = gamma_get(&m, 2).unwrap();
        let drawn = vec![
            ("x".to_string(), crate::algebra::qi_real(rat(2))),
            ("y".to_string(), crate::algebra::qi_real(rat(3))),
        ];
        let pts = lifts(&g, m.vars(), &drawn).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0][2] - Cx::new(1.5, 0.0)).norm() < 1e-15);
        let _ = rat_frac(3, 2);
    }

    #[test]
    fn sampling_is_deterministic_and_sound() {
        let m = lv3();
        for n in 2..=5 {
            let g = gamma_get(&m, n).unwrap();
            for seed in 0..5 {
                let a = sample_for_map(&m, &g, seed).unwrap();
                let b = sample_for_map(&m, &g, seed).unwrap();
                assert_eq!(a, b);
                assert!(membership(&g, &a.point, 1e-9).unwrap().0);
            }
        }
    }

    #[test]
    fn toda_pair_sampler() {
        let m = catalog_get("toda3", &Params::new()).unwrap();
        let g = gamma_get(&m, 3).unwrap();
        let s = sample_for_map(&m, &g, 11).unwrap();
        let h = m.invariants_eval(&s.point).unwrap();
        assert!(h[0].norm() < 1e-9 && h[1].norm() < 1e-9);
    }

    #[test]
    fn moebius_linear_case() {
        let m = catalog_get("moebius2d", &params_from(&[("a", "1"), ("b", "0")]).unwrap()).unwrap();
        let g = gamma_get(&m, 2).unwrap();
        let s = sample_for_map(&m, &g, 3).unwrap();
        assert!((s.point[1] + Cx::new(1.0, 0.0)).norm() < 1e-15);
    }
}
