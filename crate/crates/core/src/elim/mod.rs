//! Recurrence polynomials `F(x, X)` by elimination: iterated resultants of
//! the map relations and the variety generators, followed by removal of the
//! factors that do not vanish on true transitions of the map.

mod fit;
mod fixtures;
mod reduced;

pub use fixtures::{check_fixture, fixture, fixtures, fixtures_for, Fixture, FixtureVerdict, Radical, BEHAVIOR_ORBITS};
pub use reduced::{
    euler_routes, example_route, lv3_route, lv3_route_second, lv4_reduced, omega, toda_printed_second,
    toda_reduced,
};

use crate::algebra::{content_in, exact_divide, resultant, squarefree_in, Cx, MPoly, Vars};
use crate::catalog::IntegrableMap;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::varieties::{sample_for_map, VarietyGenerator};

/// Transitions a factor must vanish on to be kept.
pub const FILTER_SAMPLES: usize = 8;
/// Fresh transitions every returned factor is re-checked on.
pub const SOUNDNESS_SAMPLES: usize = 32;
/// Relative residual below which a polynomial counts as vanishing.
pub const VANISH_TOL: f64 = 1e-8;

const FIT_START: u64 = 1 << 20;
const SOUNDNESS_START: u64 = 1 << 21;

/// Relations to eliminate from, the variables to remove (at most two, in
/// order) and the variables the result may involve.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationProblem {
    pub relations: Vec<MPoly>,
    pub eliminate: Vec<String>,
    pub keep: Vec<String>,
}

impl EliminationProblem {
    pub fn new(relations: Vec<MPoly>, eliminate: Vec<String>, keep: Vec<String>) -> Result<Self> {
        if eliminate.is_empty() || eliminate.len() > 2 {
            return Err(Error::Invalid(format!(
                "between one and two variables can be eliminated, got {}",
                eliminate.len()
            )));
        }
        if let Some(v) = eliminate.iter().find(|v| keep.contains(v)) {
            return Err(Error::Invalid(format!("`{v}` is both eliminated and kept")));
        }
        if relations.len() < 2 {
            return Err(Error::Invalid("at least two relations are needed".into()));
        }
        for r in &relations {
            if let Some(v) = r
                .used_vars()
                .into_iter()
                .find(|v| !eliminate.contains(v) && !keep.contains(v))
            {
                return Err(Error::UnknownVariable(v));
            }
        }
        let vars = relations
            .iter()
            .fold(relations[0].vars().clone(), |acc, r| MPoly::union_vars(&acc, r.vars()));
        let relations = relations
            .iter()
            .map(|r| r.with_vars(&vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(EliminationProblem {
            relations,
            eliminate,
            keep,
        })
    }

    pub fn keep_vars(&self) -> Vars {
        self.keep.clone().into()
    }
}

/// Source of true transitions: values of the keep variables, in order.
pub trait TransitionSampler {
    fn transition(&self, index: u64) -> Result<Vec<Cx>>;
}

impl<F> TransitionSampler for F
where
    F: Fn(u64) -> Result<Vec<Cx>>,
{
    fn transition(&self, index: u64) -> Result<Vec<Cx>> {
        self(index)
    }
}

/// Transitions `p → f(p)` of a catalog map from seeded points on a variety.
pub struct MapTransitions<'a> {
    pub map: &'a IntegrableMap,
    pub generator: &'a VarietyGenerator,
    pub keep: Vec<String>,
    pub seed: u64,
}

impl TransitionSampler for MapTransitions<'_> {
    fn transition(&self, index: u64) -> Result<Vec<Cx>> {
        let s = sample_for_map(self.map, self.generator, derive_seed(self.seed, index))?;
        let img = self.map.apply(&s.point)?;
        transition_values(self.map, &s.point, &img, &self.keep)
    }
}

/// Looks up each name among the coordinates of `p`, then among the image
/// variables (filled from `img`).
pub fn transition_values(map: &IntegrableMap, p: &[Cx], img: &[Cx], names: &[String]) -> Result<Vec<Cx>> {
    let images = map.image_vars();
    names
        .iter()
        .map(|k| {
            if let Some(i) = map.vars().iter().position(|v| v == k) {
                Ok(p[i])
            } else if let Some(i) = images.iter().position(|v| v == k) {
                Ok(img[i])
            } else {
                Err(Error::UnknownVariable(k.clone()))
            }
        })
        .collect()
}

/// The relation for image coordinate `index` together with the generator
/// numerators; keeps every coordinate not eliminated and the image variable.
pub fn problem_for(
    map: &IntegrableMap,
    generator: &VarietyGenerator,
    index: usize,
    eliminate: &[String],
) -> Result<EliminationProblem> {
    let mut relations = vec![map.relation(index)?];
    relations.extend(generator.composed.iter().cloned());
    let mut keep: Vec<String> = map
        .vars()
        .iter()
        .filter(|v| !eliminate.contains(v))
        .cloned()
        .collect();
    keep.push(map.image_vars()[index].clone());
    EliminationProblem::new(relations, eliminate.to_vec(), keep)
}

/// `|p(v)|` relative to the largest term of `p` at `v`; variables of `p`
/// outside `keep` must not occur.
pub fn relative_residual(p: &MPoly, keep: &[String], vals: &[Cx]) -> f64 {
    let point: Vec<Cx> = p
        .vars()
        .iter()
        .map(|v| {
            keep.iter()
                .position(|k| k == v)
                .map_or(Cx::new(0.0, 0.0), |i| vals[i])
        })
        .collect();
    match p.eval_with_scale(&point) {
        Ok((_, 0.0)) => f64::INFINITY,
        Ok((v, s)) => v.norm() / s,
        Err(_) => f64::INFINITY,
    }
}

pub fn max_residual(p: &MPoly, keep: &[String], samples: &[Vec<Cx>]) -> f64 {
    samples
        .iter()
        .map(|s| relative_residual(p, keep, s))
        .fold(0.0, f64::max)
}

/// `count` transitions from index `start` on, skipping indices the sampler
/// cannot serve.
pub fn collect_transitions(s: &dyn TransitionSampler, start: u64, count: usize) -> Result<Vec<Vec<Cx>>> {
    let mut out = Vec::with_capacity(count);
    let limit = start + 8 * count as u64 + 16;
    let mut last = String::from("no attempt");
    let mut i = start;
    while out.len() < count && i < limit {
        match s.transition(i) {
            Ok(v) => out.push(v),
            Err(e) => last = e.to_string(),
        }
        i += 1;
    }
    if out.len() < count {
        return Err(Error::SamplingFailed {
            attempts: (i - start) as usize,
            reason: last,
        });
    }
    Ok(out)
}

fn eliminate_one(rels: &[MPoly], v: &str) -> Result<Vec<MPoly>> {
    let (with, mut out): (Vec<MPoly>, Vec<MPoly>) = rels.iter().cloned().partition(|p| p.uses_var(v));
    match with.len() {
        0 => Err(Error::NothingToEliminate { var: v.to_string() }),
        1 => {
            // Nothing left to pair with: the relation must hold for every
            // value of `v`, so only its content in `v` survives.
            let c = content_in(&with[0], v);
            if c.is_constant() {
                return Err(Error::Invalid(format!(
                    "a single relation remains in `{v}` and its coefficients share no factor"
                )));
            }
            out.push(c);
            Ok(out)
        }
        _ => {
            let mut order: Vec<usize> = (0..with.len()).collect();
            order.sort_by_key(|&i| (with[i].degree_in(v), with[i].num_terms()));
            'pivot: for &piv in &order {
                let mut res = Vec::new();
                for (i, r) in with.iter().enumerate() {
                    if i == piv {
                        continue;
                    }
                    let r = resultant(&with[piv], r, v)?;
                    if r.is_zero() {
                        continue 'pivot;
                    }
                    res.push(r.primitive());
                }
                out.extend(res);
                return Ok(out);
            }
            Err(Error::ResultantCollapsed { var: v.to_string() })
        }
    }
}

fn run_chain(prob: &EliminationProblem, order: &[String]) -> Result<Vec<MPoly>> {
    let mut cur = prob.relations.clone();
    for v in order {
        cur = eliminate_one(&cur, v)?;
    }
    Ok(cur
        .into_iter()
        .filter(|p| !p.is_constant() && prob.keep.iter().any(|k| p.uses_var(k)))
        .collect())
}

/// Polynomials free of the eliminated variables, before any filtering. A
/// collapse in the listed order is retried in the reverse order.
pub fn resultant_chain(prob: &EliminationProblem) -> Result<Vec<MPoly>> {
    match run_chain(prob, &prob.eliminate) {
        Err(Error::ResultantCollapsed { .. }) if prob.eliminate.len() == 2 => {
            let rev: Vec<String> = prob.eliminate.iter().rev().cloned().collect();
            run_chain(prob, &rev)
        }
        r => r,
    }
}

/// Square-free part with respect to every listed variable it involves.
pub fn squarefree(p: &MPoly, vars: &[String]) -> MPoly {
    vars.iter()
        .filter(|v| p.uses_var(v))
        .fold(p.primitive(), |acc, v| squarefree_in(&acc, v))
}

fn split_factors(
    p: &MPoly,
    keep: &[String],
    filter: &[Vec<Cx>],
    sampler: &dyn TransitionSampler,
    best: &mut Vec<f64>,
) -> Result<Vec<MPoly>> {
    let mut pieces = Vec::new();
    let mut rest = p.primitive();
    for v in keep {
        if rest.degree_in(v) == 0 {
            continue;
        }
        let c = content_in(&rest, v);
        if !c.is_constant() {
            rest = exact_divide(&rest, &c)?;
            pieces.push(c);
        }
    }
    pieces.push(rest);
    let mut out = Vec::new();
    for piece in pieces {
        let piece = squarefree(&piece, keep);
        if piece.is_constant() {
            continue;
        }
        let r = max_residual(&piece, keep, filter);
        best.push(r);
        if r > VANISH_TOL {
            continue;
        }
        out.extend(fit::separate(&piece, keep, filter, sampler)?);
    }
    Ok(out)
}

/// Recurrence polynomials of the problem: every resultant factor that
/// vanishes on all filter transitions and on [`SOUNDNESS_SAMPLES`] fresh
/// ones, primitive over the keep variables, lowest degree first.
pub fn eliminate(prob: &EliminationProblem, sampler: &dyn TransitionSampler) -> Result<Vec<MPoly>> {
    let chain = resultant_chain(prob)?;
    let filter = collect_transitions(sampler, 0, FILTER_SAMPLES)?;
    let mut best = Vec::new();
    let mut kept: Vec<MPoly> = Vec::new();
    for p in &chain {
        for f in split_factors(p, &prob.keep, &filter, sampler, &mut best)? {
            if !kept.iter().any(|k| k.equal_up_to_scale(&f)) {
                kept.push(f);
            }
        }
    }
    let fresh = collect_transitions(sampler, SOUNDNESS_START, SOUNDNESS_SAMPLES)?;
    kept.retain(|f| max_residual(f, &prob.keep, &fresh) <= VANISH_TOL);
    if kept.is_empty() {
        return Err(Error::NoFactorSurvives {
            samples: filter,
            residuals: best,
        });
    }
    let kv = prob.keep_vars();
    let mut out = kept
        .iter()
        .map(|f| f.with_vars(&kv).map(|g| g.primitive()))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_cached_key(|f| (f.total_degree(), f.to_string()));
    Ok(out)
}

/// [`eliminate`] for image coordinate `index` of a map on one of its
/// varieties, with transitions drawn from `seed`.
pub fn eliminate_for_map(
    map: &IntegrableMap,
    generator: &VarietyGenerator,
    index: usize,
    eliminate_vars: &[String],
    seed: u64,
) -> Result<Vec<MPoly>> {
    let prob = problem_for(map, generator, index, eliminate_vars)?;
    let sampler = MapTransitions {
        map,
        generator,
        keep: prob.keep.clone(),
        seed,
    };
    eliminate(&prob, &sampler)
}
