use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use ivar_core::algebra::{fmt_rational, parse_rational};
use ivar_core::catalog::{catalog_get, param_names, point_to_cx, MapDescriptor, MAP_NAMES};
use ivar_core::elim::{eliminate_for_map, fixtures_for};
use ivar_core::orbit::{iterate, orbit_csv};
use ivar_core::rng::derive_seed;
use ivar_core::varieties::{available_periods, gamma_get, membership_residuals, sample_for_map};
use num_rational::BigRational;
use serde::Serialize;

use crate::args::{EliminateArgs, Format, ListArgs, OrbitArgs, ParamArgs, SampleArgs};
use crate::config::{classify, default_param, fixed_params, params_text, usage};
use crate::report::{elapsed_ms, emit, json, pairs, Report, RunConfig};
use crate::verify::lyness_period;

#[derive(Serialize, Debug)]
pub struct ListEntry {
    pub name: String,
    pub dim: usize,
    pub vars: Vec<String>,
    pub params: Vec<String>,
    /// Values used when a parameter flag is absent.
    pub defaults: BTreeMap<String, String>,
    /// Periods with an invariant variety; for Lyness maps, the period of
    /// every orbit.
    pub periods: Vec<u32>,
    pub descriptor: MapDescriptor,
}

fn list_entry(name: &str) -> anyhow::Result<ListEntry> {
    let params = fixed_params(name, &ParamArgs::default())?;
    let m = catalog_get(name, &params).map_err(classify)?;
    let names = param_names(name).map_err(classify)?;
    let defaults = names
        .iter()
        .filter_map(|n| default_param(name, n).map(|v| (n.to_string(), v.to_string())))
        .collect();
    let periods = match lyness_period(name) {
        Some(p) => vec![p],
        None => available_periods(name),
    };
    Ok(ListEntry {
        name: name.to_string(),
        dim: m.dim(),
        vars: m.vars().to_vec(),
        params: names.iter().map(|s| s.to_string()).collect(),
        defaults,
        periods,
        descriptor: m.descriptor(),
    })
}

pub fn list(a: ListArgs) -> anyhow::Result<bool> {
    let names: Vec<&str> = match &a.map {
        Some(m) if MAP_NAMES.contains(&m.as_str()) => vec![m.as_str()],
        Some(m) => return Err(usage(format!("unknown map `{m}`; known: {}", MAP_NAMES.join(", ")))),
        None => MAP_NAMES.to_vec(),
    };
    let entries = names.iter().map(|n| list_entry(n)).collect::<anyhow::Result<Vec<_>>>()?;
    let body = match a.output.format.unwrap_or(Format::Text) {
        Format::Json => json(&entries)?,
        Format::Csv => {
            let mut s = String::from("name,dim,vars,params,periods\n");
            for e in &entries {
                let periods: Vec<String> = e.periods.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    e.name,
                    e.dim,
                    e.vars.join(";"),
                    e.params.join(";"),
                    periods.join(";")
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for e in &entries {
                let periods: Vec<String> = e.periods.iter().map(|p| p.to_string()).collect();
                let params = if e.params.is_empty() {
                    "-".to_string()
                } else {
                    e.params.join(",")
                };
                let label = if lyness_period(&e.name).is_some() {
                    "period"
                } else {
                    "periods"
                };
                let _ = writeln!(
                    s,
                    "{:<10} dim {}  vars ({})  params {}  {label} {{{}}}",
                    e.name,
                    e.dim,
                    e.vars.join(","),
                    params,
                    periods.join(",")
                );
            }
            s
        }
    };
    emit(&a.output, &body)?;
    Ok(true)
}

fn base_config(command: &str, map: &str, format: Option<Format>) -> RunConfig {
    RunConfig {
        command: command.into(),
        map: map.into(),
        format,
        ..Default::default()
    }
}

#[derive(Serialize, Debug)]
struct SampleRow {
    index: usize,
    seed: u64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    draws: Option<usize>,
    /// Largest generator residual at the point.
    #[serde(skip_serializing_if = "Option::is_none")]
    membership: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Debug)]
struct SampleSummary {
    samples: usize,
    drawn: usize,
    max_membership: f64,
}

pub fn sample(a: SampleArgs) -> anyhow::Result<bool> {
    let start = Instant::now();
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    if lyness_period(&a.map).is_some() {
        return Err(usage(format!("{} has no invariant variety: every orbit is periodic", a.map)));
    }
    let params = fixed_params(&a.map, &a.params)?;
    let m = catalog_get(&a.map, &params).map_err(classify)?;
    let g = gamma_get(&m, a.period).map_err(classify)?;
    let mut cfg = base_config("sample", &a.map, a.output.format);
    cfg.period = Some(a.period);
    cfg.seeds = Some(a.seeds);
    cfg.seed = Some(a.seed);
    cfg.params = params_text(&params);
    cfg.components = m.descriptor().components;
    cfg.generator = g.gammas.iter().map(|x| x.to_string()).collect();

    let rows: Vec<SampleRow> = (0..a.seeds)
        .map(|i| {
            let seed = derive_seed(a.seed, i as u64);
            match sample_for_map(&m, &g, seed) {
                Ok(s) => {
                    let res = membership_residuals(&g, &s.point)
                        .map(|r| r.into_iter().fold(0.0, f64::max))
                        .unwrap_or(f64::INFINITY);
                    SampleRow {
                        index: i,
                        seed,
                        pass: true,
                        point: Some(pairs(&s.point)),
                        root_index: Some(s.root_index),
                        draws: Some(s.draws),
                        membership: Some(res),
                        error: None,
                    }
                }
                Err(e) => SampleRow {
                    index: i,
                    seed,
                    pass: false,
                    point: None,
                    root_index: None,
                    draws: None,
                    membership: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let summary = SampleSummary {
        samples: rows.len(),
        drawn: rows.iter().filter(|r| r.pass).count(),
        max_membership: rows.iter().filter_map(|r| r.membership).fold(0.0, f64::max),
    };
    let ok = summary.drawn == summary.samples;
    let body = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&Report {
            config: cfg,
            verdicts: rows,
            residual_summary: summary,
            wall_time_ms: elapsed_ms(&a.output, start),
        })?,
        Format::Csv | Format::Text => {
            let d = m.dim();
            let mut s = String::from("index,seed");
            for j in 0..d {
                let _ = write!(s, ",re{j},im{j}");
            }
            s.push_str(",draws,membership,error\n");
            for r in &rows {
                let _ = write!(s, "{},{}", r.index, r.seed);
                match &r.point {
                    Some(p) => p.iter().for_each(|c| {
                        let _ = write!(s, ",{},{}", c[0], c[1]);
                    }),
                    None => s.push_str(&",,".repeat(d)),
                }
                let _ = writeln!(
                    s,
                    ",{},{},{}",
                    r.draws.map(|v| v.to_string()).unwrap_or_default(),
                    r.membership.map(|v| v.to_string()).unwrap_or_default(),
                    r.error.as_deref().unwrap_or("").replace(',', ";")
                );
            }
            s
        }
    };
    emit(&a.output, &body)?;
    Ok(ok)
}

#[derive(Serialize, Debug)]
struct ElimVerdict {
    /// Fixture compared against, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture: Option<String>,
    index: usize,
    image: String,
    eliminated: Vec<String>,
    pass: bool,
    /// Derived factors, each primitive over the remaining variables.
    polynomials: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Debug)]
struct ElimSummary {
    derivations: usize,
    matched: usize,
    mismatched: usize,
    errors: usize,
}

struct Plan {
    fixture: Option<&'static ivar_core::elim::Fixture>,
    index: usize,
    eliminate: Vec<String>,
}

pub fn eliminate(a: EliminateArgs) -> anyhow::Result<bool> {
    let start = Instant::now();
    if lyness_period(&a.map).is_some() {
        return Err(usage(format!("{} has no invariant variety to eliminate over", a.map)));
    }
    let params = fixed_params(&a.map, &a.params)?;
    let m = catalog_get(&a.map, &params).map_err(classify)?;
    let g = gamma_get(&m, a.period).map_err(classify)?;
    if let Some(i) = a.index {
        if i >= m.dim() {
            return Err(usage(format!("--index must be below {}", m.dim())));
        }
    }
    let wanted = |i: usize| a.index.is_none_or(|k| k == i);
    let fixtures = fixtures_for(&a.map, a.period);
    let plans: Vec<Plan> = if fixtures.is_empty() {
        if g.solve_for.len() > 2 {
            return Err(usage(format!(
                "{} period {} has no elimination plan for {} solved coordinates",
                a.map,
                a.period,
                g.solve_for.len()
            )));
        }
        (0..m.dim())
            .filter(|&i| wanted(i))
            .map(|index| Plan {
                fixture: None,
                index,
                eliminate: g.solve_for.clone(),
            })
            .collect()
    } else {
        fixtures
            .into_iter()
            .filter(|f| wanted(f.index))
            .map(|f| Plan {
                fixture: Some(f),
                index: f.index,
                eliminate: f.eliminate.clone(),
            })
            .collect()
    };
    if plans.is_empty() {
        return Err(usage(format!("no recurrence for coordinate {:?} of {}", a.index, a.map)));
    }
    let images = m.image_vars();
    let verdicts: Vec<ElimVerdict> = plans
        .iter()
        .map(|p| {
            let mut v = ElimVerdict {
                fixture: p.fixture.map(|f| f.label.clone()),
                index: p.index,
                image: images[p.index].clone(),
                eliminated: p.eliminate.clone(),
                pass: false,
                polynomials: vec![],
                expected: None,
                fixture_match: None,
                error: None,
            };
            let derived = eliminate_for_map(&m, &g, p.index, &p.eliminate, a.seed);
            match derived {
                Ok(fs) => {
                    v.polynomials = fs.iter().map(|f| f.to_string()).collect();
                    match p.fixture {
                        Some(fix) => {
                            let cmp = fix
                                .polynomial_with(&params)
                                .and_then(|e| Ok((e, fix.matches(&params, &fs, &images[p.index])?)));
                            match cmp {
                                Ok((e, hit)) => {
                                    v.expected = Some(e.to_string());
                                    v.fixture_match = Some(hit);
                                    v.pass = hit;
                                }
                                Err(e) => v.error = Some(e.to_string()),
                            }
                        }
                        None => v.pass = true,
                    }
                }
                Err(e) => v.error = Some(e.to_string()),
            }
            v
        })
        .collect();
    let summary = ElimSummary {
        derivations: verdicts.len(),
        matched: verdicts.iter().filter(|v| v.fixture_match == Some(true)).count(),
        mismatched: verdicts.iter().filter(|v| v.fixture_match == Some(false)).count(),
        errors: verdicts.iter().filter(|v| v.error.is_some()).count(),
    };
    let ok = verdicts.iter().all(|v| v.pass);
    let mut cfg = base_config("eliminate", &a.map, a.output.format);
    cfg.period = Some(a.period);
    cfg.seed = Some(a.seed);
    cfg.params = params_text(&params);
    cfg.components = m.descriptor().components;
    cfg.generator = g.gammas.iter().map(|x| x.to_string()).collect();
    let body = match a.output.format.unwrap_or(Format::Text) {
        Format::Json => json(&Report {
            config: cfg,
            verdicts,
            residual_summary: summary,
            wall_time_ms: elapsed_ms(&a.output, start),
        })?,
        Format::Csv => {
            let mut s = String::from("fixture,index,image,pass,polynomial\n");
            for v in &verdicts {
                for f in &v.polynomials {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},\"{}\"",
                        v.fixture.as_deref().unwrap_or(""),
                        v.index,
                        v.image,
                        v.pass,
                        f
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in &verdicts {
                let status = match (v.fixture_match, &v.error) {
                    (_, Some(e)) => format!("ERROR {e}"),
                    (Some(true), _) => "matches fixture".into(),
                    (Some(false), _) => "DIFFERS from fixture".into(),
                    (None, _) => "no fixture".into(),
                };
                let name = v.fixture.clone().unwrap_or_else(|| format!("{} F({})", a.map, a.period));
                let _ = writeln!(s, "{name} [{}, eliminating {}]: {status}", v.image, v.eliminated.join(","));
                for f in &v.polynomials {
                    let _ = writeln!(s, "  {f}");
                }
                if v.fixture_match == Some(false) {
                    if let Some(e) = &v.expected {
                        let _ = writeln!(s, "  expected {e}");
                    }
                }
            }
            s
        }
    };
    emit(&a.output, &body)?;
    Ok(ok)
}

#[derive(Serialize, Debug)]
struct OrbitReport {
    config: RunConfig,
    init: Vec<String>,
    points: Vec<Vec<[f64; 2]>>,
    /// Exact iterates, when every step stays rational and finite.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<Vec<String>>>,
    wall_time_ms: u64,
}

pub fn orbit(a: OrbitArgs) -> anyhow::Result<bool> {
    let start = Instant::now();
    let params = fixed_params(&a.map, &a.params)?;
    let m = catalog_get(&a.map, &params).map_err(classify)?;
    let init: Vec<BigRational> = a
        .init
        .split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| usage(format!("--init: {e}"))))
        .collect::<anyhow::Result<_>>()?;
    if init.len() != m.dim() {
        return Err(usage(format!(
            "--init needs {} coordinates for {}, got {}",
            m.dim(),
            a.map,
            init.len()
        )));
    }
    let points = iterate(&m, &point_to_cx(&init), a.steps).map_err(anyhow::Error::new)?;
    let body = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => orbit_csv(&points),
        Format::Json => {
            let mut exact = vec![init.clone()];
            for _ in 0..a.steps {
                match m.apply_exact(exact.last().expect("non-empty")) {
                    Ok(p) => exact.push(p),
                    Err(_) => break,
                }
            }
            let exact = (exact.len() == a.steps + 1)
                .then(|| exact.iter().map(|p| p.iter().map(fmt_rational).collect()).collect());
            let mut cfg = base_config("orbit", &a.map, a.output.format);
            cfg.params = params_text(&params);
            cfg.components = m.descriptor().components;
            json(&OrbitReport {
                config: cfg,
                init: init.iter().map(fmt_rational).collect(),
                points: points.iter().map(|p| pairs(p)).collect(),
                exact,
                wall_time_ms: elapsed_ms(&a.output, start),
            })?
        }
    };
    emit(&a.output, &body)?;
    Ok(true)
}
