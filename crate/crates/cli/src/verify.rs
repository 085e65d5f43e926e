use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use ivar_core::algebra::qi_to_cx;
use ivar_core::catalog::{catalog_get, IntegrableMap, PointC};
use ivar_core::orbit::{exclusivity_scan, verify_period};
use ivar_core::qrt::{coherence_trial, QrtParams};
use ivar_core::rng::{derive_seed, grid_point, rng_for};
use ivar_core::varieties::{available_periods, gamma_get, membership, sample_for_map, VarietyGenerator};
use ivar_core::Error;
use serde::Serialize;

use crate::args::{Format, VerifyArgs};
use crate::config::{classify, params_text, qrt_from, resolve_params, usage, Resolved};
use crate::report::{elapsed_ms, emit, json, pair, pairs, Report, RunConfig};

/// Redraws of a seed's point after a pole or a failed draw.
const REDRAWS: u64 = 8;
/// Membership residual under which a random point counts as on the variety.
const OFF_VARIETY_TOL: f64 = 1e-6;

#[derive(Serialize, Debug, Default)]
struct Verdict {
    index: usize,
    seed: u64,
    kind: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    return_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    early_returns: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    returns: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "is_zero")]
    redraws: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

#[derive(Serialize, Debug)]
struct Summary {
    samples: usize,
    passed: usize,
    failed: usize,
    errors: usize,
    max_return_error: f64,
    max_drift: f64,
    returns_found: usize,
}

enum Kind {
    /// Every point is periodic (Lyness maps).
    Global(IntegrableMap),
    Variety(IntegrableMap, VarietyGenerator),
    Qrt(Option<QrtParams>),
}

pub(crate) fn lyness_period(map: &str) -> Option<u32> {
    match map {
        "lyness2" => Some(2),
        "lyness5" => Some(5),
        "lyness8" => Some(8),
        _ => None,
    }
}

fn random_point(dim: usize, seed: u64) -> PointC {
    let mut rng = rng_for(seed);
    (0..dim).map(|_| qi_to_cx(&grid_point(&mut rng))).collect()
}

fn sub_seed(seed: u64, attempt: u64) -> u64 {
    if attempt == 0 {
        seed
    } else {
        derive_seed(seed, attempt)
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::PoleAtStep { .. }
            | Error::Pole { .. }
            | Error::SamplingFailed { .. }
            | Error::SingularLinearSystem
            | Error::NoConservingRoot
            | Error::DegenerateFamily(_)
    )
}

/// Runs `f` on successive sub-seeds until it stops failing with a
/// retryable error.
fn with_redraws<T>(seed: u64, mut f: impl FnMut(u64) -> Result<T, Error>) -> (Result<T, Error>, u64) {
    let mut last = None;
    for attempt in 0..REDRAWS {
        match f(sub_seed(seed, attempt)) {
            Ok(v) => return (Ok(v), attempt),
            Err(e) if retryable(&e) => last = Some(e),
            Err(e) => return (Err(e), attempt),
        }
    }
    (Err(last.expect("at least one attempt")), REDRAWS)
}

fn off_variety_point(map: &IntegrableMap, g: Option<&VarietyGenerator>, seed: u64) -> Result<PointC, Error> {
    for k in 0..REDRAWS {
        let p = random_point(map.dim(), sub_seed(seed, k));
        let on = match g {
            Some(g) => membership(g, &p, OFF_VARIETY_TOL).map(|r| r.0).unwrap_or(false),
            None => false,
        };
        if !on {
            return Ok(p);
        }
    }
    Err(Error::SamplingFailed {
        attempts: REDRAWS as usize,
        reason: "every draw landed on the variety".into(),
    })
}

fn qrt_params_for(fixed: &Option<QrtParams>, seed: u64) -> Result<(QrtParams, IntegrableMap), Error> {
    if let Some(p) = fixed {
        return Ok((p.clone(), p.map()?));
    }
    let mut last = None;
    for k in 0..REDRAWS {
        let p = QrtParams::random(derive_seed(seed, 0x9e37 + k));
        match p.map() {
            Ok(m) => return Ok((p, m)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn period_verdict(mut v: Verdict, rep: &ivar_core::orbit::OrbitReport, tol: f64) -> Verdict {
    v.pass = rep.passes(tol) && rep.drift <= tol;
    v.point = Some(pairs(&rep.points[0]));
    v.return_error = Some(rep.return_error);
    v.drift = Some(rep.drift);
    if !rep.early_returns.is_empty() {
        v.early_returns = Some(rep.early_returns.clone());
    }
    v
}

fn scan_verdict(mut v: Verdict, scan: &ivar_core::orbit::ScanResult) -> Verdict {
    v.pass = !scan.any_return();
    v.point = Some(pairs(&scan.start));
    v.returns = Some(scan.return_periods());
    v
}

fn one(kind: &Kind, a: &VerifyArgs, index: usize) -> Verdict {
    let seed = derive_seed(a.seed, index as u64);
    let n = a.period as usize;
    let base = Verdict {
        index,
        seed,
        kind: if a.off_variety { "exclusivity" } else { "period" },
        ..Default::default()
    };
    let (res, redraws) = match kind {
        Kind::Global(m) => {
            let (r, k) = with_redraws(seed, |s| verify_period(m, &random_point(m.dim(), s), n, a.tol));
            (r.map(|rep| period_verdict(base, &rep, a.tol)), k)
        }
        Kind::Variety(m, g) if a.off_variety => {
            let (r, k) = with_redraws(seed, |s| {
                let p = off_variety_point(m, Some(g), s)?;
                exclusivity_scan(m, &p, a.scan_max, a.tol)
            });
            (r.map(|scan| scan_verdict(base, &scan)), k)
        }
        Kind::Variety(m, g) => {
            let (r, k) = with_redraws(seed, |s| {
                let smp = sample_for_map(m, g, s)?;
                verify_period(m, &smp.point, n, a.tol)
            });
            (r.map(|rep| period_verdict(base, &rep, a.tol)), k)
        }
        Kind::Qrt(fixed) => {
            let (r, k) = with_redraws(seed, |s| {
                let (p, m) = qrt_params_for(fixed, s)?;
                if a.off_variety {
                    let pt = off_variety_point(&m, gamma_get(&m, a.period).ok().as_ref(), s)?;
                    let scan = exclusivity_scan(&m, &pt, a.scan_max, a.tol)?;
                    Ok((p, None, Some(scan), None))
                } else {
                    let t = coherence_trial(&m, &p, a.period, s, a.tol)?;
                    Ok((p, Some(t.report), None, Some(t.h)))
                }
            });
            let v = r.map(|(p, rep, scan, h)| {
                let mut v = match (rep, scan) {
                    (Some(rep), _) => period_verdict(base, &rep, a.tol),
                    (_, Some(scan)) => scan_verdict(base, &scan),
                    _ => unreachable!(),
                };
                if fixed.is_none() {
                    v.params = Some(params_text(&p.params()));
                }
                v.h = h.map(pair);
                v
            });
            (v, k)
        }
    };
    match res {
        Ok(mut v) => {
            v.redraws = redraws;
            v
        }
        Err(e) => Verdict {
            index,
            seed,
            kind: if a.off_variety { "exclusivity" } else { "period" },
            pass: false,
            redraws,
            error: Some(e.to_string()),
            ..Default::default()
        },
    }
}

fn summarize(vs: &[Verdict]) -> Summary {
    Summary {
        samples: vs.len(),
        passed: vs.iter().filter(|v| v.pass).count(),
        failed: vs.iter().filter(|v| !v.pass).count(),
        errors: vs.iter().filter(|v| v.error.is_some()).count(),
        max_return_error: vs.iter().filter_map(|v| v.return_error).fold(0.0, f64::max),
        max_drift: vs.iter().filter_map(|v| v.drift).fold(0.0, f64::max),
        returns_found: vs
            .iter()
            .filter(|v| v.returns.as_ref().is_some_and(|r| !r.is_empty()))
            .count(),
    }
}

fn text(cfg: &RunConfig, vs: &[Verdict], s: &Summary) -> String {
    let mut out = String::new();
    let what = if cfg.off_variety { "exclusivity scan" } else { "period" };
    let _ = writeln!(
        out,
        "verify {} {what} {}: {}/{} passed (max return error {:e}, max drift {:e}, returning scans {})",
        cfg.map,
        cfg.period.unwrap_or(0),
        s.passed,
        s.samples,
        s.max_return_error,
        s.max_drift,
        s.returns_found
    );
    for v in vs.iter().filter(|v| !v.pass) {
        let _ = writeln!(
            out,
            "FAIL #{} seed {}: return {:?} drift {:?} returns {:?} {}",
            v.index,
            v.seed,
            v.return_error,
            v.drift,
            v.returns,
            v.error.as_deref().unwrap_or("")
        );
    }
    out
}

fn csv(vs: &[Verdict]) -> String {
    let mut out = String::from("index,seed,kind,pass,return_error,drift,returns,error\n");
    let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for v in vs {
        let returns = v
            .returns
            .as_ref()
            .map(|r| r.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            v.index,
            v.seed,
            v.kind,
            v.pass,
            f(v.return_error),
            f(v.drift),
            returns,
            v.error.as_deref().unwrap_or("").replace(',', ";")
        );
    }
    out
}

pub fn run(a: VerifyArgs) -> anyhow::Result<bool> {
    let start = Instant::now();
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    if a.period < 2 {
        return Err(usage("--period must be at least 2"));
    }
    let resolved = resolve_params(&a.map, &a.params)?;
    let mut cfg = RunConfig {
        command: "verify".into(),
        map: a.map.clone(),
        period: Some(a.period),
        seeds: Some(a.seeds),
        seed: Some(a.seed),
        tol: Some(a.tol),
        format: a.output.format,
        off_variety: a.off_variety,
        ..Default::default()
    };
    let kind = match (&resolved, lyness_period(&a.map)) {
        (Resolved::Fixed(p), Some(_)) => {
            if a.off_variety {
                return Err(usage(format!("{} has no invariant variety: every orbit is periodic", a.map)));
            }
            let m = catalog_get(&a.map, p).map_err(classify)?;
            cfg.params = params_text(p);
            cfg.components = m.descriptor().components;
            Kind::Global(m)
        }
        (Resolved::Fixed(p), None) if a.map == "qrt" => {
            let q = qrt_from(p)?;
            let m = catalog_get(&a.map, p).map_err(classify)?;
            let g = gamma_get(&m, a.period).map_err(classify)?;
            cfg.params = params_text(p);
            cfg.components = m.descriptor().components;
            cfg.generator = g.gammas.iter().map(|x| x.to_string()).collect();
            Kind::Qrt(Some(q))
        }
        (Resolved::Fixed(p), None) => {
            let m = catalog_get(&a.map, p).map_err(classify)?;
            let g = gamma_get(&m, a.period).map_err(classify)?;
            cfg.params = params_text(p);
            cfg.components = m.descriptor().components;
            cfg.generator = g.gammas.iter().map(|x| x.to_string()).collect();
            Kind::Variety(m, g)
        }
        (Resolved::RandomQrt, _) => {
            if !available_periods("qrt").contains(&a.period) {
                return Err(classify(Error::UnknownGenerator {
                    map: "qrt".into(),
                    period: a.period,
                    available: available_periods("qrt"),
                }));
            }
            Kind::Qrt(None)
        }
    };
    let verdicts: Vec<Verdict> = (0..a.seeds).map(|i| one(&kind, &a, i)).collect();
    let summary = summarize(&verdicts);
    let ok = summary.failed == 0;
    let body = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&Report {
            config: cfg,
            verdicts,
            residual_summary: summary,
            wall_time_ms: elapsed_ms(&a.output, start),
        })?,
        Format::Text => text(&cfg, &verdicts, &summary),
        Format::Csv => csv(&verdicts),
    };
    emit(&a.output, &body)?;
    Ok(ok)
}
