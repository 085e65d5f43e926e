use std::collections::BTreeMap;
use std::fmt;

use anyhow::anyhow;
use ivar_core::algebra::{fmt_rational, parse_rational};
use ivar_core::catalog::{param_names, Params};
use ivar_core::qrt::QrtParams;
use ivar_core::Error;
use num_rational::BigRational;

use crate::args::ParamArgs;

/// A configuration problem; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

/// Library errors that stem from the request rather than the computation
/// become usage errors.
pub fn classify(e: Error) -> anyhow::Error {
    match e {
        Error::UnknownMap(_)
        | Error::UnknownGenerator { .. }
        | Error::MissingParameter { .. }
        | Error::DegenerateParameters { .. }
        | Error::Parse { .. }
        | Error::Arity { .. } => usage(e.to_string()),
        e => anyhow!(e),
    }
}

fn rational(flag: &str, s: &str) -> anyhow::Result<BigRational> {
    parse_rational(s.trim()).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn six(flag: &str, s: &str) -> anyhow::Result<[BigRational; 6]> {
    let v = s
        .split(',')
        .map(|t| rational(flag, t))
        .collect::<anyhow::Result<Vec<_>>>()?;
    v.try_into()
        .map_err(|v: Vec<_>| usage(format!("--{flag} needs 6 comma-separated values, got {}", v.len())))
}

/// Parameter values used when a flag is absent.
pub fn default_param(map: &str, name: &str) -> Option<&'static str> {
    Some(match (map, name) {
        ("lyness2", "a") => "1",
        ("moebius2d", "a") => "2",
        ("moebius2d", "b") => "3",
        ("euler", "alpha") => "1/3",
        ("euler", "beta") => "2/5",
        ("euler", "gamma") => "-3/7",
        _ => return None,
    })
}

/// Seed of the QRT parameters used when neither --qp nor --qpp is given
/// and a single parameter set is needed.
pub const DEFAULT_QRT_SEED: u64 = 0;

#[derive(Clone, Debug)]
pub enum Resolved {
    Fixed(Params),
    /// QRT without explicit parameters: one random pair per seed.
    RandomQrt,
}

pub fn resolve_params(map: &str, p: &ParamArgs) -> anyhow::Result<Resolved> {
    let names = param_names(map).map_err(classify)?;
    let flags: [(&str, &Option<String>); 5] = [
        ("a", &p.a),
        ("b", &p.b),
        ("alpha", &p.alpha),
        ("beta", &p.beta),
        ("gamma", &p.gamma),
    ];
    let is_qrt = map == "qrt";
    for (f, v) in flags {
        if v.is_some() && !names.contains(&f) {
            return Err(usage(format!("--{f} does not apply to {map}")));
        }
    }
    if !is_qrt && (p.qp.is_some() || p.qpp.is_some()) {
        return Err(usage(format!("--qp/--qpp do not apply to {map}")));
    }
    if is_qrt {
        return match (&p.qp, &p.qpp) {
            (None, None) => Ok(Resolved::RandomQrt),
            (Some(a), Some(b)) => Ok(Resolved::Fixed(
                QrtParams {
                    qp: six("qp", a)?,
                    qpp: six("qpp", b)?,
                }
                .params(),
            )),
            _ => Err(usage("--qp and --qpp go together")),
        };
    }
    let mut out = Params::new();
    for n in names {
        let given = flags.iter().find(|(f, _)| *f == n).and_then(|(_, v)| v.as_deref());
        let text = given
            .or_else(|| default_param(map, n))
            .ok_or_else(|| usage(format!("{map} needs --{n}")))?;
        out.insert(n.to_string(), rational(n, text)?);
    }
    Ok(Resolved::Fixed(out))
}

/// One concrete parameter set (QRT falls back to seeded random values).
pub fn fixed_params(map: &str, p: &ParamArgs) -> anyhow::Result<Params> {
    Ok(match resolve_params(map, p)? {
        Resolved::Fixed(p) => p,
        Resolved::RandomQrt => QrtParams::random(DEFAULT_QRT_SEED).params(),
    })
}

pub fn params_text(p: &Params) -> BTreeMap<String, String> {
    p.iter().map(|(k, v)| (k.clone(), fmt_rational(v))).collect()
}

pub fn qrt_from(p: &Params) -> anyhow::Result<QrtParams> {
    let get = |k: &str| p.get(k).cloned().ok_or_else(|| usage(format!("missing {k}")));
    let names = ivar_core::catalog::QRT_PARAM_NAMES;
    let qp: Vec<BigRational> = names[..6].iter().map(|k| get(k)).collect::<anyhow::Result<_>>()?;
    let qpp: Vec<BigRational> = names[6..].iter().map(|k| get(k)).collect::<anyhow::Result<_>>()?;
    Ok(QrtParams {
        qp: qp.try_into().expect("six"),
        qpp: qpp.try_into().expect("six"),
    })
}
