use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use ivar_core::algebra::Cx;
use serde::Serialize;

use crate::args::{Format, OutputArgs};

/// Everything that determines a run; embedded in every report.
#[derive(Serialize, Debug, Clone, Default)]
pub struct RunConfig {
    pub command: String,
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub off_variety: bool,
    pub params: BTreeMap<String, String>,
    /// Map components as polynomial strings.
    pub components: Vec<String>,
    /// Variety generators as polynomial strings.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generator: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct Report<V: Serialize, S: Serialize> {
    pub config: RunConfig,
    pub verdicts: Vec<V>,
    pub residual_summary: S,
    pub wall_time_ms: u64,
}

pub fn pair(c: Cx) -> [f64; 2] {
    [c.re, c.im]
}

pub fn pairs(p: &[Cx]) -> Vec<[f64; 2]> {
    p.iter().map(|c| pair(*c)).collect()
}

/// Writes to `--out` or stdout.
pub fn emit(out: &OutputArgs, body: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => write_file(path, body),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                s.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> anyhow::Result<()> {
    let mut text = body.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn elapsed_ms(out: &OutputArgs, start: std::time::Instant) -> u64 {
    if out.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}
