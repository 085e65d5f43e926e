//! Splitting a polynomial by fitting: the lowest-degree polynomial through
//! many true transitions, recovered as an SVD null vector and rationalized,
//! is a factor candidate that is accepted only if it divides exactly.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::{max_residual, TransitionSampler, FIT_START, VANISH_TOL};
use crate::algebra::{exact_divide, Cx, MPoly};
use crate::error::Result;

/// Fits with more unknowns than this are not attempted.
const MAX_FIT_TERMS: usize = 400;
const EXTRA_ROWS: usize = 24;
/// `σ_min / σ_max` below which a null vector is accepted.
const NULL_GAP: f64 = 1e-10;
/// The next singular value must stay above this, else the null space is
/// not one-dimensional.
const RANK_GAP: f64 = 1e-6;
const MAX_DEN: i128 = 10_000_000;

/// Exponent vectors over `caps.len()` variables with `e_i ≤ caps_i` and total
/// degree at most `d`.
fn monomials(caps: &[u32], d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=c.min(d - used) {
                let mut n = m.clone();
                n.push(e);
                next.push(n);
            }
        }
        out = next;
    }
    out
}

/// Best rational approximation by continued fractions.
pub(crate) fn approx_rational(x: f64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let (h, k) = (ai * h1 + h0, ai * k1 + k0);
        if k > MAX_DEN {
            return None;
        }
        if (h as f64 / k as f64 - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h), BigInt::from(k)));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn null_vector(rows: &[Vec<Cx>], monos: &[Vec<u32>], idx: &[usize]) -> Option<Vec<Cx>> {
    let (n, m) = (rows.len(), monos.len());
    let mut a = DMatrix::<Cx>::zeros(n, m);
    for (i, s) in rows.iter().enumerate() {
        let mut rmax = 0.0f64;
        for (j, e) in monos.iter().enumerate() {
            let v = e
                .iter()
                .zip(idx)
                .fold(Cx::new(1.0, 0.0), |acc, (&k, &vi)| acc * s[vi].powu(k));
            rmax = rmax.max(v.norm());
            a[(i, j)] = v;
        }
        if rmax > 0.0 {
            for j in 0..m {
                a[(i, j)] /= rmax;
            }
        }
    }
    let norms: Vec<f64> = (0..m).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    for (j, nj) in norms.iter().enumerate() {
        a.column_mut(j).unscale_mut(*nj);
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t?;
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let smax = sv[order[order.len() - 1]];
    if sv.len() < m || sv[order[0]] > NULL_GAP * smax || (m > 1 && sv[order[1]] < RANK_GAP * smax) {
        return None;
    }
    let row = order[0];
    Some((0..m).map(|j| vt[(row, j)].conj() / norms[j]).collect())
}

fn rationalize(v: &[Cx]) -> Option<Vec<BigRational>> {
    let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    v.iter()
        .map(|c| {
            let r = c / pivot;
            if r.im.abs() > 1e-6 {
                return None;
            }
            if r.re.abs() < 1e-10 {
                return Some(BigRational::from_integer(0.into()));
            }
            approx_rational(r.re, 1e-9 * r.re.abs().max(1.0))
        })
        .collect()
}

/// Splits `p` into factors vanishing on the transitions; falls back to `p`
/// itself when no proper factor is found.
pub(super) fn separate(
    p: &MPoly,
    keep: &[String],
    filter: &[Vec<Cx>],
    sampler: &dyn TransitionSampler,
) -> Result<Vec<MPoly>> {
    let used: Vec<(usize, usize, u32)> = keep
        .iter()
        .enumerate()
        .filter_map(|(ki, k)| p.var_index(k).filter(|_| p.uses_var(k)).map(|pi| (ki, pi, p.degree_in(k))))
        .collect();
    let caps: Vec<u32> = used.iter().map(|u| u.2).collect();
    let kidx: Vec<usize> = used.iter().map(|u| u.0).collect();
    let mut rows: Vec<Vec<Cx>> = Vec::new();
    let (mut next, mut failures) = (FIT_START, 0usize);
    for d in 1..p.total_degree() {
        let monos = monomials(&caps, d);
        if monos.len() > MAX_FIT_TERMS {
            break;
        }
        let need = monos.len() + EXTRA_ROWS;
        while rows.len() < need {
            match sampler.transition(next) {
                Ok(v) => rows.push(v),
                Err(_) => {
                    failures += 1;
                    if failures > 8 * need + 16 {
                        return Ok(vec![p.clone()]);
                    }
                }
            }
            next += 1;
        }
        let Some(v) = null_vector(&rows[..need], &monos, &kidx) else {
            continue;
        };
        let Some(coeffs) = rationalize(&v) else {
            continue;
        };
        let nv = p.vars().len();
        let terms = monos.iter().zip(coeffs).map(|(e, c)| {
            let mut full = vec![0u32; nv];
            for (k, u) in used.iter().enumerate() {
                full[u.1] = e[k];
            }
            (full, c)
        });
        let cand = MPoly::from_terms(p.vars().clone(), terms);
        if cand.is_constant() || max_residual(&cand, keep, filter) > VANISH_TOL {
            continue;
        }
        let Ok(q) = exact_divide(p, &cand) else {
            continue;
        };
        let mut out = vec![cand.primitive()];
        if !q.is_constant() && max_residual(&q, keep, filter) <= VANISH_TOL {
            out.extend(separate(&q, keep, filter, sampler)?);
        }
        return Ok(out);
    }
    Ok(vec![p.clone()])
}
