//! Univariate complex root finding: Aberth–Ehrlich simultaneous iteration,
//! optionally followed by Newton polishing with exact residuals.

use std::f64::consts::PI;

use super::mpoly::Cx;
use super::qi::{qi_from_cx, qi_to_cx, QiPoly};
use crate::error::{Error, Result};

const MAX_ITERS: usize = 2000;

fn horner(coeffs: &[Cx], z: Cx) -> (Cx, Cx) {
    let mut p = Cx::new(0.0, 0.0);
    let mut dp = Cx::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Σ|c_k||z|^k — the size of the terms being summed at `z`.
fn term_scale(coeffs: &[Cx], z: Cx) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// All roots, with multiplicity, of `Σ coeffs[k]·z^k` (ascending order).
///
/// Converged roots satisfy `|p(r)| ≤ tol·(1 + Σ|c_k||r|^k)`. Output order
/// is canonical (see [`sort_roots`]).
pub fn roots(coeffs: &[Cx], tol: f64) -> Result<Vec<Cx>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut c: Vec<Cx> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let maxc = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if c.len() < 2 || c.last().unwrap().norm() <= tol * maxc.max(f64::MIN_POSITIVE) * 1e-6 {
        return Err(Error::DegenerateRootProblem);
    }
    let n = c.len() - 1;
    let lead = *c.last().unwrap();
    let monic: Vec<Cx> = c.iter().map(|x| x / lead).collect();

    // Zero roots are split off exactly.
    let zeros = monic.iter().take_while(|x| x.norm() == 0.0).count();
    let work: Vec<Cx> = monic[zeros..].to_vec();
    let m = work.len() - 1;
    let mut z: Vec<Cx> = Vec::with_capacity(n);
    if m > 0 {
        // Start on a circle sized by the geometric mean of the roots.
        let radius = work[0].norm().powf(1.0 / m as f64).max(1e-3);
        let mut est: Vec<Cx> = (0..m)
            .map(|j| Cx::from_polar(radius, 2.0 * PI * j as f64 / m as f64 + 0.4))
            .collect();
        let mut done = vec![false; m];
        for _ in 0..MAX_ITERS {
            let mut moved = false;
            for j in 0..m {
                if done[j] {
                    continue;
                }
                let (p, dp) = horner(&work, est[j]);
                if p.norm() == 0.0 {
                    done[j] = true;
                    continue;
                }
                let ratio = p / dp;
                let s: Cx = (0..m)
                    .filter(|&k| k != j)
                    .map(|k| {
                        let d = est[j] - est[k];
                        if d.norm() == 0.0 {
                            Cx::new(0.0, 0.0)
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let mut delta = ratio / (Cx::new(1.0, 0.0) - ratio * s);
                if !delta.re.is_finite() || !delta.im.is_finite() {
                    delta = ratio;
                }
                est[j] -= delta;
                if delta.norm() <= 4.0 * f64::EPSILON * (1.0 + est[j].norm()) {
                    done[j] = true;
                } else {
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        // A couple of plain Newton steps, kept only when they help.
        for r in est.iter_mut() {
            for _ in 0..2 {
                let (p, dp) = horner(&work, *r);
                if dp.norm() == 0.0 {
                    break;
                }
                let cand = *r - p / dp;
                if horner(&work, cand).0.norm() < p.norm() {
                    *r = cand;
                } else {
                    break;
                }
            }
        }
        z.extend(est);
    }
    z.extend(std::iter::repeat_n(Cx::new(0.0, 0.0), zeros));

    let mut worst = 0.0f64;
    for r in &z {
        let res = horner(&monic, *r).0.norm();
        let bound = tol * (1.0 + term_scale(&monic, *r));
        // Also catches NaN residuals.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(res <= bound) {
            worst = worst.max(res / (1.0 + term_scale(&monic, *r)));
        }
    }
    if worst > 0.0 {
        return Err(Error::RootsNotConverged {
            max_residual: worst,
        });
    }
    sort_roots(&mut z);
    Ok(z)
}

/// Canonical root order: lexicographic by (re, im) after rounding to 1e-12.
pub fn sort_roots(z: &mut [Cx]) {
    let key = |c: &Cx| ((c.re * 1e12).round(), (c.im * 1e12).round());
    z.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

/// Newton refinement of an approximate root with residuals and derivatives
/// evaluated exactly over Q(i); steps are taken only when they reduce the
/// exact residual.
pub fn polish_exact(p: &QiPoly, mut r: Cx, steps: usize) -> Cx {
    let dp = p.derivative();
    let mut cur = match qi_from_cx(r) {
        Some(q) => qi_to_cx(&p.eval(&q)).norm(),
        None => return r,
    };
    for _ in 0..steps {
        let Some(q) = qi_from_cx(r) else { break };
        let v = qi_to_cx(&p.eval(&q));
        let d = qi_to_cx(&dp.eval(&q));
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let cand = r - v / d;
        let Some(cq) = qi_from_cx(cand) else { break };
        let nv = qi_to_cx(&p.eval(&cq)).norm();
        if nv < cur {
            r = cand;
            cur = nv;
        } else {
            break;
        }
    }
    r
}

/// Roots of an exact Q(i) polynomial: Aberth on the rounded coefficients,
/// then exact-residual Newton polishing.
pub fn roots_exact(p: &QiPoly, tol: f64) -> Result<Vec<Cx>> {
    let approx = roots(&p.to_cx(), tol)?;
    let mut out: Vec<Cx> = approx.into_iter().map(|r| polish_exact(p, r, 3)).collect();
    sort_roots(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    #[test]
    fn cube_roots_of_unity() {
        let r = roots(&[c(1.0), c(1.0), c(1.0)], 1e-9).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        assert!((r[0] - Cx::new(-0.5, -s3)).norm() < 1e-12);
        assert!((r[1] - Cx::new(-0.5, s3)).norm() < 1e-12);
    }

    #[test]
    fn triple_root() {
        // (z - 2)^3
        let r = roots(&[c(-8.0), c(12.0), c(-6.0), c(1.0)], 1e-9).unwrap();
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z - c(2.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let r = roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)], 1e-9).unwrap();
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
    }

    #[test]
    fn constant_is_rejected() {
        assert_eq!(roots(&[c(3.0)], 1e-9), Err(Error::DegenerateRootProblem));
    }
}
