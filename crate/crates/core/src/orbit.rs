//! Iteration and the three orbit verdicts: fixed-period return, invariant
//! conservation and exclusivity of other periods.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Cx;
use crate::catalog::{IntegrableMap, PointC};
use crate::error::{Error, Result};
use crate::rng::rng_for;

/// Anything that can be iterated: a catalog map, a reduced map, a branch of
/// a correspondence.
pub trait Step {
    fn step(&self, p: &[Cx]) -> Result<PointC>;

    /// Conserved quantities at `p` (empty when none are known).
    fn conserved(&self, _p: &[Cx]) -> Result<Vec<Cx>> {
        Ok(Vec::new())
    }
}

impl Step for IntegrableMap {
    fn step(&self, p: &[Cx]) -> Result<PointC> {
        self.apply(p)
    }

    fn conserved(&self, p: &[Cx]) -> Result<Vec<Cx>> {
        self.invariants_eval(p)
    }
}

/// A step given by a closure.
pub struct FnStep<F>(pub F);

impl<F> Step for FnStep<F>
where
    F: Fn(&[Cx]) -> Result<PointC>,
{
    fn step(&self, p: &[Cx]) -> Result<PointC> {
        (self.0)(p)
    }
}

/// `[p0, p1, …, pn]`.
pub fn iterate<S: Step + ?Sized>(m: &S, p0: &[Cx], n: usize) -> Result<Vec<PointC>> {
    let mut pts = vec![p0.to_vec()];
    for k in 1..=n {
        let next = m.step(&pts[k - 1]).map_err(|e| match e {
            Error::Pole { .. } | Error::SingularLinearSystem | Error::NoConservingRoot => {
                Error::PoleAtStep { step: k }
            }
            e => e,
        })?;
        if next.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::PoleAtStep { step: k });
        }
        pts.push(next);
    }
    Ok(pts)
}

/// `max_j |a_j − b_j| / (1 + |a_j|)`.
pub fn relative_distance(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / (1.0 + x.norm()))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub period: usize,
    pub points: Vec<PointC>,
    pub return_error: f64,
    pub drift: f64,
    pub primitive: bool,
    pub fixed_point: bool,
    /// Proper divisors of the period at which the orbit already returned.
    pub early_returns: Vec<usize>,
}

impl OrbitReport {
    /// Returned within `tol` at exactly the requested period.
    pub fn passes(&self, tol: f64) -> bool {
        self.return_error <= tol && self.primitive && !self.fixed_point
    }
}

fn max_drift(h0: &[Cx], pts_h: &[Vec<Cx>]) -> f64 {
    pts_h
        .iter()
        .flat_map(|h| h.iter().zip(h0).map(|(a, b)| (a - b).norm() / (1.0 + b.norm())))
        .fold(0.0, f64::max)
}

/// Iterates `n` steps and measures the return to `p0`.
pub fn verify_period<S: Step + ?Sized>(m: &S, p0: &[Cx], n: usize, tol: f64) -> Result<OrbitReport> {
    if n < 2 {
        return Err(Error::Invalid("period must be at least 2".into()));
    }
    let points = iterate(m, p0, n)?;
    let return_error = relative_distance(p0, &points[n]);
    let early_returns: Vec<usize> = (1..n)
        .filter(|d| n.is_multiple_of(*d) && relative_distance(p0, &points[*d]) <= tol)
        .collect();
    let fixed_point = relative_distance(p0, &points[1]) <= tol;
    let h0 = m.conserved(p0)?;
    let hs = points[1..]
        .iter()
        .map(|p| m.conserved(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitReport {
        period: n,
        drift: max_drift(&h0, &hs),
        primitive: return_error <= tol && early_returns.is_empty(),
        fixed_point,
        early_returns,
        return_error,
        points,
    })
}

/// Largest relative deviation of the conserved quantities over `n` steps.
pub fn conservation<S: Step + ?Sized>(m: &S, p0: &[Cx], n: usize) -> Result<f64> {
    let pts = iterate(m, p0, n)?;
    let h0 = m.conserved(p0)?;
    let hs = pts[1..].iter().map(|p| m.conserved(p)).collect::<Result<Vec<_>>>()?;
    Ok(max_drift(&h0, &hs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// `returns[k]` is whether the orbit came back at step `k + 2`.
    pub returns: Vec<bool>,
    /// Poles met (each one restarts the scan from a perturbed point).
    pub poles: usize,
    /// The point actually scanned.
    pub start: PointC,
}

impl ScanResult {
    pub fn any_return(&self) -> bool {
        self.returns.iter().any(|r| *r)
    }

    pub fn return_periods(&self) -> Vec<usize> {
        self.returns
            .iter()
            .enumerate()
            .filter(|(_, r)| **r)
            .map(|(k, _)| k + 2)
            .collect()
    }
}

/// For each `n` in `2..=n_max`, whether the orbit of `p0` returns within
/// `tol`. A pole restarts the scan from a slightly perturbed point.
pub fn exclusivity_scan<S: Step + ?Sized>(m: &S, p0: &[Cx], n_max: usize, tol: f64) -> Result<ScanResult> {
    let mut rng = rng_for(0x5ca9);
    let mut start = p0.to_vec();
    let mut poles = 0;
    loop {
        match iterate(m, &start, n_max) {
            Ok(pts) => {
                let returns = (2..=n_max)
                    .map(|n| relative_distance(&start, &pts[n]) <= tol)
                    .collect();
                return Ok(ScanResult { returns, poles, start });
            }
            Err(Error::PoleAtStep { .. }) if poles < 8 => {
                poles += 1;
                for c in start.iter_mut() {
                    *c += Cx::new(rng.gen_range(-1e-6..1e-6), rng.gen_range(-1e-6..1e-6));
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// CSV with one row per step: `step,re0,im0,re1,im1,…`.
pub fn orbit_csv(points: &[PointC]) -> String {
    let d = points.first().map_or(0, |p| p.len());
    let mut s = String::from("step");
    for j in 0..d {
        let _ = write!(s, ",re{j},im{j}");
    }
    s.push('\n');
    for (k, p) in points.iter().enumerate() {
        let _ = write!(s, "{k}");
        for c in p {
            let _ = write!(s, ",{},{}", c.re, c.im);
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::catalog::{catalog_get, params_from, point_to_cx, Params};

    fn reals(p: &[PointC], j: usize) -> Vec<f64> {
        p.iter().map(|q| q[j].re).collect()
    }

    #[test]
    fn lyness5_sequence() {
        let m = catalog_get("lyness5", &Params::new()).unwrap();
        let pts = iterate(&m, &point_to_cx(&[rat(1), rat(1)]), 5).unwrap();
        // scalar sequence read off the first coordinate, prefixed by the seed
        assert_eq!(reals(&pts, 0), vec![1.0, 2.0, 3.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn lyness8_sequence() {
        let m = catalog_get("lyness8", &Params::new()).unwrap();
        let pts = iterate(&m, &point_to_cx(&[rat(1), rat(1), rat(1)]), 8).unwrap();
        assert_eq!(reals(&pts, 0), vec![1.0, 3.0, 5.0, 9.0, 5.0, 3.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn lyness2_involution() {
        let m = catalog_get("lyness2", &params_from(&[("a", "7")]).unwrap()).unwrap();
        let r = verify_period(&m, &point_to_cx(&[rat(5)]), 2, 1e-12).unwrap();
        assert!((r.points[1][0].re - 1.4).abs() < 1e-15);
        assert!(r.passes(1e-12));
    }

    #[test]
    fn lv3_drift_and_scan() {
        let m = catalog_get("lv3", &Params::new()).unwrap();
        let p = point_to_cx(&[rat(2), rat(3), rat(4)]);
        assert!(conservation(&m, &p, 6).unwrap() <= 1e-9);
        assert_eq!(conservation(&m, &p, 0).unwrap(), 0.0);
        assert!(!exclusivity_scan(&m, &p, 12, 1e-9).unwrap().any_return());
    }

    #[test]
    fn scaling_moebius_returns_at_even_steps() {
        let m = catalog_get("moebius2d", &params_from(&[("a", "0"), ("b", "0")]).unwrap()).unwrap();
        let p = vec![Cx::new(0.7, 0.2), Cx::new(-1.0, 0.0)];
        let s = exclusivity_scan(&m, &p, 12, 1e-9).unwrap();
        assert_eq!(s.return_periods(), vec![2, 4, 6, 8, 10, 12]);
    }

    #[test]
    fn pole_reports_step() {
        let m = catalog_get("lyness5", &Params::new()).unwrap();
        // (x, y) = (1, 0) divides by zero on the first step.
        let err = iterate(&m, &point_to_cx(&[rat(1), rat(0)]), 3).unwrap_err();
        assert_eq!(err, Error::PoleAtStep { step: 1 });
    }

    #[test]
    fn csv_shape() {
        let csv = orbit_csv(&[vec![Cx::new(1.0, 2.0)]]);
        assert_eq!(csv, "step,re0,im0\n0,1,2\n");
    }
}
