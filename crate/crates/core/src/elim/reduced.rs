//! Explicit maps solved from recurrence polynomials: the ω-routes, the
//! period-2 map of the 4d LV chain reduced to three coordinates, the reduced
//! Toda 3-cycle and the two Euler top routes.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::Cx;
use crate::catalog::{PointC, POLE_TOL};
use crate::error::{Error, Result};

/// `e^{2πik/3}`.
pub fn omega(k: u32) -> Cx {
    Cx::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k % 3) / 3.0)
}

fn div(n: Cx, d: Cx, context: &str) -> Result<Cx> {
    if d.norm() <= POLE_TOL * (1.0 + n.norm()) {
        return Err(Error::Pole {
            context: context.into(),
        });
    }
    Ok(n / d)
}

fn div_exact(n: BigRational, d: &BigRational, context: &str) -> Result<BigRational> {
    if d.is_zero() {
        return Err(Error::Pole {
            context: context.into(),
        });
    }
    Ok(n / d)
}

/// `x ↦ ω x/(x + 1)`.
pub fn example_route(w: Cx, x: Cx) -> Result<Cx> {
    div(w * x, x + 1.0, "x + 1")
}

/// One step of the lv3 period-3 route labelled by the cube root `w`:
/// `(x, y) ↦ (w x(y + w²)/(x + w²), (1 − w²) y(x + w²)/(3xy + (x + y − 1)(w² − 1)))`.
pub fn lv3_route(w: Cx, p: &[Cx]) -> Result<PointC> {
    let (x, y) = (p[0], p[1]);
    let w2 = w * w;
    let den = 3.0 * x * y + (x + y - 1.0) * (w2 - 1.0);
    Ok(vec![
        div(w * x * (y + w2), x + w2, "x + w^2")?,
        div((1.0 - w2) * y * (x + w2), den, "route denominator")?,
    ])
}

/// The second point of the same route, written directly in `(x, y)`.
pub fn lv3_route_second(w: Cx, p: &[Cx]) -> Result<PointC> {
    let (x, y) = (p[0], p[1]);
    let w2 = w * w;
    let den = 3.0 * x * y + (x + y - 1.0) * (w2 - 1.0);
    Ok(vec![
        div((1.0 - w2) * x * (y + w2), den, "route denominator")?,
        div(w * y * (x + w2), y + w2, "y + w^2")?,
    ])
}

/// `(x, y, z) ↦ (x/(x + z − 1), y(1 − x − z), z/(x + z − 1))`.
pub fn lv4_reduced(p: &[BigRational]) -> Result<Vec<BigRational>> {
    let (x, y, z) = (&p[0], &p[1], &p[2]);
    let d = x + z - BigRational::one();
    Ok(vec![
        div_exact(x.clone(), &d, "x + z - 1")?,
        -(y * &d),
        div_exact(z.clone(), &d, "x + z - 1")?,
    ])
}

/// The reduced Toda step on `(x, y, u, v)` with `S = u + v + y`,
/// `T = x + y + u`: `(−yS/T, (S² + (x − v)u)/S, −uT/S, vS/(x − v))`.
pub fn toda_reduced(p: &[BigRational]) -> Result<Vec<BigRational>> {
    let (x, y, u, v) = (&p[0], &p[1], &p[2], &p[3]);
    let s = u + v + y;
    let t = x + y + u;
    let xv = x - v;
    Ok(vec![
        -div_exact(y * &s, &t, "x + y + u")?,
        div_exact(&s * &s + &xv * u, &s, "u + v + y")?,
        -div_exact(u * &t, &s, "u + v + y")?,
        div_exact(v * &s, &xv, "x - v")?,
    ])
}

/// The two-step Toda image as displayed alongside the recurrence:
/// `(φT/(x − v), xS/(x − v), u(x − v)/S, −vT/(x − v))` with
/// `φ = (S² + (x − v)u)/S`.
pub fn toda_printed_second(p: &[BigRational]) -> Result<Vec<BigRational>> {
    let (x, y, u, v) = (&p[0], &p[1], &p[2], &p[3]);
    let s = u + v + y;
    let t = x + y + u;
    let xv = x - v;
    let phi = div_exact(&s * &s + &xv * u, &s, "u + v + y")?;
    Ok(vec![
        div_exact(phi * &t, &xv, "x - v")?,
        div_exact(x * &s, &xv, "x - v")?,
        div_exact(u * &xv, &s, "u + v + y")?,
        -div_exact(v * &t, &xv, "x - v")?,
    ])
}

/// `(X₊, Y₊)` and `(X₋, Y₋)` of the Euler top at a point of its period-3
/// variety. With `A = αγy² + βγx²`, `q = (A − 1 − αβz²)/2` and the radical
/// taken as `αz` (resp. `βz`):
/// `X± = (1 − αγy² + q)/(1 − αγy²) · (x ± αyz)/(A − 2 − 2q)`,
/// `Y± = (1 − βγx² + q)/(1 − βγx²) · (y ± βxz)/(A − 2 − 2q)`.
pub fn euler_routes(abg: [Cx; 3], p: [Cx; 3]) -> Result<([Cx; 2], [Cx; 2])> {
    let [al, be, ga] = abg;
    let [x, y, z] = p;
    let cy = 1.0 - al * ga * y * y;
    let cx = 1.0 - be * ga * x * x;
    let a = al * ga * y * y + be * ga * x * x;
    let q = (a - 1.0 - al * be * z * z) / 2.0;
    let d = a - 2.0 - 2.0 * q;
    let fx = div(cy + q, cy * d, "X route denominator")?;
    let fy = div(cx + q, cx * d, "Y route denominator")?;
    Ok((
        [fx * (x + al * y * z), fy * (y + be * x * z)],
        [fx * (x - al * y * z), fy * (y - be * x * z)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_frac};

    #[test]
    fn lv4_reduced_two_cycle_at_documented_point() {
        let p = vec![rat(2), rat(5), rat_frac(1, 4)];
        let p1 = lv4_reduced(&p).unwrap();
        assert_eq!(p1, vec![rat_frac(8, 5), rat_frac(-25, 4), rat_frac(1, 5)]);
        assert_eq!(lv4_reduced(&p1).unwrap(), p);
    }

    #[test]
    fn toda_reduced_three_cycle_and_displayed_second_step() {
        let p = vec![rat_frac(2, 3), rat(-5), rat_frac(7, 4), rat_frac(1, 9)];
        let p1 = toda_reduced(&p).unwrap();
        let p2 = toda_reduced(&p1).unwrap();
        assert_eq!(toda_reduced(&p2).unwrap(), p);
        let shown = toda_printed_second(&p).unwrap();
        // the displayed first component carries the opposite sign
        assert_eq!(shown[0], -p2[0].clone());
        assert_eq!(shown[1..], p2[1..]);
    }

    #[test]
    fn lv3_routes_are_three_cycles() {
        let p0 = vec![Cx::new(0.6, 0.1), Cx::new(-0.7, 0.3)];
        for k in [1, 2] {
            let w = omega(k);
            let p1 = lv3_route(w, &p0).unwrap();
            let p2 = lv3_route(w, &p1).unwrap();
            let direct = lv3_route_second(w, &p0).unwrap();
            let p3 = lv3_route(w, &p2).unwrap();
            for j in 0..2 {
                assert!((p2[j] - direct[j]).norm() < 1e-12);
                assert!((p3[j] - p0[j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn example_route_returns() {
        let x0 = Cx::new(0.3, -0.8);
        for k in [1, 2] {
            let w = omega(k);
            let x3 = (0..3).try_fold(x0, |x, _| example_route(w, x)).unwrap();
            assert!((x3 - x0).norm() < 1e-14);
        }
    }
}
