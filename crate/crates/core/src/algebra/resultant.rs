//! Sylvester resultants with a fraction-free (Bareiss) determinant.

use super::gcd::exact_divide;
use super::mpoly::MPoly;
use crate::error::{Error, Result};

/// Sylvester matrix of `p` and `q` in `var`: `deg q` shifted rows of p's
/// coefficients (highest power first), then `deg p` rows of q's.
pub fn sylvester_matrix(p: &MPoly, q: &MPoly, var: &str) -> Vec<Vec<MPoly>> {
    let (p, q) = MPoly::align(p, q);
    let vars = p.vars().clone();
    let pc: Vec<MPoly> = p.coeffs_in(var).into_iter().rev().collect();
    let qc: Vec<MPoly> = q.coeffs_in(var).into_iter().rev().collect();
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![MPoly::zero(vars.clone()); size];
        for (k, c) in pc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![MPoly::zero(vars.clone()); size];
        for (k, c) in qc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by Bareiss fraction-free elimination; every division is
/// exact by construction.
pub fn determinant(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    assert!(n > 0, "empty matrix");
    let vars = m[0][0].vars().clone();
    let mut negate = false;
    let mut prev = MPoly::one(vars.clone());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Prefer the pivot with fewest terms to keep entries small.
            let Some(i) = (k + 1..n)
                .filter(|&i| !m[i][k].is_zero())
                .min_by_key(|&i| m[i][k].num_terms())
            else {
                return MPoly::zero(vars);
            };
            m.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = exact_divide(&num, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero(vars.clone());
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `Res(p, q, var)`: the determinant of the Sylvester matrix in `var`.
pub fn resultant(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly> {
    if p.degree_in(var) == 0 || q.degree_in(var) == 0 {
        return Err(Error::NothingToEliminate {
            var: var.to_string(),
        });
    }
    Ok(determinant(sylvester_matrix(p, q, var)))
}
