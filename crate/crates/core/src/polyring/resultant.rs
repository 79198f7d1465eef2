//! Resultants of multivariate polynomials with respect to one variable.
//!
//! The main routine is the subresultant PRS; a fraction-free (Bareiss)
//! Sylvester determinant is kept as an independent check for small inputs.
//! Both use the Sylvester-matrix sign convention, so res(x − a, x − b) = a − b.

use crate::error::{Error, Result};

use super::WeightedPoly;

fn degree(c: &[WeightedPoly]) -> Option<usize> {
    c.iter().rposition(|p| !p.is_zero())
}

fn trimmed(mut c: Vec<WeightedPoly>) -> Vec<WeightedPoly> {
    while c.len() > 1 && c.last().is_some_and(|p| p.is_zero()) {
        c.pop();
    }
    c
}

/// Pseudo-remainder: lc(b)^(deg a − deg b + 1) · a mod b.
fn prem(a: &[WeightedPoly], b: &[WeightedPoly]) -> Vec<WeightedPoly> {
    let db = degree(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = a.to_vec();
    let da = match degree(&r) {
        Some(d) => d,
        None => return r,
    };
    if da < db {
        return r;
    }
    let mut steps = da - db + 1;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let t = &lr * bj;
            r[shift + j] = &r[shift + j] - &t;
        }
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    trimmed(r)
}

fn exact_div_all(c: &[WeightedPoly], d: &WeightedPoly) -> Result<Vec<WeightedPoly>> {
    c.iter().map(|p| p.exact_div(d)).collect()
}

/// Resultant of `p` and `q` with respect to variable `var`, by the
/// subresultant polynomial remainder sequence.
pub fn resultant(p: &WeightedPoly, q: &WeightedPoly, var: usize) -> Result<WeightedPoly> {
    if p.ring() != q.ring() {
        return Err(Error::MixedRings);
    }
    let ring = p.ring().clone();
    if p.is_zero() || q.is_zero() {
        return Ok(ring.zero());
    }
    let mut a = trimmed(p.to_univariate(var));
    let mut b = trimmed(q.to_univariate(var));
    let mut s = ring.one();
    let (mut da, mut db) = (degree(&a).unwrap(), degree(&b).unwrap());
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            s = -&s;
        }
    }
    if db == 0 {
        return Ok(&s * &b[0].pow(da as u32));
    }
    let mut g = ring.one();
    let mut h = ring.one();
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -&s;
        }
        let r = prem(&a, &b);
        a = b;
        let divisor = &g * &h.pow(delta as u32);
        b = exact_div_all(&r, &divisor)?;
        da = degree(&a).unwrap();
        g = a[da].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta as u32).exact_div(&h.pow(delta as u32 - 1))?,
        };
        match degree(&b) {
            None => return Ok(ring.zero()),
            Some(0) => {
                let lb = b[0].clone();
                let out = if da == 0 {
                    h
                } else {
                    lb.pow(da as u32).exact_div(&h.pow(da as u32 - 1))?
                };
                return Ok(&s * &out);
            }
            Some(d) => db = d,
        }
    }
}

/// Resultant as the determinant of the Sylvester matrix, computed with
/// Bareiss fraction-free elimination. Quadratic in memory; for small inputs.
pub fn sylvester_resultant(p: &WeightedPoly, q: &WeightedPoly, var: usize) -> Result<WeightedPoly> {
    if p.ring() != q.ring() {
        return Err(Error::MixedRings);
    }
    let ring = p.ring().clone();
    if p.is_zero() || q.is_zero() {
        return Ok(ring.zero());
    }
    let a = trimmed(p.to_univariate(var));
    let b = trimmed(q.to_univariate(var));
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return Ok(ring.one());
    }
    let mut mat = vec![vec![ring.zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square matrix over a polynomial ring (exact divisions).
pub fn bareiss_det(mut mat: Vec<Vec<WeightedPoly>>) -> Result<WeightedPoly> {
    let size = mat.len();
    let ring = mat[0][0].ring().clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(ring.zero()),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = t.exact_div(&prev)?;
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if sign { -det } else { det })
}
