//! Dense polynomials over F_p with word-sized coefficients, ascending order.
//! Used to build and validate extension-field moduli and to invert
//! extension elements.

use super::modp;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            modp::sub(x, y, p)
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = modp::add(out[i + j], modp::mul(x, y, p), p);
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = modp::inv(*b.last().unwrap(), p).expect("leading coefficient invertible");
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = modp::mul(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = modp::sub(r[shift + j], modp::mul(c, bj, p), p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

fn make_monic(a: Vec<u64>, p: u64) -> Vec<u64> {
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = modp::inv(lc, p).unwrap();
            a.into_iter().map(|c| modp::mul(c, inv, p)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(x, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, or `None` when they share a factor.
pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = rem(a, m, p);
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = modp::inv(r0[0], p)?;
    let t: Vec<u64> = t0.into_iter().map(|x| modp::mul(x, c, p)).collect();
    Some(rem(&t, m, p))
}

/// Ben-Or irreducibility test: `m` of degree k is irreducible iff
/// gcd(m, t^(p^i) - t) = 1 for i = 1..=k/2.
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let m = trim(m.to_vec());
    let k = m.len().saturating_sub(1);
    if k == 0 {
        return false;
    }
    let t = vec![0, 1];
    let mut h = rem(&t, &m, p);
    for _ in 1..=k / 2 {
        h = powmod(&h, p, &m, p);
        let g = gcd(&m, &sub(&h, &t, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
