use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldSpec};

/// Dense univariate polynomial over a field, ascending coefficients, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        let mut p = UniPoly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_i64(field: &FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::new(field, vec![field.one()])
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElement) -> Self {
        let f = c.field().clone();
        Self::new(&f, vec![c])
    }

    /// x − r
    pub fn linear(r: &FieldElement) -> Self {
        Self::new(r.field(), vec![-r, r.one_like()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_i64(i as i64))
                .collect(),
        )
    }

    /// Taylor coefficients at `a`: p(a + t) = Σ out[k] t^k.
    pub fn taylor_at(&self, a: &FieldElement) -> Vec<FieldElement> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] = &c[j] + &t;
            }
        }
        c
    }

    /// Map coefficients through a field embedding.
    pub fn map_field(&self, target: &FieldSpec, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::new(target, self.coeffs.iter().map(f).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.lc().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let t = &c * dj;
                    r[i + j] = &r[i + j] - &t;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(&self.field, q), Self::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let mut r0 = m.clone();
        let mut r1 = self.rem(m).ok()?;
        let mut t0 = Self::zero(&self.field);
        let mut t1 = Self::one(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).ok()?;
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.lc().inv().ok()?;
        t0.scale(&c).rem(m).ok()
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        (self * other).rem(m).unwrap()
    }

    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m).unwrap();
        let base = self.rem(m).unwrap();
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    /// Resultant with the Sylvester sign convention.
    pub fn resultant(&self, other: &Self) -> FieldElement {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return self.field.zero();
        };
        if n == 0 {
            return other.lc().pow(m as u64);
        }
        if m == 0 {
            return self.lc().pow(n as u64);
        }
        let r = self.rem(other).unwrap();
        let Some(k) = r.degree() else {
            return self.field.zero();
        };
        let sign = if m % 2 == 1 && n % 2 == 1 { -1 } else { 1 };
        let sub = other.resultant(&r);
        &(&self.field.from_i64(sign) * &other.lc().pow((m - k) as u64)) * &sub
    }

    /// Discriminant normalised as res(p, p′)/lc(p) times the usual sign
    /// (−1)^(n(n−1)/2).
    pub fn discriminant(&self) -> FieldElement {
        let n = self.degree().unwrap_or(0);
        let r = self.resultant(&self.derivative());
        let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 };
        &(&r / &self.lc()) * &self.field.from_i64(sign)
    }

    /// Distinct roots in the coefficient field, ascending in the canonical
    /// element order.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = if self.field.is_finite() {
            let q = self.field.order().unwrap();
            let split = self.frobenius_part(&q, 1);
            let mut factors = Vec::new();
            split_equal_degree(&split, 1, &q, &mut factors);
            factors.iter().map(|f| -&f.coeff(0)).collect()
        } else {
            rational_roots(self)
        };
        out.sort();
        out.dedup();
        out
    }

    /// Product of the distinct monic irreducible factors of degree `d`
    /// (d = 1 or 2), assuming the lower-degree part has been handled.
    fn frobenius_part(&self, q: &BigUint, d: u32) -> Self {
        let f = self.monic();
        let x = Self::x(&self.field);
        let mut h = x.clone();
        for _ in 0..d {
            h = h.powmod(q, &f);
        }
        let g = f.gcd(&(&h - &x));
        if d == 1 {
            return g;
        }
        // remove the linear part from gcd(f, x^(q^2) − x)
        let lin = f.gcd(&(&x.powmod(q, &f) - &x));
        g.exact_div(&lin.gcd(&g)).unwrap().monic()
    }

    /// Monic irreducible quadratic factors (finite fields only), ascending by
    /// coefficient vector from the top.
    pub fn irreducible_quadratic_factors(&self) -> Vec<UniPoly> {
        if !self.field.is_finite() || self.degree().unwrap_or(0) < 2 {
            return Vec::new();
        }
        let q = self.field.order().unwrap();
        let part = self.frobenius_part(&q, 2);
        let mut factors = Vec::new();
        if part.degree().unwrap_or(0) >= 2 {
            split_equal_degree(&part, 2, &q, &mut factors);
        }
        factors.sort_by(|a, b| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()));
        factors
    }

    /// Whether the polynomial has no repeated factor.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

/// Split a product of distinct monic degree-`d` irreducibles (odd q) with
/// Cantor–Zassenhaus, using a fixed-seed generator for reproducibility.
fn split_equal_degree(f: &UniPoly, d: usize, q: &BigUint, out: &mut Vec<UniPoly>) {
    let n = match f.degree() {
        Some(n) if n > 0 => n,
        _ => return,
    };
    if n == d {
        out.push(f.monic());
        return;
    }
    let field = f.field().clone();
    let exp = (q.pow(d as u32) - 1u32) >> 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    loop {
        let a = UniPoly::new(
            &field,
            (0..n).map(|_| field.random_element(&mut rng)).collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = f.gcd(&a);
        let g = if g.degree().unwrap_or(0) > 0 && g.degree() != Some(n) {
            g
        } else {
            let b = &a.powmod(&exp, f) - &UniPoly::one(&field);
            f.gcd(&b)
        };
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                split_equal_degree(&g, d, q, out);
                split_equal_degree(&f.exact_div(&g).unwrap().monic(), d, q, out);
                return;
            }
        }
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

fn rational_roots(p: &UniPoly) -> Vec<FieldElement> {
    let field = p.field().clone();
    // clear denominators
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * &lcm).to_integer())
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        out.push(field.zero());
    }
    let a0 = &ints[low];
    let an = ints.last().unwrap();
    if a0.bits() > 80 || an.bits() > 80 {
        // Trial division would be hopeless; such inputs do not occur here.
        return out;
    }
    for num in divisors(a0) {
        for den in divisors(an) {
            for s in [1i64, -1] {
                let r = field
                    .from_bigint(&(&num * s))
                    .try_div(&field.from_bigint(&den))
                    .unwrap();
                if p.eval(&r).is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c.is_one() && i > 0, mono.is_empty()) {
                (true, _) => mono,
                (false, true) => format!("({c})"),
                (false, false) => format!("({c})*{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] += &t;
            }
        }
        UniPoly::new(&self.field, out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        let q = FieldSpec::rational();
        let p = UniPoly::from_i64(&q, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(p.discriminant(), q.from_i64(3125));
        let f11 = FieldSpec::prime(11).unwrap();
        let p = UniPoly::from_i64(&f11, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(p.discriminant(), f11.from_i64(1));
        let p = UniPoly::from_i64(&q, &[0, 0, 0, 0, 0, 1]);
        assert!(p.discriminant().is_zero());
    }

    #[test]
    fn roots_of_x5_plus_1() {
        let f11 = FieldSpec::prime(11).unwrap();
        let p = UniPoly::from_i64(&f11, &[1, 0, 0, 0, 0, 1]);
        let r: Vec<i64> = p.roots().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(r, vec![2, 6, 7, 8, 10]);
        let f7 = FieldSpec::prime(7).unwrap();
        let p = UniPoly::from_i64(&f7, &[1, 0, 0, 0, 0, 1]);
        let r: Vec<i64> = p.roots().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(r, vec![6]);
        let q = FieldSpec::rational();
        let p = UniPoly::from_i64(&q, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(p.roots(), vec![q.from_i64(-1)]);
    }

    #[test]
    fn roots_match_brute_force() {
        for p in [7u64, 13, 1009] {
            let f = FieldSpec::prime(p).unwrap();
            for seed in 0..20i64 {
                let poly = UniPoly::from_i64(&f, &[seed * 3 + 1, seed, -2, seed * seed, 5, 1]);
                let brute: Vec<_> = f.elements().filter(|x| poly.eval(x).is_zero()).collect();
                assert_eq!(poly.roots(), brute);
            }
        }
        let f49 = FieldSpec::galois(7, 2).unwrap();
        let poly = UniPoly::from_i64(&f49, &[1, 0, 0, 0, 0, 1]);
        let brute: Vec<_> = f49.elements().filter(|x| poly.eval(x).is_zero()).collect();
        assert_eq!(poly.roots(), brute);
    }

    #[test]
    fn quadratic_factors() {
        let f7 = FieldSpec::prime(7).unwrap();
        // (x^2+1)(x^2+x+3)(x-2)
        let a = UniPoly::from_i64(&f7, &[1, 0, 1]);
        let b = UniPoly::from_i64(&f7, &[3, 1, 1]);
        let c = UniPoly::from_i64(&f7, &[-2, 1]);
        let p = &(&a * &b) * &c;
        let fs = p.irreducible_quadratic_factors();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a) && fs.contains(&b));
    }

    #[test]
    fn resultant_detects_common_root() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = UniPoly::from_i64(&f7, &[-2, 0, 1]);
        let b = UniPoly::from_i64(&f7, &[-3, 1]);
        assert!(a.resultant(&b).is_zero());
        let q = FieldSpec::rational();
        let a = UniPoly::from_i64(&q, &[-3, 1]);
        let b = UniPoly::from_i64(&q, &[-5, 1]);
        assert_eq!(a.resultant(&b), q.from_i64(-2));
    }

    #[test]
    fn taylor_shift() {
        let q = FieldSpec::rational();
        let p = UniPoly::from_i64(&q, &[1, 2, 3]);
        // 3(x+1)^2 + 2(x+1) + 1 = 3x^2 + 8x + 6
        let t = p.taylor_at(&q.one());
        assert_eq!(t, vec![q.from_i64(6), q.from_i64(8), q.from_i64(3)]);
    }
}
