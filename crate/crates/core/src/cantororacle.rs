//! Textbook Cantor composition and reduction on y² = f(x) over a prime
//! field, with exhaustive enumeration of the Jacobian. Used as ground
//! truth; it has its own polynomial code and none of the γ machinery.

use rayon::prelude::*;

use crate::curve::{CanonicalCurve, Point};
use crate::divisor::MumfordDivisor;
use crate::error::{Error, Result};
use crate::exactfield::{FieldKind, FieldSpec};

/// Largest prime accepted by [`enumerate_jacobian`].
pub const MAX_ENUMERATION_PRIME: u64 = 31;

type Poly = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Poly) -> isize {
    a.len() as isize - 1
}

fn padd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn pneg(a: &Poly, p: u64) -> Poly {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn psub(a: &Poly, b: &Poly, p: u64) -> Poly {
    padd(a, &pneg(b, p), p)
}

fn pmul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(r)
}

fn pscale(a: &Poly, c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mulm(x, c, p)).collect())
}

fn pdivrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulm(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulm(c, bc, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: &Poly, p: u64) -> Poly {
    match a.last() {
        Some(&lc) => pscale(a, invm(lc, p), p),
        None => vec![],
    }
}

/// (g, s, t) with g = s·a + t·b monic.
fn xgcd(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.clone()), trim(b.clone()));
    let (mut s0, mut s1) = (vec![1], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = invm(*r0.last().unwrap(), p);
    (pscale(&r0, inv, p), pscale(&s0, inv, p), pscale(&t0, inv, p))
}

/// A curve y² = f(x) with f monic of degree 5 over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorCurve {
    pub p: u64,
    /// Ascending coefficients of f.
    pub f: Vec<u64>,
}

/// A reduced divisor div(u, v): u monic of degree ≤ 2, deg v < deg u,
/// u | v² − f.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CantorDivisor {
    pub u: Vec<u64>,
    pub v: Vec<u64>,
}

impl CantorDivisor {
    pub fn neutral() -> Self {
        CantorDivisor { u: vec![1], v: vec![] }
    }

    pub fn is_neutral(&self) -> bool {
        self.u == [1]
    }

    pub fn degree(&self) -> usize {
        self.u.len() - 1
    }
}

impl CantorCurve {
    pub fn new(p: u64, f: Vec<u64>) -> Result<Self> {
        if p < 3 || f.len() != 6 || f[5] % p != 1 {
            return Err(Error::Unsupported(
                "the oracle needs an odd prime and a monic quintic".into(),
            ));
        }
        Ok(CantorCurve {
            p,
            f: f.iter().map(|c| c % p).collect(),
        })
    }

    /// The same curve as a canonical curve over a prime field.
    pub fn from_canonical(c: &CanonicalCurve) -> Result<Self> {
        let p = match c.field().kind() {
            FieldKind::Prime { p } => *p,
            _ => {
                return Err(Error::Unsupported(
                    "the oracle works over prime fields only".into(),
                ))
            }
        };
        let f = c
            .poly()
            .coeffs()
            .iter()
            .map(|e| e.to_i64().map(|v| v as u64))
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::InvalidField("curve coefficients are not residues".into()))?;
        Self::new(p, f)
    }

    fn reduce(&self, mut u: Poly, mut v: Poly) -> CantorDivisor {
        let p = self.p;
        while deg(&u) > 2 {
            let num = psub(&self.f, &pmul(&v, &v, p), p);
            let (un, rem) = pdivrem(&num, &u, p);
            debug_assert!(rem.is_empty());
            u = monic(&un, p);
            v = pdivrem(&pneg(&v, p), &u, p).1;
        }
        let u = monic(&u, p);
        let v = pdivrem(&v, &u, p).1;
        CantorDivisor { u, v }
    }

    /// Cantor composition followed by reduction.
    pub fn add(&self, a: &CantorDivisor, b: &CantorDivisor) -> CantorDivisor {
        let p = self.p;
        let (d1, e1, e2) = xgcd(&a.u, &b.u, p);
        let (d, c1, c2) = xgcd(&d1, &padd(&a.v, &b.v, p), p);
        let s1 = pmul(&c1, &e1, p);
        let s2 = pmul(&c1, &e2, p);
        let s3 = c2;
        let d2 = pmul(&d, &d, p);
        let u = pdivrem(&pmul(&a.u, &b.u, p), &d2, p).0;
        let t = padd(
            &padd(
                &pmul(&pmul(&s1, &a.u, p), &b.v, p),
                &pmul(&pmul(&s2, &b.u, p), &a.v, p),
                p,
            ),
            &pmul(&s3, &padd(&pmul(&a.v, &b.v, p), &self.f, p), p),
            p,
        );
        let v = pdivrem(&pdivrem(&t, &d, p).0, &u, p).1;
        self.reduce(u, v)
    }

    pub fn negate(&self, a: &CantorDivisor) -> CantorDivisor {
        CantorDivisor {
            u: a.u.clone(),
            v: pneg(&a.v, self.p),
        }
    }

    pub fn scalar_mul(&self, n: i64, a: &CantorDivisor) -> CantorDivisor {
        let mut base = if n < 0 { self.negate(a) } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CantorDivisor::neutral();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    fn eval(&self, x: u64) -> u64 {
        self.f.iter().rev().fold(0, |acc, &c| (mulm(acc, x, self.p) + c) % self.p)
    }

    pub fn is_valid(&self, a: &CantorDivisor) -> bool {
        let p = self.p;
        a.u.last() == Some(&1)
            && deg(&a.u) <= 2
            && deg(&a.v) < deg(&a.u)
            && pdivrem(&psub(&pmul(&a.v, &a.v, p), &self.f, p), &a.u, p).1.is_empty()
    }

    /// Every reduced divisor over F_p, sorted.
    pub fn enumerate(&self) -> Result<Vec<CantorDivisor>> {
        let p = self.p;
        if p > MAX_ENUMERATION_PRIME {
            return Err(Error::Unsupported(format!(
                "enumeration is limited to p ≤ {MAX_ENUMERATION_PRIME}"
            )));
        }
        let mut out = vec![CantorDivisor::neutral()];
        for a in 0..p {
            let fa = self.eval(a);
            for b in 0..p {
                if mulm(b, b, p) == fa {
                    out.push(CantorDivisor {
                        u: vec![(p - a) % p, 1],
                        v: trim(vec![b]),
                    });
                }
            }
        }
        let quad: Vec<CantorDivisor> = (0..p * p)
            .into_par_iter()
            .flat_map_iter(|i| {
                let u = vec![i % p, i / p, 1];
                (0..p * p).filter_map(move |j| {
                    let d = CantorDivisor {
                        u: u.clone(),
                        v: trim(vec![j % p, j / p]),
                    };
                    self.is_valid(&d).then_some(d)
                })
            })
            .collect();
        out.extend(quad);
        out.sort();
        Ok(out)
    }

    /// Number of projective points over F_p and F_{p²} (one point at infinity).
    pub fn point_counts(&self) -> (u64, u64) {
        let p = self.p;
        let chi = |z: u64| -> i64 {
            if z == 0 {
                0
            } else if powm(z, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            }
        };
        let n1 = (0..p).map(|x| 1 + chi(self.eval(x))).sum::<i64>() + 1;
        // F_{p²} = F_p(√r) for a non-residue r
        let r = (2..p).find(|&r| chi(r) == -1).unwrap();
        let m2 = |a: (u64, u64), b: (u64, u64)| {
            (
                (mulm(a.0, b.0, p) + mulm(mulm(a.1, b.1, p), r, p)) % p,
                (mulm(a.0, b.1, p) + mulm(a.1, b.0, p)) % p,
            )
        };
        let pow2 = |mut a: (u64, u64), mut e: u64| {
            let mut acc = (1, 0);
            while e > 0 {
                if e & 1 == 1 {
                    acc = m2(acc, a);
                }
                a = m2(a, a);
                e >>= 1;
            }
            acc
        };
        let mut n2: i64 = 1;
        for a in 0..p {
            for b in 0..p {
                let x = (a, b);
                let fx = self
                    .f
                    .iter()
                    .rev()
                    .fold((0, 0), |acc, &c| {
                        let t = m2(acc, x);
                        ((t.0 + c) % p, t.1)
                    });
                n2 += if fx == (0, 0) {
                    1
                } else if pow2(fx, (p * p - 1) / 2) == (1, 0) {
                    2
                } else {
                    0
                };
            }
        }
        (n1 as u64, n2 as u64)
    }

    /// |J(F_p)| from the point counts: (N₁² + N₂)/2 − p.
    pub fn order_from_point_counts(&self) -> u64 {
        let (n1, n2) = self.point_counts();
        (n1 * n1 + n2) / 2 - self.p
    }

    /// Exact order of `a`, given a multiple `m` of it (e.g. the group order).
    pub fn order_of(&self, a: &CantorDivisor, m: u64) -> u64 {
        let mut n = m;
        for q in prime_factors(m) {
            while n % q == 0 && self.scalar_mul((n / q) as i64, a).is_neutral() {
                n /= q;
            }
        }
        n
    }

    /// All elements of exact order n.
    pub fn brute_force_n_torsion(&self, n: u64) -> Result<Vec<CantorDivisor>> {
        let all = self.enumerate()?;
        let primes = prime_factors(n);
        Ok(all
            .into_par_iter()
            .filter(|d| {
                self.scalar_mul(n as i64, d).is_neutral()
                    && primes
                        .iter()
                        .all(|q| !self.scalar_mul((n / q) as i64, d).is_neutral())
            })
            .collect())
    }

    pub fn to_mumford(&self, a: &CantorDivisor) -> MumfordDivisor {
        let f = FieldSpec::prime(self.p).expect("prime checked on construction");
        let c = |v: &Poly, i: usize| f.from_i64(v.get(i).copied().unwrap_or(0) as i64);
        match a.degree() {
            0 => MumfordDivisor::Neutral,
            1 => MumfordDivisor::Special(Point::new(-&c(&a.u, 0), c(&a.v, 0))),
            _ => MumfordDivisor::nonspecial(c(&a.u, 1), c(&a.u, 0), -&c(&a.v, 1), -&c(&a.v, 0)),
        }
    }

    pub fn from_mumford(&self, d: &MumfordDivisor) -> Result<CantorDivisor> {
        let p = self.p;
        let int = |e: &crate::exactfield::FieldElement| -> Result<u64> {
            match (e.field().kind(), e.to_i64()) {
                (FieldKind::Prime { p: q }, Some(v)) if *q == p => Ok(v as u64),
                _ => Err(Error::MixedFields(e.field().to_string(), format!("F_{p}"))),
            }
        };
        Ok(match d {
            MumfordDivisor::Neutral => CantorDivisor::neutral(),
            MumfordDivisor::Special(pt) => CantorDivisor {
                u: vec![(p - int(&pt.x)?) % p, 1],
                v: trim(vec![int(&pt.y)?]),
            },
            MumfordDivisor::NonSpecial {
                alpha2,
                alpha4,
                beta3,
                beta5,
            } => CantorDivisor {
                u: vec![int(alpha4)?, int(alpha2)?, 1],
                v: trim(vec![(p - int(beta5)?) % p, (p - int(beta3)?) % p]),
            },
        })
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
