//! Exact arithmetic over the rationals, prime fields F_p and small extension
//! fields F_{p^k} = F_p[t]/(m(t)), k <= 4.
//!
//! A [`FieldElement`] carries a handle to its [`FieldSpec`], so operators can
//! be used freely when transcribing formulas. Operators panic on mixed fields
//! or division by zero; the `try_*` methods report those as [`Error`]s.

mod fp_poly;
pub mod modp;
mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use tower::QuadraticExtension;

pub const MAX_EXTENSION_DEGREE: usize = 4;

/// Serialized shape of a field, e.g. `{"kind":"prime","p":7}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Prime {
        p: u64,
    },
    /// `modulus` holds the k+1 ascending coefficients of the monic m(t).
    Extension {
        p: u64,
        k: usize,
        modulus: Vec<u64>,
    },
}

struct FieldInner {
    kind: FieldKind,
    /// Cached quadratic non-residue for Tonelli–Shanks in extension fields.
    nonresidue: OnceLock<Repr>,
}

/// A validated field description, cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "F_{p}"),
            FieldKind::Extension { p, k, .. } => write!(f, "F_{p}^{k}"),
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kind().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = FieldKind::deserialize(d)?;
        FieldSpec::from_kind(kind).map_err(serde::de::Error::custom)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !modp::is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if p == 2 || p == 5 {
        return Err(Error::InvalidField(format!(
            "characteristic {p} is not supported"
        )));
    }
    Ok(())
}

impl FieldSpec {
    fn wrap(kind: FieldKind) -> Self {
        FieldSpec(Arc::new(FieldInner {
            kind,
            nonresidue: OnceLock::new(),
        }))
    }

    pub fn rational() -> Self {
        Self::wrap(FieldKind::Rational)
    }

    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self::wrap(FieldKind::Prime { p }))
    }

    /// F_p[t]/(m) for a monic irreducible `modulus` given in ascending order.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        let modulus = fp_poly::trim(modulus.into_iter().map(|c| c % p).collect());
        let k = modulus.len().saturating_sub(1);
        if k == 0 || k > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree must be between 1 and {MAX_EXTENSION_DEGREE}"
            )));
        }
        if modulus[k] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(Self::wrap(FieldKind::Extension { p, k, modulus }))
    }

    /// F_{p^k} with the first irreducible modulus found by [`find_irreducible`].
    pub fn galois(p: u64, k: usize) -> Result<Self> {
        if k == 1 {
            return Self::prime(p);
        }
        Self::extension(p, find_irreducible(p, k)?)
    }

    pub fn from_kind(kind: FieldKind) -> Result<Self> {
        match kind {
            FieldKind::Rational => Ok(Self::rational()),
            FieldKind::Prime { p } => Self::prime(p),
            FieldKind::Extension { p, k, modulus } => {
                let f = Self::extension(p, modulus)?;
                if f.degree() != k {
                    return Err(Error::InvalidField(format!(
                        "declared degree {k} does not match the modulus"
                    )));
                }
                Ok(f)
            }
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Rational => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
        }
    }

    /// Degree over the prime field (1 for F_p and for Q).
    pub fn degree(&self) -> usize {
        match self.kind() {
            FieldKind::Extension { k, .. } => *k,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind(), FieldKind::Rational)
    }

    /// Number of elements; `None` for Q.
    pub fn order(&self) -> Option<BigUint> {
        match self.kind() {
            FieldKind::Rational => None,
            FieldKind::Prime { p } => Some(BigUint::from(*p)),
            FieldKind::Extension { p, k, .. } => Some(BigUint::from(*p).pow(*k as u32)),
        }
    }

    /// Order as a machine word, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|q| q.to_u64())
    }

    fn make(&self, repr: Repr) -> FieldElement {
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.make(match self.kind() {
            FieldKind::Rational => Repr::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => Repr::Res(0),
            FieldKind::Extension { k, .. } => Repr::Ext(vec![0; *k]),
        })
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self.kind() {
            FieldKind::Rational => self.make(Repr::Rat(BigRational::from_integer(v.clone()))),
            FieldKind::Prime { p } => self.make(Repr::Res(reduce_bigint(v, *p))),
            FieldKind::Extension { p, k, .. } => {
                let mut c = vec![0; *k];
                c[0] = reduce_bigint(v, *p);
                self.make(Repr::Ext(c))
            }
        }
    }

    /// n/d, reduced into the field.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<FieldElement> {
        self.from_i64(n).try_div(&self.from_i64(d))
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElement> {
        self.from_bigint(r.numer())
            .try_div(&self.from_bigint(r.denom()))
    }

    /// Element with the given ascending coordinates over F_p. Missing
    /// coordinates are zero; for F_p only the first entry is used.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        match self.kind() {
            FieldKind::Rational => self.from_i64(coeffs.first().copied().unwrap_or(0) as i64),
            FieldKind::Prime { p } => self.make(Repr::Res(coeffs.first().copied().unwrap_or(0) % p)),
            FieldKind::Extension { p, k, .. } => {
                let mut c = vec![0; *k];
                for (i, &x) in coeffs.iter().take(*k).enumerate() {
                    c[i] = x % p;
                }
                self.make(Repr::Ext(c))
            }
        }
    }

    /// The class of t in F_p[t]/(m); for F_p this is just 0.
    pub fn generator(&self) -> FieldElement {
        self.from_coeffs(&[0, 1])
    }

    /// Element number `n` in the canonical enumeration (base-p digits are
    /// the ascending coordinates). Consistent with the `Ord` on elements.
    pub fn element_from_index(&self, mut n: u64) -> FieldElement {
        let p = self.characteristic();
        assert!(p != 0, "the rationals cannot be enumerated");
        let mut coeffs = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            coeffs.push(n % p);
            n /= p;
        }
        self.from_coeffs(&coeffs)
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self
            .order_u64()
            .expect("enumeration needs a finite field of word size");
        (0..q).map(move |n| self.element_from_index(n))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match self.kind() {
            FieldKind::Rational => self.from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=20)).unwrap(),
            FieldKind::Prime { p } => self.make(Repr::Res(rng.gen_range(0..*p))),
            FieldKind::Extension { p, k, .. } => {
                self.make(Repr::Ext((0..*k).map(|_| rng.gen_range(0..*p)).collect()))
            }
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let bad = || Error::ParseElement(s.to_string());
        match self.kind() {
            FieldKind::Rational => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(s.parse().map_err(|_| bad())?)
                };
                Ok(self.make(Repr::Rat(r)))
            }
            FieldKind::Prime { .. } => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
            FieldKind::Extension { k, .. } => {
                let mut acc = self.zero();
                let t = self.generator();
                for raw in s.replace('-', "+-").split('+') {
                    let term = raw.trim();
                    if term.is_empty() {
                        continue;
                    }
                    let (coef, power) = parse_ext_term(term).ok_or_else(bad)?;
                    if power >= 2 * *k + 8 {
                        return Err(bad());
                    }
                    acc += &(self.from_bigint(&coef) * t.pow(power as u64));
                }
                Ok(acc)
            }
        }
    }

    /// Coordinates of F_p inside this field; for F_p itself the identity.
    pub fn prime_subfield(&self) -> Result<FieldSpec> {
        match self.kind() {
            FieldKind::Rational => Ok(self.clone()),
            FieldKind::Prime { .. } => Ok(self.clone()),
            FieldKind::Extension { p, .. } => FieldSpec::prime(*p),
        }
    }

    /// The quadratic extension of this field together with the embedding.
    pub fn quadratic_extension(&self) -> Result<QuadraticExtension> {
        QuadraticExtension::new(self)
    }
}

fn parse_ext_term(term: &str) -> Option<(BigInt, usize)> {
    let (neg, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, term),
    };
    let (coef, power) = if let Some(idx) = body.find('t') {
        let coef_part = body[..idx].trim().trim_end_matches('*').trim();
        let coef: BigInt = if coef_part.is_empty() {
            BigInt::one()
        } else {
            coef_part.parse().ok()?
        };
        let rest = body[idx + 1..].trim();
        let power = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^')?.trim().parse().ok()?
        };
        (coef, power)
    } else {
        (body.parse().ok()?, 0)
    };
    Some((if neg { -coef } else { coef }, power))
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    Res(u64),
    Ext(Vec<u64>),
}

/// An element of a [`FieldSpec`]. Residues and extension coordinates are
/// stored reduced, rationals in lowest terms.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldSpec,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: numeric on Q and F_p, and on F_{p^k} by the
/// enumeration index (highest coordinate most significant).
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Res(a), Repr::Res(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => a.iter().rev().cmp(b.iter().rev()),
            _ => self.field.kind().cmp(other.field.kind()),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{}", r),
            Repr::Res(r) => write!(f, "{}", r),
            Repr::Ext(c) => {
                let mut terms = Vec::new();
                for (i, &ci) in c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    terms.push(match (i, ci) {
                        (0, _) => ci.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, _) => format!("{ci}*t"),
                        (_, 1) => format!("t^{i}"),
                        _ => format!("{ci}*t^{i}"),
                    });
                }
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join("+"))
                }
            }
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Res(r) => *r == 0,
            Repr::Ext(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Res(r) => *r == 1,
            Repr::Ext(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
        }
    }

    pub fn zero_like(&self) -> Self {
        self.field.zero()
    }

    pub fn one_like(&self) -> Self {
        self.field.one()
    }

    /// Ascending coordinates over F_p (a single entry for F_p, empty for Q).
    pub fn coordinates(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Rat(_) => Vec::new(),
            Repr::Res(r) => vec![*r],
            Repr::Ext(c) => c.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Small integer view, when the element is one (rationals with unit
    /// denominator, residues as their least nonnegative representative).
    pub fn to_i64(&self) -> Option<i64> {
        match &self.repr {
            Repr::Rat(r) if r.is_integer() => r.numer().to_i64(),
            Repr::Res(r) => i64::try_from(*r).ok(),
            Repr::Ext(c) if c[1..].iter().all(|&x| x == 0) => i64::try_from(c[0]).ok(),
            _ => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    fn with(&self, repr: Repr) -> Self {
        FieldElement {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.with(match (&self.repr, &rhs.repr, self.field.kind()) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a + b),
            (Repr::Res(a), Repr::Res(b), FieldKind::Prime { p }) => Repr::Res(modp::add(*a, *b, *p)),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| modp::add(*x, *y, *p)).collect())
            }
            _ => unreachable!("representation does not match field"),
        }))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.with(match (&self.repr, &rhs.repr, self.field.kind()) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a - b),
            (Repr::Res(a), Repr::Res(b), FieldKind::Prime { p }) => Repr::Res(modp::sub(*a, *b, *p)),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| modp::sub(*x, *y, *p)).collect())
            }
            _ => unreachable!("representation does not match field"),
        }))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.with(match (&self.repr, &rhs.repr, self.field.kind()) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a * b),
            (Repr::Res(a), Repr::Res(b), FieldKind::Prime { p }) => Repr::Res(modp::mul(*a, *b, *p)),
            (Repr::Ext(a), Repr::Ext(b), FieldKind::Extension { p, k, modulus }) => {
                Repr::Ext(ext_mul(a, b, *p, *k, modulus))
            }
            _ => unreachable!("representation does not match field"),
        }))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.with(match (&self.repr, self.field.kind()) {
            (Repr::Rat(a), _) => Repr::Rat(a.recip()),
            (Repr::Res(a), FieldKind::Prime { p }) => Repr::Res(modp::inv(*a, *p).unwrap()),
            (Repr::Ext(a), FieldKind::Extension { p, k, modulus }) => {
                let inv = fp_poly::inv_mod(a, modulus, *p).expect("modulus is irreducible");
                let mut c = vec![0; *k];
                c[..inv.len()].copy_from_slice(&inv);
                Repr::Ext(c)
            }
            _ => unreachable!("representation does not match field"),
        }))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.try_mul(&rhs.inv()?)
    }

    pub fn negated(&self) -> Self {
        self.with(match (&self.repr, self.field.kind()) {
            (Repr::Rat(a), _) => Repr::Rat(-a),
            (Repr::Res(a), FieldKind::Prime { p }) => Repr::Res(modp::neg(*a, *p)),
            (Repr::Ext(a), FieldKind::Extension { p, .. }) => {
                Repr::Ext(a.iter().map(|x| modp::neg(*x, *p)).collect())
            }
            _ => unreachable!("representation does not match field"),
        })
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = self.one_like();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// Signed integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// a ↦ a^p. Identity on Q and F_p.
    pub fn frobenius(&self) -> Self {
        match self.field.kind() {
            FieldKind::Extension { p, .. } => self.pow(*p),
            _ => self.clone(),
        }
    }

    /// Whether the element is a square in its field.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        match &self.repr {
            Repr::Rat(_) => self.sqrt().is_ok(),
            Repr::Res(a) => {
                let p = self.field.characteristic();
                modp::pow(*a, (p - 1) / 2, p) == 1
            }
            Repr::Ext(_) => {
                let q = self.field.order().unwrap();
                self.pow_big(&((q - 1u32) >> 1)).is_one()
            }
        }
    }

    /// Both square roots, the canonically smaller one first.
    pub fn sqrt(&self) -> Result<(Self, Self)> {
        let no_root = || Error::NoSquareRoot(self.to_string());
        let root = match (&self.repr, self.field.kind()) {
            (Repr::Rat(a), _) => {
                if a.is_negative() {
                    return Err(no_root());
                }
                let n = exact_isqrt(a.numer()).ok_or_else(no_root)?;
                let d = exact_isqrt(a.denom()).ok_or_else(no_root)?;
                self.with(Repr::Rat(BigRational::new(n, d)))
            }
            (Repr::Res(a), FieldKind::Prime { p }) => {
                self.with(Repr::Res(modp::sqrt(*a, *p).ok_or_else(no_root)?))
            }
            (Repr::Ext(_), _) => self.ext_sqrt().ok_or_else(no_root)?,
            _ => unreachable!("representation does not match field"),
        };
        let other = root.negated();
        Ok(if root <= other { (root, other) } else { (other, root) })
    }

    fn ext_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let q = self.field.order().unwrap();
        if (&q % 4u32) == BigUint::from(3u32) {
            let r = self.pow_big(&((&q + 1u32) >> 2));
            return Some(r);
        }
        // Tonelli–Shanks in the cyclic group F_q^*.
        let mut odd = &q - 1u32;
        let mut s = 0u32;
        while odd.is_even() {
            odd >>= 1;
            s += 1;
        }
        let z = self.field.nonresidue();
        let mut m = s;
        let mut c = z.pow_big(&odd);
        let mut t = self.pow_big(&odd);
        let mut r = self.pow_big(&((&odd + 1u32) >> 1));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = &t * &c;
            r = &r * &b;
        }
        Some(r)
    }
}

impl FieldSpec {
    fn nonresidue(&self) -> FieldElement {
        let repr = self.0.nonresidue.get_or_init(|| {
            self.elements()
                .skip(1)
                .find(|e| !e.is_square())
                .expect("odd-order finite fields have non-residues")
                .repr
        });
        self.make(repr.clone())
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

fn ext_mul(a: &[u64], b: &[u64], p: u64, k: usize, modulus: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = modp::add(prod[i + j], modp::mul(x, y, p), p);
        }
    }
    for i in (k..2 * k - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            prod[i - k + j] = modp::sub(prod[i - k + j], modp::mul(c, modulus[j], p), p);
        }
    }
    prod.truncate(k);
    prod
}

/// The first monic irreducible polynomial of degree `k` over F_p in the
/// enumeration order of its lower coefficients (base-p digits, constant
/// term least significant). Returned ascending, leading 1 included.
pub fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    check_prime(p)?;
    if k == 0 || k > MAX_EXTENSION_DEGREE {
        return Err(Error::InvalidField(format!(
            "extension degree must be between 1 and {MAX_EXTENSION_DEGREE}"
        )));
    }
    let mut n: u128 = 0;
    loop {
        let mut digits = Vec::with_capacity(k + 1);
        let mut rest = n;
        for _ in 0..k {
            digits.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        digits.push(1);
        if fp_poly::is_irreducible(&digits, p) {
            return Ok(digits);
        }
        n += 1;
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $call:ident, $what:literal) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$call(rhs).unwrap_or_else(|e| panic!("field {}: {}", $what, e))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add, "addition");
forward_binop!(Sub, sub, try_sub, "subtraction");
forward_binop!(Mul, mul, try_mul, "multiplication");
forward_binop!(Div, div, try_div, "division");

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negated()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negated()
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

/// `c * a` for a small integer `c`.
impl Mul<&FieldElement> for i64 {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        &rhs.field.from_i64(self) * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn inverse_of_three_mod_seven() {
        let f = f7();
        assert_eq!(f.from_i64(3).inv().unwrap(), f.from_i64(5));
    }

    #[test]
    fn sqrt_of_two_mod_seven() {
        let f = f7();
        let (a, b) = f.from_i64(2).sqrt().unwrap();
        // exhaustive: squares mod 7 are 0,1,4,2,2,4,1 for 0..6
        let brute: Vec<_> = f.elements().filter(|x| x.square() == f.from_i64(2)).collect();
        assert_eq!(vec![a, b], brute);
        assert_eq!(brute, vec![f.from_i64(3), f.from_i64(4)]);
        assert!(matches!(f.from_i64(3).sqrt(), Err(Error::NoSquareRoot(_))));
    }

    #[test]
    fn rational_sum() {
        let q = FieldSpec::rational();
        let s = q.from_ratio(1, 2).unwrap() + q.from_ratio(1, 3).unwrap();
        assert_eq!(s, q.from_ratio(5, 6).unwrap());
        assert_eq!(s.to_string(), "5/6");
        assert_eq!(q.parse_element("-10/12").unwrap(), q.from_ratio(-5, 6).unwrap());
    }

    #[test]
    fn rational_sqrt() {
        let q = FieldSpec::rational();
        let (a, b) = q.from_ratio(9, 4).unwrap().sqrt().unwrap();
        assert_eq!(a, q.from_ratio(-3, 2).unwrap());
        assert_eq!(b, q.from_ratio(3, 2).unwrap());
        assert!(q.from_i64(2).sqrt().is_err());
        assert!(q.from_i64(-4).sqrt().is_err());
    }

    #[test]
    fn rejects_unsupported_characteristics() {
        assert!(FieldSpec::prime(2).is_err());
        assert!(FieldSpec::prime(5).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::extension(7, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn mixed_fields_are_errors() {
        let a = f7().one();
        let b = FieldSpec::prime(11).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::MixedFields(..))));
        assert!(matches!(f7().zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(find_irreducible(7, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(find_irreducible(11, 1).unwrap(), vec![0, 1]);
        let quartic = find_irreducible(7, 4).unwrap();
        assert_eq!(quartic.len(), 5);
        // independent check: no root and no monic quadratic factor
        let f = f7();
        let eval = |x: u64| {
            quartic
                .iter()
                .rev()
                .fold(0u64, |acc, &c| modp::add(modp::mul(acc, x, 7), c, 7))
        };
        assert!((0..7).all(|x| eval(x) != 0));
        for a in 0..7 {
            for b in 0..7 {
                let (_, r) = fp_poly::divrem(&quartic, &[b, a, 1], 7);
                assert!(!r.is_empty(), "divisible by t^2+{a}t+{b}");
            }
        }
        let _ = f;
    }

    #[test]
    fn extension_parse_and_display() {
        let f = FieldSpec::extension(7, vec![1, 0, 1]).unwrap();
        let a = f.parse_element("3+2*t").unwrap();
        assert_eq!(a.to_string(), "3+2*t");
        assert_eq!(f.parse_element("t^2").unwrap(), f.from_i64(-1));
        assert_eq!(f.parse_element("-t").unwrap(), f.generator().negated());
        assert_eq!(f.parse_element(&f.zero().to_string()).unwrap(), f.zero());
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        for (p, k) in [(7u64, 2usize), (3, 3), (7, 4), (13, 2)] {
            let f = FieldSpec::galois(p, k).unwrap();
            let fixed = f.elements().filter(|x| x.frobenius() == *x).count();
            assert_eq!(fixed as u64, p, "F_{p}^{k}");
        }
    }

    #[test]
    fn sqrt_in_extensions() {
        // 49 = 1 mod 4 exercises Tonelli–Shanks, 27 = 3 mod 4 the exponent path.
        for (p, k) in [(7u64, 2usize), (3, 3), (13, 2), (3, 4)] {
            let f = FieldSpec::galois(p, k).unwrap();
            let mut squares = 0;
            for x in f.elements() {
                match x.sqrt() {
                    Ok((a, b)) => {
                        assert_eq!(a.square(), x);
                        assert_eq!(b.square(), x);
                        squares += 1;
                    }
                    Err(_) => assert!(!x.is_square()),
                }
            }
            let q = f.order_u64().unwrap();
            assert_eq!(squares, (q - 1) / 2 + 1);
        }
    }

    #[test]
    fn enumeration_is_ordered() {
        let f = FieldSpec::galois(3, 2).unwrap();
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all.len(), 9);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    fn check_axioms(f: &FieldSpec, samples: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let a = f.random_element(&mut rng);
            let b = f.random_element(&mut rng);
            let c = f.random_element(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&(&a - &b) + &b, a);
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
                assert_eq!(&(&b / &a) * &a, b);
            }
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let fields = [
            FieldSpec::rational(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::prime(1009).unwrap(),
            FieldSpec::prime(18_446_744_073_709_551_557).unwrap(),
            FieldSpec::galois(7, 2).unwrap(),
            FieldSpec::galois(11, 3).unwrap(),
            FieldSpec::galois(13, 4).unwrap(),
        ];
        for (i, f) in fields.iter().enumerate() {
            check_axioms(f, 10_000, i as u64);
        }
    }

    #[test]
    fn json_shapes() {
        let f: FieldSpec =
            serde_json::from_str(r#"{"kind":"extension","p":7,"k":2,"modulus":[1,0,1]}"#).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(serde_json::to_string(&f7()).unwrap(), r#"{"kind":"prime","p":7}"#);
        assert_eq!(
            serde_json::to_string(&FieldSpec::rational()).unwrap(),
            r#"{"kind":"rational"}"#
        );
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"prime","p":5}"#).is_err());
    }
}
