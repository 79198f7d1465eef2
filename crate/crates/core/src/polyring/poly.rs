use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldKind, FieldSpec};

use super::PolyRing;

/// Exponent vector keyed first by total weight, so that iteration order is
/// graded by weight and then lexicographic in the variable order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    weight: u32,
    exps: Vec<u32>,
}

impl Monomial {
    fn new(ring: &PolyRing, exps: Vec<u32>) -> Self {
        let weight = exps.iter().zip(ring.weights()).map(|(e, w)| e * w).sum();
        Monomial { weight, exps }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

/// Sparse polynomial over a [`PolyRing`]. Zero coefficients are never stored.
#[derive(Clone)]
pub struct WeightedPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for WeightedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for WeightedPoly {}

impl WeightedPoly {
    pub fn zero(ring: &PolyRing) -> Self {
        WeightedPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: &PolyRing, exps: Vec<u32>, coeff: FieldElement) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "exponent vector length");
        let mut p = Self::zero(ring);
        if !coeff.is_zero() {
            p.terms.insert(Monomial::new(ring, exps), coeff);
        }
        p
    }

    /// Build from (exponents, coefficient) pairs; like terms are combined.
    pub fn from_terms<I>(ring: &PolyRing, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            if e.len() != ring.nvars() {
                return Err(Error::MalformedPolynomial(format!(
                    "exponent vector {e:?} has the wrong length"
                )));
            }
            if c.field() != ring.field() {
                return Err(Error::MixedFields(
                    c.field().to_string(),
                    ring.field().to_string(),
                ));
            }
            p.add_term(Monomial::new(ring, e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(self.ring.field().zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.exps.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> FieldElement {
        let zero = Monomial::new(&self.ring, vec![0; self.ring.nvars()]);
        self.terms
            .get(&zero)
            .cloned()
            .unwrap_or_else(|| self.ring.field().zero())
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    /// In-place `self += other`.
    pub fn accumulate(&mut self, other: &Self) {
        assert!(self.ring == other.ring, "polynomials from different rings");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let mut acc: HashMap<Vec<u32>, FieldElement> =
            HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += &prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial::new(&self.ring, e), c))
            .collect();
        Ok(WeightedPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        WeightedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&self.ring.field().from_i64(c))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / d`; fails when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        self.check_ring(d)?;
        let (lm, lc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(Error::InexactDivision);
            }
            let qe: Vec<u32> = m.exps.iter().zip(&lm.exps).map(|(a, b)| a - b).collect();
            let qc = &c * &lc_inv;
            for (dm, dc) in &d.terms {
                let e = qe.iter().zip(&dm.exps).map(|(a, b)| a + b).collect();
                rem.add_term(Monomial::new(&self.ring, e), -(&qc * dc));
            }
            quot.add_term(Monomial::new(&self.ring, qe), qc);
        }
        Ok(quot)
    }

    /// Maximum term weight; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.weight)
    }

    /// True when every term has the same weight (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(a), Some(b)) => a.weight == b.weight,
            _ => true,
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[var]).max()
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let k = m.exps[var];
            if k == 0 {
                continue;
            }
            let mut e = m.exps.clone();
            e[var] -= 1;
            let coeff = c * &self.ring.field().from_i64(k as i64);
            out.add_term(Monomial::new(&self.ring, e), coeff);
        }
        out
    }

    pub fn derivative_by(&self, name: &str) -> Result<Self> {
        Ok(self.partial_derivative(self.ring.index_of(name)?))
    }

    /// Simultaneous substitution of every variable; `images[i]` replaces
    /// variable `i` and must live in `target`.
    pub fn substitute(&self, target: &PolyRing, images: &[WeightedPoly]) -> Result<WeightedPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::MalformedPolynomial(
                "substitution needs one image per variable".into(),
            ));
        }
        if target.field() != self.ring.field() {
            return Err(Error::MixedRings);
        }
        for img in images {
            if img.ring() != target {
                return Err(Error::MixedRings);
            }
        }
        let mut powers: Vec<Vec<WeightedPoly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &k) in m.exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out.accumulate(&t);
        }
        Ok(out)
    }

    /// Substitute the named variables inside the same ring.
    pub fn substitute_vars(&self, bindings: &[(&str, WeightedPoly)]) -> Result<WeightedPoly> {
        let mut images: Vec<WeightedPoly> = (0..self.ring.nvars()).map(|i| self.ring.gen(i)).collect();
        for (name, p) in bindings {
            images[self.ring.index_of(name)?] = p.clone();
        }
        self.substitute(&self.ring.clone(), &images)
    }

    pub fn evaluate(&self, values: &[FieldElement]) -> Result<FieldElement> {
        if values.len() != self.ring.nvars() {
            return Err(Error::MalformedPolynomial(
                "evaluation needs one value per variable".into(),
            ));
        }
        let mut acc = self.ring.field().zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(&m.exps) {
                if k > 0 {
                    t = t.try_mul(&v.pow(k as u64))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Evaluate a polynomial with rational coefficients at values from
    /// another field, mapping each coefficient into that field first.
    pub fn evaluate_in(&self, field: &FieldSpec, values: &[FieldElement]) -> Result<FieldElement> {
        if self.ring.field() == field {
            return self.evaluate(values);
        }
        if self.ring.field().kind() != &FieldKind::Rational {
            return Err(Error::MixedFields(
                self.ring.field().to_string(),
                field.to_string(),
            ));
        }
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c.as_rational().expect("rational coefficient"))?;
            for (v, &k) in values.iter().zip(&m.exps) {
                if k > 0 {
                    t = t.try_mul(&v.pow(k as u64))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Coefficients of `self` as a polynomial in `var`, lowest power first.
    pub fn to_univariate(&self, var: usize) -> Vec<WeightedPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps[var] as usize;
            let mut e = m.exps.clone();
            e[var] = 0;
            out[k].add_term(Monomial::new(&self.ring, e), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[WeightedPoly], var: usize, ring: &PolyRing) -> Self {
        let x = ring.gen(var);
        let mut acc = ring.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// Coefficient of `var^k`.
    pub fn coeff_of(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.exps[var] == k {
                let mut e = m.exps.clone();
                e[var] = 0;
                out.add_term(Monomial::new(&self.ring, e), c.clone());
            }
        }
        out
    }

    /// Replace `y^2` by `p` until `y` appears at most linearly; `p` must not
    /// involve `y`.
    pub fn reduce_square(&self, y: usize, p: &WeightedPoly) -> Result<Self> {
        self.check_ring(p)?;
        if p.degree_in(y).unwrap_or(0) > 0 {
            return Err(Error::MalformedPolynomial(
                "reduction polynomial involves the reduced variable".into(),
            ));
        }
        let coeffs = self.to_univariate(y);
        let mut ppow = vec![self.ring.one()];
        let mut out = Self::zero(&self.ring);
        let yv = self.ring.gen(y);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let half = k / 2;
            while ppow.len() <= half {
                let next = ppow.last().unwrap() * p;
                ppow.push(next);
            }
            let mut t = c * &ppow[half];
            if k % 2 == 1 {
                t = &t * &yv;
            }
            out.accumulate(&t);
        }
        Ok(out)
    }

    /// Move into another ring with the same field by variable name.
    pub fn rename_into(&self, target: &PolyRing) -> Result<Self> {
        let images = self
            .ring
            .names()
            .iter()
            .map(|n| target.var(n))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(target, &images)
    }
}

fn fmt_monomial(ring: &PolyRing, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &k) in ring.names().iter().zip(&m.exps) {
        match k {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for WeightedPoly {
    /// Infix form, highest term first, e.g. `x^2 + alpha2*x + alpha4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono = fmt_monomial(&self.ring, m);
            let mut cs = c.to_string();
            let negative = cs.starts_with('-') && !cs.contains('+');
            if negative {
                cs.remove(0);
            }
            let sep = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let needs_parens = cs.contains('+');
            let body = if mono.is_empty() {
                if needs_parens { format!("({cs})") } else { cs }
            } else if cs == "1" {
                mono
            } else if needs_parens {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&WeightedPoly> for &WeightedPoly {
            type Output = WeightedPoly;
            fn $method(self, rhs: &WeightedPoly) -> WeightedPoly {
                self.$call(rhs).expect("polynomials from different rings")
            }
        }
        impl $tr<WeightedPoly> for WeightedPoly {
            type Output = WeightedPoly;
            fn $method(self, rhs: WeightedPoly) -> WeightedPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&WeightedPoly> for WeightedPoly {
            type Output = WeightedPoly;
            fn $method(self, rhs: &WeightedPoly) -> WeightedPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<WeightedPoly> for &WeightedPoly {
            type Output = WeightedPoly;
            fn $method(self, rhs: WeightedPoly) -> WeightedPoly {
                self.$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        WeightedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        -&self
    }
}

impl Mul<&WeightedPoly> for i64 {
    type Output = WeightedPoly;
    fn mul(self, rhs: &WeightedPoly) -> WeightedPoly {
        rhs.scale_i64(self)
    }
}

impl Mul<WeightedPoly> for i64 {
    type Output = WeightedPoly;
    fn mul(self, rhs: WeightedPoly) -> WeightedPoly {
        rhs.scale_i64(self)
    }
}
