//! A small arithmetic interface so that the group-law and torsion formulas
//! can be evaluated on field elements and, for homogeneity checks, on
//! polynomials or rational functions with formal coefficients.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::exactfield::FieldElement;
use crate::polyring::{RatFun, WeightedPoly};

pub trait Scalar: Clone + PartialEq + Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; for polynomials it must be exact.
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    /// The integer `n` in the same field or ring as `self`.
    fn int(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn sq(&self) -> Self {
        self.mul(self)
    }

    fn scale(&self, n: i64) -> Self {
        self.mul(&self.int(n))
    }
}

impl Scalar for FieldElement {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.try_div(o)
    }
    fn neg(&self) -> Self {
        self.negated()
    }
    fn int(&self, n: i64) -> Self {
        self.field().from_i64(n)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}

impl Scalar for WeightedPoly {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.exact_div(o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn int(&self, n: i64) -> Self {
        self.ring().from_i64(n)
    }
    fn is_zero(&self) -> bool {
        WeightedPoly::is_zero(self)
    }
}

impl Scalar for RatFun {
    fn add(&self, o: &Self) -> Self {
        RatFun::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFun::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFun::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        RatFun::div(self, o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn int(&self, n: i64) -> Self {
        RatFun::from_poly(self.num().ring().from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.num().is_zero()
    }
}
