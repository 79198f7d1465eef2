use crate::error::{Error, Result};

use super::WeightedPoly;

/// A quotient num/den of polynomials, kept without gcd cancellation.
/// Used to check that formulas with divisions are weighted-homogeneous.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: WeightedPoly,
    den: WeightedPoly,
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl RatFun {
    pub fn new(num: WeightedPoly, den: WeightedPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: WeightedPoly) -> Self {
        let den = p.ring().one();
        RatFun { num: p, den }
    }

    pub fn num(&self) -> &WeightedPoly {
        &self.num
    }

    pub fn den(&self) -> &WeightedPoly {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFun {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        // keep powers of a shared denominator from compounding
        if self.den.len() <= o.den.len() {
            if let Ok(k) = o.den.exact_div(&self.den) {
                return RatFun {
                    num: &(&self.num * &k) + &o.num,
                    den: o.den.clone(),
                };
            }
        } else if let Ok(k) = self.den.exact_div(&o.den) {
            return RatFun {
                num: &self.num + &(&o.num * &k),
                den: self.den.clone(),
            };
        }
        RatFun {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFun {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        })
    }

    /// Weight num − weight den when both parts are homogeneous.
    pub fn homogeneous_weight(&self) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        if !self.num.is_homogeneous() || !self.den.is_homogeneous() {
            return None;
        }
        Some(self.num.weighted_degree()? as i64 - self.den.weighted_degree()? as i64)
    }
}
