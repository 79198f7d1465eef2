use crate::error::{Error, Result};

use super::{PolyRing, WeightedPoly};

/// Truncated power series Σ c_k ξ^k + O(ξ^order) with polynomial
/// coefficients, i.e. an element of R[ξ]/(ξ^order).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<WeightedPoly>,
}

impl Series {
    pub fn new(ring: &PolyRing, mut coeffs: Vec<WeightedPoly>, order: usize) -> Self {
        coeffs.resize(order, ring.zero());
        coeffs.truncate(order);
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &WeightedPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[WeightedPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series {
            coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series {
            coeffs: (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let ring = self.coeffs[0].ring().clone();
        let mut out = vec![ring.zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                let t = &self.coeffs[i] * &other.coeffs[j];
                out[i + j].accumulate(&t);
            }
        }
        Series { coeffs: out }
    }

    /// Square root of a series with constant term 1, normalised to constant
    /// term 1: s_n = (a_n − Σ_{0<k<n} s_k s_{n−k}) / 2.
    pub fn sqrt(&self) -> Result<Series> {
        if !self.coeffs[0].as_constant().is_some_and(|c| c.is_one()) {
            return Err(Error::Unsupported(
                "series square root needs constant term 1".into(),
            ));
        }
        let ring = self.coeffs[0].ring().clone();
        let half = ring.field().from_ratio(1, 2)?;
        let mut s = vec![ring.one()];
        for n in 1..self.order() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc = &acc - &(&s[k] * &s[n - k]);
            }
            s.push(acc.scale(&half));
        }
        Ok(Series { coeffs: s })
    }
}
