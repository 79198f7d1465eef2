use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldSpec};

use super::WeightedPoly;

struct RingInner {
    names: Vec<String>,
    weights: Vec<u32>,
    field: FieldSpec,
}

/// A polynomial ring over a fixed list of weighted variables.
#[derive(Clone)]
pub struct PolyRing(Arc<RingInner>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names
                && self.0.weights == other.0.weights
                && self.0.field == other.0.field)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.0.field)?;
        for (i, (n, w)) in self.0.names.iter().zip(&self.0.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{w}")?;
        }
        write!(f, "]")
    }
}

/// Weight convention shared by the whole crate: `x` 2, `y` 5, `lambda<k>` k,
/// `alpha<k>`/`beta<k>`/`gamma<k>`/`nu<k>` k. A trailing index after an
/// underscore (`x_1`, `alpha2_P`) is ignored when assigning the weight.
pub fn default_weight(name: &str) -> Option<u32> {
    let base = name.split('_').next().unwrap_or(name);
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &base[stem.len()..];
    match stem {
        "x" => Some(2),
        "y" => Some(5),
        "lambda" | "alpha" | "beta" | "gamma" | "nu" => digits.parse().ok(),
        _ => None,
    }
}

impl PolyRing {
    pub fn new(field: &FieldSpec, vars: &[(&str, u32)]) -> Self {
        PolyRing(Arc::new(RingInner {
            names: vars.iter().map(|(n, _)| n.to_string()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
            field: field.clone(),
        }))
    }

    /// Ring whose weights come from [`default_weight`].
    pub fn with_default_weights(field: &FieldSpec, names: &[&str]) -> Result<Self> {
        let vars = names
            .iter()
            .map(|n| {
                default_weight(n)
                    .map(|w| (*n, w))
                    .ok_or_else(|| Error::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, &vars))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.0.field
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn zero(&self) -> WeightedPoly {
        WeightedPoly::zero(self)
    }

    pub fn one(&self) -> WeightedPoly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: FieldElement) -> WeightedPoly {
        WeightedPoly::monomial(self, vec![0; self.nvars()], c)
    }

    pub fn from_i64(&self, c: i64) -> WeightedPoly {
        self.constant(self.field().from_i64(c))
    }

    pub fn gen(&self, i: usize) -> WeightedPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        WeightedPoly::monomial(self, e, self.field().one())
    }

    pub fn var(&self, name: &str) -> Result<WeightedPoly> {
        Ok(self.gen(self.index_of(name)?))
    }

    /// Like [`var`](Self::var), for names known to exist.
    pub fn v(&self, name: &str) -> WeightedPoly {
        self.var(name)
            .unwrap_or_else(|_| panic!("variable {name} is not in {self:?}"))
    }
}
