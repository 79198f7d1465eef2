//! Sparse multivariate polynomials graded by Sato weight, univariate
//! polynomials over a field, resultants and truncated power series.

mod poly;
mod ratfun;
mod resultant;
mod ring;
mod series;
mod uni;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{FieldKind, FieldSpec};

pub use poly::{Monomial, WeightedPoly};
pub use ratfun::RatFun;
pub use resultant::{bareiss_det, resultant, sylvester_resultant};
pub use ring::{default_weight, PolyRing};
pub use series::Series;
pub use uni::UniPoly;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

/// Serialized polynomial: a variable header followed by the term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub field: FieldKind,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl WeightedPoly {
    /// Terms are written highest monomial first.
    pub fn to_json(&self) -> PolyJson {
        let ring = self.ring();
        PolyJson {
            vars: ring.names().to_vec(),
            weights: ring.weights().to_vec(),
            field: ring.field().kind().clone(),
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    exps: m.exps().to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        if j.vars.len() != j.weights.len() {
            return Err(Error::MalformedPolynomial(
                "vars and weights differ in length".into(),
            ));
        }
        let field = FieldSpec::from_kind(j.field.clone())?;
        let vars: Vec<(&str, u32)> = j
            .vars
            .iter()
            .map(String::as_str)
            .zip(j.weights.iter().copied())
            .collect();
        let ring = PolyRing::new(&field, &vars);
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.exps.clone(), field.parse_element(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        WeightedPoly::from_terms(&ring, terms)
    }
}
