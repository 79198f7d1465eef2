//! The canonical genus-2 model −y² + x⁵ + λ₂x⁴ + λ₄x³ + λ₆x² + λ₈x + λ₁₀,
//! its expansion at infinity, and transformations from other plane models.

mod forms;

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldKind, FieldSpec};
use crate::polyring::{PolyRing, Series, UniPoly, WeightedPoly};

pub use forms::{CurveModel, GeneralCurve, MapStep, PointMap};

pub const LAMBDA_NAMES: [&str; 5] = ["lambda2", "lambda4", "lambda6", "lambda8", "lambda10"];

/// Highest order accepted by [`CanonicalCurve::expand_at_infinity`].
pub const MAX_SERIES_ORDER: usize = 12;

/// An affine point (x, y).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Point {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        Point { x, y }
    }

    /// Image under the hyperelliptic involution (x, y) ↦ (x, −y).
    pub fn involution(&self) -> Point {
        Point::new(self.x.clone(), -&self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CanonicalCurve {
    field: FieldSpec,
    lambda: [FieldElement; 5],
    poly: UniPoly,
}

impl fmt::Debug for CanonicalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {} over {}", self.poly, self.field)
    }
}

impl CanonicalCurve {
    /// `lambda` holds (λ₂, λ₄, λ₆, λ₈, λ₁₀). Fails on a repeated root.
    pub fn new(field: &FieldSpec, lambda: [FieldElement; 5]) -> Result<Self> {
        for l in &lambda {
            if l.field() != field {
                return Err(Error::MixedFields(l.field().to_string(), field.to_string()));
            }
        }
        let mut coeffs: Vec<FieldElement> = lambda.iter().rev().cloned().collect();
        coeffs.push(field.one());
        let poly = UniPoly::new(field, coeffs);
        let c = CanonicalCurve {
            field: field.clone(),
            lambda,
            poly,
        };
        if c.discriminant().is_zero() {
            return Err(Error::DegenerateCurve);
        }
        Ok(c)
    }

    pub fn from_i64(field: &FieldSpec, lambda: [i64; 5]) -> Result<Self> {
        Self::new(field, lambda.map(|v| field.from_i64(v)))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// (λ₂, λ₄, λ₆, λ₈, λ₁₀).
    pub fn lambdas(&self) -> &[FieldElement; 5] {
        &self.lambda
    }

    /// λ_k for k ∈ {2, 4, 6, 8, 10}.
    pub fn lambda(&self, k: usize) -> &FieldElement {
        assert!(k % 2 == 0 && (2..=10).contains(&k), "no lambda{k}");
        &self.lambda[k / 2 - 1]
    }

    /// 𝒫(x) as a univariate polynomial.
    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn eval_p(&self, x: &FieldElement) -> FieldElement {
        self.poly.eval(x)
    }

    pub fn eval_dp(&self, x: &FieldElement) -> FieldElement {
        self.poly.derivative().eval(x)
    }

    pub fn discriminant(&self) -> FieldElement {
        self.poly.discriminant()
    }

    /// Roots of 𝒫 in the base field, ascending.
    pub fn branch_points(&self) -> Vec<FieldElement> {
        self.poly.roots()
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        p.y.field() == &self.field && p.y.square() == self.eval_p(&p.x)
    }

    /// The same curve with coefficients carried into `target` by `embed`.
    pub fn base_change(
        &self,
        target: &FieldSpec,
        embed: impl Fn(&FieldElement) -> FieldElement,
    ) -> Result<Self> {
        Self::new(target, self.lambda.clone().map(|l| embed(&l)))
    }

    /// A uniformly chosen x with 𝒫(x) a square, and one of its two points.
    /// Returns `None` after many unlucky draws (never for sane curves).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Point> {
        for _ in 0..1000 {
            let x = self.field.random_element(rng);
            if let Ok((a, b)) = self.eval_p(&x).sqrt() {
                let y = if rng.gen_bool(0.5) { a } else { b };
                return Some(Point::new(x, y));
            }
        }
        None
    }

    /// All affine points over a finite field, ordered by (x, y).
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for x in self.field.elements() {
            if let Ok((a, b)) = self.eval_p(&x).sqrt() {
                if a == b {
                    out.push(Point::new(x, a));
                } else {
                    out.push(Point::new(x.clone(), a));
                    out.push(Point::new(x, b));
                }
            }
        }
        out
    }

    /// Coefficients c₀..c_{order−1} of the expansion x = ξ⁻², y = ξ⁻⁵ Σ c_k ξ^k.
    pub fn expand_at_infinity(&self, order: usize) -> Result<Vec<FieldElement>> {
        let p = self.field.characteristic();
        if order > MAX_SERIES_ORDER {
            return Err(Error::Unsupported(format!(
                "series order {order} exceeds {MAX_SERIES_ORDER}"
            )));
        }
        if p != 0 && p as usize <= order {
            return Err(Error::CharacteristicTooSmall(p, order));
        }
        let formal = formal_expansion(order)?;
        formal
            .coeffs()
            .iter()
            .map(|c| c.evaluate_in(&self.field, &self.lambda))
            .collect()
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            field: self.field.kind().clone(),
            model: ModelJson::Canonical {
                lambda: self.lambda.iter().map(|l| l.to_string()).collect(),
            },
        }
    }
}

/// The ring ℚ[λ₂, λ₄, λ₆, λ₈, λ₁₀] with Sato weights.
pub fn lambda_ring() -> PolyRing {
    PolyRing::with_default_weights(&FieldSpec::rational(), &LAMBDA_NAMES).unwrap()
}

/// The parenthesised factor of y(ξ) = ξ⁻⁵(1 + ½λ₂ξ² + …) with formal λ,
/// i.e. the square root of 1 + λ₂ξ² + λ₄ξ⁴ + … + λ₁₀ξ¹⁰, truncated at
/// O(ξ^order). Cached at the maximal order.
pub fn formal_expansion(order: usize) -> Result<Series> {
    static FULL: OnceLock<Series> = OnceLock::new();
    if order > MAX_SERIES_ORDER {
        return Err(Error::Unsupported(format!(
            "series order {order} exceeds {MAX_SERIES_ORDER}"
        )));
    }
    let full = match FULL.get() {
        Some(s) => s,
        None => {
            let r = lambda_ring();
            let mut c = vec![r.zero(); MAX_SERIES_ORDER];
            c[0] = r.one();
            for (i, name) in LAMBDA_NAMES.iter().enumerate() {
                c[2 * i + 2] = r.v(name);
            }
            let s = Series::new(&r, c, MAX_SERIES_ORDER).sqrt()?;
            FULL.get_or_init(|| s)
        }
    };
    let r = full.coeff(0).ring().clone();
    Ok(Series::new(&r, full.coeffs()[..order].to_vec(), order))
}

/// 𝒫(x) for a polynomial argument, with λ taken from the same ring.
pub fn formal_p(x: &WeightedPoly) -> WeightedPoly {
    let r = x.ring();
    let mut acc = r.one();
    for name in LAMBDA_NAMES {
        acc = &(&acc * x) + &r.v(name);
    }
    acc
}

/// 𝒫′(x) for a polynomial argument.
pub fn formal_dp(x: &WeightedPoly) -> WeightedPoly {
    let r = x.ring();
    let mut acc = 5 * &x.pow(4);
    for (i, name) in LAMBDA_NAMES[..4].iter().enumerate() {
        let k = 4 - i as u32 - 1;
        acc = &acc + &(&((k + 1) as i64 * &r.v(name)) * &x.pow(k));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum ModelJson {
    #[serde(rename = "canonical")]
    Canonical { lambda: Vec<String> },
    /// ν₁, ν₂, ν₃, ν₄, ν₅, ν₆, ν₈, ν₁₀.
    #[serde(rename = "I")]
    FormI { nu: Vec<String> },
    #[serde(rename = "II")]
    FormII { a: Vec<String> },
    #[serde(rename = "III")]
    FormIII { b: Vec<String>, a: Vec<String> },
}

/// Serialized curve: `{"field": {...}, "form": "canonical", "lambda": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub field: FieldKind,
    #[serde(flatten)]
    pub model: ModelJson,
}

pub(crate) fn parse_elements<const N: usize>(
    field: &FieldSpec,
    what: &str,
    items: &[String],
) -> Result<[FieldElement; N]> {
    if items.len() != N {
        return Err(Error::MalformedCurve(format!(
            "{what} needs {N} entries, got {}",
            items.len()
        )));
    }
    let v = items
        .iter()
        .map(|s| field.parse_element(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().unwrap())
}

impl CurveJson {
    pub fn to_general(&self) -> Result<GeneralCurve> {
        let field = FieldSpec::from_kind(self.field.clone())?;
        let model = match &self.model {
            ModelJson::Canonical { lambda } => {
                CurveModel::Canonical(parse_elements(&field, "lambda", lambda)?)
            }
            ModelJson::FormI { nu } => CurveModel::FormI(parse_elements(&field, "nu", nu)?),
            ModelJson::FormII { a } => CurveModel::FormII(parse_elements(&field, "a", a)?),
            ModelJson::FormIII { b, a } => CurveModel::FormIII {
                b: parse_elements(&field, "b", b)?,
                a: parse_elements(&field, "a", a)?,
            },
        };
        GeneralCurve::new(&field, model)
    }

    /// Only the canonical form is accepted here.
    pub fn to_canonical_curve(&self) -> Result<CanonicalCurve> {
        match &self.model {
            ModelJson::Canonical { lambda } => {
                let field = FieldSpec::from_kind(self.field.clone())?;
                CanonicalCurve::new(&field, parse_elements(&field, "lambda", lambda)?)
            }
            _ => Err(Error::MalformedCurve(
                "expected a canonical curve; run `curve transform` first".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x5p1(p: u64) -> CanonicalCurve {
        let f = if p == 0 {
            FieldSpec::rational()
        } else {
            FieldSpec::prime(p).unwrap()
        };
        CanonicalCurve::from_i64(&f, [0, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(x5p1(0).discriminant(), FieldSpec::rational().from_i64(3125));
        assert_eq!(x5p1(11).discriminant().to_i64(), Some(1));
        let q = FieldSpec::rational();
        assert_eq!(
            CanonicalCurve::from_i64(&q, [0, 0, 0, 0, 0]),
            Err(Error::DegenerateCurve)
        );
    }

    #[test]
    fn branch_points_of_x5_plus_1() {
        let ints = |c: &CanonicalCurve| -> Vec<i64> {
            c.branch_points().iter().map(|e| e.to_i64().unwrap()).collect()
        };
        assert_eq!(ints(&x5p1(11)), vec![2, 6, 7, 8, 10]);
        assert_eq!(ints(&x5p1(0)), vec![-1]);
        assert_eq!(ints(&x5p1(7)), vec![6]);
    }

    #[test]
    fn points_on_curve() {
        let c = x5p1(7);
        let f = c.field().clone();
        let pt = |x, y| Point::new(f.from_i64(x), f.from_i64(y));
        assert!(c.on_curve(&pt(0, 1)));
        assert!(c.on_curve(&pt(6, 0)));
        assert!(!c.on_curve(&pt(2, 1)));
        assert!(c.points().iter().all(|p| c.on_curve(p)));
    }

    #[test]
    fn expansion_squares_to_p() {
        let s = formal_expansion(12).unwrap();
        let sq = s.mul(&s);
        let r = lambda_ring();
        for (k, c) in sq.coeffs().iter().enumerate() {
            let expect = match k {
                0 => r.one(),
                k if k % 2 == 0 && k <= 10 => r.v(LAMBDA_NAMES[k / 2 - 1]),
                _ => r.zero(),
            };
            assert_eq!(c, &expect, "coefficient of xi^{k}");
        }
        for (k, c) in s.coeffs().iter().enumerate() {
            if !c.is_zero() {
                assert_eq!(c.weighted_degree(), Some(k as u32));
                assert!(c.is_homogeneous());
            }
        }
    }

    #[test]
    fn expansion_needs_large_characteristic() {
        assert_eq!(
            x5p1(7).expand_at_infinity(12),
            Err(Error::CharacteristicTooSmall(7, 12))
        );
        let c = x5p1(13).expand_at_infinity(12).unwrap();
        assert_eq!(c[0].to_i64(), Some(1));
        // ξ¹⁰ coefficient is λ₁₀/2 when the other λ vanish
        assert_eq!(c[10], c[0].field().from_ratio(1, 2).unwrap());
    }

    #[test]
    fn curve_json_round_trip() {
        let c = x5p1(7);
        let j = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(
            j,
            r#"{"field":{"kind":"prime","p":7},"form":"canonical","lambda":["0","0","0","0","1"]}"#
        );
        let back: CurveJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_canonical_curve().unwrap(), c);
    }
}
