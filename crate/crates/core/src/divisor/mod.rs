//! Reduced divisors in Mumford coordinates: R₄ = x² + α₂x + α₄ and
//! R₅ = y + β₃x + β₅ with common zeros at the two support points.

mod polyfunction;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{parse_elements, CanonicalCurve, Point};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldSpec};
use crate::polyring::UniPoly;
use crate::scalar::Scalar;

pub use polyfunction::{build_polyfunction, monomial_list, reduce_points, MonomialM, PolyFunction};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MumfordDivisor {
    /// The class of 2∞.
    Neutral,
    /// A single point P, standing for the class of P − ∞.
    Special(Point),
    NonSpecial {
        alpha2: FieldElement,
        alpha4: FieldElement,
        beta3: FieldElement,
        beta5: FieldElement,
    },
}

/// Two support points, in the base field or in its quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPair {
    pub field: FieldSpec,
    pub p1: Point,
    pub p2: Point,
}

/// Direction of the derivative along the Jacobian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    U1,
    U3,
}

/// K = β₃² + α₂³ − 4α₂α₄ + λ₂(2α₄ − α₂²) + λ₄α₂ − λ₆, shared by J₈ and J₁₀.
fn common_part<S: Scalar>(a2: &S, a4: &S, b3: &S, l: &[S; 5]) -> S {
    b3.sq()
        .add(&a2.sq().mul(a2))
        .sub(&a2.mul(a4).scale(4))
        .add(&l[0].mul(&a4.scale(2).sub(&a2.sq())))
        .add(&l[1].mul(a2))
        .sub(&l[2])
}

/// J₈ = 2β₃β₅ − α₂²α₄ − α₄² + λ₄α₄ − λ₈ − α₂K.
pub fn j8<S: Scalar>(a2: &S, a4: &S, b3: &S, b5: &S, l: &[S; 5]) -> S {
    b3.mul(b5)
        .scale(2)
        .sub(&a2.sq().mul(a4))
        .sub(&a4.sq())
        .add(&l[1].mul(a4))
        .sub(&l[3])
        .sub(&a2.mul(&common_part(a2, a4, b3, l)))
}

/// J₁₀ = β₅² − 2α₂α₄² + λ₂α₄² − λ₁₀ − α₄K.
pub fn j10<S: Scalar>(a2: &S, a4: &S, b3: &S, b5: &S, l: &[S; 5]) -> S {
    b5.sq()
        .sub(&a2.mul(&a4.sq()).scale(2))
        .add(&l[0].mul(&a4.sq()))
        .sub(&l[4])
        .sub(&a4.mul(&common_part(a2, a4, b3, l)))
}

impl MumfordDivisor {
    pub fn nonspecial(
        alpha2: FieldElement,
        alpha4: FieldElement,
        beta3: FieldElement,
        beta5: FieldElement,
    ) -> Self {
        MumfordDivisor::NonSpecial {
            alpha2,
            alpha4,
            beta3,
            beta5,
        }
    }

    /// Mumford coordinates of P₁ + P₂. A repeated point (y ≠ 0) uses the
    /// tangent limit of the difference quotients.
    pub fn from_points(c: &CanonicalCurve, p1: &Point, p2: &Point) -> Result<Self> {
        if !c.on_curve(p1) || !c.on_curve(p2) {
            return Err(Error::OffCurve);
        }
        let (x1, y1, x2, y2) = (&p1.x, &p1.y, &p2.x, &p2.y);
        let alpha2 = -&(x1 + x2);
        let alpha4 = x1 * x2;
        if x1 != x2 {
            let dx = x1 - x2;
            let beta3 = -&(&(y1 - y2) / &dx);
            let beta5 = &(&(x2 * y1) - &(x1 * y2)) / &dx;
            return Ok(Self::nonspecial(alpha2, alpha4, beta3, beta5));
        }
        if y1 != y2 || y1.is_zero() {
            return Err(Error::InvolutionPair);
        }
        let beta3 = -&(&c.eval_dp(x1) / &(2 * y1));
        let beta5 = &(-y1) - &(&beta3 * x1);
        Ok(Self::nonspecial(alpha2, alpha4, beta3, beta5))
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, MumfordDivisor::Neutral)
    }

    pub fn is_special(&self) -> bool {
        matches!(self, MumfordDivisor::Special(_))
    }

    /// (α₂, α₄, β₃, β₅) of a non-special divisor.
    pub fn coords(&self) -> Option<[&FieldElement; 4]> {
        match self {
            MumfordDivisor::NonSpecial {
                alpha2,
                alpha4,
                beta3,
                beta5,
            } => Some([alpha2, alpha4, beta3, beta5]),
            _ => None,
        }
    }

    pub(crate) fn require_nonspecial(&self) -> Result<[&FieldElement; 4]> {
        self.coords().ok_or(Error::WrongDivisorKind {
            expected: "non-special",
        })
    }

    /// R₄ = x² + α₂x + α₄ (for a special divisor x − x₁, for O the constant 1).
    pub fn r4(&self, field: &FieldSpec) -> UniPoly {
        match self {
            MumfordDivisor::Neutral => UniPoly::one(field),
            MumfordDivisor::Special(p) => UniPoly::linear(&p.x),
            MumfordDivisor::NonSpecial { alpha2, alpha4, .. } => {
                UniPoly::new(field, vec![alpha4.clone(), alpha2.clone(), field.one()])
            }
        }
    }

    /// The image under the hyperelliptic involution, which is the group inverse.
    pub fn negate(&self) -> Self {
        match self {
            MumfordDivisor::Neutral => MumfordDivisor::Neutral,
            MumfordDivisor::Special(p) => MumfordDivisor::Special(p.involution()),
            MumfordDivisor::NonSpecial {
                alpha2,
                alpha4,
                beta3,
                beta5,
            } => Self::nonspecial(alpha2.clone(), alpha4.clone(), -beta3, -beta5),
        }
    }

    /// Fixed by negation, i.e. of order dividing 2.
    pub fn is_two_torsion(&self) -> bool {
        match self {
            MumfordDivisor::Neutral => true,
            MumfordDivisor::Special(p) => p.y.is_zero(),
            MumfordDivisor::NonSpecial { beta3, beta5, .. } => beta3.is_zero() && beta5.is_zero(),
        }
    }

    /// (J₈, J₁₀) at the Mumford coordinates; both vanish exactly on valid
    /// non-special divisors.
    pub fn jacobian_residuals(&self, c: &CanonicalCurve) -> Result<(FieldElement, FieldElement)> {
        let [a2, a4, b3, b5] = self.require_nonspecial()?;
        let l = c.lambdas();
        Ok((j8(a2, a4, b3, b5, l), j10(a2, a4, b3, b5, l)))
    }

    /// Whether the divisor is a valid reduced divisor on `c`.
    pub fn is_valid(&self, c: &CanonicalCurve) -> bool {
        match self {
            MumfordDivisor::Neutral => true,
            MumfordDivisor::Special(p) => c.on_curve(p),
            MumfordDivisor::NonSpecial { .. } => {
                if self.coords().unwrap().iter().any(|v| v.field() != c.field()) {
                    return false;
                }
                let (r8, r10) = self.jacobian_residuals(c).unwrap();
                if !(r8.is_zero() && r10.is_zero()) {
                    return false;
                }
                // a double root must not be a branch point: 2·(e, 0) is not reduced
                let [a2, a4, ..] = self.coords().unwrap();
                let disc = &a2.square() - &(4 * a4);
                if disc.is_zero() {
                    let e = -&(a2 / &c.field().from_i64(2));
                    return !c.eval_p(&e).is_zero();
                }
                true
            }
        }
    }

    /// Support points; these live in the quadratic extension when R₄ is
    /// irreducible over the base field.
    pub fn to_points(&self, c: &CanonicalCurve) -> Result<PointPair> {
        let [a2, a4, b3, b5] = self.require_nonspecial()?;
        let field = c.field();
        if let Some([p1, p2]) = self.rational_support(field) {
            return Ok(PointPair {
                field: field.clone(),
                p1,
                p2,
            });
        }
        let q = field.quadratic_extension()?;
        let (a2, a4, b3, b5) = (q.embed(a2), q.embed(a4), q.embed(b3), q.embed(b5));
        let f = &q.ext;
        let half = f.from_ratio(1, 2)?;
        let disc = &a2.square() - &(4 * &a4);
        let (s1, s2) = disc.sqrt()?;
        let point = |s: &FieldElement| {
            let x = &(&(-&a2) + s) * &half;
            let y = -&(&(&b3 * &x) + &b5);
            Point::new(x, y)
        };
        let (p1, p2) = (point(&s1), point(&s2));
        Ok(PointPair {
            field: f.clone(),
            p1,
            p2,
        })
    }

    /// Support points over the base field when R₄ splits there (sorted by x).
    pub fn rational_support(&self, field: &FieldSpec) -> Option<[Point; 2]> {
        let [a2, a4, b3, b5] = self.coords()?;
        let disc = &a2.square() - &(4 * a4);
        let (s1, s2) = disc.sqrt().ok()?;
        let half = field.from_ratio(1, 2).ok()?;
        let point = |s: &FieldElement| {
            let x = &(&(-a2) + s) * &half;
            let y = -&(&(b3 * &x) + b5);
            Point::new(x, y)
        };
        let (mut p1, mut p2) = (point(&s1), point(&s2));
        if p2 < p1 {
            std::mem::swap(&mut p1, &mut p2);
        }
        Some([p1, p2])
    }

    /// d(α₂, α₄)/du along u₁ or u₃, by the chain rule through the support
    /// points with ∂x₁/∂u₁ = −2y₁/(x₁−x₂), ∂x₂/∂u₁ = 2y₂/(x₁−x₂),
    /// ∂x₁/∂u₃ = 2x₂y₁/(x₁−x₂), ∂x₂/∂u₃ = −2x₁y₂/(x₁−x₂).
    /// The result lies in the base field.
    pub fn du_derivative(&self, c: &CanonicalCurve, dir: Direction) -> Result<(FieldElement, FieldElement)> {
        let pp = self.to_points(c)?;
        let (x1, y1, x2, y2) = (&pp.p1.x, &pp.p1.y, &pp.p2.x, &pp.p2.y);
        if y1.is_zero() || y2.is_zero() {
            return Err(Error::BranchPointInSupport);
        }
        let dx = x1 - x2;
        if dx.is_zero() {
            return Err(Error::RepeatedX);
        }
        let (d1, d2) = match dir {
            Direction::U1 => (&(-2 * y1) / &dx, &(2 * y2) / &dx),
            Direction::U3 => (&(&(2 * x2) * y1) / &dx, &(&(-2 * x1) * y2) / &dx),
        };
        // α₂ = −(x₁ + x₂), α₄ = x₁x₂
        let da2 = -&(&d1 + &d2);
        let da4 = &(x2 * &d1) + &(x1 * &d2);
        let base = c.field();
        if &pp.field == base {
            return Ok((da2, da4));
        }
        let q = base.quadratic_extension()?;
        let back = |v: &FieldElement| {
            q.retract(v)
                .ok_or_else(|| Error::Unsupported("derivative left the base field".into()))
        };
        Ok((back(&da2)?, back(&da4)?))
    }

    pub fn to_json(&self) -> DivisorJson {
        match self {
            MumfordDivisor::Neutral => DivisorJson::Neutral,
            MumfordDivisor::Special(p) => DivisorJson::Special {
                point: [p.x.to_string(), p.y.to_string()],
            },
            MumfordDivisor::NonSpecial {
                alpha2,
                alpha4,
                beta3,
                beta5,
            } => DivisorJson::NonSpecial {
                alpha: [alpha2.to_string(), alpha4.to_string()],
                beta: [beta3.to_string(), beta5.to_string()],
            },
        }
    }

    pub fn from_json(j: &DivisorJson, field: &FieldSpec) -> Result<Self> {
        Ok(match j {
            DivisorJson::Neutral => MumfordDivisor::Neutral,
            DivisorJson::Special { point } => {
                let [x, y] = parse_elements::<2>(field, "point", point)?;
                MumfordDivisor::Special(Point::new(x, y))
            }
            DivisorJson::NonSpecial { alpha, beta } => {
                let [a2, a4] = parse_elements::<2>(field, "alpha", alpha)?;
                let [b3, b5] = parse_elements::<2>(field, "beta", beta)?;
                Self::nonspecial(a2, a4, b3, b5)
            }
        })
    }
}

impl fmt::Display for MumfordDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MumfordDivisor::Neutral => write!(f, "O"),
            MumfordDivisor::Special(p) => write!(f, "{p}"),
            MumfordDivisor::NonSpecial {
                alpha2,
                alpha4,
                beta3,
                beta5,
            } => write!(f, "[{alpha2}, {alpha4}; {beta3}, {beta5}]"),
        }
    }
}

/// Serialized divisor, e.g. `{"type":"nonspecial","alpha":["6","0"],"beta":["5","6"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DivisorJson {
    NonSpecial { alpha: [String; 2], beta: [String; 2] },
    Special { point: [String; 2] },
    Neutral,
}
