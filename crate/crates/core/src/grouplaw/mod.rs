//! Addition and duplication of reduced divisors by the explicit Mumford
//! coordinate laws, with dispatch over the degenerate cases.

pub mod formulas;

use crate::curve::{CanonicalCurve, CurveModel, GeneralCurve, Point};
use crate::divisor::{reduce_points, MumfordDivisor};
use crate::error::{Error, Result};
use crate::exactfield::FieldElement;

use formulas::{Coords, Gamma6};

/// Which law produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Neutral,
    Inverse,
    Generic,
    AddSpecial,
    AddPoints,
    Double,
    AddToSpecial,
    DoubleToSpecial,
    /// Supports sharing an x-coordinate, reduced from the combined points.
    Overlap,
    /// Doubling 2·A with a repeated support point, by confluent interpolation.
    RepeatedPoint,
}

/// The γ data of the interpolating function for one addition.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaSet {
    R6(Gamma6<FieldElement>),
    R5Tilde(formulas::Gamma5<FieldElement>),
}

fn owned(d: &MumfordDivisor) -> Result<Coords<FieldElement>> {
    let [a2, a4, b3, b5] = d.require_nonspecial()?;
    Ok([a2.clone(), a4.clone(), b3.clone(), b5.clone()])
}

fn from_coords(c: Coords<FieldElement>) -> MumfordDivisor {
    let [a2, a4, b3, b5] = c;
    MumfordDivisor::nonspecial(a2, a4, b3, b5)
}

fn check_field(d: &MumfordDivisor, c: &CanonicalCurve) -> Result<()> {
    let field = match d {
        MumfordDivisor::Neutral => return Ok(()),
        MumfordDivisor::Special(p) => p.x.field(),
        MumfordDivisor::NonSpecial { alpha2, .. } => alpha2.field(),
    };
    if field != c.field() {
        return Err(Error::MixedFields(field.to_string(), c.field().to_string()));
    }
    Ok(())
}

/// Generic sum of non-special P, Q with a regular γ system and disjoint
/// supports.
pub fn add_nonspecial(p: &MumfordDivisor, q: &MumfordDivisor, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    let (pc, qc) = (owned(p)?, owned(q)?);
    if p == q {
        return Err(Error::SameDivisor);
    }
    if *p == q.negate() {
        return Err(Error::InverseDivisors);
    }
    if !p.r4(c.field()).gcd(&q.r4(c.field())).degree().is_some_and(|d| d == 0) {
        return Err(Error::SupportOverlap);
    }
    let g = formulas::gamma_add(&pc, &qc)?;
    let (a2, a4) = formulas::alpha_sum((&pc[0], &pc[1]), (&qc[0], &qc[1]), &g, c.lambda(2));
    let (b3, b5) = formulas::beta_from_gamma(&a2, &a4, &g)?;
    Ok(MumfordDivisor::nonspecial(a2, a4, b3, b5))
}

/// P + Q for non-special P and a point Q off the supports of ±P.
pub fn add_special(p: &MumfordDivisor, q: &Point, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    let pc = owned(p)?;
    if !c.on_curve(q) {
        return Err(Error::OffCurve);
    }
    let g = formulas::gamma_add_special(&pc, &q.x, &q.y)?;
    let l = c.lambdas();
    Ok(from_coords(formulas::sum_special(&pc, &q.x, &g, l)))
}

/// The divisor P + Q of two points not in involution.
pub fn add_points(p: &Point, q: &Point, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    MumfordDivisor::from_points(c, p, q)
}

/// 2Q for non-special Q without branch points in its support, when 2Q is
/// again non-special.
pub fn double_nonspecial(q: &MumfordDivisor, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    let d = owned(q)?;
    if q.is_two_torsion() {
        return Err(Error::TwoTorsion);
    }
    if repeated_point(q, c).is_some() {
        return Err(Error::RepeatedX);
    }
    let l = c.lambdas();
    let bp = formulas::tangent(&d, l)?;
    let g = formulas::gamma_double(&d, &bp)?;
    let (a2, a4) = formulas::alpha_double(&d[0], &d[1], &g, c.lambda(2));
    let (b3, b5) = formulas::beta_from_gamma(&a2, &a4, &g)?;
    Ok(MumfordDivisor::nonspecial(a2, a4, b3, b5))
}

/// 2Q when it reduces to a single point (2β′₅ = α₂β′₃).
pub fn double_to_special(q: &MumfordDivisor, c: &CanonicalCurve) -> Result<Point> {
    let d = owned(q)?;
    if repeated_point(q, c).is_some() {
        return Err(Error::RepeatedX);
    }
    let l = c.lambdas();
    let bp = formulas::tangent(&d, l)?;
    let (x, y) = formulas::double_to_special_point(&d, &bp, l)?;
    Ok(Point::new(x, y))
}

/// P + Q when it reduces to a single point (singular γ system).
pub fn add_to_special(p: &MumfordDivisor, q: &MumfordDivisor, c: &CanonicalCurve) -> Result<Point> {
    let (pc, qc) = (owned(p)?, owned(q)?);
    if p == q || *p == q.negate() {
        return Err(Error::ConditionViolated("operands are equal or inverse".into()));
    }
    let (x, y) = formulas::add_to_special_point(&pc, &qc, c.lambdas())?;
    Ok(Point::new(x, y))
}

/// Reduced divisor ∼ P + Q, dispatching over all cases.
pub fn add(p: &MumfordDivisor, q: &MumfordDivisor, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    add_traced(p, q, c).map(|(d, _)| d)
}

/// Like [`add`], also reporting the branch taken.
pub fn add_traced(
    p: &MumfordDivisor,
    q: &MumfordDivisor,
    c: &CanonicalCurve,
) -> Result<(MumfordDivisor, Branch)> {
    use MumfordDivisor::*;
    check_field(p, c)?;
    check_field(q, c)?;
    match (p, q) {
        (Neutral, d) | (d, Neutral) => Ok((d.clone(), Branch::Neutral)),
        (Special(a), Special(b)) => {
            if *a == b.involution() {
                Ok((Neutral, Branch::Inverse))
            } else if a == b {
                Ok((double(p, c)?, Branch::Double))
            } else {
                Ok((add_points(a, b, c)?, Branch::AddPoints))
            }
        }
        (NonSpecial { .. }, Special(b)) | (Special(b), NonSpecial { .. }) => {
            let ns = if p.is_special() { q } else { p };
            if ns.r4(c.field()).eval(&b.x).is_zero() {
                let [p1, p2] = ns.rational_support(c.field()).ok_or(Error::SupportOverlap)?;
                return Ok((reduce_points(c, &[p1, p2, b.clone()])?, Branch::Overlap));
            }
            Ok((add_special(ns, b, c)?, Branch::AddSpecial))
        }
        (NonSpecial { .. }, NonSpecial { .. }) => {
            if *p == q.negate() {
                return Ok((Neutral, Branch::Inverse));
            }
            if p == q {
                return double_traced(p, c);
            }
            let field = c.field();
            if p.r4(field).gcd(&q.r4(field)).degree() != Some(0) {
                return overlap(p, q, c);
            }
            let (pc, qc) = (owned(p)?, owned(q)?);
            if formulas::add_determinant(&pc, &qc).is_zero() {
                let pt = add_to_special(p, q, c)?;
                return Ok((Special(pt), Branch::AddToSpecial));
            }
            match add_nonspecial(p, q, c) {
                Err(Error::GammaUndefined) => overlap(p, q, c),
                r => r.map(|d| (d, Branch::Generic)),
            }
        }
    }
}

/// Supports meeting in an x-coordinate lie over the base field; reduce
/// the four points directly.
fn overlap(p: &MumfordDivisor, q: &MumfordDivisor, c: &CanonicalCurve) -> Result<(MumfordDivisor, Branch)> {
    let field = c.field();
    let (Some([a, b]), Some([d, e])) = (p.rational_support(field), q.rational_support(field)) else {
        return Err(Error::SupportOverlap);
    };
    Ok((reduce_points(c, &[a, b, d, e])?, Branch::Overlap))
}

/// The point A when the support of `d` is 2·A.
fn repeated_point(d: &MumfordDivisor, c: &CanonicalCurve) -> Option<Point> {
    let [a2, a4, b3, b5] = d.coords()?;
    if !(&a2.square() - &(4 * a4)).is_zero() {
        return None;
    }
    let x = -&(a2 / &c.field().from_i64(2));
    let y = -&(&(b3 * &x) + b5);
    Some(Point::new(x, y))
}

/// Reduced divisor ∼ 2Q.
pub fn double(q: &MumfordDivisor, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    double_traced(q, c).map(|(d, _)| d)
}

pub fn double_traced(q: &MumfordDivisor, c: &CanonicalCurve) -> Result<(MumfordDivisor, Branch)> {
    use MumfordDivisor::*;
    check_field(q, c)?;
    match q {
        Neutral => Ok((Neutral, Branch::Neutral)),
        Special(p) if p.y.is_zero() => Ok((Neutral, Branch::Inverse)),
        Special(p) => Ok((MumfordDivisor::from_points(c, p, p)?, Branch::Double)),
        NonSpecial { .. } => {
            if q.is_two_torsion() {
                return Ok((Neutral, Branch::Inverse));
            }
            let d = owned(q)?;
            if let Some(a) = repeated_point(q, c) {
                return Ok((reduce_points(c, &[a.clone(), a.clone(), a.clone(), a])?, Branch::RepeatedPoint));
            }
            if formulas::support_norm(&d).is_zero() {
                // one support point is a branch point e, and 2e ∼ 0
                let [a, b] = q
                    .rational_support(c.field())
                    .ok_or(Error::BranchPointInSupport)?;
                let other = if a.y.is_zero() { b } else { a };
                return double_traced(&Special(other), c);
            }
            let bp = formulas::tangent(&d, c.lambdas())?;
            if formulas::double_denominator(&d[0], &bp).is_zero() {
                let pt = double_to_special(q, c)?;
                return Ok((Special(pt), Branch::DoubleToSpecial));
            }
            Ok((double_nonspecial(q, c)?, Branch::Double))
        }
    }
}

/// The γ data that [`add`] would use for non-special P ≠ ±Q, or for a
/// doubling when P = Q.
pub fn gamma_set(p: &MumfordDivisor, q: &MumfordDivisor, c: &CanonicalCurve) -> Result<GammaSet> {
    let (pc, qc) = (owned(p)?, owned(q)?);
    let l = c.lambdas();
    if p == q {
        let bp = formulas::tangent(&pc, l)?;
        if formulas::double_denominator(&pc[0], &bp).is_zero() {
            let half = c.field().from_ratio(1, 2)?;
            let g1 = &bp.0 * &half;
            return Ok(GammaSet::R5Tilde(formulas::Gamma5 {
                g3: &pc[2] + &(&pc[0] * &g1),
                g5: &pc[3] + &(&pc[1] * &g1),
                g1,
            }));
        }
        return Ok(GammaSet::R6(formulas::gamma_double(&pc, &bp)?));
    }
    match formulas::gamma_add(&pc, &qc) {
        Ok(g) => Ok(GammaSet::R6(g)),
        Err(_) => {
            let d = |i: usize| &pc[i] - &qc[i];
            let g1 = if !d(0).is_zero() {
                -&(&d(2) / &d(0))
            } else if !d(1).is_zero() {
                -&(&d(3) / &d(1))
            } else {
                return Err(Error::SupportOverlap);
            };
            Ok(GammaSet::R5Tilde(formulas::Gamma5 {
                g3: &(&pc[0] * &g1) + &pc[2],
                g5: &(&pc[1] * &g1) + &pc[3],
                g1,
            }))
        }
    }
}

/// n·D by double-and-add; negative n multiplies the inverse.
pub fn scalar_mul(n: i64, d: &MumfordDivisor, c: &CanonicalCurve) -> Result<MumfordDivisor> {
    let base = if n < 0 { d.negate() } else { d.clone() };
    let mut k = n.unsigned_abs();
    let mut acc = MumfordDivisor::Neutral;
    let mut pow = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = add(&acc, &pow, c)?;
        }
        k >>= 1;
        if k > 0 {
            pow = double(&pow, c)?;
        }
    }
    Ok(acc)
}

/// (ν₁, ν₂, ν₃, ν₅) of a form-I curve.
fn form_one_nu(g: &GeneralCurve) -> Result<[FieldElement; 4]> {
    match g.model() {
        CurveModel::FormI(n) => Ok([n[0].clone(), n[1].clone(), n[2].clone(), n[4].clone()]),
        _ => Err(Error::Unsupported("extended laws need a form-I curve".into())),
    }
}

/// β of a divisor on the form-I curve, rewritten for y − 𝒬(x)/2.
pub fn beta_to_canonical(d: &MumfordDivisor, g: &GeneralCurve) -> Result<MumfordDivisor> {
    let [n1, _, n3, n5] = form_one_nu(g)?;
    let [a2, a4, b3, b5] = owned(d)?;
    let half = g.field().from_ratio(1, 2)?;
    let b3c = &b3 + &(&(&n3 - &(&n1 * &a2)) * &half);
    let b5c = &b5 + &(&(&n5 - &(&n1 * &a4)) * &half);
    Ok(MumfordDivisor::nonspecial(a2, a4, b3c, b5c))
}

/// Inverse of [`beta_to_canonical`].
pub fn beta_from_canonical(d: &MumfordDivisor, g: &GeneralCurve) -> Result<MumfordDivisor> {
    let [n1, _, n3, n5] = form_one_nu(g)?;
    let [a2, a4, b3, b5] = owned(d)?;
    let half = g.field().from_ratio(1, 2)?;
    let b3i = &b3 - &(&(&n3 - &(&n1 * &a2)) * &half);
    let b5i = &b5 - &(&(&n5 - &(&n1 * &a4)) * &half);
    Ok(MumfordDivisor::nonspecial(a2, a4, b3i, b5i))
}

/// (α₂, α₄) of P + Q on a form-I curve, from divisors written in that
/// curve's coordinates. Only the generic branch is covered.
pub fn add_extended_alpha(
    p: &MumfordDivisor,
    q: &MumfordDivisor,
    g: &GeneralCurve,
) -> Result<(FieldElement, FieldElement)> {
    let [n1, n2, n3, _] = form_one_nu(g)?;
    let (pc, qc) = (owned(p)?, owned(q)?);
    let gm = formulas::gamma_add(&pc, &qc)?;
    Ok(formulas::alpha_sum_extended(
        (&pc[0], &pc[1]),
        (&qc[0], &qc[1]),
        &gm,
        (&n1, &n2, &n3),
    ))
}

/// (α₂, α₄) of 2Q on a form-I curve. The duplication γ is computed on the
/// canonical model and carried back through y ↦ y + 𝒬(x)/2.
pub fn double_extended_alpha(q: &MumfordDivisor, g: &GeneralCurve) -> Result<(FieldElement, FieldElement)> {
    let [n1, n2, n3, n5] = form_one_nu(g)?;
    let (c, _) = g.to_canonical()?;
    let qc = owned(&beta_to_canonical(q, g)?)?;
    let bp = formulas::tangent(&qc, c.lambdas())?;
    let gc = formulas::gamma_double(&qc, &bp)?;
    let half = g.field().from_ratio(1, 2)?;
    let shift = |v: &FieldElement, nu: &FieldElement| v - &(&(&gc.g1 * nu) * &half);
    let gi = Gamma6 {
        g2: shift(&gc.g2, &n1),
        g4: shift(&gc.g4, &n3),
        g6: shift(&gc.g6, &n5),
        g1: gc.g1.clone(),
    };
    Ok(formulas::alpha_sum_extended(
        (&qc[0], &qc[1]),
        (&qc[0], &qc[1]),
        &gi,
        (&n1, &n2, &n3),
    ))
}

#[cfg(test)]
mod tests;
