//! Torsion criteria, division polynomials for n = 2, 3, 4 and torsion
//! searches over finite fields.

mod divpoly;

use rayon::prelude::*;

use crate::curve::{CanonicalCurve, Point};
use crate::divisor::MumfordDivisor;
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, QuadraticExtension};
use crate::grouplaw::{self, formulas, Branch};
use crate::polyring::{UniPoly, WeightedPoly};

pub use divpoly::{
    emit_division_polynomials, four_torsion_mumford, lambdas_in, mumford_ring, t_poly,
    t_poly_expanded, three_torsion_mumford, three_torsion_x_by_elimination, three_torsion_xy,
    xy_ring, CoordSystem, DivisionPolySet,
};

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// n·D ∼ 0.
pub fn order_divides(d: &MumfordDivisor, n: u64, c: &CanonicalCurve) -> Result<bool> {
    Ok(grouplaw::scalar_mul(n as i64, d, c)?.is_neutral())
}

/// D has exact order n.
pub fn is_torsion(d: &MumfordDivisor, n: u64, c: &CanonicalCurve) -> Result<bool> {
    if n < 2 || !order_divides(d, n, c)? {
        return Ok(false);
    }
    for q in prime_divisors(n) {
        if order_divides(d, n / q, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The 2-torsion classes defined over the field of `c`: single branch
/// points, pairs of rational branch points and, over finite fields, pairs
/// of conjugate branch points.
pub fn two_torsion_divisors(c: &CanonicalCurve) -> Vec<MumfordDivisor> {
    let f = c.field();
    let roots = c.branch_points();
    let mut out: Vec<MumfordDivisor> = roots
        .iter()
        .map(|e| MumfordDivisor::Special(Point::new(e.clone(), f.zero())))
        .collect();
    for (i, e1) in roots.iter().enumerate() {
        for e2 in &roots[i + 1..] {
            out.push(MumfordDivisor::nonspecial(-&(e1 + e2), e1 * e2, f.zero(), f.zero()));
        }
    }
    for u in c.poly().irreducible_quadratic_factors() {
        out.push(MumfordDivisor::nonspecial(u.coeff(1), u.coeff(0), f.zero(), f.zero()));
    }
    out.sort();
    out
}

/// Duplication γ at D, or `GammaUndefined` when the doubling formulas do
/// not apply (branch point or repeated point in the support, or 2D special).
fn duplication_gamma(
    d: &[FieldElement; 4],
    c: &CanonicalCurve,
) -> Result<(formulas::Gamma6<FieldElement>, (FieldElement, FieldElement))> {
    let disc = &d[0].square() - &(4 * &d[1]);
    if disc.is_zero() {
        return Err(Error::GammaUndefined);
    }
    let bp = formulas::tangent(d, c.lambdas()).map_err(|_| Error::GammaUndefined)?;
    let g = formulas::gamma_double(d, &bp).map_err(|_| Error::GammaUndefined)?;
    Ok((g, bp))
}

fn owned(d: &MumfordDivisor) -> Result<[FieldElement; 4]> {
    let [a, b, e, f] = d.require_nonspecial()?;
    Ok([a.clone(), b.clone(), e.clone(), f.clone()])
}

/// (r₁, r₂) with r₁ = 3α₂ − 2γ₂ + γ₁² and
/// r₂ = 3α₄ − 3α₂² + 2α₂(2γ₂ − γ₁²) − 2γ₄ − γ₂² + λ₂γ₁²;
/// both vanish exactly when 2D ∼ −D.
pub fn three_torsion_mumford_residuals(
    d: &MumfordDivisor,
    c: &CanonicalCurve,
) -> Result<(FieldElement, FieldElement)> {
    let v = owned(d)?;
    let (g, _) = duplication_gamma(&v, c)?;
    let [a2, a4, ..] = &v;
    let t = &(2 * &g.g2) - &g.g1.square();
    let r1 = &(3 * a2) - &t;
    let rhs = &(&(&(&(3 * &a2.square()) - &(&(2 * a2) * &t)) + &(2 * &g.g4)) + &g.g2.square())
        - &(c.lambda(2) * &g.g1.square());
    Ok((r1, &(3 * a4) - &rhs))
}

/// Residuals of the 4-torsion conditions on the branch that applies to D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FourTorsionResiduals {
    /// 2D non-special: the two conditions equivalent to β^[2D] = 0.
    NonSpecial([FieldElement; 2]),
    /// 2D special: the condition y_{2D} = 0.
    Special(FieldElement),
}

impl FourTorsionResiduals {
    pub fn vanish(&self) -> bool {
        match self {
            FourTorsionResiduals::NonSpecial([a, b]) => a.is_zero() && b.is_zero(),
            FourTorsionResiduals::Special(e) => e.is_zero(),
        }
    }
}

/// The 4-torsion residuals of non-special D. The branch follows the
/// doubling: 2β′₅ ≠ α₂β′₃ gives the non-special conditions, equality the
/// special one. When the doubling formulas do not apply (a branch point
/// or a repeated point in the support), 2D is computed and its β or y
/// returned directly.
pub fn four_torsion_residuals(d: &MumfordDivisor, c: &CanonicalCurve) -> Result<FourTorsionResiduals> {
    let v = owned(d)?;
    if d.is_two_torsion() {
        return Err(Error::TwoTorsion);
    }
    let l2 = c.lambda(2);
    let [a2, a4, b3, b5] = &v;
    let disc = &a2.square() - &(4 * a4);
    let bp = if disc.is_zero() {
        None
    } else {
        formulas::tangent(&v, c.lambdas()).ok()
    };
    let Some(bp) = bp else {
        return Ok(match grouplaw::double(d, c)? {
            MumfordDivisor::NonSpecial { beta3, beta5, .. } => {
                FourTorsionResiduals::NonSpecial([beta3, beta5])
            }
            MumfordDivisor::Special(p) => FourTorsionResiduals::Special(p.y),
            MumfordDivisor::Neutral => return Err(Error::TwoTorsion),
        });
    };
    if formulas::double_denominator(a2, &bp).is_zero() {
        let half = c.field().from_ratio(1, 2)?;
        let g1 = &bp.0 * &half;
        let g3 = b3 + &(a2 * &g1);
        let g5 = b5 + &(a4 * &g1);
        let x = &(&(2 * a2) + &g1.square()) - l2;
        let e = &(&(&(&g1 * &x) + &g3) * &x) + &g5;
        return Ok(FourTorsionResiduals::Special(e));
    }
    let g = formulas::gamma_double(&v, &bp)?;
    let g1s = g.g1.square();
    let u = &(&(2 * a2) - &g.g2) + &g1s;
    let e1 = &(&(&(&(-&(2 * a4)) - &a2.square()) + &(&u * &(&g.g2 - &g1s))) + &(&g1s * &(&g.g2 - l2)))
        + &g.g4;
    let w = &(&(&(-&(2 * a4)) + &(&(&(3 * a2) - &g.g2) * &(a2 - &g.g2))) + &(&g1s * &(&(2 * a2) - l2)))
        + &(2 * &g.g4);
    let e2 = &(&w * &u) - &g.g6;
    Ok(FourTorsionResiduals::NonSpecial([e1, e2]))
}

/// Which 4-torsion branch D belongs to, read off from the doubling law.
pub fn four_torsion_branch(d: &MumfordDivisor, c: &CanonicalCurve) -> Result<Branch> {
    let (_, b) = grouplaw::double_traced(d, c)?;
    Ok(b)
}

fn require_finite(c: &CanonicalCurve) -> Result<()> {
    if c.field().is_finite() {
        Ok(())
    } else {
        Err(Error::Unsupported("torsion search needs a finite field".into()))
    }
}

/// Square roots of 𝒫(x) in the field of x (none, one or two).
fn ys_over(c: &CanonicalCurve, x: &FieldElement) -> Vec<FieldElement> {
    match c.eval_p(x).sqrt() {
        Ok((a, b)) if a == b => vec![a],
        Ok((a, b)) => vec![a, b],
        Err(_) => vec![],
    }
}

/// A divisor from conjugate support points over the quadratic extension,
/// written over the base field.
fn from_conjugates(q: &QuadraticExtension, x1: &FieldElement, y1: &FieldElement) -> Option<MumfordDivisor> {
    let (x2, y2) = (q.conjugate(x1), q.conjugate(y1));
    let dx = x1 - &x2;
    let a2 = -&(x1 + &x2);
    let a4 = x1 * &x2;
    let b3 = -&(&(y1 - &y2) / &dx);
    let b5 = &(&(&x2 * y1) - &(x1 * &y2)) / &dx;
    Some(MumfordDivisor::nonspecial(
        q.retract(&a2)?,
        q.retract(&a4)?,
        q.retract(&b3)?,
        q.retract(&b5)?,
    ))
}

/// Every non-special divisor defined over the (finite) field of `c`:
/// pairs of rational points, doubled points and conjugate pairs. Fails
/// with `NoQuadraticExtension` when the conjugate pairs cannot be reached
/// within the supported extension degrees.
pub fn nonspecial_divisors(c: &CanonicalCurve) -> Result<Vec<MumfordDivisor>> {
    require_finite(c)?;
    let pts = c.points();
    let mut out: Vec<MumfordDivisor> = (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let pts = &pts;
            (i..pts.len()).filter_map(move |j| MumfordDivisor::from_points(c, &pts[i], &pts[j]).ok())
        })
        .collect();
    {
        let q = c.field().quadratic_extension()?;
        let ck = c.base_change(&q.ext, |v| q.embed(v))?;
        let elems: Vec<FieldElement> = q.ext.elements().collect();
        let conj: Vec<MumfordDivisor> = elems
            .par_iter()
            .filter(|x| !q.is_in_base(x) && **x < q.conjugate(x))
            .flat_map_iter(|x| {
                ys_over(&ck, x)
                    .into_iter()
                    .filter_map(|y| from_conjugates(&q, x, &y))
                    .collect::<Vec<_>>()
            })
            .collect();
        out.extend(conj);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exact-order-n divisors among `candidates`, sorted.
fn verified(candidates: Vec<MumfordDivisor>, n: u64, c: &CanonicalCurve) -> Result<Vec<MumfordDivisor>> {
    let mut out = candidates
        .into_par_iter()
        .filter_map(|d| match is_torsion(&d, n, c) {
            Ok(true) => Some(Ok(d)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// 𝒳(x₁, ·) as a univariate polynomial in x₂.
fn x_slice(x: &WeightedPoly, x1: &FieldElement) -> Result<UniPoly> {
    let ring = x.ring();
    let f = ring.field();
    let i2 = ring.index_of("x_2")?;
    let mut vals = vec![f.zero(); ring.nvars()];
    vals[ring.index_of("x_1")?] = x1.clone();
    let coeffs = x
        .to_univariate(i2)
        .iter()
        .map(|p| p.evaluate(&vals))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::new(f, coeffs))
}

fn xy_values(x1: &FieldElement, x2: &FieldElement, y1: &FieldElement, y2: &FieldElement) -> Vec<FieldElement> {
    vec![x1.clone(), x2.clone(), y1.clone(), y2.clone()]
}

/// Every 3-torsion divisor over the finite field of `c`, from the common
/// zeros of 𝒳 and 𝒴: rational pairs x₁ ≠ x₂ are found as roots of
/// 𝒳(x₁, ·), conjugate pairs by testing 𝒳(x₁, x̄₁) over the quadratic
/// extension. Doubled points, which the two polynomials do not see, are
/// tested directly. Each candidate is confirmed by [`is_torsion`]. Like
/// [`nonspecial_divisors`], needs the quadratic extension of the field.
pub fn find_three_torsion(c: &CanonicalCurve) -> Result<Vec<MumfordDivisor>> {
    require_finite(c)?;
    let f = c.field();
    let ring = xy_ring(f, false);
    let (x, y) = three_torsion_xy(&ring, &lambdas_in(&ring, Some(c))?)?;
    let elems: Vec<FieldElement> = f.elements().collect();
    let split: Vec<Vec<MumfordDivisor>> = elems
        .par_iter()
        .map(|x1| -> Result<Vec<MumfordDivisor>> {
            let ys1 = ys_over(c, x1);
            if ys1.is_empty() {
                return Ok(vec![]);
            }
            let slice = x_slice(&x, x1)?;
            let x2s: Vec<FieldElement> = if slice.is_zero() {
                elems.iter().filter(|v| *v > x1).cloned().collect()
            } else {
                slice.roots().into_iter().filter(|v| v > x1).collect()
            };
            let mut out = Vec::new();
            for x2 in &x2s {
                for y1 in &ys1 {
                    for y2 in ys_over(c, x2) {
                        if y.evaluate(&xy_values(x1, x2, y1, &y2))?.is_zero() {
                            let p1 = Point::new(x1.clone(), y1.clone());
                            out.push(MumfordDivisor::from_points(c, &p1, &Point::new(x2.clone(), y2))?);
                        }
                    }
                }
            }
            for y1 in ys1.iter().filter(|v| !v.is_zero()) {
                let p = Point::new(x1.clone(), y1.clone());
                out.push(MumfordDivisor::from_points(c, &p, &p)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut candidates: Vec<MumfordDivisor> = split.into_iter().flatten().collect();
    {
        let q = f.quadratic_extension()?;
        let ck = c.base_change(&q.ext, |v| q.embed(v))?;
        let rk = xy_ring(&q.ext, false);
        let (xk, yk) = three_torsion_xy(&rk, &lambdas_in(&rk, Some(&ck))?)?;
        let ext: Vec<FieldElement> = q.ext.elements().collect();
        let conj: Vec<Vec<MumfordDivisor>> = ext
            .par_iter()
            .filter(|x1| !q.is_in_base(x1) && **x1 < q.conjugate(x1))
            .map(|x1| -> Result<Vec<MumfordDivisor>> {
                let x2 = q.conjugate(x1);
                let zero = q.ext.zero();
                if !xk.evaluate(&xy_values(x1, &x2, &zero, &zero))?.is_zero() {
                    return Ok(vec![]);
                }
                let mut out = Vec::new();
                for y1 in ys_over(&ck, x1) {
                    let y2 = q.conjugate(&y1);
                    if yk.evaluate(&xy_values(x1, &x2, &y1, &y2))?.is_zero() {
                        out.extend(from_conjugates(&q, x1, &y1));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        candidates.extend(conj.into_iter().flatten());
    }
    verified(candidates, 3, c)
}

/// Every divisor of exact order 4 over the finite field of `c`: all
/// non-special divisors are screened by [`four_torsion_residuals`] on
/// their branch and confirmed by [`is_torsion`].
pub fn find_four_torsion(c: &CanonicalCurve) -> Result<Vec<MumfordDivisor>> {
    let candidates: Vec<MumfordDivisor> = nonspecial_divisors(c)?
        .into_par_iter()
        .filter(|d| {
            !d.is_two_torsion()
                && four_torsion_residuals(d, c).map(|r| r.vanish()).unwrap_or(false)
        })
        .collect();
    verified(candidates, 4, c)
}

/// Exact-order-n divisors for n ∈ {2, 3, 4}.
pub fn find_torsion(c: &CanonicalCurve, n: u64) -> Result<Vec<MumfordDivisor>> {
    match n {
        2 => Ok(two_torsion_divisors(c)),
        3 => find_three_torsion(c),
        4 => find_four_torsion(c),
        n => Err(Error::UnsupportedOrder(n)),
    }
}

#[cfg(test)]
mod tests;
