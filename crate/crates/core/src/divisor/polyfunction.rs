use crate::curve::{CanonicalCurve, Point};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldSpec};
use crate::polyring::UniPoly;

use super::MumfordDivisor;

/// A monomial x^k or y·x^k of the list 𝔐 = {1, x, x², y, x³, yx, x⁴, …}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialM {
    pub weight: u32,
    pub xexp: u32,
    pub has_y: bool,
}

/// 𝔐 up to the given weight, ordered by weight. Weights 1 and 3 are gaps.
pub fn monomial_list(max_weight: u32) -> Vec<MonomialM> {
    (0..=max_weight)
        .filter_map(|w| match w {
            1 | 3 => None,
            w if w % 2 == 0 => Some(MonomialM {
                weight: w,
                xexp: w / 2,
                has_y: false,
            }),
            w => Some(MonomialM {
                weight: w,
                xexp: (w - 5) / 2,
                has_y: true,
            }),
        })
        .collect()
}

/// A polynomial function A(x) + y·B(x) on the curve, monic in its
/// weight-𝔴 monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunction {
    weight: u32,
    a: UniPoly,
    b: UniPoly,
}

impl PolyFunction {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn a(&self) -> &UniPoly {
        &self.a
    }

    pub fn b(&self) -> &UniPoly {
        &self.b
    }

    pub fn eval(&self, p: &Point) -> FieldElement {
        &self.a.eval(&p.x) + &(&p.y * &self.b.eval(&p.x))
    }

    /// Coefficients along 𝔐, lowest weight first.
    pub fn coefficients(&self) -> Vec<FieldElement> {
        monomial_list(self.weight)
            .iter()
            .map(|m| {
                let k = m.xexp as usize;
                if m.has_y {
                    self.b.coeff(k)
                } else {
                    self.a.coeff(k)
                }
            })
            .collect()
    }

    /// A² − 𝒫B², whose roots are the x-coordinates of all zeros.
    pub fn norm(&self, c: &CanonicalCurve) -> UniPoly {
        &(&self.a * &self.a) - &(&(c.poly() * &self.b) * &self.b)
    }
}

/// Distinct points with multiplicities, in order of first appearance.
fn group(points: &[Point]) -> Vec<(Point, usize)> {
    let mut out: Vec<(Point, usize)> = Vec::new();
    for p in points {
        match out.iter_mut().find(|(q, _)| q == p) {
            Some((_, m)) => *m += 1,
            None => out.push((p.clone(), 1)),
        }
    }
    out
}

/// Coefficients s_k of the branch y(x₀ + t) = Σ s_k t^k through p, k < m.
fn branch_series(c: &CanonicalCurve, p: &Point, m: usize) -> Result<Vec<FieldElement>> {
    if m <= 1 {
        return Ok(vec![p.y.clone()]);
    }
    if p.y.is_zero() {
        return Err(Error::SingularInterpolation);
    }
    let t = c.poly().taylor_at(&p.x);
    let two_y = 2 * &p.y;
    let mut s = vec![p.y.clone()];
    for n in 1..m {
        let mut acc = t.get(n).cloned().unwrap_or_else(|| c.field().zero());
        for k in 1..n {
            acc -= &(&s[k] * &s[n - k]);
        }
        s.push(&acc / &two_y);
    }
    Ok(s)
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Taylor coefficients (Hasse derivatives) of x^e·y^j along the branch at x₀.
fn monomial_row(field: &FieldSpec, m: &MonomialM, x0: &FieldElement, ys: &[FieldElement]) -> Vec<FieldElement> {
    let order = ys.len();
    let xs: Vec<FieldElement> = (0..order as u32)
        .map(|k| {
            if k > m.xexp {
                field.zero()
            } else {
                &field.from_i64(binomial(m.xexp, k)) * &x0.pow((m.xexp - k) as u64)
            }
        })
        .collect();
    if !m.has_y {
        return xs;
    }
    (0..order)
        .map(|n| {
            (0..=n).fold(field.zero(), |acc, k| &acc + &(&xs[k] * &ys[n - k]))
        })
        .collect()
}

/// Solve a square linear system by Gaussian elimination.
fn solve(mut a: Vec<Vec<FieldElement>>, mut b: Vec<FieldElement>) -> Option<Vec<FieldElement>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv().ok()?;
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= &t;
            }
            let t = &f * &b[col];
            b[r] -= &t;
        }
    }
    Some(b)
}

/// Interpolation rows: one per point and multiplicity, evaluated on `mons`.
fn interpolation_rows(
    c: &CanonicalCurve,
    groups: &[(Point, usize)],
    mons: &[MonomialM],
) -> Result<(Vec<Vec<FieldElement>>, Vec<Vec<FieldElement>>)> {
    // rows[i][j]: condition i on monomial j; also returns branch series
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for (p, m) in groups {
        let ys = branch_series(c, p, *m)?;
        let cols: Vec<Vec<FieldElement>> =
            mons.iter().map(|mon| monomial_row(c.field(), mon, &p.x, &ys)).collect();
        for k in 0..*m {
            rows.push(cols.iter().map(|col| col[k].clone()).collect());
        }
        series.push(ys);
    }
    Ok((rows, series))
}

/// The monic function of weight 𝔴 vanishing on the given 𝔴 − 2 points,
/// as a ratio of determinants over the monomials of 𝔐 (solved here by
/// elimination). Repeated points contribute derivative conditions. A pair
/// in involution forces a factor x − x₀; two such pairs leave the function
/// undetermined.
pub fn build_polyfunction(c: &CanonicalCurve, points: &[Point], weight: u32) -> Result<PolyFunction> {
    if weight < 4 || points.len() + 2 != weight as usize {
        return Err(Error::Unsupported(format!(
            "a weight-{weight} function is fixed by {} points, got {}",
            weight.saturating_sub(2),
            points.len()
        )));
    }
    if points.iter().any(|p| !c.on_curve(p)) {
        return Err(Error::OffCurve);
    }
    let groups = group(points);
    let field = c.field();
    let mons = monomial_list(weight);
    let (top, lower) = mons.split_last().unwrap();
    let (rows, _) = interpolation_rows(c, &groups, &mons)?;
    let n = lower.len();
    let mat: Vec<Vec<FieldElement>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    let rhs: Vec<FieldElement> = rows.iter().map(|r| -&r[n]).collect();
    let sol = solve(mat, rhs).ok_or(Error::SingularInterpolation)?;
    let mut a = vec![field.zero(); weight as usize / 2 + 1];
    let mut b = vec![field.zero(); weight as usize / 2 + 1];
    for (m, v) in lower.iter().zip(sol).chain(std::iter::once((top, field.one()))) {
        if m.has_y {
            b[m.xexp as usize] = v;
        } else {
            a[m.xexp as usize] = v;
        }
    }
    Ok(PolyFunction {
        weight,
        a: UniPoly::new(field, a),
        b: UniPoly::new(field, b),
    })
}

/// The divisor with support polynomial `u` (degree ≤ 2) on which y = w(x).
fn from_u_w(c: &CanonicalCurve, u: &UniPoly, w: &UniPoly) -> Result<MumfordDivisor> {
    let u = u.monic();
    let w = w.rem(&u)?;
    match u.degree() {
        Some(0) => Ok(MumfordDivisor::Neutral),
        Some(1) => {
            let r = -&u.coeff(0);
            let y = w.eval(&r);
            Ok(MumfordDivisor::Special(Point::new(r, y)))
        }
        Some(2) => {
            let (a2, a4) = (u.coeff(1), u.coeff(0));
            let (b3, b5) = (-&w.coeff(1), -&w.coeff(0));
            let disc = &a2.square() - &(4 * &a4);
            if disc.is_zero() {
                let e = -&(&a2 / &c.field().from_i64(2));
                if c.eval_p(&e).is_zero() {
                    // 2·(e, 0) is principal
                    return Ok(MumfordDivisor::Neutral);
                }
            }
            Ok(MumfordDivisor::nonspecial(a2, a4, b3, b5))
        }
        _ => Err(Error::Unsupported("reduction left more than two points".into())),
    }
}

/// Reduced divisor equivalent to P₁ + … + P_n − n∞ for points over the
/// base field (any multiplicities).
///
/// Pairs in involution are cancelled first. The remaining n points are
/// interpolated by the weight-(n+2) function R = A + yB; its two further
/// zeros D* satisfy y = −A/B, and the class is −D*. If that function is
/// not available (singular interpolation, or B vanishing on D*), the
/// function y − v(x) with v interpolating the points is used instead.
pub fn reduce_points(c: &CanonicalCurve, points: &[Point]) -> Result<MumfordDivisor> {
    if points.iter().any(|p| !c.on_curve(p)) {
        return Err(Error::OffCurve);
    }
    let mut pts = points.to_vec();
    'cancel: loop {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[j] == pts[i].involution() {
                    pts.remove(j);
                    pts.remove(i);
                    continue 'cancel;
                }
            }
        }
        break;
    }
    match pts.len() {
        0 => return Ok(MumfordDivisor::Neutral),
        1 => return Ok(MumfordDivisor::Special(pts[0].clone())),
        2 => return MumfordDivisor::from_points(c, &pts[0], &pts[1]),
        _ => {}
    }
    let field = c.field();
    let support = pts
        .iter()
        .fold(UniPoly::one(field), |acc, p| &acc * &UniPoly::linear(&p.x));
    if let Ok(r) = build_polyfunction(c, &pts, pts.len() as u32 + 2) {
        let u_star = r.norm(c).exact_div(&support)?.monic();
        if let Some(inv) = r.b().inv_mod(&u_star) {
            let w = r.a().mulmod(&inv, &u_star);
            return from_u_w(c, &u_star, &w);
        }
    }
    // y − v(x) with v interpolating the branch values (with multiplicity)
    let groups = group(&pts);
    let n = pts.len();
    let mons: Vec<MonomialM> = (0..n as u32)
        .map(|k| MonomialM {
            weight: 2 * k,
            xexp: k,
            has_y: false,
        })
        .collect();
    let (rows, series) = interpolation_rows(c, &groups, &mons)?;
    let rhs: Vec<FieldElement> = series.iter().flat_map(|s| s.iter().cloned()).collect();
    let v = UniPoly::new(field, solve(rows, rhs).ok_or(Error::SingularInterpolation)?);
    let (mut u, mut v) = (support, v);
    while u.degree().unwrap_or(0) > 2 {
        let next = (c.poly() - &(&v * &v)).exact_div(&u)?.monic();
        v = (-&v).rem(&next)?;
        u = next;
    }
    from_u_w(c, &u, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (CanonicalCurve, impl Fn(i64, i64) -> Point) {
        let f = FieldSpec::prime(7).unwrap();
        let c = CanonicalCurve::from_i64(&f, [0, 0, 0, 0, 1]).unwrap();
        (c, move |x, y| Point::new(f.from_i64(x), f.from_i64(y)))
    }

    #[test]
    fn monomials() {
        let w: Vec<u32> = monomial_list(9).iter().map(|m| m.weight).collect();
        assert_eq!(w, vec![0, 2, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn weight_four_function_is_r4() {
        let (c, pt) = setup();
        let r = build_polyfunction(&c, &[pt(0, 1), pt(1, 3)], 4).unwrap();
        let ints: Vec<i64> = r.coefficients().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![0, 6, 1]);
        assert!(r.b().is_zero());
    }

    #[test]
    fn involution_pair_gives_linear_factor() {
        let (c, pt) = setup();
        // 5⁵ + 1 = 3126 ≡ 4 = 2²  (mod 7)
        assert!(c.on_curve(&pt(5, 2)));
        let r = build_polyfunction(&c, &[pt(0, 1), pt(1, 3), pt(5, 2), pt(5, 5)], 6).unwrap();
        assert!(r.b().is_zero());
        assert!(r.a().eval(&c.field().from_i64(5)).is_zero());
        let r4 = UniPoly::from_i64(c.field(), &[0, 6, 1]);
        assert!(r.a().rem(&r4).unwrap().is_zero());
    }

    #[test]
    fn two_involution_pairs_are_singular() {
        let (c, pt) = setup();
        let res = build_polyfunction(&c, &[pt(1, 3), pt(1, 4), pt(5, 2), pt(5, 5)], 6);
        assert_eq!(res, Err(Error::SingularInterpolation));
    }

    #[test]
    fn functions_vanish_on_their_points() {
        let (c, _) = setup();
        let pts = c.points();
        let chosen = [pts[1].clone(), pts[3].clone(), pts[3].clone(), pts[6].clone()];
        let r = build_polyfunction(&c, &chosen, 6).unwrap();
        for p in &chosen {
            assert!(r.eval(p).is_zero());
        }
        assert_eq!(r.coefficients().last().unwrap(), &c.field().one());
    }

    #[test]
    fn reduce_small_cases() {
        let (c, pt) = setup();
        assert_eq!(reduce_points(&c, &[pt(5, 2), pt(5, 5)]).unwrap(), MumfordDivisor::Neutral);
        assert_eq!(reduce_points(&c, &[pt(6, 0), pt(6, 0)]).unwrap(), MumfordDivisor::Neutral);
        assert_eq!(
            reduce_points(&c, &[pt(0, 1), pt(5, 2), pt(5, 5)]).unwrap(),
            MumfordDivisor::Special(pt(0, 1))
        );
    }
}
