use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, FieldKind, FieldSpec, MAX_EXTENSION_DEGREE};
use crate::polyring::UniPoly;

use super::{CanonicalCurve, CurveJson, ModelJson, Point};

/// Plane models of a genus-2 curve accepted as input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveModel {
    /// (λ₂, λ₄, λ₆, λ₈, λ₁₀).
    Canonical([FieldElement; 5]),
    /// −y² + y(ν₁x² + ν₃x + ν₅) + x⁵ + ν₂x⁴ + ν₄x³ + ν₆x² + ν₈x + ν₁₀,
    /// stored as (ν₁, ν₂, ν₃, ν₄, ν₅, ν₆, ν₈, ν₁₀).
    FormI([FieldElement; 8]),
    /// −y² + a₀x⁶ + a₁x⁵ + … + a₆, stored as (a₀, …, a₆).
    FormII([FieldElement; 7]),
    /// −y² + y(b₀x³ + b₁x² + b₂x + b₃) + a₀x⁶ + … + a₆.
    FormIII {
        b: [FieldElement; 4],
        a: [FieldElement; 7],
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralCurve {
    field: FieldSpec,
    model: CurveModel,
}

/// One birational step of a [`PointMap`], written in the forward direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapStep {
    /// (x, y) ↦ (x, y − q(x)/2).
    YShift(UniPoly),
    /// (x, y) ↦ (c + d/(x − e₀), y·d²/(x − e₀)³), sending e₀ to infinity.
    Mobius {
        e0: FieldElement,
        c: FieldElement,
        d: FieldElement,
    },
    /// (x, y) ↦ (s·x, s²·y).
    Scale(FieldElement),
}

impl MapStep {
    fn forward(&self, p: &Point) -> Result<Point> {
        match self {
            MapStep::YShift(q) => {
                let half = p.x.field().from_ratio(1, 2)?;
                Ok(Point::new(p.x.clone(), &p.y - &(&q.eval(&p.x) * &half)))
            }
            MapStep::Mobius { e0, c, d } => {
                let t = &p.x - e0;
                if t.is_zero() {
                    return Err(Error::PointAtInfinity);
                }
                let x = c + &(d / &t);
                let y = &(&p.y * &d.square()) / &t.pow(3);
                Ok(Point::new(x, y))
            }
            MapStep::Scale(s) => Ok(Point::new(&p.x * s, &p.y * &s.square())),
        }
    }

    fn backward(&self, p: &Point) -> Result<Point> {
        match self {
            MapStep::YShift(q) => {
                let half = p.x.field().from_ratio(1, 2)?;
                Ok(Point::new(p.x.clone(), &p.y + &(&q.eval(&p.x) * &half)))
            }
            MapStep::Mobius { e0, c, d } => {
                let s = &p.x - c;
                if s.is_zero() {
                    return Err(Error::PointAtInfinity);
                }
                let x = e0 + &(d / &s);
                let y = &(&p.y * d) / &s.pow(3);
                Ok(Point::new(x, y))
            }
            MapStep::Scale(s) => Ok(Point::new(&p.x / s, &p.y / &s.square())),
        }
    }
}

/// Transports points between an input model and its canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointMap {
    steps: Vec<MapStep>,
}

impl PointMap {
    pub fn steps(&self) -> &[MapStep] {
        &self.steps
    }

    /// Input model → canonical model.
    pub fn forward(&self, p: &Point) -> Result<Point> {
        self.steps.iter().try_fold(p.clone(), |acc, s| s.forward(&acc))
    }

    /// Canonical model → input model.
    pub fn inverse(&self, p: &Point) -> Result<Point> {
        self.steps.iter().rev().try_fold(p.clone(), |acc, s| s.backward(&acc))
    }

    fn then(mut self, other: PointMap) -> PointMap {
        self.steps.extend(other.steps);
        self
    }
}

fn poly_from_desc(field: &FieldSpec, desc: &[FieldElement]) -> UniPoly {
    UniPoly::new(field, desc.iter().rev().cloned().collect())
}

impl GeneralCurve {
    pub fn new(field: &FieldSpec, model: CurveModel) -> Result<Self> {
        let elems: Vec<&FieldElement> = match &model {
            CurveModel::Canonical(l) => l.iter().collect(),
            CurveModel::FormI(n) => n.iter().collect(),
            CurveModel::FormII(a) => a.iter().collect(),
            CurveModel::FormIII { b, a } => b.iter().chain(a.iter()).collect(),
        };
        if let Some(e) = elems.iter().find(|e| e.field() != field) {
            return Err(Error::MixedFields(e.field().to_string(), field.to_string()));
        }
        let c = GeneralCurve {
            field: field.clone(),
            model,
        };
        if c.p_poly().degree().unwrap_or(0) < 5 && c.q_poly().degree().unwrap_or(0) < 3 {
            return Err(Error::DegenerateCurve);
        }
        Ok(c)
    }

    pub fn canonical(c: &CanonicalCurve) -> Self {
        GeneralCurve {
            field: c.field().clone(),
            model: CurveModel::Canonical(c.lambdas().clone()),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    /// The coefficient 𝒬(x) of y in −y² + y𝒬(x) + 𝒫(x).
    pub fn q_poly(&self) -> UniPoly {
        let f = &self.field;
        match &self.model {
            CurveModel::FormI(n) => poly_from_desc(f, &[n[0].clone(), n[2].clone(), n[4].clone()]),
            CurveModel::FormIII { b, .. } => poly_from_desc(f, b),
            _ => UniPoly::zero(f),
        }
    }

    /// The y-free part 𝒫(x) of −y² + y𝒬(x) + 𝒫(x).
    pub fn p_poly(&self) -> UniPoly {
        let f = &self.field;
        match &self.model {
            CurveModel::Canonical(l) => {
                let mut d = vec![f.one()];
                d.extend(l.iter().cloned());
                poly_from_desc(f, &d)
            }
            CurveModel::FormI(n) => poly_from_desc(
                f,
                &[
                    f.one(),
                    n[1].clone(),
                    n[3].clone(),
                    n[5].clone(),
                    n[6].clone(),
                    n[7].clone(),
                ],
            ),
            CurveModel::FormII(a) | CurveModel::FormIII { a, .. } => poly_from_desc(f, a),
        }
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        let lhs = &p.y.square() - &(&p.y * &self.q_poly().eval(&p.x));
        lhs == self.p_poly().eval(&p.x)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Point> {
        let (q, p) = (self.q_poly(), self.p_poly());
        let half = self.field.from_ratio(1, 2).ok()?;
        for _ in 0..1000 {
            let x = self.field.random_element(rng);
            let qx = q.eval(&x);
            let disc = &qx.square() + &(4 * &p.eval(&x));
            if let Ok((a, b)) = disc.sqrt() {
                let r = if rng.gen_bool(0.5) { a } else { b };
                return Some(Point::new(x, &(&qx + &r) * &half));
            }
        }
        None
    }

    /// Canonical model over the same field and the point map to it.
    pub fn to_canonical(&self) -> Result<(CanonicalCurve, PointMap)> {
        let f = &self.field;
        match &self.model {
            CurveModel::Canonical(l) => Ok((CanonicalCurve::new(f, l.clone())?, PointMap::default())),
            CurveModel::FormI(_) => {
                let q = self.q_poly();
                let delta = &self.p_poly() + &quarter_square(&q)?;
                let lambda: [FieldElement; 5] = std::array::from_fn(|i| delta.coeff(4 - i));
                let curve = CanonicalCurve::new(f, lambda)?;
                Ok((curve, PointMap { steps: vec![MapStep::YShift(q)] }))
            }
            CurveModel::FormII(a) => sextic_to_canonical(f, a),
            CurveModel::FormIII { .. } => {
                let (form2, shift) = self.without_y_term()?;
                let (curve, map) = form2.to_canonical()?;
                Ok((curve, shift.then(map)))
            }
        }
    }

    /// For form III: the form-II model −y² + Δ̄(x) with Δ̄ = 𝒫̄ + 𝒬̄²/4 and the
    /// y-shift leading to it.
    pub fn without_y_term(&self) -> Result<(GeneralCurve, PointMap)> {
        let q = self.q_poly();
        let delta = &self.p_poly() + &quarter_square(&q)?;
        let a: [FieldElement; 7] = std::array::from_fn(|i| delta.coeff(6 - i));
        let g = GeneralCurve::new(&self.field, CurveModel::FormII(a))?;
        Ok((g, PointMap { steps: vec![MapStep::YShift(q)] }))
    }

    /// Like [`to_canonical`](Self::to_canonical), but when the sextic has no
    /// root in F_p, retry over F_{p^k} for k = 2, …, 4 and return the curve
    /// over the first extension containing a root.
    pub fn to_canonical_allowing_extension(&self) -> Result<(CanonicalCurve, PointMap)> {
        match self.to_canonical() {
            Err(Error::NoRationalRoot) => {}
            other => return other,
        }
        let FieldKind::Prime { p } = *self.field.kind() else {
            return Err(Error::NoRationalRoot);
        };
        for k in 2..=MAX_EXTENSION_DEGREE {
            let ext = FieldSpec::galois(p, k)?;
            match self.base_change(&ext)?.to_canonical() {
                Err(Error::NoRationalRoot) => continue,
                other => return other,
            }
        }
        Err(Error::NoRationalRoot)
    }

    /// The same model over an extension of its prime field.
    pub fn base_change(&self, target: &FieldSpec) -> Result<GeneralCurve> {
        if !matches!(self.field.kind(), FieldKind::Prime { .. })
            || target.characteristic() != self.field.characteristic()
        {
            return Err(Error::InvalidField(format!(
                "cannot embed {} into {}",
                self.field, target
            )));
        }
        let e = |v: &FieldElement| target.from_coeffs(&v.coordinates());
        let model = match &self.model {
            CurveModel::Canonical(l) => CurveModel::Canonical(l.clone().map(|v| e(&v))),
            CurveModel::FormI(n) => CurveModel::FormI(n.clone().map(|v| e(&v))),
            CurveModel::FormII(a) => CurveModel::FormII(a.clone().map(|v| e(&v))),
            CurveModel::FormIII { b, a } => CurveModel::FormIII {
                b: b.clone().map(|v| e(&v)),
                a: a.clone().map(|v| e(&v)),
            },
        };
        GeneralCurve::new(target, model)
    }

    /// ν_k of a form-I model (k ∈ {1, 2, 3, 4, 5, 6, 8, 10}); zero otherwise.
    pub fn nu(&self, k: usize) -> FieldElement {
        let idx = match k {
            1..=6 => k - 1,
            8 => 6,
            10 => 7,
            _ => panic!("no nu{k}"),
        };
        match &self.model {
            CurveModel::FormI(n) => n[idx].clone(),
            _ => self.field.zero(),
        }
    }

    pub fn to_json(&self) -> CurveJson {
        let s = |v: &[FieldElement]| v.iter().map(|e| e.to_string()).collect();
        let model = match &self.model {
            CurveModel::Canonical(l) => ModelJson::Canonical { lambda: s(l) },
            CurveModel::FormI(n) => ModelJson::FormI { nu: s(n) },
            CurveModel::FormII(a) => ModelJson::FormII { a: s(a) },
            CurveModel::FormIII { b, a } => ModelJson::FormIII { b: s(b), a: s(a) },
        };
        CurveJson {
            field: self.field.kind().clone(),
            model,
        }
    }
}

fn quarter_square(q: &UniPoly) -> Result<UniPoly> {
    Ok((q * q).scale(&q.field().from_ratio(1, 4)?))
}

/// −y² + a₀x⁶ + … + a₆ to canonical form: move the least root e₀ to
/// infinity when a₀ ≠ 0, or rescale a quintic to be monic.
fn sextic_to_canonical(f: &FieldSpec, a: &[FieldElement; 7]) -> Result<(CanonicalCurve, PointMap)> {
    let pbar = poly_from_desc(f, a);
    if a[0].is_zero() {
        if a[1].is_zero() {
            return Err(Error::DegenerateCurve);
        }
        let s = a[1].clone();
        let lambda = [
            a[2].clone(),
            &a[3] * &s,
            &a[4] * &s.square(),
            &a[5] * &s.pow(3),
            &a[6] * &s.pow(4),
        ];
        let curve = CanonicalCurve::new(f, lambda)?;
        return Ok((curve, PointMap { steps: vec![MapStep::Scale(s)] }));
    }
    let e0 = pbar.roots().into_iter().next().ok_or(Error::NoRationalRoot)?;
    let taylor = pbar.taylor_at(&e0);
    let tc = |k: usize| taylor.get(k).cloned().unwrap_or_else(|| f.zero());
    let d = tc(1);
    if d.is_zero() {
        return Err(Error::DegenerateCurve);
    }
    // c = 𝒫̄″(e₀)/10 = 2·A₂/10
    let c = &tc(2) / &f.from_i64(5);
    // Y² = Σ_{k=1..6} A_k d^(k−2) (X − c)^(6−k)
    let s = UniPoly::new(f, vec![-&c, f.one()]);
    let mut delta = UniPoly::zero(f);
    let dinv = d.inv()?;
    let mut spow = vec![UniPoly::one(f)];
    for i in 1..=5 {
        spow.push(&spow[i - 1] * &s);
    }
    for k in 1..=6usize {
        let coef = &tc(k) * &(if k == 1 { dinv.clone() } else { d.pow(k as u64 - 2) });
        delta = &delta + &spow[6 - k].scale(&coef);
    }
    debug_assert!(delta.is_monic() && delta.degree() == Some(5) && delta.coeff(4).is_zero());
    let lambda: [FieldElement; 5] = std::array::from_fn(|i| delta.coeff(4 - i));
    let curve = CanonicalCurve::new(f, lambda)?;
    Ok((curve, PointMap { steps: vec![MapStep::Mobius { e0, c, d }] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn els(f: &FieldSpec, v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn round_trip(g: &GeneralCurve, samples: usize) {
        let (c, map) = g.to_canonical().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < samples {
            let p = g.random_point(&mut rng).unwrap();
            let Ok(q) = map.forward(&p) else { continue };
            assert!(c.on_curve(&q), "{p} -> {q}");
            assert_eq!(map.inverse(&q).unwrap(), p);
            done += 1;
        }
    }

    #[test]
    fn form_one_without_y_term_keeps_lambda() {
        let f = FieldSpec::prime(1009).unwrap();
        let nu: [FieldElement; 8] = els(&f, &[0, 3, 0, 5, 0, 7, 11, 13]).try_into().unwrap();
        let g = GeneralCurve::new(&f, CurveModel::FormI(nu)).unwrap();
        let (c, _) = g.to_canonical().unwrap();
        assert_eq!(c.lambdas().to_vec(), els(&f, &[3, 5, 7, 11, 13]));
    }

    #[test]
    fn form_one_lambda_corrections() {
        let q = FieldSpec::rational();
        let nu: [FieldElement; 8] = els(&q, &[2, 1, 4, 0, 6, 0, 0, 1]).try_into().unwrap();
        let g = GeneralCurve::new(&q, CurveModel::FormI(nu)).unwrap();
        let (c, _) = g.to_canonical().unwrap();
        // λ₂ = ν₂ + ν₁²/4, λ₄ = ν₄ + ν₁ν₃/2, λ₆ = ν₆ + ν₁ν₅/2 + ν₃²/4,
        // λ₈ = ν₈ + ν₃ν₅/2, λ₁₀ = ν₁₀ + ν₅²/4
        assert_eq!(c.lambdas().to_vec(), els(&q, &[2, 4, 10, 12, 10]));
    }

    #[test]
    fn round_trips_over_a_prime_field() {
        let f = FieldSpec::prime(1009).unwrap();
        let nu = els(&f, &[4, 1, 9, 2, 3, 8, 6, 5]).try_into().unwrap();
        round_trip(&GeneralCurve::new(&f, CurveModel::FormI(nu)).unwrap(), 200);
        // roots 1..6 of the sextic
        let mut p = UniPoly::one(&f);
        for r in 1..=6 {
            p = &p * &UniPoly::linear(&f.from_i64(r));
        }
        let a: [FieldElement; 7] = std::array::from_fn(|i| p.coeff(6 - i) * f.from_i64(3));
        round_trip(&GeneralCurve::new(&f, CurveModel::FormII(a.clone())).unwrap(), 200);
        let b = els(&f, &[1, 0, 2, 7]).try_into().unwrap();
        round_trip(&GeneralCurve::new(&f, CurveModel::FormIII { b, a }).unwrap(), 200);
    }

    #[test]
    fn quintic_form_two_is_rescaled() {
        let f = FieldSpec::prime(13).unwrap();
        let a = els(&f, &[0, 3, 1, 0, 2, 0, 1]).try_into().unwrap();
        let g = GeneralCurve::new(&f, CurveModel::FormII(a)).unwrap();
        round_trip(&g, 20);
    }

    #[test]
    fn missing_root_needs_an_extension() {
        let f = FieldSpec::prime(7).unwrap();
        // (x² + 1)(x⁴ + x + 3)? any sextic without roots in F_7 will do
        let p = &UniPoly::from_i64(&f, &[1, 0, 1]) * &UniPoly::from_i64(&f, &[3, 0, 1, 1, 1]);
        assert!(p.roots().is_empty());
        let a: [FieldElement; 7] = std::array::from_fn(|i| p.coeff(6 - i));
        let g = GeneralCurve::new(&f, CurveModel::FormII(a)).unwrap();
        match g.to_canonical() {
            Err(Error::NoRationalRoot) => {}
            other => panic!("unexpected {other:?}"),
        }
        match g.to_canonical_allowing_extension() {
            Ok((c, _)) => assert_eq!(c.field().degree(), 2),
            Err(e) => assert_eq!(e, Error::DegenerateCurve),
        }
    }
}
