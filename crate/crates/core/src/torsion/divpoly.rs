//! Division polynomials for n = 3 and 4, in Mumford coordinates and in
//! the coordinates (x₁, y₁, x₂, y₂) of the support points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{CanonicalCurve, LAMBDA_NAMES};
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::grouplaw::formulas;
use crate::polyring::{resultant, PolyJson, PolyRing, WeightedPoly};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordSystem {
    Mumford,
    Xy,
}

/// Named polynomials whose common zeros (with the curve equations) are
/// the n-torsion divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionPolySet {
    pub n: u32,
    pub coords: CoordSystem,
    pub names: Vec<String>,
    pub polys: Vec<WeightedPoly>,
}

impl DivisionPolySet {
    pub fn get(&self, name: &str) -> Option<&WeightedPoly> {
        self.names.iter().position(|n| n == name).map(|i| &self.polys[i])
    }

    /// One JSON polynomial per entry, with name and weight in the metadata.
    pub fn to_json(&self) -> Vec<PolyJson> {
        self.names
            .iter()
            .zip(&self.polys)
            .map(|(name, p)| {
                let mut j = p.to_json();
                let mut meta = BTreeMap::new();
                meta.insert("name".to_string(), name.clone().into());
                meta.insert("n".to_string(), self.n.into());
                meta.insert(
                    "coords".to_string(),
                    serde_json::to_value(self.coords).unwrap(),
                );
                if p.is_homogeneous() {
                    if let Some(w) = p.weighted_degree() {
                        meta.insert("weight".to_string(), w.into());
                    }
                }
                j.metadata = meta;
                j
            })
            .collect()
    }
}

/// Ring over `field` with the given coordinates and, when `formal`, the
/// curve parameters λ₂ … λ₁₀ as further variables.
fn ring_with(field: &FieldSpec, coords: &[&str], formal: bool) -> PolyRing {
    let mut names = coords.to_vec();
    if formal {
        names.extend(LAMBDA_NAMES);
    }
    PolyRing::with_default_weights(field, &names).expect("known variable names")
}

pub fn xy_ring(field: &FieldSpec, formal: bool) -> PolyRing {
    ring_with(field, &["x_1", "x_2", "y_1", "y_2"], formal)
}

pub fn mumford_ring(field: &FieldSpec, formal: bool) -> PolyRing {
    ring_with(field, &["alpha2", "alpha4", "beta3", "beta5"], formal)
}

/// λ as ring elements: variables when the ring is formal, otherwise the
/// constants of `curve`.
pub fn lambdas_in(ring: &PolyRing, curve: Option<&CanonicalCurve>) -> Result<[WeightedPoly; 5]> {
    match curve {
        Some(c) => {
            if c.field() != ring.field() {
                return Err(Error::MixedFields(
                    c.field().to_string(),
                    ring.field().to_string(),
                ));
            }
            Ok(c.lambdas().clone().map(|l| ring.constant(l)))
        }
        None => LAMBDA_NAMES
            .iter()
            .map(|n| ring.var(n))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.try_into().unwrap()),
    }
}

fn p_of(x: &WeightedPoly, l: &[WeightedPoly; 5]) -> WeightedPoly {
    l.iter().fold(x.ring().one(), |acc, c| &(&acc * x) + c)
}

fn dp_of(x: &WeightedPoly, l: &[WeightedPoly; 5]) -> WeightedPoly {
    let mut acc = 5 * &x.pow(4);
    for (i, c) in l[..4].iter().enumerate() {
        let k = 3 - i as u32;
        acc = &acc + &(&((k + 1) as i64 * c) * &x.pow(k));
    }
    acc
}

/// Values of 𝒫 and 𝒫′ at x₁, x₂ and h = x₁ − x₂.
struct XyData {
    x1: WeightedPoly,
    x2: WeightedPoly,
    p1: WeightedPoly,
    p2: WeightedPoly,
    d1: WeightedPoly,
    d2: WeightedPoly,
    h: WeightedPoly,
}

impl XyData {
    fn new(ring: &PolyRing, l: &[WeightedPoly; 5]) -> Self {
        let (x1, x2) = (ring.v("x_1"), ring.v("x_2"));
        XyData {
            p1: p_of(&x1, l),
            p2: p_of(&x2, l),
            d1: dp_of(&x1, l),
            d2: dp_of(&x2, l),
            h: &x1 - &x2,
            x1,
            x2,
        }
    }
}

fn q(ring: &PolyRing, n: i64, d: i64) -> WeightedPoly {
    ring.constant(ring.field().from_ratio(n, d).expect("characteristic above 5"))
}

/// 𝒯(xᵢ) = (𝒫(x₁) − 𝒫(x₂) − 𝒫′(xᵢ)(x₁ − x₂))/(x₁ − x₂)², by exact division.
pub fn t_poly(ring: &PolyRing, l: &[WeightedPoly; 5], i: usize) -> Result<WeightedPoly> {
    let d = XyData::new(ring, l);
    let dp = if i == 1 { &d.d1 } else { &d.d2 };
    (&(&d.p1 - &d.p2) - &(dp * &d.h)).exact_div(&d.h.pow(2))
}

/// The expanded form of 𝒯(xᵢ): a sum over complete symmetric monomials,
/// still divided by x₁ − x₂.
pub fn t_poly_expanded(ring: &PolyRing, l: &[WeightedPoly; 5], i: usize) -> Result<WeightedPoly> {
    let (x1, x2) = (ring.v("x_1"), ring.v("x_2"));
    let xi = if i == 1 { x1.clone() } else { x2.clone() };
    // h_k(x₁, x₂) = Σ x₁^a x₂^(k−a)
    let hk = |k: u32| (0..=k).fold(ring.zero(), |acc, a| &acc + &(&x1.pow(a) * &x2.pow(k - a)));
    let mut num = &hk(4) - &(5 * &xi.pow(4));
    num = &num + &(&l[0] * &(&hk(3) - &(4 * &xi.pow(3))));
    num = &num + &(&l[1] * &(&hk(2) - &(3 * &xi.pow(2))));
    num = &num + &(&l[2] * &(&hk(1) - &(2 * &xi)));
    num.exact_div(&(&x1 - &x2))
}

/// (𝒳, 𝒴) for 3-torsion. 𝒳 depends on x₁, x₂ only; 𝒴 also on y₁, y₂.
pub fn three_torsion_xy(ring: &PolyRing, l: &[WeightedPoly; 5]) -> Result<(WeightedPoly, WeightedPoly)> {
    let d = XyData::new(ring, l);
    let (t1, t2) = (t_poly(ring, l, 1)?, t_poly(ring, l, 2)?);
    let (p1, p2, d1, d2, h) = (&d.p1, &d.p2, &d.d1, &d.d2, &d.h);
    let p1p2 = p1 * p2;
    let slope = (p1 - p2).exact_div(h)?;
    let q1 = (&t1 + &t2).exact_div(h)?;
    let q2 = (&(&p2.pow(2) * &t1) + &(&p1.pow(2) * &t2)).exact_div(h)?;
    let q3 = (&(&p2.pow(3) * &t1.pow(2)) - &(&p1.pow(3) * &t2.pow(2))).exact_div(h)?;
    let wr = (&(p2 * d1) - &(p1 * d2)).exact_div(h)?;

    let mut x = -&(&q(ring, 1, 4)
        * &(&(&(&p2.pow(2) * d1) * &t1.pow(2)) + &(&(&p1.pow(2) * d2) * &t2.pow(2))));
    x = &x + &(&q(ring, 1, 2) * &q3);
    x = &x - &(&q(ring, 1, 4) * &slope.pow(5));
    x = &x + &(&(&q(ring, 3, 4) * &q2) * &slope.pow(2));
    x = &x - &(&(&p1p2 * &wr) * &q1);
    let sum = &(&(2 * &d.x1) + &(2 * &d.x2)) + &l[0];
    let inner = &(&(&(-6 * &p1p2) + &(&(&d.x1 * p2) * d1)) + &(&(&d.x2 * p1) * d2))
        + &(&(&(p2 * d1) + &(p1 * d2)) * &sum);
    x = &x + &(&p1p2 * &inner);

    let (a1, b1, _, _) = xy_coefficients(&d, l);
    let y = &(&(&ring.v("y_1") * &ring.v("y_2")) * &a1) + &b1;
    Ok((x, y))
}

/// The two equations linear in y₁y₂: Aₖ·y₁y₂ + Bₖ = 0. Returns (A₁, B₁, A₂, B₂).
fn xy_coefficients(
    d: &XyData,
    l: &[WeightedPoly; 5],
) -> (WeightedPoly, WeightedPoly, WeightedPoly, WeightedPoly) {
    let ring = d.x1.ring();
    let (p1, p2, d1, d2, h) = (&d.p1, &d.p2, &d.d1, &d.d2, &d.h);
    let p1p2 = p1 * p2;
    let h4 = h.pow(4);
    let quarter = q(ring, 1, 4);
    let a1 = &(d1 * p2) + &(d2 * p1);
    let b1 = &(&(&quarter * h) * &(&(&d1.pow(2) * p2) - &(&d2.pow(2) * p1)))
        - &(&p1p2 * &(&(d1 + d2) + &h4));
    let a2 = &(&(6 * &p1p2) - &(&(&d.x1 * d1) * p2)) - &(&(&d.x2 * d2) * p1);
    let sum = &(&(2 * &d.x1) + &(2 * &d.x2)) + &l[0];
    let b2 = &(-&(&(&quarter * h) * &(&(&(&d.x2 * &d1.pow(2)) * p2) - &(&(&d.x1 * &d2.pow(2)) * p1))))
        + &(&p1p2
            * &(&(&(&(&(&d.x1 * d1) - &(3 * p1)) + &(&d.x2 * d2)) - &(3 * p2)) - &(&sum * &h4)));
    (a1, b1, a2, b2)
}

/// 𝒳 derived independently: the resultant in y₁ of the two equations
/// (after y₂ is factored out) divided by (x₁ − x₂)⁴. Agrees with
/// [`three_torsion_xy`] up to sign.
pub fn three_torsion_x_by_elimination(ring: &PolyRing, l: &[WeightedPoly; 5]) -> Result<WeightedPoly> {
    let d = XyData::new(ring, l);
    let (a1, b1, a2, b2) = xy_coefficients(&d, l);
    let y1 = ring.index_of("y_1")?;
    let (yy1, y2) = (ring.v("y_1"), ring.v("y_2"));
    let e1 = &(&(&yy1 * &y2) * &a1) + &b1;
    let e2 = &(&(&yy1 * &y2) * &a2) + &b2;
    let r = resultant(&e1, &e2, y1)?;
    r.exact_div(&y2)?.exact_div(&d.h.pow(4))
}

fn mumford_coords(ring: &PolyRing) -> [WeightedPoly; 4] {
    ["alpha2", "alpha4", "beta3", "beta5"].map(|n| ring.v(n))
}

/// The 3-torsion conditions 3α₂ = 2γ₂ − γ₁² and its α₄ companion, with the
/// duplication γ = G/D substituted and D² cleared. Returns (D, r₁D², r₂D²).
pub fn three_torsion_mumford(
    ring: &PolyRing,
    l: &[WeightedPoly; 5],
) -> (WeightedPoly, WeightedPoly, WeightedPoly) {
    let d = mumford_coords(ring);
    let (dn, g) = formulas::gamma_double_cleared(&d, l);
    let [a2, a4, ..] = &d;
    let dn2 = dn.sq();
    let t = &(2 * &(&g.g2 * &dn)) - &g.g1.sq(); // (2γ₂ − γ₁²)·D²
    let r1 = &(3 * &(a2 * &dn2)) - &t;
    let rhs = &(&(&(&(3 * &a2.sq()) * &dn2) - &(&(2 * a2) * &t)) + &(2 * &(&g.g4 * &dn)))
        + &(&g.g2.sq() - &(&l[0] * &g.g1.sq()));
    let r2 = &(3 * &(a4 * &dn2)) - &rhs;
    (dn, r1, r2)
}

/// The 4-torsion conditions β^[2Q] = 0 (2Q non-special) with D⁴ cleared,
/// and the condition y_{2Q} = 0 (2Q special) with (4N)⁵ cleared.
/// Returns (D, e₁D⁴, e₂D⁴, e′(4N)⁵).
pub fn four_torsion_mumford(
    ring: &PolyRing,
    l: &[WeightedPoly; 5],
) -> (WeightedPoly, WeightedPoly, WeightedPoly, WeightedPoly) {
    let d = mumford_coords(ring);
    let [a2, a4, b3, b5] = &d;
    let (dn, g) = formulas::gamma_double_cleared(&d, l);
    let dn2 = dn.sq();
    let dn3 = &dn2 * &dn;
    let g1s = g.g1.sq();
    let u = &(&(&(2 * a2) * &dn2) - &(&g.g2 * &dn)) + &g1s; // (2α₂ − γ₂ + γ₁²)D²
    let v = &(&g.g2 * &dn) - &g1s; // (γ₂ − γ₁²)D²
    let e1 = &(&(&(-&(&(2 * a4) + &a2.sq())) * &dn2.sq()) + &(&u * &v))
        + &(&(&g1s * &(&(&g.g2 * &dn) - &(&l[0] * &dn2))) + &(&g.g4 * &dn3));
    let w = &(&(&(-&(&(2 * a4) * &dn2)) + &(&(&(3 * &(a2 * &dn)) - &g.g2) * &(&(a2 * &dn) - &g.g2)))
        + &(&g1s * &(&(2 * a2) - &l[0])))
        + &(2 * &(&g.g4 * &dn));
    let e2 = &(&w * &u) - &(&g.g6 * &dn3);

    let (b3n, _) = formulas::tangent_numerators(&d, l);
    let m = 4 * &formulas::support_norm(&d);
    let m2 = m.sq();
    let xc = &(&(&(2 * a2) - &l[0]) * &m2) + &b3n.sq(); // X·M²
    let g3 = &(b3 * &m) + &(a2 * &b3n);
    let g5 = &(b5 * &m) + &(a4 * &b3n);
    let es = &(&(&(&b3n * &xc) + &(&g3 * &m2)) * &xc) + &(&g5 * &m2.sq());
    (dn, e1, e2, es)
}

/// The division polynomials for n ∈ {3, 4} with formal λ (`curve` = None)
/// or with the λ of a given curve.
pub fn emit_division_polynomials(
    n: u32,
    coords: CoordSystem,
    curve: Option<&CanonicalCurve>,
) -> Result<DivisionPolySet> {
    let field = curve.map_or_else(FieldSpec::rational, |c| c.field().clone());
    let formal = curve.is_none();
    let (names, polys): (Vec<&str>, Vec<WeightedPoly>) = match (n, coords) {
        (3, CoordSystem::Xy) => {
            let ring = xy_ring(&field, formal);
            let l = lambdas_in(&ring, curve)?;
            let (x, y) = three_torsion_xy(&ring, &l)?;
            (vec!["X", "Y"], vec![x, y])
        }
        (3, CoordSystem::Mumford) => {
            let ring = mumford_ring(&field, formal);
            let l = lambdas_in(&ring, curve)?;
            let (dn, r1, r2) = three_torsion_mumford(&ring, &l);
            (vec!["r1", "r2", "denominator"], vec![r1, r2, dn])
        }
        (4, CoordSystem::Mumford) => {
            let ring = mumford_ring(&field, formal);
            let l = lambdas_in(&ring, curve)?;
            let (dn, e1, e2, es) = four_torsion_mumford(&ring, &l);
            (
                vec!["e1", "e2", "e_special", "denominator"],
                vec![e1, e2, es, dn],
            )
        }
        (4, CoordSystem::Xy) => {
            return Err(Error::Unsupported(
                "4-torsion polynomials are given in Mumford coordinates only".into(),
            ))
        }
        (n, _) => return Err(Error::UnsupportedOrder(n as u64)),
    };
    Ok(DivisionPolySet {
        n,
        coords,
        names: names.into_iter().map(String::from).collect(),
        polys,
    })
}
