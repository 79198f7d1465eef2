//! Closed-form addition and duplication formulas, generic over [`Scalar`]
//! so they can be evaluated on field elements or on formal polynomials.
//!
//! Notation: a divisor is (α₂, α₄, β₃, β₅); λ = (λ₂, λ₄, λ₆, λ₈, λ₁₀).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mumford coordinates (α₂, α₄, β₃, β₅).
pub type Coords<S> = [S; 4];

/// Coefficients of R₆ = x³ + γ₁y + γ₂x² + γ₄x + γ₆.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamma6<S> {
    pub g1: S,
    pub g2: S,
    pub g4: S,
    pub g6: S,
}

/// Coefficients of R̃₅ = y + γ₁x² + γ₃x + γ₅.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamma5<S> {
    pub g1: S,
    pub g3: S,
    pub g5: S,
}

/// γ₄ and γ₆ from γ₁, γ₂ and one divisor through which R₆ passes:
/// γ₄ = α₂γ₂ + β₃γ₁ − (α₂² − α₄), γ₆ = α₄γ₂ + β₅γ₁ − α₂α₄.
fn complete_gamma6<S: Scalar>(d: &Coords<S>, g1: S, g2: S) -> Gamma6<S> {
    let [a2, a4, b3, b5] = d;
    let g4 = a2.mul(&g2).add(&b3.mul(&g1)).sub(&a2.sq().sub(a4));
    let g6 = a4.mul(&g2).add(&b5.mul(&g1)).sub(&a2.mul(a4));
    Gamma6 { g1, g2, g4, g6 }
}

/// The determinant of the 2×2 system for (γ₂, γ₁):
/// (α₄ᴾ − α₄^Q)(β₃ᴾ − β₃^Q) − (β₅ᴾ − β₅^Q)(α₂ᴾ − α₂^Q).
pub fn add_determinant<S: Scalar>(p: &Coords<S>, q: &Coords<S>) -> S {
    let d = |i: usize| p[i].sub(&q[i]);
    d(1).mul(&d(2)).sub(&d(3).mul(&d(0)))
}

/// γ of the weight-6 function through the supports of P and Q, by the
/// explicit inverse of
/// [[Δα₄, Δβ₅], [Δα₂, Δβ₃]]·(γ₂, γ₁) = (Δ(α₂α₄), Δ(α₂² − α₄)).
pub fn gamma_add<S: Scalar>(p: &Coords<S>, q: &Coords<S>) -> Result<Gamma6<S>> {
    let det = add_determinant(p, q);
    if det.is_zero() {
        return Err(Error::ConditionViolated("the gamma system is singular".into()));
    }
    let d = |i: usize| p[i].sub(&q[i]);
    let r1 = p[0].mul(&p[1]).sub(&q[0].mul(&q[1]));
    let r2 = p[0].sq().sub(&p[1]).sub(&q[0].sq().sub(&q[1]));
    let g2 = r1.mul(&d(2)).sub(&d(3).mul(&r2)).div(&det)?;
    let g1 = d(1).mul(&r2).sub(&d(0).mul(&r1)).div(&det)?;
    Ok(complete_gamma6(p, g1, g2))
}

/// α of the sum: the reduced divisor is cut out by R₆ together with P and Q.
/// α₂ = −α₂ᴾ − α₂^Q + 2γ₂ − γ₁²,
/// α₄ = −α₄ᴾ − α₄^Q + (α₂ᴾ)² + α₂ᴾα₂^Q + (α₂^Q)² − (α₂ᴾ + α₂^Q)(2γ₂ − γ₁²)
///      + 2γ₄ + γ₂² − λ₂γ₁².
pub fn alpha_sum<S: Scalar>(pa: (&S, &S), qa: (&S, &S), g: &Gamma6<S>, lambda2: &S) -> (S, S) {
    let (pa2, pa4) = pa;
    let (qa2, qa4) = qa;
    let t = g.g2.scale(2).sub(&g.g1.sq());
    let a2 = pa2.neg().sub(qa2).add(&t);
    let a4 = pa4
        .neg()
        .sub(qa4)
        .add(&pa2.sq())
        .add(&pa2.mul(qa2))
        .add(&qa2.sq())
        .sub(&pa2.add(qa2).mul(&t))
        .add(&g.g4.scale(2))
        .add(&g.g2.sq())
        .sub(&lambda2.mul(&g.g1.sq()));
    (a2, a4)
}

/// β of the sum from its α and the γ of R₆:
/// β₃ = −(α₂² − α₄ − γ₂α₂ + γ₄)/γ₁, β₅ = −(α₂α₄ − γ₂α₄ + γ₆)/γ₁.
pub fn beta_from_gamma<S: Scalar>(a2: &S, a4: &S, g: &Gamma6<S>) -> Result<(S, S)> {
    if g.g1.is_zero() {
        return Err(Error::GammaUndefined);
    }
    let n3 = a2.sq().sub(a4).sub(&g.g2.mul(a2)).add(&g.g4);
    let n5 = a2.mul(a4).sub(&g.g2.mul(a4)).add(&g.g6);
    Ok((n3.div(&g.g1)?.neg(), n5.div(&g.g1)?.neg()))
}

/// Reduce a polynomial (ascending coefficients) modulo x² + α₂x + α₄,
/// returning (r₁, r₀) for the remainder r₁x + r₀.
pub fn reduce_mod_r4<S: Scalar>(mut c: Vec<S>, a2: &S, a4: &S) -> (S, S) {
    let zero = a2.int(0);
    while c.len() < 2 {
        c.push(zero.clone());
    }
    for k in (2..c.len()).rev() {
        let top = c[k].clone();
        c[k - 1] = c[k - 1].sub(&a2.mul(&top));
        c[k - 2] = c[k - 2].sub(&a4.mul(&top));
    }
    (c[1].clone(), c[0].clone())
}

/// N = β₅² − α₂β₃β₅ + α₄β₃², which equals y₁y₂ on the support.
pub fn support_norm<S: Scalar>(d: &Coords<S>) -> S {
    let [a2, a4, b3, b5] = d;
    b5.sq().sub(&a2.mul(b3).mul(b5)).add(&a4.mul(&b3.sq()))
}

/// Numerators (B₃, B₅) of the tangent data β′₃ = B₃/(2N), β′₅ = B₅/(2N).
///
/// The slopes y′ᵢ = 𝒫′(xᵢ)/(2yᵢ) are interpolated by a linear function of
/// x: on the support 1/y = (β₃x + β₃α₂ − β₅)/N, so 2N·y′ is the remainder
/// w₁x + w₀ of 𝒫′(x)(β₃x + β₃α₂ − β₅) mod R₄. Then β′₃ = −w₁/(2N) and
/// β′₅ = −β₃ − w₀/(2N).
pub fn tangent_numerators<S: Scalar>(d: &Coords<S>, l: &[S; 5]) -> (S, S) {
    let [a2, a4, b3, b5] = d;
    // 𝒫′ = 5x⁴ + 4λ₂x³ + 3λ₄x² + 2λ₆x + λ₈
    let dp = [
        l[3].clone(),
        l[2].scale(2),
        l[1].scale(3),
        l[0].scale(4),
        a2.int(5),
    ];
    let lin = [b3.mul(a2).sub(b5), b3.clone()];
    let mut prod = vec![a2.int(0); 6];
    for (i, u) in dp.iter().enumerate() {
        for (j, v) in lin.iter().enumerate() {
            prod[i + j] = prod[i + j].add(&u.mul(v));
        }
    }
    let (w1, w0) = reduce_mod_r4(prod, a2, a4);
    let n2 = support_norm(d).scale(2);
    (w1.neg(), w0.neg().sub(&n2.mul(b3)))
}

/// (β′₃, β′₅), the derivatives of β₃, β₅ along d/dx₁ + d/dx₂.
pub fn tangent<S: Scalar>(d: &Coords<S>, l: &[S; 5]) -> Result<(S, S)> {
    let n2 = support_norm(d).scale(2);
    if n2.is_zero() {
        return Err(Error::BranchPointInSupport);
    }
    let (b3n, b5n) = tangent_numerators(d, l);
    Ok((b3n.div(&n2)?, b5n.div(&n2)?))
}

/// 2β′₅ − α₂β′₃, the denominator of the duplication γ.
pub fn double_denominator<S: Scalar>(a2: &S, bp: &(S, S)) -> S {
    bp.1.scale(2).sub(&a2.mul(&bp.0))
}

/// Duplication γ: γ₁ = (α₂² − 4α₄)/(2β′₅ − α₂β′₃),
/// γ₂ = (3α₂β′₅ − (α₂² + 2α₄)β′₃)/(2β′₅ − α₂β′₃).
pub fn gamma_double<S: Scalar>(d: &Coords<S>, bp: &(S, S)) -> Result<Gamma6<S>> {
    let [a2, a4, ..] = d;
    let den = double_denominator(a2, bp);
    if den.is_zero() {
        return Err(Error::ConditionViolated("2β′₅ = α₂β′₃".into()));
    }
    let g1 = a2.sq().sub(&a4.scale(4)).div(&den)?;
    let g2 = a2
        .mul(&bp.1)
        .scale(3)
        .sub(&a2.sq().add(&a4.scale(2)).mul(&bp.0))
        .div(&den)?;
    Ok(complete_gamma6(d, g1, g2))
}

/// Polynomial forms of the duplication γ with the common denominator
/// D = 2B₅ − α₂B₃ = 2N(2β′₅ − α₂β′₃) cleared: γ_k = G_k/D.
/// Returns (D, G₁, G₂, G₄, G₆).
pub fn gamma_double_cleared<S: Scalar>(d: &Coords<S>, l: &[S; 5]) -> (S, Gamma6<S>) {
    let [a2, a4, b3, b5] = d;
    let (b3n, b5n) = tangent_numerators(d, l);
    let dn = b5n.scale(2).sub(&a2.mul(&b3n));
    let g1 = support_norm(d).scale(2).mul(&a2.sq().sub(&a4.scale(4)));
    let g2 = a2.mul(&b5n).scale(3).sub(&a2.sq().add(&a4.scale(2)).mul(&b3n));
    let g4 = a2.mul(&g2).add(&b3.mul(&g1)).sub(&a2.sq().sub(a4).mul(&dn));
    let g6 = a4.mul(&g2).add(&b5.mul(&g1)).sub(&a2.mul(a4).mul(&dn));
    (dn, Gamma6 { g1, g2, g4, g6 })
}

/// α of 2D: α₂ = −2α₂ + 2γ₂ − γ₁²,
/// α₄ = −2α₄ + 3α₂² − 2α₂(2γ₂ − γ₁²) + 2γ₄ + γ₂² − λ₂γ₁².
pub fn alpha_double<S: Scalar>(a2: &S, a4: &S, g: &Gamma6<S>, lambda2: &S) -> (S, S) {
    alpha_sum((a2, a4), (a2, a4), g, lambda2)
}

/// γ of R̃₅ through the support of P and the point Q = (x, y); the common
/// denominator is R₄ᴾ(x) = x² + α₂ᴾx + α₄ᴾ.
pub fn gamma_add_special<S: Scalar>(p: &Coords<S>, xq: &S, yq: &S) -> Result<Gamma5<S>> {
    let [a2, a4, b3, b5] = p;
    let den = xq.sq().add(&xq.mul(a2)).add(a4);
    if den.is_zero() {
        return Err(Error::QInSupport);
    }
    let g1 = yq.add(&xq.mul(b3)).add(b5).neg().div(&den)?;
    let g3 = yq
        .mul(a2)
        .neg()
        .add(&xq.sq().mul(b3))
        .add(&a4.mul(b3))
        .sub(&a2.mul(b5))
        .div(&den)?;
    let g5 = yq
        .mul(a4)
        .neg()
        .add(&xq.sq().mul(b5))
        .sub(&xq.mul(&a4.mul(b3).sub(&a2.mul(b5))))
        .div(&den)?;
    Ok(Gamma5 { g1, g3, g5 })
}

/// Coordinates of P + Q from R̃₅:
/// α₂ = −α₂ᴾ + x_Q + λ₂ − γ₁²,
/// α₄ = −α₄ᴾ + (α₂ᴾ)² + (x_Q − α₂ᴾ)(x_Q + λ₂ − γ₁²) + λ₄ − 2γ₁γ₃,
/// β₃ = γ₁α₂ − γ₃, β₅ = γ₁α₄ − γ₅.
pub fn sum_special<S: Scalar>(p: &Coords<S>, xq: &S, g: &Gamma5<S>, l: &[S; 5]) -> Coords<S> {
    let [pa2, pa4, ..] = p;
    let s = xq.add(&l[0]).sub(&g.g1.sq());
    let a2 = pa2.neg().add(&s);
    let a4 = pa4
        .neg()
        .add(&pa2.sq())
        .add(&xq.sub(pa2).mul(&s))
        .add(&l[1])
        .sub(&g.g1.mul(&g.g3).scale(2));
    let b3 = g.g1.mul(&a2).sub(&g.g3);
    let b5 = g.g1.mul(&a4).sub(&g.g5);
    [a2, a4, b3, b5]
}

/// The point y = γ₁x² + γ₃x + γ₅ at x, on the far side of R̃₅.
fn point_on_r5<S: Scalar>(x: S, g: &Gamma5<S>) -> (S, S) {
    let y = g.g1.mul(&x).add(&g.g3).mul(&x).add(&g.g5);
    (x, y)
}

/// The degenerate sum D₄ ∼ D₁: when det = 0 a single R̃₅ passes through
/// both supports, γ₁ = −Δβ₃/Δα₂ (or −Δβ₅/Δα₄), γ₃ = α₂ᴾγ₁ + β₃ᴾ,
/// γ₅ = α₄ᴾγ₁ + β₅ᴾ, and P + Q is the point with
/// x = α₂ᴾ + α₂^Q + γ₁² − λ₂.
pub fn add_to_special_point<S: Scalar>(p: &Coords<S>, q: &Coords<S>, l: &[S; 5]) -> Result<(S, S)> {
    if !add_determinant(p, q).is_zero() {
        return Err(Error::ConditionViolated(
            "the gamma system is regular; use the generic law".into(),
        ));
    }
    let d = |i: usize| p[i].sub(&q[i]);
    let g1 = if !d(0).is_zero() {
        d(2).div(&d(0))?.neg()
    } else if !d(1).is_zero() {
        d(3).div(&d(1))?.neg()
    } else {
        return Err(Error::ConditionViolated("operands share R₄".into()));
    };
    let g3 = p[0].mul(&g1).add(&p[2]);
    let g5 = p[1].mul(&g1).add(&p[3]);
    let x = p[0].add(&q[0]).add(&g1.sq()).sub(&l[0]);
    Ok(point_on_r5(x, &Gamma5 { g1, g3, g5 }))
}

/// Doubling when 2β′₅ = α₂β′₃: γ₁ = β′₃/2, γ₃ = β₃ + α₂β′₃/2,
/// γ₅ = β₅ + α₄β′₃/2, and 2D is the point with x = 2α₂ + γ₁² − λ₂.
pub fn double_to_special_point<S: Scalar>(d: &Coords<S>, bp: &(S, S), l: &[S; 5]) -> Result<(S, S)> {
    let [a2, a4, b3, b5] = d;
    if !double_denominator(a2, bp).is_zero() {
        return Err(Error::ConditionViolated("2β′₅ ≠ α₂β′₃".into()));
    }
    let two = a2.int(2);
    let half_b = bp.0.div(&two)?;
    let g = Gamma5 {
        g1: half_b.clone(),
        g3: b3.add(&a2.mul(&half_b)),
        g5: b5.add(&a4.mul(&half_b)),
    };
    let x = a2.scale(2).add(&g.g1.sq()).sub(&l[0]);
    Ok(point_on_r5(x, &g))
}

/// α of P + Q on −y² + y(ν₁x² + ν₃x + ν₅) + x⁵ + ν₂x⁴ + … with γ taken in
/// the coordinates of that curve:
/// α₂ = −α₂ᴾ − α₂^Q + 2γ₂ − γ₁² + ν₁γ₁,
/// α₄ = −α₄ᴾ − α₄^Q + (α₂ᴾ)² + α₂ᴾα₂^Q + (α₂^Q)² − (α₂ᴾ + α₂^Q)(2γ₂ − γ₁² + ν₁γ₁)
///      + 2γ₄ + γ₂² + (ν₁γ₂ − ν₂γ₁ + ν₃)γ₁.
pub fn alpha_sum_extended<S: Scalar>(
    pa: (&S, &S),
    qa: (&S, &S),
    g: &Gamma6<S>,
    nu: (&S, &S, &S),
) -> (S, S) {
    let (pa2, pa4) = pa;
    let (qa2, qa4) = qa;
    let (n1, n2, n3) = nu;
    let t = g.g2.scale(2).sub(&g.g1.sq()).add(&n1.mul(&g.g1));
    let a2 = pa2.neg().sub(qa2).add(&t);
    let a4 = pa4
        .neg()
        .sub(qa4)
        .add(&pa2.sq())
        .add(&pa2.mul(qa2))
        .add(&qa2.sq())
        .sub(&pa2.add(qa2).mul(&t))
        .add(&g.g4.scale(2))
        .add(&g.g2.sq())
        .add(&n1.mul(&g.g2).sub(&n2.mul(&g.g1)).add(n3).mul(&g.g1));
    (a2, a4)
}
