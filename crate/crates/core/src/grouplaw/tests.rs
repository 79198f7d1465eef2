use super::*;
use crate::cantororacle::CantorCurve;
use crate::exactfield::FieldSpec;
use crate::polyring::{PolyRing, RatFun};
use crate::scalar::Scalar;

fn f7() -> (CanonicalCurve, CantorCurve) {
    let f = FieldSpec::prime(7).unwrap();
    let c = CanonicalCurve::from_i64(&f, [0, 0, 0, 0, 1]).unwrap();
    let o = CantorCurve::from_canonical(&c).unwrap();
    (c, o)
}

fn pt(c: &CanonicalCurve, x: i64, y: i64) -> Point {
    Point::new(c.field().from_i64(x), c.field().from_i64(y))
}

#[test]
fn exhaustive_agreement_over_f7() {
    let (c, o) = f7();
    let all = o.enumerate().unwrap();
    for a in &all {
        let da = o.to_mumford(a);
        assert_eq!(double(&da, &c).unwrap(), o.to_mumford(&o.add(a, a)), "2·{da}");
        for b in &all {
            let db = o.to_mumford(b);
            let s = add(&da, &db, &c).unwrap();
            assert_eq!(s, o.to_mumford(&o.add(a, b)), "{da} + {db}");
            assert!(s.is_valid(&c));
        }
    }
}

#[test]
fn shared_point_and_clean_path() {
    let (c, o) = f7();
    let d1 = MumfordDivisor::from_points(&c, &pt(&c, 0, 1), &pt(&c, 1, 3)).unwrap();
    let d2 = MumfordDivisor::from_points(&c, &pt(&c, 0, 1), &pt(&c, 5, 2)).unwrap();
    let expect = |a: &MumfordDivisor, b: &MumfordDivisor| {
        o.to_mumford(&o.add(&o.from_mumford(a).unwrap(), &o.from_mumford(b).unwrap()))
    };
    let (s, br) = add_traced(&d1, &d2, &c).unwrap();
    assert_eq!(br, Branch::Overlap);
    assert_eq!(s, expect(&d1, &d2));
    assert_eq!(add_nonspecial(&d1, &d2, &c), Err(Error::SupportOverlap));
    let d3 = MumfordDivisor::from_points(&c, &pt(&c, 5, 2), &pt(&c, 6, 0)).unwrap();
    let (s, br) = add_traced(&d1, &d3, &c).unwrap();
    assert_eq!(s, expect(&d1, &d3));
    assert!(matches!(br, Branch::Generic | Branch::AddToSpecial));
}

#[test]
fn strict_variants_reject_their_preconditions() {
    let (c, _) = f7();
    let d1 = MumfordDivisor::from_points(&c, &pt(&c, 0, 1), &pt(&c, 1, 3)).unwrap();
    assert_eq!(add_nonspecial(&d1, &d1, &c), Err(Error::SameDivisor));
    assert_eq!(add_nonspecial(&d1, &d1.negate(), &c), Err(Error::InverseDivisors));
    assert_eq!(add(&d1, &d1.negate(), &c).unwrap(), MumfordDivisor::Neutral);
    assert_eq!(add_special(&d1, &pt(&c, 1, 4), &c), Err(Error::QInSupport));
    assert_eq!(add_points(&pt(&c, 1, 3), &pt(&c, 1, 4), &c), Err(Error::InvolutionPair));
    let t = MumfordDivisor::from_points(&c, &pt(&c, 6, 0), &pt(&c, 6, 0));
    assert_eq!(t, Err(Error::InvolutionPair));
    let e = MumfordDivisor::from_points(&c, &pt(&c, 6, 0), &pt(&c, 0, 1)).unwrap();
    assert_eq!(double_nonspecial(&e, &c), Err(Error::BranchPointInSupport));
    assert_eq!(double(&MumfordDivisor::Special(pt(&c, 6, 0)), &c).unwrap(), MumfordDivisor::Neutral);
}

#[test]
fn add_special_matches_oracle() {
    let (c, o) = f7();
    let d1 = MumfordDivisor::from_points(&c, &pt(&c, 0, 1), &pt(&c, 1, 3)).unwrap();
    let q = pt(&c, 5, 2);
    let s = add_special(&d1, &q, &c).unwrap();
    let sq = MumfordDivisor::Special(q);
    let expect = o.add(&o.from_mumford(&d1).unwrap(), &o.from_mumford(&sq).unwrap());
    assert_eq!(s, o.to_mumford(&expect));
}

#[test]
fn scalar_multiples_match_oracle() {
    for p in [7u64, 11, 13] {
        let f = FieldSpec::prime(p).unwrap();
        let c = CanonicalCurve::from_i64(&f, [0, 0, 0, 0, 1]).unwrap();
        let o = CantorCurve::from_canonical(&c).unwrap();
        for a in o.enumerate().unwrap().iter().step_by(5) {
            let d = o.to_mumford(a);
            for n in -3..=20 {
                assert_eq!(scalar_mul(n, &d, &c).unwrap(), o.to_mumford(&o.scalar_mul(n, a)));
            }
        }
    }
}

/// Formal symbols for two divisors P, Q and the curve.
fn formal_ring() -> PolyRing {
    PolyRing::with_default_weights(
        &FieldSpec::rational(),
        &[
            "alpha2_P", "alpha4_P", "beta3_P", "beta5_P", "alpha2_Q", "alpha4_Q", "beta3_Q",
            "beta5_Q", "lambda2", "lambda4", "lambda6", "lambda8", "lambda10", "x_Q", "y_Q",
            "nu1", "nu2", "nu3",
        ],
    )
    .unwrap()
}

fn sym(r: &PolyRing, name: &str) -> RatFun {
    RatFun::from_poly(r.v(name))
}

fn coords(r: &PolyRing, tag: &str) -> Coords<RatFun> {
    ["alpha2", "alpha4", "beta3", "beta5"].map(|n| sym(r, &format!("{n}_{tag}")))
}

fn lambdas(r: &PolyRing) -> [RatFun; 5] {
    ["lambda2", "lambda4", "lambda6", "lambda8", "lambda10"].map(|n| sym(r, n))
}

#[test]
fn addition_is_weight_homogeneous() {
    let r = formal_ring();
    let (p, q, l) = (coords(&r, "P"), coords(&r, "Q"), lambdas(&r));
    let g = formulas::gamma_add(&p, &q).unwrap();
    for (v, w) in [(&g.g1, 1), (&g.g2, 2), (&g.g4, 4), (&g.g6, 6)] {
        assert_eq!(v.homogeneous_weight(), Some(w));
    }
    let (a2, a4) = formulas::alpha_sum((&p[0], &p[1]), (&q[0], &q[1]), &g, &l[0]);
    assert_eq!(a2.homogeneous_weight(), Some(2));
    assert_eq!(a4.homogeneous_weight(), Some(4));
    let (b3, b5) = formulas::beta_from_gamma(&a2, &a4, &g).unwrap();
    assert_eq!(b3.homogeneous_weight(), Some(3));
    assert_eq!(b5.homogeneous_weight(), Some(5));
    let nu = (sym(&r, "nu1"), sym(&r, "nu2"), sym(&r, "nu3"));
    let (e2, e4) = formulas::alpha_sum_extended((&p[0], &p[1]), (&q[0], &q[1]), &g, (&nu.0, &nu.1, &nu.2));
    assert_eq!(e2.homogeneous_weight(), Some(2));
    assert_eq!(e4.homogeneous_weight(), Some(4));
}

#[test]
fn special_and_degenerate_laws_are_weight_homogeneous() {
    let r = formal_ring();
    let (p, q, l) = (coords(&r, "P"), coords(&r, "Q"), lambdas(&r));
    let (xq, yq) = (sym(&r, "x_Q"), sym(&r, "y_Q"));
    let g = formulas::gamma_add_special(&p, &xq, &yq).unwrap();
    let s = formulas::sum_special(&p, &xq, &g, &l);
    for (v, w) in s.iter().zip([2, 4, 3, 5]) {
        assert_eq!(v.homogeneous_weight(), Some(w));
    }
    // x of the degenerate sum, with γ₁ = −Δβ₃/Δα₂
    let g1 = p[2].sub(&q[2]).div(&p[0].sub(&q[0])).unwrap().neg();
    let x = p[0].add(&q[0]).add(&g1.sq()).sub(&l[0]);
    assert_eq!(x.homogeneous_weight(), Some(2));
}

#[test]
fn duplication_is_weight_homogeneous() {
    let r = formal_ring();
    let (p, l) = (coords(&r, "P"), lambdas(&r));
    let bp = formulas::tangent(&p, &l).unwrap();
    assert_eq!(bp.0.homogeneous_weight(), Some(1));
    assert_eq!(bp.1.homogeneous_weight(), Some(3));
    let g = formulas::gamma_double(&p, &bp).unwrap();
    assert_eq!(g.g1.homogeneous_weight(), Some(1));
    assert_eq!(g.g2.homogeneous_weight(), Some(2));
    let (a2, a4) = formulas::alpha_double(&p[0], &p[1], &g, &l[0]);
    assert_eq!(a2.homogeneous_weight(), Some(2));
    assert_eq!(a4.homogeneous_weight(), Some(4));
    let half_b = bp.0.div(&p[0].int(2)).unwrap();
    let x = p[0].scale(2).add(&half_b.sq()).sub(&l[0]);
    assert_eq!(x.homogeneous_weight(), Some(2));
}

#[test]
fn extended_alpha_matches_canonical_sum() {
    use rand::SeedableRng;
    let f = FieldSpec::prime(1009).unwrap();
    let nu = [3, 5, 7, 2, 11, 13, 17, 19].map(|v| f.from_i64(v));
    let g = GeneralCurve::new(&f, CurveModel::FormI(nu)).unwrap();
    let (c, map) = g.to_canonical().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 20 {
        let pts: Vec<Point> = (0..4).map(|_| g.random_point(&mut rng).unwrap()).collect();
        let canon: Vec<Point> = pts.iter().map(|p| map.forward(p).unwrap()).collect();
        let (Ok(pc), Ok(qc)) = (
            MumfordDivisor::from_points(&c, &canon[0], &canon[1]),
            MumfordDivisor::from_points(&c, &canon[2], &canon[3]),
        ) else {
            continue;
        };
        let (pi, qi) = (beta_from_canonical(&pc, &g).unwrap(), beta_from_canonical(&qc, &g).unwrap());
        if let Ok((s, Branch::Generic)) = add_traced(&pc, &qc, &c) {
            let (a2, a4) = add_extended_alpha(&pi, &qi, &g).unwrap();
            assert_eq!(s.coords().unwrap()[..2], [&a2, &a4]);
        }
        if let Ok((s, Branch::Double)) = double_traced(&pc, &c) {
            let (a2, a4) = double_extended_alpha(&pi, &g).unwrap();
            assert_eq!(s.coords().unwrap()[..2], [&a2, &a4]);
        }
        assert_eq!(beta_to_canonical(&pi, &g).unwrap(), pc);
        checked += 1;
    }
}
