use super::*;
use crate::cantororacle::CantorCurve;
use crate::exactfield::FieldSpec;

fn curve(p: u64, l: [i64; 5]) -> (CanonicalCurve, CantorCurve) {
    let f = FieldSpec::prime(p).unwrap();
    let c = CanonicalCurve::from_i64(&f, l).unwrap();
    let o = CantorCurve::from_canonical(&c).unwrap();
    (c, o)
}

fn oracle_torsion(o: &CantorCurve, n: u64) -> Vec<MumfordDivisor> {
    let mut v: Vec<_> = o
        .brute_force_n_torsion(n)
        .unwrap()
        .iter()
        .map(|d| o.to_mumford(d))
        .collect();
    v.sort();
    v
}

const CURVES: [(u64, [i64; 5]); 9] = [
    (7, [0, 0, 0, 0, 1]),
    (7, [0, 1, 0, 1, 6]),
    (7, [0, 3, 0, 1, 2]),
    (7, [0, 3, 0, 1, 5]),
    (11, [0, 1, 0, 4, 7]),
    (11, [0, 1, 0, 9, 4]),
    (11, [0, 3, 0, 1, 5]),
    (13, [0, 0, 0, 4, 5]),
    (13, [2, 0, 1, 4, 6]),
];

#[test]
fn three_torsion_x_is_symmetric_of_weight_40() {
    let ring = xy_ring(&FieldSpec::rational(), true);
    let l = lambdas_in(&ring, None).unwrap();
    let (x, y) = three_torsion_xy(&ring, &l).unwrap();
    assert!(x.is_homogeneous());
    assert_eq!(x.weighted_degree(), Some(40));
    let swapped = x
        .substitute_vars(&[("x_1", ring.v("x_2")), ("x_2", ring.v("x_1"))])
        .unwrap();
    assert_eq!(swapped, x);
    assert!(y.is_homogeneous());
}

#[test]
fn t_representations_agree() {
    let ring = xy_ring(&FieldSpec::rational(), true);
    let l = lambdas_in(&ring, None).unwrap();
    for i in 1..=2 {
        assert_eq!(t_poly(&ring, &l, i).unwrap(), t_poly_expanded(&ring, &l, i).unwrap());
    }
}

#[test]
fn elimination_reproduces_x() {
    let ring = xy_ring(&FieldSpec::rational(), true);
    let l = lambdas_in(&ring, None).unwrap();
    let (x, _) = three_torsion_xy(&ring, &l).unwrap();
    let e = three_torsion_x_by_elimination(&ring, &l).unwrap();
    assert!(e == x || e == -&x);
}

#[test]
fn two_torsion_over_f11() {
    let (c, o) = curve(11, [0, 0, 0, 0, 1]);
    let t = two_torsion_divisors(&c);
    assert_eq!(t.len(), 15);
    assert_eq!(t.iter().filter(|d| matches!(d, MumfordDivisor::Special(_))).count(), 5);
    assert_eq!(t, oracle_torsion(&o, 2));
}

#[test]
fn two_torsion_matches_oracle() {
    for (p, l) in CURVES {
        let (c, o) = curve(p, l);
        assert_eq!(two_torsion_divisors(&c), oracle_torsion(&o, 2), "p={p} {l:?}");
    }
}

#[test]
fn three_torsion_matches_oracle() {
    let mut total = 0;
    for (p, l) in CURVES {
        let (c, o) = curve(p, l);
        let found = find_three_torsion(&c).unwrap();
        assert_eq!(found, oracle_torsion(&o, 3), "p={p} {l:?}");
        total += found.len();
    }
    assert!(total > 20);
}

#[test]
fn four_torsion_matches_oracle() {
    let mut total = 0;
    for (p, l) in CURVES {
        let (c, o) = curve(p, l);
        let found = find_four_torsion(&c).unwrap();
        assert_eq!(found, oracle_torsion(&o, 4), "p={p} {l:?}");
        total += found.len();
    }
    assert!(total > 20);
}

#[test]
fn mumford_residuals_vanish_on_three_torsion() {
    for (p, l) in CURVES {
        let (c, _) = curve(p, l);
        let ring = mumford_ring(c.field(), false);
        let lp = lambdas_in(&ring, Some(&c)).unwrap();
        let (dn, r1, r2) = three_torsion_mumford(&ring, &lp);
        for d in nonspecial_divisors(&c).unwrap() {
            let Ok((a, b)) = three_torsion_mumford_residuals(&d, &c) else {
                continue;
            };
            let three = is_torsion(&d, 3, &c).unwrap();
            assert_eq!(a.is_zero() && b.is_zero(), three, "{d}");
            let MumfordDivisor::NonSpecial { alpha2, alpha4, beta3, beta5 } = &d else {
                unreachable!()
            };
            let vals = [alpha2.clone(), alpha4.clone(), beta3.clone(), beta5.clone()];
            let dv = dn.evaluate(&vals).unwrap();
            if !dv.is_zero() {
                let d2 = dv.square();
                assert_eq!(r1.evaluate(&vals).unwrap(), &a * &d2);
                assert_eq!(r2.evaluate(&vals).unwrap(), &b * &d2);
            }
        }
    }
}

#[test]
fn four_torsion_branches_are_consistent() {
    for (p, l) in CURVES {
        let (c, _) = curve(p, l);
        for d in find_four_torsion(&c).unwrap() {
            let r = four_torsion_residuals(&d, &c).unwrap();
            assert!(r.vanish());
            let twice = grouplaw::double(&d, &c).unwrap();
            match r {
                FourTorsionResiduals::NonSpecial(_) => assert!(twice.is_two_torsion(), "{d}"),
                FourTorsionResiduals::Special(_) => {
                    assert!(matches!(twice, MumfordDivisor::Special(_)), "{d}")
                }
            }
        }
    }
}

#[test]
fn two_torsion_has_no_four_torsion_residuals() {
    let (c, _) = curve(11, [0, 0, 0, 0, 1]);
    for d in two_torsion_divisors(&c) {
        if !matches!(d, MumfordDivisor::Special(_)) {
            assert_eq!(four_torsion_residuals(&d, &c), Err(Error::TwoTorsion));
        }
    }
}

#[test]
fn emit_reports_supported_orders() {
    assert!(matches!(
        emit_division_polynomials(5, CoordSystem::Mumford, None),
        Err(Error::UnsupportedOrder(5))
    ));
    let (c, _) = curve(7, [0, 0, 0, 0, 1]);
    let set = emit_division_polynomials(3, CoordSystem::Xy, Some(&c)).unwrap();
    assert!(set.get("X").is_some() && set.get("Y").is_some());
}

#[test]
fn two_torsion_over_rationals() {
    let f = FieldSpec::rational();
    let c = CanonicalCurve::from_i64(&f, [0, 0, 0, 0, 1]).unwrap();
    assert_eq!(
        two_torsion_divisors(&c),
        vec![MumfordDivisor::Special(Point::new(f.from_i64(-1), f.zero()))]
    );
    assert!(find_three_torsion(&c).is_err());
}

#[test]
fn searches_need_the_quadratic_extension() {
    let (c, _) = curve(7, [0, 0, 0, 0, 1]);
    let f = FieldSpec::galois(7, 3).unwrap();
    let c3 = c.base_change(&f, |v| f.from_coeffs(&v.coordinates())).unwrap();
    assert!(matches!(find_three_torsion(&c3), Err(Error::NoQuadraticExtension(_))));
    assert!(matches!(find_four_torsion(&c3), Err(Error::NoQuadraticExtension(_))));
    assert_eq!(two_torsion_divisors(&c3).len(), 1);
}
