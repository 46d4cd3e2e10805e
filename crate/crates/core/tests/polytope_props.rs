use std::sync::OnceLock;

use diapoly::polytope::{
    affine_hull_equations, check_inequality, facet_families, hull_dimension, IneqSense, Inequality, PointSet,
};
use diapoly::rational::{int, rat, Rational};
use diapoly::{lop, tsp};
use proptest::prelude::*;

fn lop3() -> &'static PointSet {
    static P: OnceLock<PointSet> = OnceLock::new();
    P.get_or_init(|| lop::diameter_polytope(3).unwrap())
}

fn lop3_families() -> &'static Vec<Inequality> {
    static F: OnceLock<Vec<Inequality>> = OnceLock::new();
    F.get_or_init(|| {
        facet_families(6, &lop::base_facets(3))
            .unwrap()
            .into_iter()
            .map(|f| f.inequality)
            .collect()
    })
}

/// `(a, a0)` plus `Σ λ_r (m_r, d_r)` over the hull equations.
fn shifted(ineq: &Inequality, ps: &PointSet, lambdas: &[(i64, i64)]) -> Inequality {
    let eqs = affine_hull_equations(ps).unwrap();
    let mut a = ineq.a.clone();
    let mut a0 = ineq.a0.clone();
    for (r, &(num, den)) in lambdas.iter().enumerate().take(eqs.rows()) {
        let lambda = rat(num, den);
        for (c, coef) in eqs.matrix().row(r).iter().enumerate() {
            a[c] += &lambda * coef;
        }
        a0 += &lambda * &eqs.rhs()[r];
    }
    Inequality { a, a0, sense: ineq.sense }
}

#[test]
fn hull_equations_are_tight_everywhere() {
    for ps in [lop3(), &tsp::diameter_polytope(4).unwrap()] {
        let eqs = affine_hull_equations(ps).unwrap();
        assert_eq!(eqs.rank(), ps.ambient() - hull_dimension(ps).unwrap());
        for (row, b) in eqs.matrix().row_iter().zip(eqs.rhs()) {
            for ineq in [Inequality::le(row.to_vec(), b.clone()), Inequality::ge(row.to_vec(), b.clone())] {
                let r = check_inequality(ps, &ineq).unwrap();
                assert!(r.valid);
                assert_eq!(r.tight_point_count, ps.len());
                assert!(!r.is_facet);
            }
        }
    }
}

#[test]
fn families_hold_on_lop2_and_lop3() {
    let p2 = lop::diameter_polytope(2).unwrap();
    for f in facet_families(2, &lop::base_facets(2)).unwrap() {
        assert!(check_inequality(&p2, &f.inequality).unwrap().is_facet, "{f:?}");
    }
    for f in lop3_families() {
        assert!(check_inequality(lop3(), f).unwrap().is_facet, "{f:?}");
    }
}

#[test]
fn z_upper_face_dimension() {
    // z_1_2 <= 1 on three items: a facet, so its face has dimension 11.
    let ineq = Inequality::sparse(18, &[(12, 1)], IneqSense::Le, 1);
    let r = check_inequality(lop3(), &ineq).unwrap();
    assert!(r.is_facet);
    assert_eq!((r.face_dimension, r.polytope_dimension), (11, 12));
}

#[test]
fn tsp4_fails_the_disjoint_pair_condition_but_keeps_the_dimension() {
    let report = diapoly::polytope::disjoint_pair_condition_from_points(&tsp::feasible_points(4).unwrap());
    assert!(!report.universal);
    assert!(!report.existential);
    assert!(report.counterexample.is_some());
    assert_eq!(hull_dimension(&tsp::diameter_polytope(4).unwrap()).unwrap(), 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn facet_status_survives_scaling_and_equation_shifts(
        which in 0usize..34,
        scale in (1i64..7, 1i64..7),
        lambdas in proptest::collection::vec((-4i64..5, 1i64..4), 6),
    ) {
        let f = &lop3_families()[which];
        let base = check_inequality(lop3(), f).unwrap();
        let k = rat(scale.0, scale.1);
        let scaled = Inequality {
            a: f.a.iter().map(|c| c * &k).collect(),
            a0: &f.a0 * &k,
            sense: f.sense,
        };
        let moved = shifted(&scaled, lop3(), &lambdas);
        let r = check_inequality(lop3(), &moved).unwrap();
        prop_assert_eq!(r, base);
    }

    #[test]
    fn arbitrary_valid_inequalities_keep_their_report_under_shifts(
        coeffs in proptest::collection::vec(-1i64..=1, 18),
        lambdas in proptest::collection::vec((-3i64..4, 1i64..3), 6),
    ) {
        // Make the inequality valid by taking the maximum over the points.
        let a: Vec<Rational> = coeffs.iter().map(|&c| int(c)).collect();
        let a0 = lop3()
            .iter()
            .map(|p| coeffs.iter().zip(p).map(|(c, &v)| c * v as i64).sum::<i64>())
            .max()
            .unwrap();
        let ineq = Inequality::le(a, int(a0));
        let base = check_inequality(lop3(), &ineq).unwrap();
        prop_assert!(base.valid);
        let r = check_inequality(lop3(), &shifted(&ineq, lop3(), &lambdas)).unwrap();
        prop_assert_eq!(r, base);
    }
}
