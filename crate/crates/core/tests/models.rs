use diapoly::bpcore::{parse_lp, solve_bnb, solve_enumerate, to_lp, BinaryProgram, Sense, Status};
use diapoly::diameter::{
    build, choose_epsilon, diameter_by_enumeration, hamming, solve_diameter, verify_z_semantics, Certificate,
    DiameterOptions, EpsilonChoice, Variant,
};
use diapoly::error::Error;
use diapoly::rational::{int, rat};
use diapoly::verify::random_model;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(seed: u64, rational: bool) -> BinaryProgram {
    random_model(&mut ChaCha8Rng::seed_from_u64(seed), 6, 4, rational)
}

#[test]
fn unique_optimum_has_diameter_zero() {
    let mut bp = BinaryProgram::with_objective(vec![int(1), int(-1), int(2)]).unwrap();
    bp.add(vec![int(1), int(1), int(1)], Sense::Le, int(2)).unwrap();
    let dp = build(&bp, choose_epsilon(&bp), Variant::Full);
    let res = solve_diameter(&dp, &DiameterOptions::default()).unwrap();
    assert_eq!(res.diameter, 0);
    assert_eq!(res.x_star, vec![1, 0, 1]);
    assert_eq!(res.certificate, Certificate::Exact);
}

#[test]
fn infeasible_model_is_reported() {
    let mut bp = BinaryProgram::with_objective(vec![int(1), int(1)]).unwrap();
    bp.add(vec![int(1), int(1)], Sense::Ge, int(3)).unwrap();
    assert_eq!(solve_bnb(&bp).unwrap().status, Status::Infeasible);
    let dp = build(&bp, choose_epsilon(&bp), Variant::Full);
    assert!(matches!(solve_diameter(&dp, &DiameterOptions::default()), Err(Error::Infeasible)));
}

#[test]
fn user_epsilon_only_bounds() {
    let bp = BinaryProgram::with_objective(vec![int(0), int(0)]).unwrap();
    let dp = build(&bp, EpsilonChoice::user(rat(1, 2)).unwrap(), Variant::Full);
    let res = solve_diameter(&dp, &DiameterOptions::default()).unwrap();
    assert_eq!(res.certificate, Certificate::UpperBound);
    assert!(hamming(&res.x_star, &res.y_star) <= res.bound);
}

#[test]
fn lp_parse_rejects_constraints_before_objective() {
    assert!(parse_lp("Subject To\n c: x1 <= 1\nMaximize\n obj: x1\nBinary\n x1\nEnd\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), rational in any::<bool>()) {
        let bp = model(seed, rational);
        prop_assert_eq!(BinaryProgram::from_json(&bp.to_json()).unwrap(), bp);
    }

    #[test]
    fn exact_lp_round_trip_preserves_optimum(seed in any::<u64>()) {
        let bp = model(seed, false);
        let export = to_lp(&bp);
        prop_assert!(export.is_exact());
        let back = parse_lp(&export.text).unwrap();
        prop_assert_eq!(back.variables(), bp.variables());
        let (a, b) = (solve_enumerate(&bp, 20).unwrap(), solve_enumerate(&back, 20).unwrap());
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective(), b.objective());
    }

    #[test]
    fn full_variant_matches_enumeration(seed in any::<u64>(), rational in any::<bool>()) {
        let bp = model(seed, rational);
        let dp = build(&bp, choose_epsilon(&bp), Variant::Full);
        match solve_diameter(&dp, &DiameterOptions::default()) {
            Ok(res) => {
                prop_assert_eq!(res.certificate.clone(), Certificate::Exact);
                prop_assert!(verify_z_semantics(&res));
                prop_assert_eq!(res.diameter, diameter_by_enumeration(&bp, 20).unwrap());
                prop_assert_eq!(res.diameter, hamming(&res.x_star, &res.y_star));
                let sw = res.swapped();
                prop_assert!(dp.derived().is_feasible(&[sw.x_star, sw.y_star, sw.z_star].concat()).unwrap());
            }
            Err(Error::Infeasible) => prop_assert_eq!(solve_bnb(&bp).unwrap().status, Status::Infeasible),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn conjugate_variant_bounds_the_diameter(seed in any::<u64>()) {
        let bp = model(seed, false);
        let dp = build(&bp, choose_epsilon(&bp), Variant::Conjugate);
        if let Ok(res) = solve_diameter(&dp, &DiameterOptions::default()) {
            prop_assert_eq!(res.certificate.clone(), Certificate::UpperBound);
            prop_assert!(diameter_by_enumeration(&bp, 20).unwrap() <= res.bound);
        }
    }
}
