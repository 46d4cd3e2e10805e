//! Seeded verification suites.
//!
//! Each suite checks a group of claims about diameter programs and their
//! polytopes and records one [`Claim`] per statement, with the expected and
//! observed values. Randomized suites draw from a ChaCha generator seeded
//! from [`VerifyConfig::seed`], so reports are reproducible byte for byte.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bpcore::{
    enumerate_optimal_set, solve_bnb, solve_enumerate, BinaryProgram, Sense, DEFAULT_ENUMERATION_CAP,
};
use crate::diameter::{self, choose_epsilon, diameter_by_enumeration, solve_diameter, Certificate, DiameterOptions, Variant};
use crate::error::{Error, Result};
use crate::polytope::{
    check_inequality, disjoint_pair_condition_from_points, enumerate_facets_small, facet_families,
    hull_dimension, lift_equation_system, verify_minimal_system, Family, Inequality, PointSet,
};
use crate::rational::{int, rat};
use crate::{lop, tsp};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Dimensions,
    MinimalSystems,
    Facets,
    Epsilon,
    Kendall,
    Discordant,
    DisjointTours,
    Lifting,
    Solver,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Dimensions,
        Suite::MinimalSystems,
        Suite::Facets,
        Suite::Epsilon,
        Suite::Kendall,
        Suite::Discordant,
        Suite::DisjointTours,
        Suite::Lifting,
        Suite::Solver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dimensions => "dimensions",
            Suite::MinimalSystems => "minimal-systems",
            Suite::Facets => "facets",
            Suite::Epsilon => "epsilon",
            Suite::Kendall => "kendall",
            Suite::Discordant => "discordant",
            Suite::DisjointTours => "disjoint-tours",
            Suite::Lifting => "lifting",
            Suite::Solver => "solver",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Include the long-running scopes (ordering polytope on four items).
    pub long: bool,
    /// Number of random models or instances; `None` uses each suite's default.
    pub trials: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            long: false,
            trials: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl Claim {
    fn new(id: impl Into<String>, statement: impl Into<String>, expected: impl ToString, observed: impl ToString) -> Self {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        Self {
            id: id.into(),
            statement: statement.into(),
            passed: expected == observed,
            expected,
            observed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub long: bool,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let claims = match suite {
        Suite::Dimensions => dimensions(cfg)?,
        Suite::MinimalSystems => minimal_systems()?,
        Suite::Facets => facets()?,
        Suite::Epsilon => epsilon(&mut rng, cfg.trials.unwrap_or(50))?,
        Suite::Kendall => kendall(&mut rng, cfg.trials.unwrap_or(20))?,
        Suite::Discordant => discordant(&mut rng, cfg.trials.unwrap_or(20))?,
        Suite::DisjointTours => disjoint_tours(&mut rng, cfg.trials.unwrap_or(20))?,
        Suite::Lifting => lifting(cfg)?,
        Suite::Solver => solver(&mut rng, cfg.trials.unwrap_or(100))?,
    };
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        long: cfg.long,
        claims,
    })
}

/// A random feasible model: `n ∈ 1..=max_n`, up to `max_rows` rows with
/// coefficients in `[−3, 3]`, all satisfied by a hidden random point.
/// Objective coefficients are small integers (ties are common); with
/// `rational` some get denominators up to 4.
pub fn random_model(rng: &mut impl Rng, max_n: usize, max_rows: usize, rational: bool) -> BinaryProgram {
    let n = rng.gen_range(1..=max_n);
    let hidden: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    let objective = (0..n)
        .map(|_| {
            let num = rng.gen_range(-3..=3);
            if rational && rng.gen_bool(0.3) {
                rat(num, rng.gen_range(1..=4))
            } else {
                int(num)
            }
        })
        .collect();
    let mut bp = BinaryProgram::with_objective(objective).expect("n ≥ 1").named("random");
    for _ in 0..rng.gen_range(0..=max_rows) {
        let row: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let at_hidden: i64 = row.iter().zip(&hidden).map(|(a, x)| a * x).sum();
        let (sense, rhs) = match rng.gen_range(0..6) {
            0 => (Sense::Eq, at_hidden),
            1 => (Sense::Ge, at_hidden - rng.gen_range(0..=2)),
            _ => (Sense::Le, at_hidden + rng.gen_range(0..=2)),
        };
        bp.add(row.into_iter().map(int).collect(), sense, int(rhs)).expect("row length n");
    }
    bp
}

pub fn random_lop(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> lop::LopInstance {
    let mut inst = lop::LopInstance::zero(n).expect("n ≥ 2");
    for (i, j) in lop::pairs(n) {
        inst.set(i, j, int(rng.gen_range(lo..=hi))).expect("valid pair");
    }
    inst
}

pub fn random_tsp(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> tsp::TspInstance {
    let mut inst = tsp::TspInstance::zero(n).expect("n ≥ 3");
    for (i, j) in tsp::edges(n) {
        inst.set(i, j, int(rng.gen_range(lo..=hi))).expect("valid edge");
    }
    inst
}

pub fn random_tour(rng: &mut impl Rng, n: usize) -> tsp::Tour {
    let mut cycle: Vec<usize> = (1..=n).collect();
    cycle.shuffle(rng);
    tsp::Tour::new(cycle).expect("a shuffle of 1..=n")
}

fn dimensions(cfg: &VerifyConfig) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for n in [2usize, 3] {
        let ps = lop::diameter_polytope(n)?;
        claims.push(Claim::new(
            format!("lop-{n}-dim"),
            format!("dim of the ordering diameter polytope on {n} items is 2n(n-1)"),
            2 * n * (n - 1),
            hull_dimension(&ps)?,
        ));
    }
    for n in [4usize, 5] {
        let ps = tsp::diameter_polytope(n)?;
        claims.push(Claim::new(
            format!("tsp-{n}-dim"),
            format!("dim of the tour diameter polytope on {n} cities is (3n^2-7n)/2"),
            (3 * n * n - 7 * n) / 2,
            hull_dimension(&ps)?,
        ));
    }
    if cfg.long {
        let ps = lop::diameter_polytope(4)?;
        claims.push(Claim::new(
            "lop-4-count",
            "the ordering diameter polytope on 4 items has 483,840 points",
            483_840,
            ps.len(),
        ));
        claims.push(Claim::new(
            "lop-4-dim",
            "dim of the ordering diameter polytope on 4 items is 2n(n-1)",
            24,
            hull_dimension(&ps)?,
        ));
    }
    Ok(claims)
}

fn minimal_systems() -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for n in [2usize, 3] {
        let ps = lop::diameter_polytope(n)?;
        let lifted = lift_equation_system(&lop::base_equation_system(n), lop::variable_count(n))?;
        claims.push(Claim::new(
            format!("lop-{n}-minimal"),
            format!("lifted symmetry equations are a minimal system for {n} items"),
            true,
            verify_minimal_system(&ps, &lifted)?,
        ));
        claims.push(Claim::new(
            format!("lop-{n}-minimal-minus-row"),
            format!("dropping a lifted equation breaks minimality for {n} items"),
            false,
            verify_minimal_system(&ps, &lifted.without_row(0))?,
        ));
    }
    for n in [4usize, 5] {
        let ps = tsp::diameter_polytope(n)?;
        let lifted = lift_equation_system(&tsp::degree_system(n), tsp::edge_count(n))?;
        claims.push(Claim::new(
            format!("tsp-{n}-minimal"),
            format!("lifted degree equations are a minimal system for {n} cities"),
            true,
            verify_minimal_system(&ps, &lifted)?,
        ));
    }
    Ok(claims)
}

/// `(family, certified, total)` per family, in family order.
fn certify_families(ps: &PointSet, n: usize, base: &[Inequality]) -> Result<Vec<(Family, usize, usize)>> {
    let mut out: Vec<(Family, usize, usize)> = Vec::new();
    for f in facet_families(n, base)? {
        let ok = check_inequality(ps, &f.inequality)?.is_facet as usize;
        match out.last_mut() {
            Some((family, certified, total)) if *family == f.family => {
                *certified += ok;
                *total += 1;
            }
            _ => out.push((f.family, ok, 1)),
        }
    }
    Ok(out)
}

fn base_facet_claim(id: String, statement: String, points: Vec<Vec<u8>>, base: &[Inequality]) -> Result<Claim> {
    let ambient = points[0].len();
    let ps = PointSet::new(ambient, points, "base")?;
    let mut certified = 0;
    for f in base {
        certified += check_inequality(&ps, f)?.is_facet as usize;
    }
    Ok(Claim::new(id, statement, base.len(), certified))
}

fn facets() -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let cases: [(&str, usize, usize, PointSet, Vec<Inequality>, Vec<Vec<u8>>); 3] = [
        ("lop", 2, lop::variable_count(2), lop::diameter_polytope(2)?, lop::base_facets(2), lop::feasible_points(2)?),
        ("lop", 3, lop::variable_count(3), lop::diameter_polytope(3)?, lop::base_facets(3), lop::feasible_points(3)?),
        ("tsp", 5, tsp::edge_count(5), tsp::diameter_polytope(5)?, tsp::base_facets(5), tsp::feasible_points(5)?),
    ];
    for (kind, size, n, ps, base, feasible) in cases {
        if !(kind == "lop" && size == 2) {
            claims.push(base_facet_claim(
                format!("{kind}-{size}-base-facets"),
                format!("supplied base inequalities define facets of the {kind} polytope, size {size}"),
                feasible.clone(),
                &base,
            )?);
        }
        let report = disjoint_pair_condition_from_points(&feasible);
        claims.push(Claim::new(
            format!("{kind}-{size}-disjoint-pairs"),
            format!("every feasible {kind} point of size {size} has a disjoint partner"),
            true,
            report.universal,
        ));
        claims.push(Claim::new(
            format!("{kind}-{size}-no-fixed-coordinates"),
            format!("no coordinate of the {kind} diameter polytope of size {size} is fixed"),
            0,
            ps.fixed_coordinates().len(),
        ));
        for (family, certified, total) in certify_families(&ps, n, &base)? {
            claims.push(Claim::new(
                format!("{kind}-{size}-{family}"),
                format!("{family} inequalities define facets of the {kind} diameter polytope, size {size}"),
                total,
                certified,
            ));
        }
    }

    let report = disjoint_pair_condition_from_points(&tsp::feasible_points(4)?);
    claims.push(Claim::new(
        "tsp-4-disjoint-pairs",
        "some 4-city tour has no edge-disjoint partner",
        false,
        report.universal,
    ));
    let ps = tsp::diameter_polytope(4)?;
    for (k, f) in tsp::extra_facets_n4().iter().enumerate() {
        let r = check_inequality(&ps, f)?;
        claims.push(Claim::new(
            format!("tsp-4-extra-{}", k + 1),
            "x12 + x13 + y12 + y24 + z(23|14) >= 3 is valid and facet-defining for 4 cities",
            "valid facet",
            match (r.valid, r.is_facet) {
                (true, true) => "valid facet".to_string(),
                _ => format!("valid={} face_dim={} dim={}", r.valid, r.face_dimension, r.polytope_dimension),
            },
        ));
    }
    Ok(claims)
}

fn epsilon(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for t in 0..trials {
        let bp = random_model(rng, 10, 6, false);
        let eps = choose_epsilon(&bp);
        let dp = diameter::build(&bp, eps.clone(), Variant::Full);
        let res = solve_diameter(&dp, &DiameterOptions::default())?;
        let opt = enumerate_optimal_set(&bp, DEFAULT_ENUMERATION_CAP)?;
        let in_opt = |v: &[u8]| opt.iter().any(|s| s.assignment == v);
        let oracle = diameter_by_enumeration(&bp, DEFAULT_ENUMERATION_CAP)?;
        let observed = if !in_opt(&res.x_star) || !in_opt(&res.y_star) {
            "pair outside Opt".to_string()
        } else if res.certificate != Certificate::Exact {
            format!("certificate {:?}", res.certificate)
        } else {
            res.diameter.to_string()
        };
        claims.push(Claim::new(
            format!("epsilon-{t}"),
            format!("eps = {} on a random model with n = {} gives optimal x*, y* at the enumerated diameter", eps.value(), bp.n()),
            oracle,
            observed,
        ));
    }
    Ok(claims)
}

fn kendall(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<Claim>> {
    (0..trials)
        .map(|t| {
            let inst = random_lop(rng, 4, -5, 5);
            let check = lop::diameter_check_kendall(&inst, &DiameterOptions::default())?;
            Ok(Claim::new(
                format!("kendall-{t}"),
                "diameter of a random 4-item ordering instance is twice the largest Kendall tau among optima",
                check.via_oracle,
                check.via_program,
            ))
        })
        .collect()
}

fn discordant(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<Claim>> {
    (0..trials)
        .map(|t| {
            let n = if t % 2 == 0 { 5 } else { 6 };
            let inst = random_tsp(rng, n, 1, 9);
            let check = tsp::diameter_check_discordant(&inst, &DiameterOptions::default())?;
            Ok(Claim::new(
                format!("discordant-{t}"),
                format!("diameter of a random {n}-city instance is twice the largest one-sided edge difference among optimal tours"),
                check.via_oracle,
                check.via_program,
            ))
        })
        .collect()
}

fn disjoint_claim(id: String, t: &tsp::Tour) -> Result<Claim> {
    let observed = match tsp::find_disjoint_tour(t) {
        Some(d) => tsp::discordant_edges(t, &d)?.to_string(),
        None => "absent".to_string(),
    };
    Ok(Claim::new(
        id,
        format!("tour {:?} has an edge-disjoint partner", t.cycle()),
        2 * t.n(),
        observed,
    ))
}

fn disjoint_tours(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for (k, t) in tsp::Tour::all(4)?.iter().enumerate() {
        let found = tsp::find_disjoint_tour(t);
        claims.push(Claim::new(
            format!("disjoint-4-{k}"),
            format!("4-city tour {:?} has no edge-disjoint partner", t.cycle()),
            "absent",
            found.map_or("absent".to_string(), |d| format!("{:?}", d.cycle())),
        ));
    }
    for (k, t) in tsp::Tour::all(5)?.iter().enumerate() {
        claims.push(disjoint_claim(format!("disjoint-5-{k}"), t)?);
    }
    for n in [6usize, 7] {
        for k in 0..trials {
            claims.push(disjoint_claim(format!("disjoint-{n}-{k}"), &random_tour(rng, n))?);
        }
    }
    Ok(claims)
}

/// Subset budget for the exhaustive facet search on the 2-item polytope.
const SMALL_FACET_CAP: usize = 100_000;

fn lifting(cfg: &VerifyConfig) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let p2 = lop::diameter_polytope(2)?;
    let p3 = lop::diameter_polytope(3)?;
    let facets = enumerate_facets_small(&p2, SMALL_FACET_CAP)?;
    let mut certified_here = 0;
    let mut certified_lifted = 0;
    for f in &facets {
        certified_here += check_inequality(&p2, f)?.is_facet as usize;
        certified_lifted += check_inequality(&p3, &lop::lift_inequality(f, 2)?)?.is_facet as usize;
    }
    claims.push(Claim::new(
        "lop-2-facets-certified",
        "every facet found on the 2-item ordering diameter polytope is certified there",
        facets.len(),
        certified_here,
    ));
    claims.push(Claim::new(
        "lop-2-to-3-lifted",
        "every facet of the 2-item polytope lifts to a facet on 3 items",
        facets.len(),
        certified_lifted,
    ));
    if cfg.long {
        let p4 = lop::diameter_polytope(4)?;
        let fam = facet_families(lop::variable_count(3), &lop::base_facets(3))?;
        let mut ok = 0;
        for f in &fam {
            ok += check_inequality(&p4, &lop::lift_inequality(&f.inequality, 3)?)?.is_facet as usize;
        }
        claims.push(Claim::new(
            "lop-3-to-4-lifted",
            "every family facet on 3 items lifts to a facet on 4 items",
            fam.len(),
            ok,
        ));
    }
    Ok(claims)
}

fn solver(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<Claim>> {
    (0..trials)
        .map(|t| {
            let bp = random_model(rng, 12, 6, true);
            let fast = solve_bnb(&bp)?;
            let slow = solve_enumerate(&bp, DEFAULT_ENUMERATION_CAP)?;
            let show = |r: &crate::bpcore::SolveReport| {
                format!("{:?} {}", r.status, r.objective().map_or("-".to_string(), |v| v.to_string()))
            };
            Ok(Claim::new(
                format!("solver-{t}"),
                format!("branch and bound matches exhaustive scan on a random model with n = {}", bp.n()),
                show(&slow),
                show(&fast),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_models_are_feasible_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let (m1, m2) = (random_model(&mut a, 10, 6, true), random_model(&mut b, 10, 6, true));
            assert_eq!(m1, m2);
            assert!(m1.n() <= 10 && m1.constraints().len() <= 6);
            assert_eq!(solve_enumerate(&m1, 26).unwrap().status, crate::bpcore::Status::Optimal);
        }
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig {
            trials: Some(3),
            ..VerifyConfig::default()
        };
        for s in [Suite::Solver, Suite::Epsilon, Suite::Kendall, Suite::DisjointTours] {
            let r = run(s, &cfg).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
