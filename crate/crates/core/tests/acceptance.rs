//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (no libtest harness) so the PASS/FAIL lines are
//! always printed. Set `DIAPOLY_LONG=1` to include the long-running scopes.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use diapoly::diameter::{self, choose_epsilon, Variant};
use diapoly::polytope::{
    check_inequality, enumerate_facets_small, facet_families, hull_dimension, lift_equation_system,
    verify_minimal_system, Inequality, PointSet,
};
use diapoly::rational::{int, Rational};
use diapoly::ratlinalg::RatMatrix;
use diapoly::verify::{self, Suite, SuiteReport, VerifyConfig};
use diapoly::{lop, tsp};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn lib<T>(r: diapoly::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Affine dimension by dense exact elimination on all point differences.
fn dense_dimension(ps: &PointSet) -> usize {
    let p0: Vec<i64> = ps.point(0).iter().map(|&v| v as i64).collect();
    let rows = ps
        .iter()
        .skip(1)
        .map(|p| p.iter().zip(&p0).map(|(&a, b)| int(a as i64 - b)).collect())
        .collect();
    RatMatrix::from_rows(ps.ambient(), rows).unwrap().rank()
}

/// Every 0/1 vector over `3n` coordinates that satisfies the derived rows.
fn brute_force_points(bp: &diapoly::bpcore::BinaryProgram) -> Vec<Vec<u8>> {
    let dp = diameter::build(bp, choose_epsilon(bp), Variant::Conjugate);
    let m = dp.derived().n();
    (0u64..1 << m)
        .map(|mask| (0..m).map(|i| (mask >> (m - 1 - i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|p| dp.derived().is_feasible(p).unwrap())
        .collect()
}

fn same_points(ps: &PointSet, mut brute: Vec<Vec<u8>>) -> bool {
    brute.sort();
    ps.len() == brute.len() && ps.iter().zip(&brute).all(|(a, b)| a == b.as_slice())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        let ps = lib(lop::diameter_polytope(n))?;
        let dim = lib(hull_dimension(&ps))?;
        ensure(dim == 2 * n * (n - 1), || format!("n={n}: dimension {dim}, expected {}", 2 * n * (n - 1)))?;
        let dense = dense_dimension(&ps);
        ensure(dense == dim, || format!("n={n}: dense elimination gives {dense}, incremental {dim}"))?;
        let brute = brute_force_points(&lop::build(&lib(lop::LopInstance::zero(n))?));
        ensure(same_points(&ps, brute), || format!("n={n}: structured points differ from the brute-force scan"))?;
        notes.push(format!("n={n}: {} points, dim {dim}", ps.len()));
    }
    within(Duration::from_secs(10), start)?;
    if long_enabled() {
        let ps = lib(lop::diameter_polytope(4))?;
        ensure(ps.len() == 483_840, || format!("n=4: {} points, expected 483840", ps.len()))?;
        let dim = lib(hull_dimension(&ps))?;
        ensure(dim == 24, || format!("n=4: dimension {dim}, expected 24"))?;
        notes.push(format!("n=4: {} points, dim {dim}", ps.len()));
    } else {
        notes.push("n=4 skipped (set DIAPOLY_LONG=1)".into());
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, expected) in [(4usize, 10usize), (5, 20)] {
        let ps = lib(tsp::diameter_polytope(n))?;
        let dim = lib(hull_dimension(&ps))?;
        ensure(dim == expected, || format!("n={n}: dimension {dim}, expected {expected}"))?;
        notes.push(format!("n={n}: {} points, dim {dim}", ps.len()));
    }
    let p4 = lib(tsp::diameter_polytope(4))?;
    ensure(dense_dimension(&p4) == 10, || "n=4: dense elimination disagrees".into())?;
    let brute = brute_force_points(&lib(tsp::build(&lib(tsp::TspInstance::zero(4))?))?);
    ensure(same_points(&p4, brute), || "n=4: structured points differ from the brute-force scan".into())?;
    within(Duration::from_secs(30), start)?;
    Ok(notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        let ps = lib(lop::diameter_polytope(n))?;
        let sys = lib(lift_equation_system(&lop::base_equation_system(n), lop::variable_count(n)))?;
        ensure(lib(verify_minimal_system(&ps, &sys))?, || format!("lop n={n}: lifted system not minimal"))?;
        ensure(!lib(verify_minimal_system(&ps, &sys.without_row(0)))?, || {
            format!("lop n={n}: system minus a row still passes")
        })?;
        notes.push(format!("lop n={n}: rank {} of {} columns", sys.rank(), sys.cols()));
    }
    for n in [4usize, 5] {
        let ps = lib(tsp::diameter_polytope(n))?;
        let sys = lib(lift_equation_system(&tsp::degree_system(n), tsp::edge_count(n)))?;
        ensure(lib(verify_minimal_system(&ps, &sys))?, || format!("tsp n={n}: lifted system not minimal"))?;
        notes.push(format!("tsp n={n}: rank {} of {} columns", sys.rank(), sys.cols()));
    }
    Ok(notes.join("; "))
}

fn fixture(name: &str) -> Result<Vec<Inequality>, String> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    lib(Inequality::list_from_json(&text))
}

fn certify_all(label: &str, ps: &PointSet, n: usize, base: &[Inequality]) -> Result<usize, String> {
    let fam = lib(facet_families(n, base))?;
    ensure(fam.len() == 2 * base.len() + 3 * n, || format!("{label}: {} family members", fam.len()))?;
    for f in &fam {
        let r = lib(check_inequality(ps, &f.inequality))?;
        ensure(r.is_facet, || format!("{label}: {} #{} not a facet: {r:?}", f.family, f.index))?;
    }
    Ok(fam.len())
}

fn base_facets_hold(label: &str, points: Vec<Vec<u8>>, base: &[Inequality]) -> Result<(), String> {
    let ps = lib(PointSet::new(points[0].len(), points, "base"))?;
    for (k, f) in base.iter().enumerate() {
        let r = lib(check_inequality(&ps, f))?;
        ensure(r.is_facet, || format!("{label}: fixture #{k} is not a base facet: {r:?}"))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let lop_base = fixture("lop3_base_facets.json")?;
    ensure(lop_base == lop::base_facets(3), || "lop fixture differs from lop::base_facets".into())?;
    base_facets_hold("lop n=3", lib(lop::feasible_points(3))?, &lop_base)?;
    let lop_count = certify_all("lop n=3", &lib(lop::diameter_polytope(3))?, 6, &lop_base)?;

    let tsp_base = fixture("tsp5_base_facets.json")?;
    ensure(tsp_base == tsp::base_facets(5), || "tsp fixture differs from tsp::base_facets".into())?;
    base_facets_hold("tsp n=5", lib(tsp::feasible_points(5))?, &tsp_base)?;
    let tsp_count = certify_all("tsp n=5", &lib(tsp::diameter_polytope(5))?, 10, &tsp_base)?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("lop n=3: {lop_count}/{lop_count} facets; tsp n=5: {tsp_count}/{tsp_count} facets"))
}

fn criterion_5() -> Outcome {
    // Edge order for n = 4: 12 13 14 23 24 34; blocks x, y, z of 6 each.
    let make = |z: usize| {
        let mut a = vec![Rational::from_integer(0.into()); 18];
        for k in [0, 1, 6, 6 + 4, 12 + z] {
            a[k] = int(1);
        }
        Inequality::ge(a, int(3))
    };
    let ps = lib(tsp::diameter_polytope(4))?;
    let mut notes = Vec::new();
    for (label, ineq) in [("z23", make(3)), ("z14", make(2))] {
        let r = lib(check_inequality(&ps, &ineq))?;
        ensure(r.valid && r.is_facet, || format!("{label}: {r:?}"))?;
        notes.push(format!("{label}: face dim {}/{}", r.face_dimension, r.polytope_dimension));
    }
    ensure(tsp::extra_facets_n4() == vec![make(3), make(2)], || "tsp::extra_facets_n4 differs".into())?;
    Ok(notes.join("; "))
}

fn suite(s: Suite, trials: usize) -> Result<SuiteReport, String> {
    let cfg = VerifyConfig {
        trials: Some(trials),
        ..VerifyConfig::default()
    };
    let report = lib(verify::run(s, &cfg))?;
    let failure = report
        .failures()
        .next()
        .map(|c| format!("{}: expected {}, observed {}", c.id, c.expected, c.observed));
    match failure {
        Some(why) => Err(why),
        None => Ok(report),
    }
}

fn criterion_6() -> Outcome {
    let r = suite(Suite::Epsilon, 50)?;
    Ok(format!("{} models, 0 failures (seed {})", r.claims.len(), r.seed))
}

fn criterion_7() -> Outcome {
    let r = suite(Suite::Kendall, 20)?;
    Ok(format!("{} instances, 0 failures", r.claims.len()))
}

fn criterion_8() -> Outcome {
    let r = suite(Suite::Discordant, 20)?;
    Ok(format!("{} instances (n = 5, 6), 0 failures", r.claims.len()))
}

fn criterion_9() -> Outcome {
    let r = suite(Suite::DisjointTours, 20)?;
    // Independent edge-disjointness check on the n = 5 tours.
    for t in lib(tsp::Tour::all(5))? {
        let d = tsp::find_disjoint_tour(&t).ok_or("n=5 tour without partner")?;
        let shared = t.edges().iter().filter(|e| d.edges().contains(e)).count();
        ensure(shared == 0, || format!("{:?} and {:?} share {shared} edges", t.cycle(), d.cycle()))?;
    }
    Ok(format!("{} tours checked (n = 4 absent, n = 5 exhaustive, n = 6, 7 random)", r.claims.len()))
}

fn criterion_10() -> Outcome {
    let p2 = lib(lop::diameter_polytope(2))?;
    let p3 = lib(lop::diameter_polytope(3))?;
    let facets = lib(enumerate_facets_small(&p2, 100_000))?;
    ensure(!facets.is_empty(), || "no facets found".into())?;
    for f in &facets {
        ensure(lib(check_inequality(&p2, f))?.is_facet, || format!("{f:?} is not a facet of P2"))?;
        let lifted = lib(lop::lift_inequality(f, 2))?;
        let r = lib(check_inequality(&p3, &lifted))?;
        ensure(r.is_facet, || format!("lift of {f:?} is not a facet of P3: {r:?}"))?;
    }
    // The enumerated facets must cover the known families.
    let tight = |ineq: &Inequality| -> Vec<bool> {
        let le = ineq.to_le();
        let ge = Inequality::ge(le.a.clone(), le.a0.clone());
        p2.iter().map(|p| le.holds_at(p) && ge.holds_at(p)).collect()
    };
    let families = lib(facet_families(2, &lop::base_facets(2)))?;
    for f in &families {
        let want = tight(&f.inequality);
        ensure(facets.iter().any(|g| tight(g) == want), || format!("{} #{} missing from the search", f.family, f.index))?;
    }
    Ok(format!("{} facets of P2 lifted to facets of P3", facets.len()))
}

fn criterion_11() -> Outcome {
    let r = suite(Suite::Solver, 100)?;
    Ok(format!("{} models, status and objective identical", r.claims.len()))
}

fn long_enabled() -> bool {
    std::env::var("DIAPOLY_LONG").is_ok_and(|v| v == "1")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dimension of the ordering diameter polytope", criterion_1),
        ("dimension of the tour diameter polytope", criterion_2),
        ("lifted minimal equation systems", criterion_3),
        ("facet families certified", criterion_4),
        ("extra four-city facets", criterion_5),
        ("epsilon sufficiency on random models", criterion_6),
        ("Kendall tau equivalence", criterion_7),
        ("discordant edge equivalence", criterion_8),
        ("edge-disjoint tours", criterion_9),
        ("lifting facets from 2 to 3 items", criterion_10),
        ("branch and bound against exhaustive scan", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({:.2?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
