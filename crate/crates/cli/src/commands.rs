use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use diapoly::bpcore::{solve_bnb, solve_enumerate, to_lp, BinaryProgram, SolveReport, Status};
use diapoly::diameter::{self, choose_epsilon, solve_diameter, DiameterOptions, DiverseOptimaResult, EpsilonChoice, Variant};
use diapoly::polytope::{
    affine_hull_equations, check_inequality, enumerate_points, hull_dimension, FacetReport, Inequality, PointSet,
    PointSetHeader,
};
use diapoly::rational::{format_rational, json, parse_rational, Rational};
use diapoly::verify::{self, Suite, SuiteReport, VerifyConfig};
use diapoly::{lop, tsp, Error};
use serde::Serialize;

use crate::input::{self, Loaded};
use crate::{exit, Caps, CheckFacetArgs, Cli, Command, DiameterArgs, Format, PolytopeArgs, Problem, SolveArgs, SolverKind, VerifyArgs};

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve(args) => solve(cli, args),
        Command::Diameter(args) => diameter(cli, args),
        Command::Points(args) => points(cli, args),
        Command::Dim(args) => dim(cli, args),
        Command::CheckFacet(args) => check_facet(cli, args),
        Command::Verify(args) => verify(cli, args),
    }
}

/// Writes the report to `--out` or standard output.
fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value)?;
            s.push('\n');
            s
        }
        Format::Text => text(),
    };
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn model_for(loaded: &Loaded, caps: &Caps) -> Result<BinaryProgram> {
    Ok(match loaded {
        Loaded::Raw(bp) => bp.clone(),
        Loaded::Lop(inst) => lop::build(inst),
        Loaded::Tsp(inst) => tsp::build_with_cap(inst, caps.subtour)?,
    })
}

/// Permutation or tour behind an incidence vector, for display.
fn decode(loaded: &Loaded, x: &[u8]) -> Option<serde_json::Value> {
    match loaded {
        Loaded::Raw(_) => None,
        Loaded::Lop(inst) => lop::incidence_to_perm(x, inst.n())
            .ok()
            .map(|p| serde_json::json!({ "positions": p.images() })),
        Loaded::Tsp(inst) => tsp::incidence_to_tour(x, inst.n())
            .ok()
            .map(|t| serde_json::json!({ "tour": t.cycle(), "cost": format_rational(&inst.tour_cost(&t)) })),
    }
}

#[derive(Serialize)]
struct SolveOutput {
    status: Status,
    #[serde(with = "json::option")]
    objective: Option<Rational>,
    assignment: Option<Vec<u8>>,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoded: Option<serde_json::Value>,
}

fn solve(cli: &Cli, args: &SolveArgs) -> Result<u8> {
    let loaded = input::load(&args.input, args.problem)?;
    let bp = model_for(&loaded, &args.caps)?;
    let report: SolveReport = match args.solver {
        SolverKind::Bnb => solve_bnb(&bp)?,
        SolverKind::Enumerate => solve_enumerate(&bp, args.caps.enumeration)?,
    };
    let out = SolveOutput {
        status: report.status,
        objective: report.best.as_ref().map(|s| s.objective_value.clone()),
        assignment: report.best.as_ref().map(|s| s.assignment.clone()),
        nodes_explored: report.nodes_explored,
        decoded: report.best.as_ref().and_then(|s| decode(&loaded, &s.assignment)),
    };
    emit(cli, &out, || {
        let mut t = format!("status: {:?}\n", out.status);
        if let (Some(obj), Some(x)) = (&out.objective, &out.assignment) {
            let _ = writeln!(t, "objective: {}", format_rational(obj));
            let _ = writeln!(t, "assignment: {}", bits(x));
        }
        if let Some(d) = &out.decoded {
            let _ = writeln!(t, "decoded: {d}");
        }
        let _ = writeln!(t, "nodes: {}", out.nodes_explored);
        t
    })?;
    Ok(if report.status == Status::Infeasible {
        exit::INFEASIBLE
    } else {
        exit::OK
    })
}

fn bits(x: &[u8]) -> String {
    x.iter().map(|v| if *v == 1 { '1' } else { '0' }).collect()
}

#[derive(Serialize)]
struct DiameterOutput {
    #[serde(flatten)]
    result: DiverseOptimaResult,
    epsilon_rule: diapoly::diameter::EpsilonRule,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_decoded: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_decoded: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct LpSidecar<'a> {
    model: &'a BinaryProgram,
    inexact: &'a [String],
}

fn write_lp(path: &Path, bp: &BinaryProgram) -> Result<()> {
    let lp = to_lp(bp);
    fs::write(path, &lp.text).with_context(|| format!("writing {}", path.display()))?;
    let sidecar = format!("{}.json", path.display());
    let body = serde_json::to_string_pretty(&LpSidecar {
        model: bp,
        inexact: &lp.inexact,
    })?;
    fs::write(&sidecar, body).with_context(|| format!("writing {sidecar}"))
}

fn diameter(cli: &Cli, args: &DiameterArgs) -> Result<u8> {
    let loaded = input::load(&args.input, args.problem)?;
    let bp = model_for(&loaded, &args.caps)?;
    let eps = match &args.epsilon {
        Some(text) => EpsilonChoice::user(parse_rational(text)?)?,
        None => choose_epsilon(&bp),
    };
    let dp = diameter::build(&bp, eps, args.variant);
    if let Some(path) = &args.lp {
        write_lp(path, dp.derived())?;
    }
    let constant_norm = match (&loaded, args.variant) {
        (_, Variant::Full) => None,
        (Loaded::Lop(inst), _) => Some(inst.n() * (inst.n() - 1) / 2),
        (Loaded::Tsp(inst), _) => Some(inst.n()),
        (Loaded::Raw(_), _) => args.constant_norm,
    };
    let opts = DiameterOptions {
        enumeration_cap: args.caps.enumeration,
        constant_norm: args.constant_norm.or(constant_norm),
    };
    let result = solve_diameter(&dp, &opts)?;
    let out = DiameterOutput {
        x_decoded: decode(&loaded, &result.x_star),
        y_decoded: decode(&loaded, &result.y_star),
        epsilon_rule: dp.epsilon().justification(),
        result,
    };
    emit(cli, &out, || {
        let r = &out.result;
        let mut t = String::new();
        let _ = writeln!(t, "variant: {}", r.variant);
        let _ = writeln!(t, "epsilon: {} ({:?})", format_rational(&r.epsilon), out.epsilon_rule);
        let _ = writeln!(t, "diameter: {}", r.diameter);
        let _ = writeln!(t, "bound: {}", r.bound);
        let _ = writeln!(t, "certificate: {:?}", r.certificate);
        let _ = writeln!(t, "base objective: {}", format_rational(&r.base_objective));
        let _ = writeln!(t, "x: {}", bits(&r.x_star));
        let _ = writeln!(t, "y: {}", bits(&r.y_star));
        let _ = writeln!(t, "z: {}", bits(&r.z_star));
        for (label, d) in [("x", &out.x_decoded), ("y", &out.y_decoded)] {
            if let Some(d) = d {
                let _ = writeln!(t, "{label} decoded: {d}");
            }
        }
        t
    })?;
    Ok(exit::OK)
}

fn require_long(what: &'static str, n: usize, limit: usize, long: bool) -> Result<()> {
    if n > limit && !long {
        return Err(Error::CapExceeded {
            what,
            size: n,
            cap: limit,
        })
        .context("pass --long to run long-running sizes");
    }
    Ok(())
}

fn polytope(args: &PolytopeArgs) -> Result<PointSet> {
    let need_n = || args.n.context("--n is required with --problem lop|tsp");
    Ok(match args.problem {
        Problem::Lop => {
            let n = need_n()?;
            require_long("ordering polytope item count", n, 3, args.long)?;
            lop::diameter_polytope(n)?
        }
        Problem::Tsp => {
            let n = need_n()?;
            require_long("tour polytope city count", n, 5, args.long)?;
            if n > args.caps.subtour {
                return Err(Error::CapExceeded {
                    what: "subtour enumeration",
                    size: n,
                    cap: args.caps.subtour,
                }
                .into());
            }
            tsp::diameter_polytope(n)?
        }
        Problem::Raw => {
            let Some(path) = &args.input else {
                bail!(Error::invalid("a model file is required with --problem raw"));
            };
            let Loaded::Raw(bp) = input::load(path, Problem::Raw)? else {
                unreachable!("raw problem loads a raw model")
            };
            let dp = diameter::build(&bp, choose_epsilon(&bp), Variant::Conjugate);
            enumerate_points(&dp, args.caps.enumeration)?
        }
    })
}

#[derive(Serialize)]
struct PointsOutput {
    header: PointSetHeader,
    points: Vec<Vec<u8>>,
}

fn points(cli: &Cli, args: &PolytopeArgs) -> Result<u8> {
    let ps = polytope(args)?;
    let header = ps.header();
    match cli.format {
        Format::Json => emit(
            cli,
            &PointsOutput {
                header,
                points: ps.iter().map(<[u8]>::to_vec).collect(),
            },
            String::new,
        )?,
        Format::Text => emit(cli, &(), || format!("# {}\n{}", serde_json::to_string(&header).unwrap_or_default(), ps.to_text()))?,
    }
    Ok(exit::OK)
}

#[derive(Serialize)]
struct DimOutput {
    #[serde(flatten)]
    header: PointSetHeader,
    dimension: usize,
    hull_equations: usize,
    fixed_coordinates: Vec<(usize, u8)>,
}

fn dim(cli: &Cli, args: &PolytopeArgs) -> Result<u8> {
    let ps = polytope(args)?;
    let out = DimOutput {
        header: ps.header(),
        dimension: hull_dimension(&ps)?,
        hull_equations: affine_hull_equations(&ps)?.rank(),
        fixed_coordinates: ps.fixed_coordinates(),
    };
    emit(cli, &out, || {
        format!(
            "points: {}\nambient: {}\ndimension: {}\nhull equations: {}\nfixed coordinates: {:?}\n",
            out.header.count, out.header.ambient, out.dimension, out.hull_equations, out.fixed_coordinates
        )
    })?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct FacetOutput {
    index: usize,
    #[serde(flatten)]
    report: FacetReport,
}

fn check_facet(cli: &Cli, args: &CheckFacetArgs) -> Result<u8> {
    let ineqs = Inequality::list_from_json(&input::read(&args.ineq)?)
        .with_context(|| format!("parsing {}", args.ineq.display()))?;
    let ps = polytope(&args.polytope)?;
    let out = ineqs
        .iter()
        .enumerate()
        .map(|(index, ineq)| Ok(FacetOutput { index, report: check_inequality(&ps, ineq)? }))
        .collect::<Result<Vec<_>>>()?;
    emit(cli, &out, || {
        out.iter()
            .map(|f| {
                let r = &f.report;
                format!(
                    "#{} valid={} tight={} face_dim={} dim={} facet={}\n",
                    f.index, r.valid, r.tight_point_count, r.face_dimension, r.polytope_dimension, r.is_facet
                )
            })
            .collect()
    })?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    reports: Vec<SuiteReport>,
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<u8> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse()?]
    };
    let cfg = VerifyConfig {
        seed: args.seed,
        long: args.long,
        trials: args.trials,
    };
    let reports = suites
        .into_iter()
        .map(|s| verify::run(s, &cfg))
        .collect::<diapoly::Result<Vec<_>>>()?;
    let out = VerifyOutput {
        passed: reports.iter().all(SuiteReport::passed),
        reports,
    };
    emit(cli, &out, || {
        let mut t = String::new();
        for r in &out.reports {
            for c in &r.claims {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    t,
                    "{mark} {}/{}: {} (expected {}, observed {})",
                    r.suite, c.id, c.statement, c.expected, c.observed
                );
            }
        }
        let _ = writeln!(t, "{}", if out.passed { "all claims passed" } else { "some claims FAILED" });
        t
    })?;
    Ok(if out.passed { exit::OK } else { exit::VERIFICATION_FAILED })
}
