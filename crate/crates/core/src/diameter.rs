//! The diameter program of a binary program and its solution.
//!
//! For a base model `max cᵀx, Ax ≤ b` over `n` variables the derived model
//! lives on `x ⊕ y ⊕ z` (3n variables):
//!
//! ```text
//! max  cᵀ(x + y) − ε·eᵀz
//!      Ax ≤ b,  Ay ≤ b
//!      x + y − z ≤ e
//!      −x − y − z ≤ −e        (full variant only)
//! ```
//!
//! With a small enough ε every optimum has `x*, y* ∈ Opt(base)` and `z*`
//! marks the coordinates where they agree (full) or are both one (conjugate),
//! so the number of zeros in `z*` measures how far apart the pair is.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bpcore::{
    enumerate_optimal_set, solve_bnb, solve_enumerate, BinaryProgram, Constraint, Sense, Status,
    DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::rational::{int, json, lcm_of_denominators, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// With the lower coupling rows `−x − y − z ≤ −e`.
    Full,
    /// Without them.
    Conjugate,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Conjugate => "conjugate",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "conjugate" | "bar" => Ok(Variant::Conjugate),
            other => Err(Error::parse(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonRule {
    /// `1/(2n)` for an integral objective.
    IntegerRule,
    /// `1/(2n·L)`, `L` the lcm of the objective denominators.
    RationalRule,
    /// Gap between the optimal value and the best non-optimal value, over `n`;
    /// needs the whole feasible set.
    Theoretical,
    UserSupplied,
}

impl EpsilonRule {
    /// Rules for which the optimal pair is guaranteed to lie in Opt(base).
    pub fn is_guaranteed(self) -> bool {
        !matches!(self, EpsilonRule::UserSupplied)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonChoice {
    #[serde(with = "json")]
    value: Rational,
    justification: EpsilonRule,
}

impl EpsilonChoice {
    pub fn user(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(Self {
            value,
            justification: EpsilonRule::UserSupplied,
        })
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn justification(&self) -> EpsilonRule {
        self.justification
    }
}

/// `1/(2n)` for integral objectives, otherwise `1/(2n·L)` with `L` the lcm
/// of the objective denominators in lowest terms.
pub fn choose_epsilon(bp: &BinaryProgram) -> EpsilonChoice {
    let two_n = BigInt::from(2 * bp.n());
    if bp.is_integral_objective() {
        EpsilonChoice {
            value: Rational::new(BigInt::one(), two_n),
            justification: EpsilonRule::IntegerRule,
        }
    } else {
        let l = lcm_of_denominators(bp.objective());
        EpsilonChoice {
            value: Rational::new(BigInt::one(), two_n * l),
            justification: EpsilonRule::RationalRule,
        }
    }
}

/// The data-dependent value `(c(x*+y*) − c(x̄*+ȳ*)) / 2n`, which simplifies to
/// `(opt − second best) / n`. `None` when every feasible point is optimal, in
/// which case any positive ε works.
pub fn theoretical_epsilon(bp: &BinaryProgram, cap: usize) -> Result<Option<EpsilonChoice>> {
    let feasible = crate::bpcore::enumerate_feasible(bp, cap)?;
    if feasible.is_empty() {
        return Err(Error::Infeasible);
    }
    let mut values: Vec<Rational> = feasible.iter().map(|x| bp.objective_value(x)).collect();
    values.sort();
    values.dedup();
    let opt = values.pop().expect("nonempty");
    Ok(values.pop().map(|second| EpsilonChoice {
        value: (opt - second) / int(bp.n() as i64),
        justification: EpsilonRule::Theoretical,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterProgram {
    base: BinaryProgram,
    epsilon: EpsilonChoice,
    variant: Variant,
    derived: BinaryProgram,
}

fn suffixed(names: &[String], suffix: &str) -> Vec<String> {
    names.iter().map(|n| format!("{n}_{suffix}")).collect()
}

/// Derives the diameter program over `x ⊕ y ⊕ z`.
pub fn build(bp: &BinaryProgram, eps: EpsilonChoice, variant: Variant) -> DiameterProgram {
    let n = bp.n();
    let zero = Rational::zero;
    let mut names = suffixed(bp.variables(), "x");
    names.extend(suffixed(bp.variables(), "y"));
    names.extend(suffixed(bp.variables(), "z"));

    let mut objective: Vec<Rational> = bp.objective().to_vec();
    objective.extend(bp.objective().iter().cloned());
    objective.extend(std::iter::repeat_n(-eps.value.clone(), n));

    let mut derived = BinaryProgram::new(names, objective)
        .expect("3n names and coefficients")
        .named(if bp.name().is_empty() {
            "diameter".to_string()
        } else {
            format!("{}_diameter", bp.name())
        });

    for (block, tag) in [(0usize, "x"), (1, "y")] {
        for (i, c) in bp.constraints().iter().enumerate() {
            let mut row = vec![zero(); 3 * n];
            row[block * n..(block + 1) * n].clone_from_slice(&c.row);
            let label = c.name.clone().unwrap_or_else(|| format!("c{}", i + 1));
            derived
                .push(Constraint::new(row, c.sense, c.rhs.clone()).named(format!("{label}_{tag}")))
                .expect("row length 3n");
        }
    }
    for i in 0..n {
        let mut row = vec![zero(); 3 * n];
        row[i] = int(1);
        row[n + i] = int(1);
        row[2 * n + i] = int(-1);
        derived
            .push(Constraint::new(row, Sense::Le, int(1)).named(format!("couple_{}", i + 1)))
            .expect("row length 3n");
    }
    if variant == Variant::Full {
        for i in 0..n {
            let mut row = vec![zero(); 3 * n];
            row[i] = int(-1);
            row[n + i] = int(-1);
            row[2 * n + i] = int(-1);
            derived
                .push(Constraint::new(row, Sense::Le, int(-1)).named(format!("lower_{}", i + 1)))
                .expect("row length 3n");
        }
    }
    DiameterProgram {
        base: bp.clone(),
        epsilon: eps,
        variant,
        derived,
    }
}

impl DiameterProgram {
    pub fn base(&self) -> &BinaryProgram {
        &self.base
    }

    pub fn epsilon(&self) -> &EpsilonChoice {
        &self.epsilon
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn include_lower_coupling(&self) -> bool {
        self.variant == Variant::Full
    }

    pub fn derived(&self) -> &BinaryProgram {
        &self.derived
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }
}

/// How the reported diameter is tied to `z*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Certificate {
    /// Full variant with a guaranteed ε: diameter = n − eᵀz*.
    Exact,
    /// Conjugate variant on a model whose optima all have norm² k:
    /// diameter = 2(k − eᵀz*).
    ConstantNorm { k: usize },
    /// Only `‖x* − y*‖² ≤ n − eᵀz*` is known (conjugate variant without a
    /// certified norm, or a user-supplied ε).
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiverseOptimaResult {
    pub variant: Variant,
    #[serde(with = "json")]
    pub epsilon: Rational,
    #[serde(rename = "x")]
    pub x_star: Vec<u8>,
    #[serde(rename = "y")]
    pub y_star: Vec<u8>,
    #[serde(rename = "z")]
    pub z_star: Vec<u8>,
    pub diameter: u64,
    #[serde(with = "json")]
    pub base_objective: Rational,
    /// `n − eᵀz*`.
    pub bound: u64,
    pub certificate: Certificate,
}

impl DiverseOptimaResult {
    pub fn z_sum(&self) -> u64 {
        self.z_star.iter().map(|&v| v as u64).sum()
    }

    pub fn swapped(&self) -> Self {
        Self {
            x_star: self.y_star.clone(),
            y_star: self.x_star.clone(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization is infallible")
    }
}

pub fn hamming(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

#[derive(Clone, Debug)]
pub struct DiameterOptions {
    /// Cross-check the branch-and-bound optimum by exhaustive scan when
    /// `3n` is at most this.
    pub enumeration_cap: usize,
    /// Caller-certified `k` with `‖x*‖² = k` for every optimum of the base.
    pub constant_norm: Option<usize>,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            constant_norm: None,
        }
    }
}

/// Solves the derived model exactly and extracts the diverse pair.
pub fn solve_diameter(dp: &DiameterProgram, opts: &DiameterOptions) -> Result<DiverseOptimaResult> {
    let n = dp.n();
    let report = solve_bnb(&dp.derived)?;
    if report.status == Status::Infeasible {
        return Err(Error::Infeasible);
    }
    let best = report.best.expect("optimal status carries a solution");
    if 3 * n <= opts.enumeration_cap {
        let check = solve_enumerate(&dp.derived, opts.enumeration_cap)?;
        if check.objective() != Some(&best.objective_value) {
            return Err(Error::Certificate(format!(
                "branch-and-bound value {} disagrees with exhaustive scan {:?}",
                best.objective_value,
                check.objective()
            )));
        }
    }
    let a = &best.assignment;
    let (x, y, z) = (a[..n].to_vec(), a[n..2 * n].to_vec(), a[2 * n..].to_vec());
    let diameter = hamming(&x, &y);
    let z_sum: u64 = z.iter().map(|&v| v as u64).sum();
    let bound = n as u64 - z_sum;

    let certificate = match (dp.variant, opts.constant_norm) {
        (Variant::Full, _) if dp.epsilon.justification.is_guaranteed() => Certificate::Exact,
        (Variant::Conjugate, Some(k)) => Certificate::ConstantNorm { k },
        _ => Certificate::UpperBound,
    };
    let result = DiverseOptimaResult {
        variant: dp.variant,
        epsilon: dp.epsilon.value.clone(),
        base_objective: dp.base.objective_value(&x),
        x_star: x,
        y_star: y,
        z_star: z,
        diameter,
        bound,
        certificate,
    };

    if !verify_z_semantics(&result) {
        return Err(Error::Certificate("z* does not mark the agreeing coordinates".into()));
    }
    match result.certificate {
        Certificate::Exact if diameter != bound => {
            return Err(Error::Certificate(format!("diameter {diameter} != n - e'z = {bound}")));
        }
        Certificate::ConstantNorm { k } => {
            let norms = [&result.x_star, &result.y_star].map(|v| v.iter().filter(|&&b| b == 1).count());
            if norms != [k, k] {
                return Err(Error::Certificate(format!(
                    "optimal pair has norms {norms:?}, not the certified {k}"
                )));
            }
            if diameter != 2 * (k as u64 - z_sum) {
                return Err(Error::Certificate(format!("diameter {diameter} != 2(k - e'z) with k = {k}")));
            }
        }
        _ => {}
    }
    Ok(result)
}

/// A diameter computed through the derived program next to the same quantity
/// computed combinatorially by an independent route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterCheck {
    pub via_program: u64,
    pub via_oracle: u64,
    pub result: DiverseOptimaResult,
}

impl DiameterCheck {
    pub fn holds(&self) -> bool {
        self.via_program == self.via_oracle
    }
}

/// Coordinate-wise check of what `z*` must encode for the variant.
pub fn verify_z_semantics(res: &DiverseOptimaResult) -> bool {
    let len = res.x_star.len();
    if res.y_star.len() != len || res.z_star.len() != len {
        return false;
    }
    res.x_star
        .iter()
        .zip(&res.y_star)
        .zip(&res.z_star)
        .all(|((&x, &y), &z)| {
            let expected = match res.variant {
                Variant::Full => x == y,
                Variant::Conjugate => x == 1 && y == 1,
            };
            (z == 1) == expected
        })
}

/// The diameter straight from its definition: the largest Hamming distance
/// between two members of the enumerated optimal set.
pub fn diameter_by_enumeration(bp: &BinaryProgram, cap: usize) -> Result<u64> {
    let opt = enumerate_optimal_set(bp, cap)?;
    let mut best = 0;
    for (i, a) in opt.iter().enumerate() {
        for b in &opt[i + 1..] {
            best = best.max(hamming(&a.assignment, &b.assignment));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn model(obj: &[i64], rows: &[(&[i64], Sense, i64)]) -> BinaryProgram {
        let mut bp = BinaryProgram::with_objective(obj.iter().map(|&c| int(c)).collect()).unwrap();
        for (row, sense, rhs) in rows {
            bp.add(row.iter().map(|&a| int(a)).collect(), *sense, int(*rhs)).unwrap();
        }
        bp
    }

    #[test]
    fn epsilon_rules() {
        let six = model(&[1, -2, 3, 0, 5, 1], &[]);
        let e = choose_epsilon(&six);
        assert_eq!(e.value(), &rat(1, 12));
        assert_eq!(e.justification(), EpsilonRule::IntegerRule);

        let frac = BinaryProgram::with_objective(vec![rat(1, 2), rat(1, 3), int(1), int(0)]).unwrap();
        let e = choose_epsilon(&frac);
        assert_eq!(e.value(), &rat(1, 48));
        assert_eq!(e.justification(), EpsilonRule::RationalRule);

        assert_eq!(choose_epsilon(&model(&[5], &[])).value(), &rat(1, 2));
        assert!(EpsilonChoice::user(int(0)).is_err());
        assert!(EpsilonChoice::user(rat(-1, 3)).is_err());
    }

    #[test]
    fn theoretical_epsilon_uses_the_value_gap() {
        // Values: 0, 2, 3 (x2 alone), 5 infeasible; opt 3, second 2, n = 2.
        let bp = model(&[2, 3], &[(&[1, 1], Sense::Le, 1)]);
        let e = theoretical_epsilon(&bp, 26).unwrap().unwrap();
        assert_eq!(e.value(), &rat(1, 2));
        assert_eq!(e.justification(), EpsilonRule::Theoretical);
        assert!(theoretical_epsilon(&model(&[0, 0], &[]), 26).unwrap().is_none());
    }

    #[test]
    fn build_row_counts() {
        let bp = model(&[1, 1], &[(&[1, 1], Sense::Le, 1)]);
        let conj = build(&bp, choose_epsilon(&bp), Variant::Conjugate);
        assert_eq!(conj.derived().n(), 6);
        assert_eq!(conj.derived().constraints().len(), 4);
        assert!(!conj.include_lower_coupling());
        let full = build(&bp, choose_epsilon(&bp), Variant::Full);
        assert_eq!(full.derived().constraints().len(), 6);
        assert_eq!(full.derived().variables()[0], "x1_x");
        assert_eq!(full.derived().variables()[5], "x2_z");
        let eps = rat(-1, 4);
        assert_eq!(&full.derived().objective()[4], &eps);
        assert_eq!(&full.derived().objective()[0], &int(1));
    }

    #[test]
    fn free_pair_reaches_full_distance() {
        let bp = model(&[0, 0], &[(&[1, 1], Sense::Le, 1)]);
        let dp = build(&bp, EpsilonChoice::user(rat(1, 4)).unwrap(), Variant::Full);
        let r = solve_diameter(&dp, &DiameterOptions::default()).unwrap();
        assert_eq!(r.diameter, 2);
        assert_eq!(hamming(&r.x_star, &[1, 0]) + hamming(&r.y_star, &[0, 1]), 0);
        assert_eq!(r.z_star, vec![0, 0]);
        assert_eq!(r.certificate, Certificate::UpperBound);

        let dp = build(&bp, choose_epsilon(&bp), Variant::Full);
        let r = solve_diameter(&dp, &DiameterOptions::default()).unwrap();
        assert_eq!(r.diameter, 2);
        assert_eq!(r.certificate, Certificate::Exact);
        assert_eq!(diameter_by_enumeration(&bp, 26).unwrap(), 2);
    }

    #[test]
    fn unique_optimum_has_zero_diameter() {
        let bp = model(&[3, -1, 2], &[(&[1, 0, 1], Sense::Le, 2)]);
        for variant in [Variant::Full, Variant::Conjugate] {
            let dp = build(&bp, choose_epsilon(&bp), variant);
            let r = solve_diameter(&dp, &DiameterOptions::default()).unwrap();
            assert_eq!(r.diameter, 0);
            assert_eq!(r.x_star, r.y_star);
            assert_eq!(r.x_star, vec![1, 0, 1]);
            assert_eq!(r.base_objective, int(5));
        }
        assert_eq!(diameter_by_enumeration(&bp, 26).unwrap(), 0);
    }

    #[test]
    fn unconstrained_zero_objective() {
        assert_eq!(diameter_by_enumeration(&model(&[0, 0], &[]), 26).unwrap(), 2);
    }

    #[test]
    fn infeasible_base() {
        let bp = model(&[1], &[(&[1], Sense::Le, -1)]);
        let dp = build(&bp, choose_epsilon(&bp), Variant::Full);
        assert!(matches!(solve_diameter(&dp, &DiameterOptions::default()), Err(Error::Infeasible)));
        assert!(matches!(diameter_by_enumeration(&bp, 26), Err(Error::Infeasible)));
    }

    fn result(variant: Variant, x: &[u8], y: &[u8], z: &[u8]) -> DiverseOptimaResult {
        DiverseOptimaResult {
            variant,
            epsilon: rat(1, 4),
            x_star: x.to_vec(),
            y_star: y.to_vec(),
            z_star: z.to_vec(),
            diameter: hamming(x, y),
            base_objective: int(0),
            bound: 0,
            certificate: Certificate::UpperBound,
        }
    }

    #[test]
    fn z_semantics() {
        assert!(verify_z_semantics(&result(Variant::Conjugate, &[1, 0], &[1, 1], &[1, 0])));
        assert!(verify_z_semantics(&result(Variant::Full, &[1, 0], &[0, 1], &[0, 0])));
        assert!(!verify_z_semantics(&result(Variant::Full, &[1, 1], &[1, 1], &[1, 0])));
        assert!(!verify_z_semantics(&result(Variant::Conjugate, &[0, 0], &[0, 0], &[1, 0])));
        assert!(verify_z_semantics(&result(Variant::Full, &[0, 0], &[0, 0], &[1, 1])));
    }

    #[test]
    fn conjugate_on_constant_norm_model() {
        // Exactly two of four items: every optimum has norm 2.
        let bp = model(&[0, 0, 0, 0], &[(&[1, 1, 1, 1], Sense::Eq, 2)]);
        let dp = build(&bp, choose_epsilon(&bp), Variant::Conjugate);
        let opts = DiameterOptions {
            constant_norm: Some(2),
            ..Default::default()
        };
        let r = solve_diameter(&dp, &opts).unwrap();
        assert_eq!(r.diameter, 4);
        assert_eq!(r.z_sum(), 0);
        assert_eq!(r.certificate, Certificate::ConstantNorm { k: 2 });
        assert_eq!(diameter_by_enumeration(&bp, 26).unwrap(), 4);

        let wrong = DiameterOptions {
            constant_norm: Some(3),
            ..Default::default()
        };
        assert!(matches!(solve_diameter(&dp, &wrong), Err(Error::Certificate(_))));
    }

    #[test]
    fn json_record_shape() {
        let r = result(Variant::Full, &[1, 0], &[0, 1], &[0, 0]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["variant", "epsilon", "x", "y", "z", "diameter", "base_objective"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["epsilon"]["den"], 4);
        assert_eq!(v["variant"], "full");
    }
}
