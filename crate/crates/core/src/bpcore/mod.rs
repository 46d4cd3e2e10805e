//! Canonical binary programs `max cᵀx, rows of Ax (≤|=|≥) b, x ∈ {0,1}ⁿ`.
//!
//! Equality and `≥` rows are kept as written; the LP exporter normalizes
//! them to `≤` rows.

mod lp;
mod solve;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{json, Rational};

pub use lp::{parse_lp, to_lp, LpExport};
pub use solve::{enumerate_feasible, enumerate_optimal_set, solve_bnb, solve_enumerate};

/// Default number of variables up to which exhaustive `2ⁿ` scans are allowed.
pub const DEFAULT_ENUMERATION_CAP: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(with = "json::vec")]
    pub row: Vec<Rational>,
    pub sense: Sense,
    #[serde(with = "json")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(row: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Self {
            name: None,
            row,
            sense,
            rhs,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn lhs(&self, x: &[u8]) -> Rational {
        self.row
            .iter()
            .zip(x)
            .filter(|(_, &xi)| xi != 0)
            .map(|(a, _)| a.clone())
            .sum()
    }

    pub fn is_satisfied(&self, x: &[u8]) -> bool {
        self.sense.holds(&self.lhs(x), &self.rhs)
    }
}

#[derive(Deserialize)]
struct RawProgram {
    #[serde(default)]
    name: String,
    #[serde(default)]
    variables: Option<Vec<String>>,
    #[serde(with = "json::vec")]
    objective: Vec<Rational>,
    #[serde(default)]
    constraints: Vec<Constraint>,
}

impl TryFrom<RawProgram> for BinaryProgram {
    type Error = Error;

    fn try_from(raw: RawProgram) -> Result<Self> {
        let names = raw
            .variables
            .unwrap_or_else(|| default_names(raw.objective.len()));
        let mut bp = BinaryProgram::new(names, raw.objective)?;
        bp.name = raw.name;
        for c in raw.constraints {
            bp.push(c)?;
        }
        Ok(bp)
    }
}

/// A maximization model over 0/1 variables with exact rational data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProgram")]
pub struct BinaryProgram {
    name: String,
    variables: Vec<String>,
    #[serde(with = "json::vec")]
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl BinaryProgram {
    pub fn new(variables: Vec<String>, objective: Vec<Rational>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::invalid("a binary program needs at least one variable"));
        }
        Error::check_len(variables.len(), objective.len())?;
        Ok(Self {
            name: String::new(),
            variables,
            objective,
            constraints: Vec::new(),
        })
    }

    /// Variables named `x1..xn`.
    pub fn with_objective(objective: Vec<Rational>) -> Result<Self> {
        Self::new(default_names(objective.len()), objective)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn push(&mut self, c: Constraint) -> Result<()> {
        Error::check_len(self.n(), c.row.len())?;
        self.constraints.push(c);
        Ok(())
    }

    pub fn add(&mut self, row: Vec<Rational>, sense: Sense, rhs: Rational) -> Result<()> {
        self.push(Constraint::new(row, sense, rhs))
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_value(&self, x: &[u8]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(_, &xi)| xi != 0)
            .map(|(c, _)| c.clone())
            .sum()
    }

    /// True iff every row holds at `x`.
    pub fn is_feasible(&self, x: &[u8]) -> Result<bool> {
        Error::check_len(self.n(), x.len())?;
        if x.iter().any(|&v| v > 1) {
            return Err(Error::invalid("assignment entries must be 0 or 1"));
        }
        Ok(self.constraints.iter().all(|c| c.is_satisfied(x)))
    }

    pub fn is_integral_objective(&self) -> bool {
        self.objective.iter().all(|c| c.is_integer())
    }

    pub fn has_zero_objective(&self) -> bool {
        self.objective.iter().all(Zero::is_zero)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization is infallible")
    }
}

/// A 0/1 assignment with its objective value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: Vec<u8>,
    #[serde(with = "json")]
    pub objective_value: Rational,
}

impl Solution {
    pub fn new(bp: &BinaryProgram, assignment: Vec<u8>) -> Self {
        let objective_value = bp.objective_value(&assignment);
        Self {
            assignment,
            objective_value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    pub best: Option<Solution>,
    pub nodes_explored: u64,
}

impl SolveReport {
    pub fn objective(&self) -> Option<&Rational> {
        self.best.as_ref().map(|s| &s.objective_value)
    }

    pub fn into_optimal(self) -> Result<Solution> {
        self.best.ok_or(Error::Infeasible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pack() -> BinaryProgram {
        let mut bp = BinaryProgram::with_objective(vec![int(1), int(1)]).unwrap();
        bp.add(vec![int(1), int(1)], Sense::Le, int(1)).unwrap();
        bp
    }

    #[test]
    fn feasibility() {
        let bp = pack();
        assert!(!bp.is_feasible(&[1, 1]).unwrap());
        assert!(bp.is_feasible(&[0, 0]).unwrap());
        assert!(matches!(bp.is_feasible(&[0]), Err(Error::DimensionMismatch { .. })));
        assert!(bp.is_feasible(&[2, 0]).is_err());
    }

    #[test]
    fn rejects_ragged_rows_and_empty_models() {
        let mut bp = pack();
        assert!(bp.add(vec![int(1)], Sense::Le, int(0)).is_err());
        assert!(BinaryProgram::with_objective(vec![]).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let bp = pack().named("pack");
        let back = BinaryProgram::from_json(&bp.to_json()).unwrap();
        assert_eq!(back, bp);
        let bad = r#"{"objective": [1, 2], "constraints": [{"row": [1], "sense": "<=", "rhs": 1}]}"#;
        assert!(BinaryProgram::from_json(bad).is_err());
        let ok = r#"{"objective": ["1/2", 2], "constraints": [{"row": [1, 1], "sense": ">=", "rhs": 1}]}"#;
        let bp = BinaryProgram::from_json(ok).unwrap();
        assert_eq!(bp.variables(), ["x1", "x2"]);
        assert_eq!(bp.constraints()[0].sense, Sense::Ge);
    }
}
