//! Linear ordering problem.
//!
//! Items `1..=n` are placed in a linear order; variable `x_i_j` (one per
//! ordered pair `i ≠ j`, row-major) is one when `i` comes before `j`. A
//! permutation `σ` gives each item its position, so `x_i_j = 1` iff
//! `σ(i) < σ(j)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bpcore::{BinaryProgram, Constraint, Sense};
use crate::diameter::{self, choose_epsilon, solve_diameter, DiameterCheck, DiameterOptions, Variant};
use crate::error::{Error, Result};
use crate::instance::{check_item, parse_dense_matrix, PairWeight};
use crate::polytope::{enumerate_points_from_base, EquationSystem, IneqSense, Inequality, PointSet};
use crate::rational::{int, Rational};
use crate::ratlinalg::RatMatrix;

/// Largest `n` for which permutations are enumerated.
pub const PERMUTATION_CAP: usize = 6;

/// Number of variables for `n` items.
pub fn variable_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// 0-based position of `x_i_j` (1-based items, `i ≠ j`).
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && (1..=n).contains(&i) && (1..=n).contains(&j));
    (i - 1) * (n - 1) + if j < i { j - 1 } else { j - 2 }
}

/// Ordered pairs in variable order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// Triples `(i, j, k)` with `i < j`, `i < k`, `j ≠ k`; each gives the row
/// `x_i_j + x_j_k + x_k_i ≤ 2`.
pub fn dicycles(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i + 1..=n {
                if j != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLop", into = "RawLop")]
pub struct LopInstance {
    n: usize,
    /// Row-major over ordered pairs, see [`pair_index`].
    weights: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawLop {
    n: usize,
    #[serde(default)]
    weights: Vec<PairWeight>,
}

impl TryFrom<RawLop> for LopInstance {
    type Error = Error;

    fn try_from(raw: RawLop) -> Result<Self> {
        let mut inst = LopInstance::zero(raw.n)?;
        for w in raw.weights {
            inst.set(w.i, w.j, w.value)?;
        }
        Ok(inst)
    }
}

impl From<LopInstance> for RawLop {
    fn from(inst: LopInstance) -> Self {
        let weights = pairs(inst.n)
            .into_iter()
            .zip(inst.weights)
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), value)| PairWeight { i, j, value })
            .collect();
        RawLop { n: inst.n, weights }
    }
}

impl LopInstance {
    /// All weights zero, so every permutation is optimal.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("a linear ordering instance needs at least 2 items"));
        }
        Ok(Self {
            n,
            weights: vec![Rational::zero(); variable_count(n)],
        })
    }

    /// From a dense `n × n` matrix; the diagonal is ignored.
    pub fn from_matrix(matrix: &[Vec<Rational>]) -> Result<Self> {
        let n = matrix.len();
        let mut inst = Self::zero(n)?;
        for (i, row) in matrix.iter().enumerate() {
            Error::check_len(n, row.len())?;
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    inst.weights[pair_index(n, i + 1, j + 1)] = v.clone();
                }
            }
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[pair_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        check_item(i, self.n)?;
        check_item(j, self.n)?;
        if i == j {
            return Err(Error::invalid(format!("weight on the diagonal pair ({i}, {i})")));
        }
        self.weights[pair_index(self.n, i, j)] = value;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization is infallible")
    }

    /// LOLIB-style text: `n`, then the `n × n` matrix.
    pub fn parse_lolib(text: &str) -> Result<Self> {
        let (_, m) = parse_dense_matrix(text)?;
        Self::from_matrix(&m)
    }

    /// Objective value of an ordering.
    pub fn value(&self, p: &Permutation) -> Rational {
        pairs(self.n)
            .into_iter()
            .zip(&self.weights)
            .filter(|((i, j), _)| p.position(*i) < p.position(*j))
            .map(|(_, w)| w.clone())
            .sum()
    }
}

/// `sigma[i - 1]` is the position of item `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    sigma: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(sigma: Vec<usize>) -> Result<Self> {
        Permutation::new(sigma)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.sigma
    }
}

impl Permutation {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n + 1];
        for &s in &sigma {
            if s == 0 || s > n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::invalid(format!("{sigma:?} is not a permutation of 1..={n}")));
            }
        }
        Ok(Self { sigma })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sigma: (1..=n).collect(),
        }
    }

    pub fn reverse(n: usize) -> Self {
        Self {
            sigma: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn position(&self, item: usize) -> usize {
        self.sigma[item - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.sigma
    }

    /// Every permutation of `1..=n` in lexicographic order of the image list.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n > PERMUTATION_CAP {
            return Err(Error::CapExceeded {
                what: "permutation enumeration",
                size: n,
                cap: PERMUTATION_CAP,
            });
        }
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Self { sigma: cur.clone() }];
        while next_permutation(&mut cur) {
            out.push(Self { sigma: cur.clone() });
        }
        Ok(out)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The linear ordering model: symmetry equalities, then dicycle rows.
pub fn build(inst: &LopInstance) -> BinaryProgram {
    let n = inst.n;
    let m = variable_count(n);
    let names = pairs(n).iter().map(|(i, j)| format!("x_{i}_{j}")).collect();
    let mut bp = BinaryProgram::new(names, inst.weights.clone())
        .expect("n ≥ 2 gives at least two variables")
        .named(format!("lop{n}"));
    for i in 1..=n {
        for j in i + 1..=n {
            let mut row = vec![Rational::zero(); m];
            row[pair_index(n, i, j)] = int(1);
            row[pair_index(n, j, i)] = int(1);
            bp.push(Constraint::new(row, Sense::Eq, int(1)).named(format!("sym_{i}_{j}")))
                .expect("row length");
        }
    }
    for (i, j, k) in dicycles(n) {
        let mut row = vec![Rational::zero(); m];
        row[pair_index(n, i, j)] = int(1);
        row[pair_index(n, j, k)] = int(1);
        row[pair_index(n, k, i)] = int(1);
        bp.push(Constraint::new(row, Sense::Le, int(2)).named(format!("cyc_{i}_{j}_{k}")))
            .expect("row length");
    }
    bp
}

pub fn perm_to_incidence(p: &Permutation) -> Vec<u8> {
    pairs(p.n())
        .into_iter()
        .map(|(i, j)| (p.position(i) < p.position(j)) as u8)
        .collect()
}

/// Inverse of [`perm_to_incidence`]; rejects vectors that encode no ordering.
pub fn incidence_to_perm(x: &[u8], n: usize) -> Result<Permutation> {
    Error::check_len(variable_count(n), x.len())?;
    // Position of i is one plus the number of items placed before it.
    let sigma = (1..=n)
        .map(|i| 1 + (1..=n).filter(|&j| j != i && x[pair_index(n, j, i)] == 1).count())
        .collect();
    let p = Permutation::new(sigma).map_err(|_| Error::invalid("incidence vector is not a linear order"))?;
    if perm_to_incidence(&p) != x {
        return Err(Error::invalid("incidence vector is not a linear order"));
    }
    Ok(p)
}

/// Number of item pairs ordered differently by the two permutations.
pub fn kendall_tau(p1: &Permutation, p2: &Permutation) -> Result<usize> {
    Error::check_len(p1.n(), p2.n())?;
    let n = p1.n();
    let mut count = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            if (p1.position(i) < p1.position(j)) != (p2.position(i) < p2.position(j)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Optimal orderings by enumeration of all permutations.
pub fn optimal_permutations(inst: &LopInstance) -> Result<Vec<Permutation>> {
    let all = Permutation::all(inst.n)?;
    let values: Vec<Rational> = all.iter().map(|p| inst.value(p)).collect();
    let best = values.iter().max().expect("n ≥ 2").clone();
    Ok(all.into_iter().zip(values).filter(|(_, v)| *v == best).map(|(p, _)| p).collect())
}

/// The diameter from the derived program (conjugate variant, `‖x‖² = C(n,2)`)
/// next to twice the largest Kendall tau between optimal orderings.
pub fn diameter_check_kendall(inst: &LopInstance, opts: &DiameterOptions) -> Result<DiameterCheck> {
    let opt = optimal_permutations(inst)?;
    let bp = build(inst);
    let dp = diameter::build(&bp, choose_epsilon(&bp), Variant::Conjugate);
    let opts = DiameterOptions {
        constant_norm: Some(inst.n * (inst.n - 1) / 2),
        ..opts.clone()
    };
    let result = solve_diameter(&dp, &opts)?;
    let mut max_k = 0;
    for (a, p1) in opt.iter().enumerate() {
        for p2 in &opt[a + 1..] {
            max_k = max_k.max(kendall_tau(p1, p2)?);
        }
    }
    Ok(DiameterCheck {
        via_program: result.diameter,
        via_oracle: 2 * max_k as u64,
        result,
    })
}

pub fn verify_diameter_kendall(inst: &LopInstance) -> Result<bool> {
    Ok(diameter_check_kendall(inst, &DiameterOptions::default())?.holds())
}

/// `x_i_j + x_j_i = 1` for `i < j`, over `n(n−1)` columns.
pub fn base_equation_system(n: usize) -> EquationSystem {
    let m = variable_count(n);
    let mut rows = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut row = vec![Rational::zero(); m];
            row[pair_index(n, i, j)] = int(1);
            row[pair_index(n, j, i)] = int(1);
            rows.push(row);
        }
    }
    let rhs = vec![int(1); rows.len()];
    EquationSystem::new(RatMatrix::from_rows(m, rows).expect("row length"), rhs).expect("one rhs per row")
}

/// Facets of the ordering polytope used as inherited families: `x_i_j ≥ 0`
/// for every ordered pair, then the dicycle rows of [`build`].
pub fn base_facets(n: usize) -> Vec<Inequality> {
    let m = variable_count(n);
    let mut out: Vec<Inequality> = (0..m).map(|k| Inequality::sparse(m, &[(k, 1)], IneqSense::Ge, 0)).collect();
    for (i, j, k) in dicycles(n) {
        let terms = [(pair_index(n, i, j), 1), (pair_index(n, j, k), 1), (pair_index(n, k, i), 1)];
        out.push(Inequality::sparse(m, &terms, IneqSense::Le, 2));
    }
    out
}

/// Incidence vectors of all orderings of `n` items.
pub fn feasible_points(n: usize) -> Result<Vec<Vec<u8>>> {
    Ok(Permutation::all(n)?.iter().map(perm_to_incidence).collect())
}

/// Points of the diameter polytope for `n` items, generated from permutation pairs.
pub fn diameter_polytope(n: usize) -> Result<PointSet> {
    let bp = build(&LopInstance::zero(n)?);
    let dp = diameter::build(&bp, choose_epsilon(&bp), Variant::Conjugate);
    enumerate_points_from_base(&dp, &feasible_points(n)?)
}

/// Re-indexes an inequality on the `n`-item diameter polytope onto `n + 1`
/// items: coefficients copied pair by pair in each of the three blocks, zero
/// on every pair involving the new item.
pub fn lift_inequality(ineq: &Inequality, n: usize) -> Result<Inequality> {
    let m = variable_count(n);
    Error::check_len(3 * m, ineq.len())?;
    let m1 = variable_count(n + 1);
    let mut a = vec![Rational::zero(); 3 * m1];
    for block in 0..3 {
        for (i, j) in pairs(n) {
            a[block * m1 + pair_index(n + 1, i, j)] = ineq.a[block * m + pair_index(n, i, j)].clone();
        }
    }
    Ok(Inequality {
        a,
        a0: ineq.a0.clone(),
        sense: ineq.sense,
    })
}
