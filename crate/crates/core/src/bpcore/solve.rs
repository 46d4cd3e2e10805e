//! Exact solvers: a Gray-code exhaustive scan (the ground-truth oracle) and a
//! depth-first branch-and-bound. Both run on an integer-scaled copy of the
//! model, so every comparison is exact.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{BinaryProgram, Sense, Solution, SolveReport, Status};
use crate::error::{Error, Result};
use crate::rational::scale_to_integers;

/// Largest variable count a bitmask scan can address.
const MASK_BITS: usize = 63;

#[derive(Debug)]
struct IntRow {
    sense: Sense,
    rhs: i128,
}

impl IntRow {
    fn holds(&self, act: i128) -> bool {
        match self.sense {
            Sense::Le => act <= self.rhs,
            Sense::Eq => act == self.rhs,
            Sense::Ge => act >= self.rhs,
        }
    }

    /// Whether some completion can still satisfy the row.
    fn reachable(&self, act: i128, lo: i128, hi: i128) -> bool {
        match self.sense {
            Sense::Le => act + lo <= self.rhs,
            Sense::Ge => act + hi >= self.rhs,
            Sense::Eq => act + lo <= self.rhs && act + hi >= self.rhs,
        }
    }
}

/// The model with every row (and the objective) multiplied by the lcm of its
/// denominators. Positive scaling preserves feasibility and the argmax.
#[derive(Debug)]
struct IntModel {
    n: usize,
    obj: Vec<i128>,
    rows: Vec<IntRow>,
    /// Per variable: (row index, coefficient) for nonzero coefficients.
    cols: Vec<Vec<(usize, i128)>>,
}

fn small(v: &BigInt, what: &str) -> Result<i128> {
    v.to_i64()
        .map(i128::from)
        .ok_or_else(|| Error::Overflow(format!("{what} {v}")))
}

impl IntModel {
    fn new(bp: &BinaryProgram) -> Result<Self> {
        let n = bp.n();
        let (obj, _) = scale_to_integers(bp.objective());
        let obj = obj
            .iter()
            .map(|c| small(c, "objective coefficient"))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(bp.constraints().len());
        let mut cols = vec![Vec::new(); n];
        for (r, c) in bp.constraints().iter().enumerate() {
            let mut all = c.row.clone();
            all.push(c.rhs.clone());
            let (ints, _) = scale_to_integers(&all);
            for (j, a) in ints[..n].iter().enumerate() {
                let a = small(a, "constraint coefficient")?;
                if a != 0 {
                    cols[j].push((r, a));
                }
            }
            rows.push(IntRow {
                sense: c.sense,
                rhs: small(&ints[n], "right-hand side")?,
            });
        }
        Ok(Self { n, obj, rows, cols })
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MASK_BITS);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exhaustive scan over variables",
            size: n,
            cap,
        });
    }
    Ok(())
}

/// Bit `n-1-i` holds variable `i`, so numeric order on masks is lexicographic
/// order on assignments.
fn mask_to_vec(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect()
}

/// Visits every feasible assignment (as a mask) with its scaled objective.
fn scan(m: &IntModel, mut visit: impl FnMut(u64, i128)) {
    let n = m.n;
    let mut act = vec![0i128; m.rows.len()];
    let mut violated = m.rows.iter().filter(|r| !r.holds(0)).count();
    let mut value = 0i128;
    let mut mask = 0u64;
    if violated == 0 {
        visit(mask, value);
    }
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let var = n - 1 - bit;
        mask ^= 1 << bit;
        let on = mask >> bit & 1 == 1;
        let sign = if on { 1 } else { -1 };
        value += sign * m.obj[var];
        for &(r, a) in &m.cols[var] {
            let row = &m.rows[r];
            let before = row.holds(act[r]);
            act[r] += sign * a;
            let after = row.holds(act[r]);
            match (before, after) {
                (true, false) => violated += 1,
                (false, true) => violated -= 1,
                _ => {}
            }
        }
        if violated == 0 {
            visit(mask, value);
        }
    }
}

/// Exhaustive scan of all `2ⁿ` assignments. Among maximizers the
/// lexicographically smallest assignment is returned.
pub fn solve_enumerate(bp: &BinaryProgram, cap: usize) -> Result<SolveReport> {
    check_cap(bp.n(), cap)?;
    let m = IntModel::new(bp)?;
    let mut best: Option<(i128, u64)> = None;
    scan(&m, |mask, value| match best {
        Some((v, bm)) if v > value || (v == value && bm <= mask) => {}
        _ => best = Some((value, mask)),
    });
    let nodes_explored = 1u64 << bp.n();
    Ok(match best {
        Some((_, mask)) => SolveReport {
            status: Status::Optimal,
            best: Some(Solution::new(bp, mask_to_vec(mask, bp.n()))),
            nodes_explored,
        },
        None => SolveReport {
            status: Status::Infeasible,
            best: None,
            nodes_explored,
        },
    })
}

/// Every feasible assignment, lexicographically sorted.
pub fn enumerate_feasible(bp: &BinaryProgram, cap: usize) -> Result<Vec<Vec<u8>>> {
    check_cap(bp.n(), cap)?;
    let m = IntModel::new(bp)?;
    let mut masks = Vec::new();
    scan(&m, |mask, _| masks.push(mask));
    masks.sort_unstable();
    Ok(masks.into_iter().map(|k| mask_to_vec(k, bp.n())).collect())
}

/// All feasible maximizers, lexicographically sorted.
pub fn enumerate_optimal_set(bp: &BinaryProgram, cap: usize) -> Result<Vec<Solution>> {
    check_cap(bp.n(), cap)?;
    let m = IntModel::new(bp)?;
    let mut best: Option<i128> = None;
    let mut masks = Vec::new();
    scan(&m, |mask, value| {
        if best.is_none_or(|b| value > b) {
            best = Some(value);
            masks.clear();
        }
        if best == Some(value) {
            masks.push(mask);
        }
    });
    if best.is_none() {
        return Err(Error::Infeasible);
    }
    masks.sort_unstable();
    Ok(masks
        .into_iter()
        .map(|k| Solution::new(bp, mask_to_vec(k, bp.n())))
        .collect())
}

struct Search<'a> {
    m: &'a IntModel,
    assign: Vec<u8>,
    act: Vec<i128>,
    lo: Vec<i128>,
    hi: Vec<i128>,
    /// Sum of positive objective coefficients from index k on.
    pos_suffix: Vec<i128>,
    best: Option<(i128, Vec<u8>)>,
    nodes: u64,
}

impl Search<'_> {
    fn fix(&mut self, var: usize, val: u8) -> bool {
        let mut ok = true;
        for &(r, a) in &self.m.cols[var] {
            self.lo[r] -= a.min(0);
            self.hi[r] -= a.max(0);
            if val == 1 {
                self.act[r] += a;
            }
            ok &= self.m.rows[r].reachable(self.act[r], self.lo[r], self.hi[r]);
        }
        ok
    }

    fn unfix(&mut self, var: usize, val: u8) {
        for &(r, a) in &self.m.cols[var] {
            self.lo[r] += a.min(0);
            self.hi[r] += a.max(0);
            if val == 1 {
                self.act[r] -= a;
            }
        }
    }

    fn dfs(&mut self, k: usize, value: i128) {
        self.nodes += 1;
        if k == self.m.n {
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.assign.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if value + self.pos_suffix[k] <= *b {
                return;
            }
        }
        for val in [1u8, 0] {
            self.assign[k] = val;
            if self.fix(k, val) {
                let gain = if val == 1 { self.m.obj[k] } else { 0 };
                self.dfs(k + 1, value + gain);
            }
            self.unfix(k, val);
        }
        self.assign[k] = 0;
    }
}

/// Depth-first branch-and-bound: variables in index order, 1-branch first.
///
/// The bound at a node is the fixed prefix value plus the positive objective
/// coefficients of the free variables. A branch is cut as soon as some row can
/// no longer be satisfied by any completion.
pub fn solve_bnb(bp: &BinaryProgram) -> Result<SolveReport> {
    let m = IntModel::new(bp)?;
    let mut lo = vec![0i128; m.rows.len()];
    let mut hi = vec![0i128; m.rows.len()];
    for col in &m.cols {
        for &(r, a) in col {
            lo[r] += a.min(0);
            hi[r] += a.max(0);
        }
    }
    let mut pos_suffix = vec![0i128; m.n + 1];
    for k in (0..m.n).rev() {
        pos_suffix[k] = pos_suffix[k + 1] + m.obj[k].max(0);
    }
    let root_ok = m
        .rows
        .iter()
        .enumerate()
        .all(|(r, row)| row.reachable(0, lo[r], hi[r]));
    let mut search = Search {
        m: &m,
        assign: vec![0; m.n],
        act: vec![0; m.rows.len()],
        lo,
        hi,
        pos_suffix,
        best: None,
        nodes: 0,
    };
    if root_ok {
        search.dfs(0, 0);
    } else {
        search.nodes = 1;
    }
    let nodes_explored = search.nodes;
    Ok(match search.best {
        Some((_, assignment)) => SolveReport {
            status: Status::Optimal,
            best: Some(Solution::new(bp, assignment)),
            nodes_explored,
        },
        None => SolveReport {
            status: Status::Infeasible,
            best: None,
            nodes_explored,
        },
    })
}
