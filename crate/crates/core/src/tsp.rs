//! Symmetric traveling salesman problem on the complete graph `K_n`.
//!
//! One variable per edge `ij` (`i < j`, lexicographic). The model keeps the
//! degree equalities and every subtour row `x(E(A)) ≤ |A| − 1` for
//! `2 ≤ |A| ≤ n − 1`, so its 0/1 solutions are exactly the tours. Costs are
//! minimized; the model maximizes their negation.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bpcore::{BinaryProgram, Constraint, Sense};
use crate::diameter::{self, choose_epsilon, solve_diameter, DiameterCheck, DiameterOptions, Variant};
use crate::error::{Error, Result};
use crate::instance::{check_item, PairWeight};
use crate::polytope::{enumerate_points_from_base, EquationSystem, IneqSense, Inequality, PointSet};
use crate::rational::{int, parse_rational, Rational};
use crate::ratlinalg::RatMatrix;

/// Largest `n` for which [`build`] enumerates subtour rows by default.
pub const SUBTOUR_CAP: usize = 10;
/// Largest `n` for which tours are enumerated (`(n−1)!/2` of them).
pub const TOUR_CAP: usize = 10;
/// Largest `n` accepted by [`verify_diameter_discordant`].
pub const VERIFY_CAP: usize = 8;

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// 0-based position of edge `{i, j}` (1-based, either order).
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i >= 1 && i < j && j <= n);
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// Edges in variable order.
pub fn edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTsp", into = "RawTsp")]
pub struct TspInstance {
    n: usize,
    /// Edge order, see [`edge_index`].
    costs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawTsp {
    n: usize,
    #[serde(default)]
    costs: Vec<PairWeight>,
}

impl TryFrom<RawTsp> for TspInstance {
    type Error = Error;

    fn try_from(raw: RawTsp) -> Result<Self> {
        let mut inst = TspInstance::zero(raw.n)?;
        for w in raw.costs {
            inst.set(w.i, w.j, w.value)?;
        }
        Ok(inst)
    }
}

impl From<TspInstance> for RawTsp {
    fn from(inst: TspInstance) -> Self {
        let costs = edges(inst.n)
            .into_iter()
            .zip(inst.costs)
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), value)| PairWeight { i, j, value })
            .collect();
        RawTsp { n: inst.n, costs }
    }
}

impl TspInstance {
    pub fn zero(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("a tour needs at least 3 cities"));
        }
        Ok(Self {
            n,
            costs: vec![Rational::zero(); edge_count(n)],
        })
    }

    /// From a symmetric `n × n` matrix; the diagonal is ignored.
    pub fn from_matrix(matrix: &[Vec<Rational>]) -> Result<Self> {
        let n = matrix.len();
        let mut inst = Self::zero(n)?;
        for row in matrix {
            Error::check_len(n, row.len())?;
        }
        for (i, j) in edges(n) {
            let (a, b) = (&matrix[i - 1][j - 1], &matrix[j - 1][i - 1]);
            if a != b {
                return Err(Error::invalid(format!("cost matrix is not symmetric at ({i}, {j})")));
            }
            inst.costs[edge_index(n, i, j)] = a.clone();
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn cost(&self, i: usize, j: usize) -> &Rational {
        &self.costs[edge_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        check_item(i, self.n)?;
        check_item(j, self.n)?;
        if i == j {
            return Err(Error::invalid(format!("cost on the loop ({i}, {i})")));
        }
        self.costs[edge_index(self.n, i, j)] = value;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization is infallible")
    }

    /// TSPLIB text with `EDGE_WEIGHT_TYPE: EXPLICIT` and a full matrix in
    /// `EDGE_WEIGHT_SECTION`.
    pub fn parse_tsplib(text: &str) -> Result<Self> {
        let mut dimension = None;
        let mut lines = text.lines();
        for line in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with("EDGE_WEIGHT_SECTION") {
                break;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(Error::parse(format!("unexpected TSPLIB line {line:?}")));
            };
            let value = value.trim();
            match key.trim() {
                "DIMENSION" => {
                    dimension = Some(value.parse::<usize>().map_err(|_| Error::parse("bad DIMENSION"))?);
                }
                "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                    return Err(Error::parse(format!("unsupported EDGE_WEIGHT_TYPE {value}")));
                }
                "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                    return Err(Error::parse(format!("unsupported EDGE_WEIGHT_FORMAT {value}")));
                }
                "TYPE" if value != "TSP" => {
                    return Err(Error::parse(format!("unsupported TYPE {value}")));
                }
                _ => {}
            }
        }
        let n = dimension.ok_or_else(|| Error::parse("missing DIMENSION"))?;
        let values = lines
            .take_while(|l| l.trim() != "EOF")
            .flat_map(str::split_whitespace)
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n * n {
            return Err(Error::parse(format!("expected {} matrix entries, found {}", n * n, values.len())));
        }
        Self::from_matrix(&values.chunks(n.max(1)).map(<[Rational]>::to_vec).collect::<Vec<_>>())
    }

    pub fn tour_cost(&self, t: &Tour) -> Rational {
        t.edges().iter().map(|&(i, j)| self.cost(i, j).clone()).sum()
    }
}

/// A Hamiltonian cycle, stored starting at city 1 with the second city
/// smaller than the last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Tour {
    cycle: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Tour {
    type Error = Error;

    fn try_from(cycle: Vec<usize>) -> Result<Self> {
        Tour::new(cycle)
    }
}

impl From<Tour> for Vec<usize> {
    fn from(t: Tour) -> Self {
        t.cycle
    }
}

impl Tour {
    /// Any rotation or reflection of a cycle through all of `1..=n`.
    pub fn new(mut cycle: Vec<usize>) -> Result<Self> {
        let n = cycle.len();
        if n < 3 {
            return Err(Error::invalid("a tour needs at least 3 cities"));
        }
        let mut seen = vec![false; n + 1];
        for &v in &cycle {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::invalid(format!("{cycle:?} does not visit 1..={n} once each")));
            }
        }
        let start = cycle.iter().position(|&v| v == 1).expect("1 is present");
        cycle.rotate_left(start);
        if cycle[1] > cycle[n - 1] {
            cycle[1..].reverse();
        }
        Ok(Self { cycle })
    }

    pub fn n(&self) -> usize {
        self.cycle.len()
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out: Vec<(usize, usize)> = (0..n)
            .map(|k| {
                let (a, b) = (self.cycle[k], self.cycle[(k + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Every tour of `K_n` in lexicographic order of the canonical cycle.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n < 3 {
            return Err(Error::invalid("a tour needs at least 3 cities"));
        }
        if n > TOUR_CAP {
            return Err(Error::CapExceeded {
                what: "tour enumeration",
                size: n,
                cap: TOUR_CAP,
            });
        }
        let mut rest: Vec<usize> = (2..=n).collect();
        let mut out = Vec::new();
        loop {
            if rest[0] < rest[rest.len() - 1] {
                let mut cycle = vec![1];
                cycle.extend_from_slice(&rest);
                out.push(Self { cycle });
            }
            if !next_permutation(&mut rest) {
                break;
            }
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

/// Subsets `A` of `1..=n` with `lo ≤ |A| ≤ hi`, by size then lexicographically.
fn subsets(n: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in lo..=hi {
        rec(1, n, size, &mut Vec::new(), &mut out);
    }
    out
}

fn subtour_row(n: usize, set: &[usize]) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); edge_count(n)];
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a + 1..] {
            row[edge_index(n, i, j)] = int(1);
        }
    }
    row
}

fn joined(set: &[usize]) -> String {
    set.iter().map(usize::to_string).collect::<Vec<_>>().join("_")
}

/// The tour model with all subtour rows; refuses `n > SUBTOUR_CAP`.
pub fn build(inst: &TspInstance) -> Result<BinaryProgram> {
    build_with_cap(inst, SUBTOUR_CAP)
}

pub fn build_with_cap(inst: &TspInstance, cap: usize) -> Result<BinaryProgram> {
    let n = inst.n;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "subtour enumeration",
            size: n,
            cap,
        });
    }
    let names = edges(n).iter().map(|(i, j)| format!("x_{i}_{j}")).collect();
    let objective = inst.costs.iter().map(|c| -c.clone()).collect();
    let mut bp = BinaryProgram::new(names, objective)?.named(format!("tsp{n}"));
    for v in 1..=n {
        let mut row = vec![Rational::zero(); edge_count(n)];
        for u in (1..=n).filter(|&u| u != v) {
            row[edge_index(n, u, v)] = int(1);
        }
        bp.push(Constraint::new(row, Sense::Eq, int(2)).named(format!("deg_{v}")))?;
    }
    for set in subsets(n, 2, n - 1) {
        let rhs = int(set.len() as i64 - 1);
        bp.push(Constraint::new(subtour_row(n, &set), Sense::Le, rhs).named(format!("sub_{}", joined(&set))))?;
    }
    Ok(bp)
}

pub fn tour_to_incidence(t: &Tour) -> Vec<u8> {
    let n = t.n();
    let mut x = vec![0u8; edge_count(n)];
    for (i, j) in t.edges() {
        x[edge_index(n, i, j)] = 1;
    }
    x
}

/// Inverse of [`tour_to_incidence`]; rejects vectors that are not a single cycle.
pub fn incidence_to_tour(x: &[u8], n: usize) -> Result<Tour> {
    if n < 3 {
        return Err(Error::invalid("a tour needs at least 3 cities"));
    }
    Error::check_len(edge_count(n), x.len())?;
    let not_tour = || Error::invalid("incidence vector is not a tour");
    let mut adj = vec![Vec::new(); n + 1];
    for (i, j) in edges(n) {
        match x[edge_index(n, i, j)] {
            0 => {}
            1 => {
                adj[i].push(j);
                adj[j].push(i);
            }
            _ => return Err(not_tour()),
        }
    }
    if adj[1..].iter().any(|a| a.len() != 2) {
        return Err(not_tour());
    }
    let mut cycle = vec![1, adj[1][0]];
    while cycle.len() < n {
        let (prev, cur) = (cycle[cycle.len() - 2], cycle[cycle.len() - 1]);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        if next == 1 {
            return Err(not_tour());
        }
        cycle.push(next);
    }
    Tour::new(cycle)
}

/// Size of the symmetric difference of the two edge sets.
pub fn discordant_edges(t1: &Tour, t2: &Tour) -> Result<usize> {
    Ok(2 * unshared_edges(t1, t2)?)
}

/// Edges of `t1` that `t2` does not use; half of [`discordant_edges`] since
/// both tours have `n` edges.
pub fn unshared_edges(t1: &Tour, t2: &Tour) -> Result<usize> {
    Error::check_len(t1.n(), t2.n())?;
    let (a, b) = (t1.edges(), t2.edges());
    let shared = a.iter().filter(|e| b.binary_search(e).is_ok()).count();
    Ok(t1.n() - shared)
}

/// Cheapest tours by enumeration.
pub fn optimal_tours(inst: &TspInstance) -> Result<Vec<Tour>> {
    let all = Tour::all(inst.n)?;
    let costs: Vec<Rational> = all.iter().map(|t| inst.tour_cost(t)).collect();
    let best = costs.iter().min().expect("at least one tour").clone();
    Ok(all.into_iter().zip(costs).filter(|(_, c)| *c == best).map(|(t, _)| t).collect())
}

/// The diameter from the derived program (conjugate variant, `‖x‖² = n`)
/// next to twice the largest number of edges one optimal tour uses and
/// another does not.
pub fn diameter_check_discordant(inst: &TspInstance, opts: &DiameterOptions) -> Result<DiameterCheck> {
    if inst.n > VERIFY_CAP {
        return Err(Error::CapExceeded {
            what: "tour enumeration for diameter verification",
            size: inst.n,
            cap: VERIFY_CAP,
        });
    }
    let opt = optimal_tours(inst)?;
    let bp = build(inst)?;
    let dp = diameter::build(&bp, choose_epsilon(&bp), Variant::Conjugate);
    let opts = DiameterOptions {
        constant_norm: Some(inst.n),
        ..opts.clone()
    };
    let result = solve_diameter(&dp, &opts)?;
    let mut max_d = 0;
    for (a, t1) in opt.iter().enumerate() {
        for t2 in &opt[a + 1..] {
            max_d = max_d.max(unshared_edges(t1, t2)?);
        }
    }
    Ok(DiameterCheck {
        via_program: result.diameter,
        via_oracle: 2 * max_d as u64,
        result,
    })
}

pub fn verify_diameter_discordant(inst: &TspInstance) -> Result<bool> {
    Ok(diameter_check_discordant(inst, &DiameterOptions::default())?.holds())
}

/// A tour sharing no edge with `t`, found by backtracking over the complement
/// graph (neighbors tried in increasing order). `None` when none exists,
/// which is always the case for `n ≤ 4`.
pub fn find_disjoint_tour(t: &Tour) -> Option<Tour> {
    let n = t.n();
    let used = t.edges();
    let allowed = |a: usize, b: usize| a != b && used.binary_search(&(a.min(b), a.max(b))).is_err();

    fn extend(path: &mut Vec<usize>, visited: &mut [bool], n: usize, allowed: &dyn Fn(usize, usize) -> bool) -> bool {
        let last = *path.last().expect("path starts at 1");
        if path.len() == n {
            return allowed(last, 1);
        }
        for v in 2..=n {
            if !visited[v] && allowed(last, v) {
                visited[v] = true;
                path.push(v);
                if extend(path, visited, n, allowed) {
                    return true;
                }
                path.pop();
                visited[v] = false;
            }
        }
        false
    }

    let mut path = vec![1];
    let mut visited = vec![false; n + 1];
    visited[1] = true;
    if extend(&mut path, &mut visited, n, &allowed) {
        Some(Tour::new(path).expect("a Hamiltonian path closed into a cycle"))
    } else {
        None
    }
}

/// Degree equalities `x(δ(v)) = 2`, one per city.
pub fn degree_system(n: usize) -> EquationSystem {
    let m = edge_count(n);
    let rows = (1..=n)
        .map(|v| {
            let mut row = vec![Rational::zero(); m];
            for u in (1..=n).filter(|&u| u != v) {
                row[edge_index(n, u, v)] = int(1);
            }
            row
        })
        .collect();
    EquationSystem::new(RatMatrix::from_rows(m, rows).expect("row length"), vec![int(2); n]).expect("one rhs per row")
}

/// Facets of the tour polytope used as inherited families: `x_e ≥ 0` for
/// every edge, then the subtour rows with `2 ≤ |A| ≤ n − 2` (for `|A| = 2`
/// these are the bounds `x_e ≤ 1`).
pub fn base_facets(n: usize) -> Vec<Inequality> {
    let m = edge_count(n);
    let mut out: Vec<Inequality> = (0..m).map(|k| Inequality::sparse(m, &[(k, 1)], IneqSense::Ge, 0)).collect();
    for set in subsets(n, 2, n.saturating_sub(2)) {
        out.push(Inequality::le(subtour_row(n, &set), int(set.len() as i64 - 1)));
    }
    out
}

/// The two additional facets of the four-city diameter polytope:
/// `x12 + x13 + y12 + y24 + z23 ≥ 3` and `x12 + x13 + y12 + y24 + z14 ≥ 3`.
pub fn extra_facets_n4() -> Vec<Inequality> {
    let m = edge_count(4);
    let e = |i, j| edge_index(4, i, j);
    let common = [(e(1, 2), 1), (m + e(1, 2), 1), (e(1, 3), 1), (m + e(2, 4), 1)];
    [e(2, 3), e(1, 4)]
        .into_iter()
        .map(|z| {
            let mut terms = common.to_vec();
            terms.push((2 * m + z, 1));
            Inequality::sparse(3 * m, &terms, IneqSense::Ge, 3)
        })
        .collect()
}

/// Incidence vectors of all tours of `K_n`.
pub fn feasible_points(n: usize) -> Result<Vec<Vec<u8>>> {
    Ok(Tour::all(n)?.iter().map(tour_to_incidence).collect())
}

/// Points of the diameter polytope for `n` cities, generated from tour pairs.
pub fn diameter_polytope(n: usize) -> Result<PointSet> {
    let bp = build(&TspInstance::zero(n)?)?;
    let dp = diameter::build(&bp, choose_epsilon(&bp), Variant::Conjugate);
    enumerate_points_from_base(&dp, &feasible_points(n)?)
}
