//! Diameter polytopes: point enumeration, affine hulls and exact facet tests.
//!
//! The polytope of the conjugate diameter program is the convex hull of its
//! 0/1 feasible points. Points are generated from pairs `(x̄, ȳ)` of base
//! feasible points plus every `z` allowed by `x + y − z ≤ e`: `zᵢ` is forced
//! to one where `x̄ᵢ = ȳᵢ = 1` and free elsewhere.
//!
//! An inequality is facet-defining when it is valid and its tight points span
//! an affine space of dimension `dim P − 1`; both dimensions are computed by
//! exact rank accumulation.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bpcore::{enumerate_feasible, BinaryProgram};
use crate::diameter::{DiameterProgram, Variant};
use crate::error::{Error, Result};
use crate::rational::{int, json, scale_to_integers, Rational};
use crate::ratlinalg::{RankBuilder, RatMatrix};

/// Distinct 0/1 points, stored flat and sorted lexicographically.
#[derive(Debug)]
pub struct PointSet {
    ambient: usize,
    data: Vec<u8>,
    source: String,
    dimension: OnceLock<usize>,
}

impl Clone for PointSet {
    fn clone(&self) -> Self {
        let dimension = OnceLock::new();
        if let Some(&d) = self.dimension.get() {
            let _ = dimension.set(d);
        }
        Self {
            ambient: self.ambient,
            data: self.data.clone(),
            source: self.source.clone(),
            dimension,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetHeader {
    pub n: usize,
    pub ambient: usize,
    pub count: usize,
    pub source: String,
}

impl PointSet {
    /// Sorts and deduplicates `points`; every point must have length `ambient`
    /// and 0/1 entries.
    pub fn new(ambient: usize, mut points: Vec<Vec<u8>>, source: impl Into<String>) -> Result<Self> {
        for p in &points {
            Error::check_len(ambient, p.len())?;
            if p.iter().any(|&v| v > 1) {
                return Err(Error::invalid("points must be 0/1 vectors"));
            }
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self {
            ambient,
            data: points.concat(),
            source: source.into(),
            dimension: OnceLock::new(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        if self.ambient == 0 {
            0
        } else {
            self.data.len() / self.ambient
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn point(&self, i: usize) -> &[u8] {
        &self.data[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.ambient.max(1))
    }

    pub fn contains(&self, p: &[u8]) -> bool {
        if p.len() != self.ambient {
            return false;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Header for the text export; `n` is the base variable count (ambient / 3).
    pub fn header(&self) -> PointSetHeader {
        PointSetHeader {
            n: self.ambient / 3,
            ambient: self.ambient,
            count: self.len(),
            source: self.source.clone(),
        }
    }

    /// One space-separated 0/1 row per point.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 2);
        for p in self.iter() {
            for (k, v) in p.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push(if *v == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Coordinates that take the same value at every point, with that value.
    pub fn fixed_coordinates(&self) -> Vec<(usize, u8)> {
        let Some(first) = self.iter().next() else {
            return Vec::new();
        };
        (0..self.ambient)
            .filter(|&c| self.iter().all(|p| p[c] == first[c]))
            .map(|c| (c, first[c]))
            .collect()
    }

    /// Indices of points that extend the affine span, in order; at most `dim + 1` of them.
    fn affine_basis_indices(&self) -> Vec<usize> {
        let mut picked = Vec::new();
        if self.is_empty() {
            return picked;
        }
        picked.push(0);
        let p0 = self.point(0);
        let mut builder = RankBuilder::new(self.ambient);
        let mut diff = vec![0i64; self.ambient];
        for i in 1..self.len() {
            let before = builder.rank();
            for (d, (&a, &b)) in diff.iter_mut().zip(self.point(i).iter().zip(p0)) {
                *d = a as i64 - b as i64;
            }
            if builder.push_int(&diff).expect("uniform length") > before {
                picked.push(i);
            }
            if builder.is_saturated() {
                break;
            }
        }
        picked
    }
}

/// Affine dimension of a sequence of equal-length 0/1 points, stopping once `limit` is reached.
fn affine_dimension_01<'a>(ambient: usize, limit: usize, points: impl IntoIterator<Item = &'a [u8]>) -> Option<usize> {
    let mut it = points.into_iter();
    let p0 = it.next()?.to_vec();
    let mut builder = RankBuilder::with_limit(ambient, limit);
    let mut diff = vec![0i64; ambient];
    for p in it {
        for (d, (&a, &b)) in diff.iter_mut().zip(p.iter().zip(&p0)) {
            *d = a as i64 - b as i64;
        }
        builder.push_int(&diff).expect("uniform length");
        if builder.is_saturated() {
            break;
        }
    }
    Some(builder.rank())
}

/// Linear equations `matrix · v = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    matrix: RatMatrix,
    rhs: Vec<Rational>,
}

impl EquationSystem {
    pub fn new(matrix: RatMatrix, rhs: Vec<Rational>) -> Result<Self> {
        Error::check_len(matrix.rows(), rhs.len())?;
        Ok(Self { matrix, rhs })
    }

    /// No equations over `cols` coordinates (a full-dimensional polytope).
    pub fn empty(cols: usize) -> Self {
        Self {
            matrix: RatMatrix::zeros(0, cols),
            rhs: Vec::new(),
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn without_row(&self, r: usize) -> Self {
        let mut rhs = self.rhs.clone();
        rhs.remove(r);
        Self {
            matrix: self.matrix.without_row(r),
            rhs,
        }
    }

    pub fn is_satisfied_by(&self, p: &[u8]) -> bool {
        self.matrix.row_iter().zip(&self.rhs).all(|(row, b)| {
            let lhs: Rational = row
                .iter()
                .zip(p)
                .filter(|(_, &v)| v == 1)
                .map(|(a, _)| a.clone())
                .sum();
            &lhs == b
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IneqSense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// `aᵀv ≤ a0` or `aᵀv ≥ a0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "json::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "json")]
    pub a0: Rational,
    pub sense: IneqSense,
}

impl Inequality {
    pub fn le(a: Vec<Rational>, a0: Rational) -> Self {
        Self {
            a,
            a0,
            sense: IneqSense::Le,
        }
    }

    pub fn ge(a: Vec<Rational>, a0: Rational) -> Self {
        Self {
            a,
            a0,
            sense: IneqSense::Ge,
        }
    }

    /// Builds from sparse 0-based (index, coefficient) terms.
    pub fn sparse(len: usize, terms: &[(usize, i64)], sense: IneqSense, a0: i64) -> Self {
        let mut a = vec![Rational::zero(); len];
        for &(i, c) in terms {
            a[i] += int(c);
        }
        Self { a, a0: int(a0), sense }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// All coefficients zero.
    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// The same half-space written as `≤`.
    pub fn to_le(&self) -> Self {
        match self.sense {
            IneqSense::Le => self.clone(),
            IneqSense::Ge => Self::le(self.a.iter().map(|c| -c).collect(), -self.a0.clone()),
        }
    }

    pub fn holds_at(&self, p: &[u8]) -> bool {
        let lhs: Rational = self
            .a
            .iter()
            .zip(p)
            .filter(|(_, &v)| v == 1)
            .map(|(a, _)| a.clone())
            .sum();
        match self.sense {
            IneqSense::Le => lhs <= self.a0,
            IneqSense::Ge => lhs >= self.a0,
        }
    }

    pub fn list_from_json(text: &str) -> Result<Vec<Self>> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `≤` form scaled to integers: `coeffs · v ≤ rhs`.
struct IntInequality {
    coeffs: Vec<i128>,
    rhs: i128,
}

impl IntInequality {
    fn new(ineq: &Inequality) -> Result<Self> {
        let le = ineq.to_le();
        let mut all = le.a.clone();
        all.push(le.a0.clone());
        let (ints, _) = scale_to_integers(&all);
        let conv = |v: &BigInt| {
            v.to_i64()
                .map(i128::from)
                .ok_or_else(|| Error::Overflow(format!("inequality coefficient {v}")))
        };
        let coeffs = ints[..le.a.len()].iter().map(conv).collect::<Result<Vec<_>>>()?;
        let rhs = conv(&ints[le.a.len()])?;
        Ok(Self { coeffs, rhs })
    }

    fn lhs(&self, p: &[u8]) -> i128 {
        self.coeffs
            .iter()
            .zip(p)
            .filter(|(_, &v)| v == 1)
            .map(|(c, _)| *c)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetReport {
    pub valid: bool,
    pub tight_point_count: usize,
    /// −1 for an empty face.
    pub face_dimension: i64,
    pub polytope_dimension: i64,
    pub is_facet: bool,
}

fn require_conjugate(dp: &DiameterProgram) -> Result<()> {
    if dp.variant() != Variant::Conjugate {
        return Err(Error::invalid(
            "point enumeration is defined for the conjugate variant (no lower coupling rows)",
        ));
    }
    Ok(())
}

/// All 0/1 points of the diameter polytope, generated from pairs of base
/// feasible points. `base_points` must be exactly the feasible set of the
/// base program (structured generators such as permutations or tours supply
/// it directly).
pub fn enumerate_points_from_base(dp: &DiameterProgram, base_points: &[Vec<u8>]) -> Result<PointSet> {
    require_conjugate(dp)?;
    let n = dp.n();
    for p in base_points {
        Error::check_len(n, p.len())?;
    }
    let mut points = Vec::new();
    for x in base_points {
        for y in base_points {
            let mut free = Vec::new();
            let mut template = Vec::with_capacity(3 * n);
            template.extend_from_slice(x);
            template.extend_from_slice(y);
            for i in 0..n {
                let forced = x[i] == 1 && y[i] == 1;
                template.push(forced as u8);
                if !forced {
                    free.push(2 * n + i);
                }
            }
            for bits in 0u64..(1u64 << free.len()) {
                let mut p = template.clone();
                for (k, &pos) in free.iter().enumerate() {
                    p[pos] = (bits >> k & 1) as u8;
                }
                points.push(p);
            }
        }
    }
    PointSet::new(
        3 * n,
        points,
        format!("{} ({} base points)", dp.derived().name(), base_points.len()),
    )
}

/// Same as [`enumerate_points_from_base`], with the base feasible set found by
/// exhaustive scan of the base program (`n ≤ cap`).
pub fn enumerate_points(dp: &DiameterProgram, cap: usize) -> Result<PointSet> {
    require_conjugate(dp)?;
    let base = enumerate_feasible(dp.base(), cap)?;
    enumerate_points_from_base(dp, &base)
}

/// Dimension of the affine hull of the points.
pub fn hull_dimension(ps: &PointSet) -> Result<usize> {
    if ps.is_empty() {
        return Err(Error::EmptyInput("point set"));
    }
    Ok(*ps
        .dimension
        .get_or_init(|| affine_dimension_01(ps.ambient, ps.ambient, ps.iter()).expect("nonempty")))
}

/// A minimal equation system of the affine hull, computed from the points.
pub fn affine_hull_equations(ps: &PointSet) -> Result<EquationSystem> {
    if ps.is_empty() {
        return Err(Error::EmptyInput("point set"));
    }
    let basis = ps.affine_basis_indices();
    // Rows [p, -1]: (a, a0) in the nullspace means a·p = a0 on every basis point.
    let rows = basis
        .iter()
        .map(|&i| {
            let mut r: Vec<Rational> = ps.point(i).iter().map(|&v| int(v as i64)).collect();
            r.push(int(-1));
            r
        })
        .collect();
    let m = RatMatrix::from_rows(ps.ambient + 1, rows)?;
    let ns = m.nullspace();
    let mut a_rows = Vec::with_capacity(ns.len());
    let mut rhs = Vec::with_capacity(ns.len());
    for mut v in ns {
        let a0 = v.pop().expect("ambient + 1 entries");
        a_rows.push(v);
        rhs.push(a0);
    }
    EquationSystem::new(RatMatrix::from_rows(ps.ambient, a_rows)?, rhs)
}

/// `[M ⊕ M | O]` with right-hand side `d ⊕ d`: the base equations copied onto
/// the x and y blocks, zero on z.
pub fn lift_equation_system(base: &EquationSystem, n: usize) -> Result<EquationSystem> {
    Error::check_len(n, base.cols())?;
    let m = base.rows();
    let mut lifted = RatMatrix::zeros(2 * m, 3 * n);
    for r in 0..m {
        for c in 0..n {
            let v = base.matrix().get(r, c);
            if !v.is_zero() {
                lifted.set(r, c, v.clone());
                lifted.set(m + r, n + c, v.clone());
            }
        }
    }
    let mut rhs = base.rhs().to_vec();
    rhs.extend(base.rhs().iter().cloned());
    EquationSystem::new(lifted, rhs)
}

/// True iff every point satisfies `sys` and `dim = ambient − rank(sys)`.
pub fn verify_minimal_system(ps: &PointSet, sys: &EquationSystem) -> Result<bool> {
    Error::check_len(ps.ambient(), sys.cols())?;
    if !ps.iter().all(|p| sys.is_satisfied_by(p)) {
        return Ok(false);
    }
    Ok(hull_dimension(ps)? + sys.rank() == ps.ambient())
}

/// Validity and face dimension of `ineq` on the polytope spanned by `ps`.
pub fn check_inequality(ps: &PointSet, ineq: &Inequality) -> Result<FacetReport> {
    Error::check_len(ps.ambient(), ineq.len())?;
    let dim = hull_dimension(ps)?;
    let scaled = IntInequality::new(ineq)?;
    let mut valid = true;
    let mut tight = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let lhs = scaled.lhs(p);
        if lhs > scaled.rhs {
            valid = false;
        } else if lhs == scaled.rhs {
            tight.push(i);
        }
    }
    let face_dimension = affine_dimension_01(ps.ambient, dim, tight.iter().map(|&i| ps.point(i)))
        .map_or(-1, |d| d as i64);
    let polytope_dimension = dim as i64;
    Ok(FacetReport {
        valid,
        tight_point_count: tight.len(),
        face_dimension,
        polytope_dimension,
        is_facet: valid && face_dimension == polytope_dimension - 1,
    })
}

/// Every facet of a small polytope, by testing the hyperplane through each
/// `dim`-subset of points. Meant for polytopes with a handful of points; fails
/// with `CapExceeded` when more than `cap` subsets would be examined. Each
/// facet is returned once, as a `≤` inequality with coprime integer data, in
/// order of first discovery.
pub fn enumerate_facets_small(ps: &PointSet, cap: usize) -> Result<Vec<Inequality>> {
    let dim = hull_dimension(ps)?;
    let count = ps.len();
    let subsets = binomial(count, dim);
    if subsets > cap as u128 {
        return Err(Error::CapExceeded {
            what: "facet subset search",
            size: usize::try_from(subsets).unwrap_or(usize::MAX),
            cap,
        });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let hull: Vec<Vec<Rational>> = {
        let h = affine_hull_equations(ps)?;
        h.matrix()
            .row_iter()
            .zip(h.rhs())
            .map(|(row, b)| {
                let mut v = row.to_vec();
                v.push(b.clone());
                v
            })
            .collect()
    };
    let lifted: Vec<Vec<Rational>> = ps
        .iter()
        .map(|p| {
            let mut r: Vec<Rational> = p.iter().map(|&v| int(v as i64)).collect();
            r.push(int(-1));
            r
        })
        .collect();

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let rows = idx.iter().map(|&i| lifted[i].clone()).collect();
        let ns = RatMatrix::from_rows(ps.ambient + 1, rows)?.nullspace();
        if ns.len() == hull.len() + 1 {
            let normal = ns
                .into_iter()
                .find(|v| {
                    let mut rows = hull.clone();
                    rows.push(v.clone());
                    RatMatrix::from_rows(ps.ambient + 1, rows).expect("uniform rows").rank() > hull.len()
                })
                .expect("nullspace exceeds the hull equations");
            let slack: Vec<Rational> = lifted
                .iter()
                .map(|r| r.iter().zip(&normal).map(|(a, b)| a * b).sum())
                .collect();
            let nonneg = slack.iter().all(|s| !s.is_negative());
            let nonpos = slack.iter().all(|s| !s.is_positive());
            if nonneg != nonpos {
                let tight: Vec<bool> = slack.iter().map(Zero::is_zero).collect();
                if seen.insert(tight) {
                    // slack = a·p − a0 with the normal read as (a, a0).
                    let sign = if nonpos { int(1) } else { int(-1) };
                    let mut coeffs: Vec<Rational> = normal.iter().map(|c| c * &sign).collect();
                    let a0 = coeffs.pop().expect("ambient + 1 entries");
                    out.push(normalize(Inequality::le(coeffs, a0)));
                }
            }
        }
        if !next_combination(&mut idx, count) {
            break;
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[pos] += 1;
    for i in pos + 1..k {
        idx[i] = idx[i - 1] + 1;
    }
    true
}

/// Scales to coprime integers, keeping the direction.
fn normalize(ineq: Inequality) -> Inequality {
    let mut all = ineq.a.clone();
    all.push(ineq.a0.clone());
    let (ints, _) = scale_to_integers(&all);
    let g = ints.iter().fold(BigInt::zero(), |g, v| num_integer::Integer::gcd(&g, v));
    if g.is_zero() {
        return ineq;
    }
    let mut vals: Vec<Rational> = ints.into_iter().map(|v| Rational::from_integer(v / &g)).collect();
    let a0 = vals.pop().expect("nonempty");
    Inequality { a: vals, a0, sense: ineq.sense }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `a ⊕ 0 ⊕ 0` for a base facet `a`.
    InheritedX,
    /// `0 ⊕ a ⊕ 0`.
    InheritedY,
    /// `zᵢ ≥ 0`.
    ZLower,
    /// `zᵢ ≤ 1`.
    ZUpper,
    /// `xᵢ + yᵢ − zᵢ ≤ 1`.
    Coupling,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::InheritedX => "inherited-x",
            Family::InheritedY => "inherited-y",
            Family::ZLower => "z-lower",
            Family::ZUpper => "z-upper",
            Family::Coupling => "coupling",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInequality {
    pub family: Family,
    /// Base facet index for inherited families, coordinate index otherwise.
    pub index: usize,
    pub inequality: Inequality,
}

/// The inequality families known to define facets of the diameter polytope
/// (under the disjoint-pair hypothesis): both lifted copies of each base
/// facet, the z bounds and the coupling rows. `2·|base| + 3n` entries.
pub fn facet_families(n: usize, base_facets: &[Inequality]) -> Result<Vec<FamilyInequality>> {
    let mut out = Vec::with_capacity(2 * base_facets.len() + 3 * n);
    for (family, block) in [(Family::InheritedX, 0), (Family::InheritedY, 1)] {
        for (index, f) in base_facets.iter().enumerate() {
            Error::check_len(n, f.len())?;
            let mut a = vec![Rational::zero(); 3 * n];
            a[block * n..(block + 1) * n].clone_from_slice(&f.a);
            out.push(FamilyInequality {
                family,
                index,
                inequality: Inequality {
                    a,
                    a0: f.a0.clone(),
                    sense: f.sense,
                },
            });
        }
    }
    for i in 0..n {
        out.push(FamilyInequality {
            family: Family::ZLower,
            index: i,
            inequality: Inequality::sparse(3 * n, &[(2 * n + i, 1)], IneqSense::Ge, 0),
        });
    }
    for i in 0..n {
        out.push(FamilyInequality {
            family: Family::ZUpper,
            index: i,
            inequality: Inequality::sparse(3 * n, &[(2 * n + i, 1)], IneqSense::Le, 1),
        });
    }
    for i in 0..n {
        out.push(FamilyInequality {
            family: Family::Coupling,
            index: i,
            inequality: Inequality::sparse(3 * n, &[(i, 1), (n + i, 1), (2 * n + i, -1)], IneqSense::Le, 1),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointPairReport {
    pub feasible_count: usize,
    /// Some pair `x̄, ȳ` with `x̄ + ȳ ≤ e` exists.
    pub existential: bool,
    pub witness: Option<(Vec<u8>, Vec<u8>)>,
    /// Every `x̄` has such a partner.
    pub universal: bool,
    /// A feasible point with no disjoint partner.
    pub counterexample: Option<Vec<u8>>,
}

fn disjoint(a: &[u8], b: &[u8]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x + y <= 1)
}

/// Checks the disjoint-pair conditions on an explicit feasible set.
pub fn disjoint_pair_condition_from_points(points: &[Vec<u8>]) -> DisjointPairReport {
    let mut witness = None;
    let mut counterexample = None;
    for x in points {
        match points.iter().find(|y| disjoint(x, y)) {
            Some(y) => {
                witness.get_or_insert_with(|| (x.clone(), y.clone()));
            }
            None => {
                counterexample.get_or_insert_with(|| x.clone());
            }
        }
    }
    DisjointPairReport {
        feasible_count: points.len(),
        existential: witness.is_some(),
        universal: counterexample.is_none() && !points.is_empty(),
        witness,
        counterexample,
    }
}

/// Checks the disjoint-pair conditions on the feasible set of `base` (`n ≤ cap`).
pub fn check_disjoint_pair_condition(base: &BinaryProgram, cap: usize) -> Result<DisjointPairReport> {
    Ok(disjoint_pair_condition_from_points(&enumerate_feasible(base, cap)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpcore::Sense;
    use crate::diameter::{build, choose_epsilon};
    use crate::rational::rat;

    fn pack2() -> BinaryProgram {
        let mut bp = BinaryProgram::with_objective(vec![int(0), int(0)]).unwrap();
        bp.add(vec![int(1), int(1)], Sense::Le, int(1)).unwrap();
        bp
    }

    fn brute_force(dp: &DiameterProgram) -> Vec<Vec<u8>> {
        let m = dp.derived().n();
        (0u64..1 << m)
            .map(|mask| (0..m).map(|i| (mask >> (m - 1 - i) & 1) as u8).collect::<Vec<u8>>())
            .filter(|p| dp.derived().is_feasible(p).unwrap())
            .collect()
    }

    #[test]
    fn structured_generation_matches_brute_force() {
        let dp = build(&pack2(), choose_epsilon(&pack2()), Variant::Conjugate);
        let ps = enumerate_points(&dp, 26).unwrap();
        let brute = brute_force(&dp);
        assert_eq!(ps.len(), brute.len());
        assert_eq!(ps.iter().map(<[u8]>::to_vec).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn full_variant_is_rejected() {
        let dp = build(&pack2(), choose_epsilon(&pack2()), Variant::Full);
        assert!(enumerate_points(&dp, 26).is_err());
    }

    #[test]
    fn point_set_sorts_and_dedups() {
        let ps = PointSet::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 0]], "t").unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.point(0), &[0, 1]);
        assert!(ps.contains(&[1, 0]));
        assert!(!ps.contains(&[1, 1]));
        assert_eq!(ps.to_text(), "0 1\n1 0\n");
        assert!(PointSet::new(2, vec![vec![1]], "t").is_err());
        assert!(PointSet::new(2, vec![vec![2, 0]], "t").is_err());
        assert!(hull_dimension(&PointSet::new(2, vec![], "t").unwrap()).is_err());
    }

    #[test]
    fn free_model_is_full_dimensional() {
        // Fes = {00, 01, 10} is full dimensional and 01 + 10 <= e, so the
        // diameter polytope is full dimensional too.
        let dp = build(&pack2(), choose_epsilon(&pack2()), Variant::Conjugate);
        let ps = enumerate_points(&dp, 26).unwrap();
        assert_eq!(hull_dimension(&ps).unwrap(), 6);
        assert!(verify_minimal_system(&ps, &EquationSystem::empty(6)).unwrap());
        assert_eq!(affine_hull_equations(&ps).unwrap().rows(), 0);
        assert!(ps.fixed_coordinates().is_empty());
    }

    #[test]
    fn trivial_inequality_defines_empty_face() {
        let dp = build(&pack2(), choose_epsilon(&pack2()), Variant::Conjugate);
        let ps = enumerate_points(&dp, 26).unwrap();
        let r = check_inequality(&ps, &Inequality::le(vec![Rational::zero(); 6], int(1))).unwrap();
        assert!(r.valid);
        assert_eq!(r.tight_point_count, 0);
        assert_eq!(r.face_dimension, -1);
        assert!(!r.is_facet);
        let bad = Inequality::sparse(6, &[(0, 1)], IneqSense::Le, 0);
        assert!(!check_inequality(&ps, &bad).unwrap().valid);
        assert!(check_inequality(&ps, &Inequality::le(vec![int(1)], int(0))).is_err());
    }

    #[test]
    fn families_for_one_variable() {
        let fam = facet_families(1, &[]).unwrap();
        let got: Vec<(Family, Inequality)> = fam.into_iter().map(|f| (f.family, f.inequality)).collect();
        assert_eq!(
            got,
            vec![
                (Family::ZLower, Inequality::ge(vec![int(0), int(0), int(1)], int(0))),
                (Family::ZUpper, Inequality::le(vec![int(0), int(0), int(1)], int(1))),
                (Family::Coupling, Inequality::le(vec![int(1), int(1), int(-1)], int(1))),
            ]
        );
        let base = vec![Inequality::le(vec![int(1), int(1)], int(1))];
        assert_eq!(facet_families(2, &base).unwrap().len(), 2 + 6);
        assert!(facet_families(3, &base).is_err());
    }

    #[test]
    fn lifted_system_shape() {
        let base = EquationSystem::new(
            RatMatrix::from_rows(2, vec![vec![int(1), int(1)]]).unwrap(),
            vec![int(1)],
        )
        .unwrap();
        let lifted = lift_equation_system(&base, 2).unwrap();
        assert_eq!((lifted.rows(), lifted.cols()), (2, 6));
        assert_eq!(lifted.rank(), 2);
        assert_eq!(lifted.matrix().row(1), &[int(0), int(0), int(1), int(1), int(0), int(0)]);
        assert_eq!(lifted.rhs(), &[int(1), int(1)]);
        let empty = lift_equation_system(&EquationSystem::empty(4), 4).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 12));
        assert!(lift_equation_system(&base, 3).is_err());
    }

    #[test]
    fn disjoint_pairs() {
        let r = check_disjoint_pair_condition(&pack2(), 26).unwrap();
        assert!(r.existential && r.universal);
        // Exactly one of two: {10, 01}; each has the other as partner.
        let mut one = BinaryProgram::with_objective(vec![int(0), int(0)]).unwrap();
        one.add(vec![int(1), int(1)], Sense::Eq, int(1)).unwrap();
        assert!(check_disjoint_pair_condition(&one, 26).unwrap().universal);
        // Both forced to one: no disjoint partner at all.
        let mut both = BinaryProgram::with_objective(vec![int(0), int(0)]).unwrap();
        both.add(vec![int(1), int(1)], Sense::Eq, int(2)).unwrap();
        let r = check_disjoint_pair_condition(&both, 26).unwrap();
        assert!(!r.existential && !r.universal);
        assert_eq!(r.counterexample, Some(vec![1, 1]));
    }

    #[test]
    fn facets_of_a_square() {
        let ps = PointSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]], "square").unwrap();
        let mut got: Vec<(Vec<Rational>, Rational)> = enumerate_facets_small(&ps, 100)
            .unwrap()
            .into_iter()
            .map(|f| (f.a, f.a0))
            .collect();
        got.sort();
        let mut want = vec![
            (vec![int(-1), int(0)], int(0)),
            (vec![int(0), int(-1)], int(0)),
            (vec![int(1), int(0)], int(1)),
            (vec![int(0), int(1)], int(1)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(enumerate_facets_small(&ps, 5).is_err());
    }

    #[test]
    fn facets_inside_an_affine_hull() {
        // A triangle on the plane x1 + x2 + x3 = 1: three edges.
        let ps = PointSet::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], "simplex").unwrap();
        let facets = enumerate_facets_small(&ps, 100).unwrap();
        assert_eq!(facets.len(), 3);
        for f in &facets {
            let r = check_inequality(&ps, f).unwrap();
            assert!(r.is_facet, "{f:?} {r:?}");
        }
    }

    #[test]
    fn inequality_json_and_sense() {
        let list = Inequality::list_from_json(r#"[{"a": [1, "1/2", 0], "a0": 1, "sense": ">="}]"#).unwrap();
        assert_eq!(list[0].a[1], rat(1, 2));
        assert_eq!(list[0].sense, IneqSense::Ge);
        let le = list[0].to_le();
        assert_eq!(le.a0, int(-1));
        assert!(list[0].holds_at(&[1, 0, 0]));
        assert!(!list[0].holds_at(&[0, 1, 0]));
    }
}
