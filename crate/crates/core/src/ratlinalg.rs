//! Exact linear algebra over the rationals.
//!
//! Everything here is tolerance free. Dense matrices use full-pivot Gaussian
//! elimination on `Rational`; the incremental [`RankBuilder`] works
//! fraction-free on integer rows (rational input is scaled by the lcm of its
//! denominators first) and falls back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{scale_to_integers, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        Error::check_len(rows * cols, entries.len())?;
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for row in rows {
            Error::check_len(cols, row.len())?;
            entries.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Removes row `r`.
    pub fn without_row(&self, r: usize) -> Self {
        let rows = self
            .row_iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row.to_vec())
            .collect();
        Self::from_rows(self.cols, rows).expect("rows share the column count")
    }

    /// Exact rank by full-pivot elimination.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<Rational>> = self.row_iter().map(<[Rational]>::to_vec).collect();
        let mut col_order: Vec<usize> = (0..self.cols).collect();
        let mut rank = 0;
        while rank < self.rows && rank < self.cols {
            let Some((pr, pc)) = pick_pivot(&work, &col_order, rank) else {
                break;
            };
            work.swap(rank, pr);
            col_order.swap(rank, pc);
            let piv_col = col_order[rank];
            let (head, tail) = work.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            let inv = pivot_row[piv_col].recip();
            for row in tail.iter_mut() {
                if row[piv_col].is_zero() {
                    continue;
                }
                let factor = &row[piv_col] * &inv;
                for &c in &col_order[rank..] {
                    if !pivot_row[c].is_zero() {
                        row[c] -= &factor * &pivot_row[c];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for k in c..self.cols {
                let v = m.get(r, k) * &inv;
                m.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for k in c..self.cols {
                    let v = m.get(i, k) - &f * m.get(r, k);
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        Error::check_len(self.cols, v.len())?;
        Ok(self
            .row_iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

// Prefers unit pivots to keep entries small; any nonzero will do otherwise.
fn pick_pivot(work: &[Vec<Rational>], col_order: &[usize], from: usize) -> Option<(usize, usize)> {
    let mut fallback = None;
    for (r, row) in work.iter().enumerate().skip(from) {
        for (k, &c) in col_order.iter().enumerate().skip(from) {
            let v = &row[c];
            if v.is_zero() {
                continue;
            }
            if v.abs().is_one() {
                return Some((r, k));
            }
            fallback.get_or_insert((r, k));
        }
    }
    fallback
}

/// Dimension of the affine hull of `points`: the rank of `p_i - p_0`.
pub fn affine_dimension(points: &[Vec<Rational>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput("point list"))?;
    let mut builder = RankBuilder::new(first.len());
    for p in &points[1..] {
        Error::check_len(first.len(), p.len())?;
        let diff: Vec<Rational> = p.iter().zip(first).map(|(a, b)| a - b).collect();
        if builder.push(&diff)? == builder.dim() {
            break;
        }
    }
    Ok(builder.rank())
}

trait ExactInt: Clone + Zero + PartialEq {
    /// `a*x - b*y`, or `None` on overflow.
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd_of(&self, other: &Self) -> Self;
    fn div_by(&self, g: &Self) -> Self;
    fn is_neg(&self) -> bool;
    fn negated(&self) -> Self;
    fn is_unit(&self) -> bool;
}

impl ExactInt for i128 {
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd_of(&self, other: &Self) -> Self {
        self.gcd(other)
    }
    fn div_by(&self, g: &Self) -> Self {
        self / g
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
}

impl ExactInt for BigInt {
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd_of(&self, other: &Self) -> Self {
        self.gcd(other)
    }
    fn div_by(&self, g: &Self) -> Self {
        self / g
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<T> {
    pivot: usize,
    coeffs: Vec<T>,
}

#[derive(Clone, Debug)]
enum Basis {
    Small(Vec<EchelonRow<i128>>),
    Big(Vec<EchelonRow<BigInt>>),
}

/// Reduces `v` against `rows` in place. `None` on overflow.
fn reduce<T: ExactInt>(rows: &[EchelonRow<T>], v: &mut [T]) -> Option<()> {
    for row in rows {
        if v[row.pivot].is_zero() {
            continue;
        }
        let a = row.coeffs[row.pivot].clone();
        let b = v[row.pivot].clone();
        let mut g = T::zero();
        for (vi, ri) in v.iter_mut().zip(&row.coeffs) {
            if ri.is_zero() && vi.is_zero() {
                continue;
            }
            *vi = T::cross(&a, vi, &b, ri)?;
            if !vi.is_zero() && !g.is_unit() {
                g = if g.is_zero() { abs_of(vi) } else { g.gcd_of(vi) };
            }
        }
        if !g.is_zero() && !g.is_unit() {
            for vi in v.iter_mut() {
                *vi = vi.div_by(&g);
            }
        }
    }
    Some(())
}

fn abs_of<T: ExactInt>(v: &T) -> T {
    if v.is_neg() {
        v.negated()
    } else {
        v.clone()
    }
}

fn append<T: ExactInt>(rows: &mut Vec<EchelonRow<T>>, mut v: Vec<T>) -> bool {
    let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if v[pivot].is_neg() {
        for x in v.iter_mut() {
            *x = x.negated();
        }
    }
    rows.push(EchelonRow { pivot, coeffs: v });
    true
}

/// Accumulates vectors one at a time and reports the rank of everything seen.
///
/// Feeding stops having any effect once the rank reaches the saturation limit
/// (the vector length unless set lower with [`RankBuilder::with_limit`]).
#[derive(Clone, Debug)]
pub struct RankBuilder {
    dim: usize,
    limit: usize,
    basis: Basis,
}

impl RankBuilder {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            limit: dim,
            basis: Basis::Small(Vec::new()),
        }
    }

    /// Stops accumulating once the rank reaches `limit`; useful when an upper
    /// bound on the answer is already known.
    pub fn with_limit(dim: usize, limit: usize) -> Self {
        Self {
            limit: limit.min(dim),
            ..Self::new(dim)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        match &self.basis {
            Basis::Small(rows) => rows.len(),
            Basis::Big(rows) => rows.len(),
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.rank() >= self.limit
    }

    /// Feeds a rational vector; returns the rank afterwards.
    pub fn push(&mut self, v: &[Rational]) -> Result<usize> {
        Error::check_len(self.dim, v.len())?;
        if self.is_saturated() {
            return Ok(self.rank());
        }
        let (ints, _) = scale_to_integers(v);
        let small: Option<Vec<i128>> = ints.iter().map(ToPrimitive::to_i128).collect();
        match small {
            Some(s) => self.push_small(s),
            None => self.push_big(ints),
        }
        Ok(self.rank())
    }

    /// Feeds an integer vector; returns the rank afterwards.
    pub fn push_int(&mut self, v: &[i64]) -> Result<usize> {
        Error::check_len(self.dim, v.len())?;
        if self.is_saturated() {
            return Ok(self.rank());
        }
        self.push_small(v.iter().map(|&x| x as i128).collect());
        Ok(self.rank())
    }

    fn push_small(&mut self, v: Vec<i128>) {
        if let Basis::Small(rows) = &mut self.basis {
            let mut work = v.clone();
            if reduce(rows, &mut work).is_some() {
                append(rows, work);
                return;
            }
            self.promote();
        }
        self.push_big(v.into_iter().map(BigInt::from).collect());
    }

    fn push_big(&mut self, mut v: Vec<BigInt>) {
        if matches!(self.basis, Basis::Small(_)) {
            self.promote();
        }
        if let Basis::Big(rows) = &mut self.basis {
            reduce(rows, &mut v).expect("big integers do not overflow");
            append(rows, v);
        }
    }

    fn promote(&mut self) {
        if let Basis::Small(rows) = &self.basis {
            let big = rows
                .iter()
                .map(|r| EchelonRow {
                    pivot: r.pivot,
                    coeffs: r.coeffs.iter().map(|&x| BigInt::from(x)).collect(),
                })
                .collect();
            self.basis = Basis::Big(big);
        }
    }
}
