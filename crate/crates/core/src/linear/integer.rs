use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        self.data[r * self.cols + c] += v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
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

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntegerMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Every entry reduced into `[0, n)`.
    pub fn reduce_mod(&self, n: u64) -> IntegerMatrix {
        let m = BigInt::from(n);
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mod_floor(&m)).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over the rationals (equals the number of nonzero Smith invariants).
    pub fn rank(&self) -> usize {
        self.smith_diagonal().len()
    }

    /// Nonzero diagonal entries `d_1 | d_2 | ...` of the Smith normal form.
    pub fn smith_diagonal(&self) -> Vec<BigInt> {
        let mut w = SmithWork::new(self.clone(), false);
        let rank = w.run();
        (0..rank).map(|i| w.a.get(i, i).clone()).collect()
    }

    /// Full Smith normal form `U * self * W = D` with the inverses of both
    /// unimodular transforms.
    pub fn smith_normal_form(&self) -> SmithForm {
        let mut w = SmithWork::new(self.clone(), true);
        let rank = w.run();
        let t = w.transforms.expect("transforms tracked");
        SmithForm {
            d: w.a,
            u: t.u,
            u_inv: t.u_inv,
            w: t.w,
            w_inv: t.w_inv,
            rank,
        }
    }

    /// A Z-basis of the integer kernel `{v in Z^cols : M v = 0}`.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let snf = self.smith_normal_form();
        (snf.rank..self.cols).map(|c| snf.w.column(c)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[i] += q * row[k]`
    fn row_axpy(&mut self, i: usize, k: usize, q: &BigInt) {
        for c in 0..self.cols {
            let src = &self.data[k * self.cols + c];
            if src.is_zero() {
                continue;
            }
            let add = q * src;
            self.data[i * self.cols + c] += add;
        }
    }

    /// `col[j] += q * col[k]`
    fn col_axpy(&mut self, j: usize, k: usize, q: &BigInt) {
        for r in 0..self.rows {
            let src = &self.data[r * self.cols + k];
            if src.is_zero() {
                continue;
            }
            let add = q * src;
            self.data[r * self.cols + j] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        write!(f, "{}x{} {rows:?}", self.rows, self.cols)
    }
}

/// Result of [`IntegerMatrix::smith_normal_form`]: `u * m * w = d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub w: IntegerMatrix,
    pub w_inv: IntegerMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero invariant factors.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Some integer solution of `m x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let ub = self.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.w.rows()];
        for (i, v) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, r) = v.div_rem(self.d.get(i, i));
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !v.is_zero() {
                return None;
            }
        }
        Some(self.w.mul_vec(&y))
    }
}

/// Reusable solver for `m x = b` with many right hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    cols: usize,
    snf: SmithForm,
}

impl IntegerSolver {
    pub fn new(m: &IntegerMatrix) -> Self {
        IntegerSolver {
            cols: m.cols(),
            snf: m.smith_normal_form(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        self.snf.solve(b)
    }
}

struct Transforms {
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    w: IntegerMatrix,
    w_inv: IntegerMatrix,
}

struct SmithWork {
    a: IntegerMatrix,
    transforms: Option<Transforms>,
}

impl SmithWork {
    fn new(a: IntegerMatrix, track: bool) -> Self {
        let transforms = track.then(|| Transforms {
            u: IntegerMatrix::identity(a.rows),
            u_inv: IntegerMatrix::identity(a.rows),
            w: IntegerMatrix::identity(a.cols),
            w_inv: IntegerMatrix::identity(a.cols),
        });
        SmithWork { a, transforms }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.transforms {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.transforms {
            t.w.swap_cols(i, j);
            t.w_inv.swap_rows(i, j);
        }
    }

    /// `row[i] += q * row[k]`
    fn row_axpy(&mut self, i: usize, k: usize, q: &BigInt) {
        self.a.row_axpy(i, k, q);
        if let Some(t) = &mut self.transforms {
            t.u.row_axpy(i, k, q);
            t.u_inv.col_axpy(k, i, &-q);
        }
    }

    /// `col[j] += q * col[k]`
    fn col_axpy(&mut self, j: usize, k: usize, q: &BigInt) {
        self.a.col_axpy(j, k, q);
        if let Some(t) = &mut self.transforms {
            t.w.col_axpy(j, k, q);
            t.w_inv.row_axpy(k, j, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.transforms {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    /// Smallest nonzero entry (by absolute value) in the trailing block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if v.is_one() || (-v).is_one() {
                    return Some((i, j));
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let limit = self.a.rows.min(self.a.cols);
        let mut t = 0;
        while t < limit {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.a.rows {
                    if self.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.a.get(i, t).div_floor(self.a.get(t, t));
                    self.row_axpy(i, t, &-q);
                    if !self.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.a.cols {
                    if self.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.a.get(t, j).div_floor(self.a.get(t, t));
                    self.col_axpy(j, t, &-q);
                    if !self.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot survived; promote it
                    let mut best = (t, t);
                    for i in t + 1..self.a.rows {
                        let v = self.a.get(i, t);
                        if !v.is_zero() && v.abs() < self.a.get(best.0, best.1).abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.a.cols {
                        let v = self.a.get(t, j);
                        if !v.is_zero() && v.abs() < self.a.get(best.0, best.1).abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let pivot = self.a.get(t, t).clone();
                let offender = (t + 1..self.a.rows).find(|&i| {
                    (t + 1..self.a.cols).any(|j| !self.a.get(i, j).is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_axpy(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}
