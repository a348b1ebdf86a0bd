//! Finitely generated free chain and cochain complexes over the integers.
//!
//! A complex stores one basis per degree, labelled by any ordered type, and
//! integer matrices for the differentials. Coefficients in `Z/n` are handled
//! by the homology routines rather than by the complex itself.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linear::IntegerMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("differentials do not square to zero in degree {0}")]
    NotAComplex(i64),
    #[error("map fails to commute with the differentials in degree {0}")]
    NotAChainMap(i64),
}

/// A chain complex `... -> C_m -> C_{m-1} -> ...` of free abelian groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex<L> {
    base_degree: i64,
    bases: Vec<Vec<L>>,
    /// `boundaries[k]` maps degree `base_degree + k` to the degree below.
    boundaries: Vec<IntegerMatrix>,
}

/// A cochain complex `... -> C^m -> C^{m+1} -> ...` of free abelian groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex<L> {
    base_degree: i64,
    bases: Vec<Vec<L>>,
    /// `coboundaries[k]` maps degree `base_degree + k` to the degree above.
    coboundaries: Vec<IntegerMatrix>,
}

/// Basis label of a tensor product or direct sum built from two complexes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand<A, B> {
    Left(A),
    Right(B),
}

impl<L: Clone + Debug> ChainComplex<L> {
    /// Checks shapes and `d d = 0` exactly.
    pub fn new(
        base_degree: i64,
        bases: Vec<Vec<L>>,
        boundaries: Vec<IntegerMatrix>,
    ) -> Result<Self, ComplexError> {
        let c = ChainComplex {
            base_degree,
            bases,
            boundaries,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ComplexError> {
        assert_eq!(self.bases.len(), self.boundaries.len());
        for (k, d) in self.boundaries.iter().enumerate() {
            let m = self.base_degree + k as i64;
            let expected = (self.rank(m - 1), self.rank(m));
            if (d.rows(), d.cols()) != expected {
                return Err(ComplexError::ShapeMismatch {
                    degree: m,
                    expected,
                    found: (d.rows(), d.cols()),
                });
            }
            if k > 0 && !self.boundaries[k - 1].mul(d).is_zero() {
                return Err(ComplexError::NotAComplex(m));
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> i64 {
        self.base_degree
    }

    /// The largest degree with a stored basis, which may be empty.
    pub fn max_degree(&self) -> i64 {
        self.base_degree + self.bases.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree()..=self.max_degree()
    }

    fn slot(&self, m: i64) -> Option<usize> {
        let k = m - self.base_degree;
        (k >= 0 && (k as usize) < self.bases.len()).then_some(k as usize)
    }

    pub fn basis(&self, m: i64) -> &[L] {
        self.slot(m).map_or(&[], |k| &self.bases[k])
    }

    pub fn rank(&self, m: i64) -> usize {
        self.basis(m).len()
    }

    /// `d_m : C_m -> C_{m-1}`, zero outside the stored range.
    pub fn boundary(&self, m: i64) -> IntegerMatrix {
        match self.slot(m) {
            Some(k) => self.boundaries[k].clone(),
            None => IntegerMatrix::zeros(self.rank(m - 1), self.rank(m)),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|m| if m.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(m) as i64)
            .sum()
    }

    /// `Hom(C, Z)` with the dual bases; `delta^m` is the transpose of `d_{m+1}`.
    pub fn dual(&self) -> CochainComplex<L> {
        let coboundaries = self
            .degrees()
            .map(|m| self.boundary(m + 1).transpose())
            .collect();
        CochainComplex {
            base_degree: self.base_degree,
            bases: self.bases.clone(),
            coboundaries,
        }
    }

    pub fn map_labels<M: Clone + Debug>(&self, f: impl Fn(&L) -> M) -> ChainComplex<M> {
        ChainComplex {
            base_degree: self.base_degree,
            bases: self.bases.iter().map(|b| b.iter().map(&f).collect()).collect(),
            boundaries: self.boundaries.clone(),
        }
    }

    /// Tensor product with basis `a (x) b` in degree `|a| + |b|`, ordered by
    /// the degree of `a`, then `a`, then `b`, and differential
    /// `d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db`.
    pub fn tensor<M: Clone + Debug>(&self, other: &ChainComplex<M>) -> ChainComplex<(L, M)> {
        let lo = self.min_degree() + other.min_degree();
        let hi = self.max_degree() + other.max_degree();
        // (degree of a, index of a, index of b)
        let mut index: Vec<Vec<(i64, usize, usize)>> = Vec::new();
        let mut bases: Vec<Vec<(L, M)>> = Vec::new();
        for m in lo..=hi {
            let mut idx = Vec::new();
            let mut basis = Vec::new();
            for p in self.degrees() {
                let q = m - p;
                for (i, a) in self.basis(p).iter().enumerate() {
                    for (j, b) in other.basis(q).iter().enumerate() {
                        idx.push((p, i, j));
                        basis.push((a.clone(), b.clone()));
                    }
                }
            }
            index.push(idx);
            bases.push(basis);
        }
        let mut boundaries = Vec::new();
        for (k, idx) in index.iter().enumerate() {
            let below: BTreeMap<(i64, usize, usize), usize> = if k == 0 {
                BTreeMap::new()
            } else {
                index[k - 1].iter().enumerate().map(|(r, &key)| (key, r)).collect()
            };
            let mut d = IntegerMatrix::zeros(below.len(), idx.len());
            for (col, &(p, i, j)) in idx.iter().enumerate() {
                let q = lo + k as i64 - p;
                let da = self.boundary(p);
                for r in 0..da.rows() {
                    let v = da.get(r, i);
                    if !v.is_zero() {
                        d.add_to(below[&(p - 1, r, j)], col, v);
                    }
                }
                let db = other.boundary(q);
                let sign = if p.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                for r in 0..db.rows() {
                    let v = db.get(r, j);
                    if !v.is_zero() {
                        d.add_to(below[&(p, i, r)], col, &(v * &sign));
                    }
                }
            }
            boundaries.push(d);
        }
        ChainComplex::new(lo, bases, boundaries).expect("tensor product of complexes")
    }

    /// Direct sum with `other`.
    pub fn direct_sum<M: Clone + Debug>(&self, other: &ChainComplex<M>) -> ChainComplex<Summand<L, M>> {
        let lo = self.min_degree().min(other.min_degree());
        let hi = self.max_degree().max(other.max_degree());
        let bases = (lo..=hi)
            .map(|m| {
                self.basis(m)
                    .iter()
                    .cloned()
                    .map(Summand::Left)
                    .chain(other.basis(m).iter().cloned().map(Summand::Right))
                    .collect()
            })
            .collect();
        let boundaries = (lo..=hi)
            .map(|m| block_diagonal(&self.boundary(m), &other.boundary(m)))
            .collect();
        ChainComplex::new(lo, bases, boundaries).expect("direct sum of complexes")
    }

    /// Mapping cone of `f : self -> target`: `Cone_m = C_{m-1} + D_m` with
    /// `d(c, e) = (-dc, f c + de)`.
    pub fn mapping_cone<M: Clone + Debug>(
        &self,
        target: &ChainComplex<M>,
        f: &ChainMap,
    ) -> Result<ChainComplex<Summand<L, M>>, ComplexError> {
        f.check(self, target)?;
        let lo = (self.min_degree() + 1).min(target.min_degree());
        let hi = (self.max_degree() + 1).max(target.max_degree());
        let bases = (lo..=hi)
            .map(|m| {
                self.basis(m - 1)
                    .iter()
                    .cloned()
                    .map(Summand::Left)
                    .chain(target.basis(m).iter().cloned().map(Summand::Right))
                    .collect()
            })
            .collect();
        let boundaries = (lo..=hi)
            .map(|m| {
                let neg = negate(&self.boundary(m - 1));
                let top = neg.hstack(&IntegerMatrix::zeros(self.rank(m - 2), target.rank(m)));
                let fm = f.matrix(m - 1, target.rank(m - 1), self.rank(m - 1));
                let bottom = fm.hstack(&target.boundary(m));
                top.vstack(&bottom)
            })
            .collect();
        ChainComplex::new(lo, bases, boundaries)
    }
}

impl<L: Clone + Debug + Ord> ChainComplex<L> {
    /// Position of a basis label in degree `m`.
    pub fn index_of(&self, m: i64, label: &L) -> Option<usize> {
        self.basis(m).iter().position(|l| l == label)
    }
}

impl<L: Clone + Debug> CochainComplex<L> {
    /// Checks shapes and `delta delta = 0` exactly.
    pub fn new(
        base_degree: i64,
        bases: Vec<Vec<L>>,
        coboundaries: Vec<IntegerMatrix>,
    ) -> Result<Self, ComplexError> {
        let c = CochainComplex {
            base_degree,
            bases,
            coboundaries,
        };
        // validate through the reindexed chain complex
        c.as_chain_complex_checked()?;
        Ok(c)
    }

    pub fn min_degree(&self) -> i64 {
        self.base_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.base_degree + self.bases.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree()..=self.max_degree()
    }

    fn slot(&self, m: i64) -> Option<usize> {
        let k = m - self.base_degree;
        (k >= 0 && (k as usize) < self.bases.len()).then_some(k as usize)
    }

    pub fn basis(&self, m: i64) -> &[L] {
        self.slot(m).map_or(&[], |k| &self.bases[k])
    }

    pub fn rank(&self, m: i64) -> usize {
        self.basis(m).len()
    }

    /// `delta^m : C^m -> C^{m+1}`, zero outside the stored range.
    pub fn coboundary(&self, m: i64) -> IntegerMatrix {
        match self.slot(m) {
            Some(k) => self.coboundaries[k].clone(),
            None => IntegerMatrix::zeros(self.rank(m + 1), self.rank(m)),
        }
    }

    fn as_chain_complex_checked(&self) -> Result<ChainComplex<L>, ComplexError> {
        let degrees: Vec<i64> = self.degrees().rev().collect();
        let bases = degrees.iter().map(|&m| self.basis(m).to_vec()).collect();
        let boundaries = degrees.iter().map(|&m| self.coboundary(m)).collect();
        ChainComplex::new(-self.max_degree(), bases, boundaries).map_err(|e| match e {
            ComplexError::NotAComplex(d) => ComplexError::NotAComplex(-d),
            ComplexError::ShapeMismatch {
                degree,
                expected,
                found,
            } => ComplexError::ShapeMismatch {
                degree: -degree,
                expected,
                found,
            },
            other => other,
        })
    }

    /// The chain complex `D_k = C^{-k}` with `d_k = delta^{-k}`, so that
    /// `H_k(D) = H^{-k}(C)`.
    pub fn as_chain_complex(&self) -> ChainComplex<L> {
        self.as_chain_complex_checked()
            .expect("validated on construction")
    }

    /// The tensor product of cochain complexes, with the same ordering and
    /// sign rule as [`ChainComplex::tensor`].
    pub fn tensor<M: Clone + Debug>(&self, other: &CochainComplex<M>) -> CochainComplex<(L, M)> {
        let lo = self.min_degree() + other.min_degree();
        let hi = self.max_degree() + other.max_degree();
        let mut index: Vec<Vec<(i64, usize, usize)>> = Vec::new();
        let mut bases: Vec<Vec<(L, M)>> = Vec::new();
        for m in lo..=hi {
            let mut idx = Vec::new();
            let mut basis = Vec::new();
            for p in self.degrees() {
                let q = m - p;
                for (i, a) in self.basis(p).iter().enumerate() {
                    for (j, b) in other.basis(q).iter().enumerate() {
                        idx.push((p, i, j));
                        basis.push((a.clone(), b.clone()));
                    }
                }
            }
            index.push(idx);
            bases.push(basis);
        }
        let mut coboundaries = Vec::new();
        for (k, idx) in index.iter().enumerate() {
            let above: BTreeMap<(i64, usize, usize), usize> = match index.get(k + 1) {
                Some(next) => next.iter().enumerate().map(|(r, &key)| (key, r)).collect(),
                None => BTreeMap::new(),
            };
            let mut d = IntegerMatrix::zeros(above.len(), idx.len());
            for (col, &(p, i, j)) in idx.iter().enumerate() {
                let q = lo + k as i64 - p;
                let da = self.coboundary(p);
                for r in 0..da.rows() {
                    let v = da.get(r, i);
                    if !v.is_zero() {
                        d.add_to(above[&(p + 1, r, j)], col, v);
                    }
                }
                let db = other.coboundary(q);
                let sign = if p.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                for r in 0..db.rows() {
                    let v = db.get(r, j);
                    if !v.is_zero() {
                        d.add_to(above[&(p, i, r)], col, &(v * &sign));
                    }
                }
            }
            coboundaries.push(d);
        }
        CochainComplex::new(lo, bases, coboundaries).expect("tensor product of cochain complexes")
    }
}

/// A degreewise family of integer matrices between two complexes.
/// Degrees without a stored matrix carry the zero map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub matrices: BTreeMap<i64, IntegerMatrix>,
}

impl ChainMap {
    pub fn new() -> Self {
        ChainMap::default()
    }

    pub fn insert(&mut self, m: i64, matrix: IntegerMatrix) {
        self.matrices.insert(m, matrix);
    }

    /// The matrix in degree `m`, or a zero matrix of the given shape.
    pub fn matrix(&self, m: i64, rows: usize, cols: usize) -> IntegerMatrix {
        match self.matrices.get(&m) {
            Some(f) => {
                assert_eq!((f.rows(), f.cols()), (rows, cols), "chain map shape in degree {m}");
                f.clone()
            }
            None => IntegerMatrix::zeros(rows, cols),
        }
    }

    /// Exact check of `f_{m-1} d_m = d_m f_m` in every degree.
    pub fn check<A: Clone + Debug, B: Clone + Debug>(
        &self,
        source: &ChainComplex<A>,
        target: &ChainComplex<B>,
    ) -> Result<(), ComplexError> {
        let lo = source.min_degree().min(target.min_degree());
        let hi = source.max_degree().max(target.max_degree()) + 1;
        for m in lo..=hi {
            let f = self.matrix(m, target.rank(m), source.rank(m));
            let g = self.matrix(m - 1, target.rank(m - 1), source.rank(m - 1));
            if g.mul(&source.boundary(m)) != target.boundary(m).mul(&f) {
                return Err(ComplexError::NotAChainMap(m));
            }
        }
        Ok(())
    }

    /// Exact check of `delta f = f delta` for a map of cochain complexes.
    pub fn check_cochain<A: Clone + Debug, B: Clone + Debug>(
        &self,
        source: &CochainComplex<A>,
        target: &CochainComplex<B>,
    ) -> Result<(), ComplexError> {
        let lo = source.min_degree().min(target.min_degree()) - 1;
        let hi = source.max_degree().max(target.max_degree());
        for m in lo..=hi {
            let f = self.matrix(m, target.rank(m), source.rank(m));
            let g = self.matrix(m + 1, target.rank(m + 1), source.rank(m + 1));
            if g.mul(&source.coboundary(m)) != target.coboundary(m).mul(&f) {
                return Err(ComplexError::NotAChainMap(m));
            }
        }
        Ok(())
    }

    /// The same maps viewed between the reindexed chain complexes
    /// `D_k = C^{-k}`.
    pub fn reindexed(&self) -> ChainMap {
        ChainMap {
            matrices: self.matrices.iter().map(|(m, f)| (-m, f.clone())).collect(),
        }
    }

    /// Degreewise transpose: a map `C -> D` becomes `Hom(D) -> Hom(C)`.
    pub fn transpose(&self) -> ChainMap {
        ChainMap {
            matrices: self.matrices.iter().map(|(m, f)| (*m, f.transpose())).collect(),
        }
    }

    pub fn compose(&self, after: &ChainMap) -> ChainMap {
        ChainMap {
            matrices: self
                .matrices
                .iter()
                .filter_map(|(m, f)| after.matrices.get(m).map(|g| (*m, g.mul(f))))
                .collect(),
        }
    }
}

fn negate(m: &IntegerMatrix) -> IntegerMatrix {
    let mut out = IntegerMatrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, -m.get(r, c).clone());
        }
    }
    out
}

fn block_diagonal(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
    let top = a.hstack(&IntegerMatrix::zeros(a.rows(), b.cols()));
    let bottom = IntegerMatrix::zeros(b.rows(), a.cols()).hstack(b);
    top.vstack(&bottom)
}
