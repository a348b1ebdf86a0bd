use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, LinearError, RationalMatrix};

/// An affine-linear subspace of `A^n`, possibly empty.
///
/// Non-empty subspaces are stored as the reduced row echelon form of their
/// augmented equation matrix `(a_1 .. a_n | b)`, so two subspaces are equal
/// exactly when their stored forms are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    ambient_dim: usize,
    equations: RationalMatrix,
    empty: bool,
}

impl AffineSubspace {
    /// The whole ambient space.
    pub fn full(n: usize) -> Self {
        AffineSubspace {
            ambient_dim: n,
            equations: RationalMatrix::zeros(0, n + 1),
            empty: false,
        }
    }

    pub fn empty(n: usize) -> Self {
        AffineSubspace {
            ambient_dim: n,
            equations: RationalMatrix::zeros(0, n + 1),
            empty: true,
        }
    }

    /// Solution set of the rows `(a_1, .., a_n, b)`, each meaning `sum a_i x_i = b`.
    pub fn from_equations(n: usize, rows: Vec<Vec<BigRational>>) -> Result<Self, LinearError> {
        for r in &rows {
            if r.len() != n + 1 {
                return Err(LinearError::DimensionMismatch {
                    expected: n + 1,
                    found: r.len(),
                });
            }
        }
        Ok(Self::canonical(n, RationalMatrix::from_rows(n + 1, rows)))
    }

    /// Integer-coefficient convenience constructor, mostly for tests.
    pub fn from_i64_equations(n: usize, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| super::rat(v)).collect())
            .collect();
        Self::from_equations(n, rows).expect("well-shaped equations")
    }

    pub fn point(coords: &[BigRational]) -> Self {
        let n = coords.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![BigRational::zero(); n + 1];
                row[i] = BigRational::one();
                row[n] = coords[i].clone();
                row
            })
            .collect();
        Self::canonical(n, RationalMatrix::from_rows(n + 1, rows))
    }

    /// `p + span(directions)`.
    pub fn from_point_and_directions(p: &[BigRational], directions: &[Vec<BigRational>]) -> Self {
        let n = p.len();
        // equations are the annihilator of the direction space, evaluated at p
        let dir = RationalMatrix::from_rows(n, directions.to_vec());
        let normals = if directions.is_empty() {
            (0..n)
                .map(|i| {
                    let mut v = vec![BigRational::zero(); n];
                    v[i] = BigRational::one();
                    v
                })
                .collect()
        } else {
            dir.kernel()
        };
        let rows = normals
            .into_iter()
            .map(|mut a| {
                let b = dot(&a, p);
                a.push(b);
                a
            })
            .collect();
        Self::canonical(n, RationalMatrix::from_rows(n + 1, rows))
    }

    fn canonical(n: usize, m: RationalMatrix) -> Self {
        let (r, pivots) = m.rref_with_pivots();
        if pivots.last() == Some(&n) {
            return Self::empty(n);
        }
        AffineSubspace {
            ambient_dim: n,
            equations: r,
            empty: false,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_full(&self) -> bool {
        !self.empty && self.equations.rows() == 0
    }

    /// Canonical augmented equation matrix; no rows when empty or full.
    pub fn equations(&self) -> &RationalMatrix {
        &self.equations
    }

    /// `None` for the empty subspace.
    pub fn dim(&self) -> Option<usize> {
        (!self.empty).then(|| self.ambient_dim - self.equations.rows())
    }

    /// Codimension in the ambient space; `None` for the empty subspace.
    pub fn codim(&self) -> Option<usize> {
        (!self.empty).then(|| self.equations.rows())
    }

    fn check_ambient(&self, other: &AffineSubspace) -> Result<(), LinearError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinearError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &AffineSubspace) -> Result<AffineSubspace, LinearError> {
        self.check_ambient(other)?;
        if self.empty || other.empty {
            return Ok(Self::empty(self.ambient_dim));
        }
        Ok(Self::canonical(
            self.ambient_dim,
            self.equations.vstack(&other.equations),
        ))
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &AffineSubspace) -> Result<bool, LinearError> {
        Ok(&self.intersect(other)? == other)
    }

    pub fn contains_point(&self, p: &[BigRational]) -> bool {
        if self.empty || p.len() != self.ambient_dim {
            return false;
        }
        let n = self.ambient_dim;
        (0..self.equations.rows()).all(|r| {
            let row = self.equations.row(r);
            dot(&row[..n], p) == row[n]
        })
    }

    /// A point of the subspace: free coordinates set to zero.
    pub fn some_point(&self) -> Option<Vec<BigRational>> {
        if self.empty {
            return None;
        }
        let n = self.ambient_dim;
        let mut p = vec![BigRational::zero(); n];
        for r in 0..self.equations.rows() {
            let row = self.equations.row(r);
            let pivot = row.iter().position(|v| !v.is_zero()).expect("no zero rows");
            p[pivot] = row[n].clone();
        }
        Some(p)
    }

    /// Basis of the direction space (the linear subspace parallel to `self`).
    pub fn direction_basis(&self) -> Result<Vec<Vec<BigRational>>, LinearError> {
        if self.empty {
            return Err(LinearError::EmptyTangent);
        }
        Ok(self.coefficients().kernel())
    }

    /// The translate of `self` passing through `x`.
    pub fn translate_through(&self, x: &[BigRational]) -> Result<AffineSubspace, LinearError> {
        Ok(Self::from_point_and_directions(x, &self.direction_basis()?))
    }

    /// Whether `self` and `other` have the same direction space.
    pub fn is_parallel_to(&self, other: &AffineSubspace) -> Result<bool, LinearError> {
        self.check_ambient(other)?;
        if self.empty || other.empty {
            return Err(LinearError::EmptyTangent);
        }
        Ok(self.coefficients().rref() == other.coefficients().rref())
    }

    fn coefficients(&self) -> RationalMatrix {
        let n = self.ambient_dim;
        let rows = (0..self.equations.rows())
            .map(|r| self.equations.row(r)[..n].to_vec())
            .collect();
        RationalMatrix::from_rows(n, rows)
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// The affine subspace through `basepoint` of all `w` with `B(w - x, v - x) = 0`
/// for every `v` in `tangent`.
///
/// Fails with [`LinearError::DegeneratePairing`] when `B` restricted to the
/// tangent directions is degenerate, in which case the result would not meet
/// the tangent in a single point.
pub fn orthogonal_complement(
    tangent: &AffineSubspace,
    form: &RationalMatrix,
    basepoint: &[BigRational],
) -> Result<AffineSubspace, LinearError> {
    let n = tangent.ambient_dim();
    if form.rows() != n || form.cols() != n {
        return Err(LinearError::DimensionMismatch {
            expected: n,
            found: form.rows(),
        });
    }
    if basepoint.len() != n {
        return Err(LinearError::DimensionMismatch {
            expected: n,
            found: basepoint.len(),
        });
    }
    if !tangent.contains_point(basepoint) {
        return Err(if tangent.is_empty() {
            LinearError::EmptyTangent
        } else {
            LinearError::BasepointNotOnTangent
        });
    }
    let dirs = tangent.direction_basis()?;
    let images: Vec<Vec<BigRational>> = dirs.iter().map(|v| form.mul_vec(v)).collect();
    let gram = RationalMatrix::from_rows(
        dirs.len(),
        dirs.iter()
            .map(|u| images.iter().map(|bv| dot(u, bv)).collect())
            .collect(),
    );
    if gram.rank() < dirs.len() {
        return Err(LinearError::DegeneratePairing);
    }
    let rows = images
        .into_iter()
        .map(|mut a| {
            let b = dot(&a, basepoint);
            a.push(b);
            a
        })
        .collect();
    AffineSubspace::from_equations(n, rows)
}

impl PartialOrd for AffineSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Empty first, then by dimension, then by canonical equations.
impl Ord for AffineSubspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_dim
            .cmp(&other.ambient_dim)
            .then_with(|| other.empty.cmp(&self.empty))
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| self.equations.cmp(&other.equations))
    }
}

impl fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "{{}}");
        }
        if self.equations.rows() == 0 {
            return write!(f, "A^{}", self.ambient_dim);
        }
        let n = self.ambient_dim;
        let eqs: Vec<String> = (0..self.equations.rows())
            .map(|r| {
                let row = self.equations.row(r);
                let mut lhs = String::new();
                for (i, a) in row[..n].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    if !lhs.is_empty() {
                        lhs.push_str(" + ");
                    }
                    if a.is_one() {
                        lhs.push_str(&format!("x{}", i + 1));
                    } else {
                        lhs.push_str(&format!("{}*x{}", format_rational(a), i + 1));
                    }
                }
                format!("{lhs} = {}", format_rational(&row[n]))
            })
            .collect();
        write!(f, "{{{}}}", eqs.join(", "))
    }
}
