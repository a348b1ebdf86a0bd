//! Finite posets with their Alexandrov topology.
//!
//! Open sets are the up-closed subsets, closed sets the down-closed ones. A
//! subset is locally closed when it is the intersection of an open and a
//! closed set, equivalently when it is convex: `m <= a <= n` with `m, n` in the
//! set forces `a` into the set.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric at elements {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive at elements {0}, {1}, {2}")]
    NotTransitive(usize, usize, usize),
    #[error("element {x} is not below element {y}")]
    NotComparable { x: usize, y: usize },
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("subset is not locally closed")]
    NotLocallyClosed,
    #[error("open interval requires a non-maximal element")]
    IntervalAtTop,
}

/// A finite partially ordered set with named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<bool>,
}

/// A locally closed subset together with witnesses of local closedness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocallyClosedSet {
    /// Sorted element indices.
    pub members: Vec<usize>,
    /// Smallest open (up-closed) set containing `members`.
    pub witness_open: Vec<usize>,
    /// Smallest closed (down-closed) set containing `members`.
    pub witness_closed: Vec<usize>,
}

impl LocallyClosedSet {
    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl FinitePoset {
    /// Builds a poset from a full `n x n` relation, `leq[i][j]` meaning `i <= j`.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = names.len();
        let mut flat = vec![false; n * n];
        for (i, row) in leq.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                flat[i * n + j] = b;
            }
        }
        let p = FinitePoset { names, leq: flat };
        p.validate()?;
        Ok(p)
    }

    /// Builds a poset from an order predicate.
    pub fn from_fn(names: Vec<String>, f: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let n = names.len();
        let leq = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(names, leq)
    }

    fn validate(&self) -> Result<(), PosetError> {
        let n = self.len();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(PosetError::NotReflexive(i));
            }
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(PosetError::NotAntisymmetric(i, j));
                }
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        return Err(PosetError::NotTransitive(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `{y : x <= y}`, the smallest open set containing `x`.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(x, y)).collect()
    }

    /// `{y : y <= x}`, the closure of `x`.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn up_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| set.iter().any(|&x| self.leq(x, y)))
            .collect()
    }

    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| set.iter().any(|&x| self.leq(y, x)))
            .collect()
    }

    pub fn is_up_closed(&self, set: &[usize]) -> bool {
        self.up_closure(set).len() == sorted_unique(set).len()
    }

    pub fn is_down_closed(&self, set: &[usize]) -> bool {
        self.down_closure(set).len() == sorted_unique(set).len()
    }

    /// Complement of a subset, sorted.
    pub fn complement(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|x| !set.contains(x)).collect()
    }

    /// The unique maximum, if there is one.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.leq(x, t)))
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(x, y))
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(y, x))
    }

    /// `{z : x < z < y}`.
    pub fn open_interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.lt(x, z) && self.lt(z, y))
            .collect()
    }

    /// `{z : x <= z <= y}`.
    pub fn closed_interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect()
    }

    /// Recognises a locally closed subset and attaches its witnesses.
    pub fn locally_closed(&self, set: &[usize]) -> Result<LocallyClosedSet, PosetError> {
        if let Some(&bad) = set.iter().find(|&&x| x >= self.len()) {
            return Err(PosetError::OutOfRange(bad));
        }
        let members = sorted_unique(set);
        let open = self.up_closure(&members);
        let closed = self.down_closure(&members);
        let meet: Vec<usize> = open.iter().copied().filter(|x| closed.contains(x)).collect();
        if meet != members {
            return Err(PosetError::NotLocallyClosed);
        }
        Ok(LocallyClosedSet {
            members,
            witness_open: open,
            witness_closed: closed,
        })
    }

    /// Every locally closed subset, in order of the bitmask of members.
    ///
    /// Exponential in the size; meant for exhaustive checks on small posets.
    pub fn all_locally_closed(&self) -> Vec<LocallyClosedSet> {
        let n = self.len();
        assert!(n < 20, "exhaustive enumeration over {n} elements");
        (0u32..(1 << n))
            .filter_map(|mask| {
                let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                self.locally_closed(&set).ok()
            })
            .collect()
    }

    /// Möbius function `mu(x, y)` for `x <= y`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        for i in [x, y] {
            if i >= self.len() {
                return Err(PosetError::OutOfRange(i));
            }
        }
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable { x, y });
        }
        let mut memo = BTreeMap::new();
        Ok(self.mobius_from(x, y, &mut memo))
    }

    fn mobius_from(&self, x: usize, y: usize, memo: &mut BTreeMap<usize, i64>) -> i64 {
        if x == y {
            return 1;
        }
        if let Some(&v) = memo.get(&y) {
            return v;
        }
        let mut sum = 0;
        for z in 0..self.len() {
            if self.leq(x, z) && self.lt(z, y) {
                sum += self.mobius_from(x, z, memo);
            }
        }
        memo.insert(y, -sum);
        -sum
    }

    /// Product poset with componentwise order; element `(i, j)` has index
    /// `i * other.len() + j`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let m = other.len();
        let names = (0..self.len())
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", self.name(i), other.name(j)))
            .collect();
        FinitePoset::from_fn(names, |a, b| {
            self.leq(a / m, b / m) && other.leq(a % m, b % m)
        })
        .expect("product of posets is a poset")
    }

    /// Induced subposet on `elements` (kept in the given order).
    pub fn subposet(&self, elements: &[usize]) -> FinitePoset {
        let names = elements.iter().map(|&i| self.names[i].clone()).collect();
        FinitePoset::from_fn(names, |a, b| self.leq(elements[a], elements[b]))
            .expect("induced order is a partial order")
    }

    /// Whether `f` (given on indices) is order preserving into `target`.
    pub fn is_monotone(&self, target: &FinitePoset, f: &[usize]) -> bool {
        f.len() == self.len()
            && (0..self.len()).all(|x| {
                (0..self.len()).all(|y| !self.leq(x, y) || target.leq(f[x], f[y]))
            })
    }
}

fn sorted_unique(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
