//! Subspace arrangements and their intersection posets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::linear::{AffineSubspace, LinearError};
use crate::poset::{FinitePoset, LocallyClosedSet, PosetError};

/// Name given to the ambient space in every poset.
pub const TOP_NAME: &str = "V";
/// Name given to the empty subspace when it occurs.
pub const EMPTY_NAME: &str = "∅";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("subspace {0:?} is the whole ambient space")]
    NotProper(String),
    #[error("duplicate subspace name {0:?}")]
    DuplicateName(String),
    #[error("subspaces {0:?} and {1:?} coincide")]
    DuplicateSubspace(String, String),
    #[error("subspace {name:?} lives in dimension {found}, expected {expected}")]
    AmbientMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("the ambient subspace must be non-empty")]
    EmptyAmbient,
    #[error("no such element {0:?}")]
    UnknownElement(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("brute force over {q}^{n} points exceeds the limit of {limit}")]
    TooManyPoints { q: u64, n: usize, limit: u64 },
    #[error("denominator of an equation of {name:?} is divisible by {q}")]
    NotReducible { name: String, q: u64 },
    #[error("point counts disagree over F_{q}: brute force {brute}, inclusion-exclusion {formula}")]
    CountMismatch { q: u64, brute: i64, formula: i64 },
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSubspace {
    pub name: String,
    pub subspace: AffineSubspace,
}

/// A finite set of named proper subspaces of `A^n`. Need not be closed under
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    members: Vec<NamedSubspace>,
}

impl Arrangement {
    pub fn new(
        ambient_dim: usize,
        members: Vec<(String, AffineSubspace)>,
    ) -> Result<Self, ArrangementError> {
        let mut out: Vec<NamedSubspace> = Vec::with_capacity(members.len());
        for (name, subspace) in members {
            if subspace.ambient_dim() != ambient_dim {
                return Err(ArrangementError::AmbientMismatch {
                    name,
                    expected: ambient_dim,
                    found: subspace.ambient_dim(),
                });
            }
            if subspace.is_full() {
                return Err(ArrangementError::NotProper(name));
            }
            if out.iter().any(|m| m.name == name) {
                return Err(ArrangementError::DuplicateName(name));
            }
            if let Some(m) = out.iter().find(|m| m.subspace == subspace) {
                return Err(ArrangementError::DuplicateSubspace(m.name.clone(), name));
            }
            out.push(NamedSubspace { name, subspace });
        }
        Ok(Arrangement {
            ambient_dim,
            members: out,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[NamedSubspace] {
        &self.members
    }

    /// Whether every member is a hyperplane.
    pub fn is_hyperplane_arrangement(&self) -> bool {
        self.members.iter().all(|m| m.subspace.codim() == Some(1))
    }
}

/// The intersection closure of an arrangement together with the ambient top,
/// ordered by inclusion.
#[derive(Debug, Clone)]
pub struct IntersectionPoset {
    top: AffineSubspace,
    elements: Vec<AffineSubspace>,
    poset: FinitePoset,
    top_index: usize,
    empty_index: Option<usize>,
    added_by_closure: Vec<usize>,
}

/// Builds the intersection poset of an arrangement in its ambient space.
pub fn build_poset(arr: &Arrangement) -> IntersectionPoset {
    build_poset_within(&AffineSubspace::full(arr.ambient_dim), arr.members())
        .expect("members were validated against the ambient space")
}

/// Builds the intersection poset of `members`, all regarded as subsets of
/// `top`. Members equal to `top` merge with it. Codimensions are measured
/// inside `top`.
pub fn build_poset_within(
    top: &AffineSubspace,
    members: &[NamedSubspace],
) -> Result<IntersectionPoset, ArrangementError> {
    if top.is_empty() {
        return Err(ArrangementError::EmptyAmbient);
    }
    let mut inputs: Vec<NamedSubspace> = Vec::new();
    for m in members {
        let s = top.intersect(&m.subspace)?;
        if s == *top {
            continue;
        }
        match inputs.iter_mut().find(|i| i.subspace == s) {
            Some(existing) => {
                existing.name = format!("{}={}", existing.name, m.name);
            }
            None => inputs.push(NamedSubspace {
                name: m.name.clone(),
                subspace: s,
            }),
        }
    }

    let mut elements: Vec<AffineSubspace> = inputs.iter().map(|i| i.subspace.clone()).collect();
    elements.push(top.clone());
    let mut frontier = 0;
    while frontier < elements.len() {
        let fresh: Vec<AffineSubspace> = (0..elements.len())
            .flat_map(|i| (frontier.max(i)..elements.len()).map(move |j| (i, j)))
            .map(|(i, j)| elements[i].intersect(&elements[j]).expect("same ambient"))
            .collect();
        frontier = elements.len();
        for s in fresh {
            if !elements.contains(&s) {
                elements.push(s);
            }
        }
    }
    elements.sort();

    let names: Vec<String> = elements
        .iter()
        .map(|e| {
            if e == top {
                TOP_NAME.to_string()
            } else if e.is_empty() {
                EMPTY_NAME.to_string()
            } else if let Some(i) = inputs.iter().find(|i| &i.subspace == e) {
                i.name.clone()
            } else {
                inputs
                    .iter()
                    .filter(|i| i.subspace.contains(e).expect("same ambient"))
                    .map(|i| i.name.as_str())
                    .collect::<Vec<_>>()
                    .join("∩")
            }
        })
        .collect();
    let poset = FinitePoset::from_fn(names, |i, j| {
        elements[j].contains(&elements[i]).expect("same ambient")
    })?;
    let top_index = elements.iter().position(|e| e == top).expect("top present");
    let empty_index = elements.iter().position(AffineSubspace::is_empty);
    let added_by_closure = (0..elements.len())
        .filter(|&i| i != top_index && !inputs.iter().any(|m| m.subspace == elements[i]))
        .collect();
    Ok(IntersectionPoset {
        top: top.clone(),
        elements,
        poset,
        top_index,
        empty_index,
        added_by_closure,
    })
}

impl IntersectionPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn elements(&self) -> &[AffineSubspace] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &AffineSubspace {
        &self.elements[i]
    }

    pub fn name(&self, i: usize) -> &str {
        self.poset.name(i)
    }

    pub fn top(&self) -> usize {
        self.top_index
    }

    pub fn top_subspace(&self) -> &AffineSubspace {
        &self.top
    }

    pub fn empty(&self) -> Option<usize> {
        self.empty_index
    }

    /// Elements that were not members of the input arrangement (besides the top).
    pub fn added_by_closure(&self) -> &[usize] {
        &self.added_by_closure
    }

    pub fn index_of(&self, s: &AffineSubspace) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    pub fn index_by_name(&self, name: &str) -> Result<usize, ArrangementError> {
        (0..self.len())
            .find(|&i| self.name(i) == name)
            .ok_or_else(|| ArrangementError::UnknownElement(name.to_string()))
    }

    /// Dimension of the top.
    pub fn top_dim(&self) -> usize {
        self.top.dim().expect("top is non-empty")
    }

    /// Codimension inside the top; `None` for the empty element.
    pub fn codim(&self, i: usize) -> Option<usize> {
        self.elements[i].dim().map(|d| self.top_dim() - d)
    }

    pub fn dim(&self, i: usize) -> Option<usize> {
        self.elements[i].dim()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    /// `[M, V]`, the smallest open set containing `M`.
    pub fn up_set(&self, m: usize) -> LocallyClosedSet {
        self.poset
            .locally_closed(&self.poset.up_set(m))
            .expect("up-sets are open")
    }

    /// `]A, V[`.
    pub fn open_interval(&self, a: usize) -> Result<LocallyClosedSet, ArrangementError> {
        if a == self.top_index {
            return Err(PosetError::IntervalAtTop.into());
        }
        Ok(self
            .poset
            .locally_closed(&self.poset.open_interval(a, self.top_index))
            .expect("open intervals are convex"))
    }

    pub fn singleton(&self, m: usize) -> LocallyClosedSet {
        self.poset.locally_closed(&[m]).expect("points are locally closed")
    }

    pub fn mobius(&self, x: usize, y: usize) -> Result<i64, ArrangementError> {
        Ok(self.poset.mobius(x, y)?)
    }

    /// Non-empty elements, the top included.
    pub fn strata(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| Some(i) != self.empty_index)
            .collect()
    }
}

/// Both counts of the points of `F_q^n` off the arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub q: u64,
    pub brute_force: i64,
    pub inclusion_exclusion: i64,
}

/// Largest `q^n` accepted by [`count_points_fq`].
pub const POINT_COUNT_LIMIT: u64 = 1_000_000;

/// Counts `F_q`-points of the complement twice: by enumerating `F_q^n`, and
/// as `sum_{M != empty} mu(M, V) q^{dim M}` over the intersection poset.
///
/// The two agree whenever reduction mod `q` preserves the intersection
/// lattice; a disagreement is reported as an error.
pub fn count_points_fq(arr: &Arrangement, q: u64) -> Result<PointCount, ArrangementError> {
    if q < 2 || !(2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
        return Err(ArrangementError::NotPrime(q));
    }
    let n = arr.ambient_dim();
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&v| v <= POINT_COUNT_LIMIT));
    let Some(total) = total else {
        return Err(ArrangementError::TooManyPoints {
            q,
            n,
            limit: POINT_COUNT_LIMIT,
        });
    };

    let qb = BigInt::from(q);
    let mut reduced: Vec<Vec<Vec<u64>>> = Vec::new();
    for m in arr.members() {
        let eq = m.subspace.equations();
        let mut rows = Vec::new();
        if m.subspace.is_empty() {
            continue;
        }
        for r in 0..eq.rows() {
            let mut row = Vec::with_capacity(n + 1);
            for v in eq.row(r) {
                let den = v.denom().mod_floor(&qb);
                if den.is_zero() {
                    return Err(ArrangementError::NotReducible {
                        name: m.name.clone(),
                        q,
                    });
                }
                let inv = den.modpow(&(&qb - 2), &qb);
                let x = (v.numer().mod_floor(&qb) * inv).mod_floor(&qb);
                row.push(x.to_u64().expect("residue"));
            }
            rows.push(row);
        }
        reduced.push(rows);
    }

    let mut point = vec![0u64; n];
    let mut brute = 0i64;
    for _ in 0..total {
        let on_some = reduced.iter().any(|rows| {
            rows.iter().all(|row| {
                let lhs = row[..n]
                    .iter()
                    .zip(&point)
                    .fold(0u64, |acc, (a, x)| (acc + a * x) % q);
                lhs == row[n]
            })
        });
        if !on_some {
            brute += 1;
        }
        for c in point.iter_mut() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }

    let p = build_poset(arr);
    let mut formula = 0i64;
    for m in p.strata() {
        let mu = p.mobius(m, p.top())?;
        let dim = p.dim(m).expect("non-empty") as u32;
        formula += mu * (q as i64).pow(dim);
    }
    if brute != formula {
        return Err(ArrangementError::CountMismatch {
            q,
            brute,
            formula,
        });
    }
    Ok(PointCount {
        q,
        brute_force: brute,
        inclusion_exclusion: formula,
    })
}
