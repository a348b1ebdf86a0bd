//! Transverse arrangements: an order-reversing assignment `A -> beta(A)` of
//! complementary-dimensional subspaces meeting each stratum in one point.
//!
//! The basic construction picks a point `x` off the arrangement and a
//! non-degenerate bilinear form `B`, and sends `A` to the `B`-orthogonal
//! complement through `x` of the direction space of `A`. That map only sees
//! directions, so strata with equal direction spaces (parallel lines, say)
//! collide. When that happens we fall back to the homogenised variant: the
//! complement is taken of the cone over `A` in `k^{n+1}` and projected back to
//! `V` from `(x, 1)`, which separates strata the direct map cannot.
//!
//! Every strict containment forced onto `V` (points and the empty set all go
//! to `V`) is exempt from the reverse implication of the order condition; see
//! [`TransverseReport`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::IntersectionPoset;
use crate::linear::{orthogonal_complement, AffineSubspace, LinearError, RationalMatrix};

/// Attempts made by [`construct_transverse`] before giving up.
pub const RETRY_LIMIT: usize = 50;
/// Half-width of the sampling box on the first attempt.
pub const INITIAL_BOX: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransverseError {
    #[error("no transverse arrangement found in {attempts} attempts; last failure: {last_failure}")]
    RetryLimit { attempts: usize, last_failure: String },
    #[error(transparent)]
    Linear(#[from] LinearError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// `beta(A)` is the `B`-orthogonal complement of the direction of `A` through `x`.
    Direct,
    /// Complement of the cone over `A` in `k^{n+1}`, projected from `(x, 1)`.
    Homogenized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransverseArrangement {
    pub basepoint: Vec<BigRational>,
    /// The bilinear form; `(n+1) x (n+1)` for the homogenised construction.
    pub form: RationalMatrix,
    /// `beta[i]` is the image of poset element `i`.
    pub beta: Vec<AffineSubspace>,
    pub seed: u64,
    /// Number of sampling rounds used (1 when the first sample worked).
    pub attempts: usize,
    pub construction: Construction,
}

/// Exact outcome of checking the four transversality conditions.
///
/// `t2` covers the forward implication `A1 ⊆ A2 ⇒ β(A1) ⊇ β(A2)` on all pairs
/// and the reverse implication on every pair whose first element is not
/// forced onto `V`. Strata of codimension `dim V` (points) and the empty set
/// must all be sent to `V` by the dimension and emptiness conditions, so any
/// such element `A1` has `β(A1) ⊇ β(A2)` for every `A2`; those pairs are
/// listed in `exempt_pairs` instead of failing `t2`. For the same reason
/// `injective` is checked on the remaining elements only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransverseReport {
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub t4: bool,
    pub injective: bool,
    pub exempt_pairs: Vec<(String, String)>,
    pub failures: Vec<String>,
}

impl TransverseReport {
    pub fn all_true(&self) -> bool {
        self.t1 && self.t2 && self.t3 && self.t4 && self.injective
    }
}

fn forced_to_top(ip: &IntersectionPoset, a: usize) -> bool {
    ip.codim(a).is_none_or(|c| c == ip.top_dim())
}

/// Checks (T1)-(T4) exactly over the rationals.
pub fn verify_transverse(ip: &IntersectionPoset, t: &TransverseArrangement) -> TransverseReport {
    let mut failures = Vec::new();
    let mut exempt_pairs = Vec::new();
    let top = ip.top_subspace();
    let name = |i: usize| ip.name(i).to_string();
    let beta = &t.beta;
    let contains = |a: &AffineSubspace, b: &AffineSubspace| a.contains(b).unwrap_or(false);

    let t1 = match ip.empty() {
        Some(e) => {
            let ok = beta[e] == *top;
            if !ok {
                failures.push("T1: beta(∅) is not V".to_string());
            }
            ok
        }
        None => true,
    };

    let mut t2 = true;
    for a in 0..ip.len() {
        for b in 0..ip.len() {
            let sub = ip.leq(a, b);
            let sup = contains(&beta[a], &beta[b]);
            if sub && !sup {
                t2 = false;
                failures.push(format!("T2: {} ⊆ {} but beta does not reverse it", name(a), name(b)));
            } else if sup && !sub {
                if forced_to_top(ip, a) && beta[a] == *top {
                    exempt_pairs.push((name(a), name(b)));
                } else {
                    t2 = false;
                    failures.push(format!(
                        "T2: beta({}) ⊇ beta({}) without {} ⊆ {}",
                        name(a),
                        name(b),
                        name(a),
                        name(b)
                    ));
                }
            }
        }
    }

    let mut injective = true;
    for a in 0..ip.len() {
        for b in a + 1..ip.len() {
            if forced_to_top(ip, a) && forced_to_top(ip, b) {
                continue;
            }
            if beta[a] == beta[b] {
                injective = false;
                failures.push(format!("beta({}) = beta({})", name(a), name(b)));
            }
        }
    }

    let mut t3 = true;
    for a in ip.strata() {
        let codim = ip.codim(a).expect("non-empty");
        let dim = beta[a].intersect(top).ok().and_then(|s| s.dim());
        if dim != Some(codim) {
            t3 = false;
            failures.push(format!("T3: dim beta({}) is {dim:?}, codim is {codim}", name(a)));
            continue;
        }
        let meet = beta[a].intersect(ip.element(a)).expect("same ambient");
        if meet.dim() != Some(0) {
            t3 = false;
            failures.push(format!("T3: beta({}) ∩ {} is not a point", name(a), name(a)));
        }
    }

    let mut t4 = true;
    for a in 0..ip.len() {
        let meet = beta[a].intersect(ip.element(a)).expect("same ambient");
        if meet.is_empty() {
            continue;
        }
        for b in 0..ip.len() {
            if ip.leq(a, b) {
                continue;
            }
            let triple = meet.intersect(ip.element(b)).expect("same ambient");
            if !triple.is_empty() {
                t4 = false;
                failures.push(format!("T4: beta({}) ∩ {} meets {}", name(a), name(a), name(b)));
            }
        }
    }

    TransverseReport {
        t1,
        t2,
        t3,
        t4,
        injective,
        exempt_pairs,
        failures,
    }
}

/// The direct construction for a given basepoint and form.
pub fn beta_direct(
    ip: &IntersectionPoset,
    x: &[BigRational],
    form: &RationalMatrix,
) -> Result<Vec<AffineSubspace>, LinearError> {
    let top = ip.top_subspace();
    ip.elements()
        .iter()
        .map(|a| {
            if a.is_empty() {
                return Ok(top.clone());
            }
            let tangent = a.translate_through(x)?;
            orthogonal_complement(&tangent, form, x)?.intersect(top)
        })
        .collect()
}

/// The homogenised construction: `form` is `(n+1) x (n+1)`.
pub fn beta_homogenized(
    ip: &IntersectionPoset,
    x: &[BigRational],
    form: &RationalMatrix,
) -> Result<Vec<AffineSubspace>, LinearError> {
    let n = x.len();
    let origin = vec![BigRational::zero(); n + 1];
    let top = ip.top_subspace();
    ip.elements()
        .iter()
        .map(|a| {
            if a.is_empty() {
                return Ok(top.clone());
            }
            // cone over A: a.v = b t for every equation (a | b) of A
            let eq = a.equations();
            let rows = (0..eq.rows())
                .map(|r| {
                    let row = eq.row(r);
                    let mut out = row[..n].to_vec();
                    out.push(-row[n].clone());
                    out.push(BigRational::zero());
                    out
                })
                .collect();
            let cone = AffineSubspace::from_equations(n + 1, rows)?;
            let w = orthogonal_complement(&cone, form, &origin)?;
            let directions: Vec<Vec<BigRational>> = w
                .direction_basis()?
                .into_iter()
                .map(|v| (0..n).map(|i| &v[i] - &v[n] * &x[i]).collect())
                .collect();
            let independent = RationalMatrix::from_rows(n, directions.clone()).rank() == directions.len();
            if !independent {
                return Err(LinearError::DegeneratePairing);
            }
            AffineSubspace::from_point_and_directions(x, &directions).intersect(top)
        })
        .collect()
}

fn sample_point(rng: &mut ChaCha8Rng, top: &AffineSubspace, bound: i64) -> Vec<BigRational> {
    // a point of the top plus a random combination of its directions
    let base = top.some_point().expect("top is non-empty");
    let dirs = top.direction_basis().expect("top is non-empty");
    let mut p = base;
    for d in &dirs {
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)));
        for (pi, di) in p.iter_mut().zip(d) {
            *pi += &c * di;
        }
    }
    p
}

fn sample_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// Samples basepoints and symmetric forms from a seeded generator until the
/// resulting arrangement passes [`verify_transverse`].
///
/// Attempt `k` (from 0) draws integer entries from `[-N, N]` with
/// `N = 10 (k + 1)`. Each attempt tries the direct construction first and the
/// homogenised one if the direct one fails.
pub fn construct_transverse(ip: &IntersectionPoset, seed: u64) -> Result<TransverseArrangement, TransverseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ip.top_subspace().ambient_dim();
    let mut last_failure = String::from("no attempt made");
    for attempt in 0..RETRY_LIMIT {
        let bound = INITIAL_BOX * (attempt as i64 + 1);
        let x = sample_point(&mut rng, ip.top_subspace(), bound);
        let form = sample_symmetric(&mut rng, n, bound);
        let lifted = sample_symmetric(&mut rng, n + 1, bound);
        let attempts = attempt + 1;
        for (construction, form) in [
            (Construction::Direct, form),
            (Construction::Homogenized, lifted),
        ] {
            if form.rank() < form.rows() {
                last_failure = "sampled form is degenerate".into();
                continue;
            }
            let beta = match construction {
                Construction::Direct => beta_direct(ip, &x, &form),
                Construction::Homogenized => beta_homogenized(ip, &x, &form),
            };
            let beta = match beta {
                Ok(b) => b,
                Err(e) => {
                    last_failure = e.to_string();
                    continue;
                }
            };
            let t = TransverseArrangement {
                basepoint: x.clone(),
                form,
                beta,
                seed,
                attempts,
                construction,
            };
            let report = verify_transverse(ip, &t);
            if report.all_true() {
                return Ok(t);
            }
            last_failure = report.failures.join("; ");
        }
    }
    Err(TransverseError::RetryLimit {
        attempts: RETRY_LIMIT,
        last_failure,
    })
}
