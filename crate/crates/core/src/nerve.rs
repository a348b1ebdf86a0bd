//! Chain complexes of the nerve of a finite poset.
//!
//! A chain is a strictly increasing sequence of element indices
//! `A_0 < A_1 < ... < A_m`, sitting in degree `m`. Bases are listed by degree
//! and then lexicographically in the poset's element order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::{ArrangementError, IntersectionPoset};
use crate::complex::{ChainComplex, ChainMap, ComplexError, Summand};
use crate::homology::{homology_z, GradedHomology};
use crate::linear::IntegerMatrix;
use crate::poset::{FinitePoset, LocallyClosedSet};

/// A non-degenerate chain of element indices.
pub type Chain = Vec<usize>;

fn indicator(n: usize, set: &[usize]) -> Vec<bool> {
    let mut v = vec![false; n];
    for &x in set {
        v[x] = true;
    }
    v
}

/// All chains with every vertex in `allowed`, first vertex in `start` and last
/// vertex in `end`, grouped by degree.
pub(crate) fn enumerate_chains(p: &FinitePoset, allowed: &[bool], start: &[bool], end: &[bool]) -> Vec<Vec<Chain>> {
    let mut by_degree: Vec<Vec<Chain>> = vec![Vec::new()];
    let mut stack: Vec<Chain> = (0..p.len())
        .rev()
        .filter(|&x| allowed[x] && start[x])
        .map(|x| vec![x])
        .collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("non-empty chain");
        if end[last] {
            let m = chain.len() - 1;
            if by_degree.len() <= m {
                by_degree.resize(m + 1, Vec::new());
            }
            by_degree[m].push(chain.clone());
        }
        for next in (0..p.len()).rev() {
            if allowed[next] && p.lt(last, next) {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
    }
    by_degree
}

fn sign(i: usize) -> BigInt {
    if i.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Assembles the complex on the given chains. Face `i` of a chain is kept
/// when `keep(i, chain)` says so, and must then be a basis chain.
fn assemble(
    mut by_degree: Vec<Vec<Chain>>,
    augmented: bool,
    keep: impl Fn(usize, &Chain) -> bool,
) -> ChainComplex<Chain> {
    if augmented {
        by_degree.insert(0, vec![Vec::new()]);
    }
    let base = if augmented { -1 } else { 0 };
    let index: Vec<HashMap<&Chain, usize>> = by_degree
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(by_degree.len());
    for (k, basis) in by_degree.iter().enumerate() {
        let rows = if k == 0 { 0 } else { by_degree[k - 1].len() };
        let mut d = IntegerMatrix::zeros(rows, basis.len());
        if k > 0 {
            for (col, chain) in basis.iter().enumerate() {
                if chain.len() == 1 {
                    // augmentation: every vertex maps to the empty chain
                    d.set(0, col, BigInt::one());
                    continue;
                }
                for i in 0..chain.len() {
                    if !keep(i, chain) {
                        continue;
                    }
                    let mut face = chain.clone();
                    face.remove(i);
                    let row = *index[k - 1]
                        .get(&face)
                        .unwrap_or_else(|| panic!("face {i} of {chain:?} leaves the basis"));
                    d.add_to(row, col, &sign(i));
                }
            }
        }
        boundaries.push(d);
    }
    ChainComplex::new(base, by_degree, boundaries).expect("nerve differential squares to zero")
}

/// `S^C`: chains with all vertices in `c`, full alternating face differential.
pub fn complex_sc(p: &FinitePoset, c: &[usize]) -> ChainComplex<Chain> {
    let inside = indicator(p.len(), c);
    assemble(enumerate_chains(p, &inside, &inside, &inside), false, |_, _| true)
}

/// The order complex of `c` augmented by the empty chain in degree `-1`, whose
/// homology is the reduced homology of the classifying space of `c`.
pub fn reduced_order_complex(p: &FinitePoset, c: &[usize]) -> ChainComplex<Chain> {
    let inside = indicator(p.len(), c);
    assemble(enumerate_chains(p, &inside, &inside, &inside), true, |_, _| true)
}

/// `S^{M,N}`: chains `A_0 < ... < A_m` with `A_0` in `M` and `A_m` in `N`.
///
/// The first face is dropped when `A_1` is not in `M`, the last when `A_{m-1}`
/// is not in `N`. Interior faces are always kept; that they stay inside the
/// basis is asserted during assembly.
pub fn complex_smn(p: &FinitePoset, m: &LocallyClosedSet, n: &LocallyClosedSet) -> ChainComplex<Chain> {
    let all = vec![true; p.len()];
    let start = indicator(p.len(), &m.members);
    let end = indicator(p.len(), &n.members);
    let chains = enumerate_chains(p, &all, &start, &end);
    assemble(chains, false, |i, chain| {
        let last = chain.len() - 1;
        if i == 0 {
            start[chain[1]]
        } else if i == last {
            end[chain[last - 1]]
        } else {
            true
        }
    })
}

/// The chain map induced by a monotone map `phi` on vertices,
/// `[A_0..A_m] -> [phi(A_0)..phi(A_m)]`, degenerate images sent to zero.
/// Every non-degenerate image must be a basis chain of `target`.
pub fn induced_chain_map(
    source: &ChainComplex<Chain>,
    target: &ChainComplex<Chain>,
    phi: &[usize],
) -> Result<ChainMap, ComplexError> {
    let mut f = ChainMap::new();
    for m in source.degrees() {
        let index: HashMap<&Chain, usize> = target
            .basis(m)
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let mut mat = IntegerMatrix::zeros(target.rank(m), source.rank(m));
        for (col, chain) in source.basis(m).iter().enumerate() {
            let image: Chain = chain.iter().map(|&a| phi[a]).collect();
            if image.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let row = *index
                .get(&image)
                .unwrap_or_else(|| panic!("image chain {image:?} outside the target complex"));
            mat.set(row, col, BigInt::one());
        }
        f.insert(m, mat);
    }
    f.check(source, target)?;
    Ok(f)
}

/// `S^{{M},{V}}` for a stratum of an intersection poset.
pub fn stratum_complex(ip: &IntersectionPoset, m: usize) -> ChainComplex<Chain> {
    complex_smn(ip.poset(), &ip.singleton(m), &ip.singleton(ip.top()))
}

/// The augmented order complex of the open interval `]A, V[`.
pub fn interval_complex(ip: &IntersectionPoset, a: usize) -> Result<ChainComplex<Chain>, ArrangementError> {
    let interval = ip.open_interval(a)?;
    Ok(reduced_order_complex(ip.poset(), &interval.members))
}

/// Reduced integral homology of `]A, V[`.
pub fn reduced_interval_homology(ip: &IntersectionPoset, a: usize) -> Result<GradedHomology, ArrangementError> {
    let c = interval_complex(ip, a)?;
    Ok(homology_z(&c).expect("nerve complexes are complexes"))
}

/// Outcome of [`four_term_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourTermReport {
    pub exact: bool,
    /// Degree where the first failure was seen.
    pub failing_degree: Option<i64>,
    pub detail: String,
}

/// Checks exactness of
/// `0 -> S^{C-(M+N)} -> S^{C-M} + S^{C-N} -> S^C -> S^{M,N} -> 0`
/// with `C = open(M) ∩ closed(N)`, degree by degree.
///
/// The maps are `x -> (x, -x)`, `(a, b) -> a + b` and the projection onto
/// chains that start in `M` and end in `N`.
pub fn four_term_check(p: &FinitePoset, m: &LocallyClosedSet, n: &LocallyClosedSet) -> FourTermReport {
    let c: Vec<usize> = m
        .witness_open
        .iter()
        .copied()
        .filter(|x| n.witness_closed.contains(x))
        .collect();
    let minus = |remove: &dyn Fn(usize) -> bool| -> Vec<usize> {
        c.iter().copied().filter(|&x| !remove(x)).collect()
    };
    let k_set = minus(&|x| m.contains(x) || n.contains(x));
    let a_set = minus(&|x| m.contains(x));
    let b_set = minus(&|x| n.contains(x));
    let kc = complex_sc(p, &k_set);
    let ac = complex_sc(p, &a_set);
    let bc = complex_sc(p, &b_set);
    let sc = complex_sc(p, &c);
    let qc = complex_smn(p, m, n);
    let ab = ac.direct_sum(&bc);

    let lo = 0;
    let hi = sc.max_degree().max(qc.max_degree());
    let mut f = ChainMap::new();
    let mut g = ChainMap::new();
    let mut h = ChainMap::new();
    for deg in lo..=hi {
        let lookup = |basis: &[Summand<Chain, Chain>]| -> HashMap<Summand<Chain, Chain>, usize> {
            basis.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect()
        };
        let ab_index = lookup(ab.basis(deg));
        let mut fm = IntegerMatrix::zeros(ab.rank(deg), kc.rank(deg));
        for (col, chain) in kc.basis(deg).iter().enumerate() {
            fm.set(ab_index[&Summand::Left(chain.clone())], col, BigInt::one());
            fm.set(ab_index[&Summand::Right(chain.clone())], col, -BigInt::one());
        }
        let s_index: HashMap<&Chain, usize> =
            sc.basis(deg).iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut gm = IntegerMatrix::zeros(sc.rank(deg), ab.rank(deg));
        for (col, label) in ab.basis(deg).iter().enumerate() {
            let (Summand::Left(chain) | Summand::Right(chain)) = label;
            gm.set(s_index[chain], col, BigInt::one());
        }
        let q_index: HashMap<&Chain, usize> =
            qc.basis(deg).iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut hm = IntegerMatrix::zeros(qc.rank(deg), sc.rank(deg));
        for (col, chain) in sc.basis(deg).iter().enumerate() {
            if let Some(&row) = q_index.get(chain) {
                hm.set(row, col, BigInt::one());
            }
        }
        f.insert(deg, fm);
        g.insert(deg, gm);
        h.insert(deg, hm);
    }

    let fail = |deg: i64, what: &str| FourTermReport {
        exact: false,
        failing_degree: Some(deg),
        detail: what.to_string(),
    };
    if f.check(&kc, &ab).is_err() || g.check(&ab, &sc).is_err() || h.check(&sc, &qc).is_err() {
        return fail(0, "a map of the sequence is not a chain map");
    }
    for deg in lo..=hi {
        let fm = f.matrix(deg, ab.rank(deg), kc.rank(deg));
        let gm = g.matrix(deg, sc.rank(deg), ab.rank(deg));
        let hm = h.matrix(deg, qc.rank(deg), sc.rank(deg));
        if !gm.mul(&fm).is_zero() || !hm.mul(&gm).is_zero() {
            return fail(deg, "consecutive maps do not compose to zero");
        }
        let (rf, rg, rh) = (fm.rank(), gm.rank(), hm.rank());
        if rf != kc.rank(deg) {
            return fail(deg, "first map is not injective");
        }
        if ab.rank(deg) - rg != rf {
            return fail(deg, "not exact at the direct sum");
        }
        if sc.rank(deg) - rh != rg {
            return fail(deg, "not exact at S^C");
        }
        if rh != qc.rank(deg) {
            return fail(deg, "projection onto S^{M,N} is not surjective");
        }
    }
    FourTermReport {
        exact: true,
        failing_degree: None,
        detail: "exact in every degree".to_string(),
    }
}

/// The cap pairing of a dual basis chain `x*` with a chain `y`: the tail of
/// `y` after the prefix `x`, or `None` when `y` does not start with `x`.
pub fn cap_pair(x: &[usize], y: &[usize]) -> Option<Chain> {
    if x.is_empty() || y.len() < x.len() || y[..x.len()] != *x {
        return None;
    }
    Some(y[x.len() - 1..].to_vec())
}

/// Matrix of `phi ∩ - : S^{M,P}_m -> S^{N,P}_{m-l}` for a cochain `phi` on
/// `S^{M,N}_l` given by its coefficients on the dual basis.
///
/// With `delta phi = phi ∘ d` this satisfies
/// `d(phi ∩ s) = (-1)^l (phi ∩ d s - delta phi ∩ s)`.
pub fn cap_matrix(
    mn: &ChainComplex<Chain>,
    mp: &ChainComplex<Chain>,
    np: &ChainComplex<Chain>,
    l: i64,
    phi: &[BigInt],
    m: i64,
) -> IntegerMatrix {
    let target: HashMap<&Chain, usize> = np
        .basis(m - l)
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut out = IntegerMatrix::zeros(np.rank(m - l), mp.rank(m));
    for (k, x) in mn.basis(l).iter().enumerate() {
        if phi[k].is_zero() {
            continue;
        }
        for (col, y) in mp.basis(m).iter().enumerate() {
            if let Some(tail) = cap_pair(x, y) {
                if let Some(&row) = target.get(&tail) {
                    out.add_to(row, col, &phi[k]);
                }
            }
        }
    }
    out
}
