//! Per-stratum summands of the cohomology of the complement, their Betti
//! numbers, and restriction to a linear subspace.
//!
//! For a stratum `M` of codimension `c` the summand in degree `p` is
//! `h^p_M = H_{2c-p}(S^{{M},{V}} (x) Z/n)`, carrying the Tate twist `-c`.
//! The twist is stored only as the integer weight.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{build_poset, build_poset_within, Arrangement, ArrangementError, IntersectionPoset};
use crate::complex::{ChainComplex, ComplexError};
use crate::homology::{homology_mod_n, HomologyError, ModNGroup, ModNHomology};
use crate::linear::AffineSubspace;
use crate::nerve::{induced_chain_map, stratum_complex, Chain};
use crate::transverse::TransverseArrangement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("the empty stratum carries no summand")]
    EmptyStratum,
    #[error("restriction target must be a non-empty subspace of the ambient space")]
    BadSubspace,
    #[error("the frame does not cover stratum {0}")]
    FrameMismatch(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// The summand `h^*_M` of one stratum.
#[derive(Debug, Clone)]
pub struct TwistedSummand {
    pub stratum: usize,
    pub name: String,
    pub codim: usize,
    /// Exponent of `mu_n`, always `-codim`.
    pub twist_weight: i64,
    pub modulus: u64,
    /// `S^{{M},{V}}`.
    pub complex: ChainComplex<Chain>,
    /// Its homology with `Z/n` coefficients.
    pub homology: ModNHomology,
}

impl TwistedSummand {
    /// Homological degree `2c - p` holding `h^p`.
    pub fn homological_degree(&self, p: usize) -> i64 {
        2 * self.codim as i64 - p as i64
    }

    pub fn group(&self, p: usize) -> Option<&ModNGroup> {
        self.homology.group(self.homological_degree(p))
    }

    pub fn rank(&self, p: usize) -> usize {
        self.group(p).map_or(0, ModNGroup::rank)
    }

    /// Cohomological degrees with a nonzero group, ascending.
    pub fn nonzero_degrees(&self) -> Vec<usize> {
        (0..=2 * self.codim).filter(|&p| self.rank(p) > 0).collect()
    }
}

/// Computes `h^*_M` for a non-empty stratum `M`.
pub fn summand(ip: &IntersectionPoset, m: usize, n: u64) -> Result<TwistedSummand, DecompositionError> {
    let codim = ip.codim(m).ok_or(DecompositionError::EmptyStratum)?;
    summand_with_codim(ip, m, codim, n)
}

fn summand_with_codim(
    ip: &IntersectionPoset,
    m: usize,
    codim: usize,
    n: u64,
) -> Result<TwistedSummand, DecompositionError> {
    let complex = stratum_complex(ip, m);
    let homology = homology_mod_n(&complex, n)?;
    Ok(TwistedSummand {
        stratum: m,
        name: ip.name(m).to_string(),
        codim,
        twist_weight: -(codim as i64),
        modulus: n,
        complex,
        homology,
    })
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub modulus: u64,
    pub summands: Vec<TwistedSummand>,
    /// `betti[p] = sum_M rank h^p_M`.
    pub betti: Vec<usize>,
}

impl DecompositionReport {
    /// Coefficients of `sum_p betti(p) t^p`.
    pub fn poincare_polynomial(&self) -> Vec<i64> {
        self.betti.iter().map(|&b| b as i64).collect()
    }

    pub fn summand_by_name(&self, name: &str) -> Option<&TwistedSummand> {
        self.summands.iter().find(|s| s.name == name)
    }
}

fn assemble(modulus: u64, summands: Vec<TwistedSummand>) -> DecompositionReport {
    let top = summands.iter().map(|s| 2 * s.codim).max().unwrap_or(0);
    let mut betti = vec![0; top + 1];
    for s in &summands {
        for (p, b) in betti.iter_mut().enumerate() {
            *b += s.rank(p);
        }
    }
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    DecompositionReport {
        modulus,
        summands,
        betti,
    }
}

/// All summands of the arrangement, one per non-empty element of the poset.
pub fn decompose(arr: &Arrangement, n: u64) -> Result<DecompositionReport, DecompositionError> {
    decompose_poset(&build_poset(arr), n)
}

pub fn decompose_poset(ip: &IntersectionPoset, n: u64) -> Result<DecompositionReport, DecompositionError> {
    let summands = ip
        .strata()
        .into_iter()
        .map(|m| summand(ip, m, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(n, summands))
}

/// Same as [`decompose_poset`], but reading each codimension off the frame
/// as `dim beta(M)`.
pub fn decompose_with_frame(
    ip: &IntersectionPoset,
    frame: &TransverseArrangement,
    n: u64,
) -> Result<DecompositionReport, DecompositionError> {
    let summands = ip
        .strata()
        .into_iter()
        .map(|m| {
            let c = frame
                .beta
                .get(m)
                .and_then(AffineSubspace::dim)
                .ok_or_else(|| DecompositionError::FrameMismatch(ip.name(m).to_string()))?;
            summand_with_codim(ip, m, c, n)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(n, summands))
}

/// `sum_{M != ∅} |mu(M, V)| t^{cd M}`; the Poincaré polynomial of the
/// complement for hyperplane arrangements.
pub fn mobius_poincare(ip: &IntersectionPoset) -> Vec<i64> {
    let mut coeffs = vec![0i64; ip.top_dim() + 1];
    for m in ip.strata() {
        let mu = ip.mobius(m, ip.top()).expect("every element lies below the top");
        coeffs[ip.codim(m).expect("non-empty")] += mu.abs();
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

/// What happens to one source summand under restriction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RestrictionBlock {
    /// The summand maps to zero.
    Zero { reason: String },
    /// The summand maps into `h_{target}`; `matrices[p]` has one row per
    /// target basis element and one column per source basis element, entries
    /// reduced modulo the order of the target summand.
    Map {
        target: String,
        matrices: BTreeMap<usize, Vec<Vec<u64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionEntry {
    pub source: String,
    pub codim: usize,
    pub twist_weight: i64,
    pub target_codim: Option<usize>,
    pub block: RestrictionBlock,
}

#[derive(Debug, Clone)]
pub struct RestrictionReport {
    pub modulus: u64,
    /// Some member contains `V'`, so the complement inside `V'` is empty.
    pub target_complement_empty: bool,
    pub target_poset: IntersectionPoset,
    pub entries: Vec<RestrictionEntry>,
}

/// Restriction of every summand to the linear subspace `V'`.
pub fn restriction_map(
    arr: &Arrangement,
    vprime: &AffineSubspace,
    n: u64,
) -> Result<RestrictionReport, DecompositionError> {
    if vprime.is_empty() || vprime.ambient_dim() != arr.ambient_dim() {
        return Err(DecompositionError::BadSubspace);
    }
    let ip = build_poset(arr);
    let target = build_poset_within(vprime, arr.members())?;
    let target_complement_empty = arr
        .members()
        .iter()
        .any(|m| m.subspace.contains(vprime).unwrap_or(false));
    let phi: Vec<usize> = ip
        .elements()
        .iter()
        .map(|a| {
            let image = a.intersect(vprime).expect("same ambient");
            target.index_of(&image).expect("intersection closure contains every image")
        })
        .collect();

    let mut entries = Vec::new();
    for m in ip.strata() {
        let src = summand(&ip, m, n)?;
        let image = phi[m];
        let target_codim = target.codim(image);
        let block = match target_codim {
            // V' itself belongs to the restricted arrangement: nothing survives
            _ if target_complement_empty => RestrictionBlock::Zero {
                reason: "V' lies in a member, its complement is empty".to_string(),
            },
            None => RestrictionBlock::Zero {
                reason: format!("{} ∩ V' is empty", src.name),
            },
            Some(c) if c < src.codim => RestrictionBlock::Zero {
                reason: format!(
                    "codimension drops from {} to {c} on V'",
                    src.codim
                ),
            },
            Some(_) => {
                let tgt = summand(&target, image, n)?;
                let f = induced_chain_map(&src.complex, &tgt.complex, &phi)?;
                let mut matrices = BTreeMap::new();
                for p in src.nonzero_degrees() {
                    let deg = src.homological_degree(p);
                    let group = src.group(p).expect("nonzero degree");
                    let fm = f.matrix(deg, tgt.complex.rank(deg), src.complex.rank(deg));
                    let Some(tgroup) = tgt.group(p) else {
                        matrices.insert(p, Vec::new());
                        continue;
                    };
                    let mut cols = Vec::new();
                    for s in &group.summands {
                        let v: Vec<BigInt> = s.representative.iter().map(|&x| BigInt::from(x)).collect();
                        cols.push(tgroup.coordinates(&fm.mul_vec(&v))?);
                    }
                    let rows = (0..tgroup.rank())
                        .map(|r| cols.iter().map(|c| c[r]).collect())
                        .collect();
                    matrices.insert(p, rows);
                }
                RestrictionBlock::Map {
                    target: tgt.name.clone(),
                    matrices,
                }
            }
        };
        entries.push(RestrictionEntry {
            source: src.name.clone(),
            codim: src.codim,
            twist_weight: src.twist_weight,
            target_codim,
            block,
        });
    }
    Ok(RestrictionReport {
        modulus: n,
        target_complement_empty,
        target_poset: target,
        entries,
    })
}

/// For the sub-arrangement of members containing `A'`, compares the summands
/// of the shared strata with those of the full arrangement. Returns the names
/// of strata whose ranks differ (empty when everything agrees).
pub fn sub_arrangement_mismatches(
    arr: &Arrangement,
    a_prime: &AffineSubspace,
    n: u64,
) -> Result<Vec<String>, DecompositionError> {
    let members: Vec<(String, AffineSubspace)> = arr
        .members()
        .iter()
        .filter(|m| m.subspace.contains(a_prime).unwrap_or(false))
        .map(|m| (m.name.clone(), m.subspace.clone()))
        .collect();
    let sub = Arrangement::new(arr.ambient_dim(), members)?;
    let small = build_poset(&sub);
    let big = build_poset(arr);
    let mut bad = Vec::new();
    for m in small.strata() {
        let Some(mb) = big.index_of(small.element(m)) else {
            bad.push(small.name(m).to_string());
            continue;
        };
        let a = summand(&small, m, n)?;
        let b = summand(&big, mb, n)?;
        let top = 2 * a.codim.max(b.codim);
        if a.codim != b.codim || (0..=top).any(|p| a.group(p).map(ModNGroup::orders) != b.group(p).map(ModNGroup::orders)) {
            bad.push(small.name(m).to_string());
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linear::rat;

    #[test]
    fn top_summand_is_the_unit() {
        let ip = build_poset(&catalog::transverse_lines());
        let s = summand(&ip, ip.top(), 5).unwrap();
        assert_eq!(s.nonzero_degrees(), vec![0]);
        assert_eq!(s.rank(0), 1);
        assert_eq!(s.twist_weight, 0);
    }

    #[test]
    fn point_complement_summand() {
        for n in 1..=3 {
            let ip = build_poset(&catalog::point_complement(n));
            let s = summand(&ip, 0, 7).unwrap();
            assert_eq!(s.nonzero_degrees(), vec![2 * n - 1]);
            assert_eq!(s.twist_weight, -(n as i64));
        }
    }

    #[test]
    fn empty_stratum_is_signalled() {
        let ip = build_poset(&catalog::parallel_lines());
        assert_eq!(
            summand(&ip, ip.empty().unwrap(), 2).unwrap_err(),
            DecompositionError::EmptyStratum
        );
    }

    #[test]
    fn betti_examples() {
        assert_eq!(decompose(&catalog::point_complement(1), 3).unwrap().betti, vec![1, 1]);
        assert_eq!(decompose(&catalog::transverse_lines(), 3).unwrap().betti, vec![1, 2, 1]);
        let braid = decompose(&catalog::braid3(), 2).unwrap();
        assert_eq!(braid.poincare_polynomial(), vec![1, 3, 2]);
        assert_eq!(mobius_poincare(&build_poset(&catalog::braid3())), vec![1, 3, 2]);
        let origin = decompose(&catalog::transverse_lines(), 6).unwrap();
        let s = origin.summand_by_name("L1∩L2").unwrap();
        assert_eq!(s.nonzero_degrees(), vec![2]);
        assert_eq!(s.group(2).unwrap().orders(), vec![6]);
    }

    fn line(rows: &[&[i64]]) -> AffineSubspace {
        AffineSubspace::from_i64_equations(2, rows)
    }

    #[test]
    fn restriction_to_a_generic_line() {
        // x + y = 1 misses the origin
        let r = restriction_map(&catalog::transverse_lines(), &line(&[&[1, 1, 1]]), 5).unwrap();
        for e in &r.entries {
            match e.source.as_str() {
                "L1" | "L2" => {
                    let RestrictionBlock::Map { matrices, .. } = &e.block else {
                        panic!("{} should map", e.source)
                    };
                    assert_eq!(matrices[&1].len(), 1);
                    assert_ne!(matrices[&1][0][0], 0);
                }
                "L1∩L2" => assert!(matches!(e.block, RestrictionBlock::Zero { .. })),
                _ => {}
            }
        }
    }

    #[test]
    fn restriction_to_a_member() {
        let r = restriction_map(&catalog::transverse_lines(), &line(&[&[1, 0, 0]]), 5).unwrap();
        assert!(r.target_complement_empty);
        assert!(r.entries.iter().all(|e| matches!(e.block, RestrictionBlock::Zero { .. })));
    }

    #[test]
    fn restriction_to_a_line_through_the_origin() {
        let r = restriction_map(&catalog::transverse_lines(), &line(&[&[1, -2, 0]]), 7).unwrap();
        for name in ["L1", "L2"] {
            let e = r.entries.iter().find(|e| e.source == name).unwrap();
            let RestrictionBlock::Map { target, matrices } = &e.block else {
                panic!("{name} should map")
            };
            assert_eq!(target, "L1=L2");
            assert_ne!(matrices[&1][0][0], 0);
        }
    }

    #[test]
    fn bad_subspaces_are_rejected() {
        let arr = catalog::transverse_lines();
        assert!(restriction_map(&arr, &AffineSubspace::empty(2), 2).is_err());
        assert!(restriction_map(&arr, &AffineSubspace::point(&[rat(1), rat(1), rat(1)]), 2).is_err());
    }

    #[test]
    fn sub_arrangements_share_summands() {
        for (_, arr) in catalog::desk_arrangements() {
            let ip = build_poset(&arr);
            for a in ip.strata() {
                assert!(sub_arrangement_mismatches(&arr, ip.element(a), 3).unwrap().is_empty());
            }
        }
    }
}
