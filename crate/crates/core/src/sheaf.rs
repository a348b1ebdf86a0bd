//! Sheaves of `Z/n`-modules on finite posets.
//!
//! Open sets are the up-closed subsets, so the stalk at `x` is the value on
//! `U(x) = {y : x <= y}` and every relation `x <= y` gives a restriction
//! `F_x -> F_y`. Modules are direct sums of cyclic groups `Z/a` with `a | n`;
//! maps are integer matrices acting on generators.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{ChainComplex, ChainMap, CochainComplex, ComplexError};
use crate::homology::PresentedComplex;
use crate::linear::IntegerMatrix;
use crate::nerve::{complex_smn, enumerate_chains, induced_chain_map, Chain};
use crate::poset::{FinitePoset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("annihilator {annihilator} at {at} does not divide the modulus {modulus}")]
    BadAnnihilator { at: usize, annihilator: u64, modulus: u64 },
    #[error("expected one stalk per element: {expected}, found {found}")]
    StalkCount { expected: usize, found: usize },
    #[error("missing restriction {0} -> {1}")]
    MissingRestriction(usize, usize),
    #[error("restriction {0} -> {1} has the wrong shape")]
    RestrictionShape(usize, usize),
    #[error("restriction {0} -> {1} is not a homomorphism of the stalks")]
    NotAHomomorphism(usize, usize),
    #[error("restrictions along {0} -> {1} -> {2} do not compose")]
    NotFunctorial(usize, usize, usize),
    #[error("{0} is not a maximal element")]
    NotMaximal(String),
    #[error("support set is not closed")]
    NotClosed,
    #[error("map precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A sheaf on a finite poset, given by its stalks and restrictions.
#[derive(Debug, Clone)]
pub struct PosetSheaf {
    base: FinitePoset,
    modulus: u64,
    stalks: Vec<Vec<u64>>,
    restrictions: BTreeMap<(usize, usize), IntegerMatrix>,
}

fn divides(d: u64, v: &BigInt) -> bool {
    (v % BigInt::from(d)).is_zero()
}

impl PosetSheaf {
    /// Validates stalks, the homomorphism condition and functoriality.
    /// `restrictions` must contain every pair `x < y`; the matrix has one row
    /// per generator of `F_y` and one column per generator of `F_x`.
    pub fn new(
        base: FinitePoset,
        modulus: u64,
        stalks: Vec<Vec<u64>>,
        restrictions: BTreeMap<(usize, usize), IntegerMatrix>,
    ) -> Result<Self, SheafError> {
        if modulus < 2 {
            return Err(SheafError::BadModulus(modulus));
        }
        if stalks.len() != base.len() {
            return Err(SheafError::StalkCount {
                expected: base.len(),
                found: stalks.len(),
            });
        }
        for (x, s) in stalks.iter().enumerate() {
            if let Some(&a) = s.iter().find(|&&a| a < 2 || !modulus.is_multiple_of(a)) {
                return Err(SheafError::BadAnnihilator {
                    at: x,
                    annihilator: a,
                    modulus,
                });
            }
        }
        let sheaf = PosetSheaf {
            base,
            modulus,
            stalks,
            restrictions,
        };
        let n = sheaf.base.len();
        for x in 0..n {
            for y in 0..n {
                if !sheaf.base.lt(x, y) {
                    continue;
                }
                let r = sheaf
                    .restrictions
                    .get(&(x, y))
                    .ok_or(SheafError::MissingRestriction(x, y))?;
                if r.rows() != sheaf.stalks[y].len() || r.cols() != sheaf.stalks[x].len() {
                    return Err(SheafError::RestrictionShape(x, y));
                }
                // a_j e_j must land in the relations of F_y
                for (j, &a) in sheaf.stalks[x].iter().enumerate() {
                    for (i, &b) in sheaf.stalks[y].iter().enumerate() {
                        if !divides(b, &(r.get(i, j) * BigInt::from(a))) {
                            return Err(SheafError::NotAHomomorphism(x, y));
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if sheaf.base.lt(x, y) && sheaf.base.lt(y, z) {
                        let composite = sheaf.restriction(y, z).mul(&sheaf.restriction(x, y));
                        let direct = sheaf.restriction(x, z);
                        if !sheaf.congruent_in(z, &composite, &direct) {
                            return Err(SheafError::NotFunctorial(x, y, z));
                        }
                    }
                }
            }
        }
        Ok(sheaf)
    }

    fn congruent_in(&self, target: usize, a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
        self.stalks[target].iter().enumerate().all(|(i, &order)| {
            (0..a.cols()).all(|j| divides(order, &(a.get(i, j) - b.get(i, j))))
        })
    }

    /// `epsilon_{x*} M`: the module `M` on the closure of `x`, identities
    /// between its points, zero elsewhere.
    pub fn skyscraper(base: &FinitePoset, modulus: u64, x: usize, module: &[u64]) -> Result<Self, SheafError> {
        if x >= base.len() {
            return Err(PosetError::OutOfRange(x).into());
        }
        let stalks: Vec<Vec<u64>> = (0..base.len())
            .map(|y| if base.leq(y, x) { module.to_vec() } else { Vec::new() })
            .collect();
        Self::with_identities(base, modulus, stalks)
    }

    /// `epsilon_{V!} Z/n` for a maximal element `v`: `Z/n` at `v`, zero
    /// elsewhere.
    pub fn extension_by_zero_at_open_point(base: &FinitePoset, modulus: u64, v: usize) -> Result<Self, SheafError> {
        if v >= base.len() {
            return Err(PosetError::OutOfRange(v).into());
        }
        if !base.is_maximal(v) {
            return Err(SheafError::NotMaximal(base.name(v).to_string()));
        }
        let stalks = (0..base.len())
            .map(|y| if y == v { vec![modulus] } else { Vec::new() })
            .collect();
        Self::with_identities(base, modulus, stalks)
    }

    /// The constant sheaf `Z/n`.
    pub fn constant(base: &FinitePoset, modulus: u64) -> Result<Self, SheafError> {
        Self::with_identities(base, modulus, vec![vec![modulus]; base.len()])
    }

    /// Identity restrictions between equal stalks, zero maps otherwise.
    fn with_identities(base: &FinitePoset, modulus: u64, stalks: Vec<Vec<u64>>) -> Result<Self, SheafError> {
        let mut restrictions = BTreeMap::new();
        for x in 0..base.len() {
            for y in 0..base.len() {
                if base.lt(x, y) {
                    let (r, c) = (stalks[y].len(), stalks[x].len());
                    let m = if !stalks[x].is_empty() && stalks[x] == stalks[y] {
                        IntegerMatrix::identity(r)
                    } else {
                        IntegerMatrix::zeros(r, c)
                    };
                    restrictions.insert((x, y), m);
                }
            }
        }
        Self::new(base.clone(), modulus, stalks, restrictions)
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Annihilators of the generators of `F_x`.
    pub fn stalk(&self, x: usize) -> &[u64] {
        &self.stalks[x]
    }

    /// `F_x -> F_y` for `x <= y`.
    pub fn restriction(&self, x: usize, y: usize) -> IntegerMatrix {
        assert!(self.base.leq(x, y), "no restriction from {x} to {y}");
        if x == y {
            IntegerMatrix::identity(self.stalks[x].len())
        } else {
            self.restrictions[&(x, y)].clone()
        }
    }

    /// Invariant factors of the sections over the open set `open` that vanish
    /// outside `support` (all sections when `support` is `None`).
    pub fn sections(&self, open: &[usize], support: Option<&[usize]>) -> Vec<BigInt> {
        let in_support = |x: usize| support.is_none_or(|z| z.contains(&x));
        // generators: F_x for x in the open set and in the support
        let mut gen_offset = HashMap::new();
        let mut gens: Vec<BigInt> = Vec::new();
        for &x in open.iter().filter(|&&x| in_support(x)) {
            gen_offset.insert(x, gens.len());
            gens.extend(self.stalks[x].iter().map(|&a| BigInt::from(a)));
        }
        // constraints: r_{xy} s_x - s_y in F_y for x < y in the open set
        let mut rows: Vec<BigInt> = Vec::new();
        let mut blocks = Vec::new();
        for &x in open {
            for &y in open {
                if self.base.lt(x, y) {
                    blocks.push((x, y, rows.len()));
                    rows.extend(self.stalks[y].iter().map(|&a| BigInt::from(a)));
                }
            }
        }
        let mut d = IntegerMatrix::zeros(rows.len(), gens.len());
        for &(x, y, row0) in &blocks {
            if let Some(&col0) = gen_offset.get(&x) {
                let r = self.restriction(x, y);
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        d.add_to(row0 + i, col0 + j, r.get(i, j));
                    }
                }
            }
            if let Some(&col0) = gen_offset.get(&y) {
                for i in 0..self.stalks[y].len() {
                    d.add_to(row0 + i, col0 + i, &-BigInt::one());
                }
            }
        }
        let mut out = PresentedComplex {
            base_degree: 0,
            annihilators: vec![rows, gens],
            differentials: vec![IntegerMatrix::zeros(0, d.rows()), d],
        }
        .homology(1);
        out.sort();
        out
    }
}

/// One generator of `G^m`: a non-degenerate chain `x_0 < ... < x_m` and a
/// generator index of `F_{x_m}`.
pub type SheafGenerator = (Chain, usize);

/// The resolution `G(F)`: in degree `m` the sum of `epsilon_{x_0*} F_{x_m}`
/// over non-degenerate chains `x_0 < ... < x_m`.
#[derive(Debug, Clone)]
pub struct SheafComplex {
    sheaf: PosetSheaf,
    /// Chains by degree, lexicographic within a degree.
    chains: Vec<Vec<Chain>>,
}

/// The resolution of `F` by skyscrapers on chains.
pub fn resolution_g(f: &PosetSheaf) -> SheafComplex {
    let all = vec![true; f.base.len()];
    let chains = enumerate_chains(&f.base, &all, &all, &all);
    SheafComplex {
        sheaf: f.clone(),
        chains,
    }
}

/// A complex of `Z/n`-modules in cohomological degrees, each generator
/// carrying its annihilator.
#[derive(Debug, Clone)]
pub struct ModuleCochains {
    pub base_degree: i64,
    pub bases: Vec<Vec<SheafGenerator>>,
    pub annihilators: Vec<Vec<u64>>,
    /// `coboundaries[k]` maps degree `base_degree + k` to the next.
    pub coboundaries: Vec<IntegerMatrix>,
}

impl ModuleCochains {
    pub fn rank(&self, m: i64) -> usize {
        let k = m - self.base_degree;
        if k < 0 {
            0
        } else {
            self.bases.get(k as usize).map_or(0, Vec::len)
        }
    }

    /// The same data as a chain complex of presented groups, `C_k = G^{-k}`.
    pub fn presented(&self) -> PresentedComplex {
        let top = self.base_degree + self.bases.len() as i64 - 1;
        let annihilators: Vec<Vec<BigInt>> = self
            .annihilators
            .iter()
            .rev()
            .map(|a| a.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut differentials = vec![IntegerMatrix::zeros(0, self.rank(top))];
        for m in (self.base_degree..top).rev() {
            differentials.push(self.coboundaries[(m - self.base_degree) as usize].clone());
        }
        PresentedComplex {
            base_degree: -top,
            annihilators,
            differentials,
        }
    }

    /// Forgets the annihilators; requires `delta delta = 0` over `Z`.
    pub fn to_cochain_complex(&self) -> Result<CochainComplex<SheafGenerator>, ComplexError> {
        CochainComplex::new(self.base_degree, self.bases.clone(), self.coboundaries.clone())
    }
}

impl SheafComplex {
    pub fn sheaf(&self) -> &PosetSheaf {
        &self.sheaf
    }

    pub fn chains(&self, m: usize) -> &[Chain] {
        self.chains.get(m).map_or(&[], Vec::as_slice)
    }

    pub fn max_degree(&self) -> usize {
        self.chains.len() - 1
    }

    /// Generators of the summands whose chain passes `keep`, degree by degree.
    fn generators(&self, keep: &impl Fn(&Chain) -> bool) -> Vec<Vec<SheafGenerator>> {
        self.chains
            .iter()
            .map(|level| {
                level
                    .iter()
                    .filter(|c| keep(c))
                    .flat_map(|c| {
                        let last = *c.last().expect("non-empty");
                        (0..self.sheaf.stalks[last].len()).map(move |j| (c.clone(), j))
                    })
                    .collect()
            })
            .collect()
    }

    /// The differential restricted to the summands passing `keep`. For a
    /// chain `x` of degree `m + 1` and its face `d_i x`, the component is
    /// `(-1)^i` times the identity of `F_{x_{m+1}}`, except for the last face
    /// where it is the restriction `F_{x_m} -> F_{x_{m+1}}`.
    fn restricted(&self, keep: impl Fn(&Chain) -> bool) -> ModuleCochains {
        let bases = self.generators(&keep);
        let index: Vec<HashMap<&SheafGenerator, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, g)| (g, i)).collect())
            .collect();
        let mut coboundaries = Vec::new();
        for m in 0..bases.len() {
            let rows = bases.get(m + 1).map_or(0, Vec::len);
            let mut d = IntegerMatrix::zeros(rows, bases[m].len());
            if let Some(above) = bases.get(m + 1) {
                for (row, (x, j)) in above.iter().enumerate() {
                    let last = x.len() - 1;
                    for i in 0..x.len() {
                        let mut face = x.clone();
                        face.remove(i);
                        let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        if i == last {
                            let r = self.sheaf.restriction(x[last - 1], x[last]);
                            for k in 0..r.cols() {
                                let v = r.get(*j, k);
                                if v.is_zero() {
                                    continue;
                                }
                                if let Some(&col) = index[m].get(&(face.clone(), k)) {
                                    d.add_to(row, col, &(v * &sign));
                                }
                            }
                        } else if let Some(&col) = index[m].get(&(face, *j)) {
                            d.add_to(row, col, &sign);
                        }
                    }
                }
            }
            coboundaries.push(d);
        }
        let annihilators = bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|(c, j)| self.sheaf.stalks[*c.last().expect("non-empty")][*j])
                    .collect()
            })
            .collect();
        ModuleCochains {
            base_degree: 0,
            bases,
            annihilators,
            coboundaries,
        }
    }

    /// Global sections of `G`.
    pub fn global_sections(&self) -> ModuleCochains {
        self.restricted(|_| true)
    }

    /// The stalk `G_y`, augmented by `F_y` in degree `-1`.
    pub fn augmented_stalk(&self, y: usize) -> ModuleCochains {
        let base = &self.sheaf.base;
        let mut g = self.restricted(|c| base.leq(y, c[0]));
        let fy: Vec<SheafGenerator> = (0..self.sheaf.stalks[y].len()).map(|j| (vec![y], j)).collect();
        // F_y -> G^0_y = sum over x >= y of F_x, by restriction
        let mut aug = IntegerMatrix::zeros(g.rank(0), fy.len());
        for (row, (x, j)) in g.bases[0].iter().enumerate() {
            let r = self.sheaf.restriction(y, x[0]);
            for k in 0..fy.len() {
                aug.set(row, k, r.get(*j, k).clone());
            }
        }
        g.base_degree = -1;
        g.bases.insert(0, Vec::new());
        g.annihilators.insert(0, self.sheaf.stalks[y].clone());
        g.coboundaries.insert(0, aug);
        // the degree -1 generators are named by the one-point chain at y
        g.bases[0] = fy;
        g
    }

    /// `Gamma_Z`: the summands `epsilon_{x_0*} F_{x_m}` with `x_0` in the
    /// closed set `z`.
    pub fn sections_with_support(&self, z: &[usize]) -> Result<ModuleCochains, SheafError> {
        let base = &self.sheaf.base;
        if z.iter().any(|&x| x >= base.len()) || !base.is_down_closed(z) {
            return Err(SheafError::NotClosed);
        }
        Ok(self.restricted(|c| z.contains(&c[0])))
    }
}

/// Checks that `F -> G(F)` is a quasi-isomorphism at every stalk: the
/// augmented stalk complexes must be exact. Returns the failing elements.
pub fn stalkwise_quis_failures(f: &PosetSheaf) -> Vec<usize> {
    let g = resolution_g(f);
    (0..f.base.len())
        .filter(|&y| !g.augmented_stalk(y).presented().is_acyclic())
        .collect()
}

pub fn stalkwise_quis_check(f: &PosetSheaf) -> bool {
    stalkwise_quis_failures(f).is_empty()
}

/// `Gamma_{{a}} G(epsilon_{v!} Z/n)` on a poset with minimum `a` and maximum
/// `v`, with generators named by their chains.
pub fn open_point_support_sections(
    base: &FinitePoset,
    modulus: u64,
    a: usize,
    v: usize,
) -> Result<CochainComplex<Chain>, SheafError> {
    if !base.is_minimal(a) {
        return Err(SheafError::NotClosed);
    }
    let f = PosetSheaf::extension_by_zero_at_open_point(base, modulus, v)?;
    let sections = resolution_g(&f).sections_with_support(&[a])?;
    let bases: Vec<Vec<Chain>> = sections
        .bases
        .iter()
        .map(|b| b.iter().map(|(c, _)| c.clone()).collect())
        .collect();
    // trailing empty degrees carry no information
    let keep = bases.iter().rposition(|b| !b.is_empty()).map_or(0, |k| k + 1);
    let coboundaries = sections.coboundaries[..keep]
        .iter()
        .enumerate()
        .map(|(k, d)| {
            if k + 1 == keep {
                IntegerMatrix::zeros(0, d.cols())
            } else {
                d.clone()
            }
        })
        .collect();
    Ok(CochainComplex::new(0, bases[..keep].to_vec(), coboundaries)?)
}

/// The chain-level map `S^{{a},{v}} -> S^{{c},{w}}`, `sum c_x x -> sum c_x alpha(x)`,
/// for a monotone `alpha` with `alpha^{-1}(w) = {v}`, `alpha^{-1}(c) = {a}` that
/// keeps non-degenerate chains non-degenerate. Returns the map with its source
/// and target complexes.
pub fn support_pullback_map(
    source: &FinitePoset,
    (a, v): (usize, usize),
    target: &FinitePoset,
    (c, w): (usize, usize),
    alpha: &[usize],
) -> Result<(ChainComplex<Chain>, ChainComplex<Chain>, ChainMap), SheafError> {
    if alpha.len() != source.len() || alpha.iter().any(|&y| y >= target.len()) {
        return Err(SheafError::Precondition("alpha has the wrong shape".into()));
    }
    if !source.is_monotone(target, alpha) {
        return Err(SheafError::Precondition("alpha is not monotone".into()));
    }
    let fibre = |y: usize| (0..source.len()).filter(|&x| alpha[x] == y).collect::<Vec<_>>();
    if fibre(w) != vec![v] {
        return Err(SheafError::Precondition("the fibre over the top is not a single point".into()));
    }
    if fibre(c) != vec![a] {
        return Err(SheafError::Precondition("the fibre over the bottom is not a single point".into()));
    }
    let s = complex_smn(source, &source.locally_closed(&[a])?, &source.locally_closed(&[v])?);
    let t = complex_smn(target, &target.locally_closed(&[c])?, &target.locally_closed(&[w])?);
    for m in s.degrees() {
        for chain in s.basis(m) {
            let image: Vec<usize> = chain.iter().map(|&x| alpha[x]).collect();
            if image.windows(2).any(|p| p[0] == p[1]) {
                return Err(SheafError::Precondition(format!(
                    "alpha degenerates the chain {chain:?}"
                )));
            }
        }
    }
    let f = induced_chain_map(&s, &t, alpha)?;
    Ok((s, t, f))
}

/// Compares, for every skyscraper `epsilon_{x*} M` on `source` and every
/// point and closed set of `target`, the modules computed on both sides of
/// `alpha_* epsilon_{x*} M = epsilon_{alpha(x)*} M` and
/// `Gamma_{alpha^{-1} Z} = Gamma_Z alpha_*`. Returns a description of each
/// disagreement.
pub fn pushforward_mismatches(
    source: &FinitePoset,
    target: &FinitePoset,
    alpha: &[usize],
    modulus: u64,
    module: &[u64],
) -> Result<Vec<String>, SheafError> {
    let mut bad = Vec::new();
    let closed_sets: Vec<Vec<usize>> = target
        .all_locally_closed()
        .into_iter()
        .map(|s| s.members)
        .filter(|s| target.is_down_closed(s))
        .collect();
    for x in 0..source.len() {
        let upstairs = PosetSheaf::skyscraper(source, modulus, x, module)?;
        let downstairs = PosetSheaf::skyscraper(target, modulus, alpha[x], module)?;
        for y in 0..target.len() {
            let preimage: Vec<usize> = (0..source.len())
                .filter(|&s| target.leq(y, alpha[s]))
                .collect();
            let lhs = upstairs.sections(&preimage, None);
            let rhs = downstairs.sections(&target.up_set(y), None);
            if lhs != rhs {
                bad.push(format!("stalk of the pushforward of {x} at {y}"));
            }
        }
        let everything: Vec<usize> = (0..source.len()).collect();
        let target_all: Vec<usize> = (0..target.len()).collect();
        for z in &closed_sets {
            let preimage: Vec<usize> = everything.iter().copied().filter(|&s| z.contains(&alpha[s])).collect();
            let lhs = upstairs.sections(&everything, Some(&preimage));
            let rhs = downstairs.sections(&target_all, Some(z));
            if lhs != rhs {
                bad.push(format!("sections of {x} supported on {z:?}"));
            }
        }
    }
    Ok(bad)
}

/// Smallest `k` such that `1 -> k` defines a homomorphism `Z/from -> Z/to`.
pub fn hom_scale(from: u64, to: u64) -> u64 {
    to / from.gcd(&to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_poset;
    use crate::catalog;
    use crate::nerve::stratum_complex;

    fn chain_poset(k: usize) -> FinitePoset {
        FinitePoset::from_fn((0..k).map(|i| i.to_string()).collect(), |a, b| a <= b).unwrap()
    }

    fn diamond() -> FinitePoset {
        let names = ["a", "b", "c", "d"].map(String::from).to_vec();
        FinitePoset::from_fn(names, |x, y| x == y || x == 0 || y == 3).unwrap()
    }

    #[test]
    fn stalk_tables() {
        let p = chain_poset(3);
        let f = PosetSheaf::extension_by_zero_at_open_point(&p, 5, 2).unwrap();
        assert_eq!(f.stalk(2), &[5]);
        assert!(f.stalk(0).is_empty() && f.stalk(1).is_empty());
        assert!(matches!(
            PosetSheaf::extension_by_zero_at_open_point(&p, 5, 1),
            Err(SheafError::NotMaximal(_))
        ));
        let sky = PosetSheaf::skyscraper(&p, 4, 0, &[4]).unwrap();
        assert_eq!(sky.stalk(0), &[4]);
        assert!(sky.stalk(1).is_empty());
    }

    #[test]
    fn single_point_resolution() {
        let p = chain_poset(1);
        let g = resolution_g(&PosetSheaf::constant(&p, 3).unwrap());
        assert_eq!(g.max_degree(), 0);
        assert!(stalkwise_quis_check(g.sheaf()));
    }

    #[test]
    fn resolutions_are_quasi_isomorphisms() {
        for p in [chain_poset(3), diamond()] {
            for x in 0..p.len() {
                for module in [vec![6], vec![2, 6], vec![3]] {
                    let f = PosetSheaf::skyscraper(&p, 6, x, &module).unwrap();
                    assert!(stalkwise_quis_check(&f), "skyscraper at {x}");
                }
            }
            let top = p.maximum().unwrap();
            let f = PosetSheaf::extension_by_zero_at_open_point(&p, 4, top).unwrap();
            assert!(stalkwise_quis_check(&f));
            assert!(stalkwise_quis_check(&PosetSheaf::constant(&p, 4).unwrap()));
        }
    }

    #[test]
    fn broken_augmentation_is_detected() {
        let p = chain_poset(2);
        let mut r = BTreeMap::new();
        r.insert((0, 1), IntegerMatrix::zeros(1, 1));
        let f = PosetSheaf::new(p, 3, vec![vec![3], vec![3]], r).unwrap();
        assert!(stalkwise_quis_check(&f));
        // dropping the augmentation leaves F_0 in homology
        let g = resolution_g(&f);
        let mut stalk = g.augmented_stalk(0);
        stalk.coboundaries[0] = IntegerMatrix::zeros(stalk.coboundaries[0].rows(), 1);
        assert!(!stalk.presented().is_acyclic());
    }

    #[test]
    fn invalid_sheaves_are_rejected() {
        let p = chain_poset(3);
        let mut r = BTreeMap::new();
        r.insert((0, 1), IntegerMatrix::identity(1));
        r.insert((1, 2), IntegerMatrix::identity(1));
        r.insert((0, 2), IntegerMatrix::zeros(1, 1));
        assert_eq!(
            PosetSheaf::new(p.clone(), 5, vec![vec![5]; 3], r.clone()).unwrap_err(),
            SheafError::NotFunctorial(0, 1, 2)
        );
        r.insert((0, 2), IntegerMatrix::identity(1));
        // Z/2 -> Z/4 by 1 is not a homomorphism
        assert_eq!(
            PosetSheaf::new(p, 4, vec![vec![2], vec![4], vec![4]], r).unwrap_err(),
            SheafError::NotAHomomorphism(0, 1)
        );
    }

    #[test]
    fn support_sections_equal_the_dual_nerve_complex() {
        for (_, arr) in catalog::desk_arrangements() {
            let ip = build_poset(&arr);
            for a in ip.strata() {
                let interval = ip.poset().closed_interval(a, ip.top());
                let sub = ip.poset().subposet(&interval);
                let bottom = interval.iter().position(|&x| x == a).unwrap();
                let top = interval.iter().position(|&x| x == ip.top()).unwrap();
                let k = open_point_support_sections(&sub, 7, bottom, top).unwrap();
                let s = stratum_complex(&ip, a).dual();
                assert_eq!(k.degrees(), s.degrees());
                for m in s.degrees() {
                    let relabelled: Vec<Chain> = k
                        .basis(m)
                        .iter()
                        .map(|c| c.iter().map(|&x| interval[x]).collect())
                        .collect();
                    assert_eq!(relabelled, s.basis(m));
                    assert_eq!(k.coboundary(m), s.coboundary(m));
                }
            }
        }
    }

    #[test]
    fn support_edge_cases() {
        let p = diamond();
        let g = resolution_g(&PosetSheaf::constant(&p, 2).unwrap());
        let empty = g.sections_with_support(&[]).unwrap();
        assert!(empty.bases.iter().all(Vec::is_empty));
        let all = g.sections_with_support(&[0, 1, 2, 3]).unwrap();
        assert_eq!(all.bases, g.global_sections().bases);
        assert_eq!(g.sections_with_support(&[3]).unwrap_err(), SheafError::NotClosed);
    }

    #[test]
    fn identity_pullback() {
        let p = chain_poset(3);
        let (s, t, f) = support_pullback_map(&p, (0, 2), &p, (0, 2), &[0, 1, 2]).unwrap();
        assert_eq!(s.basis(1), t.basis(1));
        for m in s.degrees() {
            assert_eq!(f.matrix(m, t.rank(m), s.rank(m)), IntegerMatrix::identity(s.rank(m)));
        }
        assert!(support_pullback_map(&p, (0, 2), &p, (0, 2), &[0, 0, 2]).is_err());
    }

    #[test]
    fn pushforward_of_skyscrapers() {
        let p = diamond();
        let q = chain_poset(3);
        // a -> 0, b, c -> 1, d -> 2
        let alpha = [0, 1, 1, 2];
        assert!(pushforward_mismatches(&p, &q, &alpha, 6, &[6]).unwrap().is_empty());
        assert!(pushforward_mismatches(&p, &q, &alpha, 6, &[2, 3]).unwrap().is_empty());
    }

    #[test]
    fn sections_of_the_constant_sheaf() {
        let p = diamond();
        let f = PosetSheaf::constant(&p, 5).unwrap();
        assert_eq!(f.sections(&[0, 1, 2, 3], None), vec![BigInt::from(5)]);
        assert_eq!(f.sections(&[1, 2, 3], None), vec![BigInt::from(5)]);
        // two incomparable points
        assert_eq!(f.sections(&[1, 2], None).len(), 2);
        assert_eq!(f.sections(&[0, 1, 2, 3], Some(&[0])), Vec::<BigInt>::new());
        assert_eq!(hom_scale(2, 6), 3);
    }
}
