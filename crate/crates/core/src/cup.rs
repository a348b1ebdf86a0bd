//! External products of nerve complexes and the cup product on the
//! per-stratum summands.
//!
//! The cup product of `h_{M1}` and `h_{M2}` is computed at chain level: the
//! external product `E` on duals is transposed to `E*: T -> S1 (x) S2`, where
//! `T` is the nerve complex of `[M1,V] x [M2,V]`; a class `x (x) y` is pulled
//! back along the quasi-isomorphism `E*` and pushed forward by the
//! componentwise intersection.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{build_poset, Arrangement, IntersectionPoset};
use crate::complex::{ChainComplex, ChainMap, ComplexError};
use crate::decomposition::{decompose_poset, DecompositionError, TwistedSummand};
use crate::homology::{acyclic_mod_n, homology_mod_n, HomologyError};
use crate::linear::{mod_floor, IntegerMatrix, IntegerSolver};
use crate::nerve::{complex_smn, induced_chain_map, Chain};
use crate::poset::{FinitePoset, LocallyClosedSet, PosetError};
use crate::sheaf::{open_point_support_sections, support_pullback_map, SheafError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CupError {
    #[error("factor poset has no maximum")]
    NoTop,
    #[error("external product is not a chain map in degree {0}")]
    ExternalProductNotChainMap(i64),
    #[error("intersection pushforward is not a chain map for {0} and {1}")]
    PushforwardNotChainMap(String, String),
    #[error("no preimage of the class of {0} under the external product")]
    NoPreimage(String),
    #[error("support-sections complex disagrees with the nerve complex of {0}")]
    BasisMismatch(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
}

/// The external product for locally closed `M1`, `M2` of two posets with
/// maxima `V`, `Y`.
#[derive(Debug, Clone)]
pub struct ExternalProduct {
    /// `up(M1) x up(M2)` with componentwise order.
    pub product_poset: FinitePoset,
    /// Product index to the pair of factor indices.
    pub pairs: Vec<(usize, usize)>,
    /// `S^{M1,{V}}`, labelled by factor indices.
    pub left: ChainComplex<Chain>,
    /// `S^{M2,{Y}}`.
    pub right: ChainComplex<Chain>,
    pub tensor: ChainComplex<(Chain, Chain)>,
    /// `S^{M1 x M2,{(V,Y)}}`, labelled by product indices.
    pub product: ChainComplex<Chain>,
    /// `E*: product -> tensor`.
    pub dual_map: ChainMap,
}

impl ExternalProduct {
    /// `E: Hom(left) (x) Hom(right) -> Hom(product)`, degreewise the
    /// transpose of [`Self::dual_map`].
    pub fn cochain_map(&self) -> ChainMap {
        self.dual_map.transpose()
    }

    /// Row of `a (x) b` in the degree `|a| + |b|` tensor basis.
    pub fn tensor_row(&self, p: i64, i: usize, q: i64, j: usize) -> usize {
        let d = p + q;
        let offset: usize = self
            .left
            .degrees()
            .take_while(|&k| k < p)
            .map(|k| self.left.rank(k) * self.right.rank(d - k))
            .sum();
        offset + i * self.right.rank(q) + j
    }

    /// Coefficient vector of `x (x) y` in the tensor complex.
    pub fn tensor_vector(&self, p: i64, x: &[BigInt], q: i64, y: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.tensor.rank(p + q)];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    v[self.tensor_row(p, i, q, j)] = a * b;
                }
            }
        }
        v
    }
}

fn subposet_and_top(p: &FinitePoset, m: &LocallyClosedSet) -> Result<(Vec<usize>, usize), CupError> {
    let top = p.maximum().ok_or(CupError::NoTop)?;
    Ok((p.up_closure(&m.members), top))
}

/// Builds `E*` from the staircase formula
/// `[A_0..A_{m-1},V]* (x) [B_0..B_k]* -> sum [(A_0,C_0)..(A_{m-1},C_{m-1}),(V,B_0)..(V,B_k)]*`
/// over `C_0 <= .. <= C_{m-1} <= B_0` with `C_0` in `M2`, and asserts that
/// both `E*` and `E` commute with the differentials.
pub fn external_product_chain_map(
    p1: &FinitePoset,
    m1: &LocallyClosedSet,
    p2: &FinitePoset,
    m2: &LocallyClosedSet,
) -> Result<ExternalProduct, CupError> {
    let (up1, top1) = subposet_and_top(p1, m1)?;
    let (up2, top2) = subposet_and_top(p2, m2)?;
    let left = complex_smn(p1, m1, &p1.locally_closed(&[top1])?);
    let right = complex_smn(p2, m2, &p2.locally_closed(&[top2])?);
    let product_poset = p1.subposet(&up1).product(&p2.subposet(&up2));
    let pairs: Vec<(usize, usize)> = (0..product_poset.len())
        .map(|k| (up1[k / up2.len()], up2[k % up2.len()]))
        .collect();
    let start: Vec<usize> = (0..pairs.len())
        .filter(|&k| m1.contains(pairs[k].0) && m2.contains(pairs[k].1))
        .collect();
    let end = pairs
        .iter()
        .position(|&pr| pr == (top1, top2))
        .expect("both tops lie in the up-closures");
    let product = complex_smn(
        &product_poset,
        &product_poset.locally_closed(&start)?,
        &product_poset.locally_closed(&[end])?,
    );
    let tensor = left.tensor(&right);

    let left_index: Vec<HashMap<&Chain, usize>> = left
        .degrees()
        .map(|k| left.basis(k).iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let right_index: Vec<HashMap<&Chain, usize>> = right
        .degrees()
        .map(|k| right.basis(k).iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let lookup = |tables: &[HashMap<&Chain, usize>], c: &ChainComplex<Chain>, k: i64, chain: &Chain| {
        let slot = k - c.min_degree();
        if slot < 0 {
            return None;
        }
        tables.get(slot as usize).and_then(|t| t.get(chain).copied())
    };

    let mut dual_map = ChainMap::new();
    let ep_stub = ExternalProduct {
        product_poset: product_poset.clone(),
        pairs: pairs.clone(),
        left: left.clone(),
        right: right.clone(),
        tensor: tensor.clone(),
        product: product.clone(),
        dual_map: ChainMap::new(),
    };
    for d in product.degrees() {
        let mut mat = IntegerMatrix::zeros(tensor.rank(d), product.rank(d));
        for (col, sigma) in product.basis(d).iter().enumerate() {
            let coords: Vec<(usize, usize)> = sigma.iter().map(|&k| pairs[k]).collect();
            let k = coords
                .iter()
                .position(|&(a, _)| a == top1)
                .expect("chains end at the top");
            let mut x: Chain = coords[..k].iter().map(|&(a, _)| a).collect();
            x.push(top1);
            let y: Chain = coords[k..].iter().map(|&(_, b)| b).collect();
            if !m2.contains(coords[0].1) {
                continue;
            }
            let (p, q) = (k as i64, d - k as i64);
            if let (Some(i), Some(j)) = (
                lookup(&left_index, &left, p, &x),
                lookup(&right_index, &right, q, &y),
            ) {
                mat.set(ep_stub.tensor_row(p, i, q, j), col, BigInt::from(1));
            }
        }
        dual_map.insert(d, mat);
    }
    dual_map
        .check(&product, &tensor)
        .map_err(|e| match e {
            ComplexError::NotAChainMap(m) => CupError::ExternalProductNotChainMap(m),
            other => other.into(),
        })?;
    dual_map
        .transpose()
        .check_cochain(&left.dual().tensor(&right.dual()), &product.dual())
        .map_err(|e| match e {
            ComplexError::NotAChainMap(m) => CupError::ExternalProductNotChainMap(m),
            other => other.into(),
        })?;
    Ok(ExternalProduct {
        dual_map,
        ..ep_stub
    })
}

/// The componentwise intersection on the product of two intervals of an
/// intersection poset, as a map of indices into the poset.
pub fn intersection_map(ip: &IntersectionPoset, ep: &ExternalProduct) -> Vec<usize> {
    ep.pairs
        .iter()
        .map(|&(a, b)| {
            let s = ip.element(a).intersect(ip.element(b)).expect("same ambient");
            ip.index_of(&s).expect("the poset is closed under intersection")
        })
        .collect()
}

/// Whether every non-degenerate chain of the product complex stays
/// non-degenerate under `phi`.
pub fn preserves_nondegeneracy(ep: &ExternalProduct, phi: &[usize]) -> bool {
    ep.product.degrees().all(|m| {
        ep.product
            .basis(m)
            .iter()
            .all(|c| c.windows(2).all(|w| phi[w[0]] != phi[w[1]]))
    })
}

/// The chain map `S^{{M1 x M2},{V x V}} -> S^{{M1 ∩ M2},{V}}`.
pub fn intersection_pushforward(
    ip: &IntersectionPoset,
    ep: &ExternalProduct,
    target: &ChainComplex<Chain>,
) -> Result<ChainMap, ComplexError> {
    induced_chain_map(&ep.product, target, &intersection_map(ip, ep))
}

/// Why a table entry is zero without computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Vanishing {
    DisjointStrata,
    CodimensionExcess { sum: usize, actual: usize },
}

/// One structure constant block: `x_i ∪ y_j` in the basis of the target
/// summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupEntry {
    pub left: String,
    pub left_degree: usize,
    pub left_index: usize,
    pub right: String,
    pub right_degree: usize,
    pub right_index: usize,
    pub target: Option<String>,
    pub degree: usize,
    pub twist_weight: i64,
    pub coefficients: Vec<u64>,
    pub vanishing: Option<Vanishing>,
}

impl CupEntry {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }
}

/// A homogeneous class in one summand, by coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub stratum: usize,
    pub degree: usize,
    pub coords: Vec<u64>,
}

type Key = (usize, usize, usize, usize, usize, usize);

#[derive(Debug, Clone)]
pub struct CupTable {
    pub modulus: u64,
    pub entries: Vec<CupEntry>,
    /// Stratum names by poset index.
    pub names: Vec<String>,
    /// Orders of the basis of `h^p_M`, keyed by `(M, p)`.
    pub orders: BTreeMap<(usize, usize), Vec<u64>>,
    /// Poset index of `M1 ∩ M2`; `None` when empty.
    meets: BTreeMap<(usize, usize), Option<usize>>,
    lookup: BTreeMap<Key, usize>,
}

impl CupTable {
    /// Entry for `(M1, p1, i, M2, p2, j)`, by poset indices.
    pub fn entry(&self, m1: usize, p1: usize, i: usize, m2: usize, p2: usize, j: usize) -> Option<&CupEntry> {
        self.lookup.get(&(m1, p1, i, m2, p2, j)).map(|&k| &self.entries[k])
    }

    /// Basis elements `(M, p, i)` of all summands.
    pub fn basis(&self) -> Vec<(usize, usize, usize)> {
        self.orders
            .iter()
            .flat_map(|(&(m, p), o)| (0..o.len()).map(move |i| (m, p, i)))
            .collect()
    }

    /// The basis element as a class.
    pub fn basis_class(&self, m: usize, p: usize, i: usize) -> Class {
        let mut coords = vec![0; self.orders[&(m, p)].len()];
        coords[i] = 1;
        Class {
            stratum: m,
            degree: p,
            coords,
        }
    }

    /// Bilinear extension of the table; `None` is the zero class.
    pub fn product(&self, x: &Class, y: &Class) -> Option<Class> {
        let target = self.meets.get(&(x.stratum, y.stratum)).copied().flatten()?;
        let degree = x.degree + y.degree;
        let orders = self.orders.get(&(target, degree))?;
        let mut out = vec![0u64; orders.len()];
        for (i, &a) in x.coords.iter().enumerate() {
            for (j, &b) in y.coords.iter().enumerate() {
                if a == 0 || b == 0 {
                    continue;
                }
                let e = self.entry(x.stratum, x.degree, i, y.stratum, y.degree, j)?;
                if e.vanishing.is_some() {
                    return None;
                }
                for (k, &c) in e.coefficients.iter().enumerate() {
                    let o = orders[k] as u128;
                    out[k] = ((out[k] as u128 + (a as u128 * b as u128 % o) * c as u128) % o) as u64;
                }
            }
        }
        out.iter().any(|&c| c != 0).then_some(Class {
            stratum: target,
            degree,
            coords: out,
        })
    }
}

/// Solves `E* w = x (x) y` up to boundaries and multiples of `n`, with `w` a
/// cycle mod `n`, one right hand side at a time.
struct Pullback {
    solver: IntegerSolver,
    t_rank: usize,
    below_rank: usize,
}

impl Pullback {
    fn new(ep: &ExternalProduct, d: i64, n: u64) -> Self {
        let nb = BigInt::from(n);
        let t = ep.product.rank(d);
        let t_below = ep.product.rank(d - 1);
        let p = ep.tensor.rank(d);
        let p_above = ep.tensor.rank(d + 1);
        let e = ep.dual_map.matrix(d, p, t);
        let top = e
            .hstack(&ep.tensor.boundary(d + 1))
            .hstack(&IntegerMatrix::diagonal(&vec![nb.clone(); p]))
            .hstack(&IntegerMatrix::zeros(p, t_below));
        let bottom = ep
            .product
            .boundary(d)
            .hstack(&IntegerMatrix::zeros(t_below, p_above + p))
            .hstack(&IntegerMatrix::diagonal(&vec![nb; t_below]));
        Pullback {
            solver: IntegerSolver::new(&top.vstack(&bottom)),
            t_rank: t,
            below_rank: t_below,
        }
    }

    fn solve(&self, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut b = rhs.to_vec();
        b.extend(std::iter::repeat_n(BigInt::zero(), self.below_rank));
        self.solver.solve(&b).map(|s| s[..self.t_rank].to_vec())
    }
}

fn representative(s: &TwistedSummand, p: usize, i: usize) -> Vec<BigInt> {
    s.group(p).expect("nonzero degree").summands[i]
        .representative
        .iter()
        .map(|&v| BigInt::from(v))
        .collect()
}

/// Structure constants of one additive pair of strata.
fn pair_products(
    ip: &IntersectionPoset,
    s1: &TwistedSummand,
    s2: &TwistedSummand,
    target: &TwistedSummand,
    n: u64,
) -> Result<BTreeMap<(usize, usize, usize, usize), Vec<u64>>, CupError> {
    let ep = external_product_chain_map(
        ip.poset(),
        &ip.singleton(s1.stratum),
        ip.poset(),
        &ip.singleton(s2.stratum),
    )?;
    let tau = intersection_pushforward(ip, &ep, &target.complex)
        .map_err(|_| CupError::PushforwardNotChainMap(s1.name.clone(), s2.name.clone()))?;
    let mut solvers: HashMap<i64, Pullback> = HashMap::new();
    let mut out = BTreeMap::new();
    for p1 in s1.nonzero_degrees() {
        for p2 in s2.nonzero_degrees() {
            let (h1, h2) = (s1.homological_degree(p1), s2.homological_degree(p2));
            let d = h1 + h2;
            let tgroup = target.group(p1 + p2);
            let pull = solvers.entry(d).or_insert_with(|| Pullback::new(&ep, d, n));
            for i in 0..s1.rank(p1) {
                for j in 0..s2.rank(p2) {
                    let Some(tgroup) = tgroup else {
                        out.insert((p1, i, p2, j), Vec::new());
                        continue;
                    };
                    let rhs = ep.tensor_vector(h1, &representative(s1, p1, i), h2, &representative(s2, p2, j));
                    let w = pull.solve(&rhs).ok_or_else(|| {
                        CupError::NoPreimage(format!("{}[{i}] x {}[{j}]", s1.name, s2.name))
                    })?;
                    let image = tau.matrix(d, target.complex.rank(d), ep.product.rank(d)).mul_vec(&w);
                    out.insert((p1, i, p2, j), tgroup.coordinates(&image)?);
                }
            }
        }
    }
    Ok(out)
}

/// The cup product structure constants of the arrangement.
pub fn cup_table(arr: &Arrangement, n: u64) -> Result<CupTable, CupError> {
    cup_table_poset(&build_poset(arr), n)
}

pub fn cup_table_poset(ip: &IntersectionPoset, n: u64) -> Result<CupTable, CupError> {
    let report = decompose_poset(ip, n)?;
    let by_index: HashMap<usize, &TwistedSummand> = report.summands.iter().map(|s| (s.stratum, s)).collect();
    let names = (0..ip.len()).map(|i| ip.name(i).to_string()).collect();
    let mut orders = BTreeMap::new();
    for s in &report.summands {
        for p in s.nonzero_degrees() {
            orders.insert((s.stratum, p), s.group(p).expect("nonzero").orders());
        }
    }
    let mut entries = Vec::new();
    let mut meets = BTreeMap::new();
    for s1 in &report.summands {
        for s2 in &report.summands {
            let meet = ip
                .element(s1.stratum)
                .intersect(ip.element(s2.stratum))
                .expect("same ambient");
            let meet_index = ip.index_of(&meet).expect("closed under intersection");
            let c = ip.codim(meet_index);
            meets.insert((s1.stratum, s2.stratum), c.map(|_| meet_index));
            let sum = s1.codim + s2.codim;
            let vanishing = match c {
                None => Some(Vanishing::DisjointStrata),
                Some(c) if sum > c => Some(Vanishing::CodimensionExcess { sum, actual: c }),
                Some(_) => None,
            };
            let target = c.map(|_| by_index[&meet_index]);
            let computed = match (&vanishing, target) {
                (None, Some(t)) => pair_products(ip, s1, s2, t, n)?,
                _ => BTreeMap::new(),
            };
            for p1 in s1.nonzero_degrees() {
                for p2 in s2.nonzero_degrees() {
                    for i in 0..s1.rank(p1) {
                        for j in 0..s2.rank(p2) {
                            let width = target.map_or(0, |t| t.rank(p1 + p2));
                            let coefficients = computed
                                .get(&(p1, i, p2, j))
                                .cloned()
                                .unwrap_or_else(|| vec![0; width]);
                            entries.push(CupEntry {
                                left: s1.name.clone(),
                                left_degree: p1,
                                left_index: i,
                                right: s2.name.clone(),
                                right_degree: p2,
                                right_index: j,
                                target: target.map(|t| t.name.clone()),
                                degree: p1 + p2,
                                twist_weight: s1.twist_weight + s2.twist_weight,
                                coefficients,
                                vanishing: vanishing.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    let index_of_name: HashMap<&str, usize> = (0..ip.len()).map(|i| (ip.name(i), i)).collect();
    let lookup = entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            (
                (
                    index_of_name[e.left.as_str()],
                    e.left_degree,
                    e.left_index,
                    index_of_name[e.right.as_str()],
                    e.right_degree,
                    e.right_index,
                ),
                k,
            )
        })
        .collect();
    Ok(CupTable {
        modulus: n,
        entries,
        names,
        orders,
        meets,
        lookup,
    })
}

/// Entries flagged as vanishing that carry a nonzero coefficient, or that
/// have no vanishing flag although the conditions say they must vanish.
pub fn vanishing_violations(ip: &IntersectionPoset, table: &CupTable) -> Vec<String> {
    let mut bad = Vec::new();
    for e in &table.entries {
        let m1 = ip.index_by_name(&e.left).expect("table names come from the poset");
        let m2 = ip.index_by_name(&e.right).expect("table names come from the poset");
        let meet = ip.element(m1).intersect(ip.element(m2)).expect("same ambient");
        let must_vanish = match meet.codim() {
            None => true,
            Some(c) => ip.codim(m1).unwrap() + ip.codim(m2).unwrap() > c,
        };
        if must_vanish && (!e.is_zero() || e.vanishing.is_none()) {
            bad.push(format!("{} x {}", e.left, e.right));
        }
        if m1 == m2 && ip.codim(m1) != Some(0) && !e.is_zero() {
            bad.push(format!("{} squared", e.left));
        }
    }
    bad
}

/// The class of `[V]` acts as a two-sided identity.
pub fn unit_violations(ip: &IntersectionPoset, table: &CupTable) -> Vec<String> {
    let unit = table.basis_class(ip.top(), 0, 0);
    let mut bad = Vec::new();
    for (m, p, i) in table.basis() {
        let x = table.basis_class(m, p, i);
        for (side, prod) in [("left", table.product(&unit, &x)), ("right", table.product(&x, &unit))] {
            if prod.as_ref() != Some(&x) {
                bad.push(format!("{side} unit on {}[{p},{i}]", table.names[m]));
            }
        }
    }
    bad
}

fn same_class(a: &Option<Class>, b: &Option<Class>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// `x ∪ y = (-1)^{p1 p2} y ∪ x` on all basis pairs.
pub fn commutativity_violations(table: &CupTable) -> Vec<String> {
    let mut bad = Vec::new();
    let basis = table.basis();
    for &(m1, p1, i) in &basis {
        for &(m2, p2, j) in &basis {
            let x = table.basis_class(m1, p1, i);
            let y = table.basis_class(m2, p2, j);
            let xy = table.product(&x, &y);
            let yx = table.product(&y, &x).map(|mut c| {
                if (p1 * p2) % 2 == 1 {
                    let orders = &table.orders[&(c.stratum, c.degree)];
                    for (v, &o) in c.coords.iter_mut().zip(orders) {
                        *v = (o - *v % o) % o;
                    }
                }
                c
            });
            if !same_class(&xy, &yx) {
                bad.push(format!(
                    "{}[{p1},{i}] and {}[{p2},{j}]",
                    table.names[m1], table.names[m2]
                ));
            }
        }
    }
    bad
}

/// `(x ∪ y) ∪ z = x ∪ (y ∪ z)` on all basis triples.
pub fn associativity_violations(table: &CupTable) -> Vec<String> {
    let mut bad = Vec::new();
    let basis = table.basis();
    for &(m1, p1, i) in &basis {
        let x = table.basis_class(m1, p1, i);
        for &(m2, p2, j) in &basis {
            let y = table.basis_class(m2, p2, j);
            let xy = table.product(&x, &y);
            for &(m3, p3, k) in &basis {
                let z = table.basis_class(m3, p3, k);
                let left = xy.as_ref().and_then(|c| table.product(c, &z));
                let right = table.product(&y, &z).and_then(|c| table.product(&x, &c));
                if !same_class(&left, &right) {
                    bad.push(format!(
                        "{}[{p1},{i}], {}[{p2},{j}], {}[{p3},{k}]",
                        table.names[m1], table.names[m2], table.names[m3]
                    ));
                }
            }
        }
    }
    bad
}

/// Whether `E: Hom(S^{{A},{V}}) (x) Hom(S^{{B},{V}}) -> Gamma_{(A,B)} G(epsilon_{(V,V)!} Z/n)`
/// is a quasi-isomorphism mod `n`, tested by exactness of its mapping cone.
/// The target is built from the sheaf resolution on `[A,V] x [B,V]`.
pub fn kunneth_with_support_check(ip: &IntersectionPoset, a: usize, b: usize, n: u64) -> Result<bool, CupError> {
    let ep = external_product_chain_map(ip.poset(), &ip.singleton(a), ip.poset(), &ip.singleton(b))?;
    let top = ip.top();
    let start = ep.pairs.iter().position(|&pr| pr == (a, b)).expect("start present");
    let end = ep.pairs.iter().position(|&pr| pr == (top, top)).expect("end present");
    let kt = open_point_support_sections(&ep.product_poset, n, start, end)?;
    for m in ep.product.degrees() {
        if kt.basis(m) != ep.product.basis(m) {
            return Err(CupError::BasisMismatch(format!("{} x {}", ip.name(a), ip.name(b))));
        }
    }
    let source = ep.left.dual().tensor(&ep.right.dual()).as_chain_complex();
    let target = kt.as_chain_complex();
    let cone = source.mapping_cone(&target, &ep.cochain_map().reindexed())?;
    Ok(acyclic_mod_n(&cone, n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgmReport {
    pub pairs_checked: usize,
    pub values_compared: usize,
    pub mismatches: Vec<String>,
}

impl DgmReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn closed_interval_poset(p: &FinitePoset, a: usize, top: usize) -> (FinitePoset, Vec<usize>) {
    let interval = p.closed_interval(a, top);
    (p.subposet(&interval), interval)
}

fn dot_mod(a: &[BigInt], b: &[BigInt], n: u64) -> u64 {
    let s: BigInt = a.iter().zip(b).map(|(x, y)| x * y).sum();
    mod_floor(&s, n)
}

/// Second route to the structure constants of every transverse pair
/// `(A, B)`: pull a cohomology class `phi` of `C = A ∩ B` back along the
/// intersection map on support sections, invert the external product on
/// cochains to get `psi`, and compare `<psi, x (x) y>` with
/// `<phi, x ∪ y>` read off the cup table.
pub fn dgm_formula_check(ip: &IntersectionPoset, table: &CupTable) -> Result<DgmReport, CupError> {
    let n = table.modulus;
    let nb = BigInt::from(n);
    let report = decompose_poset(ip, n)?;
    let by_index: HashMap<usize, &TwistedSummand> = report.summands.iter().map(|s| (s.stratum, s)).collect();
    let mut out = DgmReport {
        pairs_checked: 0,
        values_compared: 0,
        mismatches: Vec::new(),
    };
    let top = ip.top();
    for a in ip.strata() {
        for b in ip.strata() {
            let meet = ip.element(a).intersect(ip.element(b)).expect("same ambient");
            let c = ip.index_of(&meet).expect("closed under intersection");
            let Some(cd) = ip.codim(c) else { continue };
            if ip.codim(a).unwrap() + ip.codim(b).unwrap() != cd {
                continue;
            }
            out.pairs_checked += 1;
            let (sa, sb, sc) = (by_index[&a], by_index[&b], by_index[&c]);

            // support sections on [C,V] and on [A,V] x [B,V], built from sheaves
            let (qc, ic) = closed_interval_poset(ip.poset(), c, top);
            let kc = open_point_support_sections(&qc, n, 0, qc.len() - 1)?;
            let ep = external_product_chain_map(ip.poset(), &ip.singleton(a), ip.poset(), &ip.singleton(b))?;
            let prod = &ep.product_poset;
            let start = ep.pairs.iter().position(|&pr| pr == (a, b)).expect("start present");
            let end = ep.pairs.iter().position(|&pr| pr == (top, top)).expect("end present");
            let kt = open_point_support_sections(prod, n, start, end)?;
            for m in ep.product.degrees() {
                if kt.basis(m) != ep.product.basis(m) {
                    return Err(CupError::BasisMismatch(format!("{} x {}", sa.name, sb.name)));
                }
            }
            for m in sc.complex.degrees() {
                let relabelled: Vec<Chain> = kc
                    .basis(m)
                    .iter()
                    .map(|ch| ch.iter().map(|&x| ic[x]).collect())
                    .collect();
                if relabelled != sc.complex.basis(m) {
                    return Err(CupError::BasisMismatch(sc.name.clone()));
                }
            }

            // alpha on product indices, into [C,V] indices
            let alpha: Vec<usize> = ep
                .pairs
                .iter()
                .map(|&(x, y)| {
                    let s = ip.element(x).intersect(ip.element(y)).expect("same ambient");
                    let k = ip.index_of(&s).expect("closed");
                    ic.iter().position(|&e| e == k).expect("meet lies above C")
                })
                .collect();
            let (_, _, alpha_star) = support_pullback_map(prod, (start, end), &qc, (0, qc.len() - 1), &alpha)?;
            let kc_cohomology = homology_mod_n(&kc.as_chain_complex(), n)?;
            let e_cochain = ep.cochain_map();
            let kp = ep.left.dual().tensor(&ep.right.dual());

            for p1 in sa.nonzero_degrees() {
                for p2 in sb.nonzero_degrees() {
                    let (h1, h2) = (sa.homological_degree(p1), sb.homological_degree(p2));
                    let d = h1 + h2;
                    let Some(phis) = kc_cohomology.group(-d) else { continue };
                    let (t, t_below, p, p_above) =
                        (kt.rank(d), kt.rank(d - 1), kp.rank(d), kp.rank(d + 1));
                    // E psi + delta s + n t1 = N phi,  delta psi + n t2 = 0
                    let e = e_cochain.matrix(d, t, p);
                    let upper = e
                        .hstack(&kt.coboundary(d - 1))
                        .hstack(&IntegerMatrix::diagonal(&vec![nb.clone(); t]))
                        .hstack(&IntegerMatrix::zeros(t, p_above));
                    let lower = kp
                        .coboundary(d)
                        .hstack(&IntegerMatrix::zeros(p_above, t_below + t))
                        .hstack(&IntegerMatrix::diagonal(&vec![nb.clone(); p_above]));
                    let solver = IntegerSolver::new(&upper.vstack(&lower));
                    let n_map = alpha_star.matrix(d, sc.complex.rank(d), t).transpose();
                    let cup_group = sc.group(p1 + p2);
                    for phi in &phis.summands {
                        let phi_vec: Vec<BigInt> = phi.representative.iter().map(|&v| BigInt::from(v)).collect();
                        let mut rhs = n_map.mul_vec(&phi_vec);
                        rhs.extend(std::iter::repeat_n(BigInt::zero(), p_above));
                        let Some(sol) = solver.solve(&rhs) else {
                            out.mismatches.push(format!("no cochain preimage for {}", sc.name));
                            continue;
                        };
                        let psi = &sol[..p];
                        for i in 0..sa.rank(p1) {
                            for j in 0..sb.rank(p2) {
                                out.values_compared += 1;
                                let xy = ep.tensor_vector(h1, &representative(sa, p1, i), h2, &representative(sb, p2, j));
                                let route_two = dot_mod(psi, &xy, n);
                                let entry = table
                                    .entry(a, p1, i, b, p2, j)
                                    .expect("table covers every basis pair");
                                let route_one = match cup_group {
                                    None => 0,
                                    Some(g) => {
                                        let mut acc = BigInt::zero();
                                        for (l, &coef) in entry.coefficients.iter().enumerate() {
                                            let rep: Vec<BigInt> =
                                                g.summands[l].representative.iter().map(|&v| BigInt::from(v)).collect();
                                            acc += BigInt::from(coef) * BigInt::from(dot_mod(&phi_vec, &rep, n));
                                        }
                                        mod_floor(&acc, n)
                                    }
                                };
                                if route_one != route_two {
                                    out.mismatches.push(format!(
                                        "{}[{p1},{i}] x {}[{p2},{j}] against a class of {}: {route_one} vs {route_two}",
                                        sa.name, sb.name, sc.name
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
