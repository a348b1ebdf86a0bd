//! Integral and mod-`n` homology with explicit cycle representatives.
//!
//! Integral homology comes from two Smith normal forms per degree: one for the
//! outgoing differential (to find a lattice basis of the cycles) and one for
//! the incoming differential written in that basis. Mod-`n` homology is then
//! assembled from the universal coefficient sequence; the generators it
//! produces are genuine cycles of `C (x) Z/n`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError};
use crate::linear::{mod_floor, IntegerMatrix, IntegerSolver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("vector is not a cycle modulo {modulus} in degree {degree}")]
    NotACycle { degree: i64, modulus: u64 },
    #[error("vector has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `H_m(C; Z) = Z^free_rank + sum Z/torsion_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub free_rank: usize,
    /// Elementary divisors greater than one, ascending in divisibility order.
    pub torsion: Vec<BigInt>,
    /// Cycles generating the free part.
    pub free_representatives: Vec<Vec<BigInt>>,
    /// Cycles `z_i` of order `torsion[i]`.
    pub torsion_representatives: Vec<Vec<BigInt>>,
    /// Chains `y_i` one degree up with `d y_i = torsion[i] * z_i`.
    pub torsion_witnesses: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHomology {
    pub groups: BTreeMap<i64, HomologyGroup>,
}

impl GradedHomology {
    pub fn group(&self, m: i64) -> Option<&HomologyGroup> {
        self.groups.get(&m)
    }

    pub fn free_rank(&self, m: i64) -> usize {
        self.group(m).map_or(0, |g| g.free_rank)
    }

    pub fn torsion(&self, m: i64) -> &[BigInt] {
        self.group(m).map_or(&[], |g| &g.torsion)
    }

    /// Whether every group is zero.
    pub fn is_zero(&self) -> bool {
        self.groups
            .values()
            .all(|g| g.free_rank == 0 && g.torsion.is_empty())
    }
}

/// Where a mod-`n` generator comes from in the universal coefficient sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandOrigin {
    /// A free integral class reduced mod `n`.
    Free,
    /// An integral torsion class of the given order reduced mod `n`.
    Torsion,
    /// Lifted from `Tor(H_{m-1}, Z/n)`.
    Tor,
}

/// One cyclic summand `Z/order` of a mod-`n` homology group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSummand {
    pub order: u64,
    pub origin: SummandOrigin,
    /// A cycle of `C (x) Z/n` generating the summand, entries in `[0, n)`.
    pub representative: Vec<u64>,
}

/// `H_m(C (x) Z/n)` as a direct sum of cyclic `Z/n`-modules.
#[derive(Debug, Clone)]
pub struct ModNGroup {
    pub degree: i64,
    pub modulus: u64,
    pub summands: Vec<CyclicSummand>,
    chain_rank: usize,
    solver: IntegerSolver,
}

impl ModNGroup {
    /// Number of cyclic summands. This is the dimension when `n` is prime,
    /// and the integral free rank when no integral torsion (here or one degree
    /// down) shares a factor with `n`.
    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Orders of the cyclic summands.
    pub fn orders(&self) -> Vec<u64> {
        self.summands.iter().map(|s| s.order).collect()
    }

    /// Whether the group is free over `Z/n`.
    pub fn is_free(&self) -> bool {
        self.summands.iter().all(|s| s.order == self.modulus)
    }

    /// Coordinates of the class of a mod-`n` cycle in the summand basis,
    /// each reduced modulo the order of its summand.
    pub fn coordinates(&self, cycle: &[BigInt]) -> Result<Vec<u64>, HomologyError> {
        if cycle.len() != self.chain_rank {
            return Err(HomologyError::WrongLength {
                expected: self.chain_rank,
                found: cycle.len(),
            });
        }
        let sol = self.solver.solve(cycle).ok_or(HomologyError::NotACycle {
            degree: self.degree,
            modulus: self.modulus,
        })?;
        Ok(self
            .summands
            .iter()
            .enumerate()
            .map(|(j, s)| mod_floor(&sol[j], s.order))
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct ModNHomology {
    pub modulus: u64,
    pub groups: BTreeMap<i64, ModNGroup>,
}

impl ModNHomology {
    pub fn group(&self, m: i64) -> Option<&ModNGroup> {
        self.groups.get(&m)
    }

    pub fn rank(&self, m: i64) -> usize {
        self.group(m).map_or(0, ModNGroup::rank)
    }

    pub fn orders(&self, m: i64) -> Vec<u64> {
        self.group(m).map_or_else(Vec::new, ModNGroup::orders)
    }

    pub fn is_zero(&self) -> bool {
        self.groups.values().all(|g| g.summands.is_empty())
    }
}

/// Flips the sign of `v` (and of `w` alongside) so the first nonzero entry of
/// `v` is positive.
fn normalize_sign(v: &mut [BigInt], w: Option<&mut Vec<BigInt>>) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
        if let Some(w) = w {
            w.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
    }
}

/// Integral homology of a complex, with representatives.
pub fn homology_z<L: Clone + Debug>(c: &ChainComplex<L>) -> Result<GradedHomology, HomologyError> {
    let mut groups = BTreeMap::new();
    for m in c.degrees() {
        groups.insert(m, homology_z_degree(c, m));
    }
    Ok(GradedHomology { groups })
}

fn homology_z_degree<L: Clone + Debug>(c: &ChainComplex<L>, m: i64) -> HomologyGroup {
    let n = c.rank(m);
    let out = c.boundary(m).smith_normal_form();
    let r = out.rank;
    let k = n - r;
    let cycles: Vec<Vec<BigInt>> = (r..n).map(|j| out.w.column(j)).collect();
    let cycle_basis = IntegerMatrix::from_columns(n, &cycles);

    // incoming boundaries written in the cycle basis
    let d_in = c.boundary(m + 1);
    let coords = out.w_inv.mul(&d_in);
    let mut x = IntegerMatrix::zeros(k, d_in.cols());
    for i in 0..k {
        for j in 0..d_in.cols() {
            x.set(i, j, coords.get(r + i, j).clone());
        }
    }
    let inc = x.smith_normal_form();

    let mut free_representatives = Vec::new();
    let mut torsion = Vec::new();
    let mut torsion_representatives = Vec::new();
    let mut torsion_witnesses = Vec::new();
    for i in 0..k {
        let g = inc.u_inv.column(i);
        let mut z = cycle_basis.mul_vec(&g);
        if i < inc.rank {
            let d = inc.d.get(i, i).clone();
            if d.is_one() {
                continue;
            }
            let mut y = inc.w.column(i);
            normalize_sign(&mut z, Some(&mut y));
            torsion.push(d);
            torsion_representatives.push(z);
            torsion_witnesses.push(y);
        } else {
            normalize_sign(&mut z, None);
            free_representatives.push(z);
        }
    }
    HomologyGroup {
        degree: m,
        free_rank: free_representatives.len(),
        torsion,
        free_representatives,
        torsion_representatives,
        torsion_witnesses,
    }
}

/// Homology of `C (x) Z/n` via universal coefficients.
pub fn homology_mod_n<L: Clone + Debug>(
    c: &ChainComplex<L>,
    n: u64,
) -> Result<ModNHomology, HomologyError> {
    if n < 2 {
        return Err(HomologyError::BadModulus(n));
    }
    let hz = homology_z(c)?;
    let nb = BigInt::from(n);
    let mut groups = BTreeMap::new();
    for m in c.degrees() {
        let mut summands = Vec::new();
        let g = hz.group(m).expect("every degree computed");
        for z in &g.free_representatives {
            summands.push(CyclicSummand {
                order: n,
                origin: SummandOrigin::Free,
                representative: reduce(z, n),
            });
        }
        for (d, z) in g.torsion.iter().zip(&g.torsion_representatives) {
            let order = d.gcd(&nb).to_u64().expect("divides n");
            if order > 1 {
                summands.push(CyclicSummand {
                    order,
                    origin: SummandOrigin::Torsion,
                    representative: reduce(z, n),
                });
            }
        }
        if let Some(below) = hz.group(m - 1) {
            for (d, y) in below.torsion.iter().zip(&below.torsion_witnesses) {
                let order = d.gcd(&nb).to_u64().expect("divides n");
                if order > 1 {
                    let scale = BigInt::from(n / order);
                    let lifted: Vec<BigInt> = y.iter().map(|v| v * &scale).collect();
                    summands.push(CyclicSummand {
                        order,
                        origin: SummandOrigin::Tor,
                        representative: reduce(&lifted, n),
                    });
                }
            }
        }

        // [ representatives | d_{m+1} | n I ] for coordinate solves
        let rank = c.rank(m);
        let reps: Vec<Vec<BigInt>> = summands
            .iter()
            .map(|s| s.representative.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let system = IntegerMatrix::from_columns(rank, &reps)
            .hstack(&c.boundary(m + 1))
            .hstack(&IntegerMatrix::diagonal(&vec![nb.clone(); rank]));
        groups.insert(
            m,
            ModNGroup {
                degree: m,
                modulus: n,
                summands,
                chain_rank: rank,
                solver: IntegerSolver::new(&system),
            },
        );
    }
    Ok(ModNHomology { modulus: n, groups })
}

fn reduce(v: &[BigInt], n: u64) -> Vec<u64> {
    v.iter().map(|x| mod_floor(x, n)).collect()
}

/// Rank of an integer matrix over `F_p` by Gaussian elimination mod `p`.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| mod_floor(m.get(r, c), p)).collect())
        .collect();
    let inv = |x: u64| -> u64 {
        // Fermat inverse
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][col]);
        for v in a[rank].iter_mut() {
            *v = *v * s % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..m.cols() {
                    a[r][c] = (a[r][c] + p * p - f * a[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `C (x) Z/n` is acyclic for a complex of free abelian groups.
///
/// `Z/n` splits into `Z/p^k` over the primes dividing `n`, and a bounded
/// free complex is acyclic mod `p^k` iff it is acyclic mod `p`; over `F_p`
/// that is `rank C_m = rank d_m + rank d_{m+1}` in every degree.
pub fn acyclic_mod_n<L: Clone + Debug>(c: &ChainComplex<L>, n: u64) -> bool {
    prime_factors(n).into_iter().all(|p| {
        let ranks: BTreeMap<i64, usize> = (c.min_degree()..=c.max_degree() + 1)
            .map(|m| (m, rank_mod_p(&c.boundary(m), p)))
            .collect();
        c.degrees().all(|m| c.rank(m) == ranks[&m] + ranks[&(m + 1)])
    })
}

/// A chain complex of finitely generated abelian groups
/// `C_m = Z^{k_m} / diag(a_m) Z^{k_m}`, the differentials given by integer
/// matrices compatible with the relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedComplex {
    pub base_degree: i64,
    /// Annihilators of the cyclic generators in each degree (`0` for `Z`).
    pub annihilators: Vec<Vec<BigInt>>,
    /// `differentials[k]` maps degree `base_degree + k` to the degree below.
    pub differentials: Vec<IntegerMatrix>,
}

impl PresentedComplex {
    fn rank(&self, m: i64) -> usize {
        let k = m - self.base_degree;
        if k < 0 || k as usize >= self.annihilators.len() {
            0
        } else {
            self.annihilators[k as usize].len()
        }
    }

    fn relations(&self, m: i64) -> IntegerMatrix {
        let k = m - self.base_degree;
        if k < 0 || k as usize >= self.annihilators.len() {
            return IntegerMatrix::zeros(0, 0);
        }
        IntegerMatrix::diagonal(&self.annihilators[k as usize])
    }

    fn differential(&self, m: i64) -> IntegerMatrix {
        let k = m - self.base_degree;
        if k < 0 || k as usize >= self.differentials.len() {
            IntegerMatrix::zeros(self.rank(m - 1), self.rank(m))
        } else {
            self.differentials[k as usize].clone()
        }
    }

    /// Invariant factors of `H_m` (entries `> 1`, or `0` for free summands).
    pub fn homology(&self, m: i64) -> Vec<BigInt> {
        let k = self.rank(m);
        if k == 0 {
            return Vec::new();
        }
        // cycles: v with d v in the relation lattice below
        let d = self.differential(m);
        let below = self.relations(m - 1);
        let kernel_input = if below.rows() == 0 {
            d.clone()
        } else {
            d.hstack(&below)
        };
        let gens: Vec<Vec<BigInt>> = if kernel_input.rows() == 0 {
            (0..k)
                .map(|i| {
                    let mut e = vec![BigInt::zero(); k];
                    e[i] = BigInt::one();
                    e
                })
                .collect()
        } else {
            kernel_input
                .integer_kernel()
                .into_iter()
                .map(|v| v[..k].to_vec())
                .collect()
        };
        let gen_matrix = IntegerMatrix::from_columns(k, &gens);
        let snf = gen_matrix.smith_normal_form();
        // lattice basis of the cycles: columns of U^{-1} D
        let basis: Vec<Vec<BigInt>> = (0..snf.rank)
            .map(|i| {
                let d = snf.d.get(i, i);
                snf.u_inv.column(i).into_iter().map(|x| x * d).collect()
            })
            .collect();
        let basis_matrix = IntegerMatrix::from_columns(k, &basis);
        let solver = IntegerSolver::new(&basis_matrix);

        // boundaries plus relations, written in the cycle basis
        let up = self.differential(m + 1);
        let mut rel_cols: Vec<Vec<BigInt>> = (0..up.cols()).map(|j| up.column(j)).collect();
        let own = self.relations(m);
        rel_cols.extend((0..own.cols()).map(|j| own.column(j)));
        let coords: Vec<Vec<BigInt>> = rel_cols
            .iter()
            .map(|v| solver.solve(v).expect("boundaries are cycles"))
            .collect();
        let rel = IntegerMatrix::from_columns(basis.len(), &coords);
        let inv = rel.smith_diagonal();
        let mut out: Vec<BigInt> = inv.into_iter().filter(|d| !d.is_one()).collect();
        out.extend(std::iter::repeat_n(BigInt::zero(), basis.len() - rel.rank()));
        out
    }

    /// Whether every homology group vanishes.
    pub fn is_acyclic(&self) -> bool {
        let lo = self.base_degree;
        let hi = self.base_degree + self.annihilators.len() as i64;
        (lo..hi).all(|m| self.homology(m).is_empty())
    }

    /// A complex of free `Z/n`-modules from a free integral complex.
    pub fn mod_n<L: Clone + Debug>(c: &ChainComplex<L>, n: u64) -> PresentedComplex {
        PresentedComplex {
            base_degree: c.min_degree(),
            annihilators: c
                .degrees()
                .map(|m| vec![BigInt::from(n); c.rank(m)])
                .collect(),
            differentials: c.degrees().map(|m| c.boundary(m)).collect(),
        }
    }
}
