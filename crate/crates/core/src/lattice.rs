//! Finite diagonal subgroups of algebraic tori, stored through their lattice
//! of logarithms.
//!
//! A finite subgroup `G` of `(C^x)^N` is identified with the lattice
//! `Λ_G = { v in Q^N : exp(2πi v) in G }`, which always satisfies
//! `Z^N ⊆ Λ_G ⊆ Q^N`. Group elements are rational vectors modulo `Z^N`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, IntVector, RatVector};

/// Default guard for element enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Full-rank lattice in `Q^dim` with its canonical (Hermite) basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    dim: usize,
    basis: Vec<RatVector>,
}

impl Lattice {
    pub fn from_generators(dim: usize, generators: &[RatVector]) -> Result<Self> {
        let basis = linalg::hnf_basis(generators, dim)?;
        Ok(Lattice { dim, basis })
    }

    pub fn standard(dim: usize) -> Self {
        Lattice {
            dim,
            basis: (0..dim).map(|i| RatVector::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical basis vectors (the columns of the basis matrix).
    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    /// Basis matrix as rows of rationals, columns being the basis vectors.
    fn basis_matrix_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.dim)
            .map(|i| self.basis.iter().map(|b| b[i].clone()).collect())
            .collect()
    }

    /// The basis matrix is triangular, so its determinant is the product of
    /// the pivots.
    pub fn determinant(&self) -> BigRational {
        (0..self.dim).map(|i| self.basis[i][i].clone()).product()
    }

    /// Coordinates of `v` in the canonical basis.
    pub fn coordinates(&self, v: &RatVector) -> Result<RatVector> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in a lattice of dimension {}",
                v.len(),
                self.dim
            )));
        }
        // lower-triangular forward substitution
        let mut x: Vec<BigRational> = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = v[i].clone();
            for (j, xj) in x.iter().enumerate() {
                acc -= &self.basis[j][i] * xj;
            }
            x.push(acc / &self.basis[i][i]);
        }
        Ok(RatVector::new(x))
    }

    pub fn contains(&self, v: &RatVector) -> Result<bool> {
        Ok(self.coordinates(v)?.is_integral())
    }

    pub fn contains_standard_lattice(&self) -> bool {
        (0..self.dim).all(|i| {
            self.contains(&RatVector::unit(self.dim, i))
                .unwrap_or(false)
        })
    }

    /// Whether every basis vector is integral.
    pub fn is_integral(&self) -> bool {
        self.basis.iter().all(RatVector::is_integral)
    }

    /// Integer basis matrix (columns = basis vectors), for integral lattices.
    pub fn integer_basis_matrix(&self) -> Option<IntMatrix> {
        let cols: Option<Vec<IntVector>> = self.basis.iter().map(RatVector::to_integers).collect();
        cols.map(|c| IntMatrix::from_columns(&c).expect("basis is non-empty"))
    }

    /// `{u : u·v in Z for all v in self}`.
    pub fn dual(&self) -> Result<Lattice> {
        let inv = linalg::rational_inverse(&self.basis_matrix_rows())?;
        // columns of the inverse transpose are the rows of the inverse
        let gens: Vec<RatVector> = inv.into_iter().map(RatVector::new).collect();
        Lattice::from_generators(self.dim, &gens)
    }

    /// Image under a coordinate permutation: coordinate `i` of the result is
    /// coordinate `perm[i]` of the input.
    pub fn permute(&self, perm: &[usize]) -> Result<Lattice> {
        if perm.len() != self.dim {
            return Err(Error::Dimension("permutation length".into()));
        }
        let gens: Vec<RatVector> = self
            .basis
            .iter()
            .map(|b| perm.iter().map(|&p| b[p].clone()).collect())
            .collect();
        Lattice::from_generators(self.dim, &gens)
    }
}

/// Canonical basis of the dual lattice of the lattice generated by `basis`.
pub fn dual_lattice(basis: &[RatVector], ambient_rank: usize) -> Result<Vec<RatVector>> {
    let lattice = Lattice::from_generators(ambient_rank, basis)?;
    Ok(lattice.dual()?.basis)
}

/// Finite subgroup of `(C^x)^N`, stored as its canonical lattice `Λ_G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalGroup {
    lattice: Lattice,
    order: BigInt,
}

impl DiagonalGroup {
    pub fn trivial(ambient_rank: usize) -> Self {
        DiagonalGroup {
            lattice: Lattice::standard(ambient_rank),
            order: BigInt::one(),
        }
    }

    /// The group generated by the given elements (rational vectors read
    /// modulo `Z^N`).
    pub fn from_generators(ambient_rank: usize, gens: &[RatVector]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::Dimension(format!(
                "generator {g} has {} entries, expected {ambient_rank}",
                g.len()
            )));
        }
        let mut all: Vec<RatVector> = (0..ambient_rank)
            .map(|i| RatVector::unit(ambient_rank, i))
            .collect();
        all.extend(gens.iter().cloned());
        Self::from_lattice(Lattice::from_generators(ambient_rank, &all)?)
    }

    /// Wraps a lattice that must contain `Z^N`.
    pub fn from_lattice(lattice: Lattice) -> Result<Self> {
        if !lattice.contains_standard_lattice() {
            return Err(Error::InvariantViolation(
                "lattice of logarithms must contain the integer lattice".into(),
            ));
        }
        let det = lattice.determinant();
        let inv = det.recip();
        if !inv.is_integer() {
            return Err(Error::InvariantViolation(format!(
                "lattice determinant {det} is not the reciprocal of an integer"
            )));
        }
        let order = num_traits::abs(inv.to_integer());
        Ok(DiagonalGroup { lattice, order })
    }

    /// The group of all diagonal symmetries of the monomials given as the
    /// columns of `p`: `{v : v·p_j in Z for all j}`.
    pub fn maximal_for(p: &IntMatrix) -> Result<Self> {
        let cols: Vec<RatVector> = p
            .column_vecs()
            .iter()
            .map(|c| RatVector::from_integers(c))
            .collect();
        let span = Lattice::from_generators(p.rows(), &cols).map_err(|e| match e {
            Error::RankDeficient { .. } => Error::Precondition(
                "exponent matrix does not have full row rank, so its symmetry group is infinite"
                    .into(),
            ),
            other => other,
        })?;
        Self::from_lattice(span.dual()?)
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.dim()
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn lambda_basis(&self) -> &[RatVector] {
        self.lattice.basis()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn contains(&self, element: &RatVector) -> Result<bool> {
        self.lattice.contains(element)
    }

    /// `{u in Z^N : u·v in Z for all v in Λ_G}`, the characters that are
    /// invariant under the group.
    pub fn invariant_characters(&self) -> Result<Lattice> {
        self.lattice.dual()
    }

    /// Whether `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &DiagonalGroup) -> Result<bool> {
        check_rank(self, other)?;
        for b in self.lambda_basis() {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        Self::from_lattice(self.lattice.permute(perm)?)
    }

    /// Relation matrix of `Z^N` inside `Λ_G`: column `i` holds the
    /// coordinates of `e_i` in the canonical basis.
    fn relation_matrix(&self) -> IntMatrix {
        let n = self.ambient_rank();
        let cols: Vec<IntVector> = (0..n)
            .map(|i| {
                self.lattice
                    .coordinates(&RatVector::unit(n, i))
                    .ok()
                    .and_then(|c| c.to_integers())
                    .expect("Z^N is contained in the lattice")
            })
            .collect();
        IntMatrix::from_columns(&cols).expect("ambient rank is positive")
    }
}

fn check_rank(a: &DiagonalGroup, b: &DiagonalGroup) -> Result<()> {
    if a.ambient_rank() != b.ambient_rank() {
        return Err(Error::Dimension(format!(
            "groups live in tori of rank {} and {}",
            a.ambient_rank(),
            b.ambient_rank()
        )));
    }
    Ok(())
}

pub fn group_from_generators(ambient_rank: usize, gens: &[RatVector]) -> Result<DiagonalGroup> {
    DiagonalGroup::from_generators(ambient_rank, gens)
}

/// Equality of subgroups; canonical bases make this a structural compare.
pub fn group_equal(g1: &DiagonalGroup, g2: &DiagonalGroup) -> Result<bool> {
    check_rank(g1, g2)?;
    Ok(g1.lattice == g2.lattice)
}

/// Invariant factors `d_1 | d_2 | ...`, each at least 2, of `Λ_G / Z^N`.
pub fn elementary_divisors(g: &DiagonalGroup) -> Vec<BigInt> {
    linalg::snf(&g.relation_matrix()).nontrivial_divisors()
}

/// Every element of the group as its representative in `[0,1)^N`, sorted.
pub fn enumerate_elements(g: &DiagonalGroup, cap: u64) -> Result<Vec<RatVector>> {
    if g.order().to_u64().is_none_or(|o| o > cap) {
        return Err(Error::CapExceeded {
            required: g.order().to_string(),
            cap,
        });
    }
    let gens: Vec<RatVector> = g
        .lambda_basis()
        .iter()
        .map(RatVector::mod_one)
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let zero = RatVector::zeros(g.ambient_rank());
    let mut seen: BTreeSet<RatVector> = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for gen in &gens {
            let y = x.add(gen).mod_one();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    if BigInt::from(seen.len()) != *g.order() {
        return Err(Error::InvariantViolation(format!(
            "closure has {} elements but the group order is {}",
            seen.len(),
            g.order()
        )));
    }
    Ok(seen.into_iter().collect())
}

/// Kernel of a homomorphism of tori: a torus of some rank times a finite
/// group. The finite group's lattice is recorded when the kernel is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGroup {
    pub ambient_rank: usize,
    pub torus_rank: usize,
    pub finite_divisors: Vec<BigInt>,
    pub group: Option<DiagonalGroup>,
}

impl KernelGroup {
    pub fn is_finite(&self) -> bool {
        self.torus_rank == 0
    }

    /// Order of the component group.
    pub fn finite_order(&self) -> BigInt {
        self.finite_divisors.iter().product()
    }

    /// The kernel as a finite diagonal group; fails for positive-dimensional
    /// kernels.
    pub fn as_diagonal_group(&self) -> Result<&DiagonalGroup> {
        self.group.as_ref().ok_or_else(|| {
            Error::Precondition(format!(
                "dual group is positive-dimensional (torus rank {}); theorem checks need a finite group",
                self.torus_rank
            ))
        })
    }

    /// Kernel of `F(B) : (C^x)^{cols} -> (C^x)^{rows}`, `exp(2πi v) ↦
    /// exp(2πi Bτ v)`, i.e. `{v : bt·v in Z^rows}`, read off the Smith form.
    pub fn of_matrix(bt: &IntMatrix) -> Result<Self> {
        let s = linalg::snf(bt);
        let ambient_rank = bt.cols();
        let diag = s.diagonal();
        let rank = s.rank();
        let torus_rank = ambient_rank - rank;
        let finite_divisors = s.nontrivial_divisors();
        let group = if torus_rank == 0 {
            // v = V w with d_i w_i in Z
            let gens: Vec<RatVector> = (0..ambient_rank)
                .map(|i| {
                    let col = RatVector::from_integers(&s.v.column(i));
                    col.scale(&BigRational::new(BigInt::one(), diag[i].clone()))
                })
                .collect();
            Some(DiagonalGroup::from_lattice(Lattice::from_generators(
                ambient_rank,
                &gens,
            )?)?)
        } else {
            None
        };
        Ok(KernelGroup {
            ambient_rank,
            torus_rank,
            finite_divisors,
            group,
        })
    }
}
