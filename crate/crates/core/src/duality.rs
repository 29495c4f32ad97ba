//! The dual quotient LG model, Krawitz's dual group, weight vectors and the
//! Calabi-Yau condition.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DiagonalGroup, KernelGroup, Lattice};
use crate::lg::{
    default_names, factorize, is_invariant, CharacterSum, ExponentMatrix, Factorization,
    QuotientLGModel, TorusTag,
};
use crate::linalg::{self, IntMatrix, IntVector};

/// `(Pτ, G^T)` together with the factorization `Pτ = B * Aτ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualModel {
    pub ptau: IntMatrix,
    pub gt: KernelGroup,
    /// `B = (Bτ)τ`, `(m+1) x (n+1)`.
    pub b: IntMatrix,
    /// `Aτ`, `(n+1) x (n+1)`.
    pub a_tau: IntMatrix,
    /// The source factorization the dual was read from.
    pub source: Factorization,
}

impl DualModel {
    /// `W^T_{G^T}` on the common torus `F(Mτ)`: the columns of `Aτ`, i.e.
    /// the rows of `A`.
    pub fn restricted_superpotential(&self) -> CharacterSum {
        CharacterSum::new(self.a_tau.column_vecs(), TorusTag::DualQuotient)
            .expect("uniform columns")
    }

    /// The dual as a quotient LG model in variables `y0..ym`, for finite
    /// `G^T`. The second component maps each canonical monomial of the dual
    /// back to the source variable it came from.
    pub fn to_model(&self) -> Result<(QuotientLGModel, Vec<usize>)> {
        let g = self.gt.as_diagonal_group()?.clone();
        let (p, perm) = ExponentMatrix::with_permutation(
            default_names("y", self.ptau.rows()),
            self.ptau.column_vecs(),
        )?;
        Ok((QuotientLGModel::new(p, g)?, perm))
    }
}

/// Builds the dual model: `Pτ` and `G^T = ker F(B) = {v : Bτ v in Z^{n+1}}`.
pub fn dualize(model: &QuotientLGModel) -> Result<DualModel> {
    let f = factorize(model)?;
    let gt = KernelGroup::of_matrix(&f.btau)?;
    let ptau = model.exponents().matrix().transpose();
    let b = f.btau.transpose();
    let a_tau = f.a.transpose();
    if b.mul(&a_tau)? != ptau {
        return Err(Error::InvariantViolation("B * Aτ differs from Pτ".into()));
    }
    Ok(DualModel {
        ptau,
        gt,
        b,
        a_tau,
        source: f,
    })
}

fn require_square_invertible(p: &ExponentMatrix) -> Result<BigInt> {
    if !p.is_square() {
        return Err(Error::Precondition(format!(
            "exponent matrix must be square, found {}x{}",
            p.variable_count(),
            p.monomial_count()
        )));
    }
    let d = linalg::det(p.matrix())?;
    if d.is_zero() {
        return Err(Error::Precondition("exponent matrix is singular".into()));
    }
    Ok(d)
}

/// Krawitz's dual group, in closed form `Λ_{G†} = P⁻¹ M` where `M` is the
/// lattice dual to `Λ_G`.
pub fn krawitz_dual(p: &ExponentMatrix, g: &DiagonalGroup) -> Result<DiagonalGroup> {
    require_square_invertible(p)?;
    if !is_invariant(p, g)? {
        return Err(Error::Precondition(
            "superpotential is not invariant under the group".into(),
        ));
    }
    let m = g.invariant_characters()?;
    let mut gens = Vec::with_capacity(m.dim());
    for r in m.basis() {
        let w = linalg::solve_exact(p.matrix(), r)?
            .ok_or_else(|| Error::InvariantViolation("P is not invertible over Q".into()))?;
        gens.push(w);
    }
    DiagonalGroup::from_lattice(Lattice::from_generators(p.monomial_count(), &gens)?)
}

/// Integral functionals that take the same value on every monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightLattice {
    ambient_rank: usize,
    basis: Vec<IntVector>,
}

impl WeightLattice {
    /// Canonicalizes the lattice spanned by `generators`.
    pub fn from_generators(ambient_rank: usize, generators: &[IntVector]) -> Result<Self> {
        let basis = linalg::hnf_lattice(generators, ambient_rank)?;
        Ok(WeightLattice {
            ambient_rank,
            basis,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }
}

pub fn weight_lattice(monomials: &CharacterSum) -> Result<WeightLattice> {
    let vectors = monomials.vectors();
    let Some(first) = vectors.first() else {
        return Err(Error::Precondition(
            "weight lattice of an empty superpotential".into(),
        ));
    };
    let n = first.len();
    let diffs: Vec<IntVector> = vectors[1..]
        .iter()
        .map(|c| c.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    let basis = if diffs.is_empty() {
        IntMatrix::identity(n).row_vecs()
    } else {
        let d = IntMatrix::from_rows(diffs)?;
        linalg::integer_kernel(&d)
    };
    WeightLattice::from_generators(n, &basis)
}

/// Primitive generator of a rank-one weight lattice, signed so that it pairs
/// positively with the monomials when all pairings share a sign, and
/// otherwise with its first nonzero entry positive.
pub fn normalize_weight_generator(w: &WeightLattice, monomials: &CharacterSum) -> Result<IntVector> {
    if w.rank() != 1 {
        return Err(Error::Precondition(format!(
            "weight lattice has rank {}, expected 1",
            w.rank()
        )));
    }
    let g = &w.basis()[0];
    let content = g.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut q: IntVector = g.iter().map(|x| x / &content).collect();
    let pairings: Vec<BigInt> = monomials
        .vectors()
        .iter()
        .map(|c| c.iter().zip(&q).map(|(a, b)| a * b).sum())
        .collect();
    let flip = if !pairings.is_empty() && pairings.iter().all(Signed::is_negative) {
        true
    } else if !pairings.is_empty() && pairings.iter().all(Signed::is_positive) {
        false
    } else {
        q.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative)
    };
    if flip {
        q = q.into_iter().map(|x| -x).collect();
    }
    Ok(q)
}

/// Outcome of the Calabi-Yau test on an exponent matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyReport {
    pub square: bool,
    pub invertible: bool,
    pub sign_uniform: bool,
    pub sum_matches_det: bool,
    /// `(1,...,1) * ag(P)`; empty when `P` is not square.
    pub weights_row: IntVector,
    pub det: Option<BigInt>,
}

impl CyReport {
    pub fn is_calabi_yau(&self) -> bool {
        self.square && self.invertible && self.sign_uniform && self.sum_matches_det
    }

    pub fn weights_sum(&self) -> BigInt {
        self.weights_row.iter().sum()
    }

    /// First failing clause, phrased for diagnostics.
    pub fn failure(&self) -> Option<String> {
        if !self.square {
            return Some("not Calabi-Yau: exponent matrix is not square".into());
        }
        let det = self.det.clone().unwrap_or_default();
        if !self.invertible {
            return Some("not Calabi-Yau: exponent matrix is singular".into());
        }
        if !self.sign_uniform {
            return Some(format!(
                "not Calabi-Yau: weights row {:?} is not of uniform strict sign",
                self.weights_row.iter().map(ToString::to_string).collect::<Vec<_>>()
            ));
        }
        if !self.sum_matches_det {
            // reordering columns negates both sides; report them with det > 0
            let (sum, det) = if det.is_negative() {
                (-self.weights_sum(), -det)
            } else {
                (self.weights_sum(), det)
            };
            return Some(format!("not Calabi-Yau: sum {sum} ≠ det {det}"));
        }
        None
    }
}

pub fn is_calabi_yau(p: &IntMatrix) -> CyReport {
    if !p.is_square() {
        return CyReport {
            square: false,
            invertible: false,
            sign_uniform: false,
            sum_matches_det: false,
            weights_row: Vec::new(),
            det: None,
        };
    }
    let det = linalg::det(p).expect("square");
    let adj = linalg::adjugate(p).expect("square");
    let n = p.rows();
    let weights_row: IntVector = (0..n)
        .map(|j| (0..n).map(|i| adj[(i, j)].clone()).sum())
        .collect();
    let sign_uniform = weights_row.iter().all(Signed::is_positive)
        || weights_row.iter().all(Signed::is_negative);
    let sum: BigInt = weights_row.iter().sum();
    CyReport {
        square: true,
        invertible: !det.is_zero(),
        sign_uniform,
        sum_matches_det: sum == det,
        weights_row,
        det: Some(det),
    }
}
