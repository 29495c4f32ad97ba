//! Bundled test corpus: invertible polynomials built from Fermat, chain and
//! loop atoms in two to four variables, paired with every invariant
//! subgroup of bounded order. Also seeded generators of random models.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::duality::is_calabi_yau;
use crate::error::Result;
use crate::lattice::{enumerate_elements, DiagonalGroup};
use crate::lg::{parse_polynomial, ExponentMatrix, QuotientLGModel};
use crate::linalg::{IntVector, RatVector};

/// Largest group order in the bundled corpus.
pub const MAX_CORPUS_ORDER: u64 = 81;

/// `(name, variables, polynomial)`; every exponent matrix here is square and
/// invertible.
pub const POLYNOMIALS: &[(&str, &[&str], &str)] = &[
    ("fermat-2", &["x", "y"], "x^3 + y^3"),
    ("chain-2", &["x", "y"], "x^2*y + y^3"),
    ("loop-2", &["x", "y"], "x^2*y + y^2*x"),
    ("fermat-4-2", &["x", "y"], "x^4 + y^2"),
    ("fermat-3", &["x", "y", "z"], "x^3 + y^3 + z^3"),
    ("loop-3", &["x", "y", "z"], "x^2*y + y^2*z + z^2*x"),
    ("chain-3", &["x", "y", "z"], "x^2*y + y^2*z + z^3"),
    ("fermat-loop-3", &["x", "y", "z"], "x^3 + y^2*z + z^2*y"),
    ("fermat-chain-3", &["x", "y", "z"], "x^3 + y^2*z + z^3"),
    ("fermat-4", &["x", "y", "z", "w"], "x^3 + y^3 + z^3 + w^3"),
    ("loop-4", &["x", "y", "z", "w"], "x^2*y + y^2*z + z^2*w + w^2*x"),
    ("loop-loop-4", &["x", "y", "z", "w"], "x^2*y + y^2*x + z^2*w + w^2*z"),
    ("fermat-loop-4", &["x", "y", "z", "w"], "x^3 + y^3 + z^2*w + w^2*z"),
];

#[derive(Clone, Debug)]
pub struct CorpusModel {
    pub name: String,
    pub model: QuotientLGModel,
}

pub fn corpus_polynomial(entry: &(&str, &[&str], &str)) -> Result<ExponentMatrix> {
    let vars: Vec<String> = entry.1.iter().map(|s| s.to_string()).collect();
    parse_polynomial(entry.2, &vars)
}

/// Every subgroup of `g` with order at most `max_order`, sorted.
///
/// Subgroups are reached by adjoining one element at a time; each
/// intermediate group is a subgroup of the target, so the order bound never
/// prunes a path to a valid target.
pub fn subgroups(g: &DiagonalGroup, max_order: u64, cap: u64) -> Result<Vec<DiagonalGroup>> {
    let elements = enumerate_elements(g, cap)?;
    let n = g.ambient_rank();
    let bound = BigInt::from(max_order);
    let trivial = DiagonalGroup::trivial(n);
    let mut seen: BTreeSet<DiagonalGroup> = BTreeSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    while let Some(h) = queue.pop_front() {
        for e in &elements {
            if h.contains(e)? {
                continue;
            }
            let mut gens = h.lambda_basis().to_vec();
            gens.push(e.clone());
            let bigger = DiagonalGroup::from_generators(n, &gens)?;
            if *bigger.order() <= bound && !seen.contains(&bigger) {
                seen.insert(bigger.clone());
                queue.push_back(bigger);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The invariant subgroups of a polynomial with full-rank exponent matrix.
pub fn invariant_subgroups(p: &ExponentMatrix, max_order: u64, cap: u64) -> Result<Vec<DiagonalGroup>> {
    subgroups(&DiagonalGroup::maximal_for(p.matrix())?, max_order, cap)
}

/// Every corpus polynomial paired with every invariant subgroup of order at
/// most `max_order`.
pub fn square_models(max_order: u64, cap: u64) -> Result<Vec<CorpusModel>> {
    let mut out = Vec::new();
    for entry in POLYNOMIALS {
        let p = corpus_polynomial(entry)?;
        for g in invariant_subgroups(&p, max_order, cap)? {
            let label = group_label(&g);
            out.push(CorpusModel {
                name: format!("{}/{}", entry.0, label),
                model: QuotientLGModel::new(p.clone(), g)?,
            });
        }
    }
    Ok(out)
}

fn group_label(g: &DiagonalGroup) -> String {
    let gens: Vec<String> = g
        .lambda_basis()
        .iter()
        .map(RatVector::mod_one)
        .filter(|v| !v.is_integral())
        .map(|v| v.to_string())
        .collect();
    if gens.is_empty() {
        "trivial".into()
    } else {
        gens.join("")
    }
}

/// Pairs of Calabi-Yau corpus models in the same variables with equal
/// groups, `a` strictly before `b`.
pub fn calabi_yau_pairs(models: &[CorpusModel]) -> Vec<(usize, usize)> {
    let cy: Vec<usize> = (0..models.len())
        .filter(|&i| is_calabi_yau(models[i].model.exponents().matrix()).is_calabi_yau())
        .collect();
    let mut pairs = Vec::new();
    for (x, &i) in cy.iter().enumerate() {
        for &j in &cy[x + 1..] {
            let (a, b) = (&models[i].model, &models[j].model);
            if a.exponents().variables() == b.exponents().variables()
                && a.exponents() != b.exponents()
                && a.group() == b.group()
            {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Random finite group in rank `n` with order at most `max_order`, generated
/// by one or two elements with denominators 2 or 3.
pub fn random_group<R: Rng>(rng: &mut R, n: usize, max_order: u64) -> Result<DiagonalGroup> {
    loop {
        let count = rng.gen_range(1..=2);
        let gens: Vec<RatVector> = (0..count)
            .map(|_| {
                let d: i64 = *[2, 3].choose(rng).expect("non-empty");
                (0..n)
                    .map(|_| BigRational::new(rng.gen_range(0..d).into(), d.into()))
                    .collect()
            })
            .collect();
        let g = DiagonalGroup::from_generators(n, &gens)?;
        if g.order().to_u64().is_some_and(|o| o <= max_order) {
            return Ok(g);
        }
    }
}

/// Nonzero exponent vectors of total degree at most `max_degree` that are
/// invariant under `g`.
pub fn invariant_monomials(g: &DiagonalGroup, max_degree: u32) -> Vec<IntVector> {
    let n = g.ambient_rank();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let total: u32 = exps.iter().sum();
        if total > 0 && total <= max_degree {
            let v: IntVector = exps.iter().map(|&e| BigInt::from(e)).collect();
            if g.lambda_basis().iter().all(|b| b.dot_int(&v).is_integer()) {
                out.push(v);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            exps[i] += 1;
            if exps[i] <= max_degree {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Random `g`-invariant model: a random non-empty set of at most
/// `max_monomials` distinct monomials from the invariant pool.
pub fn random_invariant_model<R: Rng>(
    rng: &mut R,
    variables: &[String],
    g: &DiagonalGroup,
    pool: &[IntVector],
    max_monomials: usize,
) -> Result<QuotientLGModel> {
    let count = rng.gen_range(1..=max_monomials.min(pool.len()).max(1));
    let chosen: Vec<IntVector> = pool.choose_multiple(rng, count).cloned().collect();
    let p = ExponentMatrix::from_monomials(variables.to_vec(), chosen)?;
    QuotientLGModel::new(p, g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_ENUMERATION_CAP;
    use crate::linalg::det;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_polynomials_are_invertible() {
        for entry in POLYNOMIALS {
            let p = corpus_polynomial(entry).unwrap();
            assert!(p.is_square(), "{}", entry.0);
            assert_ne!(det(p.matrix()).unwrap(), BigInt::from(0), "{}", entry.0);
        }
    }

    #[test]
    fn subgroup_counts() {
        // (Z/3)^2 has 1 + 4 + 1 subgroups, (Z/3)^3 has 1 + 13 + 13 + 1
        let p = corpus_polynomial(&POLYNOMIALS[0]).unwrap();
        assert_eq!(invariant_subgroups(&p, 81, DEFAULT_ENUMERATION_CAP).unwrap().len(), 6);
        let p = corpus_polynomial(&POLYNOMIALS[4]).unwrap();
        assert_eq!(invariant_subgroups(&p, 81, DEFAULT_ENUMERATION_CAP).unwrap().len(), 28);
        // the loop polynomial's symmetry group is cyclic of order 9
        let p = corpus_polynomial(&POLYNOMIALS[5]).unwrap();
        assert_eq!(invariant_subgroups(&p, 81, DEFAULT_ENUMERATION_CAP).unwrap().len(), 3);
    }

    #[test]
    fn random_models_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        for _ in 0..10 {
            let g = random_group(&mut rng, 3, 27).unwrap();
            assert!(*g.order() <= BigInt::from(27));
            let pool = invariant_monomials(&g, 6);
            assert!(!pool.is_empty());
            let m = random_invariant_model(&mut rng, &vars, &g, &pool, 5).unwrap();
            assert!(m.exponents().monomial_count() <= 5);
        }
    }
}
