//! Certificates for the duality statements, and the brute-force and
//! floating-point oracles they are cross-checked against.
//!
//! Every certificate verdict is decided by exact checks. The floating-point
//! evaluations at random torus points are recorded separately as a sanity
//! layer and never change a verdict.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::duality::{
    dualize, is_calabi_yau, krawitz_dual, normalize_weight_generator, weight_lattice, DualModel,
    WeightLattice,
};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{
    enumerate_elements, group_equal, DiagonalGroup, KernelGroup, Lattice,
};
use crate::lg::{factorize, CharacterSum, ExponentMatrix, Factorization, QuotientLGModel, TorusTag};
use crate::linalg::{self, IntMatrix, RatVector};

pub const NUMERIC_TOLERANCE: f64 = 1e-9;
pub const NUMERIC_POINTS: usize = 20;

const CONVENTIONS: [&str; 3] = [
    "basis of M: column Hermite form, lower triangular with positive pivots and each row reduced modulo its pivot",
    "group coordinates on the dual side follow the canonical (graded-lex descending) monomial order",
    "weight generator sign: positive pairing with every monomial when the pairings share a sign, else first nonzero entry positive",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    EqualSups,
    Main,
    CyCorollary,
    KrawitzEquivalence,
    Involution,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::EqualSups => "equal-sups",
            TheoremId::Main => "main",
            TheoremId::CyCorollary => "cy-corollary",
            TheoremId::KrawitzEquivalence => "krawitz-equivalence",
            TheoremId::Involution => "involution",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "equal-sups" => TheoremId::EqualSups,
            "main" => TheoremId::Main,
            "cy-corollary" => TheoremId::CyCorollary,
            "krawitz-equivalence" => TheoremId::KrawitzEquivalence,
            "involution" => TheoremId::Involution,
            other => return Err(Error::Precondition(format!("unknown theorem `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Machine-readable outcome of one theorem check.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub inputs: Vec<Value>,
    /// Exact checks; the verdict is their conjunction.
    pub checks: BTreeMap<String, bool>,
    pub witnesses: BTreeMap<String, Value>,
    /// Floating-point sanity results. Informational only.
    pub sanity: BTreeMap<String, bool>,
    pub diagnostics: Vec<String>,
    pub seed: Option<u64>,
}

impl Certificate {
    fn new(theorem: TheoremId, inputs: Vec<Value>, seed: Option<u64>) -> Self {
        Certificate {
            theorem,
            inputs,
            checks: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            sanity: BTreeMap::new(),
            diagnostics: Vec::new(),
            seed,
        }
    }

    fn check(&mut self, name: &str, ok: bool, diagnostic: impl FnOnce() -> String) -> bool {
        self.checks.insert(name.to_string(), ok);
        if !ok {
            self.diagnostics.push(diagnostic());
        }
        ok
    }

    fn witness(&mut self, name: &str, value: Value) {
        self.witnesses.insert(name.to_string(), value);
    }

    pub fn verdict(&self) -> Verdict {
        if !self.checks.is_empty() && self.checks.values().all(|&ok| ok) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem.as_str(),
            "inputs": self.inputs,
            "checks": self.checks,
            "witnesses": self.witnesses,
            "sanity": self.sanity,
            "diagnostics": self.diagnostics,
            "seed": self.seed,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "conventions": CONVENTIONS,
        })
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly random point of the compact torus `(S^1)^n`.
pub fn random_torus_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
        .collect()
}

fn monomial_value(exps: &[BigInt], point: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (e, x) in exps.iter().zip(point) {
        let e = e
            .to_i32()
            .ok_or_else(|| Error::Domain(format!("exponent {e} too large to evaluate")))?;
        acc *= x.powi(e);
    }
    Ok(acc)
}

/// Floating-point value of a character sum at a point with nonzero
/// coordinates.
pub fn oracle_numeric_superpotential(sum: &CharacterSum, point: &[Complex64]) -> Result<Complex64> {
    if let Some(n) = sum.ambient_rank() {
        if n != point.len() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates for characters of length {n}",
                point.len()
            )));
        }
    }
    if point.iter().any(|x| x.norm() == 0.0) {
        return Err(Error::Domain("point has a zero coordinate".into()));
    }
    sum.vectors()
        .iter()
        .map(|c| monomial_value(c, point))
        .sum()
}

fn phase(v: &RatVector) -> Vec<Complex64> {
    v.iter()
        .map(|x| {
            let t = x.to_f64().unwrap_or(0.0);
            Complex64::from_polar(1.0, TAU * t)
        })
        .collect()
}

/// Numerical invariance test: `|W(g·x) - W(x)| < tol` for every lattice
/// generator `g` at `points` random torus points.
pub fn numeric_invariance(p: &ExponentMatrix, g: &DiagonalGroup, seed: u64, points: usize) -> Result<bool> {
    let w = CharacterSum::new(p.monomials(), TorusTag::Source)?;
    let mut rng = rng_for(seed, 1);
    let n = p.variable_count();
    for gen in g.lambda_basis() {
        let ph = phase(gen);
        for _ in 0..points {
            let x = random_torus_point(&mut rng, n);
            let gx: Vec<Complex64> = x.iter().zip(&ph).map(|(a, b)| a * b).collect();
            let diff = oracle_numeric_superpotential(&w, &gx)? - oracle_numeric_superpotential(&w, &x)?;
            if diff.norm() >= NUMERIC_TOLERANCE {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest deviation between the dual polynomial `W^T(y)` and the restricted
/// dual superpotential evaluated at `F(B)(y)`, over random `y`.
pub fn numeric_dual_factorization(p: &ExponentMatrix, f: &Factorization, seed: u64, points: usize) -> Result<f64> {
    let dual_poly = CharacterSum::new(p.matrix().row_vecs(), TorusTag::Dual)?;
    let restricted = CharacterSum::new(f.a.row_vecs(), TorusTag::DualQuotient)?;
    let mut rng = rng_for(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let y = random_torus_point(&mut rng, p.monomial_count());
        let t: Vec<Complex64> = (0..f.btau.rows())
            .map(|k| monomial_value(f.btau.row(k), &y))
            .collect::<Result<_>>()?;
        let lhs = oracle_numeric_superpotential(&dual_poly, &y)?;
        let rhs = oracle_numeric_superpotential(&restricted, &t)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Largest deviation between two character sums on the same torus at random
/// points.
pub fn numeric_sum_agreement(a: &CharacterSum, b: &CharacterSum, seed: u64, points: usize) -> Result<f64> {
    let n = a
        .ambient_rank()
        .ok_or_else(|| Error::Precondition("empty character sum".into()))?;
    let mut rng = rng_for(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let t = random_torus_point(&mut rng, n);
        let d = oracle_numeric_superpotential(a, &t)? - oracle_numeric_superpotential(b, &t)?;
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

fn check_cap(count: &BigInt, cap: u64) -> Result<()> {
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::CapExceeded {
            required: count.to_string(),
            cap,
        });
    }
    Ok(())
}

fn small_entries(m: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    m.row_vecs()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.to_i64()
                        .map(i128::from)
                        .ok_or_else(|| Error::Domain(format!("entry {x} too large for enumeration")))
                })
                .collect()
        })
        .collect()
}

/// Calls `f` on every vector in `[0, d)^n`.
fn for_each_residue(n: usize, d: i128, mut f: impl FnMut(&[i128])) {
    let mut k = vec![0i128; n];
    loop {
        f(&k);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            k[i] += 1;
            if k[i] < d {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

fn residue_vector(k: &[i128], d: i128) -> RatVector {
    k.iter()
        .map(|&x| BigRational::new(x.into(), d.into()))
        .collect()
}

/// Every `v in (1/d) Z^cols / Z^cols` with `bt·v` integral, sorted.
pub fn oracle_kernel_bruteforce(bt: &IntMatrix, exponent_bound: u64, cap: u64) -> Result<Vec<RatVector>> {
    if exponent_bound == 0 {
        return Err(Error::Precondition("exponent bound must be positive".into()));
    }
    let cols = bt.cols();
    check_cap(&BigInt::from(exponent_bound).pow(cols as u32), cap)?;
    let rows = small_entries(bt)?;
    let d = i128::from(exponent_bound);
    let mut out = Vec::new();
    for_each_residue(cols, d, |k| {
        let ok = rows
            .iter()
            .all(|row| row.iter().zip(k).map(|(a, b)| a * b).sum::<i128>() % d == 0);
        if ok {
            out.push(residue_vector(k, d));
        }
    });
    out.sort();
    Ok(out)
}

/// Exponent of `Z^N / P Z^N`: the largest Smith invariant of `P`.
pub fn smith_exponent(p: &IntMatrix) -> BigInt {
    linalg::snf(p)
        .diagonal()
        .into_iter()
        .max()
        .unwrap_or_else(BigInt::one)
}

/// Krawitz's condition by enumeration: every `w = P⁻¹ r` with `r` integral,
/// taken from `(1/e) Z^N / Z^N` for `e` the Smith exponent of `P`, such that
/// `r·λ` is an integer for every element `λ` of the group. Sorted.
pub fn oracle_krawitz_bruteforce(p: &ExponentMatrix, g: &DiagonalGroup, cap: u64) -> Result<Vec<RatVector>> {
    let pm = p.matrix();
    if !pm.is_square() || linalg::det(pm)?.is_zero() {
        return Err(Error::Precondition("exponent matrix must be square and invertible".into()));
    }
    let n = pm.rows();
    let e = smith_exponent(pm);
    check_cap(&e.pow(n as u32), cap)?;
    let elements = enumerate_elements(g, cap)?;
    let den = elements
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
    let den_i = den
        .to_i64()
        .map(i128::from)
        .ok_or_else(|| Error::Domain("group exponent too large".into()))?;
    let scaled: Vec<Vec<i128>> = elements
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    (x * BigRational::from_integer(den.clone()))
                        .to_integer()
                        .to_i64()
                        .map(i128::from)
                        .expect("bounded by the common denominator")
                })
                .collect()
        })
        .collect();
    let rows = small_entries(pm)?;
    let e = e.to_i64().map(i128::from).expect("checked against the cap");
    let mut out = Vec::new();
    for_each_residue(n, e, |k| {
        // r = P k / e must be integral
        let r_num: Vec<i128> = rows
            .iter()
            .map(|row| row.iter().zip(k).map(|(a, b)| a * b).sum())
            .collect();
        if r_num.iter().any(|x| x % e != 0) {
            return;
        }
        let r: Vec<i128> = r_num.iter().map(|x| x / e).collect();
        let ok = scaled
            .iter()
            .all(|l| r.iter().zip(l).map(|(a, b)| a * b).sum::<i128>() % den_i == 0);
        if ok {
            out.push(residue_vector(k, e));
        }
    });
    out.sort();
    Ok(out)
}

/// `G^T` read off the row lattice of `Bτ`: `{v : Bτ v in Z}` is the dual of
/// the lattice spanned by the rows.
pub fn kernel_via_row_lattice(bt: &IntMatrix) -> Result<DiagonalGroup> {
    let rows: Vec<RatVector> = bt
        .row_vecs()
        .iter()
        .map(|r| RatVector::from_integers(r))
        .collect();
    let span = Lattice::from_generators(bt.cols(), &rows)?;
    DiagonalGroup::from_lattice(span.dual()?)
}

fn same_rank(a: &QuotientLGModel, b: &QuotientLGModel) -> Result<()> {
    if a.exponents().variable_count() != b.exponents().variable_count() {
        return Err(Error::Dimension(format!(
            "models have {} and {} variables",
            a.exponents().variable_count(),
            b.exponents().variable_count()
        )));
    }
    Ok(())
}

/// Shared part of the two-model certificates: same group, same `A`, equal
/// restricted dual superpotentials.
fn equal_sups_into(
    cert: &mut Certificate,
    a: &QuotientLGModel,
    b: &QuotientLGModel,
    seed: u64,
) -> Result<Option<(Factorization, Factorization)>> {
    let same_group = group_equal(a.group(), b.group())?;
    cert.witness("group", json::group(a.group()));
    if !cert.check("same_group", same_group, || {
        "hypothesis violated: groups differ".to_string()
    }) {
        cert.witness("group_b", json::group(b.group()));
        return Ok(None);
    }
    let fa = factorize(a)?;
    let fb = factorize(b)?;
    cert.check("same_a", fa.a == fb.a, || {
        "canonical A matrices differ".to_string()
    });
    let wa = CharacterSum::new(fa.a.row_vecs(), TorusTag::DualQuotient)?;
    let wb = CharacterSum::new(fb.a.row_vecs(), TorusTag::DualQuotient)?;
    cert.check("restricted_superpotentials_equal", wa == wb, || {
        "restricted dual superpotentials differ".to_string()
    });
    cert.witness("a", json::matrix(&fa.a));
    cert.witness("m_basis", json::lattice(&fa.m_basis));
    cert.witness("restricted_superpotential", json::character_sum(&wa));
    cert.witness("torus_dimension", Value::from(fa.a.rows()));

    let dev_a = numeric_dual_factorization(a.exponents(), &fa, seed, NUMERIC_POINTS)?;
    let dev_b = numeric_dual_factorization(b.exponents(), &fb, seed, NUMERIC_POINTS)?;
    let dev_ab = numeric_sum_agreement(&wa, &wb, seed, NUMERIC_POINTS)?;
    cert.sanity.insert("dual_factorization_a".into(), dev_a < NUMERIC_TOLERANCE);
    cert.sanity.insert("dual_factorization_b".into(), dev_b < NUMERIC_TOLERANCE);
    cert.sanity.insert("restricted_superpotentials_agree".into(), dev_ab < NUMERIC_TOLERANCE);
    Ok(Some((fa, fb)))
}

pub fn verify_equal_sups(a: &QuotientLGModel, b: &QuotientLGModel, seed: u64) -> Result<Certificate> {
    same_rank(a, b)?;
    let mut cert = Certificate::new(TheoremId::EqualSups, vec![json::model(a), json::model(b)], Some(seed));
    equal_sups_into(&mut cert, a, b, seed)?;
    Ok(cert)
}

fn main_into(
    cert: &mut Certificate,
    a: &QuotientLGModel,
    b: &QuotientLGModel,
    seed: u64,
) -> Result<Option<(WeightLattice, CharacterSum)>> {
    let Some((fa, fb)) = equal_sups_into(cert, a, b, seed)? else {
        return Ok(None);
    };
    let wa = CharacterSum::new(fa.a.row_vecs(), TorusTag::DualQuotient)?;
    let wb = CharacterSum::new(fb.a.row_vecs(), TorusTag::DualQuotient)?;
    let la = weight_lattice(&wa)?;
    let lb = weight_lattice(&wb)?;
    cert.check("weight_lattices_equal", la == lb, || {
        "dual weight lattices differ".to_string()
    });
    let generator = if la.rank() == 1 {
        Some(normalize_weight_generator(&la, &wa)?)
    } else {
        None
    };
    cert.witness("weight_lattice", json::weight_lattice(&la, generator.as_deref()));
    cert.witness(
        "dual_monomial_counts",
        json!([a.exponents().monomial_count(), b.exponents().monomial_count()]),
    );
    Ok(Some((la, wa)))
}

/// Same group implies same `A`, hence equal restricted dual superpotentials
/// and identical dual weight lattices.
pub fn verify_main(a: &QuotientLGModel, b: &QuotientLGModel, seed: u64) -> Result<Certificate> {
    same_rank(a, b)?;
    let mut cert = Certificate::new(TheoremId::Main, vec![json::model(a), json::model(b)], Some(seed));
    main_into(&mut cert, a, b, seed)?;
    Ok(cert)
}

/// The main check for Calabi-Yau inputs, plus cyclicity of the weight
/// lattice.
pub fn verify_cy_corollary(a: &QuotientLGModel, b: &QuotientLGModel, seed: u64) -> Result<Certificate> {
    same_rank(a, b)?;
    let mut cert = Certificate::new(TheoremId::CyCorollary, vec![json::model(a), json::model(b)], Some(seed));
    let ra = is_calabi_yau(a.exponents().matrix());
    let rb = is_calabi_yau(b.exponents().matrix());
    cert.witness("cy_a", json::cy_report(&ra));
    cert.witness("cy_b", json::cy_report(&rb));
    let ok_a = cert.check("model_a_calabi_yau", ra.is_calabi_yau(), || {
        format!("model A {}", ra.failure().unwrap_or_default())
    });
    let ok_b = cert.check("model_b_calabi_yau", rb.is_calabi_yau(), || {
        format!("model B {}", rb.failure().unwrap_or_default())
    });
    if !(ok_a && ok_b) {
        return Ok(cert);
    }
    if let Some((lattice, monomials)) = main_into(&mut cert, a, b, seed)? {
        let cyclic = cert.check("weight_lattice_cyclic", lattice.rank() == 1, || {
            format!("weight lattice has rank {}, expected 1", lattice.rank())
        });
        if cyclic {
            let q0 = normalize_weight_generator(&lattice, &monomials)?;
            cert.witness("q0", json::int_vec(&q0));
        }
    }
    Ok(cert)
}

fn require_square_invertible(model: &QuotientLGModel) -> Result<BigInt> {
    let p = model.exponents().matrix();
    if !p.is_square() {
        return Err(Error::Precondition(format!(
            "exponent matrix must be square, found {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    let d = linalg::det(p)?;
    if d.is_zero() {
        return Err(Error::Precondition("exponent matrix is singular".into()));
    }
    Ok(d)
}

/// `G^T` three ways: `ker F(B)`, the closed-form Krawitz dual, and the
/// Krawitz condition by enumeration.
pub fn verify_krawitz_equivalence(model: &QuotientLGModel, cap: u64) -> Result<Certificate> {
    require_square_invertible(model)?;
    let mut cert = Certificate::new(TheoremId::KrawitzEquivalence, vec![json::model(model)], None);
    let dual = dualize(model)?;
    let gt = dual.gt.as_diagonal_group()?.clone();
    let closed = krawitz_dual(model.exponents(), model.group())?;
    let found = oracle_krawitz_bruteforce(model.exponents(), model.group(), cap)?;
    let brute = DiagonalGroup::from_generators(gt.ambient_rank(), &found)?;

    cert.check("bruteforce_set_is_group", BigInt::from(found.len()) == *brute.order(), || {
        format!(
            "enumeration found {} elements but they generate a group of order {}",
            found.len(),
            brute.order()
        )
    });
    cert.check("closed_form_equals_gt", group_equal(&closed, &gt)?, || {
        "closed-form Krawitz dual differs from ker F(B)".to_string()
    });
    cert.check("bruteforce_equals_gt", group_equal(&brute, &gt)?, || {
        "enumerated Krawitz dual differs from ker F(B)".to_string()
    });
    cert.witness("gt", json::group(&gt));
    cert.witness("krawitz_closed_form", json::group(&closed));
    cert.witness("krawitz_bruteforce", json::group(&brute));
    cert.witness("candidates_per_axis", json::int(&smith_exponent(model.exponents().matrix())));
    Ok(cert)
}

/// Maps a double dual back onto the source variables and compares it with
/// the source model.
fn double_dual(model: &QuotientLGModel) -> Result<(DualModel, QuotientLGModel)> {
    let first = dualize(model)?;
    let (dual_model, origin) = first.to_model()?;
    let second = dualize(&dual_model)?;
    let (back, _) = second.to_model()?;
    // variable k of `back` is source variable origin[k]
    let mut inverse = vec![0usize; origin.len()];
    for (k, &i) in origin.iter().enumerate() {
        inverse[i] = k;
    }
    let p = back.exponents().permute_variables(&inverse)?;
    let p = ExponentMatrix::from_matrix(model.exponents().variables().to_vec(), p.matrix())?;
    let g = back.group().permute(&inverse)?;
    Ok((first, QuotientLGModel::new(p, g)?))
}

/// Dualizing twice recovers the model, and `|G| |G^T| = |det P|`.
pub fn verify_involution(model: &QuotientLGModel) -> Result<Certificate> {
    let det = require_square_invertible(model)?;
    let mut cert = Certificate::new(TheoremId::Involution, vec![json::model(model)], None);
    let (first, back) = double_dual(model)?;
    let gt = first.gt.as_diagonal_group()?;
    cert.check(
        "double_dual_exponents",
        back.exponents().matrix() == model.exponents().matrix(),
        || "double dual exponent matrix differs".to_string(),
    );
    cert.check("double_dual_group", group_equal(back.group(), model.group())?, || {
        "double dual group differs".to_string()
    });
    let product = model.group().order() * gt.order();
    cert.check("order_product", product == det.abs(), || {
        format!("|G| |G^T| = {product} but |det P| = {}", det.abs())
    });
    cert.witness("gt", json::group(gt));
    cert.witness("double_dual", json::model(&back));
    Ok(cert)
}

/// Result of comparing two routes to `G^T` and the enumeration oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelAgreement {
    pub routes_agree: bool,
    /// `None` when the group was too large to enumerate.
    pub elements_agree: Option<bool>,
}

/// Compares `G^T` from the Smith form with `G^T` from the row lattice of
/// `Bτ`, and for groups of order at most `enumeration_limit`, with the
/// brute-force kernel enumeration (denominators bounded by the Smith
/// exponent of `P`).
pub fn check_kernel_routes(model: &QuotientLGModel, enumeration_limit: u64, cap: u64) -> Result<KernelAgreement> {
    let f = factorize(model)?;
    let snf_route = KernelGroup::of_matrix(&f.btau)?;
    let gt = snf_route.as_diagonal_group()?;
    let rows_route = kernel_via_row_lattice(&f.btau)?;
    let routes_agree = group_equal(gt, &rows_route)?;
    let elements_agree = if gt.order().to_u64().is_some_and(|o| o <= enumeration_limit) {
        let bound = smith_exponent(model.exponents().matrix())
            .to_u64()
            .ok_or_else(|| Error::Domain("exponent bound too large".into()))?;
        let brute = oracle_kernel_bruteforce(&f.btau, bound, cap)?;
        let listed = enumerate_elements(gt, cap)?;
        let reconstructed: BTreeSet<RatVector> = enumerate_elements(&rows_route, cap)?.into_iter().collect();
        Some(brute == listed && listed.iter().cloned().collect::<BTreeSet<_>>() == reconstructed)
    } else {
        None
    };
    Ok(KernelAgreement {
        routes_agree,
        elements_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{elementary_divisors, group_from_generators};
    use crate::lg::parse_polynomial;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn model(poly: &str, g: DiagonalGroup) -> QuotientLGModel {
        QuotientLGModel::new(parse_polynomial(poly, &xyz()).unwrap(), g).unwrap()
    }

    fn j() -> DiagonalGroup {
        group_from_generators(3, &[RatVector::from_fractions(&[(1, 3), (1, 3), (1, 3)])]).unwrap()
    }

    const FERMAT: &str = "x^3+y^3+z^3";
    const LOOP: &str = "x^2*y+y^2*z+z^2*x";

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn equal_sups_examples() {
        let c = verify_equal_sups(&model(FERMAT, j()), &model(LOOP, j()), 0).unwrap();
        assert!(c.passed(), "{:?}", c.diagnostics);
        assert!(c.sanity.values().all(|&ok| ok));
        assert_eq!(c.witnesses["a"], json!([[1, 0, 0], [0, 1, 0], [2, 2, 3]]));

        let c = verify_equal_sups(&model(FERMAT, j()), &model(FERMAT, j()), 0).unwrap();
        assert!(c.passed());

        let other = group_from_generators(3, &[RatVector::from_fractions(&[(1, 3), (2, 3), (0, 1)])]).unwrap();
        let c = verify_equal_sups(&model(FERMAT, j()), &model(FERMAT, other), 0).unwrap();
        assert!(!c.passed());
        assert!(c.diagnostics[0].contains("groups differ"));
    }

    #[test]
    fn main_examples() {
        let c = verify_main(&model(FERMAT, j()), &model("x^3+y^3+z^3+x*y*z", j()), 0).unwrap();
        assert!(c.passed(), "{:?}", c.diagnostics);
        assert_eq!(c.witnesses["weight_lattice"]["normalized_generator"], json!([1, 1, -1]));
        assert_eq!(c.witnesses["dual_monomial_counts"], json!([3, 4]));

        let c = verify_main(&model(FERMAT, j()), &model(LOOP, j()), 0).unwrap();
        assert!(c.passed());
        assert_eq!(c.witnesses["weight_lattice"]["normalized_generator"], json!([1, 1, -1]));

        let t = DiagonalGroup::trivial(3);
        let c = verify_main(&model(FERMAT, t.clone()), &model(LOOP, t), 0).unwrap();
        assert!(c.passed());
        assert_eq!(c.witnesses["weight_lattice"]["normalized_generator"], json!([1, 1, 1]));
    }

    #[test]
    fn cy_corollary_examples() {
        let c = verify_cy_corollary(&model(FERMAT, j()), &model(LOOP, j()), 0).unwrap();
        assert!(c.passed());
        let t = DiagonalGroup::trivial(3);
        let c = verify_cy_corollary(&model(FERMAT, t.clone()), &model(LOOP, t), 0).unwrap();
        assert!(c.passed());
        assert_eq!(c.witnesses["q0"], json!([1, 1, 1]));

        let xy = vec!["x".to_string(), "y".to_string()];
        let m = QuotientLGModel::new(parse_polynomial("x^2+y^3", &xy).unwrap(), DiagonalGroup::trivial(2)).unwrap();
        let c = verify_cy_corollary(&m, &m, 0).unwrap();
        assert!(!c.passed());
        assert!(c.diagnostics[0].contains("not Calabi-Yau: sum 5 ≠ det 6"), "{:?}", c.diagnostics);
    }

    #[test]
    fn krawitz_examples() {
        let maximal = DiagonalGroup::maximal_for(&IntMatrix::diagonal(&[3, 3, 3])).unwrap();
        for (g, order) in [(DiagonalGroup::trivial(3), 27), (j(), 9), (maximal, 1)] {
            let c = verify_krawitz_equivalence(&model(FERMAT, g), 1000).unwrap();
            assert!(c.passed(), "{:?}", c.diagnostics);
            assert_eq!(c.witnesses["gt"]["order"], json!(order));
            assert_eq!(c.witnesses["krawitz_bruteforce"]["order"], json!(order));
        }
        let c = verify_krawitz_equivalence(&model(FERMAT, j()), 1000).unwrap();
        assert_eq!(c.witnesses["gt"]["elementary_divisors"], json!([3, 3]));
        assert!(matches!(
            verify_krawitz_equivalence(&model(FERMAT, j()), 10),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            verify_krawitz_equivalence(&model("x^3+y^3+z^3+x*y*z", j()), 1000),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kernel_oracle_examples() {
        assert_eq!(
            oracle_kernel_bruteforce(&IntMatrix::identity(3), 3, 1000).unwrap(),
            vec![RatVector::zeros(3)]
        );
        assert_eq!(oracle_kernel_bruteforce(&IntMatrix::diagonal(&[3, 3, 3]), 3, 1000).unwrap().len(), 27);
        let bt = mat(&[&[3, 0, 0], &[0, 3, 0], &[-2, -2, 1]]);
        let found = oracle_kernel_bruteforce(&bt, 3, 1000).unwrap();
        assert_eq!(found.len(), 9);
        let g = DiagonalGroup::from_generators(3, &found).unwrap();
        assert_eq!(elementary_divisors(&g), vec![BigInt::from(3), BigInt::from(3)]);
        assert!(matches!(
            oracle_kernel_bruteforce(&bt, 3, 26),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn numeric_examples() {
        let one = Complex64::new(1.0, 0.0);
        let single = CharacterSum::new(vec![vec![BigInt::zero(); 3]], TorusTag::Source).unwrap();
        let z = oracle_numeric_superpotential(&single, &[Complex64::new(0.3, 0.4); 3]).unwrap();
        assert!((z - one).norm() < 1e-12);

        let fermat = CharacterSum::new(IntMatrix::diagonal(&[3, 3, 3]).column_vecs(), TorusTag::Source).unwrap();
        let z = oracle_numeric_superpotential(&fermat, &[one; 3]).unwrap();
        assert!((z - Complex64::new(3.0, 0.0)).norm() < 1e-12);

        let rows_a = CharacterSum::new(
            mat(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]).row_vecs(),
            TorusTag::DualQuotient,
        )
        .unwrap();
        let z = oracle_numeric_superpotential(&rows_a, &[one, one, -one]).unwrap();
        assert!((z - one).norm() < 1e-12);

        assert!(matches!(
            oracle_numeric_superpotential(&fermat, &[one, Complex64::new(0.0, 0.0), one]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn numeric_invariance_matches_exact() {
        let p = parse_polynomial(FERMAT, &xyz()).unwrap();
        assert!(numeric_invariance(&p, &j(), 3, NUMERIC_POINTS).unwrap());
        let half = group_from_generators(3, &[RatVector::from_fractions(&[(1, 2), (0, 1), (0, 1)])]).unwrap();
        assert!(!numeric_invariance(&p, &half, 3, NUMERIC_POINTS).unwrap());
    }

    #[test]
    fn involution_and_routes() {
        for g in [DiagonalGroup::trivial(3), j()] {
            let m = model(LOOP, g);
            let c = verify_involution(&m).unwrap();
            assert!(c.passed(), "{:?}", c.diagnostics);
            let agreement = check_kernel_routes(&m, 10_000, 1_000_000).unwrap();
            assert!(agreement.routes_agree);
            assert_eq!(agreement.elements_agree, Some(true));
        }
    }

    #[test]
    fn certificates_are_deterministic() {
        let a = verify_main(&model(FERMAT, j()), &model(LOOP, j()), 11).unwrap();
        let b = verify_main(&model(FERMAT, j()), &model(LOOP, j()), 11).unwrap();
        assert_eq!(
            json::to_canonical_string(&a.to_json()),
            json::to_canonical_string(&b.to_json())
        );
    }

    #[test]
    fn theorem_ids_parse() {
        for t in [
            TheoremId::EqualSups,
            TheoremId::Main,
            TheoremId::CyCorollary,
            TheoremId::KrawitzEquivalence,
            TheoremId::Involution,
        ] {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert!("birational".parse::<TheoremId>().is_err());
    }
}
