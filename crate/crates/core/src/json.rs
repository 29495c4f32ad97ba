//! Canonical JSON emission.
//!
//! Objects are built as `serde_json::Value`s, whose maps keep keys sorted,
//! so serialization is byte-deterministic. Integers that fit in an `i64` are
//! JSON numbers and larger ones are decimal strings; rationals are always
//! reduced strings `"a/b"` (or `"a"` when the denominator is one).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::duality::{CyReport, DualModel, WeightLattice};
use crate::lattice::{elementary_divisors, DiagonalGroup, KernelGroup, Lattice};
use crate::lg::{CharacterSum, ExponentMatrix, Factorization, QuotientLGModel};
use crate::linalg::{IntMatrix, RatVector};

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn int_vecs(vs: &[Vec<BigInt>]) -> Value {
    Value::Array(vs.iter().map(|v| int_vec(v)).collect())
}

/// Row-major array of rows.
pub fn matrix(m: &IntMatrix) -> Value {
    int_vecs(&m.row_vecs())
}

pub fn rat_vec(v: &RatVector) -> Value {
    Value::Array(v.to_strings().into_iter().map(Value::String).collect())
}

pub fn lattice(l: &Lattice) -> Value {
    Value::Array(l.basis().iter().map(rat_vec).collect())
}

pub fn group(g: &DiagonalGroup) -> Value {
    json!({
        "ambient_rank": g.ambient_rank(),
        "lambda_basis": lattice(g.lattice()),
        "order": int(g.order()),
        "elementary_divisors": int_vec(&elementary_divisors(g)),
    })
}

pub fn kernel_group(k: &KernelGroup) -> Value {
    json!({
        "ambient_rank": k.ambient_rank,
        "torus_rank": k.torus_rank,
        "finite_divisors": int_vec(&k.finite_divisors),
        "finite_order": int(&k.finite_order()),
        "lambda_basis": k.group.as_ref().map(|g| lattice(g.lattice())),
    })
}

pub fn exponent_matrix(p: &ExponentMatrix) -> Value {
    json!({
        "variables": p.variables(),
        "polynomial": p.to_polynomial_string(),
        "exponent_matrix": matrix(p.matrix()),
    })
}

pub fn model(m: &QuotientLGModel) -> Value {
    let p = m.exponents();
    json!({
        "variables": p.variables(),
        "polynomial": p.to_polynomial_string(),
        "exponent_matrix": matrix(p.matrix()),
        "group": group(m.group()),
    })
}

pub fn factorization(f: &Factorization) -> Value {
    json!({
        "m_basis": lattice(&f.m_basis),
        "a": matrix(&f.a),
        "btau": matrix(&f.btau),
    })
}

pub fn character_sum(s: &CharacterSum) -> Value {
    json!({
        "torus": s.torus().as_str(),
        "characters": int_vecs(s.vectors()),
    })
}

pub fn dual_model(d: &DualModel) -> Value {
    json!({
        "ptau": matrix(&d.ptau),
        "gt": kernel_group(&d.gt),
        "factorization_of_dual": {
            "b": matrix(&d.b),
            "a_tau": matrix(&d.a_tau),
        },
        "source_factorization": factorization(&d.source),
        "restricted_superpotential": character_sum(&d.restricted_superpotential()),
    })
}

pub fn cy_report(r: &CyReport) -> Value {
    json!({
        "square": r.square,
        "invertible": r.invertible,
        "sign_uniform": r.sign_uniform,
        "sum_matches_det": r.sum_matches_det,
        "weights_row": int_vec(&r.weights_row),
        "weights_sum": int(&r.weights_sum()),
        "det": r.det.as_ref().map(int),
        "calabi_yau": r.is_calabi_yau(),
        "failure": r.failure(),
    })
}

pub fn weight_lattice(w: &WeightLattice, generator: Option<&[BigInt]>) -> Value {
    json!({
        "ambient_rank": w.ambient_rank(),
        "rank": w.rank(),
        "basis": int_vecs(w.basis()),
        "normalized_generator": generator.map(int_vec),
    })
}

/// Pretty-printed canonical text with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_integers_compact() {
        let v = json!({"zeta": 1, "alpha": int(&BigInt::from(10).pow(30))});
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"alpha":"1000000000000000000000000000000","zeta":1}"#
        );
    }

    #[test]
    fn rationals_are_reduced_strings() {
        let v = RatVector::from_fractions(&[(2, 6), (4, 2), (0, 5), (-1, 3)]);
        assert_eq!(rat_vec(&v), json!(["1/3", "2", "0", "-1/3"]));
    }
}
