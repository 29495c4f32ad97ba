//! Runs every invariant over the bundled corpus and seeded random models.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus::{self, CorpusModel, MAX_CORPUS_ORDER};
use crate::error::Result;
use crate::lg::{is_invariant, ExponentMatrix};
use crate::verify::{
    check_kernel_routes, numeric_invariance, verify_cy_corollary, verify_involution,
    verify_krawitz_equivalence, verify_main, Certificate, NUMERIC_POINTS,
};

/// Groups of order at most this are compared element by element.
pub const ELEMENTWISE_LIMIT: u64 = 10_000;
pub const RANDOM_PAIRS: usize = 40;
pub const RANDOM_INVARIANCE_TRIALS: usize = 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn from_outcomes(name: &'static str, outcomes: Vec<std::result::Result<(), String>>) -> Self {
        let passed = outcomes.iter().filter(|o| o.is_ok()).count();
        let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
        CheckSummary {
            name,
            passed,
            failed: failures.len(),
            failures: failures.into_iter().take(5).collect(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub corpus_models: usize,
    pub checks: Vec<CheckSummary>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckSummary::ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "corpus_models": self.corpus_models,
            "all_pass": self.all_pass(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "failed": c.failed,
                "failures": c.failures,
            })).collect::<Vec<_>>(),
        })
    }
}

fn certificate_outcome(name: &str, cert: Result<Certificate>) -> std::result::Result<(), String> {
    match cert {
        Ok(c) if c.passed() => Ok(()),
        Ok(c) => Err(format!("{name}: {}", c.diagnostics.join("; "))),
        Err(e) => Err(format!("{name}: {e}")),
    }
}

fn over_corpus(
    name: &'static str,
    models: &[CorpusModel],
    check: impl Fn(&CorpusModel) -> std::result::Result<(), String> + Sync + Send,
) -> CheckSummary {
    CheckSummary::from_outcomes(name, models.par_iter().map(check).collect())
}

pub fn run(seed: u64, cap: u64) -> Result<SelftestReport> {
    let models = corpus::square_models(MAX_CORPUS_ORDER, cap)?;
    let mut checks = Vec::new();

    checks.push(over_corpus("krawitz-equivalence", &models, |m| {
        certificate_outcome(&m.name, verify_krawitz_equivalence(&m.model, cap))
    }));

    checks.push(over_corpus("involution-and-order-law", &models, |m| {
        certificate_outcome(&m.name, verify_involution(&m.model))
    }));

    checks.push(over_corpus("kernel-routes", &models, |m| {
        match check_kernel_routes(&m.model, ELEMENTWISE_LIMIT, cap) {
            Ok(a) if a.routes_agree && a.elements_agree != Some(false) => Ok(()),
            Ok(a) => Err(format!("{}: {a:?}", m.name)),
            Err(e) => Err(format!("{}: {e}", m.name)),
        }
    }));

    let pairs = corpus::calabi_yau_pairs(&models);
    checks.push(CheckSummary::from_outcomes(
        "cy-corollary",
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let name = format!("{} vs {}", models[i].name, models[j].name);
                certificate_outcome(&name, verify_cy_corollary(&models[i].model, &models[j].model, seed))
            })
            .collect(),
    ));

    checks.push(CheckSummary::from_outcomes("random-main", random_main(seed)?));
    checks.push(CheckSummary::from_outcomes("numeric-invariance", random_invariance(seed)?));
    checks.push(CheckSummary::from_outcomes(
        "numeric-sanity",
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let name = format!("{} vs {}", models[i].name, models[j].name);
                match verify_main(&models[i].model, &models[j].model, seed) {
                    Ok(c) if c.sanity.values().all(|&ok| ok) && !c.sanity.is_empty() => Ok(()),
                    Ok(c) => Err(format!("{name}: {:?}", c.sanity)),
                    Err(e) => Err(format!("{name}: {e}")),
                }
            })
            .collect(),
    ));

    Ok(SelftestReport {
        seed,
        corpus_models: models.len(),
        checks,
    })
}

/// Two random invariant models sharing a random group always certify.
fn random_main(seed: u64) -> Result<Vec<std::result::Result<(), String>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let mut cases = Vec::with_capacity(RANDOM_PAIRS);
    for _ in 0..RANDOM_PAIRS {
        let g = corpus::random_group(&mut rng, 3, 27)?;
        let pool = corpus::invariant_monomials(&g, 6);
        let a = corpus::random_invariant_model(&mut rng, &vars, &g, &pool, 5)?;
        let b = corpus::random_invariant_model(&mut rng, &vars, &g, &pool, 5)?;
        cases.push((a, b));
    }
    Ok(cases
        .par_iter()
        .map(|(a, b)| {
            let name = format!("{} vs {}", a.exponents(), b.exponents());
            certificate_outcome(&name, verify_main(a, b, seed))
        })
        .collect())
}

/// The exact invariance flag agrees with the floating-point check on corpus
/// polynomials against random (often non-invariant) groups.
fn random_invariance(seed: u64) -> Result<Vec<std::result::Result<(), String>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let polys: Vec<ExponentMatrix> = corpus::POLYNOMIALS
        .iter()
        .map(corpus::corpus_polynomial)
        .collect::<Result<_>>()?;
    let mut cases = Vec::with_capacity(RANDOM_INVARIANCE_TRIALS);
    for t in 0..RANDOM_INVARIANCE_TRIALS {
        let p = polys[t % polys.len()].clone();
        let g = corpus::random_group(&mut rng, p.variable_count(), 81)?;
        cases.push((p, g, t as u64));
    }
    Ok(cases
        .par_iter()
        .map(|(p, g, t)| {
            let exact = is_invariant(p, g).map_err(|e| e.to_string())?;
            let numeric = numeric_invariance(p, g, seed.wrapping_add(*t), NUMERIC_POINTS)
                .map_err(|e| e.to_string())?;
            if exact == numeric {
                Ok(())
            } else {
                Err(format!("{p}: exact {exact}, numeric {numeric}"))
            }
        })
        .collect())
}
