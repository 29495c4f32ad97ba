use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use bhk_core::json::{self, to_canonical_string};
use bhk_core::lattice::DEFAULT_ENUMERATION_CAP;
use bhk_core::lg::source_superpotential;
use bhk_core::model_file::ModelFile;
use bhk_core::verify::{verify_cy_corollary, verify_equal_sups, verify_main, TheoremId};
use bhk_core::{
    dualize, is_calabi_yau, krawitz_dual, normalize_weight_generator, weight_lattice,
    CharacterSum, QuotientLGModel,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod text;

#[derive(Parser)]
#[command(name = "bhk", version, about = "Exact duality for quotient Landau-Ginzburg models")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the numeric sanity layer and random corpus models.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group that may be enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Primal,
    Dual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Main,
    EqualSups,
    CyCorollary,
}

impl From<Theorem> for TheoremId {
    fn from(t: Theorem) -> Self {
        match t {
            Theorem::Main => TheoremId::Main,
            Theorem::EqualSups => TheoremId::EqualSups,
            Theorem::CyCorollary => TheoremId::CyCorollary,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a model file.
    Parse { path: String },
    /// Dual model `(Pτ, G^T)`.
    Dual { path: String },
    /// Krawitz's dual group (square invertible exponent matrices only).
    Krawitz { path: String },
    /// Calabi-Yau test on the exponent matrix as written.
    Cy { path: String },
    /// Weight lattice of the source or of the restricted dual superpotential.
    Weights {
        path: String,
        #[arg(long, value_enum, default_value_t = Side::Primal)]
        side: Side,
    },
    /// Certify a theorem for two models.
    Verify {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Theorem::Main)]
        theorem: Theorem,
    },
    /// Run every invariant over the bundled corpus.
    Selftest,
}

/// Failures that map to exit code 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Outcome {
    value: Value,
    passed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, passed: true }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_model(path: &str) -> Result<QuotientLGModel> {
    let text = read_input(path)?;
    let file = ModelFile::parse(&text).with_context(|| format!("in {path}"))?;
    file.to_model().with_context(|| format!("in {path}"))
}

fn weights_json(sum: &CharacterSum) -> Result<Value> {
    let w = weight_lattice(sum)?;
    let generator = if w.rank() == 1 {
        Some(normalize_weight_generator(&w, sum)?)
    } else {
        None
    };
    Ok(json::weight_lattice(&w, generator.as_deref()))
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    Ok(match &cli.command {
        Command::Parse { path } => {
            let model = load_model(path)?;
            for v in model.exponents().unused_variables() {
                eprintln!("warning: variable `{v}` appears in no monomial");
            }
            Outcome::ok(json::model(&model))
        }
        Command::Dual { path } => {
            let model = load_model(path)?;
            Outcome::ok(json!({
                "model": json::model(&model),
                "dual": json::dual_model(&dualize(&model)?),
            }))
        }
        Command::Krawitz { path } => {
            let model = load_model(path)?;
            let g = krawitz_dual(model.exponents(), model.group())?;
            Outcome::ok(json!({
                "model": json::model(&model),
                "krawitz_dual": json::group(&g),
            }))
        }
        Command::Cy { path } => {
            let model = load_model(path)?;
            Outcome::ok(json!({
                "exponent_matrix": json::matrix(model.exponents().matrix()),
                "report": json::cy_report(&is_calabi_yau(model.exponents().matrix())),
            }))
        }
        Command::Weights { path, side } => {
            let model = load_model(path)?;
            let (label, sum) = match side {
                Side::Primal => ("primal", source_superpotential(model.exponents())),
                Side::Dual => ("dual", dualize(&model)?.restricted_superpotential()),
            };
            Outcome::ok(json!({
                "side": label,
                "superpotential": json::character_sum(&sum),
                "weights": weights_json(&sum)?,
            }))
        }
        Command::Verify { a, b, theorem } => {
            let ma = load_model(a)?;
            let mb = load_model(b)?;
            let cert = match TheoremId::from(*theorem) {
                TheoremId::EqualSups => verify_equal_sups(&ma, &mb, cli.seed)?,
                TheoremId::CyCorollary => verify_cy_corollary(&ma, &mb, cli.seed)?,
                _ => verify_main(&ma, &mb, cli.seed)?,
            };
            Outcome {
                value: cert.to_json(),
                passed: cert.passed(),
            }
        }
        Command::Selftest => {
            let report = bhk_core::selftest::run(cli.seed, cli.cap)?;
            Outcome {
                value: report.to_json(),
                passed: report.all_pass(),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = match cli.format {
                Format::Json => to_canonical_string(&outcome.value),
                Format::Text => text::render(&outcome.value),
            };
            let mut out = io::stdout().lock();
            if out.write_all(rendered.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
