//! Model files: `variables`, `polynomial`, and `group` generators, in JSON or
//! TOML.
//!
//! ```toml
//! variables = ["x", "y", "z"]
//! polynomial = "x^3 + y^3 + z^3"
//! group = [["1/3", "1/3", "1/3"]]
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::DiagonalGroup;
use crate::lg::{parse_polynomial, QuotientLGModel};
use crate::linalg::{parse_rational, RatVector};

/// A rational entry written as a string (`"1/3"`) or a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalEntry {
    Text(String),
    Integer(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub variables: Vec<String>,
    pub polynomial: String,
    #[serde(default)]
    pub group: Vec<Vec<RationalEntry>>,
}

impl ModelFile {
    /// Parses JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::ModelFile(format!("invalid JSON: {e}")))
        } else {
            toml::from_str(text).map_err(|e| Error::ModelFile(format!("invalid TOML: {e}")))
        }
    }

    pub fn generators(&self) -> Result<Vec<RatVector>> {
        self.group
            .iter()
            .map(|g| {
                g.iter()
                    .map(|e| match e {
                        RationalEntry::Text(s) => parse_rational(s),
                        RationalEntry::Integer(i) => Ok(num_rational::BigRational::from_integer((*i).into())),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(RatVector::new)
            })
            .collect()
    }

    pub fn to_model(&self) -> Result<QuotientLGModel> {
        let p = parse_polynomial(&self.polynomial, &self.variables)?;
        let g = DiagonalGroup::from_generators(self.variables.len(), &self.generators()?)?;
        QuotientLGModel::new(p, g)
    }

    /// Model file for an existing model, with the group given by its
    /// canonical lattice basis.
    pub fn from_model(model: &QuotientLGModel) -> Self {
        ModelFile {
            variables: model.exponents().variables().to_vec(),
            polynomial: model.exponents().to_polynomial_string(),
            group: model
                .group()
                .lambda_basis()
                .iter()
                .map(RatVector::mod_one)
                .filter(|v| !v.is_integral())
                .map(|v| v.to_strings().into_iter().map(RationalEntry::Text).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_toml_agree() {
        let json = r#"{"variables": ["x","y","z"], "polynomial": "x^3+y^3+z^3",
                       "group": [["1/3","1/3","1/3"]]}"#;
        let toml = "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3+y^3+z^3\"\ngroup = [[\"1/3\", \"1/3\", \"1/3\"]]\n";
        let a = ModelFile::parse(json).unwrap().to_model().unwrap();
        let b = ModelFile::parse(toml).unwrap().to_model().unwrap();
        assert_eq!(a, b);
        assert_eq!(*a.group().order(), 3.into());
    }

    #[test]
    fn group_defaults_to_trivial() {
        let f = ModelFile::parse(r#"{"variables": ["x"], "polynomial": "x^2"}"#).unwrap();
        assert!(f.to_model().unwrap().group().is_trivial());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(ModelFile::parse("{"), Err(Error::ModelFile(_))));
        let f = ModelFile::parse(r#"{"variables": ["x"], "polynomial": "x^2", "group": [["1/0"]]}"#)
            .unwrap();
        assert!(matches!(f.to_model(), Err(Error::InvalidRational(_))));
        let f = ModelFile::parse(r#"{"variables": ["x"], "polynomial": "x^3", "group": [["1/2"]]}"#)
            .unwrap();
        assert!(matches!(f.to_model(), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn round_trip_through_model() {
        let f = ModelFile::parse(
            r#"{"variables": ["x","y","z"], "polynomial": "x^2*y+y^2*z+z^2*x", "group": [["2/3","2/3","2/3"]]}"#,
        )
        .unwrap();
        let m = f.to_model().unwrap();
        let again = ModelFile::from_model(&m).to_model().unwrap();
        assert_eq!(m, again);
    }
}
