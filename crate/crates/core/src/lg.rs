//! Superpotentials, their exponent matrices, and quotient Landau-Ginzburg
//! models.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseErrorKind, Result};
use crate::lattice::{DiagonalGroup, Lattice};
use crate::linalg::{self, IntMatrix, IntVector, RatVector};

/// Exponent matrix of a sum of distinct monomials with unit coefficients.
/// Column `j` is the exponent vector of monomial `j`; columns are kept in
/// graded-lexicographic descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    matrix: IntMatrix,
    variables: Vec<String>,
}

/// Graded-lex comparison, larger monomial first.
fn grlex_desc(a: &[BigInt], b: &[BigInt]) -> Ordering {
    let da: BigInt = a.iter().sum();
    let db: BigInt = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl ExponentMatrix {
    /// Builds the canonical matrix from exponent vectors in any order.
    pub fn from_monomials(variables: Vec<String>, monomials: Vec<IntVector>) -> Result<Self> {
        Ok(Self::with_permutation(variables, monomials)?.0)
    }

    /// As [`ExponentMatrix::from_monomials`], also returning for each
    /// canonical column the index of the input monomial it came from.
    pub fn with_permutation(
        variables: Vec<String>,
        monomials: Vec<IntVector>,
    ) -> Result<(Self, Vec<usize>)> {
        let n = variables.len();
        if n == 0 {
            return Err(Error::Dimension("no variables".into()));
        }
        check_variable_names(&variables)?;
        if monomials.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                kind: ParseErrorKind::Empty,
            });
        }
        for m in &monomials {
            if m.len() != n {
                return Err(Error::Dimension(format!(
                    "monomial has {} exponents for {n} variables",
                    m.len()
                )));
            }
            if m.iter().any(Signed::is_negative) {
                return Err(Error::Precondition(
                    "exponents must be non-negative".into(),
                ));
            }
        }
        let mut order: Vec<usize> = (0..monomials.len()).collect();
        order.sort_by(|&a, &b| grlex_desc(&monomials[a], &monomials[b]));
        for w in order.windows(2) {
            if monomials[w[0]] == monomials[w[1]] {
                return Err(Error::Parse {
                    offset: 0,
                    kind: ParseErrorKind::DuplicateMonomial(format_monomial(
                        &variables,
                        &monomials[w[0]],
                    )),
                });
            }
        }
        let cols: Vec<IntVector> = order.iter().map(|&i| monomials[i].clone()).collect();
        let matrix = IntMatrix::from_columns(&cols)?;
        Ok((ExponentMatrix { matrix, variables }, order))
    }

    pub fn from_matrix(variables: Vec<String>, p: &IntMatrix) -> Result<Self> {
        if variables.len() != p.rows() {
            return Err(Error::Dimension(format!(
                "{} variable names for {} rows",
                variables.len(),
                p.rows()
            )));
        }
        Self::from_monomials(variables, p.column_vecs())
    }

    /// Variables named `x0, x1, ...`.
    pub fn with_default_names(p: &IntMatrix) -> Result<Self> {
        Self::from_matrix(default_names("x", p.rows()), p)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// `n + 1`.
    pub fn variable_count(&self) -> usize {
        self.matrix.rows()
    }

    /// `m + 1`.
    pub fn monomial_count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn monomials(&self) -> Vec<IntVector> {
        self.matrix.column_vecs()
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }

    /// Variables that occur in no monomial.
    pub fn unused_variables(&self) -> Vec<&str> {
        (0..self.variable_count())
            .filter(|&i| self.matrix.row(i).iter().all(Zero::is_zero))
            .map(|i| self.variables[i].as_str())
            .collect()
    }

    /// Reorders variables: variable `i` of the result is variable `perm[i]`
    /// of `self`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.variable_count() {
            return Err(Error::Dimension("permutation length".into()));
        }
        let names = perm.iter().map(|&i| self.variables[i].clone()).collect();
        Self::from_matrix(names, &self.matrix.select_rows(perm))
    }

    pub fn to_polynomial_string(&self) -> String {
        self.monomials()
            .iter()
            .map(|m| format_monomial(&self.variables, m))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial_string())
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_variable_names(variables: &[String]) -> Result<()> {
    for (i, v) in variables.iter().enumerate() {
        let mut chars = v.chars();
        let valid = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Parse {
                offset: 0,
                kind: ParseErrorKind::Unexpected(format!("variable name `{v}`")),
            });
        }
        if variables[..i].contains(v) {
            return Err(Error::Parse {
                offset: 0,
                kind: ParseErrorKind::DuplicateVariable(v.clone()),
            });
        }
    }
    Ok(())
}

fn format_monomial(variables: &[String], exps: &[BigInt]) -> String {
    let factors: Vec<String> = variables
        .iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .map(|(v, e)| {
            if e.is_one() {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(String),
    Plus,
    Star,
    Caret,
    Other(char),
}

fn tokenize(text: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((pos, c)) = it.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' => Token::Plus,
            '*' => Token::Star,
            '^' => Token::Caret,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = c.to_string();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                Token::Ident(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = c.to_string();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                Token::Number(s)
            }
            other => Token::Other(other),
        };
        out.push((pos, tok));
    }
    out
}

/// Parses a sum of monomials with unit coefficients, e.g.
/// `"x0^3*x1 + x1^2*x2"`.
///
/// Grammar: monomials joined by `+`; each monomial is a `*`-joined product
/// of `var` or `var^k` with `k >= 1`. Repeated factors multiply.
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<ExponentMatrix> {
    check_variable_names(variables)?;
    let tokens = tokenize(text);
    let end = text.len();
    let err = |offset: usize, kind: ParseErrorKind| Error::Parse { offset, kind };
    if tokens.is_empty() {
        return Err(err(0, ParseErrorKind::Empty));
    }

    let mut monomials: Vec<IntVector> = Vec::new();
    let mut current = vec![BigInt::zero(); variables.len()];
    let mut i = 0;
    loop {
        // factor
        let (pos, tok) = tokens
            .get(i)
            .cloned()
            .unwrap_or((end, Token::Other('\0')));
        let var = match tok {
            Token::Ident(name) => variables
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| err(pos, ParseErrorKind::UnknownVariable(name)))?,
            Token::Number(n) => return Err(err(pos, ParseErrorKind::NumericCoefficient(n))),
            _ if i >= tokens.len() => {
                return Err(err(end, ParseErrorKind::Unexpected("end of input".into())))
            }
            other => return Err(err(pos, ParseErrorKind::Unexpected(describe(&other)))),
        };
        i += 1;
        let mut exponent = BigInt::one();
        if let Some((_, Token::Caret)) = tokens.get(i) {
            i += 1;
            match tokens.get(i).cloned() {
                Some((p, Token::Number(n))) => {
                    exponent = n.parse::<BigInt>().expect("digits");
                    if exponent.is_zero() {
                        return Err(err(p, ParseErrorKind::BadExponent(n)));
                    }
                }
                Some((p, Token::Other('-'))) => {
                    return Err(err(p, ParseErrorKind::BadExponent("-".into())))
                }
                Some((p, other)) => {
                    return Err(err(p, ParseErrorKind::BadExponent(describe(&other))))
                }
                None => return Err(err(end, ParseErrorKind::BadExponent(String::new()))),
            }
            i += 1;
        }
        current[var] += exponent;

        match tokens.get(i) {
            None => {
                monomials.push(std::mem::replace(
                    &mut current,
                    vec![BigInt::zero(); variables.len()],
                ));
                break;
            }
            Some((_, Token::Star)) => i += 1,
            Some((_, Token::Plus)) => {
                monomials.push(std::mem::replace(
                    &mut current,
                    vec![BigInt::zero(); variables.len()],
                ));
                i += 1;
            }
            Some((p, other)) => {
                return Err(err(*p, ParseErrorKind::Unexpected(describe(other))));
            }
        }
    }

    ExponentMatrix::from_monomials(variables.to_vec(), monomials)
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Ident(s) => format!("identifier `{s}`"),
        Token::Number(s) => format!("number `{s}`"),
        Token::Plus => "`+`".into(),
        Token::Star => "`*`".into(),
        Token::Caret => "`^`".into(),
        Token::Other(c) => format!("character `{c}`"),
    }
}

/// Whether every monomial pairs integrally with every generator of `Λ_G`.
/// Testing the basis suffices because the pairing is bilinear.
pub fn is_invariant(p: &ExponentMatrix, g: &DiagonalGroup) -> Result<bool> {
    if p.variable_count() != g.ambient_rank() {
        return Err(Error::Dimension(format!(
            "{} variables against a group in a rank-{} torus",
            p.variable_count(),
            g.ambient_rank()
        )));
    }
    let monomials = p.monomials();
    Ok(g
        .lambda_basis()
        .iter()
        .all(|v| monomials.iter().all(|c| v.dot_int(c).is_integer())))
}

/// A superpotential together with a finite diagonal group it is invariant
/// under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLGModel {
    p: ExponentMatrix,
    g: DiagonalGroup,
}

impl QuotientLGModel {
    pub fn new(p: ExponentMatrix, g: DiagonalGroup) -> Result<Self> {
        if !is_invariant(&p, &g)? {
            return Err(Error::NotInvariant(format!(
                "`{p}` does not descend to the quotient by a group of order {}",
                g.order()
            )));
        }
        Ok(QuotientLGModel { p, g })
    }

    pub fn exponents(&self) -> &ExponentMatrix {
        &self.p
    }

    pub fn group(&self) -> &DiagonalGroup {
        &self.g
    }

    pub fn factorize(&self) -> Result<Factorization> {
        factorize(self)
    }
}

/// `P = A * Bτ` where the columns of `A` are the canonical basis of the
/// lattice `M` of invariant characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub m_basis: Lattice,
    pub a: IntMatrix,
    pub btau: IntMatrix,
}

pub fn factorize(model: &QuotientLGModel) -> Result<Factorization> {
    let m = model.group().invariant_characters()?;
    let a = m.integer_basis_matrix().ok_or_else(|| {
        Error::InvariantViolation("lattice of invariant characters is not integral".into())
    })?;
    let p = model.exponents().matrix();
    let mut cols = Vec::with_capacity(p.cols());
    for (j, c) in p.column_vecs().iter().enumerate() {
        let x = linalg::solve_exact(&a, &RatVector::from_integers(c))?
            .and_then(|x| x.to_integers())
            .ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "monomial {j} is not an integral combination of invariant characters"
                ))
            })?;
        cols.push(x);
    }
    let btau = IntMatrix::from_columns(&cols)?;
    if a.mul(&btau)? != *p {
        return Err(Error::InvariantViolation("A * Bτ differs from P".into()));
    }
    let det_a = num_traits::abs(linalg::det(&a)?);
    if det_a != *model.group().order() {
        return Err(Error::InvariantViolation(format!(
            "|det A| = {det_a} but the group has order {}",
            model.group().order()
        )));
    }
    Ok(Factorization {
        m_basis: m,
        a,
        btau,
    })
}

/// Which torus a [`CharacterSum`] lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorusTag {
    /// The source torus `(C^x)^{n+1}`.
    Source,
    /// The quotient torus `F(M)`.
    Quotient,
    /// The dual torus `(C^x)^{m+1}`.
    Dual,
    /// The common torus `F(Mτ)` of dual models.
    DualQuotient,
}

impl TorusTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TorusTag::Source => "source",
            TorusTag::Quotient => "quotient",
            TorusTag::Dual => "dual",
            TorusTag::DualQuotient => "dual-quotient",
        }
    }
}

/// A sum of characters of a fixed torus, as a multiset of exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterSum {
    vectors: Vec<IntVector>,
    torus: TorusTag,
}

impl CharacterSum {
    pub fn new(mut vectors: Vec<IntVector>, torus: TorusTag) -> Result<Self> {
        if let Some(first) = vectors.first() {
            let n = first.len();
            if vectors.iter().any(|v| v.len() != n) {
                return Err(Error::Dimension("characters of different lengths".into()));
            }
        }
        vectors.sort();
        Ok(CharacterSum { vectors, torus })
    }

    pub fn vectors(&self) -> &[IntVector] {
        &self.vectors
    }

    pub fn torus(&self) -> TorusTag {
        self.torus
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_rank(&self) -> Option<usize> {
        self.vectors.first().map(Vec::len)
    }

    /// Largest absolute exponent, for numeric evaluation guards.
    pub fn max_abs_exponent(&self) -> Option<i64> {
        self.vectors
            .iter()
            .flatten()
            .map(|x| x.abs().to_i64())
            .try_fold(0i64, |acc, x| x.map(|x| acc.max(x)))
    }
}

/// The monomials of `W_G` in the coordinates of the quotient torus: the
/// columns of `Bτ`.
pub fn quotient_superpotential(f: &Factorization) -> CharacterSum {
    CharacterSum::new(f.btau.column_vecs(), TorusTag::Quotient).expect("uniform columns")
}

/// The monomials of `W` on the source torus: the columns of `P`.
pub fn source_superpotential(p: &ExponentMatrix) -> CharacterSum {
    CharacterSum::new(p.monomials(), TorusTag::Source).expect("uniform columns")
}

/// Pairing of a group element with a monomial, as a rational number.
pub fn pairing(v: &RatVector, monomial: &[BigInt]) -> BigRational {
    v.dot_int(monomial)
}
