//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) and
//! reduced rationals ([`BigRational`]). Lattice bases are canonicalized with
//! the Hermite normal form: a lattice given by generators is reduced to the
//! unique echelon basis with positive pivots whose entries above each pivot
//! lie in `[0, pivot)`. Read as columns, this basis matrix is lower
//! triangular with each row reduced modulo its diagonal entry.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntVector = Vec<BigInt>;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    /// Builds a matrix from its rows. Rejects empty and ragged input.
    pub fn from_rows<T: Into<BigInt>>(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension(format!(
                    "ragged rows: expected {c} entries, found {}",
                    row.len()
                )));
            }
            data.extend(row.into_iter().map(Into::into));
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul_rat_vec(&self, v: &RatVector) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(RatVector::new(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Permutes columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, perm.len());
        for (j, &src) in perm.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, j)] = self[(i, src)].clone();
            }
        }
        out
    }

    /// Permutes rows: row `i` of the result is row `perm[i]` of `self`.
    pub fn select_rows(&self, perm: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(perm.len(), self.cols);
        for (i, &src) in perm.iter().enumerate() {
            for j in 0..self.cols {
                out[(i, j)] = self[(src, j)].clone();
            }
        }
        out
    }

    fn to_nested(&self) -> Vec<Vec<BigInt>> {
        self.row_vecs()
    }

    fn from_nested(rows: usize, cols: usize, nested: Vec<Vec<BigInt>>) -> Self {
        IntMatrix {
            rows,
            cols,
            data: nested.into_iter().flatten().collect(),
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Vector of exact rationals. `BigRational` keeps every entry reduced with a
/// positive denominator, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct RatVector(Vec<BigRational>);

impl RatVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RatVector(vec![BigRational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = BigRational::one();
        v
    }

    pub fn from_integers(v: &[BigInt]) -> Self {
        RatVector(v.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn from_fractions(entries: &[(i64, i64)]) -> Self {
        RatVector(
            entries
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    /// Parses entries written as `"a/b"` or `"a"`.
    pub fn parse<S: AsRef<str>>(entries: &[S]) -> Result<Self> {
        entries
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(RatVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigRational> {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    /// Integer entries, if every entry is an integer.
    pub fn to_integers(&self) -> Option<IntVector> {
        self.is_integral()
            .then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn dot_int(&self, v: &[BigInt]) -> BigRational {
        self.0
            .iter()
            .zip(v)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    pub fn dot(&self, other: &RatVector) -> BigRational {
        self.0.iter().zip(other.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(other.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigRational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Representative modulo `Z^n` with every entry in `[0, 1)`.
    pub fn mod_one(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| a - a.floor()).collect())
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl Index<usize> for RatVector {
    type Output = BigRational;

    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl FromIterator<BigRational> for RatVector {
    fn from_iter<I: IntoIterator<Item = BigRational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

/// Parses `"a/b"` or `"a"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
    }
}

/// Unimodular `U`, `V` and diagonal `D` with `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Diagonal entries greater than one.
    pub fn nontrivial_divisors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| *x > BigInt::one())
            .collect()
    }
}

fn check_square(m: &IntMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "expected a square matrix, found {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

/// Fraction-free Gaussian elimination (Bareiss).
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    check_square(m)?;
    let n = m.rows();
    let mut a = m.to_nested();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

fn minor(m: &IntMatrix, skip_row: usize, skip_col: usize) -> IntMatrix {
    let n = m.rows();
    let rows: Vec<usize> = (0..n).filter(|&i| i != skip_row).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| j != skip_col).collect();
    m.select_rows(&rows).select_columns(&cols)
}

/// Classical adjugate: `m * adjugate(m) = det(m) * I`.
pub fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    check_square(m)?;
    let n = m.rows();
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, i, j))?;
            adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    Ok(adj)
}

/// Smith normal form with transforms, by gcd-driven elimination.
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_nested();
    let mut u = IntMatrix::identity(r).to_nested();
    let mut v = IntMatrix::identity(c).to_nested();

    fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        // rows[dst] -= q * rows[src]
        let src_row = rows[src].clone();
        for (x, s) in rows[dst].iter_mut().zip(&src_row) {
            *x -= q * s;
        }
    }
    fn col_axpy(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in rows.iter_mut() {
            let s = row[src].clone();
            row[dst] -= q * s;
        }
    }
    fn col_swap(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
        for row in rows.iter_mut() {
            row.swap(a, b);
        }
    }

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t]))
            });
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    SnfDecomposition {
        u: IntMatrix::from_nested(r, r, u),
        d: IntMatrix::from_nested(r, c, a),
        v: IntMatrix::from_nested(c, c, v),
    }
}

/// Row-style Hermite normal form with transform: returns `(H, U)` with
/// `U * m = H`, `U` unimodular, and `H` in reduced echelon form with zero
/// rows at the bottom.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_nested();
    let mut u = IntMatrix::identity(r).to_nested();
    let pr = hnf_in_place(&mut a, Some(&mut u), c);
    debug_assert!(a[pr..].iter().all(|row| row.iter().all(Zero::is_zero)));
    (
        IntMatrix::from_nested(r, c, a),
        IntMatrix::from_nested(r, r, u),
    )
}

fn hnf_in_place(
    a: &mut [Vec<BigInt>],
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    cols: usize,
) -> usize {
    let r = a.len();
    let mut pr = 0;
    for col in 0..cols {
        if pr == r {
            break;
        }
        loop {
            let pivot = (pr..r)
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let Some(p) = pivot else {
                break;
            };
            a.swap(pr, p);
            if let Some(u) = u.as_deref_mut() {
                u.swap(pr, p);
            }
            let mut done = true;
            for i in pr + 1..r {
                if !a[i][col].is_zero() {
                    let q = a[i][col].div_floor(&a[pr][col]);
                    sub_row(a, i, pr, &q);
                    if let Some(u) = u.as_deref_mut() {
                        sub_row(u, i, pr, &q);
                    }
                    done &= a[i][col].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if a[pr][col].is_zero() {
            continue;
        }
        if a[pr][col].is_negative() {
            negate_row(a, pr);
            if let Some(u) = u.as_deref_mut() {
                negate_row(u, pr);
            }
        }
        for i in 0..pr {
            let q = a[i][col].div_floor(&a[pr][col]);
            if !q.is_zero() {
                sub_row(a, i, pr, &q);
                if let Some(u) = u.as_deref_mut() {
                    sub_row(u, i, pr, &q);
                }
            }
        }
        pr += 1;
    }
    pr
}

fn sub_row(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let src_row = rows[src].clone();
    for (x, s) in rows[dst].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

fn negate_row(rows: &mut [Vec<BigInt>], i: usize) {
    for x in rows[i].iter_mut() {
        *x = -x.clone();
    }
}

/// Canonical basis (nonzero HNF rows) of the integer lattice spanned by the
/// given vectors of length `dim`. Works for any rank.
pub fn hnf_lattice(generators: &[IntVector], dim: usize) -> Result<Vec<IntVector>> {
    if generators.iter().any(|g| g.len() != dim) {
        return Err(Error::Dimension(format!(
            "generator length differs from ambient dimension {dim}"
        )));
    }
    let mut a: Vec<Vec<BigInt>> = generators.to_vec();
    let rank = hnf_in_place(&mut a, None, dim);
    a.truncate(rank);
    Ok(a)
}

/// Canonical basis of the lattice generated over `Z` by rational vectors,
/// for lattices of any rank.
pub fn canonical_rational_basis(generators: &[RatVector], dim: usize) -> Result<Vec<RatVector>> {
    if generators.iter().any(|g| g.len() != dim) {
        return Err(Error::Dimension(format!(
            "generator length differs from ambient dimension {dim}"
        )));
    }
    let den = generators
        .iter()
        .fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator_lcm()));
    let scaled: Vec<IntVector> = generators
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let rows = hnf_lattice(&scaled, dim)?;
    let den = BigRational::from_integer(den);
    Ok(rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| BigRational::from_integer(x) / &den)
                .collect()
        })
        .collect())
}

/// Canonical basis of a full-rank lattice in `Q^dim`. Two generating sets of
/// the same lattice give identical output.
pub fn hnf_basis(generators: &[RatVector], dim: usize) -> Result<Vec<RatVector>> {
    let basis = canonical_rational_basis(generators, dim)?;
    if basis.len() < dim {
        return Err(Error::RankDeficient {
            rank: basis.len(),
            dim,
        });
    }
    Ok(basis)
}

/// Rank over `Q`.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.to_nested();
    hnf_in_place(&mut a, None, m.cols())
}

/// Canonical `Z`-basis of `{x in Z^cols : m x = 0}`; empty when the kernel is
/// trivial.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let t = m.transpose();
    let (h, u) = hnf_with_transform(&t);
    let r = rank_of_echelon(&h);
    let kernel: Vec<IntVector> = (r..t.rows()).map(|i| u.row(i).to_vec()).collect();
    hnf_lattice(&kernel, m.cols()).expect("kernel vectors have ambient length")
}

fn rank_of_echelon(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count()
}

/// Gaussian elimination over `Q`. Returns `None` when the system is
/// inconsistent; free variables are set to zero.
pub fn solve_exact(m: &IntMatrix, rhs: &RatVector) -> Result<Option<RatVector>> {
    if rhs.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} against {} rows",
            rhs.len(),
            m.rows()
        )));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            let mut row: Vec<BigRational> = m
                .row(i)
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut a, c);
    if a[pivots.len()..].iter().any(|row| !row[c].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); c];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][c].clone();
    }
    Ok(Some(RatVector(x)))
}

/// Reduced row echelon form over `Q` of the first `cols` columns (extra
/// columns are carried along). Returns the pivot columns.
fn rref(a: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let r = a.len();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        let Some(p) = (pr..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(pr, p);
        let inv = a[pr][col].recip();
        for x in a[pr].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[pr].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != pr && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        pr += 1;
        if pr == r {
            break;
        }
    }
    pivots
}

/// Inverse of a square rational matrix given by rows.
pub fn rational_inverse(rows: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("expected a square matrix".into()));
    }
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            ext
        })
        .collect();
    let pivots = rref(&mut a, n);
    if pivots.len() < n {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            dim: n,
        });
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), 1.into());
        assert_eq!(det(&IntMatrix::diagonal(&[3, 3, 3])).unwrap(), 27.into());
        assert_eq!(
            det(&mat(&[&[2, 0, 1], &[1, 2, 0], &[0, 1, 2]])).unwrap(),
            9.into()
        );
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])).unwrap(), (-1).into());
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])).unwrap(), 0.into());
        assert!(matches!(
            det(&mat(&[&[1, 2, 3]])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        assert_eq!(
            adjugate(&IntMatrix::diagonal(&[3, 3, 3])).unwrap(),
            IntMatrix::diagonal(&[9, 9, 9])
        );
        assert_eq!(
            adjugate(&IntMatrix::diagonal(&[2, 3])).unwrap(),
            IntMatrix::diagonal(&[3, 2])
        );
        assert!(adjugate(&mat(&[&[1, 2]])).is_err());
    }

    #[test]
    fn snf_examples() {
        let s = snf(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.diagonal(), ints(&[1, 6]));
        let z = IntMatrix::zeros(2, 2);
        let s = snf(&z);
        assert!(s.d.is_zero());
        let btau = mat(&[&[3, 0, 0], &[0, 3, 0], &[-2, -2, 1]]);
        let s = snf(&btau);
        assert_eq!(s.diagonal(), ints(&[1, 3, 3]));
        assert_eq!(s.u.mul(&btau).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn snf_rectangular() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12]]);
        let s = snf(&m);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.diagonal(), ints(&[2, 6]));
    }

    #[test]
    fn hnf_basis_examples() {
        let std: Vec<RatVector> = (0..3).map(|i| RatVector::unit(3, i)).collect();
        assert_eq!(hnf_basis(&std, 3).unwrap(), std);

        let mut gens = std.clone();
        gens.push(RatVector::from_fractions(&[(1, 3), (1, 3), (1, 3)]));
        let b = hnf_basis(&gens, 3).unwrap();
        assert_eq!(
            b,
            vec![
                RatVector::from_fractions(&[(1, 3), (1, 3), (1, 3)]),
                RatVector::from_fractions(&[(0, 1), (1, 1), (0, 1)]),
                RatVector::from_fractions(&[(0, 1), (0, 1), (1, 1)]),
            ]
        );

        let even = [
            RatVector::from_fractions(&[(2, 1), (0, 1)]),
            RatVector::from_fractions(&[(0, 1), (2, 1)]),
            RatVector::from_fractions(&[(1, 1), (1, 1)]),
        ];
        assert_eq!(
            hnf_basis(&even, 2).unwrap(),
            vec![
                RatVector::from_fractions(&[(1, 1), (1, 1)]),
                RatVector::from_fractions(&[(0, 1), (2, 1)]),
            ]
        );

        let deficient = [RatVector::from_fractions(&[(1, 1), (1, 1)])];
        assert_eq!(
            hnf_basis(&deficient, 2),
            Err(Error::RankDeficient { rank: 1, dim: 2 })
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(integer_kernel(&IntMatrix::identity(3)).is_empty());

        let k = integer_kernel(&mat(&[&[1, 1, 1]]));
        assert_eq!(k.len(), 2);
        // (1,-1,0) is in the span
        let target = ints(&[1, -1, 0]);
        let span = hnf_lattice(&[k.clone(), vec![target]].concat(), 3).unwrap();
        assert_eq!(span, k);

        // differences of rows of A = [[1,0,0],[0,1,0],[2,2,3]]
        let diffs = mat(&[&[-1, 1, 0], &[1, 2, 3]]);
        assert_eq!(integer_kernel(&diffs), vec![ints(&[1, 1, -1])]);
    }

    #[test]
    fn solve_examples() {
        let rhs = RatVector::from_fractions(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(
            solve_exact(&IntMatrix::identity(3), &rhs).unwrap(),
            Some(rhs.clone())
        );
        let ones = RatVector::from_fractions(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(
            solve_exact(&IntMatrix::diagonal(&[3, 3, 3]), &ones).unwrap(),
            Some(RatVector::from_fractions(&[(1, 3), (1, 3), (1, 3)]))
        );
        let a = mat(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]);
        assert_eq!(
            solve_exact(&a, &ones).unwrap(),
            Some(RatVector::from_fractions(&[(1, 1), (1, 1), (-1, 1)]))
        );
        let singular = mat(&[&[1, 1], &[1, 1]]);
        let rhs = RatVector::from_fractions(&[(1, 1), (2, 1)]);
        assert_eq!(solve_exact(&singular, &rhs).unwrap(), None);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("2/6").unwrap().to_string(), "1/3");
        assert_eq!(parse_rational("-4/2").unwrap().to_string(), "-2");
        assert_eq!(parse_rational("3/-9").unwrap().to_string(), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let a = mat(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]);
        let rows: Vec<Vec<BigRational>> = a
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = rational_inverse(&rows).unwrap();
        assert_eq!(inv[2][0], BigRational::new((-2).into(), 3.into()));
        assert_eq!(inv[2][2], BigRational::new(1.into(), 3.into()));
    }
}
