//! Generator matrices of `[n + 1, t]` linear codes over `F_p` and the two
//! deterministic rules for picking public combination coefficients
//! `b_i` with `sum b_i g_i = g_0`.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding;
use crate::field::{FieldElement, FieldError, Modulus};

/// `verify_rank` enumerates all `C(n + 1, t)` column subsets, so it is
/// refused above this many shareholders.
pub const RANK_CHECK_MAX_N: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("identity {0} appears more than once")]
    DuplicateIdentity(BigUint),
    #[error("identity at position {0} is zero")]
    ZeroIdentity(usize),
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("generator matrix carries no identities")]
    NotVandermonde,
    #[error("{got} participants is fewer than the threshold {threshold}")]
    TooFew { got: usize, threshold: usize },
    #[error("participant index {0} appears more than once")]
    RepeatedIndex(usize),
    #[error("participant index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("linear system is singular")]
    Singular,
    #[error("every admissible choice of fixed coefficients produced a zero coefficient")]
    ZeroCoefficient,
    #[error("rank check refused for n = {0} > {RANK_CHECK_MAX_N}")]
    RankCheckTooLarge(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Public `t x (n + 1)` generator matrix, stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    t: usize,
    modulus: Modulus,
    columns: Vec<Vec<FieldElement>>,
    identities: Option<Vec<FieldElement>>,
}

impl GeneratorMatrix {
    /// Column `i` is `(1, U_i, U_i^2, ..., U_i^(t-1))` for identities
    /// `U_0..U_n`.
    pub fn vandermonde(identities: &[FieldElement], t: usize) -> Result<Self, CodeError> {
        let Some(first) = identities.first() else {
            return Err(CodeError::BadDimensions("no identities".into()));
        };
        let modulus = Arc::clone(first.modulus());
        let n = identities.len() - 1;
        if t < 2 || t > n {
            return Err(CodeError::BadDimensions(format!(
                "need 2 <= t <= n, got t = {t}, n = {n}"
            )));
        }
        let mut seen = HashSet::with_capacity(identities.len());
        for (pos, u) in identities.iter().enumerate() {
            if u.modulus() != &modulus {
                return Err(CodeError::BadDimensions(
                    "identities use different moduli".into(),
                ));
            }
            if u.is_zero() {
                return Err(CodeError::ZeroIdentity(pos));
            }
            if !seen.insert(u.value().clone()) {
                return Err(CodeError::DuplicateIdentity(u.value().clone()));
            }
        }
        let columns = identities
            .iter()
            .map(|u| {
                let mut column = Vec::with_capacity(t);
                let mut power = FieldElement::one(&modulus);
                for _ in 0..t {
                    column.push(power.clone());
                    power = &power * u;
                }
                column
            })
            .collect();
        Ok(Self {
            t,
            modulus,
            columns,
            identities: Some(identities.to_vec()),
        })
    }

    /// Arbitrary user-supplied matrix. Columns must be nonzero and of height
    /// `t`; the rank condition is not checked here (see [`Self::verify_rank`]).
    pub fn from_columns(columns: Vec<Vec<FieldElement>>, t: usize) -> Result<Self, CodeError> {
        if columns.len() < 3 {
            return Err(CodeError::BadDimensions(
                "need at least n + 1 = 3 columns".into(),
            ));
        }
        let n = columns.len() - 1;
        if t < 2 || t > n {
            return Err(CodeError::BadDimensions(format!(
                "need 2 <= t <= n, got t = {t}, n = {n}"
            )));
        }
        let modulus = Arc::clone(columns[0][0].modulus());
        for (i, column) in columns.iter().enumerate() {
            if column.len() != t {
                return Err(CodeError::BadDimensions(format!(
                    "column {i} has height {} instead of {t}",
                    column.len()
                )));
            }
            if column.iter().any(|x| x.modulus() != &modulus) {
                return Err(CodeError::BadDimensions("mixed moduli".into()));
            }
            if column.iter().all(FieldElement::is_zero) {
                return Err(CodeError::BadDimensions(format!("column {i} is zero")));
            }
        }
        Ok(Self {
            t,
            modulus,
            columns,
            identities: None,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of shareholder columns (excludes `g_0`).
    pub fn n(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn column(&self, i: usize) -> &[FieldElement] {
        &self.columns[i]
    }

    pub fn identities(&self) -> Option<&[FieldElement]> {
        self.identities.as_deref()
    }

    pub fn is_vandermonde(&self) -> bool {
        self.identities.is_some()
    }

    /// True iff every `t` columns are linearly independent mod `p`.
    /// Exponential in `n`; refused above [`RANK_CHECK_MAX_N`].
    pub fn verify_rank(&self) -> Result<bool, CodeError> {
        if self.n() > RANK_CHECK_MAX_N {
            return Err(CodeError::RankCheckTooLarge(self.n()));
        }
        let total = self.columns.len();
        let mut subset: Vec<usize> = (0..self.t).collect();
        loop {
            let rows = (0..self.t)
                .map(|r| subset.iter().map(|&c| self.columns[c][r].clone()).collect())
                .collect::<Vec<Vec<_>>>();
            if determinant(rows, &self.modulus).is_zero() {
                return Ok(false);
            }
            // Advance to the next t-combination in lexicographic order.
            let mut k = self.t;
            loop {
                if k == 0 {
                    return Ok(true);
                }
                k -= 1;
                if subset[k] < total - self.t + k {
                    break;
                }
            }
            subset[k] += 1;
            for j in k + 1..self.t {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    pub fn to_wire(&self) -> GeneratorWire {
        GeneratorWire {
            t: self.t,
            n: self.n(),
            p: self.modulus.as_ref().clone(),
            identities: self
                .identities
                .as_ref()
                .map(|ids| ids.iter().map(|u| u.value().clone()).collect()),
            columns: self
                .columns
                .iter()
                .flat_map(|c| c.iter().map(|x| x.value().clone()))
                .collect(),
        }
    }

    pub fn from_wire(wire: &GeneratorWire) -> Result<Self, CodeError> {
        let modulus: Modulus = Arc::new(wire.p.clone());
        if let Some(ids) = &wire.identities {
            let ids: Vec<_> = ids
                .iter()
                .map(|u| FieldElement::new(u.clone(), &modulus))
                .collect();
            let built = Self::vandermonde(&ids, wire.t)?;
            if built.n() != wire.n || built.to_wire().columns != wire.columns {
                return Err(CodeError::BadDimensions(
                    "columns disagree with the identity list".into(),
                ));
            }
            return Ok(built);
        }
        if wire.t == 0 || wire.columns.len() != wire.t * (wire.n + 1) {
            return Err(CodeError::BadDimensions(format!(
                "expected {} column entries",
                wire.t * (wire.n + 1)
            )));
        }
        let columns = wire
            .columns
            .chunks(wire.t)
            .map(|c| {
                c.iter()
                    .map(|x| FieldElement::new(x.clone(), &modulus))
                    .collect()
            })
            .collect();
        Self::from_columns(columns, wire.t)
    }

    /// SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        encoding::digest_of(&self.to_wire())
    }
}

/// Serialized generator matrix; `columns` is column-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorWire {
    pub t: usize,
    pub n: usize,
    #[serde(with = "encoding::decimal")]
    pub p: BigUint,
    #[serde(with = "encoding::decimal_vec_opt")]
    pub identities: Option<Vec<BigUint>>,
    #[serde(with = "encoding::decimal_vec")]
    pub columns: Vec<BigUint>,
}

/// Sorted, duplicate-free set of shareholder indices `I_m` drawn from `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParticipantSet(Vec<usize>);

impl ParticipantSet {
    pub fn new(indices: &[usize], n: usize) -> Result<Self, CodeError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(CodeError::RepeatedIndex(pair[0]));
            }
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i == 0 || i > n) {
            return Err(CodeError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self(sorted))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    fn position(&self, index: usize) -> Option<usize> {
        self.0.binary_search(&index).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientRule {
    Lagrange,
    FixOnes,
}

/// Public coefficients `b_i` for one participant set, aligned with the
/// sorted indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSet {
    participants: ParticipantSet,
    coefficients: Vec<FieldElement>,
    rule: CoefficientRule,
}

impl CoefficientSet {
    pub fn participants(&self) -> &ParticipantSet {
        &self.participants
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    pub fn rule(&self) -> CoefficientRule {
        self.rule
    }

    pub fn get(&self, index: usize) -> Option<&FieldElement> {
        self.participants
            .position(index)
            .map(|pos| &self.coefficients[pos])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &FieldElement)> {
        self.participants
            .indices()
            .iter()
            .copied()
            .zip(self.coefficients.iter())
    }

    /// `sum b_i g_i` as a column vector.
    pub fn combine(&self, g: &GeneratorMatrix) -> Vec<FieldElement> {
        let mut acc = vec![FieldElement::zero(g.modulus()); g.t()];
        for (index, b) in self.iter() {
            for (slot, entry) in acc.iter_mut().zip(g.column(index)) {
                *slot = &*slot + &(b * entry);
            }
        }
        acc
    }

    /// Checks `sum b_i g_i = g_0` and that no `b_i` is zero.
    pub fn is_valid_for(&self, g: &GeneratorMatrix) -> bool {
        self.coefficients.iter().all(|b| !b.is_zero()) && self.combine(g) == g.column(0)
    }

    pub fn to_wire(&self) -> CoefficientWire {
        CoefficientWire {
            rule: self.rule,
            participants: self.participants.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|b| b.value().clone())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientWire {
    pub rule: CoefficientRule,
    pub participants: ParticipantSet,
    #[serde(with = "encoding::decimal_vec")]
    pub coefficients: Vec<BigUint>,
}

fn check_set_size(g: &GeneratorMatrix, set: &ParticipantSet) -> Result<(), CodeError> {
    if set.len() < g.t() {
        return Err(CodeError::TooFew {
            got: set.len(),
            threshold: g.t(),
        });
    }
    if let Some(&bad) = set.indices().iter().find(|&&i| i == 0 || i > g.n()) {
        return Err(CodeError::IndexOutOfRange {
            index: bad,
            n: g.n(),
        });
    }
    Ok(())
}

/// Inverts every element with one field inversion (Montgomery's trick).
pub fn batch_inverse(values: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
    let Some(first) = values.first() else {
        return Ok(Vec::new());
    };
    let mut prefix = Vec::with_capacity(values.len());
    let mut acc = FieldElement::one(first.modulus());
    for v in values {
        if v.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        prefix.push(acc.clone());
        acc = &acc * v;
    }
    let mut inv = acc.inverse()?;
    let mut out = vec![inv.clone(); values.len()];
    for i in (0..values.len()).rev() {
        out[i] = &inv * &prefix[i];
        inv = &inv * &values[i];
    }
    Ok(out)
}

/// `b_i = prod_{j in I_m, j != i} (U_0 - U_j) / (U_i - U_j)`.
pub fn lagrange_coefficients(
    g: &GeneratorMatrix,
    set: &ParticipantSet,
) -> Result<CoefficientSet, CodeError> {
    let ids = g.identities().ok_or(CodeError::NotVandermonde)?;
    check_set_size(g, set)?;
    let u0 = &ids[0];
    let m = set.len();

    let offsets: Vec<FieldElement> = set.indices().iter().map(|&j| u0 - &ids[j]).collect();
    let mut numerator_all = FieldElement::one(g.modulus());
    for d in &offsets {
        numerator_all = &numerator_all * d;
    }

    let mut denominators = Vec::with_capacity(2 * m);
    for (a, &i) in set.indices().iter().enumerate() {
        let mut den = FieldElement::one(g.modulus());
        for (b, &j) in set.indices().iter().enumerate() {
            if a != b {
                den = &den * &(&ids[i] - &ids[j]);
            }
        }
        denominators.push(den);
    }
    denominators.extend(offsets.iter().cloned());
    let inverses = batch_inverse(&denominators)?;

    let coefficients = (0..m)
        .map(|a| &(&numerator_all * &inverses[m + a]) * &inverses[a])
        .collect();
    Ok(CoefficientSet {
        participants: set.clone(),
        coefficients,
        rule: CoefficientRule::Lagrange,
    })
}

/// A single Lagrange coefficient in `O(m)`; equals the matching entry of
/// [`lagrange_coefficients`].
pub fn lagrange_coefficient(
    g: &GeneratorMatrix,
    set: &ParticipantSet,
    index: usize,
) -> Result<FieldElement, CodeError> {
    let ids = g.identities().ok_or(CodeError::NotVandermonde)?;
    check_set_size(g, set)?;
    if !set.contains(index) {
        return Err(CodeError::IndexOutOfRange { index, n: g.n() });
    }
    let mut num = FieldElement::one(g.modulus());
    let mut den = FieldElement::one(g.modulus());
    for &j in set.indices().iter().filter(|&&j| j != index) {
        num = &num * &(&ids[0] - &ids[j]);
        den = &den * &(&ids[index] - &ids[j]);
    }
    Ok(&num * &den.inverse()?)
}

/// Fixes the first `m - t` coefficients (in ascending index order) to a
/// constant and solves the remaining `t x t` system by elimination.
///
/// The constant starts at 1; if a solved coefficient comes out zero the
/// constant is bumped to 2, 3, ... so the result stays deterministic.
pub fn solve_coefficients_general(
    g: &GeneratorMatrix,
    set: &ParticipantSet,
) -> Result<CoefficientSet, CodeError> {
    check_set_size(g, set)?;
    let t = g.t();
    let (fixed, solved) = set.indices().split_at(set.len() - t);
    let modulus = g.modulus();

    let rows: Vec<Vec<FieldElement>> = (0..t)
        .map(|r| solved.iter().map(|&i| g.column(i)[r].clone()).collect())
        .collect();
    let mut fixed_sum = vec![FieldElement::zero(modulus); t];
    for &i in fixed {
        for (slot, entry) in fixed_sum.iter_mut().zip(g.column(i)) {
            *slot = &*slot + entry;
        }
    }

    let mut constant = BigUint::one();
    while &constant < modulus.as_ref() {
        let c = FieldElement::new(constant.clone(), modulus);
        let rhs: Vec<FieldElement> = g
            .column(0)
            .iter()
            .zip(&fixed_sum)
            .map(|(g0, f)| g0 - &(&c * f))
            .collect();
        let tail = solve_linear_system(rows.clone(), rhs)?;
        if tail.iter().all(|b| !b.is_zero()) {
            let mut coefficients = vec![c; fixed.len()];
            coefficients.extend(tail);
            return Ok(CoefficientSet {
                participants: set.clone(),
                coefficients,
                rule: CoefficientRule::FixOnes,
            });
        }
        if fixed.is_empty() {
            break;
        }
        constant += 1u32;
    }
    Err(CodeError::ZeroCoefficient)
}

/// The rule every participant applies: Lagrange when identities are known,
/// otherwise fix-ones elimination.
pub fn canonical_coefficients(
    g: &GeneratorMatrix,
    set: &ParticipantSet,
) -> Result<CoefficientSet, CodeError> {
    if g.is_vandermonde() {
        lagrange_coefficients(g, set)
    } else {
        solve_coefficients_general(g, set)
    }
}

/// Gauss-Jordan elimination on a square system `rows * x = rhs` mod `p`.
pub fn solve_linear_system(
    mut rows: Vec<Vec<FieldElement>>,
    mut rhs: Vec<FieldElement>,
) -> Result<Vec<FieldElement>, CodeError> {
    let size = rows.len();
    if rhs.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(CodeError::BadDimensions("system is not square".into()));
    }
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(CodeError::Singular)?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = rows[col][col].inverse()?;
        for x in &mut rows[col][col..] {
            *x = &*x * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        let pivot_row = rows[col].clone();
        for r in 0..size {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for (x, y) in rows[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = &*x - &(&factor * y);
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    Ok(rhs)
}

/// Determinant mod `p` by elimination.
pub fn determinant(mut rows: Vec<Vec<FieldElement>>, modulus: &Modulus) -> FieldElement {
    let size = rows.len();
    let mut det = FieldElement::one(modulus);
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return FieldElement::zero(modulus);
        };
        if pivot != col {
            rows.swap(col, pivot);
            det = -&det;
        }
        det = &det * &rows[col][col];
        let inv = rows[col][col].inverse().expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = &*x - &(&factor * y);
            }
        }
    }
    det
}
