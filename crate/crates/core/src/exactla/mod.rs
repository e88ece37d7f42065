//! Exact rank and kernel computation.
//!
//! Matrices over Q and Q(ω) are cleared of denominators row by row and
//! reduced with fraction-free (Bareiss) elimination over Z or Z[ω]. Prime
//! fields use ordinary Gaussian elimination on `u64` residues. Integer
//! matrices can also be ranked modulo several primes at once; since reduction
//! mod p never raises the rank, agreement among the primes is reported as a
//! consensus value and disagreement as an explicit failure.
//!
//! Pivot rule, shared by every path so kernel certificates are reproducible:
//! columns are scanned left to right; within a column the pivot is the
//! nonzero entry of largest absolute value (largest norm over Z[ω]), ties
//! going to the lowest row. Over F_p there is no size, so the first nonzero
//! entry wins.

mod bareiss;
mod modular;
mod reconstruct;

use serde::Serialize;
use thiserror::Error;

use crate::fields::{FieldElement, FieldError, FieldSpec};

pub use bareiss::{EisensteinInt, IntMatrix};
pub use modular::{echelon_mod_p, modular_rank, multi_prime_rank, rank_mod_p};
pub use reconstruct::{modular_kernel_vector, rational_reconstruction, DEFAULT_MAX_PRIMES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modular ranks disagree: {}", fmt_ranks(.0))]
    ConsensusFailure(Vec<(u64, usize)>),
    #[error("consensus needs at least two primes, got {0}")]
    TooFewPrimes(usize),
    #[error("{0} is not a usable prime for this matrix")]
    BadPrime(u64),
    #[error("matrix over {0} cannot be reduced modulo primes")]
    NotReducible(FieldSpec),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn fmt_ranks(ranks: &[(u64, usize)]) -> String {
    ranks
        .iter()
        .map(|(p, r)| format!("rank {r} mod {p}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Dense row-major matrix over a single field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for x in row {
                if x.spec() != field {
                    return Err(FieldError::MixedFields(field, x.spec()).into());
                }
                data.push(x);
            }
        }
        Ok(FieldMatrix {
            field,
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("uniform rows")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.spec(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Appends the rows of `other` below this matrix.
    pub fn stack(&self, other: &FieldMatrix) -> Result<FieldMatrix, LinalgError> {
        if self.cols != other.cols || self.field != other.field {
            return Err(LinalgError::Shape(
                "stacked matrices must share columns and field".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix-vector product, computed entry by entry.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .try_fold(self.field.zero(), |acc, (a, x)| acc.add(&a.mul(x)?))
            })
            .collect::<Result<_, _>>()
            .map_err(Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "primes", rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    ModularConsensus(Vec<u64>),
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Exact => f.write_str("exact"),
            Provenance::ModularConsensus(ps) => {
                let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "modular-consensus({})", ps.join(";"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub kernel_dim: usize,
    /// One nonzero kernel vector when `kernel_dim > 0` (exact runs only).
    pub certificate: Option<Vec<FieldElement>>,
    pub field: FieldSpec,
    pub provenance: Provenance,
}

/// Echelon data shared by the exact paths: the pivot columns in order, and
/// for the first free column the kernel vector it determines.
pub(crate) struct Echelon {
    pub pivots: Vec<usize>,
    pub kernel: Option<Vec<FieldElement>>,
}

/// Exact rank, with one kernel vector (first free column set to one, other
/// free columns zero, scaled so its first nonzero entry is one).
pub fn rank_kernel(m: &FieldMatrix) -> RankResult {
    let echelon = match m.field {
        FieldSpec::Rational => bareiss::rational_echelon(m),
        FieldSpec::Eisenstein => bareiss::eisenstein_echelon(m),
        FieldSpec::Prime(p) => modular::field_echelon(m, p),
    };
    let rank = echelon.pivots.len();
    let certificate = echelon.kernel.map(|v| normalize_leading(&v));
    RankResult {
        rank,
        kernel_dim: m.cols - rank,
        certificate,
        field: m.field,
        provenance: Provenance::Exact,
    }
}

/// Scales `v` so its first nonzero entry is one.
pub fn normalize_leading(v: &[FieldElement]) -> Vec<FieldElement> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|x| x.mul(&inv).expect("same field")).collect()
        }
        None => v.to_vec(),
    }
}

/// Checks `m · v = 0` with a plain dot product per row, independent of the
/// elimination that produced `v`. Over Q and Q(ω) the products are taken on
/// the cleared integer rows and an integral multiple of `v`.
pub fn is_kernel_vector(m: &FieldMatrix, v: &[FieldElement]) -> bool {
    if v.len() != m.cols
        || v.iter().all(FieldElement::is_zero)
        || v.iter().any(|x| x.spec() != m.field)
    {
        return false;
    }
    if let Some(ok) = reconstruct::annihilates_exact(m, v) {
        return ok;
    }
    (0..m.rows).all(|r| {
        let mut acc = m.field.zero();
        for (a, x) in m.row(r).iter().zip(v) {
            if a.is_zero() || x.is_zero() {
                continue;
            }
            match a.mul(x).and_then(|t| acc.add(&t)) {
                Ok(s) => acc = s,
                Err(_) => return false,
            }
        }
        acc.is_zero()
    })
}

/// Integer image of a rational or Eisenstein matrix: each row is multiplied
/// by the lcm of its denominators and divided by its content. Row scaling
/// leaves rank and kernel unchanged.
pub fn clear_denominators(m: &FieldMatrix) -> Result<ClearedMatrix, LinalgError> {
    match m.field {
        FieldSpec::Rational => Ok(ClearedMatrix::Integer(bareiss::clear_rational(m))),
        FieldSpec::Eisenstein => Ok(ClearedMatrix::Eisenstein(bareiss::clear_eisenstein(m))),
        FieldSpec::Prime(_) => Err(LinalgError::NotReducible(m.field)),
    }
}

pub enum ClearedMatrix {
    Integer(IntMatrix),
    Eisenstein(Vec<Vec<EisensteinInt>>),
}

/// Rank of an integer matrix by Bareiss elimination.
pub fn integer_rank(m: &IntMatrix) -> usize {
    let mut rows = m.to_rows();
    bareiss::echelon_in_place(&mut rows, m.cols()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> FieldMatrix {
        FieldMatrix::from_i64_rows(FieldSpec::Rational, rows)
    }

    #[test]
    fn identity_has_full_rank() {
        for field in [
            FieldSpec::Rational,
            FieldSpec::Eisenstein,
            FieldSpec::Prime(7),
        ] {
            let m =
                FieldMatrix::from_i64_rows(field, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
            let r = rank_kernel(&m);
            assert_eq!((r.rank, r.kernel_dim), (3, 0), "{field}");
            assert!(r.certificate.is_none());
        }
    }

    #[test]
    fn visible_dependency() {
        let m = q(&[vec![1, 2], vec![2, 4]]);
        let r = rank_kernel(&m);
        assert_eq!((r.rank, r.kernel_dim), (1, 1));
        let v = r.certificate.unwrap();
        // proportional to (2, -1), leading entry normalized to one
        assert_eq!(
            v,
            vec![
                FieldSpec::Rational.one(),
                FieldSpec::Rational.parse_element("-1/2").unwrap()
            ]
        );
        assert!(is_kernel_vector(&m, &v));
    }

    #[test]
    fn zero_matrix_and_empty_shapes() {
        let r = rank_kernel(&FieldMatrix::zeros(FieldSpec::Rational, 2, 3));
        assert_eq!((r.rank, r.kernel_dim), (0, 3));
        let v = r.certificate.unwrap();
        assert!(v[0].is_one() && v[1].is_zero() && v[2].is_zero());
        let r = rank_kernel(&FieldMatrix::zeros(FieldSpec::Rational, 0, 2));
        assert_eq!(r.kernel_dim, 2);
    }

    #[test]
    fn eisenstein_dependency() {
        let f = FieldSpec::Eisenstein;
        let w = FieldSpec::omega();
        let one = f.one();
        // second row is ω times the first
        let m = FieldMatrix::from_rows(
            f,
            vec![
                vec![one.clone(), w.clone(), f.from_i64(3)],
                vec![
                    w.clone(),
                    w.mul(&w).unwrap(),
                    w.mul(&f.from_i64(3)).unwrap(),
                ],
            ],
        )
        .unwrap();
        let r = rank_kernel(&m);
        assert_eq!(r.rank, 1);
        let v = r.certificate.unwrap();
        assert!(is_kernel_vector(&m, &v));
        // (−ω, 1, 0) scaled so the leading entry is one
        assert!(v[0].is_one());
        assert_eq!(v[1], w.neg().inv().unwrap());
    }

    #[test]
    fn kernel_ignores_later_pivots() {
        // first free column is 1; column 2 is a pivot to its right
        let m = q(&[vec![1, 1, 0], vec![0, 0, 1], vec![2, 2, 5]]);
        let r = rank_kernel(&m);
        assert_eq!(r.rank, 2);
        let v = r.certificate.unwrap();
        assert!(is_kernel_vector(&m, &v));
        assert!(v[2].is_zero());
    }

    #[test]
    fn fractional_entries() {
        let f = FieldSpec::Rational;
        let e = |s: &str| f.parse_element(s).unwrap();
        let m = FieldMatrix::from_rows(
            f,
            vec![
                vec![e("1/2"), e("1/3"), e("1")],
                vec![e("3/2"), e("1"), e("3")],
            ],
        )
        .unwrap();
        let r = rank_kernel(&m);
        assert_eq!(r.rank, 1);
        assert!(is_kernel_vector(&m, &r.certificate.unwrap()));
    }

    #[test]
    fn kernel_check_rejects_non_kernel() {
        let m = q(&[vec![1, 2]]);
        let f = FieldSpec::Rational;
        assert!(!is_kernel_vector(&m, &[f.one(), f.one()]));
        assert!(!is_kernel_vector(&m, &[f.zero(), f.zero()]));
        assert!(is_kernel_vector(&m, &[f.from_i64(2), f.from_i64(-1)]));
    }
}
