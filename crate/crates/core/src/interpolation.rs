//! Monomial bases and the linear conditions for vanishing to order m.
//!
//! Monomials of a fixed degree are listed in graded-lex order: lexicographic
//! on the exponent vector, largest first, so degree 2 in three variables is
//! x0², x0x1, x0x2, x1², x1x2, x2².
//!
//! A point P with first nonzero coordinate j (where P_j = 1) is moved to
//! (1:0:…:0) by x_j = y_j, x_l = P_l·y_j + y_l for l ≠ j. A form vanishes to
//! order m at P iff every coefficient of y_j^(d−|γ|)·y^γ with |γ| < m and
//! γ_j = 0 vanishes after the substitution. That coefficient is
//! Σ_α C(α,γ)·P^(α−γ)·c_α, the Hasse derivative D^γ f evaluated at P, so each
//! point contributes C(N+m−1, N) rows and the conditions hold in every
//! characteristic.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::configs::{PointConfiguration, ProjectivePoint};
use crate::exactla::{FieldMatrix, LinalgError};
use crate::fields::{FieldElement, FieldSpec};

pub const DEFAULT_MAX_DEGREE: u32 = 64;
pub const DEFAULT_MAX_MULTIPLICITY: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("degree {value} exceeds the cap of {cap} (raise it with a larger degree cap)")]
    DegreeCap { value: u32, cap: u32 },
    #[error(
        "multiplicity {value} exceeds the cap of {cap} (raise it with a larger multiplicity cap)"
    )]
    MultiplicityCap { value: u32, cap: u32 },
    #[error("matrix dump line {line}: {message}")]
    Dump { line: usize, message: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Resource limits for matrix construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_degree: u32,
    pub max_multiplicity: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree: DEFAULT_MAX_DEGREE,
            max_multiplicity: DEFAULT_MAX_MULTIPLICITY,
        }
    }
}

impl Caps {
    pub fn check(&self, m: u32, d: u32) -> Result<(), InterpolationError> {
        if m == 0 {
            return Err(InterpolationError::ZeroMultiplicity);
        }
        if m > self.max_multiplicity {
            return Err(InterpolationError::MultiplicityCap {
                value: m,
                cap: self.max_multiplicity,
            });
        }
        if d > self.max_degree {
            return Err(InterpolationError::DegreeCap {
                value: d,
                cap: self.max_degree,
            });
        }
        Ok(())
    }
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        MultiIndex { exponents, degree }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    /// True iff `other` divides this monomial.
    pub fn divisible_by(&self, other: &MultiIndex) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a >= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.divisible_by(other).then(|| {
            MultiIndex::new(
                self.exponents
                    .iter()
                    .zip(&other.exponents)
                    .map(|(a, b)| a - b)
                    .collect(),
            )
        })
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn push_degree(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == nvars {
        prefix.push(d);
        out.push(MultiIndex::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e);
        push_degree(nvars, d - e, prefix, out);
        prefix.pop();
    }
}

/// Exponent vectors of degree `d` in `nvars` variables, graded-lex order.
pub fn monomials(nvars: usize, d: u32) -> Vec<MultiIndex> {
    if nvars == 0 {
        return if d == 0 {
            vec![MultiIndex::zero(0)]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    push_degree(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// All degree-d monomials in the N+1 coordinates of P^N.
pub fn monomial_basis(dim: usize, d: u32) -> Vec<MultiIndex> {
    monomials(dim + 1, d)
}

/// Exponent vectors of degree at most `max_degree`, by degree then graded-lex.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|d| monomials(nvars, d)).collect()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_u128(n: u32, k: u32) -> Option<u128> {
    let k = k.min(n - k) as u128;
    (0..k).try_fold(1u128, |acc, i| {
        Some(acc.checked_mul(n as u128 - i)? / (i + 1))
    })
}

/// Π_j C(α_j, β_j): the coefficient of x^(α−β) in D^β x^α.
pub fn hasse_coefficient(alpha: &MultiIndex, beta: &MultiIndex) -> BigUint {
    alpha
        .exponents
        .iter()
        .zip(&beta.exponents)
        .map(|(&a, &b)| binomial(a as u64, b as u64))
        .product()
}

/// s · C(N+m−1, N), the number of linear conditions imposed by mZ.
pub fn count_conditions(dim: usize, m: u32, s: usize) -> BigUint {
    if m == 0 {
        return BigUint::default();
    }
    binomial(dim as u64 + m as u64 - 1, dim as u64) * BigUint::from(s)
}

/// Least d with C(d+N, N) > s · C(N+m−1, N). At this degree there are more
/// monomials than conditions, so α(mZ) never exceeds it.
pub fn expected_alpha_bound(dim: usize, m: u32, s: usize) -> u32 {
    let conditions = count_conditions(dim, m, s);
    (0u32..)
        .find(|&d| binomial(d as u64 + dim as u64, dim as u64) > conditions)
        .expect("monomial count is unbounded")
}

/// Row label: point index and derivative multi-index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionRow {
    pub point: usize,
    pub derivative: MultiIndex,
}

/// The interpolation matrix of mZ in degree d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionMatrix {
    pub matrix: FieldMatrix,
    pub rows: Vec<ConditionRow>,
    pub cols: Vec<MultiIndex>,
    pub dim: usize,
    pub m: u32,
    pub d: u32,
    pub s: usize,
}

impl ConditionMatrix {
    /// Text dump: a header `N m d s rows cols`, then one line of
    /// space-separated scalars per row.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {} {}\n",
            self.dim,
            self.m,
            self.d,
            self.s,
            self.matrix.rows(),
            self.matrix.cols()
        );
        for r in 0..self.matrix.rows() {
            let line: Vec<String> = self.matrix.row(r).iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Header fields of a matrix dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DumpHeader {
    pub dim: usize,
    pub m: u32,
    pub d: u32,
    pub s: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Parse a dump produced by [`ConditionMatrix::dump`].
pub fn parse_dump(
    text: &str,
    field: FieldSpec,
) -> Result<(DumpHeader, FieldMatrix), InterpolationError> {
    let err = |line: usize, message: String| InterpolationError::Dump { line, message };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty dump".into()))?;
    let nums = header
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| err(1, format!("bad header field {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let [dim, m, d, s, rows, cols] = nums[..] else {
        return Err(err(
            1,
            format!("expected 6 header fields, found {}", nums.len()),
        ));
    };
    let header = DumpHeader {
        dim,
        m: m as u32,
        d: d as u32,
        s,
        rows,
        cols,
    };
    let mut data = Vec::with_capacity(rows);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                field
                    .parse_element(t)
                    .map_err(|e| err(lineno, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != cols {
            return Err(err(
                lineno,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(err(
            rows + 2,
            format!("expected {rows} rows, found {}", data.len()),
        ));
    }
    let matrix = if rows == 0 {
        FieldMatrix::zeros(field, 0, cols)
    } else {
        FieldMatrix::from_rows(field, data)?
    };
    Ok((header, matrix))
}

/// `table[l][e] = P_l^e` for e ≤ d.
fn power_table(p: &ProjectivePoint, d: u32) -> Vec<Vec<FieldElement>> {
    p.coords()
        .iter()
        .map(|c| {
            let mut row = Vec::with_capacity(d as usize + 1);
            let mut acc = c.spec().one();
            for _ in 0..=d {
                row.push(acc.clone());
                acc = acc.mul(c).expect("same field");
            }
            row
        })
        .collect()
}

fn condition_row(
    field: FieldSpec,
    powers: &[Vec<FieldElement>],
    beta: &MultiIndex,
    cols: &[MultiIndex],
) -> Vec<FieldElement> {
    cols.iter()
        .map(|alpha| {
            let mut coeff = Some(1u128);
            let mut value = field.one();
            for (l, (&a, &b)) in alpha.exponents.iter().zip(&beta.exponents).enumerate() {
                if b > a {
                    return field.zero();
                }
                coeff = coeff.and_then(|c| c.checked_mul(binomial_u128(a, b)?));
                let e = (a - b) as usize;
                if !powers[l][e].is_one() {
                    value = value.mul(&powers[l][e]).expect("same field");
                }
            }
            let coeff = match coeff {
                Some(1) => return value,
                Some(c) => c.into(),
                None => hasse_coefficient(alpha, beta).into(),
            };
            value.mul(&field.from_bigint(&coeff)).expect("same field")
        })
        .collect()
}

fn assemble(
    z: &PointConfiguration,
    m: u32,
    d: u32,
    derivatives: impl Fn(&ProjectivePoint) -> Vec<MultiIndex> + Sync,
) -> Result<ConditionMatrix, InterpolationError> {
    let field = z.field();
    let cols = monomial_basis(z.dim(), d);
    let blocks: Vec<Vec<(ConditionRow, Vec<FieldElement>)>> = z
        .points()
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let powers = power_table(p, d);
            derivatives(p)
                .into_iter()
                .map(|beta| {
                    let row = condition_row(field, &powers, &beta, &cols);
                    (
                        ConditionRow {
                            point: i,
                            derivative: beta,
                        },
                        row,
                    )
                })
                .collect()
        })
        .collect();
    let (rows, data): (Vec<_>, Vec<_>) = blocks.into_iter().flatten().unzip();
    let ncols = cols.len();
    let matrix = if data.is_empty() {
        FieldMatrix::zeros(field, 0, ncols)
    } else {
        FieldMatrix::from_rows(field, data)?
    };
    Ok(ConditionMatrix {
        matrix,
        rows,
        cols,
        dim: z.dim(),
        m,
        d,
        s: z.len(),
    })
}

/// Derivative multi-indices for one point: |γ| < m with no exponent in the
/// point's chart coordinate.
pub fn chart_derivatives(nvars: usize, chart: usize, m: u32) -> Vec<MultiIndex> {
    monomials_up_to(nvars - 1, m - 1)
        .into_iter()
        .map(|g| {
            let mut e = g.exponents;
            e.insert(chart, 0);
            MultiIndex::new(e)
        })
        .collect()
}

/// The condition matrix of mZ in degree d, with default caps.
pub fn build_matrix(
    z: &PointConfiguration,
    m: u32,
    d: u32,
) -> Result<ConditionMatrix, InterpolationError> {
    build_matrix_with_caps(z, m, d, Caps::default())
}

pub fn build_matrix_with_caps(
    z: &PointConfiguration,
    m: u32,
    d: u32,
    caps: Caps,
) -> Result<ConditionMatrix, InterpolationError> {
    caps.check(m, d)?;
    let nvars = z.dim() + 1;
    assemble(z, m, d, |p| chart_derivatives(nvars, p.chart(), m))
}

/// Redundant variant with a row for every Hasse derivative D^β, |β| < m, in
/// all N+1 variables: C(N+m, N+1) rows per point spanning the same row space
/// as [`build_matrix`].
pub fn build_hasse_matrix(
    z: &PointConfiguration,
    m: u32,
    d: u32,
) -> Result<ConditionMatrix, InterpolationError> {
    Caps::default().check(m, d)?;
    let nvars = z.dim() + 1;
    assemble(z, m, d, |_| monomials_up_to(nvars, m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::fermat12_configuration;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis(2, 3).len(), 10);
        assert_eq!(monomial_basis(3, 0), vec![mi(&[0, 0, 0, 0])]);
        assert_eq!(monomial_basis(2, 8).len(), 45);
        let expect: Vec<MultiIndex> = [
            [2, 0, 0],
            [1, 1, 0],
            [1, 0, 1],
            [0, 2, 0],
            [0, 1, 1],
            [0, 0, 2],
        ]
        .iter()
        .map(|e| mi(e))
        .collect();
        assert_eq!(monomial_basis(2, 2), expect);
    }

    #[test]
    fn hasse_examples() {
        assert_eq!(
            hasse_coefficient(&mi(&[2, 0, 1]), &mi(&[1, 0, 1])),
            BigUint::from(2u32)
        );
        assert_eq!(
            hasse_coefficient(&mi(&[5, 3, 1]), &mi(&[0, 0, 0])),
            BigUint::one()
        );
        assert_eq!(
            hasse_coefficient(&mi(&[1, 0, 0]), &mi(&[0, 2, 0])),
            BigUint::default()
        );
    }

    #[test]
    fn condition_counts() {
        assert_eq!(count_conditions(2, 2, 12), BigUint::from(36u32));
        assert_eq!(count_conditions(3, 1, 8), BigUint::from(8u32));
        assert_eq!(count_conditions(3, 2, 1), BigUint::from(4u32));
        assert_eq!(expected_alpha_bound(2, 1, 3), 2);
        assert_eq!(expected_alpha_bound(2, 2, 12), 8);
        // k(m+N−1)−N+1 with k=3, m=2, N=3
        assert!(expected_alpha_bound(3, 2, 27) <= 10);
    }

    #[test]
    fn coordinate_point_evaluation() {
        let f = FieldSpec::Rational;
        let p = ProjectivePoint::new(vec![f.one(), f.zero(), f.zero()]).unwrap();
        let z = PointConfiguration::new(2, f, vec![p], "").unwrap();
        let c = build_matrix(&z, 1, 2).unwrap();
        assert_eq!(c.matrix.rows(), 1);
        let row: Vec<FieldElement> = c.matrix.row(0).to_vec();
        let expect: Vec<FieldElement> = [1, 0, 0, 0, 0, 0].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(row, expect);
    }

    #[test]
    fn fermat_m2_d8_shape() {
        let z = fermat12_configuration(FieldSpec::Eisenstein).unwrap();
        let c = build_matrix(&z, 2, 8).unwrap();
        assert_eq!((c.matrix.rows(), c.matrix.cols()), (36, 45));
        assert_eq!(c.rows.len(), 36);
        let h = build_hasse_matrix(&z, 2, 8).unwrap();
        assert_eq!(h.matrix.rows(), 48);
    }

    #[test]
    fn caps_are_enforced() {
        let z = fermat12_configuration(FieldSpec::Prime(7)).unwrap();
        assert_eq!(
            build_matrix(&z, 17, 20).unwrap_err(),
            InterpolationError::MultiplicityCap { value: 17, cap: 16 }
        );
        assert_eq!(
            build_matrix(&z, 2, 65).unwrap_err(),
            InterpolationError::DegreeCap { value: 65, cap: 64 }
        );
        assert_eq!(
            build_matrix(&z, 0, 3).unwrap_err(),
            InterpolationError::ZeroMultiplicity
        );
        let caps = Caps {
            max_degree: 70,
            max_multiplicity: 16,
        };
        assert_eq!(
            build_matrix_with_caps(&z, 1, 65, caps)
                .unwrap()
                .matrix
                .cols(),
            2211
        );
    }

    #[test]
    fn dump_round_trip() {
        let z = fermat12_configuration(FieldSpec::Eisenstein).unwrap();
        let c = build_matrix(&z, 2, 3).unwrap();
        let text = c.dump();
        assert!(text.starts_with("2 2 3 12 36 10\n"));
        let (h, m) = parse_dump(&text, FieldSpec::Eisenstein).unwrap();
        assert_eq!((h.rows, h.cols, h.s), (36, 10, 12));
        assert_eq!(m, c.matrix);
        assert!(matches!(
            parse_dump("2 2 3 12 1 2\n1 2 3\n", FieldSpec::Rational),
            Err(InterpolationError::Dump { line: 2, .. })
        ));
    }
}
