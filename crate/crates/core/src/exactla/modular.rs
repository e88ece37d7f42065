//! Gaussian elimination on residues and the multi-prime rank consensus.

use rayon::prelude::*;

use super::bareiss::{
    clear_eisenstein, clear_rational, kernel_for_pivots, EisensteinInt, IntMatrix,
};
use super::{Echelon, FieldMatrix, LinalgError, Provenance, RankResult};
use crate::fields::{
    self, add_mod, inv_mod, mul_mod, reduce_bigint, sub_mod, FieldElement, FieldSpec,
};

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        mul_mod(a, b, p)
    }
}

/// Row echelon form modulo `p` in place (pivot rows scaled to leading one);
/// returns the pivot columns.
pub fn echelon_mod_p(rows: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(b) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, b);
        let inv = inv_mod(rows[r][c], p);
        for x in &mut rows[r][c..] {
            *x = mulm(*x, inv, p);
        }
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            let l = row[c];
            if l == 0 {
                continue;
            }
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = sub_mod(row[j], mulm(l, prow[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    echelon_mod_p(&mut rows, cols, p).len()
}

pub(crate) fn field_echelon(m: &FieldMatrix, p: u64) -> Echelon {
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| x.as_residue().expect("prime matrix").value())
                .collect()
        })
        .collect();
    let pivots = echelon_mod_p(&mut rows, m.cols(), p);
    let field = FieldSpec::Prime(p);
    let field_rows: Vec<Vec<FieldElement>> = rows[..pivots.len()]
        .iter()
        .map(|r| r.iter().map(|&x| field.from_i64(x as i64)).collect())
        .collect();
    let kernel = kernel_for_pivots(&field_rows, &pivots, m.cols(), field);
    Echelon { pivots, kernel }
}

fn check_primes(primes: &[u64]) -> Result<(), LinalgError> {
    if primes.len() < 2 {
        return Err(LinalgError::TooFewPrimes(primes.len()));
    }
    match primes
        .iter()
        .find(|&&p| !fields::is_prime(p) || p >= fields::MAX_PRIME)
    {
        Some(&p) => Err(LinalgError::BadPrime(p)),
        None => Ok(()),
    }
}

fn consensus(
    ranks: Vec<(u64, usize)>,
    cols: usize,
    field: FieldSpec,
) -> Result<RankResult, LinalgError> {
    let first = ranks[0].1;
    if ranks.iter().any(|&(_, r)| r != first) {
        return Err(LinalgError::ConsensusFailure(ranks));
    }
    Ok(RankResult {
        rank: first,
        kernel_dim: cols - first,
        certificate: None,
        field,
        provenance: Provenance::ModularConsensus(ranks.into_iter().map(|(p, _)| p).collect()),
    })
}

fn integer_ranks(m: &IntMatrix, primes: &[u64]) -> Vec<(u64, usize)> {
    primes
        .par_iter()
        .map(|&p| {
            let rows = (0..m.rows())
                .map(|r| m.row(r).iter().map(|x| reduce_bigint(x, p)).collect())
                .collect();
            (p, rank_mod_p(rows, m.cols(), p))
        })
        .collect()
}

/// Rank of an integer matrix modulo each prime. Agreement yields a
/// consensus result; the value is a lower bound for the rank over Q and
/// equals it unless every prime divides the same nonzero maximal minor.
pub fn multi_prime_rank(m: &IntMatrix, primes: &[u64]) -> Result<RankResult, LinalgError> {
    check_primes(primes)?;
    consensus(integer_ranks(m, primes), m.cols(), FieldSpec::Rational)
}

fn eisenstein_ranks(
    rows: &[Vec<EisensteinInt>],
    cols: usize,
    primes: &[u64],
) -> Result<Vec<(u64, usize)>, LinalgError> {
    primes
        .par_iter()
        .map(|&p| {
            // ω ↦ a primitive cube root of unity is a ring map Z[ω] → F_p
            let root = fields::prime_cube_root(p).ok_or(LinalgError::BadPrime(p))?;
            let reduced = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| {
                            add_mod(
                                reduce_bigint(&e.a, p),
                                mul_mod(reduce_bigint(&e.b, p), root, p),
                                p,
                            )
                        })
                        .collect()
                })
                .collect();
            Ok((p, rank_mod_p(reduced, cols, p)))
        })
        .collect()
}

/// Multi-prime consensus rank of a matrix over Q or Q(ω). Eisenstein
/// matrices need primes ≡ 1 (mod 3).
pub fn modular_rank(m: &FieldMatrix, primes: &[u64]) -> Result<RankResult, LinalgError> {
    check_primes(primes)?;
    let ranks = match m.field() {
        FieldSpec::Rational => integer_ranks(&clear_rational(m), primes),
        FieldSpec::Eisenstein => eisenstein_ranks(&clear_eisenstein(m), m.cols(), primes)?,
        FieldSpec::Prime(_) => return Err(LinalgError::NotReducible(m.field())),
    };
    consensus(ranks, m.cols(), m.field())
}
