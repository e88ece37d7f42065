//! Fraction-free elimination over Z and Z[ω].
//!
//! After step k every entry below the pivot rows is a (k+1)-minor of the
//! input, so the division by the previous pivot is exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Echelon, FieldMatrix};
use crate::fields::{denominator_lcm, Eisenstein, FieldElement, FieldSpec};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged integer matrix");
            data.extend(row);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_field(&self, field: FieldSpec) -> FieldMatrix {
        let rows = (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| field.from_bigint(x)).collect())
            .collect();
        FieldMatrix::from_rows(field, rows).expect("uniform rows")
    }
}

/// `a + b·ω` with integer components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub(crate) fn mul(&self, o: &EisensteinInt) -> EisensteinInt {
        let bd = &self.b * &o.b;
        EisensteinInt {
            a: &self.a * &o.a - &bd,
            b: &self.a * &o.b + &self.b * &o.a - bd,
        }
    }

    fn sub(self, o: EisensteinInt) -> EisensteinInt {
        EisensteinInt {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }

    /// Exact quotient; the caller guarantees divisibility in Z[ω].
    fn div_exact(&self, d: &EisensteinInt) -> EisensteinInt {
        // multiply by the conjugate (c − e) − eω and divide by the norm
        let conj = EisensteinInt {
            a: &d.a - &d.b,
            b: -d.b.clone(),
        };
        let num = self.mul(&conj);
        let n = d.norm();
        debug_assert!(num.a.is_multiple_of(&n) && num.b.is_multiple_of(&n));
        EisensteinInt {
            a: num.a / &n,
            b: num.b / n,
        }
    }

    fn to_field(&self) -> FieldElement {
        FieldElement::Eisenstein(Eisenstein {
            re: BigRational::from_integer(self.a.clone()),
            om: BigRational::from_integer(self.b.clone()),
        })
    }
}

pub(crate) trait BareissScalar: Clone {
    fn is_nil(&self) -> bool;
    fn nil() -> Self;
    fn one_like() -> Self;
    /// Orders candidate pivots by size.
    fn pivot_cmp(&self, other: &Self) -> Ordering;
    /// `(p·x − l·u) / prev`, exact.
    fn update(p: &Self, x: &Self, l: &Self, u: &Self, prev: Option<&Self>) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn exact_quotient(&self, d: &Self) -> Self;
    fn to_element(&self) -> FieldElement;
}

impl BareissScalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }

    fn nil() -> Self {
        Zero::zero()
    }

    fn one_like() -> Self {
        One::one()
    }

    fn pivot_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }

    fn update(p: &Self, x: &Self, l: &Self, u: &Self, prev: Option<&Self>) -> Self {
        let mut t = p * x;
        if !Zero::is_zero(l) && !Zero::is_zero(u) {
            t -= l * u;
        }
        match prev {
            Some(d) => t / d,
            None => t,
        }
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn exact_quotient(&self, d: &Self) -> Self {
        self / d
    }

    fn to_element(&self) -> FieldElement {
        FieldElement::Rational(BigRational::from_integer(self.clone()))
    }
}

impl BareissScalar for EisensteinInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    fn nil() -> Self {
        EisensteinInt {
            a: Zero::zero(),
            b: Zero::zero(),
        }
    }

    fn one_like() -> Self {
        EisensteinInt {
            a: One::one(),
            b: Zero::zero(),
        }
    }

    fn pivot_cmp(&self, other: &Self) -> Ordering {
        self.norm().cmp(&other.norm())
    }

    fn update(p: &Self, x: &Self, l: &Self, u: &Self, prev: Option<&Self>) -> Self {
        let mut t = p.mul(x);
        if !l.is_nil() && !u.is_nil() {
            t = t.sub(l.mul(u));
        }
        match prev {
            Some(d) => t.div_exact(d),
            None => t,
        }
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn minus(&self, other: &Self) -> Self {
        self.clone().sub(other.clone())
    }

    fn exact_quotient(&self, d: &Self) -> Self {
        self.div_exact(d)
    }

    fn to_element(&self) -> FieldElement {
        self.to_field()
    }
}

/// Fraction-free row echelon form in place; returns the pivot columns.
pub(crate) fn echelon_in_place<T: BareissScalar>(rows: &mut [Vec<T>], cols: usize) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut prev: Option<T> = None;
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..n {
            if rows[i][c].is_nil() {
                continue;
            }
            match best {
                Some(b) if rows[i][c].pivot_cmp(&rows[b][c]) != Ordering::Greater => {}
                _ => best = Some(i),
            }
        }
        let Some(b) = best else { continue };
        rows.swap(r, b);
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        let p = &prow[c];
        for row in bottom.iter_mut() {
            let l = std::mem::replace(&mut row[c], T::nil());
            for j in c + 1..cols {
                if row[j].is_nil() && (l.is_nil() || prow[j].is_nil()) {
                    continue;
                }
                row[j] = T::update(p, &row[j], &l, &prow[j], prev.as_ref());
            }
        }
        prev = Some(p.clone());
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn first_free(pivots: &[usize], cols: usize) -> Option<usize> {
    (0..cols).find(|c| pivots.binary_search(c).is_err())
}

/// Back substitution for the kernel vector of the first free column.
fn kernel_from_echelon(
    rows: &[Vec<FieldElement>],
    pivots: &[usize],
    cols: usize,
    field: FieldSpec,
) -> Option<Vec<FieldElement>> {
    let f = first_free(pivots, cols)?;
    let mut v = vec![field.zero(); cols];
    v[f] = field.one();
    for (t, &pc) in pivots.iter().enumerate().rev() {
        if pc > f {
            continue;
        }
        let mut acc = field.zero();
        for j in pc + 1..=f {
            if !v[j].is_zero() && !rows[t][j].is_zero() {
                acc = acc.add(&rows[t][j].mul(&v[j]).ok()?).ok()?;
            }
        }
        v[pc] = acc.neg().div(&rows[t][pc]).ok()?;
    }
    Some(v)
}

pub(crate) fn clear_rational(m: &FieldMatrix) -> IntMatrix {
    let rows = (0..m.rows())
        .map(|r| {
            let row: Vec<&BigRational> = m
                .row(r)
                .iter()
                .map(|x| x.as_rational().expect("rational matrix"))
                .collect();
            let l = denominator_lcm(row.iter().copied());
            let mut ints: Vec<BigInt> = row.iter().map(|q| q.numer() * (&l / q.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                ints.iter_mut().for_each(|x| *x /= &g);
            }
            ints
        })
        .collect();
    IntMatrix::from_rows(rows)
}

pub(crate) fn clear_eisenstein(m: &FieldMatrix) -> Vec<Vec<EisensteinInt>> {
    (0..m.rows())
        .map(|r| {
            let row: Vec<&Eisenstein> = m
                .row(r)
                .iter()
                .map(|x| x.as_eisenstein().expect("eisenstein matrix"))
                .collect();
            let l = denominator_lcm(row.iter().flat_map(|e| [&e.re, &e.om]));
            let mut ints: Vec<EisensteinInt> = row
                .iter()
                .map(|e| EisensteinInt {
                    a: e.re.numer() * (&l / e.re.denom()),
                    b: e.om.numer() * (&l / e.om.denom()),
                })
                .collect();
            let g = ints
                .iter()
                .fold(BigInt::zero(), |g, x| g.gcd(&x.a).gcd(&x.b));
            if !g.is_zero() && !g.is_one() {
                for x in &mut ints {
                    x.a /= &g;
                    x.b /= &g;
                }
            }
            ints
        })
        .collect()
}

/// Kernel vector of the first free column f, computed in the ring. The
/// pivots left of f form an upper triangular system whose last pivot D is
/// (up to sign) its determinant, so with x_f = −D every back-substitution
/// quotient is a Cramer determinant and the divisions are exact.
fn ring_kernel<T: BareissScalar>(rows: &[Vec<T>], pivots: &[usize], cols: usize) -> Option<Vec<T>> {
    let f = first_free(pivots, cols)?;
    let used = pivots.iter().take_while(|&&c| c < f).count();
    let mut v = vec![T::nil(); cols];
    v[f] = match used {
        0 => T::one_like(),
        r => T::nil().minus(&rows[r - 1][pivots[r - 1]]),
    };
    for t in (0..used).rev() {
        let pc = pivots[t];
        let mut acc = T::nil();
        for j in pc + 1..=f {
            if !v[j].is_nil() && !rows[t][j].is_nil() {
                acc = acc.minus(&rows[t][j].times(&v[j]));
            }
        }
        v[pc] = acc.exact_quotient(&rows[t][pc]);
    }
    Some(v)
}

fn ring_echelon<T: BareissScalar>(mut rows: Vec<Vec<T>>, cols: usize) -> Echelon {
    let pivots = echelon_in_place(&mut rows, cols);
    let kernel = ring_kernel(&rows, &pivots, cols).map(|v| v.iter().map(T::to_element).collect());
    Echelon { pivots, kernel }
}

pub(crate) fn rational_echelon(m: &FieldMatrix) -> Echelon {
    ring_echelon(clear_rational(m).to_rows(), m.cols())
}

pub(crate) fn eisenstein_echelon(m: &FieldMatrix) -> Echelon {
    ring_echelon(clear_eisenstein(m), m.cols())
}

/// Shared by the prime-field path, which eliminates on residues directly.
pub(crate) fn kernel_for_pivots(
    rows: &[Vec<FieldElement>],
    pivots: &[usize],
    cols: usize,
    field: FieldSpec,
) -> Option<Vec<FieldElement>> {
    kernel_from_echelon(rows, pivots, cols, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn bareiss_final_pivot_is_determinant() {
        // det = 1·(5·10 − 6·8) − 2·(4·10 − 6·7) + 3·(4·8 − 5·7) = 2 + 4 − 9 = −3
        let mut rows =
            IntMatrix::from_i64_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).to_rows();
        let piv = echelon_in_place(&mut rows, 3);
        assert_eq!(piv, vec![0, 1, 2]);
        // last pivot equals ± det, sign from the row swaps
        assert_eq!(rows[2][2].abs(), BigInt::from(3));
    }

    #[test]
    fn eisenstein_exact_division() {
        let x = EisensteinInt {
            a: BigInt::from(3),
            b: BigInt::from(-2),
        };
        let y = EisensteinInt {
            a: BigInt::from(-1),
            b: BigInt::from(5),
        };
        let prod = x.mul(&y);
        assert_eq!(prod.div_exact(&y), x);
        assert_eq!(prod.div_exact(&x), y);
        // N(a + bω) is multiplicative
        assert_eq!(prod.norm(), x.norm() * y.norm());
    }

    #[test]
    fn pivot_prefers_largest_magnitude() {
        let mut rows = IntMatrix::from_i64_rows(&[vec![1, 1], vec![-5, 2], vec![5, 3]]).to_rows();
        echelon_in_place(&mut rows, 2);
        // ties between |−5| and |5| go to the lower row index
        assert_eq!(rows[0], vec![BigInt::from(-5), BigInt::from(2)]);
    }
}
