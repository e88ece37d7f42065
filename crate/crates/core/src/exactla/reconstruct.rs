//! Kernel vectors recovered from residues.
//!
//! The matrix is cleared to Z or Z[ω] and reduced modulo a growing list of
//! word-size primes. Each prime gives the column pivot profile and the image
//! of the kernel vector of the first free column (that column one, the other
//! free columns zero). The images are combined by CRT and lifted back by
//! rational reconstruction. A candidate is returned only after its integral
//! multiple passes an exact dot-product check against every row, so a bad
//! prime can cost time but never a wrong answer.
//!
//! With the true pivot profile the recovered vector is the one `rank_kernel`
//! produces, since the pivot columns left of f pin it down uniquely.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::bareiss::{clear_eisenstein, clear_rational, EisensteinInt, IntMatrix};
use super::modular::echelon_mod_p;
use super::{normalize_leading, FieldMatrix};
use crate::fields::{
    self, add_mod, inv_mod, mul_mod, reduce_bigint, sub_mod, Eisenstein, FieldElement, FieldSpec,
};

/// Prime budget used by the α engine before it falls back to Bareiss.
pub const DEFAULT_MAX_PRIMES: usize = 4096;

enum Cleared {
    Integer(IntMatrix),
    Eisenstein(Vec<Vec<EisensteinInt>>),
}

impl Cleared {
    fn of(m: &FieldMatrix) -> Option<Cleared> {
        match m.field() {
            FieldSpec::Rational => Some(Cleared::Integer(clear_rational(m))),
            FieldSpec::Eisenstein => Some(Cleared::Eisenstein(clear_eisenstein(m))),
            FieldSpec::Prime(_) => None,
        }
    }

    /// Number of integer components per entry.
    fn width(&self) -> usize {
        match self {
            Cleared::Integer(_) => 1,
            Cleared::Eisenstein(_) => 2,
        }
    }

    fn reduce(&self, p: u64, root: u64) -> Vec<Vec<u64>> {
        match self {
            Cleared::Integer(m) => (0..m.rows())
                .map(|r| m.row(r).iter().map(|x| reduce_bigint(x, p)).collect())
                .collect(),
            Cleared::Eisenstein(rows) => rows
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
                .collect(),
        }
    }

    /// Pivot profile and kernel image modulo `p`, one residue vector per
    /// component. None when the two embeddings of Z[ω] disagree.
    fn image(&self, p: u64, cols: usize) -> Option<(Vec<usize>, Vec<Vec<u64>>)> {
        match self {
            Cleared::Integer(_) => {
                let (pivots, v) = kernel_mod_p(self.reduce(p, 0), cols, p);
                Some((pivots, vec![v]))
            }
            Cleared::Eisenstein(_) => {
                // the two cube roots give the two ring maps Z[ω] → F_p
                let r1 = fields::prime_cube_root(p)?;
                let r2 = mul_mod(r1, r1, p);
                let (piv1, v1) = kernel_mod_p(self.reduce(p, r1), cols, p);
                let (piv2, v2) = kernel_mod_p(self.reduce(p, r2), cols, p);
                if piv1 != piv2 {
                    return None;
                }
                // a + b·r1 = v1, a + b·r2 = v2
                let d = inv_mod(sub_mod(r1, r2, p), p);
                let (a, b): (Vec<u64>, Vec<u64>) = v1
                    .iter()
                    .zip(&v2)
                    .map(|(&x, &y)| {
                        let b = mul_mod(sub_mod(x, y, p), d, p);
                        (sub_mod(x, mul_mod(b, r1, p), p), b)
                    })
                    .unzip();
                Some((piv1, vec![a, b]))
            }
        }
    }

    fn annihilates(&self, v: &[FieldElement]) -> bool {
        let l = v
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()));
        match self {
            Cleared::Integer(m) => {
                let x: Vec<BigInt> = v
                    .iter()
                    .map(|e| {
                        let q = e.as_rational().expect("rational vector");
                        q.numer() * (&l / q.denom())
                    })
                    .collect();
                (0..m.rows()).into_par_iter().all(|r| {
                    let mut acc = BigInt::zero();
                    for (a, b) in m.row(r).iter().zip(&x) {
                        if !a.is_zero() && !b.is_zero() {
                            acc += a * b;
                        }
                    }
                    acc.is_zero()
                })
            }
            Cleared::Eisenstein(rows) => {
                let x: Vec<EisensteinInt> = v
                    .iter()
                    .map(|e| {
                        let e = e.as_eisenstein().expect("eisenstein vector");
                        EisensteinInt {
                            a: e.re.numer() * (&l / e.re.denom()),
                            b: e.om.numer() * (&l / e.om.denom()),
                        }
                    })
                    .collect();
                rows.par_iter().all(|row| {
                    let mut acc = EisensteinInt {
                        a: BigInt::zero(),
                        b: BigInt::zero(),
                    };
                    for (a, b) in row.iter().zip(&x) {
                        let t = a.mul(b);
                        acc.a += t.a;
                        acc.b += t.b;
                    }
                    acc.a.is_zero() && acc.b.is_zero()
                })
            }
        }
    }
}

/// Echelon form mod p, then back-substitution for the first free column.
/// The kernel image is empty when the columns are independent mod p.
fn kernel_mod_p(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<usize>, Vec<u64>) {
    let pivots = echelon_mod_p(&mut rows, cols, p);
    let Some(f) = (0..cols).find(|c| !pivots.contains(c)) else {
        return (pivots, Vec::new());
    };
    let mut x = vec![0u64; cols];
    x[f] = 1;
    for (i, &c) in pivots.iter().enumerate().rev() {
        if c > f {
            continue;
        }
        let row = &rows[i];
        let mut s = 0u64;
        for j in c + 1..=f {
            if row[j] != 0 && x[j] != 0 {
                s = add_mod(s, mul_mod(row[j], x[j], p), p);
            }
        }
        x[c] = sub_mod(0, s, p);
    }
    (pivots, x)
}

/// Pivot profiles only lose columns to pivots further right under reduction,
/// so the better profile has more pivots, then lexicographically earlier ones.
fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Primes below 2^31 in descending order; Eisenstein input needs p ≡ 1 (mod 3).
fn primes(field: FieldSpec) -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31) - 1)
        .rev()
        .filter(move |&p| fields::is_prime(p) && (field != FieldSpec::Eisenstein || p % 3 == 1))
}

/// Wang's rational reconstruction: n/d ≡ a (mod modulus) with |n|, d ≤ bound.
pub fn rational_reconstruction(
    a: &BigInt,
    modulus: &BigInt,
    bound: &BigInt,
) -> Option<BigRational> {
    let (mut r0, mut r1) = (modulus.clone(), a.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

struct Accumulator {
    pivots: Vec<usize>,
    modulus: BigInt,
    residues: Vec<Vec<BigInt>>,
    primes: usize,
}

impl Accumulator {
    fn start(pivots: Vec<usize>, p: u64, images: Vec<Vec<u64>>) -> Self {
        Accumulator {
            pivots,
            modulus: BigInt::from(p),
            residues: images
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect(),
            primes: 1,
        }
    }

    fn add(&mut self, p: u64, images: Vec<Vec<u64>>) {
        let minv = inv_mod(reduce_bigint(&self.modulus, p), p);
        for (acc, img) in self.residues.iter_mut().zip(images) {
            for (x, r) in acc.iter_mut().zip(img) {
                let t = mul_mod(sub_mod(r, reduce_bigint(x, p), p), minv, p);
                if t != 0 {
                    *x += &self.modulus * t;
                }
            }
        }
        self.modulus *= p;
        self.primes += 1;
    }

    fn lift(&self, field: FieldSpec) -> Option<Vec<FieldElement>> {
        let bound = (&self.modulus / 2u32).sqrt();
        let mut comps = Vec::with_capacity(self.residues.len());
        for acc in &self.residues {
            let lifted: Option<Vec<BigRational>> = acc
                .iter()
                .map(|a| rational_reconstruction(a, &self.modulus, &bound))
                .collect();
            comps.push(lifted?);
        }
        let v = match field {
            FieldSpec::Rational => comps
                .swap_remove(0)
                .into_iter()
                .map(FieldElement::Rational)
                .collect(),
            _ => {
                let om = comps.pop().expect("two components");
                let re = comps.pop().expect("two components");
                re.into_iter()
                    .zip(om)
                    .map(|(re, om)| FieldElement::Eisenstein(Eisenstein { re, om }))
                    .collect()
            }
        };
        Some(v)
    }
}

/// The kernel vector `rank_kernel` would certify, rebuilt from at most
/// `max_primes` modular images and checked exactly. None for prime fields,
/// for matrices with independent columns, and when the budget runs out.
pub fn modular_kernel_vector(m: &FieldMatrix, max_primes: usize) -> Option<Vec<FieldElement>> {
    let cleared = Cleared::of(m)?;
    let cols = m.cols();
    let mut source = primes(m.field());
    let mut acc: Option<Accumulator> = None;
    let mut used = 0;
    let mut batch = 4;
    while used < max_primes {
        let chunk: Vec<u64> = source.by_ref().take(batch.min(max_primes - used)).collect();
        if chunk.is_empty() {
            return None;
        }
        used += chunk.len();
        let images: Vec<(u64, Option<(Vec<usize>, Vec<Vec<u64>>)>)> = chunk
            .par_iter()
            .map(|&p| (p, cleared.image(p, cols)))
            .collect();
        for (p, image) in images {
            let Some((pivots, v)) = image else { continue };
            match &mut acc {
                Some(a) if a.pivots == pivots => a.add(p, v),
                Some(a) if !better(&pivots, &a.pivots) => {}
                _ => acc = Some(Accumulator::start(pivots, p, v)),
            }
        }
        let a = acc.as_ref()?;
        if a.pivots.len() == cols {
            return None;
        }
        debug_assert_eq!(a.residues.len(), cleared.width());
        if let Some(v) = a.lift(m.field()) {
            if cleared.annihilates(&v) {
                return Some(normalize_leading(&v));
            }
        }
        batch = (batch * 2).min(256);
    }
    None
}

/// Exact `m · v = 0` on the integer image of `m` and an integral multiple of
/// `v`. None for prime fields.
pub(crate) fn annihilates_exact(m: &FieldMatrix, v: &[FieldElement]) -> Option<bool> {
    Cleared::of(m).map(|c| c.annihilates(v))
}
