//! Homogeneous forms as coefficient vectors over the graded-lex basis, with
//! a direct order-of-vanishing test used to re-check kernel certificates.
//!
//! The vanishing test never touches the condition matrix: it expands the
//! form into terms, applies each Hasse derivative D^β term by term and
//! evaluates the result at the point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::configs::{PointConfiguration, ProjectivePoint};
use crate::fields::{integral_multiple, FieldElement, FieldError, FieldSpec};
use crate::interpolation::{monomial_basis, monomials_up_to, MultiIndex};

/// A degree-d form in N+1 variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    field: FieldSpec,
    degree: u32,
    coefficients: Vec<FieldElement>,
}

/// Monomial order tag carried by serialized certificates.
pub const MONOMIAL_ORDER: &str = "graded-lex";

impl Form {
    /// `coefficients[i]` multiplies the i-th monomial of `monomial_basis(dim, degree)`.
    pub fn new(dim: usize, degree: u32, coefficients: Vec<FieldElement>) -> Result<Self, String> {
        let expected = monomial_basis(dim, degree).len();
        if coefficients.len() != expected {
            return Err(format!(
                "expected {expected} coefficients, got {}",
                coefficients.len()
            ));
        }
        let field = coefficients[0].spec();
        if let Some(c) = coefficients.iter().find(|c| c.spec() != field) {
            return Err(format!("mixed fields {field} and {}", c.spec()));
        }
        Ok(Form {
            dim,
            field,
            degree,
            coefficients,
        })
    }

    /// Build from (exponents, coefficient) terms; every exponent vector must
    /// have length N+1 and total degree `degree`. Repeated monomials add up.
    pub fn from_terms(
        dim: usize,
        field: FieldSpec,
        degree: u32,
        terms: &[(Vec<u32>, FieldElement)],
    ) -> Result<Self, String> {
        let basis = monomial_basis(dim, degree);
        let mut coefficients = vec![field.zero(); basis.len()];
        for (e, c) in terms {
            let idx = MultiIndex::new(e.clone());
            let i = basis.iter().position(|b| *b == idx).ok_or_else(|| {
                format!(
                    "monomial {idx} is not of degree {degree} in {} variables",
                    dim + 1
                )
            })?;
            coefficients[i] = coefficients[i].add(c).map_err(|e| e.to_string())?;
        }
        Ok(Form {
            dim,
            field,
            degree,
            coefficients,
        })
    }

    pub fn linear(dim: usize, coeffs: &[FieldElement]) -> Result<Self, String> {
        Self::new(dim, 1, coeffs.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(FieldElement::is_zero)
    }

    /// Nonzero terms keyed by exponent vector.
    pub fn terms(&self) -> BTreeMap<Vec<u32>, FieldElement> {
        monomial_basis(self.dim, self.degree)
            .into_iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
            .collect()
    }

    pub fn mul(&self, other: &Form) -> Result<Form, FieldError> {
        let degree = self.degree + other.degree;
        let mut acc: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let e: Vec<u32> = a.iter().zip(&b).map(|(i, j)| i + j).collect();
                let t = x.mul(&y)?;
                let slot = acc.entry(e).or_insert_with(|| self.field.zero());
                *slot = slot.add(&t)?;
            }
        }
        let coefficients = monomial_basis(self.dim, degree)
            .into_iter()
            .map(|m| {
                acc.remove(m.exponents())
                    .unwrap_or_else(|| self.field.zero())
            })
            .collect();
        Ok(Form {
            dim: self.dim,
            field: self.field,
            degree,
            coefficients,
        })
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, FieldError> {
        self.terms()
            .iter()
            .try_fold(self.field.zero(), |acc, (e, c)| {
                acc.add(&monomial_value(c, e, &vec![0; e.len()], point)?)
            })
    }

    /// D^β f evaluated at `point`.
    pub fn hasse_derivative_at(
        &self,
        beta: &[u32],
        point: &[FieldElement],
    ) -> Result<FieldElement, FieldError> {
        hasse_at(self.field, &self.terms(), beta, point)
    }

    /// True iff every Hasse derivative of order below `m` vanishes at `p`.
    pub fn vanishes_to_order(&self, p: &ProjectivePoint, m: u32) -> Result<bool, FieldError> {
        if m == 0 {
            return Ok(true);
        }
        let betas = monomials_up_to(self.dim + 1, m - 1);
        if let FieldSpec::Prime(_) = self.field {
            let terms = self.terms();
            for beta in betas {
                if !hasse_at(self.field, &terms, beta.exponents(), p.coords())?.is_zero() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        // scaling the form or the point's coordinates does not change the
        // order of vanishing, so evaluate an integral multiple in Z[ω]
        let scaled = Form {
            coefficients: integral_multiple(&self.coefficients),
            ..self.clone()
        };
        let terms: Vec<(Vec<u32>, Zw)> = scaled
            .terms()
            .into_iter()
            .map(|(e, c)| (e, Zw::of(&c)))
            .collect();
        let point: Vec<Zw> = integral_multiple(p.coords()).iter().map(Zw::of).collect();
        let powers: Vec<Vec<Zw>> = point
            .iter()
            .map(|x| {
                let mut row = vec![Zw::one()];
                for _ in 0..self.degree {
                    let next = row.last().expect("nonempty").mul(x);
                    row.push(next);
                }
                row
            })
            .collect();
        for beta in betas {
            let beta = beta.exponents();
            let mut total = Zw::zero();
            for (e, c) in &terms {
                if e.iter().zip(beta).any(|(a, b)| b > a) {
                    continue;
                }
                let mut t = c.scale(&e.iter().zip(beta).fold(BigInt::one(), |acc, (&a, &b)| {
                    acc * BigInt::from(pascal(a, b))
                }));
                for (l, (&a, &b)) in e.iter().zip(beta).enumerate() {
                    t = t.mul(&powers[l][(a - b) as usize]);
                }
                total = total.add(&t);
            }
            if !total.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the form is nonzero and vanishes to order ≥ m at every point.
    pub fn vanishes_on(&self, z: &PointConfiguration, m: u32) -> Result<bool, FieldError> {
        if self.is_zero() || self.dim != z.dim() || self.field != z.field() {
            return Ok(false);
        }
        for p in z.points() {
            if !self.vanishes_to_order(p, m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_certificate(&self) -> Certificate {
        Certificate {
            degree: self.degree,
            order: MONOMIAL_ORDER.to_string(),
            coefficients: self.coefficients.iter().map(ToString::to_string).collect(),
        }
    }
}

/// a + bω with integer a, b; ω² = −1 − ω.
#[derive(Clone)]
struct Zw(BigInt, BigInt);

impl Zw {
    fn of(x: &FieldElement) -> Zw {
        match x {
            FieldElement::Rational(q) => Zw(q.to_integer(), BigInt::zero()),
            FieldElement::Eisenstein(e) => Zw(e.re.to_integer(), e.om.to_integer()),
            FieldElement::Prime(_) => unreachable!("prime fields are evaluated directly"),
        }
    }

    fn zero() -> Zw {
        Zw(BigInt::zero(), BigInt::zero())
    }

    fn one() -> Zw {
        Zw(BigInt::one(), BigInt::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    fn add(&self, o: &Zw) -> Zw {
        Zw(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn scale(&self, k: &BigInt) -> Zw {
        Zw(&self.0 * k, &self.1 * k)
    }

    fn mul(&self, o: &Zw) -> Zw {
        if self.1.is_zero() && o.1.is_zero() {
            return Zw(&self.0 * &o.0, BigInt::zero());
        }
        let bd = &self.1 * &o.1;
        Zw(&self.0 * &o.0 - &bd, &self.0 * &o.1 + &self.1 * &o.0 - bd)
    }
}

fn hasse_at(
    field: FieldSpec,
    terms: &BTreeMap<Vec<u32>, FieldElement>,
    beta: &[u32],
    point: &[FieldElement],
) -> Result<FieldElement, FieldError> {
    let mut total = field.zero();
    for (e, c) in terms {
        if e.iter().zip(beta).any(|(a, b)| b > a) {
            continue;
        }
        let k = e
            .iter()
            .zip(beta)
            .fold(BigUint::one(), |acc, (&a, &b)| acc * pascal(a, b));
        let scaled = c.mul(&field.from_bigint(&k.into()))?;
        total = total.add(&monomial_value(&scaled, e, beta, point)?)?;
    }
    Ok(total)
}

/// c · x^(e−β) at the point.
fn monomial_value(
    c: &FieldElement,
    e: &[u32],
    beta: &[u32],
    point: &[FieldElement],
) -> Result<FieldElement, FieldError> {
    e.iter()
        .zip(beta)
        .zip(point)
        .try_fold(c.clone(), |acc, ((&a, &b), x)| acc.mul(&x.pow(a - b)))
}

/// C(n, k) by Pascal's rule.
fn pascal(n: u32, k: u32) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{k}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serializable kernel vector: a form's coefficients in the named monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub degree: u32,
    pub order: String,
    pub coefficients: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::fermat12_configuration;

    fn fermat_generators(field: FieldSpec) -> Vec<Form> {
        let one = field.one();
        let neg = one.neg();
        // x(y³−z³), y(z³−x³), z(x³−y³)
        let raw = [
            [(vec![1, 3, 0], &one), (vec![1, 0, 3], &neg)],
            [(vec![0, 1, 3], &one), (vec![3, 1, 0], &neg)],
            [(vec![3, 0, 1], &one), (vec![0, 3, 1], &neg)],
        ];
        raw.iter()
            .map(|t| {
                let terms: Vec<_> = t.iter().map(|(e, c)| (e.clone(), (*c).clone())).collect();
                Form::from_terms(2, field, 4, &terms).unwrap()
            })
            .collect()
    }

    #[test]
    fn fermat_generators_vanish() {
        for field in [
            FieldSpec::Eisenstein,
            FieldSpec::Prime(7),
            FieldSpec::Prime(13),
        ] {
            let z = fermat12_configuration(field).unwrap();
            for g in fermat_generators(field) {
                assert!(g.vanishes_on(&z, 1).unwrap(), "{field}: {g}");
                assert!(!g.vanishes_on(&z, 2).unwrap(), "{field}: {g}");
                for p in z.points() {
                    assert!(g.evaluate(p.coords()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn square_of_line_vanishes_doubly() {
        let f = FieldSpec::Rational;
        let l = Form::linear(2, &[f.one(), f.from_i64(-1), f.zero()]).unwrap();
        let q = l.mul(&l).unwrap();
        let p = ProjectivePoint::new(vec![f.one(), f.one(), f.from_i64(5)]).unwrap();
        assert!(q.vanishes_to_order(&p, 2).unwrap());
        assert!(!q.vanishes_to_order(&p, 3).unwrap());
        assert_eq!(q.to_string(), "(1)*x0^2 + (-2)*x0*x1 + (1)*x1^2");
    }

    #[test]
    fn small_characteristic_derivatives() {
        // over F_2 every first partial of x0² is zero, yet the order at (0:1:0) is still 2
        let f = FieldSpec::Prime(2);
        let sq = Form::from_terms(2, f, 2, &[(vec![2, 0, 0], f.one())]).unwrap();
        let a = ProjectivePoint::new(vec![f.zero(), f.one(), f.zero()]).unwrap();
        assert!(sq.vanishes_to_order(&a, 2).unwrap());
        assert!(!sq.vanishes_to_order(&a, 3).unwrap());
    }

    #[test]
    fn pascal_matches_binomial() {
        for n in 0..12u32 {
            for k in 0..=n + 1 {
                assert_eq!(
                    pascal(n, k),
                    crate::interpolation::binomial(n as u64, k as u64)
                );
            }
        }
    }
}
