//! Exact scalars: the rationals, the Eisenstein field Q(ω) with ω² = −1 − ω,
//! and prime fields F_p, all behind one [`FieldElement`] type.
//!
//! Every value is kept in canonical form (reduced fractions, residues in
//! `[0, p)`), so derived equality is mathematical equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest prime accepted from the command line unless a caller opts out.
pub const MIN_DEFAULT_PRIME: u64 = 1 << 20;

/// Largest modulus supported by the fixed-width residue arithmetic.
pub const MAX_PRIME: u64 = 1 << 62;

/// Four primes just below 2^31, all ≡ 1 (mod 3) so that every one of them
/// carries a primitive cube root of unity.
pub const DEFAULT_PRIMES: [u64; 4] = [2_147_483_647, 2_147_483_629, 2_147_483_587, 2_147_483_563];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands from different fields: {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("no cube root of unity in {0}")]
    NoCubeRoot(FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum 2^62")]
    ModulusTooLarge(u64),
    #[error("cannot parse {input:?} as an element of {field}: {reason}")]
    Parse {
        input: String,
        field: FieldSpec,
        reason: String,
    },
    #[error("unknown field {0:?} (expected rational, eisenstein or prime:P)")]
    UnknownField(String),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub enum FieldSpec {
    Rational,
    Eisenstein,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldSpecRepr {
                kind: "rational".into(),
                p: None,
            },
            FieldSpec::Eisenstein => FieldSpecRepr {
                kind: "eisenstein".into(),
                p: None,
            },
            FieldSpec::Prime(p) => FieldSpecRepr {
                kind: "prime".into(),
                p: Some(p),
            },
        }
    }
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = FieldError;

    fn try_from(repr: FieldSpecRepr) -> Result<Self, Self::Error> {
        match (repr.kind.as_str(), repr.p) {
            ("rational", None) => Ok(FieldSpec::Rational),
            ("eisenstein", None) => Ok(FieldSpec::Eisenstein),
            ("prime", Some(p)) => FieldSpec::prime(p),
            ("rational" | "eisenstein", Some(_)) => Err(FieldError::UnknownField(format!(
                "{} with a modulus",
                repr.kind
            ))),
            ("prime", None) => Err(FieldError::UnknownField("prime without \"p\"".into())),
            (other, _) => Err(FieldError::UnknownField(other.into())),
        }
    }
}

impl FieldSpec {
    /// A prime field; fails unless `p` is a prime below [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(p),
            _ => None,
        }
    }

    pub fn characteristic(self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(self, v: &BigInt) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Eisenstein => FieldElement::Eisenstein(Eisenstein {
                re: BigRational::from_integer(v.clone()),
                om: BigRational::zero(),
            }),
            FieldSpec::Prime(p) => FieldElement::Prime(Residue {
                value: reduce_bigint(v, p),
                modulus: p,
            }),
        }
    }

    /// Image of a rational in this field. Fails in F_p when p divides the
    /// denominator.
    pub fn from_rational(self, v: &BigRational) -> Result<FieldElement, FieldError> {
        match self {
            FieldSpec::Rational => Ok(FieldElement::Rational(v.clone())),
            FieldSpec::Eisenstein => Ok(FieldElement::Eisenstein(Eisenstein {
                re: v.clone(),
                om: BigRational::zero(),
            })),
            FieldSpec::Prime(_) => self
                .from_bigint(v.numer())
                .div(&self.from_bigint(v.denom())),
        }
    }

    /// The element ω of Q(ω).
    pub fn omega() -> FieldElement {
        FieldElement::Eisenstein(Eisenstein {
            re: BigRational::zero(),
            om: BigRational::one(),
        })
    }

    /// A primitive cube root of unity: ω itself in Q(ω); in F_p the smaller
    /// of the two residues of multiplicative order three.
    pub fn cube_root_of_unity(self) -> Result<FieldElement, FieldError> {
        match self {
            FieldSpec::Eisenstein => Ok(Self::omega()),
            FieldSpec::Prime(p) => prime_cube_root(p)
                .map(|value| FieldElement::Prime(Residue { value, modulus: p }))
                .ok_or(FieldError::NoCubeRoot(self)),
            FieldSpec::Rational => Err(FieldError::NoCubeRoot(self)),
        }
    }

    /// Parses the textual scalar encoding: `a` or `a/b` for rationals,
    /// `a+b*w` for Q(ω), a base-10 residue in `[0, p)` for F_p.
    pub fn parse_element(self, input: &str) -> Result<FieldElement, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            input: input.to_string(),
            field: self,
            reason: reason.to_string(),
        };
        let s = input.trim();
        match self {
            FieldSpec::Rational => parse_rational(s)
                .map(FieldElement::Rational)
                .map_err(|r| err(&r)),
            FieldSpec::Eisenstein => parse_eisenstein(s)
                .map(|(re, om)| FieldElement::Eisenstein(Eisenstein { re, om }))
                .map_err(|r| err(&r)),
            FieldSpec::Prime(p) => {
                let v: u64 = s
                    .parse()
                    .map_err(|_| err("expected a non-negative base-10 integer"))?;
                if v >= p {
                    return Err(err("residue must lie in [0, p)"));
                }
                Ok(FieldElement::Prime(Residue {
                    value: v,
                    modulus: p,
                }))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("rational"),
            FieldSpec::Eisenstein => f.write_str("eisenstein"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(FieldSpec::Rational),
            "eisenstein" => Ok(FieldSpec::Eisenstein),
            _ => match s.strip_prefix("prime:") {
                Some(p) => {
                    let p: u64 = p.parse().map_err(|_| FieldError::UnknownField(s.into()))?;
                    FieldSpec::prime(p)
                }
                None => Err(FieldError::UnknownField(s.into())),
            },
        }
    }
}

/// `re + om·ω` with rational components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Eisenstein {
    pub re: BigRational,
    pub om: BigRational,
}

impl Eisenstein {
    /// N(a + bω) = a² − ab + b².
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.om + &self.om * &self.om
    }

    /// Galois conjugate: ω ↦ ω² = −1 − ω.
    pub fn conj(&self) -> Eisenstein {
        Eisenstein {
            re: &self.re - &self.om,
            om: -self.om.clone(),
        }
    }

    fn mul(&self, o: &Eisenstein) -> Eisenstein {
        let bd = &self.om * &o.om;
        Eisenstein {
            re: &self.re * &o.re - &bd,
            om: &self.re * &o.om + &self.om * &o.re - bd,
        }
    }
}

/// A residue modulo a prime, always in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Eisenstein(Eisenstein),
    Prime(Residue),
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rational,
            FieldElement::Eisenstein(_) => FieldSpec::Eisenstein,
            FieldElement::Prime(r) => FieldSpec::Prime(r.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Eisenstein(e) => e.re.is_zero() && e.om.is_zero(),
            FieldElement::Prime(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Eisenstein(e) => e.re.is_one() && e.om.is_zero(),
            FieldElement::Prime(r) => r.value == 1,
        }
    }

    /// Re-establishes canonical form. Values built through this module are
    /// already canonical, so this is the identity on them.
    pub fn canonical(&self) -> FieldElement {
        match self {
            FieldElement::Rational(q) => {
                FieldElement::Rational(BigRational::new(q.numer().clone(), q.denom().clone()))
            }
            FieldElement::Eisenstein(e) => FieldElement::Eisenstein(Eisenstein {
                re: BigRational::new(e.re.numer().clone(), e.re.denom().clone()),
                om: BigRational::new(e.om.numer().clone(), e.om.denom().clone()),
            }),
            FieldElement::Prime(r) => FieldElement::Prime(Residue {
                value: r.value % r.modulus,
                modulus: r.modulus,
            }),
        }
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.spec(), other.spec()))
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Eisenstein(a), FieldElement::Eisenstein(b)) => {
                FieldElement::Eisenstein(Eisenstein {
                    re: &a.re + &b.re,
                    om: &a.om + &b.om,
                })
            }
            (FieldElement::Prime(a), FieldElement::Prime(b)) => FieldElement::Prime(Residue {
                value: add_mod(a.value, b.value, a.modulus),
                modulus: a.modulus,
            }),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a.clone()),
            FieldElement::Eisenstein(a) => FieldElement::Eisenstein(Eisenstein {
                re: -a.re.clone(),
                om: -a.om.clone(),
            }),
            FieldElement::Prime(a) => FieldElement::Prime(Residue {
                value: (a.modulus - a.value) % a.modulus,
                modulus: a.modulus,
            }),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Eisenstein(a), FieldElement::Eisenstein(b)) => {
                FieldElement::Eisenstein(a.mul(b))
            }
            (FieldElement::Prime(a), FieldElement::Prime(b)) => FieldElement::Prime(Residue {
                value: mul_mod(a.value, b.value, a.modulus),
                modulus: a.modulus,
            }),
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Eisenstein(a) => {
                let n = a.norm();
                let c = a.conj();
                FieldElement::Eisenstein(Eisenstein {
                    re: c.re / &n,
                    om: c.om / n,
                })
            }
            FieldElement::Prime(a) => FieldElement::Prime(Residue {
                value: inv_mod(a.value, a.modulus),
                modulus: a.modulus,
            }),
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_eisenstein(&self) -> Option<&Eisenstein> {
        match self {
            FieldElement::Eisenstein(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<Residue> {
        match self {
            FieldElement::Prime(r) => Some(*r),
            _ => None,
        }
    }

    /// Least positive integer n with n·self integral (always 1 over F_p).
    pub fn denominator(&self) -> BigInt {
        match self {
            FieldElement::Rational(q) => q.denom().clone(),
            FieldElement::Eisenstein(e) => e.re.denom().lcm(e.om.denom()),
            FieldElement::Prime(_) => BigInt::one(),
        }
    }
}

/// Scales `v` by the lcm of its denominators so every entry is integral.
pub fn integral_multiple(v: &[FieldElement]) -> Vec<FieldElement> {
    let Some(first) = v.first() else {
        return Vec::new();
    };
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()));
    if l.is_one() {
        return v.to_vec();
    }
    let s = first.spec().from_bigint(&l);
    v.iter().map(|x| x.mul(&s).expect("same field")).collect()
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => write!(f, "{q}"),
            FieldElement::Eisenstein(e) => write!(f, "{}+{}*w", e.re, e.om),
            FieldElement::Prime(r) => write!(f, "{}", r.value),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = parse_int(n)?;
    let d = parse_int(d)?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a base-10 integer"));
    }
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

/// Accepts `a+b*w` (the emitted form) plus the shorthands `a`, `b*w`, `w`,
/// `a-b*w` and `a+w`.
fn parse_eisenstein(s: &str) -> Result<(BigRational, BigRational), String> {
    let Some(body) = s.strip_suffix('w') else {
        return Ok((parse_rational(s)?, BigRational::zero()));
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let bytes = body.as_bytes();
    // split at the last sign that is not itself the sign of the ω component
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'/'));
    let (re, om) = match split {
        Some(i) => {
            let om = if bytes[i] == b'-' {
                &body[i..]
            } else {
                &body[i + 1..]
            };
            (parse_rational(&body[..i])?, om)
        }
        None => (BigRational::zero(), body),
    };
    let om = match om {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other)?,
    };
    Ok((re, om))
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin; exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    for small in [2u64, 3, 5, 7, 11, 13] {
        if n % small == 0 {
            out.push(small);
            return prime_factors(n / small, out);
        }
    }
    let d = pollard_rho(n);
    prime_factors(d, out);
    prime_factors(n / d, out);
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    prime_factors(p - 1, &mut factors);
    factors.sort_unstable();
    factors.dedup();
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("a primitive root exists modulo a prime")
}

/// Smaller of the two primitive cube roots of unity mod `p`, if `p ≡ 1 (mod 3)`.
pub fn prime_cube_root(p: u64) -> Option<u64> {
    if p % 3 != 1 {
        return None;
    }
    let e = pow_mod(primitive_root(p), (p - 1) / 3, p);
    Some(e.min(mul_mod(e, e, p)))
}

/// Least common multiple of the denominators, used to clear a row to integers.
pub(crate) fn denominator_lcm<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    values.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldElement {
        FieldSpec::Rational.parse_element(s).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q("1/2").add(&q("1/3")).unwrap(), q("5/6"));
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-3/-6").to_string(), "1/2");
        assert_eq!(q("4/2").to_string(), "2");
    }

    #[test]
    fn omega_squared() {
        let w = FieldSpec::omega();
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2.to_string(), "-1+-1*w");
        assert_eq!(w2, FieldSpec::Eisenstein.parse_element("-1-w").unwrap());
        assert!(w2.mul(&w).unwrap().is_one());
    }

    #[test]
    fn prime_division() {
        let f = FieldSpec::prime(7).unwrap();
        let r = f.from_i64(3).div(&f.from_i64(5)).unwrap();
        assert_eq!(r, f.from_i64(2));
    }

    #[test]
    fn division_by_zero_and_mixed_fields() {
        assert_eq!(q("1").div(&q("0")), Err(FieldError::DivisionByZero));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(
            q("1").add(&f7.one()),
            Err(FieldError::MixedFields(..))
        ));
        assert!(matches!(
            FieldSpec::omega().mul(&q("2")),
            Err(FieldError::MixedFields(..))
        ));
    }

    #[test]
    fn cube_roots() {
        let w = FieldSpec::Eisenstein.cube_root_of_unity().unwrap();
        assert_eq!(w, FieldSpec::omega());
        assert!(w.pow(3).is_one());

        // residues of F_7 with e^3 = 1 and e != 1, found by enumeration
        let roots: Vec<u64> = (2..7).filter(|&e| pow_mod(e, 3, 7) == 1).collect();
        assert_eq!(roots, vec![2, 4]);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.cube_root_of_unity().unwrap(), f7.from_i64(2));

        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.cube_root_of_unity(), Err(FieldError::NoCubeRoot(f5)));
        assert!(FieldSpec::Rational.cube_root_of_unity().is_err());
    }

    #[test]
    fn default_primes_carry_cube_roots() {
        for p in DEFAULT_PRIMES {
            assert!(is_prime(p));
            let e = prime_cube_root(p).unwrap();
            assert_eq!(pow_mod(e, 3, p), 1);
            assert_ne!(e, 1);
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(FieldSpec::prime(9).is_err());
    }

    #[test]
    fn eisenstein_parse_forms() {
        let f = FieldSpec::Eisenstein;
        let cases = [
            ("3", "3+0*w"),
            ("w", "0+1*w"),
            ("-w", "0+-1*w"),
            ("1/2+3/4*w", "1/2+3/4*w"),
            ("1/2-3/4*w", "1/2+-3/4*w"),
            ("-1+-1*w", "-1+-1*w"),
            ("2+w", "2+1*w"),
            ("-5*w", "0+-5*w"),
        ];
        for (input, shown) in cases {
            assert_eq!(
                f.parse_element(input).unwrap().to_string(),
                shown,
                "{input}"
            );
        }
        assert!(f.parse_element("1+x*w").is_err());
        assert!(FieldSpec::Rational.parse_element("1/0").is_err());
        assert!(FieldSpec::Rational.parse_element("w").is_err());
        assert!(FieldSpec::prime(7).unwrap().parse_element("7").is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["rational", "eisenstein", "prime:7"] {
            assert_eq!(s.parse::<FieldSpec>().unwrap().to_string(), s);
        }
        let json = serde_json::to_string(&FieldSpec::prime(7).unwrap()).unwrap();
        assert_eq!(json, r#"{"kind":"prime","p":7}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, FieldSpec::Prime(7));
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"prime","p":8}"#).is_err());
        assert_eq!(
            serde_json::to_string(&FieldSpec::Rational).unwrap(),
            r#"{"kind":"rational"}"#
        );
    }
}
