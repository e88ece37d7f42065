//! Waldschmidt-constant bounds and the inequality checks built on α-tables.
//!
//! Every ratio is an exact rational; comparisons never round.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::alpha::{AlphaTable, TableIssue};

pub type Ratio = BigRational;

pub fn ratio(num: i64, den: i64) -> Ratio {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn ser_ratio<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_ratio_pairs<S: Serializer>(v: &[(u32, Ratio)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (m, r) in v {
        seq.serialize_element(&(m, r.to_string()))?;
    }
    seq.end()
}

/// Largest k with k^N ≤ s.
pub fn floor_root(s: u64, n: u32) -> u64 {
    assert!(n >= 1, "root index must be positive");
    s.nth_root(n)
}

/// (α(mZ) + N − 1)/(m + N − 1).
pub fn demailly_ratio(alpha: u32, m: u32, dim: usize) -> Ratio {
    let n = dim as i64;
    ratio(alpha as i64 + n - 1, m as i64 + n - 1)
}

/// (α(mZ) + 1)/(m + N − 1).
pub fn ev_ratio(alpha: u32, m: u32, dim: usize) -> Ratio {
    ratio(alpha as i64 + 1, m as i64 + dim as i64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemaillyVerdict {
    pub m_max: u32,
    /// Pairs (m, k) with α(kZ)/k < (α(mZ)+N−1)/(m+N−1).
    pub violations: Vec<(u32, u32)>,
    /// Pairs (m, k) where the two sides agree.
    pub equalities: Vec<(u32, u32)>,
    /// Table invariant failures, listed before any violation.
    pub table_issues: Vec<TableIssue>,
}

impl DemaillyVerdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .table_issues
            .iter()
            .map(|i| format!("table invariant: {i}"))
            .collect();
        if self.violations.is_empty() {
            parts.push(format!("no violation up to m = {}", self.m_max));
        } else {
            let pairs: Vec<String> = self
                .violations
                .iter()
                .map(|(m, k)| format!("(m={m},k={k})"))
                .collect();
            parts.push(format!("violated at {}", pairs.join(" ")));
        }
        if !self.equalities.is_empty() {
            let pairs: Vec<String> = self
                .equalities
                .iter()
                .map(|(m, k)| format!("(m={m},k={k})"))
                .collect();
            parts.push(format!("equality at {}", pairs.join(" ")));
        }
        parts.join("; ")
    }
}

pub fn demailly_check(t: &AlphaTable) -> DemaillyVerdict {
    let n = t.dim();
    let mut violations = Vec::new();
    let mut equalities = Vec::new();
    for mv in &t.values {
        let rhs = demailly_ratio(mv.alpha, mv.m, n);
        for kv in &t.values {
            let lhs = ratio(kv.alpha as i64, kv.m as i64);
            if lhs < rhs {
                violations.push((mv.m, kv.m));
            } else if lhs == rhs {
                equalities.push((mv.m, kv.m));
            }
        }
    }
    DemaillyVerdict {
        m_max: t.m_max(),
        violations,
        equalities,
        table_issues: t.invariant_failures(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvVerdict {
    /// Pairs (m, k), m ≤ k, with (α(mZ)+1)/(m+N−1) > α(kZ)/k. The
    /// inequality is a theorem, so any entry means an engine bug.
    pub failures: Vec<(u32, u32)>,
    pub pairs_checked: usize,
}

impl EvVerdict {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn ev_check(t: &AlphaTable) -> EvVerdict {
    let n = t.dim();
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for mv in &t.values {
        let lhs = ev_ratio(mv.alpha, mv.m, n);
        for kv in t.values.iter().filter(|kv| kv.m >= mv.m) {
            pairs_checked += 1;
            if lhs > ratio(kv.alpha as i64, kv.m as i64) {
                failures.push((mv.m, kv.m));
            }
        }
    }
    EvVerdict {
        failures,
        pairs_checked,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremVerdict {
    pub dim: usize,
    pub m: u32,
    pub points: usize,
    /// False when s < (m+1)^N; the checks below are then not meaningful.
    pub applicable: bool,
    pub k: u64,
    pub alpha: u32,
    /// k(m+N−1) − N + 1.
    pub degree_bound: i64,
    pub degree_bound_holds: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub demailly_ratio: Ratio,
    pub ratio_holds: bool,
    /// Computed j with α(jZ) < j·k.
    pub lower_bound_exceptions: Vec<u32>,
}

impl MainTheoremVerdict {
    /// Both unconditional checks pass.
    pub fn holds(&self) -> bool {
        self.degree_bound_holds && self.ratio_holds
    }
}

/// Checks α(mZ) ≤ k(m+N−1)−N+1 and (α(mZ)+N−1)/(m+N−1) ≤ k with
/// k = ⌊s^(1/N)⌋, plus α(jZ) ≥ jk for every computed j. Returns `None` if
/// the table stops before m.
pub fn main_theorem_check(
    dim: usize,
    m: u32,
    s: usize,
    t: &AlphaTable,
) -> Option<MainTheoremVerdict> {
    let alpha = t.alpha(m)?;
    let n = dim as i64;
    let k = floor_root(s as u64, dim as u32);
    let applicable = (m as u128 + 1)
        .checked_pow(dim as u32)
        .is_some_and(|p| s as u128 >= p);
    let degree_bound = k as i64 * (m as i64 + n - 1) - n + 1;
    let demailly = demailly_ratio(alpha, m, dim);
    let lower_bound_exceptions = t
        .values
        .iter()
        .filter(|v| (v.alpha as u64) < v.m as u64 * k)
        .map(|v| v.m)
        .collect();
    Some(MainTheoremVerdict {
        dim,
        m,
        points: s,
        applicable,
        k,
        alpha,
        degree_bound,
        degree_bound_holds: alpha as i64 <= degree_bound,
        ratio_holds: demailly <= BigRational::from_integer(BigInt::from(k)),
        demailly_ratio: demailly,
        lower_bound_exceptions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElsVerdict {
    pub r: u32,
    /// α(NrZ).
    pub alpha_nr: u32,
    /// r·α(Z).
    pub r_alpha: u32,
    pub holds: bool,
}

/// α(NrZ) ≥ r·α(Z), or `None` when Nr exceeds the table.
pub fn els_degree_check(t: &AlphaTable, r: u32) -> Option<ElsVerdict> {
    let alpha_nr = t.alpha(t.dim() as u32 * r)?;
    let r_alpha = r * t.alpha(1)?;
    Some(ElsVerdict {
        r,
        alpha_nr,
        r_alpha,
        holds: alpha_nr >= r_alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub dim: usize,
    pub points: usize,
    pub m_max: u32,
    /// min α(mZ)/m.
    #[serde(serialize_with = "ser_ratio")]
    pub waldschmidt_upper: Ratio,
    /// α(Z)/N.
    #[serde(serialize_with = "ser_ratio")]
    pub els_lower: Ratio,
    /// max (α(mZ)+1)/(m+N−1).
    #[serde(serialize_with = "ser_ratio")]
    pub ev_lower: Ratio,
    #[serde(serialize_with = "ser_ratio_pairs")]
    pub demailly_ratios: Vec<(u32, Ratio)>,
    pub floor_root: u64,
    /// els_lower ≤ ev_lower ≤ waldschmidt_upper.
    pub chain_holds: bool,
    pub demailly: DemaillyVerdict,
    pub ev: EvVerdict,
}

/// Assembles every bound and verdict for a table starting at m = 1.
pub fn bounds_report(t: &AlphaTable) -> BoundsReport {
    assert!(!t.values.is_empty(), "bounds need a nonempty table");
    let n = t.dim();
    let waldschmidt_upper = t
        .values
        .iter()
        .map(|v| ratio(v.alpha as i64, v.m as i64))
        .min()
        .expect("nonempty");
    let els_lower = ratio(t.values[0].alpha as i64, n as i64);
    let ev_lower = t
        .values
        .iter()
        .map(|v| ev_ratio(v.alpha, v.m, n))
        .max()
        .expect("nonempty");
    let demailly_ratios = t
        .values
        .iter()
        .map(|v| (v.m, demailly_ratio(v.alpha, v.m, n)))
        .collect();
    let chain_holds = els_lower <= ev_lower && ev_lower <= waldschmidt_upper;
    BoundsReport {
        dim: n,
        points: t.config.points,
        m_max: t.m_max(),
        waldschmidt_upper,
        els_lower,
        ev_lower,
        demailly_ratios,
        floor_root: floor_root(t.config.points as u64, n as u32),
        chain_holds,
        demailly: demailly_check(t),
        ev: ev_check(t),
    }
}

/// `r` rounded half away from zero to `places` decimals, for display only.
pub fn to_decimal(r: &Ratio, places: u32) -> String {
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    let scale = BigInt::from(10u32).pow(places);
    let num: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let (q, _) = num.div_rem(&(r.denom() * BigInt::from(2)));
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    let digits = q.to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let p = places as usize;
    let padded = format!("{digits:0>width$}", width = p + 1);
    let (int, frac) = padded.split_at(padded.len() - p);
    format!("{sign}{int}.{frac}")
}
