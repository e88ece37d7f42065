//! Exact verification of the binomial inequality
//!
//! ```text
//! C(k(m+N−1)+1, N) ≥ C(m+N−1, N)·(k+1)^N      (N ≥ 3, m ≥ 1, k ≥ m+1)
//! ```
//!
//! and of every auxiliary polynomial in its proof, over finite parameter
//! boxes. With q = m+N−1 the inequality is the product comparison
//! Π_{t<N}(kq+1−t) ≥ Π_{t<N}(q−t)·(k+1)^N; pairing the t-th factor with the
//! (N−1−t)-th gives u(N,m,k,i) ≥ 0 for i = 0..⌊(N−1)/2⌋, where
//!
//! ```text
//! u(N,m,k,i) = (kq+1−i)(kq+2−N+i) − (q−i)(m+i)(k+1)².
//! ```
//!
//! The proof's expanded forms are implemented as stated, scaled by an
//! integer where they carry fractions, and compared against the values
//! obtained from the definitions. Everything is big-integer arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest number of (N, m, k, i) tuples one call will visit.
pub const MAX_BOX_TUPLES: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("parameter box has {tuples} tuples, more than the limit of {limit}")]
    BoxTooLarge { tuples: u64, limit: u64 },
}

fn z(v: i64) -> BigInt {
    BigInt::from(v)
}

/// u(N,m,k,i), the pair difference.
pub fn u(n: i64, m: i64, k: i64, i: i64) -> BigInt {
    let q = m + n - 1;
    let kq = z(k) * q;
    (&kq + 1 - i) * (&kq + 2 - n + i) - z(q - i) * (m + i) * z(k + 1).pow(2)
}

/// u(N,m,k+1,i) − u(N,m,k,i).
pub fn dk(n: i64, m: i64, k: i64, i: i64) -> BigInt {
    u(n, m, k + 1, i) - u(n, m, k, i)
}

/// u(N,m,m+1,i).
pub fn uk(n: i64, m: i64, i: i64) -> BigInt {
    u(n, m, m + 1, i)
}

/// uk(N+1,m,i) − uk(N,m,i).
pub fn dn(n: i64, m: i64, i: i64) -> BigInt {
    uk(n + 1, m, i) - uk(n, m, i)
}

/// Δ = 4−16m²−12i²m²−16m−8im−36i²m−20i−15i², as stated.
pub fn discriminant(m: i64, i: i64) -> BigInt {
    let (m, i) = (z(m), z(i));
    z(4) - 16 * &m * &m
        - 12 * &i * &i * &m * &m
        - 16 * &m
        - 8 * &i * &m
        - 36 * &i * &i * &m
        - 20 * &i
        - 15 * &i * &i
}

/// (m+3)(m+1)(i−1)², the closed form of uk(3,m,i).
pub fn uk3_closed_form(m: i64, i: i64) -> BigInt {
    z(m + 3) * (m + 1) * z(i - 1).pow(2)
}

/// Stated expansion of dk(N,m,m+1,i):
/// 2Nm²−4m²+2mN²−4mN−2imN+2i²m+2im+4m+2N²−2N+5i−5iN+5i².
pub fn dk_at_min_stated(n: i64, m: i64, i: i64) -> BigInt {
    let (n, m, i) = (z(n), z(m), z(i));
    2 * &n * &m * &m - 4 * &m * &m + 2 * &m * &n * &n - 4 * &m * &n - 2 * &i * &m * &n
        + 2 * &i * &i * &m
        + 2 * &i * &m
        + 4 * &m
        + 2 * &n * &n
        - 2 * &n
        + 5 * &i
        - 5 * &i * &n
        + 5 * &i * &i
}

/// Coefficients (a, b, c) of the stated quadratic in N left after removing
/// (2N−4)m²: (2m+2)N² − (4m+2+5i+2im)N + (2im+2i²m+5i+4m+5i²).
pub fn quadratic_in_n(m: i64, i: i64) -> (BigInt, BigInt, BigInt) {
    let (m, i) = (z(m), z(i));
    let a = 2 * &m + 2;
    let b = z(0) - (4 * &m + 2 + 5 * &i + 2 * &i * &m);
    let c = 2 * &i * &m + 2 * &i * &i * &m + 5 * &i + 4 * &m + 5 * &i * &i;
    (a, b, c)
}

/// 3 × the stated leading coefficient of dk in k,
/// (i²−Ni+i+N²/3) + (2N²/3+mN−m−2N+1).
pub fn dk_lead_stated_times3(n: i64, m: i64, i: i64) -> BigInt {
    let (first, second) = dk_lead_brackets_times3(n, m, i);
    first + second
}

/// The two stated brackets of the leading coefficient, each times 3.
pub fn dk_lead_brackets_times3(n: i64, m: i64, i: i64) -> (BigInt, BigInt) {
    let (n, m, i) = (z(n), z(m), z(i));
    let first = 3 * &i * &i - 3 * &n * &i + 3 * &i + &n * &n;
    let second = 2 * &n * &n + 3 * &m * &n - 3 * &m - 6 * &n + 3;
    (first, second)
}

/// 2 × the stated expansion of dN:
/// m³ + ((N−1)/2 − i)m² + (2N−4i−2)m + (3(N−1)/2·m² − 3i + 1).
pub fn dn_stated_times2(n: i64, m: i64, i: i64) -> BigInt {
    dn_brackets_times2(n, m, i).iter().sum::<BigInt>() + 2 * z(m).pow(3)
}

/// The stated bracketed terms of dN with their m-powers, each times 2.
pub fn dn_brackets_times2(n: i64, m: i64, i: i64) -> [BigInt; 3] {
    let (n, m, i) = (z(n), z(m), z(i));
    [
        (&n - 1 - 2 * &i) * &m * &m,
        2 * (2 * &n - 4 * &i - 2) * &m,
        3 * (&n - 1) * &m * &m - 6 * &i + 2,
    ]
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, t| acc * (n - t) / (t + 1))
}

fn falling(top: i64, count: i64) -> BigInt {
    (0..count).fold(BigInt::one(), |acc, t| acc * (top - t))
}

/// The parameter box: N ∈ [3, n_max], m ∈ [1, m_max], k ∈ [m+1, m+k_span],
/// i ∈ [0, ⌊(N−1)/2⌋]; the discriminant is swept over m, i ≤ disc_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaDomain {
    pub n_max: i64,
    pub m_max: i64,
    pub k_span: i64,
    pub disc_max: i64,
}

impl Default for LemmaDomain {
    fn default() -> Self {
        LemmaDomain {
            n_max: 10,
            m_max: 10,
            k_span: 10,
            disc_max: 50,
        }
    }
}

impl LemmaDomain {
    pub fn is_empty(&self) -> bool {
        self.n_max < 3 || self.m_max < 1 || self.k_span < 1
    }

    /// Number of (N, m, k, i) tuples in the box.
    pub fn tuples(&self) -> u64 {
        if self.is_empty() {
            return 0;
        }
        (3..=self.n_max)
            .map(|n| ((n - 1) / 2 + 1) as u64 * self.m_max as u64 * self.k_span as u64)
            .fold(0u64, u64::saturating_add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// C(kq+1, N) ≥ C(q, N)(k+1)^N.
    Inequality,
    /// The full product comparison.
    Product,
    /// u(N,m,k,i) ≥ 0 for each i.
    PairInequality,
    /// Pair factors multiply back to the full products; the middle factor
    /// of odd N satisfies its single inequality.
    Pairing,
    /// dk(N,m,k,i) ≥ 0.
    DkNonnegative,
    /// dN(N,m,i) ≥ 0.
    DnNonnegative,
    /// uk(3,m,i) = (m+3)(m+1)(i−1)² on the box and on a grid that
    /// determines the polynomial.
    Uk3ClosedForm,
    /// Δ(m,i) < 0.
    DiscriminantNegative,
    /// u = uk + Σ dk telescopes.
    Telescoping,
    /// Stated dk(N,m,m+1,i) agrees with the definition.
    DkExpansion,
    /// The stated quadratic plus (2N−4)m² reproduces the dk expansion.
    DkQuadratic,
    /// Stated Δ equals b² − 4ac of the stated quadratic.
    DiscriminantFormula,
    /// Stated dN expansion agrees with the definition.
    DnExpansion,
    /// Stated bracketed terms in the dk lead and in dN are nonnegative.
    BracketsNonnegative,
    /// Stated leading coefficient of dk in k agrees with the definition.
    DkLeadCoefficient,
}

impl CheckKind {
    /// Comparisons between stated expansions and definitions; a mismatch
    /// is a transcription finding, not a failure.
    pub fn is_transcription(self) -> bool {
        matches!(
            self,
            CheckKind::DkExpansion
                | CheckKind::DkQuadratic
                | CheckKind::DiscriminantFormula
                | CheckKind::DnExpansion
                | CheckKind::DkLeadCoefficient
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaFailure {
    pub check: CheckKind,
    pub params: BTreeMap<String, i64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: String,
    pub check: Option<CheckKind>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub domain: LemmaDomain,
    pub checks: BTreeMap<CheckKind, CheckCount>,
    /// Failures of proved statements; empty unless something is broken.
    pub failures: Vec<LemmaFailure>,
    /// Mismatches between stated expansions and definitions.
    pub discrepancies: Vec<LemmaFailure>,
    pub findings: Vec<Finding>,
}

/// Entries kept per list; counts stay exact beyond it.
const MAX_RECORDED: usize = 200;

#[derive(Default)]
struct Tally {
    checks: BTreeMap<CheckKind, CheckCount>,
    failures: Vec<LemmaFailure>,
    discrepancies: Vec<LemmaFailure>,
}

impl Tally {
    fn record(
        &mut self,
        kind: CheckKind,
        ok: bool,
        params: &[(&str, i64)],
        detail: impl FnOnce() -> String,
    ) {
        let c = self.checks.entry(kind).or_default();
        c.checked += 1;
        if ok {
            return;
        }
        c.failed += 1;
        let list = if kind.is_transcription() {
            &mut self.discrepancies
        } else {
            &mut self.failures
        };
        if list.len() < MAX_RECORDED {
            list.push(LemmaFailure {
                check: kind,
                params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                detail: detail(),
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, c) in other.checks {
            let e = self.checks.entry(k).or_default();
            e.checked += c.checked;
            e.failed += c.failed;
        }
        for (mine, theirs) in [
            (&mut self.failures, other.failures),
            (&mut self.discrepancies, other.discrepancies),
        ] {
            let room = MAX_RECORDED.saturating_sub(mine.len());
            mine.extend(theirs.into_iter().take(room));
        }
        self
    }
}

fn check_n(n: i64, d: &LemmaDomain) -> Tally {
    let mut t = Tally::default();
    let imax = (n - 1) / 2;
    for m in 1..=d.m_max {
        let q = m + n - 1;
        for i in 0..=imax {
            let p = [("N", n), ("m", m), ("i", i)];
            let v = dn(n, m, i);
            t.record(CheckKind::DnNonnegative, !v.is_negative(), &p, || {
                format!("dN = {v}")
            });
            let stated = dn_stated_times2(n, m, i);
            t.record(CheckKind::DnExpansion, stated == 2 * &v, &p, || {
                format!("2·dN = {}, stated expansion × 2 = {stated}", 2 * &v)
            });
            let br = dn_brackets_times2(n, m, i);
            t.record(
                CheckKind::BracketsNonnegative,
                br.iter().all(|b| !b.is_negative()),
                &p,
                || format!("dN brackets × 2 = {br:?}"),
            );
            let (b1, b2) = dk_lead_brackets_times3(n, m, i);
            t.record(
                CheckKind::BracketsNonnegative,
                !b1.is_negative() && !b2.is_negative(),
                &p,
                || format!("dk lead brackets × 3 = ({b1}, {b2})"),
            );

            let at_min = dk(n, m, m + 1, i);
            let stated = dk_at_min_stated(n, m, i);
            t.record(CheckKind::DkExpansion, stated == at_min, &p, || {
                format!("dk(N,m,m+1,i) = {at_min}, stated expansion = {stated}")
            });
            let (a, b, c) = quadratic_in_n(m, i);
            let nn = z(n);
            let quad = &a * &nn * &nn + &b * &nn + &c + (2 * n - 4) * z(m).pow(2);
            t.record(CheckKind::DkQuadratic, quad == stated, &p, || {
                format!("quadratic + (2N−4)m² = {quad}, expansion = {stated}")
            });
        }
        for k in m + 1..=m + d.k_span {
            let p = [("N", n), ("m", m), ("k", k)];
            let kq = k * q;
            let lhs = binomial(kq + 1, n);
            let rhs = binomial(q, n) * z(k + 1).pow(n as u32);
            t.record(CheckKind::Inequality, lhs >= rhs, &p, || {
                format!("{lhs} < {rhs}")
            });
            let left = falling(kq + 1, n);
            let right = falling(q, n) * z(k + 1).pow(n as u32);
            t.record(CheckKind::Product, left >= right, &p, || {
                format!("{left} < {right}")
            });

            // pair t with N−1−t; for odd N the middle factor stands alone
            let mut pl = BigInt::one();
            let mut pr = BigInt::one();
            let mut middle_ok = true;
            for i in 0..=imax {
                let (a1, a2) = (kq + 1 - i, kq + 2 - n + i);
                let (b1, b2) = (q - i, m + i);
                if a1 == a2 && 2 * i == n - 1 {
                    pl *= a1;
                    pr *= z(b1) * (k + 1);
                    middle_ok = z(a1) >= z(b1) * (k + 1);
                } else {
                    pl *= z(a1) * a2;
                    pr *= z(b1) * b2 * z(k + 1).pow(2);
                }
            }
            t.record(CheckKind::Pairing, pl == left && pr == right && middle_ok, &p, || {
                format!("paired products ({pl}, {pr}) vs full ({left}, {right}), middle ok: {middle_ok}")
            });

            for i in 0..=imax {
                let p = [("N", n), ("m", m), ("k", k), ("i", i)];
                let uv = u(n, m, k, i);
                t.record(CheckKind::PairInequality, !uv.is_negative(), &p, || {
                    format!("u = {uv}")
                });
                let dv = dk(n, m, k, i);
                t.record(CheckKind::DkNonnegative, !dv.is_negative(), &p, || {
                    format!("dk = {dv}")
                });
                let tele: BigInt = uk(n, m, i) + (m + 1..k).map(|j| dk(n, m, j, i)).sum::<BigInt>();
                t.record(CheckKind::Telescoping, tele == uv, &p, || {
                    format!("uk + Σdk = {tele}, u = {uv}")
                });
                let lead = dk(n, m, k + 1, i) - &dv;
                let stated = dk_lead_stated_times3(n, m, i);
                t.record(
                    CheckKind::DkLeadCoefficient,
                    3 * &lead == stated,
                    &p,
                    || {
                        format!(
                            "leading coefficient = {lead}, stated = {}",
                            stated_over_3(&stated)
                        )
                    },
                );
            }
        }
    }
    t
}

fn stated_over_3(v: &BigInt) -> String {
    let three = z(3);
    if (v % &three).is_zero() {
        (v / three).to_string()
    } else {
        format!("{v}/3")
    }
}

fn check_closed_form_and_discriminant(d: &LemmaDomain) -> Tally {
    let mut t = Tally::default();
    // uk(3,m,i) has degree ≤ 4 in m and ≤ 2 in i; agreement on a 5×3 grid
    // forces the polynomial identity.
    let grid_m = (1..=5).chain(1..=d.m_max.max(0));
    for m in grid_m {
        for i in 0..=2 {
            let p = [("m", m), ("i", i)];
            let (a, b) = (uk(3, m, i), uk3_closed_form(m, i));
            t.record(CheckKind::Uk3ClosedForm, a == b, &p, || {
                format!("uk(3,m,i) = {a}, closed form = {b}")
            });
        }
    }
    for m in 1..=d.disc_max {
        for i in 0..=d.disc_max {
            let p = [("m", m), ("i", i)];
            let delta = discriminant(m, i);
            t.record(
                CheckKind::DiscriminantNegative,
                delta.is_negative(),
                &p,
                || format!("Δ = {delta}"),
            );
            let (a, b, c) = quadratic_in_n(m, i);
            let disc = &b * &b - 4 * &a * &c;
            t.record(CheckKind::DiscriminantFormula, disc == delta, &p, || {
                format!("b² − 4ac = {disc}, stated Δ = {delta}")
            });
        }
    }
    t
}

fn findings(t: &Tally) -> Vec<Finding> {
    let mut out = Vec::new();
    let v = u(3, 1, 2, 1);
    let c = uk3_closed_form(1, 1);
    out.push(Finding {
        kind: "evaluation-note".into(),
        check: Some(CheckKind::Uk3ClosedForm),
        description: format!(
            "u(3,1,2,1) = (kq+1−i)(kq+2−N+i) − (q−i)(m+i)(k+1)² with kq = 6, q = 3 is \
             (6)(6) − (2)(2)(9) = {v}, and the closed form (m+3)(m+1)(i−1)² gives {c} at (m,i) = (1,1); \
             the two agree. A value of 6 would come from (kq)(kq+1) − 36, which drops the i-shifts of \
             the defining product."
        ),
    });
    for (kind, count) in &t.checks {
        if kind.is_transcription() && count.failed > 0 {
            let mut description = format!(
                "{:?}: stated form disagrees with the definition at {} of {} tuples",
                kind, count.failed, count.checked
            );
            if *kind == CheckKind::DkLeadCoefficient {
                if let Some(ratio) = lead_ratio(t) {
                    description.push_str(&format!(
                        "; the definition's coefficient is {ratio} times the stated one at every \
                         recorded tuple, so positivity (and the reduction) is unaffected"
                    ));
                }
            }
            out.push(Finding {
                kind: "transcription-discrepancy".into(),
                check: Some(*kind),
                description,
            });
        }
    }
    out
}

/// The common ratio definition/stated for the dk leading coefficient
/// across recorded discrepancies, if there is one.
fn lead_ratio(t: &Tally) -> Option<String> {
    let mut ratio: Option<(BigInt, BigInt)> = None;
    for f in t
        .discrepancies
        .iter()
        .filter(|f| f.check == CheckKind::DkLeadCoefficient)
    {
        let (n, m, i) = (f.params["N"], f.params["m"], f.params["i"]);
        let k = f.params["k"];
        let lead = 3 * (dk(n, m, k + 1, i) - dk(n, m, k, i));
        let stated = dk_lead_stated_times3(n, m, i);
        let g = num_integer::Integer::gcd(&lead, &stated);
        if g.is_zero() {
            return None;
        }
        let r = (&lead / &g, &stated / &g);
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev == r => {}
            Some(_) => return None,
        }
    }
    ratio.map(|(a, b)| {
        if b.is_one() {
            a.to_string()
        } else {
            format!("{a}/{b}")
        }
    })
}

/// Runs every check over the domain.
pub fn verify_lemma(domain: &LemmaDomain) -> Result<LemmaReport, LemmaError> {
    let tuples = domain.tuples();
    if tuples > MAX_BOX_TUPLES || domain.disc_max > 10_000 {
        return Err(LemmaError::BoxTooLarge {
            tuples: tuples.max(domain.disc_max.unsigned_abs().saturating_pow(2)),
            limit: MAX_BOX_TUPLES,
        });
    }
    if domain.is_empty() {
        return Ok(LemmaReport {
            domain: *domain,
            checks: BTreeMap::new(),
            failures: Vec::new(),
            discrepancies: Vec::new(),
            findings: Vec::new(),
        });
    }
    let tally = (3..=domain.n_max)
        .into_par_iter()
        .map(|n| check_n(n, domain))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
        .merge(check_closed_form_and_discriminant(domain));
    let findings = findings(&tally);
    Ok(LemmaReport {
        domain: *domain,
        checks: tally.checks,
        failures: tally.failures,
        discrepancies: tally.discrepancies,
        findings,
    })
}

impl LemmaReport {
    pub fn total_failures(&self) -> u64 {
        self.checks
            .iter()
            .filter(|(k, _)| !k.is_transcription())
            .map(|(_, c)| c.failed)
            .sum()
    }

    pub fn count(&self, kind: CheckKind) -> CheckCount {
        self.checks.get(&kind).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
