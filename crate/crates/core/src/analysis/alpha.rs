//! Initial degrees α(mZ) and tables of them.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::configs::PointConfiguration;
use crate::exactla::{
    is_kernel_vector, modular_kernel_vector, modular_rank, rank_kernel, LinalgError, Provenance,
    RankResult, DEFAULT_MAX_PRIMES,
};
use crate::fields::{FieldElement, FieldSpec, DEFAULT_PRIMES};
use crate::interpolation::{
    build_matrix_with_caps, expected_alpha_bound, Caps, InterpolationError,
};
use crate::poly::Form;

/// How ranks are decided while searching for α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankMode {
    /// Fraction-free elimination over Z or Z[ω] for every probe.
    Exact,
    /// Multi-prime consensus for probes. The certificate is rebuilt from
    /// modular images and checked exactly; exact elimination runs when that
    /// fails or the primes disagree.
    Modular(Vec<u64>),
}

/// Full-rank evidence one degree below α.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub degree: u32,
    pub rank: usize,
    pub cols: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaValue {
    pub m: u32,
    pub alpha: u32,
    /// A nonzero form of degree α vanishing to order m on Z, re-verified.
    pub certificate: Option<Form>,
    pub witness: Option<RankWitness>,
    pub provenance: Provenance,
}

/// Identifies the configuration a table was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigRef {
    pub label: String,
    pub hash: String,
    pub dim: usize,
    pub points: usize,
    pub field: FieldSpec,
}

impl ConfigRef {
    pub fn of(z: &PointConfiguration) -> Self {
        ConfigRef {
            label: z.label().to_string(),
            hash: z.content_hash(),
            dim: z.dim(),
            points: z.len(),
            field: z.field(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TableIssue {
    BelowMultiplicity {
        m: u32,
        alpha: u32,
    },
    MonotoneStep {
        m: u32,
        alpha: u32,
        next: u32,
    },
    Subadditivity {
        a: u32,
        b: u32,
        sum: u32,
        alpha_sum: u32,
    },
}

impl fmt::Display for TableIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableIssue::BelowMultiplicity { m, alpha } => write!(f, "α({m}Z) = {alpha} < {m}"),
            TableIssue::MonotoneStep { m, alpha, next } => {
                write!(
                    f,
                    "monotone step fails: α({}Z) = {next} < α({m}Z) + 1 = {}",
                    m + 1,
                    alpha + 1
                )
            }
            TableIssue::Subadditivity {
                a,
                b,
                sum,
                alpha_sum,
            } => {
                write!(
                    f,
                    "subadditivity fails: α({}Z) = {alpha_sum} > α({a}Z) + α({b}Z) = {sum}",
                    a + b
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTable {
    pub config: ConfigRef,
    /// `values[i]` holds m = i + 1.
    pub values: Vec<AlphaValue>,
    /// Invariant failures that are not errors (monotone step over F_p).
    pub warnings: Vec<TableIssue>,
}

impl AlphaTable {
    /// A table from bare α values for m = 1, 2, …, without certificates.
    pub fn from_values(dim: usize, points: usize, field: FieldSpec, alphas: &[u32]) -> Self {
        let values = alphas
            .iter()
            .enumerate()
            .map(|(i, &alpha)| AlphaValue {
                m: i as u32 + 1,
                alpha,
                certificate: None,
                witness: None,
                provenance: Provenance::Exact,
            })
            .collect();
        AlphaTable {
            config: ConfigRef {
                label: "from values".into(),
                hash: String::new(),
                dim,
                points,
                field,
            },
            values,
            warnings: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn m_max(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn alpha(&self, m: u32) -> Option<u32> {
        (m >= 1)
            .then(|| self.values.get(m as usize - 1))
            .flatten()
            .map(|v| v.alpha)
    }

    pub fn alphas(&self) -> Vec<u32> {
        self.values.iter().map(|v| v.alpha).collect()
    }

    /// α(mZ) ≥ m, α((m+1)Z) ≥ α(mZ)+1 and α((a+b)Z) ≤ α(aZ)+α(bZ).
    pub fn invariant_failures(&self) -> Vec<TableIssue> {
        let a = self.alphas();
        let mut out = Vec::new();
        for (i, &x) in a.iter().enumerate() {
            let m = i as u32 + 1;
            if x < m {
                out.push(TableIssue::BelowMultiplicity { m, alpha: x });
            }
        }
        for w in 0..a.len().saturating_sub(1) {
            if a[w + 1] < a[w] + 1 {
                out.push(TableIssue::MonotoneStep {
                    m: w as u32 + 1,
                    alpha: a[w],
                    next: a[w + 1],
                });
            }
        }
        for i in 0..a.len() {
            for j in i..a.len() {
                if i + j + 1 < a.len() && a[i + j + 1] > a[i] + a[j] {
                    out.push(TableIssue::Subadditivity {
                        a: i as u32 + 1,
                        b: j as u32 + 1,
                        sum: a[i] + a[j],
                        alpha_sum: a[i + j + 1],
                    });
                }
            }
        }
        out
    }

    /// Failures that count as errors for this table's field; over F_p the
    /// monotone step is only a warning.
    pub fn hard_failures(&self) -> Vec<TableIssue> {
        let prime = matches!(self.config.field, FieldSpec::Prime(_));
        self.invariant_failures()
            .into_iter()
            .filter(|i| !(prime && matches!(i, TableIssue::MonotoneStep { .. })))
            .collect()
    }
}

/// Rank outcome at one degree.
#[derive(Debug, Clone)]
struct Probe {
    rank: usize,
    cols: usize,
    provenance: Provenance,
    exact: Option<RankResult>,
}

impl Probe {
    fn has_kernel(&self) -> bool {
        self.rank < self.cols
    }

    fn witness(&self, degree: u32) -> RankWitness {
        RankWitness {
            degree,
            rank: self.rank,
            cols: self.cols,
            provenance: self.provenance.clone(),
        }
    }
}

/// Computes α(mZ) by exact or modular rank probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Engine {
    pub mode: RankMode,
    pub caps: Caps,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::modular(DEFAULT_PRIMES.to_vec())
    }
}

impl Engine {
    pub fn exact() -> Self {
        Engine {
            mode: RankMode::Exact,
            caps: Caps::default(),
        }
    }

    pub fn modular(primes: Vec<u64>) -> Self {
        Engine {
            mode: RankMode::Modular(primes),
            caps: Caps::default(),
        }
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    fn probe(
        &self,
        z: &PointConfiguration,
        m: u32,
        d: u32,
        exact: bool,
    ) -> Result<Probe, AnalysisError> {
        let c = build_matrix_with_caps(z, m, d, self.caps)?;
        let cols = c.matrix.cols();
        let use_modular = match (&self.mode, z.field()) {
            (_, FieldSpec::Prime(_)) | (RankMode::Exact, _) => None,
            (RankMode::Modular(primes), _) => (!exact).then_some(primes),
        };
        if let Some(primes) = use_modular {
            match modular_rank(&c.matrix, primes) {
                Ok(r) => {
                    return Ok(Probe {
                        rank: r.rank,
                        cols,
                        provenance: r.provenance,
                        exact: None,
                    })
                }
                Err(LinalgError::ConsensusFailure(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        let r = rank_kernel(&c.matrix);
        if let Some(v) = &r.certificate {
            if !is_kernel_vector(&c.matrix, v) {
                return Err(AnalysisError::CertificateRejected { m, d });
            }
        }
        Ok(Probe {
            rank: r.rank,
            cols,
            provenance: Provenance::Exact,
            exact: Some(r),
        })
    }

    /// Kernel vector from modular images, verified exactly. Skipped in
    /// exact mode and over prime fields.
    fn reconstructed_kernel(
        &self,
        z: &PointConfiguration,
        m: u32,
        d: u32,
    ) -> Result<Option<Vec<FieldElement>>, AnalysisError> {
        if self.mode == RankMode::Exact || matches!(z.field(), FieldSpec::Prime(_)) {
            return Ok(None);
        }
        let c = build_matrix_with_caps(z, m, d, self.caps)?;
        Ok(modular_kernel_vector(&c.matrix, DEFAULT_MAX_PRIMES)
            .filter(|v| is_kernel_vector(&c.matrix, v)))
    }

    fn upper_degree(&self, z: &PointConfiguration, m: u32) -> Result<(u32, bool), AnalysisError> {
        let bound = expected_alpha_bound(z.dim(), m, z.len());
        Caps::check(&self.caps, m, 0)?;
        if bound <= self.caps.max_degree {
            Ok((bound, true))
        } else {
            Ok((self.caps.max_degree, false))
        }
    }

    /// α(mZ) by binary search on [m, expected bound].
    pub fn alpha(&self, z: &PointConfiguration, m: u32) -> Result<AlphaValue, AnalysisError> {
        let (hi_start, guaranteed) = self.upper_degree(z, m)?;
        let mut cache: BTreeMap<u32, Probe> = BTreeMap::new();
        if !guaranteed {
            let p = self.probe(z, m, hi_start, false)?;
            if !p.has_kernel() {
                return Err(InterpolationError::DegreeCap {
                    value: expected_alpha_bound(z.dim(), m, z.len()),
                    cap: self.caps.max_degree,
                }
                .into());
            }
            cache.insert(hi_start, p);
        }
        // kernel empty at lo, nonempty at hi
        let (mut lo, mut hi) = (m - 1, hi_start);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let p = self.probe(z, m, mid, false)?;
            let k = p.has_kernel();
            cache.insert(mid, p);
            if k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        self.certify(z, m, hi, cache)
    }

    /// α(mZ) by probing d = m, m+1, … in turn.
    pub fn alpha_linear_scan(
        &self,
        z: &PointConfiguration,
        m: u32,
    ) -> Result<AlphaValue, AnalysisError> {
        let (hi, _) = self.upper_degree(z, m)?;
        let mut cache = BTreeMap::new();
        for d in m..=hi {
            let p = self.probe(z, m, d, false)?;
            let k = p.has_kernel();
            cache.insert(d, p);
            if k {
                return self.certify(z, m, d, cache);
            }
        }
        Err(InterpolationError::DegreeCap {
            value: expected_alpha_bound(z.dim(), m, z.len()),
            cap: self.caps.max_degree,
        }
        .into())
    }

    /// Given kernel at `d` (possibly only modulo the primes) and none below,
    /// finds the exact α ≥ d with a verified certificate.
    fn certify(
        &self,
        z: &PointConfiguration,
        m: u32,
        mut d: u32,
        mut cache: BTreeMap<u32, Probe>,
    ) -> Result<AlphaValue, AnalysisError> {
        let cert = loop {
            if let Some(v) = self.reconstructed_kernel(z, m, d)? {
                break v;
            }
            let exact = match cache.get(&d).and_then(|p| p.exact.clone()) {
                Some(r) => r,
                None => {
                    let p = self.probe(z, m, d, true)?;
                    let r = p.exact.clone().expect("exact probe");
                    cache.insert(d, p);
                    r
                }
            };
            match exact.certificate {
                Some(v) => break v,
                None if d >= self.caps.max_degree => {
                    return Err(InterpolationError::DegreeCap {
                        value: d + 1,
                        cap: self.caps.max_degree,
                    }
                    .into())
                }
                None => d += 1,
            }
        };
        let form = Form::new(z.dim(), d, cert).map_err(AnalysisError::Internal)?;
        if !form.vanishes_on(z, m)? {
            return Err(AnalysisError::CertificateRejected { m, d });
        }
        let below = match cache.remove(&(d - 1)) {
            Some(p) => p,
            None => self.probe(z, m, d - 1, false)?,
        };
        if below.has_kernel() {
            return Err(AnalysisError::Internal(format!(
                "degree {} has a kernel below the certified α({m}Z) = {d}",
                d - 1
            )));
        }
        let witness = below.witness(d - 1);
        Ok(AlphaValue {
            m,
            alpha: d,
            certificate: Some(form),
            provenance: witness.provenance.clone(),
            witness: Some(witness),
        })
    }

    fn compute_table(
        &self,
        z: &PointConfiguration,
        m_max: u32,
    ) -> Result<AlphaTable, AnalysisError> {
        let values = (1..=m_max)
            .into_par_iter()
            .map(|m| self.alpha(z, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlphaTable {
            config: ConfigRef::of(z),
            values,
            warnings: Vec::new(),
        })
    }

    /// α(mZ) for m = 1..=m_max. Invariant failures under modular probes
    /// trigger a fully exact recomputation; failures that survive it are
    /// errors (monotone-step failures over F_p become warnings).
    pub fn alpha_table(
        &self,
        z: &PointConfiguration,
        m_max: u32,
    ) -> Result<AlphaTable, AnalysisError> {
        if m_max == 0 {
            return Err(InterpolationError::ZeroMultiplicity.into());
        }
        let mut table = self.compute_table(z, m_max)?;
        if !table.hard_failures().is_empty() && self.mode != RankMode::Exact {
            let exact = Engine {
                mode: RankMode::Exact,
                caps: self.caps,
            };
            table = exact.compute_table(z, m_max)?;
        }
        let hard = table.hard_failures();
        if !hard.is_empty() {
            return Err(AnalysisError::InvariantViolation(hard));
        }
        table.warnings = table.invariant_failures();
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::{PointConfiguration, ProjectivePoint};

    fn single_point(field: FieldSpec) -> PointConfiguration {
        let p = ProjectivePoint::new(vec![
            field.from_i64(1),
            field.from_i64(2),
            field.from_i64(3),
        ])
        .unwrap();
        PointConfiguration::new(2, field, vec![p], "one point").unwrap()
    }

    #[test]
    fn single_point_alpha_is_m() {
        for engine in [Engine::exact(), Engine::default()] {
            let z = single_point(FieldSpec::Rational);
            let v = engine.alpha(&z, 3).unwrap();
            assert_eq!(v.alpha, 3);
            assert_eq!(engine.alpha_linear_scan(&z, 3).unwrap().alpha, 3);
            let t = engine.alpha_table(&z, 4).unwrap();
            assert_eq!(t.alphas(), vec![1, 2, 3, 4]);
        }
    }

    #[test]
    fn three_collinear_points() {
        let f = FieldSpec::Rational;
        let pts = [[1, 0, 0], [1, 1, 0], [1, 2, 0]]
            .iter()
            .map(|c| ProjectivePoint::new(c.iter().map(|&x| f.from_i64(x)).collect()).unwrap())
            .collect();
        let z = PointConfiguration::new(2, f, pts, "line").unwrap();
        let v = Engine::exact().alpha(&z, 1).unwrap();
        assert_eq!(v.alpha, 1);
        assert_eq!(v.witness.unwrap().degree, 0);
    }

    #[test]
    fn table_invariants() {
        let t = AlphaTable::from_values(2, 1, FieldSpec::Rational, &[5, 5]);
        assert_eq!(
            t.invariant_failures(),
            vec![TableIssue::MonotoneStep {
                m: 1,
                alpha: 5,
                next: 5
            }]
        );
        let t = AlphaTable::from_values(2, 1, FieldSpec::Rational, &[1, 3, 4]);
        assert!(matches!(
            t.invariant_failures()[0],
            TableIssue::Subadditivity { a: 1, b: 1, .. }
        ));
        let t = AlphaTable::from_values(2, 1, FieldSpec::Prime(7), &[2, 2]);
        assert!(t.hard_failures().is_empty());
    }

    #[test]
    fn degree_cap_is_reported() {
        let z = single_point(FieldSpec::Rational);
        let engine = Engine::exact().with_caps(Caps {
            max_degree: 2,
            max_multiplicity: 16,
        });
        assert!(matches!(
            engine.alpha(&z, 3),
            Err(AnalysisError::Interpolation(
                InterpolationError::DegreeCap { .. }
            ))
        ));
    }
}
