//! Seeded sweeps over random configurations.

use rayon::prelude::*;
use serde::Serialize;
use waldschmidt_core::analysis::{
    demailly_check, els_degree_check, ev_check, main_theorem_check, render_table, ElsVerdict,
    Engine, MainTheoremVerdict,
};
use waldschmidt_core::configs::random_configuration;
use waldschmidt_core::fields::FieldSpec;
use waldschmidt_core::VERSION;

use crate::args::{Format, ScanArgs};
use crate::commands::{engine, parse_field, Outcome};
use crate::{CliError, EXIT_INTERNAL, EXIT_OK, EXIT_VIOLATION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanTrial {
    pub trial: u32,
    pub seed: u64,
    pub config_hash: String,
    pub alphas: Vec<u32>,
    pub provenance: Vec<String>,
    /// Pairs (m, k) with α(kZ)/k below the Demailly ratio of m.
    pub demailly_violations: Vec<(u32, u32)>,
    pub demailly_equalities: usize,
    pub ev_failures: Vec<(u32, u32)>,
    /// One verdict per m.
    pub main_theorem: Vec<MainTheoremVerdict>,
    pub els: Vec<ElsVerdict>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScanTrial {
    fn failed(trial: u32, seed: u64, error: String) -> Self {
        ScanTrial {
            trial,
            seed,
            config_hash: String::new(),
            alphas: Vec::new(),
            provenance: Vec::new(),
            demailly_violations: Vec::new(),
            demailly_equalities: 0,
            ev_failures: Vec::new(),
            main_theorem: Vec::new(),
            els: Vec::new(),
            warnings: Vec::new(),
            error: Some(error),
        }
    }

    /// Applicable main-theorem verdicts whose unconditional bounds fail.
    fn main_theorem_failures(&self) -> Vec<&MainTheoremVerdict> {
        self.main_theorem
            .iter()
            .filter(|v| v.applicable && !v.holds())
            .collect()
    }

    fn lower_bound_exceptions(&self) -> Vec<u32> {
        self.main_theorem
            .first()
            .map(|v| v.lower_bound_exceptions.clone())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub trials: u32,
    pub errors: u32,
    pub demailly_violation_trials: u32,
    pub ev_failure_trials: u32,
    pub main_theorem_failure_trials: u32,
    pub els_failure_trials: u32,
    /// Trials with some α(jZ) < j·⌊s^(1/N)⌋.
    pub lower_bound_exception_trials: u32,
}

/// Everything needed to rerun the offending trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub trial: u32,
    pub seed: u64,
    pub dim: usize,
    pub points: usize,
    pub m_max: u32,
    pub field: FieldSpec,
    pub version: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub command: String,
    pub version: String,
    pub dim: usize,
    pub points: usize,
    pub m_max: u32,
    pub field: FieldSpec,
    pub base_seed: u64,
    pub engine: String,
    pub trials: Vec<ScanTrial>,
    pub summary: ScanSummary,
    pub violations: Vec<Violation>,
}

fn run_trial(e: &Engine, a: &ScanArgs, field: FieldSpec, trial: u32) -> ScanTrial {
    let seed = a.seed.wrapping_add(trial as u64);
    let z = match random_configuration(a.dim, a.points, field, seed) {
        Ok(z) => z,
        Err(err) => return ScanTrial::failed(trial, seed, err.to_string()),
    };
    let t = match e.alpha_table(&z, a.m_max) {
        Ok(t) => t,
        Err(err) => return ScanTrial::failed(trial, seed, err.to_string()),
    };
    let demailly = demailly_check(&t);
    let ev = ev_check(&t);
    ScanTrial {
        trial,
        seed,
        config_hash: z.content_hash(),
        alphas: t.alphas(),
        provenance: t.values.iter().map(|v| v.provenance.to_string()).collect(),
        demailly_violations: demailly.violations,
        demailly_equalities: demailly.equalities.len(),
        ev_failures: ev.failures,
        main_theorem: (1..=a.m_max)
            .filter_map(|m| main_theorem_check(a.dim, m, a.points, &t))
            .collect(),
        els: (1..).map_while(|r| els_degree_check(&t, r)).collect(),
        warnings: t.warnings.iter().map(ToString::to_string).collect(),
        error: None,
    }
}

fn violations(a: &ScanArgs, field: FieldSpec, trials: &[ScanTrial]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind: &str, t: &ScanTrial, detail: String| {
        out.push(Violation {
            kind: kind.into(),
            trial: t.trial,
            seed: t.seed,
            dim: a.dim,
            points: a.points,
            m_max: a.m_max,
            field,
            version: VERSION.into(),
            detail,
        })
    };
    for t in trials {
        if let Some(e) = &t.error {
            push("error", t, e.clone());
        }
        if !t.demailly_violations.is_empty() {
            push(
                "demailly",
                t,
                format!(
                    "(m, k) pairs {:?} with alphas {:?}",
                    t.demailly_violations, t.alphas
                ),
            );
        }
        if !t.ev_failures.is_empty() {
            push(
                "esnault-viehweg",
                t,
                format!(
                    "(m, k) pairs {:?} with alphas {:?}",
                    t.ev_failures, t.alphas
                ),
            );
        }
        for v in t.main_theorem_failures() {
            push(
                "main-theorem",
                t,
                format!(
                    "m={}: α={} against bound {} (k={})",
                    v.m, v.alpha, v.degree_bound, v.k
                ),
            );
        }
        for v in t.els.iter().filter(|v| !v.holds) {
            push(
                "els-degree",
                t,
                format!("r={}: α(NrZ)={} < r·α(Z)={}", v.r, v.alpha_nr, v.r_alpha),
            );
        }
    }
    out
}

fn summary(trials: &[ScanTrial]) -> ScanSummary {
    let count = |f: &dyn Fn(&ScanTrial) -> bool| trials.iter().filter(|t| f(t)).count() as u32;
    ScanSummary {
        trials: trials.len() as u32,
        errors: count(&|t| t.error.is_some()),
        demailly_violation_trials: count(&|t| !t.demailly_violations.is_empty()),
        ev_failure_trials: count(&|t| !t.ev_failures.is_empty()),
        main_theorem_failure_trials: count(&|t| !t.main_theorem_failures().is_empty()),
        els_failure_trials: count(&|t| t.els.iter().any(|v| !v.holds)),
        lower_bound_exception_trials: count(&|t| !t.lower_bound_exceptions().is_empty()),
    }
}

impl ScanReport {
    /// 2 for errors and failed theorem checks, else 3 for Demailly violations.
    pub fn exit_code(&self) -> u8 {
        let s = &self.summary;
        if s.errors + s.ev_failure_trials + s.main_theorem_failure_trials + s.els_failure_trials > 0
        {
            EXIT_INTERNAL
        } else if s.demailly_violation_trials > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::from(
            "trial,seed,config_hash,alphas,demailly_violations,ev_failures,main_theorem_holds,lower_bound_exceptions,error\n",
        );
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                t.trial,
                t.seed,
                t.config_hash,
                join(&t.alphas, ";"),
                t.demailly_violations.len(),
                t.ev_failures.len(),
                t.main_theorem_failures().is_empty(),
                join(&t.lower_bound_exceptions(), ";"),
                t.error.as_deref().unwrap_or("").replace(',', ";"),
            ));
        }
        out
    }

    fn to_text(&self) -> String {
        let mut out = format!(
            "scan | N={} s={} m_max={} field={} | seeds {}..={} | {}\n",
            self.dim,
            self.points,
            self.m_max,
            self.field,
            self.base_seed,
            self.base_seed.wrapping_add(self.trials.len() as u64 - 1),
            self.engine
        );
        let rows: Vec<Vec<String>> = self
            .trials
            .iter()
            .map(|t| {
                if let Some(e) = &t.error {
                    return vec![
                        t.trial.to_string(),
                        t.seed.to_string(),
                        format!("error: {e}"),
                    ];
                }
                vec![
                    t.trial.to_string(),
                    t.seed.to_string(),
                    join(&t.alphas, " "),
                    ok(t.demailly_violations.is_empty()).into(),
                    ok(t.ev_failures.is_empty()).into(),
                    ok(t.main_theorem_failures().is_empty()).into(),
                    match t.lower_bound_exceptions() {
                        v if v.is_empty() => "-".into(),
                        v => join(&v, " "),
                    },
                ]
            })
            .collect();
        out.push_str(&render_table(
            &[
                "trial", "seed", "alphas", "demailly", "ev", "main", "below_jk",
            ],
            &rows,
        ));
        let s = &self.summary;
        out.push_str(&format!(
            "\ntrials {} | errors {} | demailly violations {} | ev failures {} | main theorem failures {} | els failures {} | lower-bound exceptions {}\n",
            s.trials,
            s.errors,
            s.demailly_violation_trials,
            s.ev_failure_trials,
            s.main_theorem_failure_trials,
            s.els_failure_trials,
            s.lower_bound_exception_trials
        ));
        for v in &self.violations {
            out.push_str(&format!(
                "violation [{}] trial {} seed {} (N={} s={} m_max={} field={} version {}): {}\n",
                v.kind, v.trial, v.seed, v.dim, v.points, v.m_max, v.field, v.version, v.detail
            ));
        }
        out
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn join(v: &[u32], sep: &str) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

/// Runs every trial; results are ordered by trial index whatever the
/// completion order.
pub fn scan(a: &ScanArgs) -> Result<ScanReport, CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if a.m_max == 0 {
        return Err(CliError::Usage("--m-max must be at least 1".into()));
    }
    if a.dim < 2 || a.points == 0 {
        return Err(CliError::Usage(format!(
            "need --dim ≥ 2 and --points ≥ 1 (got {} and {})",
            a.dim, a.points
        )));
    }
    let field = parse_field(a.engine.field.as_deref(), FieldSpec::Rational)?;
    let e = engine(&a.engine, field)?;
    // surface a too-small field as a usage error instead of per-trial failures
    random_configuration(a.dim, a.points, field, a.seed)?;
    let trials: Vec<ScanTrial> = (0..a.trials)
        .into_par_iter()
        .map(|t| run_trial(&e, a, field, t))
        .collect();
    Ok(ScanReport {
        command: "scan".into(),
        version: VERSION.into(),
        dim: a.dim,
        points: a.points,
        m_max: a.m_max,
        field,
        base_seed: a.seed,
        engine: if a.engine.exact {
            "exact".into()
        } else {
            "modular".into()
        },
        summary: summary(&trials),
        violations: violations(a, field, &trials),
        trials,
    })
}

pub(crate) fn run(a: &ScanArgs) -> Result<Outcome, CliError> {
    let report = scan(a)?;
    let code = report.exit_code();
    Ok(Outcome {
        report: report.render(a.output.format),
        output: a.output.output.clone(),
        files: Vec::new(),
        notes: Vec::new(),
        code,
    })
}
