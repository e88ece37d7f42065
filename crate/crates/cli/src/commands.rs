//! One function per subcommand; each returns the rendered report and its
//! exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use waldschmidt_core::analysis::{
    demailly_check, render_table, AlphaTable, AlphaValue, ConfigRef, Engine, RankWitness,
    TableReport,
};
use waldschmidt_core::configs::{
    fermat12_configuration, random_configuration, star_configuration_with_arrangement,
    star_from_arrangement, HyperplaneArrangement, PointConfiguration,
};
use waldschmidt_core::fields::{is_prime, FieldSpec, MAX_PRIME, MIN_DEFAULT_PRIME};
use waldschmidt_core::lemma::{verify_lemma, CheckKind, LemmaDomain, LemmaError, LemmaReport};
use waldschmidt_core::poly::Certificate;
use waldschmidt_core::VERSION;

use crate::args::{
    AlphaArgs, Cli, Command, EngineArgs, FermatArgs, Format, LemmaArgs, OutputArgs, SourceArgs,
    StarArgs, TableArgs,
};
use crate::{scan, CliError, EXIT_INTERNAL, EXIT_OK, EXIT_VIOLATION};

/// A finished report: the text, where it goes, extra files, and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub output: Option<PathBuf>,
    pub files: Vec<(PathBuf, String)>,
    /// Lines for stderr.
    pub notes: Vec<String>,
    pub code: u8,
}

impl Outcome {
    fn new(report: String, out: &OutputArgs, code: u8) -> Self {
        Outcome {
            report,
            output: out.output.clone(),
            files: Vec::new(),
            notes: Vec::new(),
            code,
        }
    }
}

pub(crate) fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let jobs = match &cli.command {
        Command::Alpha(a) => a.engine.jobs,
        Command::Table(a) | Command::Bounds(a) => a.engine.jobs,
        Command::Scan(a) => a.engine.jobs,
        Command::Star(a) => a.engine.jobs,
        Command::Fermat12(a) => a.engine.jobs,
        Command::Lemma(a) => a.jobs,
    };
    let work = || match &cli.command {
        Command::Alpha(a) => alpha(a),
        Command::Table(a) => table(a, "table", false),
        Command::Bounds(a) => table(a, "bounds", true),
        Command::Scan(a) => scan::run(a),
        Command::Star(a) => star(a),
        Command::Fermat12(a) => fermat12(a),
        Command::Lemma(a) => lemma(a),
    };
    match jobs {
        None => work(),
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
    }
}

pub(crate) fn parse_field(field: Option<&str>, default: FieldSpec) -> Result<FieldSpec, CliError> {
    match field {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|e| CliError::Usage(format!("--field: {e}"))),
    }
}

pub(crate) fn engine(args: &EngineArgs, field: FieldSpec) -> Result<Engine, CliError> {
    if args.exact {
        if args.primes.is_some() {
            return Err(CliError::Usage(
                "--exact and --primes are mutually exclusive".into(),
            ));
        }
        return Ok(Engine::exact());
    }
    let Some(primes) = &args.primes else {
        return Ok(Engine::default());
    };
    if primes.len() < 2 {
        return Err(CliError::Usage("--primes needs at least two primes".into()));
    }
    for &p in primes {
        if !is_prime(p) || !(MIN_DEFAULT_PRIME..MAX_PRIME).contains(&p) {
            return Err(CliError::Usage(format!(
                "--primes: {p} is not a prime in [2^20, 2^62)"
            )));
        }
        if field == FieldSpec::Eisenstein && p % 3 != 1 {
            return Err(CliError::Usage(format!(
                "--primes: {p} is not 1 mod 3, needed over eisenstein"
            )));
        }
    }
    Ok(Engine::modular(primes.clone()))
}

fn check_m(name: &str, m: u32) -> Result<(), CliError> {
    if m == 0 {
        return Err(CliError::Usage(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// The configuration and, for random ones, the seed that produced it.
fn load(
    source: &SourceArgs,
    field: Option<&str>,
) -> Result<(PointConfiguration, Option<u64>), CliError> {
    match &source.input {
        Some(path) => {
            let z = PointConfiguration::from_json(&read(path)?).map_err(|e| CliError::Input {
                path: path.clone(),
                source: e,
            })?;
            if let Some(f) = field {
                let wanted = parse_field(Some(f), z.field())?;
                if wanted != z.field() {
                    return Err(CliError::Usage(format!(
                        "--field {wanted} disagrees with the {} field of {}",
                        z.field(),
                        path.display()
                    )));
                }
            }
            Ok((z, None))
        }
        None => {
            let (Some(dim), Some(points)) = (source.dim, source.points) else {
                return Err(CliError::Usage(
                    "give --input, or both --dim and --points".into(),
                ));
            };
            let field = parse_field(field, FieldSpec::Rational)?;
            Ok((
                random_configuration(dim, points, field, source.seed)?,
                Some(source.seed),
            ))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: ConfigRef,
    pub m: u32,
    pub alpha: u32,
    pub provenance: String,
    pub witness: Option<RankWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl AlphaReport {
    fn new(
        z: &PointConfiguration,
        seed: Option<u64>,
        v: &AlphaValue,
        with_certificate: bool,
    ) -> Self {
        AlphaReport {
            command: "alpha".into(),
            version: VERSION.into(),
            seed,
            config: ConfigRef::of(z),
            m: v.m,
            alpha: v.alpha,
            provenance: v.provenance.to_string(),
            witness: v.witness.clone(),
            certificate: if with_certificate {
                v.certificate.as_ref().map(|f| f.to_certificate())
            } else {
                None
            },
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => {
                let w = self.witness.as_ref();
                format!(
                    "m,alpha,provenance,witness_degree,witness_rank,witness_cols\n{},{},{},{},{},{}\n",
                    self.m,
                    self.alpha,
                    self.provenance,
                    w.map_or(String::new(), |w| w.degree.to_string()),
                    w.map_or(String::new(), |w| w.rank.to_string()),
                    w.map_or(String::new(), |w| w.cols.to_string()),
                )
            }
            Format::Text => {
                let mut out = header_line("alpha", &self.config, self.seed);
                let w = self.witness.as_ref();
                out.push_str(&render_table(
                    &["m", "alpha", "provenance", "witness"],
                    &[vec![
                        self.m.to_string(),
                        self.alpha.to_string(),
                        self.provenance.clone(),
                        w.map_or("-".into(), |w| {
                            format!("rank {} of {} at degree {}", w.rank, w.cols, w.degree)
                        }),
                    ]],
                ));
                if let Some(c) = &self.certificate {
                    out.push_str(&certificate_line(self.m, c));
                }
                out
            }
        }
    }
}

fn header_line(command: &str, c: &ConfigRef, seed: Option<u64>) -> String {
    let mut out = format!(
        "{command} | {} | N={} s={} field={} | hash {}\n",
        c.label, c.dim, c.points, c.field, c.hash
    );
    if let Some(seed) = seed {
        out.push_str(&format!("seed {seed}\n"));
    }
    out
}

fn certificate_line(m: u32, c: &Certificate) -> String {
    format!(
        "certificate m={m} degree {} ({}): {}\n",
        c.degree,
        c.order,
        c.coefficients.join(" ")
    )
}

fn alpha(a: &AlphaArgs) -> Result<Outcome, CliError> {
    check_m("--m", a.m)?;
    let (z, seed) = load(&a.source, a.engine.field.as_deref())?;
    let e = engine(&a.engine, z.field())?;
    let v = e.alpha(&z, a.m)?;
    let report = AlphaReport::new(&z, seed, &v, a.engine.certificate);
    Ok(Outcome::new(
        report.render(a.output.format),
        &a.output,
        EXIT_OK,
    ))
}

fn render_table_report(r: &TableReport, out: &OutputArgs, with_certificates: bool) -> String {
    match out.format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(out.decimals),
        Format::Text => {
            let mut text = r.to_text(out.decimals);
            if with_certificates {
                for row in &r.rows {
                    if let Some(c) = &row.certificate {
                        text.push_str(&certificate_line(row.m, c));
                    }
                }
            }
            text
        }
    }
}

/// Exit code for a finished table: MISMATCH beats a Demailly violation.
fn table_code(r: &TableReport, t: &AlphaTable) -> u8 {
    if r.has_mismatch() {
        EXIT_INTERNAL
    } else if !demailly_check(t).violations.is_empty() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn table(a: &TableArgs, command: &str, with_summary: bool) -> Result<Outcome, CliError> {
    check_m("--m-max", a.m_max)?;
    let (z, seed) = load(&a.source, a.engine.field.as_deref())?;
    let e = engine(&a.engine, z.field())?;
    let t = e.alpha_table(&z, a.m_max)?;
    let mut r = TableReport::new(command, &t, |_| None, a.engine.certificate, with_summary);
    r.seed = seed;
    let code = table_code(&r, &t);
    Ok(Outcome::new(
        render_table_report(&r, &a.output, a.engine.certificate),
        &a.output,
        code,
    ))
}

/// α((1+kN)Z) = (k+1)d − N + 1.
pub fn star_expected(dim: usize, d: usize, m: u32) -> Option<u32> {
    let n = dim as u32;
    ((m - 1) % n == 0).then(|| ((m - 1) / n + 1) * d as u32 + 1 - n)
}

/// α(3kZ) = 9k and α((3k+2)Z) = 9k + 8.
pub fn fermat_expected(m: u32) -> Option<u32> {
    match m % 3 {
        0 => Some(3 * m),
        2 => Some(9 * (m / 3) + 8),
        _ => None,
    }
}

fn star(a: &StarArgs) -> Result<Outcome, CliError> {
    check_m("--m-max", a.m_max)?;
    let field = parse_field(a.engine.field.as_deref(), FieldSpec::Rational)?;
    let (z, d, seed) = match &a.hyperplanes {
        Some(path) => {
            let arr =
                HyperplaneArrangement::from_json(&read(path)?).map_err(|e| CliError::Input {
                    path: path.clone(),
                    source: e,
                })?;
            if a.engine.field.is_some() && arr.field() != field {
                return Err(CliError::Usage(format!(
                    "--field {field} disagrees with the {} field of {}",
                    arr.field(),
                    path.display()
                )));
            }
            let d = arr.hyperplanes().len();
            (star_from_arrangement(&arr)?, d, None)
        }
        None => {
            let (dim, d) = (
                a.dim.expect("required by clap"),
                a.d.expect("required by clap"),
            );
            if d < dim {
                return Err(CliError::Usage(format!(
                    "a star configuration needs d ≥ N (got d={d}, N={dim})"
                )));
            }
            let (z, _) = star_configuration_with_arrangement(dim, d, field, a.seed)?;
            (z, d, Some(a.seed))
        }
    };
    let e = engine(&a.engine, z.field())?;
    let t = e.alpha_table(&z, a.m_max)?;
    let dim = z.dim();
    // the closed forms describe characteristic zero
    let char0 = !matches!(z.field(), FieldSpec::Prime(_));
    let mut r = TableReport::new(
        "star",
        &t,
        |m| {
            if char0 {
                star_expected(dim, d, m)
            } else {
                None
            }
        },
        a.engine.certificate,
        true,
    );
    r.seed = seed;
    let code = table_code(&r, &t);
    Ok(Outcome::new(
        render_table_report(&r, &a.output, a.engine.certificate),
        &a.output,
        code,
    ))
}

fn fermat12(a: &FermatArgs) -> Result<Outcome, CliError> {
    check_m("--m-max", a.m_max)?;
    let field = parse_field(a.engine.field.as_deref(), FieldSpec::Eisenstein)?;
    let z = fermat12_configuration(field)?;
    let e = engine(&a.engine, field)?;
    let t = e.alpha_table(&z, a.m_max)?;
    let char0 = field == FieldSpec::Eisenstein;
    let r = TableReport::new(
        "fermat12",
        &t,
        |m| if char0 { fermat_expected(m) } else { None },
        a.engine.certificate,
        true,
    );
    let code = table_code(&r, &t);
    Ok(Outcome::new(
        render_table_report(&r, &a.output, a.engine.certificate),
        &a.output,
        code,
    ))
}

fn lemma(a: &LemmaArgs) -> Result<Outcome, CliError> {
    let domain = LemmaDomain {
        n_max: a.n_max,
        m_max: a.m_max,
        k_span: a.k_span,
        disc_max: a.disc_max,
    };
    let start = Instant::now();
    let report = verify_lemma(&domain).map_err(|e| match e {
        LemmaError::BoxTooLarge { .. } => CliError::Usage(e.to_string()),
    })?;
    let elapsed = start.elapsed();
    let text = match a.output.format {
        Format::Json => report.to_json(),
        Format::Csv => lemma_csv(&report),
        Format::Text => lemma_text(&report),
    };
    let code = if report.total_failures() == 0 {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    };
    let mut o = Outcome::new(text, &a.output, code);
    if let Some(path) = &a.report {
        o.files.push((path.clone(), report.to_json()));
    }
    o.notes.push(format!(
        "lemma: {} tuples in {:.3}s\n",
        domain.tuples(),
        elapsed.as_secs_f64()
    ));
    Ok(o)
}

fn lemma_csv(r: &LemmaReport) -> String {
    let mut out = String::from("check,kind,checked,failed\n");
    for (k, c) in &r.checks {
        out.push_str(&format!(
            "{},{},{},{}\n",
            check_name(*k),
            check_kind(*k),
            c.checked,
            c.failed
        ));
    }
    out
}

fn check_name(k: CheckKind) -> String {
    serde_json::to_value(k)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn check_kind(k: CheckKind) -> &'static str {
    if k.is_transcription() {
        "transcription"
    } else {
        "statement"
    }
}

fn lemma_text(r: &LemmaReport) -> String {
    let d = &r.domain;
    let mut out = format!(
        "lemma | N in [3,{}] m in [1,{}] k in [m+1,m+{}] | discriminant m,i <= {}\n",
        d.n_max, d.m_max, d.k_span, d.disc_max
    );
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|(k, c)| {
            vec![
                check_name(*k),
                check_kind(*k).into(),
                c.checked.to_string(),
                c.failed.to_string(),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &["check", "kind", "checked", "failed"],
        &rows,
    ));
    out.push_str(&format!("failures: {}\n", r.total_failures()));
    for f in r.failures.iter().take(20) {
        out.push_str(&format!(
            "FAIL {} {:?}: {}\n",
            check_name(f.check),
            f.params,
            f.detail
        ));
    }
    for f in &r.findings {
        out.push_str(&format!("finding [{}]: {}\n", f.kind, f.description));
    }
    out
}
