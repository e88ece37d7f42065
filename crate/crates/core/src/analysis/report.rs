//! Table reports in JSON, CSV and aligned text.
//!
//! Rationals are printed as `a/b`. Decimal approximations appear only when
//! asked for, in extra CSV columns or after the exact value in text.

use serde::Serialize;

use super::alpha::{AlphaTable, ConfigRef};
use super::bounds::{bounds_report, demailly_ratio, ratio, to_decimal, BoundsReport, Ratio};
use crate::poly::Certificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Match,
    Mismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Match => "MATCH",
            Status::Mismatch => "MISMATCH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub m: u32,
    pub alpha: u32,
    #[serde(serialize_with = "super::bounds::ser_ratio")]
    pub alpha_over_m: Ratio,
    #[serde(serialize_with = "super::bounds::ser_ratio")]
    pub demailly_ratio: Ratio,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: ConfigRef,
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<BoundsReport>,
    pub warnings: Vec<String>,
}

impl TableReport {
    /// Rows for every m in the table; `expected(m)` supplies closed-form
    /// values to compare against.
    pub fn new(
        command: &str,
        t: &AlphaTable,
        expected: impl Fn(u32) -> Option<u32>,
        with_certificates: bool,
        with_summary: bool,
    ) -> Self {
        let rows = t
            .values
            .iter()
            .map(|v| {
                let exp = expected(v.m);
                TableRow {
                    m: v.m,
                    alpha: v.alpha,
                    alpha_over_m: ratio(v.alpha as i64, v.m as i64),
                    demailly_ratio: demailly_ratio(v.alpha, v.m, t.dim()),
                    provenance: v.provenance.to_string(),
                    expected: exp,
                    status: exp.map(|e| {
                        if e == v.alpha {
                            Status::Match
                        } else {
                            Status::Mismatch
                        }
                    }),
                    certificate: if with_certificates {
                        v.certificate.as_ref().map(|f| f.to_certificate())
                    } else {
                        None
                    },
                }
            })
            .collect();
        TableReport {
            command: command.to_string(),
            version: crate::VERSION.to_string(),
            seed: None,
            config: t.config.clone(),
            rows,
            summary: with_summary.then(|| bounds_report(t)),
            warnings: t.warnings.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn has_mismatch(&self) -> bool {
        self.rows.iter().any(|r| r.status == Some(Status::Mismatch))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// One header line and one line per m.
    pub fn to_csv(&self, decimals: Option<u32>) -> String {
        let with_expected = self.rows.iter().any(|r| r.expected.is_some());
        let mut header = vec!["m", "alpha", "alpha_over_m", "demailly_ratio", "provenance"];
        if with_expected {
            header.extend(["expected", "status"]);
        }
        if decimals.is_some() {
            header.extend(["alpha_over_m_decimal", "demailly_ratio_decimal"]);
        }
        let mut out = header.join(",") + "\n";
        for r in &self.rows {
            let mut cells = vec![
                r.m.to_string(),
                r.alpha.to_string(),
                r.alpha_over_m.to_string(),
                r.demailly_ratio.to_string(),
                r.provenance.clone(),
            ];
            if with_expected {
                cells.push(r.expected.map_or(String::new(), |e| e.to_string()));
                cells.push(r.status.map_or("", Status::as_str).to_string());
            }
            if let Some(p) = decimals {
                cells.push(to_decimal(&r.alpha_over_m, p));
                cells.push(to_decimal(&r.demailly_ratio, p));
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self, decimals: Option<u32>) -> String {
        let show = |r: &Ratio| match decimals {
            Some(p) => format!("{r} (~{})", to_decimal(r, p)),
            None => r.to_string(),
        };
        let with_expected = self.rows.iter().any(|r| r.expected.is_some());
        let mut header = vec!["m", "alpha", "alpha/m", "demailly_ratio", "provenance"];
        if with_expected {
            header.extend(["expected", "status"]);
        }
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![
                    r.m.to_string(),
                    r.alpha.to_string(),
                    show(&r.alpha_over_m),
                    show(&r.demailly_ratio),
                    r.provenance.clone(),
                ];
                if with_expected {
                    cells.push(r.expected.map_or("-".into(), |e| e.to_string()));
                    cells.push(r.status.map_or("-", Status::as_str).to_string());
                }
                cells
            })
            .collect();
        let mut out = format!(
            "{} | {} | N={} s={} field={} | hash {}\n",
            self.command,
            self.config.label,
            self.config.dim,
            self.config.points,
            self.config.field,
            self.config.hash
        );
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed {seed}\n"));
        }
        out.push_str(&render_table(&header, &rows));
        if let Some(b) = &self.summary {
            let lines = [
                ("waldschmidt_upper", show(&b.waldschmidt_upper)),
                ("els_lower", show(&b.els_lower)),
                ("ev_lower", show(&b.ev_lower)),
                ("floor_root", b.floor_root.to_string()),
                ("chain", verdict(b.chain_holds).into()),
                ("ev_check", verdict(b.ev.holds()).into()),
                ("demailly", b.demailly.summary()),
            ];
            out.push('\n');
            out.push_str(&render_table(
                &["bound", "value"],
                &lines
                    .iter()
                    .map(|(k, v)| vec![k.to_string(), v.clone()])
                    .collect::<Vec<_>>(),
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

/// Left-aligned columns separated by two spaces, with a dashed rule under
/// the header.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out.push_str(&line(
        widths
            .iter()
            .map(|&w| "-".repeat(w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
