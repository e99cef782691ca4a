//! Verification reports and their text and record renderings.

use std::fmt::Write as _;
use std::time::Duration;

use gauge2::{AlgebraForm, ScalarForm};

/// Size of a residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Zero,
    NonZero(usize),
}

impl Residual {
    pub fn terms(&self) -> usize {
        match self {
            Residual::Zero => 0,
            Residual::NonZero(k) => *k,
        }
    }

    pub fn of_scalar(w: &ScalarForm) -> Self {
        match w.term_count() {
            0 => Residual::Zero,
            k => Residual::NonZero(k),
        }
    }

    pub fn of_algebra(w: &AlgebraForm) -> Self {
        match w.term_count() {
            0 => Residual::Zero,
            k => Residual::NonZero(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Residual::Zero
    }

    fn parse(s: &str) -> Option<Self> {
        if s == "ZERO" {
            return Some(Residual::Zero);
        }
        s.strip_prefix("NONZERO(")?
            .strip_suffix(')')?
            .parse()
            .ok()
            .map(Residual::NonZero)
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Residual::Zero => f.write_str("ZERO"),
            Residual::NonZero(k) => write!(f, "NONZERO({k})"),
        }
    }
}

/// One verified statement.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub suite: String,
    pub name: String,
    pub params: Vec<(String, String)>,
    pub residual: Residual,
    /// First nonzero residual component, present exactly when the check failed.
    pub witness: Option<String>,
}

impl CheckEntry {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn scalar(suite: &str, name: &str, params: Vec<(String, String)>, residual: &ScalarForm) -> Self {
        let witness = residual
            .first_component()
            .map(|(cov, p)| format!("{} : {p}", covectors(&cov)));
        CheckEntry {
            suite: suite.into(),
            name: name.into(),
            params,
            residual: Residual::of_scalar(residual),
            witness,
        }
    }

    pub fn algebra(
        suite: &str,
        name: &str,
        params: Vec<(String, String)>,
        residual: &AlgebraForm,
        labels: &[String],
    ) -> Self {
        let witness = residual
            .first_nonzero()
            .map(|(a, cov, p)| format!("{}[{}] {} : {p}", residual.side(), labels[a], covectors(&cov)));
        CheckEntry {
            suite: suite.into(),
            name: name.into(),
            params,
            residual: Residual::of_algebra(residual),
            witness,
        }
    }

    /// A pass/fail outcome described by a list of nonzero coefficients.
    pub fn coefficients(
        suite: &str,
        name: &str,
        params: Vec<(String, String)>,
        nonzero: &[(Vec<usize>, gauge2::Rational)],
    ) -> Self {
        CheckEntry {
            suite: suite.into(),
            name: name.into(),
            params,
            residual: if nonzero.is_empty() {
                Residual::Zero
            } else {
                Residual::NonZero(nonzero.len())
            },
            witness: nonzero.first().map(|(idx, v)| {
                let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                format!("({}) : {v}", idx.join(" "))
            }),
        }
    }
}

fn covectors(cov: &[usize]) -> String {
    if cov.is_empty() {
        "1".into()
    } else {
        cov.iter().map(|i| format!("dx{}", i + 1)).collect::<Vec<_>>().join(" ")
    }
}

/// Ordered checks plus informational lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    /// Module name of the scenario.
    pub scenario: String,
    pub n: usize,
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
    /// `EOM …`, `BOUNDARY …` and similar lines, in emission order.
    pub notes: Vec<String>,
    /// Wall time of the run; shown in text reports only.
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CheckEntry::passed)
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            entries: self
                .entries
                .iter()
                .map(|e| SummaryEntry {
                    suite: e.suite.clone(),
                    name: e.name.clone(),
                    params: e.params.clone(),
                    passed: e.passed(),
                    residual: e.residual.clone(),
                    witness: e.witness.clone(),
                })
                .collect(),
            notes: self.notes.clone(),
            passed: self.passed(),
        }
    }
}

/// Timing-free content of a report, recoverable from the records format.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub entries: Vec<SummaryEntry>,
    pub notes: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryEntry {
    pub suite: String,
    pub name: String,
    pub params: Vec<(String, String)>,
    pub passed: bool,
    pub residual: Residual,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn overall(r: &Report) -> String {
    format!("OVERALL {} ({} checks)", status(r.passed()), r.entries.len())
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Text => emit_text(r),
        Format::Records => emit_records(r),
    }
}

fn emit_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gauge2 report: scenario {} seed {}", r.scenario, r.seed);
    for e in &r.entries {
        let params: String = e.params.iter().map(|(k, v)| format!(" {k}={v}")).collect();
        let _ = writeln!(
            out,
            "CHECK {}/{} n={} module={} seed={}{} : {} residual_terms={}",
            e.suite,
            e.name,
            r.n,
            r.scenario,
            r.seed,
            params,
            status(e.passed()),
            e.residual.terms()
        );
        if let Some(w) = &e.witness {
            let _ = writeln!(out, "  witness {w}");
        }
    }
    for note in &r.notes {
        let _ = writeln!(out, "{note}");
    }
    let _ = writeln!(out, "{} in {:.1} ms", overall(r), r.elapsed.as_secs_f64() * 1e3);
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '%' => out.push_str("%25"),
            ';' => out.push_str("%3B"),
            '=' => out.push_str("%3D"),
            '\n' => out.push_str("%0A"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    s.replace("%3B", ";")
        .replace("%3D", "=")
        .replace("%0A", "\n")
        .replace("%25", "%")
}

fn emit_records(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "kind=header;scenario={};n={};seed={}",
        escape(&r.scenario),
        r.n,
        r.seed
    );
    for e in &r.entries {
        let _ = write!(out, "kind=check;suite={};check={}", escape(&e.suite), escape(&e.name));
        for (k, v) in &e.params {
            let _ = write!(out, ";param.{}={}", escape(k), escape(v));
        }
        let _ = write!(out, ";status={};residual={}", status(e.passed()), e.residual);
        if let Some(w) = &e.witness {
            let _ = write!(out, ";witness={}", escape(w));
        }
        out.push('\n');
    }
    for note in &r.notes {
        let _ = writeln!(out, "kind=note;text={}", escape(note));
    }
    let _ = writeln!(
        out,
        "kind=overall;status={};checks={}",
        status(r.passed()),
        r.entries.len()
    );
    out
}

/// Parses the records format back into a summary.
pub fn parse_records(text: &str) -> Result<ReportSummary, String> {
    let mut entries = Vec::new();
    let mut notes = Vec::new();
    let mut overall: Option<(bool, usize)> = None;
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<(String, String)> = line
            .split(';')
            .map(|f| {
                f.split_once('=')
                    .map(|(k, v)| (unescape(k), unescape(v)))
                    .ok_or_else(|| format!("line {}: field without '='", i + 1))
            })
            .collect::<Result<_, _>>()?;
        let get = |key: &str| -> Result<&str, String> {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| format!("line {}: missing '{key}'", i + 1))
        };
        match get("kind")? {
            "header" => {}
            "check" => {
                let passed = match get("status")? {
                    "PASS" => true,
                    "FAIL" => false,
                    other => return Err(format!("line {}: bad status '{other}'", i + 1)),
                };
                entries.push(SummaryEntry {
                    suite: get("suite")?.to_string(),
                    name: get("check")?.to_string(),
                    params: fields
                        .iter()
                        .filter_map(|(k, v)| k.strip_prefix("param.").map(|k| (k.to_string(), v.clone())))
                        .collect(),
                    passed,
                    residual: Residual::parse(get("residual")?)
                        .ok_or_else(|| format!("line {}: bad residual", i + 1))?,
                    witness: get("witness").ok().map(str::to_string),
                });
            }
            "note" => notes.push(get("text")?.to_string()),
            "overall" => {
                let checks = get("checks")?
                    .parse()
                    .map_err(|_| format!("line {}: bad count", i + 1))?;
                overall = Some((get("status")? == "PASS", checks));
            }
            other => return Err(format!("line {}: unknown kind '{other}'", i + 1)),
        }
    }
    let (passed, count) = overall.ok_or("missing overall line")?;
    if count != entries.len() {
        return Err(format!("overall line counts {count} checks, found {}", entries.len()));
    }
    Ok(ReportSummary { entries, notes, passed })
}
